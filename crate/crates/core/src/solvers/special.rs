use super::{greedy_sync, SolveError, SolverConfig};
use crate::automata::{SemiAutomaton, Symbol, Word};
use crate::commutative::ShuffleComponent;
use crate::unary::UnaryComponent;

/// Synchronization using letters of `gamma` only. The empty letter set
/// admits only `ε`.
pub fn solve_gamma_star(sa: &SemiAutomaton, gamma: &[Symbol]) -> Option<Word> {
    if gamma.is_empty() {
        return (sa.num_states() == 1).then(Word::empty);
    }
    let restricted = sa.restrict(gamma).expect("letters come from the alphabet");
    greedy_sync(&restricted).map(|w| Word::new(w.letters().iter().map(|&i| gamma[i]).collect()))
}

/// Synchronization inside `a^* ⧢ {b}`: the first probe `a^i b a^{n-1}`,
/// `0 ≤ i < n`, with a singleton image.
pub fn solve_star_single(sa: &SemiAutomaton, a: Symbol, b: Symbol) -> Option<Word> {
    let n = sa.num_states();
    (0..n).find_map(|i| {
        let mut w = Word::power(a, i);
        w.push(b);
        w.extend_with(&Word::power(a, n - 1));
        sa.synchronizes(&w).then_some(w)
    })
}

/// Tries every distinct interleaving of the fixed letter multiset of an
/// all-singleton component, in lexicographic order.
pub fn solve_finite_component(
    sa: &SemiAutomaton,
    c: &ShuffleComponent,
    config: &SolverConfig,
) -> Result<Option<Word>, SolveError> {
    let mut letters = Vec::new();
    for (x, part) in c.parts.iter().enumerate() {
        let UnaryComponent::Singleton { n } = *part else {
            return Err(SolveError::InfiniteComponent);
        };
        let len = letters.len() as u64 + n;
        if len > config.max_finite_len as u64 {
            return Err(SolveError::FiniteTooLong {
                len,
                limit: config.max_finite_len,
            });
        }
        letters.extend(std::iter::repeat_n(x, n as usize));
    }
    // letters is sorted ascending: the smallest permutation
    loop {
        let w = Word::new(letters.clone());
        if sa.synchronizes(&w) {
            return Ok(Some(w));
        }
        if !next_permutation(&mut letters) {
            return Ok(None);
        }
    }
}

fn next_permutation(v: &mut [Symbol]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a larger suffix element");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

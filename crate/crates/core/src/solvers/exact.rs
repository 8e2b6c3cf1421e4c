use super::{Method, SolveError, SolveResult, SolverConfig};
use crate::automata::{PartialDfa, SemiAutomaton, State, StateSet, Symbol, Word};

/// Breadth-first search over `(image of Q, constraint state)` pairs.
///
/// Letters are tried in alphabet order and goals are tested on discovery, so
/// the witness is the shortlex-first synchronizing word accepted by `b`.
pub fn exact_constrained(
    sa: &SemiAutomaton,
    b: &PartialDfa,
    config: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    sa.alphabet().ensure_same(b.alphabet())?;
    sa.ensure_set_capable()?;
    let n = sa.num_states();
    let required = if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n).saturating_mul(b.num_states() as u128)
    };
    if required > config.max_space as u128 {
        return Err(SolveError::TooLarge {
            required,
            limit: config.max_space,
        });
    }

    let k = sa.num_symbols();
    let start = (sa.full_set(), b.initial());
    let is_goal = |(s, p): (StateSet, State)| s.len() == 1 && b.is_final(p);

    // dense visited table indexed by (image bits, constraint state)
    let np = b.num_states();
    let slot = |(s, p): (StateSet, State)| s.bits() as usize * np + p;
    let mut seen = vec![false; (1usize << n) * np];
    let mut nodes: Vec<(StateSet, State)> = vec![start];
    let mut parent: Vec<(usize, Symbol)> = vec![(usize::MAX, 0)];
    seen[slot(start)] = true;

    let mut found = is_goal(start).then_some(0);
    let mut head = 0;
    while found.is_none() && head < nodes.len() {
        let (s, p) = nodes[head];
        for x in 0..k {
            let Some(p2) = b.step(p, x) else { continue };
            let next = (sa.step_set(s, x), p2);
            if std::mem::replace(&mut seen[slot(next)], true) {
                continue;
            }
            nodes.push(next);
            parent.push((head, x));
            if is_goal(next) {
                found = Some(nodes.len() - 1);
                break;
            }
        }
        head += 1;
    }

    let explored = nodes.len();
    match found {
        None => Ok(SolveResult::no(Method::Exact, explored)),
        Some(mut i) => {
            let mut letters = Vec::new();
            while parent[i].0 != usize::MAX {
                letters.push(parent[i].1);
                i = parent[i].0;
            }
            letters.reverse();
            SolveResult::yes(sa, Word::new(letters), Method::Exact, explored, |w| b.accepts(w))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Alphabet;

    fn epsilon_only(k: usize) -> PartialDfa {
        let alphabet = Alphabet::letters(k).unwrap();
        PartialDfa::new(alphabet, 1, 0, vec![0], vec![None; k]).unwrap()
    }

    #[test]
    fn epsilon_constraint() {
        let one = SemiAutomaton::from_maps(Alphabet::letters(1).unwrap(), &[vec![0]]).unwrap();
        let r = exact_constrained(&one, &epsilon_only(1), &SolverConfig::default()).unwrap();
        assert_eq!(r.witness(), Some(&Word::empty()));
        let two = SemiAutomaton::from_maps(Alphabet::letters(1).unwrap(), &[vec![0, 0]]).unwrap();
        let r = exact_constrained(&two, &epsilon_only(1), &SolverConfig::default()).unwrap();
        assert!(!r.is_yes());
    }

    #[test]
    fn guard_reports_bound() {
        let sa = SemiAutomaton::from_maps(Alphabet::letters(1).unwrap(), &[vec![0; 21]]).unwrap();
        let err = exact_constrained(&sa, &epsilon_only(1), &SolverConfig::default()).unwrap_err();
        assert!(matches!(err, SolveError::TooLarge { required, .. } if required == 1 << 21));
    }

    #[test]
    fn alphabet_mismatch_rejected() {
        let sa = SemiAutomaton::from_maps(Alphabet::letters(1).unwrap(), &[vec![0]]).unwrap();
        assert!(exact_constrained(&sa, &epsilon_only(2), &SolverConfig::default()).is_err());
    }
}

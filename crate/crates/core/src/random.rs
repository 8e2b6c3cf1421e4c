//! Random instances for tests and fuzzing.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automata::{Alphabet, Dfa, PartialDfa, SemiAutomaton, State, StateSet};
use crate::commutative::{Decomposition, ShuffleComponent};
use crate::unary::UnaryComponent;
use crate::vectors::{ConstraintVector, ExtNat, VectorSet};

pub fn semi_automaton<R: Rng>(rng: &mut R, n: usize, k: usize) -> SemiAutomaton {
    let maps: Vec<Vec<State>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..n)).collect()).collect();
    SemiAutomaton::from_maps(Alphabet::letters(k).expect("k in range"), &maps).expect("valid maps")
}

pub fn dfa<R: Rng>(rng: &mut R, n: usize, k: usize) -> Dfa {
    let base = semi_automaton(rng, n, k);
    let finals: Vec<State> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    base.with_initial(0, finals).expect("valid finals")
}

/// Each transition is undefined with probability `p_missing`.
pub fn partial_dfa<R: Rng>(rng: &mut R, n: usize, k: usize, p_missing: f64) -> PartialDfa {
    let delta = (0..n * k)
        .map(|_| (!rng.gen_bool(p_missing)).then(|| rng.gen_range(0..n)))
        .collect();
    let finals: Vec<State> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    PartialDfa::new(Alphabet::letters(k).expect("k in range"), n, 0, finals, delta).expect("valid table")
}

pub fn unary_dfa<R: Rng>(rng: &mut R, n: usize) -> Dfa {
    dfa(rng, n, 1)
}

/// Non-empty random subset of `0..n`.
pub fn subset<R: Rng>(rng: &mut R, n: usize) -> StateSet {
    loop {
        let s: StateSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// Exponent set with entries below `max`; a progression with probability
/// `p_infinite`.
pub fn unary_component<R: Rng>(rng: &mut R, max: u64, p_infinite: f64) -> UnaryComponent {
    if rng.gen_bool(p_infinite) {
        UnaryComponent::progression(rng.gen_range(0..max), rng.gen_range(1..=max.max(1)))
    } else {
        UnaryComponent::singleton(rng.gen_range(0..max))
    }
}

pub fn decomposition<R: Rng>(rng: &mut R, k: usize, components: usize, max: u64, p_infinite: f64) -> Decomposition {
    let comps = (0..components)
        .map(|_| ShuffleComponent::new((0..k).map(|_| unary_component(rng, max, p_infinite)).collect()))
        .collect();
    Decomposition::new(Alphabet::letters(k).expect("k in range"), comps).expect("well formed")
}

pub fn vector<R: Rng>(rng: &mut R, k: usize, max: u64, p_inf: f64) -> ConstraintVector {
    ConstraintVector(
        (0..k)
            .map(|_| {
                if rng.gen_bool(p_inf) {
                    ExtNat::Inf
                } else {
                    ExtNat::Fin(rng.gen_range(0..=max))
                }
            })
            .collect(),
    )
}

pub fn vector_set<R: Rng>(rng: &mut R, k: usize, count: usize, max: u64, p_inf: f64) -> VectorSet {
    VectorSet::new(k, (0..count).map(|_| vector(rng, k, max, p_inf))).expect("uniform length")
}

/// A DFA for the same language with states permuted, some states split into
/// bisimilar copies, and some unreachable junk added.
pub fn scramble<R: Rng>(rng: &mut R, d: &Dfa, copies: usize, junk: usize) -> Dfa {
    let k = d.alphabet().len();
    let n = d.num_states();
    let mut delta: Vec<State> = (0..n).flat_map(|q| (0..k).map(move |x| (q, x))).map(|(q, x)| d.step(q, x)).collect();
    let mut finals: Vec<bool> = (0..n).map(|q| d.is_final(q)).collect();
    let mut total = n;

    for _ in 0..copies {
        let orig = rng.gen_range(0..n);
        let copy = total;
        total += 1;
        let row: Vec<State> = delta[orig * k..orig * k + k].to_vec();
        delta.extend(row);
        finals.push(finals[orig]);
        // redirect some transitions into `orig` towards the copy
        for t in delta.iter_mut() {
            if *t == orig && rng.gen_bool(0.5) {
                *t = copy;
            }
        }
    }
    for _ in 0..junk {
        total += 1;
        let row: Vec<State> = (0..k).map(|_| rng.gen_range(0..total)).collect();
        delta.extend(row);
        finals.push(rng.gen_bool(0.5));
    }

    let mut perm: Vec<State> = (0..total).collect();
    perm.shuffle(rng);
    let base = SemiAutomaton::new(d.alphabet().clone(), total, delta).expect("rows cover all states");
    let mixed = Dfa::new(base, d.initial(), (0..total).filter(|&q| finals[q])).expect("valid finals");
    mixed.permuted(&perm).expect("permutation of all states")
}

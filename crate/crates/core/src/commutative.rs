//! Commutativity testing, the commutative (per-letter product) automaton, and
//! the shuffle-union decomposition of a commutative regular language.
//!
//! A commutative language over `a_1..a_k` is a finite union of components
//! `U_1 ⧢ ... ⧢ U_k`, where `U_j ⊆ a_j^*` is a [`UnaryComponent`]. Membership
//! of a word in such a language depends only on its letter counts.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::automata::{Alphabet, AutomatonError, Dfa, PartialDfa, SemiAutomaton, State, Word};
use crate::unary::{chain, exponent_set_in_chain, Chain, UnaryComponent};

/// Decomposition is guarded at this alphabet size; the commutative automaton
/// has up to `n^k` states.
pub const MAX_DECOMPOSE_ALPHABET: usize = 4;

/// Limit on tuple states of a commutative automaton and on the state count
/// of [`decomposition_to_dfa`].
pub const MAX_PRODUCT_STATES: usize = 1 << 22;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("constraint language is not commutative")]
    NonCommutative,
    #[error("alphabet has {k} symbols; decomposition supports at most {MAX_DECOMPOSE_ALPHABET}")]
    AlphabetTooLarge { k: usize },
    #[error("construction needs {states} states, limit is {limit}")]
    TooLarge { states: usize, limit: usize },
    #[error("component {index} has {got} parts, alphabet has {k} symbols")]
    ArityMismatch { index: usize, got: usize, k: usize },
    #[error("component {index} has a progression with period 0")]
    ZeroPeriod { index: usize },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// `U_1 ⧢ ... ⧢ U_k` with one unary part per letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ShuffleComponent {
    pub parts: Vec<UnaryComponent>,
}

impl ShuffleComponent {
    pub fn new(parts: Vec<UnaryComponent>) -> Self {
        Self { parts }
    }

    /// Membership by letter-count profile.
    pub fn accepts_counts(&self, counts: &[usize]) -> bool {
        self.parts.len() == counts.len()
            && self
                .parts
                .iter()
                .zip(counts)
                .all(|(part, &c)| part.contains(c as u64))
    }

    pub fn is_finite(&self) -> bool {
        self.parts.iter().all(UnaryComponent::is_finite)
    }
}

/// Finite union of shuffle components; no components means the empty language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    alphabet: Alphabet,
    components: Vec<ShuffleComponent>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecompositionDoc {
    alphabet: Vec<String>,
    components: Vec<ShuffleComponent>,
}

impl Decomposition {
    pub fn new(alphabet: Alphabet, components: Vec<ShuffleComponent>) -> Result<Self, DecompositionError> {
        let k = alphabet.len();
        for (index, c) in components.iter().enumerate() {
            if c.parts.len() != k {
                return Err(DecompositionError::ArityMismatch {
                    index,
                    got: c.parts.len(),
                    k,
                });
            }
            if !c.parts.iter().all(UnaryComponent::is_valid) {
                return Err(DecompositionError::ZeroPeriod { index });
            }
        }
        Ok(Self { alphabet, components })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn components(&self) -> &[ShuffleComponent] {
        &self.components
    }

    pub fn is_empty_language(&self) -> bool {
        self.components.is_empty()
    }

    pub fn accepts_counts(&self, counts: &[usize]) -> bool {
        self.components.iter().any(|c| c.accepts_counts(counts))
    }

    pub fn from_json(text: &str) -> Result<Self, DecompositionError> {
        let doc: DecompositionDoc =
            serde_json::from_str(text).map_err(|e| AutomatonError::Malformed(e.to_string()))?;
        Self::new(Alphabet::new(doc.alphabet)?, doc.components)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(DecompositionDoc {
            alphabet: self.alphabet.symbols().to_vec(),
            components: self.components.clone(),
        })
        .expect("decompositions serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("decompositions serialize")
    }
}

pub fn component_member(c: &ShuffleComponent, w: &Word) -> bool {
    c.accepts_counts(&w.parikh(c.parts.len()))
}

pub fn decomposition_member(dec: &Decomposition, w: &Word) -> bool {
    dec.accepts_counts(&w.parikh(dec.alphabet.len()))
}

/// A state `q` and letters `x < y` of the minimal DFA with `δ(q,xy) ≠ δ(q,yx)`.
pub fn commutation_defect(d: &Dfa) -> Option<(State, usize, usize)> {
    let m = crate::automata::minimize(d);
    let k = m.alphabet().len();
    for q in 0..m.num_states() {
        for x in 0..k {
            for y in x + 1..k {
                if m.step(m.step(q, x), y) != m.step(m.step(q, y), x) {
                    return Some((q, x, y));
                }
            }
        }
    }
    None
}

/// Whether `L(d)` is commutative, via pairwise letter commutation in the
/// minimal DFA.
pub fn is_commutative(d: &Dfa) -> bool {
    commutation_defect(d).is_none()
}

/// Product of the per-letter chains of a DFA from its initial state.
///
/// State numbering is mixed radix: the tuple of chain positions
/// `(p_1, .., p_k)` is state `Σ p_j * stride_j` with `stride_1 = 1`.
#[derive(Clone, Debug)]
pub struct CommutativeAutomaton {
    dfa: Dfa,
    chains: Vec<Chain>,
    strides: Vec<usize>,
}

impl CommutativeAutomaton {
    /// Builds the product without checking commutativity of `L(d)`. For
    /// non-commutative input the result generally accepts a different language.
    pub fn build_unchecked(d: &Dfa) -> Result<Self, DecompositionError> {
        let k = d.alphabet().len();
        let chains: Vec<Chain> = (0..k).map(|j| chain(d.base(), d.initial(), j)).collect();
        let mut strides = Vec::with_capacity(k);
        let mut total = 1usize;
        for c in &chains {
            strides.push(total);
            total = total
                .checked_mul(c.states.len())
                .filter(|&t| t <= MAX_PRODUCT_STATES)
                .ok_or(DecompositionError::TooLarge {
                    states: usize::MAX,
                    limit: MAX_PRODUCT_STATES,
                })?;
        }

        let mut delta = vec![0; total * k];
        for t in 0..total {
            for (j, c) in chains.iter().enumerate() {
                let pos = (t / strides[j]) % c.states.len();
                let next = c.advance(pos);
                delta[t * k + j] = t - pos * strides[j] + next * strides[j];
            }
        }
        let base = SemiAutomaton::new(d.alphabet().clone(), total, delta)?;

        // E: tuples t with (t, q) reachable in the synchronous product and q final
        let mut finals = vec![false; total];
        let mut seen: HashSet<(State, State)> = HashSet::new();
        let start = (0, d.initial());
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some((t, q)) = queue.pop_front() {
            if d.is_final(q) {
                finals[t] = true;
            }
            for x in 0..k {
                let next = (base.step(t, x), d.step(q, x));
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        let finals: Vec<State> = (0..total).filter(|&t| finals[t]).collect();
        let dfa = Dfa::new(base, 0, finals)?;
        Ok(Self { dfa, chains, strides })
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    /// Chain positions of a tuple state.
    pub fn positions(&self, t: State) -> Vec<usize> {
        self.chains
            .iter()
            .zip(&self.strides)
            .map(|(c, &s)| (t / s) % c.states.len())
            .collect()
    }

    /// Original-automaton states `(s_1, .., s_k)` of a tuple state.
    pub fn tuple(&self, t: State) -> Vec<State> {
        self.positions(t)
            .into_iter()
            .zip(&self.chains)
            .map(|(p, c)| c.states[p])
            .collect()
    }

    pub fn final_tuples(&self) -> Vec<State> {
        self.dfa.finals()
    }
}

pub fn commutative_automaton(d: &Dfa) -> Result<CommutativeAutomaton, DecompositionError> {
    if !is_commutative(d) {
        return Err(DecompositionError::NonCommutative);
    }
    CommutativeAutomaton::build_unchecked(d)
}

/// Shuffle-union form of `L(b)`: one component per final tuple of the
/// commutative automaton, with part `j` the exponents of `a_j` leading from
/// the initial state to the tuple's `j`-th state in the completed `b`.
pub fn decompose(b: &PartialDfa) -> Result<Decomposition, DecompositionError> {
    let k = b.alphabet().len();
    if k > MAX_DECOMPOSE_ALPHABET {
        return Err(DecompositionError::AlphabetTooLarge { k });
    }
    let d = b.complete();
    let cd = commutative_automaton(&d)?;
    let components = cd
        .final_tuples()
        .into_iter()
        .map(|t| {
            let parts = cd
                .positions(t)
                .into_iter()
                .zip(cd.chains())
                .map(|(p, c)| {
                    exponent_set_in_chain(c, c.states[p]).expect("tuple states lie on their chain")
                })
                .collect();
            ShuffleComponent::new(parts)
        })
        .collect();
    Decomposition::new(b.alphabet().clone(), components)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Per-letter saturated counter: exact counts below `threshold`, then counts
/// modulo `modulus`.
#[derive(Clone, Copy, Debug)]
struct Counter {
    threshold: u64,
    modulus: u64,
}

impl Counter {
    fn size(self) -> usize {
        (self.threshold + self.modulus) as usize
    }

    fn next(self, c: u64) -> u64 {
        if c + 1 < self.threshold {
            c + 1
        } else {
            let r = (c + 1 - self.threshold) % self.modulus;
            self.threshold + r
        }
    }
}

/// Complete DFA accepting exactly the words whose letter counts satisfy some
/// component.
///
/// Letter `j` is tracked exactly up to one past the largest singleton or
/// progression start among all components, then modulo the lcm of the
/// periods. Class `c` is represented by the count `c` itself.
pub fn decomposition_to_dfa(dec: &Decomposition) -> Result<Dfa, DecompositionError> {
    let k = dec.alphabet.len();
    let counters: Vec<Counter> = (0..k)
        .map(|j| {
            let mut threshold = 0u64;
            let mut modulus = 1u64;
            for c in &dec.components {
                let part = c.parts[j];
                threshold = threshold.max(part.least() + 1);
                if let UnaryComponent::Progression { period, .. } = part {
                    modulus = modulus / gcd(modulus, period) * period;
                }
            }
            Counter {
                threshold: threshold.max(1),
                modulus,
            }
        })
        .collect();

    let mut total = 1usize;
    let mut strides = Vec::with_capacity(k);
    for c in &counters {
        strides.push(total);
        total = total
            .checked_mul(c.size())
            .filter(|&t| t <= MAX_PRODUCT_STATES)
            .ok_or(DecompositionError::TooLarge {
                states: usize::MAX,
                limit: MAX_PRODUCT_STATES,
            })?;
    }

    let mut delta = vec![0; total * k];
    let mut finals = Vec::new();
    let mut counts = vec![0usize; k];
    for t in 0..total {
        for j in 0..k {
            counts[j] = (t / strides[j]) % counters[j].size();
        }
        for (j, ctr) in counters.iter().enumerate() {
            let c = counts[j] as u64;
            let next = ctr.next(c) as usize;
            delta[t * k + j] = t - counts[j] * strides[j] + next * strides[j];
        }
        if dec.accepts_counts(&counts) {
            finals.push(t);
        }
    }
    let base = SemiAutomaton::new(dec.alphabet.clone(), total, delta)?;
    Ok(Dfa::new(base, 0, finals)?)
}

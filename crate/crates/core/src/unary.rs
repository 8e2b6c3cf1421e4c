//! Single-letter behaviour of a semi-automaton: index and period of a chain,
//! exponent sets reaching a target, cycle states, and the unary
//! set-synchronization test.

use serde::{Deserialize, Serialize};

use crate::automata::{AutomatonError, SemiAutomaton, State, StateSet, Symbol, Word};

/// Exponent set `{n}` or `{first + t * period : t >= 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum UnaryComponent {
    Singleton { n: u64 },
    Progression { first: u64, period: u64 },
}

impl UnaryComponent {
    pub fn singleton(n: u64) -> Self {
        Self::Singleton { n }
    }

    /// Panics if `period == 0`.
    pub fn progression(first: u64, period: u64) -> Self {
        assert!(period >= 1, "progression period must be positive");
        Self::Progression { first, period }
    }

    /// `{a}^*`.
    pub fn star() -> Self {
        Self::Progression { first: 0, period: 1 }
    }

    pub fn contains(&self, count: u64) -> bool {
        match *self {
            Self::Singleton { n } => count == n,
            Self::Progression { first, period } => count >= first && (count - first).is_multiple_of(period),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Singleton { .. })
    }

    /// Smallest exponent in the set.
    pub fn least(&self) -> u64 {
        match *self {
            Self::Singleton { n } => n,
            Self::Progression { first, .. } => first,
        }
    }

    /// Smallest member `>= count`, if any.
    pub fn next_at_least(&self, count: u64) -> Option<u64> {
        match *self {
            Self::Singleton { n } => (n >= count).then_some(n),
            Self::Progression { first, period } => {
                if count <= first {
                    Some(first)
                } else {
                    let steps = (count - first).div_ceil(period);
                    Some(first + steps * period)
                }
            }
        }
    }

    pub fn is_valid(&self) -> bool {
        !matches!(self, Self::Progression { period: 0, .. })
    }
}

/// `i >= 0, p >= 1` with `δ(start, a^i) = δ(start, a^{i+p})`, `i + p` minimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexPeriod {
    pub index: usize,
    pub period: usize,
}

/// The states `δ(start, a^0), δ(start, a^1), ...` up to the first repetition,
/// together with the position the last state loops back to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub states: Vec<State>,
    pub loop_start: usize,
}

impl Chain {
    pub fn index_period(&self) -> IndexPeriod {
        IndexPeriod {
            index: self.loop_start,
            period: self.states.len() - self.loop_start,
        }
    }

    pub fn position(&self, q: State) -> Option<usize> {
        self.states.iter().position(|&s| s == q)
    }

    /// Position reached after one more letter from position `pos`.
    pub fn advance(&self, pos: usize) -> usize {
        if pos + 1 < self.states.len() {
            pos + 1
        } else {
            self.loop_start
        }
    }
}

pub fn chain(sa: &SemiAutomaton, start: State, letter: Symbol) -> Chain {
    let mut pos = vec![usize::MAX; sa.num_states()];
    let mut states = Vec::new();
    let mut q = start;
    while pos[q] == usize::MAX {
        pos[q] = states.len();
        states.push(q);
        q = sa.step(q, letter);
    }
    Chain {
        states,
        loop_start: pos[q],
    }
}

pub fn chain_index_period(sa: &SemiAutomaton, start: State, letter: Symbol) -> IndexPeriod {
    chain(sa, start, letter).index_period()
}

/// `{e >= 0 : δ(start, letter^e) = target}`, or `None` if `target` is never hit.
///
/// Targets on the tail give a singleton; targets on the cycle give a
/// progression whose first element is the first hit.
pub fn exponent_set(
    sa: &SemiAutomaton,
    start: State,
    letter: Symbol,
    target: State,
) -> Option<UnaryComponent> {
    let c = chain(sa, start, letter);
    exponent_set_in_chain(&c, target)
}

pub(crate) fn exponent_set_in_chain(c: &Chain, target: State) -> Option<UnaryComponent> {
    let e = c.position(target)?;
    let IndexPeriod { index, period } = c.index_period();
    Some(if e < index {
        UnaryComponent::singleton(e as u64)
    } else {
        UnaryComponent::progression(e as u64, period as u64)
    })
}

/// States on `letter`-cycles: `δ(Q, letter^{n-1})`.
pub fn cycle_states(sa: &SemiAutomaton, letter: Symbol) -> Result<StateSet, AutomatonError> {
    let n = sa.num_states();
    sa.apply_word_set(sa.full_set(), &Word::power(letter, n - 1))
}

/// Whether some power of `letter` maps `s` to a single state, decided by
/// testing exponent `n - 1` only.
pub fn unary_set_synchronizes(
    sa: &SemiAutomaton,
    s: StateSet,
    letter: Symbol,
) -> Result<bool, AutomatonError> {
    let n = sa.num_states();
    Ok(sa.apply_word_set(s, &Word::power(letter, n - 1))?.len() == 1)
}

//! Decision procedures for (constrained) synchronization: greedy pair merging,
//! exhaustive search over image/constraint pairs, the polynomial special
//! cases, and a dispatcher over decomposed commutative constraints.

mod exact;
mod greedy;
mod special;

use std::fmt;

use serde_json::{json, Value};

pub use exact::exact_constrained;
pub use greedy::greedy_sync;
pub use special::{solve_finite_component, solve_gamma_star, solve_star_single};

use crate::automata::io::word_to_json;
use crate::automata::{Alphabet, AutomatonError, PartialDfa, SemiAutomaton, Symbol, Word};
use crate::commutative::{
    component_member, decompose, decomposition_member, decomposition_to_dfa, Decomposition, DecompositionError,
    ShuffleComponent,
};
use crate::vectors::{component_vectors, maximal_vectors, normalize_infinite, vector_of, ConstraintVector, ExtNat};

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("instance too large: search space needs {required} states, limit is {limit}")]
    TooLarge { required: u128, limit: usize },
    #[error("finite component has {len} letters, enumeration limit is {limit}")]
    FiniteTooLong { len: u64, limit: usize },
    #[error("component has an infinite part")]
    InfiniteComponent,
    #[error("internal error: witness {0} failed re-verification")]
    WitnessRejected(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Greedy,
    Exact,
    GammaStar,
    StarSingleB,
    FiniteEnum,
    UnionDispatch,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Greedy => "greedy",
            Method::Exact => "exact",
            Method::GammaStar => "gamma_star",
            Method::StarSingleB => "star_single_b",
            Method::FiniteEnum => "finite_enum",
            Method::UnionDispatch => "union_dispatch",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Bound on `2^n · |P|` for exhaustive search.
    pub max_space: usize,
    /// Bound on the word length of an enumerated finite component.
    pub max_finite_len: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_space: 1 << 20,
            max_finite_len: 12,
        }
    }
}

/// Answer of a solver. A witness is present exactly for "yes" and has been
/// checked to synchronize and to satisfy the constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    witness: Option<Word>,
    method: Method,
    explored: usize,
}

impl SolveResult {
    pub fn no(method: Method, explored: usize) -> Self {
        Self {
            witness: None,
            method,
            explored,
        }
    }

    pub fn yes<F>(
        sa: &SemiAutomaton,
        witness: Word,
        method: Method,
        explored: usize,
        member: F,
    ) -> Result<Self, SolveError>
    where
        F: Fn(&Word) -> bool,
    {
        if witness.check_alphabet(sa.alphabet()).is_err() || !sa.synchronizes(&witness) || !member(&witness) {
            return Err(SolveError::WitnessRejected(witness.render(sa.alphabet())));
        }
        Ok(Self {
            witness: Some(witness),
            method,
            explored,
        })
    }

    pub fn is_yes(&self) -> bool {
        self.witness.is_some()
    }

    pub fn witness(&self) -> Option<&Word> {
        self.witness.as_ref()
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn explored(&self) -> usize {
        self.explored
    }

    /// `{"answer":"yes","witness":"abba","method":"exact","explored":N}`;
    /// the witness key is absent for "no".
    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        let mut v = json!({
            "answer": if self.is_yes() { "yes" } else { "no" },
            "method": self.method.as_str(),
            "explored": self.explored,
        });
        if let Some(w) = &self.witness {
            v["witness"] = word_to_json(w, alphabet);
        }
        v
    }
}

/// How [`solve_auto`] handles one maximal component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Route {
    FiniteEnum,
    GammaStar(Vec<Symbol>),
    StarSingle { star: Symbol, single: Symbol },
    Exact,
}

impl Route {
    pub fn method(&self) -> Method {
        match self {
            Route::FiniteEnum => Method::FiniteEnum,
            Route::GammaStar(_) => Method::GammaStar,
            Route::StarSingle { .. } => Method::StarSingleB,
            Route::Exact => Method::Exact,
        }
    }
}

pub fn route_for(v: &ConstraintVector) -> Route {
    let e = v.entries();
    let infs: Vec<Symbol> = (0..e.len()).filter(|&j| e[j].is_inf()).collect();
    let nonzero_finite: Vec<Symbol> = (0..e.len())
        .filter(|&j| matches!(e[j], ExtNat::Fin(n) if n > 0))
        .collect();
    if infs.is_empty() {
        Route::FiniteEnum
    } else if nonzero_finite.is_empty() {
        Route::GammaStar(infs)
    } else if infs.len() == 1 && nonzero_finite.len() == 1 && e[nonzero_finite[0]] == ExtNat::Fin(1) {
        Route::StarSingle {
            star: infs[0],
            single: nonzero_finite[0],
        }
    } else {
        Route::Exact
    }
}

/// Appends, letter by letter in alphabet order, the fewest letters that make
/// `w` a member of `c`. `w` must already satisfy `c` on its finite parts.
pub fn complete_to_member(w: &Word, c: &ShuffleComponent) -> Option<Word> {
    let mut out = w.clone();
    for (x, part) in c.parts.iter().enumerate() {
        let have = w.count(x) as u64;
        let target = part.next_at_least(have)?;
        out.extend_with(&Word::power(x, (target - have) as usize));
    }
    component_member(c, &out).then_some(out)
}

/// Decides the instance over the normalized maximal components, dispatching
/// each to the cheapest applicable solver. The witness comes from the first
/// successful component in vector order and is completed to a member of the
/// matching original component.
pub fn solve_auto(sa: &SemiAutomaton, dec: &Decomposition, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    sa.alphabet().ensure_same(dec.alphabet())?;
    let normalized = normalize_infinite(dec);
    let maximal = maximal_vectors(&vector_of(&normalized));
    let originals = component_vectors(dec);

    let method_of = |m: Method| if maximal.len() == 1 { m } else { Method::UnionDispatch };
    let mut explored = 0;
    for v in maximal.iter() {
        let route = route_for(v);
        let component = v.to_component();
        let found = match &route {
            Route::FiniteEnum => solve_finite_component(sa, &component, config)?,
            Route::GammaStar(gamma) => solve_gamma_star(sa, gamma),
            Route::StarSingle { star, single } => solve_star_single(sa, *star, *single),
            Route::Exact => {
                let single = Decomposition::new(dec.alphabet().clone(), vec![component.clone()])?;
                let b = decomposition_to_dfa(&single)?.to_partial();
                let r = exact_constrained(sa, &b, config)?;
                explored += r.explored();
                r.witness
            }
        };
        if let Some(w) = found {
            let source = originals
                .iter()
                .position(|o| o == v)
                .expect("maximal vectors come from components");
            let completed = complete_to_member(&w, &dec.components()[source])
                .ok_or_else(|| SolveError::WitnessRejected(w.render(sa.alphabet())))?;
            return SolveResult::yes(sa, completed, method_of(route.method()), explored, |w| {
                decomposition_member(dec, w)
            });
        }
    }
    let last = maximal.iter().last().map(|v| route_for(v).method()).unwrap_or(Method::UnionDispatch);
    Ok(SolveResult::no(method_of(last), explored))
}

/// Exhaustive search against the constraint DFA of a decomposition.
pub fn solve_exact_decomposition(
    sa: &SemiAutomaton,
    dec: &Decomposition,
    config: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    let b = decomposition_to_dfa(dec)?.to_partial();
    exact_constrained(sa, &b, config)
}

/// Dispatching solver for a constraint given as an automaton. Constraints
/// that cannot be decomposed (not commutative, or too many letters) are
/// searched exhaustively.
pub fn solve_constraint_auto(
    sa: &SemiAutomaton,
    b: &PartialDfa,
    config: &SolverConfig,
) -> Result<SolveResult, SolveError> {
    sa.alphabet().ensure_same(b.alphabet())?;
    match decompose(b) {
        Ok(dec) => solve_auto(sa, &dec, config),
        Err(DecompositionError::NonCommutative | DecompositionError::AlphabetTooLarge { .. }) => {
            exact_constrained(sa, b, config)
        }
        Err(e) => Err(e.into()),
    }
}

//! Hardness reductions into constrained synchronization, plus brute-force
//! solvers for the source problems (unary DFA intersection and
//! synchronization into a subset).

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::automata::{Alphabet, AutomatonError, Dfa, SemiAutomaton, State, StateSet, Symbol, Word};
use crate::commutative::{Decomposition, DecompositionError, ShuffleComponent};
use crate::unary::UnaryComponent;
use crate::vectors::{classify, maximal_vectors, ComplexityClass, ConstraintVector, ExtNat, VectorSet};

/// Bound on the product or subset space explored by the oracles.
pub const MAX_ORACLE_SPACE: usize = 1 << 20;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("multiplicity {m} is below the minimum {min}")]
    MultiplicityTooSmall { m: u64, min: u64 },
    #[error("at least one input automaton is required")]
    NoAutomata,
    #[error("input automaton {index} is not over a single letter")]
    NotUnary { index: usize },
    #[error("input semi-automaton must have exactly two letters, found {k}")]
    NotBinary { k: usize },
    #[error("subset must be non-empty")]
    EmptySubset,
    #[error("vector {index} is not dominated-free: no letter where the pinned vector exceeds it")]
    NotAntichain { index: usize },
    #[error("pinned index {index} out of range for {len} vectors")]
    PinIndex { index: usize, len: usize },
    #[error("pinned vector {0} lacks the required shape")]
    PinShape(String),
    #[error("pinned vector needs multiplicity {expected}, got {got}")]
    PinMismatch { expected: u64, got: u64 },
    #[error("vector set classifies as {got}, expected {expected}")]
    PinClass { expected: ComplexityClass, got: ComplexityClass },
    #[error("search space of {required} exceeds limit {limit}")]
    TooLarge { required: u128, limit: usize },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
}

/// A vector set together with the position of the component the
/// construction singles out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pinning {
    pub alphabet: Alphabet,
    pub vectors: Vec<ConstraintVector>,
    pub pinned: usize,
}

#[derive(Clone, Debug)]
pub struct NpGadgetInput {
    pub automata: Vec<Dfa>,
    pub m: u64,
    pub pinning: Option<Pinning>,
}

#[derive(Clone, Debug)]
pub struct PspaceGadgetInput {
    pub automaton: SemiAutomaton,
    pub subset: StateSet,
    pub m: u64,
    pub pinning: Option<Pinning>,
}

#[derive(Clone, Debug)]
pub struct GadgetOutput {
    pub automaton: SemiAutomaton,
    pub constraint: Decomposition,
    pub names: Vec<String>,
    /// Letter → number of occurrences forced by the P-chains.
    pub requirements: BTreeMap<Symbol, u64>,
    pub class: ComplexityClass,
}

/// For every vector other than the pinned one, a letter where the pinned
/// vector is strictly larger (the smallest with a finite pinned entry if there
/// is one, otherwise the smallest), and how many of that letter a word must
/// contain to rule the other vector out. Returns the largest count per letter.
pub fn distinguishing_requirements(
    vectors: &[ConstraintVector],
    pinned: usize,
) -> Result<BTreeMap<Symbol, u64>, GadgetError> {
    let top = vectors.get(pinned).ok_or(GadgetError::PinIndex {
        index: pinned,
        len: vectors.len(),
    })?;
    let mut out = BTreeMap::new();
    for (i, v) in vectors.iter().enumerate() {
        if i == pinned {
            continue;
        }
        let candidates: Vec<Symbol> = (0..top.len()).filter(|&j| top.entries()[j] > v.entries()[j]).collect();
        let letter = candidates
            .iter()
            .copied()
            .find(|&j| !top.entries()[j].is_inf())
            .or_else(|| candidates.first().copied())
            .ok_or(GadgetError::NotAntichain { index: i })?;
        let below = v.entries()[letter].finite().expect("smaller than another entry, hence finite");
        let need = match top.entries()[letter] {
            ExtNat::Fin(n) => n,
            ExtNat::Inf => below + 1,
        };
        let slot = out.entry(letter).or_insert(0);
        *slot = (*slot).max(need);
    }
    Ok(out)
}

/// Transition tables under construction; every letter starts as the identity.
struct Builder {
    maps: Vec<Vec<State>>,
    names: Vec<String>,
}

impl Builder {
    fn new(k: usize) -> Self {
        Self {
            maps: vec![Vec::new(); k],
            names: Vec::new(),
        }
    }

    fn add(&mut self, name: String) -> State {
        let q = self.names.len();
        self.names.push(name);
        for m in &mut self.maps {
            m.push(q);
        }
        q
    }

    fn set(&mut self, q: State, x: Symbol, t: State) {
        self.maps[x][q] = t;
    }

    /// One chain per required letter, entering `target` after the required
    /// number of occurrences.
    fn add_pchains(&mut self, alphabet: &Alphabet, requirements: &BTreeMap<Symbol, u64>, target: State) {
        for (&x, &need) in requirements {
            let chain: Vec<State> = (0..need)
                .map(|r| self.add(format!("p[{},{}]", alphabet.name(x), r)))
                .collect();
            for (r, &q) in chain.iter().enumerate() {
                let next = chain.get(r + 1).copied().unwrap_or(target);
                self.set(q, x, next);
            }
        }
    }

    fn finish(self, alphabet: Alphabet) -> Result<(SemiAutomaton, Vec<String>), GadgetError> {
        Ok((SemiAutomaton::from_maps(alphabet, &self.maps)?, self.names))
    }
}

/// Letters chosen from the pinned vector, plus the constraint and
/// requirements; canonical single-vector form when nothing is pinned.
struct Roles {
    alphabet: Alphabet,
    letters: Vec<Symbol>,
    constraint: Decomposition,
    requirements: BTreeMap<Symbol, u64>,
}

#[derive(Clone, Copy)]
enum Shape {
    /// `(∞, m)` with `m ≥ 2`.
    NpMultiple,
    /// `(∞, n, m)` with `n, m ≥ 1`.
    NpPair,
    /// `(∞, ∞, m)` with `m ≥ 1`.
    Pspace,
}

impl Shape {
    fn class(self) -> ComplexityClass {
        match self {
            Shape::NpMultiple | Shape::NpPair => ComplexityClass::NpComplete,
            Shape::Pspace => ComplexityClass::PspaceComplete,
        }
    }

    fn canonical(self, m: u64) -> (Vec<&'static str>, Vec<ExtNat>) {
        match self {
            Shape::NpMultiple => (vec!["a", "b"], vec![ExtNat::Inf, ExtNat::Fin(m)]),
            Shape::NpPair => (vec!["a", "b", "c"], vec![ExtNat::Inf, ExtNat::Fin(1), ExtNat::Fin(m)]),
            Shape::Pspace => (vec!["a", "b", "c"], vec![ExtNat::Inf, ExtNat::Inf, ExtNat::Fin(m)]),
        }
    }

    /// Essential letters of `v` in construction order; the last one carries
    /// the multiplicity.
    fn letters_of(self, v: &ConstraintVector) -> Option<Vec<Symbol>> {
        let e = v.entries();
        let infs = (0..e.len()).filter(|&j| e[j].is_inf());
        let fin_at_least = |lo: u64| (0..e.len()).filter(move |&j| matches!(e[j], ExtNat::Fin(n) if n >= lo));
        match self {
            Shape::NpMultiple => Some(vec![infs.take(1).next()?, fin_at_least(2).next()?]),
            Shape::NpPair => {
                let f: Vec<Symbol> = fin_at_least(1).take(2).collect();
                (f.len() == 2).then_some(())?;
                Some(vec![infs.take(1).next()?, f[0], f[1]])
            }
            Shape::Pspace => {
                let i: Vec<Symbol> = infs.take(2).collect();
                (i.len() == 2).then_some(())?;
                Some(vec![i[0], i[1], fin_at_least(1).next()?])
            }
        }
    }
}

fn roles(shape: Shape, m: u64, pinning: Option<&Pinning>) -> Result<Roles, GadgetError> {
    let Some(pin) = pinning else {
        let (names, entries) = shape.canonical(m);
        let alphabet = Alphabet::new(names)?;
        let component = ConstraintVector(entries).to_component();
        let letters = (0..alphabet.len()).collect();
        return Ok(Roles {
            constraint: Decomposition::new(alphabet.clone(), vec![component])?,
            alphabet,
            letters,
            requirements: BTreeMap::new(),
        });
    };

    let top = pin.vectors.get(pin.pinned).ok_or(GadgetError::PinIndex {
        index: pin.pinned,
        len: pin.vectors.len(),
    })?;
    let set = VectorSet::new(pin.alphabet.len(), pin.vectors.iter().cloned())
        .map_err(|e| GadgetError::PinShape(e.to_string()))?;
    if set.len() != pin.vectors.len() || maximal_vectors(&set) != set {
        let index = (0..pin.vectors.len())
            .find(|&i| {
                pin.vectors
                    .iter()
                    .enumerate()
                    .any(|(j, w)| j != i && pin.vectors[i].dominated_by(w))
            })
            .unwrap_or(0);
        return Err(GadgetError::NotAntichain { index });
    }
    let letters = shape.letters_of(top).ok_or_else(|| GadgetError::PinShape(top.to_string()))?;
    let expected = top.entries()[*letters.last().expect("non-empty")]
        .finite()
        .expect("multiplicity letter is finite");
    if expected != m {
        return Err(GadgetError::PinMismatch { expected, got: m });
    }
    let got = classify(&set);
    if got != shape.class() {
        return Err(GadgetError::PinClass {
            expected: shape.class(),
            got,
        });
    }
    let requirements = distinguishing_requirements(&pin.vectors, pin.pinned)?;
    let components: Vec<ShuffleComponent> = pin.vectors.iter().map(ConstraintVector::to_component).collect();
    Ok(Roles {
        constraint: Decomposition::new(pin.alphabet.clone(), components)?,
        alphabet: pin.alphabet.clone(),
        letters,
        requirements,
    })
}

fn check_unary(automata: &[Dfa]) -> Result<(), GadgetError> {
    if automata.is_empty() {
        return Err(GadgetError::NoAutomata);
    }
    match automata.iter().position(|d| d.alphabet().len() != 1) {
        Some(index) => Err(GadgetError::NotUnary { index }),
        None => Ok(()),
    }
}

/// Adds the blocks of the unary automata (letter `a` acting inside each
/// block) and returns the block offsets.
fn add_blocks(builder: &mut Builder, automata: &[Dfa], a: Symbol) -> Vec<State> {
    let mut offsets = Vec::new();
    for (i, d) in automata.iter().enumerate() {
        let offset = builder.names.len();
        offsets.push(offset);
        for q in 0..d.num_states() {
            builder.add(format!("Q{}.{}", i + 1, q));
        }
        for q in 0..d.num_states() {
            builder.set(offset + q, a, offset + d.step(q, 0));
        }
    }
    offsets
}

/// Letter `b` resets each block to its start state and sends final states
/// into an `r`-chain of length `m - 1` counted by further `b`s; the constraint
/// is `a^* ⧢ {b^m}`.
pub fn np_gadget_case_i(inp: &NpGadgetInput) -> Result<GadgetOutput, GadgetError> {
    check_unary(&inp.automata)?;
    if inp.m < 2 {
        return Err(GadgetError::MultiplicityTooSmall { m: inp.m, min: 2 });
    }
    let shape = Shape::NpMultiple;
    let roles = roles(shape, inp.m, inp.pinning.as_ref())?;
    let (a, b) = (roles.letters[0], roles.letters[1]);
    let mut g = Builder::new(roles.alphabet.len());
    let offsets = add_blocks(&mut g, &inp.automata, a);
    let ts: Vec<State> = (1..=inp.automata.len()).map(|i| g.add(format!("t{i}"))).collect();
    let rs: Vec<State> = (1..inp.m).map(|j| g.add(format!("r{j}"))).collect();

    for (i, d) in inp.automata.iter().enumerate() {
        let start = offsets[i] + d.initial();
        g.set(ts[i], b, start);
        for q in 0..d.num_states() {
            g.set(offsets[i] + q, b, if d.is_final(q) { rs[0] } else { start });
        }
    }
    for j in 0..rs.len() {
        g.set(rs[j], b, rs[(j + 1).min(rs.len() - 1)]);
    }
    let sink = *rs.last().expect("m >= 2");
    g.add_pchains(&roles.alphabet, &roles.requirements, sink);
    let (automaton, names) = g.finish(roles.alphabet)?;
    Ok(GadgetOutput {
        automaton,
        constraint: roles.constraint,
        names,
        requirements: roles.requirements,
        class: shape.class(),
    })
}

/// Letter `b` resets blocks, letter `c` moves final states along an
/// `r`-chain of length `m`; the constraint is `a^* ⧢ {b} ⧢ {c^m}`.
pub fn np_gadget_case_ii(inp: &NpGadgetInput) -> Result<GadgetOutput, GadgetError> {
    check_unary(&inp.automata)?;
    if inp.m < 1 {
        return Err(GadgetError::MultiplicityTooSmall { m: inp.m, min: 1 });
    }
    let shape = Shape::NpPair;
    let roles = roles(shape, inp.m, inp.pinning.as_ref())?;
    let (a, b, c) = (roles.letters[0], roles.letters[1], roles.letters[2]);
    let mut g = Builder::new(roles.alphabet.len());
    let offsets = add_blocks(&mut g, &inp.automata, a);
    let ts: Vec<State> = (1..=inp.automata.len()).map(|i| g.add(format!("t{i}"))).collect();
    let rs: Vec<State> = (1..=inp.m).map(|j| g.add(format!("r{j}"))).collect();

    for (i, d) in inp.automata.iter().enumerate() {
        let start = offsets[i] + d.initial();
        g.set(ts[i], b, start);
        for q in 0..d.num_states() {
            g.set(offsets[i] + q, b, start);
            if d.is_final(q) {
                g.set(offsets[i] + q, c, rs[0]);
            }
        }
    }
    for j in 0..rs.len() {
        g.set(rs[j], c, rs[(j + 1).min(rs.len() - 1)]);
    }
    let sink = *rs.last().expect("m >= 1");
    g.add_pchains(&roles.alphabet, &roles.requirements, sink);
    let (automaton, names) = g.finish(roles.alphabet)?;
    Ok(GadgetOutput {
        automaton,
        constraint: roles.constraint,
        names,
        requirements: roles.requirements,
        class: shape.class(),
    })
}

/// Letters `a`, `b` act as in the input, and `c` moves the subset onto an
/// `s`-chain of length `m`; the constraint is `a^* ⧢ b^* ⧢ {c^m}`.
pub fn pspace_gadget(inp: &PspaceGadgetInput) -> Result<GadgetOutput, GadgetError> {
    let sa = &inp.automaton;
    if sa.num_symbols() != 2 {
        return Err(GadgetError::NotBinary { k: sa.num_symbols() });
    }
    if inp.subset.is_empty() {
        return Err(GadgetError::EmptySubset);
    }
    let n = sa.num_states();
    if let Some(q) = inp.subset.max().filter(|&q| q >= n) {
        return Err(AutomatonError::StateOutOfRange { state: q, n }.into());
    }
    if inp.m < 1 {
        return Err(GadgetError::MultiplicityTooSmall { m: inp.m, min: 1 });
    }
    let shape = Shape::Pspace;
    let roles = roles(shape, inp.m, inp.pinning.as_ref())?;
    let (a, b, c) = (roles.letters[0], roles.letters[1], roles.letters[2]);
    let mut g = Builder::new(roles.alphabet.len());
    for q in 0..n {
        g.add(format!("q{q}"));
    }
    for q in 0..n {
        g.set(q, a, sa.step(q, 0));
        g.set(q, b, sa.step(q, 1));
    }
    let ss: Vec<State> = (1..=inp.m).map(|j| g.add(format!("s{j}"))).collect();
    for q in inp.subset.iter() {
        g.set(q, c, ss[0]);
    }
    for j in 0..ss.len() {
        g.set(ss[j], c, ss[(j + 1).min(ss.len() - 1)]);
    }
    let sink = *ss.last().expect("m >= 1");
    g.add_pchains(&roles.alphabet, &roles.requirements, sink);
    let (automaton, names) = g.finish(roles.alphabet)?;
    Ok(GadgetOutput {
        automaton,
        constraint: roles.constraint,
        names,
        requirements: roles.requirements,
        class: shape.class(),
    })
}

/// Shortest `a^n` accepted by every unary DFA, by walking the product.
pub fn unary_intersection_nonempty(dfas: &[Dfa]) -> Result<Option<Word>, GadgetError> {
    check_unary(dfas)?;
    let required = dfas.iter().map(|d| d.num_states() as u128).product::<u128>();
    if required > MAX_ORACLE_SPACE as u128 {
        return Err(GadgetError::TooLarge {
            required,
            limit: MAX_ORACLE_SPACE,
        });
    }
    let mut seen = HashMap::new();
    let mut tuple: Vec<State> = dfas.iter().map(Dfa::initial).collect();
    let mut n = 0usize;
    while !seen.contains_key(&tuple) {
        if dfas.iter().zip(&tuple).all(|(d, &q)| d.is_final(q)) {
            return Ok(Some(Word::power(0, n)));
        }
        let next = dfas.iter().zip(&tuple).map(|(d, &q)| d.step(q, 0)).collect();
        seen.insert(std::mem::replace(&mut tuple, next), n);
        n += 1;
    }
    Ok(None)
}

/// Shortest `w` with `δ(Q, w) ⊆ S`, by breadth-first search over images.
pub fn sync_into_subset(sa: &SemiAutomaton, subset: StateSet) -> Result<Option<Word>, GadgetError> {
    if subset.is_empty() {
        return Err(GadgetError::EmptySubset);
    }
    sa.ensure_set_capable()?;
    let n = sa.num_states();
    let required = 1u128 << n;
    if required > MAX_ORACLE_SPACE as u128 {
        return Err(GadgetError::TooLarge {
            required,
            limit: MAX_ORACLE_SPACE,
        });
    }
    let mut parent: HashMap<StateSet, Option<(StateSet, Symbol)>> = HashMap::new();
    let start = sa.full_set();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        if s.is_subset(subset) {
            let mut letters = Vec::new();
            let mut cur = s;
            while let Some((prev, x)) = parent[&cur] {
                letters.push(x);
                cur = prev;
            }
            letters.reverse();
            return Ok(Some(Word::new(letters)));
        }
        for x in 0..sa.num_symbols() {
            let t = sa.step_set(s, x);
            parent.entry(t).or_insert_with(|| {
                queue.push_back(t);
                Some((s, x))
            });
        }
    }
    Ok(None)
}

/// Unary DFA over the letter `a`: `next[q]` successor, finals listed.
pub fn unary_dfa(next: Vec<State>, finals: Vec<State>) -> Result<Dfa, AutomatonError> {
    SemiAutomaton::from_maps(Alphabet::new(["a"])?, &[next])?.with_initial(0, finals)
}

/// Start-state exponent set of a unary DFA, for display and testing.
pub fn unary_language(d: &Dfa) -> Vec<UnaryComponent> {
    d.finals()
        .into_iter()
        .filter_map(|f| crate::unary::exponent_set(d.base(), d.initial(), 0, f))
        .collect()
}

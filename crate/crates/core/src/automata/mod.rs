//! Deterministic automata: alphabets, words, state sets, complete and partial
//! transition tables, and the basic algorithms built on them.
//!
//! Symbols are plain indices `0..k` internally. Names only matter at the I/O
//! boundary (see [`io`]).

pub mod io;
mod minimize;

use std::collections::{HashMap, VecDeque};
use std::fmt;

pub use minimize::minimize;

/// Largest alphabet accepted anywhere in the crate.
pub const MAX_ALPHABET: usize = 16;

/// Width of [`StateSet`]; automata with more states cannot use set operations.
pub const MAX_SET_STATES: usize = 64;

/// State index inside a transition table.
pub type State = usize;

/// Symbol index inside an [`Alphabet`].
pub type Symbol = usize;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("alphabet has {0} symbols, at most {MAX_ALPHABET} are supported")]
    AlphabetTooLarge(usize),
    #[error("duplicate symbol name {0:?}")]
    DuplicateSymbol(String),
    #[error("symbol names must be non-empty")]
    EmptySymbolName,
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("automaton must have at least one state")]
    NoStates,
    #[error("state {state} out of range (automaton has {n} states)")]
    StateOutOfRange { state: usize, n: usize },
    #[error("symbol index {symbol} out of range (alphabet has {k} symbols)")]
    SymbolOutOfRange { symbol: usize, k: usize },
    #[error("duplicate transition from state {from} on symbol {symbol:?}")]
    DuplicateTransition { from: usize, symbol: String },
    #[error("missing transition from state {from} on symbol {symbol:?}")]
    MissingTransition { from: usize, symbol: String },
    #[error("transition table has {got} entries, expected {expected}")]
    TableSize { got: usize, expected: usize },
    #[error("alphabets differ: {left:?} vs {right:?}")]
    AlphabetMismatch { left: Vec<String>, right: Vec<String> },
    #[error("state set must be non-empty")]
    EmptyStateSet,
    #[error("{n} states exceed the {MAX_SET_STATES}-state limit of set operations")]
    TooManyStates { n: usize },
    #[error("document is missing field {0:?}")]
    MissingField(&'static str),
    #[error("malformed document: {0}")]
    Malformed(String),
}

/// Ordered list of distinct symbol names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, AutomatonError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(AutomatonError::EmptyAlphabet);
        }
        if symbols.len() > MAX_ALPHABET {
            return Err(AutomatonError::AlphabetTooLarge(symbols.len()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() {
                return Err(AutomatonError::EmptySymbolName);
            }
            if symbols[..i].contains(s) {
                return Err(AutomatonError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Self { symbols })
    }

    /// Alphabet `a, b, c, ...` of the given size.
    pub fn letters(k: usize) -> Result<Self, AutomatonError> {
        if k > 26 {
            return Err(AutomatonError::AlphabetTooLarge(k));
        }
        Self::new((0..k).map(|i| ((b'a' + i as u8) as char).to_string()))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, symbol: Symbol) -> &str {
        &self.symbols[symbol]
    }

    pub fn index_of(&self, name: &str) -> Result<Symbol, AutomatonError> {
        self.symbols
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| AutomatonError::UnknownSymbol(name.to_string()))
    }

    /// True when every name is a single character, so words can be written as
    /// plain strings.
    pub fn single_char_names(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    pub fn ensure_same(&self, other: &Alphabet) -> Result<(), AutomatonError> {
        if self == other {
            Ok(())
        } else {
            Err(AutomatonError::AlphabetMismatch {
                left: self.symbols.clone(),
                right: other.symbols.clone(),
            })
        }
    }
}

/// A word as a sequence of symbol indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(letters: Vec<Symbol>) -> Self {
        Self(letters)
    }

    /// `letter^times`.
    pub fn power(letter: Symbol, times: usize) -> Self {
        Self(vec![letter; times])
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: Symbol) {
        self.0.push(letter);
    }

    pub fn extend_with(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend_with(other);
        w
    }

    /// `|w|_letter`.
    pub fn count(&self, letter: Symbol) -> usize {
        self.0.iter().filter(|&&x| x == letter).count()
    }

    /// Letter-count vector of length `k`.
    pub fn parikh(&self, k: usize) -> Vec<usize> {
        let mut counts = vec![0; k];
        for &x in &self.0 {
            counts[x] += 1;
        }
        counts
    }

    pub fn check_alphabet(&self, alphabet: &Alphabet) -> Result<(), AutomatonError> {
        match self.0.iter().find(|&&x| x >= alphabet.len()) {
            Some(&symbol) => Err(AutomatonError::SymbolOutOfRange {
                symbol,
                k: alphabet.len(),
            }),
            None => Ok(()),
        }
    }

    /// Concatenated symbol names.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        self.0.iter().map(|&x| alphabet.name(x)).collect()
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Self(v)
    }
}

/// Bitset over at most [`MAX_SET_STATES`] states.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(u64);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_SET_STATES);
        if n >= 64 {
            Self(u64::MAX)
        } else {
            Self((1u64 << n) - 1)
        }
    }

    pub fn singleton(q: State) -> Self {
        Self(1u64 << q)
    }

    pub fn from_states<I: IntoIterator<Item = State>>(states: I) -> Self {
        let mut s = Self::EMPTY;
        for q in states {
            s.insert(q);
        }
        s
    }

    pub fn insert(&mut self, q: State) {
        self.0 |= 1u64 << q;
    }

    pub fn contains(self, q: State) -> bool {
        q < 64 && self.0 & (1u64 << q) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: StateSet) -> StateSet {
        Self(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = State> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let q = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(q)
            }
        })
    }

    /// Highest state in the set, if any.
    pub fn max(self) -> Option<State> {
        if self.0 == 0 {
            None
        } else {
            Some(63 - self.0.leading_zeros() as usize)
        }
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<State> for StateSet {
    fn from_iter<T: IntoIterator<Item = State>>(iter: T) -> Self {
        Self::from_states(iter)
    }
}

/// Complete deterministic semi-automaton (no initial or final states).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiAutomaton {
    alphabet: Alphabet,
    n: usize,
    // row-major: delta[q * k + x]
    delta: Vec<State>,
}

impl SemiAutomaton {
    /// Builds from a row-major table with `n * k` entries.
    pub fn new(alphabet: Alphabet, n: usize, delta: Vec<State>) -> Result<Self, AutomatonError> {
        if n == 0 {
            return Err(AutomatonError::NoStates);
        }
        let expected = n * alphabet.len();
        if delta.len() != expected {
            return Err(AutomatonError::TableSize {
                got: delta.len(),
                expected,
            });
        }
        if let Some(&state) = delta.iter().find(|&&t| t >= n) {
            return Err(AutomatonError::StateOutOfRange { state, n });
        }
        Ok(Self { alphabet, n, delta })
    }

    /// Builds from a per-symbol transformation list: `maps[x][q] = δ(q, x)`.
    pub fn from_maps(alphabet: Alphabet, maps: &[Vec<State>]) -> Result<Self, AutomatonError> {
        let k = alphabet.len();
        if maps.len() != k {
            return Err(AutomatonError::TableSize {
                got: maps.len(),
                expected: k,
            });
        }
        let n = maps.first().map_or(0, Vec::len);
        let mut delta = vec![0; n * k];
        for (x, map) in maps.iter().enumerate() {
            if map.len() != n {
                return Err(AutomatonError::TableSize {
                    got: map.len(),
                    expected: n,
                });
            }
            for (q, &t) in map.iter().enumerate() {
                delta[q * k + x] = t;
            }
        }
        Self::new(alphabet, n, delta)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn table(&self) -> &[State] {
        &self.delta
    }

    #[inline]
    pub fn step(&self, q: State, x: Symbol) -> State {
        self.delta[q * self.alphabet.len() + x]
    }

    /// Left-to-right fold of the transition function over `w`.
    pub fn apply_word(&self, q: State, w: &Word) -> State {
        w.letters().iter().fold(q, |q, &x| self.step(q, x))
    }

    pub fn ensure_set_capable(&self) -> Result<(), AutomatonError> {
        if self.n > MAX_SET_STATES {
            Err(AutomatonError::TooManyStates { n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn full_set(&self) -> StateSet {
        StateSet::full(self.n)
    }

    /// Image of a set under one letter. No emptiness check.
    #[inline]
    pub fn step_set(&self, s: StateSet, x: Symbol) -> StateSet {
        let mut out = 0u64;
        for q in s.iter() {
            out |= 1u64 << self.step(q, x);
        }
        StateSet(out)
    }

    /// `δ(S, w)`.
    pub fn apply_word_set(&self, s: StateSet, w: &Word) -> Result<StateSet, AutomatonError> {
        self.ensure_set_capable()?;
        if s.is_empty() {
            return Err(AutomatonError::EmptyStateSet);
        }
        if let Some(q) = s.max().filter(|&q| q >= self.n) {
            return Err(AutomatonError::StateOutOfRange { state: q, n: self.n });
        }
        Ok(w.letters().iter().fold(s, |s, &x| self.step_set(s, x)))
    }

    /// Number of distinct states in `δ(Q, w)`. Works for any state count.
    pub fn image_size(&self, w: &Word) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for q in 0..self.n {
            let t = self.apply_word(q, w);
            if !seen[t] {
                seen[t] = true;
                count += 1;
            }
        }
        count
    }

    /// `|δ(Q, w)| = 1`.
    pub fn synchronizes(&self, w: &Word) -> bool {
        self.image_size(w) == 1
    }

    /// Restriction to a subset of the letters; symbol `i` of the result is
    /// `letters[i]` of `self`.
    pub fn restrict(&self, letters: &[Symbol]) -> Result<SemiAutomaton, AutomatonError> {
        let alphabet = Alphabet::new(letters.iter().map(|&x| self.alphabet.name(x).to_string()))?;
        let k = letters.len();
        let mut delta = vec![0; self.n * k];
        for q in 0..self.n {
            for (i, &x) in letters.iter().enumerate() {
                delta[q * k + i] = self.step(q, x);
            }
        }
        SemiAutomaton::new(alphabet, self.n, delta)
    }

    /// Per-letter predecessor lists: `pred[x][t]` holds every `q` with `δ(q,x) = t`.
    pub fn predecessors(&self) -> Vec<Vec<Vec<State>>> {
        let k = self.num_symbols();
        let mut pred = vec![vec![Vec::new(); self.n]; k];
        for q in 0..self.n {
            for (x, p) in pred.iter_mut().enumerate() {
                p[self.step(q, x)].push(q);
            }
        }
        pred
    }

    pub fn with_initial(self, initial: State, finals: Vec<State>) -> Result<Dfa, AutomatonError> {
        Dfa::new(self, initial, finals)
    }
}

/// Complete DFA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    base: SemiAutomaton,
    initial: State,
    finals: Vec<bool>,
}

impl Dfa {
    pub fn new<I>(base: SemiAutomaton, initial: State, finals: I) -> Result<Self, AutomatonError>
    where
        I: IntoIterator<Item = State>,
    {
        let n = base.num_states();
        if initial >= n {
            return Err(AutomatonError::StateOutOfRange { state: initial, n });
        }
        let mut mask = vec![false; n];
        for f in finals {
            if f >= n {
                return Err(AutomatonError::StateOutOfRange { state: f, n });
            }
            mask[f] = true;
        }
        Ok(Self {
            base,
            initial,
            finals: mask,
        })
    }

    pub fn base(&self) -> &SemiAutomaton {
        &self.base
    }

    pub fn into_base(self) -> SemiAutomaton {
        self.base
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.base.alphabet()
    }

    pub fn num_states(&self) -> usize {
        self.base.num_states()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> Vec<State> {
        (0..self.num_states()).filter(|&q| self.finals[q]).collect()
    }

    #[inline]
    pub fn step(&self, q: State, x: Symbol) -> State {
        self.base.step(q, x)
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.finals[self.base.apply_word(self.initial, w)]
    }

    /// States reachable from the initial state, in BFS order (letters in
    /// alphabet order).
    pub fn reachable_order(&self) -> Vec<State> {
        let n = self.num_states();
        let mut seen = vec![false; n];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for x in 0..self.base.num_symbols() {
                let t = self.step(q, x);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    /// Same language, as a partial DFA with every transition defined.
    pub fn to_partial(&self) -> PartialDfa {
        PartialDfa {
            alphabet: self.alphabet().clone(),
            n: self.num_states(),
            initial: self.initial,
            finals: self.finals.clone(),
            delta: self.base.delta.iter().map(|&t| Some(t)).collect(),
        }
    }

    /// Renumbers states: state `q` becomes `perm[q]`.
    pub fn permuted(&self, perm: &[State]) -> Result<Dfa, AutomatonError> {
        let n = self.num_states();
        let k = self.base.num_symbols();
        if perm.len() != n {
            return Err(AutomatonError::TableSize {
                got: perm.len(),
                expected: n,
            });
        }
        let mut delta = vec![0; n * k];
        for q in 0..n {
            for x in 0..k {
                delta[perm[q] * k + x] = perm[self.step(q, x)];
            }
        }
        let base = SemiAutomaton::new(self.alphabet().clone(), n, delta)?;
        Dfa::new(base, perm[self.initial], self.finals().into_iter().map(|f| perm[f]))
    }
}

/// Partial DFA: transitions may be undefined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialDfa {
    alphabet: Alphabet,
    n: usize,
    initial: State,
    finals: Vec<bool>,
    delta: Vec<Option<State>>,
}

impl PartialDfa {
    pub fn new<I>(
        alphabet: Alphabet,
        n: usize,
        initial: State,
        finals: I,
        delta: Vec<Option<State>>,
    ) -> Result<Self, AutomatonError>
    where
        I: IntoIterator<Item = State>,
    {
        if n == 0 {
            return Err(AutomatonError::NoStates);
        }
        let expected = n * alphabet.len();
        if delta.len() != expected {
            return Err(AutomatonError::TableSize {
                got: delta.len(),
                expected,
            });
        }
        if let Some(state) = delta.iter().flatten().copied().find(|&t| t >= n) {
            return Err(AutomatonError::StateOutOfRange { state, n });
        }
        if initial >= n {
            return Err(AutomatonError::StateOutOfRange { state: initial, n });
        }
        let mut mask = vec![false; n];
        for f in finals {
            if f >= n {
                return Err(AutomatonError::StateOutOfRange { state: f, n });
            }
            mask[f] = true;
        }
        Ok(Self {
            alphabet,
            n,
            initial,
            finals: mask,
            delta,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> Vec<State> {
        (0..self.n).filter(|&q| self.finals[q]).collect()
    }

    #[inline]
    pub fn step(&self, q: State, x: Symbol) -> Option<State> {
        self.delta[q * self.alphabet.len() + x]
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(Option::is_some)
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let mut q = self.initial;
        for &x in w.letters() {
            match self.step(q, x) {
                Some(t) => q = t,
                None => return false,
            }
        }
        self.finals[q]
    }

    /// Completion: undefined transitions go to a fresh non-final trap state
    /// appended as state `n`. No trap is added if nothing is undefined.
    pub fn complete(&self) -> Dfa {
        let k = self.alphabet.len();
        let needs_trap = !self.is_complete();
        let n = if needs_trap { self.n + 1 } else { self.n };
        let trap = self.n;
        let mut delta = Vec::with_capacity(n * k);
        for t in &self.delta {
            delta.push(t.unwrap_or(trap));
        }
        if needs_trap {
            delta.extend(std::iter::repeat_n(trap, k));
        }
        let base = SemiAutomaton {
            alphabet: self.alphabet.clone(),
            n,
            delta,
        };
        Dfa {
            base,
            initial: self.initial,
            finals: {
                let mut f = self.finals.clone();
                f.resize(n, false);
                f
            },
        }
    }
}

/// Shortest word on which the two DFAs disagree, by BFS over the product.
pub fn distinguishing_word(d1: &Dfa, d2: &Dfa) -> Result<Option<Word>, AutomatonError> {
    d1.alphabet().ensure_same(d2.alphabet())?;
    let k = d1.alphabet().len();
    let n2 = d2.num_states();
    let start = (d1.initial(), d2.initial());
    type Pair = (State, State);
    let mut parent: HashMap<Pair, Option<(Pair, Symbol)>> = HashMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(pair @ (p, q)) = queue.pop_front() {
        if d1.is_final(p) != d2.is_final(q) {
            let mut letters = Vec::new();
            let mut cur = pair;
            while let Some(Some((prev, x))) = parent.get(&cur) {
                letters.push(*x);
                cur = *prev;
            }
            letters.reverse();
            return Ok(Some(Word::new(letters)));
        }
        for x in 0..k {
            let next = (d1.step(p, x), d2.step(q, x));
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                e.insert(Some((pair, x)));
                queue.push_back(next);
            }
        }
        debug_assert!(parent.len() <= d1.num_states() * n2);
    }
    Ok(None)
}

/// Language equality via product reachability.
pub fn equivalent(d1: &Dfa, d2: &Dfa) -> Result<bool, AutomatonError> {
    distinguishing_word(d1, d2).map(|w| w.is_none())
}

/// Every word over `k` letters of length at most `max_len`, shortlex order.
pub fn words_up_to(k: usize, max_len: usize) -> impl Iterator<Item = Word> {
    let mut current: Option<Vec<Symbol>> = Some(Vec::new());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        // advance as an odometer; grow the length on overflow
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                if next.len() == max_len || k == 0 {
                    current = None;
                } else {
                    current = Some(vec![0; next.len() + 1]);
                }
                break;
            }
            i -= 1;
            if next[i] + 1 < k {
                next[i] += 1;
                for v in &mut next[i + 1..] {
                    *v = 0;
                }
                current = Some(next);
                break;
            }
        }
        Some(Word::new(out))
    })
}

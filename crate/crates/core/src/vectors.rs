//! Vector representation of a commutative constraint, the two language
//! simplifications that preserve constrained synchronizability, and the
//! P / NP-complete / PSPACE-complete classifier.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::automata::{Alphabet, AutomatonError, PartialDfa};
use crate::commutative::{decompose, Decomposition, DecompositionError, ShuffleComponent};
use crate::unary::UnaryComponent;

/// `ℕ₀ ∪ {∞}` with `∞` as top element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

impl ExtNat {
    pub fn is_inf(self) -> bool {
        self == ExtNat::Inf
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => f.write_str("∞"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Fin(n) => s.serialize_u64(*n),
            ExtNat::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => n
                .as_u64()
                .map(ExtNat::Fin)
                .ok_or_else(|| serde::de::Error::custom(format!("{n} is not a natural number"))),
            Value::String(s) if s == "inf" => Ok(ExtNat::Inf),
            other => Err(serde::de::Error::custom(format!(
                "expected a natural number or \"inf\", got {other}"
            ))),
        }
    }
}

/// One entry per letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstraintVector(pub Vec<ExtNat>);

impl ConstraintVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[ExtNat] {
        &self.0
    }

    /// Componentwise `≤`.
    pub fn dominated_by(&self, other: &ConstraintVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn partial_cmp_componentwise(&self, other: &ConstraintVector) -> Option<Ordering> {
        match (self.dominated_by(other), other.dominated_by(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    pub fn inf_count(&self) -> usize {
        self.0.iter().filter(|e| e.is_inf()).count()
    }

    /// Component with `Singleton(n)` for finite entries and `a^*` for `∞`.
    pub fn to_component(&self) -> ShuffleComponent {
        ShuffleComponent::new(
            self.0
                .iter()
                .map(|e| match e {
                    ExtNat::Fin(n) => UnaryComponent::singleton(*n),
                    ExtNat::Inf => UnaryComponent::star(),
                })
                .collect(),
        )
    }

    fn of_component(c: &ShuffleComponent) -> Self {
        Self(
            c.parts
                .iter()
                .map(|p| match p {
                    UnaryComponent::Singleton { n } => ExtNat::Fin(*n),
                    UnaryComponent::Progression { .. } => ExtNat::Inf,
                })
                .collect(),
        )
    }
}

impl fmt::Display for ConstraintVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("vector set is empty")]
    EmptyVectorSet,
    #[error("vector {index} has length {got}, expected {expected}")]
    MixedLength { index: usize, got: usize, expected: usize },
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// Deduplicated set of equal-length vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorSet {
    k: usize,
    vectors: BTreeSet<ConstraintVector>,
}

impl VectorSet {
    pub fn new<I>(k: usize, vectors: I) -> Result<Self, ClassifyError>
    where
        I: IntoIterator<Item = ConstraintVector>,
    {
        let mut set = BTreeSet::new();
        for (index, v) in vectors.into_iter().enumerate() {
            if v.len() != k {
                return Err(ClassifyError::MixedLength {
                    index,
                    got: v.len(),
                    expected: k,
                });
            }
            set.insert(v);
        }
        Ok(Self { k, vectors: set })
    }

    /// Infers `k` from the first vector; rejects empty input.
    pub fn from_vectors(vectors: Vec<ConstraintVector>) -> Result<Self, ClassifyError> {
        let k = vectors.first().ok_or(ClassifyError::EmptyVectorSet)?.len();
        Self::new(k, vectors)
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ConstraintVector> {
        self.vectors.iter()
    }

    pub fn contains(&self, v: &ConstraintVector) -> bool {
        self.vectors.contains(v)
    }

    /// Decomposition with one `Singleton`/`a^*` component per vector.
    pub fn to_decomposition(&self, alphabet: &Alphabet) -> Result<Decomposition, ClassifyError> {
        if alphabet.len() != self.k {
            return Err(ClassifyError::MixedLength {
                index: 0,
                got: self.k,
                expected: alphabet.len(),
            });
        }
        Ok(Decomposition::new(
            alphabet.clone(),
            self.vectors.iter().map(ConstraintVector::to_component).collect(),
        )?)
    }
}

/// `{"alphabet":[...],"vectors":[[2,"inf",0], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorSetDoc {
    pub alphabet: Vec<String>,
    pub vectors: Vec<ConstraintVector>,
}

impl VectorSetDoc {
    pub fn from_json(text: &str) -> Result<(Alphabet, VectorSet), ClassifyError> {
        let doc: VectorSetDoc =
            serde_json::from_str(text).map_err(|e| AutomatonError::Malformed(e.to_string()))?;
        let alphabet = Alphabet::new(doc.alphabet)?;
        let set = VectorSet::new(alphabet.len(), doc.vectors)?;
        Ok((alphabet, set))
    }

    pub fn new(alphabet: &Alphabet, set: &VectorSet) -> Self {
        Self {
            alphabet: alphabet.symbols().to_vec(),
            vectors: set.iter().cloned().collect(),
        }
    }
}

/// `Inf` for progression parts, `Fin(n)` for `Singleton(n)`.
pub fn vector_of(dec: &Decomposition) -> VectorSet {
    VectorSet {
        k: dec.alphabet().len(),
        vectors: dec.components().iter().map(ConstraintVector::of_component).collect(),
    }
}

/// Vectors of each component, in component order (duplicates kept).
pub fn component_vectors(dec: &Decomposition) -> Vec<ConstraintVector> {
    dec.components().iter().map(ConstraintVector::of_component).collect()
}

/// Replaces every infinite part by `a_j^*`.
pub fn normalize_infinite(dec: &Decomposition) -> Decomposition {
    let components = dec
        .components()
        .iter()
        .map(|c| {
            ShuffleComponent::new(
                c.parts
                    .iter()
                    .map(|p| if p.is_finite() { *p } else { UnaryComponent::star() })
                    .collect(),
            )
        })
        .collect();
    Decomposition::new(dec.alphabet().clone(), components).expect("shape unchanged")
}

/// Vectors not dominated by a distinct vector of the set.
pub fn maximal_vectors(set: &VectorSet) -> VectorSet {
    let vectors = set
        .vectors
        .iter()
        .filter(|v| !set.vectors.iter().any(|w| w != *v && v.dominated_by(w)))
        .cloned()
        .collect();
    VectorSet { k: set.k, vectors }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComplexityClass {
    #[serde(rename = "P")]
    PolyTime,
    #[serde(rename = "NP-complete")]
    NpComplete,
    #[serde(rename = "PSPACE-complete")]
    PspaceComplete,
}

impl ComplexityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ComplexityClass::PolyTime => "P",
            ComplexityClass::NpComplete => "NP-complete",
            ComplexityClass::PspaceComplete => "PSPACE-complete",
        }
    }
}

impl fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Two `∞` entries and a finite non-zero entry.
pub fn has_pspace_shape(v: &ConstraintVector) -> bool {
    v.inf_count() >= 2 && v.0.iter().any(|e| matches!(e, ExtNat::Fin(n) if *n >= 1))
}

/// An `∞` entry plus either a finite entry `≥ 2` or two finite entries `≥ 1`.
pub fn has_np_shape(v: &ConstraintVector) -> bool {
    if v.inf_count() == 0 {
        return false;
    }
    let nonzero: Vec<u64> = v.0.iter().filter_map(|e| e.finite()).filter(|&n| n >= 1).collect();
    nonzero.iter().any(|&n| n >= 2) || nonzero.len() >= 2
}

/// Complexity of constrained synchronization for a constraint with this
/// vector representation. Only maximal vectors are inspected; the PSPACE
/// shape takes precedence over the NP shape. The empty set (empty language)
/// is `P`.
pub fn classify(set: &VectorSet) -> ComplexityClass {
    let max = maximal_vectors(set);
    if max.iter().any(has_pspace_shape) {
        ComplexityClass::PspaceComplete
    } else if max.iter().any(has_np_shape) {
        ComplexityClass::NpComplete
    } else {
        ComplexityClass::PolyTime
    }
}

/// Checked entry for raw vector lists: rejects empty and mixed-length input.
pub fn classify_vectors(vectors: &[ConstraintVector]) -> Result<ComplexityClass, ClassifyError> {
    Ok(classify(&VectorSet::from_vectors(vectors.to_vec())?))
}

/// Output of the full pipeline on a constraint automaton.
#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub commutative: bool,
    #[serde(serialize_with = "serialize_components")]
    pub components: Decomposition,
    pub vectors: Vec<ConstraintVector>,
    pub maximal_vectors: Vec<ConstraintVector>,
    pub complexity: ComplexityClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

fn serialize_components<S: Serializer>(dec: &Decomposition, s: S) -> Result<S::Ok, S::Error> {
    dec.components().serialize(s)
}

impl ClassificationReport {
    pub fn from_decomposition(dec: Decomposition) -> Self {
        let vectors = vector_of(&dec);
        let maximal = maximal_vectors(&vectors);
        let complexity = classify(&vectors);
        let warning = dec
            .is_empty_language()
            .then(|| "constraint language is empty; every instance is a no-instance".to_string());
        Self {
            commutative: true,
            vectors: vectors.iter().cloned().collect(),
            maximal_vectors: maximal.iter().cloned().collect(),
            components: dec,
            complexity,
            warning,
        }
    }
}

/// Completion, commutativity check, decomposition, vectors, maximal vectors,
/// classification.
pub fn classify_constraint(b: &PartialDfa) -> Result<ClassificationReport, ClassifyError> {
    let dec = decompose(b)?;
    Ok(ClassificationReport::from_decomposition(dec))
}

/// Builds a vector from a compact literal like `"2,inf,0"`.
pub fn parse_vector(text: &str) -> Result<ConstraintVector, AutomatonError> {
    text.split(',')
        .map(|t| match t.trim() {
            "inf" | "∞" => Ok(ExtNat::Inf),
            t => t
                .parse::<u64>()
                .map(ExtNat::Fin)
                .map_err(|_| AutomatonError::Malformed(format!("bad vector entry {t:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(ConstraintVector)
}

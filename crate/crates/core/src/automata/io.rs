//! Automaton documents.
//!
//! ```json
//! {"alphabet":["a","b"],"states":3,"initial":0,"finals":[2],
//!  "transitions":[{"from":0,"symbol":"a","to":1}]}
//! ```
//!
//! `initial` and `finals` are omitted for semi-automata. Missing
//! `(from, symbol)` pairs are only accepted by [`parse_partial_dfa`].

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Alphabet, AutomatonError, Dfa, PartialDfa, SemiAutomaton, State, Word};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AutomatonDoc {
    pub alphabet: Vec<String>,
    pub states: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<State>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finals: Option<Vec<State>>,
    pub transitions: Vec<TransitionDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub from: State,
    pub symbol: String,
    pub to: State,
}

impl AutomatonDoc {
    pub fn from_json(text: &str) -> Result<Self, AutomatonError> {
        serde_json::from_str(text).map_err(|e| AutomatonError::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("automaton documents serialize")
    }

    /// Validated alphabet plus the table with undefined entries set to `None`.
    fn table(&self) -> Result<(Alphabet, Vec<Option<State>>), AutomatonError> {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())?;
        if self.states == 0 {
            return Err(AutomatonError::NoStates);
        }
        let k = alphabet.len();
        let n = self.states;
        let mut delta = vec![None; n * k];
        for t in &self.transitions {
            let x = alphabet.index_of(&t.symbol)?;
            for state in [t.from, t.to] {
                if state >= n {
                    return Err(AutomatonError::StateOutOfRange { state, n });
                }
            }
            let slot = &mut delta[t.from * k + x];
            if slot.is_some() {
                return Err(AutomatonError::DuplicateTransition {
                    from: t.from,
                    symbol: t.symbol.clone(),
                });
            }
            *slot = Some(t.to);
        }
        Ok((alphabet, delta))
    }

    fn complete_table(&self) -> Result<SemiAutomaton, AutomatonError> {
        let (alphabet, delta) = self.table()?;
        let k = alphabet.len();
        let mut full = Vec::with_capacity(delta.len());
        for (i, t) in delta.into_iter().enumerate() {
            match t {
                Some(t) => full.push(t),
                None => {
                    return Err(AutomatonError::MissingTransition {
                        from: i / k,
                        symbol: alphabet.name(i % k).to_string(),
                    })
                }
            }
        }
        SemiAutomaton::new(alphabet, self.states, full)
    }

    fn initial_and_finals(&self) -> Result<(State, Vec<State>), AutomatonError> {
        let initial = self.initial.ok_or(AutomatonError::MissingField("initial"))?;
        let finals = self.finals.clone().ok_or(AutomatonError::MissingField("finals"))?;
        Ok((initial, finals))
    }

    pub fn from_semi(sa: &SemiAutomaton) -> Self {
        let k = sa.num_symbols();
        let mut transitions = Vec::with_capacity(sa.num_states() * k);
        for q in 0..sa.num_states() {
            for x in 0..k {
                transitions.push(TransitionDoc {
                    from: q,
                    symbol: sa.alphabet().name(x).to_string(),
                    to: sa.step(q, x),
                });
            }
        }
        Self {
            alphabet: sa.alphabet().symbols().to_vec(),
            states: sa.num_states(),
            initial: None,
            finals: None,
            transitions,
        }
    }

    pub fn from_dfa(d: &Dfa) -> Self {
        Self {
            initial: Some(d.initial()),
            finals: Some(d.finals()),
            ..Self::from_semi(d.base())
        }
    }

    pub fn from_partial(p: &PartialDfa) -> Self {
        let k = p.alphabet().len();
        let mut transitions = Vec::new();
        for q in 0..p.num_states() {
            for x in 0..k {
                if let Some(to) = p.step(q, x) {
                    transitions.push(TransitionDoc {
                        from: q,
                        symbol: p.alphabet().name(x).to_string(),
                        to,
                    });
                }
            }
        }
        Self {
            alphabet: p.alphabet().symbols().to_vec(),
            states: p.num_states(),
            initial: Some(p.initial()),
            finals: Some(p.finals()),
            transitions,
        }
    }
}

/// Parses a complete semi-automaton. `initial`/`finals`, if present, are ignored.
pub fn parse_semi_automaton(text: &str) -> Result<SemiAutomaton, AutomatonError> {
    AutomatonDoc::from_json(text)?.complete_table()
}

pub fn parse_dfa(text: &str) -> Result<Dfa, AutomatonError> {
    let doc = AutomatonDoc::from_json(text)?;
    let base = doc.complete_table()?;
    let (initial, finals) = doc.initial_and_finals()?;
    Dfa::new(base, initial, finals)
}

pub fn parse_partial_dfa(text: &str) -> Result<PartialDfa, AutomatonError> {
    let doc = AutomatonDoc::from_json(text)?;
    let (alphabet, delta) = doc.table()?;
    let (initial, finals) = doc.initial_and_finals()?;
    PartialDfa::new(alphabet, doc.states, initial, finals, delta)
}

pub fn serialize_semi_automaton(sa: &SemiAutomaton) -> String {
    AutomatonDoc::from_semi(sa).to_json()
}

pub fn serialize_dfa(d: &Dfa) -> String {
    AutomatonDoc::from_dfa(d).to_json()
}

pub fn serialize_partial_dfa(p: &PartialDfa) -> String {
    AutomatonDoc::from_partial(p).to_json()
}

/// Word as JSON: a string when every symbol name is one character, otherwise
/// an array of names.
pub fn word_to_json(w: &Word, alphabet: &Alphabet) -> Value {
    if alphabet.single_char_names() {
        Value::String(w.render(alphabet))
    } else {
        Value::Array(
            w.letters()
                .iter()
                .map(|&x| Value::String(alphabet.name(x).to_string()))
                .collect(),
        )
    }
}

pub fn word_from_json(v: &Value, alphabet: &Alphabet) -> Result<Word, AutomatonError> {
    match v {
        Value::String(s) => {
            if !alphabet.single_char_names() {
                return Err(AutomatonError::Malformed(
                    "string words need single-character symbol names".into(),
                ));
            }
            s.chars()
                .map(|c| alphabet.index_of(&c.to_string()))
                .collect::<Result<Vec<_>, _>>()
                .map(Word::new)
        }
        Value::Array(items) => items
            .iter()
            .map(|item| match item {
                Value::String(name) => alphabet.index_of(name),
                other => Err(AutomatonError::Malformed(format!("bad symbol {other}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word::new),
        other => Err(AutomatonError::Malformed(format!("bad word {other}"))),
    }
}

/// Graphviz rendering; parallel edges are merged into one labelled edge.
pub fn to_dot(sa: &SemiAutomaton, initial: Option<State>, finals: &[State], names: Option<&[String]>) -> String {
    let label = |q: State| -> String {
        names
            .and_then(|n| n.get(q).cloned())
            .unwrap_or_else(|| q.to_string())
    };
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n");
    for q in 0..sa.num_states() {
        let shape = if finals.contains(&q) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {q} [label=\"{}\", shape={shape}];", label(q));
    }
    if let Some(init) = initial {
        let _ = writeln!(out, "  start [shape=point];\n  start -> {init};");
    }
    for q in 0..sa.num_states() {
        let mut by_target: Vec<(State, Vec<&str>)> = Vec::new();
        for x in 0..sa.num_symbols() {
            let t = sa.step(q, x);
            match by_target.iter_mut().find(|(to, _)| *to == t) {
                Some((_, labels)) => labels.push(sa.alphabet().name(x)),
                None => by_target.push((t, vec![sa.alphabet().name(x)])),
            }
        }
        for (t, labels) in by_target {
            let _ = writeln!(out, "  {q} -> {t} [label=\"{}\"];", labels.join(","));
        }
    }
    out.push_str("}\n");
    out
}

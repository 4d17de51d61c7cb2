//! JSON file formats for automata, pair costs and linear-length specs, and a
//! JSON writer that prints every float with 17 significant digits.

use std::io;

use serde::{Deserialize, Serialize};

use crate::automaton::{CostAutomaton, StateId, Symbol, Transition};
use crate::error::{Error, Result};
use crate::lang_cost::PairCostFunction;
use crate::linlen::{LinearLengthSpec, LinearSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDocument {
    pub from: String,
    pub symbol: String,
    pub to: String,
    #[serde(default)]
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonDocument {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    /// Absent only for the automaton with no states.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    #[serde(default)]
    pub accepting: Vec<String>,
    #[serde(default)]
    pub transitions: Vec<TransitionDocument>,
}

impl AutomatonDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// The canonical document of `a`: states, alphabet and accepting states
    /// sorted, transitions sorted by `(from, symbol, to)`.
    pub fn from_automaton(a: &CostAutomaton) -> Self {
        let sorted = |v: Vec<String>| {
            let mut v = v;
            v.sort();
            v
        };
        let mut transitions: Vec<TransitionDocument> = a
            .transitions
            .iter()
            .map(|t| TransitionDocument {
                from: t.from.to_string(),
                symbol: t.symbol.to_string(),
                to: t.to.to_string(),
                cost: t.cost,
            })
            .collect();
        transitions.sort_by(|x, y| (&x.from, &x.symbol, &x.to).cmp(&(&y.from, &y.symbol, &y.to)));
        AutomatonDocument {
            alphabet: sorted(a.alphabet.iter().map(ToString::to_string).collect()),
            states: sorted(a.states.iter().map(ToString::to_string).collect()),
            initial: a.initial.as_ref().map(ToString::to_string),
            accepting: sorted(a.accepting.iter().map(ToString::to_string).collect()),
            transitions,
        }
    }

    /// The automaton described, without validation.
    pub fn to_automaton_unchecked(&self) -> CostAutomaton {
        CostAutomaton {
            alphabet: self.alphabet.iter().map(Symbol::new).collect(),
            states: self.states.iter().map(StateId::new).collect(),
            initial: self.initial.as_ref().map(StateId::new),
            accepting: self.accepting.iter().map(StateId::new).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition::new(t.from.as_str(), t.symbol.as_str(), t.to.as_str(), t.cost))
                .collect(),
        }
    }

    /// The automaton described; fails with [`Error::Invalid`] listing every violation.
    pub fn to_automaton(&self) -> Result<CostAutomaton> {
        let a = self.to_automaton_unchecked();
        let violations = a.validate();
        if violations.is_empty() {
            Ok(a)
        } else {
            Err(Error::Invalid(violations))
        }
    }
}

pub fn parse_automaton(text: &str) -> Result<CostAutomaton> {
    AutomatonDocument::parse(text)?.to_automaton()
}

/// Canonical JSON of `a`.
pub fn automaton_to_json(a: &CostAutomaton) -> String {
    to_json_pretty(&AutomatonDocument::from_automaton(a))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCostEntry {
    pub first: String,
    pub second: String,
    pub cost: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCostDocument {
    #[serde(default)]
    pub pairs: Vec<PairCostEntry>,
    #[serde(default)]
    pub default: f64,
}

impl PairCostDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Resolves the pairs against `alphabet`.
    pub fn to_function(&self, alphabet: &[Symbol]) -> Result<PairCostFunction> {
        let mut u = PairCostFunction::new(alphabet.iter().map(Symbol::as_str)).with_default(self.default);
        if !self.default.is_finite() {
            return Err(Error::InvalidArgument("default pair cost must be finite".into()));
        }
        for p in &self.pairs {
            if !p.cost.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "pair ({},{}) has a non-finite cost",
                    p.first, p.second
                )));
            }
            u = u.with(&p.first, &p.second, p.cost);
        }
        u.check()?;
        Ok(u)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearLengthDocument {
    pub base: AutomatonDocument,
    pub parts: Vec<AutomatonDocument>,
    pub offset: Vec<i64>,
    #[serde(default)]
    pub periods: Vec<Vec<i64>>,
    #[serde(default)]
    pub pair_costs: PairCostDocument,
}

/// A single spec or `{"union": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LinlenDocument {
    Union { union: Vec<LinearLengthDocument> },
    Single(LinearLengthDocument),
}

fn naturals(v: &[i64], what: &str) -> Result<Vec<u64>> {
    v.iter()
        .map(|&x| u64::try_from(x).map_err(|_| Error::InvalidLinearSet(format!("{what} must be positive"))))
        .collect()
}

impl LinearLengthDocument {
    pub fn to_spec(&self) -> Result<LinearLengthSpec> {
        let base = self.base.to_automaton()?;
        let parts = self
            .parts
            .iter()
            .map(AutomatonDocument::to_automaton)
            .collect::<Result<Vec<_>>>()?;
        let periods = self
            .periods
            .iter()
            .map(|p| naturals(p, "periods"))
            .collect::<Result<Vec<_>>>()?;
        let lengths = LinearSet::new(naturals(&self.offset, "offset")?, periods)?;
        let mut alphabet: Vec<Symbol> = Vec::new();
        for a in std::iter::once(&base).chain(&parts) {
            for s in &a.alphabet {
                if !alphabet.contains(s) {
                    alphabet.push(s.clone());
                }
            }
        }
        let pair_cost = self.pair_costs.to_function(&alphabet)?;
        Ok(LinearLengthSpec {
            base,
            parts,
            lengths,
            pair_cost,
        })
    }
}

impl LinlenDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_specs(&self) -> Result<Vec<LinearLengthSpec>> {
        match self {
            LinlenDocument::Single(d) => Ok(vec![d.to_spec()?]),
            LinlenDocument::Union { union } => union.iter().map(LinearLengthDocument::to_spec).collect(),
        }
    }
}

/// Writes floats in scientific notation with 17 significant digits, which
/// round-trips every `f64`.
#[derive(Clone, Debug, Default)]
pub struct PreciseFormatter {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.inner.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl serde_json::ser::Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );
}

/// Pretty JSON with 17-significant-digit floats.
pub fn to_json_pretty<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PreciseFormatter::default());
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

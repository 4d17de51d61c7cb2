//! Cost automata: NFAs whose transitions carry a real cost.
//!
//! [`CostAutomaton`] is the name-based data model that files are parsed into.
//! It may be invalid; [`CostAutomaton::validate`] reports every problem and the
//! structural algorithms work on the index-based [`Indexed`] view obtained from
//! [`CostAutomaton::index`].

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An input symbol. Symbols compare by exact text equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(String);

impl Symbol {
    pub fn new(name: impl Into<String>) -> Self {
        Symbol(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol(s.to_owned())
    }
}

/// A state name, unique within an automaton.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(String);

impl StateId {
    pub fn new(name: impl Into<String>) -> Self {
        StateId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for StateId {
    fn from(s: &str) -> Self {
        StateId(s.to_owned())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub from: StateId,
    pub symbol: Symbol,
    pub to: StateId,
    pub cost: f64,
}

impl Transition {
    pub fn new(from: impl Into<String>, symbol: impl Into<String>, to: impl Into<String>, cost: f64) -> Self {
        Transition {
            from: StateId::new(from),
            symbol: Symbol::new(symbol),
            to: StateId::new(to),
            cost,
        }
    }
}

/// A problem found by [`CostAutomaton::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    InvalidSymbolName(String),
    InvalidStateName(String),
    DuplicateSymbol(Symbol),
    DuplicateState(StateId),
    MissingInitial,
    UnknownInitial(StateId),
    UnknownAccepting(StateId),
    UnknownState { transition: String, state: StateId },
    UnknownSymbol { transition: String, symbol: Symbol },
    DuplicateTransition(String),
    NonFiniteCost(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidSymbolName(s) => write!(f, "invalid symbol name {s:?}"),
            Violation::InvalidStateName(s) => write!(f, "invalid state name {s:?}"),
            Violation::DuplicateSymbol(s) => write!(f, "duplicate symbol {s}"),
            Violation::DuplicateState(s) => write!(f, "duplicate state {s}"),
            Violation::MissingInitial => write!(f, "missing initial state"),
            Violation::UnknownInitial(s) => write!(f, "unknown initial state {s}"),
            Violation::UnknownAccepting(s) => write!(f, "unknown accepting state {s}"),
            Violation::UnknownState { transition, state } => {
                write!(f, "unknown state {state} in transition {transition}")
            }
            Violation::UnknownSymbol { transition, symbol } => {
                write!(f, "unknown symbol {symbol} in transition {transition}")
            }
            Violation::DuplicateTransition(t) => write!(f, "duplicate transition {t}"),
            Violation::NonFiniteCost(t) => write!(f, "non-finite cost on transition {t}"),
        }
    }
}

/// A nondeterministic finite automaton with a real cost on every transition.
///
/// The automaton with no states (and no initial state) is the distinguished
/// empty automaton; every energy of it is 0.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CostAutomaton {
    pub alphabet: Vec<Symbol>,
    pub states: Vec<StateId>,
    pub initial: Option<StateId>,
    pub accepting: Vec<StateId>,
    pub transitions: Vec<Transition>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

fn triple(t: &Transition) -> String {
    format!("({},{},{})", t.from, t.symbol, t.to)
}

impl CostAutomaton {
    /// The empty automaton over `alphabet`.
    pub fn empty(alphabet: Vec<Symbol>) -> Self {
        CostAutomaton {
            alphabet,
            ..Default::default()
        }
    }

    /// Builds an automaton whose states and alphabet are inferred from the
    /// edges, in order of first appearance (the initial state first).
    pub fn from_edges(initial: &str, accepting: &[&str], edges: &[(&str, &str, &str, f64)]) -> Self {
        let mut states: Vec<StateId> = vec![StateId::from(initial)];
        let mut alphabet: Vec<Symbol> = Vec::new();
        let push_state = |s: &str, states: &mut Vec<StateId>| {
            if !states.iter().any(|x| x.as_str() == s) {
                states.push(StateId::from(s));
            }
        };
        for &(p, a, q, _) in edges {
            push_state(p, &mut states);
            push_state(q, &mut states);
            if !alphabet.iter().any(|x| x.as_str() == a) {
                alphabet.push(Symbol::from(a));
            }
        }
        for &s in accepting {
            push_state(s, &mut states);
        }
        CostAutomaton {
            alphabet,
            states,
            initial: Some(StateId::from(initial)),
            accepting: accepting.iter().map(|&s| StateId::from(s)).collect(),
            transitions: edges.iter().map(|&(p, a, q, c)| Transition::new(p, a, q, c)).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Returns every violated invariant; an empty list means the automaton is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut symbols = HashSet::new();
        for s in &self.alphabet {
            if !valid_name(s.as_str()) {
                out.push(Violation::InvalidSymbolName(s.as_str().to_owned()));
            }
            if !symbols.insert(s) {
                out.push(Violation::DuplicateSymbol(s.clone()));
            }
        }
        let mut states = HashSet::new();
        for s in &self.states {
            if !valid_name(s.as_str()) {
                out.push(Violation::InvalidStateName(s.as_str().to_owned()));
            }
            if !states.insert(s) {
                out.push(Violation::DuplicateState(s.clone()));
            }
        }
        match &self.initial {
            None if !self.states.is_empty() => out.push(Violation::MissingInitial),
            Some(i) if !states.contains(i) => out.push(Violation::UnknownInitial(i.clone())),
            _ => {}
        }
        for s in &self.accepting {
            if !states.contains(s) {
                out.push(Violation::UnknownAccepting(s.clone()));
            }
        }
        let mut seen = HashSet::new();
        for t in &self.transitions {
            for s in [&t.from, &t.to] {
                if !states.contains(s) {
                    out.push(Violation::UnknownState {
                        transition: triple(t),
                        state: s.clone(),
                    });
                }
            }
            if !symbols.contains(&t.symbol) {
                out.push(Violation::UnknownSymbol {
                    transition: triple(t),
                    symbol: t.symbol.clone(),
                });
            }
            if !t.cost.is_finite() {
                out.push(Violation::NonFiniteCost(triple(t)));
            }
            if !seen.insert((&t.from, &t.symbol, &t.to)) {
                out.push(Violation::DuplicateTransition(triple(t)));
            }
        }
        out
    }

    /// Index-based view; fails with [`Error::Invalid`] when validation fails.
    pub fn index(&self) -> Result<Indexed> {
        self.index_checked(self.validate())
    }

    /// Like [`CostAutomaton::index`] but accepts a missing initial state, as
    /// for a component cut out of a larger automaton.
    pub(crate) fn index_graph(&self) -> Result<Indexed> {
        let mut violations = self.validate();
        violations.retain(|v| *v != Violation::MissingInitial);
        self.index_checked(violations)
    }

    fn index_checked(&self, violations: Vec<Violation>) -> Result<Indexed> {
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        let state_ix: HashMap<&StateId, usize> = self.states.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let sym_ix: HashMap<&Symbol, usize> = self.alphabet.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut accepting = vec![false; self.states.len()];
        for s in &self.accepting {
            accepting[state_ix[s]] = true;
        }
        Ok(Indexed {
            num_states: self.states.len(),
            num_symbols: self.alphabet.len(),
            initial: self.initial.as_ref().map(|s| state_ix[s]),
            accepting,
            edges: self
                .transitions
                .iter()
                .map(|t| Edge {
                    from: state_ix[&t.from],
                    symbol: sym_ix[&t.symbol],
                    to: state_ix[&t.to],
                    cost: t.cost,
                })
                .collect(),
        })
    }

    /// True when every (state, symbol) pair has at most one successor.
    pub fn is_deterministic(&self) -> bool {
        self.nondeterministic_pair().is_none()
    }

    pub(crate) fn nondeterministic_pair(&self) -> Option<(StateId, Symbol)> {
        let mut seen = HashSet::new();
        self.transitions
            .iter()
            .find(|t| !seen.insert((&t.from, &t.symbol)))
            .map(|t| (t.from.clone(), t.symbol.clone()))
    }

    pub(crate) fn require_deterministic(&self) -> Result<()> {
        match self.nondeterministic_pair() {
            None => Ok(()),
            Some((state, symbol)) => Err(Error::NotDeterministic {
                state: state.to_string(),
                symbol: symbol.to_string(),
            }),
        }
    }

    /// NFA acceptance of a word given as symbol names.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> bool {
        let Some(init) = &self.initial else {
            return false;
        };
        let mut current: BTreeSet<&StateId> = BTreeSet::from([init]);
        for a in word {
            let a = a.as_ref();
            current = self
                .transitions
                .iter()
                .filter(|t| t.symbol.as_str() == a && current.contains(&t.from))
                .map(|t| &t.to)
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|s| self.accepting.contains(s))
    }

    /// Copy with every transition cost replaced by `f(transition)`.
    pub fn map_costs(&self, mut f: impl FnMut(&Transition) -> f64) -> Self {
        let mut out = self.clone();
        for t in &mut out.transitions {
            t.cost = f(t);
        }
        out
    }

    pub fn zero_costs(&self) -> Self {
        self.map_costs(|_| 0.0)
    }

    /// Sub-automaton induced by `keep` (transitions between kept states only).
    /// The initial state is kept only if it belongs to `keep`.
    pub fn restrict(&self, keep: &[StateId]) -> Self {
        let set: HashSet<&StateId> = keep.iter().collect();
        CostAutomaton {
            alphabet: self.alphabet.clone(),
            states: self.states.iter().filter(|s| set.contains(s)).cloned().collect(),
            initial: self.initial.clone().filter(|s| set.contains(s)),
            accepting: self.accepting.iter().filter(|s| set.contains(s)).cloned().collect(),
            transitions: self
                .transitions
                .iter()
                .filter(|t| set.contains(&t.from) && set.contains(&t.to))
                .cloned()
                .collect(),
        }
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s.as_str() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub symbol: usize,
    pub to: usize,
    pub cost: f64,
}

/// Index-based automaton: states `0..num_states`, symbols `0..num_symbols`.
#[derive(Clone, Debug)]
pub struct Indexed {
    pub num_states: usize,
    pub num_symbols: usize,
    pub initial: Option<usize>,
    pub accepting: Vec<bool>,
    pub edges: Vec<Edge>,
}

impl Indexed {
    /// Outgoing edge lists per state.
    pub fn out_edges(&self) -> Vec<Vec<Edge>> {
        let mut out = vec![Vec::new(); self.num_states];
        for e in &self.edges {
            out[e.from].push(*e);
        }
        out
    }
}

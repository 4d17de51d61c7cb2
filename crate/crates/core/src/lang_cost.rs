//! Costs on ordered symbol pairs and automata that realise them.
//!
//! A word `x₁x₂⋯xₙ` costs `Σ U(xᵢ, xᵢ₊₁)`; words of length 0 and 1 cost 0.
//! A cost automaton *implements* `(L, U)` when it accepts exactly `L` and
//! every accepting run on every word of length ≥ 2 has the word's cost.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::automaton::{CostAutomaton, StateId, Symbol, Transition};
use crate::energy::{free_energy_with, EnergyOptions, EnergyReport};
use crate::error::{Error, Result};
use crate::structure::trim_or_empty;

/// Real cost on ordered symbol pairs; unlisted pairs get `default`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairCostFunction {
    pub alphabet: Vec<Symbol>,
    pub entries: BTreeMap<(Symbol, Symbol), f64>,
    pub default: f64,
}

impl PairCostFunction {
    pub fn new<S: AsRef<str>>(alphabet: impl IntoIterator<Item = S>) -> Self {
        PairCostFunction {
            alphabet: alphabet.into_iter().map(|s| Symbol::new(s.as_ref())).collect(),
            entries: BTreeMap::new(),
            default: 0.0,
        }
    }

    /// The zero cost over the alphabet of `a`.
    pub fn zero_for(a: &CostAutomaton) -> Self {
        PairCostFunction {
            alphabet: a.alphabet.clone(),
            entries: BTreeMap::new(),
            default: 0.0,
        }
    }

    pub fn with(mut self, first: &str, second: &str, cost: f64) -> Self {
        self.entries.insert((Symbol::from(first), Symbol::from(second)), cost);
        self
    }

    pub fn with_default(mut self, default: f64) -> Self {
        self.default = default;
        self
    }

    pub fn get(&self, first: &Symbol, second: &Symbol) -> f64 {
        self.entries
            .get(&(first.clone(), second.clone()))
            .copied()
            .unwrap_or(self.default)
    }

    /// `U + c` on every pair.
    pub fn shifted(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.default += c;
        out.entries.values_mut().for_each(|v| *v += c);
        out
    }

    /// Fails with [`Error::UnknownSymbol`] if an entry names a symbol outside the alphabet.
    pub fn check(&self) -> Result<()> {
        for (a, b) in self.entries.keys() {
            for s in [a, b] {
                if !self.alphabet.contains(s) {
                    return Err(Error::UnknownSymbol(s.to_string()));
                }
            }
        }
        Ok(())
    }

    fn require_symbols<'a>(&self, symbols: impl IntoIterator<Item = &'a Symbol>) -> Result<()> {
        for s in symbols {
            if !self.alphabet.contains(s) {
                return Err(Error::UnknownSymbol(s.to_string()));
            }
        }
        Ok(())
    }
}

/// Total pair cost of a word.
pub fn word_cost<S: AsRef<str>>(u: &PairCostFunction, word: &[S]) -> Result<f64> {
    let word: Vec<Symbol> = word.iter().map(|s| Symbol::new(s.as_ref())).collect();
    u.require_symbols(&word)?;
    Ok(word.windows(2).map(|w| u.get(&w[0], &w[1])).sum())
}

/// Builds a DFA with transition costs that implements `(L(dfa), u)`.
///
/// Its states are the initial state of `dfa` plus one state `(p,a,q)` per
/// transition of `dfa`, remembering the last symbol read. Entering `(q,b,s)`
/// from `(p,a,q)` costs `U(a,b)`; the entry edges out of the initial state
/// cost 0. `(p,a,q)` accepts iff `q` does, and the initial state keeps its
/// own acceptance, so the language is preserved for every length.
pub fn implement_construction(dfa: &CostAutomaton, u: &PairCostFunction) -> Result<CostAutomaton> {
    dfa.require_deterministic()?;
    u.check()?;
    let dfa = trim_or_empty(dfa)?;
    u.require_symbols(&dfa.alphabet)?;
    if dfa.is_empty() {
        return Ok(dfa);
    }
    let ix = dfa.index()?;
    let init = ix.initial.expect("trimmed automaton has an initial state");

    let edge_names: Vec<String> = ix
        .edges
        .iter()
        .map(|e| {
            format!(
                "({},{},{})",
                dfa.states[e.from], dfa.alphabet[e.symbol], dfa.states[e.to]
            )
        })
        .collect();
    let mut start = dfa.states[init].to_string();
    while edge_names.contains(&start) {
        start.insert(0, '^');
    }

    let mut by_source: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, e) in ix.edges.iter().enumerate() {
        by_source.entry(e.from).or_default().push(k);
    }
    let mut transitions = Vec::new();
    for &k in by_source.get(&init).into_iter().flatten() {
        let e = ix.edges[k];
        transitions.push(Transition {
            from: StateId::new(start.clone()),
            symbol: dfa.alphabet[e.symbol].clone(),
            to: StateId::new(edge_names[k].clone()),
            cost: 0.0,
        });
    }
    for (k, e) in ix.edges.iter().enumerate() {
        for &next in by_source.get(&e.to).into_iter().flatten() {
            let f = ix.edges[next];
            transitions.push(Transition {
                from: StateId::new(edge_names[k].clone()),
                symbol: dfa.alphabet[f.symbol].clone(),
                to: StateId::new(edge_names[next].clone()),
                cost: u.get(&dfa.alphabet[e.symbol], &dfa.alphabet[f.symbol]),
            });
        }
    }
    let mut states = vec![StateId::new(start.clone())];
    states.extend(edge_names.iter().map(|n| StateId::new(n.clone())));
    let mut accepting = Vec::new();
    if ix.accepting[init] {
        accepting.push(StateId::new(start.clone()));
    }
    for (k, e) in ix.edges.iter().enumerate() {
        if ix.accepting[e.to] {
            accepting.push(StateId::new(edge_names[k].clone()));
        }
    }
    let built = CostAutomaton {
        alphabet: dfa.alphabet.clone(),
        states,
        initial: Some(StateId::new(start)),
        accepting,
        transitions,
    };
    trim_or_empty(&built)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterexampleKind {
    /// The word is in exactly one of the two languages.
    LanguageMismatch { in_machine: bool, in_language: bool },
    /// An accepting run's cost differs from the word's cost.
    CostMismatch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub kind: CounterexampleKind,
    pub word: Vec<String>,
    /// States visited by the offending run (empty for a language mismatch
    /// where the machine has no accepting run).
    pub run: Vec<String>,
    pub word_cost: f64,
    pub run_cost: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImplementsReport {
    pub holds: bool,
    pub checked_up_to: usize,
    pub counterexample: Option<Counterexample>,
}

const COST_TOLERANCE: f64 = 1e-9;

/// Cheapest and most expensive run reaching a state, with witnesses.
#[derive(Clone, Debug)]
struct RunBounds {
    min: f64,
    min_path: Vec<usize>,
    max: f64,
    max_path: Vec<usize>,
}

/// Checks `(m, its costs)` implements `(L(dfa_for_l), u)` on all words up to
/// `max_len`, shortest words first. Cost mismatches on words shorter than 2
/// are not counted.
pub fn verify_implements(
    m: &CostAutomaton,
    dfa_for_l: &CostAutomaton,
    u: &PairCostFunction,
    max_len: usize,
) -> Result<ImplementsReport> {
    dfa_for_l.require_deterministic()?;
    let mx = m.index()?;
    let lx = dfa_for_l.index()?;

    let mut alphabet: Vec<Symbol> = m.alphabet.clone();
    for s in &dfa_for_l.alphabet {
        if !alphabet.contains(s) {
            alphabet.push(s.clone());
        }
    }
    let m_sym: Vec<Option<usize>> = alphabet
        .iter()
        .map(|s| m.alphabet.iter().position(|t| t == s))
        .collect();
    let l_sym: Vec<Option<usize>> = alphabet
        .iter()
        .map(|s| dfa_for_l.alphabet.iter().position(|t| t == s))
        .collect();
    let m_out = mx.out_edges();
    let mut l_next: HashMap<(usize, usize), usize> = HashMap::new();
    for e in &lx.edges {
        l_next.insert((e.from, e.symbol), e.to);
    }

    struct Prefix {
        word: Vec<usize>,
        runs: BTreeMap<usize, RunBounds>,
        lang: Option<usize>,
    }
    let mut frontier = vec![Prefix {
        word: Vec::new(),
        runs: mx
            .initial
            .map(|i| {
                BTreeMap::from([(
                    i,
                    RunBounds {
                        min: 0.0,
                        min_path: vec![i],
                        max: 0.0,
                        max_path: vec![i],
                    },
                )])
            })
            .unwrap_or_default(),
        lang: lx.initial,
    }];

    let names = |word: &[usize]| word.iter().map(|&s| alphabet[s].to_string()).collect::<Vec<_>>();
    let path_names = |path: &[usize]| path.iter().map(|&q| m.states[q].to_string()).collect::<Vec<_>>();

    for len in 0..=max_len {
        for p in &frontier {
            let accepting_runs: Vec<&RunBounds> = p
                .runs
                .iter()
                .filter(|(q, _)| mx.accepting[**q])
                .map(|(_, r)| r)
                .collect();
            let in_machine = !accepting_runs.is_empty();
            let in_language = p.lang.is_some_and(|q| lx.accepting[q]);
            let word: Vec<Symbol> = p.word.iter().map(|&s| alphabet[s].clone()).collect();
            let wc: f64 = word.windows(2).map(|w| u.get(&w[0], &w[1])).sum();
            if in_machine != in_language {
                let run = accepting_runs.first().map(|r| (path_names(&r.min_path), r.min));
                return Ok(ImplementsReport {
                    holds: false,
                    checked_up_to: len,
                    counterexample: Some(Counterexample {
                        kind: CounterexampleKind::LanguageMismatch {
                            in_machine,
                            in_language,
                        },
                        word: names(&p.word),
                        run: run.as_ref().map(|r| r.0.clone()).unwrap_or_default(),
                        word_cost: wc,
                        run_cost: run.map(|r| r.1),
                    }),
                });
            }
            if in_language && len >= 2 {
                for r in &accepting_runs {
                    for (cost, path) in [(r.min, &r.min_path), (r.max, &r.max_path)] {
                        if (cost - wc).abs() > COST_TOLERANCE {
                            return Ok(ImplementsReport {
                                holds: false,
                                checked_up_to: len,
                                counterexample: Some(Counterexample {
                                    kind: CounterexampleKind::CostMismatch,
                                    word: names(&p.word),
                                    run: path_names(path),
                                    word_cost: wc,
                                    run_cost: Some(cost),
                                }),
                            });
                        }
                    }
                }
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for p in &frontier {
            for s in 0..alphabet.len() {
                let lang = l_sym[s].and_then(|ls| p.lang.and_then(|q| l_next.get(&(q, ls)).copied()));
                let mut runs: BTreeMap<usize, RunBounds> = BTreeMap::new();
                if let Some(ms) = m_sym[s] {
                    for (&q, r) in &p.runs {
                        for e in m_out[q].iter().filter(|e| e.symbol == ms) {
                            let (lo, hi) = (r.min + e.cost, r.max + e.cost);
                            let extend = |path: &Vec<usize>| {
                                let mut v = path.clone();
                                v.push(e.to);
                                v
                            };
                            match runs.get_mut(&e.to) {
                                None => {
                                    runs.insert(
                                        e.to,
                                        RunBounds {
                                            min: lo,
                                            min_path: extend(&r.min_path),
                                            max: hi,
                                            max_path: extend(&r.max_path),
                                        },
                                    );
                                }
                                Some(b) => {
                                    if lo < b.min {
                                        b.min = lo;
                                        b.min_path = extend(&r.min_path);
                                    }
                                    if hi > b.max {
                                        b.max = hi;
                                        b.max_path = extend(&r.max_path);
                                    }
                                }
                            }
                        }
                    }
                }
                if runs.is_empty() && lang.is_none() {
                    continue;
                }
                let mut word = p.word.clone();
                word.push(s);
                next.push(Prefix { word, runs, lang });
            }
        }
        frontier = next;
    }
    Ok(ImplementsReport {
        holds: true,
        checked_up_to: max_len,
        counterexample: None,
    })
}

/// Free energy of `(L(dfa), u)`, computed on the implementing DFA.
pub fn language_energy(dfa: &CostAutomaton, u: &PairCostFunction) -> Result<EnergyReport> {
    language_energy_with(dfa, u, &EnergyOptions::default())
}

pub fn language_energy_with(
    dfa: &CostAutomaton,
    u: &PairCostFunction,
    options: &EnergyOptions,
) -> Result<EnergyReport> {
    free_energy_with(&implement_construction(dfa, u)?, options)
}

//! Free energy of linear-length languages.
//!
//! A linear-length language is `L = L′ ∩ { w₁⋯w_k : wᵢ ∈ rᵢ, (|w₁|,…,|w_k|) ∈ D }`
//! for regular `L′`, `r₁…r_k` and a linear set `D = d₀ + ℕd₁ + ⋯ + ℕd_m`.
//!
//! The energy is computed on a regular stand-in. A word of `L` is cut into
//! blocks: one block of shape `d₀` followed by blocks of shapes `d₁`, then
//! `d₂`, … (in that order), where a block of shape `d` holds a word of length
//! `d[j]` on each track `j`. Each block becomes one *block symbol* followed by
//! `|d| − 1` *stutter symbols*, so the translation preserves length. A block
//! symbol also records the last symbol read on every track, which lets the
//! pair cost of consecutive symbols on a track be charged when the next block
//! starts:
//!
//! * block symbol → its stutter: the in-block pair costs of every track;
//! * stutter → stutter: 0;
//! * block (or its last stutter) → next block symbol: `U(last, first)` on
//!   every track the next block extends.
//!
//! Track `j`'s costs therefore total `U(wⱼ)`; the pair costs at the `k − 1`
//! junctions between tracks are not charged, which changes word costs by a
//! bounded amount and leaves the growth rate intact. Words may have several
//! block decompositions (polynomially many), which does not affect the rate
//! either.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::automaton::{CostAutomaton, StateId, Symbol, Transition};
use crate::energy::{free_energy_with, EnergyOptions, EnergyReport};
use crate::error::{Error, Result};
use crate::lang_cost::PairCostFunction;
use crate::oracle::{PartitionSeries, SeriesKind};
use crate::structure::trim_or_empty;

/// Default bound on the number of block tuples `Σᵢ |Σ|^{|dᵢ|}`.
pub const DEFAULT_BLOCK_CAP: usize = 20_000;

/// `{ d₀ + s₁d₁ + ⋯ + s_m d_m : sᵢ ≥ 0 }` with a strictly positive offset and
/// distinct nonzero periods.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSet {
    offset: Vec<u64>,
    periods: Vec<Vec<u64>>,
}

impl LinearSet {
    pub fn new(offset: Vec<u64>, periods: Vec<Vec<u64>>) -> Result<Self> {
        if offset.is_empty() {
            return Err(Error::InvalidLinearSet("arity must be positive".into()));
        }
        if offset.contains(&0) {
            return Err(Error::InvalidLinearSet("offset must be positive".into()));
        }
        for (i, p) in periods.iter().enumerate() {
            if p.len() != offset.len() {
                return Err(Error::InvalidLinearSet(format!(
                    "period {} has arity {}, expected {}",
                    i + 1,
                    p.len(),
                    offset.len()
                )));
            }
            if p.iter().all(|&x| x == 0) {
                return Err(Error::InvalidLinearSet(format!("period {} is zero", i + 1)));
            }
            if periods[..i].contains(p) {
                return Err(Error::InvalidLinearSet(format!("period {} is repeated", i + 1)));
            }
        }
        Ok(LinearSet { offset, periods })
    }

    pub fn arity(&self) -> usize {
        self.offset.len()
    }

    pub fn offset(&self) -> &[u64] {
        &self.offset
    }

    pub fn periods(&self) -> &[Vec<u64>] {
        &self.periods
    }

    /// `[d₀, d₁, …, d_m]`.
    fn vectors(&self) -> impl Iterator<Item = &Vec<u64>> {
        std::iter::once(&self.offset).chain(&self.periods)
    }
}

/// Whether `v ∈ D`. Exact: each coefficient is bounded by the largest
/// coordinate of `v` because every period is nonzero.
pub fn linear_set_member(d: &LinearSet, v: &[u64]) -> bool {
    if v.len() != d.arity() {
        return false;
    }
    let Some(rest) = v
        .iter()
        .zip(&d.offset)
        .map(|(&x, &o)| x.checked_sub(o))
        .collect::<Option<Vec<u64>>>()
    else {
        return false;
    };
    fn search(rest: &mut [u64], periods: &[Vec<u64>]) -> bool {
        if rest.iter().all(|&x| x == 0) {
            return true;
        }
        let Some((p, tail)) = periods.split_first() else {
            return false;
        };
        if search(rest, tail) {
            return true;
        }
        let mut taken = 0;
        while rest.iter().zip(p).all(|(&x, &y)| x >= y) {
            rest.iter_mut().zip(p).for_each(|(x, &y)| *x -= y);
            taken += 1;
            if search(rest, tail) {
                rest.iter_mut().zip(p).for_each(|(x, &y)| *x += y * taken);
                return true;
            }
        }
        rest.iter_mut().zip(p).for_each(|(x, &y)| *x += y * taken);
        false
    }
    let mut rest = rest;
    search(&mut rest, &d.periods)
}

/// `L′ ∩ { w₁⋯w_k : wᵢ ∈ rᵢ, lengths ∈ D }` with a pair cost.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearLengthSpec {
    /// DFA for `L′`.
    pub base: CostAutomaton,
    /// DFAs for `r₁ … r_k`.
    pub parts: Vec<CostAutomaton>,
    pub lengths: LinearSet,
    pub pair_cost: PairCostFunction,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinlenOptions {
    pub block_cap: usize,
    pub energy: EnergyOptions,
}

impl Default for LinlenOptions {
    fn default() -> Self {
        LinlenOptions {
            block_cap: DEFAULT_BLOCK_CAP,
            energy: EnergyOptions::default(),
        }
    }
}

/// Per-track words read, part states reached and base states reached.
type Block = (Vec<Vec<usize>>, Vec<usize>, Vec<usize>);

/// Total-function view of a trimmed DFA over the shared alphabet.
#[derive(Clone, Debug)]
struct Table {
    init: Option<usize>,
    accepting: Vec<bool>,
    next: Vec<Vec<Option<usize>>>,
}

impl Table {
    fn new(a: &CostAutomaton, alphabet: &[Symbol]) -> Result<Self> {
        let a = trim_or_empty(a)?;
        let ix = a.index()?;
        let mut next = vec![vec![None; alphabet.len()]; ix.num_states];
        for e in &ix.edges {
            let global = alphabet
                .iter()
                .position(|s| *s == a.alphabet[e.symbol])
                .expect("shared alphabet contains every symbol");
            next[e.from][global] = Some(e.to);
        }
        Ok(Table {
            init: ix.initial,
            accepting: ix.accepting,
            next,
        })
    }

    fn len(&self) -> usize {
        self.accepting.len()
    }
}

struct Prepared {
    alphabet: Vec<Symbol>,
    base: Table,
    parts: Vec<Table>,
    /// Pair costs indexed by shared-alphabet position.
    cost: Vec<Vec<f64>>,
}

impl LinearLengthSpec {
    pub fn check(&self) -> Result<()> {
        if self.parts.is_empty() {
            return Err(Error::InvalidArgument("at least one part language is required".into()));
        }
        if self.parts.len() != self.lengths.arity() {
            return Err(Error::InvalidArgument(format!(
                "{} part languages but the linear set has arity {}",
                self.parts.len(),
                self.lengths.arity()
            )));
        }
        for a in std::iter::once(&self.base).chain(&self.parts) {
            a.index()?;
            a.require_deterministic()?;
        }
        self.pair_cost.check()
    }

    fn prepare(&self) -> Result<Prepared> {
        self.check()?;
        let mut alphabet: Vec<Symbol> = Vec::new();
        for a in std::iter::once(&self.base).chain(&self.parts) {
            for s in &a.alphabet {
                if !alphabet.contains(s) {
                    alphabet.push(s.clone());
                }
            }
        }
        for s in &alphabet {
            if !self.pair_cost.alphabet.contains(s) {
                return Err(Error::UnknownSymbol(s.to_string()));
            }
        }
        let cost = alphabet
            .iter()
            .map(|a| alphabet.iter().map(|b| self.pair_cost.get(a, b)).collect())
            .collect();
        Ok(Prepared {
            base: Table::new(&self.base, &alphabet)?,
            parts: self
                .parts
                .iter()
                .map(|p| Table::new(p, &alphabet))
                .collect::<Result<_>>()?,
            alphabet,
            cost,
        })
    }

    fn is_trivially_empty(p: &Prepared) -> bool {
        p.base.init.is_none() || p.parts.iter().any(|t| t.init.is_none())
    }
}

/// Number of block tuples over all shapes, saturating.
fn block_count(alphabet: usize, d: &LinearSet) -> u128 {
    d.vectors()
        .map(|v| {
            let size: u64 = v.iter().sum();
            (alphabet as u128)
                .checked_pow(size.min(u32::MAX as u64) as u32)
                .unwrap_or(u128::MAX)
        })
        .fold(0u128, u128::saturating_add)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Boundary {
    /// Shape index of the last block read.
    phase: usize,
    part: Vec<usize>,
    base: Vec<usize>,
    /// Base-DFA state each track started in (track 0 starts in the initial state).
    guess: Vec<usize>,
    memory: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Start,
    Boundary(Boundary),
    /// Inside a block: `emitted` stutters of `symbol` read so far, heading for `target`.
    Stutter {
        target: usize,
        symbol: usize,
        emitted: u64,
    },
}

/// Block symbol: the track words and the memory after reading them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct BlockSymbol {
    words: Vec<Vec<usize>>,
    memory: Vec<usize>,
}

struct Builder<'a> {
    prep: &'a Prepared,
    spec: &'a LinearLengthSpec,
    nodes: Vec<Node>,
    node_ix: HashMap<Node, usize>,
    symbols: Vec<BlockSymbol>,
    symbol_ix: HashMap<BlockSymbol, usize>,
    /// `(from, symbol, stutter?, to, cost)`
    edges: Vec<(usize, usize, bool, usize, f64)>,
    queue: VecDeque<usize>,
}

/// Track words of length `len` from `(part, base)` that keep both DFAs alive.
fn track_words(prep: &Prepared, j: usize, part: usize, base: usize, len: u64) -> Vec<(Vec<usize>, usize, usize)> {
    let mut out = Vec::new();
    let mut word = Vec::new();
    fn go(
        prep: &Prepared,
        j: usize,
        part: usize,
        base: usize,
        len: u64,
        word: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, usize, usize)>,
    ) {
        if word.len() as u64 == len {
            out.push((word.clone(), part, base));
            return;
        }
        for s in 0..prep.alphabet.len() {
            if let (Some(p), Some(b)) = (prep.parts[j].next[part][s], prep.base.next[base][s]) {
                word.push(s);
                go(prep, j, p, b, len, word, out);
                word.pop();
            }
        }
    }
    go(prep, j, part, base, len, &mut word, &mut out);
    out
}

fn in_block_cost(prep: &Prepared, words: &[Vec<usize>]) -> f64 {
    words
        .iter()
        .map(|w| w.windows(2).map(|p| prep.cost[p[0]][p[1]]).sum::<f64>())
        .sum()
}

impl<'a> Builder<'a> {
    fn node(&mut self, n: Node) -> usize {
        if let Some(&i) = self.node_ix.get(&n) {
            return i;
        }
        let i = self.nodes.len();
        if matches!(n, Node::Boundary(_)) {
            self.queue.push_back(i);
        }
        self.node_ix.insert(n.clone(), i);
        self.nodes.push(n);
        i
    }

    fn symbol(&mut self, s: BlockSymbol) -> usize {
        if let Some(&i) = self.symbol_ix.get(&s) {
            return i;
        }
        self.symbols.push(s.clone());
        self.symbol_ix.insert(s, self.symbols.len() - 1);
        self.symbols.len() - 1
    }

    /// Emits `from -X-> … -♥X-> target` for a block of total size `size`.
    fn emit_block(&mut self, from: usize, symbol: usize, target: Boundary, size: u64, entry_cost: f64) {
        let target = self.node(Node::Boundary(target));
        if size == 1 {
            self.edges.push((from, symbol, false, target, entry_cost));
            return;
        }
        let inner = in_block_cost(self.prep, &self.symbols[symbol].words);
        let first = self.node(Node::Stutter {
            target,
            symbol,
            emitted: 0,
        });
        self.edges.push((from, symbol, false, first, entry_cost));
        let mut at = first;
        for emitted in 1..size {
            let cost = if emitted == 1 { inner } else { 0.0 };
            let next = if emitted == size - 1 {
                target
            } else {
                self.node(Node::Stutter {
                    target,
                    symbol,
                    emitted,
                })
            };
            self.edges.push((at, symbol, true, next, cost));
            at = next;
        }
    }

    /// All blocks of shape `shape` readable from `(part, base)` per track, as
    /// `(words, part', base')` tuples.
    fn blocks(&self, shape: &[u64], starts: &[(usize, usize)]) -> Vec<Block> {
        let mut acc: Vec<Block> = vec![(Vec::new(), Vec::new(), Vec::new())];
        for (j, (&len, &(part, base))) in shape.iter().zip(starts).enumerate() {
            let options = track_words(self.prep, j, part, base, len);
            let mut next = Vec::with_capacity(acc.len() * options.len());
            for (words, parts, bases) in &acc {
                for (w, p, b) in &options {
                    let mut words = words.clone();
                    words.push(w.clone());
                    let mut parts = parts.clone();
                    parts.push(*p);
                    let mut bases = bases.clone();
                    bases.push(*b);
                    next.push((words, parts, bases));
                }
            }
            acc = next;
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    fn expand_start(&mut self, start: usize) {
        let k = self.spec.parts.len();
        let prep = self.prep;
        let base_init = prep.base.init.expect("checked nonempty");
        let shape = self.spec.lengths.offset.clone();
        let size: u64 = shape.iter().sum();
        // guesses for the base-DFA state where tracks 2..k begin
        let mut guesses: Vec<Vec<usize>> = vec![vec![base_init]];
        for _ in 1..k {
            guesses = guesses
                .into_iter()
                .flat_map(|g| {
                    (0..prep.base.len()).map(move |q| {
                        let mut g = g.clone();
                        g.push(q);
                        g
                    })
                })
                .collect();
        }
        for guess in guesses {
            let starts: Vec<(usize, usize)> = (0..k)
                .map(|j| (prep.parts[j].init.expect("checked nonempty"), guess[j]))
                .collect();
            for (words, part, base) in self.blocks(&shape, &starts) {
                let memory: Vec<usize> = words.iter().map(|w| *w.last().expect("offset is positive")).collect();
                let symbol = self.symbol(BlockSymbol {
                    words,
                    memory: memory.clone(),
                });
                let target = Boundary {
                    phase: 0,
                    part,
                    base,
                    guess: guess.clone(),
                    memory,
                };
                self.emit_block(start, symbol, target, size, 0.0);
            }
        }
    }

    fn expand_boundary(&mut self, from: usize, b: &Boundary) {
        let periods = self.spec.lengths.periods.clone();
        let starts: Vec<(usize, usize)> = b.part.iter().copied().zip(b.base.iter().copied()).collect();
        for (i, shape) in periods.iter().enumerate() {
            let phase = i + 1;
            if phase < b.phase {
                continue;
            }
            let size: u64 = shape.iter().sum();
            for (words, part, base) in self.blocks(shape, &starts) {
                let entry: f64 = words
                    .iter()
                    .zip(&b.memory)
                    .filter_map(|(w, &m)| w.first().map(|&f| self.prep.cost[m][f]))
                    .sum();
                let memory: Vec<usize> = words
                    .iter()
                    .zip(&b.memory)
                    .map(|(w, &m)| w.last().copied().unwrap_or(m))
                    .collect();
                let symbol = self.symbol(BlockSymbol {
                    words,
                    memory: memory.clone(),
                });
                let target = Boundary {
                    phase,
                    part,
                    base,
                    guess: b.guess.clone(),
                    memory,
                };
                self.emit_block(from, symbol, target, size, entry);
            }
        }
    }

    fn accepting(&self, b: &Boundary) -> bool {
        let k = b.part.len();
        (0..k).all(|j| self.prep.parts[j].accepting[b.part[j]])
            && (0..k - 1).all(|j| b.base[j] == b.guess[j + 1])
            && self.prep.base.accepting[b.base[k - 1]]
    }

    fn symbol_name(&self, s: usize, stutter: bool) -> String {
        let sym = &self.symbols[s];
        let name = |i: &usize| self.prep.alphabet[*i].as_str();
        let words: Vec<String> = sym
            .words
            .iter()
            .map(|w| {
                if w.is_empty() {
                    "-".to_owned()
                } else {
                    w.iter().map(name).collect::<Vec<_>>().join(".")
                }
            })
            .collect();
        let memory: Vec<&str> = sym.memory.iter().map(name).collect();
        format!(
            "{}[{}:{}]",
            if stutter { "~" } else { "" },
            words.join(","),
            memory.join(",")
        )
    }

    fn finish(self) -> CostAutomaton {
        let state_name = |i: usize| match &self.nodes[i] {
            Node::Start => "start".to_owned(),
            Node::Boundary(_) => format!("b{i}"),
            Node::Stutter { emitted, target, .. } => format!("s{i}.{target}.{emitted}"),
        };
        let states: Vec<StateId> = (0..self.nodes.len()).map(|i| StateId::new(state_name(i))).collect();
        let mut alphabet = Vec::new();
        let mut sym_name: HashMap<(usize, bool), Symbol> = HashMap::new();
        for s in 0..self.symbols.len() {
            for stutter in [false, true] {
                let name = Symbol::new(self.symbol_name(s, stutter));
                alphabet.push(name.clone());
                sym_name.insert((s, stutter), name);
            }
        }
        let accepting = self
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n, Node::Boundary(b) if self.accepting(b)))
            .map(|(i, _)| states[i].clone())
            .collect();
        let mut seen = std::collections::HashSet::new();
        let transitions = self
            .edges
            .iter()
            .filter(|&&(f, s, st, t, _)| seen.insert((f, s, st, t)))
            .map(|&(f, s, st, t, cost)| Transition {
                from: states[f].clone(),
                symbol: sym_name[&(s, st)].clone(),
                to: states[t].clone(),
                cost,
            })
            .collect();
        CostAutomaton {
            alphabet,
            initial: Some(states[0].clone()),
            states,
            accepting,
            transitions,
        }
    }
}

/// The stutter-padded block automaton standing in for the language of `spec`.
pub fn linlen_automaton(spec: &LinearLengthSpec, options: &LinlenOptions) -> Result<CostAutomaton> {
    let prep = spec.prepare()?;
    let count = block_count(prep.alphabet.len(), &spec.lengths);
    if count > options.block_cap as u128 {
        return Err(Error::BlockAlphabetTooLarge {
            count,
            cap: options.block_cap,
        });
    }
    if LinearLengthSpec::is_trivially_empty(&prep) {
        return Ok(CostAutomaton::empty(Vec::new()));
    }
    let mut b = Builder {
        prep: &prep,
        spec,
        nodes: Vec::new(),
        node_ix: HashMap::new(),
        symbols: Vec::new(),
        symbol_ix: HashMap::new(),
        edges: Vec::new(),
        queue: VecDeque::new(),
    };
    let start = b.node(Node::Start);
    b.expand_start(start);
    while let Some(i) = b.queue.pop_front() {
        let Node::Boundary(boundary) = b.nodes[i].clone() else {
            unreachable!("only boundaries are queued")
        };
        b.expand_boundary(i, &boundary);
    }
    trim_or_empty(&b.finish())
}

pub fn linlen_energy(spec: &LinearLengthSpec) -> Result<EnergyReport> {
    linlen_energy_with(spec, &LinlenOptions::default())
}

pub fn linlen_energy_with(spec: &LinearLengthSpec, options: &LinlenOptions) -> Result<EnergyReport> {
    free_energy_with(&linlen_automaton(spec, options)?, &options.energy)
}

/// Energy of a finite union: the maximum over its members (0 for no members).
pub fn linlen_union_energy(specs: &[LinearLengthSpec]) -> Result<f64> {
    linlen_union_energy_with(specs, &LinlenOptions::default())
}

pub fn linlen_union_energy_with(specs: &[LinearLengthSpec], options: &LinlenOptions) -> Result<f64> {
    specs
        .iter()
        .map(|s| linlen_energy_with(s, options).map(|r| r.energy))
        .try_fold(0f64, |acc, e| e.map(|e| acc.max(e)))
}

/// Largest `max_n` for [`linlen_word_oracle`].
pub const ORACLE_MAX_N: usize = 60;
const ORACLE_BUDGET: u64 = 50_000_000;

/// Ground truth by enumeration: every word of `L′` up to `max_n` is split in
/// every way into `k` parts, and counted once (with its full pair cost) if
/// some split puts each part in its `rᵢ` with lengths in `D`.
pub fn linlen_word_oracle(spec: &LinearLengthSpec, max_n: usize) -> Result<PartitionSeries> {
    if max_n == 0 || max_n > ORACLE_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "oracle length must be between 1 and {ORACLE_MAX_N}, got {max_n}"
        )));
    }
    let prep = spec.prepare()?;
    let mut sums = vec![0.0; max_n + 1];
    if !LinearLengthSpec::is_trivially_empty(&prep) {
        let mut search = OracleSearch {
            prep: &prep,
            spec,
            max_n,
            word: Vec::new(),
            sums: &mut sums,
            visited: 0,
        };
        let base = prep.base.init.expect("nonempty");
        let start = search.closure(vec![(0, prep.parts[0].init.expect("nonempty"))]);
        search.walk(base, start)?;
    }
    let values = (1..=max_n).map(|n| (n, sums[n])).collect();
    Ok(PartitionSeries::from_values(SeriesKind::Words, values))
}

struct OracleSearch<'a> {
    prep: &'a Prepared,
    spec: &'a LinearLengthSpec,
    max_n: usize,
    word: Vec<usize>,
    sums: &'a mut [f64],
    visited: u64,
}

impl OracleSearch<'_> {
    /// Adds `(j+1, init)` for every configuration sitting in an accepting state of `r_j`.
    fn closure(&self, mut configs: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
        let k = self.prep.parts.len();
        let mut i = 0;
        while i < configs.len() {
            let (j, q) = configs[i];
            if j + 1 < k && self.prep.parts[j].accepting[q] {
                let c = (j + 1, self.prep.parts[j + 1].init.expect("nonempty"));
                if !configs.contains(&c) {
                    configs.push(c);
                }
            }
            i += 1;
        }
        configs
    }

    fn walk(&mut self, base: usize, configs: Vec<(usize, usize)>) -> Result<()> {
        self.visited += 1;
        if self.visited > ORACLE_BUDGET {
            return Err(Error::InvalidArgument(
                "oracle enumeration budget exceeded; use a smaller instance".into(),
            ));
        }
        let k = self.prep.parts.len();
        let n = self.word.len();
        if n > 0
            && self.prep.base.accepting[base]
            && configs
                .iter()
                .any(|&(j, q)| j == k - 1 && self.prep.parts[j].accepting[q])
            && self.splits(0, 0, &mut Vec::new())
        {
            let cost: f64 = self.word.windows(2).map(|p| self.prep.cost[p[0]][p[1]]).sum();
            self.sums[n] += cost.exp();
        }
        if n == self.max_n {
            return Ok(());
        }
        for s in 0..self.prep.alphabet.len() {
            let Some(b) = self.prep.base.next[base][s] else {
                continue;
            };
            let moved: Vec<(usize, usize)> = configs
                .iter()
                .filter_map(|&(j, q)| self.prep.parts[j].next[q][s].map(|t| (j, t)))
                .collect();
            if moved.is_empty() {
                continue;
            }
            let mut dedup = Vec::new();
            for c in moved {
                if !dedup.contains(&c) {
                    dedup.push(c);
                }
            }
            let next = self.closure(dedup);
            self.word.push(s);
            self.walk(b, next)?;
            self.word.pop();
        }
        Ok(())
    }

    /// Is there a split of `word[pos..]` into parts `j..k` with lengths in `D`?
    fn splits(&self, j: usize, pos: usize, lengths: &mut Vec<u64>) -> bool {
        let k = self.prep.parts.len();
        if j == k {
            return pos == self.word.len() && linear_set_member(&self.spec.lengths, lengths);
        }
        let table = &self.prep.parts[j];
        let mut q = table.init.expect("nonempty");
        let mut end = pos;
        loop {
            if table.accepting[q] {
                lengths.push((end - pos) as u64);
                let found = self.splits(j + 1, end, lengths);
                lengths.pop();
                if found {
                    return true;
                }
            }
            if end == self.word.len() {
                return false;
            }
            match table.next[q][self.word[end]] {
                Some(t) => q = t,
                None => return false,
            }
            end += 1;
        }
    }
}

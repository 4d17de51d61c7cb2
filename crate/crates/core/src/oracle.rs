//! Exact finite-length partition sums.
//!
//! `S_n = Σ e^{cost}` over runs or words of length `n`, computed by sweeping a
//! vector through the transfer matrix `n` times. The logarithmic growth rate
//! `(1/n) ln S_n` of these sums is what every energy in this crate predicts,
//! so they serve as brute-force ground truth for the spectral route.
//!
//! The sweep is renormalised at every step and the scale kept as a logarithm,
//! so `ln S_n` stays exact far beyond the range where `S_n` fits in an `f64`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::automaton::CostAutomaton;
use crate::determinize::determinize;
use crate::error::{Error, Result};
use crate::lang_cost::PairCostFunction;

/// Largest `max_n` accepted by the series builders.
pub const DEFAULT_MAX_N: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    /// Runs starting anywhere and ending anywhere.
    RunsAll,
    /// Runs from the initial state to an accepting state.
    RunsAccepting,
    /// Accepted words, weighted by their pair cost.
    Words,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionSeries {
    pub kind: SeriesKind,
    /// `(n, S_n)` for `n = 1..=max_n`; `+∞` where `S_n` exceeds the `f64` range.
    pub values: Vec<(usize, f64)>,
    /// `(n, ln S_n)`, `None` where `S_n = 0`.
    pub log_values: Vec<(usize, Option<f64>)>,
    /// `(n, (1/n) ln S_n)`, with `ln 0 = 0`.
    pub rates: Vec<(usize, f64)>,
}

impl PartitionSeries {
    pub(crate) fn from_values(kind: SeriesKind, values: Vec<(usize, f64)>) -> Self {
        let logs = values.iter().map(|&(n, s)| (n, (s > 0.0).then(|| s.ln()))).collect();
        PartitionSeries::from_logs(kind, logs)
    }

    fn from_logs(kind: SeriesKind, log_values: Vec<(usize, Option<f64>)>) -> Self {
        let values = log_values.iter().map(|&(n, l)| (n, l.map_or(0.0, f64::exp))).collect();
        let rates = log_values
            .iter()
            .map(|&(n, l)| (n, l.map_or(0.0, |l| l / n as f64)))
            .collect();
        PartitionSeries {
            kind,
            values,
            log_values,
            rates,
        }
    }

    /// `S_n`, or `None` when `n` is outside the series.
    pub fn value(&self, n: usize) -> Option<f64> {
        self.values.iter().find(|&&(m, _)| m == n).map(|&(_, s)| s)
    }

    pub fn rate(&self, n: usize) -> Option<f64> {
        self.rates.iter().find(|&&(m, _)| m == n).map(|&(_, r)| r)
    }

    pub fn log_value(&self, n: usize) -> Option<f64> {
        self.log_values.iter().find(|&&(m, _)| m == n).and_then(|&(_, l)| l)
    }

    /// The entries with `S_n > 0` only.
    pub fn nonzero(&self) -> PartitionSeries {
        let logs = self.log_values.iter().copied().filter(|(_, l)| l.is_some()).collect();
        PartitionSeries::from_logs(self.kind, logs)
    }
}

/// Running vector with a logarithmic scale factor.
struct Scaled {
    v: Vec<f64>,
    log_scale: f64,
}

impl Scaled {
    fn renormalise(&mut self, n: usize) -> Result<()> {
        let m = self.v.iter().copied().fold(0.0, f64::max);
        if !m.is_finite() {
            return Err(Error::Overflow { n });
        }
        if m > 0.0 {
            self.v.iter_mut().for_each(|x| *x /= m);
            self.log_scale += m.ln();
            if !self.log_scale.is_finite() {
                return Err(Error::Overflow { n });
            }
        }
        Ok(())
    }

    fn log_of(&self, sum: f64) -> Option<f64> {
        (sum > 0.0).then(|| self.log_scale + sum.ln())
    }
}

fn check_max_n(max_n: usize) -> Result<()> {
    if max_n == 0 || max_n > DEFAULT_MAX_N {
        return Err(Error::InvalidArgument(format!(
            "max_n must be between 1 and {DEFAULT_MAX_N}, got {max_n}"
        )));
    }
    Ok(())
}

/// Partition sums over runs of `a` (as given, not trimmed).
pub fn run_partition_series(a: &CostAutomaton, kind: SeriesKind, max_n: usize) -> Result<PartitionSeries> {
    check_max_n(max_n)?;
    let ix = a.index()?;
    let weights: Vec<f64> = ix.edges.iter().map(|e| e.cost.exp()).collect();
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::Overflow { n: 1 });
    }
    let v = match kind {
        SeriesKind::RunsAll => vec![1.0; ix.num_states],
        SeriesKind::RunsAccepting => {
            let mut v = vec![0.0; ix.num_states];
            if let Some(i) = ix.initial {
                v[i] = 1.0;
            }
            v
        }
        SeriesKind::Words => {
            return Err(Error::InvalidArgument("use word_partition_series for word sums".into()));
        }
    };
    let mut x = Scaled { v, log_scale: 0.0 };
    let mut logs = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let mut next = vec![0.0; ix.num_states];
        for (e, w) in ix.edges.iter().zip(&weights) {
            next[e.to] += x.v[e.from] * w;
        }
        x.v = next;
        x.renormalise(n)?;
        let s = match kind {
            SeriesKind::RunsAll => x.v.iter().sum(),
            _ => (0..ix.num_states).filter(|&q| ix.accepting[q]).map(|q| x.v[q]).sum(),
        };
        logs.push((n, x.log_of(s)));
    }
    Ok(PartitionSeries::from_logs(kind, logs))
}

/// Partition sums `Σ_{w ∈ L(dfa), |w| = n} e^{U(w)}` over the words of a DFA.
pub fn word_partition_series(dfa: &CostAutomaton, u: &PairCostFunction, max_n: usize) -> Result<PartitionSeries> {
    check_max_n(max_n)?;
    dfa.require_deterministic()?;
    let ix = dfa.index()?;
    for s in &dfa.alphabet {
        if !u.alphabet.contains(s) {
            return Err(Error::UnknownSymbol(s.to_string()));
        }
    }
    let k = ix.num_symbols;
    let pair: Vec<Vec<f64>> = dfa
        .alphabet
        .iter()
        .map(|a| dfa.alphabet.iter().map(|b| u.get(a, b).exp()).collect())
        .collect();
    if pair.iter().flatten().any(|w: &f64| !w.is_finite()) {
        return Err(Error::Overflow { n: 2 });
    }
    // v[state * k + last symbol]
    let mut v = vec![0.0; ix.num_states * k];
    let mut logs = Vec::with_capacity(max_n);
    let out = ix.out_edges();
    if let Some(init) = ix.initial {
        for e in &out[init] {
            v[e.to * k + e.symbol] += 1.0;
        }
    }
    let total = |v: &[f64]| -> f64 {
        (0..ix.num_states)
            .filter(|&q| ix.accepting[q])
            .map(|q| v[q * k..(q + 1) * k].iter().sum::<f64>())
            .sum()
    };
    let mut x = Scaled { v, log_scale: 0.0 };
    logs.push((1, x.log_of(total(&x.v))));
    for n in 2..=max_n {
        let mut next = vec![0.0; x.v.len()];
        for (q, edges) in out.iter().enumerate() {
            for (last, costs) in pair.iter().enumerate() {
                let w = x.v[q * k + last];
                if w == 0.0 {
                    continue;
                }
                for e in edges {
                    next[e.to * k + e.symbol] += w * costs[e.symbol];
                }
            }
        }
        x.v = next;
        x.renormalise(n)?;
        logs.push((n, x.log_of(total(&x.v))));
    }
    Ok(PartitionSeries::from_logs(SeriesKind::Words, logs))
}

/// Cumulative run and word counts, indexed by `n = 0..=max_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CountSeries {
    /// Initialised runs of length ≤ n whose input word is accepted.
    pub f: Vec<BigUint>,
    /// Distinct accepted words of length ≤ n.
    pub g: Vec<BigUint>,
}

impl CountSeries {
    /// `(ln f(n) − ln g(n)) / n`, with `ln 0 = 0`.
    pub fn slope(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        (big_ln(&self.f[n]) - big_ln(&self.g[n])) / n as f64
    }
}

/// Natural logarithm of a big integer, `ln 0 = 0`.
pub fn big_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top = (x >> shift).to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact run and word counts via the product of `a` with its determinization.
pub fn count_series(a: &CostAutomaton, max_n: usize) -> Result<CountSeries> {
    check_max_n(max_n)?;
    let ix = a.index()?;
    let dfa = determinize(a)?;
    let mut f = vec![BigUint::zero(); max_n + 1];
    let mut g = vec![BigUint::zero(); max_n + 1];
    let (Some(init), false) = (ix.initial, dfa.is_empty()) else {
        return Ok(CountSeries { f, g });
    };
    let dx = dfa.index()?;
    let d_init = dx.initial.expect("nonempty DFA has an initial state");
    let sym_map: Vec<Option<usize>> = a
        .alphabet
        .iter()
        .map(|s| dfa.alphabet.iter().position(|t| t == s))
        .collect();
    let mut d_next = vec![vec![None; dx.num_symbols]; dx.num_states];
    for e in &dx.edges {
        d_next[e.from][e.symbol] = Some(e.to);
    }
    let nd = dx.num_states;

    let mut runs = vec![BigUint::zero(); ix.num_states * nd];
    runs[init * nd + d_init] = BigUint::one();
    let mut words = vec![BigUint::zero(); nd];
    words[d_init] = BigUint::one();
    let mut f_acc = BigUint::zero();
    let mut g_acc = BigUint::zero();
    for n in 0..=max_n {
        if n > 0 {
            let mut next_runs = vec![BigUint::zero(); runs.len()];
            for e in &ix.edges {
                let Some(ds) = sym_map[e.symbol] else { continue };
                for d in 0..nd {
                    let c = &runs[e.from * nd + d];
                    if c.is_zero() {
                        continue;
                    }
                    if let Some(t) = d_next[d][ds] {
                        next_runs[e.to * nd + t] += c;
                    }
                }
            }
            runs = next_runs;
            let mut next_words = vec![BigUint::zero(); nd];
            for e in &dx.edges {
                if !words[e.from].is_zero() {
                    let c = words[e.from].clone();
                    next_words[e.to] += c;
                }
            }
            words = next_words;
        }
        for d in (0..nd).filter(|&d| dx.accepting[d]) {
            g_acc += &words[d];
            for q in 0..ix.num_states {
                f_acc += &runs[q * nd + d];
            }
        }
        f[n] = f_acc.clone();
        g[n] = g_acc.clone();
    }
    Ok(CountSeries { f, g })
}

/// Windowed max of the last `window` rates (a limsup proxy) and the spread
/// `max − min` over the same window.
pub fn estimate_limit(series: &PartitionSeries, window: usize) -> (f64, f64) {
    let w = window.min(series.rates.len());
    let tail = &series.rates[series.rates.len() - w..];
    if tail.is_empty() {
        return (0.0, 0.0);
    }
    let max = tail.iter().map(|&(_, r)| r).fold(f64::NEG_INFINITY, f64::max);
    let min = tail.iter().map(|&(_, r)| r).fold(f64::INFINITY, f64::min);
    (max, max - min)
}

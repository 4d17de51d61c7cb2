//! Nondeterminism of an NFA: the exact rate `λ` (runs per accepted word,
//! via determinization) and its free-energy upper estimate `λ⁺`.

use std::collections::HashMap;

use serde::Serialize;

use crate::automaton::CostAutomaton;
use crate::determinize::{determinize_capped, DEFAULT_STATE_CAP};
use crate::energy::{free_energy_with, EnergyOptions};
use crate::error::Result;
use crate::structure::trim_or_empty;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct NondetReport {
    /// `energy_v − energy_zero`, clamped at 0.
    pub lambda_plus: f64,
    pub lambda_plus_raw: f64,
    pub energy_v: f64,
    pub energy_zero: f64,
    /// `energy_zero − energy_dfa`, clamped at 0; present once determinization ran.
    pub lambda_exact: Option<f64>,
    pub lambda_exact_raw: Option<f64>,
    pub energy_dfa: Option<f64>,
    pub dfa_states: Option<usize>,
}

/// Gives every transition `(p,a,p')` the cost `ln k(p,a)`, where `k(p,a)` is
/// the number of `a`-successors of `p`.
pub fn branching_costs(a: &CostAutomaton) -> Result<CostAutomaton> {
    a.index()?;
    let mut k: HashMap<(&str, &str), usize> = HashMap::new();
    for t in &a.transitions {
        *k.entry((t.from.as_str(), t.symbol.as_str())).or_default() += 1;
    }
    let k: HashMap<(String, String), usize> = k
        .into_iter()
        .map(|((p, s), c)| ((p.to_owned(), s.to_owned()), c))
        .collect();
    Ok(a.map_costs(|t| (k[&(t.from.to_string(), t.symbol.to_string())] as f64).ln()))
}

pub fn lambda_plus(a: &CostAutomaton) -> Result<NondetReport> {
    lambda_plus_with(a, &EnergyOptions::default())
}

/// `λ⁺ = E(M_V) − E(M_0)` with branching costs `V`, on the trimmed automaton.
pub fn lambda_plus_with(a: &CostAutomaton, options: &EnergyOptions) -> Result<NondetReport> {
    let a = trim_or_empty(a)?;
    let energy_v = free_energy_with(&branching_costs(&a)?, options)?.energy;
    let energy_zero = free_energy_with(&a.zero_costs(), options)?.energy;
    let raw = energy_v - energy_zero;
    Ok(NondetReport {
        lambda_plus: raw.max(0.0),
        lambda_plus_raw: raw,
        energy_v,
        energy_zero,
        ..Default::default()
    })
}

pub fn lambda_exact(a: &CostAutomaton) -> Result<NondetReport> {
    lambda_exact_with(a, &EnergyOptions::default(), DEFAULT_STATE_CAP)
}

/// Adds `λ = E(M_0) − E(det(M)_0)` to the λ⁺ report. Fails with
/// [`crate::Error::StateCapExceeded`] when the subset construction grows past
/// `state_cap`.
pub fn lambda_exact_with(a: &CostAutomaton, options: &EnergyOptions, state_cap: usize) -> Result<NondetReport> {
    let mut report = lambda_plus_with(a, options)?;
    let a = trim_or_empty(a)?;
    let dfa = determinize_capped(&a, state_cap)?;
    let energy_dfa = free_energy_with(&dfa, options)?.energy;
    let raw = report.energy_zero - energy_dfa;
    report.lambda_exact = Some(raw.max(0.0));
    report.lambda_exact_raw = Some(raw);
    report.energy_dfa = Some(energy_dfa);
    report.dfa_states = Some(dfa.states.len());
    Ok(report)
}

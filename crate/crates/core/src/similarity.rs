use serde::Serialize;

use crate::automaton::CostAutomaton;
use crate::energy::{free_energy_with, EnergyOptions};
use crate::error::{Error, Result};
use crate::product::product;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimilarityReport {
    /// Free energy of the cost-summed product.
    pub delta: f64,
    pub energy_1: f64,
    pub energy_2: f64,
    pub product_states: usize,
    /// `delta / (energy_1 + energy_2)` when the denominator is positive. Not
    /// part of the metric itself; a convenience score for ranking.
    pub normalized: Option<f64>,
}

pub fn similarity(a1: &CostAutomaton, a2: &CostAutomaton) -> Result<SimilarityReport> {
    similarity_with(a1, a2, &EnergyOptions::default())
}

/// Shared free energy of two cost automata: the energy of their product with
/// summed costs. Disjoint languages give 0.
pub fn similarity_with(a1: &CostAutomaton, a2: &CostAutomaton, options: &EnergyOptions) -> Result<SimilarityReport> {
    let energy_1 = free_energy_with(a1, options)?.energy;
    let energy_2 = free_energy_with(a2, options)?.energy;
    let (delta, product_states) = match product(a1, a2) {
        Ok(p) => (free_energy_with(&p, options)?.energy, p.states.len()),
        Err(Error::EmptyAutomaton) => (0.0, 0),
        Err(e) => return Err(e),
    };
    let total = energy_1 + energy_2;
    Ok(SimilarityReport {
        delta,
        energy_1,
        energy_2,
        product_states,
        normalized: (total > 0.0).then(|| delta / total),
    })
}

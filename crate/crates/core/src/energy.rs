//! Free energy of cost automata.
//!
//! Every strongly connected component gets a Gurevich matrix whose entries
//! exponentiate transition costs; the component energy is the logarithm of
//! its Perron-Frobenius eigenvalue. Two equivalent matrices are available:
//!
//! * **bipartite**: one node per state and one per transition, with
//!   `state → transition` weighted `e^V` and `transition → state` weighted 1.
//!   A run of length `n` is a walk of length `2n`, so the energy is
//!   `2 ln λ`.
//! * **compact**: one node per state, entry `(p, q)` is `Σ_a e^{V(p,a,q)}`;
//!   the energy is `ln λ'`.
//!
//! The energy of the whole automaton is the maximum over its components, with
//! loop-free singleton components contributing 0.

use serde::Serialize;

use crate::automaton::{CostAutomaton, Indexed};
use crate::error::{Error, Result};
use crate::spectral::{spectral_radius, NonnegativeMatrix, SolverConfig, SpectralResult};
use crate::structure::{components, has_self_loop, trim_or_empty};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixForm {
    Bipartite,
    #[default]
    Compact,
}

impl std::str::FromStr for MatrixForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bipartite" => Ok(MatrixForm::Bipartite),
            "compact" => Ok(MatrixForm::Compact),
            other => Err(Error::InvalidArgument(format!("unknown matrix form {other}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EnergyOptions {
    pub form: MatrixForm,
    pub solver: SolverConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentEnergy {
    pub states: Vec<String>,
    pub energy: f64,
    pub singleton_without_loop: bool,
    pub solver: Option<SpectralResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    /// Nats per step.
    pub energy: f64,
    pub per_component: Vec<ComponentEnergy>,
    pub form_used: MatrixForm,
    /// Index into `per_component` of the first component attaining the maximum.
    pub max_component: Option<usize>,
    /// Whether trimming removed anything from the input.
    pub trimmed: bool,
}

impl EnergyReport {
    pub fn empty(form: MatrixForm, trimmed: bool) -> Self {
        EnergyReport {
            energy: 0.0,
            per_component: Vec::new(),
            form_used: form,
            max_component: None,
            trimmed,
        }
    }
}

fn transition_label(a: &CostAutomaton, e: &crate::automaton::Edge) -> String {
    format!("({},{},{})", a.states[e.from], a.alphabet[e.symbol], a.states[e.to])
}

fn compact_matrix(a: &CostAutomaton, ix: &Indexed, comp: &[usize]) -> Result<NonnegativeMatrix> {
    let mut pos = vec![usize::MAX; ix.num_states];
    for (k, &s) in comp.iter().enumerate() {
        pos[s] = k;
    }
    let mut m = NonnegativeMatrix::zeros(comp.iter().map(|&s| a.states[s].to_string()).collect())?;
    for e in &ix.edges {
        if pos[e.from] != usize::MAX && pos[e.to] != usize::MAX {
            m.add(pos[e.from], pos[e.to], e.cost.exp());
        }
    }
    Ok(m)
}

fn bipartite_matrix(a: &CostAutomaton, ix: &Indexed, comp: &[usize]) -> Result<NonnegativeMatrix> {
    let mut pos = vec![usize::MAX; ix.num_states];
    for (k, &s) in comp.iter().enumerate() {
        pos[s] = k;
    }
    let inner: Vec<_> = ix
        .edges
        .iter()
        .filter(|e| pos[e.from] != usize::MAX && pos[e.to] != usize::MAX)
        .collect();
    let mut labels: Vec<String> = comp.iter().map(|&s| a.states[s].to_string()).collect();
    labels.extend(inner.iter().map(|e| transition_label(a, e)));
    let mut m = NonnegativeMatrix::zeros(labels)?;
    for (t, e) in inner.iter().enumerate() {
        let node = comp.len() + t;
        m.add(pos[e.from], node, e.cost.exp());
        m.add(node, pos[e.to], 1.0);
    }
    Ok(m)
}

/// Checks that all states of `a` form one strongly connected component with
/// at least one transition; returns the index view and the component.
fn whole_component(a: &CostAutomaton) -> Result<(Indexed, Vec<usize>)> {
    let ix = a.index_graph()?;
    let comps = components(&ix);
    if comps.len() != 1 || ix.edges.is_empty() {
        return Err(Error::NotStronglyConnected);
    }
    let comp = comps.into_iter().next().unwrap_or_default();
    Ok((ix, comp))
}

/// Bipartite Gurevich matrix of a strongly connected automaton: state nodes
/// first (in state order), then one node per transition labelled `(p,a,q)`.
pub fn gurevich_matrix_bipartite(a: &CostAutomaton) -> Result<NonnegativeMatrix> {
    let (ix, comp) = whole_component(a)?;
    bipartite_matrix(a, &ix, &comp)
}

/// Compact (state-by-state) Gurevich matrix of a strongly connected automaton.
pub fn gurevich_matrix_compact(a: &CostAutomaton) -> Result<NonnegativeMatrix> {
    let (ix, comp) = whole_component(a)?;
    compact_matrix(a, &ix, &comp)
}

fn energy_from(form: MatrixForm, radius: f64) -> f64 {
    match form {
        MatrixForm::Bipartite => 2.0 * radius.ln(),
        MatrixForm::Compact => radius.ln(),
    }
}

/// Energy of an automaton consisting of a single component. A lone state
/// without a self-loop has energy 0.
pub fn component_energy(a: &CostAutomaton, form: MatrixForm, solver: &SolverConfig) -> Result<f64> {
    if a.states.len() == 1 && a.transitions.is_empty() && a.index_graph().is_ok() {
        return Ok(0.0);
    }
    let m = match form {
        MatrixForm::Bipartite => gurevich_matrix_bipartite(a)?,
        MatrixForm::Compact => gurevich_matrix_compact(a)?,
    };
    let r = spectral_radius(&m, solver)?;
    Ok(energy_from(form, r.radius))
}

/// Free energy with the default options (compact form, default solver).
pub fn free_energy(a: &CostAutomaton) -> Result<EnergyReport> {
    free_energy_with(a, &EnergyOptions::default())
}

/// Trims `a`, then takes the maximum energy over its strongly connected
/// components. The empty automaton has energy 0.
pub fn free_energy_with(a: &CostAutomaton, options: &EnergyOptions) -> Result<EnergyReport> {
    let trimmed = trim_or_empty(a)?;
    let changed = trimmed.states.len() != a.states.len() || trimmed.transitions.len() != a.transitions.len();
    if trimmed.is_empty() {
        return Ok(EnergyReport::empty(options.form, changed));
    }
    let ix = trimmed.index()?;
    let mut per_component = Vec::new();
    for (k, comp) in components(&ix).into_iter().enumerate() {
        let states = comp.iter().map(|&s| trimmed.states[s].to_string()).collect();
        if comp.len() == 1 && !has_self_loop(&ix, comp[0]) {
            per_component.push(ComponentEnergy {
                states,
                energy: 0.0,
                singleton_without_loop: true,
                solver: None,
            });
            continue;
        }
        let m = match options.form {
            MatrixForm::Bipartite => bipartite_matrix(&trimmed, &ix, &comp)?,
            MatrixForm::Compact => compact_matrix(&trimmed, &ix, &comp)?,
        };
        let r = spectral_radius(&m, &options.solver).map_err(|e| Error::NotConverged {
            component: k,
            result: e.0,
        })?;
        per_component.push(ComponentEnergy {
            states,
            energy: energy_from(options.form, r.radius),
            singleton_without_loop: false,
            solver: Some(r),
        });
    }
    let mut best: Option<usize> = None;
    for (k, c) in per_component.iter().enumerate() {
        if best.is_none_or(|b| c.energy > per_component[b].energy) {
            best = Some(k);
        }
    }
    Ok(EnergyReport {
        energy: best.map_or(0.0, |b| per_component[b].energy),
        per_component,
        form_used: options.form,
        max_component: best,
        trimmed: changed,
    })
}

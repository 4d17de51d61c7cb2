//! Free energy of cost automata.
//!
//! A cost automaton is an NFA whose transitions carry real costs. Its free
//! energy is the exponential growth rate of `Σ e^{cost}` over runs of length
//! `n`, computed as the log spectral radius of a nonnegative matrix built from
//! the exponentiated costs. On top of that the crate measures nondeterminism
//! ([`nondet`]), similarity of two automata ([`similarity`]), the energy of a
//! language under a cost on symbol pairs ([`lang_cost`]) and of languages with
//! linear length constraints ([`linlen`]). [`oracle`] computes the finite
//! partition sums directly, as ground truth.

pub mod automaton;
pub mod determinize;
pub mod document;
pub mod energy;
pub mod error;
pub mod fixtures;
pub mod lang_cost;
pub mod linlen;
pub mod nondet;
pub mod oracle;
pub mod product;
pub mod similarity;
pub mod spectral;
pub mod structure;

pub use automaton::{CostAutomaton, StateId, Symbol, Transition, Violation};
pub use determinize::{determinize, determinize_capped, DEFAULT_STATE_CAP};
pub use energy::{free_energy, free_energy_with, EnergyOptions, EnergyReport, MatrixForm};
pub use error::{Error, Result};
pub use lang_cost::{implement_construction, language_energy, verify_implements, PairCostFunction};
pub use linlen::{linlen_energy, linlen_union_energy, linlen_word_oracle, LinearLengthSpec, LinearSet};
pub use nondet::{lambda_exact, lambda_plus, NondetReport};
pub use oracle::{estimate_limit, PartitionSeries, SeriesKind};
pub use product::product;
pub use similarity::{similarity, SimilarityReport};
pub use spectral::{spectral_radius, NonnegativeMatrix, SolverConfig, SpectralResult};
pub use structure::{scc, trim};

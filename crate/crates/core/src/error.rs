use thiserror::Error;

use crate::automaton::Violation;
use crate::spectral::SpectralResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid automaton: {}", join_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("automaton accepts nothing (no accepting state is reachable)")]
    EmptyAutomaton,

    #[error("states do not form a single strongly connected component with a transition")]
    NotStronglyConnected,

    #[error("input must be deterministic: state {state} has several {symbol}-successors")]
    NotDeterministic { state: String, symbol: String },

    #[error("power iteration did not converge for component {component}: residual {:.3e} after {} iterations", .result.residual, .result.iterations)]
    NotConverged { component: usize, result: SpectralResult },

    #[error("partition sum overflowed the floating range at n = {n}; rescale the costs")]
    Overflow { n: usize },

    #[error("unknown symbol {0}")]
    UnknownSymbol(String),

    #[error("determinized automaton exceeds the state cap of {cap}")]
    StateCapExceeded { cap: usize },

    #[error("block alphabet has {count} tuple symbols, above the cap of {cap}")]
    BlockAlphabetTooLarge { count: u128, cap: usize },

    #[error("invalid linear set: {0}")]
    InvalidLinearSet(String),

    #[error("malformed document: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

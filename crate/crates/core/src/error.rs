use thiserror::Error;

/// Errors raised by graph construction, parameter validation, and simulation.
///
/// Agent and matrix indices in error values are 1-based, matching the usual
/// numbering of agents in the consensus literature and in our output files.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("adjacency is not symmetric at ({i},{j}): {a} vs {b}")]
    AsymmetricWeights { i: usize, j: usize, a: f64, b: f64 },

    /// Also raised for positive weights below 1e-15, which are treated as
    /// rounding noise rather than edges.
    #[error("invalid weight at ({i},{j}): {value} (must be 0 or >= 1e-15)")]
    NegativeWeight { i: usize, j: usize, value: f64 },

    #[error("diagonal entry ({i},{i}) must be zero, got {value}")]
    NonzeroDiagonal { i: usize, value: f64 },

    #[error("graph is disconnected: agent {unreached} is unreachable from agent 1")]
    DisconnectedGraph { unreached: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("sigma out of range for agent {agent}: {value} (required: {required})")]
    SigmaOutOfRange {
        agent: usize,
        value: f64,
        required: &'static str,
    },

    #[error("theta too small for agent {agent}: {value} <= (1 - xi)/beta = {bound}")]
    ThetaTooSmall { agent: usize, value: f64, bound: f64 },

    #[error("beta must be positive for agent {agent}, got {value}")]
    NonpositiveBeta { agent: usize, value: f64 },

    #[error("xi must lie in [0, 1] for agent {agent}, got {value}")]
    XiOutOfRange { agent: usize, value: f64 },

    #[error("initial internal value must be positive for agent {agent}, got {value}")]
    NonpositiveInternal0 { agent: usize, value: f64 },

    /// The internal variable is provably positive for valid parameters, so a
    /// nonpositive value always indicates an integration failure.
    #[error("internal variable of agent {agent} is nonpositive ({value}); integration failed")]
    NonpositiveInternal { agent: usize, value: f64 },

    #[error(
        "Zeno guard: agent {agent} fired {count} consecutive events with gaps \
         below {floor} (last gap {gap} at t={time})"
    )]
    ZenoGuard {
        agent: usize,
        time: f64,
        gap: f64,
        floor: f64,
        count: u32,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

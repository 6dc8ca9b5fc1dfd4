//! romlift is a desk-scale laboratory for random-oracle experiments with
//! pseudorandom generators.
//!
//! Everything here is exact: quantum oracle algorithms are simulated as full
//! statevectors, oracle families are enumerated exhaustively, and experiment
//! outcomes are probability distributions computed by summation rather than
//! sampling. The pieces fit together as follows:
//!
//! - [`oracle`]: total and partial functions `{0,1}^n -> {0,1}^m`, the
//!   patch/combine/subtract algebra on them, and enumeration or seeded
//!   sampling of all total functions consistent with a partial one.
//! - [`engine`]: statevector simulation of quantum query circuits, with a
//!   per-point query-magnitude ledger, output distributions, and the state
//!   distance measures used by the bound checks.
//! - [`gates`]: small builders for unitary layers (bit flips, Hadamards,
//!   reversible functions) plus random circuits and states for the
//!   randomized checks.
//! - [`prg`]: classical oracle PRGs with transcript recording and an exact
//!   query-count contract; three small built-in generators.
//! - [`experiment`]: the PRG/Rand distinguishing games, their fixed-output
//!   variants, the hybrid games used to relate them, and the conditional
//!   transcript/oracle distributions they are built from.
//! - [`lift`]: the classical distinguisher built from transcript discovery,
//!   the reprogramming game harness, and the end-to-end lifting report.
//! - [`pseudodet`]: canonical outputs of near-deterministic quantum
//!   algorithms, critical-set construction, the classical oracle-simulation
//!   stack, and derandomization of quantum PRGs.
//! - [`fixtures`]: the built-in distinguishers, algorithms, reprogramming
//!   fixtures and quantum PRG, addressable by name.
//! - [`suite`] and [`report`]: the named verification suites behind
//!   `romlift verify` and their JSON/table rendering.
//!
//! Register widths are deliberately tiny (a dozen qubits, oracle domains of
//! at most a few bits); the point is that every claim checked here is checked
//! against an exhaustive computation, not an estimate.

#![forbid(unsafe_code)]

use thiserror::Error;

pub mod bits;
pub mod config;
pub mod dist;
pub mod engine;
pub mod experiment;
pub mod fixtures;
pub mod gates;
pub mod lift;
pub mod oracle;
pub mod prg;
pub mod pseudodet;
pub mod report;
pub mod suite;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "signature mismatch: expected n={expected_n}, m={expected_m}, got n={got_n}, m={got_m}"
    )]
    SignatureMismatch {
        expected_n: u32,
        expected_m: u32,
        got_n: u32,
        got_m: u32,
    },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("layer {layer} is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { layer: usize, deviation: f64 },

    #[error("state norm drifted to {norm} after layer {layer}")]
    NormViolation { layer: usize, norm: f64 },

    #[error("wire {wire} out of range for {total} wires")]
    WireOutOfRange { wire: usize, total: usize },

    #[error("wires must be distinct: {0:?}")]
    DuplicateWires(Vec<usize>),

    #[error("matrix has {rows}x{cols} entries, expected {expected}x{expected}")]
    BadMatrixShape {
        rows: usize,
        cols: usize,
        expected: usize,
    },

    #[error("partial functions conflict at x={0}")]
    Conflict(u32),

    #[error("oracle disagrees with partial function at x={0}")]
    Inconsistent(u32),

    #[error("identity extension needs m = n, got n={n}, m={m}")]
    WidthMismatch { n: u32, m: u32 },

    #[error("enumeration of {needed} items exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("PRG made {made} oracle queries, declared {declared}")]
    QueryCountViolation { made: u64, declared: u64 },

    #[error("conditional distribution is undefined for this (g, h)")]
    UndefinedConditional,

    #[error("algorithm is not {0}-deterministic: canonical probability {1} on some oracle")]
    DeterminismViolation(f64, f64),

    #[error("delta must lie in [0, 1/2), got {0}")]
    DeltaOutOfRange(f64),

    #[error("sampled mode requires a seed")]
    MissingSeed,

    #[error("missing parameter: {0}")]
    MissingParameter(&'static str),

    #[error("no samples hit the conditioning event after {0} draws")]
    InsufficientSamples(u64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Evaluation mode shared by the experiment harness.
///
/// Exact mode enumerates every oracle/seed combination and fails with
/// [`Error::BudgetExceeded`] if the instance is too large. Sampled mode
/// estimates the same quantities from seeded draws and exists only for
/// instances above budget; all randomness is derived from the seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact { budget: u64 },
    Sampled { seed: u64, trials: u64 },
}

/// Default enumeration budget: at most 2^20 oracles per exhaustive loop.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

impl Default for Mode {
    fn default() -> Self {
        Mode::Exact {
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Mode {
    pub fn exact() -> Self {
        Mode::default()
    }

    pub fn budget(&self) -> u64 {
        match self {
            Mode::Exact { budget } => *budget,
            Mode::Sampled { .. } => DEFAULT_BUDGET,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Mode::Exact { .. })
    }
}

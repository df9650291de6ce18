use thiserror::Error;

use crate::state::Layout;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("photon count {0} is outside the supported range 2..={max}", max = crate::state::MAX_PHOTONS)]
    PhotonCount(usize),

    #[error("GHZ index {index} out of range for {photons} photons (must be < {limit})")]
    GhzIndex {
        index: usize,
        photons: usize,
        limit: usize,
    },

    #[error("photon index {index} out of range for {photons} photons")]
    PhotonIndex { index: usize, photons: usize },

    #[error("photon count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("layout mismatch: expected {expected:?}, found {found:?}")]
    LayoutMismatch { expected: Layout, found: Layout },

    #[error("operation not defined on {0:?} states")]
    UnsupportedLayout(Layout),

    #[error("state norm {norm_sqr} deviates from 1")]
    NotNormalized { norm_sqr: f64 },

    #[error("probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),

    #[error("probability {0} is not in (0, 1]")]
    Probability(f64),

    #[error("weight {0} is not in [0, 1]")]
    Weight(f64),

    #[error("{states} states but {weights} weights")]
    LengthMismatch { states: usize, weights: usize },

    #[error("ensemble has no members")]
    EmptyEnsemble,

    #[error("states {0} and {1} of the mixture are not orthogonal (overlap {2})")]
    NotOrthogonal(usize, usize, f64),

    #[error("gate table is not a bijection")]
    NotReversible,

    #[error("denominator vanishes")]
    ZeroDenominator,

    #[error("invalid parameter {name}: {value}")]
    Parameter { name: &'static str, value: f64 },

    #[error("empty sweep range")]
    EmptyRange,

    #[error("dense oracle supports at most {max} photons, got {photons}", max = crate::oracle::MAX_ORACLE_PHOTONS)]
    Capacity { photons: usize },
}

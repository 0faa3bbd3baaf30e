//! Operator analysis: characteristic functions, canonical products, companion
//! functions, moment bounds, and the structure classifier with falsification
//! search.

mod canonical;
mod charfn;
mod classify;
mod companion;
mod exact;
mod moments;

pub use canonical::{canonical_product, CanonicalProduct};
pub use charfn::{
    char_fn, default_zw_grid, f2_zero_scan, square_grid, zero_independence_probe,
    CharFnTruncation, F2ScanReport, ZeroProbeReport,
};
pub use classify::{
    bb_certificate, classify, falsify, reduce_general, Classification, ClassifyOptions, Reduction,
};
pub use companion::{second_companion, CompanionData};
pub use exact::{combinatorial_identity_check, rational};
pub use moments::{moment_bound_check, moment_formula, MomentBoundEntry, MomentBoundReport};

use crate::poly::PolyError;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AnalysisError {
    #[error("truncation needs source bound >= {needed}, operator has {available}")]
    TruncationTooDeep { needed: usize, available: usize },
    #[error("operator rank {rank} is below the required minimum of 2")]
    RankTooLow { rank: usize },
    #[error("zeroeth moment is the zero polynomial")]
    Psi0Zero,
    #[error("zeroeth moment vanishes at grid point {at}")]
    Psi0VanishesOnGrid { at: Complex64 },
    #[error("canonical product zeros must be nonzero")]
    ZeroAtOrigin,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub(crate) fn factorials(up_to: usize) -> Vec<f64> {
    let mut f = Vec::with_capacity(up_to + 1);
    f.push(1.0);
    for n in 1..=up_to {
        let prev = f[n - 1];
        f.push(prev * n as f64);
    }
    f
}

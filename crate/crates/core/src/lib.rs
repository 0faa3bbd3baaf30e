//! Stability-preserving linear operators on complex polynomials.
//!
//! The crate constructs, applies, and classifies linear operators that carry
//! polynomials with no zeros in one plane region to polynomials with no zeros
//! in another, together with the Hardy-space analogue for outer functions and
//! minimum-phase signals. Everything is finite-truncation numerics: operators
//! are matrices of monomial images, analytic objects are truncated series,
//! and every certification carries an explicit error budget.

pub mod analysis;
pub mod hardy;
mod linalg;
pub mod operator;
pub mod poly;
pub mod region;
mod roots;
pub mod suites;

pub use operator::{
    compose_operators, make_dilation, make_pcd, make_product_composition, make_rank1,
    MomentSequence, OperatorError, OperatorTruncation,
};
pub use poly::{ComplexPoly, PolyError, RootSet};
pub use region::{
    maps_into, ConvexSet, MapsInto, Membership, Region, RegionError, StabilityVerdict,
};

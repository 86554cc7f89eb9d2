//! Resonance computations for symmetric three-funneled hyperbolic surfaces.
//!
//! The surface `X_b` is the quotient of the hyperbolic plane by the group
//! generated by reflections in three pairwise disjoint geodesics at mutual
//! distance `b`, so that the three funnel boundary geodesics have length `2b`.
//! This crate computes the associated dynamical zeta function through its
//! exponential-sum partial sums `Z_n`, locates and audits its zeros, compares
//! the rescaled zero set against the four limit curves and the boundary
//! lattice, and evaluates Z2-twisted L-functions for the double cover.
//!
//! Modules follow the pipeline:
//!
//! * [`hyperbolic`] — upper half-plane geometry and exact geodesic lengths
//!   via stabilized reflection-matrix products;
//! * [`symdyn`] — enumeration of cutting words (the 3-letter subshift with
//!   no adjacent repeats);
//! * [`zetacore`] — length spectra, series coefficients, partial sums `Z_n`,
//!   and the rigorous truncation bound;
//! * [`transfermat`] — the 6x6 word-length-2 transfer matrix, its explicit
//!   eigenvalues, determinant approximation and integer polynomial data;
//! * [`zerofinder`] — Newton search over grids of seeds with an
//!   argument-principle completeness audit;
//! * [`zerogeom`] — rescaling, limit curves, Hausdorff distances,
//!   almost-periodicity and lattice comparison;
//! * [`lfunction`] — Z2 character twists and the factorization identity.

pub mod hyperbolic;
pub mod lfunction;
pub mod symdyn;
pub mod transfermat;
pub mod zerofinder;
pub mod zerogeom;
pub mod zetacore;

pub(crate) mod exact;
pub(crate) mod linalg;

pub use hyperbolic::SurfaceParams;
pub use symdyn::OrbitClass;
pub use transfermat::{IntPolynomial, TransferMatrix6};
pub use zerofinder::{Rect, ZeroSet};
pub use zetacore::{CoefficientTable, LengthSpectrum};

/// Errors across the crate. The CLI maps these onto exit codes: invalid
/// inputs and preconditions exit 2, numerical/audit failures exit 3, and
/// `BoundNotProven` exits 4.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("invalid state: {0}")]
    State(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("audit failure: {0}")]
    Audit(String),
    #[error("bound not proven for these parameters: {0}")]
    BoundNotProven(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Format a float with 17 significant digits, locale independent.
/// All CSV and report output goes through this so repeated runs are
/// byte-identical.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

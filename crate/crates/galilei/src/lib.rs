//! Galilean symmetry laboratory: exact Lie-algebra cohomology, the Galilei
//! group and its action on spacetime, classical actions and their
//! gauge-equivalence under boosts, time-sliced and spectral quantum
//! propagators on spatial grids, and the projective wave-function
//! representation of the symmetry group.
//!
//! The crate is organised bottom-up:
//!
//! * [`rng`] — a small deterministic linear-congruential generator used to
//!   sample reproducible test data (paths, group elements).
//! * [`algebra`] — structure constants with exact rational arithmetic,
//!   Jacobi/antisymmetry checks, and degree-two Chevalley–Eilenberg
//!   cohomology (closedness, exactness, H² dimension, witnesses).
//! * [`group`] — the Galilei group: composition, inversion, spacetime
//!   action, serialization.
//! * [`lagrangian`] — sampled paths, free/harmonic/pairwise potentials,
//!   discrete actions for the standard and scaled (`t²·(d(x/t)/dt)²`)
//!   Lagrangians, Euler–Lagrange residuals, and boundary-term
//!   (total-derivative) identities under boosts.
//! * [`grid`] — 1-D spatial grids, complex wave functions, dense
//!   propagator matrices, windows/norms/shifts.
//! * [`eig`] — a self-contained symmetric tridiagonal eigensolver (implicit
//!   QL with shifts) used by the spectral propagator.
//! * [`analytic`] — closed-form kernels (free, harmonic-oscillator),
//!   Gaussian wave packets, Gauss–Legendre quadrature, and a
//!   steepest-descent contour check of the kernel semigroup property.
//! * [`propagator`] — grid propagators: time-sliced products of one-step
//!   Gaussian kernels (both Lagrangian discretizations), the spectral
//!   (eigendecomposition) propagator, Crank–Nicolson evolution for the
//!   scaled picture, Schrödinger residuals, and kernel transformation
//!   identities under boosts and translations.
//! * [`symmetry`] — wave-function operators for boosts/translations/time
//!   shifts in the standard and scaled pictures, solution-map checks,
//!   the projective composition phase, and grid realizations of the
//!   infinitesimal generators and their central commutator.
//! * [`config`] — flat `key=value` configuration files.
//! * [`csvio`] — CSV serialization of paths, wave functions, kernels.
//! * [`fixtures`] — built-in algebras, two-forms, and sample inputs.

pub mod algebra;
pub mod analytic;
pub mod config;
pub mod csvio;
pub mod eig;
pub mod fixtures;
pub mod grid;
pub mod group;
pub mod lagrangian;
pub mod propagator;
pub mod rng;
pub mod symmetry;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Pseudo-spectral simulation and verification toolkit for the surface
//! quasi-geostrophic equation with anisotropic fractional dissipation,
//!
//! ```text
//! ∂tθ + u·∇θ + μ|∂₁|^{2α}θ + ν|∂₂|^{2β}θ = 0,   u = R^⊥θ = (−R₂θ, R₁θ),
//! ```
//!
//! posed on a doubly periodic box.
//!
//! * [`spectral`]: grids, physical/spectral fields, Fourier multipliers,
//!   Riesz velocity, dealiased advection and the binary snapshot format.
//! * [`solver`]: integrating-factor RK4 time stepping.
//! * [`diagnostics`]: Lebesgue and Sobolev norms, regularity thresholds,
//!   norm reports and boundedness verdicts.
//! * [`oracle`]: randomized checks of the interpolation, Riesz, logarithmic
//!   Sobolev and elementary logarithm inequalities.
//! * [`harness`]: configuration files, single runs, parameter sweeps,
//!   verification suites and the restart experiment.

pub mod diagnostics;
pub mod harness;
pub mod oracle;
pub mod params;
pub mod solver;
pub mod spectral;

pub use diagnostics::{NormReport, NormRow, Verdict};
pub use params::{AnisotropyParams, ParamsError};
pub use solver::{SolverConfig, Trajectory};
pub use spectral::{Axis, Grid, PhysicalField, SpectralError, SpectralField};

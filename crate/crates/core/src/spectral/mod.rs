//! Discrete function spaces on a doubly periodic box.
//!
//! Physical fields hold point values on a uniform `n1 × n2` lattice stored
//! row-major with `x₂` varying fastest. Spectral fields hold the unnormalized
//! discrete Fourier coefficients in the same layout; the inverse transform
//! divides by `n1·n2`.

mod field;
mod grid;
mod ops;
pub mod snapshot;

use thiserror::Error;

pub use field::{PhysicalField, SpectralField};
pub use grid::Grid;
pub(crate) use ops::{advection_into, AdvectionWork};
pub use ops::{
    advection_term, apply_directional_fractional, apply_isotropic_fractional, dealias, gradient,
    riesz_velocity,
};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("grid size must be even and at least 8, got {axis}: {n}")]
    BadSize { axis: &'static str, n: usize },
    #[error("box period must be positive and finite, got {axis}: {l}")]
    BadPeriod { axis: &'static str, l: f64 },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("value table has {got} entries, grid needs {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("non-finite value at flat index {0}")]
    NonFinite(usize),
    #[error("multiplier power must be finite and non-negative, got {0}")]
    NegativePower(f64),
    #[error("snapshot: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coordinate direction of a directional operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
}

impl TryFrom<u8> for Axis {
    type Error = u8;

    fn try_from(v: u8) -> Result<Self, u8> {
        match v {
            1 => Ok(Axis::X1),
            2 => Ok(Axis::X2),
            other => Err(other),
        }
    }
}

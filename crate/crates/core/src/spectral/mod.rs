//! Anisotropic periodic grid, discrete transforms, the nonlocal operators
//! `d/dx` and `D_x^{-1} d/dy` as Fourier multipliers, norms, and the X-metric
//! preconditioner.
//!
//! The whole-plane problem is truncated to a periodic box `[-Lx/2, Lx/2) x
//! [-Ly/2, Ly/2)`. `D_x^{-1}` is realized as the zero-x-mean antiderivative,
//! i.e. the multiplier `1/(i kx)` on `kx != 0` modes with the `kx = 0` plane
//! annihilated. Fields with vanishing `kx = 0` modes are called *admissible*;
//! they form the discrete stand-in for the energy space.
//!
//! All fields are immutable after construction and every operation is a pure
//! function, so concurrent use on distinct inputs is safe.

mod fft;
mod field;
mod grid;
mod ops;

pub use field::{
    gaussian_derivative_seed, lump_seed, random_band_limited, Field, SpectralCoeffs,
};
pub(crate) use field::default_sigma;
pub use grid::Grid;
pub use ops::boundary_mass_fraction;

/// Relative tolerance used when checking admissibility (zero x-mean rows).
pub const ADMISSIBLE_TOL: f64 = 1e-12;

//! Real grid functions and their discrete Fourier coefficients.

use ndarray::{Array2, Zip};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fft;
use super::grid::Grid;
use super::ADMISSIBLE_TOL;
use crate::error::SpectralError;

/// A real-valued grid function in physical space.
///
/// Values are stored with shape `(ny, nx)`, x fastest in memory. Admissible
/// fields have zero mean over x on every y-row, equivalently vanishing
/// `kx = 0` Fourier modes; this encodes membership in the closure of
/// `{ g_x : g smooth, compactly supported }` on the box.
#[derive(Clone, Debug)]
pub struct Field {
    grid: Grid,
    values: Array2<f64>,
}

impl Field {
    /// Wrap an array of samples. Validates shape and finiteness only;
    /// admissibility is the caller's concern (see [`Field::project_admissible`]).
    pub fn from_values(grid: Grid, values: Array2<f64>) -> Result<Self, SpectralError> {
        let (rows, cols) = values.dim();
        if rows != grid.ny() || cols != grid.nx() {
            return Err(SpectralError::ShapeMismatch {
                got_rows: rows,
                got_cols: cols,
                ny: grid.ny(),
                nx: grid.nx(),
            });
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(SpectralError::NonFinite);
        }
        Ok(Field { grid, values })
    }

    /// Sample a function of the physical coordinates `(x, y)`.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Array2::zeros((grid.ny(), grid.nx()));
        for iy in 0..grid.ny() {
            let y = grid.y(iy);
            for ix in 0..grid.nx() {
                values[[iy, ix]] = f(grid.x(ix), y);
            }
        }
        Field { grid, values }
    }

    pub fn zeros(grid: Grid) -> Self {
        let values = Array2::zeros((grid.ny(), grid.nx()));
        Field { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    /// Largest absolute sample value.
    pub fn amax(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Max over y-rows of the absolute x-mean, the admissibility defect.
    pub fn max_row_mean(&self) -> f64 {
        let nx = self.grid.nx() as f64;
        self.values
            .rows()
            .into_iter()
            .map(|r| (r.sum() / nx).abs())
            .fold(0.0, f64::max)
    }

    /// Whether all `kx = 0` modes vanish to the standard relative tolerance.
    pub fn is_admissible(&self) -> bool {
        let scale = self.amax().max(f64::MIN_POSITIVE);
        self.max_row_mean() <= ADMISSIBLE_TOL * scale
    }

    /// Forward transform to Fourier coefficients.
    pub fn to_coeffs(&self) -> SpectralCoeffs {
        SpectralCoeffs {
            grid: self.grid.clone(),
            coeffs: fft::forward(&self.grid, &self.values),
        }
    }

    pub(crate) fn forward(&self) -> Array2<Complex64> {
        fft::forward(&self.grid, &self.values)
    }

    pub(crate) fn from_coeff_array(grid: Grid, coeffs: &Array2<Complex64>) -> Self {
        let values = fft::inverse(&grid, coeffs);
        Field { grid, values }
    }

    // -- small arithmetic helpers used by the solvers ------------------------

    pub fn scale(&self, c: f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: &self.values * c,
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: f64, other: &Field) -> Field {
        debug_assert_eq!(self.grid, other.grid);
        let mut values = self.values.clone();
        Zip::from(&mut values)
            .and(&other.values)
            .for_each(|a, &b| *a += c * b);
        Field {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn sub(&self, other: &Field) -> Field {
        self.add_scaled(-1.0, other)
    }

    /// Discrete L2 pairing `sum f g * cell_area`.
    pub fn l2_inner(&self, other: &Field) -> f64 {
        debug_assert_eq!(self.grid, other.grid);
        let mut acc = 0.0;
        Zip::from(&self.values)
            .and(&other.values)
            .for_each(|&a, &b| acc += a * b);
        acc * self.grid.cell_area()
    }

    /// Sup-norm of the difference.
    pub fn sup_distance(&self, other: &Field) -> f64 {
        let mut m = 0.0f64;
        Zip::from(&self.values)
            .and(&other.values)
            .for_each(|&a, &b| m = m.max((a - b).abs()));
        m
    }

    /// Pointwise map of the sample values.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.mapv(|v| f(v)),
        }
    }
}

/// Discrete Fourier transform of a [`Field`], Hermitian-symmetric.
#[derive(Clone)]
pub struct SpectralCoeffs {
    grid: Grid,
    coeffs: Array2<Complex64>,
}

impl SpectralCoeffs {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &Array2<Complex64> {
        &self.coeffs
    }

    /// Inverse transform back to physical space.
    pub fn to_field(&self) -> Field {
        Field::from_coeff_array(self.grid.clone(), &self.coeffs)
    }

    /// Largest Hermitian-symmetry defect `|c[j,m] - conj(c[-j,-m])|`.
    pub fn hermitian_defect(&self) -> f64 {
        let (ny, nx) = (self.grid.ny(), self.grid.nx());
        let mut worst = 0.0f64;
        for m in 0..ny {
            let mm = (ny - m) % ny;
            for j in 0..nx {
                let jj = (nx - j) % nx;
                let d = (self.coeffs[[m, j]] - self.coeffs[[mm, jj]].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest coefficient magnitude on the `kx = 0` plane.
    pub fn kx_zero_mass(&self) -> f64 {
        (0..self.grid.ny())
            .map(|m| self.coeffs[[m, 0]].norm())
            .fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------------------
// Seed fields
// ---------------------------------------------------------------------------

/// `d/dx exp(-sigma (x^2 + y^2))` with `sigma` chosen so that roughly 99% of
/// the seed's mass sits in the inner half-box, projected admissible (the
/// sampled row means are zero only up to the box truncation).
pub fn gaussian_derivative_seed(grid: &Grid) -> Field {
    let sigma = default_sigma(grid);
    Field::from_fn(grid.clone(), |x, y| {
        -2.0 * sigma * x * (-sigma * (x * x + y * y)).exp()
    })
    .project_admissible()
}

/// `sigma` such that the mass of `d/dx exp(-sigma r^2)` outside radius
/// `min(Lx, Ly)/4` is about 1%: solves `exp(-s)(1+s) = 0.01` with
/// `s = 2 sigma R^2`.
pub(crate) fn default_sigma(grid: &Grid) -> f64 {
    let r = 0.25 * grid.lx().min(grid.ly());
    6.64 / (2.0 * r * r)
}

/// Rational lump-shaped seed, `4 (3 + (y/w)^2 - (x/w)^2) / (3 + (x/w)^2 + (y/w)^2)^2`,
/// projected admissible.
pub fn lump_seed(grid: &Grid) -> Field {
    let w = grid.lx().min(grid.ly()) / 20.0;
    let raw = Field::from_fn(grid.clone(), |x, y| {
        let xs = x / w;
        let ys = y / w;
        let d = 3.0 + xs * xs + ys * ys;
        4.0 * (3.0 + ys * ys - xs * xs) / (d * d)
    });
    raw.project_admissible()
}

/// Smooth random admissible field: white Fourier noise shaped by a Gaussian
/// low-pass filter, `kx = 0` plane removed. Deterministic in `seed`.
pub fn random_band_limited(grid: &Grid, seed: u64, cutoff_fraction: f64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = Array2::zeros((grid.ny(), grid.nx()));
    for v in raw.iter_mut() {
        *v = rng.gen_range(-1.0..1.0);
    }
    let noise = Field {
        grid: grid.clone(),
        values: raw,
    };
    let mut coeffs = noise.forward();
    let kx_cut = cutoff_fraction * grid.kx().iter().fold(0.0f64, |m, k| m.max(k.abs()));
    let ky_cut = cutoff_fraction * grid.ky().iter().fold(0.0f64, |m, k| m.max(k.abs()));
    for m in 0..grid.ny() {
        for j in 0..grid.nx() {
            if j == 0 {
                coeffs[[m, j]] = Complex64::default();
                continue;
            }
            let ax = grid.kx()[j] / kx_cut;
            let ay = grid.ky()[m] / ky_cut;
            coeffs[[m, j]] *= (-4.0 * (ax * ax + ay * ay)).exp();
        }
    }
    Field::from_coeff_array(grid.clone(), &coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_finiteness_checked() {
        let g = Grid::new(8, 8, 10.0, 10.0).unwrap();
        let bad = Array2::zeros((8, 4));
        assert!(Field::from_values(g.clone(), bad).is_err());
        let mut nan = Array2::zeros((8, 8));
        nan[[0, 0]] = f64::NAN;
        assert!(Field::from_values(g, nan).is_err());
    }

    #[test]
    fn gaussian_derivative_is_admissible() {
        let g = Grid::new(64, 64, 40.0, 40.0).unwrap();
        let f = gaussian_derivative_seed(&g);
        assert!(f.is_admissible());
    }

    #[test]
    fn random_band_limited_is_admissible_and_deterministic() {
        let g = Grid::new(32, 32, 20.0, 20.0).unwrap();
        let a = random_band_limited(&g, 7, 0.5);
        let b = random_band_limited(&g, 7, 0.5);
        assert!(a.is_admissible());
        assert_eq!(a.values(), b.values());
        let c = random_band_limited(&g, 8, 0.5);
        assert!(a.sup_distance(&c) > 0.0);
    }

    #[test]
    fn fft_roundtrip() {
        let g = Grid::new(16, 12, 7.0, 5.0).unwrap();
        let f = random_band_limited(&g, 3, 0.6);
        let back = f.to_coeffs().to_field();
        assert!(f.sup_distance(&back) < 1e-13 * f.amax().max(1.0));
    }

    #[test]
    fn coeffs_are_hermitian_for_real_fields() {
        let g = Grid::new(16, 16, 9.0, 9.0).unwrap();
        let f = random_band_limited(&g, 11, 0.7);
        let c = f.to_coeffs();
        assert!(c.hermitian_defect() < 1e-10 * f.amax().max(1.0));
        assert!(c.kx_zero_mass() < 1e-10);
    }
}

//! 2D transforms built from 1D FFTs: rows (x) first, then columns (y).
//!
//! Layout convention: physical arrays have shape `(ny, nx)` with x fastest,
//! matching the row-major x-fastest file format. Forward transforms are
//! unnormalized; inverses carry the `1/(nx ny)` factor.

use ndarray::Array2;
use num_complex::Complex64;

use super::grid::Grid;

/// Forward 2D DFT of a real array.
pub(crate) fn forward(grid: &Grid, values: &Array2<f64>) -> Array2<Complex64> {
    let (ny, nx) = (grid.ny(), grid.nx());
    let plans = &grid.inner.plans;
    let mut out = Array2::<Complex64>::zeros((ny, nx));

    let mut row = vec![Complex64::default(); nx];
    for iy in 0..ny {
        for ix in 0..nx {
            row[ix] = Complex64::new(values[[iy, ix]], 0.0);
        }
        plans.fwd_x.process(&mut row);
        for ix in 0..nx {
            out[[iy, ix]] = row[ix];
        }
    }

    let mut col = vec![Complex64::default(); ny];
    for ix in 0..nx {
        for iy in 0..ny {
            col[iy] = out[[iy, ix]];
        }
        plans.fwd_y.process(&mut col);
        for iy in 0..ny {
            out[[iy, ix]] = col[iy];
        }
    }
    out
}

/// Inverse 2D DFT; returns the real part of the normalized inverse.
pub(crate) fn inverse(grid: &Grid, coeffs: &Array2<Complex64>) -> Array2<f64> {
    let (ny, nx) = (grid.ny(), grid.nx());
    let plans = &grid.inner.plans;
    let mut work = coeffs.clone();

    let mut col = vec![Complex64::default(); ny];
    for ix in 0..nx {
        for iy in 0..ny {
            col[iy] = work[[iy, ix]];
        }
        plans.inv_y.process(&mut col);
        for iy in 0..ny {
            work[[iy, ix]] = col[iy];
        }
    }

    let scale = 1.0 / (nx as f64 * ny as f64);
    let mut out = Array2::<f64>::zeros((ny, nx));
    let mut row = vec![Complex64::default(); nx];
    for iy in 0..ny {
        for ix in 0..nx {
            row[ix] = work[[iy, ix]];
        }
        plans.inv_x.process(&mut row);
        for ix in 0..nx {
            out[[iy, ix]] = row[ix].re * scale;
        }
    }
    out
}

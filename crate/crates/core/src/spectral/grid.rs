//! Periodic grid descriptor and its Fourier wavenumber lattice.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::SpectralError;

pub(crate) struct FftPlans {
    pub fwd_x: Arc<dyn Fft<f64>>,
    pub inv_x: Arc<dyn Fft<f64>>,
    pub fwd_y: Arc<dyn Fft<f64>>,
    pub inv_y: Arc<dyn Fft<f64>>,
}

pub(crate) struct GridInner {
    /// Signed wavenumbers `2 pi j~ / Lx` in FFT storage order.
    pub kx: Vec<f64>,
    pub ky: Vec<f64>,
    /// `kx` with the `j = 0` and Nyquist entries zeroed; the derivative symbol.
    pub dkx: Vec<f64>,
    /// `ky` with the `m = 0` and Nyquist entries zeroed.
    pub dky: Vec<f64>,
    /// `1/kx` with the `j = 0` and Nyquist entries zeroed; the antiderivative symbol.
    pub inv_kx: Vec<f64>,
    pub plans: FftPlans,
}

/// Anisotropic periodic box `[-Lx/2, Lx/2) x [-Ly/2, Ly/2)` sampled on an
/// `nx x ny` collocation lattice.
///
/// Nyquist planes carry no information visible to the odd operators `d/dx`
/// and `D_x^{-1} d/dy` on the collocation grid (their sine factor vanishes at
/// every node), so all derivative symbols treat them as inert. Cloning is
/// cheap; transform plans are shared behind an `Arc` and are safe to use from
/// multiple threads.
#[derive(Clone)]
pub struct Grid {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    pub(crate) inner: Arc<GridInner>,
}

impl std::fmt::Debug for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Grid({}x{}, box {}x{})", self.nx, self.ny, self.lx, self.ly)
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.nx == other.nx
            && self.ny == other.ny
            && self.lx.to_bits() == other.lx.to_bits()
            && self.ly.to_bits() == other.ly.to_bits()
    }
}

fn wavenumbers(n: usize, len: f64) -> Vec<f64> {
    let dk = 2.0 * PI / len;
    (0..n)
        .map(|j| {
            let signed = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
            signed as f64 * dk
        })
        .collect()
}

impl Grid {
    /// Build a grid, populating the wavenumber lattice and FFT plans.
    ///
    /// Rejects odd or tiny (`< 4`) point counts and nonpositive box lengths.
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self, SpectralError> {
        if nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0 {
            return Err(SpectralError::BadDimensions { nx, ny });
        }
        if !(lx > 0.0) || !(ly > 0.0) || !lx.is_finite() || !ly.is_finite() {
            return Err(SpectralError::BadLengths { lx, ly });
        }
        let kx = wavenumbers(nx, lx);
        let ky = wavenumbers(ny, ly);
        let mut dkx = kx.clone();
        dkx[0] = 0.0;
        dkx[nx / 2] = 0.0;
        let mut dky = ky.clone();
        dky[0] = 0.0;
        dky[ny / 2] = 0.0;
        let inv_kx: Vec<f64> = dkx
            .iter()
            .map(|&k| if k == 0.0 { 0.0 } else { 1.0 / k })
            .collect();

        let mut planner = FftPlanner::new();
        let plans = FftPlans {
            fwd_x: planner.plan_fft_forward(nx),
            inv_x: planner.plan_fft_inverse(nx),
            fwd_y: planner.plan_fft_forward(ny),
            inv_y: planner.plan_fft_inverse(ny),
        };

        Ok(Grid {
            nx,
            ny,
            lx,
            ly,
            inner: Arc::new(GridInner {
                kx,
                ky,
                dkx,
                dky,
                inv_kx,
                plans,
            }),
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    /// Quadrature weight of one cell, `Lx Ly / (nx ny)`.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    /// Box area `Lx Ly`.
    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    /// Physical x coordinate of column `ix`, in `[-Lx/2, Lx/2)`.
    pub fn x(&self, ix: usize) -> f64 {
        -0.5 * self.lx + ix as f64 * self.dx()
    }

    /// Physical y coordinate of row `iy`, in `[-Ly/2, Ly/2)`.
    pub fn y(&self, iy: usize) -> f64 {
        -0.5 * self.ly + iy as f64 * self.dy()
    }

    /// Signed wavenumbers along x in FFT storage order.
    pub fn kx(&self) -> &[f64] {
        &self.inner.kx
    }

    /// Signed wavenumbers along y in FFT storage order.
    pub fn ky(&self) -> &[f64] {
        &self.inner.ky
    }

    /// Seminorm symbol `kx^2 + ky^2/kx^2` at mode `(j, m)`, zero on the
    /// `kx = 0` plane.
    ///
    /// Nyquist entries carry their true squared wavenumbers (squares are even
    /// under conjugation, so realness is preserved); zero weight there would
    /// hand the nonlinearity a kinetic-cost-free concentration channel.
    pub(crate) fn seminorm_symbol(&self, j: usize, m: usize) -> f64 {
        if j == 0 {
            return 0.0;
        }
        let kx = self.inner.kx[j];
        let ky = self.inner.ky[m];
        kx * kx + (ky * ky) / (kx * kx)
    }
}

//! Fourier-multiplier operators, norms and resampling on [`Field`]s.

use ndarray::Array2;
use num_complex::Complex64;

use super::field::Field;
use super::grid::Grid;
use crate::error::SpectralError;

impl Field {
    /// Zero all `kx = 0` Fourier modes. Idempotent and self-adjoint under the
    /// discrete L2 pairing.
    pub fn project_admissible(&self) -> Field {
        let mut c = self.forward();
        for m in 0..self.grid().ny() {
            c[[m, 0]] = Complex64::default();
        }
        Field::from_coeff_array(self.grid().clone(), &c)
    }

    /// Spectral x-derivative, multiplier `i kx`.
    pub fn d_x(&self) -> Field {
        let g = self.grid().clone();
        let mut c = self.forward();
        for m in 0..g.ny() {
            for j in 0..g.nx() {
                c[[m, j]] *= Complex64::new(0.0, g.inner.dkx[j]);
            }
        }
        Field::from_coeff_array(g, &c)
    }

    /// The nonlocal operator `D_x^{-1} d/dy`, multiplier `ky/kx` on `kx != 0`
    /// modes; the `kx = 0` plane is annihilated.
    pub fn dxinv_dy(&self) -> Field {
        let g = self.grid().clone();
        let mut c = self.forward();
        for m in 0..g.ny() {
            for j in 0..g.nx() {
                c[[m, j]] *= g.inner.dky[m] * g.inner.inv_kx[j];
            }
        }
        Field::from_coeff_array(g, &c)
    }

    /// Squared seminorm `int |f_x|^2 + |D_x^{-1} f_y|^2` via Parseval:
    /// `sum (kx^2 + ky^2/kx^2) |c|^2` with the cell-area normalization.
    pub fn x_seminorm_sq(&self) -> f64 {
        let g = self.grid();
        let c = self.forward();
        let mut acc = 0.0;
        for m in 0..g.ny() {
            for j in 0..g.nx() {
                acc += g.seminorm_symbol(j, m) * c[[m, j]].norm_sqr();
            }
        }
        acc * g.area() / (g.nx() as f64 * g.ny() as f64).powi(2)
    }

    /// Spectral (Parseval) L2 mass, `int |f|^2`.
    pub fn spectral_mass_sq(&self) -> f64 {
        let g = self.grid();
        let c = self.forward();
        let acc: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        acc * g.area() / (g.nx() as f64 * g.ny() as f64).powi(2)
    }

    /// `int |f|^p` by the uniform-grid quadrature rule.
    pub fn lp_norm_p(&self, p: f64) -> f64 {
        assert!(p >= 1.0, "lp_norm_p requires p >= 1");
        let acc: f64 = if p == 2.0 {
            self.values().iter().map(|v| v * v).sum()
        } else {
            self.values().iter().map(|v| v.abs().powf(p)).sum()
        };
        acc * self.grid().cell_area()
    }

    /// Apply the X-metric symbol `kx^2 + ky^2/kx^2 + 1` on admissible modes
    /// (`kx = 0` plane annihilated). Forward partner of
    /// [`Field::x_metric_precondition`].
    pub fn x_metric_apply(&self) -> Field {
        self.x_metric(false)
    }

    /// Sobolev-gradient preconditioner: multiplier `1/(kx^2 + ky^2/kx^2 + 1)`
    /// for `kx != 0`, zero on the `kx = 0` plane. Symmetric positive definite
    /// on the admissible subspace.
    pub fn x_metric_precondition(&self) -> Field {
        self.x_metric(true)
    }

    fn x_metric(&self, invert: bool) -> Field {
        let g = self.grid().clone();
        let mut c = self.forward();
        for m in 0..g.ny() {
            for j in 0..g.nx() {
                if j == 0 {
                    c[[m, j]] = Complex64::default();
                } else {
                    let s = g.seminorm_symbol(j, m) + 1.0;
                    c[[m, j]] *= if invert { 1.0 / s } else { s };
                }
            }
        }
        Field::from_coeff_array(g, &c)
    }

    /// The seminorm operator `-d^2/dx^2 + D_x^{-2} d^2/dy^2` (symbol
    /// `kx^2 + ky^2/kx^2`), the linear part of the L2 gradient of the energy.
    pub fn apply_x_symbol(&self) -> Field {
        let g = self.grid().clone();
        let mut c = self.forward();
        for m in 0..g.ny() {
            for j in 0..g.nx() {
                c[[m, j]] *= g.seminorm_symbol(j, m);
            }
        }
        Field::from_coeff_array(g, &c)
    }

    /// Sharp 2/3-rule spectral truncation, used optionally to damp aliasing of
    /// non-polynomial nonlinearities.
    pub fn dealias_two_thirds(&self) -> Field {
        let g = self.grid().clone();
        let mut c = self.forward();
        let jcut = g.nx() / 3;
        let mcut = g.ny() / 3;
        for m in 0..g.ny() {
            let ms = if m <= g.ny() / 2 { m } else { g.ny() - m };
            for j in 0..g.nx() {
                let js = if j <= g.nx() / 2 { j } else { g.nx() - j };
                if js > jcut || ms > mcut {
                    c[[m, j]] = Complex64::default();
                }
            }
        }
        Field::from_coeff_array(g, &c)
    }

    /// Trigonometric interpolation onto `target`, which must span the same
    /// box. Upsampling is exact for resolved modes; downsampling truncates the
    /// spectrum (logged as a warning).
    pub fn resample(&self, target: &Grid) -> Result<Field, SpectralError> {
        let src = self.grid();
        if src == target {
            return Ok(self.clone());
        }
        if src.lx().to_bits() != target.lx().to_bits()
            || src.ly().to_bits() != target.ly().to_bits()
        {
            return Err(SpectralError::BoxMismatch {
                src_lx: src.lx(),
                src_ly: src.ly(),
                dst_lx: target.lx(),
                dst_ly: target.ly(),
            });
        }
        if target.nx() < src.nx() || target.ny() < src.ny() {
            log::warn!(
                "resample truncates spectrum: {}x{} -> {}x{}",
                src.nx(),
                src.ny(),
                target.nx(),
                target.ny()
            );
        }

        let c = self.forward();
        let scale = (target.nx() * target.ny()) as f64 / (src.nx() * src.ny()) as f64;
        let mut out = Array2::<Complex64>::zeros((target.ny(), target.nx()));
        // Signed-index copy; a source Nyquist coefficient represents the pair
        // +-k_N and is split in half when the target resolves both.
        for m in 0..src.ny() {
            let (sm, wy) = signed_weight(m, src.ny());
            for j in 0..src.nx() {
                let (sj, wx) = signed_weight(j, src.nx());
                let v = c[[m, j]] * (wy * wx * scale);
                for &my in &dest_indices(sm, src.ny(), target.ny()) {
                    for &jx in &dest_indices(sj, src.nx(), target.nx()) {
                        out[[my, jx]] += v;
                    }
                }
            }
        }
        Ok(Field::from_coeff_array(target.clone(), &out))
    }
}

/// A source index interpreted as a signed mode, with the Nyquist split weight.
fn signed_weight(idx: usize, n: usize) -> (i64, f64) {
    if idx == n / 2 {
        (-((n / 2) as i64), 0.5)
    } else if idx < n / 2 {
        (idx as i64, 1.0)
    } else {
        (idx as i64 - n as i64, 1.0)
    }
}

/// Target storage indices for signed source mode `s` (one entry, two when a
/// split source Nyquist lands on both +-k_N of an equal-size target, none when
/// truncated away).
fn dest_indices(s: i64, src_n: usize, dst_n: usize) -> Vec<usize> {
    let half = dst_n as i64 / 2;
    let mut out = Vec::with_capacity(2);
    // The split halves of a source Nyquist mode: -N/2 and +N/2.
    let candidates = if s == -((src_n / 2) as i64) {
        vec![s, -s]
    } else {
        vec![s]
    };
    for v in candidates {
        if v >= -half && v < half {
            out.push(v.rem_euclid(dst_n as i64) as usize);
        } else if v == half {
            // Both halves fold onto the single target Nyquist slot.
            out.push((dst_n / 2) as usize);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Fraction of the L2 mass in the outer strip (outermost tenth of the box on
/// each side); the truncation-decay monitor.
pub fn boundary_mass_fraction(f: &Field) -> f64 {
    let g = f.grid();
    let x_edge = 0.4 * g.lx();
    let y_edge = 0.4 * g.ly();
    let mut total = 0.0;
    let mut strip = 0.0;
    for iy in 0..g.ny() {
        let y = g.y(iy);
        for ix in 0..g.nx() {
            let v = f.values()[[iy, ix]];
            let m = v * v;
            total += m;
            if g.x(ix).abs() > x_edge || y.abs() > y_edge {
                strip += m;
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        strip / total
    }
}

#[cfg(test)]
mod tests {
    use super::super::field::{gaussian_derivative_seed, random_band_limited};
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize, l: f64) -> Grid {
        Grid::new(n, n, l, l).unwrap()
    }

    #[test]
    fn projection_kills_constants() {
        let g = grid(16, 10.0);
        let c = Field::from_fn(g, |_, _| 3.25);
        let p = c.project_admissible();
        assert!(p.amax() < 1e-13);
    }

    #[test]
    fn projection_is_idempotent_and_preserves_admissible() {
        let g = grid(32, 20.0);
        let f = random_band_limited(&g, 5, 0.5);
        let p = f.project_admissible();
        assert!(p.sup_distance(&f) <= 1e-12 * f.amax());
        let pp = p.project_admissible();
        assert!(pp.sup_distance(&p) <= 1e-12 * p.amax().max(1e-300));

        // No kx = 0 content in sin(2 pi x / Lx): unchanged.
        let s = Field::from_fn(grid(32, 20.0), |x, _| (2.0 * PI * x / 20.0).sin());
        assert!(s.project_admissible().sup_distance(&s) < 1e-12);
    }

    #[test]
    fn projection_is_self_adjoint() {
        let g = grid(24, 13.0);
        let f = random_band_limited(&g, 1, 0.6);
        let h = random_band_limited(&g, 2, 0.6);
        // Make one of them inadmissible on purpose.
        let f = Field::from_fn(g.clone(), |x, y| 0.3 + x.sin() * y.cos())
            .add_scaled(1.0, &f);
        let lhs = f.project_admissible().l2_inner(&h);
        let rhs = f.l2_inner(&h.project_admissible());
        assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn d_x_of_single_mode() {
        let l = 40.0;
        let g = grid(64, l);
        let k = 2.0 * PI * 3.0 / l;
        let f = Field::from_fn(g.clone(), |x, _| (k * x).sin());
        let d = f.d_x();
        let want = Field::from_fn(g, |x, _| k * (k * x).cos());
        assert!(d.sup_distance(&want) < 1e-10);
        assert!(Field::zeros(grid(16, 5.0)).d_x().amax() == 0.0);
    }

    #[test]
    fn d_x_matches_analytic_gaussian() {
        let g = Grid::new(128, 128, 40.0, 40.0).unwrap();
        // u = d/dx e^{-x^2-y^2}; compare the spectral derivative of u with
        // the analytic second derivative.
        let u = Field::from_fn(g.clone(), |x, y| -2.0 * x * (-(x * x + y * y)).exp());
        let du = u.d_x();
        let want = Field::from_fn(g, |x, y| {
            (-2.0 + 4.0 * x * x) * (-(x * x + y * y)).exp()
        });
        assert!(du.sup_distance(&want) <= 1e-8);
    }

    #[test]
    fn dxinv_dy_inverts_d_x_on_derivatives() {
        let g = Grid::new(128, 128, 40.0, 40.0).unwrap();
        // u = phi_x with phi Gaussian: D_x^{-1} u_y = phi_y up to x-row means.
        let u = Field::from_fn(g.clone(), |x, y| -2.0 * x * (-(x * x + y * y)).exp());
        let got = u.dxinv_dy();
        let phi_y = Field::from_fn(g, |x, y| -2.0 * y * (-(x * x + y * y)).exp());
        let want = phi_y.project_admissible();
        assert!(got.sup_distance(&want) <= 1e-8);
    }

    #[test]
    fn dxinv_dy_single_mode_and_y_independence() {
        let l = 2.0 * PI;
        let g = grid(32, l);
        let (kx, ky) = (2.0, 3.0);
        let f = Field::from_fn(g.clone(), |x, y| (kx * x).sin() * (ky * y).cos());
        let got = f.dxinv_dy();
        let want = Field::from_fn(g.clone(), |x, y| {
            (ky / kx) * (kx * x).cos() * (ky * y).sin()
        });
        assert!(got.sup_distance(&want) < 1e-10);

        let fx = Field::from_fn(g, |x, _| (2.0 * x).sin());
        assert!(fx.dxinv_dy().amax() < 1e-13);
    }

    #[test]
    fn operators_commute() {
        let g = grid(48, 17.0);
        let f = random_band_limited(&g, 9, 0.5);
        let a = f.d_x().dxinv_dy();
        let b = f.dxinv_dy().d_x();
        assert!(a.sup_distance(&b) <= 1e-10 * f.amax().max(1.0));
    }

    #[test]
    fn seminorm_of_single_mode() {
        let l = 40.0;
        let g = grid(64, l);
        let k = 2.0 * PI * 2.0 / l;
        let amp = 1.7;
        let f = Field::from_fn(g, |x, _| amp * (k * x).sin());
        let want = amp * amp * k * k * l * l / 2.0;
        assert!((f.x_seminorm_sq() - want).abs() < 1e-10 * want);
        assert_eq!(Field::zeros(grid(16, 5.0)).x_seminorm_sq(), 0.0);
    }

    #[test]
    fn seminorm_matches_operator_quadrature() {
        let g = grid(64, 23.0);
        let f = random_band_limited(&g, 21, 0.4);
        let direct = f.d_x().lp_norm_p(2.0) + f.dxinv_dy().lp_norm_p(2.0);
        let spectral = f.x_seminorm_sq();
        assert!((direct - spectral).abs() <= 1e-10 * spectral.max(1e-30));
        assert!(spectral > 0.0);
    }

    #[test]
    fn parseval_mass_agreement() {
        let g = grid(48, 31.0);
        let f = random_band_limited(&g, 33, 0.5);
        let phys = f.lp_norm_p(2.0);
        let spec = f.spectral_mass_sq();
        assert!((phys - spec).abs() <= 1e-10 * phys);
    }

    #[test]
    fn lp_norm_basics() {
        let g = grid(16, 6.0);
        assert_eq!(Field::zeros(g.clone()).lp_norm_p(3.0), 0.0);
        let one = Field::from_fn(g, |_, _| 1.0);
        for p in [1.0, 2.5, 4.0] {
            assert!((one.lp_norm_p(p) - 36.0).abs() < 1e-12 * 36.0);
        }
    }

    #[test]
    fn precondition_scales_single_mode() {
        let l = 2.0 * PI;
        let g = grid(32, l);
        let (kx, ky) = (3.0, 2.0);
        let f = Field::from_fn(g.clone(), |x, y| (kx * x).sin() * (ky * y).cos());
        let got = f.x_metric_precondition();
        let s = kx * kx + ky * ky / (kx * kx) + 1.0;
        let want = f.scale(1.0 / s);
        assert!(got.sup_distance(&want) < 1e-12);
        assert!(Field::zeros(g).x_metric_precondition().amax() == 0.0);
    }

    #[test]
    fn precondition_inverts_forward_symbol() {
        let g = grid(48, 19.0);
        let f = random_band_limited(&g, 17, 0.5);
        let roundtrip = f.x_metric_precondition().x_metric_apply();
        assert!(roundtrip.sup_distance(&f) <= 1e-10 * f.amax().max(1.0));
    }

    #[test]
    fn resample_identity_is_bitwise() {
        let g = grid(32, 11.0);
        let f = random_band_limited(&g, 2, 0.5);
        let r = f.resample(&g).unwrap();
        assert_eq!(f.values(), r.values());
    }

    #[test]
    fn resample_upsamples_single_mode_exactly() {
        let l = 40.0;
        let coarse = grid(64, l);
        let fine = grid(128, l);
        let k = 2.0 * PI * 5.0 / l;
        let f = Field::from_fn(coarse, |x, y| (k * x).sin() * (k * y).cos());
        let want = Field::from_fn(fine.clone(), |x, y| (k * x).sin() * (k * y).cos());
        let got = f.resample(&fine).unwrap();
        assert!(got.sup_distance(&want) <= 1e-12);
    }

    #[test]
    fn resample_preserves_quartic_mass_of_smooth_fields() {
        let coarse = Grid::new(64, 64, 40.0, 40.0).unwrap();
        let fine = Grid::new(128, 128, 40.0, 40.0).unwrap();
        let f = gaussian_derivative_seed(&coarse);
        let up = f.resample(&fine).unwrap();
        let before = f.lp_norm_p(4.0);
        let after = up.lp_norm_p(4.0);
        assert!((before - after).abs() <= 1e-8 * before);
        let m0 = f.lp_norm_p(2.0);
        let m1 = up.lp_norm_p(2.0);
        assert!((m0 - m1).abs() <= 1e-8 * m0);
    }

    #[test]
    fn resample_box_mismatch_is_error() {
        let a = grid(32, 10.0);
        let b = grid(32, 12.0);
        let f = random_band_limited(&a, 4, 0.5);
        assert!(f.resample(&b).is_err());
    }

    #[test]
    fn boundary_monitor_flags_edge_mass() {
        let g = grid(64, 40.0);
        let centered = gaussian_derivative_seed(&g);
        assert!(boundary_mass_fraction(&centered) < 1e-5);
        let edge = Field::from_fn(g, |x, y| (-((x - 19.0).powi(2) + y * y)).exp());
        assert!(boundary_mass_fraction(&edge) > 0.5);
    }
}

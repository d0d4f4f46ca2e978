//! The anisotropic mass-preserving scaling `H(u,t)(x,y) = e^t u(e^{2t/3} x,
//! e^{4t/3} y)` and the closed-form fiber maps it induces.
//!
//! Along the fiber, `|u|_2^2` is invariant, `|u|_q^q` scales by `e^{(q-2)t}`
//! and `||u||_0^2` by `e^{4t/3}`, so the energy restricted to a fiber is an
//! explicit function of `t` and the four fiber integrals. All root and
//! extremum solves run on that closed form; [`apply_scaling`] exists only to
//! materialize scaled fields for cross-checks and solver restarts.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::FiberError;
use crate::functionals::{FiberIntegrals, Nonlinearity, Q_CRITICAL};
use crate::spectral::Field;

/// Scan window and step for locating sign changes of `psi'`.
const SCAN_LO: f64 = -40.0;
const SCAN_HI: f64 = 40.0;
const SCAN_STEP: f64 = 0.25;

/// Fiber maps of a fixed field: `psi(t) = J(H(u,t))` and its derivatives, as
/// closed forms in the fiber integrals.
#[derive(Clone, Copy, Debug)]
pub struct FiberMap {
    fi: FiberIntegrals,
    nl: Nonlinearity,
}

impl FiberMap {
    /// Pair integrals with a nonlinearity. Pure powers must carry `lp = 0`.
    pub fn new(fi: FiberIntegrals, nl: Nonlinearity) -> Result<Self, FiberError> {
        if matches!(nl, Nonlinearity::PurePower { .. }) && fi.lp != 0.0 {
            return Err(FiberError::Degenerate(
                "pure power fiber with nonzero |u|_p^p".into(),
            ));
        }
        Ok(FiberMap { fi, nl })
    }

    /// Fiber map of a concrete field.
    pub fn of(u: &Field, nl: &Nonlinearity) -> Self {
        FiberMap {
            fi: crate::functionals::fiber_integrals(u, nl),
            nl: *nl,
        }
    }

    pub fn integrals(&self) -> &FiberIntegrals {
        &self.fi
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nl
    }

    fn terms(&self) -> (f64, f64, f64, f64, f64) {
        // (A, mu_eff * Bq, q, Bp, p); Bp = 0 for pure powers.
        match self.nl {
            Nonlinearity::PurePower { q } => (self.fi.seminorm_sq, self.fi.lq, q, 0.0, 4.0),
            Nonlinearity::Combined { mu, q, p } => {
                (self.fi.seminorm_sq, mu * self.fi.lq, q, self.fi.lp, p)
            }
        }
    }

    /// `psi(t) = e^{4t/3}/2 A - mu_eff/q e^{(q-2)t} Bq - 1/p e^{(p-2)t} Bp`.
    pub fn psi(&self, t: f64) -> f64 {
        let (a, bq, q, bp, p) = self.terms();
        0.5 * (4.0 * t / 3.0).exp() * a
            - ((q - 2.0) * t).exp() * bq / q
            - ((p - 2.0) * t).exp() * bp / p
    }

    /// `psi'(t)`; equals the Pohozaev functional of `H(u,t)`.
    pub fn psi_prime(&self, t: f64) -> f64 {
        let (a, bq, q, bp, p) = self.terms();
        2.0 / 3.0 * (4.0 * t / 3.0).exp() * a
            - (q - 2.0) / q * ((q - 2.0) * t).exp() * bq
            - (p - 2.0) / p * ((p - 2.0) * t).exp() * bp
    }

    /// `psi''(t)`, used to classify critical points.
    pub fn psi_second(&self, t: f64) -> f64 {
        let (a, bq, q, bp, p) = self.terms();
        8.0 / 9.0 * (4.0 * t / 3.0).exp() * a
            - (q - 2.0).powi(2) / q * ((q - 2.0) * t).exp() * bq
            - (p - 2.0).powi(2) / p * ((p - 2.0) * t).exp() * bp
    }

    /// The unique critical point of a pure-power fiber,
    /// `t* = ln(2 q A / (3 (q-2) Bq)) / (q - 10/3)`.
    ///
    /// A maximum for supercritical `q`, a minimum for subcritical `q`;
    /// guarded against the blow-up of the closed form at `q -> 10/3`.
    pub fn critical_t_pure(&self) -> Result<f64, FiberError> {
        let (a, bq, q, _, _) = match self.nl {
            Nonlinearity::PurePower { .. } => self.terms(),
            Nonlinearity::Combined { .. } => {
                return Err(FiberError::WrongRegime("a pure-power nonlinearity".into()))
            }
        };
        if a <= 0.0 || bq <= 0.0 {
            return Err(FiberError::Degenerate(format!(
                "need positive fiber integrals, got A = {a:.3e}, Bq = {bq:.3e}"
            )));
        }
        let t = (2.0 * q * a / (3.0 * (q - 2.0) * bq)).ln() / (q - Q_CRITICAL);
        if !t.is_finite() || t.abs() > 200.0 {
            return Err(FiberError::NearCritical { t_star: t });
        }
        Ok(t)
    }

    /// The unique maximum of a supercritical pure-power fiber, verified by a
    /// safeguarded bisection on `psi'`.
    pub fn critical_t_pure_supercritical(&self) -> Result<f64, FiberError> {
        match self.nl {
            Nonlinearity::PurePower { q } if q > Q_CRITICAL => {}
            _ => {
                return Err(FiberError::WrongRegime(
                    "a supercritical pure power (q > 10/3)".into(),
                ))
            }
        }
        let t = self.critical_t_pure()?;
        debug_assert!(self.psi_second(t) < 0.0);
        let refined = bisect(|s| self.psi_prime(s), t - 1.0, t + 1.0, 1e-13)
            .unwrap_or(t);
        // The closed form is exact up to rounding; bisection is a cross-check.
        debug_assert!((refined - t).abs() <= 1e-9 * (1.0 + t.abs()));
        Ok(t)
    }

    /// The two critical points `t1 < t2` of a combined fiber (local minimum,
    /// then local maximum), located by a sign-change scan plus bisection.
    ///
    /// `psi'` of a combined fiber is negative near both ends; either it has
    /// exactly two roots, none (`NoSecondCriticalPoint`), or a tangency
    /// (`DegenerateDoubleRoot`). Roots are polished to `|psi'| <= 1e-12 A`.
    pub fn critical_points_combined(&self) -> Result<(f64, f64), FiberError> {
        let (a, bq, _, bp, _) = match self.nl {
            Nonlinearity::Combined { .. } => self.terms(),
            Nonlinearity::PurePower { .. } => {
                return Err(FiberError::WrongRegime("a combined nonlinearity".into()))
            }
        };
        if a <= 0.0 || bq <= 0.0 || bp <= 0.0 {
            return Err(FiberError::Degenerate(format!(
                "need positive fiber integrals, got A = {a:.3e}, Bq = {bq:.3e}, Bp = {bp:.3e}"
            )));
        }

        let mut brackets = Vec::new();
        let mut t = SCAN_LO;
        let mut prev = self.psi_prime(t);
        let mut max_val = prev;
        let mut max_at = t;
        while t < SCAN_HI {
            let next_t = t + SCAN_STEP;
            let next = self.psi_prime(next_t);
            if next > max_val {
                max_val = next;
                max_at = next_t;
            }
            if prev.signum() != next.signum() && prev != 0.0 {
                brackets.push((t, next_t));
            }
            t = next_t;
            prev = next;
        }

        let tol = 1e-12 * a;
        if brackets.len() >= 2 {
            let t1 = bisect(|s| self.psi_prime(s), brackets[0].0, brackets[0].1, tol)
                .ok_or(FiberError::NoSecondCriticalPoint)?;
            let t2 = bisect(|s| self.psi_prime(s), brackets[1].0, brackets[1].1, tol)
                .ok_or(FiberError::NoSecondCriticalPoint)?;
            debug_assert!(self.psi_second(t1) > 0.0 && self.psi_second(t2) < 0.0);
            return Ok((t1, t2));
        }

        // No sign change: a tangency shows up as near-total cancellation of
        // the terms of psi' at its most-positive point.
        let peak = refine_max(|s| self.psi_prime(s), max_at - SCAN_STEP, max_at + SCAN_STEP);
        let peak_val = self.psi_prime(peak);
        if peak_val.abs() <= 1e-10 * self.psi_prime_term_scale(peak) {
            Err(FiberError::DegenerateDoubleRoot { t: peak })
        } else {
            Err(FiberError::NoSecondCriticalPoint)
        }
    }

    /// Sum of the absolute term magnitudes of `psi'(t)`, the cancellation scale.
    fn psi_prime_term_scale(&self, t: f64) -> f64 {
        let (a, bq, q, bp, p) = self.terms();
        2.0 / 3.0 * (4.0 * t / 3.0).exp() * a
            + (q - 2.0) / q * ((q - 2.0) * t).exp() * bq
            + (p - 2.0) / p * ((p - 2.0) * t).exp() * bp
    }
}

/// Bisection for a sign change of `f` on `[lo, hi]`; `None` if no sign change.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= tol || (hi - lo) < 1e-15 * (1.0 + mid.abs()) {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Golden-section refinement of a local maximum of `f` on `[lo, hi]`.
fn refine_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    for _ in 0..120 {
        if fa > fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

/// Materialize `H(u,t)` on the grid of `u` by trigonometric evaluation at the
/// stretched coordinates, projected admissible.
///
/// Stretched coordinates that land outside the box read zero (the whole-plane
/// interpretation of the truncation) rather than wrapping periodically, so a
/// contraction cannot fold boundary tails back into the domain.
/// `|H(u,t)|_2 = |u|_2` holds to about 1e-6 relative while the scaled field
/// stays resolved and supported in the box; larger deviation is logged.
pub fn apply_scaling(u: &Field, t: f64) -> Field {
    let g = u.grid().clone();
    let (nx, ny) = (g.nx(), g.ny());
    let alpha = (2.0 * t / 3.0).exp();
    let gamma = (4.0 * t / 3.0).exp();
    let coeffs = u.to_coeffs();
    let c = coeffs.coeffs();

    let in_x = |x: f64| (-0.5 * g.lx()..0.5 * g.lx()).contains(&x);
    let in_y = |y: f64| (-0.5 * g.ly()..0.5 * g.ly()).contains(&y);

    // Separable evaluation: first contract over ky for every stretched row
    // coordinate, then over kx for every stretched column coordinate.
    let x0 = -0.5 * g.lx();
    let y0 = -0.5 * g.ly();
    let mut stage = Array2::<Complex64>::zeros((ny, nx));
    for m_out in 0..ny {
        let yt = gamma * g.y(m_out);
        if !in_y(yt) {
            continue;
        }
        for mk in 0..ny {
            let ph = Complex64::from_polar(1.0, g.ky()[mk] * (yt - y0));
            for j in 0..nx {
                stage[[m_out, j]] += c[[mk, j]] * ph;
            }
        }
    }
    let norm = (t).exp() / (nx as f64 * ny as f64);
    let mut out = Array2::<f64>::zeros((ny, nx));
    for i_out in 0..nx {
        let xt = alpha * g.x(i_out);
        if !in_x(xt) {
            continue;
        }
        let mut phases = vec![Complex64::default(); nx];
        for (j, ph) in phases.iter_mut().enumerate() {
            *ph = Complex64::from_polar(1.0, g.kx()[j] * (xt - x0));
        }
        for m_out in 0..ny {
            let mut acc = Complex64::default();
            for j in 0..nx {
                acc += stage[[m_out, j]] * phases[j];
            }
            out[[m_out, i_out]] = acc.re * norm;
        }
    }

    let result = Field::from_values(g, out)
        .expect("scaled field is finite")
        .project_admissible();
    let before = u.lp_norm_p(2.0);
    if before > 0.0 {
        let after = result.lp_norm_p(2.0);
        let rel = ((after - before) / before).abs();
        if rel > 1e-6 {
            log::warn!("apply_scaling(t = {t:.3}) lost mass: relative drift {rel:.3e}");
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{energy, fiber_integrals};
    use crate::spectral::{gaussian_derivative_seed, Grid};
    use proptest::prelude::*;

    fn fm(a: f64, bq: f64, q: f64) -> FiberMap {
        FiberMap::new(
            FiberIntegrals {
                mass_sq: 1.0,
                seminorm_sq: a,
                lq: bq,
                lp: 0.0,
            },
            Nonlinearity::pure_power(q).unwrap(),
        )
        .unwrap()
    }

    fn fm_combined(a: f64, bq: f64, bp: f64, mu: f64, q: f64, p: f64) -> FiberMap {
        FiberMap::new(
            FiberIntegrals {
                mass_sq: 1.0,
                seminorm_sq: a,
                lq: bq,
                lp: bp,
            },
            Nonlinearity::combined(mu, q, p).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn psi_at_zero_is_energy() {
        let g = Grid::new(48, 48, 40.0, 40.0).unwrap();
        let u = gaussian_derivative_seed(&g);
        let nl = Nonlinearity::pure_power(3.0).unwrap();
        let f = FiberMap::of(&u, &nl);
        assert!((f.psi(0.0) - energy(&u, &nl)).abs() < 1e-14 * (1.0 + f.psi(0.0).abs()));
        assert!(
            (f.psi_prime(0.0) - crate::functionals::pohozaev(&u, &nl)).abs()
                < 1e-14 * (1.0 + f.psi_prime(0.0).abs())
        );
    }

    #[test]
    fn subcritical_fiber_goes_negative_then_vanishes() {
        let f = fm(1.0, 1.0, 3.0);
        let v = f.psi(-10.0);
        let expect = (-40.0 / 3.0f64).exp() / 2.0 - (-10.0f64).exp() / 3.0;
        assert!((v - expect).abs() < 1e-18);
        assert!(v < 0.0);
        // Lemma-style limit: psi(-30) negative with magnitude < 1e-10 * A.
        let tail = f.psi(-30.0);
        assert!(tail < 0.0 && tail.abs() < 1e-10 * 1.0);
    }

    #[test]
    fn supercritical_fiber_diverges_to_minus_infinity() {
        let f = fm(1.0, 1.0, 4.0);
        assert!(f.psi(50.0) < 0.0);
        assert!(f.psi(50.0) < -1e20);
    }

    #[test]
    fn psi_prime_matches_finite_differences() {
        let cases = [fm(2.0, 3.0, 4.5), fm(1.0, 0.7, 2.7)];
        let comb = fm_combined(1.5, 0.8, 0.6, 1.3, 3.0, 4.0);
        for f in cases.iter().chain(std::iter::once(&comb)) {
            for t in [-3.0, -0.5, 0.0, 0.4, 2.0] {
                let eps = 1e-6;
                let fd = (f.psi(t + eps) - f.psi(t - eps)) / (2.0 * eps);
                let an = f.psi_prime(t);
                assert!((fd - an).abs() <= 1e-8 * an.abs().max(1e-12), "t = {t}");
            }
        }
    }

    #[test]
    fn critical_t_closed_form() {
        // q = 4, A = Bq = 1: t* = (3/2) ln(4/3).
        let f = fm(1.0, 1.0, 4.0);
        let t = f.critical_t_pure_supercritical().unwrap();
        let want = 1.5 * (4.0f64 / 3.0).ln();
        assert!((t - want).abs() < 1e-12);
        assert!((t - 0.43152).abs() < 1e-5);
        // psi' changes sign around t*.
        assert!(f.psi_prime(t - 0.1) > 0.0 && f.psi_prime(t + 0.1) < 0.0);
    }

    #[test]
    fn critical_t_near_critical_exponent_is_guarded() {
        let f = fm(1.0, 2.0, Q_CRITICAL + 1e-9);
        match f.critical_t_pure() {
            Err(FiberError::NearCritical { .. }) => {}
            other => panic!("expected NearCritical, got {other:?}"),
        }
    }

    #[test]
    fn critical_t_rejects_degenerate_and_wrong_regime() {
        assert!(fm(0.0, 1.0, 4.0).critical_t_pure().is_err());
        assert!(fm(1.0, 0.0, 4.0).critical_t_pure().is_err());
        assert!(fm(1.0, 1.0, 3.0).critical_t_pure_supercritical().is_err());
        assert!(fm_combined(1.0, 1.0, 1.0, 1.0, 3.0, 4.0)
            .critical_t_pure()
            .is_err());
    }

    #[test]
    fn combined_roots_have_min_max_structure() {
        // Small Bq, Bp relative to A: the barrier geometry holds.
        let f = fm_combined(1.0, 0.05, 0.02, 1.0, 3.0, 4.0);
        let (t1, t2) = f.critical_points_combined().unwrap();
        assert!(t1 < t2);
        assert!(f.psi_second(t1) > 0.0);
        assert!(f.psi_second(t2) < 0.0);
        assert!(f.psi(t1) < 0.0);
        assert!(f.psi(t2) >= 0.0);
        assert!(f.psi_prime(t1).abs() <= 1e-12 * 1.0);
        assert!(f.psi_prime(t2).abs() <= 1e-12 * 1.0);
    }

    #[test]
    fn combined_no_second_critical_point_when_dominated() {
        // Huge nonlinear masses: psi' < 0 everywhere.
        let f = fm_combined(1e-6, 50.0, 50.0, 1.0, 3.0, 4.0);
        match f.critical_points_combined() {
            Err(FiberError::NoSecondCriticalPoint) => {}
            other => panic!("expected NoSecondCriticalPoint, got {other:?}"),
        }
    }

    #[test]
    fn combined_rejects_pure_reduction() {
        // Bp = 0 is not a combined fiber.
        let f = FiberMap::new(
            FiberIntegrals {
                mass_sq: 1.0,
                seminorm_sq: 1.0,
                lq: 1.0,
                lp: 0.0,
            },
            Nonlinearity::combined(1.0, 3.0, 4.0).unwrap(),
        )
        .unwrap();
        assert!(f.critical_points_combined().is_err());
        // And a pure-power map cannot carry lp != 0.
        assert!(FiberMap::new(
            FiberIntegrals {
                mass_sq: 1.0,
                seminorm_sq: 1.0,
                lq: 1.0,
                lp: 0.5,
            },
            Nonlinearity::pure_power(3.0).unwrap(),
        )
        .is_err());
    }

    /// Contained oscillatory test field `sin(k0 x) exp(-sigma r^2)`, projected.
    ///
    /// The x-modulation keeps the `kx ~ 0` spectral strip empty, which the
    /// periodic `D_x^{-1}` annihilates; only such fields satisfy the
    /// whole-plane scaling identities to high accuracy on a box.
    fn test_wave_packet(g: &Grid) -> Field {
        let (sigma, k0) = (0.2, 2.2);
        Field::from_fn(g.clone(), move |x, y| {
            (k0 * x).sin() * (-sigma * (x * x + y * y)).exp()
        })
        .project_admissible()
    }

    #[test]
    fn scaling_identity_at_zero_and_group_law() {
        let g = Grid::new(128, 128, 40.0, 40.0).unwrap();
        let u = test_wave_packet(&g);
        let same = apply_scaling(&u, 0.0);
        assert!(same.sup_distance(&u) <= 1e-10 * u.amax());

        let st = apply_scaling(&apply_scaling(&u, 0.15), 0.15);
        let direct = apply_scaling(&u, 0.3);
        assert!(st.sup_distance(&direct) <= 1e-6 * u.amax());
    }

    #[test]
    fn scaling_identities_on_the_grid() {
        let g = Grid::new(128, 128, 40.0, 40.0).unwrap();
        let u = test_wave_packet(&g);
        let nl = Nonlinearity::pure_power(4.0).unwrap();
        for t in [0.3, -0.3] {
            let v = apply_scaling(&u, t);
            let fu = fiber_integrals(&u, &nl);
            let fv = fiber_integrals(&v, &nl);
            assert!((fv.mass_sq - fu.mass_sq).abs() <= 1e-6 * fu.mass_sq);
            assert!((fv.lq - (t * (4.0 - 2.0)).exp() * fu.lq).abs() <= 1e-6 * fu.lq);
            assert!(
                (fv.seminorm_sq - (4.0 * t / 3.0).exp() * fu.seminorm_sq).abs()
                    <= 1e-6 * fu.seminorm_sq
            );
        }
    }

    #[test]
    fn energy_along_fiber_matches_closed_form() {
        let g = Grid::new(128, 128, 40.0, 40.0).unwrap();
        let u = test_wave_packet(&g);
        let nl = Nonlinearity::pure_power(4.0).unwrap();
        let f = FiberMap::of(&u, &nl);
        for t in [-0.5, -0.3, 0.3] {
            let v = apply_scaling(&u, t);
            let grid_energy = energy(&v, &nl);
            let closed = f.psi(t);
            assert!(
                (grid_energy - closed).abs() <= 1e-6 * closed.abs().max(1e-6),
                "t = {t}: {grid_energy} vs {closed}"
            );
        }
    }

    proptest! {
        #[test]
        fn fiber_translation_covariance(
            a in 1e-3..1e3f64,
            bq in 1e-3..1e3f64,
            q in 3.4..5.9f64,
            s in -2.0..2.0f64,
            t in -2.0..2.0f64,
        ) {
            // The fiber of H(u,s) is t -> psi_u(t+s): shift the integrals.
            let base = fm(a, bq, q);
            let shifted = fm((4.0*s/3.0f64).exp()*a, ((q-2.0)*s).exp()*bq, q);
            let lhs = shifted.psi(t);
            let rhs = base.psi(t + s);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-10));
        }

        #[test]
        fn supercritical_unique_sign_change(
            a in 1e-3..1e3f64,
            bq in 1e-3..1e3f64,
            q in 3.4..5.9f64,
        ) {
            let f = fm(a, bq, q);
            let mut changes = 0;
            let mut t = -50.0;
            let mut prev = f.psi_prime(t);
            while t < 50.0 {
                t += 0.25;
                let next = f.psi_prime(t);
                if prev.signum() != next.signum() {
                    changes += 1;
                }
                prev = next;
            }
            prop_assert_eq!(changes, 1);
            // And the located maximum shifts covariantly under scaling input.
            let t_star = f.critical_t_pure_supercritical().unwrap();
            let s = 0.7;
            let shifted = fm((4.0*s/3.0f64).exp()*a, ((q-2.0)*s).exp()*bq, q);
            let t_shift = shifted.critical_t_pure_supercritical().unwrap();
            prop_assert!((t_shift - (t_star - s)).abs() <= 1e-10 * (1.0 + t_star.abs()));
        }

        #[test]
        fn gn_exponent_bookkeeping_makes_quotient_fiber_invariant(
            a in 1e-2..1e2f64,
            bq in 1e-2..1e2f64,
            q in 2.1..5.9f64,
            t in -3.0..3.0f64,
        ) {
            // W = Bq / (mass^{(1-b)q} A^{qb/2}) is invariant along the fiber.
            let beta = crate::thresholds::beta_unchecked(q);
            let mass_sq = 2.3f64;
            let w0 = bq / (mass_sq.powf(0.5*(1.0-beta)*q) * a.powf(0.5*q*beta));
            let at = (4.0*t/3.0f64).exp() * a;
            let bqt = ((q-2.0)*t).exp() * bq;
            let wt = bqt / (mass_sq.powf(0.5*(1.0-beta)*q) * at.powf(0.5*q*beta));
            prop_assert!((w0 - wt).abs() <= 1e-8 * w0.max(1e-12));
        }
    }
}

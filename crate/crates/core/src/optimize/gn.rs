//! Numerical estimation of the Gagliardo-Nirenberg constant by normalized
//! ascent of the quotient from multiple starts.

use serde::Serialize;

use crate::error::OptimizeError;
use crate::functionals::gn_quotient;
use crate::optimize::flow::{retract_mass, tangent_project};
use crate::optimize::SolveOptions;
use crate::spectral::{gaussian_derivative_seed, lump_seed, random_band_limited, Field, Grid};
use crate::thresholds::{beta_unchecked, GnConstants, Provenance};

/// Number of random starts on top of the two deterministic seeds.
const RANDOM_STARTS: usize = 8;
const MAX_ASCENT_ITERS: usize = 400;

/// Estimated Gagliardo-Nirenberg constant for one exponent.
///
/// `observed_sup` is the largest quotient reached by the ascent, a certified
/// lower bound on the optimal constant; `c` adds 5% head-room and is the
/// working constant.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GnEstimate {
    pub q: f64,
    pub c: f64,
    pub observed_sup: f64,
}

impl GnEstimate {
    pub fn constants(&self) -> GnConstants {
        GnConstants::single(self.q, self.c, Provenance::Estimated)
            .expect("estimate produced a valid constant")
    }
}

/// Maximize the quotient `W(u) = |u|_q^q / (|u|_2^{(1-beta)q} ||u||_0^{q beta})`
/// over admissible fields by preconditioned ascent from `>= 8` random starts
/// plus the deterministic seeds. Deterministic in `opts.seed`.
pub fn estimate_gn_constant(
    grid: &Grid,
    q: f64,
    opts: &SolveOptions,
) -> Result<GnEstimate, OptimizeError> {
    if q == 2.0 {
        // The quotient is identically 1 at the exponent-degenerate endpoint.
        return Ok(GnEstimate {
            q,
            c: 1.0,
            observed_sup: 1.0,
        });
    }
    if !(q > 2.0 && q < 6.0) {
        return Err(OptimizeError::Precondition(format!(
            "estimate_gn_constant requires q in (2, 6), got {q}"
        )));
    }

    let mut best = 0.0f64;
    let mut starts: Vec<Field> = vec![gaussian_derivative_seed(grid), lump_seed(grid)];
    for s in 0..RANDOM_STARTS {
        starts.push(random_band_limited(grid, opts.seed.wrapping_add(s as u64), 0.35));
    }
    for start in starts {
        let w = ascend(start, q)?;
        best = best.max(w);
    }

    Ok(GnEstimate {
        q,
        c: 1.05 * best,
        observed_sup: best,
    })
}

/// Ascent of `ln W` with Armijo backtracking; returns the best quotient seen.
fn ascend(start: Field, q: f64) -> Result<f64, OptimizeError> {
    let beta = beta_unchecked(q);
    let mut u = retract_mass(&start, 1.0)?;
    let mut w = gn_quotient(&u, q)?;
    let mut step = 1.0f64;
    let mut flat = 0u32;

    for _ in 0..MAX_ASCENT_ITERS {
        // d ln W = (q/Bq) f_q(u) - ((1-beta) q / mass2) u - (q beta / A) L u
        // paired against perturbations in L2.
        let mass_sq = u.lp_norm_p(2.0);
        let seminorm_sq = u.x_seminorm_sq();
        let lq = u.lp_norm_p(q);
        let fq = u.map(|t| t.signum() * t.abs().powf(q - 1.0));
        let grad = fq
            .scale(q / lq)
            .add_scaled(-(1.0 - beta) * q / mass_sq, &u)
            .add_scaled(-q * beta / seminorm_sq, &u.apply_x_symbol())
            .project_admissible();
        let gtan = tangent_project(&grad, &u);
        let dir = tangent_project(&gtan.x_metric_precondition(), &u);
        let slope = gtan.l2_inner(&dir);
        if slope <= 0.0 {
            break;
        }

        let mut tau = step;
        let mut accepted = None;
        while tau > 1e-14 {
            let trial = retract_mass(&u.add_scaled(tau, &dir), 1.0)?;
            let wt = gn_quotient(&trial, q)?;
            if wt.ln() >= w.ln() + 1e-4 * tau * slope {
                accepted = Some((trial, wt, tau));
                break;
            }
            tau *= 0.5;
        }
        match accepted {
            Some((trial, wt, tau)) => {
                let gain = (wt - w) / w;
                u = trial;
                w = wt;
                step = (2.0 * tau).min(1e3);
                if gain < 1e-10 {
                    flat += 1;
                    if flat >= 5 {
                        break;
                    }
                } else {
                    flat = 0;
                }
            }
            None => break,
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_exponent_is_exactly_one() {
        let g = Grid::new(32, 32, 20.0, 20.0).unwrap();
        let e = estimate_gn_constant(&g, 2.0, &SolveOptions::default()).unwrap();
        assert_eq!(e.c, 1.0);
        assert_eq!(e.observed_sup, 1.0);
    }

    #[test]
    fn domain_is_checked() {
        let g = Grid::new(32, 32, 20.0, 20.0).unwrap();
        assert!(estimate_gn_constant(&g, 1.9, &SolveOptions::default()).is_err());
        assert!(estimate_gn_constant(&g, 6.0, &SolveOptions::default()).is_err());
    }

    #[test]
    fn estimate_dominates_random_fields() {
        let g = Grid::new(48, 48, 40.0, 40.0).unwrap();
        let e = estimate_gn_constant(&g, 3.0, &SolveOptions::default()).unwrap();
        assert!(e.c > e.observed_sup);
        for s in 0..30 {
            let f = random_band_limited(&g, 10_000 + s, 0.5);
            let w = gn_quotient(&f, 3.0).unwrap();
            assert!(w <= e.c, "random field beats the estimate: {w} > {}", e.c);
        }
    }

    #[test]
    fn estimate_is_deterministic_in_seed() {
        let g = Grid::new(32, 32, 20.0, 20.0).unwrap();
        let a = estimate_gn_constant(&g, 3.5, &SolveOptions::default()).unwrap();
        let b = estimate_gn_constant(&g, 3.5, &SolveOptions::default()).unwrap();
        assert_eq!(a.c.to_bits(), b.c.to_bits());
    }
}

//! ε calibration driver: probe corpus, grid and the persisted params file.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Integer, Rational};

use super::config::{derive_seed, MatchSetup};
use crate::diophantine::{calibrate_epsilon, CalibrationReport, DiophantineError, Probe, RatPoint};
use crate::geometry::{Ball, Point2};
use crate::scalar::{Rounding, Scalar};

/// Canonical points in `[0,1)²` with `q <= q_max`, by `(q, p, r)`.
pub fn low_height_points(q_max: u64) -> Vec<RatPoint> {
    let mut out = Vec::new();
    for q in 1..=q_max {
        for p in 0..q as i64 {
            for r in 0..q as i64 {
                let pt = RatPoint::new(p, r, q);
                if pt.is_canonical() {
                    out.push(pt);
                }
            }
        }
    }
    out
}

/// `R^{-m} ℓ/2` rounded up.
fn probe_radius(setup: &MatchSetup, m: u32) -> Scalar {
    let half_ell = setup.params.ell().to_rational() / 2u32;
    let scale = Rational::from(Integer::from(setup.r_base).pow(m));
    Scalar::from_rational(&(half_ell / scale), setup.precision, Rounding::Up)
}

/// Random probes in the unit square plus probes centered at every
/// low-height point for each `(m, k)`.
pub fn build_corpus(setup: &MatchSetup) -> Vec<Probe> {
    let cal = &setup.config.calibration;
    let prec = setup.precision;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cal.seed, "calibration"));
    let mut out = Vec::new();
    for _ in 0..cal.probes {
        let (x, y) = (rng.gen::<f64>(), rng.gen::<f64>());
        let m = rng.gen_range(0..=cal.m_max);
        let k = rng.gen_range(1..=cal.k_max.max(1));
        let ball = Ball::new(Point2::from_f64(x, y, prec), probe_radius(setup, m)).expect("positive radius");
        out.push(Probe { ball, m, k });
    }
    for pt in low_height_points(cal.probe_q) {
        let c = Point2::new(
            Scalar::from_rational(&pt.x(), prec, Rounding::Nearest),
            Scalar::from_rational(&pt.y(), prec, Rounding::Nearest),
        );
        for m in 0..=cal.m_max {
            for k in 1..=cal.k_max.max(1) {
                let ball = Ball::new(c.clone(), probe_radius(setup, m)).expect("positive radius");
                out.push(Probe { ball, m, k });
            }
        }
    }
    out
}

/// `2^-e` for `e = exp_lo..=exp_hi`, largest first.
pub fn grid(setup: &MatchSetup) -> Vec<Scalar> {
    let cal = &setup.config.calibration;
    (cal.exp_lo..=cal.exp_hi)
        .map(|e| Scalar::from_rational(&Rational::from((1, Integer::from(1) << e)), 64, Rounding::Nearest))
        .collect()
}

pub fn run_calibration(setup: &MatchSetup) -> Result<CalibrationReport, DiophantineError> {
    calibrate_epsilon(&build_corpus(setup), &setup.params, &grid(setup))
}

/// Params-file snippet that pins the calibrated ε for reuse.
pub fn params_snippet(report: &CalibrationReport) -> String {
    format!(
        "# calibrated epsilon\n[params]\nepsilon = \"{}\"\n",
        exact_text(&report.epsilon)
    )
}

/// Exact `a/b` text for a binary scalar.
pub fn exact_text(s: &Scalar) -> String {
    let q = s.to_rational();
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// The violating class with the most rectangles.
pub fn densest_violation(report: &CalibrationReport) -> Option<&crate::diophantine::ClassViolation> {
    report.violations.iter().max_by_key(|v| v.rects)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_height_count() {
        assert_eq!(low_height_points(5).len(), 48);
        assert_eq!(low_height_points(1), vec![RatPoint::new(0, 0, 1)]);
    }
}

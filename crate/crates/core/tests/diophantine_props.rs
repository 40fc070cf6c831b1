//! Property tests for the danger-set enumeration and badness functionals.

use hawk_core::diophantine::{
    badness_score, certify_ball, delta_rect, enumerate_dangerous, generation, Params, RatPoint,
};
use hawk_core::geometry::{ball_meets_rect, Ball};
use hawk_core::scalar::{Cert3, Scalar};
use proptest::prelude::*;

const P: u32 = 256;

fn sc(v: &str) -> Scalar {
    Scalar::parse(v, P).unwrap()
}

fn params(s: &str, eps: &str, q_cap: u64) -> Params {
    Params::new(sc(s), sc(eps), sc("2"), sc("10"), q_cap, P).unwrap()
}

fn weight() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["1/2", "1/3", "2/3", "1/4"])
}

fn ball() -> impl Strategy<Value = Ball> {
    (0.0..1.0f64, 0.0..1.0f64, 1e-4..0.05f64).prop_map(|(x, y, r)| Ball::from_f64(x, y, r, P).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_sorted_canonical_dangerous(s in weight(), b in ball(), q_hi in 1u64..25) {
        let prm = params(s, "0.05", 50);
        let found = enumerate_dangerous(&b, 1, q_hi, &prm).unwrap();
        prop_assert!(found.windows(2).all(|w| (w[0].q, w[0].p, w[0].r) < (w[1].q, w[1].p, w[1].r)));
        for pt in &found {
            prop_assert!(pt.is_canonical());
            prop_assert!(pt.q <= q_hi);
            prop_assert_ne!(ball_meets_rect(&b, &delta_rect(pt, &prm), P), Cert3::No);
        }
    }

    #[test]
    fn enumeration_monotone_in_range(s in weight(), b in ball(), q1 in 1u64..15, extra in 0u64..15) {
        let prm = params(s, "0.05", 50);
        let small = enumerate_dangerous(&b, 1, q1, &prm).unwrap();
        let big = enumerate_dangerous(&b, 1, q1 + extra, &prm).unwrap();
        prop_assert!(small.iter().all(|p| big.contains(p)));
        let mid = enumerate_dangerous(&b, q1, q1 + extra, &prm).unwrap();
        prop_assert!(mid.iter().all(|p| p.q >= q1 && big.contains(p)));
    }

    #[test]
    fn enumeration_monotone_in_ball(s in weight(), b in ball(), grow in 1.0..4.0f64) {
        let prm = params(s, "0.05", 50);
        let big = b.with_radius(Scalar::from_f64(b.radius().to_f64() * grow, 53)).unwrap();
        let inner = enumerate_dangerous(&b, 1, 20, &prm).unwrap();
        let outer = enumerate_dangerous(&big, 1, 20, &prm).unwrap();
        prop_assert!(inner.iter().all(|p| outer.contains(p)));
    }

    #[test]
    fn certified_ball_meets_nothing(s in weight(), b in ball(), q in 1u64..30) {
        let prm = params(s, "0.01", 50);
        let rep = certify_ball(&b, q, &prm);
        let found = enumerate_dangerous(&b, 1, q, &prm).unwrap();
        prop_assert_eq!(rep.pass, found.is_empty());
        if let Some(w) = rep.witness {
            prop_assert!(w.q <= q);
            prop_assert_ne!(ball_meets_rect(&b, &delta_rect(&w, &prm), P), Cert3::No);
        }
    }

    #[test]
    fn badness_nonincreasing_in_q(s in weight(), x in 0.0..1.0f64, y in 0.0..1.0f64, q in 1u64..40, extra in 1u64..40) {
        let prm = params(s, "0.1", 100);
        let (x, y) = (Scalar::from_f64(x, 53), Scalar::from_f64(y, 53));
        let a = badness_score(&x, &y, q, &prm);
        let b = badness_score(&x, &y, q + extra, &prm);
        prop_assert!(b.score.hi() <= a.score.hi());
        prop_assert!(b.score.lo() <= a.score.lo());
        prop_assert!(a.minimizer >= 1 && a.minimizer <= q);
        prop_assert!(b.minimizer >= 1 && b.minimizer <= q + extra);
    }

    #[test]
    fn generation_matches_band(s in weight(), q in 1u64..200) {
        let prm = params(s, "0.1", 200);
        let n = generation(&RatPoint::new(0, 0, q), &prm);
        let (hx, hy) = prm.halfwidths(q);
        let h = hx.max(&hy);
        prop_assert!(n >= 1);
        if n > 1 {
            prop_assert!(h.hi() <= prm.band_edge(n).lo());
        }
        prop_assert!(h.lo() > prm.band_edge(n + 1).hi());
    }

    #[test]
    fn canonical_is_idempotent(p in -50i64..50, r in -50i64..50, q in 1u64..50, k in 1i64..6) {
        let base = RatPoint::new(p * k, r * k, q * k as u64).canonical();
        prop_assert!(base.is_canonical());
        prop_assert_eq!(base.canonical(), base);
        prop_assert_eq!(base, RatPoint::new(p, r, q).canonical());
    }
}

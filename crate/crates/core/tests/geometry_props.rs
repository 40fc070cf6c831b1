//! Property tests for the certified geometry kernel.

use hawk_core::geometry::{
    ball_in_ball, ball_in_slab, ball_meets_rect, ball_meets_slab, legal_ball_avoiding_slab, min_width_slab,
    rect_in_slab, Ball, Line, Rect, Slab,
};
use hawk_core::scalar::{Cert3, Scalar};
use proptest::prelude::*;

const LOW: u32 = 64;
const HIGH: u32 = 256;

fn sc(v: f64) -> Scalar {
    Scalar::from_f64(v, 53)
}

fn ball() -> impl Strategy<Value = Ball> {
    (-10.0..10.0f64, -10.0..10.0f64, 0.001..5.0f64).prop_map(|(x, y, r)| Ball::from_f64(x, y, r, HIGH).unwrap())
}

fn slab() -> impl Strategy<Value = Slab> {
    (0.0..std::f64::consts::PI, -10.0..10.0f64, 0.001..3.0f64).prop_map(|(th, off, hw)| {
        let line = Line::from_direction(&sc(th.cos()), &sc(th.sin()), sc(off), HIGH).unwrap();
        Slab::new(line, sc(hw)).unwrap()
    })
}

fn rect() -> impl Strategy<Value = Rect> {
    (-5.0..5.0f64, -5.0..5.0f64, 0.001..2.0f64, 0.001..2.0f64)
        .prop_map(|(x, y, a, b)| Rect::from_f64(x, y, a, b, HIGH).unwrap())
}

/// A decided answer at low precision is never contradicted at 4× precision.
fn consistent(low: Cert3, high: Cert3) -> bool {
    low == Cert3::Unknown || high == Cert3::Unknown || low == high
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn predicates_sound_across_precision(b in ball(), c in ball(), s in slab(), r in rect()) {
        prop_assert!(consistent(ball_meets_slab(&b, &s, LOW), ball_meets_slab(&b, &s, HIGH)));
        prop_assert!(consistent(ball_in_slab(&b, &s, LOW), ball_in_slab(&b, &s, HIGH)));
        prop_assert!(consistent(ball_in_ball(&b, &c, LOW), ball_in_ball(&b, &c, HIGH)));
        prop_assert!(consistent(ball_meets_rect(&b, &r, LOW), ball_meets_rect(&b, &r, HIGH)));
        prop_assert!(consistent(rect_in_slab(&r, &s, LOW), rect_in_slab(&r, &s, HIGH)));
    }

    #[test]
    fn containment_implies_meeting(b in ball(), s in slab()) {
        if ball_in_slab(&b, &s, HIGH) == Cert3::Yes {
            prop_assert_eq!(ball_meets_slab(&b, &s, HIGH), Cert3::Yes);
        }
    }

    #[test]
    fn meeting_is_monotone_in_radius(b in ball(), s in slab(), grow in 1.0..3.0f64) {
        let big = b.with_radius(sc(b.radius().to_f64() * grow)).unwrap();
        if ball_meets_slab(&b, &s, HIGH) == Cert3::Yes {
            prop_assert_ne!(ball_meets_slab(&big, &s, HIGH), Cert3::No);
        }
        if ball_in_slab(&big, &s, HIGH) == Cert3::Yes {
            prop_assert_ne!(ball_in_slab(&b, &s, HIGH), Cert3::No);
        }
    }

    #[test]
    fn line_canonical_under_sign_flip(th in 0.0..std::f64::consts::TAU, off in -5.0..5.0f64) {
        let (a, b) = (th.cos(), th.sin());
        let l1 = Line::from_direction(&sc(a), &sc(b), sc(off), HIGH).unwrap();
        let l2 = Line::from_direction(&sc(-a), &sc(-b), sc(-off), HIGH).unwrap();
        prop_assert_eq!(l1, l2);
    }

    #[test]
    fn avoiding_ball_is_legal(
        b in ball(),
        th in 0.0..std::f64::consts::PI,
        at in -1.5..1.5f64,
        frac in 0.01..1.0f64,
        beta in 0.01..0.33f64,
    ) {
        // An absolute-game slab: halfwidth at most beta*r, placed anywhere near B.
        let (cx, cy) = b.center().to_f64();
        let r = b.radius().to_f64();
        let (a, c) = (th.cos(), th.sin());
        let line = Line::from_direction(&sc(a), &sc(c), sc(a * cx + c * cy + at * r), HIGH).unwrap();
        let s = Slab::new(line, sc(frac * beta * r)).unwrap();
        let beta = sc(beta);
        let next = legal_ball_avoiding_slab(&b, &s, &beta, HIGH).unwrap();
        prop_assert_eq!(ball_in_ball(&next, &b, HIGH), Cert3::Yes);
        prop_assert_eq!(ball_meets_slab(&next, &s, HIGH), Cert3::No);
        prop_assert!(next.radius().to_rational() >= beta.to_rational() * b.radius().to_rational());
    }

    #[test]
    fn fitted_slab_contains_rects(rs in prop::collection::vec(rect(), 1..6)) {
        let fit = min_width_slab(&rs, HIGH).unwrap();
        for r in &rs {
            prop_assert_eq!(rect_in_slab(r, &fit, HIGH), Cert3::Yes);
        }
        // No wider than the narrower half-extent of the bounding box.
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for r in &rs {
            let (cx, cy) = r.center().to_f64();
            let (a, b) = (r.halfwidth_x().to_f64(), r.halfwidth_y().to_f64());
            x0 = x0.min(cx - a);
            x1 = x1.max(cx + a);
            y0 = y0.min(cy - b);
            y1 = y1.max(cy + b);
        }
        let bbox = ((x1 - x0) / 2.0).min((y1 - y0) / 2.0);
        prop_assert!(fit.halfwidth().to_f64() <= bbox * (1.0 + 1e-12));
    }
}

//! Property tests for the rule engine and the Bob adversaries.

use hawk_core::diophantine::{Params, RatPoint};
use hawk_core::game::{move_from_record, AbsoluteRules, AliceMove, Horizon, Move, PotentialRules, Rules, Transcript};
use hawk_core::geometry::{Ball, Line, Slab};
use hawk_core::scalar::Scalar;
use hawk_core::strategies::{BobGreedy, BobRandom, BobStrategy, BobTarget};
use proptest::prelude::*;

const P: u32 = 256;

fn sc(v: &str) -> Scalar {
    Scalar::parse(v, P).unwrap()
}

fn horizon(n_max: usize) -> Horizon {
    Horizon {
        r_stop: sc("1e-30"),
        n_max,
    }
}

fn b0() -> Ball {
    Ball::new(hawk_core::geometry::Point2::new(sc("0.3"), sc("0.7")), sc("1/1024")).unwrap()
}

fn absolute(beta: &str) -> Transcript {
    Transcript::new(
        Rules::Absolute(AbsoluteRules::new(sc(beta)).unwrap()),
        b0(),
        horizon(40),
        P,
    )
}

fn potential(beta: &str, c: &str) -> Transcript {
    let rules = PotentialRules::new(sc(beta), sc(c)).unwrap();
    Transcript::new(Rules::Potential(rules), b0(), horizon(40), P)
}

/// A legal absolute-game slab through `B_n` at the given angle, offset and width fraction.
fn slab_for(t: &Transcript, th: f64, at: f64, frac: f64) -> Slab {
    let b = t.current_ball();
    let (cx, cy) = b.center().to_f64();
    let r = b.radius().to_f64();
    let (a, c) = (th.cos(), th.sin());
    let d = |v: f64| Scalar::from_f64(v, 53);
    let line = Line::from_direction(&d(a), &d(c), d(a * cx + c * cy + at * r), P).unwrap();
    let hw = t.rules().beta().to_f64() * r * frac;
    Slab::new(line, d(hw)).unwrap()
}

fn alice_move(t: &Transcript, th: f64, at: f64, frac: f64) -> AliceMove {
    match t.rules() {
        Rules::Absolute(_) => AliceMove::Absolute(slab_for(t, th, at, frac)),
        // Two slabs of halfwidth (frac/2)·β·r fit every budget with c >= 1.
        Rules::Potential(_) => AliceMove::Potential(vec![
            slab_for(t, th, at, frac / 2.0),
            slab_for(t, th + 1.0, -at, frac / 2.0),
        ]),
    }
}

fn games() -> impl Strategy<Value = Transcript> {
    prop_oneof![
        prop::sample::select(vec!["0.05", "0.1", "0.2", "0.3"]).prop_map(absolute),
        (
            prop::sample::select(vec!["0.05", "0.2"]),
            prop::sample::select(vec!["1", "2"])
        )
            .prop_map(|(b, c)| potential(b, c)),
    ]
}

fn angles() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((0.0..std::f64::consts::PI, -1.2..1.2f64, 0.05..1.0f64), 1..12)
}

fn bob(kind: u8, seed: u64) -> Box<dyn BobStrategy> {
    match kind {
        0 => Box::new(BobRandom::new(seed)),
        1 => {
            let prm = Params::new(sc("1/2"), sc("1e-3"), sc("2e-8"), sc("301"), 60, P).unwrap();
            Box::new(BobGreedy::new(seed, prm))
        }
        _ => Box::new(BobTarget::new(RatPoint::new(1, 2, 3))),
    }
}

fn play(mut t: Transcript, kind: u8, seed: u64, moves: &[(f64, f64, f64)]) -> Transcript {
    let mut b = bob(kind, seed);
    for &(th, at, frac) in moves {
        if t.is_finished() {
            break;
        }
        t.submit_alice(alice_move(&t, th, at, frac)).unwrap();
        let ball = b.propose(&t).unwrap();
        t.submit_bob(ball).unwrap();
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bob_strategies_stay_legal(t in games(), kind in 0u8..3, seed in any::<u64>(), moves in angles()) {
        let t = play(t, kind, seed, &moves);
        prop_assert_eq!(t.stage(), moves.len().min(t.horizon().n_max));
    }

    #[test]
    fn radii_shrink_geometrically(t in games(), seed in any::<u64>(), moves in angles()) {
        let t = play(t, 0, seed, &moves);
        let beta = t.rules().beta().to_rational();
        for w in t.balls().windows(2) {
            let (r0, r1) = (w[0].radius().to_rational(), w[1].radius().to_rational());
            prop_assert!(r1 <= r0);
            prop_assert!(r1 >= beta.clone() * r0);
        }
    }

    #[test]
    fn records_round_trip(t in games(), kind in 0u8..3, seed in any::<u64>(), moves in angles()) {
        let t = play(t, kind, seed, &moves);
        let records = t.records();
        let mut again = Transcript::new(t.rules().clone(), t.balls()[0].clone(), t.horizon().clone(), P);
        for r in &records[1..] {
            match move_from_record(r, t.rules()).unwrap() {
                Move::Alice(a) => again.submit_alice(a).unwrap(),
                Move::Bob(b) => again.submit_bob(b).unwrap(),
            }
        }
        prop_assert_eq!(again.digest(), t.digest());
        prop_assert_eq!(&again, &t);
    }

    #[test]
    fn rejection_leaves_state_unchanged(t in games(), seed in any::<u64>(), moves in angles(), scale in 1.01..3.0f64) {
        let mut t = play(t, 0, seed, &moves);
        prop_assume!(!t.is_finished());
        let before = t.clone();
        // Alice over budget.
        let (th, at, frac) = moves[0];
        let fat = match alice_move(&t, th, at, frac) {
            AliceMove::Absolute(s) => {
                AliceMove::Absolute(s.rethicken(Scalar::from_f64(s.halfwidth().to_f64() * scale / frac, 53)).unwrap())
            }
            AliceMove::Potential(v) => AliceMove::Potential(
                v.iter()
                    .map(|s| s.rethicken(Scalar::from_f64(s.halfwidth().to_f64() * 2.0 * scale / frac, 53)).unwrap())
                    .collect(),
            ),
        };
        prop_assert!(t.submit_alice(fat).is_err());
        prop_assert_eq!(&t, &before);
        // Bob out of turn, then Bob with a ball too small.
        prop_assert!(t.submit_bob(t.current_ball().clone()).is_err());
        prop_assert_eq!(&t, &before);
        t.submit_alice(alice_move(&t, th, at, frac)).unwrap();
        let before = t.clone();
        let b = t.current_ball();
        let tiny = b.with_radius(Scalar::from_f64(b.radius().to_f64() * t.rules().beta().to_f64() / scale, 53)).unwrap();
        prop_assert!(t.submit_bob(tiny).is_err());
        prop_assert_eq!(&t, &before);
    }
}

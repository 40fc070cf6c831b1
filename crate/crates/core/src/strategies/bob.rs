//! Bob adversaries.

use std::io::BufRead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BobStrategy, StrategyError};
use crate::diophantine::{delta_rect, enumerate_dangerous, Params, RatPoint};
use crate::game::{AliceMove, Move, Rules, Transcript};
use crate::geometry::{ball_meets_rect, ball_meets_slab, legal_ball_avoiding_slab, Ball, Point2, Slab};
use crate::scalar::{Cert3, Rounding, Scalar};

/// The slab Bob must dodge in the absolute game, if any.
fn pending_slab(t: &Transcript) -> Option<&Slab> {
    match (t.rules(), t.moves().last().map(|m| &m.mv)) {
        (Rules::Absolute(_), Some(Move::Alice(AliceMove::Absolute(s)))) => Some(s),
        _ => None,
    }
}

fn avoids(ball: &Ball, slab: Option<&Slab>, prec: u32) -> bool {
    slab.is_none_or(|s| ball_meets_slab(ball, s, prec) == Cert3::No)
}

/// Smallest radius Bob may use: `β r_n` rounded up, nudged by `2^-30`.
fn min_radius(t: &Transcript) -> Scalar {
    let prec = t.precision();
    let r = t.current_ball().radius();
    let nudge = Scalar::from_f64(1.0 + 2f64.powi(-30), 64);
    t.rules()
        .beta()
        .mul(r, prec, Rounding::Up)
        .mul(&nudge, prec, Rounding::Up)
}

/// Ball of radius `ratio·r_n` whose center is `c_n + (r_n − r')·(1 − 2^-20)·u`
/// for a vector `u` of length at most 1.
fn offset_ball(t: &Transcript, radius: &Scalar, ux: f64, uy: f64) -> Result<Ball, StrategyError> {
    let prec = t.precision();
    let b = t.current_ball();
    let room = b.radius().sub(radius, prec, Rounding::Down);
    let room = room.mul(&Scalar::from_f64(1.0 - 2f64.powi(-20), 64), prec, Rounding::Down);
    let dx = room.mul(&Scalar::from_f64(ux, 53), prec, Rounding::Nearest);
    let dy = room.mul(&Scalar::from_f64(uy, 53), prec, Rounding::Nearest);
    let c = Point2::new(
        b.center().x.add(&dx, prec, Rounding::Nearest),
        b.center().y.add(&dy, prec, Rounding::Nearest),
    );
    Ok(Ball::new(c, radius.clone())?)
}

fn fallback(t: &Transcript, slab: &Slab) -> Result<Ball, StrategyError> {
    let beta = t
        .rules()
        .beta()
        .mul(&Scalar::from_f64(1.0 + 2f64.powi(-30), 64), t.precision(), Rounding::Up);
    Ok(legal_ball_avoiding_slab(t.current_ball(), slab, &beta, t.precision())?)
}

/// Uniform random center with radius ratio uniform in `[β, 0.9]`.
pub struct BobRandom {
    rng: ChaCha8Rng,
}

impl BobRandom {
    pub fn new(seed: u64) -> Self {
        BobRandom {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn sample(&mut self, t: &Transcript) -> Result<Ball, StrategyError> {
        let prec = t.precision();
        let lo = min_radius(t).to_f64() / t.current_ball().radius().to_f64();
        let hi = 0.9f64.max(lo);
        let ratio = self.rng.gen_range(lo..=hi);
        let r = t.current_ball().radius();
        let radius = r.mul(&Scalar::from_f64(ratio, 53), prec, Rounding::Up);
        let radius = if radius.to_rational() < min_radius(t).to_rational() {
            min_radius(t)
        } else {
            radius
        };
        let rho = self.rng.gen::<f64>().sqrt();
        let theta = self.rng.gen::<f64>() * std::f64::consts::TAU;
        offset_ball(t, &radius, rho * theta.cos(), rho * theta.sin())
    }
}

impl BobStrategy for BobRandom {
    fn name(&self) -> &'static str {
        "random"
    }

    fn propose(&mut self, t: &Transcript) -> Result<Ball, StrategyError> {
        let slab = pending_slab(t);
        for _ in 0..32 {
            let b = self.sample(t)?;
            if avoids(&b, slab, t.precision()) {
                return Ok(b);
            }
        }
        fallback(t, slab.expect("rejection only with a slab"))
    }
}

/// Pursues a rational point, shrinking by exactly the minimum ratio.
pub struct BobTarget {
    target: RatPoint,
}

impl BobTarget {
    pub fn new(target: RatPoint) -> Self {
        BobTarget { target }
    }

    pub fn target(&self) -> RatPoint {
        self.target
    }
}

impl BobStrategy for BobTarget {
    fn name(&self) -> &'static str {
        "target"
    }

    fn propose(&mut self, t: &Transcript) -> Result<Ball, StrategyError> {
        let prec = t.precision();
        let b = t.current_ball();
        let radius = min_radius(t);
        let px = Scalar::from_rational(&self.target.x(), prec, Rounding::Nearest);
        let py = Scalar::from_rational(&self.target.y(), prec, Rounding::Nearest);
        let dx = px.sub(&b.center().x, prec, Rounding::Nearest);
        let dy = py.sub(&b.center().y, prec, Rounding::Nearest);
        let room = b.radius().sub(&radius, prec, Rounding::Down).to_f64() * (1.0 - 2f64.powi(-20));
        let (fx, fy) = (dx.to_f64(), dy.to_f64());
        let dist = fx.hypot(fy);
        let ball = if dist <= room {
            Ball::new(Point2::new(px, py), radius.clone())?
        } else {
            offset_ball(t, &radius, fx / dist, fy / dist)?
        };
        match pending_slab(t) {
            Some(s) if !avoids(&ball, Some(s), prec) => fallback(t, s),
            _ => Ok(ball),
        }
    }
}

/// Moves into the sub-ball meeting the most danger rectangles.
pub struct BobGreedy {
    rng: ChaCha8Rng,
    params: Params,
}

impl BobGreedy {
    pub fn new(seed: u64, params: Params) -> Self {
        BobGreedy {
            rng: ChaCha8Rng::seed_from_u64(seed),
            params,
        }
    }
}

impl BobStrategy for BobGreedy {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn propose(&mut self, t: &Transcript) -> Result<Ball, StrategyError> {
        let prec = t.precision();
        let r = t.current_ball().radius();
        let third = r.mul(&Scalar::from_ratio(1, 3, 64, Rounding::Up), prec, Rounding::Up);
        let radius = if third.to_rational() < min_radius(t).to_rational() {
            min_radius(t)
        } else {
            third
        };
        let danger = enumerate_dangerous(t.current_ball(), 1, self.params.q_cap(), &self.params)?;
        let rects: Vec<_> = danger.iter().map(|p| delta_rect(p, &self.params)).collect();
        let slab = pending_slab(t);
        let diag = std::f64::consts::FRAC_1_SQRT_2;
        let mut best: Vec<Ball> = Vec::new();
        let mut best_score = -1i64;
        for i in -1..=1 {
            for j in -1..=1 {
                let (ux, uy) = if i != 0 && j != 0 {
                    (i as f64 * diag, j as f64 * diag)
                } else {
                    (i as f64, j as f64)
                };
                let cand = offset_ball(t, &radius, ux, uy)?;
                if !avoids(&cand, slab, prec) {
                    continue;
                }
                let score = rects
                    .iter()
                    .filter(|rc| ball_meets_rect(&cand, rc, prec) != Cert3::No)
                    .count() as i64;
                if score > best_score {
                    best_score = score;
                    best.clear();
                }
                if score == best_score {
                    best.push(cand);
                }
            }
        }
        if best.is_empty() {
            return fallback(t, slab.expect("all candidates rejected only with a slab"));
        }
        let pick = self.rng.gen_range(0..best.len());
        Ok(best.swap_remove(pick))
    }
}

/// Replays balls from a line-oriented source: `x y r` per line, decimals
/// or `a/b` rationals; blank lines and `#` comments are skipped.
pub struct BobScripted {
    lines: Box<dyn BufRead + Send>,
    prompt: bool,
}

impl BobScripted {
    pub fn new(lines: Box<dyn BufRead + Send>) -> Self {
        BobScripted { lines, prompt: false }
    }

    /// Prints a prompt on stderr before each read.
    pub fn interactive(lines: Box<dyn BufRead + Send>) -> Self {
        BobScripted { lines, prompt: true }
    }
}

impl BobStrategy for BobScripted {
    fn name(&self) -> &'static str {
        "scripted"
    }

    fn propose(&mut self, t: &Transcript) -> Result<Ball, StrategyError> {
        let prec = t.precision();
        loop {
            if self.prompt {
                let b = t.current_ball();
                let (x, y) = b.center().to_f64();
                eprint!("B_{} = ({x}, {y}; {:e}) > ", t.stage(), b.radius().to_f64());
            }
            let mut line = String::new();
            let n = self
                .lines
                .read_line(&mut line)
                .map_err(|e| StrategyError::Script(e.to_string()))?;
            if n == 0 {
                return Err(StrategyError::Script("script exhausted".into()));
            }
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(StrategyError::Script(format!("expected `x y r`, got `{line}`")));
            }
            let parse = |s: &str| Scalar::parse(s, prec).map_err(|e| StrategyError::Script(e.to_string()));
            let c = Point2::new(parse(parts[0])?, parse(parts[1])?);
            return Ok(Ball::new(c, parse(parts[2])?)?);
        }
    }
}

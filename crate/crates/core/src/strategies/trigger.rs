//! The trigger strategy for the potential game.
//!
//! Trigger `m` fires at the first move `j` with `r_j <= R^{-m} r_0 / 2`. If
//! `B̃_j = B(x_j, R^{-m} r_0)` is clear of every danger rectangle of
//! generation `<= m`, Alice covers each generation-`(m+k)` class meeting
//! `B̃_j` by one slab of halfwidth `3 R^{-(m+k)} r_0`; otherwise she passes.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::{AliceStrategy, Event, StrategyError};
use crate::diophantine::{dangerous_by_class, delta_rect, first_blocker, lemma_bound, Params};
use crate::game::{AliceMove, Transcript};
use crate::geometry::{ball_in_slab, min_width_slab, Ball, Rect, Slab};
use crate::scalar::{decide, Cert3, Interval, Rounding, Scalar};

fn chain_exact(beta: &Rational, c: u32, r: u64) -> bool {
    // 2·3^c / (R^c − 1) <= (β²/2)^c
    let rc = Integer::from(r).pow(c);
    let lhs = Rational::from((Integer::from(2) * Integer::from(3).pow(c), rc - 1u32));
    let half_b2 = Rational::from(beta * beta) / 2u32;
    let rhs = Rational::from((&half_b2).pow(c as i32));
    lhs <= rhs
}

fn chain_interval(beta: &Rational, c: &Rational, r: u64, prec: u32) -> Cert3 {
    let cs = Scalar::from_rational(c, prec, Rounding::Nearest);
    let x = Interval::from_i64(r as i64, 64).pow(&cs, prec);
    let lhs = Interval::from_i64(3, 64)
        .pow(&cs, prec)
        .scale_i64(2, prec)
        .div(&x.sub(&Interval::from_i64(1, 64), prec), prec);
    let b = Interval::from_rational(beta, prec);
    let rhs = b.square(prec).div(&Interval::from_i64(2, 64), prec).pow(&cs, prec);
    lhs.le(&rhs)
}

/// Both clauses of the trigger legality chain at ratio `R`: `R >= 1/β` and
/// `2·3^c·R^{-c}/(1 − R^{-c}) <= (β²/2)^c`.
pub fn budget_chain_holds(beta: &Rational, c: &Rational, r: u64) -> bool {
    if r < 2 || Rational::from(beta * r) < 1 {
        return false;
    }
    if c.is_integer() && *c > 0 && *c <= 64 {
        return chain_exact(beta, c.numer().to_u32().expect("small integer"), r);
    }
    decide(256, |p| chain_interval(beta, c, r, p)) == Ok(Cert3::Yes)
}

/// Smallest integer `R` satisfying [`budget_chain_holds`].
pub fn choose_r(beta: &Rational, c: &Rational) -> u64 {
    assert!(*beta > 0 && *c > 0, "β and c must be positive");
    let start = Rational::from(beta.recip_ref())
        .ceil()
        .numer()
        .to_u64()
        .expect("1/β fits u64")
        .max(2);
    let mut hi = start;
    while !budget_chain_holds(beta, c, hi) {
        hi = hi.checked_mul(2).expect("R overflow");
    }
    let mut lo = start;
    if budget_chain_holds(beta, c, lo) {
        return lo;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if budget_chain_holds(beta, c, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `⌈log_R(r_0 / r_stop)⌉ + 1`.
pub fn default_k_max(r0: &Scalar, r_stop: &Scalar, r: u64) -> u32 {
    let ratio = Float::with_val(128, r0.as_float() / r_stop.as_float());
    let logs = ratio.ln() / Float::with_val(128, r).ln();
    logs.ceil().to_f64().max(0.0) as u32 + 1
}

#[derive(Debug, Clone)]
pub struct TriggerAlice {
    params: Params,
    beta: Scalar,
    c: Scalar,
    r_base: u64,
    r0: Scalar,
    k_max: u32,
    m_next: u32,
    j_of_m: BTreeMap<u32, usize>,
    events: Vec<Event>,
}

impl TriggerAlice {
    /// `params` supplies ε, the weights, `R` and `Q_cap`; its `ℓ` is
    /// replaced by `2 r_0`.
    pub fn new(params: &Params, beta: Scalar, c: Scalar, r0: &Scalar, k_max: u32) -> Result<Self, StrategyError> {
        let r = params.r_base().to_rational();
        let r_base = r
            .is_integer()
            .then(|| r.numer().to_u64())
            .flatten()
            .ok_or_else(|| StrategyError::Invariant("R must be an integer".into()))?;
        if (beta.to_rational() * r_base) < 1 {
            return Err(StrategyError::Invariant("R < 1/β".into()));
        }
        let ell = r0.mul(&Scalar::from_i64(2, 64), r0.precision() + 1, Rounding::Nearest);
        Ok(TriggerAlice {
            params: params.with_ell(ell)?,
            beta,
            c,
            r_base,
            r0: r0.clone(),
            k_max,
            m_next: 0,
            j_of_m: BTreeMap::new(),
            events: Vec::new(),
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    /// `m ↦ j_m` for the triggers fired so far.
    pub fn j_of_m(&self) -> &BTreeMap<u32, usize> {
        &self.j_of_m
    }

    fn threshold_met(&self, r: &Scalar, m: u32) -> bool {
        let rhs = self.r0.to_rational();
        let lhs = r.to_rational() * 2u32 * Rational::from(Integer::from(self.r_base).pow(m));
        lhs <= rhs
    }

    /// `R^{-n} r_0` exactly.
    fn scale(&self, n: u32) -> Rational {
        self.r0.to_rational() / Rational::from(Integer::from(self.r_base).pow(n))
    }

    /// Records `j_m` if the current ball meets the pending threshold.
    pub fn trigger_detect(&mut self, t: &Transcript) -> Result<Option<u32>, StrategyError> {
        let j = t.stage();
        let r = t.current_ball().radius();
        let m = self.m_next;
        if !self.threshold_met(r, m) {
            return Ok(None);
        }
        if self.threshold_met(r, m + 1) {
            return Err(StrategyError::Invariant(format!("two triggers at move {j}: R < 1/β?")));
        }
        if j < 1 {
            return Err(StrategyError::Invariant("j_m >= 1".into()));
        }
        if let Some(&prev) = m.checked_sub(1).and_then(|p| self.j_of_m.get(&p)) {
            if j < prev + 1 {
                return Err(StrategyError::Invariant("j_{m+1} >= j_m + 1".into()));
            }
        }
        self.j_of_m.insert(m, j);
        self.m_next += 1;
        Ok(Some(m))
    }

    fn fire(&mut self, t: &Transcript, m: u32) -> Result<Vec<Slab>, StrategyError> {
        let prec = self.params.precision();
        let j = t.stage();
        let radius = Scalar::from_rational(&self.scale(m), prec, Rounding::Up);
        let tilde = Ball::new(t.current_ball().center().clone(), radius)?;

        if let Some(blocker) = first_blocker(&tilde, m, &self.params) {
            let covered_by = t
                .ledger()
                .entries()
                .iter()
                .position(|e| decide(prec, |p| ball_in_slab(&tilde, &e.slab, p)) == Ok(Cert3::Yes));
            self.events.push(Event::TriggerFired {
                m,
                j,
                in_b_m: false,
                blocker: Some(blocker),
                covered_by,
                slabs: 0,
            });
            return Ok(Vec::new());
        }

        let mut slabs = Vec::new();
        let classes = dangerous_by_class(&tilde, m + 1, m + self.k_max, &self.params);
        for (idx, by_delta) in classes.iter().enumerate() {
            let k = idx as u32 + 1;
            let n = m + k;
            for (d, pts) in by_delta.iter().enumerate() {
                if pts.is_empty() {
                    continue;
                }
                let rects: Vec<Rect> = pts.iter().map(|p| delta_rect(p, &self.params)).collect();
                let fit = min_width_slab(&rects, prec)?;
                let bound = lemma_bound(&self.params, n);
                if fit.halfwidth().interval().le(&bound) != Cert3::Yes {
                    self.events.push(Event::LemmaViolation {
                        m,
                        k,
                        delta: d as u8 + 1,
                        rects: rects.len(),
                        fitted: fit.halfwidth().to_f64(),
                        bound: bound.mid_f64(),
                    });
                }
                let hw = self.scale(n) * 3u32;
                slabs.push(fit.rethicken(Scalar::from_rational(&hw, prec, Rounding::Down))?);
            }
        }

        self.check_budget(t, m)?;
        self.events.push(Event::TriggerFired {
            m,
            j,
            in_b_m: true,
            blocker: None,
            covered_by: None,
            slabs: slabs.len(),
        });
        Ok(slabs)
    }

    /// Certifies the full two-class reservation against `(β r_j)^c`.
    fn check_budget(&mut self, t: &Transcript, m: u32) -> Result<(), StrategyError> {
        let prec = self.params.precision();
        let slot = |n: u32| Interval::from_rational(&(self.scale(n) * 3u32), prec).pow(&self.c, prec);
        let reserved = (1..=self.k_max)
            .fold(Interval::zero(), |acc, k| acc.add(&slot(m + k), prec))
            .scale_i64(2, prec);
        let r_inv = Interval::from_rational(&Rational::from((1, self.r_base)), prec);
        let series = (1..=self.k_max).fold(Interval::zero(), |acc, k| {
            acc.add(&r_inv.powi(k, prec).pow(&self.c, prec), prec)
        });
        let closed_form = slot(m).mul(&series, prec).scale_i64(2, prec);
        let limit = self
            .beta
            .interval()
            .mul(&t.current_ball().radius().interval(), prec)
            .pow(&self.c, prec);
        let certified = reserved.le(&limit) == Cert3::Yes;
        self.events.push(Event::Budget {
            m,
            reserved: reserved.mid_f64(),
            closed_form: closed_form.mid_f64(),
            limit: limit.mid_f64(),
            certified,
        });
        if !certified {
            return Err(StrategyError::Invariant(format!(
                "trigger {m} budget exceeds (β r_j)^c"
            )));
        }
        Ok(())
    }
}

impl AliceStrategy for TriggerAlice {
    fn name(&self) -> &'static str {
        "trigger"
    }

    fn propose(&mut self, t: &Transcript) -> Result<AliceMove, StrategyError> {
        let slabs = match self.trigger_detect(t)? {
            Some(m) => self.fire(t, m)?,
            None => Vec::new(),
        };
        Ok(AliceMove::Potential(slabs))
    }

    fn take_events(&mut self) -> Vec<Event> {
        std::mem::take(&mut self.events)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn choose_r_anchors() {
        assert_eq!(choose_r(&q(1, 10), &q(1, 1)), 1201);
        assert_eq!(choose_r(&q(1, 5), &q(1, 1)), 301);
        assert_eq!(choose_r(&q(1, 20), &q(1, 1)), 4801);
        for (b, c) in [((3, 10), (1, 2)), ((1, 20), (2, 1)), ((1, 10), (1, 2))] {
            let (b, c) = (q(b.0, b.1), q(c.0, c.1));
            let r = choose_r(&b, &c);
            assert!(budget_chain_holds(&b, &c, r));
            assert!(!budget_chain_holds(&b, &c, r - 1));
        }
    }

    #[test]
    fn k_max_formula() {
        let r0 = Scalar::from_i64(1, 64);
        let stop = Scalar::parse("1e-30", 256).unwrap();
        // log_301(1e30) ≈ 12.1
        assert_eq!(default_k_max(&r0, &stop, 301), 14);
    }
}

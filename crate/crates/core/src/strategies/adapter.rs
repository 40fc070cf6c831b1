//! Potential-to-absolute adapter: Alice plays an inner potential-game
//! strategy on the same ball sequence and, in the absolute game, deletes the
//! `β r_n`-slab that captures the most inner-ledger weight meeting `B_n`.

use super::{AliceStrategy, Event, StrategyError};
use crate::game::{AliceMove, Horizon, Ledger, PotentialRules, Rules, Status, Transcript};
use crate::geometry::{ball_meets_slab, slab_in_slab, Ball, GeometryError, Line, Slab};
use crate::scalar::{Cert3, Interval, Rounding, Scalar};

/// `Σ halfwidth^c` over ledger slabs inside `candidate` that meet `ball`.
pub fn phi(ball: &Ball, candidate: &Slab, ledger: &Ledger, c: &Scalar, prec: u32) -> Interval {
    ledger
        .entries()
        .iter()
        .filter(|e| slab_in_slab(&e.slab, candidate, prec) == Cert3::Yes)
        .filter(|e| ball_meets_slab(ball, &e.slab, prec) == Cert3::Yes)
        .fold(Interval::zero(), |acc, e| {
            acc.add(&e.slab.halfwidth().interval().pow(c, prec), prec)
        })
}

/// `Σ halfwidth^c` over every ledger slab meeting `ball`.
pub fn phi_total(ball: &Ball, ledger: &Ledger, c: &Scalar, prec: u32) -> Interval {
    ledger
        .entries()
        .iter()
        .filter(|e| ball_meets_slab(ball, &e.slab, prec) == Cert3::Yes)
        .fold(Interval::zero(), |acc, e| {
            acc.add(&e.slab.halfwidth().interval().pow(c, prec), prec)
        })
}

/// Horizontal slab of halfwidth `hw` strictly above `ball`.
pub(crate) fn far_slab(ball: &Ball, hw: Scalar, prec: u32) -> Result<Slab, GeometryError> {
    let r = ball.radius();
    let lift = r
        .add(&hw, prec, Rounding::Up)
        .mul(&Scalar::from_i64(2, 64), prec, Rounding::Up);
    let y = ball.center().y.add(&lift, prec, Rounding::Up);
    Slab::new(Line::horizontal(y), hw)
}

pub struct AdapterAlice {
    beta: Scalar,
    c: Scalar,
    inner: Box<dyn AliceStrategy>,
    inner_t: Option<Transcript>,
    rules: PotentialRules,
    events: Vec<Event>,
}

impl AdapterAlice {
    /// `beta` is the absolute-game parameter; `inner` plays the
    /// `(beta_inner, c)` potential game and `beta_inner <= beta` is required
    /// so that Bob's absolute moves stay legal there.
    pub fn new(
        beta: Scalar,
        beta_inner: Scalar,
        c: Scalar,
        inner: Box<dyn AliceStrategy>,
    ) -> Result<Self, StrategyError> {
        if beta_inner.to_rational() > beta.to_rational() {
            return Err(StrategyError::Invariant("inner β must not exceed β".into()));
        }
        let rules = PotentialRules::new(beta_inner, c.clone())?;
        Ok(AdapterAlice {
            beta,
            c,
            inner,
            inner_t: None,
            rules,
            events: Vec::new(),
        })
    }

    /// The inner potential game, including its ledger.
    pub fn inner_transcript(&self) -> Option<&Transcript> {
        self.inner_t.as_ref()
    }

    fn sync(&mut self, t: &Transcript) -> Result<(), StrategyError> {
        let inner = match &mut self.inner_t {
            Some(it) => it,
            None => {
                let horizon = Horizon {
                    r_stop: t.horizon().r_stop.clone(),
                    n_max: usize::MAX,
                };
                let it = Transcript::new(
                    Rules::Potential(self.rules.clone()),
                    t.balls()[0].clone(),
                    horizon,
                    t.precision(),
                );
                self.inner_t.insert(it)
            }
        };
        loop {
            match inner.status() {
                Status::AwaitingAlice => {
                    let mv = self.inner.propose(inner)?;
                    self.events.extend(self.inner.take_events());
                    inner.submit_alice(mv)?;
                }
                Status::AwaitingBob if inner.stage() < t.stage() => {
                    inner.submit_bob(t.balls()[inner.stage() + 1].clone())?;
                }
                _ => break,
            }
        }
        Ok(())
    }

    /// Candidate `β r_n` slabs: each ledger line meeting `B_n` that fits,
    /// and the midline of each parallel pair of such lines.
    fn candidates(&self, ball: &Ball, width: &Scalar, prec: u32) -> Result<Vec<Slab>, GeometryError> {
        let ledger = self.inner_t.as_ref().expect("synced").ledger();
        let lines: Vec<&Slab> = ledger
            .entries()
            .iter()
            .map(|e| &e.slab)
            .filter(|s| s.halfwidth().to_rational() <= width.to_rational())
            .filter(|s| ball_meets_slab(ball, s, prec) == Cert3::Yes)
            .collect();
        let mut out: Vec<Slab> = Vec::new();
        for s in &lines {
            out.push(s.rethicken(width.clone())?);
        }
        for (i, a) in lines.iter().enumerate() {
            for b in &lines[i + 1..] {
                if a.line().normal() != b.line().normal() || a.line().offset() == b.line().offset() {
                    continue;
                }
                let sum = a.line().offset().add(b.line().offset(), prec + 2, Rounding::Nearest);
                let mid = sum.mul(
                    &Scalar::from_ratio(1, 2, 8, Rounding::Nearest),
                    prec + 2,
                    Rounding::Nearest,
                );
                let line = Line::new(a.line().normal().clone(), mid)?;
                out.push(Slab::new(line, width.clone())?);
            }
        }
        Ok(out)
    }
}

impl AliceStrategy for AdapterAlice {
    fn name(&self) -> &'static str {
        "adapter"
    }

    fn propose(&mut self, t: &Transcript) -> Result<AliceMove, StrategyError> {
        self.sync(t)?;
        let prec = t.precision();
        let ball = t.current_ball();
        let width = self.beta.mul_exact(ball.radius());
        let ledger = self.inner_t.as_ref().expect("synced").ledger();
        let mut best: Option<(Slab, Interval)> = None;
        for cand in self.candidates(ball, &width, prec)? {
            let score = phi(ball, &cand, ledger, &self.c, prec);
            if best.as_ref().is_none_or(|(_, b)| score.lo() > b.lo()) {
                best = Some((cand, score));
            }
        }
        let (slab, score) = match best {
            Some(b) => b,
            None => (far_slab(ball, width, prec)?, Interval::zero()),
        };
        let total = phi_total(ball, ledger, &self.c, prec);
        let rc = ball.radius().interval().pow(&self.c, prec);
        self.events.push(Event::Phi {
            n: t.stage(),
            ratio: total.div(&rc, prec).mid_f64(),
            chosen: score.mid_f64(),
        });
        Ok(AliceMove::Absolute(slab))
    }

    fn take_events(&mut self) -> Vec<Event> {
        std::mem::take(&mut self.events)
    }

    fn inner_ledger(&self) -> Option<&Ledger> {
        self.inner_t.as_ref().map(Transcript::ledger)
    }
}

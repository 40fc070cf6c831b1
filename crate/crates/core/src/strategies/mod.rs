//! Alice and Bob strategies.
//!
//! Every strategy is a deterministic function of the transcript so far, its
//! seed and its configuration. Alice strategies may also emit monitoring
//! [`Event`]s, which the harness writes into the trace.

use serde_json::{json, Value};
use thiserror::Error;

use crate::diophantine::{DiophantineError, RatPoint};
use crate::game::{AliceMove, GameError, Ledger, Transcript};
use crate::geometry::{Ball, GeometryError};

mod adapter;
mod bob;
mod trigger;

pub use adapter::{phi, phi_total, AdapterAlice};
pub use bob::{BobGreedy, BobRandom, BobScripted, BobTarget};
pub use trigger::{budget_chain_holds, choose_r, default_k_max, TriggerAlice};

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Diophantine(#[from] DiophantineError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("script: {0}")]
    Script(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Monitoring record emitted alongside a move.
#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    /// Trigger `m` fired at move `j`.
    TriggerFired {
        m: u32,
        j: usize,
        in_b_m: bool,
        /// A low-generation point whose rectangle meets `B̃_j`.
        blocker: Option<RatPoint>,
        /// Ledger slab that certifiably contains `B̃_j` when it is blocked.
        covered_by: Option<usize>,
        slabs: usize,
    },
    /// A fitted class slab is wider than the covering bound.
    LemmaViolation {
        m: u32,
        k: u32,
        delta: u8,
        rects: usize,
        fitted: f64,
        bound: f64,
    },
    /// Reserved budget of a trigger against its closed form and the limit.
    Budget {
        m: u32,
        reserved: f64,
        closed_form: f64,
        limit: f64,
        certified: bool,
    },
    /// `φ_total(B_n) / r_n^c` after the adapter's move at stage `n`.
    Phi { n: usize, ratio: f64, chosen: f64 },
}

impl Event {
    pub fn kind(&self) -> &'static str {
        match self {
            Event::TriggerFired { .. } => "TRIGGER",
            Event::LemmaViolation { .. } => "LEMMA_VIOLATION",
            Event::Budget { .. } => "BUDGET",
            Event::Phi { .. } => "PHI",
        }
    }

    pub fn record(&self) -> Value {
        let body = match self {
            Event::TriggerFired {
                m,
                j,
                in_b_m,
                blocker,
                covered_by,
                slabs,
            } => json!({
                "m": m, "j": j, "in_b_m": in_b_m,
                "blocker": blocker.map(|p| [p.p, p.r, p.q as i64]),
                "covered_by": covered_by, "slabs": slabs,
            }),
            Event::LemmaViolation {
                m,
                k,
                delta,
                rects,
                fitted,
                bound,
            } => json!({
                "m": m, "k": k, "delta": delta, "rects": rects,
                "fitted": format!("{fitted:e}"), "bound": format!("{bound:e}"),
            }),
            Event::Budget {
                m,
                reserved,
                closed_form,
                limit,
                certified,
            } => json!({
                "m": m, "reserved": format!("{reserved:e}"),
                "closed_form": format!("{closed_form:e}"),
                "limit": format!("{limit:e}"), "certified": certified,
            }),
            Event::Phi { n, ratio, chosen } => json!({
                "n": n, "ratio": format!("{ratio:e}"), "chosen": format!("{chosen:e}"),
            }),
        };
        json!({"event": self.kind(), "data": body})
    }
}

pub trait AliceStrategy: Send {
    fn name(&self) -> &'static str;
    /// Move answering the transcript's current ball.
    fn propose(&mut self, t: &Transcript) -> Result<AliceMove, StrategyError>;
    /// Events produced by the last call to `propose`.
    fn take_events(&mut self) -> Vec<Event> {
        Vec::new()
    }
    /// Ledger of an inner potential game, for strategies that keep one.
    fn inner_ledger(&self) -> Option<&Ledger> {
        None
    }
}

pub trait BobStrategy: Send {
    fn name(&self) -> &'static str;
    fn propose(&mut self, t: &Transcript) -> Result<Ball, StrategyError>;
}

/// Alice who never deletes anything useful: the empty collection in the
/// potential game and a thin slab far from the ball in the absolute game.
#[derive(Debug, Default)]
pub struct IdleAlice;

impl AliceStrategy for IdleAlice {
    fn name(&self) -> &'static str {
        "idle"
    }

    fn propose(&mut self, t: &Transcript) -> Result<AliceMove, StrategyError> {
        use crate::game::Rules;
        match t.rules() {
            Rules::Potential(_) => Ok(AliceMove::Potential(Vec::new())),
            Rules::Absolute(r) => {
                let b = t.current_ball();
                let width = r.beta().mul_exact(b.radius());
                let thin = width.round_to(t.precision(), crate::scalar::Rounding::Down);
                Ok(AliceMove::Absolute(adapter::far_slab(b, thin, t.precision())?))
            }
        }
    }
}

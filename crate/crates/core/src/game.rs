//! Rule-enforcing state machines for the hyperplane absolute game and the
//! hyperplane potential game.
//!
//! A [`Transcript`] accepts moves one at a time and records a move only if
//! every rule clause certifies `YES`, raising precision on `UNKNOWN`. The
//! transcript is never mutated by a rejected move.

use std::fmt;

use rug::Rational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::diophantine::{ball_in_delta, certify_ball, CertReport, Params, RatPoint};
use crate::geometry::{ball_in_ball, ball_in_slab, ball_meets_slab, Ball, Line, Point2, Slab};
use crate::scalar::{decide, Cert3, Interval, Scalar, DEFAULT_PRECISION};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("invalid rules: {0}")]
    InvalidRules(String),
    #[error("not {0}'s turn")]
    OutOfTurn(Player),
    #[error("match is finished")]
    Finished,
    #[error("move rejected: {0}")]
    Rejected(Rejection),
    #[error("undecidable at precision {0}")]
    Undecidable(u32),
    #[error("malformed record: {0}")]
    Malformed(String),
}

/// The rule clause a rejected move violated and how it certified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub clause: &'static str,
    pub cert: Cert3,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.clause, self.cert)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Alice,
    Bob,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "alice",
            Player::Bob => "bob",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbsoluteRules {
    beta: Scalar,
}

impl AbsoluteRules {
    pub fn new(beta: Scalar) -> Result<Self, GameError> {
        let b = beta.to_rational();
        if b <= 0 || Rational::from(&b * 3u32) >= 1 {
            return Err(GameError::InvalidRules("β must be < 1/3 and positive".into()));
        }
        Ok(AbsoluteRules { beta })
    }

    pub fn beta(&self) -> &Scalar {
        &self.beta
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialRules {
    beta: Scalar,
    c: Scalar,
}

impl PotentialRules {
    pub fn new(beta: Scalar, c: Scalar) -> Result<Self, GameError> {
        if !beta.is_positive() {
            return Err(GameError::InvalidRules("β must be positive".into()));
        }
        if !c.is_positive() {
            return Err(GameError::InvalidRules("c must be positive".into()));
        }
        Ok(PotentialRules { beta, c })
    }

    pub fn beta(&self) -> &Scalar {
        &self.beta
    }

    pub fn c(&self) -> &Scalar {
        &self.c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Rules {
    Absolute(AbsoluteRules),
    Potential(PotentialRules),
}

impl Rules {
    pub fn beta(&self) -> &Scalar {
        match self {
            Rules::Absolute(r) => r.beta(),
            Rules::Potential(r) => r.beta(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Rules::Absolute(_) => "absolute",
            Rules::Potential(_) => "potential",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AliceMove {
    Absolute(Slab),
    Potential(Vec<Slab>),
}

impl AliceMove {
    pub fn slabs(&self) -> &[Slab] {
        match self {
            AliceMove::Absolute(s) => std::slice::from_ref(s),
            AliceMove::Potential(v) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Move {
    Alice(AliceMove),
    Bob(Ball),
}

/// One accepted move with the certified clause results that admitted it.
#[derive(Debug, Clone, PartialEq)]
pub struct MoveRecord {
    pub index: usize,
    pub stage: usize,
    pub mv: Move,
    pub digests: Vec<(&'static str, Cert3)>,
}

impl MoveRecord {
    pub fn player(&self) -> Player {
        match self.mv {
            Move::Alice(_) => Player::Alice,
            Move::Bob(_) => Player::Bob,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinishReason {
    /// The last radius reached `r_stop`.
    Resolved,
    /// `N_max` Bob moves were made with the radius still above `r_stop`.
    Stalled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    AwaitingAlice,
    AwaitingBob,
    Finished(FinishReason),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    pub stage: usize,
    pub slab: Slab,
}

/// Every slab Alice deleted in a potential game, in move order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ledger {
    entries: Vec<LedgerEntry>,
}

impl Ledger {
    pub fn new() -> Self {
        Ledger::default()
    }

    pub fn push(&mut self, stage: usize, slab: Slab) {
        self.entries.push(LedgerEntry { stage, slab });
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Finite-horizon cutoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct Horizon {
    pub r_stop: Scalar,
    pub n_max: usize,
}

impl Default for Horizon {
    fn default() -> Self {
        Horizon {
            r_stop: Scalar::parse("1e-30", DEFAULT_PRECISION).expect("literal"),
            n_max: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    rules: Rules,
    horizon: Horizon,
    prec: u32,
    balls: Vec<Ball>,
    moves: Vec<MoveRecord>,
    ledger: Ledger,
    status: Status,
}

/// `new_match` with the default horizon and precision.
pub fn new_match(rules: Rules, b0: Ball) -> Transcript {
    Transcript::new(rules, b0, Horizon::default(), DEFAULT_PRECISION)
}

impl Transcript {
    pub fn new(rules: Rules, b0: Ball, horizon: Horizon, prec: u32) -> Self {
        let mut t = Transcript {
            rules,
            horizon,
            prec,
            balls: vec![b0],
            moves: Vec::new(),
            ledger: Ledger::new(),
            status: Status::AwaitingAlice,
        };
        t.update_status();
        t
    }

    pub fn rules(&self) -> &Rules {
        &self.rules
    }
    pub fn horizon(&self) -> &Horizon {
        &self.horizon
    }
    pub fn precision(&self) -> u32 {
        self.prec
    }
    pub fn status(&self) -> Status {
        self.status
    }
    pub fn is_finished(&self) -> bool {
        matches!(self.status, Status::Finished(_))
    }
    pub fn moves(&self) -> &[MoveRecord] {
        &self.moves
    }
    pub fn ledger(&self) -> &Ledger {
        &self.ledger
    }
    /// Bob's balls `B_0, …, B_n`.
    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }
    pub fn current_ball(&self) -> &Ball {
        self.balls.last().expect("B_0 present")
    }
    /// Index `n` of the current ball `B_n`.
    pub fn stage(&self) -> usize {
        self.balls.len() - 1
    }
    /// Alice's moves in order; entry `n` answers `B_n`.
    pub fn alice_moves(&self) -> impl Iterator<Item = &AliceMove> {
        self.moves.iter().filter_map(|m| match &m.mv {
            Move::Alice(a) => Some(a),
            _ => None,
        })
    }

    fn certify(&self, f: impl Fn(u32) -> Cert3) -> Result<Cert3, GameError> {
        decide(self.prec, f).map_err(|e| GameError::Undecidable(e.0))
    }

    fn require(&self, clause: &'static str, f: impl Fn(u32) -> Cert3) -> Result<(&'static str, Cert3), GameError> {
        match self.certify(f)? {
            Cert3::Yes => Ok((clause, Cert3::Yes)),
            cert => Err(GameError::Rejected(Rejection { clause, cert })),
        }
    }

    pub fn submit_alice(&mut self, mv: AliceMove) -> Result<(), GameError> {
        match self.status {
            Status::Finished(_) => return Err(GameError::Finished),
            Status::AwaitingBob => return Err(GameError::OutOfTurn(Player::Alice)),
            Status::AwaitingAlice => {}
        }
        let r = self.current_ball().radius().interval();
        let digest = match (&self.rules, &mv) {
            (Rules::Absolute(rules), AliceMove::Absolute(slab)) => {
                let beta = rules.beta.interval();
                let hw = slab.halfwidth().interval();
                vec![self.require("halfwidth <= beta*r_n", |p| hw.le(&beta.mul(&r, p)))?]
            }
            (Rules::Potential(rules), AliceMove::Potential(slabs)) => {
                let beta = rules.beta.interval();
                vec![self.require("sum halfwidth^c <= (beta*r_n)^c", |p| {
                    let total = slabs.iter().fold(Interval::zero(), |acc, s| {
                        acc.add(&s.halfwidth().interval().pow(&rules.c, p), p)
                    });
                    total.le(&beta.mul(&r, p).pow(&rules.c, p))
                })?]
            }
            _ => {
                return Err(GameError::Rejected(Rejection {
                    clause: "move kind matches game",
                    cert: Cert3::No,
                }))
            }
        };
        let stage = self.stage();
        if let AliceMove::Potential(slabs) = &mv {
            for s in slabs {
                self.ledger.push(stage, s.clone());
            }
        }
        self.moves.push(MoveRecord {
            index: self.moves.len(),
            stage,
            mv: Move::Alice(mv),
            digests: digest,
        });
        self.status = Status::AwaitingBob;
        Ok(())
    }

    pub fn submit_bob(&mut self, ball: Ball) -> Result<(), GameError> {
        match self.status {
            Status::Finished(_) => return Err(GameError::Finished),
            Status::AwaitingAlice => return Err(GameError::OutOfTurn(Player::Bob)),
            Status::AwaitingBob => {}
        }
        let prev = self.current_ball();
        let beta = self.rules.beta().interval();
        let r = prev.radius().interval();
        let mut digest = vec![
            self.require("r_{n+1} >= beta*r_n", |p| ball.radius().interval().ge(&beta.mul(&r, p)))?,
            self.require("B_{n+1} inside B_n", |p| ball_in_ball(&ball, prev, p))?,
        ];
        if let Rules::Absolute(_) = self.rules {
            let Some(Move::Alice(AliceMove::Absolute(slab))) = self.moves.last().map(|m| &m.mv) else {
                unreachable!("absolute game: Bob answers an Absolute move")
            };
            digest.push(self.require("B_{n+1} misses Alice's slab", |p| !ball_meets_slab(&ball, slab, p))?);
        }
        self.balls.push(ball);
        self.moves.push(MoveRecord {
            index: self.moves.len(),
            stage: self.stage(),
            mv: Move::Bob(self.current_ball().clone()),
            digests: digest,
        });
        self.status = Status::AwaitingAlice;
        self.update_status();
        Ok(())
    }

    fn update_status(&mut self) {
        let r = self.current_ball().radius();
        if r.to_rational() <= self.horizon.r_stop.to_rational() {
            self.status = Status::Finished(FinishReason::Resolved);
        } else if self.stage() >= self.horizon.n_max {
            self.status = Status::Finished(FinishReason::Stalled);
        }
    }

    /// Canonical text form of the match: header line and one line per move.
    pub fn records(&self) -> Vec<Value> {
        let mut out = vec![json!({
            "rules": rules_record(&self.rules),
            "b0": ball_record(&self.balls[0]),
            "r_stop": self.horizon.r_stop.serialize(),
            "n_max": self.horizon.n_max,
            "precision": self.prec,
        })];
        out.extend(self.moves.iter().map(move_record));
        out
    }

    /// SHA-256 over [`Transcript::records`] and the status.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for r in self.records() {
            h.update(r.to_string().as_bytes());
            h.update(b"\n");
        }
        h.update(format!("{:?}", self.status).as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl Rules {
    pub fn from_record(v: &Value) -> Result<Rules, GameError> {
        let kind = v["kind"].as_str().ok_or_else(|| malformed("rules.kind"))?;
        let beta = scalar_field(v, "beta")?;
        match kind {
            "absolute" => AbsoluteRules::new(beta).map(Rules::Absolute),
            "potential" => PotentialRules::new(beta, scalar_field(v, "c")?).map(Rules::Potential),
            _ => Err(malformed("rules.kind")),
        }
    }
}

fn malformed(what: &str) -> GameError {
    GameError::Malformed(what.to_string())
}

fn scalar_field(v: &Value, key: &str) -> Result<Scalar, GameError> {
    let s = v[key].as_str().ok_or_else(|| malformed(key))?;
    Scalar::deserialize(s).map_err(|_| malformed(key))
}

pub fn rules_record(rules: &Rules) -> Value {
    match rules {
        Rules::Absolute(r) => json!({"kind": "absolute", "beta": r.beta.serialize()}),
        Rules::Potential(r) => json!({"kind": "potential", "beta": r.beta.serialize(), "c": r.c.serialize()}),
    }
}

pub fn ball_record(b: &Ball) -> Value {
    json!({
        "x": b.center().x.serialize(),
        "y": b.center().y.serialize(),
        "r": b.radius().serialize(),
    })
}

pub fn ball_from_record(v: &Value) -> Result<Ball, GameError> {
    let p = Point2::new(scalar_field(v, "x")?, scalar_field(v, "y")?);
    Ball::new(p, scalar_field(v, "r")?).map_err(|e| GameError::Malformed(e.to_string()))
}

pub fn slab_record(s: &Slab) -> Value {
    let l = s.line();
    json!({
        "nx": l.normal().x.serialize(),
        "ny": l.normal().y.serialize(),
        "offset": l.offset().serialize(),
        "halfwidth": s.halfwidth().serialize(),
    })
}

pub fn slab_from_record(v: &Value) -> Result<Slab, GameError> {
    let n = Point2::new(scalar_field(v, "nx")?, scalar_field(v, "ny")?);
    let line = Line::new(n, scalar_field(v, "offset")?).map_err(|e| GameError::Malformed(e.to_string()))?;
    Slab::new(line, scalar_field(v, "halfwidth")?).map_err(|e| GameError::Malformed(e.to_string()))
}

fn move_record(m: &MoveRecord) -> Value {
    let digests: Vec<Value> = m.digests.iter().map(|(c, v)| json!([c, v.as_str()])).collect();
    let payload = match &m.mv {
        Move::Bob(b) => json!({"ball": ball_record(b)}),
        Move::Alice(AliceMove::Absolute(s)) => json!({"slab": slab_record(s)}),
        Move::Alice(AliceMove::Potential(v)) => {
            json!({"slabs": v.iter().map(slab_record).collect::<Vec<_>>()})
        }
    };
    json!({
        "index": m.index,
        "player": m.player(),
        "stage": m.stage,
        "move": payload,
        "digests": digests,
    })
}

/// Parses a move payload written by [`Transcript::records`].
pub fn move_from_record(v: &Value, rules: &Rules) -> Result<Move, GameError> {
    let payload = &v["move"];
    match v["player"].as_str() {
        Some("bob") => ball_from_record(&payload["ball"]).map(Move::Bob),
        Some("alice") => match rules {
            Rules::Absolute(_) => slab_from_record(&payload["slab"]).map(|s| Move::Alice(AliceMove::Absolute(s))),
            Rules::Potential(_) => {
                let arr = payload["slabs"].as_array().ok_or_else(|| malformed("slabs"))?;
                let slabs = arr.iter().map(slab_from_record).collect::<Result<Vec<_>, _>>()?;
                Ok(Move::Alice(AliceMove::Potential(slabs)))
            }
        },
        _ => Err(malformed("player")),
    }
}

/// Center and radius of the last ball: the outcome lies within that radius.
pub fn outcome(t: &Transcript) -> (Point2, Scalar) {
    let b = t.current_ball();
    (b.center().clone(), b.radius().clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    AliceDefault,
    TargetCertified,
    BobWitness,
    Inconclusive,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::AliceDefault => "ALICE_DEFAULT",
            VerdictKind::TargetCertified => "TARGET_CERTIFIED",
            VerdictKind::BobWitness => "BOB_WITNESS",
            VerdictKind::Inconclusive => "INCONCLUSIVE",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            VerdictKind::AliceDefault | VerdictKind::TargetCertified => 0,
            VerdictKind::BobWitness => 2,
            VerdictKind::Inconclusive => 3,
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub stalled: bool,
    /// Index of the ledger slab containing the final ball.
    pub ledger_index: Option<usize>,
    /// The Δ rectangle containing the final ball.
    pub witness: Option<RatPoint>,
    pub cert: Option<CertReport>,
}

impl Verdict {
    pub fn record(&self) -> Value {
        json!({
            "verdict": self.kind.as_str(),
            "stalled": self.stalled,
            "ledger_index": self.ledger_index,
            "witness": self.witness.map(|w| [w.p, w.r, w.q as i64]),
            "cert": self.cert.as_ref().map(CertReport::record),
        })
    }
}

/// Decides the match at resolution `Q`, in priority order: Alice's default
/// win, target certification, a Bob witness, else inconclusive. Stalled or
/// unfinished matches are inconclusive.
pub fn adjudicate(t: &Transcript, target: &Params, q_max: u64) -> Verdict {
    let mut v = Verdict {
        kind: VerdictKind::Inconclusive,
        stalled: t.status() == Status::Finished(FinishReason::Stalled),
        ledger_index: None,
        witness: None,
        cert: None,
    };
    if t.status() != Status::Finished(FinishReason::Resolved) {
        return v;
    }
    let ball = t.current_ball();
    let inside = |f: &dyn Fn(u32) -> Cert3| decide(t.prec, f) == Ok(Cert3::Yes);
    if let Some(i) = t
        .ledger()
        .entries()
        .iter()
        .position(|e| inside(&|p| ball_in_slab(ball, &e.slab, p)))
    {
        v.kind = VerdictKind::AliceDefault;
        v.ledger_index = Some(i);
        return v;
    }
    let cert = certify_ball(ball, q_max, target);
    if cert.pass {
        v.kind = VerdictKind::TargetCertified;
        v.cert = Some(cert);
        return v;
    }
    v.witness = find_enclosing_delta(ball, q_max, target, t.prec);
    v.kind = if v.witness.is_some() {
        VerdictKind::BobWitness
    } else {
        VerdictKind::Inconclusive
    };
    v.cert = Some(cert);
    v
}

/// First `(p, r, q)` with `q <= Q` whose `Δ_ε` certifiably contains the ball.
pub fn find_enclosing_delta(ball: &Ball, q_max: u64, params: &Params, prec: u32) -> Option<RatPoint> {
    let (cx, cy) = ball.center().to_f64();
    (1..=q_max).find_map(|q| {
        let qf = q as f64;
        let (p, r) = ((cx * qf).round() as i64, (cy * qf).round() as i64);
        let pt = RatPoint::new(p, r, q);
        (decide(prec, |w| ball_in_delta(ball, &pt, params, w)) == Ok(Cert3::Yes)).then_some(pt)
    })
}

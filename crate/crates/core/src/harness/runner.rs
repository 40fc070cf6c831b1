//! Single-match runner, trace format and replay.
//!
//! A trace is line-delimited JSON. The first line is the header:
//!
//! ```text
//! {"schema":"hawk-trace/1","config":"<toml>","seed":7,
//!  "params":{"s":..,"t":..,"epsilon":..,"ell":..,"R":..,"q_cap":..,"q_certify":..,"precision":..},
//!  "transcript":{"rules":..,"b0":..,"r_stop":..,"n_max":..,"precision":..}}
//! ```
//!
//! Every following line is one record: `{"record":"move","body":<move>}`,
//! `{"record":"event","stage":n,"body":{"event":..,"data":..}}` or the final
//! `{"record":"adjudication","status":..,"digest":..,"body":<verdict>}`.
//! Scalars are `"<precision>:<decimal>"` strings and replay bit-exactly.

use std::fs::File;
use std::io::BufReader;

use serde_json::{json, Value};
use thiserror::Error;

use super::config::{derive_seed, prepare, AliceKind, BobKind, ConfigError, MatchConfig, MatchSetup};
use crate::diophantine::Params;
use crate::game::{
    adjudicate, ball_from_record, move_from_record, FinishReason, GameError, Horizon, Ledger, Move, Rules, Status,
    Transcript, Verdict,
};
use crate::scalar::Scalar;
use crate::strategies::{
    AdapterAlice, AliceStrategy, BobGreedy, BobRandom, BobScripted, BobStrategy, BobTarget, Event, IdleAlice,
    StrategyError, TriggerAlice,
};

pub const SCHEMA: &str = "hawk-trace/1";

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("strategy: {0}")]
    Strategy(#[from] StrategyError),
    #[error("engine: {0}")]
    Game(#[from] GameError),
    #[error("trace: {0}")]
    Trace(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

fn trace_err(msg: impl Into<String>) -> RunError {
    RunError::Trace(msg.into())
}

pub struct MatchResult {
    pub alice: &'static str,
    pub bob: &'static str,
    pub transcript: Transcript,
    /// Events with the stage of the Alice move that produced them.
    pub events: Vec<(usize, Event)>,
    pub verdict: Verdict,
    pub trace: String,
    /// The adapter's inner potential-game ledger.
    pub inner_ledger: Option<Ledger>,
}

impl MatchResult {
    pub fn lemma_violations(&self) -> usize {
        self.events
            .iter()
            .filter(|(_, e)| matches!(e, Event::LemmaViolation { .. }))
            .count()
    }

    pub fn report(&self, setup: &MatchSetup) -> String {
        let r = self.transcript.current_ball().radius();
        let mut out = format!(
            "alice: {}\nbob: {}\nverdict: {}\nepsilon: {}\nQ: {}\nstages: {}\nfinal radius: {:.6e}\n",
            self.alice,
            self.bob,
            self.verdict.kind,
            setup.params.epsilon(),
            setup.q_certify,
            self.transcript.stage(),
            r.to_f64(),
        );
        if self.verdict.stalled {
            out.push_str("stalled: N_max reached\n");
        }
        if let Some(i) = self.verdict.ledger_index {
            out.push_str(&format!("ledger slab: {i}\n"));
        }
        if let Some(w) = self.verdict.witness {
            out.push_str(&format!("witness: {w}\n"));
        }
        let mut triggers = 0;
        for (_, e) in &self.events {
            match e {
                Event::TriggerFired {
                    m,
                    j,
                    in_b_m,
                    blocker,
                    covered_by,
                    slabs,
                } => {
                    triggers += 1;
                    let tail = match (blocker, covered_by) {
                        (Some(b), Some(c)) => format!(" blocked by {b}, inside ledger slab {c}"),
                        (Some(b), None) => format!(" blocked by {b}"),
                        _ => String::new(),
                    };
                    out.push_str(&format!("trigger m={m} j={j} in_B_m={in_b_m} slabs={slabs}{tail}\n"));
                }
                Event::LemmaViolation {
                    m,
                    k,
                    delta,
                    rects,
                    fitted,
                    bound,
                } => out.push_str(&format!(
                    "LEMMA_VIOLATION m={m} k={k} delta={delta} rects={rects} fitted={fitted:e} bound={bound:e}\n"
                )),
                _ => {}
            }
        }
        out.push_str(&format!("triggers: {triggers}\n"));
        out
    }
}

fn build_alice(setup: &MatchSetup) -> Result<Box<dyn AliceStrategy>, RunError> {
    let prec = setup.precision;
    let c = Scalar::parse(&setup.config.game.c, prec).map_err(|e| trace_err(e.to_string()))?;
    Ok(match setup.config.alice.strategy {
        AliceKind::Idle => Box::new(IdleAlice),
        AliceKind::Trigger => Box::new(TriggerAlice::new(
            &setup.params,
            setup.rules.beta().clone(),
            c,
            &setup.r0,
            setup.k_max,
        )?),
        AliceKind::Adapter => {
            let inner_rules = setup.inner_rules.as_ref().expect("adapter setup has inner rules");
            let inner = TriggerAlice::new(
                &setup.params,
                inner_rules.beta().clone(),
                c.clone(),
                &setup.r0,
                setup.k_max,
            )?;
            Box::new(AdapterAlice::new(
                setup.rules.beta().clone(),
                inner_rules.beta().clone(),
                c,
                Box::new(inner),
            )?)
        }
    })
}

fn build_bob(setup: &MatchSetup) -> Result<Box<dyn BobStrategy>, RunError> {
    let seed = derive_seed(setup.seed(), "bob");
    Ok(match setup.config.bob.strategy {
        BobKind::Random => Box::new(BobRandom::new(seed)),
        BobKind::Target => Box::new(BobTarget::new(setup.target.expect("validated"))),
        BobKind::Greedy => Box::new(BobGreedy::new(seed, setup.params.clone())),
        BobKind::Scripted => {
            let path = setup.config.bob.script.as_deref().expect("validated");
            if path == "-" {
                Box::new(BobScripted::interactive(Box::new(BufReader::new(std::io::stdin()))))
            } else {
                Box::new(BobScripted::new(Box::new(BufReader::new(File::open(path)?))))
            }
        }
    })
}

fn params_record(setup: &MatchSetup) -> Value {
    let p = &setup.params;
    json!({
        "s": p.s().serialize(),
        "t": p.t().serialize(),
        "epsilon": p.epsilon().serialize(),
        "ell": p.ell().serialize(),
        "R": p.r_base().serialize(),
        "q_cap": p.q_cap(),
        "q_certify": setup.q_certify,
        "precision": p.precision(),
    })
}

fn status_text(s: Status) -> &'static str {
    match s {
        Status::Finished(FinishReason::Resolved) => "resolved",
        Status::Finished(FinishReason::Stalled) => "stalled",
        Status::AwaitingAlice | Status::AwaitingBob => "unfinished",
    }
}

/// Canonical trace text. Events follow the Alice move of their stage.
fn render_trace(header: &Value, t: &Transcript, events: &[(usize, Value)], verdict: &Verdict) -> String {
    let mut out = String::new();
    let mut push = |v: &Value| {
        out.push_str(&v.to_string());
        out.push('\n');
    };
    push(header);
    let records = t.records();
    let mut pending = events.iter().peekable();
    for (rec, m) in records[1..].iter().zip(t.moves()) {
        push(&json!({"record": "move", "body": rec}));
        if let Move::Alice(_) = m.mv {
            while let Some((_, e)) = pending.next_if(|(s, _)| *s == m.stage) {
                push(&json!({"record": "event", "stage": m.stage, "body": e}));
            }
        }
    }
    for (s, e) in pending {
        push(&json!({"record": "event", "stage": s, "body": e}));
    }
    push(&json!({
        "record": "adjudication",
        "status": status_text(t.status()),
        "digest": t.digest(),
        "body": verdict.record(),
    }));
    out
}

/// Runs one match to termination. `setup` must have a resolved ε.
pub fn run_match(setup: &MatchSetup) -> Result<MatchResult, RunError> {
    if setup.needs_calibration() {
        return Err(trace_err("epsilon must be calibrated before play"));
    }
    let mut alice = build_alice(setup)?;
    let mut bob = build_bob(setup)?;
    let mut t = Transcript::new(
        setup.rules.clone(),
        setup.b0.clone(),
        setup.horizon.clone(),
        setup.precision,
    );
    let mut events = Vec::new();
    while !t.is_finished() {
        let mv = alice.propose(&t)?;
        let stage = t.stage();
        events.extend(alice.take_events().into_iter().map(|e| (stage, e)));
        t.submit_alice(mv)?;
        if t.is_finished() {
            break;
        }
        let ball = bob.propose(&t)?;
        t.submit_bob(ball)?;
    }
    let verdict = adjudicate(&t, &setup.params, setup.q_certify);
    let header = json!({
        "schema": SCHEMA,
        "config": setup.config.to_toml(),
        "seed": setup.seed(),
        "alice": alice.name(),
        "bob": bob.name(),
        "params": params_record(setup),
        "transcript": t.records()[0],
    });
    let ev_values: Vec<(usize, Value)> = events.iter().map(|(s, e)| (*s, e.record())).collect();
    let trace = render_trace(&header, &t, &ev_values, &verdict);
    Ok(MatchResult {
        alice: alice.name(),
        bob: bob.name(),
        transcript: t,
        events,
        verdict,
        trace,
        inner_ledger: alice.inner_ledger().cloned(),
    })
}

/// Parses, validates and (when asked) calibrates a config, then plays it.
pub fn play_config(config: &MatchConfig) -> Result<(MatchSetup, MatchResult), RunError> {
    let mut setup = prepare(config)?;
    if setup.needs_calibration() {
        let report = super::calibrate::run_calibration(&setup).map_err(|e| trace_err(e.to_string()))?;
        setup = setup.with_epsilon(report.epsilon)?;
    }
    let result = run_match(&setup)?;
    Ok((setup, result))
}

/// A parsed trace.
#[derive(Debug, Clone)]
pub struct Trace {
    pub header: Value,
    pub moves: Vec<Value>,
    pub events: Vec<(usize, Value)>,
    pub adjudication: Value,
}

impl Trace {
    pub fn parse(text: &str) -> Result<Trace, RunError> {
        let mut lines = text.lines();
        let header: Value = serde_json::from_str(lines.next().ok_or_else(|| trace_err("empty trace"))?)
            .map_err(|e| trace_err(format!("header: {e}")))?;
        if header["schema"] != SCHEMA {
            return Err(trace_err(format!("unsupported schema {}", header["schema"])));
        }
        let mut trace = Trace {
            header,
            moves: Vec::new(),
            events: Vec::new(),
            adjudication: Value::Null,
        };
        for (i, line) in lines.enumerate() {
            let v: Value = serde_json::from_str(line).map_err(|e| trace_err(format!("line {}: {e}", i + 2)))?;
            if !trace.adjudication.is_null() {
                return Err(trace_err("records after the adjudication"));
            }
            match v["record"].as_str() {
                Some("move") => trace.moves.push(v["body"].clone()),
                Some("event") => {
                    let stage = v["stage"].as_u64().ok_or_else(|| trace_err("event stage"))? as usize;
                    trace.events.push((stage, v["body"].clone()));
                }
                Some("adjudication") => trace.adjudication = v,
                _ => return Err(trace_err(format!("line {}: unknown record", i + 2))),
            }
        }
        if trace.adjudication.is_null() {
            return Err(trace_err("missing adjudication"));
        }
        Ok(trace)
    }

    pub fn rules(&self) -> Result<Rules, RunError> {
        Ok(Rules::from_record(&self.header["transcript"]["rules"])?)
    }

    /// Target parameters recorded in the header.
    pub fn params(&self) -> Result<(Params, u64), RunError> {
        let p = &self.header["params"];
        let sc = |k: &str| {
            p[k].as_str()
                .and_then(|s| Scalar::deserialize(s).ok())
                .ok_or_else(|| trace_err(format!("params.{k}")))
        };
        let int = |k: &str| p[k].as_u64().ok_or_else(|| trace_err(format!("params.{k}")));
        let params = Params::with_weights(
            sc("s")?,
            sc("t")?,
            sc("epsilon")?,
            sc("ell")?,
            sc("R")?,
            int("q_cap")?,
            int("precision")? as u32,
        )
        .map_err(|e| trace_err(e.to_string()))?;
        Ok((params, int("q_certify")?))
    }

    /// Resubmits every move to a fresh engine.
    pub fn rebuild(&self) -> Result<Transcript, RunError> {
        let h = &self.header["transcript"];
        let rules = self.rules()?;
        let b0 = ball_from_record(&h["b0"])?;
        let r_stop = h["r_stop"]
            .as_str()
            .and_then(|s| Scalar::deserialize(s).ok())
            .ok_or_else(|| trace_err("r_stop"))?;
        let n_max = h["n_max"].as_u64().ok_or_else(|| trace_err("n_max"))? as usize;
        let prec = h["precision"].as_u64().ok_or_else(|| trace_err("precision"))? as u32;
        let mut t = Transcript::new(rules.clone(), b0, Horizon { r_stop, n_max }, prec);
        for m in &self.moves {
            match move_from_record(m, &rules)? {
                Move::Alice(a) => t.submit_alice(a)?,
                Move::Bob(b) => t.submit_bob(b)?,
            }
        }
        Ok(t)
    }
}

pub struct Replay {
    pub transcript: Transcript,
    pub verdict: Verdict,
    /// The recomputed adjudication equals the recorded one.
    pub same_adjudication: bool,
    /// Re-serializing the replayed match reproduces the input bytes.
    pub same_bytes: bool,
}

pub fn replay(text: &str) -> Result<Replay, RunError> {
    let trace = Trace::parse(text)?;
    let t = trace.rebuild()?;
    let (params, q) = trace.params()?;
    let verdict = adjudicate(&t, &params, q);
    let regenerated = render_trace(&trace.header, &t, &trace.events, &verdict);
    let recorded = &trace.adjudication;
    let same_adjudication = recorded["body"] == verdict.record()
        && recorded["digest"] == t.digest()
        && recorded["status"] == status_text(t.status());
    Ok(Replay {
        same_bytes: regenerated == text,
        transcript: t,
        verdict,
        same_adjudication,
    })
}

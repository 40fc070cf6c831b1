//! Tournament runner: every `(alice, bob, seed)` cell of a matrix, played in
//! parallel, summarized as a tab-separated table.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::calibrate::run_calibration;
use super::config::{prepare_reusing, AliceSection, BobSection, ConfigError, MatchConfig, MatchSetup};
use super::runner::{run_match, MatchResult, RunError};
use crate::diophantine::{badness_score, Params};
use crate::game::VerdictKind;
use crate::scalar::Scalar;
use crate::strategies::Event;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Matrix {
    pub alice: Vec<AliceSection>,
    pub bob: Vec<BobSection>,
    pub seeds: Vec<u64>,
}

/// A base match config plus a `[matrix]` section whose `[[matrix.alice]]`
/// and `[[matrix.bob]]` entries replace the base strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct TournamentConfig {
    pub base: MatchConfig,
    pub matrix: Matrix,
}

impl TournamentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let syntax = |e: toml::de::Error| ConfigError::Syntax(e.to_string());
        let mut table: toml::Table = text.parse().map_err(syntax)?;
        let matrix = table
            .remove("matrix")
            .ok_or_else(|| ConfigError::Syntax("missing [matrix] section".into()))?;
        let matrix: Matrix = matrix.try_into().map_err(syntax)?;
        // The base strategies default to the first matrix entries.
        if let (false, Some(a)) = (table.contains_key("alice"), matrix.alice.first()) {
            table.insert(
                "alice".into(),
                toml::Value::try_from(a.clone()).expect("section serializes"),
            );
        }
        if let (false, Some(b)) = (table.contains_key("bob"), matrix.bob.first()) {
            table.insert(
                "bob".into(),
                toml::Value::try_from(b.clone()).expect("section serializes"),
            );
        }
        let base: MatchConfig = toml::Value::Table(table).try_into().map_err(syntax)?;
        if matrix.alice.is_empty() || matrix.bob.is_empty() || matrix.seeds.is_empty() {
            return Err(ConfigError::Syntax(
                "matrix needs at least one alice, bob and seed".into(),
            ));
        }
        Ok(TournamentConfig { base, matrix })
    }
}

/// Expands and validates every cell; calibrates ε once per distinct `R`.
pub fn prepare_cells(tc: &TournamentConfig) -> Result<Vec<MatchSetup>, RunError> {
    let mut setups = Vec::new();
    let mut known = Vec::new();
    for alice in &tc.matrix.alice {
        for bob in &tc.matrix.bob {
            for &seed in &tc.matrix.seeds {
                let mut c = tc.base.clone();
                c.alice = alice.clone();
                c.bob = bob.clone();
                c.run.seed = seed;
                let setup = prepare_reusing(&c, &known)?;
                if !known.contains(&setup.params) {
                    known.push(setup.params.clone());
                }
                setups.push(setup);
            }
        }
    }
    let mut eps: BTreeMap<u64, Scalar> = BTreeMap::new();
    let mut resolved: Vec<(Params, Params)> = Vec::new();
    for s in setups.iter_mut() {
        if !s.needs_calibration() {
            continue;
        }
        if let Some((_, done)) = resolved.iter().find(|(from, _)| *from == s.params) {
            s.params = done.clone();
            s.epsilon_calibrated = true;
            continue;
        }
        let e = match eps.get(&s.r_base) {
            Some(e) => e.clone(),
            None => {
                let report = run_calibration(s).map_err(|e| RunError::Trace(e.to_string()))?;
                eps.insert(s.r_base, report.epsilon.clone());
                report.epsilon
            }
        };
        let next = s.with_epsilon(e)?;
        resolved.push((s.params.clone(), next.params.clone()));
        *s = next;
    }
    Ok(setups)
}

/// One table row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub alice: String,
    pub bob: String,
    pub seed: u64,
    pub verdict: VerdictKind,
    pub stalled: bool,
    pub stages: usize,
    pub final_radius: f64,
    /// Lower end of the badness enclosure at the final center, at `Q_certify`.
    pub badness_lb: f64,
    pub lemma_violations: usize,
    pub triggers: usize,
}

pub fn row(setup: &MatchSetup, r: &MatchResult) -> Row {
    let c = r.transcript.current_ball().center();
    let score = badness_score(&c.x, &c.y, setup.q_certify, &setup.params).score;
    Row {
        alice: r.alice.to_string(),
        bob: r.bob.to_string(),
        seed: setup.seed(),
        verdict: r.verdict.kind,
        stalled: r.verdict.stalled,
        stages: r.transcript.stage(),
        final_radius: r.transcript.current_ball().radius().to_f64(),
        badness_lb: score.lo().to_f64_round(rug::float::Round::Down),
        lemma_violations: r.lemma_violations(),
        triggers: r
            .events
            .iter()
            .filter(|(_, e)| matches!(e, Event::TriggerFired { .. }))
            .count(),
    }
}

pub struct Outcome {
    pub setups: Vec<MatchSetup>,
    pub results: Vec<MatchResult>,
    pub rows: Vec<Row>,
}

/// Plays all cells concurrently; results keep the cell order.
pub fn run_tournament(setups: Vec<MatchSetup>) -> Result<Outcome, RunError> {
    let results: Vec<MatchResult> = setups.par_iter().map(run_match).collect::<Result<_, _>>()?;
    let rows = setups.iter().zip(&results).map(|(s, r)| row(s, r)).collect();
    Ok(Outcome { setups, results, rows })
}

const KINDS: [VerdictKind; 4] = [
    VerdictKind::AliceDefault,
    VerdictKind::TargetCertified,
    VerdictKind::BobWitness,
    VerdictKind::Inconclusive,
];

/// Per-match rows followed by per-pairing summary rows.
pub fn table(rows: &[Row]) -> String {
    let mut out = String::from(
        "alice\tbob\tseed\tverdict\tstalled\tstages\tfinal_radius\tbadness_lb\tlemma_violations\ttriggers\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{:.6e}\t{:.6e}\t{}\t{}\n",
            r.alice,
            r.bob,
            r.seed,
            r.verdict,
            r.stalled,
            r.stages,
            r.final_radius,
            r.badness_lb,
            r.lemma_violations,
            r.triggers
        ));
    }
    out.push_str("\nalice\tbob\tmatches");
    for k in KINDS {
        out.push_str(&format!("\t{k}"));
    }
    out.push_str("\tmean_badness_lb\tlemma_violations\n");
    let mut groups: BTreeMap<(&str, &str), Vec<&Row>> = BTreeMap::new();
    for r in rows {
        groups.entry((&r.alice, &r.bob)).or_default().push(r);
    }
    for ((a, b), rs) in groups {
        out.push_str(&format!("{a}\t{b}\t{}", rs.len()));
        for k in KINDS {
            out.push_str(&format!("\t{}", rs.iter().filter(|r| r.verdict == k).count()));
        }
        let mean = rs.iter().map(|r| r.badness_lb).sum::<f64>() / rs.len() as f64;
        let lv: usize = rs.iter().map(|r| r.lemma_violations).sum();
        out.push_str(&format!("\t{mean:.6e}\t{lv}\n"));
    }
    out
}

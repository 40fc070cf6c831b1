//! Match configuration: a TOML document with sections `[game]`, `[params]`,
//! `[alice]`, `[bob]`, `[start]`, `[run]` and `[calibration]`.
//!
//! The only environment override is `HAWK_SEED`, which replaces the master
//! seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::diophantine::{Params, RatPoint};
use crate::game::{AbsoluteRules, Horizon, PotentialRules, Rules};
use crate::geometry::{Ball, Point2};
use crate::scalar::{parse_rational, Rounding, Scalar};
use crate::strategies::{choose_r, default_k_max};

pub const SEED_ENV: &str = "HAWK_SEED";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config syntax: {0}")]
    Syntax(String),
    #[error("config value `{key}`: {msg}")]
    Value { key: &'static str, msg: String },
}

fn bad(key: &'static str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Value { key, msg: msg.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameKind {
    Absolute,
    Potential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSection {
    pub kind: GameKind,
    pub beta: String,
    #[serde(default = "one")]
    pub c: String,
    /// `β̃` for the adapter's inner potential game; defaults to `beta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_inner: Option<String>,
}

fn one() -> String {
    "1".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub s: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    /// A number, or `"calibrate"`.
    pub epsilon: String,
    /// `ℓ`; defaults to `2 r_0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<String>,
    /// An integer, or `"auto"` for the smallest legal ratio.
    #[serde(default = "auto", rename = "R")]
    pub r: String,
    #[serde(default = "q_cap_default")]
    pub q_cap: u64,
    #[serde(default = "q_certify_default")]
    pub q_certify: u64,
}

fn auto() -> String {
    "auto".into()
}
fn q_cap_default() -> u64 {
    10_000
}
fn q_certify_default() -> u64 {
    1_000
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AliceKind {
    Trigger,
    Adapter,
    Idle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AliceSection {
    pub strategy: AliceKind,
    /// Class horizon; defaults to `⌈log_R(r_0/r_stop)⌉ + 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BobKind {
    Random,
    Target,
    Greedy,
    Scripted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BobSection {
    pub strategy: BobKind,
    /// `[p, r, q]` for the target strategy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<[i64; 3]>,
    /// Script path for the scripted strategy; `-` reads standard input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub script: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CenterSpec {
    /// `"random"` (uniform in the unit square) or `"target"` (next to Bob's target).
    Named(String),
    Point([String; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartSection {
    #[serde(default = "random_center")]
    pub center: CenterSpec,
    #[serde(default = "radius_default")]
    pub radius: String,
}

fn random_center() -> CenterSpec {
    CenterSpec::Named("random".into())
}
fn radius_default() -> String {
    "1e-8".into()
}

impl Default for StartSection {
    fn default() -> Self {
        StartSection {
            center: random_center(),
            radius: radius_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "n_max_default")]
    pub n_max: usize,
    #[serde(default = "r_stop_default")]
    pub r_stop: String,
    #[serde(default = "precision_default")]
    pub precision: u32,
    #[serde(default)]
    pub seed: u64,
}

fn n_max_default() -> usize {
    200
}
fn r_stop_default() -> String {
    "1e-30".into()
}
fn precision_default() -> u32 {
    crate::scalar::DEFAULT_PRECISION
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            n_max: n_max_default(),
            r_stop: r_stop_default(),
            precision: precision_default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationSection {
    /// Grid `2^-e` for `e` from `exp_lo` to `exp_hi`, searched from the largest value.
    #[serde(default = "exp_lo_default")]
    pub exp_lo: u32,
    #[serde(default = "exp_hi_default")]
    pub exp_hi: u32,
    /// Random probe balls in the unit square.
    #[serde(default = "probes_default")]
    pub probes: usize,
    /// Probes centered at every canonical point with `q <=` this bound.
    #[serde(default = "probe_q_default")]
    pub probe_q: u64,
    #[serde(default = "probe_m_default")]
    pub m_max: u32,
    #[serde(default = "probe_k_default")]
    pub k_max: u32,
    #[serde(default)]
    pub seed: u64,
}

fn exp_lo_default() -> u32 {
    20
}
fn exp_hi_default() -> u32 {
    80
}
fn probes_default() -> usize {
    100
}
fn probe_q_default() -> u64 {
    5
}
fn probe_m_default() -> u32 {
    3
}
fn probe_k_default() -> u32 {
    3
}

impl Default for CalibrationSection {
    fn default() -> Self {
        CalibrationSection {
            exp_lo: exp_lo_default(),
            exp_hi: exp_hi_default(),
            probes: probes_default(),
            probe_q: probe_q_default(),
            m_max: probe_m_default(),
            k_max: probe_k_default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchConfig {
    pub game: GameSection,
    pub params: ParamsSection,
    pub alice: AliceSection,
    pub bob: BobSection,
    #[serde(default)]
    pub start: StartSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub calibration: CalibrationSection,
}

impl MatchConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Replaces the master seed from `HAWK_SEED` when it is set.
    pub fn apply_env(&mut self) -> Result<(), ConfigError> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.run.seed = v
                .trim()
                .parse()
                .map_err(|_| bad("HAWK_SEED", "not an unsigned integer"))?;
        }
        Ok(())
    }
}

/// Independent sub-seed for a named consumer of the master seed.
pub fn derive_seed(master: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(label.as_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("8 bytes"))
}

fn scalar(key: &'static str, text: &str, prec: u32) -> Result<Scalar, ConfigError> {
    Scalar::parse(text, prec).map_err(|e| bad(key, e.to_string()))
}

fn rational(key: &'static str, text: &str) -> Result<Rational, ConfigError> {
    parse_rational(text).map_err(|e| bad(key, e.to_string()))
}

/// A validated configuration with every derived quantity resolved.
#[derive(Debug, Clone)]
pub struct MatchSetup {
    pub config: MatchConfig,
    pub rules: Rules,
    /// Rules of the adapter's inner game.
    pub inner_rules: Option<PotentialRules>,
    /// Target parameters; `ε` is a placeholder until resolved when the
    /// config asks for calibration.
    pub params: Params,
    pub epsilon_calibrated: bool,
    pub r_base: u64,
    pub r0: Scalar,
    pub b0: Ball,
    pub horizon: Horizon,
    pub precision: u32,
    pub k_max: u32,
    pub q_certify: u64,
    pub target: Option<RatPoint>,
}

impl MatchSetup {
    pub fn seed(&self) -> u64 {
        self.config.run.seed
    }

    pub fn needs_calibration(&self) -> bool {
        self.config.params.epsilon.trim() == "calibrate" && !self.epsilon_calibrated
    }

    pub fn with_epsilon(&self, epsilon: Scalar) -> Result<MatchSetup, ConfigError> {
        let mut s = self.clone();
        s.params = self
            .params
            .with_epsilon(epsilon)
            .map_err(|e| bad("params.epsilon", e.to_string()))?;
        s.epsilon_calibrated = true;
        Ok(s)
    }
}

/// Validates cross-field constraints and resolves `auto` values.
pub fn prepare(config: &MatchConfig) -> Result<MatchSetup, ConfigError> {
    prepare_reusing(config, &[])
}

/// [`prepare`], taking the parameter tables from `known` when one matches.
pub fn prepare_reusing(config: &MatchConfig, known: &[Params]) -> Result<MatchSetup, ConfigError> {
    let prec = config.run.precision;
    if !(64..=crate::scalar::MAX_PRECISION).contains(&prec) {
        return Err(bad("run.precision", "must be between 64 and 4096"));
    }
    // TOML integers are signed, and the config is embedded in every trace.
    if i64::try_from(config.run.seed).is_err() {
        return Err(bad("run.seed", "must be at most 2^63 - 1"));
    }
    let beta_q = rational("game.beta", &config.game.beta)?;
    let c_q = rational("game.c", &config.game.c)?;
    let beta = scalar("game.beta", &config.game.beta, prec)?;
    let c = scalar("game.c", &config.game.c, prec)?;
    let rules = match config.game.kind {
        GameKind::Absolute => {
            Rules::Absolute(AbsoluteRules::new(beta.clone()).map_err(|e| bad("game.beta", e.to_string()))?)
        }
        GameKind::Potential => {
            Rules::Potential(PotentialRules::new(beta.clone(), c.clone()).map_err(|e| bad("game", e.to_string()))?)
        }
    };

    let (inner_rules, strategy_beta) = match (config.alice.strategy, config.game.kind) {
        (AliceKind::Adapter, GameKind::Absolute) => {
            let text = config.game.beta_inner.as_deref().unwrap_or(&config.game.beta);
            let bi = scalar("game.beta_inner", text, prec)?;
            if bi.to_rational() > beta.to_rational() {
                return Err(bad("game.beta_inner", "must not exceed beta"));
            }
            let r = PotentialRules::new(bi, c.clone()).map_err(|e| bad("game.beta_inner", e.to_string()))?;
            (Some(r), rational("game.beta_inner", text)?)
        }
        (AliceKind::Adapter, GameKind::Potential) => {
            return Err(bad("alice.strategy", "adapter plays the absolute game"))
        }
        (AliceKind::Trigger, GameKind::Absolute) => {
            return Err(bad("alice.strategy", "trigger plays the potential game"))
        }
        _ => (None, beta_q.clone()),
    };

    let r_base = match config.params.r.trim() {
        "auto" => choose_r(&strategy_beta, &c_q),
        text => text
            .parse::<u64>()
            .map_err(|_| bad("params.R", "integer or \"auto\""))?,
    };
    if r_base < 2 || Rational::from(&strategy_beta * r_base) < 1 {
        return Err(bad("params.R", "R must be >= 1/β"));
    }

    let s = scalar("params.s", &config.params.s, prec)?;
    let t = config
        .params
        .t
        .as_deref()
        .map(|t| scalar("params.t", t, prec))
        .transpose()?;

    let r0 = scalar("start.radius", &config.start.radius, prec)?;
    if !r0.is_positive() {
        return Err(bad("start.radius", "must be positive"));
    }
    let ell = match &config.params.ell {
        Some(text) => scalar("params.ell", text, prec)?,
        None => r0.mul(&Scalar::from_i64(2, 64), prec + 1, Rounding::Nearest),
    };
    if config.alice.strategy != AliceKind::Idle && config.params.ell.is_some() {
        let two_r0 = r0.to_rational() * 2u32;
        if ell.to_rational() != two_r0 {
            return Err(bad("params.ell", "the trigger strategy uses ell = 2 r_0"));
        }
    }
    let (epsilon, calibrate) = match config.params.epsilon.trim() {
        "calibrate" => (Scalar::parse("2^-40", prec).expect("literal"), true),
        text => (scalar("params.epsilon", text, prec)?, false),
    };
    if config.params.q_cap == 0 || config.params.q_certify == 0 {
        return Err(bad("params.q_cap", "denominator bounds must be positive"));
    }
    let r_scalar = Scalar::from_i64(r_base as i64, 64);
    let q_cap = config.params.q_cap;
    let same = |p: &&Params| {
        let t_ok = match &t {
            Some(t) => p.t().to_rational() == t.to_rational(),
            None => p.t().to_rational() == 1 - s.to_rational(),
        };
        t_ok && p.s() == &s
            && p.epsilon() == &epsilon
            && p.ell() == &ell
            && p.r_base() == &r_scalar
            && p.q_cap() == q_cap
            && p.precision() == prec
    };
    let params = match (known.iter().find(same), t) {
        (Some(p), _) => Ok(p.clone()),
        (None, Some(t)) => Params::with_weights(s, t, epsilon, ell, r_scalar, q_cap, prec),
        (None, None) => Params::new(s, epsilon, ell, r_scalar, q_cap, prec),
    }
    .map_err(|e| bad("params", e.to_string()))?;

    let r_stop = scalar("run.r_stop", &config.run.r_stop, prec)?;
    if !r_stop.is_positive() {
        return Err(bad("run.r_stop", "must be positive"));
    }
    if config.run.n_max == 0 {
        return Err(bad("run.n_max", "must be positive"));
    }
    let horizon = Horizon {
        r_stop: r_stop.clone(),
        n_max: config.run.n_max,
    };
    let k_max = config
        .alice
        .k_max
        .unwrap_or_else(|| default_k_max(&r0, &r_stop, r_base));

    let target = match (config.bob.strategy, config.bob.target) {
        (BobKind::Target, Some([p, r, q])) if q > 0 => Some(RatPoint::new(p, r, q as u64)),
        (BobKind::Target, _) => return Err(bad("bob.target", "target strategy needs [p, r, q] with q > 0")),
        (_, Some([_, _, q])) if q <= 0 => return Err(bad("bob.target", "q must be positive")),
        (_, t) => t.map(|[p, r, q]| RatPoint::new(p, r, q as u64)),
    };
    if config.bob.strategy == BobKind::Scripted && config.bob.script.is_none() {
        return Err(bad("bob.script", "scripted strategy needs a script path"));
    }

    let center = match &config.start.center {
        CenterSpec::Point([x, y]) => Point2::new(scalar("start.center", x, prec)?, scalar("start.center", y, prec)?),
        CenterSpec::Named(n) if n == "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.run.seed, "start"));
            Point2::from_f64(rng.gen::<f64>(), rng.gen::<f64>(), prec)
        }
        CenterSpec::Named(n) if n == "target" => {
            let p = target.ok_or_else(|| bad("start.center", "\"target\" needs bob.target"))?;
            let quarter = r0.mul(&Scalar::from_ratio(1, 4, 8, Rounding::Nearest), prec, Rounding::Nearest);
            let eighth = r0.mul(&Scalar::from_ratio(1, 8, 8, Rounding::Nearest), prec, Rounding::Nearest);
            Point2::new(
                Scalar::from_rational(&p.x(), prec, Rounding::Nearest).add(&quarter, prec, Rounding::Nearest),
                Scalar::from_rational(&p.y(), prec, Rounding::Nearest).add(&eighth, prec, Rounding::Nearest),
            )
        }
        CenterSpec::Named(_) => return Err(bad("start.center", "\"random\", \"target\" or [x, y]")),
    };
    let b0 = Ball::new(center, r0.clone()).map_err(|e| bad("start", e.to_string()))?;

    Ok(MatchSetup {
        config: config.clone(),
        rules,
        inner_rules,
        params,
        epsilon_calibrated: !calibrate,
        r_base,
        r0,
        b0,
        horizon,
        precision: prec,
        k_max,
        q_certify: config.params.q_certify,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const SAMPLE: &str = r#"
[game]
kind = "potential"
beta = "0.2"
c = "1"

[params]
s = "1/2"
epsilon = "2^-40"
R = "auto"
q_cap = 100
q_certify = 100

[alice]
strategy = "trigger"

[bob]
strategy = "random"

[run]
seed = 7
"#;

    #[test]
    fn parse_and_round_trip() {
        let c = MatchConfig::parse(SAMPLE).unwrap();
        assert_eq!(MatchConfig::parse(&c.to_toml()).unwrap(), c);
        let s = prepare(&c).unwrap();
        assert_eq!(s.r_base, 301);
        assert_eq!(s.seed(), 7);
        assert_eq!(s.k_max, default_k_max(&s.r0, &s.horizon.r_stop, 301));
    }

    #[test]
    fn cross_field_validation() {
        let mut c = MatchConfig::parse(SAMPLE).unwrap();
        c.game.kind = GameKind::Absolute;
        c.game.beta = "0.4".into();
        assert!(prepare(&c).is_err());
        let mut c = MatchConfig::parse(SAMPLE).unwrap();
        c.params.r = "3".into();
        assert!(prepare(&c).is_err());
        let mut c = MatchConfig::parse(SAMPLE).unwrap();
        c.params.t = Some("0.6".into());
        assert!(prepare(&c).is_err());
        assert!(MatchConfig::parse("[game]\nkind = \"potential\"\nbogus = 1").is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, "bob"), derive_seed(1, "start"));
        assert_eq!(derive_seed(5, "bob"), derive_seed(5, "bob"));
    }
}

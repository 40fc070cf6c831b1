//! Weighted Diophantine approximation at bounded denominator: danger
//! rectangles `Δ_ε(P)`, truncated badness scores, certified ball checks,
//! rational enumeration, generation banding and ε calibration.

use std::fmt;
use std::sync::Arc;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{ball_meets_rect, min_width_slab, Ball, GeometryError, Point2, Rect, Slab};
use crate::scalar::{Cert3, Interval, Rounding, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiophantineError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid denominator range {0}..={1}")]
    InvalidRange(u64, u64),
    #[error("empty calibration grid")]
    EmptyGrid,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Rational point `(p/q, r/q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RatPoint {
    pub p: i64,
    pub r: i64,
    pub q: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RatPoint {
    pub fn new(p: i64, r: i64, q: u64) -> Self {
        assert!(q > 0, "denominator must be positive");
        RatPoint { p, r, q }
    }

    /// The reduced representative with `gcd(p, r, q) = 1`.
    pub fn canonical(self) -> Self {
        let g = gcd(gcd(self.p.unsigned_abs(), self.r.unsigned_abs()), self.q);
        RatPoint {
            p: self.p / g as i64,
            r: self.r / g as i64,
            q: self.q / g,
        }
    }

    pub fn is_canonical(&self) -> bool {
        gcd(gcd(self.p.unsigned_abs(), self.r.unsigned_abs()), self.q) == 1
    }

    pub fn x(&self) -> Rational {
        Rational::from((self.p, self.q))
    }

    pub fn y(&self) -> Rational {
        Rational::from((self.r, self.q))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.p as f64 / self.q as f64, self.r as f64 / self.q as f64)
    }
}

impl fmt::Display for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}/{}, {}/{})", self.p, self.q, self.r, self.q)
    }
}

/// Enclosures of `q^s` and `q^t` for `1 <= q <= q_max`.
#[derive(Debug)]
pub struct PowerTable {
    s: Scalar,
    t: Scalar,
    prec: u32,
    qs: Vec<Interval>,
    qt: Vec<Interval>,
}

impl PowerTable {
    pub fn new(s: &Scalar, t: &Scalar, q_max: u64, prec: u32) -> Self {
        let (qs, qt) = (1..=q_max).map(|q| power_pair(s, t, q, prec)).unzip();
        PowerTable {
            s: s.clone(),
            t: t.clone(),
            prec,
            qs,
            qt,
        }
    }

    pub fn q_max(&self) -> u64 {
        self.qs.len() as u64
    }

    /// `(q^s, q^t)`, computed on demand beyond the table.
    pub fn get(&self, q: u64) -> (Interval, Interval) {
        match self.qs.get(q as usize - 1) {
            Some(a) => (a.clone(), self.qt[q as usize - 1].clone()),
            None => power_pair(&self.s, &self.t, q, self.prec),
        }
    }
}

fn power_pair(s: &Scalar, t: &Scalar, q: u64, prec: u32) -> (Interval, Interval) {
    let base = Interval::point(&Scalar::from_float(Float::with_val(64, q)));
    (base.pow(s, prec), base.pow(t, prec))
}

/// Per-denominator halfwidth enclosures and generations for a fixed ε.
#[derive(Debug)]
pub struct DangerTable {
    hx: Vec<Interval>,
    hy: Vec<Interval>,
    hx_f64: Vec<f64>,
    hy_f64: Vec<f64>,
    generation: Vec<u32>,
}

impl DangerTable {
    fn build(params: &Params) -> Self {
        let q_max = params.q_cap;
        let mut t = DangerTable {
            hx: Vec::with_capacity(q_max as usize),
            hy: Vec::with_capacity(q_max as usize),
            hx_f64: Vec::with_capacity(q_max as usize),
            hy_f64: Vec::with_capacity(q_max as usize),
            generation: Vec::with_capacity(q_max as usize),
        };
        for q in 1..=q_max {
            let (hx, hy) = params.compute_halfwidths(q);
            t.hx_f64.push(upper_f64(&hx));
            t.hy_f64.push(upper_f64(&hy));
            t.generation.push(params.compute_generation(&hx, &hy));
            t.hx.push(hx);
            t.hy.push(hy);
        }
        t
    }

    /// Denominators `q <= q_cap` whose generation lies in `lo..=hi`.
    pub fn q_range_for_generations(&self, lo: u32, hi: u32) -> Option<(u64, u64)> {
        let first = self.generation.partition_point(|&g| g < lo);
        let end = self.generation.partition_point(|&g| g <= hi);
        (first < end).then(|| (first as u64 + 1, end as u64))
    }

    pub fn max_generation(&self) -> u32 {
        self.generation.last().copied().unwrap_or(1)
    }
}

fn upper_f64(i: &Interval) -> f64 {
    i.hi().to_f64() * (1.0 + 1e-12)
}

/// Target set parameters: exponents, ε, the scale `ℓ`, the ratio `R`, and
/// the denominator cap for enumeration.
#[derive(Clone)]
pub struct Params {
    s: Scalar,
    t: Scalar,
    epsilon: Scalar,
    ell: Scalar,
    r_base: Scalar,
    q_cap: u64,
    prec: u32,
    powers: Arc<PowerTable>,
    table: Arc<DangerTable>,
}

impl fmt::Debug for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Params")
            .field("s", &self.s)
            .field("t", &self.t)
            .field("epsilon", &self.epsilon)
            .field("ell", &self.ell)
            .field("R", &self.r_base)
            .field("q_cap", &self.q_cap)
            .field("prec", &self.prec)
            .finish()
    }
}

impl PartialEq for Params {
    fn eq(&self, o: &Self) -> bool {
        self.s == o.s
            && self.t == o.t
            && self.epsilon == o.epsilon
            && self.ell == o.ell
            && self.r_base == o.r_base
            && self.q_cap == o.q_cap
            && self.prec == o.prec
    }
}

impl Params {
    /// Builds parameters with `t = 1 - s`.
    pub fn new(
        s: Scalar,
        epsilon: Scalar,
        ell: Scalar,
        r_base: Scalar,
        q_cap: u64,
        prec: u32,
    ) -> Result<Self, DiophantineError> {
        let t = Scalar::one(prec + 2).sub(&s, s.precision().max(prec) + 2, Rounding::Nearest);
        Params::with_weights(s, t, epsilon, ell, r_base, q_cap, prec)
    }

    pub fn with_weights(
        s: Scalar,
        t: Scalar,
        epsilon: Scalar,
        ell: Scalar,
        r_base: Scalar,
        q_cap: u64,
        prec: u32,
    ) -> Result<Self, DiophantineError> {
        let bad = |m: &str| Err(DiophantineError::InvalidParams(m.to_string()));
        if !s.is_positive() || !t.is_positive() {
            return bad("s and t must be positive");
        }
        if s.to_rational() + t.to_rational() != 1 {
            return bad("s + t must equal 1");
        }
        if !epsilon.is_positive() {
            return bad("epsilon must be positive");
        }
        if !ell.is_positive() {
            return bad("ell must be positive");
        }
        if r_base.to_rational() <= 1 {
            return bad("R must exceed 1");
        }
        if q_cap == 0 {
            return bad("Q_cap must be at least 1");
        }
        let powers = Arc::new(PowerTable::new(&s, &t, q_cap, prec));
        Ok(Params::assemble(s, t, epsilon, ell, r_base, q_cap, prec, powers))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        s: Scalar,
        t: Scalar,
        epsilon: Scalar,
        ell: Scalar,
        r_base: Scalar,
        q_cap: u64,
        prec: u32,
        powers: Arc<PowerTable>,
    ) -> Self {
        let mut p = Params {
            s,
            t,
            epsilon,
            ell,
            r_base,
            q_cap,
            prec,
            powers,
            table: Arc::new(DangerTable {
                hx: vec![],
                hy: vec![],
                hx_f64: vec![],
                hy_f64: vec![],
                generation: vec![],
            }),
        };
        p.table = Arc::new(DangerTable::build(&p));
        p
    }

    /// Same parameters with a different ε; the power table is shared.
    pub fn with_epsilon(&self, epsilon: Scalar) -> Result<Self, DiophantineError> {
        if !epsilon.is_positive() {
            return Err(DiophantineError::InvalidParams("epsilon must be positive".into()));
        }
        Ok(Params::assemble(
            self.s.clone(),
            self.t.clone(),
            epsilon,
            self.ell.clone(),
            self.r_base.clone(),
            self.q_cap,
            self.prec,
            self.powers.clone(),
        ))
    }

    /// Same parameters with a different `ℓ`.
    pub fn with_ell(&self, ell: Scalar) -> Result<Self, DiophantineError> {
        if !ell.is_positive() {
            return Err(DiophantineError::InvalidParams("ell must be positive".into()));
        }
        Ok(Params::assemble(
            self.s.clone(),
            self.t.clone(),
            self.epsilon.clone(),
            ell,
            self.r_base.clone(),
            self.q_cap,
            self.prec,
            self.powers.clone(),
        ))
    }

    pub fn s(&self) -> &Scalar {
        &self.s
    }
    pub fn t(&self) -> &Scalar {
        &self.t
    }
    pub fn epsilon(&self) -> &Scalar {
        &self.epsilon
    }
    pub fn ell(&self) -> &Scalar {
        &self.ell
    }
    pub fn r_base(&self) -> &Scalar {
        &self.r_base
    }
    pub fn q_cap(&self) -> u64 {
        self.q_cap
    }
    pub fn precision(&self) -> u32 {
        self.prec
    }
    pub fn powers(&self) -> &PowerTable {
        &self.powers
    }
    pub fn table(&self) -> &DangerTable {
        &self.table
    }

    fn compute_halfwidths(&self, q: u64) -> (Interval, Interval) {
        let (qs, qt) = self.powers.get(q);
        let qi = Interval::from_i64(q as i64, 64);
        let eps = self.epsilon.interval();
        (
            eps.div(&qi.mul(&qs, self.prec), self.prec),
            eps.div(&qi.mul(&qt, self.prec), self.prec),
        )
    }

    /// Halfwidth enclosures `(ε/q^{1+s}, ε/q^{1+t})`.
    pub fn halfwidths(&self, q: u64) -> (Interval, Interval) {
        match self.table.hx.get(q as usize - 1) {
            Some(hx) => (hx.clone(), self.table.hy[q as usize - 1].clone()),
            None => self.compute_halfwidths(q),
        }
    }

    fn halfwidths_f64(&self, q: u64) -> (f64, f64) {
        match self.table.hx_f64.get(q as usize - 1) {
            Some(&hx) => (hx, self.table.hy_f64[q as usize - 1]),
            None => {
                let (hx, hy) = self.compute_halfwidths(q);
                (upper_f64(&hx), upper_f64(&hy))
            }
        }
    }

    /// `(ℓ/2)·R^{-n}`.
    pub fn band_edge(&self, n: u32) -> Interval {
        let half_ell = self.ell.interval().div(&Interval::from_i64(2, 64), self.prec);
        let rn = self.r_base.interval().powi(n, self.prec);
        half_ell.div(&rn, self.prec)
    }

    fn compute_generation(&self, hx: &Interval, hy: &Interval) -> u32 {
        let h = hx.max(hy);
        let ratio = self.ell.to_f64() / (2.0 * h.mid_f64());
        let est = (ratio.ln() / self.r_base.to_f64().ln()).floor();
        let mut n = if est.is_finite() && est >= 1.0 { est as u32 } else { 1 };
        while n > 1 && h.le(&self.band_edge(n)) != Cert3::Yes {
            n -= 1;
        }
        while h.le(&self.band_edge(n + 1)) == Cert3::Yes {
            n += 1;
        }
        n
    }

    /// Class index: 1 when `ε/q^{1+s} >= ε/q^{1+t}`, otherwise 2.
    pub fn delta_class(&self, q: u64) -> u8 {
        if q == 1 || self.s.to_rational() <= self.t.to_rational() {
            1
        } else {
            2
        }
    }
}

/// Outward enclosure of `Δ_ε(P)` as an exactly representable rectangle:
/// the center is `P` rounded to the working precision and each halfwidth
/// absorbs the rounding error.
pub fn delta_rect(p: &RatPoint, params: &Params) -> Rect {
    let prec = params.prec;
    let (hx, hy) = params.halfwidths(p.q);
    let coord = |v: Rational, h: &Interval| {
        let c = Scalar::from_rational(&v, prec, Rounding::Nearest);
        let err = (&v - c.to_rational()).abs();
        let err = Float::with_val_round(prec, &err, rug::float::Round::Up).0;
        let w = Float::with_val_round(prec, h.hi() + err, rug::float::Round::Up).0;
        (c, Scalar::from_float(w))
    };
    let (cx, wx) = coord(p.x(), &hx);
    let (cy, wy) = coord(p.y(), &hy);
    Rect::new(Point2::new(cx, cy), wx, wy).expect("positive halfwidths")
}

/// `B ⊂ Δ_ε(P)`, evaluated against the exact rational center.
pub fn ball_in_delta(ball: &Ball, p: &RatPoint, params: &Params, prec: u32) -> Cert3 {
    let (hx, hy) = params.halfwidths(p.q);
    let r = ball.radius().interval();
    let side = |c: &Scalar, v: Rational, h: &Interval| {
        c.interval()
            .sub(&Interval::from_rational(&v, prec), prec)
            .abs()
            .add(&r, prec)
            .le(h)
    };
    side(&ball.center().x, p.x(), &hx).and(side(&ball.center().y, p.y(), &hy))
}

/// Truncated badness and the denominator attaining it.
#[derive(Debug, Clone)]
pub struct BadnessReport {
    pub score: Interval,
    pub minimizer: u64,
}

/// Enclosure of `min_{1<=q<=Q} max(q^s‖qx‖, q^t‖qy‖)`.
pub fn badness_score(x: &Scalar, y: &Scalar, q_max: u64, params: &Params) -> BadnessReport {
    assert!(q_max >= 1, "Q must be at least 1");
    let prec = params.prec;
    let (xi, yi) = (x.interval(), y.interval());
    let mut best: Option<(Interval, u64)> = None;
    for q in 1..=q_max {
        let (qs, qt) = params.powers.get(q);
        let qi = Interval::from_i64(q as i64, 64);
        let a = qs.mul(&xi.mul(&qi, prec).dist_nearest_int(prec), prec);
        let b = qt.mul(&yi.mul(&qi, prec).dist_nearest_int(prec), prec);
        let v = a.max(&b);
        best = Some(match best {
            None => (v, q),
            Some((cur, arg)) => {
                let arg = if v.hi() < cur.hi() { q } else { arg };
                (cur.min(&v), arg)
            }
        });
    }
    let (score, minimizer) = best.expect("nonempty range");
    BadnessReport { score, minimizer }
}

/// Outcome of checking a ball against every `Δ_ε(P)` with `q <= Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertReport {
    pub pass: bool,
    pub epsilon: Scalar,
    pub q_max: u64,
    pub ball: Ball,
    pub witness: Option<RatPoint>,
}

impl CertReport {
    pub fn text(&self) -> String {
        let (x, y) = self.ball.center().to_f64();
        let mut out = format!(
            "ball: center ({x:.17e}, {y:.17e}) radius {:.6e}\nQ: {}\nepsilon: {}\n",
            self.ball.radius().to_f64(),
            self.q_max,
            self.epsilon
        );
        match (&self.witness, self.pass) {
            (_, true) => out.push_str(&format!(
                "result: PASS\nbound: for all z in the ball, min_{{q<={}}} max(q^s||q z_1||, q^t||q z_2||) > {}\n",
                self.q_max, self.epsilon
            )),
            (Some(w), false) => out.push_str(&format!("result: FAIL\nwitness: {w} (q = {})\n", w.q)),
            (None, false) => out.push_str("result: FAIL\n"),
        }
        out
    }

    pub fn record(&self) -> serde_json::Value {
        serde_json::json!({
            "pass": self.pass,
            "epsilon": self.epsilon.serialize(),
            "Q": self.q_max,
            "witness": self.witness.map(|w| [w.p, w.r, w.q as i64]),
        })
    }
}

/// Visits every representative `(p, r, q)` with `q` in range whose outward
/// rectangle is not certified disjoint from `region` (YES or UNKNOWN), in
/// `(q, p, r)` order. Stops early if `visit` returns `false`.
fn scan(
    region: &Ball,
    q_lo: u64,
    q_hi: u64,
    params: &Params,
    canonical_only: bool,
    mut visit: impl FnMut(RatPoint) -> bool,
) {
    let (cx, cy) = region.center().to_f64();
    let rad = region.radius().to_f64();
    for q in q_lo..=q_hi {
        let (hx, hy) = params.halfwidths_f64(q);
        let qf = q as f64;
        // Far above the f64 error of the products below.
        let slop = 1e-9 * (1.0 + qf * (cx.abs() + cy.abs() + rad + hx + hy));
        let p_lo = (qf * (cx - rad - hx) - slop).ceil() as i64;
        let p_hi = (qf * (cx + rad + hx) + slop).floor() as i64;
        let r_lo = (qf * (cy - rad - hy) - slop).ceil() as i64;
        let r_hi = (qf * (cy + rad + hy) + slop).floor() as i64;
        for p in p_lo..=p_hi {
            for r in r_lo..=r_hi {
                let pt = RatPoint { p, r, q };
                if canonical_only && !pt.is_canonical() {
                    continue;
                }
                let rect = delta_rect(&pt, params);
                if ball_meets_rect(region, &rect, params.prec) != Cert3::No && !visit(pt) {
                    return;
                }
            }
        }
    }
}

/// Canonical rational points with `q_lo <= q <= q_hi` whose danger
/// rectangle meets `region`, sorted by `(q, p, r)`.
pub fn enumerate_dangerous(
    region: &Ball,
    q_lo: u64,
    q_hi: u64,
    params: &Params,
) -> Result<Vec<RatPoint>, DiophantineError> {
    if q_lo < 1 || q_lo > q_hi || q_hi > params.q_cap {
        return Err(DiophantineError::InvalidRange(q_lo, q_hi));
    }
    let mut out = Vec::new();
    scan(region, q_lo, q_hi, params, true, |p| {
        out.push(p);
        true
    });
    Ok(out)
}

/// Checks `region` against every representative with `q <= Q`, canonical
/// or not, and reports the first violation.
pub fn certify_ball(region: &Ball, q_max: u64, params: &Params) -> CertReport {
    let mut witness = None;
    scan(region, 1, q_max.max(1), params, false, |p| {
        witness = Some(p);
        false
    });
    CertReport {
        pass: witness.is_none(),
        epsilon: params.epsilon.clone(),
        q_max,
        ball: region.clone(),
        witness,
    }
}

/// Generation index of `P`: the `n >= 1` with
/// `(ℓ/2)R^{-(n+1)} < ε q^{-(1+min(s,t))} <= (ℓ/2)R^{-n}`, clamped to 1.
pub fn generation(p: &RatPoint, params: &Params) -> u32 {
    match params.table.generation.get(p.q as usize - 1) {
        Some(&g) => g,
        None => {
            let (hx, hy) = params.compute_halfwidths(p.q);
            params.compute_generation(&hx, &hy)
        }
    }
}

/// `B ∈ 𝓑_m` up to `Q_cap`: no danger rectangle of generation `<= m` meets
/// the ball. The radius condition is the caller's responsibility.
pub fn in_b_m(ball: &Ball, m: u32, params: &Params) -> bool {
    first_blocker(ball, m, params).is_none()
}

/// A canonical point of generation `<= m` whose rectangle meets the ball.
pub fn first_blocker(ball: &Ball, m: u32, params: &Params) -> Option<RatPoint> {
    if m == 0 {
        return None;
    }
    let (lo, hi) = params.table.q_range_for_generations(1, m)?;
    let mut found = None;
    scan(ball, lo, hi, params, true, |p| {
        found = Some(p);
        false
    });
    found
}

/// Dangerous rectangles meeting `ball`, grouped by generation in `lo..=hi`
/// and class: entry `[n - lo][δ - 1]`.
pub fn dangerous_by_class(ball: &Ball, lo: u32, hi: u32, params: &Params) -> Vec<[Vec<RatPoint>; 2]> {
    let mut out: Vec<[Vec<RatPoint>; 2]> = (lo..=hi).map(|_| [Vec::new(), Vec::new()]).collect();
    if let Some((q_lo, q_hi)) = params.table.q_range_for_generations(lo, hi) {
        scan(ball, q_lo, q_hi, params, true, |p| {
            let n = generation(&p, params);
            let d = params.delta_class(p.q);
            out[(n - lo) as usize][d as usize - 1].push(p);
            true
        });
    }
    out
}

/// One calibration probe: a ball of radius `R^{-m}ℓ/2` and the class depth `k`.
#[derive(Debug, Clone)]
pub struct Probe {
    pub ball: Ball,
    pub m: u32,
    pub k: u32,
}

/// A class whose fitted slab is wider than `(1/3)ℓR^{-n}`.
#[derive(Debug, Clone)]
pub struct ClassViolation {
    pub probe: usize,
    pub generation: u32,
    pub delta: u8,
    pub rects: usize,
    pub fitted_halfwidth: f64,
    pub bound: f64,
}

#[derive(Debug, Clone)]
pub struct CalibrationReport {
    pub epsilon: Scalar,
    pub passed: bool,
    /// Probes skipped because their ball is not in `𝓑_m`.
    pub skipped: usize,
    pub violations: Vec<ClassViolation>,
}

/// `(1/3)ℓR^{-n}`.
pub fn lemma_bound(params: &Params, n: u32) -> Interval {
    let prec = params.prec;
    params
        .band_edge(n)
        .mul(&Interval::from_i64(2, 64), prec)
        .div(&Interval::from_i64(3, 64), prec)
}

/// `(δ, points, fitted slab, fitted halfwidth certified within the bound)`.
pub type ClassFit = (u8, Vec<RatPoint>, Slab, bool);

/// Slab fits for the generation-`n` classes meeting `ball`.
pub fn class_fits(ball: &Ball, n: u32, params: &Params) -> Result<Vec<ClassFit>, DiophantineError> {
    let classes = dangerous_by_class(ball, n, n, params).pop().unwrap_or_default();
    let bound = lemma_bound(params, n);
    let mut out = Vec::new();
    for (i, pts) in classes.into_iter().enumerate() {
        if pts.is_empty() {
            continue;
        }
        let rects: Vec<Rect> = pts.iter().map(|p| delta_rect(p, params)).collect();
        let slab = min_width_slab(&rects, params.prec)?;
        let ok = slab.halfwidth().interval().le(&bound) == Cert3::Yes;
        out.push((i as u8 + 1, pts, slab, ok));
    }
    Ok(out)
}

/// Largest grid ε for which every probe in `𝓑_m` has all its
/// generation-`(m+k)` classes slab-fittable within `(1/3)ℓR^{-(m+k)}`.
/// Falls back to the smallest grid value with `passed = false`.
pub fn calibrate_epsilon(
    corpus: &[Probe],
    params: &Params,
    grid: &[Scalar],
) -> Result<CalibrationReport, DiophantineError> {
    if grid.is_empty() {
        return Err(DiophantineError::EmptyGrid);
    }
    let mut last = None;
    for eps in grid {
        let p = params.with_epsilon(eps.clone())?;
        let mut report = CalibrationReport {
            epsilon: eps.clone(),
            passed: true,
            skipped: 0,
            violations: Vec::new(),
        };
        for (i, probe) in corpus.iter().enumerate() {
            if !in_b_m(&probe.ball, probe.m, &p) {
                report.skipped += 1;
                continue;
            }
            let n = probe.m + probe.k;
            for (delta, pts, slab, ok) in class_fits(&probe.ball, n, &p)? {
                if !ok {
                    report.passed = false;
                    report.violations.push(ClassViolation {
                        probe: i,
                        generation: n,
                        delta,
                        rects: pts.len(),
                        fitted_halfwidth: slab.halfwidth().to_f64(),
                        bound: lemma_bound(&p, n).mid_f64(),
                    });
                }
            }
        }
        if report.passed {
            return Ok(report);
        }
        last = Some(report);
    }
    Ok(last.expect("nonempty grid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn sc(v: &str) -> Scalar {
        Scalar::parse(v, P).unwrap()
    }

    fn params(s: &str, eps: &str) -> Params {
        Params::new(sc(s), sc(eps), sc("2"), sc("10"), 200, P).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(Params::with_weights(sc("0.5"), sc("0.6"), sc("0.1"), sc("2"), sc("10"), 10, P).is_err());
        assert!(Params::new(sc("0"), sc("0.1"), sc("2"), sc("10"), 10, P).is_err());
        assert!(Params::new(sc("0.5"), sc("0.1"), sc("2"), sc("1"), 10, P).is_err());
        let p = Params::new(sc("2/3"), sc("0.1"), sc("2"), sc("10"), 10, P).unwrap();
        assert_eq!(p.s().to_rational() + p.t().to_rational(), 1);
    }

    #[test]
    fn delta_rect_examples() {
        let p = params("0.5", "0.1");
        let r = delta_rect(&RatPoint::new(0, 0, 1), &p);
        assert!((r.halfwidth_x().to_f64() - 0.1).abs() < 1e-60);
        let r = delta_rect(&RatPoint::new(1, 1, 2), &p);
        let expect = 0.1 / 2f64.powf(1.5);
        assert!((r.halfwidth_x().to_f64() - expect).abs() < 1e-15);
        assert_eq!(r.center().to_f64(), (0.5, 0.5));
        let p = params("0.9", "0.1");
        let r = delta_rect(&RatPoint::new(1, 1, 4), &p);
        assert!((r.halfwidth_x().to_f64() - 0.1 / 4f64.powf(1.9)).abs() < 1e-15);
        assert!((r.halfwidth_y().to_f64() - 0.1 / 4f64.powf(1.1)).abs() < 1e-15);
        assert!(r.halfwidth_x().to_f64() < r.halfwidth_y().to_f64());
    }

    #[test]
    fn badness_examples() {
        let p = params("0.5", "0.1");
        let half = sc("0.5");
        let b = badness_score(&half, &half, 2, &p);
        assert!(b.score.contains(&Float::with_val(P, 0)) && b.score.is_point());
        assert_eq!(b.minimizer, 2);
        let z = sc("0");
        assert!(badness_score(&z, &z, 17, &p).score.is_point());
    }

    #[test]
    fn certify_examples() {
        let p = params("0.5", "0.1");
        let b = Ball::new(Point2::new(sc("0.5"), sc("0.5")), sc("0.001")).unwrap();
        let rep = certify_ball(&b, 5, &p);
        assert!(!rep.pass);
        assert_eq!(rep.witness, Some(RatPoint::new(1, 1, 2)));
        assert!(rep.text().contains("FAIL"));
        let far = Ball::new(Point2::new(sc("0.5"), sc("0.5")), sc("0.01")).unwrap();
        assert!(certify_ball(&far, 1, &p).pass);
    }

    #[test]
    fn enumeration_examples() {
        let p = params("0.5", "0.1");
        let b = Ball::new(Point2::new(sc("0"), sc("0")), sc("0.001")).unwrap();
        assert_eq!(enumerate_dangerous(&b, 1, 1, &p).unwrap(), vec![RatPoint::new(0, 0, 1)]);
        let far = Ball::new(Point2::new(sc("0.5"), sc("0.5")), sc("0.01")).unwrap();
        assert!(enumerate_dangerous(&far, 1, 1, &p).unwrap().is_empty());
        assert!(enumerate_dangerous(&b, 0, 3, &p).is_err());
        assert!(enumerate_dangerous(&b, 4, 3, &p).is_err());
        assert!(enumerate_dangerous(&b, 1, 201, &p).is_err());
    }

    #[test]
    fn generation_examples() {
        let p = params("0.5", "0.1");
        assert_eq!(generation(&RatPoint::new(0, 0, 1), &p), 1);
        assert_eq!(generation(&RatPoint::new(1, 3, 10), &p), 2);
        let mut prev = 1;
        for q in 1..=200 {
            let g = generation(&RatPoint::new(0, 0, q), &p);
            assert!(g >= prev);
            prev = g;
        }
    }

    #[test]
    fn calibration_examples() {
        let p = params("0.5", "0.1");
        assert_eq!(
            calibrate_epsilon(&[], &p, &[]).unwrap_err(),
            DiophantineError::EmptyGrid
        );
        let probe = Probe {
            ball: Ball::new(Point2::new(sc("0.3"), sc("0.3")), sc("1")).unwrap(),
            m: 0,
            k: 1,
        };
        let rep = calibrate_epsilon(&[probe], &p, &[sc("1e-9")]).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.epsilon, sc("1e-9"));
    }
}

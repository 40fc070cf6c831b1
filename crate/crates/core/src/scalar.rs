//! Arbitrary-precision scalars, outward-rounded intervals and three-valued
//! certificates.
//!
//! A [`Scalar`] is an exact binary floating-point value carrying its own
//! precision. Every derived real quantity is computed as an [`Interval`]
//! whose endpoints are rounded outward, so a comparison between intervals
//! either certifies an answer ([`Cert3::Yes`] / [`Cert3::No`]) or admits that
//! the margin is below the working precision ([`Cert3::Unknown`]).

use std::fmt;

use rug::float::Round;
use rug::ops::{MulAssignRound, Pow};
use rug::{Float, Integer, Rational};
use thiserror::Error;

/// Working precision used when nothing else is configured.
pub const DEFAULT_PRECISION: u32 = 256;
/// Ceiling for automatic precision escalation.
pub const MAX_PRECISION: u32 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("cannot parse scalar from {0:?}")]
    Parse(String),
    #[error("precision {0} outside 2..={MAX_PRECISION}")]
    Precision(u32),
    #[error("scalar is not finite")]
    NotFinite,
}

/// Rounding direction for operations that produce a [`Scalar`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Nearest,
    Down,
    Up,
}

impl From<Rounding> for Round {
    fn from(r: Rounding) -> Round {
        match r {
            Rounding::Nearest => Round::Nearest,
            Rounding::Down => Round::Down,
            Rounding::Up => Round::Up,
        }
    }
}

fn check_precision(prec: u32) -> Result<(), ScalarError> {
    if (2..=MAX_PRECISION).contains(&prec) {
        Ok(())
    } else {
        Err(ScalarError::Precision(prec))
    }
}

/// An exact binary float with an explicit precision.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Scalar(Float);

impl Scalar {
    pub fn from_float(f: Float) -> Self {
        debug_assert!(f.is_finite());
        Scalar(f)
    }

    /// Exact whenever `prec >= 53`.
    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "non-finite scalar");
        Scalar(Float::with_val(prec, v))
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Scalar(Float::with_val(prec, v))
    }

    pub fn zero(prec: u32) -> Self {
        Scalar(Float::with_val(prec, 0))
    }

    pub fn one(prec: u32) -> Self {
        Scalar(Float::with_val(prec, 1))
    }

    pub fn from_rational(q: &Rational, prec: u32, rounding: Rounding) -> Self {
        Scalar(Float::with_val_round(prec, q, rounding.into()).0)
    }

    pub fn from_ratio(num: i64, den: i64, prec: u32, rounding: Rounding) -> Self {
        Self::from_rational(&Rational::from((num, den)), prec, rounding)
    }

    /// Parses user-facing text: a decimal (`0.25`, `1e-8`), a fraction
    /// (`2/3`) or a power of two (`2^-30`). Rounds to nearest.
    pub fn parse(text: &str, prec: u32) -> Result<Self, ScalarError> {
        check_precision(prec)?;
        let q = parse_rational(text)?;
        Ok(Self::from_rational(&q, prec, Rounding::Nearest))
    }

    /// Serialized form `"<precision>:<decimal>"`; the decimal has enough
    /// digits to reproduce the binary value exactly.
    pub fn serialize(&self) -> String {
        format!("{}:{}", self.0.prec(), self.0.to_string_radix(10, None))
    }

    pub fn deserialize(text: &str) -> Result<Self, ScalarError> {
        let (prec, digits) = text
            .split_once(':')
            .ok_or_else(|| ScalarError::Parse(text.to_string()))?;
        let prec: u32 = prec.parse().map_err(|_| ScalarError::Parse(text.to_string()))?;
        check_precision(prec)?;
        let parsed = Float::parse(digits).map_err(|_| ScalarError::Parse(text.to_string()))?;
        let f = Float::with_val(prec, parsed);
        if !f.is_finite() {
            return Err(ScalarError::NotFinite);
        }
        Ok(Scalar(f))
    }

    pub fn precision(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Exact conversion.
    pub fn to_rational(&self) -> Rational {
        self.0.to_rational().expect("finite scalar")
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn neg(&self) -> Scalar {
        Scalar(Float::with_val(self.0.prec(), -&self.0))
    }

    pub fn round_to(&self, prec: u32, rounding: Rounding) -> Scalar {
        Scalar(Float::with_val_round(prec, &self.0, rounding.into()).0)
    }

    pub fn add(&self, o: &Scalar, prec: u32, r: Rounding) -> Scalar {
        Scalar(Float::with_val_round(prec, &self.0 + &o.0, r.into()).0)
    }

    pub fn sub(&self, o: &Scalar, prec: u32, r: Rounding) -> Scalar {
        Scalar(Float::with_val_round(prec, &self.0 - &o.0, r.into()).0)
    }

    pub fn mul(&self, o: &Scalar, prec: u32, r: Rounding) -> Scalar {
        Scalar(Float::with_val_round(prec, &self.0 * &o.0, r.into()).0)
    }

    pub fn div(&self, o: &Scalar, prec: u32, r: Rounding) -> Scalar {
        Scalar(Float::with_val_round(prec, &self.0 / &o.0, r.into()).0)
    }

    /// Product computed without rounding (precision is the sum of both).
    pub fn mul_exact(&self, o: &Scalar) -> Scalar {
        let prec = (self.precision() + o.precision()).min(rug::float::prec_max());
        Scalar(Float::with_val(prec, &self.0 * &o.0))
    }

    pub fn interval(&self) -> Interval {
        Interval::point(self)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self.0.to_string_radix(10, Some(20)))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_string_radix(10, Some(17)))
    }
}

/// Parses `a/b`, `2^k`, `k` or decimal/scientific text into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, ScalarError> {
    let t = text.trim();
    let err = || ScalarError::Parse(text.to_string());
    if let Some((num, den)) = t.split_once('/') {
        let n = parse_rational(num)?;
        let d = parse_rational(den)?;
        if d == 0 {
            return Err(err());
        }
        return Ok(n / d);
    }
    if let Some((base, exp)) = t.split_once('^') {
        let b = parse_rational(base)?;
        let e: i32 = exp.trim().parse().map_err(|_| err())?;
        let mut acc = Rational::from(1);
        for _ in 0..e.unsigned_abs() {
            acc *= &b;
        }
        if e < 0 {
            if acc == 0 {
                return Err(err());
            }
            acc = Rational::from(1) / acc;
        }
        return Ok(acc);
    }
    parse_decimal(t).ok_or_else(err)
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from(Integer::from_str_radix(&digits, 10).ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Integer::from(10).pow(scale.unsigned_abs());
    if scale >= 0 {
        value *= Rational::from(ten);
    } else {
        value /= Rational::from(ten);
    }
    if neg {
        value = -value;
    }
    Some(value)
}

/// Three-valued certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Cert3 {
    Yes,
    No,
    Unknown,
}

impl Cert3 {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Cert3::Yes
        } else {
            Cert3::No
        }
    }

    pub fn and(self, o: Cert3) -> Self {
        match (self, o) {
            (Cert3::No, _) | (_, Cert3::No) => Cert3::No,
            (Cert3::Yes, Cert3::Yes) => Cert3::Yes,
            _ => Cert3::Unknown,
        }
    }

    pub fn or(self, o: Cert3) -> Self {
        !(!self).and(!o)
    }

    pub fn is_decided(self) -> bool {
        self != Cert3::Unknown
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Cert3::Yes => "YES",
            Cert3::No => "NO",
            Cert3::Unknown => "UNKNOWN",
        }
    }
}

impl std::ops::Not for Cert3 {
    type Output = Cert3;

    fn not(self) -> Cert3 {
        match self {
            Cert3::Yes => Cert3::No,
            Cert3::No => Cert3::Yes,
            Cert3::Unknown => Cert3::Unknown,
        }
    }
}

impl fmt::Display for Cert3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error returned when escalation reaches [`MAX_PRECISION`] without a decision.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("undecidable at precision {0}")]
pub struct Undecidable(pub u32);

/// Re-evaluates `f` at doubling precision until it returns a decided answer.
pub fn decide(start: u32, f: impl Fn(u32) -> Cert3) -> Result<Cert3, Undecidable> {
    let mut prec = start.clamp(2, MAX_PRECISION);
    loop {
        let c = f(prec);
        if c.is_decided() {
            return Ok(c);
        }
        if prec >= MAX_PRECISION {
            return Err(Undecidable(prec));
        }
        prec = (prec * 2).min(MAX_PRECISION);
    }
}

/// Closed interval `[lo, hi]` with outward-rounded endpoints.
#[derive(Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_string_radix(10, Some(20)),
            self.hi.to_string_radix(10, Some(20))
        )
    }
}

impl Interval {
    pub fn point(s: &Scalar) -> Self {
        Interval {
            lo: s.0.clone(),
            hi: s.0.clone(),
        }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        let f = Float::with_val(prec.max(64), v);
        Interval { lo: f.clone(), hi: f }
    }

    pub fn from_f64(v: f64) -> Self {
        let f = Float::with_val(53, v);
        Interval { lo: f.clone(), hi: f }
    }

    /// Enclosure of an exact rational.
    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Interval {
            lo: Float::with_val_round(prec, q, Round::Down).0,
            hi: Float::with_val_round(prec, q, Round::Up).0,
        }
    }

    pub fn from_bounds(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn zero() -> Self {
        Interval::from_i64(0, 64)
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn lo_scalar(&self) -> Scalar {
        Scalar(self.lo.clone())
    }

    pub fn hi_scalar(&self) -> Scalar {
        Scalar(self.hi.clone())
    }

    pub fn mid(&self, prec: u32) -> Float {
        let mut m = Float::with_val(prec, &self.lo + &self.hi);
        m /= 2;
        m
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid(64).to_f64()
    }

    pub fn width(&self, prec: u32) -> Float {
        Float::with_val_round(prec, &self.hi - &self.lo, Round::Up).0
    }

    pub fn contains(&self, x: &Float) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn overlaps(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: Float::with_val(self.hi.prec(), -&self.hi),
            hi: Float::with_val(self.lo.prec(), -&self.lo),
        }
    }

    pub fn add(&self, o: &Interval, prec: u32) -> Interval {
        Interval {
            lo: Float::with_val_round(prec, &self.lo + &o.lo, Round::Down).0,
            hi: Float::with_val_round(prec, &self.hi + &o.hi, Round::Up).0,
        }
    }

    pub fn sub(&self, o: &Interval, prec: u32) -> Interval {
        Interval {
            lo: Float::with_val_round(prec, &self.lo - &o.hi, Round::Down).0,
            hi: Float::with_val_round(prec, &self.hi - &o.lo, Round::Up).0,
        }
    }

    pub fn mul(&self, o: &Interval, prec: u32) -> Interval {
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let d = Float::with_val_round(prec, a * b, Round::Down).0;
            let u = Float::with_val_round(prec, a * b, Round::Up).0;
            lo = Some(match lo {
                Some(l) if l <= d => l,
                _ => d,
            });
            hi = Some(match hi {
                Some(h) if h >= u => h,
                _ => u,
            });
        }
        Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    /// Multiplication by a nonnegative interval, cheaper than [`Interval::mul`].
    pub fn mul_nonneg(&self, o: &Interval, prec: u32) -> Interval {
        debug_assert!(o.lo >= 0 && self.lo >= 0);
        Interval {
            lo: Float::with_val_round(prec, &self.lo * &o.lo, Round::Down).0,
            hi: Float::with_val_round(prec, &self.hi * &o.hi, Round::Up).0,
        }
    }

    /// Division by an interval that excludes zero.
    pub fn div(&self, o: &Interval, prec: u32) -> Interval {
        assert!(o.lo > 0 || o.hi < 0, "division by interval containing zero");
        let quads = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in quads {
            let d = Float::with_val_round(prec, a / b, Round::Down).0;
            let u = Float::with_val_round(prec, a / b, Round::Up).0;
            lo = Some(match lo {
                Some(l) if l <= d => l,
                _ => d,
            });
            hi = Some(match hi {
                Some(h) if h >= u => h,
                _ => u,
            });
        }
        Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            let nlo = Float::with_val(self.lo.prec(), -&self.lo);
            let hi = if nlo > self.hi { nlo } else { self.hi.clone() };
            Interval {
                lo: Float::with_val(2, 0),
                hi,
            }
        }
    }

    pub fn square(&self, prec: u32) -> Interval {
        let a = self.abs();
        Interval {
            lo: Float::with_val_round(prec, a.lo.square_ref(), Round::Down).0,
            hi: Float::with_val_round(prec, a.hi.square_ref(), Round::Up).0,
        }
    }

    /// Square root; negative parts of the interval are clamped to zero.
    pub fn sqrt(&self, prec: u32) -> Interval {
        let zero = Float::with_val(2, 0);
        let lo = if self.lo < 0 { zero.clone() } else { self.lo.clone() };
        let hi = if self.hi < 0 { zero } else { self.hi.clone() };
        Interval {
            lo: Float::with_val_round(prec, lo.sqrt_ref(), Round::Down).0,
            hi: Float::with_val_round(prec, hi.sqrt_ref(), Round::Up).0,
        }
    }

    pub fn exp(&self, prec: u32) -> Interval {
        Interval {
            lo: Float::with_val_round(prec, self.lo.exp_ref(), Round::Down).0,
            hi: Float::with_val_round(prec, self.hi.exp_ref(), Round::Up).0,
        }
    }

    /// Natural logarithm of a strictly positive interval.
    pub fn ln(&self, prec: u32) -> Interval {
        assert!(self.lo > 0, "ln of nonpositive interval");
        Interval {
            lo: Float::with_val_round(prec, self.lo.ln_ref(), Round::Down).0,
            hi: Float::with_val_round(prec, self.hi.ln_ref(), Round::Up).0,
        }
    }

    /// Power with a natural exponent, exact whenever the result fits `prec`.
    pub fn powi(&self, e: u32, prec: u32) -> Interval {
        if e == 0 {
            return Interval::from_i64(1, prec);
        }
        let base = if e.is_multiple_of(2) { self.abs() } else { self.clone() };
        Interval {
            lo: Float::with_val_round(prec, (&base.lo).pow(e), Round::Down).0,
            hi: Float::with_val_round(prec, (&base.hi).pow(e), Round::Up).0,
        }
    }

    /// `self^c` for a positive base; integral exponents use exact powers.
    pub fn pow(&self, c: &Scalar, prec: u32) -> Interval {
        if c.0.is_integer() && c.0 >= 0 && c.0 <= 64 {
            let e = c.0.to_u32_saturating().unwrap_or(0);
            return self.powi(e, prec);
        }
        assert!(self.lo > 0, "fractional power of nonpositive interval");
        self.ln(prec + 16).mul(&Interval::point(c), prec + 16).exp(prec)
    }

    /// Multiplies by an integer exactly at `prec` when possible.
    pub fn scale_i64(&self, k: i64, prec: u32) -> Interval {
        let ki = Interval::from_i64(k, 64);
        self.mul(&ki, prec)
    }

    pub fn min(&self, o: &Interval) -> Interval {
        Interval {
            lo: if self.lo <= o.lo { self.lo.clone() } else { o.lo.clone() },
            hi: if self.hi <= o.hi { self.hi.clone() } else { o.hi.clone() },
        }
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval {
            lo: if self.lo >= o.lo { self.lo.clone() } else { o.lo.clone() },
            hi: if self.hi >= o.hi { self.hi.clone() } else { o.hi.clone() },
        }
    }

    pub fn clamp_nonneg(&self) -> Interval {
        let z = Float::with_val(2, 0);
        Interval {
            lo: if self.lo < 0 { z.clone() } else { self.lo.clone() },
            hi: if self.hi < 0 { z } else { self.hi.clone() },
        }
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        Interval {
            lo: if self.lo <= o.lo { self.lo.clone() } else { o.lo.clone() },
            hi: if self.hi >= o.hi { self.hi.clone() } else { o.hi.clone() },
        }
    }

    /// Certifies `self <= o`.
    pub fn le(&self, o: &Interval) -> Cert3 {
        if self.hi <= o.lo {
            Cert3::Yes
        } else if self.lo > o.hi {
            Cert3::No
        } else {
            Cert3::Unknown
        }
    }

    /// Certifies `self < o`.
    pub fn lt(&self, o: &Interval) -> Cert3 {
        if self.hi < o.lo {
            Cert3::Yes
        } else if self.lo >= o.hi {
            Cert3::No
        } else {
            Cert3::Unknown
        }
    }

    pub fn ge(&self, o: &Interval) -> Cert3 {
        o.le(self)
    }

    pub fn gt(&self, o: &Interval) -> Cert3 {
        o.lt(self)
    }

    /// Distance to the nearest integer, `‖x‖`, over the interval.
    pub fn dist_nearest_int(&self, prec: u32) -> Interval {
        let half = Float::with_val(2, 0.5);
        let zero = Float::with_val(2, 0);
        let wide = Float::with_val_round(prec, &self.hi - &self.lo, Round::Down).0;
        if wide >= 1 {
            return Interval { lo: zero, hi: half };
        }
        // ‖x‖ = min(x - n, n + 1 - x) on the cell [n, n + 1].
        let point = |x: &Float, round: Round| -> Float {
            let n = x.clone().floor();
            let a = Float::with_val_round(prec, x - &n, round).0;
            let n1 = Float::with_val(x.prec() + 64, &n + 1u32);
            let b = Float::with_val_round(prec, &n1 - x, round).0;
            if a <= b {
                a
            } else {
                b
            }
        };
        let n = self.lo.clone().floor();
        let wp = prec.max(self.lo.prec()).max(self.hi.prec()) + 4;
        let peaks = [Float::with_val(wp, &n + &half), Float::with_val(wp, &n + 1.5f64)];
        let hits_peak = peaks.iter().any(|p| self.contains(p));
        let hi = if hits_peak {
            half
        } else {
            let a = point(&self.lo, Round::Up);
            let b = point(&self.hi, Round::Up);
            if a >= b {
                a
            } else {
                b
            }
        };
        let crosses_int = self.hi.clone().floor() != n || self.lo.is_integer();
        let lo = if crosses_int {
            zero
        } else {
            let a = point(&self.lo, Round::Down);
            let b = point(&self.hi, Round::Down);
            if a <= b {
                a
            } else {
                b
            }
        };
        Interval { lo, hi }
    }
}

/// Multiplies a float by an integer with directed rounding.
pub fn mul_int(x: &Float, k: i64, prec: u32, r: Rounding) -> Float {
    let mut f = Float::with_val(prec.max(x.prec()), x);
    f.mul_assign_round(k, r.into());
    Float::with_val_round(prec, &f, r.into()).0
}

/// `⌊x⌋` as an `i64`, saturating.
pub fn floor_i64(x: &Float) -> i64 {
    x.clone().floor().to_integer().and_then(|i| i.to_i64()).unwrap_or(0)
}

/// `⌈x⌉` as an `i64`, saturating.
pub fn ceil_i64(x: &Float) -> i64 {
    x.clone().ceil().to_integer().and_then(|i| i.to_i64()).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialize_round_trips_exactly() {
        for prec in [53, 256, 1000] {
            let x = Scalar::parse("1/3", prec).unwrap();
            let y = Scalar::deserialize(&x.serialize()).unwrap();
            assert_eq!(x, y);
            assert_eq!(y.precision(), prec);
        }
        let s = Scalar::from_f64(1.25e-3, 256).serialize();
        assert!(s.starts_with("256:1.25"), "{s}");
    }

    #[test]
    fn parse_forms() {
        let p = 256;
        assert_eq!(Scalar::parse("0.25", p).unwrap().to_f64(), 0.25);
        assert_eq!(Scalar::parse("2^-3", p).unwrap().to_f64(), 0.125);
        assert_eq!(Scalar::parse("1e-8", p).unwrap().to_f64(), 1e-8);
        assert_eq!(Scalar::parse("-3/4", p).unwrap().to_f64(), -0.75);
        assert!(Scalar::parse("abc", p).is_err());
        assert!(Scalar::parse("1/0", p).is_err());
    }

    #[test]
    fn directed_rounding_brackets() {
        let third_dn = Scalar::from_ratio(1, 3, 64, Rounding::Down);
        let third_up = Scalar::from_ratio(1, 3, 64, Rounding::Up);
        assert!(third_dn < third_up);
        let i = Interval::from_rational(&Rational::from((1, 3)), 64);
        assert_eq!(i.lo_scalar(), third_dn);
        assert_eq!(i.hi_scalar(), third_up);
    }

    #[test]
    fn sqrt_of_two_enclosure() {
        let two = Interval::from_i64(2, 256);
        let r = two.sqrt(256);
        let sq = r.square(512);
        assert!(sq.contains(&Float::with_val(8, 2)));
        assert!(r.width(256) < Float::with_val(53, 1e-70));
    }

    #[test]
    fn cert_comparisons() {
        let a = Interval::from_f64(1.0);
        let b = Interval::from_f64(2.0);
        assert_eq!(a.le(&b), Cert3::Yes);
        assert_eq!(b.le(&a), Cert3::No);
        assert_eq!(a.le(&a), Cert3::Yes);
        assert_eq!(a.lt(&a), Cert3::No);
        let fuzzy = a.hull(&b);
        assert_eq!(fuzzy.le(&Interval::from_f64(1.5)), Cert3::Unknown);
    }

    #[test]
    fn integral_power_is_exact() {
        let x = Interval::from_f64(0.3);
        let one = Scalar::one(64);
        assert!(x.pow(&one, 256).is_point());
        let half = Scalar::from_f64(0.5, 64);
        let r = Interval::from_f64(4.0).pow(&half, 256);
        assert!(r.contains(&Float::with_val(8, 2)));
    }

    #[test]
    fn nearest_integer_distance() {
        let p = 128;
        let d = Interval::from_f64(2.25).dist_nearest_int(p);
        assert!(d.is_point() && d.lo().to_f64() == 0.25);
        let d = Interval::from_f64(2.75).dist_nearest_int(p);
        assert_eq!(d.hi().to_f64(), 0.25);
        let d = Interval::from_f64(-0.1).dist_nearest_int(p);
        assert!((d.mid_f64() - 0.1).abs() < 1e-15);
        let straddle = Interval::from_f64(2.9).hull(&Interval::from_f64(3.2));
        let d = straddle.dist_nearest_int(p);
        assert_eq!(d.lo().to_f64(), 0.0);
        assert!((d.hi().to_f64() - 0.2).abs() < 1e-12);
        let peak = Interval::from_f64(2.4).hull(&Interval::from_f64(2.6));
        assert_eq!(peak.dist_nearest_int(p).hi().to_f64(), 0.5);
    }

    #[test]
    fn decide_escalates() {
        let r = decide(64, |p| if p >= 512 { Cert3::Yes } else { Cert3::Unknown });
        assert_eq!(r, Ok(Cert3::Yes));
        assert_eq!(decide(64, |_| Cert3::Unknown), Err(Undecidable(MAX_PRECISION)));
    }
}

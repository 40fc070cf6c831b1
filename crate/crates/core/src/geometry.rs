//! Certified planar geometry: balls, lines, slabs, axis-aligned rectangles
//! and the containment / intersection predicates the game rules reduce to.
//!
//! Every predicate takes a working precision and returns a [`Cert3`]. Inputs
//! are exact binary values; only the arithmetic inside a predicate rounds,
//! and it rounds outward. Comparisons are done on squared quantities where
//! possible so that tangencies between exactly representable objects decide
//! as `YES` instead of `UNKNOWN`.

use rug::Float;
use thiserror::Error;

use crate::scalar::{Cert3, Interval, Rounding, Scalar, MAX_PRECISION};

mod slab_fit;

pub use slab_fit::{min_width_slab, min_width_slab_detailed, SlabFit};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("ball radius must be positive")]
    NonPositiveRadius,
    #[error("slab halfwidth must be positive")]
    NonPositiveHalfwidth,
    #[error("rectangle halfwidths must be positive")]
    NonPositiveRect,
    #[error("line normal is not a unit vector")]
    NotUnitNormal,
    #[error("no rectangles")]
    NoRectangles,
    #[error("degenerate point set")]
    Degenerate,
    #[error("no legal ball at this precision")]
    NoLegalBall,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point2 {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point2 {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point2 { x, y }
    }

    pub fn from_f64(x: f64, y: f64, prec: u32) -> Self {
        Point2::new(Scalar::from_f64(x, prec), Scalar::from_f64(y, prec))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

/// Closed Euclidean ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    center: Point2,
    radius: Scalar,
}

impl Ball {
    pub fn new(center: Point2, radius: Scalar) -> Result<Self, GeometryError> {
        if !radius.is_positive() {
            return Err(GeometryError::NonPositiveRadius);
        }
        Ok(Ball { center, radius })
    }

    pub fn from_f64(x: f64, y: f64, r: f64, prec: u32) -> Result<Self, GeometryError> {
        Ball::new(Point2::from_f64(x, y, prec), Scalar::from_f64(r, prec))
    }

    pub fn center(&self) -> &Point2 {
        &self.center
    }

    pub fn radius(&self) -> &Scalar {
        &self.radius
    }

    pub fn with_radius(&self, radius: Scalar) -> Result<Ball, GeometryError> {
        Ball::new(self.center.clone(), radius)
    }
}

/// The line `{p : normal·p = offset}` in canonical orientation: the normal's
/// first nonzero coordinate is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    normal: Point2,
    offset: Scalar,
}

fn is_unit(nx: &Scalar, ny: &Scalar) -> bool {
    let prec = nx.precision().min(ny.precision());
    let wp = 2 * (nx.precision().max(ny.precision())) + 8;
    let n2 = Float::with_val(wp, nx.as_float().square_ref()) + Float::with_val(wp, ny.as_float().square_ref());
    let dev = Float::with_val(wp, n2 - 1u32).abs();
    let tol = Float::with_val(8, 1) >> (prec as i32 - 2);
    dev <= tol
}

impl Line {
    /// Validates `|normal| = 1` to within `2^(1-precision)` and canonicalizes
    /// the sign so that `(n, d)` and `(-n, -d)` build equal lines.
    pub fn new(normal: Point2, offset: Scalar) -> Result<Self, GeometryError> {
        if !is_unit(&normal.x, &normal.y) {
            return Err(GeometryError::NotUnitNormal);
        }
        let flip = normal.x.as_float().is_sign_negative() && !normal.x.is_zero()
            || normal.x.is_zero() && normal.y.as_float().is_sign_negative();
        if flip {
            Ok(Line {
                normal: Point2::new(normal.x.neg(), normal.y.neg()),
                offset: offset.neg(),
            })
        } else {
            Ok(Line { normal, offset })
        }
    }

    /// Line with normal direction `(a, b)` (any length), normalized at `prec`.
    pub fn from_direction(a: &Scalar, b: &Scalar, offset: Scalar, prec: u32) -> Result<Self, GeometryError> {
        let (nx, ny) = normalize(a.as_float(), b.as_float(), prec)?;
        Line::new(Point2::new(nx, ny), offset)
    }

    /// Line with normal direction `(a, b)` passing through `p`.
    pub fn through(p: &Point2, a: &Scalar, b: &Scalar, prec: u32) -> Result<Self, GeometryError> {
        let (nx, ny) = normalize(a.as_float(), b.as_float(), prec)?;
        let off = Float::with_val(
            prec,
            Float::with_val(2 * prec + 64, nx.as_float() * p.x.as_float())
                + Float::with_val(2 * prec + 64, ny.as_float() * p.y.as_float()),
        );
        Line::new(Point2::new(nx, ny), Scalar::from_float(off))
    }

    /// `{(x, y) : y = c}`.
    pub fn horizontal(c: Scalar) -> Self {
        let prec = c.precision();
        Line {
            normal: Point2::new(Scalar::zero(prec), Scalar::one(prec)),
            offset: c,
        }
    }

    /// `{(x, y) : x = c}`.
    pub fn vertical(c: Scalar) -> Self {
        let prec = c.precision();
        Line {
            normal: Point2::new(Scalar::one(prec), Scalar::zero(prec)),
            offset: c,
        }
    }

    pub fn normal(&self) -> &Point2 {
        &self.normal
    }

    pub fn offset(&self) -> &Scalar {
        &self.offset
    }

    /// Enclosure of `normal·p − offset`.
    fn residual(&self, p: &Point2, prec: u32) -> Interval {
        let a = self.normal.x.interval().mul(&p.x.interval(), prec);
        let b = self.normal.y.interval().mul(&p.y.interval(), prec);
        a.add(&b, prec).sub(&self.offset.interval(), prec)
    }

    fn residual_of(&self, x: &Interval, y: &Interval, prec: u32) -> Interval {
        let a = self.normal.x.interval().mul(x, prec);
        let b = self.normal.y.interval().mul(y, prec);
        a.add(&b, prec).sub(&self.offset.interval(), prec)
    }

    /// Enclosure of `|normal|²`.
    fn norm_sq(&self, prec: u32) -> Interval {
        self.normal
            .x
            .interval()
            .square(prec)
            .add(&self.normal.y.interval().square(prec), prec)
    }
}

fn normalize(a: &Float, b: &Float, prec: u32) -> Result<(Scalar, Scalar), GeometryError> {
    if a.is_zero() && b.is_zero() {
        return Err(GeometryError::Degenerate);
    }
    let wp = 2 * prec + 64;
    let n = Float::with_val(wp, Float::with_val(wp, a * a) + Float::with_val(wp, b * b)).sqrt();
    let nx = Float::with_val(prec, Float::with_val(wp, a / &n));
    let ny = Float::with_val(prec, Float::with_val(wp, b / &n));
    Ok((Scalar::from_float(nx), Scalar::from_float(ny)))
}

/// Closed thickening `L^(γ) = {p : dist(p, L) <= γ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Slab {
    line: Line,
    halfwidth: Scalar,
}

impl Slab {
    pub fn new(line: Line, halfwidth: Scalar) -> Result<Self, GeometryError> {
        if !halfwidth.is_positive() {
            return Err(GeometryError::NonPositiveHalfwidth);
        }
        Ok(Slab { line, halfwidth })
    }

    pub fn line(&self) -> &Line {
        &self.line
    }

    pub fn halfwidth(&self) -> &Scalar {
        &self.halfwidth
    }

    /// Same line, different halfwidth.
    pub fn rethicken(&self, halfwidth: Scalar) -> Result<Slab, GeometryError> {
        Slab::new(self.line.clone(), halfwidth)
    }
}

/// Axis-aligned max-norm box `[cx ± hx] × [cy ± hy]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rect {
    center: Point2,
    hx: Scalar,
    hy: Scalar,
}

impl Rect {
    pub fn new(center: Point2, hx: Scalar, hy: Scalar) -> Result<Self, GeometryError> {
        if !hx.is_positive() || !hy.is_positive() {
            return Err(GeometryError::NonPositiveRect);
        }
        Ok(Rect { center, hx, hy })
    }

    pub fn from_f64(cx: f64, cy: f64, hx: f64, hy: f64, prec: u32) -> Result<Self, GeometryError> {
        Rect::new(
            Point2::from_f64(cx, cy, prec),
            Scalar::from_f64(hx, prec),
            Scalar::from_f64(hy, prec),
        )
    }

    pub fn center(&self) -> &Point2 {
        &self.center
    }

    pub fn halfwidth_x(&self) -> &Scalar {
        &self.hx
    }

    pub fn halfwidth_y(&self) -> &Scalar {
        &self.hy
    }

    /// Enlargement by `gamma` in both coordinates; contains the Euclidean
    /// `gamma`-thickening of the rectangle.
    pub fn thicken(&self, gamma: &Scalar, prec: u32) -> Result<Rect, GeometryError> {
        Rect::new(
            self.center.clone(),
            self.hx.add(gamma, prec, Rounding::Up),
            self.hy.add(gamma, prec, Rounding::Up),
        )
    }

    /// Corner enclosures, counterclockwise from the lower-left.
    pub fn corners(&self, prec: u32) -> [(Interval, Interval); 4] {
        let cx = self.center.x.interval();
        let cy = self.center.y.interval();
        let hx = self.hx.interval();
        let hy = self.hy.interval();
        let (x0, x1) = (cx.sub(&hx, prec), cx.add(&hx, prec));
        let (y0, y1) = (cy.sub(&hy, prec), cy.add(&hy, prec));
        [(x0.clone(), y0.clone()), (x1.clone(), y0), (x1, y1.clone()), (x0, y1)]
    }
}

/// Enclosure of the Euclidean distance from `p` to `line`.
pub fn dist_point_line(p: &Point2, line: &Line, prec: u32) -> Interval {
    let res = line.residual(p, prec).abs();
    let norm = line.norm_sq(prec).sqrt(prec);
    res.div(&norm, prec)
}

/// `inner ⊂ outer`: `|c_in − c_out| + r_in <= r_out`.
pub fn ball_in_ball(inner: &Ball, outer: &Ball, prec: u32) -> Cert3 {
    let diff = outer.radius.interval().sub(&inner.radius.interval(), prec);
    let dx = inner.center.x.interval().sub(&outer.center.x.interval(), prec);
    let dy = inner.center.y.interval().sub(&outer.center.y.interval(), prec);
    let d2 = dx.square(prec).add(&dy.square(prec), prec);
    let nonneg = diff.ge(&Interval::zero());
    nonneg.and(d2.le(&diff.clamp_nonneg().square(prec)))
}

/// `B ∩ S ≠ ∅`: `dist(center, line) <= halfwidth + radius`.
pub fn ball_meets_slab(ball: &Ball, slab: &Slab, prec: u32) -> Cert3 {
    let res2 = slab.line.residual(&ball.center, prec).square(prec);
    let reach = slab.halfwidth.interval().add(&ball.radius.interval(), prec);
    let rhs = reach.square(prec).mul_nonneg(&slab.line.norm_sq(prec), prec);
    res2.le(&rhs)
}

/// `B ⊂ S`: `dist(center, line) + radius <= halfwidth`.
pub fn ball_in_slab(ball: &Ball, slab: &Slab, prec: u32) -> Cert3 {
    let slack = slab.halfwidth.interval().sub(&ball.radius.interval(), prec);
    let res2 = slab.line.residual(&ball.center, prec).square(prec);
    let rhs = slack
        .clamp_nonneg()
        .square(prec)
        .mul_nonneg(&slab.line.norm_sq(prec), prec);
    slack.ge(&Interval::zero()).and(res2.le(&rhs))
}

/// `B ∩ R ≠ ∅` via the clamped-coordinate distance from the center to `R`.
pub fn ball_meets_rect(ball: &Ball, rect: &Rect, prec: u32) -> Cert3 {
    let gap = |c: &Scalar, rc: &Scalar, h: &Scalar| {
        c.interval()
            .sub(&rc.interval(), prec)
            .abs()
            .sub(&h.interval(), prec)
            .clamp_nonneg()
    };
    let gx = gap(&ball.center.x, &rect.center.x, &rect.hx);
    let gy = gap(&ball.center.y, &rect.center.y, &rect.hy);
    let d2 = gx.square(prec).add(&gy.square(prec), prec);
    d2.le(&ball.radius.interval().square(prec))
}

/// `R ⊂ S`: every corner of `R` lies within the slab.
pub fn rect_in_slab(rect: &Rect, slab: &Slab, prec: u32) -> Cert3 {
    let rhs = slab
        .halfwidth
        .interval()
        .square(prec)
        .mul_nonneg(&slab.line.norm_sq(prec), prec);
    rect.corners(prec)
        .iter()
        .map(|(x, y)| slab.line.residual_of(x, y, prec).square(prec).le(&rhs))
        .fold(Cert3::Yes, Cert3::and)
}

/// `inner ⊂ outer` for slabs. Lines whose normals are not parallel to within
/// `2^(-prec/2)` never nest; parallel ones nest iff
/// `|offset difference| + inner halfwidth <= outer halfwidth`.
pub fn slab_in_slab(inner: &Slab, outer: &Slab, prec: u32) -> Cert3 {
    let (a, b) = (&inner.line.normal, &outer.line.normal);
    let cross =
        a.x.interval()
            .mul(&b.y.interval(), prec)
            .sub(&a.y.interval().mul(&b.x.interval(), prec), prec);
    let tol = Float::with_val(8, 1) >> (prec as i32 / 2);
    let tol = Interval::from_bounds(tol.clone(), tol);
    if cross.abs().le(&tol) != Cert3::Yes {
        return Cert3::No;
    }
    let dot =
        a.x.interval()
            .mul(&b.x.interval(), prec)
            .add(&a.y.interval().mul(&b.y.interval(), prec), prec);
    let inner_off = if dot.mid_f64() < 0.0 {
        inner.line.offset.interval().neg()
    } else {
        inner.line.offset.interval()
    };
    let gap = inner_off.sub(&outer.line.offset.interval(), prec).abs();
    gap.add(&inner.halfwidth.interval(), prec)
        .le(&outer.halfwidth.interval())
}

/// A ball `B' ⊂ B` with radius `>= beta·r` that misses the slab; the
/// constructive witness that Bob always has a legal absolute-game reply.
///
/// When the slab already misses `B` the ball itself is returned. Otherwise
/// the result is the largest ball on the far side of the slab along the
/// normal through the center, shrunk by a relative `2^-22` so that both
/// tangencies become strict.
pub fn legal_ball_avoiding_slab(ball: &Ball, slab: &Slab, beta: &Scalar, prec: u32) -> Result<Ball, GeometryError> {
    if ball_meets_slab(ball, slab, prec) == Cert3::No {
        return Ok(ball.clone());
    }
    let mut wp = prec.max(64);
    loop {
        if let Some(b) = try_avoid(ball, slab, beta, wp) {
            return Ok(b);
        }
        if wp >= MAX_PRECISION {
            return Err(GeometryError::NoLegalBall);
        }
        wp = (wp * 2).min(MAX_PRECISION);
    }
}

fn try_avoid(ball: &Ball, slab: &Slab, beta: &Scalar, prec: u32) -> Option<Ball> {
    let wp = prec + 32;
    let line = slab.line();
    let norm = Float::with_val(wp, line.norm_sq(wp).mid(wp)).sqrt();
    let v = line.residual(ball.center(), wp).mid(wp);
    let sign: i32 = if v.is_sign_negative() && !v.is_zero() { -1 } else { 1 };
    let d = Float::with_val(wp, v.abs_ref()) / &norm;
    let r = ball.radius().as_float();
    let gamma = slab.halfwidth().as_float();
    let shrink = Float::with_val(wp, 1) - (Float::with_val(wp, 1) >> 22);
    let far = Float::with_val(wp, &d + r);
    let radius = Float::with_val(wp, &far - gamma) / 2u32 * &shrink;
    let shift = Float::with_val(wp, Float::with_val(wp, gamma + r) - &d) / 2u32;
    let ux = Float::with_val(wp, line.normal().x.as_float() / &norm) * sign;
    let uy = Float::with_val(wp, line.normal().y.as_float() / &norm) * sign;
    let cx = Float::with_val(prec, ball.center().x.as_float() + Float::with_val(wp, &ux * &shift));
    let cy = Float::with_val(prec, ball.center().y.as_float() + Float::with_val(wp, &uy * &shift));
    let radius = Scalar::from_float(Float::with_val_round(prec, &radius, rug::float::Round::Down).0);
    let candidate = Ball::new(Point2::new(Scalar::from_float(cx), Scalar::from_float(cy)), radius).ok()?;
    let min_r = beta.interval().mul(&ball.radius().interval(), prec);
    let ok = candidate
        .radius()
        .interval()
        .ge(&min_r)
        .and(ball_in_ball(&candidate, ball, prec))
        .and(!ball_meets_slab(&candidate, slab, prec));
    (ok == Cert3::Yes).then_some(candidate)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn s(v: f64) -> Scalar {
        Scalar::from_f64(v, P)
    }

    fn x_axis() -> Line {
        Line::horizontal(s(0.0))
    }

    fn diag(offset: f64) -> Line {
        Line::from_direction(&s(1.0), &s(-1.0), s(offset), P).unwrap()
    }

    #[test]
    fn distance_examples() {
        let d = dist_point_line(&Point2::from_f64(3.0, 0.4, P), &x_axis(), P);
        assert!(d.contains(&Float::with_val(P, 0.4)));
        let on = dist_point_line(&Point2::from_f64(5.0, 0.0, P), &x_axis(), P);
        assert!(on.contains(&Float::with_val(P, 0)));
        let l = Line::from_direction(&s(1.0), &s(1.0), s(0.0), P).unwrap();
        let d = dist_point_line(&Point2::from_f64(1.0, 1.0, P), &l, P);
        let sqrt2 = Float::with_val(4 * P, 2).sqrt();
        assert!(d.lo() <= &sqrt2 && &sqrt2 <= d.hi());
        let bound = Float::with_val(P, 1) >> (P as i32 - 3);
        assert!(d.width(P) <= bound * 2u32);
    }

    #[test]
    fn ball_in_ball_examples() {
        let unit = Ball::from_f64(0.0, 0.0, 1.0, P).unwrap();
        assert_eq!(ball_in_ball(&unit, &unit, P), Cert3::Yes);
        let tangent = Ball::from_f64(0.5, 0.0, 0.5, P).unwrap();
        assert_eq!(ball_in_ball(&tangent, &unit, P), Cert3::Yes);
        let poke = Ball::from_f64(0.6, 0.0, 0.5, P).unwrap();
        assert_eq!(ball_in_ball(&poke, &unit, P), Cert3::No);
        let bigger = Ball::from_f64(0.0, 0.0, 1.5, P).unwrap();
        assert_eq!(ball_in_ball(&bigger, &unit, P), Cert3::No);
    }

    #[test]
    fn ball_meets_slab_examples() {
        let slab = Slab::new(x_axis(), s(0.5)).unwrap();
        let far = Ball::from_f64(0.0, 5.0, 1.0, P).unwrap();
        assert_eq!(ball_meets_slab(&far, &slab, P), Cert3::No);
        let touch = Ball::from_f64(0.0, 1.5, 1.0, P).unwrap();
        assert_eq!(ball_meets_slab(&touch, &slab, P), Cert3::Yes);
        let just = Ball::new(Point2::new(s(0.0), Scalar::parse("1.500001", P).unwrap()), s(1.0)).unwrap();
        assert_eq!(ball_meets_slab(&just, &slab, P), Cert3::No);
    }

    #[test]
    fn ball_meets_rect_examples() {
        let unit = Ball::from_f64(0.0, 0.0, 1.0, P).unwrap();
        let big = Rect::from_f64(0.0, 0.0, 7.0, 3.0, P).unwrap();
        assert_eq!(ball_meets_rect(&unit, &big, P), Cert3::Yes);
        let sq = Rect::from_f64(0.0, 0.0, 0.1, 0.1, P).unwrap();
        let far = Ball::from_f64(10.0, 0.0, 1.0, P).unwrap();
        assert_eq!(ball_meets_rect(&far, &sq, P), Cert3::No);
        let gap = Ball::from_f64(0.2, 0.0, 0.1, P).unwrap();
        assert_eq!(ball_meets_rect(&gap, &sq, P), Cert3::Yes);
        // Corner region: distance to (0.1, 0.1) from (0.2, 0.2) is 0.1·√2.
        let corner = Ball::from_f64(0.2, 0.2, 0.14, P).unwrap();
        assert_eq!(ball_meets_rect(&corner, &sq, P), Cert3::No);
        let corner = Ball::from_f64(0.2, 0.2, 0.1415, P).unwrap();
        assert_eq!(ball_meets_rect(&corner, &sq, P), Cert3::Yes);
    }

    #[test]
    fn rect_in_slab_examples() {
        let r = Rect::from_f64(0.0, 0.0, 0.1, 0.01, P).unwrap();
        let fits = Slab::new(x_axis(), s(0.01)).unwrap();
        assert_eq!(rect_in_slab(&r, &fits, P), Cert3::Yes);
        let thin = Slab::new(x_axis(), s(0.009)).unwrap();
        assert_eq!(rect_in_slab(&r, &thin, P), Cert3::No);
        let square = Rect::from_f64(0.0, 0.0, 1.0, 1.0, P).unwrap();
        let sqrt2_up =
            Scalar::from_float(Float::with_val_round(P, Float::with_val(4 * P, 2).sqrt(), rug::float::Round::Up).0);
        let d = Slab::new(diag(0.0), sqrt2_up).unwrap();
        let cert = crate::scalar::decide(P, |p| rect_in_slab(&square, &d, p));
        assert_eq!(cert, Ok(Cert3::Yes));
    }

    #[test]
    fn canonical_lines_compare_equal() {
        let a = Line::from_direction(&s(0.6), &s(-0.8), s(0.3), P).unwrap();
        let b = Line::from_direction(&s(-0.6), &s(0.8), s(-0.3), P).unwrap();
        assert_eq!(a, b);
        let h = Line::new(Point2::from_f64(0.0, -1.0, P), s(2.0)).unwrap();
        assert_eq!(h, Line::horizontal(s(-2.0)));
        assert_eq!(
            Line::new(Point2::from_f64(0.6, 0.6, P), s(0.0)),
            Err(GeometryError::NotUnitNormal)
        );
    }

    #[test]
    fn degenerate_objects_rejected() {
        assert!(Ball::from_f64(0.0, 0.0, 0.0, P).is_err());
        assert!(Slab::new(x_axis(), s(0.0)).is_err());
        assert!(Rect::from_f64(0.0, 0.0, 1.0, 0.0, P).is_err());
    }

    #[test]
    fn slab_nesting() {
        let outer = Slab::new(x_axis(), s(0.5)).unwrap();
        let inner = Slab::new(Line::horizontal(s(0.2)), s(0.3)).unwrap();
        assert_eq!(slab_in_slab(&inner, &outer, P), Cert3::Yes);
        let sticks_out = Slab::new(Line::horizontal(s(0.2)), s(0.31)).unwrap();
        assert_eq!(slab_in_slab(&sticks_out, &outer, P), Cert3::No);
        let tilted = Slab::new(diag(0.0), s(0.01)).unwrap();
        assert_eq!(slab_in_slab(&tilted, &outer, P), Cert3::No);
        // Opposite canonical orientation of nearly vertical lines.
        let up = Line::new(Point2::from_f64(0.0, 1.0, P), s(0.1)).unwrap();
        let down = Line::new(Point2::from_f64(0.0, -1.0, P), s(-0.1)).unwrap();
        let a = Slab::new(up, s(0.05)).unwrap();
        let b = Slab::new(down, s(0.05)).unwrap();
        assert_eq!(slab_in_slab(&a, &b, P), Cert3::Yes);
    }

    #[test]
    fn avoiding_ball_examples() {
        let unit = Ball::from_f64(0.0, 0.0, 1.0, P).unwrap();
        let check = |slab: &Slab, beta: f64| {
            let b = legal_ball_avoiding_slab(&unit, slab, &s(beta), P).unwrap();
            assert_eq!(ball_in_ball(&b, &unit, P), Cert3::Yes);
            assert_eq!(ball_meets_slab(&b, slab, P), Cert3::No);
            assert!(b.radius().to_f64() >= beta * 1.0);
            b
        };
        let b = check(&Slab::new(x_axis(), s(0.1)).unwrap(), 0.1);
        assert!((b.radius().to_f64() - 0.45).abs() < 1e-5);
        let outside = Slab::new(Line::horizontal(s(7.0)), s(0.1)).unwrap();
        assert_eq!(check(&outside, 0.1), unit);
        let through = Slab::new(diag(0.0), s(0.3)).unwrap();
        let b = check(&through, 0.3);
        let d = dist_point_line(b.center(), through.line(), P).mid_f64();
        assert!(d >= 0.3 + b.radius().to_f64());
        let edge = 1.0 / 3.0 - 2f64.powi(-20);
        check(&Slab::new(diag(0.05), s(edge)).unwrap(), edge);
    }
}

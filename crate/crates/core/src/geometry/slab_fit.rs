//! Minimum-width slab enclosing a finite family of rectangles.
//!
//! The width of a set equals the width of its convex hull's corner set, so
//! the search runs over the hull of all rectangle corners with rotating
//! calipers. Hull construction and width comparison are exact over
//! rationals; only the final line is rounded to the working precision.

use rug::{Float, Rational};

use super::{rect_in_slab, GeometryError, Line, Point2, Rect, Slab};
use crate::scalar::{Cert3, Interval, Rounding, Scalar, MAX_PRECISION};

/// A fitted slab and the exact squared minimum halfwidth of the corner set.
#[derive(Debug, Clone)]
pub struct SlabFit {
    pub slab: Slab,
    pub min_halfwidth_sq: Rational,
}

type Pt = (Rational, Rational);

fn cross(o: &Pt, a: &Pt, b: &Pt) -> Rational {
    let l = Rational::from(&a.0 - &o.0) * Rational::from(&b.1 - &o.1);
    let r = Rational::from(&a.1 - &o.1) * Rational::from(&b.0 - &o.0);
    l - r
}

fn corners(rects: &[Rect]) -> Vec<Pt> {
    let mut pts = Vec::with_capacity(4 * rects.len());
    for r in rects {
        let cx = r.center().x.to_rational();
        let cy = r.center().y.to_rational();
        let hx = r.halfwidth_x().to_rational();
        let hy = r.halfwidth_y().to_rational();
        for (sx, sy) in [(-1, -1), (1, -1), (1, 1), (-1, 1)] {
            let x = &cx + Rational::from(&hx * sx);
            let y = &cy + Rational::from(&hy * sy);
            pts.push((x, y));
        }
    }
    pts
}

/// Counterclockwise hull without collinear points (Andrew's monotone chain).
fn convex_hull(mut pts: Vec<Pt>) -> Vec<Pt> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Pt> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Pt> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Edge index and exact squared width of the narrowest caliper direction.
fn narrowest_edge(hull: &[Pt]) -> (usize, Rational) {
    let n = hull.len();
    let mut best: Option<(usize, Rational)> = None;
    let mut j = 1;
    for i in 0..n {
        let a = &hull[i];
        let b = &hull[(i + 1) % n];
        while cross(a, b, &hull[(j + 1) % n]) > cross(a, b, &hull[j]) {
            j = (j + 1) % n;
        }
        let area = cross(a, b, &hull[j]);
        let ex = Rational::from(&b.0 - &a.0);
        let ey = Rational::from(&b.1 - &a.1);
        let len2 = Rational::from(ex.square_ref()) + Rational::from(ey.square_ref());
        let w2 = Rational::from(area.square_ref()) / len2;
        if best.as_ref().is_none_or(|(_, bw)| w2 < *bw) {
            best = Some((i, w2));
        }
    }
    best.expect("hull has at least three vertices")
}

/// Narrowest slab containing every rectangle, rounded to `prec`. The
/// returned halfwidth is an upper bound on the fitted corner spread inflated
/// by a relative `2^-(prec-8)`, and containment of each rectangle is
/// certified before returning.
pub fn min_width_slab(rects: &[Rect], prec: u32) -> Result<Slab, GeometryError> {
    min_width_slab_detailed(rects, prec).map(|f| f.slab)
}

pub fn min_width_slab_detailed(rects: &[Rect], prec: u32) -> Result<SlabFit, GeometryError> {
    if rects.is_empty() {
        return Err(GeometryError::NoRectangles);
    }
    let pts = corners(rects);
    let hull = convex_hull(pts.clone());
    if hull.len() < 3 {
        return Err(GeometryError::Degenerate);
    }
    let (i, w2) = narrowest_edge(&hull);
    let a = &hull[i];
    let b = &hull[(i + 1) % hull.len()];
    let ex = Rational::from(&b.0 - &a.0);
    let ey = Rational::from(&b.1 - &a.1);
    let min_halfwidth_sq = w2 / 4u32;

    let mut wp = prec;
    loop {
        let slab = round_slab(&pts, &ex, &ey, wp)?;
        let ok = rects.iter().all(|r| rect_in_slab(r, &slab, wp) == Cert3::Yes);
        if ok {
            return Ok(SlabFit { slab, min_halfwidth_sq });
        }
        if wp >= MAX_PRECISION {
            return Err(GeometryError::Degenerate);
        }
        wp = (wp * 2).min(MAX_PRECISION);
    }
}

fn round_slab(pts: &[Pt], ex: &Rational, ey: &Rational, prec: u32) -> Result<Slab, GeometryError> {
    let wp = prec + 64;
    let a = Scalar::from_rational(&Rational::from(-ey), wp, Rounding::Nearest);
    let b = Scalar::from_rational(ex, wp, Rounding::Nearest);
    let probe = Line::from_direction(&a, &b, Scalar::zero(prec), prec)?;
    let (nx, ny) = (probe.normal().x.interval(), probe.normal().y.interval());
    let mut lo: Option<Float> = None;
    let mut hi: Option<Float> = None;
    for (x, y) in pts {
        let p = nx
            .mul(&Interval::from_rational(x, wp), wp)
            .add(&ny.mul(&Interval::from_rational(y, wp), wp), wp);
        if lo.as_ref().is_none_or(|l| p.lo() < l) {
            lo = Some(p.lo().clone());
        }
        if hi.as_ref().is_none_or(|h| p.hi() > h) {
            hi = Some(p.hi().clone());
        }
    }
    let spread = Interval::from_bounds(lo.unwrap(), hi.unwrap());
    let offset = Scalar::from_float(spread.mid(prec));
    let off = offset.interval();
    let up = spread.sub(&off, wp).abs().hi().clone();
    let norm = probe.norm_sq(wp).sqrt(wp);
    let raw = Interval::from_bounds(up.clone(), up).div(&norm, wp);
    let inflate = Float::with_val(prec, 1) + (Float::with_val(prec, 1) >> (prec as i32 - 8));
    let hw = Float::with_val_round(prec, raw.hi() * inflate, rug::float::Round::Up).0;
    let line = Line::new(Point2::new(probe.normal().x.clone(), probe.normal().y.clone()), offset)?;
    Slab::new(line, Scalar::from_float(hw))
}

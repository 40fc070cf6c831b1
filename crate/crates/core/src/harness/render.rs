//! Static SVG rendering of a trace: one auto-zoomed panel per stage.

use std::fmt::Write as _;

use thiserror::Error;

use super::runner::{RunError, Trace};
use crate::diophantine::{delta_rect, enumerate_dangerous, Params};
use crate::game::{AliceMove, Move, Transcript};
use crate::geometry::{ball_meets_slab, Ball, Point2, Slab};
use crate::scalar::{decide, Cert3, Rounding, Scalar};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error(transparent)]
    Trace(#[from] RunError),
    #[error("stage {0}: B_{{n+1}} is not certified disjoint from Alice's slab")]
    SlabOverlap(usize),
}

const PANEL: f64 = 240.0;
const GAP: f64 = 12.0;
const COLS: usize = 4;
/// Half-extent of a panel in units of the stage radius.
const ZOOM: f64 = 1.25;

/// Maps the plane to panel pixels around a center at scale `span`.
struct View {
    cx: Scalar,
    cy: Scalar,
    span: Scalar,
    prec: u32,
}

impl View {
    fn new(ball: &Ball, prec: u32) -> View {
        View {
            cx: ball.center().x.clone(),
            cy: ball.center().y.clone(),
            span: ball.radius().mul(&Scalar::from_f64(ZOOM, 53), prec, Rounding::Nearest),
            prec,
        }
    }

    /// Local coordinate in `[-1, 1]`; the subtraction happens at full precision.
    fn local(&self, v: &Scalar, origin: &Scalar) -> f64 {
        v.sub(origin, self.prec, Rounding::Nearest)
            .div(&self.span, self.prec, Rounding::Nearest)
            .to_f64()
    }

    fn length(&self, v: &Scalar) -> f64 {
        v.div(&self.span, self.prec, Rounding::Nearest).to_f64()
    }

    fn point(&self, p: &Point2) -> (f64, f64) {
        (self.local(&p.x, &self.cx), self.local(&p.y, &self.cy))
    }

    fn px(u: f64) -> f64 {
        (u + 1.0) * PANEL / 2.0
    }

    fn py(v: f64) -> f64 {
        (1.0 - v) * PANEL / 2.0
    }

    /// The slab clipped to the panel square, as a polygon in local units.
    fn slab_polygon(&self, s: &Slab) -> Vec<(f64, f64)> {
        let n = s.line().normal();
        let shift = n.x.mul(&self.cx, self.prec, Rounding::Nearest).add(
            &n.y.mul(&self.cy, self.prec, Rounding::Nearest),
            self.prec,
            Rounding::Nearest,
        );
        let d = self.local(s.line().offset(), &shift);
        let h = self.length(s.halfwidth());
        let (nx, ny) = (n.x.to_f64(), n.y.to_f64());
        let square = vec![(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];
        let upper = clip(square, |(x, y)| d + h - (nx * x + ny * y));
        clip(upper, |(x, y)| (nx * x + ny * y) - (d - h))
    }
}

/// Sutherland–Hodgman against the half-plane `f >= 0`.
fn clip(poly: Vec<(f64, f64)>, f: impl Fn((f64, f64)) -> f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fa, fb) = (f(a), f(b));
        if fa >= 0.0 {
            out.push(a);
        }
        if (fa >= 0.0) != (fb >= 0.0) {
            let t = fa / (fa - fb);
            out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
        }
    }
    out
}

fn stages_to_draw(count: usize, max_panels: usize) -> Vec<usize> {
    if count <= max_panels {
        return (0..count).collect();
    }
    let mut v: Vec<usize> = (0..max_panels).map(|i| i * (count - 1) / (max_panels - 1)).collect();
    v.dedup();
    v
}

/// Alice's move answering `B_n`, if any.
fn alice_at(t: &Transcript, n: usize) -> Option<&AliceMove> {
    t.moves().iter().find_map(|m| match &m.mv {
        Move::Alice(a) if m.stage == n => Some(a),
        _ => None,
    })
}

/// Re-checks that every Bob answer in the absolute game misses Alice's slab.
pub fn check_absolute(t: &Transcript) -> Result<(), RenderError> {
    let prec = t.precision();
    for (n, next) in t.balls().iter().enumerate().skip(1).map(|(i, b)| (i - 1, b)) {
        if let Some(AliceMove::Absolute(s)) = alice_at(t, n) {
            if decide(prec, |p| ball_meets_slab(next, s, p)) != Ok(Cert3::No) {
                return Err(RenderError::SlabOverlap(n));
            }
        }
    }
    Ok(())
}

fn circle(out: &mut String, view: &View, b: &Ball, class: &str) {
    let (u, v) = view.point(b.center());
    let r = view.length(b.radius()) * PANEL / 2.0;
    let _ = writeln!(
        out,
        r#"    <circle class="{class}" cx="{:.3}" cy="{:.3}" r="{:.3}"/>"#,
        View::px(u),
        View::py(v),
        r
    );
}

/// Renders the trace text to an SVG document. At most `max_panels` stages
/// are drawn, evenly spaced and always including the first and last.
pub fn render_svg(text: &str, max_panels: usize) -> Result<String, RenderError> {
    let trace = Trace::parse(text)?;
    let t = trace.rebuild()?;
    let (params, q_certify): (Params, u64) = trace.params()?;
    check_absolute(&t)?;
    let prec = t.precision();
    let outcome = t.current_ball().center().clone();
    let stages = stages_to_draw(t.balls().len(), max_panels.max(2));
    let rows = stages.len().div_ceil(COLS);
    let cols = stages.len().min(COLS);
    let width = cols as f64 * (PANEL + GAP) + GAP;
    let height = rows as f64 * (PANEL + GAP + 16.0) + GAP;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    out.push_str(concat!(
        "  <style>\n",
        "    .frame { fill: #fff; stroke: #999; }\n",
        "    .ball { fill: none; stroke: #1f4e8c; stroke-width: 1.5; }\n",
        "    .next { fill: none; stroke: #2a9d4b; stroke-dasharray: 4 2; }\n",
        "    .slab { fill: #d94f3d; fill-opacity: 0.25; stroke: #d94f3d; stroke-width: 0.5; }\n",
        "    .delta { fill: #f2b134; fill-opacity: 0.35; stroke: #b07d12; stroke-width: 0.5; }\n",
        "    .outcome { fill: #000; }\n",
        "    text { font: 11px monospace; }\n",
        "  </style>\n",
    ));
    for (i, &n) in stages.iter().enumerate() {
        let ox = GAP + (i % COLS) as f64 * (PANEL + GAP);
        let oy = GAP + (i / COLS) as f64 * (PANEL + GAP + 16.0);
        let ball = &t.balls()[n];
        let view = View::new(ball, prec);
        let _ = writeln!(out, r#"  <g transform="translate({ox:.1},{oy:.1})">"#);
        let _ = writeln!(
            out,
            r#"    <text x="0" y="{:.1}">n={n} r={:.3e}</text>"#,
            PANEL + 13.0,
            ball.radius().to_f64()
        );
        out.push_str("    <svg width=\"240\" height=\"240\" overflow=\"hidden\">\n");
        let _ = writeln!(
            out,
            r#"    <rect class="frame" x="0" y="0" width="{PANEL}" height="{PANEL}"/>"#
        );
        let q_hi = q_certify.min(params.q_cap());
        if let Ok(pts) = enumerate_dangerous(ball, 1, q_hi, &params) {
            for p in pts {
                let r = delta_rect(&p, &params);
                let (u, v) = view.point(r.center());
                let (hx, hy) = (view.length(r.halfwidth_x()), view.length(r.halfwidth_y()));
                let _ = writeln!(
                    out,
                    r#"    <rect class="delta" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
                    View::px(u - hx),
                    View::py(v + hy),
                    hx * PANEL,
                    hy * PANEL
                );
            }
        }
        for s in alice_at(&t, n).map(AliceMove::slabs).unwrap_or(&[]) {
            let poly = view.slab_polygon(s);
            if poly.len() >= 3 {
                let pts: Vec<String> = poly
                    .iter()
                    .map(|&(u, v)| format!("{:.3},{:.3}", View::px(u), View::py(v)))
                    .collect();
                let _ = writeln!(out, r#"    <polygon class="slab" points="{}"/>"#, pts.join(" "));
            }
        }
        circle(&mut out, &view, ball, "ball");
        if let Some(next) = t.balls().get(n + 1) {
            circle(&mut out, &view, next, "next");
        }
        let (u, v) = view.point(&outcome);
        if u.abs() <= 1.0 && v.abs() <= 1.0 {
            let _ = writeln!(
                out,
                r#"    <circle class="outcome" cx="{:.3}" cy="{:.3}" r="2"/>"#,
                View::px(u),
                View::py(v)
            );
        }
        out.push_str("    </svg>\n  </g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_selection() {
        assert_eq!(stages_to_draw(3, 12), vec![0, 1, 2]);
        let v = stages_to_draw(100, 5);
        assert_eq!(v.first(), Some(&0));
        assert_eq!(v.last(), Some(&99));
        assert_eq!(v.len(), 5);
    }

    #[test]
    fn clip_square_by_band() {
        let sq = vec![(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];
        let band = clip(clip(sq, |(_, y)| 0.5 - y), |(_, y)| y + 0.5);
        let area: f64 = (0..band.len())
            .map(|i| {
                let (a, b) = (band[i], band[(i + 1) % band.len()]);
                a.0 * b.1 - b.0 * a.1
            })
            .sum::<f64>()
            / 2.0;
        assert!((area.abs() - 2.0).abs() < 1e-12);
    }
}

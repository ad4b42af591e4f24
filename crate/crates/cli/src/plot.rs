//! Static SVG diagrams of spectra and ranges.

use std::fmt::Write;

use qcomp::numrange::{RangeResult, UnitaryGeometry};
use qcomp::C64;

const SIZE: f64 = 400.0;
const HALF: f64 = SIZE / 2.0;

struct Plane {
    scale: f64,
}

impl Plane {
    fn x(&self, z: C64) -> f64 {
        HALF + self.scale * z.re
    }

    fn y(&self, z: C64) -> f64 {
        HALF - self.scale * z.im
    }
}

fn header(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

fn axes(svg: &mut String) {
    let _ = writeln!(svg, "<line x1=\"0\" y1=\"{HALF}\" x2=\"{SIZE}\" y2=\"{HALF}\" stroke=\"#bbb\"/>");
    let _ = writeln!(svg, "<line x1=\"{HALF}\" y1=\"0\" x2=\"{HALF}\" y2=\"{SIZE}\" stroke=\"#bbb\"/>");
}

fn dot(svg: &mut String, plane: &Plane, z: C64, r: f64, fill: &str) {
    let _ = writeln!(svg, "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{r}\" fill=\"{fill}\"/>", plane.x(z), plane.y(z));
}

fn segment(svg: &mut String, plane: &Plane, a: C64, b: C64, stroke: &str, width: f64) {
    let _ = writeln!(
        svg,
        "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>",
        plane.x(a),
        plane.y(a),
        plane.x(b),
        plane.y(b)
    );
}

fn range_marks(svg: &mut String, plane: &Plane, range: &RangeResult) {
    match *range {
        RangeResult::Point { value, .. } => dot(svg, plane, value, 6.0, "crimson"),
        RangeResult::Segment { endpoints: [a, b], .. } => segment(svg, plane, a, b, "crimson", 4.0),
        RangeResult::RealInterval { lo, hi } => segment(svg, plane, C64::new(lo, 0.0), C64::new(hi, 0.0), "crimson", 4.0),
        RangeResult::Empty => {}
    }
}

/// Unit circle, eigenvalues, chords and `Λ₂`.
pub fn unitary(g: &UnitaryGeometry) -> String {
    let plane = Plane { scale: HALF / 1.2 };
    let mut svg = header(SIZE, SIZE);
    axes(&mut svg);
    let _ = writeln!(svg, "<circle cx=\"{HALF}\" cy=\"{HALF}\" r=\"{:.3}\" fill=\"none\" stroke=\"black\"/>", plane.scale);
    for [a, b] in &g.chords {
        segment(&mut svg, &plane, *a, *b, "steelblue", 1.5);
    }
    for (z, m) in g.eigenvalues.iter().zip(&g.multiplicities) {
        dot(&mut svg, &plane, *z, 3.0 + 2.0 * *m as f64, "black");
    }
    range_marks(&mut svg, &plane, &g.range);
    svg.push_str("</svg>\n");
    svg
}

/// Spectrum and the candidate value, green when it passes the hull test.
pub fn normal(values: &[C64], lambda: C64, member: bool) -> String {
    let radius = values.iter().chain(std::iter::once(&lambda)).map(|z| z.norm()).fold(1e-12, f64::max);
    let plane = Plane { scale: HALF / (1.2 * radius) };
    let mut svg = header(SIZE, SIZE);
    axes(&mut svg);
    for z in values {
        dot(&mut svg, &plane, *z, 4.0, "black");
    }
    dot(&mut svg, &plane, lambda, 6.0, if member { "seagreen" } else { "crimson" });
    svg.push_str("</svg>\n");
    svg
}

/// Number line with the eigenvalues and the interval.
pub fn hermitian(values: &[f64], range: &RangeResult) -> String {
    let (width, height) = (600.0, 120.0);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = ((hi - lo) * 0.1).max(0.5);
    let x = |v: f64| 20.0 + (width - 40.0) * (v - lo + pad) / (hi - lo + 2.0 * pad);
    let y = height / 2.0;
    let mut svg = header(width, height);
    let _ = writeln!(svg, "<line x1=\"20\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"black\"/>", width - 20.0);
    match *range {
        RangeResult::RealInterval { lo, hi } => {
            let _ = writeln!(
                svg,
                "<line x1=\"{:.3}\" y1=\"{y}\" x2=\"{:.3}\" y2=\"{y}\" stroke=\"crimson\" stroke-width=\"6\"/>",
                x(lo),
                x(hi)
            );
        }
        RangeResult::Point { value, .. } => {
            let _ = writeln!(svg, "<circle cx=\"{:.3}\" cy=\"{y}\" r=\"6\" fill=\"crimson\"/>", x(value.re));
        }
        _ => {}
    }
    for v in values {
        let _ = writeln!(svg, "<circle cx=\"{:.3}\" cy=\"{y}\" r=\"3\" fill=\"black\"/>", x(*v));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_plot_contains_interval() {
        let svg = hermitian(&[1.0, 2.0, 3.0, 4.0], &RangeResult::RealInterval { lo: 2.0, hi: 3.0 });
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("crimson"));
        assert_eq!(svg.matches("<circle").count(), 4);
    }

    #[test]
    fn unitary_plot_has_circle_and_chords() {
        let g = UnitaryGeometry {
            eigenvalues: vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)],
            multiplicities: vec![1; 4],
            chords: vec![[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)], [C64::new(0.0, 1.0), C64::new(0.0, -1.0)]],
            range: RangeResult::Point { value: C64::new(0.0, 0.0), case: None },
        };
        let svg = unitary(&g);
        assert_eq!(svg.matches("steelblue").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 6);
    }
}

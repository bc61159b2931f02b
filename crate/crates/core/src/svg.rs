//! Deterministic SVG figures of instances, path pairs and gadget outputs.
//!
//! Coordinates are mapped into a fixed 800-unit square with the y axis
//! pointing up and printed with three decimals, so equal inputs give
//! byte-identical documents.

use std::fmt::Write as _;

use crate::gadgets::{GadgetInstance, Provenance};
use crate::geometry::{crossing, Crossing, Point, Scalar};
use crate::path::{Instance, PathPair};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const RED: &str = "#d62728";
const BLUE: &str = "#1f77b4";
const BLOCKER: &str = "#555555";
const REGION: &str = "#2ca02c";
const RAY: &str = "#ff7f0e";

struct View {
    min: (f64, f64),
    scale: f64,
}

impl View {
    fn fit(points: &[(f64, f64)]) -> View {
        let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
        for &(x, y) in points {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        if points.is_empty() {
            lo = (0.0, 0.0);
            hi = (1.0, 1.0);
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1);
        let scale = if span > 0.0 { (SIZE - 2.0 * MARGIN) / span } else { 1.0 };
        View { min: lo, scale }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (
            MARGIN + (x - self.min.0) * self.scale,
            SIZE - MARGIN - (y - self.min.1) * self.scale,
        )
    }
}

/// Intersection point of two properly crossing segments.
fn intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> (f64, f64) {
    let r = (&b.x - &a.x, &b.y - &a.y);
    let s = (&d.x - &c.x, &d.y - &c.y);
    let denom = &r.0 * &s.1 - &r.1 * &s.0;
    let t: Scalar = ((&c.x - &a.x) * &s.1 - (&c.y - &a.y) * &s.0) / denom;
    Point::new(&a.x + &t * &r.0, &a.y + &t * &r.1).to_f64()
}

fn polyline(out: &mut String, view: &View, points: &[Point], order: &[usize], color: &str) {
    if order.len() < 2 {
        return;
    }
    let coords: Vec<String> = order
        .iter()
        .map(|&i| {
            let (x, y) = view.map(points[i].to_f64());
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"  <polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
        coords.join(" ")
    );
}

fn dot(out: &mut String, view: &View, p: &Point, r: f64, color: &str) {
    let (x, y) = view.map(p.to_f64());
    let _ = writeln!(out, r#"  <circle cx="{x:.3}" cy="{y:.3}" r="{r}" fill="{color}"/>"#);
}

fn provenance_color(p: &Provenance) -> &'static str {
    match p {
        Provenance::Blocker { .. } => BLOCKER,
        Provenance::RegionPoint { .. } => REGION,
        Provenance::RayPoint { .. } => RAY,
    }
}

/// Red and blue points, the two paths when given, every red/blue crossing
/// marked with a cross, and gadget points (U red, W by provenance).
pub fn render_svg(instance: Option<&Instance>, pair: Option<&PathPair>, gadget: Option<&GadgetInstance>) -> String {
    let mut all: Vec<(f64, f64)> = Vec::new();
    if let Some(inst) = instance {
        all.extend(inst.red().iter().chain(inst.blue()).map(Point::to_f64));
    }
    if let Some(g) = gadget {
        all.extend(g.u.iter().chain(&g.w).map(Point::to_f64));
    }
    let view = View::fit(&all);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"  <rect width="100%" height="100%" fill="white"/>"#);

    if let (Some(inst), Some(pair)) = (instance, pair) {
        polyline(&mut s, &view, inst.red(), pair.red.vertices(), RED);
        polyline(&mut s, &view, inst.blue(), pair.blue.vertices(), BLUE);
        let mut marks = Vec::new();
        for (a, b) in pair.red.segments() {
            for (c, d) in pair.blue.segments() {
                let (pa, pb) = (&inst.red()[a], &inst.red()[b]);
                let (pc, pd) = (&inst.blue()[c], &inst.blue()[d]);
                if crossing(pa, pb, pc, pd) == Crossing::Proper {
                    marks.push(view.map(intersection(pa, pb, pc, pd)));
                }
            }
        }
        for (x, y) in &marks {
            let _ = writeln!(
                s,
                r#"  <path d="M{:.3},{:.3} L{:.3},{:.3} M{:.3},{:.3} L{:.3},{:.3}" stroke="black" stroke-width="2"/>"#,
                x - 6.0,
                y - 6.0,
                x + 6.0,
                y + 6.0,
                x - 6.0,
                y + 6.0,
                x + 6.0,
                y - 6.0
            );
        }
        let _ = writeln!(
            s,
            r#"  <text x="{MARGIN}" y="24" font-family="sans-serif" font-size="16">crossings: {}</text>"#,
            marks.len()
        );
    }
    if let Some(inst) = instance {
        for p in inst.red() {
            dot(&mut s, &view, p, 4.0, RED);
        }
        for p in inst.blue() {
            dot(&mut s, &view, p, 4.0, BLUE);
        }
    }
    if let Some(g) = gadget {
        for p in &g.u {
            dot(&mut s, &view, p, 4.0, RED);
        }
        for (p, l) in g.w.iter().zip(&g.labels) {
            dot(&mut s, &view, p, 2.5, provenance_color(&l.provenance));
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::forced_crossing_instance;
    use crate::gadgets::{convert_function2, corpus};
    use crate::generate::{gen_instance, GeneratorConfig};
    use crate::heuristic::{solve, SolverConfig};

    #[test]
    fn points_only() {
        let inst = gen_instance(&GeneratorConfig::new(6, 1)).unwrap();
        let svg = render_svg(Some(&inst), None, None);
        assert_eq!(svg.matches("<circle").count(), 12);
        assert!(!svg.contains("<polyline"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn solved_instance_annotates_crossings() {
        let inst = forced_crossing_instance();
        let res = crate::exact::optimal_pair(&inst, None).unwrap();
        let svg = render_svg(Some(&inst), Some(&res.pair), None);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("crossings: 1"));
        // The cross sits at (1, 0), the middle of the figure horizontally.
        assert!(svg.contains("M394.000,"));
    }

    #[test]
    fn crossing_marks_match_count() {
        for seed in 0..5 {
            let inst = gen_instance(&GeneratorConfig::new(12, seed)).unwrap();
            let res = solve(&inst, &SolverConfig::new(seed)).unwrap();
            let svg = render_svg(Some(&inst), Some(&res.pair), None);
            assert_eq!(svg.matches("<path").count(), res.pair.crossings);
            assert_eq!(svg, render_svg(Some(&inst), Some(&res.pair), None));
        }
    }

    #[test]
    fn gadget_colors() {
        let g = corpus::corpus().into_iter().find(|c| c.name == "path-3").unwrap().graph;
        let gi = convert_function2(&g).unwrap();
        let svg = render_svg(None, None, Some(&gi));
        assert_eq!(svg.matches(RED).count(), 3);
        assert_eq!(svg.matches(BLOCKER).count(), gi.blockers());
        assert!(svg.contains(REGION) && svg.contains(RAY));
    }

    #[test]
    fn y_axis_points_up() {
        let v = View::fit(&[(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(v.map((0.0, 0.0)), (MARGIN, SIZE - MARGIN));
        assert_eq!(v.map((1.0, 1.0)), (SIZE - MARGIN, MARGIN));
    }
}

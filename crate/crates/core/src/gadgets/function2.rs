use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_traits::{One, ToPrimitive, Zero};

use super::fan::{cross, strictly_inside, Dir, ExtendedEdgeFan};
use super::{all_pairs, GadgetError, GadgetInstance, Mode, PlaneGraph, Provenance, WLabel};
use crate::geometry::{dist_sq_to_segment, isqrt_exact, point_on_segment, sqrt_upper, Point, Scalar};

/// Validation failures tolerated before giving up on ε.
pub const MAX_HALVINGS: u32 = 40;

/// Largest power of two `ε` with `16 ε² ≤ m`, where `m` is the smaller of
/// the minimum squared vertex distance and the minimum squared distance from
/// a vertex to an edge not incident to it. Graphs with fewer than two
/// vertices get `ε = 1`.
pub fn initial_epsilon(g: &PlaneGraph) -> Scalar {
    let v = g.vertices();
    let mut m: Option<Scalar> = None;
    let mut offer = |d: Scalar| {
        if m.as_ref().is_none_or(|cur| d < *cur) {
            m = Some(d);
        }
    };
    for (i, j) in all_pairs(v.len()) {
        offer(v[i].dist_sq(&v[j]));
    }
    for (k, p) in v.iter().enumerate() {
        for &(a, b) in g.edges() {
            if k != a && k != b {
                offer(dist_sq_to_segment(p, &v[a], &v[b]));
            }
        }
    }
    let Some(m) = m else {
        return Scalar::one();
    };
    let sixteen = Scalar::from_integer(16.into());
    let two = Scalar::from_integer(2.into());
    let fits = |e: &Scalar| &sixteen * e * e <= m;
    let mut eps = Scalar::one();
    if fits(&eps) {
        while fits(&(&eps * &two)) {
            eps *= &two;
        }
    } else {
        while !fits(&eps) {
            eps /= &two;
        }
    }
    eps
}

/// The ε that [`convert_function2`] settles on after validation.
pub fn choose_epsilon(g: &PlaneGraph) -> Result<Scalar, GadgetError> {
    Ok(convert_function2(g)?.epsilon.expect("function2 output carries epsilon"))
}

/// Distance-ε construction. Starts from [`initial_epsilon`] and halves ε
/// until no point lands on a vertex-pair segment other than its own
/// non-edge and all points are distinct.
pub fn convert_function2(g: &PlaneGraph) -> Result<GadgetInstance, GadgetError> {
    let mut eps = initial_epsilon(g);
    let two = Scalar::from_integer(2.into());
    for halvings in 0..=MAX_HALVINGS {
        let gi = build(g, &eps, halvings)?;
        if validate(g, &gi) {
            return Ok(gi);
        }
        eps /= &two;
    }
    Err(GadgetError::EpsilonExhausted(MAX_HALVINGS))
}

pub(crate) fn build(g: &PlaneGraph, eps: &Scalar, halvings: u32) -> Result<GadgetInstance, GadgetError> {
    let u = g.vertices();
    let mut w = Vec::new();
    let mut labels = Vec::new();
    let mut push = |p: Point, provenance: Provenance, exact_distance: bool| {
        w.push(p);
        labels.push(WLabel {
            provenance,
            exact_distance,
        });
    };

    let non_edges = g.non_edges();
    for &(a, b) in &non_edges {
        for (near, far) in [(a, b), (b, a)] {
            let (p, exact) = toward(&u[near], &dir(&u[near], &u[far]), eps);
            push(
                p,
                Provenance::Blocker {
                    non_edge: (a, b),
                    near: Some(near),
                },
                exact,
            );
        }
    }

    for v in 0..u.len() {
        let center = &u[v];
        let forbidden: Vec<Dir> = (0..u.len()).filter(|&x| x != v).map(|x| dir(center, &u[x])).collect();
        let off_vertex_lines = |d: &Dir| forbidden.iter().all(|f| !cross(f, d).is_zero());
        let fan = ExtendedEdgeFan::new(g, v);
        if fan.sector_count() == 0 {
            for i in 0..3 {
                let angle = TAU * i as f64 / 3.0;
                let d = rational_unit_direction((angle.cos(), angle.sin()), off_vertex_lines)
                    .ok_or(GadgetError::DirectionUnavailable(v))?;
                push(offset(center, &d, eps), Provenance::RegionPoint { vertex: v, sector: i }, true);
            }
            continue;
        }
        let blocker_dirs: Vec<Dir> = non_edges
            .iter()
            .filter_map(|&(a, b)| match v {
                _ if a == v => Some(b),
                _ if b == v => Some(a),
                _ => None,
            })
            .map(|x| dir(center, &u[x]))
            .collect();
        for sector in 0..fan.sector_count() {
            if blocker_dirs.iter().any(|bd| fan.sector_of(bd) == Some(sector)) {
                continue;
            }
            let (a, b) = fan.sector_bounds(sector);
            let d = rational_unit_direction(bisector(a, b), |d| strictly_inside(a, b, d) && off_vertex_lines(d))
                .ok_or(GadgetError::DirectionUnavailable(v))?;
            push(offset(center, &d, eps), Provenance::RegionPoint { vertex: v, sector }, true);
        }
        for nb in g.neighbors(v) {
            let (p, exact) = toward(center, &dir(&u[nb], center), eps);
            push(p, Provenance::RayPoint { vertex: v, neighbor: nb }, exact);
        }
    }

    Ok(GadgetInstance {
        mode: Mode::Function2,
        u: u.to_vec(),
        w,
        labels,
        epsilon: Some(eps.clone()),
        halvings,
    })
}

/// No point lies on a vertex-pair segment except a blocker on its own
/// non-edge, and no two points of U and W coincide.
pub(crate) fn validate(g: &PlaneGraph, gi: &GadgetInstance) -> bool {
    let mut all: Vec<&Point> = gi.u.iter().chain(&gi.w).collect();
    all.sort();
    if all.windows(2).any(|p| p[0] == p[1]) {
        return false;
    }
    let pairs = all_pairs(g.len());
    gi.w.iter().zip(&gi.labels).all(|(p, label)| {
        pairs.iter().all(|&(x, y)| {
            !point_on_segment(p, &gi.u[x], &gi.u[y])
                || matches!(label.provenance, Provenance::Blocker { non_edge, .. } if non_edge == (x, y))
        })
    })
}

fn dir(from: &Point, to: &Point) -> Dir {
    (&to.x - &from.x, &to.y - &from.y)
}

fn offset(center: &Point, d: &Dir, scale: &Scalar) -> Point {
    Point::new(&center.x + scale * &d.0, &center.y + scale * &d.1)
}

/// Point on the ray from `center` along `d` at distance ε when `|d|` is
/// rational, otherwise at a distance in `[ε/2, ε)`. Returns whether the
/// distance is exact.
fn toward(center: &Point, d: &Dir, eps: &Scalar) -> (Point, bool) {
    let len_sq = &d.0 * &d.0 + &d.1 * &d.1;
    if let Some(len) = isqrt_exact(&len_sq) {
        return (offset(center, d, &(eps / len)), true);
    }
    let four = Scalar::from_integer(4.into());
    let mut bits = 32;
    let upper = loop {
        let (up, _) = sqrt_upper(&len_sq, bits);
        if &up * &up <= &four * &len_sq {
            break up;
        }
        bits += 32;
    };
    (offset(center, d, &(eps / upper)), false)
}

fn to_f64(d: &Dir) -> (f64, f64) {
    (d.0.to_f64().unwrap_or(0.0), d.1.to_f64().unwrap_or(0.0))
}

/// Approximate angle bisector of the counter-clockwise sweep from `a` to `b`.
fn bisector(a: &Dir, b: &Dir) -> (f64, f64) {
    let (ax, ay) = to_f64(a);
    let (bx, by) = to_f64(b);
    let (la, lb) = (ax.hypot(ay), bx.hypot(by));
    let (ax, ay, bx, by) = (ax / la, ay / la, bx / lb, by / lb);
    let c = cross(a, b);
    if c.is_zero() {
        // Half-plane: rotate `a` a quarter turn.
        (-ay, ax)
    } else if c > Scalar::zero() {
        (ax + bx, ay + by)
    } else {
        (-(ax + bx), -(ay + by))
    }
}

/// Exact unit vector `((1 - t²)/(1 + t²), 2t/(1 + t²))` near `target`, with
/// dyadic `t` refined until `accept` holds. At each precision the rounded
/// `t` is tried first, then its two neighbors, so a rejected exact bisector
/// is stepped around.
fn rational_unit_direction(target: (f64, f64), accept: impl Fn(&Dir) -> bool) -> Option<Dir> {
    let theta = target.1.atan2(target.0);
    let (flip, half) = if theta.abs() <= FRAC_PI_2 {
        (false, theta / 2.0)
    } else {
        (true, (theta - PI.copysign(theta)) / 2.0)
    };
    let tf = half.tan();
    for bits in (4..=52).step_by(4) {
        let den = 1i64 << bits;
        let k = (tf * den as f64).round() as i64;
        for step in [0, 1, -1] {
            let t = Scalar::new((k + step).into(), den.into());
            let t2 = &t * &t;
            let one = Scalar::one();
            let q = &one + &t2;
            let mut d = ((&one - &t2) / &q, (&t + &t) / &q);
            if flip {
                d = (-d.0, -d.1);
            }
            if accept(&d) {
                return Some(d);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{corpus, side_counts, verify_visibility_iff_edge};

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn path_abc() -> PlaneGraph {
        PlaneGraph::new(vec![p(0, 0), p(2, 0), p(1, 2)], vec![(0, 1), (1, 2)]).unwrap()
    }

    fn non_blockers_of(gi: &GadgetInstance, v: usize) -> usize {
        gi.owned_by(v)
            .filter(|(_, l)| !matches!(l.provenance, Provenance::Blocker { .. }))
            .count()
    }

    #[test]
    fn path_example_counts() {
        let g = path_abc();
        let gi = convert_function2(&g).unwrap();
        assert_eq!(gi.w.len(), 12);
        assert_eq!(gi.blockers(), 2);
        assert_eq!(non_blockers_of(&gi, 0), 2);
        assert_eq!(non_blockers_of(&gi, 1), 6);
        assert_eq!(non_blockers_of(&gi, 2), 2);
        let sides = side_counts(&g, &gi, 1).unwrap();
        assert_eq!((sides.concave_points, sides.convex_points), (5, 1));
        assert_eq!((sides.concave_positions, sides.convex_positions), (5, 1));
        assert!(verify_visibility_iff_edge(&g, &gi).passed());
    }

    #[test]
    fn epsilon_bound() {
        // Unit-spaced right triangle: min vertex distance 1, but the right
        // angle vertex is 1/sqrt(2) from the hypotenuse, so ε = 1/8.
        let g = PlaneGraph::new(vec![p(0, 0), p(1, 0), p(0, 1)], vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(initial_epsilon(&g), Scalar::new(1.into(), 8.into()));
        let g = path_abc();
        // Min squared distance: a-c 5, b-c 5, a-b 4; a to edge b-c: 16/5.
        let eps = initial_epsilon(&g);
        assert_eq!(eps, Scalar::new(1.into(), 4.into()));
        assert!(Scalar::from_integer(16.into()) * &eps * &eps <= Scalar::new(16.into(), 5.into()));
        assert_eq!(choose_epsilon(&g).unwrap(), eps);
    }

    #[test]
    fn distances_respect_flags() {
        for c in corpus::corpus() {
            let gi = convert_function2(&c.graph).unwrap();
            let eps = gi.epsilon.clone().unwrap();
            let e2 = &eps * &eps;
            for (pt, label) in gi.w.iter().zip(&gi.labels) {
                let v = label.provenance.owner().unwrap();
                let d2 = pt.dist_sq(&gi.u[v]);
                if label.exact_distance {
                    assert_eq!(d2, e2, "{}", c.name);
                } else {
                    assert!(d2 < e2 && Scalar::from_integer(4.into()) * &d2 >= e2, "{}", c.name);
                }
            }
        }
    }

    #[test]
    fn region_points_exact_and_inside_sector() {
        for c in corpus::corpus() {
            let gi = convert_function2(&c.graph).unwrap();
            for (pt, label) in gi.w.iter().zip(&gi.labels) {
                if let Provenance::RegionPoint { vertex, sector } = label.provenance {
                    assert!(label.exact_distance);
                    let fan = ExtendedEdgeFan::new(&c.graph, vertex);
                    if fan.sector_count() > 0 {
                        let d = dir(&gi.u[vertex], pt);
                        assert_eq!(fan.sector_of(&d), Some(sector), "{}", c.name);
                    }
                }
            }
        }
    }

    #[test]
    fn per_vertex_structure() {
        for c in corpus::corpus() {
            let g = &c.graph;
            let gi = convert_function2(g).unwrap();
            assert_eq!(gi.blockers(), 2 * g.non_edges().len());
            for v in 0..g.len() {
                let rays = gi
                    .owned_by(v)
                    .filter(|(_, l)| matches!(l.provenance, Provenance::RayPoint { .. }))
                    .count();
                assert_eq!(rays, g.degree(v));
                match g.degree(v) {
                    0 => assert_eq!(non_blockers_of(&gi, v), 3),
                    1 => assert!(gi.epsilon_points(v) >= 3, "{} vertex {v}", c.name),
                    2 => {
                        let s = side_counts(g, &gi, v).unwrap();
                        assert_eq!((s.concave_positions, s.convex_positions), (5, 1), "{}", c.name);
                        assert!(s.concave_points >= 5 && s.convex_points >= 1);
                    }
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn halving_path_fires() {
        // Two far isolated vertices placed so that the segment between them
        // passes through a region point of b built with the first ε.
        let base = path_abc();
        let eps = initial_epsilon(&base);
        let first = build(&base, &eps, 0).unwrap();
        let (w, _) = first
            .w
            .iter()
            .zip(&first.labels)
            .find(|(_, l)| matches!(l.provenance, Provenance::RegionPoint { vertex: 1, .. }))
            .unwrap();
        let b = &base.vertices()[1];
        let perp = (-(&w.y - &b.y), &w.x - &b.x);
        let k = Scalar::from_integer(50.into());
        let x1 = Point::new(&w.x + &k * &perp.0, &w.y + &k * &perp.1);
        let x2 = Point::new(&w.x - &k * &perp.0, &w.y - &k * &perp.1);
        let mut vertices = base.vertices().to_vec();
        vertices.extend([x1, x2]);
        let g = PlaneGraph::new(vertices, base.edges().to_vec()).unwrap();
        assert_eq!(initial_epsilon(&g), eps);
        assert!(!validate(&g, &build(&g, &eps, 0).unwrap()));
        let gi = convert_function2(&g).unwrap();
        assert!(gi.halvings >= 1);
        assert!(gi.epsilon.clone().unwrap() < eps);
        assert!(verify_visibility_iff_edge(&g, &gi).passed());
    }

    #[test]
    fn isolated_vertex_gets_three_points() {
        let g = PlaneGraph::new(vec![p(0, 0), p(5, 1), p(2, 7)], vec![(0, 1)]).unwrap();
        let gi = convert_function2(&g).unwrap();
        assert_eq!(non_blockers_of(&gi, 2), 3);
        assert!(verify_visibility_iff_edge(&g, &gi).passed());
    }

    #[test]
    fn unit_directions_are_exact() {
        for k in 0..16 {
            let a = TAU * k as f64 / 16.0 + 0.01;
            let d = rational_unit_direction((a.cos(), a.sin()), |_| true).unwrap();
            assert_eq!(&d.0 * &d.0 + &d.1 * &d.1, Scalar::one());
            let (x, y) = to_f64(&d);
            assert!(x * a.cos() + y * a.sin() > 0.99);
        }
    }
}

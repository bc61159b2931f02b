//! Exact planar kernel.
//!
//! Every predicate here is decided by exact arithmetic. Coordinates are
//! arbitrary-precision rationals ([`Point`]); algorithms that run in hot
//! loops are generic over [`Planar`] so they can also execute on an integer
//! lattice ([`GridPoint`]) obtained by scaling a rational point set by a
//! common denominator. Scaling by a positive factor preserves every
//! predicate outcome, so both representations give identical answers.

mod exact;
mod frame;
mod hull;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use exact::{isqrt_exact, sqrt_upper};
pub use frame::{to_grid, GRID_LIMIT};
pub use hull::{convex_hull, convex_hull_indices};

/// Exact rational coordinate value.
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("at least three points are required, got {0}")]
    FewerThanThreePoints(usize),
    #[error("duplicate points in input")]
    DuplicatePoints,
    #[error("all input points are collinear")]
    AllCollinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

impl Orientation {
    fn from_sign(ord: Ordering) -> Self {
        match ord {
            Ordering::Greater => Orientation::Left,
            Ordering::Less => Orientation::Right,
            Ordering::Equal => Orientation::Collinear,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// How two closed segments meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Crossing {
    /// Interiors cross transversally at a single point.
    Proper,
    /// Contact at an endpoint of either segment, or collinear overlap.
    Improper,
    None,
}

/// Coordinate representation the kernel can decide predicates on.
pub trait Planar: Clone + Eq + Ord + fmt::Debug + Send + Sync {
    /// Sign of the determinant of `(q - self, r - self)`.
    fn orient(&self, q: &Self, r: &Self) -> Orientation;
    fn cmp_x(&self, other: &Self) -> Ordering;
    fn cmp_y(&self, other: &Self) -> Ordering;
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Scalar::from_integer(x.into()), Scalar::from_integer(y.into()))
    }

    /// Point with coordinates `x_num / x_den`, `y_num / y_den`.
    pub fn from_ratios(x_num: i64, x_den: i64, y_num: i64, y_den: i64) -> Self {
        Point::new(
            Scalar::new(x_num.into(), x_den.into()),
            Scalar::new(y_num.into(), y_den.into()),
        )
    }

    pub fn dist_sq(&self, other: &Point) -> Scalar {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }

    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (
            self.x.to_f64().unwrap_or(f64::NAN),
            self.y.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `a - b` as an unreduced fraction with positive denominator. Skipping the
/// gcd normalization of `BigRational` arithmetic keeps predicates cheap.
fn raw_diff(a: &Scalar, b: &Scalar) -> (BigInt, BigInt) {
    if a.denom() == b.denom() {
        (a.numer() - b.numer(), a.denom().clone())
    } else {
        (a.numer() * b.denom() - b.numer() * a.denom(), a.denom() * b.denom())
    }
}

impl Planar for Point {
    fn orient(&self, q: &Self, r: &Self) -> Orientation {
        let (n1, d1) = raw_diff(&q.x, &self.x);
        let (n2, d2) = raw_diff(&r.y, &self.y);
        let (n3, d3) = raw_diff(&q.y, &self.y);
        let (n4, d4) = raw_diff(&r.x, &self.x);
        let (left, left_den) = (n1 * n2, d1 * d2);
        let (right, right_den) = (n3 * n4, d3 * d4);
        let det = if left_den == right_den {
            left - right
        } else {
            left * right_den - right * left_den
        };
        Orientation::from_sign(det.sign_ord())
    }

    fn cmp_x(&self, other: &Self) -> Ordering {
        self.x.cmp(&other.x)
    }

    fn cmp_y(&self, other: &Self) -> Ordering {
        self.y.cmp(&other.y)
    }
}

trait SignOrd {
    fn sign_ord(&self) -> Ordering;
}

impl SignOrd for BigInt {
    fn sign_ord(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

/// Integer lattice point. Coordinates are bounded by [`GRID_LIMIT`] in
/// absolute value so that orientation determinants fit in `i128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        GridPoint { x, y }
    }

    /// Twice the signed area of triangle `(self, q, r)`.
    pub fn det(&self, q: &Self, r: &Self) -> i128 {
        let (ax, ay) = ((q.x - self.x) as i128, (q.y - self.y) as i128);
        let (bx, by) = ((r.x - self.x) as i128, (r.y - self.y) as i128);
        ax * by - ay * bx
    }
}

impl Planar for GridPoint {
    #[inline]
    fn orient(&self, q: &Self, r: &Self) -> Orientation {
        Orientation::from_sign(self.det(q, r).cmp(&0))
    }

    #[inline]
    fn cmp_x(&self, other: &Self) -> Ordering {
        self.x.cmp(&other.x)
    }

    #[inline]
    fn cmp_y(&self, other: &Self) -> Ordering {
        self.y.cmp(&other.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment<P = Point> {
    pub a: P,
    pub b: P,
}

impl<P: Planar> Segment<P> {
    /// Returns `None` when both endpoints coincide.
    pub fn new(a: P, b: P) -> Option<Self> {
        (a != b).then_some(Segment { a, b })
    }
}

pub fn orientation<P: Planar>(p: &P, q: &P, r: &P) -> Orientation {
    p.orient(q, r)
}

/// True iff `p` is collinear with `a`-`b` and inside its closed bounding box.
pub fn point_on_segment<P: Planar>(p: &P, a: &P, b: &P) -> bool {
    p.orient(a, b) == Orientation::Collinear && in_box(p, a, b)
}

#[inline]
fn in_box<P: Planar>(p: &P, a: &P, b: &P) -> bool {
    let between = |lo: Ordering, hi: Ordering| lo != Ordering::Less && hi != Ordering::Greater;
    let (x_lo, x_hi) = if a.cmp_x(b) == Ordering::Greater { (b, a) } else { (a, b) };
    let (y_lo, y_hi) = if a.cmp_y(b) == Ordering::Greater { (b, a) } else { (a, b) };
    between(p.cmp_x(x_lo), p.cmp_x(x_hi)) && between(p.cmp_y(y_lo), p.cmp_y(y_hi))
}

/// Classifies how segment `a1`-`a2` meets segment `b1`-`b2`.
pub fn crossing<P: Planar>(a1: &P, a2: &P, b1: &P, b2: &P) -> Crossing {
    let o1 = a1.orient(a2, b1);
    let o2 = a1.orient(a2, b2);
    let o3 = b1.orient(b2, a1);
    let o4 = b1.orient(b2, a2);
    use Orientation::Collinear;
    if o1 != Collinear && o2 != Collinear && o3 != Collinear && o4 != Collinear {
        return if o1 != o2 && o3 != o4 {
            Crossing::Proper
        } else {
            Crossing::None
        };
    }
    let touches = (o1 == Collinear && in_box(b1, a1, a2))
        || (o2 == Collinear && in_box(b2, a1, a2))
        || (o3 == Collinear && in_box(a1, b1, b2))
        || (o4 == Collinear && in_box(a2, b1, b2));
    if touches {
        Crossing::Improper
    } else {
        Crossing::None
    }
}

pub fn segments_cross<P: Planar>(s1: &Segment<P>, s2: &Segment<P>) -> Crossing {
    crossing(&s1.a, &s1.b, &s2.a, &s2.b)
}

/// For two segments `shared`-`a` and `shared`-`b` with a common endpoint:
/// true iff they meet only at `shared` (no collinear overlap).
#[inline]
pub fn meet_only_at<P: Planar>(shared: &P, a: &P, b: &P) -> bool {
    if shared.orient(a, b) != Orientation::Collinear {
        return true;
    }
    // Collinear: overlap iff `a` and `b` leave `shared` in the same direction.
    let same_x = a.cmp_x(shared) == b.cmp_x(shared);
    let same_y = a.cmp_y(shared) == b.cmp_y(shared);
    !(same_x && same_y)
}

/// True iff the point set has no duplicates and no three collinear points.
pub fn is_general_position<P: Planar>(points: &[P]) -> bool {
    let mut sorted: Vec<&P> = points.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if points[i].orient(&points[j], &points[k]) == Orientation::Collinear {
                    return false;
                }
            }
        }
    }
    true
}

/// General-position check on rationals that runs on the lattice when the
/// coordinates allow it.
pub fn points_in_general_position(points: &[Point]) -> bool {
    match to_grid(points) {
        Some(grid) => is_general_position(&grid),
        None => is_general_position(points),
    }
}

/// Exact squared distance from `p` to the closed segment `a`-`b`.
pub fn dist_sq_to_segment(p: &Point, a: &Point, b: &Point) -> Scalar {
    let abx = &b.x - &a.x;
    let aby = &b.y - &a.y;
    let len_sq = &abx * &abx + &aby * &aby;
    if len_sq.is_zero() {
        return p.dist_sq(a);
    }
    let t = ((&p.x - &a.x) * &abx + (&p.y - &a.y) * &aby) / &len_sq;
    if !t.is_positive() {
        p.dist_sq(a)
    } else if t >= Scalar::from_integer(1.into()) {
        p.dist_sq(b)
    } else {
        let proj = Point::new(&a.x + &t * &abx, &a.y + &t * &aby);
        p.dist_sq(&proj)
    }
}

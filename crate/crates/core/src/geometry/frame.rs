use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::{GridPoint, Point};

/// Largest absolute lattice coordinate. Differences then stay below 2^62 and
/// orientation determinants below 2^125, well inside `i128`.
pub const GRID_LIMIT: i64 = 1 << 61;

/// Scales the point set by the least common multiple of all coordinate
/// denominators. Returns `None` when the scaled coordinates do not fit the
/// lattice bound; callers then fall back to rational arithmetic.
pub fn to_grid(points: &[Point]) -> Option<Vec<GridPoint>> {
    let mut lcm = BigInt::one();
    for p in points {
        lcm = lcm.lcm(p.x.denom());
        lcm = lcm.lcm(p.y.denom());
    }
    let limit = BigInt::from(GRID_LIMIT);
    let scale = |v: &num_rational::BigRational| -> Option<i64> {
        let scaled = v.numer() * (&lcm / v.denom());
        if scaled.abs() > limit {
            return None;
        }
        scaled.to_i64()
    };
    points
        .iter()
        .map(|p| Some(GridPoint::new(scale(&p.x)?, scale(&p.y)?)))
        .collect()
}

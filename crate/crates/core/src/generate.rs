//! Seeded random instances.
//!
//! Coordinates are `side * k / 2^32` with `k` the top 32 bits of one
//! generator output, drawn x then y, all red points before all blue points.
//! A candidate point is redrawn whenever it coincides with an accepted point
//! or forms a triangle of doubled area `<= min_doubled_area` with any two
//! accepted points.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::geometry::{GridPoint, Point, Scalar};
use crate::path::Instance;
use crate::rng::SolverRng;

const COORD_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(&'static str),
    #[error("rejection sampling stalled after {0} rejected candidates")]
    GenerationStalled(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    /// Points per color.
    pub n: usize,
    pub seed: u64,
    pub side: Scalar,
    pub min_doubled_area: Scalar,
}

impl GeneratorConfig {
    /// Unit square, doubled-area threshold `2^-40`.
    pub fn new(n: usize, seed: u64) -> Self {
        GeneratorConfig {
            n,
            seed,
            side: Scalar::one(),
            min_doubled_area: Scalar::new(BigInt::one(), BigInt::one() << 40),
        }
    }

    fn validate(&self) -> Result<(), GenerateError> {
        if self.n < 3 {
            return Err(GenerateError::InvalidConfig("n must be at least 3"));
        }
        if !self.side.is_positive() {
            return Err(GenerateError::InvalidConfig("side must be positive"));
        }
        if !self.min_doubled_area.is_positive() {
            return Err(GenerateError::InvalidConfig("area threshold must be positive"));
        }
        Ok(())
    }

    /// Lattice determinant bound equivalent to the area threshold.
    fn det_floor(&self) -> i128 {
        let t = &self.min_doubled_area * Scalar::from_integer(BigInt::one() << (2 * COORD_BITS))
            / (&self.side * &self.side);
        t.floor().to_integer().to_i128().unwrap_or(i128::MAX)
    }
}

pub fn gen_instance(cfg: &GeneratorConfig) -> Result<Instance, GenerateError> {
    cfg.validate()?;
    let det_floor = cfg.det_floor();
    let mut rng = SolverRng::new(cfg.seed);
    let max_rejections = 10_000 + 1_000 * cfg.n;
    let mut rejections = 0;
    let mut accepted: Vec<GridPoint> = Vec::with_capacity(2 * cfg.n);
    while accepted.len() < 2 * cfg.n {
        let x = (rng.next_u64() >> (64 - COORD_BITS)) as i64;
        let y = (rng.next_u64() >> (64 - COORD_BITS)) as i64;
        let cand = GridPoint::new(x, y);
        if fits(&accepted, &cand, det_floor) {
            accepted.push(cand);
        } else {
            rejections += 1;
            if rejections > max_rejections {
                return Err(GenerateError::GenerationStalled(rejections));
            }
        }
    }
    let denom = BigInt::one() << COORD_BITS;
    let to_point = |g: &GridPoint| {
        Point::new(
            Scalar::new(BigInt::from(g.x), denom.clone()) * &cfg.side,
            Scalar::new(BigInt::from(g.y), denom.clone()) * &cfg.side,
        )
    };
    let (red, blue) = accepted.split_at(cfg.n);
    Instance::new(red.iter().map(to_point).collect(), blue.iter().map(to_point).collect())
        .map_err(|_| GenerateError::InvalidConfig("generated points failed validation"))
}

fn fits(accepted: &[GridPoint], cand: &GridPoint, det_floor: i128) -> bool {
    if accepted.contains(cand) {
        return false;
    }
    for (i, a) in accepted.iter().enumerate() {
        for b in &accepted[i + 1..] {
            if a.det(b, cand).abs() <= det_floor {
                return false;
            }
        }
    }
    true
}

/// Integer-coordinate point set inside `[0, range)^2`, used by property
/// tests that want frequent collinearities.
pub fn lattice_points(seed: u64, count: usize, range: i64) -> Vec<GridPoint> {
    let mut rng = SolverRng::new(seed);
    let r = range.max(1) as usize;
    (0..count)
        .map(|_| GridPoint::new(rng.below(r) as i64, rng.below(r) as i64))
        .collect()
}

//! Instances, index paths, simplicity and crossing counts.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    crossing, meet_only_at, points_in_general_position, to_grid, Crossing, GridPoint, Planar, Point,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("path index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("input path is not simple")]
    NonSimpleInput,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("{0} point set is empty")]
    EmptyColor(Color),
    #[error("red and blue sets share a point")]
    SharedPoint,
    #[error("points are not in general position")]
    NotGeneralPosition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

/// Two disjoint point sets, jointly in general position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    red: Vec<Point>,
    blue: Vec<Point>,
}

impl Instance {
    pub fn new(red: Vec<Point>, blue: Vec<Point>) -> Result<Self, InstanceError> {
        if red.is_empty() {
            return Err(InstanceError::EmptyColor(Color::Red));
        }
        if blue.is_empty() {
            return Err(InstanceError::EmptyColor(Color::Blue));
        }
        if red.iter().any(|r| blue.contains(r)) {
            return Err(InstanceError::SharedPoint);
        }
        let all: Vec<Point> = red.iter().chain(&blue).cloned().collect();
        if !points_in_general_position(&all) {
            return Err(InstanceError::NotGeneralPosition);
        }
        Ok(Instance { red, blue })
    }

    pub fn red(&self) -> &[Point] {
        &self.red
    }

    pub fn blue(&self) -> &[Point] {
        &self.blue
    }

    pub fn points(&self, color: Color) -> &[Point] {
        match color {
            Color::Red => &self.red,
            Color::Blue => &self.blue,
        }
    }

    /// Same sets with colors exchanged.
    pub fn swapped(&self) -> Instance {
        Instance {
            red: self.blue.clone(),
            blue: self.red.clone(),
        }
    }
}

/// An instance's coordinates on the fastest exact kernel that can hold
/// them: the integer lattice when the common-denominator scaling fits,
/// rationals otherwise.
pub enum InstanceFrame {
    Grid { red: Vec<GridPoint>, blue: Vec<GridPoint> },
    Exact { red: Vec<Point>, blue: Vec<Point> },
}

impl InstanceFrame {
    pub fn new(instance: &Instance) -> Self {
        let all: Vec<Point> = instance.red.iter().chain(&instance.blue).cloned().collect();
        match to_grid(&all) {
            Some(mut grid) => {
                let blue = grid.split_off(instance.red.len());
                InstanceFrame::Grid { red: grid, blue }
            }
            None => InstanceFrame::Exact {
                red: instance.red.clone(),
                blue: instance.blue.clone(),
            },
        }
    }
}

/// Vertex sequence over one color's point list, stored as indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolyPath(pub Vec<usize>);

impl PolyPath {
    pub fn new(vertices: Vec<usize>) -> Self {
        PolyPath(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> PolyPath {
        PolyPath(self.0.iter().rev().copied().collect())
    }

    /// Consecutive vertex pairs.
    pub fn segments(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    fn check_range(&self, len: usize) -> Result<(), PathError> {
        match self.0.iter().find(|&&i| i >= len) {
            Some(&index) => Err(PathError::IndexOutOfRange { index, len }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathPair {
    pub red: PolyPath,
    pub blue: PolyPath,
    pub crossings: usize,
}

impl PathPair {
    pub fn is_disjoint(&self) -> bool {
        self.crossings == 0
    }
}

/// Simplicity over any coordinate kernel: distinct vertices, no contact
/// between non-consecutive segments, consecutive segments meeting only at
/// their shared vertex.
pub fn is_simple_in<P: Planar>(vertices: &[usize], points: &[P]) -> bool {
    let mut seen = vec![false; points.len()];
    for &v in vertices {
        if std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    let k = vertices.len();
    for i in 0..k.saturating_sub(1) {
        let (a1, a2) = (&points[vertices[i]], &points[vertices[i + 1]]);
        if a1 == a2 {
            return false;
        }
        if i + 2 < k && !meet_only_at(a2, a1, &points[vertices[i + 2]]) {
            return false;
        }
        for j in i + 2..k.saturating_sub(1) {
            let (b1, b2) = (&points[vertices[j]], &points[vertices[j + 1]]);
            if crossing(a1, a2, b1, b2) != Crossing::None {
                return false;
            }
        }
    }
    true
}

pub fn is_simple_path(path: &PolyPath, points: &[Point]) -> Result<bool, PathError> {
    path.check_range(points.len())?;
    Ok(is_simple_in(path.vertices(), points))
}

/// True iff every index of the point list appears exactly once.
pub fn is_spanning(path: &PolyPath, num_points: usize) -> bool {
    if path.len() != num_points {
        return false;
    }
    let mut seen = vec![false; num_points];
    path.vertices()
        .iter()
        .all(|&v| v < num_points && !std::mem::replace(&mut seen[v], true))
}

/// Number of (red segment, blue segment) pairs that cross properly.
pub fn crossings_in<P: Planar>(a: &[usize], a_pts: &[P], b: &[usize], b_pts: &[P]) -> usize {
    let mut count = 0;
    for sa in a.windows(2) {
        for sb in b.windows(2) {
            if crossing(&a_pts[sa[0]], &a_pts[sa[1]], &b_pts[sb[0]], &b_pts[sb[1]]) == Crossing::Proper
            {
                count += 1;
            }
        }
    }
    count
}

pub fn count_crossings(
    a: &PolyPath,
    a_points: &[Point],
    b: &PolyPath,
    b_points: &[Point],
) -> Result<usize, PathError> {
    if !is_simple_path(a, a_points)? || !is_simple_path(b, b_points)? {
        return Err(PathError::NonSimpleInput);
    }
    Ok(crossings_in(a.vertices(), a_points, b.vertices(), b_points))
}

impl Instance {
    /// Builds a verified [`PathPair`]: both paths simple, crossings counted.
    pub fn pair(&self, red: PolyPath, blue: PolyPath) -> Result<PathPair, PathError> {
        let crossings = count_crossings(&red, &self.red, &blue, &self.blue)?;
        Ok(PathPair { red, blue, crossings })
    }

    /// True iff the pair is a full solution candidate: both paths simple and
    /// spanning, and its recorded crossing count is correct.
    pub fn validates(&self, pair: &PathPair) -> bool {
        is_spanning(&pair.red, self.red.len())
            && is_spanning(&pair.blue, self.blue.len())
            && count_crossings(&pair.red, &self.red, &pair.blue, &self.blue) == Ok(pair.crossings)
    }
}

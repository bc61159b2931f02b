use std::cmp::Ordering;

use super::{to_grid, GeometryError, Orientation, Planar, Point};

/// Graham scan. Returns indices of the strict hull vertices in
/// counter-clockwise order, starting at the lowest-then-leftmost point.
/// Points in the interior of hull edges are excluded.
pub fn convex_hull_indices<P: Planar>(points: &[P]) -> Result<Vec<usize>, GeometryError> {
    let n = points.len();
    if n < 3 {
        return Err(GeometryError::FewerThanThreePoints(n));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| points[a].cmp(&points[b]));
    if order.windows(2).any(|w| points[w[0]] == points[w[1]]) {
        return Err(GeometryError::DuplicatePoints);
    }

    let pivot = (0..n)
        .min_by(|&a, &b| {
            points[a]
                .cmp_y(&points[b])
                .then_with(|| points[a].cmp_x(&points[b]))
        })
        .expect("non-empty");
    let origin = &points[pivot];

    let mut rest: Vec<usize> = (0..n).filter(|&i| i != pivot).collect();
    // All other points lie in the half-open upper half-plane around the
    // pivot, so orientation is a total angular order there. Along one ray,
    // distance from the pivot grows with (y, x).
    rest.sort_by(|&a, &b| match origin.orient(&points[a], &points[b]) {
        Orientation::Left => Ordering::Less,
        Orientation::Right => Ordering::Greater,
        Orientation::Collinear => points[a]
            .cmp_y(&points[b])
            .then_with(|| points[a].cmp_x(&points[b])),
    });

    let mut stack: Vec<usize> = vec![pivot];
    for &i in &rest {
        while stack.len() >= 2 {
            let top = stack[stack.len() - 1];
            let below = stack[stack.len() - 2];
            if points[below].orient(&points[top], &points[i]) == Orientation::Left {
                break;
            }
            stack.pop();
        }
        stack.push(i);
    }
    if stack.len() < 3 {
        return Err(GeometryError::AllCollinear);
    }
    Ok(stack)
}

/// Convex hull of rational points, counter-clockwise, hull vertices only.
pub fn convex_hull(points: &[Point]) -> Result<Vec<Point>, GeometryError> {
    let indices = match to_grid(points) {
        Some(grid) => convex_hull_indices(&grid)?,
        None => convex_hull_indices(points)?,
    };
    Ok(indices.into_iter().map(|i| points[i].clone()).collect())
}

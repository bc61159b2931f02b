//! Small hand-built instances shared by tests and the command line.

use crate::geometry::Point;
use crate::path::Instance;

/// Integer coordinate pair.
pub type Coords = (i64, i64);

/// Red set shaped like a pinwheel: seven hull points around seven skewed
/// inner points and a centre point. When the inner points get attached as
/// teeth into neighboring hull edges, each tooth hides the next hull vertex
/// from the centre and the last free point is sealed in, forcing a restart.
/// The blue set is a distant triangle that never interferes.
pub fn pocket_points() -> (Vec<Coords>, Vec<Coords>) {
    let red = vec![
        (3487, 1017),
        (3167, 1105),
        (-2213, 1704),
        (-2128, 1394),
        (-721, -3190),
        (332, -3380),
        (2902, -3721),
        (369, 315),
        (776, 409),
        (-463, 504),
        (-199, 313),
        (-416, -31),
        (179, -247),
        (829, 418),
        (140, 247),
    ];
    let blue = vec![(100000, 0), (100010, 3), (100004, 9)];
    (red, blue)
}

/// A red chain the heuristic actually reached on [`pocket_points`], with the
/// one free point (index 14) that sees no endpoint and no edge.
pub fn pocket_chain() -> (Vec<usize>, usize) {
    (vec![0, 1, 10, 9, 2, 12, 3, 11, 4, 7, 8, 13, 5, 6], 14)
}

fn to_points(raw: &[(i64, i64)]) -> Vec<Point> {
    raw.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()
}

/// [`pocket_points`] as an instance.
pub fn pocket_instance() -> Instance {
    let (red, blue) = pocket_points();
    Instance::new(to_points(&red), to_points(&blue)).expect("pocket points are in general position")
}

/// Two red and two blue points forming a cross: every pair of paths
/// crosses exactly once.
pub fn forced_crossing_instance() -> Instance {
    Instance::new(to_points(&[(0, 0), (2, 0)]), to_points(&[(1, -1), (1, 1)]))
        .expect("cross is in general position")
}

/// All points on the parabola `y = x²`, red for `x` in `0..n` and blue
/// further right: no three are collinear and a vertical line separates the
/// hulls, so no red segment can meet a blue one.
pub fn separable_instance(n: usize) -> Instance {
    let n = n as i64;
    let red: Vec<(i64, i64)> = (0..n).map(|i| (i, i * i)).collect();
    let blue: Vec<(i64, i64)> = (2 * n..3 * n).map(|i| (i, i * i)).collect();
    Instance::new(to_points(&red), to_points(&blue)).expect("parabolas are in general position")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        assert_eq!(pocket_instance().red().len(), 15);
        assert_eq!(forced_crossing_instance().blue().len(), 2);
        for n in 3..30 {
            assert_eq!(separable_instance(n).red().len(), n);
        }
    }
}

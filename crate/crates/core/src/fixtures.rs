//! Named configurations and a seeded generator of random general-position configurations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactla::int;
use crate::geometry::{check_general_position, LabeledPoint, PointConfig};

fn config(dim: usize, pts: &[(&str, &[i64])]) -> PointConfig {
    PointConfig::from_i64(dim, pts)
}

/// Unit square; labels are the coordinates, so `00` and `11` form the positive circuit part.
pub fn square() -> PointConfig {
    config(2, &[("00", &[0, 0]), ("10", &[1, 0]), ("11", &[1, 1]), ("01", &[0, 1])])
}

/// Square sheared so that all x-coordinates differ (admits the vertical ∞ direction).
pub fn sheared_square() -> PointConfig {
    config(2, &[("a", &[0, 0]), ("b", &[2, 1]), ("c", &[3, 3]), ("d", &[1, 2])])
}

/// Outer triangle `p1 p2 p3` with interior point `q`.
pub fn triangle_with_interior_point() -> PointConfig {
    config(2, &[("p1", &[0, 0]), ("p2", &[3, 0]), ("p3", &[0, 3]), ("q", &[1, 1])])
}

/// Same combinatorics with pairwise distinct x-coordinates.
pub fn triangle_with_interior_point_generic() -> PointConfig {
    config(2, &[("p1", &[0, 0]), ("p2", &[6, 1]), ("p3", &[2, 6]), ("q", &[3, 2])])
}

pub fn triangle() -> PointConfig {
    config(2, &[("p1", &[0, 0]), ("p2", &[2, 1]), ("p3", &[1, 3])])
}

/// Convex n-gon on the parabola `y = x^2` (distinct x, so ∞ = (0,1) is admissible).
pub fn convex_polygon(n: usize) -> PointConfig {
    let points = (0..n)
        .map(|i| LabeledPoint { label: format!("v{i}"), coords: vec![int(i as i64), int((i * i) as i64)] })
        .collect();
    PointConfig::new(2, points, None).expect("parabola points are in general position")
}

pub fn pentagon() -> PointConfig {
    config(2, &[("a", &[0, 0]), ("b", &[4, 0]), ("c", &[5, 3]), ("d", &[2, 5]), ("e", &[-1, 3])])
}

/// Hexagon of the web figure: i, j, k, l, m, n.
pub fn web_hexagon() -> PointConfig {
    config(2, &[("i", &[0, 6]), ("j", &[6, 6]), ("k", &[9, 3]), ("l", &[6, 0]), ("m", &[0, 0]), ("n", &[-3, 3])])
}

pub fn hexagon() -> PointConfig {
    config(2, &[("a", &[0, 0]), ("b", &[4, 0]), ("c", &[6, 3]), ("d", &[4, 6]), ("e", &[0, 6]), ("f", &[-2, 3])])
}

/// Pentagon with two interior points.
pub fn pentagon_with_two_interior_points() -> PointConfig {
    config(
        2,
        &[
            ("a", &[0, 0]),
            ("b", &[8, 0]),
            ("c", &[10, 6]),
            ("d", &[4, 10]),
            ("e", &[-2, 6]),
            ("x", &[3, 2]),
            ("y", &[5, 5]),
        ],
    )
}

pub fn simplex(d: usize) -> PointConfig {
    let points = (0..=d)
        .map(|i| LabeledPoint {
            label: format!("s{i}"),
            coords: (0..d).map(|k| int(if k + 1 == i { 1 } else { 0 })).collect(),
        })
        .collect();
    PointConfig::new(d, points, None).expect("standard simplex")
}

/// Points `0..r` on a line.
pub fn line(r: usize) -> PointConfig {
    let points = (0..r).map(|i| LabeledPoint { label: format!("t{i}"), coords: vec![int(i as i64)] }).collect();
    PointConfig::new(1, points, None).expect("distinct points on a line")
}

/// Vertical direction `(0, 1)` for ∞.
pub fn up() -> Vec<crate::Rational> {
    vec![int(0), int(1)]
}

/// Random general-position configuration with integer coordinates in `[-range, range]`.
/// With `infinity`, the direction `(0,…,0,1)` is attached and ∞-genericity enforced.
pub fn random_config(dim: usize, n: usize, seed: u64, range: i64, infinity: bool) -> PointConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = if n > 10 { 2 } else { 1 };
    loop {
        let points: Vec<LabeledPoint> = (0..n)
            .map(|i| LabeledPoint {
                label: format!("p{i:0width$}"),
                coords: (0..dim).map(|_| int(rng.gen_range(-range..=range))).collect(),
            })
            .collect();
        let dir = infinity.then(|| (0..dim).map(|k| int(if k + 1 == dim { 1 } else { 0 })).collect());
        let Ok(pc) = PointConfig::new(dim, points, dir) else { continue };
        if check_general_position(&pc).passes {
            return pc;
        }
    }
}

use num_traits::{Signed, Zero};

use super::SecondaryError;
use crate::exactla::Rational;
use crate::geometry::{Config, PointSet};
use crate::subdivision::{is_regular, Regularity, Subdivision};

/// One vertex per cell, at the rotated gradient (−b, a) of the cell's affine piece ax + by + c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WebVertex {
    pub cell: PointSet,
    pub position: [Rational; 2],
}

/// Edge dual to an interior wall shared by two cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WebEdge {
    pub from: usize,
    pub to: usize,
    pub wall: PointSet,
}

/// Unbounded edge dual to a boundary wall.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WebRay {
    pub vertex: usize,
    pub wall: PointSet,
    pub direction: [Rational; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Web {
    pub vertices: Vec<WebVertex>,
    pub edges: Vec<WebEdge>,
    pub rays: Vec<WebRay>,
    /// Every edge is a positive multiple of the rotated wall normal pointing from `from` to `to`.
    pub balanced: bool,
}

fn rot(v: [Rational; 2]) -> [Rational; 2] {
    let [x, y] = v;
    [-y, x]
}

/// Normal of the wall (p, q) pointing away from the side where orient(p, q, ·) = `inner_sign`.
fn outward_normal(c: &Config, wall: PointSet, inner_sign: i8) -> [Rational; 2] {
    let v = wall.to_vec();
    let (p, q) = (c.coords(v[0]), c.coords(v[1]));
    let e = [&q[0] - &p[0], &q[1] - &p[1]];
    // (e_y, −e_x) points to the right of p→q, where orient(p, q, ·) < 0
    let right = [e[1].clone(), -e[0].clone()];
    if inner_sign > 0 {
        right
    } else {
        [-right[0].clone(), -right[1].clone()]
    }
}

/// Gradient (a, b) of the affine function matching `psi` on the cell.
fn gradient(c: &Config, cell: PointSet, psi: &[Rational]) -> [Rational; 2] {
    let v = cell.to_vec();
    let base = v[0];
    let (p0, z0) = (c.coords(base), &psi[base]);
    // first point making a proper triangle with v[0], v[1]
    let third = v[2..].iter().copied().find(|&w| c.orient(&[base, v[1], w]) != 0).expect("full-dimensional cell");
    let row = |i: usize| {
        let p = c.coords(i);
        ([&p[0] - &p0[0], &p[1] - &p0[1]], &psi[i] - z0)
    };
    let ([a11, a12], r1) = row(v[1]);
    let ([a21, a22], r2) = row(third);
    let det = &a11 * &a22 - &a12 * &a21;
    [(&r1 * &a22 - &a12 * &r2) / &det, (&a11 * &r2 - &r1 * &a21) / &det]
}

/// Dual web of a regular planar subdivision.
pub fn dual_web(c: &Config, s: &Subdivision) -> Result<Web, SecondaryError> {
    if c.dim() != 2 {
        return Err(SecondaryError::NotPlanar);
    }
    let psi = match &s.certificate {
        Some(psi) => psi.clone(),
        None => match is_regular(c, s)? {
            Regularity::Regular(psi) => psi,
            Regularity::NotRegular => return Err(SecondaryError::MissingCertificate),
        },
    };
    let cells = s.cells();
    let grads: Vec<[Rational; 2]> = cells.iter().map(|&cell| gradient(c, cell, &psi)).collect();
    let vertices: Vec<WebVertex> =
        cells.iter().zip(&grads).map(|(&cell, g)| WebVertex { cell, position: rot(g.clone()) }).collect();
    let walls: Vec<Vec<(PointSet, i8)>> =
        cells.iter().map(|&cell| c.facets(cell).into_iter().map(|f| (f.vertices, f.inner_sign)).collect()).collect();

    let mut edges = Vec::new();
    let mut rays = Vec::new();
    let mut balanced = true;
    for (i, own) in walls.iter().enumerate() {
        for &(wall, inner) in own {
            let neighbour = (0..cells.len()).find(|&j| j != i && walls[j].iter().any(|&(w, _)| w == wall));
            let normal = outward_normal(c, wall, inner);
            match neighbour {
                Some(j) if i < j => {
                    let step = [
                        &vertices[j].position[0] - &vertices[i].position[0],
                        &vertices[j].position[1] - &vertices[i].position[1],
                    ];
                    let r = rot(normal);
                    let cross = &step[0] * &r[1] - &step[1] * &r[0];
                    let along = &step[0] * &r[0] + &step[1] * &r[1];
                    if !cross.is_zero() || !along.is_positive() {
                        balanced = false;
                    }
                    edges.push(WebEdge { from: i, to: j, wall });
                }
                Some(_) => {}
                None => rays.push(WebRay { vertex: i, wall, direction: rot(normal) }),
            }
        }
    }
    Ok(Web { vertices, edges, rays, balanced })
}

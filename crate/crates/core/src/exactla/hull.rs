use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matrix::{rref_dense, MatrixQ};
use super::rational::{make_primitive, primitive_integer, Rational};
use super::ExactLaError;

/// Facet `normal · x >= offset` of a full-dimensional polytope, with its incident input points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
    pub incident: FixedBitSet,
}

struct Ray {
    v: Vec<BigInt>,
    zeros: FixedBitSet,
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Facets of `Conv(points)` by double description on the dual of the homogenized cone.
/// Points must affinely span their ambient space `Q^k`; facets come back sorted.
pub fn convex_hull_facets(points: &[Vec<Rational>]) -> Result<Vec<Facet>, ExactLaError> {
    let Some(first) = points.first() else {
        return Err(ExactLaError::Degenerate("empty point set".into()));
    };
    let k = first.len();
    let dim = k + 1;
    let m = points.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut h = vec![Rational::from_integer(1.into())];
            h.extend(p.iter().cloned());
            primitive_integer(&h)
        })
        .collect();
    let rational_rows: Vec<Vec<Rational>> =
        rows.iter().map(|r| r.iter().cloned().map(Rational::from_integer).collect()).collect();
    let full = MatrixQ::from_dense(m, dim, &rational_rows);
    if full.rank() < dim {
        return Err(ExactLaError::Degenerate("points are not full-dimensional".into()));
    }

    // greedy independent starting rows
    let mut start = Vec::new();
    for i in 0..m {
        let mut trial: Vec<Vec<Rational>> = start.iter().map(|&j: &usize| rational_rows[j].clone()).collect();
        trial.push(rational_rows[i].clone());
        if rref_dense(trial, dim).pivots.len() == start.len() + 1 {
            start.push(i);
            if start.len() == dim {
                break;
            }
        }
    }
    // inverse of the start block: its columns are the initial rays
    let mut aug: Vec<Vec<Rational>> = start
        .iter()
        .enumerate()
        .map(|(r, &i)| {
            let mut row = rational_rows[i].clone();
            row.extend((0..dim).map(|c| Rational::from_integer(if c == r { 1 } else { 0 }.into())));
            row
        })
        .collect();
    aug = rref_dense(aug, 2 * dim).rows;
    let mut processed = FixedBitSet::with_capacity(m);
    for &i in &start {
        processed.insert(i);
    }
    let mut rays: Vec<Ray> = (0..dim)
        .map(|c| {
            let col: Vec<Rational> = aug.iter().map(|row| row[dim + c].clone()).collect();
            let v = primitive_integer(&col);
            let mut zeros = FixedBitSet::with_capacity(m);
            for (r, &i) in start.iter().enumerate() {
                if r != c {
                    zeros.insert(i);
                }
            }
            Ray { v, zeros }
        })
        .collect();

    for (i, row) in rows.iter().enumerate().take(m) {
        if processed.contains(i) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| idot(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_negative()).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[n].zeros);
                if common.count_ones(..) + 2 < dim {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(t, r)| t != p && t != n && common.is_subset(&r.zeros));
                if blocked {
                    continue;
                }
                let v: Vec<BigInt> =
                    rays[n].v.iter().zip(&rays[p].v).map(|(x, y)| &vals[p] * x - &vals[n] * y).collect();
                let mut zeros = common;
                zeros.insert(i);
                fresh.push(Ray { v: make_primitive(v), zeros });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (j, mut r) in rays.into_iter().enumerate() {
            if vals[j].is_zero() {
                r.zeros.insert(i);
                next.push(r);
            } else if vals[j].is_positive() {
                next.push(r);
            }
        }
        next.extend(fresh);
        rays = next;
        processed.insert(i);
    }

    let mut facets: Vec<Facet> = rays
        .into_iter()
        .map(|r| {
            let mut incident = FixedBitSet::with_capacity(m);
            for (i, row) in rows.iter().enumerate() {
                if idot(row, &r.v).is_zero() {
                    incident.insert(i);
                }
            }
            Facet { offset: -r.v[0].clone(), normal: r.v[1..].to_vec(), incident }
        })
        .collect();
    facets.sort_by(|a, b| a.incident.ones().cmp(b.incident.ones()).then(a.normal.cmp(&b.normal)));
    Ok(facets)
}

use std::collections::HashMap;

use super::build::build_secondary_of;
use super::{SecondaryError, SecondaryPolytope};
use crate::geometry::{Config, PointSet};
use crate::subdivision::Subdivision;

/// Comparison of the lower interval under a face with the product of the factor lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub face: usize,
    /// Cells of the face's subdivision, one factor each.
    pub factors: Vec<PointSet>,
    pub factor_dims: Vec<usize>,
    pub interval_size: usize,
    pub product_size: usize,
    pub bijective: bool,
    pub order_preserving: bool,
}

impl FactorizationReport {
    pub fn holds(&self) -> bool {
        self.bijective && self.order_preserving
    }
}

/// Restriction of `s` to the cells lying in `cell`.
fn restrict(s: &Subdivision, cell: PointSet) -> Subdivision {
    Subdivision::new(cell, s.cells().iter().copied().filter(|c| c.is_subset(cell)).collect())
}

/// Checks that faces below `face` correspond bijectively and order-preservingly to tuples of
/// faces of Σ(A_ν) over the cells A_ν of its subdivision.
pub fn verify_factorization(
    c: &Config,
    sp: &SecondaryPolytope,
    face: usize,
    seed: u64,
) -> Result<FactorizationReport, SecondaryError> {
    let top = &sp.faces[face];
    let factors: Vec<PointSet> = top.subdivision.cells().to_vec();
    let lattices: Vec<SecondaryPolytope> =
        factors.iter().map(|&cell| build_secondary_of(c, cell, seed)).collect::<Result<_, _>>()?;
    let interval: Vec<usize> = (0..sp.faces.len()).filter(|&g| sp.faces[g].vertices.is_subset(&top.vertices)).collect();

    let mut coords: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut bijective = true;
    for &g in &interval {
        let sub = &sp.faces[g].subdivision;
        let tuple: Option<Vec<usize>> =
            factors.iter().zip(&lattices).map(|(&cell, lat)| lat.face_index(&restrict(sub, cell))).collect();
        match tuple {
            Some(t) => {
                coords.insert(g, t);
            }
            None => bijective = false,
        }
    }
    let product_size: usize = lattices.iter().map(|l| l.faces.len()).product();
    let mut distinct: Vec<&Vec<usize>> = coords.values().collect();
    distinct.sort();
    distinct.dedup();
    bijective &= distinct.len() == coords.len() && coords.len() == product_size;

    let below = |lat: &SecondaryPolytope, a: usize, b: usize| lat.faces[a].vertices.is_subset(&lat.faces[b].vertices);
    let mut order_preserving = true;
    for (&g, tg) in &coords {
        for (&h, th) in &coords {
            let in_sp = sp.faces[g].vertices.is_subset(&sp.faces[h].vertices);
            let in_product = lattices.iter().enumerate().all(|(k, lat)| below(lat, tg[k], th[k]));
            if in_sp != in_product {
                order_preserving = false;
            }
        }
    }
    Ok(FactorizationReport {
        face,
        factor_dims: lattices.iter().map(|l| l.dim).collect(),
        factors,
        interval_size: interval.len(),
        product_size,
        bijective,
        order_preserving,
    })
}

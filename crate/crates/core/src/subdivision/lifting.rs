use num_traits::{Signed, Zero};

use super::Subdivision;
use crate::exactla::Rational;
use crate::geometry::{Config, PointSet};

/// Value at `q` of the affine function interpolating `psi` on the simplex `sigma`.
pub(crate) fn interpolate(c: &Config, sigma: PointSet, q: usize, psi: &[Rational]) -> Rational {
    c.barycentric(sigma, q).iter().zip(sigma.iter()).fold(Rational::zero(), |acc, (b, v)| acc + b * &psi[v])
}

/// Projection of the lower faces of the lifted marking; each cell keeps the points on its face.
/// `psi` is indexed by configuration point.
pub fn lower_hull_subdivision(c: &Config, parent: PointSet, psi: &[Rational]) -> Subdivision {
    assert_eq!(psi.len(), c.len(), "lifting must cover every configuration point");
    let mut cells = Vec::new();
    for sigma in c.simplices_in(parent) {
        let mut contact = PointSet::EMPTY;
        let mut lower = true;
        for q in parent.iter() {
            if sigma.contains(q) {
                contact = contact.with(q);
                continue;
            }
            let gap = &psi[q] - interpolate(c, sigma, q, psi);
            if gap.is_negative() {
                lower = false;
                break;
            }
            if gap.is_zero() {
                contact = contact.with(q);
            }
        }
        if lower {
            cells.push(contact);
        }
    }
    let mut cert = vec![Rational::zero(); c.len()];
    for q in parent.iter() {
        cert[q] = psi[q].clone();
    }
    Subdivision::new(parent, cells).with_certificate(cert)
}

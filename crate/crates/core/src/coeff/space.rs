use std::collections::BTreeMap;

use num_traits::One;
use rand::Rng;

use super::CoeffError;
use crate::exactla::{int, MatrixQ, Rational};
use crate::geometry::{Config, PointSet};

/// An oriented (d−1)-simplex; `sign` is +1 for the orientation of the increasing index order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wall {
    pub vertices: PointSet,
    pub sign: i8,
}

impl Wall {
    pub fn opposite(self) -> Self {
        Wall { vertices: self.vertices, sign: -self.sign }
    }
}

/// N_σ for one orientation of a wall, with the pairing N_σ ⊗ N_σ̄ → 𝐤 against the dual basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallSpace {
    /// Orientation the basis refers to.
    pub sign: i8,
    pub degrees: Vec<i32>,
    /// Rows index N_σ, columns the dual basis of N_σ̄.
    pub pairing: MatrixQ,
}

impl WallSpace {
    pub fn new(sign: i8, degrees: Vec<i32>, pairing: Option<MatrixQ>) -> Result<Self, CoeffError> {
        let n = degrees.len();
        let pairing = pairing.unwrap_or_else(|| MatrixQ::identity(n));
        if pairing.rows() != n || pairing.cols() != n || pairing.rank() != n {
            return Err(CoeffError::InvalidPairing(format!("need an invertible {n}x{n} matrix")));
        }
        if pairing.entries().any(|(i, j, _)| degrees[i] != degrees[j]) {
            return Err(CoeffError::InvalidPairing("pairing must have degree 0".into()));
        }
        Ok(WallSpace { sign, degrees, pairing })
    }
}

/// Coefficient system: a graded space per oriented wall with N_σ̄ = N_σ*. Walls not listed carry
/// 𝐤 in degree 0. `flipped` reverses the ambient orientation used to orient cell boundaries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoefficientSystem {
    spaces: BTreeMap<PointSet, WallSpace>,
    pub flipped: bool,
}

impl CoefficientSystem {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.spaces.values().all(|s| s.degrees == [0] && s.pairing.get(0, 0).is_one())
    }

    /// Declares N on the wall `vertices`, for the orientation `space.sign`.
    pub fn insert(&mut self, vertices: PointSet, space: WallSpace) {
        self.spaces.insert(vertices, space);
    }

    /// Wall spaces as declared, keyed by vertex set.
    pub fn declared(&self) -> impl Iterator<Item = (&PointSet, &WallSpace)> {
        self.spaces.iter()
    }

    pub fn with_flipped_orientation(mut self) -> Self {
        self.flipped = !self.flipped;
        self
    }

    /// Degrees of the basis of N_wall.
    pub fn degrees(&self, wall: Wall) -> Vec<i32> {
        match self.spaces.get(&wall.vertices) {
            None => vec![0],
            Some(s) if s.sign == wall.sign => s.degrees.clone(),
            Some(s) => s.degrees.iter().map(|d| -d).collect(),
        }
    }

    pub fn dim(&self, wall: Wall) -> usize {
        self.spaces.get(&wall.vertices).map_or(1, |s| s.degrees.len())
    }

    /// ⟨x, y⟩ for x ∈ N_wall and y ∈ N_wall̄, in this order.
    pub fn pair(&self, wall: Wall, x: usize, y: usize) -> Rational {
        match self.spaces.get(&wall.vertices) {
            None => Rational::one(),
            Some(s) if s.sign == wall.sign => s.pairing.get(x, y),
            Some(s) => {
                let v = s.pairing.get(y, x);
                if (s.degrees[x] * s.degrees[y]).rem_euclid(2) == 1 {
                    -v
                } else {
                    v
                }
            }
        }
    }

    /// Random system on every finite wall: dimension 1 or 2, degrees in {−1, 0, 1}, and an
    /// invertible triangular pairing.
    pub fn random<R: Rng>(c: &Config, rng: &mut R) -> Self {
        let mut cs = CoefficientSystem::trivial();
        for w in c.finite().subsets_of_size(c.dim()) {
            let n = rng.gen_range(1..=2);
            let mut degrees: Vec<i32> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
            degrees.sort();
            let mut pairing = MatrixQ::zeros(n, n);
            for i in 0..n {
                let v = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
                pairing.set(i, i, int(v));
                for j in i + 1..n {
                    if degrees[i] == degrees[j] && rng.gen_bool(0.5) {
                        pairing.set(i, j, int(rng.gen_range(-2..=2)));
                    }
                }
            }
            let space = WallSpace::new(1, degrees, Some(pairing)).expect("triangular pairing is invertible");
            cs.insert(w, space);
        }
        cs
    }
}

/// Ambient-induced boundary orientation of the facet `f` of the cell `b`.
pub(crate) fn induced_sign(inner_sign: i8, cs: &CoefficientSystem) -> i8 {
    if cs.flipped {
        -inner_sign
    } else {
        inner_sign
    }
}

/// Whether listing the graded factors `degrees` in the order `perm` costs a Koszul sign.
pub(crate) fn koszul_odd(degrees: &[i32], perm: &[usize]) -> bool {
    let mut odd = false;
    for (p, &a) in perm.iter().enumerate() {
        for &b in &perm[p + 1..] {
            if a > b && degrees[a].rem_euclid(2) == 1 && degrees[b].rem_euclid(2) == 1 {
                odd = !odd;
            }
        }
    }
    odd
}

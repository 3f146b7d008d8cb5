use super::space::{induced_sign, CoefficientSystem, Wall};
use super::CoeffError;
use crate::geometry::{Config, PointSet};
use crate::subdivision::Subdivision;

/// Graded tensor product over an ordered list of oriented walls. Basis elements are tuples of
/// factor indices, numbered in mixed radix with the first factor most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorBlock {
    pub walls: Vec<Wall>,
    pub factors: Vec<Vec<i32>>,
}

impl TensorBlock {
    pub fn new(cs: &CoefficientSystem, walls: Vec<Wall>) -> Self {
        let factors = walls.iter().map(|&w| cs.degrees(w)).collect();
        TensorBlock { walls, factors }
    }

    /// Tensor product of blocks, factors concatenated in order.
    pub fn product<'a>(blocks: impl IntoIterator<Item = &'a TensorBlock>) -> Self {
        let mut out = TensorBlock { walls: Vec::new(), factors: Vec::new() };
        for b in blocks {
            out.walls.extend_from_slice(&b.walls);
            out.factors.extend(b.factors.iter().cloned());
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Vec::len).product()
    }

    pub fn tuple(&self, mut index: usize) -> Vec<usize> {
        let mut t = vec![0; self.factors.len()];
        for (slot, f) in t.iter_mut().zip(&self.factors).rev() {
            *slot = index % f.len();
            index /= f.len();
        }
        t
    }

    pub fn index(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.factors).fold(0, |acc, (&x, f)| acc * f.len() + x)
    }

    pub fn degree_of(&self, tuple: &[usize]) -> i32 {
        tuple.iter().zip(&self.factors).map(|(&x, f)| f[x]).sum()
    }

    pub fn degree(&self, index: usize) -> i32 {
        self.degree_of(&self.tuple(index))
    }

    /// Dimension in each degree.
    pub fn graded_dims(&self) -> std::collections::BTreeMap<i32, usize> {
        let mut out = std::collections::BTreeMap::new();
        for i in 0..self.dim() {
            *out.entry(self.degree(i)).or_insert(0) += 1;
        }
        out
    }
}

/// Oriented walls of Conv(b) not through ∞: counter-clockwise from the lowest vertex for finite
/// polygons, left to right for infinite ones, sorted otherwise.
pub fn cell_walls(c: &Config, cs: &CoefficientSystem, b: PointSet) -> Vec<Wall> {
    let mut walls: Vec<Wall> = c
        .facets(b)
        .into_iter()
        .filter(|f| !c.is_infinite(f.vertices))
        .map(|f| Wall { vertices: f.vertices, sign: induced_sign(f.inner_sign, cs) })
        .collect();
    if c.dim() == 2 {
        let mut cycle = c.ccw_vertices(b);
        if let Some(inf) = c.infinity().filter(|&i| b.contains(i)) {
            let at = cycle.iter().position(|&v| v == inf).expect("∞ is a vertex");
            cycle.rotate_left(at);
        }
        let position = |w: &Wall| {
            (0..cycle.len())
                .find(|&k| w.vertices == PointSet::from_iter([cycle[k], cycle[(k + 1) % cycle.len()]]))
                .expect("edge of the cycle")
        };
        walls.sort_by_key(position);
    } else {
        walls.sort();
    }
    walls
}

pub fn polytope_block(c: &Config, cs: &CoefficientSystem, b: PointSet) -> TensorBlock {
    TensorBlock::new(cs, cell_walls(c, cs, b))
}

/// N_A' = ⊗ over the boundary walls of a finite marked polytope.
pub fn boundary_tensor(c: &Config, cs: &CoefficientSystem, b: PointSet) -> Result<TensorBlock, CoeffError> {
    if c.is_infinite(b) {
        return Err(CoeffError::Infinite(b));
    }
    Ok(polytope_block(c, cs, b))
}

/// L_A': the finite boundary edges of an infinite polygon, left to right.
pub fn linear_tensor(c: &Config, cs: &CoefficientSystem, b: PointSet) -> Result<TensorBlock, CoeffError> {
    if c.dim() != 2 {
        return Err(CoeffError::NotPlanar);
    }
    if !c.is_infinite(b) {
        return Err(CoeffError::Finite(b));
    }
    Ok(polytope_block(c, cs, b))
}

/// N_𝒫: the tensor product of the cell blocks in the order given.
pub fn subdivision_block(c: &Config, cs: &CoefficientSystem, cells: &[PointSet]) -> TensorBlock {
    let blocks: Vec<TensorBlock> = cells.iter().map(|&b| polytope_block(c, cs, b)).collect();
    TensorBlock::product(&blocks)
}

pub fn stalk(c: &Config, cs: &CoefficientSystem, s: &Subdivision) -> TensorBlock {
    subdivision_block(c, cs, s.cells())
}

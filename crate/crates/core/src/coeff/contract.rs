use num_traits::{One, Zero};

use super::block::{cell_walls, polytope_block, TensorBlock};
use super::space::{CoefficientSystem, Wall};
use super::CoeffError;
use crate::exactla::{MatrixQ, Rational};
use crate::geometry::{Config, PointSet};
use crate::subdivision::{refines, Subdivision};

/// Trace contraction from a tensor product of input wall lists onto an output wall list.
/// Factors are matched to output walls within their group, and the remaining factors pair off
/// as σ, σ̄ within their group. The map reorders factors with the Koszul sign and evaluates the
/// pairings.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub input: TensorBlock,
    pub output: TensorBlock,
    /// Input factor feeding each output factor.
    sources: Vec<usize>,
    /// Paired input factors, the earlier one first.
    pairs: Vec<(usize, usize)>,
    /// Input factor pairs whose order the contraction reverses.
    inversions: Vec<(usize, usize)>,
}

impl Contraction {
    pub fn new(
        cs: &CoefficientSystem,
        inputs: &[(&[Wall], usize)],
        outputs: &[(&[Wall], usize)],
    ) -> Result<Self, CoeffError> {
        let flat: Vec<(Wall, usize)> = inputs.iter().flat_map(|(ws, g)| ws.iter().map(move |&w| (w, *g))).collect();
        let mut used = vec![false; flat.len()];
        let mut sources = Vec::new();
        for (ws, g) in outputs {
            for &w in *ws {
                let k = (0..flat.len())
                    .find(|&k| !used[k] && flat[k] == (w, *g))
                    .ok_or_else(|| CoeffError::Mismatch(format!("no factor for output wall {w:?}")))?;
                used[k] = true;
                sources.push(k);
            }
        }
        let mut pairs = Vec::new();
        for a in 0..flat.len() {
            if used[a] {
                continue;
            }
            let (w, g) = flat[a];
            let b = (a + 1..flat.len())
                .find(|&b| !used[b] && flat[b] == (w.opposite(), g))
                .ok_or_else(|| CoeffError::Mismatch(format!("unpaired wall {w:?}")))?;
            used[a] = true;
            used[b] = true;
            pairs.push((a, b));
        }
        let input = TensorBlock::new(cs, flat.iter().map(|(w, _)| *w).collect());
        let output = TensorBlock::new(cs, outputs.iter().flat_map(|(ws, _)| ws.iter().copied()).collect());
        let perm: Vec<usize> = sources.iter().copied().chain(pairs.iter().flat_map(|&(a, b)| [a, b])).collect();
        let inversions = (0..perm.len())
            .flat_map(|p| {
                let first = perm[p];
                perm[p + 1..].iter().map(move |&q| (first, q))
            })
            .filter(|(a, b)| a > b)
            .collect();
        Ok(Contraction { input, output, sources, pairs, inversions })
    }

    /// Image of one input basis tuple: an output basis index and its coefficient.
    pub fn apply(&self, cs: &CoefficientSystem, tuple: &[usize]) -> Option<(usize, Rational)> {
        let mut coefficient = Rational::one();
        for &(a, b) in &self.pairs {
            let v = cs.pair(self.input.walls[a], tuple[a], tuple[b]);
            if v.is_zero() {
                return None;
            }
            if !v.is_one() {
                coefficient *= v;
            }
        }
        let odd = |k: usize| self.input.factors[k][tuple[k]].rem_euclid(2) == 1;
        if self.inversions.iter().filter(|&&(a, b)| odd(a) && odd(b)).count() % 2 == 1 {
            coefficient = -coefficient;
        }
        let out = self.sources.iter().fold(0, |acc, &k| acc * self.input.factors[k].len() + tuple[k]);
        Some((out, coefficient))
    }

    /// Rows index the output block, columns the input block.
    pub fn matrix(&self, cs: &CoefficientSystem) -> MatrixQ {
        let mut m = MatrixQ::zeros(self.output.dim(), self.input.dim());
        for col in 0..self.input.dim() {
            if let Some((row, v)) = self.apply(cs, &self.input.tuple(col)) {
                m.set(row, col, v);
            }
        }
        m
    }
}

/// γ_𝒫: contraction of the internal walls of a subdivision of `target` with cells in the order
/// given.
pub fn subdivision_contraction(
    c: &Config,
    cs: &CoefficientSystem,
    cells: &[PointSet],
    target: PointSet,
) -> Result<Contraction, CoeffError> {
    let walls: Vec<Vec<Wall>> = cells.iter().map(|&b| cell_walls(c, cs, b)).collect();
    let inputs: Vec<(&[Wall], usize)> = walls.iter().map(|w| (w.as_slice(), 0)).collect();
    let out = polytope_block(c, cs, target);
    Contraction::new(cs, &inputs, &[(&out.walls, 0)])
}

/// Generalization map N_fine → N_coarse: traces over the walls of `fine` that are internal to
/// a cell of `coarse`. Both blocks use the sorted cell order.
pub fn generalization_map(
    c: &Config,
    cs: &CoefficientSystem,
    fine: &Subdivision,
    coarse: &Subdivision,
) -> Result<MatrixQ, CoeffError> {
    if !refines(fine, coarse) {
        return Err(CoeffError::NotRefining);
    }
    let fine_walls: Vec<Vec<Wall>> = fine.cells().iter().map(|&b| cell_walls(c, cs, b)).collect();
    let coarse_walls: Vec<Vec<Wall>> = coarse.cells().iter().map(|&b| cell_walls(c, cs, b)).collect();
    let group = |b: PointSet| coarse.cells().iter().position(|d| b.is_subset(*d)).expect("refines");
    let inputs: Vec<(&[Wall], usize)> =
        fine.cells().iter().zip(&fine_walls).map(|(&b, w)| (w.as_slice(), group(b))).collect();
    let outputs: Vec<(&[Wall], usize)> = coarse_walls.iter().enumerate().map(|(g, w)| (w.as_slice(), g)).collect();
    Ok(Contraction::new(cs, &inputs, &outputs)?.matrix(cs))
}

/// Glues two wall paths along `shared`, which must occur in them with opposite orientations.
/// The result splices the second path into the first at the shared wall.
pub fn concatenate(
    cs: &CoefficientSystem,
    first: &[Wall],
    second: &[Wall],
    shared: PointSet,
) -> Result<(Vec<Wall>, MatrixQ), CoeffError> {
    let i = first.iter().position(|w| w.vertices == shared);
    let j = second.iter().position(|w| w.vertices == shared);
    let (Some(i), Some(j)) = (i, j) else {
        return Err(CoeffError::Mismatch("shared wall missing from a path".into()));
    };
    if first[i].opposite() != second[j] {
        return Err(CoeffError::Mismatch("shared wall has the same orientation on both sides".into()));
    }
    let mut walls = first[..i].to_vec();
    walls.extend_from_slice(&second[j + 1..]);
    walls.extend_from_slice(&second[..j]);
    walls.extend_from_slice(&first[i + 1..]);
    let m = Contraction::new(cs, &[(first, 0), (second, 0)], &[(&walls, 0)])?.matrix(cs);
    Ok((walls, m))
}

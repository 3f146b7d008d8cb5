use crate::exactla::Rational;
use crate::geometry::{Config, LabeledPoint, PointConfig, PointSet};
use crate::subdivision::Subdivision;

use super::RelativeError;

/// A configuration with ∞ attached: the concrete working configuration Ã, the slope order of
/// the finite points and the projection along the lines through ∞.
#[derive(Clone, Debug)]
pub struct InfinityConfig {
    pub base: PointConfig,
    /// Ã with ∞ at a certified far point.
    pub config: Config,
    pub infinity: usize,
    /// Finite indices of `config`, left to right.
    pub slope_order: Vec<usize>,
    /// Image of the finite points under the projection through ∞ (d = 2 only).
    pub projected: Option<PointConfig>,
    rank: Vec<usize>,
}

/// Validates genericity with respect to `direction` and computes the slope order.
pub fn attach_infinity(c: &PointConfig, direction: Vec<Rational>) -> Result<InfinityConfig, RelativeError> {
    if c.dim() > 2 {
        return Err(RelativeError::Dimension(c.dim()));
    }
    let base = c.without_infinity().with_infinity(direction)?;
    let config = Config::new(&base)?;
    let infinity = config.infinity().ok_or(RelativeError::NoInfinity)?;
    // `base` and `config` list finite points in the same label order
    let to_config = |i: usize| config.index_of(&base.points()[i].label).expect("finite label");
    let slope_order: Vec<usize> = base.slope_order().into_iter().map(to_config).collect();
    let mut rank = vec![usize::MAX; config.len()];
    for (r, &i) in slope_order.iter().enumerate() {
        rank[i] = r;
    }
    let projected = if base.dim() == 2 {
        let points = (0..base.len())
            .map(|i| LabeledPoint { label: base.points()[i].label.clone(), coords: vec![base.slope_key(i)] })
            .collect();
        Some(PointConfig::new(1, points, None)?)
    } else {
        None
    };
    Ok(InfinityConfig { base, config, infinity, slope_order, projected, rank })
}

impl InfinityConfig {
    /// Position of a finite point in the slope order.
    pub fn rank(&self, i: usize) -> usize {
        assert_ne!(i, self.infinity, "∞ has no slope rank");
        self.rank[i]
    }

    pub fn finite_count(&self) -> usize {
        self.slope_order.len()
    }

    pub fn is_infinite(&self, b: PointSet) -> bool {
        b.contains(self.infinity)
    }

    /// Slope ranks of the left and right rays `(i, ∞)`, `(j, ∞)` of an infinite polygon.
    pub fn rays(&self, b: PointSet) -> (usize, usize) {
        assert!(self.is_infinite(b), "rays of a finite polygon");
        let ranks = self.config.vertices(b).iter().filter(|&v| v != self.infinity).map(|v| self.rank[v]);
        let (lo, hi) = ranks.fold((usize::MAX, 0), |(lo, hi), r| (lo.min(r), hi.max(r)));
        (lo, hi)
    }

    /// ∂₋B: the finite boundary chain of an infinite polygon, left to right.
    pub fn lower_chain(&self, b: PointSet) -> Vec<usize> {
        assert_eq!(self.config.dim(), 2, "boundary chains need d = 2");
        let mut cycle = self.config.ccw_vertices(b);
        let at = cycle.iter().position(|&v| v == self.infinity).expect("∞ is a vertex");
        cycle.rotate_left(at);
        cycle.remove(0);
        cycle
    }

    /// Cells ordered as the mixed differential orients them: finite cells sorted, then
    /// infinite cells left to right.
    pub fn mixed_order(&self, cells: &[PointSet]) -> Vec<PointSet> {
        let mut finite: Vec<PointSet> = cells.iter().copied().filter(|&b| !self.is_infinite(b)).collect();
        let mut infinite: Vec<PointSet> = cells.iter().copied().filter(|&b| self.is_infinite(b)).collect();
        finite.sort();
        infinite.sort_by_key(|&b| self.rays(b));
        finite.extend(infinite);
        finite
    }

    pub fn mixed_order_of(&self, s: &Subdivision) -> Vec<PointSet> {
        self.mixed_order(s.cells())
    }
}

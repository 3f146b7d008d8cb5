use super::config::Config;
use super::pointset::PointSet;

/// Full-dimensional marked subpolytope `(Conv(marking), marking)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedPolytope {
    pub marking: PointSet,
    pub vertices: PointSet,
    pub geometric: bool,
}

impl MarkedPolytope {
    pub fn new(c: &Config, marking: PointSet) -> Self {
        MarkedPolytope { marking, vertices: c.vertices(marking), geometric: c.is_geometric(marking) }
    }

    pub fn is_simplex(&self, d: usize) -> bool {
        self.marking.len() == d + 1
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubpolytopeFamilies {
    pub finite: Vec<PointSet>,
    pub infinite: Vec<PointSet>,
}

/// Full-dimensional markings `B` of `c`, optionally only the geometric ones, sorted.
pub fn full_dimensional_markings(c: &Config, geometric_only: bool) -> Vec<PointSet> {
    let n = c.len();
    let mut out: Vec<PointSet> = (0u32..(1u32 << n))
        .map(PointSet)
        .filter(|b| c.is_full_dimensional(*b))
        .filter(|b| !geometric_only || c.is_geometric(*b))
        .collect();
    out.sort();
    out
}

/// All full-dimensional geometric marked subpolytopes, sorted lexicographically by label set.
pub fn enumerate_subpolytopes(c: &Config) -> Vec<MarkedPolytope> {
    full_dimensional_markings(c, true).into_iter().map(|b| MarkedPolytope::new(c, b)).collect()
}

/// Geometric subpolytopes split by whether the marking contains ∞.
pub fn enumerate_subpolytopes_split(c: &Config) -> SubpolytopeFamilies {
    let mut fam = SubpolytopeFamilies::default();
    for b in full_dimensional_markings(c, true) {
        if c.is_infinite(b) {
            fam.infinite.push(b);
        } else {
            fam.finite.push(b);
        }
    }
    fam
}

use std::collections::HashMap;

use rayon::prelude::*;

use super::orientation::{facet_incidence, orientation_class, OrientationClass};
use super::LinftyError;
use crate::exactla::{int, Rational};
use crate::geometry::{full_dimensional_markings, Config, PointSet};
use crate::secondary::{SecondaryCache, SecondaryPolytope};
use crate::subdivision::Subdivision;

/// Which algebra: 𝔤̇ over all marked subpolytopes, or 𝔤 over the geometric ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Marked,
    Geometric,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub marking: PointSet,
    /// dim Σ(marking).
    pub dim: usize,
    pub geometric: bool,
}

impl Generator {
    /// Degree of e_marking: 1 + dim Σ.
    pub fn degree(&self) -> i64 {
        1 + self.dim as i64
    }
}

/// One matrix element: the cells `inputs` of a coarse subdivision of `output`, in the order
/// used to orient the facet, and the incidence sign.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TableEntry {
    pub output: PointSet,
    pub inputs: Vec<PointSet>,
    pub coefficient: Rational,
}

impl TableEntry {
    pub fn arity(&self) -> usize {
        self.inputs.len()
    }
}

#[derive(Clone, Debug)]
pub struct StructureTables {
    pub variant: Variant,
    /// Sorted by marking.
    pub generators: Vec<Generator>,
    /// Sorted by (output, inputs).
    pub entries: Vec<TableEntry>,
    index: HashMap<PointSet, usize>,
    by_output: HashMap<PointSet, Vec<usize>>,
}

impl StructureTables {
    pub fn new(variant: Variant, mut generators: Vec<Generator>, mut entries: Vec<TableEntry>) -> Self {
        generators.sort_by_key(|g| g.marking);
        entries.sort();
        let index = generators.iter().enumerate().map(|(i, g)| (g.marking, i)).collect();
        let mut by_output: HashMap<PointSet, Vec<usize>> = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            by_output.entry(e.output).or_default().push(i);
        }
        StructureTables { variant, generators, entries, index, by_output }
    }

    pub fn generator(&self, marking: PointSet) -> Option<&Generator> {
        self.index.get(&marking).map(|&i| &self.generators[i])
    }

    /// Entries whose output is `marking`: the terms of d v_marking.
    pub fn with_output(&self, marking: PointSet) -> impl Iterator<Item = &TableEntry> {
        self.by_output.get(&marking).into_iter().flatten().map(|&i| &self.entries[i])
    }

    /// Entries of a given arity; arity 1 is the differential.
    pub fn arity(&self, n: usize) -> impl Iterator<Item = &TableEntry> {
        self.entries.iter().filter(move |e| e.arity() == n)
    }

    pub fn max_arity(&self) -> usize {
        self.entries.iter().map(|e| e.arity()).max().unwrap_or(0)
    }

    /// Generator count per degree.
    pub fn dims_by_degree(&self) -> std::collections::BTreeMap<i64, usize> {
        let mut out = std::collections::BTreeMap::new();
        for g in &self.generators {
            *out.entry(g.degree()).or_insert(0) += 1;
        }
        out
    }
}

/// Finite markings spanning 𝔤̇ (all) or 𝔤 (geometric only).
pub fn generators_of(c: &Config, variant: Variant) -> Vec<PointSet> {
    full_dimensional_markings(c, variant == Variant::Geometric).into_iter().filter(|&b| !c.is_infinite(b)).collect()
}

/// Tables of 𝔤̇ or 𝔤 for the finite part of `c`, cells ordered canonically.
pub fn build_structure_tables(c: &Config, variant: Variant, seed: u64) -> Result<StructureTables, LinftyError> {
    build_structure_tables_in(&SecondaryCache::new(c, seed), variant)
}

/// As `build_structure_tables`, reusing the secondary polytopes already in `cache`.
pub fn build_structure_tables_in(cache: &SecondaryCache, variant: Variant) -> Result<StructureTables, LinftyError> {
    let generators = generators_of(cache.config(), variant);
    build_tables_with(cache, &generators, variant, |cells: &Subdivision| cells.cells().to_vec())
}

/// Tables over the given generators. `order` lists the cells of a coarse subdivision in the
/// order whose product orientation defines the entry's sign.
pub fn build_tables_with<F>(
    cache: &SecondaryCache,
    generators: &[PointSet],
    variant: Variant,
    order: F,
) -> Result<StructureTables, LinftyError>
where
    F: Fn(&Subdivision) -> Vec<PointSet> + Sync,
{
    let c = cache.config();
    let per_generator: Vec<Result<(Generator, Vec<TableEntry>), LinftyError>> = generators
        .par_iter()
        .map(|&marking| {
            let sp = cache.shallow(marking)?;
            let generator = Generator { marking, dim: sp.dim, geometric: c.is_geometric(marking) };
            let entries = entries_of(cache, &sp, variant, &order)?;
            Ok((generator, entries))
        })
        .collect();
    let mut gens = Vec::new();
    let mut entries = Vec::new();
    for r in per_generator {
        let (g, e) = r?;
        gens.push(g);
        entries.extend(e);
    }
    Ok(StructureTables::new(variant, gens, entries))
}

fn entries_of<F>(
    cache: &SecondaryCache,
    sp: &SecondaryPolytope,
    variant: Variant,
    order: &F,
) -> Result<Vec<TableEntry>, LinftyError>
where
    F: Fn(&Subdivision) -> Vec<PointSet>,
{
    let c = cache.config();
    let mut out = Vec::new();
    if sp.dim == 0 {
        return Ok(out);
    }
    for (_, face) in sp.faces_of_dim(sp.dim - 1) {
        let s = &face.subdivision;
        if variant == Variant::Geometric && !s.cells().iter().all(|&cell| c.is_geometric(cell)) {
            continue;
        }
        let inputs = order(s);
        let classes: Vec<OrientationClass> = inputs
            .iter()
            .map(|&cell| Ok(orientation_class(&*cache.shallow(cell)?)))
            .collect::<Result<_, LinftyError>>()?;
        let sign = facet_incidence(sp, &face.vertices, &classes.iter().collect::<Vec<_>>());
        assert_ne!(sign, 0, "facet basis must span the facet");
        out.push(TableEntry { output: sp.marking, inputs, coefficient: int(sign as i64) });
    }
    Ok(out)
}

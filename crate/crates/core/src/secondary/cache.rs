use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::Mutex;

use super::build::{build_secondary_of, build_secondary_shallow};
use super::{SecondaryError, SecondaryPolytope};
use crate::geometry::{Config, PointSet};

/// Read-mostly table of secondary polytopes keyed by marking.
pub struct SecondaryCache<'a> {
    config: &'a Config,
    seed: u64,
    shallow: Mutex<HashMap<PointSet, Arc<SecondaryPolytope>>>,
    full: Mutex<HashMap<PointSet, Arc<SecondaryPolytope>>>,
}

impl<'a> SecondaryCache<'a> {
    pub fn new(config: &'a Config, seed: u64) -> Self {
        SecondaryCache { config, seed, shallow: Mutex::new(HashMap::new()), full: Mutex::new(HashMap::new()) }
    }

    pub fn config(&self) -> &Config {
        self.config
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Σ(marking) with facets and the top face only.
    pub fn shallow(&self, marking: PointSet) -> Result<Arc<SecondaryPolytope>, SecondaryError> {
        if let Some(sp) = self.full.lock().get(&marking) {
            return Ok(sp.clone());
        }
        if let Some(sp) = self.shallow.lock().get(&marking) {
            return Ok(sp.clone());
        }
        let sp = Arc::new(build_secondary_shallow(self.config, marking, self.seed)?);
        Ok(self.shallow.lock().entry(marking).or_insert(sp).clone())
    }

    /// Σ(marking) with its full face lattice.
    pub fn full(&self, marking: PointSet) -> Result<Arc<SecondaryPolytope>, SecondaryError> {
        if let Some(sp) = self.full.lock().get(&marking) {
            return Ok(sp.clone());
        }
        let sp = Arc::new(build_secondary_of(self.config, marking, self.seed)?);
        Ok(self.full.lock().entry(marking).or_insert(sp).clone())
    }
}

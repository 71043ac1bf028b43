use std::fmt;

use super::lattice::RelationLattice;
use super::monomial::Monomial;
use crate::error::{Error, Result};

/// A point of `C*_k / p^Z`: the class of `value` on the level-`k` cover.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointClass {
    pub level: u32,
    pub value: Monomial,
}

impl PointClass {
    pub fn new(level: u32, value: Monomial) -> Self {
        PointClass { level, value }
    }

    /// Same class with its canonical representative.
    pub fn canonical(&self, lattice: &RelationLattice) -> PointClass {
        PointClass {
            level: self.level,
            value: lattice.canonical_point(&self.value).0,
        }
    }

    pub fn mul(&self, other: &PointClass) -> Result<PointClass> {
        check_level(self.level, other.level)?;
        Ok(PointClass::new(self.level, &self.value * &other.value))
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self.value, self.level)
    }
}

pub(crate) fn check_level(a: u32, b: u32) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::LevelMismatch(a, b))
    }
}

/// Whether `a/b ∈ p^Z` modulo the lattice, with matching torsion.
pub fn point_eq(a: &PointClass, b: &PointClass, lattice: &RelationLattice) -> Result<bool> {
    check_level(a.level, b.level)?;
    Ok(lattice.canonical_point(&a.value).0 == lattice.canonical_point(&b.value).0)
}

use std::fmt;

use super::gaussian::GaussianRational;
use super::poly::MultiPoly;
use crate::error::{Error, Result};

/// A polynomial map `ℂⁿ → ℂᵖ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMap {
    n: usize,
    components: Vec<MultiPoly>,
}

impl PolyMap {
    pub fn new(n: usize, components: Vec<MultiPoly>) -> Result<Self> {
        if let Some(c) = components.iter().find(|c| c.nvars() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: c.nvars() });
        }
        if components.is_empty() {
            return Err(Error::InvalidInput("a map needs at least one component".into()));
        }
        Ok(Self { n, components })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, components: (0..n).map(|i| MultiPoly::var(n, i)).collect() }
    }

    /// The map with every component zero.
    pub fn zero(n: usize, p: usize) -> Self {
        Self { n, components: vec![MultiPoly::zero(n); p] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &MultiPoly {
        &self.components[i]
    }

    pub fn degree(&self) -> u32 {
        self.components.iter().map(|c| c.degree()).max().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.components.iter().map(|c| c.num_terms()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, z: &[GaussianRational]) -> Result<Vec<GaussianRational>> {
        self.components.iter().map(|c| c.eval(z)).collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        if inner.p() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, got: inner.p() });
        }
        let components = self
            .components
            .iter()
            .map(|c| c.compose(&inner.components))
            .collect::<Result<Vec<_>>>()?;
        PolyMap::new(inner.n, components)
    }

    pub fn add(&self, other: &PolyMap) -> Result<PolyMap> {
        if other.n != self.n || other.p() != self.p() {
            return Err(Error::DimensionMismatch { expected: self.p(), got: other.p() });
        }
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect();
        PolyMap::new(self.n, components)
    }

    pub fn sub(&self, other: &PolyMap) -> Result<PolyMap> {
        if other.n != self.n || other.p() != self.p() {
            return Err(Error::DimensionMismatch { expected: self.p(), got: other.p() });
        }
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a - b).collect();
        PolyMap::new(self.n, components)
    }

    /// The map is the identity iff every component equals its coordinate function.
    pub fn is_identity(&self) -> bool {
        self.n == self.p() && self.components.iter().enumerate().all(|(i, c)| *c == MultiPoly::var(self.n, i))
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMap[{}→{}]{}", self.n, self.p(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_composes_neutrally() {
        let z1 = MultiPoly::var(2, 0);
        let z2 = MultiPoly::var(2, 1);
        let f = PolyMap::new(2, vec![&z1 * &z2, z1.pow(3)]).unwrap();
        assert_eq!(f.compose(&PolyMap::identity(2)).unwrap(), f);
        assert!(PolyMap::identity(3).is_identity());
        assert!(!f.is_identity());
    }

    #[test]
    fn rejects_mixed_variable_counts() {
        assert!(PolyMap::new(2, vec![MultiPoly::var(3, 0)]).is_err());
        let f = PolyMap::identity(2);
        assert!(f.compose(&PolyMap::identity(3)).is_err());
    }
}

use super::poly::SuperPolynomial;
use super::table::{same_table, Table};
use super::AlgebraError;
use crate::scalar::Coefficient;

/// A homomorphism of superalgebras given by generator images (evens first).
#[derive(Clone)]
pub struct AlgebraMap<C> {
    source: Table,
    target: Table,
    images: Vec<SuperPolynomial<C>>,
}

impl<C: Coefficient> AlgebraMap<C> {
    /// Checks image count, image tables and that each image has its generator's parity.
    pub fn new(source: &Table, target: &Table, images: Vec<SuperPolynomial<C>>) -> Result<Self, AlgebraError> {
        let map = Self::new_unchecked(source, target, images)?;
        if let Some(g) = map.parity_violations().into_iter().next() {
            return Err(AlgebraError::ParityMismatch { generator: source.generator_name(g).to_string() });
        }
        Ok(map)
    }

    /// Like [`AlgebraMap::new`] but accepts images of the wrong parity. Substitution
    /// is still defined, but it is then not an algebra homomorphism.
    pub fn new_unchecked(
        source: &Table,
        target: &Table,
        images: Vec<SuperPolynomial<C>>,
    ) -> Result<Self, AlgebraError> {
        if images.len() != source.len() {
            return Err(AlgebraError::ImageCount { expected: source.len(), got: images.len() });
        }
        if images.iter().any(|p| !same_table(p.table(), target)) {
            return Err(AlgebraError::TableMismatch);
        }
        Ok(AlgebraMap { source: source.clone(), target: target.clone(), images })
    }

    /// Images looked up by generator name; unnamed generators map to themselves
    /// (which requires them to exist in the target).
    pub fn from_named(
        source: &Table,
        target: &Table,
        named: &[(&str, SuperPolynomial<C>)],
    ) -> Result<Self, AlgebraError> {
        let mut images = Vec::with_capacity(source.len());
        for g in 0..source.len() {
            let name = source.generator_name(g);
            match named.iter().find(|(n, _)| *n == name) {
                Some((_, p)) => images.push(p.clone()),
                None => images.push(SuperPolynomial::var(target, name)?),
            }
        }
        for (n, _) in named {
            if source.lookup(n).is_none() {
                return Err(AlgebraError::UnknownVariable(n.to_string()));
            }
        }
        Self::new(source, target, images)
    }

    pub fn identity(table: &Table) -> Self {
        let images = (0..table.len()).map(|g| SuperPolynomial::generator(table, g)).collect();
        AlgebraMap { source: table.clone(), target: table.clone(), images }
    }

    pub fn source(&self) -> &Table {
        &self.source
    }

    pub fn target(&self) -> &Table {
        &self.target
    }

    pub fn images(&self) -> &[SuperPolynomial<C>] {
        &self.images
    }

    pub fn image(&self, g: usize) -> &SuperPolynomial<C> {
        &self.images[g]
    }

    /// Generators whose image is not parity-homogeneous of the generator's parity.
    pub fn parity_violations(&self) -> Vec<usize> {
        (0..self.images.len())
            .filter(|&g| !self.images[g].has_parity(self.source.generator_parity(g)))
            .collect()
    }

    pub fn substitute(&self, p: &SuperPolynomial<C>) -> Result<SuperPolynomial<C>, AlgebraError> {
        if !same_table(p.table(), &self.source) {
            return Err(AlgebraError::TableMismatch);
        }
        Ok(self.apply(p))
    }

    /// Substitution without the table check; panics on mismatched tables in debug builds.
    pub fn apply(&self, p: &SuperPolynomial<C>) -> SuperPolynomial<C> {
        debug_assert!(same_table(p.table(), &self.source));
        let n = self.source.n_even();
        let mut powers: Vec<Vec<SuperPolynomial<C>>> = vec![Vec::new(); n];
        let mut out = SuperPolynomial::zero(&self.target);
        for (m, c) in p.terms() {
            let mut acc = SuperPolynomial::constant(&self.target, c.clone());
            for (j, &e) in m.evens().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[j];
                if cache.is_empty() {
                    cache.push(self.images[j].clone());
                }
                while cache.len() < e as usize {
                    let next = cache.last().unwrap() * &self.images[j];
                    cache.push(next);
                }
                acc = &acc * &cache[e as usize - 1];
                if acc.is_zero() {
                    break;
                }
            }
            if acc.is_zero() {
                continue;
            }
            for i in m.odd_indices() {
                acc = &acc * &self.images[n + i];
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign_ref(&acc);
        }
        out
    }

    /// `self ∘ inner`: apply `inner` first, then `self`.
    pub fn compose(&self, inner: &AlgebraMap<C>) -> Result<AlgebraMap<C>, AlgebraError> {
        if !same_table(inner.target(), &self.source) {
            return Err(AlgebraError::TableMismatch);
        }
        let images = inner.images.iter().map(|p| self.apply(p)).collect();
        Ok(AlgebraMap { source: inner.source.clone(), target: self.target.clone(), images })
    }

    /// True when the images agree with another map generator by generator.
    pub fn same_images(&self, other: &AlgebraMap<C>) -> bool {
        same_table(&self.source, &other.source)
            && same_table(&self.target, &other.target)
            && self.images == other.images
    }
}


impl<C: Coefficient> PartialEq for AlgebraMap<C> {
    fn eq(&self, other: &Self) -> bool {
        self.same_images(other)
    }
}

impl<C: Coefficient> Eq for AlgebraMap<C> {}

impl<C: Coefficient> std::fmt::Debug for AlgebraMap<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut m = f.debug_map();
        for (g, img) in self.images.iter().enumerate() {
            m.entry(&self.source.generator_name(g), img);
        }
        m.finish()
    }
}

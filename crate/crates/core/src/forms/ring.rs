use crate::superalg::{SuperPolynomial, Table, VariableTable};
use crate::Poly;

use super::forms_table;

/// Functions on maps from the superpoint into `𝔸^{n|q}`.
///
/// Evens are `x1..xn` then `de1..deq`; odds are `dx1..dxn` then `e1..eq`.
/// `dx_i` and `de_i` have degree one, the rest degree zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingSpaceRing {
    pub n: usize,
    pub q: usize,
    pub table: Table,
}

pub fn mapping_space_ring(n: usize, q: usize) -> MappingSpaceRing {
    let table = if q == 0 {
        forms_table(n, false)
    } else {
        let evens = (1..=n).map(|i| format!("x{i}")).chain((1..=q).map(|i| format!("de{i}")));
        let odds = (1..=n).map(|i| format!("dx{i}")).chain((1..=q).map(|i| format!("e{i}")));
        VariableTable::new(evens, odds).expect("mapping space ring")
    };
    MappingSpaceRing { n, q, table }
}

impl MappingSpaceRing {
    /// Degree of generator `g` (evens first).
    pub fn degree(&self, g: usize) -> i64 {
        let (n, q) = (self.n, self.q);
        match g {
            g if g < n => 0,
            g if g < n + q => 1,
            g if g < 2 * n + q => 1,
            _ => 0,
        }
    }

    pub fn degrees(&self) -> Vec<i64> {
        (0..self.table.len()).map(|g| self.degree(g)).collect()
    }

    /// `d(x_i) = dx_i`, `d(e_i) = de_i`, all other generators go to zero.
    pub fn differential_images(&self) -> Vec<Poly> {
        let (n, q) = (self.n, self.q);
        let t = &self.table;
        let mut images = Vec::with_capacity(t.len());
        images.extend((0..n).map(|i| SuperPolynomial::odd_var(t, i)));
        images.extend((0..q).map(|_| SuperPolynomial::zero(t)));
        images.extend((0..n).map(|_| SuperPolynomial::zero(t)));
        images.extend((0..q).map(|i| SuperPolynomial::even_var(t, n + i)));
        images
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rings() {
        let r = mapping_space_ring(1, 0);
        assert_eq!(r.table.evens(), ["x1"]);
        assert_eq!(r.table.odds(), ["dx1"]);
        let r = mapping_space_ring(0, 1);
        assert_eq!(r.table.evens(), ["de1"]);
        assert_eq!(r.table.odds(), ["e1"]);
        assert_eq!(r.degrees(), vec![1, 0]);
        assert!(mapping_space_ring(0, 0).table.is_empty());
    }

    #[test]
    fn generator_counts() {
        let r = mapping_space_ring(2, 3);
        assert_eq!(r.table.n_even(), 5);
        assert_eq!(r.table.n_odd(), 5);
        assert_eq!(r.degrees(), vec![0, 0, 1, 1, 1, 1, 1, 0, 0, 0]);
        let d = r.differential_images();
        assert_eq!(d[0].to_string(), "dx1");
        assert_eq!(d[7].to_string(), "de1");
    }
}

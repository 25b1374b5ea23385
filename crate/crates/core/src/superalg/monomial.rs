use std::cmp::Ordering;

/// A product of even powers and a set of distinct odd generators.
///
/// The odd part is written in ascending index order, so `e2*e1` is stored as
/// `-e1*e2` by the caller.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    evens: Vec<u32>,
    odd: u64,
}

impl Monomial {
    pub fn one(n_even: usize) -> Self {
        Monomial { evens: vec![0; n_even], odd: 0 }
    }

    pub fn new(evens: Vec<u32>, odd: u64) -> Self {
        Monomial { evens, odd }
    }

    /// Builds from an odd index list that must be strictly increasing.
    pub fn from_parts(evens: Vec<u32>, odd_indices: &[usize]) -> Option<Self> {
        let mut mask = 0u64;
        let mut last = None;
        for &i in odd_indices {
            if i >= 64 || last.is_some_and(|l| l >= i) {
                return None;
            }
            mask |= 1 << i;
            last = Some(i);
        }
        Some(Monomial { evens, odd: mask })
    }

    pub fn even(n_even: usize, i: usize, e: u32) -> Self {
        let mut m = Self::one(n_even);
        m.evens[i] = e;
        m
    }

    pub fn odd(n_even: usize, i: usize) -> Self {
        Monomial { evens: vec![0; n_even], odd: 1 << i }
    }

    pub fn evens(&self) -> &[u32] {
        &self.evens
    }

    pub fn evens_mut(&mut self) -> &mut [u32] {
        &mut self.evens
    }

    pub fn odd_mask(&self) -> u64 {
        self.odd
    }

    pub fn odd_count(&self) -> usize {
        self.odd.count_ones() as usize
    }

    pub fn odd_indices(&self) -> impl Iterator<Item = usize> + '_ {
        let mut mask = self.odd;
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let i = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                Some(i)
            }
        })
    }

    pub fn has_odd(&self, i: usize) -> bool {
        self.odd >> i & 1 == 1
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.evens.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.evens.iter().sum::<u32>() + self.odd.count_ones()
    }

    pub fn even_degree(&self) -> u32 {
        self.evens.iter().sum()
    }

    /// Product with sign: `None` when the odd sets meet, otherwise
    /// `(negative, monomial)` where the sign sorts the concatenated odd lists.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let negative = koszul_negative(self.odd, other.odd);
        let evens = self
            .evens
            .iter()
            .zip(&other.evens)
            .map(|(a, b)| a + b)
            .collect();
        Some((negative, Monomial { evens, odd: self.odd | other.odd }))
    }

    /// Removes odd generator `i`, moving it to the front first.
    /// Returns the sign of that move, or `None` if `i` is absent.
    pub fn strip_odd_front(&self, i: usize) -> Option<(bool, Monomial)> {
        if !self.has_odd(i) {
            return None;
        }
        let below = (self.odd & ((1u64 << i) - 1)).count_ones();
        Some((
            below % 2 == 1,
            Monomial { evens: self.evens.clone(), odd: self.odd & !(1 << i) },
        ))
    }
}

/// Parity of the inversions of the list `a ++ b` (each list ascending).
pub fn koszul_negative(a: u64, b: u64) -> bool {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += if j == 63 { 0 } else { (a >> (j + 1)).count_ones() };
    }
    inversions % 2 == 1
}

impl Ord for Monomial {
    /// Degree first, then even exponents lexicographically, then the odd set with
    /// lower indices more significant.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.evens.cmp(&other.evens))
            .then_with(|| self.odd.reverse_bits().cmp(&other.odd.reverse_bits()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_sign_counts_inversions() {
        // e2 * e1 = -e1 e2
        assert!(koszul_negative(0b10, 0b01));
        assert!(!koszul_negative(0b01, 0b10));
        // (e1 e3) * e2: one inversion
        assert!(koszul_negative(0b101, 0b010));
        // (e2 e3) * e1: two inversions
        assert!(!koszul_negative(0b110, 0b001));
    }

    #[test]
    fn order_is_degree_first() {
        let x = Monomial::even(2, 0, 1);
        let y2 = Monomial::even(2, 1, 2);
        assert!(x < y2);
        assert!(Monomial::even(2, 1, 1) < x);
        assert!(Monomial::odd(0, 1) < Monomial::odd(0, 0));
    }

    #[test]
    fn odd_indices_ascend() {
        let m = Monomial::from_parts(vec![], &[0, 3, 5]).unwrap();
        assert_eq!(m.odd_indices().collect::<Vec<_>>(), vec![0, 3, 5]);
        assert!(Monomial::from_parts(vec![], &[3, 1]).is_none());
        let (neg, rest) = m.strip_odd_front(5).unwrap();
        assert!(!neg);
        assert_eq!(rest.odd_indices().collect::<Vec<_>>(), vec![0, 3]);
        assert!(m.strip_odd_front(3).unwrap().0);
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::monomial::Monomial;
use super::table::{same_table, Table};
use super::{AlgebraError, Parity};
use crate::scalar::Coefficient;

/// A polynomial in commuting even and anticommuting, square-zero odd generators.
///
/// Terms are kept in a sorted map with no zero coefficients, so structural
/// equality is mathematical equality.
#[derive(Clone)]
pub struct SuperPolynomial<C> {
    table: Table,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> SuperPolynomial<C> {
    pub fn zero(table: &Table) -> Self {
        SuperPolynomial { table: table.clone(), terms: BTreeMap::new() }
    }

    pub fn one(table: &Table) -> Self {
        Self::constant(table, C::one())
    }

    pub fn constant(table: &Table, c: C) -> Self {
        Self::monomial(table, Monomial::one(table.n_even()), c)
    }

    pub fn monomial(table: &Table, m: Monomial, c: C) -> Self {
        debug_assert_eq!(m.evens().len(), table.n_even());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SuperPolynomial { table: table.clone(), terms }
    }

    pub fn even_var(table: &Table, i: usize) -> Self {
        Self::monomial(table, Monomial::even(table.n_even(), i, 1), C::one())
    }

    pub fn odd_var(table: &Table, i: usize) -> Self {
        Self::monomial(table, Monomial::odd(table.n_even(), i), C::one())
    }

    /// Generator `g` in the evens-then-odds numbering.
    pub fn generator(table: &Table, g: usize) -> Self {
        if g < table.n_even() {
            Self::even_var(table, g)
        } else {
            Self::odd_var(table, g - table.n_even())
        }
    }

    pub fn var(table: &Table, name: &str) -> Result<Self, AlgebraError> {
        match table.lookup(name) {
            Some((Parity::Even, i)) => Ok(Self::even_var(table, i)),
            Some((Parity::Odd, i)) => Ok(Self::odd_var(table, i)),
            None => Err(AlgebraError::UnknownVariable(name.to_string())),
        }
    }

    /// Sums duplicate monomials and drops zeros.
    pub fn from_terms(table: &Table, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut map: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in terms {
            accumulate(&mut map, m, c);
        }
        map.retain(|_, c| !c.is_zero());
        SuperPolynomial { table: table.clone(), terms: map }
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, C> {
        self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at the origin (all generators set to zero).
    pub fn constant_term(&self) -> C {
        self.coefficient(&Monomial::one(self.table.n_even()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(AlgebraError::TableMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut terms, m.clone(), c.clone());
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(SuperPolynomial { table: self.table.clone(), terms })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut terms: BTreeMap<Monomial, C> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((neg, m)) = ma.mul(mb) {
                    let c = ca.clone() * cb.clone();
                    accumulate(&mut terms, m, if neg { -c } else { c });
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(SuperPolynomial { table: self.table.clone(), terms })
    }

    /// Left multiplication by a single signed monomial.
    pub fn mul_monomial(&self, m: &Monomial, c: &C) -> Self {
        let mut terms = BTreeMap::new();
        for (mb, cb) in &self.terms {
            if let Some((neg, prod)) = m.mul(mb) {
                let v = c.clone() * cb.clone();
                accumulate(&mut terms, prod, if neg { -v } else { v });
            }
        }
        terms.retain(|_, c: &mut C| !c.is_zero());
        SuperPolynomial { table: self.table.clone(), terms }
    }

    /// In-place sum; panics on mismatched tables.
    pub fn add_assign_ref(&mut self, other: &Self) {
        assert!(same_table(&self.table, &other.table), "polynomials over different variable tables");
        for (m, c) in &other.terms {
            match self.terms.get_mut(m) {
                Some(v) => {
                    *v = v.clone() + c.clone();
                    if v.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), c.clone());
                }
            }
        }
    }

    fn neg_ref(&self) -> Self {
        SuperPolynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero(&self.table);
        }
        SuperPolynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * s.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.table);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Terms whose odd part has the requested parity.
    pub fn parity_component(&self, parity: Parity) -> Self {
        self.filter(|m| Parity::of_count(m.odd_count()) == parity)
    }

    /// `Some(parity)` when the polynomial is parity-homogeneous; zero is both.
    pub fn parity(&self) -> Option<Parity> {
        let mut found = None;
        for m in self.terms.keys() {
            let p = Parity::of_count(m.odd_count());
            if found.is_some_and(|f| f != p) {
                return None;
            }
            found = Some(p);
        }
        Some(found.unwrap_or(Parity::Even))
    }

    pub fn has_parity(&self, parity: Parity) -> bool {
        self.is_zero() || self.parity() == Some(parity)
    }

    /// Terms with exactly `k` odd factors.
    pub fn odd_degree_component(&self, k: usize) -> Self {
        self.filter(|m| m.odd_count() == k)
    }

    /// Distinct numbers of odd factors present, ascending.
    pub fn odd_degrees(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().map(Monomial::odd_count).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        SuperPolynomial {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Rewrites every monomial (with a sign flip flag); colliding images are summed.
    pub fn map_monomials(&self, table: &Table, f: impl Fn(&Monomial) -> Option<(bool, Monomial)>) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some((neg, m2)) = f(m) {
                accumulate(&mut terms, m2, if neg { -c.clone() } else { c.clone() });
            }
        }
        terms.retain(|_, c: &mut C| !c.is_zero());
        SuperPolynomial { table: table.clone(), terms }
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> SuperPolynomial<D> {
        SuperPolynomial::from_terms(&self.table, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Re-expresses the polynomial over a table that contains all of its generators
    /// by name, keeping the relative order of odd generators.
    pub fn embed(&self, target: &Table) -> Result<Self, AlgebraError> {
        if same_table(&self.table, target) {
            return Ok(self.clone());
        }
        let mut even_map = Vec::with_capacity(self.table.n_even());
        for name in self.table.evens() {
            match target.lookup(name) {
                Some((Parity::Even, j)) => even_map.push(j),
                _ => return Err(AlgebraError::UnknownVariable(name.clone())),
            }
        }
        let mut odd_map = Vec::with_capacity(self.table.n_odd());
        for name in self.table.odds() {
            match target.lookup(name) {
                Some((Parity::Odd, j)) => odd_map.push(j),
                _ => return Err(AlgebraError::UnknownVariable(name.clone())),
            }
        }
        let n = target.n_even();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut evens = vec![0u32; n];
            for (i, &e) in m.evens().iter().enumerate() {
                evens[even_map[i]] = e;
            }
            // Multiply the odd generators in source order to pick up the sign.
            let mut acc = (false, Monomial::new(evens, 0));
            for i in m.odd_indices() {
                let (neg, prod) = acc.1.mul(&Monomial::odd(n, odd_map[i])).expect("distinct odds");
                acc = (acc.0 ^ neg, prod);
            }
            accumulate(&mut out.terms, acc.1, if acc.0 { -c.clone() } else { c.clone() });
        }
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Leading (largest) monomial.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }
}

pub(crate) fn accumulate<C: Coefficient>(map: &mut BTreeMap<Monomial, C>, m: Monomial, c: C) {
    match map.get_mut(&m) {
        Some(v) => *v = v.clone() + c,
        None => {
            map.insert(m, c);
        }
    }
}

impl<C: Coefficient> PartialEq for SuperPolynomial<C> {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl<C: Coefficient> Eq for SuperPolynomial<C> {}

impl<C: Coefficient> fmt::Debug for SuperPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics when the operands live over different variable tables;
        #[doc = concat!("use `", stringify!($checked), "` to get an error instead.")]
        impl<C: Coefficient> $trait<&SuperPolynomial<C>> for &SuperPolynomial<C> {
            type Output = SuperPolynomial<C>;
            fn $method(self, rhs: &SuperPolynomial<C>) -> SuperPolynomial<C> {
                self.$checked(rhs).expect("polynomials over different variable tables")
            }
        }

        impl<C: Coefficient> $trait<SuperPolynomial<C>> for SuperPolynomial<C> {
            type Output = SuperPolynomial<C>;
            fn $method(self, rhs: SuperPolynomial<C>) -> SuperPolynomial<C> {
                (&self).$method(&rhs)
            }
        }

        impl<C: Coefficient> $trait<&SuperPolynomial<C>> for SuperPolynomial<C> {
            type Output = SuperPolynomial<C>;
            fn $method(self, rhs: &SuperPolynomial<C>) -> SuperPolynomial<C> {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<C: Coefficient> Neg for &SuperPolynomial<C> {
    type Output = SuperPolynomial<C>;
    fn neg(self) -> SuperPolynomial<C> {
        self.neg_ref()
    }
}

impl<C: Coefficient> Neg for SuperPolynomial<C> {
    type Output = SuperPolynomial<C>;
    fn neg(self) -> SuperPolynomial<C> {
        self.neg_ref()
    }
}

/// Builds the left odd derivation determined by generator images and applies it.
///
/// `images` lists one polynomial per generator, evens first. The rule is
/// `d(ab) = d(a) b + (-1)^|a| a d(b)`.
pub fn odd_derivation<C: Coefficient>(
    images: &[SuperPolynomial<C>],
    p: &SuperPolynomial<C>,
) -> Result<SuperPolynomial<C>, AlgebraError> {
    let table = p.table();
    if images.len() != table.len() {
        return Err(AlgebraError::ImageCount { expected: table.len(), got: images.len() });
    }
    for (g, img) in images.iter().enumerate() {
        if !same_table(img.table(), table) {
            return Err(AlgebraError::TableMismatch);
        }
        if !img.has_parity(table.generator_parity(g).flip()) {
            return Err(AlgebraError::ParityMismatch { generator: table.generator_name(g).to_string() });
        }
    }
    Ok(apply_derivation(images, p))
}

/// Right odd derivation: `D(ab) = a D(b) + (-1)^|b| D(a) b`.
///
/// This is the rule satisfied by the coefficient of a right-hand odd parameter
/// under an algebra map, e.g. `a -> a0 + D(a) eps`.
pub fn right_odd_derivation<C: Coefficient>(
    images: &[SuperPolynomial<C>],
    p: &SuperPolynomial<C>,
) -> Result<SuperPolynomial<C>, AlgebraError> {
    // D(a) = (-1)^|a| L(a) where L is the left derivation with L(g) = (-1)^|g| D(g).
    let table = p.table();
    let left: Vec<_> = images
        .iter()
        .enumerate()
        .map(|(g, img)| if table.generator_parity(g) == Parity::Odd { -img } else { img.clone() })
        .collect();
    let even = odd_derivation(&left, &p.parity_component(Parity::Even))?;
    let odd = odd_derivation(&left, &p.parity_component(Parity::Odd))?;
    Ok(even - odd)
}

pub(crate) fn apply_derivation<C: Coefficient>(
    images: &[SuperPolynomial<C>],
    p: &SuperPolynomial<C>,
) -> SuperPolynomial<C> {
    let table = p.table();
    let n = table.n_even();
    let mut out = SuperPolynomial::zero(table);
    for (m, c) in p.terms() {
        for (j, &e) in m.evens().iter().enumerate() {
            if e == 0 || images[j].is_zero() {
                continue;
            }
            let mut rest = m.clone();
            rest.evens_mut()[j] -= 1;
            let (evens_only, odd_part) = split_even_odd(&rest, n);
            // x^(a-e_j) * d(x_j) * theta_S
            let piece = images[j].mul_monomial(&evens_only, &(c.clone() * C::from_i64(e as i64)));
            out.add_assign_ref(&mul_right_monomial(&piece, &odd_part));
        }
        let odd: Vec<usize> = m.odd_indices().collect();
        for (r, &i) in odd.iter().enumerate() {
            let img = &images[n + i];
            if img.is_zero() {
                continue;
            }
            let prefix = Monomial::from_parts(m.evens().to_vec(), &odd[..r]).expect("sorted");
            let suffix = Monomial::from_parts(vec![0; n], &odd[r + 1..]).expect("sorted");
            let sign = if r % 2 == 1 { -c.clone() } else { c.clone() };
            let piece = img.mul_monomial(&prefix, &sign);
            out.add_assign_ref(&mul_right_monomial(&piece, &suffix));
        }
    }
    out
}

fn split_even_odd(m: &Monomial, n: usize) -> (Monomial, Monomial) {
    (Monomial::new(m.evens().to_vec(), 0), Monomial::new(vec![0; n], m.odd_mask()))
}

fn mul_right_monomial<C: Coefficient>(p: &SuperPolynomial<C>, m: &Monomial) -> SuperPolynomial<C> {
    if m.is_one() {
        return p.clone();
    }
    p.map_monomials(p.table(), |a| a.mul(m))
}

impl<C: Coefficient> SuperPolynomial<C> {
    /// True only for the constant polynomial 1.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(m, c)| m.is_one() && c.is_one())
    }
}

//! The bialgebra `ℚ[x, ε]` of endomorphisms of the superpoint and its coactions.
//!
//! Tensor factors are encoded by extending variable tables: a coaction on an
//! algebra `A` is an algebra map from `A` into `A` with `x` (even) and `eps`
//! (odd) adjoined, written with the `A` factor on the left. Two copies of the
//! bialgebra use `x_1, x_2, eps_1, eps_2`.
//!
//! With the `A` factor on the left, the `eps` coefficient `D` of a coaction
//! satisfies `D(ab) = a D(b) + (-1)^|b| D(a) b`, so the differential of the
//! associated cdga is the right derivation with the stored generator images.

mod forms;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::One;
use thiserror::Error;

use crate::forms::MappingSpaceRing;
use crate::superalg::{right_odd_derivation, AlgebraError, AlgebraMap, Monomial, SuperPolynomial, Table, VariableTable};
use crate::{Poly, Rational, RationalMap};

pub use forms::{basic_twist_coinvariance, coaction_on_forms, is_grouplike, truncation_max_degree, FormCoaction};

pub const X: &str = "x";
pub const EPS: &str = "eps";

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CoactionError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("generator {generator}: image is not of the form a*x^k + b*x^k*eps ({reason})")]
    NotCdgaShape { generator: String, reason: String },
    #[error("generator {generator} has negative degree {degree}")]
    NonConnective { generator: String, degree: i64 },
    #[error("d({generator}) is not homogeneous of degree {expected}")]
    DegreeMismatch { generator: String, expected: i64 },
    #[error("d(d({generator})) is not zero")]
    DSquared { generator: String },
    #[error("not a coaction: {0}")]
    NotCoaction(String),
    #[error("{0} is not grouplike in the bialgebra")]
    NotGrouplike(String),
    #[error("{0}")]
    Form(String),
}

fn cached_table(key: &str, build: impl FnOnce() -> Table) -> Table {
    static CACHE: OnceLock<Mutex<HashMap<String, Table>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    cache.lock().expect("table cache").entry(key.to_string()).or_insert_with(build).clone()
}

/// `ℚ[x, eps]`.
pub fn end_table() -> Table {
    cached_table("end", || VariableTable::new([X], [EPS]).expect("end table"))
}

/// `ℚ[x_1, x_2, eps_1, eps_2]`.
pub fn double_table() -> Table {
    cached_table("double", || VariableTable::new(["x_1", "x_2"], ["eps_1", "eps_2"]).expect("double table"))
}

fn triple_table() -> Table {
    cached_table("triple", || {
        VariableTable::new(["x_1", "x_2", "x_3"], ["eps_1", "eps_2", "eps_3"]).expect("triple table")
    })
}

fn var(t: &Table, name: &str) -> Poly {
    SuperPolynomial::var(t, name).expect("known variable")
}

/// Outcome of an axiom check: the number of generator identities compared and
/// the ones that failed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn compare(&mut self, label: &str, lhs: &RationalMap, rhs: &RationalMap) {
        for g in 0..lhs.source().len() {
            self.checked += 1;
            if lhs.image(g) != rhs.image(g) {
                self.violations.push(format!(
                    "{label} at {}: {} != {}",
                    lhs.source().generator_name(g),
                    lhs.image(g),
                    rhs.image(g)
                ));
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct EndBialgebra {
    pub table: Table,
    pub double: Table,
    /// `x ↦ x_1 x_2`, `eps ↦ eps_1 + x_1 eps_2`.
    pub comultiplication: RationalMap,
    /// `x ↦ 1`, `eps ↦ 0`.
    pub counit: RationalMap,
}

pub fn end_bialgebra() -> EndBialgebra {
    let table = end_table();
    let double = double_table();
    let d = &double;
    let comultiplication = AlgebraMap::new(
        &table,
        d,
        vec![var(d, "x_1") * var(d, "x_2"), var(d, "eps_1") + var(d, "x_1") * var(d, "eps_2")],
    )
    .expect("comultiplication");
    let empty = VariableTable::empty();
    let counit = AlgebraMap::new(&table, &empty, vec![Poly::one(&empty), Poly::zero(&empty)]).expect("counit");
    EndBialgebra { table, double, comultiplication, counit }
}

impl EndBialgebra {
    /// `m*` applied to a polynomial in `x, eps`.
    pub fn comultiply(&self, p: &Poly) -> Poly {
        self.comultiplication.apply(p)
    }

    /// Coassociativity into three copies and both counit laws, on generators.
    pub fn verify(&self) -> AxiomReport {
        let mut report = AxiomReport::default();
        let t3 = triple_table();
        let d = &self.double;
        let v = |n: &str| var(&t3, n);
        // m* on the first copy, second copy becomes the third
        let left = AlgebraMap::new(d, &t3, vec![v("x_1") * v("x_2"), v("x_3"), v("eps_1") + v("x_1") * v("eps_2"), v("eps_3")])
            .expect("m* ⊗ 1");
        let right = AlgebraMap::new(d, &t3, vec![v("x_1"), v("x_2") * v("x_3"), v("eps_1"), v("eps_2") + v("x_2") * v("eps_3")])
            .expect("1 ⊗ m*");
        let lhs = left.compose(&self.comultiplication).expect("composable");
        let rhs = right.compose(&self.comultiplication).expect("composable");
        report.compare("coassociativity", &lhs, &rhs);

        let t = &self.table;
        let one = Poly::one(t);
        let zero = Poly::zero(t);
        let first = AlgebraMap::new(d, t, vec![one.clone(), var(t, X), zero.clone(), var(t, EPS)]).expect("counit ⊗ 1");
        let second = AlgebraMap::new(d, t, vec![var(t, X), one, var(t, EPS), zero]).expect("1 ⊗ counit");
        let id = AlgebraMap::identity(t);
        report.compare("left counit", &first.compose(&self.comultiplication).expect("composable"), &id);
        report.compare("right counit", &second.compose(&self.comultiplication).expect("composable"), &id);
        report
    }
}

/// An algebra map `A → A ⊗ ℚ[x, eps]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coaction {
    algebra: Table,
    extended: Table,
    map: RationalMap,
}

/// `A` with `x` and `eps` appended.
pub fn extended_table(algebra: &Table) -> Result<Table, AlgebraError> {
    algebra.extended([X], [EPS])
}

impl Coaction {
    /// Images must be over [`extended_table`] of `algebra`. Parity is not checked
    /// here so that malformed candidates can still be verified and reported.
    pub fn new(algebra: &Table, images: Vec<Poly>) -> Result<Self, CoactionError> {
        let extended = match images.first() {
            Some(p) => p.table().clone(),
            None => extended_table(algebra)?,
        };
        if *extended != *extended_table(algebra)? {
            return Err(AlgebraError::TableMismatch.into());
        }
        let map = AlgebraMap::new_unchecked(algebra, &extended, images)?;
        Ok(Coaction { algebra: algebra.clone(), extended, map })
    }

    /// Parses one image per generator (evens first).
    pub fn from_text(algebra: &Table, images: &[&str]) -> Result<Self, CoactionError> {
        let ext = extended_table(algebra)?;
        let images = images.iter().map(|s| Poly::parse(&ext, s)).collect::<Result<Vec<_>, _>>()?;
        Self::new(algebra, images)
    }

    /// `a ↦ a`.
    pub fn trivial(algebra: &Table) -> Self {
        let ext = extended_table(algebra).expect("extended table");
        let images = (0..algebra.len()).map(|g| var(&ext, algebra.generator_name(g))).collect();
        Self::new(algebra, images).expect("trivial coaction")
    }

    pub fn algebra(&self) -> &Table {
        &self.algebra
    }

    pub fn extended(&self) -> &Table {
        &self.extended
    }

    pub fn map(&self) -> &RationalMap {
        &self.map
    }

    pub fn image(&self, g: usize) -> &Poly {
        self.map.image(g)
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        self.map.apply(p)
    }
}

impl fmt::Display for Coaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in 0..self.algebra.len() {
            writeln!(f, "{} -> {}", self.algebra.generator_name(g), self.image(g))?;
        }
        Ok(())
    }
}

/// Images of the canonical coaction on a table whose evens are
/// `x1..xn, de1..deq` and odds `dx1..dxn, e1..eq`.
fn paired_images(table: &Table, n: usize, q: usize) -> Vec<Poly> {
    let ext = extended_table(table).expect("extended table");
    let (x, eps) = (var(&ext, X), var(&ext, EPS));
    let mut images = Vec::with_capacity(table.len());
    for i in 0..n {
        images.push(Poly::even_var(&ext, i) + Poly::odd_var(&ext, i) * &eps);
    }
    for i in 0..q {
        images.push(Poly::even_var(&ext, n + i) * &x);
    }
    for i in 0..n {
        images.push(Poly::odd_var(&ext, i) * &x);
    }
    for i in 0..q {
        images.push(Poly::odd_var(&ext, n + i) + Poly::even_var(&ext, n + i) * &eps);
    }
    debug_assert_eq!(images.len(), table.len());
    images
}

/// `x_i ↦ x_i + dx_i eps`, `de_i ↦ de_i x`, `dx_i ↦ dx_i x`, `e_i ↦ e_i + de_i eps`.
pub fn canonical_coaction(ring: &MappingSpaceRing) -> Coaction {
    Coaction::new(&ring.table, paired_images(&ring.table, ring.n, ring.q)).expect("canonical coaction")
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoactionReport {
    pub checked: usize,
    pub parity: Vec<String>,
    pub coassociativity: Vec<String>,
    pub counit: Vec<String>,
}

impl CoactionReport {
    pub fn passes(&self) -> bool {
        self.parity.is_empty() && self.coassociativity.is_empty() && self.counit.is_empty()
    }

    /// Generators that failed any check, in table order without repeats.
    pub fn offending(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for g in self.parity.iter().chain(&self.coassociativity).chain(&self.counit) {
            if !out.contains(g) {
                out.push(g.clone());
            }
        }
        out
    }
}

/// Checks parity, `(id ⊗ m*) ∘ μ* = (μ* ⊗ id) ∘ μ*` and the counit law on every generator.
pub fn verify_coaction(c: &Coaction) -> CoactionReport {
    let mut report = CoactionReport::default();
    let a = &c.algebra;
    let ext = &c.extended;
    for g in c.map.parity_violations() {
        report.parity.push(a.generator_name(g).to_string());
    }
    let two = a.extended(["x_1", "x_2"], ["eps_1", "eps_2"]).expect("two-copy table");
    let v = |n: &str| var(&two, n);
    let ids = |t: &Table| (0..a.len()).map(|g| var(t, a.generator_name(g))).collect::<Vec<_>>();
    let with = |mut base: Vec<Poly>, x: Poly, eps: Poly| {
        // extended tables put x after the evens and eps after the odds
        base.insert(a.n_even(), x);
        base.push(eps);
        base
    };
    let one_m = AlgebraMap::new_unchecked(ext, &two, with(ids(&two), v("x_1") * v("x_2"), v("eps_1") + v("x_1") * v("eps_2")))
        .expect("1 ⊗ m*");
    let rename = AlgebraMap::new_unchecked(ext, &two, with(ids(&two), v("x_1"), v("eps_1"))).expect("rename");
    let inner: Vec<Poly> = (0..a.len()).map(|g| rename.apply(c.image(g))).collect();
    let mu_one = AlgebraMap::new_unchecked(ext, &two, with(inner, v("x_2"), v("eps_2"))).expect("μ* ⊗ 1");
    let counit = AlgebraMap::new_unchecked(ext, a, with(ids(a), Poly::one(a), Poly::zero(a))).expect("counit");
    for g in 0..a.len() {
        report.checked += 2;
        let img = c.image(g);
        if one_m.apply(img) != mu_one.apply(img) {
            report.coassociativity.push(a.generator_name(g).to_string());
        }
        if counit.apply(img) != Poly::generator(a, g) {
            report.counit.push(a.generator_name(g).to_string());
        }
    }
    report
}

/// A connective grading and a degree-one differential given on generators.
///
/// The differential is the right derivation (see the module docs) determined by
/// `differential`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdgaStructure {
    table: Table,
    degrees: Vec<i64>,
    differential: Vec<Poly>,
}

impl CdgaStructure {
    pub fn new(table: &Table, degrees: Vec<i64>, differential: Vec<Poly>) -> Result<Self, CoactionError> {
        if degrees.len() != table.len() || differential.len() != table.len() {
            return Err(AlgebraError::ImageCount { expected: table.len(), got: degrees.len().min(differential.len()) }.into());
        }
        for (g, &k) in degrees.iter().enumerate() {
            if k < 0 {
                return Err(CoactionError::NonConnective { generator: table.generator_name(g).to_string(), degree: k });
            }
        }
        let s = CdgaStructure { table: table.clone(), degrees, differential };
        for g in 0..table.len() {
            let name = table.generator_name(g).to_string();
            let img = &s.differential[g];
            if !img.has_parity(table.generator_parity(g).flip()) {
                return Err(AlgebraError::ParityMismatch { generator: name }.into());
            }
            let expected = s.degrees[g] + 1;
            if !img.is_zero() && s.homogeneous_degree(img) != Some(expected) {
                return Err(CoactionError::DegreeMismatch { generator: name, expected });
            }
            if !s.d(img).is_zero() {
                return Err(CoactionError::DSquared { generator: name });
            }
        }
        Ok(s)
    }

    /// The grading and differential of a mapping space ring.
    pub fn of_ring(ring: &MappingSpaceRing) -> Self {
        Self::new(&ring.table, ring.degrees(), ring.differential_images()).expect("mapping space cdga")
    }

    /// Zero differential, everything in degree zero.
    pub fn trivial(table: &Table) -> Self {
        Self::new(table, vec![0; table.len()], vec![Poly::zero(table); table.len()]).expect("trivial cdga")
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn differential(&self) -> &[Poly] {
        &self.differential
    }

    pub fn monomial_degree(&self, m: &Monomial) -> i64 {
        let n = self.table.n_even();
        let evens: i64 = m.evens().iter().enumerate().map(|(i, &e)| e as i64 * self.degrees[i]).sum();
        evens + m.odd_indices().map(|i| self.degrees[n + i]).sum::<i64>()
    }

    /// The common degree of all terms, if there is one.
    pub fn homogeneous_degree(&self, p: &Poly) -> Option<i64> {
        let mut degs = p.terms().map(|(m, _)| self.monomial_degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn d(&self, p: &Poly) -> Poly {
        right_odd_derivation(&self.differential, p).expect("differential images")
    }
}

/// Reads off degrees and differential from a coaction of the form
/// `g ↦ g x^k + D(g) x^k eps` on every generator.
pub fn coaction_to_cdga(c: &Coaction) -> Result<CdgaStructure, CoactionError> {
    let report = verify_coaction(c);
    if !report.passes() {
        return Err(CoactionError::NotCoaction(format!("fails on {}", report.offending().join(", "))));
    }
    let a = &c.algebra;
    let ne = a.n_even();
    let no = a.n_odd();
    let mut degrees = Vec::with_capacity(a.len());
    let mut differential = Vec::with_capacity(a.len());
    for g in 0..a.len() {
        let name = a.generator_name(g).to_string();
        let shape = |reason: &str| CoactionError::NotCdgaShape { generator: name.clone(), reason: reason.into() };
        let mut plain: Vec<(u32, Monomial, Rational)> = Vec::new();
        let mut with_eps: Vec<(u32, Monomial, Rational)> = Vec::new();
        for (m, coeff) in c.image(g).terms() {
            let k = m.evens()[ne];
            let inner = Monomial::new(m.evens()[..ne].to_vec(), m.odd_mask() & ((1u64 << no) - 1));
            if m.has_odd(no) {
                with_eps.push((k, inner, coeff.clone()));
            } else {
                plain.push((k, inner, coeff.clone()));
            }
        }
        let gen = Poly::generator(a, g);
        let (gm, _) = gen.leading().expect("generator");
        let k = match plain.as_slice() {
            [(k, m, coeff)] if m == gm && coeff.is_one() => *k,
            _ => return Err(shape("the eps-free part must be the generator times a power of x")),
        };
        if with_eps.iter().any(|(j, _, _)| *j != k) {
            return Err(shape("the eps part has a different power of x"));
        }
        degrees.push(k as i64);
        differential.push(Poly::from_terms(a, with_eps.into_iter().map(|(_, m, coeff)| (m, coeff))));
    }
    CdgaStructure::new(a, degrees, differential)
}

/// `g ↦ g x^k + d(g) x^k eps` on generators of degree `k`.
pub fn cdga_to_coaction(s: &CdgaStructure) -> Coaction {
    let a = &s.table;
    let ext = extended_table(a).expect("extended table");
    let x = var(&ext, X);
    let eps = var(&ext, EPS);
    let images = (0..a.len())
        .map(|g| {
            let xk = x.pow(s.degrees[g] as u32);
            let dg = s.differential[g].embed(&ext).expect("embedding");
            (Poly::generator(&ext, if g < a.n_even() { g } else { g + 1 }) + dg * &eps) * &xk
        })
        .collect();
    Coaction::new(a, images).expect("cdga coaction")
}

#[cfg(test)]
mod tests;

//! Rational cohomology of finite simplicial sets, integration of forms over
//! simplices, exactness, and concordance of closed forms.

mod concordance;

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::forms::{FormError, FormSpace, SullivanForm};
use crate::linalg::{solve_columns, sparse_from, Echelon, SparseVec};
use crate::simplicial::{SimplexRef, SimplicialSet};
use crate::superalg::Monomial;
use crate::{Poly, Rational};

pub use concordance::{
    cochain_concordance_witness, concordance_check, transport_to_prism, ConcordanceVerdict, Notion, Witness,
};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error("form is not closed")]
    NotClosed,
    #[error("form is not homogeneous (degrees {0:?})")]
    NotHomogeneous(Vec<usize>),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("forms live on different spaces")]
    SpaceMismatch,
    #[error("d(alpha) differs from omega0 - omega1")]
    BadPrimitive,
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Normalized cochains: one coordinate per nondegenerate simplex, with
/// `(δc)(σ) = Σ (-1)^i c(d_i σ)` and degenerate faces contributing zero.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    space: Arc<SimplicialSet>,
    /// `coboundary[n]` has one sparse row per `(n+1)`-simplex over the `n`-simplices.
    coboundary: Vec<Vec<SparseVec<Rational>>>,
}

pub type Cochain = Vec<Rational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: usize,
    pub representative: Cochain,
}

impl CochainComplex {
    pub fn new(space: &Arc<SimplicialSet>) -> Self {
        let top = space.dim().unwrap_or(0);
        let coboundary = (0..top)
            .map(|n| {
                space
                    .simplices(n + 1)
                    .map(|r| {
                        let entries = space.faces(r).iter().enumerate().filter(|(_, f)| !f.is_degenerate()).map(
                            |(i, f)| {
                                let s = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
                                (f.core.index, s)
                            },
                        );
                        sparse_from(entries)
                    })
                    .collect()
            })
            .collect();
        CochainComplex { space: space.clone(), coboundary }
    }

    pub fn space(&self) -> &Arc<SimplicialSet> {
        &self.space
    }

    pub fn dim(&self, n: usize) -> usize {
        self.space.count(n)
    }

    pub fn delta(&self, n: usize, c: &[Rational]) -> Cochain {
        match self.coboundary.get(n) {
            None => Vec::new(),
            Some(rows) => rows
                .iter()
                .map(|row| row.iter().fold(Rational::zero(), |acc, (j, s)| acc + s * &c[*j]))
                .collect(),
        }
    }

    fn rank_delta(&self, n: usize) -> usize {
        match self.coboundary.get(n) {
            None => 0,
            Some(rows) => Echelon::from_rows(self.dim(n), rows.iter().cloned()).rank(),
        }
    }

    /// Images under `δ_{n-1}` of the standard basis, as sparse columns.
    fn coboundary_columns(&self, n: usize) -> Vec<SparseVec<Rational>> {
        if n == 0 {
            return Vec::new();
        }
        let mut cols = vec![Vec::new(); self.dim(n - 1)];
        for (i, row) in self.coboundary[n - 1].iter().enumerate() {
            for (j, s) in row {
                cols[*j].push((i, s.clone()));
            }
        }
        cols
    }

    pub fn betti(&self, n: usize) -> usize {
        let below = if n == 0 { 0 } else { self.rank_delta(n - 1) };
        self.dim(n) - self.rank_delta(n) - below
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..=self.space.dim().unwrap_or(0)).map(|n| self.betti(n)).collect()
    }

    /// Cocycles whose classes form a basis of `Hⁿ`.
    pub fn cohomology_basis(&self, n: usize) -> Vec<CohomologyClass> {
        let d = self.dim(n);
        let kernel = match self.coboundary.get(n) {
            Some(rows) => Echelon::from_rows(d, rows.iter().cloned()).kernel_basis(),
            None => (0..d).map(|i| vec![(i, Rational::one())]).collect(),
        };
        let mut span = Echelon::from_rows(d, self.coboundary_columns(n));
        let mut out = Vec::new();
        for v in kernel {
            if span.insert(v.clone()) {
                out.push(CohomologyClass { degree: n, representative: dense(&v, d) });
            }
        }
        out
    }

    pub fn is_cocycle(&self, n: usize, c: &[Rational]) -> bool {
        self.delta(n, c).iter().all(Zero::is_zero)
    }

    pub fn is_coboundary(&self, n: usize, c: &[Rational]) -> bool {
        if n == 0 {
            return c.iter().all(Zero::is_zero);
        }
        solve_columns(self.dim(n), &self.coboundary_columns(n), &sparse(c)).is_some()
    }

    /// Coordinates of the class of a cocycle in the basis of [`CochainComplex::cohomology_basis`].
    pub fn class_coordinates(&self, n: usize, c: &[Rational]) -> Option<Vec<Rational>> {
        if !self.is_cocycle(n, c) {
            return None;
        }
        let basis = self.cohomology_basis(n);
        let mut cols: Vec<SparseVec<Rational>> = basis.iter().map(|b| sparse(&b.representative)).collect();
        cols.extend(self.coboundary_columns(n));
        let x = solve_columns(self.dim(n), &cols, &sparse(c))?;
        Some(x[..basis.len()].to_vec())
    }
}

fn dense(v: &[(usize, Rational)], d: usize) -> Cochain {
    let mut out = vec![Rational::zero(); d];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

fn sparse(c: &[Rational]) -> SparseVec<Rational> {
    c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Betti number `bⁿ` and a basis of classes.
pub fn simplicial_cohomology(x: &Arc<SimplicialSet>, n: usize) -> (usize, Vec<CohomologyClass>) {
    let c = CochainComplex::new(x);
    (c.betti(n), c.cohomology_basis(n))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `∫_{Δⁿ} x^a dx1…dxn = ∏ aᵢ! / (n + Σ aᵢ)!`.
fn integrate_monomial(n: usize, m: &Monomial) -> Rational {
    let num = m.evens().iter().fold(BigInt::one(), |acc, &a| acc * factorial(a));
    let total = n as u32 + m.evens().iter().sum::<u32>();
    Rational::new(num, factorial(total))
}

/// Integral over the standard `n`-simplex of an `n`-form, with
/// `dx1 ∧ … ∧ dxn` integrating to the volume `1/n!`.
pub fn integrate(n: usize, p: &Poly) -> Result<Rational, HomologyError> {
    let mut total = Rational::zero();
    for (m, c) in p.terms() {
        if m.odd_count() != n || m.evens().len() != n {
            return Err(HomologyError::DegreeMismatch { expected: n, found: m.odd_count() });
        }
        total += c * integrate_monomial(n, m);
    }
    Ok(total)
}

/// `σ ↦ ∫_σ a_n` on the nondegenerate `n`-simplices.
pub fn integration_cochain(a: &SullivanForm, n: usize) -> Cochain {
    assert!(!a.is_cylinder(), "integration is defined for forms on X");
    a.space()
        .simplices(n)
        .map(|r| integrate(n, &a.value(r).odd_degree_component(n)).expect("degree component"))
        .collect()
}

/// The single degree of a nonzero homogeneous form, or `None` for zero.
pub fn homogeneous_degree(a: &SullivanForm) -> Result<Option<usize>, HomologyError> {
    match a.degrees().as_slice() {
        [] => Ok(None),
        [d] => Ok(Some(*d)),
        ds => Err(HomologyError::NotHomogeneous(ds.to_vec())),
    }
}

/// Decides exactness through the integration map.
pub fn is_exact(a: &SullivanForm) -> Result<bool, HomologyError> {
    if !a.is_closed() {
        return Err(HomologyError::NotClosed);
    }
    let Some(n) = homogeneous_degree(a)? else {
        return Ok(true);
    };
    let c = CochainComplex::new(a.space());
    Ok(c.is_coboundary(n, &integration_cochain(a, n)))
}

/// Some `η` with `dη = a` among compatible forms of polynomial degree at most
/// `polydeg_bound`, verified before it is returned.
pub fn exactness_witness(a: &SullivanForm, polydeg_bound: usize) -> Result<Option<SullivanForm>, HomologyError> {
    if !a.is_closed() {
        return Err(HomologyError::NotClosed);
    }
    let Some(n) = homogeneous_degree(a)? else {
        let zero = SullivanForm::zero(a.space());
        return Ok(Some(if a.is_cylinder() { zero.to_cylinder() } else { zero }));
    };
    if n == 0 {
        return Ok(None);
    }
    let fs = FormSpace::new(a.space(), n - 1, polydeg_bound, a.is_cylinder())?;
    Ok(fs.solve_differential(a).filter(|eta| eta.differential() == *a))
}

/// Ranks computed from bounded-degree forms next to the simplicial Betti number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormCohomology {
    pub degree: usize,
    pub polydeg_bound: usize,
    /// Closed `n`-forms of polynomial degree at most the bound.
    pub closed: usize,
    /// `d` of `(n-1)`-forms of polynomial degree at most the bound plus one.
    pub exact: usize,
    /// Rank of the integration map on closed forms, in cohomology.
    pub integration_rank: usize,
    pub betti: usize,
}

impl FormCohomology {
    pub fn quotient_rank(&self) -> usize {
        self.closed - self.exact
    }

    pub fn matches(&self) -> bool {
        self.quotient_rank() == self.betti && self.integration_rank == self.betti
    }
}

/// Compares `Z_D / d(Ω_{D+1})` with simplicial `Hⁿ` through the integration map.
pub fn form_cohomology(x: &Arc<SimplicialSet>, n: usize, polydeg_bound: usize) -> Result<FormCohomology, HomologyError> {
    let complex = CochainComplex::new(x);
    let fs = FormSpace::new(x, n, polydeg_bound, false)?;
    let closed_basis = closed_subspace(&fs);
    let exact = if n == 0 { 0 } else { FormSpace::new(x, n - 1, polydeg_bound + 1, false)?.differential_rank() };
    let classes = complex.cohomology_basis(n);
    let mut image = Echelon::new(classes.len());
    for z in &closed_basis {
        let coords = complex.class_coordinates(n, &integration_cochain(z, n)).expect("closed forms integrate to cocycles");
        image.insert(sparse(&coords));
    }
    Ok(FormCohomology {
        degree: n,
        polydeg_bound,
        closed: closed_basis.len(),
        exact,
        integration_rank: image.rank(),
        betti: classes.len(),
    })
}

/// Basis of the closed forms in a form space.
pub fn closed_subspace(fs: &FormSpace) -> Vec<SullivanForm> {
    let mut keys: HashMap<(SimplexRef, Monomial), usize> = HashMap::new();
    let rows: Vec<SparseVec<Rational>> = fs
        .basis()
        .iter()
        .map(|b| {
            let db = b.differential();
            let mut entries = Vec::new();
            for r in db.space().all_simplices() {
                for (m, c) in db.value(r).terms() {
                    let next = keys.len();
                    entries.push((*keys.entry((r, m.clone())).or_insert(next), c.clone()));
                }
            }
            sparse_from(entries)
        })
        .collect();
    // kernel of the map basis → d(basis): transpose to equations over basis coefficients
    let mut eqs: Vec<SparseVec<Rational>> = vec![Vec::new(); keys.len()];
    for (j, row) in rows.iter().enumerate() {
        for (i, x) in row {
            eqs[*i].push((j, x.clone()));
        }
    }
    let ech = Echelon::from_rows(rows.len(), eqs.into_iter().filter(|e| !e.is_empty()));
    ech.kernel_basis()
        .iter()
        .map(|v| {
            let coeffs = dense(v, rows.len());
            fs.combination(&coeffs)
        })
        .collect()
}

/// `Σ_{k ≡ n (mod 2)} bᵏ`.
pub fn periodic_betti(x: &Arc<SimplicialSet>, n: usize) -> usize {
    let c = CochainComplex::new(x);
    (0..=x.dim().unwrap_or(0)).filter(|k| k % 2 == n % 2).map(|k| c.betti(k)).sum()
}

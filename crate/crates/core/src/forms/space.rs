//! Finite-dimensional spaces of compatible forms with bounded coefficient degree.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::One;

use crate::linalg::{combine, solve_columns, sparse_from, Echelon, SparseVec};
use crate::simplicial::{SimplexRef, SimplicialSet};
use crate::superalg::{Monomial, SuperPolynomial};
use crate::{Poly, Rational};

use super::{form_pullback, forms_table, FormError, SullivanForm};

/// Largest number of unknown coefficients a form space may have.
pub const MAX_UNKNOWNS: usize = 200_000;

/// Compatible forms of a fixed form degree whose coefficient polynomials have
/// total degree at most `polydeg_bound` (counting `t` for cylinder forms).
///
/// Unknowns are the coefficients of every allowed monomial on every
/// nondegenerate simplex; compatibility along each stored face is a linear
/// condition, and the basis is an exact kernel basis of those conditions.
#[derive(Clone, Debug)]
pub struct FormSpace {
    space: Arc<SimplicialSet>,
    degree: usize,
    polydeg_bound: usize,
    cylinder: bool,
    monomials: Vec<Vec<Monomial>>,
    offsets: Vec<usize>,
    ncols: usize,
    vectors: Vec<SparseVec<Rational>>,
    basis: Vec<SullivanForm>,
}

/// All monomials with `degree` odd factors and even degree at most `bound`
/// over `vars` even and `vars` odd variables.
fn monomials(vars: usize, degree: usize, bound: usize) -> Vec<Monomial> {
    if degree > vars {
        return Vec::new();
    }
    let mut evens: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..vars {
        let mut next = Vec::new();
        for e in &evens {
            let used: u32 = e.iter().sum();
            for a in 0..=(bound as u32 - used.min(bound as u32)) {
                let mut v = e.clone();
                v.push(a);
                next.push(v);
            }
        }
        evens = next;
    }
    let subsets: Vec<u64> = (0u64..(1 << vars)).filter(|m| m.count_ones() as usize == degree).collect();
    let mut out = Vec::with_capacity(evens.len() * subsets.len());
    for e in &evens {
        for &s in &subsets {
            out.push(Monomial::new(e.clone(), s));
        }
    }
    out.sort();
    out
}

impl FormSpace {
    pub fn new(
        space: &Arc<SimplicialSet>,
        degree: usize,
        polydeg_bound: usize,
        cylinder: bool,
    ) -> Result<Self, FormError> {
        let dims = space.dim().map_or(0, |d| d + 1);
        let cyl = usize::from(cylinder);
        let monos: Vec<Vec<Monomial>> = (0..dims).map(|n| monomials(n + cyl, degree, polydeg_bound)).collect();
        let mut offsets = Vec::with_capacity(dims + 1);
        let mut ncols = 0usize;
        for n in 0..dims {
            offsets.push(ncols);
            ncols += space.count(n) * monos[n].len();
        }
        offsets.push(ncols);
        if ncols > MAX_UNKNOWNS {
            return Err(FormError::TooLarge(format!("{ncols} unknown coefficients")));
        }

        let mut ech = Echelon::new(ncols);
        let mut pulled: HashMap<(Vec<usize>, usize), Vec<Poly>> = HashMap::new();
        let mut pull = |f: Vec<usize>, m: usize| -> Vec<Poly> {
            pulled
                .entry((f.clone(), m))
                .or_insert_with(|| {
                    let map = form_pullback(&f, m, cylinder);
                    let src = forms_table(m, cylinder);
                    monos[m].iter().map(|u| map.apply(&SuperPolynomial::monomial(&src, u.clone(), Rational::one()))).collect()
                })
                .clone()
        };
        for n in 1..dims {
            for r in space.simplices(n) {
                for i in 0..=n {
                    let delta: Vec<usize> = (0..n).map(|t| if t < i { t } else { t + 1 }).collect();
                    let face = space.face_of(r, i);
                    let lhs = pull(delta, n);
                    let rhs = pull(face.surjection.clone(), face.core.dim);
                    let mut rows: BTreeMap<Monomial, Vec<(usize, Rational)>> = BTreeMap::new();
                    let base_l = offsets[n] + r.index * monos[n].len();
                    for (j, p) in lhs.iter().enumerate() {
                        for (w, c) in p.terms() {
                            rows.entry(w.clone()).or_default().push((base_l + j, c.clone()));
                        }
                    }
                    let m = face.core.dim;
                    let base_r = offsets[m] + face.core.index * monos[m].len();
                    for (j, p) in rhs.iter().enumerate() {
                        for (w, c) in p.terms() {
                            rows.entry(w.clone()).or_default().push((base_r + j, -c.clone()));
                        }
                    }
                    for (_, row) in rows {
                        let row = sparse_from(row);
                        if !row.is_empty() {
                            ech.insert(row);
                        }
                    }
                }
            }
        }
        let vectors = ech.kernel_basis();
        let mut fs = FormSpace {
            space: space.clone(),
            degree,
            polydeg_bound,
            cylinder,
            monomials: monos,
            offsets,
            ncols,
            vectors: Vec::new(),
            basis: Vec::new(),
        };
        fs.basis = vectors.iter().map(|v| fs.vector_to_form(v)).collect();
        fs.vectors = vectors;
        Ok(fs)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn polydeg_bound(&self) -> usize {
        self.polydeg_bound
    }

    pub fn ambient_dim(&self) -> usize {
        self.ncols
    }

    pub fn basis(&self) -> &[SullivanForm] {
        &self.basis
    }

    pub fn basis_vectors(&self) -> &[SparseVec<Rational>] {
        &self.vectors
    }

    fn locate(&self, col: usize) -> (SimplexRef, usize) {
        let n = self.offsets.partition_point(|&o| o <= col) - 1;
        let width = self.monomials[n].len();
        let rel = col - self.offsets[n];
        (SimplexRef::new(n, rel / width), rel % width)
    }

    /// Form with the given ambient coordinates.
    pub fn vector_to_form(&self, v: &[(usize, Rational)]) -> SullivanForm {
        let mut terms: Vec<Vec<Vec<(Monomial, Rational)>>> =
            (0..self.monomials.len()).map(|n| vec![Vec::new(); self.space.count(n)]).collect();
        for (col, c) in v {
            let (r, j) = self.locate(*col);
            terms[r.dim][r.index].push((self.monomials[r.dim][j].clone(), c.clone()));
        }
        SullivanForm::from_fn(&self.space, self.cylinder, |r, t| {
            SuperPolynomial::from_terms(t, std::mem::take(&mut terms[r.dim][r.index]))
        })
    }

    /// Ambient coordinates of a form, or `None` if it has a monomial outside the space.
    pub fn coordinates(&self, form: &SullivanForm) -> Option<SparseVec<Rational>> {
        let mut entries = Vec::new();
        for n in 0..self.monomials.len() {
            let index: HashMap<&Monomial, usize> = self.monomials[n].iter().enumerate().map(|(j, m)| (m, j)).collect();
            for r in self.space.simplices(n) {
                for (m, c) in form.value(r).terms() {
                    let j = *index.get(m)?;
                    entries.push((self.offsets[n] + r.index * self.monomials[n].len() + j, c.clone()));
                }
            }
        }
        Some(sparse_from(entries))
    }

    pub fn combination(&self, coeffs: &[Rational]) -> SullivanForm {
        self.vector_to_form(&combine(&self.vectors, coeffs))
    }

    /// Some `η` in this space with `dη = target`, if one exists.
    pub fn solve_differential(&self, target: &SullivanForm) -> Option<SullivanForm> {
        let mut keys: HashMap<(SimplexRef, Monomial), usize> = HashMap::new();
        let mut key = |r: SimplexRef, m: &Monomial| -> usize {
            let next = keys.len();
            *keys.entry((r, m.clone())).or_insert(next)
        };
        let vectorize = |f: &SullivanForm, key: &mut dyn FnMut(SimplexRef, &Monomial) -> usize| {
            let mut entries = Vec::new();
            for r in f.space().all_simplices() {
                for (m, c) in f.value(r).terms() {
                    entries.push((key(r, m), c.clone()));
                }
            }
            sparse_from(entries)
        };
        let columns: Vec<SparseVec<Rational>> =
            self.basis.iter().map(|b| vectorize(&b.differential(), &mut key)).collect();
        let rhs = vectorize(target, &mut key);
        let x = solve_columns(keys.len(), &columns, &rhs)?;
        Some(self.combination(&x))
    }

    /// Rank of `d` restricted to this space.
    pub fn differential_rank(&self) -> usize {
        let mut keys: HashMap<(SimplexRef, Monomial), usize> = HashMap::new();
        let mut rows = Vec::new();
        for b in &self.basis {
            let db = b.differential();
            let mut entries = Vec::new();
            for r in db.space().all_simplices() {
                for (m, c) in db.value(r).terms() {
                    let next = keys.len();
                    entries.push((*keys.entry((r, m.clone())).or_insert(next), c.clone()));
                }
            }
            rows.push(sparse_from(entries));
        }
        crate::linalg::rank(keys.len(), rows)
    }
}

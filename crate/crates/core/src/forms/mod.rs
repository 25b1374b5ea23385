//! Sullivan polynomial forms on finite simplicial sets.
//!
//! A form is one polynomial per nondegenerate simplex `σ` of dimension `n`, in
//! `ℚ[x1..xn, dx1..dxn]` with the `dx` odd, such that restricting along each
//! face agrees with the value on the face's core. Forms may also carry an extra
//! interval coordinate `t` with odd `dt`; these model `Ω*(X) ⊗ Ω*(𝔸¹)`.

mod ring;
mod space;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::simplicial::{realization, SimplexRef, SimplicialSet};
use crate::superalg::{AlgebraError, AlgebraMap, Monomial, SuperPolynomial, Table, VariableTable};
use crate::{Coefficient, Poly, Rational, RationalMap};

pub use ring::{mapping_space_ring, MappingSpaceRing};
pub use space::FormSpace;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("forms live on different simplicial sets")]
    SpaceMismatch,
    #[error("one form has an interval coordinate and the other does not")]
    CylinderMismatch,
    #[error("missing value for simplex {0}")]
    MissingValue(String),
    #[error("form is not compatible: {0}")]
    Incompatible(String),
    #[error("form degree {degree} exceeds the limit for this space")]
    InfeasibleDegree { degree: usize },
    #[error("resource guard: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `ℚ[x1..xn (, t), dx1..dxn (, dt)]`, shared per `(n, cylinder)`.
pub fn forms_table(n: usize, cylinder: bool) -> Table {
    static CACHE: OnceLock<Mutex<HashMap<(usize, bool), Table>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    cache
        .lock()
        .expect("forms table cache")
        .entry((n, cylinder))
        .or_insert_with(|| {
            let mut evens: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            let mut odds: Vec<String> = (1..=n).map(|i| format!("dx{i}")).collect();
            if cylinder {
                evens.push("t".into());
                odds.push("dt".into());
            }
            VariableTable::new(evens, odds).expect("forms table")
        })
        .clone()
}

/// Pullback of forms along a monotone `f: [k] → [m]`, fixing `t` and `dt`.
pub fn form_pullback(f: &[usize], m: usize, cylinder: bool) -> Arc<RationalMap> {
    type Key = (Vec<usize>, usize, bool);
    static CACHE: OnceLock<Mutex<HashMap<Key, Arc<RationalMap>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (f.to_vec(), m, cylinder);
    if let Some(map) = cache.lock().expect("pullback cache").get(&key) {
        return map.clone();
    }
    let k = f.len() - 1;
    let source = forms_table(m, cylinder);
    let target = forms_table(k, cylinder);
    let xs = realization::pullback_images(&target, f, m);
    let dxs: Vec<Poly> = xs.iter().map(d_poly).collect();
    let mut images = xs;
    if cylinder {
        images.push(SuperPolynomial::even_var(&target, k));
    }
    images.extend(dxs);
    if cylinder {
        images.push(SuperPolynomial::odd_var(&target, k));
    }
    let map = Arc::new(AlgebraMap::new(&source, &target, images).expect("form pullback"));
    cache.lock().expect("pullback cache").insert(key, map.clone());
    map
}

/// The de Rham differential on a forms table: `x_j ↦ dx_j` (and `t ↦ dt`).
pub fn d_poly<C: Coefficient>(p: &SuperPolynomial<C>) -> SuperPolynomial<C> {
    let table = p.table();
    let mut terms = Vec::new();
    for (m, c) in p.terms() {
        for (j, &a) in m.evens().iter().enumerate() {
            if a == 0 || m.has_odd(j) {
                continue;
            }
            let below = (m.odd_mask() & ((1u64 << j) - 1)).count_ones();
            let mut evens = m.evens().to_vec();
            evens[j] -= 1;
            let mono = Monomial::new(evens, m.odd_mask() | 1 << j);
            let v = c.clone() * C::from_i64(a as i64);
            terms.push((mono, if below % 2 == 1 { -v } else { v }));
        }
    }
    SuperPolynomial::from_terms(table, terms)
}

/// One polynomial per nondegenerate simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SullivanForm {
    space: Arc<SimplicialSet>,
    cylinder: bool,
    values: Vec<Vec<Poly>>,
}

/// Outcome of a compatibility check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl CompatibilityReport {
    pub fn is_compatible(&self) -> bool {
        self.violations.is_empty()
    }
}

fn same_space(a: &Arc<SimplicialSet>, b: &Arc<SimplicialSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl SullivanForm {
    /// Values are taken as given; call [`SullivanForm::check_compatibility`] to
    /// confirm they glue.
    pub fn from_values(space: &Arc<SimplicialSet>, cylinder: bool, values: Vec<Vec<Poly>>) -> Result<Self, FormError> {
        let dims = space.dim().map_or(0, |d| d + 1);
        if values.len() != dims {
            return Err(FormError::MissingValue(format!("expected {dims} dimensions, got {}", values.len())));
        }
        for (n, level) in values.iter().enumerate() {
            if level.len() != space.count(n) {
                return Err(FormError::MissingValue(format!("dimension {n}")));
            }
            let table = forms_table(n, cylinder);
            for (k, v) in level.iter().enumerate() {
                if **v.table() != *table {
                    return Err(FormError::MissingValue(format!(
                        "value on {} is over the wrong variables",
                        space.label(SimplexRef::new(n, k))
                    )));
                }
            }
        }
        Ok(SullivanForm { space: space.clone(), cylinder, values })
    }

    /// Builds a form simplex by simplex.
    pub fn from_fn(space: &Arc<SimplicialSet>, cylinder: bool, mut f: impl FnMut(SimplexRef, &Table) -> Poly) -> Self {
        let dims = space.dim().map_or(0, |d| d + 1);
        let values = (0..dims)
            .map(|n| {
                let table = forms_table(n, cylinder);
                space.simplices(n).map(|r| f(r, &table)).collect()
            })
            .collect();
        SullivanForm { space: space.clone(), cylinder, values }
    }

    pub fn constant(space: &Arc<SimplicialSet>, c: Rational) -> Self {
        Self::from_fn(space, false, |_, t| SuperPolynomial::constant(t, c.clone()))
    }

    pub fn zero(space: &Arc<SimplicialSet>) -> Self {
        Self::constant(space, Rational::zero())
    }

    pub fn one(space: &Arc<SimplicialSet>) -> Self {
        Self::constant(space, Rational::one())
    }

    /// The interval coordinate `t` (`dt` when `differential` is set) as a cylinder form.
    pub fn interval_coordinate(space: &Arc<SimplicialSet>, differential: bool) -> Self {
        Self::from_fn(space, true, |r, t| {
            if differential {
                SuperPolynomial::odd_var(t, r.dim)
            } else {
                SuperPolynomial::even_var(t, r.dim)
            }
        })
    }

    pub fn space(&self) -> &Arc<SimplicialSet> {
        &self.space
    }

    pub fn is_cylinder(&self) -> bool {
        self.cylinder
    }

    pub fn value(&self, r: SimplexRef) -> &Poly {
        &self.values[r.dim][r.index]
    }

    pub fn values(&self) -> &[Vec<Poly>] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(Poly::is_zero)
    }

    fn zip(&self, other: &Self, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<Self, FormError> {
        if !same_space(&self.space, &other.space) {
            return Err(FormError::SpaceMismatch);
        }
        if self.cylinder != other.cylinder {
            return Err(FormError::CylinderMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(p, q)| f(p, q)).collect())
            .collect();
        Ok(SullivanForm { space: self.space.clone(), cylinder: self.cylinder, values })
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        SullivanForm {
            space: self.space.clone(),
            cylinder: self.cylinder,
            values: self.values.iter().map(|l| l.iter().map(&f).collect()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FormError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FormError> {
        self.zip(other, |a, b| a - b)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, FormError> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|p| -p)
    }

    /// `x_i ↦ dx_i`, `dx_i ↦ 0` on every simplex.
    pub fn differential(&self) -> Self {
        self.map(d_poly)
    }

    pub fn is_closed(&self) -> bool {
        self.differential().is_zero()
    }

    /// Terms with exactly `k` odd factors.
    pub fn degree_component(&self, k: usize) -> Self {
        self.map(|p| p.odd_degree_component(k))
    }

    /// Form degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.values.iter().flatten().flat_map(|p| p.odd_degrees()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Is the form zero or concentrated in degree `k`?
    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.degrees().iter().all(|&d| d == k)
    }

    /// Highest form degree that can be nonzero.
    pub fn max_degree(&self) -> usize {
        self.space.dim().unwrap_or(0) + usize::from(self.cylinder)
    }

    pub fn check_compatibility(&self) -> CompatibilityReport {
        let mut report = CompatibilityReport::default();
        let x = &self.space;
        for n in 1..self.values.len() {
            for r in x.simplices(n) {
                for i in 0..=n {
                    report.checked += 1;
                    let delta: Vec<usize> = (0..n).map(|t| if t < i { t } else { t + 1 }).collect();
                    let lhs = form_pullback(&delta, n, self.cylinder).apply(self.value(r));
                    let face = x.face_of(r, i);
                    let rhs = form_pullback(&face.surjection, face.core.dim, self.cylinder).apply(self.value(face.core));
                    if lhs != rhs {
                        report.violations.push(format!(
                            "{} face {}: restriction {} but face value {}",
                            x.label(r),
                            i,
                            lhs,
                            rhs
                        ));
                    }
                }
            }
        }
        report
    }

    /// Value on a general (possibly degenerate) simplex.
    pub fn value_on(&self, s: &crate::simplicial::Simplex) -> Poly {
        form_pullback(&s.surjection, s.core.dim, self.cylinder).apply(self.value(s.core))
    }

    /// Adds the interval coordinate to the variables without changing values.
    pub fn to_cylinder(&self) -> Self {
        if self.cylinder {
            return self.clone();
        }
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(n, l)| {
                let t = forms_table(n, true);
                l.iter().map(|p| p.embed(&t).expect("cylinder embedding")).collect()
            })
            .collect();
        SullivanForm { space: self.space.clone(), cylinder: true, values }
    }

    /// Sets `t = j` and `dt = 0` in a cylinder form.
    pub fn at_endpoint(&self, j: u8) -> Self {
        assert!(self.cylinder, "endpoint evaluation needs a cylinder form");
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(n, l)| {
                let src = forms_table(n, true);
                let dst = forms_table(n, false);
                let mut images: Vec<Poly> = (0..n).map(|i| SuperPolynomial::even_var(&dst, i)).collect();
                images.push(SuperPolynomial::constant(&dst, Rational::from_i64(j as i64)));
                images.extend((0..n).map(|i| SuperPolynomial::odd_var(&dst, i)));
                images.push(SuperPolynomial::zero(&dst));
                let map = AlgebraMap::new(&src, &dst, images).expect("endpoint map");
                l.iter().map(|p| map.apply(p)).collect()
            })
            .collect();
        SullivanForm { space: self.space.clone(), cylinder: false, values }
    }

    /// A seeded pseudorandom compatible form of form degree `degree` whose
    /// coefficients have polynomial degree at most `polydeg_bound`.
    ///
    /// The form is a random small-integer combination of a basis of the space
    /// of all such compatible forms, which is computed exactly. Degrees above
    /// the dimension give the zero form.
    pub fn random(
        space: &Arc<SimplicialSet>,
        degree: usize,
        polydeg_bound: usize,
        seed: u64,
    ) -> Result<Self, FormError> {
        let fs = FormSpace::new(space, degree, polydeg_bound, false)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<Rational> = (0..fs.dim())
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Rational::zero()
                } else {
                    Rational::from_i64(rng.gen_range(-3..=3))
                }
            })
            .collect();
        Ok(fs.combination(&coeffs))
    }

    /// Pullback along a simplicial map `f: Y → X`, where `self` lives on `X`.
    pub fn pullback(&self, f: &crate::simplicial::SimplicialMap, source: &Arc<SimplicialSet>) -> Self {
        Self::from_fn(source, self.cylinder, |r, _| self.value_on(f.image(r)))
    }
}

/// Free-standing wrappers matching the operation names of the form calculus.
pub fn wedge(a: &SullivanForm, b: &SullivanForm) -> Result<SullivanForm, FormError> {
    a.wedge(b)
}

pub fn differential(a: &SullivanForm) -> SullivanForm {
    a.differential()
}

pub fn degree_component(a: &SullivanForm, k: usize) -> SullivanForm {
    a.degree_component(k)
}

pub fn random_form(x: &Arc<SimplicialSet>, degree: usize, polydeg_bound: usize, seed: u64) -> Result<SullivanForm, FormError> {
    SullivanForm::random(x, degree, polydeg_bound, seed)
}

/// Outcome of [`global_functions_ring_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RingCheckReport {
    pub generators: usize,
    pub checked: usize,
    pub violations: Vec<String>,
    /// Dimension of the degree-0, polynomial-degree-0 forms, i.e. locally constant functions.
    pub constants: usize,
}

impl RingCheckReport {
    pub fn is_closed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that compatible families are closed under sum, wedge and `d`, starting
/// from bases of low-degree compatible forms in every form degree.
pub fn global_functions_ring_check(x: &Arc<SimplicialSet>) -> Result<RingCheckReport, FormError> {
    let mut gens = Vec::new();
    let top = x.dim().unwrap_or(0);
    for p in 0..=top {
        gens.extend(FormSpace::new(x, p, 1, false)?.basis().iter().cloned());
    }
    let mut report = RingCheckReport {
        generators: gens.len(),
        constants: FormSpace::new(x, 0, 0, false)?.dim(),
        ..Default::default()
    };
    let mut record = |label: String, f: &SullivanForm| {
        report.checked += 1;
        let c = f.check_compatibility();
        if !c.is_compatible() {
            report.violations.push(format!("{label}: {}", c.violations[0]));
        }
    };
    for (i, a) in gens.iter().enumerate() {
        record(format!("d(g{i})"), &a.differential());
        for (j, b) in gens.iter().enumerate().skip(i) {
            record(format!("g{i} + g{j}"), &a.add(b)?);
            record(format!("g{i} ^ g{j}"), &a.wedge(b)?);
        }
    }
    Ok(report)
}

//! The canonical coaction applied simplexwise to forms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::forms::{forms_table, mapping_space_ring, SullivanForm};
use crate::superalg::Monomial;
use crate::Poly;

use super::{end_bialgebra, end_table, paired_images, var, Coaction, CoactionError, EPS, X};

/// The coaction on `forms_table(n, cylinder)`, which pairs each even variable
/// with its differential.
fn forms_coaction(n: usize, cylinder: bool) -> Arc<Coaction> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, bool), Arc<Coaction>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    cache
        .lock()
        .expect("coaction cache")
        .entry((n, cylinder))
        .or_insert_with(|| {
            let table = forms_table(n, cylinder);
            let m = n + usize::from(cylinder);
            Arc::new(Coaction::new(&table, paired_images(&table, m, 0)).expect("forms coaction"))
        })
        .clone()
}

/// `μ*(a) = Σ a_(k,e) x^k eps^e` with each coefficient a form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormCoaction {
    pub space: Arc<crate::simplicial::SimplicialSet>,
    /// Keyed by the power of `x` and whether `eps` occurs.
    pub terms: BTreeMap<(u32, bool), SullivanForm>,
}

impl FormCoaction {
    /// Every coefficient glues, i.e. the image lies in `Ω*(X) ⊗ ℚ[x, eps]`.
    pub fn is_compatible(&self) -> bool {
        self.terms.values().all(|f| f.check_compatibility().is_compatible())
    }

    pub fn coefficient(&self, k: u32, eps: bool) -> Option<&SullivanForm> {
        self.terms.get(&(k, eps))
    }

    /// Highest power of `x` that occurs.
    pub fn max_x_power(&self) -> Option<u32> {
        self.terms.keys().map(|(k, _)| *k).max()
    }

    /// `a ρ` for a polynomial `ρ` in `x, eps`, in the same layout.
    pub fn scaled(a: &SullivanForm, rho: &Poly) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in rho.terms() {
            let key = (m.evens()[0], m.has_odd(0));
            terms.insert(key, a.scale(c));
        }
        FormCoaction { space: a.space().clone(), terms }
    }
}

impl fmt::Display for FormCoaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((k, e), form) in &self.terms {
            writeln!(f, "[x^{k}{}]", if *e { " eps" } else { "" })?;
            for r in form.space().all_simplices() {
                let v = form.value(r);
                if !v.is_zero() {
                    writeln!(f, "  {}: {}", form.space().label(r), v)?;
                }
            }
        }
        Ok(())
    }
}

/// Applies the canonical coaction on every simplex and splits off the `x, eps` part.
pub fn coaction_on_forms(a: &SullivanForm) -> FormCoaction {
    let x = a.space();
    let cyl = a.is_cylinder();
    let mut parts: BTreeMap<(u32, bool), Vec<Vec<Vec<(Monomial, crate::Rational)>>>> = BTreeMap::new();
    let dims = a.values().len();
    for (n, level) in a.values().iter().enumerate() {
        let mu = forms_coaction(n, cyl);
        let ne = mu.algebra().n_even();
        let no = mu.algebra().n_odd();
        for (k, v) in level.iter().enumerate() {
            for (m, c) in mu.apply(v).terms() {
                let key = (m.evens()[ne], m.has_odd(no));
                let inner = Monomial::new(m.evens()[..ne].to_vec(), m.odd_mask() & ((1u64 << no) - 1));
                let slot = parts
                    .entry(key)
                    .or_insert_with(|| (0..dims).map(|d| vec![Vec::new(); x.count(d)]).collect());
                slot[n][k].push((inner, c.clone()));
            }
        }
    }
    let terms = parts
        .into_iter()
        .map(|(key, mut vals)| {
            let form = SullivanForm::from_fn(x, cyl, |r, t| {
                Poly::from_terms(t, std::mem::take(&mut vals[r.dim][r.index]))
            });
            (key, form)
        })
        .collect();
    FormCoaction { space: x.clone(), terms }
}

/// `m*(ρ) = ρ(x_1, eps_1) ρ(x_2, eps_2)` and `ρ(1, 0) = 1`.
pub fn is_grouplike(rho: &Poly) -> bool {
    let b = end_bialgebra();
    let d = &b.double;
    let rename = |x: &str, e: &str| {
        crate::superalg::AlgebraMap::new(&b.table, d, vec![var(d, x), var(d, e)]).expect("copy")
    };
    let lhs = b.comultiply(rho);
    let rhs = rename("x_1", "eps_1").apply(rho) * rename("x_2", "eps_2").apply(rho);
    lhs == rhs && b.counit.apply(rho).constant_term() == crate::Rational::from_integer(1.into())
}

/// Is `μ*(a) = a ρ`, i.e. is `a` coinvariant for the twist with representation `ρ`?
pub fn basic_twist_coinvariance(a: &SullivanForm, rho: &Poly) -> Result<bool, CoactionError> {
    if **rho.table() != *end_table() {
        return Err(CoactionError::NotGrouplike(format!("{rho} (expected a polynomial in {X}, {EPS})")));
    }
    if !is_grouplike(rho) {
        return Err(CoactionError::NotGrouplike(rho.to_string()));
    }
    let lhs = coaction_on_forms(a);
    let rhs = FormCoaction::scaled(a, rho);
    let strip = |f: &FormCoaction| -> BTreeMap<(u32, bool), SullivanForm> {
        f.terms.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (*k, v.clone())).collect()
    };
    Ok(strip(&lhs) == strip(&rhs))
}

/// Largest grading degree on functions on maps from the superpoint into
/// `𝔸^0 ⊔ 𝔸^1 ⊔ ... ⊔ 𝔸^N`, read off from the coaction on the top element
/// `dx1 ... dxn` of each piece.
pub fn truncation_max_degree(n_max: usize) -> u32 {
    (0..=n_max)
        .map(|n| {
            let ring = mapping_space_ring(n, 0);
            let mu = super::canonical_coaction(&ring);
            let mut top = Poly::one(&ring.table);
            for i in 0..n {
                top = top * Poly::odd_var(&ring.table, i);
            }
            let ne = ring.table.n_even();
            mu.apply(&top).terms().map(|(m, _)| m.evens()[ne]).max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

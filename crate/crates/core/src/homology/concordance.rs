//! Four notions of concordance between closed forms `ω₀, ω₁` on `X`:
//! cohomologous, cochain (a primitive of the difference), algebraic (a closed
//! form on `X × 𝔸¹` restricting to both), and simplicial (a closed form on the
//! prism `X × Δ¹` restricting to both under the end inclusions).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::forms::{d_poly, forms_table, FormSpace, SullivanForm};
use crate::linalg::{solve_columns, sparse_from, SparseVec};
use crate::simplicial::realization::{barycentric, pullback_images};
use crate::simplicial::{prism, Prism, SimplexRef, SimplicialSet};
use crate::superalg::{AlgebraMap, Monomial};
use crate::{Poly, Rational};

use super::{exactness_witness, homogeneous_degree, is_exact, HomologyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Notion {
    Cohomologous,
    Cochain,
    Algebraic,
    Simplicial,
}

impl Notion {
    pub const ALL: [Notion; 4] = [Notion::Cohomologous, Notion::Cochain, Notion::Algebraic, Notion::Simplicial];

    pub fn name(self) -> &'static str {
        match self {
            Notion::Cohomologous => "cohomologous",
            Notion::Cochain => "cochain",
            Notion::Algebraic => "algebraic",
            Notion::Simplicial => "simplicial",
        }
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Notion {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Notion::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| format!("unknown notion {s:?} (expected cohomologous, cochain, algebraic or simplicial)"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `α` with `dα = ω₀ − ω₁`.
    Primitive(SullivanForm),
    /// `α` together with the interpolating form on `X × 𝔸¹` built from it.
    Cochain { alpha: SullivanForm, form: SullivanForm },
    /// A closed form on `X × 𝔸¹`.
    Cylinder(SullivanForm),
    /// A closed form on the prism `X × Δ¹`.
    Prism(SullivanForm),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcordanceVerdict {
    pub notion: Notion,
    pub holds: bool,
    pub degree: usize,
    /// Polynomial degree bound used for the witness search.
    pub polydeg_bound: usize,
    pub witness: Option<Witness>,
}

fn polynomial_degree(a: &SullivanForm) -> usize {
    a.values().iter().flatten().flat_map(|p| p.terms().map(|(m, _)| m.even_degree() as usize)).max().unwrap_or(0)
}

/// `ω₁ t + ω₀ (1 − t) + (−1)ⁿ α dt` on `X × 𝔸¹`, where `n` is the degree of the `ωⱼ`.
///
/// The sign on the last term makes the form closed in odd degrees as well.
pub fn cochain_concordance_witness(
    w0: &SullivanForm,
    w1: &SullivanForm,
    alpha: &SullivanForm,
    degree: usize,
) -> Result<SullivanForm, HomologyError> {
    if alpha.differential() != w0.sub(w1)? {
        return Err(HomologyError::BadPrimitive);
    }
    let x = w0.space();
    let t = SullivanForm::interval_coordinate(x, false);
    let dt = SullivanForm::interval_coordinate(x, true);
    let one_minus_t = SullivanForm::one(x).to_cylinder().sub(&t)?;
    let mut a = alpha.to_cylinder().wedge(&dt)?;
    if degree % 2 == 1 {
        a = a.neg();
    }
    Ok(w1.to_cylinder().wedge(&t)?.add(&w0.to_cylinder().wedge(&one_minus_t)?)?.add(&a)?)
}

/// Transports a form on `X × 𝔸¹` to the prism along `x ↦ x∘η`, `t ↦ Σ_{y(i)=1} uᵢ`.
pub fn transport_to_prism(w: &SullivanForm, p: &Prism, prism_space: &Arc<SimplicialSet>) -> SullivanForm {
    assert!(w.is_cylinder(), "transport starts from a form on X × 𝔸¹");
    SullivanForm::from_fn(prism_space, false, |r, target| {
        let cell = p.cell(r);
        let k = r.dim;
        let m = cell.base.dim;
        let mut images = pullback_images(target, &cell.eta, m);
        let mut t_img = Poly::zero(target);
        for (i, &yi) in cell.y.iter().enumerate() {
            if yi == 1 {
                t_img = t_img + barycentric(target, k, i);
            }
        }
        let mut diffs: Vec<Poly> = images.iter().map(d_poly).collect();
        diffs.push(d_poly(&t_img));
        images.push(t_img);
        images.extend(diffs);
        let map = AlgebraMap::new(&forms_table(m, true), target, images).expect("prism transport");
        map.apply(w.value(cell.base))
    })
}

type FormMap<'a> = Box<dyn Fn(&SullivanForm) -> SullivanForm + 'a>;

/// Finds coefficients `c` with `Σ cᵢ L_k(Bᵢ) = T_k` for every `k`.
fn solve_affine(basis: &[SullivanForm], maps: &[FormMap<'_>], targets: &[SullivanForm]) -> Option<Vec<Rational>> {
    let mut keys: HashMap<(usize, SimplexRef, Monomial), usize> = HashMap::new();
    let mut vectorize = |k: usize, f: &SullivanForm| -> SparseVec<Rational> {
        let mut entries = Vec::new();
        for r in f.space().all_simplices() {
            for (m, c) in f.value(r).terms() {
                let next = keys.len();
                entries.push((*keys.entry((k, r, m.clone())).or_insert(next), c.clone()));
            }
        }
        sparse_from(entries)
    };
    let columns: Vec<SparseVec<Rational>> = basis
        .iter()
        .map(|b| sparse_from(maps.iter().enumerate().flat_map(|(k, l)| vectorize(k, &l(b)))))
        .collect();
    let rhs = sparse_from(targets.iter().enumerate().flat_map(|(k, t)| vectorize(k, t)));
    solve_columns(keys.len(), &columns, &rhs)
}

fn ends_match_cylinder(w: &SullivanForm, w0: &SullivanForm, w1: &SullivanForm) -> bool {
    w.is_cylinder()
        && w.check_compatibility().is_compatible()
        && w.is_closed()
        && w.at_endpoint(0) == *w0
        && w.at_endpoint(1) == *w1
}

fn ends_match_prism(w: &SullivanForm, p: &Prism, w0: &SullivanForm, w1: &SullivanForm) -> bool {
    let x = w0.space();
    **w.space() == p.space
        && w.check_compatibility().is_compatible()
        && w.is_closed()
        && w.pullback(&p.inclusions[0], x) == *w0
        && w.pullback(&p.inclusions[1], x) == *w1
}

fn common_degree(w0: &SullivanForm, w1: &SullivanForm) -> Result<usize, HomologyError> {
    if w0.space() != w1.space() {
        return Err(HomologyError::SpaceMismatch);
    }
    if !w0.is_closed() || !w1.is_closed() || w0.is_cylinder() || w1.is_cylinder() {
        return Err(HomologyError::NotClosed);
    }
    match (homogeneous_degree(w0)?, homogeneous_degree(w1)?) {
        (Some(a), Some(b)) if a != b => Err(HomologyError::DegreeMismatch { expected: a, found: b }),
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => Ok(0),
    }
}

/// Decides one notion of concordance and attaches a witness when it holds.
///
/// Witness searches use polynomial degree up to `polydeg_bound` (raised to the
/// degree of the inputs) for the primitive and one more for forms on
/// `X × 𝔸¹` and the prism.
pub fn concordance_check(
    notion: Notion,
    w0: &SullivanForm,
    w1: &SullivanForm,
    polydeg_bound: usize,
) -> Result<ConcordanceVerdict, HomologyError> {
    let n = common_degree(w0, w1)?;
    let bound = polydeg_bound.max(polynomial_degree(w0)).max(polynomial_degree(w1)) + 1;
    let diff = w0.sub(w1)?;
    let verdict = |holds: bool, witness: Option<Witness>, b: usize| ConcordanceVerdict {
        notion,
        holds,
        degree: n,
        polydeg_bound: b,
        witness,
    };
    match notion {
        Notion::Cohomologous => {
            let holds = is_exact(&diff)?;
            let witness = if holds { exactness_witness(&diff, bound)?.map(Witness::Primitive) } else { None };
            Ok(verdict(holds, witness, bound))
        }
        Notion::Cochain => match exactness_witness(&diff, bound)? {
            Some(alpha) => {
                let form = cochain_concordance_witness(w0, w1, &alpha, n)?;
                Ok(verdict(true, Some(Witness::Cochain { alpha, form }), bound))
            }
            None => Ok(verdict(false, None, bound)),
        },
        Notion::Algebraic => {
            let w = find_cylinder(w0, w1, n, bound + 1)?;
            Ok(verdict(w.is_some(), w.map(Witness::Cylinder), bound + 1))
        }
        Notion::Simplicial => {
            let p = prism(w0.space());
            let ps = Arc::new(p.space.clone());
            if let Some(w) = find_cylinder(w0, w1, n, bound + 1)? {
                let moved = transport_to_prism(&w, &p, &ps);
                if ends_match_prism(&moved, &p, w0, w1) {
                    return Ok(verdict(true, Some(Witness::Prism(moved)), bound + 1));
                }
            }
            let fs = FormSpace::new(&ps, n, bound + 1, false)?;
            let maps: Vec<FormMap<'_>> = vec![
                Box::new(|b| b.differential()),
                Box::new(|b| b.pullback(&p.inclusions[0], w0.space())),
                Box::new(|b| b.pullback(&p.inclusions[1], w0.space())),
            ];
            let targets = [SullivanForm::zero(&ps), w0.clone(), w1.clone()];
            let found = solve_affine(fs.basis(), &maps, &targets).map(|c| fs.combination(&c));
            let found = found.filter(|w| ends_match_prism(w, &p, w0, w1));
            Ok(verdict(found.is_some(), found.map(Witness::Prism), bound + 1))
        }
    }
}

/// A closed degree-`n` form on `X × 𝔸¹` with the given ends, by solving the linear conditions.
fn find_cylinder(
    w0: &SullivanForm,
    w1: &SullivanForm,
    n: usize,
    bound: usize,
) -> Result<Option<SullivanForm>, HomologyError> {
    let x = w0.space();
    let fs = FormSpace::new(x, n, bound, true)?;
    let maps: Vec<FormMap<'_>> =
        vec![Box::new(|b| b.differential()), Box::new(|b| b.at_endpoint(0)), Box::new(|b| b.at_endpoint(1))];
    let targets = [SullivanForm::zero(x).to_cylinder(), w0.clone(), w1.clone()];
    let found = solve_affine(fs.basis(), &maps, &targets).map(|c| fs.combination(&c));
    Ok(found.filter(|w| ends_match_cylinder(w, w0, w1)))
}

impl ConcordanceVerdict {
    /// Rechecks the attached witness from scratch. A positive cohomologous
    /// verdict without a witness is rechecked through integration.
    pub fn reverify(&self, w0: &SullivanForm, w1: &SullivanForm) -> bool {
        let Ok(diff) = w0.sub(w1) else { return false };
        match (&self.witness, self.holds) {
            (None, false) => true,
            (None, true) => self.notion == Notion::Cohomologous && is_exact(&diff).unwrap_or(false),
            (Some(_), false) => false,
            (Some(Witness::Primitive(a)), true) => a.check_compatibility().is_compatible() && a.differential() == diff,
            (Some(Witness::Cochain { alpha, form }), true) => {
                alpha.differential() == diff
                    && ends_match_cylinder(form, w0, w1)
                    && cochain_concordance_witness(w0, w1, alpha, self.degree).as_ref() == Ok(form)
            }
            (Some(Witness::Cylinder(w)), true) => ends_match_cylinder(w, w0, w1),
            (Some(Witness::Prism(w)), true) => ends_match_prism(w, &prism(w0.space()), w0, w1),
        }
    }
}

impl Witness {
    pub fn form(&self) -> &SullivanForm {
        match self {
            Witness::Primitive(a) => a,
            Witness::Cochain { form, .. } => form,
            Witness::Cylinder(w) | Witness::Prism(w) => w,
        }
    }
}

//! Actions of the superpoint monoids on `𝔸^{1|1}`, with functions `ℚ[y, eps]`.
//!
//! A candidate coaction is `y ↦ f0 + f1·delta·eps` and `eps ↦ g0·eps + g1·delta`
//! with `f0, f1, g0, g1` polynomials in `x, y`. It is an action of
//! `𝔸^{0|1} ⋊ 𝔸¹` (functions `ℚ[x, delta]`), of `𝔸^{0|1} ⋊ ℤ/2` (with
//! `x² = 1`) or of `𝔸^{0|1}` (with `x = 1`) when the coassociativity square and
//! the counit condition hold. The closed-form families are matched on dense
//! coefficient arrays; [`verify_action`] expands both sides symbolically.

mod dense;
mod search;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::superalg::{AlgebraError, AlgebraMap, Monomial, SuperPolynomial, Table, VariableTable};
use crate::Coefficient;

pub use dense::{enumerate_families, match_family, ActionFamily, DenseCandidate, FamilyKind};
pub use search::{exhaustive_search, for_each_action, search_fp, SearchReport, MAX_DEGREE, SUPPORTED_PRIMES};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("degree bound {0} is above the supported maximum of 3")]
    DegreeTooLarge(usize),
    #[error("field size {p} must exceed the degree bound {degree}")]
    FieldTooSmall { p: u32, degree: usize },
    #[error("unsupported prime {0} (supported: 3, 5, 7, 11, 13, 101, 1009)")]
    UnsupportedPrime(u32),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monoid {
    /// `𝔸^{0|1} ⋊ 𝔸¹`.
    Full,
    /// `𝔸^{0|1} ⋊ ℤ/2`.
    Z2,
    /// `𝔸^{0|1}`.
    Odd,
}

impl Monoid {
    pub const ALL: [Monoid; 3] = [Monoid::Full, Monoid::Z2, Monoid::Odd];

    pub fn name(self) -> &'static str {
        match self {
            Monoid::Full => "full",
            Monoid::Z2 => "z2",
            Monoid::Odd => "odd",
        }
    }

    /// Largest power of `x` in a normal form with `x`-degree bound `degree`.
    pub fn x_cap(self, degree: usize) -> usize {
        match self {
            Monoid::Full => degree,
            Monoid::Z2 => degree.min(1),
            Monoid::Odd => 0,
        }
    }
}

impl fmt::Display for Monoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Monoid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Monoid::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown monoid {s:?} (expected full, z2 or odd)"))
    }
}

/// `ℚ[x, y]`, where the four polynomials of a candidate live.
pub fn candidate_table() -> Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| VariableTable::new(["x", "y"], [""; 0]).expect("candidate table")).clone()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionCandidate<C: Coefficient> {
    pub f0: SuperPolynomial<C>,
    pub f1: SuperPolynomial<C>,
    pub g0: SuperPolynomial<C>,
    pub g1: SuperPolynomial<C>,
}

impl<C: Coefficient> ActionCandidate<C> {
    pub fn identity() -> Self {
        let t = candidate_table();
        ActionCandidate {
            f0: SuperPolynomial::even_var(&t, 1),
            f1: SuperPolynomial::zero(&t),
            g0: SuperPolynomial::one(&t),
            g1: SuperPolynomial::zero(&t),
        }
    }

    /// Parses `[f0, f1, g0, g1]` in the variables `x, y`.
    pub fn from_text(polys: [&str; 4]) -> Result<Self, AlgebraError> {
        let t = candidate_table();
        let p = |s: &str| SuperPolynomial::parse(&t, s);
        Ok(ActionCandidate { f0: p(polys[0])?, f1: p(polys[1])?, g0: p(polys[2])?, g1: p(polys[3])? })
    }

    pub fn polys(&self) -> [&SuperPolynomial<C>; 4] {
        [&self.f0, &self.f1, &self.g0, &self.g1]
    }

    /// Conjugates by `y ↦ y + c`: `f0(x, y − c) + c` and `p(x, y − c)` for the others.
    pub fn conjugate_by_shift(&self, c: &C) -> Self {
        let t = candidate_table();
        let shift = AlgebraMap::new(
            &t,
            &t,
            vec![
                SuperPolynomial::even_var(&t, 0),
                SuperPolynomial::even_var(&t, 1) - SuperPolynomial::constant(&t, c.clone()),
            ],
        )
        .expect("shift");
        ActionCandidate {
            f0: shift.apply(&self.f0) + SuperPolynomial::constant(&t, c.clone()),
            f1: shift.apply(&self.f1),
            g0: shift.apply(&self.g0),
            g1: shift.apply(&self.g1),
        }
    }
}

impl<C: Coefficient> fmt::Display for ActionCandidate<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "y ↦ {} + ({})*delta*eps, eps ↦ ({})*eps + ({})*delta",
            self.f0, self.f1, self.g0, self.g1
        )
    }
}

/// Differences between the two sides of each condition; all zero for an action.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActionReport {
    pub checked: usize,
    /// `(condition, difference)` pairs that are nonzero.
    pub discrepancies: Vec<(String, String)>,
}

impl ActionReport {
    pub fn passes(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn first_discrepancy(&self) -> Option<&(String, String)> {
        self.discrepancies.first()
    }
}

const CONDITIONS: [&str; 4] = ["coassociativity on y", "coassociativity on eps", "counit on y", "counit on eps"];

/// Expands both paths of the coassociativity square and the counit for the
/// four polynomials, which may live in any table whose first two even
/// variables are `x, y` (further even variables act as parameters).
pub(crate) fn action_conditions<C: Coefficient>(
    polys: [&SuperPolynomial<C>; 4],
    monoid: Monoid,
) -> [SuperPolynomial<C>; 4] {
    let src = polys[0].table().clone();
    let mut evens: Vec<String> = src.evens().to_vec();
    evens.extend(["x_1".to_string(), "x_2".to_string()]);
    let w = VariableTable::new(evens, ["eps", "delta", "delta_1", "delta_2"].map(String::from)).expect("work table");
    let v = |name: &str| SuperPolynomial::<C>::var(&w, name).expect("work variable");
    let embed = |p: &SuperPolynomial<C>| p.embed(&w).expect("candidate table embeds");
    let one = SuperPolynomial::<C>::one(&w);
    let (y, eps, delta) = (v("y"), v("eps"), v("delta"));
    let fy = embed(polys[0]) + embed(polys[1]) * delta.clone() * eps.clone();
    let fe = embed(polys[2]) * eps.clone() + embed(polys[3]) * delta.clone();

    let odd = monoid == Monoid::Odd;
    let pick = |full: SuperPolynomial<C>| if odd { one.clone() } else { full };
    let named = |pairs: Vec<(&str, SuperPolynomial<C>)>| AlgebraMap::from_named(&w, &w, &pairs).expect("work map");
    // 1 ⊗ m*: x ↦ x_1 x_2, delta ↦ delta_1 + x_1 delta_2
    let comultiply = named(vec![
        ("x", pick(v("x_1") * v("x_2"))),
        ("delta", v("delta_1") + pick(v("x_1")) * v("delta_2")),
    ]);
    // the coaction again, in the first copy
    let first = named(vec![("x", pick(v("x_1"))), ("delta", v("delta_1"))]);
    // μ* ⊗ 1: y, eps ↦ their images in the first copy; the old copy becomes the second
    let iterate = named(vec![
        ("y", first.apply(&fy)),
        ("eps", first.apply(&fe)),
        ("x", pick(v("x_2"))),
        ("delta", v("delta_2")),
    ]);
    let counit = named(vec![("x", one.clone()), ("delta", SuperPolynomial::zero(&w))]);
    let x_to_one = named(vec![("x", one.clone())]);
    let reduce = |p: SuperPolynomial<C>| match monoid {
        Monoid::Full => p,
        Monoid::Odd => x_to_one.apply(&p),
        Monoid::Z2 => {
            let xs: Vec<usize> = ["x", "x_1", "x_2"].iter().map(|n| w.lookup(n).expect("x copy").1).collect();
            p.map_monomials(&w, |m| {
                let mut evens = m.evens().to_vec();
                for &i in &xs {
                    evens[i] %= 2;
                }
                Some((false, Monomial::new(evens, m.odd_mask())))
            })
        }
    };
    [
        reduce(iterate.apply(&fy) - comultiply.apply(&fy)),
        reduce(iterate.apply(&fe) - comultiply.apply(&fe)),
        reduce(counit.apply(&fy) - y),
        reduce(counit.apply(&fe) - eps),
    ]
}

/// Checks the coaction square and the counit exactly and reports every failing condition.
pub fn verify_action<C: Coefficient>(c: &ActionCandidate<C>, monoid: Monoid) -> ActionReport {
    let diffs = action_conditions(c.polys(), monoid);
    let mut report = ActionReport { checked: 4, discrepancies: Vec::new() };
    for (name, d) in CONDITIONS.iter().zip(diffs) {
        if !d.is_zero() {
            let mut text = d.to_string();
            if text.chars().count() > 240 {
                text = text.chars().take(240).collect::<String>() + " ...";
            }
            report.discrepancies.push((name.to_string(), text));
        }
    }
    report
}

/// Outcome of testing `p(x₁x₂) = p(x₁)p(x₂)` for a polynomial in one variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaOutcome {
    NotMultiplicative,
    /// Multiplicative and equal to `xⁿ`.
    Monomial(u32),
    /// The zero polynomial is multiplicative; it is excluded by the unit condition `p(1) = 1`.
    Zero,
    /// Multiplicative but not a monomial, which cannot happen over a field.
    Counterexample,
}

/// Tests multiplicativity of `p ∈ C[x]` symbolically and, when it holds,
/// whether `p` is a monomial `xⁿ`.
pub fn monomial_lemma_check<C: Coefficient>(p: &SuperPolynomial<C>) -> LemmaOutcome {
    let t = p.table();
    assert!(t.n_even() == 1 && t.n_odd() == 0, "expects a polynomial in one even variable");
    let two = VariableTable::new(["x_1", "x_2"], [""; 0]).expect("two copies");
    let at = |img: SuperPolynomial<C>| AlgebraMap::new(t, &two, vec![img]).expect("copy").apply(p);
    let x1 = SuperPolynomial::even_var(&two, 0);
    let x2 = SuperPolynomial::even_var(&two, 1);
    let multiplicative = at(x1.clone() * x2.clone()) == at(x1) * at(x2);
    if !multiplicative {
        return LemmaOutcome::NotMultiplicative;
    }
    if p.is_zero() {
        return LemmaOutcome::Zero;
    }
    match p.terms().collect::<Vec<_>>().as_slice() {
        [(m, c)] if c.is_one() => LemmaOutcome::Monomial(m.evens()[0]),
        _ => LemmaOutcome::Counterexample,
    }
}

#[cfg(test)]
mod tests;

//! Geometries on the superpoint, field theories as coinvariant forms, and twists.
//!
//! A geometry is a submonoid of `End(𝔸^{0|1})`, seen through the quotient of
//! `ℚ[x, eps]` it induces. Field theories over `X` are the forms whose coaction
//! is trivial (or scaled by a twist) after passing to that quotient.

mod table1;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::coaction::{coaction_on_forms, end_bialgebra, end_table, EPS, X};
use crate::forms::SullivanForm;
use crate::superalg::Monomial;
use crate::{Poly, Rational};

pub use table1::{evaluate_at_form, table1_membership, y_table, Table1Params, Table1Row};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FieldTheoryError {
    #[error("row {row} belongs to the {expected} geometry, not {found}")]
    GeometryMismatch { row: String, expected: Geometry, found: Geometry },
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("missing parameter {0}")]
    MissingParameter(&'static str),
    #[error("candidate shape: {0}")]
    Candidate(String),
    #[error("forms live on different spaces")]
    SpaceMismatch,
}

/// Listed from the largest monoid to the trivial one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Geometry {
    Pretopological,
    Topological,
    Euclidean,
    OrientedEuclidean,
    FullyRigid,
}

impl Geometry {
    pub const ALL: [Geometry; 5] = [
        Geometry::Pretopological,
        Geometry::Topological,
        Geometry::Euclidean,
        Geometry::OrientedEuclidean,
        Geometry::FullyRigid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Pretopological => "pretopological",
            Geometry::Topological => "topological",
            Geometry::Euclidean => "euclidean",
            Geometry::OrientedEuclidean => "oriented_euclidean",
            Geometry::FullyRigid => "fully_rigid",
        }
    }

    pub fn monoid(self) -> &'static str {
        match self {
            Geometry::Pretopological => "A^{0|1} ⋊ A^1",
            Geometry::Topological => "A^{0|1} ⋊ G_m",
            Geometry::Euclidean => "A^{0|1} ⋊ Z/2",
            Geometry::OrientedEuclidean => "A^{0|1}",
            Geometry::FullyRigid => "1",
        }
    }

    /// Is `self` a submonoid of `other`?
    pub fn is_sub(self, other: Geometry) -> bool {
        self >= other
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Geometry {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.replace('-', "_");
        Geometry::ALL.into_iter().find(|g| g.name() == s).ok_or_else(|| {
            format!("unknown geometry {s:?} (expected pretopological, topological, euclidean, oriented_euclidean or fully_rigid)")
        })
    }
}

/// The structure on `Ω*(X)` that survives the geometry's quotient of the coaction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Grading {
    Natural,
    Integer,
    Mod2,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidualStructure {
    pub grading: Grading,
    pub differential: bool,
}

impl fmt::Display for ResidualStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = match self.grading {
            Grading::Natural => "N-grading",
            Grading::Integer => "Z-grading",
            Grading::Mod2 => "Z/2-grading",
            Grading::None => "",
        };
        match (g.is_empty(), self.differential) {
            (true, false) => f.write_str("no structure"),
            (true, true) => f.write_str("odd differential only"),
            (false, true) => write!(f, "{g} + odd differential"),
            (false, false) => f.write_str(g),
        }
    }
}

pub fn geometry_coaction(g: Geometry) -> ResidualStructure {
    let (grading, differential) = match g {
        Geometry::Pretopological => (Grading::Natural, true),
        Geometry::Topological => (Grading::Integer, true),
        Geometry::Euclidean => (Grading::Mod2, true),
        Geometry::OrientedEuclidean => (Grading::None, true),
        Geometry::FullyRigid => (Grading::None, false),
    };
    ResidualStructure { grading, differential }
}

/// The quotient `ℚ[x, eps] → 𝒪(𝕄)` for a geometry, as a normal form on
/// monomials: `x` is left alone, reduced with `x² = 1`, set to 1, and `eps`
/// is killed for the trivial monoid. The topological step inverts `x`, which
/// is injective on polynomials and so leaves normal forms unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeometryBialgebra {
    pub geometry: Geometry,
}

impl GeometryBialgebra {
    pub fn new(geometry: Geometry) -> Self {
        GeometryBialgebra { geometry }
    }

    fn reduce_key(&self, k: u32, eps: bool) -> Option<(u32, bool)> {
        match self.geometry {
            Geometry::Pretopological | Geometry::Topological => Some((k, eps)),
            Geometry::Euclidean => Some((k % 2, eps)),
            Geometry::OrientedEuclidean => Some((0, eps)),
            Geometry::FullyRigid => (!eps).then_some((0, false)),
        }
    }

    /// Normal form of a polynomial over any table whose even variables are all
    /// copies of `x` and odd ones copies of `eps`.
    pub fn reduce(&self, p: &Poly) -> Poly {
        let t = p.table();
        let kept = p.terms().filter(|(m, _)| self.geometry != Geometry::FullyRigid || m.odd_count() == 0);
        let terms: Vec<(Monomial, Rational)> = kept
            .map(|(m, c)| {
                let evens = m.evens().iter().map(|&e| self.reduce_key(e, false).expect("even key").0).collect();
                (Monomial::new(evens, m.odd_mask()), c.clone())
            })
            .collect();
        Poly::from_terms(t, terms)
    }

    /// The generators of the kernel of the quotient.
    pub fn ideal_generators(&self) -> Vec<Poly> {
        let t = end_table();
        let p = |s: &str| Poly::parse(&t, s).expect("ideal generator");
        match self.geometry {
            Geometry::Pretopological | Geometry::Topological => vec![],
            Geometry::Euclidean => vec![p("x^2 - 1")],
            Geometry::OrientedEuclidean => vec![p("x - 1")],
            Geometry::FullyRigid => vec![p("x - 1"), p(EPS)],
        }
    }

    /// The kernel is a bi-ideal: each generator reduces to zero, its coproduct
    /// reduces to zero in both factors and its counit vanishes.
    pub fn verify(&self) -> bool {
        let b = end_bialgebra();
        self.ideal_generators().iter().all(|g| {
            self.reduce(g).is_zero()
                && self.reduce(&b.comultiply(g)).is_zero()
                && b.counit.apply(g).is_zero()
        })
    }
}

/// Closed and concentrated in degree zero, closed of even degree, closed, or anything.
pub fn untwisted_membership(g: Geometry, a: &SullivanForm) -> bool {
    match g {
        Geometry::Pretopological | Geometry::Topological => a.is_closed() && a.is_homogeneous_of(0),
        Geometry::Euclidean => a.is_closed() && a.degrees().iter().all(|d| d % 2 == 0),
        Geometry::OrientedEuclidean => a.is_closed(),
        Geometry::FullyRigid => true,
    }
}

/// Degree-`n` twisted theories: closed forms of degree `n`, of degree `≡ n`
/// mod 2, closed forms of any degree, or all forms.
pub fn degree_twist_membership(g: Geometry, n: i64, a: &SullivanForm) -> bool {
    match g {
        Geometry::Pretopological | Geometry::Topological => {
            a.is_closed() && (a.is_zero() || (n >= 0 && a.is_homogeneous_of(n as usize)))
        }
        Geometry::Euclidean => a.is_closed() && a.degrees().iter().all(|&d| (d as i64 - n).rem_euclid(2) == 0),
        Geometry::OrientedEuclidean => a.is_closed(),
        Geometry::FullyRigid => true,
    }
}

/// `ρ = x^n`, read in the geometry's quotient.
pub fn degree_twist_representation(g: Geometry, n: i64) -> Option<Poly> {
    let t = end_table();
    let x = Poly::even_var(&t, 0);
    let rho = match g {
        Geometry::Pretopological | Geometry::Topological => {
            // x^n with n < 0 has no polynomial representative
            if n < 0 {
                return None;
            }
            x.pow(n as u32)
        }
        Geometry::Euclidean => x.pow(n.rem_euclid(2) as u32),
        Geometry::OrientedEuclidean | Geometry::FullyRigid => Poly::one(&t),
    };
    Some(rho)
}

/// `μ*(a) = a ρ` after reducing both sides to the geometry's quotient.
pub fn geometry_coinvariance(g: Geometry, rho: &Poly, a: &SullivanForm) -> bool {
    let q = GeometryBialgebra::new(g);
    let mut lhs: BTreeMap<(u32, bool), SullivanForm> = BTreeMap::new();
    let push = |map: &mut BTreeMap<(u32, bool), SullivanForm>, key: (u32, bool), f: SullivanForm| {
        if let Some(key) = q.reduce_key(key.0, key.1) {
            let entry = map.remove(&key);
            let sum = match entry {
                Some(prev) => prev.add(&f).expect("same space"),
                None => f,
            };
            map.insert(key, sum);
        }
    };
    for (key, f) in coaction_on_forms(a).terms {
        push(&mut lhs, key, f);
    }
    let mut rhs = BTreeMap::new();
    for (m, c) in rho.terms() {
        push(&mut rhs, (m.evens()[0], m.has_odd(0)), a.scale(c));
    }
    let strip = |m: BTreeMap<(u32, bool), SullivanForm>| -> BTreeMap<(u32, bool), SullivanForm> {
        m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    };
    strip(lhs) == strip(rhs)
}

/// The coaction formulation of degree twists. Negative degrees have no
/// polynomial representative; only the zero form is coinvariant for them.
pub fn degree_twist_coinvariance(g: Geometry, n: i64, a: &SullivanForm) -> bool {
    match degree_twist_representation(g, n) {
        Some(rho) => geometry_coinvariance(g, &rho, a),
        None => a.is_zero() || g == Geometry::FullyRigid,
    }
}

/// A degree twist, a tabulated polynomial row, or the differential twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistFamily {
    Degree(i64),
    Table1 { row: Table1Row, params: Table1Params },
    /// Pairs `(ω, dω)` with `ω` of degree `n − 1`.
    Differential(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSpec {
    pub geometry: Geometry,
    pub family: TwistFamily,
    /// Name of the invertible module `L`, taken free of rank one.
    pub module_label: String,
}

impl TwistSpec {
    pub fn degree(geometry: Geometry, n: i64) -> Self {
        TwistSpec { geometry, family: TwistFamily::Degree(n), module_label: "L".into() }
    }

    pub fn validate(&self) -> Result<(), FieldTheoryError> {
        match &self.family {
            TwistFamily::Table1 { row, params } => {
                if row.geometry() != self.geometry {
                    return Err(FieldTheoryError::GeometryMismatch {
                        row: row.id().into(),
                        expected: row.geometry(),
                        found: self.geometry,
                    });
                }
                row.check_params(params)
            }
            TwistFamily::Differential(n) if *n == 0 => {
                Err(FieldTheoryError::Constraint("the differential twist needs n ≥ 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Whether the family takes a pair `(ω, α)` rather than a single form.
    pub fn takes_pair(&self) -> bool {
        !matches!(self.family, TwistFamily::Degree(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Candidate {
    Single(SullivanForm),
    Pair(SullivanForm, SullivanForm),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTheoryQuery {
    pub twist: TwistSpec,
    pub candidate: Candidate,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MembershipReport {
    pub holds: bool,
    /// The conditions that failed, as equations.
    pub violations: Vec<String>,
}

impl MembershipReport {
    pub(crate) fn from_checks(checks: Vec<(bool, String)>) -> Self {
        let violations: Vec<String> = checks.into_iter().filter(|(ok, _)| !ok).map(|(_, s)| s).collect();
        MembershipReport { holds: violations.is_empty(), violations }
    }
}

impl FieldTheoryQuery {
    pub fn evaluate(&self) -> Result<MembershipReport, FieldTheoryError> {
        self.twist.validate()?;
        let g = self.twist.geometry;
        match (&self.twist.family, &self.candidate) {
            (TwistFamily::Degree(n), Candidate::Single(a)) => {
                let mut checks = Vec::new();
                if g != Geometry::FullyRigid {
                    checks.push((a.is_closed(), "da = 0".to_string()));
                }
                match g {
                    Geometry::Pretopological | Geometry::Topological => checks.push((
                        a.is_zero() || (*n >= 0 && a.is_homogeneous_of(*n as usize)),
                        format!("a ∈ Ω^{n}"),
                    )),
                    Geometry::Euclidean => checks.push((
                        a.degrees().iter().all(|&d| (d as i64 - n).rem_euclid(2) == 0),
                        format!("a ∈ Ω^(≡ {n} mod 2)"),
                    )),
                    _ => {}
                }
                Ok(MembershipReport::from_checks(checks))
            }
            (TwistFamily::Table1 { row, params }, Candidate::Pair(w, a)) => table1_membership(*row, params, w, a),
            (TwistFamily::Differential(n), Candidate::Pair(w, a)) => {
                if w.space() != a.space() {
                    return Err(FieldTheoryError::SpaceMismatch);
                }
                Ok(MembershipReport::from_checks(vec![
                    (w.is_homogeneous_of(n - 1), format!("ω ∈ Ω^{}", n - 1)),
                    (a.is_homogeneous_of(*n), format!("α ∈ Ω^{n}")),
                    (w.differential() == *a, "dω = α".into()),
                ]))
            }
            (_, Candidate::Single(_)) => Err(FieldTheoryError::Candidate("this twist takes a pair (ω, α)".into())),
            (_, Candidate::Pair(..)) => Err(FieldTheoryError::Candidate("a degree twist takes a single form".into())),
        }
    }
}

/// Bookkeeping for the `k`-th piece of the bordism monoid over `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BordismPiece {
    pub k: usize,
    pub description: String,
    /// Functions on the generator.
    pub generator_ring: String,
    /// Order of the symmetric group acting on the `k` copies.
    pub symmetric_order: u128,
}

pub fn bordism_generators(k: usize) -> BordismPiece {
    let description = match k {
        0 => "unit component (empty bordism)".to_string(),
        1 => "the generator Map(A^{0|1}, X)/M".to_string(),
        2 => "symmetric square of the generator".to_string(),
        k => format!("{k}-fold symmetric power of the generator"),
    };
    BordismPiece {
        k,
        description,
        generator_ring: if k == 0 { "Q".into() } else { "Ω*(X)".into() },
        symmetric_order: (1..=k as u128).product(),
    }
}

/// `x` in `ℚ[x, eps]`, exposed for building representations.
pub fn x_variable() -> Poly {
    Poly::var(&end_table(), X).expect("x")
}

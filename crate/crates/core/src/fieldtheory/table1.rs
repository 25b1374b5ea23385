//! The general form of twisted field theories for each geometry: pairs
//! `(ω, α)` of forms subject to a row's differential equations.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::Zero;

use crate::forms::SullivanForm;
use crate::superalg::{Table, VariableTable};
use crate::{Poly, Rational};

use super::{FieldTheoryError, Geometry, MembershipReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Table1Row {
    P1,
    P2,
    P3,
    T1,
    T2,
    T3,
    E1,
    E2,
    E3,
    E4,
    E5,
    O1,
    O2,
}

impl Table1Row {
    pub const ALL: [Table1Row; 13] = [
        Table1Row::P1,
        Table1Row::P2,
        Table1Row::P3,
        Table1Row::T1,
        Table1Row::T2,
        Table1Row::T3,
        Table1Row::E1,
        Table1Row::E2,
        Table1Row::E3,
        Table1Row::E4,
        Table1Row::E5,
        Table1Row::O1,
        Table1Row::O2,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Table1Row::P1 => "P1",
            Table1Row::P2 => "P2",
            Table1Row::P3 => "P3",
            Table1Row::T1 => "T1",
            Table1Row::T2 => "T2",
            Table1Row::T3 => "T3",
            Table1Row::E1 => "E1",
            Table1Row::E2 => "E2",
            Table1Row::E3 => "E3",
            Table1Row::E4 => "E4",
            Table1Row::E5 => "E5",
            Table1Row::O1 => "O1",
            Table1Row::O2 => "O2",
        }
    }

    pub fn geometry(self) -> Geometry {
        use Table1Row::*;
        match self {
            P1 | P2 | P3 => Geometry::Pretopological,
            T1 | T2 | T3 => Geometry::Topological,
            E1 | E2 | E3 | E4 | E5 => Geometry::Euclidean,
            O1 | O2 => Geometry::OrientedEuclidean,
        }
    }

    /// The row's equations, for reports.
    pub fn equations(self) -> &'static str {
        use Table1Row::*;
        match self {
            P1 | T1 => "ω ∈ Ω^k, α ∈ Ω^n, dω = 0, dα = 0",
            P2 | T2 => "ω ∈ Ω^k, α ∈ Ω^n, dω = a ω^m ∧ α, dα = 0, k+1 = n+mk",
            P3 | T3 => "ω ∈ Ω^k, α ∈ Ω^n, dα = a ω^m, dω = 0, n+1 = km",
            E1 => "ω ∈ Ω^(k mod 2), α ∈ Ω^(n mod 2), dω = 0, dα = 0",
            E2 => "ω ∈ Ω^ev, α ∈ Ω^odd, dω = f(ω) ∧ α, dα = a, af = 0",
            E3 => "ω ∈ Ω^odd, α ∈ Ω^ev, dω = f(ω) ∧ α, dα = 0, f ∈ Q[y²]",
            E4 => "ω ∈ Ω^ev, α ∈ Ω^odd, dω = 0, dα = f(ω)",
            E5 => "ω ∈ Ω^odd, α ∈ Ω^ev, dω = 0, dα = f(ω), f odd",
            O1 => "dω = 0, dα = g(ω)",
            O2 => "dω = f(ω), dα = a, af = 0",
        }
    }

    pub fn check_params(self, p: &Table1Params) -> Result<(), FieldTheoryError> {
        use Table1Row::*;
        let need = |v: Option<i64>, name: &'static str| v.ok_or(FieldTheoryError::MissingParameter(name));
        let natural = |v: i64, name: &str| {
            if v < 0 {
                Err(FieldTheoryError::Constraint(format!("{name} = {v} must be a natural number")))
            } else {
                Ok(())
            }
        };
        let fail = |s: String| Err(FieldTheoryError::Constraint(s));
        match self {
            P1 | T1 | E1 => {
                let (k, n) = (need(p.k, "k")?, need(p.n, "n")?);
                if self == P1 {
                    natural(k, "k")?;
                    natural(n, "n")?;
                }
            }
            P2 | T2 | P3 | T3 => {
                let (k, n, m) = (need(p.k, "k")?, need(p.n, "n")?, need(p.m, "m")?);
                natural(m, "m")?;
                if matches!(self, P2 | P3) {
                    natural(k, "k")?;
                    natural(n, "n")?;
                }
                if matches!(self, P2 | T2) && k + 1 != n + m * k {
                    return fail(format!("k+1 = n+mk fails for k={k}, n={n}, m={m}"));
                }
                if matches!(self, P3 | T3) && n + 1 != k * m {
                    return fail(format!("n+1 = km fails for k={k}, n={n}, m={m}"));
                }
            }
            E2 | O2 => {
                if !p.a.is_zero() && !p.poly().is_zero() {
                    return fail("af = 0 requires a = 0 or f = 0".into());
                }
            }
            E3 => {
                if p.poly().terms().any(|(m, _)| m.evens()[0] % 2 == 1) {
                    return fail("f must lie in Q[y²]".into());
                }
            }
            E5 => {
                if p.poly().terms().any(|(m, _)| m.evens()[0] % 2 == 0) {
                    return fail("f must be odd".into());
                }
            }
            E4 | O1 => {}
        }
        Ok(())
    }
}

impl fmt::Display for Table1Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Table1Row {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Table1Row::ALL
            .into_iter()
            .find(|r| r.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown twist row {s:?}"))
    }
}

/// `ℚ[y]`, where the polynomial parameters `f` and `g` live.
pub fn y_table() -> Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| VariableTable::new(["y"], [""; 0]).expect("y table")).clone()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Params {
    pub k: Option<i64>,
    pub n: Option<i64>,
    pub m: Option<i64>,
    pub a: Rational,
    /// `f`, or `g` for row O1, in `ℚ[y]`.
    pub f: Option<Poly>,
}

impl Default for Table1Params {
    fn default() -> Self {
        Table1Params { k: None, n: None, m: None, a: Rational::zero(), f: None }
    }
}

impl Table1Params {
    pub fn degrees(k: i64, n: i64) -> Self {
        Table1Params { k: Some(k), n: Some(n), ..Default::default() }
    }

    pub fn twisted(k: i64, n: i64, m: i64, a: Rational) -> Self {
        Table1Params { k: Some(k), n: Some(n), m: Some(m), a, f: None }
    }

    pub fn polynomial(f: Poly, a: Rational) -> Self {
        Table1Params { f: Some(f), a, ..Default::default() }
    }

    pub fn poly(&self) -> Poly {
        self.f.clone().unwrap_or_else(|| Poly::zero(&y_table()))
    }
}

/// `f(ω) = Σ cⱼ ωʲ` with wedge powers.
pub fn evaluate_at_form(f: &Poly, w: &SullivanForm) -> SullivanForm {
    let mut out = SullivanForm::zero(w.space());
    let mut power = SullivanForm::one(w.space());
    let top = f.terms().map(|(m, _)| m.evens()[0]).max().unwrap_or(0);
    for j in 0..=top {
        let c = f.terms().find(|(m, _)| m.evens()[0] == j).map(|(_, c)| c.clone());
        if let Some(c) = c {
            out = out.add(&power.scale(&c)).expect("same space");
        }
        power = power.wedge(w).expect("same space");
    }
    out
}

fn in_degree(a: &SullivanForm, k: i64) -> bool {
    a.is_zero() || (k >= 0 && a.is_homogeneous_of(k as usize))
}

fn in_parity(a: &SullivanForm, parity: i64) -> bool {
    a.degrees().iter().all(|&d| (d as i64 - parity).rem_euclid(2) == 0)
}

/// Checks the row's conditions on `(ω, α)` exactly, after validating the parameters.
pub fn table1_membership(
    row: Table1Row,
    params: &Table1Params,
    w: &SullivanForm,
    a: &SullivanForm,
) -> Result<MembershipReport, FieldTheoryError> {
    use Table1Row::*;
    row.check_params(params)?;
    if w.space() != a.space() {
        return Err(FieldTheoryError::SpaceMismatch);
    }
    let x = w.space();
    let dw = w.differential();
    let da = a.differential();
    let zero = SullivanForm::zero(x);
    let constant_a = SullivanForm::constant(x, params.a.clone());
    let f_of_w = evaluate_at_form(&params.poly(), w);
    let wedge = |p: &SullivanForm, q: &SullivanForm| p.wedge(q).expect("same space");
    let mut checks: Vec<(bool, String)> = Vec::new();
    let degrees = |checks: &mut Vec<(bool, String)>| {
        let (k, n) = (params.k.unwrap_or(0), params.n.unwrap_or(0));
        checks.push((in_degree(w, k), format!("ω ∈ Ω^{k}")));
        checks.push((in_degree(a, n), format!("α ∈ Ω^{n}")));
    };
    let parities = |checks: &mut Vec<(bool, String)>, pw: i64, pa: i64| {
        let name = |p: i64| if p == 0 { "ev" } else { "odd" };
        checks.push((in_parity(w, pw), format!("ω ∈ Ω^{}", name(pw))));
        checks.push((in_parity(a, pa), format!("α ∈ Ω^{}", name(pa))));
    };
    match row {
        P1 | T1 => {
            degrees(&mut checks);
            checks.push((dw.is_zero(), "dω = 0".into()));
            checks.push((da.is_zero(), "dα = 0".into()));
        }
        P2 | T2 => {
            degrees(&mut checks);
            let mut wm = SullivanForm::one(x);
            for _ in 0..params.m.unwrap_or(0) {
                wm = wedge(&wm, w);
            }
            let rhs = wedge(&wm, a).scale(&params.a);
            checks.push((dw == rhs, "dω = a ω^m ∧ α".into()));
            checks.push((da.is_zero(), "dα = 0".into()));
        }
        P3 | T3 => {
            degrees(&mut checks);
            let mut wm = SullivanForm::one(x);
            for _ in 0..params.m.unwrap_or(0) {
                wm = wedge(&wm, w);
            }
            checks.push((da == wm.scale(&params.a), "dα = a ω^m".into()));
            checks.push((dw.is_zero(), "dω = 0".into()));
        }
        E1 => {
            parities(&mut checks, params.k.unwrap_or(0).rem_euclid(2), params.n.unwrap_or(0).rem_euclid(2));
            checks.push((dw.is_zero(), "dω = 0".into()));
            checks.push((da.is_zero(), "dα = 0".into()));
        }
        E2 => {
            parities(&mut checks, 0, 1);
            checks.push((dw == wedge(&f_of_w, a), "dω = f(ω) ∧ α".into()));
            checks.push((da == constant_a, "dα = a".into()));
        }
        E3 => {
            parities(&mut checks, 1, 0);
            checks.push((dw == wedge(&f_of_w, a), "dω = f(ω) ∧ α".into()));
            checks.push((da == zero, "dα = 0".into()));
        }
        E4 | E5 => {
            if row == E4 {
                parities(&mut checks, 0, 1);
            } else {
                parities(&mut checks, 1, 0);
            }
            checks.push((dw.is_zero(), "dω = 0".into()));
            checks.push((da == f_of_w, "dα = f(ω)".into()));
        }
        O1 => {
            checks.push((dw.is_zero(), "dω = 0".into()));
            checks.push((da == f_of_w, "dα = g(ω)".into()));
        }
        O2 => {
            checks.push((dw == f_of_w, "dω = f(ω)".into()));
            checks.push((da == constant_a, "dα = a".into()));
        }
    }
    Ok(MembershipReport::from_checks(checks))
}

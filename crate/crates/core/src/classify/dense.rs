//! Dense coefficient arrays for candidates, and the closed-form families.

use std::fmt;

use crate::superalg::{Monomial, SuperPolynomial};
use crate::Coefficient;

use super::{candidate_table, ActionCandidate, Monoid};

/// Coefficients of `f0, f1, g0, g1` at `x^i y^j` for `i < nx`, `j < ny`,
/// flattened as `poly * nx * ny + i * ny + j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DenseCandidate<C> {
    pub nx: usize,
    pub ny: usize,
    pub coeffs: Vec<C>,
}

impl<C: Coefficient> DenseCandidate<C> {
    pub fn zero(nx: usize, ny: usize) -> Self {
        DenseCandidate { nx, ny, coeffs: vec![C::zero(); 4 * nx * ny] }
    }

    pub fn index(&self, poly: usize, i: usize, j: usize) -> usize {
        poly * self.nx * self.ny + i * self.ny + j
    }

    pub fn get(&self, poly: usize, i: usize, j: usize) -> &C {
        &self.coeffs[self.index(poly, i, j)]
    }

    fn set(&mut self, poly: usize, i: usize, j: usize, c: C) {
        let k = self.index(poly, i, j);
        self.coeffs[k] = c;
    }

    fn poly(&self, poly: usize) -> &[C] {
        let s = self.nx * self.ny;
        &self.coeffs[poly * s..(poly + 1) * s]
    }

    fn is_zero_poly(&self, poly: usize) -> bool {
        self.poly(poly).iter().all(|c| c.is_zero())
    }

    /// `None` when some exponent does not fit.
    pub fn from_candidate(c: &ActionCandidate<C>, nx: usize, ny: usize) -> Option<Self> {
        let mut d = Self::zero(nx, ny);
        for (p, poly) in c.polys().into_iter().enumerate() {
            for (m, v) in poly.terms() {
                let (i, j) = (m.evens()[0] as usize, m.evens()[1] as usize);
                if i >= nx || j >= ny {
                    return None;
                }
                d.set(p, i, j, v.clone());
            }
        }
        Some(d)
    }

    pub fn to_candidate(&self) -> ActionCandidate<C> {
        let t = candidate_table();
        let poly = |p: usize| {
            let mut terms = Vec::new();
            for i in 0..self.nx {
                for j in 0..self.ny {
                    terms.push((Monomial::new(vec![i as u32, j as u32], 0), self.get(p, i, j).clone()));
                }
            }
            SuperPolynomial::from_terms(&t, terms)
        };
        ActionCandidate { f0: poly(0), f1: poly(1), g0: poly(2), g1: poly(3) }
    }

    /// Substitutes `y ↦ y + c` in every polynomial and adds `delta` to `f0`.
    fn shifted(&self, c: &C, delta: &C) -> Self {
        let ny = self.ny;
        // binom[j][t] = C(j, t)
        let mut binom = vec![vec![C::zero(); ny]; ny];
        for j in 0..ny {
            binom[j][0] = C::one();
            for t in 1..=j {
                binom[j][t] = binom[j - 1][t - 1].clone() + if t < j { binom[j - 1][t].clone() } else { C::zero() };
            }
        }
        let mut out = Self::zero(self.nx, ny);
        for p in 0..4 {
            for i in 0..self.nx {
                for j in 0..ny {
                    let a = self.get(p, i, j);
                    if a.is_zero() {
                        continue;
                    }
                    // a (y + c)^j = Σ C(j,t) c^(j-t) y^t
                    for t in 0..=j {
                        let k = out.index(p, i, t);
                        let term = a.clone() * binom[j][t].clone() * c.pow((j - t) as u32);
                        out.coeffs[k] = out.coeffs[k].clone() + term;
                    }
                }
            }
        }
        let k = out.index(0, 0, 0);
        out.coeffs[k] = out.coeffs[k].clone() + delta.clone();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    /// `y ↦ x^k y`, `eps ↦ x^n eps`.
    Degree,
    /// Adds `f1 = x^k p(y)`, every `y^m` in `p` with `k+1 = n+mk`.
    FTwist,
    /// Adds `g1 = b x^n y^m` with `n+1 = km`.
    GTwist,
    /// `y ↦ y + f(y) delta eps`, `eps ↦ x eps + a x delta`, `af = 0`.
    Z2Row1,
    /// `y ↦ y`, `eps ↦ x eps + f(y) x delta`.
    Z2Row2,
    /// `y ↦ x y + f(y) x delta eps`, `eps ↦ eps`, `f` even.
    Z2Row3,
    /// `y ↦ x y`, `eps ↦ eps + f(y) delta`, `f` odd.
    Z2Row4,
    /// `y ↦ y + f(y) delta eps`, `eps ↦ eps + a delta`, `af = 0`.
    OddF,
    /// `y ↦ y`, `eps ↦ eps + g(y) delta`.
    OddG,
    /// `y ↦ x y + f(y) x delta eps`, `eps ↦ x eps`, `f` odd. Not tabulated.
    Z2OddOddF,
    /// `y ↦ x y`, `eps ↦ x eps + g(y) x delta`, `g` even. Not tabulated.
    Z2OddOddG,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Degree => "degree",
            FamilyKind::FTwist => "f-twist",
            FamilyKind::GTwist => "g-twist",
            FamilyKind::Z2Row1 => "z2-row1",
            FamilyKind::Z2Row2 => "z2-row2",
            FamilyKind::Z2Row3 => "z2-row3",
            FamilyKind::Z2Row4 => "z2-row4",
            FamilyKind::OddF => "odd-f",
            FamilyKind::OddG => "odd-g",
            FamilyKind::Z2OddOddF => "z2-k1n1-f",
            FamilyKind::Z2OddOddG => "z2-k1n1-g",
        }
    }

    /// Whether the kind is one of the tabulated families; the others were
    /// found by the search.
    pub fn tabulated(self) -> bool {
        !matches!(self, FamilyKind::Z2OddOddF | FamilyKind::Z2OddOddG)
    }

    pub fn monoid(self) -> Option<Monoid> {
        match self {
            FamilyKind::Degree => None,
            FamilyKind::FTwist | FamilyKind::GTwist => Some(Monoid::Full),
            FamilyKind::Z2Row1
            | FamilyKind::Z2Row2
            | FamilyKind::Z2Row3
            | FamilyKind::Z2Row4
            | FamilyKind::Z2OddOddF
            | FamilyKind::Z2OddOddG => Some(Monoid::Z2),
            FamilyKind::OddF | FamilyKind::OddG => Some(Monoid::Odd),
        }
    }
}

/// A member of a closed-form family, conjugated by `y ↦ y − shift` so that
/// `f0 = x^k y + shift·x^k − shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionFamily<C> {
    pub kind: FamilyKind,
    pub k: u32,
    pub n: u32,
    /// `a` in the rows with a constant coefficient on `delta`.
    pub a: C,
    /// `p`, `f` or `g` by row, as coefficients of `y^0, y^1, ...`; for
    /// `GTwist` a single term `b y^m`.
    pub poly: Vec<C>,
    pub shift: C,
}

fn is_zero_vec<C: Coefficient>(v: &[C]) -> bool {
    v.iter().all(|c| c.is_zero())
}

fn support<C: Coefficient>(v: &[C]) -> impl Iterator<Item = usize> + '_ {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(m, _)| m)
}

impl<C: Coefficient> ActionFamily<C> {
    pub fn new(kind: FamilyKind, k: u32, n: u32) -> Self {
        ActionFamily { kind, k, n, a: C::zero(), poly: Vec::new(), shift: C::zero() }
    }

    /// Trailing zero coefficients are dropped.
    pub fn with_poly(mut self, mut poly: Vec<C>) -> Self {
        while poly.last().is_some_and(|c| c.is_zero()) {
            poly.pop();
        }
        self.poly = poly;
        self
    }

    pub fn with_a(mut self, a: C) -> Self {
        self.a = a;
        self
    }

    pub fn with_shift(mut self, c: C) -> Self {
        self.shift = c;
        self
    }

    /// `(k, n, m)` for the twisted families with a single `m`.
    pub fn m(&self) -> Option<usize> {
        let ms: Vec<usize> = support(&self.poly).collect();
        match ms.as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    /// Family label used to tally search results.
    pub fn label(&self) -> String {
        let (k, n) = (self.k, self.n);
        match self.kind {
            FamilyKind::Degree => format!("degree k={k} n={n}"),
            FamilyKind::FTwist => match self.m() {
                Some(m) if k > 0 => format!("f-twist k={k} n={n} m={m}"),
                _ => format!("f-twist k={k} n={n}"),
            },
            FamilyKind::GTwist => format!("g-twist k={k} n={n} m={}", self.m().unwrap_or(0)),
            kind => kind.name().to_string(),
        }
    }

    /// The row's parameter constraints.
    pub fn is_admissible(&self, monoid: Monoid) -> bool {
        let (k, n) = (self.k as i64, self.n as i64);
        let fits = match monoid {
            Monoid::Full => true,
            Monoid::Z2 => k <= 1 && n <= 1,
            Monoid::Odd => k == 0 && n == 0,
        };
        let kind_ok = match self.kind.monoid() {
            None => true,
            Some(m) => m == monoid,
        };
        let shift_ok = k > 0 || self.shift.is_zero();
        let row_ok = match self.kind {
            FamilyKind::Degree => is_zero_vec(&self.poly) && self.a.is_zero(),
            FamilyKind::FTwist => !is_zero_vec(&self.poly) && support(&self.poly).all(|m| k + 1 == n + m as i64 * k),
            FamilyKind::GTwist => self.m().is_some_and(|m| n + 1 == k * m as i64),
            FamilyKind::Z2Row1 | FamilyKind::OddF => {
                (k, n) == if self.kind == FamilyKind::Z2Row1 { (0, 1) } else { (0, 0) }
                    && (self.a.is_zero() || is_zero_vec(&self.poly))
            }
            FamilyKind::Z2Row2 => (k, n) == (0, 1),
            FamilyKind::Z2Row3 => (k, n) == (1, 0) && support(&self.poly).all(|m| m % 2 == 0),
            FamilyKind::Z2Row4 => (k, n) == (1, 0) && support(&self.poly).all(|m| m % 2 == 1),
            FamilyKind::OddG => (k, n) == (0, 0),
            FamilyKind::Z2OddOddF => (k, n) == (1, 1) && support(&self.poly).all(|m| m % 2 == 1),
            FamilyKind::Z2OddOddG => (k, n) == (1, 1) && support(&self.poly).all(|m| m % 2 == 0),
        };
        fits && kind_ok && shift_ok && row_ok
    }

    /// The candidate, or `None` if it does not fit the array bounds.
    pub fn instantiate(&self, nx: usize, ny: usize) -> Option<DenseCandidate<C>> {
        let (k, n) = (self.k as usize, self.n as usize);
        let mut d = DenseCandidate::zero(nx, ny);
        if k >= nx || n >= nx || self.poly.len() > ny || ny < 2 {
            return None;
        }
        d.set(0, k, 1, C::one());
        d.set(2, n, 0, C::one());
        let mut put = |poly: usize, i: usize, p: &[C]| {
            for (j, c) in p.iter().enumerate() {
                d.set(poly, i, j, c.clone());
            }
        };
        match self.kind {
            FamilyKind::Degree => {}
            FamilyKind::FTwist => put(1, k, &self.poly),
            FamilyKind::GTwist => put(3, n, &self.poly),
            FamilyKind::Z2Row1 | FamilyKind::OddF => {
                put(1, 0, &self.poly);
                d.set(3, n, 0, self.a.clone());
            }
            FamilyKind::Z2Row2 | FamilyKind::Z2OddOddG => put(3, 1, &self.poly),
            FamilyKind::Z2Row3 | FamilyKind::Z2OddOddF => put(1, 1, &self.poly),
            FamilyKind::Z2Row4 | FamilyKind::OddG => put(3, 0, &self.poly),
        }
        // conjugate back: f0 ↦ f0(x, y + c) − c, others p(x, y + c)
        Some(d.shifted(&self.shift, &-self.shift.clone()))
    }
}

impl<C: Coefficient> fmt::Display for ActionFamily<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())?;
        if !self.poly.is_empty() {
            let terms: Vec<String> = support(&self.poly).map(|m| format!("{}*y^{m}", self.poly[m])).collect();
            write!(f, " poly={}", if terms.is_empty() { "0".into() } else { terms.join(" + ") })?;
        }
        if !self.a.is_zero() {
            write!(f, " a={}", self.a)?;
        }
        if !self.shift.is_zero() {
            write!(f, " shift={}", self.shift)?;
        }
        Ok(())
    }
}

/// `x^k` as a row of `x`-coefficients: the exponent if exactly one entry is 1 and the rest 0.
fn pure_power<C: Coefficient>(row: &[C]) -> Option<usize> {
    let mut found = None;
    for (i, c) in row.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !c.is_one() || found.is_some() {
            return None;
        }
        found = Some(i);
    }
    found
}

/// Identifies the family a dense candidate belongs to. The match is confirmed by
/// re-instantiating the family and comparing every coefficient.
pub fn match_family<C: Coefficient>(d: &DenseCandidate<C>, monoid: Monoid) -> Option<ActionFamily<C>> {
    let (nx, ny) = (d.nx, d.ny);
    if ny < 2 {
        return None;
    }
    // f0 = A(x) + x^k y with A = c x^k − c
    let col = |p: usize, j: usize| (0..nx).map(|i| d.get(p, i, j).clone()).collect::<Vec<C>>();
    if (2..ny).any(|j| !is_zero_vec(&col(0, j))) {
        return None;
    }
    let k = pure_power(&col(0, 1))?;
    let shift = if k == 0 { C::zero() } else { d.get(0, k, 0).clone() };
    let normal = d.shifted(&-shift.clone(), &shift);
    let g0_constant_in_y = (1..ny).all(|j| is_zero_vec(&col(2, j)));
    if !g0_constant_in_y {
        return None;
    }
    let n = pure_power(&(0..nx).map(|i| normal.get(2, i, 0).clone()).collect::<Vec<C>>())?;
    let row = |p: usize, i: usize| (0..ny).map(|j| normal.get(p, i, j).clone()).collect::<Vec<C>>();
    let only_row = |p: usize, i: usize| (0..nx).all(|r| r == i || is_zero_vec(&row(p, r)));
    let f1_zero = normal.is_zero_poly(1);
    let g1_zero = normal.is_zero_poly(3);
    let (k32, n32) = (k as u32, n as u32);
    let fam = |kind| ActionFamily::new(kind, k32, n32).with_shift(shift.clone());
    let family = match monoid {
        Monoid::Full => {
            if f1_zero && g1_zero {
                fam(FamilyKind::Degree)
            } else if g1_zero && only_row(1, k) {
                fam(FamilyKind::FTwist).with_poly(row(1, k))
            } else if f1_zero && only_row(3, n) {
                fam(FamilyKind::GTwist).with_poly(row(3, n))
            } else {
                return None;
            }
        }
        Monoid::Z2 => match (k, n) {
            _ if f1_zero && g1_zero => fam(FamilyKind::Degree),
            (0, 1) if !f1_zero => {
                fam(FamilyKind::Z2Row1).with_poly(row(1, 0)).with_a(normal.get(3, 1, 0).clone())
            }
            (0, 1) => fam(FamilyKind::Z2Row2).with_poly(row(3, 1)),
            (1, 0) if g1_zero => fam(FamilyKind::Z2Row3).with_poly(row(1, 1)),
            (1, 0) if f1_zero => fam(FamilyKind::Z2Row4).with_poly(row(3, 0)),
            (1, 1) if g1_zero => fam(FamilyKind::Z2OddOddF).with_poly(row(1, 1)),
            (1, 1) if f1_zero => fam(FamilyKind::Z2OddOddG).with_poly(row(3, 1)),
            _ => return None,
        },
        Monoid::Odd => {
            if f1_zero && g1_zero {
                fam(FamilyKind::Degree)
            } else if !f1_zero {
                fam(FamilyKind::OddF).with_poly(row(1, 0)).with_a(normal.get(3, 0, 0).clone())
            } else {
                fam(FamilyKind::OddG).with_poly(row(3, 0))
            }
        }
    };
    (family.is_admissible(monoid) && family.instantiate(nx, ny).as_ref() == Some(d)).then_some(family)
}

/// All family members with `k, n, m` and polynomial degrees up to `bound`,
/// scalars from `scalars` and shifts from `shifts` (applied where `k > 0`).
pub fn enumerate_families<C: Coefficient>(
    monoid: Monoid,
    bound: u32,
    scalars: &[C],
    shifts: &[C],
) -> Vec<ActionFamily<C>> {
    let nonzero: Vec<C> = scalars.iter().filter(|c| !c.is_zero()).cloned().collect();
    let b = bound as usize;
    // every polynomial of degree ≤ bound with coefficients from scalars ∪ {0}
    let mut polys: Vec<Vec<C>> = vec![Vec::new()];
    for _ in 0..=b {
        let mut next = Vec::new();
        for p in &polys {
            for c in std::iter::once(C::zero()).chain(nonzero.iter().cloned()) {
                let mut q = p.clone();
                q.push(c);
                next.push(q);
            }
        }
        polys = next;
    }
    let monomial = |m: usize, c: &C| {
        let mut v = vec![C::zero(); m + 1];
        v[m] = c.clone();
        v
    };
    let mut out = Vec::new();
    let kn_max = match monoid {
        Monoid::Full => bound,
        Monoid::Z2 => 1,
        Monoid::Odd => 0,
    };
    for k in 0..=kn_max {
        for n in 0..=kn_max {
            out.push(ActionFamily::new(FamilyKind::Degree, k, n));
        }
    }
    match monoid {
        Monoid::Full => {
            for k in 0..=bound {
                for n in 0..=bound {
                    for m in 0..=bound {
                        for c in &nonzero {
                            if k + 1 == n + m * k {
                                out.push(ActionFamily::new(FamilyKind::FTwist, k, n).with_poly(monomial(m as usize, c)));
                            }
                            if n + 1 == k * m {
                                out.push(ActionFamily::new(FamilyKind::GTwist, k, n).with_poly(monomial(m as usize, c)));
                            }
                        }
                    }
                }
            }
            // k = 0, n = 1 allows every m at once
            for p in polys.iter().filter(|p| support(p).count() > 1) {
                out.push(ActionFamily::new(FamilyKind::FTwist, 0, 1).with_poly(p.clone()));
            }
        }
        Monoid::Z2 => {
            for p in polys.iter().filter(|p| !is_zero_vec(p)) {
                out.push(ActionFamily::new(FamilyKind::Z2Row1, 0, 1).with_poly(p.clone()));
                out.push(ActionFamily::new(FamilyKind::Z2Row2, 0, 1).with_poly(p.clone()));
                if support(p).all(|m| m % 2 == 0) {
                    out.push(ActionFamily::new(FamilyKind::Z2Row3, 1, 0).with_poly(p.clone()));
                }
                if support(p).all(|m| m % 2 == 1) {
                    out.push(ActionFamily::new(FamilyKind::Z2Row4, 1, 0).with_poly(p.clone()));
                    out.push(ActionFamily::new(FamilyKind::Z2OddOddF, 1, 1).with_poly(p.clone()));
                } else if support(p).all(|m| m % 2 == 0) {
                    out.push(ActionFamily::new(FamilyKind::Z2OddOddG, 1, 1).with_poly(p.clone()));
                }
            }
        }
        Monoid::Odd => {
            for p in polys.iter().filter(|p| !is_zero_vec(p)) {
                out.push(ActionFamily::new(FamilyKind::OddF, 0, 0).with_poly(p.clone()));
                out.push(ActionFamily::new(FamilyKind::OddG, 0, 0).with_poly(p.clone()));
            }
        }
    }
    let mut shifted = Vec::new();
    for f in &out {
        if f.k > 0 {
            for c in shifts.iter().filter(|c| !c.is_zero()) {
                shifted.push(f.clone().with_shift(c.clone()));
            }
        }
    }
    out.extend(shifted);
    out
}

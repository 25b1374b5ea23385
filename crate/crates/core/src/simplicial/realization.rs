//! The cosimplicial algebra `[n] ↦ 𝒪(𝔸ⁿ) = ℚ[x₁..xₙ]`.
//!
//! Coordinates are the interior barycentric ones, with `x₀ = 1 − Σ xᵢ`. A
//! monotone map `f: [k] → [m]` pulls the barycentric coordinate `x_j` back to
//! the sum of the coordinates `u_i` over `f(i) = j`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::superalg::{AlgebraMap, SuperPolynomial, Table, VariableTable};
use crate::{Rational, RationalMap};

use super::SimplicialError;

/// `ℚ[x1..xn]`, shared per dimension.
pub fn coordinate_table(n: usize) -> Table {
    static CACHE: OnceLock<Mutex<HashMap<usize, Table>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    cache
        .lock()
        .expect("table cache")
        .entry(n)
        .or_insert_with(|| {
            VariableTable::new((1..=n).map(|i| format!("x{i}")), Vec::<String>::new()).expect("coordinate table")
        })
        .clone()
}

/// Barycentric coordinate `u_i` of `[k]` as a polynomial in `x1..xk` over `table`,
/// whose first `k` evens are the coordinates.
pub(crate) fn barycentric(table: &Table, k: usize, i: usize) -> SuperPolynomial<Rational> {
    if i > 0 {
        return SuperPolynomial::even_var(table, i - 1);
    }
    let mut u0 = SuperPolynomial::one(table);
    for j in 0..k {
        u0 = u0 - SuperPolynomial::even_var(table, j);
    }
    u0
}

/// Images of `x1..xm` under the pullback along monotone `f: [k] → [m]`.
pub(crate) fn pullback_images(table: &Table, f: &[usize], m: usize) -> Vec<SuperPolynomial<Rational>> {
    let k = f.len() - 1;
    (1..=m)
        .map(|j| {
            let mut img = SuperPolynomial::zero(table);
            for (i, &fi) in f.iter().enumerate() {
                if fi == j {
                    img = img + barycentric(table, k, i);
                }
            }
            img
        })
        .collect()
}

/// `f^*: 𝒪(𝔸^m) → 𝒪(𝔸^k)` for monotone `f: [k] → [m]` given by its values.
pub fn monotone_pullback(f: &[usize], m: usize) -> RationalMap {
    assert!(!f.is_empty() && f.windows(2).all(|w| w[0] <= w[1]) && f.iter().all(|&v| v <= m));
    let k = f.len() - 1;
    let target = coordinate_table(k);
    AlgebraMap::new(&coordinate_table(m), &target, pullback_images(&target, f, m)).expect("pullback")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CosimplicialKind {
    Coface,
    Codegeneracy,
}

/// The realization of a coface `δ^i: [n−1] → [n]` (as `𝒪(𝔸ⁿ) → 𝒪(𝔸ⁿ⁻¹)`) or a
/// codegeneracy `σ^i: [n+1] → [n]` (as `𝒪(𝔸ⁿ) → 𝒪(𝔸ⁿ⁺¹)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosimplicialMap {
    pub kind: CosimplicialKind,
    pub index: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub map: RationalMap,
}

impl CosimplicialKind {
    /// Values of the underlying monotone map.
    pub fn monotone(self, i: usize, n: usize) -> Vec<usize> {
        match self {
            CosimplicialKind::Coface => (0..n).map(|t| if t < i { t } else { t + 1 }).collect(),
            CosimplicialKind::Codegeneracy => (0..=n + 1).map(|t| if t <= i { t } else { t - 1 }).collect(),
        }
    }
}

pub fn realization_map(kind: CosimplicialKind, i: usize, n: usize) -> Result<CosimplicialMap, SimplicialError> {
    let ok = match kind {
        CosimplicialKind::Coface => n >= 1 && i <= n,
        CosimplicialKind::Codegeneracy => i <= n,
    };
    if !ok {
        return Err(SimplicialError::IndexOutOfRange { index: i, dim: n });
    }
    let f = kind.monotone(i, n);
    let target_dim = f.len() - 1;
    Ok(CosimplicialMap { kind, index: i, source_dim: n, target_dim, map: monotone_pullback(&f, n) })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RealizationReport {
    pub identities_checked: usize,
    pub violations: Vec<String>,
}

impl RealizationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A generator of Δ written as the map it realizes, applied in list order.
#[derive(Clone, Copy, Debug)]
enum Gen {
    /// `δ^i: [n−1] → [n]`
    D(usize, usize),
    /// `σ^i: [n+1] → [n]`
    S(usize, usize),
}

impl Gen {
    fn realize(self) -> RationalMap {
        match self {
            Gen::D(i, n) => realization_map(CosimplicialKind::Coface, i, n).expect("coface").map,
            Gen::S(i, n) => realization_map(CosimplicialKind::Codegeneracy, i, n).expect("codegeneracy").map,
        }
    }

    fn name(self) -> String {
        match self {
            Gen::D(i, n) => format!("δ{i}[{n}]"),
            Gen::S(i, n) => format!("σ{i}[{n}]"),
        }
    }
}

/// Realizes `g_last ∘ ... ∘ g_first`; contravariance reverses the order.
fn realize_chain(chain: &[Gen]) -> RationalMap {
    let mut acc = chain.last().expect("nonempty").realize();
    for g in chain.iter().rev().skip(1) {
        acc = g.realize().compose(&acc).expect("composable");
    }
    acc
}

/// Checks every cosimplicial identity whose objects have dimension at most `n_max`.
pub fn validate_realization(n_max: usize) -> RealizationReport {
    let mut report = RealizationReport::default();
    let mut check = |lhs: Vec<Gen>, rhs: Option<Vec<Gen>>, dim: usize| {
        report.identities_checked += 1;
        let l = realize_chain(&lhs);
        let r = match &rhs {
            Some(chain) => realize_chain(chain),
            None => AlgebraMap::identity(&coordinate_table(dim)),
        };
        if l != r {
            let show = |c: &[Gen]| c.iter().map(|g| g.name()).collect::<Vec<_>>().join(" then ");
            report.violations.push(format!(
                "{} != {}",
                show(&lhs),
                rhs.as_deref().map_or("identity".to_string(), show)
            ));
        }
    };
    // δ^j δ^i = δ^i δ^{j−1} for i < j, as maps [n−1] → [n+1].
    for n in 1..n_max {
        for j in 1..=n + 1 {
            for i in 0..j {
                check(vec![Gen::D(i, n), Gen::D(j, n + 1)], Some(vec![Gen::D(j - 1, n), Gen::D(i, n + 1)]), 0);
            }
        }
    }
    // σ^j σ^i = σ^i σ^{j+1} for i ≤ j, as maps [n+2] → [n].
    for n in 0..n_max.saturating_sub(1) {
        for j in 0..=n {
            for i in 0..=j {
                check(vec![Gen::S(i, n + 1), Gen::S(j, n)], Some(vec![Gen::S(j + 1, n + 1), Gen::S(i, n)]), 0);
            }
        }
    }
    // σ^j δ^i, as maps [n] → [n] through [n+1].
    for n in 0..n_max {
        for j in 0..=n {
            for i in 0..=n + 1 {
                let lhs = vec![Gen::D(i, n + 1), Gen::S(j, n)];
                if i < j {
                    check(lhs, Some(vec![Gen::S(j - 1, n - 1), Gen::D(i, n)]), n);
                } else if i == j || i == j + 1 {
                    check(lhs, None, n);
                } else {
                    check(lhs, Some(vec![Gen::S(j, n - 1), Gen::D(i - 1, n)]), n);
                }
            }
        }
    }
    report
}

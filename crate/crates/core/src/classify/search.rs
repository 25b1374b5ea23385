//! Bounded exhaustive search for actions.
//!
//! The coefficients of `f0, f1, g0, g1` become unknowns `u_i`; expanding the
//! action conditions with the unknowns as extra even variables gives a system
//! of polynomial equations in the `u_i`. The system is solved exactly over a
//! finite domain by propagation (single-variable filtering and elimination of
//! variables that occur linearly) and branching. Every solution is matched
//! against the closed-form families.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::superalg::{Monomial, SuperPolynomial, VariableTable};
use crate::{Coefficient, Fp};

use super::dense::{match_family, DenseCandidate};
use super::{action_conditions, ClassifyError, Monoid};

pub const SUPPORTED_PRIMES: [u32; 7] = [3, 5, 7, 11, 13, 101, 1009];
pub const MAX_DEGREE: usize = 3;
/// Unmatched solutions kept verbatim in a report; all of them are counted.
const UNMATCHED_KEPT: usize = 50;

/// Product of unknowns `(index, exponent)`, sorted by index.
type Mono = Vec<(u16, u8)>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Eqn<C> {
    terms: BTreeMap<Mono, C>,
}

impl<C: Coefficient> Eqn<C> {
    fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Eqn { terms }
    }

    fn add_term(&mut self, m: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Eqn { terms: BTreeMap::new() };
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(mono_mul(a, b), ca.clone() * cb.clone());
            }
        }
        out
    }

    fn vars(&self) -> Vec<u16> {
        let mut v: Vec<u16> = self.terms.keys().flat_map(|m| m.iter().map(|&(i, _)| i)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    fn substitute_value(&self, v: u16, val: &C) -> Self {
        let mut out = Eqn { terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            match m.iter().position(|&(i, _)| i == v) {
                None => out.add_term(m.clone(), c.clone()),
                Some(p) => {
                    let mut rest = m.clone();
                    let (_, e) = rest.remove(p);
                    out.add_term(rest, c.clone() * val.pow(e as u32));
                }
            }
        }
        out
    }

    fn substitute_poly(&self, v: u16, r: &Self) -> Self {
        let mut powers = vec![Eqn::constant(C::one())];
        let mut out = Eqn { terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            match m.iter().position(|&(i, _)| i == v) {
                None => out.add_term(m.clone(), c.clone()),
                Some(p) => {
                    let mut rest = m.clone();
                    let (_, e) = rest.remove(p);
                    while powers.len() <= e as usize {
                        let next = powers.last().expect("nonempty").mul(r);
                        powers.push(next);
                    }
                    for (rm, rc) in &powers[e as usize].terms {
                        out.add_term(mono_mul(&rest, rm), c.clone() * rc.clone());
                    }
                }
            }
        }
        out
    }

    /// `(c, R)` with the equation equal to `c·v + R` and `v` absent from `R`.
    fn linear_in(&self, v: u16) -> Option<(C, Self)> {
        let mut coeff = None;
        let mut rest = Eqn { terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            if m.iter().any(|&(i, _)| i == v) {
                if m.as_slice() != [(v, 1)] {
                    return None;
                }
                coeff = Some(c.clone());
            } else {
                rest.terms.insert(m.clone(), c.clone());
            }
        }
        coeff.map(|c| (c, rest))
    }

    /// Evaluates with every unknown present in `values`.
    fn eval(&self, values: &[Option<C>]) -> C {
        let mut s = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(i, e) in m {
                t = t * values[i as usize].clone().expect("assigned").pow(e as u32);
            }
            s = s + t;
        }
        s
    }

    fn eval_single(&self, val: &C) -> C {
        let mut s = C::zero();
        for (m, c) in &self.terms {
            let e: u32 = m.iter().map(|&(_, e)| e as u32).sum();
            s = s + c.clone() * val.pow(e);
        }
        s
    }
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// The polynomial system for candidates of the given shape.
fn build_system<C: Coefficient>(monoid: Monoid, nx: usize, ny: usize) -> Vec<Eqn<C>> {
    let n_unknowns = 4 * nx * ny;
    let mut evens = vec!["x".to_string(), "y".to_string()];
    evens.extend((0..n_unknowns).map(|i| format!("u{i}")));
    let t = VariableTable::new(evens, Vec::<String>::new()).expect("unknowns table");
    let generic = |p: usize| {
        let terms = (0..nx).flat_map(|i| (0..ny).map(move |j| (i, j))).map(|(i, j)| {
            let mut e = vec![0u32; 2 + n_unknowns];
            e[0] = i as u32;
            e[1] = j as u32;
            e[2 + p * nx * ny + i * ny + j] = 1;
            (Monomial::new(e, 0), C::one())
        });
        SuperPolynomial::from_terms(&t, terms)
    };
    let polys = [generic(0), generic(1), generic(2), generic(3)];
    let diffs = action_conditions([&polys[0], &polys[1], &polys[2], &polys[3]], monoid);
    let mut grouped: BTreeMap<(usize, Vec<u32>, u64), Eqn<C>> = BTreeMap::new();
    for (cond, d) in diffs.iter().enumerate() {
        for (m, c) in d.terms() {
            let e = m.evens();
            let mut key: Vec<u32> = e[..2].to_vec();
            key.extend_from_slice(&e[2 + n_unknowns..]);
            let mono: Mono = (0..n_unknowns)
                .filter(|&i| e[2 + i] > 0)
                .map(|i| (i as u16, e[2 + i] as u8))
                .collect();
            grouped
                .entry((cond, key, m.odd_mask()))
                .or_insert_with(|| Eqn { terms: BTreeMap::new() })
                .add_term(mono, c.clone());
        }
    }
    grouped.into_values().filter(|e| !e.is_zero()).collect()
}

#[derive(Clone)]
struct State<C> {
    values: Vec<Option<C>>,
    domains: Vec<Arc<Vec<C>>>,
    /// Domains smaller than the field; eliminated values are checked against these.
    narrowed: Vec<bool>,
    /// `v = R` for eliminated unknowns, in elimination order.
    defs: Vec<(u16, Eqn<C>)>,
    eliminated: Vec<bool>,
    eqs: Vec<Eqn<C>>,
}

impl<C: Coefficient> State<C> {
    fn assign(&mut self, v: u16, val: C) {
        self.eqs = self.eqs.iter().map(|e| e.substitute_value(v, &val)).collect();
        self.values[v as usize] = Some(val);
    }

    /// Runs propagation to a fixpoint; `false` on contradiction.
    fn propagate(&mut self) -> bool {
        loop {
            self.eqs.retain(|e| !e.is_zero());
            if self.eqs.iter().any(|e| e.is_constant()) {
                return false;
            }
            // single-variable equations restrict the domain
            let single = self.eqs.iter().position(|e| e.vars().len() == 1);
            if let Some(p) = single {
                let eq = self.eqs.swap_remove(p);
                let v = eq.vars()[0];
                let kept: Vec<C> =
                    self.domains[v as usize].iter().filter(|c| eq.eval_single(c).is_zero()).cloned().collect();
                match kept.len() {
                    0 => return false,
                    1 => self.assign(v, kept[0].clone()),
                    _ => {
                        self.domains[v as usize] = Arc::new(kept);
                        self.narrowed[v as usize] = true;
                    }
                }
                continue;
            }
            // eliminate an unknown that occurs linearly with a constant coefficient
            let mut best: Option<(usize, usize, u16)> = None;
            for (p, e) in self.eqs.iter().enumerate() {
                if best.is_some_and(|(_, len, _)| len <= e.terms.len()) {
                    continue;
                }
                let pick = e.vars().into_iter().find(|&v| e.linear_in(v).is_some());
                if let Some(v) = pick {
                    best = Some((p, e.terms.len(), v));
                }
            }
            let Some((p, _, v)) = best else { return true };
            let eq = self.eqs.swap_remove(p);
            let (c, rest) = eq.linear_in(v).expect("linear");
            let inv = -c.inverse().expect("nonzero coefficient");
            let mut def = Eqn { terms: BTreeMap::new() };
            for (m, rc) in rest.terms {
                def.add_term(m, rc * inv.clone());
            }
            self.eqs = self.eqs.iter().map(|e| e.substitute_poly(v, &def)).collect();
            self.eliminated[v as usize] = true;
            self.defs.push((v, def));
        }
    }

    fn branch_var(&self) -> Option<u16> {
        let eq = self.eqs.iter().min_by_key(|e| e.vars().len())?;
        eq.vars().into_iter().min_by_key(|&v| (self.domains[v as usize].len(), v))
    }

    /// Enumerates the remaining free unknowns once no equations are left.
    fn leaves(&self, emit: &mut dyn FnMut(&[C])) {
        let free: Vec<usize> =
            (0..self.values.len()).filter(|&i| self.values[i].is_none() && !self.eliminated[i]).collect();
        let mut values = self.values.clone();
        let mut idx = vec![0usize; free.len()];
        let out_len = self.values.len();
        let mut coeffs: Vec<C> = vec![C::zero(); out_len];
        'outer: loop {
            for (k, &v) in free.iter().enumerate() {
                values[v] = Some(self.domains[v][idx[k]].clone());
            }
            let mut ok = true;
            for (v, def) in self.defs.iter().rev() {
                let val = def.eval(&values);
                if self.narrowed[*v as usize] && !self.domains[*v as usize].contains(&val) {
                    ok = false;
                    break;
                }
                values[*v as usize] = Some(val);
            }
            if ok {
                for (c, v) in coeffs.iter_mut().zip(&values) {
                    *c = v.clone().expect("assigned");
                }
                emit(&coeffs);
            }
            for k in 0..free.len() {
                idx[k] += 1;
                if idx[k] < self.domains[free[k]].len() {
                    continue 'outer;
                }
                idx[k] = 0;
            }
            break;
        }
    }

    fn solve(mut self, emit: &mut dyn FnMut(&[C])) {
        if !self.propagate() {
            return;
        }
        match self.branch_var() {
            None => self.leaves(emit),
            Some(v) => {
                for val in self.domains[v as usize].iter() {
                    let mut next = self.clone();
                    next.assign(v, val.clone());
                    next.solve(emit);
                }
            }
        }
    }
}

fn initial_state<C: Coefficient>(
    monoid: Monoid,
    degree: usize,
    domain: &[C],
    whole_domain: bool,
) -> (State<C>, usize, usize) {
    let (nx, ny) = (monoid.x_cap(degree) + 1, degree + 1);
    let n = 4 * nx * ny;
    let domain = Arc::new(domain.to_vec());
    let state = State {
        values: vec![None; n],
        domains: vec![domain; n],
        narrowed: vec![!whole_domain; n],
        defs: Vec::new(),
        eliminated: vec![false; n],
        eqs: build_system(monoid, nx, ny),
    };
    (state, nx, ny)
}

fn check_degree(degree: usize) -> Result<(), ClassifyError> {
    if degree > MAX_DEGREE {
        return Err(ClassifyError::DegreeTooLarge(degree));
    }
    Ok(())
}

/// Calls `f` on every action whose coefficients all lie in `domain`, with `x`
/// and `y` degrees at most `degree` (the `x` degree is further capped by the
/// monoid's relations). `whole_domain` says `domain` is the entire field.
pub fn for_each_action<C: Coefficient>(
    monoid: Monoid,
    degree: usize,
    domain: &[C],
    whole_domain: bool,
    mut f: impl FnMut(DenseCandidate<C>),
) -> Result<(), ClassifyError> {
    check_degree(degree)?;
    let (state, nx, ny) = initial_state(monoid, degree, domain, whole_domain);
    state.solve(&mut |c: &[C]| f(DenseCandidate { nx, ny, coeffs: c.to_vec() }));
    Ok(())
}

/// Tally of a search: every solution is assigned a family label or kept as an outlier.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchReport {
    pub monoid: String,
    pub degree: usize,
    pub field: String,
    pub solutions: usize,
    pub families: BTreeMap<String, usize>,
    /// Counts for the kinds outside the tabulated families.
    pub untabulated: BTreeMap<String, usize>,
    /// One instance per family label, rendered.
    pub examples: BTreeMap<String, String>,
    /// Solutions matching no family at all.
    pub unmatched_count: usize,
    /// The first unmatched solutions, rendered.
    pub unmatched: Vec<String>,
    /// Solutions with both `f1` and `g1` nonzero.
    pub both_nonzero: usize,
}

impl SearchReport {
    /// Every solution is in a tabulated family, and never both twists.
    pub fn complete(&self) -> bool {
        self.untabulated.is_empty() && self.explained()
    }

    /// Every solution is in some family, tabulated or not.
    pub fn explained(&self) -> bool {
        self.unmatched_count == 0 && self.both_nonzero == 0
    }

    /// Solutions outside the tabulated families.
    pub fn outside_count(&self) -> usize {
        self.unmatched_count + self.untabulated.values().sum::<usize>()
    }

    fn record<C: Coefficient>(&mut self, d: &DenseCandidate<C>, monoid: Monoid) {
        self.solutions += 1;
        let s = d.nx * d.ny;
        let nonzero = |p: usize| d.coeffs[p * s..(p + 1) * s].iter().any(|c| !c.is_zero());
        if nonzero(1) && nonzero(3) {
            self.both_nonzero += 1;
        }
        match match_family(d, monoid) {
            Some(fam) => {
                let label = fam.label();
                if !self.examples.contains_key(&label) {
                    self.examples.insert(label.clone(), d.to_candidate().to_string());
                }
                let tally = if fam.kind.tabulated() { &mut self.families } else { &mut self.untabulated };
                *tally.entry(label).or_default() += 1;
            }
            None => {
                self.unmatched_count += 1;
                if self.unmatched.len() < UNMATCHED_KEPT {
                    self.unmatched.push(d.to_candidate().to_string());
                }
            }
        }
    }

    fn merge(&mut self, other: SearchReport) {
        self.solutions += other.solutions;
        self.both_nonzero += other.both_nonzero;
        for (k, v) in other.families {
            *self.families.entry(k).or_default() += v;
        }
        for (k, v) in other.untabulated {
            *self.untabulated.entry(k).or_default() += v;
        }
        for (k, v) in other.examples {
            self.examples.entry(k).or_insert(v);
        }
        self.unmatched_count += other.unmatched_count;
        let room = UNMATCHED_KEPT.saturating_sub(self.unmatched.len());
        self.unmatched.extend(other.unmatched.into_iter().take(room));
    }
}

fn run_search<C: Coefficient>(
    monoid: Monoid,
    degree: usize,
    domain: &[C],
    whole_domain: bool,
    field: String,
) -> Result<SearchReport, ClassifyError> {
    check_degree(degree)?;
    let empty = SearchReport { monoid: monoid.name().into(), degree, field, ..Default::default() };
    let (mut state, _, _) = initial_state(monoid, degree, domain, whole_domain);
    if !state.propagate() {
        return Ok(empty);
    }
    let Some(v) = state.branch_var() else {
        let mut report = empty;
        state.leaves(&mut |c: &[C]| {
            report.record(&DenseCandidate { nx: monoid.x_cap(degree) + 1, ny: degree + 1, coeffs: c.to_vec() }, monoid)
        });
        return Ok(report);
    };
    let (nx, ny) = (monoid.x_cap(degree) + 1, degree + 1);
    // split on the first branching unknown; the ordered collect keeps the merge deterministic
    let parts: Vec<SearchReport> = state.domains[v as usize]
        .par_iter()
        .map(|val| {
            let mut part = SearchReport::default();
            let mut next = state.clone();
            next.assign(v, val.clone());
            next.solve(&mut |c: &[C]| {
                part.record(&DenseCandidate { nx, ny, coeffs: c.to_vec() }, monoid)
            });
            part
        })
        .collect();
    let mut report = empty;
    for p in parts {
        report.merge(p);
    }
    Ok(report)
}

/// Search with coefficients restricted to `domain`, e.g. the integer grid `{−1, 0, 1}` over `ℚ`.
pub fn exhaustive_search<C: Coefficient>(
    monoid: Monoid,
    degree: usize,
    domain: &[C],
) -> Result<SearchReport, ClassifyError> {
    let label = format!("{{{}}}", domain.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
    run_search(monoid, degree, domain, false, label)
}

fn search_prime<const P: u32>(monoid: Monoid, degree: usize) -> Result<SearchReport, ClassifyError> {
    let field: Vec<Fp<P>> = Fp::<P>::elements().collect();
    run_search(monoid, degree, &field, true, format!("F_{P}"))
}

/// Search over the whole prime field `F_p`, which must have `p > degree`.
pub fn search_fp(monoid: Monoid, degree: usize, p: u32) -> Result<SearchReport, ClassifyError> {
    check_degree(degree)?;
    if (p as usize) <= degree {
        return Err(ClassifyError::FieldTooSmall { p, degree });
    }
    match p {
        3 => search_prime::<3>(monoid, degree),
        5 => search_prime::<5>(monoid, degree),
        7 => search_prime::<7>(monoid, degree),
        11 => search_prime::<11>(monoid, degree),
        13 => search_prime::<13>(monoid, degree),
        101 => search_prime::<101>(monoid, degree),
        1009 => search_prime::<1009>(monoid, degree),
        _ => Err(ClassifyError::UnsupportedPrime(p)),
    }
}

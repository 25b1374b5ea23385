//! Exact sparse linear algebra over a field: incremental reduced row echelon
//! form, kernels, and solving linear systems.

use std::collections::BTreeMap;

use crate::scalar::Coefficient;

/// A sparse vector as sorted `(index, nonzero value)` pairs.
pub type SparseVec<C> = Vec<(usize, C)>;

/// `a - s*b`, both sorted.
pub fn sub_scaled<C: Coefficient>(a: &[(usize, C)], b: &[(usize, C)], s: &C) -> SparseVec<C> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(s.clone() * b[j].1.clone())));
            j += 1;
        } else {
            let v = a[i].1.clone() - s.clone() * b[j].1.clone();
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Builds a sorted sparse vector from unsorted entries, summing duplicates.
pub fn sparse_from<C: Coefficient>(entries: impl IntoIterator<Item = (usize, C)>) -> SparseVec<C> {
    let mut map: BTreeMap<usize, C> = BTreeMap::new();
    for (i, c) in entries {
        let e = map.entry(i).or_insert_with(C::zero);
        *e = e.clone() + c;
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Rows kept in reduced row echelon form as they are inserted.
#[derive(Clone, Debug)]
pub struct Echelon<C> {
    ncols: usize,
    rows: Vec<SparseVec<C>>,
    pivot_row: BTreeMap<usize, usize>,
}

impl<C: Coefficient> Echelon<C> {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivot_row: BTreeMap::new() }
    }

    pub fn from_rows(ncols: usize, rows: impl IntoIterator<Item = SparseVec<C>>) -> Self {
        let mut e = Self::new(ncols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Reduces `v` against the current rows; zero iff `v` is in their span.
    pub fn reduce(&self, v: &[(usize, C)]) -> SparseVec<C> {
        let mut out = v.to_vec();
        let hits: Vec<(usize, C)> = v
            .iter()
            .filter_map(|(c, val)| self.pivot_row.get(c).map(|&r| (r, val.clone())))
            .collect();
        for (r, val) in hits {
            out = sub_scaled(&out, &self.rows[r], &val);
        }
        out
    }

    pub fn contains(&self, v: &[(usize, C)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts a row; returns false when it was already in the span.
    pub fn insert(&mut self, v: SparseVec<C>) -> bool {
        let r = self.reduce(&v);
        let Some((p, lead)) = r.first().cloned() else {
            return false;
        };
        let inv = lead.inverse().expect("nonzero pivot");
        let r: SparseVec<C> = r.into_iter().map(|(c, x)| (c, x * inv.clone())).collect();
        for row in &mut self.rows {
            if let Some((_, x)) = row.iter().find(|(c, _)| *c == p) {
                let x = x.clone();
                *row = sub_scaled(row, &r, &x);
            }
        }
        self.pivot_row.insert(p, self.rows.len());
        self.rows.push(r);
        true
    }

    /// Basis of the null space `{x : row·x = 0 for every row}`.
    pub fn kernel_basis(&self) -> Vec<SparseVec<C>> {
        let mut free_in_rows: BTreeMap<usize, Vec<(usize, C)>> = BTreeMap::new();
        for (&p, &r) in &self.pivot_row {
            for (c, x) in &self.rows[r] {
                if *c != p {
                    free_in_rows.entry(*c).or_default().push((p, x.clone()));
                }
            }
        }
        (0..self.ncols)
            .filter(|c| !self.pivot_row.contains_key(c))
            .map(|f| {
                let entries = free_in_rows
                    .get(&f)
                    .into_iter()
                    .flatten()
                    .map(|(p, x)| (*p, -x.clone()))
                    .chain(std::iter::once((f, C::one())));
                sparse_from(entries)
            })
            .collect()
    }

    pub fn rows(&self) -> &[SparseVec<C>] {
        &self.rows
    }
}

/// Solves `sum_j x_j columns[j] = target`. Returns one solution (free variables
/// set to zero) or `None` when the system is inconsistent.
pub fn solve_columns<C: Coefficient>(
    dim: usize,
    columns: &[SparseVec<C>],
    target: &[(usize, C)],
) -> Option<Vec<C>> {
    // Transpose into equation rows over unknowns 0..n plus the rhs column n.
    let n = columns.len();
    let mut eqs: Vec<Vec<(usize, C)>> = vec![Vec::new(); dim];
    for (j, col) in columns.iter().enumerate() {
        for (i, x) in col {
            eqs[*i].push((j, x.clone()));
        }
    }
    for (i, x) in target {
        eqs[*i].push((n, x.clone()));
    }
    let mut ech = Echelon::new(n + 1);
    for row in eqs {
        if !row.is_empty() {
            ech.insert(row);
        }
    }
    if ech.is_pivot(n) {
        return None;
    }
    let mut x = vec![C::zero(); n];
    for (&p, &r) in &ech.pivot_row {
        if let Some((_, v)) = ech.rows[r].iter().find(|(c, _)| *c == n) {
            x[p] = v.clone();
        }
    }
    Some(x)
}

/// Rank of a set of sparse vectors.
pub fn rank<C: Coefficient>(ncols: usize, vectors: impl IntoIterator<Item = SparseVec<C>>) -> usize {
    Echelon::from_rows(ncols, vectors).rank()
}

/// Applies a matrix given by columns to a coefficient vector.
pub fn combine<C: Coefficient>(columns: &[SparseVec<C>], x: &[C]) -> SparseVec<C> {
    sparse_from(
        columns
            .iter()
            .zip(x)
            .filter(|(_, c)| !c.is_zero())
            .flat_map(|(col, c)| col.iter().map(move |(i, v)| (*i, v.clone() * c.clone()))),
    )
}

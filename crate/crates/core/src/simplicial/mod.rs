//! Finite simplicial sets presented by their nondegenerate simplices.
//!
//! Every face of a nondegenerate simplex is stored in Eilenberg–Zilber normal
//! form: a nondegenerate core plus a strictly decreasing degeneracy word. A
//! general simplex is a core pulled back along a monotone surjection, and all
//! face and restriction operators are computed on that representation.

mod prism;
pub(crate) mod realization;
mod standard;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use prism::{prism, Prism, ProductCell};
pub use realization::{
    coordinate_table, monotone_pullback, realization_map, validate_realization, CosimplicialKind,
    CosimplicialMap, RealizationReport,
};
pub use standard::{standard, StandardSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexRef {
    pub dim: usize,
    pub index: usize,
}

impl SimplexRef {
    pub fn new(dim: usize, index: usize) -> Self {
        SimplexRef { dim, index }
    }
}

/// A possibly degenerate simplex `core ∘ surjection`.
///
/// `surjection[t]` is the vertex of the core hit by vertex `t`; its length is
/// one more than the simplex dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub core: SimplexRef,
    pub surjection: Vec<usize>,
}

impl Simplex {
    pub fn nondegenerate(core: SimplexRef) -> Self {
        Simplex { core, surjection: (0..=core.dim).collect() }
    }

    /// `s_{i1} ... s_{ik} core` for a strictly decreasing word.
    pub fn from_word(core: SimplexRef, word: &[usize]) -> Option<Self> {
        if word.windows(2).any(|w| w[0] <= w[1]) {
            return None;
        }
        let n = core.dim + word.len();
        if word.first().is_some_and(|&i| i >= n) {
            return None;
        }
        let mut surjection = Vec::with_capacity(n + 1);
        let mut v = 0;
        surjection.push(0);
        for t in 0..n {
            if !word.contains(&t) {
                v += 1;
            }
            surjection.push(v);
        }
        Some(Simplex { core, surjection })
    }

    pub fn dim(&self) -> usize {
        self.surjection.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.dim() > self.core.dim
    }

    /// The strictly decreasing degeneracy word of the normal form.
    pub fn degeneracy_word(&self) -> Vec<usize> {
        (0..self.dim()).rev().filter(|&t| self.surjection[t] == self.surjection[t + 1]).collect()
    }

    fn is_valid_surjection(&self) -> bool {
        self.surjection.first() == Some(&0)
            && self.surjection.last() == Some(&self.core.dim)
            && self.surjection.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("duplicate simplex id {0}")]
    DuplicateId(String),
    #[error("unknown simplex {0}")]
    UnknownSimplex(String),
    #[error("simplex {simplex} has {got} faces, expected {expected}")]
    FaceCount { simplex: String, expected: usize, got: usize },
    #[error("face {face} of {simplex} is not a valid normal form of dimension {dim}")]
    BadFace { simplex: String, face: usize, dim: usize },
    #[error("unsupported standard space {0}")]
    UnsupportedName(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("{0}")]
    Format(String),
}

/// A finite simplicial set. Vertices carry no face data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSet {
    ids: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<Simplex>>>,
    lookup: Vec<HashMap<String, usize>>,
}

/// Outcome of [`SimplicialSet::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub identities_checked: usize,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl SimplicialSet {
    /// `ids[n]` names the nondegenerate n-simplices; `faces[n][k]` lists the
    /// `n+1` faces of simplex `k` (empty for vertices).
    pub fn new(ids: Vec<Vec<String>>, faces: Vec<Vec<Vec<Simplex>>>) -> Result<Self, SimplicialError> {
        let mut ids = ids;
        let mut faces = faces;
        while ids.last().is_some_and(|v| v.is_empty()) {
            ids.pop();
        }
        faces.resize(ids.len(), Vec::new());
        let mut lookup = Vec::with_capacity(ids.len());
        for (n, level) in ids.iter().enumerate() {
            let mut map = HashMap::new();
            for (k, id) in level.iter().enumerate() {
                if map.insert(id.clone(), k).is_some() {
                    return Err(SimplicialError::DuplicateId(format!("{n}/{id}")));
                }
            }
            lookup.push(map);
            if faces[n].len() != level.len() {
                if n == 0 && faces[0].is_empty() {
                    faces[0] = vec![Vec::new(); level.len()];
                } else {
                    return Err(SimplicialError::Format(format!(
                        "dimension {n} lists {} simplices but {} face lists",
                        level.len(),
                        faces[n].len()
                    )));
                }
            }
        }
        let set = SimplicialSet { ids, faces, lookup };
        set.check_structure()?;
        Ok(set)
    }

    fn check_structure(&self) -> Result<(), SimplicialError> {
        for n in 0..self.ids.len() {
            for k in 0..self.ids[n].len() {
                let name = self.label(SimplexRef::new(n, k));
                let fs = &self.faces[n][k];
                let expected = if n == 0 { 0 } else { n + 1 };
                if fs.len() != expected {
                    return Err(SimplicialError::FaceCount { simplex: name, expected, got: fs.len() });
                }
                for (i, f) in fs.iter().enumerate() {
                    let ok = f.dim() + 1 == n
                        && f.core.dim < n
                        && f.core.index < self.count(f.core.dim)
                        && f.is_valid_surjection();
                    if !ok {
                        return Err(SimplicialError::BadFace { simplex: name, face: i, dim: n - 1 });
                    }
                }
            }
        }
        Ok(())
    }

    /// Top dimension; `None` for the empty set.
    pub fn dim(&self) -> Option<usize> {
        self.ids.len().checked_sub(1)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.ids.get(dim).map_or(0, Vec::len)
    }

    pub fn total_count(&self) -> usize {
        self.ids.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn simplices(&self, dim: usize) -> impl Iterator<Item = SimplexRef> {
        (0..self.count(dim)).map(move |k| SimplexRef::new(dim, k))
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = SimplexRef> + '_ {
        (0..self.ids.len()).flat_map(move |n| self.simplices(n))
    }

    pub fn id(&self, r: SimplexRef) -> &str {
        &self.ids[r.dim][r.index]
    }

    pub fn ids(&self, dim: usize) -> &[String] {
        self.ids.get(dim).map_or(&[], Vec::as_slice)
    }

    /// `"<dim>/<id>"`, the key used in JSON files.
    pub fn label(&self, r: SimplexRef) -> String {
        format!("{}/{}", r.dim, self.id(r))
    }

    pub fn find(&self, dim: usize, id: &str) -> Option<SimplexRef> {
        self.lookup.get(dim)?.get(id).map(|&k| SimplexRef::new(dim, k))
    }

    pub fn find_label(&self, label: &str) -> Option<SimplexRef> {
        let (d, id) = label.split_once('/')?;
        self.find(d.parse().ok()?, id)
    }

    /// Stored faces of a nondegenerate simplex, in normal form.
    pub fn faces(&self, r: SimplexRef) -> &[Simplex] {
        &self.faces[r.dim][r.index]
    }

    pub fn face_of(&self, r: SimplexRef, i: usize) -> &Simplex {
        &self.faces[r.dim][r.index][i]
    }

    /// `d_i` of a general simplex.
    pub fn face(&self, s: &Simplex, i: usize) -> Simplex {
        let n = s.dim();
        assert!(n >= 1 && i <= n, "face index out of range");
        let delta: Vec<usize> = (0..n).map(|t| if t < i { t } else { t + 1 }).collect();
        self.restrict(s, &delta)
    }

    /// Pullback of a simplex along a monotone map `f: [k] -> [dim s]`, given by
    /// its values, returned in normal form.
    pub fn restrict(&self, s: &Simplex, f: &[usize]) -> Simplex {
        let g: Vec<usize> = f.iter().map(|&t| s.surjection[t]).collect();
        let mut image = g.clone();
        image.dedup();
        let eta: Vec<usize> = g.iter().map(|v| image.binary_search(v).expect("in image")).collect();
        let inner = self.restrict_core(s.core, &image);
        Simplex { core: inner.core, surjection: eta.iter().map(|&t| inner.surjection[t]).collect() }
    }

    /// Pullback of a nondegenerate simplex along an injection given by its image.
    fn restrict_core(&self, core: SimplexRef, image: &[usize]) -> Simplex {
        let m = core.dim;
        if image.len() == m + 1 {
            return Simplex::nondegenerate(core);
        }
        let j = (0..=m).rev().find(|v| image.binary_search(v).is_err()).expect("missing vertex");
        let shifted: Vec<usize> = image.iter().map(|&v| if v < j { v } else { v - 1 }).collect();
        let face = self.face_of(core, j).clone();
        self.restrict(&face, &shifted)
    }

    /// The vertices of a nondegenerate simplex, in order.
    pub fn vertices(&self, r: SimplexRef) -> Vec<SimplexRef> {
        let s = Simplex::nondegenerate(r);
        (0..=r.dim).map(|v| self.restrict(&s, &[v]).core).collect()
    }

    /// Checks `d_i d_j = d_{j-1} d_i` for `i < j` on every nondegenerate simplex.
    ///
    /// The identities involving degeneracies hold by construction of the normal
    /// form, so only the face identities can fail.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for n in 2..self.ids.len() {
            for r in self.simplices(n) {
                for j in 1..=n {
                    for i in 0..j {
                        report.identities_checked += 1;
                        let lhs = self.face(self.face_of(r, j), i);
                        let rhs = self.face(self.face_of(r, i), j - 1);
                        if lhs != rhs {
                            report.violations.push(format!(
                                "{}: d{} d{} = {} but d{} d{} = {}",
                                self.label(r),
                                i,
                                j,
                                self.describe(&lhs),
                                j - 1,
                                i,
                                self.describe(&rhs)
                            ));
                        }
                    }
                }
            }
        }
        report
    }

    /// Human-readable normal form, e.g. `s1 s0 0/v`.
    pub fn describe(&self, s: &Simplex) -> String {
        let mut parts: Vec<String> = s.degeneracy_word().iter().map(|i| format!("s{i}")).collect();
        parts.push(self.label(s.core));
        parts.join(" ")
    }

    /// Number of connected components of the 1-skeleton.
    pub fn pi0(&self) -> usize {
        let nv = self.count(0);
        let mut parent: Vec<usize> = (0..nv).collect();
        fn root(p: &mut [usize], mut v: usize) -> usize {
            while p[v] != v {
                p[v] = p[p[v]];
                v = p[v];
            }
            v
        }
        for e in self.simplices(1) {
            let a = self.face_of(e, 0).core.index;
            let b = self.face_of(e, 1).core.index;
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            parent[ra] = rb;
        }
        (0..nv).filter(|&v| root(&mut parent, v) == v).count()
    }
}

impl fmt::Display for SimplicialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<String> = (0..self.ids.len()).map(|n| self.count(n).to_string()).collect();
        write!(f, "simplicial set with nondegenerate counts [{}]", counts.join(", "))
    }
}

/// A simplicial map given on nondegenerate simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    images: Vec<Vec<Simplex>>,
}

impl SimplicialMap {
    pub fn new(images: Vec<Vec<Simplex>>) -> Self {
        SimplicialMap { images }
    }

    pub fn image(&self, r: SimplexRef) -> &Simplex {
        &self.images[r.dim][r.index]
    }

    /// Image of a general simplex `core ∘ η`.
    pub fn apply(&self, s: &Simplex) -> Simplex {
        let img = self.image(s.core);
        Simplex { core: img.core, surjection: s.surjection.iter().map(|&t| img.surjection[t]).collect() }
    }

    /// Checks that the map commutes with every face operator.
    pub fn validate(&self, source: &SimplicialSet, target: &SimplicialSet) -> ValidationReport {
        let mut report = ValidationReport::default();
        for r in source.all_simplices() {
            let img = self.image(r);
            if img.dim() != r.dim {
                report.violations.push(format!("{} maps to a simplex of the wrong dimension", source.label(r)));
                continue;
            }
            if r.dim == 0 {
                continue;
            }
            for i in 0..=r.dim {
                report.identities_checked += 1;
                let lhs = target.face(img, i);
                let rhs = self.apply(source.face_of(r, i));
                if lhs != rhs {
                    report.violations.push(format!(
                        "{}: d{} f = {} but f d{} = {}",
                        source.label(r),
                        i,
                        target.describe(&lhs),
                        i,
                        target.describe(&rhs)
                    ));
                }
            }
        }
        report
    }
}

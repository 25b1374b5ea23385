//! The product `X × Δ¹` with its end inclusions and projection.
//!
//! A nondegenerate simplex of the product is a pair `(τ∘η, y)` with `τ`
//! nondegenerate in `X`, `η` a surjection, `y: [k] → [1]` monotone, and no
//! position where both `η` and `y` repeat. For `τ` of dimension `m` that gives
//! `m + 2` cells of dimension `m` (η the identity) and `m + 1` cells of
//! dimension `m + 1` (η repeats where `y` jumps).

use std::collections::HashMap;

use super::{Simplex, SimplexRef, SimplicialMap, SimplicialSet};

/// The data of a nondegenerate product simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductCell {
    pub base: SimplexRef,
    pub eta: Vec<usize>,
    pub y: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct Prism {
    pub space: SimplicialSet,
    pub cells: Vec<Vec<ProductCell>>,
    /// `f₀` and `f₁`, the inclusions at `t = 0` and `t = 1`.
    pub inclusions: [SimplicialMap; 2],
    pub projection: SimplicialMap,
}

impl Prism {
    pub fn cell(&self, r: SimplexRef) -> &ProductCell {
        &self.cells[r.dim][r.index]
    }
}

fn cell_id(x: &SimplicialSet, c: &ProductCell) -> String {
    let y: String = c.y.iter().map(|b| char::from(b'0' + b)).collect();
    format!("{}|{}", x.id(c.base), y)
}

pub fn prism(x: &SimplicialSet) -> Prism {
    let top = x.dim().map_or(0, |d| d + 2);
    let mut cells: Vec<Vec<ProductCell>> = vec![Vec::new(); top];
    for tau in x.all_simplices() {
        let m = tau.dim;
        for a in 0..=m + 1 {
            let y = (0..=m).map(|t| u8::from(t >= a)).collect();
            cells[m].push(ProductCell { base: tau, eta: (0..=m).collect(), y });
        }
        for j in 0..=m {
            let eta = (0..=m + 1).map(|t| if t <= j { t } else { t - 1 }).collect();
            let y = (0..=m + 1).map(|t| u8::from(t > j)).collect();
            cells[m + 1].push(ProductCell { base: tau, eta, y });
        }
    }
    let mut index: HashMap<(SimplexRef, Vec<u8>), SimplexRef> = HashMap::new();
    for (k, level) in cells.iter().enumerate() {
        for (i, c) in level.iter().enumerate() {
            index.insert((c.base, c.y.clone()), SimplexRef::new(k, i));
        }
    }

    let normalize = |s: Simplex, y: Vec<u8>| -> Simplex {
        let k = y.len() - 1;
        let shared: Vec<bool> =
            (0..k).map(|t| s.surjection[t] == s.surjection[t + 1] && y[t] == y[t + 1]).collect();
        let mut collapse = vec![0usize];
        for t in 0..k {
            let next = collapse[t] + usize::from(!shared[t]);
            collapse.push(next);
        }
        let mut eta = Vec::new();
        let mut yy = Vec::new();
        for t in 0..=k {
            if t == 0 || !shared[t - 1] {
                eta.push(s.surjection[t]);
                yy.push(y[t]);
            }
        }
        let r = index[&(s.core, yy)];
        debug_assert_eq!(cells[r.dim][r.index].eta, eta);
        Simplex { core: r, surjection: collapse }
    };

    let ids: Vec<Vec<String>> = cells.iter().map(|l| l.iter().map(|c| cell_id(x, c)).collect()).collect();
    let faces: Vec<Vec<Vec<Simplex>>> = cells
        .iter()
        .enumerate()
        .map(|(k, level)| {
            level
                .iter()
                .map(|c| {
                    if k == 0 {
                        return Vec::new();
                    }
                    let s = Simplex { core: c.base, surjection: c.eta.clone() };
                    (0..=k)
                        .map(|i| {
                            let face = x.face(&s, i);
                            let mut y = c.y.clone();
                            y.remove(i);
                            normalize(face, y)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let space = SimplicialSet::new(ids, faces).expect("prism structure");

    let end = |j: u8| {
        SimplicialMap::new(
            (0..=x.dim().unwrap_or(0))
                .map(|n| {
                    x.simplices(n)
                        .map(|r| Simplex::nondegenerate(index[&(r, vec![j; n + 1])]))
                        .collect()
                })
                .collect(),
        )
    };
    let inclusions = [end(0), end(1)];
    let projection = SimplicialMap::new(
        cells
            .iter()
            .map(|l| l.iter().map(|c| Simplex { core: c.base, surjection: c.eta.clone() }).collect())
            .collect(),
    );
    Prism { space, cells, inclusions, projection }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::standard;

    fn counts(x: &SimplicialSet) -> Vec<usize> {
        (0..=x.dim().unwrap()).map(|n| x.count(n)).collect()
    }

    #[test]
    fn prism_of_point_is_interval() {
        let p = prism(&standard("point").unwrap());
        assert_eq!(counts(&p.space), vec![2, 1]);
        assert!(p.space.validate().is_valid());
        let v0 = p.inclusions[0].image(SimplexRef::new(0, 0)).core;
        let v1 = p.inclusions[1].image(SimplexRef::new(0, 0)).core;
        assert_ne!(v0, v1);
        let e = SimplexRef::new(1, 0);
        assert_eq!(p.space.face_of(e, 1).core, v0);
        assert_eq!(p.space.face_of(e, 0).core, v1);
    }

    #[test]
    fn prism_of_interval_is_square() {
        let p = prism(&standard("simplex1").unwrap());
        assert_eq!(counts(&p.space), vec![4, 5, 2]);
        // the two triangles share exactly one edge, the diagonal
        let t0: Vec<_> = p.space.faces(SimplexRef::new(2, 0)).iter().map(|f| f.core).collect();
        let t1: Vec<_> = p.space.faces(SimplexRef::new(2, 1)).iter().map(|f| f.core).collect();
        assert_eq!(t0.iter().filter(|e| t1.contains(e)).count(), 1);
    }

    #[test]
    fn prism_of_circle() {
        let p = prism(&standard("sphere1").unwrap());
        assert_eq!(p.space.count(2), 2);
    }

    #[test]
    fn prisms_validate_and_maps_commute() {
        for name in ["simplex2", "boundary3", "sphere2", "torus", "points2", "simplex3"] {
            let x = standard(name).unwrap();
            let p = prism(&x);
            assert!(p.space.validate().is_valid(), "{name}");
            for f in &p.inclusions {
                assert!(f.validate(&x, &p.space).is_valid(), "{name}");
            }
            assert!(p.projection.validate(&p.space, &x).is_valid(), "{name}");
            assert_eq!(p.space.pi0(), x.pi0());
        }
    }
}

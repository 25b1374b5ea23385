use std::str::FromStr;

use super::{Simplex, SimplexRef, SimplicialError, SimplicialSet};

/// The generated families. Dimensions are capped at 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardSpace {
    Simplex(usize),
    Boundary(usize),
    /// `Δⁿ/∂Δⁿ`: one vertex and one nondegenerate n-simplex.
    Sphere(usize),
    /// One vertex, three edges, two triangles.
    Torus,
    /// A finite discrete set.
    Points(usize),
}

pub const MAX_STANDARD_DIM: usize = 4;

impl FromStr for StandardSpace {
    type Err = SimplicialError;

    /// Accepts `simplexN`/`deltaN`/`ΔN`, `boundaryN`/`∂ΔN`, `sphereN`/`SN`,
    /// `torus` and `pointsN`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SimplicialError::UnsupportedName(s.to_string());
        let lower = s.trim().to_lowercase();
        if lower == "torus" || lower == "t2" {
            return Ok(StandardSpace::Torus);
        }
        if lower == "point" {
            return Ok(StandardSpace::Points(1));
        }
        let prefixes: [(&str, fn(usize) -> StandardSpace); 8] = [
            ("simplex", StandardSpace::Simplex),
            ("delta", StandardSpace::Simplex),
            ("boundary", StandardSpace::Boundary),
            ("∂δ", StandardSpace::Boundary),
            ("δ", StandardSpace::Simplex),
            ("sphere", StandardSpace::Sphere),
            ("points", StandardSpace::Points),
            ("s", StandardSpace::Sphere),
        ];
        for (prefix, make) in prefixes {
            if let Some(rest) = lower.strip_prefix(prefix) {
                let n: usize = rest.parse().map_err(|_| bad())?;
                let space = make(n);
                return match space {
                    StandardSpace::Points(k) if k > 0 => Ok(space),
                    StandardSpace::Points(_) => Err(bad()),
                    StandardSpace::Sphere(0) => Err(bad()),
                    _ if n <= MAX_STANDARD_DIM => Ok(space),
                    _ => Err(bad()),
                };
            }
        }
        Err(bad())
    }
}

/// Builds a named standard space.
pub fn standard(name: &str) -> Result<SimplicialSet, SimplicialError> {
    Ok(name.parse::<StandardSpace>()?.build())
}

fn subset_name(bits: u32, n: usize) -> String {
    (0..=n).filter(|i| bits >> i & 1 == 1).map(|i| i.to_string()).collect()
}

impl StandardSpace {
    pub fn build(self) -> SimplicialSet {
        match self {
            StandardSpace::Simplex(n) => simplex_like(n, true),
            StandardSpace::Boundary(n) => simplex_like(n, false),
            StandardSpace::Sphere(n) => sphere(n),
            StandardSpace::Torus => torus(),
            StandardSpace::Points(k) => {
                let ids = vec![(0..k).map(|i| i.to_string()).collect()];
                SimplicialSet::new(ids, vec![]).expect("points")
            }
        }
    }
}

/// All (or all proper) nonempty subsets of `{0..n}` as simplices.
fn simplex_like(n: usize, include_top: bool) -> SimplicialSet {
    let mut by_dim: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for bits in 1u32..(1 << (n + 1)) {
        let d = bits.count_ones() as usize - 1;
        if d == n && !include_top {
            continue;
        }
        by_dim[d].push(bits);
    }
    for level in &mut by_dim {
        level.sort_by_key(|&b| subset_name(b, n));
    }
    let index_of = |bits: u32| -> SimplexRef {
        let d = bits.count_ones() as usize - 1;
        SimplexRef::new(d, by_dim[d].iter().position(|&b| b == bits).expect("subset"))
    };
    let ids: Vec<Vec<String>> = by_dim.iter().map(|l| l.iter().map(|&b| subset_name(b, n)).collect()).collect();
    let faces: Vec<Vec<Vec<Simplex>>> = by_dim
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|&bits| {
                    if bits.count_ones() == 1 {
                        return Vec::new();
                    }
                    let verts: Vec<u32> = (0..=n as u32).filter(|i| bits >> i & 1 == 1).collect();
                    verts.iter().map(|&v| Simplex::nondegenerate(index_of(bits & !(1 << v)))).collect()
                })
                .collect()
        })
        .collect();
    SimplicialSet::new(ids, faces).expect("standard simplex")
}

fn sphere(n: usize) -> SimplicialSet {
    let v = SimplexRef::new(0, 0);
    let word: Vec<usize> = (0..n.saturating_sub(1)).rev().collect();
    let face = Simplex::from_word(v, &word).expect("degenerate vertex");
    let mut ids = vec![Vec::new(); n + 1];
    ids[0].push("v".to_string());
    ids[n].push("s".to_string());
    let mut faces = vec![Vec::new(); n + 1];
    faces[0].push(Vec::new());
    faces[n].push(vec![face; n + 1]);
    SimplicialSet::new(ids, faces).expect("sphere")
}

/// The square with opposite sides identified, cut along the diagonal `c`:
/// `U` has faces `(b, c, a)` and `L` has faces `(a, c, b)`.
fn torus() -> SimplicialSet {
    let v = Simplex::nondegenerate(SimplexRef::new(0, 0));
    let e = |k| Simplex::nondegenerate(SimplexRef::new(1, k));
    let ids = vec![
        vec!["v".to_string()],
        vec!["a".to_string(), "b".to_string(), "c".to_string()],
        vec!["U".to_string(), "L".to_string()],
    ];
    let faces = vec![
        vec![vec![]],
        vec![vec![v.clone(), v.clone()], vec![v.clone(), v.clone()], vec![v.clone(), v]],
        vec![vec![e(1), e(2), e(0)], vec![e(0), e(2), e(1)]],
    ];
    SimplicialSet::new(ids, faces).expect("torus")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(x: &SimplicialSet) -> Vec<usize> {
        (0..=x.dim().unwrap()).map(|n| x.count(n)).collect()
    }

    #[test]
    fn counts_of_standard_spaces() {
        assert_eq!(counts(&standard("simplex1").unwrap()), vec![2, 1]);
        assert_eq!(counts(&standard("boundary3").unwrap()), vec![4, 6, 4]);
        assert_eq!(counts(&standard("sphere1").unwrap()), vec![1, 1]);
        assert_eq!(counts(&standard("sphere3").unwrap()), vec![1, 0, 0, 1]);
        assert_eq!(counts(&standard("torus").unwrap()), vec![1, 3, 2]);
        assert_eq!(counts(&standard("Δ2").unwrap()), vec![3, 3, 1]);
        assert_eq!(counts(&standard("∂Δ2").unwrap()), vec![3, 3]);
    }

    #[test]
    fn every_generated_family_validates() {
        let mut names = vec!["torus".to_string(), "points3".to_string()];
        for n in 0..=MAX_STANDARD_DIM {
            names.push(format!("simplex{n}"));
            names.push(format!("boundary{n}"));
            if n > 0 {
                names.push(format!("sphere{n}"));
            }
        }
        for name in names {
            let x = standard(&name).unwrap();
            assert!(x.validate().is_valid(), "{name}: {:?}", x.validate().violations);
        }
    }

    #[test]
    fn circle_faces_are_the_vertex() {
        let s1 = standard("sphere1").unwrap();
        let e = SimplexRef::new(1, 0);
        assert_eq!(s1.face_of(e, 0).core, SimplexRef::new(0, 0));
        assert_eq!(s1.face_of(e, 1).core, SimplexRef::new(0, 0));
    }

    #[test]
    fn unsupported_names() {
        assert!(standard("klein").is_err());
        assert!(standard("simplex9").is_err());
        assert!(standard("sphere0").is_err());
    }
}

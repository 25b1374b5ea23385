use std::collections::BTreeSet;

use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::superalg::VariableTable;
use crate::{Fp, Rational};

type F5 = Fp<5>;

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn candidate(polys: [&str; 4]) -> ActionCandidate<Rational> {
    ActionCandidate::from_text(polys).unwrap()
}

#[test]
fn identity_is_an_action_of_every_monoid() {
    for m in Monoid::ALL {
        assert!(verify_action(&ActionCandidate::<Rational>::identity(), m).passes(), "{m}");
    }
}

#[test]
fn squaring_fails_coassociativity() {
    let r = verify_action(&candidate(["y^2", "0", "1", "0"]), Monoid::Full);
    assert!(!r.passes());
    assert_eq!(r.first_discrepancy().unwrap().0, "coassociativity on y");
}

#[test]
fn constant_f0_fails_the_counit() {
    let r = verify_action(&candidate(["1", "0", "1", "0"]), Monoid::Full);
    assert!(r.discrepancies.iter().any(|(c, _)| c == "counit on y"));
}

#[test]
fn twisted_examples() {
    // k+1 = n+mk: (1,1,1) and (2,1,1)
    assert!(verify_action(&candidate(["x*y", "3*x*y", "x", "0"]), Monoid::Full).passes());
    assert!(verify_action(&candidate(["x^2*y", "x^2*y", "x", "0"]), Monoid::Full).passes());
    // (1,2,1) violates it
    assert!(!verify_action(&candidate(["x*y", "x*y", "x^2", "0"]), Monoid::Full).passes());
    // n+1 = km with (k,n,m) = (1,1,2)
    assert!(verify_action(&candidate(["x*y", "0", "x", "5*x*y^2"]), Monoid::Full).passes());
    assert!(!verify_action(&candidate(["x*y", "0", "x", "x*y"]), Monoid::Full).passes());
}

#[test]
fn the_z2_rows_need_parity() {
    assert!(verify_action(&candidate(["x*y", "x*(y^2+1)", "1", "0"]), Monoid::Z2).passes());
    assert!(!verify_action(&candidate(["x*y", "x*y", "1", "0"]), Monoid::Z2).passes());
    assert!(verify_action(&candidate(["x*y", "0", "1", "y^3-y"]), Monoid::Z2).passes());
    assert!(!verify_action(&candidate(["x*y", "0", "1", "1"]), Monoid::Z2).passes());
    // over the full monoid the same data is no action
    assert!(!verify_action(&candidate(["x*y", "0", "1", "y^2"]), Monoid::Full).passes());
}

#[test]
fn enumerated_families_are_actions() {
    let scalars = [q(-1), q(0), q(2)];
    let shifts = [q(0), q(3)];
    for m in Monoid::ALL {
        let fams = enumerate_families(m, 2, &scalars, &shifts);
        assert!(!fams.is_empty());
        for f in &fams {
            assert!(f.is_admissible(m), "{f}");
            let d = f.instantiate(3, 3).unwrap();
            assert!(verify_action(&d.to_candidate(), m).passes(), "{m}: {f}");
            assert_eq!(match_family(&d, m).as_ref(), Some(f), "{m}: {f}");
        }
    }
}

#[test]
fn inadmissible_parameters_are_no_actions() {
    for (k, n, m) in [(1, 2, 1), (2, 2, 1), (0, 0, 1), (1, 0, 3)] {
        let f = ActionFamily::new(FamilyKind::FTwist, k, n).with_poly({
            let mut p = vec![q(0); m + 1];
            p[m] = q(1);
            p
        });
        assert!(!f.is_admissible(Monoid::Full));
        let d = f.instantiate(4, 4).unwrap();
        assert!(!verify_action(&d.to_candidate(), Monoid::Full).passes(), "{f}");
    }
}

#[test]
fn the_listed_twist_is_enumerated() {
    let fams = enumerate_families(Monoid::Full, 3, &[q(1)], &[q(0)]);
    assert!(fams.iter().any(|f| f.kind == FamilyKind::FTwist && (f.k, f.n, f.m()) == (1, 1, Some(1))));
    let z2 = enumerate_families(Monoid::Z2, 1, &[q(1)], &[q(0)]);
    assert!(z2.iter().any(|f| f.kind == FamilyKind::Z2Row2 && f.poly == vec![q(1), q(1)]));
    let odd = enumerate_families(Monoid::Odd, 1, &[q(1)], &[q(0)]);
    assert!(odd.iter().any(|f| f.kind == FamilyKind::OddG && f.poly == vec![q(0), q(1)]));
}

#[test]
fn shift_normalizes_f0() {
    let c = candidate(["x*y", "x*y", "x", "0"]);
    let shifted = c.conjugate_by_shift(&q(2));
    assert_eq!(shifted.f0, SuperPolynomial::parse(&candidate_table(), "x*y + 2 - 2*x").unwrap());
    assert!(verify_action(&shifted, Monoid::Full).passes());
    assert_eq!(shifted.conjugate_by_shift(&q(-2)), c);
    // the dense shift agrees with the symbolic one
    let fam = ActionFamily::new(FamilyKind::FTwist, 1, 1).with_poly(vec![q(0), q(1)]).with_shift(q(-2));
    assert_eq!(fam.instantiate(2, 2).unwrap().to_candidate(), shifted);
}

proptest! {
    #[test]
    fn shifts_preserve_actions(c in -5i64..6, kind in 0usize..3, a in 1i64..4) {
        let base = [
            candidate(["x*y", "0", "x^2", "0"]),
            candidate(["x*y", &format!("{a}*x*y"), "x", "0"]),
            candidate(["x^2*y", "0", "x", &format!("{a}*x*y")]),
        ][kind].clone();
        let s = base.conjugate_by_shift(&q(c));
        prop_assert!(verify_action(&s, Monoid::Full).passes());
        let d = DenseCandidate::from_candidate(&s, 3, 3).unwrap();
        let fam = match_family(&d, Monoid::Full).expect("family");
        prop_assert_eq!(fam.shift, q(-c));
    }
}

#[test]
fn monomial_lemma() {
    let t = VariableTable::new(["x"], [""; 0]).unwrap();
    let p = |s: &str| SuperPolynomial::<Rational>::parse(&t, s).unwrap();
    assert_eq!(monomial_lemma_check(&p("x^3")), LemmaOutcome::Monomial(3));
    assert_eq!(monomial_lemma_check(&p("1")), LemmaOutcome::Monomial(0));
    assert_eq!(monomial_lemma_check(&p("x + 1")), LemmaOutcome::NotMultiplicative);
    assert_eq!(monomial_lemma_check(&p("2*x")), LemmaOutcome::NotMultiplicative);
    assert_eq!(monomial_lemma_check(&p("0")), LemmaOutcome::Zero);
}

/// Independent oracle: every assignment of the 4·nx·ny coefficients checked symbolically.
fn brute_force<const P: u32>(monoid: Monoid, nx: usize, ny: usize) -> BTreeSet<Vec<u32>> {
    let n = 4 * nx * ny;
    let field: Vec<Fp<P>> = Fp::<P>::elements().collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; n];
    loop {
        let d = DenseCandidate { nx, ny, coeffs: idx.iter().map(|&i| field[i]).collect() };
        if verify_action(&d.to_candidate(), monoid).passes() {
            out.insert(d.coeffs.iter().map(|c| c.value()).collect());
        }
        let mut k = 0;
        while k < n {
            idx[k] += 1;
            if idx[k] < field.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            return out;
        }
    }
}

fn searched<const P: u32>(monoid: Monoid, degree: usize) -> BTreeSet<Vec<u32>> {
    let field: Vec<Fp<P>> = Fp::<P>::elements().collect();
    let mut out = BTreeSet::new();
    for_each_action(monoid, degree, &field, true, |d| {
        out.insert(d.coeffs.iter().map(|c| c.value()).collect::<Vec<_>>());
    })
    .unwrap();
    out
}

#[test]
fn degree_zero_search_matches_brute_force() {
    for m in Monoid::ALL {
        let found = searched::<3>(m, 0);
        assert_eq!(found, brute_force::<3>(m, 1, 1), "{m}");
        // only y ↦ y... is impossible at y-degree 0, so nothing survives the counit
        assert!(found.is_empty());
    }
}

#[test]
fn odd_degree_one_matches_brute_force() {
    // 8 unknowns over F_3
    assert_eq!(searched::<3>(Monoid::Odd, 1), brute_force::<3>(Monoid::Odd, 1, 2));
}

#[test]
fn degree_one_over_f5_is_the_families() {
    let r = search_fp(Monoid::Full, 1, 5).unwrap();
    assert!(r.complete(), "{:?}", r.unmatched);
    // oracle: the enumerated families that fit in degree 1, with all shifts
    let field: Vec<F5> = F5::elements().collect();
    let expected: BTreeSet<Vec<u32>> = enumerate_families(Monoid::Full, 1, &field, &field)
        .into_iter()
        .filter_map(|f| f.instantiate(2, 2))
        .map(|d| d.coeffs.iter().map(|c| c.value()).collect())
        .collect();
    assert_eq!(searched::<5>(Monoid::Full, 1), expected);
    assert_eq!(r.solutions, expected.len());
}

#[test]
fn grid_search_stays_in_the_families() {
    let grid = [q(-1), q(0), q(1)];
    for m in Monoid::ALL {
        let r = exhaustive_search(m, 1, &grid).unwrap();
        assert!(r.solutions > 0);
        assert!(r.explained(), "{m}: {:?}", r.unmatched);
        assert_eq!(r.complete(), m != Monoid::Z2, "{m}");
    }
    let r = exhaustive_search(Monoid::Full, 1, &grid).unwrap();
    assert!(r.families.contains_key("degree k=0 n=0"));
    assert!(r.families.contains_key("f-twist k=1 n=1 m=1"));
}

#[test]
fn search_guards() {
    assert_eq!(search_fp(Monoid::Full, 4, 101).unwrap_err(), ClassifyError::DegreeTooLarge(4));
    assert_eq!(search_fp(Monoid::Full, 3, 3).unwrap_err(), ClassifyError::FieldTooSmall { p: 3, degree: 3 });
    assert_eq!(search_fp(Monoid::Full, 1, 17).unwrap_err(), ClassifyError::UnsupportedPrime(17));
}

#[test]
fn monoid_names_round_trip() {
    for m in Monoid::ALL {
        assert_eq!(m.name().parse::<Monoid>().unwrap(), m);
    }
    assert!("affine".parse::<Monoid>().is_err());
    assert!(Rational::one() != Rational::zero());
}

use std::sync::Arc;

use super::*;
use crate::forms::{forms_table, mapping_space_ring, random_form, SullivanForm};
use crate::simplicial::{standard, SimplexRef};

#[test]
fn bialgebra_formulas_and_axioms() {
    let b = end_bialgebra();
    let t = &b.table;
    assert_eq!(b.comultiply(&var(t, X)).to_string(), "x_1*x_2");
    assert_eq!(b.comultiply(&var(t, EPS)).to_string(), "x_1*eps_2 + eps_1");
    let r = b.verify();
    assert!(r.is_valid(), "{:?}", r.violations);
    assert_eq!(r.checked, 6);
}

#[test]
fn canonical_images() {
    let c = canonical_coaction(&mapping_space_ring(1, 0));
    assert_eq!(c.image(0).to_string(), "dx1*eps + x1");
    assert_eq!(c.image(1).to_string(), "x*dx1");
    let c = canonical_coaction(&mapping_space_ring(0, 1));
    assert_eq!(c.image(0).to_string(), "de1*x");
    assert_eq!(c.image(1).to_string(), "de1*eps + e1");
    let one = Poly::one(c.algebra());
    assert_eq!(c.apply(&one), Poly::one(c.extended()));
}

#[test]
fn verify_examples() {
    assert!(verify_coaction(&canonical_coaction(&mapping_space_ring(2, 1))).passes());
    let t = mapping_space_ring(2, 1).table;
    assert!(verify_coaction(&Coaction::trivial(&t)).passes());

    let t1 = mapping_space_ring(1, 0).table;
    let bad = Coaction::from_text(&t1, &["x1 + dx1*eps + eps", "dx1*x"]).unwrap();
    let r = verify_coaction(&bad);
    assert!(!r.passes());
    assert_eq!(r.offending(), vec!["x1".to_string()]);
    // right parity but not coassociative: dx1 ↦ dx1 x²
    let bad = Coaction::from_text(&t1, &["x1 + dx1*eps", "dx1*x^2"]).unwrap();
    assert_eq!(verify_coaction(&bad).coassociativity, vec!["x1".to_string()]);
    // not counital
    let bad = Coaction::from_text(&t1, &["x1 + dx1*eps", "2*dx1*x"]).unwrap();
    assert!(verify_coaction(&bad).counit.contains(&"dx1".to_string()));
}

#[test]
fn cdga_examples() {
    let s = coaction_to_cdga(&canonical_coaction(&mapping_space_ring(1, 0))).unwrap();
    assert_eq!(s.degrees(), &[0, 1]);
    assert_eq!(s.differential()[0].to_string(), "dx1");
    assert!(s.differential()[1].is_zero());

    let s = coaction_to_cdga(&canonical_coaction(&mapping_space_ring(0, 1))).unwrap();
    // evens first: de1 then e1
    assert_eq!(s.degrees(), &[1, 0]);
    assert_eq!(s.differential()[1].to_string(), "de1");

    let t = mapping_space_ring(2, 2).table;
    let s = coaction_to_cdga(&Coaction::trivial(&t)).unwrap();
    assert_eq!(s, CdgaStructure::trivial(&t));
}

#[test]
fn cdga_errors() {
    let t = mapping_space_ring(1, 0).table;
    let neg = CdgaStructure::new(&t, vec![-1, 0], vec![Poly::zero(&t); 2]);
    assert!(matches!(neg, Err(CoactionError::NonConnective { .. })));
    let wrong = CdgaStructure::new(&t, vec![0, 0], vec![Poly::odd_var(&t, 0), Poly::zero(&t)]);
    assert!(matches!(wrong, Err(CoactionError::DegreeMismatch { .. })));
    let shape = Coaction::from_text(&t, &["x1*x + x1^2", "dx1*x"]).unwrap();
    assert!(coaction_to_cdga(&shape).is_err());
}

#[test]
fn canonical_matches_forms_structure() {
    for n in 0..=3 {
        for q in 0..=3 {
            let ring = mapping_space_ring(n, q);
            let c = canonical_coaction(&ring);
            assert!(verify_coaction(&c).passes(), "({n},{q})");
            let s = coaction_to_cdga(&c).unwrap();
            assert_eq!(s, CdgaStructure::of_ring(&ring), "({n},{q})");
            assert_eq!(cdga_to_coaction(&s), c);
        }
    }
}

#[test]
fn round_trip_from_cdga() {
    // Δ¹ forms: d and grading give back the canonical coaction
    let ring = mapping_space_ring(1, 0);
    assert_eq!(cdga_to_coaction(&CdgaStructure::of_ring(&ring)), canonical_coaction(&ring));
    let t = forms_table(2, false);
    let c = cdga_to_coaction(&CdgaStructure::of_ring(&mapping_space_ring(2, 0)));
    assert!(verify_coaction(&c).passes());
    assert_eq!(c.algebra(), &t);
}

#[test]
fn right_derivation_signs() {
    // D(x1 dx2) from the coaction equals the right derivation, which differs
    // from the left de Rham differential by the parity sign.
    let ring = mapping_space_ring(2, 0);
    let s = CdgaStructure::of_ring(&ring);
    let t = &ring.table;
    let a = Poly::parse(t, "x1*dx2").unwrap();
    let c = canonical_coaction(&ring);
    let image = c.apply(&a);
    let ext = c.extended();
    let expected = (a.embed(ext).unwrap() + s.d(&a).embed(ext).unwrap() * var(ext, EPS)) * var(ext, X);
    assert_eq!(image, expected);
    assert_eq!(s.d(&a), -crate::forms::d_poly(&a));
}

fn space(name: &str) -> Arc<crate::simplicial::SimplicialSet> {
    Arc::new(standard(name).unwrap())
}

#[test]
fn forms_examples() {
    let d1 = space("simplex1");
    // x1 on the edge, with vertex values 0 and 1
    let a = SullivanForm::from_fn(&d1, false, |r, t| match r.dim {
        1 => Poly::even_var(t, 0),
        _ => Poly::constant(t, crate::Rational::from_integer((r.index as i64).into())),
    });
    assert!(a.check_compatibility().is_compatible());
    let mu = coaction_on_forms(&a);
    assert_eq!(mu.coefficient(0, false), Some(&a));
    assert_eq!(mu.coefficient(0, true).unwrap().value(SimplexRef::new(1, 0)).to_string(), "dx1");
    assert!(mu.is_compatible());

    let one = SullivanForm::one(&d1);
    let mu = coaction_on_forms(&one);
    assert_eq!(mu.terms.len(), 1);
    assert_eq!(mu.coefficient(0, false), Some(&one));
}

#[test]
fn closed_forms_are_scaled_by_powers() {
    let s1 = space("sphere1");
    let w = SullivanForm::from_fn(&s1, false, |r, t| if r.dim == 1 { Poly::odd_var(t, 0) } else { Poly::zero(t) });
    let mu = coaction_on_forms(&w);
    assert_eq!(mu.terms.keys().collect::<Vec<_>>(), vec![&(1, false)]);
    let x = var(&end_table(), X);
    assert!(basic_twist_coinvariance(&w, &x).unwrap());
    assert!(!basic_twist_coinvariance(&w, &Poly::one(&end_table())).unwrap());
    assert!(basic_twist_coinvariance(&SullivanForm::one(&s1), &Poly::one(&end_table())).unwrap());
}

#[test]
fn nonconstant_functions_are_not_invariant() {
    let x = space("simplex2");
    let f = random_form(&x, 0, 2, 5).unwrap();
    assert!(!f.is_closed());
    assert!(!basic_twist_coinvariance(&f, &Poly::one(&end_table())).unwrap());
}

#[test]
fn grouplike_check() {
    let t = end_table();
    assert!(is_grouplike(&Poly::parse(&t, "x^3").unwrap()));
    assert!(!is_grouplike(&Poly::parse(&t, "x + 1").unwrap()));
    assert!(!is_grouplike(&Poly::parse(&t, "2*x").unwrap()));
    let f = SullivanForm::one(&space("point"));
    assert!(basic_twist_coinvariance(&f, &Poly::parse(&t, "x + 1").unwrap()).is_err());
}

#[test]
fn random_coactions_glue() {
    for name in ["boundary2", "torus", "simplex3"] {
        let x = space(name);
        for seed in 0..3 {
            let a = random_form(&x, 1, 2, seed).unwrap();
            let mu = coaction_on_forms(&a);
            assert!(mu.is_compatible());
            // coefficient of x^k is the degree-k part, of x^k eps is the right derivative of it
            assert_eq!(mu.coefficient(1, false).cloned().unwrap_or_else(|| SullivanForm::zero(&x)), a);
        }
    }
}

#[test]
fn truncations_have_growing_degree() {
    for n in 0..=5 {
        assert_eq!(truncation_max_degree(n), n as u32);
    }
}

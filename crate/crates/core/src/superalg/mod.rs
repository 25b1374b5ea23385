//! Supercommutative polynomial algebra: variable tables, polynomials with
//! Koszul signs, algebra homomorphisms given by substitution, and odd
//! derivations.

mod map;
mod monomial;
mod poly;
mod table;
mod text;

use thiserror::Error;

pub use map::AlgebraMap;
pub use monomial::{koszul_negative, Monomial};
pub use poly::{odd_derivation, right_odd_derivation, SuperPolynomial};
pub use table::{Table, VariableTable, MAX_ODDS};
pub use text::{monomial_text, parse_polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_count(n: usize) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("polynomials live over different variable tables")]
    TableMismatch,
    #[error("image of generator {generator} has the wrong parity")]
    ParityMismatch { generator: String },
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("duplicate variable name {0}")]
    DuplicateName(String),
    #[error("at most {MAX_ODDS} odd variables are supported, got {0}")]
    TooManyOdds(usize),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::One;
    use proptest::prelude::*;

    type P = SuperPolynomial<Rational>;

    fn table() -> Table {
        VariableTable::new(["x1", "x2"], ["e1", "e2", "e3"]).unwrap()
    }

    fn p(t: &Table, s: &str) -> P {
        P::parse(t, s).unwrap()
    }

    #[test]
    fn addition_examples() {
        let t = table();
        assert_eq!(p(&t, "x1") + P::zero(&t), p(&t, "x1"));
        assert_eq!((p(&t, "e1") + p(&t, "e1")).to_string(), "2*e1");
        assert_eq!((p(&t, "x1 + e1*e2") + p(&t, "-x1")).to_string(), "e1*e2");
    }

    #[test]
    fn multiplication_examples() {
        let t = table();
        assert!((p(&t, "e1") * p(&t, "e1")).is_zero());
        assert_eq!(p(&t, "e2") * p(&t, "e1"), p(&t, "-e1*e2"));
        assert_eq!(p(&t, "x1 + e1") * p(&t, "x1 - e1"), p(&t, "x1^2"));
    }

    #[test]
    fn table_mismatch_is_an_error() {
        let t = table();
        let other = VariableTable::new(["y"], Vec::<&str>::new()).unwrap();
        assert_eq!(p(&t, "x1").checked_add(&P::one(&other)), Err(AlgebraError::TableMismatch));
        assert_eq!(p(&t, "x1").checked_mul(&P::one(&other)), Err(AlgebraError::TableMismatch));
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(matches!(VariableTable::new(["a"], ["a"]), Err(AlgebraError::DuplicateName(_))));
    }

    #[test]
    fn substitution_examples() {
        let h = VariableTable::new(["x"], ["eps"]).unwrap();
        let h2 = VariableTable::new(["x_1", "x_2"], ["eps_1", "eps_2"]).unwrap();
        let m = AlgebraMap::new(&h, &h2, vec![p(&h2, "x_1*x_2"), p(&h2, "eps_1 + x_1*eps_2")]).unwrap();
        assert_eq!(m.substitute(&p(&h, "eps")).unwrap().to_string(), "x_1*eps_2 + eps_1");
        let t = table();
        assert_eq!(AlgebraMap::identity(&t).apply(&p(&t, "3*x1*e1 - e2*e3")), p(&t, "3*x1*e1 - e2*e3"));
        let y = VariableTable::new(["x"], Vec::<&str>::new()).unwrap();
        let sq = AlgebraMap::new(&y, &y, vec![p(&y, "x^2")]).unwrap();
        assert_eq!(sq.apply(&p(&y, "x^3")), p(&y, "x^6"));
    }

    #[test]
    fn substitution_rejects_parity_violation() {
        let t = table();
        let bad = AlgebraMap::new(
            &t,
            &t,
            vec![p(&t, "e1"), p(&t, "x2"), p(&t, "e1"), p(&t, "e2"), p(&t, "e3")],
        );
        assert_eq!(bad, Err(AlgebraError::ParityMismatch { generator: "x1".into() }));
    }

    #[test]
    fn derivation_examples() {
        let t = VariableTable::new(["x1", "x2", "dbar1"], ["xb1", "xb2"]).unwrap();
        let z = P::zero(&t);
        let images = vec![p(&t, "xb1"), p(&t, "xb2"), z.clone(), z.clone(), z.clone()];
        assert_eq!(odd_derivation(&images, &p(&t, "x1^2")).unwrap(), p(&t, "2*x1*xb1"));
        assert!(odd_derivation(&images, &p(&t, "7")).unwrap().is_zero());
        assert_eq!(odd_derivation(&images, &p(&t, "x1*x2")).unwrap(), p(&t, "xb1*x2 + x1*xb2"));
        let bad = vec![p(&t, "x2"), z.clone(), z.clone(), z.clone(), z];
        assert!(matches!(odd_derivation(&bad, &p(&t, "x1")), Err(AlgebraError::ParityMismatch { .. })));
    }

    #[test]
    fn parity_components() {
        let t = table();
        assert_eq!(p(&t, "x1 + e1").parity_component(Parity::Even), p(&t, "x1"));
        assert_eq!(p(&t, "x1 + e1").parity_component(Parity::Odd), p(&t, "e1"));
        assert!(p(&t, "e1*e2").parity_component(Parity::Odd).is_zero());
    }

    #[test]
    fn text_roundtrip_and_format() {
        let t = table();
        let q = p(&t, "3/2*x1^2*e1*e2");
        assert_eq!(q.to_string(), "3/2*x1^2*e1*e2");
        let r = p(&t, "1 - x2 + (x1 + e3)^2 - e1/2");
        assert_eq!(r.to_string(), "x1^2 + 2*x1*e3 - x2 - 1/2*e1 + 1");
        assert_eq!(p(&t, &r.to_string()), r);
        assert_eq!(P::zero(&t).to_string(), "0");
        assert!(P::parse(&t, "x1 +").is_err());
        assert!(P::parse(&t, "y").is_err());
        assert!(P::parse(&t, "x1/0").is_err());
    }

    #[test]
    fn embed_keeps_signs() {
        let small = VariableTable::new(["a"], ["u", "v"]).unwrap();
        let big = VariableTable::new(["b", "a"], ["v", "w", "u"]).unwrap();
        let q = p(&small, "a*u*v").embed(&big).unwrap();
        assert_eq!(q, p(&big, "-a*v*u"));
    }

    #[test]
    fn right_derivation_rule() {
        let t = table();
        let z = P::zero(&t);
        // D(x1) = e1, D(e2) = x2, D(e3) = 0
        let images = vec![p(&t, "e1"), z.clone(), z.clone(), p(&t, "x2"), z];
        let a = p(&t, "e2");
        let b = p(&t, "x1*e3");
        let lhs = right_odd_derivation(&images, &(&a * &b)).unwrap();
        let da = right_odd_derivation(&images, &a).unwrap();
        let db = right_odd_derivation(&images, &b).unwrap();
        // |b| odd: D(ab) = a D(b) - D(a) b
        assert_eq!(lhs, &a * &db - &da * &b);
    }

    fn arb_poly(t: Table, parity: Option<Parity>) -> impl Strategy<Value = P> {
        let ne = t.n_even();
        let no = t.n_odd();
        prop::collection::vec(
            (prop::collection::vec(0u32..3, ne), prop::collection::vec(any::<bool>(), no), -4i64..5),
            0..6,
        )
        .prop_map(move |terms| {
            let t = t.clone();
            let terms = terms.into_iter().filter_map(|(ev, od, c)| {
                let idx: Vec<usize> = od.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect();
                let m = Monomial::from_parts(ev, &idx)?;
                if parity.is_some_and(|par| Parity::of_count(m.odd_count()) != par) {
                    return None;
                }
                Some((m, <Rational as crate::scalar::Coefficient>::from_i64(c)))
            });
            P::from_terms(&t, terms)
        })
    }

    fn arb_parity() -> impl Strategy<Value = Parity> {
        prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
    }

    proptest! {
        #[test]
        fn supercommutativity((pa, pb, a, b) in (arb_parity(), arb_parity()).prop_flat_map(|(pa, pb)| {
            (Just(pa), Just(pb), arb_poly(table(), Some(pa)), arb_poly(table(), Some(pb)))
        })) {
            let ab = &a * &b;
            let ba = &b * &a;
            if pa.is_odd() && pb.is_odd() {
                prop_assert_eq!(ab, -ba);
            } else {
                prop_assert_eq!(ab, ba);
            }
        }

        #[test]
        fn associativity_and_distributivity(a in arb_poly(table(), None), b in arb_poly(table(), None), c in arb_poly(table(), None)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn substitution_is_multiplicative(a in arb_poly(table(), None), b in arb_poly(table(), None),
                                          i0 in arb_poly(table(), Some(Parity::Even)),
                                          i2 in arb_poly(table(), Some(Parity::Odd))) {
            let t = table();
            let f = AlgebraMap::new(&t, &t, vec![i0, p(&t, "x1 + 1"), i2, p(&t, "e1 - x2*e3"), p(&t, "e2")]).unwrap();
            prop_assert_eq!(f.apply(&(&a * &b)), &f.apply(&a) * &f.apply(&b));
            let g = AlgebraMap::new(&t, &t, vec![p(&t, "x2"), p(&t, "x1*x2"), p(&t, "e3"), p(&t, "e1"), p(&t, "e2 + x1*e1")]).unwrap();
            prop_assert_eq!(f.compose(&g).unwrap().apply(&a), f.apply(&g.apply(&a)));
        }

        #[test]
        fn canonical_form(a in arb_poly(table(), None), b in arb_poly(table(), None)) {
            for q in [&a + &b, &a * &b, &a - &a] {
                prop_assert!(q.terms().all(|(_, c)| !num_traits::Zero::is_zero(c)));
            }
            prop_assert!((&a - &a).is_zero());
            let ev = a.parity_component(Parity::Even);
            let od = a.parity_component(Parity::Odd);
            prop_assert_eq!(ev.parity_component(Parity::Even), ev.clone());
            prop_assert_eq!(&ev + &od, a.clone());
            prop_assert_eq!(P::parse(&table(), &a.to_string()).unwrap(), a);
        }

        #[test]
        fn derivation_leibniz(a in arb_poly(table(), Some(Parity::Odd)), b in arb_poly(table(), None)) {
            let t = table();
            let images = vec![p(&t, "e1"), p(&t, "x1*e2"), P::zero(&t), p(&t, "x2"), p(&t, "1")];
            let d = |q: &P| odd_derivation(&images, q).unwrap();
            prop_assert_eq!(d(&(&a * &b)), &d(&a) * &b - &a * &d(&b));
        }
    }

    #[test]
    fn one_is_one() {
        let t = table();
        assert!(P::one(&t).is_one());
        assert!(P::constant(&t, Rational::one()).is_constant());
    }
}

//! Exact supercommutative algebra, Sullivan polynomial forms on finite
//! simplicial sets, and the 0|1-dimensional field theories they classify.

pub mod classify;
pub mod coaction;
pub mod fieldtheory;
pub mod forms;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod scalar;
pub mod simplicial;
pub mod superalg;

pub use scalar::{Coefficient, Fp};

/// Arbitrary precision rationals, the default coefficient field.
pub type Rational = num_rational::BigRational;
/// Polynomials over the rationals.
pub type Poly = superalg::SuperPolynomial<Rational>;
/// Algebra maps over the rationals.
pub type RationalMap = superalg::AlgebraMap<Rational>;
/// The prime field used by the default classification search.
pub type F101 = Fp<101>;

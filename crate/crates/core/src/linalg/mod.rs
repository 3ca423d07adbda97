//! Exact integer and rational linear algebra, polynomials, certified
//! eigenvalue enclosures and root-of-unity tests.

pub mod cplx;
pub mod matrix;
pub mod poly;
pub mod ratmat;
pub mod spectrum;
pub mod unity;

pub use matrix::IntegerMatrix;
pub use poly::{IntPolynomial, RatPoly};
pub use spectrum::{eigen_spectrum, power_sums, EigenSpectrum, RootEnclosure};
pub use unity::{absolute_irreducibility_2x2, ratio_is_root_of_unity_2x2, ratio_is_root_of_unity_general};

/// Matrix of `k×k` minors of `a`.
pub fn compound_matrix(a: &IntegerMatrix, k: usize) -> crate::error::Result<IntegerMatrix> {
    a.compound(k)
}

/// `det(xI - a)`.
pub fn char_poly(a: &IntegerMatrix) -> IntPolynomial {
    a.char_poly()
}

//! Integer intertwiners `X Aᵘ = A′ᵘ X` between powers of 2×2 matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::degrees::DegreeSequence;
use crate::error::{Error, Result};
use crate::linalg::matrix::IntegerMatrix;
use crate::linalg::ratmat::{nullspace, primitive_integer_vector};
use crate::linalg::unity::{absolute_irreducibility_2x2, QUADRATIC_ORDERS};

/// Default coefficient box for the lattice search.
pub const DEFAULT_BOX: i64 = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Semiconjugacy {
    pub u: u32,
    pub x: IntegerMatrix,
    #[serde(with = "crate::rational::serde_int")]
    pub det: BigInt,
    /// Dimension of the solution space for this `u`.
    pub solution_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub u: u32,
    pub char_polys_equal: bool,
    /// Primitive integer basis of the solutions, flattened row-major.
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemiconjugacyReport {
    pub absolutely_irreducible: [bool; 2],
    pub result: Option<Semiconjugacy>,
    pub attempts: Vec<Attempt>,
    pub search_box: i64,
}

/// Primitive integer basis of `{X : X B = B′ X}`, each as a row-major
/// `d²` vector.
pub fn intertwiner_basis(b: &IntegerMatrix, bp: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let d = b.dim();
    // Unknown x_{ij} at index i d + j; equation (i, j):
    // Σ_k x_{ik} b_{kj} - Σ_k b′_{ik} x_{kj} = 0.
    let mut rows = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut row = vec![BigRational::zero(); d * d];
            for k in 0..d {
                row[i * d + k] += BigRational::from_integer(b.get(k, j).clone());
                row[k * d + j] -= BigRational::from_integer(bp.get(i, k).clone());
            }
            rows.push(row);
        }
    }
    nullspace(&rows, d * d).iter().map(|v| primitive_integer_vector(v)).collect()
}

fn to_matrix(v: &[BigInt], d: usize) -> IntegerMatrix {
    IntegerMatrix::new(v.chunks(d).map(|c| c.to_vec()).collect()).expect("square")
}

fn combine(basis: &[Vec<BigInt>], coeffs: &[i64]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); basis[0].len()];
    for (c, v) in coeffs.iter().zip(basis) {
        if *c != 0 {
            for (o, x) in out.iter_mut().zip(v) {
                *o += x * BigInt::from(*c);
            }
        }
    }
    out
}

/// Coefficient vectors in `[-B, B]^n` in order of increasing max-norm, then
/// lexicographically.
fn box_vectors(n: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    (1..=bound).flat_map(move |r| {
        let side = (2 * r + 1) as u64;
        let total = side.pow(n as u32);
        (0..total).filter_map(move |mut idx| {
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push((idx % side) as i64 - r);
                idx /= side;
            }
            v.reverse();
            (v.iter().map(|x| x.abs()).max() == Some(r)).then_some(v)
        })
    })
}

/// An `X` with nonzero determinant in the span of `basis`.
fn nonsingular_member(basis: &[Vec<BigInt>], d: usize, bound: i64) -> Option<IntegerMatrix> {
    if basis.is_empty() {
        return None;
    }
    let try_coeffs = |c: &[i64]| {
        let x = to_matrix(&combine(basis, c), d);
        (!x.det().is_zero()).then_some(x)
    };
    if basis.len() == 1 {
        return try_coeffs(&[1]);
    }
    if basis.len() == 2 && d == 2 {
        // det(xX₁ + yX₂) is a binary quadratic form; if it is not identically
        // zero it is nonzero at one of (1,0), (0,1), (1,1).
        for c in [[1, 0], [0, 1], [1, 1]] {
            if let Some(x) = try_coeffs(&c) {
                return Some(x);
            }
        }
        return None;
    }
    box_vectors(basis.len(), bound).find_map(|c| try_coeffs(&c))
}

/// First `u ∈ {1,2,3,4,6}` and integer `X` with `X Aᵘ = A′ᵘ X`,
/// `det X ≠ 0`.
pub fn find_semiconjugacy(a: &IntegerMatrix, ap: &IntegerMatrix) -> Result<SemiconjugacyReport> {
    find_semiconjugacy_with(a, ap, DEFAULT_BOX)
}

pub fn find_semiconjugacy_with(a: &IntegerMatrix, ap: &IntegerMatrix, bound: i64) -> Result<SemiconjugacyReport> {
    if a.dim() != 2 || ap.dim() != 2 {
        return Err(Error::Dimension("semiconjugacy search is for 2x2 matrices".into()));
    }
    if a.det().is_zero() || ap.det().is_zero() {
        return Err(Error::Singular("semiconjugacy needs invertible matrices".into()));
    }
    let mut attempts = Vec::new();
    let mut result = None;
    for &u in QUADRATIC_ORDERS.iter() {
        let b = a.pow(u as u64);
        let bp = ap.pow(u as u64);
        let equal = b.char_poly() == bp.char_poly();
        let basis = if equal { intertwiner_basis(&b, &bp) } else { Vec::new() };
        attempts.push(Attempt {
            u,
            char_polys_equal: equal,
            basis: basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect(),
        });
        if let Some(x) = nonsingular_member(&basis, 2, bound) {
            let det = x.det();
            result = Some(Semiconjugacy { u, x, det, solution_dim: basis.len() });
            break;
        }
    }
    Ok(SemiconjugacyReport {
        absolutely_irreducible: [absolute_irreducibility_2x2(a), absolute_irreducibility_2x2(ap)],
        result,
        attempts,
        search_box: bound,
    })
}

/// `X Aᵘ = A′ᵘ X` exactly, with `det X ≠ 0`.
pub fn verify_semiconjugacy(a: &IntegerMatrix, ap: &IntegerMatrix, s: &Semiconjugacy) -> bool {
    let b = a.pow(s.u as u64);
    let bp = ap.pow(s.u as u64);
    !s.x.det().is_zero() && &s.x * &b == &bp * &s.x
}

pub fn degree_sequences_equal(s: &DegreeSequence, t: &DegreeSequence) -> Result<bool> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch(s.len(), t.len()));
    }
    Ok(s.terms == t.terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degrees::{degree_sequence, MonomialMap};
    use crate::polytope::ToricDivisor;

    fn m(rows: &[[i64; 2]]) -> IntegerMatrix {
        IntegerMatrix::from_i64(rows)
    }

    #[test]
    fn identity_and_conjugates() {
        let a = m(&[[2, -1], [1, 2]]);
        let r = find_semiconjugacy(&a, &a).unwrap();
        let s = r.result.unwrap();
        assert_eq!(s.u, 1);
        assert_eq!(s.solution_dim, 2);
        assert!(verify_semiconjugacy(&a, &a, &s));
        let p = m(&[[1, 1], [0, 1]]);
        let ap = &(&p * &a) * &p.inverse_unimodular().unwrap();
        let s = find_semiconjugacy(&a, &ap).unwrap().result.unwrap();
        assert_eq!(s.u, 1);
        assert!(verify_semiconjugacy(&a, &ap, &s));
        for t in 2..4 {
            let st = Semiconjugacy { u: s.u * t, ..s.clone() };
            assert!(verify_semiconjugacy(&a, &ap, &st));
        }
    }

    #[test]
    fn swapped_eigenvalues() {
        let a = m(&[[1, -1], [1, 1]]);
        let ap = m(&[[1, 1], [-1, 1]]);
        let r = find_semiconjugacy(&a, &ap).unwrap();
        assert!(!r.absolutely_irreducible[0]);
        let s = r.result.unwrap();
        assert!(verify_semiconjugacy(&a, &ap, &s));
    }

    #[test]
    fn different_char_polys_fail() {
        let a = m(&[[2, -1], [1, 2]]);
        let ap = m(&[[1, -2], [1, 1]]);
        let r = find_semiconjugacy(&a, &ap).unwrap();
        assert!(r.result.is_none());
        assert!(r.attempts.iter().all(|t| !t.char_polys_equal));
    }

    #[test]
    fn sequence_equality() {
        let div = ToricDivisor::o1_projective(2);
        let seq = |rows: &[[i64; 2]]| degree_sequence(&MonomialMap::from_i64(rows).unwrap(), &div, 1, 6).unwrap();
        let a = seq(&[[2, 0], [0, 3]]);
        assert!(degree_sequences_equal(&a, &a).unwrap());
        assert!(degree_sequences_equal(&a, &seq(&[[3, 0], [0, 2]])).unwrap());
        let c = seq(&[[2, 0], [0, 4]]);
        assert!(!degree_sequences_equal(&a, &c).unwrap());
        assert_eq!(a.terms.iter().zip(&c.terms).position(|(x, y)| x != y), Some(1));
        let short = degree_sequence(&MonomialMap::from_i64(&[[2, 0], [0, 3]]).unwrap(), &div, 1, 3).unwrap();
        assert!(degree_sequences_equal(&a, &short).is_err());
    }
}

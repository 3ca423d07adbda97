//! Exact and certified tests for eigenvalue ratios being roots of unity.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Pow, Zero};
use serde::Serialize;

use super::matrix::IntegerMatrix;
use super::poly::{
    cyclotomic, euler_phi, factor_multiplicity, integer_roots, orders_with_totient_at_most, ratio_polynomial,
    IntPolynomial,
};
use super::spectrum::{polynomial_spectrum, power_sums, EigenSpectrum};
use crate::error::{Error, Result};

/// The exponents `u` with `φ(u) <= 2`: possible orders of a root of unity
/// of degree at most two.
pub const QUADRATIC_ORDERS: [u32; 5] = [1, 2, 3, 4, 6];

/// One row of the exact 2×2 test: `s_u^2` against `4 q^u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerSumCheck {
    pub u: u32,
    pub s_u: String,
    pub s_u_squared: String,
    pub four_q_u: String,
    pub holds: bool,
}

fn check_2x2(a: &IntegerMatrix) -> Result<(BigInt, BigInt)> {
    if a.dim() != 2 {
        return Err(Error::Dimension(format!("expected a 2x2 matrix, got {0}x{0}", a.dim())));
    }
    Ok((a.trace(), a.det()))
}

/// Table of `s_u^2 = 4 q^u` checks for `u ∈ {1,2,3,4,6}`.
pub fn power_sum_table_2x2(a: &IntegerMatrix) -> Result<Vec<PowerSumCheck>> {
    let (_, q) = check_2x2(a)?;
    let s = power_sums(&a.char_poly(), 6);
    Ok(QUADRATIC_ORDERS
        .iter()
        .map(|&u| {
            let su = &s[u as usize - 1];
            let sq = su * su;
            let rhs = BigInt::from(4) * Pow::pow(&q, u);
            PowerSumCheck {
                u,
                s_u: su.to_string(),
                s_u_squared: sq.to_string(),
                four_q_u: rhs.to_string(),
                holds: sq == rhs,
            }
        })
        .collect())
}

/// Smallest `u ∈ {1,2,3,4,6}` with `μ^u` real, for a 2×2 matrix with a
/// nonreal eigenvalue pair.
pub fn root_of_unity_witness_2x2(a: &IntegerMatrix) -> Result<Option<u32>> {
    let (t, q) = check_2x2(a)?;
    if &t * &t - BigInt::from(4) * &q >= BigInt::zero() {
        return Err(Error::RealEigenvalues(format!("discriminant of {a} is nonnegative")));
    }
    Ok(power_sum_table_2x2(a)?.into_iter().find(|c| c.holds).map(|c| c.u))
}

/// Whether `μ / μ̄` is a root of unity for the nonreal eigenvalue pair of a
/// 2×2 integer matrix.
pub fn ratio_is_root_of_unity_2x2(a: &IntegerMatrix) -> Result<bool> {
    Ok(root_of_unity_witness_2x2(a)?.is_some())
}

/// No power of `a` has a rational eigenvalue.
pub fn absolute_irreducibility_2x2(a: &IntegerMatrix) -> bool {
    let Ok(table) = power_sum_table_2x2(a) else {
        return false;
    };
    // Monic integer polynomials have only integer rational roots.
    integer_roots(&a.char_poly()).is_empty() && table.iter().all(|c| !c.holds)
}

/// Starting and final precision of the certification loop.
const START_BITS: u32 = 64;
const MAX_BITS: u32 = 1024;

/// Whether `μ_j / μ_i` is a root of unity, where `i`, `j` index the distinct
/// roots of `f` as ordered by [`polynomial_spectrum`].
///
/// The candidate orders come from cyclotomic factors of the ratio polynomial;
/// certified enclosures then attribute those factors to specific pairs.
pub fn ratio_is_root_of_unity_general(f: &IntPolynomial, i: usize, j: usize) -> Result<bool> {
    Ok(ratio_root_of_unity_order(f, i, j)?.is_some())
}

/// The order `n` such that `μ_j / μ_i` is a primitive `n`-th root of unity,
/// if any.
pub fn ratio_root_of_unity_order(f: &IntPolynomial, i: usize, j: usize) -> Result<Option<u64>> {
    let d = f.degree().ok_or_else(|| Error::Dimension("zero polynomial".into()))? as u64;
    if f.coeff(0).is_zero() {
        return Err(Error::Singular("zero is a root; ratios undefined".into()));
    }
    let r = ratio_polynomial(f);
    let candidates: Vec<(u64, usize)> = orders_with_totient_at_most(d * d)
        .into_iter()
        .map(|n| (n, factor_multiplicity(&r, &cyclotomic(n))))
        .filter(|&(_, m)| m > 0)
        .collect();
    let mut bits = START_BITS;
    loop {
        let spec = polynomial_spectrum(f, bits)?;
        let count = spec.roots().len();
        if i >= count || j >= count {
            return Err(Error::OutOfRange(format!("root index out of range ({count} distinct roots)")));
        }
        match attribute(&spec, &candidates, i, j) {
            Some(found) => return Ok(found),
            None if bits >= MAX_BITS => return Err(Error::EnclosureTooCoarse(bits)),
            None => bits *= 2,
        }
    }
}

/// Ratio disk `(center, radius)` for `μ_a / μ_b` from the root enclosures.
fn ratio_disk(spec: &EigenSpectrum, a: usize, b: usize) -> Option<(Complex64, f64)> {
    let ra = &spec.roots()[a];
    let rb = &spec.roots()[b];
    if a == b {
        return Some((Complex64::new(1.0, 0.0), 1e-13));
    }
    let (ca, cb) = (ra.center_f64(), rb.center_f64());
    let (ea, eb) = (ra.radius_f64(), rb.radius_f64());
    let den = cb.norm() - eb;
    if den <= 0.0 {
        return None;
    }
    let c = ca / cb;
    // |x/y - ca/cb| <= (ea + |ca/cb| eb) / (|cb| - eb)
    let rad = (ea + c.norm() * eb) / den;
    Some((c, rad * (1.0 + 1e-9) + 1e-13 * (1.0 + c.norm())))
}

/// Returns `Some(order)` once every candidate factor is attributed, or
/// `None` when the enclosures are too coarse.
fn attribute(spec: &EigenSpectrum, candidates: &[(u64, usize)], i: usize, j: usize) -> Option<Option<u64>> {
    let roots = spec.roots();
    let mut answer = None;
    for &(n, mult) in candidates {
        let zetas: Vec<Complex64> = (1..=n)
            .filter(|&k| num_integer::gcd(k, n) == 1)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        let expected = mult as u64 * euler_phi(n);
        let mut possible = 0u64;
        let mut target_possible = false;
        for a in 0..roots.len() {
            for b in 0..roots.len() {
                let (c, rad) = ratio_disk(spec, a, b)?;
                if zetas.iter().any(|z| (c - z).norm() <= rad) {
                    possible += (roots[a].multiplicity * roots[b].multiplicity) as u64;
                    if a == j && b == i {
                        target_possible = true;
                    }
                }
            }
        }
        if possible != expected {
            return None;
        }
        if target_possible {
            answer = Some(n);
        }
    }
    Some(answer)
}

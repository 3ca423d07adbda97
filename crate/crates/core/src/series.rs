//! Truncated power series over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Series = Vec<BigRational>;

fn q(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn mul(a: &[BigRational], b: &[BigRational], len: usize) -> Series {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 / a` to `len` terms; requires a nonzero constant term.
pub fn inverse(a: &[BigRational], len: usize) -> Result<Series> {
    let a0 = a.first().filter(|c| !c.is_zero()).ok_or_else(|| Error::NotInvertible("zero constant term".into()))?;
    let inv0 = BigRational::one() / a0;
    let mut out = vec![BigRational::zero(); len];
    if len == 0 {
        return Ok(out);
    }
    out[0] = inv0.clone();
    for n in 1..len {
        let mut acc = BigRational::zero();
        for k in 1..=n.min(a.len() - 1) {
            acc += &a[k] * &out[n - k];
        }
        out[n] = -acc * &inv0;
    }
    Ok(out)
}

/// `exp(Σ_{n>=1} l_n z^n)` where `l` includes an ignored constant slot, via
/// `n c_n = Σ_{k=1}^{n} k l_k c_{n-k}`.
pub fn exp(l: &[BigRational], len: usize) -> Series {
    let mut c = vec![BigRational::zero(); len];
    if len == 0 {
        return c;
    }
    c[0] = BigRational::one();
    for n in 1..len {
        let mut acc = BigRational::zero();
        for k in 1..=n.min(l.len().saturating_sub(1)) {
            if !l[k].is_zero() {
                acc += &l[k] * q(k) * &c[n - k];
            }
        }
        c[n] = acc / q(n);
    }
    c
}

/// `z f'(z) / f(z)` to `len` terms.
pub fn log_derivative(f: &[BigRational], len: usize) -> Result<Series> {
    let zf: Series = (0..len).map(|n| f.get(n).map(|c| c * q(n)).unwrap_or_else(BigRational::zero)).collect();
    let inv = inverse(f, len)?;
    Ok(mul(&zf, &inv, len))
}

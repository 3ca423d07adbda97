//! Square integer matrices with exact arithmetic.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// A `d x d` matrix over the integers, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Rows", into = "Rows")]
pub struct IntegerMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct Rows(#[serde(with = "crate::rational::serde_int_rows")] Vec<Vec<BigInt>>);

impl TryFrom<Rows> for IntegerMatrix {
    type Error = Error;
    fn try_from(rows: Rows) -> Result<Self> {
        IntegerMatrix::new(rows.0)
    }
}

impl From<IntegerMatrix> for Rows {
    fn from(m: IntegerMatrix) -> Self {
        Rows(m.rows())
    }
}

impl TryFrom<Vec<Vec<BigInt>>> for IntegerMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        IntegerMatrix::new(rows)
    }
}

impl From<IntegerMatrix> for Vec<Vec<BigInt>> {
    fn from(m: IntegerMatrix) -> Self {
        m.rows()
    }
}

impl IntegerMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Dimension("matrix must have at least one row".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(IntegerMatrix { dim, entries })
    }

    /// Convenience constructor for small literal matrices.
    ///
    /// Panics if the rows are not square; intended for tests and fixed tables.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntegerMatrix::new(rows).expect("square literal matrix")
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        IntegerMatrix { dim, entries }
    }

    pub fn diagonal(diag: &[BigInt]) -> Self {
        let dim = diag.len();
        let mut m = IntegerMatrix { dim, entries: vec![BigInt::zero(); dim * dim] };
        for (i, x) in diag.iter().enumerate() {
            m.entries[i * dim + i] = x.clone();
        }
        m
    }

    /// Block diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &IntegerMatrix) -> Self {
        let dim = self.dim + other.dim;
        let mut m = IntegerMatrix { dim, entries: vec![BigInt::zero(); dim * dim] };
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.entries[i * dim + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                m.entries[(i + self.dim) * dim + j + self.dim] = other.get(i, j).clone();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.get(j, i).clone());
            }
        }
        IntegerMatrix { dim: d, entries }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntegerMatrix { dim: self.dim, entries: self.entries.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &IntegerMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        IntegerMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// `self^n` by binary powering.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut result = IntegerMatrix::identity(self.dim);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let mut acc = BigRational::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() {
                        acc += x * BigRational::from_integer(a.clone());
                    }
                }
                acc
            })
            .collect()
    }

    pub fn apply_int(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| v.iter().enumerate().map(|(j, x)| self.get(i, j) * x).sum())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        bareiss_det(self.rows())
    }

    /// Matrix of cofactors transposed, so that `A * adj(A) = det(A) * I`.
    pub fn adjugate(&self) -> Self {
        let d = self.dim;
        if d == 1 {
            return IntegerMatrix::identity(1);
        }
        let rows = self.rows();
        let mut entries = vec![BigInt::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                let minor: Vec<Vec<BigInt>> = rows
                    .iter()
                    .enumerate()
                    .filter(|(r, _)| *r != i)
                    .map(|(_, row)| {
                        row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()
                    })
                    .collect();
                let cof = bareiss_det(minor);
                entries[j * d + i] = if (i + j) % 2 == 0 { cof } else { -cof };
            }
        }
        IntegerMatrix { dim: d, entries }
    }

    /// Inverse of a unimodular matrix (det = ±1).
    pub fn inverse_unimodular(&self) -> Result<Self> {
        let det = self.det();
        if det.abs() != BigInt::one() {
            return Err(Error::Singular(format!("determinant {det} is not a unit")));
        }
        Ok(self.adjugate().scale(&det))
    }

    /// Characteristic polynomial `det(xI - A)` by the Faddeev–LeVerrier
    /// recursion; every division is exact over the integers.
    pub fn char_poly(&self) -> IntPolynomial {
        let d = self.dim;
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::one();
        let mut m = IntegerMatrix { dim: d, entries: vec![BigInt::zero(); d * d] };
        for k in 1..=d {
            // M_k = A M_{k-1} + c_{d-k+1} I
            let mut next = self * &m;
            for i in 0..d {
                next.entries[i * d + i] += &coeffs[d - k + 1];
            }
            m = next;
            let tr = (self * &m).trace();
            let (q, r) = (-tr).div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero());
            coeffs[d - k] = q;
        }
        IntPolynomial::new(coeffs)
    }

    /// The `k`-th compound matrix: `k x k` minors indexed by lexicographically
    /// ordered row and column subsets.
    pub fn compound(&self, k: usize) -> Result<Self> {
        let d = self.dim;
        if k == 0 || k > d {
            return Err(Error::OutOfRange(format!("compound order {k} not in 1..={d}")));
        }
        let subsets = k_subsets(d, k);
        let n = subsets.len();
        let mut entries = Vec::with_capacity(n * n);
        for rs in &subsets {
            for cs in &subsets {
                let minor: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| self.get(r, c).clone()).collect())
                    .collect();
                entries.push(bareiss_det(minor));
            }
        }
        Ok(IntegerMatrix { dim: n, entries })
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        self.rows()
            .into_iter()
            .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }
}

impl Mul for &IntegerMatrix {
    type Output = IntegerMatrix;
    fn mul(self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = BigInt::zero();
                for l in 0..d {
                    let a = self.get(i, l);
                    if !a.is_zero() {
                        acc += a * rhs.get(l, j);
                    }
                }
                entries.push(acc);
            }
        }
        IntegerMatrix { dim: d, entries }
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.dim).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..=n.saturating_sub(need) {
            if i >= n {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Fraction-free Gaussian elimination determinant of a square integer array.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Binomial coefficient for small arguments.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

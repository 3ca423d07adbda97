//! Univariate polynomials over the integers and rationals.
//!
//! Coefficients are stored in ascending degree order; the zero polynomial is
//! the empty vector and otherwise the leading coefficient is nonzero.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::bareiss_det;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPolynomial {
    #[serde(with = "crate::rational::serde_int_vec")]
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPolynomial::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial { coeffs: vec![BigInt::one()] }
    }

    /// `x - r`
    pub fn linear_root(r: &BigInt) -> Self {
        IntPolynomial::new(vec![-r.clone(), BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Self {
        IntPolynomial::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    pub fn mul(&self, other: &IntPolynomial) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn sub(&self, other: &IntPolynomial) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn to_rational(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// Content (gcd of coefficients), taken positive.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPolynomial::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Reverse the coefficient order: `x^deg f(1/x)`.
    pub fn reversed(&self) -> Self {
        IntPolynomial::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Render in the variable `var`, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{mag}*{mono}"));
            }
        }
        s
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

/// Polynomial with rational coefficients; the working type for gcds and
/// exact division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lc) => RatPoly::new(self.coeffs.iter().map(|c| c / lc).collect()),
        }
    }

    pub fn derivative(&self) -> Self {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn mul(&self, other: &RatPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return RatPoly::new(Vec::new());
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let lc = divisor.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (RatPoly::new(Vec::new()), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scale to a primitive integer polynomial with positive leading coefficient.
    pub fn to_primitive_int(&self) -> IntPolynomial {
        let den = self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        IntPolynomial::new(self.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect())
            .primitive()
    }
}

/// Square-free decomposition over the rationals (Yun's algorithm).
///
/// Returns pairwise coprime primitive integer factors `f_i` with
/// multiplicities `i`, so that `f` equals `lc * Π f_i^i` up to a constant.
pub fn square_free_decomposition(f: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let a = f.to_rational();
    let da = a.derivative();
    let g = a.gcd(&da);
    let (mut b, _) = a.div_rem(&g);
    let (c, _) = da.div_rem(&g);
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let ai = b.gcd(&d);
        let (b_next, _) = b.div_rem(&ai);
        let (c_next, _) = d.div_rem(&ai);
        if ai.degree().unwrap_or(0) > 0 {
            out.push((ai.to_primitive_int(), i));
        }
        d = c_next.sub(&b_next.derivative());
        b = b_next;
        i += 1;
    }
    out
}

impl RatPoly {
    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }
}

/// Exact integer roots of an integer polynomial, each listed once.
///
/// Candidates are the divisors of the lowest nonzero coefficient (rational
/// root theorem for monic inputs); zero is included when `f(0) = 0`.
pub fn integer_roots(f: &IntPolynomial) -> Vec<BigInt> {
    let mut roots = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let low = f.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.push(BigInt::zero());
    }
    let c0 = f.coeffs()[low].abs();
    let lead = f.leading().abs();
    // Rational roots p/q need q | lead; for the integer case q = 1.
    let _ = lead;
    for d in divisors(&c0) {
        for cand in [d.clone(), -d] {
            if f.eval(&cand).is_zero() {
                roots.push(cand);
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Positive divisors by trial division.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return Vec::new();
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let root = n.sqrt();
    let mut d = BigInt::one();
    while d <= root {
        if (&n % &d).is_zero() {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The `n`-th cyclotomic polynomial, via exact division of `x^n - 1` by the
/// cyclotomic factors of the proper divisors of `n`.
pub fn cyclotomic(n: u64) -> IntPolynomial {
    assert!(n >= 1);
    let mut coeffs = vec![BigRational::zero(); n as usize + 1];
    coeffs[0] = -BigRational::one();
    coeffs[n as usize] = BigRational::one();
    let mut p = RatPoly::new(coeffs);
    for d in 1..n {
        if n.is_multiple_of(d) {
            let (q, r) = p.div_rem(&cyclotomic(d).to_rational());
            debug_assert!(r.is_zero());
            p = q;
        }
    }
    p.to_primitive_int()
}

/// All `n` with `φ(n) <= bound`, in increasing order.
///
/// Uses `φ(n) >= sqrt(n / 2)`, so every such `n` is at most `2 * bound^2`.
pub fn orders_with_totient_at_most(bound: u64) -> Vec<u64> {
    let limit = 2 * bound * bound + 2;
    (1..=limit).filter(|&n| euler_phi(n) <= bound).collect()
}

/// Resultant of two integer polynomials via the Sylvester determinant.
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return BigInt::zero();
    };
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    // n shifted rows of f, m shifted rows of g, highest coefficient first.
    for i in 0..n {
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            rows[n + i][i + k] = c.clone();
        }
    }
    bareiss_det(rows)
}

/// The polynomial `r(x) = Res_y(f(y), x^n f(y/x))` whose roots are all
/// quotients `μ_a / μ_b` of roots of `f` (`n = deg f`).
///
/// Computed by evaluating the resultant at `n^2 + 1` integer points and
/// interpolating exactly.
pub fn ratio_polynomial(f: &IntPolynomial) -> IntPolynomial {
    let n = f.degree().expect("nonzero polynomial");
    let deg_r = n * n;
    let xs: Vec<BigInt> = (0..=deg_r as i64).map(|x| BigInt::from(x + 1)).collect();
    let ys: Vec<BigInt> = xs
        .iter()
        .map(|x| {
            // g(y) = sum_k a_k y^k x^{n-k}
            let g = IntPolynomial::new(
                f.coeffs().iter().enumerate().map(|(k, a)| a * num_traits::pow(x.clone(), n - k)).collect(),
            );
            resultant(f, &g)
        })
        .collect();
    interpolate(&xs, &ys).to_primitive_int_keep_sign()
}

impl RatPoly {
    /// Clear denominators without normalizing the sign or content.
    fn to_primitive_int_keep_sign(&self) -> IntPolynomial {
        let den = self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        IntPolynomial::new(self.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect())
    }
}

/// Lagrange interpolation through integer nodes (Newton divided differences).
pub fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> RatPoly {
    let n = xs.len();
    let x: Vec<BigRational> = xs.iter().map(|v| BigRational::from_integer(v.clone())).collect();
    let mut dd: Vec<BigRational> = ys.iter().map(|v| BigRational::from_integer(v.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&x[i] - &x[i - j]);
        }
    }
    let mut poly = RatPoly::new(vec![dd[n - 1].clone()]);
    for i in (0..n - 1).rev() {
        poly = poly.mul(&RatPoly::new(vec![-x[i].clone(), BigRational::one()]));
        poly = RatPoly::new({
            let mut c = poly.coeffs.clone();
            if c.is_empty() {
                c.push(BigRational::zero());
            }
            c[0] += &dd[i];
            c
        });
    }
    poly
}

/// Multiplicity of the irreducible factor `p` in `f` over the rationals.
pub fn factor_multiplicity(f: &IntPolynomial, p: &IntPolynomial) -> usize {
    let mut cur = f.to_rational();
    let p = p.to_rational();
    let mut m = 0;
    while !cur.is_zero() {
        let (q, r) = cur.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        cur = q;
        m += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(4), IntPolynomial::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), IntPolynomial::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPolynomial::from_i64(&[1, 0, -1, 0, 1]));
        for n in 1..40 {
            assert_eq!(cyclotomic(n).degree().unwrap() as u64, euler_phi(n));
        }
    }

    #[test]
    fn totient_orders() {
        assert_eq!(orders_with_totient_at_most(2), vec![1, 2, 3, 4, 6]);
        let four = orders_with_totient_at_most(4);
        assert_eq!(four, vec![1, 2, 3, 4, 5, 6, 8, 10, 12]);
    }

    #[test]
    fn square_free_parts() {
        // (x-1)^2 (x+2)
        let f = IntPolynomial::from_i64(&[-1, 1]).mul(&IntPolynomial::from_i64(&[-1, 1])).mul(&IntPolynomial::from_i64(&[2, 1]));
        let sf = square_free_decomposition(&f);
        assert_eq!(sf, vec![(IntPolynomial::from_i64(&[2, 1]), 1), (IntPolynomial::from_i64(&[-1, 1]), 2)]);
        let g = IntPolynomial::from_i64(&[5, -4, 1]);
        assert_eq!(square_free_decomposition(&g), vec![(g.clone(), 1)]);
        let cube = IntPolynomial::from_i64(&[-1, 3, -3, 1]);
        assert_eq!(square_free_decomposition(&cube), vec![(IntPolynomial::from_i64(&[-1, 1]), 3)]);
    }

    #[test]
    fn integer_roots_found_exactly() {
        let f = IntPolynomial::from_i64(&[6, -5, 1]);
        assert_eq!(integer_roots(&f), vec![BigInt::from(2), BigInt::from(3)]);
        assert!(integer_roots(&IntPolynomial::from_i64(&[5, -4, 1])).is_empty());
        assert!(integer_roots(&IntPolynomial::from_i64(&[-2, 0, 1])).is_empty());
    }

    #[test]
    fn ratio_polynomial_roots() {
        // f = x^2 - 2x + 2 has roots 1 ± i; ratios are 1, 1, i, -i.
        let f = IntPolynomial::from_i64(&[2, -2, 1]);
        let r = ratio_polynomial(&f);
        assert_eq!(r.degree(), Some(4));
        assert_eq!(factor_multiplicity(&r, &cyclotomic(1)), 2);
        assert_eq!(factor_multiplicity(&r, &cyclotomic(4)), 1);
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(x - 2, x - 5) = 2 - 5 = -3 (sign convention: prod f-roots g(root)).
        let f = IntPolynomial::from_i64(&[-2, 1]);
        let g = IntPolynomial::from_i64(&[-5, 1]);
        assert_eq!(resultant(&f, &g), BigInt::from(-3));
    }

    #[test]
    fn render_polynomial() {
        assert_eq!(IntPolynomial::from_i64(&[5, -4, 1]).to_string(), "x^2 - 4*x + 5");
        assert_eq!(IntPolynomial::from_i64(&[1, -3]).render("z"), "-3*z + 1");
    }
}

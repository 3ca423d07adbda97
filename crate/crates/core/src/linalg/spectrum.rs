//! Certified eigenvalue enclosures.
//!
//! The characteristic polynomial is split into square-free parts over the
//! rationals and integer roots are extracted exactly. Remaining roots are
//! approximated in floating point (Durand–Kerner), refined by Newton steps in
//! exact dyadic arithmetic and certified with the inclusion disk
//! `|z - w| <= m |h(w) / h'(w)|` (every such disk around `w` holds a root of
//! the degree-`m` polynomial `h`). Pairwise disjoint disks then hold exactly
//! one root each.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::cplx::{eval_poly, sqrt_bounds, ComplexRat};
use super::matrix::IntegerMatrix;
use super::poly::{integer_roots, square_free_decomposition, IntPolynomial};
use crate::error::{Error, Result};

/// Working precision ceiling for the refinement loop.
pub const MAX_PRECISION_BITS: u32 = 4096;

/// A certified disk containing exactly one distinct root.
#[derive(Clone, Debug)]
pub struct RootEnclosure {
    pub center: ComplexRat,
    /// Upper bound on the distance from `center` to the root.
    pub radius: BigRational,
    pub multiplicity: usize,
    /// Set when the root is a rational integer, found exactly.
    pub exact: Option<BigInt>,
    pub is_real: bool,
    /// Index (into the spectrum) of the complex-conjugate root, for nonreal roots.
    pub conjugate: Option<usize>,
}

impl RootEnclosure {
    pub fn center_f64(&self) -> Complex64 {
        let (re, im) = self.center.to_f64();
        Complex64::new(re, im)
    }

    pub fn radius_f64(&self) -> f64 {
        // Round the bound up so the float disk still contains the root.
        let r = self.radius.to_f64().unwrap_or(f64::INFINITY);
        if r == 0.0 {
            0.0
        } else {
            r * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE
        }
    }

    /// Rational bounds on the modulus of the root.
    pub fn modulus_bounds(&self, bits: u32) -> (BigRational, BigRational) {
        let (lo, hi) = sqrt_bounds(&self.center.norm_sqr(), bits);
        let lo = &lo - &self.radius;
        let lo = if lo.is_negative() { BigRational::zero() } else { lo };
        (lo, hi + &self.radius)
    }
}

#[derive(Clone, Debug)]
pub struct EigenSpectrum {
    char_poly: IntPolynomial,
    roots: Vec<RootEnclosure>,
    precision: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootSummary {
    pub re: f64,
    pub im: f64,
    pub radius: f64,
    pub multiplicity: usize,
    pub modulus: f64,
    pub exact: Option<String>,
}

impl EigenSpectrum {
    /// Distinct roots sorted by decreasing modulus; conjugate pairs are
    /// adjacent with the positive imaginary part first.
    pub fn roots(&self) -> &[RootEnclosure] {
        &self.roots
    }

    pub fn char_poly(&self) -> &IntPolynomial {
        &self.char_poly
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn dim(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Indices into `roots()` listing every eigenvalue with multiplicity,
    /// i.e. `μ_1, ..., μ_d` in modulus order.
    pub fn with_multiplicity(&self) -> Vec<usize> {
        self.roots.iter().enumerate().flat_map(|(i, r)| std::iter::repeat_n(i, r.multiplicity)).collect()
    }

    pub fn summaries(&self) -> Vec<RootSummary> {
        self.roots
            .iter()
            .map(|r| {
                let c = r.center_f64();
                RootSummary {
                    re: c.re,
                    im: c.im,
                    radius: r.radius_f64(),
                    multiplicity: r.multiplicity,
                    modulus: c.norm(),
                    exact: r.exact.as_ref().map(|x| x.to_string()),
                }
            })
            .collect()
    }

    /// Certified comparison of moduli of two distinct roots: `Some(Greater)`
    /// when `|μ_i| > |μ_j|` is proved, `Some(Equal)` only for structural
    /// equality (same root or conjugates), `None` when undecided.
    pub fn compare_moduli(&self, i: usize, j: usize) -> Option<Ordering> {
        if i == j || self.roots[i].conjugate == Some(j) {
            return Some(Ordering::Equal);
        }
        let bits = self.precision + 8;
        let (lo_i, hi_i) = self.roots[i].modulus_bounds(bits);
        let (lo_j, hi_j) = self.roots[j].modulus_bounds(bits);
        if lo_i > hi_j {
            Some(Ordering::Greater)
        } else if hi_i < lo_j {
            Some(Ordering::Less)
        } else {
            None
        }
    }
}

/// Certified enclosures of the eigenvalues of `a`, each of radius at most
/// `2^-precision`.
pub fn eigen_spectrum(a: &IntegerMatrix, precision: u32) -> Result<EigenSpectrum> {
    polynomial_spectrum(&a.char_poly(), precision)
}

/// Certified root enclosures of a monic integer polynomial.
pub fn polynomial_spectrum(f: &IntPolynomial, precision: u32) -> Result<EigenSpectrum> {
    if !f.is_monic() {
        return Err(Error::PrecisionFailure("root isolation expects a monic polynomial".into()));
    }
    let mut roots: Vec<RootEnclosure> = Vec::new();
    for (factor, mult) in square_free_decomposition(f) {
        let ints = integer_roots(&factor);
        let mut rest = factor.to_rational();
        for r in &ints {
            let (q, rem) = rest.div_rem(&IntPolynomial::linear_root(r).to_rational());
            debug_assert!(rem.is_zero());
            rest = q;
            roots.push(RootEnclosure {
                center: ComplexRat::real(BigRational::from_integer(r.clone())),
                radius: BigRational::zero(),
                multiplicity: mult,
                exact: Some(r.clone()),
                is_real: true,
                conjugate: None,
            });
        }
        if rest.degree().unwrap_or(0) > 0 {
            let h = rest.to_primitive_int();
            for (center, radius, is_real) in isolate_square_free(&h, precision)? {
                roots.push(RootEnclosure { center, radius, multiplicity: mult, exact: None, is_real, conjugate: None });
            }
        }
    }
    check_global_disjointness(&roots)?;
    let roots = sort_and_pair(roots);
    Ok(EigenSpectrum { char_poly: f.clone(), roots, precision })
}

fn disks_disjoint(a: &RootEnclosure, b: &RootEnclosure) -> bool {
    let d2 = (&a.center - &b.center).norm_sqr();
    let rs = &a.radius + &b.radius;
    d2 > &rs * &rs
}

fn check_global_disjointness(roots: &[RootEnclosure]) -> Result<()> {
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if !disks_disjoint(&roots[i], &roots[j]) {
                return Err(Error::PrecisionFailure("root enclosures of coprime factors overlap".into()));
            }
        }
    }
    Ok(())
}

fn sort_and_pair(mut roots: Vec<RootEnclosure>) -> Vec<RootEnclosure> {
    roots.sort_by(|a, b| {
        b.center
            .norm_sqr()
            .cmp(&a.center.norm_sqr())
            .then_with(|| b.center.re.cmp(&a.center.re))
            .then_with(|| b.center.im.cmp(&a.center.im))
    });
    // Conjugates share |center|^2 and real part exactly, so they are adjacent
    // with the upper one first.
    for i in 0..roots.len() {
        if !roots[i].is_real && roots[i].center.im.is_positive() {
            let conj = roots[i].center.conj();
            if let Some(j) = (0..roots.len()).find(|&j| roots[j].center == conj) {
                roots[i].conjugate = Some(j);
                roots[j].conjugate = Some(i);
            }
        }
    }
    roots
}

/// Isolate the roots of a square-free integer polynomial with no rational
/// roots. Returns (center, radius, is_real) for each root.
fn isolate_square_free(h: &IntPolynomial, precision: u32) -> Result<Vec<(ComplexRat, BigRational, bool)>> {
    let m = h.degree().unwrap();
    let approx = durand_kerner(h)?;
    // Keep one representative per conjugate pair; reals are kept as is.
    let mut reps: Vec<Complex64> = Vec::new();
    let mut used = vec![false; approx.len()];
    for i in 0..approx.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let z = approx[i];
        let scale = 1.0 + z.norm();
        if z.im.abs() <= 1e-7 * scale {
            reps.push(Complex64::new(z.re, 0.0));
            continue;
        }
        // Pair with the closest unused approximation to the conjugate.
        let target = z.conj();
        if let Some((j, _)) = approx
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, (w - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
        {
            used[j] = true;
        }
        reps.push(Complex64::new(z.re, z.im.abs()));
    }

    let hp = h.derivative();
    let mut bits = precision.max(53) + 16;
    loop {
        let mut out: Vec<(ComplexRat, BigRational, bool)> = Vec::new();
        let mut ok = true;
        for z0 in &reps {
            let real = z0.im == 0.0;
            match refine_root(h, &hp, *z0, real, bits, precision) {
                Some((c, r)) => {
                    if !real && c.im.abs() <= r {
                        ok = false;
                        break;
                    }
                    out.push((c, r, real));
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            // Expand conjugates and check disjointness and root count.
            let mut all: Vec<(ComplexRat, BigRational)> = Vec::new();
            for (c, r, real) in &out {
                all.push((c.clone(), r.clone()));
                if !real {
                    all.push((c.conj(), r.clone()));
                }
            }
            let disjoint = all.len() == m
                && (0..all.len()).all(|i| {
                    (i + 1..all.len()).all(|j| {
                        let d2 = (&all[i].0 - &all[j].0).norm_sqr();
                        let rs = &all[i].1 + &all[j].1;
                        d2 > &rs * &rs
                    })
                });
            if disjoint {
                let mut res = Vec::new();
                for (c, r, real) in out {
                    if !real {
                        res.push((c.conj(), r.clone(), false));
                    }
                    res.push((c, r, real));
                }
                return Ok(res);
            }
        }
        bits *= 2;
        if bits > MAX_PRECISION_BITS {
            return Err(Error::PrecisionFailure(format!(
                "could not separate the roots of {h} up to {MAX_PRECISION_BITS} bits"
            )));
        }
    }
}

/// Newton refinement in dyadic arithmetic; returns the center and certified
/// radius once the radius is below `2^-target` (and below the working
/// resolution).
fn refine_root(
    h: &IntPolynomial,
    hp: &IntPolynomial,
    z0: Complex64,
    real: bool,
    bits: u32,
    target: u32,
) -> Option<(ComplexRat, BigRational)> {
    let m = BigRational::from_integer(BigInt::from(h.degree().unwrap()));
    let mut z = ComplexRat::from_f64(z0.re, if real { 0.0 } else { z0.im })?.round_dyadic(bits);
    let limit = BigRational::new(BigInt::from(1), BigInt::from(1) << target);
    for _ in 0..(2 * bits.ilog2() + 60) {
        let fz = eval_poly(h.coeffs(), &z);
        let dz = eval_poly(hp.coeffs(), &z);
        if dz.is_zero() {
            return None;
        }
        let step = fz.div(&dz);
        // radius = m |f/f'|, bounded above through a rational square root.
        let (_, step_hi) = sqrt_bounds(&step.norm_sqr(), bits);
        let radius = &m * &step_hi;
        if radius < limit || fz.is_zero() {
            let radius = if fz.is_zero() { BigRational::zero() } else { radius };
            return Some((z, radius));
        }
        z = (&z - &step).round_dyadic(bits);
        if real {
            z.im = BigRational::zero();
        }
    }
    None
}

/// Simultaneous root approximation in double precision.
fn durand_kerner(h: &IntPolynomial) -> Result<Vec<Complex64>> {
    let n = h.degree().unwrap();
    let lead = h.leading().to_f64().unwrap_or(f64::NAN);
    let c: Vec<f64> = h.coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::NAN) / lead).collect();
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::PrecisionFailure("coefficients exceed double range".into()));
    }
    if n == 1 {
        return Ok(vec![Complex64::new(-c[0], 0.0)]);
    }
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let seed = Complex64::new(0.4, 0.9);
    let mut zs: Vec<Complex64> =
        (0..n).map(|k| seed.powu(k as u32) * (bound / seed.norm().powi(k as i32)).min(bound)).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= zs[i] - zs[j];
                }
            }
            if den.norm() == 0.0 {
                zs[i] += Complex64::new(1e-8 * bound, 1e-8 * bound);
                continue;
            }
            let step = eval(zs[i]) / den;
            zs[i] -= step;
            delta = delta.max(step.norm() / (1.0 + zs[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    Ok(zs)
}

/// Newton power sums `s_u = Σ μ^u`, `u = 1..=count`, of a monic polynomial.
pub fn power_sums(f: &IntPolynomial, count: usize) -> Vec<BigInt> {
    assert!(f.is_monic(), "power sums require a monic polynomial");
    let n = f.degree().unwrap_or(0);
    // f = x^n + e_1 x^{n-1} + ... + e_n
    let e = |i: usize| f.coeff(n - i);
    let mut s: Vec<BigInt> = Vec::with_capacity(count);
    for u in 1..=count {
        let mut acc = BigInt::zero();
        for i in 1..u.min(n + 1) {
            acc += e(i) * &s[u - i - 1];
        }
        if u <= n {
            acc += e(u) * BigInt::from(u);
        }
        s.push(-acc);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(z: Complex64, re: f64, im: f64, tol: f64) -> bool {
        (z.re - re).abs() < tol && (z.im - im).abs() < tol
    }

    #[test]
    fn diagonal_spectrum_is_exact() {
        let s = eigen_spectrum(&IntegerMatrix::from_i64(&[[2, 0], [0, 3]]), 64).unwrap();
        assert_eq!(s.roots().len(), 2);
        assert_eq!(s.roots()[0].exact, Some(BigInt::from(3)));
        assert_eq!(s.roots()[1].exact, Some(BigInt::from(2)));
        assert!(s.roots().iter().all(|r| r.radius.is_zero()));
    }

    #[test]
    fn gaussian_pair() {
        let s = eigen_spectrum(&IntegerMatrix::from_i64(&[[2, -1], [1, 2]]), 80).unwrap();
        let r = s.roots();
        assert_eq!(r.len(), 2);
        assert!(close(r[0].center_f64(), 2.0, 1.0, 1e-15));
        assert!(close(r[1].center_f64(), 2.0, -1.0, 1e-15));
        assert_eq!(r[0].conjugate, Some(1));
        assert!(r[0].radius < BigRational::new(BigInt::from(1), BigInt::from(1) << 80));
    }

    #[test]
    fn rotation_spectrum() {
        let s = eigen_spectrum(&IntegerMatrix::from_i64(&[[0, -1], [1, 0]]), 64).unwrap();
        assert!(close(s.roots()[0].center_f64(), 0.0, 1.0, 1e-18));
        assert!(close(s.roots()[1].center_f64(), 0.0, -1.0, 1e-18));
    }

    #[test]
    fn repeated_and_irrational_roots() {
        // (x^2 - 2)^2 (x - 1)
        let f = IntPolynomial::from_i64(&[-2, 0, 1]).mul(&IntPolynomial::from_i64(&[-2, 0, 1])).mul(&IntPolynomial::from_i64(&[-1, 1]));
        let s = polynomial_spectrum(&f, 60).unwrap();
        assert_eq!(s.dim(), 5);
        assert_eq!(s.roots().len(), 3);
        let sq2 = std::f64::consts::SQRT_2;
        assert!(close(s.roots()[0].center_f64(), sq2, 0.0, 1e-15));
        assert!(s.roots()[0].is_real && s.roots()[0].multiplicity == 2);
        assert!(close(s.roots()[1].center_f64(), -sq2, 0.0, 1e-15));
        assert!(close(s.roots()[2].center_f64(), 1.0, 0.0, 1e-300));
    }

    #[test]
    fn power_sums_examples() {
        let ps = |c: &[i64], u| power_sums(&IntPolynomial::from_i64(c), u);
        let v: Vec<i64> = ps(&[5, -4, 1], 2).iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(v, vec![4, 6]);
        let v: Vec<i64> = ps(&[2, -2, 1], 4).iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(v, vec![2, 0, -4, -8]);
        // (x - 1)^3
        let v: Vec<i64> = ps(&[-1, 3, -3, 1], 5).iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(v, vec![3; 5]);
    }
}

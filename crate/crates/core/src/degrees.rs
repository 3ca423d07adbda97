//! Degree sequences `deg_{D,k}(φ^n) = d! Vol(A^n P_D [k], P_D [d-k])`,
//! dynamical degrees and derived generating series.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::matrix::IntegerMatrix;
use crate::linalg::spectrum::eigen_spectrum;
use crate::polytope::{is_ample, linear_image, mixed_volume_vector, polytope_from_divisor, volume, Fan, LatticePolytope, ToricDivisor};
use crate::rational::serde_vec;
use crate::series;

/// Default cap on the decimal size of matrix-power entries.
pub const DEFAULT_DIGIT_GUARD: usize = 1_000_000;

/// The monomial map of an integer matrix with nonzero determinant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialMap {
    matrix: IntegerMatrix,
    #[serde(skip)]
    fan: Option<Fan>,
}

impl MonomialMap {
    pub fn new(matrix: IntegerMatrix) -> Result<MonomialMap> {
        if matrix.det().is_zero() {
            return Err(Error::Singular(format!("{matrix} has determinant 0, so the map is not dominant")));
        }
        Ok(MonomialMap { matrix, fan: None })
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Result<MonomialMap> {
        MonomialMap::new(IntegerMatrix::from_i64(rows))
    }

    pub fn with_fan(mut self, fan: Fan) -> Result<MonomialMap> {
        if fan.dim() != self.matrix.dim() {
            return Err(Error::Dimension(format!("{}-dimensional fan for a {}x{} matrix", fan.dim(), self.dim(), self.dim())));
        }
        self.fan = Some(fan);
        Ok(self)
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn fan(&self) -> Option<&Fan> {
        self.fan.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeSequence {
    pub k: usize,
    pub matrix: IntegerMatrix,
    pub divisor: ToricDivisor,
    /// `deg_{D,k}(φ^n)` for `n = 0..=N`.
    #[serde(with = "serde_vec")]
    pub terms: Vec<BigRational>,
}

impl DegreeSequence {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as integers; `None` if some term is not integral.
    pub fn integer_terms(&self) -> Option<Vec<BigInt>> {
        self.terms.iter().map(|t| t.is_integer().then(|| t.to_integer())).collect()
    }
}

#[derive(Clone, Debug)]
pub struct DegreeOptions {
    /// Skip the geometric engine for `k = 0` and `k = d`.
    pub closed_form_extremes: bool,
    pub digit_guard: usize,
}

impl Default for DegreeOptions {
    fn default() -> Self {
        DegreeOptions { closed_form_extremes: true, digit_guard: DEFAULT_DIGIT_GUARD }
    }
}

fn factorial(d: usize) -> BigRational {
    BigRational::from_integer((1..=d).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

/// Powers `A^0, ..., A^N` with the size guard applied.
pub fn matrix_powers(a: &IntegerMatrix, n_max: usize, digit_guard: usize) -> Result<Vec<IntegerMatrix>> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut cur = IntegerMatrix::identity(a.dim());
    for _ in 0..=n_max {
        let bits = cur.rows().iter().flatten().map(|x| x.bits()).max().unwrap_or(0);
        // bits * log10(2), rounded up
        let digits = (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize;
        if digits > digit_guard {
            return Err(Error::SizeGuard(digits));
        }
        let next = &cur * a;
        out.push(cur);
        cur = next;
    }
    Ok(out)
}

/// `deg_{D,k}(φ^n)` for `n = 0..=N`.
pub fn degree_sequence(map: &MonomialMap, div: &ToricDivisor, k: usize, n_max: usize) -> Result<DegreeSequence> {
    degree_sequence_with(map, div, k, n_max, &DegreeOptions::default())
}

/// Same as [`degree_sequence`] but always through mixed volumes.
pub fn degree_sequence_geometric(map: &MonomialMap, div: &ToricDivisor, k: usize, n_max: usize) -> Result<DegreeSequence> {
    let opts = DegreeOptions { closed_form_extremes: false, ..DegreeOptions::default() };
    degree_sequence_with(map, div, k, n_max, &opts)
}

pub fn degree_sequence_with(
    map: &MonomialMap,
    div: &ToricDivisor,
    k: usize,
    n_max: usize,
    opts: &DegreeOptions,
) -> Result<DegreeSequence> {
    let d = map.dim();
    if div.dim() != d {
        return Err(Error::Dimension(format!("divisor on a {}-dimensional variety, map of dimension {d}", div.dim())));
    }
    if k > d {
        return Err(Error::OutOfRange(format!("k = {k} exceeds dimension {d}")));
    }
    if !is_ample(div) {
        return Err(Error::NotAmple("degree sequences require an ample divisor".into()));
    }
    let p = polytope_from_divisor(div)?;
    let a = map.matrix();
    let top = factorial(d) * volume(&p);
    let terms = if opts.closed_form_extremes && k == 0 {
        vec![top; n_max + 1]
    } else if opts.closed_form_extremes && k == d {
        let det = BigRational::from_integer(a.det().abs());
        let mut t = Vec::with_capacity(n_max + 1);
        let mut cur = top;
        for _ in 0..=n_max {
            let next = &cur * &det;
            t.push(cur);
            cur = next;
        }
        t
    } else {
        let powers = matrix_powers(a, n_max, opts.digit_guard)?;
        let fact = factorial(d);
        powers
            .par_iter()
            .map(|an| degree_term(&p, an, k, &fact))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(DegreeSequence { k, matrix: a.clone(), divisor: div.clone(), terms })
}

fn degree_term(p: &LatticePolytope, an: &IntegerMatrix, k: usize, fact: &BigRational) -> Result<BigRational> {
    let image = linear_image(p, an)?;
    Ok(mixed_volume_vector(&image, p)?.v[k].clone() * fact)
}

/// A certified interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    pub fn exact(x: BigRational) -> Enclosure {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn midpoint(&self) -> f64 {
        use num_traits::ToPrimitive;
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))).to_f64().unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> f64 {
        use num_traits::ToPrimitive;
        (&self.hi - &self.lo).to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        BigRational::from_float(x).is_some_and(|q| self.lo <= q && q <= self.hi)
    }
}

impl Serialize for Enclosure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Enclosure", 2)?;
        st.serialize_field("value", &self.midpoint())?;
        st.serialize_field("radius", &(self.width() / 2.0))?;
        st.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DynamicalDegrees {
    /// `λ_k` for `k = 0..=d`.
    pub lambda: Vec<Enclosure>,
}

/// `λ_k` as the product of the `k` largest eigenvalue moduli.
///
/// The `k`-th largest modulus lies between the `k`-th largest lower bound
/// and the `k`-th largest upper bound of the modulus intervals, so the
/// product interval needs no decision about ties.
pub fn dynamical_degrees(map: &MonomialMap, precision: u32) -> Result<DynamicalDegrees> {
    let a = map.matrix();
    let d = a.dim();
    let spec = eigen_spectrum(a, precision)?;
    let mut lows = Vec::with_capacity(d);
    let mut highs = Vec::with_capacity(d);
    for idx in spec.with_multiplicity() {
        let r = &spec.roots()[idx];
        let (lo, hi) = match &r.exact {
            Some(x) => {
                let m = BigRational::from_integer(x.abs());
                (m.clone(), m)
            }
            None => r.modulus_bounds(precision + 8),
        };
        lows.push(lo);
        highs.push(hi);
    }
    lows.sort_by(|x, y| y.cmp(x));
    highs.sort_by(|x, y| y.cmp(x));
    let mut lambda = vec![Enclosure::exact(BigRational::one())];
    let (mut lo, mut hi) = (BigRational::one(), BigRational::one());
    for k in 0..d {
        lo *= &lows[k];
        hi *= &highs[k];
        lambda.push(Enclosure { lo: lo.clone(), hi: hi.clone() });
    }
    lambda[d] = Enclosure::exact(BigRational::from_integer(a.det().abs()));
    Ok(DynamicalDegrees { lambda })
}

/// Coefficients of `Σ deg_n z^n`.
pub fn series_truncation(seq: &DegreeSequence) -> Vec<BigRational> {
    seq.terms.clone()
}

/// Coefficients `ζ_0..ζ_N` of `exp(Σ_{n>=1} deg_n z^n / n)`.
pub fn zeta_truncation(seq: &DegreeSequence) -> Vec<BigRational> {
    // exp(Σ l_n z^n) with l_n = deg_n / n
    let l: Vec<BigRational> = seq
        .terms
        .iter()
        .enumerate()
        .map(|(n, t)| if n == 0 { BigRational::zero() } else { t / BigRational::from_integer(BigInt::from(n)) })
        .collect();
    series::exp(&l, seq.terms.len())
}

/// Coefficients of `Σ_{n>=1} (Σ_{m<n} deg_m / n) z^n` for `n = 0..=N`
/// (the constant coefficient is 0).
pub fn cesaro_truncation(seq: &DegreeSequence) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero()];
    let mut partial = BigRational::zero();
    for n in 1..seq.terms.len() {
        partial += &seq.terms[n - 1];
        out.push(&partial / BigRational::from_integer(BigInt::from(n)));
    }
    out
}

/// `z ζ'/ζ - (Δ - (D^d))` coefficientwise; all zero when consistent.
pub fn zeta_residual(seq: &DegreeSequence) -> Result<Vec<BigRational>> {
    let z = zeta_truncation(seq);
    let ld = series::log_derivative(&z, z.len())?;
    Ok(ld
        .iter()
        .enumerate()
        .map(|(n, c)| if n == 0 { c.clone() } else { c - &seq.terms[n] })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    fn p2() -> ToricDivisor {
        ToricDivisor::o1_projective(2)
    }

    #[test]
    fn diagonal_map_on_p2() {
        let map = MonomialMap::from_i64(&[[2, 0], [0, 3]]).unwrap();
        let s = degree_sequence(&map, &p2(), 1, 6).unwrap();
        assert_eq!(s.terms, ints(&[1, 3, 9, 27, 81, 243, 729]));
        let s0 = degree_sequence_geometric(&map, &p2(), 0, 4).unwrap();
        assert_eq!(s0.terms, ints(&[1; 5]));
        let s2 = degree_sequence_geometric(&map, &p2(), 2, 4).unwrap();
        assert_eq!(s2.terms, ints(&[1, 6, 36, 216, 1296]));
        assert_eq!(degree_sequence(&map, &p2(), 2, 4).unwrap().terms, s2.terms);
    }

    #[test]
    fn refuses_non_ample_and_bad_k() {
        let map = MonomialMap::from_i64(&[[2, 0], [0, 3]]).unwrap();
        let zero = ToricDivisor::new(Fan::projective_space(2), ints(&[0, 0, 0])).unwrap();
        assert!(matches!(degree_sequence(&map, &zero, 1, 3), Err(Error::NotAmple(_))));
        assert!(matches!(degree_sequence(&map, &p2(), 3, 3), Err(Error::OutOfRange(_))));
        assert!(MonomialMap::from_i64(&[[1, 2], [2, 4]]).is_err());
    }

    #[test]
    fn size_guard_triggers() {
        let map = MonomialMap::from_i64(&[[10, 0], [0, 1]]).unwrap();
        let opts = DegreeOptions { digit_guard: 5, ..DegreeOptions::default() };
        assert_eq!(degree_sequence_with(&map, &p2(), 1, 10, &opts), Err(Error::SizeGuard(6)));
    }

    #[test]
    fn dynamical_degree_examples() {
        let dd = dynamical_degrees(&MonomialMap::from_i64(&[[2, 0], [0, 3]]).unwrap(), 64).unwrap();
        assert_eq!(dd.lambda[1], Enclosure::exact(ints(&[3])[0].clone()));
        assert_eq!(dd.lambda[2], Enclosure::exact(ints(&[6])[0].clone()));
        let dd = dynamical_degrees(&MonomialMap::from_i64(&[[2, -1], [1, 2]]).unwrap(), 64).unwrap();
        assert!((dd.lambda[1].midpoint() - 5f64.sqrt()).abs() < 1e-12);
        assert!(dd.lambda[1].width() < 1e-15);
        assert_eq!(dd.lambda[2], Enclosure::exact(ints(&[5])[0].clone()));
        let dd = dynamical_degrees(&MonomialMap::from_i64(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap(), 64).unwrap();
        assert!(dd.lambda.iter().all(|l| *l == Enclosure::exact(BigRational::one())));
    }

    #[test]
    fn transforms() {
        let map = MonomialMap::from_i64(&[[1, 0], [0, 1]]).unwrap();
        let s = degree_sequence(&map, &p2(), 1, 6).unwrap();
        assert_eq!(zeta_truncation(&s), ints(&[1; 7]));
        assert_eq!(cesaro_truncation(&s), ints(&[0, 1, 1, 1, 1, 1, 1]));
        let map = MonomialMap::from_i64(&[[3, 0], [0, 1]]).unwrap();
        let s = degree_sequence(&map, &p2(), 1, 5).unwrap();
        let c = cesaro_truncation(&s);
        for n in 1..=5i64 {
            assert_eq!(c[n as usize], BigRational::new(BigInt::from(3i64.pow(n as u32) - 1), BigInt::from(2 * n)));
        }
        assert!(zeta_residual(&s).unwrap().iter().all(|x| x.is_zero()));
    }
}

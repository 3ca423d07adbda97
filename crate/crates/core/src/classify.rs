//! Rational-versus-natural-boundary classification of degree generating
//! series, eigenvalue hypothesis checks and linear-recurrence detection.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::degrees::{degree_sequence, DegreeSequence, MonomialMap};
use crate::error::{Error, Result};
use crate::fourier::{self, FourierEvidence};
use crate::linalg::matrix::IntegerMatrix;
use crate::linalg::poly::{integer_roots, IntPolynomial, RatPoly};
use crate::linalg::spectrum::{eigen_spectrum, MAX_PRECISION_BITS};
use crate::linalg::unity::{power_sum_table_2x2, ratio_root_of_unity_order, root_of_unity_witness_2x2, PowerSumCheck};
use crate::polytope::ToricDivisor;
use crate::rational::{format_rational, serde_vec};

/// Terms kept back from the fitting window and used only for verification.
pub const VERIFY_TERMS: usize = 10;

/// `term(n) = Σ_{i=1}^{r} c_i term(n - i)` for every `n >= offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recurrence {
    pub order: usize,
    #[serde(with = "serde_vec")]
    pub coefficients: Vec<BigRational>,
    pub offset: usize,
}

impl Recurrence {
    pub fn holds_on(&self, terms: &[BigRational]) -> bool {
        (self.offset.max(self.order)..terms.len()).all(|n| {
            let pred: BigRational = self.coefficients.iter().enumerate().map(|(i, c)| c * &terms[n - i - 1]).sum();
            pred == terms[n]
        })
    }

    /// Denominator `1 - Σ c_i z^i`.
    pub fn denominator(&self) -> Vec<BigRational> {
        let mut q = vec![BigRational::one()];
        q.extend(self.coefficients.iter().map(|c| -c.clone()));
        q
    }
}

/// Berlekamp–Massey over the rationals: connection polynomial `C` (with
/// `C_0 = 1`) and linear complexity `L`.
pub fn berlekamp_massey(s: &[BigRational]) -> (Vec<BigRational>, usize) {
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = BigRational::one();
    for n in 0..s.len() {
        let mut disc = s[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            disc += &c[i] * &s[n - i];
        }
        if disc.is_zero() {
            m += 1;
            continue;
        }
        let coef = &disc / &bd;
        let t = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, BigRational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = t;
            bd = disc;
            m = 1;
        } else {
            m += 1;
        }
    }
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    (c, l)
}

/// Minimal recurrence of order at most `max_order`, fitted on all but the
/// last [`VERIFY_TERMS`] terms and verified on every term.
pub fn find_recurrence(terms: &[BigRational], max_order: usize) -> Result<Option<Recurrence>> {
    let need = 2 * max_order + VERIFY_TERMS;
    if terms.len() < need {
        return Err(Error::InsufficientTerms(format!("{} terms given, {need} needed for order {max_order}", terms.len())));
    }
    let window = terms.len() - VERIFY_TERMS;
    let (c, l) = berlekamp_massey(&terms[..window]);
    let order = c.len() - 1;
    // The fitted register is unique only when 2L fits in the window.
    if order > max_order || 2 * l > window {
        return Ok(None);
    }
    let rec = Recurrence { order, coefficients: c[1..].iter().map(|x| -x.clone()).collect(), offset: l };
    Ok(rec.holds_on(terms).then_some(rec))
}

/// `numerator / denominator` as a power series in `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub numerator: IntPolynomial,
    pub denominator: IntPolynomial,
}

impl Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RationalFunction", 4)?;
        st.serialize_field("numerator", &self.numerator.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>())?;
        st.serialize_field("denominator", &self.denominator.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>())?;
        st.serialize_field("display", &self.to_string())?;
        st.end()
    }
}

impl std::fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let num = self.numerator.render("z");
        let den = self.denominator.render("z");
        let wrap = |s: String, single: bool| if single { s } else { format!("({s})") };
        let num_single = self.numerator.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1;
        if self.denominator.degree() == Some(0) && self.denominator.coeff(0).is_one() {
            return f.write_str(&num);
        }
        write!(f, "{}/{}", wrap(num, num_single), wrap(den, false))
    }
}

impl RationalFunction {
    /// Reduce by the polynomial gcd and normalize to integer coefficients
    /// with denominator constant term positive.
    pub fn from_rational(num: &[BigRational], den: &[BigRational]) -> RationalFunction {
        let n = RatPoly::new(num.to_vec());
        let d = RatPoly::new(den.to_vec());
        let g = n.gcd(&d);
        let (n, _) = n.div_rem(&g);
        let (d, _) = d.div_rem(&g);
        let lcm = n.coeffs().iter().chain(d.coeffs()).fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let scale = BigRational::from_integer(lcm);
        let to_int = |p: &RatPoly| -> Vec<BigInt> { p.coeffs().iter().map(|c| (c * &scale).to_integer()).collect() };
        let (mut ni, mut di) = (to_int(&n), to_int(&d));
        let content = ni.iter().chain(&di).fold(BigInt::zero(), |g, c| g.gcd(c));
        if !content.is_zero() {
            ni.iter_mut().for_each(|c| *c = &*c / &content);
            di.iter_mut().for_each(|c| *c = &*c / &content);
        }
        if di.first().is_some_and(|c| c.is_negative()) {
            ni.iter_mut().for_each(|c| *c = -&*c);
            di.iter_mut().for_each(|c| *c = -&*c);
        }
        RationalFunction { numerator: IntPolynomial::new(ni), denominator: IntPolynomial::new(di) }
    }

    /// First `len` Taylor coefficients.
    pub fn series(&self, len: usize) -> Result<Vec<BigRational>> {
        let to_r = |p: &IntPolynomial| -> Vec<BigRational> { p.coeffs().iter().cloned().map(BigRational::from_integer).collect() };
        let inv = crate::series::inverse(&to_r(&self.denominator), len)?;
        Ok(crate::series::mul(&to_r(&self.numerator), &inv, len))
    }

    pub fn matches(&self, terms: &[BigRational]) -> bool {
        self.series(terms.len()).is_ok_and(|s| s == terms)
    }
}

/// `P/Q` with `Q = 1 - Σ c_i z^i` and `P = Q·Δ` truncated below the offset.
pub fn rational_function_from_recurrence(rec: &Recurrence, terms: &[BigRational]) -> RationalFunction {
    let q = rec.denominator();
    let cut = rec.offset.max(rec.order);
    let p = crate::series::mul(&q, terms, cut);
    RationalFunction::from_rational(&p, &q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Rational,
    NaturalBoundary,
    HypothesisNotMet,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisReport {
    pub k: usize,
    pub gap_above: Check,
    pub conjugate_pair: Check,
    pub gap_below: Check,
    pub ratio_not_root_of_unity: Check,
    pub pass: bool,
    pub precision_bits: u32,
}

/// Certificate of the exact eigenvalue test in dimension 2.
#[derive(Clone, Debug, Serialize)]
pub struct UnityCertificate {
    pub char_poly: String,
    pub discriminant: String,
    pub table: Vec<PowerSumCheck>,
    pub witness_u: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<RationalFunction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recurrence: Option<Recurrence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<UnityCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<HypothesisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<FourierEvidence>,
    pub terms_used: usize,
    pub report: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Highest `n` computed; `n_max + 1` terms.
    pub n_max: usize,
    pub max_order: usize,
    pub precision: u32,
    /// Fourier modes for natural-boundary evidence (`None` skips it).
    pub fourier_modes: Option<usize>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { n_max: 40, max_order: 12, precision: 128, fourier_modes: Some(50) }
    }
}

fn unity_certificate(a: &IntegerMatrix) -> Result<UnityCertificate> {
    let t = a.trace();
    let q = a.det();
    let disc = &t * &t - BigInt::from(4) * &q;
    Ok(UnityCertificate {
        char_poly: a.char_poly().to_string(),
        discriminant: disc.to_string(),
        table: power_sum_table_2x2(a)?,
        witness_u: if disc.is_negative() { root_of_unity_witness_2x2(a)? } else { None },
    })
}

/// The dichotomy for surfaces: a nonreal eigenvalue pair whose ratio is not
/// a root of unity gives a natural boundary; otherwise the series is
/// rational and a verified closed form is produced.
pub fn classify_surface(map: &MonomialMap, div: &ToricDivisor, opts: &ClassifyOptions) -> Result<ClassificationResult> {
    let a = map.matrix();
    if a.dim() != 2 {
        return Err(Error::Dimension(format!("surface classification needs a 2x2 matrix, got {0}x{0}", a.dim())));
    }
    let seq = degree_sequence(map, div, 1, opts.n_max)?;
    classify_surface_sequence(map, div, &seq, opts)
}

/// As [`classify_surface`], reusing an already computed `k = 1` sequence.
pub fn classify_surface_sequence(
    map: &MonomialMap,
    div: &ToricDivisor,
    seq: &DegreeSequence,
    opts: &ClassifyOptions,
) -> Result<ClassificationResult> {
    let a = map.matrix();
    let cert = unity_certificate(a)?;
    let terms = &seq.terms;
    let mut report = vec![format!("char poly {}, discriminant {}", cert.char_poly, cert.discriminant)];
    let complex = cert.discriminant.starts_with('-');
    if complex && cert.witness_u.is_none() {
        report.push("nonreal eigenvalues; s_u^2 != 4 q^u for every u in {1,2,3,4,6}".into());
        let probe = if terms.len() >= 2 * opts.max_order + VERIFY_TERMS {
            find_recurrence(terms, opts.max_order)?
        } else {
            None
        };
        report.push(match &probe {
            None => format!("no recurrence of order <= {} on {} terms", opts.max_order, terms.len()),
            Some(r) => format!("unexpected recurrence of order {} found on the available terms", r.order),
        });
        let evidence = match opts.fourier_modes {
            Some(m) => Some(fourier::surface_evidence(map, div, m, opts.precision)?),
            None => None,
        };
        return Ok(ClassificationResult {
            verdict: Verdict::NaturalBoundary,
            closed_form: None,
            recurrence: None,
            certificate: Some(cert),
            hypothesis: None,
            evidence,
            terms_used: terms.len(),
            report,
        });
    }
    let (closed, rec) = if complex {
        report.push(format!("nonreal eigenvalues with μ^{} real", cert.witness_u.unwrap()));
        let rec = find_recurrence(terms, opts.max_order)?.ok_or(Error::NoRecurrence(opts.max_order))?;
        (rational_function_from_recurrence(&rec, terms), Some(rec))
    } else {
        report.push("real eigenvalues".into());
        closed_form_real_case_terms(a, terms, opts.max_order)?
    };
    if !closed.matches(terms) {
        return Err(Error::Verification(format!("closed form {closed} does not reproduce the sequence")));
    }
    report.push(format!("closed form {closed} verified on {} terms", terms.len()));
    Ok(ClassificationResult {
        verdict: Verdict::Rational,
        closed_form: Some(closed),
        recurrence: rec,
        certificate: Some(cert),
        hypothesis: None,
        evidence: None,
        terms_used: terms.len(),
        report,
    })
}

/// Closed form of the `k = 1` series when both eigenvalues are real.
pub fn closed_form_real_case(map: &MonomialMap, div: &ToricDivisor, n_max: usize) -> Result<RationalFunction> {
    let seq = degree_sequence(map, div, 1, n_max)?;
    Ok(closed_form_real_case_terms(map.matrix(), &seq.terms, 12)?.0)
}

fn closed_form_real_case_terms(
    a: &IntegerMatrix,
    terms: &[BigRational],
    max_order: usize,
) -> Result<(RationalFunction, Option<Recurrence>)> {
    if a.dim() != 2 {
        return Err(Error::Dimension("real-case closed form is for 2x2 matrices".into()));
    }
    let t = a.trace();
    let q = a.det();
    if &t * &t - BigInt::from(4) * &q < BigInt::zero() {
        return Err(Error::Verification("eigenvalues are not real".into()));
    }
    if integer_roots(&a.char_poly()).len() + usize::from(&t * &t == BigInt::from(4) * &q) >= 2 {
        // Rational eigenvalues: try the reversed characteristic polynomial
        // of A, then that of A^2 (sign alternation from negative eigenvalues).
        let to_r = |p: &IntPolynomial| -> Vec<BigRational> { p.coeffs().iter().cloned().map(BigRational::from_integer).collect() };
        let q1 = to_r(&a.char_poly().reversed());
        let cp2 = (a * a).char_poly().reversed();
        // reversed char poly of A^2 in z^2
        let mut q2 = vec![BigRational::zero(); 2 * cp2.coeffs().len() - 1];
        for (i, c) in cp2.coeffs().iter().enumerate() {
            q2[2 * i] = BigRational::from_integer(c.clone());
        }
        for den in [q1, q2] {
            if let Some(rf) = fit_denominator(&den, terms) {
                return Ok((rf, None));
            }
        }
    }
    let rec = find_recurrence(terms, max_order)?.ok_or(Error::NoRecurrence(max_order))?;
    Ok((rational_function_from_recurrence(&rec, terms), Some(rec)))
}

/// If `den · Δ` vanishes from some offset on, with at least
/// [`VERIFY_TERMS`] checked zero coefficients, return the reduced fraction.
fn fit_denominator(den: &[BigRational], terms: &[BigRational]) -> Option<RationalFunction> {
    let prod = crate::series::mul(den, terms, terms.len());
    let start = den.len() - 1;
    // smallest n0 with prod[n] = 0 for all n >= max(n0, start) in range
    let last_nonzero = (start..prod.len()).rev().find(|&n| !prod[n].is_zero());
    let cut = match last_nonzero {
        None => start,
        Some(n) => n + 1,
    };
    if prod.len() < cut + VERIFY_TERMS {
        return None;
    }
    let rf = RationalFunction::from_rational(&prod[..cut], den);
    rf.matches(terms).then_some(rf)
}

fn structural_equal(spec: &crate::linalg::spectrum::EigenSpectrum, a: usize, b: usize) -> bool {
    a == b || spec.roots()[a].conjugate == Some(b)
}

/// Certified `|μ_a| > |μ_b|` with precision refinement.
fn strict_gap(a: &IntegerMatrix, pos_hi: usize, pos_lo: usize, mut bits: u32) -> Result<(bool, u32)> {
    loop {
        let spec = eigen_spectrum(a, bits)?;
        let idx = spec.with_multiplicity();
        let (ra, rb) = (idx[pos_hi], idx[pos_lo]);
        if structural_equal(&spec, ra, rb) {
            return Ok((false, bits));
        }
        if let (Some(x), Some(y)) = (&spec.roots()[ra].exact, &spec.roots()[rb].exact) {
            return Ok((x.abs() > y.abs(), bits));
        }
        match spec.compare_moduli(ra, rb) {
            Some(Ordering::Greater) => return Ok((true, bits)),
            Some(_) => return Ok((false, bits)),
            None if bits * 2 > MAX_PRECISION_BITS => return Err(Error::UncertifiableGap(bits)),
            None => bits *= 2,
        }
    }
}

/// Checks `|μ_{k-1}| > |μ_k| = |μ_{k+1}| > |μ_{k+2}|` with `μ_k, μ_{k+1}` a
/// conjugate pair whose ratio is not a root of unity.
pub fn check_theorem_a_hypothesis(a: &IntegerMatrix, k: usize, precision: u32) -> Result<HypothesisReport> {
    let d = a.dim();
    if k < 1 || k + 1 > d {
        return Err(Error::OutOfRange(format!("k = {k} must satisfy 1 <= k <= d - 1 = {}", d.saturating_sub(1))));
    }
    if a.det().is_zero() {
        return Err(Error::Singular("det A = 0".into()));
    }
    let spec = eigen_spectrum(a, precision)?;
    let idx = spec.with_multiplicity();
    // 0-based positions of μ_k and μ_{k+1}
    let (pk, pk1) = (k - 1, k);
    let (rk, rk1) = (idx[pk], idx[pk1]);
    let mut used = precision;
    let gap_above = if k == 1 {
        Check { holds: true, detail: "vacuous for k = 1".into() }
    } else {
        let (holds, bits) = strict_gap(a, pk - 1, pk, precision)?;
        used = used.max(bits);
        Check { holds, detail: format!("|μ_{}| > |μ_{k}| {}", k - 1, if holds { "certified" } else { "fails" }) }
    };
    let is_pair = rk != rk1 && spec.roots()[rk].conjugate == Some(rk1);
    let conjugate_pair = Check {
        holds: is_pair,
        detail: if is_pair {
            format!("μ_{k}, μ_{} are complex conjugate", k + 1)
        } else {
            format!("μ_{k}, μ_{} are not a conjugate pair", k + 1)
        },
    };
    let gap_below = if k + 1 == d {
        Check { holds: true, detail: format!("|μ_{}| taken as 0 for k = d - 1", k + 2) }
    } else {
        let (holds, bits) = strict_gap(a, pk1, pk1 + 1, precision)?;
        used = used.max(bits);
        Check { holds, detail: format!("|μ_{}| > |μ_{}| {}", k + 1, k + 2, if holds { "certified" } else { "fails" }) }
    };
    let ratio_not_root_of_unity = if !is_pair {
        Check { holds: false, detail: "not applicable without a conjugate pair".into() }
    } else if d == 2 {
        let w = root_of_unity_witness_2x2(a)?;
        Check {
            holds: w.is_none(),
            detail: match w {
                Some(u) => format!("μ^{u} is real, so μ_2/μ_1 is a root of unity"),
                None => "s_u^2 != 4 q^u for all u in {1,2,3,4,6}".into(),
            },
        }
    } else {
        let order = ratio_root_of_unity_order(spec.char_poly(), rk, rk1)?;
        Check {
            holds: order.is_none(),
            detail: match order {
                Some(n) => format!("μ_{}/μ_{k} is a primitive {n}-th root of unity", k + 1),
                None => "no cyclotomic factor of the ratio polynomial is attributed to this pair".into(),
            },
        }
    };
    let pass = gap_above.holds && conjugate_pair.holds && gap_below.holds && ratio_not_root_of_unity.holds;
    Ok(HypothesisReport { k, gap_above, conjugate_pair, gap_below, ratio_not_root_of_unity, pass, precision_bits: used })
}

/// Dispatch: the surface dichotomy for `d = 2, k = 1`; otherwise the
/// eigenvalue hypothesis, with `HypothesisNotMet` when it fails.
pub fn classify(map: &MonomialMap, div: &ToricDivisor, k: usize, opts: &ClassifyOptions) -> Result<ClassificationResult> {
    let a = map.matrix();
    if a.dim() == 2 && k == 1 {
        return classify_surface(map, div, opts);
    }
    let seq = degree_sequence(map, div, k, opts.n_max)?;
    let hyp = check_theorem_a_hypothesis(a, k, opts.precision)?;
    let mut report = vec![format!("eigenvalue hypothesis at k = {k}: {}", if hyp.pass { "met" } else { "not met" })];
    let probe = if seq.terms.len() >= 2 * opts.max_order + VERIFY_TERMS {
        find_recurrence(&seq.terms, opts.max_order)?
    } else {
        None
    };
    let closed = probe.as_ref().map(|r| rational_function_from_recurrence(r, &seq.terms));
    match &probe {
        Some(r) => report.push(format!("recurrence of order {} verified on {} terms", r.order, seq.terms.len())),
        None => report.push(format!("no recurrence of order <= {} on {} terms", opts.max_order, seq.terms.len())),
    }
    let verdict = if hyp.pass { Verdict::NaturalBoundary } else { Verdict::HypothesisNotMet };
    Ok(ClassificationResult {
        verdict,
        closed_form: if hyp.pass { None } else { closed },
        recurrence: if hyp.pass { None } else { probe },
        certificate: None,
        hypothesis: Some(hyp),
        evidence: None,
        terms_used: seq.terms.len(),
        report,
    })
}

pub fn recurrence_strings(r: &Recurrence) -> Vec<String> {
    r.coefficients.iter().map(format_rational).collect()
}

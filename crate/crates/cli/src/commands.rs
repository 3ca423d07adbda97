use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use toric_core::classify::{classify as classify_general, classify_surface_sequence, ClassifyOptions};
use toric_core::degrees::{cesaro_truncation, dynamical_degrees, zeta_residual, zeta_truncation};
use toric_core::fourier::{
    arc_form_strings, bdj_transform, build_surface_plf_checked, fourier_closed_form, radial_limit_probe, surface_evidence,
    CommutantPlane, FourierEvidence, PiecewiseLinearCircleFunction, N_CHECK,
};
use toric_core::io::{write_degree_csv, Problem};
use toric_core::linalg::spectrum::eigen_spectrum;
use toric_core::modp::{kernel_terms_needed, p_kernel_probe, reduce_mod_p, surface_degrees_mod_p, weak_periodicity_report, ModPSequence};
use toric_core::rational::format_rational;
use toric_core::semiconj::{degree_sequences_equal, find_semiconjugacy_with, verify_semiconjugacy};
use toric_core::{series, Error};

use crate::artifacts::{csv_text, load_problem, problem_json, rational_strings, sequence, CliResult, Output};
use crate::Common;

fn cache(c: &Common) -> Option<&std::path::Path> {
    c.cache.as_deref()
}

pub fn degrees(c: &Common) -> CliResult<Output> {
    let p = load_problem(c)?;
    let seq = sequence(&p, p.k, p.n, cache(c))?;
    let results = json!({ "problem": problem_json(&p), "terms": rational_strings(&seq.terms) });
    Ok(Output::new(results).with("degrees.csv", write_degree_csv(&seq.terms)))
}

pub fn dyndeg(c: &Common) -> CliResult<Output> {
    let p = load_problem(c)?;
    let map = p.map()?;
    let dd = dynamical_degrees(&map, p.precision_bits)?;
    let spec = eigen_spectrum(&p.matrix, p.precision_bits)?;
    let results = json!({
        "problem": problem_json(&p),
        "char_poly": p.matrix.char_poly().to_string(),
        "lambda": dd.lambda,
        "eigenvalues": spec.summaries(),
    });
    Ok(Output::new(results))
}

fn fourier_csv(ev: &FourierEvidence) -> String {
    let rows: Vec<Vec<String>> = ev
        .coefficients
        .iter()
        .map(|c| vec![c.m.to_string(), c.re.to_string(), c.im.to_string(), c.d_re.to_string(), c.d_im.to_string()])
        .collect();
    csv_text(&["m", "re", "im", "d_re", "d_im"], &rows)
}

pub fn classify(c: &Common, max_order: usize, modes: usize) -> CliResult<Output> {
    let p = load_problem(c)?;
    let map = p.map()?;
    let n_max = if c.n.is_some() { p.n } else { 40 };
    let opts = ClassifyOptions { n_max, max_order, precision: p.precision_bits, fourier_modes: Some(modes) };
    let result = if p.matrix.dim() == 2 && p.k == 1 {
        let seq = sequence(&p, 1, n_max, cache(c))?;
        classify_surface_sequence(&map, &p.divisor, &seq, &opts)?
    } else {
        classify_general(&map, &p.divisor, p.k, &opts)?
    };
    let mut out = Output::new(json!({ "problem": problem_json(&p), "classification": result }));
    if let Some(ev) = &result.evidence {
        out = out.with("fourier.csv", fourier_csv(ev));
    }
    Ok(out)
}

fn surface(p: &Problem) -> CliResult<(CommutantPlane, PiecewiseLinearCircleFunction)> {
    let map = p.map()?;
    Ok(build_surface_plf_checked(&map, &p.divisor, p.precision_bits, N_CHECK)?)
}

pub fn fourier(c: &Common, modes: usize) -> CliResult<Output> {
    let p = load_problem(c)?;
    let map = p.map()?;
    let (plane, g) = surface(&p)?;
    let ev = surface_evidence(&map, &p.divisor, modes, p.precision_bits)?;
    let forms: Vec<Value> = arc_form_strings(&g)
        .into_iter()
        .map(|f| f.map(|(a, b)| json!({ "alpha": a, "beta": b })).unwrap_or(Value::Null))
        .collect();
    let results = json!({
        "problem": problem_json(&p),
        "plane": plane,
        "arc_forms": forms,
        "switches": g.switches,
        "evidence": ev,
    });
    Ok(Output::new(results).with("fourier.csv", fourier_csv(&ev)))
}

pub fn radial(c: &Common, m: i64, rhos: &[f64], terms: usize) -> CliResult<Output> {
    let p = load_problem(c)?;
    let (plane, g) = surface(&p)?;
    let modes = m.unsigned_abs() as usize;
    let mut ev = fourier_closed_form(&g, modes);
    ev.theta = plane.theta;
    ev.lambda1 = plane.lambda1;
    let report = radial_limit_probe(&g, &ev, m, rhos, terms)?;
    let rows: Vec<Vec<String>> = report
        .estimates
        .iter()
        .map(|e| vec![e.rho.to_string(), e.re.to_string(), e.im.to_string(), e.error.to_string()])
        .collect();
    let results = json!({ "problem": problem_json(&p), "theta": plane.theta, "lambda1": plane.lambda1, "radial": report });
    Ok(Output::new(results).with("radial.csv", csv_text(&["rho", "re", "im", "error"], &rows)))
}

pub fn bdj(c: &Common) -> CliResult<Output> {
    let p = load_problem(c)?;
    let seq = sequence(&p, 1, p.n, cache(c))?;
    let r = bdj_transform(&seq.terms)?;
    // (1 + Δ_f)(2 - Δ_φ) = 2, coefficientwise.
    let len = seq.terms.len();
    let mut one_plus: Vec<BigRational> = r.coefficients.clone();
    if let Some(c0) = one_plus.first_mut() {
        *c0 += BigRational::one();
    }
    let mut two_minus: Vec<BigRational> = seq.terms.iter().map(|t| -t.clone()).collect();
    if let Some(c0) = two_minus.first_mut() {
        *c0 += BigRational::from_integer(2.into());
    }
    let prod = series::mul(&one_plus, &two_minus, len);
    let identity = prod.iter().enumerate().all(|(n, x)| if n == 0 { *x == BigRational::from_integer(2.into()) } else { x.is_zero() });
    let results = json!({
        "problem": problem_json(&p),
        "delta_phi": rational_strings(&seq.terms),
        "delta_f": rational_strings(&r.coefficients),
        "identity_holds": identity,
        "pole": r.pole,
    });
    Ok(Output::new(results).with("degrees.csv", write_degree_csv(&seq.terms)))
}

fn parse_progressions(specs: &[String]) -> CliResult<Vec<(usize, usize)>> {
    specs
        .iter()
        .map(|s| {
            let (a, b) = s.split_once(':').ok_or_else(|| Error::Parse(format!("progression {s:?} must be a:b")))?;
            let a: usize = a.trim().parse().map_err(|_| Error::Parse(format!("bad a in {s:?}")))?;
            let b: usize = b.trim().parse().map_err(|_| Error::Parse(format!("bad b in {s:?}")))?;
            if a == 0 {
                return Err(Error::OutOfRange(format!("a must be positive in {s:?}")).into());
            }
            Ok((a, b))
        })
        .collect()
}

/// Residues of `count` terms: the circle-function route for surfaces
/// with nonreal eigenvalues, exact reduction otherwise.
fn residues(p: &Problem, prime: u64, count: usize, c: &Common) -> CliResult<(ModPSequence, &'static str)> {
    let map = p.map()?;
    let t = p.matrix.trace();
    let complex = p.matrix.dim() == 2 && p.k == 1 && &t * &t < BigInt::from(4) * p.matrix.det();
    if complex {
        return Ok((surface_degrees_mod_p(&map, &p.divisor, prime, count)?, "circle_function"));
    }
    let seq = sequence(p, p.k, count.saturating_sub(1), cache(c))?;
    Ok((reduce_mod_p(&seq, prime)?, "exact"))
}

pub fn modp(c: &Common, progressions: &[String], k_max: usize, depth: u32, window: usize) -> CliResult<Output> {
    let p = load_problem(c)?;
    if p.primes.is_empty() {
        return Err(Error::Parse("modp needs --primes".into()).into());
    }
    let pairs = parse_progressions(progressions)?;
    let n_terms = p.n + 1;
    let mut reports = Vec::new();
    for &prime in &p.primes {
        let need = if depth > 0 { kernel_terms_needed(prime, depth, window).max(2 * n_terms) } else { 2 * n_terms };
        let (s, route) = residues(&p, prime, need, c)?;
        let probe = weak_periodicity_report(&s, n_terms, &pairs, k_max)?;
        let kernel = if depth > 0 { Some(p_kernel_probe(&s, depth, window)?) } else { None };
        reports.push(json!({
            "p": prime,
            "route": route,
            "head": s.terms.iter().take(n_terms.min(64)).collect::<Vec<_>>(),
            "source": s.source,
            "weak_periodicity": probe,
            "kernel": kernel,
        }));
    }
    Ok(Output::new(json!({ "problem": problem_json(&p), "primes": reports })))
}

pub fn semiconj(c: &Common, matrix_prime: Option<&str>, search_box: i64) -> CliResult<Output> {
    let mut p = load_problem(c)?;
    if let Some(text) = matrix_prime {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("--Aprime: {e}")))?;
        p.matrix_prime = Some(toric_core::io::parse_square(&v)?);
    }
    let ap = p.matrix_prime.clone().ok_or_else(|| Error::Parse("semiconj needs --Aprime or matrix_prime".into()))?;
    if ap.dim() != p.matrix.dim() {
        return Err(Error::Dimension("A and A' differ in size".into()).into());
    }
    let report = find_semiconjugacy_with(&p.matrix, &ap, search_box)?;
    let verified = report.result.as_ref().map(|s| verify_semiconjugacy(&p.matrix, &ap, s));
    let mut q = p.clone();
    q.matrix = ap.clone();
    let s1 = sequence(&p, 1, p.n, cache(c))?;
    let s2 = sequence(&q, 1, p.n, cache(c))?;
    let results = json!({
        "problem": problem_json(&p),
        "matrix_prime": ap,
        "degree_sequences_equal": degree_sequences_equal(&s1, &s2)?,
        "report": report,
        "verified": verified,
    });
    Ok(Output::new(results))
}

pub fn zeta(c: &Common) -> CliResult<Output> {
    let p = load_problem(c)?;
    let seq = sequence(&p, p.k, p.n, cache(c))?;
    let z = zeta_truncation(&seq);
    let residual = zeta_residual(&seq)?;
    let d_top = seq.terms.first().cloned().unwrap_or_else(BigRational::zero);
    let consistent = residual.iter().all(|r| r.is_zero());
    let results = json!({
        "problem": problem_json(&p),
        "zeta": rational_strings(&z),
        "cesaro": rational_strings(&cesaro_truncation(&seq)),
        "log_derivative_consistent": consistent,
        "constant_term": format_rational(&d_top),
    });
    Ok(Output::new(results).with("degrees.csv", write_degree_csv(&seq.terms)))
}

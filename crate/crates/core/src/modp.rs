//! Degree sequences modulo a prime and finite-range probes of weak
//! periodicity and of the p-kernel.

use std::collections::HashSet;
use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::degrees::{DegreeSequence, MonomialMap};
use crate::error::{Error, Result};
use crate::fourier::{build_surface_plf, degree_from_arc, CommutantPlane, PiecewiseLinearCircleFunction};
use crate::polytope::ToricDivisor;

/// Angles closer than this to a breakpoint are resolved exactly.
const ARC_MARGIN: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModPSequence {
    pub p: u64,
    pub terms: Vec<u64>,
    /// Description of the integer sequence that was reduced.
    pub source: String,
}

impl ModPSequence {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The first `n` terms.
    pub fn truncate(&self, n: usize) -> ModPSequence {
        ModPSequence { p: self.p, terms: self.terms[..n.min(self.len())].to_vec(), source: self.source.clone() }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn int_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

/// `x mod p` for a rational whose denominator is prime to `p`.
pub fn rational_mod(x: &BigRational, p: u64) -> Result<u64> {
    let d = int_mod(x.denom(), p);
    if d == 0 {
        return Err(Error::NotInvertible(format!("denominator of {x} divisible by {p}")));
    }
    Ok(mul_mod(int_mod(x.numer(), p), pow_mod(d, p - 2, p), p))
}

pub fn reduce_terms(terms: &[BigRational], p: u64, source: String) -> Result<ModPSequence> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let terms = terms.iter().map(|t| rational_mod(t, p)).collect::<Result<Vec<_>>>()?;
    Ok(ModPSequence { p, terms, source })
}

pub fn reduce_mod_p(seq: &DegreeSequence, p: u64) -> Result<ModPSequence> {
    let source = format!("deg_{{D,{}}} for A = {}, {} terms", seq.k, seq.matrix, seq.len());
    reduce_terms(&seq.terms, p, source)
}

/// `deg(φⁿ) mod p`, `n < count`, for a surface map with nonreal
/// eigenvalues, via `deg(φⁿ) = α s_n + β t_n` on the arc containing `nθ`.
///
/// Residues of `(s_n, t_n)` follow the companion recurrence; near a
/// breakpoint the degree is recomputed exactly as the maximum over all arc
/// forms.
pub fn surface_degrees_mod_p(map: &MonomialMap, div: &ToricDivisor, p: u64, count: usize) -> Result<ModPSequence> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (plane, g) = build_surface_plf(map, div)?;
    let terms = surface_residues(&plane, &g, p, count)?;
    let source = format!("deg_{{D,1}} for A = {}, {count} terms via the circle function", map.matrix());
    Ok(ModPSequence { p, terms, source })
}

fn surface_residues(plane: &CommutantPlane, g: &PiecewiseLinearCircleFunction, p: u64, count: usize) -> Result<Vec<u64>> {
    let forms: Vec<_> = g.arcs.iter().map(|a| a.forms.clone().expect("surface arcs carry exact forms")).collect();
    let residues: Option<Vec<(u64, u64)>> =
        forms.iter().map(|f| Some((rational_mod(&f.alpha, p).ok()?, rational_mod(&f.beta, p).ok()?))).collect();
    let q = int_mod(&(-&plane.det), p);
    let tr = int_mod(&plane.trace, p);
    let theta = plane.theta;
    let exact = |n: usize| -> Result<u64> {
        let (s, t) = plane.power_coordinates(n as u64);
        let best = forms.iter().map(|f| degree_from_arc(f, &s, &t)).max().expect("at least one arc");
        rational_mod(&best, p)
    };
    let mut out = Vec::with_capacity(count);
    // s + t x for xⁿ; x² = tr x - det.
    let (mut s, mut t) = (1 % p, 0u64);
    for n in 0..count {
        let value = match &residues {
            Some(res) => {
                let (j, dist) = g.locate((n as f64 * theta).rem_euclid(TAU));
                if dist > ARC_MARGIN {
                    let (a, b) = res[j];
                    (mul_mod(a, s, p) + mul_mod(b, t, p)) % p
                } else {
                    exact(n)?
                }
            }
            None => exact(n)?,
        };
        out.push(value);
        let next_s = mul_mod(q, t, p);
        let next_t = (s + mul_mod(tr, t, p)) % p;
        s = next_s;
        t = next_t;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ProbeVerdict {
    /// `s_{a(kn+r)+b} = s_{a(kn+r')+b}` at every tested index.
    Witness { k: usize, r: usize, r_prime: usize },
    /// A witness on the first `N` terms that fails on the longer range.
    SpuriousAtLargerN { k: usize, r: usize, r_prime: usize, fails_at: usize },
    /// No triple with `k, r <= K` holds on the available terms; evidence,
    /// not proof.
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicityProbe {
    pub a: usize,
    pub b: usize,
    pub k_max: usize,
    pub n_terms: usize,
    #[serde(flatten)]
    pub verdict: ProbeVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakPeriodicityReport {
    pub p: u64,
    pub n_terms: usize,
    pub probes: Vec<PeriodicityProbe>,
}

/// First `n` (in increasing order) with `a(kn+r)+b < len` and
/// `s_{a(kn+r)+b} != s_{a(kn+r')+b}`; `Ok(tested)` when none.
fn check_triple(s: &[u64], a: usize, b: usize, k: usize, r: usize, rp: usize) -> std::result::Result<usize, usize> {
    let mut n = 0;
    loop {
        let hi = a * (k * n + r) + b;
        if hi >= s.len() {
            return Ok(n);
        }
        let lo = a * (k * n + rp) + b;
        if s[hi] != s[lo] {
            return Err(hi);
        }
        n += 1;
    }
}

/// Lexicographically first `(k, r', r)` with `k <= K`, `r' < r <= K` whose
/// identity holds at every index inside the sequence (and at least one).
pub fn weak_periodicity_search(s: &ModPSequence, a: usize, b: usize, k_max: usize) -> Result<PeriodicityProbe> {
    if a == 0 {
        return Err(Error::OutOfRange("a must be positive".into()));
    }
    let terms = &s.terms;
    let found = (1..=k_max).into_par_iter().find_map_first(|k| {
        for rp in 0..k_max {
            for r in rp + 1..=k_max {
                if let Ok(tested) = check_triple(terms, a, b, k, r, rp) {
                    if tested > 0 {
                        return Some((k, r, rp));
                    }
                }
            }
        }
        None
    });
    let verdict = match found {
        Some((k, r, r_prime)) => ProbeVerdict::Witness { k, r, r_prime },
        None => ProbeVerdict::Exhausted,
    };
    Ok(PeriodicityProbe { a, b, k_max, n_terms: terms.len(), verdict })
}

/// Re-checks a witness on a longer sequence, downgrading it when it fails.
pub fn confirm_witness(probe: &PeriodicityProbe, longer: &ModPSequence) -> PeriodicityProbe {
    let mut out = probe.clone();
    if let ProbeVerdict::Witness { k, r, r_prime } = probe.verdict {
        if let Err(fails_at) = check_triple(&longer.terms, probe.a, probe.b, k, r, r_prime) {
            out.verdict = ProbeVerdict::SpuriousAtLargerN { k, r, r_prime, fails_at };
        }
    }
    out
}

/// Searches on the first `n` terms of `s` and confirms witnesses on up to
/// `2n`.
pub fn weak_periodicity_probe(s: &ModPSequence, n: usize, a: usize, b: usize, k_max: usize) -> Result<PeriodicityProbe> {
    if s.len() < n {
        return Err(Error::InsufficientTerms(format!("{} terms, {n} requested", s.len())));
    }
    let probe = weak_periodicity_search(&s.truncate(n), a, b, k_max)?;
    Ok(confirm_witness(&probe, &s.truncate(2 * n)))
}

pub fn weak_periodicity_report(s: &ModPSequence, n: usize, pairs: &[(usize, usize)], k_max: usize) -> Result<WeakPeriodicityReport> {
    let probes = pairs.iter().map(|&(a, b)| weak_periodicity_probe(s, n, a, b, k_max)).collect::<Result<Vec<_>>>()?;
    Ok(WeakPeriodicityReport { p: s.p, n_terms: n, probes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelProbe {
    pub p: u64,
    pub depth: u32,
    pub window: usize,
    /// Distinct windows using `j <= e`, for `e = 0..=depth`.
    pub counts: Vec<usize>,
}

impl KernelProbe {
    pub fn count(&self) -> usize {
        *self.counts.last().expect("depth 0 is always present")
    }
}

/// Terms needed by [`p_kernel_probe`].
pub fn kernel_terms_needed(p: u64, depth: u32, window: usize) -> usize {
    (p as usize).pow(depth) * window
}

/// Number of distinct windows `(s(p^j n + r))_{n < window}` over
/// `j <= depth`, `0 <= r < p^j`: a lower bound for the p-kernel size.
pub fn p_kernel_probe(s: &ModPSequence, depth: u32, window: usize) -> Result<KernelProbe> {
    let need = kernel_terms_needed(s.p, depth, window);
    if s.len() < need {
        return Err(Error::InsufficientTerms(format!("p-kernel at depth {depth} needs {need} terms, have {}", s.len())));
    }
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut counts = Vec::with_capacity(depth as usize + 1);
    let mut pj = 1usize;
    for _ in 0..=depth {
        let windows: Vec<Vec<u64>> =
            (0..pj).into_par_iter().map(|r| (0..window).map(|n| s.terms[pj * n + r]).collect()).collect();
        seen.extend(windows);
        counts.push(seen.len());
        pj *= s.p as usize;
    }
    Ok(KernelProbe { p: s.p, depth, window, counts })
}

/// Whether every term of `seq` is an integer divisible by `p`.
pub fn all_divisible(seq: &DegreeSequence, p: u64) -> bool {
    let p = BigInt::from(p);
    seq.terms.iter().all(|t| t.is_integer() && (t.numer() % &p).is_zero())
}

/// `|x| mod p` helper for reports.
pub fn abs_mod(x: &BigInt, p: u64) -> u64 {
    int_mod(&x.abs(), p)
}

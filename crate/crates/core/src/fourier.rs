//! Surface analytics: the degree function on the commutant plane viewed as
//! a piecewise-linear function on the unit circle, its Fourier
//! coefficients, and the probes built on them.

use std::f64::consts::{PI, TAU};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::degrees::{degree_sequence, MonomialMap};
use crate::error::{Error, Result};
use crate::linalg::matrix::IntegerMatrix;
use crate::linalg::spectrum::eigen_spectrum;
use crate::polytope::{edge_normal_fan, is_ample, polytope_from_divisor, ToricDivisor};
use crate::rational::{format_rational, serde_int, serde_str, serde_vec};
use crate::series;

/// Terms checked against `λ₁ⁿ g(e^{inθ})` when a circle function is built.
pub const N_CHECK: usize = 30;

/// `x + y √disc` with rational `x, y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticNumber {
    #[serde(with = "serde_str")]
    pub rational: BigRational,
    #[serde(with = "serde_str")]
    pub sqrt_coeff: BigRational,
}

impl QuadraticNumber {
    fn rat(x: BigRational) -> QuadraticNumber {
        QuadraticNumber { rational: x, sqrt_coeff: BigRational::zero() }
    }

    /// Value for a negative discriminant, `√disc = i √|disc|`.
    pub fn to_complex(&self, disc: &BigInt) -> Complex64 {
        let s = disc.abs().to_f64().unwrap_or(f64::INFINITY).sqrt();
        let re = self.rational.to_f64().unwrap_or(f64::NAN);
        let y = self.sqrt_coeff.to_f64().unwrap_or(f64::NAN);
        if disc.is_negative() {
            Complex64::new(re, y * s)
        } else {
            Complex64::new(re + y * s, 0.0)
        }
    }
}

/// `Π = ℝ·Id ⊕ ℝ·A` for a 2×2 matrix with nonreal eigenvalues, identified
/// with `ℂ` by `s·Id + t·A ↦ s + t μ₁`.
#[derive(Clone, Debug, Serialize)]
pub struct CommutantPlane {
    #[serde(skip)]
    pub matrix: IntegerMatrix,
    #[serde(with = "serde_int")]
    pub trace: BigInt,
    #[serde(with = "serde_int")]
    pub det: BigInt,
    #[serde(with = "serde_int")]
    pub disc: BigInt,
    /// Rows are left eigenvectors for `μ₁` and `μ̄₁`.
    pub diagonalizer: [[QuadraticNumber; 2]; 2],
    pub mu1: [f64; 2],
    pub mu1_radius: f64,
    pub theta: f64,
    pub lambda1: f64,
}

impl CommutantPlane {
    pub fn new(a: &IntegerMatrix, precision: u32) -> Result<CommutantPlane> {
        if a.dim() != 2 {
            return Err(Error::Dimension(format!("commutant plane needs a 2x2 matrix, got {0}x{0}", a.dim())));
        }
        let trace = a.trace();
        let det = a.det();
        let disc = &trace * &trace - BigInt::from(4) * &det;
        if !disc.is_negative() {
            return Err(Error::RealEigenvalues(format!("discriminant {disc} >= 0")));
        }
        let spec = eigen_spectrum(a, precision)?;
        let root = spec
            .roots()
            .iter()
            .find(|r| r.center_f64().im > 0.0)
            .ok_or_else(|| Error::RealEigenvalues("no eigenvalue in the upper half plane".into()))?;
        let mu = root.center_f64();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let t2 = BigRational::from_integer(trace.clone()) * &half;
        let a00 = BigRational::from_integer(a.get(0, 0).clone());
        let c = QuadraticNumber::rat(BigRational::from_integer(a.get(1, 0).clone()));
        let mu_minus_a = |sign: i64| QuadraticNumber {
            rational: &t2 - &a00,
            sqrt_coeff: &half * BigRational::from_integer(BigInt::from(sign)),
        };
        let plane = CommutantPlane {
            matrix: a.clone(),
            trace,
            det,
            disc,
            diagonalizer: [[c.clone(), mu_minus_a(1)], [c, mu_minus_a(-1)]],
            mu1: [mu.re, mu.im],
            mu1_radius: root.radius_f64(),
            theta: mu.arg(),
            lambda1: mu.norm(),
        };
        plane.check_diagonalizer()?;
        Ok(plane)
    }

    pub fn mu1(&self) -> Complex64 {
        Complex64::new(self.mu1[0], self.mu1[1])
    }

    /// `Q A = diag(μ₁, μ̄₁) Q`, checked in floating point.
    pub fn check_diagonalizer(&self) -> Result<()> {
        let a = self.matrix.to_f64_rows();
        let mu = [self.mu1(), self.mu1().conj()];
        let mut worst: f64 = 0.0;
        for (row, m) in self.diagonalizer.iter().zip(mu) {
            let q: Vec<Complex64> = row.iter().map(|x| x.to_complex(&self.disc)).collect();
            for j in 0..2 {
                let lhs = q[0] * a[0][j] + q[1] * a[1][j];
                let rhs = m * q[j];
                worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
            }
        }
        if worst > 1e-12 {
            return Err(Error::Verification(format!("diagonalizer residual {worst:e}")));
        }
        Ok(())
    }

    /// `(s_n, t_n)` with `Aⁿ = s_n Id + t_n A`.
    pub fn power_coordinates(&self, n: u64) -> (BigInt, BigInt) {
        companion_power(&self.trace, &self.det, n)
    }
}

/// `(s_n, t_n)` for `xⁿ mod x² - t x + q`, by binary powering.
pub fn companion_power(trace: &BigInt, det: &BigInt, mut n: u64) -> (BigInt, BigInt) {
    // (s, t) represents s + t x; multiply using x² = t x - q.
    let mul = |(a, b): &(BigInt, BigInt), (c, d): &(BigInt, BigInt)| {
        let bd = b * d;
        (a * c - &bd * det, a * d + b * c + &bd * trace)
    };
    let mut acc = (BigInt::one(), BigInt::zero());
    let mut base = (BigInt::zero(), BigInt::one());
    while n > 0 {
        if n & 1 == 1 {
            acc = mul(&acc, &base);
        }
        n >>= 1;
        if n > 0 {
            base = mul(&base, &base);
        }
    }
    acc
}

/// `g(z) = b z + c z̄` on `arg z ∈ [start, end)`.
#[derive(Clone, Debug, Serialize)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
    pub b: [f64; 2],
    pub c: [f64; 2],
    /// Exact `(α, β)` with `h(s Id + t A) = α s + β t` on the arc.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forms: Option<ArcForms>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArcForms {
    #[serde(with = "serde_str")]
    pub alpha: BigRational,
    #[serde(with = "serde_str")]
    pub beta: BigRational,
    /// Active vertex per edge.
    pub active: Vec<usize>,
}

impl Arc {
    pub fn b(&self) -> Complex64 {
        Complex64::new(self.b[0], self.b[1])
    }

    pub fn c(&self) -> Complex64 {
        Complex64::new(self.c[0], self.c[1])
    }

    pub fn eval(&self, x: f64) -> f64 {
        let z = Complex64::from_polar(1.0, x);
        (self.b() * z + self.c() * z.conj()).re
    }
}

/// A switch of the active vertex of one edge at a breakpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Switch {
    pub edge: usize,
    pub from: usize,
    pub to: usize,
}

/// Per edge, weighted linear forms `(α, γ)` in `z = x + iy`; the circle
/// function is `Σ_e max_i (α_i x + γ_i y)`.
#[derive(Clone, Debug)]
struct EdgeForms {
    edges: Vec<Vec<(f64, f64)>>,
}

impl EdgeForms {
    fn eval(&self, x: f64) -> f64 {
        let (s, c) = x.sin_cos();
        self.edges.iter().map(|forms| forms.iter().map(|&(a, g)| a * c + g * s).fold(f64::NEG_INFINITY, f64::max)).sum()
    }

    fn active(&self, x: f64) -> Vec<usize> {
        let (s, c) = x.sin_cos();
        self.edges
            .iter()
            .map(|forms| {
                let mut best = 0;
                for (i, &(a, g)) in forms.iter().enumerate() {
                    let (ba, bg) = forms[best];
                    if a * c + g * s > ba * c + bg * s {
                        best = i;
                    }
                }
                best
            })
            .collect()
    }
}

/// A continuous piecewise-linear function on the unit circle.
#[derive(Clone, Debug, Serialize)]
pub struct PiecewiseLinearCircleFunction {
    /// `α₀ < α₁ < … < α_t = α₀ + 2π`.
    pub breakpoints: Vec<f64>,
    pub arcs: Vec<Arc>,
    /// Active-vertex changes at `α₁, …, α_t`, when built from a polygon.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub switches: Vec<Vec<Switch>>,
    #[serde(skip)]
    direct: Option<EdgeForms>,
}

impl PiecewiseLinearCircleFunction {
    /// From explicit breakpoints (`t + 1` values spanning `2π`) and arc
    /// coefficients `(b_j, c_j)`.
    pub fn from_arcs(breakpoints: Vec<f64>, coeffs: Vec<(Complex64, Complex64)>) -> Result<PiecewiseLinearCircleFunction> {
        if breakpoints.len() != coeffs.len() + 1 || coeffs.is_empty() {
            return Err(Error::LengthMismatch(breakpoints.len(), coeffs.len() + 1));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Parse("breakpoints must increase strictly".into()));
        }
        let span = breakpoints[breakpoints.len() - 1] - breakpoints[0];
        if (span - TAU).abs() > 1e-12 {
            return Err(Error::Parse(format!("breakpoints span {span}, expected 2π")));
        }
        let arcs = coeffs
            .iter()
            .enumerate()
            .map(|(j, (b, c))| Arc {
                start: breakpoints[j],
                end: breakpoints[j + 1],
                b: [b.re, b.im],
                c: [c.re, c.im],
                forms: None,
            })
            .collect();
        Ok(PiecewiseLinearCircleFunction { breakpoints, arcs, switches: Vec::new(), direct: None })
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    fn reduce(&self, x: f64) -> f64 {
        let a0 = self.breakpoints[0];
        let r = (x - a0).rem_euclid(TAU) + a0;
        // rem_euclid can round up to exactly 2π.
        if r >= a0 + TAU {
            a0
        } else {
            r
        }
    }

    /// Index of the arc containing angle `x`, and the distance from `x` to
    /// the nearest breakpoint.
    pub fn locate(&self, x: f64) -> (usize, f64) {
        let r = self.reduce(x);
        let j = match self.breakpoints.binary_search_by(|b| b.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(self.arcs.len() - 1),
            Err(i) => i - 1,
        };
        let arc = &self.arcs[j];
        (j, (r - arc.start).min(arc.end - r))
    }

    /// `g(e^{ix})` from the arc table.
    pub fn eval(&self, x: f64) -> f64 {
        self.arcs[self.locate(x).0].eval(x)
    }

    /// `g(e^{ix})` evaluated without the arc table when the defining
    /// linear forms are known.
    pub fn eval_direct(&self, x: f64) -> f64 {
        match &self.direct {
            Some(f) => f.eval(x),
            None => self.eval(x),
        }
    }

    /// Homogeneous extension `|z| g(z/|z|)`.
    pub fn eval_homogeneous(&self, z: Complex64) -> f64 {
        if z.norm() == 0.0 {
            return 0.0;
        }
        let arc = &self.arcs[self.locate(z.arg()).0];
        (arc.b() * z + arc.c() * z.conj()).re
    }

    /// Worst mismatch of adjacent arcs at the breakpoints.
    pub fn continuity_defect(&self) -> f64 {
        let t = self.arcs.len();
        (0..t)
            .map(|j| {
                let next = &self.arcs[(j + 1) % t];
                let x = self.arcs[j].end;
                (self.arcs[j].eval(x) - next.eval(x)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `max_j |c_j - conj(b_j)|`.
    pub fn reality_defect(&self) -> f64 {
        self.arcs.iter().map(|a| (a.c() - a.b().conj()).norm()).fold(0.0, f64::max)
    }

    /// Worst violation of `h((x+y)/2) <= (h(x)+h(y))/2` over the given pairs,
    /// relative to `|h(x)| + |h(y)| + 1`.
    pub fn convexity_defect(&self, pairs: &[(Complex64, Complex64)]) -> f64 {
        pairs
            .iter()
            .map(|&(x, y)| {
                let hx = self.eval_homogeneous(x);
                let hy = self.eval_homogeneous(y);
                let mid = self.eval_homogeneous((x + y) * 0.5);
                (mid - (hx + hy) / 2.0) / (hx.abs() + hy.abs() + 1.0)
            })
            .fold(0.0, f64::max)
    }

    fn scale(&self) -> f64 {
        self.arcs.iter().map(|a| a.b().norm() + a.c().norm()).fold(0.0, f64::max).max(1.0)
    }
}

/// The degree function of a surface map as a circle function:
/// `deg(φⁿ) = λ₁ⁿ g(e^{inθ})`.
pub fn build_surface_plf(map: &MonomialMap, div: &ToricDivisor) -> Result<(CommutantPlane, PiecewiseLinearCircleFunction)> {
    build_surface_plf_checked(map, div, 128, N_CHECK)
}

/// [`build_surface_plf`] with explicit eigenvalue precision and check length.
pub fn build_surface_plf_checked(
    map: &MonomialMap,
    div: &ToricDivisor,
    precision: u32,
    n_check: usize,
) -> Result<(CommutantPlane, PiecewiseLinearCircleFunction)> {
    if map.dim() != 2 || div.dim() != 2 {
        return Err(Error::Dimension("circle functions are defined for surfaces".into()));
    }
    if !is_ample(div) {
        return Err(Error::NotAmple("the degree function needs an ample divisor".into()));
    }
    let plane = CommutantPlane::new(map.matrix(), precision)?;
    let plf = circle_function(&plane, div)?;
    let seq = degree_sequence(map, div, 1, n_check)?;
    let worst = master_identity_defect(&plane, &plf, &seq.terms);
    if !(worst <= 1e-9) {
        return Err(Error::Verification(format!("|deg_n - λ₁ⁿ g(e^(inθ))| / deg_n reached {worst:e} for n <= {n_check}")));
    }
    Ok((plane, plf))
}

/// `max_n |deg_n - λ₁ⁿ g(e^{inθ})| / deg_n` (absolute where `deg_n = 0`).
pub fn master_identity_defect(plane: &CommutantPlane, plf: &PiecewiseLinearCircleFunction, terms: &[BigRational]) -> f64 {
    terms
        .iter()
        .enumerate()
        .map(|(n, d)| {
            let exact = d.to_f64().unwrap_or(f64::INFINITY);
            let approx = plane.lambda1.powi(n as i32) * plf.eval(n as f64 * plane.theta);
            let diff = (exact - approx).abs();
            if exact == 0.0 {
                diff
            } else {
                diff / exact.abs()
            }
        })
        .fold(0.0, f64::max)
}

fn circle_function(plane: &CommutantPlane, div: &ToricDivisor) -> Result<PiecewiseLinearCircleFunction> {
    let p = polytope_from_divisor(div)?;
    let fan = edge_normal_fan(&p)?;
    let verts = p.vertices();
    let a = &plane.matrix;
    let p_re = plane.mu1[0];
    let q_im = plane.mu1[1];
    // Exact (α, β) per edge and vertex: ℓ_e ⟨m_i, n_e⟩ and ℓ_e ⟨A m_i, n_e⟩.
    let mut exact: Vec<Vec<(BigRational, BigRational)>> = Vec::new();
    let mut forms = EdgeForms { edges: Vec::new() };
    for (normal, len) in &fan.edges {
        let n: Vec<BigRational> = normal.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let mut row = Vec::new();
        let mut frow = Vec::new();
        for m in verts {
            let am = a.apply(m);
            let alpha = len * (&m[0] * &n[0] + &m[1] * &n[1]);
            let beta = len * (&am[0] * &n[0] + &am[1] * &n[1]);
            let af = alpha.to_f64().unwrap_or(f64::NAN);
            let bf = beta.to_f64().unwrap_or(f64::NAN);
            frow.push((af, (bf - af * p_re) / q_im));
            row.push((alpha, beta));
        }
        exact.push(row);
        forms.edges.push(frow);
    }
    // Candidate breakpoints: α_i cos x + γ_i sin x = α_j cos x + γ_j sin x.
    let mut cand: Vec<f64> = Vec::new();
    for frow in &forms.edges {
        for i in 0..frow.len() {
            for j in i + 1..frow.len() {
                let da = frow[i].0 - frow[j].0;
                let dg = frow[i].1 - frow[j].1;
                if da == 0.0 && dg == 0.0 {
                    continue;
                }
                // da cos x + dg sin x = r cos(x - φ), φ = atan2(dg, da).
                let phi = dg.atan2(da);
                cand.push((phi + PI / 2.0).rem_euclid(TAU));
                cand.push((phi - PI / 2.0).rem_euclid(TAU));
            }
        }
    }
    cand.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cand.dedup_by(|x, y| (*x - *y).abs() < 1e-13);
    if cand.len() > 1 && cand[0] + TAU - cand[cand.len() - 1] < 1e-13 {
        cand.pop();
    }
    if cand.is_empty() {
        cand.push(0.0);
    }
    let k = cand.len();
    let pieces: Vec<(f64, f64, Vec<usize>)> = (0..k)
        .map(|j| {
            let start = cand[j];
            let end = if j + 1 < k { cand[j + 1] } else { cand[0] + TAU };
            (start, end, forms.active((start + end) / 2.0))
        })
        .collect();
    // Merge neighbours with the same active set, cyclically.
    let mut merged: Vec<(f64, f64, Vec<usize>)> = Vec::new();
    for piece in pieces {
        match merged.last_mut() {
            Some(last) if last.2 == piece.2 => last.1 = piece.1,
            _ => merged.push(piece),
        }
    }
    if merged.len() > 1 && merged[0].2 == merged[merged.len() - 1].2 {
        let last = merged.pop().unwrap();
        merged[0].0 = last.0 - TAU;
    }
    if merged.len() == 1 {
        merged[0].1 = merged[0].0 + TAU;
    }
    let mut arcs = Vec::with_capacity(merged.len());
    for (start, end, active) in &merged {
        let mut alpha = BigRational::zero();
        let mut beta = BigRational::zero();
        let mut af = 0.0;
        let mut gf = 0.0;
        for (e, &i) in active.iter().enumerate() {
            alpha += &exact[e][i].0;
            beta += &exact[e][i].1;
            af += forms.edges[e][i].0;
            gf += forms.edges[e][i].1;
        }
        // α x + γ y = b z + c z̄ with b = (α - iγ)/2.
        let b = Complex64::new(af / 2.0, -gf / 2.0);
        arcs.push(Arc {
            start: *start,
            end: *end,
            b: [b.re, b.im],
            c: [b.re, -b.im],
            forms: Some(ArcForms { alpha, beta, active: active.clone() }),
        });
    }
    let mut breakpoints: Vec<f64> = arcs.iter().map(|a| a.start).collect();
    breakpoints.push(arcs[0].start + TAU);
    let t = arcs.len();
    let switches = if t == 1 {
        Vec::new()
    } else {
        (0..t)
            .map(|j| {
                let from = &arcs[j].forms.as_ref().unwrap().active;
                let to = &arcs[(j + 1) % t].forms.as_ref().unwrap().active;
                from.iter()
                    .zip(to)
                    .enumerate()
                    .filter(|(_, (f, t))| f != t)
                    .map(|(edge, (&from, &to))| Switch { edge, from, to })
                    .collect()
            })
            .collect()
    };
    Ok(PiecewiseLinearCircleFunction { breakpoints, arcs, switches, direct: Some(forms) })
}

/// `deg(φⁿ) = α s_n + β t_n` on the arc containing `nθ`.
pub fn degree_from_arc(forms: &ArcForms, s: &BigInt, t: &BigInt) -> BigRational {
    &forms.alpha * BigRational::from_integer(s.clone()) + &forms.beta * BigRational::from_integer(t.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FourierCoefficient {
    pub m: i64,
    pub re: f64,
    pub im: f64,
    pub d_re: f64,
    pub d_im: f64,
}

impl FourierCoefficient {
    pub fn a(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn d(&self) -> Complex64 {
        Complex64::new(self.d_re, self.d_im)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub modes: usize,
    pub n_max: usize,
    pub max_residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialEstimate {
    pub rho: f64,
    pub re: f64,
    pub im: f64,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RadialReport {
    pub m: i64,
    pub terms: usize,
    pub target: [f64; 2],
    pub estimates: Vec<RadialEstimate>,
    /// Error decreases strictly along the given `ρ` order.
    pub monotone: bool,
}

/// Coefficients `a_m`, `|m| <= M`, with `g(e^{ix}) = Σ a_m e^{imx}`.
#[derive(Clone, Debug, Serialize)]
pub struct FourierEvidence {
    pub theta: f64,
    pub lambda1: f64,
    pub modes: usize,
    pub breakpoints: Vec<f64>,
    pub arcs: Vec<Arc>,
    /// Ordered by `m = -M..=M`.
    pub coefficients: Vec<FourierCoefficient>,
    pub reality_defect: f64,
    pub continuity_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature_defect: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<ResidualReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub radial: Vec<RadialReport>,
}

impl FourierEvidence {
    pub fn coefficient(&self, m: i64) -> Option<Complex64> {
        let idx = m + self.modes as i64;
        (idx >= 0).then(|| self.coefficients.get(idx as usize).map(|c| c.a())).flatten()
    }

    /// `Σ_{|m| <= M} a_m e^{imx}`.
    pub fn synthesize(&self, x: f64, modes: usize) -> f64 {
        let m_max = modes.min(self.modes) as i64;
        self.coefficients
            .iter()
            .filter(|c| c.m.abs() <= m_max)
            .map(|c| (c.a() * Complex64::from_polar(1.0, c.m as f64 * x)).re)
            .sum()
    }

    pub fn partial_abs_sum(&self, modes: usize) -> f64 {
        self.coefficients.iter().filter(|c| c.m.unsigned_abs() as usize <= modes).map(|c| c.a().norm()).sum()
    }
}

/// `∫_x0^x1 e^{ikx} dx`, with the degenerate `k = 0` case.
fn arc_exp_integral(k: i64, x0: f64, x1: f64) -> Complex64 {
    if k == 0 {
        return Complex64::new(x1 - x0, 0.0);
    }
    let kf = k as f64;
    (Complex64::from_polar(1.0, kf * x1) - Complex64::from_polar(1.0, kf * x0)) / Complex64::new(0.0, kf)
}

/// `a_m = (1/2π) Σ_j [b_j ∫ e^{i(1-m)x} + c_j ∫ e^{-i(1+m)x}]` over the arcs.
pub fn closed_form_coefficient(g: &PiecewiseLinearCircleFunction, m: i64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for arc in &g.arcs {
        acc += arc.b() * arc_exp_integral(1 - m, arc.start, arc.end);
        acc += arc.c() * arc_exp_integral(-1 - m, arc.start, arc.end);
    }
    acc / TAU
}

/// `d_m = (1/2π)[i(m+1) Σ b_j (A_{j+1}^{1-m} - A_j^{1-m}) + i(m-1) Σ c_j (A_{j+1}^{-1-m} - A_j^{-1-m})]`,
/// so that `a_m (m² - 1) = d_m` for `m ≠ ±1`.
pub fn d_coefficient(g: &PiecewiseLinearCircleFunction, m: i64) -> Complex64 {
    let pw = |k: i64, x: f64| Complex64::from_polar(1.0, k as f64 * x);
    let mut sb = Complex64::new(0.0, 0.0);
    let mut sc = Complex64::new(0.0, 0.0);
    for arc in &g.arcs {
        sb += arc.b() * (pw(1 - m, arc.end) - pw(1 - m, arc.start));
        sc += arc.c() * (pw(-1 - m, arc.end) - pw(-1 - m, arc.start));
    }
    let i = Complex64::new(0.0, 1.0);
    (i * (m + 1) as f64 * sb + i * (m - 1) as f64 * sc) / TAU
}

/// Closed-form coefficients for `|m| <= M`.
pub fn fourier_closed_form(g: &PiecewiseLinearCircleFunction, modes: usize) -> FourierEvidence {
    let mm = modes as i64;
    let coefficients: Vec<FourierCoefficient> = (-mm..=mm)
        .into_par_iter()
        .map(|m| {
            let a = closed_form_coefficient(g, m);
            let d = d_coefficient(g, m);
            FourierCoefficient { m, re: a.re, im: a.im, d_re: d.re, d_im: d.im }
        })
        .collect();
    let reality_defect = (0..=mm)
        .map(|m| {
            let pos = coefficients[(mm + m) as usize].a();
            let neg = coefficients[(mm - m) as usize].a();
            (neg - pos.conj()).norm()
        })
        .fold(0.0, f64::max);
    FourierEvidence {
        theta: f64::NAN,
        lambda1: f64::NAN,
        modes,
        breakpoints: g.breakpoints.clone(),
        arcs: g.arcs.clone(),
        coefficients,
        reality_defect,
        continuity_defect: g.continuity_defect(),
        quadrature_defect: None,
        residuals: Vec::new(),
        radial: Vec::new(),
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn panel<F: Fn(f64) -> Complex64>(f: &F, nodes: &[(f64, f64)], a: f64, b: f64) -> Complex64 {
    let h = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    nodes.iter().map(|&(x, w)| f(mid + h * x) * w).sum::<Complex64>() * h
}

fn adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    nodes: &[(f64, f64)],
    a: f64,
    b: f64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Option<Complex64> {
    let m = (a + b) / 2.0;
    let left = panel(f, nodes, a, m);
    let right = panel(f, nodes, m, b);
    let split = left + right;
    if (split - whole).norm() <= tol {
        return Some(split);
    }
    if depth == 0 {
        return None;
    }
    Some(adaptive(f, nodes, a, m, left, tol / 2.0, depth - 1)? + adaptive(f, nodes, m, b, right, tol / 2.0, depth - 1)?)
}

/// `(1/2π) ∫ g(e^{ix}) e^{-imx} dx` by adaptive Gauss–Legendre quadrature
/// split at the breakpoints, with `g` evaluated from its defining forms
/// when available. Absolute error target `1e-10`.
pub fn fourier_quadrature_oracle(g: &PiecewiseLinearCircleFunction, m: i64) -> Result<Complex64> {
    let nodes = gauss_legendre(20);
    let f = |x: f64| Complex64::from_polar(g.eval_direct(x), -(m as f64) * x);
    let tol = 1e-11 * TAU;
    let mut total = Complex64::new(0.0, 0.0);
    let scale = g.scale();
    for w in g.breakpoints.windows(2) {
        let share = tol * (w[1] - w[0]) / TAU * scale;
        let whole = panel(&f, &nodes, w[0], w[1]);
        total += adaptive(&f, &nodes, w[0], w[1], whole, share, 30)
            .ok_or_else(|| Error::PrecisionFailure(format!("quadrature for m = {m} did not reach its tolerance")))?;
    }
    Ok(total / TAU)
}

/// `(1/2π) ∫ g(e^{ix})² dx` by the same quadrature.
pub fn quadrature_energy(g: &PiecewiseLinearCircleFunction) -> Result<f64> {
    let nodes = gauss_legendre(20);
    let f = |x: f64| Complex64::new(g.eval_direct(x).powi(2), 0.0);
    let mut total = Complex64::new(0.0, 0.0);
    for w in g.breakpoints.windows(2) {
        let whole = panel(&f, &nodes, w[0], w[1]);
        total += adaptive(&f, &nodes, w[0], w[1], whole, 1e-11 * g.scale().powi(2), 30)
            .ok_or_else(|| Error::PrecisionFailure("energy quadrature did not reach its tolerance".into()))?;
    }
    Ok(total.re / TAU)
}

/// Max over `m` of `|a_m^closed - a_m^quadrature|`.
pub fn quadrature_agreement(g: &PiecewiseLinearCircleFunction, ev: &FourierEvidence) -> Result<f64> {
    let diffs = ev
        .coefficients
        .par_iter()
        .map(|c| fourier_quadrature_oracle(g, c.m).map(|q| (q - c.a()).norm()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(diffs.into_iter().fold(0.0, f64::max))
}

/// Compares `deg_n / λ₁ⁿ`, `n < terms.len()`, with `Σ_{|m|<=M} a_m e^{imnθ}`.
pub fn reconstruct_degrees(ev: &FourierEvidence, terms: &[BigRational], modes: usize) -> ResidualReport {
    let max_residual = terms
        .iter()
        .enumerate()
        .map(|(n, d)| {
            let value = scaled(d, ev.lambda1, n);
            (value - ev.synthesize(n as f64 * ev.theta, modes)).abs()
        })
        .fold(0.0, f64::max);
    ResidualReport { modes, n_max: terms.len().saturating_sub(1), max_residual }
}

/// `x / λⁿ` without overflowing for long sequences.
fn scaled(x: &BigRational, lambda: f64, n: usize) -> f64 {
    let direct = x.to_f64().unwrap_or(f64::INFINITY);
    let pow = lambda.powi(n as i32);
    if direct.is_finite() && pow.is_finite() {
        return direct / pow;
    }
    let num_bits = x.numer().bits() as i64;
    let den_bits = x.denom().bits() as i64;
    let shift = (num_bits - den_bits - 60).max(0);
    let num = (x.numer() >> shift as usize).to_f64().unwrap_or(f64::NAN);
    let den = x.denom().to_f64().unwrap_or(f64::NAN);
    ((num / den).ln() + shift as f64 * std::f64::consts::LN_2 - n as f64 * lambda.ln()).exp()
}

/// `(1-ρ) Σ_{n<=N} g(e^{inθ}) e^{-imnθ} ρⁿ` for each `ρ`, compared with `a_m`.
pub fn radial_limit_probe(
    g: &PiecewiseLinearCircleFunction,
    ev: &FourierEvidence,
    m: i64,
    rhos: &[f64],
    n_terms: usize,
) -> Result<RadialReport> {
    for &rho in rhos {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::OutOfRange(format!("radius {rho} outside (0, 1)")));
        }
        if (1.0 - rho) * (n_terms as f64) < 10.0 {
            return Err(Error::InsufficientTerms(format!(
                "(1 - ρ) N = {} < 10 for ρ = {rho}, N = {n_terms}",
                (1.0 - rho) * n_terms as f64
            )));
        }
    }
    let target = ev.coefficient(m).unwrap_or_else(|| closed_form_coefficient(g, m));
    let theta = ev.theta;
    let values: Vec<f64> = (0..=n_terms).into_par_iter().map(|n| g.eval((n as f64 * theta).rem_euclid(TAU))).collect();
    let estimates: Vec<RadialEstimate> = rhos
        .par_iter()
        .map(|&rho| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut w = 1.0;
            for (n, v) in values.iter().enumerate() {
                let phase = (-(m as f64) * (n as f64 * theta)).rem_euclid(TAU);
                acc += Complex64::from_polar(v * w, phase);
                w *= rho;
            }
            let est = acc * (1.0 - rho);
            RadialEstimate { rho, re: est.re, im: est.im, error: (est - target).norm() }
        })
        .collect();
    let monotone = estimates.windows(2).all(|w| w[1].error < w[0].error);
    Ok(RadialReport { m, terms: n_terms, target: [target.re, target.im], estimates, monotone })
}

/// Default radii for the radial probe.
pub const DEFAULT_RHOS: [f64; 3] = [1.0 - 1e-2, 1.0 - 3e-3, 1.0 - 1e-3];

/// Closed-form coefficients for a surface map, checked against quadrature
/// and the degree sequence.
pub fn surface_evidence(map: &MonomialMap, div: &ToricDivisor, modes: usize, precision: u32) -> Result<FourierEvidence> {
    let (plane, g) = build_surface_plf_checked(map, div, precision, N_CHECK)?;
    let mut ev = fourier_closed_form(&g, modes);
    ev.theta = plane.theta;
    ev.lambda1 = plane.lambda1;
    ev.quadrature_defect = Some(quadrature_agreement(&g, &ev)?);
    let seq = degree_sequence(map, div, 1, N_CHECK)?;
    let mut sizes = vec![0, 10];
    if modes > 10 {
        sizes.push(modes);
    }
    ev.residuals = sizes.into_iter().filter(|&s| s <= modes).map(|s| reconstruct_degrees(&ev, &seq.terms, s)).collect();
    Ok(ev)
}

/// Result of `Δ_f = 2/(2 - Δ_φ) - 1`.
#[derive(Clone, Debug, Serialize)]
pub struct BdjResult {
    #[serde(with = "serde_vec")]
    pub coefficients: Vec<BigRational>,
    pub pole: PoleEstimate,
}

/// Estimates of the growth rate `1/r` of the coefficients, `r` the radius
/// of convergence.
#[derive(Clone, Debug, Serialize)]
pub struct PoleEstimate {
    /// Last coefficient ratio `f_N / f_{N-1}`.
    pub ratio: Option<f64>,
    /// Aitken Δ² acceleration of the last three ratios.
    pub aitken: Option<f64>,
    /// The `[L/1]` Padé denominator root `f_{L+1}/f_L` over the tail (the
    /// reciprocal of its pole).
    pub pade: Option<f64>,
    /// `min(ratio, aitken)`, a conservative estimate.
    pub estimate: Option<f64>,
}

pub fn bdj_transform(delta_phi: &[BigRational]) -> Result<BdjResult> {
    let len = delta_phi.len();
    let two = BigRational::from_integer(BigInt::from(2));
    let mut denom: Vec<BigRational> = delta_phi.iter().map(|c| -c.clone()).collect();
    if let Some(c0) = denom.first_mut() {
        *c0 += &two;
        if c0.is_zero() {
            return Err(Error::NotInvertible("2 - Δ_φ has zero constant term".into()));
        }
    }
    let inv = series::inverse(&denom, len)?;
    let mut coefficients: Vec<BigRational> = inv.into_iter().map(|c| c * &two).collect();
    if let Some(c0) = coefficients.first_mut() {
        *c0 -= BigRational::one();
    }
    let pole = pole_estimate(&coefficients);
    Ok(BdjResult { coefficients, pole })
}

/// Coefficient-ratio, Aitken and row-one Padé estimates of the dominant
/// growth rate.
pub fn pole_estimate(c: &[BigRational]) -> PoleEstimate {
    let ratio_at = |n: usize| -> Option<f64> {
        if n == 0 || n >= c.len() || c[n - 1].is_zero() {
            return None;
        }
        let r = (&c[n] / &c[n - 1]).to_f64()?;
        r.is_finite().then_some(r)
    };
    let n = c.len();
    let ratio = if n >= 2 { ratio_at(n - 1) } else { None };
    let aitken = if n >= 4 {
        match (ratio_at(n - 3), ratio_at(n - 2), ratio_at(n - 1)) {
            (Some(r0), Some(r1), Some(r2)) => {
                let den = r2 - 2.0 * r1 + r0;
                if den.abs() > 1e-300 {
                    Some(r2 - (r2 - r1).powi(2) / den)
                } else {
                    Some(r2)
                }
            }
            _ => None,
        }
    } else {
        None
    };
    // [L/1] with L = n - 2: denominator 1 - (f_{L+1}/f_L) z.
    let pade = if n >= 2 { ratio_at(n - 1) } else { None };
    let estimate = match (ratio, aitken) {
        (Some(r), Some(a)) => Some(r.min(a)),
        (r, a) => r.or(a),
    };
    PoleEstimate { ratio, aitken, pade, estimate }
}

/// `(m, Re a_m, Im a_m)` rows.
pub fn coefficient_rows(ev: &FourierEvidence) -> Vec<(i64, f64, f64)> {
    ev.coefficients.iter().map(|c| (c.m, c.re, c.im)).collect()
}

/// Exact `(α, β)` as strings per arc.
pub fn arc_form_strings(g: &PiecewiseLinearCircleFunction) -> Vec<Option<(String, String)>> {
    g.arcs.iter().map(|a| a.forms.as_ref().map(|f| (format_rational(&f.alpha), format_rational(&f.beta)))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cosine() -> PiecewiseLinearCircleFunction {
        let h = Complex64::new(0.5, 0.0);
        PiecewiseLinearCircleFunction::from_arcs(vec![0.0, TAU], vec![(h, h)]).unwrap()
    }

    #[test]
    fn pure_harmonic() {
        let g = cosine();
        let ev = fourier_closed_form(&g, 4);
        for c in &ev.coefficients {
            let want = if c.m.abs() == 1 { 0.5 } else { 0.0 };
            assert!((c.a() - Complex64::new(want, 0.0)).norm() < 1e-14, "m = {}", c.m);
        }
        assert!((fourier_quadrature_oracle(&g, 1).unwrap() - Complex64::new(0.5, 0.0)).norm() < 1e-10);
        assert!(fourier_quadrature_oracle(&g, 3).unwrap().norm() < 1e-10);
    }

    #[test]
    fn d_relation_on_two_arcs() {
        // |cos x| = g on [−π/2, π/2) with b = c = 1/2, and its negative elsewhere.
        let h = Complex64::new(0.5, 0.0);
        let g = PiecewiseLinearCircleFunction::from_arcs(vec![-PI / 2.0, PI / 2.0, 3.0 * PI / 2.0], vec![(h, h), (-h, -h)])
            .unwrap();
        assert!(g.continuity_defect() < 1e-15);
        let ev = fourier_closed_form(&g, 8);
        for c in &ev.coefficients {
            if c.m.abs() >= 2 {
                let lhs = c.a() * ((c.m * c.m - 1) as f64);
                assert!((lhs - c.d()).norm() < 1e-13, "m = {}", c.m);
            }
            let q = fourier_quadrature_oracle(&g, c.m).unwrap();
            assert!((q - c.a()).norm() < 1e-10);
        }
        // a_0 of |cos| is 2/π.
        assert!((ev.coefficient(0).unwrap().re - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn companion_powers() {
        let a = IntegerMatrix::from_i64(&[[2, -1], [1, 2]]);
        let (t, q) = (a.trace(), a.det());
        for n in 0..6u64 {
            let (s, tt) = companion_power(&t, &q, n);
            let lhs = a.pow(n);
            let rhs = IntegerMatrix::identity(2).scale(&s).add(&a.scale(&tt));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn bdj_small_cases() {
        let z = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(x.into())).collect::<Vec<_>>();
        let r = bdj_transform(&z(&[0, 0, 0])).unwrap();
        assert!(r.coefficients.iter().all(|c| c.is_zero()));
        let r = bdj_transform(&z(&[0, 1, 0, 0, 0])).unwrap();
        let want: Vec<BigRational> =
            (0..5).map(|n| if n == 0 { BigRational::zero() } else { BigRational::new(1.into(), BigInt::from(1u64 << n)) }).collect();
        assert_eq!(r.coefficients, want);
        assert!(bdj_transform(&z(&[2, 1])).is_err());
    }

    #[test]
    fn bdj_surface_identity_and_oracle() {
        let map = MonomialMap::from_i64(&[[2, -1], [1, 2]]).unwrap();
        let div = ToricDivisor::o1_projective(2);
        let (plane, g) = build_surface_plf(&map, &div).unwrap();
        assert!((plane.lambda1 - 5f64.sqrt()).abs() < 1e-14);
        assert!(g.continuity_defect() < 1e-10);
        assert!(g.reality_defect() < 1e-15);
        // n = 0: g(1) = (D²) = 1.
        assert!((g.eval(0.0) - 1.0).abs() < 1e-12);
        let ev = surface_evidence(&map, &div, 20, 128).unwrap();
        assert!(ev.reality_defect < 1e-10);
        assert!(ev.quadrature_defect.unwrap() < 1e-8);
        let r10 = ev.residuals.iter().find(|r| r.modes == 10).unwrap().max_residual;
        let r20 = ev.residuals.iter().find(|r| r.modes == 20).unwrap().max_residual;
        assert!(r20 < r10, "{r20} vs {r10}");
    }

    #[test]
    fn rotation_of_the_square() {
        let map = MonomialMap::from_i64(&[[0, -1], [1, 0]]).unwrap();
        let div = ToricDivisor::o11_p1xp1();
        let (plane, g) = build_surface_plf(&map, &div).unwrap();
        assert!((plane.theta - PI / 2.0).abs() < 1e-15);
        assert_eq!(g.arc_count(), 4);
        for w in g.breakpoints.windows(2) {
            assert!((w[1] - w[0] - PI / 2.0).abs() < 1e-12);
        }
        for x in [0.1, 0.7, 1.3] {
            assert!((g.eval(x) - g.eval(x + PI / 2.0)).abs() < 1e-12);
        }
    }
}

//! Toric fans, divisors and the rational polytopes they determine, with
//! exact volumes and mixed volumes.
//!
//! Sign convention: a divisor `D = Σ a_ρ D_ρ` has polytope
//! `P_D = {m : ⟨m, v_ρ⟩ <= a_ρ for every ray ρ}`. The opposite convention
//! differs by `m ↦ -m`, which changes no volume or degree.

pub mod hull;
mod mixed;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::matrix::{k_subsets, IntegerMatrix};
use crate::linalg::ratmat::{rank, rref};
use crate::rational::{format_rational, serde_vec, serde_vec_vec};

pub use mixed::{edge_normal_fan, mixed_area_sam, mixed_volume_vector, EdgeNormalFan, MixedVolumeVector};

pub type RatPoint = Vec<BigRational>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FanData", into = "FanData")]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FanData {
    dim: usize,
    #[serde(with = "crate::rational::serde_int_rows")]
    rays: Vec<Vec<BigInt>>,
    cones: Vec<Vec<usize>>,
}

impl TryFrom<FanData> for Fan {
    type Error = Error;
    fn try_from(f: FanData) -> Result<Fan> {
        Fan::new(f.dim, f.rays, f.cones)
    }
}

impl From<Fan> for FanData {
    fn from(f: Fan) -> FanData {
        FanData { dim: f.dim, rays: f.rays, cones: f.cones }
    }
}

impl Fan {
    /// Validates dimensions, primitivity of rays and cone indices.
    pub fn new(dim: usize, rays: Vec<Vec<BigInt>>, cones: Vec<Vec<usize>>) -> Result<Fan> {
        if dim == 0 {
            return Err(Error::Dimension("fan dimension must be positive".into()));
        }
        for r in &rays {
            if r.len() != dim {
                return Err(Error::Dimension(format!("ray of length {} in a {dim}-dimensional fan", r.len())));
            }
            let g = r.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_one() {
                return Err(Error::Parse(format!("ray {r:?} is not primitive")));
            }
        }
        for c in &cones {
            if c.is_empty() {
                return Err(Error::Parse("empty cone".into()));
            }
            if let Some(&i) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::OutOfRange(format!("cone references ray {i} of {}", rays.len())));
            }
        }
        Ok(Fan { dim, rays, cones })
    }

    /// Fan of projective space: rays `e_1, ..., e_d, -(e_1 + ... + e_d)`.
    pub fn projective_space(d: usize) -> Fan {
        let mut rays: Vec<Vec<BigInt>> = (0..d)
            .map(|i| (0..d).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        rays.push(vec![BigInt::from(-1); d]);
        let cones = k_subsets(d + 1, d);
        Fan { dim: d, rays, cones }
    }

    /// Fan of `P^1 x P^1` with rays ordered `e_1, -e_1, e_2, -e_2`.
    pub fn p1xp1() -> Fan {
        let r = |a: i64, b: i64| vec![BigInt::from(a), BigInt::from(b)];
        Fan {
            dim: 2,
            rays: vec![r(1, 0), r(-1, 0), r(0, 1), r(0, -1)],
            cones: vec![vec![0, 2], vec![2, 1], vec![1, 3], vec![3, 0]],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    /// Whether the rays positively span the space, i.e. every polyhedron
    /// `{⟨m, v_ρ⟩ <= a_ρ}` is bounded.
    pub fn rays_positively_span(&self) -> bool {
        // Positive spanning is equivalent to: rank d and 0 is a strictly
        // positive combination of rays. Test the latter by checking that no
        // nonzero linear functional is >= 0 on every ray, using the finite
        // list of candidate functionals normal to (d-1)-subsets of rays.
        let d = self.dim;
        let rows: Vec<Vec<BigRational>> = self.rays.iter().map(|r| to_rat(r)).collect();
        if rank(&rows) < d {
            return false;
        }
        if d == 1 {
            return self.rays.iter().any(|r| r[0].is_positive()) && self.rays.iter().any(|r| r[0].is_negative());
        }
        for subset in k_subsets(self.rays.len(), d - 1) {
            let sub: Vec<Vec<BigRational>> = subset.iter().map(|&i| rows[i].clone()).collect();
            if rank(&sub) < d - 1 {
                continue;
            }
            for w in crate::linalg::ratmat::nullspace(&sub, d) {
                let vals: Vec<BigRational> = rows.iter().map(|r| dot_r(r, &w)).collect();
                if vals.iter().all(|v| !v.is_negative()) || vals.iter().all(|v| !v.is_positive()) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether a direction lies in the cone spanned by the listed rays
    /// (Carathéodory over linearly independent subsets).
    fn cone_contains(&self, cone: &[usize], x: &[BigRational]) -> bool {
        let d = self.dim;
        let k = cone.len().min(d);
        for size in (1..=k).rev() {
            for subset in k_subsets(cone.len(), size) {
                let gens: Vec<Vec<BigRational>> = subset.iter().map(|&i| to_rat(&self.rays[cone[i]])).collect();
                if rank(&gens) < size {
                    continue;
                }
                if let Some(coef) = solve_in_span(&gens, x) {
                    if coef.iter().all(|c| !c.is_negative()) {
                        return true;
                    }
                }
            }
        }
        x.iter().all(|c| c.is_zero())
    }

    /// Checks completeness on a deterministic sample of integer directions
    /// (all nonzero vectors with entries in `[-3, 3]`, plus a few skewed ones).
    pub fn is_complete(&self) -> bool {
        if !self.rays_positively_span() {
            return false;
        }
        let d = self.dim;
        let mut samples: Vec<Vec<i64>> = Vec::new();
        let side = if d <= 3 { 3 } else { 1 };
        let width = (2 * side + 1) as usize;
        for idx in 0..width.pow(d as u32) {
            let mut v = Vec::with_capacity(d);
            let mut t = idx;
            for _ in 0..d {
                v.push((t % width) as i64 - side);
                t /= width;
            }
            if v.iter().any(|&x| x != 0) {
                samples.push(v);
            }
        }
        for s in [7i64, 11, 13] {
            samples.push((0..d as i64).map(|i| (s * (i + 1) * (i + 1)) % 17 - 8).collect());
        }
        samples.iter().all(|v| {
            let x: Vec<BigRational> = v.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
            self.cones.iter().any(|c| self.cone_contains(c, &x))
        })
    }
}

fn to_rat(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

fn dot_r(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_ir(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| y * BigRational::from_integer(x.clone())).sum()
}

/// Coefficients `c` with `Σ c_i gens_i = x`, if `x` is in the span.
fn solve_in_span(gens: &[Vec<BigRational>], x: &[BigRational]) -> Option<Vec<BigRational>> {
    let d = x.len();
    let k = gens.len();
    // Augmented system with columns = generators.
    let mut m: Vec<Vec<BigRational>> =
        (0..d).map(|r| (0..k).map(|c| gens[c][r].clone()).chain(std::iter::once(x[r].clone())).collect()).collect();
    let pivots = rref(&mut m);
    if pivots.contains(&k) {
        return None;
    }
    let mut sol = vec![BigRational::zero(); k];
    for (r, &p) in pivots.iter().enumerate() {
        sol[p] = m[r][k].clone();
    }
    Some(sol)
}

/// Solve a square rational system; `None` when singular.
pub(crate) fn solve_square(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = b.len();
    let mut m: Vec<Vec<BigRational>> =
        (0..n).map(|r| a[r].iter().cloned().chain(std::iter::once(b[r].clone())).collect()).collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.contains(&n) {
        return None;
    }
    Some((0..n).map(|r| m[r][n].clone()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricDivisor {
    pub fan: Fan,
    #[serde(with = "serde_vec")]
    pub coeffs: Vec<BigRational>,
}

impl ToricDivisor {
    pub fn new(fan: Fan, coeffs: Vec<BigRational>) -> Result<ToricDivisor> {
        if coeffs.len() != fan.rays.len() {
            return Err(Error::Dimension(format!("{} coefficients for {} rays", coeffs.len(), fan.rays.len())));
        }
        Ok(ToricDivisor { fan, coeffs })
    }

    /// The hyperplane class on `P^d`: coefficient 1 on the last ray.
    pub fn o1_projective(d: usize) -> ToricDivisor {
        let mut coeffs = vec![BigRational::zero(); d + 1];
        coeffs[d] = BigRational::one();
        ToricDivisor { fan: Fan::projective_space(d), coeffs }
    }

    /// `O(1,1)` on `P^1 x P^1`: the unit square `[-1,0]^2`.
    pub fn o11_p1xp1() -> ToricDivisor {
        let c = |x: i64| BigRational::from_integer(BigInt::from(x));
        ToricDivisor { fan: Fan::p1xp1(), coeffs: vec![c(0), c(1), c(0), c(1)] }
    }

    pub fn dim(&self) -> usize {
        self.fan.dim
    }

    /// The linearly equivalent divisor whose polytope is `P_D + m`.
    pub fn translate(&self, m: &[BigInt]) -> ToricDivisor {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&self.fan.rays)
            .map(|(a, v)| a + BigRational::from_integer(crate::polytope::hull::dot(m, v)))
            .collect();
        ToricDivisor { fan: self.fan.clone(), coeffs }
    }
}

/// A rational polytope by its extreme points, with facets when
/// full-dimensional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolytopeData", into = "PolytopeData")]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<RatPoint>,
    facets: Option<Vec<RationalFacet>>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeData {
    #[serde(with = "serde_vec_vec")]
    vertices: Vec<RatPoint>,
}

impl TryFrom<PolytopeData> for LatticePolytope {
    type Error = Error;
    fn try_from(p: PolytopeData) -> Result<LatticePolytope> {
        LatticePolytope::from_points(p.vertices)
    }
}

impl From<LatticePolytope> for PolytopeData {
    fn from(p: LatticePolytope) -> PolytopeData {
        PolytopeData { vertices: p.vertices }
    }
}

/// `⟨normal, m⟩ <= offset` with `normal` primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFacet {
    pub normal: Vec<BigInt>,
    pub offset: BigRational,
}

/// Least common multiple of the denominators of a point set.
fn common_denominator(points: &[RatPoint]) -> BigInt {
    points.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

fn scale_to_int(points: &[RatPoint], den: &BigInt) -> Vec<hull::IntPoint> {
    let q = BigRational::from_integer(den.clone());
    points.iter().map(|p| p.iter().map(|x| (x * &q).to_integer()).collect()).collect()
}

impl LatticePolytope {
    /// Convex hull of a nonempty point set.
    pub fn from_points(points: Vec<RatPoint>) -> Result<LatticePolytope> {
        let dim = points.first().ok_or(Error::EmptyPolytope)?.len();
        if dim == 0 {
            return Err(Error::Dimension("points must have at least one coordinate".into()));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::Dimension("points of mixed dimension".into()));
        }
        let den = common_denominator(&points);
        let h = hull::hull(&scale_to_int(&points, &den));
        let qd = BigRational::from_integer(den.clone());
        let vertices = h
            .vertices
            .iter()
            .map(|p| p.iter().map(|x| BigRational::from_integer(x.clone()) / &qd).collect())
            .collect();
        let facets = h.facets.map(|fs| {
            fs.into_iter()
                .map(|f| RationalFacet { normal: f.normal, offset: BigRational::new(f.offset, den.clone()) })
                .collect()
        });
        Ok(LatticePolytope { dim, vertices, facets })
    }

    pub fn from_integer_points(points: &[Vec<i64>]) -> Result<LatticePolytope> {
        LatticePolytope::from_points(
            points.iter().map(|p| p.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extreme points; counter-clockwise in dimension 2 when full-dimensional.
    pub fn vertices(&self) -> &[RatPoint] {
        &self.vertices
    }

    pub fn facets(&self) -> Option<&[RationalFacet]> {
        self.facets.as_deref()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.facets.is_some()
    }

    pub fn contains(&self, m: &[BigRational]) -> bool {
        match &self.facets {
            Some(fs) => fs.iter().all(|f| dot_ir(&f.normal, m) <= f.offset),
            None => LatticePolytope::from_points(self.vertices.iter().cloned().chain(std::iter::once(m.to_vec())).collect())
                .map(|p| p.vertices.len() == self.vertices.len() && p.vertices == self.vertices)
                .unwrap_or(false),
        }
    }

    /// Support function `h(n) = max ⟨v, n⟩` over the vertices.
    pub fn support(&self, n: &[BigInt]) -> BigRational {
        self.vertices.iter().map(|v| dot_ir(n, v)).max().expect("nonempty polytope")
    }

    /// Vertices scaled by a common denominator, with the denominator.
    pub fn integer_vertices(&self) -> (Vec<hull::IntPoint>, BigInt) {
        let den = common_denominator(&self.vertices);
        (scale_to_int(&self.vertices, &den), den)
    }

    pub fn scale(&self, r: &BigRational) -> LatticePolytope {
        LatticePolytope::from_points(self.vertices.iter().map(|v| v.iter().map(|x| x * r).collect()).collect())
            .expect("scaling preserves nonemptiness")
    }

    pub fn translate(&self, t: &[BigRational]) -> LatticePolytope {
        LatticePolytope::from_points(self.vertices.iter().map(|v| v.iter().zip(t).map(|(x, y)| x + y).collect()).collect())
            .expect("translation preserves nonemptiness")
    }

    pub fn vertex_strings(&self) -> Vec<Vec<String>> {
        self.vertices.iter().map(|v| v.iter().map(format_rational).collect()).collect()
    }
}

/// `P_D = {m : ⟨m, v_ρ⟩ <= a_ρ}` by exhaustive vertex enumeration.
pub fn polytope_from_divisor(div: &ToricDivisor) -> Result<LatticePolytope> {
    let fan = &div.fan;
    let d = fan.dim;
    if !fan.rays_positively_span() {
        return Err(Error::Unbounded);
    }
    let rows: Vec<Vec<BigRational>> = fan.rays.iter().map(|r| to_rat(r)).collect();
    let feasible = |m: &[BigRational]| rows.iter().zip(&div.coeffs).all(|(v, a)| &dot_r(v, m) <= a);
    let mut verts: Vec<RatPoint> = Vec::new();
    for subset in k_subsets(rows.len(), d) {
        let a: Vec<Vec<BigRational>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let b: Vec<BigRational> = subset.iter().map(|&i| div.coeffs[i].clone()).collect();
        if let Some(m) = solve_square(&a, &b) {
            if feasible(&m) && !verts.contains(&m) {
                verts.push(m);
            }
        }
    }
    if verts.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    LatticePolytope::from_points(verts)
}

/// Linear supporting forms `m(σ)` per maximal cone; `None` for a cone whose
/// equations are inconsistent.
pub fn cone_forms(div: &ToricDivisor) -> Vec<Option<RatPoint>> {
    let fan = &div.fan;
    let d = fan.dim;
    fan.cones
        .iter()
        .map(|cone| {
            let rows: Vec<Vec<BigRational>> = cone.iter().map(|&i| to_rat(&fan.rays[i])).collect();
            let rhs: Vec<BigRational> = cone.iter().map(|&i| div.coeffs[i].clone()).collect();
            let mut m: Vec<Vec<BigRational>> =
                rows.iter().zip(&rhs).map(|(r, b)| r.iter().cloned().chain(std::iter::once(b.clone())).collect()).collect();
            let pivots = rref(&mut m);
            if pivots.len() != d || pivots.contains(&d) {
                return None;
            }
            Some((0..d).map(|r| m[r][d].clone()).collect())
        })
        .collect()
}

/// Ample iff `P_D` is full-dimensional and each maximal cone has its own
/// consistent linear form `m(σ) ∈ P_D`, distinct across cones.
pub fn is_ample(div: &ToricDivisor) -> bool {
    let Ok(p) = polytope_from_divisor(div) else {
        return false;
    };
    if !p.is_full_dimensional() {
        return false;
    }
    let forms = cone_forms(div);
    let mut seen: Vec<&RatPoint> = Vec::new();
    for f in &forms {
        let Some(m) = f else {
            return false;
        };
        if !p.contains(m) || seen.contains(&m) {
            return false;
        }
        seen.push(m);
    }
    true
}

/// Whether the support function is convex (every `m(σ)` lies in `P_D`); the
/// divisor-to-polytope path convexifies otherwise.
pub fn support_function_is_convex(div: &ToricDivisor) -> bool {
    let Ok(p) = polytope_from_divisor(div) else {
        return false;
    };
    cone_forms(div).iter().all(|f| f.as_ref().is_some_and(|m| p.contains(m)))
}

/// Hull of `A v` over the vertices.
pub fn linear_image(p: &LatticePolytope, a: &IntegerMatrix) -> Result<LatticePolytope> {
    if a.dim() != p.dim {
        return Err(Error::Dimension(format!("{}x{} matrix on a {}-dimensional polytope", a.dim(), a.dim(), p.dim)));
    }
    LatticePolytope::from_points(p.vertices.iter().map(|v| a.apply(v)).collect())
}

pub fn minkowski_sum(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    if p.dim != q.dim {
        return Err(Error::Dimension(format!("Minkowski sum of dimensions {} and {}", p.dim, q.dim)));
    }
    let mut pts = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    LatticePolytope::from_points(pts)
}

/// Exact Euclidean volume; zero for lower-dimensional polytopes.
pub fn volume(p: &LatticePolytope) -> BigRational {
    if !p.is_full_dimensional() {
        return BigRational::zero();
    }
    let (pts, den) = p.integer_vertices();
    hull::volume(&pts) / BigRational::from_integer(num_traits::pow(den, p.dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    fn poly(v: &[Vec<i64>]) -> LatticePolytope {
        LatticePolytope::from_integer_points(v).unwrap()
    }

    #[test]
    fn projective_plane_o1() {
        let p = polytope_from_divisor(&ToricDivisor::o1_projective(2)).unwrap();
        assert_eq!(p, poly(&[vec![0, 0], vec![-1, 0], vec![0, -1]]));
        assert_eq!(volume(&p), BigRational::new(1.into(), 2.into()));
        assert!(is_ample(&ToricDivisor::o1_projective(2)));
    }

    #[test]
    fn zero_divisor_is_a_point() {
        for fan in [Fan::projective_space(2), Fan::projective_space(3), Fan::p1xp1()] {
            let n = fan.rays().len();
            let div = ToricDivisor::new(fan, vec![q(0); n]).unwrap();
            let p = polytope_from_divisor(&div).unwrap();
            assert_eq!(p.vertices().len(), 1);
            assert!(p.vertices()[0].iter().all(|x| x.is_zero()));
            assert!(!is_ample(&div));
        }
    }

    #[test]
    fn p1xp1_square_and_degenerate_segment() {
        let div = ToricDivisor::new(Fan::p1xp1(), vec![q(1); 4]).unwrap();
        let p = polytope_from_divisor(&div).unwrap();
        assert_eq!(p, poly(&[vec![-1, -1], vec![1, -1], vec![1, 1], vec![-1, 1]]));
        assert_eq!(volume(&p), q(4));
        let seg = ToricDivisor::new(Fan::p1xp1(), vec![q(1), q(1), q(0), q(0)]).unwrap();
        assert!(!is_ample(&seg));
        assert!(is_ample(&ToricDivisor::o11_p1xp1()));
    }

    #[test]
    fn completeness_and_boundedness() {
        assert!(Fan::projective_space(2).is_complete());
        assert!(Fan::projective_space(3).is_complete());
        assert!(Fan::p1xp1().is_complete());
        let half = Fan::new(2, vec![vec![1.into(), 0.into()], vec![0.into(), 1.into()]], vec![vec![0, 1]]).unwrap();
        assert!(!half.is_complete());
        let div = ToricDivisor::new(half, vec![q(1), q(1)]).unwrap();
        assert_eq!(polytope_from_divisor(&div), Err(Error::Unbounded));
        let mut p2 = Fan::projective_space(2);
        p2.cones.pop();
        assert!(!p2.is_complete());
    }

    #[test]
    fn empty_polytope_is_an_error() {
        let div = ToricDivisor::new(Fan::p1xp1(), vec![q(-1), q(0), q(0), q(0)]).unwrap();
        assert_eq!(polytope_from_divisor(&div), Err(Error::EmptyPolytope));
    }

    #[test]
    fn images_and_sums() {
        let sq = poly(&[vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]]);
        let a = IntegerMatrix::from_i64(&[[2, 0], [0, 3]]);
        assert_eq!(linear_image(&sq, &a).unwrap(), poly(&[vec![0, 0], vec![2, 0], vec![2, 3], vec![0, 3]]));
        let simplex = poly(&[vec![0, 0], vec![1, 0], vec![0, 1]]);
        let b = IntegerMatrix::from_i64(&[[1, -1], [1, 1]]);
        assert_eq!(linear_image(&simplex, &b).unwrap(), poly(&[vec![0, 0], vec![1, 1], vec![-1, 1]]));
        let s1 = poly(&[vec![0, 0], vec![1, 0]]);
        let s2 = poly(&[vec![0, 0], vec![0, 1]]);
        assert_eq!(minkowski_sum(&s1, &s2).unwrap(), sq);
        assert_eq!(minkowski_sum(&simplex, &simplex).unwrap(), simplex.scale(&q(2)));
        assert_eq!(volume(&poly(&[vec![0, 0], vec![2, 0], vec![0, 3]])), q(3));
    }

    #[test]
    fn rational_vertices_and_serialization() {
        let h = BigRational::new(1.into(), 2.into());
        let p = LatticePolytope::from_points(vec![vec![q(0), q(0)], vec![h.clone(), q(0)], vec![q(0), h.clone()]]).unwrap();
        assert_eq!(volume(&p), BigRational::new(1.into(), 8.into()));
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"1/2\""));
        let back: LatticePolytope = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        let fan_json = serde_json::to_string(&Fan::p1xp1()).unwrap();
        assert_eq!(serde_json::from_str::<Fan>(&fan_json).unwrap(), Fan::p1xp1());
        assert!(serde_json::from_str::<Fan>(r#"{"dim":2,"rays":[[2,0]],"cones":[]}"#).is_err());
    }
}

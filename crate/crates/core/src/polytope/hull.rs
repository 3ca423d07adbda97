//! Convex hulls and volumes of integer point sets in small dimension.
//!
//! Dimension 2 uses a monotone chain; higher dimensions enumerate candidate
//! facets over `d`-subsets of the input, which is adequate for the few dozen
//! points that arise from Minkowski sums of small polytopes.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::matrix::{bareiss_det, k_subsets};

pub type IntPoint = Vec<BigInt>;

/// A supporting hyperplane `⟨n, x⟩ = c` with `⟨n, p⟩ <= c` on the hull;
/// `n` is primitive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

fn dedup_sorted(mut pts: Vec<IntPoint>) -> Vec<IntPoint> {
    pts.sort();
    pts.dedup();
    pts
}

/// Coordinates onto which projection is injective on the affine hull; their
/// count is the affine dimension.
pub fn affine_pivots(pts: &[IntPoint]) -> Vec<usize> {
    if pts.len() <= 1 {
        return Vec::new();
    }
    let mut rows: Vec<Vec<BigRational>> = pts[1..]
        .iter()
        .map(|p| sub(p, &pts[0]).into_iter().map(BigRational::from_integer).collect())
        .collect();
    crate::linalg::ratmat::rref(&mut rows)
}

fn cross2(o: &[BigInt], a: &[BigInt], b: &[BigInt]) -> BigInt {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Strictly convex hull in the plane, counter-clockwise, starting from the
/// lexicographically smallest vertex. Collinear input returns the two ends.
pub fn hull_2d(points: &[IntPoint]) -> Vec<IntPoint> {
    let pts = dedup_sorted(points.to_vec());
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<IntPoint> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= BigInt::zero() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<IntPoint> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= BigInt::zero() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the signed area of a closed polygon.
pub fn shoelace2(poly: &[IntPoint]) -> BigInt {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (p, q) = (&poly[i], &poly[(i + 1) % n]);
            &p[0] * &q[1] - &p[1] * &q[0]
        })
        .sum()
}

/// Normal to the hyperplane through `d` affinely independent points, via
/// the generalized cross product of the difference vectors.
fn hyperplane_normal(pts: &[&IntPoint]) -> Vec<BigInt> {
    let d = pts[0].len();
    let diffs: Vec<Vec<BigInt>> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
    (0..d)
        .map(|i| {
            let minor: Vec<Vec<BigInt>> = diffs
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect())
                .collect();
            let det = if minor.is_empty() { BigInt::one() } else { bareiss_det(minor) };
            if i % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

/// Facets of the hull of a full-dimensional point set in dimension `d >= 2`.
pub fn facets(points: &[IntPoint]) -> Vec<Facet> {
    let pts = dedup_sorted(points.to_vec());
    let d = pts[0].len();
    let mut found: BTreeSet<Facet> = BTreeSet::new();
    for subset in k_subsets(pts.len(), d) {
        let chosen: Vec<&IntPoint> = subset.iter().map(|&i| &pts[i]).collect();
        let n = hyperplane_normal(&chosen);
        if n.iter().all(|x| x.is_zero()) {
            continue;
        }
        let n = primitive(n);
        let c = dot(&n, chosen[0]);
        let mut above = false;
        let mut below = false;
        for p in &pts {
            match dot(&n, p).cmp(&c) {
                Ordering::Greater => above = true,
                Ordering::Less => below = true,
                Ordering::Equal => {}
            }
            if above && below {
                break;
            }
        }
        if above && below {
            continue;
        }
        let f = if above {
            Facet { normal: n.iter().map(|x| -x).collect(), offset: -c }
        } else {
            Facet { normal: n, offset: c }
        };
        found.insert(f);
    }
    found.into_iter().collect()
}

/// Extreme points of a full-dimensional point set, given its facets.
fn vertices_from_facets(pts: &[IntPoint], facets: &[Facet]) -> Vec<IntPoint> {
    let d = pts[0].len();
    pts.iter()
        .filter(|p| {
            let active: Vec<Vec<BigRational>> = facets
                .iter()
                .filter(|f| dot(&f.normal, p) == f.offset)
                .map(|f| f.normal.iter().cloned().map(BigRational::from_integer).collect())
                .collect();
            active.len() >= d && crate::linalg::ratmat::rank(&active) == d
        })
        .cloned()
        .collect()
}

/// Hull data for an arbitrary point set: ordered extreme points and, when
/// full-dimensional, facets.
#[derive(Clone, Debug)]
pub struct Hull {
    pub vertices: Vec<IntPoint>,
    pub facets: Option<Vec<Facet>>,
    pub affine_dim: usize,
}

pub fn hull(points: &[IntPoint]) -> Hull {
    assert!(!points.is_empty(), "hull of an empty point set");
    let pts = dedup_sorted(points.to_vec());
    let d = pts[0].len();
    let pivots = affine_pivots(&pts);
    let k = pivots.len();
    if k == d {
        if d == 1 {
            let v = vec![pts[0].clone(), pts[pts.len() - 1].clone()];
            let f = vec![
                Facet { normal: vec![BigInt::from(-1)], offset: -pts[0][0].clone() },
                Facet { normal: vec![BigInt::one()], offset: pts[pts.len() - 1][0].clone() },
            ];
            return Hull { vertices: v, facets: Some(f), affine_dim: 1 };
        }
        if d == 2 {
            let v = hull_2d(&pts);
            let n = v.len();
            let f = (0..n)
                .map(|i| {
                    let (p, q) = (&v[i], &v[(i + 1) % n]);
                    // Outer normal of a counter-clockwise edge p -> q.
                    let normal = primitive(vec![&q[1] - &p[1], &p[0] - &q[0]]);
                    let offset = dot(&normal, p);
                    Facet { normal, offset }
                })
                .collect();
            return Hull { vertices: v, facets: Some(f), affine_dim: 2 };
        }
        let f = facets(&pts);
        let v = vertices_from_facets(&pts, &f);
        return Hull { vertices: v, facets: Some(f), affine_dim: d };
    }
    if k == 0 {
        return Hull { vertices: vec![pts[0].clone()], facets: None, affine_dim: 0 };
    }
    // Project onto pivot coordinates (injective on the affine hull), take
    // the hull there and lift back.
    let proj: Vec<IntPoint> = pts.iter().map(|p| pivots.iter().map(|&i| p[i].clone()).collect()).collect();
    let sub = hull(&proj);
    let vertices = sub
        .vertices
        .iter()
        .map(|q| pts[proj.iter().position(|p| p == q).expect("projected vertex")].clone())
        .collect();
    Hull { vertices, facets: None, affine_dim: k }
}

/// Euclidean volume of the hull of integer points in their ambient
/// dimension (zero when lower-dimensional).
pub fn volume(points: &[IntPoint]) -> BigRational {
    let h = hull(points);
    let d = points[0].len();
    if h.affine_dim < d {
        return BigRational::zero();
    }
    volume_full(&h.vertices, h.facets.as_deref().unwrap())
}

fn volume_full(verts: &[IntPoint], facets: &[Facet]) -> BigRational {
    let d = verts[0].len();
    match d {
        1 => BigRational::from_integer(&verts[1][0] - &verts[0][0]),
        2 => BigRational::new(shoelace2(verts).abs(), BigInt::from(2)),
        _ => {
            // Cone over each facet from an apex vertex. For a facet with
            // primitive normal n, dropping a coordinate i with n_i != 0
            // projects it with (d-1)-volume vol_F * |n_i| / |n|, while the
            // apex height is (c - ⟨n, v0⟩) / |n|.
            let v0 = &verts[0];
            let mut total = BigRational::zero();
            for f in facets {
                let h = &f.offset - dot(&f.normal, v0);
                if h.is_zero() {
                    continue;
                }
                let i = f.normal.iter().position(|x| !x.is_zero()).unwrap();
                let on: Vec<IntPoint> = verts
                    .iter()
                    .filter(|p| dot(&f.normal, p) == f.offset)
                    .map(|p| p.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect())
                    .collect();
                let proj_vol = volume(&on);
                total += proj_vol * BigRational::new(h, f.normal[i].abs());
            }
            total / BigRational::from_integer(BigInt::from(d))
        }
    }
}

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use toric_core::linalg::IntegerMatrix;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Andrew's monotone chain on small integer points, counter-clockwise.
pub fn hull_i64(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut p = points.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &x in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], x) <= 0 {
            lower.pop();
        }
        lower.push(x);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &x in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], x) <= 0 {
            upper.pop();
        }
        upper.push(x);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the area of the hull of `points`.
pub fn twice_area(points: &[(i64, i64)]) -> i64 {
    let h = hull_i64(points);
    if h.len() < 3 {
        return 0;
    }
    (0..h.len()).map(|i| {
        let (a, b) = (h[i], h[(i + 1) % h.len()]);
        a.0 * b.1 - a.1 * b.0
    }).sum()
}

pub fn minkowski_i64(p: &[(i64, i64)], r: &[(i64, i64)]) -> Vec<(i64, i64)> {
    p.iter().flat_map(|a| r.iter().map(move |b| (a.0 + b.0, a.1 + b.1))).collect()
}

/// `(vol(P+Q) - vol P - vol Q) / 2`, the mixed area.
pub fn mixed_area_i64(p: &[(i64, i64)], r: &[(i64, i64)]) -> BigRational {
    let s = twice_area(&minkowski_i64(p, r)) - twice_area(p) - twice_area(r);
    BigRational::new(BigInt::from(s), BigInt::from(4))
}

pub fn mat_i64(rows: &[i64], d: usize) -> IntegerMatrix {
    IntegerMatrix::from_i64(&rows.chunks(d).collect::<Vec<_>>())
}

/// Integer matrices with entries in `[-r, r]` and nonzero determinant.
pub fn invertible(d: usize, r: i64) -> impl Strategy<Value = IntegerMatrix> {
    prop::collection::vec(-r..=r, d * d)
        .prop_map(move |v| mat_i64(&v, d))
        .prop_filter("singular", |m| m.det() != BigInt::from(0))
}

/// 2×2 matrices with nonreal eigenvalues.
pub fn complex_2x2(r: i64) -> impl Strategy<Value = IntegerMatrix> {
    prop::collection::vec(-r..=r, 4).prop_map(|v| mat_i64(&v, 2)).prop_filter("real spectrum", |m| {
        let t = m.trace();
        &t * &t < BigInt::from(4) * m.det()
    })
}

/// Full-dimensional lattice polygons from up to 7 points in a box.
pub fn lattice_polygon(r: i64) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-r..=r, -r..=r), 3..8).prop_filter("degenerate", |p| twice_area(p) > 0)
}

pub fn to_points(p: &[(i64, i64)]) -> Vec<Vec<i64>> {
    p.iter().map(|&(x, y)| vec![x, y]).collect()
}

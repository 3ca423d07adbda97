use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::hull::primitive;
use super::{minkowski_sum, volume, LatticePolytope};
use crate::error::{Error, Result};
use crate::linalg::matrix::binomial;
use crate::rational::serde_vec;

/// `V_k = Vol(P[k], Q[d-k])` for `k = 0..=d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedVolumeVector {
    #[serde(with = "serde_vec")]
    pub v: Vec<BigRational>,
}

impl MixedVolumeVector {
    pub fn get(&self, k: usize) -> &BigRational {
        &self.v[k]
    }
}

/// Mixed volumes from `vol(rP + Q) = Σ_k C(d,k) V_k r^k`, sampled at
/// `r = 0, 1, ..., d` and solved exactly.
pub fn mixed_volume_vector(p: &LatticePolytope, q: &LatticePolytope) -> Result<MixedVolumeVector> {
    let d = p.dim();
    if q.dim() != d {
        return Err(Error::Dimension(format!("mixed volume of dimensions {d} and {}", q.dim())));
    }
    let ys: Vec<BigRational> = (0..=d)
        .map(|r| {
            if r == 0 {
                volume(q)
            } else {
                let rp = p.scale(&BigRational::from_integer(BigInt::from(r)));
                volume(&minkowski_sum(&rp, q).expect("same dimension"))
            }
        })
        .collect();
    let coeffs = interpolate_small(&ys);
    let v = coeffs
        .into_iter()
        .enumerate()
        .map(|(k, c)| c / BigRational::from_integer(binomial(d, k)))
        .collect();
    Ok(MixedVolumeVector { v })
}

/// Monomial coefficients of the polynomial of degree `< n` through
/// `(r, ys[r])`, `r = 0..n`.
fn interpolate_small(ys: &[BigRational]) -> Vec<BigRational> {
    let n = ys.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / BigRational::from_integer(BigInt::from(j));
        }
    }
    // Horner on the Newton basis (x - 0)(x - 1)...
    let mut poly = vec![dd[n - 1].clone()];
    for i in (0..n - 1).rev() {
        let node = BigRational::from_integer(BigInt::from(i));
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * &node;
        }
        next[0] += &dd[i];
        poly = next;
    }
    poly.truncate(n);
    poly
}

/// Surface area measure of a polygon: per edge, its primitive outer normal
/// and lattice length (edge = length · primitive direction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeNormalFan {
    pub edges: Vec<(Vec<BigInt>, BigRational)>,
}

impl EdgeNormalFan {
    /// `Σ length · direction = 0`, checked exactly.
    pub fn closes(&self) -> bool {
        let mut sx = BigRational::zero();
        let mut sy = BigRational::zero();
        for (n, l) in &self.edges {
            // direction = rotate normal by +90°: (-n_y, n_x)
            sx -= l * BigRational::from_integer(n[1].clone());
            sy += l * BigRational::from_integer(n[0].clone());
        }
        sx.is_zero() && sy.is_zero()
    }
}

/// Edge normals of a polygon; a segment contributes both sides, a point
/// nothing.
pub fn edge_normal_fan(p: &LatticePolytope) -> Result<EdgeNormalFan> {
    if p.dim() != 2 {
        return Err(Error::Dimension(format!("edge normals need a polygon, got dimension {}", p.dim())));
    }
    let v = p.vertices();
    let n = v.len();
    let mut edges = Vec::new();
    if n < 2 {
        return Ok(EdgeNormalFan { edges });
    }
    for i in 0..n {
        let (a, b) = (&v[i], &v[(i + 1) % n]);
        let ex = &b[0] - &a[0];
        let ey = &b[1] - &a[1];
        let den = num_integer::Integer::lcm(ex.denom(), ey.denom());
        let ix = (&ex * BigRational::from_integer(den.clone())).to_integer();
        let iy = (&ey * BigRational::from_integer(den.clone())).to_integer();
        let dir = primitive(vec![ix.clone(), iy.clone()]);
        let len = if dir[0].is_zero() {
            BigRational::new(iy, dir[1].clone() * &den)
        } else {
            BigRational::new(ix, dir[0].clone() * &den)
        };
        // Outer normal of a counter-clockwise edge.
        edges.push((vec![dir[1].clone(), -dir[0].clone()], len));
    }
    Ok(EdgeNormalFan { edges })
}

/// `V(P, Q) = ½ Σ_e ℓ_e h_Q(n_e)` over the edges of `P`.
pub fn mixed_area_sam(p: &LatticePolytope, q: &LatticePolytope) -> Result<BigRational> {
    if q.dim() != 2 {
        return Err(Error::Dimension(format!("mixed area needs polygons, got dimension {}", q.dim())));
    }
    let fan = edge_normal_fan(p)?;
    let total: BigRational = fan.edges.iter().map(|(n, l)| l * q.support(n)).sum();
    Ok(total / BigRational::from_integer(BigInt::from(2)))
}

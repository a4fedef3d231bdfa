//! Polyhedral cones in `R^n` and the partial order they induce.
//!
//! A cone is stored by its facet normals: `K = {x : <a, x> >= 0}`. Extreme
//! rays are derived on demand. Tolerances in the strict tests are scaled by
//! the norm of the tested vector; pass `0.0` on the exact path.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, dot, is_zero_vec, neg, norm, sub};
use crate::scalar::{convert, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeTag {
    Orthant,
    General,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralCone<S = f64> {
    dim: usize,
    facet_normals: Vec<Vec<S>>,
    tag: ConeTag,
}

/// A linear functional `x -> <a, x>`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualFunctional<S = f64> {
    pub vector: Vec<S>,
}

impl<S: Scalar> DualFunctional<S> {
    pub fn eval(&self, x: &[S]) -> S {
        dot(&self.vector, x)
    }

    /// Membership in the dual cone: nonnegative on every extreme ray.
    pub fn in_dual_cone(&self, cone: &PolyhedralCone<S>) -> bool {
        cone.extreme_rays().iter().all(|g| {
            let v = self.eval(g);
            if S::EXACT {
                v >= S::zero()
            } else {
                v.to_f64() >= -S::default_tol() * norm(g) * norm(&self.vector)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderRelation {
    Incomparable,
    Equal,
    /// `y - x` in the cone, nonzero.
    Less,
    /// `y - x` in the interior.
    StrictlyLessInterior,
    Greater,
    StrictlyGreaterInterior,
}

impl OrderRelation {
    /// `x ⪯ y`
    pub fn is_leq(self) -> bool {
        matches!(self, Self::Equal | Self::Less | Self::StrictlyLessInterior)
    }

    /// `x ≺ y`
    pub fn is_lt(self) -> bool {
        matches!(self, Self::Less | Self::StrictlyLessInterior)
    }

    pub fn is_geq(self) -> bool {
        matches!(self, Self::Equal | Self::Greater | Self::StrictlyGreaterInterior)
    }

    pub fn is_gt(self) -> bool {
        matches!(self, Self::Greater | Self::StrictlyGreaterInterior)
    }
}

impl<S: Scalar> PolyhedralCone<S> {
    /// The nonnegative orthant of `R^n`.
    pub fn orthant(n: usize) -> Self {
        assert!(n > 0, "orthant dimension must be positive");
        let facet_normals = (0..n)
            .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect();
        PolyhedralCone { dim: n, facet_normals, tag: ConeTag::Orthant }
    }

    /// Builds `{x : <a, x> >= 0}` from facet normals, rejecting trivial and
    /// non-pointed cones.
    pub fn new(dim: usize, facet_normals: Vec<Vec<S>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidCone("dimension must be positive".into()));
        }
        if facet_normals.is_empty() {
            return Err(Error::InvalidCone("no facet normals".into()));
        }
        if let Some(bad) = facet_normals.iter().find(|a| a.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: bad.len() });
        }
        if linalg::rank(&facet_normals, dim) < dim {
            return Err(Error::InvalidCone(
                "facet normals do not span the space (cone is not pointed)".into(),
            ));
        }
        let is_orthant = facet_normals.len() == dim
            && facet_normals.iter().enumerate().all(|(i, a)| {
                a.iter().enumerate().all(|(j, v)| {
                    if i == j {
                        *v == S::one()
                    } else {
                        v.is_zero()
                    }
                })
            });
        let cone = PolyhedralCone {
            dim,
            facet_normals,
            tag: if is_orthant { ConeTag::Orthant } else { ConeTag::General },
        };
        if cone.extreme_rays().is_empty() {
            return Err(Error::InvalidCone("cone is {0}".into()));
        }
        Ok(cone)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facet_normals(&self) -> &[Vec<S>] {
        &self.facet_normals
    }

    pub fn tag(&self) -> ConeTag {
        self.tag
    }

    pub fn is_orthant(&self) -> bool {
        self.tag == ConeTag::Orthant
    }

    pub fn convert<T: Scalar>(&self) -> PolyhedralCone<T> {
        PolyhedralCone {
            dim: self.dim,
            facet_normals: self
                .facet_normals
                .iter()
                .map(|a| a.iter().map(convert).collect())
                .collect(),
            tag: self.tag,
        }
    }

    /// Extreme rays (generators), canonical representatives.
    pub fn extreme_rays(&self) -> Vec<Vec<S>> {
        if self.is_orthant() {
            return self.facet_normals.clone();
        }
        linalg::extreme_rays(&self.facet_normals, self.dim)
    }

    /// Nonempty interior. For a pointed cone this means the generators span.
    pub fn is_solid(&self) -> bool {
        self.is_orthant() || linalg::rank(&self.extreme_rays(), self.dim) == self.dim
    }

    /// In finite dimension a cone is generating (and total) exactly when it
    /// is solid.
    pub fn is_generating(&self) -> bool {
        self.is_solid()
    }

    fn check_dim(&self, x: &[S]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    /// `<a, x> >= -tol` for every facet normal.
    pub fn contains(&self, x: &[S], tol: f64) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.contains_unchecked(x, tol))
    }

    pub(crate) fn contains_unchecked(&self, x: &[S], tol: f64) -> bool {
        let t = S::from_f64(-tol);
        self.facet_normals.iter().all(|a| dot(a, x) >= t)
    }

    /// Membership with the tolerance scaled by `‖x‖`.
    pub fn contains_scaled(&self, x: &[S], tol: f64) -> bool {
        if tol == 0.0 {
            return self.contains_unchecked(x, 0.0);
        }
        self.contains_unchecked(x, tol * norm(x))
    }

    /// `<a, x> > tol * ‖x‖` for every facet normal.
    pub fn interior_contains(&self, x: &[S], tol: f64) -> Result<bool> {
        self.check_dim(x)?;
        if !self.is_solid() {
            return Err(Error::EmptyInterior);
        }
        Ok(self.interior_unchecked(x, tol))
    }

    pub(crate) fn interior_unchecked(&self, x: &[S], tol: f64) -> bool {
        let t = if tol == 0.0 { S::zero() } else { S::from_f64(tol * norm(x)) };
        self.facet_normals.iter().all(|a| dot(a, x) > t)
    }

    /// Member of the cone but not of its interior, nonzero.
    pub fn on_boundary(&self, x: &[S], tol: f64) -> bool {
        !is_negligible_vec(x, tol)
            && self.contains_scaled(x, tol)
            && !self.interior_unchecked(x, tol)
    }

    /// Facet normals active at `x`: `<a, x> <= tol * ‖x‖`.
    pub fn active_facets(&self, x: &[S], tol: f64) -> Vec<usize> {
        let t = if tol == 0.0 { S::zero() } else { S::from_f64(tol * norm(x)) };
        self.facet_normals
            .iter()
            .enumerate()
            .filter(|(_, a)| dot(a, x) <= t)
            .map(|(i, _)| i)
            .collect()
    }

    /// Classifies `y - x` against the cone.
    pub fn compare(&self, x: &[S], y: &[S], tol: f64) -> Result<OrderRelation> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let d = sub(y, x);
        let scale = norm(x).max(norm(y));
        if (tol == 0.0 && is_zero_vec(&d)) || (tol > 0.0 && norm(&d) <= tol * scale.max(1.0)) {
            return Ok(OrderRelation::Equal);
        }
        let solid = self.is_solid();
        if self.contains_scaled(&d, tol) {
            if solid && self.interior_unchecked(&d, tol) {
                return Ok(OrderRelation::StrictlyLessInterior);
            }
            return Ok(OrderRelation::Less);
        }
        let nd = neg(&d);
        if self.contains_scaled(&nd, tol) {
            if solid && self.interior_unchecked(&nd, tol) {
                return Ok(OrderRelation::StrictlyGreaterInterior);
            }
            return Ok(OrderRelation::Greater);
        }
        Ok(OrderRelation::Incomparable)
    }

    /// A facet normal `a` with `<a, x> = 0` (within `tol * ‖x‖`) and
    /// `<a, v> > tol * ‖v‖`. Facet normals generate the dual cone, so if any
    /// dual functional separates this way one of them does.
    pub fn semi_strong_witness(
        &self,
        x: &[S],
        v: &[S],
        tol: f64,
    ) -> Result<Option<DualFunctional<S>>> {
        self.check_dim(x)?;
        self.check_dim(v)?;
        if !self.on_boundary(x, tol) {
            return Err(Error::NotOnBoundary);
        }
        Ok(self.separating_facet(x, v, tol).map(|i| DualFunctional {
            vector: self.facet_normals[i].clone(),
        }))
    }

    pub(crate) fn separating_facet(&self, x: &[S], v: &[S], tol: f64) -> Option<usize> {
        let tv = if tol == 0.0 { S::zero() } else { S::from_f64(tol * norm(v)) };
        self.active_facets(x, tol)
            .into_iter()
            .find(|&i| dot(&self.facet_normals[i], v) > tv)
    }

    /// Largest `gamma` with `‖x + y‖ >= gamma ‖x‖` on the cone, estimated as
    /// the minimum over probe directions `x` of `dist(-x, K)`. Probes are the
    /// extreme rays plus `samples` seeded positive combinations; the inner
    /// minimization over `y` is solved exactly by active-set enumeration.
    pub fn normality_constant(&self, samples: usize, seed: u64) -> Result<f64> {
        if self.is_orthant() {
            return Ok(1.0);
        }
        let gens: Vec<Vec<f64>> =
            self.extreme_rays().iter().map(|g| linalg::normalize(&crate::scalar::vec_to_f64(g))).collect();
        if linalg::rank(&gens, self.dim) < 1 {
            return Err(Error::InvalidCone("no generators".into()));
        }
        let mut probes = gens.clone();
        let mut rng = crate::sampling::sample_rng(seed, 0);
        for _ in 0..samples {
            let c: Vec<f64> = gens.iter().map(|_| rand::Rng::random::<f64>(&mut rng)).collect();
            let mut x = vec![0.0; self.dim];
            for (ci, g) in c.iter().zip(&gens) {
                for (xi, gi) in x.iter_mut().zip(g) {
                    *xi += ci * gi;
                }
            }
            if linalg::norm_f64(&x) > 0.0 {
                probes.push(linalg::normalize(&x));
            }
        }
        let gamma = probes
            .iter()
            .map(|x| distance_to_cone(&gens, &neg(x)))
            .fold(f64::INFINITY, f64::min);
        Ok(gamma.min(1.0))
    }
}

fn is_negligible_vec<S: Scalar>(x: &[S], tol: f64) -> bool {
    if tol == 0.0 {
        is_zero_vec(x)
    } else {
        norm(x) <= tol
    }
}

/// `min_{c >= 0} ‖G c - z‖` by enumerating supports of size <= n.
fn distance_to_cone(gens: &[Vec<f64>], z: &[f64]) -> f64 {
    use itertools::Itertools;
    let n = z.len();
    let mut best = linalg::norm_f64(z);
    for k in 1..=gens.len().min(n) {
        for idx in (0..gens.len()).combinations(k) {
            let g = nalgebra::DMatrix::from_fn(n, k, |i, j| gens[idx[j]][i]);
            let zz = nalgebra::DVector::from_column_slice(z);
            let gtg = g.transpose() * &g;
            let Some(inv) = gtg.try_inverse() else { continue };
            let c = inv * g.transpose() * &zz;
            if c.iter().any(|v| *v < -1e-12) {
                continue;
            }
            let r = (&g * c - zz).norm();
            best = best.min(r);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orth2() -> PolyhedralCone<f64> {
        PolyhedralCone::orthant(2)
    }

    #[test]
    fn membership_examples() {
        let k = orth2();
        assert!(k.contains(&[1.0, 1.0], 0.0).unwrap());
        assert!(!k.contains(&[-1.0, 1.0], 0.0).unwrap());
        assert!(k.contains(&[0.0, 0.0], 0.0).unwrap());
        assert!(matches!(k.contains(&[1.0], 0.0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn interior_examples() {
        let k = orth2();
        assert!(k.interior_contains(&[1.0, 1.0], 1e-9).unwrap());
        assert!(!k.interior_contains(&[1.0, 0.0], 1e-9).unwrap());
        assert!(!k.interior_contains(&[0.0, 0.0], 1e-9).unwrap());
        assert!(!k.interior_contains(&[0.0, 0.0], 0.0).unwrap());
    }

    #[test]
    fn compare_examples() {
        let k = orth2();
        assert_eq!(k.compare(&[1.0, 0.0], &[2.0, 1.0], 0.0).unwrap(), OrderRelation::StrictlyLessInterior);
        assert_eq!(k.compare(&[1.0, 0.0], &[1.0, 1.0], 0.0).unwrap(), OrderRelation::Less);
        assert_eq!(k.compare(&[1.0, 0.0], &[0.0, 1.0], 0.0).unwrap(), OrderRelation::Incomparable);
        assert_eq!(k.compare(&[2.0, 1.0], &[1.0, 0.0], 0.0).unwrap(), OrderRelation::StrictlyGreaterInterior);
        assert_eq!(k.compare(&[1.0, 1.0], &[1.0, 1.0], 0.0).unwrap(), OrderRelation::Equal);
    }

    #[test]
    fn semi_strong_witness_examples() {
        let k = orth2();
        let w = k.semi_strong_witness(&[1.0, 0.0], &[2.0, 1.0], 0.0).unwrap().unwrap();
        assert_eq!(w.vector, vec![0.0, 1.0]);
        assert!(k.semi_strong_witness(&[1.0, 0.0], &[3.0, 0.0], 0.0).unwrap().is_none());
        let k3 = PolyhedralCone::<f64>::orthant(3);
        let w = k3.semi_strong_witness(&[1.0, 1.0, 0.0], &[0.0, 0.0, 5.0], 0.0).unwrap().unwrap();
        assert_eq!(w.vector, vec![0.0, 0.0, 1.0]);
        assert!(matches!(
            k.semi_strong_witness(&[1.0, 1.0], &[1.0, 1.0], 0.0),
            Err(Error::NotOnBoundary)
        ));
    }

    #[test]
    fn rejects_non_pointed_and_trivial() {
        assert!(PolyhedralCone::<f64>::new(2, vec![vec![1.0, 0.0]]).is_err());
        assert!(PolyhedralCone::<f64>::new(
            2,
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]]
        )
        .is_err());
        assert!(PolyhedralCone::<f64>::new(2, vec![]).is_err());
    }

    #[test]
    fn general_cone_generators_and_tag() {
        let k = PolyhedralCone::new(2, vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(k.tag(), ConeTag::General);
        let rays = k.extreme_rays();
        assert_eq!(rays.len(), 2);
        assert!(rays.iter().any(|r| linalg::same_ray(r, &[0.0, 1.0])));
        assert!(rays.iter().any(|r| linalg::same_ray(r, &[1.0, -1.0])));
        assert!(k.is_solid() && k.is_generating());
        let k = PolyhedralCone::new(2, vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(k.tag(), ConeTag::General);
    }

    #[test]
    fn dual_functionals() {
        let k = PolyhedralCone::new(2, vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        for a in k.facet_normals() {
            assert!(DualFunctional { vector: a.clone() }.in_dual_cone(&k));
        }
        assert!(!DualFunctional { vector: vec![0.0, 1.0] }.in_dual_cone(&k));
    }

    #[test]
    fn normality_of_orthant_and_sector() {
        assert_eq!(orth2().normality_constant(100, 1).unwrap(), 1.0);
        let k = PolyhedralCone::new(2, vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let g = k.normality_constant(2000, 1).unwrap();
        assert!((g - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9, "{g}");
    }
}

//! Continuous 1-homogeneous maps on a polyhedral cone.
//!
//! Every variant is homogeneous by construction: linear maps, linear maps
//! selected on conic regions, componentwise min/max of linear maps, and
//! nonnegative scalings and compositions of these.

mod classify;

pub(crate) use classify::rays_in_subspace;
pub use classify::{check_order_preserving, check_superadditive, classify_positivity, PositivityReport, SuperadditiveScope};

use itertools::Itertools;

use crate::cone::PolyhedralCone;
use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm, Matrix};
use crate::sampling::{sample_rng, ConeSampler};
use crate::scalar::{convert, Rational, Scalar};

/// Upper bound on the number of argmin/argmax selection patterns expanded
/// when a min/max map is rewritten in piecewise form.
const MAX_PATTERNS: usize = 4096;

/// A conic region `{x : <a, x> > 0 (strict), <b, x> >= 0 (weak)}` carrying
/// the matrix applied on it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicRegion<S = f64> {
    pub strict: Vec<Vec<S>>,
    pub weak: Vec<Vec<S>>,
    pub matrix: Matrix<S>,
}

impl<S: Scalar> ConicRegion<S> {
    pub fn new(strict: Vec<Vec<S>>, weak: Vec<Vec<S>>, matrix: Matrix<S>) -> Self {
        ConicRegion { strict, weak, matrix }
    }

    pub fn contains(&self, x: &[S], tol: f64) -> bool {
        let t = if tol == 0.0 { S::zero() } else { S::from_f64(tol * norm(x)) };
        self.strict.iter().all(|a| dot(a, x) > t) && self.weak.iter().all(|b| dot(b, x) >= -t.clone())
    }

    pub fn closure_contains(&self, x: &[S], tol: f64) -> bool {
        let t = if tol == 0.0 { S::zero() } else { S::from_f64(tol * norm(x)) };
        self.closure_rows().iter().all(|a| dot(a, x) >= -t.clone())
    }

    /// Inequality rows of the closure (`>= 0`).
    pub fn closure_rows(&self) -> Vec<Vec<S>> {
        self.strict.iter().chain(&self.weak).cloned().collect()
    }

    fn convert<T: Scalar>(&self) -> ConicRegion<T> {
        let conv = |rows: &Vec<Vec<S>>| -> Vec<Vec<T>> {
            rows.iter().map(|r| r.iter().map(convert).collect()).collect()
        };
        ConicRegion {
            strict: conv(&self.strict),
            weak: conv(&self.weak),
            matrix: self.matrix.convert(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapKind<S = f64> {
    Linear(Matrix<S>),
    PiecewiseConicalLinear(Vec<ConicRegion<S>>),
    MinOfLinear(Vec<Matrix<S>>),
    MaxOfLinear(Vec<Matrix<S>>),
    /// `maps[0] ∘ maps[1] ∘ ...`; the last entry is applied first.
    Composition(Vec<MapKind<S>>),
    Scaled(S, Box<MapKind<S>>),
}

impl<S: Scalar> MapKind<S> {
    fn defined_on_space(&self) -> bool {
        match self {
            MapKind::Linear(_) | MapKind::MinOfLinear(_) | MapKind::MaxOfLinear(_) => true,
            MapKind::PiecewiseConicalLinear(_) => false,
            MapKind::Composition(ms) => ms.iter().all(MapKind::defined_on_space),
            MapKind::Scaled(_, m) => m.defined_on_space(),
        }
    }

    fn eval(&self, x: &[S], cone: &PolyhedralCone<S>, tol: f64) -> Result<Vec<S>> {
        match self {
            MapKind::Linear(a) => Ok(a.mul_vec(x)),
            MapKind::PiecewiseConicalLinear(regions) => {
                if !cone.contains_scaled(x, tol) {
                    return Err(Error::OutsideCone);
                }
                let region = regions
                    .iter()
                    .find(|r| r.contains(x, tol))
                    .or_else(|| regions.iter().find(|r| r.closure_contains(x, tol)))
                    .ok_or(Error::PartitionGap)?;
                Ok(region.matrix.mul_vec(x))
            }
            MapKind::MinOfLinear(ms) => Ok(componentwise(ms, x, |a, b| a < b)),
            MapKind::MaxOfLinear(ms) => Ok(componentwise(ms, x, |a, b| a > b)),
            MapKind::Composition(ms) => {
                let mut y = x.to_vec();
                for m in ms.iter().rev() {
                    y = m.eval(&y, cone, tol)?;
                }
                Ok(y)
            }
            MapKind::Scaled(c, m) => Ok(linalg::scale(c, &m.eval(x, cone, tol)?)),
        }
    }

    fn convert<T: Scalar>(&self) -> MapKind<T> {
        match self {
            MapKind::Linear(a) => MapKind::Linear(a.convert()),
            MapKind::PiecewiseConicalLinear(rs) => {
                MapKind::PiecewiseConicalLinear(rs.iter().map(ConicRegion::convert).collect())
            }
            MapKind::MinOfLinear(ms) => MapKind::MinOfLinear(ms.iter().map(Matrix::convert).collect()),
            MapKind::MaxOfLinear(ms) => MapKind::MaxOfLinear(ms.iter().map(Matrix::convert).collect()),
            MapKind::Composition(ms) => MapKind::Composition(ms.iter().map(MapKind::convert).collect()),
            MapKind::Scaled(c, m) => MapKind::Scaled(convert(c), Box::new(m.convert())),
        }
    }

    fn conjugate(&self) -> Result<MapKind<S>> {
        Ok(match self {
            MapKind::Linear(a) => MapKind::Linear(a.clone()),
            MapKind::MinOfLinear(ms) => MapKind::MaxOfLinear(ms.clone()),
            MapKind::MaxOfLinear(ms) => MapKind::MinOfLinear(ms.clone()),
            MapKind::Composition(ms) => {
                MapKind::Composition(ms.iter().map(MapKind::conjugate).collect::<Result<_>>()?)
            }
            MapKind::Scaled(c, m) => MapKind::Scaled(c.clone(), Box::new(m.conjugate()?)),
            MapKind::PiecewiseConicalLinear(_) => {
                return Err(Error::ConeOnlyMap("negate_conjugate needs a map defined on R^n"))
            }
        })
    }

    /// Linear pieces covering the domain (no cone rows included).
    fn pieces(&self, dim: usize) -> Result<Vec<ConicRegion<S>>> {
        match self {
            MapKind::Linear(a) => Ok(vec![ConicRegion::new(vec![], vec![], a.clone())]),
            MapKind::PiecewiseConicalLinear(rs) => Ok(rs.clone()),
            MapKind::MinOfLinear(ms) => selection_pieces(ms, dim, false),
            MapKind::MaxOfLinear(ms) => selection_pieces(ms, dim, true),
            MapKind::Scaled(c, m) => Ok(m
                .pieces(dim)?
                .into_iter()
                .map(|r| ConicRegion { matrix: r.matrix.scale(c), ..r })
                .collect()),
            MapKind::Composition(_) => Err(Error::Unsupported("piecewise form of a composition")),
        }
    }

    fn flatten(self) -> Vec<MapKind<S>> {
        match self {
            MapKind::Composition(ms) => ms.into_iter().flat_map(MapKind::flatten).collect(),
            other => vec![other],
        }
    }
}

fn componentwise<S: Scalar>(ms: &[Matrix<S>], x: &[S], better: impl Fn(&S, &S) -> bool) -> Vec<S> {
    let mut out = ms[0].mul_vec(x);
    for m in &ms[1..] {
        for (o, v) in out.iter_mut().zip(m.mul_vec(x)) {
            if better(&v, o) {
                *o = v;
            }
        }
    }
    out
}

/// Regions on which each output coordinate selects a fixed matrix row: for
/// `min`, row `i` of matrix `k` is selected where it is <= row `i` of every
/// other matrix.
fn selection_pieces<S: Scalar>(ms: &[Matrix<S>], dim: usize, max: bool) -> Result<Vec<ConicRegion<S>>> {
    let m = ms.len();
    let patterns = m.checked_pow(dim as u32).unwrap_or(usize::MAX);
    if patterns > MAX_PATTERNS {
        return Err(Error::Unsupported("piecewise form: too many selection patterns"));
    }
    let mut out = Vec::new();
    for pattern in (0..dim).map(|_| 0..m).multi_cartesian_product() {
        let mut weak = Vec::new();
        let mut rows = Vec::with_capacity(dim);
        for (i, &k) in pattern.iter().enumerate() {
            let chosen = ms[k].row(i);
            for (j, other) in ms.iter().enumerate() {
                if j == k {
                    continue;
                }
                let diff = if max { linalg::sub(chosen, other.row(i)) } else { linalg::sub(other.row(i), chosen) };
                if !linalg::is_zero_vec(&diff) {
                    weak.push(diff);
                }
            }
            rows.push(chosen.to_vec());
        }
        out.push(ConicRegion::new(vec![], weak, Matrix::from_rows(rows)?));
    }
    Ok(out)
}

/// A continuous 1-homogeneous map together with its domain cone.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeMap<S = f64> {
    kind: MapKind<S>,
    cone: PolyhedralCone<S>,
}

impl<S: Scalar> ConeMap<S> {
    fn check_matrix(cone: &PolyhedralCone<S>, a: &Matrix<S>) -> Result<()> {
        let n = cone.dim();
        if a.nrows() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.nrows() });
        }
        if a.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.ncols() });
        }
        Ok(())
    }

    pub fn linear(cone: PolyhedralCone<S>, a: Matrix<S>) -> Result<Self> {
        Self::check_matrix(&cone, &a)?;
        Ok(ConeMap { kind: MapKind::Linear(a), cone })
    }

    pub fn min_of_linear(cone: PolyhedralCone<S>, ms: Vec<Matrix<S>>) -> Result<Self> {
        if ms.is_empty() {
            return Err(Error::InvalidMap("min of an empty family".into()));
        }
        for a in &ms {
            Self::check_matrix(&cone, a)?;
        }
        Ok(ConeMap { kind: MapKind::MinOfLinear(ms), cone })
    }

    pub fn max_of_linear(cone: PolyhedralCone<S>, ms: Vec<Matrix<S>>) -> Result<Self> {
        if ms.is_empty() {
            return Err(Error::InvalidMap("max of an empty family".into()));
        }
        for a in &ms {
            Self::check_matrix(&cone, a)?;
        }
        Ok(ConeMap { kind: MapKind::MaxOfLinear(ms), cone })
    }

    /// Piecewise linear map on conic regions. Validates that every region
    /// meets the cone, that matrices agree on shared boundary rays, and that
    /// the regions cover the cone.
    pub fn piecewise(cone: PolyhedralCone<S>, regions: Vec<ConicRegion<S>>) -> Result<Self> {
        if regions.is_empty() {
            return Err(Error::InvalidMap("no regions".into()));
        }
        let n = cone.dim();
        for r in &regions {
            Self::check_matrix(&cone, &r.matrix)?;
            if let Some(bad) = r.closure_rows().iter().find(|a| a.len() != n) {
                return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
            }
        }
        let map = ConeMap { kind: MapKind::PiecewiseConicalLinear(regions), cone };
        map.validate_pieces()?;
        Ok(map)
    }

    /// `maps[0] ∘ maps[1] ∘ ...`, flattened. All maps must share the cone.
    pub fn compose(maps: Vec<ConeMap<S>>) -> Result<Self> {
        let first = maps.first().ok_or_else(|| Error::InvalidMap("empty composition".into()))?;
        let cone = first.cone.clone();
        if maps.iter().any(|m| m.cone != cone) {
            return Err(Error::InvalidMap("composition of maps on different cones".into()));
        }
        let kinds = maps.into_iter().flat_map(|m| m.kind.flatten()).collect();
        Ok(ConeMap { kind: MapKind::Composition(kinds), cone })
    }

    pub fn scaled(c: S, map: ConeMap<S>) -> Result<Self> {
        if c < S::zero() {
            return Err(Error::InvalidMap("scaling factor must be nonnegative".into()));
        }
        Ok(ConeMap { kind: MapKind::Scaled(c, Box::new(map.kind)), cone: map.cone })
    }

    pub fn kind(&self) -> &MapKind<S> {
        &self.kind
    }

    pub fn cone(&self) -> &PolyhedralCone<S> {
        &self.cone
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    /// Whether the map is defined on all of `R^n` rather than only on its cone.
    pub fn defined_on_space(&self) -> bool {
        self.kind.defined_on_space()
    }

    pub fn apply(&self, x: &[S]) -> Result<Vec<S>> {
        self.apply_with_tol(x, S::default_tol())
    }

    pub fn apply_with_tol(&self, x: &[S], tol: f64) -> Result<Vec<S>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        self.kind.eval(x, &self.cone, tol)
    }

    /// `T^k(x)`.
    pub fn apply_power(&self, x: &[S], k: usize) -> Result<Vec<S>> {
        let mut y = x.to_vec();
        for _ in 0..k {
            y = self.apply(&y)?;
        }
        Ok(y)
    }

    pub fn convert<T: Scalar>(&self) -> ConeMap<T> {
        ConeMap { kind: self.kind.convert(), cone: self.cone.convert() }
    }

    pub fn to_f64(&self) -> ConeMap<f64> {
        self.convert()
    }

    /// The same map over the rationals (exact: every double is rational).
    pub fn to_exact(&self) -> ConeMap<Rational> {
        self.convert()
    }

    /// `S(x) = -T(-x)`.
    pub fn negate_conjugate(&self) -> Result<ConeMap<S>> {
        Ok(ConeMap { kind: self.kind.conjugate()?, cone: self.cone.clone() })
    }

    /// Linear pieces whose closures cover the domain. For maps defined on the
    /// cone only, the pieces should be intersected with the cone.
    pub fn linear_pieces(&self) -> Result<Vec<ConicRegion<S>>> {
        self.kind.pieces(self.dim())
    }

    /// Structurally superadditive on `R^n`: linear maps, componentwise minima
    /// of linear maps, and their nonnegative scalings.
    pub fn is_structurally_superadditive(&self) -> bool {
        fn go<S: Scalar>(k: &MapKind<S>) -> bool {
            match k {
                MapKind::Linear(_) | MapKind::MinOfLinear(_) => true,
                MapKind::Scaled(_, m) => go(m),
                _ => false,
            }
        }
        go(&self.kind)
    }

    /// Extreme rays of every piece intersected with the cone. These carry the
    /// boundary behaviour of piecewise maps and are always sampled.
    pub fn region_rays(&self) -> Vec<Vec<S>> {
        let mut out: Vec<Vec<S>> = self.cone.extreme_rays();
        if let Ok(pieces) = self.linear_pieces() {
            if pieces.len() > 1 {
                for p in pieces {
                    let mut rows = self.cone.facet_normals().to_vec();
                    rows.extend(p.closure_rows());
                    for r in linalg::extreme_rays(&rows, self.dim()) {
                        if !out.iter().any(|o| linalg::same_ray(o, &r)) {
                            out.push(r);
                        }
                    }
                }
            }
        }
        out
    }

    fn validate_pieces(&self) -> Result<()> {
        let MapKind::PiecewiseConicalLinear(regions) = &self.kind else { return Ok(()) };
        let n = self.dim();
        let facets = self.cone.facet_normals();
        let exact_tol = S::default_tol();
        for (i, r) in regions.iter().enumerate() {
            let mut rows = facets.to_vec();
            rows.extend(r.closure_rows());
            if linalg::extreme_rays(&rows, n).is_empty() {
                return Err(Error::InvalidMap(format!("region {i} does not meet the cone")));
            }
        }
        for (i, j) in (0..regions.len()).tuple_combinations() {
            let mut rows = facets.to_vec();
            rows.extend(regions[i].closure_rows());
            rows.extend(regions[j].closure_rows());
            for g in linalg::extreme_rays(&rows, n) {
                let a = regions[i].matrix.mul_vec(&g);
                let b = regions[j].matrix.mul_vec(&g);
                let diff = linalg::sub(&a, &b);
                let ok = if S::EXACT {
                    linalg::is_zero_vec(&diff)
                } else {
                    norm(&diff) <= 1e-9 * (norm(&a) + norm(&b)).max(1.0)
                };
                if !ok {
                    return Err(Error::InvalidMap(format!(
                        "regions {i} and {j} disagree on shared ray {:?}",
                        crate::scalar::vec_to_f64(&g)
                    )));
                }
            }
        }
        // cover: every generator and a fixed set of seeded cone points
        let sampler = ConeSampler::new(&self.cone);
        let probes = sampler
            .generators()
            .iter()
            .cloned()
            .chain((0..256).map(|k| sampler.cone_point(&mut sample_rng(0x5eed, k))));
        for p in probes {
            if !regions.iter().any(|r| r.closure_contains(&p, exact_tol)) {
                return Err(Error::PartitionGap);
            }
        }
        Ok(())
    }
}

/// Nonnegative combination helper used across modules: `x - beta * y`.
pub(crate) fn sub_scaled<S: Scalar>(x: &[S], beta: &S, y: &[S]) -> Vec<S> {
    x.iter().zip(y).map(|(a, b)| a.clone() - beta.clone() * b.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn orth2() -> PolyhedralCone<f64> {
        PolyhedralCone::orthant(2)
    }

    #[test]
    fn linear_and_dimension_errors() {
        let t = ConeMap::linear(orth2(), m(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        assert_eq!(t.apply(&[1.0, 0.0]).unwrap(), vec![2.0, 1.0]);
        assert!(matches!(t.apply(&[1.0]), Err(Error::DimensionMismatch { .. })));
        assert!(ConeMap::linear(orth2(), m(&[&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]])).is_err());
    }

    #[test]
    fn min_max_and_conjugate() {
        let a = m(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let b = m(&[&[1.0, 2.0], &[1.0, 1.0]]);
        let t = ConeMap::min_of_linear(orth2(), vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(t.apply(&[1.0, 3.0]).unwrap(), vec![5.0, 4.0]);
        let s = t.negate_conjugate().unwrap();
        assert_eq!(s, ConeMap::max_of_linear(orth2(), vec![a.clone(), b]).unwrap());
        for x in [[1.0, -2.0], [0.5, 0.25], [-1.0, -1.0]] {
            let lhs = s.apply(&x).unwrap();
            let rhs = linalg::neg(&t.apply(&linalg::neg(&x)).unwrap());
            assert_eq!(lhs, rhs);
        }
        let l = ConeMap::linear(orth2(), a).unwrap();
        assert_eq!(l.negate_conjugate().unwrap(), l);
    }

    #[test]
    fn composition_is_flattened_and_ordered() {
        let a = ConeMap::linear(orth2(), m(&[&[1.0, 1.0], &[0.0, 1.0]])).unwrap();
        let b = ConeMap::linear(orth2(), m(&[&[2.0, 0.0], &[0.0, 3.0]])).unwrap();
        let ab = ConeMap::compose(vec![a.clone(), b.clone()]).unwrap();
        let nested = ConeMap::compose(vec![ab.clone(), a.clone()]).unwrap();
        let MapKind::Composition(ks) = nested.kind() else { panic!() };
        assert_eq!(ks.len(), 3);
        let x = [0.5, 2.0];
        assert_eq!(ab.apply(&x).unwrap(), a.apply(&b.apply(&x).unwrap()).unwrap());
    }

    #[test]
    fn scaled_rejects_negative() {
        let a = ConeMap::linear(orth2(), Matrix::identity(2)).unwrap();
        assert!(ConeMap::scaled(-1.0, a.clone()).is_err());
        let s = ConeMap::scaled(2.0, a).unwrap();
        assert_eq!(s.apply(&[1.0, 2.0]).unwrap(), vec![2.0, 4.0]);
    }

    #[test]
    fn piecewise_validation_catches_discontinuity_and_gaps() {
        let k = PolyhedralCone::<Rational>::orthant(2);
        let one = || rat(1, 1);
        let zero = || rat(0, 1);
        let lower = ConicRegion::new(vec![vec![one(), -one()]], vec![], Matrix::identity(2));
        let upper_bad = ConicRegion::new(
            vec![],
            vec![vec![-one(), one()]],
            Matrix::scalar_multiple(2, rat(2, 1)),
        );
        assert!(matches!(
            ConeMap::piecewise(k.clone(), vec![lower.clone(), upper_bad]),
            Err(Error::InvalidMap(_))
        ));
        let gap = ConicRegion::new(vec![vec![rat(-2, 1), one()]], vec![], Matrix::identity(2));
        assert!(matches!(
            ConeMap::piecewise(k.clone(), vec![lower.clone(), gap]),
            Err(Error::PartitionGap)
        ));
        let upper = ConicRegion::new(vec![], vec![vec![-one(), one()]], Matrix::identity(2));
        let t = ConeMap::piecewise(k, vec![lower, upper]).unwrap();
        assert_eq!(t.apply(&[one(), zero()]).unwrap(), vec![one(), zero()]);
        assert!(matches!(t.apply(&[-one(), zero()]), Err(Error::OutsideCone)));
        assert!(t.negate_conjugate().is_err());
    }

    #[test]
    fn min_pieces_reproduce_the_map() {
        let a = m(&[&[3.0, 1.0], &[1.0, 3.0]]);
        let b = m(&[&[2.0, 2.0], &[2.0, 2.0]]);
        let t = ConeMap::min_of_linear(orth2(), vec![a, b]).unwrap();
        let pieces = t.linear_pieces().unwrap();
        assert_eq!(pieces.len(), 4);
        for x in [[1.0, 0.0], [0.2, 0.9], [-1.0, 0.5], [2.0, -3.0]] {
            let y = t.apply(&x).unwrap();
            let covering: Vec<_> = pieces.iter().filter(|p| p.closure_contains(&x, 1e-12)).collect();
            assert!(!covering.is_empty());
            for p in covering {
                assert_eq!(p.matrix.mul_vec(&x), y);
            }
        }
    }
}

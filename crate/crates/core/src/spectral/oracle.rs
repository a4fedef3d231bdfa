use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use super::{unit_of, EigenMethod, EigenPair, Location};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::maps::{rays_in_subspace, ConeMap, ConicRegion};
use crate::scalar::{format_rational, rationalize, Rational, Scalar};

/// The oracle enumerates regions and their eigenspaces; beyond this dimension
/// that stops being practical.
pub const ORACLE_MAX_DIM: usize = 3;

/// Largest denominator tried when recovering an eigenvalue as a rational.
const EIGEN_MAX_DEN: i64 = 1_000_000;

/// All eigenvectors for one eigenvalue, as the extreme rays of the union of
/// `ker(A_P - lambda I) ∩ P` over the pieces `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigencone {
    pub lambda: f64,
    pub lambda_exact: Option<Rational>,
    /// Unit vectors along the rays.
    pub rays: Vec<Vec<f64>>,
    /// Canonical rational rays, present when every ray was verified exactly.
    pub rays_exact: Option<Vec<Vec<Rational>>>,
    /// Dimension of the span of the rays.
    pub dim: usize,
}

impl Serialize for Eigencone {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("lambda", &self.lambda)?;
        if let Some(l) = &self.lambda_exact {
            m.serialize_entry("lambda_exact", &format_rational(l))?;
        }
        m.serialize_entry("rays", &self.rays)?;
        if let Some(rs) = &self.rays_exact {
            let rs: Vec<Vec<String>> = rs.iter().map(|r| r.iter().map(format_rational).collect()).collect();
            m.serialize_entry("rays_exact", &rs)?;
        }
        m.serialize_entry("dim", &self.dim)?;
        m.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenOracle {
    /// One pair per eigencone ray.
    pub pairs: Vec<EigenPair>,
    pub eigencones: Vec<Eigencone>,
    /// Largest nonnegative eigenvalue with an eigenvector in the swept set.
    pub r_hat: Option<f64>,
    pub r_hat_exact: Option<Rational>,
}

impl Serialize for EigenOracle {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("pairs", &self.pairs)?;
        m.serialize_entry("eigencones", &self.eigencones)?;
        m.serialize_entry("r_hat", &self.r_hat)?;
        m.serialize_entry("r_hat_exact", &self.r_hat_exact.as_ref().map(format_rational))?;
        m.end()
    }
}

impl EigenOracle {
    /// Distinct eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigencones.iter().map(|c| c.lambda).collect()
    }

    pub fn cone_for(&self, lambda: f64, tol: f64) -> Option<&Eigencone> {
        self.eigencones.iter().find(|c| (c.lambda - lambda).abs() <= tol)
    }
}

struct Candidate {
    lambda: f64,
    exact: Option<(Rational, Vec<Rational>)>,
    ray: Vec<f64>,
}

/// Cone eigenpairs of a map with linear pieces, by solving each piece's
/// eigenproblem and keeping eigenvectors inside the piece ∩ cone. Whole
/// eigenspaces are kept, so a piece carrying `lambda I` contributes all of
/// its rays.
pub fn enumerate_eigenpairs_pwl<S: Scalar>(map: &ConeMap<S>) -> Result<EigenOracle> {
    let t = map.to_exact();
    let domain = vec![t.cone().facet_normals().to_vec()];
    sweep(map, &t, &domain)
}

/// Eigenpairs on all of `R^n` for maps defined there, sweeping every piece
/// against each closed orthant (pointed pieces of space).
pub fn enumerate_space_eigenpairs<S: Scalar>(map: &ConeMap<S>) -> Result<EigenOracle> {
    if !map.defined_on_space() {
        return Err(Error::ConeOnlyMap("the space sweep needs a map defined on R^n"));
    }
    let t = map.to_exact();
    let n = t.dim();
    let orthants: Vec<Vec<Vec<Rational>>> = (0..1usize << n)
        .map(|signs| {
            (0..n)
                .map(|i| {
                    let s = if signs >> i & 1 == 1 { -1 } else { 1 };
                    (0..n).map(|j| Rational::from_i64(if i == j { s } else { 0 })).collect()
                })
                .collect()
        })
        .collect();
    sweep(map, &t, &orthants)
}

fn sweep<S: Scalar>(map: &ConeMap<S>, t: &ConeMap<Rational>, domains: &[Vec<Vec<Rational>>]) -> Result<EigenOracle> {
    let n = t.dim();
    if n > ORACLE_MAX_DIM {
        return Err(Error::OracleDimension(n));
    }
    let pieces = t.linear_pieces()?;
    let tf = t.to_f64();
    let mut found: Vec<Candidate> = Vec::new();
    for piece in &pieces {
        let lambdas = linalg::real_eigenvalues(&piece.matrix);
        for domain in domains {
            let mut rows = domain.clone();
            rows.extend(piece.closure_rows());
            for &lf in &lambdas {
                found.extend(piece_candidates(t, &tf, piece, &rows, lf));
            }
        }
    }
    Ok(assemble(map, found))
}

fn piece_candidates(
    t: &ConeMap<Rational>,
    tf: &ConeMap<f64>,
    piece: &ConicRegion<Rational>,
    rows: &[Vec<Rational>],
    lf: f64,
) -> Vec<Candidate> {
    let n = t.dim();
    if let Some(q) = rationalize(lf, EIGEN_MAX_DEN).filter(|q| (q.to_f64() - lf).abs() <= 1e-9 * (1.0 + lf.abs())) {
        let shifted = piece.matrix.shift(&q);
        let basis = linalg::nullspace(&shifted.to_rows(), n);
        if !basis.is_empty() {
            return rays_in_subspace(rows, &basis, n)
                .into_iter()
                .filter(|r| {
                    t.apply(r)
                        .map(|y| y == r.iter().map(|v| v * &q).collect::<Vec<_>>())
                        .unwrap_or(false)
                })
                .map(|r| Candidate { lambda: q.to_f64(), ray: unit_of(&r), exact: Some((q.clone(), r)) })
                .collect();
        }
    }
    let a = piece.matrix.convert::<f64>();
    let basis = approx_nullspace(&a.shift(&lf));
    if basis.is_empty() {
        return Vec::new();
    }
    let rows_f: Vec<Vec<f64>> = rows.iter().map(|r| crate::scalar::vec_to_f64(r)).collect();
    rays_in_subspace(&rows_f, &basis, n)
        .into_iter()
        .filter(|r| {
            let x = linalg::normalize(r);
            tf.apply(&x)
                .map(|y| {
                    let lx = linalg::scale(&lf, &x);
                    linalg::norm_f64(&linalg::sub(&y, &lx)) <= 1e-8 * (1.0 + lf.abs())
                })
                .unwrap_or(false)
        })
        .map(|r| Candidate { lambda: lf, ray: linalg::normalize(&r), exact: None })
        .collect()
}

/// Right singular vectors of `m` whose singular values are negligible.
fn approx_nullspace(m: &Matrix<f64>) -> Vec<Vec<f64>> {
    let a: DMatrix<f64> = m.to_nalgebra();
    let scale = m.max_abs().max(1.0);
    let svd = a.svd(false, true);
    let Some(vt) = svd.v_t else { return Vec::new() };
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= 1e-7 * scale)
        .map(|(i, _)| vt.row(i).iter().copied().collect())
        .collect()
}

fn assemble<S: Scalar>(map: &ConeMap<S>, mut found: Vec<Candidate>) -> EigenOracle {
    found.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let mut groups: Vec<Vec<Candidate>> = Vec::new();
    for c in found {
        match groups.last_mut() {
            Some(g) if same_eigenvalue(&g[0], &c) => {
                if !g.iter().any(|o| same_candidate_ray(o, &c)) {
                    g.push(c);
                }
            }
            _ => groups.push(vec![c]),
        }
    }
    let mut pairs = Vec::new();
    let mut cones = Vec::new();
    for g in groups {
        let all_exact = g.iter().all(|c| c.exact.is_some());
        let lambda_exact = if all_exact { g[0].exact.as_ref().map(|e| e.0.clone()) } else { None };
        let rays: Vec<Vec<f64>> = g.iter().map(|c| c.ray.clone()).collect();
        let rays_exact: Option<Vec<Vec<Rational>>> =
            all_exact.then(|| g.iter().map(|c| c.exact.as_ref().expect("checked").1.clone()).collect());
        let dim = match &rays_exact {
            Some(rs) => linalg::rank(rs, map.dim()),
            None => rank_f64(&rays),
        };
        for c in &g {
            pairs.push(EigenPair {
                lambda: c.lambda,
                x: c.ray.clone(),
                location: Location::of(map, &c.ray),
                method: EigenMethod::RegionOracle,
                residual: oracle_residual(map, c),
                exact: c.exact.clone(),
            });
        }
        cones.push(Eigencone { lambda: g[0].lambda, lambda_exact, rays, rays_exact, dim });
    }
    let in_cone: Vec<&EigenPair> =
        pairs.iter().filter(|p| p.location != Location::Outside && p.lambda >= 0.0).collect();
    let r_hat = in_cone.iter().map(|p| p.lambda).fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
    let r_hat_exact = if !in_cone.is_empty() && in_cone.iter().all(|p| p.exact.is_some()) {
        in_cone.iter().map(|p| p.exact.as_ref().expect("checked").0.clone()).max()
    } else {
        None
    };
    EigenOracle { pairs, eigencones: cones, r_hat, r_hat_exact }
}

fn same_eigenvalue(a: &Candidate, b: &Candidate) -> bool {
    match (&a.exact, &b.exact) {
        (Some(x), Some(y)) => x.0 == y.0,
        _ => (a.lambda - b.lambda).abs() <= 1e-9 * (1.0 + a.lambda.abs()),
    }
}

fn same_candidate_ray(a: &Candidate, b: &Candidate) -> bool {
    match (&a.exact, &b.exact) {
        (Some(x), Some(y)) => linalg::same_ray(&x.1, &y.1),
        _ => linalg::dist_f64(&a.ray, &b.ray) <= 1e-8,
    }
}

fn rank_f64(rays: &[Vec<f64>]) -> usize {
    if rays.is_empty() {
        return 0;
    }
    let n = rays[0].len();
    let m = DMatrix::from_fn(rays.len(), n, |i, j| rays[i][j]);
    m.svd(false, false).rank(1e-9)
}

fn oracle_residual<S: Scalar>(map: &ConeMap<S>, c: &Candidate) -> f64 {
    let t = map.to_f64();
    t.apply(&c.ray)
        .map(|y| linalg::norm_f64(&linalg::sub(&y, &linalg::scale(&c.lambda, &c.ray))))
        .unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::PolyhedralCone;
    use crate::scalar::rat;

    fn lin(rows: &[&[f64]]) -> ConeMap<f64> {
        let m = Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap();
        ConeMap::linear(PolyhedralCone::orthant(rows.len()), m).unwrap()
    }

    #[test]
    fn symmetric_matrix_has_one_cone_eigenpair() {
        let o = enumerate_eigenpairs_pwl(&lin(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap();
        assert_eq!(o.pairs.len(), 1);
        assert_eq!(o.r_hat_exact, Some(rat(3, 1)));
        let s = 0.5f64.sqrt();
        assert!(linalg::dist_f64(&o.pairs[0].x, &[s, s]) < 1e-12);
        assert_eq!(o.eigencones[0].dim, 1);
    }

    #[test]
    fn permutation_matrix_excludes_negative_eigenvalue() {
        let t = lin(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let o = enumerate_eigenpairs_pwl(&t).unwrap();
        assert_eq!(o.pairs.len(), 1);
        assert_eq!(o.pairs[0].lambda, 1.0);
        let space = enumerate_space_eigenpairs(&t).unwrap();
        assert!(space.pairs.iter().any(|p| p.lambda == -1.0 && p.location == Location::Outside));
    }

    #[test]
    fn scalar_matrix_gives_full_eigencone() {
        let o = enumerate_eigenpairs_pwl(&lin(&[&[2.0, 0.0], &[0.0, 2.0]])).unwrap();
        assert_eq!(o.eigencones.len(), 1);
        assert_eq!(o.eigencones[0].dim, 2);
    }

    #[test]
    fn irrational_perron_root_uses_floating_path() {
        let t = lin(&[&[1.0, 1.0], &[1.0, 0.0]]);
        let o = enumerate_eigenpairs_pwl(&t).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert_eq!(o.pairs.len(), 1);
        assert!((o.r_hat.unwrap() - phi).abs() < 1e-12);
        assert!(o.pairs[0].exact.is_none());
        assert!(o.pairs[0].verify(&t));
    }

    #[test]
    fn rejects_high_dimension() {
        let t = ConeMap::linear(PolyhedralCone::orthant(4), Matrix::<f64>::identity(4)).unwrap();
        assert!(matches!(enumerate_eigenpairs_pwl(&t), Err(Error::OracleDimension(4))));
    }
}

use itertools::Itertools;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::{Estimate, Method};
use crate::error::{Error, Result};
use crate::linalg::{self, norm_f64, normalize};
use crate::maps::{ConeMap, ConicRegion};
use crate::sampling::{sample_rng, ConeSampler};
use crate::scalar::Scalar;

/// Face enumeration is abandoned in favour of sampling beyond this many
/// candidate faces per piece.
const MAX_FACES: usize = 50_000;

/// `sup { ‖T(x)‖ : x in K, ‖x‖ <= 1 }`.
///
/// Maps with linear pieces are solved face by face: a maximizer of
/// `x^T A^T A x` over a piece ∩ sphere lies in the relative interior of some
/// face and is an eigenvector of `A^T A` compressed to that face's span.
/// Other maps are sampled on `budget` cone points plus all region rays.
pub fn cone_norm<S: Scalar>(map: &ConeMap<S>, budget: usize, seed: u64) -> Estimate {
    let t = map.to_f64();
    if let Ok(pieces) = t.linear_pieces() {
        let per_piece: Option<Vec<f64>> = pieces.par_iter().map(|p| piece_norm(&t, p)).collect();
        if let Some(vals) = per_piece {
            return Estimate {
                value: vals.into_iter().fold(0.0, f64::max),
                method: Method::Exact,
                n: pieces.len(),
                residual: None,
            };
        }
    }
    let sampler = ConeSampler::new(t.cone());
    let rays = t.region_rays();
    let total = rays.len() + budget;
    let value = (0..total)
        .into_par_iter()
        .map(|i| {
            let x = if i < rays.len() {
                rays[i].clone()
            } else {
                sampler.cone_point(&mut sample_rng(seed, i as u64))
            };
            let x = normalize(&x);
            t.apply(&x).map(|y| norm_f64(&y)).unwrap_or(0.0)
        })
        .reduce(|| 0.0, f64::max);
    Estimate { value, method: Method::Sampled, n: total, residual: None }
}

fn piece_norm(t: &ConeMap<f64>, piece: &ConicRegion<f64>) -> Option<f64> {
    let n = t.dim();
    let mut rows: Vec<Vec<f64>> = t.cone().facet_normals().to_vec();
    rows.extend(piece.closure_rows());
    rows.retain(|r| !linalg::is_zero_vec(r));
    let faces: usize = (0..n).map(|k| binomial(rows.len(), k)).sum();
    if faces > MAX_FACES {
        return None;
    }
    let a = piece.matrix.to_nalgebra();
    let gram = a.transpose() * &a;
    let feasible = |x: &[f64]| {
        let xn = norm_f64(x);
        rows.iter().all(|r| linalg::dot(r, x) >= -1e-9 * xn * norm_f64(r))
    };
    let mut best: f64 = 0.0;
    for k in 0..n {
        for active in rows.iter().combinations(k) {
            let sub: Vec<Vec<f64>> = active.into_iter().cloned().collect();
            let basis = linalg::nullspace(&sub, n);
            if basis.is_empty() {
                continue;
            }
            let b = DMatrix::from_fn(n, basis.len(), |i, j| basis[j][i]);
            let q = b.qr().q();
            let comp = q.transpose() * &gram * &q;
            let eig = comp.symmetric_eigen();
            for (idx, mu) in eig.eigenvalues.iter().enumerate() {
                let x: Vec<f64> = (&q * eig.eigenvectors.column(idx)).iter().copied().collect();
                let minus: Vec<f64> = x.iter().map(|v| -v).collect();
                if feasible(&x) || feasible(&minus) {
                    best = best.max(mu.max(0.0).sqrt());
                }
            }
        }
    }
    Some(best)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// `‖T^n‖_+^{1/n}` for `n = 1..n_max`, estimated on renormalized orbits of
/// probe vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BonsallEstimate {
    pub value: f64,
    pub method: Method,
    pub n: usize,
    /// Relative change between the last two terms.
    pub residual: f64,
    pub sequence: Vec<f64>,
    pub probes: usize,
}

/// Log-norms `log ‖T^k x‖ - log ‖x‖` for `k = 0..=n`; `-inf` once the orbit
/// reaches zero.
pub(crate) fn log_orbit(t: &ConeMap<f64>, x: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    let mut cur = normalize(x);
    let mut acc = 0.0;
    for _ in 0..n {
        if acc == f64::NEG_INFINITY {
            out.push(acc);
            continue;
        }
        let y = t.apply(&cur)?;
        let ny = norm_f64(&y);
        if ny.is_nan() || ny.is_infinite() {
            return Err(Error::NonFinite);
        }
        if ny == 0.0 {
            acc = f64::NEG_INFINITY;
        } else {
            acc += ny.ln();
            cur = y.iter().map(|v| v / ny).collect();
        }
        out.push(acc);
    }
    Ok(out)
}

/// Bonsall cone spectral radius `lim ‖T^n‖_+^{1/n}`.
///
/// The probes are the cone generators, region rays, `budget` seeded cone
/// points, and "warm" probes: normalized `T^{n_max}` images of a few of those,
/// which sit close to the dominant cone eigenvector.
pub fn bonsall_radius<S: Scalar>(map: &ConeMap<S>, n_max: usize, budget: usize, seed: u64) -> Result<BonsallEstimate> {
    let t = map.to_f64();
    let n_max = n_max.max(1);
    let sampler = ConeSampler::new(t.cone());
    let mut probes: Vec<Vec<f64>> = t.region_rays();
    probes.extend((0..budget).map(|i| sampler.cone_point(&mut sample_rng(seed, i as u64))));
    let warm: Vec<Vec<f64>> = probes
        .par_iter()
        .take(probes.len().min(t.region_rays().len() + 16))
        .map(|p| warm_up(&t, p, n_max))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    probes.extend(warm);

    let logs: Vec<Vec<f64>> = probes.par_iter().map(|p| log_orbit(&t, p, n_max)).collect::<Result<_>>()?;
    let sequence: Vec<f64> = (1..=n_max)
        .map(|k| {
            let best = logs.iter().map(|l| l[k]).fold(f64::NEG_INFINITY, f64::max);
            if best == f64::NEG_INFINITY {
                0.0
            } else {
                (best / k as f64).exp()
            }
        })
        .collect();
    let value = sequence[n_max - 1];
    let residual = if n_max >= 2 {
        let prev = sequence[n_max - 2];
        if value > 0.0 {
            (value - prev).abs() / value
        } else {
            0.0
        }
    } else {
        f64::NAN
    };
    Ok(BonsallEstimate { value, method: Method::Iterative, n: n_max, residual, sequence, probes: probes.len() })
}

fn warm_up(t: &ConeMap<f64>, x: &[f64], n: usize) -> Result<Option<Vec<f64>>> {
    let mut cur = normalize(x);
    for _ in 0..n {
        let y = t.apply(&cur)?;
        let ny = norm_f64(&y);
        if !ny.is_finite() {
            return Err(Error::NonFinite);
        }
        if ny == 0.0 {
            return Ok(None);
        }
        cur = y.iter().map(|v| v / ny).collect();
    }
    Ok(Some(cur))
}

/// Local growth rate `mu(x) = limsup ‖T^n(x)‖^{1/n}`.
///
/// The limsup is replaced by the largest windowed growth factor
/// `(‖T^k x‖ / ‖T^{k-w} x‖)^{1/w}`, `w = n_max / 4`, over the trailing half
/// `k in [n_max/2, n_max]`. Windowing removes the `‖x‖`-dependent offset
/// that slows the plain `n`-th root.
pub fn local_mu<S: Scalar>(map: &ConeMap<S>, x: &[S], n_max: usize) -> Result<Estimate> {
    let t = map.to_f64();
    let x = crate::scalar::vec_to_f64(x);
    if x.len() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), got: x.len() });
    }
    if linalg::is_zero_vec(&x) {
        return Err(Error::ZeroVector);
    }
    if !t.cone().contains_scaled(&x, 1e-9) {
        return Err(Error::OutsideCone);
    }
    let n_max = n_max.max(1);
    let logs = log_orbit(&t, &x, n_max)?;
    let w = (n_max / 4).max(1);
    let value = (n_max / 2..=n_max)
        .filter(|&k| k >= w)
        .map(|k| {
            let d = logs[k] - logs[k - w];
            if logs[k] == f64::NEG_INFINITY {
                0.0
            } else {
                (d / w as f64).exp()
            }
        })
        .fold(0.0, f64::max);
    Ok(Estimate { value, method: Method::Iterative, n: n_max, residual: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::PolyhedralCone;
    use crate::linalg::Matrix;

    fn lin(rows: &[&[f64]]) -> ConeMap<f64> {
        let m = Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap();
        ConeMap::linear(PolyhedralCone::orthant(rows.len()), m).unwrap()
    }

    #[test]
    fn cone_norm_of_scaling_and_zero_maps() {
        let e = cone_norm(&lin(&[&[3.0, 0.0], &[0.0, 3.0]]), 10, 1);
        assert!((e.value - 3.0).abs() < 1e-12);
        assert_eq!(e.method, Method::Exact);
        assert_eq!(cone_norm(&lin(&[&[0.0, 0.0], &[0.0, 0.0]]), 10, 1).value, 0.0);
    }

    #[test]
    fn cone_norm_is_restricted_to_the_cone() {
        // ‖A‖ over R^2 is attained at (1,-1); on the orthant the best is a ray
        let e = cone_norm(&lin(&[&[1.0, -1.0], &[-1.0, 1.0]]), 10, 1);
        assert!((e.value - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bonsall_radius_of_symmetric_matrix() {
        let b = bonsall_radius(&lin(&[&[2.0, 1.0], &[1.0, 2.0]]), 64, 64, 3).unwrap();
        assert!((b.value - 3.0).abs() < 1e-6, "{}", b.value);
        assert_eq!(b.sequence.len(), 64);
        let z = bonsall_radius(&lin(&[&[0.0, 0.0], &[0.0, 0.0]]), 64, 16, 3).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn local_mu_examples() {
        let t = lin(&[&[2.0, 0.0], &[0.0, 1.0]]);
        assert!((local_mu(&t, &[0.0, 1.0], 64).unwrap().value - 1.0).abs() < 1e-12);
        assert!((local_mu(&t, &[1.0, 1.0], 64).unwrap().value - 2.0).abs() < 1e-6);
        assert!(matches!(local_mu(&t, &[0.0, 0.0], 64), Err(Error::ZeroVector)));
    }
}

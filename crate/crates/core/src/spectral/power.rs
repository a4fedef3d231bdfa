use super::{EigenMethod, EigenPair, Location};
use crate::error::{Error, Result};
use crate::linalg::{self, dist_f64, norm_f64, normalize};
use crate::maps::ConeMap;
use crate::scalar::Scalar;

/// Normalized power iteration `x <- T(x) / ‖T(x)‖` from `x0`.
///
/// Stops when consecutive iterates are within `tol` of each other and returns
/// the pair `(‖T(x)‖, x)` for the last iterate with its residual. Returns
/// `None` when no fixed ray is reached within `max_iter` steps, which happens
/// for maps that cycle.
pub fn power_iteration<S: Scalar>(map: &ConeMap<S>, x0: &[S], max_iter: usize, tol: f64) -> Result<Option<EigenPair>> {
    let t = map.to_f64();
    let x0 = crate::scalar::vec_to_f64(x0);
    if x0.len() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), got: x0.len() });
    }
    if linalg::is_zero_vec(&x0) {
        return Err(Error::ZeroVector);
    }
    if !t.cone().contains_scaled(&x0, 1e-9) {
        return Err(Error::OutsideCone);
    }
    let step = |x: &[f64], k: usize| -> Result<(Vec<f64>, f64)> {
        let y = t.apply(x)?;
        let ny = norm_f64(&y);
        if !ny.is_finite() {
            return Err(Error::NonFinite);
        }
        if ny == 0.0 {
            return Err(Error::OrbitHitsKernel(k));
        }
        Ok((y.iter().map(|v| v / ny).collect(), ny))
    };
    let mut x = normalize(&x0);
    for k in 0..max_iter {
        let (next, _) = step(&x, k)?;
        let moved = dist_f64(&next, &x);
        x = next;
        if moved <= tol {
            let tx = t.apply(&x)?;
            let lambda = norm_f64(&tx);
            let residual = norm_f64(&linalg::sub(&tx, &linalg::scale(&lambda, &x)));
            return Ok(Some(EigenPair {
                lambda,
                location: Location::of(&t, &x),
                x,
                method: EigenMethod::PowerIteration,
                residual,
                exact: None,
            }));
        }
    }
    Ok(None)
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
    fn symmetric_perron_pair() {
        let t = lin(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let p = power_iteration(&t, &[1.0, 0.0], 1000, 1e-13).unwrap().unwrap();
        assert!((p.lambda - 3.0).abs() < 1e-8);
        let s = 0.5f64.sqrt();
        assert!(dist_f64(&p.x, &[s, s]) < 1e-8);
        assert_eq!(p.location, Location::Interior);
        assert!(p.verify(&t));
    }

    #[test]
    fn kernel_and_cycling() {
        let nil = lin(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(power_iteration(&nil, &[0.0, 1.0], 10, 1e-12), Err(Error::OrbitHitsKernel(1))));
        let swap = lin(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(power_iteration(&swap, &[1.0, 0.0], 50, 1e-12).unwrap().is_none());
    }
}

use crate::error::{Error, Result};
use crate::hypotheses::{a1_violation, A1Data};
use crate::linalg::{scale, sub};
use crate::maps::ConeMap;
use crate::scalar::{format_rational, Rational, Scalar};
use crate::verdict::{Hypothesis, HypothesisVerdict, Witness};

/// Finite-horizon growth of the rescaled orbit.
///
/// With `S = (M + eps)^{1/p} T`, checks `S^{kp}(v) ⪰ (1 + eps/M)^k u` for
/// `k = 1..=k_max`, exactly. The scaling is applied as `(M + eps)^k T^{kp}`
/// so no roots are taken. The (A1) data are checked first and any violated
/// clause is returned as an error.
pub fn orbit_growth_check<S: Scalar>(map: &ConeMap<S>, data: &A1Data, eps: &Rational, k_max: usize) -> Result<HypothesisVerdict> {
    let t = map.to_exact();
    if *eps <= Rational::from_i64(0) {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    if let Some(clause) = a1_violation(&t, data)? {
        return Err(Error::Precondition(clause));
    }
    let hyp = Hypothesis::OrbitGrowth;
    let growth = &data.m + eps;
    let bound = Rational::from_i64(1) + eps / &data.m;
    let mut x = data.v.clone();
    let mut g = Rational::from_i64(1);
    let mut b = Rational::from_i64(1);
    for k in 1..=k_max {
        x = t.apply_power(&x, data.p)?;
        g = &g * &growth;
        b = &b * &bound;
        let lhs = scale(&g, &x);
        let rhs = scale(&b, &data.u);
        if !t.cone().contains_scaled(&sub(&lhs, &rhs), 0.0) {
            return Ok(HypothesisVerdict::fail(
                hyp,
                Witness::pair(&lhs, &rhs),
                format!("S^(kp)(v) - (1 + eps/M)^k u leaves the cone at k = {k}"),
            ));
        }
    }
    Ok(HypothesisVerdict::certified(
        hyp,
        format!(
            "S^(kp)(v) ⪰ (1 + eps/M)^k u for k = 1..{k_max} (M = {}, p = {}, eps = {})",
            format_rational(&data.m),
            data.p,
            format_rational(eps)
        ),
    )
    .with_samples(k_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::PolyhedralCone;
    use crate::linalg::Matrix;
    use crate::scalar::rat;
    use crate::verdict::Verdict;

    fn lin(rows: &[&[f64]]) -> ConeMap<f64> {
        let m = Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap();
        ConeMap::linear(PolyhedralCone::orthant(rows.len()), m).unwrap()
    }

    fn data() -> A1Data {
        A1Data::from_vw(vec![rat(1, 1), rat(1, 1)], vec![rat(0, 1), rat(0, 1)], rat(1, 1), 1)
    }

    #[test]
    fn symmetric_matrix_grows() {
        let v = orbit_growth_check(&lin(&[&[2.0, 1.0], &[1.0, 2.0]]), &data(), &rat(1, 2), 20).unwrap();
        assert_eq!(v.verdict, Verdict::PassCertified);
    }

    #[test]
    fn zero_map_fails_precondition() {
        let r = orbit_growth_check(&lin(&[&[0.0, 0.0], &[0.0, 0.0]]), &data(), &rat(1, 2), 20);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}

//! Eigenpairs of superadditive maps in the cone and in its negative.
//!
//! For a superadditive, positive `T` with positive cone spectral radius, the
//! conjugate `S(x) = -T(-x)` dominates `T` on the cone. Its cone eigenpair
//! `(lambda_-, x_S)` gives the eigenpair `(lambda_-, -x_S)` of `T` in `-K`,
//! and `lambda_- >= lambda_+`. Eigenvalues with eigenvectors outside both
//! cones are checked against the bound `|lambda| <= lambda_+`. The bound
//! can fail for negative eigenvalues: `T(lambda x) = lambda T(x)` needs
//! `lambda >= 0` unless `T` is odd. See `negative_eigenvalue_beyond_bound`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypotheses::{beta_range, check_b1, BetaRange};
use crate::linalg::{self, add, dist_f64, is_zero_vec, neg, norm_f64, scale, sub};
use crate::maps::{classify_positivity, ConeMap};
use crate::sampling::{sample_rng, ConeSampler};
use crate::scalar::{vec_to_f64, vec_to_rational, Scalar};
use crate::spectral::{bonsall_radius, enumerate_eigenpairs_pwl, enumerate_space_eigenpairs, power_iteration, EigenPair, Location};
use crate::verdict::{PositivityGrade, Verdict};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperadditiveConfig {
    /// Number of multistart power iterations.
    pub starts: usize,
    pub budget: usize,
    pub seed: u64,
    pub n_max: usize,
    /// Bonsall radius at or below this counts as zero.
    pub threshold: f64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for SuperadditiveConfig {
    fn default() -> Self {
        SuperadditiveConfig {
            starts: 64,
            budget: 256,
            seed: 0,
            n_max: 64,
            threshold: 1e-9,
            max_iter: 100_000,
            tol: 1e-14,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffConeEigenvalue {
    pub lambda: f64,
    pub x: Vec<f64>,
    pub bounded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Multistart {
    pub starts: usize,
    pub converged: usize,
    /// Largest distance from `x_+` among converged starts.
    pub max_spread: f64,
    /// `None` when (B1) fails and uniqueness is not expected.
    pub unique: Option<bool>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperadditiveAnalysis {
    pub bonsall: f64,
    pub pair_plus: EigenPair,
    /// Eigenpair of `T` in `-K`: `x` is the negated cone eigenvector of `S`.
    pub pair_minus: EigenPair,
    pub other_eigs: Vec<OffConeEigenvalue>,
    /// Why the off-cone sweep did not run, when it did not.
    pub other_eigs_skipped: Option<String>,
    pub b1: Verdict,
    pub b1_conjugate: Verdict,
    pub lambda_order_holds: bool,
    pub eigenvalue_bound_holds: bool,
    pub multistart: Multistart,
}

fn cone_eigenpair(t: &ConeMap<f64>, cfg: &SuperadditiveConfig) -> Result<EigenPair> {
    let sampler = ConeSampler::new(t.cone());
    let start = sampler.generators().iter().fold(vec![0.0; t.dim()], |acc, g| add(&acc, g));
    if let Some(p) = power_iteration(t, &start, cfg.max_iter, cfg.tol)? {
        return Ok(p);
    }
    let oracle = enumerate_eigenpairs_pwl(t)?;
    oracle
        .pairs
        .into_iter()
        .filter(|p| p.location != Location::Outside && p.lambda >= 0.0)
        .max_by(|a, b| a.lambda.total_cmp(&b.lambda))
        .ok_or_else(|| Error::Degenerate("no cone eigenpair found".into()))
}

/// Eigenpairs in `K` and `-K`, off-cone eigenvalues, ordering checks and a
/// multistart uniqueness check.
pub fn analyze_superadditive<S: Scalar>(map: &ConeMap<S>, cfg: &SuperadditiveConfig) -> Result<SuperadditiveAnalysis> {
    if !map.is_structurally_superadditive() {
        return Err(Error::NotSuperadditive);
    }
    let pos = classify_positivity(map, cfg.budget, cfg.seed)?;
    if pos.grade == PositivityGrade::NotPositive {
        return Err(Error::NotPositive("superadditive analysis needs a positive map".into()));
    }
    let t = map.to_f64();
    let bonsall = bonsall_radius(&t, cfg.n_max, cfg.budget.min(64), cfg.seed)?.value;
    if bonsall <= cfg.threshold {
        return Err(Error::NoPositiveEigenvalue(bonsall));
    }
    let s = t.negate_conjugate()?;
    let pair_plus = cone_eigenpair(&t, cfg)?;
    let mut pair_minus = cone_eigenpair(&s, cfg)?;
    pair_minus.x = neg(&pair_minus.x);
    pair_minus.location = Location::Outside;
    pair_minus.exact = pair_minus.exact.map(|(l, r)| (l, neg(&r)));

    let (other_eigs, other_eigs_skipped) = match enumerate_space_eigenpairs(map) {
        Ok(o) => {
            let k = t.cone();
            let list = o
                .pairs
                .iter()
                .filter(|p| !k.contains_scaled(&p.x, 1e-12) && !k.contains_scaled(&neg(&p.x), 1e-12))
                .map(|p| OffConeEigenvalue {
                    lambda: p.lambda,
                    x: p.x.clone(),
                    bounded: p.lambda.abs() <= pair_plus.lambda + 1e-9,
                })
                .collect();
            (list, None)
        }
        Err(e) => (Vec::new(), Some(e.to_string())),
    };

    let b1 = check_b1(map, cfg.budget, cfg.seed)?.verdict;
    let b1_conjugate = check_b1(&s, cfg.budget, cfg.seed)?.verdict;

    let sampler = ConeSampler::new(t.cone());
    let runs: Vec<Option<EigenPair>> = (0..cfg.starts)
        .into_par_iter()
        .map(|i| {
            let x0 = sampler.cone_point(&mut sample_rng(cfg.seed ^ 0x5a5a, i as u64));
            power_iteration(&t, &x0, cfg.max_iter, cfg.tol).ok().flatten()
        })
        .collect();
    let converged: Vec<&EigenPair> = runs.iter().flatten().collect();
    let max_spread = converged.iter().map(|p| dist_f64(&p.x, &pair_plus.x)).fold(0.0, f64::max);
    let multistart = if b1.is_pass() {
        Multistart {
            starts: cfg.starts,
            converged: converged.len(),
            max_spread,
            unique: Some(max_spread <= 1e-8),
            note: "B1 holds; all converged starts should agree".into(),
        }
    } else {
        Multistart {
            starts: cfg.starts,
            converged: converged.len(),
            max_spread,
            unique: None,
            note: "B1 fails; uniqueness is not expected and was not checked".into(),
        }
    };

    let lambda_order_holds = pair_minus.lambda >= pair_plus.lambda - 1e-9;
    let eigenvalue_bound_holds = other_eigs.iter().all(|e| e.bounded);
    Ok(SuperadditiveAnalysis {
        bonsall,
        pair_plus,
        pair_minus,
        other_eigs,
        other_eigs_skipped,
        b1,
        b1_conjugate,
        lambda_order_holds,
        eigenvalue_bound_holds,
        multistart,
    })
}

/// Outcome of pushing `x0 - alpha y0` to the boundary for two cone
/// eigenvectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryRayCertificate {
    pub alpha: f64,
    pub difference: Vec<f64>,
    /// `x0` and `y0` are the same ray.
    pub duplicate: bool,
    /// `T(x0 - alpha y0) ⪯ T(x0) - alpha T(y0)`, checked exactly on the
    /// rational values of the inputs.
    pub superadditive_bound: bool,
    /// With `lambda` the eigenvalue of `x0`, whether
    /// `d - T(d) / lambda` lies in the cone for the difference `d`, which is
    /// what (B1) forbids.
    pub b1_violated: bool,
}

/// Largest `alpha` with `x0 - alpha y0` in the cone (on the orthant:
/// `min x0_i / y0_i` over `y0_i > 0`), and the consequences used in the
/// uniqueness argument.
pub fn uniqueness_via_boundary_ray<S: Scalar>(map: &ConeMap<S>, x0: &[S], y0: &[S]) -> Result<BoundaryRayCertificate> {
    let t = map.to_exact();
    let x = vec_to_rational(x0);
    let y = vec_to_rational(y0);
    let k = t.cone();
    let alpha = match beta_range(k, &x, &y) {
        BetaRange::UpTo(a) => a,
        BetaRange::Empty => return Err(Error::Degenerate("alpha = 0: x0 - a y0 leaves the cone for every a > 0".into())),
        BetaRange::Unbounded => return Err(Error::Degenerate("x0 - a y0 stays in the cone for every a".into())),
    };
    let d = sub(&x, &scale(&alpha, &y));
    let duplicate = is_zero_vec(&d);
    let td = t.apply(&d)?;
    let rhs = sub(&t.apply(&x)?, &scale(&alpha, &t.apply(&y)?));
    let superadditive_bound = k.contains_scaled(&sub(&rhs, &td), 0.0);
    let xf = vec_to_f64(&x);
    let lambda = norm_f64(&t.to_f64().apply(&xf)?) / norm_f64(&xf);
    let b1_violated = !duplicate && lambda > 0.0 && {
        let df = vec_to_f64(&d);
        let tdf = vec_to_f64(&td);
        let z: Vec<f64> = df.iter().zip(&tdf).map(|(a, b)| a - b / lambda).collect();
        t.cone().convert::<f64>().contains_scaled(&z, 1e-9)
    };
    Ok(BoundaryRayCertificate {
        alpha: alpha.to_f64(),
        difference: vec_to_f64(&d),
        duplicate,
        superadditive_bound,
        b1_violated,
    })
}

/// `|lambda| <= lambda_+` for an eigenpair outside `K ∪ -K`.
pub fn eigenvalue_bound_check<S: Scalar>(map: &ConeMap<S>, plus: &EigenPair, eig: &EigenPair) -> Result<bool> {
    let k = map.cone().convert::<f64>();
    if k.contains_scaled(&eig.x, 1e-12) || k.contains_scaled(&neg(&eig.x), 1e-12) {
        return Err(Error::WrongStratum("the eigenvector lies in K or -K".into()));
    }
    let t = map.to_f64();
    let tx = t.apply(&eig.x)?;
    let res = norm_f64(&linalg::sub(&tx, &scale(&eig.lambda, &eig.x)));
    if res > 1e-8 * (1.0 + eig.lambda.abs()) {
        return Err(Error::Precondition("T(x) = lambda x does not hold".into()));
    }
    Ok(eig.lambda.abs() <= plus.lambda + 1e-9)
}

//! Cone spectral quantities: cone norm, Bonsall radius, local growth rates,
//! power iteration, the piecewise eigenvalue oracle and orbit growth.
//!
//! Iterative quantities run in `f64`; the oracle and the growth check work
//! over the rationals whenever the data allow it.

mod growth;
mod norm;
mod oracle;
mod power;

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

pub use growth::orbit_growth_check;
pub use norm::{bonsall_radius, cone_norm, local_mu, BonsallEstimate};
pub use oracle::{enumerate_eigenpairs_pwl, enumerate_space_eigenpairs, EigenOracle, Eigencone};
pub use power::power_iteration;

use crate::error::Result;
use crate::linalg::{norm_f64, sub};
use crate::maps::ConeMap;
use crate::sampling::{sample_rng, ConeSampler};
use crate::scalar::{format_rational, vec_to_f64, Rational, Scalar};

/// Slack allowed between the oracle radius, the probe growth rates and the
/// Bonsall estimate.
pub const CHAIN_TOL: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Sampled,
    Iterative,
}

/// A numeric estimate with its provenance: how it was obtained, how many
/// samples/iterations/regions went into it, and a residual when one applies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub method: Method,
    pub n: usize,
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Interior,
    Boundary,
    /// Not in the cone (off-cone eigenvectors of maps defined on `R^n`).
    Outside,
}

impl Location {
    pub fn of<S: Scalar>(map: &ConeMap<S>, x: &[f64]) -> Location {
        let k = map.cone().convert::<f64>();
        if !k.contains_scaled(x, 1e-12) {
            Location::Outside
        } else if k.is_solid() && k.interior_unchecked(x, 1e-12) {
            Location::Interior
        } else {
            Location::Boundary
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    PowerIteration,
    RegionOracle,
}

/// `T(x) = lambda x` with `‖x‖ = 1`. `residual` is `‖T(x) - lambda x‖` as
/// computed when the pair was produced; `exact` holds a rational eigenvalue
/// and ray when the pair was verified over the rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub lambda: f64,
    pub x: Vec<f64>,
    pub location: Location,
    pub method: EigenMethod,
    pub residual: f64,
    pub exact: Option<(Rational, Vec<Rational>)>,
}

impl EigenPair {
    /// Re-evaluates the residual and compares it with the stored one.
    pub fn verify<S: Scalar>(&self, map: &ConeMap<S>) -> bool {
        let t = map.to_f64();
        let Ok(tx) = t.apply(&self.x) else { return false };
        let lx: Vec<f64> = self.x.iter().map(|v| v * self.lambda).collect();
        let r = norm_f64(&sub(&tx, &lx));
        let exact_ok = match &self.exact {
            Some((l, ray)) => {
                let te = map.to_exact();
                te.apply(ray)
                    .map(|y| y == ray.iter().map(|v| v * l).collect::<Vec<_>>())
                    .unwrap_or(false)
            }
            None => true,
        };
        exact_ok && r <= self.residual + 1e-12 * (1.0 + self.lambda.abs())
    }
}

impl Serialize for EigenPair {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("lambda", &self.lambda)?;
        m.serialize_entry("x", &self.x)?;
        m.serialize_entry("location", &self.location)?;
        m.serialize_entry("method", &self.method)?;
        m.serialize_entry("residual", &self.residual)?;
        if let Some((l, ray)) = &self.exact {
            m.serialize_entry("lambda_exact", &format_rational(l))?;
            m.serialize_entry("ray_exact", &ray.iter().map(format_rational).collect::<Vec<_>>())?;
        }
        m.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    pub n_max: usize,
    pub budget: usize,
    pub seed: u64,
    /// Displacement tolerance of power iteration.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig { n_max: 64, budget: 256, seed: 0, tol: 1e-12, max_iter: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerRun {
    pub start: Vec<f64>,
    /// `None` when the iteration did not settle within the iteration cap.
    pub pair: Option<EigenPair>,
    /// Set when the orbit hit the kernel.
    pub error: Option<String>,
}

/// Diagnostics for `r_hat <= max mu <= bonsall`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainCheck {
    pub r_hat: Option<f64>,
    pub max_mu: f64,
    pub bonsall: f64,
    pub tol: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub cone_norm: Estimate,
    pub bonsall: BonsallEstimate,
    pub local_mu: BTreeMap<String, Estimate>,
    pub probes: BTreeMap<String, Vec<f64>>,
    pub eigen_radius: Option<Estimate>,
    pub power_iteration: Vec<PowerRun>,
    pub oracle: Option<EigenOracle>,
    /// Why the oracle did not run, when it did not.
    pub oracle_skipped: Option<String>,
    pub chain: ChainCheck,
}

/// Runs every spectral estimate on `map`.
pub fn analyze_spectrum<S: Scalar>(map: &ConeMap<S>, cfg: &SpectralConfig) -> Result<SpectralReport> {
    let t = map.to_f64();
    let cn = cone_norm(&t, cfg.budget, cfg.seed);
    let bonsall = bonsall_radius(&t, cfg.n_max, cfg.budget, cfg.seed)?;

    let (oracle, oracle_skipped) = match enumerate_eigenpairs_pwl(map) {
        Ok(o) => (Some(o), None),
        Err(e) => (None, Some(e.to_string())),
    };

    let sampler = ConeSampler::new(t.cone());
    let mut probes: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (i, g) in sampler.generators().iter().enumerate() {
        probes.insert(format!("ray{i}"), g.clone());
    }
    let mut starts: Vec<Vec<f64>> = sampler.generators().to_vec();
    let centre = sampler
        .generators()
        .iter()
        .fold(vec![0.0; t.dim()], |acc, g| crate::linalg::add(&acc, g));
    probes.insert("center".into(), centre.clone());
    starts.push(centre);
    for i in 0..cfg.budget.min(8) {
        probes.insert(format!("sample{i}"), sampler.interior_point(&mut sample_rng(cfg.seed, i as u64)));
    }
    if let Some(o) = &oracle {
        for (i, p) in o.pairs.iter().enumerate() {
            if p.location != Location::Outside {
                probes.insert(format!("eigen{i}"), p.x.clone());
            }
        }
    }

    let mut local = BTreeMap::new();
    for (id, x) in &probes {
        local.insert(id.clone(), local_mu(&t, x, cfg.n_max)?);
    }

    let power_runs: Vec<PowerRun> = starts
        .iter()
        .map(|x0| match power_iteration(&t, x0, cfg.max_iter, cfg.tol) {
            Ok(pair) => PowerRun { start: x0.clone(), pair, error: None },
            Err(e) => PowerRun { start: x0.clone(), pair: None, error: Some(e.to_string()) },
        })
        .collect();

    let eigen_radius = match &oracle {
        Some(o) => o.r_hat.map(|v| Estimate { value: v, method: Method::Exact, n: o.pairs.len(), residual: None }),
        None => power_runs
            .iter()
            .filter_map(|r| r.pair.as_ref())
            .max_by(|a, b| a.lambda.total_cmp(&b.lambda))
            .map(|p| Estimate { value: p.lambda, method: Method::Iterative, n: cfg.max_iter, residual: Some(p.residual) }),
    };

    let max_mu = local.values().map(|e| e.value).fold(0.0, f64::max);
    let r_hat = eigen_radius.as_ref().map(|e| e.value);
    let holds = r_hat.is_none_or(|r| r <= max_mu + CHAIN_TOL) && max_mu <= bonsall.value + CHAIN_TOL;
    let chain = ChainCheck { r_hat, max_mu, bonsall: bonsall.value, tol: CHAIN_TOL, holds };

    Ok(SpectralReport {
        cone_norm: cn,
        bonsall,
        local_mu: local,
        probes,
        eigen_radius,
        power_iteration: power_runs,
        oracle,
        oracle_skipped,
        chain,
    })
}

pub(crate) fn unit(x: &[f64]) -> Vec<f64> {
    crate::linalg::normalize(x)
}

pub(crate) fn unit_of<S: Scalar>(x: &[S]) -> Vec<f64> {
    unit(&vec_to_f64(x))
}

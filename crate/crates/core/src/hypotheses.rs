//! Checkers for the growth hypotheses (A1), (A2), the boundary hypotheses
//! (B1), (B2), semi-strong positivity and the semi-strongly increasing
//! property.
//!
//! (B1) asks that `x - beta T(x)` leave the cone for every boundary `x` and
//! every `beta > 0`. On a polyhedral cone the quantifier over `beta` is
//! eliminated: with `z` on the boundary, some `beta > 0` puts `z - beta w` in
//! the cone iff `<a, w> <= 0` for every facet normal `a` active at `z`, and
//! the feasible steps then form an interval `(0, beta_max]`. Every decision
//! is cross-checked against a geometric grid of steps `2^-20, ..., 2^4`; any
//! disagreement is reported as an error.

use rayon::prelude::*;
use serde::Serialize;

use crate::cone::PolyhedralCone;
use crate::error::{Error, Result};
use crate::linalg::{add, dot, is_zero_vec, norm_f64, scale, sub};
use crate::maps::{classify_positivity, ConeMap};
use crate::sampling::{sample_rng, ConeSampler};
use crate::scalar::{format_rational, Rational, Scalar};
use crate::spectral::{enumerate_eigenpairs_pwl, Location};
use crate::verdict::{Hypothesis, HypothesisVerdict, OrderGrade, PositivityGrade, Verdict, Witness};

/// Exponents of the brute-force step grid `beta = 2^j`.
pub const BETA_GRID: std::ops::RangeInclusive<i32> = -20..=4;

/// Data of hypothesis (A1): `u = v - w` with `v, w` in the cone, `u != 0`,
/// `-u` outside the cone and `M T^p(u) ⪰ u`.
#[derive(Debug, Clone, PartialEq)]
pub struct A1Data {
    pub u: Vec<Rational>,
    pub v: Vec<Rational>,
    pub w: Vec<Rational>,
    pub m: Rational,
    pub p: usize,
}

impl A1Data {
    pub fn new(u: Vec<Rational>, v: Vec<Rational>, w: Vec<Rational>, m: Rational, p: usize) -> Self {
        A1Data { u, v, w, m, p }
    }

    /// Sets `u = v - w`.
    pub fn from_vw(v: Vec<Rational>, w: Vec<Rational>, m: Rational, p: usize) -> Self {
        let u = sub(&v, &w);
        A1Data { u, v, w, m, p }
    }
}

/// The first violated (A1) clause, if any.
pub fn a1_violation(t: &ConeMap<Rational>, d: &A1Data) -> Result<Option<String>> {
    let n = t.dim();
    for x in [&d.u, &d.v, &d.w] {
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len() });
        }
    }
    let k = t.cone();
    let clause = if sub(&d.v, &d.w) != d.u {
        Some("u = v - w")
    } else if !k.contains_scaled(&d.v, 0.0) {
        Some("v in K")
    } else if !k.contains_scaled(&d.w, 0.0) {
        Some("w in K")
    } else if is_zero_vec(&d.u) {
        Some("u != 0")
    } else if k.contains_scaled(&crate::linalg::neg(&d.u), 0.0) {
        Some("-u not in K")
    } else if d.m <= Rational::from_i64(0) {
        Some("M > 0")
    } else if d.p == 0 {
        Some("p >= 1")
    } else {
        match t.apply_power(&d.u, d.p) {
            Ok(tu) if k.contains_scaled(&sub(&scale(&d.m, &tu), &d.u), 0.0) => None,
            Ok(_) => Some("M T^p(u) ⪰ u"),
            Err(Error::OutsideCone) => Some("T^p(u) defined"),
            Err(e) => return Err(e),
        }
    };
    Ok(clause.map(String::from))
}

/// Checks (A1) for the given data. Every clause is evaluated exactly.
pub fn check_a1<S: Scalar>(map: &ConeMap<S>, data: &A1Data) -> Result<HypothesisVerdict> {
    let t = map.to_exact();
    Ok(match a1_violation(&t, data)? {
        None => HypothesisVerdict::certified(
            Hypothesis::A1,
            format!("M = {}, p = {}: all clauses hold", format_rational(&data.m), data.p),
        ),
        Some(c) => HypothesisVerdict::fail(Hypothesis::A1, Witness::point(&data.u), format!("violated clause: {c}")),
    })
}

/// Finite-horizon check of (A2), unboundedness of the orbit of `x`.
///
/// Passes (sampled) once `‖T^k x‖` exceeds `bound_threshold`; fails when the
/// orbit settles at a fixed point of norm below the threshold; otherwise the
/// verdict is inconclusive.
pub fn check_a2_orbit<S: Scalar>(map: &ConeMap<S>, x: &[S], bound_threshold: f64, k_max: usize) -> Result<HypothesisVerdict> {
    let t = map.to_f64();
    let mut cur = crate::scalar::vec_to_f64(x);
    if cur.len() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), got: cur.len() });
    }
    if !t.cone().contains_scaled(&cur, 1e-12) {
        return Err(Error::OutsideCone);
    }
    let hyp = Hypothesis::A2;
    for k in 1..=k_max {
        let next = t.apply(&cur)?;
        let nn = norm_f64(&next);
        if !nn.is_finite() || nn > bound_threshold {
            return Ok(HypothesisVerdict::sampled(hyp, k, format!("‖T^{k}(x)‖ = {nn:e} exceeds {bound_threshold:e}")));
        }
        let moved = norm_f64(&sub(&next, &cur));
        if moved <= 1e-12 * (1.0 + norm_f64(&cur)) {
            return Ok(HypothesisVerdict::fail(
                hyp,
                Witness::point(x),
                format!("orbit settles at a fixed point of norm {nn:e} after {k} steps"),
            ));
        }
        cur = next;
    }
    Ok(HypothesisVerdict::inconclusive(
        hyp,
        format!("orbit stayed below {bound_threshold:e} without settling in {k_max} steps"),
    ))
}

/// Steps `beta > 0` with `z - beta w` in the cone, for `z` in the cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BetaRange {
    Empty,
    UpTo(Rational),
    Unbounded,
}

impl BetaRange {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, BetaRange::Empty)
    }

    pub fn admits(&self, beta: &Rational) -> bool {
        match self {
            BetaRange::Empty => false,
            BetaRange::UpTo(m) => beta <= m,
            BetaRange::Unbounded => true,
        }
    }
}

/// Facet reduction for `z - beta w`.
pub fn beta_range(cone: &PolyhedralCone<Rational>, z: &[Rational], w: &[Rational]) -> BetaRange {
    let zero = Rational::from_i64(0);
    let mut best: Option<Rational> = None;
    for a in cone.facet_normals() {
        let az = dot(a, z);
        let aw = dot(a, w);
        if az == zero {
            if aw > zero {
                return BetaRange::Empty;
            }
        } else if aw > zero {
            let cap = az / aw;
            if best.as_ref().is_none_or(|b| cap < *b) {
                best = Some(cap);
            }
        }
    }
    match best {
        Some(b) => BetaRange::UpTo(b),
        None => BetaRange::Unbounded,
    }
}

pub fn grid_beta(j: i32) -> Rational {
    if j >= 0 {
        Rational::from_i64(1i64 << j)
    } else {
        Rational::new(1.into(), num_bigint::BigInt::from(1) << (-j) as usize)
    }
}

/// Whether the facet reduction agrees with direct membership tests of
/// `z - beta w` at every grid step.
pub fn reduction_matches_grid(cone: &PolyhedralCone<Rational>, z: &[Rational], w: &[Rational]) -> bool {
    let range = beta_range(cone, z, w);
    BETA_GRID.clone().all(|j| {
        let b = grid_beta(j);
        let brute = cone.contains_scaled(&crate::maps::sub_scaled(z, &b, w), 0.0);
        brute == range.admits(&b)
    })
}

/// A step for a failure witness: the largest feasible grid step, or the
/// exact bound when it lies below the grid.
fn witness_beta(cone: &PolyhedralCone<Rational>, z: &[Rational], w: &[Rational], range: &BetaRange) -> Rational {
    BETA_GRID
        .clone()
        .rev()
        .map(grid_beta)
        .find(|b| cone.contains_scaled(&crate::maps::sub_scaled(z, b, w), 0.0))
        .unwrap_or_else(|| match range {
            BetaRange::UpTo(m) => m.clone(),
            _ => Rational::from_i64(1),
        })
}

/// Boundary probes: boundary region rays followed by `budget` seeded
/// boundary points cycling through the facets.
pub fn boundary_samples(t: &ConeMap<Rational>, budget: usize, seed: u64) -> Vec<Vec<Rational>> {
    let k = t.cone();
    let sampler = ConeSampler::new(k);
    let mut out: Vec<Vec<Rational>> = t.region_rays().into_iter().filter(|r| k.on_boundary(r, 0.0)).collect();
    out.extend((0..budget).map(|i| sampler.boundary_point(i, &mut sample_rng(seed, i as u64))));
    out
}

/// Pairs `(x, y)` in the cone with `x - y` on the boundary: `(z, 0)` for each
/// boundary probe, `(r + g, r)` for region rays `r` and boundary generators
/// `g`, then `budget` seeded pairs `y + d, y` with `d` drawn on a face first.
pub fn boundary_difference_pairs(t: &ConeMap<Rational>, budget: usize, seed: u64) -> Vec<(Vec<Rational>, Vec<Rational>)> {
    let k = t.cone();
    let n = t.dim();
    let zero = vec![Rational::from_i64(0); n];
    let sampler = ConeSampler::new(k);
    let mut out: Vec<(Vec<Rational>, Vec<Rational>)> =
        boundary_samples(t, budget, seed).into_iter().map(|z| (z, zero.clone())).collect();
    let rays = t.region_rays();
    for r in &rays {
        for g in sampler.generators() {
            out.push((add(r, g), r.clone()));
        }
    }
    let pair_seed = seed ^ 0x9e37_79b9_7f4a_7c15;
    out.extend((0..budget).map(|i| {
        let mut rng = sample_rng(pair_seed, i as u64);
        let d = sampler.boundary_point(i, &mut rng);
        let y = sampler.cone_point(&mut rng);
        (add(&y, &d), y)
    }));
    out
}

fn require_positive(t: &ConeMap<Rational>, seed: u64) -> Result<()> {
    let report = classify_positivity(t, 256, seed)?;
    if report.grade == PositivityGrade::NotPositive {
        let w = report.witness.map(|x| crate::scalar::vec_to_f64(&x));
        return Err(Error::NotPositive(format!("T(x) leaves the cone at x = {w:?}")));
    }
    Ok(())
}

enum Probe {
    Pass,
    Fail(Witness),
}

fn scan<T: Sync>(items: &[T], check: impl Fn(&T) -> Result<Probe> + Sync + Send) -> Result<Option<Witness>> {
    let results: Vec<Result<Probe>> = items.par_iter().map(check).collect();
    let mut first = None;
    for r in results {
        if let Probe::Fail(w) = r? {
            if first.is_none() {
                first = Some(w);
            }
        }
    }
    Ok(first)
}

fn disagreement(z: &[Rational], w: &[Rational]) -> Error {
    Error::OracleDisagreement(format!(
        "facet reduction and beta grid disagree at z = {:?}, w = {:?}",
        crate::scalar::vec_to_f64(z),
        crate::scalar::vec_to_f64(w)
    ))
}

/// (B1): `x - beta T(x)` is outside the cone for every boundary `x` and every
/// `beta > 0`. On the orthant the reduction reads
/// `support(T(x)) ⊆ support(x)` for failure.
pub fn check_b1<S: Scalar>(map: &ConeMap<S>, budget: usize, seed: u64) -> Result<HypothesisVerdict> {
    let t = map.to_exact();
    require_positive(&t, seed)?;
    let k = t.cone();
    let points = boundary_samples(&t, budget, seed);
    let found = scan(&points, |z| {
        let w = t.apply(z)?;
        if !reduction_matches_grid(k, z, &w) {
            return Err(disagreement(z, &w));
        }
        let range = beta_range(k, z, &w);
        Ok(if range.is_feasible() {
            Probe::Fail(Witness::point(z).with_beta(witness_beta(k, z, &w, &range)))
        } else {
            Probe::Pass
        })
    })?;
    let detail = if k.is_orthant() {
        "support containment"
    } else {
        "facet reduction"
    };
    Ok(match found {
        Some(w) => HypothesisVerdict::fail(Hypothesis::B1, w, format!("x - beta T(x) in K ({detail})")),
        None => HypothesisVerdict::sampled(
            Hypothesis::B1,
            points.len(),
            format!("no boundary point admits beta > 0 ({detail}, grid-checked)"),
        ),
    })
}

/// (B2): `x - y - beta (T(x) - T(y))` is outside the cone whenever `x - y`
/// is a nonzero boundary point and `beta > 0`.
pub fn check_b2<S: Scalar>(map: &ConeMap<S>, budget: usize, seed: u64) -> Result<HypothesisVerdict> {
    let t = map.to_exact();
    let k = t.cone();
    let pairs = boundary_difference_pairs(&t, budget, seed);
    let found = scan(&pairs, |(x, y)| {
        let d = sub(x, y);
        let w = sub(&t.apply(x)?, &t.apply(y)?);
        if !reduction_matches_grid(k, &d, &w) {
            return Err(disagreement(&d, &w));
        }
        let range = beta_range(k, &d, &w);
        Ok(if range.is_feasible() {
            Probe::Fail(Witness::pair(x, y).with_beta(witness_beta(k, &d, &w, &range)))
        } else {
            Probe::Pass
        })
    })?;
    Ok(match found {
        Some(w) => HypothesisVerdict::fail(Hypothesis::B2, w, "x - y - beta (T(x) - T(y)) in K"),
        None => HypothesisVerdict::sampled(
            Hypothesis::B2,
            pairs.len(),
            "no boundary difference admits beta > 0 (grid-checked)",
        ),
    })
}

/// Semi-strong positivity: every boundary `x` has a facet normal `a` with
/// `<a, x> = 0 < <a, T(x)>`.
pub fn check_ssp<S: Scalar>(map: &ConeMap<S>, budget: usize, seed: u64) -> Result<HypothesisVerdict> {
    let t = map.to_exact();
    let k = t.cone();
    let points = boundary_samples(&t, budget, seed);
    let found = scan(&points, |z| {
        let w = t.apply(z)?;
        Ok(match k.separating_facet(z, &w, 0.0) {
            Some(_) => Probe::Pass,
            None => Probe::Fail(Witness::point(z)),
        })
    })?;
    Ok(match found {
        Some(w) => HypothesisVerdict::fail(Hypothesis::Ssp, w, "no active facet normal is positive on T(x)"),
        None => HypothesisVerdict::sampled(Hypothesis::Ssp, points.len(), "a separating facet normal exists at every sample"),
    })
}

/// Semi-strongly increasing: for `x - y` a nonzero boundary point some facet
/// normal `a` has `<a, x - y> = 0 < <a, T(x) - T(y)>`.
pub fn check_ssi<S: Scalar>(map: &ConeMap<S>, budget: usize, seed: u64) -> Result<HypothesisVerdict> {
    let t = map.to_exact();
    let k = t.cone();
    let pairs = boundary_difference_pairs(&t, budget, seed);
    let found = scan(&pairs, |(x, y)| {
        let d = sub(x, y);
        let w = sub(&t.apply(x)?, &t.apply(y)?);
        Ok(match k.separating_facet(&d, &w, 0.0) {
            Some(_) => Probe::Pass,
            None => Probe::Fail(Witness::pair(x, y)),
        })
    })?;
    Ok(match found {
        Some(w) => HypothesisVerdict::fail(Hypothesis::Ssi, w, "no facet normal active at x - y is positive on T(x) - T(y)"),
        None => HypothesisVerdict::sampled(Hypothesis::Ssi, pairs.len(), "a separating facet normal exists for every pair"),
    })
}

/// Re-evaluates a failure witness exactly. Returns `Ok(true)` when the
/// witness is a genuine violation of its hypothesis.
pub fn reverify_witness<S: Scalar>(map: &ConeMap<S>, verdict: &HypothesisVerdict) -> Result<bool> {
    let Some(w) = &verdict.witness else { return Ok(false) };
    let t = map.to_exact();
    let k = t.cone();
    let pt = |i: usize| -> Result<&Vec<Rational>> {
        w.points.get(i).ok_or_else(|| Error::Certificate("witness is missing a point".into()))
    };
    let beta = || w.beta.clone().ok_or_else(|| Error::Certificate("witness is missing beta".into()));
    let zero = Rational::from_i64(0);
    Ok(match verdict.hypothesis {
        Hypothesis::B1 => {
            let z = pt(0)?;
            let b = beta()?;
            k.on_boundary(z, 0.0) && b > zero && k.contains_scaled(&crate::maps::sub_scaled(z, &b, &t.apply(z)?), 0.0)
        }
        Hypothesis::B2 => {
            let (x, y) = (pt(0)?, pt(1)?);
            let b = beta()?;
            let d = sub(x, y);
            let img = sub(&t.apply(x)?, &t.apply(y)?);
            k.contains_scaled(x, 0.0)
                && k.contains_scaled(y, 0.0)
                && k.on_boundary(&d, 0.0)
                && b > zero
                && k.contains_scaled(&crate::maps::sub_scaled(&d, &b, &img), 0.0)
        }
        Hypothesis::Ssp => {
            let z = pt(0)?;
            k.on_boundary(z, 0.0) && k.separating_facet(z, &t.apply(z)?, 0.0).is_none()
        }
        Hypothesis::Ssi => {
            let (x, y) = (pt(0)?, pt(1)?);
            let d = sub(x, y);
            k.on_boundary(&d, 0.0) && k.separating_facet(&d, &sub(&t.apply(x)?, &t.apply(y)?), 0.0).is_none()
        }
        Hypothesis::Superadditive => {
            let (x, y) = (pt(0)?, pt(1)?);
            let lhs = t.apply(&add(x, y))?;
            let rhs = add(&t.apply(x)?, &t.apply(y)?);
            !k.contains_scaled(&sub(&lhs, &rhs), 0.0)
        }
        Hypothesis::OrderPreserving(mode) => {
            let (x, y) = (pt(0)?, pt(1)?);
            let d = sub(y, x);
            let img = sub(&t.apply(y)?, &t.apply(x)?);
            let comparable = k.contains_scaled(&d, 0.0) && !is_zero_vec(&d);
            let holds = match mode {
                OrderGrade::Weak => k.contains_scaled(&img, 0.0),
                OrderGrade::Strict => k.contains_scaled(&img, 0.0) && !is_zero_vec(&img),
                OrderGrade::Strong => k.interior_unchecked(&img, 0.0),
            };
            comparable && !holds
        }
        Hypothesis::A1 => {
            return Err(Error::Unsupported("A1 witnesses are re-checked with check_a1"));
        }
        Hypothesis::Positivity(_) | Hypothesis::A2 | Hypothesis::OrbitGrowth => {
            return Err(Error::Unsupported("no exact re-check for this witness"));
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationCheck {
    pub premise: String,
    pub conclusion: String,
    pub holds: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationAudit {
    pub verdicts: Vec<HypothesisVerdict>,
    pub implications: Vec<ImplicationCheck>,
    /// False means a checker or the reduction is wrong, not the mathematics.
    pub consistent: bool,
}

/// Runs the boundary checkers and checks `SSP ⇒ B1`, `B2 ⇒ B1`, `SSI ⇒ B2`
/// and, for structurally superadditive maps, `B1 ⇒ B2`. B1 is skipped (and
/// its implications with it) when the map is not positive.
pub fn implication_audit<S: Scalar>(map: &ConeMap<S>, budget: usize, seed: u64) -> Result<ImplicationAudit> {
    let t = map.to_exact();
    let b1 = match check_b1(&t, budget, seed) {
        Ok(v) => Some(v),
        Err(Error::NotPositive(_)) => None,
        Err(e) => return Err(e),
    };
    let b2 = check_b2(&t, budget, seed)?;
    let ssp = check_ssp(&t, budget, seed)?;
    let ssi = check_ssi(&t, budget, seed)?;

    let mut checks = Vec::new();
    let simple = |p: &HypothesisVerdict, q: &HypothesisVerdict| ImplicationCheck {
        premise: p.hypothesis.to_string(),
        conclusion: q.hypothesis.to_string(),
        holds: !(p.passed() && q.failed()),
        note: String::new(),
    };
    if let Some(b1) = &b1 {
        checks.push(simple(&ssp, b1));
        checks.push(simple(&b2, b1));
    }
    checks.push(simple(&ssi, &b2));
    if let Some(b1) = &b1 {
        if t.is_structurally_superadditive() {
            let mut c = simple(b1, &b2);
            if !c.holds {
                // superadditivity turns a (B2) failure at (x, y) into a (B1)
                // failure at x - y
                let w = b2.witness.as_ref().expect("failures carry witnesses");
                let d = sub(&w.points[0], &w.points[1]);
                let img = t.apply(&d)?;
                if beta_range(t.cone(), &d, &img).is_feasible() {
                    c.holds = true;
                    c.note = "B1 fails at the B2 witness difference; the sampled B1 pass missed it".into();
                }
            }
            checks.push(c);
        }
    }
    let consistent = checks.iter().all(|c| c.holds);
    let mut verdicts: Vec<HypothesisVerdict> = b1.into_iter().collect();
    verdicts.extend([b2, ssp, ssi]);
    Ok(ImplicationAudit { verdicts, implications: checks, consistent })
}

/// Consequences of (B1)/(B2) that can be read off the eigenvalue oracle:
/// with (B1) every cone eigenvector is interior, all cone eigenvalues agree
/// and interior points map to interior points; with (B2) the eigencone is a
/// single ray.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessProperties {
    pub b1: Option<Verdict>,
    pub b2: Verdict,
    pub eigenvalues: Vec<f64>,
    pub eigenvalue_singleton: bool,
    pub eigenvectors_interior: bool,
    pub interior_preserved: bool,
    pub eigencone_dim: Option<usize>,
    /// Every property implied by a passing hypothesis holds.
    pub holds: bool,
}

pub fn uniqueness_properties<S: Scalar>(map: &ConeMap<S>, budget: usize, seed: u64) -> Result<UniquenessProperties> {
    let t = map.to_exact();
    let b1 = match check_b1(&t, budget, seed) {
        Ok(v) => Some(v.verdict),
        Err(Error::NotPositive(_)) => None,
        Err(e) => return Err(e),
    };
    let b2 = check_b2(&t, budget, seed)?.verdict;
    let oracle = enumerate_eigenpairs_pwl(&t)?;
    let cone_pairs: Vec<_> = oracle.pairs.iter().filter(|p| p.location != Location::Outside).collect();
    let eigenvalues: Vec<f64> = {
        let mut v: Vec<f64> = cone_pairs.iter().map(|p| p.lambda).collect();
        v.dedup();
        v
    };
    let (lo, hi) = eigenvalues.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &l| (a.min(l), b.max(l)));
    let eigenvalue_singleton = eigenvalues.is_empty() || hi - lo <= 1e-12;
    let eigenvectors_interior = cone_pairs.iter().all(|p| p.location == Location::Interior);
    let sampler = ConeSampler::new(t.cone());
    let interior_preserved = (0..budget.max(1)).into_par_iter().all(|i| {
        let x = sampler.interior_point(&mut sample_rng(seed, i as u64));
        t.apply(&x).map(|y| t.cone().interior_unchecked(&y, 0.0)).unwrap_or(false)
    });
    let eigencone_dim = oracle.eigencones.iter().filter(|c| c.lambda >= 0.0).map(|c| c.dim).max();
    let mut holds = true;
    if b1.is_some_and(Verdict::is_pass) && !cone_pairs.is_empty() {
        holds &= eigenvalue_singleton && eigenvectors_interior && interior_preserved;
    }
    if b2.is_pass() && !cone_pairs.is_empty() {
        holds &= eigenvalue_singleton && oracle.eigencones.iter().all(|c| c.lambda < 0.0 || c.rays.len() == 1);
    }
    if eigencone_dim.is_some_and(|d| d > 1) {
        // the contrapositive of the (B2) conclusion
        holds &= b2 == Verdict::Fail;
    }
    Ok(UniquenessProperties {
        b1,
        b2,
        eigenvalues,
        eigenvalue_singleton,
        eigenvectors_interior,
        interior_preserved,
        eigencone_dim,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::scalar::rat;

    fn lin(rows: &[&[f64]]) -> ConeMap<f64> {
        let m = Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap();
        ConeMap::linear(PolyhedralCone::orthant(rows.len()), m).unwrap()
    }

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn a1_clauses() {
        let nil = lin(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let d = A1Data::from_vw(r(&[0, 1]), r(&[0, 0]), rat(1, 1), 2);
        let v = check_a1(&nil, &d).unwrap();
        assert!(v.failed());
        assert!(v.detail.contains("M T^p(u)"));
        let zero = A1Data::from_vw(r(&[1, 1]), r(&[1, 1]), rat(1, 1), 1);
        assert!(check_a1(&nil, &zero).unwrap().detail.contains("u != 0"));
        let pos = lin(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let ok = A1Data::from_vw(r(&[1, 1]), r(&[0, 0]), rat(1, 1), 1);
        assert_eq!(check_a1(&pos, &ok).unwrap().verdict, Verdict::PassCertified);
    }

    #[test]
    fn a2_orbits() {
        let dbl = lin(&[&[2.0, 0.0], &[0.0, 2.0]]);
        assert_eq!(check_a2_orbit(&dbl, &[1.0, 1.0], 1e6, 64).unwrap().verdict, Verdict::PassSampled);
        let half = lin(&[&[0.5, 0.0], &[0.0, 0.5]]);
        assert_eq!(check_a2_orbit(&half, &[1.0, 1.0], 1e6, 2000).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn beta_reduction_examples() {
        let k = PolyhedralCone::<Rational>::orthant(2);
        assert_eq!(beta_range(&k, &r(&[1, 0]), &r(&[1, 0])), BetaRange::UpTo(rat(1, 1)));
        assert_eq!(beta_range(&k, &r(&[1, 0]), &r(&[1, 1])), BetaRange::Empty);
        assert_eq!(beta_range(&k, &r(&[1, 0]), &r(&[0, 0])), BetaRange::Unbounded);
        assert!(reduction_matches_grid(&k, &r(&[1, 0]), &r(&[3, 0])));
    }

    #[test]
    fn b1_examples() {
        let id = lin(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let v = check_b1(&id, 50, 1).unwrap();
        assert!(v.failed());
        let w = v.witness.clone().unwrap();
        assert_eq!(w.beta, Some(rat(1, 1)));
        assert!(reverify_witness(&id, &v).unwrap());

        let shear = lin(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let v = check_b1(&shear, 50, 1).unwrap();
        assert!(v.failed());
        assert_eq!(v.witness.as_ref().unwrap().points[0], r(&[1, 0]));

        let pos = lin(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert_eq!(check_b1(&pos, 50, 1).unwrap().verdict, Verdict::PassSampled);

        let neg = lin(&[&[1.0, -1.0], &[0.0, 1.0]]);
        assert!(matches!(check_b1(&neg, 50, 1), Err(Error::NotPositive(_))));
    }

    #[test]
    fn b2_ssp_ssi_examples() {
        let id = lin(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let v = check_b2(&id, 50, 1).unwrap();
        assert!(v.failed());
        assert!(reverify_witness(&id, &v).unwrap());
        let ssp = check_ssp(&id, 50, 1).unwrap();
        assert!(ssp.failed());
        assert_eq!(ssp.witness.as_ref().unwrap().points[0], r(&[1, 0]));

        let pos = lin(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert!(check_b2(&pos, 50, 1).unwrap().passed());
        assert!(check_ssi(&pos, 50, 1).unwrap().passed());
    }

    #[test]
    fn audits_are_consistent() {
        for m in [lin(&[&[2.0, 1.0], &[1.0, 2.0]]), lin(&[&[1.0, 0.0], &[0.0, 1.0]])] {
            let a = implication_audit(&m, 50, 1).unwrap();
            assert!(a.consistent);
        }
        let a = implication_audit(&lin(&[&[1.0, 0.0], &[0.0, 1.0]]), 50, 1).unwrap();
        assert!(a.verdicts.iter().all(|v| v.failed()));
    }

    #[test]
    fn uniqueness_for_positive_matrix() {
        let p = uniqueness_properties(&lin(&[&[2.0, 1.0], &[1.0, 2.0]]), 50, 1).unwrap();
        assert!(p.holds && p.eigenvalue_singleton && p.eigenvectors_interior);
        assert_eq!(p.eigencone_dim, Some(1));
    }
}

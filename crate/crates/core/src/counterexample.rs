//! A strongly positive, strictly order-preserving, 1-homogeneous map on the
//! plane with a two-dimensional cone of eigenvectors.
//!
//! On the nonnegative quadrant split into
//! `K1 = {x1 > 2 x2}`, `K3 = {x2 > 2 x1}` and the closed middle sector `K2`,
//!
//! ```text
//! T(x) = [[2, 2], [1, 1]] x   on K1
//!        3 x                  on K2
//!        [[1, 1], [2, 2]] x   on K3
//! ```
//!
//! Every point of `K2` is an eigenvector for 3, so uniqueness of the positive
//! unit eigenvector and geometric simplicity both fail even though the
//! classical hypotheses (strong positivity, strict monotonicity) hold.
//! Everything here is exact rational arithmetic.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cone::PolyhedralCone;
use crate::error::{Error, Result};
use crate::hypotheses::{a1_violation, A1Data};
use crate::linalg::{self, is_zero_vec, sub, Matrix};
use crate::maps::{classify_positivity, ConeMap, ConicRegion};
use crate::sampling::{sample_rng, ConeSampler, COEFF_DEN};
use crate::scalar::{format_rational, rat, Rational, Scalar};
use crate::spectral::enumerate_eigenpairs_pwl;
use crate::verdict::PositivityGrade;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    K1,
    K2,
    K3,
}

fn mul(a: &Rational, b: &Rational) -> Rational {
    a.mul_ref(b)
}

/// Ties on the rays `x1 = 2 x2` and `x2 = 2 x1` belong to the closed middle
/// sector.
pub fn region_of(x: &[Rational]) -> Region {
    let two = rat(2, 1);
    if x[0] > mul(&two, &x[1]) {
        Region::K1
    } else if x[1] > mul(&two, &x[0]) {
        Region::K3
    } else {
        Region::K2
    }
}

fn m(rows: [[i64; 2]; 2]) -> Matrix<Rational> {
    Matrix::from_rows(rows.iter().map(|r| vec![rat(r[0], 1), rat(r[1], 1)]).collect()).expect("2x2")
}

/// The map, validated for continuity and cover at construction.
pub fn build_counterexample() -> ConeMap<Rational> {
    let k1 = ConicRegion::new(vec![vec![rat(1, 1), rat(-2, 1)]], vec![], m([[2, 2], [1, 1]]));
    let k2 = ConicRegion::new(vec![], vec![vec![rat(-1, 1), rat(2, 1)], vec![rat(2, 1), rat(-1, 1)]], m([[3, 0], [0, 3]]));
    let k3 = ConicRegion::new(vec![vec![rat(-2, 1), rat(1, 1)]], vec![], m([[1, 1], [2, 2]]));
    ConeMap::piecewise(PolyhedralCone::orthant(2), vec![k1, k2, k3]).expect("the three sectors form a continuous partition")
}

/// One configuration of comparable pairs `lower ≺ upper`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Configuration {
    /// `lower` in the first region, `upper` in the second.
    Regions(Region, Region),
    /// `lower` on one of the rays shared by `K2` and `K1`/`K3`.
    LowerOnSharedRay,
    /// `upper` on one of the shared rays.
    UpperOnSharedRay,
}

impl Configuration {
    pub fn all() -> Vec<Configuration> {
        let rs = [Region::K1, Region::K2, Region::K3];
        let mut out: Vec<Configuration> =
            rs.iter().flat_map(|&a| rs.iter().map(move |&b| Configuration::Regions(a, b))).collect();
        out.push(Configuration::LowerOnSharedRay);
        out.push(Configuration::UpperOnSharedRay);
        out
    }

    pub fn name(&self) -> String {
        match self {
            Configuration::Regions(a, b) => format!("lower in {a:?}, upper in {b:?}"),
            Configuration::LowerOnSharedRay => "lower on a shared ray".into(),
            Configuration::UpperOnSharedRay => "upper on a shared ray".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseViolation {
    pub lower: Vec<String>,
    pub upper: Vec<String>,
    pub what: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub configuration: String,
    pub samples: usize,
    /// Labels of the intermediate inequality chains re-derived on every pair.
    pub inequalities: Vec<&'static str>,
    pub violations: Vec<CaseViolation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseAnalysisReport {
    pub cases: Vec<CaseReport>,
    pub total_pairs: usize,
    pub total_violations: usize,
}

fn coeff<R: Rng>(rng: &mut R, max: i64) -> Rational {
    rat(rng.random_range(1..=max * COEFF_DEN), COEFF_DEN)
}

/// A point of the given region: `(s, s t)` with `t` in `[0, 1/2)` for `K1`,
/// `[1/2, 2]` for `K2`, and the mirror image for `K3`.
fn point_in<R: Rng>(region: Region, rng: &mut R) -> Vec<Rational> {
    let s = coeff(rng, 10);
    let half = COEFF_DEN / 2;
    match region {
        Region::K1 => {
            let t = rat(rng.random_range(0..half), COEFF_DEN);
            vec![s.clone(), mul(&s, &t)]
        }
        Region::K3 => {
            let t = rat(rng.random_range(0..half), COEFF_DEN);
            vec![mul(&s, &t), s]
        }
        Region::K2 => {
            let t = rat(rng.random_range(half..=2 * COEFF_DEN), COEFF_DEN);
            if rng.random_bool(0.5) {
                vec![s.clone(), mul(&s, &t)]
            } else {
                vec![mul(&s, &t), s]
            }
        }
    }
}

fn shared_ray<R: Rng>(rng: &mut R) -> Vec<Rational> {
    let s = coeff(rng, 10);
    if rng.random_bool(0.5) {
        vec![&s * rat(2, 1), s]
    } else {
        vec![s.clone(), s * rat(2, 1)]
    }
}

/// `lower = (a upper1, b upper2)` with `a, b` in `[0, 1]`, so `lower ⪯ upper`.
fn shrink<R: Rng>(upper: &[Rational], rng: &mut R) -> Vec<Rational> {
    upper
        .iter()
        .map(|u| {
            let f = rat(rng.random_range(0..=COEFF_DEN), COEFF_DEN);
            mul(u, &f)
        })
        .collect()
}

/// Bounds on `x2 / x1` for each region; `None` is unbounded.
fn ratio_bounds(region: Region) -> (Rational, Option<Rational>) {
    match region {
        Region::K1 => (rat(0, 1), Some(rat(1, 2))),
        Region::K2 => (rat(1, 2), Some(rat(2, 1))),
        Region::K3 => (rat(2, 1), None),
    }
}

fn unit_fraction<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational) -> Rational {
    lo + mul(&(hi - lo), &rat(rng.random_range(0..=COEFF_DEN), COEFF_DEN))
}

/// `lower = (a upper1, b upper2)` with `a, b` in `(0, 1]` chosen so that
/// `b / a` puts `lower` in the target region.
fn shrink_into<R: Rng>(region: Region, upper: &[Rational], rng: &mut R) -> Option<Vec<Rational>> {
    let zero = rat(0, 1);
    let one = rat(1, 1);
    if upper[0] == zero {
        // every shrink of (0, s) stays on the K3 axis
        return (region == Region::K3).then(|| vec![zero.clone(), mul(&upper[1], &unit_fraction(rng, &zero, &one))]);
    }
    let r = &upper[1] / &upper[0];
    let (lo, hi) = ratio_bounds(region);
    // lower ratio is (b / a) r
    let a_max = if lo == zero {
        one.clone()
    } else if r == zero {
        return None;
    } else {
        (&r / &lo).min(one.clone())
    };
    let a = unit_fraction(rng, &zero, &a_max);
    if a == zero {
        return None;
    }
    let b_lo = if r == zero { zero.clone() } else { mul(&a, &lo) / &r };
    let b_hi = match (&hi, r == zero) {
        (Some(h), false) => (mul(&a, h) / &r).min(one.clone()),
        _ => one.clone(),
    };
    if b_lo > b_hi {
        return None;
    }
    let b = unit_fraction(rng, &b_lo, &b_hi);
    Some(vec![mul(&upper[0], &a), mul(&upper[1], &b)])
}

/// Draws `lower ≺ upper` in the configuration from exact rational
/// candidates; the rare candidates landing on an excluded region boundary
/// are redrawn.
fn draw_pair(cfg: Configuration, seed: u64, index: u64) -> (Vec<Rational>, Vec<Rational>) {
    let mut rng = sample_rng(seed, index);
    loop {
        let (lower, upper) = match cfg {
            Configuration::Regions(a, b) => {
                let upper = point_in(b, &mut rng);
                match shrink_into(a, &upper, &mut rng) {
                    Some(lower) if region_of(&lower) == a => (lower, upper),
                    _ => continue,
                }
            }
            Configuration::LowerOnSharedRay => {
                let lower = shared_ray(&mut rng);
                let d: Vec<Rational> = (0..2).map(|_| rat(rng.random_range(0..=10 * COEFF_DEN), COEFF_DEN)).collect();
                (lower.clone(), linalg::add(&lower, &d))
            }
            Configuration::UpperOnSharedRay => {
                let upper = shared_ray(&mut rng);
                (shrink(&upper, &mut rng), upper)
            }
        };
        if lower != upper && !is_zero_vec(&lower) {
            return (lower, upper);
        }
    }
}

/// The intermediate inequalities of the case analysis, stated for
/// `x ∈ K1` (for `K3` the coordinates are swapped first).
fn chain_checks(cfg: Configuration, lower: &[Rational], upper: &[Rational]) -> (Vec<&'static str>, Vec<String>) {
    let two = rat(2, 1);
    let three = rat(3, 1);
    let swap = |v: &[Rational]| vec![v[1].clone(), v[0].clone()];
    let mut labels = Vec::new();
    let mut failed = Vec::new();
    let mut check = |label: &'static str, ok: bool| {
        if !labels.contains(&label) {
            labels.push(label);
        }
        if !ok {
            failed.push(label.to_string());
        }
    };
    match cfg {
        Configuration::Regions(Region::K1, Region::K3) | Configuration::Regions(Region::K3, Region::K1) => {
            let (x, y) = if cfg == Configuration::Regions(Region::K1, Region::K3) {
                (lower.to_vec(), upper.to_vec())
            } else {
                (swap(lower), swap(upper))
            };
            // 2 x2 < x1 <= y1 < y2 / 2
            check("2x2 < x1 <= y1 < y2/2", mul(&two, &x[1]) < x[0] && x[0] <= y[0] && y[0] < &y[1] / &two);
            // x1 + x2 < 3 x1 / 2 <= 3 y1 / 2 < (y1 + y2) / 2
            let sx = &x[0] + &x[1];
            let sy = &y[0] + &y[1];
            check(
                "x1+x2 < 3x1/2 <= 3y1/2 < (y1+y2)/2",
                sx < mul(&three, &x[0]) / &two && x[0] <= y[0] && mul(&three, &y[0]) / &two < &sy / &two,
            );
        }
        Configuration::Regions(Region::K1, Region::K2) | Configuration::Regions(Region::K3, Region::K2) => {
            let (x, y) = if cfg == Configuration::Regions(Region::K1, Region::K2) {
                (lower.to_vec(), upper.to_vec())
            } else {
                (swap(lower), swap(upper))
            };
            check("2x2 < x1 <= y1 <= 2y2", mul(&two, &x[1]) < x[0] && x[0] <= y[0] && y[0] <= mul(&two, &y[1]));
            let sx = &x[0] + &x[1];
            check("2(x1+x2) < 3y1 and x1+x2 < 3y2", mul(&two, &sx) < mul(&three, &y[0]) && sx < mul(&three, &y[1]));
        }
        Configuration::Regions(Region::K2, Region::K1) | Configuration::Regions(Region::K2, Region::K3) => {
            // the reverse order: x in K1 (or K3) is the larger element
            let (y, x) = if cfg == Configuration::Regions(Region::K2, Region::K1) {
                (lower.to_vec(), upper.to_vec())
            } else {
                (swap(lower), swap(upper))
            };
            check("x1 > 2x2 >= 2y2 >= y1", x[0] > mul(&two, &x[1]) && mul(&two, &x[1]) >= mul(&two, &y[1]) && mul(&two, &y[1]) >= y[0]);
            let sx = &x[0] + &x[1];
            check("2(x1+x2) > 3y1 and x1+x2 > 3y2", mul(&two, &sx) > mul(&three, &y[0]) && sx > mul(&three, &y[1]));
        }
        _ => {}
    }
    (labels, failed)
}

/// Samples `samples_per_case` comparable pairs in each configuration and
/// verifies `T(lower) ≺ T(upper)` and the inequality chains exactly.
pub fn verify_case_analysis(samples_per_case: usize, seed: u64) -> CaseAnalysisReport {
    let t = build_counterexample();
    let k = t.cone().clone();
    let cases: Vec<CaseReport> = Configuration::all()
        .into_iter()
        .enumerate()
        .map(|(ci, cfg)| {
            let case_seed = seed.wrapping_add(ci as u64).wrapping_mul(0x2545_f491_4f6c_dd1d);
            let results: Vec<(Vec<&'static str>, Option<CaseViolation>)> = (0..samples_per_case)
                .into_par_iter()
                .map(|i| {
                    let (lower, upper) = draw_pair(cfg, case_seed, i as u64);
                    let (labels, mut failed) = chain_checks(cfg, &lower, &upper);
                    let tl = t.apply(&lower).expect("in the cone");
                    let tu = t.apply(&upper).expect("in the cone");
                    let d = sub(&tu, &tl);
                    if !(k.contains_scaled(&d, 0.0) && !is_zero_vec(&d)) {
                        failed.push("T(lower) ≺ T(upper)".into());
                    }
                    let v = (!failed.is_empty()).then(|| CaseViolation {
                        lower: lower.iter().map(format_rational).collect(),
                        upper: upper.iter().map(format_rational).collect(),
                        what: failed.join("; "),
                    });
                    (labels, v)
                })
                .collect();
            let mut inequalities: Vec<&'static str> = Vec::new();
            let mut violations = Vec::new();
            for (labels, v) in results {
                for l in labels {
                    if !inequalities.contains(&l) {
                        inequalities.push(l);
                    }
                }
                violations.extend(v);
            }
            CaseReport { configuration: cfg.name(), samples: samples_per_case, inequalities, violations }
        })
        .collect();
    let total_pairs = cases.iter().map(|c| c.samples).sum();
    let total_violations = cases.iter().map(|c| c.violations.len()).sum();
    CaseAnalysisReport { cases, total_pairs, total_violations }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub claim: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvectorCertificate {
    pub ray: Vec<String>,
    pub unit: Vec<f64>,
    pub image: Vec<String>,
    pub lambda: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefutationReport {
    pub hypotheses: Vec<Certificate>,
    pub case_analysis: CaseAnalysisReport,
    pub boundary_samples: usize,
    pub eigenvectors: Vec<EigenvectorCertificate>,
    pub non_eigenvectors: Vec<Certificate>,
    pub eigencone_rays: Vec<Vec<String>>,
    pub eigencone_dim: usize,
    pub cone_eigenvalues: Vec<String>,
    pub strong_order_failure: Certificate,
    pub refuted: Vec<String>,
    pub unaffected: Vec<String>,
}

fn fmt_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn certify(claim: &str, holds: bool, detail: impl Into<String>) -> Result<Certificate> {
    let c = Certificate { claim: claim.into(), holds, detail: detail.into() };
    if !holds {
        return Err(Error::Certificate(format!("{}: {}", c.claim, c.detail)));
    }
    Ok(c)
}

fn r2(a: i64, b: i64) -> Vec<Rational> {
    vec![rat(a, 1), rat(b, 1)]
}

/// Machine-checked refutation: the map meets the hypotheses yet has three
/// distinct positive unit eigenvectors for the eigenvalue 3 and a
/// two-dimensional eigencone. Any failing certificate aborts with an error.
pub fn refutation_report(samples_per_case: usize, boundary_samples: usize, seed: u64) -> Result<RefutationReport> {
    let t = build_counterexample();
    let k = t.cone().clone();
    let three = rat(3, 1);

    let case_analysis = verify_case_analysis(samples_per_case, seed);
    let mut hypotheses = vec![certify(
        "strictly order-preserving",
        case_analysis.total_violations == 0,
        format!(
            "{} comparable pairs over {} region configurations, {} violations",
            case_analysis.total_pairs,
            case_analysis.cases.len(),
            case_analysis.total_violations
        ),
    )?];
    hypotheses.push(certify("1-homogeneous", true, "every region is a cone and every piece is linear")?);
    hypotheses.push(certify(
        "continuous (completely continuous in finite dimension)",
        true,
        "pieces agree exactly on the shared rays (2,1) and (1,2), checked at construction",
    )?);
    let a1 = A1Data::from_vw(r2(1, 1), r2(0, 0), rat(1, 1), 1);
    let clause = a1_violation(&t, &a1)?;
    hypotheses.push(certify("M T(u) ⪰ u with u = (1,1), M = 1", clause.is_none(), "T(u) = (3,3)")?);
    hypotheses.push(certify("cone has nonempty interior", k.is_solid(), "nonnegative quadrant")?);
    let pos = classify_positivity(&t, 0, seed)?;
    hypotheses.push(certify(
        "strongly positive (piecewise certificate)",
        pos.grade == PositivityGrade::StronglyPositive && pos.certified,
        format!("grade {}", pos.grade.name()),
    )?);
    for ray in [r2(1, 0), r2(0, 1)] {
        let y = t.apply(&ray)?;
        hypotheses.push(certify(
            "boundary ray maps into the interior",
            k.interior_unchecked(&y, 0.0),
            format!("T({:?}) = {:?}", fmt_vec(&ray), fmt_vec(&y)),
        )?);
    }
    let sampler = ConeSampler::new(&k);
    let bad = (0..boundary_samples).into_par_iter().find_first(|&i| {
        let z = sampler.boundary_point(i, &mut sample_rng(seed, i as u64));
        !t.apply(&z).map(|y| k.interior_unchecked(&y, 0.0)).unwrap_or(false)
    });
    hypotheses.push(certify(
        "boundary samples map into the interior",
        bad.is_none(),
        format!("{boundary_samples} seeded boundary points"),
    )?);

    let mut eigenvectors = Vec::new();
    for ray in [r2(2, 1), r2(1, 1), r2(1, 2)] {
        let y = t.apply(&ray)?;
        let expected: Vec<Rational> = ray.iter().map(|v| v * &three).collect();
        certify("T(x) = 3x", y == expected, format!("x = {:?}", fmt_vec(&ray)))?;
        eigenvectors.push(EigenvectorCertificate {
            ray: fmt_vec(&ray),
            unit: linalg::normalize(&crate::scalar::vec_to_f64(&ray)),
            image: fmt_vec(&y),
            lambda: "3".into(),
        });
    }
    let mut non_eigenvectors = Vec::new();
    let e1 = r2(1, 0);
    let te1 = t.apply(&e1)?;
    non_eigenvectors.push(certify(
        "not an eigenvector",
        !linalg::parallel(&te1, &e1),
        format!("T((1,0)) = {:?}", fmt_vec(&te1)),
    )?);
    // interior points of K1 and K3 are not eigenvectors; points of K2 are
    let mixed = (0..boundary_samples.max(1)).into_par_iter().find_first(|&i| {
        let mut rng = sample_rng(seed ^ 0xe16e, i as u64);
        let region = [Region::K1, Region::K2, Region::K3][i % 3];
        let x = point_in(region, &mut rng);
        if x[0] == rat(0, 1) || x[1] == rat(0, 1) {
            return false;
        }
        let y = t.apply(&x).expect("in the cone");
        let is_eigen = linalg::parallel(&y, &x);
        let is_three = y == x.iter().map(|v| v * &three).collect::<Vec<_>>();
        match region {
            Region::K2 => !is_three,
            _ => is_eigen,
        }
    });
    non_eigenvectors.push(certify(
        "eigenvectors are exactly the points of K2",
        mixed.is_none(),
        "sampled interior points of K1 and K3 are not eigenvectors; sampled points of K2 satisfy T(x) = 3x",
    )?);

    let oracle = enumerate_eigenpairs_pwl(&t)?;
    let cone = oracle
        .eigencones
        .iter()
        .find(|c| c.lambda_exact.as_ref() == Some(&three))
        .ok_or_else(|| Error::Certificate("no eigencone for eigenvalue 3".into()))?;
    let rays_exact = cone.rays_exact.clone().unwrap_or_default();
    certify(
        "eigencone for 3 is K2",
        cone.dim == 2
            && rays_exact.len() == 2
            && rays_exact.iter().any(|r| linalg::same_ray(r, &r2(2, 1)))
            && rays_exact.iter().any(|r| linalg::same_ray(r, &r2(1, 2))),
        format!("dimension {}", cone.dim),
    )?;
    let cone_eigenvalues: Vec<String> = oracle
        .eigencones
        .iter()
        .filter(|c| c.lambda >= 0.0)
        .map(|c| c.lambda_exact.as_ref().map(format_rational).unwrap_or_else(|| c.lambda.to_string()))
        .collect();
    certify("all cone eigenvalues equal 3", cone_eigenvalues == vec!["3".to_string()], cone_eigenvalues.join(", "))?;

    let (x, y) = (r2(1, 1), vec![rat(1, 1), rat(3, 2)]);
    let diff = sub(&t.apply(&y)?, &t.apply(&x)?);
    let strong_order_failure = certify(
        "not strongly order-preserving",
        k.on_boundary(&sub(&y, &x), 0.0) && k.on_boundary(&diff, 0.0),
        format!("x = (1,1) ≺ y = (1,3/2) but T(y) - T(x) = {:?} lies on the boundary", fmt_vec(&diff)),
    )?;

    Ok(RefutationReport {
        hypotheses,
        case_analysis,
        boundary_samples,
        eigenvectors,
        non_eigenvectors,
        eigencone_rays: rays_exact.iter().map(|r| fmt_vec(r)).collect(),
        eigencone_dim: cone.dim,
        cone_eigenvalues,
        strong_order_failure,
        refuted: vec![
            "the positive unit eigenvector is unique".into(),
            "the eigenvalue is geometrically simple".into(),
        ],
        unaffected: vec![
            "existence of a positive eigenpair".into(),
            "lambda >= |lambda'| for real eigenvalues lambda' (every cone eigenvalue is 3)".into(),
        ],
    })
}

impl RefutationReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "Counterexample: T = [[2,2],[1,1]] on K1, 3I on K2, [[1,1],[2,2]] on K3");
        let _ = writeln!(s, "\nHypotheses satisfied:");
        for c in &self.hypotheses {
            let _ = writeln!(s, "  [{}] {}: {}", if c.holds { "ok" } else { "FAILED" }, c.claim, c.detail);
        }
        let _ = writeln!(s, "\nCase analysis ({} pairs):", self.case_analysis.total_pairs);
        for c in &self.case_analysis.cases {
            let _ = writeln!(
                s,
                "  {:<28} {:>7} pairs, {} violations{}",
                c.configuration,
                c.samples,
                c.violations.len(),
                if c.inequalities.is_empty() { String::new() } else { format!("; checked {}", c.inequalities.join(", ")) }
            );
        }
        let _ = writeln!(s, "\nEigenvectors for lambda = 3:");
        for e in &self.eigenvectors {
            let _ = writeln!(s, "  T({}) = ({})  unit {:?}", e.ray.join(", "), e.image.join(", "), e.unit);
        }
        for c in &self.non_eigenvectors {
            let _ = writeln!(s, "  {}: {}", c.claim, c.detail);
        }
        let rays: Vec<String> = self.eigencone_rays.iter().map(|r| format!("({})", r.join(", "))).collect();
        let _ = writeln!(s, "\nEigencone: rays {} , dimension {}", rays.join(" "), self.eigencone_dim);
        let _ = writeln!(s, "Cone eigenvalues: {}", self.cone_eigenvalues.join(", "));
        let _ = writeln!(s, "{}: {}", self.strong_order_failure.claim, self.strong_order_failure.detail);
        let _ = writeln!(s, "\nRefuted:");
        for r in &self.refuted {
            let _ = writeln!(s, "  - {r}");
        }
        let _ = writeln!(s, "Unaffected:");
        for r in &self.unaffected {
            let _ = writeln!(s, "  - {r}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_examples() {
        let t = build_counterexample();
        assert_eq!(t.apply(&r2(1, 0)).unwrap(), r2(2, 1));
        assert_eq!(t.apply(&r2(2, 1)).unwrap(), r2(6, 3));
        assert_eq!(t.apply(&r2(1, 1)).unwrap(), r2(3, 3));
        assert_eq!(region_of(&r2(2, 1)), Region::K2);
        assert_eq!(m([[2, 2], [1, 1]]).mul_vec(&r2(2, 1)), r2(6, 3));
    }

    #[test]
    fn case_examples() {
        let t = build_counterexample();
        let x = vec![rat(1, 1), rat(1, 4)];
        assert_eq!(t.apply(&x).unwrap(), vec![rat(5, 2), rat(5, 4)]);
        assert_eq!(t.apply(&r2(1, 3)).unwrap(), r2(4, 8));
        assert_eq!(t.apply(&[rat(2, 1), rat(3, 2)]).unwrap(), vec![rat(6, 1), rat(9, 2)]);
    }

    #[test]
    fn small_case_analysis_has_no_violations() {
        let r = verify_case_analysis(200, 11);
        assert_eq!(r.cases.len(), 11);
        assert_eq!(r.total_violations, 0);
        assert!(r.cases.iter().filter(|c| !c.inequalities.is_empty()).count() >= 6);
    }

    #[test]
    fn pairs_land_in_their_configuration() {
        for cfg in Configuration::all() {
            for i in 0..50 {
                let (lo, up) = draw_pair(cfg, 5, i);
                let d = sub(&up, &lo);
                assert!(d.iter().all(|v| *v >= rat(0, 1)) && !is_zero_vec(&d));
                if let Configuration::Regions(a, b) = cfg {
                    assert_eq!((region_of(&lo), region_of(&up)), (a, b));
                }
            }
        }
    }

    #[test]
    fn small_refutation_report() {
        let r = refutation_report(100, 100, 3).unwrap();
        assert_eq!(r.eigencone_dim, 2);
        assert_eq!(r.eigenvectors.len(), 3);
        assert!(r.to_text().contains("Eigencone"));
    }
}

//! Batch front end: load a map, run analyses, write one report per analysis.
//!
//! Exit status is 0 when everything passes, 2 when a check fails that is not
//! listed as expected, and 1 on errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::counterexample::{refutation_report, verify_case_analysis};
use crate::description::{self, Description};
use crate::error::{Error, Result};
use crate::hypotheses::{check_a1, check_a2_orbit, implication_audit, uniqueness_properties};
use crate::linalg::add;
use crate::maps::{check_order_preserving, check_superadditive, classify_positivity, SuperadditiveScope};
use crate::sampling::ConeSampler;
use crate::spectral::{analyze_spectrum, orbit_growth_check, SpectralConfig};
use crate::superadditive::{analyze_superadditive, SuperadditiveConfig};
use crate::verdict::{HypothesisVerdict, OrderGrade};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Analysis {
    Spectral,
    Hypotheses,
    Superadditive,
    Counterexample,
    CaseAnalysis,
}

impl Analysis {
    pub fn name(self) -> &'static str {
        match self {
            Analysis::Spectral => "spectral",
            Analysis::Hypotheses => "hypotheses",
            Analysis::Superadditive => "superadditive",
            Analysis::Counterexample => "counterexample",
            Analysis::CaseAnalysis => "case_analysis",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "homcone", version, about = "Spectral analysis of homogeneous order-preserving maps on polyhedral cones")]
#[command(group(ArgGroup::new("source").required(true).args(["input", "builtin"])))]
pub struct RunConfig {
    /// Map description (JSON).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Built-in map, e.g. `piecewise_counterexample`.
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "spectral,hypotheses")]
    pub analyses: Vec<Analysis>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long = "n-max", default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: u64,
    #[arg(long, default_value_t = 1e-12, value_parser = positive_f64)]
    pub tol: f64,
    /// Worker threads; reports do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Sampled pairs per region configuration in the counterexample case analysis.
    #[arg(long = "samples-per-case", default_value_t = 10_000)]
    pub samples_per_case: usize,
    /// Directory for report files; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Check names whose failure does not change the exit status, added to
    /// the description's own list.
    #[arg(long = "expected-failures", value_delimiter = ',')]
    pub expected_failures: Vec<String>,
}

fn positive_f64(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub check: String,
    pub expected: bool,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub analysis: Analysis,
    pub body: Value,
    pub text: String,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn unexpected_failures(&self) -> usize {
        self.failures.iter().filter(|f| !f.expected).count()
    }

    pub fn to_json(&self, cfg: &RunConfig) -> Value {
        json!({
            "analysis": self.analysis.name(),
            "config": {
                "source": source_name(cfg),
                "seed": cfg.seed,
                "budget": cfg.budget,
                "n_max": cfg.n_max,
                "tol": cfg.tol,
            },
            "status": if self.unexpected_failures() == 0 { "pass" } else { "fail" },
            "failures": self.failures,
            "report": self.body,
        })
    }
}

fn source_name(cfg: &RunConfig) -> String {
    match (&cfg.input, &cfg.builtin) {
        (Some(p), _) => p.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default(),
        (None, Some(b)) => format!("builtin:{b}"),
        (None, None) => String::new(),
    }
}

fn load(cfg: &RunConfig) -> Result<Description> {
    match (&cfg.input, &cfg.builtin) {
        (Some(p), _) => description::load(p),
        (None, Some(name)) => Ok(Description {
            map: description::builtin(name)?,
            a1: None,
            expected_failures: description::builtin_expected_failures(name),
        }),
        (None, None) => Err(Error::Precondition("one of --input or --builtin is required".into())),
    }
}

struct Collector<'a> {
    expected: &'a [String],
    failures: Vec<Failure>,
}

impl Collector<'_> {
    fn check(&mut self, name: impl Into<String>, ok: bool) {
        if !ok {
            let check = name.into();
            let expected = self.expected.contains(&check);
            self.failures.push(Failure { check, expected });
        }
    }

    fn verdict(&mut self, v: &HypothesisVerdict) {
        self.check(v.hypothesis.to_string(), !v.failed());
    }
}

fn line(text: &mut String, label: &str, v: impl std::fmt::Display) {
    let _ = writeln!(text, "{label:<28} {v}");
}

fn verdict_text(text: &mut String, v: &HypothesisVerdict) {
    let _ = writeln!(text, "{:<28} {:?}: {}", v.hypothesis.to_string(), v.verdict, v.detail);
}

fn run_analysis(a: Analysis, d: &Description, cfg: &RunConfig, expected: &[String]) -> Result<Report> {
    let budget = cfg.budget as usize;
    let n_max = cfg.n_max as usize;
    let mut c = Collector { expected, failures: Vec::new() };
    let mut text = String::new();
    let body = match a {
        Analysis::Spectral => {
            let sc = SpectralConfig { n_max, budget, seed: cfg.seed, tol: cfg.tol, ..SpectralConfig::default() };
            let r = analyze_spectrum(&d.map, &sc)?;
            c.check("spectral_chain", r.chain.holds);
            line(&mut text, "cone norm", format!("{:.12} ({:?})", r.cone_norm.value, r.cone_norm.method));
            line(&mut text, "Bonsall radius", format!("{:.12}", r.bonsall.value));
            line(&mut text, "max local growth", format!("{:.12}", r.chain.max_mu));
            match &r.eigen_radius {
                Some(e) => line(&mut text, "largest cone eigenvalue", format!("{:.12} ({:?})", e.value, e.method)),
                None => line(&mut text, "largest cone eigenvalue", "none found"),
            }
            for p in r.power_iteration.iter() {
                match (&p.pair, &p.error) {
                    (Some(e), _) => line(&mut text, "power iteration", format!("{:?} -> {:.12} at {:?}", p.start, e.lambda, e.x)),
                    (None, Some(err)) => line(&mut text, "power iteration", format!("{:?}: {err}", p.start)),
                    (None, None) => line(&mut text, "power iteration", format!("{:?}: no convergence", p.start)),
                }
            }
            line(&mut text, "chain holds", r.chain.holds);
            serde_json::to_value(&r)?
        }
        Analysis::Hypotheses => {
            let t = &d.map;
            let pos = classify_positivity(t, budget, cfg.seed)?;
            line(&mut text, "positivity", pos.grade.name());
            // classifications: reported, never counted as failures
            let mut properties = Vec::new();
            for g in [OrderGrade::Weak, OrderGrade::Strict, OrderGrade::Strong] {
                properties.push(check_order_preserving(t, g, budget, cfg.seed)?);
            }
            properties.push(check_superadditive(t, SuperadditiveScope::OnCone, budget, cfg.seed)?);
            for v in &properties {
                verdict_text(&mut text, v);
            }
            let mut verdicts = Vec::new();
            let audit = implication_audit(t, budget, cfg.seed)?;
            verdicts.extend(audit.verdicts.iter().cloned());
            let centre = ConeSampler::new(t.cone()).generators().iter().fold(vec![crate::scalar::rat(0, 1); t.dim()], |acc, g| add(&acc, g));
            verdicts.push(check_a2_orbit(t, &centre, 1e-9, n_max)?);
            if let Some(a1) = &d.a1 {
                verdicts.push(check_a1(t, &a1.data)?);
                verdicts.push(match orbit_growth_check(t, &a1.data, &a1.eps, 20) {
                    Ok(v) => v,
                    Err(Error::Precondition(m)) => HypothesisVerdict::inconclusive(crate::verdict::Hypothesis::OrbitGrowth, m),
                    Err(e) => return Err(e),
                });
            }
            for v in &verdicts {
                c.verdict(v);
                verdict_text(&mut text, v);
            }
            c.check("implication_audit", audit.consistent);
            let uniq = uniqueness_properties(t, budget, cfg.seed)?;
            c.check("uniqueness_properties", uniq.holds);
            line(&mut text, "implications consistent", audit.consistent);
            line(&mut text, "uniqueness properties hold", uniq.holds);
            json!({
                "positivity": pos,
                "properties": properties,
                "verdicts": verdicts,
                "implications": audit.implications,
                "uniqueness": uniq,
            })
        }
        Analysis::Superadditive => {
            let sc = SuperadditiveConfig {
                starts: budget.max(50),
                budget,
                seed: cfg.seed,
                n_max,
                ..SuperadditiveConfig::default()
            };
            let r = analyze_superadditive(&d.map, &sc)?;
            c.check("eigenvalue_order", r.lambda_order_holds);
            c.check("off_cone_eigenvalue_bound", r.eigenvalue_bound_holds);
            c.check("multistart_uniqueness", r.multistart.unique != Some(false));
            line(&mut text, "lambda+", format!("{:.12} at {:?}", r.pair_plus.lambda, r.pair_plus.x));
            line(&mut text, "lambda-", format!("{:.12} at {:?}", r.pair_minus.lambda, r.pair_minus.x));
            line(&mut text, "lambda- >= lambda+", r.lambda_order_holds);
            for e in &r.other_eigs {
                line(&mut text, "off-cone eigenvalue", format!("{:.12} at {:?} (bounded: {})", e.lambda, e.x, e.bounded));
            }
            line(&mut text, "multistart", format!("{} of {} converged, spread {:.3e}", r.multistart.converged, r.multistart.starts, r.multistart.max_spread));
            serde_json::to_value(&r)?
        }
        Analysis::Counterexample => {
            let r = refutation_report(cfg.samples_per_case, budget.max(1000), cfg.seed)?;
            c.check("case_analysis", r.case_analysis.total_violations == 0);
            text = r.to_text();
            serde_json::to_value(&r)?
        }
        Analysis::CaseAnalysis => {
            let r = verify_case_analysis(cfg.samples_per_case, cfg.seed);
            c.check("case_analysis", r.total_violations == 0);
            for case in &r.cases {
                line(&mut text, &case.configuration, format!("{} pairs, {} violations", case.samples, case.violations.len()));
            }
            line(&mut text, "total", format!("{} pairs, {} violations", r.total_pairs, r.total_violations));
            serde_json::to_value(&r)?
        }
    };
    Ok(Report { analysis: a, body, text, failures: c.failures })
}

/// Runs every requested analysis in order. Errors abort the run.
pub fn run(cfg: &RunConfig) -> Result<Vec<Report>> {
    let d = load(cfg)?;
    let mut expected = d.expected_failures.clone();
    expected.extend(cfg.expected_failures.iter().cloned());
    let mut analyses = cfg.analyses.clone();
    analyses.dedup();
    let go = || analyses.iter().map(|&a| run_analysis(a, &d, cfg, &expected)).collect::<Result<Vec<_>>>();
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))?
            .install(go),
        None => go(),
    }
}

pub fn render(report: &Report, cfg: &RunConfig) -> Result<String> {
    Ok(match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.to_json(cfg))?;
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("== {} ==\n", report.analysis.name());
            s.push_str(&report.text);
            for f in &report.failures {
                let _ = writeln!(s, "FAILED {}{}", f.check, if f.expected { " (expected)" } else { "" });
            }
            s
        }
    })
}

/// Writes the reports and returns the exit status.
pub fn execute(cfg: &RunConfig) -> i32 {
    let reports = match run(cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let ext = match cfg.format {
        Format::Json => "json",
        Format::Text => "txt",
    };
    if let Some(dir) = &cfg.output {
        if let Err(e) = std::fs::create_dir_all(dir) {
            eprintln!("error: {e}");
            return 1;
        }
    }
    for r in &reports {
        let out = match render(r, cfg) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return 1;
            }
        };
        match &cfg.output {
            Some(dir) => {
                if let Err(e) = std::fs::write(dir.join(format!("{}.{ext}", r.analysis.name())), out) {
                    eprintln!("error: {e}");
                    return 1;
                }
            }
            None => print!("{out}"),
        }
    }
    if reports.iter().any(|r| r.unexpected_failures() > 0) {
        2
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("homcone").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn parses_flags() {
        let c = cfg(&["--builtin", "piecewise_counterexample", "--analyses", "spectral,case_analysis", "--n-max", "8"]);
        assert_eq!(c.analyses, vec![Analysis::Spectral, Analysis::CaseAnalysis]);
        assert_eq!(c.n_max, 8);
        assert!(RunConfig::try_parse_from(["homcone", "--analyses", "spectral"]).is_err());
        assert!(RunConfig::try_parse_from(["homcone", "--builtin", "x", "--budget", "0"]).is_err());
        assert!(RunConfig::try_parse_from(["homcone", "--builtin", "x", "--tol", "-1"]).is_err());
    }

    #[test]
    fn unknown_builtin_is_an_error() {
        assert_eq!(execute(&cfg(&["--builtin", "nope", "--analyses", "spectral"])), 1);
    }

    #[test]
    fn counterexample_hypotheses_fail_only_as_expected() {
        let c = cfg(&["--builtin", "piecewise_counterexample", "--analyses", "hypotheses", "--budget", "64"]);
        let r = run(&c).unwrap();
        assert!(!r[0].failures.is_empty());
        assert_eq!(r[0].unexpected_failures(), 0, "{:?}", r[0].failures);
    }
}

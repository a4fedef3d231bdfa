//! Pass/fail verdicts with exact witnesses.

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::scalar::{format_rational, Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderGrade {
    Weak,
    Strict,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PositivityGrade {
    NotPositive,
    Positive,
    StrictlyPositive,
    StronglyPositive,
}

impl PositivityGrade {
    pub fn name(self) -> &'static str {
        match self {
            PositivityGrade::NotPositive => "not_positive",
            PositivityGrade::Positive => "positive",
            PositivityGrade::StrictlyPositive => "strictly_positive",
            PositivityGrade::StronglyPositive => "strongly_positive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    A1,
    A2,
    B1,
    B2,
    /// Semi-strong positivity.
    Ssp,
    /// Semi-strongly increasing.
    Ssi,
    Superadditive,
    OrderPreserving(OrderGrade),
    Positivity(PositivityGrade),
    /// Finite-horizon growth bound of the rescaled orbit.
    OrbitGrowth,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::A1 => write!(f, "A1"),
            Hypothesis::A2 => write!(f, "A2"),
            Hypothesis::B1 => write!(f, "B1"),
            Hypothesis::B2 => write!(f, "B2"),
            Hypothesis::Ssp => write!(f, "SSP"),
            Hypothesis::Ssi => write!(f, "SSI"),
            Hypothesis::Superadditive => write!(f, "superadditive"),
            Hypothesis::OrderPreserving(g) => write!(f, "order_preserving({})", grade_name(*g)),
            Hypothesis::Positivity(g) => write!(f, "positivity({})", g.name()),
            Hypothesis::OrbitGrowth => write!(f, "orbit_growth"),
        }
    }
}

fn grade_name(g: OrderGrade) -> &'static str {
    match g {
        OrderGrade::Weak => "weak",
        OrderGrade::Strict => "strict",
        OrderGrade::Strong => "strong",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    PassCertified,
    PassSampled,
    Fail,
    /// Neither a pass nor a verified failure within the finite horizon.
    Inconclusive,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        matches!(self, Verdict::PassCertified | Verdict::PassSampled)
    }
}

/// Witness vectors (a point, or a pair `x, y`) plus an optional step `beta`,
/// stored exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub points: Vec<Vec<Rational>>,
    pub beta: Option<Rational>,
}

impl Witness {
    pub fn point<S: Scalar>(x: &[S]) -> Self {
        Witness { points: vec![crate::scalar::vec_to_rational(x)], beta: None }
    }

    pub fn pair<S: Scalar>(x: &[S], y: &[S]) -> Self {
        Witness {
            points: vec![crate::scalar::vec_to_rational(x), crate::scalar::vec_to_rational(y)],
            beta: None,
        }
    }

    pub fn with_beta(mut self, beta: Rational) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn points_f64(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| crate::scalar::vec_to_f64(p)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisVerdict {
    pub hypothesis: Hypothesis,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub detail: String,
    /// Number of sample points (or pairs) examined.
    pub samples: usize,
}

impl HypothesisVerdict {
    pub fn certified(hypothesis: Hypothesis, detail: impl Into<String>) -> Self {
        HypothesisVerdict {
            hypothesis,
            verdict: Verdict::PassCertified,
            witness: None,
            detail: detail.into(),
            samples: 0,
        }
    }

    pub fn sampled(hypothesis: Hypothesis, samples: usize, detail: impl Into<String>) -> Self {
        HypothesisVerdict {
            hypothesis,
            verdict: Verdict::PassSampled,
            witness: None,
            detail: detail.into(),
            samples,
        }
    }

    pub fn fail(hypothesis: Hypothesis, witness: Witness, detail: impl Into<String>) -> Self {
        HypothesisVerdict {
            hypothesis,
            verdict: Verdict::Fail,
            witness: Some(witness),
            detail: detail.into(),
            samples: 0,
        }
    }

    pub fn inconclusive(hypothesis: Hypothesis, detail: impl Into<String>) -> Self {
        HypothesisVerdict {
            hypothesis,
            verdict: Verdict::Inconclusive,
            witness: None,
            detail: detail.into(),
            samples: 0,
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

impl Serialize for HypothesisVerdict {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("hypothesis", &self.hypothesis.to_string())?;
        map.serialize_entry("verdict", &self.verdict)?;
        if let Some(w) = &self.witness {
            let pts: Vec<Vec<String>> =
                w.points.iter().map(|p| p.iter().map(format_rational).collect()).collect();
            map.serialize_entry("witness", &pts)?;
            if let Some(b) = &w.beta {
                map.serialize_entry("beta", &format_rational(b))?;
            }
        }
        map.serialize_entry("detail", &self.detail)?;
        map.serialize_entry("samples", &self.samples)?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn serializes_witness_exactly() {
        let v = HypothesisVerdict::fail(
            Hypothesis::B1,
            Witness::point(&[rat(1, 1), rat(0, 1)]).with_beta(rat(1, 3)),
            "support containment",
        );
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["hypothesis"], "B1");
        assert_eq!(j["verdict"], "fail");
        assert_eq!(j["witness"][0][0], "1");
        assert_eq!(j["beta"], "1/3");
        assert_eq!(
            Hypothesis::OrderPreserving(OrderGrade::Strict).to_string(),
            "order_preserving(strict)"
        );
    }
}

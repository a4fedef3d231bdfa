//! Positivity, order-preservation and superadditivity checks.
//!
//! All checks run over the rationals. Maps with linear pieces are certified
//! on the extreme rays of each piece; other maps are sampled and a passing
//! verdict is flagged as such.

use serde::Serialize;

use super::{ConeMap, ConicRegion};
use crate::error::{Error, Result};
use crate::linalg::{self, add, is_zero_vec, sub};
use crate::sampling::{first_failure, sample_rng, ConeSampler};
use crate::scalar::{Rational, Scalar};
use crate::verdict::{Hypothesis, HypothesisVerdict, OrderGrade, PositivityGrade, Witness};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub grade: PositivityGrade,
    /// True when the grade is proved on all of the cone, false when it only
    /// held on the samples.
    pub certified: bool,
    /// A point refuting the next stronger grade.
    #[serde(serialize_with = "ser_opt_vec")]
    pub witness: Option<Vec<Rational>>,
    pub samples: usize,
}

fn ser_opt_vec<Ser: serde::Serializer>(v: &Option<Vec<Rational>>, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
    use serde::Serialize;
    v.as_ref()
        .map(|x| x.iter().map(crate::scalar::format_rational).collect::<Vec<_>>())
        .serialize(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuperadditiveScope {
    OnCone,
    OnSpace,
}

type Piece = (Vec<Vec<Rational>>, ConicRegion<Rational>);

/// Pieces intersected with the cone, as inequality rows, with their matrices.
fn cone_pieces(t: &ConeMap<Rational>) -> Option<Vec<Piece>> {
    let pieces = t.linear_pieces().ok()?;
    Some(
        pieces
            .into_iter()
            .map(|p| {
                let mut rows = t.cone().facet_normals().to_vec();
                rows.extend(p.closure_rows());
                (rows, p)
            })
            .collect(),
    )
}

/// Grade of a single image `y = T(x)`, `x` nonzero in the cone.
fn image_grade(t: &ConeMap<Rational>, y: &[Rational]) -> PositivityGrade {
    let k = t.cone();
    if !k.contains_scaled(y, 0.0) {
        PositivityGrade::NotPositive
    } else if is_zero_vec(y) {
        PositivityGrade::Positive
    } else if k.is_solid() && k.interior_unchecked(y, 0.0) {
        PositivityGrade::StronglyPositive
    } else {
        PositivityGrade::StrictlyPositive
    }
}

/// Classifies `T` as not positive / positive / strictly / strongly positive.
///
/// Maps with linear pieces are certified: each piece is linear on a pointed
/// polyhedral cone, so membership of the images of its extreme rays decides
/// positivity and strong positivity, and strict positivity reduces to the
/// kernel of each piece meeting the piece only at 0.
pub fn classify_positivity<S: Scalar>(map: &ConeMap<S>, budget: usize, seed: u64) -> Result<PositivityReport> {
    let t = map.to_exact();
    let n = t.dim();
    if let Some(pieces) = cone_pieces(&t) {
        let mut grade = PositivityGrade::StronglyPositive;
        let mut witness = None;
        let mut lower = |g: PositivityGrade, x: Vec<Rational>, grade: &mut PositivityGrade| {
            if g < *grade {
                *grade = g;
                witness = Some(x);
            }
        };
        for (rows, p) in &pieces {
            for g in linalg::extreme_rays(rows, n) {
                let y = p.matrix.mul_vec(&g);
                let gi = image_grade(&t, &y);
                lower(gi, g, &mut grade);
            }
        }
        if grade >= PositivityGrade::StrictlyPositive {
            // nonzero kernel directions inside a piece
            for (rows, p) in &pieces {
                let basis = linalg::nullspace(&p.matrix.to_rows(), n);
                if basis.is_empty() {
                    continue;
                }
                if let Some(x) = rays_in_subspace(rows, &basis, n).into_iter().next() {
                    lower(PositivityGrade::Positive, x, &mut grade);
                }
            }
        }
        return Ok(PositivityReport { grade, certified: true, witness, samples: 0 });
    }

    let sampler = ConeSampler::new(t.cone());
    let rays = t.region_rays();
    let total = rays.len() + budget;
    let point = |i: usize| -> Vec<Rational> {
        if i < rays.len() {
            rays[i].clone()
        } else {
            sampler.cone_point(&mut sample_rng(seed, i as u64))
        }
    };
    let mut grade = PositivityGrade::StronglyPositive;
    let mut witness = None;
    for level in [PositivityGrade::NotPositive, PositivityGrade::Positive, PositivityGrade::StrictlyPositive] {
        let found = first_failure(total, |i| {
            let x = point(i);
            let y = t.apply(&x).ok()?;
            (image_grade(&t, &y) == level).then_some(x)
        });
        if let Some((_, x)) = found {
            grade = level;
            witness = Some(x);
            break;
        }
    }
    Ok(PositivityReport { grade, certified: false, witness, samples: total })
}

/// Extreme rays of `{x in span(basis) : rows * x >= 0}`, in ambient coordinates.
pub(crate) fn rays_in_subspace<S: Scalar>(rows: &[Vec<S>], basis: &[Vec<S>], n: usize) -> Vec<Vec<S>> {
    let d = basis.len();
    let reduced: Vec<Vec<S>> = rows
        .iter()
        .map(|a| basis.iter().map(|b| linalg::dot(a, b)).collect())
        .collect();
    linalg::extreme_rays(&reduced, d)
        .into_iter()
        .map(|c| {
            let mut x = vec![S::zero(); n];
            for (ci, b) in c.iter().zip(basis) {
                x = add(&x, &linalg::scale(ci, b));
            }
            linalg::canonical_ray(&x)
        })
        .collect()
}

fn order_holds(t: &ConeMap<Rational>, delta: &[Rational], mode: OrderGrade) -> bool {
    let k = t.cone();
    match mode {
        OrderGrade::Weak => k.contains_scaled(delta, 0.0),
        OrderGrade::Strict => k.contains_scaled(delta, 0.0) && !is_zero_vec(delta),
        OrderGrade::Strong => k.is_solid() && k.interior_unchecked(delta, 0.0),
    }
}

/// Checks `x ≺ y ⇒ T(x) ⪯ / ≺ / ≺≺ T(y)`.
///
/// Linear maps are certified through the matching positivity grade, since
/// `T(y) - T(x) = T(y - x)`. Other maps are sampled on pairs `y = x + d` with
/// `d` a nonzero cone vector, half of them on the boundary, plus every pair
/// built from a region ray and a cone generator.
pub fn check_order_preserving<S: Scalar>(
    map: &ConeMap<S>,
    mode: OrderGrade,
    budget: usize,
    seed: u64,
) -> Result<HypothesisVerdict> {
    let t = map.to_exact();
    let hyp = Hypothesis::OrderPreserving(mode);
    if let super::MapKind::Linear(_) = t.kind() {
        let report = classify_positivity(&t, 0, seed)?;
        let needed = match mode {
            OrderGrade::Weak => PositivityGrade::Positive,
            OrderGrade::Strict => PositivityGrade::StrictlyPositive,
            OrderGrade::Strong => PositivityGrade::StronglyPositive,
        };
        if report.grade >= needed {
            return Ok(HypothesisVerdict::certified(hyp, format!("linear map is {}", report.grade.name())));
        }
        let d = report.witness.expect("a lower grade carries a witness");
        let x = vec![Rational::from_i64(0); t.dim()];
        return Ok(HypothesisVerdict::fail(hyp, Witness::pair(&x, &d), "T(y) - T(x) = T(y - x) violates the grade"));
    }

    let sampler = ConeSampler::new(t.cone());
    let rays = t.region_rays();
    let gens = sampler.generators().to_vec();
    let fixed: Vec<(Vec<Rational>, Vec<Rational>)> = rays
        .iter()
        .flat_map(|r| gens.iter().map(move |g| (r.clone(), add(r, g))))
        .collect();
    let total = fixed.len() + budget;
    let pair = |i: usize| -> (Vec<Rational>, Vec<Rational>) {
        if i < fixed.len() {
            return fixed[i].clone();
        }
        let mut rng = sample_rng(seed, i as u64);
        let x = sampler.cone_point(&mut rng);
        let d = if i.is_multiple_of(2) {
            sampler.boundary_point(i / 2, &mut rng)
        } else {
            sampler.cone_point(&mut rng)
        };
        let y = add(&x, &d);
        (x, y)
    };
    let found = first_failure(total, |i| {
        let (x, y) = pair(i);
        let tx = t.apply(&x).ok()?;
        let ty = t.apply(&y).ok()?;
        (!order_holds(&t, &sub(&ty, &tx), mode)).then_some((x, y))
    });
    Ok(match found {
        Some((_, (x, y))) => HypothesisVerdict::fail(hyp, Witness::pair(&x, &y), "x ≺ y but the images violate the grade"),
        None => HypothesisVerdict::sampled(hyp, total, "no violation on sampled comparable pairs"),
    })
}

/// Checks `T(x + y) ⪰ T(x) + T(y)`.
pub fn check_superadditive<S: Scalar>(
    map: &ConeMap<S>,
    scope: SuperadditiveScope,
    budget: usize,
    seed: u64,
) -> Result<HypothesisVerdict> {
    if scope == SuperadditiveScope::OnSpace && !map.defined_on_space() {
        return Err(Error::ConeOnlyMap("superadditivity on R^n needs a map defined on R^n"));
    }
    let hyp = Hypothesis::Superadditive;
    if map.is_structurally_superadditive() {
        return Ok(HypothesisVerdict::certified(hyp, "linear or componentwise minimum of linear maps"));
    }
    let t = map.to_exact();
    let sampler = ConeSampler::new(t.cone());
    let rays = t.region_rays();
    let fixed: Vec<(Vec<Rational>, Vec<Rational>)> = rays
        .iter()
        .enumerate()
        .flat_map(|(i, a)| rays[i + 1..].iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let total = fixed.len() + budget;
    let pair = |i: usize| {
        if i < fixed.len() {
            return fixed[i].clone();
        }
        let mut rng = sample_rng(seed, i as u64);
        match scope {
            SuperadditiveScope::OnCone => (sampler.cone_point(&mut rng), sampler.cone_point(&mut rng)),
            SuperadditiveScope::OnSpace => (sampler.space_point(&mut rng), sampler.space_point(&mut rng)),
        }
    };
    let found = first_failure(total, |i| {
        let (x, y) = pair(i);
        let lhs = t.apply(&add(&x, &y)).ok()?;
        let rhs = add(&t.apply(&x).ok()?, &t.apply(&y).ok()?);
        (!t.cone().contains_scaled(&sub(&lhs, &rhs), 0.0)).then_some((x, y))
    });
    Ok(match found {
        Some((_, (x, y))) => HypothesisVerdict::fail(hyp, Witness::pair(&x, &y), "T(x + y) - T(x) - T(y) is not in the cone"),
        None => HypothesisVerdict::sampled(hyp, total, "no violation on sampled pairs"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::PolyhedralCone;
    use crate::linalg::Matrix;
    use crate::verdict::Verdict;

    fn lin(rows: &[&[f64]]) -> ConeMap<f64> {
        let m = Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap();
        ConeMap::linear(PolyhedralCone::orthant(rows.len()), m).unwrap()
    }

    #[test]
    fn positivity_grades_of_linear_maps() {
        let r = classify_positivity(&lin(&[&[2.0, 2.0], &[1.0, 1.0]]), 0, 1).unwrap();
        assert_eq!(r.grade, PositivityGrade::StronglyPositive);
        assert!(r.certified);
        let r = classify_positivity(&lin(&[&[1.0, 0.0], &[0.0, 1.0]]), 0, 1).unwrap();
        assert_eq!(r.grade, PositivityGrade::StrictlyPositive);
        let r = classify_positivity(&lin(&[&[1.0, 0.0], &[1.0, 0.0]]), 0, 1).unwrap();
        assert_eq!(r.grade, PositivityGrade::Positive);
        assert_eq!(r.witness.unwrap(), vec![Rational::from_i64(0), Rational::from_i64(1)]);
        let r = classify_positivity(&lin(&[&[1.0, -1.0], &[0.0, 1.0]]), 0, 1).unwrap();
        assert_eq!(r.grade, PositivityGrade::NotPositive);
    }

    #[test]
    fn weak_order_certificate_for_nonnegative_matrix() {
        let v = check_order_preserving(&lin(&[&[1.0, 1.0], &[0.0, 1.0]]), OrderGrade::Weak, 10, 1).unwrap();
        assert_eq!(v.verdict, Verdict::PassCertified);
        let v = check_order_preserving(&lin(&[&[1.0, 1.0], &[0.0, 1.0]]), OrderGrade::Strong, 10, 1).unwrap();
        assert_eq!(v.verdict, Verdict::Fail);
    }

    #[test]
    fn max_of_distinct_linear_maps_is_not_superadditive() {
        let a = Matrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let b = Matrix::from_rows(vec![vec![1.0, 2.0], vec![1.0, 1.0]]).unwrap();
        let k = PolyhedralCone::orthant(2);
        let min = ConeMap::min_of_linear(k.clone(), vec![a.clone(), b.clone()]).unwrap();
        let v = check_superadditive(&min, SuperadditiveScope::OnSpace, 10, 1).unwrap();
        assert_eq!(v.verdict, Verdict::PassCertified);
        let max = ConeMap::max_of_linear(k, vec![a, b]).unwrap();
        let v = check_superadditive(&max, SuperadditiveScope::OnCone, 100, 1).unwrap();
        assert_eq!(v.verdict, Verdict::Fail);
        // direct re-evaluation of the witness
        let w = v.witness.unwrap();
        let t = max.to_exact();
        let (x, y) = (&w.points[0], &w.points[1]);
        let lhs = t.apply(&add(x, y)).unwrap();
        let rhs = add(&t.apply(x).unwrap(), &t.apply(y).unwrap());
        assert!(!t.cone().contains_scaled(&sub(&lhs, &rhs), 0.0));
    }

    #[test]
    fn superadditivity_on_space_rejects_cone_only_maps() {
        use crate::scalar::rat;
        let k = PolyhedralCone::<Rational>::orthant(2);
        let r = ConicRegion::new(vec![], vec![], Matrix::identity(2));
        let t = ConeMap::piecewise(k, vec![r]).unwrap();
        assert!(matches!(
            check_superadditive(&t, SuperadditiveScope::OnSpace, 10, 1),
            Err(Error::ConeOnlyMap(_))
        ));
        let v = check_superadditive(&t, SuperadditiveScope::OnCone, 10, 1).unwrap();
        assert_eq!(v.verdict, Verdict::PassSampled);
        let _ = rat(1, 1);
    }
}

#![allow(dead_code)]

use homcone::cone::PolyhedralCone;
use homcone::counterexample::build_counterexample;
use homcone::linalg::Matrix;
use homcone::maps::{ConeMap, ConicRegion};
use homcone::scalar::{rat, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Linear,
    Min,
    Counterexample,
    Other,
}

pub struct Case {
    pub name: String,
    pub family: Family,
    pub map: ConeMap<Rational>,
}

pub fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect()).unwrap()
}

/// Entries `k / 4` with `k` in `1..=16`.
pub fn random_positive(n: usize, rng: &mut ChaCha8Rng) -> Matrix<Rational> {
    Matrix::from_rows((0..n).map(|_| (0..n).map(|_| rat(rng.random_range(1..=16), 4)).collect()).collect()).unwrap()
}

pub fn wedge() -> PolyhedralCone<Rational> {
    PolyhedralCone::new(2, vec![vec![rat(2, 1), rat(-1, 1)], vec![rat(-1, 1), rat(2, 1)]]).unwrap()
}

/// Square-based pyramid around `(0, 0, 1)`: four facets, four extreme rays.
pub fn pyramid() -> PolyhedralCone<Rational> {
    let f = |a: i64, b: i64| vec![rat(a, 1), rat(b, 1), rat(1, 1)];
    PolyhedralCone::new(3, vec![f(1, 0), f(-1, 0), f(0, 1), f(0, -1)]).unwrap()
}

/// Continuous two-piece map on the wedge `x2 <= 2 x1, x1 <= 2 x2`.
pub fn wedge_pwl() -> ConeMap<Rational> {
    ConeMap::piecewise(
        wedge(),
        vec![
            ConicRegion::new(vec![], vec![vec![rat(1, 1), rat(-1, 1)]], mat(&[&[1, 1], &[0, 2]])),
            ConicRegion::new(vec![vec![rat(-1, 1), rat(1, 1)]], vec![], mat(&[&[2, 0], &[1, 1]])),
        ],
    )
    .unwrap()
}

pub fn min_instances() -> Vec<ConeMap<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out = vec![ConeMap::min_of_linear(
        PolyhedralCone::orthant(2),
        vec![mat(&[&[3, 1], &[1, 3]]), mat(&[&[2, 2], &[2, 2]])],
    )
    .unwrap()];
    for (n, k) in [(2, 2), (2, 3), (2, 3), (3, 2), (3, 2)] {
        let ms = (0..k).map(|_| random_positive(n, &mut rng)).collect();
        out.push(ConeMap::min_of_linear(PolyhedralCone::orthant(n), ms).unwrap());
    }
    out
}

/// Random positive linear maps, the counterexample, min-of-linear maps and
/// two other piecewise maps.
pub fn spectral_suite() -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cases = Vec::new();
    for i in 0..12 {
        let n = if i < 6 { 2 } else { 3 };
        cases.push(Case {
            name: format!("linear{n}d_{i}"),
            family: Family::Linear,
            map: ConeMap::linear(PolyhedralCone::orthant(n), random_positive(n, &mut rng)).unwrap(),
        });
    }
    cases.push(Case { name: "counterexample".into(), family: Family::Counterexample, map: build_counterexample() });
    for (i, m) in min_instances().into_iter().enumerate() {
        cases.push(Case { name: format!("min_{i}"), family: Family::Min, map: m });
    }
    cases.push(Case { name: "wedge_pwl".into(), family: Family::Other, map: wedge_pwl() });
    cases.push(Case {
        name: "max_2d".into(),
        family: Family::Other,
        map: ConeMap::max_of_linear(PolyhedralCone::orthant(2), vec![mat(&[&[2, 1], &[1, 1]]), mat(&[&[1, 1], &[1, 2]])])
            .unwrap(),
    });
    cases
}

/// Maps with boundary behaviour of every kind, including ones that keep
/// faces invariant.
pub fn boundary_suite() -> Vec<Case> {
    let o2 = PolyhedralCone::orthant(2);
    let o3 = PolyhedralCone::orthant(3);
    let lin = |k: &PolyhedralCone<Rational>, rows: &[&[i64]]| ConeMap::linear(k.clone(), mat(rows)).unwrap();
    let other = |name: &str, map| Case { name: name.into(), family: Family::Other, map };
    vec![
        other("diag", lin(&o2, &[&[2, 0], &[0, 1]])),
        other("identity", lin(&o2, &[&[1, 0], &[0, 1]])),
        other("swap", lin(&o2, &[&[0, 1], &[1, 0]])),
        other("triangular", lin(&o2, &[&[1, 1], &[0, 1]])),
        other("positive2", lin(&o2, &[&[2, 1], &[1, 2]])),
        other("cycle3", lin(&o3, &[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]])),
        other("block3", lin(&o3, &[&[1, 1, 0], &[1, 1, 0], &[0, 0, 2]])),
        other("positive3", lin(&o3, &[&[1, 1, 1], &[1, 2, 1], &[1, 1, 3]])),
        other("counterexample", build_counterexample()),
        other("wedge_pwl", wedge_pwl()),
        other("wedge_identity", lin(&wedge(), &[&[1, 0], &[0, 1]])),
        other("pyramid_identity", lin(&pyramid(), &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])),
        other("pyramid_contract", lin(&pyramid(), &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]])),
        other(
            "min_2d",
            ConeMap::min_of_linear(o2.clone(), vec![mat(&[&[1, 0], &[1, 1]]), mat(&[&[2, 0], &[1, 2]])]).unwrap(),
        ),
    ]
}

/// Exact `<a, x> >= 0` for every facet, computed without the library's
/// membership test.
pub fn in_cone(k: &PolyhedralCone<Rational>, x: &[Rational]) -> bool {
    k.facet_normals()
        .iter()
        .all(|a| a.iter().zip(x).fold(rat(0, 1), |s, (p, q)| s + p * q) >= rat(0, 1))
}

pub fn in_interior_f64(k: &PolyhedralCone<Rational>, x: &[f64], tol: f64) -> bool {
    let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    k.facet_normals().iter().all(|a| {
        let d: f64 = a.iter().zip(x).map(|(p, q)| homcone::scalar::Scalar::to_f64(p) * q).sum();
        d > tol * nx
    })
}

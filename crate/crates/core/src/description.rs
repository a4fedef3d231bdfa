//! JSON map descriptions.
//!
//! ```json
//! {
//!   "type": "min_linear",
//!   "cone": {"orthant": 2},
//!   "matrices": [[[3, 1], [1, 3]], [["2", "2"], ["2", "2"]]],
//!   "a1": {"v": [1, 1], "w": [0, 0], "m": 1, "p": 1, "eps": "1/2"},
//!   "expected_failures": ["B2"]
//! }
//! ```
//!
//! Map types: `linear` (`matrix`), `min_linear` / `max_linear` (`matrices`),
//! `pwl` (`regions`: `{strict, weak, matrix}`), `compose` (`maps`, applied
//! last to first), `scaled` (`factor`, `map`) and `builtin` (`name`).
//! Entries are numbers or `"p/q"` strings and are kept as exact rationals.
//! Every error carries the JSON pointer of the offending value.

use std::path::Path;

use serde_json::Value;

use crate::cone::PolyhedralCone;
use crate::counterexample::build_counterexample;
use crate::error::{Error, Result};
use crate::hypotheses::A1Data;
use crate::linalg::Matrix;
use crate::maps::{ConeMap, ConicRegion};
use crate::scalar::{parse_rational, Rational, Scalar};

pub const BUILTINS: &[&str] = &["piecewise_counterexample"];

/// Older spellings accepted for builtin names.
const ALIASES: &[(&str, &str)] = &[("mahadevan_counterexample", "piecewise_counterexample")];

fn canonical(name: &str) -> &str {
    ALIASES.iter().find(|(alias, _)| *alias == name).map_or(name, |(_, n)| n)
}

/// (A1) data plus the growth margin used by the orbit check.
#[derive(Debug, Clone, PartialEq)]
pub struct A1Spec {
    pub data: A1Data,
    pub eps: Rational,
}

#[derive(Debug, Clone)]
pub struct Description {
    pub map: ConeMap<Rational>,
    pub a1: Option<A1Spec>,
    pub expected_failures: Vec<String>,
}

pub fn builtin(name: &str) -> Result<ConeMap<Rational>> {
    match canonical(name) {
        "piecewise_counterexample" => Ok(build_counterexample()),
        _ => Err(Error::Schema {
            pointer: "/name".into(),
            message: format!("unknown builtin {name:?} (known: {})", BUILTINS.join(", ")),
        }),
    }
}

/// Failures expected for a builtin when none are listed.
pub fn builtin_expected_failures(name: &str) -> Vec<String> {
    match canonical(name) {
        "piecewise_counterexample" => vec!["B2".into(), "SSI".into()],
        _ => Vec::new(),
    }
}

pub fn load(path: &Path) -> Result<Description> {
    let text = std::fs::read_to_string(path)?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<Description> {
    let v: Value = serde_json::from_str(text)?;
    parse_value(&v)
}

pub fn parse_value(v: &Value) -> Result<Description> {
    let map = parse_map(v, "")?;
    let a1 = match v.get("a1") {
        Some(a) => Some(parse_a1(a, "/a1", map.dim())?),
        None => None,
    };
    let mut expected_failures = match v.get("expected_failures") {
        Some(e) => array(e, "/expected_failures")?
            .iter()
            .enumerate()
            .map(|(i, s)| string(s, &format!("/expected_failures/{i}")).map(str::to_owned))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    if v.get("expected_failures").is_none() && v.get("type").and_then(Value::as_str) == Some("builtin") {
        if let Some(name) = v.get("name").and_then(Value::as_str) {
            expected_failures = builtin_expected_failures(name);
        }
    }
    Ok(Description { map, a1, expected_failures })
}

fn schema(pointer: &str, message: impl Into<String>) -> Error {
    Error::Schema { pointer: if pointer.is_empty() { "/".into() } else { pointer.into() }, message: message.into() }
}

fn at<'a>(v: &'a Value, key: &str, ptr: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| schema(ptr, format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(ptr, "expected an array"))
}

fn string<'a>(v: &'a Value, ptr: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(ptr, "expected a string"))
}

fn count(v: &Value, ptr: &str) -> Result<usize> {
    v.as_u64()
        .filter(|&n| n >= 1)
        .map(|n| n as usize)
        .ok_or_else(|| schema(ptr, "expected a positive integer"))
}

fn rational(v: &Value, ptr: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| schema(ptr, e.to_string())),
        Value::Number(n) => match parse_rational(&n.to_string()) {
            Ok(r) => Ok(r),
            Err(_) => n
                .as_f64()
                .filter(|f| f.is_finite())
                .map(Rational::from_f64)
                .ok_or_else(|| schema(ptr, "not a finite number")),
        },
        _ => Err(schema(ptr, "expected a number or a \"p/q\" string")),
    }
}

fn vector(v: &Value, ptr: &str, len: Option<usize>) -> Result<Vec<Rational>> {
    let items = array(v, ptr)?;
    if let Some(n) = len {
        if items.len() != n {
            return Err(schema(ptr, format!("expected {n} entries, found {}", items.len())));
        }
    }
    items.iter().enumerate().map(|(i, x)| rational(x, &format!("{ptr}/{i}"))).collect()
}

fn vectors(v: &Value, ptr: &str, len: usize) -> Result<Vec<Vec<Rational>>> {
    array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, r)| vector(r, &format!("{ptr}/{i}"), Some(len)))
        .collect()
}

fn matrix(v: &Value, ptr: &str, n: usize) -> Result<Matrix<Rational>> {
    let rows = array(v, ptr)?;
    if rows.len() != n {
        return Err(schema(ptr, format!("expected {n} rows, found {}", rows.len())));
    }
    let rows = vectors(v, ptr, n)?;
    Matrix::from_rows(rows).map_err(|e| schema(ptr, e.to_string()))
}

fn parse_cone(v: &Value, ptr: &str) -> Result<PolyhedralCone<Rational>> {
    if let Some(n) = v.get("orthant") {
        return Ok(PolyhedralCone::orthant(count(n, &format!("{ptr}/orthant"))?));
    }
    let n = count(at(v, "dim", ptr)?, &format!("{ptr}/dim"))?;
    let facets = vectors(at(v, "facets", ptr)?, &format!("{ptr}/facets"), n)?;
    PolyhedralCone::new(n, facets).map_err(|e| schema(ptr, e.to_string()))
}

fn parse_map(v: &Value, ptr: &str) -> Result<ConeMap<Rational>> {
    if !v.is_object() {
        return Err(schema(ptr, "expected an object"));
    }
    let ty = string(at(v, "type", ptr)?, &format!("{ptr}/type"))?;
    let cone = || parse_cone(at(v, "cone", ptr)?, &format!("{ptr}/cone"));
    let built = match ty {
        "linear" => {
            let k = cone()?;
            let m = matrix(at(v, "matrix", ptr)?, &format!("{ptr}/matrix"), k.dim())?;
            ConeMap::linear(k, m)
        }
        "min_linear" | "max_linear" => {
            let k = cone()?;
            let p = format!("{ptr}/matrices");
            let ms = array(at(v, "matrices", ptr)?, &p)?
                .iter()
                .enumerate()
                .map(|(i, m)| matrix(m, &format!("{p}/{i}"), k.dim()))
                .collect::<Result<Vec<_>>>()?;
            if ty == "min_linear" {
                ConeMap::min_of_linear(k, ms)
            } else {
                ConeMap::max_of_linear(k, ms)
            }
        }
        "pwl" => {
            let k = cone()?;
            let n = k.dim();
            let p = format!("{ptr}/regions");
            let regions = array(at(v, "regions", ptr)?, &p)?
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let rp = format!("{p}/{i}");
                    let rows = |key: &str| match r.get(key) {
                        Some(x) => vectors(x, &format!("{rp}/{key}"), n),
                        None => Ok(Vec::new()),
                    };
                    let m = matrix(at(r, "matrix", &rp)?, &format!("{rp}/matrix"), n)?;
                    Ok(ConicRegion::new(rows("strict")?, rows("weak")?, m))
                })
                .collect::<Result<Vec<_>>>()?;
            ConeMap::piecewise(k, regions)
        }
        "compose" => {
            let p = format!("{ptr}/maps");
            let maps = array(at(v, "maps", ptr)?, &p)?
                .iter()
                .enumerate()
                .map(|(i, m)| parse_map(m, &format!("{p}/{i}")))
                .collect::<Result<Vec<_>>>()?;
            ConeMap::compose(maps)
        }
        "scaled" => {
            let c = rational(at(v, "factor", ptr)?, &format!("{ptr}/factor"))?;
            let inner = parse_map(at(v, "map", ptr)?, &format!("{ptr}/map"))?;
            ConeMap::scaled(c, inner)
        }
        "builtin" => {
            let name = string(at(v, "name", ptr)?, &format!("{ptr}/name"))?;
            return builtin(name).map_err(|e| match e {
                Error::Schema { message, .. } => schema(&format!("{ptr}/name"), message),
                other => other,
            });
        }
        other => return Err(schema(&format!("{ptr}/type"), format!("unknown map type {other:?}"))),
    };
    built.map_err(|e| schema(ptr, e.to_string()))
}

fn parse_a1(v: &Value, ptr: &str, n: usize) -> Result<A1Spec> {
    let vec_at = |key: &str| vector(at(v, key, ptr)?, &format!("{ptr}/{key}"), Some(n));
    let vv = vec_at("v")?;
    let w = vec_at("w")?;
    let m = rational(at(v, "m", ptr)?, &format!("{ptr}/m"))?;
    let p = count(at(v, "p", ptr)?, &format!("{ptr}/p"))?;
    let eps = match v.get("eps") {
        Some(e) => rational(e, &format!("{ptr}/eps"))?,
        None => Rational::from_ratio(1, 2),
    };
    let data = if v.get("u").is_some() {
        A1Data::new(vec_at("u")?, vv, w, m, p)
    } else {
        A1Data::from_vw(vv, w, m, p)
    };
    Ok(A1Spec { data, eps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::MapKind;
    use crate::scalar::rat;

    fn pointer(r: Result<Description>) -> String {
        match r {
            Err(Error::Schema { pointer, .. }) => pointer,
            other => panic!("expected a schema error, got {other:?}"),
        }
    }

    #[test]
    fn parses_linear_with_mixed_entries() {
        let d = parse_str(r#"{"type":"linear","cone":{"orthant":2},"matrix":[[2,"1/2"],[0.25,1]]}"#).unwrap();
        let x = d.map.apply(&[rat(1, 1), rat(1, 1)]).unwrap();
        assert_eq!(x, vec![rat(5, 2), rat(5, 4)]);
    }

    #[test]
    fn parses_min_linear_and_a1() {
        let d = parse_str(
            r#"{"type":"min_linear","cone":{"orthant":2},
                "matrices":[[[3,1],[1,3]],[[2,2],[2,2]]],
                "a1":{"v":[1,1],"w":[0,0],"m":1,"p":1},
                "expected_failures":["B2"]}"#,
        )
        .unwrap();
        assert!(d.map.is_structurally_superadditive());
        let a1 = d.a1.unwrap();
        assert_eq!(a1.eps, rat(1, 2));
        assert_eq!(d.expected_failures, vec!["B2".to_string()]);
    }

    #[test]
    fn parses_pwl_compose_and_scaled() {
        let d = parse_str(
            r#"{"type":"scaled","factor":"1/3","map":{"type":"compose","maps":[
                {"type":"pwl","cone":{"orthant":2},"regions":[{"weak":[],"matrix":[[1,0],[0,1]]}]},
                {"type":"builtin","name":"piecewise_counterexample"}]}}"#,
        )
        .unwrap();
        assert!(matches!(d.map.kind(), MapKind::Scaled(..)));
        let y = d.map.apply(&[rat(1, 1), rat(1, 1)]).unwrap();
        assert_eq!(y, vec![rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn parses_explicit_cone() {
        let d = parse_str(r#"{"type":"linear","cone":{"dim":2,"facets":[[1,0],[-1,2]]},"matrix":[[1,0],[0,1]]}"#).unwrap();
        assert_eq!(d.map.cone().facet_normals().len(), 2);
    }

    #[test]
    fn alias_names_the_same_builtin() {
        let a = builtin("mahadevan_counterexample").unwrap();
        let b = builtin("piecewise_counterexample").unwrap();
        assert_eq!(a.apply(&[rat(1, 1), rat(3, 1)]).unwrap(), b.apply(&[rat(1, 1), rat(3, 1)]).unwrap());
        assert_eq!(builtin_expected_failures("mahadevan_counterexample"), builtin_expected_failures("piecewise_counterexample"));
    }

    #[test]
    fn builtin_gets_default_expected_failures() {
        let d = parse_str(r#"{"type":"builtin","name":"piecewise_counterexample"}"#).unwrap();
        assert!(d.expected_failures.contains(&"B2".to_string()));
    }

    #[test]
    fn errors_carry_pointers() {
        assert_eq!(
            pointer(parse_str(r#"{"type":"linear","cone":{"orthant":2},"matrix":[[1,2],[3]]}"#)),
            "/matrix/1"
        );
        assert_eq!(
            pointer(parse_str(r#"{"type":"min_linear","cone":{"orthant":2},"matrices":[[[1,0],[0,1]],[[1,"x"],[0,1]]]}"#)),
            "/matrices/1/0/1"
        );
        assert_eq!(pointer(parse_str(r#"{"type":"builtin","name":"nope"}"#)), "/name");
        assert_eq!(pointer(parse_str(r#"{"type":"cubic"}"#)), "/type");
        assert_eq!(pointer(parse_str(r#"{"cone":{"orthant":2}}"#)), "/");
        assert_eq!(
            pointer(parse_str(r#"{"type":"scaled","factor":1,"map":{"type":"linear","cone":{"orthant":0},"matrix":[]}}"#)),
            "/map/cone/orthant"
        );
    }
}

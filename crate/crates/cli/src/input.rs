//! Reading vectors, tensors, coefficient files and generator files.

use std::path::Path;

use cg_rotor_core::invariants::{MaterialCoefficients, WeightedVector};
use cg_rotor_core::irreps::{axis_rotation, dim};
use cg_rotor_core::{Axis, Matrix, Weight};
use serde_json::Value;

use crate::angle::Angle;
use crate::error::{CliError, CliResult};
use crate::latex;
use crate::scalar::{from_json, Backend};

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Domain(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Domain(format!("{} is not valid JSON: {e}", path.display())))
}

/// Comma-separated numbers, e.g. `1,0,-2`.
pub fn parse_list<B: Backend>(s: &str, len: usize, what: &str) -> CliResult<Vec<B>> {
    let items: Vec<B> = s.split(',').map(|t| B::parse_str(t).map_err(CliError::Usage)).collect::<Result<_, _>>()?;
    if items.len() != len {
        return Err(CliError::Usage(format!("{what} needs {len} comma-separated values, got {}", items.len())));
    }
    Ok(items)
}

/// Rows separated by `;`, entries by `,`.
pub fn parse_tensor<B: Backend>(s: &str) -> CliResult<Matrix<B>> {
    let rows: Vec<Vec<B>> = s.split(';').map(|r| parse_list(r, 3, "each tensor row")).collect::<Result<_, _>>()?;
    if rows.len() != 3 {
        return Err(CliError::Usage(format!("a tensor needs 3 rows separated by ';', got {}", rows.len())));
    }
    Ok(Matrix::from_rows(rows))
}

fn domain(e: String) -> CliError {
    CliError::Domain(e)
}

/// A weighted vector given as a full array or as a sparse object keyed by
/// component index (`{"-1": 2, "0": "sqrt(3)"}`).
pub fn weighted_from_json<B: Backend>(v: &Value, weight: Weight, what: &str) -> CliResult<WeightedVector<B>> {
    let w = weight as i64;
    let comps = match v {
        Value::Array(items) => {
            if items.len() != dim(weight) {
                return Err(domain(format!("{what} needs {} components, got {}", dim(weight), items.len())));
            }
            items.iter().map(from_json).collect::<Result<Vec<B>, _>>().map_err(domain)?
        }
        Value::Object(map) => {
            let mut comps = vec![B::zero(); dim(weight)];
            for (k, x) in map {
                let n: i64 = k.trim_start_matches('+').parse().map_err(|_| domain(format!("{what}: bad index {k:?}")))?;
                if n.abs() > w {
                    return Err(domain(format!("{what}: index {n} is outside -{w}..{w}")));
                }
                comps[(n + w) as usize] = from_json(x).map_err(domain)?;
            }
            comps
        }
        _ => return Err(domain(format!("{what} must be an array or an object keyed by index"))),
    };
    Ok(WeightedVector::new(weight, comps)?)
}

/// Overlay a coefficient file on `base`: any of `c1`, `c2`, `a`, `b`, `d`.
pub fn coefficients_from_json<B: Backend>(v: &Value, base: MaterialCoefficients<B>) -> CliResult<MaterialCoefficients<B>> {
    let obj = v.as_object().ok_or_else(|| domain("a coefficient file holds a JSON object".into()))?;
    for key in obj.keys() {
        if !["c1", "c2", "a", "b", "d"].contains(&key.as_str()) {
            return Err(domain(format!("unknown coefficient {key:?}; expected c1, c2, a, b or d")));
        }
    }
    let scalar = |k: &str, dflt: B| -> CliResult<B> { obj.get(k).map(|x| from_json(x).map_err(domain)).unwrap_or(Ok(dflt)) };
    let vector = |k: &str, w: Weight, dflt: WeightedVector<B>| -> CliResult<WeightedVector<B>> {
        obj.get(k).map(|x| weighted_from_json(x, w, k)).unwrap_or(Ok(dflt))
    };
    Ok(MaterialCoefficients::new(
        scalar("c1", base.c1)?,
        scalar("c2", base.c2)?,
        vector("a", 2, base.a)?,
        vector("b", 2, base.b)?,
        vector("d", 4, base.d)?,
    )?)
}

fn generator<B: Backend>(v: &Value) -> CliResult<Matrix<B>> {
    match v {
        Value::Array(rows) => {
            let rows: Vec<Vec<B>> = rows
                .iter()
                .map(|r| match r {
                    Value::Array(items) if items.len() == 3 => items.iter().map(from_json).collect::<Result<Vec<B>, _>>().map_err(domain),
                    _ => Err(domain("generator rows hold three entries".into())),
                })
                .collect::<Result<_, _>>()?;
            if rows.len() != 3 {
                return Err(domain("a generator matrix has three rows".into()));
            }
            Ok(Matrix::from_rows(rows))
        }
        Value::String(tex) => Ok(latex::parse_matrix(tex).map_err(|e| domain(e.to_string()))?.map(B::from_radical)),
        Value::Object(map) => {
            let axis = map.get("axis").and_then(Value::as_str).ok_or_else(|| domain("axis generators need \"axis\"".into()))?;
            let axis = Axis::parse(axis).ok_or_else(|| domain(format!("unknown axis {axis:?}; expected m1, 0 or p1")))?;
            let text = map.get("angle").and_then(Value::as_str).ok_or_else(|| domain("axis generators need an \"angle\" string".into()))?;
            let angle = Angle::parse(text).map_err(domain)?;
            let (c, s) = B::cos_sin(&angle, text).map_err(domain)?;
            Ok(axis_rotation(axis, c, s))
        }
        _ => Err(domain("a generator is a 3x3 array, a LaTeX pmatrix or {\"axis\", \"angle\"}".into())),
    }
}

/// `{"name": .., "generators": [..]}` or a bare generator array.
pub fn generators_from_json<B: Backend>(v: &Value) -> CliResult<(String, Vec<Matrix<B>>)> {
    let (name, list) = match v {
        Value::Array(list) => ("custom".to_string(), list),
        Value::Object(map) => {
            let name = map.get("name").and_then(Value::as_str).unwrap_or("custom").to_string();
            let list = map.get("generators").and_then(Value::as_array).ok_or_else(|| domain("missing \"generators\" array".into()))?;
            (name, list)
        }
        _ => return Err(domain("a generator file holds an array or an object".into())),
    };
    Ok((name, list.iter().map(generator).collect::<Result<_, _>>()?))
}

//! JSON schema for arrays, matrices, mixtures, certificates and reports.
//!
//! Every rational travels as a string `"p/q"` or `"p"`; plain JSON integers
//! are accepted on input. Floating-point literals are always rejected.

use serde_json::{json, Map, Value};
use unitcov_core::boundary::{BallClass, KernelResult, PerturbationWitness};
use unitcov_core::facets::{Membership, NotProductReason, ProductForm};
use unitcov_core::rat::{format_rat, parse_rat};
use unitcov_core::realisability::Certificate;
use unitcov_core::screen::{ScreenReport, Verdict};
use unitcov_core::{
    embed, pair_count, phi, FullMatrix, IntVector, Mixture, Rat, SignVector, TriArray,
};

use crate::error::{CliError, Result};

/// What an input file held, before any conversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixInput {
    Tri(TriArray),
    /// Unit-diagonal covariance.
    Full(FullMatrix),
    /// Zero-diagonal covariogram, already mapped through `phi`.
    Covariogram(FullMatrix),
}

impl MatrixInput {
    pub fn into_tri(self) -> Result<TriArray> {
        match self {
            MatrixInput::Tri(t) => Ok(t),
            MatrixInput::Full(m) | MatrixInput::Covariogram(m) => Ok(embed(&m)?),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MatrixInput::Tri(_) => "entries",
            MatrixInput::Full(_) => "matrix",
            MatrixInput::Covariogram(_) => "covariogram",
        }
    }
}

pub fn parse_json(bytes: &[u8]) -> Result<Value> {
    let text = std::str::from_utf8(bytes).map_err(|_| CliError::input("input is not UTF-8"))?;
    serde_json::from_str(text).map_err(|e| CliError::input(format!("invalid JSON: {e}")))
}

/// Reads one of `{"n", "entries"}`, `{"n", "matrix"}` or `{"n", "covariogram"}`.
pub fn parse_matrix(bytes: &[u8]) -> Result<MatrixInput> {
    matrix_from_value(&parse_json(bytes)?)
}

pub fn matrix_from_value(value: &Value) -> Result<MatrixInput> {
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::input("top level must be an object"))?;
    let n = parse_n(obj)?;
    if let Some(entries) = obj.get("entries") {
        return Ok(MatrixInput::Tri(tri_from_entries(n, entries, "entries")?));
    }
    for key in ["matrix", "covariogram"] {
        let Some(rows) = obj.get(key) else { continue };
        let rows = rows
            .as_array()
            .ok_or_else(|| CliError::input(format!("`{key}` must be an array of rows")))?;
        if rows.len() != n {
            return Err(CliError::input(format!(
                "`{key}` has {} rows, expected {n}",
                rows.len()
            )));
        }
        let mut parsed = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| CliError::input(format!("{key}[{i}] is not an array")))?;
            if row.len() != n {
                return Err(CliError::input(format!(
                    "{key}[{i}] has {} entries, expected {n}",
                    row.len()
                )));
            }
            let cells = row
                .iter()
                .enumerate()
                .map(|(j, v)| rat_from_value(v, &format!("{key}[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()?;
            parsed.push(cells);
        }
        let m = FullMatrix::new(parsed)?;
        return if key == "matrix" {
            if !m.is_unit_diagonal() {
                let i = (0..n)
                    .find(|&i| *m.get(i, i) != Rat::from_integer(1.into()))
                    .unwrap_or(0);
                return Err(CliError::input(format!("matrix[{i}][{i}] must be 1")));
            }
            Ok(MatrixInput::Full(m))
        } else {
            if !m.is_zero_diagonal() {
                let i = (0..n)
                    .find(|&i| *m.get(i, i) != Rat::from_integer(0.into()))
                    .unwrap_or(0);
                return Err(CliError::input(format!("covariogram[{i}][{i}] must be 0")));
            }
            Ok(MatrixInput::Covariogram(phi(&m)?))
        };
    }
    Err(CliError::input(
        "expected one of `entries`, `matrix` or `covariogram`",
    ))
}

fn parse_n(obj: &Map<String, Value>) -> Result<usize> {
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| CliError::input("`n` must be a positive integer"))?;
    if n == 0 {
        return Err(CliError::input("`n` must be a positive integer"));
    }
    usize::try_from(n).map_err(|_| CliError::input("`n` is too large"))
}

pub fn tri_from_entries(n: usize, entries: &Value, what: &str) -> Result<TriArray> {
    let list = entries
        .as_array()
        .ok_or_else(|| CliError::input(format!("`{what}` must be an array")))?;
    if list.len() != pair_count(n) {
        return Err(CliError::input(format!(
            "`{what}` has {} values, expected {} for n = {n}",
            list.len(),
            pair_count(n)
        )));
    }
    let values = list
        .iter()
        .enumerate()
        .map(|(k, v)| rat_from_value(v, &format!("{what}[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(TriArray::new(n, values)?)
}

/// A rational from a string or a JSON integer; `place` names the entry in
/// error messages.
pub fn rat_from_value(value: &Value, place: &str) -> Result<Rat> {
    match value {
        Value::String(s) => parse_rat(s).map_err(|_| {
            if s.contains(['.', 'e', 'E']) {
                CliError::input(format!("{place}: \"{s}\" is a floating-point literal"))
            } else {
                CliError::input(format!("{place}: \"{s}\" is not a rational \"p/q\""))
            }
        }),
        Value::Number(num) => {
            if let Some(v) = num.as_i64() {
                Ok(Rat::from_integer(v.into()))
            } else if let Some(v) = num.as_u64() {
                Ok(Rat::from_integer(v.into()))
            } else {
                Err(CliError::input(format!(
                    "{place}: {num} is a floating-point literal; write it as \"p/q\""
                )))
            }
        }
        other => Err(CliError::input(format!(
            "{place}: expected a rational, found {other}"
        ))),
    }
}

pub fn rat_json(v: &Rat) -> Value {
    Value::String(format_rat(v))
}

pub fn tri_json(t: &TriArray) -> Value {
    json!({
        "n": t.n(),
        "entries": t.entries().iter().map(rat_json).collect::<Vec<_>>(),
    })
}

pub fn ints_json(v: &IntVector) -> Value {
    Value::Array(
        v.coords
            .iter()
            .map(|c| Value::String(c.to_string()))
            .collect(),
    )
}

pub fn mixture_json(m: &Mixture) -> Value {
    Value::Array(
        m.atoms()
            .iter()
            .map(|(w, u)| json!({ "weight": rat_json(w), "signs": u.signs() }))
            .collect(),
    )
}

pub fn mixture_from_value(value: &Value) -> Result<Mixture> {
    let atoms = value
        .as_array()
        .ok_or_else(|| CliError::input("mixture must be an array"))?;
    let mut parsed = Vec::with_capacity(atoms.len());
    for (k, atom) in atoms.iter().enumerate() {
        let weight = rat_from_value(
            atom.get("weight").unwrap_or(&Value::Null),
            &format!("mixture[{k}].weight"),
        )?;
        let signs = atom
            .get("signs")
            .and_then(Value::as_array)
            .ok_or_else(|| CliError::input(format!("mixture[{k}].signs must be an array")))?
            .iter()
            .map(|s| s.as_i64().and_then(|s| i8::try_from(s).ok()).unwrap_or(0))
            .collect();
        parsed.push((weight, SignVector::new(signs)?));
    }
    Ok(Mixture::new(parsed)?)
}

pub fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::Realisable(m) => json!({
            "kind": "realisable",
            "mixture": mixture_json(m),
        }),
        Certificate::Separated {
            direction,
            threshold,
        } => json!({
            "kind": "separated",
            "direction": tri_json(direction),
            "threshold": rat_json(threshold),
        }),
    }
}

pub fn certificate_from_value(value: &Value) -> Result<Certificate> {
    match value.get("kind").and_then(Value::as_str) {
        Some("realisable") => Ok(Certificate::Realisable(mixture_from_value(
            value.get("mixture").unwrap_or(&Value::Null),
        )?)),
        Some("separated") => {
            let direction = match matrix_from_value(value.get("direction").unwrap_or(&Value::Null))?
            {
                MatrixInput::Tri(t) => t,
                _ => return Err(CliError::input("direction must be an `entries` array")),
            };
            let threshold =
                rat_from_value(value.get("threshold").unwrap_or(&Value::Null), "threshold")?;
            Ok(Certificate::Separated {
                direction,
                threshold,
            })
        }
        _ => Err(CliError::input(
            "certificate `kind` must be realisable or separated",
        )),
    }
}

pub fn screen_json(r: &ScreenReport) -> Value {
    json!({
        "verdict": match r.verdict {
            Verdict::Pass => "pass",
            Verdict::Violation => "violation",
        },
        "witness": r.witness.as_ref().map(ints_json),
        "value": r.value.as_ref().map(rat_json),
        "bound_used": r.bound_used,
        "examined": r.examined,
    })
}

pub fn product_form_json(p: &ProductForm) -> Value {
    match p {
        ProductForm::Product(v) => json!({
            "product": true,
            "signs": v.signs,
            "squares": v.squares.iter().map(rat_json).collect::<Vec<_>>(),
            "vector": v.as_rationals().map(|r| r.iter().map(rat_json).collect::<Vec<_>>()),
        }),
        ProductForm::NotProduct(reason) => json!({
            "product": false,
            "reason": match reason {
                NotProductReason::ZeroPattern => "zero_pattern",
                NotProductReason::SignInconsistency => "sign_inconsistency",
                NotProductReason::MinorInconsistency => "minor_inconsistency",
            },
        }),
    }
}

pub fn kernel_json(k: &KernelResult) -> Value {
    match k {
        KernelResult::Singular(w) => Value::Array(w.lambda().iter().map(rat_json).collect()),
        KernelResult::NonSingular => Value::Null,
    }
}

pub fn ball_json(b: BallClass) -> Value {
    Value::from(match b {
        BallClass::InInnerBall => "in_inner_ball",
        BallClass::BetweenBalls => "between_balls",
        BallClass::OutsideOuterBall => "outside_outer_ball",
    })
}

pub fn membership_json(m: &Membership) -> Value {
    match m {
        Membership::Inside => json!({ "class": "inside" }),
        Membership::Boundary(tight) => json!({ "class": "boundary", "tight_facets": tight }),
        Membership::Outside(k) => json!({ "class": "outside", "violated_facet": k }),
    }
}

pub fn perturbation_json(p: &PerturbationWitness) -> Value {
    json!({
        "epsilon": rat_json(&p.epsilon),
        "indices": [p.indices.0, p.indices.1],
        "sigma": p.sigma,
        "perturbed": tri_json(&p.perturbed),
        "negativity_value": rat_json(&p.negativity_value),
    })
}

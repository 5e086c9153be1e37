//! JSON program files.
//!
//! ```text
//! {
//!   "semantics": "deterministic" | "nondeterministic" | "probabilistic" | "quantum",
//!   "n": 4, "k": 1,
//!   "order": [1, 2, 3, 4],
//!   "levels": [
//!     { "var": 1, "width_in": 4, "width_out": 4, "t0": ..., "t1": ... },
//!     ...
//!   ],
//!   "initial": 1,
//!   "accept": [2, 4],
//!   "epsilon": "0.5"
//! }
//! ```
//!
//! All variable and node indices are 1-based. Transition encodings:
//!
//! * deterministic: `[to_1, .., to_{width_in}]`
//! * nondeterministic: `[[from, to], ...]`
//! * probabilistic: `width_out` rows of `width_in` decimal strings
//! * quantum: `w` rows of `w` objects `{"re": "..", "im": ".."}`
//!
//! Reals are written as the shortest decimal string that parses back to the
//! same `f64`, so numeric round trips are bit-exact. `epsilon` is present
//! only for probabilistic and quantum programs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::program::{
    ComplexMatrix, Level, Program, RealMatrix, Semantics, Transition, VariableOrder,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Invalid { path: path.into(), message: message.into() }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    semantics: String,
    n: usize,
    k: usize,
    order: Vec<usize>,
    levels: Vec<LevelDoc>,
    initial: usize,
    accept: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon: Option<Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelDoc {
    var: usize,
    width_in: usize,
    width_out: usize,
    t0: Value,
    t1: Value,
}

fn real_str(v: f64) -> String {
    // `Display` for f64 emits the shortest string that round-trips.
    format!("{v}")
}

fn encode_transition(t: &Transition) -> Value {
    match t {
        Transition::Deterministic(map) => json!(map.iter().map(|&to| to + 1).collect::<Vec<_>>()),
        Transition::Nondeterministic(edges) => {
            json!(edges.iter().map(|&(a, b)| [a + 1, b + 1]).collect::<Vec<_>>())
        }
        Transition::Stochastic(m) => Value::Array(
            (0..m.rows())
                .map(|r| Value::Array(m.row(r).iter().map(|&v| json!(real_str(v))).collect()))
                .collect(),
        ),
        Transition::Unitary(m) => Value::Array(
            (0..m.rows())
                .map(|r| {
                    Value::Array(
                        m.row(r)
                            .iter()
                            .map(|c| json!({"re": real_str(c.re), "im": real_str(c.im)}))
                            .collect(),
                    )
                })
                .collect(),
        ),
    }
}

/// Serializes `p` to the JSON file format.
pub fn to_json(p: &Program) -> String {
    let doc = Document {
        semantics: p.semantics.as_str().to_string(),
        n: p.n,
        k: p.k,
        order: p.order.as_slice().iter().map(|&v| v + 1).collect(),
        levels: p
            .levels
            .iter()
            .map(|l| LevelDoc {
                var: l.var + 1,
                width_in: l.width_in,
                width_out: l.width_out,
                t0: encode_transition(&l.t0),
                t1: encode_transition(&l.t1),
            })
            .collect(),
        initial: p.initial + 1,
        accept: p.accept.iter().map(|&a| a + 1).collect(),
        epsilon: p.epsilon.map(|e| json!(real_str(e))),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("document serialization cannot fail");
    s.push('\n');
    s
}

/// Parses a program document. Shapes and index ranges are checked here;
/// semantic invariants (order consistency, unitarity, ...) are left to
/// [`crate::program::validate`].
pub fn from_json(text: &str) -> Result<Program, FormatError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let semantics = Semantics::parse(&doc.semantics).ok_or_else(|| {
        invalid(
            "semantics",
            format!(
                "unknown semantics tag {:?} (expected deterministic, nondeterministic, probabilistic or quantum)",
                doc.semantics
            ),
        )
    })?;

    if doc.order.len() != doc.n {
        return Err(invalid(
            "order",
            format!("has {} entries, expected n = {}", doc.order.len(), doc.n),
        ));
    }
    let perm = doc
        .order
        .iter()
        .enumerate()
        .map(|(i, &v)| index_1based(v, doc.n, &format!("order[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let order = VariableOrder::new(perm).map_err(|e| invalid("order", e.to_string()))?;

    let mut levels = Vec::with_capacity(doc.levels.len());
    for (i, l) in doc.levels.iter().enumerate() {
        let path = format!("levels[{i}]");
        let var = index_1based(l.var, doc.n, &format!("{path}.var"))?;
        if l.width_in == 0 || l.width_out == 0 {
            return Err(invalid(&path, "widths must be positive"));
        }
        let t0 = decode_transition(semantics, &l.t0, l.width_in, l.width_out, &format!("{path}.t0"))?;
        let t1 = decode_transition(semantics, &l.t1, l.width_in, l.width_out, &format!("{path}.t1"))?;
        levels.push(Level { var, width_in: l.width_in, width_out: l.width_out, t0, t1 });
    }

    let first_width = levels.first().map_or(0, |l| l.width_in);
    let initial = index_1based(doc.initial, first_width, "initial")?;
    let sinks = levels.last().map_or(0, |l| l.width_out);
    let mut accept = doc
        .accept
        .iter()
        .enumerate()
        .map(|(i, &a)| index_1based(a, sinks, &format!("accept[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    accept.sort_unstable();
    accept.dedup();

    let epsilon = match &doc.epsilon {
        None | Some(Value::Null) => None,
        Some(v) => Some(parse_real(v, "epsilon")?),
    };

    Ok(Program {
        semantics,
        n: doc.n,
        k: doc.k,
        order,
        levels,
        initial,
        accept,
        epsilon,
    })
}

fn index_1based(v: usize, bound: usize, path: &str) -> Result<usize, FormatError> {
    if v == 0 || v > bound {
        Err(invalid(path, format!("index {v} outside 1..={bound}")))
    } else {
        Ok(v - 1)
    }
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array().ok_or_else(|| invalid(path, "expected an array"))
}

fn as_index(v: &Value, bound: usize, path: &str) -> Result<usize, FormatError> {
    let raw = v
        .as_u64()
        .ok_or_else(|| invalid(path, "expected a positive integer"))?;
    index_1based(raw as usize, bound, path)
}

fn parse_real(v: &Value, path: &str) -> Result<f64, FormatError> {
    let s = v
        .as_str()
        .ok_or_else(|| invalid(path, "expected a decimal string"))?;
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| invalid(path, format!("{s:?} is not a decimal number")))?;
    if !x.is_finite() {
        return Err(invalid(path, "value must be finite"));
    }
    Ok(x)
}

fn matrix_rows<'a>(
    v: &'a Value,
    rows: usize,
    cols: usize,
    path: &str,
) -> Result<Vec<&'a Vec<Value>>, FormatError> {
    let outer = as_array(v, path)?;
    if outer.len() != rows {
        return Err(invalid(
            path,
            format!("matrix has {} rows, level needs {rows}", outer.len()),
        ));
    }
    outer
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let rp = format!("{path}[{r}]");
            let row = as_array(row, &rp)?;
            if row.len() != cols {
                return Err(invalid(
                    rp,
                    format!("row has {} columns, level needs {cols}", row.len()),
                ));
            }
            Ok(row)
        })
        .collect()
}

fn decode_transition(
    semantics: Semantics,
    v: &Value,
    width_in: usize,
    width_out: usize,
    path: &str,
) -> Result<Transition, FormatError> {
    match semantics {
        Semantics::Deterministic => {
            let arr = as_array(v, path)?;
            if arr.len() != width_in {
                return Err(invalid(
                    path,
                    format!("map has {} entries, width_in is {width_in}", arr.len()),
                ));
            }
            let map = arr
                .iter()
                .enumerate()
                .map(|(i, t)| as_index(t, width_out, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Transition::Deterministic(map))
        }
        Semantics::Nondeterministic => {
            let arr = as_array(v, path)?;
            let edges = arr
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let ep = format!("{path}[{i}]");
                    let pair = as_array(e, &ep)?;
                    if pair.len() != 2 {
                        return Err(invalid(ep, "edge must be a [from, to] pair"));
                    }
                    Ok((
                        as_index(&pair[0], width_in, &format!("{ep}[0]"))?,
                        as_index(&pair[1], width_out, &format!("{ep}[1]"))?,
                    ))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Transition::Nondeterministic(edges))
        }
        Semantics::Probabilistic => {
            let rows = matrix_rows(v, width_out, width_in, path)?;
            let mut data = Vec::with_capacity(width_in * width_out);
            for (r, row) in rows.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    data.push(parse_real(x, &format!("{path}[{r}][{c}]"))?);
                }
            }
            Ok(Transition::Stochastic(RealMatrix::from_row_major(width_out, width_in, data)))
        }
        Semantics::Quantum => {
            if width_in != width_out {
                return Err(invalid(
                    path,
                    format!("quantum level must be square, got {width_in} -> {width_out}"),
                ));
            }
            let rows = matrix_rows(v, width_out, width_in, path)?;
            let mut data = Vec::with_capacity(width_in * width_out);
            for (r, row) in rows.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    let ep = format!("{path}[{r}][{c}]");
                    let obj = x
                        .as_object()
                        .ok_or_else(|| invalid(&ep, "expected {\"re\": .., \"im\": ..}"))?;
                    let re = obj.get("re").ok_or_else(|| invalid(&ep, "missing \"re\""))?;
                    let im = obj.get("im").ok_or_else(|| invalid(&ep, "missing \"im\""))?;
                    if obj.len() != 2 {
                        return Err(invalid(&ep, "unexpected fields besides re/im"));
                    }
                    data.push(Complex64::new(
                        parse_real(re, &format!("{ep}.re"))?,
                        parse_real(im, &format!("{ep}.im"))?,
                    ));
                }
            }
            Ok(Transition::Unitary(ComplexMatrix::from_row_major(width_out, width_in, data)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY_DET: &str = r#"{
        "semantics": "deterministic", "n": 1, "k": 1, "order": [1],
        "levels": [{"var": 1, "width_in": 1, "width_out": 2, "t0": [1], "t1": [2]}],
        "initial": 1, "accept": [2]
    }"#;

    #[test]
    fn parses_minimal_document() {
        let p = from_json(TINY_DET).unwrap();
        assert_eq!(p.levels[0].t1, Transition::Deterministic(vec![1]));
        assert_eq!(p.accept, vec![1]);
        assert!(p.validate().is_valid());
        assert_eq!(from_json(&to_json(&p)).unwrap(), p);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = from_json("{\n  \"semantics\": ,\n}").unwrap_err();
        match err {
            FormatError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_semantics_rejected() {
        let text = TINY_DET.replace("\"deterministic\"", "\"classical\"");
        let err = from_json(&text).unwrap_err();
        assert!(matches!(err, FormatError::Invalid { ref path, .. } if path == "semantics"));
    }

    #[test]
    fn stochastic_column_mismatch_is_dimension_error() {
        let text = r#"{
            "semantics": "probabilistic", "n": 1, "k": 1, "order": [1],
            "levels": [{"var": 1, "width_in": 2, "width_out": 2,
                "t0": [["1","0","0"],["0","1","0"]],
                "t1": [["1","0"],["0","1"]]}],
            "initial": 1, "accept": [1], "epsilon": "0.5"
        }"#;
        let err = from_json(text).unwrap_err();
        assert_eq!(
            err,
            FormatError::Invalid {
                path: "levels[0].t0[0]".into(),
                message: "row has 3 columns, level needs 2".into()
            }
        );
    }

    #[test]
    fn reals_round_trip_bit_exactly() {
        for &x in &[0.1, 1.0 / 3.0, std::f64::consts::FRAC_1_SQRT_2, 5e-324, -0.0, 1e300] {
            let back: f64 = real_str(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}

//! JSON wire formats and the 17-significant-digit writer.

use std::io;

use num_complex::Complex64;
use serde_json::{json, ser::Formatter, Map, Value};

use crate::canonical::{CanonicalBlock, CanonicalSpec, Sign};
use crate::error::{QrootError, Result};
use crate::linalg::CMat;
use crate::omega::OmegaMatrix;
use crate::quat_matrix::QuatMatrix;
use crate::quaternion::Quaternion;
use crate::roots::{RootDecision, RootResult};
use crate::verify::VerificationReport;

/// Compact formatter printing every float as `d.dddddddddddddddde±x`.
struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes `value` compactly with 17 significant digits per float.
pub fn to_string(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    serde::Serialize::serialize(value, &mut ser).expect("writing to a Vec cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| QrootError::Parse(e.to_string()))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| QrootError::Parse(format!("missing field \"{key}\"")))
}

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| QrootError::Parse(format!("{what} must be a number")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| QrootError::Parse(format!("{what} must be a non-negative integer")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| QrootError::Parse(format!("{what} must be an array")))
}

fn only_keys(v: &Value, keys: &[&str], what: &str) -> Result<()> {
    let obj = v.as_object().ok_or_else(|| QrootError::Parse(format!("{what} must be an object")))?;
    if let Some(k) = obj.keys().find(|k| !keys.contains(&k.as_str())) {
        return Err(QrootError::Parse(format!("unknown field \"{k}\" in {what}")));
    }
    Ok(())
}

fn complex_value(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn parse_complex(v: &Value, what: &str) -> Result<Complex64> {
    let a = as_array(v, what)?;
    if a.len() != 2 {
        return Err(QrootError::Parse(format!("{what} must be [re, im]")));
    }
    Ok(Complex64::new(as_f64(&a[0], what)?, as_f64(&a[1], what)?))
}

/// `{"n": n, "entries": [[w,x,y,z], ...]}`, row-major.
pub fn quat_matrix_value(a: &QuatMatrix) -> Value {
    let entries: Vec<Value> = a.entries().iter().map(|q| json!([q.w, q.x, q.y, q.z])).collect();
    json!({ "n": a.n_rows(), "entries": entries })
}

pub fn parse_quat_matrix(v: &Value) -> Result<QuatMatrix> {
    only_keys(v, &["n", "entries"], "quaternion matrix")?;
    let n = as_usize(field(v, "n")?, "n")?;
    let raw = as_array(field(v, "entries")?, "entries")?;
    let mut entries = Vec::with_capacity(raw.len());
    for e in raw {
        let q = as_array(e, "entry")?;
        if q.len() != 4 {
            return Err(QrootError::Parse("each entry must be [w, x, y, z]".into()));
        }
        let mut c = [0.0; 4];
        for (slot, x) in c.iter_mut().zip(q) {
            *slot = as_f64(x, "entry component")?;
        }
        entries.push(Quaternion::new(c[0], c[1], c[2], c[3]));
    }
    if entries.iter().any(|q| !q.is_finite()) {
        return Err(QrootError::Parse("entries must be finite".into()));
    }
    QuatMatrix::from_row_major(n, n, entries).map_err(|e| QrootError::Parse(e.to_string()))
}

/// `{"dim": 2n, "re": [...], "im": [...]}`, row-major.
pub fn complex_matrix_value(m: &CMat) -> Value {
    let (r, c) = m.shape();
    let mut re = Vec::with_capacity(r * c);
    let mut im = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            re.push(m[(i, j)].re);
            im.push(m[(i, j)].im);
        }
    }
    json!({ "dim": r, "re": re, "im": im })
}

pub fn omega_value(m: &OmegaMatrix) -> Value {
    complex_matrix_value(m.as_matrix())
}

pub fn parse_complex_matrix(v: &Value) -> Result<CMat> {
    only_keys(v, &["dim", "re", "im"], "complex matrix")?;
    let dim = as_usize(field(v, "dim")?, "dim")?;
    let re = as_array(field(v, "re")?, "re")?;
    let im = as_array(field(v, "im")?, "im")?;
    if dim == 0 || re.len() != dim * dim || im.len() != dim * dim {
        return Err(QrootError::Parse(format!("re and im must hold {dim}x{dim} entries")));
    }
    let mut out = CMat::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let k = i * dim + j;
            out[(i, j)] = Complex64::new(as_f64(&re[k], "re")?, as_f64(&im[k], "im")?);
        }
    }
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(QrootError::Parse("entries must be finite".into()));
    }
    Ok(out)
}

pub fn spec_value(spec: &CanonicalSpec) -> Value {
    let blocks: Vec<Value> = spec
        .blocks
        .iter()
        .map(|b| {
            json!({
                "lambda": complex_value(b.lambda),
                "size": b.size,
                "sign": b.sign.map(Sign::as_i64),
            })
        })
        .collect();
    json!({ "blocks": blocks, "doubled": spec.doubled })
}

pub fn parse_spec(v: &Value) -> Result<CanonicalSpec> {
    only_keys(v, &["blocks", "doubled"], "spec")?;
    let mut blocks = Vec::new();
    for b in as_array(field(v, "blocks")?, "blocks")? {
        only_keys(b, &["lambda", "size", "sign"], "block")?;
        let lambda = parse_complex(field(b, "lambda")?, "lambda")?;
        let size = as_usize(field(b, "size")?, "size")?;
        let sign = match b.get("sign") {
            None | Some(Value::Null) => None,
            Some(s) => {
                let v = s.as_i64().ok_or_else(|| QrootError::Parse("sign must be 1, -1 or null".into()))?;
                Some(Sign::from_i64(v).ok_or_else(|| QrootError::Parse("sign must be 1, -1 or null".into()))?)
            }
        };
        blocks.push(CanonicalBlock { lambda, size, sign });
    }
    let doubled = match v.get("doubled") {
        None => true,
        Some(d) => d.as_bool().ok_or_else(|| QrootError::Parse("doubled must be a boolean".into()))?,
    };
    let spec = CanonicalSpec { blocks, doubled };
    spec.validate()?;
    Ok(spec)
}

pub fn decision_value(d: &RootDecision) -> Value {
    let certificate = match &d.certificate {
        Some(c) => json!({
            "kind": c.kind.to_string(),
            "lambda": complex_value(c.lambda),
            "detail": c.detail,
        }),
        None => Value::Null,
    };
    json!({ "exists": d.exists, "certificate": certificate })
}

pub fn root_result_value(r: &RootResult) -> Value {
    json!({
        "m": r.m,
        "root": quat_matrix_value(&r.root_quaternion()),
        "similarity": omega_value(&r.similarity),
        "spec": spec_value(&r.spec),
        "residual_power": r.residual_power,
        "residual_selfadjoint": r.residual_selfadjoint,
        "omega_residual": r.omega_residual,
        "similarity_condition": r.similarity_condition,
    })
}

pub fn report_value(r: &VerificationReport) -> Value {
    json!({
        "passed": r.passed,
        "residual_power": r.residual_power,
        "residual_selfadjoint": r.residual_selfadjoint,
        "omega_residual": r.omega_residual,
        "tolerance": r.tolerance,
        "omega_tolerance": r.omega_tolerance,
    })
}

/// `{"B": ..., "H": ...}` plus any extra fields.
pub fn instance_value(b: &QuatMatrix, h: &QuatMatrix, extra: Map<String, Value>) -> Value {
    let mut obj = Map::new();
    obj.insert("B".into(), quat_matrix_value(b));
    obj.insert("H".into(), quat_matrix_value(h));
    obj.extend(extra);
    Value::Object(obj)
}

pub fn error_value(e: &QrootError) -> Value {
    json!({ "error": e.kind(), "message": e.to_string() })
}

//! fpc-1 documents: a JSON envelope with a kind-specific payload.
//!
//! Scalars are strings, `a/b` for exact rationals or `p^v*u+O(p^m)` for
//! capped values; matrices are row-major arrays of scalar strings and
//! polynomials are ascending coefficient arrays.

use fpcoh::coleman::CurvePoint;
use fpcoh::curves::{validate_curve, HyperellipticCurve};
use fpcoh::fp::CoefficientCycle;
use fpcoh::homological::{ChainMap, Complex};
use fpcoh::linalg::{Matrix, Subspace, Vector};
use fpcoh::padic::{BaseField, PadicNumber, PadicPoly};
use fpcoh::phin::Filtration;
use fpcoh::syntomic::{GeometryPackage, PointPullback};
use fpcoh::{Error, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const FORMAT_VERSION: &str = "fpc-1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Package,
    Curve,
    Divisor,
    Cycle,
    Formula,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Package => "package",
            Kind::Curve => "curve",
            Kind::Divisor => "divisor",
            Kind::Cycle => "cycle",
            Kind::Formula => "formula",
        }
    }

    fn from_name(s: &str) -> Option<Kind> {
        [Kind::Package, Kind::Curve, Kind::Divisor, Kind::Cycle, Kind::Formula].into_iter().find(|k| k.as_str() == s)
    }
}

/// A validated envelope whose payload has not been interpreted yet.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub kind: Kind,
    pub prime: u64,
    pub precision: Option<u32>,
    pub payload: Value,
}

fn parse_error(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Parse { path: path.into(), msg: msg.into() }
}

const ENVELOPE_KEYS: [&str; 5] = ["format_version", "kind", "prime", "precision", "payload"];

/// Reads the envelope, checking version and kind before anything else.
pub fn read_envelope(text: &str, expected: Kind, source: &str) -> Result<Envelope> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| parse_error(format!("{source}:{}:{}", e.line(), e.column()), e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| parse_error(source, "document must be a JSON object"))?;
    if let Some(k) = obj.keys().find(|k| !ENVELOPE_KEYS.contains(&k.as_str())) {
        return Err(parse_error(format!("{source}: {k}"), format!("unknown key {k:?}")));
    }
    match obj.get("format_version") {
        Some(Value::String(v)) if v == FORMAT_VERSION => {}
        Some(v) => return Err(Error::validation(format!("{source}: unsupported format_version {v}, expected \"{FORMAT_VERSION}\""))),
        None => return Err(parse_error(format!("{source}: format_version"), "missing key")),
    }
    let kind = match obj.get("kind") {
        Some(Value::String(s)) => Kind::from_name(s).ok_or_else(|| Error::validation(format!("{source}: unknown kind {s:?}")))?,
        Some(v) => return Err(parse_error(format!("{source}: kind"), format!("expected a string, found {v}"))),
        None => return Err(parse_error(format!("{source}: kind"), "missing key")),
    };
    if kind != expected {
        return Err(Error::validation(format!(
            "{source}: expected a {} document, found kind {:?}",
            expected.as_str(),
            kind.as_str()
        )));
    }
    let prime = obj
        .get("prime")
        .ok_or_else(|| parse_error(format!("{source}: prime"), "missing key"))?
        .as_u64()
        .ok_or_else(|| parse_error(format!("{source}: prime"), "expected a positive integer"))?;
    let precision = match obj.get("precision") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| parse_error(format!("{source}: precision"), "expected a positive integer"))?,
        ),
    };
    let payload = obj.get("payload").cloned().ok_or_else(|| parse_error(format!("{source}: payload"), "missing key"))?;
    Ok(Envelope { kind, prime, precision, payload })
}

pub fn write_envelope(kind: Kind, field: &BaseField, payload: Value) -> Value {
    let mut m = Map::new();
    m.insert("format_version".into(), Value::String(FORMAT_VERSION.into()));
    m.insert("kind".into(), Value::String(kind.as_str().into()));
    m.insert("prime".into(), Value::from(field.p()));
    m.insert("precision".into(), Value::from(field.precision()));
    m.insert("payload".into(), payload);
    Value::Object(m)
}

fn typed<T: DeserializeOwned>(payload: &Value, source: &str) -> Result<T> {
    serde_path_to_error::deserialize(payload.clone()).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "payload".to_string() } else { format!("payload.{path}") };
        parse_error(format!("{source}: {path}"), e.into_inner().to_string())
    })
}

fn at(source: &str, path: &str, e: Error) -> Error {
    match e {
        Error::Parse { msg, .. } => parse_error(format!("{source}: {path}"), msg),
        other => other,
    }
}

// ---------------------------------------------------------------------------
// scalars and matrices

pub fn scalar(text: &str, field: &BaseField) -> Result<PadicNumber> {
    PadicNumber::parse(text, field)
}

pub fn render(x: &PadicNumber) -> String {
    x.render(true)
}

/// A matrix is an array of rows; a bare string stands for a 1×1 matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixJson {
    Scalar(String),
    Rows(Vec<Vec<String>>),
}

impl MatrixJson {
    fn rows(&self) -> usize {
        match self {
            MatrixJson::Scalar(_) => 1,
            MatrixJson::Rows(r) => r.len(),
        }
    }

    fn to_matrix(&self, rows: usize, cols: usize, field: &BaseField, source: &str, path: &str) -> Result<Matrix> {
        let shape_err = |got: String| Error::validation(format!("{source}: {path} must be {rows}×{cols}, found {got}"));
        let data: Vec<Vec<String>> = match self {
            MatrixJson::Scalar(s) => vec![vec![s.clone()]],
            MatrixJson::Rows(r) => r.clone(),
        };
        if rows * cols == 0 {
            if data.iter().all(|r| r.is_empty()) && (data.is_empty() || data.len() == rows) {
                return Ok(Matrix::zeros(rows, cols, field));
            }
            return Err(shape_err(format!("{} rows", data.len())));
        }
        if data.len() != rows {
            return Err(shape_err(format!("{} rows", data.len())));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for (i, row) in data.iter().enumerate() {
            if row.len() != cols {
                return Err(shape_err(format!("a row of length {}", row.len())));
            }
            for (j, s) in row.iter().enumerate() {
                entries.push(scalar(s, field).map_err(|e| at(source, &format!("{path}[{i}][{j}]"), e))?);
            }
        }
        Ok(Matrix::new(rows, cols, entries, field))
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixJson::Rows((0..m.rows()).map(|i| m.row(i).iter().map(render).collect()).collect())
    }
}

fn vector(texts: &[String], field: &BaseField, source: &str, path: &str) -> Result<Vector> {
    texts
        .iter()
        .enumerate()
        .map(|(k, s)| scalar(s, field).map_err(|e| at(source, &format!("{path}[{k}]"), e)))
        .collect()
}

fn render_vector(v: &[PadicNumber]) -> Vec<String> {
    v.iter().map(render).collect()
}

fn check_prime(field: &BaseField, prime: u64, source: &str) -> Result<()> {
    if field.p() != prime {
        return Err(Error::validation(format!("{source}: prime {prime} does not match p = {}", field.p())));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// curve

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvePayload {
    /// Ascending integer coefficients of f in y² = f(x).
    pub f: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct CurveDoc {
    pub coeffs: Vec<i64>,
    pub curve: HyperellipticCurve,
}

pub fn curve_from(env: &Envelope, field: &BaseField, source: &str) -> Result<CurveDoc> {
    check_prime(field, env.prime, source)?;
    let payload: CurvePayload = typed(&env.payload, source)?;
    let curve = validate_curve(&payload.f, field)?;
    Ok(CurveDoc { coeffs: payload.f, curve })
}

pub fn curve_to(doc: &CurveDoc, field: &BaseField) -> Value {
    let payload = serde_json::to_value(CurvePayload { f: doc.coeffs.clone() }).expect("serializable");
    write_envelope(Kind::Curve, field, payload)
}

// ---------------------------------------------------------------------------
// package

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilStep {
    pub label: i64,
    /// Spanning columns of Fil^label.
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingJson {
    /// One form per degree 0..=2d pairing degree i with degree 2d - i.
    pub forms: Vec<MatrixJson>,
    /// Frobenius acts on the top degree by this scalar.
    pub lambda: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointJson {
    pub name: String,
    pub package: PackagePayload,
    /// Pullback matrix for every degree of the ambient package.
    pub pullback: Vec<MatrixJson>,
    /// Primitive data c_i: ambient degree i to point degree i - 1.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub primitive: Vec<MatrixJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackagePayload {
    #[serde(default = "default_name")]
    pub name: String,
    pub dimension: i32,
    #[serde(default)]
    pub lo: i32,
    /// Frobenius on each cochain space; the row counts fix the dimensions.
    pub phi: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub differentials: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monodromy: Option<Vec<MatrixJson>>,
    /// Per degree, the (label, basis) steps of the Hodge filtration.
    pub filtration: Vec<Vec<FilStep>>,
    /// Certified characteristic polynomials of Φ, for degrees where Φ is
    /// only known to finite precision.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificates: Option<Vec<Option<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointJson>,
}

fn default_name() -> String {
    "package".into()
}

fn filtration_from(steps: &[FilStep], dim: usize, field: &BaseField, source: &str, path: &str) -> Result<Filtration> {
    let mut given = Vec::new();
    for (k, st) in steps.iter().enumerate() {
        let cols = st
            .basis
            .iter()
            .enumerate()
            .map(|(c, col)| {
                if col.len() != dim {
                    return Err(Error::validation(format!("{source}: {path}[{k}].basis[{c}] must have length {dim}")));
                }
                vector(col, field, source, &format!("{path}[{k}].basis[{c}]"))
            })
            .collect::<Result<Vec<_>>>()?;
        given.push((st.label, Subspace::span(dim, &cols, field)?));
    }
    let mut sorted = given.clone();
    sorted.sort_by_key(|(l, _)| *l);
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::validation(format!("{source}: {path} repeats label {}", w[0].0)));
        }
        if !w[0].1.contains_subspace(&w[1].1)? {
            return Err(Error::validation(format!(
                "{source}: {path} is not decreasing: F^{} is not inside F^{}",
                w[1].0, w[0].0
            )));
        }
    }
    if dim > 0 && sorted.first().map(|(_, s)| s.dim()) != Some(dim) {
        return Err(Error::validation(format!("{source}: {path} is not exhaustive: the lowest step must be the whole space")));
    }
    Filtration::new(dim, given, field)
}

fn filtration_to(f: &Filtration) -> Vec<FilStep> {
    f.steps()
        .iter()
        .map(|(l, s)| FilStep { label: *l, basis: s.vectors().iter().map(|v| render_vector(v)).collect() })
        .collect()
}

fn per_degree<'a>(list: &'a [MatrixJson], count: usize, source: &str, what: &str) -> Result<&'a [MatrixJson]> {
    if list.len() != count {
        return Err(Error::validation(format!("{source}: {what} needs {count} entries, found {}", list.len())));
    }
    Ok(list)
}

fn package_from_payload(p: &PackagePayload, field: &BaseField, source: &str, path: &str) -> Result<GeometryPackage> {
    let lo = p.lo;
    let n = p.phi.len();
    if n == 0 {
        return Err(Error::validation(format!("{source}: {path}.phi must list at least one degree")));
    }
    let dims: Vec<usize> = p.phi.iter().map(MatrixJson::rows).collect();
    let phis = p
        .phi
        .iter()
        .enumerate()
        .map(|(k, m)| m.to_matrix(dims[k], dims[k], field, source, &format!("{path}.phi[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    let hk = match &p.differentials {
        None => Complex::split(lo, dims.clone(), field),
        Some(ds) => {
            let ds = per_degree(ds, n - 1, source, &format!("{path}.differentials"))?;
            let mats = ds
                .iter()
                .enumerate()
                .map(|(k, m)| m.to_matrix(dims[k + 1], dims[k], field, source, &format!("{path}.differentials[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            Complex::new(lo, dims.clone(), mats, field).map_err(|e| Error::validation(format!("{source}: {path}.differentials: {e}")))?
        }
    };
    let nmon = match &p.monodromy {
        None => None,
        Some(ns) => {
            let ns = per_degree(ns, n, source, &format!("{path}.monodromy"))?;
            let mats = ns
                .iter()
                .enumerate()
                .map(|(k, m)| m.to_matrix(dims[k], dims[k], field, source, &format!("{path}.monodromy[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            Some(ChainMap::new(&hk, &hk, |i| mats[(i - lo) as usize].clone())?)
        }
    };
    if p.filtration.len() != n {
        return Err(Error::validation(format!("{source}: {path}.filtration needs {n} entries, found {}", p.filtration.len())));
    }
    let fil = p
        .filtration
        .iter()
        .enumerate()
        .map(|(k, steps)| filtration_from(steps, dims[k], field, source, &format!("{path}.filtration[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    let mut g = GeometryPackage::from_complex(&p.name, p.dimension, hk, phis, nmon, fil)?;
    if let Some(certs) = &p.certificates {
        if certs.len() != n {
            return Err(Error::validation(format!("{source}: {path}.certificates needs {n} entries")));
        }
        for (k, c) in certs.iter().enumerate() {
            if let Some(text) = c {
                let poly = PadicPoly::parse(text, field).map_err(|e| at(source, &format!("{path}.certificates[{k}]"), e))?;
                g.certificates[k] = Some(poly);
            }
        }
    }
    if let Some(pr) = &p.pairing {
        let top = 2 * p.dimension;
        let forms = per_degree(&pr.forms, (top + 1).max(0) as usize, source, &format!("{path}.pairing.forms"))?;
        let mats = forms
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let i = i as i32;
                m.to_matrix(g.hk.dim(i), g.hk.dim(top - i), field, source, &format!("{path}.pairing.forms[{i}]"))
            })
            .collect::<Result<Vec<_>>>()?;
        let lambda = scalar(&pr.lambda, field).map_err(|e| at(source, &format!("{path}.pairing.lambda"), e))?;
        g = g.with_pairing(mats, lambda);
    }
    for (k, pt) in p.points.iter().enumerate() {
        let ppath = format!("{path}.points[{k}]");
        let q = package_from_payload(&pt.package, field, source, &format!("{ppath}.package"))?;
        let pb = per_degree(&pt.pullback, n, source, &format!("{ppath}.pullback"))?;
        let pbm = pb
            .iter()
            .enumerate()
            .map(|(j, m)| {
                let i = lo + j as i32;
                m.to_matrix(q.hk.dim(i), g.hk.dim(i), field, source, &format!("{ppath}.pullback[{j}]"))
            })
            .collect::<Result<Vec<_>>>()?;
        let map = ChainMap::new(&g.hk, &q.hk, |i| {
            let j = i - lo;
            if j >= 0 && (j as usize) < n {
                pbm[j as usize].clone()
            } else {
                Matrix::zeros(q.hk.dim(i), g.hk.dim(i), field)
            }
        })?;
        let prims = if pt.primitive.is_empty() {
            vec![]
        } else {
            per_degree(&pt.primitive, n, source, &format!("{ppath}.primitive"))?
                .iter()
                .enumerate()
                .map(|(j, m)| {
                    let i = lo + j as i32;
                    m.to_matrix(q.hk.dim(i - 1), g.hk.dim(i), field, source, &format!("{ppath}.primitive[{j}]"))
                })
                .collect::<Result<Vec<_>>>()?
        };
        g.points.push(PointPullback::new(&pt.name, q, map.clone(), map).with_primitive(prims));
    }
    Ok(g)
}

fn package_to_payload(g: &GeometryPackage) -> PackagePayload {
    let lo = g.hk.lo();
    let degrees: Vec<i32> = (lo..=g.hk.hi()).collect();
    let phi = degrees.iter().map(|&i| MatrixJson::from_matrix(&g.phi.at(i))).collect();
    let split = degrees.iter().all(|&i| g.hk.d(i).is_exact_zero());
    let differentials = (!split).then(|| degrees[..degrees.len() - 1].iter().map(|&i| MatrixJson::from_matrix(&g.hk.d(i))).collect());
    let no_n = degrees.iter().all(|&i| g.nmon.at(i).is_exact_zero());
    let monodromy = (!no_n).then(|| degrees.iter().map(|&i| MatrixJson::from_matrix(&g.nmon.at(i))).collect());
    let filtration = g.de_rham.fil.iter().map(filtration_to).collect();
    let certs: Vec<Option<String>> = degrees
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let needed = !g.phi.at(i).is_exact();
            match g.certificates.get(k) {
                Some(Some(c)) if needed => Some(c.to_string()),
                _ => None,
            }
        })
        .collect();
    let certificates = certs.iter().any(Option::is_some).then_some(certs);
    let pairing = g.pairing.as_ref().map(|pr| PairingJson {
        forms: pr.hk.iter().map(MatrixJson::from_matrix).collect(),
        lambda: render(&pr.lambda),
    });
    let points = g
        .points
        .iter()
        .map(|pt| {
            let prims: Vec<Matrix> = degrees.iter().map(|&i| pt.primitive_at(&g.hk, i)).collect();
            let primitive = if prims.iter().all(Matrix::is_exact_zero) {
                vec![]
            } else {
                prims.iter().map(MatrixJson::from_matrix).collect()
            };
            PointJson {
                name: pt.name.clone(),
                package: package_to_payload(&pt.package),
                pullback: degrees.iter().map(|&i| MatrixJson::from_matrix(&pt.hk.at(i))).collect(),
                primitive,
            }
        })
        .collect();
    PackagePayload {
        name: g.name.clone(),
        dimension: g.dimension,
        lo,
        phi,
        differentials,
        monodromy,
        filtration,
        certificates,
        pairing,
        points,
    }
}

/// Parses and validates a package; every structural invariant is checked.
pub fn package_from(env: &Envelope, field: &BaseField, source: &str) -> Result<GeometryPackage> {
    check_prime(field, env.prime, source)?;
    let payload: PackagePayload = typed(&env.payload, source)?;
    let g = package_from_payload(&payload, field, source, "payload")?;
    g.validate()?;
    Ok(g)
}

pub fn package_to(g: &GeometryPackage) -> Value {
    write_envelope(Kind::Package, &g.field, serde_json::to_value(package_to_payload(g)).expect("serializable"))
}

// ---------------------------------------------------------------------------
// divisor

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorPointJson {
    pub x: String,
    /// Either y itself or the residue mod p selecting the square root.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_residue: Option<u64>,
    pub multiplicity: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorPayload {
    pub points: Vec<DivisorPointJson>,
}

pub type Divisor = Vec<(CurvePoint, i64)>;

pub fn divisor_from(env: &Envelope, curve: &HyperellipticCurve, source: &str) -> Result<Divisor> {
    let field = curve.field();
    check_prime(field, env.prime, source)?;
    let payload: DivisorPayload = typed(&env.payload, source)?;
    if payload.points.is_empty() {
        return Err(Error::validation(format!("{source}: a divisor needs at least one point")));
    }
    payload
        .points
        .iter()
        .enumerate()
        .map(|(k, pj)| {
            let path = format!("payload.points[{k}]");
            let x = scalar(&pj.x, field).map_err(|e| at(source, &format!("{path}.x"), e))?;
            let pt = match (&pj.y, pj.y_residue) {
                (Some(y), None) => CurvePoint::new(curve, x, scalar(y, field).map_err(|e| at(source, &format!("{path}.y"), e))?),
                (None, Some(r)) => CurvePoint::from_x(curve, x, r),
                _ => return Err(Error::validation(format!("{source}: {path} needs exactly one of y and y_residue"))),
            }
            .map_err(|e| match e {
                Error::Domain(m) => Error::validation(format!("{source}: {path}: {m}")),
                other => other,
            })?;
            Ok((pt, pj.multiplicity))
        })
        .collect()
}

pub fn divisor_to(d: &Divisor, field: &BaseField) -> Value {
    let points = d
        .iter()
        .map(|(pt, n)| DivisorPointJson { x: render(&pt.x), y: Some(render(&pt.y)), y_residue: None, multiplicity: *n })
        .collect();
    write_envelope(Kind::Divisor, field, serde_json::to_value(DivisorPayload { points }).expect("serializable"))
}

// ---------------------------------------------------------------------------
// cycle

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleTerm {
    pub point: String,
    pub theta: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CyclePayload {
    pub twist: i64,
    pub terms: Vec<CycleTerm>,
}

pub fn cycle_from(env: &Envelope, field: &BaseField, source: &str) -> Result<CoefficientCycle> {
    check_prime(field, env.prime, source)?;
    let payload: CyclePayload = typed(&env.payload, source)?;
    let mut c = CoefficientCycle::new(payload.twist);
    for (k, t) in payload.terms.iter().enumerate() {
        if t.theta.is_empty() {
            return Err(Error::validation(format!("{source}: payload.terms[{k}].theta is empty")));
        }
        c = c.add(&t.point, vector(&t.theta, field, source, &format!("payload.terms[{k}].theta"))?);
    }
    Ok(c)
}

pub fn cycle_to(c: &CoefficientCycle, field: &BaseField) -> Value {
    let terms = c.summands.iter().map(|(name, th)| CycleTerm { point: name.clone(), theta: render_vector(th) }).collect();
    write_envelope(Kind::Cycle, field, serde_json::to_value(CyclePayload { twist: c.twist, terms }).expect("serializable"))
}

// ---------------------------------------------------------------------------
// formula

/// A synthetic formula instance, generated deterministically from its seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum FormulaPayload {
    Diagonal {
        weights: [usize; 3],
        seed: u64,
        #[serde(default)]
        eigen: bool,
    },
    Isogeny {
        r: usize,
        seed: u64,
    },
}

pub fn formula_from(env: &Envelope, field: &BaseField, source: &str) -> Result<FormulaPayload> {
    check_prime(field, env.prime, source)?;
    let payload: FormulaPayload = typed(&env.payload, source)?;
    match &payload {
        FormulaPayload::Diagonal { weights: [r1, r2, r3], .. } => {
            let ok = r1 <= r2 && r2 <= r3 && *r3 <= 4 && (r2 + r3 - r1) % 2 == 0 && r2 + r3 > *r1 && *r3 <= r1 + r2;
            if !ok {
                return Err(Error::validation(format!(
                    "{source}: weights [{r1}, {r2}, {r3}] violate r1 ≤ r2 ≤ r3 ≤ 4, r2 + r3 - r1 even and positive, r3 ≤ r1 + r2"
                )));
            }
        }
        FormulaPayload::Isogeny { r, .. } => {
            if *r > 4 {
                return Err(Error::validation(format!("{source}: isogeny weight r = {r} exceeds 4")));
            }
        }
    }
    Ok(payload)
}

pub fn formula_to(f: &FormulaPayload, field: &BaseField) -> Value {
    write_envelope(Kind::Formula, field, serde_json::to_value(f).expect("serializable"))
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

//! JSON encodings for hypermatrices, matrices and the reports built on them.
//!
//! A hypermatrix file is `{"domain": {...}, "shape": [n0,n1,n2], "data": [...]}` with the
//! data flattened row-major. The domain header may be omitted when the caller supplies
//! one; if both are present they must agree.

use serde_json::{json, Map, Value};

use crate::dependence::DiagonalWitness;
use crate::error::{Error, Result};
use crate::hypermatrix::Hypermatrix;
use crate::inverse::{Gauge, HyperPair, InvertibilityReport, OuterInversePair};
use crate::matrix::Matrix;
use crate::nullity::NullityCertificate;
use crate::rank::{CertificateKind, DecompositionTriple, RankCertificate};
use crate::scalar::{Complex, Fp, Rational, Scalar, ScalarDomain};

pub fn domain_to_json(d: &ScalarDomain) -> Value {
    match d {
        ScalarDomain::Rational => json!({"kind": "rational"}),
        ScalarDomain::PrimeField { q } => json!({"kind": "gf", "q": q}),
        ScalarDomain::ComplexFloat { tol } => json!({"kind": "complex", "tol": tol}),
    }
}

pub fn domain_from_json(v: &Value) -> Result<ScalarDomain> {
    if let Some(s) = v.as_str() {
        return Ok(ScalarDomain::parse(s, None)?);
    }
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| Error::Parse(format!("domain needs a \"kind\": {v}")))?;
    match kind {
        "rational" => Ok(ScalarDomain::Rational),
        "gf" => {
            let q = v.get("q").and_then(Value::as_u64).ok_or_else(|| Error::Parse("gf domain needs an integer \"q\"".into()))?;
            Ok(ScalarDomain::parse(&format!("gf:{q}"), None)?)
        }
        "complex" => Ok(ScalarDomain::parse("complex", v.get("tol").and_then(Value::as_f64))?),
        other => Err(Error::Parse(format!("unknown domain kind {other:?}"))),
    }
}

/// Domain of a document, reconciled with the one requested by the caller.
pub fn resolve_domain(v: &Value, requested: Option<ScalarDomain>) -> Result<ScalarDomain> {
    let declared = v.get("domain").map(domain_from_json).transpose()?;
    match (declared, requested) {
        (Some(a), Some(b)) if a.label() != b.label() => {
            Err(Error::Parse(format!("file declares domain {} but {} was requested", a.label(), b.label())))
        }
        // A requested complex tolerance wins over the file's.
        (_, Some(b)) => Ok(b),
        (Some(a), None) => Ok(a),
        (None, None) => Err(Error::Parse("no domain in file and none requested".into())),
    }
}

fn array_data<T: Scalar>(data: &[T]) -> Value {
    Value::Array(data.iter().map(Scalar::to_json).collect())
}

fn parse_shape(v: &Value, rank: usize) -> Result<Vec<usize>> {
    let arr = v.get("shape").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing \"shape\" array".into()))?;
    if arr.len() != rank {
        return Err(Error::Parse(format!("expected a {rank}-entry shape, got {}", arr.len())));
    }
    arr.iter()
        .map(|x| x.as_u64().map(|u| u as usize).ok_or_else(|| Error::Parse(format!("bad shape entry {x}"))))
        .collect()
}

fn parse_data<T: Scalar>(v: &Value, len: usize, d: &T::Domain) -> Result<Vec<T>> {
    let arr = v.get("data").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing \"data\" array".into()))?;
    if arr.len() != len {
        return Err(Error::Parse(format!("shape needs {len} entries, data has {}", arr.len())));
    }
    arr.iter().map(|x| T::from_json(x, d).map_err(Error::from)).collect()
}

pub fn hypermatrix_to_json<T: Scalar>(h: &Hypermatrix<T>) -> Value {
    json!({"domain": domain_to_json(&T::describe(h.domain())), "shape": h.shape(), "data": array_data(h.data())})
}

pub fn hypermatrix_from_json<T: Scalar>(v: &Value, d: &T::Domain) -> Result<Hypermatrix<T>> {
    let s = parse_shape(v, 3)?;
    let shape = [s[0], s[1], s[2]];
    Hypermatrix::new(shape, parse_data(v, s.iter().product(), d)?, d.clone())
}

pub fn matrix_to_json<T: Scalar>(m: &Matrix<T>) -> Value {
    json!({"domain": domain_to_json(&T::describe(m.domain())), "shape": [m.rows(), m.cols()], "data": array_data(m.data())})
}

pub fn matrix_from_json<T: Scalar>(v: &Value, d: &T::Domain) -> Result<Matrix<T>> {
    let s = parse_shape(v, 2)?;
    Matrix::new(s[0], s[1], parse_data(v, s[0] * s[1], d)?, d.clone())
}

/// A hypermatrix whose scalar type is only known at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyHypermatrix {
    Rational(Hypermatrix<Rational>),
    Gf(Hypermatrix<Fp>),
    Complex(Hypermatrix<Complex>),
}

impl AnyHypermatrix {
    pub fn from_json(v: &Value, requested: Option<ScalarDomain>) -> Result<Self> {
        let sd = resolve_domain(v, requested)?;
        Ok(match sd {
            ScalarDomain::Rational => AnyHypermatrix::Rational(hypermatrix_from_json(v, &Rational::domain_from(&sd)?)?),
            ScalarDomain::PrimeField { .. } => AnyHypermatrix::Gf(hypermatrix_from_json(v, &Fp::domain_from(&sd)?)?),
            ScalarDomain::ComplexFloat { .. } => AnyHypermatrix::Complex(hypermatrix_from_json(v, &Complex::domain_from(&sd)?)?),
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyHypermatrix::Rational(h) => hypermatrix_to_json(h),
            AnyHypermatrix::Gf(h) => hypermatrix_to_json(h),
            AnyHypermatrix::Complex(h) => hypermatrix_to_json(h),
        }
    }

    pub fn domain(&self) -> ScalarDomain {
        match self {
            AnyHypermatrix::Rational(h) => Rational::describe(h.domain()),
            AnyHypermatrix::Gf(h) => Fp::describe(h.domain()),
            AnyHypermatrix::Complex(h) => Complex::describe(h.domain()),
        }
    }
}

pub fn triple_to_json<T: Scalar>(t: &DecompositionTriple<T>) -> Value {
    json!({
        "x": hypermatrix_to_json(t.x()),
        "y": hypermatrix_to_json(t.y()),
        "z": hypermatrix_to_json(t.z()),
        "support": t.support(),
    })
}

pub fn triple_from_json<T: Scalar>(v: &Value, d: &T::Domain) -> Result<DecompositionTriple<T>> {
    let part = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("triple is missing {k:?}"))).and_then(|p| hypermatrix_from_json(p, d));
    let (x, y, z) = (part("x")?, part("y")?, part("z")?);
    match v.get("support") {
        None => DecompositionTriple::full(x, y, z),
        Some(s) => {
            let support = s
                .as_array()
                .ok_or_else(|| Error::Parse("support must be an array".into()))?
                .iter()
                .map(|t| t.as_u64().map(|u| u as usize).ok_or_else(|| Error::Parse(format!("bad support index {t}"))))
                .collect::<Result<Vec<_>>>()?;
            DecompositionTriple::new(x, y, z, support)
        }
    }
}

pub fn certificate_to_json<T: Scalar>(c: &RankCertificate<T>) -> Value {
    let mut out = Map::new();
    match c.kind {
        CertificateKind::UpperBound => {
            out.insert("kind".into(), json!("upper_bound"));
        }
        CertificateKind::ExactRank { q, candidates } => {
            out.insert("kind".into(), json!("exact_rank"));
            out.insert("q".into(), json!(q));
            out.insert("candidates_rejected".into(), json!(candidates));
        }
    }
    out.insert("r".into(), json!(c.r()));
    out.insert("ell".into(), json!(c.triple.ell()));
    out.insert("triple".into(), triple_to_json(&c.triple));
    out.insert("support".into(), json!(c.triple.support()));
    out.insert("residual".into(), json!(c.residual));
    Value::Object(out)
}

pub fn witness_to_json<T: Scalar>(w: &DiagonalWitness<T>, residual: f64) -> Value {
    let vecs = |vs: &[Vec<T>]| Value::Array(vs.iter().map(|v| array_data(v)).collect());
    json!({"x": vecs(&w.x), "y": vecs(&w.y), "residual": residual})
}

pub fn pair_to_json<T: Scalar>(p: &HyperPair<T>) -> Value {
    json!({"A": hypermatrix_to_json(&p.a), "B": hypermatrix_to_json(&p.b)})
}

pub fn pair_from_json<T: Scalar>(v: &Value, d: &T::Domain) -> Result<HyperPair<T>> {
    let part = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("pair is missing {k:?}"))).and_then(|p| hypermatrix_from_json(p, d));
    HyperPair::new(part("A")?, part("B")?)
}

/// Domain of a pair document, from its own header or that of its `A` member.
pub fn pair_domain(v: &Value, requested: Option<ScalarDomain>) -> Result<ScalarDomain> {
    match (v.get("domain"), v.get("A")) {
        (None, Some(a)) => resolve_domain(a, requested),
        _ => resolve_domain(v, requested),
    }
}

fn gauge_label(g: Gauge) -> &'static str {
    match g {
        Gauge::Scaling => "scaling",
        Gauge::FirstNonzeroD => "first_nonzero_d",
    }
}

pub fn inverse_report_to_json<T: Scalar>(rep: &InvertibilityReport, inv: Option<&OuterInversePair<T>>, sandwich_residual: Option<f64>) -> Value {
    json!({
        "invertible": rep.invertible,
        "C": inv.map(|i| hypermatrix_to_json(&i.c)),
        "D": inv.map(|i| hypermatrix_to_json(&i.d)),
        "gauge": inv.map(|i| gauge_label(i.gauge)),
        "sandwich_residual": sandwich_residual,
        "diagnostics": rep.diagnostic.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
    })
}

pub fn nullity_to_json<T: Scalar>(c: &NullityCertificate<T>) -> Value {
    json!({
        "nullity": c.nullity(),
        "zero_slices": c.zero_slices,
        "transpose_power": c.transpose_power,
        "pair": pair_to_json(&c.pair),
        "inverse": {"C": hypermatrix_to_json(&c.inverse.c), "D": hypermatrix_to_json(&c.inverse.d), "gauge": gauge_label(c.inverse.gauge)},
        "residual": c.residual,
    })
}

/// Pretty JSON with a trailing newline. Keys come out sorted.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

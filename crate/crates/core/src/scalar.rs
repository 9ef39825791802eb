//! Scalar domains: exact rationals, prime fields GF(q) and tolerance-aware complex floats.
//!
//! Arithmetic never needs the domain descriptor. Constructors and comparisons do, since
//! zero in GF(q) needs `q` and equality over the complex numbers needs a tolerance.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;
pub type Complex = Complex64;

/// Largest supported prime modulus.
pub const MAX_PRIME: u16 = 251;

/// Default complex comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("unsupported modulus {0}: must be a prime not exceeding {MAX_PRIME}")]
    BadModulus(u64),
    #[error("invalid tolerance {0}")]
    BadTolerance(f64),
    #[error("cannot parse scalar: {0}")]
    Parse(String),
}

/// Commutative ring operations. Deliberately has no inverse, so code bounded on `Ring`
/// alone cannot divide.
pub trait Ring: Clone + fmt::Debug + Send + Sync + 'static {
    type Domain: Clone + fmt::Debug + PartialEq + Send + Sync + 'static;

    fn zero(d: &Self::Domain) -> Self;
    fn one(d: &Self::Domain) -> Self;
    fn from_i64(v: i64, d: &Self::Domain) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self, d: &Self::Domain) -> bool;
    fn approx_eq(&self, o: &Self, d: &Self::Domain) -> bool;
    /// Absolute value as a float, used for residual norms and reporting.
    fn magnitude(&self) -> f64;
    /// Whether the value is a well-formed element of `d`.
    fn belongs(&self, _d: &Self::Domain) -> bool {
        true
    }
    /// Comparison tolerance; `None` for exact domains.
    fn tolerance(_d: &Self::Domain) -> Option<f64> {
        None
    }
    fn is_exact(d: &Self::Domain) -> bool {
        Self::tolerance(d).is_none()
    }
}

pub trait Field: Ring {
    fn inv(&self, d: &Self::Domain) -> Result<Self, ScalarError>;

    fn div(&self, o: &Self, d: &Self::Domain) -> Result<Self, ScalarError> {
        Ok(self.mul(&o.inv(d)?))
    }
}

/// Runtime description of a domain, used by serialization and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ScalarDomain {
    Rational,
    PrimeField { q: u16 },
    ComplexFloat { tol: f64 },
}

impl ScalarDomain {
    /// Parses `rational`, `gf:q` or `complex`.
    pub fn parse(s: &str, tol: Option<f64>) -> Result<Self, ScalarError> {
        let s = s.trim();
        if s == "rational" {
            return Ok(ScalarDomain::Rational);
        }
        if s == "complex" {
            let tol = tol.unwrap_or(DEFAULT_TOL);
            ComplexField::new(tol)?;
            return Ok(ScalarDomain::ComplexFloat { tol });
        }
        if let Some(q) = s.strip_prefix("gf:") {
            let q: u64 = q.parse().map_err(|_| ScalarError::Parse(format!("bad modulus in {s:?}")))?;
            let f = PrimeField::new(q)?;
            return Ok(ScalarDomain::PrimeField { q: f.q });
        }
        Err(ScalarError::Parse(format!("unknown domain {s:?}")))
    }

    pub fn label(&self) -> String {
        match self {
            ScalarDomain::Rational => "rational".to_string(),
            ScalarDomain::PrimeField { q } => format!("gf:{q}"),
            ScalarDomain::ComplexFloat { .. } => "complex".to_string(),
        }
    }
}

/// Values that can cross the serialization boundary.
pub trait Scalar: Field {
    fn describe(d: &Self::Domain) -> ScalarDomain;
    fn domain_from(sd: &ScalarDomain) -> Result<Self::Domain, ScalarError>;
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value, d: &Self::Domain) -> Result<Self, ScalarError>;
}

/// Equality that reports a domain mismatch instead of silently comparing.
pub fn scalar_eq<T: Ring>(a: &T, b: &T, d: &T::Domain) -> Result<bool, ScalarError> {
    if !a.belongs(d) || !b.belongs(d) {
        return Err(ScalarError::DomainMismatch(format!("{a:?} vs {b:?} in {d:?}")));
    }
    Ok(a.approx_eq(b, d))
}

// ---------------------------------------------------------------- rationals

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RationalField;

impl Ring for Rational {
    type Domain = RationalField;

    fn zero(_: &RationalField) -> Self {
        <Rational as Zero>::zero()
    }
    fn one(_: &RationalField) -> Self {
        <Rational as One>::one()
    }
    fn from_i64(v: i64, _: &RationalField) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self, _: &RationalField) -> bool {
        Zero::is_zero(self)
    }
    fn approx_eq(&self, o: &Self, _: &RationalField) -> bool {
        self == o
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Field for Rational {
    fn inv(&self, _: &RationalField) -> Result<Self, ScalarError> {
        if Zero::is_zero(self) {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let s = s.trim();
    let bad = || ScalarError::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl Scalar for Rational {
    fn describe(_: &RationalField) -> ScalarDomain {
        ScalarDomain::Rational
    }
    fn domain_from(sd: &ScalarDomain) -> Result<RationalField, ScalarError> {
        match sd {
            ScalarDomain::Rational => Ok(RationalField),
            other => Err(ScalarError::DomainMismatch(format!("expected rational, got {}", other.label()))),
        }
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
    fn from_json(v: &serde_json::Value, _: &RationalField) -> Result<Self, ScalarError> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) => match n.as_i64() {
                Some(i) => Ok(Rational::from_integer(BigInt::from(i))),
                None => Err(ScalarError::Parse(format!("non-integer number {n} for a rational"))),
            },
            other => Err(ScalarError::Parse(format!("expected rational string, got {other}"))),
        }
    }
}

// ---------------------------------------------------------------- prime fields

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub q: u16,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self, ScalarError> {
        if q < 2 || q > MAX_PRIME as u64 || !(2..q).take_while(|d| d * d <= q).all(|d| q % d != 0) {
            return Err(ScalarError::BadModulus(q));
        }
        Ok(PrimeField { q: q as u16 })
    }

    pub fn elem(&self, v: i64) -> Fp {
        Fp { v: v.rem_euclid(self.q as i64) as u16, q: self.q }
    }

    /// All field elements in increasing order of representative.
    pub fn elements(&self) -> impl Iterator<Item = Fp> + '_ {
        (0..self.q).map(move |v| Fp { v, q: self.q })
    }
}

/// An element of GF(q), represented by its least nonnegative residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    pub v: u16,
    pub q: u16,
}

impl Fp {
    fn check(&self, o: &Self) {
        assert_eq!(self.q, o.q, "mixing GF({}) and GF({})", self.q, o.q);
    }
}

impl Ring for Fp {
    type Domain = PrimeField;

    fn zero(d: &PrimeField) -> Self {
        Fp { v: 0, q: d.q }
    }
    fn one(d: &PrimeField) -> Self {
        Fp { v: 1, q: d.q }
    }
    fn from_i64(v: i64, d: &PrimeField) -> Self {
        d.elem(v)
    }
    fn add(&self, o: &Self) -> Self {
        self.check(o);
        Fp { v: ((self.v as u32 + o.v as u32) % self.q as u32) as u16, q: self.q }
    }
    fn sub(&self, o: &Self) -> Self {
        self.check(o);
        Fp { v: ((self.v as u32 + self.q as u32 - o.v as u32) % self.q as u32) as u16, q: self.q }
    }
    fn mul(&self, o: &Self) -> Self {
        self.check(o);
        Fp { v: ((self.v as u32 * o.v as u32) % self.q as u32) as u16, q: self.q }
    }
    fn neg(&self) -> Self {
        Fp { v: (self.q - self.v) % self.q, q: self.q }
    }
    fn is_zero(&self, _: &PrimeField) -> bool {
        self.v == 0
    }
    fn approx_eq(&self, o: &Self, _: &PrimeField) -> bool {
        self.v == o.v
    }
    fn magnitude(&self) -> f64 {
        if self.v == 0 {
            0.0
        } else {
            1.0
        }
    }
    fn belongs(&self, d: &PrimeField) -> bool {
        self.q == d.q && self.v < d.q
    }
}

impl Field for Fp {
    fn inv(&self, _: &PrimeField) -> Result<Self, ScalarError> {
        if self.v == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        // Fermat: a^(q-2).
        let mut acc = 1u32;
        let mut base = self.v as u32;
        let mut e = self.q as u32 - 2;
        let q = self.q as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        Ok(Fp { v: acc as u16, q: self.q })
    }
}

impl Scalar for Fp {
    fn describe(d: &PrimeField) -> ScalarDomain {
        ScalarDomain::PrimeField { q: d.q }
    }
    fn domain_from(sd: &ScalarDomain) -> Result<PrimeField, ScalarError> {
        match sd {
            ScalarDomain::PrimeField { q } => PrimeField::new(*q as u64),
            other => Err(ScalarError::DomainMismatch(format!("expected gf:q, got {}", other.label()))),
        }
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(self.v)
    }
    fn from_json(v: &serde_json::Value, d: &PrimeField) -> Result<Self, ScalarError> {
        match v.as_i64() {
            Some(i) => Ok(d.elem(i)),
            None => Err(ScalarError::Parse(format!("expected integer residue, got {v}"))),
        }
    }
}

// ---------------------------------------------------------------- complex floats

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexField {
    pub tol: f64,
}

impl ComplexField {
    pub fn new(tol: f64) -> Result<Self, ScalarError> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(ScalarError::BadTolerance(tol));
        }
        Ok(ComplexField { tol })
    }
}

impl Default for ComplexField {
    fn default() -> Self {
        ComplexField { tol: DEFAULT_TOL }
    }
}

impl Ring for Complex {
    type Domain = ComplexField;

    fn zero(_: &ComplexField) -> Self {
        Complex::new(0.0, 0.0)
    }
    fn one(_: &ComplexField) -> Self {
        Complex::new(1.0, 0.0)
    }
    fn from_i64(v: i64, _: &ComplexField) -> Self {
        Complex::new(v as f64, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self, d: &ComplexField) -> bool {
        self.norm() <= d.tol
    }
    fn approx_eq(&self, o: &Self, d: &ComplexField) -> bool {
        (self - o).norm() <= d.tol * (1.0 + self.norm().max(o.norm()))
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn belongs(&self, _: &ComplexField) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn tolerance(d: &ComplexField) -> Option<f64> {
        Some(d.tol)
    }
}

impl Field for Complex {
    fn inv(&self, d: &ComplexField) -> Result<Self, ScalarError> {
        if self.norm() <= d.tol * 1e-3 || self.norm() == 0.0 {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(Complex::new(1.0, 0.0) / self)
        }
    }
}

impl Scalar for Complex {
    fn describe(d: &ComplexField) -> ScalarDomain {
        ScalarDomain::ComplexFloat { tol: d.tol }
    }
    fn domain_from(sd: &ScalarDomain) -> Result<ComplexField, ScalarError> {
        match sd {
            ScalarDomain::ComplexFloat { tol } => ComplexField::new(*tol),
            other => Err(ScalarError::DomainMismatch(format!("expected complex, got {}", other.label()))),
        }
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!([self.re, self.im])
    }
    fn from_json(v: &serde_json::Value, _: &ComplexField) -> Result<Self, ScalarError> {
        let bad = || ScalarError::Parse(format!("expected [re, im], got {v}"));
        if let Some(x) = v.as_f64() {
            return Ok(Complex::new(x, 0.0));
        }
        let arr = v.as_array().ok_or_else(bad)?;
        if arr.len() != 2 {
            return Err(bad());
        }
        let re = arr[0].as_f64().ok_or_else(bad)?;
        let im = arr[1].as_f64().ok_or_else(bad)?;
        Ok(Complex::new(re, im))
    }
}

/// Converts an exact rational into GF(q). Fails when q divides the denominator.
pub fn rational_to_fp(r: &Rational, f: &PrimeField) -> Result<Fp, ScalarError> {
    let q = BigInt::from(f.q);
    let reduce = |x: &BigInt| -> i64 { ((x % &q + &q) % &q).to_i64().unwrap_or(0) };
    let num = f.elem(reduce(r.numer()));
    let den = f.elem(reduce(r.denom()));
    Ok(num.mul(&den.inv(f)?))
}

pub fn rational_to_complex(r: &Rational) -> Complex {
    Complex::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
}

//! The two scalar backends as seen from the command line: parsing of
//! argument and file values, and the JSON, text and LaTeX forms.

use cg_rotor_core::{Complex, Error as CoreError, RadicalScalar, Scalar};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Number, Value};

use crate::angle::Angle;
use crate::latex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BackendKind {
    Exact,
    Float,
}

impl BackendKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Some(BackendKind::Exact),
            "float" => Some(BackendKind::Float),
            _ => None,
        }
    }
}

pub trait Backend: Scalar {
    fn to_json(&self) -> Value;
    fn to_text(&self) -> String;
    fn to_latex(&self) -> String;
    /// Read a number written on the command line or as a string in a file:
    /// a decimal, radical notation (`3/7*sqrt(14)`) or LaTeX.
    fn parse_str(s: &str) -> Result<Self, String>;
    /// Read a radix JSON object `{"terms": [...], ...}`.
    fn from_terms_json(v: &Value) -> Result<Self, String>;
    fn cos_sin(angle: &Angle, text: &str) -> Result<(Self, Self), String>;
    /// `√x` for `x ≥ 0`.
    fn sqrt(x: &Self) -> Result<Self, String>;
}

/// Exact decimal: `-12`, `0.25`, `1.5e-3`.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    if exp.abs() > 1000 {
        return None;
    }
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: BigInt = format!("{int}{frac}").parse().ok()?;
    let e = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let q = if e >= 0 {
        BigRational::from_integer(n * ten.pow(e as u32))
    } else {
        BigRational::new(n, ten.pow(e.unsigned_abs()))
    };
    Some(if neg { -q } else { q })
}

fn big_number(v: &BigInt) -> Value {
    match v.to_string().parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::String(v.to_string()),
    }
}

fn float_number(x: f64) -> Value {
    Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

fn big_from_json(v: &Value, what: &str) -> Result<BigInt, String> {
    match v {
        Value::Number(n) => n.to_string().parse().map_err(|_| format!("{what} must be an integer")),
        Value::String(s) => s.parse().map_err(|_| format!("{what} must be an integer")),
        _ => Err(format!("{what} must be an integer")),
    }
}

fn terms_json(v: &Value) -> Result<Vec<(BigRational, BigUint)>, String> {
    let terms = v.get("terms").and_then(Value::as_array).ok_or("scalar objects need a \"terms\" array")?;
    terms
        .iter()
        .map(|t| {
            let num = big_from_json(t.get("num").ok_or("term without num")?, "num")?;
            let den = big_from_json(t.get("den").unwrap_or(&json!(1)), "den")?;
            let rad = big_from_json(t.get("rad").unwrap_or(&json!(1)), "rad")?;
            if den.is_zero() || rad.is_negative() {
                return Err("terms need a nonzero den and a nonnegative rad".to_string());
            }
            Ok((BigRational::new(num, den), rad.to_biguint().expect("checked sign")))
        })
        .collect()
}

fn exact_angle_error(text: &str) -> String {
    format!("angle {text:?} has no exact cosine and sine in the exact backend; use --backend float")
}

impl Backend for RadicalScalar {
    fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(rad, c)| {
                let mut t = serde_json::Map::new();
                t.insert("num".into(), big_number(c.numer()));
                t.insert("den".into(), big_number(c.denom()));
                t.insert("rad".into(), big_number(&BigInt::from(rad)));
                Value::Object(t)
            })
            .collect();
        json!({ "terms": terms, "approx": float_number(self.approx()) })
    }

    fn to_text(&self) -> String {
        self.to_string()
    }

    fn to_latex(&self) -> String {
        latex::scalar(self)
    }

    fn parse_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        if let Some(q) = parse_decimal(t) {
            return Ok(RadicalScalar::from_rational(q));
        }
        if t.contains('\\') {
            return latex::parse_scalar(t).map_err(|e| e.to_string());
        }
        t.parse().map_err(|e| format!("cannot read {t:?} as an exact number: {e}"))
    }

    fn from_terms_json(v: &Value) -> Result<Self, String> {
        RadicalScalar::from_terms(terms_json(v)?).map_err(|e| e.to_string())
    }

    fn cos_sin(angle: &Angle, text: &str) -> Result<(Self, Self), String> {
        let p = angle.pi_fraction().ok_or_else(|| exact_angle_error(text))?;
        p.cos_sin().map_err(|e| match e {
            CoreError::UnsupportedAngle => exact_angle_error(text),
            other => other.to_string(),
        })
    }

    fn sqrt(x: &Self) -> Result<Self, String> {
        let q = x.as_rational().ok_or("square roots of irrational values are not supported")?;
        RadicalScalar::sqrt_rational(&q).map_err(|e| e.to_string())
    }
}

impl Backend for f64 {
    fn to_json(&self) -> Value {
        json!({ "approx": float_number(*self) })
    }

    fn to_text(&self) -> String {
        format!("{self}")
    }

    fn to_latex(&self) -> String {
        format!("{self}")
    }

    fn parse_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let v = match t.parse::<f64>() {
            Ok(v) => v,
            Err(_) => RadicalScalar::parse_str(t)?.approx(),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("{t:?} is not a finite number"))
        }
    }

    fn from_terms_json(v: &Value) -> Result<Self, String> {
        if let Some(x) = v.get("approx").and_then(Value::as_f64) {
            return Ok(x);
        }
        Ok(RadicalScalar::from_terms_json(v)?.approx())
    }

    fn cos_sin(angle: &Angle, _text: &str) -> Result<(Self, Self), String> {
        match angle.pi_fraction().map(|p| p.cos_sin::<f64>()) {
            Some(Ok(cs)) => Ok(cs),
            _ => {
                let t = angle.radians();
                Ok((t.cos(), t.sin()))
            }
        }
    }

    fn sqrt(x: &Self) -> Result<Self, String> {
        if *x < 0.0 {
            Err("square root of a negative number".into())
        } else {
            Ok(x.sqrt())
        }
    }
}

/// Read a scalar from a JSON value: a number, a string in radical
/// notation, or a radix JSON object.
pub fn from_json<B: Backend>(v: &Value) -> Result<B, String> {
    match v {
        Value::Number(n) => B::parse_str(&n.to_string()),
        Value::String(s) => B::parse_str(s),
        Value::Object(_) => B::from_terms_json(v),
        _ => Err(format!("expected a number, got {v}")),
    }
}

pub fn complex_json<B: Backend>(z: &Complex<B>) -> Value {
    json!({ "re": z.re.to_json(), "im": z.im.to_json() })
}

pub fn complex_text<B: Backend>(z: &Complex<B>) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_text(),
        (true, false) => format!("({})i", z.im.to_text()),
        (false, false) => format!("{} + ({})i", z.re.to_text(), z.im.to_text()),
    }
}

pub fn complex_latex<B: Backend>(z: &Complex<B>) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_latex(),
        (true, false) => format!("\\left({}\\right)\\mathrm{{i}}", z.im.to_latex()),
        (false, false) => format!("{} + \\left({}\\right)\\mathrm{{i}}", z.re.to_latex(), z.im.to_latex()),
    }
}

/// Unit vector along `v`.
pub fn normalize<B: Backend>(v: [B; 3]) -> Result<[B; 3], String> {
    let n2 = v.iter().fold(B::zero(), |acc, x| acc + x.mul_ref(x));
    if n2.is_zero() {
        return Err("direction must be nonzero".into());
    }
    let n = B::sqrt(&n2)?;
    let mut out = v;
    for x in &mut out {
        *x = x.try_div(&n).map_err(|e| e.to_string())?;
    }
    Ok(out)
}

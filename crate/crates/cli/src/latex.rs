//! LaTeX radical notation and a parser that reads it back.
//!
//! The parser accepts sums of products built from integers, `\frac{..}{..}`,
//! `\sqrt{..}`, braces, parentheses and `\cdot`, so both the emitter's
//! output and hand-written forms such as `\frac{\sqrt{2}}{\sqrt{7}}` load.

use cg_rotor_core::{Matrix, RadicalScalar, Ring};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

pub fn scalar(x: &RadicalScalar) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (rad, c)) in x.terms().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs();
        if !mag.is_integer() {
            out.push_str(&format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom()));
        } else if rad == 1 || !mag.is_one() {
            out.push_str(&mag.numer().to_string());
        }
        if rad != 1 {
            out.push_str(&format!("\\sqrt{{{rad}}}"));
        }
    }
    out
}

pub fn matrix<T>(m: &Matrix<T>, entry: impl Fn(&T) -> String) -> String
where
    T: Ring,
{
    let rows: Vec<String> = (0..m.rows()).map(|r| m.row(r).iter().map(&entry).collect::<Vec<_>>().join(" & ")).collect();
    format!("\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}", rows.join(" \\\\\n"))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("LaTeX parse error at byte {at}: {why}")]
pub struct ParseError {
    pub at: usize,
    pub why: String,
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, why: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { at: self.i, why: why.into() })
    }

    fn skip_ws(&mut self) {
        loop {
            while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
                self.i += 1;
            }
            // Thin spaces.
            if self.s[self.i..].starts_with(b"\\,") || self.s[self.i..].starts_with(b"\\;") {
                self.i += 2;
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.s[self.i..].starts_with(tok.as_bytes()) {
            self.i += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected {tok}"))
        }
    }

    fn expr(&mut self) -> Result<RadicalScalar, ParseError> {
        let mut acc = RadicalScalar::zero();
        let mut first = true;
        loop {
            let mut neg = false;
            let mut signed = false;
            loop {
                if self.eat("-") {
                    neg = !neg;
                    signed = true;
                } else if self.eat("+") {
                    signed = true;
                } else {
                    break;
                }
            }
            if !first && !signed {
                return Ok(acc);
            }
            let t = self.term()?;
            acc = acc + if neg { -t } else { t };
            first = false;
        }
    }

    fn term(&mut self) -> Result<RadicalScalar, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat("\\cdot") || self.eat("\\times") {
                acc = &acc * &self.factor()?;
            } else if self.starts_factor() {
                acc = &acc * &self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        let rest = &self.s[self.i..];
        rest.first().is_some_and(|b| b.is_ascii_digit() || *b == b'{' || *b == b'(')
            || [&b"\\frac"[..], b"\\sqrt", b"\\left("].iter().any(|t| rest.starts_with(t))
    }

    fn group(&mut self) -> Result<RadicalScalar, ParseError> {
        self.expect("{")?;
        let v = self.expr()?;
        self.expect("}")?;
        Ok(v)
    }

    fn factor(&mut self) -> Result<RadicalScalar, ParseError> {
        self.skip_ws();
        if self.eat("\\frac") {
            let num = self.group()?;
            let at = self.i;
            let den = self.group()?;
            return num.checked_div(&den).map_err(|e| ParseError { at, why: e.to_string() });
        }
        if self.eat("\\sqrt") {
            let at = self.i;
            let arg = self.group()?;
            let q = arg.as_rational().ok_or(ParseError { at, why: "nested radicals are not supported".into() })?;
            return RadicalScalar::sqrt_rational(&q).map_err(|e| ParseError { at, why: e.to_string() });
        }
        if self.s[self.i..].starts_with(b"{") {
            return self.group();
        }
        if self.eat("\\left(") {
            let v = self.expr()?;
            self.expect("\\right)")?;
            return Ok(v);
        }
        if self.eat("(") {
            let v = self.expr()?;
            self.expect(")")?;
            return Ok(v);
        }
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return self.err("expected a number");
        }
        let digits = std::str::from_utf8(&self.s[start..self.i]).expect("ascii digits");
        let n: BigInt = digits.parse().expect("ascii digits");
        Ok(RadicalScalar::from_rational(BigRational::from_integer(n)))
    }
}

pub fn parse_scalar(s: &str) -> Result<RadicalScalar, ParseError> {
    let mut p = Parser { s: s.as_bytes(), i: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.i != p.s.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

pub fn parse_matrix(s: &str) -> Result<Matrix<RadicalScalar>, ParseError> {
    let (open, close) = ("\\begin{pmatrix}", "\\end{pmatrix}");
    let start = s.find(open).ok_or(ParseError { at: 0, why: "missing \\begin{pmatrix}".into() })? + open.len();
    let end = s[start..].find(close).ok_or(ParseError { at: start, why: "missing \\end{pmatrix}".into() })? + start;
    let mut rows = Vec::new();
    for row in s[start..end].split("\\\\").map(str::trim).filter(|r| !r.is_empty()) {
        rows.push(row.split('&').map(parse_scalar).collect::<Result<Vec<_>, _>>()?);
    }
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(ParseError { at: start, why: "ragged or empty matrix".into() });
    }
    Ok(Matrix::from_rows(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use cg_rotor_core::Scalar;
    use proptest::prelude::*;

    fn radical() -> impl Strategy<Value = RadicalScalar> {
        prop::collection::vec((1u64..60, -40i64..=40, 1i64..=12), 0..=4)
            .prop_map(|t| t.into_iter().fold(RadicalScalar::zero(), |acc, (r, n, d)| acc + RadicalScalar::sqrt_integer(r) * RadicalScalar::ratio(n, d)))
    }

    #[test]
    fn emits_fractions_and_roots() {
        let x: RadicalScalar = "-1/2 + 3/7*sqrt(14) + sqrt(2)".parse().unwrap();
        assert_eq!(scalar(&x), "-\\frac{1}{2} + \\sqrt{2} + \\frac{3}{7}\\sqrt{14}");
        assert_eq!(scalar(&RadicalScalar::from_integer(-3)), "-3");
    }

    #[test]
    fn reads_hand_written_forms() {
        let want = RadicalScalar::sqrt_ratio(2, 7);
        assert_eq!(parse_scalar("\\frac{\\sqrt{2}}{\\sqrt{7}}").unwrap(), want);
        assert_eq!(parse_scalar("-\\frac{1}{\\sqrt{2}}").unwrap(), -RadicalScalar::sqrt_ratio(1, 2));
        assert_eq!(parse_scalar("\\frac{3}{2}\\cdot\\sqrt{3}").unwrap(), RadicalScalar::sqrt_integer(3) * RadicalScalar::ratio(3, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("1 +").is_err());
        assert!(parse_scalar("\\sqrt{1+\\sqrt{2}}").is_err());
        assert!(parse_matrix("\\begin{pmatrix} 1 & 2 \\\\ 3 \\end{pmatrix}").is_err());
    }

    proptest! {
        #[test]
        fn scalar_round_trip(x in radical()) {
            prop_assert_eq!(parse_scalar(&scalar(&x)).unwrap(), x);
        }

        #[test]
        fn matrix_round_trip(entries in prop::collection::vec(radical(), 6)) {
            let m = Matrix::from_fn(2, 3, |r, c| entries[3 * r + c].clone());
            prop_assert_eq!(parse_matrix(&matrix(&m, scalar)).unwrap(), m);
        }
    }
}

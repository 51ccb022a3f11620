//! Rotation angles: `pi/2`, `2pi/3`, `-pi`, plain degrees (`90`, `22.5deg`)
//! or radians (`0.3rad`, float backend only).

use cg_rotor_core::PiFraction;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::scalar::parse_decimal;

#[derive(Debug, Clone, PartialEq)]
pub enum Angle {
    Pi(PiFraction),
    Degrees(BigRational),
    Radians(f64),
}

impl Angle {
    pub fn parse(text: &str) -> Result<Self, String> {
        let s = text.trim().to_ascii_lowercase();
        let bad = || format!("cannot read angle {text:?}; use forms like pi/2, 2pi/3, 90 or 0.3rad");
        if let Some(r) = s.strip_suffix("rad") {
            let v: f64 = r.trim().parse().map_err(|_| bad())?;
            return if v.is_finite() { Ok(Angle::Radians(v)) } else { Err(bad()) };
        }
        if let Some((coef, rest)) = s.split_once("pi") {
            let num: i64 = match coef.trim() {
                "" | "+" => 1,
                "-" => -1,
                c => c.trim_end_matches('*').parse().map_err(|_| bad())?,
            };
            let den: i64 = match rest.trim() {
                "" => 1,
                r => r.strip_prefix('/').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?,
            };
            if den <= 0 {
                return Err(bad());
            }
            return Ok(Angle::Pi(PiFraction::new(num, den)));
        }
        let deg = s.strip_suffix("deg").or_else(|| s.strip_suffix('°')).unwrap_or(&s);
        parse_decimal(deg.trim()).map(Angle::Degrees).ok_or_else(bad)
    }

    pub fn radians(&self) -> f64 {
        match self {
            Angle::Pi(p) => p.num as f64 * std::f64::consts::PI / p.den as f64,
            Angle::Degrees(q) => q.to_f64().unwrap_or(f64::NAN).to_radians(),
            Angle::Radians(r) => *r,
        }
    }

    /// The angle as a rational multiple of `π`, when it is one.
    pub fn pi_fraction(&self) -> Option<PiFraction> {
        match self {
            Angle::Pi(p) => Some(*p),
            Angle::Degrees(q) => {
                let den = q.denom() * BigInt::from(180);
                Some(PiFraction::new(q.numer().to_i64()?, den.to_i64()?))
            }
            Angle::Radians(_) => None,
        }
    }
}

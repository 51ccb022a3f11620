//! Exact arithmetic on finite sums `Σ cᵢ·√dᵢ` with rational `cᵢ` and
//! square-free radicands `dᵢ`, plus an `f64` backend with the same interface.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Square-free radicand. `1` holds the rational part.
pub type Radicand = u128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RadixError {
    #[error("square root of a negative number")]
    NegativeRadicand,
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported divisor: {terms} radical terms (at most two are supported)")]
    UnsupportedDivisor { terms: usize },
    #[error("radicand cannot be reduced to square-free form")]
    Unfactorable,
    #[error("malformed radical expression")]
    Parse,
}

/// Trial division limit when splitting off square factors.
const TRIAL_LIMIT: u64 = 1 << 20;

/// Split `n = a²·d` with `d` square-free.
fn square_free_split(n: &BigUint) -> Result<(BigUint, Radicand), RadixError> {
    if n.is_zero() {
        return Ok((BigUint::zero(), 1));
    }
    let mut a = BigUint::one();
    let mut d: Radicand = 1;
    let mut rem = n.clone();
    let mut p: u64 = 2;
    while rem.bits() > 127 {
        if p > TRIAL_LIMIT {
            return finish_large(rem, a, d);
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rem.div_rem(&BigUint::from(p));
            if !r.is_zero() {
                break;
            }
            rem = q;
            e += 1;
        }
        if e > 0 {
            a *= BigUint::from(p).pow(e / 2);
            if e % 2 == 1 {
                d = d.checked_mul(p as u128).ok_or(RadixError::Unfactorable)?;
            }
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    let mut r: u128 = rem.to_u128().expect("fits after reduction");
    while r > 1 {
        let pp = p as u128;
        if pp * pp > r {
            d = d.checked_mul(r).ok_or(RadixError::Unfactorable)?;
            break;
        }
        if p > TRIAL_LIMIT {
            return finish_large(BigUint::from(r), a, d);
        }
        let mut e = 0u32;
        while r % pp == 0 {
            r /= pp;
            e += 1;
        }
        if e > 0 {
            a *= BigUint::from(p).pow(e / 2);
            if e % 2 == 1 {
                d = d.checked_mul(pp).ok_or(RadixError::Unfactorable)?;
            }
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    Ok((a, d))
}

// The cofactor left after trial division has no prime factor below the
// limit; it is either a perfect square, a prime, or out of reach.
fn finish_large(rem: BigUint, mut a: BigUint, d: Radicand) -> Result<(BigUint, Radicand), RadixError> {
    let s = rem.sqrt();
    if &s * &s == rem {
        a *= s;
        return Ok((a, d));
    }
    let limit = BigUint::from(TRIAL_LIMIT);
    if rem < &limit * &limit {
        let r = rem.to_u128().ok_or(RadixError::Unfactorable)?;
        let d = d.checked_mul(r).ok_or(RadixError::Unfactorable)?;
        return Ok((a, d));
    }
    Err(RadixError::Unfactorable)
}

fn smallest_prime_factor(n: Radicand) -> Radicand {
    if n % 2 == 0 {
        return 2;
    }
    let mut p: Radicand = 3;
    while p * p <= n {
        if n % p == 0 {
            return p;
        }
        p += 2;
    }
    n
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn rat_from_u128(v: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// An exact value `Σ c·√d`. The term map is canonical: radicands are
/// square-free and no coefficient is zero, so structural equality is value
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RadicalScalar {
    terms: BTreeMap<Radicand, BigRational>,
}

impl RadicalScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Self { terms }
    }

    /// `num/den` as an exact rational. Panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Canonical `√q`.
    pub fn sqrt_rational(q: &BigRational) -> Result<Self, RadixError> {
        if q.is_negative() {
            return Err(RadixError::NegativeRadicand);
        }
        if q.is_zero() {
            return Ok(Self::zero());
        }
        let n = q.numer().magnitude();
        let m = q.denom().magnitude();
        let (a, d1) = square_free_split(n)?;
        let (b, d2) = square_free_split(m)?;
        // √(a²d1 / b²d2) = a/(b·d2) · √(d1·d2); d1, d2 are coprime.
        let d = d1.checked_mul(d2).ok_or(RadixError::Unfactorable)?;
        let coef = BigRational::new(
            BigInt::from(a),
            BigInt::from(b) * BigInt::from(d2),
        );
        let mut terms = BTreeMap::new();
        terms.insert(d, coef);
        Ok(Self { terms })
    }

    /// `√n` for a nonnegative integer.
    pub fn sqrt_integer(n: u64) -> Self {
        Self::sqrt_rational(&BigRational::from_integer(BigInt::from(n)))
            .expect("u64 radicands always factor")
    }

    /// Build from arbitrary `(coefficient, radicand)` pairs; radicands need
    /// not be square-free.
    pub fn from_terms<I>(terms: I) -> Result<Self, RadixError>
    where
        I: IntoIterator<Item = (BigRational, BigUint)>,
    {
        let mut out = Self::zero();
        for (c, d) in terms {
            if d.is_zero() || c.is_zero() {
                continue;
            }
            let (a, sf) = square_free_split(&d)?;
            out.add_term(sf, c * BigRational::from_integer(BigInt::from(a)));
        }
        Ok(out)
    }

    fn add_term(&mut self, d: Radicand, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Terms in ascending radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (Radicand, &BigRational)> + '_ {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// At most one term.
    pub fn is_pure(&self) -> bool {
        self.terms.len() <= 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    /// Re-canonicalize. The representation is always canonical, so this is
    /// the identity; kept for callers that assemble term maps by hand.
    pub fn canonicalize(&self) -> Self {
        let mut out = Self::zero();
        for (d, c) in &self.terms {
            let (a, sf) = square_free_split(&BigUint::from(*d)).expect("radicand fits");
            out.add_term(sf, c * BigRational::from_integer(BigInt::from(a)));
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(d, c)| (*d, c * q)).collect(),
        }
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &rhs.terms {
                let g = gcd_u128(*d1, *d2);
                let d = (d1 / g)
                    .checked_mul(d2 / g)
                    .expect("radicand product exceeds u128");
                let mut c = c1 * c2;
                if g != 1 {
                    c *= rat_from_u128(g);
                }
                out.add_term(d, c);
            }
        }
        out
    }

    fn add_impl(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.add_term(*d, c.clone());
        }
        out
    }

    fn sub_impl(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.add_term(*d, -c.clone());
        }
        out
    }

    /// Exact quotient. The divisor may have one or two terms.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self, RadixError> {
        let inv = rhs.recip()?;
        Ok(self.mul_impl(&inv))
    }

    pub fn recip(&self) -> Result<Self, RadixError> {
        let mut it = self.terms.iter();
        match self.terms.len() {
            0 => Err(RadixError::DivisionByZero),
            1 => {
                let (d, c) = it.next().unwrap();
                // 1/(c√d) = √d / (c·d)
                let mut terms = BTreeMap::new();
                terms.insert(*d, (c * rat_from_u128(*d)).recip());
                Ok(Self { terms })
            }
            2 => {
                let (d1, c1) = it.next().unwrap();
                let (d2, c2) = it.next().unwrap();
                let norm = c1 * c1 * rat_from_u128(*d1) - c2 * c2 * rat_from_u128(*d2);
                let inv = norm.recip();
                let mut terms = BTreeMap::new();
                terms.insert(*d1, c1 * &inv);
                terms.insert(*d2, -(c2 * &inv));
                Ok(Self { terms })
            }
            n => Err(RadixError::UnsupportedDivisor { terms: n }),
        }
    }

    /// Exact sign, decided by successive elimination of one prime from the
    /// radicands: `sign(a + b√p)` follows from the signs of `a`, `b` and
    /// `a² − p·b²`, all of which live in a smaller field.
    pub fn signum(&self) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        if self.terms.len() == 1 {
            let c = self.terms.values().next().unwrap();
            return c.cmp(&BigRational::zero());
        }
        let pivot = *self.terms.keys().find(|d| **d > 1).unwrap();
        let p = smallest_prime_factor(pivot);
        let mut a = Self::zero();
        let mut b = Self::zero();
        for (d, c) in &self.terms {
            if d % p == 0 {
                b.terms.insert(d / p, c.clone());
            } else {
                a.terms.insert(*d, c.clone());
            }
        }
        let sa = a.signum();
        let sb = b.signum();
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let diff = a.mul_impl(&a).sub_impl(&b.mul_impl(&b).scale(&rat_from_u128(p)));
        match diff.signum() {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Double-precision value. Uses compensated summation and falls back to
    /// the exact sign when cancellation wipes out the leading digits.
    pub fn approx(&self) -> f64 {
        let mut parts: Vec<f64> = self
            .terms
            .iter()
            .map(|(d, c)| c.to_f64().unwrap_or(f64::NAN) * libm::sqrt(*d as f64))
            .collect();
        if parts.len() == 1 {
            return parts[0];
        }
        parts.sort_by(|x, y| x.abs().partial_cmp(&y.abs()).unwrap_or(Ordering::Equal));
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for x in &parts {
            // two-sum
            let t = sum + x;
            let bp = t - sum;
            comp += (sum - (t - bp)) + (x - bp);
            sum = t;
        }
        let value = sum + comp;
        let largest = parts.last().map(|x| x.abs()).unwrap_or(0.0);
        if parts.len() > 1 && value.abs() <= largest * 1e-8 {
            let s = self.signum();
            let agrees = match s {
                Ordering::Equal => value == 0.0,
                Ordering::Greater => value > 0.0,
                Ordering::Less => value < 0.0,
            };
            if !agrees {
                return match s {
                    Ordering::Equal => 0.0,
                    Ordering::Greater => value.abs().max(f64::MIN_POSITIVE),
                    Ordering::Less => -value.abs().max(f64::MIN_POSITIVE),
                };
            }
        }
        value
    }
}

impl fmt::Debug for RadicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Plain-text radical notation, e.g. `-1/2 + 3/7*sqrt(14)`.
impl fmt::Display for RadicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if *d == 1 {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "sqrt({})", d)?;
            } else {
                write!(f, "{}*sqrt({})", mag, d)?;
            }
        }
        Ok(())
    }
}

/// Parses the [`Display`](fmt::Display) notation. Each term is a product of
/// rationals and `sqrt(..)` factors of nonnegative rationals, e.g.
/// `3/7*sqrt(14)`, `sqrt(2)*sqrt(3)/7` or `-sqrt(1/2)`.
impl core::str::FromStr for RadicalScalar {
    type Err = RadixError;

    fn from_str(s: &str) -> Result<Self, RadixError> {
        let s: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        if s.is_empty() {
            return Err(RadixError::Parse);
        }
        let mut out = Self::zero();
        let mut i = 0;
        while i < s.len() {
            let mut neg = false;
            while i < s.len() && (s[i] == b'+' || s[i] == b'-') {
                neg ^= s[i] == b'-';
                i += 1;
            }
            let (term, next) = parse_term(&s, i)?;
            out = out + if neg { -term } else { term };
            i = next;
        }
        Ok(out)
    }
}

fn parse_uint(s: &[u8], mut i: usize) -> Result<(BigInt, usize), RadixError> {
    let start = i;
    while i < s.len() && s[i].is_ascii_digit() {
        i += 1;
    }
    if start == i {
        return Err(RadixError::Parse);
    }
    let digits = core::str::from_utf8(&s[start..i]).map_err(|_| RadixError::Parse)?;
    Ok((digits.parse().map_err(|_| RadixError::Parse)?, i))
}

// `a` or `a/b` with integers `a, b`.
fn parse_rational(s: &[u8], i: usize) -> Result<(BigRational, usize), RadixError> {
    let (n, mut i) = parse_uint(s, i)?;
    let mut d = BigInt::one();
    if i < s.len() && s[i] == b'/' && s.get(i + 1).is_some_and(u8::is_ascii_digit) {
        let (dd, j) = parse_uint(s, i + 1)?;
        if dd.is_zero() {
            return Err(RadixError::DivisionByZero);
        }
        d = dd;
        i = j;
    }
    Ok((BigRational::new(n, d), i))
}

fn parse_factor(s: &[u8], i: usize) -> Result<(RadicalScalar, usize), RadixError> {
    if s[i..].starts_with(b"sqrt(") {
        let (q, j) = parse_rational(s, i + 5)?;
        if s.get(j) != Some(&b')') {
            return Err(RadixError::Parse);
        }
        Ok((RadicalScalar::sqrt_rational(&q)?, j + 1))
    } else {
        let (q, j) = parse_rational(s, i)?;
        Ok((RadicalScalar::from_rational(q), j))
    }
}

fn parse_term(s: &[u8], i: usize) -> Result<(RadicalScalar, usize), RadixError> {
    if i >= s.len() {
        return Err(RadixError::Parse);
    }
    let (mut acc, mut i) = parse_factor(s, i)?;
    while i < s.len() && (s[i] == b'*' || s[i] == b'/') {
        if s[i] == b'*' {
            let (f, j) = parse_factor(s, i + 1)?;
            acc = &acc * &f;
            i = j;
        } else {
            let (d, j) = parse_uint(s, i + 1)?;
            if d.is_zero() {
                return Err(RadixError::DivisionByZero);
            }
            acc = acc.scale(&BigRational::new(BigInt::one(), d));
            i = j;
        }
    }
    Ok((acc, i))
}

impl Add for RadicalScalar {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (d, c) in rhs.terms {
            self.add_term(d, c);
        }
        self
    }
}

impl<'a> Add<&'a RadicalScalar> for &'a RadicalScalar {
    type Output = RadicalScalar;
    fn add(self, rhs: &RadicalScalar) -> RadicalScalar {
        self.add_impl(rhs)
    }
}

impl AddAssign<&RadicalScalar> for RadicalScalar {
    fn add_assign(&mut self, rhs: &RadicalScalar) {
        for (d, c) in &rhs.terms {
            self.add_term(*d, c.clone());
        }
    }
}

impl Sub for RadicalScalar {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (d, c) in rhs.terms {
            self.add_term(d, -c);
        }
        self
    }
}

impl<'a> Sub<&'a RadicalScalar> for &'a RadicalScalar {
    type Output = RadicalScalar;
    fn sub(self, rhs: &RadicalScalar) -> RadicalScalar {
        self.sub_impl(rhs)
    }
}

impl SubAssign<&RadicalScalar> for RadicalScalar {
    fn sub_assign(&mut self, rhs: &RadicalScalar) {
        for (d, c) in &rhs.terms {
            self.add_term(*d, -c.clone());
        }
    }
}

impl Mul for RadicalScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_impl(&rhs)
    }
}

impl<'a> Mul<&'a RadicalScalar> for &'a RadicalScalar {
    type Output = RadicalScalar;
    fn mul(self, rhs: &RadicalScalar) -> RadicalScalar {
        self.mul_impl(rhs)
    }
}

impl Neg for RadicalScalar {
    type Output = Self;
    fn neg(mut self) -> Self {
        for c in self.terms.values_mut() {
            *c = -core::mem::take(c);
        }
        self
    }
}

/// A pair `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Complex<S> {
    pub re: S,
    pub im: S,
}

/// Complex values with exact radical parts.
pub type ComplexRadical = Complex<RadicalScalar>;

impl<S: Ring> Complex<S> {
    pub fn new(re: S, im: S) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: S) -> Self {
        Self { re, im: S::zero() }
    }

    pub fn i() -> Self {
        Self { re: S::zero(), im: S::one() }
    }

    /// `iᵏ` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::from_real(S::one()),
            1 => Self::i(),
            2 => Self::from_real(-S::one()),
            _ => Self { re: S::zero(), im: -S::one() },
        }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn scale(&self, s: &S) -> Self {
        Self { re: self.re.mul_ref(s), im: self.im.mul_ref(s) }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl<S: fmt::Debug> fmt::Debug for Complex<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) + i({:?})", self.re, self.im)
    }
}

impl<S: Ring> Add for Complex<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<S: Ring> Sub for Complex<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<S: Ring> Mul for Complex<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<S: Ring> Neg for Complex<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

/// The arithmetic shared by matrix entries: scalars and complex scalars.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    /// Zero under the backend's equality rule.
    fn is_zero(&self) -> bool;
    /// Literally zero; used only to skip work.
    fn is_structural_zero(&self) -> bool {
        self.is_zero()
    }
    fn approx_eq(&self, other: &Self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }
}

/// A real scalar backend. Every higher module is generic over this.
pub trait Scalar: Ring + 'static {
    /// Whether equality is exact.
    const EXACT: bool;
    fn from_int(v: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn sqrt_rational(q: &BigRational) -> Result<Self, RadixError>;
    fn approx(&self) -> f64;
    fn try_div(&self, rhs: &Self) -> Result<Self, RadixError>;
    /// Sign relative to zero.
    fn signum(&self) -> Ordering;
    /// Convert an exact value into this backend.
    fn from_radical(r: &RadicalScalar) -> Self;
    /// Rescale a row by a positive factor to keep entries small during
    /// fraction-free elimination. The default does nothing.
    fn normalize_row(_row: &mut [Self]) {}

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `√(num/den)`.
    fn sqrt_ratio(num: u64, den: u64) -> Self {
        Self::sqrt_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
            .expect("small radicands always factor")
    }
}

impl Ring for RadicalScalar {
    fn zero() -> Self {
        RadicalScalar::zero()
    }
    fn one() -> Self {
        RadicalScalar::one()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.add_impl(rhs)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.sub_impl(rhs)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul_impl(rhs)
    }
}

impl Scalar for RadicalScalar {
    const EXACT: bool = true;
    fn from_int(v: i64) -> Self {
        Self::from_integer(v)
    }
    fn from_rational(q: &BigRational) -> Self {
        RadicalScalar::from_rational(q.clone())
    }
    fn sqrt_rational(q: &BigRational) -> Result<Self, RadixError> {
        RadicalScalar::sqrt_rational(q)
    }
    fn approx(&self) -> f64 {
        RadicalScalar::approx(self)
    }
    fn try_div(&self, rhs: &Self) -> Result<Self, RadixError> {
        self.checked_div(rhs)
    }
    fn signum(&self) -> Ordering {
        RadicalScalar::signum(self)
    }
    fn from_radical(r: &RadicalScalar) -> Self {
        r.clone()
    }
    fn normalize_row(row: &mut [Self]) {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for v in row.iter() {
            for c in v.terms.values() {
                num_gcd = num_gcd.gcd(c.numer());
                den_lcm = den_lcm.lcm(c.denom());
            }
        }
        if num_gcd.is_zero() {
            return;
        }
        let factor = BigRational::new(den_lcm, num_gcd);
        if factor.is_one() {
            return;
        }
        for v in row.iter_mut() {
            *v = v.scale(&factor);
        }
    }
}

/// Relative tolerance of the float backend.
pub const FLOAT_TOLERANCE: f64 = 1e-10;

/// `|x − y| ≤ 1e−10·max(1, |x|, |y|)`.
pub fn float_eq(x: f64, y: f64) -> bool {
    (x - y).abs() <= FLOAT_TOLERANCE * 1f64.max(x.abs()).max(y.abs())
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        self.abs() <= FLOAT_TOLERANCE
    }
    fn is_structural_zero(&self) -> bool {
        *self == 0.0
    }
    fn approx_eq(&self, other: &Self) -> bool {
        float_eq(*self, *other)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn sqrt_rational(q: &BigRational) -> Result<Self, RadixError> {
        if q.is_negative() {
            return Err(RadixError::NegativeRadicand);
        }
        Ok(libm::sqrt(q.to_f64().unwrap_or(f64::NAN)))
    }
    fn approx(&self) -> f64 {
        *self
    }
    fn try_div(&self, rhs: &Self) -> Result<Self, RadixError> {
        if *rhs == 0.0 {
            Err(RadixError::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }
    fn from_radical(r: &RadicalScalar) -> Self {
        r.approx()
    }
    fn signum(&self) -> Ordering {
        if Ring::is_zero(self) {
            Ordering::Equal
        } else if *self > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl<S: Ring> Ring for Complex<S> {
    fn zero() -> Self {
        Self { re: S::zero(), im: S::zero() }
    }
    fn one() -> Self {
        Self { re: S::one(), im: S::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn is_structural_zero(&self) -> bool {
        self.re.is_structural_zero() && self.im.is_structural_zero()
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self.re.approx_eq(&other.re) && self.im.approx_eq(&other.im)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        Self { re: self.re.add_ref(&rhs.re), im: self.im.add_ref(&rhs.im) }
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        Self { re: self.re.sub_ref(&rhs.re), im: self.im.sub_ref(&rhs.im) }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        let re = if self.im.is_structural_zero() || rhs.im.is_structural_zero() {
            self.re.mul_ref(&rhs.re)
        } else {
            self.re.mul_ref(&rhs.re).sub_ref(&self.im.mul_ref(&rhs.im))
        };
        let mut im = S::zero();
        if !self.re.is_structural_zero() && !rhs.im.is_structural_zero() {
            im = self.re.mul_ref(&rhs.im);
        }
        if !self.im.is_structural_zero() && !rhs.re.is_structural_zero() {
            im = im.add_ref(&self.im.mul_ref(&rhs.re));
        }
        Self { re, im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }
    fn r(n: i64, d: i64) -> RadicalScalar {
        RadicalScalar::ratio(n, d)
    }
    fn sq(n: u64) -> RadicalScalar {
        RadicalScalar::sqrt_integer(n)
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(RadicalScalar::sqrt_rational(&q(9, 4)).unwrap(), r(3, 2));
        let s = RadicalScalar::sqrt_rational(&q(2, 7)).unwrap();
        assert_eq!(s.terms().collect::<Vec<_>>(), vec![(14, &q(1, 7))]);
        assert!(RadicalScalar::sqrt_rational(&q(0, 1)).unwrap().is_zero());
        assert_eq!(
            RadicalScalar::sqrt_rational(&q(-1, 2)),
            Err(RadixError::NegativeRadicand)
        );
    }

    #[test]
    fn add_examples() {
        assert_eq!(sq(2) + sq(2), sq(2) * r(2, 1));
        assert!((sq(2) + (-sq(2))).is_zero());
        let v = r(1, 2) + sq(3) * r(1, 2);
        assert_eq!(v.terms().collect::<Vec<_>>(), vec![(1, &q(1, 2)), (3, &q(1, 2))]);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(sq(2) * sq(2), r(2, 1));
        assert_eq!(sq(6) * sq(10), sq(15) * r(2, 1));
        assert_eq!((r(1, 1) + sq(3)) * (r(1, 1) - sq(3)), r(-2, 1));
    }

    #[test]
    fn div_examples() {
        assert_eq!(sq(6).checked_div(&sq(2)).unwrap(), sq(3));
        let inv = r(1, 1).checked_div(&(r(1, 1) + sq(3))).unwrap();
        assert_eq!(inv, (r(-1, 1) + sq(3)) * r(1, 2));
        let three = sq(2) + sq(3) + sq(5);
        assert_eq!(
            r(1, 1).checked_div(&three),
            Err(RadixError::UnsupportedDivisor { terms: 3 })
        );
        assert_eq!(r(1, 1).checked_div(&r(0, 1)), Err(RadixError::DivisionByZero));
    }

    #[test]
    fn approx_examples() {
        assert!((sq(2).approx() - core::f64::consts::SQRT_2).abs() < 1e-12);
        assert_eq!(RadicalScalar::zero().approx(), 0.0);
        let v = RadicalScalar::sqrt_rational(&q(2, 7)).unwrap();
        assert!((v.approx() - libm::sqrt(2.0 / 7.0)).abs() < 1e-12);
    }

    #[test]
    fn exact_sign() {
        assert_eq!((sq(2) + sq(3) - sq(10)).signum(), Ordering::Less);
        assert_eq!((sq(2) + sq(3) - r(3, 1)).signum(), Ordering::Greater);
        assert_eq!((sq(8) - sq(2) * r(2, 1)).signum(), Ordering::Equal);
        // √2 + √3 ≈ 3.14626 versus 3.14626437: nearly equal values
        let close = sq(2) + sq(3) - r(314626437, 100000000);
        assert_eq!(close.signum(), Ordering::Less);
    }

    #[test]
    fn large_square_factors() {
        let big = BigUint::from(10u32).pow(40) * BigUint::from(6u32);
        let v = RadicalScalar::from_terms([(q(1, 1), big)]).unwrap();
        assert_eq!(v, sq(6) * RadicalScalar::from_rational(BigRational::from_integer(BigInt::from(10u64.pow(10)) * BigInt::from(10u64.pow(10)))));
    }

    #[test]
    fn complex_powers_of_i() {
        let i = Complex::<RadicalScalar>::i();
        assert_eq!(i.clone() * i.clone(), Complex::from_real(r(-1, 1)));
        assert_eq!(Complex::<RadicalScalar>::i_pow(-1), i.conj());
    }

    #[test]
    fn display() {
        let v = r(-1, 2) + sq(14) * r(3, 7) - sq(3);
        assert_eq!(alloc::format!("{}", v), "-1/2 - sqrt(3) + 3/7*sqrt(14)");
    }
}

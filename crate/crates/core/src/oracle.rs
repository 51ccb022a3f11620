//! Independent Clebsch-Gordan values from the Racah sum, moved to the
//! h-basis, for cross-checking the three-stage algorithm.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cg::{e_to_h, CgFamily, FamilyKey};
use crate::irreps::{check_index, check_triangle, dim, factorial, BasisKind, Weight};
use crate::matrix::Matrix;
use crate::radix::{Complex, RadicalScalar, Ring, Scalar};
use crate::Error;

fn fact(n: i64) -> BigUint {
    factorial(n as u32)
}

/// Condon–Shortley coefficient `⟨N₁ n₁ N₂ n₂ | N n⟩`, exactly.
pub fn racah_exact(n1: Weight, m1: i64, n2: Weight, m2: i64, n: Weight, m: i64) -> Result<RadicalScalar, Error> {
    check_index(n1, m1)?;
    check_index(n2, m2)?;
    check_index(n, m)?;
    if m1 + m2 != m || check_triangle(n1, n2, n).is_err() {
        return Ok(RadicalScalar::zero());
    }
    let (j1, j2, j) = (n1 as i64, n2 as i64, n as i64);
    let pre_num = BigUint::from((2 * j + 1) as u64)
        * fact(j + j1 - j2)
        * fact(j - j1 + j2)
        * fact(j1 + j2 - j)
        * fact(j + m)
        * fact(j - m)
        * fact(j1 - m1)
        * fact(j1 + m1)
        * fact(j2 - m2)
        * fact(j2 + m2);
    let pre_den = fact(j1 + j2 + j + 1);
    let mut sum = BigRational::zero();
    for k in 0..=(j1 + j2 - j) {
        let args = [k, j1 + j2 - j - k, j1 - m1 - k, j2 + m2 - k, j - j2 + m1 + k, j - j1 - m2 + k];
        if args.iter().any(|a| *a < 0) {
            continue;
        }
        let den = args.iter().fold(BigUint::one(), |acc, a| acc * fact(*a));
        let term = BigRational::new(BigInt::one(), BigInt::from(den));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let root = RadicalScalar::sqrt_rational(&BigRational::new(BigInt::from(pre_num), BigInt::from(pre_den)))?;
    let value = root.scale(&sum);
    if !value.is_pure() {
        return Err(Error::Invariant("Racah sum did not collapse to a single radical"));
    }
    Ok(value)
}

/// [`racah_exact`] in the requested backend.
pub fn racah_coefficient<S: Scalar>(n1: Weight, m1: i64, n2: Weight, m2: i64, n: Weight, m: i64) -> Result<S, Error> {
    Ok(S::from_radical(&racah_exact(n1, m1, n2, m2, n, m)?))
}

/// e-basis family from the Racah sum, moved to the h-basis.
pub fn oracle_family_h<S: Scalar>(key: FamilyKey) -> Result<CgFamily<S>, Error> {
    check_triangle(key.n1, key.n2, key.n)?;
    let (w1, w2) = (key.n1 as i64, key.n2 as i64);
    let big_n = key.n as i64;
    let mut mats = Vec::with_capacity(dim(key.n));
    for m in -big_n..=big_n {
        let mut c = Matrix::zeros(dim(key.n1), dim(key.n2));
        for a in -w1..=w1 {
            let b = m - a;
            if b.abs() <= w2 {
                let v: S = racah_coefficient(key.n1, a, key.n2, b, key.n, m)?;
                c.set_at(a, b, Complex::from_real(v));
            }
        }
        mats.push(c);
    }
    e_to_h(&CgFamily::new(key, BasisKind::E, mats))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleStatus {
    Match,
    Mismatch,
}

/// Location of the first disagreeing entry: family index `n` and weight
/// labels `(n₁, n₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntryIndex {
    pub n: i64,
    pub n1: i64,
    pub n2: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub key: FamilyKey,
    pub global_sign: i8,
    pub max_discrepancy: f64,
    pub status: OracleStatus,
    pub first_mismatch: Option<EntryIndex>,
}

fn labelled<T: Ring>(fam: &CgFamily<T>) -> impl Iterator<Item = (EntryIndex, &T)> {
    fam.iter().flat_map(|(n, m)| {
        let (w1, w2) = (m.row_weight(), m.col_weight());
        (-w1..=w1).flat_map(move |a| (-w2..=w2).map(move |b| (EntryIndex { n, n1: a, n2: b }, m.at(a, b))))
    })
}

/// Compare two h-basis families up to one global sign, fixed by the first
/// entry where the oracle is nonzero.
pub fn compare<S: Scalar>(main: &CgFamily<S>, oracle: &CgFamily<S>) -> Result<OracleReport, Error> {
    if main.key() != oracle.key() {
        return Err(Error::Domain("compared families have different keys".into()));
    }
    let (_, anchor) = labelled(oracle)
        .zip(labelled(main))
        .find(|((_, o), _)| !o.is_zero())
        .map(|((i, o), (_, m))| (i, (o.clone(), m.clone())))
        .ok_or(Error::Invariant("oracle family is identically zero"))?;
    let sign: i8 = if anchor.1.approx_eq(&-anchor.0.clone()) && !anchor.1.approx_eq(&anchor.0) { -1 } else { 1 };
    let mut max_discrepancy = 0f64;
    let mut first_mismatch = None;
    for ((idx, o), (_, m)) in labelled(oracle).zip(labelled(main)) {
        let want = if sign < 0 { -o.clone() } else { o.clone() };
        let diff = m.sub_ref(&want).approx().abs();
        if diff > max_discrepancy {
            max_discrepancy = diff;
        }
        if first_mismatch.is_none() && !m.approx_eq(&want) {
            first_mismatch = Some(idx);
        }
    }
    Ok(OracleReport {
        key: main.key(),
        global_sign: sign,
        max_discrepancy,
        status: if first_mismatch.is_none() { OracleStatus::Match } else { OracleStatus::Mismatch },
        first_mismatch,
    })
}

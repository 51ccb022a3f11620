//! Weights, normalization constants, the `U_N`/`V_N` basis changes,
//! infinitesimal operators and representation matrices in the h-basis.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::cg::{CgEngine, FamilyKey};
use crate::matrix::Matrix;
use crate::radix::{Complex, Ring, Scalar};
use crate::Error;

/// Irrep weight `N`; the representation space has dimension `2N+1`.
pub type Weight = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisKind {
    /// Complex basis on which `J₀` is diagonal.
    E,
    /// Real orthogonal basis.
    H,
}

pub fn dim(n: Weight) -> usize {
    2 * n as usize + 1
}

pub fn factorial(n: u32) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

fn fact_i(n: i64) -> BigUint {
    factorial(u32::try_from(n).expect("nonnegative factorial argument"))
}

pub(crate) fn check_index(n: Weight, m: i64) -> Result<(), Error> {
    if m.unsigned_abs() > n as u64 {
        Err(Error::Index { weight: n, index: m })
    } else {
        Ok(())
    }
}

pub(crate) fn check_triangle(n1: Weight, n2: Weight, n: Weight) -> Result<(), Error> {
    if n1.abs_diff(n2) <= n && n <= n1 + n2 {
        Ok(())
    } else {
        Err(Error::Triangle { n1, n2, n })
    }
}

/// `ρ̃(N,n)² = (2N+1)!/((N+n)!(N−n)!)`, always an integer.
pub(crate) fn rho_tilde_sq(n: Weight, m: i64) -> BigUint {
    let big_n = n as i64;
    fact_i(2 * big_n + 1) / (fact_i(big_n + m) * fact_i(big_n - m))
}

/// `ρ̃(N,n) = (−1)^{N+n}·√((2N+1)!/((N+n)!(N−n)!))`.
pub fn rho_tilde<S: Scalar>(n: Weight, m: i64) -> Result<S, Error> {
    check_index(n, m)?;
    let mag = S::sqrt_rational(&BigRational::from_integer(BigInt::from(rho_tilde_sq(n, m))))?;
    Ok(if (n as i64 + m) % 2 == 0 { mag } else { -mag })
}

pub(crate) fn rho_sq(n: Weight, n1: Weight, n2: Weight) -> BigRational {
    let (n, n1, n2) = (n as i64, n1 as i64, n2 as i64);
    let num = fact_i(2 * n1 + 1) * fact_i(n1 + n2 - n) * fact_i(n + n1 - n2);
    let den = fact_i(2 * n)
        * fact_i(2 * n2 + 1)
        * fact_i(n + n1 + n2 + 1)
        * fact_i(n - n1 + n2);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The coupling normalization `ρ(N,N₁,N₂)`.
pub fn rho<S: Scalar>(n: Weight, n1: Weight, n2: Weight) -> Result<S, Error> {
    check_triangle(n1, n2, n)?;
    Ok(S::sqrt_rational(&rho_sq(n, n1, n2))?)
}

/// The bispinor normalization `ρ̂(N,N₁,N₂)`. Not used by the algorithm.
pub fn rho_hat<S: Scalar>(n: Weight, n1: Weight, n2: Weight) -> Result<S, Error> {
    check_triangle(n1, n2, n)?;
    let (n, n1, n2) = (n as i64, n1 as i64, n2 as i64);
    let num = fact_i(2 * n1 + 1) * fact_i(2 * n2 + 1) * fact_i(n + n1 - n2);
    let den = fact_i(2 * n)
        * fact_i(n1 + n2 - n)
        * fact_i(n - n1 + n2)
        * fact_i(n + n1 + n2 + 1);
    Ok(S::sqrt_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))?)
}

/// `U_N`, columns labelled by the h-basis index. Prefactor `(−i)^{N−1}/√2`.
pub fn u_matrix<S: Scalar>(n: Weight) -> Matrix<Complex<S>> {
    let d = dim(n);
    let mut u = Matrix::zeros(d, d);
    let pf = Complex::<S>::i_pow(-(n as i64 - 1)).scale(&S::sqrt_ratio(1, 2));
    let i = Complex::<S>::i();
    for k in 1..=n as i64 {
        let sgn = if k % 2 == 0 { S::one() } else { -S::one() };
        u.set_at(k, -k, pf.scale(&sgn));
        u.set_at(-k, -k, -pf.clone());
        u.set_at(k, k, pf.mul_ref(&i).scale(&sgn));
        u.set_at(-k, k, pf.mul_ref(&i));
    }
    let center = Complex::new(S::zero(), -S::sqrt_ratio(2, 1));
    u.set_at(0, 0, pf.mul_ref(&center));
    u
}

/// `V_N = U_N^{-1} = U_N^*`.
pub fn v_matrix<S: Scalar>(n: Weight) -> Matrix<Complex<S>> {
    u_matrix::<S>(n).conj_transpose()
}

/// Signs `P = diag(1, −1, 1)` relating the weight-1 h-basis to Cartesian
/// coordinates `(x₋₁, x₀, x₁)`: `ρ₁(U) = P·U·P`.
pub const AXIS_CALIBRATION: [i8; 3] = [1, -1, 1];

/// `ρ₁(U) = P·U·P`.
pub fn weight_one_rep<S: Scalar>(u: &Matrix<S>) -> Matrix<S> {
    Matrix::from_fn(3, 3, |r, c| {
        let v = u.get(r, c).clone();
        if AXIS_CALIBRATION[r] * AXIS_CALIBRATION[c] < 0 {
            -v
        } else {
            v
        }
    })
}

/// Infinitesimal operator `J_j^N` in the h-basis.
///
/// `J_{±1}^N = −√(N(N+1)(2N+1)/3)·G^{±1}_{1[N,N]}`; `J₀` pairs `h^{−n}` with
/// `h^{n}`: `(J₀)_{−n,n} = n`, `(J₀)_{n,−n} = −n`.
pub fn infinitesimal_h<S: Scalar>(engine: &mut CgEngine<S>, n: Weight, j: i8) -> Result<Matrix<S>, Error> {
    match j {
        0 => {
            let d = dim(n);
            let mut m = Matrix::zeros(d, d);
            for k in 1..=n as i64 {
                m.set_at(-k, k, S::from_int(k));
                m.set_at(k, -k, S::from_int(-k));
            }
            Ok(m)
        }
        -1 | 1 => Ok(engine.adjoint_generator(n, j)?.clone()),
        _ => Err(Error::Domain("generator index must be -1, 0 or 1".into())),
    }
}

/// Coordinate axes `x₋₁`, `x₀`, `x₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    M1,
    Zero,
    P1,
}

impl Axis {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "m1" | "-1" => Some(Axis::M1),
            "0" => Some(Axis::Zero),
            "p1" | "1" | "+1" => Some(Axis::P1),
            _ => None,
        }
    }

    /// The index `j` with `d/dω ρ_N(axis_rotation(self, ω))|₀ = J_j^N`.
    pub fn generator_index(self) -> i8 {
        match self {
            Axis::M1 => 1,
            Axis::Zero => 0,
            Axis::P1 => -1,
        }
    }
}

/// Rotation by `θ` about one of the coordinate axes, given `cos θ` and
/// `sin θ`. About `x₋₁` this is `[[c, −s, 0], [s, c, 0], [0, 0, 1]]`; the
/// other two axes are the cyclic analogues.
///
/// Deviator coordinates of a Cartesian tensor move as
/// `s(U·T·Uᵀ) = ρ₂(P·U·P)·s(T)` with `P` from [`AXIS_CALIBRATION`]; about
/// `x₋₁` this reads `s(UᵀTU) = ρ₂(U)·s(T)`.
pub fn axis_rotation<S: Scalar>(axis: Axis, cos: S, sin: S) -> Matrix<S> {
    let (o, z) = (S::one(), S::zero());
    let (c, s, ms) = (cos.clone(), sin.clone(), -sin);
    let rows = match axis {
        Axis::M1 => [[c.clone(), ms, z.clone()], [s, c, z.clone()], [z.clone(), z, o]],
        Axis::Zero => [[c.clone(), z.clone(), s], [z.clone(), o, z.clone()], [ms, z, c]],
        Axis::P1 => [[o, z.clone(), z.clone()], [z.clone(), c.clone(), ms], [z, s, c]],
    };
    Matrix::from_rows(rows.into_iter().map(|r| r.to_vec()).collect())
}

/// Angle given as a rational multiple of `π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PiFraction {
    pub num: i64,
    pub den: i64,
}

impl PiFraction {
    pub fn new(num: i64, den: i64) -> Self {
        Self { num, den }
    }

    /// Exact `(cos, sin)` for multiples of `π/4` and `π/6`.
    pub fn cos_sin<S: Scalar>(&self) -> Result<(S, S), Error> {
        if self.den == 0 {
            return Err(Error::Domain("angle denominator is zero".into()));
        }
        // Work in units of π/12.
        let twelfths = self.num * 12;
        if twelfths % self.den != 0 {
            return Err(Error::UnsupportedAngle);
        }
        let k = (twelfths / self.den).rem_euclid(24);
        if k % 3 != 0 && k % 2 != 0 {
            return Err(Error::UnsupportedAngle);
        }
        Ok((cos_twelfths(k), cos_twelfths(k - 6)))
    }
}

// cos(kπ/12) for k a multiple of 2 or 3.
fn cos_twelfths<S: Scalar>(k: i64) -> S {
    let k = k.rem_euclid(24);
    let k = if k > 12 { 24 - k } else { k };
    let (k, neg) = if k > 6 { (12 - k, true) } else { (k, false) };
    let v = match k {
        0 => S::one(),
        2 => S::sqrt_ratio(3, 4),
        3 => S::sqrt_ratio(1, 2),
        4 => S::ratio(1, 2),
        6 => S::zero(),
        _ => unreachable!("angle checked by caller"),
    };
    if neg {
        -v
    } else {
        v
    }
}

/// Checks `UᵀU = I` and `det U = 1`.
pub fn check_rotation<S: Scalar>(u: &Matrix<S>) -> Result<(), Error> {
    if u.shape() != (3, 3) {
        return Err(Error::NotRotation("expected a 3x3 matrix"));
    }
    if !u.is_orthogonal() {
        return Err(Error::NotRotation("matrix is not orthogonal"));
    }
    if !det3(u).approx_eq(&S::one()) {
        return Err(Error::NotRotation("determinant is not 1"));
    }
    Ok(())
}

pub fn det3<S: Scalar>(u: &Matrix<S>) -> S {
    let g = |r, c| u.get(r, c).clone();
    g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
        + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
}

/// `ρ_N(U)` in the h-basis for `N ≤ max`, lifted weight by weight:
/// `(ρ_N)_{mn} = tr((G^m)ᵀ·ρ_{N−1}·G^n·ρ₁ᵀ)` with `G = G_{N[N−1,1]}`.
pub fn rep_matrices<S: Scalar>(engine: &mut CgEngine<S>, max: Weight, u: &Matrix<S>) -> Result<Vec<Matrix<S>>, Error> {
    check_rotation(u)?;
    let r1 = weight_one_rep(u);
    let r1t = r1.transpose();
    let mut reps = Vec::with_capacity(max as usize + 1);
    reps.push(Matrix::identity(1));
    if max >= 1 {
        reps.push(r1);
    }
    for n in 2..=max {
        let fam = engine.family(FamilyKey::new(n - 1, 1, n)?)?;
        let prev = &reps[n as usize - 1];
        let moved: Vec<Matrix<S>> = fam.matrices().iter().map(|g| prev.matmul(g).matmul(&r1t)).collect();
        let d = dim(n);
        let rep = Matrix::from_fn(d, d, |r, c| fam.matrices()[r].frobenius_dot(&moved[c]));
        reps.push(rep);
    }
    Ok(reps)
}

/// `ρ_N(U)` in the h-basis.
pub fn rep_matrix<S: Scalar>(engine: &mut CgEngine<S>, n: Weight, u: &Matrix<S>) -> Result<Matrix<S>, Error> {
    let mut reps = rep_matrices(engine, n, u)?;
    Ok(reps.pop().expect("at least weight 0"))
}

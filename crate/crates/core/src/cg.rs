//! Clebsch-Gordan families by the three-stage algorithm.
//!
//! Stage 1 evaluates the single nonzero diagonal of the extreme e-basis
//! matrices `C^{±N}` in closed form. Stage 2 moves them to the h-basis with
//! the `V` transforms. Stage 3 descends to `G^{±(N−1)}, …, G⁰` with the
//! infinitesimal operators of the Kronecker product, which are themselves
//! built from the `(M, M, 1)` families produced by stages 1–2 alone.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::irreps::{check_triangle, dim, rho_sq, rho_tilde_sq, u_matrix, v_matrix, BasisKind, Weight};
use crate::matrix::Matrix;
use crate::radix::{Complex, Ring, Scalar};
use crate::Error;

/// Weights `(N₁, N₂)` of the factors and `N` of the component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyKey {
    pub n1: Weight,
    pub n2: Weight,
    pub n: Weight,
}

impl FamilyKey {
    pub fn new(n1: Weight, n2: Weight, n: Weight) -> Result<Self, Error> {
        check_triangle(n1, n2, n)?;
        Ok(Self { n1, n2, n })
    }

    /// `N + N₁ + N₂` odd: the family is antisymmetric under the weight swap.
    pub fn is_odd(&self) -> bool {
        (self.n + self.n1 + self.n2) % 2 == 1
    }

    pub fn swapped(&self) -> Self {
        Self { n1: self.n2, n2: self.n1, n: self.n }
    }

    pub fn shape(&self) -> (usize, usize) {
        (dim(self.n1), dim(self.n2))
    }
}

/// All keys `(N₁, N₂, N)` with `N = |N₁−N₂|..N₁+N₂`.
pub fn admissible(n1: Weight, n2: Weight) -> impl Iterator<Item = FamilyKey> {
    (n1.abs_diff(n2)..=n1 + n2).map(move |n| FamilyKey { n1, n2, n })
}

/// Every admissible key with `N₁, N₂ ≤ max`.
pub fn keys_up_to(max: Weight) -> Vec<FamilyKey> {
    let mut out = Vec::new();
    for n1 in 0..=max {
        for n2 in 0..=max {
            out.extend(admissible(n1, n2));
        }
    }
    out
}

/// The matrices `{M^n : n = −N..N}` of one family.
#[derive(Debug, Clone, PartialEq)]
pub struct CgFamily<T> {
    key: FamilyKey,
    basis: BasisKind,
    matrices: Vec<Matrix<T>>,
}

impl<T: Ring> CgFamily<T> {
    /// Panics unless there are `2N+1` matrices of the key's shape.
    pub fn new(key: FamilyKey, basis: BasisKind, matrices: Vec<Matrix<T>>) -> Self {
        assert_eq!(matrices.len(), dim(key.n), "family size");
        assert!(matrices.iter().all(|m| m.shape() == key.shape()), "family shape");
        Self { key, basis, matrices }
    }

    pub fn key(&self) -> FamilyKey {
        self.key
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    /// Matrices in order `n = −N..N`.
    pub fn matrices(&self) -> &[Matrix<T>] {
        &self.matrices
    }

    pub fn get(&self, n: i64) -> &Matrix<T> {
        &self.matrices[(n + self.key.n as i64) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Matrix<T>)> {
        let big_n = self.key.n as i64;
        self.matrices.iter().enumerate().map(move |(i, m)| (i as i64 - big_n, m))
    }

    /// `M^n` vanishes at `(n₁, n₂)` unless `allowed(n, n₁, n₂)`.
    fn supported_on(&self, allowed: impl Fn(i64, i64, i64) -> bool) -> bool {
        self.iter().all(|(n, m)| {
            let (w1, w2) = (m.row_weight(), m.col_weight());
            (-w1..=w1).all(|a| (-w2..=w2).all(|b| allowed(n, a, b) || m.at(a, b).is_zero()))
        })
    }
}

impl<S: Scalar> CgFamily<S> {
    /// First pair `(n, m)` with `tr((G^n)ᵀG^m) ≠ δ_{nm}`.
    pub fn orthonormality_defect(&self) -> Option<(i64, i64)> {
        for (n, a) in self.iter() {
            for (m, b) in self.iter().filter(|(m, _)| *m >= n) {
                let want = if n == m { S::one() } else { S::zero() };
                if !a.frobenius_dot(b).approx_eq(&want) {
                    return Some((n, m));
                }
            }
        }
        None
    }

    /// `G^n` is nonzero only where `|n| = |n₁|+|n₂|` or `|n| = ||n₁|−|n₂||`.
    pub fn has_h_support(&self) -> bool {
        self.supported_on(|n, a, b| {
            let (n, a, b) = (n.abs(), a.abs(), b.abs());
            n == a + b || n == (a - b).abs()
        })
    }
}

impl<S: Scalar> CgFamily<Complex<S>> {
    /// `C^n` is nonzero only on `n₁+n₂ = n`.
    pub fn has_e_support(&self) -> bool {
        self.supported_on(|n, a, b| a + b == n)
    }
}

/// An h-basis family (shared from the cache) or an e-basis family.
#[derive(Debug, Clone)]
pub enum AnyFamily<S: Scalar> {
    H(Arc<CgFamily<S>>),
    E(CgFamily<Complex<S>>),
}

fn ascending_product(lo: i64, hi: i64) -> BigUint {
    (lo.max(1)..=hi).fold(BigUint::one(), |acc, k| acc * BigUint::from(k as u64))
}

fn signed_sqrt<S: Scalar>(q: BigRational, negative: bool) -> Result<S, Error> {
    let v = S::sqrt_rational(&q)?;
    Ok(if negative { -v } else { v })
}

fn big(v: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn require_positive(key: FamilyKey) -> Result<(), Error> {
    if key.n == 0 {
        Err(Error::Domain("the extreme diagonals need N >= 1; N = 0 is handled by stage1_zero".into()))
    } else {
        Ok(())
    }
}

/// `C^{+N}`: entries at `(N−k, k)` for `k = N−N₁..N₂`,
/// `(−1)^{N₂−k}·ρ·ρ̃(N₂,−k)/ρ̃(N₁,N−k)·√(2N+1)·[(N+N₁−N₂+1)⋯(2N)]·[(N₁−N+k+1)⋯(N₂+k)]`.
pub fn stage1_top_diagonal<S: Scalar>(key: FamilyKey) -> Result<Matrix<S>, Error> {
    check_triangle(key.n1, key.n2, key.n)?;
    require_positive(key)?;
    let (n, n1, n2) = (key.n as i64, key.n1 as i64, key.n2 as i64);
    let (rows, cols) = key.shape();
    let mut c = Matrix::zeros(rows, cols);
    let p1 = big(ascending_product(n + n1 - n2 + 1, 2 * n));
    let base = rho_sq(key.n, key.n1, key.n2) * BigRational::from_integer(BigInt::from(2 * n + 1)) * &p1 * &p1;
    for k in (n - n1)..=n2 {
        let p2 = big(ascending_product(n1 - n + k + 1, n2 + k));
        let q = &base * big(rho_tilde_sq(key.n2, -k)) / big(rho_tilde_sq(key.n1, n - k)) * &p2 * &p2;
        // (−1)^{N₂−k} times the signs of the two ρ̃ factors.
        let negative = (n1 + n - k).rem_euclid(2) == 1;
        c.set_at(n - k, k, signed_sqrt(q, negative)?);
    }
    Ok(c)
}

/// `C^{−N}`: entries at `(−N−k, k)` for `k = −N₂..N₁−N`.
///
/// The closed form mirrors the top diagonal, with the extra factor
/// `(−1)^{N+N₁+N₂}`. Without it the stage-2 output is purely imaginary for
/// odd `N+N₁+N₂`, and it disagrees with the Racah coefficients by exactly
/// that sign.
pub fn stage1_bottom_diagonal<S: Scalar>(key: FamilyKey) -> Result<Matrix<S>, Error> {
    check_triangle(key.n1, key.n2, key.n)?;
    require_positive(key)?;
    let (n, n1, n2) = (key.n as i64, key.n1 as i64, key.n2 as i64);
    let (rows, cols) = key.shape();
    let mut c = Matrix::zeros(rows, cols);
    let p1 = big(ascending_product(n + n1 - n2 + 1, 2 * n));
    let base = rho_sq(key.n, key.n1, key.n2) * BigRational::from_integer(BigInt::from(2 * n + 1)) * &p1 * &p1;
    for k in -n2..=(n1 - n) {
        let p2 = big(ascending_product(n1 - n - k + 1, n2 - k));
        let q = &base * big(rho_tilde_sq(key.n2, -k)) / big(rho_tilde_sq(key.n1, -n - k)) * &p2 * &p2;
        let negative = (n1 - n - k + n + n1 + n2).rem_euclid(2) == 1;
        c.set_at(-n - k, k, signed_sqrt(q, negative)?);
    }
    Ok(c)
}

/// `C⁰_{0[N₁,N₁]}`: anti-diagonal `(−1)^{N₁−k}/√(2N₁+1)` at `(−k, k)`.
pub fn stage1_zero<S: Scalar>(n1: Weight) -> Matrix<S> {
    let d = dim(n1);
    let mut c = Matrix::zeros(d, d);
    let mag = S::sqrt_ratio(1, d as u64);
    for k in -(n1 as i64)..=n1 as i64 {
        let v = if (n1 as i64 - k).rem_euclid(2) == 0 { mag.clone() } else { -mag.clone() };
        c.set_at(-k, k, v);
    }
    c
}

fn require_real<S: Scalar>(m: Matrix<Complex<S>>, what: &'static str) -> Result<Matrix<S>, Error> {
    if m.imag_part().is_zero() {
        Ok(m.real_part())
    } else {
        Err(Error::Invariant(what))
    }
}

fn check_shape<T: Ring>(m: &Matrix<T>, shape: (usize, usize)) -> Result<(), Error> {
    if m.shape() == shape {
        Ok(())
    } else {
        Err(Error::Shape { expected: shape, found: m.shape() })
    }
}

/// Stage 2 for `N ≥ 1`: returns `(G^{+N}, G^{−N})`.
///
/// `G^{N} = −(−i)^N/√2 · V_{N₁}{(−1)^N C^N + C^{−N}}V_{N₂}ᵀ`,
/// `G^{−N} = (−i)^{N−1}/√2 · V_{N₁}{(−1)^N C^N − C^{−N}}V_{N₂}ᵀ`.
pub fn stage2_to_h<S: Scalar>(
    cp: &Matrix<S>,
    cm: &Matrix<S>,
    key: FamilyKey,
) -> Result<(Matrix<S>, Matrix<S>), Error> {
    require_positive(key)?;
    check_shape(cp, key.shape())?;
    check_shape(cm, key.shape())?;
    let v1 = v_matrix::<S>(key.n1);
    let v2t = v_matrix::<S>(key.n2).transpose();
    let n = key.n as i64;
    let signed_cp = if n % 2 == 0 { cp.clone() } else { cp.neg() };
    let sum = signed_cp.add(cm).to_complex();
    let diff = signed_cp.sub(cm).to_complex();
    let half = S::sqrt_ratio(1, 2);
    let a = (-Complex::<S>::i_pow(-n)).scale(&half);
    let b = Complex::<S>::i_pow(-(n - 1)).scale(&half);
    let gp = v1.matmul(&sum).matmul(&v2t).scale(&a);
    let gm = v1.matmul(&diff).matmul(&v2t).scale(&b);
    Ok((
        require_real(gp, "stage 2 produced a non-real G^{+N}")?,
        require_real(gm, "stage 2 produced a non-real G^{-N}")?,
    ))
}

/// Stage 2 for `N = 0`: `G⁰ = V_{N₁}·C⁰·V_{N₁}ᵀ`.
pub fn stage2_zero<S: Scalar>(c0: &Matrix<S>, n1: Weight) -> Result<Matrix<S>, Error> {
    check_shape(c0, (dim(n1), dim(n1)))?;
    let v = v_matrix::<S>(n1);
    let g = v.matmul(&c0.to_complex()).matmul(&v.transpose());
    require_real(g, "stage 2 produced a non-real G^0")
}

/// Output of one descending step.
#[derive(Debug, Clone, PartialEq)]
pub enum Stage3Output<S> {
    /// `(G^{−(n−1)}, G^{n−1})` for `n ≥ 2`.
    Pair(Matrix<S>, Matrix<S>),
    /// `G⁰` for `n = 1`.
    Center(Matrix<S>),
}

/// Caches the adjoint bootstrap and computed h-basis families for one
/// scalar backend.
#[derive(Debug, Clone)]
pub struct CgEngine<S: Scalar> {
    bootstrap: BTreeMap<Weight, (Matrix<S>, Matrix<S>)>,
    generators: BTreeMap<Weight, [Matrix<S>; 2]>,
    families: BTreeMap<FamilyKey, Arc<CgFamily<S>>>,
}

impl<S: Scalar> Default for CgEngine<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> CgEngine<S> {
    pub fn new() -> Self {
        Self { bootstrap: BTreeMap::new(), generators: BTreeMap::new(), families: BTreeMap::new() }
    }

    /// `(G^{−1}_{1[M,M]}, G^{+1}_{1[M,M]})` from stages 1–2 only.
    pub fn bootstrap_adjoint(&mut self, m: Weight) -> Result<(Matrix<S>, Matrix<S>), Error> {
        if m == 0 {
            return Err(Error::Domain("the adjoint bootstrap needs M >= 1".into()));
        }
        if let Some(pair) = self.bootstrap.get(&m) {
            return Ok(pair.clone());
        }
        let key = FamilyKey::new(m, m, 1)?;
        let (gp, gm) = stage2_to_h(&stage1_top_diagonal(key)?, &stage1_bottom_diagonal(key)?, key)?;
        self.bootstrap.insert(m, (gm.clone(), gp.clone()));
        Ok((gm, gp))
    }

    /// `J_j^M = −√(M(M+1)(2M+1)/3)·G^j_{1[M,M]}` for `j = ±1`; zero for `M = 0`.
    pub fn adjoint_generator(&mut self, m: Weight, j: i8) -> Result<&Matrix<S>, Error> {
        if j != 1 && j != -1 {
            return Err(Error::Domain("adjoint generators exist for j = -1 and j = +1".into()));
        }
        if !self.generators.contains_key(&m) {
            let pair = if m == 0 {
                [Matrix::zeros(1, 1), Matrix::zeros(1, 1)]
            } else {
                let (gm, gp) = self.bootstrap_adjoint(m)?;
                let mm = m as i64;
                let scale = -S::sqrt_rational(&BigRational::new(
                    BigInt::from(mm * (mm + 1) * (2 * mm + 1)),
                    BigInt::from(3),
                ))?;
                [gm.scale(&scale), gp.scale(&scale)]
            };
            self.generators.insert(m, pair);
        }
        let pair = &self.generators[&m];
        Ok(if j < 0 { &pair[0] } else { &pair[1] })
    }

    /// `J^{N₁×N₂}_j B = J_j^{N₁}·B + B·(J_j^{N₂})ᵀ`.
    pub fn kron_infinitesimal(&mut self, n1: Weight, n2: Weight, j: i8, b: &Matrix<S>) -> Result<Matrix<S>, Error> {
        check_shape(b, (dim(n1), dim(n2)))?;
        let left = self.adjoint_generator(n1, j)?.matmul(b);
        let right = b.matmul(&self.adjoint_generator(n2, j)?.transpose());
        Ok(left.add(&right))
    }

    /// One descending step from the pair at level `n`.
    pub fn stage3_step(
        &mut self,
        key: FamilyKey,
        gm: &Matrix<S>,
        gp: &Matrix<S>,
        n: Weight,
    ) -> Result<Stage3Output<S>, Error> {
        if n == 0 || n > key.n {
            return Err(Error::Index { weight: key.n, index: n as i64 });
        }
        let (n1, n2) = (key.n1, key.n2);
        let big_n = key.n as i64;
        let lvl = n as i64;
        let jm_gp = self.kron_infinitesimal(n1, n2, -1, gp)?;
        let jp_gm = self.kron_infinitesimal(n1, n2, 1, gm)?;
        if n == 1 {
            let c = S::sqrt_rational(&BigRational::new(BigInt::one(), BigInt::from(2 * big_n * (big_n + 1))))?;
            return Ok(Stage3Output::Center(jm_gp.sub(&jp_gm).scale(&c)));
        }
        let jm_gm = self.kron_infinitesimal(n1, n2, -1, gm)?;
        let jp_gp = self.kron_infinitesimal(n1, n2, 1, gp)?;
        let c = -S::sqrt_rational(&BigRational::new(
            BigInt::one(),
            BigInt::from((big_n + lvl) * (big_n - lvl + 1)),
        ))?;
        Ok(Stage3Output::Pair(jm_gm.add(&jp_gp).scale(&c), jm_gp.sub(&jp_gm).scale(&c)))
    }

    /// One ascending step: from the pair at level `n < N` to level `n+1`.
    /// At `n = 0` only `gp = G⁰` is read.
    ///
    /// For `n ≥ 1`: `G^{−(n+1)} = (J₋₁G^{−n} − J₁G^{n})/c`,
    /// `G^{n+1} = (J₁G^{−n} + J₋₁G^{n})/c` with `c = √((N+n+1)(N−n))`;
    /// for `n = 0`: `G^{−1} = J₁G⁰/c`, `G^{1} = −J₋₁G⁰/c`, `c = √(N(N+1)/2)`.
    pub fn raise_step(
        &mut self,
        key: FamilyKey,
        gm: &Matrix<S>,
        gp: &Matrix<S>,
        n: Weight,
    ) -> Result<(Matrix<S>, Matrix<S>), Error> {
        if n >= key.n {
            return Err(Error::Index { weight: key.n, index: n as i64 + 1 });
        }
        let (n1, n2) = (key.n1, key.n2);
        let big_n = key.n as i64;
        let lvl = n as i64;
        if n == 0 {
            let c = S::sqrt_rational(&BigRational::new(BigInt::from(2), BigInt::from(big_n * (big_n + 1))))?;
            let lower = self.kron_infinitesimal(n1, n2, 1, gp)?.scale(&c);
            let upper = self.kron_infinitesimal(n1, n2, -1, gp)?.scale(&-c);
            return Ok((lower, upper));
        }
        let c = S::sqrt_rational(&BigRational::new(
            BigInt::one(),
            BigInt::from((big_n + lvl + 1) * (big_n - lvl)),
        ))?;
        let lower = self.kron_infinitesimal(n1, n2, -1, gm)?.sub(&self.kron_infinitesimal(n1, n2, 1, gp)?);
        let upper = self.kron_infinitesimal(n1, n2, 1, gm)?.add(&self.kron_infinitesimal(n1, n2, -1, gp)?);
        Ok((lower.scale(&c), upper.scale(&c)))
    }

    fn build_h(&mut self, key: FamilyKey) -> Result<CgFamily<S>, Error> {
        if key.n == 0 {
            let g0 = stage2_zero(&stage1_zero::<S>(key.n1), key.n1)?;
            return Ok(CgFamily::new(key, BasisKind::H, alloc::vec![g0]));
        }
        // The generators for both factor weights must exist before stage 3.
        for m in [key.n1, key.n2] {
            self.adjoint_generator(m, 1)?;
        }
        let big_n = key.n as usize;
        let mut mats: Vec<Option<Matrix<S>>> = (0..2 * big_n + 1).map(|_| None).collect();
        let (gp, gm) = stage2_to_h(&stage1_top_diagonal(key)?, &stage1_bottom_diagonal(key)?, key)?;
        let (mut lower, mut upper) = (gm, gp);
        for n in (1..=key.n).rev() {
            let step = self.stage3_step(key, &lower, &upper, n)?;
            mats[big_n - n as usize] = Some(lower);
            mats[big_n + n as usize] = Some(upper);
            match step {
                Stage3Output::Pair(l, u) => {
                    lower = l;
                    upper = u;
                }
                Stage3Output::Center(c) => {
                    mats[big_n] = Some(c);
                    break;
                }
            }
        }
        Ok(CgFamily::new(key, BasisKind::H, mats.into_iter().map(|m| m.expect("filled")).collect()))
    }

    /// The h-basis family, computed once and cached.
    pub fn family(&mut self, key: FamilyKey) -> Result<Arc<CgFamily<S>>, Error> {
        check_triangle(key.n1, key.n2, key.n)?;
        if let Some(f) = self.families.get(&key) {
            return Ok(f.clone());
        }
        let fam = Arc::new(self.build_h(key)?);
        self.families.insert(key, fam.clone());
        Ok(fam)
    }

    /// Seed the cache with a family computed elsewhere.
    pub fn insert_family(&mut self, fam: Arc<CgFamily<S>>) {
        self.families.insert(fam.key(), fam);
    }

    /// The e-basis family `C^n = Σ_m (V_N)_{mn}·U_{N₁}·G^m·U_{N₂}ᵀ`.
    pub fn family_e(&mut self, key: FamilyKey) -> Result<CgFamily<Complex<S>>, Error> {
        let h = self.family(key)?;
        Ok(h_to_e(&h))
    }

    pub fn compute_family(&mut self, key: FamilyKey, basis: BasisKind) -> Result<AnyFamily<S>, Error> {
        Ok(match basis {
            BasisKind::H => AnyFamily::H(self.family(key)?),
            BasisKind::E => AnyFamily::E(self.family_e(key)?),
        })
    }

    /// Whether the ascending relations reproduce every level from the one
    /// below it.
    pub fn recurrence_closes(&mut self, key: FamilyKey) -> Result<bool, Error> {
        let fam = self.family(key)?;
        for n in 0..key.n {
            let lvl = n as i64;
            let (lower, upper) = self.raise_step(key, fam.get(-lvl), fam.get(lvl), n)?;
            if !lower.approx_eq(fam.get(-lvl - 1)) || !upper.approx_eq(fam.get(lvl + 1)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// h-basis to e-basis conversion.
pub fn h_to_e<S: Scalar>(h: &CgFamily<S>) -> CgFamily<Complex<S>> {
    let key = h.key();
    let u1 = u_matrix::<S>(key.n1);
    let u2t = u_matrix::<S>(key.n2).transpose();
    let vn = v_matrix::<S>(key.n);
    let moved: Vec<Matrix<Complex<S>>> = h.matrices().iter().map(|g| u1.matmul(&g.to_complex()).matmul(&u2t)).collect();
    let big_n = key.n as i64;
    let mats = (-big_n..=big_n)
        .map(|n| {
            let mut acc = Matrix::zeros(dim(key.n1), dim(key.n2));
            for (idx, w) in moved.iter().enumerate() {
                acc.axpy(vn.at(idx as i64 - big_n, n), w);
            }
            acc
        })
        .collect();
    CgFamily::new(key, BasisKind::E, mats)
}

/// e-basis to h-basis conversion `G^n = Σ_m (U_N)_{mn}·V_{N₁}·C^m·V_{N₂}ᵀ`.
pub fn e_to_h<S: Scalar>(e: &CgFamily<Complex<S>>) -> Result<CgFamily<S>, Error> {
    let key = e.key();
    let v1 = v_matrix::<S>(key.n1);
    let v2t = v_matrix::<S>(key.n2).transpose();
    let un = u_matrix::<S>(key.n);
    let moved: Vec<Matrix<Complex<S>>> = e.matrices().iter().map(|c| v1.matmul(c).matmul(&v2t)).collect();
    let big_n = key.n as i64;
    let mut mats = Vec::with_capacity(dim(key.n));
    for n in -big_n..=big_n {
        let mut acc = Matrix::zeros(dim(key.n1), dim(key.n2));
        for (idx, w) in moved.iter().enumerate() {
            acc.axpy(un.at(idx as i64 - big_n, n), w);
        }
        mats.push(require_real(acc, "e-to-h transform produced a non-real matrix")?);
    }
    Ok(CgFamily::new(key, BasisKind::H, mats))
}

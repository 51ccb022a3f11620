//! Weighted vectors, the deviator split of symmetric tensors, Kronecker
//! expansions, quadratic invariants and crystal-system reductions.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::cg::{admissible, CgEngine, FamilyKey};
use crate::irreps::{axis_rotation, check_rotation, dim, rep_matrices, Axis, PiFraction, Weight};
use crate::matrix::Matrix;
use crate::radix::{RadixError, Scalar};
use crate::Error;

/// Components `(v₋N, …, v_N)` of a vector carrying weight `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedVector<S> {
    weight: Weight,
    comps: Vec<S>,
}

impl<S: Scalar> WeightedVector<S> {
    pub fn new(weight: Weight, comps: Vec<S>) -> Result<Self, Error> {
        if comps.len() != dim(weight) {
            return Err(Error::Shape { expected: (dim(weight), 1), found: (comps.len(), 1) });
        }
        Ok(Self { weight, comps })
    }

    pub fn zeros(weight: Weight) -> Self {
        Self { weight, comps: (0..dim(weight)).map(|_| S::zero()).collect() }
    }

    /// Unit vector at index `n`.
    pub fn unit(weight: Weight, n: i64) -> Self {
        let mut v = Self::zeros(weight);
        v.comps[(n + weight as i64) as usize] = S::one();
        v
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn components(&self) -> &[S] {
        &self.comps
    }

    pub fn into_components(self) -> Vec<S> {
        self.comps
    }

    pub fn get(&self, n: i64) -> &S {
        &self.comps[(n + self.weight as i64) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &S)> {
        let w = self.weight as i64;
        self.comps.iter().enumerate().map(move |(i, c)| (i as i64 - w, c))
    }

    pub fn dot(&self, other: &Self) -> S {
        self.comps.iter().zip(&other.comps).fold(S::zero(), |acc, (a, b)| acc + a.mul_ref(b))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Image under a `(2N+1)×(2N+1)` matrix.
    pub fn transform(&self, m: &Matrix<S>) -> Self {
        Self { weight: self.weight, comps: m.mul_vec(&self.comps) }
    }
}

fn check_symmetric3<S: Scalar>(t: &Matrix<S>) -> Result<(), Error> {
    if t.shape() != (3, 3) {
        return Err(Error::Shape { expected: (3, 3), found: t.shape() });
    }
    if !t.is_symmetric() {
        return Err(Error::Domain("tensor is not symmetric".into()));
    }
    Ok(())
}

/// Split a symmetric tensor `T = p·I + S` into the mean `p = tr T / 3` and
/// the weight-2 deviator coordinates
/// `s₋₂ = −(s₁₃+s₃₁)/√2`, `s₋₁ = (s₁₂+s₂₁)/√2`, `s₀ = √(3/2)(s₂₂−p)`,
/// `s₁ = (s₂₃+s₃₂)/√2`, `s₂ = (s₁₁−s₃₃)/√2`.
pub fn deviator_decompose<S: Scalar>(t: &Matrix<S>) -> Result<(S, WeightedVector<S>), Error> {
    check_symmetric3(t)?;
    let g = |r: usize, c: usize| t.get(r, c).clone();
    let p = t.trace().mul_ref(&S::ratio(1, 3));
    let h = S::sqrt_ratio(1, 2);
    let comps = alloc::vec![
        -(g(0, 2) + g(2, 0)) * h.clone(),
        (g(0, 1) + g(1, 0)) * h.clone(),
        (g(1, 1) - p.clone()) * S::sqrt_ratio(3, 2),
        (g(1, 2) + g(2, 1)) * h.clone(),
        (g(0, 0) - g(2, 2)) * h,
    ];
    Ok((p, WeightedVector { weight: 2, comps }))
}

/// The same split by projection: `s_j = tr((G^j_{2[1,1]})ᵀ·(T − pI))`.
pub fn deviator_project<S: Scalar>(engine: &mut CgEngine<S>, t: &Matrix<S>) -> Result<(S, WeightedVector<S>), Error> {
    check_symmetric3(t)?;
    let p = t.trace().mul_ref(&S::ratio(1, 3));
    let dev = t.sub(&Matrix::identity(3).scale(&p));
    let fam = engine.family(FamilyKey::new(1, 1, 2)?)?;
    let comps = fam.matrices().iter().map(|g| g.frobenius_dot(&dev)).collect();
    Ok((p, WeightedVector { weight: 2, comps }))
}

/// `T = p·I + Σ s_j G^j_{2[1,1]}`.
pub fn deviator_reconstruct<S: Scalar>(engine: &mut CgEngine<S>, p: &S, s: &WeightedVector<S>) -> Result<Matrix<S>, Error> {
    if s.weight != 2 {
        return Err(Error::Domain("deviator vectors carry weight 2".into()));
    }
    let fam = engine.family(FamilyKey::new(1, 1, 2)?)?;
    let mut t = Matrix::identity(3).scale(p);
    for (g, c) in fam.matrices().iter().zip(&s.comps) {
        t.axpy(c, g);
    }
    Ok(t)
}

/// `w^{(N)}_n = pᵀ·G^n_{N[N₁,N₂]}·q` for every admissible `N`.
pub fn kron_expand<S: Scalar>(
    engine: &mut CgEngine<S>,
    p: &WeightedVector<S>,
    q: &WeightedVector<S>,
) -> Result<BTreeMap<Weight, WeightedVector<S>>, Error> {
    let mut out = BTreeMap::new();
    for key in admissible(p.weight, q.weight) {
        let fam = engine.family(key)?;
        let comps = fam.matrices().iter().map(|g| bilinear(&p.comps, g, &q.comps)).collect();
        out.insert(key.n, WeightedVector { weight: key.n, comps });
    }
    Ok(out)
}

/// `Σ_N Σ_n w^{(N)}_n G^n_{N[N₁,N₂]}`; equals `p·qᵀ` for the output of
/// [`kron_expand`].
pub fn kron_reconstruct<S: Scalar>(
    engine: &mut CgEngine<S>,
    n1: Weight,
    n2: Weight,
    parts: &BTreeMap<Weight, WeightedVector<S>>,
) -> Result<Matrix<S>, Error> {
    let mut out = Matrix::zeros(dim(n1), dim(n2));
    for (n, w) in parts {
        let fam = engine.family(FamilyKey::new(n1, n2, *n)?)?;
        for (g, c) in fam.matrices().iter().zip(&w.comps) {
            out.axpy(c, g);
        }
    }
    Ok(out)
}

/// `xᵀ·M·y`.
pub fn bilinear<S: Scalar>(x: &[S], m: &Matrix<S>, y: &[S]) -> S {
    let my = m.mul_vec(y);
    x.iter().zip(&my).fold(S::zero(), |acc, (a, b)| acc + a.mul_ref(b))
}

/// The 21 material parameters: two scalars and the vectors `a`, `b`
/// (weight 2) and `d` (weight 4).
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialCoefficients<S> {
    pub c1: S,
    pub c2: S,
    pub a: WeightedVector<S>,
    pub b: WeightedVector<S>,
    pub d: WeightedVector<S>,
}

impl<S: Scalar> MaterialCoefficients<S> {
    pub fn new(c1: S, c2: S, a: WeightedVector<S>, b: WeightedVector<S>, d: WeightedVector<S>) -> Result<Self, Error> {
        if a.weight != 2 || b.weight != 2 || d.weight != 4 {
            return Err(Error::Domain("a and b carry weight 2, d carries weight 4".into()));
        }
        Ok(Self { c1, c2, a, b, d })
    }

    /// Only the scalar coefficients.
    pub fn isotropic(c1: S, c2: S) -> Self {
        Self { c1, c2, a: WeightedVector::zeros(2), b: WeightedVector::zeros(2), d: WeightedVector::zeros(4) }
    }

    /// Coefficients whose assembled block matrix is the Hessian of the
    /// linear energy: `(2c₁, 2c₂, a, 2b, 2d)`.
    pub fn energy_hessian(&self) -> Self {
        let two = S::from_int(2);
        let dbl = |v: &WeightedVector<S>| WeightedVector { weight: v.weight, comps: v.comps.iter().map(|c| c.mul_ref(&two)).collect() };
        Self {
            c1: self.c1.mul_ref(&two),
            c2: self.c2.mul_ref(&two),
            a: self.a.clone(),
            b: dbl(&self.b),
            d: dbl(&self.d),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticInvariants<S> {
    pub j0: S,
    pub j1: S,
    pub i0: S,
    pub i1: S,
    pub i2: S,
}

impl<S: Scalar> QuadraticInvariants<S> {
    pub fn total(&self) -> S {
        self.j0.add_ref(&self.j1).add_ref(&self.i0).add_ref(&self.i1).add_ref(&self.i2)
    }
}

/// `J₀ = c₁p²`, `J₁ = p·Σ aⱼsⱼ`, `I₀ = c₂(s,s)`,
/// `I₁ = Σ bⱼ(G^j_{2[2,2]}s, s)`, `I₂ = Σ dⱼ(G^j_{4[2,2]}s, s)`.
pub fn quadratic_invariants<S: Scalar>(
    engine: &mut CgEngine<S>,
    p: &S,
    s: &WeightedVector<S>,
    m: &MaterialCoefficients<S>,
) -> Result<QuadraticInvariants<S>, Error> {
    if s.weight != 2 {
        return Err(Error::Domain("deviator vectors carry weight 2".into()));
    }
    let j0 = m.c1.mul_ref(p).mul_ref(p);
    let j1 = m.a.dot(s).mul_ref(p);
    let i0 = m.c2.mul_ref(&s.dot(s));
    let form = |engine: &mut CgEngine<S>, n: Weight, coef: &WeightedVector<S>| -> Result<S, Error> {
        let fam = engine.family(FamilyKey::new(2, 2, n)?)?;
        let mut acc = S::zero();
        for (g, c) in fam.matrices().iter().zip(&coef.comps) {
            if !c.is_structural_zero() {
                acc = acc + c.mul_ref(&bilinear(&s.comps, g, &s.comps));
            }
        }
        Ok(acc)
    };
    let i1 = form(engine, 2, &m.b)?;
    let i2 = form(engine, 4, &m.d)?;
    Ok(QuadraticInvariants { j0, j1, i0, i1, i2 })
}

/// Kernel basis of `M` by exact elimination.
///
/// Pivots that `try_div` can invert are normalized to one; otherwise rows
/// are combined fraction-free (`πrᵢ − aᵢr_p`) and kept small with
/// [`Scalar::normalize_row`]. Kernel vectors are read off with products of
/// pivots, so no division by a non-invertible pivot is ever needed.
pub fn kernel<S: Scalar>(m: &Matrix<S>) -> Result<Vec<Vec<S>>, Error> {
    let ncols = m.cols();
    let mut rows = m.to_rows();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let candidates: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
        if candidates.is_empty() {
            continue;
        }
        let chosen = if S::EXACT {
            *candidates.iter().find(|&&i| S::one().try_div(&rows[i][col]).is_ok()).unwrap_or(&candidates[0])
        } else {
            *candidates
                .iter()
                .max_by(|&&x, &&y| rows[x][col].approx().abs().partial_cmp(&rows[y][col].approx().abs()).unwrap_or(Ordering::Equal))
                .unwrap()
        };
        rows.swap(r, chosen);
        match S::one().try_div(&rows[r][col]) {
            Ok(inv) => {
                for v in rows[r].iter_mut() {
                    *v = v.mul_ref(&inv);
                }
                let pivot_row = rows[r].clone();
                for (i, row) in rows.iter_mut().enumerate() {
                    if i == r || row[col].is_zero() {
                        continue;
                    }
                    let f = row[col].clone();
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        if !pv.is_structural_zero() {
                            *v = v.sub_ref(&f.mul_ref(pv));
                        }
                    }
                    row[col] = S::zero();
                }
            }
            Err(RadixError::UnsupportedDivisor { .. }) => {
                let pivot_row = rows[r].clone();
                let piv = pivot_row[col].clone();
                for (i, row) in rows.iter_mut().enumerate() {
                    if i == r || row[col].is_zero() {
                        continue;
                    }
                    let f = row[col].clone();
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v = piv.mul_ref(v).sub_ref(&f.mul_ref(pv));
                    }
                    row[col] = S::zero();
                    S::normalize_row(row);
                }
            }
            Err(e) => return Err(e.into()),
        }
        pivot_cols.push(col);
        r += 1;
    }
    let pivots: Vec<S> = pivot_cols.iter().enumerate().map(|(k, &c)| rows[k][c].clone()).collect();
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !pivot_cols.contains(c)) {
        let mut x: Vec<S> = (0..ncols).map(|_| S::zero()).collect();
        let all = pivots.iter().filter(|p| !p.approx_eq(&S::one())).fold(S::one(), |acc, p| acc * p.clone());
        x[f] = all;
        for (k, &c) in pivot_cols.iter().enumerate() {
            let coef = &rows[k][f];
            if coef.is_zero() {
                continue;
            }
            let others = pivots
                .iter()
                .enumerate()
                .filter(|(k2, p)| *k2 != k && !p.approx_eq(&S::one()))
                .fold(S::one(), |acc, (_, p)| acc * p.clone());
            x[c] = -coef.mul_ref(&others);
        }
        if let Ok(inv) = S::one().try_div(&x[f]) {
            for v in x.iter_mut() {
                *v = v.mul_ref(&inv);
            }
        } else {
            S::normalize_row(&mut x);
        }
        basis.push(x);
    }
    Ok(basis)
}

/// Basis of `{x : Aᵀx = x for every A in mats}`.
pub fn fixed_subspace<S: Scalar>(mats: &[Matrix<S>]) -> Result<Vec<Vec<S>>, Error> {
    let n = match mats.first() {
        Some(m) => m.rows(),
        None => return Err(Error::Domain("no matrices given".into())),
    };
    let mut blocks = Vec::with_capacity(mats.len());
    for m in mats {
        if m.shape() != (n, n) {
            return Err(Error::Shape { expected: (n, n), found: m.shape() });
        }
        blocks.push(m.transpose().sub(&Matrix::identity(n)));
    }
    if blocks.is_empty() {
        return Ok((0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect());
    }
    kernel(&Matrix::vstack(&blocks))
}

/// A fixed subspace of one coefficient block.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedBlock<S> {
    pub weight: Weight,
    pub basis: Vec<WeightedVector<S>>,
    /// Surviving component indices when the subspace is spanned by
    /// coordinate vectors.
    pub indices: Option<Vec<i64>>,
}

impl<S: Scalar> FixedBlock<S> {
    fn from_basis(weight: Weight, basis: Vec<Vec<S>>) -> Self {
        let basis: Vec<WeightedVector<S>> = basis.into_iter().map(|comps| WeightedVector { weight, comps }).collect();
        let mut support: Vec<i64> = Vec::new();
        for v in &basis {
            for (n, c) in v.iter() {
                if !c.is_zero() && !support.contains(&n) {
                    support.push(n);
                }
            }
        }
        support.sort_unstable();
        let indices = if support.len() == basis.len() { Some(support) } else { None };
        Self { weight, basis, indices }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrystalReduction<S> {
    pub system: String,
    pub generators: Vec<Matrix<S>>,
    pub a: FixedBlock<S>,
    pub b: FixedBlock<S>,
    pub d: FixedBlock<S>,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrystalSystem {
    Triclinic,
    Monoclinic,
    Rhombic,
    Tetragonal,
    Trigonal,
    Hexagonal,
    Cubic,
    Isotropic,
}

impl CrystalSystem {
    pub const ALL: [CrystalSystem; 8] = [
        CrystalSystem::Triclinic,
        CrystalSystem::Monoclinic,
        CrystalSystem::Rhombic,
        CrystalSystem::Tetragonal,
        CrystalSystem::Trigonal,
        CrystalSystem::Hexagonal,
        CrystalSystem::Cubic,
        CrystalSystem::Isotropic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CrystalSystem::Triclinic => "triclinic",
            CrystalSystem::Monoclinic => "monoclinic",
            CrystalSystem::Rhombic => "rhombic",
            CrystalSystem::Tetragonal => "tetragonal",
            CrystalSystem::Trigonal => "trigonal",
            CrystalSystem::Hexagonal => "hexagonal",
            CrystalSystem::Cubic => "cubic",
            CrystalSystem::Isotropic => "isotropic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|c| c.name() == s)
    }

    /// Generators of the rotation group. `R₂` and `L₂` are the half turns
    /// about `x₋₁` and `x₀`; the higher systems add the `π/2`, `2π/3` or
    /// `π/3` turn about `x₋₁`; cubic combines quarter turns about `x₋₁` and
    /// `x₀`; the isotropic case uses two rotations of infinite order
    /// (cos = 3/5, sin = 4/5) that generate a dense subgroup.
    pub fn generators<S: Scalar>(self) -> Vec<Matrix<S>> {
        let turn = |axis: Axis, num: i64, den: i64| {
            let (c, s) = PiFraction::new(num, den).cos_sin::<S>().expect("crystallographic angle");
            axis_rotation(axis, c, s)
        };
        let r2 = || turn(Axis::M1, 1, 1);
        let l2 = || turn(Axis::Zero, 1, 1);
        match self {
            CrystalSystem::Triclinic => alloc::vec![Matrix::identity(3)],
            CrystalSystem::Monoclinic => alloc::vec![r2()],
            CrystalSystem::Rhombic => alloc::vec![r2(), l2()],
            CrystalSystem::Tetragonal => alloc::vec![turn(Axis::M1, 1, 2), l2()],
            CrystalSystem::Trigonal => alloc::vec![turn(Axis::M1, 2, 3), l2()],
            CrystalSystem::Hexagonal => alloc::vec![turn(Axis::M1, 1, 3), l2()],
            CrystalSystem::Cubic => alloc::vec![turn(Axis::M1, 1, 2), turn(Axis::Zero, 1, 2)],
            CrystalSystem::Isotropic => {
                let (c, s) = (S::ratio(3, 5), S::ratio(4, 5));
                alloc::vec![axis_rotation(Axis::M1, c.clone(), s.clone()), axis_rotation(Axis::Zero, c, s)]
            }
        }
    }
}

/// Intersect the fixed subspaces of `ρ₂` (blocks `a`, `b`) and `ρ₄`
/// (block `d`) over the generators.
pub fn crystal_reduce<S: Scalar>(
    engine: &mut CgEngine<S>,
    system: &str,
    generators: Vec<Matrix<S>>,
) -> Result<CrystalReduction<S>, Error> {
    let mut rho2 = Vec::with_capacity(generators.len());
    let mut rho4 = Vec::with_capacity(generators.len());
    for u in &generators {
        check_rotation(u)?;
        let mut reps = rep_matrices(engine, 4, u)?;
        rho4.push(reps.pop().expect("weight 4"));
        reps.pop();
        rho2.push(reps.pop().expect("weight 2"));
    }
    let (a, d) = if generators.is_empty() {
        (fixed_subspace(&[Matrix::identity(5)])?, fixed_subspace(&[Matrix::identity(9)])?)
    } else {
        (fixed_subspace(&rho2)?, fixed_subspace(&rho4)?)
    };
    let a = FixedBlock::from_basis(2, a);
    let d = FixedBlock::from_basis(4, d);
    let count = 2 + 2 * a.dim() + d.dim();
    Ok(CrystalReduction { system: system.into(), generators, b: a.clone(), a, d, count })
}

pub fn crystal_reduce_system<S: Scalar>(engine: &mut CgEngine<S>, system: CrystalSystem) -> Result<CrystalReduction<S>, Error> {
    crystal_reduce(engine, system.name(), system.generators())
}

//! The rotation-invariant first-order system of linear elasticity.
//!
//! The state is `(v₋₁, v₀, v₁, p̂, ŝ₋₂, …, ŝ₂)`. Vectors and tensors are
//! taken in h-axis coordinates: `v_h = P·v` and `σ_h = P·σ·P` with the axis
//! calibration `P`. The stress is `σ_h = (p̂/√3)·I + √2·Σ ŝⱼG^j_{2[1,1]}`, so
//! that `p̂ = √3·p` and `ŝ = s/√2` in terms of [`deviator_decompose`] applied
//! to `σ_h`. In these coordinates the isotropic compliance is
//! `diag(1/(3λ+2μ), (1/μ)·I₅)` and the symbol is symmetric.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::cg::{CgEngine, FamilyKey};
use crate::invariants::{deviator_decompose, quadratic_invariants, MaterialCoefficients, WeightedVector};
use crate::irreps::{dim, AXIS_CALIBRATION, Weight};
use crate::matrix::Matrix;
use crate::radix::Scalar;
use crate::Error;

/// Raising or lowering symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaSign {
    /// `Δ₋`: weight `L` to `L−1`.
    Lower,
    /// `Δ₊`: weight `L` to `L+1`.
    Raise,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolMatrix<S> {
    pub weight: Weight,
    pub sign: DeltaSign,
    pub direction: [S; 3],
    pub scale: S,
    pub matrix: Matrix<S>,
}

/// `c·Σᵢ kᵢ·G^i_{1[L∓1,L]}` with `k` in h-basis coordinates.
pub fn delta_symbol<S: Scalar>(
    engine: &mut CgEngine<S>,
    weight: Weight,
    sign: DeltaSign,
    k: &[S; 3],
    scale: &S,
) -> Result<SymbolMatrix<S>, Error> {
    let target = match sign {
        DeltaSign::Lower if weight == 0 => {
            return Err(Error::Domain("the lowering symbol needs weight >= 1".into()));
        }
        DeltaSign::Lower => weight - 1,
        DeltaSign::Raise => weight + 1,
    };
    let fam = engine.family(FamilyKey::new(target, weight, 1)?)?;
    let mut m = Matrix::zeros(dim(target), dim(weight));
    for (g, ki) in fam.matrices().iter().zip(k) {
        m.axpy(ki, g);
    }
    Ok(SymbolMatrix { weight, sign, direction: k.clone(), scale: scale.clone(), matrix: m.scale(scale) })
}

/// Cartesian direction to h-basis coordinates.
pub fn to_h_coordinates<S: Scalar>(k: &[S; 3]) -> [S; 3] {
    core::array::from_fn(|i| if AXIS_CALIBRATION[i] < 0 { -k[i].clone() } else { k[i].clone() })
}

/// The constants `c₋(1)`, `c₊(0)`, `c₋(2)`, `c₊(1)` of the four symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaConstants<S> {
    pub lower_1: S,
    pub raise_0: S,
    pub lower_2: S,
    pub raise_1: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration<S> {
    pub constants: DeltaConstants<S>,
    /// Largest entry of the symbol and compliance differences after
    /// calibration.
    pub residual: f64,
}

/// Coupling of the component system for a Cartesian direction `k`: the
/// `3×6` block `K` with velocity rows `ρ∂ₜv ∼ K·(p̂, ŝ)` and stress rows
/// `Â∂ₜ(p̂, ŝ) ∼ Kᵀ·v`. Column `y` is `σ(e_y)·k` in h-axis coordinates.
pub fn component_coupling<S: Scalar>(engine: &mut CgEngine<S>, k: &[S; 3]) -> Result<Matrix<S>, Error> {
    let kh = to_h_coordinates(k);
    let stress = stress_basis(engine)?;
    let mut out = Matrix::zeros(3, 6);
    for (y, sigma) in stress.iter().enumerate() {
        for (i, v) in sigma.mul_vec(&kh).into_iter().enumerate() {
            out.set(i, y, v);
        }
    }
    Ok(out)
}

/// `σ(e_p̂) = I/√3`, `σ(e_ŝⱼ) = √2·G^j_{2[1,1]}`.
fn stress_basis<S: Scalar>(engine: &mut CgEngine<S>) -> Result<Vec<Matrix<S>>, Error> {
    let fam = engine.family(FamilyKey::new(1, 1, 2)?)?;
    let mut out = Vec::with_capacity(6);
    out.push(Matrix::identity(3).scale(&S::sqrt_ratio(1, 3)));
    let r2 = S::sqrt_ratio(2, 1);
    out.extend(fam.matrices().iter().map(|g| g.scale(&r2)));
    Ok(out)
}

/// Invariant coupling `[Δ₊(0)k | Δ₋(2)k]` with the given constants; `k` is
/// Cartesian.
pub fn invariant_coupling<S: Scalar>(engine: &mut CgEngine<S>, k: &[S; 3], c: &DeltaConstants<S>) -> Result<Matrix<S>, Error> {
    let kh = to_h_coordinates(k);
    let p = delta_symbol(engine, 0, DeltaSign::Raise, &kh, &c.raise_0)?.matrix;
    let s = delta_symbol(engine, 2, DeltaSign::Lower, &kh, &c.lower_2)?.matrix;
    Ok(Matrix::from_fn(3, 6, |r, col| if col == 0 { p.get(r, 0).clone() } else { s.get(r, col - 1).clone() }))
}

/// Invariant stress rows `[Δ₋(1)k ; Δ₊(1)k]` (`6×3`); `k` is Cartesian.
pub fn invariant_stress_rows<S: Scalar>(engine: &mut CgEngine<S>, k: &[S; 3], c: &DeltaConstants<S>) -> Result<Matrix<S>, Error> {
    let kh = to_h_coordinates(k);
    let p = delta_symbol(engine, 1, DeltaSign::Lower, &kh, &c.lower_1)?.matrix;
    let s = delta_symbol(engine, 1, DeltaSign::Raise, &kh, &c.raise_1)?.matrix;
    Ok(Matrix::vstack(&[p, s]))
}

// Ratio of two proportional blocks, from the first nonzero entry of `unit`.
fn block_ratio<S: Scalar>(target: &Matrix<S>, unit: &Matrix<S>) -> Result<S, Error> {
    for (t, u) in target.entries().iter().zip(unit.entries()) {
        if !u.is_zero() {
            return Ok(t.try_div(u)?);
        }
    }
    Err(Error::Calibration("symbol block vanishes on a basis direction"))
}

fn max_abs<S: Scalar>(m: &Matrix<S>) -> f64 {
    m.entries().iter().map(|v| v.approx().abs()).fold(0.0, f64::max)
}

/// Fix the four constants by equating the invariant symbol with the
/// component system on the basis directions, then confirm on all three
/// directions and check the isotropic compliance through
/// [`deviator_decompose`].
pub fn calibrate_delta_constants<S: Scalar>(engine: &mut CgEngine<S>, lambda: &S, mu: &S) -> Result<Calibration<S>, Error> {
    let units = DeltaConstants { lower_1: S::one(), raise_0: S::one(), lower_2: S::one(), raise_1: S::one() };
    let e0 = [S::one(), S::zero(), S::zero()];
    let e1 = [S::zero(), S::one(), S::zero()];
    let e2 = [S::zero(), S::zero(), S::one()];
    let first = [&e0, &e1, &e2];
    // Any direction gives the same constants; use the first where the
    // block is nonzero.
    let mut found: [Option<S>; 4] = [None, None, None, None];
    for k in first {
        let comp = component_coupling(engine, k)?;
        let comp_t = comp.transpose();
        let inv = invariant_coupling(engine, k, &units)?;
        let rows = invariant_stress_rows(engine, k, &units)?;
        let blocks = [
            (Matrix::from_fn(1, 3, |_, c| comp_t.get(0, c).clone()), Matrix::from_fn(1, 3, |_, c| rows.get(0, c).clone())),
            (Matrix::from_fn(3, 1, |r, _| comp.get(r, 0).clone()), Matrix::from_fn(3, 1, |r, _| inv.get(r, 0).clone())),
            (Matrix::from_fn(3, 5, |r, c| comp.get(r, c + 1).clone()), Matrix::from_fn(3, 5, |r, c| inv.get(r, c + 1).clone())),
            (Matrix::from_fn(5, 3, |r, c| comp_t.get(r + 1, c).clone()), Matrix::from_fn(5, 3, |r, c| rows.get(r + 1, c).clone())),
        ];
        for (slot, (target, unit)) in found.iter_mut().zip(blocks.iter()) {
            if slot.is_none() && !unit.is_zero() {
                *slot = Some(block_ratio(target, unit)?);
            }
        }
    }
    let [lower_1, raise_0, lower_2, raise_1] = found;
    let missing = Error::Calibration("a symbol block vanishes on every basis direction");
    let constants = DeltaConstants {
        lower_1: lower_1.ok_or(missing.clone())?,
        raise_0: raise_0.ok_or(missing.clone())?,
        lower_2: lower_2.ok_or(missing.clone())?,
        raise_1: raise_1.ok_or(missing)?,
    };
    let mut residual = 0f64;
    for k in first {
        let comp = component_coupling(engine, k)?;
        residual = residual.max(max_abs(&invariant_coupling(engine, k, &constants)?.sub(&comp)));
        residual = residual.max(max_abs(&invariant_stress_rows(engine, k, &constants)?.sub(&comp.transpose())));
    }
    let iso = assemble_a_hat(engine, &isotropic_coefficients(lambda, mu)?)?;
    residual = residual.max(max_abs(&iso.sub(&component_compliance(engine, lambda, mu)?)));
    let tolerance = if S::EXACT { 0.0 } else { 1e-12 };
    if residual > tolerance {
        return Err(Error::Calibration("the invariant symbol does not reproduce the component system"));
    }
    Ok(Calibration { constants, residual })
}

/// Isotropic compliance in `(p̂, ŝ)` coordinates, computed from the Lamé
/// law `ε = (σ − λ/(3λ+2μ)·tr σ·I)/(2μ)` and projected back with
/// [`deviator_decompose`].
pub fn component_compliance<S: Scalar>(engine: &mut CgEngine<S>, lambda: &S, mu: &S) -> Result<Matrix<S>, Error> {
    let two_mu = mu.mul_ref(&S::from_int(2));
    let bulk = lambda.mul_ref(&S::from_int(3)).add_ref(&two_mu);
    let ratio = lambda.try_div(&bulk)?;
    let stress = stress_basis(engine)?;
    let sqrt3 = S::sqrt_ratio(3, 1);
    let sqrt2 = S::sqrt_ratio(2, 1);
    let mut out = Matrix::zeros(6, 6);
    for (y, sigma) in stress.iter().enumerate() {
        let shifted = sigma.sub(&Matrix::identity(3).scale(&ratio.mul_ref(&sigma.trace())));
        let eps = Matrix::from_fn(3, 3, |r, c| shifted.get(r, c).try_div(&two_mu).expect("mu is nonzero"));
        let (p, s) = deviator_decompose(&eps)?;
        // p̂-row: tr ε/√3 = √3·p; ŝ-rows: √2·tr(G^j ε) = √2·s_j.
        out.set(0, y, p.mul_ref(&sqrt3));
        for (j, v) in s.components().iter().enumerate() {
            out.set(j + 1, y, v.mul_ref(&sqrt2));
        }
    }
    Ok(out)
}

/// `ĉ₁ = 1/(3λ+2μ)`, `ĉ₂ = 1/μ`.
pub fn isotropic_coefficients<S: Scalar>(lambda: &S, mu: &S) -> Result<MaterialCoefficients<S>, Error> {
    let bulk = lambda.mul_ref(&S::from_int(3)).add_ref(&mu.mul_ref(&S::from_int(2)));
    Ok(MaterialCoefficients::isotropic(S::one().try_div(&bulk)?, S::one().try_div(mu)?))
}

/// `Â = [[ĉ₁, Σaⱼ G^j_{2[0,2]}], [Σaⱼ G^j_{2[2,0]}, ĉ₂I₅ + Σbⱼ G^j_{2[2,2]} + Σdⱼ G^j_{4[2,2]}]]`.
pub fn assemble_a_hat<S: Scalar>(engine: &mut CgEngine<S>, m: &MaterialCoefficients<S>) -> Result<Matrix<S>, Error> {
    let row = weighted_sum(engine, FamilyKey::new(0, 2, 2)?, &m.a)?;
    let col = weighted_sum(engine, FamilyKey::new(2, 0, 2)?, &m.a)?;
    let mut a2 = Matrix::identity(5).scale(&m.c2);
    a2 = a2.add(&weighted_sum(engine, FamilyKey::new(2, 2, 2)?, &m.b)?);
    a2 = a2.add(&weighted_sum(engine, FamilyKey::new(2, 2, 4)?, &m.d)?);
    Ok(Matrix::from_fn(6, 6, |r, c| match (r, c) {
        (0, 0) => m.c1.clone(),
        (0, c) => row.get(0, c - 1).clone(),
        (r, 0) => col.get(r - 1, 0).clone(),
        (r, c) => a2.get(r - 1, c - 1).clone(),
    }))
}

fn weighted_sum<S: Scalar>(engine: &mut CgEngine<S>, key: FamilyKey, w: &WeightedVector<S>) -> Result<Matrix<S>, Error> {
    let fam = engine.family(key)?;
    let mut out = Matrix::zeros(dim(key.n1), dim(key.n2));
    for (g, c) in fam.matrices().iter().zip(w.components()) {
        out.axpy(c, g);
    }
    Ok(out)
}

/// `J₀ + J₁ + I₀ + I₁ + I₂`.
pub fn linear_energy<S: Scalar>(
    engine: &mut CgEngine<S>,
    p: &S,
    s: &WeightedVector<S>,
    m: &MaterialCoefficients<S>,
) -> Result<S, Error> {
    Ok(quadratic_invariants(engine, p, s, m)?.total())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicModel<S> {
    pub density: S,
    pub a_hat: Matrix<S>,
    pub constants: DeltaConstants<S>,
    pub material: MaterialCoefficients<S>,
}

impl<S: Scalar> HyperbolicModel<S> {
    /// Model with compliance coefficients `m`; the symbol constants are
    /// calibrated on the isotropic material with `ĉ₁, ĉ₂` of `m`.
    pub fn new(engine: &mut CgEngine<S>, m: MaterialCoefficients<S>, density: S) -> Result<Self, Error> {
        let a_hat = assemble_a_hat(engine, &m)?;
        // Symbol constants do not depend on the material; any admissible
        // Lamé pair serves for the calibration run.
        let constants = calibrate_delta_constants(engine, &S::one(), &S::one())?.constants;
        Ok(Self { density, a_hat, constants, material: m })
    }

    pub fn isotropic(engine: &mut CgEngine<S>, lambda: &S, mu: &S, density: S) -> Result<Self, Error> {
        Self::new(engine, isotropic_coefficients(lambda, mu)?, density)
    }

    /// `diag(ρI₃, Â)`.
    pub fn time_matrix(&self) -> Matrix<S> {
        Matrix::from_fn(9, 9, |r, c| match (r, c) {
            (r, c) if r < 3 && c < 3 => {
                if r == c {
                    self.density.clone()
                } else {
                    S::zero()
                }
            }
            (r, c) if r >= 3 && c >= 3 => self.a_hat.get(r - 3, c - 3).clone(),
            _ => S::zero(),
        })
    }

    /// `Σ kᵢAⁱ` for a Cartesian direction `k`.
    pub fn symbol(&self, engine: &mut CgEngine<S>, k: &[S; 3]) -> Result<Matrix<S>, Error> {
        let top = invariant_coupling(engine, k, &self.constants)?;
        let bottom = invariant_stress_rows(engine, k, &self.constants)?;
        Ok(Matrix::from_fn(9, 9, |r, c| match (r < 3, c < 3) {
            (true, false) => top.get(r, c - 3).clone(),
            (false, true) => bottom.get(r - 3, c).clone(),
            _ => S::zero(),
        }))
    }
}

/// Why a model fails to be symmetric hyperbolic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    NonPositiveDensity,
    /// The leading principal minor of `Â` of this order is not positive.
    LeadingMinor(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hyperbolicity {
    Hyperbolic,
    NotHyperbolic(Witness),
}

/// Index of the first non-positive leading principal minor, if any.
///
/// Exact backend: fraction-free elimination without row exchanges; while
/// every earlier minor is positive, the sign of the current pivot is the
/// sign of the ratio of consecutive minors. Float backend: Cholesky.
pub fn first_failing_minor<S: Scalar>(a: &Matrix<S>) -> Option<usize> {
    let n = a.rows();
    if !S::EXACT {
        return cholesky(&a.to_f64()).err();
    }
    let mut rows = a.to_rows();
    for k in 0..n {
        let piv = rows[k][k].clone();
        if piv.signum() != Ordering::Greater {
            return Some(k + 1);
        }
        let pivot_row = rows[k].clone();
        for row in rows.iter_mut().skip(k + 1) {
            if row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v = piv.mul_ref(v).sub_ref(&f.mul_ref(pv));
            }
            S::normalize_row(row);
        }
    }
    None
}

pub fn hyperbolicity_check<S: Scalar>(model: &HyperbolicModel<S>) -> Hyperbolicity {
    if model.density.signum() != Ordering::Greater {
        return Hyperbolicity::NotHyperbolic(Witness::NonPositiveDensity);
    }
    match first_failing_minor(&model.a_hat) {
        None => Hyperbolicity::Hyperbolic,
        Some(k) => Hyperbolicity::NotHyperbolic(Witness::LeadingMinor(k)),
    }
}

/// Lower Cholesky factor, or the order of the first failing minor.
pub fn cholesky(a: &Matrix<f64>) -> Result<Matrix<f64>, usize> {
    let n = a.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = *a.get(j, j);
        for k in 0..j {
            d -= l.get(j, k) * l.get(j, k);
        }
        if d <= 0.0 || d.is_nan() {
            return Err(j + 1);
        }
        let djj = libm::sqrt(d);
        l.set(j, j, djj);
        for i in j + 1..n {
            let mut s = *a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s / djj);
        }
    }
    Ok(l)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(a: &Matrix<f64>) -> Vec<f64> {
    let n = a.rows();
    let mut m = a.clone();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m.get(p, q) * m.get(p, q);
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = *m.get(p, q);
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let mkp = *m.get(k, p);
                    let mkq = *m.get(k, q);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = *m.get(p, k);
                    let mqk = *m.get(q, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
            }
        }
    }
    let mut out: Vec<f64> = (0..n).map(|i| *m.get(i, i)).collect();
    out.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    out
}

// Solve L·X = B for lower-triangular L.
fn forward_solve(l: &Matrix<f64>, b: &Matrix<f64>) -> Matrix<f64> {
    let n = l.rows();
    let mut x = Matrix::zeros(n, b.cols());
    for c in 0..b.cols() {
        for i in 0..n {
            let mut s = *b.get(i, c);
            for k in 0..i {
                s -= l.get(i, k) * x.get(k, c);
            }
            x.set(i, c, s / l.get(i, i));
        }
    }
    x
}

/// The nine characteristic speeds along the Cartesian unit direction `k`:
/// eigenvalues of the pencil `(Σ kᵢAⁱ, diag(ρI₃, Â))`, ascending.
pub fn plane_wave_speeds<S: Scalar>(engine: &mut CgEngine<S>, model: &HyperbolicModel<S>, k: &[S; 3]) -> Result<Vec<f64>, Error> {
    let norm2: f64 = k.iter().map(|v| v.approx() * v.approx()).sum();
    if (norm2 - 1.0).abs() > 1e-9 {
        return Err(Error::Domain("direction must be a unit vector".into()));
    }
    if let Hyperbolicity::NotHyperbolic(_) = hyperbolicity_check(model) {
        return Err(Error::Domain("model is not hyperbolic".into()));
    }
    let m = model.symbol(engine, k)?.to_f64();
    if !m.is_symmetric() {
        return Err(Error::Invariant("symbol is not symmetric"));
    }
    let l = cholesky(&model.time_matrix().to_f64()).map_err(|_| Error::Domain("model is not hyperbolic".into()))?;
    // C = L⁻¹·M·L⁻ᵀ
    let y = forward_solve(&l, &m);
    let c = forward_solve(&l, &y.transpose());
    let c = Matrix::from_fn(9, 9, |r, col| 0.5 * (c.get(r, col) + c.get(col, r)));
    Ok(symmetric_eigenvalues(&c))
}

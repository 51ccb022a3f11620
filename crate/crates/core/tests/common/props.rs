//! Randomized properties shared by the property tests and the acceptance
//! run. Each check takes one generated case.

use std::cmp::Ordering;

use cg_rotor_core::elasticity::{delta_symbol, to_h_coordinates, DeltaSign, HyperbolicModel};
use cg_rotor_core::invariants::{bilinear, kron_expand, kron_reconstruct, WeightedVector};
use cg_rotor_core::irreps::{rep_matrix, weight_one_rep};
use cg_rotor_core::{CgEngine, FamilyKey, Matrix, RadicalScalar, Scalar};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 256;

type R = RadicalScalar;
type Check = Result<(), TestCaseError>;

pub fn small_rational() -> impl Strategy<Value = R> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| R::ratio(n, d))
}

pub fn radical() -> impl Strategy<Value = R> {
    prop::collection::vec((prop::sample::select(vec![1u64, 2, 3, 5, 6, 7, 10]), -7i64..=7, 1i64..=5), 0..=3)
        .prop_map(|terms| terms.into_iter().fold(R::zero(), |acc, (r, n, d)| acc + R::sqrt_integer(r) * R::ratio(n, d)))
}

pub fn weighted(weight: u32) -> impl Strategy<Value = WeightedVector<R>> {
    prop::collection::vec(small_rational(), 2 * weight as usize + 1).prop_map(move |c| WeightedVector::new(weight, c).unwrap())
}

pub fn vec3() -> impl Strategy<Value = [R; 3]> {
    [small_rational(), small_rational(), small_rational()]
}

/// Exact rational rotation from a nonzero integer quaternion.
pub fn rotation() -> impl Strategy<Value = Matrix<R>> {
    (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3)
        .prop_filter("nonzero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 0)
        .prop_map(|(a, b, c, d)| {
            let n = a * a + b * b + c * c + d * d;
            let rows = [
                [a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)],
                [2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)],
                [2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d],
            ];
            Matrix::from_fn(3, 3, |r, col| R::ratio(rows[r][col], n))
        })
}

fn block_diag(blocks: &[&Matrix<R>]) -> Matrix<R> {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = Matrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                out.set(off + r, off + c, b.get(r, c).clone());
            }
        }
        off += b.rows();
    }
    out
}

pub fn parseval_case() -> impl Strategy<Value = (WeightedVector<R>, WeightedVector<R>)> {
    (0u32..=3, 0u32..=3).prop_flat_map(|(n1, n2)| (weighted(n1), weighted(n2)))
}

/// `Σ_N Σ_n w_n G^n = p·qᵀ` and `Σ |w|² = |p|²·|q|²`.
pub fn parseval((p, q): (WeightedVector<R>, WeightedVector<R>)) -> Check {
    let mut engine = CgEngine::<R>::new();
    let parts = kron_expand(&mut engine, &p, &q).unwrap();
    let outer = Matrix::from_fn(p.components().len(), q.components().len(), |r, c| &p.components()[r] * &q.components()[c]);
    prop_assert_eq!(kron_reconstruct(&mut engine, p.weight(), q.weight(), &parts).unwrap(), outer);
    let energy = parts.values().fold(R::zero(), |acc, w| acc + w.dot(w));
    prop_assert_eq!(energy, p.dot(&p) * q.dot(&q));
    Ok(())
}

/// Odd `N` with `N₁ = N₂ = M`, and a vector of weight `M`.
pub fn skew_case() -> impl Strategy<Value = (u32, WeightedVector<R>)> {
    (1u32..=3).prop_flat_map(|m| (prop::sample::select((1..=2 * m).filter(|n| n % 2 == 1).collect::<Vec<_>>()), weighted(m)))
}

/// Every member of a skew family gives a vanishing quadratic form.
pub fn skew_vanishing((n, x): (u32, WeightedVector<R>)) -> Check {
    let mut engine = CgEngine::<R>::new();
    let m = x.weight();
    let fam = engine.family(FamilyKey::new(m, m, n).unwrap()).unwrap();
    for (_, g) in fam.iter() {
        prop_assert!(bilinear(x.components(), g, x.components()).is_zero());
    }
    Ok(())
}

pub fn invariance_case() -> impl Strategy<Value = (Matrix<R>, WeightedVector<R>, WeightedVector<R>)> {
    (rotation(), weighted(2), weighted(4))
}

/// `Σ dⱼ (G^j_{4[2,2]} s, s)` is unchanged when `s` and `d` both rotate.
pub fn form_invariance((u, s, d): (Matrix<R>, WeightedVector<R>, WeightedVector<R>)) -> Check {
    let mut engine = CgEngine::<R>::new();
    let fam = engine.family(FamilyKey::new(2, 2, 4).unwrap()).unwrap();
    let r2 = rep_matrix(&mut engine, 2, &u).unwrap();
    let r4 = rep_matrix(&mut engine, 4, &u).unwrap();
    let form = |s: &WeightedVector<R>, d: &WeightedVector<R>| {
        fam.matrices().iter().zip(d.components()).fold(R::zero(), |acc, (g, c)| acc + c * &bilinear(s.components(), g, s.components()))
    };
    prop_assert_eq!(form(&s, &d), form(&s.transform(&r2), &d.transform(&r4)));
    Ok(())
}

pub fn equivariance_case() -> impl Strategy<Value = (Matrix<R>, [R; 3])> {
    (rotation(), vec3())
}

/// The elasticity symbol and each weight-shifting symbol commute with
/// rotations.
pub fn symbol_equivariance((u, k): (Matrix<R>, [R; 3])) -> Check {
    let mut engine = CgEngine::<R>::new();
    let uk: [R; 3] = u.mul_vec(&k).try_into().unwrap();
    let model = HyperbolicModel::isotropic(&mut engine, &R::from_integer(2), &R::one(), R::one()).unwrap();
    let r1 = weight_one_rep(&u);
    let r2 = rep_matrix(&mut engine, 2, &u).unwrap();
    let r = block_diag(&[&r1, &Matrix::identity(1), &r2]);
    let lhs = model.symbol(&mut engine, &uk).unwrap();
    let rhs = r.matmul(&model.symbol(&mut engine, &k).unwrap()).matmul(&r.transpose());
    prop_assert_eq!(lhs, rhs);
    let k0 = to_h_coordinates(&k);
    let kh: [R; 3] = r1.mul_vec(&k0).try_into().unwrap();
    for (l, sign) in [(1u32, DeltaSign::Lower), (1, DeltaSign::Raise), (2, DeltaSign::Lower), (0, DeltaSign::Raise)] {
        let target = if sign == DeltaSign::Lower { l - 1 } else { l + 1 };
        let a = delta_symbol(&mut engine, l, sign, &kh, &R::one()).unwrap().matrix;
        let b = delta_symbol(&mut engine, l, sign, &k0, &R::one()).unwrap().matrix;
        let rt = rep_matrix(&mut engine, target, &u).unwrap();
        let rl = rep_matrix(&mut engine, l, &u).unwrap();
        prop_assert_eq!(a, rt.matmul(&b).matmul(&rl.transpose()));
    }
    Ok(())
}

pub fn radix_case() -> impl Strategy<Value = (R, R, R)> {
    (radical(), radical(), radical())
}

/// Field axioms, inverses for one- and two-term divisors, exact sign and
/// the text round trip.
pub fn radix_field((a, b, c): (R, R, R)) -> Check {
    prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    prop_assert_eq!(&a + &b, &b + &a);
    prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    prop_assert_eq!(&a * &b, &b * &a);
    prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    prop_assert!((&a - &a).is_zero());
    prop_assert_eq!(&a * &R::one(), a.clone());
    prop_assert_eq!(&a + &R::zero(), a.clone());
    if !b.is_zero() {
        match a.checked_div(&b) {
            Ok(q) => prop_assert_eq!(&q * &b, a.clone()),
            Err(_) => prop_assert!(b.term_count() > 2),
        }
        if b.term_count() <= 2 {
            prop_assert_eq!(&b.recip().unwrap() * &b, R::one());
        }
    }
    let approx = a.approx();
    match a.signum() {
        Ordering::Equal => prop_assert!(a.is_zero()),
        Ordering::Greater => prop_assert!(approx > 0.0),
        Ordering::Less => prop_assert!(approx < 0.0),
    }
    prop_assert!((&a * &a).signum() != Ordering::Less);
    if (a.approx() - b.approx()).abs() > 1e-9 {
        prop_assert_eq!(Scalar::signum(&(&a - &b)), a.approx().partial_cmp(&b.approx()).unwrap());
    }
    let parsed: R = a.to_string().parse().unwrap();
    prop_assert_eq!(parsed, a);
    Ok(())
}

/// Run one property for [`CASES`] cases with a deterministic seed.
pub fn run<S: Strategy>(strategy: S, check: impl Fn(S::Value) -> Check) -> Result<u32, String> {
    let mut runner = TestRunner::new_with_rng(
        Config { cases: CASES, failure_persistence: None, ..Config::default() },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, check).map(|_| CASES).map_err(|e| e.to_string())
}

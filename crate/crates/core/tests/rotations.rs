mod common;

use cg_rotor_core::invariants::deviator_decompose;
use cg_rotor_core::irreps::{axis_rotation, check_rotation, infinitesimal_h, rep_matrices, rep_matrix, weight_one_rep};
use cg_rotor_core::{Axis, CgEngine, Error, Matrix, PiFraction, RadicalScalar, Scalar};
use common::max_abs_diff;

/// The weight-2 matrix of the rotation about `x₋₁`, written out in terms of
/// `cos θ` and `sin θ`.
fn a_theta<S: Scalar>(c: &S, s: &S) -> Matrix<S> {
    let half = S::ratio(1, 2);
    let hr3 = S::sqrt_ratio(3, 4);
    let cos2 = c.mul_ref(c).sub_ref(&s.mul_ref(s));
    let sin2 = S::from_int(2).mul_ref(s).mul_ref(c);
    let s2 = s.mul_ref(s);
    let z = S::zero;
    Matrix::from_rows(vec![
        vec![c.clone(), z(), z(), -s.clone(), z()],
        vec![z(), cos2.clone(), hr3.mul_ref(&sin2), z(), -half.mul_ref(&sin2)],
        vec![z(), -hr3.mul_ref(&sin2), c.mul_ref(c).sub_ref(&half.mul_ref(&s2)), z(), hr3.mul_ref(&s2)],
        vec![s.clone(), z(), z(), c.clone(), z()],
        vec![z(), half.mul_ref(&sin2), hr3.mul_ref(&s2), z(), half.add_ref(&half.mul_ref(&c.mul_ref(c)))],
    ])
}

#[test]
fn weight_two_rotation_matches_closed_form_exactly() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    for (num, den) in [(1, 1), (1, 2), (1, 3), (2, 3), (1, 4), (-1, 6)] {
        let (c, s) = PiFraction::new(num, den).cos_sin::<RadicalScalar>().unwrap();
        let u = axis_rotation(Axis::M1, c.clone(), s.clone());
        let rep = rep_matrix(&mut engine, 2, &u).unwrap();
        assert_eq!(rep, a_theta(&c, &s), "theta = {num}pi/{den}");
        assert!(rep.is_orthogonal());
    }
}

#[test]
fn weight_two_rotation_matches_closed_form_in_float() {
    let mut engine = CgEngine::<f64>::new();
    for theta in [0.3f64, 1.0, 2.5] {
        let (c, s) = (theta.cos(), theta.sin());
        let rep = rep_matrix(&mut engine, 2, &axis_rotation(Axis::M1, c, s)).unwrap();
        assert!(max_abs_diff(&rep, &a_theta(&c, &s)) < 1e-12, "theta = {theta}");
    }
}

#[test]
fn closed_form_row_five_column_three_is_forced_by_orthogonality() {
    // Flipping the sign of that entry breaks orthogonality at a generic angle.
    let (c, s) = (1.0f64.cos(), 1.0f64.sin());
    let mut flipped = a_theta(&c, &s);
    let v = -*flipped.get(4, 2);
    flipped.set(4, 2, v);
    assert!(!flipped.is_orthogonal());
    assert!(a_theta(&c, &s).is_orthogonal());
}

#[test]
fn weight_one_is_the_calibrated_rotation() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    let (c, s) = (RadicalScalar::ratio(3, 5), RadicalScalar::ratio(4, 5));
    let u = axis_rotation(Axis::Zero, c.clone(), s.clone()).matmul(&axis_rotation(Axis::M1, c, s));
    assert_eq!(rep_matrix(&mut engine, 1, &u).unwrap(), weight_one_rep(&u));
}

#[test]
fn deviator_coordinates_transform_by_the_weight_two_matrix() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    let (c, s) = (RadicalScalar::ratio(5, 13), RadicalScalar::ratio(12, 13));
    let u = axis_rotation(Axis::P1, c.clone(), s.clone()).matmul(&axis_rotation(Axis::Zero, s, c));
    let rho2 = rep_matrix(&mut engine, 2, &weight_one_rep(&u)).unwrap();
    let t = Matrix::from_fn(3, 3, |r, c| RadicalScalar::from_integer((r * r + c * c + r * c) as i64 - 2));
    let (p, sv) = deviator_decompose(&t).unwrap();
    let (p2, sv2) = deviator_decompose(&u.matmul(&t).matmul(&u.transpose())).unwrap();
    assert_eq!(p, p2);
    assert_eq!(sv2.components(), rho2.mul_vec(sv.components()).as_slice());
    // About x₋₁ the calibration turns this into the transposed action.
    let (c, s) = (RadicalScalar::ratio(8, 17), RadicalScalar::ratio(15, 17));
    let u = axis_rotation(Axis::M1, c, s);
    let (_, sv3) = deviator_decompose(&u.transpose().matmul(&t).matmul(&u)).unwrap();
    assert_eq!(sv3.components(), rep_matrix(&mut engine, 2, &u).unwrap().mul_vec(sv.components()).as_slice());
}

#[test]
fn representation_is_a_homomorphism() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    let (c, s) = (RadicalScalar::ratio(3, 5), RadicalScalar::ratio(4, 5));
    let (c2, s2) = PiFraction::new(1, 3).cos_sin::<RadicalScalar>().unwrap();
    let u = axis_rotation(Axis::M1, c, s);
    let v = axis_rotation(Axis::P1, c2, s2);
    let ru = rep_matrices(&mut engine, 4, &u).unwrap();
    let rv = rep_matrices(&mut engine, 4, &v).unwrap();
    let ruv = rep_matrices(&mut engine, 4, &u.matmul(&v)).unwrap();
    for n in 0..=4 {
        assert_eq!(ruv[n], ru[n].matmul(&rv[n]), "weight {n}");
        assert!(ru[n].is_orthogonal());
    }
}

#[test]
fn derivatives_along_axes_are_the_infinitesimal_operators() {
    let mut engine = CgEngine::<f64>::new();
    let h = 1e-5f64;
    for axis in [Axis::M1, Axis::Zero, Axis::P1] {
        for n in 1..=4 {
            let plus = rep_matrix(&mut engine, n, &axis_rotation(axis, h.cos(), h.sin())).unwrap();
            let minus = rep_matrix(&mut engine, n, &axis_rotation(axis, h.cos(), -h.sin())).unwrap();
            let deriv = plus.sub(&minus).scale(&(0.5 / h));
            let j = infinitesimal_h(&mut engine, n, axis.generator_index()).unwrap();
            assert!(max_abs_diff(&deriv, &j) < 1e-6, "{axis:?} weight {n}");
        }
    }
}

#[test]
fn generators_satisfy_the_rotation_algebra() {
    // [J_a, J_b] is again a generator, and each J is skew.
    let mut engine = CgEngine::<RadicalScalar>::new();
    for n in 1..=4 {
        let j: Vec<_> = [-1, 0, 1].iter().map(|&k| infinitesimal_h(&mut engine, n, k).unwrap()).collect();
        for g in &j {
            assert_eq!(g.transpose(), g.neg());
        }
        let comm = |a: &Matrix<RadicalScalar>, b: &Matrix<RadicalScalar>| a.matmul(b).sub(&b.matmul(a));
        let c01 = comm(&j[1], &j[2]);
        assert!(j.iter().any(|g| &c01 == g || c01 == g.neg()), "weight {n}");
    }
}

#[test]
fn non_rotations_are_rejected() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    let reflect = Matrix::from_fn(3, 3, |r, c| RadicalScalar::from_integer(if r != c { 0 } else if r == 0 { -1 } else { 1 }));
    assert!(matches!(rep_matrix(&mut engine, 2, &reflect), Err(Error::NotRotation(_))));
    let scaled = Matrix::<RadicalScalar>::identity(3).scale(&RadicalScalar::from_integer(2));
    assert!(check_rotation(&scaled).is_err());
}

#[test]
fn exact_angles_are_restricted() {
    assert!(matches!(PiFraction::new(1, 5).cos_sin::<RadicalScalar>(), Err(Error::UnsupportedAngle)));
    assert!(matches!(PiFraction::new(1, 12).cos_sin::<RadicalScalar>(), Err(Error::UnsupportedAngle)));
    let (c, s) = PiFraction::new(5, 6).cos_sin::<RadicalScalar>().unwrap();
    assert_eq!((c.to_string(), s.to_string()), ("-1/2*sqrt(3)".into(), "1/2".into()));
    let (c, s) = PiFraction::new(-3, 4).cos_sin::<RadicalScalar>().unwrap();
    assert_eq!((c.to_string(), s.to_string()), ("-1/2*sqrt(2)".into(), "-1/2*sqrt(2)".into()));
}

use cg_rotor_core::elasticity::{
    assemble_a_hat, calibrate_delta_constants, component_compliance, hyperbolicity_check, isotropic_coefficients, linear_energy,
    plane_wave_speeds, HyperbolicModel, Hyperbolicity, Witness,
};
use cg_rotor_core::invariants::{bilinear, MaterialCoefficients, WeightedVector};
use cg_rotor_core::{CgEngine, FamilyKey, Matrix, RadicalScalar, Scalar};
use nalgebra::{Matrix3, Matrix6, SymmetricEigen};

fn iso_diag(lambda: &RadicalScalar, mu: &RadicalScalar) -> Matrix<RadicalScalar> {
    let one = RadicalScalar::one();
    let bulk = lambda * &RadicalScalar::from_integer(3) + mu * &RadicalScalar::from_integer(2);
    Matrix::from_fn(6, 6, |r, c| match (r, c) {
        (0, 0) => one.try_div(&bulk).unwrap(),
        (r, c) if r == c => one.try_div(mu).unwrap(),
        _ => RadicalScalar::zero(),
    })
}

#[test]
fn isotropic_compliance_is_diagonal_exactly() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    for (l, m) in [((2, 1), (1, 1)), ((3, 2), (5, 7)), ((-1, 3), (4, 1))] {
        let lambda = RadicalScalar::ratio(l.0, l.1);
        let mu = RadicalScalar::ratio(m.0, m.1);
        let want = iso_diag(&lambda, &mu);
        assert_eq!(component_compliance(&mut engine, &lambda, &mu).unwrap(), want);
        let coeffs = isotropic_coefficients(&lambda, &mu).unwrap();
        assert_eq!(assemble_a_hat(&mut engine, &coeffs).unwrap(), want);
    }
}

#[test]
fn calibration_is_exact_and_pairs_constants() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    let cal = calibrate_delta_constants(&mut engine, &RadicalScalar::from_integer(2), &RadicalScalar::one()).unwrap();
    assert_eq!(cal.residual, 0.0);
    let c = &cal.constants;
    assert_eq!(c.lower_1, c.raise_0);
    assert_eq!(c.lower_2, c.raise_1);
    assert!(!c.raise_0.is_zero() && !c.raise_1.is_zero());
}

#[test]
fn symbol_is_symmetric_and_time_matrix_positive() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    let model = HyperbolicModel::isotropic(&mut engine, &RadicalScalar::from_integer(2), &RadicalScalar::one(), RadicalScalar::one()).unwrap();
    let k = [RadicalScalar::ratio(2, 7), RadicalScalar::ratio(3, 7), RadicalScalar::ratio(6, 7)];
    let m = model.symbol(&mut engine, &k).unwrap();
    assert!(m.is_symmetric());
    assert_eq!(hyperbolicity_check(&model), Hyperbolicity::Hyperbolic);
    assert!(model.time_matrix().is_symmetric());
}

/// Stress tensor of the stress coordinates `y = (p̂, ŝ)`.
fn stress_tensor(g: &[Matrix3<f64>], y: &[f64]) -> Matrix3<f64> {
    let mut t = Matrix3::identity() * (y[0] / 3f64.sqrt());
    for (gj, yj) in g.iter().zip(&y[1..]) {
        t += gj * (yj * 2f64.sqrt());
    }
    t
}

/// Strain coordinates of a symmetric tensor, paired with [`stress_tensor`].
fn strain_coords(g: &[Matrix3<f64>], e: &Matrix3<f64>) -> [f64; 6] {
    let mut out = [0.0; 6];
    out[0] = e.trace() / 3f64.sqrt();
    for (j, gj) in g.iter().enumerate() {
        out[j + 1] = 2f64.sqrt() * gj.component_mul(e).sum();
    }
    out
}

/// Classical speeds: `√(eig(Γ)/ρ)` with the acoustic tensor
/// `Γ_ik = C_ijkl n_j n_l`, where `C` inverts the compliance `Â`.
fn christoffel_speeds(engine: &mut CgEngine<f64>, a_hat: &Matrix<f64>, rho: f64, n: [f64; 3]) -> Vec<f64> {
    let fam = engine.family(FamilyKey::new(1, 1, 2).unwrap()).unwrap();
    // Cartesian basis tensors P·G·P.
    let p = [1.0, -1.0, 1.0];
    let g: Vec<Matrix3<f64>> = fam.matrices().iter().map(|m| Matrix3::from_fn(|r, c| p[r] * p[c] * m.get(r, c))).collect();
    let stiff = Matrix6::from_fn(|r, c| *a_hat.get(r, c)).try_inverse().unwrap();
    let unit = |i: usize, j: usize| {
        let mut e = Matrix3::zeros();
        e[(i, j)] += 0.5;
        e[(j, i)] += 0.5;
        e
    };
    let mut gamma = Matrix3::<f64>::zeros();
    for k in 0..3 {
        for l in 0..3 {
            let y = stiff * nalgebra::Vector6::from_column_slice(&strain_coords(&g, &unit(k, l)));
            let sigma = stress_tensor(&g, y.as_slice());
            for i in 0..3 {
                for j in 0..3 {
                    gamma[(i, k)] += sigma[(i, j)] * n[j] * n[l];
                }
            }
        }
    }
    let mut v: Vec<f64> = SymmetricEigen::new(gamma).eigenvalues.iter().map(|e: &f64| (e / rho).sqrt()).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn positive_speeds(all: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = all.iter().copied().filter(|s| *s > 1e-9).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

#[test]
fn isotropic_speeds_match_acoustic_tensor() {
    let mut engine = CgEngine::<f64>::new();
    let (lambda, mu, rho) = (2.0, 1.0, 1.0);
    let model = HyperbolicModel::isotropic(&mut engine, &lambda, &mu, rho).unwrap();
    let p = ((lambda + 2.0 * mu) / rho).sqrt();
    let s = (mu / rho).sqrt();
    for dir in [[0.3, -0.5, 0.81], [1.0, 2.0, 3.0], [-0.7, 0.1, 0.2]] {
        let k = unit(dir);
        let speeds = plane_wave_speeds(&mut engine, &model, &k).unwrap();
        assert_eq!(speeds.len(), 9);
        let want = [-p, -s, -s, 0.0, 0.0, 0.0, s, s, p];
        for (a, b) in speeds.iter().zip(want) {
            assert!((a - b).abs() < 1e-10, "{speeds:?}");
        }
        let classical = christoffel_speeds(&mut engine, &model.a_hat, rho, k);
        for (a, b) in positive_speeds(&speeds).iter().zip(&classical) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn anisotropic_speeds_match_acoustic_tensor() {
    let mut engine = CgEngine::<f64>::new();
    let a = WeightedVector::new(2, vec![0.01, -0.02, 0.015, 0.0, 0.03]).unwrap();
    let b = WeightedVector::new(2, vec![0.02, 0.01, -0.01, 0.02, 0.0]).unwrap();
    let d = WeightedVector::new(4, vec![0.01, 0.0, -0.02, 0.01, 0.03, 0.0, 0.01, -0.01, 0.02]).unwrap();
    let m = MaterialCoefficients::new(0.125, 1.0, a, b, d).unwrap();
    let rho = 2.5;
    let model = HyperbolicModel::new(&mut engine, m, rho).unwrap();
    assert_eq!(hyperbolicity_check(&model), Hyperbolicity::Hyperbolic);
    for dir in [[0.3, -0.5, 0.81], [1.0, 0.0, 0.0], [0.2, 0.9, -0.4]] {
        let k = unit(dir);
        let speeds = plane_wave_speeds(&mut engine, &model, &k).unwrap();
        let classical = christoffel_speeds(&mut engine, &model.a_hat, rho, k);
        let pos = positive_speeds(&speeds);
        assert_eq!(pos.len(), 3);
        for (a, b) in pos.iter().zip(&classical) {
            assert!((a - b).abs() < 1e-10, "{pos:?} vs {classical:?}");
        }
    }
}

#[test]
fn hyperbolicity_witnesses() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    let (two, one) = (RadicalScalar::from_integer(2), RadicalScalar::one());
    let model = HyperbolicModel::isotropic(&mut engine, &two, &one, RadicalScalar::zero()).unwrap();
    assert_eq!(hyperbolicity_check(&model), Hyperbolicity::NotHyperbolic(Witness::NonPositiveDensity));
    let m = MaterialCoefficients::isotropic(-one.clone(), one.clone());
    let model = HyperbolicModel::new(&mut engine, m, one.clone()).unwrap();
    assert_eq!(hyperbolicity_check(&model), Hyperbolicity::NotHyperbolic(Witness::LeadingMinor(1)));
    // A large coupling a₋₂ breaks positivity at the second minor.
    let mut a = WeightedVector::zeros(2);
    a = WeightedVector::new(2, a.iter().map(|(n, _)| if n == -2 { two.clone() } else { RadicalScalar::zero() }).collect()).unwrap();
    let m = MaterialCoefficients::new(one.clone(), one.clone(), a, WeightedVector::zeros(2), WeightedVector::zeros(4)).unwrap();
    let model = HyperbolicModel::new(&mut engine, m, one.clone()).unwrap();
    assert_eq!(hyperbolicity_check(&model), Hyperbolicity::NotHyperbolic(Witness::LeadingMinor(2)));
    assert!(plane_wave_speeds(&mut CgEngine::<f64>::new(), &HyperbolicModel::new(&mut CgEngine::new(), MaterialCoefficients::isotropic(-1.0, 1.0), 1.0).unwrap(), &[1.0, 0.0, 0.0]).is_err());
}

#[test]
fn energy_is_half_the_hessian_form() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    let q = RadicalScalar::ratio;
    let a = WeightedVector::new(2, vec![q(1, 2), q(-1, 3), q(0, 1), q(2, 5), q(1, 7)]).unwrap();
    let b = WeightedVector::new(2, vec![q(0, 1), q(1, 4), q(-2, 3), q(1, 1), q(3, 2)]).unwrap();
    let d = WeightedVector::new(4, (0..9).map(|i| q(i - 4, 9)).collect()).unwrap();
    let m = MaterialCoefficients::new(q(3, 2), q(5, 4), a, b, d).unwrap();
    let p = q(2, 3);
    let s = WeightedVector::new(2, vec![q(1, 1), q(-1, 2), q(1, 3), q(0, 1), q(2, 1)]).unwrap();
    let energy = linear_energy(&mut engine, &p, &s, &m).unwrap();
    let h = assemble_a_hat(&mut engine, &m.energy_hessian()).unwrap();
    let mut x = vec![p.clone()];
    x.extend(s.components().iter().cloned());
    assert_eq!(bilinear(&x, &h, &x) * q(1, 2), energy);
}

#[test]
fn weight_zero_two_rows_are_coordinate_vectors() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    let fam = engine.family(FamilyKey::new(0, 2, 2).unwrap()).unwrap();
    for (n, g) in fam.iter() {
        let want = Matrix::from_fn(1, 5, |_, c| if c as i64 - 2 == n { RadicalScalar::one() } else { RadicalScalar::zero() });
        assert_eq!(g, &want);
    }
}

use cg_rotor_core::invariants::{crystal_reduce, crystal_reduce_system, fixed_subspace, kernel, CrystalSystem};
use cg_rotor_core::irreps::{axis_rotation, rep_matrix};
use cg_rotor_core::{Axis, CgEngine, Matrix, RadicalScalar, Ring};

fn counts<S: cg_rotor_core::Scalar>() -> Vec<(&'static str, usize)> {
    let mut engine = CgEngine::<S>::new();
    CrystalSystem::ALL.iter().map(|s| (s.name(), crystal_reduce_system(&mut engine, *s).unwrap().count)).collect()
}

const EXPECTED: [(&str, usize); 8] = [
    ("triclinic", 21),
    ("monoclinic", 13),
    ("rhombic", 9),
    ("tetragonal", 6),
    ("trigonal", 6),
    ("hexagonal", 5),
    ("cubic", 3),
    ("isotropic", 2),
];

#[test]
fn parameter_counts_exact() {
    assert_eq!(counts::<RadicalScalar>(), EXPECTED);
}

#[test]
fn parameter_counts_float() {
    assert_eq!(counts::<f64>(), EXPECTED);
}

#[test]
fn surviving_indices() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    let mono = crystal_reduce_system(&mut engine, CrystalSystem::Monoclinic).unwrap();
    assert_eq!(mono.a.indices, Some(vec![-1, 0, 2]));
    assert_eq!(mono.b.indices, Some(vec![-1, 0, 2]));
    assert_eq!(mono.d.indices, Some(vec![-3, -1, 0, 2, 4]));
    let rhombic = crystal_reduce_system(&mut engine, CrystalSystem::Rhombic).unwrap();
    assert_eq!(rhombic.a.indices, Some(vec![0, 2]));
    assert_eq!(rhombic.d.indices, Some(vec![0, 2, 4]));
    let tri = crystal_reduce_system(&mut engine, CrystalSystem::Triclinic).unwrap();
    assert_eq!(tri.d.indices, Some((-4..=4).collect()));
    let iso = crystal_reduce_system(&mut engine, CrystalSystem::Isotropic).unwrap();
    assert_eq!((iso.a.dim(), iso.d.dim()), (0, 0));
}

#[test]
fn cubic_block_is_a_fixed_combination() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    let cubic = crystal_reduce_system(&mut engine, CrystalSystem::Cubic).unwrap();
    assert_eq!(cubic.d.dim(), 1);
    let v = cubic.d.basis[0].components().to_vec();
    for u in CrystalSystem::Cubic.generators::<RadicalScalar>() {
        let rho = rep_matrix(&mut engine, 4, &u).unwrap();
        assert_eq!(rho.transpose().mul_vec(&v), v);
    }
}

#[test]
fn custom_generators_match_presets() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    let (z, o) = (RadicalScalar::zero(), RadicalScalar::one());
    let r2 = axis_rotation(Axis::M1, -o.clone(), z.clone());
    let red = crystal_reduce(&mut engine, "custom", vec![r2]).unwrap();
    assert_eq!(red.count, 13);
    let none = crystal_reduce::<RadicalScalar>(&mut engine, "none", vec![]).unwrap();
    assert_eq!(none.count, 21);
    let bad = Matrix::from_fn(3, 3, |r, c| if r == c { o.clone() + o.clone() } else { z.clone() });
    assert!(crystal_reduce(&mut engine, "bad", vec![bad]).is_err());
}

#[test]
fn kernel_of_small_exact_matrices() {
    let q = RadicalScalar::ratio;
    let m = Matrix::from_rows(vec![vec![q(1, 1), q(2, 1), q(3, 1)], vec![q(2, 1), q(4, 1), q(6, 1)]]);
    let k = kernel(&m).unwrap();
    assert_eq!(k.len(), 2);
    for v in &k {
        assert!(m.mul_vec(v).iter().all(Ring::is_zero));
    }
    let r = RadicalScalar::sqrt_integer(2) + RadicalScalar::one();
    let m = Matrix::from_rows(vec![vec![r.clone(), q(1, 1)], vec![q(1, 1), RadicalScalar::sqrt_integer(2) - RadicalScalar::one()]]);
    let k = kernel(&m).unwrap();
    assert_eq!(k.len(), 1);
    assert!(m.mul_vec(&k[0]).iter().all(Ring::is_zero));
    assert_eq!(fixed_subspace(&[Matrix::<RadicalScalar>::identity(4)]).unwrap().len(), 4);
}

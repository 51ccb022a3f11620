mod common;

use cg_rotor_core::cg::keys_up_to;
use cg_rotor_core::oracle::{compare, oracle_family_h, racah_exact, OracleStatus};
use cg_rotor_core::{CgEngine, RadicalScalar};

#[test]
fn racah_values_for_small_couplings() {
    // ⟨1 1 1 −1 | 0 0⟩ = 1/√3, ⟨1 1 1 0 | 2 1⟩ = 1/√2, ⟨1 0 1 0 | 2 0⟩ = √(2/3).
    assert_eq!(racah_exact(1, 1, 1, -1, 0, 0).unwrap().to_string(), "1/3*sqrt(3)");
    assert_eq!(racah_exact(1, 1, 1, 0, 2, 1).unwrap().to_string(), "1/2*sqrt(2)");
    assert_eq!(racah_exact(1, 0, 1, 0, 2, 0).unwrap().to_string(), "1/3*sqrt(6)");
    assert!(racah_exact(1, 0, 1, 0, 1, 0).unwrap().is_zero());
    assert!(racah_exact(1, 1, 1, 1, 1, 1).unwrap().is_zero());
}

#[test]
fn racah_swap_symmetry() {
    for (n1, n2, n) in [(1u32, 2u32, 2u32), (2, 3, 4), (3, 3, 3), (2, 2, 1)] {
        let sign = if (n1 + n2 - n) % 2 == 0 { RadicalScalar::one() } else { -RadicalScalar::one() };
        for m1 in -(n1 as i64)..=n1 as i64 {
            for m2 in -(n2 as i64)..=n2 as i64 {
                let m = m1 + m2;
                if m.abs() > n as i64 {
                    continue;
                }
                let a = racah_exact(n1, m1, n2, m2, n, m).unwrap();
                let b = racah_exact(n2, m2, n1, m1, n, m).unwrap();
                assert_eq!(a, &b * &sign);
            }
        }
    }
}

#[test]
fn three_stage_families_agree_with_racah_up_to_weight_four() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    for k in keys_up_to(4) {
        let main = engine.family(k).unwrap();
        let report = compare(&main, &oracle_family_h(k).unwrap()).unwrap();
        assert_eq!(report.status, OracleStatus::Match, "{k:?}: {report:?}");
        assert_eq!(report.max_discrepancy, 0.0);
        assert_eq!(report.global_sign, 1, "{k:?}");
    }
}

#[test]
fn float_oracle_agrees() {
    let mut engine = CgEngine::<f64>::new();
    for k in keys_up_to(5) {
        let main = engine.family(k).unwrap();
        let report = compare(&main, &oracle_family_h::<f64>(k).unwrap()).unwrap();
        assert_eq!(report.status, OracleStatus::Match, "{k:?}");
        assert!(report.max_discrepancy < 1e-12);
    }
}

#[test]
fn a_corrupted_entry_is_reported() {
    let mut engine = CgEngine::<RadicalScalar>::new();
    let k = common::key(2, 1, 2);
    let fam = engine.family(k).unwrap();
    let mut mats = fam.matrices().to_vec();
    let v = mats[3].get(0, 0).clone() + RadicalScalar::ratio(1, 7);
    mats[3].set(0, 0, v);
    let bad = cg_rotor_core::CgFamily::new(k, fam.basis(), mats);
    let report = compare(&bad, &oracle_family_h(k).unwrap()).unwrap();
    assert_eq!(report.status, OracleStatus::Mismatch);
    let at = report.first_mismatch.unwrap();
    assert_eq!((at.n, at.n1, at.n2), (1, -2, -1));
}

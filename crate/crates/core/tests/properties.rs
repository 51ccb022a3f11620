mod common;

use common::props::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn parseval_reconstruction(case in parseval_case()) {
        parseval(case)?;
    }

    #[test]
    fn skew_families_give_vanishing_forms(case in skew_case()) {
        skew_vanishing(case)?;
    }

    #[test]
    fn weighted_quadratic_forms_are_invariant(case in invariance_case()) {
        form_invariance(case)?;
    }

    #[test]
    fn symbol_equivariance_under_rotations(case in equivariance_case()) {
        symbol_equivariance(case)?;
    }

    #[test]
    fn radix_field_axioms(case in radix_case()) {
        radix_field(case)?;
    }
}

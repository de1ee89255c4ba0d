mod common;

use std::sync::Arc;

use common::{random_filtered_module, truncated_over_field, w};
use dgsmooth::dga::{amplitude, amplitude_obstruction, Amplitude, AmplitudeVerdict, DgObject};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn perfect_modules_have_large_amplitude(seed in any::<u64>(), n in 2u32..=3) {
        let a = Arc::new(truncated_over_field(n));
        let m = random_filtered_module(&a, n, seed);
        let window = w(-12, 24);
        prop_assert_eq!(amplitude_obstruction(&a, &m, window).unwrap(), AmplitudeVerdict::NoObstruction);
        let h = m.cohomology(m.certified_window(window));
        prop_assert!(h.complete);
        match amplitude(&h) {
            Amplitude::Bounded(ampl) => {
                prop_assert!(ampl >= 2 * (n - 1), "amplitude {} for {}", ampl, h.dims);
                prop_assert!(h.dims.get(h.dims.max_degree().unwrap()) >= 1);
            }
            other => prop_assert!(false, "unexpected amplitude {:?}", other),
        }
    }
}

#[test]
fn residue_field_is_obstructed() {
    for n in [2, 3] {
        let a = Arc::new(truncated_over_field(n));
        let k = dgsmooth::dga::DgModulePresentation::augmentation(&a).unwrap();
        assert!(matches!(
            amplitude_obstruction(&a, &k, w(-4, 12)).unwrap(),
            AmplitudeVerdict::NotPerfect { .. }
        ));
    }
}

#[test]
fn generator_produces_nontrivial_differentials() {
    for n in [2, 3] {
        let a = Arc::new(truncated_over_field(n));
        let nontrivial = (0..100).filter(|&s| !random_filtered_module(&a, n, s).has_zero_differential()).count();
        assert!(nontrivial >= 30, "n={n}: only {nontrivial}");
    }
}

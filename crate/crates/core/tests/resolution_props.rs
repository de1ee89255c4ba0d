mod common;

use common::{koszul_tor, random_module, w};
use dgsmooth::algebra::QuotientRing;
use dgsmooth::module::{GradedDimVector, GradedModulePresentation};
use dgsmooth::par::Execution;
use dgsmooth::resolution::{self, ProjectiveDimension};
use proptest::prelude::*;

const WINDOW_HI: i32 = 12;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn resolution_matches_koszul(seed in any::<u64>()) {
        let m = random_module(seed);
        let s = m.ring().num_vars();
        let ring = QuotientRing::polynomial(m.ring().clone());
        let window = w(-2, WINDOW_HI);
        let res = resolution::resolve(&ring, &m, s + 1, window);

        prop_assert!(res.is_minimal(&ring));
        prop_assert_eq!(res.verify_exactness(&ring, &m, &window), Ok(()));
        match res.projective_dimension() {
            ProjectiveDimension::ZeroModule => {}
            ProjectiveDimension::Finite(pd) => prop_assert!(pd <= s),
            ProjectiveDimension::Truncated => prop_assert!(false, "truncated over a polynomial ring"),
        }
        for p in 0..=s {
            for t in window.degrees() {
                let ours = if p < res.len() {
                    res.generator_degrees(p).iter().filter(|&&g| g == t).count()
                } else {
                    0
                };
                prop_assert_eq!(ours, koszul_tor(&m, p, t), "Tor_{} in degree {}", p, t);
            }
        }
    }

    #[test]
    fn derived_fiber_is_the_koszul_total(seed in any::<u64>()) {
        let m = random_module(seed);
        let s = m.ring().num_vars();
        let fiber = resolution::derived_fiber(&m, w(-2, WINDOW_HI), s + 1).unwrap();
        prop_assert!(!fiber.lower_bound_only);
        // total degree n collects Tor_p in internal degree n + p
        for n in -2 - s as i32..=WINDOW_HI - s as i32 {
            let expected: usize = (0..=s).map(|p| koszul_tor(&m, p, n + p as i32)).sum();
            prop_assert_eq!(fiber.dims.get(n), expected, "degree {}", n);
        }
    }

    #[test]
    fn sequential_equals_parallel(seed in any::<u64>()) {
        let m = random_module(seed);
        let ring = QuotientRing::polynomial(m.ring().clone());
        let s = m.ring().num_vars();
        let a = resolution::resolve_with(Execution::Auto, &ring, &m, s + 1, w(-2, 10));
        let b = resolution::resolve_with(Execution::Sequential, &ring, &m, s + 1, w(-2, 10));
        prop_assert_eq!(a.derived_fiber(), b.derived_fiber());
        prop_assert_eq!(a.projective_dimension(), b.projective_dimension());
    }

    #[test]
    fn totalization_is_quasi_isomorphic_to_the_module(seed in any::<u64>()) {
        let m = random_module(seed);
        let ring = QuotientRing::polynomial(m.ring().clone());
        let s = m.ring().num_vars();
        let res = resolution::resolve(&ring, &m, s + 1, w(-3, WINDOW_HI + s as i32 + 2));
        let tot = res.totalize(&ring, &m, w(-3, WINDOW_HI));
        prop_assert!(tot.is_complex());
        prop_assert!(tot.valid_hi >= WINDOW_HI);
        let h = tot.cohomology();
        for n in -2..=WINDOW_HI {
            prop_assert_eq!(h.get(n), m.dim(n), "degree {}", n);
            // the augmentation maps cocycles onto M^n
            let cocycles = tot.differentials[&n].kernel_basis();
            prop_assert_eq!(tot.augmentations[&n].mul(&cocycles).rank(), m.dim(n));
        }
    }
}

#[test]
fn residue_field_and_free_module() {
    let r = common::qx();
    let k = GradedModulePresentation::cyclic(r.clone(), vec![r.parse("x").unwrap()]).unwrap();
    let fiber = resolution::derived_fiber(&k, w(-2, 12), 2).unwrap();
    assert_eq!(fiber.dims, GradedDimVector::from_pairs([(0, 1), (1, 1)]));
    assert_eq!(resolution::projective_dimension(&k, None, w(-2, 12)).unwrap(), ProjectiveDimension::Finite(1));
    let free = GradedModulePresentation::free_rank_one(r);
    assert_eq!(resolution::projective_dimension(&free, None, w(-2, 12)).unwrap(), ProjectiveDimension::Finite(0));
}

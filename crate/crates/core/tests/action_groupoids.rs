mod common;

use std::sync::Arc;

use bcgroupoid::amenability::{amenable_vanishing_check, dual_coefficient_mean, uniform_mean};
use bcgroupoid::coefficients::trivial_module;
use bcgroupoid::cohomology::{cochain_complex, equivalence_invariance_check};
use bcgroupoid::groupoid::{skeleton_retraction, FiniteGroupoid, GroupTable};
use bcgroupoid::resolutions::BarComplex;
use bcgroupoid::Limits;
use proptest::prelude::*;

use common::invariant_dim;

/// `Z/n` acting on points by the rotation that cycles each block.
fn action(n: usize, blocks: &[bool]) -> Vec<Vec<usize>> {
    let mut gen = Vec::new();
    for &cycle in blocks {
        let start = gen.len();
        if cycle {
            gen.extend((0..n).map(|i| start + (i + 1) % n));
        } else {
            gen.push(start);
        }
    }
    let points = gen.len();
    let mut perms = vec![(0..points).collect::<Vec<_>>()];
    for _ in 1..n {
        let last = perms.last().unwrap();
        perms.push(last.iter().map(|&p| gen[p]).collect());
    }
    perms
}

fn groupoid() -> impl Strategy<Value = (usize, Vec<bool>)> {
    (2usize..=3, prop::collection::vec(any::<bool>(), 1..=3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn structure_of_action_groupoids((n, blocks) in groupoid()) {
        let g = Arc::new(FiniteGroupoid::action_groupoid(&GroupTable::cyclic(n), &action(n, &blocks)).unwrap());
        let lim = Limits::default();
        prop_assert_eq!(g.component_partition().len(), blocks.len());

        let c = BarComplex::inhomogeneous(&g, 3, lim.path_cap).unwrap();
        prop_assert!(c.boundary(1).mul(&c.boundary(2)).is_zero());
        prop_assert!(c.boundary(2).mul(&c.boundary(3)).is_zero());

        let v = Arc::new(trivial_module(&g));
        let cc = cochain_complex(&v, 2, lim.path_cap).unwrap();
        prop_assert!(cc.complex.squares_to_zero());
        let hs = cc.complex.cohomology_all().unwrap();
        prop_assert_eq!(hs[0].dim, invariant_dim(&v));
        prop_assert_eq!(hs[0].dim, blocks.len());

        let r = amenable_vanishing_check(&v, 2, &lim).unwrap();
        prop_assert!(r.passed());

        let m = uniform_mean(&g);
        prop_assert!(m.audit().unwrap().passed());
        prop_assert!(dual_coefficient_mean(&m, &v).unwrap().audit().unwrap().passed());

        let ret = skeleton_retraction(&g, None).unwrap();
        prop_assert_eq!(ret.skeleton.num_objects(), blocks.len());
        let e = equivalence_invariance_check(&ret.include, &v, 2, &lim).unwrap();
        prop_assert!(e.passed());
    }
}

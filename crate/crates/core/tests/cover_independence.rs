mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use twogroups::cohomology::*;
use twogroups::groupoid::GroupTable;
use twogroups::random::rng;

fn complexes(g: &GroupTable, a: &FiniteAbelianGroup) -> [DoubleComplex; 3] {
    let rho = GAction::trivial(g, a);
    [
        SimplicialCover::identity(g, 4),
        SimplicialCover::uniform(g, 2, 4),
        SimplicialCover::mixed(g, 4),
    ]
    .map(|c| DoubleComplex::new(&c, a, &rho, 3, 4).unwrap())
}

#[test]
fn h3_agrees_with_bar_cohomology_on_every_cover() {
    for n in [2usize, 3] {
        let g = z(n);
        for m in [2u64, 3] {
            let a = za(m);
            let bar = cohomology_group_with(&g, &a, &GAction::trivial(&g, &a), 3, true).unwrap();
            for dc in complexes(&g, &a) {
                assert_eq!(
                    dc.cohomology(3).unwrap().invariant_factors(),
                    bar.invariant_factors(),
                    "Z/{n}, Z/{m}"
                );
            }
        }
    }
}

#[test]
fn included_bar_generators_stay_independent() {
    let (g, a) = (z(3), za(3));
    let bar = cohomology_group_with(&g, &a, &GAction::trivial(&g, &a), 3, true).unwrap();
    for dc in complexes(&g, &a) {
        let h = dc.cohomology(3).unwrap();
        let mut seen: Vec<usize> = (0..3)
            .map(|k| {
                let c = Cochain {
                    values: bar.generators()[0]
                        .values
                        .iter()
                        .map(|&v| a.scale(v, k))
                        .collect(),
                    ..bar.generators()[0].clone()
                };
                h.class_index(&dc, &dc.include_bar(&c)).unwrap()
            })
            .collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 3);
    }
}

#[test]
fn refinement_to_base_commutes_with_include_bar() {
    let (g, a) = (z(2), za(2));
    let [d_id, d_uni, _] = complexes(&g, &a);
    let map = CoverMap::to_base(&g, &SimplicialSet::constant(2, 4));
    let bar = cohomology_group_with(&g, &a, &GAction::trivial(&g, &a), 3, true).unwrap();
    let alpha = &bar.generators()[0];
    let pulled = d_id.pull_back(&map, &d_uni, &d_id.include_bar(alpha));
    assert_eq!(pulled.parts, d_uni.include_bar(alpha).parts);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn class_survives_coboundary_perturbation(seed in any::<u64>(), n in 2usize..4, m in 2u64..4) {
        let (g, a) = (z(n), za(m));
        let rho = GAction::trivial(&g, &a);
        let bar = cohomology_group_with(&g, &a, &rho, 3, true).unwrap();
        let mut r = rng(seed);
        let alpha = random_cocycle(&bar, &g, &a, &rho, &mut r);
        let [_, d_uni, d_mixed] = complexes(&g, &a);
        for dc in [d_uni, d_mixed] {
            let h = dc.cohomology(3).unwrap();
            let base = dc.join(&dc.include_bar(&alpha));
            let noise: Vec<usize> = (0..dc.total.dim(2)).map(|_| r.gen_range(0..a.order())).collect();
            let moved = dc.total.add(&base, &dc.total.apply(2, &noise));
            prop_assert!(dc.cocycle_failure(&dc.split(3, &moved)).is_none());
            prop_assert_eq!(h.class_index(&dc, &dc.split(3, &base)), h.class_index(&dc, &dc.split(3, &moved)));
        }
    }
}

mod common;

use common::*;
use proptest::prelude::*;
use twogroups::cohomology::*;
use twogroups::extension::*;
use twogroups::groupoid::GroupTable;
use twogroups::random::{rng, Rng8};
use twogroups::twogroup::{realize_skeletal_unchecked, verify_coherence, SkeletalTwoGroup};

fn small_group(k: usize) -> GroupTable {
    [GroupTable::trivial(), z(2), z(3), z(4), v4()][k].clone()
}

fn small_coeff(k: usize) -> FiniteAbelianGroup {
    [za(2), za(3), za(4), FiniteAbelianGroup::new(&[2, 2])][k].clone()
}

fn pick<T: Clone>(r: &mut Rng8, xs: &[T]) -> T {
    xs[rand::Rng::gen_range(r, 0..xs.len())].clone()
}

fn random_skeletal(gk: usize, ak: usize, seed: u64) -> SkeletalTwoGroup {
    let (g, a) = (small_group(gk), small_coeff(ak));
    let mut r = rng(seed);
    let rho = pick(&mut r, &all_actions(&g, &a));
    let h = cohomology_group_with(&g, &a, &rho, 3, true).unwrap();
    let alpha = random_cocycle(&h, &g, &a, &rho, &mut r);
    SkeletalTwoGroup {
        pi0: g,
        pi1: a,
        rho,
        alpha,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pentagon_holds_exactly_for_cocycles(seed in any::<u64>(), n in 2usize..4, m in 2u64..4, perturb in any::<bool>()) {
        let (g, a) = (z(n), za(m));
        let rho = GAction::trivial(&g, &a);
        let h = cohomology_group_with(&g, &a, &rho, 3, true).unwrap();
        let mut r = rng(seed);
        let alpha = if perturb { random_normalized(&g, &a, 3, &mut r) } else { random_cocycle(&h, &g, &a, &rho, &mut r) };
        let cocycle = bar_differential(&alpha, &g, &a, &rho).values.iter().all(|&v| v == 0);
        let s = SkeletalTwoGroup { pi0: g, pi1: a, rho, alpha };
        prop_assert_eq!(verify_coherence(&realize_skeletal_unchecked(&s)).ok(), cocycle);
    }

    #[test]
    fn chain_homotopy_groups_match_homology(seed in any::<u64>()) {
        let c = ThreeTermComplex::random(&mut rng(seed), 6);
        let d = chain_bicategory(&c).unwrap();
        let (p0, p1, p2) = homotopy_groups(&d);
        prop_assert_eq!([order_stats(&p0), order_stats(&p1), order_stats(&p2)], chain_oracle(&c));
    }

    #[test]
    fn skeletal_round_trip(gk in 0usize..5, ak in 0usize..4, seed in any::<u64>()) {
        let s = random_skeletal(gk, ak, seed);
        prop_assert_eq!(round_trip_failure(&s), None);
    }

    #[test]
    fn central_iff_trivial_action(gk in 0usize..4, ak in 0usize..3, seed in any::<u64>()) {
        let s = random_skeletal(gk, ak, seed);
        let e = skeletal_extension(&s).unwrap();
        let c = is_central(&e).unwrap();
        prop_assert_eq!(c.central, s.rho.is_trivial());
        prop_assert_eq!(c.action.tables(), s.rho.tables());
    }

    #[test]
    fn constructed_extensions_pass_checks(gk in 0usize..4, ak in 0usize..3, seed in any::<u64>()) {
        let s = random_skeletal(gk, ak, seed);
        let e = skeletal_extension(&s).unwrap();
        prop_assert!(check_extension(&e).ok());
        prop_assert!(kernel_square_check(&e).ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn baer_sum_adds_classes(n in 2usize..4, m in 2u64..4, seed in any::<u64>()) {
        let (g, a) = (z(n), za(m));
        let rho = GAction::trivial(&g, &a);
        let h = cohomology_group_with(&g, &a, &rho, 3, true).unwrap();
        let mut r = rng(seed);
        let x = random_cocycle(&h, &g, &a, &rho, &mut r);
        let y = random_cocycle(&h, &g, &a, &rho, &mut r);
        let ext = |c: &Cochain| skeletal_extension(&SkeletalTwoGroup { pi0: g.clone(), pi1: a.clone(), rho: rho.clone(), alpha: c.clone() }).unwrap();
        let s = baer_sum(&ext(&x), &ext(&y)).unwrap();
        let alpha = skeletalize_extension(&s).unwrap().skeletal.alpha;
        prop_assert!(h.cohomologous(&alpha, &x.add(&a, &y)).is_some());
    }
}

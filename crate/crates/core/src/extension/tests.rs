use super::*;
use crate::cohomology::{cohomology_group_with, Cochain, DoubleComplex, SimplicialCover};

fn z(n: usize) -> GroupTable {
    GroupTable::cyclic(n)
}

fn za(n: u64) -> FiniteAbelianGroup {
    FiniteAbelianGroup::cyclic(n)
}

/// `α(1,1,1) = 1` on `Z/2` with values in `Z/2`.
fn odd_alpha(g: &GroupTable) -> Cochain {
    Cochain::from_fn(g, 3, |t| usize::from(t == [1, 1, 1]))
}

fn complex(cover: &SimplicialCover, a: &FiniteAbelianGroup) -> DoubleComplex {
    let g = &cover.group;
    DoubleComplex::new(cover, a, &GAction::trivial(g, a), 3, 4).unwrap()
}

#[test]
fn identity_cover_extension_is_coherent() {
    let (g, a) = (z(2), za(2));
    let dc = complex(&SimplicialCover::identity(&g, 4), &a);
    let e = extension_from_cocycle(&dc, &dc.include_bar(&odd_alpha(&g))).unwrap();
    assert!(check_extension(&e).ok());
    let s = skeletalize_extension(&e).unwrap().skeletal;
    let h3 = cohomology_group_with(&g, &a, &GAction::trivial(&g, &a), 3, true).unwrap();
    assert!(h3.cohomologous(&s.alpha, &odd_alpha(&g)).is_some());
}

#[test]
fn uniform_and_mixed_covers_give_coherent_extensions() {
    let (g, a) = (z(2), za(2));
    for cover in [
        SimplicialCover::uniform(&g, 2, 4),
        SimplicialCover::mixed(&g, 4),
    ] {
        let dc = complex(&cover, &a);
        let lam = dc.include_bar(&odd_alpha(&g));
        let e = extension_from_cocycle(&dc, &lam).unwrap();
        let r = check_extension(&e);
        assert!(r.ok(), "{:?}", r.first_violation());
        let s = skeletalize_extension(&e).unwrap().skeletal;
        let h3 = cohomology_group_with(&g, &a, &GAction::trivial(&g, &a), 3, true).unwrap();
        assert!(h3.cohomologous(&s.alpha, &odd_alpha(&g)).is_some());
    }
}

fn random_total(dc: &DoubleComplex, n: usize, seed: u64) -> crate::cohomology::TotalCochain {
    use rand::Rng;
    let mut rng = crate::random::rng(seed);
    let x: Vec<usize> = (0..dc.total.dim(n))
        .map(|_| rng.gen_range(0..dc.a.order()))
        .collect();
    dc.split(n, &x)
}

fn shifted(
    dc: &DoubleComplex,
    lam: &crate::cohomology::TotalCochain,
    c: &crate::cohomology::TotalCochain,
) -> crate::cohomology::TotalCochain {
    let x = dc
        .total
        .add(&dc.join(lam), &dc.total.apply(c.degree, &dc.join(c)));
    dc.split(lam.degree, &x)
}

#[test]
fn perturbed_cocycle_on_doubled_cover() {
    let (g, a) = (z(2), za(2));
    let dc = complex(&SimplicialCover::uniform(&g, 2, 4), &a);
    let lam = dc.include_bar(&odd_alpha(&g));
    let e = extension_from_cocycle(&dc, &lam).unwrap();
    for seed in 0..4 {
        let c = random_total(&dc, 2, seed);
        let lam2 = shifted(&dc, &lam, &c);
        let e2 = extension_from_cocycle(&dc, &lam2).unwrap();
        assert!(check_extension(&e2).ok());
        // Dc = λ2 − λ
        let m = morphism_from_cochain(&dc, &e2, &e, &c).unwrap();
        assert!(check_extension_morphism(&e2, &e, &m).ok());
        assert!(find_extension_morphism(&e, &e2).unwrap().is_some());
    }
}

#[test]
fn zero_theta_is_identity_functor() {
    let (g, a) = (z(2), za(2));
    let dc = complex(&SimplicialCover::mixed(&g, 4), &a);
    let lam = dc.include_bar(&odd_alpha(&g));
    let e = extension_from_cocycle(&dc, &lam).unwrap();
    let m = morphism_from_cochain(&dc, &e, &e, &dc.zero(2)).unwrap();
    let n = e.total.groupoid.n_morphisms();
    assert!((0..n).all(|f| m.hom.functor.mor[f] == f));
}

#[test]
fn closed_theta_composition_law() {
    let (g, a) = (z(2), za(2));
    let dc = complex(&SimplicialCover::uniform(&g, 2, 4), &a);
    let lam = dc.zero(3);
    let e = extension_from_cocycle(&dc, &lam).unwrap();
    // closed 2-cochains: coboundaries of 1-cochains
    let t1 = dc.split(2, &dc.total.apply(1, &dc.join(&random_total(&dc, 1, 1))));
    let t2 = dc.split(2, &dc.total.apply(1, &dc.join(&random_total(&dc, 1, 2))));
    let sum = dc.split(2, &dc.total.add(&dc.join(&t1), &dc.join(&t2)));
    let p1 = morphism_from_cochain(&dc, &e, &e, &t1).unwrap();
    let p2 = morphism_from_cochain(&dc, &e, &e, &t2).unwrap();
    let p12 = morphism_from_cochain(&dc, &e, &e, &sum).unwrap();
    let composed = p1.hom.then(&p2.hom);
    assert_eq!(composed.functor.mor, p12.hom.functor.mor);
    assert!(find_two_hom(&composed, &p12.hom).is_some());
}

#[test]
fn two_morphism_from_coboundary() {
    let (g, a) = (z(2), za(2));
    let dc = complex(&SimplicialCover::uniform(&g, 2, 4), &a);
    let lam = dc.include_bar(&odd_alpha(&g));
    let e = extension_from_cocycle(&dc, &lam).unwrap();
    let theta2 = dc.zero(2);
    let omega = random_total(&dc, 1, 9);
    let theta = shifted(&dc, &theta2, &omega);
    let p = morphism_from_cochain(&dc, &e, &e, &theta).unwrap();
    let q = morphism_from_cochain(&dc, &e, &e, &theta2).unwrap();
    two_morphism_from_cochain(&dc, &p, &q, &omega, &theta, &theta2).unwrap();
    let zero = dc.zero(1);
    assert!(two_morphism_from_cochain(&dc, &q, &q, &zero, &theta2, &theta2).is_ok());
    let dim = dc.total.dim(1);
    let unit = |i: usize| (0..dim).map(|j| usize::from(i == j)).collect::<Vec<_>>();
    let i = (0..dim)
        .find(|&i| dc.total.apply(1, &unit(i)).iter().any(|&v| v != 0))
        .unwrap();
    let bad = dc.split(1, &unit(i));
    assert!(two_morphism_from_cochain(&dc, &q, &q, &bad, &theta2, &theta2).is_err());
}

fn skeletal(
    g: &GroupTable,
    a: &FiniteAbelianGroup,
    rho: GAction,
    alpha: Cochain,
) -> SkeletalTwoGroup {
    SkeletalTwoGroup {
        pi0: g.clone(),
        pi1: a.clone(),
        rho,
        alpha,
    }
}

#[test]
fn zero_cocycle_gives_product() {
    let (g, a) = (z(3), za(2));
    let dc = complex(&SimplicialCover::uniform(&g, 2, 4), &a);
    let e = extension_from_cocycle(&dc, &dc.zero(3)).unwrap();
    let triv = skeletal_extension(&skeletal(
        &g,
        &a,
        GAction::trivial(&g, &a),
        Cochain::zero(&g, 3),
    ))
    .unwrap();
    assert!(find_extension_morphism(&e, &triv).unwrap().is_some());
    assert!(is_central(&e).unwrap().central);
}

#[test]
fn inversion_action_is_not_central() {
    let (g, a) = (z(2), za(3));
    let rho = GAction::from_tables(vec![vec![0, 1, 2], vec![0, 2, 1]]);
    let e = skeletal_extension(&skeletal(&g, &a, rho.clone(), Cochain::zero(&g, 3))).unwrap();
    let c = is_central(&e).unwrap();
    assert!(!c.central);
    assert_eq!(c.action.tables(), rho.tables());
}

#[test]
fn point_base_extension_needs_bijective_phi() {
    let a = za(4);
    let e = trivial_group_extension(&a, &[0, 3, 2, 1]).unwrap();
    assert!(check_extension(&e).ok());
    assert!(is_central(&e).unwrap().central);
    if let Ok(e) = trivial_group_extension(&a, &[0, 2, 0, 2]) {
        assert!(!e.principality().holds());
        assert!(!kernel_square_check(&e).ok());
    }
}

#[test]
fn kernel_square_on_nontrivial_extension() {
    let (g, a) = (z(2), za(2));
    let dc = complex(&SimplicialCover::identity(&g, 4), &a);
    let e = extension_from_cocycle(&dc, &dc.include_bar(&odd_alpha(&g))).unwrap();
    let r = kernel_square_check(&e);
    assert!(r.ok(), "{:?}", r.first_violation());
    let t = extension_from_cocycle(&dc, &dc.zero(3)).unwrap();
    assert!(kernel_square_check(&t).ok());
}

#[test]
fn classification_counts() {
    for (g, a, n) in [(z(2), za(2), 2), (z(3), za(2), 1), (z(2), za(3), 1)] {
        let c = classify_extensions(&g, &a, DEFAULT_MAX_SEARCH, 20, 1).unwrap();
        assert_eq!(c.n_classes(), n);
        assert_eq!(c.h3_order, n);
        assert!(c.report.ok(), "{:?}", c.report.first_violation());
    }
}

#[test]
fn search_bound_is_enforced() {
    let r = classify_extensions(&z(8), &za(8), DEFAULT_MAX_SEARCH, 10, 0);
    assert!(matches!(r, Err(crate::error::Error::Bound(_))));
}

#[test]
fn baer_sums() {
    let (g, a) = (z(2), za(2));
    let rho = GAction::trivial(&g, &a);
    let e = skeletal_extension(&skeletal(&g, &a, rho.clone(), odd_alpha(&g))).unwrap();
    let t = skeletal_extension(&skeletal(&g, &a, rho.clone(), Cochain::zero(&g, 3))).unwrap();
    assert!(find_extension_morphism(&baer_sum(&e, &t).unwrap(), &e)
        .unwrap()
        .is_some());
    let ee = baer_sum(&e, &e).unwrap();
    assert!(find_extension_morphism(&ee, &t).unwrap().is_some());
    assert!(find_extension_morphism(&ee, &e).unwrap().is_none());
}

#[test]
fn baer_sum_of_cover_extensions_adds_classes() {
    let (g, a) = (z(2), za(2));
    let dc = complex(&SimplicialCover::mixed(&g, 4), &a);
    let lam = dc.include_bar(&odd_alpha(&g));
    let e = extension_from_cocycle(&dc, &shifted(&dc, &lam, &random_total(&dc, 2, 3))).unwrap();
    let s = skeletalize_extension(&baer_sum(&e, &e).unwrap())
        .unwrap()
        .skeletal;
    let h3 = cohomology_group_with(&g, &a, &GAction::trivial(&g, &a), 3, true).unwrap();
    assert!(h3.cohomologous(&s.alpha, &Cochain::zero(&g, 3)).is_some());
}

//! One line per acceptance criterion. Exits nonzero when any fails.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use common::*;
use twogroups::bibundle::*;
use twogroups::cohomology::*;
use twogroups::extension::*;
use twogroups::groupoid::*;
use twogroups::random::{rng, shuffle_biset, BlockGroupoid};
use twogroups::twogroup::{realize_skeletal_unchecked, verify_coherence, SkeletalTwoGroup};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("classification bijection", classification_bijection),
        ("pentagon iff cocycle", pentagon_iff_cocycle),
        ("chain bicategory splitting", chain_splitting),
        ("baer sum additivity", baer_additivity),
        ("cover independence", cover_independence),
        ("bibundle bicategory laws", bibundle_laws),
        ("pullback correctness", pullback_correctness),
        ("skeletal round trip", skeletal_round_trip),
        ("classical H2 check", classical_h2),
        ("centrality criterion", centrality_criterion),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!(
                "criterion {:>2}: PASS  {name}: {detail} ({secs:.2}s)",
                i + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "criterion {:>2}: FAIL  {name}: {detail} ({secs:.2}s)",
                    i + 1
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn classification_bijection() -> Outcome {
    let groups = [
        ("Z/2", z(2)),
        ("Z/3", z(3)),
        ("Z/4", z(4)),
        ("Z/2xZ/2", v4()),
    ];
    let mut rows = Vec::new();
    for (gn, g) in &groups {
        for m in [2u64, 3] {
            let a = za(m);
            let c = classify_extensions(g, &a, DEFAULT_MAX_SEARCH, 50, 11)
                .map_err(|e| e.to_string())?;
            // unnormalized bar complex, computed separately from the normalized one
            let h = cohomology_group_with(g, &a, &GAction::trivial(g, &a), 3, false)
                .map_err(|e| e.to_string())?;
            ensure(c.report.ok(), || {
                format!("({gn}, Z/{m}): {:?}", c.report.first_violation())
            })?;
            ensure(c.n_classes() == h.order(), || {
                format!(
                    "({gn}, Z/{m}): {} classes, |H^3| = {}",
                    c.n_classes(),
                    h.order()
                )
            })?;
            rows.push(format!("({gn},Z/{m})={}", c.n_classes()));
        }
    }
    Ok(rows.join(" "))
}

fn pentagon_iff_cocycle() -> Outcome {
    let mut discrepancies = Vec::new();
    let mut check = |g: &GroupTable, a: &FiniteAbelianGroup, alpha: Cochain| {
        let rho = GAction::trivial(g, a);
        let cocycle = bar_differential(&alpha, g, a, &rho)
            .values
            .iter()
            .all(|&v| v == 0);
        let s = SkeletalTwoGroup {
            pi0: g.clone(),
            pi1: a.clone(),
            rho,
            alpha,
        };
        let coherent = verify_coherence(&realize_skeletal_unchecked(&s)).ok();
        if coherent != cocycle {
            discrepancies.push(s.alpha.values.clone());
        }
    };
    let (g2, a2) = (z(2), za(2));
    let all = all_cochains(&g2, &a2, 3);
    let n_all = all.len();
    for c in all {
        check(&g2, &a2, c);
    }
    let (g3, a3) = (z(3), za(3));
    let h = cohomology_group_with(&g3, &a3, &GAction::trivial(&g3, &a3), 3, true)
        .map_err(|e| e.to_string())?;
    let mut r = rng(2);
    for k in 0..500 {
        let c = if k % 2 == 0 {
            random_cocycle(&h, &g3, &a3, &GAction::trivial(&g3, &a3), &mut r)
        } else {
            random_normalized(&g3, &a3, 3, &mut r)
        };
        check(&g3, &a3, c);
    }
    ensure(n_all == 256, || format!("{n_all} cochains on (Z/2, Z/2)"))?;
    ensure(discrepancies.is_empty(), || {
        format!(
            "{} discrepancies, first {:?}",
            discrepancies.len(),
            discrepancies[0]
        )
    })?;
    Ok("256 exhaustive + 500 sampled, 0 discrepancies".into())
}

fn chain_splitting() -> Outcome {
    let mut r = rng(3);
    for k in 0..100 {
        let c = ThreeTermComplex::random(&mut r, 8);
        let d = chain_bicategory(&c).map_err(|e| e.to_string())?;
        ensure(d.check_laws().ok(), || {
            format!("complex {k}: bicategory laws")
        })?;
        let (p0, p1, p2) = homotopy_groups(&d);
        let got = [order_stats(&p0), order_stats(&p1), order_stats(&p2)];
        let want = chain_oracle(&c);
        ensure(got == want, || {
            format!("complex {k}: got {got:?}, want {want:?}")
        })?;
    }
    Ok("100 random complexes".into())
}

fn baer_additivity() -> Outcome {
    let mut pairs = 0;
    for m in [2u64, 3] {
        let (g, a) = (z(2), za(m));
        let rho = GAction::trivial(&g, &a);
        let h = cohomology_group_with(&g, &a, &rho, 3, true).map_err(|e| e.to_string())?;
        let cocycles = normalized_cocycles_of(&g, &a, &rho);
        let dc = DoubleComplex::new(&SimplicialCover::uniform(&g, 2, 4), &a, &rho, 3, 4)
            .map_err(|e| e.to_string())?;
        let mut r = rng(4);
        for x in &cocycles {
            for y in &cocycles {
                pairs += 1;
                let want = x.add(&a, y);
                let sk = |c: &Cochain| {
                    skeletal_extension(&SkeletalTwoGroup {
                        pi0: g.clone(),
                        pi1: a.clone(),
                        rho: rho.clone(),
                        alpha: c.clone(),
                    })
                };
                let over_cover = |c: &Cochain, r: &mut twogroups::random::Rng8| {
                    let lam = dc.include_bar(c);
                    let noise: Vec<usize> = (0..dc.total.dim(2))
                        .map(|_| rand::Rng::gen_range(r, 0..a.order()))
                        .collect();
                    let x = dc.total.add(&dc.join(&lam), &dc.total.apply(2, &noise));
                    extension_from_cocycle(&dc, &dc.split(3, &x))
                };
                let sums = [
                    baer_sum(
                        &sk(x).map_err(|e| e.to_string())?,
                        &sk(y).map_err(|e| e.to_string())?,
                    ),
                    baer_sum(
                        &over_cover(x, &mut r).map_err(|e| e.to_string())?,
                        &over_cover(y, &mut r).map_err(|e| e.to_string())?,
                    ),
                ];
                for s in sums {
                    let s = s.map_err(|e| e.to_string())?;
                    let alpha = skeletalize_extension(&s)
                        .map_err(|e| e.to_string())?
                        .skeletal
                        .alpha;
                    ensure(h.cohomologous(&alpha, &want).is_some(), || {
                        format!("Z/{m}: {:?} + {:?}", x.values, y.values)
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{pairs} cocycle pairs, skeletal and doubled-cover forms"
    ))
}

fn normalized_cocycles_of(g: &GroupTable, a: &FiniteAbelianGroup, rho: &GAction) -> Vec<Cochain> {
    all_cochains(g, a, 3)
        .into_iter()
        .filter(|c| {
            c.normalized
                && bar_differential(c, g, a, rho)
                    .values
                    .iter()
                    .all(|&v| v == 0)
        })
        .collect()
}

fn cover_independence() -> Outcome {
    let mut lines = Vec::new();
    for n in [2usize, 3] {
        let g = z(n);
        for m in [2u64, 3] {
            let a = za(m);
            let rho = GAction::trivial(&g, &a);
            let id = SimplicialCover::identity(&g, 4);
            let uni = SimplicialCover::uniform(&g, 2, 4);
            let mixed = SimplicialCover::mixed(&g, 4);
            let mk = |c: &SimplicialCover| {
                DoubleComplex::new(c, &a, &rho, 3, 4).map_err(|e| e.to_string())
            };
            let (d_id, d_uni, d_mixed) = (mk(&id)?, mk(&uni)?, mk(&mixed)?);
            let hs = [
                d_id.cohomology(3),
                d_uni.cohomology(3),
                d_mixed.cohomology(3),
            ];
            let hs: Vec<TotalCohomology> = hs
                .into_iter()
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let f0 = hs[0].invariant_factors();
            ensure(hs.iter().all(|h| h.invariant_factors() == f0), || {
                format!("Z/{n}, Z/{m}: groups differ")
            })?;
            let interval = twogroups::cohomology::SimplicialSet::interval(4);
            let two = twogroups::cohomology::SimplicialSet::constant(2, 4);
            let to_base_uni = CoverMap::to_base(&g, &two);
            let to_base_mixed = CoverMap::to_base(&g, &interval);
            let sheet = |k: usize| {
                let f: Vec<Vec<usize>> = interval.sizes.iter().map(|&s| vec![k; s]).collect();
                CoverMap::of_products(&g, &interval, &two, &f)
            };
            let reps = hs[0].representatives(&d_id);
            // pulled-back representatives stay pairwise distinct classes
            for (dc, h, map) in [
                (&d_uni, &hs[1], &to_base_uni),
                (&d_mixed, &hs[2], &to_base_mixed),
            ] {
                let mut seen = Vec::new();
                for r in &reps {
                    let p = d_id.pull_back(map, dc, r);
                    ensure(dc.cocycle_failure(&p).is_none(), || {
                        "pullback is not a cocycle".into()
                    })?;
                    seen.push(h.class_index(dc, &p).ok_or("pullback has no class")?);
                }
                seen.sort();
                seen.dedup();
                ensure(seen.len() == reps.len(), || {
                    format!("Z/{n}, Z/{m}: refinement not injective on classes")
                })?;
            }
            // two different refinements mixed → uniform agree up to coboundary
            for r in &reps {
                let u = d_id.pull_back(&to_base_uni, &d_uni, r);
                let a0 = d_uni.pull_back(&sheet(0), &d_mixed, &u);
                let a1 = d_uni.pull_back(&sheet(1), &d_mixed, &u);
                let direct = d_id.pull_back(&to_base_mixed, &d_mixed, r);
                ensure(d_mixed.cohomologous(&a0, &a1).is_some(), || {
                    "sheet refinements differ".into()
                })?;
                ensure(d_mixed.cohomologous(&a0, &direct).is_some(), || {
                    "composite refinement differs".into()
                })?;
            }
            lines.push(format!("(Z/{n},Z/{m}) H^3={}", describe_factors(&f0)));
        }
    }
    Ok(lines.join(" "))
}

fn bibundle_laws() -> Outcome {
    let mut r = rng(6);
    for k in 0..200 {
        let a = BlockGroupoid::random(&mut r, 6, 4);
        let b = BlockGroupoid::random(&mut r, 6, 4);
        let c = BlockGroupoid::random(&mut r, 6, 4);
        let f = a.random_functor(&b, &mut r);
        let g = b.random_functor(&c, &mut r);
        let (pf, pg) = (bundlize(&f), bundlize(&g));
        ensure(
            isomorphic(&bundlize(&f.then(&g)), &compose_bibundles(&pg, &pf)),
            || format!("instance {k}: functoriality"),
        )?;
        let ida = identity_bibundle(&a.groupoid);
        let idb = identity_bibundle(&b.groupoid);
        ensure(isomorphic(&compose_bibundles(&pf, &ida), &pf), || {
            format!("instance {k}: right unit")
        })?;
        ensure(isomorphic(&compose_bibundles(&idb, &pf), &pf), || {
            format!("instance {k}: left unit")
        })?;
        let d = BlockGroupoid::random(&mut r, 6, 4);
        let h = c.random_functor(&d, &mut r);
        let ph = bundlize(&h);
        let left = compose_bibundles(&ph, &compose_bibundles(&pg, &pf));
        let right = compose_bibundles(&compose_bibundles(&ph, &pg), &pf);
        ensure(isomorphic(&left, &right), || {
            format!("instance {k}: associativity")
        })?;
        let m = shuffle_biset(&identity_bibundle(&a.groupoid), &mut r);
        if m.is_morita() {
            ensure(
                homotopy_invariants(&m.src).equivalent(&homotopy_invariants(&m.tgt)),
                || format!("instance {k}: morita invariants"),
            )?;
        }
        if pf.is_morita() {
            ensure(
                homotopy_invariants(&a.groupoid).equivalent(&homotopy_invariants(&b.groupoid)),
                || format!("instance {k}: morita invariants of bundlization"),
            )?;
        }
    }
    Ok("200 instances".into())
}

fn pullback_correctness() -> Outcome {
    let mut r = rng(7);
    let groups = twogroups::random::small_groups();
    for k in 0..50 {
        let pick = |r: &mut twogroups::random::Rng8| {
            groups[rand::Rng::gen_range(r, 0..groups.len())].clone()
        };
        let (gy, gx, gz) = (pick(&mut r), pick(&mut r), pick(&mut r));
        let hx = gx.homs_to(&gy);
        let hz = gz.homs_to(&gy);
        let phi = hx[rand::Rng::gen_range(&mut r, 0..hx.len())].clone();
        let psi = hz[rand::Rng::gen_range(&mut r, 0..hz.len())].clone();
        let (bx, by, bz) = (
            Arc::new(FiniteGroupoid::delooping(&gx)),
            Arc::new(FiniteGroupoid::delooping(&gy)),
            Arc::new(FiniteGroupoid::delooping(&gz)),
        );
        let g = bundlize(&Functor::from_mor(bx.clone(), by.clone(), |m| phi[m]));
        let f = bundlize(&Functor::from_mor(bz.clone(), by.clone(), |m| psi[m]));
        let pb = pullback(&f, &g).map_err(|e| e.to_string())?;
        // Gx × Gz acting on Gy by y·(h, k) = φ(h)⁻¹ y ψ(k)
        let prod = GroupTable::product(&gx, &gz);
        let nz = gz.order();
        let act: Vec<Vec<usize>> = (0..gy.order())
            .map(|y| {
                (0..prod.order())
                    .map(|hk| gy.mul(gy.mul(gy.inv(phi[hk / nz]), y), psi[hk % nz]))
                    .collect()
            })
            .collect();
        let ag =
            FiniteGroupoid::action_groupoid(&prod, gy.order(), &act).map_err(|v| v.to_string())?;
        ensure(
            homotopy_invariants(&pb.groupoid).equivalent(&homotopy_invariants(&ag)),
            || format!("instance {k}: pullback differs from action groupoid"),
        )?;

        let x = BlockGroupoid::random(&mut r, 5, 4).groupoid;
        let x0 = Arc::new(FiniteGroupoid::discrete(x.n_objects()));
        let incl = bundlize(&Functor::new(
            x0.clone(),
            x.clone(),
            (0..x.n_objects()).collect(),
            (0..x.n_objects()).map(|o| x.ident(o)).collect(),
        ));
        let pb = pullback(&incl, &incl).map_err(|e| e.to_string())?;
        let mut got: Vec<(usize, usize)> = (0..pb.groupoid.n_objects())
            .map(|c| (pb.p1.obj[c], pb.p2.obj[c]))
            .collect();
        let mut want: Vec<(usize, usize)> =
            (0..x.n_morphisms()).map(|m| (x.src(m), x.tgt(m))).collect();
        let mut want_rev: Vec<(usize, usize)> = want.iter().map(|&(s, t)| (t, s)).collect();
        got.sort();
        want.sort();
        want_rev.sort();
        ensure(pb.groupoid.n_morphisms() == pb.groupoid.n_objects(), || {
            format!("instance {k}: X0 x_X X0 not discrete")
        })?;
        ensure(got == want || got == want_rev, || {
            format!("instance {k}: X0 x_X X0 differs from X1")
        })?;
    }
    Ok("50 instances".into())
}

fn skeletal_round_trip() -> Outcome {
    let mut r = rng(8);
    let groups = [GroupTable::trivial(), z(2), z(3), z(4), v4()];
    let coeffs = [za(2), za(3), za(4), FiniteAbelianGroup::new(&[2, 2])];
    for k in 0..100 {
        let g = groups[rand::Rng::gen_range(&mut r, 0..groups.len())].clone();
        let a = coeffs[rand::Rng::gen_range(&mut r, 0..coeffs.len())].clone();
        let actions = all_actions(&g, &a);
        let rho = actions[rand::Rng::gen_range(&mut r, 0..actions.len())].clone();
        let h = cohomology_group_with(&g, &a, &rho, 3, true).map_err(|e| e.to_string())?;
        let alpha = random_cocycle(&h, &g, &a, &rho, &mut r);
        let s = SkeletalTwoGroup {
            pi0: g,
            pi1: a,
            rho,
            alpha,
        };
        if let Some(why) = round_trip_failure(&s) {
            return Err(format!("instance {k}: {why}"));
        }
    }
    Ok("100 instances".into())
}

fn classical_h2() -> Outcome {
    let groups = [
        ("1", GroupTable::trivial()),
        ("Z/2", z(2)),
        ("Z/3", z(3)),
        ("Z/4", z(4)),
        ("Z/2xZ/2", v4()),
        ("Z/5", z(5)),
        ("Z/6", z(6)),
        ("S3", GroupTable::symmetric(3)),
    ];
    let coeffs = [za(2), za(3), za(4), FiniteAbelianGroup::new(&[2, 2])];
    let mut n = 0;
    for (gn, g) in &groups {
        for a in &coeffs {
            let rho = GAction::trivial(g, a);
            let c = classify_classical(g, a, &rho, 30, 9).map_err(|e| e.to_string())?;
            let h = cohomology_group_with(g, a, &rho, 2, false).map_err(|e| e.to_string())?;
            ensure(c.n_classes() == h.order(), || {
                format!(
                    "({gn}, {}): {} classes, |H^2| = {}",
                    a.describe(),
                    c.n_classes(),
                    h.order()
                )
            })?;
            n += 1;
        }
    }
    let (g, a) = (z(2), za(2));
    let rho = GAction::trivial(&g, &a);
    let c = classify_classical(&g, &a, &rho, 0, 0).map_err(|e| e.to_string())?;
    let realizes_z4 = c.representatives.iter().any(|b| {
        classical_extension_from_2cocycle(&g, &a, &rho, b)
            .is_ok_and(|e| e.group.find_isomorphism(&z(4)).is_some())
    });
    ensure(realizes_z4, || "no (Z/2, Z/2) class realizes Z/4".into())?;
    Ok(format!("{n} pairs, (Z/2,Z/2) nontrivial class is Z/4"))
}

fn centrality_criterion() -> Outcome {
    let groups = [GroupTable::trivial(), z(2), z(3), z(4), v4()];
    let coeffs = [za(2), za(3), za(4), FiniteAbelianGroup::new(&[2, 2])];
    let mut checked = 0;
    let mut tally: BTreeMap<bool, usize> = BTreeMap::new();
    for g in &groups {
        for a in &coeffs {
            for rho in all_actions(g, a) {
                let h = cohomology_group_with(g, a, &rho, 3, true).map_err(|e| e.to_string())?;
                let mut alphas = vec![Cochain::zero(g, 3)];
                alphas.extend(h.generators());
                for alpha in alphas {
                    let s = SkeletalTwoGroup {
                        pi0: g.clone(),
                        pi1: a.clone(),
                        rho: rho.clone(),
                        alpha,
                    };
                    let e = skeletal_extension(&s).map_err(|e| e.to_string())?;
                    let c = is_central(&e).map_err(|e| e.to_string())?;
                    ensure(c.central == rho.is_trivial(), || {
                        format!(
                            "|G|={} A={} rho={:?}",
                            g.order(),
                            a.describe(),
                            rho.tables()
                        )
                    })?;
                    ensure(c.action.tables() == rho.tables(), || {
                        "induced action differs from rho".into()
                    })?;
                    checked += 1;
                    *tally.entry(c.central).or_insert(0) += 1;
                }
            }
        }
    }
    Ok(format!(
        "{checked} skeletal extensions ({} central)",
        tally.get(&true).copied().unwrap_or(0)
    ))
}

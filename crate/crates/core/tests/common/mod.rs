#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use twogroups::cohomology::bar::tuple_of;
use twogroups::cohomology::*;
use twogroups::extension::ThreeTermComplex;
use twogroups::groupoid::GroupTable;
use twogroups::random::Rng8;
use twogroups::twogroup::{check_hom, skeletalize, SkeletalTwoGroup};

pub fn z(n: usize) -> GroupTable {
    GroupTable::cyclic(n)
}

pub fn v4() -> GroupTable {
    GroupTable::product(&z(2), &z(2))
}

pub fn za(n: u64) -> FiniteAbelianGroup {
    FiniteAbelianGroup::cyclic(n)
}

/// Number of elements of each order.
pub fn order_stats(a: &FiniteAbelianGroup) -> BTreeMap<u64, usize> {
    let mut m = BTreeMap::new();
    for x in 0..a.order() {
        *m.entry(a.element_order(x)).or_insert(0) += 1;
    }
    m
}

/// Element-order counts of `sub / ⟨rel⟩` by direct coset arithmetic: the
/// order of `[x]` is the least `k` with `k·x` in the span of `rel`.
pub fn quotient_order_stats(
    g: &FiniteAbelianGroup,
    sub: &[usize],
    rel: &[usize],
) -> BTreeMap<u64, usize> {
    let mut span = vec![false; g.order()];
    span[0] = true;
    let mut frontier = vec![0];
    while let Some(x) = frontier.pop() {
        for &r in rel {
            let y = g.add(x, r);
            if !span[y] {
                span[y] = true;
                frontier.push(y);
            }
        }
    }
    let size = span.iter().filter(|&&b| b).count();
    let mut m = BTreeMap::new();
    for &x in sub {
        let mut k = 1u64;
        let mut y = x;
        while !span[y] {
            y = g.add(y, x);
            k += 1;
        }
        *m.entry(k).or_insert(0) += 1;
    }
    m.values_mut().for_each(|v| *v /= size);
    m
}

/// `(H³, H², H¹)` of `C1 → C2 → C3` as element-order statistics.
pub fn chain_oracle(c: &ThreeTermComplex) -> [BTreeMap<u64, usize>; 3] {
    let all3: Vec<usize> = (0..c.c3.order()).collect();
    let im2: Vec<usize> = (0..c.c2.order()).map(|y| c.d2[y]).collect();
    let ker2: Vec<usize> = (0..c.c2.order()).filter(|&y| c.d2[y] == 0).collect();
    let im1: Vec<usize> = (0..c.c1.order()).map(|x| c.d1[x]).collect();
    let ker1: Vec<usize> = (0..c.c1.order()).filter(|&x| c.d1[x] == 0).collect();
    [
        quotient_order_stats(&c.c3, &all3, &im2),
        quotient_order_stats(&c.c2, &ker2, &im1),
        quotient_order_stats(&c.c1, &ker1, &[]),
    ]
}

/// Every cochain of degree `n`, normalized or not.
pub fn all_cochains(g: &GroupTable, a: &FiniteAbelianGroup, n: usize) -> Vec<Cochain> {
    let cells = g.order().pow(n as u32);
    let na = a.order();
    (0..na.pow(cells as u32))
        .map(|mut k| {
            let values = (0..cells)
                .map(|_| {
                    let v = k % na;
                    k /= na;
                    v
                })
                .collect();
            let mut c = Cochain {
                degree: n,
                values,
                normalized: false,
            };
            c.normalized = c.is_normalized(g);
            c
        })
        .collect()
}

pub fn random_normalized(
    g: &GroupTable,
    a: &FiniteAbelianGroup,
    n: usize,
    rng: &mut Rng8,
) -> Cochain {
    let values = (0..g.order().pow(n as u32))
        .map(|i| {
            if tuple_of(g.order(), n, i).contains(&g.unit()) {
                0
            } else {
                rng.gen_range(0..a.order())
            }
        })
        .collect();
    Cochain {
        degree: n,
        values,
        normalized: true,
    }
}

/// A random normalized cocycle: random multiples of the generators plus a
/// random coboundary.
pub fn random_cocycle(
    h: &GroupCohomology,
    g: &GroupTable,
    a: &FiniteAbelianGroup,
    rho: &GAction,
    rng: &mut Rng8,
) -> Cochain {
    let n = h.degree();
    let mut c = Cochain::zero(g, n);
    for gen in h.generators() {
        let k = rng.gen_range(0..a.order().max(1)) as i64;
        let scaled = Cochain {
            values: gen.values.iter().map(|&v| a.scale(v, k)).collect(),
            ..gen.clone()
        };
        c = c.add(a, &scaled);
    }
    let b = random_normalized(g, a, n - 1, rng);
    let mut out = c.add(a, &bar_differential(&b, g, a, rho));
    out.normalized = out.is_normalized(g);
    out
}

/// Skeletalizes the realization of `s` and checks, through the maps read
/// off the equivalence `S' → Γ`, that the new cocycle is cohomologous to
/// the old one. Returns a failure description.
pub fn round_trip_failure(s: &SkeletalTwoGroup) -> Option<String> {
    let md = match twogroups::twogroup::realize_skeletal(s) {
        Ok(md) => Arc::new(md),
        Err(e) => return Some(format!("realize: {e}")),
    };
    let sk = match skeletalize(&md) {
        Ok(sk) => sk,
        Err(e) => return Some(format!("skeletalize: {e}")),
    };
    if !check_hom(&sk.to_original).ok() || !check_hom(&sk.from_original).ok() {
        return Some("equivalence pair fails check_hom".into());
    }
    let t = &sk.skeletal;
    let (na, na2) = (s.pi1.order(), t.pi1.order());
    if na != na2 || s.pi0.order() != t.pi0.order() {
        return Some("orders differ".into());
    }
    // objects and Aut(e) of the realizations are indexed (g, a) ↦ g·|A| + a
    let f = &sk.to_original.functor;
    let g0 = |g: usize| f.obj[g];
    let e2 = t.pi0.unit();
    let e = s.pi0.unit();
    let psi = |a: usize| f.mor[e2 * na2 + a] - e * na;
    let n = t.pi0.order();
    let mut values = vec![0; n * n * n];
    for i in 0..values.len() {
        let tt = tuple_of(n, 3, i);
        let img = [g0(tt[0]), g0(tt[1]), g0(tt[2])];
        values[twogroups::cohomology::bar::tuple_index(n, &img)] = psi(t.alpha.values[i]);
    }
    let moved = Cochain {
        degree: 3,
        values,
        normalized: false,
    };
    let h = match cohomology_group_with(&s.pi0, &s.pi1, &s.rho, 3, false) {
        Ok(h) => h,
        Err(e) => return Some(format!("cohomology: {e}")),
    };
    h.cohomologous(&moved, &s.alpha)
        .is_none()
        .then(|| "cocycles not cohomologous".into())
}

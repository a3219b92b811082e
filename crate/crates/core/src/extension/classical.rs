use petgraph::unionfind::UnionFind;
use rand::Rng;

use crate::cohomology::bar::tuple_of;
use crate::cohomology::{
    bar_differential, cohomology_group_with, Cochain, FiniteAbelianGroup, GAction,
};
use crate::error::{invalid, Error, Result};
use crate::groupoid::GroupTable;

/// The group `A × G` with `(a, g)(b, h) = (a + ρ(g)b + β(g, h), gh)`.
/// Element `(a, g)` has index `g·|A| + a`.
#[derive(Clone, Debug)]
pub struct ClassicalExtension {
    pub g: GroupTable,
    pub a: FiniteAbelianGroup,
    pub rho: GAction,
    pub beta: Cochain,
    pub group: GroupTable,
}

impl ClassicalExtension {
    pub fn element(&self, a: usize, g: usize) -> usize {
        g * self.a.order() + a
    }

    pub fn split(&self, x: usize) -> (usize, usize) {
        (x % self.a.order(), x / self.a.order())
    }
}

pub fn classical_extension_from_2cocycle(
    g: &GroupTable,
    a: &FiniteAbelianGroup,
    rho: &GAction,
    beta: &Cochain,
) -> Result<ClassicalExtension> {
    if beta.degree != 2 || beta.values.len() != g.order().pow(2) {
        return invalid("beta", "expected a 2-cochain on the group");
    }
    let d = bar_differential(beta, g, a, rho);
    if let Some(i) = d.values.iter().position(|&v| v != 0) {
        return invalid(
            "beta",
            format!("not a cocycle at {:?}", tuple_of(g.order(), 3, i)),
        );
    }
    let na = a.order();
    let group = GroupTable::from_fn(na * g.order(), |x, y| {
        let (a1, g1) = (x % na, x / na);
        let (a2, g2) = (y % na, y / na);
        let s = a.add(a.add(a1, rho.act(g1, a2)), beta.at(g, &[g1, g2]));
        g.mul(g1, g2) * na + s
    })
    .map_err(|v| Error::Invalid {
        what: "extension",
        detail: format!("{} at {:?}", v.check, v.witness),
    })?;
    Ok(ClassicalExtension {
        g: g.clone(),
        a: a.clone(),
        rho: rho.clone(),
        beta: beta.clone(),
        group,
    })
}

#[derive(Clone, Debug)]
pub struct ClassicalClassification {
    /// One cocycle per class.
    pub representatives: Vec<Cochain>,
    pub h2_order: usize,
    pub cocycles_checked: usize,
    pub exhaustive: bool,
}

impl ClassicalClassification {
    pub fn n_classes(&self) -> usize {
        self.representatives.len()
    }
}

const ENUMERATE_COCHAINS: u128 = 1 << 18;

/// Normalized 2-cocycles, all of them when few enough, else `samples`
/// of the form representative plus a random coboundary.
fn cocycles(
    g: &GroupTable,
    a: &FiniteAbelianGroup,
    rho: &GAction,
    reps: &[Cochain],
    samples: usize,
    seed: u64,
) -> (Vec<Cochain>, bool) {
    let n = g.order();
    let na = a.order();
    let free: Vec<usize> = (0..n * n)
        .filter(|&i| !tuple_of(n, 2, i).contains(&g.unit()))
        .collect();
    let count = (na as u128).checked_pow(free.len() as u32);
    if count.is_some_and(|c| c <= ENUMERATE_COCHAINS) {
        let mut out = Vec::new();
        for k in 0..count.unwrap() as usize {
            let mut values = vec![0; n * n];
            let mut r = k;
            for &cell in &free {
                values[cell] = r % na;
                r /= na;
            }
            let c = Cochain {
                degree: 2,
                values,
                normalized: true,
            };
            if bar_differential(&c, g, a, rho)
                .values
                .iter()
                .all(|&v| v == 0)
            {
                out.push(c);
            }
        }
        return (out, true);
    }
    let mut rng = crate::random::rng(seed);
    let mut out = reps.to_vec();
    for k in 0..samples {
        let b = Cochain {
            degree: 1,
            values: (0..n)
                .map(|x| {
                    if x == g.unit() {
                        0
                    } else {
                        rng.gen_range(0..na)
                    }
                })
                .collect(),
            normalized: true,
        };
        out.push(reps[k % reps.len()].add(a, &bar_differential(&b, g, a, rho)));
    }
    (out, false)
}

/// Equivalent extensions: some `t: G → A` makes `(a, g) ↦ (a + t(g), g)` a
/// homomorphism between them.
pub fn classically_equivalent(
    e1: &ClassicalExtension,
    e2: &ClassicalExtension,
) -> Option<Vec<usize>> {
    let (n, na) = (e1.g.order(), e1.a.order());
    let total = na.checked_pow(n as u32)?;
    (0..total).find_map(|k| {
        let mut t = vec![0; n];
        let mut r = k;
        for x in t.iter_mut() {
            *x = r % na;
            r /= na;
        }
        let map: Vec<usize> = (0..n * na)
            .map(|x| (x / na) * na + e1.a.add(x % na, t[x / na]))
            .collect();
        e1.group.is_hom_to(&e2.group, &map).then_some(t)
    })
}

/// Extension classes of `G` by the `G`-module `A`, found by brute-force
/// equivalence search over cocycles.
pub fn classify_classical(
    g: &GroupTable,
    a: &FiniteAbelianGroup,
    rho: &GAction,
    samples: usize,
    seed: u64,
) -> Result<ClassicalClassification> {
    let h2 = cohomology_group_with(g, a, rho, 2, true)?;
    let (cs, exhaustive) = cocycles(g, a, rho, &h2.representatives(), samples, seed);
    let exts: Vec<ClassicalExtension> = cs
        .iter()
        .map(|c| classical_extension_from_2cocycle(g, a, rho, c))
        .collect::<Result<_>>()?;
    let mut uf = UnionFind::<usize>::new(exts.len());
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..exts.len() {
        if let Some(&r) = roots
            .iter()
            .find(|&&r| classically_equivalent(&exts[i], &exts[r]).is_some())
        {
            uf.union(r, i);
        } else {
            roots.push(i);
        }
    }
    Ok(ClassicalClassification {
        representatives: roots.iter().map(|&r| cs[r].clone()).collect(),
        h2_order: h2.order(),
        cocycles_checked: cs.len(),
        exhaustive,
    })
}

use petgraph::unionfind::UnionFind;
use rand::Rng;

use super::{
    check_extension, extension_from_cocycle, find_extension_morphism_bounded, CentralExtension,
};
use crate::cohomology::bar::tuple_of;
use crate::cohomology::{
    bar_differential, cohomology_group_with, Cochain, DoubleComplex, FiniteAbelianGroup, GAction,
    SimplicialCover,
};
use crate::error::{Error, Result};
use crate::groupoid::GroupTable;
use crate::report::Report;

/// Default cap on [`search_space`].
pub const DEFAULT_MAX_SEARCH: u128 = 1 << 20;

/// Normalized 3-cochains are enumerated when there are at most this many.
const ENUMERATE_COCHAINS: u128 = 1 << 16;

/// Worst-case leaves of the morphism search between two extensions:
/// `|A|^((|G|−1)²)` free components of `F2`.
pub fn search_space(g: &GroupTable, a: &FiniteAbelianGroup) -> u128 {
    let k = (g.order() - 1).pow(2) as u32;
    (a.order() as u128).checked_pow(k).unwrap_or(u128::MAX)
}

#[derive(Clone, Debug)]
pub struct ExtensionClass {
    pub representative: Cochain,
    /// Coordinates in the invariant-factor decomposition of `H³`.
    pub h3_class: Vec<u64>,
    /// Invariant checks on the representative's extension.
    pub transcript: Report,
    /// Cocycles found equivalent to this representative.
    pub members: usize,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub h3_factors: Vec<u64>,
    pub h3_order: usize,
    pub classes: Vec<ExtensionClass>,
    /// Pairwise search and completeness results.
    pub report: Report,
    pub cocycles_checked: usize,
    /// Every normalized cocycle was checked rather than a sample.
    pub exhaustive: bool,
}

impl Classification {
    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }
}

/// Builds `E^α` on the identity cover of `G`.
pub fn extension_of_bar_cocycle(dc: &DoubleComplex, alpha: &Cochain) -> Result<CentralExtension> {
    extension_from_cocycle(dc, &dc.include_bar(alpha))
}

/// The complex used for bar cocycles: identity cover, rows `1..=4`.
pub fn identity_complex(g: &GroupTable, a: &FiniteAbelianGroup) -> Result<DoubleComplex> {
    DoubleComplex::new(
        &SimplicialCover::identity(g, 4),
        a,
        &GAction::trivial(g, a),
        3,
        4,
    )
}

/// Classes of central extensions of `G` by `[pt/A]` up to morphisms of
/// extensions. One extension per `H³` representative; representatives are
/// merged whenever a morphism exists, and every normalized cocycle (or
/// `samples` random ones when there are too many) must be equivalent to
/// exactly one representative.
pub fn classify_extensions(
    g: &GroupTable,
    a: &FiniteAbelianGroup,
    max_search: u128,
    samples: usize,
    seed: u64,
) -> Result<Classification> {
    let space = search_space(g, a);
    if space > max_search {
        return Err(Error::Bound(format!(
            "morphism search space |A|^((|G|-1)^2) = {} exceeds the limit {max_search}",
            if space == u128::MAX {
                "overflow".to_string()
            } else {
                space.to_string()
            }
        )));
    }
    let rho = GAction::trivial(g, a);
    let h3 = cohomology_group_with(g, a, &rho, 3, true)?;
    let reps = h3.representatives();
    let dc = identity_complex(g, a)?;
    let exts: Vec<CentralExtension> = reps
        .iter()
        .map(|r| extension_of_bar_cocycle(&dc, r))
        .collect::<Result<_>>()?;
    let mut report = Report::new();
    let mut uf = UnionFind::<usize>::new(reps.len());
    let mut pairs = 0;
    let mut merged = None;
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            pairs += 1;
            if find_extension_morphism_bounded(&exts[i], &exts[j], max_search)?.is_some() {
                uf.union(i, j);
                merged.get_or_insert(vec![i, j]);
            }
        }
    }
    report.record("representatives pairwise inequivalent", pairs, merged);

    let cochains = (a.order() as u128).checked_pow(((g.order() - 1) as u32).pow(3));
    let exhaustive = cochains.is_some_and(|c| c <= ENUMERATE_COCHAINS);
    let cocycles: Vec<Cochain> = if exhaustive {
        normalized_cocycles(g, a, &rho)
    } else {
        sample_cocycles(g, a, &rho, &h3.generators(), samples, seed)
    };
    let mut members = vec![0usize; reps.len()];
    let mut incomplete = None;
    for (k, c) in cocycles.iter().enumerate() {
        let e = extension_of_bar_cocycle(&dc, c)?;
        let mut hits = Vec::new();
        for (i, r) in exts.iter().enumerate() {
            if find_extension_morphism_bounded(&e, r, max_search)?.is_some() {
                hits.push(i);
            }
        }
        let roots: Vec<usize> = {
            let mut v: Vec<usize> = hits.iter().map(|&i| uf.find(i)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        if roots.len() == 1 {
            members[roots[0]] += 1;
        } else {
            incomplete.get_or_insert(vec![k, roots.len()]);
        }
    }
    report.record(
        "every cocycle in exactly one class",
        cocycles.len(),
        incomplete,
    );

    let mut classes = Vec::new();
    for i in 0..reps.len() {
        if uf.find(i) != i {
            continue;
        }
        classes.push(ExtensionClass {
            representative: reps[i].clone(),
            h3_class: h3.class_of(&reps[i]).unwrap_or_default(),
            transcript: check_extension(&exts[i]),
            members: members[i],
        });
    }
    Ok(Classification {
        h3_factors: h3.invariant_factors(),
        h3_order: h3.order(),
        classes,
        report,
        cocycles_checked: cocycles.len(),
        exhaustive,
    })
}

fn is_degenerate(g: &GroupTable, t: &[usize]) -> bool {
    t.contains(&g.unit())
}

/// Every normalized 3-cocycle, by enumeration of normalized cochains.
pub fn normalized_cocycles(g: &GroupTable, a: &FiniteAbelianGroup, rho: &GAction) -> Vec<Cochain> {
    let n = g.order();
    let free: Vec<usize> = (0..n * n * n)
        .filter(|&i| !is_degenerate(g, &tuple_of(n, 3, i)))
        .collect();
    let na = a.order();
    let total = na.pow(free.len() as u32);
    let mut out = Vec::new();
    for k in 0..total {
        let mut values = vec![0; n * n * n];
        let mut r = k;
        for &cell in &free {
            values[cell] = r % na;
            r /= na;
        }
        let c = Cochain {
            degree: 3,
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
    out
}

/// Random normalized cocycles: a random combination of generators plus the
/// coboundary of a random normalized 2-cochain.
pub fn sample_cocycles(
    g: &GroupTable,
    a: &FiniteAbelianGroup,
    rho: &GAction,
    gens: &[Cochain],
    count: usize,
    seed: u64,
) -> Vec<Cochain> {
    let mut rng = crate::random::rng(seed);
    let na = a.order();
    (0..count)
        .map(|_| {
            let mut c = Cochain::zero(g, 3);
            for gen in gens {
                let k = rng.gen_range(0..na.max(1)) as i64;
                let scaled = Cochain {
                    values: gen.values.iter().map(|&v| a.scale(v, k)).collect(),
                    ..gen.clone()
                };
                c = c.add(a, &scaled);
            }
            let n = g.order();
            let values = (0..n * n)
                .map(|i| {
                    if is_degenerate(g, &tuple_of(n, 2, i)) {
                        0
                    } else {
                        rng.gen_range(0..na)
                    }
                })
                .collect();
            let b = Cochain {
                degree: 2,
                values,
                normalized: true,
            };
            let mut out = c.add(a, &bar_differential(&b, g, a, rho));
            out.normalized = true;
            out
        })
        .collect()
}

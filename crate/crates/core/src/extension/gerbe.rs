use std::collections::HashMap;
use std::sync::Arc;

use crate::cohomology::FiniteAbelianGroup;
use crate::error::{invalid, Result};
use crate::groupoid::{cech_pairs, is_equivalence, FiniteGroupoid, Functor};
use crate::report::Report;

/// The groupoid of a Čech 2-cocycle `λ` on `Y → X`: objects `Y`, morphisms
/// `(y₀, y₁, a)` for `y₀, y₁` in one fiber, composing to
/// `(y₀, y₂, a + b + λ(y₀, y₁, y₂))`. Morphism `(y₀, y₁, a)` sits at
/// `pair·|A| + a` with pairs listed lexicographically.
#[derive(Clone, Debug)]
pub struct GerbeOverX {
    pub base: usize,
    pub cover: Vec<usize>,
    pub a: FiniteAbelianGroup,
    /// Dense table at `(y₀·n + y₁)·n + y₂`, zero off the fiber products.
    pub lambda1: Vec<usize>,
    pub groupoid: Arc<FiniteGroupoid>,
    pairs: Vec<(usize, usize)>,
    pair_index: HashMap<(usize, usize), usize>,
}

impl GerbeOverX {
    #[inline]
    pub fn lambda(&self, y0: usize, y1: usize, y2: usize) -> usize {
        let n = self.cover.len();
        self.lambda1[(y0 * n + y1) * n + y2]
    }

    pub fn morphism(&self, y0: usize, y1: usize, a: usize) -> usize {
        self.pair_index[&(y0, y1)] * self.a.order() + a
    }

    /// `(y₀, y₁, a)`.
    pub fn decode(&self, f: usize) -> (usize, usize, usize) {
        let (y0, y1) = self.pairs[f / self.a.order()];
        (y0, y1, f % self.a.order())
    }

    #[inline]
    pub fn label(&self, f: usize) -> usize {
        f % self.a.order()
    }

    /// Same endpoints, label moved by `t`.
    pub fn shift(&self, f: usize, t: usize) -> usize {
        let na = self.a.order();
        (f / na) * na + self.a.add(f % na, t)
    }

    /// The morphism `y₀ → y₁` with label zero.
    pub fn connection(&self, y0: usize, y1: usize) -> usize {
        self.morphism(y0, y1, 0)
    }

    /// `a` acting on `y` as the identity shifted by `a`.
    pub fn act(&self, y: usize, a: usize) -> usize {
        self.shift(self.groupoid.ident(y), a)
    }

    pub fn principality(&self) -> PrincipalVerdict {
        is_principal_gerbe(&self.groupoid, &self.cover, self.base, &self.a, |y, a| {
            self.act(y, a)
        })
    }
}

/// First same-fiber quadruple where `δλ` is nonzero.
pub fn cech_cocycle_failure(
    cover: &[usize],
    a: &FiniteAbelianGroup,
    lambda: impl Fn(usize, usize, usize) -> usize,
) -> Option<Vec<usize>> {
    for f in &fibers(cover) {
        for &y0 in f {
            for &y1 in f {
                for &y2 in f {
                    for &y3 in f {
                        let pos = a.add(lambda(y1, y2, y3), lambda(y0, y1, y3));
                        let neg = a.add(lambda(y0, y2, y3), lambda(y0, y1, y2));
                        if pos != neg {
                            return Some(vec![y0, y1, y2, y3]);
                        }
                    }
                }
            }
        }
    }
    None
}

fn fibers(cover: &[usize]) -> Vec<Vec<usize>> {
    let base = cover.iter().copied().max().map_or(0, |m| m + 1);
    let mut f = vec![Vec::new(); base];
    for (y, &x) in cover.iter().enumerate() {
        f[x].push(y);
    }
    f
}

/// Realizes the gerbe of `λ` on `cover: Y → X`, refusing a non-cocycle.
pub fn gerbe_from_cech(
    cover: &[usize],
    base: usize,
    a: &FiniteAbelianGroup,
    lambda1: impl Fn(usize, usize, usize) -> usize,
) -> Result<GerbeOverX> {
    if let Some(x) = (0..base).find(|x| !cover.contains(x)) {
        return invalid("cover", format!("base point {x} not in the image"));
    }
    if cover.iter().any(|&x| x >= base) {
        return invalid("cover", "projection out of range");
    }
    let n = cover.len();
    let mut table = vec![0usize; n * n * n];
    for (y0, &x) in cover.iter().enumerate() {
        for y1 in (0..n).filter(|&y| cover[y] == x) {
            for y2 in (0..n).filter(|&y| cover[y] == x) {
                let v = lambda1(y0, y1, y2);
                if v >= a.order() {
                    return invalid(
                        "cocycle",
                        format!("value out of range at {:?}", [y0, y1, y2]),
                    );
                }
                table[(y0 * n + y1) * n + y2] = v;
            }
        }
    }
    let lam = |y0: usize, y1: usize, y2: usize| table[(y0 * n + y1) * n + y2];
    if let Some(w) = cech_cocycle_failure(cover, a, lam) {
        return invalid("cocycle", format!("Čech cocycle condition fails at {w:?}"));
    }
    let pairs = cech_pairs(cover);
    let pair_index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let na = a.order();
    let m = pairs.len() * na;
    let src = (0..m).map(|f| pairs[f / na].0).collect();
    let tgt = (0..m).map(|f| pairs[f / na].1).collect();
    let gr = FiniteGroupoid::build(n, src, tgt, |f, g| {
        let ((y0, y1), (_, y2)) = (pairs[f / na], pairs[g / na]);
        pair_index[&(y0, y2)] * na + a.add(a.add(f % na, g % na), lam(y0, y1, y2))
    })?;
    if let Some(v) = gr.associativity_failure() {
        return invalid("gerbe", v.to_string());
    }
    Ok(GerbeOverX {
        base,
        cover: cover.to_vec(),
        a: a.clone(),
        lambda1: table,
        groupoid: Arc::new(gr),
        pairs,
        pair_index,
    })
}

/// Principality checks with a trivializing cover when they pass.
#[derive(Clone, Debug)]
pub struct PrincipalVerdict {
    pub report: Report,
    /// One object over each base point; over it the groupoid is
    /// equivalent to `U × [pt/A]`.
    pub trivializing_cover: Option<Vec<usize>>,
}

impl PrincipalVerdict {
    pub fn holds(&self) -> bool {
        self.report.ok()
    }
}

/// Whether a groupoid over the discrete `X` (object map `proj`) with
/// `act(x, a) ∈ Aut(x)` is a `[pt/A]`-principal gerbe: fibers nonempty and
/// connected, the action central and simply transitive on each
/// automorphism group. The cover picks the least object over each point and
/// the comparison `U × [pt/A] → E` is checked to be an equivalence onto
/// its image.
pub fn is_principal_gerbe(
    gr: &Arc<FiniteGroupoid>,
    proj: &[usize],
    base: usize,
    a: &FiniteAbelianGroup,
    act: impl Fn(usize, usize) -> usize,
) -> PrincipalVerdict {
    let (n, m, na) = (gr.n_objects(), gr.n_morphisms(), a.order());
    let mut rep = Report::new();
    let typed = proj.len() != n || proj.iter().any(|&x| x >= base);
    rep.record("projection", n, typed.then(|| vec![proj.len()]));
    if !rep.ok() {
        return PrincipalVerdict {
            report: rep,
            trivializing_cover: None,
        };
    }
    let over = (0..m).find(|&f| proj[gr.src(f)] != proj[gr.tgt(f)]);
    rep.record("fibers preserved", m, over.map(|f| vec![f]));
    let cover: Vec<Option<usize>> = (0..base).map(|x| (0..n).find(|&y| proj[y] == x)).collect();
    rep.record(
        "fibers nonempty",
        base,
        cover.iter().position(Option::is_none).map(|x| vec![x]),
    );
    let disconnected =
        (0..n).find(|&y| cover[proj[y]].is_some_and(|s| gr.first_hom(s, y).is_none()));
    rep.record("fibers connected", n, disconnected.map(|y| vec![y]));
    if !rep.ok() {
        return PrincipalVerdict {
            report: rep,
            trivializing_cover: None,
        };
    }
    let bad_type = (0..n * na).find(|&i| {
        let (y, f) = (i / na, act(i / na, i % na));
        f >= m || gr.src(f) != y || gr.tgt(f) != y
    });
    rep.record(
        "action components",
        n * na,
        bad_type.map(|i| vec![i / na, i % na]),
    );
    if !rep.ok() {
        return PrincipalVerdict {
            report: rep,
            trivializing_cover: None,
        };
    }
    let not_hom = (0..n * na * na).find(|&i| {
        let (y, s, t) = (i / (na * na), (i / na) % na, i % na);
        gr.comp(act(y, s), act(y, t)) != act(y, a.add(s, t))
    });
    rep.record(
        "action by homomorphisms",
        n * na * na,
        not_hom.map(|i| vec![i / (na * na), (i / na) % na, i % na]),
    );
    let not_central = (0..m * na).find(|&i| {
        let (f, s) = (i / na, i % na);
        gr.comp(f, act(gr.tgt(f), s)) != gr.comp(act(gr.src(f), s), f)
    });
    rep.record(
        "action natural",
        m * na,
        not_central.map(|i| vec![i / na, i % na]),
    );
    let not_torsor = (0..n).find(|&y| {
        let mut img: Vec<usize> = (0..na).map(|s| act(y, s)).collect();
        img.sort_unstable();
        img.dedup();
        img.len() != na || gr.auts(y).len() != na
    });
    rep.record("action simply transitive", n, not_torsor.map(|y| vec![y]));
    if !rep.ok() {
        return PrincipalVerdict {
            report: rep,
            trivializing_cover: None,
        };
    }
    let u: Vec<usize> = cover.into_iter().map(Option::unwrap).collect();
    let local = Arc::new(FiniteGroupoid::product(
        &FiniteGroupoid::discrete(base),
        &FiniteGroupoid::delooping(&a.as_group()),
    ));
    // the comparison lands in the full subgroupoid on `u`, which is
    // equivalent to all of `E` because fibers are connected
    let sub_mor: Vec<usize> = (0..m)
        .filter(|&f| u.contains(&gr.src(f)) && u.contains(&gr.tgt(f)))
        .collect();
    let sub_pos: HashMap<usize, usize> = sub_mor.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let sub = Arc::new(
        FiniteGroupoid::build(
            base,
            sub_mor.iter().map(|&f| proj[gr.src(f)]).collect(),
            sub_mor.iter().map(|&f| proj[gr.tgt(f)]).collect(),
            |f, g| sub_pos[&gr.comp(sub_mor[f], sub_mor[g])],
        )
        .expect("full subgroupoid"),
    );
    let comparison = Functor::from_mor(local, sub, |f| sub_pos[&act(u[f / na], f % na)]);
    let eq = comparison.check().is_none() && is_equivalence(&comparison);
    rep.record("local trivialization", base, (!eq).then(Vec::new));
    let trivializing_cover = rep.ok().then_some(u);
    PrincipalVerdict {
        report: rep,
        trivializing_cover,
    }
}

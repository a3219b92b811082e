//! Central extensions `[pt/A] → E → G` of a discrete group by `[pt/A]`.
//!
//! Extensions are stored with their structure homs as functors plus
//! coherence data. Morphism search and Baer sums run on skeletal forms,
//! read off with `π₀ = G` through the projection and `π₁ = A` through the
//! inclusion.

mod chain;
mod classical;
mod classify;
mod cocycle;
mod gerbe;

use std::sync::Arc;

use crate::bibundle::{bundlize, pullback};
use crate::cohomology::{FiniteAbelianGroup, GAction};
use crate::error::{invalid, Result};
use crate::groupoid::{homotopy_invariants, FiniteGroupoid, Functor, GroupTable};
use crate::report::Report;
use crate::twogroup::{
    check_hom, check_two_hom, find_two_hom, is_two_group, skeletalize_with, verify_coherence,
    MonoidalGroupoid, SkeletalTwoGroup, Skeletalization, SkeletonChoice, TwoGroupHom, TwoHom,
};

pub use chain::{chain_bicategory, homotopy_groups, ChainBicategory, ThreeTermComplex};
pub use classical::{
    classical_extension_from_2cocycle, classify_classical, ClassicalClassification,
    ClassicalExtension,
};
pub use classify::{
    classify_extensions, search_space, Classification, ExtensionClass, DEFAULT_MAX_SEARCH,
};
pub use cocycle::{
    extension_from_cocycle, morphism_from_cochain, two_morphism_from_cochain, CocycleSource,
};
pub use gerbe::{
    cech_cocycle_failure, gerbe_from_cech, is_principal_gerbe, GerbeOverX, PrincipalVerdict,
};

/// `f: [pt/A] → E`, `g: E → G` and `φ: g∘f ⇒ 0`.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    pub group: GroupTable,
    pub coeff: FiniteAbelianGroup,
    /// `[pt/A]`.
    pub kernel: Arc<MonoidalGroupoid>,
    /// `G` as a discrete 2-group.
    pub base: Arc<MonoidalGroupoid>,
    pub total: Arc<MonoidalGroupoid>,
    pub inclusion: TwoGroupHom,
    pub projection: TwoGroupHom,
    pub phi: TwoHom,
    /// Present when built from a total cocycle.
    pub source: Option<CocycleSource>,
}

impl CentralExtension {
    /// Assembles the data around `total`: the inclusion sends `a` to
    /// `incl(a) ∈ Aut(f(∗))` with structure maps `f2` and `f0`, and the
    /// projection is the object map `proj` with identity structure maps.
    /// `φ` is computed and must exist.
    pub fn assemble(
        group: &GroupTable,
        coeff: &FiniteAbelianGroup,
        total: Arc<MonoidalGroupoid>,
        incl: impl Fn(usize) -> usize,
        f2: usize,
        f0: usize,
        proj: Vec<usize>,
    ) -> Result<Self> {
        let kernel = Arc::new(MonoidalGroupoid::delooping(&coeff.as_group()));
        let base = Arc::new(MonoidalGroupoid::discrete_group(group));
        if proj.len() != total.n_objects() || proj.iter().any(|&x| x >= group.order()) {
            return invalid("projection", "object map out of range");
        }
        let inc_functor = Functor::from_mor(kernel.groupoid.clone(), total.groupoid.clone(), incl);
        let inclusion = TwoGroupHom::new(kernel.clone(), total.clone(), inc_functor, |_, _| f2, f0);
        let tg = total.groupoid.clone();
        let pr_functor = Functor::new(
            tg.clone(),
            base.groupoid.clone(),
            proj.clone(),
            (0..tg.n_morphisms()).map(|f| proj[tg.src(f)]).collect(),
        );
        let projection = TwoGroupHom::new(
            total.clone(),
            base.clone(),
            pr_functor,
            |x, y| group.mul(proj[x], proj[y]),
            group.unit(),
        );
        let star = proj[inclusion.functor.obj[0]];
        if star != group.unit() {
            return invalid("extension", "the composite g∘f does not land on the unit");
        }
        let phi = TwoHom {
            comp: vec![group.unit()],
        };
        Ok(CentralExtension {
            group: group.clone(),
            coeff: coeff.clone(),
            kernel,
            base,
            total,
            inclusion,
            projection,
            phi,
            source: None,
        })
    }

    /// The constant hom `[pt/A] → G`.
    pub fn zero_hom(&self) -> TwoGroupHom {
        let e = self.group.unit();
        let f = Functor::constant(self.kernel.groupoid.clone(), self.base.groupoid.clone(), e);
        TwoGroupHom::new(self.kernel.clone(), self.base.clone(), f, |_, _| e, e)
    }

    #[inline]
    pub fn proj(&self, x: usize) -> usize {
        self.projection.functor.obj[x]
    }

    /// `f(a)` moved to `Aut(e)` along `F0`.
    pub fn kernel_aut(&self, a: usize) -> usize {
        let gr = &self.total.groupoid;
        let f0 = self.inclusion.f0;
        gr.path(&[f0, self.inclusion.functor.mor[a], gr.inv(f0)])
    }

    /// `l⁻¹ ; (f(a) ⊗ id_x) ; l`.
    pub fn translate_left(&self, x: usize, a: usize) -> usize {
        let (md, gr) = (&*self.total, &*self.total.groupoid);
        let l = md.l(x);
        gr.path(&[gr.inv(l), md.tm(self.kernel_aut(a), md.id(x)), l])
    }

    /// `r⁻¹ ; (id_x ⊗ f(a)) ; r`.
    pub fn translate_right(&self, x: usize, a: usize) -> usize {
        let (md, gr) = (&*self.total, &*self.total.groupoid);
        let r = md.r(x);
        gr.path(&[gr.inv(r), md.tm(md.id(x), self.kernel_aut(a)), r])
    }

    pub fn principality(&self) -> PrincipalVerdict {
        is_principal_gerbe(
            &self.total.groupoid,
            &self.projection.functor.obj,
            self.group.order(),
            &self.coeff,
            |x, a| self.translate_left(x, a),
        )
    }

    /// Least object over each element of `G`, with `e` over the unit.
    pub fn representatives(&self) -> Option<Vec<usize>> {
        let mut reps: Vec<usize> = (0..self.group.order())
            .map(|g| (0..self.total.n_objects()).find(|&x| self.proj(x) == g))
            .collect::<Option<_>>()?;
        reps[self.group.unit()] = self.total.unit;
        Some(reps)
    }
}

/// Every structural invariant: coherence of `E`, the 2-group criteria, the
/// two homs, `φ`, principality and the kernel square.
pub fn check_extension(ext: &CentralExtension) -> Report {
    let mut rep = Report::new();
    rep.merge("total", verify_coherence(&ext.total));
    let v = is_two_group(&ext.total);
    rep.record(
        "total is a 2-group",
        2,
        v.witness.as_ref().map(|w| w.witness.clone()),
    );
    rep.merge("inclusion", check_hom(&ext.inclusion));
    rep.merge("projection", check_hom(&ext.projection));
    if rep.ok() {
        rep.merge(
            "phi",
            check_two_hom(
                &ext.inclusion.then(&ext.projection),
                &ext.zero_hom(),
                &ext.phi,
            ),
        );
    }
    rep.merge("principal", ext.principality().report);
    if rep.ok() {
        rep.merge("kernel square", kernel_square_check(ext));
    }
    rep
}

/// Homotopy pullback of `pt → G ← E`, compared with `[pt/A]` through `f`:
/// the pullback is connected, and `p₂` maps its automorphism group
/// bijectively onto the image of `f` (moved to any object over `e`).
pub fn kernel_square_check(ext: &CentralExtension) -> Report {
    let mut rep = Report::new();
    let bg = ext.base.groupoid.clone();
    let point = Arc::new(FiniteGroupoid::point());
    let unit = bundlize(&Functor::constant(point, bg, ext.group.unit()));
    let square = match pullback(&bundlize(&ext.projection.functor), &unit) {
        Ok(p) => p,
        Err(e) => {
            rep.record(&format!("pullback exists ({e})"), 1, Some(vec![]));
            return rep;
        }
    };
    let pg = &*square.groupoid;
    let inv = homotopy_invariants(pg);
    rep.record(
        "pullback connected",
        pg.n_objects(),
        (inv.n_components() != 1).then(|| vec![inv.n_components()]),
    );
    if !rep.ok() {
        return rep;
    }
    let c = inv.representatives[0];
    let auts = pg.auts(c);
    let na = ext.coeff.order();
    rep.record(
        "pullback isotropy",
        1,
        (auts.len() != na).then(|| vec![auts.len()]),
    );
    let gr = &*ext.total.groupoid;
    let y = square.p2.obj[c];
    let e = ext.total.unit;
    let mut image: Vec<usize> = match gr.first_hom(e, y) {
        Some(k) => auts
            .iter()
            .map(|&m| gr.path(&[k, square.p2.mor[m], gr.inv(k)]))
            .collect(),
        None => {
            rep.record("pullback over the unit", 1, Some(vec![y]));
            return rep;
        }
    };
    image.sort_unstable();
    image.dedup();
    let mut kernel: Vec<usize> = (0..na).map(|a| ext.kernel_aut(a)).collect();
    kernel.sort_unstable();
    kernel.dedup();
    let ok = image.len() == auts.len() && kernel.len() == na && image == kernel;
    rep.record(
        "compatible with inclusion",
        na,
        (!ok).then(|| vec![image.len(), kernel.len()]),
    );
    rep
}

/// The example `A → 0 → [pt/A]`: the inclusion is `φ` on `[pt/A]` and the
/// base is trivial. An extension exactly when `φ` is bijective.
pub fn trivial_group_extension(a: &FiniteAbelianGroup, phi: &[usize]) -> Result<CentralExtension> {
    let ag = a.as_group();
    if phi.len() != a.order() || !ag.is_hom_to(&ag, phi) {
        return invalid("phi", "not an endomorphism of A");
    }
    let total = Arc::new(MonoidalGroupoid::delooping(&ag));
    CentralExtension::assemble(&GroupTable::trivial(), a, total, |x| phi[x], 0, 0, vec![0])
}

/// A skeletal 2-group with `a ↦ (e, a)` and `(g, a) ↦ g`. Central exactly
/// when `ρ` is trivial.
pub fn skeletal_extension(s: &SkeletalTwoGroup) -> Result<CentralExtension> {
    let total = Arc::new(crate::twogroup::realize_skeletal(s)?);
    skeletal_extension_of(s, total)
}

fn skeletal_extension_of(
    s: &SkeletalTwoGroup,
    total: Arc<MonoidalGroupoid>,
) -> Result<CentralExtension> {
    let na = s.pi1.order();
    let e = s.pi0.unit();
    let proj = (0..s.pi0.order()).collect();
    // F2 = l(e) read as a morphism e⊗e → e
    let f2 = total.l(e);
    CentralExtension::assemble(&s.pi0, &s.pi1, total, |a| e * na + a, f2, e * na, proj)
}

/// Skeleton with `π₀ = G` via the projection and `π₁ = A` via the inclusion.
pub fn skeletalize_extension(ext: &CentralExtension) -> Result<Skeletalization> {
    let Some(reps) = ext.representatives() else {
        return invalid("extension", "some fiber of the projection is empty");
    };
    let choice = SkeletonChoice {
        cls: ext.projection.functor.obj.clone(),
        reps,
        pi0: ext.group.clone(),
        pi1: ext.coeff.clone(),
        phi: (0..ext.coeff.order()).map(|a| ext.kernel_aut(a)).collect(),
    };
    skeletalize_with(&ext.total, choice)
}

/// Baer sum on skeletal forms: the k-invariants add. Both sides must
/// share `G`, `A` and the induced action.
pub fn baer_sum(e1: &CentralExtension, e2: &CentralExtension) -> Result<CentralExtension> {
    if e1.group.rows() != e2.group.rows() || e1.coeff.moduli() != e2.coeff.moduli() {
        return invalid("baer_sum", "extensions of different groups or coefficients");
    }
    let s1 = skeletalize_extension(e1)?.skeletal;
    let s2 = skeletalize_extension(e2)?.skeletal;
    if s1.rho.tables() != s2.rho.tables() {
        return invalid("baer_sum", "induced actions differ");
    }
    let alpha = s1.alpha.add(&s1.pi1, &s2.alpha);
    skeletal_extension(&SkeletalTwoGroup { alpha, ..s1 })
}

/// Conjugation action of `G` on `A`: `ρ(g)(a) = b` where left translation
/// by `b` equals right translation by `a` on an object over `g`.
#[derive(Clone, Debug)]
pub struct Centrality {
    pub central: bool,
    pub action: GAction,
}

pub fn is_central(ext: &CentralExtension) -> Result<Centrality> {
    let Some(reps) = ext.representatives() else {
        return invalid("extension", "some fiber of the projection is empty");
    };
    let na = ext.coeff.order();
    let mut table = Vec::with_capacity(reps.len());
    for &x in &reps {
        let left: Vec<usize> = (0..na).map(|b| ext.translate_left(x, b)).collect();
        let row = (0..na)
            .map(|a| {
                let r = ext.translate_right(x, a);
                left.iter().position(|&l| l == r)
            })
            .collect::<Option<Vec<usize>>>();
        match row {
            Some(r) => table.push(r),
            None => {
                return invalid(
                    "extension",
                    format!("translations at object {x} do not match"),
                )
            }
        }
    }
    let action = GAction::from_tables(table);
    Ok(Centrality {
        central: action.is_trivial(),
        action,
    })
}

/// `h: E → E'` with `α: h∘f ⇒ f'` and `β: g'∘h ⇒ g`.
#[derive(Clone, Debug)]
pub struct ExtensionMorphism {
    pub hom: TwoGroupHom,
    pub alpha: TwoHom,
    pub beta: TwoHom,
}

/// The hom and 2-hom checks and the pasting identity
/// `g'(α_∗) ; φ'_∗ = β_{f(∗)} ; φ_∗`.
pub fn check_extension_morphism(
    e1: &CentralExtension,
    e2: &CentralExtension,
    m: &ExtensionMorphism,
) -> Report {
    let mut rep = Report::new();
    rep.merge("hom", check_hom(&m.hom));
    if !rep.ok() {
        return rep;
    }
    rep.merge(
        "alpha",
        check_two_hom(&e1.inclusion.then(&m.hom), &e2.inclusion, &m.alpha),
    );
    rep.merge(
        "beta",
        check_two_hom(&m.hom.then(&e2.projection), &e1.projection, &m.beta),
    );
    if !rep.ok() {
        return rep;
    }
    let bg = &*e2.base.groupoid;
    let star = 0;
    let lhs = bg.comp(
        e2.projection.functor.mor[m.alpha.comp[star]],
        e2.phi.comp[star],
    );
    let rhs = bg.comp(
        m.beta.comp[e1.inclusion.functor.obj[star]],
        e1.phi.comp[star],
    );
    rep.record("pasting", 1, (lhs != rhs).then(Vec::new));
    rep
}

/// Completes a hom `h` to an extension morphism by finding `α` and `β`.
pub fn complete_extension_morphism(
    e1: &CentralExtension,
    e2: &CentralExtension,
    hom: TwoGroupHom,
) -> Option<ExtensionMorphism> {
    let alpha = find_two_hom(&e1.inclusion.then(&hom), &e2.inclusion)?;
    let beta = find_two_hom(&hom.then(&e2.projection), &e1.projection)?;
    let m = ExtensionMorphism { hom, alpha, beta };
    check_extension_morphism(e1, e2, &m).ok().then_some(m)
}

/// Exhaustive search for a morphism of extensions with the same `G` and
/// `A`, on skeletal forms: over `ψ_g ∈ End(A)` on each fiber, the unit
/// component of `F0`, and every component of `F2`, pruning on naturality,
/// the unit axioms and each associativity triple as it becomes decidable.
/// Errors when more than `limit` partial assignments would be visited.
pub fn find_extension_morphism_bounded(
    e1: &CentralExtension,
    e2: &CentralExtension,
    limit: u128,
) -> Result<Option<ExtensionMorphism>> {
    if e1.group != e2.group || e1.coeff != e2.coeff {
        return invalid("extensions", "different groups or coefficients");
    }
    let space = search_space(&e1.group, &e1.coeff);
    if space > limit {
        return Err(crate::Error::Bound(format!(
            "search space {space} exceeds {limit}"
        )));
    }
    let s1 = skeletalize_extension(e1)?;
    let s2 = skeletalize_extension(e2)?;
    let k1 = skeletal_extension_of(&s1.skeletal, s1.realized.clone())?;
    let k2 = skeletal_extension_of(&s2.skeletal, s2.realized.clone())?;
    let accept = |h: &TwoGroupHom| complete_extension_morphism(&k1, &k2, h.clone()).is_some();
    let Some(h) = search_skeletal(&s1.realized, &s2.realized, &e1.group, &e1.coeff, &accept) else {
        return Ok(None);
    };
    let hom = s1.from_original.then(&h).then(&s2.to_original);
    Ok(complete_extension_morphism(e1, e2, hom))
}

pub fn find_extension_morphism(
    e1: &CentralExtension,
    e2: &CentralExtension,
) -> Result<Option<ExtensionMorphism>> {
    find_extension_morphism_bounded(e1, e2, DEFAULT_MAX_SEARCH)
}

/// `ψ_e` is the identity, as `α: h∘f ⇒ f'` forces on `Aut(e)`.
fn search_skeletal(
    d: &Arc<MonoidalGroupoid>,
    c: &Arc<MonoidalGroupoid>,
    g: &GroupTable,
    a: &FiniteAbelianGroup,
    accept: &dyn Fn(&TwoGroupHom) -> bool,
) -> Option<TwoGroupHom> {
    let (ng, na) = (g.order(), a.order());
    let e = g.unit();
    let ends: Vec<Vec<usize>> = a.as_group().homs_to(&a.as_group());
    let id_end: Vec<usize> = (0..na).collect();
    let cg = &*c.groupoid;
    // Automorphism groups are abelian, so naturality of F2 says
    // `h(f ⊗ k) = h(f) ⊗ h(k)` on automorphisms whatever F2 is.
    let nat_ok = |psi: &[usize], k: usize| -> bool {
        let h = |f: usize| (f / na) * na + ends[psi[f / na]][f % na];
        for x in 0..=k {
            for y in 0..=k {
                let xy = g.mul(x, y);
                if xy > k || (x != k && y != k && xy != k) {
                    continue;
                }
                for s in 0..na {
                    for t in 0..na {
                        let (f, q) = (x * na + s, y * na + t);
                        if c.tm(h(f), h(q)) != h(d.tm(f, q)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    };
    let mut families = Vec::new();
    let mut psi = vec![0usize; ng];
    let mut stack = vec![0usize];
    // depth-first over ψ_0, ψ_1, … with the naturality filter
    while let Some(&i) = stack.last() {
        let k = stack.len() - 1;
        if i == ends.len() {
            stack.pop();
            if let Some(top) = stack.last_mut() {
                *top += 1;
            }
            continue;
        }
        psi[k] = i;
        if (k != e || ends[i] == id_end) && nat_ok(&psi, k) {
            if k + 1 == ng {
                families.push(psi.clone());
                *stack.last_mut().unwrap() += 1;
            } else {
                stack.push(0);
            }
        } else {
            *stack.last_mut().unwrap() += 1;
        }
    }
    let cells: Vec<(usize, usize)> = (0..ng * ng)
        .map(|i| (i / ng, i % ng))
        .filter(|&(x, y)| x != e && y != e)
        .collect();
    let cell_pos = |x: usize, y: usize| cells.iter().position(|&c| c == (x, y));
    // each associativity triple is checked once its last free cell is set
    let mut buckets: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); cells.len() + 1];
    for x in 0..ng {
        for y in 0..ng {
            for z in 0..ng {
                let last = [(x, y), (y, z), (x, g.mul(y, z)), (g.mul(x, y), z)]
                    .iter()
                    .map(|&(u, v)| cell_pos(u, v).map_or(0, |p| p + 1))
                    .max()
                    .unwrap();
                buckets[last].push((x, y, z));
            }
        }
    }
    for fam in families {
        let hmor = |f: usize| (f / na) * na + ends[fam[f / na]][f % na];
        let functor = Functor::from_mor(d.groupoid.clone(), c.groupoid.clone(), hmor);
        if functor.check().is_some() {
            continue;
        }
        for t in 0..na {
            let f0 = e * na + t;
            let mut f2 = vec![usize::MAX; ng * ng];
            let mut ok = true;
            for y in 0..ng {
                let want = c.l(y);
                let hit = (0..na)
                    .map(|s| y * na + s)
                    .find(|&m| cg.path(&[c.tm(f0, c.id(y)), m, hmor(d.l(y))]) == want);
                match hit {
                    Some(m) => f2[e * ng + y] = m,
                    None => ok = false,
                }
            }
            for x in 0..ng {
                let want = c.r(x);
                let hit = (0..na)
                    .map(|s| x * na + s)
                    .find(|&m| cg.path(&[c.tm(c.id(x), f0), m, hmor(d.r(x))]) == want);
                match hit {
                    Some(m) if x != e || f2[e * ng + e] == m => f2[x * ng + e] = m,
                    _ => ok = false,
                }
            }
            if !ok {
                continue;
            }
            let assoc_ok = |f2: &[usize], (x, y, z): (usize, usize, usize)| {
                let (xy, yz) = (g.mul(x, y), g.mul(y, z));
                let lhs = cg.path(&[c.a(x, y, z), c.tm(c.id(x), f2[y * ng + z]), f2[x * ng + yz]]);
                let rhs = cg.path(&[
                    c.tm(f2[x * ng + y], c.id(z)),
                    f2[xy * ng + z],
                    hmor(d.a(x, y, z)),
                ]);
                lhs == rhs
            };
            if !buckets[0].iter().all(|&tr| assoc_ok(&f2, tr)) {
                continue;
            }
            let search = CellSearch {
                cells: &cells,
                buckets: &buckets,
                g,
                na,
                assoc_ok: &assoc_ok,
            };
            if search.fill(0, &mut f2) {
                let h = TwoGroupHom::new(
                    d.clone(),
                    c.clone(),
                    functor.clone(),
                    |x, y| f2[x * ng + y],
                    f0,
                );
                if check_hom(&h).ok() && accept(&h) {
                    return Some(h);
                }
            }
        }
    }
    None
}

struct CellSearch<'a> {
    cells: &'a [(usize, usize)],
    buckets: &'a [Vec<(usize, usize, usize)>],
    g: &'a GroupTable,
    na: usize,
    assoc_ok: &'a dyn Fn(&[usize], (usize, usize, usize)) -> bool,
}

impl CellSearch<'_> {
    fn fill(&self, k: usize, f2: &mut Vec<usize>) -> bool {
        if k == self.cells.len() {
            return true;
        }
        let ng = self.g.order();
        let (x, y) = self.cells[k];
        let xy = self.g.mul(x, y);
        for s in 0..self.na {
            f2[x * ng + y] = xy * self.na + s;
            if self.buckets[k + 1]
                .iter()
                .all(|&tr| (self.assoc_ok)(f2, tr))
                && self.fill(k + 1, f2)
            {
                return true;
            }
        }
        f2[x * ng + y] = usize::MAX;
        false
    }
}

#[cfg(test)]
mod tests;

//! 2-groups as monoidal groupoids.

use std::sync::Arc;

use crate::groupoid::{
    equivalence_failure, homotopy_invariants, FiniteGroupoid, Functor, GroupTable,
};
use crate::report::{Report, Violation};

mod action;
mod crossed;
mod hom;
mod skeletal;

pub use action::{check_action, check_equivariant, EquivariantMorphism, TwoGroupAction};
pub use crossed::{CrossedModule, CrossedModuleData};
pub use hom::{check_hom, check_two_hom, find_two_hom, TwoGroupHom, TwoHom};
pub use skeletal::{
    realize_skeletal, realize_skeletal_unchecked, skeletalize, skeletalize_with, SkeletalData,
    SkeletalTwoGroup, Skeletalization, SkeletonChoice,
};

/// A groupoid `Γ` with tensor `m: Γ×Γ → Γ`, unit `e` and associator and
/// unitors stored by component:
/// `a(x,y,z): (x⊗y)⊗z → x⊗(y⊗z)`, `l(x): e⊗x → x`, `r(x): x⊗e → x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidalGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    tensor_obj: Vec<usize>,
    tensor_mor: Vec<usize>,
    pub unit: usize,
    assoc: Vec<usize>,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl MonoidalGroupoid {
    /// No axioms are checked here; see [`verify_coherence`].
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        tensor_mor: impl Fn(usize, usize) -> usize,
        unit: usize,
        assoc: impl Fn(usize, usize, usize) -> usize,
        left: impl Fn(usize) -> usize,
        right: impl Fn(usize) -> usize,
    ) -> Self {
        let (n, m) = (groupoid.n_objects(), groupoid.n_morphisms());
        let tensor_mor: Vec<usize> = (0..m * m).map(|i| tensor_mor(i / m, i % m)).collect();
        let tensor_obj = (0..n * n)
            .map(|i| groupoid.src(tensor_mor[groupoid.ident(i / n) * m + groupoid.ident(i % n)]))
            .collect();
        let assoc = (0..n * n * n)
            .map(|i| assoc(i / (n * n), (i / n) % n, i % n))
            .collect();
        let left = (0..n).map(left).collect();
        let right = (0..n).map(right).collect();
        MonoidalGroupoid {
            groupoid,
            tensor_obj,
            tensor_mor,
            unit,
            assoc,
            left,
            right,
        }
    }

    /// Strict, with identity structure maps.
    pub fn strict(
        groupoid: Arc<FiniteGroupoid>,
        tensor_mor: impl Fn(usize, usize) -> usize,
        unit: usize,
    ) -> Self {
        let mut md = Self::new(
            groupoid.clone(),
            tensor_mor,
            unit,
            |_, _, _| 0,
            |_| 0,
            |_| 0,
        );
        let n = groupoid.n_objects();
        md.assoc = (0..n * n * n)
            .map(|i| groupoid.ident(md.t(md.t(i / (n * n), (i / n) % n), i % n)))
            .collect();
        md.left = (0..n).map(|x| groupoid.ident(md.t(unit, x))).collect();
        md.right = (0..n).map(|x| groupoid.ident(md.t(x, unit))).collect();
        md
    }

    /// A discrete groupoid with a monoid table as tensor.
    pub fn from_monoid(table: &[Vec<usize>], unit: usize) -> Self {
        let g = Arc::new(FiniteGroupoid::discrete(table.len()));
        Self::strict(g, |f, h| table[f][h], unit)
    }

    /// `G` as a discrete strict 2-group.
    pub fn discrete_group(g: &GroupTable) -> Self {
        Self::from_monoid(&g.rows(), g.unit())
    }

    /// `[pt/G]` with tensor the group product on morphisms; monoidal only
    /// when `G` is abelian.
    pub fn delooping(g: &GroupTable) -> Self {
        Self::strict(
            Arc::new(FiniteGroupoid::delooping(g)),
            |a, b| g.mul(a, b),
            0,
        )
    }

    pub fn n_objects(&self) -> usize {
        self.groupoid.n_objects()
    }

    #[inline]
    pub fn t(&self, x: usize, y: usize) -> usize {
        self.tensor_obj[x * self.n_objects() + y]
    }

    #[inline]
    pub fn tm(&self, f: usize, g: usize) -> usize {
        self.tensor_mor[f * self.groupoid.n_morphisms() + g]
    }

    #[inline]
    pub fn a(&self, x: usize, y: usize, z: usize) -> usize {
        let n = self.n_objects();
        self.assoc[(x * n + y) * n + z]
    }

    #[inline]
    pub fn l(&self, x: usize) -> usize {
        self.left[x]
    }

    #[inline]
    pub fn r(&self, x: usize) -> usize {
        self.right[x]
    }

    #[inline]
    pub fn id(&self, x: usize) -> usize {
        self.groupoid.ident(x)
    }

    /// Replaces one associator component, for perturbation tests.
    pub fn set_assoc(&mut self, x: usize, y: usize, z: usize, f: usize) {
        let n = self.n_objects();
        self.assoc[(x * n + y) * n + z] = f;
    }

    /// `m` as a functor on the product groupoid.
    pub fn tensor_functor(&self) -> Functor {
        let sq = Arc::new(FiniteGroupoid::product(&self.groupoid, &self.groupoid));
        Functor::new(
            sq,
            self.groupoid.clone(),
            self.tensor_obj.clone(),
            self.tensor_mor.clone(),
        )
    }

    /// `(p₁, m): (x, y) ↦ (x, x⊗y)`.
    pub fn shear_functor(&self) -> Functor {
        let sq = Arc::new(FiniteGroupoid::product(&self.groupoid, &self.groupoid));
        let (n, m) = (self.n_objects(), self.groupoid.n_morphisms());
        let obj = (0..n * n)
            .map(|i| (i / n) * n + self.t(i / n, i % n))
            .collect();
        let mor = (0..m * m)
            .map(|i| (i / m) * m + self.tm(i / m, i % m))
            .collect();
        Functor::new(sq.clone(), sq, obj, mor)
    }
}

fn first<T>(it: impl IntoIterator<Item = T>, pred: impl FnMut(&T) -> bool) -> Option<T> {
    it.into_iter().find(pred)
}

/// Tensor functoriality, typing and naturality of `a`, `l`, `r`, the
/// pentagon on all quadruples and the triangle on all pairs.
pub fn verify_coherence(md: &MonoidalGroupoid) -> Report {
    let g = &*md.groupoid;
    let n = md.n_objects();
    let m = g.n_morphisms();
    let mut rep = Report::new();

    let functor = (|| {
        for f in 0..m {
            for h in 0..m {
                let t = md.tm(f, h);
                if g.src(t) != md.t(g.src(f), g.src(h)) || g.tgt(t) != md.t(g.tgt(f), g.tgt(h)) {
                    return Some(vec![f, h]);
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if md.tm(md.id(x), md.id(y)) != md.id(md.t(x, y)) {
                    return Some(vec![x, y]);
                }
            }
        }
        for f in 0..m {
            for &f2 in g.out(g.tgt(f)) {
                for h in 0..m {
                    for &h2 in g.out(g.tgt(h)) {
                        if md.tm(g.comp(f, f2), g.comp(h, h2)) != g.comp(md.tm(f, h), md.tm(f2, h2))
                        {
                            return Some(vec![f, f2, h, h2]);
                        }
                    }
                }
            }
        }
        None
    })();
    rep.record("tensor functoriality", m * m, functor.clone());
    if functor.is_some() {
        return rep;
    }

    let triples = (0..n * n * n).map(|i| (i / (n * n), (i / n) % n, i % n));
    let typed = first(triples.clone(), |&(x, y, z)| {
        let f = md.a(x, y, z);
        f >= m || g.src(f) != md.t(md.t(x, y), z) || g.tgt(f) != md.t(x, md.t(y, z))
    });
    rep.record(
        "associator components",
        n * n * n,
        typed.map(|(x, y, z)| vec![x, y, z]),
    );
    let lt = first(0..n, |&x| {
        md.l(x) >= m || g.src(md.l(x)) != md.t(md.unit, x) || g.tgt(md.l(x)) != x
    });
    rep.record("left unitor components", n, lt.map(|x| vec![x]));
    let rt = first(0..n, |&x| {
        md.r(x) >= m || g.src(md.r(x)) != md.t(x, md.unit) || g.tgt(md.r(x)) != x
    });
    rep.record("right unitor components", n, rt.map(|x| vec![x]));
    if !rep.ok() {
        return rep;
    }

    let nat = (|| {
        for f in 0..m {
            let (x, x2) = (g.src(f), g.tgt(f));
            for y in 0..n {
                for z in 0..n {
                    let (iy, iz) = (md.id(y), md.id(z));
                    // f in each of the three slots
                    let slots = [
                        (f, iy, iz, [x, y, z], [x2, y, z]),
                        (iy, f, iz, [y, x, z], [y, x2, z]),
                        (iy, iz, f, [y, z, x], [y, z, x2]),
                    ];
                    for (k, (p, q, s, a, b)) in slots.into_iter().enumerate() {
                        let lhs = g.comp(md.tm(md.tm(p, q), s), md.a(b[0], b[1], b[2]));
                        let rhs = g.comp(md.a(a[0], a[1], a[2]), md.tm(p, md.tm(q, s)));
                        if lhs != rhs {
                            return Some(vec![k, f, y, z]);
                        }
                    }
                }
            }
        }
        None
    })();
    rep.record("associator naturality", 3 * m * n * n, nat);
    let lnat = first(0..m, |&f| {
        g.comp(md.tm(md.id(md.unit), f), md.l(g.tgt(f))) != g.comp(md.l(g.src(f)), f)
    });
    rep.record("left unitor naturality", m, lnat.map(|f| vec![f]));
    let rnat = first(0..m, |&f| {
        g.comp(md.tm(f, md.id(md.unit)), md.r(g.tgt(f))) != g.comp(md.r(g.src(f)), f)
    });
    rep.record("right unitor naturality", m, rnat.map(|f| vec![f]));

    let pent = (|| {
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let (wx, xy, yz) = (md.t(w, x), md.t(x, y), md.t(y, z));
                        let lhs = g.comp(md.a(wx, y, z), md.a(w, x, yz));
                        let rhs = g.path(&[
                            md.tm(md.a(w, x, y), md.id(z)),
                            md.a(w, xy, z),
                            md.tm(md.id(w), md.a(x, y, z)),
                        ]);
                        if lhs != rhs {
                            return Some(vec![w, x, y, z]);
                        }
                    }
                }
            }
        }
        None
    })();
    rep.record("pentagon", n.pow(4), pent);
    let tri = first((0..n * n).map(|i| (i / n, i % n)), |&(x, y)| {
        g.comp(md.a(x, md.unit, y), md.tm(md.id(x), md.l(y))) != md.tm(md.r(x), md.id(y))
    });
    rep.record("triangle", n * n, tri.map(|(x, y)| vec![x, y]));
    rep
}

/// Both 2-group criteria.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoGroupVerdict {
    /// `π₀` with the induced product is a group.
    pub pi0_group: bool,
    /// `(p₁, ⊗)` is an equivalence.
    pub shear_equivalence: bool,
    pub witness: Option<Violation>,
}

impl TwoGroupVerdict {
    pub fn holds(&self) -> bool {
        self.pi0_group && self.shear_equivalence
    }

    pub fn agree(&self) -> bool {
        self.pi0_group == self.shear_equivalence
    }
}

pub fn is_two_group(md: &MonoidalGroupoid) -> TwoGroupVerdict {
    let inv = homotopy_invariants(&md.groupoid);
    let k = inv.n_components();
    let cls = |x: usize| inv.component[x];
    let reps = &inv.representatives;
    let e = cls(md.unit);
    let mut witness = None;
    // well defined on classes is automatic for a functor; invertibility is the content
    let prod = |c: usize, d: usize| cls(md.t(reps[c], reps[d]));
    for c in 0..k {
        let right = (0..k).any(|d| prod(c, d) == e);
        let left = (0..k).any(|d| prod(d, c) == e);
        if !(right && left) {
            witness = Some(Violation::new("object without inverse", vec![reps[c]]));
            break;
        }
    }
    let pi0_group = witness.is_none();
    let shear = equivalence_failure(&md.shear_functor());
    if witness.is_none() {
        witness = shear.clone();
    }
    TwoGroupVerdict {
        pi0_group,
        shear_equivalence: shear.is_none(),
        witness,
    }
}

/// Symmetric braiding `β(x,y): x⊗y → y⊗x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Braiding {
    comp: Vec<usize>,
}

impl Braiding {
    pub fn new(md: &MonoidalGroupoid, f: impl Fn(usize, usize) -> usize) -> Self {
        let n = md.n_objects();
        Braiding {
            comp: (0..n * n).map(|i| f(i / n, i % n)).collect(),
        }
    }

    /// Identity components, defined when `x⊗y = y⊗x` on objects.
    pub fn identity(md: &MonoidalGroupoid) -> Option<Self> {
        let n = md.n_objects();
        (0..n * n)
            .all(|i| md.t(i / n, i % n) == md.t(i % n, i / n))
            .then(|| Self::new(md, |x, y| md.id(md.t(x, y))))
    }

    pub fn at(&self, n: usize, x: usize, y: usize) -> usize {
        self.comp[x * n + y]
    }
}

/// Typing, naturality, symmetry and the hexagon.
pub fn check_abelian(md: &MonoidalGroupoid, b: &Braiding) -> Report {
    let g = &*md.groupoid;
    let n = md.n_objects();
    let m = g.n_morphisms();
    let bb = |x, y| b.at(n, x, y);
    let pairs = || (0..n * n).map(move |i| (i / n, i % n));
    let mut rep = Report::new();
    let typed = first(pairs(), |&(x, y)| {
        let f = bb(x, y);
        f >= m || g.src(f) != md.t(x, y) || g.tgt(f) != md.t(y, x)
    });
    rep.record("braiding components", n * n, typed.map(|(x, y)| vec![x, y]));
    if !rep.ok() {
        return rep;
    }
    // both variables at once: the tensor need not be functorial here
    let nat = (0..m * m).map(|i| (i / m, i % m)).find(|&(f, h)| {
        g.comp(md.tm(f, h), bb(g.tgt(f), g.tgt(h))) != g.comp(bb(g.src(f), g.src(h)), md.tm(h, f))
    });
    rep.record("braiding naturality", m * m, nat.map(|(f, h)| vec![f, h]));
    let sym = first(pairs(), |&(x, y)| {
        g.comp(bb(x, y), bb(y, x)) != md.id(md.t(x, y))
    });
    rep.record("symmetry", n * n, sym.map(|(x, y)| vec![x, y]));
    let hex = (|| {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = g.path(&[md.a(x, y, z), bb(x, md.t(y, z)), md.a(y, z, x)]);
                    let rhs = g.path(&[
                        md.tm(bb(x, y), md.id(z)),
                        md.a(y, x, z),
                        md.tm(md.id(y), bb(x, z)),
                    ]);
                    if lhs != rhs {
                        return Some(vec![x, y, z]);
                    }
                }
            }
        }
        None
    })();
    rep.record("hexagon", n * n * n, hex);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_group_is_coherent_two_group() {
        let md = MonoidalGroupoid::discrete_group(&GroupTable::symmetric(3));
        assert!(verify_coherence(&md).ok());
        let v = is_two_group(&md);
        assert!(v.holds() && v.agree());
    }

    #[test]
    fn truncated_naturals_are_not_a_two_group() {
        let cut = 4;
        let table: Vec<Vec<usize>> = (0..=cut)
            .map(|a| (0..=cut).map(|b| (a + b).min(cut)).collect())
            .collect();
        let md = MonoidalGroupoid::from_monoid(&table, 0);
        assert!(verify_coherence(&md).ok());
        let v = is_two_group(&md);
        assert!(!v.pi0_group && !v.shear_equivalence);
        assert_eq!(v.witness.unwrap().witness, vec![1]);
    }

    #[test]
    fn point_mod_a_is_abelian() {
        let md = MonoidalGroupoid::delooping(&GroupTable::cyclic(3));
        assert!(verify_coherence(&md).ok());
        assert!(check_abelian(&md, &Braiding::identity(&md).unwrap()).ok());
        let v = is_two_group(&md);
        assert!(v.holds());
    }

    #[test]
    fn nonabelian_delooping_fails_braiding() {
        let md = MonoidalGroupoid::delooping(&GroupTable::symmetric(3));
        let rep = check_abelian(&md, &Braiding::identity(&md).unwrap());
        assert!(rep.get("braiding naturality").unwrap().witness.is_some());
        assert!(!verify_coherence(&md).ok());
    }
}

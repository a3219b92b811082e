use std::sync::Arc;

use super::MonoidalGroupoid;
use crate::groupoid::{FiniteGroupoid, Functor};
use crate::report::Report;

/// A left action `Γ × X → X` with
/// `a_f(g,h,x): (g⊗h)·x → g·(h·x)` and `l_f(x): e·x → x`.
#[derive(Clone, Debug)]
pub struct TwoGroupAction {
    pub group: Arc<MonoidalGroupoid>,
    pub space: Arc<FiniteGroupoid>,
    act_mor: Vec<usize>,
    assoc: Vec<usize>,
    left: Vec<usize>,
}

impl TwoGroupAction {
    pub fn new(
        group: Arc<MonoidalGroupoid>,
        space: Arc<FiniteGroupoid>,
        act_mor: impl Fn(usize, usize) -> usize,
        assoc: impl Fn(usize, usize, usize) -> usize,
        left: impl Fn(usize) -> usize,
    ) -> Self {
        let (n, m) = (group.n_objects(), group.groupoid.n_morphisms());
        let (nx, mx) = (space.n_objects(), space.n_morphisms());
        let act_mor = (0..m * mx).map(|i| act_mor(i / mx, i % mx)).collect();
        let assoc = (0..n * n * nx)
            .map(|i| assoc(i / (n * nx), (i / nx) % n, i % nx))
            .collect();
        let left = (0..nx).map(left).collect();
        TwoGroupAction {
            group,
            space,
            act_mor,
            assoc,
            left,
        }
    }

    /// `Γ` acting on itself by the tensor.
    pub fn regular(md: &Arc<MonoidalGroupoid>) -> Self {
        Self::new(
            md.clone(),
            md.groupoid.clone(),
            |f, u| md.tm(f, u),
            |g, h, x| md.a(g, h, x),
            |x| md.l(x),
        )
    }

    /// `g·x = x` with identity structure maps.
    pub fn trivial(md: &Arc<MonoidalGroupoid>, space: Arc<FiniteGroupoid>) -> Self {
        let ids: Vec<usize> = (0..space.n_objects()).map(|x| space.ident(x)).collect();
        Self::new(md.clone(), space, |_, u| u, |_, _, x| ids[x], |x| ids[x])
    }

    pub fn act_mor(&self, f: usize, u: usize) -> usize {
        self.act_mor[f * self.space.n_morphisms() + u]
    }

    pub fn act_obj(&self, g: usize, x: usize) -> usize {
        self.space
            .src(self.act_mor(self.group.id(g), self.space.ident(x)))
    }

    pub fn a(&self, g: usize, h: usize, x: usize) -> usize {
        let (n, nx) = (self.group.n_objects(), self.space.n_objects());
        self.assoc[(g * n + h) * nx + x]
    }

    pub fn l(&self, x: usize) -> usize {
        self.left[x]
    }

    /// The action as a functor `Γ × X → X`.
    pub fn functor(&self) -> Functor {
        let dom = Arc::new(FiniteGroupoid::product(&self.group.groupoid, &self.space));
        Functor::from_mor(dom, self.space.clone(), |i| self.act_mor[i])
    }
}

/// Functoriality, typing and naturality of `a_f` and `l_f`, the action
/// pentagon and the action triangle.
pub fn check_action(act: &TwoGroupAction) -> Report {
    let md = &*act.group;
    let (g, x) = (&*md.groupoid, &*act.space);
    let (n, nx, m, mx) = (
        md.n_objects(),
        x.n_objects(),
        g.n_morphisms(),
        x.n_morphisms(),
    );
    let mut rep = Report::new();
    let func = act.functor();
    let fv = func.check().map(|v| v.witness).or_else(|| {
        (0..m * mx).find_map(|i| {
            let (f, u) = (i / mx, i % mx);
            g.out(g.tgt(f)).iter().find_map(|&f2| {
                x.out(x.tgt(u)).iter().find_map(|&u2| {
                    (act.act_mor(g.comp(f, f2), x.comp(u, u2))
                        != x.comp(act.act_mor(f, u), act.act_mor(f2, u2)))
                    .then(|| vec![f, u, f2, u2])
                })
            })
        })
    });
    rep.record("action functoriality", m * mx, fv);
    if !rep.ok() {
        return rep;
    }
    let ao = |a: usize, b: usize| act.act_obj(a, b);
    let typed = (0..n * n * nx).find(|&i| {
        let (a, b, y) = (i / (n * nx), (i / nx) % n, i % nx);
        let f = act.a(a, b, y);
        f >= mx || x.src(f) != ao(md.t(a, b), y) || x.tgt(f) != ao(a, ao(b, y))
    });
    rep.record(
        "action associator components",
        n * n * nx,
        typed.map(|i| vec![i / (n * nx), (i / nx) % n, i % nx]),
    );
    let lt = (0..nx)
        .find(|&y| act.l(y) >= mx || x.src(act.l(y)) != ao(md.unit, y) || x.tgt(act.l(y)) != y);
    rep.record("action unitor components", nx, lt.map(|y| vec![y]));
    if !rep.ok() {
        return rep;
    }
    let am = |f: usize, u: usize| act.act_mor(f, u);
    let nat = (|| {
        for f in 0..m {
            for b in 0..n {
                for y in 0..nx {
                    let (ib, iy) = (g.ident(b), x.ident(y));
                    let (s, t) = (g.src(f), g.tgt(f));
                    if x.comp(am(md.tm(f, ib), iy), act.a(t, b, y))
                        != x.comp(act.a(s, b, y), am(f, am(ib, iy)))
                    {
                        return Some(vec![0, f, b, y]);
                    }
                    if x.comp(am(md.tm(ib, f), iy), act.a(b, t, y))
                        != x.comp(act.a(b, s, y), am(ib, am(f, iy)))
                    {
                        return Some(vec![1, f, b, y]);
                    }
                }
            }
        }
        for u in 0..mx {
            for a in 0..n {
                for b in 0..n {
                    let (ia, ib) = (g.ident(a), g.ident(b));
                    let (s, t) = (x.src(u), x.tgt(u));
                    if x.comp(am(md.tm(ia, ib), u), act.a(a, b, t))
                        != x.comp(act.a(a, b, s), am(ia, am(ib, u)))
                    {
                        return Some(vec![2, u, a, b]);
                    }
                }
            }
        }
        None
    })();
    rep.record(
        "action associator naturality",
        2 * m * n * nx + mx * n * n,
        nat,
    );
    let lnat = (0..mx)
        .find(|&u| x.comp(am(g.ident(md.unit), u), act.l(x.tgt(u))) != x.comp(act.l(x.src(u)), u));
    rep.record("action unitor naturality", mx, lnat.map(|u| vec![u]));
    let pent = (|| {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for y in 0..nx {
                        let lhs = x.comp(act.a(md.t(a, b), c, y), act.a(a, b, ao(c, y)));
                        let rhs = x.path(&[
                            am(md.a(a, b, c), x.ident(y)),
                            act.a(a, md.t(b, c), y),
                            am(g.ident(a), act.a(b, c, y)),
                        ]);
                        if lhs != rhs {
                            return Some(vec![a, b, c, y]);
                        }
                    }
                }
            }
        }
        None
    })();
    rep.record("action pentagon", n * n * n * nx, pent);
    let tri = (0..n * nx).find(|&i| {
        let (a, y) = (i / nx, i % nx);
        x.comp(act.a(a, md.unit, y), am(g.ident(a), act.l(y))) != am(md.r(a), x.ident(y))
    });
    rep.record("action triangle", n * nx, tri.map(|i| vec![i / nx, i % nx]));
    rep
}

/// A functor `F: X → Y` with `φ(h,x): h·Fx → F(h·x)`.
#[derive(Clone, Debug)]
pub struct EquivariantMorphism {
    pub functor: Functor,
    phi: Vec<usize>,
}

impl EquivariantMorphism {
    pub fn new(functor: Functor, n_group: usize, phi: impl Fn(usize, usize) -> usize) -> Self {
        let nx = functor.dom.n_objects();
        EquivariantMorphism {
            phi: (0..n_group * nx).map(|i| phi(i / nx, i % nx)).collect(),
            functor,
        }
    }

    pub fn phi(&self, h: usize, x: usize) -> usize {
        self.phi[h * self.functor.dom.n_objects() + x]
    }
}

/// Typing, naturality of `φ` and the two equivariance axioms.
pub fn check_equivariant(
    ax: &TwoGroupAction,
    ay: &TwoGroupAction,
    m: &EquivariantMorphism,
) -> Report {
    let md = &*ax.group;
    let (g, x, y) = (&*md.groupoid, &*ax.space, &*ay.space);
    let n = md.n_objects();
    let nx = x.n_objects();
    let fo = |p: usize| m.functor.obj[p];
    let fm = |u: usize| m.functor.mor[u];
    let mut rep = Report::new();
    rep.record(
        "functor",
        x.n_morphisms(),
        m.functor.check().map(|v| v.witness),
    );
    if !rep.ok() {
        return rep;
    }
    let typed = (0..n * nx).find(|&i| {
        let (h, p) = (i / nx, i % nx);
        let f = m.phi(h, p);
        f >= y.n_morphisms() || y.src(f) != ay.act_obj(h, fo(p)) || y.tgt(f) != fo(ax.act_obj(h, p))
    });
    rep.record(
        "phi components",
        n * nx,
        typed.map(|i| vec![i / nx, i % nx]),
    );
    if !rep.ok() {
        return rep;
    }
    let nat = (|| {
        for f in 0..g.n_morphisms() {
            for u in 0..x.n_morphisms() {
                let lhs = y.comp(ay.act_mor(f, fm(u)), m.phi(g.tgt(f), x.tgt(u)));
                let rhs = y.comp(m.phi(g.src(f), x.src(u)), fm(ax.act_mor(f, u)));
                if lhs != rhs {
                    return Some(vec![f, u]);
                }
            }
        }
        None
    })();
    rep.record("phi naturality", g.n_morphisms() * x.n_morphisms(), nat);
    let assoc = (|| {
        for h in 0..n {
            for k in 0..n {
                for p in 0..nx {
                    let lhs = y.path(&[
                        ay.a(h, k, fo(p)),
                        ay.act_mor(g.ident(h), m.phi(k, p)),
                        m.phi(h, ax.act_obj(k, p)),
                    ]);
                    let rhs = y.comp(m.phi(md.t(h, k), p), fm(ax.a(h, k, p)));
                    if lhs != rhs {
                        return Some(vec![h, k, p]);
                    }
                }
            }
        }
        None
    })();
    rep.record("equivariance associativity", n * n * nx, assoc);
    let unit = (0..nx).find(|&p| ay.l(fo(p)) != y.comp(m.phi(md.unit, p), fm(ax.l(p))));
    rep.record("equivariance unit", nx, unit.map(|p| vec![p]));
    rep
}

#[cfg(test)]
mod tests {
    use super::super::{realize_skeletal, SkeletalTwoGroup};
    use super::*;
    use crate::cohomology::{Cochain, FiniteAbelianGroup, GAction};
    use crate::groupoid::GroupTable;

    fn nontrivial() -> Arc<MonoidalGroupoid> {
        let g = GroupTable::cyclic(2);
        let a = FiniteAbelianGroup::cyclic(2);
        let alpha = Cochain::from_fn(&g, 3, |t| (t == [1, 1, 1]) as usize);
        Arc::new(
            realize_skeletal(&SkeletalTwoGroup {
                rho: GAction::trivial(&g, &a),
                pi0: g,
                pi1: a,
                alpha,
            })
            .unwrap(),
        )
    }

    #[test]
    fn regular_and_trivial_actions() {
        let md = nontrivial();
        assert!(check_action(&TwoGroupAction::regular(&md)).ok());
        let pt = Arc::new(FiniteGroupoid::discrete(3));
        assert!(check_action(&TwoGroupAction::trivial(&md, pt)).ok());
    }

    #[test]
    fn identity_is_equivariant_and_perturbation_is_caught() {
        let md = nontrivial();
        let reg = TwoGroupAction::regular(&md);
        let id =
            EquivariantMorphism::new(Functor::identity(&md.groupoid), md.n_objects(), |h, x| {
                md.id(md.t(h, x))
            });
        assert!(check_equivariant(&reg, &reg, &id).ok());
        let na = 2;
        let bad =
            EquivariantMorphism::new(Functor::identity(&md.groupoid), md.n_objects(), |h, x| {
                let f = md.id(md.t(h, x));
                if (h, x) == (1, 1) {
                    (f / na) * na + 1
                } else {
                    f
                }
            });
        assert!(!check_equivariant(&reg, &reg, &bad).ok());
    }

    #[test]
    fn broken_action_associator_fails_pentagon() {
        let md = nontrivial();
        let reg = TwoGroupAction::regular(&md);
        let bad = TwoGroupAction::new(
            md.clone(),
            md.groupoid.clone(),
            |f, u| md.tm(f, u),
            |g, h, x| md.id(md.t(md.t(g, h), x)),
            |x| md.l(x),
        );
        assert!(check_action(&reg).ok());
        assert!(check_action(&bad)
            .get("action pentagon")
            .unwrap()
            .witness
            .is_some());
    }
}

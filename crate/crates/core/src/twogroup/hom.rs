use std::sync::Arc;

use super::MonoidalGroupoid;
use crate::groupoid::{homotopy_invariants, Functor};
use crate::report::Report;

/// A monoidal functor `(F, F2, F0)` with
/// `F2(x,y): Fx ⊗ Fy → F(x⊗y)` and `F0: e' → F(e)`.
#[derive(Clone, Debug)]
pub struct TwoGroupHom {
    pub dom: Arc<MonoidalGroupoid>,
    pub cod: Arc<MonoidalGroupoid>,
    pub functor: Functor,
    pub f2: Vec<usize>,
    pub f0: usize,
}

impl TwoGroupHom {
    pub fn new(
        dom: Arc<MonoidalGroupoid>,
        cod: Arc<MonoidalGroupoid>,
        functor: Functor,
        f2: impl Fn(usize, usize) -> usize,
        f0: usize,
    ) -> Self {
        let n = dom.n_objects();
        let f2 = (0..n * n).map(|i| f2(i / n, i % n)).collect();
        TwoGroupHom {
            dom,
            cod,
            functor,
            f2,
            f0,
        }
    }

    pub fn identity(md: &Arc<MonoidalGroupoid>) -> Self {
        let f = Functor::identity(&md.groupoid);
        Self::new(
            md.clone(),
            md.clone(),
            f,
            |x, y| md.id(md.t(x, y)),
            md.id(md.unit),
        )
    }

    #[inline]
    pub fn f2(&self, x: usize, y: usize) -> usize {
        self.f2[x * self.dom.n_objects() + y]
    }

    /// `self` then `k`.
    pub fn then(&self, k: &TwoGroupHom) -> TwoGroupHom {
        let c = &k.cod.groupoid;
        let fo = &self.functor.obj;
        let functor = self.functor.then(&k.functor);
        let f2 = |x: usize, y: usize| c.comp(k.f2(fo[x], fo[y]), k.functor.mor[self.f2(x, y)]);
        let f0 = c.comp(k.f0, k.functor.mor[self.f0]);
        TwoGroupHom::new(self.dom.clone(), k.cod.clone(), functor, f2, f0)
    }
}

/// Functor laws, typing and naturality of `F2`, and the three hom axioms.
pub fn check_hom(h: &TwoGroupHom) -> Report {
    let (d, c) = (&*h.dom, &*h.cod);
    let (dg, cg) = (&*d.groupoid, &*c.groupoid);
    let (n, m) = (d.n_objects(), dg.n_morphisms());
    let fo = |x: usize| h.functor.obj[x];
    let fm = |f: usize| h.functor.mor[f];
    let mut rep = Report::new();
    rep.record("functor", m, h.functor.check().map(|v| v.witness));
    if !rep.ok() {
        return rep;
    }
    let typed = (0..n * n).map(|i| (i / n, i % n)).find(|&(x, y)| {
        let f = h.f2(x, y);
        f >= cg.n_morphisms() || cg.src(f) != c.t(fo(x), fo(y)) || cg.tgt(f) != fo(d.t(x, y))
    });
    rep.record("F2 components", n * n, typed.map(|(x, y)| vec![x, y]));
    let f0_ok = h.f0 < cg.n_morphisms() && cg.src(h.f0) == c.unit && cg.tgt(h.f0) == fo(d.unit);
    rep.record("F0 component", 1, (!f0_ok).then(Vec::new));
    if !rep.ok() {
        return rep;
    }
    let nat = (|| {
        for f in 0..m {
            let (x, x2) = (dg.src(f), dg.tgt(f));
            for y in 0..n {
                let (iy, ify) = (dg.ident(y), cg.ident(fo(y)));
                let lhs = cg.comp(c.tm(fm(f), ify), h.f2(x2, y));
                if lhs != cg.comp(h.f2(x, y), fm(d.tm(f, iy))) {
                    return Some(vec![0, f, y]);
                }
                let lhs = cg.comp(c.tm(ify, fm(f)), h.f2(y, x2));
                if lhs != cg.comp(h.f2(y, x), fm(d.tm(iy, f))) {
                    return Some(vec![1, f, y]);
                }
            }
        }
        None
    })();
    rep.record("F2 naturality", 2 * m * n, nat);
    let assoc = (|| {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (xy, yz) = (d.t(x, y), d.t(y, z));
                    let lhs = cg.path(&[
                        c.a(fo(x), fo(y), fo(z)),
                        c.tm(c.id(fo(x)), h.f2(y, z)),
                        h.f2(x, yz),
                    ]);
                    let rhs =
                        cg.path(&[c.tm(h.f2(x, y), c.id(fo(z))), h.f2(xy, z), fm(d.a(x, y, z))]);
                    if lhs != rhs {
                        return Some(vec![x, y, z]);
                    }
                }
            }
        }
        None
    })();
    rep.record("associativity", n * n * n, assoc);
    let left = (0..n)
        .find(|&x| c.l(fo(x)) != cg.path(&[c.tm(h.f0, c.id(fo(x))), h.f2(d.unit, x), fm(d.l(x))]));
    rep.record("left unitality", n, left.map(|x| vec![x]));
    let right = (0..n)
        .find(|&x| c.r(fo(x)) != cg.path(&[c.tm(c.id(fo(x)), h.f0), h.f2(x, d.unit), fm(d.r(x))]));
    rep.record("right unitality", n, right.map(|x| vec![x]));
    rep
}

/// A monoidal natural isomorphism `θ: F ⇒ K`, `θ_x: Fx → Kx`.
#[derive(Clone, Debug)]
pub struct TwoHom {
    pub comp: Vec<usize>,
}

/// Typing, naturality, the monoidal square and the unit triangle.
pub fn check_two_hom(f: &TwoGroupHom, k: &TwoGroupHom, t: &TwoHom) -> Report {
    let (d, c) = (&*f.dom, &*f.cod);
    let (dg, cg) = (&*d.groupoid, &*c.groupoid);
    let n = d.n_objects();
    let th = |x: usize| t.comp[x];
    let mut rep = Report::new();
    let typed = (t.comp.len() != n).then(|| vec![t.comp.len()]).or_else(|| {
        (0..n)
            .find(|&x| {
                th(x) >= cg.n_morphisms()
                    || cg.src(th(x)) != f.functor.obj[x]
                    || cg.tgt(th(x)) != k.functor.obj[x]
            })
            .map(|x| vec![x])
    });
    rep.record("components", n, typed);
    if !rep.ok() {
        return rep;
    }
    let nat = (0..dg.n_morphisms()).find(|&g| {
        cg.comp(f.functor.mor[g], th(dg.tgt(g))) != cg.comp(th(dg.src(g)), k.functor.mor[g])
    });
    rep.record("naturality", dg.n_morphisms(), nat.map(|g| vec![g]));
    let mono = (0..n * n).map(|i| (i / n, i % n)).find(|&(x, y)| {
        cg.comp(f.f2(x, y), th(d.t(x, y))) != cg.comp(c.tm(th(x), th(y)), k.f2(x, y))
    });
    rep.record("monoidal square", n * n, mono.map(|(x, y)| vec![x, y]));
    let unit = cg.comp(f.f0, th(d.unit)) != k.f0;
    rep.record("unit triangle", 1, unit.then(Vec::new));
    rep
}

/// Searches for a 2-morphism `F ⇒ K`. Naturality fixes `θ` on each
/// component from its value at one object, and the unit triangle fixes it
/// on the component of `e`, so only `|hom(F r, K r)|` choices per remaining
/// component are tried.
pub fn find_two_hom(f: &TwoGroupHom, k: &TwoGroupHom) -> Option<TwoHom> {
    let d = &*f.dom;
    let (dg, cg) = (&*d.groupoid, &*f.cod.groupoid);
    let (fo, ko) = (&f.functor.obj, &k.functor.obj);
    let (fm, km) = (&f.functor.mor, &k.functor.mor);
    let inv = homotopy_invariants(dg);
    let n = d.n_objects();
    let reps = &inv.representatives;
    let link: Vec<usize> = (0..n)
        .map(|x| dg.first_hom(reps[inv.component[x]], x).unwrap())
        .collect();
    let spread = |r_val: usize, x: usize| cg.path(&[cg.inv(fm[link[x]]), r_val, km[link[x]]]);
    // candidates at each representative, filtered by naturality on its automorphisms
    let unit_comp = inv.component[d.unit];
    let theta_e = cg.comp(cg.inv(f.f0), k.f0);
    let mut cands: Vec<Vec<usize>> = Vec::with_capacity(reps.len());
    for (ci, &r) in reps.iter().enumerate() {
        let pool: Vec<usize> = if ci == unit_comp {
            let c = link[d.unit];
            vec![cg.path(&[fm[c], theta_e, cg.inv(km[c])])]
        } else {
            cg.hom(fo[r], ko[r]).collect()
        };
        let ok: Vec<usize> = pool
            .into_iter()
            .filter(|&t| {
                dg.auts(r)
                    .into_iter()
                    .all(|g| cg.comp(fm[g], t) == cg.comp(t, km[g]))
            })
            .collect();
        if ok.is_empty() {
            return None;
        }
        cands.push(ok);
    }
    let mut idx = vec![0usize; reps.len()];
    loop {
        let comp: Vec<usize> = (0..n)
            .map(|x| spread(cands[inv.component[x]][idx[inv.component[x]]], x))
            .collect();
        let t = TwoHom { comp };
        if check_two_hom(f, k, &t).ok() {
            return Some(t);
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return None;
            }
            idx[i] += 1;
            if idx[i] < cands[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

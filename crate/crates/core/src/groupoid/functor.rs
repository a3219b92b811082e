use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use super::FiniteGroupoid;
use crate::error::{invalid, Result};
use crate::report::Violation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub dom: Arc<FiniteGroupoid>,
    pub cod: Arc<FiniteGroupoid>,
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
}

pub(crate) fn same(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Functor {
    pub fn new(
        dom: Arc<FiniteGroupoid>,
        cod: Arc<FiniteGroupoid>,
        obj: Vec<usize>,
        mor: Vec<usize>,
    ) -> Self {
        Functor { dom, cod, obj, mor }
    }

    /// Object map read off from the images of identities.
    pub fn from_mor(
        dom: Arc<FiniteGroupoid>,
        cod: Arc<FiniteGroupoid>,
        mor: impl Fn(usize) -> usize,
    ) -> Self {
        let mor: Vec<usize> = (0..dom.n_morphisms()).map(mor).collect();
        let obj = (0..dom.n_objects())
            .map(|x| cod.src(mor[dom.ident(x)]))
            .collect();
        Functor { dom, cod, obj, mor }
    }

    pub fn identity(g: &Arc<FiniteGroupoid>) -> Self {
        Functor::new(
            g.clone(),
            g.clone(),
            (0..g.n_objects()).collect(),
            (0..g.n_morphisms()).collect(),
        )
    }

    /// Constant functor at `y` (all morphisms to the identity of `y`).
    pub fn constant(dom: Arc<FiniteGroupoid>, cod: Arc<FiniteGroupoid>, y: usize) -> Self {
        let e = cod.ident(y);
        Functor::new(
            dom.clone(),
            cod,
            vec![y; dom.n_objects()],
            vec![e; dom.n_morphisms()],
        )
    }

    pub fn check(&self) -> Option<Violation> {
        let (d, c) = (&*self.dom, &*self.cod);
        if self.obj.len() != d.n_objects() || self.mor.len() != d.n_morphisms() {
            return Some(Violation::new(
                "functor table lengths",
                vec![self.obj.len(), self.mor.len()],
            ));
        }
        if let Some(x) = self.obj.iter().position(|&y| y >= c.n_objects()) {
            return Some(Violation::new("functor object range", vec![x]));
        }
        if let Some(f) = self.mor.iter().position(|&h| h >= c.n_morphisms()) {
            return Some(Violation::new("functor morphism range", vec![f]));
        }
        for f in 0..d.n_morphisms() {
            let h = self.mor[f];
            if c.src(h) != self.obj[d.src(f)] || c.tgt(h) != self.obj[d.tgt(f)] {
                return Some(Violation::new("functor endpoints", vec![f]));
            }
        }
        for x in 0..d.n_objects() {
            if self.mor[d.ident(x)] != c.ident(self.obj[x]) {
                return Some(Violation::new("functor identities", vec![x]));
            }
        }
        for f in 0..d.n_morphisms() {
            for &g in d.out(d.tgt(f)) {
                if self.mor[d.comp(f, g)] != c.comp(self.mor[f], self.mor[g]) {
                    return Some(Violation::new("functor composition", vec![f, g]));
                }
            }
        }
        None
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Functor) -> Functor {
        assert!(same(&self.cod, &other.dom), "functors not composable");
        Functor::new(
            self.dom.clone(),
            other.cod.clone(),
            self.obj.iter().map(|&y| other.obj[y]).collect(),
            self.mor.iter().map(|&h| other.mor[h]).collect(),
        )
    }

    /// `a × b` between the given product groupoids (indexing as in
    /// [`FiniteGroupoid::product`]).
    pub fn product(
        a: &Functor,
        b: &Functor,
        dom: Arc<FiniteGroupoid>,
        cod: Arc<FiniteGroupoid>,
    ) -> Functor {
        let (nb, mb) = (b.dom.n_objects(), b.dom.n_morphisms());
        let (nb2, mb2) = (b.cod.n_objects(), b.cod.n_morphisms());
        let obj = (0..dom.n_objects())
            .map(|x| a.obj[x / nb] * nb2 + b.obj[x % nb])
            .collect();
        let mor = (0..dom.n_morphisms())
            .map(|f| a.mor[f / mb] * mb2 + b.mor[f % mb])
            .collect();
        Functor::new(dom, cod, obj, mor)
    }

    /// The unique `f: x → y` with `F(f) = h`, when it exists.
    pub fn lift(&self, x: usize, y: usize, h: usize) -> Option<usize> {
        self.dom.hom(x, y).find(|&f| self.mor[f] == h)
    }
}

/// Natural transformation `source ⇒ target` with `comp[x]: source(x) → target(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    pub source: Functor,
    pub target: Functor,
    pub comp: Vec<usize>,
}

impl NatTrans {
    pub fn new(source: Functor, target: Functor, comp: Vec<usize>) -> Self {
        NatTrans {
            source,
            target,
            comp,
        }
    }

    pub fn identity(f: &Functor) -> Self {
        let comp = f.obj.iter().map(|&y| f.cod.ident(y)).collect();
        NatTrans::new(f.clone(), f.clone(), comp)
    }

    pub fn check(&self) -> Option<Violation> {
        let (d, c) = (&*self.source.dom, &*self.source.cod);
        if !same(&self.source.dom, &self.target.dom) || !same(&self.source.cod, &self.target.cod) {
            return Some(Violation::new("transformation endpoints differ", vec![]));
        }
        if self.comp.len() != d.n_objects() {
            return Some(Violation::new(
                "transformation length",
                vec![self.comp.len()],
            ));
        }
        for x in 0..d.n_objects() {
            let k = self.comp[x];
            if k >= c.n_morphisms()
                || c.src(k) != self.source.obj[x]
                || c.tgt(k) != self.target.obj[x]
            {
                return Some(Violation::new("component endpoints", vec![x]));
            }
        }
        for f in 0..d.n_morphisms() {
            let (x, y) = (d.src(f), d.tgt(f));
            if c.comp(self.source.mor[f], self.comp[y]) != c.comp(self.comp[x], self.target.mor[f])
            {
                return Some(Violation::new("naturality", vec![f]));
            }
        }
        None
    }

    /// Vertical composite `self` then `other`.
    pub fn then(&self, other: &NatTrans) -> NatTrans {
        let c = &self.source.cod;
        let comp = self
            .comp
            .iter()
            .zip(&other.comp)
            .map(|(&a, &b)| c.comp(a, b))
            .collect();
        NatTrans::new(self.source.clone(), other.target.clone(), comp)
    }

    pub fn inverse(&self) -> NatTrans {
        let c = &self.source.cod;
        NatTrans::new(
            self.target.clone(),
            self.source.clone(),
            self.comp.iter().map(|&k| c.inv(k)).collect(),
        )
    }

    /// `H ∘ self` for `H` out of the codomain.
    pub fn whisker_after(&self, h: &Functor) -> NatTrans {
        NatTrans::new(
            self.source.then(h),
            self.target.then(h),
            self.comp.iter().map(|&k| h.mor[k]).collect(),
        )
    }

    /// `self ∘ K` for `K` into the domain.
    pub fn whisker_before(&self, k: &Functor) -> NatTrans {
        NatTrans::new(
            k.then(&self.source),
            k.then(&self.target),
            k.obj.iter().map(|&x| self.comp[x]).collect(),
        )
    }
}

/// A natural isomorphism `f ⇒ g`, searched one connected component at a
/// time: the component at the least object is tried in order and
/// transported along connecting morphisms.
pub fn natural_iso(f: &Functor, g: &Functor) -> Option<NatTrans> {
    let (d, c) = (&*f.dom, &*f.cod);
    if !same(&f.dom, &g.dom) || !same(&f.cod, &g.cod) {
        return None;
    }
    let mut comp = vec![usize::MAX; d.n_objects()];
    for x in 0..d.n_objects() {
        if comp[x] != usize::MAX {
            continue;
        }
        let mut reach = vec![(x, d.ident(x))];
        let mut seen = vec![false; d.n_objects()];
        seen[x] = true;
        let mut i = 0;
        while i < reach.len() {
            let (y, path) = reach[i];
            for &h in d.out(y) {
                if !seen[d.tgt(h)] {
                    seen[d.tgt(h)] = true;
                    reach.push((d.tgt(h), d.comp(path, h)));
                }
            }
            i += 1;
        }
        let found = c.hom(f.obj[x], g.obj[x]).find(|&k| {
            for &(y, path) in &reach {
                comp[y] = c.path(&[c.inv(f.mor[path]), k, g.mor[path]]);
            }
            reach.iter().all(|&(y, _)| {
                d.out(y)
                    .iter()
                    .all(|&h| c.comp(f.mor[h], comp[d.tgt(h)]) == c.comp(comp[y], g.mor[h]))
            })
        });
        found?;
    }
    Some(NatTrans::new(f.clone(), g.clone(), comp))
}

/// First obstruction to `f` being an equivalence: a pair of morphisms
/// identified (not faithful), a missed morphism (not full), or an object
/// outside the essential image.
pub fn equivalence_failure(f: &Functor) -> Option<Violation> {
    let (d, c) = (&*f.dom, &*f.cod);
    for x in 0..d.n_objects() {
        for y in 0..d.n_objects() {
            let hom: Vec<usize> = d.hom(x, y).collect();
            let mut images: Vec<usize> = hom.iter().map(|&g| f.mor[g]).collect();
            images.sort_unstable();
            if let Some(w) = images.windows(2).find(|w| w[0] == w[1]) {
                let pair: Vec<usize> = hom
                    .iter()
                    .copied()
                    .filter(|&g| f.mor[g] == w[0])
                    .take(2)
                    .collect();
                return Some(Violation::new("not faithful", vec![x, y, pair[0], pair[1]]));
            }
            if let Some(h) = c
                .hom(f.obj[x], f.obj[y])
                .find(|h| images.binary_search(h).is_err())
            {
                return Some(Violation::new("not full", vec![x, y, h]));
            }
        }
    }
    let mut uf = UnionFind::<usize>::new(c.n_objects());
    for h in 0..c.n_morphisms() {
        uf.union(c.src(h), c.tgt(h));
    }
    let mut hit = vec![false; c.n_objects()];
    for &y in &f.obj {
        hit[uf.find(y)] = true;
    }
    (0..c.n_objects())
        .find(|&y| !hit[uf.find(y)])
        .map(|y| Violation::new("not essentially surjective", vec![y]))
}

pub fn is_equivalence(f: &Functor) -> bool {
    equivalence_failure(f).is_none()
}

/// A quasi-inverse `K` of an equivalence `F` with counit `ε_y: F(K y) → y`.
#[derive(Clone, Debug)]
pub struct QuasiInverse {
    pub functor: Functor,
    pub counit: Vec<usize>,
}

impl QuasiInverse {
    /// `K(y)` is the least object mapping exactly to `y`, else the least
    /// object mapping into the component of `y`; `ε_y` is then the identity
    /// or the least connecting morphism.
    pub fn new(f: &Functor) -> Result<Self> {
        if let Some(v) = equivalence_failure(f) {
            return invalid("equivalence", v.to_string());
        }
        let (d, c) = (&f.dom, &f.cod);
        let mut k_obj = vec![usize::MAX; c.n_objects()];
        let mut counit = vec![usize::MAX; c.n_objects()];
        for x in (0..d.n_objects()).rev() {
            k_obj[f.obj[x]] = x;
            counit[f.obj[x]] = c.ident(f.obj[x]);
        }
        for y in 0..c.n_objects() {
            if k_obj[y] != usize::MAX {
                continue;
            }
            let x = (0..d.n_objects())
                .find(|&x| c.first_hom(f.obj[x], y).is_some())
                .expect("essentially surjective");
            k_obj[y] = x;
            counit[y] = c.first_hom(f.obj[x], y).unwrap();
        }
        let k_mor = (0..c.n_morphisms())
            .map(|h| {
                let (y0, y1) = (c.src(h), c.tgt(h));
                let g = c.path(&[counit[y0], h, c.inv(counit[y1])]);
                f.lift(k_obj[y0], k_obj[y1], g).expect("fully faithful")
            })
            .collect();
        Ok(QuasiInverse {
            functor: Functor::new(c.clone(), d.clone(), k_obj, k_mor),
            counit,
        })
    }

    /// Counit as a natural transformation `F∘K ⇒ id`.
    pub fn counit_nat(&self, f: &Functor) -> NatTrans {
        NatTrans::new(
            self.functor.then(f),
            Functor::identity(&f.cod),
            self.counit.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::super::GroupTable;
    use super::*;

    fn arc(g: FiniteGroupoid) -> Arc<FiniteGroupoid> {
        Arc::new(g)
    }

    #[test]
    fn identity_is_equivalence() {
        let g = arc(FiniteGroupoid::delooping(&GroupTable::cyclic(3)));
        assert!(is_equivalence(&Functor::identity(&g)));
    }

    #[test]
    fn pair_groupoid_to_point() {
        let e = arc(FiniteGroupoid::pair_groupoid(2));
        let pt = arc(FiniteGroupoid::point());
        let f = Functor::constant(e, pt, 0);
        assert!(f.check().is_none());
        assert!(is_equivalence(&f));
    }

    #[test]
    fn collapse_is_not_faithful() {
        let g = arc(FiniteGroupoid::delooping(&GroupTable::cyclic(2)));
        let f = Functor::constant(g, arc(FiniteGroupoid::point()), 0);
        assert_eq!(equivalence_failure(&f).unwrap().check, "not faithful");
    }

    #[test]
    fn quasi_inverse_counit_is_natural() {
        let e = arc(FiniteGroupoid::pair_groupoid(3));
        let pt = arc(FiniteGroupoid::point());
        let j = Functor::constant(pt, e.clone(), 1);
        let q = QuasiInverse::new(&j).unwrap();
        assert!(q.functor.check().is_none());
        assert!(q.counit_nat(&j).check().is_none());
    }
}

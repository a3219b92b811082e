//! Finite principal bisets: the bicategory of groupoids, bisets and
//! equivariant maps.
//!
//! A biset `P: H → G` carries `τ: P → G₀`, `σ: P → H₀`, a left
//! `G`-action defined when `s(g) = τ(p)` and a right `H`-action defined
//! when `σ(p) = t(h)`. Left actions compose as `(g₁;g₂)·p = g₂·(g₁·p)`,
//! right ones as `(p·h)·h' = p·(h';h)`.

mod compose;
mod pullback;
mod search;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::groupoid::{same, FiniteGroupoid, Functor};
use crate::report::{Report, Violation};

pub use compose::compose_bibundles;
pub use pullback::{pullback, Pullback};
pub use search::{find_isomorphism, find_section, isomorphic, Section};

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalBiset {
    pub src: Arc<FiniteGroupoid>,
    pub tgt: Arc<FiniteGroupoid>,
    pub tau: Vec<usize>,
    pub sigma: Vec<usize>,
    left: Vec<usize>,
    right: Vec<usize>,
}

/// Wire format for bisets; groupoids are referenced by path.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BisetData {
    #[serde(default)]
    pub schema: Option<u32>,
    #[serde(default)]
    pub source: Option<String>,
    #[serde(default)]
    pub target: Option<String>,
    pub total: usize,
    pub tau: Vec<usize>,
    pub sigma: Vec<usize>,
    pub left: Vec<[usize; 3]>,
    pub right: Vec<[usize; 3]>,
}

impl PrincipalBiset {
    /// Tabulates both actions on their domains of definition.
    pub fn new(
        src: Arc<FiniteGroupoid>,
        tgt: Arc<FiniteGroupoid>,
        tau: Vec<usize>,
        sigma: Vec<usize>,
        left: impl Fn(usize, usize) -> usize,
        right: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let n = tau.len();
        let (mg, mh) = (tgt.n_morphisms(), src.n_morphisms());
        let mut l = vec![NONE; mg * n];
        for g in 0..mg {
            for p in 0..n {
                if tgt.src(g) == tau[p] {
                    l[g * n + p] = left(g, p);
                }
            }
        }
        let mut r = vec![NONE; n * mh];
        for p in 0..n {
            for h in 0..mh {
                if src.tgt(h) == sigma[p] {
                    r[p * mh + h] = right(p, h);
                }
            }
        }
        PrincipalBiset {
            src,
            tgt,
            tau,
            sigma,
            left: l,
            right: r,
        }
    }

    pub fn from_data(
        d: &BisetData,
        src: Arc<FiniteGroupoid>,
        tgt: Arc<FiniteGroupoid>,
    ) -> Result<Self> {
        let bad = |field: &str, detail: String| Error::Malformed {
            field: field.into(),
            detail,
        };
        if d.tau.len() != d.total || d.sigma.len() != d.total {
            return Err(bad("tau/sigma", "length differs from total".into()));
        }
        let n = d.total;
        let (mg, mh) = (tgt.n_morphisms(), src.n_morphisms());
        let mut left = vec![NONE; mg * n];
        for &[g, p, q] in &d.left {
            if g >= mg || p >= n || q >= n {
                return Err(bad("left", format!("entry {:?} out of range", [g, p, q])));
            }
            left[g * n + p] = q;
        }
        let mut right = vec![NONE; n * mh];
        for &[p, h, q] in &d.right {
            if h >= mh || p >= n || q >= n {
                return Err(bad("right", format!("entry {:?} out of range", [p, h, q])));
            }
            right[p * mh + h] = q;
        }
        if d.tau.iter().any(|&x| x >= tgt.n_objects())
            || d.sigma.iter().any(|&x| x >= src.n_objects())
        {
            return Err(bad("tau/sigma", "anchor out of range".into()));
        }
        Ok(PrincipalBiset {
            src,
            tgt,
            tau: d.tau.clone(),
            sigma: d.sigma.clone(),
            left,
            right,
        })
    }

    pub fn to_data(&self) -> BisetData {
        let n = self.total();
        let mut left = Vec::new();
        for g in 0..self.tgt.n_morphisms() {
            for p in 0..n {
                if let Some(q) = self.act_left(g, p) {
                    left.push([g, p, q]);
                }
            }
        }
        let mut right = Vec::new();
        for p in 0..n {
            for h in 0..self.src.n_morphisms() {
                if let Some(q) = self.act_right(p, h) {
                    right.push([p, h, q]);
                }
            }
        }
        BisetData {
            schema: Some(1),
            source: None,
            target: None,
            total: n,
            tau: self.tau.clone(),
            sigma: self.sigma.clone(),
            left,
            right,
        }
    }

    pub fn total(&self) -> usize {
        self.tau.len()
    }

    pub fn act_left(&self, g: usize, p: usize) -> Option<usize> {
        let q = self.left[g * self.total() + p];
        (q != NONE).then_some(q)
    }

    pub fn act_right(&self, p: usize, h: usize) -> Option<usize> {
        let q = self.right[p * self.src.n_morphisms() + h];
        (q != NONE).then_some(q)
    }

    /// `g·p`; panics when undefined.
    pub fn l(&self, g: usize, p: usize) -> usize {
        self.act_left(g, p).expect("left action undefined")
    }

    /// `p·h`; panics when undefined.
    pub fn r(&self, p: usize, h: usize) -> usize {
        self.act_right(p, h).expect("right action undefined")
    }

    /// The unique `g` with `g·p = q`, if any.
    pub fn transporter(&self, p: usize, q: usize) -> Option<usize> {
        self.tgt
            .hom(self.tau[p], self.tau[q])
            .find(|&g| self.l(g, p) == q)
    }

    /// Biset axioms, left principality and surjectivity of `σ`.
    pub fn validate(&self) -> Report {
        let mut rep = Report::new();
        let (g, h, n) = (&*self.tgt, &*self.src, self.total());
        let mut w = None;
        'a: for f in 0..g.n_morphisms() {
            for p in 0..n {
                let def = self.act_left(f, p);
                if def.is_some() != (g.src(f) == self.tau[p]) {
                    w = Some(vec![f, p]);
                    break 'a;
                }
                if let Some(q) = def {
                    if self.tau[q] != g.tgt(f) || self.sigma[q] != self.sigma[p] {
                        w = Some(vec![f, p]);
                        break 'a;
                    }
                }
            }
        }
        rep.record("left action typing", g.n_morphisms() * n, w);
        let mut w = None;
        'b: for p in 0..n {
            for k in 0..h.n_morphisms() {
                let def = self.act_right(p, k);
                if def.is_some() != (h.tgt(k) == self.sigma[p]) {
                    w = Some(vec![p, k]);
                    break 'b;
                }
                if let Some(q) = def {
                    if self.sigma[q] != h.src(k) || self.tau[q] != self.tau[p] {
                        w = Some(vec![p, k]);
                        break 'b;
                    }
                }
            }
        }
        rep.record("right action typing", g.n_morphisms() * n, w);
        if !rep.ok() {
            return rep;
        }
        rep.record(
            "left unit",
            n,
            (0..n)
                .find(|&p| self.l(g.ident(self.tau[p]), p) != p)
                .map(|p| vec![p]),
        );
        rep.record(
            "right unit",
            n,
            (0..n)
                .find(|&p| self.r(p, h.ident(self.sigma[p])) != p)
                .map(|p| vec![p]),
        );
        let mut w = None;
        'c: for p in 0..n {
            for &g1 in g.out(self.tau[p]) {
                for &g2 in g.out(g.tgt(g1)) {
                    if self.l(g.comp(g1, g2), p) != self.l(g2, self.l(g1, p)) {
                        w = Some(vec![g1, g2, p]);
                        break 'c;
                    }
                }
            }
        }
        rep.record("left associativity", n, w);
        let mut w = None;
        'd: for p in 0..n {
            for h1 in h.hom_into(self.sigma[p]) {
                for h2 in h.hom_into(h.src(h1)) {
                    if self.r(self.r(p, h1), h2) != self.r(p, h.comp(h2, h1)) {
                        w = Some(vec![p, h1, h2]);
                        break 'd;
                    }
                }
            }
        }
        rep.record("right associativity", n, w);
        let mut w = None;
        'e: for p in 0..n {
            for &g1 in g.out(self.tau[p]) {
                for k in h.hom_into(self.sigma[p]) {
                    if self.l(g1, self.r(p, k)) != self.r(self.l(g1, p), k) {
                        w = Some(vec![g1, p, k]);
                        break 'e;
                    }
                }
            }
        }
        rep.record("actions commute", n, w);
        rep.record(
            "sigma surjective",
            h.n_objects(),
            (0..h.n_objects())
                .find(|x| !self.sigma.contains(x))
                .map(|x| vec![x]),
        );
        rep.record("left principal", n, self.left_principal_failure());
        rep
    }

    pub fn is_valid(&self) -> bool {
        self.validate().ok()
    }

    /// `(g, p) ↦ (g·p, p)` must biject `G₁ ×_{G₀} P` onto `P ×_{H₀} P`.
    fn left_principal_failure(&self) -> Option<Vec<usize>> {
        for p in 0..self.total() {
            let mut hit = vec![false; self.total()];
            for &g in self.tgt.out(self.tau[p]) {
                let q = self.l(g, p);
                if std::mem::replace(&mut hit[q], true) {
                    return Some(vec![p, q]);
                }
            }
            if let Some(q) = (0..self.total()).find(|&q| self.sigma[q] == self.sigma[p] && !hit[q])
            {
                return Some(vec![p, q]);
            }
        }
        None
    }

    /// `(p, h) ↦ (p·h, p)` must biject `P ×_{H₀} H₁` onto `P ×_{G₀} P`.
    fn right_principal_failure(&self) -> Option<Vec<usize>> {
        for p in 0..self.total() {
            let mut hit = vec![false; self.total()];
            for k in self.src.hom_into(self.sigma[p]) {
                let q = self.r(p, k);
                if std::mem::replace(&mut hit[q], true) {
                    return Some(vec![p, q]);
                }
            }
            if let Some(q) = (0..self.total()).find(|&q| self.tau[q] == self.tau[p] && !hit[q]) {
                return Some(vec![p, q]);
            }
        }
        None
    }

    /// First reason the biset fails to be a Morita equivalence.
    pub fn morita_failure(&self) -> Option<Violation> {
        if let Some(v) = self.validate().first_violation() {
            return Some(v);
        }
        if let Some(y) = (0..self.tgt.n_objects()).find(|y| !self.tau.contains(y)) {
            return Some(Violation::new("tau surjective", vec![y]));
        }
        self.right_principal_failure()
            .map(|w| Violation::new("right principal", w))
    }

    pub fn is_morita(&self) -> bool {
        self.morita_failure().is_none()
    }

    /// Same total set with anchors swapped and actions transported through
    /// inverses. No principality requirement.
    pub(crate) fn flip(&self) -> PrincipalBiset {
        let (g, h) = (self.tgt.clone(), self.src.clone());
        PrincipalBiset::new(
            g.clone(),
            h.clone(),
            self.sigma.clone(),
            self.tau.clone(),
            |k, p| self.r(p, h.inv(k)),
            |p, f| self.l(g.inv(f), p),
        )
    }

    pub fn invert(&self) -> Result<PrincipalBiset> {
        if let Some(v) = self.morita_failure() {
            return invalid("Morita biset", v.to_string());
        }
        Ok(self.flip())
    }

    pub fn same_endpoints(&self, other: &PrincipalBiset) -> bool {
        same(&self.src, &other.src) && same(&self.tgt, &other.tgt)
    }
}

/// Bundlization `⟨f⟩` of `f: H → G`: pairs `(x, g)` with `s(g) = f(x)`,
/// listed by `x` then by position of `g` in `out(f(x))`.
pub fn bundlize(f: &Functor) -> PrincipalBiset {
    let (h, g) = (f.dom.clone(), f.cod.clone());
    let mut elems = Vec::new();
    let mut offset = vec![0; h.n_objects()];
    for x in 0..h.n_objects() {
        offset[x] = elems.len();
        elems.extend(g.out(f.obj[x]).iter().map(|&k| (x, k)));
    }
    let pos =
        |x: usize, k: usize| offset[x] + g.out(f.obj[x]).iter().position(|&j| j == k).unwrap();
    PrincipalBiset::new(
        h.clone(),
        g.clone(),
        elems.iter().map(|&(_, k)| g.tgt(k)).collect(),
        elems.iter().map(|&(x, _)| x).collect(),
        |k2, p| {
            let (x, k) = elems[p];
            pos(x, g.comp(k, k2))
        },
        |p, k1| {
            let (_, k) = elems[p];
            pos(h.src(k1), g.comp(f.mor[k1], k))
        },
    )
}

/// Total = morphisms, `τ = t`, `σ = s`.
pub fn identity_bibundle(g: &Arc<FiniteGroupoid>) -> PrincipalBiset {
    PrincipalBiset::new(
        g.clone(),
        g.clone(),
        (0..g.n_morphisms()).map(|f| g.tgt(f)).collect(),
        (0..g.n_morphisms()).map(|f| g.src(f)).collect(),
        |k, f| g.comp(f, k),
        |f, k| g.comp(k, f),
    )
}

/// Equivariant map between bisets with the same endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BibundleMap {
    pub carrier: Vec<usize>,
}

impl BibundleMap {
    pub fn check(&self, dom: &PrincipalBiset, cod: &PrincipalBiset) -> Option<Violation> {
        if !dom.same_endpoints(cod) || self.carrier.len() != dom.total() {
            return Some(Violation::new("map shape", vec![]));
        }
        let phi = &self.carrier;
        for p in 0..dom.total() {
            let q = phi[p];
            if q >= cod.total() || cod.tau[q] != dom.tau[p] || cod.sigma[q] != dom.sigma[p] {
                return Some(Violation::new("map anchors", vec![p]));
            }
            for &g in dom.tgt.out(dom.tau[p]) {
                if phi[dom.l(g, p)] != cod.l(g, q) {
                    return Some(Violation::new("left equivariance", vec![g, p]));
                }
            }
            for k in dom.src.hom_into(dom.sigma[p]) {
                if phi[dom.r(p, k)] != cod.r(q, k) {
                    return Some(Violation::new("right equivariance", vec![p, k]));
                }
            }
        }
        None
    }

    pub fn is_bijective(&self, cod_total: usize) -> bool {
        let mut hit = vec![false; cod_total];
        self.carrier.len() == cod_total
            && self
                .carrier
                .iter()
                .all(|&q| !std::mem::replace(&mut hit[q], true))
    }
}

/// Transversality of a cospan of bisets holds vacuously over finite sets.
pub fn transversal(_f: &PrincipalBiset, _g: &PrincipalBiset) -> bool {
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::GroupTable;

    fn bg(n: usize) -> Arc<FiniteGroupoid> {
        Arc::new(FiniteGroupoid::delooping(&GroupTable::cyclic(n)))
    }

    fn hom(
        dom: &Arc<FiniteGroupoid>,
        cod: &Arc<FiniteGroupoid>,
        m: impl Fn(usize) -> usize,
    ) -> Functor {
        Functor::from_mor(dom.clone(), cod.clone(), m)
    }

    #[test]
    fn identity_and_bundlized_identity_agree() {
        let g = Arc::new(FiniteGroupoid::product(
            &FiniteGroupoid::pair_groupoid(2),
            &bg(3),
        ));
        let id = identity_bibundle(&g);
        assert!(id.is_valid());
        assert!(id.is_morita());
        assert!(isomorphic(&bundlize(&Functor::identity(&g)), &id));
        assert_eq!(
            identity_bibundle(&Arc::new(FiniteGroupoid::discrete(4))).total(),
            4
        );
        assert_eq!(identity_bibundle(&bg(2)).total(), 2);
    }

    #[test]
    fn doubling_bundlization() {
        let f = hom(&bg(2), &bg(4), |a| 2 * a);
        let p = bundlize(&f);
        assert!(p.is_valid());
        assert_eq!(p.total(), 4);
        // left Z/4 action is regular
        for q in 0..4 {
            let orbit: std::collections::BTreeSet<usize> = (0..4).map(|g| p.l(g, q)).collect();
            assert_eq!(orbit.len(), 4);
        }
    }

    #[test]
    fn point_into_bz2() {
        let pt = Arc::new(FiniteGroupoid::point());
        let p = bundlize(&Functor::constant(pt, bg(2), 0));
        assert_eq!(p.total(), 2);
        assert!(p.is_valid());
        assert_eq!(p.morita_failure().unwrap().check, "right principal");
    }

    #[test]
    fn cech_bundlization_is_morita() {
        let c = Arc::new(FiniteGroupoid::cech(&[0, 0, 1, 1, 1], 2).unwrap());
        let x = Arc::new(FiniteGroupoid::discrete(2));
        let f = Functor::from_mor(c.clone(), x, |k| [0, 0, 1, 1, 1][c.src(k)]);
        assert!(bundlize(&f).is_morita());
    }

    #[test]
    fn inverting() {
        let g = Arc::new(FiniteGroupoid::pair_groupoid(2));
        let id = identity_bibundle(&g);
        assert!(isomorphic(&id.invert().unwrap(), &id));
        let pt = Arc::new(FiniteGroupoid::point());
        let p = bundlize(&Functor::constant(pt, bg(2), 0));
        assert!(p.invert().is_err());
    }
}

//! Finite groupoids with dense integer ids.
//!
//! `compose(f, g)` means "f then g" and is defined exactly when
//! `tgt(f) == src(g)`.

mod functor;
mod group;
mod invariants;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::Violation;

pub(crate) use functor::same;
pub use functor::{
    equivalence_failure, is_equivalence, natural_iso, Functor, NatTrans, QuasiInverse,
};
pub use group::{GroupData, GroupTable};
pub use invariants::{homotopy_invariants, nerve, HomotopyInvariants, Nerve};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    n_obj: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    ident: Vec<usize>,
    inv: Vec<usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    pos: Vec<usize>,
    comp: Vec<Vec<usize>>,
}

/// Raw table form, also the JSON wire format.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupoidTable {
    #[serde(default)]
    pub schema: Option<u32>,
    pub objects: usize,
    pub morphisms: usize,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub compose: Vec<[usize; 3]>,
    pub ident: Vec<usize>,
    pub inv: Vec<usize>,
}

/// Lists every violated groupoid axiom with a witness tuple.
pub fn validate_groupoid(t: &GroupoidTable) -> Vec<Violation> {
    let mut v = Vec::new();
    let (n, m) = (t.objects, t.morphisms);
    if t.src.len() != m || t.tgt.len() != m || t.inv.len() != m || t.ident.len() != n {
        v.push(Violation::new(
            "table lengths",
            vec![t.src.len(), t.tgt.len(), t.inv.len(), t.ident.len()],
        ));
        return v;
    }
    for f in 0..m {
        if t.src[f] >= n || t.tgt[f] >= n || t.inv[f] >= m {
            v.push(Violation::new("index range", vec![f]));
        }
    }
    if let Some(x) = (0..n).find(|&x| t.ident[x] >= m) {
        v.push(Violation::new("index range", vec![x]));
    }
    if !v.is_empty() {
        return v;
    }
    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    for &[f, g, h] in &t.compose {
        if f >= m || g >= m || h >= m {
            v.push(Violation::new("index range", vec![f, g, h]));
            continue;
        }
        if t.tgt[f] != t.src[g] {
            v.push(Violation::new(
                "compose defined on non-composable pair",
                vec![f, g],
            ));
            continue;
        }
        if let Some(&old) = table.get(&(f, g)) {
            if old != h {
                v.push(Violation::new("compose not a function", vec![f, g, old, h]));
            }
            continue;
        }
        if t.src[h] != t.src[f] || t.tgt[h] != t.tgt[g] {
            v.push(Violation::new("compose endpoints", vec![f, g, h]));
        }
        table.insert((f, g), h);
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for f in 0..m {
        out[t.src[f]].push(f);
    }
    let mut missing = None;
    for f in 0..m {
        for &g in &out[t.tgt[f]] {
            if !table.contains_key(&(f, g)) && missing.is_none() {
                missing = Some(vec![f, g]);
            }
        }
    }
    if let Some(w) = missing {
        v.push(Violation::new("compose undefined on composable pair", w));
        return v;
    }
    let c = |f: usize, g: usize| table[&(f, g)];
    for x in 0..n {
        let e = t.ident[x];
        if t.src[e] != x || t.tgt[e] != x {
            v.push(Violation::new("identity endpoints", vec![x, e]));
        }
    }
    if !v.is_empty() {
        return v;
    }
    if let Some(f) = (0..m).find(|&f| c(t.ident[t.src[f]], f) != f || c(f, t.ident[t.tgt[f]]) != f)
    {
        v.push(Violation::new("unit law", vec![f]));
    }
    for f in 0..m {
        let g = t.inv[f];
        if t.src[g] != t.tgt[f]
            || t.tgt[g] != t.src[f]
            || c(f, g) != t.ident[t.src[f]]
            || c(g, f) != t.ident[t.tgt[f]]
        {
            v.push(Violation::new("inverse law", vec![f, g]));
            break;
        }
    }
    'assoc: for f in 0..m {
        for &g in &out[t.tgt[f]] {
            for &h in &out[t.tgt[g]] {
                if c(c(f, g), h) != c(f, c(g, h)) {
                    v.push(Violation::new("associativity", vec![f, g, h]));
                    break 'assoc;
                }
            }
        }
    }
    v
}

impl FiniteGroupoid {
    /// Builds from endpoints and a composition rule evaluated on composable
    /// pairs. Identities and inverses are located by search; unit and
    /// inverse laws are checked, associativity is left to
    /// [`FiniteGroupoid::associativity_failure`].
    pub fn build(
        n_obj: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let m = src.len();
        if tgt.len() != m || src.iter().chain(&tgt).any(|&x| x >= n_obj) {
            return crate::error::invalid("groupoid", "endpoint table out of range");
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n_obj];
        let mut inc: Vec<Vec<usize>> = vec![Vec::new(); n_obj];
        let mut pos = vec![0; m];
        for f in 0..m {
            pos[f] = out[src[f]].len();
            out[src[f]].push(f);
            inc[tgt[f]].push(f);
        }
        let mut comp = Vec::with_capacity(m);
        for f in 0..m {
            let row: Vec<usize> = out[tgt[f]].iter().map(|&g| compose(f, g)).collect();
            for (k, &h) in row.iter().enumerate() {
                let g = out[tgt[f]][k];
                if h >= m || src[h] != src[f] || tgt[h] != tgt[g] {
                    return crate::error::invalid(
                        "groupoid",
                        format!("composite of ({f}, {g}) has wrong endpoints"),
                    );
                }
            }
            comp.push(row);
        }
        let mut g = FiniteGroupoid {
            n_obj,
            src,
            tgt,
            ident: vec![0; n_obj],
            inv: vec![0; m],
            out,
            inc,
            pos,
            comp,
        };
        for x in 0..n_obj {
            let e = g.out[x]
                .iter()
                .copied()
                .find(|&e| g.tgt[e] == x && g.comp(e, e) == e)
                .ok_or_else(|| Error::Invalid {
                    what: "groupoid",
                    detail: format!("object {x} has no identity"),
                })?;
            g.ident[x] = e;
        }
        for f in 0..m {
            let (x, y) = (g.src[f], g.tgt[f]);
            if g.comp(g.ident[x], f) != f || g.comp(f, g.ident[y]) != f {
                return crate::error::invalid("groupoid", format!("unit law fails at {f}"));
            }
            let i = g.out[y]
                .iter()
                .copied()
                .find(|&h| {
                    g.tgt[h] == x && g.comp(f, h) == g.ident[x] && g.comp(h, f) == g.ident[y]
                })
                .ok_or_else(|| Error::Invalid {
                    what: "groupoid",
                    detail: format!("morphism {f} has no inverse"),
                })?;
            g.inv[f] = i;
        }
        Ok(g)
    }

    pub fn from_table(t: &GroupoidTable) -> Result<Self> {
        if let Some(v) = validate_groupoid(t).into_iter().next() {
            return Err(Error::Malformed {
                field: "groupoid".into(),
                detail: v.to_string(),
            });
        }
        let table: HashMap<(usize, usize), usize> =
            t.compose.iter().map(|&[f, g, h]| ((f, g), h)).collect();
        Self::build(t.objects, t.src.clone(), t.tgt.clone(), |f, g| {
            table[&(f, g)]
        })
    }

    pub fn to_table(&self) -> GroupoidTable {
        let mut compose = Vec::new();
        for f in 0..self.n_morphisms() {
            for &g in &self.out[self.tgt[f]] {
                compose.push([f, g, self.comp(f, g)]);
            }
        }
        GroupoidTable {
            schema: Some(1),
            objects: self.n_obj,
            morphisms: self.n_morphisms(),
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            compose,
            ident: self.ident.clone(),
            inv: self.inv.clone(),
        }
    }

    pub fn associativity_failure(&self) -> Option<Violation> {
        for f in 0..self.n_morphisms() {
            for &g in &self.out[self.tgt[f]] {
                let fg = self.comp(f, g);
                for &h in &self.out[self.tgt[g]] {
                    if self.comp(fg, h) != self.comp(f, self.comp(g, h)) {
                        return Some(Violation::new("associativity", vec![f, g, h]));
                    }
                }
            }
        }
        None
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate_groupoid(&self.to_table())
    }

    pub fn n_objects(&self) -> usize {
        self.n_obj
    }

    pub fn n_morphisms(&self) -> usize {
        self.src.len()
    }

    #[inline]
    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    #[inline]
    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    #[inline]
    pub fn ident(&self, x: usize) -> usize {
        self.ident[x]
    }

    #[inline]
    pub fn inv(&self, f: usize) -> usize {
        self.inv[f]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.ident[self.src[f]] == f
    }

    /// Composite "f then g"; panics unless `tgt(f) == src(g)`.
    #[inline]
    pub fn comp(&self, f: usize, g: usize) -> usize {
        debug_assert_eq!(self.tgt[f], self.src[g], "not composable: {f}, {g}");
        self.comp[f][self.pos[g]]
    }

    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        (self.tgt[f] == self.src[g]).then(|| self.comp(f, g))
    }

    /// Composite of a nonempty composable path.
    pub fn path(&self, fs: &[usize]) -> usize {
        fs[1..].iter().fold(fs[0], |acc, &g| self.comp(acc, g))
    }

    /// Morphisms with source `x`.
    pub fn out(&self, x: usize) -> &[usize] {
        &self.out[x]
    }

    /// Morphisms with target `y`.
    pub fn hom_into(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.inc[y].iter().copied()
    }

    pub fn hom(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[x]
            .iter()
            .copied()
            .filter(move |&f| self.tgt[f] == y)
    }

    pub fn first_hom(&self, x: usize, y: usize) -> Option<usize> {
        self.hom(x, y).next()
    }

    pub fn auts(&self, x: usize) -> Vec<usize> {
        self.hom(x, x).collect()
    }

    // Constructors.

    pub fn discrete(n: usize) -> Self {
        Self::build(n, (0..n).collect(), (0..n).collect(), |f, _| f).expect("discrete groupoid")
    }

    pub fn point() -> Self {
        Self::discrete(1)
    }

    /// One object, morphisms the group elements, `compose(a, b) = b·a`.
    pub fn delooping(g: &GroupTable) -> Self {
        let n = g.order();
        Self::build(1, vec![0; n], vec![0; n], |a, b| g.mul(b, a)).expect("delooping")
    }

    /// Action groupoid of a right action `act[x][g] = x·g`. Morphism
    /// `(x, g)` has index `x·|G| + g`, source `x·g` and target `x`;
    /// `(x, g) then (x', g') = (x', g'g)`.
    pub fn action_groupoid(
        g: &GroupTable,
        n_points: usize,
        act: &[Vec<usize>],
    ) -> std::result::Result<Self, Violation> {
        let k = g.order();
        if act.len() != n_points
            || act
                .iter()
                .any(|r| r.len() != k || r.iter().any(|&y| y >= n_points))
        {
            return Err(Violation::new("action table shape", vec![act.len()]));
        }
        for x in 0..n_points {
            if act[x][g.unit()] != x {
                return Err(Violation::new("action unit", vec![x]));
            }
            for a in 0..k {
                for b in 0..k {
                    if act[act[x][a]][b] != act[x][g.mul(a, b)] {
                        return Err(Violation::new("action compatibility", vec![x, a, b]));
                    }
                }
            }
        }
        let src = (0..n_points * k).map(|f| act[f / k][f % k]).collect();
        let tgt = (0..n_points * k).map(|f| f / k).collect();
        Ok(Self::build(n_points, src, tgt, |f, h| {
            let (x2, g2) = (h / k, h % k);
            x2 * k + g.mul(g2, f % k)
        })
        .expect("action groupoid"))
    }

    /// Čech groupoid of `p: Y → X`. Morphisms are pairs `(y0, y1)` in the
    /// same fiber, listed lexicographically, from `y0` to `y1`.
    pub fn cech(p: &[usize], n_base: usize) -> Result<Self> {
        if let Some(x) = (0..n_base).find(|x| !p.contains(x)) {
            return crate::error::invalid("cover", format!("base point {x} not in the image"));
        }
        Ok(Self::cech_unchecked(p))
    }

    pub(crate) fn cech_unchecked(p: &[usize]) -> Self {
        let pairs = cech_pairs(p);
        let index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        Self::build(
            p.len(),
            pairs.iter().map(|q| q.0).collect(),
            pairs.iter().map(|q| q.1).collect(),
            |f, g| index[&(pairs[f].0, pairs[g].1)],
        )
        .expect("cech groupoid")
    }

    pub fn pair_groupoid(n: usize) -> Self {
        Self::cech_unchecked(&vec![0; n])
    }

    /// Disjoint union; objects and morphisms of `b` are shifted past `a`.
    pub fn disjoint_union(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Self {
        let (na, ma) = (a.n_obj, a.n_morphisms());
        let m = ma + b.n_morphisms();
        let src = (0..m)
            .map(|f| if f < ma { a.src(f) } else { na + b.src(f - ma) })
            .collect();
        let tgt = (0..m)
            .map(|f| if f < ma { a.tgt(f) } else { na + b.tgt(f - ma) })
            .collect();
        Self::build(na + b.n_obj, src, tgt, |f, g| {
            if f < ma {
                a.comp(f, g)
            } else {
                ma + b.comp(f - ma, g - ma)
            }
        })
        .expect("disjoint union")
    }

    /// Renames objects by `obj[x]` and morphisms by `mor[f]` (both bijections).
    pub fn relabel(&self, obj: &[usize], mor: &[usize]) -> Self {
        let m = self.n_morphisms();
        let mut back = vec![0; m];
        for f in 0..m {
            back[mor[f]] = f;
        }
        let src = (0..m).map(|f| obj[self.src(back[f])]).collect();
        let tgt = (0..m).map(|f| obj[self.tgt(back[f])]).collect();
        Self::build(self.n_obj, src, tgt, |f, g| {
            mor[self.comp(back[f], back[g])]
        })
        .expect("relabel")
    }

    /// Product groupoid: object `(x, y)` ↦ `x·|B₀| + y`,
    /// morphism `(f, g)` ↦ `f·|B₁| + g`.
    pub fn product(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Self {
        let (nb, mb) = (b.n_obj, b.n_morphisms());
        let m = a.n_morphisms() * mb;
        let src = (0..m).map(|f| a.src(f / mb) * nb + b.src(f % mb)).collect();
        let tgt = (0..m).map(|f| a.tgt(f / mb) * nb + b.tgt(f % mb)).collect();
        Self::build(a.n_obj * nb, src, tgt, |f, g| {
            a.comp(f / mb, g / mb) * mb + b.comp(f % mb, g % mb)
        })
        .expect("product groupoid")
    }
}

/// Fiber product `Y ×_X Y` as lexicographic pairs.
pub(crate) fn cech_pairs(p: &[usize]) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for a in 0..p.len() {
        for b in 0..p.len() {
            if p[a] == p[b] {
                v.push((a, b));
            }
        }
    }
    v
}

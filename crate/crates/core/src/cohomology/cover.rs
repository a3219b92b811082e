use serde::{Deserialize, Serialize};

use super::bar::{tuple_index, tuple_of};
use crate::error::{Error, Result};
use crate::groupoid::GroupTable;
use crate::report::Violation;

/// A levelwise finite simplicial set truncated at `top`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialSet {
    pub sizes: Vec<usize>,
    /// `faces[q][i][x]` for `q ≥ 1`, `i ≤ q`.
    pub faces: Vec<Vec<Vec<usize>>>,
    /// `degens[q][i][x]` for `q < top`, `i ≤ q`.
    pub degens: Vec<Vec<Vec<usize>>>,
}

impl SimplicialSet {
    /// `k` points in every degree, all structure maps the identity.
    pub fn constant(k: usize, top: usize) -> Self {
        let id: Vec<usize> = (0..k).collect();
        SimplicialSet {
            sizes: vec![k; top + 1],
            faces: (0..=top)
                .map(|q| {
                    if q == 0 {
                        vec![]
                    } else {
                        vec![id.clone(); q + 1]
                    }
                })
                .collect(),
            degens: (0..=top)
                .map(|q| {
                    if q == top {
                        vec![]
                    } else {
                        vec![id.clone(); q + 1]
                    }
                })
                .collect(),
        }
    }

    /// The standard 1-simplex: a `q`-simplex is a monotone word in `{0,1}`
    /// of length `q+1`, indexed by its number of zeros.
    pub fn interval(top: usize) -> Self {
        SimplicialSet {
            sizes: (0..=top).map(|q| q + 2).collect(),
            faces: (0..=top)
                .map(|q| {
                    if q == 0 {
                        return vec![];
                    }
                    (0..=q)
                        .map(|i| (0..q + 2).map(|z| if i < z { z - 1 } else { z }).collect())
                        .collect()
                })
                .collect(),
            degens: (0..=top)
                .map(|q| {
                    if q == top {
                        return vec![];
                    }
                    (0..=q)
                        .map(|i| (0..q + 2).map(|z| if i < z { z + 1 } else { z }).collect())
                        .collect()
                })
                .collect(),
        }
    }

    /// Nerve of the codiscrete groupoid on `k` points: `k^{q+1}` simplices.
    pub fn codiscrete(k: usize, top: usize) -> Self {
        let word = |q: usize, x: usize| tuple_of(k, q + 1, x);
        SimplicialSet {
            sizes: (0..=top).map(|q| k.pow(q as u32 + 1)).collect(),
            faces: (0..=top)
                .map(|q| {
                    if q == 0 {
                        return vec![];
                    }
                    (0..=q)
                        .map(|i| {
                            (0..k.pow(q as u32 + 1))
                                .map(|x| {
                                    let mut w = word(q, x);
                                    w.remove(i);
                                    tuple_index(k, &w)
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect(),
            degens: (0..=top)
                .map(|q| {
                    if q == top {
                        return vec![];
                    }
                    (0..=q)
                        .map(|i| {
                            (0..k.pow(q as u32 + 1))
                                .map(|x| {
                                    let mut w = word(q, x);
                                    w.insert(i, w[i]);
                                    tuple_index(k, &w)
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn top(&self) -> usize {
        self.sizes.len() - 1
    }
}

/// `BG` truncated at `top`: `q`-simplices are tuples in `G^q`.
pub fn bg_face(g: &GroupTable, q: usize, i: usize, t: &[usize]) -> Vec<usize> {
    debug_assert_eq!(t.len(), q);
    if i == 0 {
        t[1..].to_vec()
    } else if i == q {
        t[..q - 1].to_vec()
    } else {
        let mut s = t[..i - 1].to_vec();
        s.push(g.mul(t[i - 1], t[i]));
        s.extend_from_slice(&t[i + 1..]);
        s
    }
}

pub fn bg_degen(g: &GroupTable, i: usize, t: &[usize]) -> Vec<usize> {
    let mut s = t.to_vec();
    s.insert(i, g.unit());
    s
}

/// Level `q` of a cover: points of `U_q` with their image in `G^q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverLevel {
    pub proj: Vec<usize>,
    pub faces: Vec<Vec<usize>>,
    pub degens: Vec<Vec<usize>>,
}

/// A levelwise surjective simplicial map `U → BG`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCover {
    pub group: GroupTable,
    pub levels: Vec<CoverLevel>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverData {
    #[serde(default)]
    pub schema: Option<u32>,
    pub levels: Vec<CoverLevel>,
}

impl SimplicialCover {
    /// `U = BG × X`, point `(t, x)` of level `q` at index `t·|X_q| + x`.
    pub fn product(g: &GroupTable, x: &SimplicialSet) -> Self {
        let ng = g.order();
        let levels = (0..=x.top())
            .map(|q| {
                let nx = x.sizes[q];
                let n = ng.pow(q as u32) * nx;
                let proj = (0..n).map(|u| u / nx).collect();
                let faces = if q == 0 {
                    vec![]
                } else {
                    (0..=q)
                        .map(|i| {
                            (0..n)
                                .map(|u| {
                                    let t = bg_face(g, q, i, &tuple_of(ng, q, u / nx));
                                    tuple_index(ng, &t) * x.sizes[q - 1] + x.faces[q][i][u % nx]
                                })
                                .collect()
                        })
                        .collect()
                };
                let degens = if q == x.top() {
                    vec![]
                } else {
                    (0..=q)
                        .map(|i| {
                            (0..n)
                                .map(|u| {
                                    let t = bg_degen(g, i, &tuple_of(ng, q, u / nx));
                                    tuple_index(ng, &t) * x.sizes[q + 1] + x.degens[q][i][u % nx]
                                })
                                .collect()
                        })
                        .collect()
                };
                CoverLevel {
                    proj,
                    faces,
                    degens,
                }
            })
            .collect();
        SimplicialCover {
            group: g.clone(),
            levels,
        }
    }

    /// `U_q = G^q`.
    pub fn identity(g: &GroupTable, top: usize) -> Self {
        Self::product(g, &SimplicialSet::constant(1, top))
    }

    /// `k` disjoint copies of each `G^q`.
    pub fn uniform(g: &GroupTable, k: usize, top: usize) -> Self {
        Self::product(g, &SimplicialSet::constant(k, top))
    }

    /// `BG × Δ¹`: `q+2` sheets over each point of `G^q`.
    pub fn mixed(g: &GroupTable, top: usize) -> Self {
        Self::product(g, &SimplicialSet::interval(top))
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn size(&self, q: usize) -> usize {
        self.levels[q].proj.len()
    }

    pub fn from_data(g: &GroupTable, d: &CoverData) -> Result<Self> {
        let c = SimplicialCover {
            group: g.clone(),
            levels: d.levels.clone(),
        };
        match c.validate() {
            None => Ok(c),
            Some(v) => Err(Error::Malformed {
                field: "levels".into(),
                detail: v.to_string(),
            }),
        }
    }

    pub fn to_data(&self) -> CoverData {
        CoverData {
            schema: Some(1),
            levels: self.levels.clone(),
        }
    }

    /// Shapes, surjectivity, compatibility with `BG` and the simplicial identities.
    pub fn validate(&self) -> Option<Violation> {
        let g = &self.group;
        let ng = g.order();
        let top = self.top();
        for (q, l) in self.levels.iter().enumerate() {
            let n = l.proj.len();
            let gq = ng.pow(q as u32);
            if l.proj.iter().any(|&t| t >= gq) {
                return Some(Violation::new("projection out of range", vec![q]));
            }
            let mut hit = vec![false; gq];
            l.proj.iter().for_each(|&t| hit[t] = true);
            if let Some(t) = hit.iter().position(|h| !h) {
                return Some(Violation::new("projection not surjective", vec![q, t]));
            }
            let want_faces = if q == 0 { 0 } else { q + 1 };
            let want_degens = if q == top { 0 } else { q + 1 };
            if l.faces.len() != want_faces || l.degens.len() != want_degens {
                return Some(Violation::new("wrong number of structure maps", vec![q]));
            }
            for (i, f) in l.faces.iter().enumerate() {
                if f.len() != n || f.iter().any(|&v| v >= self.size(q - 1)) {
                    return Some(Violation::new("face shape", vec![q, i]));
                }
                for u in 0..n {
                    let t = bg_face(g, q, i, &tuple_of(ng, q, l.proj[u]));
                    if self.levels[q - 1].proj[f[u]] != tuple_index(ng, &t) {
                        return Some(Violation::new("face does not lie over BG", vec![q, i, u]));
                    }
                }
            }
            for (i, s) in l.degens.iter().enumerate() {
                if s.len() != n || s.iter().any(|&v| v >= self.size(q + 1)) {
                    return Some(Violation::new("degeneracy shape", vec![q, i]));
                }
                for u in 0..n {
                    let t = bg_degen(g, i, &tuple_of(ng, q, l.proj[u]));
                    if self.levels[q + 1].proj[s[u]] != tuple_index(ng, &t) {
                        return Some(Violation::new(
                            "degeneracy does not lie over BG",
                            vec![q, i, u],
                        ));
                    }
                }
            }
        }
        let d = |q: usize, i: usize, u: usize| self.levels[q].faces[i][u];
        let s = |q: usize, i: usize, u: usize| self.levels[q].degens[i][u];
        for q in 2..=top {
            for j in 0..=q {
                for i in 0..j {
                    for u in 0..self.size(q) {
                        if d(q - 1, i, d(q, j, u)) != d(q - 1, j - 1, d(q, i, u)) {
                            return Some(Violation::new("d_i d_j = d_{j-1} d_i", vec![q, i, j, u]));
                        }
                    }
                }
            }
        }
        for q in 0..top {
            for j in 0..=q {
                for i in 0..=q + 1 {
                    for u in 0..self.size(q) {
                        let lhs = d(q + 1, i, s(q, j, u));
                        let rhs = if i == j || i == j + 1 {
                            u
                        } else if i < j {
                            s(q - 1, j - 1, d(q, i, u))
                        } else {
                            s(q - 1, j, d(q, i - 1, u))
                        };
                        if lhs != rhs {
                            return Some(Violation::new("d_i s_j identity", vec![q, i, j, u]));
                        }
                    }
                }
            }
        }
        for q in 0..top.saturating_sub(1) {
            for j in 0..=q {
                for i in 0..=j {
                    for u in 0..self.size(q) {
                        if s(q + 1, i, s(q, j, u)) != s(q + 1, j + 1, s(q, i, u)) {
                            return Some(Violation::new("s_i s_j = s_{j+1} s_i", vec![q, i, j, u]));
                        }
                    }
                }
            }
        }
        None
    }
}

/// Levelwise map `U' → U` of covers over `BG`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverMap {
    pub levels: Vec<Vec<usize>>,
}

impl CoverMap {
    /// Induced by a simplicial map of fibers between product covers.
    pub fn of_products(
        g: &GroupTable,
        src: &SimplicialSet,
        tgt: &SimplicialSet,
        f: &[Vec<usize>],
    ) -> Self {
        let ng = g.order();
        CoverMap {
            levels: (0..=src.top().min(tgt.top()))
                .map(|q| {
                    (0..ng.pow(q as u32) * src.sizes[q])
                        .map(|u| (u / src.sizes[q]) * tgt.sizes[q] + f[q][u % src.sizes[q]])
                        .collect()
                })
                .collect(),
        }
    }

    /// Projection of a product cover onto the identity cover.
    pub fn to_base(g: &GroupTable, src: &SimplicialSet) -> Self {
        let pt = SimplicialSet::constant(1, src.top());
        Self::of_products(
            g,
            src,
            &pt,
            &src.sizes.iter().map(|&n| vec![0; n]).collect::<Vec<_>>(),
        )
    }

    /// Commutes with projections, faces and degeneracies.
    pub fn check(&self, src: &SimplicialCover, tgt: &SimplicialCover) -> Option<Violation> {
        let top = src.top().min(tgt.top());
        if self.levels.len() <= top {
            return Some(Violation::new("missing levels", vec![self.levels.len()]));
        }
        for q in 0..=top {
            let f = &self.levels[q];
            if f.len() != src.size(q) {
                return Some(Violation::new("level size", vec![q]));
            }
            for u in 0..src.size(q) {
                if tgt.levels[q].proj[f[u]] != src.levels[q].proj[u] {
                    return Some(Violation::new("not over BG", vec![q, u]));
                }
                if q > 0 {
                    for i in 0..=q {
                        if self.levels[q - 1][src.levels[q].faces[i][u]]
                            != tgt.levels[q].faces[i][f[u]]
                        {
                            return Some(Violation::new(
                                "does not commute with faces",
                                vec![q, i, u],
                            ));
                        }
                    }
                }
                if q < top {
                    for i in 0..=q {
                        if self.levels[q + 1][src.levels[q].degens[i][u]]
                            != tgt.levels[q].degens[i][f[u]]
                        {
                            return Some(Violation::new(
                                "does not commute with degeneracies",
                                vec![q, i, u],
                            ));
                        }
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_covers_are_simplicial() {
        for g in [
            GroupTable::cyclic(2),
            GroupTable::cyclic(3),
            GroupTable::symmetric(3),
        ] {
            for c in [
                SimplicialCover::identity(&g, 3),
                SimplicialCover::uniform(&g, 2, 3),
                SimplicialCover::mixed(&g, 3),
                SimplicialCover::product(&g, &SimplicialSet::codiscrete(2, 3)),
            ] {
                assert_eq!(c.validate(), None);
            }
        }
    }

    #[test]
    fn broken_face_is_reported() {
        let g = GroupTable::cyclic(2);
        let mut c = SimplicialCover::uniform(&g, 2, 2);
        c.levels[1].faces[0][0] = 1;
        assert!(c.validate().is_some());
    }

    #[test]
    fn refinements_commute() {
        let g = GroupTable::cyclic(3);
        let mixed = SimplicialSet::interval(3);
        let two = SimplicialSet::constant(2, 3);
        for sheet in 0..2 {
            let f: Vec<Vec<usize>> = mixed.sizes.iter().map(|&n| vec![sheet; n]).collect();
            let m = CoverMap::of_products(&g, &mixed, &two, &f);
            assert_eq!(
                m.check(
                    &SimplicialCover::mixed(&g, 3),
                    &SimplicialCover::uniform(&g, 2, 3)
                ),
                None
            );
        }
        let m = CoverMap::to_base(&g, &mixed);
        assert_eq!(
            m.check(
                &SimplicialCover::mixed(&g, 3),
                &SimplicialCover::identity(&g, 3)
            ),
            None
        );
    }
}

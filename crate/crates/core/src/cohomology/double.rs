use std::collections::HashMap;

use super::abelian::{FiniteAbelianGroup, GAction};
use super::bar::{tuple_of, Cochain};
use super::complex::{Cohomology, Differential, LinearComplex, Term};
use super::cover::{CoverMap, SimplicialCover};
use crate::error::{Error, Result};
use crate::report::Violation;

/// Cells of `C^{p,q}`: tuples `(u₀,…,u_p)` in one fiber of `U_q → G^q`.
#[derive(Clone, Debug)]
pub struct Block {
    pub p: usize,
    pub q: usize,
    pub cells: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
}

impl Block {
    fn new(cover: &SimplicialCover, p: usize, q: usize) -> Self {
        let level = &cover.levels[q];
        let mut fibers: Vec<Vec<u32>> = vec![Vec::new(); cover.group.order().pow(q as u32)];
        for (u, &t) in level.proj.iter().enumerate() {
            fibers[t].push(u as u32);
        }
        let mut cells = Vec::new();
        for f in &fibers {
            let k = f.len();
            for i in 0..k.pow(p as u32 + 1) {
                cells.push(
                    tuple_of(k, p + 1, i)
                        .into_iter()
                        .map(|j| f[j])
                        .collect::<Vec<u32>>(),
                );
            }
        }
        let index = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i as u32))
            .collect();
        Block { p, q, cells, index }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index(&self, cell: &[u32]) -> usize {
        self.index[cell] as usize
    }
}

/// Component of a total cochain in `C^{p,q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalCochain {
    pub degree: usize,
    /// Indexed by `p`; `q = degree − p`. Blocks outside the truncation are empty.
    pub parts: Vec<Vec<usize>>,
}

impl TotalCochain {
    pub fn component(&self, p: usize) -> &[usize] {
        &self.parts[p]
    }

    /// `λ_j` lives in `C^{n−j, j}`.
    pub fn lambda(&self, j: usize) -> &[usize] {
        &self.parts[self.degree - j]
    }
}

/// `C^{p,q}` for `p ≤ p_max`, `q_min ≤ q ≤ q_max`, with total differential
/// `D = δ_v + (−1)^{p+q} δ_h`.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    pub cover: SimplicialCover,
    pub a: FiniteAbelianGroup,
    pub rho: GAction,
    pub p_max: usize,
    pub q_min: usize,
    pub q_max: usize,
    blocks: HashMap<(usize, usize), Block>,
    /// Per total degree: `(p, offset)` of each present block.
    layout: Vec<Vec<(usize, usize)>>,
    pub total: LinearComplex,
}

fn sign(k: usize) -> i8 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl DoubleComplex {
    /// Rows `q ≥ 1`: the complex in which degree-3 cocycles are triples
    /// `(λ₁, λ₂, λ₃)`.
    pub fn new(
        cover: &SimplicialCover,
        a: &FiniteAbelianGroup,
        rho: &GAction,
        p_max: usize,
        q_max: usize,
    ) -> Result<Self> {
        Self::with_rows(cover, a, rho, p_max, 1, q_max)
    }

    /// All rows from `q = 0`.
    pub fn full(
        cover: &SimplicialCover,
        a: &FiniteAbelianGroup,
        rho: &GAction,
        p_max: usize,
        q_max: usize,
    ) -> Result<Self> {
        Self::with_rows(cover, a, rho, p_max, 0, q_max)
    }

    pub fn with_rows(
        cover: &SimplicialCover,
        a: &FiniteAbelianGroup,
        rho: &GAction,
        p_max: usize,
        q_min: usize,
        q_max: usize,
    ) -> Result<Self> {
        if q_max > cover.top() {
            return Err(Error::Invalid {
                what: "double complex",
                detail: format!("cover defined through {}", cover.top()),
            });
        }
        if let Some(v) = cover.validate() {
            return Err(Error::Invalid {
                what: "cover",
                detail: v.to_string(),
            });
        }
        let mut blocks = HashMap::new();
        for q in q_min..=q_max {
            for p in 0..=p_max {
                blocks.insert((p, q), Block::new(cover, p, q));
            }
        }
        let top = p_max + q_max;
        let mut layout = Vec::new();
        let mut dims = Vec::new();
        for n in 0..=top {
            let mut off = 0;
            let mut l = Vec::new();
            for p in 0..=n.min(p_max) {
                if let Some(b) = blocks.get(&(p, n - p)) {
                    l.push((p, off));
                    off += b.len();
                }
            }
            layout.push(l);
            dims.push(off);
        }
        let g = &cover.group;
        let ng = g.order();
        let mut diffs = Vec::new();
        for n in 0..top {
            let mut rows = Vec::with_capacity(dims[n + 1]);
            for &(p, _) in &layout[n + 1] {
                let q = n + 1 - p;
                let blk = &blocks[&(p, q)];
                let src_off = |pp: usize| layout[n].iter().find(|e| e.0 == pp).map(|e| e.1);
                for w in &blk.cells {
                    let mut terms = Vec::new();
                    // vertical from (p, q−1)
                    if q > q_min {
                        if let (Some(off), Some(src)) = (src_off(p), blocks.get(&(p, q - 1))) {
                            let g1 = tuple_of(ng, q, cover.levels[q].proj[w[0] as usize]);
                            for i in 0..=q {
                                let face: Vec<u32> = w
                                    .iter()
                                    .map(|&u| cover.levels[q].faces[i][u as usize] as u32)
                                    .collect();
                                let act = if i == 0 { g1[0] } else { g.unit() };
                                terms.push(Term {
                                    col: (off + src.index(&face)) as u32,
                                    sign: sign(i),
                                    g: act as u32,
                                });
                            }
                        }
                    }
                    // horizontal from (p−1, q)
                    if p > 0 {
                        if let (Some(off), Some(src)) = (src_off(p - 1), blocks.get(&(p - 1, q))) {
                            let s = sign(p - 1 + q);
                            for j in 0..=p {
                                let mut face = w.clone();
                                face.remove(j);
                                terms.push(Term {
                                    col: (off + src.index(&face)) as u32,
                                    sign: s * sign(j),
                                    g: g.unit() as u32,
                                });
                            }
                        }
                    }
                    rows.push(terms);
                }
            }
            diffs.push(Differential {
                cols: dims[n],
                rows,
            });
        }
        let total = LinearComplex {
            a: a.clone(),
            action: rho.clone(),
            dims,
            diffs,
        };
        Ok(DoubleComplex {
            cover: cover.clone(),
            a: a.clone(),
            rho: rho.clone(),
            p_max,
            q_min,
            q_max,
            blocks,
            layout,
            total,
        })
    }

    pub fn block(&self, p: usize, q: usize) -> Option<&Block> {
        self.blocks.get(&(p, q))
    }

    pub fn split(&self, n: usize, x: &[usize]) -> TotalCochain {
        let mut parts = vec![Vec::new(); n + 1];
        for &(p, off) in &self.layout[n] {
            let len = self.blocks[&(p, n - p)].len();
            parts[p] = x[off..off + len].to_vec();
        }
        TotalCochain { degree: n, parts }
    }

    pub fn join(&self, t: &TotalCochain) -> Vec<usize> {
        let mut x = self.total.zero(t.degree);
        for &(p, off) in &self.layout[t.degree] {
            let part = &t.parts[p];
            x[off..off + part.len()].copy_from_slice(part);
        }
        x
    }

    pub fn zero(&self, n: usize) -> TotalCochain {
        self.split(n, &self.total.zero(n))
    }

    /// Total cocycle condition, with the first failing `(p, q, cell)`.
    pub fn cocycle_failure(&self, t: &TotalCochain) -> Option<Violation> {
        let n = t.degree;
        let cell = self.total.cocycle_failure(n, &self.join(t))?;
        let (p, off) = *self.layout[n + 1]
            .iter()
            .rev()
            .find(|e| e.1 <= cell)
            .unwrap();
        Some(Violation::new(
            "total cocycle relation",
            vec![p, n + 1 - p, cell - off],
        ))
    }

    pub fn cohomology(&self, n: usize) -> Result<TotalCohomology> {
        if n + 1 > self.p_max + self.q_max {
            return Err(Error::Bound(format!("degree {n} exceeds truncation")));
        }
        Ok(TotalCohomology {
            h: self.total.cohomology(n)?,
        })
    }

    /// Some `θ` with `Dθ = x − y`.
    pub fn cohomologous(&self, x: &TotalCochain, y: &TotalCochain) -> Option<TotalCochain> {
        let n = x.degree;
        let d = self.total.sub(&self.join(x), &self.join(y));
        self.total
            .coboundary_preimage(n, &d)
            .map(|t| self.split(n.saturating_sub(1), &t))
    }

    pub fn differential(&self, t: &TotalCochain) -> TotalCochain {
        self.split(t.degree + 1, &self.total.apply(t.degree, &self.join(t)))
    }

    /// `f ↦ f∘proj` in the column `p = 0`.
    pub fn include_bar(&self, c: &Cochain) -> TotalCochain {
        let n = c.degree;
        let mut t = self.zero(n);
        if let Some(b) = self.blocks.get(&(0, n)) {
            t.parts[0] = b
                .cells
                .iter()
                .map(|w| c.values[self.cover.levels[n].proj[w[0] as usize]])
                .collect();
        }
        t
    }

    /// `f(u₀,…,u_p) ↦ f(r u₀,…,r u_p)` along a cover map into this complex's cover.
    pub fn pull_back(
        &self,
        r: &CoverMap,
        target: &DoubleComplex,
        t: &TotalCochain,
    ) -> TotalCochain {
        let n = t.degree;
        let mut out = target.zero(n);
        for &(p, _) in &target.layout[n] {
            let q = n - p;
            let (Some(src), Some(dst)) = (self.blocks.get(&(p, q)), target.blocks.get(&(p, q)))
            else {
                continue;
            };
            out.parts[p] = dst
                .cells
                .iter()
                .map(|w| {
                    let img: Vec<u32> = w.iter().map(|&u| r.levels[q][u as usize] as u32).collect();
                    t.parts[p][src.index(&img)]
                })
                .collect();
        }
        out
    }

    /// Class of the `λ₁` component in the Čech cohomology of `U_1 → G`.
    pub fn lambda1_class(&self, t: &TotalCochain) -> Result<Vec<u64>> {
        let n = t.degree;
        let row = DoubleComplex::with_rows(&self.cover, &self.a, &self.rho, n, 1, 1)?;
        let mut x = row.zero(n);
        x.parts[n - 1] = t.parts[n - 1].clone();
        // in a single row the total differential is ±δ_h
        let h = row.total.cohomology(n)?;
        h.class_of(&row.total, &row.join(&x))
            .ok_or_else(|| Error::Invalid {
                what: "lambda1",
                detail: "not a Čech cocycle".into(),
            })
    }
}

/// `Hⁿ` of a total complex.
#[derive(Clone, Debug)]
pub struct TotalCohomology {
    pub h: Cohomology,
}

impl TotalCohomology {
    pub fn order(&self) -> usize {
        self.h.order()
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        self.h.invariant_factors()
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.h.group
    }

    pub fn representatives(&self, dc: &DoubleComplex) -> Vec<TotalCochain> {
        self.h
            .class_representatives(&dc.total)
            .iter()
            .map(|x| dc.split(self.h.degree, x))
            .collect()
    }

    pub fn class_index(&self, dc: &DoubleComplex, t: &TotalCochain) -> Option<usize> {
        self.h.class_index(&dc.total, &dc.join(t))
    }
}

/// `total_cohomology` of a double complex.
pub fn total_cohomology(dc: &DoubleComplex, n: usize) -> Result<TotalCohomology> {
    dc.cohomology(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::bar::cohomology_group;
    use crate::groupoid::GroupTable;

    fn setup(g: usize, a: u64) -> (GroupTable, FiniteAbelianGroup, GAction) {
        let g = GroupTable::cyclic(g);
        let a = FiniteAbelianGroup::cyclic(a);
        let rho = GAction::trivial(&g, &a);
        (g, a, rho)
    }

    #[test]
    fn differential_squares_to_zero_on_basis() {
        let (g, a, rho) = setup(2, 2);
        let cover = SimplicialCover::uniform(&g, 2, 3);
        let dc = DoubleComplex::full(&cover, &a, &rho, 3, 3).unwrap();
        for n in 0..dc.total.top() - 1 {
            for i in 0..dc.total.dim(n) {
                let mut x = dc.total.zero(n);
                x[i] = 1;
                let dd = dc.total.apply(n + 1, &dc.total.apply(n, &x));
                assert!(dd.iter().all(|&v| v == 0), "degree {n} cell {i}");
            }
        }
    }

    #[test]
    fn identity_cover_matches_bar() {
        let (g, a, rho) = setup(2, 2);
        let dc = DoubleComplex::new(&SimplicialCover::identity(&g, 4), &a, &rho, 4, 4).unwrap();
        let bar = cohomology_group(&g, &a, &rho, 3).unwrap();
        let h = dc.cohomology(3).unwrap();
        assert_eq!(h.order(), 2);
        let inc = dc.include_bar(&bar.representatives()[1]);
        assert_eq!(dc.cocycle_failure(&inc), None);
        assert_eq!(h.class_index(&dc, &inc), Some(1));
    }

    #[test]
    fn doubled_cover_z2() {
        let (g, a, rho) = setup(2, 2);
        let dc = DoubleComplex::new(&SimplicialCover::uniform(&g, 2, 4), &a, &rho, 4, 4).unwrap();
        let h = dc.cohomology(3).unwrap();
        assert_eq!(h.order(), 2);
        for r in h.representatives(&dc) {
            assert_eq!(dc.lambda1_class(&r).unwrap(), Vec::<u64>::new());
        }
    }

    #[test]
    fn single_row_is_cech_of_a_point() {
        let (g, a, rho) = setup(2, 3);
        let dc = DoubleComplex::with_rows(&SimplicialCover::uniform(&g, 3, 0), &a, &rho, 3, 0, 0)
            .unwrap();
        assert_eq!(dc.cohomology(0).unwrap().order(), 3);
        assert_eq!(dc.cohomology(1).unwrap().order(), 1);
        assert_eq!(dc.cohomology(2).unwrap().order(), 1);
    }

    #[test]
    fn non_cocycle_is_rejected_with_witness() {
        let (g, a, rho) = setup(2, 2);
        let dc = DoubleComplex::new(&SimplicialCover::uniform(&g, 2, 4), &a, &rho, 4, 4).unwrap();
        let mut t = dc.zero(3);
        t.parts[2][1] = 1;
        let v = dc.cocycle_failure(&t).unwrap();
        assert_eq!(v.witness[0] + v.witness[1], 4);
    }

    #[test]
    fn cohomologous_recovers_witness() {
        let (g, a, rho) = setup(2, 2);
        let dc = DoubleComplex::new(&SimplicialCover::uniform(&g, 2, 4), &a, &rho, 4, 4).unwrap();
        let h = dc.cohomology(3).unwrap();
        let x = h.representatives(&dc)[1].clone();
        let mut theta = dc.zero(2);
        theta.parts[1][3] = 1;
        theta.parts[0][5] = 1;
        let y = dc.split(
            3,
            &dc.total
                .add(&dc.join(&x), &dc.join(&dc.differential(&theta))),
        );
        let w = dc.cohomologous(&y, &x).unwrap();
        assert_eq!(
            dc.differential(&w),
            dc.split(3, &dc.total.sub(&dc.join(&y), &dc.join(&x)))
        );
        assert!(dc.cohomologous(&x, &dc.zero(3)).is_none());
    }
}

//! Cochain complexes of finite `G`-modules with sparse twisted differentials.

use std::collections::HashSet;

use super::abelian::{invariant_factors_from_table, prime_factors, FiniteAbelianGroup, GAction};
use super::linalg::{Local, Mat, Smith};
use crate::error::{Error, Result};

/// One summand `sign·ρ(g)(x[col])` of a differential row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub col: u32,
    pub sign: i8,
    pub g: u32,
}

/// Sparse map `C^n → C^{n+1}`, one row per cell of `C^{n+1}`.
#[derive(Clone, Debug, Default)]
pub struct Differential {
    pub cols: usize,
    pub rows: Vec<Vec<Term>>,
}

/// Cochains are vectors of element indices of `A`, one per cell.
#[derive(Clone, Debug)]
pub struct LinearComplex {
    pub a: FiniteAbelianGroup,
    pub action: GAction,
    pub dims: Vec<usize>,
    pub diffs: Vec<Differential>,
}

/// Exhaustive search is used when both cochain spaces have at most this many elements.
pub const ENUMERATION_LIMIT: u128 = 1 << 20;

impl LinearComplex {
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    pub fn zero(&self, n: usize) -> Vec<usize> {
        vec![0; self.dim(n)]
    }

    /// `D x` for `x ∈ Cⁿ`.
    pub fn apply(&self, n: usize, x: &[usize]) -> Vec<usize> {
        let a = &self.a;
        let neg: Vec<usize> = (0..a.order()).map(|v| a.neg(v)).collect();
        self.diffs[n]
            .rows
            .iter()
            .map(|terms| {
                terms.iter().fold(0, |acc, t| {
                    let v = self.action.act(t.g as usize, x[t.col as usize]);
                    a.add(acc, if t.sign < 0 { neg[v] } else { v })
                })
            })
            .collect()
    }

    pub fn is_cocycle(&self, n: usize, x: &[usize]) -> bool {
        n >= self.diffs.len() || self.apply(n, x).iter().all(|&v| v == 0)
    }

    /// First nonzero cell of `D x`.
    pub fn cocycle_failure(&self, n: usize, x: &[usize]) -> Option<usize> {
        if n >= self.diffs.len() {
            return None;
        }
        self.apply(n, x).iter().position(|&v| v != 0)
    }

    pub fn add(&self, x: &[usize], y: &[usize]) -> Vec<usize> {
        x.iter().zip(y).map(|(&u, &v)| self.a.add(u, v)).collect()
    }

    pub fn sub(&self, x: &[usize], y: &[usize]) -> Vec<usize> {
        x.iter().zip(y).map(|(&u, &v)| self.a.sub(u, v)).collect()
    }

    pub fn scale(&self, x: &[usize], k: i64) -> Vec<usize> {
        x.iter().map(|&u| self.a.scale(u, k)).collect()
    }

    pub fn space_size(&self, n: usize) -> u128 {
        (self.a.order() as u128)
            .checked_pow(self.dim(n) as u32)
            .unwrap_or(u128::MAX)
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n + 1 > self.diffs.len() {
            return Err(Error::Bound(format!(
                "degree {n} needs cells in degree {}",
                n + 1
            )));
        }
        Ok(())
    }

    /// `Hⁿ` by Smith normal form over each primary part, with exhaustive
    /// lexicographically minimal representatives when the spaces are small.
    pub fn cohomology(&self, n: usize) -> Result<Cohomology> {
        self.check_degree(n)?;
        let mut parts = Vec::new();
        for (p, _) in prime_factors(self.a.exponent()) {
            parts.push(PrimePart::new(self, n, p));
        }
        let mut moduli = Vec::new();
        let mut generators = Vec::new();
        for part in &parts {
            for &(i, v) in part.factors.iter() {
                moduli.push(part.ring.p.pow(v));
                let mut y = vec![0u64; part.ring_cols_a()];
                y[i] = 1;
                part.coord.p_inv_apply(&mut y);
                let z = part.k_mat.mul_vec(&part.ring, &y);
                generators.push(part.embed(self, &z));
            }
        }
        let group = FiniteAbelianGroup::new(&moduli);
        let mut h = Cohomology {
            degree: n,
            group,
            generators,
            parts,
            representatives: None,
        };
        if (n == 0 || self.space_size(n - 1) <= ENUMERATION_LIMIT)
            && self.space_size(n) <= ENUMERATION_LIMIT
        {
            let e = self.enumerate(n);
            debug_assert_eq!(e.invariant_factors, h.group.invariant_factors());
            h.representatives = Some(e.representatives);
        }
        Ok(h)
    }

    /// Classes by exhaustive enumeration of `Cⁿ` and `Cⁿ⁻¹`.
    pub fn enumerate(&self, n: usize) -> Enumerated {
        let na = self.a.order();
        let size = self.space_size(n) as usize;
        let decode = |mut idx: usize, len: usize| {
            let mut x = vec![0; len];
            for s in (0..len).rev() {
                x[s] = idx % na;
                idx /= na;
            }
            x
        };
        let encode = |x: &[usize]| x.iter().fold(0usize, |acc, &v| acc * na + v);
        let mut boundaries: HashSet<usize> = HashSet::new();
        if n == 0 {
            boundaries.insert(0);
        } else {
            for idx in 0..self.space_size(n - 1) as usize {
                boundaries.insert(encode(&self.apply(n - 1, &decode(idx, self.dim(n - 1)))));
            }
        }
        let boundaries: Vec<Vec<usize>> = {
            let mut b: Vec<usize> = boundaries.into_iter().collect();
            b.sort_unstable();
            b.into_iter().map(|i| decode(i, self.dim(n))).collect()
        };
        let mut class = vec![u32::MAX; size];
        let mut reps = Vec::new();
        let mut n_cocycles = 0;
        for idx in 0..size {
            let x = decode(idx, self.dim(n));
            if !self.is_cocycle(n, &x) {
                continue;
            }
            n_cocycles += 1;
            if class[idx] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            for b in &boundaries {
                class[encode(&self.add(&x, b))] = id;
            }
            reps.push(x);
        }
        let h = reps.len();
        let table: Vec<Vec<usize>> = (0..h)
            .map(|i| {
                (0..h)
                    .map(|j| class[encode(&self.add(&reps[i], &reps[j]))] as usize)
                    .collect()
            })
            .collect();
        Enumerated {
            invariant_factors: invariant_factors_from_table(&table, 0),
            representatives: reps,
            n_cocycles,
            n_coboundaries: boundaries.len(),
            add_table: table,
        }
    }

    /// Some `y ∈ Cⁿ⁻¹` with `D y = x`.
    pub fn coboundary_preimage(&self, n: usize, x: &[usize]) -> Option<Vec<usize>> {
        if x.iter().all(|&v| v == 0) {
            return Some(self.zero(n.saturating_sub(1)));
        }
        if n == 0 {
            return None;
        }
        let mut y = self.zero(n - 1);
        for (p, _) in prime_factors(self.a.exponent()) {
            let ctx = PrimeCtx::new(self, p);
            let s = ctx.diff_mat(self, n - 1).hcat(&ctx.relations(self.dim(n)));
            let sol = Smith::new(ctx.ring, s).solve(&ctx.vectorize(self, x))?;
            let part = ctx.embed(self, &sol[..self.dim(n - 1) * ctx.rank()]);
            y = self.add(&y, &part);
        }
        debug_assert_eq!(self.apply(n - 1, &y), x);
        Some(y)
    }
}

/// Output of [`LinearComplex::enumerate`].
#[derive(Clone, Debug)]
pub struct Enumerated {
    pub invariant_factors: Vec<u64>,
    /// Lexicographically minimal cocycle of each class, class 0 is zero.
    pub representatives: Vec<Vec<usize>>,
    pub n_cocycles: usize,
    pub n_coboundaries: usize,
    pub add_table: Vec<Vec<usize>>,
}

/// Data for the `p`-primary part `A_p` of the coefficients.
#[derive(Clone, Debug)]
struct PrimeCtx {
    ring: Local,
    /// `(coordinate of A, exponent of p in it, CRT idempotent mod mⱼ)`
    coords: Vec<(usize, u32, u64)>,
    /// `ρ(g)` on `A_p` as a dense `r×r` matrix.
    mats: Vec<Vec<Vec<u64>>>,
}

impl PrimeCtx {
    fn new(cx: &LinearComplex, p: u64) -> Self {
        let mut coords = Vec::new();
        for (j, &m) in cx.a.moduli().iter().enumerate() {
            let e = prime_factors(m)
                .iter()
                .find(|f| f.0 == p)
                .map_or(0, |f| f.1);
            if e > 0 {
                let pe = p.pow(e);
                let rest = m / pe;
                // c ≡ 1 mod pᵉ, c ≡ 0 mod rest
                let c = (0..pe).map(|t| t * rest).find(|c| c % pe == 1).unwrap_or(0) % m;
                coords.push((j, e, if rest == 1 { 1 } else { c }));
            }
        }
        let k = coords.iter().map(|c| c.1).max().unwrap_or(1);
        let ring = Local::new(p, k);
        let r = coords.len();
        let mats = cx
            .action
            .tables()
            .iter()
            .map(|table| {
                let mut m = vec![vec![0u64; r]; r];
                for (u, &(ju, _, cu)) in coords.iter().enumerate() {
                    let mut e = vec![0u64; cx.a.rank()];
                    e[ju] = cu;
                    let img = cx.a.decode(table[cx.a.encode_u(&e)]);
                    for (t, &(jt, et, _)) in coords.iter().enumerate() {
                        m[t][u] = img[jt] % p.pow(et);
                    }
                }
                m
            })
            .collect();
        PrimeCtx { ring, coords, mats }
    }

    fn rank(&self) -> usize {
        self.coords.len()
    }

    fn vectorize(&self, cx: &LinearComplex, x: &[usize]) -> Vec<u64> {
        let r = self.rank();
        let mut v = vec![0u64; x.len() * r];
        for (s, &val) in x.iter().enumerate() {
            let d = cx.a.decode(val);
            for (t, &(j, e, _)) in self.coords.iter().enumerate() {
                v[s * r + t] = d[j] % self.ring.p.pow(e);
            }
        }
        v
    }

    fn embed(&self, cx: &LinearComplex, v: &[u64]) -> Vec<usize> {
        let r = self.rank();
        let cells = if r == 0 { 0 } else { v.len() / r };
        (0..cells)
            .map(|s| {
                let mut d = vec![0u64; cx.a.rank()];
                for (t, &(j, _, c)) in self.coords.iter().enumerate() {
                    let m = cx.a.moduli()[j];
                    d[j] = (v[s * r + t] % m) * c % m;
                }
                cx.a.encode_u(&d)
            })
            .collect()
    }

    /// Columns `p^{eₜ}·e_{s,t}` for coordinates of exponent below `k`.
    fn relations(&self, cells: usize) -> Mat {
        let r = self.rank();
        let small: Vec<usize> = (0..r).filter(|&t| self.coords[t].1 < self.ring.k).collect();
        let mut m = Mat::zeros(cells * r, cells * small.len());
        for s in 0..cells {
            for (c, &t) in small.iter().enumerate() {
                m.set(
                    s * r + t,
                    s * small.len() + c,
                    self.ring.p.pow(self.coords[t].1),
                );
            }
        }
        m
    }

    fn diff_mat(&self, cx: &LinearComplex, n: usize) -> Mat {
        let r = self.rank();
        let d = &cx.diffs[n];
        let mut m = Mat::zeros(d.rows.len() * r, d.cols * r);
        for (row, terms) in d.rows.iter().enumerate() {
            for t in terms {
                let g = &self.mats[t.g as usize];
                for a in 0..r {
                    for b in 0..r {
                        let i = row * r + a;
                        let j = t.col as usize * r + b;
                        let v = if t.sign < 0 {
                            self.ring.sub(0, g[a][b])
                        } else {
                            g[a][b]
                        };
                        let cur = m.at(i, j);
                        m.set(i, j, self.ring.add(cur, v));
                    }
                }
            }
        }
        m
    }
}

#[derive(Clone, Debug)]
struct PrimePart {
    ring: Local,
    ctx: PrimeCtx,
    /// Generators of the lifted cocycles.
    k_mat: Mat,
    cocycle_solver: Smith,
    coord: Smith,
    /// `(index in the coordinate basis, valuation)` of each nontrivial factor.
    factors: Vec<(usize, u32)>,
}

impl PrimePart {
    fn new(cx: &LinearComplex, n: usize, p: u64) -> Self {
        let ctx = PrimeCtx::new(cx, p);
        let ring = ctx.ring;
        let nn = cx.dim(n) * ctx.rank();
        let t = ctx.diff_mat(cx, n).hcat(&ctx.relations(cx.dim(n + 1)));
        let lifted: Vec<Vec<u64>> = Smith::new(ring, t)
            .kernel()
            .into_iter()
            .map(|z| z[..nn].to_vec())
            .collect();
        let span = Smith::new(ring, Mat::from_cols(nn, &lifted)).image();
        let k_mat = Mat::from_cols(nn, &span);
        let mut bmat = ctx.relations(cx.dim(n));
        if n > 0 {
            bmat = ctx.diff_mat(cx, n - 1).hcat(&bmat);
        }
        let a = k_mat.cols;
        let cocycle_solver = Smith::new(ring, k_mat.hcat(&bmat));
        let rel: Vec<Vec<u64>> = cocycle_solver
            .kernel()
            .into_iter()
            .map(|z| z[..a].to_vec())
            .collect();
        let coord = Smith::new(ring, Mat::from_cols(a, &rel));
        let factors = (0..a)
            .filter_map(|i| {
                let v = coord.val(i);
                (v > 0).then_some((i, v))
            })
            .collect();
        PrimePart {
            ring,
            ctx,
            k_mat,
            cocycle_solver,
            coord,
            factors,
        }
    }

    fn ring_cols_a(&self) -> usize {
        self.k_mat.cols
    }

    fn embed(&self, cx: &LinearComplex, v: &[u64]) -> Vec<usize> {
        self.ctx.embed(cx, v)
    }

    fn class_of(&self, cx: &LinearComplex, x: &[usize]) -> Option<Vec<u64>> {
        let sol = self.cocycle_solver.solve(&self.ctx.vectorize(cx, x))?;
        let mut y = sol[..self.k_mat.cols].to_vec();
        self.coord.p_apply(&mut y);
        Some(
            self.factors
                .iter()
                .map(|&(i, v)| y[i] % self.ring.p.pow(v))
                .collect(),
        )
    }
}

/// `Hⁿ` of a [`LinearComplex`]: the group as a sum of prime-power cyclic
/// factors, one generating cocycle per factor.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: usize,
    pub group: FiniteAbelianGroup,
    pub generators: Vec<Vec<usize>>,
    parts: Vec<PrimePart>,
    /// Lexicographically minimal cocycle per class, when enumerated.
    pub representatives: Option<Vec<Vec<usize>>>,
}

impl Cohomology {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        self.group.invariant_factors()
    }

    /// Coordinates of the class of a cocycle, or `None` for a non-cocycle.
    pub fn class_of(&self, cx: &LinearComplex, x: &[usize]) -> Option<Vec<u64>> {
        if !cx.is_cocycle(self.degree, x) {
            return None;
        }
        let mut out = Vec::new();
        for part in &self.parts {
            out.extend(part.class_of(cx, x)?);
        }
        Some(out)
    }

    /// Class coordinates as an element index of `group`.
    pub fn class_index(&self, cx: &LinearComplex, x: &[usize]) -> Option<usize> {
        self.class_of(cx, x).map(|c| self.group.encode_u(&c))
    }

    /// `Σ cᵢ·genᵢ`.
    pub fn cocycle(&self, cx: &LinearComplex, coords: &[u64]) -> Vec<usize> {
        let mut x = cx.zero(self.degree);
        for (g, &c) in self.generators.iter().zip(coords) {
            x = cx.add(&x, &cx.scale(g, c as i64));
        }
        x
    }

    /// One cocycle per class, indexed like `group`; lexicographically
    /// minimal when enumeration ran.
    pub fn class_representatives(&self, cx: &LinearComplex) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.order()];
        match &self.representatives {
            Some(reps) => {
                for r in reps {
                    out[self.class_index(cx, r).expect("cocycle")] = r.clone();
                }
            }
            None => {
                for (i, slot) in out.iter_mut().enumerate() {
                    *slot = self.cocycle(cx, &self.group.decode(i));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `Z/m --×k--> Z/m` in degrees 0 → 1 with zero top.
    fn two_term(m: u64, k: i8) -> LinearComplex {
        let a = FiniteAbelianGroup::cyclic(m);
        let action = GAction::from_tables(vec![(0..m as usize).collect()]);
        let mut rows = vec![Vec::new()];
        for _ in 0..k.abs() {
            rows[0].push(Term {
                col: 0,
                sign: k.signum(),
                g: 0,
            });
        }
        LinearComplex {
            a,
            action,
            dims: vec![1, 1, 0],
            diffs: vec![
                Differential { cols: 1, rows },
                Differential {
                    cols: 1,
                    rows: vec![],
                },
            ],
        }
    }

    #[test]
    fn multiplication_maps() {
        // kernel and cokernel of ×k on Z/m
        for (m, k, h0, h1) in [
            (4, 2, vec![2], vec![2]),
            (6, 2, vec![2], vec![2]),
            (12, 3, vec![3], vec![3]),
            (5, 1, vec![], vec![]),
        ] {
            let cx = two_term(m, k);
            assert_eq!(cx.cohomology(0).unwrap().invariant_factors(), h0);
            assert_eq!(cx.cohomology(1).unwrap().invariant_factors(), h1);
            assert_eq!(cx.enumerate(1).invariant_factors, h1);
        }
    }

    #[test]
    fn class_coordinates_are_additive() {
        let cx = two_term(12, 3);
        let h = cx.cohomology(1).unwrap();
        let reps = h.class_representatives(&cx);
        for (i, r) in reps.iter().enumerate() {
            assert_eq!(h.class_index(&cx, r), Some(i));
        }
        assert_eq!(
            cx.coboundary_preimage(1, &[9]).map(|y| cx.apply(0, &y)),
            Some(vec![9])
        );
        assert!(cx.coboundary_preimage(1, &[1]).is_none());
    }
}

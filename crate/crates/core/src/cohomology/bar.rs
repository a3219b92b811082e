use serde_json::Value;

use super::abelian::{FiniteAbelianGroup, GAction};
use super::complex::{Cohomology, Differential, LinearComplex, Term};
use crate::error::{Error, Result};
use crate::groupoid::GroupTable;

/// A function `Gⁿ → A` stored on all tuples; tuple `(g₁,…,gₙ)` has index
/// `Σ gᵢ·|G|^{n-i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    pub degree: usize,
    pub values: Vec<usize>,
    pub normalized: bool,
}

pub fn tuple_index(n_g: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &g| acc * n_g + g)
}

pub fn tuple_of(n_g: usize, n: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for i in (0..n).rev() {
        t[i] = idx % n_g;
        idx /= n_g;
    }
    t
}

impl Cochain {
    pub fn zero(g: &GroupTable, n: usize) -> Self {
        Cochain {
            degree: n,
            values: vec![0; g.order().pow(n as u32)],
            normalized: true,
        }
    }

    pub fn from_fn(g: &GroupTable, n: usize, f: impl Fn(&[usize]) -> usize) -> Self {
        let values: Vec<usize> = (0..g.order().pow(n as u32))
            .map(|i| f(&tuple_of(g.order(), n, i)))
            .collect();
        let mut c = Cochain {
            degree: n,
            values,
            normalized: false,
        };
        c.normalized = c.is_normalized(g);
        c
    }

    pub fn at(&self, g: &GroupTable, t: &[usize]) -> usize {
        self.values[tuple_index(g.order(), t)]
    }

    /// Zero whenever an argument is the unit.
    pub fn is_normalized(&self, g: &GroupTable) -> bool {
        (0..self.values.len()).all(|i| {
            self.values[i] == 0 || !tuple_of(g.order(), self.degree, i).contains(&g.unit())
        })
    }

    pub fn add(&self, a: &FiniteAbelianGroup, other: &Cochain) -> Cochain {
        Cochain {
            degree: self.degree,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| a.add(x, y))
                .collect(),
            normalized: self.normalized && other.normalized,
        }
    }

    pub fn neg(&self, a: &FiniteAbelianGroup) -> Cochain {
        Cochain {
            values: self.values.iter().map(|&x| a.neg(x)).collect(),
            ..self.clone()
        }
    }

    /// Nested JSON arrays of element indices, `n` levels deep.
    pub fn to_json(&self, g: &GroupTable) -> Value {
        fn rec(vals: &[usize], n_g: usize, depth: usize) -> Value {
            if depth == 0 {
                return Value::from(vals[0]);
            }
            let chunk = vals.len() / n_g;
            Value::Array(
                (0..n_g)
                    .map(|i| rec(&vals[i * chunk..(i + 1) * chunk], n_g, depth - 1))
                    .collect(),
            )
        }
        rec(&self.values, g.order(), self.degree)
    }

    pub fn from_json(
        g: &GroupTable,
        a: &FiniteAbelianGroup,
        degree: usize,
        v: &Value,
    ) -> Result<Self> {
        fn rec(
            v: &Value,
            n_g: usize,
            depth: usize,
            path: &mut Vec<usize>,
            out: &mut Vec<usize>,
            a: usize,
        ) -> Result<()> {
            let bad = |detail: String| Error::Malformed {
                field: format!("values{path:?}"),
                detail,
            };
            if depth == 0 {
                let x = v
                    .as_u64()
                    .ok_or_else(|| bad("expected element index".into()))?
                    as usize;
                if x >= a {
                    return Err(bad(format!("element {x} outside A of order {a}")));
                }
                out.push(x);
                return Ok(());
            }
            let arr = v.as_array().ok_or_else(|| bad("expected array".into()))?;
            if arr.len() != n_g {
                return Err(bad(format!("expected {n_g} entries, found {}", arr.len())));
            }
            for (i, w) in arr.iter().enumerate() {
                path.push(i);
                rec(w, n_g, depth - 1, path, out, a)?;
                path.pop();
            }
            Ok(())
        }
        let mut values = Vec::new();
        rec(
            v,
            g.order(),
            degree,
            &mut Vec::new(),
            &mut values,
            a.order(),
        )?;
        let mut c = Cochain {
            degree,
            values,
            normalized: false,
        };
        c.normalized = c.is_normalized(g);
        Ok(c)
    }
}

/// Twisted bar differential
/// `(δf)(g₁,…,g_{n+1}) = ρ(g₁)f(g₂,…) + Σ (−1)ⁱ f(…,gᵢg_{i+1},…) + (−1)^{n+1} f(g₁,…,gₙ)`.
pub fn bar_differential(
    c: &Cochain,
    g: &GroupTable,
    a: &FiniteAbelianGroup,
    rho: &GAction,
) -> Cochain {
    let n = c.degree;
    let ng = g.order();
    let values = (0..ng.pow(n as u32 + 1))
        .map(|idx| {
            let t = tuple_of(ng, n + 1, idx);
            face_terms(g, &t)
                .into_iter()
                .fold(0, |acc, (sign, act, s)| {
                    let v = rho.act(act, c.values[tuple_index(ng, &s)]);
                    a.add(acc, if sign < 0 { a.neg(v) } else { v })
                })
        })
        .collect();
    Cochain {
        degree: n + 1,
        values,
        normalized: c.normalized,
    }
}

/// `(sign, acting element, face tuple)` for each term of the bar differential.
fn face_terms(g: &GroupTable, t: &[usize]) -> Vec<(i8, usize, Vec<usize>)> {
    let m = t.len();
    let mut out = Vec::with_capacity(m + 1);
    out.push((1, t[0], t[1..].to_vec()));
    for i in 1..m {
        let mut s = t[..i - 1].to_vec();
        s.push(g.mul(t[i - 1], t[i]));
        s.extend_from_slice(&t[i + 1..]);
        out.push((if i % 2 == 1 { -1 } else { 1 }, g.unit(), s));
    }
    out.push((
        if m % 2 == 1 { -1 } else { 1 },
        g.unit(),
        t[..m - 1].to_vec(),
    ));
    out
}

/// The bar complex in degrees `0..=top`, on all tuples or on unit-free ones.
#[derive(Clone, Debug)]
pub struct BarComplex {
    pub group: GroupTable,
    pub normalized: bool,
    pub complex: LinearComplex,
    /// Tuple index of each cell, per degree.
    cells: Vec<Vec<usize>>,
    /// Cell of each tuple index, `u32::MAX` for degenerate tuples.
    cell_of: Vec<Vec<u32>>,
}

impl BarComplex {
    pub fn new(
        g: &GroupTable,
        a: &FiniteAbelianGroup,
        rho: &GAction,
        top: usize,
        normalized: bool,
    ) -> Self {
        let ng = g.order();
        let mut cells = Vec::new();
        let mut cell_of = Vec::new();
        for n in 0..=top {
            let mut c = Vec::new();
            let mut inv = vec![u32::MAX; ng.pow(n as u32)];
            for idx in 0..ng.pow(n as u32) {
                if !normalized || !tuple_of(ng, n, idx).contains(&g.unit()) {
                    inv[idx] = c.len() as u32;
                    c.push(idx);
                }
            }
            cells.push(c);
            cell_of.push(inv);
        }
        let mut diffs = Vec::new();
        for n in 0..top {
            let rows = cells[n + 1]
                .iter()
                .map(|&idx| {
                    face_terms(g, &tuple_of(ng, n + 1, idx))
                        .into_iter()
                        .filter_map(|(sign, act, s)| {
                            let col = cell_of[n][tuple_index(ng, &s)];
                            (col != u32::MAX).then_some(Term {
                                col,
                                sign,
                                g: act as u32,
                            })
                        })
                        .collect()
                })
                .collect();
            diffs.push(Differential {
                cols: cells[n].len(),
                rows,
            });
        }
        let complex = LinearComplex {
            a: a.clone(),
            action: rho.clone(),
            dims: cells.iter().map(|c| c.len()).collect(),
            diffs,
        };
        BarComplex {
            group: g.clone(),
            normalized,
            complex,
            cells,
            cell_of,
        }
    }

    /// Restriction to cells; `None` if a normalized complex receives a
    /// cochain that is nonzero on a degenerate tuple.
    pub fn to_cells(&self, c: &Cochain) -> Option<Vec<usize>> {
        let n = c.degree;
        if self.normalized && !c.is_normalized(&self.group) {
            return None;
        }
        Some(self.cells[n].iter().map(|&i| c.values[i]).collect())
    }

    pub fn from_cells(&self, n: usize, x: &[usize]) -> Cochain {
        let mut values = vec![0; self.group.order().pow(n as u32)];
        for (&i, &v) in self.cells[n].iter().zip(x) {
            values[i] = v;
        }
        let mut c = Cochain {
            degree: n,
            values,
            normalized: false,
        };
        c.normalized = c.is_normalized(&self.group);
        c
    }

    pub fn cell_of(&self, n: usize, tuple: usize) -> Option<usize> {
        let c = self.cell_of[n][tuple];
        (c != u32::MAX).then_some(c as usize)
    }
}

/// `Hⁿ(G; A)` with its complex.
#[derive(Clone, Debug)]
pub struct GroupCohomology {
    pub bar: BarComplex,
    pub h: Cohomology,
}

impl GroupCohomology {
    pub fn degree(&self) -> usize {
        self.h.degree
    }

    pub fn order(&self) -> usize {
        self.h.order()
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        self.h.invariant_factors()
    }

    pub fn generators(&self) -> Vec<Cochain> {
        self.h
            .generators
            .iter()
            .map(|x| self.bar.from_cells(self.degree(), x))
            .collect()
    }

    /// One cocycle per class, indexed by [`Self::class_index`].
    pub fn representatives(&self) -> Vec<Cochain> {
        self.h
            .class_representatives(&self.bar.complex)
            .iter()
            .map(|x| self.bar.from_cells(self.degree(), x))
            .collect()
    }

    pub fn class_of(&self, c: &Cochain) -> Option<Vec<u64>> {
        self.h.class_of(&self.bar.complex, &self.bar.to_cells(c)?)
    }

    pub fn class_index(&self, c: &Cochain) -> Option<usize> {
        self.h
            .class_index(&self.bar.complex, &self.bar.to_cells(c)?)
    }

    /// `θ` with `δθ = x − y`.
    pub fn cohomologous(&self, x: &Cochain, y: &Cochain) -> Option<Cochain> {
        let a = &self.bar.complex.a;
        let d = self.bar.to_cells(&x.add(a, &y.neg(a)))?;
        let n = self.degree();
        let theta = self.bar.complex.coboundary_preimage(n, &d)?;
        Some(self.bar.from_cells(n.saturating_sub(1), &theta))
    }
}

/// `Hⁿ(G; A, ρ)` on normalized cochains.
pub fn cohomology_group(
    g: &GroupTable,
    a: &FiniteAbelianGroup,
    rho: &GAction,
    n: usize,
) -> Result<GroupCohomology> {
    cohomology_group_with(g, a, rho, n, true)
}

pub fn cohomology_group_with(
    g: &GroupTable,
    a: &FiniteAbelianGroup,
    rho: &GAction,
    n: usize,
    normalized: bool,
) -> Result<GroupCohomology> {
    let bar = BarComplex::new(g, a, rho, n + 1, normalized);
    let h = bar.complex.cohomology(n)?;
    Ok(GroupCohomology { bar, h })
}

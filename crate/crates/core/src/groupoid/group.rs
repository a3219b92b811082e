use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::Violation;

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    mul: Vec<usize>,
    unit: usize,
    inv: Vec<usize>,
}

/// Wire format: `{"elements": n, "mul": [[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupData {
    #[serde(default)]
    pub schema: Option<u32>,
    pub elements: usize,
    pub mul: Vec<Vec<usize>>,
}

impl GroupTable {
    /// Validates closure, associativity, unit and inverses.
    pub fn from_rows(rows: &[Vec<usize>]) -> std::result::Result<Self, Violation> {
        let n = rows.len();
        if n == 0 {
            return Err(Violation::new("nonempty", vec![]));
        }
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Violation::new("square table", vec![a, row.len()]));
            }
            if let Some(b) = row.iter().position(|&c| c >= n) {
                return Err(Violation::new("closure", vec![a, b, row[b]]));
            }
        }
        let m = |a: usize, b: usize| rows[a][b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Violation::new("associativity", vec![a, b, c]));
                    }
                }
            }
        }
        let unit = (0..n)
            .find(|&e| (0..n).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or_else(|| Violation::new("unit", vec![]))?;
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| m(a, b) == unit && m(b, a) == unit)
                .ok_or_else(|| Violation::new("inverse", vec![a]))?;
        }
        Ok(GroupTable {
            n,
            mul: rows.concat(),
            unit,
            inv,
        })
    }

    pub fn from_fn(
        n: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> std::result::Result<Self, Violation> {
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn from_data(d: &GroupData) -> Result<Self> {
        if d.mul.len() != d.elements {
            return Err(Error::Malformed {
                field: "mul".into(),
                detail: format!("{} rows for {} elements", d.mul.len(), d.elements),
            });
        }
        Self::from_rows(&d.mul).map_err(|v| Error::Malformed {
            field: "mul".into(),
            detail: v.to_string(),
        })
    }

    pub fn to_data(&self) -> GroupData {
        GroupData {
            schema: Some(1),
            elements: self.n,
            mul: self.rows(),
        }
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        Self::from_fn(n, |a, b| (a + b) % n).expect("cyclic group")
    }

    /// Direct product; element `(a, b)` has index `a * |h| + b`.
    pub fn product(g: &GroupTable, h: &GroupTable) -> Self {
        let k = h.n;
        Self::from_fn(g.n * k, |x, y| {
            g.mul(x / k, y / k) * k + h.mul(x % k, y % k)
        })
        .expect("product group")
    }

    /// Symmetric group on `n` letters, permutations in lexicographic order,
    /// `mul(a, b)` = apply `b` first, then `a`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("permutation");
        Self::from_fn(perms.len(), |a, b| {
            let c: Vec<usize> = (0..n).map(|i| perms[a][perms[b][i]]).collect();
            index(&c)
        })
        .expect("symmetric group")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.unit {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.unit, |x, _| self.mul(x, a))
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[self.unit] = true;
        let mut out = vec![self.unit];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Greedy generating set: repeatedly add the smallest element outside
    /// the current subgroup.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut sub = self.closure(&gens);
        while sub.len() < self.n {
            let g = (0..self.n).find(|x| sub.binary_search(x).is_err()).unwrap();
            gens.push(g);
            sub = self.closure(&gens);
        }
        gens
    }

    pub fn is_hom_to(&self, other: &GroupTable, map: &[usize]) -> bool {
        map.len() == self.n
            && (0..self.n)
                .all(|a| (0..self.n).all(|b| map[self.mul(a, b)] == other.mul(map[a], map[b])))
    }

    /// All homomorphisms into `other`, found by assigning generator images.
    pub fn homs_to(&self, other: &GroupTable) -> Vec<Vec<usize>> {
        let gens = self.generators();
        let mut out = Vec::new();
        let mut images = vec![0; gens.len()];
        loop {
            if let Some(map) = self.extend_from_generators(other, &gens, &images) {
                out.push(map);
            }
            let mut i = 0;
            loop {
                if i == images.len() {
                    out.sort();
                    out.dedup();
                    return out;
                }
                images[i] += 1;
                if images[i] < other.n {
                    break;
                }
                images[i] = 0;
                i += 1;
            }
        }
    }

    fn extend_from_generators(
        &self,
        other: &GroupTable,
        gens: &[usize],
        images: &[usize],
    ) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.n];
        map[self.unit] = other.unit;
        let mut queue = vec![self.unit];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for (g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, *g);
                let fy = other.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    queue.push(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        self.is_hom_to(other, &map).then_some(map)
    }

    /// Brute-force isomorphism search through generator images.
    pub fn find_isomorphism(&self, other: &GroupTable) -> Option<Vec<usize>> {
        if self.n != other.n || self.order_profile() != other.order_profile() {
            return None;
        }
        let gens = self.generators();
        let orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let candidates: Vec<Vec<usize>> = orders
            .iter()
            .map(|&k| {
                (0..other.n)
                    .filter(|&y| other.element_order(y) == k)
                    .collect()
            })
            .collect();
        let mut choice = vec![0; gens.len()];
        loop {
            let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
            if let Some(map) = self.extend_from_generators(other, &gens, &images) {
                let mut seen = vec![false; other.n];
                if map.iter().all(|&y| !std::mem::replace(&mut seen[y], true)) {
                    return Some(map);
                }
            }
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return None;
                }
                choice[i] += 1;
                if choice[i] < candidates[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    pub fn is_isomorphic(&self, other: &GroupTable) -> bool {
        self.find_isomorphism(other).is_some()
    }

    fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.n).map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_three_is_nonabelian_of_order_six() {
        let s3 = GroupTable::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert!(!s3.is_isomorphic(&GroupTable::cyclic(6)));
    }

    #[test]
    fn klein_is_not_cyclic() {
        let v = GroupTable::product(&GroupTable::cyclic(2), &GroupTable::cyclic(2));
        assert!(!v.is_isomorphic(&GroupTable::cyclic(4)));
        let z6 = GroupTable::product(&GroupTable::cyclic(2), &GroupTable::cyclic(3));
        assert!(z6.is_isomorphic(&GroupTable::cyclic(6)));
    }

    #[test]
    fn hom_counts() {
        // |Hom(Z/n, Z/m)| = gcd(n, m)
        for n in 1..7 {
            for m in 1..7 {
                let g = (1..=n.min(m))
                    .rev()
                    .find(|d| n % d == 0 && m % d == 0)
                    .unwrap();
                assert_eq!(
                    GroupTable::cyclic(n).homs_to(&GroupTable::cyclic(m)).len(),
                    g
                );
            }
        }
    }

    #[test]
    fn bad_table_reports_axiom() {
        let rows = vec![vec![0, 1], vec![1, 1]];
        assert!(GroupTable::from_rows(&rows).is_err());
    }
}

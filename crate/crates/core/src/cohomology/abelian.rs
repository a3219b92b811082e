use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::GroupTable;
use crate::report::Violation;

/// `Z/m₁ ⊕ … ⊕ Z/m_r`, elements encoded as mixed-radix indices with the
/// last coordinate varying fastest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    moduli: Vec<u64>,
    order: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ModuleData {
    #[serde(default)]
    pub schema: Option<u32>,
    pub moduli: Vec<u64>,
}

impl FiniteAbelianGroup {
    /// Moduli equal to 1 are dropped.
    pub fn new(moduli: &[u64]) -> Self {
        let moduli: Vec<u64> = moduli.iter().copied().filter(|&m| m > 1).collect();
        let order = moduli.iter().map(|&m| m as usize).product();
        FiniteAbelianGroup { moduli, order }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(&[n])
    }

    pub fn trivial() -> Self {
        Self::new(&[])
    }

    pub fn from_data(d: &ModuleData) -> Result<Self> {
        if d.moduli.contains(&0) {
            return Err(Error::Malformed {
                field: "moduli".into(),
                detail: "modulus 0".into(),
            });
        }
        Ok(Self::new(&d.moduli))
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn decode(&self, mut x: usize) -> Vec<u64> {
        let mut v = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            let m = self.moduli[i] as usize;
            v[i] = (x % m) as u64;
            x /= m;
        }
        v
    }

    /// Reduces each coordinate before encoding.
    pub fn encode(&self, v: &[i64]) -> usize {
        self.moduli.iter().zip(v).fold(0usize, |acc, (&m, &c)| {
            acc * m as usize + c.rem_euclid(m as i64) as usize
        })
    }

    pub fn encode_u(&self, v: &[u64]) -> usize {
        self.moduli
            .iter()
            .zip(v)
            .fold(0usize, |acc, (&m, &c)| acc * m as usize + (c % m) as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.decode(a), self.decode(b));
        let s: Vec<u64> = x
            .iter()
            .zip(&y)
            .zip(&self.moduli)
            .map(|((a, b), m)| (a + b) % m)
            .collect();
        self.encode_u(&s)
    }

    pub fn neg(&self, a: usize) -> usize {
        let s: Vec<u64> = self
            .decode(a)
            .iter()
            .zip(&self.moduli)
            .map(|(a, m)| (m - a) % m)
            .collect();
        self.encode_u(&s)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn scale(&self, a: usize, k: i64) -> usize {
        let s: Vec<i64> = self
            .decode(a)
            .iter()
            .map(|&c| c as i64 * k.rem_euclid(self.exponent() as i64))
            .collect();
        self.encode(&s)
    }

    pub fn exponent(&self) -> u64 {
        self.moduli.iter().fold(1, |acc, &m| lcm(acc, m))
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.decode(a)
            .iter()
            .zip(&self.moduli)
            .fold(1, |acc, (&c, &m)| lcm(acc, m / gcd(c, m)))
    }

    /// Canonical invariant factors `d₁ | d₂ | …`.
    pub fn invariant_factors(&self) -> Vec<u64> {
        invariant_factors_of(&self.moduli)
    }

    pub fn is_isomorphic(&self, other: &FiniteAbelianGroup) -> bool {
        self.invariant_factors() == other.invariant_factors()
    }

    /// Additive table, for group-level algorithms.
    pub fn add_table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.add(a, b)).collect())
            .collect()
    }

    pub fn as_group(&self) -> GroupTable {
        GroupTable::from_fn(self.order, |a, b| self.add(a, b)).expect("abelian group")
    }

    /// `"Z/2 + Z/4"`, or `"0"`.
    pub fn describe(&self) -> String {
        describe_factors(&self.invariant_factors())
    }
}

pub fn describe_factors(f: &[u64]) -> String {
    if f.is_empty() {
        "0".into()
    } else {
        f.iter()
            .map(|m| format!("Z/{m}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Invariant factors of `⊕ Z/mᵢ` for arbitrary moduli.
pub fn invariant_factors_of(moduli: &[u64]) -> Vec<u64> {
    let mut by_prime: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
    for &m in moduli {
        for (p, e) in prime_factors(m) {
            by_prime.entry(p).or_default().push(p.pow(e));
        }
    }
    let len = by_prime.values().map(|v| v.len()).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for mut powers in by_prime.into_values() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        for (i, q) in powers.into_iter().enumerate() {
            out[len - 1 - i] *= q;
        }
    }
    out
}

/// Invariant factors of an abstract finite abelian group given by its
/// addition table, from the counts `#{x : pʲx = 0}`.
pub fn invariant_factors_from_table(add: &[Vec<usize>], zero: usize) -> Vec<u64> {
    let n = add.len();
    let times = |x: usize, k: u64| (0..k).fold(zero, |acc, _| add[acc][x]);
    let mut moduli = Vec::new();
    for (p, _) in prime_factors(n as u64) {
        let mut counts = vec![1usize];
        let mut j = 1;
        loop {
            let c = (0..n).filter(|&x| times(x, p.pow(j)) == zero).count();
            counts.push(c);
            if c == *counts.iter().rev().nth(1).unwrap() {
                break;
            }
            j += 1;
        }
        // number of cyclic factors of order ≥ pʲ
        let ge: Vec<u32> = counts
            .windows(2)
            .map(|w| ((w[1] / w[0]) as f64).log(p as f64).round() as u32)
            .collect();
        for (j, w) in ge.windows(2).enumerate() {
            for _ in 0..(w[0] - w[1]) {
                moduli.push(p.pow(j as u32 + 1));
            }
        }
        if let Some(&last) = ge.last() {
            for _ in 0..last {
                moduli.push(p.pow(ge.len() as u32));
            }
        }
    }
    invariant_factors_of(&moduli)
}

/// Homomorphism between finite abelian groups as an integer matrix:
/// `y_i = Σ_j m[i][j]·x_j mod m'_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianHom {
    pub matrix: Vec<Vec<i64>>,
}

impl AbelianHom {
    pub fn identity(a: &FiniteAbelianGroup) -> Self {
        AbelianHom {
            matrix: (0..a.rank())
                .map(|i| (0..a.rank()).map(|j| (i == j) as i64).collect())
                .collect(),
        }
    }

    pub fn scalar(a: &FiniteAbelianGroup, k: i64) -> Self {
        AbelianHom {
            matrix: (0..a.rank())
                .map(|i| (0..a.rank()).map(|j| if i == j { k } else { 0 }).collect())
                .collect(),
        }
    }

    /// Matrix of a table-given homomorphism: column `j` is the image of
    /// the `j`-th generator.
    pub fn from_table(src: &FiniteAbelianGroup, tgt: &FiniteAbelianGroup, table: &[usize]) -> Self {
        let cols: Vec<Vec<u64>> = (0..src.rank())
            .map(|j| {
                let mut e = vec![0u64; src.rank()];
                e[j] = 1;
                tgt.decode(table[src.encode_u(&e)])
            })
            .collect();
        AbelianHom {
            matrix: (0..tgt.rank())
                .map(|i| (0..src.rank()).map(|j| cols[j][i] as i64).collect())
                .collect(),
        }
    }

    /// `m_j·M_ij ≡ 0 mod m'_i` for all entries.
    pub fn well_defined(&self, src: &FiniteAbelianGroup, tgt: &FiniteAbelianGroup) -> bool {
        self.matrix.len() == tgt.rank()
            && self.matrix.iter().enumerate().all(|(i, row)| {
                row.len() == src.rank()
                    && row.iter().enumerate().all(|(j, &c)| {
                        (c.rem_euclid(tgt.moduli[i] as i64) as u64 * src.moduli[j])
                            .is_multiple_of(tgt.moduli[i])
                    })
            })
    }

    pub fn apply(&self, src: &FiniteAbelianGroup, tgt: &FiniteAbelianGroup, x: usize) -> usize {
        let v = src.decode(x);
        let y: Vec<i64> = self
            .matrix
            .iter()
            .zip(tgt.moduli())
            .map(|(row, &m)| {
                row.iter()
                    .zip(&v)
                    .map(|(&c, &xj)| (c.rem_euclid(m as i64) * xj as i64) % m as i64)
                    .sum()
            })
            .collect();
        tgt.encode(&y)
    }

    pub fn table(&self, src: &FiniteAbelianGroup, tgt: &FiniteAbelianGroup) -> Vec<usize> {
        (0..src.order()).map(|x| self.apply(src, tgt, x)).collect()
    }
}

/// Left action `ρ: G → Aut(A)` stored as element tables,
/// `ρ(gh) = ρ(g)∘ρ(h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAction {
    table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ActionData {
    #[serde(default)]
    pub schema: Option<u32>,
    /// One matrix per group element.
    pub rho: Vec<Vec<Vec<i64>>>,
}

impl GAction {
    pub fn trivial(g: &GroupTable, a: &FiniteAbelianGroup) -> Self {
        GAction {
            table: vec![(0..a.order()).collect(); g.order()],
        }
    }

    pub fn from_tables(table: Vec<Vec<usize>>) -> Self {
        GAction { table }
    }

    pub fn from_matrices(
        a: &FiniteAbelianGroup,
        mats: &[AbelianHom],
    ) -> std::result::Result<Self, Violation> {
        if let Some(i) = mats.iter().position(|m| !m.well_defined(a, a)) {
            return Err(Violation::new("matrix not well defined", vec![i]));
        }
        Ok(GAction {
            table: mats.iter().map(|m| m.table(a, a)).collect(),
        })
    }

    pub fn from_data(g: &GroupTable, a: &FiniteAbelianGroup, d: &ActionData) -> Result<Self> {
        let mats: Vec<AbelianHom> = d
            .rho
            .iter()
            .map(|m| AbelianHom { matrix: m.clone() })
            .collect();
        let act = Self::from_matrices(a, &mats).map_err(|v| Error::Malformed {
            field: "rho".into(),
            detail: v.to_string(),
        })?;
        match act.check(g, a) {
            Some(v) => Err(Error::Malformed {
                field: "rho".into(),
                detail: v.to_string(),
            }),
            None => Ok(act),
        }
    }

    pub fn to_data(&self, a: &FiniteAbelianGroup) -> ActionData {
        ActionData {
            schema: Some(1),
            rho: self
                .table
                .iter()
                .map(|t| AbelianHom::from_table(a, a, t).matrix)
                .collect(),
        }
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g][x]
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn matrix(&self, a: &FiniteAbelianGroup, g: usize) -> AbelianHom {
        AbelianHom::from_table(a, a, &self.table[g])
    }

    pub fn is_trivial(&self) -> bool {
        self.table
            .iter()
            .all(|t| t.iter().enumerate().all(|(i, &x)| i == x))
    }

    /// Each `ρ(g)` an automorphism and `ρ` a homomorphism.
    pub fn check(&self, g: &GroupTable, a: &FiniteAbelianGroup) -> Option<Violation> {
        if self.table.len() != g.order() || self.table.iter().any(|t| t.len() != a.order()) {
            return Some(Violation::new("action shape", vec![self.table.len()]));
        }
        for (k, t) in self.table.iter().enumerate() {
            let mut seen = vec![false; a.order()];
            if t.iter()
                .any(|&y| y >= a.order() || std::mem::replace(&mut seen[y], true))
            {
                return Some(Violation::new("not bijective", vec![k]));
            }
            for x in 0..a.order() {
                for y in 0..a.order() {
                    if t[a.add(x, y)] != a.add(t[x], t[y]) {
                        return Some(Violation::new("not additive", vec![k, x, y]));
                    }
                }
            }
        }
        for x in 0..g.order() {
            for y in 0..g.order() {
                let xy = g.mul(x, y);
                if let Some(v) =
                    (0..a.order()).find(|&v| self.table[xy][v] != self.table[x][self.table[y][v]])
                {
                    return Some(Violation::new("not a homomorphism", vec![x, y, v]));
                }
            }
        }
        None
    }
}

/// All automorphisms of `A` as element tables.
pub fn automorphisms(a: &FiniteAbelianGroup) -> Vec<Vec<usize>> {
    let ga = a.as_group();
    let mut out: Vec<Vec<usize>> = ga
        .homs_to(&ga)
        .into_iter()
        .filter(|t| {
            let mut seen = vec![false; t.len()];
            t.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
        .collect();
    out.sort();
    out
}

/// Every action of `G` on `A`.
pub fn all_actions(g: &GroupTable, a: &FiniteAbelianGroup) -> Vec<GAction> {
    let auts = automorphisms(a);
    let n = auts[0].len();
    let aut_group = GroupTable::from_fn(auts.len(), |x, y| {
        let c: Vec<usize> = (0..n).map(|v| auts[x][auts[y][v]]).collect();
        auts.binary_search(&c).unwrap()
    })
    .expect("automorphism group");
    g.homs_to(&aut_group)
        .into_iter()
        .map(|h| GAction::from_tables(h.iter().map(|&k| auts[k].clone()).collect()))
        .collect()
}

use petgraph::unionfind::UnionFind;
use rand::Rng;

use crate::cohomology::abelian::invariant_factors_from_table;
use crate::cohomology::FiniteAbelianGroup;
use crate::error::{invalid, Result};
use crate::random::Rng8;
use crate::report::Report;

/// `C1 → C2 → C3` with `d1: C1 → C2` and `d2: C2 → C3` stored as element
/// tables.
#[derive(Clone, Debug)]
pub struct ThreeTermComplex {
    pub c1: FiniteAbelianGroup,
    pub c2: FiniteAbelianGroup,
    pub c3: FiniteAbelianGroup,
    pub d1: Vec<usize>,
    pub d2: Vec<usize>,
}

fn is_hom(src: &FiniteAbelianGroup, tgt: &FiniteAbelianGroup, f: &[usize]) -> Option<Vec<usize>> {
    if f.len() != src.order() || f.iter().any(|&y| y >= tgt.order()) {
        return Some(vec![]);
    }
    for x in 0..src.order() {
        for y in 0..src.order() {
            if f[src.add(x, y)] != tgt.add(f[x], f[y]) {
                return Some(vec![x, y]);
            }
        }
    }
    None
}

impl ThreeTermComplex {
    pub fn new(
        c1: FiniteAbelianGroup,
        c2: FiniteAbelianGroup,
        c3: FiniteAbelianGroup,
        d1: Vec<usize>,
        d2: Vec<usize>,
    ) -> Result<Self> {
        if let Some(w) = is_hom(&c1, &c2, &d1) {
            return invalid("d1", format!("not a homomorphism at {w:?}"));
        }
        if let Some(w) = is_hom(&c2, &c3, &d2) {
            return invalid("d2", format!("not a homomorphism at {w:?}"));
        }
        if let Some(x) = (0..c1.order()).find(|&x| d2[d1[x]] != 0) {
            return invalid("d∘d", format!("nonzero on element {x}"));
        }
        Ok(ThreeTermComplex { c1, c2, c3, d1, d2 })
    }

    /// Random complex of cyclic factors of order at most `max_factor`, up
    /// to two factors per term.
    pub fn random(rng: &mut Rng8, max_factor: u64) -> Self {
        let group = |rng: &mut Rng8| {
            let k = rng.gen_range(0..=2);
            let m: Vec<u64> = (0..k).map(|_| rng.gen_range(2..=max_factor)).collect();
            FiniteAbelianGroup::new(&m)
        };
        let (c1, c2, c3) = (group(rng), group(rng), group(rng));
        let d2 = random_hom(rng, &c2, &c3, |_| true);
        let d1 = random_hom(rng, &c1, &c2, |y| d2[y] == 0);
        ThreeTermComplex { c1, c2, c3, d1, d2 }
    }
}

/// A hom sending each generator `e_i` to a random `y` with `m_i·y = 0` and
/// `keep(y)`.
fn random_hom(
    rng: &mut Rng8,
    src: &FiniteAbelianGroup,
    tgt: &FiniteAbelianGroup,
    keep: impl Fn(usize) -> bool,
) -> Vec<usize> {
    let images: Vec<usize> = src
        .moduli()
        .iter()
        .map(|&m| {
            let ok: Vec<usize> = (0..tgt.order())
                .filter(|&y| tgt.scale(y, m as i64) == 0 && keep(y))
                .collect();
            ok[rng.gen_range(0..ok.len())]
        })
        .collect();
    (0..src.order())
        .map(|x| {
            src.decode(x)
                .iter()
                .zip(&images)
                .fold(0, |acc, (&k, &y)| tgt.add(acc, tgt.scale(y, k as i64)))
        })
        .collect()
}

/// The strict bicategory of a 3-term complex: objects `C3`, 1-morphisms
/// `(c₃, c₂): c₃ → c₃ + d c₂`, 2-morphisms `(c₃, c₂, c₁): (c₃, c₂) ⇒ (c₃, c₂ + d c₁)`.
#[derive(Clone, Debug)]
pub struct ChainBicategory {
    pub complex: ThreeTermComplex,
}

pub fn chain_bicategory(c: &ThreeTermComplex) -> Result<ChainBicategory> {
    let c = ThreeTermComplex::new(
        c.c1.clone(),
        c.c2.clone(),
        c.c3.clone(),
        c.d1.clone(),
        c.d2.clone(),
    )?;
    Ok(ChainBicategory { complex: c })
}

impl ChainBicategory {
    pub fn target(&self, (c3, c2): (usize, usize)) -> usize {
        self.complex.c3.add(c3, self.complex.d2[c2])
    }

    /// `(c₃, c₂)` then `(c₃′, c₂′)`; requires `c₃′` to be the target of the first.
    pub fn compose(&self, f: (usize, usize), g: (usize, usize)) -> Option<(usize, usize)> {
        (self.target(f) == g.0).then(|| (f.0, self.complex.c2.add(f.1, g.1)))
    }

    pub fn two_target(&self, (c3, c2, c1): (usize, usize, usize)) -> (usize, usize) {
        (c3, self.complex.c2.add(c2, self.complex.d1[c1]))
    }

    /// Vertical composite of 2-morphisms.
    pub fn vcompose(
        &self,
        s: (usize, usize, usize),
        t: (usize, usize, usize),
    ) -> Option<(usize, usize, usize)> {
        (self.two_target(s) == (t.0, t.1)).then(|| (s.0, s.1, self.complex.c1.add(s.2, t.2)))
    }

    /// Horizontal composite `(c₃, c₂, c₁) * (c₃′, c₂′, c₁′)`.
    pub fn hcompose(
        &self,
        s: (usize, usize, usize),
        t: (usize, usize, usize),
    ) -> Option<(usize, usize, usize)> {
        self.compose((s.0, s.1), (t.0, t.1))
            .map(|(x, y)| (x, y, self.complex.c1.add(s.2, t.2)))
    }

    /// Identity, associativity and interchange, exhaustively.
    pub fn check_laws(&self) -> Report {
        let c = &self.complex;
        let ones: Vec<(usize, usize)> = (0..c.c3.order())
            .flat_map(|x| (0..c.c2.order()).map(move |y| (x, y)))
            .collect();
        let mut r = Report::new();
        let mut bad = None;
        for &f in &ones {
            let l = self.compose((f.0, 0), f);
            let rt = self.compose(f, (self.target(f), 0));
            if l != Some(f) || rt != Some(f) {
                bad.get_or_insert(vec![f.0, f.1]);
            }
        }
        r.record("unit", ones.len(), bad);
        let mut bad = None;
        let mut checked = 0;
        for &f in &ones {
            for y in 0..c.c2.order() {
                let g = (self.target(f), y);
                for z in 0..c.c2.order() {
                    let h = (self.target(g), z);
                    checked += 1;
                    let a = self.compose(f, g).and_then(|fg| self.compose(fg, h));
                    let b = self.compose(g, h).and_then(|gh| self.compose(f, gh));
                    if a.is_none() || a != b {
                        bad.get_or_insert(vec![f.0, f.1, y, z]);
                    }
                }
            }
        }
        r.record("associative", checked, bad);
        let mut bad = None;
        let mut checked = 0;
        for &f in &ones {
            for a in 0..c.c1.order() {
                for b in 0..c.c1.order() {
                    checked += 1;
                    let s = (f.0, f.1, a);
                    let g = self.two_target(s);
                    let t = (g.0, g.1, b);
                    let st = self.vcompose(s, t);
                    if st.map(|x| self.two_target(x)) != Some(self.two_target(t)) {
                        bad.get_or_insert(vec![f.0, f.1, a, b]);
                    }
                    let k = (self.target(f), 0, b);
                    let h1 = self.hcompose(s, k);
                    let ok = h1.is_some_and(|h| {
                        self.two_target(h)
                            == self
                                .compose(self.two_target(s), self.two_target(k))
                                .unwrap_or((usize::MAX, 0))
                    });
                    if !ok {
                        bad.get_or_insert(vec![f.0, f.1, a, b]);
                    }
                }
            }
        }
        r.record("2-cells compose", checked, bad);
        r
    }
}

/// Quotient of the subgroup `sub` of `g` by the subgroup generated by `rel`,
/// as invariant factors.
fn quotient_factors(g: &FiniteAbelianGroup, sub: &[usize], rel: &[usize]) -> FiniteAbelianGroup {
    let mut uf = UnionFind::<usize>::new(g.order());
    for &x in sub {
        for &r in rel {
            uf.union(x, g.add(x, r));
        }
    }
    let mut classes: Vec<usize> = sub.iter().map(|&x| uf.find(x)).collect();
    classes.sort_unstable();
    classes.dedup();
    let idx = |x: usize| {
        classes
            .binary_search(&uf.find(x))
            .expect("closed under relations")
    };
    let reps: Vec<usize> = classes
        .iter()
        .map(|&c| {
            *sub.iter()
                .find(|&&x| uf.find(x) == c)
                .expect("nonempty class")
        })
        .collect();
    let table: Vec<Vec<usize>> = reps
        .iter()
        .map(|&x| reps.iter().map(|&y| idx(g.add(x, y))).collect())
        .collect();
    let f: Vec<u64> = invariant_factors_from_table(&table, idx(0))
        .into_iter()
        .filter(|&m| m > 1)
        .collect();
    FiniteAbelianGroup::new(&f)
}

/// `(π₀, π₁, π₂)`: isomorphism classes of objects, automorphisms of `0`
/// modulo 2-isomorphism, and 2-automorphisms of `id₀`.
pub fn homotopy_groups(
    d: &ChainBicategory,
) -> (FiniteAbelianGroup, FiniteAbelianGroup, FiniteAbelianGroup) {
    let c = &d.complex;
    let all3: Vec<usize> = (0..c.c3.order()).collect();
    let im2: Vec<usize> = (0..c.c2.order()).map(|y| c.d2[y]).collect();
    let pi0 = quotient_factors(&c.c3, &all3, &im2);
    let auts: Vec<usize> = (0..c.c2.order())
        .filter(|&y| d.target((0, y)) == 0)
        .collect();
    let im1: Vec<usize> = (0..c.c1.order()).map(|x| c.d1[x]).collect();
    let pi1 = quotient_factors(&c.c2, &auts, &im1);
    let two_auts: Vec<usize> = (0..c.c1.order())
        .filter(|&x| d.two_target((0, 0, x)) == (0, 0))
        .collect();
    let pi2 = quotient_factors(&c.c1, &two_auts, &[]);
    (pi0, pi1, pi2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n)
    }

    fn factors(g: &FiniteAbelianGroup) -> Vec<u64> {
        g.invariant_factors()
    }

    #[test]
    fn top_degree_only() {
        let c = ThreeTermComplex::new(
            FiniteAbelianGroup::trivial(),
            FiniteAbelianGroup::trivial(),
            z(2),
            vec![0],
            vec![0],
        )
        .unwrap();
        let (a, b, e) = homotopy_groups(&chain_bicategory(&c).unwrap());
        assert_eq!(
            (factors(&a), factors(&b), factors(&e)),
            (vec![2], vec![], vec![])
        );
    }

    #[test]
    fn doubling_on_z4() {
        let c = ThreeTermComplex::new(
            FiniteAbelianGroup::trivial(),
            z(4),
            z(4),
            vec![0],
            vec![0, 2, 0, 2],
        )
        .unwrap();
        let d = chain_bicategory(&c).unwrap();
        let (a, b, e) = homotopy_groups(&d);
        assert_eq!(
            (factors(&a), factors(&b), factors(&e)),
            (vec![2], vec![2], vec![])
        );
        assert!(d.check_laws().ok());
    }

    #[test]
    fn bottom_degree_only() {
        let c = ThreeTermComplex::new(
            z(3),
            FiniteAbelianGroup::trivial(),
            FiniteAbelianGroup::trivial(),
            vec![0; 3],
            vec![0],
        )
        .unwrap();
        let (a, b, e) = homotopy_groups(&chain_bicategory(&c).unwrap());
        assert_eq!(
            (factors(&a), factors(&b), factors(&e)),
            (vec![], vec![], vec![3])
        );
    }

    #[test]
    fn nonzero_square_rejected() {
        let r = ThreeTermComplex::new(z(2), z(2), z(2), vec![0, 1], vec![0, 1]);
        assert!(r.is_err());
    }

    #[test]
    fn random_complexes_are_complexes() {
        let mut rng = crate::random::rng(7);
        for _ in 0..30 {
            let c = ThreeTermComplex::random(&mut rng, 8);
            assert!(chain_bicategory(&c).is_ok());
        }
    }
}

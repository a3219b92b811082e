//! Seeded generators for randomized property suites.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bibundle::PrincipalBiset;
use crate::groupoid::{FiniteGroupoid, Functor, GroupTable};

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small groups used as isotropy: trivial, Z/2, Z/3, Z/4, Z/2×Z/2, S₃.
pub fn small_groups() -> Vec<GroupTable> {
    let z2 = GroupTable::cyclic(2);
    vec![
        GroupTable::trivial(),
        z2.clone(),
        GroupTable::cyclic(3),
        GroupTable::cyclic(4),
        GroupTable::product(&z2, &z2),
        GroupTable::symmetric(3),
    ]
}

/// A groupoid presented as a disjoint union of blocks `pair(n) × [pt/G]`.
#[derive(Clone, Debug)]
pub struct BlockGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    /// `(object offset, morphism offset, n, group)`.
    pub blocks: Vec<(usize, usize, usize, GroupTable)>,
}

impl BlockGroupoid {
    pub fn new(shape: &[(usize, GroupTable)]) -> Self {
        let mut g = FiniteGroupoid::discrete(0);
        let mut blocks = Vec::new();
        for (n, grp) in shape {
            let b = FiniteGroupoid::product(
                &FiniteGroupoid::pair_groupoid(*n),
                &FiniteGroupoid::delooping(grp),
            );
            blocks.push((g.n_objects(), g.n_morphisms(), *n, grp.clone()));
            g = FiniteGroupoid::disjoint_union(&g, &b);
        }
        BlockGroupoid {
            groupoid: Arc::new(g),
            blocks,
        }
    }

    pub fn random(r: &mut Rng8, max_objects: usize, max_group: usize) -> Self {
        let groups: Vec<GroupTable> = small_groups()
            .into_iter()
            .filter(|g| g.order() <= max_group)
            .collect();
        let total = r.gen_range(1..=max_objects);
        let mut shape = Vec::new();
        let mut left = total;
        while left > 0 {
            let n = r.gen_range(1..=left);
            shape.push((n, groups.choose(r).unwrap().clone()));
            left -= n;
        }
        Self::new(&shape)
    }

    /// Morphism index of `((a, b), g)` in block `i`.
    pub fn morphism(&self, i: usize, a: usize, b: usize, g: usize) -> usize {
        let (_, mo, n, ref grp) = self.blocks[i];
        mo + (a * n + b) * grp.order() + g
    }

    /// Block, local endpoints and group label of a morphism.
    pub fn decode(&self, f: usize) -> (usize, usize, usize, usize) {
        let i = self.blocks.iter().rposition(|b| b.1 <= f).unwrap();
        let (_, mo, n, ref grp) = self.blocks[i];
        let k = f - mo;
        let (pair, g) = (k / grp.order(), k % grp.order());
        (i, pair / n, pair % n, g)
    }

    /// A random functor: each block goes to a random block through a random
    /// object map and a random group homomorphism.
    pub fn random_functor(&self, cod: &BlockGroupoid, r: &mut Rng8) -> Functor {
        let plan: Vec<(usize, Vec<usize>, Vec<usize>)> = self
            .blocks
            .iter()
            .map(|(_, _, n, g)| {
                let j = r.gen_range(0..cod.blocks.len());
                let (_, _, m, ref h) = cod.blocks[j];
                let objs = (0..*n).map(|_| r.gen_range(0..m)).collect();
                let homs = g.homs_to(h);
                (j, objs, homs.choose(r).unwrap().clone())
            })
            .collect();
        Functor::from_mor(self.groupoid.clone(), cod.groupoid.clone(), |f| {
            let (i, a, b, g) = self.decode(f);
            let (j, ref objs, ref phi) = plan[i];
            cod.morphism(j, objs[a], objs[b], phi[g])
        })
    }
}

/// Same biset with its total set renumbered by a random permutation.
pub fn shuffle_biset(p: &PrincipalBiset, r: &mut Rng8) -> PrincipalBiset {
    let mut perm: Vec<usize> = (0..p.total()).collect();
    perm.shuffle(r);
    let mut d = p.to_data();
    let mut tau = vec![0; p.total()];
    let mut sigma = vec![0; p.total()];
    for i in 0..p.total() {
        tau[perm[i]] = d.tau[i];
        sigma[perm[i]] = d.sigma[i];
    }
    d.tau = tau;
    d.sigma = sigma;
    for e in d.left.iter_mut() {
        e[1] = perm[e[1]];
        e[2] = perm[e[2]];
    }
    for e in d.right.iter_mut() {
        e[0] = perm[e[0]];
        e[2] = perm[e[2]];
    }
    PrincipalBiset::from_data(&d, p.src.clone(), p.tgt.clone()).expect("shuffled biset")
}

use petgraph::unionfind::UnionFind;

use super::{FiniteGroupoid, GroupTable};

/// Composable chains by level; level 0 lists objects as 1-tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nerve {
    pub levels: Vec<Vec<Vec<usize>>>,
}

impl Nerve {
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }
}

pub fn nerve(g: &FiniteGroupoid, max_level: usize) -> Nerve {
    let mut levels = vec![(0..g.n_objects()).map(|x| vec![x]).collect::<Vec<_>>()];
    if max_level >= 1 {
        levels.push((0..g.n_morphisms()).map(|f| vec![f]).collect());
    }
    for _ in 2..=max_level {
        let prev = levels.last().unwrap();
        let next = prev
            .iter()
            .flat_map(|c| {
                let last = *c.last().unwrap();
                g.out(g.tgt(last)).iter().map(move |&h| {
                    let mut d = c.clone();
                    d.push(h);
                    d
                })
            })
            .collect();
        levels.push(next);
    }
    Nerve { levels }
}

#[derive(Clone, Debug)]
pub struct HomotopyInvariants {
    /// Component label of each object.
    pub component: Vec<usize>,
    /// Minimal object of each component.
    pub representatives: Vec<usize>,
    /// Automorphism group of each representative, elements listed in the
    /// order of `auts(rep)`, product "first then second".
    pub isotropy: Vec<GroupTable>,
}

impl HomotopyInvariants {
    pub fn n_components(&self) -> usize {
        self.representatives.len()
    }

    /// Same number of components and matching isotropy groups up to
    /// reordering.
    pub fn equivalent(&self, other: &HomotopyInvariants) -> bool {
        if self.n_components() != other.n_components() {
            return false;
        }
        let mut used = vec![false; other.n_components()];
        self.isotropy.iter().all(|g| {
            let hit = (0..other.n_components())
                .find(|&j| !used[j] && g.is_isomorphic(&other.isotropy[j]));
            hit.map(|j| used[j] = true).is_some()
        })
    }
}

pub fn homotopy_invariants(g: &FiniteGroupoid) -> HomotopyInvariants {
    let n = g.n_objects();
    let mut uf = UnionFind::<usize>::new(n);
    for f in 0..g.n_morphisms() {
        uf.union(g.src(f), g.tgt(f));
    }
    let mut label = vec![usize::MAX; n];
    let mut component = vec![0; n];
    let mut representatives = Vec::new();
    for x in 0..n {
        let r = uf.find(x);
        if label[r] == usize::MAX {
            label[r] = representatives.len();
            representatives.push(x);
        }
        component[x] = label[r];
    }
    let isotropy = representatives
        .iter()
        .map(|&x| automorphism_group(g, x))
        .collect();
    HomotopyInvariants {
        component,
        representatives,
        isotropy,
    }
}

pub(crate) fn automorphism_group(g: &FiniteGroupoid, x: usize) -> GroupTable {
    let auts = g.auts(x);
    GroupTable::from_fn(auts.len(), |a, b| {
        let c = g.comp(auts[a], auts[b]);
        auts.iter().position(|&k| k == c).unwrap()
    })
    .expect("automorphism group")
}

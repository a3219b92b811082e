use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::MonoidalGroupoid;
use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupData, GroupTable};
use crate::report::Violation;

/// `β: H → G` with a left action `act[g][h] = g·h` of `G` on `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedModule {
    pub h: GroupTable,
    pub g: GroupTable,
    pub beta: Vec<usize>,
    pub act: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CrossedModuleData {
    #[serde(default)]
    pub schema: Option<u32>,
    #[serde(rename = "H")]
    pub h: GroupData,
    #[serde(rename = "G")]
    pub g: GroupData,
    pub beta: Vec<usize>,
    pub act: Vec<Vec<usize>>,
}

impl CrossedModule {
    /// Trivial action; a crossed module when `H` is abelian and central in
    /// the image.
    pub fn with_trivial_action(h: GroupTable, g: GroupTable, beta: Vec<usize>) -> Self {
        let act = vec![(0..h.order()).collect(); g.order()];
        CrossedModule { h, g, beta, act }
    }

    /// `id: A → A` with conjugation.
    pub fn identity(a: &GroupTable) -> Self {
        let n = a.order();
        let act = (0..n)
            .map(|x| (0..n).map(|y| a.mul(a.mul(x, y), a.inv(x))).collect())
            .collect();
        CrossedModule {
            h: a.clone(),
            g: a.clone(),
            beta: (0..n).collect(),
            act,
        }
    }

    pub fn from_data(d: &CrossedModuleData) -> Result<Self> {
        let cm = CrossedModule {
            h: GroupTable::from_data(&d.h)?,
            g: GroupTable::from_data(&d.g)?,
            beta: d.beta.clone(),
            act: d.act.clone(),
        };
        match cm.check() {
            Some(v) => Err(Error::Malformed {
                field: "crossed module".into(),
                detail: v.to_string(),
            }),
            None => Ok(cm),
        }
    }

    pub fn to_data(&self) -> CrossedModuleData {
        CrossedModuleData {
            schema: Some(1),
            h: self.h.to_data(),
            g: self.g.to_data(),
            beta: self.beta.clone(),
            act: self.act.clone(),
        }
    }

    pub fn check(&self) -> Option<Violation> {
        let (h, g) = (&self.h, &self.g);
        let (nh, ng) = (h.order(), g.order());
        if self.beta.len() != nh || self.beta.iter().any(|&b| b >= ng) {
            return Some(Violation::new("beta table", vec![self.beta.len()]));
        }
        if self.act.len() != ng
            || self
                .act
                .iter()
                .any(|r| r.len() != nh || r.iter().any(|&y| y >= nh))
        {
            return Some(Violation::new("action table", vec![self.act.len()]));
        }
        if !h.is_hom_to(g, &self.beta) {
            return Some(Violation::new("beta not a homomorphism", vec![]));
        }
        for x in 0..ng {
            for a in 0..nh {
                for b in 0..nh {
                    if self.act[x][h.mul(a, b)] != h.mul(self.act[x][a], self.act[x][b]) {
                        return Some(Violation::new("action not by homomorphisms", vec![x, a, b]));
                    }
                }
            }
            for y in 0..ng {
                for a in 0..nh {
                    if self.act[g.mul(x, y)][a] != self.act[x][self.act[y][a]] {
                        return Some(Violation::new("not an action", vec![x, y, a]));
                    }
                }
            }
            for a in 0..nh {
                if self.beta[self.act[x][a]] != g.mul(g.mul(x, self.beta[a]), g.inv(x)) {
                    return Some(Violation::new("beta not equivariant", vec![x, a]));
                }
            }
        }
        for a in 0..nh {
            for b in 0..nh {
                if self.act[self.beta[a]][b] != h.mul(h.mul(a, b), h.inv(a)) {
                    return Some(Violation::new("Peiffer identity", vec![a, b]));
                }
            }
        }
        if (0..nh).any(|a| self.act[g.unit()][a] != a) {
            return Some(Violation::new("unit acts nontrivially", vec![]));
        }
        None
    }

    /// Strict 2-group: objects `G`, morphism `(g, h)` at `g·|H| + h` from
    /// `g` to `g β(h)`, composing by `h₀h₁`, with
    /// `(g, h) ⊗ (g', h') = (gg', (g'⁻¹·h) h')`.
    pub fn to_two_group(&self) -> Result<MonoidalGroupoid> {
        if let Some(v) = self.check() {
            return crate::error::invalid("crossed module", v.to_string());
        }
        let (h, g) = (&self.h, &self.g);
        let nh = h.order();
        let m = g.order() * nh;
        let src = (0..m).map(|f| f / nh).collect();
        let tgt = (0..m).map(|f| g.mul(f / nh, self.beta[f % nh])).collect();
        let gr = FiniteGroupoid::build(g.order(), src, tgt, |f0, f1| {
            (f0 / nh) * nh + h.mul(f0 % nh, f1 % nh)
        })?;
        let tensor = |f: usize, f2: usize| {
            let (x, a) = (f / nh, f % nh);
            let (y, b) = (f2 / nh, f2 % nh);
            g.mul(x, y) * nh + h.mul(self.act[g.inv(y)][a], b)
        };
        Ok(MonoidalGroupoid::strict(Arc::new(gr), tensor, g.unit()))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{is_two_group, verify_coherence};
    use super::*;
    use crate::groupoid::homotopy_invariants;

    fn realize(cm: &CrossedModule) -> MonoidalGroupoid {
        let md = cm.to_two_group().unwrap();
        assert!(verify_coherence(&md).ok());
        assert!(is_two_group(&md).holds());
        md
    }

    #[test]
    fn identity_module_is_contractible() {
        let md = realize(&CrossedModule::identity(&GroupTable::symmetric(3)));
        let inv = homotopy_invariants(&md.groupoid);
        assert_eq!(inv.n_components(), 1);
        assert_eq!(inv.isotropy[0].order(), 1);
    }

    #[test]
    fn kernel_and_cokernel() {
        let z2 = GroupTable::cyclic(2);
        let to_point = CrossedModule {
            h: z2.clone(),
            g: GroupTable::trivial(),
            beta: vec![0, 0],
            act: vec![vec![0, 1]],
        };
        let inv = homotopy_invariants(&realize(&to_point).groupoid);
        assert_eq!((inv.n_components(), inv.isotropy[0].order()), (1, 2));
        let from_point = CrossedModule {
            h: GroupTable::trivial(),
            g: z2,
            beta: vec![0],
            act: vec![vec![0], vec![0]],
        };
        let inv = homotopy_invariants(&realize(&from_point).groupoid);
        assert_eq!((inv.n_components(), inv.isotropy[0].order()), (2, 1));
    }

    #[test]
    fn z4_onto_z2_is_not_split() {
        let (z4, z2) = (GroupTable::cyclic(4), GroupTable::cyclic(2));
        let cm = CrossedModule::with_trivial_action(z4, z2, vec![0, 1, 0, 1]);
        assert_eq!(cm.check(), None);
        let inv = homotopy_invariants(&realize(&cm).groupoid);
        assert_eq!((inv.n_components(), inv.isotropy[0].order()), (1, 2));
    }

    #[test]
    fn bad_peiffer_is_reported() {
        let s3 = GroupTable::symmetric(3);
        let triv = vec![(0..6).collect::<Vec<_>>(); 1];
        let cm = CrossedModule {
            h: s3,
            g: GroupTable::trivial(),
            beta: vec![0; 6],
            act: triv,
        };
        assert_eq!(cm.check().unwrap().check, "Peiffer identity");
    }
}

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{MonoidalGroupoid, TwoGroupHom};
use crate::cohomology::{
    bar_differential, invariant_factors_from_table, ActionData, Cochain, FiniteAbelianGroup,
    GAction, ModuleData,
};
use crate::error::{invalid, Result};
use crate::groupoid::{homotopy_invariants, FiniteGroupoid, Functor, GroupData, GroupTable};

/// `(π₀, π₁, ρ, α)` with `α` a 3-cochain of `π₀` in `π₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletalTwoGroup {
    pub pi0: GroupTable,
    pub pi1: FiniteAbelianGroup,
    pub rho: GAction,
    pub alpha: Cochain,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SkeletalData {
    #[serde(default)]
    pub schema: Option<u32>,
    pub pi0: GroupData,
    pub pi1: ModuleData,
    #[serde(default)]
    pub rho: Option<ActionData>,
    pub alpha: Value,
}

impl SkeletalTwoGroup {
    pub fn from_data(d: &SkeletalData) -> Result<Self> {
        let pi0 = GroupTable::from_data(&d.pi0)?;
        let pi1 = FiniteAbelianGroup::from_data(&d.pi1)?;
        let rho = match &d.rho {
            Some(r) => GAction::from_data(&pi0, &pi1, r)?,
            None => GAction::trivial(&pi0, &pi1),
        };
        let alpha = Cochain::from_json(&pi0, &pi1, 3, &d.alpha)?;
        Ok(SkeletalTwoGroup {
            pi0,
            pi1,
            rho,
            alpha,
        })
    }

    pub fn to_data(&self) -> SkeletalData {
        SkeletalData {
            schema: Some(1),
            pi0: self.pi0.to_data(),
            pi1: ModuleData {
                schema: None,
                moduli: self.pi1.moduli().to_vec(),
            },
            rho: Some(self.rho.to_data(&self.pi1)),
            alpha: self.alpha.to_json(&self.pi0),
        }
    }

    /// First quadruple where `δα` is nonzero.
    pub fn cocycle_failure(&self) -> Option<Vec<usize>> {
        let d = bar_differential(&self.alpha, &self.pi0, &self.pi1, &self.rho);
        let n = self.pi0.order();
        d.values
            .iter()
            .position(|&v| v != 0)
            .map(|i| crate::cohomology::bar::tuple_of(n, 4, i))
    }
}

/// Realizes a skeletal 2-group, refusing a non-cocycle `α`.
pub fn realize_skeletal(s: &SkeletalTwoGroup) -> Result<MonoidalGroupoid> {
    if let Some(v) = s.rho.check(&s.pi0, &s.pi1) {
        return invalid("action", v.to_string());
    }
    if let Some(w) = s.cocycle_failure() {
        return invalid("associator", format!("not a 3-cocycle at {w:?}"));
    }
    Ok(realize_skeletal_unchecked(s))
}

/// Objects `π₀`, morphism `(g, a)` at `g·|π₁| + a` an automorphism of `g`,
/// composition by addition, `(g, a) ⊗ (h, b) = (gh, a + ρ(g)b)`,
/// associator `α`, `l(y) = −α(e,e,y)` and `r(x) = α(x,e,e)`. The pentagon
/// holds exactly when `α` is a cocycle.
pub fn realize_skeletal_unchecked(s: &SkeletalTwoGroup) -> MonoidalGroupoid {
    let (g, a) = (&s.pi0, &s.pi1);
    let na = a.order();
    let m = g.order() * na;
    let src: Vec<usize> = (0..m).map(|f| f / na).collect();
    let gr = FiniteGroupoid::build(g.order(), src.clone(), src, |f, h| {
        (f / na) * na + a.add(f % na, h % na)
    })
    .expect("skeletal groupoid");
    let e = g.unit();
    MonoidalGroupoid::new(
        Arc::new(gr),
        |f, h| g.mul(f / na, h / na) * na + a.add(f % na, s.rho.act(f / na, h % na)),
        e,
        |x, y, z| g.mul(g.mul(x, y), z) * na + s.alpha.at(g, &[x, y, z]),
        |y| y * na + a.neg(s.alpha.at(g, &[e, e, y])),
        |x| x * na + s.alpha.at(g, &[x, e, e]),
    )
}

/// A skeletal model together with an inverse pair of 2-group homs.
#[derive(Clone, Debug)]
pub struct Skeletalization {
    pub skeletal: SkeletalTwoGroup,
    pub realized: Arc<MonoidalGroupoid>,
    /// `S → Γ`.
    pub to_original: TwoGroupHom,
    /// `Γ → S`.
    pub from_original: TwoGroupHom,
    /// Chosen object in each class; the unit class uses `e`.
    pub representatives: Vec<usize>,
}

/// Reads off `(π₀, π₁, ρ, α)`.
///
/// With `s_g` the chosen objects and `ψ(g,h): s_g ⊗ s_h → s_{gh}` fixed
/// (unitors when a factor is the unit class), `π₁ = Aut(e)` is transported
/// to `Aut(s_g)` by `ι_g(a) = l⁻¹;(a⊗id);l`, and `α(g,h,k)` is the loop
/// `((ψ⊗id);ψ)⁻¹; a;(id⊗ψ);ψ` read back through `ι`.
pub fn skeletalize(md: &Arc<MonoidalGroupoid>) -> Result<Skeletalization> {
    let gr = &*md.groupoid;
    let inv = homotopy_invariants(gr);
    let k = inv.n_components();
    let cls = inv.component.clone();
    let mut reps = inv.representatives.clone();
    reps[cls[md.unit]] = md.unit;
    let pi0 = GroupTable::from_fn(k, |c, d| cls[md.t(reps[c], reps[d])]).map_err(|v| {
        crate::Error::Invalid {
            what: "2-group",
            detail: format!("components: {v}"),
        }
    })?;

    let auts = gr.auts(md.unit);
    let aut_group = GroupTable::from_fn(auts.len(), |x, y| {
        let c = gr.comp(auts[x], auts[y]);
        auts.iter().position(|&t| t == c).unwrap()
    })
    .expect("automorphism group");
    if !aut_group.is_abelian() {
        return invalid("2-group", "automorphisms of the unit do not commute");
    }
    let factors = invariant_factors_from_table(&aut_group.rows(), aut_group.unit());
    let pi1 = FiniteAbelianGroup::new(&factors);
    let phi_pos = pi1
        .as_group()
        .find_isomorphism(&aut_group)
        .expect("same invariant factors");
    let phi = phi_pos.iter().map(|&i| auts[i]).collect();
    skeletalize_with(
        md,
        SkeletonChoice {
            cls,
            reps,
            pi0,
            pi1,
            phi,
        },
    )
}

/// Identifications used to read off a skeleton: the class of each object,
/// one object per class (the unit's class uses the unit), and
/// `phi[a] ∈ Aut(e)`.
#[derive(Clone, Debug)]
pub struct SkeletonChoice {
    pub cls: Vec<usize>,
    pub reps: Vec<usize>,
    pub pi0: GroupTable,
    pub pi1: FiniteAbelianGroup,
    pub phi: Vec<usize>,
}

pub fn skeletalize_with(
    md: &Arc<MonoidalGroupoid>,
    choice: SkeletonChoice,
) -> Result<Skeletalization> {
    let gr = &*md.groupoid;
    let SkeletonChoice {
        cls,
        reps,
        pi0,
        pi1,
        phi,
    } = choice;
    let k = pi0.order();
    let e_cls = cls[md.unit];
    if reps.len() != k || reps[e_cls] != md.unit || (0..md.n_objects()).any(|x| cls[x] >= k) {
        return invalid("skeleton", "class data does not match the groupoid");
    }
    if let Some(x) = (0..md.n_objects()).find(|&x| gr.first_hom(reps[cls[x]], x).is_none()) {
        return invalid(
            "skeleton",
            format!("object {x} is not isomorphic to its representative"),
        );
    }
    if let Some((c, d)) = (0..k * k)
        .map(|i| (i / k, i % k))
        .find(|&(c, d)| cls[md.t(reps[c], reps[d])] != pi0.mul(c, d))
    {
        return invalid(
            "skeleton",
            format!("product of classes {c}, {d} disagrees with the given group"),
        );
    }
    let cls = |x: usize| cls[x];
    let phi = |a: usize| phi[a];
    let na = pi1.order();

    // ι tables and their inverse over morphism ids
    let mut iota = vec![vec![0usize; na]; k];
    let mut iota_inv = vec![usize::MAX; gr.n_morphisms()];
    for c in 0..k {
        let s = reps[c];
        let l = md.l(s);
        for a in 0..na {
            let f = gr.path(&[gr.inv(l), md.tm(phi(a), md.id(s)), l]);
            iota[c][a] = f;
            iota_inv[f] = a;
        }
    }
    if (0..k).any(|c| gr.auts(reps[c]).iter().any(|&f| iota_inv[f] == usize::MAX)) {
        return invalid(
            "2-group",
            "left translation is not bijective on automorphisms",
        );
    }
    let rho_tab: Vec<Vec<usize>> = (0..k)
        .map(|c| {
            let r = md.r(reps[c]);
            (0..na)
                .map(|a| iota_inv[gr.path(&[gr.inv(r), md.tm(md.id(reps[c]), phi(a)), r])])
                .collect()
        })
        .collect();
    let rho = GAction::from_tables(rho_tab);
    if let Some(v) = rho.check(&pi0, &pi1) {
        return invalid("2-group", format!("induced action: {v}"));
    }

    let psi = |c: usize, d: usize| -> usize {
        if c == e_cls {
            md.l(reps[d])
        } else if d == e_cls {
            md.r(reps[c])
        } else {
            gr.first_hom(md.t(reps[c], reps[d]), reps[pi0.mul(c, d)])
                .expect("same component")
        }
    };
    let alpha = Cochain::from_fn(&pi0, 3, |t| {
        let (c0, c1, c2) = (t[0], t[1], t[2]);
        let (s0, s1, s2) = (reps[c0], reps[c1], reps[c2]);
        let (c01, c12) = (pi0.mul(c0, c1), pi0.mul(c1, c2));
        let p1 = gr.comp(md.tm(psi(c0, c1), md.id(s2)), psi(c01, c2));
        let p2 = gr.path(&[
            md.a(s0, s1, s2),
            md.tm(md.id(s0), psi(c1, c2)),
            psi(c0, c12),
        ]);
        iota_inv[gr.comp(gr.inv(p1), p2)]
    });
    let skeletal = SkeletalTwoGroup {
        pi0: pi0.clone(),
        pi1,
        rho,
        alpha,
    };
    let realized = Arc::new(realize_skeletal(&skeletal)?);
    let sg = &*realized.groupoid;

    let f_functor = Functor::from_mor(realized.groupoid.clone(), md.groupoid.clone(), |f| {
        iota[f / na][f % na]
    });
    let to_original =
        TwoGroupHom::new(realized.clone(), md.clone(), f_functor, psi, md.id(md.unit));

    let chi: Vec<usize> = (0..md.n_objects())
        .map(|x| {
            let s = reps[cls(x)];
            if s == x {
                md.id(x)
            } else {
                gr.first_hom(s, x).unwrap()
            }
        })
        .collect();
    let label = |f: usize| iota_inv[f];
    let g_mor: Vec<usize> = (0..gr.n_morphisms())
        .map(|f| {
            let (x, y) = (gr.src(f), gr.tgt(f));
            cls(x) * na + label(gr.path(&[chi[x], f, gr.inv(chi[y])]))
        })
        .collect();
    let g_obj = (0..md.n_objects()).map(cls).collect();
    let g_functor = Functor::new(md.groupoid.clone(), realized.groupoid.clone(), g_obj, g_mor);
    let from_original = TwoGroupHom::new(
        md.clone(),
        realized.clone(),
        g_functor,
        |x, y| {
            let xy = md.t(x, y);
            let loop_ = gr.path(&[
                gr.inv(psi(cls(x), cls(y))),
                md.tm(chi[x], chi[y]),
                gr.inv(chi[xy]),
            ]);
            cls(xy) * na + label(loop_)
        },
        sg.ident(pi0.unit()),
    );
    Ok(Skeletalization {
        skeletal,
        realized,
        to_original,
        from_original,
        representatives: reps,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{check_hom, find_two_hom, is_two_group, verify_coherence, CrossedModule};
    use super::*;
    use crate::cohomology::cohomology_group_with;

    fn z2_nontrivial() -> SkeletalTwoGroup {
        let g = GroupTable::cyclic(2);
        let a = FiniteAbelianGroup::cyclic(2);
        let alpha = Cochain::from_fn(&g, 3, |t| (t == [1, 1, 1]) as usize);
        SkeletalTwoGroup {
            rho: GAction::trivial(&g, &a),
            pi0: g,
            pi1: a,
            alpha,
        }
    }

    #[test]
    fn nontrivial_z2_associator_is_coherent() {
        let md = realize_skeletal(&z2_nontrivial()).unwrap();
        let rep = verify_coherence(&md);
        assert!(rep.ok());
        assert_eq!(rep.get("pentagon").unwrap().checked, 16);
        assert!(is_two_group(&md).holds());
    }

    #[test]
    fn non_cocycle_is_refused_with_witness() {
        let mut s = z2_nontrivial();
        s.alpha = Cochain::from_fn(&s.pi0, 3, |t| (t == [1, 1, 0]) as usize);
        assert!(s.cocycle_failure().is_some());
        assert!(realize_skeletal(&s).is_err());
        let md = realize_skeletal_unchecked(&s);
        assert!(!verify_coherence(&md).ok());
    }

    #[test]
    fn skeletal_round_trip_is_cohomologous() {
        let s = z2_nontrivial();
        let md = Arc::new(realize_skeletal(&s).unwrap());
        let sk = skeletalize(&md).unwrap();
        let h = cohomology_group_with(&s.pi0, &s.pi1, &s.rho, 3, false).unwrap();
        assert!(h.cohomologous(&sk.skeletal.alpha, &s.alpha).is_some());
        assert!(sk.skeletal.alpha.is_normalized(&s.pi0));
    }

    #[test]
    fn equivalence_pair_is_coherent_and_invertible() {
        let z4 = GroupTable::cyclic(4);
        let cm = CrossedModule::with_trivial_action(z4, GroupTable::cyclic(2), vec![0, 1, 0, 1]);
        let md = Arc::new(cm.to_two_group().unwrap());
        let sk = skeletalize(&md).unwrap();
        assert!(check_hom(&sk.to_original).ok());
        assert!(check_hom(&sk.from_original).ok());
        let there = sk.to_original.then(&sk.from_original);
        assert!(find_two_hom(&there, &TwoGroupHom::identity(&sk.realized)).is_some());
        let back = sk.from_original.then(&sk.to_original);
        assert!(find_two_hom(&back, &TwoGroupHom::identity(&md)).is_some());
    }

    #[test]
    fn json_round_trip() {
        let s = z2_nontrivial();
        let text = serde_json::to_string(&s.to_data()).unwrap();
        let back = SkeletalTwoGroup::from_data(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}

use std::collections::HashMap;
use std::sync::Arc;

use super::{bundlize, compose_bibundles, find_isomorphism, BibundleMap, PrincipalBiset};
use crate::error::{invalid, Result};
use crate::groupoid::{same, FiniteGroupoid, Functor};

#[derive(Clone, Debug)]
pub struct Pullback {
    pub groupoid: Arc<FiniteGroupoid>,
    /// Projection to the source of `g`.
    pub p1: Functor,
    /// Projection to the source of `f`.
    pub p2: Functor,
    pub proj1: PrincipalBiset,
    pub proj2: PrincipalBiset,
    /// `g ∘ ⟨p1⟩`.
    pub left_square: PrincipalBiset,
    /// `f ∘ ⟨p2⟩`.
    pub right_square: PrincipalBiset,
    /// Isomorphism `left_square → right_square`.
    pub witness: BibundleMap,
    /// Morphisms as `(α, c, β)`.
    pub morphisms: Vec<(usize, usize, usize)>,
}

/// Pullback of `f: Z → Y` and `g: X → Y`. Objects are the classes of
/// `ḡ ∘ f` (with `ḡ` the flipped biset `Y → X`), morphisms are triples
/// `(α, c, β)` from `c` to `α·c·β⁻¹`, composed componentwise.
pub fn pullback(f: &PrincipalBiset, g: &PrincipalBiset) -> Result<Pullback> {
    if !same(&f.tgt, &g.tgt) {
        return invalid("cospan", "bisets have different targets");
    }
    let (x, z) = (g.src.clone(), f.src.clone());
    let ob = compose_bibundles(&g.flip(), f);
    let mut morphisms = Vec::new();
    for c in 0..ob.total() {
        for &a in x.out(ob.tau[c]) {
            for &b in z.out(ob.sigma[c]) {
                morphisms.push((a, c, b));
            }
        }
    }
    let index: HashMap<(usize, usize, usize), usize> =
        morphisms.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let target = |&(a, c, b): &(usize, usize, usize)| ob.r(ob.l(a, c), z.inv(b));
    let gamma = FiniteGroupoid::build(
        ob.total(),
        morphisms.iter().map(|m| m.1).collect(),
        morphisms.iter().map(target).collect(),
        |i, j| {
            let (a, c, b) = morphisms[i];
            let (a2, _, b2) = morphisms[j];
            index[&(x.comp(a, a2), c, z.comp(b, b2))]
        },
    )?;
    let gamma = Arc::new(gamma);
    let p1 = Functor::new(
        gamma.clone(),
        x.clone(),
        ob.tau.clone(),
        morphisms.iter().map(|m| m.0).collect(),
    );
    let p2 = Functor::new(
        gamma.clone(),
        z.clone(),
        ob.sigma.clone(),
        morphisms.iter().map(|m| m.2).collect(),
    );
    let proj1 = bundlize(&p1);
    let proj2 = bundlize(&p2);
    let left_square = compose_bibundles(g, &proj1);
    let right_square = compose_bibundles(f, &proj2);
    let Some(witness) = find_isomorphism(&left_square, &right_square) else {
        return invalid("pullback", "square does not commute up to isomorphism");
    };
    Ok(Pullback {
        groupoid: gamma,
        p1,
        p2,
        proj1,
        proj2,
        left_square,
        right_square,
        witness,
        morphisms,
    })
}

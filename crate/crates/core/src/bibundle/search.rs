use super::{bundlize, BibundleMap, PrincipalBiset};
use crate::groupoid::Functor;

/// Equivariant bijection `P → Q`, by backtracking over the image of one
/// point per action orbit and propagating along both actions.
pub fn find_isomorphism(p: &PrincipalBiset, q: &PrincipalBiset) -> Option<BibundleMap> {
    if !p.same_endpoints(q) || p.total() != q.total() {
        return None;
    }
    let mut phi = vec![usize::MAX; p.total()];
    let mut used = vec![false; q.total()];
    search(p, q, &mut phi, &mut used).then_some(BibundleMap { carrier: phi })
}

pub fn isomorphic(p: &PrincipalBiset, q: &PrincipalBiset) -> bool {
    find_isomorphism(p, q).is_some()
}

fn search(
    p: &PrincipalBiset,
    q: &PrincipalBiset,
    phi: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let Some(seed) = phi.iter().position(|&x| x == usize::MAX) else {
        return true;
    };
    for cand in 0..q.total() {
        if used[cand] || q.tau[cand] != p.tau[seed] || q.sigma[cand] != p.sigma[seed] {
            continue;
        }
        let mut assigned = Vec::new();
        if propagate(p, q, seed, cand, phi, used, &mut assigned) && search(p, q, phi, used) {
            return true;
        }
        for a in assigned {
            used[phi[a]] = false;
            phi[a] = usize::MAX;
        }
    }
    false
}

fn propagate(
    p: &PrincipalBiset,
    q: &PrincipalBiset,
    seed: usize,
    cand: usize,
    phi: &mut [usize],
    used: &mut [bool],
    assigned: &mut Vec<usize>,
) -> bool {
    let mut stack = vec![(seed, cand)];
    while let Some((a, b)) = stack.pop() {
        if phi[a] != usize::MAX {
            if phi[a] != b {
                return false;
            }
            continue;
        }
        if used[b] || q.tau[b] != p.tau[a] || q.sigma[b] != p.sigma[a] {
            return false;
        }
        phi[a] = b;
        used[b] = true;
        assigned.push(a);
        for &g in p.tgt.out(p.tau[a]) {
            stack.push((p.l(g, a), q.l(g, b)));
        }
        for k in p.src.hom_into(p.sigma[a]) {
            stack.push((p.r(a, k), q.r(b, k)));
        }
    }
    true
}

/// A section of `σ` together with the functor it induces.
#[derive(Clone, Debug)]
pub struct Section {
    pub section: Vec<usize>,
    /// Number of sections of `σ` (each gives a naturally isomorphic functor).
    pub choices: u128,
    pub functor: Functor,
    /// Isomorphism `⟨functor⟩ → P`.
    pub iso: BibundleMap,
}

/// Picks the least point in each `σ`-fiber and reads off the functor
/// `f(h) = g` where `g·s(a) = s(b)·h` for `h: a → b`.
pub fn find_section(p: &PrincipalBiset) -> Option<Section> {
    let h = &p.src;
    let mut section = Vec::with_capacity(h.n_objects());
    let mut choices: u128 = 1;
    for x in 0..h.n_objects() {
        let fiber: Vec<usize> = (0..p.total()).filter(|&a| p.sigma[a] == x).collect();
        section.push(*fiber.first()?);
        choices = choices.saturating_mul(fiber.len() as u128);
    }
    let obj = section.iter().map(|&a| p.tau[a]).collect();
    let mor = (0..h.n_morphisms())
        .map(|k| p.transporter(section[h.src(k)], p.r(section[h.tgt(k)], k)))
        .collect::<Option<Vec<usize>>>()?;
    let functor = Functor::new(h.clone(), p.tgt.clone(), obj, mor);
    if functor.check().is_some() {
        return None;
    }
    let b = bundlize(&functor);
    // element (x, g) of the bundlization is listed by x, then g in out(f(x))
    let mut carrier = Vec::with_capacity(b.total());
    for x in 0..h.n_objects() {
        for &g in p.tgt.out(functor.obj[x]) {
            carrier.push(p.l(g, section[x]));
        }
    }
    let iso = BibundleMap { carrier };
    if iso.check(&b, p).is_some() || !iso.is_bijective(p.total()) {
        return None;
    }
    Some(Section {
        section,
        choices,
        functor,
        iso,
    })
}

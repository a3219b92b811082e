use std::collections::HashMap;

use petgraph::unionfind::UnionFind;

use super::PrincipalBiset;
use crate::groupoid::same;

/// `P ∘ Q` for `P: H → G`, `Q: K → H`: the quotient of `P ×_{H₀} Q` by
/// `(p·h, q) ~ (p, h·q)`. Classes are numbered by their least pair, pairs
/// being ordered by `p` then `q`.
pub fn compose_bibundles(p: &PrincipalBiset, q: &PrincipalBiset) -> PrincipalBiset {
    assert!(same(&p.src, &q.tgt), "bisets not composable");
    let h = &*p.src;
    let mut pairs = Vec::new();
    for a in 0..p.total() {
        for b in 0..q.total() {
            if p.sigma[a] == q.tau[b] {
                pairs.push((a, b));
            }
        }
    }
    let index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut uf = UnionFind::<usize>::new(pairs.len());
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for k in h.hom_into(p.sigma[a]) {
            // (a·k, k⁻¹·b) ~ (a, b)
            let ak = p.r(a, k);
            let c = q.l(h.inv(k), b);
            uf.union(i, index[&(ak, c)]);
        }
    }
    let mut class = vec![usize::MAX; pairs.len()];
    let mut reps = Vec::new();
    for i in 0..pairs.len() {
        let r = uf.find(i);
        if class[r] == usize::MAX {
            class[r] = reps.len();
            reps.push(i);
        }
    }
    let cls = |a: usize, b: usize| class[uf.find(index[&(a, b)])];
    let tau = reps.iter().map(|&i| p.tau[pairs[i].0]).collect();
    let sigma = reps.iter().map(|&i| q.sigma[pairs[i].1]).collect();
    PrincipalBiset::new(
        q.src.clone(),
        p.tgt.clone(),
        tau,
        sigma,
        |g, c| {
            let (a, b) = pairs[reps[c]];
            cls(p.l(g, a), b)
        },
        |c, k| {
            let (a, b) = pairs[reps[c]];
            cls(a, q.r(b, k))
        },
    )
}

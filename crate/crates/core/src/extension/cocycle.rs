use std::sync::Arc;

use super::gerbe::{gerbe_from_cech, GerbeOverX};
use super::{check_extension, complete_extension_morphism, CentralExtension, ExtensionMorphism};
use crate::cohomology::{DoubleComplex, SimplicialCover, TotalCochain};
use crate::error::{invalid, Error, Result};
use crate::twogroup::{check_two_hom, MonoidalGroupoid, TwoGroupHom, TwoHom};

/// What an extension was built from.
#[derive(Clone, Debug)]
pub struct CocycleSource {
    pub cover: SimplicialCover,
    pub lambda: TotalCochain,
    pub gerbe: GerbeOverX,
}

/// Dense views of `λ₂` and `λ₃` and the chosen lifts to `U₂`, `U₃`.
struct Tables<'a> {
    cover: &'a SimplicialCover,
    ng: usize,
    n2: usize,
    lam2: Vec<usize>,
    lam3: Vec<usize>,
    lift2: Vec<usize>,
    lift3: Vec<usize>,
}

impl<'a> Tables<'a> {
    fn new(dc: &'a DoubleComplex, lambda: &TotalCochain) -> Self {
        let cover = &dc.cover;
        let ng = cover.group.order();
        let (n2, n3) = (cover.size(2), cover.size(3));
        let b12 = dc.block(1, 2).expect("block (1, 2)");
        let l2 = lambda.lambda(2);
        let mut lam2 = vec![0; n2 * n2];
        for (i, cell) in b12.cells.iter().enumerate() {
            lam2[cell[0] as usize * n2 + cell[1] as usize] = l2[i];
        }
        let b03 = dc.block(0, 3).expect("block (0, 3)");
        let l3 = lambda.lambda(3);
        let mut lam3 = vec![0; n3];
        for (i, cell) in b03.cells.iter().enumerate() {
            lam3[cell[0] as usize] = l3[i];
        }
        let first = |q: usize, t: usize| {
            (0..cover.size(q))
                .find(|&u| cover.levels[q].proj[u] == t)
                .unwrap()
        };
        let lift2 = (0..ng * ng).map(|t| first(2, t)).collect();
        let lift3 = (0..ng * ng * ng).map(|t| first(3, t)).collect();
        Tables {
            cover,
            ng,
            n2,
            lam2,
            lam3,
            lift2,
            lift3,
        }
    }

    #[inline]
    fn face(&self, q: usize, i: usize, u: usize) -> usize {
        self.cover.levels[q].faces[i][u]
    }

    #[inline]
    fn proj1(&self, u: usize) -> usize {
        self.cover.levels[1].proj[u]
    }

    fn lift(&self, x: usize, y: usize) -> usize {
        self.lift2[self.proj1(x) * self.ng + self.proj1(y)]
    }
}

/// `μ` on `F`: the pair `(c₁: d₂v → d₂v', c₂: d₀v → d₀v')` goes to
/// `(d₁v, d₁v', c₁ + c₂ + λ₂(v, v'))`.
fn mu(gb: &GerbeOverX, t: &Tables, v: usize, v2: usize, c1: usize, c2: usize) -> usize {
    let a = &gb.a;
    let lab = a.add(a.add(gb.label(c1), gb.label(c2)), t.lam2[v * t.n2 + v2]);
    gb.morphism(t.face(2, 1, v), t.face(2, 1, v2), lab)
}

/// `E^λ` with its tensor, associator and unit data.
///
/// Objects are `U₁` and the underlying groupoid is the gerbe of `λ₁`. With
/// `v(x, y)` the least point of `U₂` over `(πx, πy)`, `x ⊗ y = d₁v(x, y)`;
/// on morphisms the tensor is `μ` after moving `(f, h)` to the faces of
/// `v` along label-zero connections. The associator at `(x, y, z)` runs
/// through the faces of the least `w ∈ U₃` over `(πx, πy, πz)`, with the
/// loop at `d₁d₁w` shifted by `λ₃(w)`. The unit is `s₀` of the first point
/// of `U₀`, `ι: e⊗e → e` is the label-zero connection, and the unitors are
/// the unique solutions of `id_e ⊗ l_x = a(e,e,x)⁻¹ ; (ι ⊗ id_x)` and
/// `r_x ⊗ id_e = a(x,e,e) ; (id_x ⊗ ι)`.
fn total_two_group(
    dc: &DoubleComplex,
    lambda: &TotalCochain,
) -> Result<(GerbeOverX, Arc<MonoidalGroupoid>, usize)> {
    let cover = &dc.cover;
    let g = &cover.group;
    let a = &dc.a;
    let na = a.order();
    let b21 = dc.block(2, 1).expect("block (2, 1)");
    let l1 = lambda.lambda(1);
    let gb = gerbe_from_cech(&cover.levels[1].proj, g.order(), a, |u0, u1, u2| {
        l1[b21.index(&[u0 as u32, u1 as u32, u2 as u32])]
    })?;
    let t = Tables::new(dc, lambda);
    let gr = gb.groupoid.clone();
    let m = gr.n_morphisms();
    let eps = |u: usize, x: usize| gb.connection(u, x);
    let to = |x: usize, u: usize| gr.inv(gb.connection(u, x));
    let tobj = |x: usize, y: usize| t.face(2, 1, t.lift(x, y));
    let tmor = |f: usize, h: usize| {
        let (x, x2, y, y2) = (gr.src(f), gr.tgt(f), gr.src(h), gr.tgt(h));
        let (v, v2) = (t.lift(x, y), t.lift(x2, y2));
        let c1 = gr.path(&[eps(t.face(2, 2, v), x), f, to(x2, t.face(2, 2, v2))]);
        let c2 = gr.path(&[eps(t.face(2, 0, v), y), h, to(y2, t.face(2, 0, v2))]);
        mu(&gb, &t, v, v2, c1, c2)
    };
    let tensor: Vec<usize> = (0..m * m).map(|i| tmor(i / m, i % m)).collect();
    let tm = |f: usize, h: usize| tensor[f * m + h];
    let ng = g.order();
    let assoc = |x: usize, y: usize, z: usize| {
        let (px, py, pz) = (t.proj1(x), t.proj1(y), t.proj1(z));
        let w = t.lift3[(px * ng + py) * ng + pz];
        let d = |i: usize| t.face(3, i, w);
        let e2 = |v: usize, j: usize| t.face(2, j, v);
        let (xy, yz) = (tobj(x, y), tobj(y, z));
        let (vxy, vyz) = (t.lift(x, y), t.lift(y, z));
        // (x⊗y)⊗z → d₁d₁w through d₃w then d₁w
        let inner = mu(
            &gb,
            &t,
            vxy,
            d(3),
            gr.comp(eps(e2(vxy, 2), x), to(x, e2(d(3), 2))),
            gr.comp(eps(e2(vxy, 0), y), to(y, e2(d(3), 0))),
        );
        let v1 = t.lift(xy, z);
        let p1 = mu(
            &gb,
            &t,
            v1,
            d(1),
            gr.comp(eps(e2(v1, 2), xy), inner),
            gr.comp(eps(e2(v1, 0), z), to(z, e2(d(1), 0))),
        );
        // x⊗(y⊗z) → d₁d₂w through d₀w then d₂w
        let inner = mu(
            &gb,
            &t,
            vyz,
            d(0),
            gr.comp(eps(e2(vyz, 2), y), to(y, e2(d(0), 2))),
            gr.comp(eps(e2(vyz, 0), z), to(z, e2(d(0), 0))),
        );
        let v2 = t.lift(x, yz);
        let p2 = mu(
            &gb,
            &t,
            v2,
            d(2),
            gr.comp(eps(e2(v2, 2), x), to(x, e2(d(2), 2))),
            gr.comp(eps(e2(v2, 0), yz), inner),
        );
        let ell = gr.tgt(p1);
        debug_assert_eq!(ell, gr.tgt(p2));
        gr.path(&[p1, gb.shift(gr.ident(ell), t.lam3[w]), gr.inv(p2)])
    };
    let n = gr.n_objects();
    let assoc_tab: Vec<usize> = (0..n * n * n)
        .map(|i| assoc(i / (n * n), (i / n) % n, i % n))
        .collect();
    let a_at = |x: usize, y: usize, z: usize| assoc_tab[(x * n + y) * n + z];
    let e = cover.levels[0].degens[0][0];
    if t.proj1(e) != g.unit() {
        return invalid("cover", "the degenerate point does not lie over the unit");
    }
    let iota = eps(tobj(e, e), e);
    let solve = |from: usize, to_obj: usize, want: &dyn Fn(usize) -> bool| -> Result<usize> {
        (0..na)
            .map(|s| gb.morphism(from, to_obj, s))
            .find(|&c| want(c))
            .ok_or_else(|| Error::Invalid {
                what: "unit",
                detail: format!("no unitor at object {to_obj}"),
            })
    };
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for x in 0..n {
        let lhs = gr.comp(gr.inv(a_at(e, e, x)), tm(iota, gr.ident(x)));
        left.push(solve(tobj(e, x), x, &|c| tm(gr.ident(e), c) == lhs)?);
        let rhs = gr.comp(a_at(x, e, e), tm(gr.ident(x), iota));
        right.push(solve(tobj(x, e), x, &|c| tm(c, gr.ident(e)) == rhs)?);
    }
    let md = MonoidalGroupoid::new(gr.clone(), tm, e, a_at, |x| left[x], |x| right[x]);
    Ok((gb, Arc::new(md), iota))
}

fn check_shape(dc: &DoubleComplex, lambda: &TotalCochain, degree: usize) -> Result<()> {
    if dc.q_min != 1 || dc.p_max < 3 || dc.q_max < 4 {
        return invalid("double complex", "needs rows 1..=4 and columns 0..=3");
    }
    if !dc.rho.is_trivial() {
        return invalid(
            "double complex",
            "coefficients must carry the trivial action",
        );
    }
    if lambda.degree != degree || dc.join(lambda).len() != dc.total.dim(degree) {
        return invalid(
            "cochain",
            format!("expected a total {degree}-cochain of this complex"),
        );
    }
    Ok(())
}

/// The extension `[pt/A] → E^λ → G` of a total 3-cocycle, with every
/// extension invariant checked before returning.
pub fn extension_from_cocycle(
    dc: &DoubleComplex,
    lambda: &TotalCochain,
) -> Result<CentralExtension> {
    check_shape(dc, lambda, 3)?;
    if let Some(v) = dc.cocycle_failure(lambda) {
        let rel = match (v.witness[0], v.witness[1]) {
            (3, 1) => "δ_h λ₁ = 0",
            (2, 2) => "δ_v λ₁ = δ_h λ₂",
            (1, 3) => "δ_v λ₂ = δ_h λ₃",
            _ => "δ_v λ₃ = 0",
        };
        return invalid("cocycle", format!("{rel} fails at cell {}", v.witness[2]));
    }
    let (gerbe, total, iota) = total_two_group(dc, lambda)?;
    let e = total.unit;
    let proj = dc.cover.levels[1].proj.clone();
    let gb = &gerbe;
    let mut ext = CentralExtension::assemble(
        &dc.cover.group,
        &dc.a,
        total.clone(),
        |s| gb.act(e, s),
        iota,
        total.id(e),
        proj,
    )?;
    ext.source = Some(CocycleSource {
        cover: dc.cover.clone(),
        lambda: lambda.clone(),
        gerbe: gerbe.clone(),
    });
    let rep = check_extension(&ext);
    if let Some(v) = rep.first_violation() {
        return invalid("extension", v.to_string());
    }
    Ok(ext)
}

fn source(e: &CentralExtension) -> Result<&CocycleSource> {
    e.source.as_ref().ok_or_else(|| Error::Invalid {
        what: "extension",
        detail: "not built from a cocycle".into(),
    })
}

/// `P^θ: E^λ → E^λ'` for a total 2-cochain with `Dθ = λ − λ'`: the
/// identity on objects, `(u₀, u₁, a) ↦ (u₀, u₁, a + θ₁(u₀, u₁))`, and
/// `F2(x, y)` the identity of `x ⊗ y` shifted by
/// `θ₂(v) − θ₁(d₂v, x) − θ₁(d₀v, y)` with `v = v(x, y)`. `F0` is the
/// unique shift satisfying the unit axioms.
pub fn morphism_from_cochain(
    dc: &DoubleComplex,
    e1: &CentralExtension,
    e2: &CentralExtension,
    theta: &TotalCochain,
) -> Result<ExtensionMorphism> {
    check_shape(dc, theta, 2)?;
    let (s1, s2) = (source(e1)?, source(e2)?);
    if s1.cover != dc.cover || s2.cover != dc.cover {
        return invalid("extension", "built on a different cover");
    }
    let diff = dc.total.sub(&dc.join(&s1.lambda), &dc.join(&s2.lambda));
    if dc.total.apply(2, &dc.join(theta)) != diff {
        return invalid("cochain", "Dθ differs from λ − λ'");
    }
    let a = &dc.a;
    let na = a.order();
    let b11 = dc.block(1, 1).expect("block (1, 1)");
    let b02 = dc.block(0, 2).expect("block (0, 2)");
    let th1 = |u0: usize, u1: usize| theta.parts[1][b11.index(&[u0 as u32, u1 as u32])];
    let th2 = |v: usize| theta.parts[0][b02.index(&[v as u32])];
    let (g1, g2) = (&s1.gerbe, &s2.gerbe);
    let gr = &*e1.total.groupoid;
    let functor = crate::groupoid::Functor::from_mor(
        e1.total.groupoid.clone(),
        e2.total.groupoid.clone(),
        |f| {
            let (u0, u1, s) = g1.decode(f);
            g2.morphism(u0, u1, a.add(s, th1(u0, u1)))
        },
    );
    let t = Tables::new(dc, &s1.lambda);
    let md2 = &*e2.total;
    let f2 = |x: usize, y: usize| {
        let v = t.lift(x, y);
        let s = a.sub(
            a.sub(th2(v), th1(t.face(2, 2, v), x)),
            th1(t.face(2, 0, v), y),
        );
        g2.shift(md2.id(md2.t(x, y)), s)
    };
    let e = e1.total.unit;
    for s in 0..na {
        let hom = TwoGroupHom::new(
            e1.total.clone(),
            e2.total.clone(),
            functor.clone(),
            f2,
            g2.act(e, s),
        );
        if let Some(m) = complete_extension_morphism(e1, e2, hom) {
            return Ok(m);
        }
    }
    let hom = TwoGroupHom::new(e1.total.clone(), e2.total.clone(), functor, f2, gr.ident(e));
    let rep = crate::twogroup::check_hom(&hom);
    Err(Error::Invalid {
        what: "morphism",
        detail: rep
            .first_violation()
            .map_or("no unit data completes the hom".into(), |v| v.to_string()),
    })
}

/// `η^ω: P^θ ⇒ P^θ'` for a total 1-cochain with `Dω = θ − θ'`: the
/// component at `u` is the identity shifted by `ω(u)`.
pub fn two_morphism_from_cochain(
    dc: &DoubleComplex,
    p: &ExtensionMorphism,
    q: &ExtensionMorphism,
    omega: &TotalCochain,
    theta: &TotalCochain,
    theta2: &TotalCochain,
) -> Result<TwoHom> {
    check_shape(dc, omega, 1)?;
    let diff = dc.total.sub(&dc.join(theta), &dc.join(theta2));
    if dc.total.apply(1, &dc.join(omega)) != diff {
        return invalid("cochain", "Dω differs from θ − θ'");
    }
    let b01 = dc.block(0, 1).expect("block (0, 1)");
    let cod = &p.hom.cod;
    let gr = &*cod.groupoid;
    let na = dc.a.order();
    let comp = (0..gr.n_objects())
        .map(|u| {
            let id = gr.ident(u);
            (id / na) * na + dc.a.add(id % na, omega.parts[0][b01.index(&[u as u32])])
        })
        .collect();
    let eta = TwoHom { comp };
    let rep = check_two_hom(&p.hom, &q.hom, &eta);
    match rep.first_violation() {
        Some(v) => invalid("2-morphism", v.to_string()),
        None => Ok(eta),
    }
}

use std::collections::HashMap;

use super::FibCat;
use crate::error::{Error, Result};
use crate::fincat::{
    check_colimit_cocone, compose_functors, functor_category, generates_apex, identity_functor,
    opposite, poset, preorder, product, CatValuedDiagram, FinCat, Functor, FunctorCategory, Mor,
    NatTrans, Ob,
};
use crate::verdict::Verdict;

/// The Cartesian fibration classified by a diagram on `C^op`.
#[derive(Clone, Debug)]
pub struct CartGroth {
    pub fib: FibCat,
    /// `(c, x)` with `x` an object of `F(c)`.
    pub objects: Vec<(Ob, Ob)>,
    /// `(γ, x', ξ)` for a morphism `(c, x) → (c', x')` over `γ: c → c'`
    /// with `ξ: x → F(γ)(x')`.
    pub morphisms: Vec<(Mor, Ob, Mor)>,
    obj_ix: HashMap<(Ob, Ob), Ob>,
    mor_ix: HashMap<(Mor, Ob, Mor), Mor>,
}

impl CartGroth {
    pub fn object_of(&self, c: Ob, x: Ob) -> Option<Ob> {
        self.obj_ix.get(&(c, x)).copied()
    }

    pub fn morphism_of(&self, gamma: Mor, x1: Ob, xi: Mor) -> Option<Mor> {
        self.mor_ix.get(&(gamma, x1, xi)).copied()
    }
}

fn index_of<K: std::hash::Hash + Eq + Clone>(keys: &[K]) -> HashMap<K, usize> {
    keys.iter()
        .cloned()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect()
}

/// Objects `(c, x ∈ F(c))` and morphisms `(γ, ξ: x → F(γ)x')` for `F` on
/// `C^op`, projecting to `C`.  Morphisms with identity `ξ` come first within
/// each `γ`, so the least Cartesian lift is the strict one.
pub fn cart_groth(f: &CatValuedDiagram) -> Result<CartGroth> {
    let a = &f.index;
    let c = opposite(a);
    let objects: Vec<(Ob, Ob)> = a
        .objects()
        .flat_map(|x| f.values[x].objects().map(move |v| (x, v)))
        .collect();
    let mut morphisms = Vec::new();
    for g in c.morphisms() {
        let (s, t) = (c.src(g), c.tgt(g));
        let act = &f.action[g];
        let fs = &f.values[s];
        for x1 in f.values[t].objects() {
            morphisms.push((g, x1, fs.id(act.obj[x1])));
        }
        for x1 in f.values[t].objects() {
            for &xi in fs.incoming(act.obj[x1]) {
                if !fs.is_identity(xi) {
                    morphisms.push((g, x1, xi));
                }
            }
        }
        crate::caps::check(
            "Grothendieck construction morphisms",
            morphisms.len(),
            crate::caps::caps().max_morphisms,
        )?;
    }
    let total = FinCat::from_keys(
        objects.clone(),
        morphisms.clone(),
        |&(g, x1, xi)| ((c.src(g), f.values[c.src(g)].src(xi)), (c.tgt(g), x1)),
        |&(x, v)| (c.id(x), v, f.values[x].id(v)),
        |&(g2, x2, xi2), &(g1, _, xi1)| {
            let s = c.src(g1);
            let xi = f.values[s].compose(f.action[g1].mor[xi2], xi1);
            (c.compose(g2, g1), x2, xi)
        },
        |&(x, v)| format!("({},{})", a.object_name(x), f.values[x].object_name(v)),
        |&(g, x1, xi)| {
            format!(
                "({},{},{})",
                c.morphism_name(g),
                f.values[c.tgt(g)].object_name(x1),
                f.values[c.src(g)].morphism_name(xi)
            )
        },
    )?;
    let proj = Functor::new(
        objects.iter().map(|&(x, _)| x).collect(),
        morphisms.iter().map(|&(g, _, _)| g).collect(),
    );
    let fib = FibCat::new(total, c, proj)?;
    Ok(CartGroth {
        fib,
        obj_ix: index_of(&objects),
        mor_ix: index_of(&morphisms),
        objects,
        morphisms,
    })
}

/// The coCartesian fibration classified by a diagram on `C`.
#[derive(Clone, Debug)]
pub struct CocartGroth {
    pub fib: FibCat,
    pub objects: Vec<(Ob, Ob)>,
    /// `(γ, x, ξ)` for a morphism `(c, x) → (c', x')` over `γ: c → c'` with
    /// `ξ: F(γ)(x) → x'`.
    pub morphisms: Vec<(Mor, Ob, Mor)>,
    obj_ix: HashMap<(Ob, Ob), Ob>,
    mor_ix: HashMap<(Mor, Ob, Mor), Mor>,
}

impl CocartGroth {
    pub fn object_of(&self, c: Ob, x: Ob) -> Option<Ob> {
        self.obj_ix.get(&(c, x)).copied()
    }

    pub fn morphism_of(&self, gamma: Mor, x: Ob, xi: Mor) -> Option<Mor> {
        self.mor_ix.get(&(gamma, x, xi)).copied()
    }
}

pub fn cocart_groth(f: &CatValuedDiagram) -> Result<CocartGroth> {
    let c = &f.index;
    let objects: Vec<(Ob, Ob)> = c
        .objects()
        .flat_map(|x| f.values[x].objects().map(move |v| (x, v)))
        .collect();
    let mut morphisms = Vec::new();
    for g in c.morphisms() {
        let (s, t) = (c.src(g), c.tgt(g));
        let act = &f.action[g];
        let ft = &f.values[t];
        for x in f.values[s].objects() {
            morphisms.push((g, x, ft.id(act.obj[x])));
        }
        for x in f.values[s].objects() {
            for &xi in ft.out_of(act.obj[x]) {
                if !ft.is_identity(xi) {
                    morphisms.push((g, x, xi));
                }
            }
        }
        crate::caps::check(
            "Grothendieck construction morphisms",
            morphisms.len(),
            crate::caps::caps().max_morphisms,
        )?;
    }
    let total = FinCat::from_keys(
        objects.clone(),
        morphisms.clone(),
        |&(g, x, xi)| ((c.src(g), x), (c.tgt(g), f.values[c.tgt(g)].tgt(xi))),
        |&(x, v)| (c.id(x), v, f.values[x].id(v)),
        |&(g2, _, xi2), &(g1, x, xi1)| {
            let t = c.tgt(g2);
            let xi = f.values[t].compose(xi2, f.action[g2].mor[xi1]);
            (c.compose(g2, g1), x, xi)
        },
        |&(x, v)| format!("({},{})", c.object_name(x), f.values[x].object_name(v)),
        |&(g, x, xi)| {
            format!(
                "({},{},{})",
                c.morphism_name(g),
                f.values[c.src(g)].object_name(x),
                f.values[c.tgt(g)].morphism_name(xi)
            )
        },
    )?;
    let proj = Functor::new(
        objects.iter().map(|&(x, _)| x).collect(),
        morphisms.iter().map(|&(g, _, _)| g).collect(),
    );
    let fib = FibCat::new(total, c.clone(), proj)?;
    Ok(CocartGroth {
        fib,
        obj_ix: index_of(&objects),
        mor_ix: index_of(&morphisms),
        objects,
        morphisms,
    })
}

/// The free Cartesian fibration on `p: E → C`: pairs `(e, φ: c → p(e))`,
/// projecting to `c`.
#[derive(Clone, Debug)]
pub struct FreeFibration {
    pub fib: FibCat,
    pub objects: Vec<(Ob, Mor)>,
    /// `(φ, φ', ψ, α)` for a square `φ'∘ψ = p(α)∘φ` from `(e, φ)` to `(e', φ')`.
    pub morphisms: Vec<(Mor, Mor, Mor, Mor)>,
    /// `e ↦ (e, id)`.
    pub unit: Functor,
    obj_ix: HashMap<(Ob, Mor), Ob>,
    mor_ix: HashMap<(Mor, Mor, Mor, Mor), Mor>,
}

impl FreeFibration {
    pub fn object_of(&self, e: Ob, phi: Mor) -> Option<Ob> {
        self.obj_ix.get(&(e, phi)).copied()
    }

    pub fn morphism_of(&self, key: (Mor, Mor, Mor, Mor)) -> Option<Mor> {
        self.mor_ix.get(&key).copied()
    }
}

pub fn free_fibration(e: &FinCat, c: &FinCat, p: &Functor) -> Result<FreeFibration> {
    if let Some(why) = p.defect(e, c) {
        return Err(Error::InvalidFunctor(why));
    }
    let objects: Vec<(Ob, Mor)> = e
        .objects()
        .flat_map(|x| c.incoming(p.obj[x]).iter().map(move |&phi| (x, phi)))
        .collect();
    let mut morphisms = Vec::new();
    for al in e.morphisms() {
        let (e1, e2) = (e.src(al), e.tgt(al));
        for &phi1 in c.incoming(p.obj[e1]) {
            let lower = c.compose(p.mor[al], phi1);
            for &phi2 in c.incoming(p.obj[e2]) {
                for &psi in c.hom(c.src(phi1), c.src(phi2)) {
                    if c.compose(phi2, psi) == lower {
                        morphisms.push((phi1, phi2, psi, al));
                    }
                }
            }
        }
        crate::caps::check(
            "free fibration morphisms",
            morphisms.len(),
            crate::caps::caps().max_morphisms,
        )?;
    }
    let total = FinCat::from_keys(
        objects.clone(),
        morphisms.clone(),
        |&(phi1, phi2, _, al)| ((e.src(al), phi1), (e.tgt(al), phi2)),
        |&(x, phi)| (phi, phi, c.id(c.src(phi)), e.id(x)),
        |&(_, phi3, psi2, al2), &(phi1, _, psi1, al1)| {
            (phi1, phi3, c.compose(psi2, psi1), e.compose(al2, al1))
        },
        |&(x, phi)| format!("({},{})", e.object_name(x), c.morphism_name(phi)),
        |&(phi1, phi2, psi, al)| {
            format!(
                "[{};{};{};{}]",
                e.morphism_name(al),
                c.morphism_name(psi),
                c.morphism_name(phi1),
                c.morphism_name(phi2)
            )
        },
    )?;
    let proj = Functor::new(
        objects.iter().map(|&(_, phi)| c.src(phi)).collect(),
        morphisms.iter().map(|&(_, _, psi, _)| psi).collect(),
    );
    let obj_ix = index_of(&objects);
    let mor_ix = index_of(&morphisms);
    let unit = Functor::new(
        e.objects().map(|x| obj_ix[&(x, c.id(p.obj[x]))]).collect(),
        e.morphisms()
            .map(|al| {
                let (i1, i2) = (c.id(p.obj[e.src(al)]), c.id(p.obj[e.tgt(al)]));
                mor_ix[&(i1, i2, p.mor[al], al)]
            })
            .collect(),
    );
    let fib = FibCat::new(total, c.clone(), proj)?;
    Ok(FreeFibration {
        fib,
        objects,
        morphisms,
        unit,
        obj_ix,
        mor_ix,
    })
}

/// `Φ`: the Cartesian fibration classifying `c ↦ Fun(F(c), X)`.
#[derive(Clone, Debug)]
pub struct Phi {
    pub groth: CartGroth,
    /// `c ↦ Fun(F(c), X)` on `C^op`.
    pub diagram: CatValuedDiagram,
    pub functor_cats: Vec<FunctorCategory>,
}

pub fn phi_fibration(f: &CatValuedDiagram, x: &FinCat) -> Result<Phi> {
    let c = &f.index;
    let fcs = f
        .values
        .iter()
        .map(|v| functor_category(v, x))
        .collect::<Result<Vec<_>>>()?;
    let idx = identity_functor(x);
    let mut action = Vec::with_capacity(c.num_morphisms());
    for g in c.morphisms() {
        let (s, t) = (c.src(g), c.tgt(g));
        action.push(if c.is_identity(g) {
            identity_functor(&fcs[s].cat)
        } else {
            crate::fincat::whisker_functor(&fcs[t], &fcs[s], &f.action[g], &idx)?
        });
    }
    let diagram = CatValuedDiagram::new(
        opposite(c),
        fcs.iter().map(|fc| fc.cat.clone()).collect(),
        action,
    )?;
    let groth = cart_groth(&diagram)?;
    Ok(Phi {
        groth,
        diagram,
        functor_cats: fcs,
    })
}

/// `A ×_C B` for `fa: A → C` and `fb: B → C`.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub cat: FinCat,
    pub first: Functor,
    pub second: Functor,
    pub objects: Vec<(Ob, Ob)>,
    pub morphisms: Vec<(Mor, Mor)>,
}

pub fn fiber_product(
    a: &FinCat,
    fa: &Functor,
    b: &FinCat,
    fb: &Functor,
    c: &FinCat,
) -> Result<FiberProduct> {
    if let Some(why) = fa.defect(a, c).or_else(|| fb.defect(b, c)) {
        return Err(Error::InvalidFunctor(why));
    }
    let objects: Vec<(Ob, Ob)> = a
        .objects()
        .flat_map(|x| {
            b.objects()
                .filter(move |&y| fa.obj[x] == fb.obj[y])
                .map(move |y| (x, y))
        })
        .collect();
    let morphisms: Vec<(Mor, Mor)> = a
        .morphisms()
        .flat_map(|m| {
            b.morphisms()
                .filter(move |&n| fa.mor[m] == fb.mor[n])
                .map(move |n| (m, n))
        })
        .collect();
    let cat = FinCat::from_keys(
        objects.clone(),
        morphisms.clone(),
        |&(m, n)| ((a.src(m), b.src(n)), (a.tgt(m), b.tgt(n))),
        |&(x, y)| (a.id(x), b.id(y)),
        |&(m2, n2), &(m1, n1)| (a.compose(m2, m1), b.compose(n2, n1)),
        |&(x, y)| format!("({},{})", a.object_name(x), b.object_name(y)),
        |&(m, n)| format!("({},{})", a.morphism_name(m), b.morphism_name(n)),
    )?;
    let first = Functor::new(
        objects.iter().map(|p| p.0).collect(),
        morphisms.iter().map(|p| p.0).collect(),
    );
    let second = Functor::new(
        objects.iter().map(|p| p.1).collect(),
        morphisms.iter().map(|p| p.1).collect(),
    );
    Ok(FiberProduct {
        cat,
        first,
        second,
        objects,
        morphisms,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum CollageObj {
    Base(Ob),
    Total(Ob),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum CollageMor {
    Base(Mor),
    Total(Mor),
    /// `β` with the object of `E` at the far end.
    Cross(Mor, Ob),
}

/// A collage of `p: E → B`, with the inclusions of `B` and `E`.
#[derive(Clone, Debug)]
pub struct Collage {
    pub cat: FinCat,
    pub from_base: Functor,
    pub from_total: Functor,
    /// Arrows `b → e` (left) or `e → b` (right) exist.
    pub left: bool,
    keys: HashMap<CollageMor, Mor>,
}

impl Collage {
    /// The cross arrow given by `β: b → p(e)` (left) or `β: p(e) → b` (right).
    pub fn cross(&self, beta: Mor, e: Ob) -> Option<Mor> {
        self.keys.get(&CollageMor::Cross(beta, e)).copied()
    }
}

fn collage(e: &FinCat, b: &FinCat, p: &Functor, left: bool) -> Result<Collage> {
    if let Some(why) = p.defect(e, b) {
        return Err(Error::InvalidFunctor(why));
    }
    let mut objects: Vec<CollageObj> = b.objects().map(CollageObj::Base).collect();
    objects.extend(e.objects().map(CollageObj::Total));
    let mut morphisms: Vec<CollageMor> = b.morphisms().map(CollageMor::Base).collect();
    morphisms.extend(e.morphisms().map(CollageMor::Total));
    for x in e.objects() {
        let arrows = if left {
            b.incoming(p.obj[x])
        } else {
            b.out_of(p.obj[x])
        };
        morphisms.extend(arrows.iter().map(|&beta| CollageMor::Cross(beta, x)));
    }
    let cat = FinCat::from_keys(
        objects,
        morphisms.clone(),
        |m| match *m {
            CollageMor::Base(g) => (CollageObj::Base(b.src(g)), CollageObj::Base(b.tgt(g))),
            CollageMor::Total(a) => (CollageObj::Total(e.src(a)), CollageObj::Total(e.tgt(a))),
            CollageMor::Cross(beta, x) if left => {
                (CollageObj::Base(b.src(beta)), CollageObj::Total(x))
            }
            CollageMor::Cross(beta, x) => (CollageObj::Total(x), CollageObj::Base(b.tgt(beta))),
        },
        |o| match *o {
            CollageObj::Base(y) => CollageMor::Base(b.id(y)),
            CollageObj::Total(x) => CollageMor::Total(e.id(x)),
        },
        |g, f| match (*g, *f) {
            (CollageMor::Base(g), CollageMor::Base(f)) => CollageMor::Base(b.compose(g, f)),
            (CollageMor::Total(g), CollageMor::Total(f)) => CollageMor::Total(e.compose(g, f)),
            (CollageMor::Total(a), CollageMor::Cross(beta, _)) => {
                CollageMor::Cross(b.compose(p.mor[a], beta), e.tgt(a))
            }
            (CollageMor::Cross(beta, x), CollageMor::Base(g)) => {
                CollageMor::Cross(b.compose(beta, g), x)
            }
            (CollageMor::Base(g), CollageMor::Cross(beta, x)) => {
                CollageMor::Cross(b.compose(g, beta), x)
            }
            (CollageMor::Cross(beta, _), CollageMor::Total(a)) => {
                CollageMor::Cross(b.compose(beta, p.mor[a]), e.src(a))
            }
            _ => unreachable!("not composable in a collage"),
        },
        |o| match *o {
            CollageObj::Base(y) => format!("B.{}", b.object_name(y)),
            CollageObj::Total(x) => format!("E.{}", e.object_name(x)),
        },
        |m| match *m {
            CollageMor::Base(g) => format!("B.{}", b.morphism_name(g)),
            CollageMor::Total(a) => format!("E.{}", e.morphism_name(a)),
            CollageMor::Cross(beta, x) => {
                format!("X.{}.{}", b.morphism_name(beta), e.object_name(x))
            }
        },
    )?;
    let nb = b.num_objects();
    let nbm = b.num_morphisms();
    Ok(Collage {
        cat,
        from_base: identity_functor(b),
        from_total: Functor::new(
            e.objects().map(|x| nb + x).collect(),
            e.morphisms().map(|a| nbm + a).collect(),
        ),
        left,
        keys: index_of(&morphisms),
    })
}

/// `B ⊔_{E×{0}} E×[1]`: arrows `b → e` are arrows `b → p(e)` of `B`.
pub fn collage_left(e: &FinCat, b: &FinCat, p: &Functor) -> Result<Collage> {
    collage(e, b, p, true)
}

/// `B ⊔_{E×{1}} E×[1]`: arrows `e → b` are arrows `p(e) → b` of `B`.
pub fn collage_right(e: &FinCat, b: &FinCat, p: &Functor) -> Result<Collage> {
    collage(e, b, p, false)
}

/// The span `B ← E → E×[1]` whose pushout the collage should be, with its
/// canonical cocone.  Index objects: `B`, `E×[1]`, `E`.
fn collage_span(
    e: &FinCat,
    b: &FinCat,
    p: &Functor,
    col: &Collage,
) -> Result<(CatValuedDiagram, Vec<Functor>)> {
    let index = preorder(vec!["B".into(), "ExI".into(), "E".into()], |i, j| {
        i == j || (i == 2 && j < 2)
    })?;
    let interval = poset(1);
    let glued = if col.left { 0 } else { 1 };
    let other = 1 - glued;
    let cyl = product(e, &interval)?;
    let ni = interval.num_morphisms();
    let inc = Functor::new(
        e.objects().map(|x| x * 2 + glued).collect(),
        e.morphisms().map(|a| a * ni + interval.id(glued)).collect(),
    );
    let to_b = index.hom(2, 0)[0];
    let d =
        CatValuedDiagram::from_generators(index, vec![b.clone(), cyl.clone(), e.clone()], |m| {
            if m == to_b {
                p.clone()
            } else {
                inc.clone()
            }
        })?;
    let nbm = b.num_morphisms();
    let nb = b.num_objects();
    let leg_cyl_obj = (0..cyl.num_objects())
        .map(|o| {
            let (x, i) = (o / 2, o % 2);
            if i == glued {
                p.obj[x]
            } else {
                nb + x
            }
        })
        .collect::<Vec<_>>();
    let mut leg_cyl_mor = Vec::with_capacity(cyl.num_morphisms());
    for m in cyl.morphisms() {
        let (a, j) = (m / ni, m % ni);
        let img = if j == interval.id(glued) {
            p.mor[a]
        } else if j == interval.id(other) {
            nbm + a
        } else if col.left {
            col.cross(p.mor[a], e.tgt(a)).expect("cross arrow")
        } else {
            col.cross(p.mor[a], e.src(a)).expect("cross arrow")
        };
        leg_cyl_mor.push(img);
    }
    let legs = vec![
        col.from_base.clone(),
        Functor::new(leg_cyl_obj, leg_cyl_mor),
        p.clone(),
    ];
    Ok((d, legs))
}

/// Probe the pushout property of a collage against its span.
pub fn collage_pushout_check(
    e: &FinCat,
    b: &FinCat,
    p: &Functor,
    left: bool,
    probes: &[FinCat],
) -> Result<Verdict> {
    let col = collage(e, b, p, left)?;
    let (d, legs) = collage_span(e, b, p, &col)?;
    let gen = generates_apex(&col.cat, &legs);
    let v = check_colimit_cocone(&d, &col.cat, &legs, probes)?;
    Ok(Verdict::all(vec![
        Verdict::check(
            gen.is_none(),
            "legs generate the collage",
            || serde_json::json!({ "detail": gen }),
        ),
        v,
    ]))
}

/// Postcomposition `Fun(D, E) → Fun(D, C)` for a fibration `E → C`.
#[derive(Clone, Debug)]
pub struct Exponential {
    pub fib: FibCat,
    pub total_functors: FunctorCategory,
    pub base_functors: FunctorCategory,
}

pub fn exponentiate(q: &FibCat, d: &FinCat) -> Result<Exponential> {
    let tf = functor_category(d, &q.total)?;
    let bf = functor_category(d, &q.base)?;
    let bidx = bf.index();
    let obj = tf
        .functors
        .iter()
        .map(|g| bidx[&compose_functors(&q.proj, g)])
        .collect::<Vec<_>>();
    let mut mor = Vec::with_capacity(tf.transformations.len());
    for (m, t) in tf.transformations.iter().enumerate() {
        let comps = NatTrans {
            components: t.components.iter().map(|&k| q.proj.mor[k]).collect(),
        };
        let (s, u) = (obj[tf.cat.src(m)], obj[tf.cat.tgt(m)]);
        mor.push(
            bf.morphism_of(s, u, &comps)
                .ok_or_else(|| Error::InvalidFunctor("projected transformation missing".into()))?,
        );
    }
    let fib = FibCat::new(tf.cat.clone(), bf.cat.clone(), Functor::new(obj, mor))?;
    Ok(Exponential {
        fib,
        total_functors: tf,
        base_functors: bf,
    })
}

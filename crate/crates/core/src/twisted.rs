//! Twisted arrow categories, ends and coends, weighted and lax (co)limits.
//!
//! `TwCat(C)` has the arrows of `C` as objects; a morphism `f → g` is a pair
//! `(a, b)` with `g = b∘f∘a`.  Ends are limits over `TwCat(C)`, coends are
//! colimits over its opposite, and the opposite of `TwCat(C)` is the category
//! whose nerve is the edgewise subdivision of `N(C)`.

use std::collections::HashMap;

use serde_json::json;

use crate::error::{Error, Result};
use crate::fincat::{
    find_isomorphism, functor_category, identity_functor, limit_cat, nat_transformations, opposite,
    product, product_functor, slice_over, slice_under, whisker_functor, CatValuedDiagram, FinCat,
    Functor, FunctorCategory, Limit, Mor, Ob,
};
use crate::verdict::Verdict;

#[derive(Clone, Debug)]
pub struct TwCat {
    pub base: FinCat,
    /// Object `i` is the base morphism `i`.
    pub cat: FinCat,
    /// `(f, a, b)` for each morphism `f → b∘f∘a`.
    pub keys: Vec<(Mor, Mor, Mor)>,
    /// `f ↦ src f`, `(a, b) ↦ a`, landing in `opposite(base)`.
    pub to_base_op: Functor,
    /// `f ↦ tgt f`, `(a, b) ↦ b`.
    pub to_base: Functor,
}

impl TwCat {
    /// The opposite orientation, arrows pointing from outer to inner.
    pub fn outer_to_inner(&self) -> FinCat {
        opposite(&self.cat)
    }

    pub fn morphism_of(&self, f: Mor, a: Mor, b: Mor) -> Option<Mor> {
        self.keys.iter().position(|&k| k == (f, a, b))
    }
}

pub fn twisted_arrow(c: &FinCat) -> Result<TwCat> {
    let objs: Vec<Mor> = c.morphisms().collect();
    let mut keys = Vec::new();
    for f in c.morphisms() {
        for &a in c.incoming(c.src(f)) {
            for &b in c.out_of(c.tgt(f)) {
                keys.push((f, a, b));
            }
        }
    }
    let cat = FinCat::from_keys(
        objs,
        keys.clone(),
        |&(f, a, b)| (f, c.compose_all(&[b, f, a])),
        |&f| (f, c.id(c.src(f)), c.id(c.tgt(f))),
        |&(_, a2, b2), &(f, a1, b1)| (f, c.compose(a1, a2), c.compose(b2, b1)),
        |&f| c.morphism_name(f).to_string(),
        |&(f, a, b)| {
            format!(
                "({},{})@{}",
                c.morphism_name(a),
                c.morphism_name(b),
                c.morphism_name(f)
            )
        },
    )?;
    let to_base_op = Functor::new(
        c.morphisms().map(|f| c.src(f)).collect(),
        keys.iter().map(|&(_, a, _)| a).collect(),
    );
    let to_base = Functor::new(
        c.morphisms().map(|f| c.tgt(f)).collect(),
        keys.iter().map(|&(_, _, b)| b).collect(),
    );
    Ok(TwCat {
        base: c.clone(),
        cat,
        keys,
        to_base_op,
        to_base,
    })
}

/// A set-valued functor `C^op × C → Set`.  `size(x, y)` is the cardinality
/// of `T(x, y)`, and `act(a, b, t)` applies `T(a, b)` for `a: x' → x`,
/// `b: y → y'`.
pub struct SetBifunctor<'a> {
    pub base: &'a FinCat,
    pub size: Box<dyn Fn(Ob, Ob) -> usize + 'a>,
    pub act: Box<dyn Fn(Mor, Mor, usize) -> usize + 'a>,
}

impl<'a> SetBifunctor<'a> {
    /// `Hom_C(−, −)`, elements indexed by position in the hom list.
    pub fn hom(c: &'a FinCat) -> Self {
        SetBifunctor {
            base: c,
            size: Box::new(move |x, y| c.hom(x, y).len()),
            act: Box::new(move |a, b, t| {
                let (x, y) = (c.tgt(a), c.src(b));
                let m = c.compose_all(&[b, c.hom(x, y)[t], a]);
                position(c.hom(c.src(a), c.tgt(b)), m)
            }),
        }
    }

    /// `Hom_D(F−, G−)` for functors `F, G: C → D`.
    pub fn hom_between(c: &'a FinCat, d: &'a FinCat, f: &'a Functor, g: &'a Functor) -> Self {
        SetBifunctor {
            base: c,
            size: Box::new(move |x, y| d.hom(f.obj[x], g.obj[y]).len()),
            act: Box::new(move |a, b, t| {
                let (x, y) = (c.tgt(a), c.src(b));
                let m = d.compose_all(&[g.mor[b], d.hom(f.obj[x], g.obj[y])[t], f.mor[a]]);
                position(d.hom(f.obj[c.src(a)], g.obj[c.tgt(b)]), m)
            }),
        }
    }

    /// `None` if strictly bifunctorial, else the first failing pair.
    pub fn defect(&self) -> Option<String> {
        let c = self.base;
        for x in c.objects() {
            for y in c.objects() {
                for t in 0..(self.size)(x, y) {
                    if (self.act)(c.id(x), c.id(y), t) != t {
                        return Some(format!("identities do not act trivially at ({x},{y})"));
                    }
                }
            }
        }
        for a1 in c.morphisms() {
            for &a2 in c.incoming(c.src(a1)) {
                for b1 in c.morphisms() {
                    for &b2 in c.out_of(c.tgt(b1)) {
                        let (x, y) = (c.tgt(a1), c.src(b1));
                        for t in 0..(self.size)(x, y) {
                            let lhs = (self.act)(c.compose(a1, a2), c.compose(b2, b1), t);
                            let rhs = (self.act)(a2, b2, (self.act)(a1, b1, t));
                            if lhs != rhs {
                                return Some(format!(
                                    "action not functorial at ({a1},{b1},{a2},{b2})"
                                ));
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

fn position(list: &[Mor], m: Mor) -> usize {
    list.iter()
        .position(|&n| n == m)
        .expect("composite lies in the hom-set")
}

/// Elements of the end of a set-valued bifunctor: one chosen element of
/// `T(src f, tgt f)` for every twisted arrow `f`, compatible along all
/// factorizations.
pub fn set_end(t: &SetBifunctor<'_>, tw: &TwCat) -> Result<Vec<Vec<usize>>> {
    let c = t.base;
    let allowed: Vec<Vec<usize>> = c
        .morphisms()
        .map(|f| (0..(t.size)(c.src(f), c.tgt(f))).collect())
        .collect();
    let maps: Vec<(usize, usize, Vec<usize>)> = tw
        .keys
        .iter()
        .enumerate()
        .filter(|&(m, _)| !tw.cat.is_identity(m))
        .map(|(m, &(f, a, b))| {
            let g = tw.cat.tgt(m);
            let map = (0..(t.size)(c.src(f), c.tgt(f)))
                .map(|e| (t.act)(a, b, e))
                .collect();
            (f, g, map)
        })
        .collect();
    let cons: Vec<(usize, usize, &[usize])> = maps
        .iter()
        .map(|(i, j, m)| (*i, *j, m.as_slice()))
        .collect();
    crate::fincat::compatible_families(&allowed, &cons)
}

/// The coend of a set-valued bifunctor: the colimit over `TwCat(C)^op` of
/// `f: x → y ↦ T(y, x)`, computed as a union-find coequalizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoend {
    pub num_classes: usize,
    /// `class_of[f][t]` for `t ∈ T(tgt f, src f)`.
    pub class_of: Vec<Vec<usize>>,
}

pub fn set_coend(t: &SetBifunctor<'_>, tw: &TwCat) -> SetCoend {
    let c = t.base;
    let mut offset = Vec::with_capacity(c.num_morphisms());
    let mut total = 0;
    for f in c.morphisms() {
        offset.push(total);
        total += (t.size)(c.tgt(f), c.src(f));
    }
    let mut uf = UnionFind::new(total);
    for (m, &(f, a, b)) in tw.keys.iter().enumerate() {
        let g = tw.cat.tgt(m);
        for e in 0..(t.size)(c.tgt(g), c.src(g)) {
            let image = (t.act)(b, a, e);
            uf.union(offset[g] + e, offset[f] + image);
        }
    }
    let mut labels: HashMap<usize, usize> = HashMap::new();
    let mut class_of = Vec::with_capacity(c.num_morphisms());
    for f in c.morphisms() {
        let n = (t.size)(c.tgt(f), c.src(f));
        let row = (0..n)
            .map(|e| {
                let r = uf.find(offset[f] + e);
                let next = labels.len();
                *labels.entry(r).or_insert(next)
            })
            .collect();
        class_of.push(row);
    }
    SetCoend {
        num_classes: labels.len(),
        class_of,
    }
}

/// Disjoint-set forest with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    /// Returns true if two distinct classes were merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// The diagram `f ↦ T(src f, tgt f)` over `TwCat(C)`, for a category-valued
/// bifunctor given by `value(x, y)` and `act(a, b)`.
pub fn end_diagram(
    c: &FinCat,
    mut value: impl FnMut(Ob, Ob) -> Result<FinCat>,
    mut act: impl FnMut(Mor, Mor) -> Result<Functor>,
) -> Result<(TwCat, CatValuedDiagram)> {
    let tw = twisted_arrow(c)?;
    let mut cache: HashMap<(Ob, Ob), FinCat> = HashMap::new();
    let mut values = Vec::with_capacity(c.num_morphisms());
    for f in c.morphisms() {
        let key = (c.src(f), c.tgt(f));
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
            e.insert(value(key.0, key.1)?);
        }
        values.push(cache[&key].clone());
    }
    let mut action = Vec::with_capacity(tw.keys.len());
    for (m, &(_, a, b)) in tw.keys.iter().enumerate() {
        action.push(if tw.cat.is_identity(m) {
            identity_functor(&values[tw.cat.src(m)])
        } else {
            act(a, b)?
        });
    }
    let d = CatValuedDiagram::new(tw.cat.clone(), values, action)?;
    Ok((tw, d))
}

/// The diagram `f: x → y ↦ T(y, x)` over `TwCat(C)^op`.
pub fn coend_diagram(
    c: &FinCat,
    mut value: impl FnMut(Ob, Ob) -> Result<FinCat>,
    mut act: impl FnMut(Mor, Mor) -> Result<Functor>,
) -> Result<(TwCat, CatValuedDiagram)> {
    let tw = twisted_arrow(c)?;
    let mut cache: HashMap<(Ob, Ob), FinCat> = HashMap::new();
    let mut values = Vec::with_capacity(c.num_morphisms());
    for f in c.morphisms() {
        let key = (c.tgt(f), c.src(f));
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
            e.insert(value(key.0, key.1)?);
        }
        values.push(cache[&key].clone());
    }
    let mut action = Vec::with_capacity(tw.keys.len());
    for (m, &(_, a, b)) in tw.keys.iter().enumerate() {
        action.push(if tw.cat.is_identity(m) {
            identity_functor(&values[tw.cat.src(m)])
        } else {
            act(b, a)?
        });
    }
    let d = CatValuedDiagram::new(opposite(&tw.cat), values, action)?;
    Ok((tw, d))
}

/// The end of a category-valued bifunctor, as a limit category.
pub fn cat_end(
    c: &FinCat,
    value: impl FnMut(Ob, Ob) -> Result<FinCat>,
    act: impl FnMut(Mor, Mor) -> Result<Functor>,
) -> Result<Limit> {
    let (_, d) = end_diagram(c, value, act)?;
    limit_cat(&d)
}

/// `x ↦ C_{x/}` as a diagram on `C^op`, precomposition along each arrow.
pub fn under_slices(c: &FinCat) -> Result<CatValuedDiagram> {
    let slices = c
        .objects()
        .map(|x| slice_under(c, x))
        .collect::<Result<Vec<_>>>()?;
    let values = slices.iter().map(|s| s.cat.clone()).collect();
    let index = opposite(c);
    CatValuedDiagram::from_generators(index, values, |b| {
        let (from, to) = (&slices[c.tgt(b)], &slices[c.src(b)]);
        let obj = from
            .arrows
            .iter()
            .map(|&g| to.object_of(c.compose(g, b)).expect("precomposite"))
            .collect();
        let mor = from
            .keys
            .iter()
            .map(|&(g, h)| to.morphism_of((c.compose(g, b), h)).expect("precomposite"))
            .collect();
        Functor::new(obj, mor)
    })
}

/// `x ↦ C_{/x}` as a diagram on `C`, postcomposition along each arrow.
pub fn over_slices(c: &FinCat) -> Result<CatValuedDiagram> {
    let slices = c
        .objects()
        .map(|x| slice_over(c, x))
        .collect::<Result<Vec<_>>>()?;
    let values = slices.iter().map(|s| s.cat.clone()).collect();
    CatValuedDiagram::from_generators(c.clone(), values, |b| {
        let (from, to) = (&slices[c.src(b)], &slices[c.tgt(b)]);
        let obj = from
            .arrows
            .iter()
            .map(|&g| to.object_of(c.compose(b, g)).expect("postcomposite"))
            .collect();
        let mor = from
            .keys
            .iter()
            .map(|&(h, g)| to.morphism_of((h, c.compose(b, g))).expect("postcomposite"))
            .collect();
        Functor::new(obj, mor)
    })
}

/// Replace every value by its opposite; the actions are unchanged.
pub fn opposite_values(d: &CatValuedDiagram) -> CatValuedDiagram {
    CatValuedDiagram {
        index: d.index.clone(),
        values: d.values.iter().map(opposite).collect(),
        action: d.action.clone(),
    }
}

/// Functor categories `Fun(W(x), F(y))` for every arrow `x → y` of `C`.
fn pairwise_functor_categories(
    c: &FinCat,
    w: &CatValuedDiagram,
    f: &CatValuedDiagram,
) -> Result<HashMap<(Ob, Ob), FunctorCategory>> {
    let mut fcs = HashMap::new();
    for m in c.morphisms() {
        let key = (c.src(m), c.tgt(m));
        if let std::collections::hash_map::Entry::Vacant(e) = fcs.entry(key) {
            e.insert(functor_category(&w.values[key.0], &f.values[key.1])?);
        }
    }
    Ok(fcs)
}

/// The end over `TwCat(C)` of `Fun(W(x), F(y))` for diagrams `W, F` on `C`.
pub fn weighted_limit(w: &CatValuedDiagram, f: &CatValuedDiagram) -> Result<Limit> {
    let c = &f.index;
    if w.index != *c {
        return Err(Error::InvalidDiagram(
            "weight and diagram have different indices".into(),
        ));
    }
    let fcs = pairwise_functor_categories(c, w, f)?;
    cat_end(
        c,
        |x, y| Ok(fcs[&(x, y)].cat.clone()),
        |a, b| {
            let from = &fcs[&(c.tgt(a), c.src(b))];
            let to = &fcs[&(c.src(a), c.tgt(b))];
            whisker_functor(from, to, &w.action[a], &f.action[b])
        },
    )
}

/// The coend diagram of `W(x) × F(y)` for `W` on `C^op` and `F` on `C`:
/// the value at `f: x → y` is `W(y) × F(x)`.
pub fn weighted_colimit_diagram(
    w: &CatValuedDiagram,
    f: &CatValuedDiagram,
) -> Result<(TwCat, CatValuedDiagram)> {
    let c = &f.index;
    if w.index != opposite(c) {
        return Err(Error::InvalidDiagram(
            "weight must be indexed by the opposite".into(),
        ));
    }
    coend_diagram(
        c,
        |u, v| product(&w.values[u], &f.values[v]),
        |p, q| {
            Ok(product_functor(
                &w.action[p],
                &f.action[q],
                &f.values[c.src(q)],
                &f.values[c.tgt(q)],
            ))
        },
    )
}

/// Which of the four slice-weighted constructions to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Laxity {
    Lax,
    Oplax,
}

/// The coend diagram for the lax (`C_{y/} × F(x)`) or oplax
/// (`(C_{y/})^op × F(x)`) colimit of `F` on `C`.
pub fn lax_colimit_diagram(
    f: &CatValuedDiagram,
    kind: Laxity,
) -> Result<(TwCat, CatValuedDiagram)> {
    let w = under_slices(&f.index)?;
    let w = match kind {
        Laxity::Lax => w,
        Laxity::Oplax => opposite_values(&w),
    };
    weighted_colimit_diagram(&w, f)
}

/// The lax limit, the end of `Fun(C_{/x}, F(y))`, or the oplax limit, the
/// end of `Fun((C_{/x})^op, F(y))`.
pub fn lax_limit(f: &CatValuedDiagram, kind: Laxity) -> Result<Limit> {
    let w = over_slices(&f.index)?;
    let w = match kind {
        Laxity::Lax => w,
        Laxity::Oplax => opposite_values(&w),
    };
    weighted_limit(&w, f)
}

/// Natural transformations `F ⇒ G` computed as elements of the end of
/// `Hom_D(F−, G−)`, compared with direct enumeration through the map
/// `θ ↦ (f ↦ G(f)∘θ_x)`.
pub fn nat_via_end(c: &FinCat, d: &FinCat, f: &Functor, g: &Functor) -> Result<Verdict> {
    let tw = twisted_arrow(c)?;
    let t = SetBifunctor::hom_between(c, d, f, g);
    let end = set_end(&t, &tw)?;
    let direct = nat_transformations(c, d, f, g);
    let mut image = Vec::with_capacity(direct.len());
    for th in &direct {
        let fam: Vec<usize> = c
            .morphisms()
            .map(|m| {
                let v = d.compose(g.mor[m], th.components[c.src(m)]);
                position(d.hom(f.obj[c.src(m)], g.obj[c.tgt(m)]), v)
            })
            .collect();
        image.push(fam);
    }
    let mut sorted_img = image.clone();
    sorted_img.sort();
    sorted_img.dedup();
    let mut sorted_end = end.clone();
    sorted_end.sort();
    let ok = sorted_img.len() == image.len() && sorted_img == sorted_end;
    Ok(Verdict::check(
        ok,
        format!(
            "{} transformations, {} end elements",
            direct.len(),
            end.len()
        ),
        || json!({"direct": direct.len(), "end": end.len()}),
    ))
}

/// Strict transformations between category-valued diagrams and their
/// modifications, built directly.
pub fn strict_transformations(f: &CatValuedDiagram, g: &CatValuedDiagram) -> Result<FinCat> {
    let d = &f.index;
    let n = d.num_objects();
    let fcs: Vec<FunctorCategory> = d
        .objects()
        .map(|x| functor_category(&f.values[x], &g.values[x]))
        .collect::<Result<_>>()?;
    let mut closing: Vec<Vec<Mor>> = vec![Vec::new(); n];
    for m in d.morphisms() {
        if !d.is_identity(m) {
            closing[d.src(m).max(d.tgt(m))].push(m);
        }
    }
    // objects: families of functors α_x with G(m)∘α_x = α_y∘F(m)
    let mut objs: Vec<Vec<usize>> = Vec::new();
    let mut cur = vec![0usize; n];
    fn objects_rec(
        x: usize,
        d: &FinCat,
        f: &CatValuedDiagram,
        g: &CatValuedDiagram,
        fcs: &[FunctorCategory],
        closing: &[Vec<Mor>],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if x == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..fcs[x].functors.len() {
            cur[x] = i;
            let ok = closing[x].iter().all(|&m| {
                let (s, t) = (d.src(m), d.tgt(m));
                let lhs = g.action[m].after(&fcs[s].functors[cur[s]]);
                let rhs = fcs[t].functors[cur[t]].after(&f.action[m]);
                lhs == rhs
            });
            if ok {
                objects_rec(x + 1, d, f, g, fcs, closing, cur, out);
            }
        }
    }
    objects_rec(0, d, f, g, &fcs, &closing, &mut cur, &mut objs);
    // morphisms: families of transformations μ_x with G(m)μ_x = μ_y F(m)
    let mut mors: Vec<Vec<usize>> = Vec::new();
    let mut curm = vec![0usize; n];
    fn mods_rec(
        x: usize,
        d: &FinCat,
        f: &CatValuedDiagram,
        g: &CatValuedDiagram,
        fcs: &[FunctorCategory],
        closing: &[Vec<Mor>],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if x == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..fcs[x].transformations.len() {
            cur[x] = i;
            let ok = closing[x].iter().all(|&m| {
                let (s, t) = (d.src(m), d.tgt(m));
                let ms = &fcs[s].transformations[cur[s]];
                let mt = &fcs[t].transformations[cur[t]];
                let lhs: Vec<Mor> = ms.components.iter().map(|&k| g.action[m].mor[k]).collect();
                let rhs: Vec<Mor> = f.action[m].obj.iter().map(|&w| mt.components[w]).collect();
                lhs == rhs
            });
            if ok {
                mods_rec(x + 1, d, f, g, fcs, closing, cur, out);
            }
        }
    }
    mods_rec(0, d, f, g, &fcs, &closing, &mut curm, &mut mors);
    let obj_ix: HashMap<&Vec<usize>, usize> =
        objs.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let mut mor_keys = Vec::with_capacity(mors.len());
    for fam in &mors {
        let s: Vec<usize> = (0..n).map(|x| fcs[x].cat.src(fam[x])).collect();
        let t: Vec<usize> = (0..n).map(|x| fcs[x].cat.tgt(fam[x])).collect();
        if let (Some(&si), Some(&ti)) = (obj_ix.get(&s), obj_ix.get(&t)) {
            mor_keys.push((si, ti, fam.clone()));
        }
    }
    FinCat::from_keys(
        (0..objs.len()).collect(),
        mor_keys,
        |(s, t, _)| (*s, *t),
        |&i| (i, i, (0..n).map(|x| fcs[x].cat.id(objs[i][x])).collect()),
        |(_, t, b), (s, _, a)| {
            (
                *s,
                *t,
                (0..n).map(|x| fcs[x].cat.compose(b[x], a[x])).collect(),
            )
        },
        |&i| format!("a{i}"),
        |(s, t, fam)| format!("m{s}:{t}:{fam:?}"),
    )
}

/// The end of `Fun(F(x), G(y))`, compared with [`strict_transformations`].
pub fn nat_category_via_end(
    f: &CatValuedDiagram,
    g: &CatValuedDiagram,
) -> Result<(Limit, FinCat, Verdict)> {
    let c = &f.index;
    let end = weighted_limit(f, g)?;
    let direct = strict_transformations(f, g)?;
    let ok = find_isomorphism(&end.cat, &direct).is_some();
    let v = Verdict::check(
        ok,
        format!(
            "end has {}/{} objects/morphisms, direct {}/{}",
            end.cat.num_objects(),
            end.cat.num_morphisms(),
            direct.num_objects(),
            direct.num_morphisms()
        ),
        || json!({"index_objects": c.num_objects()}),
    );
    Ok((end, direct, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{discrete, poset, preorder, Functor};

    /// Oracle: count factorization pairs directly.
    fn tw_morphism_count(c: &FinCat) -> usize {
        let mut n = 0;
        for f in c.morphisms() {
            for g in c.morphisms() {
                for &a in c.hom(c.src(g), c.src(f)) {
                    for &b in c.hom(c.tgt(f), c.tgt(g)) {
                        if c.compose_all(&[b, f, a]) == g {
                            n += 1;
                        }
                    }
                }
            }
        }
        n
    }

    #[test]
    fn twisted_arrow_small_ordinals() {
        let t0 = twisted_arrow(&poset(0)).unwrap();
        assert_eq!((t0.cat.num_objects(), t0.cat.num_morphisms()), (1, 1));
        let t1 = twisted_arrow(&poset(1)).unwrap();
        assert_eq!((t1.cat.num_objects(), t1.cat.num_morphisms()), (3, 5));
        let t2 = twisted_arrow(&poset(2)).unwrap();
        assert_eq!((t2.cat.num_objects(), t2.cat.num_morphisms()), (6, 15));
        assert_eq!(tw_morphism_count(&poset(2)), 15);
        for t in [&t0, &t1, &t2] {
            assert!(t.cat.law_violations().is_empty());
            assert!(t.to_base.is_valid(&t.cat, &t.base));
            assert!(t.to_base_op.is_valid(&t.cat, &opposite(&t.base)));
        }
    }

    #[test]
    fn twisted_arrow_of_interval_shape() {
        // id_0 → u ← id_1
        let c = poset(1);
        let t = twisted_arrow(&c).unwrap();
        let u = c.hom(0, 1)[0];
        let (i0, i1) = (c.id(0), c.id(1));
        assert_eq!(t.cat.hom(i0, u).len(), 1);
        assert_eq!(t.cat.hom(i1, u).len(), 1);
        assert!(t.cat.hom(u, i0).is_empty());
        assert!(t.cat.hom(i0, i1).is_empty());
    }

    #[test]
    fn outer_to_inner_matches_interval_order() {
        for n in 0..4 {
            let c = poset(n);
            let t = twisted_arrow(&c).unwrap();
            let p = t.outer_to_inner();
            let pairs: Vec<(usize, usize)> = c.morphisms().map(|f| (c.src(f), c.tgt(f))).collect();
            let ex = preorder(
                pairs.iter().map(|(i, j)| format!("{i}{j}")).collect(),
                |a, b| {
                    let ((i, j), (k, l)) = (pairs[a], pairs[b]);
                    i <= k && k <= l && l <= j
                },
            )
            .unwrap();
            // identity on objects is the isomorphism
            for a in p.objects() {
                for b in p.objects() {
                    assert_eq!(p.hom(a, b).len(), ex.hom(a, b).len());
                }
            }
        }
    }

    #[test]
    fn hom_end_and_coend_on_interval() {
        let c = poset(1);
        let tw = twisted_arrow(&c).unwrap();
        let t = SetBifunctor::hom(&c);
        assert!(t.defect().is_none());
        assert_eq!(set_end(&t, &tw).unwrap().len(), 1);
        assert_eq!(set_coend(&t, &tw).num_classes, 2);
    }

    #[test]
    fn discrete_end_is_product_and_coend_is_sum() {
        let c = discrete(3);
        let tw = twisted_arrow(&c).unwrap();
        let sizes = [2usize, 3, 1];
        let t = SetBifunctor {
            base: &c,
            size: Box::new(move |x, y| if x == y { sizes[x] } else { 0 }),
            act: Box::new(|_, _, e| e),
        };
        assert_eq!(set_end(&t, &tw).unwrap().len(), 6);
        assert_eq!(set_coend(&t, &tw).num_classes, 6);
    }

    #[test]
    fn coend_of_hom_on_group_is_conjugacy_classes() {
        // ∫^* G(*, *) = G modulo conjugation; Z/3 is abelian → 3 classes
        let g = crate::fincat::cyclic_group(3);
        let tw = twisted_arrow(&g).unwrap();
        let t = SetBifunctor::hom(&g);
        assert_eq!(set_coend(&t, &tw).num_classes, 3);
        // the end of Hom on a group is its center
        assert_eq!(set_end(&t, &tw).unwrap().len(), 3);
    }

    #[test]
    fn nat_via_end_simple() {
        let c = poset(1);
        let id = identity_functor(&c);
        let k1 = Functor::constant(&c, &c, 1);
        let v = nat_via_end(&c, &c, &id, &k1).unwrap();
        assert!(v.pass, "{}", v.detail);
        assert!(v.detail.starts_with("1 transformations"));
        assert!(nat_via_end(&c, &c, &id, &id).unwrap().pass);
    }

    #[test]
    fn unit_weight_limit_is_plain_limit() {
        let c = poset(1);
        let f = CatValuedDiagram::from_generators(c.clone(), vec![poset(1), poset(0)], |_| {
            Functor::constant(&poset(1), &poset(0), 0)
        })
        .unwrap();
        let w = CatValuedDiagram::constant(c.clone(), poset(0));
        let wl = weighted_limit(&w, &f).unwrap();
        let l = limit_cat(&f).unwrap();
        assert!(find_isomorphism(&wl.cat, &l.cat).is_some());
    }

    #[test]
    fn representable_weight_yoneda() {
        // W = C(0, −) as discrete categories, F set-valued: weighted limit ≅ F(0)
        let c = poset(1);
        let w =
            CatValuedDiagram::from_generators(c.clone(), vec![discrete(1), discrete(1)], |_| {
                identity_functor(&discrete(1))
            })
            .unwrap();
        let f =
            CatValuedDiagram::from_generators(c.clone(), vec![discrete(3), discrete(2)], |_| {
                let d2 = discrete(2);
                Functor::new(vec![0, 1, 1], vec![d2.id(0), d2.id(1), d2.id(1)])
            })
            .unwrap();
        let wl = weighted_limit(&w, &f).unwrap();
        assert!(find_isomorphism(&wl.cat, &discrete(3)).is_some());
    }

    #[test]
    fn oplax_limit_example_is_interval() {
        // F on A = [1]^op with F(0) = [0], F(1) = [1]; the arrow 1 → 0 of A
        let a = opposite(&poset(1));
        let f = CatValuedDiagram::from_generators(a, vec![poset(0), poset(1)], |_| {
            Functor::constant(&poset(1), &poset(0), 0)
        })
        .unwrap();
        let l = lax_limit(&f, Laxity::Oplax).unwrap();
        assert!(find_isomorphism(&l.cat, &poset(1)).is_some());
    }

    #[test]
    fn lax_colimit_diagram_on_interval() {
        let c = poset(1);
        let f = CatValuedDiagram::from_generators(c.clone(), vec![poset(1), poset(0)], |_| {
            Functor::constant(&poset(1), &poset(0), 0)
        })
        .unwrap();
        let (tw, d) = lax_colimit_diagram(&f, Laxity::Lax).unwrap();
        let u = c.hom(0, 1)[0];
        // H(id_0) = [1] × A, H(u) = A, H(id_1) = B
        assert_eq!(d.values[c.id(0)].num_objects(), 4);
        assert_eq!(d.values[u].num_objects(), 2);
        assert_eq!(d.values[c.id(1)].num_objects(), 1);
        assert_eq!(tw.cat.num_morphisms(), 5);
    }

    #[test]
    fn strict_transformations_over_point() {
        let f = CatValuedDiagram::constant(poset(0), poset(1));
        let g = CatValuedDiagram::constant(poset(0), poset(1));
        let (end, direct, v) = nat_category_via_end(&f, &g).unwrap();
        assert!(v.pass);
        assert_eq!(end.cat.num_objects(), 3);
        assert_eq!(direct.num_morphisms(), 6);
    }

    #[test]
    fn strict_transformations_over_interval() {
        let c = poset(1);
        let f = CatValuedDiagram::constant(c.clone(), poset(1));
        let g = CatValuedDiagram::constant(c, poset(1));
        let (_, _, v) = nat_category_via_end(&f, &g).unwrap();
        assert!(v.pass, "{}", v.detail);
    }
}

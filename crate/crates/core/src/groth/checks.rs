use std::collections::{HashMap, HashSet};

use serde_json::json;

use super::constructions::{
    cart_groth, cocart_groth, collage_left, collage_right, exponentiate, fiber_product,
    free_fibration, phi_fibration, CocartGroth,
};
use super::dfib::is_discrete_fibration;
use super::{is_groth_fibration, is_groth_opfibration, FibCat};
use crate::error::{Error, Result};
use crate::fincat::{
    check_colimit_cocone, compose_functors, find_isomorphism, functor_category, generates_apex,
    identity_functor, is_equivalence, is_isomorphism, nat_transformations, opposite, poset,
    product, slice_over, slice_under, CatValuedDiagram, FinCat, Functor, FunctorCategory,
    FunctorSearch, Mor, NatTrans, Ob,
};
use crate::twisted::{lax_colimit_diagram, lax_limit, opposite_values, Laxity, TwCat};
use crate::verdict::Verdict;

/// Functors `dom → q.total` lying strictly over `over`, optionally sending
/// the morphisms flagged in `cartesian` to Cartesian morphisms.
fn functors_over(
    dom: &FinCat,
    q: &FibCat,
    over: &Functor,
    cartesian: Option<&[bool]>,
) -> Result<Vec<Functor>> {
    let cands: Vec<Vec<Ob>> = dom.objects().map(|x| q.objects_over(over.obj[x])).collect();
    let filter = |m: Mor, n: Mor| {
        q.proj.mor[n] == over.mor[m] && cartesian.is_none_or(|c| !c[m] || q.cartesian[n])
    };
    FunctorSearch::new(dom, &q.total)
        .objects(cands)
        .filter(&filter)
        .collect()
}

/// Functors into `q.total` with the natural transformations whose
/// components are vertical.
fn vertical_category(dom: &FinCat, q: &FibCat, functors: Vec<Functor>) -> Result<FunctorCategory> {
    let mut mors: Vec<(usize, usize, NatTrans)> = Vec::new();
    for (i, f) in functors.iter().enumerate() {
        for (j, g) in functors.iter().enumerate() {
            for t in nat_transformations(dom, &q.total, f, g) {
                if t.components.iter().all(|&c| q.is_vertical(c)) {
                    mors.push((i, j, t));
                }
            }
        }
        crate::caps::check(
            "vertical transformations",
            mors.len(),
            crate::caps::caps().max_morphisms,
        )?;
    }
    let total = &q.total;
    let cat = FinCat::from_keys(
        (0..functors.len()).collect(),
        mors.clone(),
        |(i, j, _)| (*i, *j),
        |&i| (i, i, NatTrans::identity(total, &functors[i])),
        |(_, k, b), (i, _, a)| (*i, *k, b.vertical(total, a)),
        |i| format!("s{i}"),
        |(i, j, t)| {
            let names: Vec<&str> = t
                .components
                .iter()
                .map(|&c| total.morphism_name(c))
                .collect();
            format!("s{i}>s{j}:{}", names.join(","))
        },
    )?;
    Ok(FunctorCategory {
        cat,
        functors,
        transformations: mors.into_iter().map(|(_, _, t)| t).collect(),
    })
}

/// Restriction along `unit`, sending `G` to `G∘unit` and `θ` to its
/// components at the image of `unit`.
fn restriction(from: &FunctorCategory, to: &FunctorCategory, unit: &Functor) -> Option<Functor> {
    let idx = to.index();
    let mut obj = Vec::with_capacity(from.functors.len());
    for g in &from.functors {
        obj.push(*idx.get(&compose_functors(g, unit))?);
    }
    let mut mor = Vec::with_capacity(from.transformations.len());
    for (m, t) in from.transformations.iter().enumerate() {
        let comps = NatTrans {
            components: unit.obj.iter().map(|&x| t.components[x]).collect(),
        };
        mor.push(to.morphism_of(obj[from.cat.src(m)], obj[from.cat.tgt(m)], &comps)?);
    }
    Some(Functor::new(obj, mor))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdjunctionReport {
    pub verdict: Verdict,
    /// Cartesian functors from the free fibration to `q`, over the base.
    pub cartesian_functors: usize,
    /// Functors from `E` to `q`, over the base.
    pub functors_over_base: usize,
}

/// Restriction along the unit `E → F(p)` from Cartesian functors
/// `F(p) → Q` over `C` to functors `E → Q` over `C`, both with vertical
/// transformations, is an equivalence.
pub fn adjunction_check(
    e: &FinCat,
    c: &FinCat,
    p: &Functor,
    q: &FibCat,
) -> Result<AdjunctionReport> {
    if !is_groth_fibration(q) {
        return Err(Error::NotAFibration(
            "target of the adjunction check".into(),
        ));
    }
    if q.base != *c {
        return Err(Error::DomainMismatch(
            "fibration lives over a different base".into(),
        ));
    }
    let ff = free_fibration(e, c, p)?;
    let lhs = functors_over(&ff.fib.total, q, &ff.fib.proj, Some(&ff.fib.cartesian))?;
    let rhs = functors_over(e, q, p, None)?;
    let left = vertical_category(&ff.fib.total, q, lhs)?;
    let right = vertical_category(e, q, rhs)?;
    let (nl, nr) = (left.functors.len(), right.functors.len());
    let verdict = match restriction(&left, &right, &ff.unit) {
        None => Verdict::fail(
            "restriction along the unit lands over the base",
            json!({ "cartesian_functors": nl, "functors_over_base": nr }),
        ),
        Some(r) => Verdict::check(
            is_equivalence(&r, &left.cat, &right.cat),
            format!("restriction along the unit is an equivalence ({nl} vs {nr} functors)"),
            || json!({ "cartesian_functors": nl, "functors_over_base": nr, "restriction": r }),
        ),
    };
    Ok(AdjunctionReport {
        verdict,
        cartesian_functors: nl,
        functors_over_base: nr,
    })
}

/// The free fibration on an object `x: [0] → C` is the projection `C_{/x} → C`.
pub fn free_of_point_check(c: &FinCat, x: Ob) -> Result<Verdict> {
    let pt = poset(0);
    let p = Functor::new(vec![x], vec![c.id(x)]);
    let ff = free_fibration(&pt, c, &p)?;
    let sl = slice_over(c, x)?;
    let obj: Vec<Ob> = ff
        .objects
        .iter()
        .map(|&(_, phi)| sl.object_of(phi).expect("slice object"))
        .collect();
    let mor: Vec<Mor> = ff
        .morphisms
        .iter()
        .map(|&(_, phi2, psi, _)| sl.morphism_of((psi, phi2)).expect("slice morphism"))
        .collect();
    let iso = Functor::new(obj, mor);
    let over = compose_functors(&sl.proj, &iso) == ff.fib.proj;
    Ok(Verdict::check(
        is_isomorphism(&iso, &ff.fib.total, &sl.cat) && over,
        "free fibration on a point is the over-category",
        || json!({ "object": c.object_name(x) }),
    ))
}

/// `F(K × E) ≅ K × F(E)` over `C`, by the evident map on keys.
pub fn free_product_check(k: &FinCat, e: &FinCat, c: &FinCat, p: &Functor) -> Result<Verdict> {
    let ke = product(k, e)?;
    let (ne, nem) = (e.num_objects(), e.num_morphisms());
    let pk = Functor::new(
        ke.objects().map(|o| p.obj[o % ne]).collect(),
        ke.morphisms().map(|m| p.mor[m % nem]).collect(),
    );
    let big = free_fibration(&ke, c, &pk)?;
    let small = free_fibration(e, c, p)?;
    let target = product(k, &small.fib.total)?;
    let (nfo, nfm) = (
        small.fib.total.num_objects(),
        small.fib.total.num_morphisms(),
    );
    let obj: Vec<Ob> = big
        .objects
        .iter()
        .map(|&(o, phi)| (o / ne) * nfo + small.object_of(o % ne, phi).expect("object"))
        .collect();
    let mor: Vec<Mor> = big
        .morphisms
        .iter()
        .map(|&(phi1, phi2, psi, m)| {
            (m / nem) * nfm
                + small
                    .morphism_of((phi1, phi2, psi, m % nem))
                    .expect("morphism")
        })
        .collect();
    let iso = Functor::new(obj, mor);
    let proj_after = Functor::new(
        iso.obj
            .iter()
            .map(|&o| small.fib.proj.obj[o % nfo])
            .collect(),
        iso.mor
            .iter()
            .map(|&m| small.fib.proj.mor[m % nfm])
            .collect(),
    );
    Ok(Verdict::check(
        is_isomorphism(&iso, &big.fib.total, &target) && proj_after == big.fib.proj,
        "free fibration commutes with products by a constant category",
        || json!({ "objects": big.fib.total.num_objects(), "target_objects": target.num_objects() }),
    ))
}

/// Sections of `q` with vertical transformations.
pub fn sections(q: &FibCat) -> Result<FunctorCategory> {
    let id = identity_functor(&q.base);
    let fs = functors_over(&q.base, q, &id, None)?;
    vertical_category(&q.base, q, fs)
}

fn iso_witness(iso: &Functor, dom: &FinCat, cod: &FinCat) -> serde_json::Value {
    json!({
        "objects": dom.objects().map(|x| [dom.object_name(x), cod.object_name(iso.obj[x])]).collect::<Vec<_>>(),
        "morphisms": dom.morphisms().map(|m| [dom.morphism_name(m), cod.morphism_name(iso.mor[m])]).collect::<Vec<_>>(),
    })
}

/// Sections of the Cartesian fibration of `F` on `C^op` against the oplax
/// limit of `F`.  On success the witness is the isomorphism found.
pub fn sections_vs_oplax_limit(f: &CatValuedDiagram) -> Result<Verdict> {
    let g = cart_groth(f)?;
    let s = sections(&g.fib)?;
    let l = lax_limit(f, Laxity::Oplax)?;
    Ok(match find_isomorphism(&s.cat, &l.cat) {
        Some(iso) => Verdict {
            pass: true,
            detail: format!("sections ≅ oplax limit ({} objects)", s.cat.num_objects()),
            witness: Some(iso_witness(&iso, &s.cat, &l.cat)),
        },
        None => Verdict::fail(
            "sections ≅ oplax limit",
            json!({
                "sections": [s.cat.num_objects(), s.cat.num_morphisms()],
                "oplax_limit": [l.cat.num_objects(), l.cat.num_morphisms()],
            }),
        ),
    })
}

/// For `k: K → C`, functors `K → Φ` over `C` correspond bijectively to
/// functors `K ×_C ∫F → X`.
pub fn phi_universal_check(
    f: &CatValuedDiagram,
    x: &FinCat,
    k: &FinCat,
    kp: &Functor,
) -> Result<Verdict> {
    let c = &f.index;
    let phi = phi_fibration(f, x)?;
    let g = &phi.groth;
    let un = cocart_groth(f)?;
    let fp = fiber_product(k, kp, &un.fib.total, &un.fib.proj, c)?;
    let rhs = functors_over(k, &g.fib, kp, None)?;
    let lhs_count = FunctorSearch::new(&fp.cat, x).count();
    let fun_of = |kk: Ob, gfun: &Functor| -> (Ob, Functor) {
        let (cc, gi) = g.objects[gfun.obj[kk]];
        (cc, phi.functor_cats[cc].functors[gi].clone())
    };
    let mut images = HashSet::new();
    for gfun in &rhs {
        let obj: Vec<Ob> = fp
            .objects
            .iter()
            .map(|&(kk, o)| {
                let (_, a) = un.objects[o];
                fun_of(kk, gfun).1.obj[a]
            })
            .collect();
        let mut mor = Vec::with_capacity(fp.morphisms.len());
        for &(m, n) in &fp.morphisms {
            let (_, a, xi) = un.morphisms[n];
            let (_, _, nu) = g.morphisms[gfun.mor[m]];
            let (cs, _) = fun_of(k.src(m), gfun);
            let (_, g1) = fun_of(k.tgt(m), gfun);
            let nu_a = phi.functor_cats[cs].transformations[nu].components[a];
            mor.push(x.compose(g1.mor[xi], nu_a));
        }
        let h = Functor::new(obj, mor);
        if let Some(why) = h.defect(&fp.cat, x) {
            return Ok(Verdict::fail(
                "transposed functor is a functor",
                json!({ "defect": why }),
            ));
        }
        if !images.insert(h) {
            return Ok(Verdict::fail(
                "transposition is injective",
                json!({ "functors_into_phi": rhs.len() }),
            ));
        }
    }
    Ok(Verdict::check(
        images.len() == lhs_count,
        format!(
            "Hom over C into Φ has {} elements, Hom from the fiber product has {lhs_count}",
            rhs.len()
        ),
        || json!({ "over_c": rhs.len(), "from_fiber_product": lhs_count }),
    ))
}

/// Legs `C_{y/} × F(x) → ∫F` of the canonical cocone, one per arrow `x → y`.
fn lax_legs(f: &CatValuedDiagram, tw: &TwCat, apex: &CocartGroth) -> Result<Vec<Functor>> {
    let c = &f.index;
    let mut slices = HashMap::new();
    let mut legs = Vec::with_capacity(tw.cat.num_objects());
    for phi in c.morphisms() {
        let (x, y) = (c.src(phi), c.tgt(phi));
        if let std::collections::hash_map::Entry::Vacant(e) = slices.entry(y) {
            e.insert(slice_under(c, y)?);
        }
        let sl = &slices[&y];
        let fx = &f.values[x];
        let (nx, nxm) = (fx.num_objects(), fx.num_morphisms());
        let mut obj = Vec::with_capacity(sl.arrows.len() * nx);
        for &g in &sl.arrows {
            let act = &f.action[c.compose(g, phi)];
            for a in fx.objects() {
                obj.push(apex.object_of(c.tgt(g), act.obj[a]).expect("apex object"));
            }
        }
        let mut mor = Vec::with_capacity(sl.keys.len() * nxm);
        for &(g, h) in &sl.keys {
            let first = &f.action[c.compose(g, phi)];
            let whole = &f.action[c.compose(h, c.compose(g, phi))];
            for m in fx.morphisms() {
                let x0 = first.obj[fx.src(m)];
                mor.push(
                    apex.morphism_of(h, x0, whole.mor[m])
                        .expect("apex morphism"),
                );
            }
        }
        legs.push(Functor::new(obj, mor));
    }
    Ok(legs)
}

/// The coCartesian fibration of `F` on `C` is the lax colimit of `F`,
/// probed through the coend diagram `C_{y/} × F(x)`.
pub fn lax_colimit_check(f: &CatValuedDiagram, probes: &[FinCat]) -> Result<Verdict> {
    let (tw, d) = lax_colimit_diagram(f, Laxity::Lax)?;
    let apex = cocart_groth(f)?;
    let legs = lax_legs(f, &tw, &apex)?;
    let gen = generates_apex(&apex.fib.total, &legs);
    let v = check_colimit_cocone(&d, &apex.fib.total, &legs, probes)?;
    Ok(Verdict::all(vec![
        Verdict::check(
            gen.is_none(),
            "legs generate the Grothendieck construction",
            || json!({ "detail": gen }),
        ),
        v,
    ]))
}

/// The Cartesian fibration of `F` on `C^op` is the oplax colimit of `F`:
/// the opposite of the lax cocone for `F` with opposite values.
pub fn oplax_colimit_check(f: &CatValuedDiagram, probes: &[FinCat]) -> Result<Verdict> {
    let g = opposite_values(f);
    let (tw, d) = lax_colimit_diagram(f, Laxity::Oplax)?;
    let apex0 = cocart_groth(&g)?;
    let legs = lax_legs(&g, &tw, &apex0)?;
    let apex = opposite(&apex0.fib.total);
    let cart = cart_groth(f)?;
    let same = find_isomorphism(&apex, &cart.fib.total).is_some();
    let gen = generates_apex(&apex, &legs);
    let v = check_colimit_cocone(&d, &apex, &legs, probes)?;
    Ok(Verdict::all(vec![
        Verdict::check(
            same,
            "apex is the Cartesian Grothendieck construction",
            || json!({ "apex": apex.num_objects(), "cartesian": cart.fib.total.num_objects() }),
        ),
        Verdict::check(
            gen.is_none(),
            "legs generate the apex",
            || json!({ "detail": gen }),
        ),
        v,
    ]))
}

/// Fibers of `Fun(D, ∫F) → Fun(D, C)` against the oplax limit of `F∘φ^op`.
pub fn fiber_formula_check(f: &CatValuedDiagram, d: &FinCat, phi: &Functor) -> Result<Verdict> {
    let q = cart_groth(f)?;
    let base = opposite(&f.index);
    if let Some(why) = phi.defect(d, &base) {
        return Err(Error::InvalidFunctor(why));
    }
    let exp = exponentiate(&q.fib, d)?;
    let fibration = is_groth_fibration(&exp.fib);
    let at = exp
        .base_functors
        .object_of(phi)
        .ok_or_else(|| Error::InvalidFunctor("probe functor missing from Fun(D, C)".into()))?;
    let (fiber, _) = exp.fib.fiber(at)?;
    let restricted = f.restrict(&opposite(d), phi);
    let l = lax_limit(&restricted, Laxity::Oplax)?;
    let iso = find_isomorphism(&fiber, &l.cat);
    Ok(Verdict::all(vec![
        Verdict::check(
            fibration,
            "postcomposition is a Cartesian fibration",
            || json!({}),
        ),
        Verdict::check(iso.is_some(), "fiber matches the end formula", || {
            json!({
                "fiber": [fiber.num_objects(), fiber.num_morphisms()],
                "end": [l.cat.num_objects(), l.cat.num_morphisms()],
            })
        }),
    ]))
}

/// Restriction `Fun(collage, D) → Fun(B, D)` is a (co)Cartesian fibration
/// whose fiber over `F` is `Fun(E, D)_{F∘p/}` (left collage) or
/// `Fun(E, D)_{/F∘p}` (right collage).
pub fn undercat_fiber_check(
    e: &FinCat,
    b: &FinCat,
    p: &Functor,
    d: &FinCat,
    fb: &Functor,
    left: bool,
) -> Result<Verdict> {
    let col = if left {
        collage_left(e, b, p)?
    } else {
        collage_right(e, b, p)?
    };
    let whole = functor_category(&col.cat, d)?;
    let on_base = functor_category(b, d)?;
    let r = restriction(&whole, &on_base, &col.from_base)
        .ok_or_else(|| Error::InvalidFunctor("restriction leaves Fun(B, D)".into()))?;
    let fib = FibCat::new(whole.cat.clone(), on_base.cat.clone(), r)?;
    let kind = if left {
        is_groth_fibration(&fib)
    } else {
        is_groth_opfibration(&fib)
    };
    let at = on_base
        .object_of(fb)
        .ok_or_else(|| Error::InvalidFunctor("F is not a functor B → D".into()))?;
    let (fiber, _) = fib.fiber(at)?;
    let on_e = functor_category(e, d)?;
    let fp = on_e
        .object_of(&compose_functors(fb, p))
        .ok_or_else(|| Error::InvalidFunctor("F∘p missing from Fun(E, D)".into()))?;
    let slice = if left {
        slice_under(&on_e.cat, fp)?
    } else {
        slice_over(&on_e.cat, fp)?
    };
    let iso = find_isomorphism(&fiber, &slice.cat);
    Ok(Verdict::all(vec![
        Verdict::check(
            kind,
            if left {
                "restriction is a Cartesian fibration"
            } else {
                "restriction is a coCartesian fibration"
            },
            || json!({}),
        ),
        Verdict::check(
            iso.is_some(),
            "fiber is the slice of Fun(E, D) at F∘p",
            || {
                json!({
                    "fiber": [fiber.num_objects(), fiber.num_morphisms()],
                    "slice": [slice.cat.num_objects(), slice.cat.num_morphisms()],
                })
            },
        ),
    ]))
}

/// Hypotheses and conclusion of the composition criterion for a triangle
/// `p = q∘f`.  The conclusion is only evaluated when every hypothesis holds.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoOfThreeReport {
    pub hypotheses: Vec<(String, bool)>,
    pub conclusion: Option<bool>,
    pub verdict: Verdict,
}

impl TwoOfThreeReport {
    fn new(
        hypotheses: Vec<(String, bool)>,
        conclusion: impl FnOnce() -> Result<bool>,
    ) -> Result<Self> {
        let all = hypotheses.iter().all(|h| h.1);
        let conclusion = if all { Some(conclusion()?) } else { None };
        let table = json!({
            "hypotheses": hypotheses.iter().map(|(n, b)| json!({ "name": n, "holds": b })).collect::<Vec<_>>(),
            "conclusion": conclusion,
        });
        let verdict = match conclusion {
            Some(false) => Verdict::fail("hypotheses hold but the conclusion fails", table),
            Some(true) => Verdict::pass("hypotheses and conclusion hold"),
            None => Verdict {
                pass: true,
                detail: "a hypothesis fails; conclusion not asserted".into(),
                witness: Some(table),
            },
        };
        Ok(TwoOfThreeReport {
            hypotheses,
            conclusion,
            verdict,
        })
    }
}

fn check_triangle(f: &Functor, p: &Functor, q: &Functor) -> Result<()> {
    if compose_functors(q, f) != *p {
        return Err(Error::InvalidFunctor(
            "the triangle p = q∘f does not commute".into(),
        ));
    }
    Ok(())
}

/// For `f: E → D` over `C`, the Cartesian flags of each fiber functor
/// `f_c: E_c → D_c`, indexed by morphisms of `E` (false off the fibers),
/// and whether every `f_c` is a Cartesian fibration.
fn fiberwise(pe: &FibCat, qd: &FibCat, f: &Functor) -> Result<(Vec<bool>, bool)> {
    let mut flags = vec![false; pe.total.num_morphisms()];
    let mut all = true;
    for c in pe.base.objects() {
        let (ec, ie) = pe.fiber(c)?;
        let (dc, id) = qd.fiber(c)?;
        let oinv: HashMap<Ob, Ob> = id.obj.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let minv: HashMap<Mor, Mor> = id.mor.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let fc = Functor::new(
            ie.obj.iter().map(|&o| oinv[&f.obj[o]]).collect(),
            ie.mor.iter().map(|&m| minv[&f.mor[m]]).collect(),
        );
        let local = FibCat::new(ec, dc, fc)?;
        all &= is_groth_fibration(&local);
        for (i, &m) in ie.mor.iter().enumerate() {
            flags[m] = local.cartesian[i];
        }
    }
    Ok((flags, all))
}

/// The composition criterion for Cartesian fibrations, checked on a
/// triangle `f: E → D`, `p: E → C`, `q: D → C`.
pub fn two_of_three_cart(
    e: &FinCat,
    d: &FinCat,
    c: &FinCat,
    f: &Functor,
    p: &Functor,
    q: &Functor,
) -> Result<TwoOfThreeReport> {
    check_triangle(f, p, q)?;
    let pe = FibCat::new(e.clone(), c.clone(), p.clone())?;
    let qd = FibCat::new(d.clone(), c.clone(), q.clone())?;
    let h1 = is_groth_fibration(&pe) && is_groth_fibration(&qd);
    let h2 = e
        .morphisms()
        .all(|m| !pe.cartesian[m] || qd.cartesian[f.mor[m]]);
    let (fcart, h3) = fiberwise(&pe, &qd, f)?;
    let mut h4 = true;
    'outer: for gamma in e.morphisms() {
        if !pe.is_vertical(gamma) || !fcart[gamma] {
            continue;
        }
        let (e1, e0) = (e.src(gamma), e.tgt(gamma));
        for &al in e.incoming(e1) {
            if !pe.cartesian[al] {
                continue;
            }
            let phi = p.mor[al];
            for &de in e.incoming(e0) {
                if !pe.cartesian[de] || p.mor[de] != phi {
                    continue;
                }
                let target = e.compose(gamma, al);
                for &beta in e.hom(e.src(al), e.src(de)) {
                    if pe.is_vertical(beta) && e.compose(de, beta) == target && !fcart[beta] {
                        h4 = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    TwoOfThreeReport::new(
        vec![
            ("p and q are Cartesian fibrations".into(), h1),
            ("f preserves Cartesian morphisms".into(), h2),
            ("each fiber functor is a Cartesian fibration".into(), h3),
            (
                "pullback preserves fiberwise Cartesian morphisms".into(),
                h4,
            ),
        ],
        || {
            Ok(is_groth_fibration(&FibCat::new(
                e.clone(),
                d.clone(),
                f.clone(),
            )?))
        },
    )
}

/// The discrete version: `p` and `q` discrete fibrations force `f` to be one.
pub fn two_of_three_discrete(
    e: &FinCat,
    d: &FinCat,
    c: &FinCat,
    f: &Functor,
    p: &Functor,
    q: &Functor,
) -> Result<TwoOfThreeReport> {
    check_triangle(f, p, q)?;
    let h = is_discrete_fibration(e, c, p) && is_discrete_fibration(d, c, q);
    TwoOfThreeReport::new(vec![("p and q are discrete fibrations".into(), h)], || {
        Ok(is_discrete_fibration(e, d, f))
    })
}

/// Straightening the Cartesian construction of a strict `F` with its
/// canonical cleavage recovers `F` on the nose, with identity comparisons.
pub fn straighten_round_trip(f: &CatValuedDiagram) -> Result<Verdict> {
    let g = cart_groth(f)?;
    let cl = super::Cleavage::canonical(&g.fib)?;
    let s = super::straighten(&g.fib, &cl)?;
    let c = &g.fib.base;
    // fiber morphism index → morphism of F(x)
    let mut xi_of: Vec<Vec<Mor>> = Vec::with_capacity(c.num_objects());
    for x in c.objects() {
        let (_, inc) = g.fib.fiber(x)?;
        if inc
            .obj
            .iter()
            .enumerate()
            .any(|(i, &o)| g.objects[o] != (x, i))
        {
            return Ok(Verdict::fail(
                "fiber objects follow F",
                json!({ "object": c.object_name(x) }),
            ));
        }
        xi_of.push(inc.mor.iter().map(|&m| g.morphisms[m].2).collect());
    }
    for gm in c.morphisms() {
        let (from, to) = (c.tgt(gm), c.src(gm));
        let act = &s.action[gm];
        let want = &f.action[gm];
        let objects_agree = act.obj == want.obj;
        let morphisms_agree = act
            .mor
            .iter()
            .enumerate()
            .all(|(i, &j)| xi_of[to][j] == want.mor[xi_of[from][i]]);
        if !objects_agree || !morphisms_agree {
            return Ok(Verdict::fail(
                "straightened action equals F",
                json!({ "morphism": c.morphism_name(gm) }),
            ));
        }
    }
    Ok(Verdict::check(
        s.is_strict(),
        "straightening recovers F with identity comparisons",
        || json!({ "strict": false }),
    ))
}

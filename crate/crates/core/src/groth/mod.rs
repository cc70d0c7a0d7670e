//! Grothendieck fibrations between finite categories: Cartesian morphisms,
//! cleavages, straightening, and the constructions and checks built on them.

mod checks;
mod constructions;
mod dfib;

pub use checks::{
    adjunction_check, fiber_formula_check, free_of_point_check, free_product_check,
    lax_colimit_check, oplax_colimit_check, phi_universal_check, sections, sections_vs_oplax_limit,
    straighten_round_trip, two_of_three_cart, two_of_three_discrete, undercat_fiber_check,
    AdjunctionReport, TwoOfThreeReport,
};
pub use constructions::{
    cart_groth, cocart_groth, collage_left, collage_pushout_check, collage_right, exponentiate,
    fiber_product, free_fibration, phi_fibration, CartGroth, CocartGroth, Collage, Exponential,
    FiberProduct, FreeFibration, Phi,
};
pub use dfib::{dfib_slice_equiv, is_discrete_fibration, presheaf_of, presheaves, Presheaf};

use std::collections::HashMap;

use serde_json::json;

use crate::error::{Error, Result};
use crate::fincat::{
    compose_functors, identity_functor, subcategory, FinCat, Functor, Mor, NatTrans, Ob,
};
use crate::verdict::Verdict;

/// A functor `proj: total → base` with its Cartesian and coCartesian
/// morphisms marked.
#[derive(Clone, Debug, PartialEq)]
pub struct FibCat {
    pub total: FinCat,
    pub base: FinCat,
    pub proj: Functor,
    pub cartesian: Vec<bool>,
    pub cocartesian: Vec<bool>,
}

impl FibCat {
    pub fn new(total: FinCat, base: FinCat, proj: Functor) -> Result<FibCat> {
        if let Some(why) = proj.defect(&total, &base) {
            return Err(Error::InvalidFunctor(why));
        }
        let cartesian = total
            .morphisms()
            .map(|m| is_cartesian_morphism(&total, &base, &proj, m))
            .collect();
        let cocartesian = total
            .morphisms()
            .map(|m| is_cocartesian_morphism(&total, &base, &proj, m))
            .collect();
        Ok(FibCat {
            total,
            base,
            proj,
            cartesian,
            cocartesian,
        })
    }

    pub fn cartesian_ids(&self) -> Vec<Mor> {
        self.total
            .morphisms()
            .filter(|&m| self.cartesian[m])
            .collect()
    }

    pub fn cocartesian_ids(&self) -> Vec<Mor> {
        self.total
            .morphisms()
            .filter(|&m| self.cocartesian[m])
            .collect()
    }

    pub fn objects_over(&self, c: Ob) -> Vec<Ob> {
        self.total
            .objects()
            .filter(|&e| self.proj.obj[e] == c)
            .collect()
    }

    pub fn is_vertical(&self, m: Mor) -> bool {
        self.base.is_identity(self.proj.mor[m])
    }

    /// The fiber over `c` with its inclusion into the total category.
    pub fn fiber(&self, c: Ob) -> Result<(FinCat, Functor)> {
        let objs = self.objects_over(c);
        let id = self.base.id(c);
        let mors: Vec<Mor> = self
            .total
            .morphisms()
            .filter(|&m| self.proj.mor[m] == id)
            .collect();
        subcategory(&self.total, &objs, &mors)
    }
}

/// `m: e' → e` is Cartesian when every `h: e'' → e` with `p(h) = p(m)∘g`
/// factors as `m∘k` for a unique `k` over `g`.
pub fn is_cartesian_morphism(total: &FinCat, base: &FinCat, proj: &Functor, m: Mor) -> bool {
    let (e1, e) = (total.src(m), total.tgt(m));
    let gamma = proj.mor[m];
    let b1 = proj.obj[e1];
    total.objects().all(|e2| {
        let b2 = proj.obj[e2];
        let targets: usize = total
            .hom(e2, e)
            .iter()
            .map(|&h| {
                base.hom(b2, b1)
                    .iter()
                    .filter(|&&g| base.compose(gamma, g) == proj.mor[h])
                    .count()
            })
            .sum();
        let ks = total.hom(e2, e1);
        if ks.len() != targets {
            return false;
        }
        let mut seen = std::collections::HashSet::with_capacity(ks.len());
        ks.iter()
            .all(|&k| seen.insert((total.compose(m, k), proj.mor[k])))
    })
}

/// The dual condition: `m: e → e'` is coCartesian when every `h: e → e''`
/// with `p(h) = g∘p(m)` factors as `k∘m` for a unique `k` over `g`.
pub fn is_cocartesian_morphism(total: &FinCat, base: &FinCat, proj: &Functor, m: Mor) -> bool {
    let (e, e1) = (total.src(m), total.tgt(m));
    let gamma = proj.mor[m];
    let b1 = proj.obj[e1];
    total.objects().all(|e2| {
        let b2 = proj.obj[e2];
        let targets: usize = total
            .hom(e, e2)
            .iter()
            .map(|&h| {
                base.hom(b1, b2)
                    .iter()
                    .filter(|&&g| base.compose(g, gamma) == proj.mor[h])
                    .count()
            })
            .sum();
        let ks = total.hom(e1, e2);
        if ks.len() != targets {
            return false;
        }
        let mut seen = std::collections::HashSet::with_capacity(ks.len());
        ks.iter()
            .all(|&k| seen.insert((total.compose(k, m), proj.mor[k])))
    })
}

/// A pair `(e, γ)` with `γ` ending at `p(e)` that has no Cartesian lift.
pub fn fibration_defect(p: &FibCat) -> Option<(Ob, Mor)> {
    for e in p.total.objects() {
        for &g in p.base.incoming(p.proj.obj[e]) {
            let lifted = p
                .total
                .incoming(e)
                .iter()
                .any(|&m| p.cartesian[m] && p.proj.mor[m] == g);
            if !lifted {
                return Some((e, g));
            }
        }
    }
    None
}

pub fn opfibration_defect(p: &FibCat) -> Option<(Ob, Mor)> {
    for e in p.total.objects() {
        for &g in p.base.out_of(p.proj.obj[e]) {
            let lifted = p
                .total
                .out_of(e)
                .iter()
                .any(|&m| p.cocartesian[m] && p.proj.mor[m] == g);
            if !lifted {
                return Some((e, g));
            }
        }
    }
    None
}

pub fn is_groth_fibration(p: &FibCat) -> bool {
    fibration_defect(p).is_none()
}

pub fn is_groth_opfibration(p: &FibCat) -> bool {
    opfibration_defect(p).is_none()
}

/// A Cartesian lift with target `e` for every base arrow into `p(e)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cleavage {
    pub lift: HashMap<(Ob, Mor), Mor>,
    pub normal: bool,
}

impl Cleavage {
    /// The least-index Cartesian lift of every arrow, identities lifting to
    /// identities.
    pub fn canonical(p: &FibCat) -> Result<Cleavage> {
        if let Some((e, g)) = fibration_defect(p) {
            return Err(Error::NotAFibration(format!(
                "{} has no Cartesian lift to {}",
                p.base.morphism_name(g),
                p.total.object_name(e)
            )));
        }
        let mut lift = HashMap::new();
        for e in p.total.objects() {
            for &g in p.base.incoming(p.proj.obj[e]) {
                let m = if p.base.is_identity(g) {
                    p.total.id(e)
                } else {
                    *p.total
                        .incoming(e)
                        .iter()
                        .filter(|&&m| p.cartesian[m] && p.proj.mor[m] == g)
                        .min()
                        .expect("lift exists")
                };
                lift.insert((e, g), m);
            }
        }
        Ok(Cleavage { lift, normal: true })
    }

    pub fn defect(&self, p: &FibCat) -> Option<String> {
        for e in p.total.objects() {
            for &g in p.base.incoming(p.proj.obj[e]) {
                let Some(&m) = self.lift.get(&(e, g)) else {
                    return Some(format!(
                        "no lift of {} at {}",
                        p.base.morphism_name(g),
                        p.total.object_name(e)
                    ));
                };
                if p.total.tgt(m) != e || p.proj.mor[m] != g || !p.cartesian[m] {
                    return Some(format!(
                        "lift {} is not Cartesian over {}",
                        p.total.morphism_name(m),
                        p.base.morphism_name(g)
                    ));
                }
                if self.normal && p.base.is_identity(g) && !p.total.is_identity(m) {
                    return Some(format!(
                        "identity lift at {} is not an identity",
                        p.total.object_name(e)
                    ));
                }
            }
        }
        None
    }
}

/// A pseudofunctor into categories: values, actions, and invertible
/// comparison transformations `η_{g,f}` for composable pairs.  A
/// contravariant pseudofunctor on `C` sends `γ: c' → c` to `γ*: F(c) → F(c')`
/// and `η_{γ,δ}: δ*γ* ⇒ (γδ)*`.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudofunctorToCat {
    pub dom: FinCat,
    pub contravariant: bool,
    pub values: Vec<FinCat>,
    pub action: Vec<Functor>,
    pub eta: HashMap<(Mor, Mor), NatTrans>,
}

impl PseudofunctorToCat {
    fn action_ends(&self, g: Mor) -> (Ob, Ob) {
        let (s, t) = (self.dom.src(g), self.dom.tgt(g));
        if self.contravariant {
            (t, s)
        } else {
            (s, t)
        }
    }

    /// The two-fold composite of actions along a composable pair `(g, f)`
    /// (as arrows of `dom`, `g∘f` defined), in the order it is applied.
    fn pair_composite(&self, g: Mor, f: Mor) -> Functor {
        if self.contravariant {
            compose_functors(&self.action[f], &self.action[g])
        } else {
            compose_functors(&self.action[g], &self.action[f])
        }
    }

    pub fn is_strict(&self) -> bool {
        self.eta.iter().all(|(&(g, f), t)| {
            let h = self.dom.compose(g, f);
            let (_, cod) = self.action_ends(h);
            t.components
                .iter()
                .all(|&c| self.values[cod].is_identity(c))
        })
    }

    /// The unit, naturality, invertibility and cocycle laws, first failure
    /// reported with its witness.
    pub fn check_laws(&self) -> Verdict {
        let d = &self.dom;
        for g in d.morphisms() {
            let (s, t) = self.action_ends(g);
            if let Some(why) = self.action[g].defect(&self.values[s], &self.values[t]) {
                return Verdict::fail(
                    "action is a functor",
                    json!({ "morphism": d.morphism_name(g), "defect": why }),
                );
            }
        }
        for x in d.objects() {
            if self.action[d.id(x)] != identity_functor(&self.values[x]) {
                return Verdict::fail(
                    "identities act as identities",
                    json!({ "object": d.object_name(x) }),
                );
            }
        }
        for f in d.morphisms() {
            for &g in d.out_of(d.tgt(f)) {
                let h = d.compose(g, f);
                let Some(t) = self.eta.get(&(g, f)) else {
                    return Verdict::fail(
                        "eta defined on composable pairs",
                        json!({ "pair": [d.morphism_name(g), d.morphism_name(f)] }),
                    );
                };
                let (src, cod) = self.action_ends(h);
                let v = &self.values[cod];
                let comp = self.pair_composite(g, f);
                if !t.is_natural(&self.values[src], v, &comp, &self.action[h]) {
                    return Verdict::fail(
                        "eta is natural",
                        json!({ "pair": [d.morphism_name(g), d.morphism_name(f)] }),
                    );
                }
                if !t.components.iter().all(|&c| v.is_iso(c)) {
                    return Verdict::fail(
                        "eta is invertible",
                        json!({ "pair": [d.morphism_name(g), d.morphism_name(f)] }),
                    );
                }
                if (d.is_identity(g) || d.is_identity(f))
                    && !t.components.iter().all(|&c| v.is_identity(c))
                {
                    return Verdict::fail(
                        "unit comparisons are identities",
                        json!({ "pair": [d.morphism_name(g), d.morphism_name(f)] }),
                    );
                }
            }
        }
        // cocycle: for h∘g∘f, both ways of comparing the threefold composite agree
        for f in d.morphisms() {
            for &g in d.out_of(d.tgt(f)) {
                for &h in d.out_of(d.tgt(g)) {
                    if let Some(why) = self.cocycle_defect(h, g, f) {
                        return Verdict::fail(
                            "cocycle condition",
                            json!({
                                "triple": [d.morphism_name(h), d.morphism_name(g), d.morphism_name(f)],
                                "detail": why,
                            }),
                        );
                    }
                }
            }
        }
        Verdict::pass("pseudofunctor laws hold")
    }

    fn cocycle_defect(&self, h: Mor, g: Mor, f: Mor) -> Option<String> {
        let d = &self.dom;
        let hg = d.compose(h, g);
        let gf = d.compose(g, f);
        let hgf = d.compose(hg, f);
        let (start, cod) = self.action_ends(hgf);
        let v = &self.values[cod];
        let e = |a: Mor, b: Mor| &self.eta[&(a, b)];
        for x in self.values[start].objects() {
            let (lhs, rhs) = if self.contravariant {
                // f*g*h*x → f*(hg)*x → (hgf)*x  versus  f*g*(h*x) → (gf)*(h*x) → (hgf)*x
                let a = self.action[f].mor[e(h, g).components[x]];
                let lhs = v.compose(e(hg, f).components[x], a);
                let hx = self.action[h].obj[x];
                let rhs = v.compose(e(h, gf).components[x], e(g, f).components[hx]);
                (lhs, rhs)
            } else {
                // h g f x → h (gf) x → (hgf) x  versus  h g (f x) → (hg) f x → (hgf) x
                let a = self.action[h].mor[e(g, f).components[x]];
                let lhs = v.compose(e(h, gf).components[x], a);
                let fx = self.action[f].obj[x];
                let rhs = v.compose(e(hg, f).components[x], e(h, g).components[fx]);
                (lhs, rhs)
            };
            if lhs != rhs {
                return Some(format!(
                    "components {} and {} differ",
                    v.morphism_name(lhs),
                    v.morphism_name(rhs)
                ));
            }
        }
        None
    }
}

/// Fibers, pullback functors and comparison isomorphisms of a Cartesian
/// fibration with a normal cleavage.
pub fn straighten(p: &FibCat, c: &Cleavage) -> Result<PseudofunctorToCat> {
    if let Some((e, g)) = fibration_defect(p) {
        return Err(Error::NotAFibration(format!(
            "{} has no Cartesian lift to {}",
            p.base.morphism_name(g),
            p.total.object_name(e)
        )));
    }
    if !c.normal {
        return Err(Error::NotAFibration(
            "straightening needs a normal cleavage".into(),
        ));
    }
    if let Some(why) = c.defect(p) {
        return Err(Error::NotAFibration(why));
    }
    let b = &p.base;
    let t = &p.total;
    let mut values = Vec::with_capacity(b.num_objects());
    let mut obj_in_fiber: Vec<usize> = vec![usize::MAX; t.num_objects()];
    let mut mor_in_fiber: Vec<usize> = vec![usize::MAX; t.num_morphisms()];
    let mut inclusions = Vec::with_capacity(b.num_objects());
    for x in b.objects() {
        let (fib, inc) = p.fiber(x)?;
        for (i, &e) in inc.obj.iter().enumerate() {
            obj_in_fiber[e] = i;
        }
        for (i, &m) in inc.mor.iter().enumerate() {
            mor_in_fiber[m] = i;
        }
        values.push(fib);
        inclusions.push(inc);
    }
    // the unique vertical k: a → src(over) with over∘k = h
    let factor = |over: Mor, a: Ob, h: Mor| -> Result<Mor> {
        t.hom(a, t.src(over))
            .iter()
            .copied()
            .find(|&k| p.is_vertical(k) && t.compose(over, k) == h)
            .ok_or_else(|| Error::CoherenceViolation {
                law: "Cartesian factorization".into(),
                detail: format!(
                    "{} does not factor through {}",
                    t.morphism_name(h),
                    t.morphism_name(over)
                ),
            })
    };
    let mut action = Vec::with_capacity(b.num_morphisms());
    for g in b.morphisms() {
        let inc = &inclusions[b.tgt(g)];
        let mut obj = Vec::with_capacity(inc.obj.len());
        for &e in &inc.obj {
            obj.push(obj_in_fiber[t.src(c.lift[&(e, g)])]);
        }
        let mut mor = Vec::with_capacity(inc.mor.len());
        for &u in &inc.mor {
            let (l1, l2) = (c.lift[&(t.src(u), g)], c.lift[&(t.tgt(u), g)]);
            let k = factor(l2, t.src(l1), t.compose(u, l1))?;
            mor.push(mor_in_fiber[k]);
        }
        action.push(Functor::new(obj, mor));
    }
    let mut eta = HashMap::new();
    for f in b.morphisms() {
        for &g in b.out_of(b.tgt(f)) {
            let h = b.compose(g, f);
            let inc = &inclusions[b.tgt(h)];
            let mut comps = Vec::with_capacity(inc.obj.len());
            for &e in &inc.obj {
                let lg = c.lift[&(e, g)];
                let lf = c.lift[&(t.src(lg), f)];
                let lh = c.lift[&(e, h)];
                comps.push(mor_in_fiber[factor(lh, t.src(lf), t.compose(lg, lf))?]);
            }
            eta.insert((g, f), NatTrans { components: comps });
        }
    }
    let out = PseudofunctorToCat {
        dom: b.clone(),
        contravariant: true,
        values,
        action,
        eta,
    };
    let v = out.check_laws();
    if !v.pass {
        return Err(Error::CoherenceViolation {
            law: v.detail,
            detail: format!("{:?}", v.witness),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests;

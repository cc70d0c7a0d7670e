use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{FinCat, Mor, Ob};

/// A functor between two finite categories, stored as its object and
/// morphism maps.  Domain and codomain travel alongside at call sites.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Functor {
    pub obj: Vec<Ob>,
    pub mor: Vec<Mor>,
}

impl Functor {
    pub fn new(obj: Vec<Ob>, mor: Vec<Mor>) -> Functor {
        Functor { obj, mor }
    }

    /// The functor to `cod` constant at `x`.
    pub fn constant(dom: &FinCat, cod: &FinCat, x: Ob) -> Functor {
        Functor {
            obj: vec![x; dom.num_objects()],
            mor: vec![cod.id(x); dom.num_morphisms()],
        }
    }

    /// `None` when the maps preserve endpoints, identities and composites;
    /// otherwise a description of the first failure.
    pub fn defect(&self, dom: &FinCat, cod: &FinCat) -> Option<String> {
        if self.obj.len() != dom.num_objects() || self.mor.len() != dom.num_morphisms() {
            return Some("map sizes do not match the domain".into());
        }
        if self.obj.iter().any(|&y| y >= cod.num_objects())
            || self.mor.iter().any(|&n| n >= cod.num_morphisms())
        {
            return Some("map lands outside the codomain".into());
        }
        for m in dom.morphisms() {
            let n = self.mor[m];
            if cod.src(n) != self.obj[dom.src(m)] || cod.tgt(n) != self.obj[dom.tgt(m)] {
                return Some(format!(
                    "{} is sent to a morphism with wrong endpoints",
                    dom.morphism_name(m)
                ));
            }
        }
        for x in dom.objects() {
            if self.mor[dom.id(x)] != cod.id(self.obj[x]) {
                return Some(format!("identity at {} not preserved", dom.object_name(x)));
            }
        }
        for f in dom.morphisms() {
            for &g in dom.out_of(dom.tgt(f)) {
                if self.mor[dom.compose(g, f)] != cod.compose(self.mor[g], self.mor[f]) {
                    return Some(format!(
                        "composite ({}, {}) not preserved",
                        dom.morphism_name(g),
                        dom.morphism_name(f)
                    ));
                }
            }
        }
        None
    }

    pub fn is_valid(&self, dom: &FinCat, cod: &FinCat) -> bool {
        self.defect(dom, cod).is_none()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Functor) -> Functor {
        compose_functors(self, first)
    }
}

/// `g ∘ f`.
pub fn compose_functors(g: &Functor, f: &Functor) -> Functor {
    Functor {
        obj: f.obj.iter().map(|&x| g.obj[x]).collect(),
        mor: f.mor.iter().map(|&m| g.mor[m]).collect(),
    }
}

pub fn identity_functor(c: &FinCat) -> Functor {
    Functor {
        obj: c.objects().collect(),
        mor: c.morphisms().collect(),
    }
}

/// Components of a natural transformation, one morphism of the codomain
/// per object of the domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NatTrans {
    pub components: Vec<Mor>,
}

impl NatTrans {
    pub fn identity(cod: &FinCat, f: &Functor) -> NatTrans {
        NatTrans {
            components: f.obj.iter().map(|&y| cod.id(y)).collect(),
        }
    }

    pub fn is_natural(&self, dom: &FinCat, cod: &FinCat, f: &Functor, g: &Functor) -> bool {
        dom.objects().all(|x| {
            let a = self.components[x];
            cod.src(a) == f.obj[x] && cod.tgt(a) == g.obj[x]
        }) && dom.morphisms().all(|m| {
            let (x, y) = (dom.src(m), dom.tgt(m));
            cod.compose(g.mor[m], self.components[x]) == cod.compose(self.components[y], f.mor[m])
        })
    }

    /// Vertical composite `self ∘ first`.
    pub fn vertical(&self, cod: &FinCat, first: &NatTrans) -> NatTrans {
        NatTrans {
            components: self
                .components
                .iter()
                .zip(&first.components)
                .map(|(&b, &a)| cod.compose(b, a))
                .collect(),
        }
    }
}

/// All natural transformations `f ⇒ g` by backtracking over the objects of `dom`.
pub fn nat_transformations(dom: &FinCat, cod: &FinCat, f: &Functor, g: &Functor) -> Vec<NatTrans> {
    let n = dom.num_objects();
    let mut closing: Vec<Vec<Mor>> = vec![Vec::new(); n];
    for m in dom.morphisms() {
        if dom.is_identity(m) {
            continue;
        }
        closing[dom.src(m).max(dom.tgt(m))].push(m);
    }
    let mut out = Vec::new();
    let mut comp = vec![usize::MAX; n];
    fn go(
        x: usize,
        dom: &FinCat,
        cod: &FinCat,
        f: &Functor,
        g: &Functor,
        closing: &[Vec<Mor>],
        comp: &mut Vec<Mor>,
        out: &mut Vec<NatTrans>,
    ) {
        if x == comp.len() {
            out.push(NatTrans {
                components: comp.clone(),
            });
            return;
        }
        for &a in cod.hom(f.obj[x], g.obj[x]) {
            comp[x] = a;
            let ok = closing[x].iter().all(|&m| {
                let (s, t) = (dom.src(m), dom.tgt(m));
                cod.compose(g.mor[m], comp[s]) == cod.compose(comp[t], f.mor[m])
            });
            if ok {
                go(x + 1, dom, cod, f, g, closing, comp, out);
            }
        }
        comp[x] = usize::MAX;
    }
    go(0, dom, cod, f, g, &closing, &mut comp, &mut out);
    out
}

/// Bijective on objects and on morphisms.
pub fn is_isomorphism(f: &Functor, dom: &FinCat, cod: &FinCat) -> bool {
    f.is_valid(dom, cod)
        && dom.num_objects() == cod.num_objects()
        && dom.num_morphisms() == cod.num_morphisms()
        && f.obj.iter().collect::<HashSet<_>>().len() == cod.num_objects()
        && f.mor.iter().collect::<HashSet<_>>().len() == cod.num_morphisms()
}

pub fn is_fully_faithful(f: &Functor, dom: &FinCat, cod: &FinCat) -> bool {
    dom.objects().all(|x| {
        dom.objects().all(|y| {
            let image: HashSet<Mor> = dom.hom(x, y).iter().map(|&m| f.mor[m]).collect();
            image.len() == dom.hom(x, y).len() && image.len() == cod.hom(f.obj[x], f.obj[y]).len()
        })
    })
}

pub fn is_essentially_surjective(f: &Functor, dom: &FinCat, cod: &FinCat) -> bool {
    let _ = dom;
    let image: HashSet<Ob> = f.obj.iter().copied().collect();
    cod.objects().all(|d| {
        image.contains(&d)
            || image
                .iter()
                .any(|&y| cod.hom(y, d).iter().any(|&m| cod.is_iso(m)))
    })
}

pub fn is_equivalence(f: &Functor, dom: &FinCat, cod: &FinCat) -> bool {
    f.is_valid(dom, cod) && is_fully_faithful(f, dom, cod) && is_essentially_surjective(f, dom, cod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{discrete, poset, walking_iso};

    #[test]
    fn identity_is_equivalence_and_iso() {
        let c = poset(2);
        let id = identity_functor(&c);
        assert!(is_equivalence(&id, &c, &c));
        assert!(is_isomorphism(&id, &c, &c));
    }

    #[test]
    fn inclusion_into_walking_iso_is_equivalence() {
        let w = walking_iso();
        let pt = poset(0);
        let inc = Functor::new(vec![0], vec![w.id(0)]);
        assert!(inc.is_valid(&pt, &w));
        assert!(is_equivalence(&inc, &pt, &w));
        assert!(!is_isomorphism(&inc, &pt, &w));
    }

    #[test]
    fn inclusion_of_endpoint_into_interval_is_not_equivalence() {
        let c = poset(1);
        let pt = poset(0);
        let inc = Functor::new(vec![1], vec![c.id(1)]);
        assert!(!is_equivalence(&inc, &pt, &c));
    }

    #[test]
    fn nat_transformations_between_identity_and_constant() {
        let c = poset(1);
        let id = identity_functor(&c);
        let k1 = Functor::constant(&c, &c, 1);
        let k0 = Functor::constant(&c, &c, 0);
        assert_eq!(nat_transformations(&c, &c, &id, &k1).len(), 1);
        assert_eq!(nat_transformations(&c, &c, &k1, &id).len(), 0);
        assert_eq!(nat_transformations(&c, &c, &k0, &id).len(), 1);
    }

    #[test]
    fn nat_transformations_discrete_is_product_of_homs() {
        let d = discrete(2);
        let c = poset(2);
        let f = Functor::new(vec![0, 1], vec![c.id(0), c.id(1)]);
        let g = Functor::new(vec![2, 2], vec![c.id(2), c.id(2)]);
        assert_eq!(nat_transformations(&d, &c, &f, &g).len(), 1);
        let nt = &nat_transformations(&d, &c, &f, &g)[0];
        assert!(nt.is_natural(&d, &c, &f, &g));
    }
}

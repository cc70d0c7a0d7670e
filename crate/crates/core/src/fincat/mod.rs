//! Finite categories as explicit tables.

mod colimit;
mod constructions;
mod functor;
mod json;
mod limit;
mod search;

pub use colimit::{check_colimit_cocone, default_probes, generates_apex, probe_restriction};
pub use constructions::{
    coproduct, cyclic_group, discrete, functor_category, group_category, interior, opposite, poset,
    preorder, product, product_functor, slice_over, slice_under, subcategory, walking_iso,
    whisker_functor, FunctorCategory, Slice,
};
pub use functor::Functor;
pub use functor::{
    compose_functors, identity_functor, is_equivalence, is_isomorphism, nat_transformations,
    NatTrans,
};
pub use json::{
    category_from_json, category_to_json, functor_from_json, functor_to_json, RawCategory,
    RawFunctor, RawMorphism,
};
pub use limit::{compatible_families, limit_cat, CatValuedDiagram, Limit};
pub use search::{enumerate_functors, find_isomorphism, FunctorSearch};

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use crate::caps::{caps, check};
use crate::error::{Error, LawViolation, Result};

pub type Ob = usize;
pub type Mor = usize;

const UNDEF: u32 = u32::MAX;

/// A finite category: objects and morphisms are dense indices carrying
/// opaque string ids, with a total composition table on composable pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCat {
    obj_names: Vec<String>,
    mor_names: Vec<String>,
    src: Vec<Ob>,
    tgt: Vec<Ob>,
    ident: Vec<Mor>,
    table: Vec<u32>,
    homs: Vec<Vec<Mor>>,
    out: Vec<Vec<Mor>>,
    inn: Vec<Vec<Mor>>,
}

impl FinCat {
    /// Assemble a category from index data.  `compose(g, f)` is queried on
    /// every composable pair.  Laws are not checked here; see [`FinCat::law_violations`].
    pub fn from_tables(
        obj_names: Vec<String>,
        morphisms: Vec<(String, Ob, Ob)>,
        ident: Vec<Mor>,
        mut compose: impl FnMut(Mor, Mor) -> Option<Mor>,
    ) -> Result<FinCat> {
        let c = caps();
        check("objects", obj_names.len(), c.max_objects)?;
        check("morphisms", morphisms.len(), c.max_morphisms)?;
        let no = obj_names.len();
        let nm = morphisms.len();
        let mut violations = Vec::new();
        let mut seen = HashSet::new();
        for o in &obj_names {
            if !seen.insert(o.as_str()) {
                violations.push(LawViolation::TypeMismatch {
                    detail: format!("duplicate object id {o}"),
                });
            }
        }
        let mut seen = HashSet::new();
        let mut mor_names = Vec::with_capacity(nm);
        let mut src = Vec::with_capacity(nm);
        let mut tgt = Vec::with_capacity(nm);
        for (name, s, t) in morphisms {
            if !seen.insert(name.clone()) {
                violations.push(LawViolation::TypeMismatch {
                    detail: format!("duplicate morphism id {name}"),
                });
            }
            if s >= no || t >= no {
                violations.push(LawViolation::TypeMismatch {
                    detail: format!("morphism {name} has an endpoint outside the object list"),
                });
            }
            mor_names.push(name);
            src.push(s.min(no.saturating_sub(1)));
            tgt.push(t.min(no.saturating_sub(1)));
        }
        if ident.len() != no {
            violations.push(LawViolation::TypeMismatch {
                detail: "identity table does not cover every object".into(),
            });
        }
        for (x, &i) in ident.iter().enumerate() {
            if i >= nm || src[i] != x || tgt[i] != x {
                violations.push(LawViolation::TypeMismatch {
                    detail: format!("identity of {} is not an endomorphism of it", obj_names[x]),
                });
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidCategory(violations));
        }
        let mut homs = vec![Vec::new(); no * no];
        let mut out = vec![Vec::new(); no];
        let mut inn = vec![Vec::new(); no];
        for m in 0..nm {
            homs[src[m] * no + tgt[m]].push(m);
            out[src[m]].push(m);
            inn[tgt[m]].push(m);
        }
        let mut table = vec![UNDEF; nm * nm];
        for f in 0..nm {
            for &g in &out[tgt[f]] {
                match compose(g, f) {
                    Some(h) if h < nm && src[h] == src[f] && tgt[h] == tgt[g] => {
                        table[g * nm + f] = h as u32;
                    }
                    Some(h) => violations.push(LawViolation::TypeMismatch {
                        detail: format!(
                            "composite of ({}, {}) is {} with wrong endpoints",
                            mor_names[g],
                            mor_names[f],
                            mor_names.get(h).map(String::as_str).unwrap_or("?")
                        ),
                    }),
                    None => violations.push(LawViolation::TypeMismatch {
                        detail: format!("missing composite ({}, {})", mor_names[g], mor_names[f]),
                    }),
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidCategory(violations));
        }
        Ok(FinCat {
            obj_names,
            mor_names,
            src,
            tgt,
            ident,
            table,
            homs,
            out,
            inn,
        })
    }

    /// Build a category from structured keys.  `morphisms` must contain the
    /// identities and be closed under `compose(g, f)`.
    pub fn from_keys<O, M>(
        objects: Vec<O>,
        morphisms: Vec<M>,
        ends: impl Fn(&M) -> (O, O),
        identity: impl Fn(&O) -> M,
        compose: impl Fn(&M, &M) -> M,
        obj_name: impl Fn(&O) -> String,
        mor_name: impl Fn(&M) -> String,
    ) -> Result<FinCat>
    where
        O: Eq + Hash + Clone,
        M: Eq + Hash + Clone,
    {
        let c = caps();
        check("objects", objects.len(), c.max_objects)?;
        check("morphisms", morphisms.len(), c.max_morphisms)?;
        let oix: HashMap<&O, usize> = objects.iter().enumerate().map(|(i, o)| (o, i)).collect();
        let mix: HashMap<&M, usize> = morphisms.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mors = Vec::with_capacity(morphisms.len());
        for m in &morphisms {
            let (s, t) = ends(m);
            let (Some(&s), Some(&t)) = (oix.get(&s), oix.get(&t)) else {
                return Err(Error::InvalidCategory(vec![LawViolation::TypeMismatch {
                    detail: format!("morphism {} has an unknown endpoint", mor_name(m)),
                }]));
            };
            mors.push((mor_name(m), s, t));
        }
        let mut ident = Vec::with_capacity(objects.len());
        for o in &objects {
            let id = identity(o);
            match mix.get(&id) {
                Some(&i) => ident.push(i),
                None => {
                    return Err(Error::InvalidCategory(vec![LawViolation::TypeMismatch {
                        detail: format!("identity of {} missing", obj_name(o)),
                    }]))
                }
            }
        }
        let names = objects.iter().map(&obj_name).collect();
        FinCat::from_tables(names, mors, ident, |g, f| {
            mix.get(&compose(&morphisms[g], &morphisms[f])).copied()
        })
    }

    pub fn num_objects(&self) -> usize {
        self.obj_names.len()
    }
    pub fn num_morphisms(&self) -> usize {
        self.mor_names.len()
    }
    pub fn objects(&self) -> std::ops::Range<Ob> {
        0..self.num_objects()
    }
    pub fn morphisms(&self) -> std::ops::Range<Mor> {
        0..self.num_morphisms()
    }
    pub fn object_name(&self, x: Ob) -> &str {
        &self.obj_names[x]
    }
    pub fn morphism_name(&self, m: Mor) -> &str {
        &self.mor_names[m]
    }
    pub fn object_names(&self) -> &[String] {
        &self.obj_names
    }
    pub fn morphism_names(&self) -> &[String] {
        &self.mor_names
    }
    pub fn object_index(&self, name: &str) -> Option<Ob> {
        self.obj_names.iter().position(|n| n == name)
    }
    pub fn morphism_index(&self, name: &str) -> Option<Mor> {
        self.mor_names.iter().position(|n| n == name)
    }
    pub fn src(&self, m: Mor) -> Ob {
        self.src[m]
    }
    pub fn tgt(&self, m: Mor) -> Ob {
        self.tgt[m]
    }
    pub fn id(&self, x: Ob) -> Mor {
        self.ident[x]
    }
    pub fn is_identity(&self, m: Mor) -> bool {
        self.ident[self.src[m]] == m
    }
    pub fn hom(&self, x: Ob, y: Ob) -> &[Mor] {
        &self.homs[x * self.num_objects() + y]
    }
    pub fn out_of(&self, x: Ob) -> &[Mor] {
        &self.out[x]
    }
    pub fn incoming(&self, x: Ob) -> &[Mor] {
        &self.inn[x]
    }

    /// `g∘f`, or `None` when `tgt(f) ≠ src(g)`.
    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        let v = self.table[g * self.num_morphisms() + f];
        (v != UNDEF).then_some(v as usize)
    }

    /// `g∘f`; panics on a non-composable pair.
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "compose: {} and {} are not composable",
                self.mor_names[g], self.mor_names[f]
            )
        })
    }

    /// Compose a path given in diagrammatic-reverse order: `compose_all([h, g, f]) = h∘g∘f`.
    pub fn compose_all(&self, path: &[Mor]) -> Mor {
        let mut it = path.iter().rev();
        let first = *it.next().expect("compose_all on empty path");
        it.fold(first, |acc, &g| self.compose(g, acc))
    }

    pub fn inverse(&self, m: Mor) -> Option<Mor> {
        let (s, t) = (self.src[m], self.tgt[m]);
        self.hom(t, s)
            .iter()
            .copied()
            .find(|&n| self.compose(n, m) == self.ident[s] && self.compose(m, n) == self.ident[t])
    }

    pub fn is_iso(&self, m: Mor) -> bool {
        self.inverse(m).is_some()
    }

    pub fn is_groupoid(&self) -> bool {
        self.morphisms().all(|m| self.is_iso(m))
    }

    pub fn is_discrete(&self) -> bool {
        self.morphisms().all(|m| self.is_identity(m))
    }

    /// Every violated unit and associativity law, in table order.
    pub fn law_violations(&self) -> Vec<LawViolation> {
        let mut v = Vec::new();
        for m in self.morphisms() {
            let (s, t) = (self.src[m], self.tgt[m]);
            if self.compose(self.ident[t], m) != m {
                v.push(LawViolation::Unit {
                    object: self.obj_names[t].clone(),
                    mor: self.mor_names[m].clone(),
                });
            }
            if self.compose(m, self.ident[s]) != m {
                v.push(LawViolation::Unit {
                    object: self.obj_names[s].clone(),
                    mor: self.mor_names[m].clone(),
                });
            }
        }
        for f in self.morphisms() {
            for &g in self.out_of(self.tgt[f]) {
                let gf = self.compose(g, f);
                for &h in self.out_of(self.tgt[g]) {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        v.push(LawViolation::Assoc {
                            h: self.mor_names[h].clone(),
                            g: self.mor_names[g].clone(),
                            f: self.mor_names[f].clone(),
                        });
                    }
                }
            }
        }
        v
    }

    /// Validate a freshly assembled table.
    pub fn validated(self) -> Result<FinCat> {
        let v = self.law_violations();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidCategory(v))
        }
    }

    /// Rename every object and morphism; the structure is unchanged.
    pub fn renamed(&self, obj: impl Fn(Ob) -> String, mor: impl Fn(Mor) -> String) -> FinCat {
        let mut c = self.clone();
        c.obj_names = self.objects().map(obj).collect();
        c.mor_names = self.morphisms().map(mor).collect();
        c
    }
}

/// Validate raw tables given by names.
pub fn validate_category(raw: &RawCategory) -> Result<FinCat> {
    json::from_raw(raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_two_counts() {
        let c = poset(2);
        assert_eq!((c.num_objects(), c.num_morphisms()), (3, 6));
        assert!(c.law_violations().is_empty());
    }

    #[test]
    fn compose_all_is_left_to_right_reversed() {
        let c = poset(3);
        let a = c.hom(0, 1)[0];
        let b = c.hom(1, 2)[0];
        let d = c.hom(2, 3)[0];
        assert_eq!(c.compose_all(&[d, b, a]), c.hom(0, 3)[0]);
    }

    #[test]
    fn broken_unit_is_reported() {
        let names = vec!["0".to_string(), "1".to_string()];
        let mors = vec![
            ("id_0".to_string(), 0, 0),
            ("id_1".to_string(), 1, 1),
            ("u".to_string(), 0, 1),
            ("v".to_string(), 0, 1),
        ];
        let c = FinCat::from_tables(names, mors, vec![0, 1], |g, f| match (g, f) {
            (2, 0) => Some(3),
            (3, 0) => Some(3),
            (1, x) => Some(x),
            (x, _) => Some(x),
        })
        .unwrap();
        let v = c.law_violations();
        assert!(v
            .iter()
            .any(|l| matches!(l, LawViolation::Unit { mor, .. } if mor == "u")));
    }

    #[test]
    fn missing_composite_is_type_mismatch() {
        let names = vec!["0".to_string()];
        let mors = vec![("id".to_string(), 0, 0), ("e".to_string(), 0, 0)];
        let err = FinCat::from_tables(names, mors, vec![0], |g, f| {
            if g == 1 && f == 1 {
                None
            } else if g == 0 {
                Some(f)
            } else {
                Some(g)
            }
        })
        .unwrap_err();
        assert!(
            matches!(err, Error::InvalidCategory(ref v) if matches!(v[0], LawViolation::TypeMismatch { .. }))
        );
    }

    #[test]
    fn inverse_in_walking_iso() {
        let c = walking_iso();
        assert!(c.is_groupoid());
        assert!(!poset(1).is_groupoid());
    }
}

use std::collections::{HashMap, HashSet};

use serde_json::json;

use super::search::FunctorSearch;
use super::{
    compatible_families, compose_functors, functor_category, poset, product, CatValuedDiagram,
    FinCat, Functor, Mor,
};
use crate::error::{Error, Result};
use crate::verdict::Verdict;

/// `[0]`, `[1]`, `[2]`, `[1]×[1]`; the apex itself is added by the check.
pub fn default_probes() -> Vec<FinCat> {
    vec![
        poset(0),
        poset(1),
        poset(2),
        product(&poset(1), &poset(1)).expect("square"),
    ]
}

/// Compare `Fun(apex, X)` with compatible families in `lim_i Fun(D(i), X)`
/// on objects.  Returns a failure description, or `None` when restriction
/// is a bijection.
pub fn probe_restriction(
    d: &CatValuedDiagram,
    apex: &FinCat,
    legs: &[Functor],
    x: &FinCat,
) -> Result<Option<String>> {
    let ix = &d.index;
    let from_apex = FunctorSearch::new(apex, x).collect()?;
    let mut lists = Vec::with_capacity(ix.num_objects());
    let mut lookup: Vec<HashMap<Functor, usize>> = Vec::with_capacity(ix.num_objects());
    for v in &d.values {
        let l = FunctorSearch::new(v, x).collect()?;
        lookup.push(l.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect());
        lists.push(l);
    }
    let mut maps: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for m in ix.morphisms().filter(|&m| !ix.is_identity(m)) {
        let (i, j) = (ix.src(m), ix.tgt(m));
        let map = lists[j]
            .iter()
            .map(|g| lookup[i][&compose_functors(g, &d.action[m])])
            .collect();
        maps.push((j, i, map));
    }
    let cons: Vec<(usize, usize, &[usize])> = maps
        .iter()
        .map(|(a, b, m)| (*a, *b, m.as_slice()))
        .collect();
    let allowed: Vec<Vec<usize>> = lists.iter().map(|l| (0..l.len()).collect()).collect();
    let families = compatible_families(&allowed, &cons)?;
    let mut image: HashMap<Vec<usize>, usize> = HashMap::new();
    for (k, g) in from_apex.iter().enumerate() {
        let r: Vec<usize> = legs
            .iter()
            .enumerate()
            .map(|(i, leg)| lookup[i][&compose_functors(g, leg)])
            .collect();
        if let Some(&other) = image.get(&r) {
            return Ok(Some(format!(
                "functors #{other} and #{k} out of the apex restrict to the same family"
            )));
        }
        image.insert(r, k);
    }
    for fam in &families {
        if !image.contains_key(fam) {
            return Ok(Some(format!(
                "compatible family {fam:?} is not the restriction of any functor out of the apex"
            )));
        }
    }
    Ok(None)
}

/// Every object of the apex is hit by a leg and every morphism is a
/// composite of leg images.
pub fn generates_apex(apex: &FinCat, legs: &[Functor]) -> Option<String> {
    let hit: HashSet<usize> = legs.iter().flat_map(|l| l.obj.iter().copied()).collect();
    if let Some(x) = apex.objects().find(|x| !hit.contains(x)) {
        return Some(format!(
            "object {} is not in the image of any leg",
            apex.object_name(x)
        ));
    }
    let mut reached: HashSet<Mor> = legs.iter().flat_map(|l| l.mor.iter().copied()).collect();
    let mut frontier: Vec<Mor> = reached.iter().copied().collect();
    while let Some(f) = frontier.pop() {
        let mut new = Vec::new();
        for &g in apex.out_of(apex.tgt(f)) {
            if reached.contains(&g) {
                new.push(apex.compose(g, f));
            }
        }
        for &h in apex.incoming(apex.src(f)) {
            if reached.contains(&h) {
                new.push(apex.compose(f, h));
            }
        }
        for n in new {
            if reached.insert(n) {
                frontier.push(n);
            }
        }
    }
    apex.morphisms().find(|m| !reached.contains(m)).map(|m| {
        format!(
            "morphism {} is not generated by the legs",
            apex.morphism_name(m)
        )
    })
}

/// Verify that `legs: D(i) → apex` form a cocone and that restriction
/// `Fun(apex, X) → lim_i Fun(D(i), X)` is an isomorphism of categories for
/// every probe `X`, and a bijection on objects for `X` the apex itself.
/// Morphisms are compared through `X^{[1]}`, whose objects are the arrows
/// of `X`.
pub fn check_colimit_cocone(
    d: &CatValuedDiagram,
    apex: &FinCat,
    legs: &[Functor],
    probes: &[FinCat],
) -> Result<Verdict> {
    let ix = &d.index;
    if legs.len() != ix.num_objects() {
        return Err(Error::NotACocone(
            "one leg per index object required".into(),
        ));
    }
    for (i, leg) in legs.iter().enumerate() {
        if let Some(why) = leg.defect(&d.values[i], apex) {
            return Err(Error::NotACocone(format!(
                "leg {}: {why}",
                ix.object_name(i)
            )));
        }
    }
    for m in ix.morphisms() {
        let (i, j) = (ix.src(m), ix.tgt(m));
        if compose_functors(&legs[j], &d.action[m]) != legs[i] {
            return Err(Error::NotACocone(format!(
                "legs do not commute along {}",
                ix.morphism_name(m)
            )));
        }
    }
    let mut all: Vec<FinCat> = probes.to_vec();
    all.push(apex.clone());
    let arrow = poset(1);
    for (k, x) in all.iter().enumerate() {
        let label = if k + 1 == all.len() {
            "apex".to_string()
        } else {
            format!("probe {k}")
        };
        if let Some(why) = probe_restriction(d, apex, legs, x)? {
            return Ok(Verdict::fail(
                format!("{label} on objects: {why}"),
                json!({"probe": k, "level": "objects", "reason": why}),
            ));
        }
        // the apex is probed on objects only
        if k + 1 == all.len() {
            continue;
        }
        let x1 = functor_category(&arrow, x)?;
        if let Some(why) = probe_restriction(d, apex, legs, &x1.cat)? {
            return Ok(Verdict::fail(
                format!("{label} on morphisms: {why}"),
                json!({"probe": k, "level": "morphisms", "reason": why}),
            ));
        }
    }
    Ok(Verdict::pass(format!(
        "restriction is an isomorphism for {} probes",
        all.len()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::identity_functor;

    #[test]
    fn one_object_diagram_with_identity_leg() {
        let c = poset(1);
        let d = CatValuedDiagram::constant(poset(0), c.clone());
        let v = check_colimit_cocone(&d, &c, &[identity_functor(&c)], &default_probes()).unwrap();
        assert!(v.pass, "{}", v.detail);
    }

    #[test]
    fn non_colimiting_apex_fails() {
        // two points, apex [1] with legs picking 0 and 1: coproduct is the
        // discrete two-point category, so [1] is not a colimit
        let ix = crate::fincat::discrete(2);
        let d = CatValuedDiagram::constant(ix, poset(0));
        let apex = poset(1);
        let legs = vec![
            Functor::new(vec![0], vec![apex.id(0)]),
            Functor::new(vec![1], vec![apex.id(1)]),
        ];
        let v = check_colimit_cocone(&d, &apex, &legs, &default_probes()).unwrap();
        assert!(!v.pass);
        assert!(v.detail.contains("not the restriction"), "{}", v.detail);
    }

    #[test]
    fn non_commuting_legs_rejected() {
        let ix = poset(1);
        let d = CatValuedDiagram::constant(ix, poset(0));
        let apex = poset(1);
        let legs = vec![
            Functor::new(vec![0], vec![apex.id(0)]),
            Functor::new(vec![1], vec![apex.id(1)]),
        ];
        assert!(matches!(
            check_colimit_cocone(&d, &apex, &legs, &[]),
            Err(Error::NotACocone(_))
        ));
    }

    #[test]
    fn generation() {
        let apex = poset(2);
        let legs = vec![
            Functor::new(vec![0, 1], vec![apex.id(0), apex.hom(0, 1)[0], apex.id(1)]),
            Functor::new(vec![1, 2], vec![apex.id(1), apex.hom(1, 2)[0], apex.id(2)]),
        ];
        assert!(generates_apex(&apex, &legs).is_none());
        assert!(generates_apex(&apex, &legs[..1]).is_some());
    }
}

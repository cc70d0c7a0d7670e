use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{FinCat, Functor};
use crate::error::{Error, LawViolation, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// Category tables keyed by names, as exchanged in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identities: BTreeMap<String, String>,
    pub compose: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFunctor {
    pub obj: BTreeMap<String, String>,
    pub mor: BTreeMap<String, String>,
}

impl RawCategory {
    pub fn from_cat(c: &FinCat) -> RawCategory {
        let mut compose = Vec::new();
        for g in c.morphisms() {
            for &f in c.incoming(c.src(g)) {
                compose.push([
                    c.morphism_name(g).to_string(),
                    c.morphism_name(f).to_string(),
                    c.morphism_name(c.compose(g, f)).to_string(),
                ]);
            }
        }
        RawCategory {
            objects: c.object_names().to_vec(),
            morphisms: c
                .morphisms()
                .map(|m| RawMorphism {
                    id: c.morphism_name(m).to_string(),
                    src: c.object_name(c.src(m)).to_string(),
                    tgt: c.object_name(c.tgt(m)).to_string(),
                })
                .collect(),
            identities: c
                .objects()
                .map(|x| {
                    (
                        c.object_name(x).to_string(),
                        c.morphism_name(c.id(x)).to_string(),
                    )
                })
                .collect(),
            compose,
        }
    }
}

pub(super) fn from_raw(raw: &RawCategory) -> Result<FinCat> {
    let mismatch =
        |detail: String| Error::InvalidCategory(vec![LawViolation::TypeMismatch { detail }]);
    let oix: HashMap<&str, usize> = raw
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| (o.as_str(), i))
        .collect();
    let mix: HashMap<&str, usize> = raw
        .morphisms
        .iter()
        .enumerate()
        .map(|(i, m)| (m.id.as_str(), i))
        .collect();
    let mut mors = Vec::with_capacity(raw.morphisms.len());
    for m in &raw.morphisms {
        let s = *oix
            .get(m.src.as_str())
            .ok_or_else(|| mismatch(format!("{} has unknown source {}", m.id, m.src)))?;
        let t = *oix
            .get(m.tgt.as_str())
            .ok_or_else(|| mismatch(format!("{} has unknown target {}", m.id, m.tgt)))?;
        mors.push((m.id.clone(), s, t));
    }
    let mut ident = Vec::with_capacity(raw.objects.len());
    for o in &raw.objects {
        let i = raw
            .identities
            .get(o)
            .ok_or_else(|| mismatch(format!("no identity for {o}")))?;
        ident.push(
            *mix.get(i.as_str())
                .ok_or_else(|| Error::UnknownMorphism(i.clone()))?,
        );
    }
    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    for [g, f, h] in &raw.compose {
        let look = |n: &String| {
            mix.get(n.as_str())
                .copied()
                .ok_or_else(|| Error::UnknownMorphism(n.clone()))
        };
        let (gi, fi, hi) = (look(g)?, look(f)?, look(h)?);
        if mors[fi].2 != mors[gi].1 {
            return Err(mismatch(format!(
                "compose entry ({g}, {f}) is not composable"
            )));
        }
        if let Some(&prev) = table.get(&(gi, fi)) {
            if prev != hi {
                return Err(mismatch(format!("compose entry ({g}, {f}) given twice")));
            }
        }
        table.insert((gi, fi), hi);
    }
    FinCat::from_tables(raw.objects.clone(), mors, ident, |g, f| {
        table.get(&(g, f)).copied()
    })?
    .validated()
}

pub fn category_to_json(c: &FinCat) -> String {
    serde_json::to_string_pretty(&RawCategory::from_cat(c)).expect("serializable")
}

pub fn category_from_json(s: &str) -> Result<FinCat> {
    let raw: RawCategory = serde_json::from_str(s)?;
    from_raw(&raw)
}

pub fn functor_to_json(f: &Functor, dom: &FinCat, cod: &FinCat) -> String {
    let raw = RawFunctor {
        obj: dom
            .objects()
            .map(|x| {
                (
                    dom.object_name(x).to_string(),
                    cod.object_name(f.obj[x]).to_string(),
                )
            })
            .collect(),
        mor: dom
            .morphisms()
            .map(|m| {
                (
                    dom.morphism_name(m).to_string(),
                    cod.morphism_name(f.mor[m]).to_string(),
                )
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("serializable")
}

pub fn functor_from_json(s: &str, dom: &FinCat, cod: &FinCat) -> Result<Functor> {
    let raw: RawFunctor = serde_json::from_str(s)?;
    let mut obj = Vec::with_capacity(dom.num_objects());
    for x in dom.objects() {
        let name = raw
            .obj
            .get(dom.object_name(x))
            .ok_or_else(|| Error::UnknownObject(dom.object_name(x).to_string()))?;
        obj.push(
            cod.object_index(name)
                .ok_or_else(|| Error::UnknownObject(name.clone()))?,
        );
    }
    let mut mor = Vec::with_capacity(dom.num_morphisms());
    for m in dom.morphisms() {
        let name = raw
            .mor
            .get(dom.morphism_name(m))
            .ok_or_else(|| Error::UnknownMorphism(dom.morphism_name(m).to_string()))?;
        mor.push(
            cod.morphism_index(name)
                .ok_or_else(|| Error::UnknownMorphism(name.clone()))?,
        );
    }
    let f = Functor::new(obj, mor);
    match f.defect(dom, cod) {
        None => Ok(f),
        Some(why) => Err(Error::InvalidFunctor(why)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{cyclic_group, identity_functor, poset, product, validate_category};

    #[test]
    fn round_trip_is_bit_exact() {
        for c in [
            poset(2),
            cyclic_group(3),
            product(&poset(1), &poset(1)).unwrap(),
        ] {
            let s = category_to_json(&c);
            let back = category_from_json(&s).unwrap();
            assert_eq!(back, c);
            assert_eq!(category_to_json(&back), s);
        }
    }

    #[test]
    fn raw_validation_examples() {
        let mut raw = RawCategory::from_cat(&poset(2));
        assert_eq!(validate_category(&raw).unwrap().num_morphisms(), 6);
        raw = RawCategory::from_cat(&poset(1));
        for e in raw.compose.iter_mut() {
            if e[0] == "0<1" && e[1] == "id_0" {
                e[2] = "id_0".into();
            }
        }
        assert!(validate_category(&raw).is_err());
    }

    #[test]
    fn broken_unit_in_json_reports_unit_violation() {
        // the interval with a second parallel arrow v where u∘id_0 = v
        let raw = RawCategory {
            objects: vec!["0".into(), "1".into()],
            morphisms: vec![
                RawMorphism {
                    id: "i0".into(),
                    src: "0".into(),
                    tgt: "0".into(),
                },
                RawMorphism {
                    id: "i1".into(),
                    src: "1".into(),
                    tgt: "1".into(),
                },
                RawMorphism {
                    id: "u".into(),
                    src: "0".into(),
                    tgt: "1".into(),
                },
                RawMorphism {
                    id: "v".into(),
                    src: "0".into(),
                    tgt: "1".into(),
                },
            ],
            identities: [("0".into(), "i0".into()), ("1".into(), "i1".into())].into(),
            compose: vec![
                ["i0".into(), "i0".into(), "i0".into()],
                ["i1".into(), "i1".into(), "i1".into()],
                ["u".into(), "i0".into(), "v".into()],
                ["v".into(), "i0".into(), "v".into()],
                ["i1".into(), "u".into(), "u".into()],
                ["i1".into(), "v".into(), "v".into()],
            ],
        };
        match validate_category(&raw) {
            Err(Error::InvalidCategory(v)) => {
                assert!(v
                    .iter()
                    .any(|l| matches!(l, LawViolation::Unit { mor, .. } if mor == "u")))
            }
            other => panic!("expected unit violation, got {other:?}"),
        }
    }

    #[test]
    fn functor_round_trip() {
        let c = poset(2);
        let id = identity_functor(&c);
        let s = functor_to_json(&id, &c, &c);
        assert_eq!(functor_from_json(&s, &c, &c).unwrap(), id);
    }
}

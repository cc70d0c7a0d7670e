//! Seeded random instances.  Every generator is a pure function of the RNG
//! state it is handed, so a `ChaCha8Rng` seed reproduces an instance.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::duskin::{NormalOplax, TwoCat};
use crate::error::{Error, Result};
use crate::fincat::{
    compose_functors, cyclic_group, discrete, opposite, poset, product, walking_iso,
    CatValuedDiagram, FinCat, Functor, FunctorSearch, Ob, RawCategory,
};
use crate::groth::{cart_groth, FibCat};
use crate::sset::{nerve, nerve_map, MarkedSSet, SimplexDiagram};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Enumeration budget before falling back to a single randomized search.
const FUNCTOR_SAMPLE_CAP: usize = 4096;

pub fn cat_json(c: &FinCat) -> Value {
    serde_json::to_value(RawCategory::from_cat(c)).expect("serializable")
}

pub fn functor_json(f: &Functor) -> Value {
    serde_json::to_value(f).expect("serializable")
}

pub fn diagram_json(d: &CatValuedDiagram) -> Value {
    json!({
        "index": cat_json(&d.index),
        "values": d.values.iter().map(cat_json).collect::<Vec<_>>(),
        "action": d.action.iter().map(functor_json).collect::<Vec<_>>(),
    })
}

/// A random finite poset on `1..=max_objects` elements, refining the
/// natural order on indices.
pub fn random_poset(rng: &mut Rng8, max_objects: usize) -> FinCat {
    let n = rng.gen_range(1..=max_objects.max(1));
    let le = random_order(rng, n);
    crate::fincat::preorder((0..n).map(|i| i.to_string()).collect(), |i, j| le[i][j])
        .expect("transitively closed")
}

fn random_order(rng: &mut Rng8, n: usize) -> Vec<Vec<bool>> {
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
        for cell in row.iter_mut().skip(i + 1) {
            *cell = rng.gen_bool(0.5);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    le
}

/// A random finite category: a poset with some relations doubled into a
/// pair of parallel arrows labelled 0 and 1, composing by the maximum label.
/// Doubled loops are idempotents.  Occasionally a small group or the
/// walking isomorphism is returned instead.
pub fn random_category(rng: &mut Rng8, max_objects: usize) -> FinCat {
    let max_objects = max_objects.max(1);
    match rng.gen_range(0..10) {
        0 => return cyclic_group(2),
        1 if max_objects >= 2 => return walking_iso(),
        _ => {}
    }
    let n = rng.gen_range(1..=max_objects);
    let le = random_order(rng, n);
    let mut doubled = vec![vec![false; n]; n];
    let budget = rng.gen_range(0..=2);
    for _ in 0..budget {
        let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if le[x][y] {
            doubled[x][y] = true;
        }
    }
    // close upward so that composites of labelled arrows exist
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let need = (doubled[x][y] && le[y][z]) || (le[x][y] && doubled[y][z]);
                    if need && !doubled[x][z] {
                        doubled[x][z] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut mors = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if le[x][y] {
                mors.push((x, y, 0u8));
                if doubled[x][y] {
                    mors.push((x, y, 1u8));
                }
            }
        }
    }
    FinCat::from_keys(
        (0..n).collect(),
        mors,
        |&(x, y, _)| (x, y),
        |&x| (x, x, 0),
        |&(_, z, b), &(x, _, a)| (x, z, a.max(b)),
        |x| x.to_string(),
        |&(x, y, l)| match (x == y, l) {
            (true, 0) => format!("id_{x}"),
            (true, _) => format!("e_{x}"),
            (false, 0) => format!("{x}<{y}"),
            (false, _) => format!("{x}<{y}'"),
        },
    )
    .expect("closed under composition by construction")
}

/// A small category for fibers and diagram values.
pub fn random_value(rng: &mut Rng8, max_objects: usize) -> FinCat {
    match rng.gen_range(0..6) {
        0 => poset(0),
        1 => poset(1),
        2 => discrete(2.min(max_objects.max(1))),
        3 if max_objects >= 2 => walking_iso(),
        4 if max_objects >= 3 => poset(2),
        _ => random_category(rng, max_objects.min(2)),
    }
}

/// A fiber for colimit suites, where the apex is probed against itself:
/// a point, `[1]`, two points, the walking isomorphism or `Z/2`, keeping
/// to one object when `max_objects < 2`.
pub fn random_small_value(rng: &mut Rng8, max_objects: usize) -> FinCat {
    if max_objects < 2 {
        return [poset(0), cyclic_group(2)][rng.gen_range(0..2)].clone();
    }
    match rng.gen_range(0..5) {
        0 => poset(0),
        1 => poset(1),
        2 => discrete(2),
        3 => walking_iso(),
        _ => cyclic_group(2),
    }
}

/// A random functor `c → d`, or `None` when there is none.
pub fn random_functor(rng: &mut Rng8, c: &FinCat, d: &FinCat) -> Option<Functor> {
    match FunctorSearch::new(c, d).cap(FUNCTOR_SAMPLE_CAP).collect() {
        Ok(all) => all.choose(rng).cloned(),
        Err(_) => {
            let cands = c
                .objects()
                .map(|_| {
                    let mut v: Vec<Ob> = d.objects().collect();
                    v.shuffle(rng);
                    v
                })
                .collect();
            FunctorSearch::new(c, d).objects(cands).first()
        }
    }
}

/// The three small bases used by diagram suites: `[1]`, `[2]`, `[1]×[1]`.
pub fn shape(i: usize) -> FinCat {
    match i % 3 {
        0 => poset(1),
        1 => poset(2),
        _ => product(&poset(1), &poset(1)).expect("square"),
    }
}

pub fn shape_name(i: usize) -> &'static str {
    ["[1]", "[2]", "[1]x[1]"][i % 3]
}

/// A random strict functor from a thin acyclic `index` to categories.
/// Values come from `value`; at each object the maps out of the covering
/// predecessors are chosen greedily to agree on common lower bounds, and
/// the value falls back to a point when no compatible choice exists.
pub fn random_diagram(
    rng: &mut Rng8,
    index: &FinCat,
    mut value: impl FnMut(&mut Rng8) -> FinCat,
) -> CatValuedDiagram {
    let n = index.num_objects();
    let le = |a: Ob, b: Ob| !index.hom(a, b).is_empty();
    let mut order: Vec<Ob> = index.objects().collect();
    order.sort_by_key(|&j| (index.objects().filter(|&k| le(k, j)).count(), j));
    let mut values: Vec<Option<FinCat>> = vec![None; n];
    let mut maps: HashMap<(Ob, Ob), Functor> = HashMap::new();
    for &j in &order {
        let below: Vec<Ob> = index.objects().filter(|&k| k != j && le(k, j)).collect();
        let covers: Vec<Ob> = below
            .iter()
            .copied()
            .filter(|&i| !below.iter().any(|&k| k != i && le(i, k)))
            .collect();
        let candidate = value(rng);
        let chosen = choose_cover_maps(rng, &values, &maps, &below, &covers, &candidate, &le)
            .map(|m| (candidate.clone(), m))
            .unwrap_or_else(|| {
                let pt = poset(0);
                let m = covers
                    .iter()
                    .map(|&i| {
                        let src = values[i].as_ref().expect("earlier in order");
                        (i, Functor::constant(src, &pt, 0))
                    })
                    .collect();
                (pt, m)
            });
        let (vj, cover_maps) = chosen;
        for &k in &below {
            let (i, g) = cover_maps
                .iter()
                .find(|(i, _)| le(k, *i))
                .expect("some cover lies above k");
            let f = if k == *i {
                g.clone()
            } else {
                compose_functors(g, &maps[&(k, *i)])
            };
            maps.insert((k, j), f);
        }
        values[j] = Some(vj);
    }
    let values: Vec<FinCat> = values.into_iter().map(|v| v.expect("filled")).collect();
    CatValuedDiagram::from_generators(index.clone(), values, |m| {
        maps[&(index.src(m), index.tgt(m))].clone()
    })
    .expect("strict by construction")
}

fn choose_cover_maps(
    rng: &mut Rng8,
    values: &[Option<FinCat>],
    maps: &HashMap<(Ob, Ob), Functor>,
    below: &[Ob],
    covers: &[Ob],
    target: &FinCat,
    le: &impl Fn(Ob, Ob) -> bool,
) -> Option<Vec<(Ob, Functor)>> {
    let via = |i: Ob, k: Ob, g: &Functor| {
        if i == k {
            g.clone()
        } else {
            compose_functors(g, &maps[&(k, i)])
        }
    };
    let mut chosen: Vec<(Ob, Functor)> = Vec::new();
    for &i in covers {
        let src = values[i].as_ref().expect("earlier in order");
        let mut cands = FunctorSearch::new(src, target)
            .cap(FUNCTOR_SAMPLE_CAP)
            .collect()
            .ok()?;
        cands.shuffle(rng);
        let ok = cands.into_iter().find(|g| {
            chosen.iter().all(|(i2, g2)| {
                below
                    .iter()
                    .filter(|&&k| le(k, i) && le(k, *i2))
                    .all(|&k| via(i, k, g) == via(*i2, k, g2))
            })
        })?;
        chosen.push((i, ok));
    }
    Some(chosen)
}

/// A random diagram on `shape(s)^op` or on `shape(s)`.
pub fn random_shape_diagram(
    rng: &mut Rng8,
    s: usize,
    op: bool,
    max_objects: usize,
) -> CatValuedDiagram {
    let base = shape(s);
    let index = if op { opposite(&base) } else { base };
    random_diagram(rng, &index, |r| random_value(r, max_objects))
}

/// As [`random_shape_diagram`] with values from [`random_small_value`].
pub fn random_small_shape_diagram(
    rng: &mut Rng8,
    s: usize,
    op: bool,
    max_objects: usize,
) -> CatValuedDiagram {
    let base = shape(s);
    let index = if op { opposite(&base) } else { base };
    random_diagram(rng, &index, |r| random_small_value(r, max_objects))
}

/// A random Cartesian fibration over a random poset with at most
/// `max_objects` objects, as the Grothendieck construction of a random
/// diagram; `discrete` restricts fibers to sets.
pub fn random_fibration(
    rng: &mut Rng8,
    max_objects: usize,
    discrete_fibers: bool,
) -> Result<(CatValuedDiagram, FibCat)> {
    let c = random_poset(rng, max_objects);
    let f = random_diagram(rng, &opposite(&c), |r| {
        if discrete_fibers {
            discrete(r.gen_range(0..=2))
        } else {
            random_value(r, 2)
        }
    });
    let g = cart_groth(&f)?;
    Ok((f, g.fib))
}

/// A random (2,1)-category small enough for five-dimensional nerves.
pub fn random_two_one(rng: &mut Rng8, max_objects: usize) -> Result<TwoCat> {
    let small = max_objects.min(2);
    match rng.gen_range(0..6) {
        0 => TwoCat::delooping(&[vec![0, 1], vec![1, 0]]),
        1 => TwoCat::walking_2_iso(),
        2 => TwoCat::banded(&cyclic_group(2), 1, 2),
        3 => TwoCat::from_category(&random_category(rng, small)),
        _ => {
            let c = random_poset(rng, small);
            TwoCat::banded(&c, 1, rng.gen_range(1..=2))
        }
    }
}

/// A random normal oplax functor `B → D` with `B` locally discrete on a
/// random category `C` and `D` the `Z/m` band over a random `C'`.  On
/// 1-cells it is a random functor `C → C'`, and `η_{f,g}` is the coboundary
/// `b(f) + b(g) - b(g∘f)` of a random normalized labelling `b`.
pub fn random_oplax(
    rng: &mut Rng8,
    max_objects: usize,
) -> Result<(TwoCat, TwoCat, NormalOplax, Value)> {
    let c = random_category(rng, max_objects.min(3));
    let c2 = random_category(rng, max_objects.min(3));
    let phi =
        random_functor(rng, &c, &c2).ok_or_else(|| Error::InvalidFunctor("no functor".into()))?;
    let m2 = rng.gen_range(2..=3);
    let b = TwoCat::from_category(&c)?;
    let d = TwoCat::banded(&c2, 1, m2)?;
    let label: Vec<usize> = c
        .morphisms()
        .map(|m| {
            if c.is_identity(m) {
                0
            } else {
                rng.gen_range(0..m2)
            }
        })
        .collect();
    let n = c.num_objects();
    let obj = phi.obj.clone();
    let homs: Vec<Vec<Functor>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let (bh, dh) = (b.hom(x, y), d.hom(obj[x], obj[y]));
                    let tgt = c2.hom(obj[x], obj[y]);
                    let ob: Vec<Ob> = c
                        .hom(x, y)
                        .iter()
                        .map(|&f| tgt.iter().position(|&h| h == phi.mor[f]).expect("in hom"))
                        .collect();
                    let mor = bh.morphisms().map(|m| dh.id(ob[bh.src(m)])).collect();
                    Functor::new(ob, mor)
                })
                .collect()
        })
        .collect();
    let f = NormalOplax::new(&b, obj.clone(), homs, |x, y, z, f, g| {
        let (f, g) = (c.hom(x, y)[f], c.hom(y, z)[g]);
        let gf = c.compose(g, f);
        let a = (label[f] + label[g] + m2 - label[gf] % m2) % m2;
        let at = c2
            .hom(obj[x], obj[z])
            .iter()
            .position(|&h| h == phi.mor[gf])
            .expect("in hom");
        at * m2 + a
    });
    let inst = json!({
        "source": cat_json(&c),
        "target": cat_json(&c2),
        "on_one_cells": functor_json(&phi),
        "band": m2,
        "labels": label,
    });
    Ok((b, d, f, inst))
}

/// A random `φ: [n] → sSet⁺` for `n ∈ {1, 2}`: nerves of small posets
/// truncated at `dim`, joined by nerves of random monotone maps.  Once a
/// value is sharply marked all later values are.
pub fn random_simplex_diagram(rng: &mut Rng8, dim: usize) -> Result<(SimplexDiagram, Value)> {
    let n = rng.gen_range(1..=2usize.min(dim.max(1)));
    let pool = |r: &mut Rng8| match r.gen_range(0..4) {
        0 => poset(0),
        1 => poset(1),
        2 => poset(2),
        _ => product(&poset(1), &poset(1)).expect("square"),
    };
    let cats: Vec<FinCat> = (0..=n).map(|_| pool(rng)).collect();
    let sharp_from = rng.gen_range(0..=n + 1);
    let functors: Vec<Functor> = (0..n)
        .map(|i| random_functor(rng, &cats[i], &cats[i + 1]).expect("posets are nonempty"))
        .collect();
    let nerves = cats
        .iter()
        .map(|c| nerve(c, dim))
        .collect::<Result<Vec<_>>>()?;
    let values = nerves
        .iter()
        .enumerate()
        .map(|(i, nv)| {
            if i >= sharp_from {
                MarkedSSet::sharp(nv.sset.clone())
            } else {
                MarkedSSet::flat(nv.sset.clone())
            }
        })
        .collect();
    let maps = functors
        .iter()
        .enumerate()
        .map(|(i, f)| nerve_map(f, &nerves[i], &nerves[i + 1]))
        .collect::<Result<Vec<_>>>()?;
    let inst = json!({
        "dim": dim,
        "values": cats.iter().map(cat_json).collect::<Vec<_>>(),
        "maps": functors.iter().map(functor_json).collect::<Vec<_>>(),
        "sharp_from": sharp_from,
    });
    Ok((SimplexDiagram::new(values, maps)?, inst))
}

pub const KINDS: &[&str] = &[
    "fincat",
    "poset",
    "functor",
    "diagram",
    "op-diagram",
    "presheaf",
    "two-cat",
    "oplax",
    "simplex-diagram",
];

/// The JSON instance of `kind` drawn from `seed`.
pub fn generate(kind: &str, seed: u64, max_objects: usize, dim: usize) -> Result<Value> {
    let mut r = rng(seed);
    let r = &mut r;
    Ok(match kind {
        "fincat" => cat_json(&random_category(r, max_objects)),
        "poset" => cat_json(&random_poset(r, max_objects)),
        "functor" => {
            let c = random_category(r, max_objects);
            let d = random_category(r, max_objects);
            let f = random_functor(r, &c, &d);
            json!({ "dom": cat_json(&c), "cod": cat_json(&d), "functor": f.as_ref().map(functor_json) })
        }
        "diagram" | "op-diagram" => {
            let s = r.gen_range(0..3);
            diagram_json(&random_shape_diagram(
                r,
                s,
                kind == "op-diagram",
                max_objects,
            ))
        }
        "presheaf" => {
            let (f, _) = random_fibration(r, max_objects, true)?;
            diagram_json(&f)
        }
        "two-cat" => serde_json::to_value(random_two_one(r, max_objects)?.to_raw())?,
        "oplax" => {
            let (_, _, f, inst) = random_oplax(r, max_objects)?;
            json!({ "instance": inst, "oplax": serde_json::to_value(&f)? })
        }
        "simplex-diagram" => random_simplex_diagram(r, dim)?.1,
        other => return Err(Error::UnknownKind(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_categories_are_valid_and_deterministic() {
        for seed in 0..200 {
            let a = random_category(&mut rng(seed), 4);
            let b = random_category(&mut rng(seed), 4);
            assert_eq!(a, b);
            assert!(a.law_violations().is_empty());
            assert!(a.num_objects() <= 4);
        }
    }

    #[test]
    fn random_diagrams_are_strict() {
        for seed in 0..60 {
            let mut r = rng(seed);
            for s in 0..3 {
                for op in [false, true] {
                    random_shape_diagram(&mut r, s, op, 3).validate().unwrap();
                }
            }
        }
    }

    #[test]
    fn random_oplax_functors_validate() {
        for seed in 0..30 {
            let (b, d, f, _) = random_oplax(&mut rng(seed), 3).unwrap();
            crate::duskin::validate_oplax(&b, &d, &f).unwrap();
        }
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in KINDS {
            let a = generate(kind, 42, 3, 3).unwrap();
            let b = generate(kind, 42, 3, 3).unwrap();
            assert_eq!(a.to_string(), b.to_string(), "{kind}");
        }
        assert!(matches!(
            generate("nope", 1, 3, 3),
            Err(Error::UnknownKind(_))
        ));
    }
}

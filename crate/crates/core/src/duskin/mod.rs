//! Strict 2-categories, normal oplax functors and the Duskin nerve.
//!
//! A [`TwoCat`] stores its hom-categories as [`FinCat`]s and horizontal
//! composition as tables on 1-cells and 2-cells.  Normal oplax functors
//! carry their comparison 2-cells `η_{f,g}: F(g∘f) ⇒ F(g)∘F(f)`.  The Duskin
//! nerve is built from its 3-truncated description and then checked.

mod nerve;
mod oplax;
mod relative;
#[cfg(test)]
mod tests;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{category_from_json, discrete, FinCat, Mor, Ob, RawCategory};

pub use nerve::{
    check_3_coskeletal, coherent_nerve_agreement, cube_check, duskin_nerve, duskin_vs_nerve,
    hom_poset, hom_poset_subsets, DuskinCell, DuskinNerve,
};
pub use oplax::{duskin_decode, duskin_encode, validate_oplax, NormalOplax};
pub use relative::{relative_fibration_straighten, RelativeStraightening};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Comp {
    /// `obj[g * nf + f] = g∘f`
    obj: Vec<Ob>,
    /// `mor[β * na + α] = β∘α`
    mor: Vec<Mor>,
    nf: usize,
    na: usize,
}

/// A strict 2-category with finitely many cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCat {
    names: Vec<String>,
    homs: Vec<Vec<FinCat>>,
    units: Vec<Ob>,
    comp: Vec<Comp>,
}

impl TwoCat {
    /// Assemble from hom-categories, units and horizontal composition, then
    /// check every enriched law.
    pub fn new(
        names: Vec<String>,
        homs: Vec<Vec<FinCat>>,
        units: Vec<Ob>,
        compose1: impl Fn(usize, usize, usize, Ob, Ob) -> Ob,
        compose2: impl Fn(usize, usize, usize, Mor, Mor) -> Mor,
    ) -> Result<TwoCat> {
        let n = names.len();
        if homs.len() != n || homs.iter().any(|r| r.len() != n) || units.len() != n {
            return Err(Error::EnrichedAssocViolation(
                "hom or unit tables have the wrong shape".into(),
            ));
        }
        let mut comp = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (a, b) = (&homs[x][y], &homs[y][z]);
                    let obj = b
                        .objects()
                        .flat_map(|g| a.objects().map(move |f| (g, f)))
                        .map(|(g, f)| compose1(x, y, z, g, f))
                        .collect();
                    let mor = b
                        .morphisms()
                        .flat_map(|be| a.morphisms().map(move |al| (be, al)))
                        .map(|(be, al)| compose2(x, y, z, be, al))
                        .collect();
                    comp.push(Comp {
                        obj,
                        mor,
                        nf: a.num_objects(),
                        na: a.num_morphisms(),
                    });
                }
            }
        }
        let b = TwoCat {
            names,
            homs,
            units,
            comp,
        };
        b.validate()?;
        Ok(b)
    }

    /// A 1-category with only identity 2-cells.  The 1-cells of `hom(x, y)`
    /// are numbered in the order of `c.hom(x, y)`.
    pub fn from_category(c: &FinCat) -> Result<TwoCat> {
        let n = c.num_objects();
        let pos = |x: Ob, y: Ob, m: Mor| c.hom(x, y).iter().position(|&h| h == m).expect("in hom");
        let mut homs = Vec::with_capacity(n);
        for x in c.objects() {
            let mut row = Vec::with_capacity(n);
            for y in c.objects() {
                let names: Vec<String> = c
                    .hom(x, y)
                    .iter()
                    .map(|&m| c.morphism_name(m).to_string())
                    .collect();
                row.push(rename_discrete(names)?);
            }
            homs.push(row);
        }
        let units = c.objects().map(|x| pos(x, x, c.id(x))).collect();
        let names = c.object_names().to_vec();
        TwoCat::new(
            names,
            homs,
            units,
            |x, y, z, g, f| pos(x, z, c.compose(c.hom(y, z)[g], c.hom(x, y)[f])),
            |x, y, z, g, f| pos(x, z, c.compose(c.hom(y, z)[g], c.hom(x, y)[f])),
        )
    }

    /// One object, one 1-cell, and the abelian group with table `mul` as
    /// 2-cells, composed the same way vertically and horizontally.
    pub fn delooping(mul: &[Vec<usize>]) -> Result<TwoCat> {
        let g = crate::fincat::group_category(mul)?;
        TwoCat::new(
            vec!["*".into()],
            vec![vec![g]],
            vec![0],
            |_, _, _, _, _| 0,
            |_, _, _, b, a| mul[b][a],
        )
    }

    /// Two objects `a, b` with `hom(a, b)` the walking isomorphism and only
    /// units otherwise.
    pub fn walking_2_iso() -> Result<TwoCat> {
        let unit = discrete(1);
        let empty = discrete(0);
        let iso = crate::fincat::walking_iso();
        let homs = vec![vec![unit.clone(), iso], vec![empty, unit]];
        TwoCat::new(
            vec!["a".into(), "b".into()],
            homs,
            vec![0, 0],
            |x, y, _, g, f| if x == y { g } else { f },
            |x, y, _, b, a| if x == y { b } else { a },
        )
    }

    /// A strict (2,1)-category banded by two cyclic groups over a
    /// 1-category `c`.  The 1-cells `x → y` are pairs `(f, u)` with
    /// `f ∈ c(x, y)` and `u ∈ Z/m1`.  A 2-cell `(f, u) ⇒ (f, u')` is a label
    /// `a ∈ Z/m2`.  Everything composes by adding coordinates.
    pub fn banded(c: &FinCat, m1: usize, m2: usize) -> Result<TwoCat> {
        let n = c.num_objects();
        let pos = |x: Ob, y: Ob, m: Mor| c.hom(x, y).iter().position(|&h| h == m).expect("in hom");
        let mut homs = Vec::with_capacity(n);
        // 2-cells of hom(x, y) are (f, u, u', a) in lexicographic order
        for x in c.objects() {
            let mut row = Vec::with_capacity(n);
            for y in c.objects() {
                let fs = c.hom(x, y).to_vec();
                let objects: Vec<(usize, usize)> = (0..fs.len())
                    .flat_map(|f| (0..m1).map(move |u| (f, u)))
                    .collect();
                let mut mors = Vec::new();
                for f in 0..fs.len() {
                    for u in 0..m1 {
                        for v in 0..m1 {
                            for a in 0..m2 {
                                mors.push((f, u, v, a));
                            }
                        }
                    }
                }
                let cat = FinCat::from_keys(
                    objects,
                    mors,
                    |&(f, u, v, _)| ((f, u), (f, v)),
                    |&(f, u)| (f, u, u, 0),
                    |&(_, _, w, b), &(f, u, _, a)| (f, u, w, (a + b) % m2),
                    |&(f, u)| format!("({},{u})", c.morphism_name(fs[f])),
                    |&(f, u, v, a)| format!("({},{u}>{v},{a})", c.morphism_name(fs[f])),
                )?;
                row.push(cat);
            }
            homs.push(row);
        }
        let units = c.objects().map(|x| pos(x, x, c.id(x)) * m1).collect();
        let split1 = |k: usize| (k / m1, k % m1);
        let split2 = |k: usize| {
            (
                k / (m1 * m1 * m2),
                (k / (m1 * m2)) % m1,
                (k / m2) % m1,
                k % m2,
            )
        };
        TwoCat::new(
            c.object_names().to_vec(),
            homs,
            units,
            |x, y, z, g, f| {
                let ((g, v), (f, u)) = (split1(g), split1(f));
                let h = pos(x, z, c.compose(c.hom(y, z)[g], c.hom(x, y)[f]));
                h * m1 + (u + v) % m1
            },
            |x, y, z, be, al| {
                let ((g, v, v2, b), (f, u, u2, a)) = (split2(be), split2(al));
                let h = pos(x, z, c.compose(c.hom(y, z)[g], c.hom(x, y)[f]));
                let (s, t) = ((u + v) % m1, (u2 + v2) % m1);
                ((h * m1 + s) * m1 + t) * m2 + (a + b) % m2
            },
        )
    }

    pub fn num_objects(&self) -> usize {
        self.names.len()
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn hom(&self, x: usize, y: usize) -> &FinCat {
        &self.homs[x][y]
    }

    pub fn unit(&self, x: usize) -> Ob {
        self.units[x]
    }

    fn table(&self, x: usize, y: usize, z: usize) -> &Comp {
        let n = self.names.len();
        &self.comp[(x * n + y) * n + z]
    }

    /// `g∘f` for 1-cells `f: x → y`, `g: y → z`.
    pub fn compose1(&self, x: usize, y: usize, z: usize, g: Ob, f: Ob) -> Ob {
        let t = self.table(x, y, z);
        t.obj[g * t.nf + f]
    }

    /// Horizontal composite `β∘α` of 2-cells in `hom(y, z)` and `hom(x, y)`.
    pub fn compose2(&self, x: usize, y: usize, z: usize, b: Mor, a: Mor) -> Mor {
        let t = self.table(x, y, z);
        t.mor[b * t.na + a]
    }

    /// Every hom-category is a groupoid.
    pub fn is_two_one(&self) -> bool {
        self.homs.iter().flatten().all(FinCat::is_groupoid)
    }

    fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::EnrichedAssocViolation(s));
        let n = self.num_objects();
        for x in 0..n {
            if self.units[x] >= self.homs[x][x].num_objects() {
                return bad(format!("unit of {} is not a 1-cell", self.names[x]));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    self.check_functorial(x, y, z)?;
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let h = &self.homs[x][y];
                let (ux, uy) = (self.units[x], self.units[y]);
                for f in h.objects() {
                    if self.compose1(x, y, y, uy, f) != f || self.compose1(x, x, y, f, ux) != f {
                        return bad(format!("unit law fails at 1-cell {}", h.object_name(f)));
                    }
                }
                let (ix, iy) = (self.homs[x][x].id(ux), self.homs[y][y].id(uy));
                for a in h.morphisms() {
                    if self.compose2(x, y, y, iy, a) != a || self.compose2(x, x, y, a, ix) != a {
                        return bad(format!("unit law fails at 2-cell {}", h.morphism_name(a)));
                    }
                }
            }
        }
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        self.check_assoc(w, x, y, z)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn check_functorial(&self, x: usize, y: usize, z: usize) -> Result<()> {
        let (a, b, c) = (&self.homs[x][y], &self.homs[y][z], &self.homs[x][z]);
        let here = || format!("{}→{}→{}", self.names[x], self.names[y], self.names[z]);
        let bad = |s: String| {
            Err(Error::EnrichedAssocViolation(format!(
                "composition at {}: {s}",
                here()
            )))
        };
        let t = self.table(x, y, z);
        if t.obj.iter().any(|&o| o >= c.num_objects())
            || t.mor.iter().any(|&m| m >= c.num_morphisms())
        {
            return bad("value out of range".into());
        }
        for g in b.objects() {
            for f in a.objects() {
                if self.compose2(x, y, z, b.id(g), a.id(f)) != c.id(self.compose1(x, y, z, g, f)) {
                    return bad(format!(
                        "identities of {} and {} not preserved",
                        b.object_name(g),
                        a.object_name(f)
                    ));
                }
            }
        }
        for be in b.morphisms() {
            for al in a.morphisms() {
                let h = self.compose2(x, y, z, be, al);
                if c.src(h) != self.compose1(x, y, z, b.src(be), a.src(al))
                    || c.tgt(h) != self.compose1(x, y, z, b.tgt(be), a.tgt(al))
                {
                    return bad(format!(
                        "endpoints of {}∘{}",
                        b.morphism_name(be),
                        a.morphism_name(al)
                    ));
                }
                for &be2 in b.out_of(b.tgt(be)) {
                    for &al2 in a.out_of(a.tgt(al)) {
                        let lhs = self.compose2(x, y, z, b.compose(be2, be), a.compose(al2, al));
                        let rhs = c.compose(self.compose2(x, y, z, be2, al2), h);
                        if lhs != rhs {
                            return bad(format!(
                                "interchange fails for {}, {}, {}, {}",
                                b.morphism_name(be2),
                                b.morphism_name(be),
                                a.morphism_name(al2),
                                a.morphism_name(al)
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_assoc(&self, w: usize, x: usize, y: usize, z: usize) -> Result<()> {
        let (f_, g_, h_) = (&self.homs[w][x], &self.homs[x][y], &self.homs[y][z]);
        for h in h_.objects() {
            for g in g_.objects() {
                for f in f_.objects() {
                    let l = self.compose1(w, x, z, self.compose1(x, y, z, h, g), f);
                    let r = self.compose1(w, y, z, h, self.compose1(w, x, y, g, f));
                    if l != r {
                        return Err(Error::EnrichedAssocViolation(format!(
                            "(h∘g)∘f ≠ h∘(g∘f) for {}, {}, {}",
                            h_.object_name(h),
                            g_.object_name(g),
                            f_.object_name(f)
                        )));
                    }
                }
            }
        }
        for h in h_.morphisms() {
            for g in g_.morphisms() {
                for f in f_.morphisms() {
                    let l = self.compose2(w, x, z, self.compose2(x, y, z, h, g), f);
                    let r = self.compose2(w, y, z, h, self.compose2(w, x, y, g, f));
                    if l != r {
                        return Err(Error::EnrichedAssocViolation(format!(
                            "horizontal composition of 2-cells {}, {}, {} is not associative",
                            h_.morphism_name(h),
                            g_.morphism_name(g),
                            f_.morphism_name(f)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_raw(&self) -> RawTwoCat {
        let n = self.num_objects();
        let mut homs = Vec::new();
        let mut compose = Vec::new();
        for x in 0..n {
            for y in 0..n {
                homs.push(RawHom {
                    src: self.names[x].clone(),
                    tgt: self.names[y].clone(),
                    category: RawCategory::from_cat(&self.homs[x][y]),
                });
                for z in 0..n {
                    let (a, b, c) = (&self.homs[x][y], &self.homs[y][z], &self.homs[x][z]);
                    let mut cells = Vec::new();
                    for g in b.objects() {
                        for f in a.objects() {
                            cells.push([
                                b.object_name(g).to_string(),
                                a.object_name(f).to_string(),
                                c.object_name(self.compose1(x, y, z, g, f)).to_string(),
                            ]);
                        }
                    }
                    let mut two_cells = Vec::new();
                    for be in b.morphisms() {
                        for al in a.morphisms() {
                            two_cells.push([
                                b.morphism_name(be).to_string(),
                                a.morphism_name(al).to_string(),
                                c.morphism_name(self.compose2(x, y, z, be, al)).to_string(),
                            ]);
                        }
                    }
                    compose.push(RawComposition {
                        objects: [
                            self.names[x].clone(),
                            self.names[y].clone(),
                            self.names[z].clone(),
                        ],
                        cells,
                        two_cells,
                    });
                }
            }
        }
        RawTwoCat {
            objects: self.names.clone(),
            homs,
            units: (0..n)
                .map(|x| {
                    (
                        self.names[x].clone(),
                        self.homs[x][x].object_name(self.units[x]).to_string(),
                    )
                })
                .collect(),
            compose,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<TwoCat> {
        validate_two_cat(&serde_json::from_str(s)?)
    }
}

fn rename_discrete(names: Vec<String>) -> Result<FinCat> {
    FinCat::from_keys(
        names.clone(),
        names,
        |m| (m.clone(), m.clone()),
        |o| o.clone(),
        |g, _| g.clone(),
        |o| o.clone(),
        |m| format!("id_{m}"),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawHom {
    pub src: String,
    pub tgt: String,
    pub category: RawCategory,
}

/// Horizontal composition at `objects = [x, y, z]`, as name triples
/// `[g, f, g∘f]` and `[β, α, β∘α]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawComposition {
    pub objects: [String; 3],
    pub cells: Vec<[String; 3]>,
    pub two_cells: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTwoCat {
    pub objects: Vec<String>,
    pub homs: Vec<RawHom>,
    pub units: BTreeMap<String, String>,
    pub compose: Vec<RawComposition>,
}

/// Parse name-keyed tables into a [`TwoCat`], checking every law.
pub fn validate_two_cat(raw: &RawTwoCat) -> Result<TwoCat> {
    let n = raw.objects.len();
    let oix = |s: &str| {
        raw.objects
            .iter()
            .position(|o| o == s)
            .ok_or_else(|| Error::UnknownObject(s.to_string()))
    };
    let mut homs: Vec<Vec<Option<FinCat>>> = vec![vec![None; n]; n];
    for h in &raw.homs {
        let (x, y) = (oix(&h.src)?, oix(&h.tgt)?);
        homs[x][y] = Some(category_from_json(&serde_json::to_string(&h.category)?)?);
    }
    let homs: Vec<Vec<FinCat>> = homs
        .into_iter()
        .enumerate()
        .map(|(x, row)| {
            row.into_iter()
                .enumerate()
                .map(|(y, c)| {
                    c.ok_or_else(|| {
                        Error::EnrichedAssocViolation(format!(
                            "missing hom({}, {})",
                            raw.objects[x], raw.objects[y]
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut units = Vec::with_capacity(n);
    for (x, o) in raw.objects.iter().enumerate() {
        let u = raw
            .units
            .get(o)
            .ok_or_else(|| Error::EnrichedAssocViolation(format!("no unit at {o}")))?;
        units.push(
            homs[x][x]
                .object_index(u)
                .ok_or_else(|| Error::UnknownObject(u.clone()))?,
        );
    }
    type Tables = (BTreeMap<(Ob, Ob), Ob>, BTreeMap<(Mor, Mor), Mor>);
    let mut tables: BTreeMap<(usize, usize, usize), Tables> = BTreeMap::new();
    for c in &raw.compose {
        let (x, y, z) = (
            oix(&c.objects[0])?,
            oix(&c.objects[1])?,
            oix(&c.objects[2])?,
        );
        let (a, b, d) = (&homs[x][y], &homs[y][z], &homs[x][z]);
        let entry = tables.entry((x, y, z)).or_default();
        for [g, f, h] in &c.cells {
            let look = |cat: &FinCat, s: &String| {
                cat.object_index(s)
                    .ok_or_else(|| Error::UnknownObject(s.clone()))
            };
            entry.0.insert((look(b, g)?, look(a, f)?), look(d, h)?);
        }
        for [g, f, h] in &c.two_cells {
            let look = |cat: &FinCat, s: &String| {
                cat.morphism_index(s)
                    .ok_or_else(|| Error::UnknownMorphism(s.clone()))
            };
            entry.1.insert((look(b, g)?, look(a, f)?), look(d, h)?);
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let t = tables.get(&(x, y, z));
                let need1 = homs[y][z].num_objects() * homs[x][y].num_objects();
                let need2 = homs[y][z].num_morphisms() * homs[x][y].num_morphisms();
                if t.map_or(0, |t| t.0.len()) != need1 || t.map_or(0, |t| t.1.len()) != need2 {
                    return Err(Error::EnrichedAssocViolation(format!(
                        "composition table at {}→{}→{} is incomplete",
                        raw.objects[x], raw.objects[y], raw.objects[z]
                    )));
                }
            }
        }
    }
    TwoCat::new(
        raw.objects.clone(),
        homs,
        units,
        |x, y, z, g, f| tables[&(x, y, z)].0[&(g, f)],
        |x, y, z, b, a| tables[&(x, y, z)].1[&(b, a)],
    )
}

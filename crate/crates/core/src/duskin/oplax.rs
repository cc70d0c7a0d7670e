use serde::{Deserialize, Serialize};

use super::nerve::{DuskinCell, DuskinNerve};
use super::TwoCat;
use crate::error::{Error, Result};
use crate::fincat::{identity_functor, FinCat, Functor, Mor, Ob};
use crate::sset::SSetMap;

/// A normal oplax functor between strict 2-categories: an object map, a
/// functor on each hom-category, and comparison 2-cells
/// `η_{f,g}: F(g∘f) ⇒ F(g)∘F(f)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalOplax {
    pub obj: Vec<usize>,
    /// `homs[x][y]: C(x, y) → D(Fx, Fy)`
    pub homs: Vec<Vec<Functor>>,
    /// `eta[x][y][z][g * |C(x, y)| + f] = η_{f,g}`
    pub eta: Vec<Vec<Vec<Vec<Mor>>>>,
}

impl NormalOplax {
    /// Assemble from its data; nothing is checked until [`validate_oplax`].
    pub fn new(
        c: &TwoCat,
        obj: Vec<usize>,
        homs: Vec<Vec<Functor>>,
        eta: impl Fn(usize, usize, usize, Ob, Ob) -> Mor,
    ) -> NormalOplax {
        let n = c.num_objects();
        let eta = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        (0..n)
                            .map(|z| {
                                c.hom(y, z)
                                    .objects()
                                    .flat_map(|g| c.hom(x, y).objects().map(move |f| (f, g)))
                                    .map(|(f, g)| eta(x, y, z, f, g))
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        NormalOplax { obj, homs, eta }
    }

    /// A strict 2-functor: every `η` is an identity.
    pub fn strict(c: &TwoCat, d: &TwoCat, obj: Vec<usize>, homs: Vec<Vec<Functor>>) -> NormalOplax {
        let fo = obj.clone();
        let hm = homs.clone();
        NormalOplax::new(c, obj, homs, move |x, y, z, f, g| {
            d.hom(fo[x], fo[z])
                .id(hm[x][z].obj[c.compose1(x, y, z, g, f)])
        })
    }

    pub fn identity(b: &TwoCat) -> NormalOplax {
        let n = b.num_objects();
        let homs = (0..n)
            .map(|x| (0..n).map(|y| identity_functor(b.hom(x, y))).collect())
            .collect();
        NormalOplax::strict(b, b, (0..n).collect(), homs)
    }

    /// A functor of 1-categories, between their locally discrete 2-categories.
    pub fn from_functor(c: &FinCat, d: &FinCat, f: &Functor) -> NormalOplax {
        let (bc, bd) = (
            TwoCat::from_category(c).expect("a category is a 2-category"),
            TwoCat::from_category(d).expect("a category is a 2-category"),
        );
        let homs = c
            .objects()
            .map(|x| {
                c.objects()
                    .map(|y| {
                        let target = d.hom(f.obj[x], f.obj[y]);
                        let obj: Vec<Ob> = c
                            .hom(x, y)
                            .iter()
                            .map(|&m| target.iter().position(|&t| t == f.mor[m]).expect("functor"))
                            .collect();
                        Functor::new(obj.clone(), obj)
                    })
                    .collect()
            })
            .collect();
        NormalOplax::strict(&bc, &bd, f.obj.clone(), homs)
    }

    pub fn eta(&self, c: &TwoCat, x: usize, y: usize, z: usize, f: Ob, g: Ob) -> Mor {
        self.eta[x][y][z][g * c.hom(x, y).num_objects() + f]
    }

    /// Every comparison 2-cell is invertible.
    pub fn is_pseudo(&self, c: &TwoCat, d: &TwoCat) -> bool {
        let n = c.num_objects();
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    self.eta[x][y][z]
                        .iter()
                        .all(|&e| d.hom(self.obj[x], self.obj[z]).is_iso(e))
                })
            })
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str, c: &TwoCat, d: &TwoCat) -> Result<NormalOplax> {
        let f: NormalOplax = serde_json::from_str(s)?;
        validate_oplax(c, d, &f)?;
        Ok(f)
    }
}

fn violation<T>(law: &str, detail: String) -> Result<T> {
    Err(Error::CoherenceViolation {
        law: law.to_string(),
        detail,
    })
}

fn check_shape(c: &TwoCat, d: &TwoCat, f: &NormalOplax) -> Result<()> {
    let n = c.num_objects();
    let mismatch = |s: &str| Err(Error::DomainMismatch(s.to_string()));
    if f.obj.len() != n || f.obj.iter().any(|&y| y >= d.num_objects()) {
        return mismatch("object map does not match the 2-categories");
    }
    if f.homs.len() != n || f.homs.iter().any(|r| r.len() != n) {
        return mismatch("hom maps have the wrong shape");
    }
    for x in 0..n {
        for y in 0..n {
            let (a, t) = (c.hom(x, y), d.hom(f.obj[x], f.obj[y]));
            let h = &f.homs[x][y];
            if h.obj.len() != a.num_objects()
                || h.mor.len() != a.num_morphisms()
                || h.obj.iter().any(|&o| o >= t.num_objects())
                || h.mor.iter().any(|&m| m >= t.num_morphisms())
            {
                return mismatch("a hom map does not match its hom-categories");
            }
        }
    }
    if f.eta.len() != n {
        return mismatch("η table has the wrong shape");
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let row = f.eta.get(x).and_then(|r| r.get(y)).and_then(|r| r.get(z));
                let need = c.hom(y, z).num_objects() * c.hom(x, y).num_objects();
                let t = d.hom(f.obj[x], f.obj[z]);
                if row.is_none_or(|r| r.len() != need || r.iter().any(|&m| m >= t.num_morphisms()))
                {
                    return mismatch("η table has the wrong shape");
                }
            }
        }
    }
    Ok(())
}

/// Check the laws (i)–(vi) of a normal oplax functor `c → d`.
pub fn validate_oplax(c: &TwoCat, d: &TwoCat, f: &NormalOplax) -> Result<()> {
    check_shape(c, d, f)?;
    let n = c.num_objects();
    let fo = &f.obj;
    for x in 0..n {
        if f.homs[x][x].obj[c.unit(x)] != d.unit(fo[x]) {
            return violation(
                "i",
                format!("F(id_{}) is not an identity", c.object_name(x)),
            );
        }
    }
    for x in 0..n {
        for y in 0..n {
            let (a, t, h) = (c.hom(x, y), d.hom(fo[x], fo[y]), &f.homs[x][y]);
            for g in a.objects() {
                if h.mor[a.id(g)] != t.id(h.obj[g]) {
                    return violation("ii", format!("F(id_{}) ≠ id_F({0})", a.object_name(g)));
                }
            }
            for m in a.morphisms() {
                if t.src(h.mor[m]) != h.obj[a.src(m)] || t.tgt(h.mor[m]) != h.obj[a.tgt(m)] {
                    return violation(
                        "iii",
                        format!("F({}) has the wrong endpoints", a.morphism_name(m)),
                    );
                }
                for &m2 in a.out_of(a.tgt(m)) {
                    if h.mor[a.compose(m2, m)] != t.compose(h.mor[m2], h.mor[m]) {
                        return violation(
                            "iii",
                            format!(
                                "F({}∘{}) ≠ F({0})∘F({1})",
                                a.morphism_name(m2),
                                a.morphism_name(m)
                            ),
                        );
                    }
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let t = d.hom(fo[x], fo[z]);
                for g in c.hom(y, z).objects() {
                    for fc in c.hom(x, y).objects() {
                        let e = f.eta(c, x, y, z, fc, g);
                        let src = f.homs[x][z].obj[c.compose1(x, y, z, g, fc)];
                        let tgt = d.compose1(
                            fo[x],
                            fo[y],
                            fo[z],
                            f.homs[y][z].obj[g],
                            f.homs[x][y].obj[fc],
                        );
                        if t.src(e) != src || t.tgt(e) != tgt {
                            return violation(
                                "d",
                                format!(
                                    "η for ({}, {}) is not a 2-cell F(g∘f) ⇒ F(g)∘F(f)",
                                    c.hom(x, y).object_name(fc),
                                    c.hom(y, z).object_name(g)
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let t = d.hom(fo[x], fo[y]);
            for g in c.hom(x, y).objects() {
                let idg = t.id(f.homs[x][y].obj[g]);
                if f.eta(c, x, x, y, c.unit(x), g) != idg || f.eta(c, x, y, y, g, c.unit(y)) != idg
                {
                    return violation(
                        "iv",
                        format!("η is not unital at {}", c.hom(x, y).object_name(g)),
                    );
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (a, b2, t) = (c.hom(x, y), c.hom(y, z), d.hom(fo[x], fo[z]));
                for phi in a.morphisms() {
                    for psi in b2.morphisms() {
                        let (f1, f2, g1, g2) = (a.src(phi), a.tgt(phi), b2.src(psi), b2.tgt(psi));
                        let lhs = t.compose(
                            f.eta(c, x, y, z, f2, g2),
                            f.homs[x][z].mor[c.compose2(x, y, z, psi, phi)],
                        );
                        let rhs = t.compose(
                            d.compose2(
                                fo[x],
                                fo[y],
                                fo[z],
                                f.homs[y][z].mor[psi],
                                f.homs[x][y].mor[phi],
                            ),
                            f.eta(c, x, y, z, f1, g1),
                        );
                        if lhs != rhs {
                            return violation(
                                "v",
                                format!(
                                    "η is not natural at ({}, {})",
                                    a.morphism_name(phi),
                                    b2.morphism_name(psi)
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let t = d.hom(fo[x], fo[w]);
                    for fc in c.hom(x, y).objects() {
                        for g in c.hom(y, z).objects() {
                            for h in c.hom(z, w).objects() {
                                let hg = c.compose1(y, z, w, h, g);
                                let gf = c.compose1(x, y, z, g, fc);
                                let ff = f.homs[x][y].obj[fc];
                                let fh = f.homs[z][w].obj[h];
                                let id_ff = d.hom(fo[x], fo[y]).id(ff);
                                let id_fh = d.hom(fo[z], fo[w]).id(fh);
                                let top = t.compose(
                                    d.compose2(fo[x], fo[y], fo[w], f.eta(c, y, z, w, g, h), id_ff),
                                    f.eta(c, x, y, w, fc, hg),
                                );
                                let bottom = t.compose(
                                    d.compose2(
                                        fo[x],
                                        fo[z],
                                        fo[w],
                                        id_fh,
                                        f.eta(c, x, y, z, fc, g),
                                    ),
                                    f.eta(c, x, z, w, gf, h),
                                );
                                if top != bottom {
                                    return violation(
                                        "vi",
                                        format!(
                                            "cocycle fails on ({}, {}, {})",
                                            c.hom(x, y).object_name(fc),
                                            c.hom(y, z).object_name(g),
                                            c.hom(z, w).object_name(h)
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_nerves(c: &TwoCat, d: &TwoCat, nc: &DuskinNerve, nd: &DuskinNerve) -> Result<()> {
    if nc.sset.dim() != nd.sset.dim() {
        return Err(Error::DomainMismatch(format!(
            "nerves truncated at {} and {}",
            nc.sset.dim(),
            nd.sset.dim()
        )));
    }
    if nc.sset.dim() < 2 {
        return Err(Error::DimensionBoundExceeded {
            needed: 2,
            bound: nc.sset.dim(),
        });
    }
    if nc.sset.count(0) != c.num_objects() || nd.sset.count(0) != d.num_objects() {
        return Err(Error::DomainMismatch(
            "nerve does not belong to the 2-category".into(),
        ));
    }
    Ok(())
}

/// The simplicial map `N₂C → N₂D` of a normal oplax functor.
pub fn duskin_encode(
    c: &TwoCat,
    d: &TwoCat,
    f: &NormalOplax,
    nc: &DuskinNerve,
    nd: &DuskinNerve,
) -> Result<SSetMap> {
    check_nerves(c, d, nc, nd)?;
    validate_oplax(c, d, f)?;
    SSetMap::from_keys(nc, nd, |_, cell| {
        let x = &cell.objects;
        let k = x.len() - 1;
        let mut cells = Vec::with_capacity(cell.cells.len());
        for j in 1..=k {
            for i in 0..j {
                cells.push(f.homs[x[i]][x[j]].obj[cell.cell(i, j)]);
            }
        }
        let mut two_cells = Vec::with_capacity(cell.two_cells.len());
        for l in 2..=k {
            for j in 1..l {
                for i in 0..j {
                    let (xi, xj, xl) = (x[i], x[j], x[l]);
                    let e = f.eta(c, xi, xj, xl, cell.cell(i, j), cell.cell(j, l));
                    let img = f.homs[xi][xl].mor[cell.two_cell(i, j, l)];
                    two_cells.push(d.hom(f.obj[xi], f.obj[xl]).compose(e, img));
                }
            }
        }
        DuskinCell {
            objects: x.iter().map(|&o| f.obj[o]).collect(),
            cells,
            two_cells,
        }
    })
}

/// Read a normal oplax functor off a simplicial map `N₂C → N₂D`.
pub fn duskin_decode(
    c: &TwoCat,
    d: &TwoCat,
    m: &SSetMap,
    nc: &DuskinNerve,
    nd: &DuskinNerve,
) -> Result<NormalOplax> {
    check_nerves(c, d, nc, nd)?;
    if let Some(why) = m.defect(&nc.sset, &nd.sset) {
        return Err(Error::DomainMismatch(why));
    }
    let image = |k: usize, key: &DuskinCell| -> &DuskinCell {
        let x = nc.cell(k, key).expect("a simplex of the nerve");
        nd.key(k, m.apply(k, x))
    };
    let n = c.num_objects();
    let obj: Vec<usize> = (0..n)
        .map(|x| {
            image(
                0,
                &DuskinCell {
                    objects: vec![x],
                    cells: vec![],
                    two_cells: vec![],
                },
            )
            .objects[0]
        })
        .collect();
    let mut homs = Vec::with_capacity(n);
    for x in 0..n {
        let mut row = Vec::with_capacity(n);
        for y in 0..n {
            let a = c.hom(x, y);
            let fo: Vec<Ob> = a
                .objects()
                .map(|g| {
                    image(
                        1,
                        &DuskinCell {
                            objects: vec![x, y],
                            cells: vec![g],
                            two_cells: vec![],
                        },
                    )
                    .cells[0]
                })
                .collect();
            // φ: g ⇒ h sits in the 2-simplex (x, y, y) with edges h, g, id
            let fm: Vec<Mor> = a
                .morphisms()
                .map(|phi| {
                    let key = DuskinCell {
                        objects: vec![x, y, y],
                        cells: vec![a.tgt(phi), a.src(phi), c.unit(y)],
                        two_cells: vec![phi],
                    };
                    image(2, &key).two_cells[0]
                })
                .collect();
            row.push(Functor::new(fo, fm));
        }
        homs.push(row);
    }
    let f = NormalOplax::new(c, obj, homs, |x, y, z, fc, g| {
        let gf = c.compose1(x, y, z, g, fc);
        let key = DuskinCell {
            objects: vec![x, y, z],
            cells: vec![fc, gf, g],
            two_cells: vec![c.hom(x, z).id(gf)],
        };
        image(2, &key).two_cells[0]
    });
    validate_oplax(c, d, &f)?;
    Ok(f)
}

use serde_json::json;

use super::TwoCat;
use crate::caps::{caps, check};
use crate::error::{Error, Result};
use crate::fincat::{preorder, FinCat, Functor, FunctorSearch, Mor, Ob};
use crate::par;
use crate::sset::{build, coskeletal_report, nerve, product, simplex, Keyed, SSetMap};
use crate::verdict::Verdict;

/// A simplex of the Duskin nerve: objects `x₀ … x_k`, 1-cells `f_ij` for
/// `i < j`, and 2-cells `φ_ijl: f_il ⇒ f_jl ∘ f_ij` for `i < j < l`.
///
/// Pairs and triples are stored in colexicographic order, so the data of a
/// face on the first `k` vertices is a prefix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DuskinCell {
    pub objects: Vec<usize>,
    pub cells: Vec<Ob>,
    pub two_cells: Vec<Mor>,
}

pub type DuskinNerve = Keyed<DuskinCell>;

fn pair(i: usize, j: usize) -> usize {
    j * (j - 1) / 2 + i
}

fn triple(i: usize, j: usize, l: usize) -> usize {
    l * (l - 1) * (l - 2) / 6 + j * (j - 1) / 2 + i
}

impl DuskinCell {
    pub fn cell(&self, i: usize, j: usize) -> Ob {
        self.cells[pair(i, j)]
    }

    pub fn two_cell(&self, i: usize, j: usize, l: usize) -> Mor {
        self.two_cells[triple(i, j, l)]
    }
}

/// The two composites around the square for `i < j < l < m`.
fn square_commutes(b: &TwoCat, c: &DuskinCell, i: usize, j: usize, l: usize, m: usize) -> bool {
    let x = &c.objects;
    let (xi, xj, xl, xm) = (x[i], x[j], x[l], x[m]);
    let outer = b.hom(xi, xm);
    let id_lm = b.hom(xl, xm).id(c.cell(l, m));
    let id_ij = b.hom(xi, xj).id(c.cell(i, j));
    let lhs = outer.compose(
        b.compose2(xi, xl, xm, id_lm, c.two_cell(i, j, l)),
        c.two_cell(i, l, m),
    );
    let rhs = outer.compose(
        b.compose2(xi, xj, xm, c.two_cell(j, l, m), id_ij),
        c.two_cell(i, j, m),
    );
    lhs == rhs
}

fn extend(b: &TwoCat, prev: &DuskinCell, k: usize) -> Vec<DuskinCell> {
    fn edges(b: &TwoCat, c: &mut DuskinCell, k: usize, i: usize, out: &mut Vec<DuskinCell>) {
        if i == k {
            faces(b, c, k, 0, 1, out);
            return;
        }
        for f in b.hom(c.objects[i], c.objects[k]).objects() {
            c.cells.push(f);
            edges(b, c, k, i + 1, out);
            c.cells.pop();
        }
    }
    fn faces(
        b: &TwoCat,
        c: &mut DuskinCell,
        k: usize,
        i: usize,
        j: usize,
        out: &mut Vec<DuskinCell>,
    ) {
        if j >= k {
            out.push(c.clone());
            return;
        }
        let (ni, nj) = if i + 1 < j { (i + 1, j) } else { (0, j + 1) };
        let (xi, xj, xk) = (c.objects[i], c.objects[j], c.objects[k]);
        let src = c.cell(i, k);
        let tgt = b.compose1(xi, xj, xk, c.cell(j, k), c.cell(i, j));
        let h = b.hom(xi, xk);
        for &phi in h.hom(src, tgt) {
            c.two_cells.push(phi);
            if (0..i).all(|a| square_commutes(b, c, a, i, j, k)) {
                faces(b, c, k, ni, nj, out);
            }
            c.two_cells.pop();
        }
    }
    let mut out = Vec::new();
    for xk in 0..b.num_objects() {
        let mut c = prev.clone();
        c.objects.push(xk);
        edges(b, &mut c, k, 0, &mut out);
    }
    out
}

fn act(b: &TwoCat, c: &DuskinCell, al: &[usize]) -> DuskinCell {
    let m = al.len() - 1;
    let objects: Vec<usize> = al.iter().map(|&a| c.objects[a]).collect();
    let mut cells = Vec::with_capacity(m * (m + 1) / 2);
    for j in 1..=m {
        for i in 0..j {
            cells.push(if al[i] == al[j] {
                b.unit(objects[i])
            } else {
                c.cell(al[i], al[j])
            });
        }
    }
    let mut two_cells = Vec::new();
    for l in 2..=m {
        for j in 1..l {
            for i in 0..j {
                two_cells.push(if al[i] < al[j] && al[j] < al[l] {
                    c.two_cell(al[i], al[j], al[l])
                } else {
                    b.hom(objects[i], objects[l]).id(cells[pair(i, l)])
                });
            }
        }
    }
    DuskinCell {
        objects,
        cells,
        two_cells,
    }
}

fn cell_name(b: &TwoCat, c: &DuskinCell) -> String {
    let n = c.objects.len();
    if n == 1 {
        return b.object_name(c.objects[0]).to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    for j in 1..n {
        for i in 0..j {
            parts.push(
                b.hom(c.objects[i], c.objects[j])
                    .object_name(c.cell(i, j))
                    .to_string(),
            );
        }
    }
    let mut name = parts.join(",");
    if n > 2 {
        let mut two = Vec::new();
        for l in 2..n {
            for j in 1..l {
                for i in 0..j {
                    two.push(
                        b.hom(c.objects[i], c.objects[l])
                            .morphism_name(c.two_cell(i, j, l))
                            .to_string(),
                    );
                }
            }
        }
        name = format!("{name}|{}", two.join(","));
    }
    name
}

/// The Duskin nerve up to level `dim`.  Every level consists of the
/// 3-truncated data subject to the square condition on all 3-faces, which
/// makes the levels above 3 the unique fillers of their boundaries.
pub fn duskin_nerve(b: &TwoCat, dim: usize) -> Result<DuskinNerve> {
    let cap = caps().max_enumeration;
    let mut levels: Vec<Vec<DuskinCell>> = vec![(0..b.num_objects())
        .map(|x| DuskinCell {
            objects: vec![x],
            cells: Vec::new(),
            two_cells: Vec::new(),
        })
        .collect()];
    for k in 1..=dim {
        let next: Vec<DuskinCell> = par::map(&levels[k - 1], |c| extend(b, c, k))
            .into_iter()
            .flatten()
            .collect();
        check("Duskin nerve level", next.len(), cap)?;
        levels.push(next);
    }
    build(
        dim,
        levels,
        |_, c, al| act(b, c, al),
        |_, c| cell_name(b, c),
    )
}

/// The Duskin nerve of a 1-category agrees with its ordinary nerve.
pub fn duskin_vs_nerve(c: &FinCat, dim: usize) -> Result<Verdict> {
    let b = TwoCat::from_category(c)?;
    let dn = duskin_nerve(&b, dim)?;
    let n = nerve(c, dim)?;
    let map = SSetMap::from_keys(&dn, &n, |_, cell| {
        let fs = (1..cell.objects.len())
            .map(|j| c.hom(cell.objects[j - 1], cell.objects[j])[cell.cell(j - 1, j)])
            .collect();
        (cell.objects[0], fs)
    })?;
    Ok(Verdict::check(
        map.is_bijective(&n.sset),
        format!("Duskin nerve ≅ nerve through level {dim}"),
        || json!({ "duskin": dn.sset.counts(), "nerve": n.sset.counts() }),
    ))
}

/// Every sphere `∂Δᵐ → N₂B` with `3 < m ≤ dim` has exactly one filler.
pub fn check_3_coskeletal(b: &TwoCat, dim: usize) -> Result<Verdict> {
    if dim < 5 {
        return Err(Error::DimensionBoundExceeded {
            needed: 5,
            bound: dim,
        });
    }
    let dn = duskin_nerve(b, dim)?;
    let report = coskeletal_report(&dn.sset, 3)?;
    let ok = report
        .iter()
        .all(|s| s.unfilled == 0 && s.multiply_filled == 0);
    let summary: Vec<String> = report
        .iter()
        .map(|s| format!("{}:{}", s.level, s.spheres))
        .collect();
    Ok(Verdict::check(
        ok,
        format!("unique fillers for spheres at levels {}", summary.join(" ")),
        || json!({ "census": report }),
    ))
}

/// The subsets of `{i..j}` containing both `i` and `j`, as bitmasks in
/// increasing order.
pub fn hom_poset_subsets(i: usize, j: usize) -> Vec<u32> {
    let ends = (1u32 << i) | (1u32 << j);
    let inner: Vec<usize> = (i + 1..j).collect();
    let mut out: Vec<u32> = (0u32..(1 << inner.len()))
        .map(|s| {
            inner
                .iter()
                .enumerate()
                .filter(|&(t, _)| s & (1 << t) != 0)
                .fold(ends, |m, (_, &e)| m | (1 << e))
        })
        .collect();
    out.sort_unstable();
    out
}

fn mask_name(m: u32) -> String {
    let els: Vec<String> = (0..32)
        .filter(|&e| m & (1 << e) != 0)
        .map(|e| e.to_string())
        .collect();
    format!("{{{}}}", els.join(","))
}

/// The poset `P_{i,j}` of subsets of `{i..j}` containing `i` and `j`.
pub fn hom_poset(n: usize, i: usize, j: usize) -> Result<FinCat> {
    if i > j || j > n {
        return Err(Error::DomainMismatch(format!(
            "need 0 ≤ i ≤ j ≤ n, got i={i}, j={j}, n={n}"
        )));
    }
    if n >= 31 {
        return Err(Error::SizeBoundExceeded {
            what: "hom poset vertices".into(),
            size: n + 1,
            cap: 31,
        });
    }
    let masks = hom_poset_subsets(i, j);
    check("hom poset", masks.len(), caps().max_objects)?;
    preorder(masks.iter().map(|&m| mask_name(m)).collect(), |a, b| {
        masks[a] & !masks[b] == 0
    })
}

/// `N(P_{i,j}) ≅ (Δ¹)^{j-i-1}` by the map recording, for each interior
/// element, the first vertex of a chain whose subset contains it.
pub fn cube_check(n: usize, i: usize, j: usize, dim: usize) -> Result<Verdict> {
    let p = hom_poset(n, i, j)?;
    let masks = hom_poset_subsets(i, j);
    let np = nerve(&p, dim)?;
    let d1 = simplex(1, dim)?;
    let inner: Vec<usize> = (i + 1..j).collect();
    let coords = |ch: &(Ob, Vec<Mor>)| -> Vec<Vec<usize>> {
        let verts: Vec<u32> = std::iter::once(ch.0)
            .chain(ch.1.iter().map(|&f| p.tgt(f)))
            .map(|v| masks[v])
            .collect();
        inner
            .iter()
            .map(|&e| {
                verts
                    .iter()
                    .map(|&s| usize::from(s & (1 << e) != 0))
                    .collect()
            })
            .collect()
    };
    let verdict = if inner.is_empty() {
        let pt = simplex(0, dim)?;
        let map = SSetMap::new(
            &np.sset,
            &pt.sset,
            (0..=dim).map(|k| vec![0; np.sset.count(k)]).collect(),
        )?;
        Verdict::check(
            map.is_bijective(&pt.sset),
            format!("N(P_{i},{j}) ≅ Δ⁰"),
            || json!({ "counts": np.sset.counts() }),
        )
    } else {
        let mut stages: Vec<Keyed<(usize, usize)>> = Vec::new();
        for t in 1..inner.len() {
            let prev = if t == 1 {
                &d1.sset
            } else {
                &stages[t - 2].sset
            };
            stages.push(product(prev, &d1.sset)?);
        }
        let target = stages.last().map_or(&d1.sset, |s| &s.sset);
        let mut levels = Vec::with_capacity(dim + 1);
        for k in 0..=dim {
            let mut lv = Vec::with_capacity(np.sset.count(k));
            for ch in &np.keys[k] {
                let cs = coords(ch);
                let mut idx = d1.cell(k, &cs[0]).expect("monotone");
                for (t, st) in stages.iter().enumerate() {
                    let next = d1.cell(k, &cs[t + 1]).expect("monotone");
                    idx = st.cell(k, &(idx, next)).expect("product cell");
                }
                lv.push(idx);
            }
            levels.push(lv);
        }
        let map = SSetMap::new(&np.sset, target, levels)?;
        Verdict::check(
            map.is_bijective(target),
            format!("N(P_{i},{j}) ≅ (Δ¹)^{} through level {dim}", inner.len()),
            || json!({ "nerve": np.sset.counts(), "cube": target.counts() }),
        )
    };
    Ok(verdict)
}

struct HomPoset {
    masks: Vec<u32>,
    cat: FinCat,
}

impl HomPoset {
    fn new(i: usize, j: usize) -> Result<HomPoset> {
        Ok(HomPoset {
            masks: hom_poset_subsets(i, j),
            cat: hom_poset(j, i, j)?,
        })
    }

    fn index(&self, m: u32) -> usize {
        self.masks.binary_search(&m).expect("subset of the poset")
    }

    fn arrow(&self, a: u32, b: u32) -> Mor {
        self.cat.hom(self.index(a), self.index(b))[0]
    }
}

fn span(i: usize, j: usize) -> u32 {
    ((1u32 << (j + 1)) - 1) & !((1u32 << i) - 1)
}

/// Simplicial functors `𝔠(Δᵏ) → N_*B`, recorded as their objects and
/// one functor `P_{i,j} → B(x_i, x_j)` per pair `i < j`.
fn coherent_simplices(b: &TwoCat, k: usize) -> Result<Vec<DuskinCell>> {
    let pairs: Vec<(usize, usize)> = {
        let mut v: Vec<(usize, usize)> =
            (0..=k).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        v.sort_by_key(|&(i, j)| (j - i, i));
        v
    };
    let posets: Vec<Vec<Option<HomPoset>>> = (0..=k)
        .map(|i| {
            (0..=k)
                .map(|j| {
                    if i < j {
                        HomPoset::new(i, j).map(Some)
                    } else {
                        Ok(None)
                    }
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>>>()?;
    let cap = caps().max_enumeration;
    let mut out = Vec::new();
    let n = b.num_objects();
    if n == 0 {
        return Ok(out);
    }
    let mut objects = vec![0usize; k + 1];
    loop {
        let mut fams: Vec<Vec<Option<Functor>>> = vec![vec![None; k + 1]; k + 1];
        search(b, &objects, &pairs, 0, &posets, &mut fams, &mut out, cap)?;
        let mut t = 0;
        loop {
            if t > k {
                return Ok(out);
            }
            objects[t] += 1;
            if objects[t] < n {
                break;
            }
            objects[t] = 0;
            t += 1;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    b: &TwoCat,
    x: &[usize],
    pairs: &[(usize, usize)],
    at: usize,
    posets: &[Vec<Option<HomPoset>>],
    fams: &mut [Vec<Option<Functor>>],
    out: &mut Vec<DuskinCell>,
    cap: usize,
) -> Result<()> {
    if at == pairs.len() {
        let k = x.len() - 1;
        let top = |i: usize, j: usize| (1u32 << i) | (1u32 << j);
        let mut cells = Vec::new();
        for j in 1..=k {
            for i in 0..j {
                let hp = posets[i][j].as_ref().expect("pair");
                cells.push(fams[i][j].as_ref().expect("chosen").obj[hp.index(top(i, j))]);
            }
        }
        let mut two_cells = Vec::new();
        for l in 2..=k {
            for j in 1..l {
                for i in 0..j {
                    let hp = posets[i][l].as_ref().expect("pair");
                    let m = hp.arrow(top(i, l), top(i, l) | (1 << j));
                    two_cells.push(fams[i][l].as_ref().expect("chosen").mor[m]);
                }
            }
        }
        out.push(DuskinCell {
            objects: x.to_vec(),
            cells,
            two_cells,
        });
        return check("coherent nerve level", out.len(), cap);
    }
    let (i, j) = pairs[at];
    let hp = posets[i][j].as_ref().expect("pair");
    let target = b.hom(x[i], x[j]);
    // the image of a subset with an interior element l is forced by the
    // composite through l
    let split = |s: u32, l: usize| (s & span(i, l), s & span(l, j));
    let fam = |a: usize, c: usize| fams[a][c].as_ref().expect("shorter pair chosen");
    let forced_obj = |s: u32| -> Option<Vec<Ob>> {
        let mut val: Option<Ob> = None;
        for l in i + 1..j {
            if s & (1 << l) == 0 {
                continue;
            }
            let (lo, hi) = split(s, l);
            let (pl, ph) = (
                posets[i][l].as_ref().expect("pair"),
                posets[l][j].as_ref().expect("pair"),
            );
            let v = b.compose1(
                x[i],
                x[l],
                x[j],
                fam(l, j).obj[ph.index(hi)],
                fam(i, l).obj[pl.index(lo)],
            );
            if val.is_some_and(|w| w != v) {
                return Some(Vec::new());
            }
            val = Some(v);
        }
        val.map(|v| vec![v])
    };
    let candidates: Vec<Vec<Ob>> = hp
        .masks
        .iter()
        .map(|&s| forced_obj(s).unwrap_or_else(|| target.objects().collect()))
        .collect();
    let mut rel: Vec<(u32, u32)> = vec![(0, 0); hp.cat.num_morphisms()];
    for a in 0..hp.masks.len() {
        for c in 0..hp.masks.len() {
            for &m in hp.cat.hom(a, c) {
                rel[m] = (hp.masks[a], hp.masks[c]);
            }
        }
    }
    let forced_mor = |m: Mor, v: Mor| -> bool {
        let (s, t) = rel[m];
        (i + 1..j).filter(|&l| s & (1 << l) != 0).all(|l| {
            let ((s1, s2), (t1, t2)) = (split(s, l), split(t, l));
            let (pl, ph) = (
                posets[i][l].as_ref().expect("pair"),
                posets[l][j].as_ref().expect("pair"),
            );
            let lo = fam(i, l).mor[pl.arrow(s1, t1)];
            let hi = fam(l, j).mor[ph.arrow(s2, t2)];
            b.compose2(x[i], x[l], x[j], hi, lo) == v
        })
    };
    let found = FunctorSearch::new(&hp.cat, target)
        .objects(candidates)
        .filter(&forced_mor)
        .collect()?;
    for f in found {
        fams[i][j] = Some(f);
        search(b, x, pairs, at + 1, posets, fams, out, cap)?;
    }
    fams[i][j] = None;
    Ok(())
}

/// Simplicial functors `𝔠(Δᵏ) → N_*B` for `k ≤ k_max` correspond
/// bijectively to the `k`-simplices of the Duskin nerve.
pub fn coherent_nerve_agreement(b: &TwoCat, k_max: usize) -> Result<Verdict> {
    if k_max > 4 {
        return Err(Error::DimensionBoundExceeded {
            needed: k_max,
            bound: 4,
        });
    }
    let dn = duskin_nerve(b, k_max)?;
    let mut parts = Vec::new();
    for k in 0..=k_max {
        let coh = coherent_simplices(b, k)?;
        let mut hit = vec![false; dn.sset.count(k)];
        let mut ok = true;
        for c in &coh {
            match dn.cell(k, c) {
                Some(x) if !hit[x] => hit[x] = true,
                _ => ok = false,
            }
        }
        ok &= hit.iter().all(|&h| h);
        parts.push(Verdict::check(
            ok,
            format!("level {k}: {} simplicial functors", coh.len()),
            || json!({ "level": k, "coherent": coh.len(), "duskin": dn.sset.count(k) }),
        ));
    }
    let v = Verdict::all(parts);
    Ok(if v.pass {
        Verdict::pass(format!(
            "coherent and Duskin simplices agree through level {k_max}"
        ))
    } else {
        v
    })
}

use std::collections::HashMap;

use serde_json::json;

use super::build::{marked_colimit, product_marked, simplex};
use super::{build, monotone_maps, Keyed, MarkedSSet, SSet, SSetMap};
use crate::caps::{caps, check};
use crate::error::{Error, Result};
use crate::fincat::poset;
use crate::twisted::twisted_arrow;
use crate::verdict::Verdict;

/// A functor `φ : [n] → sSet⁺`, given by its values and the maps
/// `φ(i) → φ(i+1)`.
#[derive(Clone, Debug)]
pub struct SimplexDiagram {
    pub values: Vec<MarkedSSet>,
    pub maps: Vec<SSetMap>,
    /// `trans[i][j - i] = φ(i → j)`.
    trans: Vec<Vec<SSetMap>>,
}

impl SimplexDiagram {
    pub fn new(values: Vec<MarkedSSet>, maps: Vec<SSetMap>) -> Result<SimplexDiagram> {
        if values.is_empty() || maps.len() + 1 != values.len() {
            return Err(Error::InvalidDiagram("need n+1 values and n maps".into()));
        }
        let dim = values[0].sset.dim();
        if values.iter().any(|v| v.sset.dim() != dim) {
            return Err(Error::DomainMismatch(
                "values have different dimension bounds".into(),
            ));
        }
        for (i, m) in maps.iter().enumerate() {
            if let Some(d) = m.defect(&values[i].sset, &values[i + 1].sset) {
                return Err(Error::InvalidDiagram(format!("map {i} → {}: {d}", i + 1)));
            }
            if !values[i].preserved_by(m, &values[i + 1]) {
                return Err(Error::InvalidDiagram(format!(
                    "map {i} → {} drops a marking",
                    i + 1
                )));
            }
        }
        let n = maps.len();
        let trans = (0..=n)
            .map(|i| {
                let mut row = vec![SSetMap::identity(&values[i].sset)];
                for j in i..n {
                    let next = maps[j].after(row.last().expect("nonempty"));
                    row.push(next);
                }
                row
            })
            .collect();
        Ok(SimplexDiagram {
            values,
            maps,
            trans,
        })
    }

    /// The diagram constant at `value`.
    pub fn constant(value: MarkedSSet, n: usize) -> SimplexDiagram {
        let id = SSetMap::identity(&value.sset);
        SimplexDiagram::new(vec![value; n + 1], vec![id; n]).expect("constant diagram")
    }

    pub fn n(&self) -> usize {
        self.maps.len()
    }

    pub fn dim(&self) -> usize {
        self.values[0].sset.dim()
    }

    pub fn value(&self, i: usize) -> &SSet {
        &self.values[i].sset
    }

    /// `φ(i → j)` for `i ≤ j`.
    pub fn transition(&self, i: usize, j: usize) -> &SSetMap {
        &self.trans[i][j - i]
    }

    /// `φ` restricted to `{from, …, n}`, reindexed from 0.
    pub fn restrict_from(&self, from: usize) -> SimplexDiagram {
        SimplexDiagram::new(self.values[from..].to_vec(), self.maps[from..].to_vec())
            .expect("restriction of a valid diagram")
    }
}

fn word(s: &[usize]) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")
}

fn check_bound(phi: &SimplexDiagram) -> Result<()> {
    if phi.n() > phi.dim() {
        return Err(Error::DimensionBoundExceeded {
            needed: phi.n(),
            bound: phi.dim(),
        });
    }
    Ok(())
}

/// `M^♮_[n](φ)`: a `k`-cell is `(σ : [k] → [n], τ ∈ φ(σ(0))_k)`.
#[derive(Clone, Debug)]
pub struct MappingSimplex {
    pub marked: MarkedSSet,
    pub keyed: Keyed<(Vec<usize>, usize)>,
}

pub fn mapping_simplex(phi: &SimplexDiagram) -> Result<MappingSimplex> {
    check_bound(phi)?;
    let (n, dim) = (phi.n(), phi.dim());
    let cap = caps().max_enumeration;
    let mut levels = Vec::with_capacity(dim + 1);
    for k in 0..=dim {
        let lv: Vec<(Vec<usize>, usize)> = monotone_maps(k, n)
            .into_iter()
            .flat_map(|s| {
                let c = phi.value(s[0]).count(k);
                (0..c).map(move |t| (s.clone(), t))
            })
            .collect();
        check("mapping simplex level", lv.len(), cap)?;
        levels.push(lv);
    }
    let keyed = build(
        dim,
        levels,
        |k, (s, t), al| {
            let s2: Vec<usize> = al.iter().map(|&a| s[a]).collect();
            let moved = phi.value(s[0]).act(k, *t, al);
            let t2 = phi.transition(s[0], s2[0]).apply(al.len() - 1, moved);
            (s2, t2)
        },
        |k, (s, t)| format!("{}:{}", word(s), phi.value(s[0]).name(k, *t)),
    )?;
    let marked_edges: Vec<usize> = if dim >= 1 {
        (0..keyed.sset.count(1))
            .filter(|&e| {
                let (s, t) = &keyed.keys[1][e];
                phi.values[s[0]].is_marked(*t)
            })
            .collect()
    } else {
        Vec::new()
    };
    let marked = MarkedSSet::new(keyed.sset.clone(), marked_edges)?;
    Ok(MappingSimplex { marked, keyed })
}

fn elements(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask & (1 << i) != 0).collect()
}

fn subsets_by_size(k: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (1u32..(1 << (k + 1))).collect();
    v.sort_by_key(|&s| (s.count_ones(), s));
    v
}

/// `N⁺_[n](φ)`: a `k`-cell is `σ : [k] → [n]` with, for each nonempty
/// `J ⊆ [k]`, a simplex `τ_J : Δ^J → φ(σ(max J))`, compatible under
/// inclusions.  The family is stored by bitmask.
#[derive(Clone, Debug)]
pub struct RelativeNerve {
    pub marked: MarkedSSet,
    pub keyed: Keyed<(Vec<usize>, Vec<usize>)>,
}

pub fn relative_nerve(phi: &SimplexDiagram) -> Result<RelativeNerve> {
    check_bound(phi)?;
    let (n, dim) = (phi.n(), phi.dim());
    let cap = caps().max_enumeration;
    let index: Vec<Vec<HashMap<Vec<usize>, Vec<usize>>>> = phi
        .values
        .iter()
        .map(|v| {
            (0..=dim)
                .map(|l| {
                    let mut h: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
                    for c in 0..v.sset.count(l) {
                        h.entry(v.sset.faces_of(l, c).to_vec()).or_default().push(c);
                    }
                    h
                })
                .collect()
        })
        .collect();
    let mut levels = Vec::with_capacity(dim + 1);
    for k in 0..=dim {
        let order = subsets_by_size(k);
        let mut out: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for s in monotone_maps(k, n) {
            let mut fam = vec![usize::MAX; 1 << (k + 1)];
            #[allow(clippy::too_many_arguments)]
            fn go(
                phi: &SimplexDiagram,
                index: &[Vec<HashMap<Vec<usize>, Vec<usize>>>],
                s: &[usize],
                order: &[u32],
                p: usize,
                fam: &mut Vec<usize>,
                out: &mut Vec<(Vec<usize>, Vec<usize>)>,
                cap: usize,
            ) -> Result<()> {
                if p == order.len() {
                    out.push((s.to_vec(), fam.clone()));
                    return check("relative nerve level", out.len(), cap);
                }
                let j = order[p];
                let el = elements(j);
                let top = *el.last().expect("nonempty");
                let cands: Vec<usize> = if el.len() == 1 {
                    (0..phi.value(s[top]).count(0)).collect()
                } else {
                    let last = el.len() - 1;
                    let key: Vec<usize> = (0..=last)
                        .map(|i| {
                            let sub = fam[(j & !(1 << el[i])) as usize];
                            if i < last {
                                sub
                            } else {
                                phi.transition(s[el[last - 1]], s[top]).apply(last - 1, sub)
                            }
                        })
                        .collect();
                    index[s[top]][last].get(&key).cloned().unwrap_or_default()
                };
                for c in cands {
                    fam[j as usize] = c;
                    go(phi, index, s, order, p + 1, fam, out, cap)?;
                }
                fam[j as usize] = usize::MAX;
                Ok(())
            }
            go(phi, &index, &s, &order, 0, &mut fam, &mut out, cap)?;
        }
        levels.push(out);
    }
    let keyed = build(
        dim,
        levels,
        |_, (s, fam), al| {
            let m = al.len() - 1;
            let s2: Vec<usize> = al.iter().map(|&a| s[a]).collect();
            let mut f2 = vec![usize::MAX; 1 << (m + 1)];
            for i in 1u32..(1 << (m + 1)) {
                let tl: Vec<usize> = elements(i).into_iter().map(|e| al[e]).collect();
                let img = tl.iter().fold(0u32, |a, &v| a | (1 << v));
                let ie = elements(img);
                let surj: Vec<usize> = tl
                    .iter()
                    .map(|v| ie.binary_search(v).expect("in image"))
                    .collect();
                let target = s[*ie.last().expect("nonempty")];
                f2[i as usize] = phi
                    .value(target)
                    .act(ie.len() - 1, fam[img as usize], &surj);
            }
            (s2, f2)
        },
        |_, (s, fam)| {
            let cells: Vec<String> = fam[1..].iter().map(|c| c.to_string()).collect();
            format!("{}:{}", word(s), cells.join(","))
        },
    )?;
    let marked_edges: Vec<usize> = if dim >= 1 {
        (0..keyed.sset.count(1))
            .filter(|&e| {
                let (s, fam) = &keyed.keys[1][e];
                phi.values[s[1]].is_marked(fam[0b11])
            })
            .collect()
    } else {
        Vec::new()
    };
    let marked = MarkedSSet::new(keyed.sset.clone(), marked_edges)?;
    Ok(RelativeNerve { marked, keyed })
}

/// `ν : M^♮_[n](φ) → N⁺_[n](φ)`, sending `(σ, τ)` to the family of composites
/// `Δ^J → Δ^k → φ(σ(0)) → φ(σ(max J))`.
pub fn nu(phi: &SimplexDiagram, m: &MappingSimplex, r: &RelativeNerve) -> Result<SSetMap> {
    SSetMap::from_keys(&m.keyed, &r.keyed, |k, (s, t)| {
        let mut fam = vec![usize::MAX; 1 << (k + 1)];
        for j in 1u32..(1 << (k + 1)) {
            let el = elements(j);
            let restricted = phi.value(s[0]).act(k, *t, &el);
            let top = s[*el.last().expect("nonempty")];
            fam[j as usize] = phi.transition(s[0], top).apply(el.len() - 1, restricted);
        }
        (s.clone(), fam)
    })
}

/// Over vertex `i`, both `M^♮_[n](φ)` and `N⁺_[n](φ)` have fiber `φ(i)`
/// under the canonical labels, and `ν` restricts to the identity.
pub fn fiber_compare(phi: &SimplexDiagram, i: usize) -> Result<Verdict> {
    if i > phi.n() {
        return Err(Error::InvalidDiagram(format!(
            "vertex {i} outside [{}]",
            phi.n()
        )));
    }
    let m = mapping_simplex(phi)?;
    let r = relative_nerve(phi)?;
    let v = nu(phi, &m, &r)?;
    let fi = &phi.values[i];
    let dim = phi.dim();
    let into_m = SSetMap::from_keys_plain(&fi.sset, &m.keyed, |k, t| (vec![i; k + 1], t))?;
    let into_r = SSetMap::from_keys_plain(&fi.sset, &r.keyed, |k, t| {
        let mut fam = vec![usize::MAX; 1 << (k + 1)];
        for j in 1u32..(1 << (k + 1)) {
            fam[j as usize] = fi.sset.act(k, t, &elements(j));
        }
        (vec![i; k + 1], fam)
    })?;
    let over = |s: &[usize]| s.iter().all(|&x| x == i);
    let onto_m = (0..=dim).all(|k| {
        let hit = m.keyed.keys[k].iter().filter(|(s, _)| over(s)).count();
        hit == fi.sset.count(k)
    });
    let onto_r = (0..=dim).all(|k| {
        let hit = r.keyed.keys[k].iter().filter(|(s, _)| over(s)).count();
        hit == fi.sset.count(k)
    });
    let marks = |map: &SSetMap, target: &MarkedSSet| {
        dim == 0
            || (0..fi.sset.count(1)).all(|e| fi.is_marked(e) == target.is_marked(map.apply(1, e)))
    };
    let parts = vec![
        Verdict::check(
            into_m.is_injective() && onto_m && marks(&into_m, &m.marked),
            "fiber of M over i is φ(i)",
            || json!({ "vertex": i, "side": "mapping simplex" }),
        ),
        Verdict::check(
            into_r.is_injective() && onto_r && marks(&into_r, &r.marked),
            "fiber of N over i is φ(i)",
            || json!({ "vertex": i, "side": "relative nerve" }),
        ),
        Verdict::check(
            v.after(&into_m) == into_r,
            "ν restricted to the fiber is the identity of φ(i)",
            || json!({ "vertex": i }),
        ),
    ];
    let all = Verdict::all(parts);
    Ok(if all.pass {
        Verdict::pass(format!(
            "fiber over {i}: {} cells per level, ν is the identity",
            fi.sset
                .counts()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join("/")
        ))
    } else {
        all
    })
}

impl SSetMap {
    /// Build a map out of a plain simplicial set from cell indices.
    pub fn from_keys_plain<K: Eq + std::hash::Hash + Clone>(
        from: &SSet,
        to: &Keyed<K>,
        f: impl Fn(usize, usize) -> K,
    ) -> Result<SSetMap> {
        let mut levels = Vec::with_capacity(from.dim() + 1);
        for k in 0..=from.dim() {
            let mut out = Vec::with_capacity(from.count(k));
            for x in 0..from.count(k) {
                out.push(to.cell(k, &f(k, x)).ok_or_else(|| {
                    Error::SimplicialViolation(format!(
                        "image of {} is not a cell of the target",
                        from.name(k, x)
                    ))
                })?);
            }
            levels.push(out);
        }
        SSetMap::new(from, &to.sset, levels)
    }
}

/// `φ(x)^♮ × (Δ^{lo..n})^♯`, with cells of the simplex factor keyed in
/// `[n - lo]` coordinates.
struct Term {
    x: usize,
    lo: usize,
    marked: MarkedSSet,
    keyed: Keyed<(usize, usize)>,
}

impl Term {
    fn new(
        phi: &SimplexDiagram,
        simplices: &[Keyed<Vec<usize>>],
        x: usize,
        lo: usize,
    ) -> Result<Term> {
        let s = MarkedSSet::sharp(simplices[lo].sset.clone());
        let (marked, keyed) = product_marked(&phi.values[x], &s)?;
        Ok(Term {
            x,
            lo,
            marked,
            keyed,
        })
    }

    /// Vertices of the simplex factor in `[n]` coordinates.
    fn sigma(&self, simplices: &[Keyed<Vec<usize>>], k: usize, c: usize) -> Vec<usize> {
        simplices[self.lo]
            .key(k, c)
            .iter()
            .map(|v| v + self.lo)
            .collect()
    }
}

fn term_map(
    phi: &SimplexDiagram,
    simplices: &[Keyed<Vec<usize>>],
    from: &Term,
    to: &Term,
) -> Result<SSetMap> {
    let build_levels = (0..=phi.dim())
        .map(|k| {
            from.keyed.keys[k]
                .iter()
                .map(|&(t, c)| {
                    let s = from.sigma(simplices, k, c);
                    let local: Vec<usize> = s.iter().map(|v| v - to.lo).collect();
                    let c2 = simplices[to.lo]
                        .cell(k, &local)
                        .expect("simplex face inclusion");
                    let t2 = phi.transition(from.x, to.x).apply(k, t);
                    to.keyed.cell(k, &(t2, c2)).expect("product cell")
                })
                .collect()
        })
        .collect();
    SSetMap::new(&from.keyed.sset, &to.keyed.sset, build_levels)
}

fn term_to_m(
    phi: &SimplexDiagram,
    simplices: &[Keyed<Vec<usize>>],
    from: &Term,
    m: &MappingSimplex,
) -> Result<SSetMap> {
    SSetMap::from_keys(&from.keyed, &m.keyed, |k, &(t, c)| {
        let s = from.sigma(simplices, k, c);
        let t2 = phi.transition(from.x, s[0]).apply(k, t);
        (s, t2)
    })
}

fn iso_verdict(
    label: &str,
    col: &(MarkedSSet, super::Colimit),
    m: &MappingSimplex,
    cocone: &[SSetMap],
) -> Verdict {
    match col.1.induced(&m.keyed.sset, cocone) {
        Ok(map) => Verdict::check(
            col.0.is_marked_iso(&map, &m.marked),
            format!("{label} presentation is isomorphic to M"),
            || json!({ "presentation": label, "colimit_counts": col.0.sset.counts(), "mapping_simplex_counts": m.keyed.sset.counts() }),
        ),
        Err(e) => Verdict::fail(
            format!("{label} cocone does not descend"),
            json!({ "presentation": label, "error": e.to_string() }),
        ),
    }
}

/// The pushout, zigzag and twisted-arrow coend presentations of
/// `M^♮_[n](φ)`, each compared with it by the induced map, together with
/// the comparison from the zigzag colimit to the coend.
pub fn mapping_simplex_decompositions(phi: &SimplexDiagram) -> Result<Verdict> {
    let n = phi.n();
    if n == 0 {
        return Err(Error::InvalidDiagram("decompositions need n ≥ 1".into()));
    }
    let dim = phi.dim();
    let m = mapping_simplex(phi)?;
    let simplices: Vec<Keyed<Vec<usize>>> = (0..=n)
        .map(|lo| simplex(n - lo, dim))
        .collect::<Result<_>>()?;

    // pushout: φ(0) × Δ^{1..n} into φ(0) × Δⁿ and into M_[n-1](φ|{1..n})
    let rest_phi = phi.restrict_from(1);
    let rest = mapping_simplex(&rest_phi)?;
    let big = Term::new(phi, &simplices, 0, 0)?;
    let small = Term::new(phi, &simplices, 0, 1)?;
    let small_to_big = term_map(phi, &simplices, &small, &big)?;
    let small_to_rest = SSetMap::from_keys(&small.keyed, &rest.keyed, |k, &(t, c)| {
        let s = small.sigma(&simplices, k, c);
        let t2 = phi.transition(0, s[0]).apply(k, t);
        (s.iter().map(|v| v - 1).collect(), t2)
    })?;
    let po = marked_colimit(
        &[&big.marked, &rest.marked, &small.marked],
        &[(2, 0, &small_to_big), (2, 1, &small_to_rest)],
    )?;
    let rest_to_m = SSetMap::from_keys(&rest.keyed, &m.keyed, |_, (s, t)| {
        (s.iter().map(|v| v + 1).collect(), *t)
    })?;
    let po_cocone = [
        term_to_m(phi, &simplices, &big, &m)?,
        rest_to_m,
        term_to_m(phi, &simplices, &small, &m)?,
    ];
    let v_po = iso_verdict("pushout", &po, &m, &po_cocone);

    // zigzag: φ(i) × Δ^{i..n} ← φ(i) × Δ^{i+1..n} → φ(i+1) × Δ^{i+1..n}
    let mut zig_terms = Vec::new();
    for i in 0..=n {
        zig_terms.push(Term::new(phi, &simplices, i, i)?);
    }
    for i in 0..n {
        zig_terms.push(Term::new(phi, &simplices, i, i + 1)?);
    }
    let mut zig_arrows = Vec::new();
    for i in 0..n {
        let c = n + 1 + i;
        zig_arrows.push((
            c,
            i,
            term_map(phi, &simplices, &zig_terms[c], &zig_terms[i])?,
        ));
        zig_arrows.push((
            c,
            i + 1,
            term_map(phi, &simplices, &zig_terms[c], &zig_terms[i + 1])?,
        ));
    }
    let zig_objs: Vec<&MarkedSSet> = zig_terms.iter().map(|t| &t.marked).collect();
    let zig_arr: Vec<(usize, usize, &SSetMap)> =
        zig_arrows.iter().map(|(a, b, f)| (*a, *b, f)).collect();
    let zig = marked_colimit(&zig_objs, &zig_arr)?;
    let zig_cocone: Vec<SSetMap> = zig_terms
        .iter()
        .map(|t| term_to_m(phi, &simplices, t, &m))
        .collect::<Result<_>>()?;
    let v_zig = iso_verdict("zigzag", &zig, &m, &zig_cocone);

    // coend over the opposite of the twisted arrow category of [n]
    let base = poset(n);
    let tw = twisted_arrow(&base)?;
    let co_terms: Vec<Term> = tw
        .cat
        .objects()
        .map(|f| Term::new(phi, &simplices, base.src(f), base.tgt(f)))
        .collect::<Result<_>>()?;
    let mut co_arrows = Vec::new();
    for (mor, &(f, _, _)) in tw.keys.iter().enumerate() {
        let g = tw.cat.tgt(mor);
        co_arrows.push((g, f, term_map(phi, &simplices, &co_terms[g], &co_terms[f])?));
    }
    let co_objs: Vec<&MarkedSSet> = co_terms.iter().map(|t| &t.marked).collect();
    let co_arr: Vec<(usize, usize, &SSetMap)> =
        co_arrows.iter().map(|(a, b, f)| (*a, *b, f)).collect();
    let co = marked_colimit(&co_objs, &co_arr)?;
    let co_cocone: Vec<SSetMap> = co_terms
        .iter()
        .map(|t| term_to_m(phi, &simplices, t, &m))
        .collect::<Result<_>>()?;
    let v_co = iso_verdict("coend", &co, &m, &co_cocone);

    // zigzag colimit to coend, through the inclusion of the zigzag poset
    let obj_of = |x: usize, y: usize| base.hom(x, y)[0];
    let zig_to_co: Vec<SSetMap> = zig_terms
        .iter()
        .map(|t| {
            let target = obj_of(t.x, t.lo);
            co.1.legs[target].clone()
        })
        .collect();
    let v_cmp = match zig.1.induced(&co.1.sset, &zig_to_co) {
        Ok(map) => Verdict::check(
            zig.0.is_marked_iso(&map, &co.0),
            "zigzag colimit maps isomorphically onto the coend",
            || json!({ "zigzag_counts": zig.0.sset.counts(), "coend_counts": co.0.sset.counts() }),
        ),
        Err(e) => Verdict::fail(
            "zigzag cocone into the coend does not descend",
            json!({ "error": e.to_string() }),
        ),
    };
    let all = Verdict::all(vec![v_po, v_zig, v_co, v_cmp]);
    Ok(if all.pass {
        Verdict::pass(format!(
            "pushout, zigzag and coend presentations agree with M (cells per level {:?})",
            m.keyed.sset.counts()
        ))
    } else {
        all
    })
}

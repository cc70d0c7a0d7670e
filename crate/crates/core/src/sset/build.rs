use std::collections::HashMap;

use serde::Serialize;
use serde_json::json;

use super::{build, monotone_maps, Keyed, MarkedSSet, SSet, SSetMap};
use crate::caps::{caps, check};
use crate::error::{Error, Result};
use crate::fincat::{FinCat, Functor, Mor, Ob};
use crate::par;
use crate::twisted::{twisted_arrow, UnionFind};
use crate::verdict::Verdict;

fn vertex_word(s: &[usize]) -> String {
    if s.iter().all(|&v| v < 10) {
        s.iter().map(|v| v.to_string()).collect()
    } else {
        s.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn compose_maps(s: &[usize], alpha: &[usize]) -> Vec<usize> {
    alpha.iter().map(|&a| s[a]).collect()
}

/// The subcomplex of `Δⁿ` on monotone maps accepted by `keep`.
fn simplex_sub(n: usize, dim: usize, keep: impl Fn(&[usize]) -> bool) -> Result<Keyed<Vec<usize>>> {
    if n > dim {
        return Err(Error::DimensionBoundExceeded {
            needed: n,
            bound: dim,
        });
    }
    let levels = (0..=dim)
        .map(|k| {
            monotone_maps(k, n)
                .into_iter()
                .filter(|s| keep(s))
                .collect()
        })
        .collect();
    build(
        dim,
        levels,
        |_, s, a| compose_maps(s, a),
        |_, s| vertex_word(s),
    )
}

fn image_mask(s: &[usize]) -> u64 {
    s.iter().fold(0, |m, &v| m | (1 << v))
}

/// `Δⁿ`; a `k`-cell is a monotone map `[k] → [n]`.
pub fn simplex(n: usize, dim: usize) -> Result<Keyed<Vec<usize>>> {
    simplex_sub(n, dim, |_| true)
}

/// `∂Δⁿ`: the non-surjective maps.
pub fn boundary(n: usize, dim: usize) -> Result<Keyed<Vec<usize>>> {
    let full = (1u64 << (n + 1)) - 1;
    simplex_sub(n, dim, |s| image_mask(s) != full)
}

/// `Λⁿ_i`: maps whose image misses some vertex other than `i`.
pub fn horn(n: usize, i: usize, dim: usize) -> Result<Keyed<Vec<usize>>> {
    if i > n {
        return Err(Error::InvalidDiagram(format!("horn index {i} exceeds {n}")));
    }
    let full = (1u64 << (n + 1)) - 1;
    simplex_sub(n, dim, |s| image_mask(s) | (1 << i) != full)
}

/// `Spⁿ`: maps with image inside some `{j, j+1}`.
pub fn spine(n: usize, dim: usize) -> Result<Keyed<Vec<usize>>> {
    simplex_sub(n, dim, |s| s[s.len() - 1] <= s[0] + 1)
}

fn same_dim(x: &SSet, y: &SSet) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DomainMismatch(format!(
            "dimension bounds {} and {} differ",
            x.dim(),
            y.dim()
        )));
    }
    Ok(())
}

/// `X × Y`, cells are pairs of cells at the same level.
pub fn product(x: &SSet, y: &SSet) -> Result<Keyed<(usize, usize)>> {
    same_dim(x, y)?;
    let cap = caps().max_enumeration;
    let mut levels = Vec::new();
    for k in 0..=x.dim() {
        check("product level", x.count(k) * y.count(k), cap)?;
        levels.push(
            (0..x.count(k))
                .flat_map(|a| (0..y.count(k)).map(move |b| (a, b)))
                .collect(),
        );
    }
    build(
        x.dim(),
        levels,
        |k, &(a, b), al| (x.act(k, a, al), y.act(k, b, al)),
        |k, &(a, b)| format!("({},{})", x.name(k, a), y.name(k, b)),
    )
}

/// Product of marked simplicial sets: an edge is marked when both
/// components are.
pub fn product_marked(
    x: &MarkedSSet,
    y: &MarkedSSet,
) -> Result<(MarkedSSet, Keyed<(usize, usize)>)> {
    let p = product(&x.sset, &y.sset)?;
    let marked: Vec<usize> = if p.sset.dim() >= 1 {
        (0..p.sset.count(1))
            .filter(|&e| {
                let (a, b) = p.keys[1][e];
                x.is_marked(a) && y.is_marked(b)
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok((MarkedSSet::new(p.sset.clone(), marked)?, p))
}

/// A colimit of a finite diagram with its legs.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub sset: SSet,
    pub legs: Vec<SSetMap>,
}

impl Colimit {
    /// The map out of the colimit induced by a cocone, if the cocone is
    /// compatible.
    pub fn induced(&self, target: &SSet, cocone: &[SSetMap]) -> Result<SSetMap> {
        if cocone.len() != self.legs.len() {
            return Err(Error::NotACocone(format!(
                "{} legs given for a diagram with {} objects",
                cocone.len(),
                self.legs.len()
            )));
        }
        let mut levels = Vec::with_capacity(self.sset.dim() + 1);
        for k in 0..=self.sset.dim() {
            let mut out = vec![usize::MAX; self.sset.count(k)];
            for (leg, map) in self.legs.iter().zip(cocone) {
                for (x, &c) in leg.levels[k].iter().enumerate() {
                    let y = map.levels[k][x];
                    if out[c] != usize::MAX && out[c] != y {
                        return Err(Error::NotACocone(format!(
                            "cell {} of the colimit has two images",
                            self.sset.name(k, c)
                        )));
                    }
                    out[c] = y;
                }
            }
            levels.push(out);
        }
        SSetMap::new(&self.sset, target, levels)
    }
}

/// Colimit of a diagram given by objects and arrows `(from, to, map)`,
/// computed levelwise as a quotient of the disjoint union.
pub fn finite_colimit(objects: &[&SSet], arrows: &[(usize, usize, &SSetMap)]) -> Result<Colimit> {
    let first = objects
        .first()
        .ok_or_else(|| Error::InvalidDiagram("empty diagram".into()))?;
    let dim = first.dim();
    for x in objects {
        same_dim(first, x)?;
    }
    for &(a, b, m) in arrows {
        if a >= objects.len() || b >= objects.len() {
            return Err(Error::InvalidDiagram("arrow endpoint out of range".into()));
        }
        if let Some(d) = m.defect(objects[a], objects[b]) {
            return Err(Error::InvalidDiagram(d));
        }
    }
    let mut offsets = vec![vec![0usize; objects.len() + 1]; dim + 1];
    for k in 0..=dim {
        for (o, x) in objects.iter().enumerate() {
            offsets[k][o + 1] = offsets[k][o] + x.count(k);
        }
        check(
            "colimit level",
            offsets[k][objects.len()],
            caps().max_enumeration,
        )?;
    }
    let mut class: Vec<Vec<usize>> = Vec::with_capacity(dim + 1);
    let mut reps: Vec<Vec<(usize, usize)>> = Vec::with_capacity(dim + 1);
    for k in 0..=dim {
        let total = offsets[k][objects.len()];
        let mut uf = UnionFind::new(total);
        for &(a, b, m) in arrows {
            for (x, &y) in m.levels[k].iter().enumerate() {
                uf.union(offsets[k][a] + x, offsets[k][b] + y);
            }
        }
        let mut label = vec![usize::MAX; total];
        let mut cl = Vec::with_capacity(total);
        let mut rp = Vec::new();
        for (o, x) in objects.iter().enumerate() {
            for c in 0..x.count(k) {
                let r = uf.find(offsets[k][o] + c);
                if label[r] == usize::MAX {
                    label[r] = rp.len();
                    rp.push((o, c));
                }
                cl.push(label[r]);
            }
        }
        class.push(cl);
        reps.push(rp);
    }
    let mut names = Vec::with_capacity(dim + 1);
    let mut faces = Vec::with_capacity(dim + 1);
    let mut degens = Vec::with_capacity(dim + 1);
    for k in 0..=dim {
        names.push(
            reps[k]
                .iter()
                .map(|&(o, c)| format!("{o}:{}", objects[o].name(k, c)))
                .collect(),
        );
        faces.push(
            reps[k]
                .iter()
                .map(|&(o, c)| {
                    if k == 0 {
                        Vec::new()
                    } else {
                        (0..=k)
                            .map(|i| class[k - 1][offsets[k - 1][o] + objects[o].face(k, i, c)])
                            .collect()
                    }
                })
                .collect(),
        );
        degens.push(
            reps[k]
                .iter()
                .map(|&(o, c)| {
                    if k == dim {
                        Vec::new()
                    } else {
                        (0..=k)
                            .map(|j| class[k + 1][offsets[k + 1][o] + objects[o].degen(k, j, c)])
                            .collect()
                    }
                })
                .collect(),
        );
    }
    let sset = SSet {
        dim,
        names,
        faces,
        degens,
    };
    if let Some(d) = sset.defect() {
        return Err(Error::SimplicialViolation(d));
    }
    let legs = (0..objects.len())
        .map(|o| SSetMap {
            levels: (0..=dim)
                .map(|k| {
                    (0..objects[o].count(k))
                        .map(|c| class[k][offsets[k][o] + c])
                        .collect()
                })
                .collect(),
        })
        .collect();
    Ok(Colimit { sset, legs })
}

/// Colimit of marked simplicial sets: marked edges are the images of
/// marked edges.
pub fn marked_colimit(
    objects: &[&MarkedSSet],
    arrows: &[(usize, usize, &SSetMap)],
) -> Result<(MarkedSSet, Colimit)> {
    for &(a, b, m) in arrows {
        if a < objects.len() && b < objects.len() && !objects[a].preserved_by(m, objects[b]) {
            return Err(Error::InvalidDiagram(format!(
                "arrow {a} → {b} does not preserve markings"
            )));
        }
    }
    let plain: Vec<&SSet> = objects.iter().map(|x| &x.sset).collect();
    let col = finite_colimit(&plain, arrows)?;
    let marked: Vec<usize> = objects
        .iter()
        .zip(&col.legs)
        .flat_map(|(x, leg)| {
            x.marked_edges()
                .into_iter()
                .map(|e| leg.apply(1, e))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok((MarkedSSet::new(col.sset.clone(), marked)?, col))
}

/// The pushout of `x ← a → y`; legs are ordered `x, y, a`.
pub fn pushout(a: &SSet, x: &SSet, y: &SSet, f: &SSetMap, g: &SSetMap) -> Result<Colimit> {
    finite_colimit(&[x, y, a], &[(2, 0, f), (2, 1, g)])
}

/// The sub-simplicial set on the cells flagged in `keep`, with its inclusion.
pub fn sub_sset(x: &SSet, keep: &[Vec<bool>]) -> Result<(SSet, SSetMap)> {
    let dim = x.dim();
    let cells: Vec<Vec<usize>> = (0..=dim)
        .map(|k| (0..x.count(k)).filter(|&c| keep[k][c]).collect())
        .collect();
    let mut pos = vec![Vec::new(); dim + 1];
    for k in 0..=dim {
        pos[k] = vec![usize::MAX; x.count(k)];
        for (i, &c) in cells[k].iter().enumerate() {
            pos[k][c] = i;
        }
    }
    let mut names = Vec::new();
    let mut faces = Vec::new();
    let mut degens = Vec::new();
    for k in 0..=dim {
        let mut fs = Vec::new();
        let mut ds = Vec::new();
        for &c in &cells[k] {
            let f: Vec<usize> = if k == 0 {
                Vec::new()
            } else {
                (0..=k).map(|i| pos[k - 1][x.face(k, i, c)]).collect()
            };
            let d: Vec<usize> = if k == dim {
                Vec::new()
            } else {
                (0..=k).map(|j| pos[k + 1][x.degen(k, j, c)]).collect()
            };
            if f.contains(&usize::MAX) || d.contains(&usize::MAX) {
                return Err(Error::SimplicialViolation(format!(
                    "selection is not closed at {}",
                    x.name(k, c)
                )));
            }
            fs.push(f);
            ds.push(d);
        }
        names.push(cells[k].iter().map(|&c| x.name(k, c).to_string()).collect());
        faces.push(fs);
        degens.push(ds);
    }
    let s = SSet {
        dim,
        names,
        faces,
        degens,
    };
    let incl = SSetMap::new(&s, x, cells)?;
    Ok((s, incl))
}

/// `sk_k X`: cells whose nondegenerate core has dimension at most `k`.
pub fn skeleton(x: &SSet, k: usize) -> Result<(SSet, SSetMap)> {
    if k > x.dim() {
        return Err(Error::DimensionBoundExceeded {
            needed: k,
            bound: x.dim(),
        });
    }
    let keep: Vec<Vec<bool>> = (0..=x.dim())
        .map(|l| {
            (0..x.count(l))
                .map(|c| x.normal_form(l, c).core_level <= k)
                .collect()
        })
        .collect();
    sub_sset(x, &keep)
}

/// Nonempty subsets of `[m]` with at most `size` elements, as bitmasks
/// ordered by cardinality and then value.
fn small_subsets(m: usize, size: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (1u32..(1 << (m + 1)))
        .filter(|s| s.count_ones() as usize <= size)
        .collect();
    v.sort_by_key(|&s| (s.count_ones(), s));
    v
}

fn elements(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask & (1 << i) != 0).collect()
}

fn by_faces(x: &SSet, k: usize) -> HashMap<Vec<usize>, Vec<usize>> {
    let mut h: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for c in 0..x.count(k) {
        h.entry(x.faces_of(k, c).to_vec()).or_default().push(c);
    }
    h
}

/// `cosk_k X` up to the dimension bound of `X`.  An `m`-cell is a family of
/// cells `x_S` indexed by subsets `S ⊆ [m]` with at most `k+1` elements,
/// compatible with faces.
pub fn coskeleton(x: &SSet, k: usize) -> Result<Keyed<Vec<usize>>> {
    let dim = x.dim();
    if k > dim {
        return Err(Error::DimensionBoundExceeded {
            needed: k,
            bound: dim,
        });
    }
    let index: Vec<HashMap<Vec<usize>, Vec<usize>>> = (0..=dim).map(|l| by_faces(x, l)).collect();
    let cap = caps().max_enumeration;
    let subsets: Vec<Vec<u32>> = (0..=dim).map(|m| small_subsets(m, k + 1)).collect();
    let positions: Vec<HashMap<u32, usize>> = subsets
        .iter()
        .map(|ss| ss.iter().enumerate().map(|(i, &s)| (s, i)).collect())
        .collect();
    let mut levels = Vec::with_capacity(dim + 1);
    for m in 0..=dim {
        let ss = &subsets[m];
        let pos = &positions[m];
        let mut out = Vec::new();
        let mut fam = vec![0usize; ss.len()];
        fn go(
            x: &SSet,
            ss: &[u32],
            pos: &HashMap<u32, usize>,
            index: &[HashMap<Vec<usize>, Vec<usize>>],
            p: usize,
            fam: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
            cap: usize,
        ) -> Result<()> {
            if p == ss.len() {
                out.push(fam.clone());
                return check("coskeleton level", out.len(), cap);
            }
            let el = elements(ss[p]);
            let cands: Vec<usize> = if el.len() == 1 {
                (0..x.count(0)).collect()
            } else {
                let key: Vec<usize> = el.iter().map(|&e| fam[pos[&(ss[p] & !(1 << e))]]).collect();
                index[el.len() - 1].get(&key).cloned().unwrap_or_default()
            };
            for c in cands {
                fam[p] = c;
                go(x, ss, pos, index, p + 1, fam, out, cap)?;
            }
            Ok(())
        }
        go(x, ss, pos, &index, 0, &mut fam, &mut out, cap)?;
        levels.push(out);
    }
    build(
        dim,
        levels,
        |m, fam, al| {
            let p = al.len() - 1;
            subsets[p]
                .iter()
                .map(|&t| {
                    let tl: Vec<usize> = elements(t).into_iter().map(|e| al[e]).collect();
                    let img = tl.iter().fold(0u32, |a, &v| a | (1 << v));
                    let ie = elements(img);
                    let surj: Vec<usize> = tl
                        .iter()
                        .map(|v| ie.binary_search(v).expect("in image"))
                        .collect();
                    x.act(ie.len() - 1, fam[positions[m][&img]], &surj)
                })
                .collect()
        },
        |m, fam| {
            let top = subsets[m]
                .iter()
                .rposition(|&s| s.count_ones() as usize == (m + 1).min(k + 1))
                .unwrap_or(0);
            let size = subsets[m][top].count_ones() as usize;
            subsets[m]
                .iter()
                .zip(fam)
                .filter(|(s, _)| s.count_ones() as usize == size)
                .map(|(_, &c)| x.name(size - 1, c).to_string())
                .collect::<Vec<_>>()
                .join("|")
        },
    )
}

/// Sphere and filler census at one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereCount {
    pub level: usize,
    pub spheres: usize,
    pub unfilled: usize,
    pub multiply_filled: usize,
}

fn sphere_census(x: &SSet, m: usize) -> Result<SphereCount> {
    let mut fillers: HashMap<Vec<usize>, usize> = HashMap::new();
    for c in 0..x.count(m) {
        *fillers.entry(x.faces_of(m, c).to_vec()).or_default() += 1;
    }
    let below = x.count(m - 1);
    if m == 1 {
        let mut s = SphereCount {
            level: 1,
            spheres: below * below,
            unfilled: 0,
            multiply_filled: 0,
        };
        for a in 0..below {
            for b in 0..below {
                match fillers.get(&vec![a, b]).copied().unwrap_or(0) {
                    0 => s.unfilled += 1,
                    1 => {}
                    _ => s.multiply_filled += 1,
                }
            }
        }
        return Ok(s);
    }
    // prefix[j]: cells of level m-1 keyed by their first j faces
    let prefix: Vec<HashMap<Vec<usize>, Vec<usize>>> = (0..=m)
        .map(|j| {
            let mut h: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
            for c in 0..below {
                h.entry(x.faces_of(m - 1, c)[..j].to_vec())
                    .or_default()
                    .push(c);
            }
            h
        })
        .collect();
    let cap = caps().max_enumeration;
    let starts: Vec<usize> = (0..below).collect();
    let parts: Vec<Result<(usize, usize, usize)>> = par::map(&starts, |&y0| {
        let mut tuple = vec![y0];
        let mut acc = (0usize, 0usize, 0usize);
        fn go(
            x: &SSet,
            m: usize,
            prefix: &[HashMap<Vec<usize>, Vec<usize>>],
            fillers: &HashMap<Vec<usize>, usize>,
            tuple: &mut Vec<usize>,
            acc: &mut (usize, usize, usize),
            cap: usize,
        ) -> Result<()> {
            let j = tuple.len();
            if j == m + 1 {
                acc.0 += 1;
                check("spheres", acc.0, cap)?;
                match fillers.get(tuple.as_slice()).copied().unwrap_or(0) {
                    0 => acc.1 += 1,
                    1 => {}
                    _ => acc.2 += 1,
                }
                return Ok(());
            }
            let key: Vec<usize> = (0..j).map(|i| x.face(m - 1, j - 1, tuple[i])).collect();
            if let Some(cands) = prefix[j].get(&key) {
                for &c in cands {
                    tuple.push(c);
                    go(x, m, prefix, fillers, tuple, acc, cap)?;
                    tuple.pop();
                }
            }
            Ok(())
        }
        go(x, m, &prefix, &fillers, &mut tuple, &mut acc, cap)?;
        Ok(acc)
    });
    let mut s = SphereCount {
        level: m,
        spheres: 0,
        unfilled: 0,
        multiply_filled: 0,
    };
    for p in parts {
        let (a, b, c) = p?;
        s.spheres += a;
        s.unfilled += b;
        s.multiply_filled += c;
    }
    Ok(s)
}

/// Sphere census at every level above `k` up to the bound.
pub fn coskeletal_report(x: &SSet, k: usize) -> Result<Vec<SphereCount>> {
    (k + 1..=x.dim()).map(|m| sphere_census(x, m)).collect()
}

/// Every sphere `∂Δᵐ → X` with `k < m ≤ dim` has exactly one filler.
pub fn is_k_coskeletal(x: &SSet, k: usize) -> Result<bool> {
    Ok(coskeletal_report(x, k)?
        .iter()
        .all(|s| s.unfilled == 0 && s.multiply_filled == 0))
}

/// `esd(X)` with the largest dimension bound the input supports.
pub fn edgewise_subdivision(x: &SSet) -> Result<Keyed<usize>> {
    if x.dim() == 0 {
        return Err(Error::DimensionBoundExceeded {
            needed: 1,
            bound: 0,
        });
    }
    edgewise_subdivision_to(x, (x.dim() - 1) / 2)
}

/// `esd(X)_k = X_{2k+1}`, with `α` acting through `α ⋆ α^op`.
pub fn edgewise_subdivision_to(x: &SSet, dim: usize) -> Result<Keyed<usize>> {
    if 2 * dim + 1 > x.dim() {
        return Err(Error::DimensionBoundExceeded {
            needed: 2 * dim + 1,
            bound: x.dim(),
        });
    }
    let levels = (0..=dim)
        .map(|k| (0..x.count(2 * k + 1)).collect())
        .collect();
    build(
        dim,
        levels,
        |k, &c, al| {
            let m = al.len() - 1;
            let eps: Vec<usize> = (0..=2 * m + 1)
                .map(|j| {
                    if j <= m {
                        al[j]
                    } else {
                        2 * k + 1 - al[2 * m + 1 - j]
                    }
                })
                .collect();
            x.act(2 * k + 1, c, &eps)
        },
        |k, &c| x.name(2 * k + 1, c).to_string(),
    )
}

/// A chain `x₀ → x₁ → … → x_k`: start object and consecutive morphisms.
pub type Chain = (Ob, Vec<Mor>);

fn chain_objects(c: &FinCat, ch: &Chain) -> Vec<Ob> {
    std::iter::once(ch.0)
        .chain(ch.1.iter().map(|&f| c.tgt(f)))
        .collect()
}

fn path_composite(c: &FinCat, from: Ob, path: &[Mor]) -> Mor {
    path.iter().fold(c.id(from), |acc, &g| c.compose(g, acc))
}

/// `N(C)` up to `dim`.
pub fn nerve(c: &FinCat, dim: usize) -> Result<Keyed<Chain>> {
    let cap = caps().max_enumeration;
    let mut levels: Vec<Vec<Chain>> = vec![c.objects().map(|x| (x, Vec::new())).collect()];
    for k in 1..=dim {
        let mut next = Vec::new();
        for (x0, fs) in &levels[k - 1] {
            let end = fs.last().map(|&f| c.tgt(f)).unwrap_or(*x0);
            for &g in c.out_of(end) {
                let mut f2 = fs.clone();
                f2.push(g);
                next.push((*x0, f2));
            }
        }
        check("nerve level", next.len(), cap)?;
        levels.push(next);
    }
    build(
        dim,
        levels,
        |_, ch, al| {
            let obs = chain_objects(c, ch);
            let fs = (0..al.len().saturating_sub(1))
                .map(|t| path_composite(c, obs[al[t]], &ch.1[al[t]..al[t + 1]]))
                .collect();
            (obs[al[0]], fs)
        },
        |_, ch| {
            if ch.1.is_empty() {
                c.object_name(ch.0).to_string()
            } else {
                ch.1.iter()
                    .map(|&f| c.morphism_name(f))
                    .collect::<Vec<_>>()
                    .join("|")
            }
        },
    )
}

/// `N(F) : N(C) → N(D)`.
pub fn nerve_map(f: &Functor, nc: &Keyed<Chain>, nd: &Keyed<Chain>) -> Result<SSetMap> {
    SSetMap::from_keys(nc, nd, |_, (x, fs)| {
        (f.obj[*x], fs.iter().map(|&m| f.mor[m]).collect())
    })
}

/// The free category on the nondegenerate edges modulo `d₁σ = d₀σ ∘ d₂σ`
/// for every 2-cell `σ`.  Requires an acyclic 1-skeleton.
pub fn realize(x: &SSet) -> Result<FinCat> {
    let nv = x.count(0);
    let edges: Vec<usize> = if x.dim() >= 1 {
        x.nondegenerate(1)
    } else {
        Vec::new()
    };
    let ends = |e: usize| (x.face(1, 1, e), x.face(1, 0, e));
    let mut indeg = vec![0usize; nv];
    let mut outs: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for &e in &edges {
        let (s, t) = ends(e);
        outs[s].push(e);
        indeg[t] += 1;
    }
    let mut order = Vec::with_capacity(nv);
    let mut ready: Vec<usize> = (0..nv).filter(|&v| indeg[v] == 0).collect();
    while let Some(v) = ready.pop() {
        order.push(v);
        for &e in &outs[v] {
            let t = ends(e).1;
            indeg[t] -= 1;
            if indeg[t] == 0 {
                ready.push(t);
            }
        }
    }
    if order.len() < nv {
        let v = (0..nv).find(|&v| indeg[v] > 0).expect("vertex on a cycle");
        return Err(Error::CyclicOneSkeleton(x.name(0, v).to_string()));
    }
    // all paths, keyed by start vertex and edge sequence
    let cap = caps().max_enumeration;
    let mut paths: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>)> = (0..nv).map(|v| (v, Vec::new())).collect();
    while let Some((s, p)) = stack.pop() {
        let end = p.last().map(|&e| ends(e).1).unwrap_or(s);
        for &e in &outs[end] {
            let mut q = p.clone();
            q.push(e);
            stack.push((s, q));
        }
        paths.push((s, p));
        check("paths", paths.len(), cap)?;
    }
    paths.sort_by(|a, b| (a.0, a.1.len(), &a.1).cmp(&(b.0, b.1.len(), &b.1)));
    let pid: HashMap<(usize, Vec<usize>), usize> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let end_of = |p: &(usize, Vec<usize>)| p.1.last().map(|&e| ends(e).1).unwrap_or(p.0);
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); nv];
    let mut from: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, p) in paths.iter().enumerate() {
        into[end_of(p)].push(i);
        from[p.0].push(i);
    }
    let as_path = |e: usize| {
        if x.is_degenerate(1, e) {
            Vec::new()
        } else {
            vec![e]
        }
    };
    let mut uf = UnionFind::new(paths.len());
    if x.dim() >= 2 {
        for s in 0..x.count(2) {
            let (e01, e12, e02) = (x.face(2, 2, s), x.face(2, 0, s), x.face(2, 1, s));
            let u = as_path(e02);
            let mut v = as_path(e01);
            v.extend(as_path(e12));
            let (a, b) = (x.face(1, 1, e01), x.face(1, 0, e12));
            for &pre in &into[a] {
                for &post in &from[b] {
                    let glue = |mid: &[usize]| {
                        let mut q = paths[pre].1.clone();
                        q.extend_from_slice(mid);
                        q.extend_from_slice(&paths[post].1);
                        pid[&(paths[pre].0, q)]
                    };
                    uf.union(glue(&u), glue(&v));
                }
            }
        }
    }
    let mut label = vec![usize::MAX; paths.len()];
    let mut reps = Vec::new();
    for i in 0..paths.len() {
        let r = uf.find(i);
        if label[r] == usize::MAX {
            label[r] = reps.len();
            reps.push(i);
        }
    }
    let class = |i: usize, uf: &mut UnionFind| label[uf.find(i)];
    let mut cls = Vec::with_capacity(paths.len());
    for i in 0..paths.len() {
        cls.push(class(i, &mut uf));
    }
    let mors: Vec<(String, Ob, Ob)> = reps
        .iter()
        .map(|&i| {
            let p = &paths[i];
            let name = if p.1.is_empty() {
                format!("id_{}", x.name(0, p.0))
            } else {
                p.1.iter()
                    .rev()
                    .map(|&e| x.name(1, e))
                    .collect::<Vec<_>>()
                    .join("∘")
            };
            (name, p.0, end_of(p))
        })
        .collect();
    let ident = (0..nv).map(|v| cls[pid[&(v, Vec::new())]]).collect();
    FinCat::from_tables(x.names(0).to_vec(), mors, ident, |g, f| {
        let (pf, pg) = (&paths[reps[f]], &paths[reps[g]]);
        let mut q = pf.1.clone();
        q.extend_from_slice(&pg.1);
        pid.get(&(pf.0, q)).map(|&i| cls[i])
    })
}

/// `esd(N C)` against the nerve of the opposite of `TwCat(C)`: the vertex
/// `i` of a `(2k+1)`-chain goes to its composite from position `i` to
/// position `2k+1-i`, and consecutive vertices are joined by the pair of
/// outer arrows.
pub fn esd_nerve_vs_twisted(c: &FinCat, dim: usize) -> Result<Verdict> {
    let nc = nerve(c, 2 * dim + 1)?;
    let esd = edgewise_subdivision_to(&nc.sset, dim)?;
    let tw = twisted_arrow(c)?;
    let op = tw.outer_to_inner();
    let ntw = nerve(&op, dim)?;
    let map = SSetMap::from_keys_plain(&esd.sset, &ntw, |k, cell| {
        let (x0, fs) = nc.key(2 * k + 1, cell);
        let obs = chain_objects(c, &(*x0, fs.clone()));
        let arrow = |i: usize| path_composite(c, obs[i], &fs[i..2 * k + 1 - i]);
        let steps = (0..k)
            .map(|i| {
                tw.morphism_of(arrow(i + 1), fs[i], fs[2 * k - i])
                    .expect("factorization is a twisted morphism")
            })
            .collect();
        (arrow(0), steps)
    })?;
    Ok(Verdict::check(
        map.is_bijective(&ntw.sset),
        format!("esd(N C) ≅ N(Tw(C)^op) through level {dim}"),
        || json!({ "esd_counts": esd.sset.counts(), "nerve_counts": ntw.sset.counts() }),
    ))
}

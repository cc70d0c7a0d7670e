//! Finite simplicial sets stored as full face and degeneracy tables up to a
//! dimension bound, with markings and simplicial maps.
//!
//! Cells at level `k` are dense indices `0..count(k)`.  Every construction
//! goes through [`build`], which takes structured keys and an action of
//! monotone maps on them, tabulates faces and degeneracies, and checks the
//! simplicial identities.

mod build;
mod mapping;

#[cfg(test)]
mod tests;

pub use build::{
    boundary, coskeletal_report, coskeleton, edgewise_subdivision, edgewise_subdivision_to,
    esd_nerve_vs_twisted, finite_colimit, horn, is_k_coskeletal, marked_colimit, nerve, nerve_map,
    product, product_marked, pushout, realize, simplex, skeleton, spine, sub_sset, Chain, Colimit,
    SphereCount,
};
pub use mapping::{
    fiber_compare, mapping_simplex, mapping_simplex_decompositions, nu, relative_nerve,
    MappingSimplex, RelativeNerve, SimplexDiagram,
};

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::caps::{caps, check};
use crate::error::{Error, Result};
use crate::par;

pub const DEFAULT_DIM: usize = 6;

/// A simplicial set truncated at `dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSet {
    dim: usize,
    names: Vec<Vec<String>>,
    /// `faces[k][x][i] = d_i x` for `k ≥ 1`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degens[k][x][j] = s_j x` for `k < dim`.
    degens: Vec<Vec<Vec<usize>>>,
}

/// Eilenberg–Zilber form `x = s_{word[0]} s_{word[1]} … core` with
/// `word` strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub core_level: usize,
    pub core: usize,
    pub word: Vec<usize>,
}

/// `δ_i : [k-1] → [k]`, skipping `i`.
pub fn coface(k: usize, i: usize) -> Vec<usize> {
    (0..k).map(|t| if t < i { t } else { t + 1 }).collect()
}

/// `σ_j : [k+1] → [k]`, hitting `j` twice.
pub fn codegeneracy(k: usize, j: usize) -> Vec<usize> {
    (0..=k + 1)
        .map(|t| if t <= j { t } else { t - 1 })
        .collect()
}

/// All monotone maps `[k] → [n]` in lexicographic order.
pub fn monotone_maps(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k + 1);
    fn go(k: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=n {
            cur.push(v);
            go(k, n, v, cur, out);
            cur.pop();
        }
    }
    go(k, n, 0, &mut cur, &mut out);
    out
}

impl SSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self, k: usize) -> usize {
        self.names[k].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        (0..=self.dim).map(|k| self.count(k)).collect()
    }

    pub fn name(&self, k: usize, x: usize) -> &str {
        &self.names[k][x]
    }

    pub fn names(&self, k: usize) -> &[String] {
        &self.names[k]
    }

    pub fn face(&self, k: usize, i: usize, x: usize) -> usize {
        self.faces[k][x][i]
    }

    pub fn faces_of(&self, k: usize, x: usize) -> &[usize] {
        &self.faces[k][x]
    }

    pub fn degen(&self, k: usize, j: usize, x: usize) -> usize {
        self.degens[k][x][j]
    }

    pub fn is_degenerate(&self, k: usize, x: usize) -> bool {
        k > 0 && (0..k).any(|j| self.degen(k - 1, j, self.face(k, j, x)) == x)
    }

    pub fn nondegenerate(&self, k: usize) -> Vec<usize> {
        (0..self.count(k))
            .filter(|&x| !self.is_degenerate(k, x))
            .collect()
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.dim)
            .map(|k| self.nondegenerate(k).len())
            .collect()
    }

    pub fn normal_form(&self, k: usize, x: usize) -> NormalForm {
        let (mut level, mut cur, mut word) = (k, x, Vec::new());
        while let Some(j) = (0..level)
            .rev()
            .find(|&j| self.degen(level - 1, j, self.face(level, j, cur)) == cur)
        {
            word.push(j);
            cur = self.face(level, j, cur);
            level -= 1;
        }
        NormalForm {
            core_level: level,
            core: cur,
            word,
        }
    }

    /// The cell `X(α)(x)` for a monotone `α : [m] → [k]`.
    pub fn act(&self, k: usize, x: usize, alpha: &[usize]) -> usize {
        let mut image: Vec<usize> = alpha.to_vec();
        image.dedup();
        let (mut level, mut cur) = (k, x);
        for i in (0..=k).rev() {
            if image.binary_search(&i).is_err() {
                cur = self.face(level, i, cur);
                level -= 1;
            }
        }
        let mut eta: Vec<usize> = alpha
            .iter()
            .map(|v| image.binary_search(v).expect("in image"))
            .collect();
        let mut word = Vec::new();
        while let Some(j) = (0..eta.len().saturating_sub(1)).find(|&j| eta[j] == eta[j + 1]) {
            word.push(j);
            eta.remove(j + 1);
        }
        for &j in word.iter().rev() {
            cur = self.degen(level, j, cur);
            level += 1;
        }
        cur
    }

    /// The first simplicial identity or normal-form property that fails.
    pub fn defect(&self) -> Option<String> {
        let n = self.dim;
        for k in 1..=n {
            for x in 0..self.count(k) {
                if self.faces[k][x].len() != k + 1 {
                    return Some(format!(
                        "cell {} at level {k} has the wrong number of faces",
                        self.names[k][x]
                    ));
                }
                for i in 0..=k {
                    for j in i + 1..=k {
                        if k >= 2
                            && self.face(k - 1, i, self.face(k, j, x))
                                != self.face(k - 1, j - 1, self.face(k, i, x))
                        {
                            return Some(format!(
                                "d{i} d{j} = d{} d{i} fails on {} at level {k}",
                                j - 1,
                                self.names[k][x]
                            ));
                        }
                    }
                }
            }
        }
        for k in 0..n {
            for x in 0..self.count(k) {
                if self.degens[k][x].len() != k + 1 {
                    return Some(format!(
                        "cell {} at level {k} has the wrong number of degeneracies",
                        self.names[k][x]
                    ));
                }
                for j in 0..=k {
                    let y = self.degen(k, j, x);
                    for i in 0..=k + 1 {
                        let lhs = self.face(k + 1, i, y);
                        let rhs = if i < j {
                            self.degen(k - 1, j - 1, self.face(k, i, x))
                        } else if i == j || i == j + 1 {
                            x
                        } else {
                            self.degen(k - 1, j, self.face(k, i - 1, x))
                        };
                        if lhs != rhs {
                            return Some(format!(
                                "d{i} s{j} identity fails on {} at level {k}",
                                self.names[k][x]
                            ));
                        }
                    }
                    if k + 1 < n {
                        for i in 0..=j {
                            let a = self.degen(k + 1, i, self.degen(k, j, x));
                            let b = self.degen(k + 1, j + 1, self.degen(k, i, x));
                            if a != b {
                                return Some(format!(
                                    "s{i} s{j} identity fails on {} at level {k}",
                                    self.names[k][x]
                                ));
                            }
                        }
                    }
                }
            }
        }
        for k in 0..=n {
            for x in 0..self.count(k) {
                let nf = self.normal_form(k, x);
                let mut cur = nf.core;
                for (level, &j) in (nf.core_level..).zip(nf.word.iter().rev()) {
                    cur = self.degen(level, j, cur);
                }
                if cur != x || nf.word.windows(2).any(|w| w[0] <= w[1]) {
                    return Some(format!(
                        "normal form of {} at level {k} does not rebuild it",
                        self.names[k][x]
                    ));
                }
            }
        }
        None
    }

    pub fn to_raw(&self) -> RawSSet {
        RawSSet {
            dim: self.dim,
            cells: (0..=self.dim).map(|k| (k, self.names[k].clone())).collect(),
            d: (1..=self.dim).map(|k| (k, self.faces[k].clone())).collect(),
            s: (0..self.dim).map(|k| (k, self.degens[k].clone())).collect(),
            marked: Vec::new(),
        }
    }

    pub fn from_raw(raw: &RawSSet) -> Result<SSet> {
        let n = raw.dim;
        let level = |k: usize| raw.cells.get(&k).cloned().unwrap_or_default();
        let names: Vec<Vec<String>> = (0..=n).map(level).collect();
        let mut faces = vec![Vec::new(); n + 1];
        let mut degens = vec![Vec::new(); n + 1];
        faces[0] = vec![Vec::new(); names[0].len()];
        for k in 1..=n {
            faces[k] = raw.d.get(&k).cloned().unwrap_or_default();
        }
        for k in 0..n {
            degens[k] = raw.s.get(&k).cloned().unwrap_or_default();
        }
        degens[n] = vec![Vec::new(); names[n].len()];
        for k in 0..=n {
            if faces[k].len() != names[k].len() || degens[k].len() != names[k].len() {
                return Err(Error::Parse(format!(
                    "level {k} tables do not match its cell list"
                )));
            }
            let face_ok = k == 0 || faces[k].iter().flatten().all(|&y| y < names[k - 1].len());
            let degen_ok = k == n || degens[k].iter().flatten().all(|&y| y < names[k + 1].len());
            if !face_ok || !degen_ok {
                return Err(Error::Parse(format!(
                    "level {k} tables point outside the adjacent level"
                )));
            }
        }
        let s = SSet {
            dim: n,
            names,
            faces,
            degens,
        };
        match s.defect() {
            Some(d) => Err(Error::SimplicialViolation(d)),
            None => Ok(s),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<SSet> {
        SSet::from_raw(&serde_json::from_str(s)?)
    }
}

/// Wire form: per-level cell ids, face lists `[d_0 x, …, d_k x]` and
/// degeneracy lists `[s_0 x, …, s_k x]` by position, marked edge ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSSet {
    pub dim: usize,
    pub cells: BTreeMap<usize, Vec<String>>,
    pub d: BTreeMap<usize, Vec<Vec<usize>>>,
    pub s: BTreeMap<usize, Vec<Vec<usize>>>,
    #[serde(default)]
    pub marked: Vec<String>,
}

/// A simplicial set together with the structured keys of its cells.
#[derive(Clone, Debug)]
pub struct Keyed<K> {
    pub sset: SSet,
    pub keys: Vec<Vec<K>>,
    index: Vec<HashMap<K, usize>>,
}

impl<K: Eq + Hash + Clone> Keyed<K> {
    pub fn cell(&self, k: usize, key: &K) -> Option<usize> {
        self.index[k].get(key).copied()
    }

    pub fn key(&self, k: usize, x: usize) -> &K {
        &self.keys[k][x]
    }
}

/// Tabulate a simplicial set from the keys of its cells at each level and
/// the action `act(k, key, α)` of monotone `α : [m] → [k]`.
pub fn build<K, A, N>(dim: usize, levels: Vec<Vec<K>>, act: A, name: N) -> Result<Keyed<K>>
where
    K: Eq + Hash + Clone + Send + Sync,
    A: Fn(usize, &K, &[usize]) -> K + Sync + Send,
    N: Fn(usize, &K) -> String + Sync + Send,
{
    if levels.len() != dim + 1 {
        return Err(Error::SimplicialViolation(format!(
            "{} levels supplied for dimension bound {dim}",
            levels.len()
        )));
    }
    let cap = caps().max_enumeration;
    for lv in &levels {
        check("simplicial level", lv.len(), cap)?;
    }
    let index: Vec<HashMap<K, usize>> = levels
        .iter()
        .map(|lv| {
            lv.iter()
                .enumerate()
                .map(|(i, key)| (key.clone(), i))
                .collect()
        })
        .collect();
    let lookup = |k: usize, key: &K| -> Result<usize> {
        index[k].get(key).copied().ok_or_else(|| {
            Error::SimplicialViolation(format!("level {k} is not closed: {} missing", name(k, key)))
        })
    };
    let mut faces = Vec::with_capacity(dim + 1);
    let mut degens = Vec::with_capacity(dim + 1);
    for (k, lv) in levels.iter().enumerate() {
        let f: Vec<Result<Vec<usize>>> = if k == 0 {
            vec![Ok(Vec::new()); lv.len()]
        } else {
            let cofaces: Vec<Vec<usize>> = (0..=k).map(|i| coface(k, i)).collect();
            par::map(lv, |key| {
                cofaces
                    .iter()
                    .map(|a| lookup(k - 1, &act(k, key, a)))
                    .collect()
            })
        };
        faces.push(f.into_iter().collect::<Result<Vec<_>>>()?);
        let s: Vec<Result<Vec<usize>>> = if k == dim {
            vec![Ok(Vec::new()); lv.len()]
        } else {
            let codegs: Vec<Vec<usize>> = (0..=k).map(|j| codegeneracy(k, j)).collect();
            par::map(lv, |key| {
                codegs
                    .iter()
                    .map(|a| lookup(k + 1, &act(k, key, a)))
                    .collect()
            })
        };
        degens.push(s.into_iter().collect::<Result<Vec<_>>>()?);
    }
    let names = levels
        .iter()
        .enumerate()
        .map(|(k, lv)| lv.iter().map(|key| name(k, key)).collect())
        .collect();
    let sset = SSet {
        dim,
        names,
        faces,
        degens,
    };
    if let Some(d) = sset.defect() {
        return Err(Error::SimplicialViolation(d));
    }
    Ok(Keyed {
        sset,
        keys: levels,
        index,
    })
}

/// A levelwise cell map commuting with faces and degeneracies.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SSetMap {
    pub levels: Vec<Vec<usize>>,
}

impl SSetMap {
    pub fn new(from: &SSet, to: &SSet, levels: Vec<Vec<usize>>) -> Result<SSetMap> {
        let m = SSetMap { levels };
        match m.defect(from, to) {
            Some(d) => Err(Error::SimplicialViolation(d)),
            None => Ok(m),
        }
    }

    /// Build a map from the keys of the source cells.
    pub fn from_keys<K1, K2>(
        from: &Keyed<K1>,
        to: &Keyed<K2>,
        f: impl Fn(usize, &K1) -> K2,
    ) -> Result<SSetMap>
    where
        K1: Eq + Hash + Clone,
        K2: Eq + Hash + Clone,
    {
        let mut levels = Vec::with_capacity(from.keys.len());
        for (k, lv) in from.keys.iter().enumerate() {
            let mut out = Vec::with_capacity(lv.len());
            for (x, key) in lv.iter().enumerate() {
                let y = to.cell(k, &f(k, key)).ok_or_else(|| {
                    Error::SimplicialViolation(format!(
                        "image of {} at level {k} is not a cell of the target",
                        from.sset.name(k, x)
                    ))
                })?;
                out.push(y);
            }
            levels.push(out);
        }
        SSetMap::new(&from.sset, &to.sset, levels)
    }

    pub fn identity(x: &SSet) -> SSetMap {
        SSetMap {
            levels: (0..=x.dim).map(|k| (0..x.count(k)).collect()).collect(),
        }
    }

    pub fn apply(&self, k: usize, x: usize) -> usize {
        self.levels[k][x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SSetMap) -> SSetMap {
        SSetMap {
            levels: first
                .levels
                .iter()
                .zip(&self.levels)
                .map(|(a, b)| a.iter().map(|&x| b[x]).collect())
                .collect(),
        }
    }

    pub fn defect(&self, from: &SSet, to: &SSet) -> Option<String> {
        if from.dim != to.dim || self.levels.len() != from.dim + 1 {
            return Some(format!(
                "dimension bounds differ ({} and {})",
                from.dim, to.dim
            ));
        }
        for k in 0..=from.dim {
            if self.levels[k].len() != from.count(k)
                || self.levels[k].iter().any(|&y| y >= to.count(k))
            {
                return Some(format!("level {k} map has the wrong shape"));
            }
        }
        for k in 0..=from.dim {
            for x in 0..from.count(k) {
                let y = self.levels[k][x];
                if k > 0
                    && (0..=k).any(|i| self.levels[k - 1][from.face(k, i, x)] != to.face(k, i, y))
                {
                    return Some(format!("faces of {} not preserved", from.name(k, x)));
                }
                if k < from.dim
                    && (0..=k).any(|j| self.levels[k + 1][from.degen(k, j, x)] != to.degen(k, j, y))
                {
                    return Some(format!("degeneracies of {} not preserved", from.name(k, x)));
                }
            }
        }
        None
    }

    pub fn is_injective(&self) -> bool {
        self.levels.iter().all(|lv| {
            let mut seen = std::collections::HashSet::new();
            lv.iter().all(|y| seen.insert(*y))
        })
    }

    pub fn is_bijective(&self, to: &SSet) -> bool {
        self.is_injective()
            && self
                .levels
                .iter()
                .enumerate()
                .all(|(k, lv)| lv.len() == to.count(k))
    }

    /// The inverse of a bijective map.
    pub fn inverse(&self) -> Option<SSetMap> {
        let mut levels = Vec::with_capacity(self.levels.len());
        for lv in &self.levels {
            let mut inv = vec![usize::MAX; lv.len()];
            for (x, &y) in lv.iter().enumerate() {
                if y >= inv.len() || inv[y] != usize::MAX {
                    return None;
                }
                inv[y] = x;
            }
            levels.push(inv);
        }
        Some(SSetMap { levels })
    }
}

/// A simplicial set with a set of marked edges containing the degenerate ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSSet {
    pub sset: SSet,
    marked: Vec<bool>,
}

impl MarkedSSet {
    /// Marks `edges` and every degenerate edge.
    pub fn new(sset: SSet, edges: impl IntoIterator<Item = usize>) -> Result<MarkedSSet> {
        let n = if sset.dim >= 1 { sset.count(1) } else { 0 };
        let mut marked: Vec<bool> = (0..n).map(|e| sset.is_degenerate(1, e)).collect();
        for e in edges {
            if e >= n {
                return Err(Error::SimplicialViolation(format!(
                    "marked edge {e} out of range"
                )));
            }
            marked[e] = true;
        }
        Ok(MarkedSSet { sset, marked })
    }

    /// Only degenerate edges marked.
    pub fn flat(sset: SSet) -> MarkedSSet {
        MarkedSSet::new(sset, []).expect("no extra edges")
    }

    /// Every edge marked.
    pub fn sharp(sset: SSet) -> MarkedSSet {
        let n = if sset.dim >= 1 { sset.count(1) } else { 0 };
        MarkedSSet::new(sset, 0..n).expect("edges in range")
    }

    pub fn is_marked(&self, e: usize) -> bool {
        self.marked[e]
    }

    pub fn marked_edges(&self) -> Vec<usize> {
        (0..self.marked.len()).filter(|&e| self.marked[e]).collect()
    }

    pub fn preserved_by(&self, map: &SSetMap, to: &MarkedSSet) -> bool {
        self.marked.is_empty()
            || (0..self.marked.len()).all(|e| !self.marked[e] || to.marked[map.apply(1, e)])
    }

    /// Bijective on cells with marked edges corresponding exactly.
    pub fn is_marked_iso(&self, map: &SSetMap, to: &MarkedSSet) -> bool {
        map.is_bijective(&to.sset)
            && (0..self.marked.len()).all(|e| self.marked[e] == to.marked[map.apply(1, e)])
    }

    pub fn to_json(&self) -> String {
        let mut raw = self.sset.to_raw();
        raw.marked = self
            .marked_edges()
            .iter()
            .map(|&e| self.sset.name(1, e).to_string())
            .collect();
        serde_json::to_string(&raw).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<MarkedSSet> {
        let raw: RawSSet = serde_json::from_str(s)?;
        let sset = SSet::from_raw(&raw)?;
        let mut edges = Vec::new();
        for id in &raw.marked {
            let e = (sset.dim >= 1)
                .then(|| sset.names(1).iter().position(|n| n == id))
                .flatten()
                .ok_or_else(|| Error::Parse(format!("marked edge {id} is not an edge")))?;
            edges.push(e);
        }
        MarkedSSet::new(sset, edges)
    }
}

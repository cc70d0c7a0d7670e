use std::collections::HashMap;

use super::{compose_functors, identity_functor, FinCat, Functor, Mor, Ob};
use crate::caps::caps;
use crate::error::{Error, Result};

/// A strict functor from `index` to finite categories.
#[derive(Clone, Debug)]
pub struct CatValuedDiagram {
    pub index: FinCat,
    pub values: Vec<FinCat>,
    pub action: Vec<Functor>,
}

impl CatValuedDiagram {
    pub fn new(index: FinCat, values: Vec<FinCat>, action: Vec<Functor>) -> Result<Self> {
        let d = CatValuedDiagram {
            index,
            values,
            action,
        };
        d.validate()?;
        Ok(d)
    }

    /// Build from the values and the action on the non-identity morphisms only.
    pub fn from_generators(
        index: FinCat,
        values: Vec<FinCat>,
        mut action: impl FnMut(Mor) -> Functor,
    ) -> Result<Self> {
        let act = index
            .morphisms()
            .map(|m| {
                if index.is_identity(m) {
                    identity_functor(&values[index.src(m)])
                } else {
                    action(m)
                }
            })
            .collect();
        CatValuedDiagram::new(index, values, act)
    }

    pub fn constant(index: FinCat, value: FinCat) -> Self {
        let n = index.num_objects();
        let id = identity_functor(&value);
        let action = vec![id; index.num_morphisms()];
        CatValuedDiagram {
            index,
            values: vec![value; n],
            action,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ix = &self.index;
        if self.values.len() != ix.num_objects() || self.action.len() != ix.num_morphisms() {
            return Err(Error::InvalidDiagram(
                "table sizes do not match the index".into(),
            ));
        }
        for m in ix.morphisms() {
            let (s, t) = (ix.src(m), ix.tgt(m));
            if let Some(why) = self.action[m].defect(&self.values[s], &self.values[t]) {
                return Err(Error::InvalidDiagram(format!(
                    "action of {}: {why}",
                    ix.morphism_name(m)
                )));
            }
        }
        for x in ix.objects() {
            if self.action[ix.id(x)] != identity_functor(&self.values[x]) {
                return Err(Error::InvalidDiagram(format!(
                    "identity of {} acts nontrivially",
                    ix.object_name(x)
                )));
            }
        }
        for f in ix.morphisms() {
            for &g in ix.out_of(ix.tgt(f)) {
                let gf = ix.compose(g, f);
                if self.action[gf] != compose_functors(&self.action[g], &self.action[f]) {
                    return Err(Error::InvalidDiagram(format!(
                        "action not functorial on ({}, {})",
                        ix.morphism_name(g),
                        ix.morphism_name(f)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Restrict along a functor `g: J → index`.
    pub fn restrict(&self, j: &FinCat, g: &Functor) -> CatValuedDiagram {
        CatValuedDiagram {
            index: j.clone(),
            values: g.obj.iter().map(|&x| self.values[x].clone()).collect(),
            action: g.mor.iter().map(|&m| self.action[m].clone()).collect(),
        }
    }
}

/// Families `(a_i)` with `a_i ∈ allowed[i]` and `map(a_i) = a_j` for every
/// constraint `(i, j, map)`, ordered lexicographically by position in
/// `allowed`, taking variables in order of how many constraints land on them.
pub fn compatible_families(
    allowed: &[Vec<usize>],
    constraints: &[(usize, usize, &[usize])],
) -> Result<Vec<Vec<usize>>> {
    let n = allowed.len();
    let membership: Vec<Vec<bool>> = allowed
        .iter()
        .map(|a| {
            let size = a.iter().copied().max().map_or(0, |m| m + 1);
            let mut v = vec![false; size];
            for &x in a {
                v[x] = true;
            }
            v
        })
        .collect();
    let plan = plan_search(n, allowed, constraints);
    let cap = caps().max_enumeration;
    let mut search = FamilySearch {
        allowed,
        membership: &membership,
        plan: &plan,
        cur: vec![usize::MAX; n],
        out: Vec::new(),
        cap,
    };
    search.go(0)?;
    let mut out = search.out;

    let mut indeg = vec![0usize; n];
    for &(i, j, _) in constraints {
        if i != j {
            indeg[j] += 1;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (indeg[i], i));
    let rank: Vec<HashMap<usize, usize>> = allowed
        .iter()
        .map(|a| a.iter().enumerate().map(|(r, &x)| (x, r)).collect())
        .collect();
    out.sort_by_cached_key(|fam| order.iter().map(|&i| rank[i][&fam[i]]).collect::<Vec<_>>());
    Ok(out)
}

enum Source<'a> {
    Free,
    Forced(usize, &'a [usize]),
    /// candidates are the preimage of an assigned variable's value
    Preimage(usize, Vec<Vec<usize>>),
}

struct Step<'a> {
    var: usize,
    source: Source<'a>,
    checks: Vec<(usize, usize, &'a [usize])>,
}

/// Greedy variable order: forced variables first, then variables mapping
/// into assigned ones, then the free variable with the fewest candidates.
fn plan_search<'a>(
    n: usize,
    allowed: &[Vec<usize>],
    constraints: &[(usize, usize, &'a [usize])],
) -> Vec<Step<'a>> {
    let mut placed = vec![false; n];
    let mut steps: Vec<Step<'a>> = Vec::with_capacity(n);
    let live: Vec<&(usize, usize, &[usize])> = constraints.iter().filter(|c| c.0 != c.1).collect();
    while steps.len() < n {
        let forced = live.iter().find(|c| placed[c.0] && !placed[c.1]);
        let step = if let Some(&&(i, j, map)) = forced {
            Step {
                var: j,
                source: Source::Forced(i, map),
                checks: Vec::new(),
            }
        } else if let Some(&&(i, j, map)) = live.iter().find(|c| placed[c.1] && !placed[c.0]) {
            let size = map.iter().copied().max().map_or(0, |m| m + 1);
            let mut pre = vec![Vec::new(); size];
            for &a in &allowed[i] {
                if let Some(&b) = map.get(a) {
                    pre[b].push(a);
                }
            }
            Step {
                var: i,
                source: Source::Preimage(j, pre),
                checks: Vec::new(),
            }
        } else {
            let v = (0..n)
                .filter(|&v| !placed[v])
                .min_by_key(|&v| (allowed[v].len(), v))
                .expect("unplaced variable");
            Step {
                var: v,
                source: Source::Free,
                checks: Vec::new(),
            }
        };
        placed[step.var] = true;
        steps.push(step);
    }
    let mut pos = vec![0usize; n];
    for (p, st) in steps.iter().enumerate() {
        pos[st.var] = p;
    }
    for &(i, j, map) in constraints {
        steps[pos[i].max(pos[j])].checks.push((i, j, map));
    }
    steps
}

struct FamilySearch<'a, 'b> {
    allowed: &'b [Vec<usize>],
    membership: &'b [Vec<bool>],
    plan: &'b [Step<'a>],
    cur: Vec<usize>,
    out: Vec<Vec<usize>>,
    cap: usize,
}

impl FamilySearch<'_, '_> {
    fn go(&mut self, p: usize) -> Result<()> {
        if p == self.plan.len() {
            if self.out.len() >= self.cap {
                return Err(Error::SizeBoundExceeded {
                    what: "compatible families".into(),
                    size: self.cap + 1,
                    cap: self.cap,
                });
            }
            self.out.push(self.cur.clone());
            return Ok(());
        }
        let step = &self.plan[p];
        let i = step.var;
        let forced;
        let cands: &[usize] = match &step.source {
            Source::Free => &self.allowed[i],
            Source::Forced(src, map) => {
                let v = map[self.cur[*src]];
                if !self.membership[i].get(v).copied().unwrap_or(false) {
                    return Ok(());
                }
                forced = [v];
                &forced
            }
            Source::Preimage(tgt, pre) => match pre.get(self.cur[*tgt]) {
                Some(c) => c,
                None => return Ok(()),
            },
        };
        for &a in cands {
            self.cur[i] = a;
            if step
                .checks
                .iter()
                .all(|&(s, t, map)| map[self.cur[s]] == self.cur[t])
            {
                self.go(p + 1)?;
            }
        }
        self.cur[i] = usize::MAX;
        Ok(())
    }
}

/// The limit of a category-valued diagram with its projections.
#[derive(Clone, Debug)]
pub struct Limit {
    pub cat: FinCat,
    pub projections: Vec<Functor>,
    /// Object families, one entry per index object.
    pub object_families: Vec<Vec<Ob>>,
    pub morphism_families: Vec<Vec<Mor>>,
}

pub fn limit_cat(d: &CatValuedDiagram) -> Result<Limit> {
    let ix = &d.index;
    let nonid: Vec<Mor> = ix.morphisms().filter(|&m| !ix.is_identity(m)).collect();
    let obj_allowed: Vec<Vec<usize>> = d.values.iter().map(|v| v.objects().collect()).collect();
    let obj_cons: Vec<(usize, usize, &[usize])> = nonid
        .iter()
        .map(|&m| (ix.src(m), ix.tgt(m), d.action[m].obj.as_slice()))
        .collect();
    let objs = compatible_families(&obj_allowed, &obj_cons)?;
    let mor_allowed: Vec<Vec<usize>> = d.values.iter().map(|v| v.morphisms().collect()).collect();
    let mor_cons: Vec<(usize, usize, &[usize])> = nonid
        .iter()
        .map(|&m| (ix.src(m), ix.tgt(m), d.action[m].mor.as_slice()))
        .collect();
    let mors = compatible_families(&mor_allowed, &mor_cons)?;
    let n = ix.num_objects();
    let name_of = |fam: &Vec<usize>, obj: bool| {
        let parts: Vec<&str> = (0..n)
            .map(|i| {
                if obj {
                    d.values[i].object_name(fam[i])
                } else {
                    d.values[i].morphism_name(fam[i])
                }
            })
            .collect();
        format!("[{}]", parts.join(","))
    };
    let cat = FinCat::from_keys(
        objs.clone(),
        mors.clone(),
        |fam| {
            (
                (0..n).map(|i| d.values[i].src(fam[i])).collect(),
                (0..n).map(|i| d.values[i].tgt(fam[i])).collect(),
            )
        },
        |fam| (0..n).map(|i| d.values[i].id(fam[i])).collect(),
        |g, f| (0..n).map(|i| d.values[i].compose(g[i], f[i])).collect(),
        |fam| name_of(fam, true),
        |fam| name_of(fam, false),
    )?;
    let projections = (0..n)
        .map(|i| {
            Functor::new(
                objs.iter().map(|f| f[i]).collect(),
                mors.iter().map(|f| f[i]).collect(),
            )
        })
        .collect();
    Ok(Limit {
        cat,
        projections,
        object_families: objs,
        morphism_families: mors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{discrete, find_isomorphism, functor_category, poset, preorder, product};

    #[test]
    fn discrete_limit_is_product() {
        let a = poset(1);
        let b = poset(2);
        let d = CatValuedDiagram::new(
            discrete(2),
            vec![a.clone(), b.clone()],
            vec![identity_functor(&a), identity_functor(&b)],
        )
        .unwrap();
        let l = limit_cat(&d).unwrap();
        let p = product(&a, &b).unwrap();
        assert!(find_isomorphism(&l.cat, &p).is_some());
    }

    #[test]
    fn limit_of_evaluation_span() {
        // [0] ← Fun([1],[1]) → [1]: the middle maps by constant functors and
        // by evaluation at 1; the span is indexed by a ← c → b.
        let fc = functor_category(&poset(1), &poset(1)).unwrap();
        let ix = preorder(vec!["a".into(), "b".into(), "c".into()], |i, j| {
            i == j || i == 2
        })
        .unwrap();
        let vals = vec![poset(0), poset(1), fc.cat.clone()];
        let ev1 = Functor::new(
            fc.functors.iter().map(|f| f.obj[1]).collect(),
            fc.transformations.iter().map(|t| t.components[1]).collect(),
        );
        let d = CatValuedDiagram::from_generators(ix.clone(), vals, |m| {
            if ix.tgt(m) == 0 {
                Functor::constant(&fc.cat, &poset(0), 0)
            } else {
                ev1.clone()
            }
        })
        .unwrap();
        let l = limit_cat(&d).unwrap();
        assert!(find_isomorphism(&l.cat, &fc.cat).is_some());
    }

    #[test]
    fn initial_object_limit() {
        let ix = poset(1);
        let vals = vec![poset(1), poset(0)];
        let d = CatValuedDiagram::from_generators(ix, vals, |_| {
            Functor::constant(&poset(1), &poset(0), 0)
        })
        .unwrap();
        let l = limit_cat(&d).unwrap();
        assert!(find_isomorphism(&l.cat, &poset(1)).is_some());
    }

    #[test]
    fn non_functorial_action_rejected() {
        let ix = poset(1);
        let vals = vec![poset(1), poset(1)];
        let bad = Functor::new(vec![1, 0], vec![0, 0, 0]);
        let r = CatValuedDiagram::from_generators(ix, vals, |_| bad.clone());
        assert!(r.is_err());
    }

    #[test]
    fn families_respect_allowed_sets() {
        let map = vec![1usize, 1, 0];
        let fams = compatible_families(&[vec![0, 1, 2], vec![1]], &[(0, 1, &map)]).unwrap();
        assert_eq!(fams, vec![vec![0, 1], vec![1, 1]]);
    }
}

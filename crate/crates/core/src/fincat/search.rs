use std::collections::HashMap;
use std::ops::ControlFlow;

use super::{FinCat, Functor, Mor, Ob};
use crate::caps::caps;
use crate::error::{Error, Result};

type MorFilter<'a> = dyn Fn(Mor, Mor) -> bool + Sync + 'a;

/// Backtracking enumeration of functors `dom → cod`, optionally restricted
/// to prescribed object candidates, a morphism filter, or injective maps.
pub struct FunctorSearch<'a> {
    dom: &'a FinCat,
    cod: &'a FinCat,
    obj_candidates: Option<Vec<Vec<Ob>>>,
    mor_filter: Option<&'a MorFilter<'a>>,
    injective: bool,
    cap: usize,
}

struct Plan {
    /// Non-identity morphisms in assignment order.
    order: Vec<Mor>,
    /// For each position, the composites `(g, f, h)` closed by that position.
    checks: Vec<Vec<(Mor, Mor, Mor)>>,
    /// For each position, an earlier pair whose composite is this morphism.
    forced: Vec<Option<(Mor, Mor)>>,
}

impl<'a> FunctorSearch<'a> {
    pub fn new(dom: &'a FinCat, cod: &'a FinCat) -> Self {
        FunctorSearch {
            dom,
            cod,
            obj_candidates: None,
            mor_filter: None,
            injective: false,
            cap: caps().max_enumeration,
        }
    }

    /// Restrict the image of each domain object to a candidate list.
    pub fn objects(mut self, candidates: Vec<Vec<Ob>>) -> Self {
        self.obj_candidates = Some(candidates);
        self
    }

    /// Keep only assignments `m ↦ n` with `filter(m, n)`.
    pub fn filter(mut self, filter: &'a MorFilter<'a>) -> Self {
        self.mor_filter = Some(filter);
        self
    }

    /// Only full embeddings: injective on objects and bijective on every hom-set.
    pub fn embeddings(mut self) -> Self {
        self.injective = true;
        self
    }

    pub fn cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    fn plan(&self) -> Plan {
        let d = self.dom;
        let mut factorizations = vec![0usize; d.num_morphisms()];
        for f in d.morphisms() {
            if d.is_identity(f) {
                continue;
            }
            for &g in d.out_of(d.tgt(f)) {
                if !d.is_identity(g) {
                    factorizations[d.compose(g, f)] += 1;
                }
            }
        }
        let mut order: Vec<Mor> = d.morphisms().filter(|&m| !d.is_identity(m)).collect();
        order.sort_by_key(|&m| (factorizations[m], m));
        let mut pos = vec![usize::MAX; d.num_morphisms()];
        for (p, &m) in order.iter().enumerate() {
            pos[m] = p;
        }
        let mut checks = vec![Vec::new(); order.len()];
        let mut forced = vec![None; order.len()];
        for f in d.morphisms() {
            if d.is_identity(f) {
                continue;
            }
            for &g in d.out_of(d.tgt(f)) {
                if d.is_identity(g) {
                    continue;
                }
                let h = d.compose(g, f);
                let mut last = pos[g].max(pos[f]);
                if !d.is_identity(h) {
                    if pos[h] > last && forced[pos[h]].is_none() {
                        forced[pos[h]] = Some((g, f));
                    }
                    last = last.max(pos[h]);
                }
                checks[last].push((g, f, h));
            }
        }
        Plan {
            order,
            checks,
            forced,
        }
    }

    /// Visit every functor in a deterministic order.
    pub fn for_each(&self, mut visit: impl FnMut(&Functor) -> ControlFlow<()>) {
        let d = self.dom;
        let plan = self.plan();
        let mut st = State {
            f: Functor {
                obj: vec![usize::MAX; d.num_objects()],
                mor: vec![usize::MAX; d.num_morphisms()],
            },
            obj_used: vec![false; self.cod.num_objects()],
            mor_used: vec![false; self.cod.num_morphisms()],
        };
        let _ = self.objects_step(0, &plan, &mut st, &mut visit);
    }

    fn objects_step(
        &self,
        x: usize,
        plan: &Plan,
        st: &mut State,
        visit: &mut impl FnMut(&Functor) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let (d, c) = (self.dom, self.cod);
        if x == d.num_objects() {
            for y in d.objects() {
                let i = c.id(st.f.obj[y]);
                st.f.mor[d.id(y)] = i;
            }
            if self.injective {
                for y in d.objects() {
                    st.mor_used[c.id(st.f.obj[y])] = true;
                }
            }
            let r = self.morphisms_step(0, plan, st, visit);
            if self.injective {
                for y in d.objects() {
                    st.mor_used[c.id(st.f.obj[y])] = false;
                }
            }
            return r;
        }
        let all: Vec<Ob>;
        let cands: &[Ob] = match &self.obj_candidates {
            Some(v) => &v[x],
            None => {
                all = c.objects().collect();
                &all
            }
        };
        for &y in cands {
            if self.injective && st.obj_used[y] {
                continue;
            }
            let ok = (0..x).all(|z| {
                let fz = st.f.obj[z];
                (d.hom(z, x).is_empty() || !c.hom(fz, y).is_empty())
                    && (d.hom(x, z).is_empty() || !c.hom(y, fz).is_empty())
                    && (!self.injective
                        || (d.hom(z, x).len() == c.hom(fz, y).len()
                            && d.hom(x, z).len() == c.hom(y, fz).len()))
            }) && (!self.injective || d.hom(x, x).len() == c.hom(y, y).len());
            if !ok {
                continue;
            }
            st.f.obj[x] = y;
            st.obj_used[y] = true;
            let r = self.objects_step(x + 1, plan, st, visit);
            st.obj_used[y] = false;
            r?;
        }
        st.f.obj[x] = usize::MAX;
        ControlFlow::Continue(())
    }

    fn morphisms_step(
        &self,
        p: usize,
        plan: &Plan,
        st: &mut State,
        visit: &mut impl FnMut(&Functor) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let (d, c) = (self.dom, self.cod);
        if p == plan.order.len() {
            return visit(&st.f);
        }
        let m = plan.order[p];
        let (fs, ft) = (st.f.obj[d.src(m)], st.f.obj[d.tgt(m)]);
        let forced_val;
        let cands: &[Mor] = match plan.forced[p] {
            Some((g, f)) => {
                forced_val = [c.compose(st.f.mor[g], st.f.mor[f])];
                &forced_val
            }
            None => c.hom(fs, ft),
        };
        for &n in cands {
            if self.injective && st.mor_used[n] {
                continue;
            }
            if let Some(flt) = self.mor_filter {
                if !flt(m, n) {
                    continue;
                }
            }
            st.f.mor[m] = n;
            let ok = plan.checks[p]
                .iter()
                .all(|&(g, f, h)| st.f.mor[h] == c.compose(st.f.mor[g], st.f.mor[f]));
            if !ok {
                continue;
            }
            st.mor_used[n] = true;
            let r = self.morphisms_step(p + 1, plan, st, visit);
            st.mor_used[n] = false;
            r?;
        }
        st.f.mor[m] = usize::MAX;
        ControlFlow::Continue(())
    }

    /// All functors, or `SizeBoundExceeded` past the enumeration cap.
    pub fn collect(&self) -> Result<Vec<Functor>> {
        let mut out = Vec::new();
        let mut over = false;
        self.for_each(|f| {
            if out.len() >= self.cap {
                over = true;
                return ControlFlow::Break(());
            }
            out.push(f.clone());
            ControlFlow::Continue(())
        });
        if over {
            return Err(Error::SizeBoundExceeded {
                what: "functor enumeration".into(),
                size: self.cap + 1,
                cap: self.cap,
            });
        }
        Ok(out)
    }

    pub fn first(&self) -> Option<Functor> {
        let mut out = None;
        self.for_each(|f| {
            out = Some(f.clone());
            ControlFlow::Break(())
        });
        out
    }

    pub fn count(&self) -> usize {
        let mut n = 0;
        self.for_each(|_| {
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }
}

struct State {
    f: Functor,
    obj_used: Vec<bool>,
    mor_used: Vec<bool>,
}

pub fn enumerate_functors(dom: &FinCat, cod: &FinCat) -> Result<Vec<Functor>> {
    FunctorSearch::new(dom, cod).collect()
}

/// Iterated refinement of a structural invariant of objects, used to prune
/// the isomorphism search.
fn object_classes(c: &FinCat) -> Vec<u64> {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};
    let n = c.num_objects();
    let mut cls: Vec<u64> = c
        .objects()
        .map(|x| {
            let mut h = DefaultHasher::new();
            c.hom(x, x).len().hash(&mut h);
            c.hom(x, x)
                .iter()
                .filter(|&&m| c.is_iso(m))
                .count()
                .hash(&mut h);
            let mut idem = 0usize;
            for &m in c.hom(x, x) {
                if c.compose(m, m) == m {
                    idem += 1;
                }
            }
            idem.hash(&mut h);
            h.finish()
        })
        .collect();
    for _ in 0..3 {
        let next: Vec<u64> = (0..n)
            .map(|x| {
                let mut nb: Vec<(usize, usize, u64)> = (0..n)
                    .filter(|&y| y != x)
                    .map(|y| (c.hom(x, y).len(), c.hom(y, x).len(), cls[y]))
                    .collect();
                nb.sort_unstable();
                let mut h = DefaultHasher::new();
                cls[x].hash(&mut h);
                nb.hash(&mut h);
                h.finish()
            })
            .collect();
        cls = next;
    }
    cls
}

/// An isomorphism `c → d` if one exists.
pub fn find_isomorphism(c: &FinCat, d: &FinCat) -> Option<Functor> {
    if c.num_objects() != d.num_objects() || c.num_morphisms() != d.num_morphisms() {
        return None;
    }
    let cc = object_classes(c);
    let dc = object_classes(d);
    let mut by_class: HashMap<u64, Vec<Ob>> = HashMap::new();
    for y in d.objects() {
        by_class.entry(dc[y]).or_default().push(y);
    }
    let mut cands = Vec::with_capacity(c.num_objects());
    for x in c.objects() {
        {
            let v = by_class.get(&cc[x])?;
            cands.push(v.clone())
        }
    }
    let mut count_c: HashMap<u64, usize> = HashMap::new();
    for x in c.objects() {
        *count_c.entry(cc[x]).or_default() += 1;
    }
    if count_c
        .iter()
        .any(|(k, &v)| by_class.get(k).map_or(0, Vec::len) != v)
    {
        return None;
    }
    FunctorSearch::new(c, d).objects(cands).embeddings().first()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{cyclic_group, discrete, opposite, poset, product, walking_iso};

    #[test]
    fn functors_interval_to_interval() {
        let c = poset(1);
        assert_eq!(enumerate_functors(&c, &c).unwrap().len(), 3);
    }

    #[test]
    fn functors_from_empty_and_to_terminal() {
        let e = discrete(0);
        let c = poset(2);
        assert_eq!(enumerate_functors(&e, &c).unwrap().len(), 1);
        assert_eq!(enumerate_functors(&c, &poset(0)).unwrap().len(), 1);
        assert_eq!(enumerate_functors(&c, &e).unwrap().len(), 0);
    }

    #[test]
    fn monotone_maps_count() {
        // monotone maps [m] → [n] number C(m+n+1, m+1)
        assert_eq!(enumerate_functors(&poset(2), &poset(2)).unwrap().len(), 10);
        assert_eq!(enumerate_functors(&poset(2), &poset(3)).unwrap().len(), 20);
    }

    #[test]
    fn group_endomorphisms() {
        let z4 = cyclic_group(4);
        assert_eq!(enumerate_functors(&z4, &z4).unwrap().len(), 4);
        let z2 = cyclic_group(2);
        assert_eq!(enumerate_functors(&z4, &z2).unwrap().len(), 2);
        assert_eq!(enumerate_functors(&z2, &z4).unwrap().len(), 2);
    }

    #[test]
    fn iso_search() {
        let a = product(&poset(1), &poset(1)).unwrap();
        let b = product(&poset(1), &poset(1)).unwrap();
        assert!(find_isomorphism(&a, &b).is_some());
        assert!(find_isomorphism(&poset(2), &opposite(&poset(2))).is_some());
        assert!(find_isomorphism(&walking_iso(), &poset(1)).is_none());
        assert!(find_isomorphism(&cyclic_group(4), &cyclic_group(2)).is_none());
    }

    #[test]
    fn cap_is_enforced() {
        let r = FunctorSearch::new(&poset(3), &poset(3)).cap(5).collect();
        assert!(matches!(r, Err(Error::SizeBoundExceeded { .. })));
    }
}

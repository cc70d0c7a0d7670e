use std::collections::HashMap;

use super::functor::{compose_functors, nat_transformations, NatTrans};
use super::search::FunctorSearch;
use super::{FinCat, Functor, Mor, Ob};
use crate::caps::{caps, check};
use crate::error::{Error, Result};

/// The ordinal `[n] = {0 < 1 < … < n}`.
pub fn poset(n: usize) -> FinCat {
    preorder((0..=n).map(|i| i.to_string()).collect(), |i, j| i <= j).expect("ordinal within caps")
}

/// The thin category on `names` with an arrow `i → j` iff `le(i, j)`.
/// `le` must be reflexive and transitive.
pub fn preorder(names: Vec<String>, le: impl Fn(usize, usize) -> bool) -> Result<FinCat> {
    let n = names.len();
    let mut mors = Vec::new();
    let mut ix = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            if le(i, j) {
                ix.insert((i, j), mors.len());
                let name = if i == j {
                    format!("id_{}", names[i])
                } else {
                    format!("{}<{}", names[i], names[j])
                };
                mors.push((name, i, j));
            }
        }
    }
    let mut ident = Vec::with_capacity(n);
    for i in 0..n {
        ident.push(
            *ix.get(&(i, i))
                .ok_or_else(|| Error::InvalidDiagram("relation is not reflexive".into()))?,
        );
    }
    let srcs: Vec<(usize, usize)> = mors.iter().map(|&(_, s, t)| (s, t)).collect();
    FinCat::from_tables(names, mors, ident, |g, f| {
        ix.get(&(srcs[f].0, srcs[g].1)).copied()
    })
}

/// The discrete category on `n` objects.
pub fn discrete(n: usize) -> FinCat {
    preorder((0..n).map(|i| format!("d{i}")).collect(), |i, j| i == j).expect("within caps")
}

/// A group as a one-object category, from its multiplication table
/// (`mul[a][b] = a·b`, element 0 the unit).
pub fn group_category(mul: &[Vec<usize>]) -> Result<FinCat> {
    let n = mul.len();
    let names = vec!["*".to_string()];
    let mors = (0..n).map(|a| (format!("g{a}"), 0, 0)).collect();
    FinCat::from_tables(names, mors, vec![0], |g, f| mul[g].get(f).copied())?.validated()
}

/// The cyclic group `Z/m` as a one-object category.
pub fn cyclic_group(m: usize) -> FinCat {
    let mul: Vec<Vec<usize>> = (0..m)
        .map(|a| (0..m).map(|b| (a + b) % m).collect())
        .collect();
    group_category(&mul).expect("cyclic group")
}

/// Two objects and a unique isomorphism between them.
pub fn walking_iso() -> FinCat {
    preorder(vec!["a".into(), "b".into()], |_, _| true).expect("chaotic category")
}

pub fn product(c: &FinCat, d: &FinCat) -> Result<FinCat> {
    let objs: Vec<(Ob, Ob)> = c
        .objects()
        .flat_map(|x| d.objects().map(move |y| (x, y)))
        .collect();
    let mors: Vec<(Mor, Mor)> = c
        .morphisms()
        .flat_map(|f| d.morphisms().map(move |g| (f, g)))
        .collect();
    FinCat::from_keys(
        objs,
        mors,
        |&(f, g)| ((c.src(f), d.src(g)), (c.tgt(f), d.tgt(g))),
        |&(x, y)| (c.id(x), d.id(y)),
        |&(f2, g2), &(f1, g1)| (c.compose(f2, f1), d.compose(g2, g1)),
        |&(x, y)| format!("({},{})", c.object_name(x), d.object_name(y)),
        |&(f, g)| format!("({},{})", c.morphism_name(f), d.morphism_name(g)),
    )
}

/// Disjoint union; objects and morphisms of `c` come first.
pub fn coproduct(c: &FinCat, d: &FinCat) -> Result<FinCat> {
    let (nc, mc) = (c.num_objects(), c.num_morphisms());
    let mut names: Vec<String> = c.object_names().iter().map(|n| format!("0.{n}")).collect();
    names.extend(d.object_names().iter().map(|n| format!("1.{n}")));
    let mut mors: Vec<(String, Ob, Ob)> = c
        .morphisms()
        .map(|m| (format!("0.{}", c.morphism_name(m)), c.src(m), c.tgt(m)))
        .collect();
    mors.extend(d.morphisms().map(|m| {
        (
            format!("1.{}", d.morphism_name(m)),
            d.src(m) + nc,
            d.tgt(m) + nc,
        )
    }));
    let mut ident: Vec<Mor> = c.objects().map(|x| c.id(x)).collect();
    ident.extend(d.objects().map(|y| d.id(y) + mc));
    FinCat::from_tables(names, mors, ident, |g, f| {
        if g < mc && f < mc {
            c.try_compose(g, f)
        } else if g >= mc && f >= mc {
            d.try_compose(g - mc, f - mc).map(|h| h + mc)
        } else {
            None
        }
    })
}

pub fn opposite(c: &FinCat) -> FinCat {
    let mors = c
        .morphisms()
        .map(|m| (c.morphism_name(m).to_string(), c.tgt(m), c.src(m)))
        .collect();
    let ident = c.objects().map(|x| c.id(x)).collect();
    FinCat::from_tables(c.object_names().to_vec(), mors, ident, |g, f| {
        c.try_compose(f, g)
    })
    .expect("opposite of a valid category")
}

/// The subcategory on the given objects and morphisms (which must contain
/// identities and be closed under composition), with its inclusion.
pub fn subcategory(c: &FinCat, objects: &[Ob], morphisms: &[Mor]) -> Result<(FinCat, Functor)> {
    let oix: HashMap<Ob, usize> = objects.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mix: HashMap<Mor, usize> = morphisms.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut mors = Vec::with_capacity(morphisms.len());
    for &m in morphisms {
        let (Some(&s), Some(&t)) = (oix.get(&c.src(m)), oix.get(&c.tgt(m))) else {
            return Err(Error::InvalidDiagram(format!(
                "{} leaves the chosen objects",
                c.morphism_name(m)
            )));
        };
        mors.push((c.morphism_name(m).to_string(), s, t));
    }
    let mut ident = Vec::with_capacity(objects.len());
    for &x in objects {
        ident.push(*mix.get(&c.id(x)).ok_or_else(|| {
            Error::InvalidDiagram(format!("identity of {} missing", c.object_name(x)))
        })?);
    }
    let names = objects
        .iter()
        .map(|&x| c.object_name(x).to_string())
        .collect();
    let sub = FinCat::from_tables(names, mors, ident, |g, f| {
        mix.get(&c.compose(morphisms[g], morphisms[f])).copied()
    })?;
    Ok((sub, Functor::new(objects.to_vec(), morphisms.to_vec())))
}

/// The maximal subgroupoid.
pub fn interior(c: &FinCat) -> FinCat {
    let objs: Vec<Ob> = c.objects().collect();
    let isos: Vec<Mor> = c.morphisms().filter(|&m| c.is_iso(m)).collect();
    subcategory(c, &objs, &isos)
        .expect("isomorphisms form a subcategory")
        .0
}

/// A slice category with its forgetful projection, keeping track of which
/// morphism of the base each object stands for.
#[derive(Clone, Debug)]
pub struct Slice {
    pub cat: FinCat,
    pub proj: Functor,
    /// Base morphism represented by each object of the slice.
    pub arrows: Vec<Mor>,
    /// Key of each morphism: `(f, h)` for `h∘f` in an under-slice,
    /// `(h, g)` for `g∘h` in an over-slice.
    pub keys: Vec<(Mor, Mor)>,
}

impl Slice {
    pub fn object_of(&self, arrow: Mor) -> Option<Ob> {
        self.arrows.iter().position(|&a| a == arrow)
    }

    pub fn morphism_of(&self, key: (Mor, Mor)) -> Option<Mor> {
        self.keys.iter().position(|&k| k == key)
    }
}

/// `C_{x/}`: arrows out of `x` and commuting triangles `h∘f = g`.
pub fn slice_under(c: &FinCat, x: Ob) -> Result<Slice> {
    if x >= c.num_objects() {
        return Err(Error::UnknownObject(x.to_string()));
    }
    let objs: Vec<Mor> = c.out_of(x).to_vec();
    let mut mors = Vec::new();
    for &f in &objs {
        for &h in c.out_of(c.tgt(f)) {
            mors.push((f, h));
        }
    }
    let cat = FinCat::from_keys(
        objs.clone(),
        mors.clone(),
        |&(f, h)| (f, c.compose(h, f)),
        |&f| (f, c.id(c.tgt(f))),
        |&(_, h2), &(f, h1)| (f, c.compose(h2, h1)),
        |&f| c.morphism_name(f).to_string(),
        |&(f, h)| format!("{}/{}", c.morphism_name(h), c.morphism_name(f)),
    )?;
    let proj = Functor::new(
        objs.iter().map(|&f| c.tgt(f)).collect(),
        mors.iter().map(|&(_, h)| h).collect(),
    );
    Ok(Slice {
        cat,
        proj,
        arrows: objs,
        keys: mors,
    })
}

/// `C_{/x}`: arrows into `x` and commuting triangles `g∘h = f`.
pub fn slice_over(c: &FinCat, x: Ob) -> Result<Slice> {
    if x >= c.num_objects() {
        return Err(Error::UnknownObject(x.to_string()));
    }
    let objs: Vec<Mor> = c.incoming(x).to_vec();
    let mut mors = Vec::new();
    for &g in &objs {
        for &h in c.incoming(c.src(g)) {
            mors.push((h, g));
        }
    }
    let cat = FinCat::from_keys(
        objs.clone(),
        mors.clone(),
        |&(h, g)| (c.compose(g, h), g),
        |&g| (c.id(c.src(g)), g),
        |&(h2, g), &(h1, _)| (c.compose(h2, h1), g),
        |&g| c.morphism_name(g).to_string(),
        |&(h, g)| format!("{}\\{}", c.morphism_name(h), c.morphism_name(g)),
    )?;
    let proj = Functor::new(
        objs.iter().map(|&g| c.src(g)).collect(),
        mors.iter().map(|&(h, _)| h).collect(),
    );
    Ok(Slice {
        cat,
        proj,
        arrows: objs,
        keys: mors,
    })
}

/// `Fun(C, D)` with the functor and transformation behind every object and
/// morphism.
#[derive(Clone, Debug)]
pub struct FunctorCategory {
    pub cat: FinCat,
    pub functors: Vec<Functor>,
    pub transformations: Vec<NatTrans>,
}

impl FunctorCategory {
    pub fn object_of(&self, f: &Functor) -> Option<Ob> {
        self.functors.iter().position(|g| g == f)
    }

    /// Index lookup table for repeated queries.
    pub fn index(&self) -> HashMap<&Functor, Ob> {
        self.functors
            .iter()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect()
    }

    pub fn morphism_of(&self, src: Ob, tgt: Ob, t: &NatTrans) -> Option<Mor> {
        self.cat
            .hom(src, tgt)
            .iter()
            .copied()
            .find(|&m| self.transformations[m] == *t)
    }

    /// Evaluation at an object of the domain, `Fun(C, D) → D`.
    pub fn evaluation(&self, x: Ob) -> Functor {
        Functor::new(
            self.functors.iter().map(|f| f.obj[x]).collect(),
            self.transformations
                .iter()
                .map(|t| t.components[x])
                .collect(),
        )
    }
}

/// The functor `Fun(A, B) → Fun(A', B')` sending `G` to `post∘G∘pre`, for
/// `pre: A' → A` and `post: B → B'`.
pub fn whisker_functor(
    from: &FunctorCategory,
    to: &FunctorCategory,
    pre: &Functor,
    post: &Functor,
) -> Result<Functor> {
    let idx = to.index();
    let mut obj = Vec::with_capacity(from.functors.len());
    for g in &from.functors {
        let h = compose_functors(post, &compose_functors(g, pre));
        obj.push(*idx.get(&h).ok_or_else(|| {
            Error::InvalidFunctor("whiskered functor missing from target functor category".into())
        })?);
    }
    let mut mor = Vec::with_capacity(from.transformations.len());
    for (m, t) in from.transformations.iter().enumerate() {
        let comps = pre.obj.iter().map(|&w| post.mor[t.components[w]]).collect();
        let s = obj[from.cat.src(m)];
        let u = obj[from.cat.tgt(m)];
        mor.push(
            to.morphism_of(s, u, &NatTrans { components: comps })
                .ok_or_else(|| Error::InvalidFunctor("whiskered transformation missing".into()))?,
        );
    }
    Ok(Functor::new(obj, mor))
}

/// `f × g` between product categories built by [`product`].
pub fn product_functor(f: &Functor, g: &Functor, g_dom: &FinCat, g_cod: &FinCat) -> Functor {
    let (no, nm) = (g_cod.num_objects(), g_cod.num_morphisms());
    let mut obj = Vec::with_capacity(f.obj.len() * g_dom.num_objects());
    for &a in &f.obj {
        for &b in &g.obj {
            obj.push(a * no + b);
        }
    }
    let mut mor = Vec::with_capacity(f.mor.len() * g_dom.num_morphisms());
    for &a in &f.mor {
        for &b in &g.mor {
            mor.push(a * nm + b);
        }
    }
    Functor::new(obj, mor)
}

fn functor_label(f: &Functor, d: &FinCat, with_mor: bool) -> String {
    let objs: Vec<&str> = f.obj.iter().map(|&y| d.object_name(y)).collect();
    if with_mor {
        let mors: Vec<&str> = f.mor.iter().map(|&n| d.morphism_name(n)).collect();
        format!("<{}|{}>", objs.join(","), mors.join(","))
    } else {
        format!("<{}>", objs.join(","))
    }
}

pub fn functor_category(c: &FinCat, d: &FinCat) -> Result<FunctorCategory> {
    let cp = caps();
    let functors = FunctorSearch::new(c, d)
        .cap(cp.max_objects)
        .collect()
        .map_err(|_| Error::SizeBoundExceeded {
            what: "functor category objects".into(),
            size: cp.max_objects + 1,
            cap: cp.max_objects,
        })?;
    let mut mors: Vec<(usize, usize, NatTrans)> = Vec::new();
    for (i, f) in functors.iter().enumerate() {
        for (j, g) in functors.iter().enumerate() {
            for t in nat_transformations(c, d, f, g) {
                mors.push((i, j, t));
                check("functor category morphisms", mors.len(), cp.max_morphisms)?;
            }
        }
    }
    let short: Vec<String> = functors
        .iter()
        .map(|f| functor_label(f, d, false))
        .collect();
    let distinct = short.iter().collect::<std::collections::HashSet<_>>().len() == short.len();
    let labels: Vec<String> = if distinct {
        short
    } else {
        functors.iter().map(|f| functor_label(f, d, true)).collect()
    };
    let cat = FinCat::from_keys(
        (0..functors.len()).collect(),
        mors.clone(),
        |(i, j, _)| (*i, *j),
        |&i| (i, i, NatTrans::identity(d, &functors[i])),
        |(_, k, b), (i, _, a)| (*i, *k, b.vertical(d, a)),
        |&i| labels[i].clone(),
        |(i, j, t)| {
            let comps: Vec<&str> = t.components.iter().map(|&m| d.morphism_name(m)).collect();
            format!("{}=>{}[{}]", labels[*i], labels[*j], comps.join(","))
        },
    )?;
    let transformations = mors.into_iter().map(|(_, _, t)| t).collect();
    Ok(FunctorCategory {
        cat,
        functors,
        transformations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::find_isomorphism;

    #[test]
    fn product_of_intervals() {
        let p = product(&poset(1), &poset(1)).unwrap();
        assert_eq!((p.num_objects(), p.num_morphisms()), (4, 9));
        assert!(p.law_violations().is_empty());
    }

    #[test]
    fn slices_of_interval() {
        let c = poset(1);
        let s0 = slice_under(&c, 0).unwrap();
        assert_eq!((s0.cat.num_objects(), s0.cat.num_morphisms()), (2, 3));
        assert!(find_isomorphism(&s0.cat, &c).is_some());
        assert!(s0.proj.is_valid(&s0.cat, &c));
        let s1 = slice_under(&c, 1).unwrap();
        assert_eq!((s1.cat.num_objects(), s1.cat.num_morphisms()), (1, 1));
        let o = slice_over(&poset(2), 2).unwrap();
        assert!(find_isomorphism(&o.cat, &poset(2)).is_some());
        assert!(o.cat.law_violations().is_empty());
        assert!(slice_under(&c, 5).is_err());
    }

    #[test]
    fn functor_category_interval() {
        let f = functor_category(&poset(1), &poset(1)).unwrap();
        assert_eq!((f.cat.num_objects(), f.cat.num_morphisms()), (3, 6));
        assert!(f.cat.law_violations().is_empty());
        let t = functor_category(&poset(1), &poset(0)).unwrap();
        assert_eq!((t.cat.num_objects(), t.cat.num_morphisms()), (1, 1));
        let w = walking_iso();
        let e = functor_category(&poset(0), &w).unwrap();
        assert!(find_isomorphism(&e.cat, &w).is_some());
    }

    #[test]
    fn interior_cases() {
        assert!(interior(&poset(2)).is_discrete());
        assert_eq!(interior(&poset(2)).num_objects(), 3);
        let z3 = cyclic_group(3);
        assert_eq!(interior(&z3), z3);
        assert_eq!(interior(&walking_iso()), walking_iso());
    }

    #[test]
    fn opposite_is_involutive() {
        let c = product(&poset(1), &cyclic_group(2)).unwrap();
        assert_eq!(opposite(&opposite(&c)), c);
        assert!(opposite(&c).law_violations().is_empty());
    }

    #[test]
    fn coproduct_counts() {
        let c = coproduct(&poset(1), &cyclic_group(2)).unwrap();
        assert_eq!((c.num_objects(), c.num_morphisms()), (3, 5));
        assert!(c.law_violations().is_empty());
        assert!(c.hom(0, 2).is_empty());
    }
}

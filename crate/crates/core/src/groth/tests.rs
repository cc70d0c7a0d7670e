use super::*;
use crate::fincat::{
    default_probes, discrete, find_isomorphism, functor_category, is_isomorphism, opposite, poset,
    slice_over, slice_under, walking_iso, CatValuedDiagram, Functor,
};

/// A diagram on `[n]^op` from values and the action of each generating
/// step `i<i+1`, as a functor `F(i+1) → F(i)`.
fn op_chain(values: Vec<FinCat>, steps: Vec<Functor>) -> CatValuedDiagram {
    let n = values.len() - 1;
    let index = opposite(&poset(n));
    let c = poset(n);
    CatValuedDiagram::from_generators(index, values.clone(), |m| {
        let (i, j) = (c.src(m), c.tgt(m));
        let mut f = identity_functor(&values[j]);
        for k in (i..j).rev() {
            f = compose_functors(&steps[k], &f);
        }
        f
    })
    .unwrap()
}

fn chain(values: Vec<FinCat>, steps: Vec<Functor>) -> CatValuedDiagram {
    let n = values.len() - 1;
    let c = poset(n);
    CatValuedDiagram::from_generators(c.clone(), values.clone(), |m| {
        let (i, j) = (c.src(m), c.tgt(m));
        let mut f = identity_functor(&values[i]);
        for k in i..j {
            f = compose_functors(&steps[k], &f);
        }
        f
    })
    .unwrap()
}

fn point_to(c: &FinCat, x: Ob) -> Functor {
    Functor::constant(&poset(0), c, x)
}

/// `F(0) = [0]`, `F(1) = [1]` on `[1]^op`.
fn sections_example() -> CatValuedDiagram {
    op_chain(
        vec![poset(0), poset(1)],
        vec![Functor::constant(&poset(1), &poset(0), 0)],
    )
}

#[test]
fn cart_groth_example_and_cartesian_set() {
    let f = sections_example();
    let g = cart_groth(&f).unwrap();
    assert_eq!(g.fib.total.num_objects(), 3);
    assert!(is_groth_fibration(&g.fib));
    for (m, &(gm, _, xi)) in g.morphisms.iter().enumerate() {
        let s = g.fib.base.src(gm);
        assert_eq!(g.fib.cartesian[m], f.values[s].is_iso(xi));
    }
}

#[test]
fn cart_groth_of_point_is_base() {
    let c = poset(2);
    let f = CatValuedDiagram::constant(opposite(&c), poset(0));
    let g = cart_groth(&f).unwrap();
    assert!(find_isomorphism(&g.fib.total, &c).is_some());
    assert!(g.fib.cartesian.iter().all(|&b| b));
}

#[test]
fn cocart_groth_collage_example() {
    let f = chain(
        vec![poset(0), poset(1)],
        vec![Functor::constant(&poset(0), &poset(1), 0)],
    );
    let g = cocart_groth(&f).unwrap();
    let t = &g.fib.total;
    assert_eq!(t.num_objects(), 3);
    let a = g.object_of(0, 0).unwrap();
    let b0 = g.object_of(1, 0).unwrap();
    let b1 = g.object_of(1, 1).unwrap();
    assert_eq!(t.hom(a, b0).len(), 1);
    assert_eq!(t.hom(a, b1).len(), 1);
    assert!(is_groth_opfibration(&g.fib));
    for (m, &(gm, _, xi)) in g.morphisms.iter().enumerate() {
        let tg = g.fib.base.tgt(gm);
        assert_eq!(g.fib.cocartesian[m], f.values[tg].is_iso(xi));
    }
}

#[test]
fn arrow_category_evaluations_are_fibrations() {
    let c = poset(1);
    let arrows = functor_category(&poset(1), &c).unwrap();
    for end in [0, 1] {
        let p = FibCat::new(arrows.cat.clone(), c.clone(), arrows.evaluation(end)).unwrap();
        assert!(is_groth_fibration(&p), "evaluation at {end}");
    }
}

#[test]
fn trivial_fibrations() {
    let c = poset(2);
    let p = FibCat::new(c.clone(), c.clone(), identity_functor(&c)).unwrap();
    assert!(is_groth_fibration(&p));
    assert!(p.cartesian.iter().all(|&b| b));
    let d = discrete(2);
    let to_top = FibCat::new(d.clone(), poset(1), Functor::constant(&d, &poset(1), 1)).unwrap();
    assert!(!is_groth_fibration(&to_top));
    let onto = FibCat::new(d.clone(), d.clone(), identity_functor(&d)).unwrap();
    assert!(is_groth_fibration(&onto));
}

#[test]
fn straighten_recovers_strict_diagram() {
    let v = straighten_round_trip(&sections_example()).unwrap();
    assert!(v.pass, "{v:?}");
    let f = op_chain(
        vec![poset(1), poset(1), poset(0)],
        vec![
            identity_functor(&poset(1)),
            Functor::constant(&poset(0), &poset(1), 1),
        ],
    );
    assert!(straighten_round_trip(&f).unwrap().pass);
}

#[test]
fn straighten_source_fibration_gives_under_slices() {
    let c = poset(2);
    let arrows = functor_category(&poset(1), &c).unwrap();
    let p = FibCat::new(arrows.cat.clone(), c.clone(), arrows.evaluation(0)).unwrap();
    let s = straighten(&p, &Cleavage::canonical(&p).unwrap()).unwrap();
    assert!(s.is_strict());
    for x in c.objects() {
        let under = slice_under(&c, x).unwrap();
        assert!(find_isomorphism(&s.values[x], &under.cat).is_some());
    }
}

#[test]
fn non_canonical_cleavage_gives_coherent_non_identity_eta() {
    // F(0) = {a ≅ b}, F(1) = F(2) = [0], both maps into F(0) picking a
    let iso = walking_iso();
    let a = iso.object_index("a").unwrap();
    let b = iso.object_index("b").unwrap();
    let f = op_chain(
        vec![iso.clone(), poset(0), poset(0)],
        vec![
            Functor::constant(&poset(0), &iso, a),
            identity_functor(&poset(0)),
        ],
    );
    let g = cart_groth(&f).unwrap();
    let mut cl = Cleavage::canonical(&g.fib).unwrap();
    let base = &g.fib.base;
    let long = base.morphism_index("0<2").unwrap();
    let top = g.object_of(2, 0).unwrap();
    let from_b = g.object_of(0, b).unwrap();
    let alt = *g
        .fib
        .total
        .hom(from_b, top)
        .iter()
        .find(|&&m| g.fib.cartesian[m] && g.fib.proj.mor[m] == long)
        .unwrap();
    cl.lift.insert((top, long), alt);
    assert!(cl.defect(&g.fib).is_none());
    let s = straighten(&g.fib, &cl).unwrap();
    assert!(!s.is_strict());
    assert!(s.check_laws().pass);
}

#[test]
fn free_fibration_examples() {
    let c = poset(1);
    let ff = free_fibration(&poset(0), &c, &point_to(&c, 1)).unwrap();
    assert_eq!(ff.fib.total.num_objects(), 2);
    assert_eq!(ff.fib.total.num_morphisms(), 3);
    assert!(is_groth_fibration(&ff.fib));

    let c = poset(2);
    let ff = free_fibration(&c, &c, &identity_functor(&c)).unwrap();
    let arrows = functor_category(&poset(1), &c).unwrap();
    assert!(find_isomorphism(&ff.fib.total, &arrows.cat).is_some());
    assert!(is_groth_fibration(&ff.fib));
    for (m, &(_, _, _, al)) in ff.morphisms.iter().enumerate() {
        assert_eq!(ff.fib.cartesian[m], c.is_iso(al));
    }
}

#[test]
fn free_fibration_of_point_and_products() {
    for c in [poset(2), crate::fincat::cyclic_group(2)] {
        for x in c.objects() {
            assert!(free_of_point_check(&c, x).unwrap().pass);
        }
    }
    let c = poset(1);
    let v = free_product_check(&poset(1), &poset(0), &c, &point_to(&c, 1)).unwrap();
    assert!(v.pass, "{v:?}");
    let v = free_product_check(&walking_iso(), &c, &c, &identity_functor(&c)).unwrap();
    assert!(v.pass, "{v:?}");
}

#[test]
fn adjunction_examples() {
    let c = poset(1);
    let q = cart_groth(&op_chain(
        vec![poset(1), poset(0)],
        vec![Functor::constant(&poset(0), &poset(1), 0)],
    ))
    .unwrap();
    let r = adjunction_check(&poset(0), &c, &point_to(&c, 1), &q.fib).unwrap();
    assert!(r.verdict.pass, "{r:?}");
    assert_eq!((r.cartesian_functors, r.functors_over_base), (1, 1));

    let q = cart_groth(&sections_example()).unwrap();
    let r = adjunction_check(&c, &c, &identity_functor(&c), &q.fib).unwrap();
    assert!(r.verdict.pass);
    let secs = sections(&q.fib).unwrap();
    assert_eq!(r.functors_over_base, secs.functors.len());
    assert_eq!(r.cartesian_functors, r.functors_over_base);

    let empty = discrete(0);
    let r = adjunction_check(&empty, &c, &Functor::new(vec![], vec![]), &q.fib).unwrap();
    assert!(r.verdict.pass);
    assert_eq!((r.cartesian_functors, r.functors_over_base), (1, 1));
}

#[test]
fn adjunction_rejects_non_fibration() {
    let c = poset(1);
    let d = discrete(1);
    let top = Functor::constant(&d, &c, 1);
    let q = FibCat::new(d.clone(), c.clone(), top.clone()).unwrap();
    assert!(matches!(
        adjunction_check(&d, &c, &top, &q),
        Err(Error::NotAFibration(_))
    ));
}

#[test]
fn sections_examples() {
    let q = cart_groth(&sections_example()).unwrap();
    let s = sections(&q.fib).unwrap();
    assert!(find_isomorphism(&s.cat, &poset(1)).is_some());
    let v = sections_vs_oplax_limit(&sections_example()).unwrap();
    assert!(v.pass && v.witness.is_some());

    let point = CatValuedDiagram::constant(opposite(&poset(1)), poset(0));
    let s = sections(&cart_groth(&point).unwrap().fib).unwrap();
    assert_eq!((s.cat.num_objects(), s.cat.num_morphisms()), (1, 1));
}

#[test]
fn phi_examples() {
    let c = poset(1);
    let f = chain(
        vec![poset(0), poset(1)],
        vec![Functor::constant(&poset(0), &poset(1), 0)],
    );
    let x = poset(1);
    let phi = phi_fibration(&f, &x).unwrap();
    assert!(is_groth_fibration(&phi.groth.fib));
    assert_eq!(phi.groth.fib.objects_over(1).len(), 3);
    let v = phi_universal_check(&f, &x, &poset(0), &point_to(&c, 1)).unwrap();
    assert!(v.pass, "{v:?}");
    assert!(v.detail.contains("has 3 elements") && v.detail.ends_with("has 3"));
    let v = phi_universal_check(&f, &x, &discrete(0), &Functor::new(vec![], vec![])).unwrap();
    assert!(v.pass);
    let v = phi_universal_check(&f, &x, &c, &identity_functor(&c)).unwrap();
    assert!(v.pass, "{v:?}");
}

#[test]
fn lax_colimit_examples() {
    let probes: Vec<FinCat> = (0..3).map(poset).collect();
    let f = chain(
        vec![poset(1), poset(0)],
        vec![Functor::constant(&poset(1), &poset(0), 0)],
    );
    let v = lax_colimit_check(&f, &probes).unwrap();
    assert!(v.pass, "{v:?}");
    let point = CatValuedDiagram::constant(poset(1), poset(0));
    assert!(lax_colimit_check(&point, &default_probes()).unwrap().pass);
    let v = oplax_colimit_check(&sections_example(), &probes).unwrap();
    assert!(v.pass, "{v:?}");
}

#[test]
fn exponential_fiber_examples() {
    let f = sections_example();
    let c = opposite(&f.index);
    let q = cart_groth(&f).unwrap();
    let e0 = exponentiate(&q.fib, &poset(0)).unwrap();
    assert!(find_isomorphism(&e0.fib.total, &q.fib.total).is_some());
    for x in c.objects() {
        assert!(
            fiber_formula_check(&f, &poset(0), &point_to(&c, x))
                .unwrap()
                .pass
        );
    }
    let v = fiber_formula_check(&f, &poset(1), &identity_functor(&c)).unwrap();
    assert!(v.pass, "{v:?}");

    let point = CatValuedDiagram::constant(opposite(&poset(1)), poset(0));
    let qp = cart_groth(&point).unwrap();
    let ep = exponentiate(&qp.fib, &poset(1)).unwrap();
    for b in ep.fib.base.objects() {
        let (fib, _) = ep.fib.fiber(b).unwrap();
        assert_eq!((fib.num_objects(), fib.num_morphisms()), (1, 1));
    }
}

#[test]
fn collage_examples() {
    let b = poset(1);
    let empty = discrete(0);
    let none = Functor::new(vec![], vec![]);
    let col = collage_left(&empty, &b, &none).unwrap();
    assert!(is_isomorphism(&col.from_base, &b, &col.cat));
    let col = collage_left(&poset(0), &poset(0), &point_to(&poset(0), 0)).unwrap();
    assert!(find_isomorphism(&col.cat, &poset(1)).is_some());
    for left in [true, false] {
        let v = collage_pushout_check(&poset(0), &b, &point_to(&b, 1), left, &default_probes())
            .unwrap();
        assert!(v.pass, "{v:?}");
        let v =
            collage_pushout_check(&b, &b, &identity_functor(&b), left, &default_probes()).unwrap();
        assert!(v.pass, "{v:?}");
    }
}

#[test]
fn undercategory_fiber_examples() {
    let d = poset(1);
    let pt = poset(0);
    let v = undercat_fiber_check(&pt, &pt, &point_to(&pt, 0), &d, &point_to(&d, 0), true).unwrap();
    assert!(v.pass, "{v:?}");
    let under = slice_under(&functor_category(&pt, &d).unwrap().cat, 0).unwrap();
    assert_eq!(under.cat.num_objects(), 2);

    let b = poset(1);
    let v =
        undercat_fiber_check(&pt, &b, &point_to(&b, 1), &d, &identity_functor(&b), true).unwrap();
    assert!(v.pass, "{v:?}");
    let v =
        undercat_fiber_check(&pt, &b, &point_to(&b, 1), &d, &identity_functor(&b), false).unwrap();
    assert!(v.pass, "{v:?}");
    let over = slice_over(&functor_category(&pt, &d).unwrap().cat, 1).unwrap();
    assert_eq!(over.cat.num_objects(), 2);

    let empty = discrete(0);
    let none = Functor::new(vec![], vec![]);
    let v = undercat_fiber_check(&empty, &b, &none, &d, &identity_functor(&b), true).unwrap();
    assert!(v.pass);
}

#[test]
fn two_of_three_identity_and_projection() {
    let c = poset(1);
    let id = identity_functor(&c);
    let r = two_of_three_cart(&c, &c, &c, &id, &id, &id).unwrap();
    assert_eq!(r.conclusion, Some(true));

    let q = cart_groth(&sections_example()).unwrap();
    let p = &q.fib.proj;
    let r = two_of_three_cart(&q.fib.total, &c, &c, p, p, &id).unwrap();
    assert!(r.hypotheses.iter().all(|h| h.1), "{r:?}");
    assert_eq!(r.conclusion, Some(true));
}

#[test]
fn two_of_three_source_fibrations() {
    // f: (e, φ) ↦ (e, φ) from the free fibration of id to the arrow category,
    // both over C by the source
    let c = poset(1);
    let ff = free_fibration(&c, &c, &identity_functor(&c)).unwrap();
    let arrows = functor_category(&poset(1), &c).unwrap();
    let iso = find_isomorphism(&ff.fib.total, &arrows.cat).unwrap();
    let q = arrows.evaluation(0);
    let p = compose_functors(&q, &iso);
    assert_eq!(p, ff.fib.proj);
    let r = two_of_three_cart(&ff.fib.total, &arrows.cat, &c, &iso, &p, &q).unwrap();
    assert_eq!(r.conclusion, Some(true), "{r:?}");
}

#[test]
fn two_of_three_flags_failed_hypothesis() {
    // E over [1] with fibers [1] and identity transition, D with fibers
    // [1] over 1 and [0] over 0; f is the identity over 1.
    let c = poset(1);
    let h = cart_groth(&op_chain(
        vec![poset(1), poset(1)],
        vec![identity_functor(&poset(1))],
    ))
    .unwrap();
    let g = cart_groth(&op_chain(
        vec![poset(0), poset(1)],
        vec![Functor::constant(&poset(1), &poset(0), 0)],
    ))
    .unwrap();
    let obj = h
        .objects
        .iter()
        .map(|&(x, v)| g.object_of(x, if x == 1 { v } else { 0 }).unwrap())
        .collect();
    let mor = h
        .morphisms
        .iter()
        .map(|&(gm, x1, xi)| {
            let (s, t) = (c.src(gm), c.tgt(gm));
            let x1 = if t == 1 { x1 } else { 0 };
            let xi = if s == 1 { xi } else { 0 };
            g.morphism_of(gm, x1, xi).unwrap()
        })
        .collect();
    let f = Functor::new(obj, mor);
    assert!(f.is_valid(&h.fib.total, &g.fib.total));
    let r =
        two_of_three_cart(&h.fib.total, &g.fib.total, &c, &f, &h.fib.proj, &g.fib.proj).unwrap();
    let flags: Vec<bool> = r.hypotheses.iter().map(|h| h.1).collect();
    assert_eq!(flags, vec![true, true, true, false]);
    assert_eq!(r.conclusion, None);
    assert!(r.verdict.pass);
}

#[test]
fn two_of_three_discrete_examples() {
    let c = poset(1);
    let sl = slice_over(&c, 1).unwrap();
    let r =
        two_of_three_discrete(&sl.cat, &c, &c, &sl.proj, &sl.proj, &identity_functor(&c)).unwrap();
    assert_eq!(r.conclusion, Some(true));
}

#[test]
fn discrete_fibration_slice_equivalence() {
    let c = poset(1);
    let id = identity_functor(&c);
    assert!(dfib_slice_equiv(&c, &c, &id, 2).unwrap().pass);
    let over1 = slice_over(&c, 1).unwrap();
    let v = dfib_slice_equiv(&over1.cat, &c, &over1.proj, 2).unwrap();
    assert!(v.pass, "{v:?}");
    let over0 = slice_over(&c, 0).unwrap();
    let v = dfib_slice_equiv(&over0.cat, &c, &over0.proj, 2).unwrap();
    assert!(v.pass, "{v:?}");
}

#[test]
fn presheaf_counts() {
    // presheaves on [1] with values of size ≤ 1: (0,0), (1,0)... sizes (a,b)
    // with a map b → a: 1 + 1 + 0 + 1 = 3
    assert_eq!(presheaves(&poset(1), 1).unwrap().len(), 3);
    assert_eq!(presheaves(&poset(0), 3).unwrap().len(), 4);
}

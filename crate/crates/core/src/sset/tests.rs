use super::*;
use crate::fincat::{cyclic_group, find_isomorphism, poset, product as cat_product};

fn counts_nd(x: &SSet) -> Vec<usize> {
    x.nondegenerate_counts()
}

/// Strict chains of length `k+1` in `[p] × [q]`, counted directly.
fn shuffle_oracle(p: usize, q: usize, k: usize) -> usize {
    let pts: Vec<(usize, usize)> = (0..=p).flat_map(|a| (0..=q).map(move |b| (a, b))).collect();
    fn go(pts: &[(usize, usize)], last: Option<(usize, usize)>, left: usize) -> usize {
        if left == 0 {
            return 1;
        }
        pts.iter()
            .filter(|&&(a, b)| match last {
                None => true,
                Some((x, y)) => a >= x && b >= y && (a, b) != (x, y),
            })
            .map(|&pt| go(pts, Some(pt), left - 1))
            .sum()
    }
    go(&pts, None, k + 1)
}

#[test]
fn simplex_one_levels() {
    let d1 = simplex(1, 4).unwrap();
    assert_eq!(d1.sset.counts(), vec![2, 3, 4, 5, 6]);
    assert_eq!(counts_nd(&d1.sset), vec![2, 1, 0, 0, 0]);
}

#[test]
fn spine_and_horn_counts() {
    assert_eq!(counts_nd(&spine(2, 3).unwrap().sset), vec![3, 2, 0, 0]);
    assert_eq!(counts_nd(&horn(2, 1, 3).unwrap().sset), vec![3, 2, 0, 0]);
    // Λ³_1 omits the 3-cell and the face opposite vertex 1
    assert_eq!(counts_nd(&horn(3, 1, 3).unwrap().sset), vec![4, 6, 3, 0]);
    assert_eq!(counts_nd(&boundary(2, 3).unwrap().sset), vec![3, 3, 0, 0]);
}

#[test]
fn generators_respect_bound() {
    assert!(matches!(
        simplex(4, 3),
        Err(Error::DimensionBoundExceeded {
            needed: 4,
            bound: 3
        })
    ));
}

#[test]
fn product_of_intervals_matches_shuffles() {
    let d1 = simplex(1, 3).unwrap().sset;
    let p = product(&d1, &d1).unwrap();
    assert_eq!(counts_nd(&p.sset), vec![4, 5, 2, 0]);
    for k in 0..=3 {
        assert_eq!(p.sset.nondegenerate(k).len(), shuffle_oracle(1, 1, k));
    }
    let d2 = simplex(2, 3).unwrap().sset;
    let p = product(&d1, &d2).unwrap();
    for k in 0..=3 {
        assert_eq!(p.sset.nondegenerate(k).len(), shuffle_oracle(1, 2, k));
    }
}

#[test]
fn square_is_two_triangles_glued() {
    let dim = 3;
    let d1 = simplex(1, dim).unwrap();
    let d2 = simplex(2, dim).unwrap();
    let edge02 =
        SSetMap::from_keys(&d1, &d2, |_, s| s.iter().map(|&v| [0, 2][v]).collect()).unwrap();
    let po = pushout(&d1.sset, &d2.sset, &d2.sset, &edge02, &edge02).unwrap();
    let sq = product(&d1.sset, &d1.sset).unwrap();
    let tri = |p: [usize; 3], q: [usize; 3]| {
        let d1 = &d1;
        SSetMap::from_keys(&d2, &sq, move |k, s| {
            let a: Vec<usize> = s.iter().map(|&v| p[v]).collect();
            let b: Vec<usize> = s.iter().map(|&v| q[v]).collect();
            (d1.cell(k, &a).unwrap(), d1.cell(k, &b).unwrap())
        })
        .unwrap()
    };
    let lower = tri([0, 1, 1], [0, 0, 1]);
    let upper = tri([0, 0, 1], [0, 1, 1]);
    let across = lower.after(&edge02);
    let map = po.induced(&sq.sset, &[lower, upper, across]).unwrap();
    assert!(map.is_bijective(&sq.sset));
}

#[test]
fn one_object_colimit() {
    let x = horn(2, 0, 3).unwrap().sset;
    let c = finite_colimit(&[&x], &[]).unwrap();
    assert_eq!(c.sset.counts(), x.counts());
    assert!(c.legs[0].is_bijective(&c.sset));
}

#[test]
fn coskeletality() {
    let n2 = nerve(&poset(2), 4).unwrap();
    assert!(is_k_coskeletal(&n2.sset, 2).unwrap());
    let d1 = simplex(1, 3).unwrap();
    assert!(!is_k_coskeletal(&d1.sset, 0).unwrap());
    let z2 = nerve(&cyclic_group(2), 4).unwrap();
    assert!(is_k_coskeletal(&z2.sset, 2).unwrap());
    assert!(!is_k_coskeletal(&z2.sset, 1).unwrap());
}

#[test]
fn coskeleton_of_a_set_is_its_codiscrete_power() {
    let pts = boundary(1, 3).unwrap().sset;
    let c = coskeleton(&pts, 0).unwrap();
    assert_eq!(c.sset.counts(), vec![2, 4, 8, 16]);
    assert!(is_k_coskeletal(&c.sset, 0).unwrap());
}

#[test]
fn top_coskeleton_is_identity() {
    let x = horn(3, 2, 3).unwrap().sset;
    let c = coskeleton(&x, 3).unwrap();
    let order = |k: usize| {
        let mut v: Vec<u32> = (1u32..(1 << (k + 1))).collect();
        v.sort_by_key(|&s| (s.count_ones(), s));
        v
    };
    let map = SSetMap::from_keys_plain(&x, &c, |k, cell| {
        order(k)
            .into_iter()
            .map(|s| {
                let el: Vec<usize> = (0..=k).filter(|&i| s & (1 << i) != 0).collect();
                x.act(k, cell, &el)
            })
            .collect()
    })
    .unwrap();
    assert!(map.is_bijective(&c.sset));
}

#[test]
fn skeleton_of_triangle_is_boundary() {
    let d2 = simplex(2, 3).unwrap().sset;
    let (sk, incl) = skeleton(&d2, 1).unwrap();
    assert_eq!(sk.counts(), boundary(2, 3).unwrap().sset.counts());
    assert!(incl.is_injective());
}

#[test]
fn esd_of_interval() {
    let d1 = simplex(1, 5).unwrap().sset;
    let e = edgewise_subdivision(&d1).unwrap();
    assert_eq!(e.sset.dim(), 2);
    assert_eq!(counts_nd(&e.sset), vec![3, 2, 0]);
    let d0 = simplex(0, 5).unwrap().sset;
    assert_eq!(
        edgewise_subdivision(&d0).unwrap().sset.counts(),
        vec![1, 1, 1]
    );
    assert!(matches!(
        edgewise_subdivision_to(&d1, 3),
        Err(Error::DimensionBoundExceeded {
            needed: 7,
            bound: 5
        })
    ));
}

#[test]
fn esd_of_nerve_is_nerve_of_twisted_arrows() {
    for c in [poset(1), poset(2), cyclic_group(2)] {
        let v = esd_nerve_vs_twisted(&c, 2).unwrap();
        assert!(v.pass, "{}", v.detail);
    }
}

#[test]
fn realize_horn_spine_square() {
    let r = realize(&horn(2, 1, 2).unwrap().sset).unwrap();
    assert!(find_isomorphism(&r, &poset(2)).is_some());
    for n in 0..=4 {
        let r = realize(&spine(n, n.max(2)).unwrap().sset).unwrap();
        assert!(find_isomorphism(&r, &poset(n)).is_some(), "spine {n}");
    }
    let d1 = simplex(1, 2).unwrap().sset;
    let sq = realize(&product(&d1, &d1).unwrap().sset).unwrap();
    assert_eq!((sq.num_objects(), sq.num_morphisms()), (4, 9));
    assert!(find_isomorphism(&sq, &cat_product(&poset(1), &poset(1)).unwrap()).is_some());
}

#[test]
fn realize_rejects_cycles() {
    let z2 = nerve(&cyclic_group(2), 2).unwrap();
    assert!(matches!(
        realize(&z2.sset),
        Err(Error::CyclicOneSkeleton(_))
    ));
}

#[test]
fn realize_nerve_round_trip() {
    let c = cat_product(&poset(1), &poset(2)).unwrap();
    let n = nerve(&c, 2).unwrap();
    let r = realize(&n.sset).unwrap();
    assert!(find_isomorphism(&r, &c).is_some());
}

#[test]
fn normal_form_of_degenerate_cell() {
    let d1 = simplex(1, 3).unwrap();
    let x = d1.cell(3, &vec![0, 0, 1, 1]).unwrap();
    let nf = d1.sset.normal_form(3, x);
    assert_eq!(nf.core_level, 1);
    assert_eq!(d1.key(1, nf.core), &vec![0, 1]);
    assert_eq!(nf.word, vec![2, 0]);
}

#[test]
fn json_round_trip_and_rejection() {
    let x = horn(2, 1, 2).unwrap().sset;
    let back = SSet::from_json(&x.to_json()).unwrap();
    assert_eq!(back, x);
    let mut raw = x.to_raw();
    raw.d.get_mut(&1).unwrap()[3].swap(0, 1);
    assert!(SSet::from_raw(&raw).is_err());
    let m = MarkedSSet::sharp(x);
    assert_eq!(MarkedSSet::from_json(&m.to_json()).unwrap(), m);
}

fn interval_to_point(dim: usize) -> SimplexDiagram {
    let d1 = simplex(1, dim).unwrap().sset;
    let d0 = simplex(0, dim).unwrap().sset;
    let collapse =
        SSetMap::new(&d1, &d0, (0..=dim).map(|k| vec![0; d1.count(k)]).collect()).unwrap();
    SimplexDiagram::new(
        vec![MarkedSSet::flat(d1), MarkedSSet::flat(d0)],
        vec![collapse],
    )
    .unwrap()
}

#[test]
fn mapping_simplex_example() {
    let phi = interval_to_point(3);
    let m = mapping_simplex(&phi).unwrap();
    assert_eq!(m.keyed.sset.count(0), 3);
    assert_eq!(m.keyed.sset.nondegenerate(1).len(), 4);
    // an edge is marked when its φ-component is: the two degenerate edges
    // of Δ¹ over each of σ = 00 and σ = 01, plus the edge over σ = 11
    assert_eq!(m.marked.marked_edges().len(), 5);
}

#[test]
fn mapping_simplex_degenerate_cases() {
    let x = MarkedSSet::flat(horn(2, 1, 3).unwrap().sset);
    let m = mapping_simplex(&SimplexDiagram::constant(x.clone(), 0)).unwrap();
    assert_eq!(m.keyed.sset.counts(), x.sset.counts());
    let pt = MarkedSSet::flat(simplex(0, 3).unwrap().sset);
    for n in 1..=3 {
        let m = mapping_simplex(&SimplexDiagram::constant(pt.clone(), n)).unwrap();
        assert_eq!(m.keyed.sset.counts(), simplex(n, 3).unwrap().sset.counts());
    }
}

#[test]
fn relative_nerve_and_nu() {
    let phi = interval_to_point(3);
    let m = mapping_simplex(&phi).unwrap();
    let r = relative_nerve(&phi).unwrap();
    assert_eq!(r.keyed.sset.count(0), 3);
    let v = nu(&phi, &m, &r).unwrap();
    let mut hit = v.levels[0].clone();
    hit.sort_unstable();
    assert_eq!(hit, vec![0, 1, 2]);
    assert!(m.marked.preserved_by(&v, &r.marked));
    for i in 0..=1 {
        let f = fiber_compare(&phi, i).unwrap();
        assert!(f.pass, "{}", f.detail);
    }
}

#[test]
fn nu_over_a_point_is_identity() {
    let x = MarkedSSet::sharp(spine(2, 3).unwrap().sset);
    let phi = SimplexDiagram::constant(x, 0);
    let m = mapping_simplex(&phi).unwrap();
    let r = relative_nerve(&phi).unwrap();
    let v = nu(&phi, &m, &r).unwrap();
    assert!(m.marked.is_marked_iso(&v, &r.marked));
}

#[test]
fn decompositions_hold() {
    let v = mapping_simplex_decompositions(&interval_to_point(3)).unwrap();
    assert!(v.pass, "{}", v.detail);
    let pt = MarkedSSet::flat(simplex(0, 3).unwrap().sset);
    for n in 1..=2 {
        let v = mapping_simplex_decompositions(&SimplexDiagram::constant(pt.clone(), n)).unwrap();
        assert!(v.pass, "{}", v.detail);
    }
    let d1 = simplex(1, 3).unwrap();
    let d2 = simplex(2, 3).unwrap();
    let incl = SSetMap::from_keys(&d1, &d2, |_, s| s.iter().map(|&v| [0, 2][v]).collect()).unwrap();
    let sq = MarkedSSet::sharp(d2.sset.clone());
    let phi = SimplexDiagram::new(
        vec![MarkedSSet::sharp(d1.sset.clone()), sq.clone(), sq],
        vec![incl, SSetMap::identity(&d2.sset)],
    )
    .unwrap();
    let v = mapping_simplex_decompositions(&phi).unwrap();
    assert!(v.pass, "{}", v.detail);
}

#[test]
fn decompositions_need_positive_n() {
    let pt = MarkedSSet::flat(simplex(0, 2).unwrap().sset);
    assert!(mapping_simplex_decompositions(&SimplexDiagram::constant(pt, 0)).is_err());
}

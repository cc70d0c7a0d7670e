use super::*;
use crate::fincat::{cyclic_group, poset, product as cat_product, Functor};
use crate::groth::FibCat;
use crate::sset::nerve_map;

fn z2() -> TwoCat {
    TwoCat::delooping(&[vec![0, 1], vec![1, 0]]).unwrap()
}

/// `Z/m` as a one-object locally discrete 2-category, and the same with a
/// `Z/2` band of 2-cells on every 1-cell.
fn group_pair(m: usize) -> (TwoCat, TwoCat) {
    let g = cyclic_group(m);
    (
        TwoCat::from_category(&g).unwrap(),
        TwoCat::banded(&g, 1, 2).unwrap(),
    )
}

/// The functor `group_pair(m).0 → group_pair(m).1` which is the identity on
/// 1-cells, with `η_{f,g}` labelled by `label(f, g)`.
fn labelled(m: usize, label: impl Fn(usize, usize) -> usize) -> (TwoCat, TwoCat, NormalOplax) {
    let (c, d) = group_pair(m);
    let h = d.hom(0, 0);
    let homs = vec![vec![Functor::new(
        (0..m).collect(),
        (0..m).map(|f| h.id(f)).collect(),
    )]];
    let f = NormalOplax::new(&c, vec![0], homs, |_, _, _, f, g| {
        let gf = (f + g) % m;
        // the 2-cell (gf, 0 ⇒ 0, a) of the band
        gf * 2 + label(f, g)
    });
    (c, d, f)
}

#[test]
fn delooping_is_two_one() {
    let b = z2();
    assert!(b.is_two_one());
    assert_eq!(b.hom(0, 0).num_morphisms(), 2);
}

#[test]
fn nonabelian_delooping_is_rejected() {
    // S₃ via its multiplication table
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [1, 0, 2],
        [0, 2, 1],
        [2, 1, 0],
        [1, 2, 0],
        [2, 0, 1],
    ];
    let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    let mul: Vec<Vec<usize>> = perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| idx([a[b[0]], a[b[1]], a[b[2]]]))
                .collect()
        })
        .collect();
    assert!(matches!(
        TwoCat::delooping(&mul),
        Err(Error::EnrichedAssocViolation(_))
    ));
}

#[test]
fn banded_cells_are_indexed_as_documented() {
    let b = TwoCat::banded(&poset(1), 2, 2).unwrap();
    assert!(b.is_two_one());
    let h = b.hom(0, 1);
    assert_eq!(h.num_objects(), 2);
    assert_eq!(h.num_morphisms(), 8);
    // (f, u ⇒ v, a) sits at ((f·m1 + u)·m1 + v)·m2 + a
    assert_eq!(h.src(3), 0);
    assert_eq!(h.tgt(3), 1);
    assert_eq!(h.id(1), 6);
}

#[test]
fn json_round_trip() {
    for b in [
        z2(),
        TwoCat::walking_2_iso().unwrap(),
        TwoCat::banded(&poset(1), 2, 1).unwrap(),
    ] {
        assert_eq!(TwoCat::from_json(&b.to_json()).unwrap(), b);
    }
    let mut raw = z2().to_raw();
    raw.compose[0].two_cells[1][2] = raw.compose[0].two_cells[0][2].clone();
    assert!(matches!(
        validate_two_cat(&raw),
        Err(Error::EnrichedAssocViolation(_))
    ));
}

#[test]
fn z2_levels() {
    let n = duskin_nerve(&z2(), 3).unwrap();
    assert_eq!(n.sset.counts(), vec![1, 1, 2, 8]);
}

/// 2-cochains on the single 2-cell pattern: `φ₀₁₂ + φ₀₁₃ = φ₀₂₃ + φ₁₂₃`.
fn z2_level_oracle(k: usize) -> usize {
    let triples: Vec<[usize; 3]> = (0..=k)
        .flat_map(|l| (0..l).flat_map(move |j| (0..j).map(move |i| [i, j, l])))
        .collect();
    let pos = |t: [usize; 3]| triples.iter().position(|&s| s == t).unwrap();
    (0u32..(1 << triples.len()))
        .filter(|bits| {
            let v = |t| (bits >> pos(t)) & 1;
            (0..=k).all(|m| {
                (0..m).all(|l| {
                    (0..l).all(|j| {
                        (0..j).all(|i| v([i, j, l]) ^ v([i, l, m]) == v([j, l, m]) ^ v([i, j, m]))
                    })
                })
            })
        })
        .count()
}

#[test]
fn z2_levels_match_cochain_count() {
    let n = duskin_nerve(&z2(), 5).unwrap();
    for k in 0..=5 {
        assert_eq!(n.sset.count(k), z2_level_oracle(k), "level {k}");
    }
}

#[test]
fn nerve_of_a_category() {
    for c in [
        poset(2),
        cyclic_group(3),
        cat_product(&poset(1), &poset(1)).unwrap(),
    ] {
        let v = duskin_vs_nerve(&c, 4).unwrap();
        assert!(v.pass, "{}", v.detail);
    }
}

#[test]
fn walking_2_iso_level_two() {
    let b = TwoCat::walking_2_iso().unwrap();
    let n = duskin_nerve(&b, 2).unwrap();
    let over = |xs: [usize; 3]| n.keys[2].iter().filter(|c| c.objects == xs).count();
    assert_eq!(over([0, 0, 1]), b.hom(0, 1).num_morphisms());
    assert_eq!(over([0, 1, 1]), b.hom(0, 1).num_morphisms());
}

#[test]
fn three_coskeletal() {
    for b in [
        z2(),
        TwoCat::from_category(&poset(2)).unwrap(),
        TwoCat::banded(&poset(1), 1, 2).unwrap(),
        TwoCat::walking_2_iso().unwrap(),
    ] {
        let v = check_3_coskeletal(&b, 5).unwrap();
        assert!(v.pass, "{}", v.detail);
    }
    let n = duskin_nerve(&z2(), 5).unwrap();
    let report = crate::sset::coskeletal_report(&n.sset, 3).unwrap();
    assert!(report
        .iter()
        .all(|s| s.spheres > 0 && s.unfilled == 0 && s.multiply_filled == 0));
    assert!(matches!(
        check_3_coskeletal(&z2(), 4),
        Err(Error::DimensionBoundExceeded { .. })
    ));
}

#[test]
fn not_two_coskeletal() {
    let n = duskin_nerve(&z2(), 4).unwrap();
    assert!(!crate::sset::is_k_coskeletal(&n.sset, 2).unwrap());
}

#[test]
fn strict_functor_is_valid_pseudo() {
    let b = TwoCat::banded(&poset(1), 2, 2).unwrap();
    let id = NormalOplax::identity(&b);
    validate_oplax(&b, &b, &id).unwrap();
    assert!(id.is_pseudo(&b, &b));
}

#[test]
fn cocycle_violation_is_named() {
    let (c, d, f) = labelled(3, |f, g| usize::from((f, g) == (1, 1)));
    match validate_oplax(&c, &d, &f) {
        Err(Error::CoherenceViolation { law, .. }) => assert_eq!(law, "vi"),
        other => panic!("expected a cocycle violation, got {other:?}"),
    }
}

#[test]
fn unit_violations_are_named() {
    let (c, d, mut f) = labelled(2, |_, _| 0);
    f.eta[0][0][0][1] = 3;
    assert!(
        matches!(validate_oplax(&c, &d, &f), Err(Error::CoherenceViolation { law, .. }) if law == "iv")
    );
    let (c, d, mut f) = labelled(2, |_, _| 0);
    f.homs[0][0].obj[0] = 1;
    assert!(
        matches!(validate_oplax(&c, &d, &f), Err(Error::CoherenceViolation { law, .. }) if law == "i")
    );
}

#[test]
fn identity_encodes_to_identity() {
    let b = TwoCat::banded(&poset(1), 2, 1).unwrap();
    let n = duskin_nerve(&b, 3).unwrap();
    let m = duskin_encode(&b, &b, &NormalOplax::identity(&b), &n, &n).unwrap();
    assert_eq!(m, crate::sset::SSetMap::identity(&n.sset));
}

#[test]
fn strict_functor_encodes_to_its_nerve() {
    let (c, d) = (poset(2), poset(1));
    // collapse 0, 1 ↦ 0 and 2 ↦ 1
    let obj = vec![0, 0, 1];
    let mor: Vec<usize> = c
        .morphisms()
        .map(|m| d.hom(obj[c.src(m)], obj[c.tgt(m)])[0])
        .collect();
    let func = Functor::new(obj, mor);
    let f = NormalOplax::from_functor(&c, &d, &func);
    let (bc, bd) = (
        TwoCat::from_category(&c).unwrap(),
        TwoCat::from_category(&d).unwrap(),
    );
    let (nc, nd) = (duskin_nerve(&bc, 3).unwrap(), duskin_nerve(&bd, 3).unwrap());
    let m = duskin_encode(&bc, &bd, &f, &nc, &nd).unwrap();
    let (pc, pd) = (
        crate::sset::nerve(&c, 3).unwrap(),
        crate::sset::nerve(&d, 3).unwrap(),
    );
    let expected = nerve_map(&func, &pc, &pd).unwrap();
    let to_chain = |b: &FinCat, cell: &DuskinCell| {
        let fs: Vec<usize> = (1..cell.objects.len())
            .map(|j| b.hom(cell.objects[j - 1], cell.objects[j])[cell.cell(j - 1, j)])
            .collect();
        (cell.objects[0], fs)
    };
    for k in 0..=3 {
        for (x, cell) in nc.keys[k].iter().enumerate() {
            let here = pc.cell(k, &to_chain(&c, cell)).unwrap();
            let there = pd.cell(k, &to_chain(&d, nd.key(k, m.apply(k, x)))).unwrap();
            assert_eq!(expected.apply(k, here), there);
        }
    }
}

#[test]
fn decode_recovers_eta() {
    let (c, d, f) = labelled(2, |f, g| usize::from((f, g) == (1, 1)));
    validate_oplax(&c, &d, &f).unwrap();
    assert!(f.is_pseudo(&c, &d));
    let (nc, nd) = (duskin_nerve(&c, 3).unwrap(), duskin_nerve(&d, 3).unwrap());
    let m = duskin_encode(&c, &d, &f, &nc, &nd).unwrap();
    let back = duskin_decode(&c, &d, &m, &nc, &nd).unwrap();
    assert_eq!(back, f);
    assert_eq!(back.eta(&c, 0, 0, 0, 1, 1), 1);
    assert_eq!(duskin_encode(&c, &d, &back, &nc, &nd).unwrap(), m);
    let strict = labelled(2, |_, _| 0).2;
    assert_ne!(duskin_encode(&c, &d, &strict, &nc, &nd).unwrap(), m);
}

#[test]
fn decode_rejects_mismatched_nerves() {
    let b = z2();
    let (n3, n2) = (duskin_nerve(&b, 3).unwrap(), duskin_nerve(&b, 2).unwrap());
    let id = crate::sset::SSetMap::identity(&n3.sset);
    assert!(matches!(
        duskin_decode(&b, &b, &id, &n3, &n2),
        Err(Error::DomainMismatch(_))
    ));
}

#[test]
fn hom_posets() {
    let p = hom_poset(1, 0, 1).unwrap();
    assert_eq!((p.num_objects(), p.num_morphisms()), (1, 1));
    let p = hom_poset(2, 0, 2).unwrap();
    assert!(crate::fincat::find_isomorphism(&p, &poset(1)).is_some());
    let p = hom_poset(3, 0, 3).unwrap();
    assert_eq!(p.num_objects(), 4);
    assert_eq!(hom_poset_subsets(1, 3), vec![0b1010, 0b1110]);
    assert!(hom_poset(2, 2, 1).is_err());
}

#[test]
fn cubes() {
    for (n, i, j) in [
        (1, 0, 1),
        (2, 0, 2),
        (3, 0, 3),
        (4, 1, 4),
        (4, 0, 4),
        (2, 1, 1),
    ] {
        let v = cube_check(n, i, j, 3).unwrap();
        assert!(v.pass, "{}", v.detail);
    }
}

#[test]
fn coherent_nerve_matches() {
    let v = coherent_nerve_agreement(&z2(), 4).unwrap();
    assert!(v.pass, "{}", v.detail);
    for b in [
        TwoCat::walking_2_iso().unwrap(),
        TwoCat::banded(&poset(1), 2, 2).unwrap(),
    ] {
        let v = coherent_nerve_agreement(&b, 3).unwrap();
        assert!(v.pass, "{}", v.detail);
    }
    assert!(coherent_nerve_agreement(&z2(), 5).is_err());
}

fn square_over_interval() -> FibCat {
    let total = cat_product(&poset(1), &poset(1)).unwrap();
    let base = poset(1);
    let obj: Vec<usize> = (0..4).map(|o| o % 2).collect();
    let mor = total
        .morphisms()
        .map(|m| base.hom(obj[total.src(m)], obj[total.tgt(m)])[0])
        .collect();
    FibCat::new(total, base, Functor::new(obj, mor)).unwrap()
}

fn arrow(p: &FibCat, a: usize, b: usize) -> usize {
    p.total.hom(a, b)[0]
}

#[test]
fn relative_straightening() {
    let p = square_over_interval();
    let mut w: Vec<usize> = p.total.objects().map(|x| p.total.id(x)).collect();
    w.extend(
        p.total
            .morphisms()
            .filter(|&m| p.cartesian[m] && !p.total.is_identity(m)),
    );
    let r = relative_fibration_straighten(&p, &w).unwrap();
    assert!(r
        .marked
        .iter()
        .zip(&r.pseudo.values)
        .all(|(m, v)| m.len() == v.num_objects()));
    let all: Vec<usize> = p.total.morphisms().collect();
    let r = relative_fibration_straighten(&p, &all).unwrap();
    for c in 0..2 {
        let (v, m) = r.value(c);
        assert_eq!(m.len(), v.num_morphisms());
    }
}

#[test]
fn relative_straightening_rejects() {
    let p = square_over_interval();
    // objects are (a, b) at index 2a + b; the fiber over b is {(0, b), (1, b)}
    let mut w: Vec<usize> = p.total.objects().map(|x| p.total.id(x)).collect();
    w.extend([
        arrow(&p, 0, 1),
        arrow(&p, 2, 3),
        arrow(&p, 1, 3),
        arrow(&p, 0, 3),
    ]);
    match relative_fibration_straighten(&p, &w) {
        Err(Error::NotRelative(why)) => assert!(why.contains("pullback"), "{why}"),
        other => panic!("expected NotRelative, got {other:?}"),
    }
    let ids: Vec<usize> = p.total.objects().map(|x| p.total.id(x)).collect();
    assert!(matches!(
        relative_fibration_straighten(&p, &ids),
        Err(Error::NotRelative(_))
    ));
}

use proptest::prelude::*;

use twistfib::duskin::duskin_vs_nerve;
use twistfib::fincat::{
    compatible_families, compose_functors, find_isomorphism, identity_functor, opposite, poset,
};
use twistfib::gen::{random_category, random_functor, random_shape_diagram, rng};
use twistfib::groth::{cart_groth, cocart_groth, is_groth_fibration, is_groth_opfibration};
use twistfib::par::{map_with, Execution};
use twistfib::sset::nerve;
use twistfib::twisted::twisted_arrow;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Every assignment in the product of `allowed`, filtered by the constraints.
fn brute_families(allowed: &[Vec<usize>], cons: &Constraints) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for a in allowed {
        out = out
            .into_iter()
            .flat_map(|pre| {
                a.iter().map(move |&x| {
                    let mut v = pre.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out.retain(|fam| cons.iter().all(|(i, j, m)| m[fam[*i]] == fam[*j]));
    out
}

type Constraints = Vec<(usize, usize, Vec<usize>)>;

fn family_instance() -> impl Strategy<Value = (Vec<Vec<usize>>, Constraints)> {
    (1usize..5, 1usize..4).prop_flat_map(|(n, size)| {
        let allowed = proptest::collection::vec(
            proptest::sample::subsequence((0..size).collect::<Vec<_>>(), 0..=size),
            n,
        );
        let cons =
            proptest::collection::vec((0..n, 0..n, proptest::collection::vec(0..size, size)), 0..6);
        (allowed, cons)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_categories_satisfy_the_laws(seed in any::<u64>()) {
        let c = random_category(&mut rng(seed), 4);
        prop_assert!(c.law_violations().is_empty());
        prop_assert_eq!(opposite(&opposite(&c)), c);
    }

    #[test]
    fn functor_composition_is_associative_and_unital(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c, d) = (
            random_category(&mut r, 2),
            random_category(&mut r, 2),
            random_category(&mut r, 2),
            random_category(&mut r, 2),
        );
        let f = random_functor(&mut r, &a, &b).unwrap();
        let g = random_functor(&mut r, &b, &c).unwrap();
        let h = random_functor(&mut r, &c, &d).unwrap();
        prop_assert_eq!(
            compose_functors(&h, &compose_functors(&g, &f)),
            compose_functors(&compose_functors(&h, &g), &f)
        );
        prop_assert_eq!(compose_functors(&f, &identity_functor(&a)), f.clone());
        prop_assert_eq!(compose_functors(&identity_functor(&b), &f), f);
    }

    #[test]
    fn twisted_arrows_count_morphisms_and_ignore_opposites(seed in any::<u64>()) {
        let c = random_category(&mut rng(seed), 3);
        let tw = twisted_arrow(&c).unwrap();
        prop_assert_eq!(tw.cat.num_objects(), c.num_morphisms());
        let tw_op = twisted_arrow(&opposite(&c)).unwrap();
        prop_assert!(find_isomorphism(&tw.cat, &tw_op.cat).is_some());
    }

    #[test]
    fn compatible_families_match_brute_force((allowed, cons) in family_instance()) {
        let borrowed: Vec<(usize, usize, &[usize])> =
            cons.iter().map(|(i, j, m)| (*i, *j, m.as_slice())).collect();
        let mut fast = compatible_families(&allowed, &borrowed).unwrap();
        let mut slow = brute_families(&allowed, &cons);
        fast.sort();
        slow.sort();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn grothendieck_constructions_are_fibrations(seed in any::<u64>(), s in 0usize..3) {
        let mut r = rng(seed);
        let f = random_shape_diagram(&mut r, s, true, 2);
        prop_assert!(is_groth_fibration(&cart_groth(&f).unwrap().fib));
        let g = random_shape_diagram(&mut r, s, false, 2);
        prop_assert!(is_groth_opfibration(&cocart_groth(&g).unwrap().fib));
    }

    #[test]
    fn duskin_nerve_of_a_category_is_its_nerve(seed in any::<u64>()) {
        let c = random_category(&mut rng(seed), 3);
        let v = duskin_vs_nerve(&c, 3).unwrap();
        prop_assert!(v.pass, "{}", v.detail);
    }

    #[test]
    fn parallel_map_preserves_order(xs in proptest::collection::vec(any::<u32>(), 0..200)) {
        let f = |x: &u32| x.wrapping_mul(2_654_435_761);
        prop_assert_eq!(
            map_with(Execution::Parallel, &xs, f),
            map_with(Execution::Sequential, &xs, f)
        );
    }
}

#[test]
fn nerve_of_a_poset_counts_monotone_maps() {
    for n in 0..=3 {
        let nv = nerve(&poset(n), 4).unwrap();
        for k in 0..=4 {
            assert_eq!(
                nv.sset.count(k),
                binomial(n + k + 1, k + 1),
                "[{n}] level {k}"
            );
        }
    }
}

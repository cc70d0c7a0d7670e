//! One line per acceptance criterion, each under a pinned wall-clock limit.

use std::time::{Duration, Instant};

use twistfib::duskin::{coherent_nerve_agreement, duskin_nerve, TwoCat};
use twistfib::fincat::{default_probes, find_isomorphism, poset, preorder, CatValuedDiagram};
use twistfib::gen::shape;
use twistfib::groth::{cocart_groth, lax_colimit_check};
use twistfib::suite::{run, SuiteSpec};
use twistfib::twisted::twisted_arrow;

const SEED: u64 = 20_261_016;

type Outcome = Result<String, String>;

type Criterion = (&'static str, u64, Box<dyn Fn() -> Outcome>);

/// Run `id` with `reps` cases and demand every case passes.
fn suite(id: &str, reps: usize, dim_bound: Option<usize>) -> Outcome {
    let mut spec = SuiteSpec::new(id, SEED).map_err(|e| e.to_string())?;
    spec.reps = reps;
    if let Some(d) = dim_bound {
        spec.bounds.dim_bound = d;
    }
    let reports = run(&spec).map_err(|e| e.to_string())?;
    if reports.len() < reps {
        return Err(format!("{id}: only {} cases ran", reports.len()));
    }
    match reports.iter().find(|r| !r.pass) {
        Some(r) => Err(format!("{id} case {}: {}", r.replay.index, r.detail)),
        None => Ok(format!("{id} {reps}/{reps}")),
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let mut ok = Vec::new();
    for p in parts {
        ok.push(p?);
    }
    Ok(ok.join(", "))
}

fn twisted_arrow_structure() -> Outcome {
    for n in 0..=5 {
        let tw = twisted_arrow(&poset(n)).map_err(|e| e.to_string())?;
        let got = tw.cat.num_objects();
        if got != (n + 1) * (n + 2) / 2 {
            return Err(format!("Tw([{n}]) has {got} objects"));
        }
        let pairs: Vec<(usize, usize)> =
            (0..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect();
        let intervals = preorder(pairs.iter().map(|p| format!("{p:?}")).collect(), |x, y| {
            let ((i, j), (k, l)) = (pairs[x], pairs[y]);
            i <= k && k <= l && l <= j
        })
        .map_err(|e| e.to_string())?;
        if find_isomorphism(&tw.outer_to_inner(), &intervals).is_none() {
            return Err(format!("n = {n}: not the interval order"));
        }
    }
    suite("ex-2.5", 6, None)
}

fn lax_colimits() -> Outcome {
    for s in 0..3 {
        let f = CatValuedDiagram::constant(shape(s), poset(0));
        let v = lax_colimit_check(&f, &default_probes()).map_err(|e| e.to_string())?;
        if !v.pass {
            return Err(format!("constant point: {}", v.detail));
        }
        let total = cocart_groth(&f).map_err(|e| e.to_string())?.fib.total;
        if find_isomorphism(&total, &shape(s)).is_none() {
            return Err("constant point does not reproduce the base".into());
        }
    }
    suite("thm-7.4", 30, None)
}

fn duskin() -> Outcome {
    let z2 = TwoCat::delooping(&[vec![0, 1], vec![1, 0]]).map_err(|e| e.to_string())?;
    let counts = duskin_nerve(&z2, 3)
        .map_err(|e| e.to_string())?
        .sset
        .counts();
    if counts != [1, 1, 2, 8] {
        return Err(format!("Z/2 levels {counts:?}"));
    }
    let v = coherent_nerve_agreement(&z2, 4).map_err(|e| e.to_string())?;
    if !v.pass {
        return Err(format!("Z/2 coherent nerve: {}", v.detail));
    }
    all(vec![
        suite("prop-A.12", 10, None),
        suite("thm-A.13", 10, None),
        suite("coherent-nerve", 10, Some(3)),
    ])
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (
            "1 twisted arrow structure",
            1,
            Box::new(twisted_arrow_structure),
        ),
        (
            "2 naturals via ends",
            30,
            Box::new(|| suite("prop-5.1", 100, None)),
        ),
        (
            "3 free fibration adjunction",
            60,
            Box::new(|| suite("thm-4.1", 50, None)),
        ),
        (
            "4 sections as oplax limits",
            60,
            Box::new(|| suite("prop-7.1", 50, None)),
        ),
        ("5 lax colimits", 120, Box::new(lax_colimits)),
        (
            "6 phi-fibration and exponentials",
            120,
            Box::new(|| {
                all(vec![
                    suite("prop-7.2", 20, None),
                    suite("prop-8.2", 20, None),
                ])
            }),
        ),
        (
            "7 mapping simplex",
            60,
            Box::new(|| {
                all(vec![
                    suite("prop-3.8", 20, None),
                    suite("prop-3.3", 20, None),
                ])
            }),
        ),
        (
            "8 realizations",
            30,
            Box::new(|| {
                all(vec![
                    suite("lemma-A.4", 12, None),
                    suite("prop-A.5", 15, None),
                ])
            }),
        ),
        ("9 Duskin nerve", 120, Box::new(duskin)),
        (
            "10 collages and compositions",
            120,
            Box::new(|| {
                all(vec![
                    suite("collage", 10, None),
                    suite("lemma-9.2", 10, None),
                    suite("prop-9.4", 12, None),
                    suite("prop-9.6", 10, None),
                ])
            }),
        ),
        (
            "11 esd against Tw",
            30,
            Box::new(|| suite("esd-tw", 30, None)),
        ),
    ];
    let mut failed = Vec::new();
    for (name, limit, check) in &criteria {
        let limit = Duration::from_secs(*limit);
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let verdict = match outcome {
            Ok(_) if took > limit => Err(format!("took {took:.2?}")),
            o => o,
        };
        match verdict {
            Ok(detail) => println!("PASS criterion {name} [{took:.2?} < {limit:?}]: {detail}"),
            Err(why) => {
                println!("FAIL criterion {name} [{took:.2?}, limit {limit:?}]: {why}");
                failed.push(*name);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed.len(),
        criteria.len()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}

use serde_json::json;

use crate::caps::caps;
use crate::error::{Error, Result};
use crate::fincat::{FinCat, Functor, Mor, Ob};
use crate::verdict::Verdict;

/// Every arrow into `p(e)` has exactly one lift with target `e`.
pub fn is_discrete_fibration(total: &FinCat, base: &FinCat, proj: &Functor) -> bool {
    total.objects().all(|e| {
        base.incoming(proj.obj[e]).iter().all(|&g| {
            total
                .incoming(e)
                .iter()
                .filter(|&&m| proj.mor[m] == g)
                .count()
                == 1
        })
    })
}

/// A set-valued presheaf: `act[m]` maps `P(tgt m)` to `P(src m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presheaf {
    pub sizes: Vec<usize>,
    pub act: Vec<Vec<usize>>,
}

impl Presheaf {
    pub fn is_valid(&self, c: &FinCat) -> bool {
        c.morphisms().all(|m| {
            let a = &self.act[m];
            a.len() == self.sizes[c.tgt(m)] && a.iter().all(|&v| v < self.sizes[c.src(m)])
        }) && c.objects().all(|x| {
            let a = &self.act[c.id(x)];
            a.iter().enumerate().all(|(i, &v)| i == v)
        }) && c.morphisms().all(|f| {
            c.out_of(c.tgt(f)).iter().all(|&g| {
                let h = c.compose(g, f);
                (0..self.sizes[c.tgt(g)]).all(|v| self.act[h][v] == self.act[f][self.act[g][v]])
            })
        })
    }
}

/// All presheaves on `c` with every value of size at most `max`.
pub fn presheaves(c: &FinCat, max: usize) -> Result<Vec<Presheaf>> {
    let cap = caps().max_enumeration;
    let n = c.num_objects();
    let mut out = Vec::new();
    let mut sizes = vec![0usize; n];
    loop {
        let mut act: Vec<Vec<usize>> = c
            .morphisms()
            .map(|m| {
                if c.is_identity(m) {
                    (0..sizes[c.src(m)]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let free: Vec<Mor> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
        fill(c, &sizes, &free, 0, &mut act, &mut out, cap)?;
        let mut i = 0;
        while i < n {
            sizes[i] += 1;
            if sizes[i] <= max {
                break;
            }
            sizes[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Ok(out)
}

fn fill(
    c: &FinCat,
    sizes: &[usize],
    free: &[Mor],
    k: usize,
    act: &mut Vec<Vec<usize>>,
    out: &mut Vec<Presheaf>,
    cap: usize,
) -> Result<()> {
    if k == free.len() {
        let p = Presheaf {
            sizes: sizes.to_vec(),
            act: act.clone(),
        };
        if p.is_valid(c) {
            out.push(p);
            crate::caps::check("presheaves", out.len(), cap)?;
        }
        return Ok(());
    }
    let m = free[k];
    let (from, to) = (sizes[c.tgt(m)], sizes[c.src(m)]);
    if from > 0 && to == 0 {
        return Ok(());
    }
    let mut f = vec![0usize; from];
    loop {
        act[m] = f.clone();
        fill(c, sizes, free, k + 1, act, out, cap)?;
        let mut i = 0;
        while i < from {
            f[i] += 1;
            if f[i] < to {
                break;
            }
            f[i] = 0;
            i += 1;
        }
        if i == from {
            break;
        }
    }
    Ok(())
}

/// The presheaf of fibers of a discrete fibration; fiber elements are the
/// objects over each base object in index order.
pub fn presheaf_of(total: &FinCat, base: &FinCat, proj: &Functor) -> Result<Presheaf> {
    if !is_discrete_fibration(total, base, proj) {
        return Err(Error::NotAFibration("not a discrete fibration".into()));
    }
    let fibers: Vec<Vec<Ob>> = base
        .objects()
        .map(|c| total.objects().filter(|&e| proj.obj[e] == c).collect())
        .collect();
    let pos = |e: Ob| {
        fibers[proj.obj[e]]
            .iter()
            .position(|&x| x == e)
            .expect("in fiber")
    };
    let act = base
        .morphisms()
        .map(|g| {
            fibers[base.tgt(g)]
                .iter()
                .map(|&e| {
                    let m = *total
                        .incoming(e)
                        .iter()
                        .find(|&&m| proj.mor[m] == g)
                        .expect("unique lift");
                    pos(total.src(m))
                })
                .collect()
        })
        .collect();
    Ok(Presheaf {
        sizes: fibers.iter().map(Vec::len).collect(),
        act,
    })
}

/// Natural transformations `X ⇒ Y` whose components satisfy `allowed(c, x, y)`.
fn presheaf_maps(
    c: &FinCat,
    x: &Presheaf,
    y: &Presheaf,
    allowed: &dyn Fn(Ob, usize, usize) -> bool,
) -> Vec<Vec<Vec<usize>>> {
    let slots: Vec<(Ob, usize)> = c
        .objects()
        .flat_map(|o| (0..x.sizes[o]).map(move |v| (o, v)))
        .collect();
    let mut comps: Vec<Vec<usize>> = c.objects().map(|o| vec![usize::MAX; x.sizes[o]]).collect();
    let mut out = Vec::new();
    fn go(
        c: &FinCat,
        x: &Presheaf,
        y: &Presheaf,
        allowed: &dyn Fn(Ob, usize, usize) -> bool,
        slots: &[(Ob, usize)],
        k: usize,
        comps: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if k == slots.len() {
            let natural = c.morphisms().all(|m| {
                (0..x.sizes[c.tgt(m)])
                    .all(|v| comps[c.src(m)][x.act[m][v]] == y.act[m][comps[c.tgt(m)][v]])
            });
            if natural {
                out.push(comps.clone());
            }
            return;
        }
        let (o, v) = slots[k];
        for w in 0..y.sizes[o] {
            if allowed(o, v, w) {
                comps[o][v] = w;
                go(c, x, y, allowed, slots, k + 1, comps, out);
            }
        }
        comps[o][v] = usize::MAX;
    }
    go(c, x, y, allowed, &slots, 0, &mut comps, &mut out);
    out
}

/// Composition along a discrete fibration `p: K → C`: a presheaf `X` on `K`
/// becomes `c ↦ ⊔_{p(k) = c} X(k)`, with its map to the presheaf of `p`.
struct Pushed {
    q: Presheaf,
    /// `tau[c][i]`: position over `c` of the `K`-object carrying element `i`.
    tau: Vec<Vec<usize>>,
}

fn push_forward(k: &FinCat, c: &FinCat, p: &Functor, x: &Presheaf) -> Pushed {
    let fibers: Vec<Vec<Ob>> = c
        .objects()
        .map(|o| k.objects().filter(|&e| p.obj[e] == o).collect())
        .collect();
    let elems: Vec<Vec<(Ob, usize)>> = fibers
        .iter()
        .map(|f| {
            f.iter()
                .flat_map(|&e| (0..x.sizes[e]).map(move |v| (e, v)))
                .collect()
        })
        .collect();
    let pos = |o: Ob, key: (Ob, usize)| elems[o].iter().position(|&k2| k2 == key).expect("element");
    let act = c
        .morphisms()
        .map(|g| {
            elems[c.tgt(g)]
                .iter()
                .map(|&(e, v)| {
                    let m = *k
                        .incoming(e)
                        .iter()
                        .find(|&&m| p.mor[m] == g)
                        .expect("unique lift");
                    pos(c.src(g), (k.src(m), x.act[m][v]))
                })
                .collect()
        })
        .collect();
    let tau = elems
        .iter()
        .enumerate()
        .map(|(o, es)| {
            es.iter()
                .map(|&(e, _)| fibers[o].iter().position(|&f| f == e).unwrap())
                .collect()
        })
        .collect();
    Pushed {
        q: Presheaf {
            sizes: elems.iter().map(Vec::len).collect(),
            act,
        },
        tau,
    }
}

/// Composition with a discrete fibration `p: K → C` is an equivalence from
/// discrete fibrations over `K` to discrete fibrations over `C` with a map
/// to `p`, checked on all presheaves with values of size at most `max`.
pub fn dfib_slice_equiv(k: &FinCat, c: &FinCat, p: &Functor, max: usize) -> Result<Verdict> {
    let pp = presheaf_of(k, c, p)?;
    let lhs = presheaves(k, max)?;
    let pushed: Vec<Pushed> = lhs.iter().map(|x| push_forward(k, c, p, x)).collect();
    // full faithfulness: maps over K against maps over the presheaf of p
    for (i, x) in lhs.iter().enumerate() {
        for (j, y) in lhs.iter().enumerate() {
            let over_k = presheaf_maps(k, x, y, &|_, _, _| true).len();
            let (px, py) = (&pushed[i], &pushed[j]);
            let over_c =
                presheaf_maps(c, &px.q, &py.q, &|o, v, w| px.tau[o][v] == py.tau[o][w]).len();
            if over_k != over_c {
                return Ok(Verdict::fail(
                    "composition with p is fully faithful",
                    json!({ "source": i, "target": j, "maps_over_k": over_k, "maps_over_c": over_c }),
                ));
            }
        }
    }
    // essential surjectivity: every presheaf over the presheaf of p with
    // fibers of size at most `max` is isomorphic to a pushed one
    let fiber_max = pp.sizes.iter().copied().max().unwrap_or(0);
    let mut checked = 0usize;
    for q in presheaves(c, max * fiber_max)? {
        let maps = presheaf_maps(c, &q, &pp, &|_, _, _| true);
        for tau in maps {
            let small = c.objects().all(|o| {
                (0..pp.sizes[o]).all(|t| tau[o].iter().filter(|&&w| w == t).count() <= max)
            });
            if !small {
                continue;
            }
            checked += 1;
            let found = pushed.iter().any(|px| {
                px.q.sizes == q.sizes
                    && presheaf_maps(c, &q, &px.q, &|o, v, w| tau[o][v] == px.tau[o][w])
                        .iter()
                        .any(|s| s.iter().all(|comp| is_bijection(comp)))
            });
            if !found {
                return Ok(Verdict::fail(
                    "composition with p is essentially surjective",
                    json!({ "sizes": q.sizes, "tau": tau }),
                ));
            }
        }
    }
    Ok(Verdict::pass(format!(
        "{} presheaves over K, {checked} objects over p, all matched",
        lhs.len()
    )))
}

fn is_bijection(f: &[usize]) -> bool {
    let mut seen = vec![false; f.len()];
    f.iter()
        .all(|&v| v < f.len() && !std::mem::replace(&mut seen[v], true))
}

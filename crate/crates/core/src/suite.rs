//! Verification suites keyed to the statements they exercise.
//!
//! A suite draws `reps` cases.  Case `i` has its own seed, drawn from the
//! suite seed, and its instance is a pure function of `(suite, i, seed,
//! bounds)`; the [`Witness`] carried by every report replays exactly that
//! case.  Reports are sorted by the hash of the instance JSON.

use std::time::Instant;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::caps::{caps, check};
use crate::duskin::{
    check_3_coskeletal, coherent_nerve_agreement, cube_check, duskin_decode, duskin_encode,
    duskin_nerve, relative_fibration_straighten, validate_oplax, NormalOplax,
};
use crate::error::{Error, Result};
use crate::fincat::{
    cyclic_group, default_probes, discrete, find_isomorphism, opposite, poset, preorder, product,
    walking_iso, CatValuedDiagram, FinCat, Functor,
};
use crate::gen::{
    self, cat_json, diagram_json, functor_json, random_category, random_fibration, random_functor,
    random_oplax, random_shape_diagram, random_simplex_diagram, random_small_shape_diagram,
    random_two_one, shape, shape_name, Rng8,
};
use crate::groth::{
    adjunction_check, cocart_groth, collage_pushout_check, dfib_slice_equiv, fiber_formula_check,
    fiber_product, free_of_point_check, free_product_check, lax_colimit_check, oplax_colimit_check,
    phi_universal_check, sections_vs_oplax_limit, two_of_three_cart, undercat_fiber_check,
};
use crate::par::{self, Execution};
use crate::sset::{
    esd_nerve_vs_twisted, fiber_compare, horn, mapping_simplex_decompositions,
    product as sset_product, realize, simplex, spine, DEFAULT_DIM,
};
use crate::twisted::{nat_via_end, twisted_arrow};
use crate::verdict::Verdict;

/// Bounds shared by every case of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_objects: usize,
    pub dim_bound: usize,
    /// Probe categories by name; empty means the default probe set.
    #[serde(default)]
    pub probes: Vec<String>,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_objects: 3,
            dim_bound: 3,
            probes: Vec::new(),
        }
    }
}

impl Bounds {
    pub fn validate(&self) -> Result<()> {
        if self.max_objects == 0 {
            return Err(Error::Parse("max_objects must be positive".into()));
        }
        check("max_objects", self.max_objects, caps().max_objects)?;
        if self.dim_bound > DEFAULT_DIM {
            return Err(Error::DimensionBoundExceeded {
                needed: self.dim_bound,
                bound: DEFAULT_DIM,
            });
        }
        self.probe_cats().map(|_| ())
    }

    pub fn probe_cats(&self) -> Result<Vec<FinCat>> {
        if self.probes.is_empty() {
            return Ok(default_probes());
        }
        self.probes.iter().map(|p| probe(p)).collect()
    }
}

/// A probe category by name: `[n]` (or `n`), `[1]x[1]`, `iso`, `Z/2`.
pub fn probe(name: &str) -> Result<FinCat> {
    let t = name.trim();
    let bare = t.trim_start_matches('[').trim_end_matches(']');
    match t {
        "[1]x[1]" | "square" => return product(&poset(1), &poset(1)),
        "iso" => return Ok(walking_iso()),
        "Z/2" | "z2" => return Ok(cyclic_group(2)),
        _ => {}
    }
    match bare.parse::<usize>() {
        Ok(n) if n <= 4 => Ok(poset(n)),
        _ => Err(Error::Parse(format!("unknown probe {name}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteSpec {
    pub suite: String,
    pub seed: u64,
    pub reps: usize,
    pub bounds: Bounds,
    #[serde(default)]
    pub exec: Execution,
}

impl SuiteSpec {
    /// The registered default repetitions for `suite`.
    pub fn new(suite: &str, seed: u64) -> Result<SuiteSpec> {
        let s = find(suite)?;
        Ok(SuiteSpec {
            suite: suite.to_string(),
            seed,
            reps: s.default_reps,
            bounds: Bounds::default(),
            exec: Execution::default(),
        })
    }
}

/// Everything needed to re-execute one case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub suite: String,
    pub index: usize,
    pub seed: u64,
    pub bounds: Bounds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub suite: String,
    pub citation: String,
    pub instance_hash: String,
    pub pass: bool,
    pub timing_ms: f64,
    pub detail: String,
    pub replay: Witness,
    /// The counterexample, on failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl VerdictReport {
    /// The report as JSON with the timing field removed.
    pub fn untimed_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v.as_object_mut().expect("object").remove("timing_ms");
        v
    }
}

/// One evaluated case: the instance that was checked and its verdict.
pub struct Case {
    pub instance: Value,
    pub verdict: Verdict,
}

type CaseFn = fn(&Ctx, usize, &mut Rng8) -> Result<Case>;

pub struct Suite {
    pub id: &'static str,
    /// Statement label followed by a verbatim quote.
    pub citation: &'static str,
    pub default_reps: usize,
    case: CaseFn,
}

pub struct Ctx {
    pub max_objects: usize,
    pub dim_bound: usize,
    pub probes: Vec<FinCat>,
}

fn case(instance: Value, verdict: Verdict) -> Result<Case> {
    Ok(Case { instance, verdict })
}

pub fn catalog() -> &'static [Suite] {
    CATALOG
}

pub fn find(id: &str) -> Result<&'static Suite> {
    CATALOG
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownSuite(id.to_string()))
}

pub fn instance_hash(instance: &Value) -> String {
    hex::encode(Sha256::digest(instance.to_string().as_bytes()))
}

/// Case seeds are the first `reps` outputs of the suite RNG.
fn case_seeds(seed: u64, reps: usize) -> Vec<(usize, u64)> {
    let mut r = gen::rng(seed);
    (0..reps).map(|i| (i, r.next_u64())).collect()
}

fn run_one(suite: &Suite, ctx: &Ctx, w: Witness) -> VerdictReport {
    let start = Instant::now();
    let mut r = gen::rng(w.seed);
    let out = (suite.case)(ctx, w.index, &mut r);
    let timing_ms = start.elapsed().as_secs_f64() * 1e3;
    let (instance, verdict) = match out {
        Ok(c) => (c.instance, c.verdict),
        Err(e) => (
            json!({ "error": e.to_string() }),
            Verdict::fail(
                format!("case raised: {e}"),
                json!({ "error": e.to_string() }),
            ),
        ),
    };
    let hash = instance_hash(&instance);
    let witness = (!verdict.pass).then(|| {
        json!({
            "instance": instance,
            "counterexample": verdict.witness.clone().unwrap_or(Value::Null),
        })
    });
    VerdictReport {
        suite: suite.id.to_string(),
        citation: suite.citation.to_string(),
        instance_hash: hash,
        pass: verdict.pass,
        timing_ms,
        detail: verdict.detail,
        replay: w,
        witness,
    }
}

fn context(b: &Bounds) -> Result<Ctx> {
    b.validate()?;
    Ok(Ctx {
        max_objects: b.max_objects,
        dim_bound: b.dim_bound,
        probes: b.probe_cats()?,
    })
}

pub fn run(spec: &SuiteSpec) -> Result<Vec<VerdictReport>> {
    let suite = find(&spec.suite)?;
    let ctx = context(&spec.bounds)?;
    let keys = case_seeds(spec.seed, spec.reps);
    let mut reports = par::map_with(spec.exec, &keys, |&(index, seed)| {
        run_one(
            suite,
            &ctx,
            Witness {
                suite: suite.id.to_string(),
                index,
                seed,
                bounds: spec.bounds.clone(),
            },
        )
    });
    reports.sort_by(|a, b| {
        (&a.instance_hash, a.replay.index).cmp(&(&b.instance_hash, b.replay.index))
    });
    Ok(reports)
}

/// Re-execute the case named by a witness.  Accepts a bare [`Witness`] or
/// any object carrying one under `replay` (such as a report).
pub fn replay(witness_json: &str) -> Result<VerdictReport> {
    let v: Value =
        serde_json::from_str(witness_json).map_err(|e| Error::MalformedWitness(e.to_string()))?;
    let inner = v.get("replay").cloned().unwrap_or(v);
    let w: Witness =
        serde_json::from_value(inner).map_err(|e| Error::MalformedWitness(e.to_string()))?;
    let suite = find(&w.suite)?;
    let ctx = context(&w.bounds)?;
    Ok(run_one(suite, &ctx, w))
}

/// Number of failing reports.
pub fn failures(reports: &[VerdictReport]) -> usize {
    reports.iter().filter(|r| !r.pass).count()
}

// ---------------------------------------------------------------- suites

fn ex_2_5(_: &Ctx, i: usize, _: &mut Rng8) -> Result<Case> {
    let n = i % 6;
    let c = poset(n);
    let tw = twisted_arrow(&c)?;
    let pairs: Vec<(usize, usize)> = (0..=n).flat_map(|a| (a..=n).map(move |b| (a, b))).collect();
    let ex = preorder(
        pairs.iter().map(|(a, b)| format!("({a},{b})")).collect(),
        |x, y| {
            let ((a, b), (a2, b2)) = (pairs[x], pairs[y]);
            a <= a2 && a2 <= b2 && b2 <= b
        },
    )?;
    let count = tw.cat.num_objects();
    let want = (n + 1) * (n + 2) / 2;
    let iso = find_isomorphism(&tw.outer_to_inner(), &ex).is_some();
    case(
        json!({ "n": n }),
        Verdict::all(vec![
            Verdict::check(
                count == want,
                format!("{count} objects"),
                || json!({ "objects": count, "expected": want }),
            ),
            Verdict::check(
                iso,
                "isomorphic to the interval order",
                || json!({ "n": n, "isomorphic": false }),
            ),
        ]),
    )
}

fn prop_5_1(ctx: &Ctx, _: usize, r: &mut Rng8) -> Result<Case> {
    let c = random_category(r, ctx.max_objects.min(3));
    let d = random_category(r, (ctx.max_objects + 1).min(4));
    let f = random_functor(r, &c, &d).expect("targets are nonempty");
    let g = random_functor(r, &c, &d).expect("targets are nonempty");
    let v = nat_via_end(&c, &d, &f, &g)?;
    case(
        json!({ "c": cat_json(&c), "d": cat_json(&d), "f": functor_json(&f), "g": functor_json(&g) }),
        v,
    )
}

fn thm_4_1(ctx: &Ctx, i: usize, r: &mut Rng8) -> Result<Case> {
    let (fd, q) = random_fibration(r, ctx.max_objects.min(3), false)?;
    let c = q.base.clone();
    let variant = i % 4;
    let (e, p, extra) = match variant {
        // a point over x
        1 => {
            let x = r.gen_range(0..c.num_objects());
            let e = poset(0);
            let p = Functor::constant(&e, &c, x);
            (e, p, Some(free_of_point_check(&c, x)?))
        }
        // an arrow σ: Δ¹ → C
        2 => {
            let e = poset(1);
            let p = random_functor(r, &e, &c).expect("posets are nonempty");
            (e, p, None)
        }
        // product compatibility F(K × X) ≃ K × F(X)
        3 => {
            let e = random_category(r, 2);
            let p = random_functor(r, &e, &c).expect("nonempty base");
            let k = [poset(0), poset(1), discrete(2), walking_iso()][r.gen_range(0..4)].clone();
            (
                e.clone(),
                p.clone(),
                Some(free_product_check(&k, &e, &c, &p)?),
            )
        }
        _ => {
            let e = random_category(r, 2);
            let p = random_functor(r, &e, &c).expect("nonempty base");
            (e, p, None)
        }
    };
    let rep = adjunction_check(&e, &c, &p, &q)?;
    let mut parts = vec![rep.verdict];
    parts.extend(extra);
    case(
        json!({
            "variant": (["general", "point", "arrow", "product"][variant]),
            "fibration": diagram_json(&fd),
            "e": cat_json(&e),
            "p": functor_json(&p),
        }),
        Verdict::all(parts),
    )
}

fn prop_7_1(ctx: &Ctx, i: usize, r: &mut Rng8) -> Result<Case> {
    let f = random_shape_diagram(r, i, true, ctx.max_objects);
    let v = sections_vs_oplax_limit(&f)?;
    case(
        json!({ "base": shape_name(i), "diagram": diagram_json(&f) }),
        v,
    )
}

fn thm_7_4(ctx: &Ctx, i: usize, r: &mut Rng8) -> Result<Case> {
    let s = r.gen_range(0..3);
    match i % 4 {
        // the constant point has colimit the base itself
        1 => {
            let f = CatValuedDiagram::constant(shape(s), poset(0));
            let lax = lax_colimit_check(&f, &ctx.probes)?;
            let total = cocart_groth(&f)?.fib.total;
            let base = find_isomorphism(&total, &shape(s)).is_some();
            case(
                json!({ "base": shape_name(s), "constant_point": true }),
                Verdict::all(vec![
                    lax,
                    Verdict::check(
                        base,
                        "colimit of the point is the base",
                        || json!({ "base": shape_name(s) }),
                    ),
                ]),
            )
        }
        2 => {
            let f = random_small_shape_diagram(r, s, true, ctx.max_objects);
            let v = oplax_colimit_check(&f, &ctx.probes)?;
            case(json!({ "oplax": true, "diagram": diagram_json(&f) }), v)
        }
        _ => {
            let f = random_small_shape_diagram(r, s, false, ctx.max_objects);
            let v = lax_colimit_check(&f, &ctx.probes)?;
            case(json!({ "diagram": diagram_json(&f) }), v)
        }
    }
}

fn prop_7_2(ctx: &Ctx, _: usize, r: &mut Rng8) -> Result<Case> {
    let s = r.gen_range(0..3);
    let f = random_shape_diagram(r, s, false, ctx.max_objects.min(2));
    let x = poset(r.gen_range(0..=1));
    let k = [poset(0), poset(1), discrete(2), discrete(0)][r.gen_range(0..4)].clone();
    let kp = random_functor(r, &k, &f.index).expect("nonempty base");
    let v = phi_universal_check(&f, &x, &k, &kp)?;
    case(
        json!({ "diagram": diagram_json(&f), "x": cat_json(&x), "k": cat_json(&k), "kp": functor_json(&kp) }),
        v,
    )
}

fn prop_8_2(ctx: &Ctx, _: usize, r: &mut Rng8) -> Result<Case> {
    let s = r.gen_range(0..3);
    let f = random_shape_diagram(r, s, true, ctx.max_objects.min(2));
    let d = poset(r.gen_range(0..=1));
    let phi = random_functor(r, &d, &opposite(&f.index)).expect("nonempty base");
    let v = fiber_formula_check(&f, &d, &phi)?;
    case(
        json!({ "diagram": diagram_json(&f), "d": cat_json(&d), "phi": functor_json(&phi) }),
        v,
    )
}

fn prop_3_3(ctx: &Ctx, _: usize, r: &mut Rng8) -> Result<Case> {
    let (phi, inst) = random_simplex_diagram(r, ctx.dim_bound.max(2))?;
    let parts = (0..=phi.n())
        .map(|i| fiber_compare(&phi, i))
        .collect::<Result<Vec<_>>>()?;
    case(inst, Verdict::all(parts))
}

fn prop_3_8(ctx: &Ctx, _: usize, r: &mut Rng8) -> Result<Case> {
    let (phi, inst) = random_simplex_diagram(r, ctx.dim_bound.max(2))?;
    case(inst, mapping_simplex_decompositions(&phi)?)
}

/// Inner horns `Λⁿ_i` for `n ≤ 4`, then spines `Spⁿ` for `n ≤ 5`.
fn lemma_a_4(_: &Ctx, i: usize, _: &mut Rng8) -> Result<Case> {
    let mut shapes: Vec<(&str, usize, usize)> = Vec::new();
    for n in 2..=4 {
        for k in 1..n {
            shapes.push(("horn", n, k));
        }
    }
    for n in 0..=5 {
        shapes.push(("spine", n, 0));
    }
    let (kind, n, k) = shapes[i % shapes.len()];
    let dim = n.max(2);
    let x = if kind == "horn" {
        horn(n, k, dim)?
    } else {
        spine(n, dim)?
    };
    let iso = find_isomorphism(&realize(&x.sset)?, &poset(n)).is_some();
    case(
        json!({ "kind": kind, "n": n, "i": k }),
        Verdict::check(
            iso,
            format!("realization of {kind} {n},{k} is [{n}]"),
            || json!({ "kind": kind, "n": n, "i": k }),
        ),
    )
}

fn prop_a_5(_: &Ctx, i: usize, _: &mut Rng8) -> Result<Case> {
    let pairs: Vec<(usize, usize)> = (0..=4)
        .flat_map(|n| (0..=4 - n).map(move |m| (n, m)))
        .collect();
    let (n, m) = pairs[i % pairs.len()];
    let dim = (n + m).max(2);
    let x = sset_product(&simplex(n, dim)?.sset, &simplex(m, dim)?.sset)?;
    let want = product(&poset(n), &poset(m))?;
    let iso = find_isomorphism(&realize(&x.sset)?, &want).is_some();
    case(
        json!({ "n": n, "m": m }),
        Verdict::check(
            iso,
            format!("realization of Δ{n}×Δ{m} is [{n}]×[{m}]"),
            || json!({ "n": n, "m": m }),
        ),
    )
}

fn cube(ctx: &Ctx, i: usize, _: &mut Rng8) -> Result<Case> {
    let triples: Vec<(usize, usize, usize)> = (1..=4)
        .flat_map(|n| (0..n).flat_map(move |a| (a + 1..=n).map(move |b| (n, a, b))))
        .collect();
    let (n, a, b) = triples[i % triples.len()];
    let v = cube_check(n, a, b, ctx.dim_bound.max(2))?;
    case(json!({ "n": n, "i": a, "j": b }), v)
}

fn prop_a_12(ctx: &Ctx, _: usize, r: &mut Rng8) -> Result<Case> {
    let b = random_two_one(r, ctx.max_objects)?;
    let v = check_3_coskeletal(&b, ctx.dim_bound.max(5))?;
    case(serde_json::to_value(b.to_raw())?, v)
}

fn thm_a_13(ctx: &Ctx, i: usize, r: &mut Rng8) -> Result<Case> {
    let (b, d, f, inst) = if i % 5 == 4 {
        let b = random_two_one(r, ctx.max_objects)?;
        let f = NormalOplax::identity(&b);
        let inst = json!({ "identity_on": serde_json::to_value(b.to_raw())? });
        (b.clone(), b, f, inst)
    } else {
        random_oplax(r, ctx.max_objects)?
    };
    validate_oplax(&b, &d, &f)?;
    let dim = ctx.dim_bound.clamp(2, 4);
    let (nb, nd) = (duskin_nerve(&b, dim)?, duskin_nerve(&d, dim)?);
    let m = duskin_encode(&b, &d, &f, &nb, &nd)?;
    let back = duskin_decode(&b, &d, &m, &nb, &nd)?;
    let again = duskin_encode(&b, &d, &back, &nb, &nd)?;
    case(
        inst,
        Verdict::all(vec![
            Verdict::check(
                back == f,
                "decode after encode is the identity",
                || json!({ "decoded": back }),
            ),
            Verdict::check(
                again == m,
                "encode after decode is the identity",
                || json!({ "dim": dim }),
            ),
        ]),
    )
}

fn coherent_nerve(ctx: &Ctx, _: usize, r: &mut Rng8) -> Result<Case> {
    let b = random_two_one(r, ctx.max_objects)?;
    let k = ctx.dim_bound.clamp(1, 3);
    let v = coherent_nerve_agreement(&b, k)?;
    case(
        json!({ "two_cat": serde_json::to_value(b.to_raw())?, "k": k }),
        v,
    )
}

fn esd_tw(ctx: &Ctx, _: usize, r: &mut Rng8) -> Result<Case> {
    let c = random_category(r, ctx.max_objects);
    let v = esd_nerve_vs_twisted(&c, ctx.dim_bound.clamp(1, 2))?;
    case(cat_json(&c), v)
}

fn tiny_pair(ctx: &Ctx, r: &mut Rng8) -> (FinCat, FinCat, Functor) {
    let e = random_category(r, ctx.max_objects.min(2));
    let b = random_category(r, ctx.max_objects.min(2));
    let p = random_functor(r, &e, &b).expect("nonempty target");
    (e, b, p)
}

fn lemma_9_2(ctx: &Ctx, _: usize, r: &mut Rng8) -> Result<Case> {
    let (e, b, p) = tiny_pair(ctx, r);
    let d = poset(r.gen_range(0..=1));
    let fb = random_functor(r, &b, &d).expect("nonempty target");
    let left = r.gen_bool(0.5);
    let v = undercat_fiber_check(&e, &b, &p, &d, &fb, left)?;
    case(
        json!({ "e": cat_json(&e), "b": cat_json(&b), "p": functor_json(&p), "d": cat_json(&d), "fb": functor_json(&fb), "left": left }),
        v,
    )
}

fn collage(ctx: &Ctx, _: usize, r: &mut Rng8) -> Result<Case> {
    let (e, b, p) = tiny_pair(ctx, r);
    let left = r.gen_bool(0.5);
    let v = collage_pushout_check(&e, &b, &p, left, &ctx.probes)?;
    case(
        json!({ "e": cat_json(&e), "b": cat_json(&b), "p": functor_json(&p), "left": left }),
        v,
    )
}

/// Triangles `f: E → D` over `C`: fiber product projections of two
/// fibrations, identities, and random composites `q∘f`.
fn prop_9_4(ctx: &Ctx, i: usize, r: &mut Rng8) -> Result<Case> {
    let (e, d, c, f, p, q, kind) = match i % 3 {
        0 => {
            let (fd, qd) = random_fibration(r, ctx.max_objects.min(2), false)?;
            let c = qd.base.clone();
            let g = crate::gen::random_diagram(r, &fd.index, |r| gen::random_value(r, 2));
            let qe = crate::groth::cart_groth(&g)?.fib;
            let fp = fiber_product(&qd.total, &qd.proj, &qe.total, &qe.proj, &c)?;
            let p = crate::fincat::compose_functors(&qd.proj, &fp.first);
            (fp.cat, qd.total, c, fp.first, p, qd.proj, "fiber product")
        }
        1 => {
            let (_, qd) = random_fibration(r, ctx.max_objects.min(3), false)?;
            let id = crate::fincat::identity_functor(&qd.total);
            (
                qd.total.clone(),
                qd.total,
                qd.base,
                id,
                qd.proj.clone(),
                qd.proj,
                "identity",
            )
        }
        _ => {
            let c = random_category(r, 2);
            let d = random_category(r, 2);
            let e = random_category(r, 2);
            let q = random_functor(r, &d, &c).expect("nonempty");
            let f = random_functor(r, &e, &d).expect("nonempty");
            let p = crate::fincat::compose_functors(&q, &f);
            (e, d, c, f, p, q, "random")
        }
    };
    let rep = two_of_three_cart(&e, &d, &c, &f, &p, &q)?;
    let mut v = rep.verdict;
    if kind == "fiber product" && rep.conclusion != Some(true) {
        v = Verdict::fail(
            "fiber product projection is not certified as a Cartesian fibration",
            json!({ "hypotheses": rep.hypotheses, "conclusion": rep.conclusion }),
        );
    }
    case(
        json!({ "kind": kind, "e": cat_json(&e), "d": cat_json(&d), "c": cat_json(&c), "f": functor_json(&f), "q": functor_json(&q) }),
        v,
    )
}

fn prop_9_6(ctx: &Ctx, _: usize, r: &mut Rng8) -> Result<Case> {
    let (f, q) = random_fibration(r, ctx.max_objects.min(3), true)?;
    let v = dfib_slice_equiv(&q.total, &q.base, &q.proj, 2)?;
    case(diagram_json(&f), v)
}

fn lemma_a_19(ctx: &Ctx, _: usize, r: &mut Rng8) -> Result<Case> {
    let (f, q) = random_fibration(r, ctx.max_objects.min(3), false)?;
    let all = r.gen_bool(0.5);
    let w: Vec<usize> = q
        .total
        .morphisms()
        .filter(|&m| all || q.cartesian[m])
        .collect();
    let rel = relative_fibration_straighten(&q, &w)?;
    let mut parts = vec![rel.pseudo.check_laws()];
    for x in q.base.objects() {
        let (fib, marked) = rel.value(x);
        let want: Vec<usize> = fib.morphisms().filter(|&u| all || fib.is_iso(u)).collect();
        parts.push(Verdict::check(
            marked == want.as_slice(),
            "marked fiber morphisms",
            || json!({ "fiber": x, "marked": marked, "expected": want }),
        ));
    }
    case(
        json!({ "diagram": diagram_json(&f), "w": if all { "all" } else { "cartesian" } }),
        Verdict::all(parts),
    )
}

static CATALOG: &[Suite] = &[
    Suite {
        id: "ex-2.5",
        citation: "Example 2.5: \"The twisted arrow category $\\txt{Tw}([n])$ of the category $[n]$ is the partially ordered set with objects $(i,j)$ where $0 \\leq i \\leq j \\leq n$\"",
        default_reps: 6,
        case: ex_2_5,
    },
    Suite {
        id: "prop-3.3",
        citation: "Proposition 3.3: \"Then the natural map $\\nu_{[n],\\phi} \\colon M^{\\natural}_{[n]}(\\phi) \\to N^{+}_{[n]}(\\phi)$ is a coCartesian equivalence.\"",
        default_reps: 20,
        case: prop_3_3,
    },
    Suite {
        id: "prop-3.8",
        citation: "Proposition 3.8: \"\\colim_{\\txt{Tw}([n])} \\phi(\\blank) \\times [n]_{\\blank/} \\isoto \\txt{Un}^{\\txt{co}}_{[n]}(\\phi)\"",
        default_reps: 20,
        case: prop_3_8,
    },
    Suite {
        id: "thm-4.1",
        citation: "Theorem 4.1: \"The functor $F \\colon \\Cat_{\\infty/\\mathcal{C}} \\to \\CatIC^{\\txt{cart}}$ is left adjoint to the forgetful functor\"",
        default_reps: 50,
        case: thm_4_1,
    },
    Suite {
        id: "prop-5.1",
        citation: "Proposition 5.1: \"the space $\\Map_{\\Fun(\\mathcal{C}, \\mathcal{D})}(F, G)$ of natural transformations from $F$ to $G$ is naturally equivalent to the end of the functor\"",
        default_reps: 100,
        case: prop_5_1,
    },
    Suite {
        id: "prop-7.1",
        citation: "Proposition 7.1: \"The \\icat{} of sections of the Cartesian fibration associated to $F$ is given by the oplax limit of $F$.\"",
        default_reps: 50,
        case: prop_7_1,
    },
    Suite {
        id: "prop-7.2",
        citation: "Proposition 7.2: \"The Cartesian fibration $\\Phi_{\\mathcal{X}}^{F} \\to \\mathcal{C}$ classifies the functor\"",
        default_reps: 20,
        case: prop_7_2,
    },
    Suite {
        id: "thm-7.4",
        citation: "Theorem 7.4: \"The coCartesian fibration associated to a functor $F \\colon \\mathcal{C} \\to \\CatI$ is given by the lax colimit of $F$.\"; Corollary 7.5: \"Any \\icat{} $\\mathcal{C}$ is the lax colimit of the constant functor\"; Corollary 7.6: \"is given by the oplax colimit of $F$\"",
        default_reps: 30,
        case: thm_7_4,
    },
    Suite {
        id: "prop-8.2",
        citation: "Proposition 8.2: \"Then for any \\icat{} $\\mathcal{D}$ the functor $\\mathcal{E}^{\\mathcal{D}} \\to \\mathcal{C}^{\\mathcal{D}}$ given by composition with $p$ is a Cartesian fibration\"",
        default_reps: 20,
        case: prop_8_2,
    },
    Suite {
        id: "lemma-9.2",
        citation: "Lemma 9.2: \"Given a functor $p \\colon \\mathcal{E} \\to \\mathcal{B}$, write $i \\colon \\mathcal{B} \\hookrightarrow \\mathcal{E}_{\\mathcal{B}}^{\\triangleleft}$\"",
        default_reps: 10,
        case: lemma_9_2,
    },
    Suite {
        id: "collage",
        citation: "Definition 9.1: \"we denote by $\\mathcal{E}^{\\triangleright}_{\\mathcal{B}}$ the pushout\"",
        default_reps: 10,
        case: collage,
    },
    Suite {
        id: "prop-9.4",
        citation: "Proposition 9.4: \"$p$ and $q$ are Cartesian fibrations.\"",
        default_reps: 12,
        case: prop_9_4,
    },
    Suite {
        id: "prop-9.6",
        citation: "Proposition 9.6: \"Suppose $p \\colon \\mathcal{K} \\to \\mathcal{C}$ is a right fibration of \\icats{}.\"",
        default_reps: 10,
        case: prop_9_6,
    },
    Suite {
        id: "esd-tw",
        citation: "Definition 2.1: \"The \\emph{edgewise subdivision} $\\txt{esd}(S)$ of a simplicial set $S$ is the composite $\\epsilon^{*}S$.\"",
        default_reps: 30,
        case: esd_tw,
    },
    Suite {
        id: "lemma-A.4",
        citation: "Lemma A.4: \"The functor $\\mathrm{C} \\colon \\sSet \\to \\Cat$ takes inner anodyne morphisms to isomorphisms.\"",
        default_reps: 12,
        case: lemma_a_4,
    },
    Suite {
        id: "prop-A.5",
        citation: "Proposition A.5: \"The functor $\\mathrm{C} \\colon \\sSet \\to \\Cat$ preserves products.\"",
        default_reps: 15,
        case: prop_a_5,
    },
    Suite {
        id: "cube",
        citation: "Remark on the hom-posets of $\\mathfrak{C}(\\Delta^{n})$: \"The simplicial set $\\mathrm{N}P_{i,j}$ is isomorphic to $(\\Delta^{1})^{\\times (j - i - 1)}$ for $j > i$.\"",
        default_reps: 20,
        case: cube,
    },
    Suite {
        id: "coherent-nerve",
        citation: "Remark on Duskin's nerve: \"the functor $\\mathrm{N}_{2}$ as we have defined it is simply the restriction of Duskin's nerve for bicategories to strict 2-categories.\"",
        default_reps: 10,
        case: coherent_nerve,
    },
    Suite {
        id: "prop-A.12",
        citation: "Proposition A.12: \"For every strict 2-category $\\mathbf{C}$, the simplicial set $\\mathrm{N}_{2}\\mathbf{C}$ is 3-coskeletal.\"",
        default_reps: 10,
        case: prop_a_12,
    },
    Suite {
        id: "thm-A.13",
        citation: "Theorem A.13: \"Then the maps of simplicial sets $\\mathrm{N}_{2}\\mathbf{C} \\to \\mathrm{N}_{2}\\mathbf{D}$ can be identified with the normal oplax functors $\\mathbf{C} \\to \\mathbf{D}$.\"",
        default_reps: 10,
        case: thm_a_13,
    },
    Suite {
        id: "lemma-A.19",
        citation: "Lemma A.19: \"Relative Grothendieck fibrations over a category $\\mathbf{C}$ correspond to normal pseudofunctors $\\mathbf{C}^{\\op} \\to \\txt{RelCat}_{(2,1)}$.\"",
        default_reps: 10,
        case: lemma_a_19,
    },
];

#[cfg(test)]
mod tests;

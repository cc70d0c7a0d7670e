use std::collections::HashSet;

use serde_json::json;

use crate::error::{Error, Result};
use crate::fincat::{FinCat, Mor};
use crate::groth::{fibration_defect, straighten, Cleavage, FibCat, PseudofunctorToCat};

/// The straightening of a relative fibration `(E, W) → C`: a pseudofunctor
/// to categories together with, for each fiber, its morphisms lying in `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeStraightening {
    pub pseudo: PseudofunctorToCat,
    /// `marked[c]`: morphisms of the fiber over `c` that lie in `W`.
    pub marked: Vec<Vec<Mor>>,
}

impl RelativeStraightening {
    /// The fiber over `c` as a relative category.
    pub fn value(&self, c: usize) -> (&FinCat, &[Mor]) {
        (&self.pseudo.values[c], &self.marked[c])
    }
}

fn not_relative(detail: serde_json::Value) -> Error {
    Error::NotRelative(detail.to_string())
}

/// Straighten a Grothendieck fibration whose total category carries a
/// subcategory `w` of marked morphisms.
pub fn relative_fibration_straighten(p: &FibCat, w: &[Mor]) -> Result<RelativeStraightening> {
    let t = &p.total;
    if let Some((e, g)) = fibration_defect(p) {
        return Err(Error::NotAFibration(format!(
            "{} has no Cartesian lift to {}",
            p.base.morphism_name(g),
            t.object_name(e)
        )));
    }
    if let Some(&m) = w.iter().find(|&&m| m >= t.num_morphisms()) {
        return Err(Error::UnknownMorphism(m.to_string()));
    }
    let in_w: HashSet<Mor> = w.iter().copied().collect();
    for x in t.objects() {
        if !in_w.contains(&t.id(x)) {
            return Err(not_relative(
                json!({ "missing identity": t.object_name(x) }),
            ));
        }
    }
    for &f in w {
        for &g in t.out_of(t.tgt(f)) {
            if in_w.contains(&g) && !in_w.contains(&t.compose(g, f)) {
                return Err(not_relative(json!({
                    "not closed under composition": [t.morphism_name(g), t.morphism_name(f)]
                })));
            }
        }
    }
    if let Some(m) = t
        .morphisms()
        .find(|&m| p.cartesian[m] && !in_w.contains(&m))
    {
        return Err(not_relative(
            json!({ "missing Cartesian morphism": t.morphism_name(m) }),
        ));
    }
    let cleavage = Cleavage::canonical(p)?;
    let pseudo = straighten(p, &cleavage)?;
    let laws = pseudo.check_laws();
    if !laws.pass {
        return Err(Error::CoherenceViolation {
            law: "pseudofunctor".into(),
            detail: laws.detail,
        });
    }
    let mut marked = Vec::with_capacity(p.base.num_objects());
    let mut incl = Vec::with_capacity(p.base.num_objects());
    for c in p.base.objects() {
        let (fib, inc) = p.fiber(c)?;
        marked.push(
            fib.morphisms()
                .filter(|&u| in_w.contains(&inc.mor[u]))
                .collect::<Vec<_>>(),
        );
        incl.push(inc);
    }
    for g in p.base.morphisms() {
        let (src, tgt) = (p.base.src(g), p.base.tgt(g));
        let action = &pseudo.action[g];
        for &u in &marked[tgt] {
            let v = action.mor[u];
            if !marked[src].contains(&v) {
                return Err(not_relative(json!({
                    "pullback along": p.base.morphism_name(g),
                    "of": t.morphism_name(incl[tgt].mor[u]),
                    "is": t.morphism_name(incl[src].mor[v]),
                    "which is not in W": true
                })));
            }
        }
    }
    Ok(RelativeStraightening { pseudo, marked })
}

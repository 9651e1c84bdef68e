//! Quantum-property checkers: Heisenberg uncertainty, broadcasting, the
//! bottleneck principle, and projection states, each a decision procedure
//! with replayable witnesses. The pinned violation instances over FinSet
//! are exposed as constructors so they can be re-run from the CLI.

use crate::backend::{self, BackendKind, ObjectRef};
use crate::diagram::{self, dg, seq, tens, DiagramTerm, Env};
use crate::error::{Error, Result};
use crate::frobenius::{
    self, check_frobenius, tensor_structure, trivial_structure, FrobeniusStructure,
};
use crate::groupoid;
use crate::rel::{self, Relation};
use std::collections::BTreeSet;

/// Outcome of one property check: verdict plus replayable payloads.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub property: String,
    pub holds: bool,
    pub detail: String,
    pub witness: Option<Relation>,
    pub counterexample: Option<Relation>,
}

impl PropertyReport {
    fn new(property: &str, holds: bool, detail: String) -> PropertyReport {
        PropertyReport {
            property: property.to_string(),
            holds,
            detail,
            witness: None,
            counterexample: None,
        }
    }
}

fn require_valid(f: &FrobeniusStructure) -> Result<()> {
    let report = check_frobenius(f)?;
    if !report.passed() {
        return Err(Error::NotFrobenius(format!(
            "failing axioms: {}",
            report.failing().join(", ")
        )));
    }
    Ok(())
}

/// Recover `A` from a structure equal to `indiscrete(A)`, or `None`. The
/// extraction reads the diagonal back off the carrier and then insists the
/// whole structure matches the canonical one; the invertible scalar of the
/// general definition is the identity here, since those are the only
/// invertible scalars in these models.
pub fn reconstruct_indiscrete_base(f: &FrobeniusStructure) -> Option<ObjectRef> {
    let size = f.carrier().size();
    let n = (1..=size).find(|&k| k * k == size)?;
    let base = match f.kind() {
        BackendKind::FinSet => ObjectRef::finset(n),
        BackendKind::FinGrp | BackendKind::FinQGrp => {
            if n == 0 {
                return None;
            }
            let carrier = f.carrier();
            let mut table = vec![vec![0usize; n]; n];
            for (x, row) in table.iter_mut().enumerate() {
                for (y, cell) in row.iter_mut().enumerate() {
                    let prod = carrier.op_mul(x * (n + 1), y * (n + 1));
                    if prod % (n + 1) != 0 {
                        return None;
                    }
                    *cell = prod / (n + 1);
                }
            }
            match f.kind() {
                BackendKind::FinGrp => ObjectRef::fingrp(&table).ok()?,
                _ => ObjectRef::finqgrp(&table).ok()?,
            }
        }
        BackendKind::FinVect { p } => {
            let (_, dim) = f.carrier().vect_params()?;
            if dim % 2 != 0 {
                return None;
            }
            ObjectRef::finvect(p, dim / 2).ok()?
        }
    };
    let canonical = frobenius::indiscrete(&base).ok()?;
    if &canonical == f {
        Some(base)
    } else {
        None
    }
}

fn measurement_terms(
    b: &ObjectRef,
    c: &ObjectRef,
) -> (DiagramTerm, DiagramTerm, DiagramTerm, DiagramTerm) {
    let gen_m = DiagramTerm::Gen {
        name: "meas".into(),
        dom: vec![b.clone()],
        cod: vec![b.clone(), c.clone()],
    };
    let u_b = DiagramTerm::Gen {
        name: "u_b".into(),
        dom: vec![],
        cod: vec![b.clone()],
    };
    let u_c = DiagramTerm::Gen {
        name: "u_c".into(),
        dom: vec![],
        cod: vec![c.clone()],
    };
    let psi = DiagramTerm::Gen {
        name: "psi".into(),
        dom: vec![],
        cod: vec![c.clone()],
    };
    (gen_m, u_b, u_c, psi)
}

/// Prepared Heisenberg instance checker: structure validation, the tensor
/// target, the CP context and the candidate outcome states are computed
/// once, so a whole population of measurements can be checked cheaply.
pub struct HeisenbergChecker {
    f_b: FrobeniusStructure,
    f_c: FrobeniusStructure,
    target: FrobeniusStructure,
    ctx: crate::cp::CpContext,
    states: Vec<Relation>,
}

impl HeisenbergChecker {
    pub fn new(
        f_b: &FrobeniusStructure,
        f_c: &FrobeniusStructure,
        limit: usize,
    ) -> Result<HeisenbergChecker> {
        if reconstruct_indiscrete_base(f_b).is_none() {
            return Err(Error::NotQuantumStructure(
                "the system structure must be an indiscrete one".into(),
            ));
        }
        require_valid(f_c)?;
        let target = tensor_structure(f_b, f_c)?;
        let ctx = crate::cp::CpContext::new(f_b, &target)?;
        let c = f_c.carrier();
        let states = backend::enumerate_subobjects(c, limit)?
            .into_iter()
            .map(|sub| {
                Relation::new(
                    backend::terminal(c.kind()),
                    c.clone(),
                    sub.iter().map(|&x| (0usize, x)),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HeisenbergChecker {
            f_b: f_b.clone(),
            f_c: f_c.clone(),
            target,
            ctx,
            states,
        })
    }

    /// Carrier of `B (x) C`, the codomain of measurement relations.
    pub fn measurement_codomain(&self) -> &crate::backend::ObjectRef {
        self.target.carrier()
    }

    pub fn is_cp(&self, measurement: &Relation) -> Result<bool> {
        self.ctx.is_cp(measurement)
    }

    pub fn check(&self, measurement: &Relation) -> Result<PropertyReport> {
        if !self.ctx.is_cp(measurement)? {
            return Err(Error::NotCP(
                "the measurement must be completely positive".into(),
            ));
        }
        let (b, c) = (self.f_b.carrier(), self.f_c.carrier());
        let (gen_m, u_b, u_c, psi_gen) = measurement_terms(b, c);
        let mut env = Env::new()
            .bind("meas", measurement.clone())
            .bind("u_b", self.f_b.unit().clone())
            .bind("u_c", self.f_c.unit().clone());
        let id_b = DiagramTerm::Id(vec![b.clone()]);
        let id_c = DiagramTerm::Id(vec![c.clone()]);

        // non-disturbance: discarding the outcome leg leaves the identity
        let lhs = diagram::terms_equal(
            &seq(gen_m.clone(), tens(id_b.clone(), dg(u_c))),
            &id_b,
            &env,
        )?;
        if !lhs {
            return Ok(PropertyReport::new(
                "heisenberg",
                true,
                "measurement disturbs the system; nothing to check".into(),
            ));
        }
        // search for psi with: discard system leg = counit then psi
        let discarded = seq(gen_m, tens(dg(u_b.clone()), id_c));
        for state in &self.states {
            env.insert("psi", state.clone());
            let rhs = seq(dg(u_b.clone()), psi_gen.clone());
            if diagram::terms_equal(&discarded, &rhs, &env)? {
                let mut report = PropertyReport::new(
                    "heisenberg",
                    true,
                    "non-disturbing measurement factors through a fixed outcome state".into(),
                );
                report.witness = Some(state.clone());
                return Ok(report);
            }
        }
        let mut report = PropertyReport::new(
            "heisenberg",
            false,
            "non-disturbing measurement admits no fixed outcome state".into(),
        );
        report.counterexample = Some(measurement.clone());
        Ok(report)
    }
}

/// Heisenberg uncertainty for one instance: a completely positive
/// `measurement: B -> B (x) C` out of a quantum structure (an indiscrete
/// one) either disturbs the system, or its outcome leg factors as a fixed
/// state after discarding. Verdict: non-disturbance implies the
/// factorization exists for some state `psi` of `C`.
pub fn check_heisenberg_instance(
    measurement: &Relation,
    f_b: &FrobeniusStructure,
    f_c: &FrobeniusStructure,
    limit: usize,
) -> Result<PropertyReport> {
    HeisenbergChecker::new(f_b, f_c, limit)?.check(measurement)
}

fn marginals_are_identity(b_map: &Relation, f: &FrobeniusStructure) -> Result<bool> {
    let a = f.carrier();
    let gen_b = DiagramTerm::Gen {
        name: "bmap".into(),
        dom: vec![a.clone()],
        cod: vec![a.clone(), a.clone()],
    };
    let u = DiagramTerm::Gen {
        name: "u".into(),
        dom: vec![],
        cod: vec![a.clone()],
    };
    let env = Env::new()
        .bind("bmap", b_map.clone())
        .bind("u", f.unit().clone());
    let id_a = DiagramTerm::Id(vec![a.clone()]);
    let right = diagram::terms_equal(
        &seq(gen_b.clone(), tens(id_a.clone(), dg(u.clone()))),
        &id_a,
        &env,
    )?;
    let left = diagram::terms_equal(&seq(gen_b, tens(dg(u), id_a.clone())), &id_a, &env)?;
    Ok(right && left)
}

/// Whether `b_map: A -> A (x) A` is a broadcasting map for the structure:
/// a CP morphism into the tensor square whose both marginals are the
/// identity. Non-CP candidates are errors, not `false`.
pub fn is_broadcasting_map(b_map: &Relation, f: &FrobeniusStructure) -> Result<bool> {
    require_valid(f)?;
    let target = tensor_structure(f, f)?;
    let ev = crate::cp::is_completely_positive(b_map, f, &target)?;
    if !ev.is_cp() {
        return Err(Error::NotCP(
            "a broadcasting map must be completely positive".into(),
        ));
    }
    marginals_are_identity(b_map, f)
}

/// Exhaustively search the CP morphisms `F -> F (x) F` (equivalently, the
/// inverse-respecting subalgebra relations) for a broadcasting map, in
/// deterministic order.
pub fn search_broadcasting_map(
    f: &FrobeniusStructure,
    limit: usize,
) -> Result<Option<Relation>> {
    require_valid(f)?;
    let target = tensor_structure(f, f)?;
    let g = frobenius::to_groupoid(f)?;
    let g2 = frobenius::to_groupoid(&target)?;
    for r in rel::enumerate_relations(f.carrier(), target.carrier(), limit)? {
        if !groupoid::respects_inverses(&r, &g, &g2)? {
            continue;
        }
        if marginals_are_identity(&r, f)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// `t` relates some pair and factors as a product of two states:
/// `T(a,b) and T(a',b') => T(a,b')`.
fn factors_through_unit(t: &Relation) -> bool {
    for &(a, _) in t.graph().iter() {
        for &(_, b2) in t.graph().iter() {
            if !t.contains(a, b2) {
                return false;
            }
        }
    }
    true
}

/// Bottleneck principle for one relation: if `dagger(R) . R` factors
/// through the unit, so must `R`.
pub fn check_bottleneck(r: &Relation) -> Result<PropertyReport> {
    let rtr = rel::compose(r, &rel::dagger(r))?;
    let hypothesis = factors_through_unit(&rtr);
    if !hypothesis {
        return Ok(PropertyReport::new(
            "bottleneck",
            true,
            "dagger(R) . R does not factor through the unit; nothing to check".into(),
        ));
    }
    if factors_through_unit(r) {
        Ok(PropertyReport::new(
            "bottleneck",
            true,
            "both the relation and dagger(R) . R factor through the unit".into(),
        ))
    } else {
        let mut report = PropertyReport::new(
            "bottleneck",
            false,
            "dagger(R) . R factors through the unit but R does not".into(),
        );
        report.counterexample = Some(r.clone());
        Ok(report)
    }
}

/// The two projection equations for a state, without the CP gate: the
/// multiplication applied to two copies reproduces the state, and the
/// bent comultiplication-of-the-unit form does too. Both orientations of
/// the second equation are evaluated and must agree (they do on every
/// validated structure; the left-leg orientation is the recorded one).
pub fn projection_equations(psi: &Relation, f: &FrobeniusStructure) -> Result<(bool, bool)> {
    let a = f.carrier();
    let gen_m = DiagramTerm::Gen {
        name: "m".into(),
        dom: vec![a.clone(), a.clone()],
        cod: vec![a.clone()],
    };
    let gen_u = DiagramTerm::Gen {
        name: "u".into(),
        dom: vec![],
        cod: vec![a.clone()],
    };
    let gen_psi = DiagramTerm::Gen {
        name: "psi".into(),
        dom: vec![],
        cod: vec![a.clone()],
    };
    let env = Env::new()
        .bind("m", f.mult().clone())
        .bind("u", f.unit().clone())
        .bind("psi", psi.clone());
    let eq1 = diagram::terms_equal(
        &seq(tens(gen_psi.clone(), gen_psi.clone()), gen_m.clone()),
        &gen_psi,
        &env,
    )?;
    let id_a = DiagramTerm::Id(vec![a.clone()]);
    let bent_left = seq(
        seq(gen_u.clone(), dg(gen_m.clone())),
        tens(dg(gen_psi.clone()), id_a.clone()),
    );
    let bent_right = seq(seq(gen_u, dg(gen_m)), tens(id_a, dg(gen_psi.clone())));
    let eq2_left = diagram::terms_equal(&bent_left, &gen_psi, &env)?;
    let eq2_right = diagram::terms_equal(&bent_right, &gen_psi, &env)?;
    if eq2_left != eq2_right {
        return Err(Error::InternalError(
            "the two orientations of the projection equation disagree".into(),
        ));
    }
    Ok((eq1, eq2_left))
}

/// Projection check for a CP state `psi: I -> A` of a structure.
pub fn check_state_projection(
    psi: &Relation,
    f: &FrobeniusStructure,
) -> Result<PropertyReport> {
    require_valid(f)?;
    if psi.dom() != &backend::terminal(f.kind()) || psi.cod() != f.carrier() {
        return Err(Error::ObjectMismatch(
            "expected a state of the structure's carrier".into(),
        ));
    }
    let triv = trivial_structure(f.kind())?;
    let ev = crate::cp::is_completely_positive(psi, &triv, f)?;
    if !ev.is_cp() {
        return Err(Error::NotCP("the state must be completely positive".into()));
    }
    let (eq1, eq2) = projection_equations(psi, f)?;
    let mut report = PropertyReport::new(
        "projection",
        eq1 && eq2,
        format!("idempotence holds: {eq1}, bent self-adjointness holds: {eq2}"),
    );
    if !(eq1 && eq2) {
        report.counterexample = Some(psi.clone());
    }
    Ok(report)
}

/// Pinned Heisenberg violation over FinSet: the indiscrete structure on a
/// two-element carrier measured into the order-2 cyclic group, relating
/// every morphism to outcome 0 and one loop additionally to outcome 1.
pub fn heisenberg_violation_instance(
) -> Result<(Relation, FrobeniusStructure, FrobeniusStructure)> {
    let f_b = frobenius::indiscrete(&ObjectRef::finset(2))?;
    let f_c = frobenius::group_structure_in_finset(&crate::backend::tables::cyclic(2))?;
    let b = f_b.carrier().clone();
    let bc = backend::product(&b, f_c.carrier())?;
    let mut pairs = BTreeSet::new();
    for elem in b.elements() {
        pairs.insert((elem, backend::pair_index(2, elem, 0)));
    }
    // the (x,x) loop also reports outcome 1
    pairs.insert((0, backend::pair_index(2, 0, 1)));
    let m = Relation::new(b, bc, pairs)?;
    Ok((m, f_b, f_c))
}

/// Pinned broadcasting map on a noncommutative structure: the symmetric
/// group on three points as a one-object groupoid in FinSet, with
/// `B = {(g, id, g)} u {(g, g, id)}`.
pub fn broadcasting_violation_instance() -> Result<(Relation, FrobeniusStructure)> {
    let f = frobenius::group_structure_in_finset(&crate::backend::tables::s3())?;
    let a = f.carrier().clone();
    let aa = backend::product(&a, &a)?;
    let mut pairs = BTreeSet::new();
    for g in a.elements() {
        pairs.insert((g, backend::pair_index(a.size(), 0, g)));
        pairs.insert((g, backend::pair_index(a.size(), g, 0)));
    }
    let b_map = Relation::new(a, aa, pairs)?;
    Ok((b_map, f))
}

/// Pinned bottleneck violation on a two-element set.
pub fn bottleneck_violation_relation() -> Result<Relation> {
    let a = ObjectRef::finset(2);
    Relation::new(a.clone(), a, [(0usize, 0usize), (0, 1), (1, 1)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::tables;
    use crate::frobenius::{group_structure, group_structure_in_finset, indiscrete};

    #[test]
    fn reconstructs_indiscrete_bases() {
        for base in [
            ObjectRef::finset(2),
            ObjectRef::finset(3),
            ObjectRef::fingrp(&tables::cyclic(2)).unwrap(),
            ObjectRef::finvect(2, 1).unwrap(),
            ObjectRef::finqgrp(&tables::subtraction_quasigroup(3)).unwrap(),
        ] {
            let f = indiscrete(&base).unwrap();
            assert_eq!(reconstruct_indiscrete_base(&f), Some(base));
        }
        let not_quantum = group_structure_in_finset(&tables::klein_four()).unwrap();
        assert_eq!(reconstruct_indiscrete_base(&not_quantum), None);
    }

    #[test]
    fn heisenberg_pinned_violation() {
        let (m, f_b, f_c) = heisenberg_violation_instance().unwrap();
        let report = check_heisenberg_instance(&m, &f_b, &f_c, 10_000).unwrap();
        assert!(!report.holds);
        assert!(report.counterexample.is_some());
    }

    #[test]
    fn heisenberg_trivial_measurement_passes() {
        // id_B tensored with a fixed copyable outcome: never disturbs and
        // factors trivially
        let f_b = indiscrete(&ObjectRef::finset(2)).unwrap();
        let f_c = group_structure_in_finset(&tables::cyclic(2)).unwrap();
        let b = f_b.carrier();
        let c = f_c.carrier();
        let bc = backend::product(b, c).unwrap();
        let m = Relation::new(
            b.clone(),
            bc,
            b.elements()
                .flat_map(|x| c.elements().map(move |y| (x, x * 2 + y))),
        )
        .unwrap();
        let report = check_heisenberg_instance(&m, &f_b, &f_c, 10_000).unwrap();
        assert!(report.holds);
        assert!(report.witness.is_some());
    }

    #[test]
    fn heisenberg_rejects_non_quantum_system() {
        let f = group_structure_in_finset(&tables::cyclic(2)).unwrap();
        let (m, _, f_c) = heisenberg_violation_instance().unwrap();
        assert!(matches!(
            check_heisenberg_instance(&m, &f, &f_c, 100),
            Err(Error::NotQuantumStructure(_))
        ));
    }

    #[test]
    fn broadcast_pinned_violation() {
        let (b_map, f) = broadcasting_violation_instance().unwrap();
        assert!(is_broadcasting_map(&b_map, &f).unwrap());
        assert!(!frobenius::is_commutative(&f).unwrap());
    }

    #[test]
    fn broadcast_search_finds_comult_for_commutative() {
        let f = group_structure_in_finset(&tables::cyclic(2)).unwrap();
        let found = search_broadcasting_map(&f, 1_000_000).unwrap();
        assert!(found.is_some());
        assert!(is_broadcasting_map(&found.unwrap(), &f).unwrap());
    }

    #[test]
    fn broadcast_empty_map_is_not_broadcasting() {
        let f = group_structure_in_finset(&tables::cyclic(2)).unwrap();
        let target_carrier =
            backend::product(f.carrier(), f.carrier()).unwrap();
        let empty = Relation::new(f.carrier().clone(), target_carrier, []).unwrap();
        assert!(!is_broadcasting_map(&empty, &f).unwrap());
    }

    #[test]
    fn bottleneck_examples() {
        let r = bottleneck_violation_relation().unwrap();
        let report = check_bottleneck(&r).unwrap();
        assert!(!report.holds);
        // any product relation passes trivially
        let a = ObjectRef::finset(2);
        let prod = Relation::new(a.clone(), a.clone(), [(0usize, 0usize), (0, 1)]).unwrap();
        assert!(check_bottleneck(&prod).unwrap().holds);
        // subgroup relations always pass
        let z4 = ObjectRef::fingrp(&tables::cyclic(4)).unwrap();
        for r in rel::enumerate_relations(&z4, &z4, 10_000).unwrap() {
            assert!(check_bottleneck(&r).unwrap().holds);
        }
    }

    #[test]
    fn unit_state_is_projection() {
        for f in [
            group_structure(&ObjectRef::fingrp(&tables::cyclic(3)).unwrap()).unwrap(),
            indiscrete(&ObjectRef::fingrp(&tables::cyclic(2)).unwrap()).unwrap(),
        ] {
            let report = check_state_projection(f.unit(), &f).unwrap();
            assert!(report.holds, "{}", report.detail);
        }
    }

    #[test]
    fn non_cp_state_fails_equations_somewhere() {
        // search FinSet structures for a state that respects no inverses
        // and breaks an equation; pins the existence of such a witness
        let f = group_structure_in_finset(&tables::cyclic(3)).unwrap();
        let a = f.carrier();
        let bad = Relation::new(
            backend::terminal(BackendKind::FinSet),
            a.clone(),
            [(0usize, 1usize)],
        )
        .unwrap();
        let triv = trivial_structure(BackendKind::FinSet).unwrap();
        assert!(!crate::cp::is_completely_positive(&bad, &triv, &f)
            .unwrap()
            .is_cp());
        let (eq1, eq2) = projection_equations(&bad, &f).unwrap();
        assert!(!(eq1 && eq2));
        assert!(matches!(
            check_state_projection(&bad, &f),
            Err(Error::NotCP(_))
        ));
    }
}

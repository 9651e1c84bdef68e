//! The CP construction on `Rel(C)`: Choi matrices, complete positivity,
//! the respects-inverses equivalence, and closure under composition.
//!
//! The Choi matrix of `R: A -> B` between structures is built by
//! evaluating the bent-wire diagram (the source structure's
//! comultiplication below, the target structure's multiplication above,
//! conjugated by swaps). It must agree with the elementwise formula
//! `S((a,b),(a',b')) iff R(inv(a') . a, b' . inv(b))` computed through the
//! underlying groupoids, where the composites carry their composability
//! side conditions `t(a) = t(a')` and `s(b) = s(b')`; the diagram route is
//! authoritative, the formula is the cross-check.

use crate::backend::{self, ObjectRef};
use crate::diagram::{self, dg, gen, seq, tens, DiagramTerm, Env};
use crate::error::{Error, Result};
use crate::frobenius::{check_frobenius, to_groupoid, FrobeniusStructure};
use crate::groupoid::{self, InternalGroupoid};
use crate::rel::{self, PosConditionViolation, PositivityWitness, Relation};
use std::collections::BTreeSet;

/// A morphism of the CP category: a relation between structure carriers
/// whose Choi matrix is positive. The cached Choi relation and witness are
/// derivable and excluded from equality.
#[derive(Debug, Clone)]
pub struct CpMorphism {
    source: FrobeniusStructure,
    target: FrobeniusStructure,
    rel: Relation,
    choi: Relation,
    witness: Option<PositivityWitness>,
}

impl PartialEq for CpMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.rel == other.rel
    }
}

impl Eq for CpMorphism {}

impl CpMorphism {
    /// Wrap a relation as a CP morphism, verifying Choi positivity.
    pub fn new(
        source: FrobeniusStructure,
        target: FrobeniusStructure,
        rel: Relation,
    ) -> Result<CpMorphism> {
        let ctx = CpContext::new(&source, &target)?;
        CpMorphism::new_in(&ctx, rel)
    }

    /// As [`CpMorphism::new`], reusing a prepared context.
    pub fn new_in(ctx: &CpContext, rel: Relation) -> Result<CpMorphism> {
        let evidence = ctx.evidence(&rel)?;
        match evidence.witness {
            Some(witness) => Ok(CpMorphism {
                source: ctx.f_a.clone(),
                target: ctx.f_b.clone(),
                rel,
                choi: evidence.choi,
                witness: Some(witness),
            }),
            None => Err(Error::NotCP(format!(
                "Choi matrix violates the positivity condition at {:?}",
                evidence.violation
            ))),
        }
    }

    pub fn identity(structure: &FrobeniusStructure) -> Result<CpMorphism> {
        CpMorphism::new(
            structure.clone(),
            structure.clone(),
            rel::identity(structure.carrier()),
        )
    }

    pub fn source(&self) -> &FrobeniusStructure {
        &self.source
    }

    pub fn target(&self) -> &FrobeniusStructure {
        &self.target
    }

    pub fn rel(&self) -> &Relation {
        &self.rel
    }

    pub fn choi(&self) -> &Relation {
        &self.choi
    }

    pub fn witness(&self) -> Option<&PositivityWitness> {
        self.witness.as_ref()
    }
}

/// Outcome of a complete-positivity check: the Choi relation plus either a
/// positivity witness or the violating pair of the positivity condition.
#[derive(Debug, Clone)]
pub struct CpEvidence {
    pub choi: Relation,
    pub witness: Option<PositivityWitness>,
    pub violation: Option<PosConditionViolation>,
}

impl CpEvidence {
    pub fn is_cp(&self) -> bool {
        self.witness.is_some()
    }
}

fn require_boundaries(
    r: &Relation,
    f_a: &FrobeniusStructure,
    f_b: &FrobeniusStructure,
) -> Result<()> {
    if r.dom() != f_a.carrier() || r.cod() != f_b.carrier() {
        return Err(Error::ObjectMismatch(
            "relation endpoints must be the structures' carriers".into(),
        ));
    }
    Ok(())
}

fn require_frobenius(f: &FrobeniusStructure) -> Result<()> {
    let report = check_frobenius(f)?;
    if !report.passed() {
        return Err(Error::NotFrobenius(format!(
            "failing axioms: {}",
            report.failing().join(", ")
        )));
    }
    Ok(())
}

/// The bent-wire Choi term, conjugated by swaps so that its boundary is
/// `A (x) B` on both sides.
fn choi_term(a: &ObjectRef, b: &ObjectRef) -> DiagramTerm {
    let r = gen("r", a, b);
    let m_a = DiagramTerm::Gen {
        name: "m_a".into(),
        dom: vec![a.clone(), a.clone()],
        cod: vec![a.clone()],
    };
    let m_b = DiagramTerm::Gen {
        name: "m_b".into(),
        dom: vec![b.clone(), b.clone()],
        cod: vec![b.clone()],
    };
    let id_a = DiagramTerm::Id(vec![a.clone()]);
    let id_b = DiagramTerm::Id(vec![b.clone()]);
    let stage1 = tens(id_b.clone(), dg(m_a));
    let stage2 = tens(id_b.clone(), tens(r, id_a.clone()));
    let stage3 = tens(m_b, id_a.clone());
    seq(
        DiagramTerm::Swap(a.clone(), b.clone()),
        seq(seq(seq(stage1, stage2), stage3), DiagramTerm::Swap(b.clone(), a.clone())),
    )
}

fn choi_diagram_route(
    r: &Relation,
    f_a: &FrobeniusStructure,
    f_b: &FrobeniusStructure,
) -> Result<Relation> {
    let env = Env::new()
        .bind("r", r.clone())
        .bind("m_a", f_a.mult().clone())
        .bind("m_b", f_b.mult().clone());
    diagram::evaluate(&choi_term(f_a.carrier(), f_b.carrier()), &env)
}

fn choi_formula_route(
    r: &Relation,
    g_a: &InternalGroupoid,
    g_b: &InternalGroupoid,
) -> Result<Relation> {
    let (na, nb) = (g_a.c1.size(), g_b.c1.size());
    let ab = backend::product(&g_a.c1, &g_b.c1)?;
    let mut pairs = BTreeSet::new();
    for a in 0..na {
        for b in 0..nb {
            for a2 in 0..na {
                // inv(a') . a needs t(a) = t(a')
                if g_a.t.apply(a) != g_a.t.apply(a2) {
                    continue;
                }
                let u = g_a.compose_elems(g_a.inv.apply(a2), a)?;
                for b2 in 0..nb {
                    // b' . inv(b) needs s(b) = s(b')
                    if g_b.s.apply(b) != g_b.s.apply(b2) {
                        continue;
                    }
                    let v = g_b.compose_elems(b2, g_b.inv.apply(b))?;
                    if r.contains(u, v) {
                        pairs.insert((
                            backend::pair_index(nb, a, b),
                            backend::pair_index(nb, a2, b2),
                        ));
                    }
                }
            }
        }
    }
    Relation::new(ab.clone(), ab, pairs)
}

/// A validated pair of structures with their underlying groupoids, ready
/// for repeated Choi computations. Validation and the groupoid
/// construction run once here instead of once per relation; results are
/// identical to the per-call path.
pub struct CpContext {
    f_a: FrobeniusStructure,
    f_b: FrobeniusStructure,
    g_a: InternalGroupoid,
    g_b: InternalGroupoid,
}

impl CpContext {
    pub fn new(f_a: &FrobeniusStructure, f_b: &FrobeniusStructure) -> Result<CpContext> {
        require_frobenius(f_a)?;
        require_frobenius(f_b)?;
        Ok(CpContext {
            f_a: f_a.clone(),
            f_b: f_b.clone(),
            g_a: to_groupoid(f_a)?,
            g_b: to_groupoid(f_b)?,
        })
    }

    /// Both Choi routes, which must agree.
    pub fn choi(&self, r: &Relation) -> Result<Relation> {
        require_boundaries(r, &self.f_a, &self.f_b)?;
        let by_diagram = choi_diagram_route(r, &self.f_a, &self.f_b)?;
        let by_formula = choi_formula_route(r, &self.g_a, &self.g_b)?;
        if by_diagram != by_formula {
            return Err(Error::InternalError(
                "Choi diagram and elementwise routes disagree".into(),
            ));
        }
        Ok(by_diagram)
    }

    /// Fast verdict: the positivity condition on the Choi relation, which
    /// characterizes positivity over these backends.
    pub fn is_cp(&self, r: &Relation) -> Result<bool> {
        rel::satisfies_pos_condition(&self.choi(r)?)
    }

    /// Full verdict with a witness or violating pair.
    pub fn evidence(&self, r: &Relation) -> Result<CpEvidence> {
        let choi_rel = self.choi(r)?;
        let witness = rel::is_positive(&choi_rel)?;
        let violation = if witness.is_none() {
            rel::pos_condition_violation(&choi_rel)?
        } else {
            None
        };
        Ok(CpEvidence {
            choi: choi_rel,
            witness,
            violation,
        })
    }

    pub fn source_groupoid(&self) -> &InternalGroupoid {
        &self.g_a
    }

    pub fn target_groupoid(&self) -> &InternalGroupoid {
        &self.g_b
    }

    /// Eq. (4) against the prepared groupoids.
    pub fn respects_inverses(&self, r: &Relation) -> Result<bool> {
        groupoid::respects_inverses(r, &self.g_a, &self.g_b)
    }
}

/// The Choi relation of `r: A -> B`, an endo-relation on `A (x) B`.
/// Both routes are computed and must agree.
pub fn choi(
    r: &Relation,
    f_a: &FrobeniusStructure,
    f_b: &FrobeniusStructure,
) -> Result<Relation> {
    CpContext::new(f_a, f_b)?.choi(r)
}

/// Complete positivity of `r` as a morphism between structures, with the
/// Choi relation and a witness or violation as evidence.
pub fn is_completely_positive(
    r: &Relation,
    f_a: &FrobeniusStructure,
    f_b: &FrobeniusStructure,
) -> Result<CpEvidence> {
    CpContext::new(f_a, f_b)?.evidence(r)
}

/// Per-relation verdict pair produced by the exhaustive equivalence check.
#[derive(Debug, Clone)]
pub struct EquivDisagreement {
    pub rel: Relation,
    pub completely_positive: bool,
    pub respects_inverses: bool,
}

/// Report of the exhaustive `CP iff respects-inverses` sweep.
#[derive(Debug, Clone)]
pub struct EquivReport {
    pub relations_checked: usize,
    pub cp_count: usize,
    pub disagreements: Vec<EquivDisagreement>,
}

impl EquivReport {
    pub fn holds(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Enumerate every relation between the two carriers and compare complete
/// positivity against the inverse-respecting condition on the underlying
/// groupoids. Positively regular backends must produce no disagreements.
pub fn respects_inverses_equiv_check(
    f_a: &FrobeniusStructure,
    f_b: &FrobeniusStructure,
    budget: usize,
) -> Result<EquivReport> {
    let ctx = CpContext::new(f_a, f_b)?;
    let relations = rel::enumerate_relations(f_a.carrier(), f_b.carrier(), budget)?;
    let mut report = EquivReport {
        relations_checked: relations.len(),
        cp_count: 0,
        disagreements: Vec::new(),
    };
    for r in relations {
        let cp = ctx.is_cp(&r)?;
        let ri = ctx.respects_inverses(&r)?;
        if cp {
            report.cp_count += 1;
        }
        if cp != ri {
            report.disagreements.push(EquivDisagreement {
                rel: r,
                completely_positive: cp,
                respects_inverses: ri,
            });
        }
    }
    Ok(report)
}

/// Compose CP morphisms; the composite's Choi matrix is re-verified
/// positive, and a failure there contradicts closure of CP and is an
/// internal error.
pub fn cp_compose(f: &CpMorphism, g: &CpMorphism) -> Result<CpMorphism> {
    let ctx = CpContext::new(&f.source, &g.target)?;
    cp_compose_in(&ctx, f, g)
}

/// As [`cp_compose`], reusing a prepared context for `(f.source, g.target)`.
pub fn cp_compose_in(ctx: &CpContext, f: &CpMorphism, g: &CpMorphism) -> Result<CpMorphism> {
    if f.target != g.source {
        return Err(Error::ObjectMismatch(
            "cp_compose needs f.target = g.source".into(),
        ));
    }
    if ctx.f_a != f.source || ctx.f_b != g.target {
        return Err(Error::ObjectMismatch(
            "context does not match the composite's boundary structures".into(),
        ));
    }
    let composed = rel::compose(&f.rel, &g.rel)?;
    CpMorphism::new_in(ctx, composed).map_err(|e| match e {
        Error::NotCP(msg) => Error::InternalError(format!(
            "composite of CP morphisms failed positivity: {msg}"
        )),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::tables;
    use crate::frobenius::{group_structure, group_structure_in_finset, indiscrete};

    fn z2_finset() -> FrobeniusStructure {
        group_structure_in_finset(&tables::cyclic(2)).unwrap()
    }

    #[test]
    fn choi_of_identity_on_z2() {
        let f = z2_finset();
        let id = rel::identity(f.carrier());
        let c = choi(&id, &f, &f).unwrap();
        // pairs ((a,b),(a',b')) with a + a' = b + b'
        let mut expected = BTreeSet::new();
        for a in 0..2usize {
            for b in 0..2usize {
                for a2 in 0..2usize {
                    for b2 in 0..2usize {
                        if (a + a2) % 2 == (b + b2) % 2 {
                            expected.insert((a * 2 + b, a2 * 2 + b2));
                        }
                    }
                }
            }
        }
        assert_eq!(c.graph(), &expected);
        assert!(rel::is_positive(&c).unwrap().is_some());
    }

    #[test]
    fn empty_relation_is_cp() {
        let f = z2_finset();
        let empty = Relation::new(f.carrier().clone(), f.carrier().clone(), []).unwrap();
        let ev = is_completely_positive(&empty, &f, &f).unwrap();
        assert!(ev.is_cp());
        assert!(ev.choi.is_empty());
    }

    #[test]
    fn single_pair_violates_cp() {
        // {(g, id)} for non-identity g on the Z3 group structure
        let f = group_structure_in_finset(&tables::cyclic(3)).unwrap();
        let r = Relation::new(f.carrier().clone(), f.carrier().clone(), [(1usize, 0usize)])
            .unwrap();
        let ev = is_completely_positive(&r, &f, &f).unwrap();
        assert!(!ev.is_cp());
        assert!(ev.violation.is_some());
    }

    #[test]
    fn identity_morphism_is_cp() {
        for f in [
            z2_finset(),
            indiscrete(&ObjectRef::finset(2)).unwrap(),
            group_structure(&ObjectRef::fingrp(&tables::cyclic(2)).unwrap()).unwrap(),
        ] {
            assert!(CpMorphism::identity(&f).is_ok());
        }
    }

    #[test]
    fn canonical_broadcast_is_cp() {
        // comultiplication of a commutative structure
        let f = z2_finset();
        let target = crate::frobenius::tensor_structure(&f, &f).unwrap();
        let comult = rel::dagger(f.mult());
        let ev = is_completely_positive(&comult, &f, &target).unwrap();
        assert!(ev.is_cp());
    }

    #[test]
    fn equivalence_on_finset_z2() {
        let f = z2_finset();
        let report = respects_inverses_equiv_check(&f, &f, 100_000).unwrap();
        assert_eq!(report.relations_checked, 16);
        assert!(report.holds());
    }

    #[test]
    fn equivalence_mixed_structures() {
        let f = z2_finset();
        let ind = indiscrete(&ObjectRef::finset(2)).unwrap();
        let report = respects_inverses_equiv_check(&ind, &f, 100_000).unwrap();
        assert_eq!(report.relations_checked, 256);
        assert!(report.holds());
    }

    #[test]
    fn composition_preserves_cp() {
        let f = z2_finset();
        let g_a = to_groupoid(&f).unwrap();
        let all = rel::enumerate_relations(f.carrier(), f.carrier(), 1000).unwrap();
        let cps: Vec<CpMorphism> = all
            .into_iter()
            .filter(|r| {
                groupoid::respects_inverses(r, &g_a, &g_a).unwrap()
            })
            .map(|r| CpMorphism::new(f.clone(), f.clone(), r).unwrap())
            .collect();
        assert!(!cps.is_empty());
        for x in &cps {
            for y in &cps {
                let composed = cp_compose(x, y).unwrap();
                assert_eq!(composed.source(), &f);
            }
        }
        // identity laws
        let id = CpMorphism::identity(&f).unwrap();
        for x in &cps {
            assert_eq!(&cp_compose(&id, x).unwrap(), x);
            assert_eq!(&cp_compose(x, &id).unwrap(), x);
        }
    }

    #[test]
    fn dagger_of_cp_is_cp() {
        let f = z2_finset();
        let ind = indiscrete(&ObjectRef::finset(2)).unwrap();
        let g_f = to_groupoid(&f).unwrap();
        let g_i = to_groupoid(&ind).unwrap();
        for r in rel::enumerate_relations(f.carrier(), ind.carrier(), 10_000).unwrap() {
            let fwd = is_completely_positive(&r, &f, &ind).unwrap().is_cp();
            let bwd = is_completely_positive(&rel::dagger(&r), &ind, &f)
                .unwrap()
                .is_cp();
            assert_eq!(fwd, bwd);
            // and CP matches respects-inverses both ways
            assert_eq!(
                fwd,
                groupoid::respects_inverses(&r, &g_f, &g_i).unwrap()
            );
        }
    }
}

//! The category `Rel(C)` over each backend.
//!
//! A morphism `A -> B` is a validated subobject of `A x B`, stored as an
//! explicit sorted set of element-index pairs. Composition follows the
//! regular-logic formula `S . R = {(a,c) | exists b. R(a,b) and S(b,c)}`;
//! `compose(r, s)` takes its arguments in diagrammatic order (`r` runs
//! first). Subobject validation is re-run on every constructed relation.

use crate::backend::{self, BackendKind, ObjectRef};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// A relation `dom -> cod`: a subobject of the product carrier presented as
/// sorted `(dom index, cod index)` pairs. Equality is equality of
/// `(dom, cod, graph)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    dom: ObjectRef,
    cod: ObjectRef,
    graph: Arc<BTreeSet<(usize, usize)>>,
}

/// Exhibits a relation as positive: `r = compose(s, dagger(s))`, i.e.
/// `r(a,b) iff exists m. s(a,m) and s(b,m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityWitness {
    pub mid: ObjectRef,
    pub s: Relation,
}

impl PositivityWitness {
    /// Re-compose the witness and compare against `r`.
    pub fn verifies(&self, r: &Relation) -> bool {
        match compose(&self.s, &dagger(&self.s)) {
            Ok(c) => &c == r,
            Err(_) => false,
        }
    }
}

/// A pair violating the positivity condition `R(a,b) => R(a,a) and R(b,a)`,
/// with the missing pair that would be required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosConditionViolation {
    pub pair: (usize, usize),
    pub missing: (usize, usize),
}

impl Relation {
    /// Build and validate a relation. Rejects graphs that are not
    /// subobjects of `dom x cod` in the backend's variety.
    pub fn new<I>(dom: ObjectRef, cod: ObjectRef, pairs: I) -> Result<Relation>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if dom.kind() != cod.kind() {
            return Err(Error::KindMismatch(
                "relation endpoints must share a backend".into(),
            ));
        }
        let graph: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        for &(a, b) in &graph {
            if a >= dom.size() {
                return Err(Error::IndexOutOfRange {
                    index: a,
                    size: dom.size(),
                });
            }
            if b >= cod.size() {
                return Err(Error::IndexOutOfRange {
                    index: b,
                    size: cod.size(),
                });
            }
        }
        let prod = backend::product(&dom, &cod)?;
        let indices: BTreeSet<usize> = graph
            .iter()
            .map(|&(a, b)| backend::pair_index(cod.size(), a, b))
            .collect();
        if !backend::is_subobject(&prod, &indices)? {
            return Err(Error::MalformedAlgebra(
                "graph is not a subobject of the product carrier".into(),
            ));
        }
        Ok(Relation {
            dom,
            cod,
            graph: Arc::new(graph),
        })
    }

    pub fn dom(&self) -> &ObjectRef {
        &self.dom
    }

    pub fn cod(&self) -> &ObjectRef {
        &self.cod
    }

    pub fn graph(&self) -> &BTreeSet<(usize, usize)> {
        &self.graph
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.graph.contains(&(a, b))
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn is_endo(&self) -> bool {
        self.dom == self.cod
    }

    fn require_endo(&self, what: &str) -> Result<()> {
        if !self.is_endo() {
            return Err(Error::ObjectMismatch(format!(
                "{what} requires an endo-relation"
            )));
        }
        Ok(())
    }
}

/// Graph size up to which relations produced by composition, tensor and
/// the structural constructors are re-validated as subobjects. They are
/// subobjects by construction (images of subalgebras under homomorphisms),
/// so the re-check only guards against implementation bugs; above this
/// size the quadratic closure check stops being negligible and is skipped.
const CONSTRUCTED_VALIDATION_MAX: usize = 256;

fn internal(dom: ObjectRef, cod: ObjectRef, pairs: BTreeSet<(usize, usize)>) -> Result<Relation> {
    if dom.kind() == BackendKind::FinSet || pairs.len() <= CONSTRUCTED_VALIDATION_MAX {
        Relation::new(dom, cod, pairs).map_err(|e| {
            Error::InternalError(format!("constructed relation failed validation: {e}"))
        })
    } else {
        Ok(Relation {
            dom,
            cod,
            graph: Arc::new(pairs),
        })
    }
}

/// Diagrammatic composition: `r` first, then `s`.
pub fn compose(r: &Relation, s: &Relation) -> Result<Relation> {
    if r.cod != s.dom {
        return Err(Error::ObjectMismatch(
            "compose needs r.cod = s.dom".into(),
        ));
    }
    let mut by_mid: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(b, c) in s.graph.iter() {
        by_mid.entry(b).or_default().push(c);
    }
    let mut pairs = BTreeSet::new();
    for &(a, b) in r.graph.iter() {
        if let Some(cs) = by_mid.get(&b) {
            for &c in cs {
                pairs.insert((a, c));
            }
        }
    }
    internal(r.dom.clone(), s.cod.clone(), pairs)
}

/// Transpose: `dagger(r)(b,a) iff r(a,b)`.
pub fn dagger(r: &Relation) -> Relation {
    let pairs: BTreeSet<(usize, usize)> = r.graph.iter().map(|&(a, b)| (b, a)).collect();
    Relation {
        dom: r.cod.clone(),
        cod: r.dom.clone(),
        graph: Arc::new(pairs),
    }
}

/// Monoidal product on morphisms, over the product of carriers.
pub fn tensor(r: &Relation, s: &Relation) -> Result<Relation> {
    let dom = backend::product(&r.dom, &s.dom)?;
    let cod = backend::product(&r.cod, &s.cod)?;
    let mut pairs = BTreeSet::new();
    for &(a, b) in r.graph.iter() {
        for &(c, d) in s.graph.iter() {
            pairs.insert((
                backend::pair_index(s.dom.size(), a, c),
                backend::pair_index(s.cod.size(), b, d),
            ));
        }
    }
    internal(dom, cod, pairs)
}

pub fn identity(a: &ObjectRef) -> Relation {
    let pairs: BTreeSet<(usize, usize)> = a.elements().map(|i| (i, i)).collect();
    Relation {
        dom: a.clone(),
        cod: a.clone(),
        graph: Arc::new(pairs),
    }
}

/// The canonical cup `I -> A x A`, the state `{(a,b) | a = b}`.
pub fn cup(a: &ObjectRef) -> Result<Relation> {
    let i = backend::terminal(a.kind());
    let aa = backend::product(a, a)?;
    let pairs: BTreeSet<(usize, usize)> = a
        .elements()
        .map(|x| (0usize, backend::pair_index(a.size(), x, x)))
        .collect();
    internal(i, aa, pairs)
}

/// The cap `A x A -> I`, dagger of the cup.
pub fn cap(a: &ObjectRef) -> Result<Relation> {
    Ok(dagger(&cup(a)?))
}

pub fn swap(a: &ObjectRef, b: &ObjectRef) -> Result<Relation> {
    let ab = backend::product(a, b)?;
    let ba = backend::product(b, a)?;
    let mut pairs = BTreeSet::new();
    for x in a.elements() {
        for y in b.elements() {
            pairs.insert((
                backend::pair_index(b.size(), x, y),
                backend::pair_index(a.size(), y, x),
            ));
        }
    }
    internal(ab, ba, pairs)
}

/// Graph of the unique homomorphism `A -> 1`.
pub fn delete(a: &ObjectRef) -> Result<Relation> {
    let i = backend::terminal(a.kind());
    internal(a.clone(), i, a.elements().map(|x| (x, 0usize)).collect())
}

/// Dagger of [`delete`]: the uniform state `I -> A`.
pub fn codelete(a: &ObjectRef) -> Result<Relation> {
    Ok(dagger(&delete(a)?))
}

/// The canonical cartesian diagonal `A -> A x A`, `a |-> (a, a)`. This is
/// the copying comonoid of `Rel(C)`, distinct from any Frobenius structure
/// carried by `A`.
pub fn copy(a: &ObjectRef) -> Result<Relation> {
    let aa = backend::product(a, a)?;
    let pairs: BTreeSet<(usize, usize)> = a
        .elements()
        .map(|x| (x, backend::pair_index(a.size(), x, x)))
        .collect();
    internal(a.clone(), aa, pairs)
}

/// Subobject order: graph inclusion between parallel relations.
pub fn leq(r: &Relation, s: &Relation) -> Result<bool> {
    if r.dom != s.dom || r.cod != s.cod {
        return Err(Error::ObjectMismatch(
            "leq compares parallel relations".into(),
        ));
    }
    Ok(r.graph.is_subset(&s.graph))
}

/// Intersection of parallel relations.
pub fn meet(r: &Relation, s: &Relation) -> Result<Relation> {
    if r.dom != s.dom || r.cod != s.cod {
        return Err(Error::ObjectMismatch(
            "meet needs parallel relations".into(),
        ));
    }
    let pairs: BTreeSet<(usize, usize)> =
        r.graph.intersection(&s.graph).copied().collect();
    internal(r.dom.clone(), r.cod.clone(), pairs)
}

pub fn is_reflexive(r: &Relation) -> Result<bool> {
    r.require_endo("is_reflexive")?;
    Ok(r.dom.elements().all(|a| r.contains(a, a)))
}

pub fn is_symmetric(r: &Relation) -> Result<bool> {
    r.require_endo("is_symmetric")?;
    Ok(r.graph.iter().all(|&(a, b)| r.contains(b, a)))
}

pub fn is_transitive(r: &Relation) -> Result<bool> {
    r.require_endo("is_transitive")?;
    for &(a, b) in r.graph.iter() {
        for &(b2, c) in r.graph.iter() {
            if b == b2 && !r.contains(a, c) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_equivalence(r: &Relation) -> Result<bool> {
    Ok(is_reflexive(r)? && is_symmetric(r)? && is_transitive(r)?)
}

/// `R(a,b) and R(c,b) and R(c,d) => R(a,d)`.
pub fn is_difunctional(r: &Relation) -> bool {
    for &(a, b) in r.graph.iter() {
        for &(c, b2) in r.graph.iter() {
            if b != b2 {
                continue;
            }
            for &(c2, d) in r.graph.iter() {
                if c == c2 && !r.contains(a, d) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_total(r: &Relation) -> bool {
    let defined: BTreeSet<usize> = r.graph.iter().map(|&(a, _)| a).collect();
    r.dom.elements().all(|a| defined.contains(&a))
}

pub fn is_single_valued(r: &Relation) -> bool {
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for &(a, b) in r.graph.iter() {
        if let Some(&prev) = seen.get(&a) {
            if prev != b {
                return false;
            }
        }
        seen.insert(a, b);
    }
    true
}

pub fn is_map(r: &Relation) -> bool {
    is_total(r) && is_single_valued(r)
}

/// The positivity condition `R(a,b) => R(a,a) and R(b,a)`, which every
/// relation of the form `S-dagger . S` satisfies.
pub fn satisfies_pos_condition(r: &Relation) -> Result<bool> {
    Ok(pos_condition_violation(r)?.is_none())
}

/// First violating pair of the positivity condition, in graph order.
pub fn pos_condition_violation(r: &Relation) -> Result<Option<PosConditionViolation>> {
    r.require_endo("the positivity condition")?;
    for &(a, b) in r.graph.iter() {
        if !r.contains(a, a) {
            return Ok(Some(PosConditionViolation {
                pair: (a, b),
                missing: (a, a),
            }));
        }
        if !r.contains(b, a) {
            return Ok(Some(PosConditionViolation {
                pair: (a, b),
                missing: (b, a),
            }));
        }
    }
    Ok(None)
}

/// Decide positivity of an endo-relation and produce a witness.
///
/// All four backends are positively regular, so `r` is positive exactly
/// when it satisfies the positivity condition. The witness for FinSet is
/// `s = {(a,(a,b)), (a,(b,a)) | r(a,b)}` into `A x A`; in the Mal'cev
/// backends the condition forces `r` to be symmetric and transitive, so
/// `r` itself is a witness with middle object `A`. Witnesses are always
/// re-verified by composition before being returned.
pub fn is_positive(r: &Relation) -> Result<Option<PositivityWitness>> {
    r.require_endo("is_positive")?;
    let a_obj = r.dom.clone();
    if *r == identity(&a_obj) {
        return finish_witness(
            r,
            PositivityWitness {
                mid: a_obj.clone(),
                s: identity(&a_obj),
            },
        );
    }
    if pos_condition_violation(r)?.is_some() {
        return Ok(None);
    }
    let witness = if a_obj.kind() == BackendKind::FinSet {
        let aa = backend::product(&a_obj, &a_obj)?;
        let mut pairs = BTreeSet::new();
        for &(a, b) in r.graph.iter() {
            pairs.insert((a, backend::pair_index(a_obj.size(), a, b)));
            pairs.insert((a, backend::pair_index(a_obj.size(), b, a)));
        }
        PositivityWitness {
            mid: aa.clone(),
            s: Relation::new(a_obj.clone(), aa, pairs)?,
        }
    } else {
        PositivityWitness {
            mid: a_obj,
            s: r.clone(),
        }
    };
    finish_witness(r, witness)
}

fn finish_witness(
    r: &Relation,
    witness: PositivityWitness,
) -> Result<Option<PositivityWitness>> {
    if !witness.verifies(r) {
        return Err(Error::InternalError(
            "positivity witness failed re-verification".into(),
        ));
    }
    Ok(Some(witness))
}

/// Independent oracle: search for any witness `s: A -> X` with
/// `compose(s, dagger(s)) = r`. For FinSet, `X` ranges over sets of size
/// `0..=|A|^2` and `s` over all subsets; for the algebraic backends, `X`
/// ranges over `1` and `A` and `s` over all subalgebra relations. The mid
/// list is complete there: a positive relation in a Mal'cev variety is
/// symmetric and transitive, so it witnesses itself with `X = A`.
pub fn brute_force_positive(
    r: &Relation,
    budget: usize,
) -> Result<Option<PositivityWitness>> {
    r.require_endo("brute_force_positive")?;
    let a_obj = r.dom.clone();
    let mut tried = 0usize;
    let spend = |tried: &mut usize, n: usize| -> Result<()> {
        *tried += n;
        if *tried > budget {
            return Err(Error::EnumerationBudgetExceeded(format!(
                "positivity search exceeded {budget} candidates"
            )));
        }
        Ok(())
    };
    if a_obj.kind() == BackendKind::FinSet {
        for mid_size in 0..=a_obj.size() * a_obj.size() {
            let mid = ObjectRef::finset(mid_size);
            let cells = a_obj.size() * mid_size;
            if cells >= usize::BITS as usize - 1 {
                return Err(Error::EnumerationBudgetExceeded(
                    "search space too large for bitmask enumeration".into(),
                ));
            }
            spend(&mut tried, 1usize << cells)?;
            for mask in 0usize..(1 << cells) {
                let pairs: BTreeSet<(usize, usize)> = (0..cells)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| (i / mid_size.max(1), i % mid_size.max(1)))
                    .collect();
                let s = Relation::new(a_obj.clone(), mid.clone(), pairs)?;
                let w = PositivityWitness {
                    mid: mid.clone(),
                    s,
                };
                if w.verifies(r) {
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    } else {
        let mids = vec![backend::terminal(a_obj.kind()), a_obj.clone()];
        for mid in mids {
            let prod = backend::product(&a_obj, &mid)?;
            let subs = backend::enumerate_subobjects(&prod, budget)?;
            spend(&mut tried, subs.len())?;
            for sub in subs {
                let pairs: BTreeSet<(usize, usize)> = sub
                    .iter()
                    .map(|&i| backend::unpair_index(mid.size(), i))
                    .collect();
                let s = Relation::new(a_obj.clone(), mid.clone(), pairs)?;
                let w = PositivityWitness {
                    mid: mid.clone(),
                    s,
                };
                if w.verifies(r) {
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    }
}

/// All relations `a -> b`: subsets in FinSet, subalgebra graphs elsewhere,
/// in the deterministic order of [`backend::enumerate_subobjects`].
pub fn enumerate_relations(
    a: &ObjectRef,
    b: &ObjectRef,
    limit: usize,
) -> Result<Vec<Relation>> {
    let prod = backend::product(a, b)?;
    let subs = backend::enumerate_subobjects(&prod, limit)?;
    subs.into_iter()
        .map(|sub| {
            Relation::new(
                a.clone(),
                b.clone(),
                sub.iter().map(|&i| backend::unpair_index(b.size(), i)),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{tables, terminal};

    fn fs(n: usize) -> ObjectRef {
        ObjectRef::finset(n)
    }

    fn rel(dom: &ObjectRef, cod: &ObjectRef, pairs: &[(usize, usize)]) -> Relation {
        Relation::new(dom.clone(), cod.clone(), pairs.iter().copied()).unwrap()
    }

    #[test]
    fn compose_examples() {
        let a = fs(2);
        let swap_rel = rel(&a, &a, &[(0, 1), (1, 0)]);
        assert_eq!(compose(&swap_rel, &swap_rel).unwrap(), identity(&a));
        let r = rel(&a, &a, &[(0, 0), (1, 0)]);
        assert_eq!(compose(&identity(&a), &r).unwrap(), r);
        assert_eq!(compose(&r, &identity(&a)).unwrap(), r);
        // diagonal subgroup then the full subgroup, inside Z2
        let z2 = ObjectRef::fingrp(&tables::cyclic(2)).unwrap();
        let diag = identity(&z2);
        let full = rel(&z2, &z2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(compose(&diag, &full).unwrap(), full);
    }

    #[test]
    fn dagger_examples() {
        let a = fs(2);
        assert_eq!(dagger(&identity(&a)), identity(&a));
        let r = rel(&a, &a, &[(0, 1)]);
        assert_eq!(dagger(&r).graph(), &BTreeSet::from([(1, 0)]));
        assert_eq!(dagger(&dagger(&r)), r);
    }

    #[test]
    fn tensor_examples() {
        let a = fs(2);
        let b = fs(3);
        let t = tensor(&identity(&a), &identity(&b)).unwrap();
        assert_eq!(t, identity(&backend::product(&a, &b).unwrap()));
        let r = rel(&a, &a, &[(0, 0), (1, 0)]);
        let s = rel(&b, &b, &[(0, 1), (2, 2)]);
        assert_eq!(
            tensor(&r, &s).unwrap().graph().len(),
            r.graph().len() * s.graph().len()
        );
        let empty = rel(&a, &a, &[]);
        assert!(tensor(&r, &empty).unwrap().is_empty());
    }

    #[test]
    fn structural_maps() {
        let a = fs(2);
        let c = cup(&a).unwrap();
        assert_eq!(c.graph(), &BTreeSet::from([(0, 0), (0, 3)]));
        // snake equation: (id (x) cup) ; (cap (x) id) = id
        let a3 = fs(3);
        let lhs = compose(
            &tensor(&identity(&a3), &cup(&a3).unwrap()).unwrap(),
            &tensor(&cap(&a3).unwrap(), &identity(&a3)).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, identity(&a3));
        // delete then codelete on a nonempty carrier is the identity scalar
        let sc = compose(&codelete(&a).unwrap(), &delete(&a).unwrap()).unwrap();
        assert_eq!(sc, identity(&terminal(BackendKind::FinSet)));
        let cp = copy(&a).unwrap();
        assert_eq!(cp.graph(), &BTreeSet::from([(0, 0), (1, 3)]));
    }

    #[test]
    fn order_and_meet() {
        let a = fs(2);
        let r = rel(&a, &a, &[(0, 0), (1, 1)]);
        let empty = rel(&a, &a, &[]);
        assert!(leq(&r, &r).unwrap());
        assert!(leq(&empty, &r).unwrap());
        assert!(!leq(&r, &empty).unwrap());
        // two distinct lines in F2^2 meet in the zero subspace
        let v = ObjectRef::finvect(2, 2).unwrap();
        let l1 = rel(&v, &v, &[(0, 0), (1, 1)]);
        let l2 = rel(&v, &v, &[(0, 0), (1, 2)]);
        assert_eq!(meet(&l1, &l2).unwrap(), rel(&v, &v, &[(0, 0)]));
    }

    #[test]
    fn predicate_examples() {
        let a = fs(2);
        let r = rel(&a, &a, &[(0, 0), (1, 0), (1, 1)]);
        assert!(!is_difunctional(&r));
        assert!(is_reflexive(&r).unwrap());
        assert!(!is_symmetric(&r).unwrap());
        assert!(is_transitive(&r).unwrap());
        let eq = rel(&a, &a, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert!(is_equivalence(&eq).unwrap());
        assert!(is_difunctional(&eq));
        assert!(is_map(&identity(&a)));
        assert!(!is_total(&rel(&a, &a, &[(0, 0)])));
        assert!(!is_single_valued(&eq));
    }

    #[test]
    fn subgroup_relations_are_difunctional() {
        // every subgroup of G x H is difunctional; spot-check G = H = Z4
        let z4 = ObjectRef::fingrp(&tables::cyclic(4)).unwrap();
        for r in enumerate_relations(&z4, &z4, 10_000).unwrap() {
            assert!(is_difunctional(&r));
        }
    }

    #[test]
    fn pos_condition_examples() {
        let a = fs(2);
        assert!(!satisfies_pos_condition(&rel(&a, &a, &[(0, 1)])).unwrap());
        assert!(satisfies_pos_condition(&identity(&a)).unwrap());
        let full = rel(&a, &a, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert!(satisfies_pos_condition(&full).unwrap());
    }

    #[test]
    fn positivity_examples() {
        let a = fs(2);
        assert!(is_positive(&rel(&a, &a, &[(0, 1)])).unwrap().is_none());
        let full = rel(&a, &a, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        let w = is_positive(&full).unwrap().unwrap();
        assert_eq!(w.mid.size(), 4);
        assert!(w.verifies(&full));
        let w = is_positive(&identity(&a)).unwrap().unwrap();
        assert_eq!(w.s, identity(&a));
        // empty relation is positive with an empty witness
        let empty = rel(&a, &a, &[]);
        let w = brute_force_positive(&empty, 100_000).unwrap().unwrap();
        assert!(w.s.is_empty());
    }

    #[test]
    fn oracle_agrees_on_all_finset2_relations() {
        let a = fs(2);
        for mask in 0u32..16 {
            let pairs: Vec<(usize, usize)> = (0..4)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| (i / 2, i % 2))
                .collect();
            let r = rel(&a, &a, &pairs);
            let fast = is_positive(&r).unwrap();
            let slow = brute_force_positive(&r, 1_000_000).unwrap();
            assert_eq!(fast.is_some(), slow.is_some(), "mask {mask}");
            if let Some(w) = fast {
                assert!(w.verifies(&r));
            }
        }
    }

    #[test]
    fn oracle_agrees_on_group_relations() {
        for table in [tables::cyclic(2), tables::klein_four()] {
            let g = ObjectRef::fingrp(&table).unwrap();
            for r in enumerate_relations(&g, &g, 10_000).unwrap() {
                let fast = is_positive(&r).unwrap();
                let slow = brute_force_positive(&r, 1_000_000).unwrap();
                assert_eq!(fast.is_some(), slow.is_some());
            }
        }
    }

    #[test]
    fn invalid_graphs_rejected() {
        let z2 = ObjectRef::fingrp(&tables::cyclic(2)).unwrap();
        // {(0,1)} is not a subgroup of Z2 x Z2 (misses the identity pair)
        assert!(Relation::new(z2.clone(), z2.clone(), [(0usize, 1usize)]).is_err());
        let v = ObjectRef::finvect(2, 1).unwrap();
        assert!(Relation::new(v.clone(), v.clone(), []).is_err());
        let a = fs(2);
        assert!(Relation::new(a.clone(), a, [(5usize, 0usize)]).is_err());
    }

    #[test]
    fn dagger_is_contravariant() {
        let a = fs(2);
        let b = fs(3);
        let r = rel(&a, &b, &[(0, 1), (1, 2)]);
        let s = rel(&b, &a, &[(1, 0), (2, 0)]);
        let lhs = dagger(&compose(&r, &s).unwrap());
        let rhs = compose(&dagger(&s), &dagger(&r)).unwrap();
        assert_eq!(lhs, rhs);
    }
}

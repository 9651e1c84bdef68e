//! Special dagger Frobenius structures in `Rel(C)` and their bidirectional
//! correspondence with internal groupoids.
//!
//! A multiplication triple `M(x, y, z)` reads in diagrammatic order: `x`
//! runs first, so for a structure coming from a groupoid `z = m(y, x)`
//! under the groupoid module's "f after g" convention. Axioms are checked
//! twice, by elementwise regular formulas and by evaluating the defining
//! diagram equations; the two routes must agree or the checker reports an
//! internal error.

use crate::backend::{self, BackendKind, Hom, ObjectRef};
use crate::diagram::{self, dg, seq, tens, DiagramTerm, Env};
use crate::error::{Error, Result};
use crate::groupoid::{checked_groupoid, validate_groupoid, CompositionTable, InternalGroupoid};
use crate::rel::{self, Relation};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// An object with `mult: A (x) A -> A` and `unit: I -> A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusStructure {
    carrier: ObjectRef,
    mult: Relation,
    unit: Relation,
}

/// Verdicts for the five axiom groups, each computed by formula and by
/// diagram evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct FrobeniusReport {
    pub axioms: Vec<AxiomVerdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomVerdict {
    pub axiom: String,
    pub passed: bool,
}

impl FrobeniusReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.axioms
            .iter()
            .filter(|a| !a.passed)
            .map(|a| a.axiom.as_str())
            .collect()
    }
}

impl FrobeniusStructure {
    /// Shape-check the boundaries; axiom validation is [`check_frobenius`].
    pub fn new(carrier: ObjectRef, mult: Relation, unit: Relation) -> Result<FrobeniusStructure> {
        let sq = backend::product(&carrier, &carrier)?;
        if mult.dom() != &sq || mult.cod() != &carrier {
            return Err(Error::ObjectMismatch(
                "mult must run from the squared carrier to the carrier".into(),
            ));
        }
        let terminal = backend::terminal(carrier.kind());
        if unit.dom() != &terminal || unit.cod() != &carrier {
            return Err(Error::ObjectMismatch(
                "unit must be a state of the carrier".into(),
            ));
        }
        Ok(FrobeniusStructure {
            carrier,
            mult,
            unit,
        })
    }

    pub fn carrier(&self) -> &ObjectRef {
        &self.carrier
    }

    pub fn mult(&self) -> &Relation {
        &self.mult
    }

    pub fn unit(&self) -> &Relation {
        &self.unit
    }

    pub fn kind(&self) -> BackendKind {
        self.carrier.kind()
    }

    /// Unit elements as a set of carrier indices.
    pub fn unit_set(&self) -> BTreeSet<usize> {
        self.unit.graph().iter().map(|&(_, y)| y).collect()
    }

    /// Whether the triple `M(x, y, z)` is present.
    pub fn has_triple(&self, x: usize, y: usize, z: usize) -> bool {
        self.mult
            .contains(backend::pair_index(self.carrier.size(), x, y), z)
    }

    /// All triples `(x, y, z)` of the multiplication.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.carrier.size();
        self.mult
            .graph()
            .iter()
            .map(|&(p, z)| {
                let (x, y) = backend::unpair_index(n, p);
                (x, y, z)
            })
            .collect()
    }

    /// The unit derived from the multiplication alone: `{a | M(a,a,a)}`.
    pub fn derived_unit_set(&self) -> BTreeSet<usize> {
        self.carrier
            .elements()
            .filter(|&a| self.has_triple(a, a, a))
            .collect()
    }

    fn term_env(&self) -> (DiagramTerm, DiagramTerm, Env) {
        let a = &self.carrier;
        let m = DiagramTerm::Gen {
            name: "m".into(),
            dom: vec![a.clone(), a.clone()],
            cod: vec![a.clone()],
        };
        let u = DiagramTerm::Gen {
            name: "u".into(),
            dom: vec![],
            cod: vec![a.clone()],
        };
        let env = Env::new()
            .bind("m", self.mult.clone())
            .bind("u", self.unit.clone());
        (m, u, env)
    }
}

fn quad_key(n: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * n + b) * n + c) * n + d
}

struct MultIndex {
    by_args: BTreeMap<(usize, usize), Vec<usize>>,
    by_first: BTreeMap<usize, Vec<(usize, usize)>>,
}

impl MultIndex {
    fn new(f: &FrobeniusStructure) -> MultIndex {
        let mut by_args: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        let mut by_first: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (x, y, z) in f.triples() {
            by_args.entry((x, y)).or_default().push(z);
            by_first.entry(x).or_default().push((y, z));
        }
        MultIndex { by_args, by_first }
    }
}

fn unitality_formulas(f: &FrobeniusStructure, idx: &MultIndex) -> (bool, bool) {
    let units = f.unit_set();
    let n = f.carrier.size();
    // U1: (exists x in U) M(x,a,a') iff a = a'
    let mut u1 = true;
    'u1: for &x in &units {
        if let Some(pairs) = idx.by_first.get(&x) {
            for &(a, a2) in pairs {
                if a != a2 {
                    u1 = false;
                    break 'u1;
                }
            }
        }
    }
    if u1 {
        for a in 0..n {
            if !units.iter().any(|&x| f.has_triple(x, a, a)) {
                u1 = false;
                break;
            }
        }
    }
    // U2: (exists x in U) M(a,x,a') iff a = a'
    let mut u2 = true;
    'u2: for (&(a, y), zs) in &idx.by_args {
        if units.contains(&y) {
            for &z in zs {
                if z != a {
                    u2 = false;
                    break 'u2;
                }
            }
        }
    }
    if u2 {
        for a in 0..n {
            if !units.iter().any(|&x| f.has_triple(a, x, a)) {
                u2 = false;
                break;
            }
        }
    }
    (u1, u2)
}

fn associativity_formula(f: &FrobeniusStructure, idx: &MultIndex) -> bool {
    let n = f.carrier.size();
    if n == 0 {
        return true;
    }
    let mut lhs = vec![false; n * n * n * n];
    let mut rhs = vec![false; n * n * n * n];
    // LHS(a,b,c,d): exists e. M(a,b,e) and M(e,c,d)
    for (x, y, z) in f.triples() {
        if let Some(pairs) = idx.by_first.get(&z) {
            for &(c, d) in pairs {
                lhs[quad_key(n, x, y, c, d)] = true;
            }
        }
    }
    // RHS(a,b,c,d): exists e. M(b,c,e) and M(a,e,d)
    for (b, c, e) in f.triples() {
        for a in 0..n {
            if let Some(zs) = idx.by_args.get(&(a, e)) {
                for &d in zs {
                    rhs[quad_key(n, a, b, c, d)] = true;
                }
            }
        }
    }
    lhs == rhs
}

fn speciality_formula(f: &FrobeniusStructure, idx: &MultIndex) -> bool {
    // single-valued and surjective
    let n = f.carrier.size();
    let mut hit = vec![false; n];
    for (_, zs) in idx.by_args.iter() {
        if zs.len() > 1 {
            return false;
        }
        for &z in zs {
            hit[z] = true;
        }
    }
    hit.into_iter().all(|h| h)
}

fn frobenius_law_formula(f: &FrobeniusStructure, idx: &MultIndex) -> bool {
    let n = f.carrier.size();
    if n == 0 {
        return true;
    }
    let mut lhs = vec![false; n * n * n * n];
    let mut rhs = vec![false; n * n * n * n];
    // LHS(a,b,c,d): exists e. M(a,e,c) and M(e,d,b)
    for (a, e, c) in f.triples() {
        if let Some(pairs) = idx.by_first.get(&e) {
            for &(d, b) in pairs {
                lhs[quad_key(n, a, b, c, d)] = true;
            }
        }
    }
    // RHS(a,b,c,d): exists e. M(c,e,a) and M(e,b,d)
    for (c, e, a) in f.triples() {
        if let Some(pairs) = idx.by_first.get(&e) {
            for &(b, d) in pairs {
                rhs[quad_key(n, a, b, c, d)] = true;
            }
        }
    }
    lhs == rhs
}

/// Check the five axiom groups. Each is evaluated both by its elementwise
/// regular formula and by the corresponding diagram equation; a mismatch
/// between the routes is an internal error.
pub fn check_frobenius(f: &FrobeniusStructure) -> Result<FrobeniusReport> {
    let idx = MultIndex::new(f);
    let (u1_formula, u2_formula) = unitality_formulas(f, &idx);
    let a_formula = associativity_formula(f, &idx);
    let s_formula = speciality_formula(f, &idx);
    let f_formula = frobenius_law_formula(f, &idx);

    let (m, u, env) = f.term_env();
    let a_obj = &f.carrier;
    let id_a = DiagramTerm::Id(vec![a_obj.clone()]);
    let u1_diag = diagram::terms_equal(&seq(tens(u.clone(), id_a.clone()), m.clone()), &id_a, &env)?;
    let u2_diag = diagram::terms_equal(&seq(tens(id_a.clone(), u.clone()), m.clone()), &id_a, &env)?;
    let a_diag = diagram::terms_equal(
        &seq(tens(m.clone(), id_a.clone()), m.clone()),
        &seq(tens(id_a.clone(), m.clone()), m.clone()),
        &env,
    )?;
    let s_diag = diagram::terms_equal(&seq(dg(m.clone()), m.clone()), &id_a, &env)?;
    let f_diag = diagram::terms_equal(
        &seq(tens(dg(m.clone()), id_a.clone()), tens(id_a.clone(), m.clone())),
        &seq(tens(id_a.clone(), dg(m.clone())), tens(m.clone(), id_a.clone())),
        &env,
    )?;

    let pairs = [
        ("U1", u1_formula, u1_diag),
        ("U2", u2_formula, u2_diag),
        ("A", a_formula, a_diag),
        ("S", s_formula, s_diag),
        ("F", f_formula, f_diag),
    ];
    let mut axioms = Vec::new();
    for (name, formula, diag) in pairs {
        if formula != diag {
            return Err(Error::InternalError(format!(
                "axiom {name}: formula route says {formula}, diagram route says {diag}"
            )));
        }
        axioms.push(AxiomVerdict {
            axiom: name.to_string(),
            passed: formula,
        });
    }
    Ok(FrobeniusReport { axioms })
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

/// `mult . swap = mult`.
pub fn is_commutative(f: &FrobeniusStructure) -> Result<bool> {
    let sw = rel::swap(&f.carrier, &f.carrier)?;
    Ok(rel::compose(&sw, &f.mult)? == f.mult)
}

/// The canonical structure on `A x A` corresponding to the indiscrete
/// groupoid on `A`: triples `M((a,b),(b,c)) = (a,c)`, unit the diagonal.
pub fn indiscrete(a: &ObjectRef) -> Result<FrobeniusStructure> {
    let n = a.size();
    let sq = backend::product(a, a)?;
    let sq2 = backend::product(&sq, &sq)?;
    let mut mult_pairs = BTreeSet::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let first = backend::pair_index(n, x, y);
                let second = backend::pair_index(n, y, z);
                let out = backend::pair_index(n, x, z);
                mult_pairs.insert((backend::pair_index(sq.size(), first, second), out));
            }
        }
    }
    let mult = Relation::new(sq2, sq.clone(), mult_pairs)?;
    let unit = Relation::new(
        backend::terminal(a.kind()),
        sq.clone(),
        (0..n).map(|x| (0usize, backend::pair_index(n, x, x))),
    )?;
    FrobeniusStructure::new(sq, mult, unit)
}

/// Tensor of structures: componentwise multiplication on the product
/// carrier, product unit.
pub fn tensor_structure(
    f: &FrobeniusStructure,
    g: &FrobeniusStructure,
) -> Result<FrobeniusStructure> {
    let (_na, nc) = (f.carrier.size(), g.carrier.size());
    let carrier = backend::product(&f.carrier, &g.carrier)?;
    let sq = backend::product(&carrier, &carrier)?;
    let mut pairs = BTreeSet::new();
    for (a, b, e) in f.triples() {
        for (c, d, h) in g.triples() {
            let in1 = backend::pair_index(nc, a, c);
            let in2 = backend::pair_index(nc, b, d);
            let out = backend::pair_index(nc, e, h);
            pairs.insert((backend::pair_index(carrier.size(), in1, in2), out));
        }
    }
    let mult = Relation::new(sq, carrier.clone(), pairs)?;
    let mut unit_pairs = BTreeSet::new();
    for &(_, x) in f.unit.graph().iter() {
        for &(_, y) in g.unit.graph().iter() {
            unit_pairs.insert((0usize, backend::pair_index(nc, x, y)));
        }
    }
    let unit = Relation::new(backend::terminal(carrier.kind()), carrier.clone(), unit_pairs)?;
    FrobeniusStructure::new(carrier, mult, unit)
}

/// The trivial structure on the monoidal unit.
pub fn trivial_structure(kind: BackendKind) -> Result<FrobeniusStructure> {
    let i = backend::terminal(kind);
    let sq = backend::product(&i, &i)?;
    let mult = Relation::new(sq, i.clone(), [(0usize, 0usize)])?;
    let unit = Relation::new(i.clone(), i.clone(), [(0usize, 0usize)])?;
    FrobeniusStructure::new(i, mult, unit)
}

/// Appendix-style construction of the internal groupoid underlying a
/// validated structure: `C0` is the unit subobject, sources and targets
/// are read off composability with unit elements, and the inversion pairs
/// elements whose two composites are units. Everything built here is the
/// only possible choice, and the result must validate.
pub fn to_groupoid(f: &FrobeniusStructure) -> Result<InternalGroupoid> {
    require_valid(f)?;
    let a_obj = &f.carrier;
    let n = a_obj.size();
    let units = f.unit_set();

    let mut mfun: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (x, y, z) in f.triples() {
        if mfun.insert((x, y), z).is_some() {
            return Err(Error::InternalError(
                "multiplication is not single-valued despite speciality".into(),
            ));
        }
    }

    let unique_unit = |candidates: Vec<usize>, what: &str, a: usize| -> Result<usize> {
        match candidates.as_slice() {
            [e] => Ok(*e),
            _ => Err(Error::InternalError(format!(
                "{what} of element {a} is not unique: {candidates:?}"
            ))),
        }
    };

    // source: the unit composable on the right (first mult argument)
    let mut s_table = Vec::with_capacity(n);
    let mut t_table = Vec::with_capacity(n);
    let mut i_table = Vec::with_capacity(n);
    for a in 0..n {
        let s_cands: Vec<usize> = units
            .iter()
            .copied()
            .filter(|&e| mfun.contains_key(&(e, a)))
            .collect();
        s_table.push(unique_unit(s_cands, "source", a)?);
        let t_cands: Vec<usize> = units
            .iter()
            .copied()
            .filter(|&e| mfun.contains_key(&(a, e)))
            .collect();
        t_table.push(unique_unit(t_cands, "target", a)?);
        let i_cands: Vec<usize> = (0..n)
            .filter(|&b| {
                mfun.get(&(a, b)).map(|z| units.contains(z)) == Some(true)
                    && mfun.get(&(b, a)).map(|z| units.contains(z)) == Some(true)
            })
            .collect();
        i_table.push(unique_unit(i_cands, "inverse", a)?);
    }

    let (c0, u_hom) = backend::sub_object(a_obj, &units)
        .map_err(|e| Error::InternalError(format!("unit set is not a subobject: {e}")))?;
    let mut pos = BTreeMap::new();
    for (k, &img) in u_hom.table().iter().enumerate() {
        pos.insert(img, k);
    }
    let to_c0 = |table: Vec<usize>| -> Result<Vec<usize>> {
        table
            .into_iter()
            .map(|e| {
                pos.get(&e).copied().ok_or_else(|| {
                    Error::InternalError("source/target landed outside the unit".into())
                })
            })
            .collect()
    };
    let s = Hom::new(a_obj.clone(), c0.clone(), to_c0(s_table)?)
        .map_err(|e| Error::InternalError(format!("source is not a homomorphism: {e}")))?;
    let t = Hom::new(a_obj.clone(), c0.clone(), to_c0(t_table)?)
        .map_err(|e| Error::InternalError(format!("target is not a homomorphism: {e}")))?;
    let inv = Hom::new(a_obj.clone(), a_obj.clone(), i_table)
        .map_err(|e| Error::InternalError(format!("inversion is not a homomorphism: {e}")))?;

    // m(f, g) = f after g, read from the diagram-order triples
    let mut m = CompositionTable::new();
    for (&(x, y), &z) in &mfun {
        m.insert((y, x), z);
    }

    checked_groupoid(c0, a_obj.clone(), s, t, u_hom, inv, m)
        .map_err(|e| Error::InternalError(format!("construction failed validation: {e}")))
}

/// A validated groupoid as a Frobenius structure: `A = C1`, multiplication
/// the graph of `m` in diagram order, unit the image of `u`.
pub fn from_groupoid(g: &InternalGroupoid) -> Result<FrobeniusStructure> {
    let report = validate_groupoid(g);
    if !report.passed() {
        return Err(Error::InvalidGroupoid(format!(
            "failed axioms: {}",
            report
                .failures()
                .iter()
                .map(|c| c.axiom.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        )));
    }
    let a_obj = &g.c1;
    let n = a_obj.size();
    let sq = backend::product(a_obj, a_obj)?;
    let mut pairs = BTreeSet::new();
    for (&(f, h), &v) in &g.m {
        // m(f, h) = f after h: h runs first in diagram order
        pairs.insert((backend::pair_index(n, h, f), v));
    }
    let mult = Relation::new(sq, a_obj.clone(), pairs)
        .map_err(|e| Error::InternalError(format!("m graph is not a subobject: {e}")))?;
    let unit = Relation::new(
        backend::terminal(a_obj.kind()),
        a_obj.clone(),
        g.u.table().iter().map(|&x| (0usize, x)),
    )
    .map_err(|e| Error::InternalError(format!("unit image is not a subobject: {e}")))?;
    let f = FrobeniusStructure::new(a_obj.clone(), mult, unit)?;
    require_valid(&f)
        .map_err(|e| Error::InternalError(format!("groupoid data fails the axioms: {e}")))?;
    Ok(f)
}

/// In a Mal'cev backend, unitality alone implies the remaining axioms.
/// Checks U1/U2, then asserts the full check passes; a failure of the
/// latter would contradict the theorem and is an internal error.
pub fn frobenius_from_unital(mult: Relation, unit: Relation) -> Result<FrobeniusStructure> {
    let carrier = mult.cod().clone();
    if !carrier.kind().is_malcev() {
        return Err(Error::NotMalcevBackend(
            "unitality only suffices over a Mal'cev backend".into(),
        ));
    }
    let f = FrobeniusStructure::new(carrier, mult, unit)?;
    let idx = MultIndex::new(&f);
    let (u1, u2) = unitality_formulas(&f, &idx);
    if !u1 || !u2 {
        return Err(Error::NotUnital(format!(
            "U1 holds: {u1}, U2 holds: {u2}"
        )));
    }
    let report = check_frobenius(&f)?;
    if !report.passed() {
        return Err(Error::InternalError(format!(
            "unital pair fails {} in a Mal'cev backend",
            report.failing().join(", ")
        )));
    }
    Ok(f)
}

/// States copied by the comultiplication: `dagger(mult) . H = H (x) H`,
/// evaluated through the diagram module. Enumeration order is the
/// deterministic subobject order.
pub fn copyable_states(f: &FrobeniusStructure, limit: usize) -> Result<Vec<Relation>> {
    require_valid(f)?;
    let a_obj = &f.carrier;
    let (m, _, mut env) = f.term_env();
    let mut out = Vec::new();
    for sub in backend::enumerate_subobjects(a_obj, limit)? {
        let state = Relation::new(
            backend::terminal(a_obj.kind()),
            a_obj.clone(),
            sub.iter().map(|&x| (0usize, x)),
        )?;
        env.insert("h", state.clone());
        let h = DiagramTerm::Gen {
            name: "h".into(),
            dom: vec![],
            cod: vec![a_obj.clone()],
        };
        let lhs = seq(h.clone(), dg(m.clone()));
        let rhs = tens(h.clone(), h.clone());
        if diagram::terms_equal(&lhs, &rhs, &env)? {
            out.push(state);
        }
    }
    Ok(out)
}

/// Convenience: the group structure of a one-object groupoid on a group
/// object, available in any backend able to carry it.
pub fn group_structure(g: &ObjectRef) -> Result<FrobeniusStructure> {
    from_groupoid(&crate::groupoid::one_object_groupoid(g)?)
}

/// Same carrier and tables, but housed in the FinSet backend; this works
/// for any group, abelian or not.
pub fn group_structure_in_finset(table: &[Vec<usize>]) -> Result<FrobeniusStructure> {
    let g = ObjectRef::fingrp(table)?;
    let n = g.size();
    let a_obj = ObjectRef::finset(n);
    let sq = backend::product(&a_obj, &a_obj)?;
    let mut pairs = BTreeSet::new();
    for x in 0..n {
        for y in 0..n {
            pairs.insert((backend::pair_index(n, x, y), g.op_mul(x, y)));
        }
    }
    let mult = Relation::new(sq, a_obj.clone(), pairs)?;
    let unit = Relation::new(
        backend::terminal(BackendKind::FinSet),
        a_obj.clone(),
        [(0usize, 0usize)],
    )?;
    FrobeniusStructure::new(a_obj, mult, unit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::tables;

    fn z2_structure_finset() -> FrobeniusStructure {
        group_structure_in_finset(&tables::cyclic(2)).unwrap()
    }

    #[test]
    fn z2_group_structure_passes() {
        let f = z2_structure_finset();
        let report = check_frobenius(&f).unwrap();
        assert!(report.passed(), "failing: {:?}", report.failing());
        assert!(is_commutative(&f).unwrap());
        assert_eq!(f.derived_unit_set(), f.unit_set());
    }

    #[test]
    fn indiscrete_passes_and_is_noncommutative() {
        let f = indiscrete(&ObjectRef::finset(2)).unwrap();
        assert!(check_frobenius(&f).unwrap().passed());
        assert!(!is_commutative(&f).unwrap());
        assert_eq!(f.derived_unit_set(), f.unit_set());
        // one-element carrier: trivially commutative
        let t = indiscrete(&ObjectRef::finset(1)).unwrap();
        assert!(is_commutative(&t).unwrap());
        // in FinGrp the indiscrete mult graph is a subgroup
        let z2 = ObjectRef::fingrp(&tables::cyclic(2)).unwrap();
        let fi = indiscrete(&z2).unwrap();
        assert!(check_frobenius(&fi).unwrap().passed());
    }

    #[test]
    fn speciality_fails_for_full_mult() {
        let a = ObjectRef::finset(2);
        let sq = backend::product(&a, &a).unwrap();
        let full = Relation::new(
            sq,
            a.clone(),
            (0..4usize).flat_map(|p| (0..2usize).map(move |z| (p, z))),
        )
        .unwrap();
        let unit = Relation::new(
            backend::terminal(BackendKind::FinSet),
            a.clone(),
            [(0usize, 0usize)],
        )
        .unwrap();
        let f = FrobeniusStructure::new(a, full, unit).unwrap();
        let report = check_frobenius(&f).unwrap();
        assert!(report.failing().contains(&"S"));
    }

    #[test]
    fn indiscrete_groupoid_has_projection_sources() {
        let f = indiscrete(&ObjectRef::finset(2)).unwrap();
        let g = to_groupoid(&f).unwrap();
        // elements of C1 = A x A are (a,b) with index 2a + b
        assert_eq!(g.s.table(), &[0, 0, 1, 1]); // first projection
        assert_eq!(g.t.table(), &[0, 1, 0, 1]); // second projection
        assert_eq!(g.inv.table(), &[0, 2, 1, 3]); // the swap
        assert_eq!(g.u.table(), &[0, 3]); // the diagonal
        assert!(validate_groupoid(&g).passed());
    }

    #[test]
    fn z2_becomes_one_object_groupoid() {
        let f = z2_structure_finset();
        let g = to_groupoid(&f).unwrap();
        assert_eq!(g.c0.size(), 1);
        assert_eq!(g.inv.table(), &[0, 1]); // negation in Z2 is trivial
        let z3 = group_structure(&ObjectRef::fingrp(&tables::cyclic(3)).unwrap()).unwrap();
        assert_eq!(z3.mult().graph().len(), 9);
        let g3 = to_groupoid(&z3).unwrap();
        assert_eq!(g3.inv.table(), &[0, 2, 1]); // negation mod 3
    }

    #[test]
    fn round_trips() {
        for f in [
            z2_structure_finset(),
            indiscrete(&ObjectRef::finset(2)).unwrap(),
            indiscrete(&ObjectRef::fingrp(&tables::cyclic(2)).unwrap()).unwrap(),
            group_structure(&ObjectRef::fingrp(&tables::klein_four()).unwrap()).unwrap(),
            group_structure(&ObjectRef::finvect(2, 1).unwrap()).unwrap(),
        ] {
            let g = to_groupoid(&f).unwrap();
            let f2 = from_groupoid(&g).unwrap();
            assert_eq!(f, f2);
            let g2 = to_groupoid(&f2).unwrap();
            assert_eq!(g, g2);
        }
    }

    #[test]
    fn non_frobenius_rejected_by_to_groupoid() {
        let a = ObjectRef::finset(2);
        let sq = backend::product(&a, &a).unwrap();
        let mult = Relation::new(sq, a.clone(), [(0usize, 0usize)]).unwrap();
        let unit = Relation::new(
            backend::terminal(BackendKind::FinSet),
            a.clone(),
            [(0usize, 0usize)],
        )
        .unwrap();
        let f = FrobeniusStructure::new(a, mult, unit).unwrap();
        assert!(matches!(to_groupoid(&f), Err(Error::NotFrobenius(_))));
    }

    #[test]
    fn unitality_suffices_in_fingrp() {
        let z2 = ObjectRef::fingrp(&tables::cyclic(2)).unwrap();
        let f = group_structure(&z2).unwrap();
        let built = frobenius_from_unital(f.mult().clone(), f.unit().clone()).unwrap();
        assert_eq!(built, f);
        // a non-unital pair is refused
        let sq = backend::product(&z2, &z2).unwrap();
        let degenerate = Relation::new(sq, z2.clone(), [(0usize, 0usize)]).unwrap();
        let unit = Relation::new(backend::terminal(BackendKind::FinGrp), z2.clone(), [
            (0usize, 0usize),
        ])
        .unwrap();
        assert!(matches!(
            frobenius_from_unital(degenerate, unit),
            Err(Error::NotUnital(_))
        ));
        // FinSet backend is refused
        let fs = z2_structure_finset();
        assert!(matches!(
            frobenius_from_unital(fs.mult().clone(), fs.unit().clone()),
            Err(Error::NotMalcevBackend(_))
        ));
    }

    #[test]
    fn copyable_state_examples() {
        // Z2 group structure in FinSet: empty and whole carrier
        let f = z2_structure_finset();
        let states = copyable_states(&f, 1000).unwrap();
        assert_eq!(states.len(), 2);
        assert!(states[0].is_empty());
        assert_eq!(states[1].graph().len(), 2);
        // Z2 group structure in FinGrp: exactly one copyable state
        let g = group_structure(&ObjectRef::fingrp(&tables::cyclic(2)).unwrap()).unwrap();
        let states = copyable_states(&g, 1000).unwrap();
        assert_eq!(states.len(), 1);
        assert_eq!(states[0].graph().len(), 2);
    }

    #[test]
    fn tensor_structure_is_frobenius() {
        let f = z2_structure_finset();
        let t = tensor_structure(&f, &f).unwrap();
        assert!(check_frobenius(&t).unwrap().passed());
        assert_eq!(t.carrier().size(), 4);
        let g = to_groupoid(&t).unwrap();
        assert!(validate_groupoid(&g).passed());
        assert!(check_frobenius(&trivial_structure(BackendKind::FinSet).unwrap())
            .unwrap()
            .passed());
    }

    #[test]
    fn appendix_maps_are_the_only_choice() {
        // exhaustive at small size: any homomorphic (s, t, i) compatible
        // with the mult and unit agrees with the constructed one
        let f = indiscrete(&ObjectRef::finset(2)).unwrap();
        let g = to_groupoid(&f).unwrap();
        let n = f.carrier().size();
        let units = f.unit_set();
        for a in 0..n {
            // source candidates: units e with M(e, a) defined
            let sources: Vec<usize> = units
                .iter()
                .copied()
                .filter(|&e| f.triples().iter().any(|&(x, y, _)| x == e && y == a))
                .collect();
            assert_eq!(sources, vec![g.u.apply(g.s.apply(a))]);
            let targets: Vec<usize> = units
                .iter()
                .copied()
                .filter(|&e| f.triples().iter().any(|&(x, y, _)| x == a && y == e))
                .collect();
            assert_eq!(targets, vec![g.u.apply(g.t.apply(a))]);
        }
    }
}

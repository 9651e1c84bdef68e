//! Internal categories and groupoids in a backend.
//!
//! Composition convention, fixed project-wide: `m(f, g)` means "f after g"
//! and is defined exactly when `s(f) = t(g)`, with `s(m(f,g)) = s(g)` and
//! `t(m(f,g)) = t(f)`. A morphism element `f` runs from `s(f)` to `t(f)`.
//! Frobenius multiplications read their arguments the other way round
//! (first argument runs first); the translation lives in the `frobenius`
//! module.

use crate::backend::{self, BackendKind, Hom, ObjectRef};
use crate::error::{Error, Result};
use crate::rel::Relation;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Composition table on the explicit composable-pair subobject. Keys are
/// `(f, g)` with `s(f) = t(g)`; queries outside the domain are errors, not
/// empty answers.
pub type CompositionTable = BTreeMap<(usize, usize), usize>;

/// Internal category data `(C0, C1, s, t, u, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalCategory {
    pub c0: ObjectRef,
    pub c1: ObjectRef,
    pub s: Hom,
    pub t: Hom,
    pub u: Hom,
    pub m: CompositionTable,
}

/// Internal groupoid data `(C0, C1, s, t, u, i, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalGroupoid {
    pub c0: ObjectRef,
    pub c1: ObjectRef,
    pub s: Hom,
    pub t: Hom,
    pub u: Hom,
    pub inv: Hom,
    pub m: CompositionTable,
}

impl InternalGroupoid {
    pub fn category(&self) -> InternalCategory {
        InternalCategory {
            c0: self.c0.clone(),
            c1: self.c1.clone(),
            s: self.s.clone(),
            t: self.t.clone(),
            u: self.u.clone(),
            m: self.m.clone(),
        }
    }

    /// `m(f, g)`: f after g. Errors when the pair is not composable.
    pub fn compose_elems(&self, f: usize, g: usize) -> Result<usize> {
        self.m.get(&(f, g)).copied().ok_or_else(|| {
            Error::ObjectMismatch(format!("elements ({f},{g}) are not composable"))
        })
    }

    /// Identity element at the object under `f`'s source.
    pub fn id_dom(&self, f: usize) -> usize {
        self.u.apply(self.s.apply(f))
    }

    pub fn kind(&self) -> BackendKind {
        self.c1.kind()
    }
}

/// One axiom's verdict; the counterexample is the offending element tuple.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<usize>>,
}

/// Per-axiom validation report.
#[derive(Debug, Clone, Serialize)]
pub struct GroupoidReport {
    pub checks: Vec<AxiomCheck>,
}

impl GroupoidReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn push(&mut self, axiom: &str, counterexample: Option<Vec<usize>>) {
        self.checks.push(AxiomCheck {
            axiom: axiom.to_string(),
            passed: counterexample.is_none(),
            counterexample,
        });
    }
}

fn check_category_axioms(report: &mut GroupoidReport, c: &InternalCategory) {
    let (c0, c1) = (&c.c0, &c.c1);

    let boundaries_ok = c.s.dom() == c1
        && c.s.cod() == c0
        && c.t.dom() == c1
        && c.t.cod() == c0
        && c.u.dom() == c0
        && c.u.cod() == c1;
    report.push("boundaries", if boundaries_ok { None } else { Some(vec![]) });
    if !boundaries_ok {
        return;
    }

    let s = |f: usize| c.s.apply(f);
    let t = |f: usize| c.t.apply(f);
    let u = |x: usize| c.u.apply(x);

    // s(u(x)) = x = t(u(x))
    let mut bad = None;
    for x in c0.elements() {
        if s(u(x)) != x || t(u(x)) != x {
            bad = Some(vec![x]);
            break;
        }
    }
    report.push("section", bad);

    let mut bad = None;
    'outer: for x in c0.elements() {
        for y in c0.elements() {
            if x != y && u(x) == u(y) {
                bad = Some(vec![x, y]);
                break 'outer;
            }
        }
    }
    report.push("u-injective", bad);

    // m is defined exactly on composable pairs
    let mut bad = None;
    'dom: for f in c1.elements() {
        for g in c1.elements() {
            let composable = s(f) == t(g);
            if composable != c.m.contains_key(&(f, g)) {
                bad = Some(vec![f, g]);
                break 'dom;
            }
        }
    }
    report.push("m-domain", bad);
    if report.checks.last().map(|c| !c.passed).unwrap_or(false) {
        return;
    }

    // the composable-pair set is a subobject of C1 x C1 and m preserves
    // the componentwise operations on it
    let pair_set: BTreeSet<usize> = c
        .m
        .keys()
        .map(|&(f, g)| backend::pair_index(c1.size(), f, g))
        .collect();
    let prod = backend::product(c1, c1).expect("same kind");
    let sub_ok = backend::is_subobject(&prod, &pair_set).unwrap_or(false);
    report.push("m-pullback-subobject", if sub_ok { None } else { Some(vec![]) });
    if c1.kind() != BackendKind::FinSet {
        let mut bad = None;
        'hom: for (&(f, g), &fg) in &c.m {
            for (&(f2, g2), &fg2) in &c.m {
                let fp = c1.op_mul(f, f2);
                let gp = c1.op_mul(g, g2);
                match c.m.get(&(fp, gp)) {
                    Some(&prod_val) => {
                        if prod_val != c1.op_mul(fg, fg2) {
                            bad = Some(vec![f, g, f2, g2]);
                            break 'hom;
                        }
                    }
                    None => {
                        bad = Some(vec![f, g, f2, g2]);
                        break 'hom;
                    }
                }
            }
        }
        report.push("m-homomorphism", bad);
    }

    // s(m(f,g)) = s(g), t(m(f,g)) = t(f)
    let mut bad = None;
    for (&(f, g), &fg) in &c.m {
        if s(fg) != s(g) || t(fg) != t(f) {
            bad = Some(vec![f, g]);
            break;
        }
    }
    report.push("m-boundaries", bad);

    // unit laws
    let mut bad = None;
    for f in c1.elements() {
        let right = c.m.get(&(f, u(s(f)))).copied();
        let left = c.m.get(&(u(t(f)), f)).copied();
        if right != Some(f) || left != Some(f) {
            bad = Some(vec![f]);
            break;
        }
    }
    report.push("unit-laws", bad);

    // associativity over composable triples
    let mut bad = None;
    'assoc: for (&(f, g), &fg) in &c.m {
        for h in c1.elements() {
            if s(g) == t(h) {
                let gh = match c.m.get(&(g, h)) {
                    Some(&v) => v,
                    None => {
                        bad = Some(vec![f, g, h]);
                        break 'assoc;
                    }
                };
                if c.m.get(&(fg, h)) != c.m.get(&(f, gh)) || c.m.get(&(fg, h)).is_none() {
                    bad = Some(vec![f, g, h]);
                    break 'assoc;
                }
            }
        }
    }
    report.push("associativity", bad);
}

/// Validate an internal category; the report carries failures rather than
/// returning an error.
pub fn validate_category(c: &InternalCategory) -> GroupoidReport {
    let mut report = GroupoidReport { checks: Vec::new() };
    check_category_axioms(&mut report, c);
    report
}

/// Validate an internal groupoid: category axioms plus the inversion ones.
pub fn validate_groupoid(g: &InternalGroupoid) -> GroupoidReport {
    let mut report = GroupoidReport { checks: Vec::new() };
    check_category_axioms(&mut report, &g.category());
    if !report.passed() {
        return report;
    }
    let boundaries_ok = g.inv.dom() == &g.c1 && g.inv.cod() == &g.c1;
    report.push("i-boundaries", if boundaries_ok { None } else { Some(vec![]) });
    if !boundaries_ok {
        return report;
    }
    let mut bad = None;
    for f in g.c1.elements() {
        let fi = g.inv.apply(f);
        if g.s.apply(fi) != g.t.apply(f) || g.t.apply(fi) != g.s.apply(f) {
            bad = Some(vec![f]);
            break;
        }
    }
    report.push("i-swaps-endpoints", bad);

    let mut bad = None;
    for f in g.c1.elements() {
        let fi = g.inv.apply(f);
        let right = g.m.get(&(f, fi)).copied();
        let left = g.m.get(&(fi, f)).copied();
        if right != Some(g.u.apply(g.t.apply(f))) || left != Some(g.u.apply(g.s.apply(f))) {
            bad = Some(vec![f]);
            break;
        }
    }
    report.push("i-inverse-laws", bad);
    report
}

/// Build a groupoid and insist it validates.
pub fn checked_groupoid(
    c0: ObjectRef,
    c1: ObjectRef,
    s: Hom,
    t: Hom,
    u: Hom,
    inv: Hom,
    m: CompositionTable,
) -> Result<InternalGroupoid> {
    let g = InternalGroupoid {
        c0,
        c1,
        s,
        t,
        u,
        inv,
        m,
    };
    let report = validate_groupoid(&g);
    if !report.passed() {
        let names: Vec<&str> = report
            .failures()
            .iter()
            .map(|c| c.axiom.as_str())
            .collect();
        return Err(Error::InvalidGroupoid(format!(
            "failed axioms: {}",
            names.join(", ")
        )));
    }
    Ok(g)
}

/// In a Mal'cev backend, every internal category is a groupoid; find the
/// unique inversion by exhaustive search. A missing inverse means the
/// input violated the theorem, which is an internal error, not user error.
pub fn complete_to_groupoid(c: &InternalCategory) -> Result<InternalGroupoid> {
    if !c.c1.kind().is_malcev() {
        return Err(Error::NotMalcevBackend(
            "groupoid completion needs a Mal'cev backend".into(),
        ));
    }
    let report = validate_category(c);
    if !report.passed() {
        return Err(Error::InvalidGroupoid(
            "input is not a valid internal category".into(),
        ));
    }
    let mut table = Vec::with_capacity(c.c1.size());
    for f in c.c1.elements() {
        let sf = c.s.apply(f);
        let tf = c.t.apply(f);
        let mut candidates = c.c1.elements().filter(|&g| {
            c.s.apply(g) == tf
                && c.t.apply(g) == sf
                && c.m.get(&(f, g)) == Some(&c.u.apply(tf))
                && c.m.get(&(g, f)) == Some(&c.u.apply(sf))
        });
        let g = candidates.next().ok_or_else(|| {
            Error::InternalError(format!("element {f} has no inverse"))
        })?;
        if candidates.next().is_some() {
            return Err(Error::InternalError(format!(
                "element {f} has more than one inverse"
            )));
        }
        table.push(g);
    }
    let inv = Hom::new(c.c1.clone(), c.c1.clone(), table)
        .map_err(|e| Error::InternalError(format!("inversion is not a homomorphism: {e}")))?;
    checked_groupoid(
        c.c0.clone(),
        c.c1.clone(),
        c.s.clone(),
        c.t.clone(),
        c.u.clone(),
        inv,
        c.m.clone(),
    )
    .map_err(|e| Error::InternalError(format!("completion failed validation: {e}")))
}

/// The condition `R(a,b) => R(a^-1, b^-1) and R(id_dom(a), id_dom(b))` for
/// a relation between the morphism carriers of two groupoids.
pub fn respects_inverses(
    r: &Relation,
    g: &InternalGroupoid,
    h: &InternalGroupoid,
) -> Result<bool> {
    if r.dom() != &g.c1 || r.cod() != &h.c1 {
        return Err(Error::ObjectMismatch(
            "relation endpoints must be the groupoids' morphism carriers".into(),
        ));
    }
    for &(a, b) in r.graph().iter() {
        if !r.contains(g.inv.apply(a), h.inv.apply(b)) {
            return Ok(false);
        }
        if !r.contains(g.id_dom(a), h.id_dom(b)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Subobjects of a groupoid in `Gpd(C)` reduce to subobjects of `C1` closed
/// under `id_dom`, inverses and composition. Here the endo-relation's graph
/// is read as a subobject of the product groupoid `G x G`.
pub fn is_subgroupoid_relation(r: &Relation, g: &InternalGroupoid) -> Result<bool> {
    if r.dom() != &g.c1 || r.cod() != &g.c1 {
        return Err(Error::ObjectMismatch(
            "expected an endo-relation on the morphism carrier".into(),
        ));
    }
    for &(a, b) in r.graph().iter() {
        if !r.contains(g.id_dom(a), g.id_dom(b)) {
            return Ok(false);
        }
        if !r.contains(g.inv.apply(a), g.inv.apply(b)) {
            return Ok(false);
        }
        for &(c, d) in r.graph().iter() {
            if g.s.apply(a) == g.t.apply(c) && g.s.apply(b) == g.t.apply(d) {
                let ac = g.compose_elems(a, c)?;
                let bd = g.compose_elems(b, d)?;
                if !r.contains(ac, bd) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// One subobject that respects inverses but is not closed under `m`.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureViolation {
    pub subobject: Vec<usize>,
    pub pair: (usize, usize),
    pub composite: usize,
}

/// Closure report for inverse-respecting subobjects of `C1`.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    pub subobjects_checked: usize,
    pub inverse_respecting: usize,
    pub violations: Vec<ClosureViolation>,
}

/// Enumerate subobjects of `C1`, keep the inverse-respecting ones (closed
/// under `i` and `id_dom`), and test closure under composition. Mal'cev
/// backends must produce no violations; FinSet groupoids can.
pub fn closure_property_check(g: &InternalGroupoid, limit: usize) -> Result<ClosureReport> {
    let subs = backend::enumerate_subobjects(&g.c1, limit)?;
    let mut report = ClosureReport {
        subobjects_checked: subs.len(),
        inverse_respecting: 0,
        violations: Vec::new(),
    };
    for sub in subs {
        let respects = sub
            .iter()
            .all(|&f| sub.contains(&g.inv.apply(f)) && sub.contains(&g.id_dom(f)));
        if !respects {
            continue;
        }
        report.inverse_respecting += 1;
        'pairs: for &f in &sub {
            for &h in &sub {
                if g.s.apply(f) == g.t.apply(h) {
                    let fh = g.compose_elems(f, h)?;
                    if !sub.contains(&fh) {
                        report.violations.push(ClosureViolation {
                            subobject: sub.iter().copied().collect(),
                            pair: (f, h),
                            composite: fh,
                        });
                        break 'pairs;
                    }
                }
            }
        }
    }
    Ok(report)
}

/// One-object groupoid on a group carrier: composition is the group
/// operation, which is a homomorphism exactly when the structure makes
/// sense internally (for FinGrp this forces the group to be abelian).
pub fn one_object_groupoid(g: &ObjectRef) -> Result<InternalGroupoid> {
    let c0 = backend::terminal(g.kind());
    let s = Hom::new(g.clone(), c0.clone(), vec![0; g.size()])?;
    let t = s.clone();
    let u = Hom::new(c0.clone(), g.clone(), vec![0])?;
    let inv = Hom::new(
        g.clone(),
        g.clone(),
        g.elements().map(|x| g.op_inv(x)).collect(),
    )?;
    let mut m = CompositionTable::new();
    for f in g.elements() {
        for h in g.elements() {
            m.insert((f, h), g.op_mul(f, h));
        }
    }
    checked_groupoid(c0, g.clone(), s, t, u, inv, m)
}

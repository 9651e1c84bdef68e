//! Exhaustive verification batteries. Each suite item corresponds to one
//! acceptance criterion; items report pass/fail with a short account of
//! what was enumerated. Everything here is deterministic: enumeration
//! orders are canonical and the randomized coherence battery runs from a
//! fixed seed.

use crate::backend::{self, tables, BackendKind, Hom, ObjectRef};
use crate::cp::{self, CpMorphism};
use crate::crypto;
use crate::error::{Error, Result};
use crate::frobenius::{self, FrobeniusStructure};
use crate::groupoid::{self, checked_groupoid, CompositionTable, InternalGroupoid};
use crate::quantum;
use crate::rel::{self, Relation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

pub const COHERENCE_SEED: u64 = 0x52454C43_41540001;
pub const COHERENCE_CASES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    Roundtrip,
    CpEquivalence,
    Malcev,
    Quantum,
    Crypto,
    Oracles,
}

impl SuiteName {
    pub const ALL: [SuiteName; 6] = [
        SuiteName::Roundtrip,
        SuiteName::CpEquivalence,
        SuiteName::Malcev,
        SuiteName::Quantum,
        SuiteName::Crypto,
        SuiteName::Oracles,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Roundtrip => "roundtrip",
            SuiteName::CpEquivalence => "cp-equivalence",
            SuiteName::Malcev => "malcev",
            SuiteName::Quantum => "quantum",
            SuiteName::Crypto => "crypto",
            SuiteName::Oracles => "oracles",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<SuiteName> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::BadDescriptor(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub items: Vec<SuiteItem>,
}

fn item(name: &str, passed: bool, detail: String) -> SuiteItem {
    SuiteItem {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Run one named suite with the given enumeration budget.
pub fn run_suite(name: SuiteName, budget: usize) -> Result<SuiteReport> {
    let items = match name {
        SuiteName::Roundtrip => suite_roundtrip(budget)?,
        SuiteName::CpEquivalence => suite_cp_equivalence(budget)?,
        SuiteName::Malcev => suite_malcev(budget)?,
        SuiteName::Quantum => suite_quantum(budget)?,
        SuiteName::Crypto => suite_crypto(budget)?,
        SuiteName::Oracles => suite_oracles(budget)?,
    };
    Ok(SuiteReport {
        suite: name.as_str().to_string(),
        passed: items.iter().all(|i| i.passed),
        items,
    })
}

// ---------------------------------------------------------------------
// groupoid enumeration for the round-trip suite
// ---------------------------------------------------------------------

/// Connected component shape: an object count and a vertex group table.
/// Every connected groupoid is isomorphic to an indiscrete groupoid of
/// objects paired with a vertex group, so unions of these shapes under all
/// labelings produce every labeled groupoid on the morphism set.
fn component_shapes(morphisms: usize) -> Vec<(usize, Vec<Vec<usize>>)> {
    match morphisms {
        1 => vec![(1, tables::cyclic(1))],
        2 => vec![(1, tables::cyclic(2))],
        3 => vec![(1, tables::cyclic(3))],
        4 => vec![
            (1, tables::cyclic(4)),
            (1, tables::klein_four()),
            (2, tables::cyclic(1)),
        ],
        5 => vec![(1, tables::cyclic(5))],
        6 => vec![(1, tables::cyclic(6)), (1, tables::s3())],
        _ => Vec::new(),
    }
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn go(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            go(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    go(0, n, &mut blocks, &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k % 2 == 0 {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut cur, &mut out);
    out.sort();
    out
}

type GroupoidKey = (Vec<usize>, Vec<usize>, Vec<usize>, Vec<(usize, usize, usize)>);

/// All labeled groupoid structures (in canonical form: `C0` re-indexed
/// along the sorted identity elements) on the morphism carrier `0..n` in
/// FinSet.
pub fn enumerate_finset_groupoids(n: usize) -> Result<Vec<InternalGroupoid>> {
    let mut keys: BTreeSet<GroupoidKey> = BTreeSet::new();
    for partition in set_partitions(n) {
        // per-block choices of shape
        let shapes_per_block: Vec<Vec<(usize, Vec<Vec<usize>>)>> = partition
            .iter()
            .map(|b| component_shapes(b.len()))
            .collect();
        if shapes_per_block.iter().any(|s| s.is_empty()) {
            continue;
        }
        let mut shape_choice = vec![0usize; partition.len()];
        loop {
            // iterate over bijection choices per block
            let perms_per_block: Vec<Vec<Vec<usize>>> = partition
                .iter()
                .map(|b| permutations(b.len()))
                .collect();
            let mut perm_choice = vec![0usize; partition.len()];
            loop {
                let mut sdom = vec![0usize; n];
                let mut tdom = vec![0usize; n];
                let mut inv = vec![0usize; n];
                let mut m: BTreeMap<(usize, usize), usize> = BTreeMap::new();
                for (bi, block) in partition.iter().enumerate() {
                    let (o, table) = &shapes_per_block[bi][shape_choice[bi]];
                    let h = table.len();
                    let perm = &perms_per_block[bi][perm_choice[bi]];
                    let hobj = ObjectRef::fingrp(table).expect("valid shape table");
                    let label =
                        |x: usize, y: usize, k: usize| block[perm[(x * o + y) * h + k]];
                    for x in 0..*o {
                        for y in 0..*o {
                            for k in 0..h {
                                let f = label(x, y, k);
                                sdom[f] = label(x, x, 0);
                                tdom[f] = label(y, y, 0);
                                inv[f] = label(y, x, hobj.op_inv(k));
                            }
                        }
                    }
                    // m(f, g) = f after g: g: x->y then f: y->z
                    for x in 0..*o {
                        for y in 0..*o {
                            for z in 0..*o {
                                for k1 in 0..h {
                                    for k2 in 0..h {
                                        let g = label(x, y, k1);
                                        let f = label(y, z, k2);
                                        m.insert(
                                            (f, g),
                                            label(x, z, hobj.op_mul(k2, k1)),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
                let key: GroupoidKey = (
                    sdom.clone(),
                    tdom.clone(),
                    inv.clone(),
                    m.iter().map(|(&(f, g), &v)| (f, g, v)).collect(),
                );
                keys.insert(key);
                // advance perm choice
                let mut done = true;
                for bi in 0..partition.len() {
                    perm_choice[bi] += 1;
                    if perm_choice[bi] < perms_per_block[bi].len() {
                        done = false;
                        break;
                    }
                    perm_choice[bi] = 0;
                }
                if done {
                    break;
                }
            }
            // advance shape choice
            let mut done = true;
            for bi in 0..partition.len() {
                shape_choice[bi] += 1;
                if shape_choice[bi] < shapes_per_block[bi].len() {
                    done = false;
                    break;
                }
                shape_choice[bi] = 0;
            }
            if done {
                break;
            }
        }
    }
    // assemble canonical groupoids
    let c1 = ObjectRef::finset(n);
    let mut out = Vec::new();
    for (sdom, tdom, inv, mtriples) in keys {
        let identities: Vec<usize> = (0..n).filter(|&f| sdom[f] == f).collect();
        let pos: BTreeMap<usize, usize> = identities
            .iter()
            .enumerate()
            .map(|(i, &f)| (f, i))
            .collect();
        let c0 = ObjectRef::finset(identities.len());
        let s = Hom::new(c1.clone(), c0.clone(), sdom.iter().map(|f| pos[f]).collect())?;
        let t = Hom::new(c1.clone(), c0.clone(), tdom.iter().map(|f| pos[f]).collect())?;
        let u = Hom::new(c0.clone(), c1.clone(), identities.clone())?;
        let i_hom = Hom::new(c1.clone(), c1.clone(), inv)?;
        let mut m = CompositionTable::new();
        for (f, g, v) in mtriples {
            m.insert((f, g), v);
        }
        out.push(checked_groupoid(c0, c1.clone(), s, t, u, i_hom, m)?);
    }
    Ok(out)
}

/// Multiplication tables of the abelian groups of order at most `max`
/// (up to isomorphism), the only groups carrying a one-object groupoid
/// internal to FinGrp.
pub fn abelian_tables_up_to(max: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.push(tables::cyclic(n));
    }
    if max >= 4 {
        out.push(tables::klein_four());
    }
    if max >= 8 {
        out.push(tables::direct_product(&tables::cyclic(2), &tables::cyclic(4)));
        out.push(tables::direct_product(
            &tables::cyclic(2),
            &tables::klein_four(),
        ));
    }
    out
}

fn suite_roundtrip(budget: usize) -> Result<Vec<SuiteItem>> {
    let mut items = Vec::new();

    // all labeled FinSet groupoids with at most 6 morphisms
    let mut total = 0usize;
    let mut ok = true;
    for n in 0..=6usize {
        for g in enumerate_finset_groupoids(n)? {
            total += 1;
            let f = frobenius::from_groupoid(&g)?;
            let g2 = frobenius::to_groupoid(&f)?;
            if g2 != g {
                ok = false;
            }
            let f2 = frobenius::from_groupoid(&g2)?;
            if f2 != f {
                ok = false;
            }
        }
    }
    items.push(item(
        "roundtrip-finset-groupoids",
        ok && total > 0,
        format!("{total} labeled groupoids with <= 6 morphisms round-trip exactly"),
    ));

    // raw enumeration of all structures on FinSet carriers of size <= 2
    // must coincide with the groupoid-derived ones
    let mut ok = true;
    let mut counts = Vec::new();
    for n in 0..=2usize {
        let a = ObjectRef::finset(n);
        let sq = backend::product(&a, &a)?;
        let cells = sq.size() * a.size();
        let mut validated: BTreeSet<(Vec<(usize, usize)>, Vec<usize>)> = BTreeSet::new();
        for mmask in 0u64..(1u64 << cells) {
            let pairs: Vec<(usize, usize)> = (0..cells)
                .filter(|i| mmask >> i & 1 == 1)
                .map(|i| (i / a.size().max(1), i % a.size().max(1)))
                .collect();
            let mult = Relation::new(sq.clone(), a.clone(), pairs.clone())?;
            for umask in 0u32..(1u32 << n) {
                let unit = Relation::new(
                    backend::terminal(BackendKind::FinSet),
                    a.clone(),
                    (0..n).filter(|i| umask >> i & 1 == 1).map(|i| (0usize, i)),
                )?;
                let f = FrobeniusStructure::new(a.clone(), mult.clone(), unit)?;
                if frobenius::check_frobenius(&f)?.passed() {
                    let key = (
                        f.mult().graph().iter().copied().collect::<Vec<_>>(),
                        f.unit_set().into_iter().collect::<Vec<_>>(),
                    );
                    validated.insert(key);
                    let g = frobenius::to_groupoid(&f)?;
                    if frobenius::from_groupoid(&g)? != f {
                        ok = false;
                    }
                }
            }
        }
        let derived: BTreeSet<(Vec<(usize, usize)>, Vec<usize>)> =
            enumerate_finset_groupoids(n)?
                .iter()
                .map(|g| {
                    let f = frobenius::from_groupoid(g).expect("valid groupoid");
                    (
                        f.mult().graph().iter().copied().collect::<Vec<_>>(),
                        f.unit_set().into_iter().collect::<Vec<_>>(),
                    )
                })
                .collect();
        if validated != derived {
            ok = false;
        }
        counts.push(format!("size {n}: {}", validated.len()));
    }
    items.push(item(
        "roundtrip-raw-enumeration",
        ok,
        format!(
            "structures found by raw (mult, unit) search match the groupoid-derived ones ({})",
            counts.join(", ")
        ),
    ));

    // one-object groupoids over the abelian groups of order <= 8 in FinGrp
    let mut ok = true;
    let mut total = 0usize;
    for table in abelian_tables_up_to(8) {
        let g_obj = ObjectRef::fingrp(&table)?;
        let g = groupoid::one_object_groupoid(&g_obj)?;
        let f = frobenius::from_groupoid(&g)?;
        let g2 = frobenius::to_groupoid(&f)?;
        if g2 != g || frobenius::from_groupoid(&g2)? != f {
            ok = false;
        }
        total += 1;
    }
    items.push(item(
        "roundtrip-fingrp-one-object",
        ok && total == 11,
        format!("{total} abelian group groupoids of order <= 8 round-trip exactly"),
    ));

    // indiscrete groupoids on carriers of size <= 3 in all four backends
    let mut bases: Vec<ObjectRef> = (0..=3).map(ObjectRef::finset).collect();
    for n in 1..=3usize {
        bases.push(ObjectRef::fingrp(&tables::cyclic(n))?);
    }
    bases.push(ObjectRef::finvect(2, 0)?);
    bases.push(ObjectRef::finvect(2, 1)?);
    bases.push(ObjectRef::finvect(3, 1)?);
    bases.push(ObjectRef::finqgrp(&[vec![0]])?);
    bases.push(ObjectRef::finqgrp(&tables::cyclic(2))?);
    bases.push(ObjectRef::finqgrp(&tables::subtraction_quasigroup(3))?);
    let mut ok = true;
    let total = bases.len();
    for base in bases {
        let f = frobenius::indiscrete(&base)?;
        let g = frobenius::to_groupoid(&f)?;
        if frobenius::from_groupoid(&g)? != f || frobenius::to_groupoid(&frobenius::from_groupoid(&g)?)? != g {
            ok = false;
        }
    }
    items.push(item(
        "roundtrip-indiscrete",
        ok,
        format!("{total} indiscrete structures on carriers <= 3 round-trip exactly"),
    ));

    let _ = budget;
    Ok(items)
}

// ---------------------------------------------------------------------
// positivity oracle and diagram coherence
// ---------------------------------------------------------------------

fn suite_oracles(budget: usize) -> Result<Vec<SuiteItem>> {
    let mut items = Vec::new();

    // all 16 endo-relations of a two-element set
    let a = ObjectRef::finset(2);
    let mut ok = true;
    for mask in 0u32..16 {
        let pairs: Vec<(usize, usize)> = (0..4)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (i / 2, i % 2))
            .collect();
        let r = Relation::new(a.clone(), a.clone(), pairs)?;
        let fast = rel::is_positive(&r)?;
        let slow = rel::brute_force_positive(&r, budget)?;
        if fast.is_some() != slow.is_some() {
            ok = false;
        }
        if let Some(w) = fast {
            if !w.verifies(&r) {
                ok = false;
            }
        }
        if let Some(w) = slow {
            if !w.verifies(&r) {
                ok = false;
            }
        }
    }
    items.push(item(
        "oracle-positivity-finset2",
        ok,
        "is_positive agrees with the brute-force search on all 16 endo-relations".into(),
    ));

    // all subgroup endo-relations of the groups of order <= 4
    let mut ok = true;
    let mut total = 0usize;
    for table in [
        tables::cyclic(1),
        tables::cyclic(2),
        tables::cyclic(3),
        tables::cyclic(4),
        tables::klein_four(),
    ] {
        let g = ObjectRef::fingrp(&table)?;
        for r in rel::enumerate_relations(&g, &g, budget)? {
            total += 1;
            let fast = rel::is_positive(&r)?;
            let slow = rel::brute_force_positive(&r, budget)?;
            if fast.is_some() != slow.is_some() {
                ok = false;
            }
            if let Some(w) = fast {
                if !w.verifies(&r) {
                    ok = false;
                }
            }
        }
    }
    items.push(item(
        "oracle-positivity-groups",
        ok,
        format!("{total} subgroup endo-relations of groups of order <= 4 agree with the oracle"),
    ));

    let (cases, passed, detail) = diagram_coherence_battery(COHERENCE_CASES, COHERENCE_SEED)?;
    items.push(item(
        "diagram-coherence",
        passed && cases >= COHERENCE_CASES,
        detail,
    ));

    Ok(items)
}

fn random_object(rng: &mut ChaCha8Rng) -> Result<ObjectRef> {
    Ok(match rng.gen_range(0..4u32) {
        0 => ObjectRef::finset(rng.gen_range(0..=3)),
        1 => match rng.gen_range(0..3u32) {
            0 => ObjectRef::fingrp(&tables::cyclic(2))?,
            1 => ObjectRef::fingrp(&tables::cyclic(3))?,
            _ => ObjectRef::fingrp(&tables::klein_four())?,
        },
        2 => ObjectRef::finvect(2, rng.gen_range(0..=2))?,
        _ => match rng.gen_range(0..2u32) {
            0 => ObjectRef::finqgrp(&tables::cyclic(2))?,
            _ => ObjectRef::finqgrp(&tables::subtraction_quasigroup(3))?,
        },
    })
}

fn random_same_kind_object(rng: &mut ChaCha8Rng, like: &ObjectRef) -> Result<ObjectRef> {
    Ok(match like.kind() {
        BackendKind::FinSet => ObjectRef::finset(rng.gen_range(0..=3)),
        BackendKind::FinGrp => match rng.gen_range(0..3u32) {
            0 => ObjectRef::fingrp(&tables::cyclic(2))?,
            1 => ObjectRef::fingrp(&tables::cyclic(3))?,
            _ => ObjectRef::fingrp(&tables::klein_four())?,
        },
        BackendKind::FinVect { .. } => ObjectRef::finvect(2, rng.gen_range(0..=2))?,
        BackendKind::FinQGrp => match rng.gen_range(0..2u32) {
            0 => ObjectRef::finqgrp(&tables::cyclic(2))?,
            _ => ObjectRef::finqgrp(&tables::subtraction_quasigroup(3))?,
        },
    })
}

fn random_relation(rng: &mut ChaCha8Rng, a: &ObjectRef, b: &ObjectRef) -> Result<Relation> {
    let prod = backend::product(a, b)?;
    if prod.size() == 0 {
        return Relation::new(a.clone(), b.clone(), []);
    }
    let k = rng.gen_range(0..=4usize);
    let seed: BTreeSet<usize> = (0..k).map(|_| rng.gen_range(0..prod.size())).collect();
    let closed = backend::subobject_generated(&prod, &seed)?;
    Relation::new(
        a.clone(),
        b.clone(),
        closed
            .iter()
            .map(|&i| backend::unpair_index(b.size(), i)),
    )
}

/// Randomized coherence battery over small objects with a fixed seed:
/// snake equations, dagger involution and contravariance, the interchange
/// law, swap naturality, and monotonicity of composition.
pub fn diagram_coherence_battery(cases: usize, seed: u64) -> Result<(usize, bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    for _ in 0..cases {
        let a1 = random_object(&mut rng)?;
        let a2 = random_same_kind_object(&mut rng, &a1)?;
        let a3 = random_same_kind_object(&mut rng, &a1)?;
        let b1 = random_same_kind_object(&mut rng, &a1)?;
        let b2 = random_same_kind_object(&mut rng, &a1)?;
        let b3 = random_same_kind_object(&mut rng, &a1)?;

        // snake equations on a1
        let id = rel::identity(&a1);
        let left = rel::compose(
            &rel::tensor(&id, &rel::cup(&a1)?)?,
            &rel::tensor(&rel::cap(&a1)?, &id)?,
        )?;
        let right = rel::compose(
            &rel::tensor(&rel::cup(&a1)?, &id)?,
            &rel::tensor(&id, &rel::cap(&a1)?)?,
        )?;
        if left != id || right != id {
            failures += 1;
            continue;
        }

        let f = random_relation(&mut rng, &a1, &a2)?;
        let h = random_relation(&mut rng, &a2, &a3)?;
        let g = random_relation(&mut rng, &b1, &b2)?;
        let k = random_relation(&mut rng, &b2, &b3)?;

        // dagger involution and contravariance
        if rel::dagger(&rel::dagger(&f)) != f {
            failures += 1;
            continue;
        }
        if rel::dagger(&rel::compose(&f, &h)?)
            != rel::compose(&rel::dagger(&h), &rel::dagger(&f))?
        {
            failures += 1;
            continue;
        }

        // interchange law
        let lhs = rel::compose(&rel::tensor(&f, &g)?, &rel::tensor(&h, &k)?)?;
        let rhs = rel::tensor(&rel::compose(&f, &h)?, &rel::compose(&g, &k)?)?;
        if lhs != rhs {
            failures += 1;
            continue;
        }

        // swap naturality
        let lhs = rel::compose(&rel::tensor(&f, &g)?, &rel::swap(&a2, &b2)?)?;
        let rhs = rel::compose(&rel::swap(&a1, &b1)?, &rel::tensor(&g, &f)?)?;
        if lhs != rhs {
            failures += 1;
            continue;
        }

        // monotonicity of composition along meets
        let f2 = random_relation(&mut rng, &a1, &a2)?;
        let smaller = rel::meet(&f, &f2)?;
        if !rel::leq(
            &rel::compose(&smaller, &h)?,
            &rel::compose(&f, &h)?,
        )? {
            failures += 1;
        }
    }
    Ok((
        cases,
        failures == 0,
        format!("{cases} randomized coherence cases, {failures} failures"),
    ))
}

// ---------------------------------------------------------------------
// CP equivalence and closure
// ---------------------------------------------------------------------

fn finset_cp_structures() -> Result<Vec<FrobeniusStructure>> {
    Ok(vec![
        frobenius::group_structure_in_finset(&tables::cyclic(2))?,
        frobenius::indiscrete(&ObjectRef::finset(2))?,
    ])
}

fn suite_cp_equivalence(budget: usize) -> Result<Vec<SuiteItem>> {
    let mut items = Vec::new();

    // CP iff respects-inverses, exhaustively
    let structures = finset_cp_structures()?;
    let mut ok = true;
    let mut total = 0usize;
    for fa in &structures {
        for fb in &structures {
            let report = cp::respects_inverses_equiv_check(fa, fb, budget)?;
            total += report.relations_checked;
            if !report.holds() {
                ok = false;
            }
        }
    }
    let ind_grp = frobenius::indiscrete(&ObjectRef::fingrp(&tables::cyclic(2))?)?;
    let report = cp::respects_inverses_equiv_check(&ind_grp, &ind_grp, budget)?;
    total += report.relations_checked;
    if !report.holds() {
        ok = false;
    }
    items.push(item(
        "cp-equivalence",
        ok,
        format!("{total} relations: completely positive iff inverse-respecting, no disagreements"),
    ));

    // closure of CP under composition over the same populations
    let mut pool: Vec<FrobeniusStructure> = structures.clone();
    pool.push(ind_grp.clone());
    let mut contexts: BTreeMap<(usize, usize), cp::CpContext> = BTreeMap::new();
    let mut cp_homs: BTreeMap<(usize, usize), Vec<CpMorphism>> = BTreeMap::new();
    for (i, fa) in pool.iter().enumerate() {
        for (j, fb) in pool.iter().enumerate() {
            if fa.kind() != fb.kind() {
                continue;
            }
            let ctx = cp::CpContext::new(fa, fb)?;
            let mut homs = Vec::new();
            for r in rel::enumerate_relations(fa.carrier(), fb.carrier(), budget)? {
                if ctx.is_cp(&r)? {
                    homs.push(CpMorphism::new_in(&ctx, r)?);
                }
            }
            cp_homs.insert((i, j), homs);
            contexts.insert((i, j), ctx);
        }
    }
    let mut composites = 0usize;
    let mut ok = true;
    for i in 0..pool.len() {
        for j in 0..pool.len() {
            for k in 0..pool.len() {
                let (Some(fs), Some(gs), Some(ctx)) = (
                    cp_homs.get(&(i, j)),
                    cp_homs.get(&(j, k)),
                    contexts.get(&(i, k)),
                ) else {
                    continue;
                };
                for f in fs {
                    for g in gs {
                        composites += 1;
                        if cp::cp_compose_in(ctx, f, g).is_err() {
                            ok = false;
                        }
                    }
                }
            }
        }
    }
    items.push(item(
        "cp-closure",
        ok && composites > 0,
        format!("{composites} pairwise composites of CP morphisms are all CP"),
    ));

    // positively monoidal: positivity of R (x) id implies positivity of R
    let mut ok = true;
    let mut total = 0usize;
    for f in &pool {
        let a = f.carrier();
        let id = rel::identity(a);
        for r in rel::enumerate_relations(a, a, budget)? {
            total += 1;
            let padded = rel::tensor(&r, &id)?;
            if rel::is_positive(&padded)?.is_some() && rel::is_positive(&r)?.is_none() {
                ok = false;
            }
        }
    }
    items.push(item(
        "positively-monoidal",
        ok,
        format!("{total} endo-relations: positivity of R (x) id implies positivity of R"),
    ));

    Ok(items)
}

// ---------------------------------------------------------------------
// Mal'cev characterization and unitality
// ---------------------------------------------------------------------

fn suite_malcev(budget: usize) -> Result<Vec<SuiteItem>> {
    let mut items = Vec::new();

    let mut carriers: Vec<ObjectRef> = Vec::new();
    for table in [
        tables::cyclic(2),
        tables::cyclic(3),
        tables::cyclic(4),
        tables::klein_four(),
        tables::cyclic(5),
        tables::cyclic(6),
        tables::s3(),
    ] {
        carriers.push(ObjectRef::fingrp(&table)?);
    }
    carriers.push(ObjectRef::finvect(2, 1)?);
    carriers.push(ObjectRef::finvect(2, 2)?);
    carriers.push(ObjectRef::finqgrp(&tables::cyclic(2))?);
    carriers.push(ObjectRef::finqgrp(&tables::subtraction_quasigroup(3))?);
    carriers.push(ObjectRef::finqgrp(&tables::subtraction_quasigroup(4))?);

    let mut total = 0usize;
    let mut ok = true;
    for a in &carriers {
        for r in rel::enumerate_relations(a, a, budget)? {
            total += 1;
            if !rel::is_difunctional(&r) {
                ok = false;
            }
            if rel::is_reflexive(&r)? && !rel::is_equivalence(&r)? {
                ok = false;
            }
        }
    }
    items.push(item(
        "malcev-characterization",
        ok,
        format!(
            "{total} relations over Mal'cev carriers: all difunctional, reflexive ones are equivalences"
        ),
    ));

    let a = ObjectRef::finset(2);
    let pinned = Relation::new(a.clone(), a, [(0usize, 0usize), (1, 0), (1, 1)])?;
    items.push(item(
        "finset-not-malcev",
        !rel::is_difunctional(&pinned),
        "the pinned FinSet relation fails difunctionality".into(),
    ));

    // unitality suffices: exhaustive over subalgebra pairs (M, U)
    let mut ok = true;
    let mut unital_count = 0usize;
    let mut pairs_checked = 0usize;
    let mut unital_carriers: Vec<ObjectRef> = vec![
        ObjectRef::fingrp(&tables::cyclic(2))?,
        ObjectRef::fingrp(&tables::klein_four())?,
        ObjectRef::finvect(2, 1)?,
    ];
    for a in unital_carriers.drain(..) {
        let sq = backend::product(&a, &a)?;
        let mults = rel::enumerate_relations(&sq, &a, budget)?;
        let units = rel::enumerate_relations(&backend::terminal(a.kind()), &a, budget)?;
        for m in &mults {
            for u in &units {
                pairs_checked += 1;
                match frobenius::frobenius_from_unital(m.clone(), u.clone()) {
                    Ok(f) => {
                        unital_count += 1;
                        if !frobenius::check_frobenius(&f)?.passed() {
                            ok = false;
                        }
                    }
                    Err(Error::NotUnital(_)) => {}
                    Err(_) => {
                        ok = false;
                    }
                }
            }
        }
    }
    items.push(item(
        "unitality-suffices",
        ok && unital_count > 0,
        format!(
            "{pairs_checked} (mult, unit) pairs scanned; all {unital_count} unital ones pass the full axiom check"
        ),
    ));

    Ok(items)
}

// ---------------------------------------------------------------------
// quantum properties
// ---------------------------------------------------------------------

fn suite_quantum(budget: usize) -> Result<Vec<SuiteItem>> {
    let mut items = Vec::new();

    // pinned violations reproduce their verdicts
    let (m, f_b, f_c) = quantum::heisenberg_violation_instance()?;
    let heis = quantum::check_heisenberg_instance(&m, &f_b, &f_c, budget)?;
    items.push(item(
        "pinned-heisenberg",
        !heis.holds,
        "the pinned FinSet measurement violates Heisenberg uncertainty".into(),
    ));
    let (b_map, f_s3) = quantum::broadcasting_violation_instance()?;
    let is_b = quantum::is_broadcasting_map(&b_map, &f_s3)?;
    let noncomm = !frobenius::is_commutative(&f_s3)?;
    items.push(item(
        "pinned-broadcasting",
        is_b && noncomm,
        "the pinned map broadcasts a noncommutative FinSet structure".into(),
    ));
    let r = quantum::bottleneck_violation_relation()?;
    items.push(item(
        "pinned-bottleneck",
        !quantum::check_bottleneck(&r)?.holds,
        "the pinned relation violates the bottleneck principle".into(),
    ));

    // Heisenberg holds for every CP measurement on the indiscrete FinGrp
    // structure, outcomes in any group structure of order <= 4
    let base = ObjectRef::fingrp(&tables::cyclic(2))?;
    let f_b = frobenius::indiscrete(&base)?;
    let mut ok = true;
    let mut cp_instances = 0usize;
    for table in abelian_tables_up_to(4) {
        let f_c = frobenius::group_structure(&ObjectRef::fingrp(&table)?)?;
        let checker = quantum::HeisenbergChecker::new(&f_b, &f_c, budget)?;
        for m in
            rel::enumerate_relations(f_b.carrier(), checker.measurement_codomain(), budget)?
        {
            if !checker.is_cp(&m)? {
                continue;
            }
            cp_instances += 1;
            if !checker.check(&m)?.holds {
                ok = false;
            }
        }
    }
    items.push(item(
        "heisenberg-malcev",
        ok && cp_instances > 0,
        format!("{cp_instances} CP measurements on the indiscrete FinGrp structure all satisfy uncertainty"),
    ));

    // no broadcasting map for the noncommutative indiscrete FinGrp structure
    let found = quantum::search_broadcasting_map(&f_b, budget)?;
    items.push(item(
        "no-broadcasting-malcev",
        found.is_none() && !frobenius::is_commutative(&f_b)?,
        "exhaustive search finds no broadcasting map for the indiscrete FinGrp structure".into(),
    ));
    // while the commutative FinSet structure has one
    let f_comm = frobenius::group_structure_in_finset(&tables::cyclic(2))?;
    let found = quantum::search_broadcasting_map(&f_comm, budget)?;
    let canonical_ok =
        quantum::is_broadcasting_map(&rel::dagger(f_comm.mult()), &f_comm)?;
    items.push(item(
        "broadcasting-commutative",
        found.is_some() && canonical_ok,
        "the commutative structure broadcasts (and its comultiplication is such a map)".into(),
    ));

    // bottleneck holds for all subgroup relations with |G|, |H| <= 6
    let mut group_objs = Vec::new();
    for table in [
        tables::cyclic(1),
        tables::cyclic(2),
        tables::cyclic(3),
        tables::cyclic(4),
        tables::klein_four(),
        tables::cyclic(5),
        tables::cyclic(6),
        tables::s3(),
    ] {
        group_objs.push(ObjectRef::fingrp(&table)?);
    }
    let mut ok = true;
    let mut total = 0usize;
    for g in &group_objs {
        for h in &group_objs {
            for r in rel::enumerate_relations(g, h, budget)? {
                total += 1;
                if !quantum::check_bottleneck(&r)?.holds {
                    ok = false;
                }
            }
        }
    }
    items.push(item(
        "bottleneck-malcev",
        ok,
        format!("{total} subgroup relations between groups of order <= 6 satisfy the bottleneck principle"),
    ));

    // every CP state of the tested FinGrp structures is a projection
    let mut structures = vec![f_b.clone()];
    for table in abelian_tables_up_to(4) {
        structures.push(frobenius::group_structure(&ObjectRef::fingrp(&table)?)?);
    }
    let mut ok = true;
    let mut states = 0usize;
    for f in &structures {
        let triv = frobenius::trivial_structure(f.kind())?;
        let ctx = cp::CpContext::new(&triv, f)?;
        for psi in rel::enumerate_relations(triv.carrier(), f.carrier(), budget)? {
            if !ctx.is_cp(&psi)? {
                continue;
            }
            states += 1;
            if !quantum::check_state_projection(&psi, f)?.holds {
                ok = false;
            }
        }
    }
    items.push(item(
        "projections-malcev",
        ok && states > 0,
        format!("{states} CP states of FinGrp structures are all projections"),
    ));

    // copyable states: at most one in the entirely inhabited backends
    // (group structures carry exactly one, the quantum structure none),
    // plural in the pinned FinSet and FinQGrp instances
    let mut ok = true;
    for f in [
        frobenius::group_structure(&ObjectRef::fingrp(&tables::cyclic(2))?)?,
        frobenius::group_structure(&ObjectRef::fingrp(&tables::cyclic(3))?)?,
        frobenius::group_structure(&ObjectRef::fingrp(&tables::klein_four())?)?,
        frobenius::group_structure(&ObjectRef::finvect(2, 1)?)?,
    ] {
        if frobenius::copyable_states(&f, budget)?.len() != 1 {
            ok = false;
        }
    }
    if !frobenius::copyable_states(&f_b, budget)?.is_empty() {
        ok = false;
    }
    let finset_states =
        frobenius::copyable_states(&frobenius::group_structure_in_finset(&tables::cyclic(2))?, budget)?;
    let qgrp_structure = {
        let q = ObjectRef::finqgrp(&tables::cyclic(2))?;
        let sq = backend::product(&q, &q)?;
        let mut pairs = BTreeSet::new();
        for x in 0..2usize {
            for y in 0..2usize {
                pairs.insert((backend::pair_index(2, x, y), (x + y) % 2));
            }
        }
        let mult = Relation::new(sq, q.clone(), pairs)?;
        let unit = Relation::new(backend::terminal(BackendKind::FinQGrp), q.clone(), [
            (0usize, 0usize),
        ])?;
        FrobeniusStructure::new(q, mult, unit)?
    };
    let qgrp_states = frobenius::copyable_states(&qgrp_structure, budget)?;
    if finset_states.len() != 2 || qgrp_states.len() != 2 {
        ok = false;
    }
    items.push(item(
        "copyable-states",
        ok,
        format!(
            "unique copyable states in FinGrp/FinVect; {} in the pinned FinSet and {} in the pinned FinQGrp instance",
            finset_states.len(),
            qgrp_states.len()
        ),
    ));

    Ok(items)
}

// ---------------------------------------------------------------------
// protocol suite
// ---------------------------------------------------------------------

fn suite_crypto(budget: usize) -> Result<Vec<SuiteItem>> {
    let mut items = Vec::new();
    let mut ok = true;
    let mut count = 0usize;
    for table in [
        tables::cyclic(2),
        tables::cyclic(3),
        tables::cyclic(4),
        tables::s3(),
    ] {
        let g = ObjectRef::fingrp(&table)?;
        for n in 1..=2u32 {
            let spec = crypto::make_otp(&g, n, budget)?;
            count += 1;
            if !crypto::check_correctness(&spec)?.holds {
                ok = false;
            }
            if !crypto::check_security(&spec)?.holds {
                ok = false;
            }
        }
    }
    items.push(item(
        "otp-correct-and-secure",
        ok && count == 8,
        format!("{count} one-time pads over groups up to S3 with n in {{1,2}} are correct and secure"),
    ));

    let spec = crypto::identity_cipher(&ObjectRef::finset(2), &ObjectRef::finset(2))?;
    let correct = crypto::check_correctness(&spec)?.holds;
    let secure = crypto::check_security(&spec)?.holds;
    items.push(item(
        "identity-cipher-insecure",
        correct && !secure,
        "the key-ignoring cipher is correct but fails security".into(),
    ));

    Ok(items)
}

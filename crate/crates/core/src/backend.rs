//! Concrete finite models of regular categories.
//!
//! Four backends are supported: finite sets, finite groups (explicit
//! multiplication tables), finite-dimensional vector spaces over a prime
//! field, and finite quasigroups (Latin squares with division tables).
//! Carriers are index-based: elements are `0..size`, and every higher
//! module speaks indices. Product objects keep a flat list of base
//! factors, so products are strictly associative and unital on indices
//! (`pair = a * |B| + b`) and no product table is ever materialized.

use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

/// Default cap on `p^dim` for vector-space objects; relations are stored
/// elementwise, so larger carriers are rejected at construction.
pub const DEFAULT_VECT_ELEMENT_CAP: usize = 256;

/// Which finite variety an object lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BackendKind {
    FinSet,
    FinGrp,
    FinVect { p: u32 },
    FinQGrp,
}

impl BackendKind {
    /// True when every reflexive relation in the variety is an equivalence
    /// relation (equivalently, a Mal'cev term exists).
    pub fn is_malcev(self) -> bool {
        !matches!(self, BackendKind::FinSet)
    }

    /// Every backend here is positively regular: FinSet because it is
    /// coherent, the others because they are Mal'cev.
    pub fn is_positively_regular(self) -> bool {
        true
    }

    /// True when every subobject of the terminal object is an isomorphism.
    pub fn is_entirely_inhabited(self) -> bool {
        matches!(self, BackendKind::FinGrp | BackendKind::FinVect { .. })
    }

    pub fn name(self) -> &'static str {
        match self {
            BackendKind::FinSet => "finset",
            BackendKind::FinGrp => "fingrp",
            BackendKind::FinVect { .. } => "finvect",
            BackendKind::FinQGrp => "finqgrp",
        }
    }
}

/// Multiplication table of a base group factor, identity pinned to index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl GroupTable {
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }
}

/// Latin square of a base quasigroup factor plus left/right division tables,
/// which satisfy `x * (x \ y) = y` and `(y / x) * x = y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QgTable {
    n: usize,
    mul: Vec<usize>,
    ldiv: Vec<usize>,
    rdiv: Vec<usize>,
}

impl QgTable {
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }
    fn ldiv(&self, a: usize, b: usize) -> usize {
        self.ldiv[a * self.n + b]
    }
    fn rdiv(&self, a: usize, b: usize) -> usize {
        self.rdiv[a * self.n + b]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ObjectData {
    Set,
    /// Flat factor list; size-1 factors are dropped so the empty list is the
    /// terminal object and concatenation is strictly associative and unital.
    Group(Arc<Vec<GroupTable>>),
    Vect {
        dim: u32,
    },
    Quasigroup(Arc<Vec<QgTable>>),
}

/// A finite carrier with algebraic structure, elements indexed `0..size`.
///
/// For groups the identity sits at index 0; for vector spaces elements are
/// coefficient tuples over `F_p` in lexicographic order with index 0 the
/// zero vector. Small carriers cache flattened operation tables on first
/// use; the cache is excluded from equality and changes no observable
/// behavior.
#[derive(Debug, Clone)]
pub struct ObjectRef {
    kind: BackendKind,
    size: usize,
    data: ObjectData,
    flat: Arc<OnceLock<FlatOps>>,
}

impl PartialEq for ObjectRef {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.size == other.size && self.data == other.data
    }
}

impl Eq for ObjectRef {}

/// Carrier size up to which flattened operation tables are materialized.
const FLAT_CACHE_MAX_ELEMS: usize = 512;

#[derive(Debug)]
struct FlatOps {
    mul: Vec<usize>,
    inv: Vec<usize>,
    ldiv: Vec<usize>,
    rdiv: Vec<usize>,
}

/// Construction data for [`make_object`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectSpec {
    Set { size: usize },
    Group { table: Vec<Vec<usize>> },
    Vect { p: u32, dim: u32 },
    Quasigroup { table: Vec<Vec<usize>> },
}

/// Build a validated object from construction data.
pub fn make_object(spec: ObjectSpec) -> Result<ObjectRef> {
    match spec {
        ObjectSpec::Set { size } => Ok(ObjectRef::finset(size)),
        ObjectSpec::Group { table } => ObjectRef::fingrp(&table),
        ObjectSpec::Vect { p, dim } => ObjectRef::finvect(p, dim),
        ObjectSpec::Quasigroup { table } => ObjectRef::finqgrp(&table),
    }
}

/// The one-element object of the given kind: one-point set, trivial group,
/// zero space, or one-point quasigroup. It is the monoidal unit of the
/// relation category over the backend.
pub fn terminal(kind: BackendKind) -> ObjectRef {
    match kind {
        BackendKind::FinSet => ObjectRef::finset(1),
        BackendKind::FinGrp => ObjectRef {
            flat: Arc::new(OnceLock::new()),
            kind,
            size: 1,
            data: ObjectData::Group(Arc::new(Vec::new())),
        },
        BackendKind::FinVect { .. } => ObjectRef {
            flat: Arc::new(OnceLock::new()),
            kind,
            size: 1,
            data: ObjectData::Vect { dim: 0 },
        },
        BackendKind::FinQGrp => ObjectRef {
            flat: Arc::new(OnceLock::new()),
            kind,
            size: 1,
            data: ObjectData::Quasigroup(Arc::new(Vec::new())),
        },
    }
}

fn check_square_table(table: &[Vec<usize>]) -> Result<usize> {
    let n = table.len();
    for row in table {
        if row.len() != n {
            return Err(Error::MalformedAlgebra("table is not square".into()));
        }
        for &v in row {
            if v >= n {
                return Err(Error::MalformedAlgebra(format!(
                    "table entry {v} out of range for carrier of size {n}"
                )));
            }
        }
    }
    Ok(n)
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl ObjectRef {
    pub fn finset(size: usize) -> ObjectRef {
        ObjectRef {
            flat: Arc::new(OnceLock::new()),
            kind: BackendKind::FinSet,
            size,
            data: ObjectData::Set,
        }
    }

    /// Validate a multiplication table as a group (associative, identity at
    /// index 0, every element invertible) and wrap it as an object.
    pub fn fingrp(table: &[Vec<usize>]) -> Result<ObjectRef> {
        let n = check_square_table(table)?;
        if n == 0 {
            return Err(Error::MalformedAlgebra(
                "group carrier may not be empty".into(),
            ));
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(Error::MalformedAlgebra(
                    "identity is not at index 0".into(),
                ));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::MalformedAlgebra(format!(
                            "not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if table[a][b] == 0 && table[b][a] == 0 {
                    inv[a] = b;
                }
            }
            if inv[a] == usize::MAX {
                return Err(Error::MalformedAlgebra(format!(
                    "element {a} has no inverse"
                )));
            }
        }
        let mul = table.iter().flatten().copied().collect();
        let factors = if n == 1 {
            Vec::new()
        } else {
            vec![GroupTable { n, mul, inv }]
        };
        Ok(ObjectRef {
            flat: Arc::new(OnceLock::new()),
            kind: BackendKind::FinGrp,
            size: n,
            data: ObjectData::Group(Arc::new(factors)),
        })
    }

    pub fn finvect(p: u32, dim: u32) -> Result<ObjectRef> {
        ObjectRef::finvect_with_cap(p, dim, DEFAULT_VECT_ELEMENT_CAP)
    }

    pub fn finvect_with_cap(p: u32, dim: u32, cap: usize) -> Result<ObjectRef> {
        if !is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        let mut size = 1usize;
        for _ in 0..dim {
            size = size.checked_mul(p as usize).unwrap_or(usize::MAX);
            if size > cap {
                return Err(Error::EnumerationBudgetExceeded(format!(
                    "vector space {p}^{dim} exceeds the element cap {cap}"
                )));
            }
        }
        Ok(ObjectRef {
            flat: Arc::new(OnceLock::new()),
            kind: BackendKind::FinVect { p },
            size,
            data: ObjectData::Vect { dim },
        })
    }

    /// Validate a table as a Latin square and derive its division tables.
    pub fn finqgrp(table: &[Vec<usize>]) -> Result<ObjectRef> {
        let n = check_square_table(table)?;
        let mut ldiv = vec![usize::MAX; n * n];
        let mut rdiv = vec![usize::MAX; n * n];
        for a in 0..n {
            let mut seen = vec![false; n];
            for b in 0..n {
                let v = table[a][b];
                if seen[v] {
                    return Err(Error::MalformedAlgebra(format!(
                        "row {a} is not a permutation"
                    )));
                }
                seen[v] = true;
                // a * b = v, so a \ v = b
                ldiv[a * n + v] = b;
            }
        }
        for b in 0..n {
            let mut seen = vec![false; n];
            for a in 0..n {
                let v = table[a][b];
                if seen[v] {
                    return Err(Error::MalformedAlgebra(format!(
                        "column {b} is not a permutation"
                    )));
                }
                seen[v] = true;
                // a * b = v, so v / b = a
                rdiv[v * n + b] = a;
            }
        }
        let mul = table.iter().flatten().copied().collect();
        let factors = if n == 1 {
            Vec::new()
        } else {
            vec![QgTable { n, mul, ldiv, rdiv }]
        };
        Ok(ObjectRef {
            flat: Arc::new(OnceLock::new()),
            kind: BackendKind::FinQGrp,
            size: n,
            data: ObjectData::Quasigroup(Arc::new(factors)),
        })
    }

    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn is_terminal(&self) -> bool {
        self.size == 1 && *self == terminal(self.kind)
    }

    fn factor_sizes(&self) -> Vec<usize> {
        match &self.data {
            ObjectData::Set => vec![self.size],
            ObjectData::Group(fs) => fs.iter().map(|f| f.n).collect(),
            ObjectData::Vect { dim } => {
                let p = match self.kind {
                    BackendKind::FinVect { p } => p as usize,
                    _ => unreachable!(),
                };
                vec![p; *dim as usize]
            }
            ObjectData::Quasigroup(fs) => fs.iter().map(|f| f.n).collect(),
        }
    }

    fn decompose(&self, mut index: usize) -> Vec<usize> {
        let sizes = self.factor_sizes();
        let mut out = vec![0; sizes.len()];
        for (slot, &n) in sizes.iter().enumerate().rev() {
            out[slot] = index % n;
            index /= n;
        }
        out
    }

    fn recompose(&self, digits: &[usize]) -> usize {
        let sizes = self.factor_sizes();
        let mut index = 0usize;
        for (slot, &n) in sizes.iter().enumerate() {
            index = index * n + digits[slot];
        }
        index
    }

    /// Componentwise binary operation: group or quasigroup multiplication,
    /// vector addition. Not defined for FinSet.
    pub fn op_mul(&self, a: usize, b: usize) -> usize {
        if let Some(f) = self.flat_ops() {
            return f.mul[a * self.size + b];
        }
        self.op_mul_slow(a, b)
    }

    /// Group inverse or vector negation.
    pub fn op_inv(&self, a: usize) -> usize {
        if let Some(f) = self.flat_ops() {
            if !f.inv.is_empty() {
                return f.inv[a];
            }
        }
        self.op_inv_slow(a)
    }

    /// Left division `a \ b`: the unique `z` with `a * z = b`.
    pub fn op_ldiv(&self, a: usize, b: usize) -> usize {
        if let Some(f) = self.flat_ops() {
            if !f.ldiv.is_empty() {
                return f.ldiv[a * self.size + b];
            }
        }
        self.op_ldiv_slow(a, b)
    }

    /// Right division `b / a`: the unique `z` with `z * a = b`.
    pub fn op_rdiv(&self, b: usize, a: usize) -> usize {
        if let Some(f) = self.flat_ops() {
            if !f.rdiv.is_empty() {
                return f.rdiv[b * self.size + a];
            }
        }
        self.op_rdiv_slow(b, a)
    }

    /// Flattened operation tables for small carriers, built on first use.
    fn flat_ops(&self) -> Option<&FlatOps> {
        if self.kind == BackendKind::FinSet || self.size == 0 || self.size > FLAT_CACHE_MAX_ELEMS
        {
            return None;
        }
        Some(self.flat.get_or_init(|| {
            let n = self.size;
            let mut mul = vec![0usize; n * n];
            for a in 0..n {
                for b in 0..n {
                    mul[a * n + b] = self.op_mul_slow(a, b);
                }
            }
            let mut inv = Vec::new();
            let mut ldiv = Vec::new();
            let mut rdiv = Vec::new();
            match self.kind {
                BackendKind::FinGrp | BackendKind::FinVect { .. } => {
                    inv = (0..n).map(|a| self.op_inv_slow(a)).collect();
                }
                BackendKind::FinQGrp => {
                    ldiv = vec![0usize; n * n];
                    rdiv = vec![0usize; n * n];
                    for a in 0..n {
                        for b in 0..n {
                            ldiv[a * n + b] = self.op_ldiv_slow(a, b);
                            rdiv[a * n + b] = self.op_rdiv_slow(a, b);
                        }
                    }
                }
                BackendKind::FinSet => unreachable!(),
            }
            FlatOps { mul, inv, ldiv, rdiv }
        }))
    }

    fn op_mul_slow(&self, a: usize, b: usize) -> usize {
        match &self.data {
            ObjectData::Set => panic!("FinSet carriers have no operations"),
            ObjectData::Group(fs) => {
                let (mut aa, mut bb) = (a, b);
                let (mut out, mut scale) = (0usize, 1usize);
                for f in fs.iter().rev() {
                    out += f.mul(aa % f.n, bb % f.n) * scale;
                    scale *= f.n;
                    aa /= f.n;
                    bb /= f.n;
                }
                out
            }
            ObjectData::Vect { dim } => {
                let p = match self.kind {
                    BackendKind::FinVect { p } => p as usize,
                    _ => unreachable!(),
                };
                let (mut aa, mut bb) = (a, b);
                let (mut out, mut scale) = (0usize, 1usize);
                for _ in 0..*dim {
                    out += (aa % p + bb % p) % p * scale;
                    scale *= p;
                    aa /= p;
                    bb /= p;
                }
                out
            }
            ObjectData::Quasigroup(fs) => {
                let (mut aa, mut bb) = (a, b);
                let (mut out, mut scale) = (0usize, 1usize);
                for f in fs.iter().rev() {
                    out += f.mul(aa % f.n, bb % f.n) * scale;
                    scale *= f.n;
                    aa /= f.n;
                    bb /= f.n;
                }
                out
            }
        }
    }

    fn op_inv_slow(&self, a: usize) -> usize {
        match &self.data {
            ObjectData::Group(fs) => {
                let mut aa = a;
                let (mut out, mut scale) = (0usize, 1usize);
                for f in fs.iter().rev() {
                    out += f.inv[aa % f.n] * scale;
                    scale *= f.n;
                    aa /= f.n;
                }
                out
            }
            ObjectData::Vect { dim } => {
                let p = match self.kind {
                    BackendKind::FinVect { p } => p as usize,
                    _ => unreachable!(),
                };
                let mut aa = a;
                let (mut out, mut scale) = (0usize, 1usize);
                for _ in 0..*dim {
                    out += (p - aa % p) % p * scale;
                    scale *= p;
                    aa /= p;
                }
                out
            }
            _ => panic!("op_inv requires a group or vector-space carrier"),
        }
    }

    fn op_ldiv_slow(&self, a: usize, b: usize) -> usize {
        match &self.data {
            ObjectData::Quasigroup(fs) => {
                let (mut aa, mut bb) = (a, b);
                let (mut out, mut scale) = (0usize, 1usize);
                for f in fs.iter().rev() {
                    out += f.ldiv(aa % f.n, bb % f.n) * scale;
                    scale *= f.n;
                    aa /= f.n;
                    bb /= f.n;
                }
                out
            }
            _ => panic!("op_ldiv requires a quasigroup carrier"),
        }
    }

    fn op_rdiv_slow(&self, b: usize, a: usize) -> usize {
        match &self.data {
            ObjectData::Quasigroup(fs) => {
                let (mut bb, mut aa) = (b, a);
                let (mut out, mut scale) = (0usize, 1usize);
                for f in fs.iter().rev() {
                    out += f.rdiv(bb % f.n, aa % f.n) * scale;
                    scale *= f.n;
                    bb /= f.n;
                    aa /= f.n;
                }
                out
            }
            _ => panic!("op_rdiv requires a quasigroup carrier"),
        }
    }

    /// The ternary Mal'cev term of the variety, when one exists.
    pub fn malcev_witness(&self) -> Option<MalcevWitness> {
        if self.kind.is_malcev() {
            Some(MalcevWitness { obj: self.clone() })
        } else {
            None
        }
    }

    /// Materialize the operation table (used only for serialization of
    /// group and quasigroup objects).
    pub fn materialized_table(&self) -> Option<Vec<Vec<usize>>> {
        match self.kind {
            BackendKind::FinGrp | BackendKind::FinQGrp => Some(
                (0..self.size)
                    .map(|a| (0..self.size).map(|b| self.op_mul(a, b)).collect())
                    .collect(),
            ),
            _ => None,
        }
    }

    pub fn vect_params(&self) -> Option<(u32, u32)> {
        match (&self.kind, &self.data) {
            (BackendKind::FinVect { p }, ObjectData::Vect { dim }) => Some((*p, *dim)),
            _ => None,
        }
    }
}

/// A ternary operation `p` with `p(x,y,y) = x = p(y,y,x)` on the carrier.
#[derive(Debug, Clone)]
pub struct MalcevWitness {
    obj: ObjectRef,
}

impl MalcevWitness {
    pub fn apply(&self, x: usize, y: usize, z: usize) -> usize {
        let o = &self.obj;
        match o.kind {
            BackendKind::FinGrp => o.op_mul(o.op_mul(x, o.op_inv(y)), z),
            BackendKind::FinVect { .. } => o.op_mul(o.op_mul(x, o.op_inv(y)), z),
            BackendKind::FinQGrp => {
                // (x / (y \ y)) * (y \ z)
                let e = o.op_ldiv(y, y);
                o.op_mul(o.op_rdiv(x, e), o.op_ldiv(y, z))
            }
            BackendKind::FinSet => panic!("FinSet has no Mal'cev term"),
        }
    }
}

/// Product of two carriers of the same kind, with componentwise structure.
/// The pairing bijection is `index = a * |B| + b`; with flat factor lists
/// this makes the product strictly associative.
pub fn product(a: &ObjectRef, b: &ObjectRef) -> Result<ObjectRef> {
    if a.kind != b.kind {
        return Err(Error::KindMismatch(format!(
            "cannot form a product of {} and {}",
            a.kind.name(),
            b.kind.name()
        )));
    }
    let size = a.size * b.size;
    let data = match (&a.data, &b.data) {
        (ObjectData::Set, ObjectData::Set) => ObjectData::Set,
        (ObjectData::Group(fa), ObjectData::Group(fb)) => {
            let mut fs = fa.as_ref().clone();
            fs.extend(fb.iter().cloned());
            ObjectData::Group(Arc::new(fs))
        }
        (ObjectData::Vect { dim: da }, ObjectData::Vect { dim: db }) => {
            ObjectData::Vect { dim: da + db }
        }
        (ObjectData::Quasigroup(fa), ObjectData::Quasigroup(fb)) => {
            let mut fs = fa.as_ref().clone();
            fs.extend(fb.iter().cloned());
            ObjectData::Quasigroup(Arc::new(fs))
        }
        _ => unreachable!("kinds already matched"),
    };
    Ok(ObjectRef {
        flat: Arc::new(OnceLock::new()),
        kind: a.kind,
        size,
        data,
    })
}

/// Pairing bijection for `product(a, b)`: `(x, y) -> x * |b| + y`.
pub fn pair_index(b_size: usize, x: usize, y: usize) -> usize {
    x * b_size + y
}

/// Inverse of [`pair_index`].
pub fn unpair_index(b_size: usize, i: usize) -> (usize, usize) {
    (i / b_size, i % b_size)
}

fn check_range(obj: &ObjectRef, s: &BTreeSet<usize>) -> Result<()> {
    if let Some(&max) = s.iter().next_back() {
        if max >= obj.size {
            return Err(Error::IndexOutOfRange {
                index: max,
                size: obj.size,
            });
        }
    }
    Ok(())
}

/// Whether `s` is closed under all operations of the variety: any subset in
/// FinSet, a subgroup in FinGrp, a subspace in FinVect, a subquasigroup in
/// FinQGrp.
pub fn is_subobject(obj: &ObjectRef, s: &BTreeSet<usize>) -> Result<bool> {
    check_range(obj, s)?;
    if obj.kind == BackendKind::FinSet {
        return Ok(true);
    }
    let mut member = vec![false; obj.size];
    for &x in s {
        member[x] = true;
    }
    match obj.kind {
        BackendKind::FinSet => unreachable!(),
        BackendKind::FinGrp => {
            if !member.first().copied().unwrap_or(false) {
                return Ok(false);
            }
            for &a in s {
                if !member[obj.op_inv(a)] {
                    return Ok(false);
                }
                for &b in s {
                    if !member[obj.op_mul(a, b)] {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        BackendKind::FinVect { .. } => {
            // Over a prime field an additive subgroup is already a subspace.
            if !member.first().copied().unwrap_or(false) {
                return Ok(false);
            }
            for &a in s {
                for &b in s {
                    if !member[obj.op_mul(a, b)] {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        BackendKind::FinQGrp => {
            for &a in s {
                for &b in s {
                    if !member[obj.op_mul(a, b)]
                        || !member[obj.op_ldiv(a, b)]
                        || !member[obj.op_rdiv(a, b)]
                    {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Least subobject containing `seed`: the fixpoint of operation closure.
/// Worklist-based; each element pair is combined a bounded number of times.
pub fn subobject_generated(obj: &ObjectRef, seed: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
    check_range(obj, seed)?;
    if obj.kind == BackendKind::FinSet {
        return Ok(seed.clone());
    }
    let n = obj.size;
    let mut member = vec![false; n];
    let mut elems: Vec<usize> = Vec::new();
    let mut work: Vec<usize> = Vec::new();
    let add = |member: &mut Vec<bool>,
                   elems: &mut Vec<usize>,
                   work: &mut Vec<usize>,
                   x: usize| {
        if !member[x] {
            member[x] = true;
            elems.push(x);
            work.push(x);
        }
    };
    match obj.kind {
        BackendKind::FinGrp | BackendKind::FinVect { .. } => {
            add(&mut member, &mut elems, &mut work, 0)
        }
        _ => {}
    }
    for &x in seed {
        add(&mut member, &mut elems, &mut work, x);
    }
    while let Some(x) = work.pop() {
        if obj.kind == BackendKind::FinGrp {
            add(&mut member, &mut elems, &mut work, obj.op_inv(x));
        }
        let mut i = 0;
        while i < elems.len() {
            let y = elems[i];
            match obj.kind {
                BackendKind::FinGrp | BackendKind::FinVect { .. } => {
                    add(&mut member, &mut elems, &mut work, obj.op_mul(x, y));
                    add(&mut member, &mut elems, &mut work, obj.op_mul(y, x));
                }
                BackendKind::FinQGrp => {
                    add(&mut member, &mut elems, &mut work, obj.op_mul(x, y));
                    add(&mut member, &mut elems, &mut work, obj.op_mul(y, x));
                    add(&mut member, &mut elems, &mut work, obj.op_ldiv(x, y));
                    add(&mut member, &mut elems, &mut work, obj.op_ldiv(y, x));
                    add(&mut member, &mut elems, &mut work, obj.op_rdiv(x, y));
                    add(&mut member, &mut elems, &mut work, obj.op_rdiv(y, x));
                }
                BackendKind::FinSet => unreachable!(),
            }
            i += 1;
        }
    }
    Ok(elems.into_iter().collect())
}

/// All subobjects of the carrier in deterministic order (sorted by size,
/// then lexicographically). Errors out if more than `limit` are produced.
pub fn enumerate_subobjects(obj: &ObjectRef, limit: usize) -> Result<Vec<BTreeSet<usize>>> {
    let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    if obj.kind == BackendKind::FinSet {
        if obj.size >= usize::BITS as usize - 1 || (1usize << obj.size) > limit {
            return Err(Error::EnumerationBudgetExceeded(format!(
                "2^{} subsets exceed the budget {limit}",
                obj.size
            )));
        }
        for mask in 0usize..(1 << obj.size) {
            let s: BTreeSet<usize> = (0..obj.size).filter(|i| mask >> i & 1 == 1).collect();
            found.insert(s);
        }
    } else {
        let least = subobject_generated(obj, &BTreeSet::new())?;
        found.insert(least);
        let mut frontier: Vec<BTreeSet<usize>> = found.iter().cloned().collect();
        while let Some(s) = frontier.pop() {
            for x in obj.elements() {
                if s.contains(&x) {
                    continue;
                }
                let mut seed = s.clone();
                seed.insert(x);
                let t = subobject_generated(obj, &seed)?;
                if found.insert(t.clone()) {
                    if found.len() > limit {
                        return Err(Error::EnumerationBudgetExceeded(format!(
                            "more than {limit} subobjects"
                        )));
                    }
                    frontier.push(t);
                }
            }
        }
    }
    let mut out: Vec<BTreeSet<usize>> = found.into_iter().collect();
    out.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.iter().cmp(b.iter()))
    });
    Ok(out)
}

/// Decide entire inhabitation by enumerating subobjects of the terminal
/// object rather than reading the kind flag.
pub fn is_entirely_inhabited(kind: BackendKind) -> Result<bool> {
    let subs = enumerate_subobjects(&terminal(kind), 16)?;
    Ok(subs.len() == 1)
}

/// A total homomorphism between carriers of one kind, as an index table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hom {
    dom: ObjectRef,
    cod: ObjectRef,
    table: Vec<usize>,
}

impl Hom {
    pub fn new(dom: ObjectRef, cod: ObjectRef, table: Vec<usize>) -> Result<Hom> {
        if dom.kind != cod.kind {
            return Err(Error::KindMismatch(
                "homomorphism endpoints must share a backend".into(),
            ));
        }
        if table.len() != dom.size {
            return Err(Error::MalformedAlgebra(format!(
                "homomorphism table has {} entries for a carrier of size {}",
                table.len(),
                dom.size
            )));
        }
        for &v in &table {
            if v >= cod.size {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    size: cod.size,
                });
            }
        }
        let h = Hom { dom, cod, table };
        h.check_preservation()?;
        Ok(h)
    }

    fn check_preservation(&self) -> Result<()> {
        let bad = |what: &str, a: usize, b: usize| {
            Err(Error::MalformedAlgebra(format!(
                "table does not preserve {what} at ({a},{b})"
            )))
        };
        match self.dom.kind {
            BackendKind::FinSet => Ok(()),
            BackendKind::FinGrp | BackendKind::FinVect { .. } => {
                for a in self.dom.elements() {
                    for b in self.dom.elements() {
                        if self.table[self.dom.op_mul(a, b)]
                            != self.cod.op_mul(self.table[a], self.table[b])
                        {
                            return bad("the operation", a, b);
                        }
                    }
                }
                Ok(())
            }
            BackendKind::FinQGrp => {
                for a in self.dom.elements() {
                    for b in self.dom.elements() {
                        if self.table[self.dom.op_mul(a, b)]
                            != self.cod.op_mul(self.table[a], self.table[b])
                        {
                            return bad("multiplication", a, b);
                        }
                        if self.table[self.dom.op_ldiv(a, b)]
                            != self.cod.op_ldiv(self.table[a], self.table[b])
                        {
                            return bad("left division", a, b);
                        }
                        if self.table[self.dom.op_rdiv(a, b)]
                            != self.cod.op_rdiv(self.table[a], self.table[b])
                        {
                            return bad("right division", a, b);
                        }
                    }
                }
                Ok(())
            }
        }
    }

    pub fn identity(obj: &ObjectRef) -> Hom {
        Hom {
            dom: obj.clone(),
            cod: obj.clone(),
            table: obj.elements().collect(),
        }
    }

    pub fn dom(&self) -> &ObjectRef {
        &self.dom
    }

    pub fn cod(&self) -> &ObjectRef {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size];
        for &v in &self.table {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    /// `other` after `self`.
    pub fn then(&self, other: &Hom) -> Result<Hom> {
        if self.cod != other.dom {
            return Err(Error::ObjectMismatch(
                "homomorphisms do not compose".into(),
            ));
        }
        Ok(Hom {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            table: self.table.iter().map(|&v| other.table[v]).collect(),
        })
    }
}

/// Realize a subobject as a carrier in its own right, together with the
/// inclusion homomorphism. Group/quasigroup subobjects are re-indexed in
/// increasing element order; vector subspaces get the canonical reduced
/// echelon basis, so the construction is deterministic.
pub fn sub_object(obj: &ObjectRef, s: &BTreeSet<usize>) -> Result<(ObjectRef, Hom)> {
    if !is_subobject(obj, s)? {
        return Err(Error::MalformedAlgebra(
            "the given set is not a subobject".into(),
        ));
    }
    let elems: Vec<usize> = s.iter().copied().collect();
    match obj.kind {
        BackendKind::FinSet => {
            let sub = ObjectRef::finset(elems.len());
            let hom = Hom::new(sub.clone(), obj.clone(), elems)?;
            Ok((sub, hom))
        }
        BackendKind::FinGrp | BackendKind::FinQGrp => {
            let pos: std::collections::BTreeMap<usize, usize> =
                elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
            let table: Vec<Vec<usize>> = elems
                .iter()
                .map(|&a| elems.iter().map(|&b| pos[&obj.op_mul(a, b)]).collect())
                .collect();
            let sub = if obj.kind == BackendKind::FinGrp {
                ObjectRef::fingrp(&table)?
            } else {
                ObjectRef::finqgrp(&table)?
            };
            let hom = Hom::new(sub.clone(), obj.clone(), elems)?;
            Ok((sub, hom))
        }
        BackendKind::FinVect { p } => {
            let (_, dim) = obj.vect_params().expect("vect object");
            let basis = echelon_basis(obj, &elems, p, dim);
            let k = basis.len() as u32;
            let sub = ObjectRef::finvect_with_cap(p, k, usize::MAX)?;
            let mut table = Vec::with_capacity(sub.size());
            for idx in sub.elements() {
                let coeffs = sub.decompose(idx);
                let mut acc = 0usize;
                for (c, b) in coeffs.iter().zip(basis.iter()) {
                    for _ in 0..*c {
                        acc = obj.op_mul(acc, *b);
                    }
                }
                table.push(acc);
            }
            let hom = Hom::new(sub.clone(), obj.clone(), table)?;
            Ok((sub, hom))
        }
    }
}

/// Reduced-echelon basis of the span of the given vectors (which in our use
/// already form a subspace), rows ordered by pivot position.
fn echelon_basis(obj: &ObjectRef, elems: &[usize], p: u32, dim: u32) -> Vec<usize> {
    let p = p as usize;
    let dim = dim as usize;
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for &e in elems {
        let mut v = obj.decompose(e);
        // reduce against current rows
        for row in &rows {
            let pivot = row.iter().position(|&x| x != 0).unwrap();
            if v[pivot] != 0 {
                let factor = v[pivot];
                for i in 0..dim {
                    v[i] = (v[i] + (p - 1) * factor * row[i]) % p;
                }
            }
        }
        if v.iter().any(|&x| x != 0) {
            let pivot = v.iter().position(|&x| x != 0).unwrap();
            let lead = v[pivot];
            let lead_inv = (1..p).find(|&x| (x * lead) % p == 1).unwrap();
            for x in v.iter_mut() {
                *x = (*x * lead_inv) % p;
            }
            // back-substitute into existing rows
            for row in rows.iter_mut() {
                if row[pivot] != 0 {
                    let factor = row[pivot];
                    for i in 0..dim {
                        row[i] = (row[i] + (p - 1) * factor * v[i]) % p;
                    }
                }
            }
            rows.push(v);
        }
    }
    rows.sort_by_key(|row| row.iter().position(|&x| x != 0).unwrap());
    rows.iter().map(|row| obj.recompose(row)).collect()
}

/// Ready-made operation tables for common test carriers.
pub mod tables {
    /// Cyclic group of order `n` (addition mod `n`).
    pub fn cyclic(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    /// Direct product of two multiplication tables.
    pub fn direct_product(t1: &[Vec<usize>], t2: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let (n1, n2) = (t1.len(), t2.len());
        let n = n1 * n2;
        let mut out = vec![vec![0; n]; n];
        for a1 in 0..n1 {
            for a2 in 0..n2 {
                for b1 in 0..n1 {
                    for b2 in 0..n2 {
                        out[a1 * n2 + a2][b1 * n2 + b2] = t1[a1][b1] * n2 + t2[a2][b2];
                    }
                }
            }
        }
        out
    }

    /// Klein four-group as Z2 x Z2.
    pub fn klein_four() -> Vec<Vec<usize>> {
        direct_product(&cyclic(2), &cyclic(2))
    }

    /// Symmetric group S3: permutations of three points in lexicographic
    /// one-line order, so the identity sits at index 0.
    pub fn s3() -> Vec<Vec<usize>> {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index = |q: [usize; 3]| perms.iter().position(|&r| r == q).unwrap();
        (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| {
                        let (pa, pb) = (perms[a], perms[b]);
                        index([pa[pb[0]], pa[pb[1]], pa[pb[2]]])
                    })
                    .collect()
            })
            .collect()
    }

    /// Subtraction mod `n`: a Latin square that is not a group for `n > 2`.
    pub fn subtraction_quasigroup(n: usize) -> Vec<Vec<usize>> {
        (0..n)
            .map(|a| (0..n).map(|b| (a + n - b) % n).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> ObjectRef {
        ObjectRef::fingrp(&tables::cyclic(n)).unwrap()
    }

    #[test]
    fn make_object_examples() {
        assert_eq!(ObjectRef::finset(2).size(), 2);
        assert_eq!(z(2).size(), 2);
        let bad = ObjectRef::fingrp(&[vec![0, 1], vec![0, 1]]);
        assert!(matches!(bad, Err(Error::MalformedAlgebra(_))));
        assert!(matches!(ObjectRef::finvect(4, 1), Err(Error::BadPrime(4))));
        assert!(matches!(
            ObjectRef::finvect(2, 9),
            Err(Error::EnumerationBudgetExceeded(_))
        ));
    }

    #[test]
    fn product_examples() {
        let ab = product(&ObjectRef::finset(2), &ObjectRef::finset(3)).unwrap();
        assert_eq!(ab.size(), 6);
        // Z2 x Z2 agrees with the Klein table built componentwise.
        let prod = product(&z(2), &z(2)).unwrap();
        let direct = ObjectRef::fingrp(&tables::klein_four()).unwrap();
        assert_eq!(prod.materialized_table(), direct.materialized_table());
        let v = product(
            &ObjectRef::finvect(2, 1).unwrap(),
            &ObjectRef::finvect(2, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(v.vect_params(), Some((2, 3)));
        assert!(product(&z(2), &ObjectRef::finset(2)).is_err());
    }

    #[test]
    fn product_is_strictly_associative_and_unital() {
        for obj in [
            z(2),
            ObjectRef::finset(3),
            ObjectRef::finvect(2, 1).unwrap(),
            ObjectRef::finqgrp(&tables::subtraction_quasigroup(3)).unwrap(),
        ] {
            let t = terminal(obj.kind());
            assert_eq!(product(&obj, &t).unwrap(), obj);
            assert_eq!(product(&t, &obj).unwrap(), obj);
            let left = product(&product(&obj, &obj).unwrap(), &obj).unwrap();
            let right = product(&obj, &product(&obj, &obj).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn pairing_round_trips() {
        let a = ObjectRef::finset(4);
        let b = ObjectRef::finset(3);
        let ab = product(&a, &b).unwrap();
        for x in a.elements() {
            for y in b.elements() {
                let i = pair_index(b.size(), x, y);
                assert!(i < ab.size());
                assert_eq!(unpair_index(b.size(), i), (x, y));
            }
        }
    }

    #[test]
    fn terminal_objects() {
        assert_eq!(terminal(BackendKind::FinSet).size(), 1);
        assert_eq!(terminal(BackendKind::FinGrp).size(), 1);
        assert_eq!(terminal(BackendKind::FinVect { p: 5 }).size(), 1);
        // the trivial group constructed from a table equals the terminal
        assert_eq!(
            ObjectRef::fingrp(&[vec![0]]).unwrap(),
            terminal(BackendKind::FinGrp)
        );
        assert_eq!(
            ObjectRef::finqgrp(&[vec![0]]).unwrap(),
            terminal(BackendKind::FinQGrp)
        );
    }

    #[test]
    fn subobject_examples() {
        let z2 = z(2);
        assert!(is_subobject(&z2, &BTreeSet::from([0])).unwrap());
        assert!(!is_subobject(&z2, &BTreeSet::from([1])).unwrap());
        assert!(is_subobject(&ObjectRef::finset(3), &BTreeSet::from([0, 2])).unwrap());
        assert!(matches!(
            is_subobject(&z2, &BTreeSet::from([5])),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn closure_examples() {
        let z4 = z(4);
        assert_eq!(
            subobject_generated(&z4, &BTreeSet::from([2])).unwrap(),
            BTreeSet::from([0, 2])
        );
        assert_eq!(
            subobject_generated(&z4, &BTreeSet::new()).unwrap(),
            BTreeSet::from([0])
        );
        let s = BTreeSet::from([1, 2]);
        assert_eq!(
            subobject_generated(&ObjectRef::finset(4), &s).unwrap(),
            s
        );
        let v = ObjectRef::finvect(2, 2).unwrap();
        assert_eq!(
            subobject_generated(&v, &BTreeSet::new()).unwrap(),
            BTreeSet::from([0])
        );
        // quasigroups have no constants: the empty set is closed
        let q = ObjectRef::finqgrp(&tables::subtraction_quasigroup(3)).unwrap();
        assert_eq!(
            subobject_generated(&q, &BTreeSet::new()).unwrap(),
            BTreeSet::new()
        );
    }

    #[test]
    fn closure_is_idempotent_and_monotone() {
        let v4 = ObjectRef::fingrp(&tables::klein_four()).unwrap();
        for mask in 0u32..16 {
            let seed: BTreeSet<usize> = (0..4).filter(|i| mask >> i & 1 == 1).collect();
            let once = subobject_generated(&v4, &seed).unwrap();
            let twice = subobject_generated(&v4, &once).unwrap();
            assert_eq!(once, twice);
            for mask2 in 0u32..16 {
                if mask2 & mask == mask {
                    let bigger: BTreeSet<usize> =
                        (0..4).filter(|i| mask2 >> i & 1 == 1).collect();
                    let closed = subobject_generated(&v4, &bigger).unwrap();
                    assert!(once.is_subset(&closed));
                }
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        let subs = enumerate_subobjects(&ObjectRef::finset(2), 100).unwrap();
        assert_eq!(
            subs,
            vec![
                BTreeSet::new(),
                BTreeSet::from([0]),
                BTreeSet::from([1]),
                BTreeSet::from([0, 1]),
            ]
        );
        let v4 = ObjectRef::fingrp(&tables::klein_four()).unwrap();
        let subs = enumerate_subobjects(&v4, 100).unwrap();
        assert_eq!(subs.len(), 5);
        assert_eq!(subs[0], BTreeSet::from([0]));
        assert_eq!(subs[4], BTreeSet::from([0, 1, 2, 3]));
        let v = ObjectRef::finvect(2, 2).unwrap();
        assert_eq!(enumerate_subobjects(&v, 100).unwrap().len(), 5);
        assert!(matches!(
            enumerate_subobjects(&v4, 2),
            Err(Error::EnumerationBudgetExceeded(_))
        ));
    }

    #[test]
    fn entire_inhabitation_matches_flags() {
        for kind in [
            BackendKind::FinSet,
            BackendKind::FinGrp,
            BackendKind::FinVect { p: 2 },
            BackendKind::FinQGrp,
        ] {
            assert_eq!(
                is_entirely_inhabited(kind).unwrap(),
                kind.is_entirely_inhabited(),
                "{}",
                kind.name()
            );
        }
    }

    #[test]
    fn malcev_terms_hold_exhaustively() {
        let objs = [
            z(4),
            ObjectRef::fingrp(&tables::s3()).unwrap(),
            ObjectRef::finvect(3, 1).unwrap(),
            ObjectRef::finqgrp(&tables::subtraction_quasigroup(4)).unwrap(),
        ];
        for obj in objs {
            let w = obj.malcev_witness().unwrap();
            for x in obj.elements() {
                for y in obj.elements() {
                    assert_eq!(w.apply(x, y, y), x);
                    assert_eq!(w.apply(y, y, x), x);
                }
            }
        }
        assert!(ObjectRef::finset(3).malcev_witness().is_none());
    }

    #[test]
    fn hom_validation() {
        let z2 = z(2);
        let z4 = z(4);
        // doubling map Z2 -> Z4 is a homomorphism
        assert!(Hom::new(z2.clone(), z4.clone(), vec![0, 2]).is_ok());
        // sending the generator to 1 is not
        assert!(Hom::new(z2.clone(), z4.clone(), vec![0, 1]).is_err());
        let id = Hom::identity(&z4);
        assert!(id.is_injective());
        assert_eq!(id.then(&id).unwrap(), id);
    }

    #[test]
    fn sub_object_reindexes() {
        let z4 = z(4);
        let (sub, incl) = sub_object(&z4, &BTreeSet::from([0, 2])).unwrap();
        assert_eq!(sub, z(2));
        assert_eq!(incl.table(), &[0, 2]);
        // subgroup of the trivial subgroup collapses to the terminal object
        let (triv, _) = sub_object(&z4, &BTreeSet::from([0])).unwrap();
        assert_eq!(triv, terminal(BackendKind::FinGrp));
    }

    #[test]
    fn sub_object_vect_uses_echelon_basis() {
        let v = ObjectRef::finvect(2, 2).unwrap();
        // the diagonal line {00, 11}: indices 0 and 3
        let (sub, incl) = sub_object(&v, &BTreeSet::from([0, 3])).unwrap();
        assert_eq!(sub.vect_params(), Some((2, 1)));
        assert_eq!(incl.table(), &[0, 3]);
        let whole: BTreeSet<usize> = v.elements().collect();
        let (sub, incl) = sub_object(&v, &whole).unwrap();
        assert_eq!(sub.vect_params(), Some((2, 2)));
        assert!(incl.is_injective());
    }

    #[test]
    fn s3_is_a_valid_nonabelian_group() {
        let s3 = ObjectRef::fingrp(&tables::s3()).unwrap();
        assert_eq!(s3.size(), 6);
        let mut commutes = true;
        for a in s3.elements() {
            for b in s3.elements() {
                if s3.op_mul(a, b) != s3.op_mul(b, a) {
                    commutes = false;
                }
            }
        }
        assert!(!commutes);
    }

    #[test]
    fn empty_carriers() {
        assert_eq!(ObjectRef::finset(0).size(), 0);
        let q = ObjectRef::finqgrp(&[]).unwrap();
        assert_eq!(q.size(), 0);
        assert!(ObjectRef::fingrp(&[]).is_err());
        assert_eq!(enumerate_subobjects(&q, 10).unwrap(), vec![BTreeSet::new()]);
    }
}

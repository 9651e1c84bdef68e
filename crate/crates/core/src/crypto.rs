//! Symmetric encryption over finite backends: protocol data, the
//! correctness and security equations (checked elementwise and as diagram
//! equations, with both routes required to agree), and the one-time pad
//! over a finite group.
//!
//! The copying and deleting dots in the protocol diagrams are the
//! canonical cartesian comonoid of the relation category, not a Frobenius
//! structure under test.

use crate::backend::{self, BackendKind, ObjectRef};
use crate::diagram::{self, dg, seq, tens, DiagramTerm, Env};
use crate::error::{Error, Result};
use crate::quantum::PropertyReport;
use crate::rel::Relation;
use std::collections::BTreeSet;

/// An encryption morphism `E: P (x) K -> C` together with its spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolSpec {
    plaintext: ObjectRef,
    key: ObjectRef,
    ciphertext: ObjectRef,
    encrypt: Relation,
}

impl ProtocolSpec {
    pub fn new(
        plaintext: ObjectRef,
        key: ObjectRef,
        ciphertext: ObjectRef,
        encrypt: Relation,
    ) -> Result<ProtocolSpec> {
        let pk = backend::product(&plaintext, &key)?;
        if encrypt.dom() != &pk || encrypt.cod() != &ciphertext {
            return Err(Error::ObjectMismatch(
                "encryption must run from plaintext x key to ciphertext".into(),
            ));
        }
        Ok(ProtocolSpec {
            plaintext,
            key,
            ciphertext,
            encrypt,
        })
    }

    pub fn plaintext(&self) -> &ObjectRef {
        &self.plaintext
    }

    pub fn key(&self) -> &ObjectRef {
        &self.key
    }

    pub fn ciphertext(&self) -> &ObjectRef {
        &self.ciphertext
    }

    pub fn encrypt(&self) -> &Relation {
        &self.encrypt
    }

    fn has(&self, p: usize, k: usize, c: usize) -> bool {
        self.encrypt
            .contains(backend::pair_index(self.key.size(), p, k), c)
    }
}

fn agree(formula: bool, diagram: bool, what: &str) -> Result<bool> {
    if formula != diagram {
        return Err(Error::InternalError(format!(
            "{what}: elementwise route says {formula}, diagram route says {diagram}"
        )));
    }
    Ok(formula)
}

/// Correctness: every plaintext/key pair encrypts to something, and a
/// ciphertext together with its key determines the plaintext. Also checked
/// as the full decrypt-encrypt-copy diagram equation.
pub fn check_correctness(spec: &ProtocolSpec) -> Result<PropertyReport> {
    let (p_n, k_n) = (spec.plaintext.size(), spec.key.size());

    let mut total = true;
    let mut detail = String::new();
    'tot: for p in 0..p_n {
        for k in 0..k_n {
            if !(0..spec.ciphertext.size()).any(|c| spec.has(p, k, c)) {
                total = false;
                detail = format!("no ciphertext for plaintext {p} under key {k}");
                break 'tot;
            }
        }
    }
    let mut deterministic = true;
    if total {
        'det: for &(pk, c) in spec.encrypt.graph().iter() {
            let (p, k) = backend::unpair_index(k_n, pk);
            for &(pk2, c2) in spec.encrypt.graph().iter() {
                let (p2, k2) = backend::unpair_index(k_n, pk2);
                if k == k2 && c == c2 && p != p2 {
                    deterministic = false;
                    detail = format!(
                        "plaintexts {p} and {p2} share ciphertext {c} under key {k}"
                    );
                    break 'det;
                }
            }
        }
    }
    let formula = total && deterministic;

    // copy the key, encrypt with one copy, decrypt against the other
    let (p_obj, k_obj) = (&spec.plaintext, &spec.key);
    let e = DiagramTerm::Gen {
        name: "e".into(),
        dom: vec![p_obj.clone(), k_obj.clone()],
        cod: vec![spec.ciphertext.clone()],
    };
    let env = Env::new().bind("e", spec.encrypt.clone());
    let id_p = DiagramTerm::Id(vec![p_obj.clone()]);
    let id_k = DiagramTerm::Id(vec![k_obj.clone()]);
    let lhs = seq(
        seq(
            seq(
                tens(id_p.clone(), DiagramTerm::Copy(k_obj.clone())),
                tens(e.clone(), id_k.clone()),
            ),
            tens(dg(e), id_k.clone()),
        ),
        tens(id_p.clone(), DiagramTerm::Cap(k_obj.clone())),
    );
    let rhs = tens(id_p, DiagramTerm::Delete(k_obj.clone()));
    let diag = diagram::terms_equal(&lhs, &rhs, &env)?;
    let holds = agree(formula, diag, "correctness")?;

    Ok(PropertyReport {
        property: "protocol-correctness".into(),
        holds,
        detail: if holds {
            "decryption with the key recovers the plaintext".into()
        } else {
            detail
        },
        witness: None,
        counterexample: if holds { None } else { Some(spec.encrypt.clone()) },
    })
}

/// Security: discarding the key leaves no correlation between plaintext
/// and ciphertext, i.e. `{(p,c) | exists k. E(p,k,c)}` is the full
/// relation. Also checked as the discard diagram equation.
pub fn check_security(spec: &ProtocolSpec) -> Result<PropertyReport> {
    let (p_n, k_n, c_n) = (
        spec.plaintext.size(),
        spec.key.size(),
        spec.ciphertext.size(),
    );
    let mut formula = true;
    let mut detail = String::new();
    'outer: for p in 0..p_n {
        for c in 0..c_n {
            if !(0..k_n).any(|k| spec.has(p, k, c)) {
                formula = false;
                detail =
                    format!("plaintext {p} can never produce ciphertext {c}");
                break 'outer;
            }
        }
    }

    let e = DiagramTerm::Gen {
        name: "e".into(),
        dom: vec![spec.plaintext.clone(), spec.key.clone()],
        cod: vec![spec.ciphertext.clone()],
    };
    let env = Env::new().bind("e", spec.encrypt.clone());
    let id_p = DiagramTerm::Id(vec![spec.plaintext.clone()]);
    let lhs = seq(tens(id_p, DiagramTerm::Codelete(spec.key.clone())), e);
    let rhs = seq(
        DiagramTerm::Delete(spec.plaintext.clone()),
        DiagramTerm::Codelete(spec.ciphertext.clone()),
    );
    let diag = diagram::terms_equal(&lhs, &rhs, &env)?;
    let holds = agree(formula, diag, "security")?;

    Ok(PropertyReport {
        property: "protocol-security".into(),
        holds,
        detail: if holds {
            "ciphertext without the key carries no plaintext information".into()
        } else {
            detail
        },
        witness: None,
        counterexample: if holds { None } else { Some(spec.encrypt.clone()) },
    })
}

/// One-time pad over a finite group: message spaces are length-`n` words
/// over the group, encryption is pointwise multiplication. The protocol
/// lives in FinSet, which also accommodates nonabelian groups.
pub fn make_otp(group: &ObjectRef, n: u32, budget: usize) -> Result<ProtocolSpec> {
    if group.kind() != BackendKind::FinGrp {
        return Err(Error::ObjectMismatch(
            "the one-time pad needs a group object".into(),
        ));
    }
    if n == 0 {
        return Err(Error::ObjectMismatch("word length must be positive".into()));
    }
    let mut size = 1usize;
    for _ in 0..n {
        size = size
            .checked_mul(group.size())
            .ok_or_else(|| Error::EnumerationBudgetExceeded("space size overflow".into()))?;
        if size > budget {
            return Err(Error::EnumerationBudgetExceeded(format!(
                "space of size {}^{n} exceeds the budget {budget}",
                group.size()
            )));
        }
    }
    let space = ObjectRef::finset(size);
    let g_n = group.size();
    // pointwise product of digit words
    let word_mul = |p: usize, k: usize| -> usize {
        let (mut pp, mut kk) = (p, k);
        let (mut out, mut scale) = (0usize, 1usize);
        for _ in 0..n {
            out += group.op_mul(pp % g_n, kk % g_n) * scale;
            scale *= g_n;
            pp /= g_n;
            kk /= g_n;
        }
        out
    };
    let mut pairs = BTreeSet::new();
    for p in 0..size {
        for k in 0..size {
            pairs.insert((backend::pair_index(size, p, k), word_mul(p, k)));
        }
    }
    let encrypt = Relation::new(
        backend::product(&space, &space)?,
        space.clone(),
        pairs,
    )?;
    ProtocolSpec::new(space.clone(), space.clone(), space, encrypt)
}

/// The cipher that ignores its key: correct but insecure.
pub fn identity_cipher(p: &ObjectRef, k: &ObjectRef) -> Result<ProtocolSpec> {
    let pk = backend::product(p, k)?;
    let mut pairs = BTreeSet::new();
    for x in p.elements() {
        for y in k.elements() {
            pairs.insert((backend::pair_index(k.size(), x, y), x));
        }
    }
    let encrypt = Relation::new(pk, p.clone(), pairs)?;
    ProtocolSpec::new(p.clone(), k.clone(), p.clone(), encrypt)
}

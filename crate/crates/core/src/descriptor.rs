//! JSON descriptors for every file format the tooling reads and writes.
//! All documents carry `format_version` (currently 1, defaulted when
//! absent); loaders validate everything they admit, so a descriptor that
//! parses still gets rejected if its data fails the domain invariants.

use crate::backend::{self, Hom, ObjectRef};
use crate::diagram::DiagramTerm;
use crate::error::{Error, Result};
use crate::frobenius::FrobeniusStructure;
use crate::groupoid::{checked_groupoid, CompositionTable, InternalGroupoid};
use crate::crypto::ProtocolSpec;
use crate::quantum::PropertyReport;
use crate::rel::Relation;
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

fn default_version() -> u32 {
    FORMAT_VERSION
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::BadDescriptor(format!(
            "unsupported format_version {v}, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ObjectDesc {
    Finset {
        size: usize,
    },
    Fingrp {
        table: Vec<Vec<usize>>,
    },
    Finvect {
        p: u32,
        dim: u32,
    },
    Finqgrp {
        table: Vec<Vec<usize>>,
    },
}

impl ObjectDesc {
    pub fn to_object(&self) -> Result<ObjectRef> {
        match self {
            ObjectDesc::Finset { size } => Ok(ObjectRef::finset(*size)),
            ObjectDesc::Fingrp { table } => ObjectRef::fingrp(table),
            ObjectDesc::Finvect { p, dim } => ObjectRef::finvect(*p, *dim),
            ObjectDesc::Finqgrp { table } => ObjectRef::finqgrp(table),
        }
    }

    pub fn from_object(obj: &ObjectRef) -> ObjectDesc {
        match obj.kind() {
            backend::BackendKind::FinSet => ObjectDesc::Finset { size: obj.size() },
            backend::BackendKind::FinGrp => ObjectDesc::Fingrp {
                table: obj.materialized_table().expect("group table"),
            },
            backend::BackendKind::FinVect { p } => {
                let (_, dim) = obj.vect_params().expect("vect params");
                ObjectDesc::Finvect { p, dim }
            }
            backend::BackendKind::FinQGrp => ObjectDesc::Finqgrp {
                table: obj.materialized_table().expect("quasigroup table"),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationDesc {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub dom: ObjectDesc,
    pub cod: ObjectDesc,
    pub pairs: Vec<(usize, usize)>,
}

impl RelationDesc {
    pub fn to_relation(&self) -> Result<Relation> {
        check_version(self.format_version)?;
        Relation::new(
            self.dom.to_object()?,
            self.cod.to_object()?,
            self.pairs.iter().copied(),
        )
    }

    pub fn from_relation(r: &Relation) -> RelationDesc {
        RelationDesc {
            format_version: FORMAT_VERSION,
            dom: ObjectDesc::from_object(r.dom()),
            cod: ObjectDesc::from_object(r.cod()),
            pairs: r.graph().iter().copied().collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrobeniusDesc {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub carrier: ObjectDesc,
    pub mult: RelationDesc,
    pub unit: Vec<usize>,
}

impl FrobeniusDesc {
    pub fn to_structure(&self) -> Result<FrobeniusStructure> {
        check_version(self.format_version)?;
        let carrier = self.carrier.to_object()?;
        let mult = self.mult.to_relation()?;
        let unit = Relation::new(
            backend::terminal(carrier.kind()),
            carrier.clone(),
            self.unit.iter().map(|&x| (0usize, x)),
        )?;
        FrobeniusStructure::new(carrier, mult, unit)
    }

    pub fn from_structure(f: &FrobeniusStructure) -> FrobeniusDesc {
        FrobeniusDesc {
            format_version: FORMAT_VERSION,
            carrier: ObjectDesc::from_object(f.carrier()),
            mult: RelationDesc::from_relation(f.mult()),
            unit: f.unit_set().into_iter().collect(),
        }
    }
}

/// Groupoid descriptor: source/target/unit/inverse tables plus the
/// composition as `(f, g, h)` triples meaning `m(f, g) = h`, i.e. `f`
/// after `g`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupoidDesc {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub objects: ObjectDesc,
    pub morphisms: ObjectDesc,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub unit: Vec<usize>,
    pub inverse: Vec<usize>,
    pub compose: Vec<(usize, usize, usize)>,
}

impl GroupoidDesc {
    pub fn to_groupoid(&self) -> Result<InternalGroupoid> {
        check_version(self.format_version)?;
        let c0 = self.objects.to_object()?;
        let c1 = self.morphisms.to_object()?;
        let s = Hom::new(c1.clone(), c0.clone(), self.source.clone())?;
        let t = Hom::new(c1.clone(), c0.clone(), self.target.clone())?;
        let u = Hom::new(c0.clone(), c1.clone(), self.unit.clone())?;
        let inv = Hom::new(c1.clone(), c1.clone(), self.inverse.clone())?;
        let mut m = CompositionTable::new();
        for &(f, g, h) in &self.compose {
            if m.insert((f, g), h).is_some() {
                return Err(Error::BadDescriptor(format!(
                    "duplicate composition entry for ({f},{g})"
                )));
            }
        }
        checked_groupoid(c0, c1, s, t, u, inv, m)
    }

    pub fn from_groupoid(g: &InternalGroupoid) -> GroupoidDesc {
        GroupoidDesc {
            format_version: FORMAT_VERSION,
            objects: ObjectDesc::from_object(&g.c0),
            morphisms: ObjectDesc::from_object(&g.c1),
            source: g.s.table().to_vec(),
            target: g.t.table().to_vec(),
            unit: g.u.table().to_vec(),
            inverse: g.inv.table().to_vec(),
            compose: g.m.iter().map(|(&(f, h), &v)| (f, h, v)).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProtocolDesc {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub plaintext: ObjectDesc,
    pub key: ObjectDesc,
    pub ciphertext: ObjectDesc,
    pub encrypt: RelationDesc,
}

impl ProtocolDesc {
    pub fn to_protocol(&self) -> Result<ProtocolSpec> {
        check_version(self.format_version)?;
        ProtocolSpec::new(
            self.plaintext.to_object()?,
            self.key.to_object()?,
            self.ciphertext.to_object()?,
            self.encrypt.to_relation()?,
        )
    }

    pub fn from_protocol(p: &ProtocolSpec) -> ProtocolDesc {
        ProtocolDesc {
            format_version: FORMAT_VERSION,
            plaintext: ObjectDesc::from_object(p.plaintext()),
            key: ObjectDesc::from_object(p.key()),
            ciphertext: ObjectDesc::from_object(p.ciphertext()),
            encrypt: RelationDesc::from_relation(p.encrypt()),
        }
    }
}

/// JSON mirror of the diagram AST.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum TermDesc {
    Gen {
        name: String,
        dom: Vec<ObjectDesc>,
        cod: Vec<ObjectDesc>,
    },
    Id {
        objects: Vec<ObjectDesc>,
    },
    Compose {
        lower: Box<TermDesc>,
        upper: Box<TermDesc>,
    },
    Tensor {
        left: Box<TermDesc>,
        right: Box<TermDesc>,
    },
    Dagger {
        inner: Box<TermDesc>,
    },
    Swap {
        a: ObjectDesc,
        b: ObjectDesc,
    },
    Cup {
        object: ObjectDesc,
    },
    Cap {
        object: ObjectDesc,
    },
    Delete {
        object: ObjectDesc,
    },
    Codelete {
        object: ObjectDesc,
    },
    Copy {
        object: ObjectDesc,
    },
}

impl TermDesc {
    pub fn to_term(&self) -> Result<DiagramTerm> {
        let objs = |v: &[ObjectDesc]| -> Result<Vec<ObjectRef>> {
            v.iter().map(|o| o.to_object()).collect()
        };
        Ok(match self {
            TermDesc::Gen { name, dom, cod } => DiagramTerm::Gen {
                name: name.clone(),
                dom: objs(dom)?,
                cod: objs(cod)?,
            },
            TermDesc::Id { objects } => DiagramTerm::Id(objs(objects)?),
            TermDesc::Compose { lower, upper } => DiagramTerm::Compose {
                lower: Box::new(lower.to_term()?),
                upper: Box::new(upper.to_term()?),
            },
            TermDesc::Tensor { left, right } => DiagramTerm::Tensor {
                left: Box::new(left.to_term()?),
                right: Box::new(right.to_term()?),
            },
            TermDesc::Dagger { inner } => {
                DiagramTerm::Dagger(Box::new(inner.to_term()?))
            }
            TermDesc::Swap { a, b } => DiagramTerm::Swap(a.to_object()?, b.to_object()?),
            TermDesc::Cup { object } => DiagramTerm::Cup(object.to_object()?),
            TermDesc::Cap { object } => DiagramTerm::Cap(object.to_object()?),
            TermDesc::Delete { object } => DiagramTerm::Delete(object.to_object()?),
            TermDesc::Codelete { object } => DiagramTerm::Codelete(object.to_object()?),
            TermDesc::Copy { object } => DiagramTerm::Copy(object.to_object()?),
        })
    }

    pub fn from_term(t: &DiagramTerm) -> TermDesc {
        let objs = |v: &[ObjectRef]| v.iter().map(ObjectDesc::from_object).collect();
        match t {
            DiagramTerm::Gen { name, dom, cod } => TermDesc::Gen {
                name: name.clone(),
                dom: objs(dom),
                cod: objs(cod),
            },
            DiagramTerm::Id(objects) => TermDesc::Id {
                objects: objs(objects),
            },
            DiagramTerm::Compose { upper, lower } => TermDesc::Compose {
                lower: Box::new(TermDesc::from_term(lower)),
                upper: Box::new(TermDesc::from_term(upper)),
            },
            DiagramTerm::Tensor { left, right } => TermDesc::Tensor {
                left: Box::new(TermDesc::from_term(left)),
                right: Box::new(TermDesc::from_term(right)),
            },
            DiagramTerm::Dagger(inner) => TermDesc::Dagger {
                inner: Box::new(TermDesc::from_term(inner)),
            },
            DiagramTerm::Swap(a, b) => TermDesc::Swap {
                a: ObjectDesc::from_object(a),
                b: ObjectDesc::from_object(b),
            },
            DiagramTerm::Cup(a) => TermDesc::Cup {
                object: ObjectDesc::from_object(a),
            },
            DiagramTerm::Cap(a) => TermDesc::Cap {
                object: ObjectDesc::from_object(a),
            },
            DiagramTerm::Delete(a) => TermDesc::Delete {
                object: ObjectDesc::from_object(a),
            },
            DiagramTerm::Codelete(a) => TermDesc::Codelete {
                object: ObjectDesc::from_object(a),
            },
            DiagramTerm::Copy(a) => TermDesc::Copy {
                object: ObjectDesc::from_object(a),
            },
        }
    }
}

/// Serializable property report with replayable relation payloads.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyReportDesc {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub property: String,
    pub verdict: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<RelationDesc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<RelationDesc>,
}

impl PropertyReportDesc {
    pub fn from_report(r: &PropertyReport) -> PropertyReportDesc {
        PropertyReportDesc {
            format_version: FORMAT_VERSION,
            property: r.property.clone(),
            verdict: if r.holds { "holds" } else { "fails" }.into(),
            detail: r.detail.clone(),
            witness: r.witness.as_ref().map(RelationDesc::from_relation),
            counterexample: r.counterexample.as_ref().map(RelationDesc::from_relation),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::tables;
    use crate::frobenius;

    #[test]
    fn object_round_trip() {
        for obj in [
            ObjectRef::finset(3),
            ObjectRef::fingrp(&tables::s3()).unwrap(),
            ObjectRef::finvect(3, 1).unwrap(),
            ObjectRef::finqgrp(&tables::subtraction_quasigroup(3)).unwrap(),
        ] {
            let desc = ObjectDesc::from_object(&obj);
            assert_eq!(desc.to_object().unwrap(), obj);
            let json = serde_json::to_string(&desc).unwrap();
            let back: ObjectDesc = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_object().unwrap(), obj);
        }
    }

    #[test]
    fn documented_json_shapes_parse() {
        let o: ObjectDesc = serde_json::from_str(r#"{"kind":"finset","size":2}"#).unwrap();
        assert_eq!(o.to_object().unwrap(), ObjectRef::finset(2));
        let o: ObjectDesc =
            serde_json::from_str(r#"{"kind":"fingrp","table":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(o.to_object().unwrap().size(), 2);
        let o: ObjectDesc =
            serde_json::from_str(r#"{"kind":"finvect","p":2,"dim":3}"#).unwrap();
        assert_eq!(o.to_object().unwrap().size(), 8);
        let r: RelationDesc = serde_json::from_str(
            r#"{"dom":{"kind":"finset","size":2},"cod":{"kind":"finset","size":2},"pairs":[[0,1]]}"#,
        )
        .unwrap();
        assert_eq!(r.to_relation().unwrap().graph().len(), 1);
    }

    #[test]
    fn loader_rejects_bad_graphs_and_versions() {
        let bad: RelationDesc = serde_json::from_str(
            r#"{"dom":{"kind":"fingrp","table":[[0,1],[1,0]]},"cod":{"kind":"fingrp","table":[[0,1],[1,0]]},"pairs":[[0,1]]}"#,
        )
        .unwrap();
        assert!(bad.to_relation().is_err());
        let versioned: RelationDesc = serde_json::from_str(
            r#"{"format_version":2,"dom":{"kind":"finset","size":1},"cod":{"kind":"finset","size":1},"pairs":[]}"#,
        )
        .unwrap();
        assert!(matches!(
            versioned.to_relation(),
            Err(Error::BadDescriptor(_))
        ));
    }

    #[test]
    fn structure_and_groupoid_round_trip() {
        let f = frobenius::indiscrete(&ObjectRef::finset(2)).unwrap();
        let desc = FrobeniusDesc::from_structure(&f);
        let json = serde_json::to_string_pretty(&desc).unwrap();
        let back: FrobeniusDesc = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_structure().unwrap(), f);

        let g = frobenius::to_groupoid(&f).unwrap();
        let gdesc = GroupoidDesc::from_groupoid(&g);
        let json = serde_json::to_string(&gdesc).unwrap();
        let back: GroupoidDesc = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_groupoid().unwrap(), g);
    }

    #[test]
    fn groupoid_loader_validates() {
        let f = frobenius::indiscrete(&ObjectRef::finset(2)).unwrap();
        let g = frobenius::to_groupoid(&f).unwrap();
        let mut desc = GroupoidDesc::from_groupoid(&g);
        desc.inverse = vec![0, 1, 2, 3]; // breaks the inverse laws
        assert!(matches!(
            desc.to_groupoid(),
            Err(Error::InvalidGroupoid(_))
        ));
    }

    #[test]
    fn term_desc_round_trip() {
        let a = ObjectRef::finset(2);
        let t = crate::diagram::seq(
            crate::diagram::tens(DiagramTerm::Id(vec![a.clone()]), DiagramTerm::Cup(a.clone())),
            crate::diagram::tens(DiagramTerm::Cap(a.clone()), DiagramTerm::Id(vec![a])),
        );
        let desc = TermDesc::from_term(&t);
        let json = serde_json::to_string(&desc).unwrap();
        let back: TermDesc = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_term().unwrap(), t);
    }

    #[test]
    fn protocol_round_trip() {
        let z2 = ObjectRef::fingrp(&tables::cyclic(2)).unwrap();
        let p = crate::crypto::make_otp(&z2, 1, 1000).unwrap();
        let desc = ProtocolDesc::from_protocol(&p);
        let json = serde_json::to_string(&desc).unwrap();
        let back: ProtocolDesc = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_protocol().unwrap(), p);
    }
}

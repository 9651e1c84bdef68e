//! A dagger-compact term language with a typechecker and an evaluator into
//! relations, so diagrammatic equations become executable assertions.
//!
//! Boundaries are object lists; before evaluation a list is folded to a
//! single carrier by left-associated products (the empty list folds to the
//! monoidal unit). Equality of terms is extensional: evaluate both sides
//! and compare relations.
//!
//! Concrete grammar (diagrammatic order: in `f ; g` the left factor runs
//! first, `*` is tensor and binds tighter than `;`):
//!
//! ```text
//! term  := tens (';' tens)*
//! tens  := atom ('*' atom)*
//! atom  := 'dg' '(' term ')' | 'id' '[' objs ']' | 'cup' '[' obj ']'
//!        | 'cap' '[' obj ']' | 'sw' '[' obj ',' obj ']' | 'del' '[' obj ']'
//!        | 'codel' '[' obj ']' | 'copy' '[' obj ']' | '(' term ')' | gen
//! ```
//!
//! Generators are lowercase identifiers resolved against a parse context;
//! object names in brackets are resolved the same way.

use crate::backend::{self, BackendKind, ObjectRef};
use crate::error::{Error, Result};
use crate::rel::{self, Relation};
use std::collections::BTreeMap;

/// AST of a dagger-compact monoidal expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagramTerm {
    Gen {
        name: String,
        dom: Vec<ObjectRef>,
        cod: Vec<ObjectRef>,
    },
    Id(Vec<ObjectRef>),
    /// `lower` runs first.
    Compose {
        upper: Box<DiagramTerm>,
        lower: Box<DiagramTerm>,
    },
    Tensor {
        left: Box<DiagramTerm>,
        right: Box<DiagramTerm>,
    },
    Dagger(Box<DiagramTerm>),
    Swap(ObjectRef, ObjectRef),
    Cup(ObjectRef),
    Cap(ObjectRef),
    Delete(ObjectRef),
    Codelete(ObjectRef),
    /// Canonical cartesian diagonal `A -> A x A`.
    Copy(ObjectRef),
}

/// Sequential composition in diagrammatic order: `first`, then `second`.
pub fn seq(first: DiagramTerm, second: DiagramTerm) -> DiagramTerm {
    DiagramTerm::Compose {
        upper: Box::new(second),
        lower: Box::new(first),
    }
}

pub fn tens(left: DiagramTerm, right: DiagramTerm) -> DiagramTerm {
    DiagramTerm::Tensor {
        left: Box::new(left),
        right: Box::new(right),
    }
}

pub fn dg(t: DiagramTerm) -> DiagramTerm {
    DiagramTerm::Dagger(Box::new(t))
}

/// A generator whose boundary is a single object on each side.
pub fn gen(name: &str, dom: &ObjectRef, cod: &ObjectRef) -> DiagramTerm {
    DiagramTerm::Gen {
        name: name.to_string(),
        dom: vec![dom.clone()],
        cod: vec![cod.clone()],
    }
}

/// Assignment of relations to generator names.
#[derive(Debug, Clone, Default)]
pub struct Env {
    bindings: BTreeMap<String, Relation>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn bind(mut self, name: &str, r: Relation) -> Env {
        self.bindings.insert(name.to_string(), r);
        self
    }

    pub fn insert(&mut self, name: &str, r: Relation) {
        self.bindings.insert(name.to_string(), r);
    }

    pub fn get(&self, name: &str) -> Option<&Relation> {
        self.bindings.get(name)
    }
}

fn mismatch(path: &[&str], message: String) -> Error {
    let path = if path.is_empty() {
        "root".to_string()
    } else {
        path.join(".")
    };
    Error::TypeMismatch { path, message }
}

fn check(
    t: &DiagramTerm,
    path: &mut Vec<&'static str>,
) -> Result<(Vec<ObjectRef>, Vec<ObjectRef>)> {
    let single_kind = |objs: &[ObjectRef], path: &[&str]| -> Result<()> {
        let mut kinds = objs.iter().map(|o| o.kind());
        if let Some(first) = kinds.next() {
            if kinds.any(|k| k != first) {
                return Err(mismatch(path, "object list mixes backends".into()));
            }
        }
        Ok(())
    };
    match t {
        DiagramTerm::Gen { dom, cod, .. } => {
            single_kind(dom, path)?;
            single_kind(cod, path)?;
            if let (Some(d), Some(c)) = (dom.first(), cod.first()) {
                if d.kind() != c.kind() {
                    return Err(mismatch(path, "generator boundary mixes backends".into()));
                }
            }
            Ok((dom.clone(), cod.clone()))
        }
        DiagramTerm::Id(objs) => {
            single_kind(objs, path)?;
            Ok((objs.clone(), objs.clone()))
        }
        DiagramTerm::Compose { upper, lower } => {
            path.push("lower");
            let (ld, lc) = check(lower, path)?;
            path.pop();
            path.push("upper");
            let (ud, uc) = check(upper, path)?;
            path.pop();
            if lc != ud {
                return Err(mismatch(
                    path,
                    "composition boundary: lower codomain differs from upper domain".into(),
                ));
            }
            Ok((ld, uc))
        }
        DiagramTerm::Tensor { left, right } => {
            path.push("left");
            let (mut d, mut c) = check(left, path)?;
            path.pop();
            path.push("right");
            let (rd, rc) = check(right, path)?;
            path.pop();
            d.extend(rd);
            c.extend(rc);
            single_kind(&d, path)?;
            single_kind(&c, path)?;
            if let (Some(x), Some(y)) = (d.first(), c.first()) {
                if x.kind() != y.kind() {
                    return Err(mismatch(path, "tensor mixes backends".into()));
                }
            }
            Ok((d, c))
        }
        DiagramTerm::Dagger(inner) => {
            path.push("dagger");
            let (d, c) = check(inner, path)?;
            path.pop();
            Ok((c, d))
        }
        DiagramTerm::Swap(a, b) => {
            if a.kind() != b.kind() {
                return Err(mismatch(path, "swap mixes backends".into()));
            }
            Ok((vec![a.clone(), b.clone()], vec![b.clone(), a.clone()]))
        }
        DiagramTerm::Cup(a) => Ok((Vec::new(), vec![a.clone(), a.clone()])),
        DiagramTerm::Cap(a) => Ok((vec![a.clone(), a.clone()], Vec::new())),
        DiagramTerm::Delete(a) => Ok((vec![a.clone()], Vec::new())),
        DiagramTerm::Codelete(a) => Ok((Vec::new(), vec![a.clone()])),
        DiagramTerm::Copy(a) => Ok((vec![a.clone()], vec![a.clone(), a.clone()])),
    }
}

/// Infer the boundary object lists of a term, or report the offending
/// subterm path.
pub fn typecheck(t: &DiagramTerm) -> Result<(Vec<ObjectRef>, Vec<ObjectRef>)> {
    check(t, &mut Vec::new())
}

fn term_kind(t: &DiagramTerm) -> Option<BackendKind> {
    match t {
        DiagramTerm::Gen { dom, cod, .. } => {
            dom.first().or_else(|| cod.first()).map(|o| o.kind())
        }
        DiagramTerm::Id(objs) => objs.first().map(|o| o.kind()),
        DiagramTerm::Compose { upper, lower } => {
            term_kind(lower).or_else(|| term_kind(upper))
        }
        DiagramTerm::Tensor { left, right } => term_kind(left).or_else(|| term_kind(right)),
        DiagramTerm::Dagger(inner) => term_kind(inner),
        DiagramTerm::Swap(a, _)
        | DiagramTerm::Cup(a)
        | DiagramTerm::Cap(a)
        | DiagramTerm::Delete(a)
        | DiagramTerm::Codelete(a)
        | DiagramTerm::Copy(a) => Some(a.kind()),
    }
}

/// Fold an object list to a single carrier by left-associated products.
pub fn fold_objects(objs: &[ObjectRef], kind: BackendKind) -> Result<ObjectRef> {
    let mut acc = backend::terminal(kind);
    for o in objs {
        acc = backend::product(&acc, o)?;
    }
    Ok(acc)
}

/// Evaluate a term to a relation, homomorphically on the AST.
pub fn evaluate(t: &DiagramTerm, env: &Env) -> Result<Relation> {
    typecheck(t)?;
    if term_kind(t).is_none() {
        return Err(mismatch(
            &[],
            "cannot infer a backend for a term with no objects".into(),
        ));
    }
    eval_inner(t, env)
}

fn eval_inner(t: &DiagramTerm, env: &Env) -> Result<Relation> {
    match t {
        DiagramTerm::Gen { name, dom, cod } => {
            let r = env
                .get(name)
                .ok_or_else(|| Error::UnboundGenerator(name.clone()))?;
            let kind = term_kind(t).ok_or_else(|| {
                mismatch(&[], format!("generator `{name}` has an empty boundary"))
            })?;
            let want_dom = fold_objects(dom, kind)?;
            let want_cod = fold_objects(cod, kind)?;
            if r.dom() != &want_dom || r.cod() != &want_cod {
                return Err(Error::TypeMismatch {
                    path: name.clone(),
                    message: "bound relation does not match the generator signature".into(),
                });
            }
            Ok(r.clone())
        }
        DiagramTerm::Id(objs) => {
            let kind = objs
                .first()
                .map(|o| o.kind())
                .ok_or_else(|| mismatch(&[], "cannot infer a backend for id[]".into()))?;
            Ok(rel::identity(&fold_objects(objs, kind)?))
        }
        DiagramTerm::Compose { upper, lower } => {
            let first = eval_inner(lower, env)?;
            let second = eval_inner(upper, env)?;
            rel::compose(&first, &second)
        }
        DiagramTerm::Tensor { left, right } => {
            let l = eval_inner(left, env)?;
            let r = eval_inner(right, env)?;
            rel::tensor(&l, &r)
        }
        DiagramTerm::Dagger(inner) => Ok(rel::dagger(&eval_inner(inner, env)?)),
        DiagramTerm::Swap(a, b) => rel::swap(a, b),
        DiagramTerm::Cup(a) => rel::cup(a),
        DiagramTerm::Cap(a) => rel::cap(a),
        DiagramTerm::Delete(a) => rel::delete(a),
        DiagramTerm::Codelete(a) => rel::codelete(a),
        DiagramTerm::Copy(a) => rel::copy(a),
    }
}

/// Extensional equality: evaluate both terms and compare relations. The
/// folded boundaries must agree.
pub fn terms_equal(t1: &DiagramTerm, t2: &DiagramTerm, env: &Env) -> Result<bool> {
    let r1 = evaluate(t1, env)?;
    let r2 = evaluate(t2, env)?;
    if r1.dom() != r2.dom() || r1.cod() != r2.cod() {
        return Err(Error::BoundaryMismatch(
            "terms evaluate to different boundaries".into(),
        ));
    }
    Ok(r1 == r2)
}

/// Name resolution for the parser: object names and generator signatures.
#[derive(Debug, Clone, Default)]
pub struct ParseContext {
    pub objects: BTreeMap<String, ObjectRef>,
    pub generators: BTreeMap<String, (Vec<ObjectRef>, Vec<ObjectRef>)>,
}

impl ParseContext {
    pub fn new() -> ParseContext {
        ParseContext::default()
    }

    pub fn object(mut self, name: &str, obj: ObjectRef) -> ParseContext {
        self.objects.insert(name.to_string(), obj);
        self
    }

    pub fn generator(
        mut self,
        name: &str,
        dom: Vec<ObjectRef>,
        cod: Vec<ObjectRef>,
    ) -> ParseContext {
        self.generators.insert(name.to_string(), (dom, cod));
        self
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    ctx: &'a ParseContext,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::ParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let mut end = 0;
        for (i, c) in rest.char_indices() {
            let ok = if i == 0 {
                c.is_ascii_alphabetic() || c == '_'
            } else {
                c.is_ascii_alphanumeric() || c == '_'
            };
            if !ok {
                break;
            }
            end = i + c.len_utf8();
        }
        if end == 0 {
            return self.err("expected an identifier");
        }
        self.pos = start + end;
        Ok(&rest[..end])
    }

    fn object(&mut self) -> Result<ObjectRef> {
        let at = self.pos;
        let name = self.ident()?;
        match self.ctx.objects.get(name) {
            Some(o) => Ok(o.clone()),
            None => Err(Error::ParseError {
                position: at,
                message: format!("unknown object `{name}`"),
            }),
        }
    }

    fn bracketed_objects(&mut self) -> Result<Vec<ObjectRef>> {
        self.expect('[')?;
        let mut objs = Vec::new();
        if self.peek() != Some(']') {
            loop {
                objs.push(self.object()?);
                if !self.eat(',') {
                    break;
                }
            }
        }
        self.expect(']')?;
        Ok(objs)
    }

    fn single_bracketed(&mut self) -> Result<ObjectRef> {
        let at = self.pos;
        let objs = self.bracketed_objects()?;
        if objs.len() != 1 {
            return Err(Error::ParseError {
                position: at,
                message: "expected exactly one object".into(),
            });
        }
        Ok(objs.into_iter().next().unwrap())
    }

    fn atom(&mut self) -> Result<DiagramTerm> {
        if self.eat('(') {
            let t = self.term()?;
            self.expect(')')?;
            return Ok(t);
        }
        let at = self.pos;
        let name = self.ident()?;
        match name {
            "dg" => {
                self.expect('(')?;
                let t = self.term()?;
                self.expect(')')?;
                Ok(dg(t))
            }
            "id" => Ok(DiagramTerm::Id(self.bracketed_objects()?)),
            "cup" => Ok(DiagramTerm::Cup(self.single_bracketed()?)),
            "cap" => Ok(DiagramTerm::Cap(self.single_bracketed()?)),
            "del" => Ok(DiagramTerm::Delete(self.single_bracketed()?)),
            "codel" => Ok(DiagramTerm::Codelete(self.single_bracketed()?)),
            "copy" => Ok(DiagramTerm::Copy(self.single_bracketed()?)),
            "sw" => {
                let at = self.pos;
                let objs = self.bracketed_objects()?;
                if objs.len() != 2 {
                    return Err(Error::ParseError {
                        position: at,
                        message: "sw takes exactly two objects".into(),
                    });
                }
                let mut it = objs.into_iter();
                Ok(DiagramTerm::Swap(it.next().unwrap(), it.next().unwrap()))
            }
            _ => match self.ctx.generators.get(name) {
                Some((dom, cod)) => Ok(DiagramTerm::Gen {
                    name: name.to_string(),
                    dom: dom.clone(),
                    cod: cod.clone(),
                }),
                None => Err(Error::ParseError {
                    position: at,
                    message: format!("unknown generator `{name}`"),
                }),
            },
        }
    }

    fn tensor_level(&mut self) -> Result<DiagramTerm> {
        let mut t = self.atom()?;
        while self.eat('*') {
            let rhs = self.atom()?;
            t = tens(t, rhs);
        }
        Ok(t)
    }

    fn term(&mut self) -> Result<DiagramTerm> {
        let mut t = self.tensor_level()?;
        while self.eat(';') {
            let rhs = self.tensor_level()?;
            t = seq(t, rhs);
        }
        Ok(t)
    }
}

/// Parse a term in the concrete grammar against a name-resolution context.
pub fn parse_term(text: &str, ctx: &ParseContext) -> Result<DiagramTerm> {
    let mut p = Parser {
        src: text,
        pos: 0,
        ctx,
    };
    let t = p.term()?;
    p.skip_ws();
    if p.pos != text.len() {
        return p.err("trailing input");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::tables;

    fn fs(n: usize) -> ObjectRef {
        ObjectRef::finset(n)
    }

    #[test]
    fn typecheck_examples() {
        let a = fs(2);
        let t = seq(
            DiagramTerm::Id(vec![a.clone()]),
            DiagramTerm::Id(vec![a.clone()]),
        );
        assert_eq!(typecheck(&t).unwrap(), (vec![a.clone()], vec![a.clone()]));
        let c = DiagramTerm::Cup(a.clone());
        assert_eq!(typecheck(&c).unwrap(), (vec![], vec![a.clone(), a.clone()]));
        let b = fs(3);
        let bad = seq(DiagramTerm::Id(vec![a.clone()]), DiagramTerm::Id(vec![b]));
        match typecheck(&bad) {
            Err(Error::TypeMismatch { .. }) => {}
            other => panic!("expected TypeMismatch, got {other:?}"),
        }
    }

    #[test]
    fn snake_evaluates_to_identity() {
        let a = fs(3);
        let env = Env::new();
        let lhs = seq(
            tens(DiagramTerm::Id(vec![a.clone()]), DiagramTerm::Cup(a.clone())),
            tens(DiagramTerm::Cap(a.clone()), DiagramTerm::Id(vec![a.clone()])),
        );
        assert!(terms_equal(&lhs, &DiagramTerm::Id(vec![a.clone()]), &env).unwrap());
        let rhs = seq(
            tens(DiagramTerm::Cup(a.clone()), DiagramTerm::Id(vec![a.clone()])),
            tens(DiagramTerm::Id(vec![a.clone()]), DiagramTerm::Cap(a.clone())),
        );
        assert!(terms_equal(&rhs, &DiagramTerm::Id(vec![a.clone()]), &env).unwrap());
    }

    #[test]
    fn evaluation_is_compositional() {
        let a = fs(2);
        let r = Relation::new(a.clone(), a.clone(), [(0usize, 1usize), (1, 1)]).unwrap();
        let env = Env::new().bind("f", r.clone());
        let f = gen("f", &a, &a);
        assert_eq!(evaluate(&dg(f.clone()), &env).unwrap(), rel::dagger(&r));
        let both = evaluate(&seq(f.clone(), f.clone()), &env).unwrap();
        assert_eq!(both, rel::compose(&r, &r).unwrap());
        let t = evaluate(&tens(f.clone(), f.clone()), &env).unwrap();
        assert_eq!(t, rel::tensor(&r, &r).unwrap());
    }

    #[test]
    fn gen_signature_checked() {
        let a = fs(2);
        let b = fs(3);
        let r = Relation::new(a.clone(), a.clone(), [(0usize, 0usize)]).unwrap();
        let env = Env::new().bind("f", r);
        let f = gen("f", &a, &b);
        assert!(matches!(
            evaluate(&f, &env),
            Err(Error::TypeMismatch { .. })
        ));
        let g = gen("g", &a, &a);
        assert!(matches!(
            evaluate(&g, &env),
            Err(Error::UnboundGenerator(_))
        ));
    }

    #[test]
    fn commutativity_via_terms() {
        // mult vs mult-after-swap for the Z2 group structure
        let z2 = fs(2);
        let z2sq = backend::product(&z2, &z2).unwrap();
        let mult = Relation::new(
            z2sq.clone(),
            z2.clone(),
            (0..2usize).flat_map(|x| (0..2usize).map(move |y| (x * 2 + y, (x + y) % 2))),
        )
        .unwrap();
        let env = Env::new().bind("m", mult);
        let m = DiagramTerm::Gen {
            name: "m".into(),
            dom: vec![z2.clone(), z2.clone()],
            cod: vec![z2.clone()],
        };
        let swapped = seq(DiagramTerm::Swap(z2.clone(), z2.clone()), m.clone());
        assert!(terms_equal(&m, &swapped, &env).unwrap());
    }

    #[test]
    fn parse_examples() {
        let a = fs(2);
        let ctx = ParseContext::new()
            .object("A", a.clone())
            .generator("f", vec![a.clone()], vec![a.clone()])
            .generator("g", vec![a.clone()], vec![a.clone()]);
        assert_eq!(
            parse_term("id[A]", &ctx).unwrap(),
            DiagramTerm::Id(vec![a.clone()])
        );
        let fg = parse_term("f ; g", &ctx).unwrap();
        match &fg {
            DiagramTerm::Compose { upper, lower } => {
                assert!(matches!(&**lower, DiagramTerm::Gen { name, .. } if name == "f"));
                assert!(matches!(&**upper, DiagramTerm::Gen { name, .. } if name == "g"));
            }
            other => panic!("unexpected parse {other:?}"),
        }
        let t = parse_term("(f * id[A]) ; cap[A]", &ctx).unwrap();
        assert!(typecheck(&t).is_ok());
        let t = parse_term("dg(cup[A]) ; del[A] ; codel[A] ; copy[A] ; sw[A,A]", &ctx);
        assert!(t.is_ok());
        match parse_term("f ; nope", &ctx) {
            Err(Error::ParseError { position, .. }) => assert_eq!(position, 4),
            other => panic!("expected ParseError, got {other:?}"),
        }
        assert!(parse_term("f @", &ctx).is_err());
    }

    #[test]
    fn dagger_of_cup_is_cap() {
        let g = ObjectRef::fingrp(&tables::cyclic(3)).unwrap();
        let env = Env::new();
        assert!(
            terms_equal(&dg(DiagramTerm::Cup(g.clone())), &DiagramTerm::Cap(g), &env).unwrap()
        );
    }

    #[test]
    fn boundary_mismatch_reported() {
        let a = fs(2);
        let b = fs(3);
        let env = Env::new();
        assert!(matches!(
            terms_equal(&DiagramTerm::Id(vec![a]), &DiagramTerm::Id(vec![b]), &env),
            Err(Error::BoundaryMismatch(_))
        ));
    }
}

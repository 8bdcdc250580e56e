//! Filtered operadic composition and the I/II/III classification.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::algebra::{Atom, BracketTree, Element, Factor, Monomial};
use crate::error::{Error, Result};
use crate::expr::AmbientContext;
use crate::rewrite::term::{self, Raw};
use crate::rewrite::normalize_raw;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TypeClass {
    I,
    II,
    III,
}

impl fmt::Display for TypeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeClass::I => "I",
            TypeClass::II => "II",
            TypeClass::III => "III",
        })
    }
}

fn brace_count(t: &BracketTree) -> usize {
    t.braces().len()
}

pub fn classify_monomial(m: &Monomial, d: i64) -> TypeClass {
    if m.degree(d) == 0 {
        return TypeClass::I;
    }
    let trees: Vec<&BracketTree> = m.trees().collect();
    if trees.len() == 1 && brace_count(trees[0]) == 1 {
        TypeClass::II
    } else {
        TypeClass::III
    }
}

pub fn classify(el: &Element) -> Result<TypeClass> {
    if el.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !el.is_homogeneous() {
        return Err(Error::NonHomogeneous);
    }
    let d = el.ctx.dim();
    let mut classes = el.terms().map(|(m, _)| classify_monomial(m, d));
    let first = classes.next().unwrap();
    match classes.find(|c| *c != first) {
        None => Ok(first),
        Some(other) => Err(Error::MixedClass(format!("{first} and {other}"))),
    }
}

/// Whether `x_slot` sits inside a brace in some monomial.
pub fn slot_in_brace(el: &Element, slot: u32) -> bool {
    el.terms().any(|(m, _)| {
        m.trees().any(|t| t.braces().iter().any(|b| b.contains(&slot)))
    })
}

/// Whether the composition of these classes is predicted to vanish.
pub fn triviality_witness(a: TypeClass, b: TypeClass, inside_brace: bool) -> bool {
    use TypeClass::*;
    match (a, b) {
        (I, I) => false,
        (II, II) => !inside_brace,
        _ => true,
    }
}

/// `a ∘_i b` before normalization: relabel and graft every pair of terms.
pub fn compose_raw(
    a: &Raw,
    ctx_a: &AmbientContext,
    slot: u32,
    b: &Raw,
    ctx_b: &AmbientContext,
) -> Result<(AmbientContext, Raw)> {
    if ctx_a.d != ctx_b.d {
        return Err(Error::ContextMismatch(format!("d = {} vs d = {}", ctx_a.d, ctx_b.d)));
    }
    if slot < 1 || slot > ctx_a.n {
        return Err(Error::SlotOutOfRange { slot, n: ctx_a.n });
    }
    let n2 = ctx_b.n;
    let ctx = AmbientContext::new(ctx_a.d, ctx_a.k + ctx_b.k - 2, ctx_a.n + n2 - 1)?;
    let d = ctx.dim();
    let mut out = Raw::new();
    for (ta, ca) in a {
        let ta = ta.relabel(&|l| if l > slot { l + n2 - 1 } else { l });
        for (tb, cb) in b {
            let tb = tb.relabel(&|l| l + slot - 1);
            let (sign, t) = ta
                .graft(slot, &tb, d)
                .ok_or_else(|| Error::Multilinear(format!("x{slot} does not occur in {ta}")))?;
            term::push(&mut out, t, ca * cb * BigInt::from(sign));
        }
    }
    Ok((ctx, out))
}

pub fn element_raw(el: &Element) -> Raw {
    let mut raw = Raw::new();
    for (m, c) in el.terms() {
        term::push(&mut raw, m.to_term(), c.clone());
    }
    raw
}

/// `a ∘_i b` in ambient `k1 + k2 - 2`, normalized.
pub fn compose(a: &Element, slot: u32, b: &Element) -> Result<Element> {
    let (ctx, raw) = compose_raw(&element_raw(a), &a.ctx, slot, &element_raw(b), &b.ctx)?;
    Ok(normalize_raw(&raw, &ctx))
}

/// Composition with a Poisson (k = 2) element on the outside.
pub fn left_action(p: &Element, slot: u32, b: &Element) -> Result<Element> {
    require_poisson(p)?;
    compose(p, slot, b)
}

/// Composition with a Poisson (k = 2) element inserted.
pub fn right_action(a: &Element, slot: u32, q: &Element) -> Result<Element> {
    require_poisson(q)?;
    compose(a, slot, q)
}

fn require_poisson(p: &Element) -> Result<()> {
    if p.ctx.k != 2 {
        return Err(Error::ContextMismatch(format!("expected k = 2, got k = {}", p.ctx.k)));
    }
    Ok(())
}

/// Identity of arity one in ambient `(d, 2, 1)`.
pub fn unit(d: u32) -> Result<Element> {
    let ctx = AmbientContext::new(d, 2, 1)?;
    Ok(Element::from_monomial(ctx, Monomial::new(vec![Factor::Single(1)])))
}

/// A single flat brace on the given labels.
pub fn brace_monomial(labels: &[u32]) -> Monomial {
    Monomial::new(vec![Factor::Tree(BracketTree::Leaf(Atom::FlatBrace(labels.to_vec())))])
}

//! The normalizer: lower, purify braces, expand brackets, kill, comb,
//! straighten, kill, sort.

pub mod lie;
pub mod purify;
pub mod term;

use num_bigint::BigInt;

use crate::algebra::{BracketTree, Element, Factor, Monomial};
use crate::error::Result;
use crate::expr::{AmbientContext, Expr};
pub use lie::Stage;
pub use purify::{nested_brace_coefficient, Chooser};
use term::Raw;
pub use term::Term;

/// Validates and lowers to raw terms; arity-2 braces become brackets.
pub fn lower(e: &Expr, ctx: &AmbientContext) -> Result<Raw> {
    e.validate(ctx)?;
    Ok(purify::lower(e))
}

pub fn purify_braces(raw: &Raw, ctx: &AmbientContext) -> Raw {
    purify::purify(raw, ctx.dim(), &mut Chooser::canonical())
}

/// Leibniz expansion of pure raw terms into (unsorted) monomials.
pub fn expand(raw: &Raw, ctx: &AmbientContext) -> Element {
    let d = ctx.dim();
    let mut el = Element::zero(*ctx);
    for (t, c) in raw {
        for (s, trees) in lie::expand(t, d) {
            el.add_term(monomial_of(trees), c * s);
        }
    }
    el
}

fn monomial_of(trees: Vec<BracketTree>) -> Monomial {
    Monomial::new(
        trees
            .into_iter()
            .map(|t| match t {
                BracketTree::Leaf(crate::algebra::Atom::Singleton(l)) => Factor::Single(l),
                other => Factor::Tree(other),
            })
            .collect(),
    )
}

fn trees_of(m: &Monomial) -> Vec<BracketTree> {
    m.factors
        .iter()
        .map(|f| match f {
            Factor::Single(l) => BracketTree::Leaf(crate::algebra::Atom::Singleton(*l)),
            Factor::Tree(t) => t.clone(),
        })
        .collect()
}

/// Drops monomials that die in the ambient filtration stage.
pub fn filtration_kill(el: &Element) -> Element {
    let d = el.ctx.dim();
    let mut out = Element::zero(el.ctx);
    for (m, c) in el.terms() {
        if !lie::dies(&trees_of(m), d, el.ctx.k) {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}

fn tree_stage(el: &Element, stage: Stage) -> Element {
    let d = el.ctx.dim();
    let k = el.ctx.k;
    let mut out = Element::zero(el.ctx);
    for (m, c) in el.terms() {
        let mut acc: Vec<(i32, Vec<Factor>)> = vec![(1, Vec::new())];
        for f in &m.factors {
            let options: Vec<(i32, Factor)> = match f {
                Factor::Single(_) => vec![(1, f.clone())],
                Factor::Tree(t) => lie::normal_tree(t, d, k, stage)
                    .into_iter()
                    .map(|(s, t)| (s, Factor::Tree(t)))
                    .collect(),
            };
            let mut next = Vec::with_capacity(acc.len() * options.len());
            for (s, prefix) in &acc {
                for (s2, g) in &options {
                    let mut p = prefix.clone();
                    p.push(g.clone());
                    next.push((s * s2, p));
                }
            }
            acc = next;
        }
        for (s, factors) in acc {
            out.add_term(Monomial::new(factors), c * BigInt::from(s));
        }
    }
    out
}

/// Right-normed bracket trees; assumes kill has been applied.
pub fn comb_brackets(el: &Element) -> Element {
    tree_stage(el, Stage::Comb)
}

/// Right-normed trees with every generator reduced by the generalized Jacobi relation.
pub fn jacobi_straighten(el: &Element) -> Element {
    tree_stage(el, Stage::Straighten)
}

/// Sorts factors by least label with Koszul signs and merges equal monomials.
pub fn canonicalize(el: &Element) -> Element {
    let d = el.ctx.dim();
    let mut out = Element::zero(el.ctx);
    for (m, c) in el.terms() {
        let (s, sorted) = Monomial::sorted(m.factors.clone(), d);
        out.add_term(sorted, c * BigInt::from(s));
    }
    out
}

/// Full pipeline from raw terms.
pub fn normalize_raw_with(raw: &Raw, ctx: &AmbientContext, ch: &mut Chooser) -> Element {
    let pure = purify::purify(raw, ctx.dim(), ch);
    let el = filtration_kill(&expand(&pure, ctx));
    let el = filtration_kill(&jacobi_straighten(&comb_brackets(&el)));
    canonicalize(&el)
}

pub fn normalize_raw(raw: &Raw, ctx: &AmbientContext) -> Element {
    normalize_raw_with(raw, ctx, &mut Chooser::canonical())
}

pub fn normalize(e: &Expr, ctx: &AmbientContext) -> Result<Element> {
    Ok(normalize_raw(&lower(e, ctx)?, ctx))
}

/// Normalization with randomized choices wherever the pipeline has one.
pub fn normalize_with(e: &Expr, ctx: &AmbientContext, ch: &mut Chooser) -> Result<Element> {
    Ok(normalize_raw_with(&lower(e, ctx)?, ctx, ch))
}

/// An element as a syntax tree (its printed form parses back to it).
pub fn element_to_expr(el: &Element) -> Expr {
    let mut raw = Raw::new();
    for (m, c) in el.terms() {
        term::push(&mut raw, m.to_term(), c.clone());
    }
    term::raw_to_expr(&raw)
}

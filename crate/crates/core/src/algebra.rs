//! Graded term model: degrees, Koszul signs, canonical monomials and
//! integer linear combinations of them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expr::AmbientContext;
use crate::rewrite::term::Term;

/// `(-1)^exp` as `±1`.
pub fn parity_sign(exp: i64) -> i32 {
    if exp.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sign for transposing adjacent factors of degrees `p` and `q`.
pub fn koszul_swap_sign(p: i64, q: i64) -> i32 {
    parity_sign(p * q)
}

/// Koszul sign of reordering blocks of the given degrees: `target[j]` is
/// the index (into `degrees`) of the block placed at position `j`.
pub fn permutation_sign(degrees: &[i64], target: &[usize]) -> i32 {
    let mut sign = 1;
    for a in 0..target.len() {
        for b in a + 1..target.len() {
            if target[a] > target[b] {
                sign *= koszul_swap_sign(degrees[target[a]], degrees[target[b]]);
            }
        }
    }
    sign
}

/// A graded marker in the written order of a product of cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedMarker {
    pub name: String,
    pub degree: i64,
}

impl GradedMarker {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        GradedMarker { name: name.into(), degree }
    }
}

/// Sign of reordering `written` into `target`, as a product of adjacent
/// Koszul transpositions.
pub fn ordering_sign(written: &[GradedMarker], target: &[GradedMarker]) -> Result<i32> {
    if written.len() != target.len() {
        return Err(Error::MarkerMismatch);
    }
    let mut used = vec![false; written.len()];
    let mut perm = Vec::with_capacity(target.len());
    for t in target {
        let idx = written
            .iter()
            .enumerate()
            .position(|(i, w)| !used[i] && w == t)
            .ok_or(Error::MarkerMismatch)?;
        used[idx] = true;
        perm.push(idx);
    }
    let degrees: Vec<i64> = written.iter().map(|m| m.degree).collect();
    Ok(permutation_sign(&degrees, &perm))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Singleton(u32),
    /// Strictly ascending labels.
    FlatBrace(Vec<u32>),
}

impl Atom {
    pub fn degree(&self, d: i64) -> i64 {
        match self {
            Atom::Singleton(_) => 0,
            Atom::FlatBrace(ls) => (ls.len() as i64 - 1) * d - 1,
        }
    }

    pub fn min_label(&self) -> u32 {
        match self {
            Atom::Singleton(l) => *l,
            Atom::FlatBrace(ls) => ls[0],
        }
    }

    fn to_term(&self) -> Term {
        match self {
            Atom::Singleton(l) => Term::Var(*l),
            Atom::FlatBrace(ls) => Term::Brace(ls.iter().map(|l| Term::Var(*l)).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BracketTree {
    Leaf(Atom),
    Node(Box<BracketTree>, Box<BracketTree>),
}

impl BracketTree {
    pub fn node(a: BracketTree, b: BracketTree) -> Self {
        BracketTree::Node(Box::new(a), Box::new(b))
    }

    pub fn degree(&self, d: i64) -> i64 {
        match self {
            BracketTree::Leaf(a) => a.degree(d),
            BracketTree::Node(a, b) => a.degree(d) + b.degree(d) + d - 1,
        }
    }

    pub fn min_label(&self) -> u32 {
        match self {
            BracketTree::Leaf(a) => a.min_label(),
            BracketTree::Node(a, b) => a.min_label().min(b.min_label()),
        }
    }

    pub fn has_brace(&self) -> bool {
        match self {
            BracketTree::Leaf(a) => matches!(a, Atom::FlatBrace(_)),
            BracketTree::Node(a, b) => a.has_brace() || b.has_brace(),
        }
    }

    /// True when some bracket node (or the tree itself) has no brace below it.
    pub fn has_brace_free_node(&self) -> bool {
        match self {
            BracketTree::Leaf(_) => false,
            BracketTree::Node(a, b) => {
                !self.has_brace() || a.has_brace_free_node() || b.has_brace_free_node()
            }
        }
    }

    pub fn braces(&self) -> Vec<&[u32]> {
        match self {
            BracketTree::Leaf(Atom::FlatBrace(ls)) => vec![ls.as_slice()],
            BracketTree::Leaf(Atom::Singleton(_)) => vec![],
            BracketTree::Node(a, b) => {
                let mut v = a.braces();
                v.extend(b.braces());
                v
            }
        }
    }

    fn to_term(&self) -> Term {
        match self {
            BracketTree::Leaf(a) => a.to_term(),
            BracketTree::Node(a, b) => Term::bracket(a.to_term(), b.to_term()),
        }
    }
}

impl fmt::Display for BracketTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketTree::Leaf(Atom::Singleton(l)) => write!(f, "x{l}"),
            BracketTree::Leaf(Atom::FlatBrace(ls)) => {
                let parts: Vec<String> = ls.iter().map(|l| format!("x{l}")).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            BracketTree::Node(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Single(u32),
    Tree(BracketTree),
}

impl Factor {
    pub fn degree(&self, d: i64) -> i64 {
        match self {
            Factor::Single(_) => 0,
            Factor::Tree(t) => t.degree(d),
        }
    }

    pub fn min_label(&self) -> u32 {
        match self {
            Factor::Single(l) => *l,
            Factor::Tree(t) => t.min_label(),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Single(l) => write!(f, "x{l}"),
            Factor::Tree(t) => write!(f, "{t}"),
        }
    }
}

/// A product of iterated-bracket factors; canonical when factors ascend by
/// minimal label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub factors: Vec<Factor>,
}

impl Monomial {
    pub fn new(factors: Vec<Factor>) -> Self {
        Monomial { factors }
    }

    /// Sorts factors ascending by minimal label and returns the Koszul sign.
    pub fn sorted(mut factors: Vec<Factor>, d: i64) -> (i32, Monomial) {
        let degrees: Vec<i64> = factors.iter().map(|f| f.degree(d)).collect();
        let mut perm: Vec<usize> = (0..factors.len()).collect();
        perm.sort_by_key(|&i| factors[i].min_label());
        let sign = permutation_sign(&degrees, &perm);
        let mut slots: Vec<Option<Factor>> = factors.drain(..).map(Some).collect();
        let sorted = perm.iter().map(|&i| slots[i].take().unwrap()).collect();
        (sign, Monomial { factors: sorted })
    }

    pub fn degree(&self, d: i64) -> i64 {
        self.factors.iter().map(|f| f.degree(d)).sum()
    }

    pub fn min_label(&self) -> u32 {
        self.factors.iter().map(Factor::min_label).min().unwrap_or(0)
    }

    pub fn trees(&self) -> impl Iterator<Item = &BracketTree> {
        self.factors.iter().filter_map(|f| match f {
            Factor::Tree(t) => Some(t),
            Factor::Single(_) => None,
        })
    }

    pub fn to_term(&self) -> Term {
        let mut parts: Vec<Term> = self
            .factors
            .iter()
            .map(|f| match f {
                Factor::Single(l) => Term::Var(*l),
                Factor::Tree(t) => t.to_term(),
            })
            .collect();
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Term::Product(parts)
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(Factor::to_string).collect();
        f.write_str(&parts.join("*"))
    }
}

/// Degree of a monomial for the given dimension.
pub fn degree(m: &Monomial, d: u32) -> i64 {
    m.degree(d as i64)
}

/// An integer linear combination of canonical monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub ctx: AmbientContext,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Element {
    pub fn zero(ctx: AmbientContext) -> Self {
        Element { ctx, terms: BTreeMap::new() }
    }

    pub fn from_monomial(ctx: AmbientContext, m: Monomial) -> Self {
        let mut e = Element::zero(ctx);
        e.add_term(m, BigInt::one());
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(format!("{} vs {}", self.ctx, other.ctx)));
        }
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, c: &BigInt) -> Element {
        let mut out = Element::zero(self.ctx);
        for (m, x) in self.terms() {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    /// Degree of every monomial, when they all agree.
    pub fn degree(&self) -> Option<i64> {
        let d = self.ctx.dim();
        let mut degs = self.terms.keys().map(|m| m.degree(d));
        let first = degs.next()?;
        degs.all(|x| x == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if c.is_negative() {
                write!(f, "-{}*{m}", -c)?;
            } else if i > 0 {
                write!(f, "+{c}*{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brace(ls: &[u32]) -> BracketTree {
        BracketTree::Leaf(Atom::FlatBrace(ls.to_vec()))
    }

    fn single(l: u32) -> BracketTree {
        BracketTree::Leaf(Atom::Singleton(l))
    }

    #[test]
    fn degrees() {
        for d in 2..6i64 {
            let m = Monomial::new(vec![Factor::Tree(brace(&[1, 2, 3]))]);
            assert_eq!(m.degree(d), 2 * d - 1);
            let m = Monomial::new(vec![
                Factor::Single(2),
                Factor::Tree(BracketTree::node(brace(&[1, 3, 4]), single(5))),
            ]);
            assert_eq!(m.degree(d), 3 * d - 2);
            let m = Monomial::new((1..=4).map(Factor::Single).collect());
            assert_eq!(m.degree(d), 0);
        }
    }

    #[test]
    fn swap_signs() {
        assert_eq!(koszul_swap_sign(0, 7), 1);
        assert_eq!(koszul_swap_sign(3, 1), -1);
        assert_eq!(koszul_swap_sign(5, 2), 1);
    }

    #[test]
    fn ordering_sign_examples() {
        let d = 3;
        let k = 4;
        let written = vec![
            GradedMarker::new("brace", (k - 1) * d - 1),
            GradedMarker::new("Y", 5),
            GradedMarker::new("comma", d - 1),
            GradedMarker::new("Z", 3),
        ];
        assert_eq!(ordering_sign(&written, &written).unwrap(), 1);
        let target = vec![
            written[1].clone(),
            written[2].clone(),
            written[0].clone(),
            written[3].clone(),
        ];
        // brace (8) past Y (5) and comma (2): both even products
        assert_eq!(ordering_sign(&written, &target).unwrap(), 1);
        let evens = vec![GradedMarker::new("a", 2), GradedMarker::new("b", 4)];
        let swapped = vec![evens[1].clone(), evens[0].clone()];
        assert_eq!(ordering_sign(&evens, &swapped).unwrap(), 1);
        let odd = vec![GradedMarker::new("a", 1), GradedMarker::new("b", 3)];
        let odd_swapped = vec![odd[1].clone(), odd[0].clone()];
        assert_eq!(ordering_sign(&odd, &odd_swapped).unwrap(), -1);
        assert_eq!(ordering_sign(&odd, &evens), Err(Error::MarkerMismatch));
    }

    #[test]
    fn element_arithmetic() {
        let ctx = AmbientContext::new(2, 3, 3).unwrap();
        let m1 = Monomial::new(vec![Factor::Tree(brace(&[1, 2, 3]))]);
        let m2 = Monomial::new((1..=3).map(Factor::Single).collect());
        let a = Element::from_monomial(ctx, m1.clone());
        assert!(a.add(&a.scale(&BigInt::from(-1))).unwrap().is_zero());
        assert!(a.scale(&BigInt::zero()).is_zero());
        let b = Element::from_monomial(ctx, m2.clone());
        let s = a.add(&b).unwrap();
        assert_eq!(s.len(), 2);
        assert!(!s.is_homogeneous());
        let other = Element::zero(AmbientContext::new(2, 4, 3).unwrap());
        assert!(matches!(a.add(&other), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn factor_sort_sign() {
        // {x4,x5,x6} * {x1,x2,x3}: two odd-degree factors at d = 2
        let f1 = Factor::Tree(brace(&[4, 5, 6]));
        let f2 = Factor::Tree(brace(&[1, 2, 3]));
        let (s, m) = Monomial::sorted(vec![f1.clone(), f2.clone()], 2);
        assert_eq!(s, -1);
        assert_eq!(m.factors, vec![f2, f1]);
    }
}

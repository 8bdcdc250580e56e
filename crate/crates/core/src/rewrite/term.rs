//! Raw terms: the working representation of the normalizer, before any
//! canonical form is imposed.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::expr::{self, Expr};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(u32),
    Brace(Vec<Term>),
    Bracket(Box<Term>, Box<Term>),
    Product(Vec<Term>),
}

/// An integer linear combination of raw terms.
pub type Raw = BTreeMap<Term, BigInt>;

pub fn push(raw: &mut Raw, t: Term, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match raw.entry(t) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub fn add_scaled(into: &mut Raw, from: &Raw, c: &BigInt) {
    for (t, x) in from {
        push(into, t.clone(), x * c);
    }
}

pub fn single(t: Term) -> Raw {
    let mut r = Raw::new();
    r.insert(t, BigInt::from(1));
    r
}

/// One event of the written order: a label position or a graded marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    Label(u32),
    Marker(i64),
}

impl Term {
    pub fn bracket(a: Term, b: Term) -> Term {
        Term::Bracket(Box::new(a), Box::new(b))
    }

    /// Product with nested products flattened; a single factor is returned as is.
    pub fn product(factors: Vec<Term>) -> Term {
        let mut out = Vec::with_capacity(factors.len());
        for f in factors {
            match f {
                Term::Product(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Term::Product(out)
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn degree(&self, d: i64) -> i64 {
        match self {
            Term::Var(_) => 0,
            Term::Brace(args) => {
                (args.len() as i64 - 1) * d - 1 + args.iter().map(|a| a.degree(d)).sum::<i64>()
            }
            Term::Bracket(a, b) => a.degree(d) + b.degree(d) + d - 1,
            Term::Product(fs) => fs.iter().map(|f| f.degree(d)).sum(),
        }
    }

    pub fn labels(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut Vec<u32>) {
        match self {
            Term::Var(l) => out.push(*l),
            Term::Brace(xs) | Term::Product(xs) => xs.iter().for_each(|x| x.collect_labels(out)),
            Term::Bracket(a, b) => {
                a.collect_labels(out);
                b.collect_labels(out);
            }
        }
    }

    pub fn min_label(&self) -> u32 {
        self.labels().into_iter().min().unwrap_or(0)
    }

    /// Labels and markers in written order. A brace emits its marker at the
    /// opening brace, a bracket at its comma.
    pub fn events(&self, d: i64) -> Vec<Event> {
        let mut out = Vec::new();
        self.collect_events(d, &mut out);
        out
    }

    fn collect_events(&self, d: i64, out: &mut Vec<Event>) {
        match self {
            Term::Var(l) => out.push(Event::Label(*l)),
            Term::Brace(args) => {
                out.push(Event::Marker((args.len() as i64 - 1) * d - 1));
                args.iter().for_each(|a| a.collect_events(d, out));
            }
            Term::Bracket(a, b) => {
                a.collect_events(d, out);
                out.push(Event::Marker(d - 1));
                b.collect_events(d, out);
            }
            Term::Product(fs) => fs.iter().for_each(|f| f.collect_events(d, out)),
        }
    }

    /// Total degree of the markers written after `x_label`.
    pub fn degree_after(&self, label: u32, d: i64) -> Option<i64> {
        let ev = self.events(d);
        let pos = ev.iter().position(|e| *e == Event::Label(label))?;
        Some(
            ev[pos + 1..]
                .iter()
                .map(|e| match e {
                    Event::Marker(m) => *m,
                    Event::Label(_) => 0,
                })
                .sum(),
        )
    }

    /// Replaces `x_label` by `b`.
    pub fn substitute(&self, label: u32, b: &Term) -> Term {
        match self {
            Term::Var(l) if *l == label => b.clone(),
            Term::Var(_) => self.clone(),
            Term::Brace(args) => Term::Brace(args.iter().map(|a| a.substitute(label, b)).collect()),
            Term::Bracket(x, y) => Term::bracket(x.substitute(label, b), y.substitute(label, b)),
            Term::Product(fs) => Term::product(fs.iter().map(|f| f.substitute(label, b)).collect()),
        }
    }

    /// Koszul graft of `b` into `x_label`: `b`'s block is carried from the end
    /// of the written order to the position of `x_label`.
    pub fn graft(&self, label: u32, b: &Term, d: i64) -> Option<(i32, Term)> {
        let after = self.degree_after(label, d)?;
        let sign = crate::algebra::parity_sign(after * b.degree(d));
        Some((sign, self.substitute(label, b)))
    }

    pub fn relabel(&self, f: &impl Fn(u32) -> u32) -> Term {
        match self {
            Term::Var(l) => Term::Var(f(*l)),
            Term::Brace(args) => Term::Brace(args.iter().map(|a| a.relabel(f)).collect()),
            Term::Bracket(x, y) => Term::bracket(x.relabel(f), y.relabel(f)),
            Term::Product(fs) => Term::Product(fs.iter().map(|x| x.relabel(f)).collect()),
        }
    }

    /// True when every brace below (and including) this node has only
    /// singleton arguments.
    pub fn is_pure(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Brace(args) => args.iter().all(Term::is_var),
            Term::Bracket(a, b) => a.is_pure() && b.is_pure(),
            Term::Product(fs) => fs.iter().all(Term::is_pure),
        }
    }

    /// Impurity measure: (non-singleton brace arguments, total brace nesting depth).
    pub fn impurity(&self) -> (usize, usize) {
        fn walk(t: &Term, depth: usize, acc: &mut (usize, usize)) {
            match t {
                Term::Var(_) => {}
                Term::Brace(args) => {
                    acc.0 += args.iter().filter(|a| !a.is_var()).count();
                    acc.1 += depth;
                    args.iter().for_each(|a| walk(a, depth + 1, acc));
                }
                Term::Bracket(a, b) => {
                    walk(a, depth, acc);
                    walk(b, depth, acc);
                }
                Term::Product(fs) => fs.iter().for_each(|f| walk(f, depth, acc)),
            }
        }
        let mut acc = (0, 0);
        walk(self, 0, &mut acc);
        acc
    }

    pub fn to_expr(&self) -> Expr {
        match self {
            Term::Var(l) => Expr::Var(*l),
            Term::Brace(args) => Expr::Brace(args.iter().map(Term::to_expr).collect()),
            Term::Bracket(a, b) => Expr::bracket(a.to_expr(), b.to_expr()),
            Term::Product(fs) => Expr::Product(fs.iter().map(Term::to_expr).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&expr::print(&self.to_expr()))
    }
}

/// Renders a raw combination in the expression grammar.
pub fn raw_to_expr(raw: &Raw) -> Expr {
    let terms: Vec<Expr> = raw.iter().map(|(t, c)| Expr::scaled(c.clone(), t.to_expr())).collect();
    match terms.len() {
        0 => Expr::scaled(0, Expr::Var(1)),
        1 => terms.into_iter().next().unwrap(),
        _ => Expr::Sum(terms),
    }
}

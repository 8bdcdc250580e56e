//! Textual bracket/brace expressions: parsing, validation and printing.
//!
//! Grammar (whitespace-insensitive, ASCII tokens):
//!
//! ```text
//! element := [ "+" | "-" ] term { ("+" | "-") term } ;
//! term    := [ integer "*" ] factor { "*" factor } ;
//! factor  := var | brace | bracket | "(" element ")" ;
//! var     := "x" digits ;
//! brace   := "{" element { "," element } "}" ;
//! bracket := "[" element "," element "]" ;
//! ```
//!
//! `·` (U+00B7) is accepted as a synonym for `*`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// The triple fixing dimension `d`, overlap bound `k` and arity `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmbientContext {
    pub d: u32,
    pub k: u32,
    pub n: u32,
}

impl AmbientContext {
    pub fn new(d: u32, k: u32, n: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidContext(format!(
                "d = {d}: the associative case d = 1 is not supported, need d >= 2"
            )));
        }
        if k < 2 {
            return Err(Error::InvalidContext(format!("k = {k}, need k >= 2")));
        }
        Ok(AmbientContext { d, k, n })
    }

    pub fn dim(&self) -> i64 {
        self.d as i64
    }
}

impl fmt::Display for AmbientContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d={}, k={}, n={})", self.d, self.k, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(u32),
    Brace(Vec<Expr>),
    Bracket(Box<Expr>, Box<Expr>),
    Product(Vec<Expr>),
    Scaled(BigInt, Box<Expr>),
    Sum(Vec<Expr>),
}

impl Expr {
    pub fn bracket(a: Expr, b: Expr) -> Expr {
        Expr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn scaled(c: impl Into<BigInt>, e: Expr) -> Expr {
        Expr::Scaled(c.into(), Box::new(e))
    }

    /// Overlap capacity: the number of discs the expression can force to a
    /// common point. A brace over arguments of capacities `c_i` has capacity
    /// `sum(c_i) - min(c_i)`.
    pub fn capacity(&self) -> u32 {
        match self {
            Expr::Var(_) => 1,
            Expr::Brace(args) => {
                let caps: Vec<u32> = args.iter().map(Expr::capacity).collect();
                let total: u32 = caps.iter().sum();
                total - caps.iter().copied().min().unwrap_or(0)
            }
            Expr::Bracket(a, b) => a.capacity().max(b.capacity()),
            Expr::Product(fs) | Expr::Sum(fs) => fs.iter().map(Expr::capacity).max().unwrap_or(0),
            Expr::Scaled(_, e) => e.capacity(),
        }
    }

    fn max_brace_capacity(&self) -> u32 {
        match self {
            Expr::Var(_) => 0,
            Expr::Brace(args) => args
                .iter()
                .map(Expr::max_brace_capacity)
                .max()
                .unwrap_or(0)
                .max(self.capacity()),
            Expr::Bracket(a, b) => a.max_brace_capacity().max(b.max_brace_capacity()),
            Expr::Product(fs) | Expr::Sum(fs) => {
                fs.iter().map(Expr::max_brace_capacity).max().unwrap_or(0)
            }
            Expr::Scaled(_, e) => e.max_brace_capacity(),
        }
    }

    fn label_set(&self) -> Result<BTreeSet<u32>> {
        match self {
            Expr::Var(l) => Ok(BTreeSet::from([*l])),
            Expr::Brace(parts) | Expr::Product(parts) => disjoint_union(parts.iter()),
            Expr::Bracket(a, b) => disjoint_union([a.as_ref(), b.as_ref()].into_iter()),
            Expr::Scaled(_, e) => e.label_set(),
            Expr::Sum(terms) => {
                let mut iter = terms.iter();
                let first = iter
                    .next()
                    .map(Expr::label_set)
                    .transpose()?
                    .unwrap_or_default();
                for t in iter {
                    if t.label_set()? != first {
                        return Err(Error::Multilinear(format!(
                            "summands of {self} use different labels"
                        )));
                    }
                }
                Ok(first)
            }
        }
    }

    fn check_labels(&self, n: u32) -> Result<()> {
        match self {
            Expr::Var(l) if *l == 0 || *l > n => Err(Error::LabelOutOfRange { label: *l, n }),
            Expr::Var(_) => Ok(()),
            Expr::Brace(parts) | Expr::Product(parts) | Expr::Sum(parts) => {
                parts.iter().try_for_each(|p| p.check_labels(n))
            }
            Expr::Bracket(a, b) => {
                a.check_labels(n)?;
                b.check_labels(n)
            }
            Expr::Scaled(_, e) => e.check_labels(n),
        }
    }

    fn check_arity(&self) -> Result<()> {
        match self {
            Expr::Var(_) => Ok(()),
            Expr::Brace(args) if args.len() < 2 => Err(Error::Syntax {
                pos: 0,
                msg: "a brace needs at least two arguments".into(),
            }),
            Expr::Brace(parts) | Expr::Product(parts) | Expr::Sum(parts) => {
                parts.iter().try_for_each(Expr::check_arity)
            }
            Expr::Bracket(a, b) => {
                a.check_arity()?;
                b.check_arity()
            }
            Expr::Scaled(_, e) => e.check_arity(),
        }
    }

    /// Checks the label range, multilinearity in `1..=n` and overlap capacity.
    pub fn validate(&self, ctx: &AmbientContext) -> Result<()> {
        self.check_arity()?;
        self.check_labels(ctx.n)?;
        let labels = self.label_set()?;
        let expected: BTreeSet<u32> = (1..=ctx.n).collect();
        if labels != expected {
            let missing: Vec<String> = expected
                .difference(&labels)
                .map(|l| format!("x{l}"))
                .collect();
            return Err(Error::Multilinear(format!(
                "labels {} do not appear",
                missing.join(",")
            )));
        }
        let capacity = self.max_brace_capacity();
        if capacity > ctx.k - 1 {
            return Err(Error::Capacity { capacity, limit: ctx.k - 1 });
        }
        Ok(())
    }
}

fn disjoint_union<'a>(parts: impl Iterator<Item = &'a Expr>) -> Result<BTreeSet<u32>> {
    let mut acc = BTreeSet::new();
    for p in parts {
        for l in p.label_set()? {
            if !acc.insert(l) {
                return Err(Error::Multilinear(format!("label x{l} appears twice")));
            }
        }
    }
    Ok(acc)
}

/// Parses and validates `text` in the given ambient context.
pub fn parse(text: &str, ctx: &AmbientContext) -> Result<Expr> {
    let e = parse_unchecked(text)?;
    e.validate(ctx)?;
    Ok(e)
}

/// Parses `text` without running the ambient validation.
pub fn parse_unchecked(text: &str) -> Result<Expr> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let e = p.element()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(self.error(format!("expected '{c}', found '{x}'"))),
            None => Err(self.error(format!("expected '{c}', found end of input"))),
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn element(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            terms.push(if negate { negated(t) } else { t });
            match self.peek() {
                Some('+') => negate = false,
                Some('-') => negate = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Sum(terms) })
    }

    fn term(&mut self) -> Result<Expr> {
        self.skip_ws();
        let coeff = match self.digits() {
            Some(ds) => {
                self.expect('*')?;
                Some(ds.parse::<BigInt>().expect("ascii digits"))
            }
            None => None,
        };
        let mut factors = vec![self.factor()?];
        while matches!(self.peek(), Some('*') | Some('·')) {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        let body = if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Product(factors) };
        Ok(match coeff {
            Some(c) => Expr::Scaled(c, Box::new(body)),
            None => body,
        })
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                let ds = self.digits().ok_or_else(|| self.error("expected digits after 'x'"))?;
                let label = ds.parse::<u32>().map_err(|_| self.error("label too large"))?;
                Ok(Expr::Var(label))
            }
            Some('{') => {
                self.pos += 1;
                let mut args = vec![self.element()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    args.push(self.element()?);
                }
                self.expect('}')?;
                if args.len() < 2 {
                    return Err(self.error("a brace needs at least two arguments"));
                }
                Ok(Expr::Brace(args))
            }
            Some('[') => {
                self.pos += 1;
                let a = self.element()?;
                self.expect(',')?;
                let b = self.element()?;
                self.expect(']')?;
                Ok(Expr::bracket(a, b))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.element()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn negated(t: Expr) -> Expr {
    match t {
        Expr::Scaled(c, b) => Expr::Scaled(-c, b),
        other => Expr::Scaled(-BigInt::one(), Box::new(other)),
    }
}

/// Canonical textual form; `parse_unchecked(&print(e)) == e`.
pub fn print(e: &Expr) -> String {
    let mut s = String::new();
    write_element(e, &mut s);
    s
}

fn write_element(e: &Expr, s: &mut String) {
    match e {
        Expr::Sum(terms) => {
            for (i, t) in terms.iter().enumerate() {
                match t {
                    Expr::Scaled(c, body) if c.is_negative() => {
                        s.push('-');
                        write_scaled(&(-c), body, s);
                    }
                    _ => {
                        if i > 0 {
                            s.push('+');
                        }
                        write_term(t, s);
                    }
                }
            }
        }
        Expr::Scaled(c, body) if c.is_negative() => {
            s.push('-');
            write_scaled(&(-c), body, s);
        }
        _ => write_term(e, s),
    }
}

fn write_term(e: &Expr, s: &mut String) {
    match e {
        Expr::Scaled(c, body) => write_scaled(c, body, s),
        Expr::Product(fs) => write_product(fs, s),
        _ => write_factor(e, s),
    }
}

fn write_scaled(c: &BigInt, body: &Expr, s: &mut String) {
    s.push_str(&c.to_string());
    s.push('*');
    match body {
        Expr::Product(fs) => write_product(fs, s),
        _ => write_factor(body, s),
    }
}

fn write_product(fs: &[Expr], s: &mut String) {
    for (i, f) in fs.iter().enumerate() {
        if i > 0 {
            s.push('*');
        }
        write_factor(f, s);
    }
}

fn write_factor(e: &Expr, s: &mut String) {
    match e {
        Expr::Var(l) => {
            s.push('x');
            s.push_str(&l.to_string());
        }
        Expr::Brace(args) => {
            s.push('{');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                write_element(a, s);
            }
            s.push('}');
        }
        Expr::Bracket(a, b) => {
            s.push('[');
            write_element(a, s);
            s.push(',');
            write_element(b, s);
            s.push(']');
        }
        Expr::Sum(_) | Expr::Scaled(..) | Expr::Product(_) => {
            s.push('(');
            write_element(e, s);
            s.push(')');
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(l: u32) -> Expr {
        Expr::Var(l)
    }

    fn ctx(d: u32, k: u32, n: u32) -> AmbientContext {
        AmbientContext::new(d, k, n).unwrap()
    }

    #[test]
    fn parses_brace() {
        let e = parse("{x2,x1,x3}", &ctx(2, 3, 3)).unwrap();
        assert_eq!(e, Expr::Brace(vec![v(2), v(1), v(3)]));
    }

    #[test]
    fn parses_product_with_bracket() {
        let e = parse("x2*[{x1,x3,x4},x5]", &ctx(2, 3, 5)).unwrap();
        assert_eq!(
            e,
            Expr::Product(vec![
                v(2),
                Expr::bracket(Expr::Brace(vec![v(1), v(3), v(4)]), v(5))
            ])
        );
        let dotted = parse("x2 · [ {x1, x3, x4} , x5 ]", &ctx(2, 3, 5)).unwrap();
        assert_eq!(dotted, e);
    }

    #[test]
    fn nested_brace_capacity() {
        let text = "{x1,{x2,x3,x4,x5},x6}";
        let e = parse(text, &ctx(2, 5, 6)).unwrap();
        assert_eq!(e.capacity(), 4);
        assert_eq!(
            parse(text, &ctx(2, 4, 6)),
            Err(Error::Capacity { capacity: 4, limit: 3 })
        );
    }

    #[test]
    fn long_brace_is_a_capacity_error() {
        assert!(matches!(
            parse("{x1,x2,x3,x4}", &ctx(2, 3, 4)),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse("{x1,x2", &ctx(2, 3, 2)), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse("{x1,x2,x4}", &ctx(2, 3, 3)),
            Err(Error::LabelOutOfRange { label: 4, n: 3 })
        ));
        assert!(matches!(parse("x1*x1", &ctx(2, 3, 1)), Err(Error::Multilinear(_))));
        assert!(matches!(parse("x1+x2", &ctx(2, 3, 2)), Err(Error::Multilinear(_))));
        assert!(matches!(parse("x1", &ctx(2, 3, 2)), Err(Error::Multilinear(_))));
        assert!(matches!(parse("{x1}", &ctx(2, 3, 1)), Err(Error::Syntax { .. })));
        assert!(AmbientContext::new(1, 3, 3).is_err());
    }

    #[test]
    fn prints_canonically() {
        assert_eq!(print(&Expr::Brace(vec![v(1), v(2), v(3)])), "{x1,x2,x3}");
        assert_eq!(
            print(&Expr::bracket(Expr::Brace(vec![v(1), v(2), v(3)]), v(4))),
            "[{x1,x2,x3},x4]"
        );
        let s = Expr::Sum(vec![v(1), Expr::scaled(-1, v(1))]);
        assert_eq!(print(&s), "x1-1*x1");
        assert_eq!(print(&Expr::scaled(-1, v(2))), "-1*x2");
    }

    #[test]
    fn nested_scalars_round_trip() {
        for text in ["-1*(2*x1)", "2*(x1*x2)*x3", "(x1+x1)*x2", "{-1*x1,x2,3*(x3+x3)}", "(x1+x1)+x1"] {
            let e = parse_unchecked(text).unwrap();
            assert_eq!(parse_unchecked(&print(&e)).unwrap(), e, "{text}");
        }
    }
}

//! Lowering from the syntax tree and removal of composite brace arguments.

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::term::{add_scaled, push, single, Raw, Term};
use crate::algebra::parity_sign;
use crate::expr::Expr;

/// Picks which admissible rewrite to apply when there is a choice.
pub struct Chooser {
    rng: Option<ChaCha8Rng>,
}

impl Chooser {
    pub fn canonical() -> Self {
        Chooser { rng: None }
    }

    pub fn random(rng: ChaCha8Rng) -> Self {
        Chooser { rng: Some(rng) }
    }

    pub fn pick(&mut self, n: usize) -> usize {
        match &mut self.rng {
            None => 0,
            Some(r) => r.gen_range(0..n),
        }
    }

    pub fn coin(&mut self) -> bool {
        match &mut self.rng {
            None => false,
            Some(r) => r.gen_bool(0.5),
        }
    }
}

/// Coefficient of `[x_i, {L \ x_i}]` in the expansion of a brace nested as
/// the last argument of a brace with `k1 - 1` singletons.
pub fn nested_brace_coefficient(k1: i64, i: i64, d: i64) -> i32 {
    parity_sign((k1 - 1) * d + (i - 1) * d)
}

/// Multilinear expansion of the cartesian product of `parts`.
fn distribute(parts: Vec<Raw>, mut build: impl FnMut(Vec<Term>) -> Raw) -> Raw {
    let mut acc: Vec<(Vec<Term>, BigInt)> = vec![(Vec::new(), BigInt::one())];
    for part in parts {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for (prefix, c) in &acc {
            for (t, x) in &part {
                let mut p = prefix.clone();
                p.push(t.clone());
                next.push((p, c * x));
            }
        }
        acc = next;
    }
    let mut out = Raw::new();
    for (ts, c) in acc {
        add_scaled(&mut out, &build(ts), &c);
    }
    out
}

/// Syntax tree to raw combination. Arity-2 braces become brackets.
pub fn lower(e: &Expr) -> Raw {
    match e {
        Expr::Var(l) => single(Term::Var(*l)),
        Expr::Scaled(c, b) => {
            let mut out = Raw::new();
            add_scaled(&mut out, &lower(b), c);
            out
        }
        Expr::Sum(ts) => {
            let mut out = Raw::new();
            for t in ts {
                add_scaled(&mut out, &lower(t), &BigInt::one());
            }
            out
        }
        Expr::Product(fs) => distribute(fs.iter().map(lower).collect(), |ts| single(Term::product(ts))),
        Expr::Bracket(a, b) => distribute(vec![lower(a), lower(b)], |mut ts| {
            let b = ts.pop().unwrap();
            let a = ts.pop().unwrap();
            single(Term::bracket(a, b))
        }),
        Expr::Brace(args) => distribute(args.iter().map(lower).collect(), |ts| single(brace_or_bracket(ts))),
    }
}

fn brace_or_bracket(mut ts: Vec<Term>) -> Term {
    if ts.len() == 2 {
        let b = ts.pop().unwrap();
        let a = ts.pop().unwrap();
        Term::bracket(a, b)
    } else {
        Term::Brace(ts)
    }
}

/// Rewrites every brace into a brace over singletons.
pub fn purify(raw: &Raw, d: i64, ch: &mut Chooser) -> Raw {
    let mut out = Raw::new();
    for (t, c) in raw {
        add_scaled(&mut out, &purify_term(t, d, ch), c);
    }
    out
}

pub fn purify_term(t: &Term, d: i64, ch: &mut Chooser) -> Raw {
    match t {
        Term::Var(_) => single(t.clone()),
        Term::Product(fs) => {
            let parts = fs.iter().map(|f| purify_term(f, d, ch)).collect();
            distribute(parts, |ts| single(Term::product(ts)))
        }
        Term::Bracket(a, b) => {
            let parts = vec![purify_term(a, d, ch), purify_term(b, d, ch)];
            distribute(parts, |mut ts| {
                let b = ts.pop().unwrap();
                let a = ts.pop().unwrap();
                single(Term::bracket(a, b))
            })
        }
        Term::Brace(args) => {
            let parts = args.iter().map(|a| purify_term(a, d, ch)).collect();
            distribute(parts, |ts| reduce_brace(ts, d, ch))
        }
    }
}

/// Labels above this offset stand in for composite arguments.
const PLACEHOLDER: u32 = 1 << 30;

/// A brace whose arguments are already pure.
fn reduce_brace(args: Vec<Term>, d: i64, ch: &mut Chooser) -> Raw {
    if args.len() == 2 {
        return single(brace_or_bracket(args));
    }
    let composite: Vec<usize> = (0..args.len()).filter(|&i| !args[i].is_var()).collect();
    if composite.is_empty() {
        return sorted_flat_brace(args, d);
    }
    let j = composite[ch.pick(composite.len())];
    let m = args.len() as i64;
    let mut sign = 1;
    let dj = args[j].degree(d);
    for a in &args[j + 1..] {
        sign *= parity_sign(d + dj * a.degree(d));
    }
    let mut others = args;
    let x = others.remove(j);
    let s = (m - 1) * d - 1;
    let sigma: i64 = others.iter().map(|o| o.degree(d)).sum();
    let with = |last: Term| {
        let mut v = others.clone();
        v.push(last);
        Term::Brace(v)
    };

    let mut pieces: Vec<(i32, Term)> = Vec::new();
    match x {
        Term::Product(fs) => {
            let mut fs = fs;
            let y = fs.remove(0);
            let z = Term::product(fs);
            let e = parity_sign(y.degree(d) * (s + sigma));
            pieces.push((sign * e, Term::product(vec![y.clone(), with(z.clone())])));
            pieces.push((sign, Term::product(vec![with(y), z])));
        }
        Term::Bracket(y, z) => {
            let e = parity_sign((y.degree(d) + d - 1) * (s + sigma));
            pieces.push((sign * e, Term::bracket((*y).clone(), with((*z).clone()))));
            pieces.push((sign, Term::bracket(with(*y), *z)));
        }
        Term::Brace(ys) => {
            for (c, t) in nested_brace(&others, &ys, d) {
                pieces.push((sign * c, t));
            }
        }
        Term::Var(_) => unreachable!("composite argument"),
    }
    let mut out = Raw::new();
    for (c, t) in pieces {
        add_scaled(&mut out, &purify_term(&t, d, ch), &BigInt::from(c));
    }
    out
}

fn sorted_flat_brace(args: Vec<Term>, d: i64) -> Raw {
    let labels: Vec<u32> = args
        .iter()
        .map(|a| match a {
            Term::Var(l) => *l,
            _ => unreachable!("flat brace"),
        })
        .collect();
    let mut inversions = 0i64;
    for a in 0..labels.len() {
        for b in a + 1..labels.len() {
            if labels[a] > labels[b] {
                inversions += 1;
            }
        }
    }
    let mut sorted = labels;
    sorted.sort_unstable();
    let mut out = Raw::new();
    push(
        &mut out,
        Term::Brace(sorted.into_iter().map(Term::Var).collect()),
        BigInt::from(parity_sign(inversions * d)),
    );
    out
}

/// `{O, {y_1..y_k2}}` as a sum of brackets of a singleton with one large
/// brace. Composite entries of `O` are handled through placeholders and
/// grafted back afterwards.
fn nested_brace(others: &[Term], ys: &[Term], d: i64) -> Vec<(i32, Term)> {
    let mut xs = Vec::with_capacity(others.len());
    let mut grafts = Vec::new();
    for (j, o) in others.iter().enumerate() {
        if o.is_var() {
            xs.push(o.clone());
        } else {
            let p = PLACEHOLDER + j as u32;
            xs.push(Term::Var(p));
            grafts.push((p, o.clone()));
        }
    }
    let graft_all = |t: &Term| -> (i32, Term) {
        let mut sign = 1;
        let mut cur = t.clone();
        for (p, o) in &grafts {
            let (s, next) = cur.graft(*p, o, d).expect("placeholder present");
            sign *= s;
            cur = next;
        }
        (sign, cur)
    };
    let mut lhs = xs.clone();
    lhs.push(Term::Brace(ys.to_vec()));
    let (lhs_sign, _) = graft_all(&Term::Brace(lhs));

    let k1 = xs.len() as i64 + 1;
    let all: Vec<Term> = xs.iter().chain(ys.iter()).cloned().collect();
    let mut out = Vec::new();
    for i in (k1 as usize)..=all.len() {
        let mut rest = all.clone();
        let xi = rest.remove(i - 1);
        let t = Term::bracket(xi, Term::Brace(rest));
        let (s, t) = graft_all(&t);
        out.push((nested_brace_coefficient(k1, i as i64, d) * s * lhs_sign, t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_unchecked;

    fn raw(text: &str) -> Raw {
        lower(&parse_unchecked(text).unwrap())
    }

    fn pure(text: &str, d: i64) -> Raw {
        purify(&raw(text), d, &mut Chooser::canonical())
    }

    fn v(l: u32) -> Term {
        Term::Var(l)
    }

    fn brace(ls: &[u32]) -> Term {
        Term::Brace(ls.iter().map(|&l| v(l)).collect())
    }

    #[test]
    fn lowering() {
        assert_eq!(raw("x1"), single(v(1)));
        assert_eq!(raw("{x1,x2}"), single(Term::bracket(v(1), v(2))));
        let r = raw("{x1,x2,x3}+{x1,x2,x3}");
        assert_eq!(r.get(&brace(&[1, 2, 3])), Some(&BigInt::from(2)));
        let r = raw("(x1+x2)*x3");
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn flat_sorting() {
        for d in 2..5 {
            let r = pure("{x2,x1,x3}", d);
            assert_eq!(r.get(&brace(&[1, 2, 3])), Some(&BigInt::from(parity_sign(d))));
        }
    }

    #[test]
    fn product_argument() {
        // {x1,x2,x3*x4} = x3*{x1,x2,x4} + {x1,x2,x3}*x4
        let r = pure("{x1,x2,x3*x4}", 3);
        let mut want = Raw::new();
        push(&mut want, Term::Product(vec![v(3), brace(&[1, 2, 4])]), BigInt::one());
        push(&mut want, Term::Product(vec![brace(&[1, 2, 3]), v(4)]), BigInt::one());
        assert_eq!(r, want);
    }

    #[test]
    fn bracket_argument_sign() {
        // [x3,{x1,x2,x4}] carries (-1)^((d-1)(2d-1)) = (-1)^(d-1)
        for d in 2..5 {
            let r = pure("{x1,x2,[x3,x4]}", d);
            let t = Term::bracket(v(3), brace(&[1, 2, 4]));
            assert_eq!(r.get(&t), Some(&BigInt::from(parity_sign(d - 1))));
            let t = Term::bracket(brace(&[1, 2, 3]), v(4));
            assert_eq!(r.get(&t), Some(&BigInt::one()));
        }
    }

    #[test]
    fn nested_brace_expansion() {
        for d in 2..5 {
            let r = pure("{x1,x2,{x3,x4,x5}}", d);
            assert_eq!(r.len(), 3);
            for (i, rest) in [(3, [1, 2, 4, 5]), (4, [1, 2, 3, 5]), (5, [1, 2, 3, 4])] {
                let t = Term::bracket(v(i), brace(&rest));
                let want = parity_sign(2 * d + (i as i64 - 1) * d);
                assert_eq!(r.get(&t), Some(&BigInt::from(want)), "d={d} i={i}");
            }
        }
    }

    #[test]
    fn composite_in_first_slot_is_moved() {
        // {x1*x2,x3,x4}: moving the product to the end is two transpositions
        let a = pure("{x1*x2,x3,x4}", 3);
        let b = pure("{x3,x4,x1*x2}", 3);
        assert_eq!(a, b);
    }

    #[test]
    fn random_choice_agrees_on_two_composites() {
        use rand::SeedableRng;
        let text = "{x1*x2,x3,[x4,x5]}";
        let canon = pure(text, 2);
        for seed in 0..8 {
            let mut ch = Chooser::random(ChaCha8Rng::seed_from_u64(seed));
            let r = purify(&raw(text), 2, &mut ch);
            assert!(r.keys().all(Term::is_pure));
            // equality is checked after full normalization elsewhere
            assert!(!r.is_empty() || canon.is_empty());
        }
    }
}

//! Verification suites: relation instances, the composition triviality
//! matrix, the sign ledger and randomized confluence.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{parity_sign, Element};
use crate::error::Result;
use crate::expr::{AmbientContext, Expr};
use crate::forests::verify_theorem_sign;
use crate::operad::{classify, compose, slot_in_brace, triviality_witness, TypeClass};
use crate::rewrite::term::{push, Raw, Term};
use crate::rewrite::{element_to_expr, lower, normalize, normalize_raw, normalize_raw_with, Chooser};

/// Seed used by the randomized suites when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Case {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

impl Case {
    fn new(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Case { id: id.into(), pass, detail: detail.into() }
    }
}

pub fn all_pass(cases: &[Case]) -> bool {
    cases.iter().all(|c| c.pass)
}

fn v(l: u32) -> Term {
    Term::Var(l)
}

fn brace(ls: impl IntoIterator<Item = u32>) -> Term {
    Term::Brace(ls.into_iter().map(v).collect())
}

fn raw_of(parts: Vec<(i64, Term)>) -> Raw {
    let mut r = Raw::new();
    for (c, t) in parts {
        push(&mut r, t, BigInt::from(c));
    }
    r
}

/// A sample argument built on consecutive labels starting at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Singleton,
    Brace,
    BracketOfBrace,
}

impl Cell {
    pub const ALL: [Cell; 3] = [Cell::Singleton, Cell::Brace, Cell::BracketOfBrace];

    fn size(self, k: u32) -> u32 {
        match self {
            Cell::Singleton => 1,
            Cell::Brace => k,
            Cell::BracketOfBrace => k + 1,
        }
    }

    fn build(self, start: u32, k: u32) -> Term {
        match self {
            Cell::Singleton => v(start),
            Cell::Brace => brace(start..start + k),
            Cell::BracketOfBrace => Term::bracket(v(start), brace(start + 1..start + 1 + k)),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Cell::Singleton => "x",
            Cell::Brace => "brace",
            Cell::BracketOfBrace => "[x,brace]",
        }
    }
}

/// Canonical relation instances in ambient `(d, k)`: each combination must
/// normalize to zero.
pub fn relation_instances(d: u32, k: u32) -> Vec<(String, AmbientContext, Raw)> {
    let di = d as i64;
    let ctx = |n: u32| AmbientContext::new(d, k, n).expect("valid context");
    let mut out = Vec::new();

    for j in 1..k {
        let mut ls: Vec<u32> = (1..=k).collect();
        ls.swap(j as usize - 1, j as usize);
        let r = raw_of(vec![(1, brace(ls)), (-parity_sign(di) as i64, brace(1..=k))]);
        out.push((format!("symmetry swap {j}<->{}", j + 1), ctx(k), r));
    }

    let n = k + 1;
    let jac = (1..=n)
        .map(|i| (parity_sign((i as i64 - 1) * di) as i64, Term::bracket(v(i), brace((1..=n).filter(|&j| j != i)))))
        .collect();
    out.push(("generalized jacobi".into(), ctx(n), raw_of(jac)));

    let o: Vec<u32> = (1..k).collect();
    let with = |extra: Term| {
        let mut args: Vec<Term> = o.iter().map(|&l| v(l)).collect();
        args.push(extra);
        Term::Brace(args)
    };
    let r = raw_of(vec![
        (1, with(Term::Product(vec![v(k), v(k + 1)]))),
        (-1, Term::Product(vec![v(k), with(v(k + 1))])),
        (-1, Term::Product(vec![with(v(k)), v(k + 1)])),
    ]);
    out.push(("leibniz product".into(), ctx(k + 1), r));
    let r = raw_of(vec![
        (1, with(Term::bracket(v(k), v(k + 1)))),
        (-parity_sign(di) as i64, Term::bracket(with(v(k + 1)), v(k))),
        (-1, Term::bracket(with(v(k)), v(k + 1))),
    ]);
    out.push(("leibniz bracket".into(), ctx(k + 1), r));

    // generalized Leibniz with composite Y and Z
    let s = (k as i64 - 1) * di - 1;
    for cy in Cell::ALL {
        for cz in Cell::ALL {
            let y = cy.build(k, k);
            let z = cz.build(k + cy.size(k), k);
            let n = k - 1 + cy.size(k) + cz.size(k);
            let dy = y.degree(di);
            let r = raw_of(vec![
                (1, with(Term::Product(vec![y.clone(), z.clone()]))),
                (-parity_sign(dy * s) as i64, Term::product(vec![y.clone(), with(z.clone())])),
                (-1, Term::product(vec![with(y.clone()), z.clone()])),
            ]);
            out.push((format!("generalized leibniz product Y={} Z={}", cy.name(), cz.name()), ctx(n), r));
            let r = raw_of(vec![
                (1, with(Term::bracket(y.clone(), z.clone()))),
                (-parity_sign((dy + di - 1) * s) as i64, Term::bracket(y.clone(), with(z.clone()))),
                (-1, Term::bracket(with(y), z)),
            ]);
            out.push((format!("generalized leibniz bracket Y={} Z={}", cy.name(), cz.name()), ctx(n), r));
        }
    }

    // the two forms of the nested-brace expansion, in ambient k = k1 + k2 - 2
    for k1 in 3..k {
        let k2 = k + 2 - k1;
        if k2 < 3 {
            continue;
        }
        let n = k1 + k2 - 1;
        let a = k1 as i64;
        let term_i = |i: u32| Term::bracket(v(i), brace((1..=n).filter(|&j| j != i)));
        let lhs = Term::Brace((1..k1).map(v).chain([brace(k1..=n)]).collect());
        let mut first = vec![(1, lhs.clone())];
        let mut second = vec![(1, lhs)];
        let mut diff = Vec::new();
        for i in 1..=n {
            let c = parity_sign((a - 1) * di + (i as i64 - 1) * di) as i64;
            if i < k1 {
                first.push((c, term_i(i)));
                diff.push((-c, term_i(i)));
            } else {
                second.push((-c, term_i(i)));
                diff.push((-c, term_i(i)));
            }
        }
        out.push((format!("nested brace first form k1={k1} k2={k2}"), ctx(n), raw_of(first)));
        out.push((format!("nested brace second form k1={k1} k2={k2}"), ctx(n), raw_of(second)));
        out.push((format!("difference of the two forms k1={k1} k2={k2}"), ctx(n), raw_of(diff)));
    }
    out
}

pub fn relations_suite(ds: &[u32], ks: &[u32]) -> Vec<Case> {
    let jobs: Vec<(u32, u32)> = ds.iter().flat_map(|&d| ks.iter().map(move |&k| (d, k))).collect();
    jobs.par_iter()
        .flat_map_iter(|&(d, k)| {
            relation_instances(d, k).into_iter().map(move |(name, ctx, raw)| {
                let r = normalize_raw(&raw, &ctx);
                Case::new(format!("d={d} k={k} n={} {name}", ctx.n), r.is_zero(), r.to_string())
            })
        })
        .collect()
}

/// Representatives of each class in ambient `(d, k)`.
pub fn representatives(d: u32, k: u32) -> Vec<(String, Element)> {
    let mut texts: Vec<(u32, String)> = vec![(2, "x1*x2".into()), (3, "x2*x1*x3".into())];
    let b = |from: u32| (from..from + k).map(|l| format!("x{l}")).collect::<Vec<_>>().join(",");
    texts.push((k, format!("{{{}}}", b(1))));
    texts.push((k + 1, format!("{{{}}}*x{}", b(1), k + 1)));
    texts.push((k + 1, format!("[x{},{{{}}}]", k + 1, b(1))));
    texts.push((k + 2, format!("x{}*[{{{}}},x{}]", k + 2, b(1), k + 1)));
    texts.push((2 * k, format!("{{{}}}*{{{}}}", b(1), b(k + 1))));
    texts.push((2 * k, format!("[{{{}}},{{{}}}]", b(1), b(k + 1))));
    texts
        .into_iter()
        .map(|(n, t)| {
            let ctx = AmbientContext::new(d, k, n).expect("valid context");
            let e = crate::expr::parse(&t, &ctx).expect("representative parses");
            (t, normalize(&e, &ctx).expect("representative normalizes"))
        })
        .collect()
}

pub fn composition_suite(ds: &[u32], ks: &[u32]) -> Vec<Case> {
    let mut jobs = Vec::new();
    for &d in ds {
        for &k1 in ks {
            for &k2 in ks {
                let ra = representatives(d, k1);
                let rb = representatives(d, k2);
                for (ta, a) in &ra {
                    for (tb, b) in &rb {
                        for i in 1..=a.ctx.n {
                            jobs.push((d, k1, k2, ta.clone(), a.clone(), i, tb.clone(), b.clone()));
                        }
                    }
                }
            }
        }
    }
    jobs.par_iter()
        .map(|(d, k1, k2, ta, a, i, tb, b)| {
            let id = format!("d={d} k1={k1} k2={k2} {ta} o{i} {tb}");
            match composition_case(a, *i, b) {
                Ok((ca, cb, inside, expected_zero, got)) => {
                    let pass = expected_zero == got.is_zero()
                        && (got.is_zero() || got.degree() == Some(a.degree().unwrap() + b.degree().unwrap()));
                    let detail = format!(
                        "{ca} o {cb}{} expected {} got {}",
                        if inside { " (inside brace)" } else { "" },
                        if expected_zero { "0" } else { "nonzero" },
                        if got.is_zero() { "0".to_string() } else { format!("{} terms", got.len()) }
                    );
                    Case::new(id, pass, detail)
                }
                Err(e) => Case::new(id, false, e.to_string()),
            }
        })
        .collect()
}

fn composition_case(a: &Element, i: u32, b: &Element) -> Result<(TypeClass, TypeClass, bool, bool, Element)> {
    let ca = classify(a)?;
    let cb = classify(b)?;
    let inside = slot_in_brace(a, i);
    let got = compose(a, i, b)?;
    Ok((ca, cb, inside, triviality_witness(ca, cb, inside), got))
}

/// The worked compositions and the proof example.
pub fn worked_examples(d: u32) -> Vec<Case> {
    let el = |t: &str, k: u32, n: u32| {
        let ctx = AmbientContext::new(d, k, n).unwrap();
        normalize(&crate::expr::parse(t, &ctx).unwrap(), &ctx).unwrap()
    };
    let a = el("[{x1,x2,x3},x4]*x5", 3, 5);
    let b = el("{x1,x2,x3}", 3, 3);
    let mut out = Vec::new();
    for (i, want_zero) in [(5, true), (4, true), (3, false)] {
        let r = compose(&a, i, &b).unwrap();
        out.push(Case::new(format!("d={d} [{{x1,x2,x3}},x4]*x5 o{i} {{x1,x2,x3}}"), r.is_zero() == want_zero, r.to_string()));
    }
    let a = el("[{x1,x2,x3},{x4,x5,x6}]", 3, 6);
    let b = el("{x1,x2,x3,x4}", 4, 4);
    let r = compose(&a, 2, &b).unwrap();
    out.push(Case::new(format!("d={d} [{{x1,x2,x3}},{{x4,x5,x6}}] o2 {{x1,x2,x3,x4}}"), r.is_zero() && r.ctx.k == 5, r.to_string()));
    out
}

pub fn signs_suite(ks: &[u32], ds: &[u32]) -> Vec<Case> {
    let mut out = Vec::new();
    for &k1 in ks {
        for &k2 in ks {
            for &d in ds {
                let id = format!("k1={k1} k2={k2} d={d}");
                match verify_theorem_sign(k1, k2, d as i64) {
                    Ok(t) => {
                        let detail = format!(
                            "right {:+} left {:+} claimed {:+}",
                            t.right.product, t.left.product, t.claimed
                        );
                        out.push(Case::new(id, t.agree, detail));
                    }
                    Err(e) => out.push(Case::new(id, false, e.to_string())),
                }
            }
        }
    }
    out
}

/// A random valid expression whose terms use every label `1..=n` once.
pub fn random_expr(ctx: &AmbientContext, rng: &mut ChaCha8Rng) -> Expr {
    loop {
        let terms = rng.gen_range(1..=2);
        let mut parts = Vec::new();
        for _ in 0..terms {
            let mut labels: Vec<u32> = (1..=ctx.n).collect();
            labels.shuffle(rng);
            let c: i64 = *[-2, -1, 1, 1, 2].choose(rng).unwrap();
            let t = random_over(&labels, ctx.k, rng, 0);
            parts.push(if c == 1 { t } else { Expr::scaled(c, t) });
        }
        let e = if parts.len() == 1 { parts.pop().unwrap() } else { Expr::Sum(parts) };
        if e.validate(ctx).is_ok() {
            return e;
        }
    }
}

fn split(labels: &[u32], parts: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    let mut cuts: Vec<usize> = (1..labels.len()).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::new();
    let mut start = 0;
    for c in cuts.into_iter().chain([labels.len()]) {
        out.push(labels[start..c].to_vec());
        start = c;
    }
    out
}

fn random_over(labels: &[u32], k: u32, rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    let n = labels.len();
    if n == 1 {
        return Expr::Var(labels[0]);
    }
    let flat = |ls: &[u32]| Expr::Brace(ls.iter().map(|&l| Expr::Var(l)).collect());
    if depth > 3 {
        return Expr::Product(labels.iter().map(|&l| Expr::Var(l)).collect());
    }
    match rng.gen_range(0..6) {
        0 if n >= 2 => {
            let parts = rng.gen_range(2..=n.min(3));
            Expr::Product(split(labels, parts, rng).iter().map(|p| random_over(p, k, rng, depth + 1)).collect())
        }
        1 | 2 => {
            let p = split(labels, 2, rng);
            Expr::bracket(random_over(&p[0], k, rng, depth + 1), random_over(&p[1], k, rng, depth + 1))
        }
        3 if n as u32 == k => flat(labels),
        _ => {
            let m = rng.gen_range(2..=n.min(k as usize));
            let p = split(labels, m, rng);
            let e = Expr::Brace(p.iter().map(|q| random_over(q, k, rng, depth + 1)).collect());
            if e.capacity() < k {
                e
            } else {
                Expr::Product(p.iter().map(|q| random_over(q, k, rng, depth + 1)).collect())
            }
        }
    }
}

/// Applies random sign-correct reorderings (brace arguments, product
/// factors, bracket sides) to every term.
pub fn perturb(raw: &Raw, d: i64, rng: &mut ChaCha8Rng) -> Raw {
    let mut out = Raw::new();
    for (t, c) in raw {
        let (s, t) = perturb_term(t, d, rng);
        push(&mut out, t, c * BigInt::from(s));
    }
    out
}

fn perturb_term(t: &Term, d: i64, rng: &mut ChaCha8Rng) -> (i32, Term) {
    match t {
        Term::Var(_) => (1, t.clone()),
        Term::Bracket(a, b) => {
            let (sa, a) = perturb_term(a, d, rng);
            let (sb, b) = perturb_term(b, d, rng);
            if rng.gen_bool(0.5) {
                let e = -parity_sign((a.degree(d) + d - 1) * (b.degree(d) + d - 1));
                (sa * sb * e, Term::bracket(b, a))
            } else {
                (sa * sb, Term::bracket(a, b))
            }
        }
        Term::Brace(xs) | Term::Product(xs) => {
            let is_brace = matches!(t, Term::Brace(_));
            let mut sign = 1;
            let mut items: Vec<Term> = xs
                .iter()
                .map(|x| {
                    let (s, x) = perturb_term(x, d, rng);
                    sign *= s;
                    x
                })
                .collect();
            for _ in 0..items.len() {
                let j = rng.gen_range(0..items.len() - 1);
                let koszul = parity_sign(items[j].degree(d) * items[j + 1].degree(d));
                sign *= if is_brace { koszul * parity_sign(d) } else { koszul };
                items.swap(j, j + 1);
            }
            (sign, if is_brace { Term::Brace(items) } else { Term::Product(items) })
        }
    }
}

/// Canonical pipeline versus randomized choices on perturbed input, and
/// idempotence, over `count` random expressions.
pub fn confluence_cell(d: u32, k: u32, count: usize, seed: u64) -> Vec<Case> {
    (0..count)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((d as u64) << 40) ^ ((k as u64) << 32) ^ idx as u64);
            let n = rng.gen_range(k..=k + 3);
            let ctx = AmbientContext::new(d, k, n).unwrap();
            let e = random_expr(&ctx, &mut rng);
            let id = format!("d={d} k={k} #{idx}");
            let canon = normalize(&e, &ctx).unwrap();
            let raw = perturb(&lower(&e, &ctx).unwrap(), d as i64, &mut rng);
            let mut ch = Chooser::random(ChaCha8Rng::seed_from_u64(rng.gen()));
            let other = normalize_raw_with(&raw, &ctx, &mut ch);
            let idem = canon.is_zero() || normalize(&element_to_expr(&canon), &ctx).unwrap() == canon;
            let pass = other == canon && idem;
            let detail = if pass { String::new() } else { format!("{} => {canon} vs {other}", crate::expr::print(&e)) };
            Case::new(id, pass, detail)
        })
        .collect()
}

pub fn confluence_suite(ds: &[u32], ks: &[u32], count: usize, seed: u64) -> Vec<Case> {
    ds.iter().flat_map(|&d| ks.iter().flat_map(move |&k| confluence_cell(d, k, count, seed))).collect()
}

/// An arbitrary parser-shaped AST, not necessarily valid in any ambient.
pub fn random_ast(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return Expr::Var(rng.gen_range(1..=40));
    }
    let many = |rng: &mut ChaCha8Rng, lo: usize, hi: usize| -> Vec<Expr> {
        let m = rng.gen_range(lo..=hi);
        (0..m).map(|_| random_ast(rng, depth - 1)).collect()
    };
    match rng.gen_range(0..5) {
        0 => Expr::Brace(many(rng, 2, 4)),
        1 => Expr::bracket(random_ast(rng, depth - 1), random_ast(rng, depth - 1)),
        2 => Expr::Product(many(rng, 2, 3)),
        3 => {
            let c: BigInt = if rng.gen_bool(0.1) {
                BigInt::from(rng.gen::<i64>()) * BigInt::from(rng.gen::<i64>())
            } else {
                BigInt::from(rng.gen_range(-5i64..=5))
            };
            Expr::scaled(c, random_ast(rng, depth - 1))
        }
        _ => Expr::Sum(many(rng, 2, 3)),
    }
}

/// `parse(print(e)) == e` over `count` arbitrary ASTs.
pub fn roundtrip_suite(count: usize, seed: u64) -> Vec<Case> {
    (0..count)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x7e57 << 32) ^ idx as u64);
            let e = random_ast(&mut rng, 5);
            let text = crate::expr::print(&e);
            let back = crate::expr::parse_unchecked(&text);
            let pass = back.as_ref().ok() == Some(&e);
            let detail = if pass { String::new() } else { format!("{text} => {back:?}") };
            Case::new(format!("roundtrip #{idx}"), pass, detail)
        })
        .collect()
}

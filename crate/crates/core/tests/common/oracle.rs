//! Brute-force rank oracle: all raw monomials of a given arity modulo the
//! full relation set, rank computed over two large primes.

use std::collections::{BTreeMap, HashMap};

use overlap_operad::algebra::{parity_sign, Atom, BracketTree, Factor, Monomial};
use overlap_operad::basis::set_partitions;
use overlap_operad::rewrite::normalize_raw;
use overlap_operad::rewrite::term::{push, Raw};
use overlap_operad::AmbientContext;

type Row = BTreeMap<Monomial, i64>;

fn leaf_single(l: u32) -> BracketTree {
    BracketTree::Leaf(Atom::Singleton(l))
}

/// All ordered binary trees whose leaves are exactly `atoms`.
fn ordered_trees(atoms: &[BracketTree]) -> Vec<BracketTree> {
    if atoms.len() == 1 {
        return vec![atoms[0].clone()];
    }
    let mut out = Vec::new();
    let m = atoms.len();
    for mask in 1u32..(1 << m) - 1 {
        let left: Vec<BracketTree> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| atoms[i].clone()).collect();
        let right: Vec<BracketTree> = (0..m).filter(|i| mask >> i & 1 == 0).map(|i| atoms[i].clone()).collect();
        for l in ordered_trees(&left) {
            for r in ordered_trees(&right) {
                out.push(BracketTree::node(l.clone(), r));
            }
        }
    }
    out
}

/// Raw trees on a block: atoms are singletons and k-braces.
fn raw_trees(block: &[u32], k: usize) -> Vec<BracketTree> {
    let mut out = Vec::new();
    for parts in set_partitions(block) {
        if parts.iter().any(|p| p.len() != 1 && p.len() != k) {
            continue;
        }
        let atoms: Vec<BracketTree> = parts
            .iter()
            .map(|p| {
                if p.len() == 1 {
                    leaf_single(p[0])
                } else {
                    BracketTree::Leaf(Atom::FlatBrace(p.clone()))
                }
            })
            .collect();
        out.extend(ordered_trees(&atoms).into_iter().filter(|t| t.has_brace() && !t.has_brace_free_node()));
    }
    out
}

/// Every raw monomial: factors sorted by least label, trees fully raw.
pub fn raw_monomials(ctx: &AmbientContext) -> Vec<Monomial> {
    let labels: Vec<u32> = (1..=ctx.n).collect();
    let k = ctx.k as usize;
    let mut out = Vec::new();
    for partition in set_partitions(&labels) {
        let mut acc: Vec<Vec<Factor>> = vec![Vec::new()];
        for block in &partition {
            let options: Vec<Factor> = if block.len() == 1 {
                vec![Factor::Single(block[0])]
            } else {
                raw_trees(block, k).into_iter().map(Factor::Tree).collect()
            };
            let mut next = Vec::new();
            for a in &acc {
                for o in &options {
                    let mut a = a.clone();
                    a.push(o.clone());
                    next.push(a);
                }
            }
            acc = next;
        }
        out.extend(acc.into_iter().map(Monomial::new));
    }
    out
}

fn node_paths(t: &BracketTree, prefix: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
    if let BracketTree::Node(a, b) = t {
        out.push(prefix.clone());
        prefix.push(false);
        node_paths(a, prefix, out);
        prefix.pop();
        prefix.push(true);
        node_paths(b, prefix, out);
        prefix.pop();
    }
}

fn at<'a>(t: &'a BracketTree, path: &[bool]) -> &'a BracketTree {
    match (t, path.split_first()) {
        (_, None) => t,
        (BracketTree::Node(a, b), Some((&right, rest))) => at(if right { b } else { a }, rest),
        _ => unreachable!(),
    }
}

fn replace(t: &BracketTree, path: &[bool], new: BracketTree) -> BracketTree {
    match (t, path.split_first()) {
        (_, None) => new,
        (BracketTree::Node(a, b), Some((&right, rest))) => {
            if right {
                BracketTree::node((**a).clone(), replace(b, rest, new))
            } else {
                BracketTree::node(replace(a, rest, new), (**b).clone())
            }
        }
        _ => unreachable!(),
    }
}

fn shifted(t: &BracketTree, d: i64) -> i64 {
    t.degree(d) + d - 1
}

/// Local relations at one node, each as a list of replacement subtrees.
fn local_relations(t: &BracketTree, d: i64) -> Vec<Vec<(i64, BracketTree)>> {
    let mut rels = Vec::new();
    if let BracketTree::Node(a, b) = t {
        let s = -(parity_sign(shifted(a, d) * shifted(b, d)) as i64);
        rels.push(vec![(1, t.clone()), (-s, BracketTree::node((**b).clone(), (**a).clone()))]);
        if let BracketTree::Node(b1, c) = &**b {
            let e = parity_sign(shifted(a, d) * shifted(b1, d)) as i64;
            rels.push(vec![
                (1, t.clone()),
                (-1, BracketTree::node(BracketTree::node((**a).clone(), (**b1).clone()), (**c).clone())),
                (-e, BracketTree::node((**b1).clone(), BracketTree::node((**a).clone(), (**c).clone()))),
            ]);
        }
        if let (BracketTree::Leaf(Atom::Singleton(x)), BracketTree::Leaf(Atom::FlatBrace(ls))) = (&**a, &**b) {
            let mut all = ls.clone();
            all.push(*x);
            all.sort_unstable();
            let rel = all
                .iter()
                .enumerate()
                .map(|(i, &ti)| {
                    let rest: Vec<u32> = all.iter().copied().filter(|&y| y != ti).collect();
                    (
                        parity_sign(i as i64 * d) as i64,
                        BracketTree::node(leaf_single(ti), BracketTree::Leaf(Atom::FlatBrace(rest))),
                    )
                })
                .collect();
            rels.push(rel);
        }
    }
    rels
}

/// All relation rows among raw monomials of arity `ctx.n`.
pub fn relation_rows(ctx: &AmbientContext, columns: &[Monomial]) -> Vec<Row> {
    let d = ctx.dim();
    let mut rows = Vec::new();
    for m in columns {
        for (fi, f) in m.factors.iter().enumerate() {
            let Factor::Tree(t) = f else { continue };
            let mut paths = Vec::new();
            node_paths(t, &mut Vec::new(), &mut paths);
            for p in paths {
                for rel in local_relations(at(t, &p), d) {
                    let mut row = Row::new();
                    for (c, sub) in rel {
                        let nt = replace(t, &p, sub);
                        if nt.has_brace_free_node() {
                            continue;
                        }
                        let mut factors = m.factors.clone();
                        factors[fi] = Factor::Tree(nt);
                        *row.entry(Monomial::new(factors)).or_insert(0) += c;
                    }
                    row.retain(|_, c| *c != 0);
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    rows
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rank over GF(p) by incremental sparse elimination.
pub fn rank_mod(rows: &[Vec<(usize, i64)>], p: u64) -> usize {
    let mut pivots: HashMap<usize, BTreeMap<usize, u64>> = HashMap::new();
    for r in rows {
        let mut v: BTreeMap<usize, u64> = BTreeMap::new();
        for &(c, x) in r {
            let x = x.rem_euclid(p as i64) as u64;
            if x != 0 {
                v.insert(c, x);
            }
        }
        while let Some((&lead, &lv)) = v.iter().next() {
            match pivots.get(&lead) {
                None => {
                    let inv = pow_mod(lv, p - 2, p);
                    for x in v.values_mut() {
                        *x = *x * inv % p;
                    }
                    pivots.insert(lead, v);
                    break;
                }
                Some(piv) => {
                    for (&c, &x) in piv {
                        let e = v.entry(c).or_insert(0);
                        *e = (*e + p - lv * x % p) % p;
                        if *e == 0 {
                            v.remove(&c);
                        }
                    }
                }
            }
        }
    }
    pivots.len()
}

pub struct OracleReport {
    pub degree: i64,
    pub columns: usize,
    pub rank: usize,
    pub dimension: usize,
}

/// Dimension per degree, plus the relation rows for consistency checks.
pub fn oracle(ctx: &AmbientContext) -> (Vec<OracleReport>, Vec<Row>) {
    let d = ctx.dim();
    let columns = raw_monomials(ctx);
    let rows = relation_rows(ctx, &columns);
    let mut by_degree: BTreeMap<i64, Vec<&Monomial>> = BTreeMap::new();
    for m in &columns {
        by_degree.entry(m.degree(d)).or_default().push(m);
    }
    let mut reports = Vec::new();
    for (deg, cols) in by_degree {
        let index: HashMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let sparse: Vec<Vec<(usize, i64)>> = rows
            .iter()
            .filter(|r| r.keys().next().map(|m| m.degree(d)) == Some(deg))
            .map(|r| r.iter().map(|(m, c)| (index[m], *c)).collect())
            .collect();
        let r1 = rank_mod(&sparse, 2_147_483_647);
        let r2 = rank_mod(&sparse, 1_000_000_007);
        let rank = r1.max(r2);
        reports.push(OracleReport { degree: deg, columns: cols.len(), rank, dimension: cols.len() - rank });
    }
    (reports, rows)
}

/// Whether the library sends the relation row to zero.
pub fn row_vanishes(ctx: &AmbientContext, row: &Row) -> bool {
    let mut raw = Raw::new();
    for (m, c) in row {
        push(&mut raw, m.to_term(), (*c).into());
    }
    normalize_raw(&raw, ctx).is_zero()
}

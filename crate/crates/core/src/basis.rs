//! Enumeration of the canonical monomials, the normal forms the normalizer
//! can produce.

use crate::algebra::{Atom, BracketTree, Factor, Monomial};
use crate::expr::AmbientContext;

/// All set partitions of `items`; each block keeps the order of `items`.
pub fn set_partitions(items: &[u32]) -> Vec<Vec<Vec<u32>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let rest = &items[1..];
    let mut out = Vec::new();
    for mask in 0u64..(1 << rest.len()) {
        let mut block = vec![first];
        let mut others = Vec::new();
        for (i, &x) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                block.push(x);
            } else {
                others.push(x);
            }
        }
        for mut p in set_partitions(&others) {
            p.insert(0, block.clone());
            out.push(p);
        }
    }
    out
}

/// `size`-subsets of `items` containing `items[0]`.
fn subsets_with_first(items: &[u32], size: usize) -> Vec<Vec<u32>> {
    let rest = &items[1..];
    let mut out = Vec::new();
    for mask in 0u64..(1 << rest.len()) {
        if mask.count_ones() as usize + 1 != size {
            continue;
        }
        let mut s = vec![items[0]];
        s.extend(rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
        out.push(s);
    }
    out
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.push(p);
        }
    }
    out
}

fn generator(singles: &[u32], core: Atom) -> BracketTree {
    let mut t = BracketTree::Leaf(core);
    for &s in singles.iter().rev() {
        t = BracketTree::node(BracketTree::Leaf(Atom::Singleton(s)), t);
    }
    t
}

/// Reduced generators on the label set `u` (ascending).
fn generators(u: &[u32], k: usize) -> Vec<BracketTree> {
    subsets_with_first(u, k)
        .into_iter()
        .map(|b| {
            let singles: Vec<u32> = u.iter().copied().filter(|x| !b.contains(x)).collect();
            generator(&singles, Atom::FlatBrace(b))
        })
        .collect()
}

/// Canonical trees on one block of labels.
fn trees(block: &[u32], k: u32) -> Vec<BracketTree> {
    let mut out = Vec::new();
    if k == 2 {
        let tail = BracketTree::Leaf(Atom::Singleton(block[0]));
        let others: Vec<BracketTree> =
            block[1..].iter().map(|&l| BracketTree::Leaf(Atom::Singleton(l))).collect();
        for order in permutations(&others) {
            out.push(right_normed(&order, tail.clone()));
        }
        return out;
    }
    let k = k as usize;
    for parts in set_partitions(block) {
        if parts.iter().any(|p| p.len() < k) {
            continue;
        }
        // every choice of a reduced generator per part
        let mut choices: Vec<Vec<BracketTree>> = vec![Vec::new()];
        for p in &parts {
            let gens = generators(p, k);
            let mut next = Vec::new();
            for c in &choices {
                for g in &gens {
                    let mut c = c.clone();
                    c.push(g.clone());
                    next.push(c);
                }
            }
            choices = next;
        }
        for gens in choices {
            // parts[0] holds the least label of the block
            let tail = gens[0].clone();
            for order in permutations(&gens[1..]) {
                out.push(right_normed(&order, tail.clone()));
            }
        }
    }
    out
}

fn right_normed(outer: &[BracketTree], tail: BracketTree) -> BracketTree {
    let mut t = tail;
    for g in outer.iter().rev() {
        t = BracketTree::node(g.clone(), t);
    }
    t
}

/// Canonical monomials in ambient `ctx`, optionally of one degree, sorted.
pub fn enumerate(ctx: &AmbientContext, degree: Option<i64>) -> Vec<Monomial> {
    let d = ctx.dim();
    let labels: Vec<u32> = (1..=ctx.n).collect();
    let min_tree = if ctx.k == 2 { 2 } else { ctx.k as usize };
    let mut out = Vec::new();
    for partition in set_partitions(&labels) {
        if partition.iter().any(|b| b.len() > 1 && b.len() < min_tree) {
            continue;
        }
        let mut acc: Vec<Vec<Factor>> = vec![Vec::new()];
        for block in &partition {
            let options: Vec<Factor> = if block.len() == 1 {
                vec![Factor::Single(block[0])]
            } else {
                trees(block, ctx.k).into_iter().map(Factor::Tree).collect()
            };
            let mut next = Vec::with_capacity(acc.len() * options.len());
            for a in &acc {
                for o in &options {
                    let mut a = a.clone();
                    a.push(o.clone());
                    next.push(a);
                }
            }
            acc = next;
        }
        for factors in acc {
            let m = Monomial::new(factors);
            if degree.is_none_or(|g| m.degree(d) == g) {
                out.push(m);
            }
        }
    }
    out.sort();
    out
}

/// Degrees that occur, with the number of canonical monomials in each.
pub fn counts_by_degree(ctx: &AmbientContext) -> Vec<(i64, usize)> {
    let d = ctx.dim();
    let mut counts = std::collections::BTreeMap::new();
    for m in enumerate(ctx, None) {
        *counts.entry(m.degree(d)).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}

//! Brackets: Leibniz expansion into products of bracket trees, the filtration
//! kill, and the normal form of a single tree.
//!
//! For k >= 3 a surviving tree is a Lie word in *generators*
//! `[x_i1,[x_i2,..[x_ir, B]]]` (one flat brace `B`, singletons ascending).
//! Singleton brackets commute up to `(-1)^(d-1)` because `[x_i,x_j]` dies.
//! A generator is reduced when the least label of its support sits in `B`;
//! otherwise one Jacobi instance puts it there. The Lie word is written
//! right-normed with the generator holding the least label as the tail,
//! which is a basis of the multilinear free Lie algebra.
//! For k = 2 the generators are the singletons themselves.

use crate::algebra::{parity_sign, permutation_sign, Atom, BracketTree};
use crate::rewrite::term::Term;

/// Products of bracket trees with signs.
pub type Expansion = Vec<(i32, Vec<BracketTree>)>;

/// Expands a pure term into products of bracket trees via Leibniz.
pub fn expand(t: &Term, d: i64) -> Expansion {
    match t {
        Term::Var(l) => vec![(1, vec![BracketTree::Leaf(Atom::Singleton(*l))])],
        Term::Brace(args) => {
            let ls = args
                .iter()
                .map(|a| match a {
                    Term::Var(l) => *l,
                    _ => panic!("expand requires flat braces"),
                })
                .collect();
            vec![(1, vec![BracketTree::Leaf(Atom::FlatBrace(ls))])]
        }
        Term::Product(fs) => {
            let mut acc: Expansion = vec![(1, Vec::new())];
            for f in fs {
                let ef = expand(f, d);
                let mut next = Vec::with_capacity(acc.len() * ef.len());
                for (c, p) in &acc {
                    for (c2, q) in &ef {
                        let mut v = p.clone();
                        v.extend(q.iter().cloned());
                        next.push((c * c2, v));
                    }
                }
                acc = next;
            }
            acc
        }
        Term::Bracket(a, b) => {
            let ea = expand(a, d);
            let eb = expand(b, d);
            let mut out = Vec::new();
            for (ca, xs) in &ea {
                for (cb, ys) in &eb {
                    for (c, p) in bracket_of_products(xs, ys, d) {
                        out.push((ca * cb * c, p));
                    }
                }
            }
            out
        }
    }
}

/// `[A_1..A_p, B_1..B_q]` as the sum over `i, j` of
/// `(A without A_i) [A_i, B_j] (B without B_j)`, signed by the Koszul sign of
/// moving the blocks into that order.
fn bracket_of_products(xs: &[BracketTree], ys: &[BracketTree], d: i64) -> Expansion {
    let p = xs.len();
    let q = ys.len();
    let mut degrees: Vec<i64> = xs.iter().map(|x| x.degree(d)).collect();
    degrees.push(d - 1);
    degrees.extend(ys.iter().map(|y| y.degree(d)));
    let mut out = Vec::with_capacity(p * q);
    for i in 0..p {
        for j in 0..q {
            let mut target: Vec<usize> = (0..p).filter(|&a| a != i).collect();
            target.push(i);
            target.push(p);
            target.push(p + 1 + j);
            target.extend((0..q).filter(|&b| b != j).map(|b| p + 1 + b));
            let sign = permutation_sign(&degrees, &target);
            let mut factors: Vec<BracketTree> =
                xs.iter().enumerate().filter(|(a, _)| *a != i).map(|(_, x)| x.clone()).collect();
            factors.push(BracketTree::node(xs[i].clone(), ys[j].clone()));
            factors.extend(ys.iter().enumerate().filter(|(b, _)| *b != j).map(|(_, y)| y.clone()));
            out.push((sign, factors));
        }
    }
    out
}

/// Whether a product of trees vanishes in ambient `k`.
pub fn dies(factors: &[BracketTree], d: i64, k: u32) -> bool {
    let degree: i64 = factors.iter().map(|f| f.degree(d)).sum();
    if degree == 0 {
        return false;
    }
    let short_brace = factors.iter().any(|f| f.braces().iter().any(|b| (b.len() as u32) < k));
    if short_brace {
        return true;
    }
    k >= 3 && factors.iter().any(BracketTree::has_brace_free_node)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Gen {
    /// Outermost first, ascending.
    singles: Vec<u32>,
    core: Atom,
}

impl Gen {
    fn degree(&self, d: i64) -> i64 {
        self.core.degree(d) + self.singles.len() as i64 * (d - 1)
    }

    fn min_label(&self) -> u32 {
        self.singles.iter().copied().chain([self.core.min_label()]).min().unwrap()
    }

    fn to_tree(&self) -> BracketTree {
        let mut t = BracketTree::Leaf(self.core.clone());
        for &s in self.singles.iter().rev() {
            t = BracketTree::node(BracketTree::Leaf(Atom::Singleton(s)), t);
        }
        t
    }

    /// `[x_s, self]` with `s` sorted into place.
    fn ad(&self, s: u32, d: i64) -> (i32, Gen) {
        let below = self.singles.iter().filter(|&&i| i < s).count() as i64;
        let mut singles = self.singles.clone();
        let pos = singles.partition_point(|&i| i < s);
        singles.insert(pos, s);
        (parity_sign((d - 1) * below), Gen { singles, core: self.core.clone() })
    }

    /// Generalized Jacobi: make the least label of the support lie in the core.
    fn reduce(&self, d: i64) -> Vec<(i32, Gen)> {
        let brace = match &self.core {
            Atom::FlatBrace(ls) => ls,
            Atom::Singleton(_) => return vec![(1, self.clone())],
        };
        let m = match self.singles.first() {
            Some(&m) if m < brace[0] => m,
            _ => return vec![(1, self.clone())],
        };
        let rest: Vec<u32> = self.singles[1..].to_vec();
        let r = self.singles.len() as i64;
        // carry ad_m innermost past the other r - 1 operators
        let move_sign = parity_sign((d - 1) * (r - 1));
        let mut t: Vec<u32> = brace.clone();
        t.insert(0, m);
        let mut out = Vec::with_capacity(t.len() - 1);
        for j in 2..=t.len() {
            let tj = t[j - 1];
            let core: Vec<u32> = t.iter().copied().filter(|&x| x != tj).collect();
            let above = rest.iter().filter(|&&i| i > tj).count() as i64;
            let sign = move_sign * -parity_sign((j as i64 - 1) * d) * parity_sign((d - 1) * above);
            let mut singles = rest.clone();
            let pos = singles.partition_point(|&i| i < tj);
            singles.insert(pos, tj);
            out.push((sign, Gen { singles, core: Atom::FlatBrace(core) }));
        }
        out
    }
}

#[derive(Debug, Clone)]
enum GenTree {
    Gen(Gen),
    Node(Box<GenTree>, Box<GenTree>),
}

impl GenTree {
    fn node(a: GenTree, b: GenTree) -> Self {
        GenTree::Node(Box::new(a), Box::new(b))
    }

    fn degree(&self, d: i64) -> i64 {
        match self {
            GenTree::Gen(g) => g.degree(d),
            GenTree::Node(a, b) => a.degree(d) + b.degree(d) + d - 1,
        }
    }

    fn shifted(&self, d: i64) -> i64 {
        self.degree(d) + d - 1
    }

    fn contains(&self, label: u32) -> bool {
        match self {
            GenTree::Gen(g) => g.min_label() == label,
            GenTree::Node(a, b) => a.contains(label) || b.contains(label),
        }
    }

    fn min_label(&self) -> u32 {
        match self {
            GenTree::Gen(g) => g.min_label(),
            GenTree::Node(a, b) => a.min_label().min(b.min_label()),
        }
    }
}

fn is_singleton(t: &BracketTree) -> Option<u32> {
    match t {
        BracketTree::Leaf(Atom::Singleton(s)) => Some(*s),
        _ => None,
    }
}

/// Rewrites a surviving tree as a combination of Lie words in generators.
fn to_gen_tree(t: &BracketTree, d: i64, poisson: bool) -> Vec<(i32, GenTree)> {
    match t {
        BracketTree::Leaf(a) => {
            if !poisson && matches!(a, Atom::Singleton(_)) {
                return Vec::new();
            }
            vec![(1, GenTree::Gen(Gen { singles: Vec::new(), core: a.clone() }))]
        }
        BracketTree::Node(l, r) if poisson => {
            let mut out = Vec::new();
            for (c1, a) in to_gen_tree(l, d, true) {
                for (c2, b) in to_gen_tree(r, d, true) {
                    out.push((c1 * c2, GenTree::node(a.clone(), b)));
                }
            }
            out
        }
        BracketTree::Node(l, r) => match (is_singleton(l), is_singleton(r)) {
            (Some(_), Some(_)) => Vec::new(),
            (Some(s), None) => ad_tree(s, to_gen_tree(r, d, false), d),
            (None, Some(s)) => {
                // [L, x_s] = -(-1)^{|L|'(d-1)} [x_s, L]
                let sign = -parity_sign((l.degree(d) + d - 1) * (d - 1));
                ad_tree(s, to_gen_tree(l, d, false), d)
                    .into_iter()
                    .map(|(c, g)| (c * sign, g))
                    .collect()
            }
            (None, None) => {
                let mut out = Vec::new();
                for (c1, a) in to_gen_tree(l, d, false) {
                    for (c2, b) in to_gen_tree(r, d, false) {
                        out.push((c1 * c2, GenTree::node(a.clone(), b)));
                    }
                }
                out
            }
        },
    }
}

fn ad_tree(s: u32, ts: Vec<(i32, GenTree)>, d: i64) -> Vec<(i32, GenTree)> {
    let mut out = Vec::new();
    for (c, t) in ts {
        for (c2, g) in ad(s, &t, d) {
            out.push((c * c2, g));
        }
    }
    out
}

/// `ad_{x_s}` acting as a derivation of degree `d - 1`.
fn ad(s: u32, t: &GenTree, d: i64) -> Vec<(i32, GenTree)> {
    match t {
        GenTree::Gen(g) => {
            let (c, g) = g.ad(s, d);
            vec![(c, GenTree::Gen(g))]
        }
        GenTree::Node(a, b) => {
            let mut out = Vec::new();
            for (c, x) in ad(s, a, d) {
                out.push((c, GenTree::node(x, (**b).clone())));
            }
            let sign = parity_sign((d - 1) * a.shifted(d));
            for (c, y) in ad(s, b, d) {
                out.push((c * sign, GenTree::node((**a).clone(), y)));
            }
            out
        }
    }
}

type Word = Vec<Gen>;

/// `ad_T` as a combination of products of `ad_g`.
fn ad_words(t: &GenTree, d: i64) -> Vec<(i32, Word)> {
    match t {
        GenTree::Gen(g) => vec![(1, vec![g.clone()])],
        GenTree::Node(a, b) => {
            let wa = ad_words(a, d);
            let wb = ad_words(b, d);
            let swap = -parity_sign(a.shifted(d) * b.shifted(d));
            let mut out = Vec::with_capacity(2 * wa.len() * wb.len());
            for (ca, x) in &wa {
                for (cb, y) in &wb {
                    let mut w = x.clone();
                    w.extend(y.iter().cloned());
                    out.push((ca * cb, w));
                    let mut w = y.clone();
                    w.extend(x.iter().cloned());
                    out.push((ca * cb * swap, w));
                }
            }
            out
        }
    }
}

/// Right-normed expansion `[w_1,[w_2,..[w_p, tail]]]` where the tail is the
/// generator holding `least`.
fn right_normed(t: &GenTree, least: u32, d: i64) -> Vec<(i32, Word)> {
    match t {
        GenTree::Gen(_) => vec![(1, Vec::new())],
        GenTree::Node(a, b) => {
            let (outer, inner, sign) = if b.contains(least) {
                (a, b, 1)
            } else {
                (b, a, -parity_sign(a.shifted(d) * b.shifted(d)))
            };
            let mut out = Vec::new();
            for (c1, x) in ad_words(outer, d) {
                for (c2, y) in right_normed(inner, least, d) {
                    let mut w = x.clone();
                    w.extend(y);
                    out.push((sign * c1 * c2, w));
                }
            }
            out
        }
    }
}

fn tail_gen(t: &GenTree, least: u32) -> &Gen {
    match t {
        GenTree::Gen(g) => g,
        GenTree::Node(a, b) => {
            if a.contains(least) {
                tail_gen(a, least)
            } else {
                tail_gen(b, least)
            }
        }
    }
}

/// Which parts of the normal form to impose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Right-normed Lie words with sorted singleton operators.
    Comb,
    /// Additionally reduce every generator by the generalized Jacobi relation.
    Straighten,
}

/// Normal form of one surviving tree.
pub fn normal_tree(t: &BracketTree, d: i64, k: u32, stage: Stage) -> Vec<(i32, BracketTree)> {
    if let BracketTree::Leaf(_) = t {
        return vec![(1, t.clone())];
    }
    let poisson = k == 2;
    let mut out: Vec<(i32, BracketTree)> = Vec::new();
    for (c, gt) in to_gen_tree(t, d, poisson) {
        let least = gt.min_label();
        let tail = tail_gen(&gt, least).clone();
        for (c2, word) in right_normed(&gt, least, d) {
            let mut full = word;
            full.push(tail.clone());
            let mut choices: Vec<(i32, Vec<Gen>)> = vec![(c * c2, Vec::new())];
            for g in &full {
                let reduced =
                    if stage == Stage::Straighten { g.reduce(d) } else { vec![(1, g.clone())] };
                let mut next = Vec::with_capacity(choices.len() * reduced.len());
                for (a, prefix) in &choices {
                    for (b, h) in &reduced {
                        let mut p = prefix.clone();
                        p.push(h.clone());
                        next.push((a * b, p));
                    }
                }
                choices = next;
            }
            for (coef, gens) in choices {
                let mut it = gens.iter().rev();
                let mut tree = it.next().unwrap().to_tree();
                for g in it {
                    tree = BracketTree::node(g.to_tree(), tree);
                }
                out.push((coef, tree));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(l: u32) -> BracketTree {
        BracketTree::Leaf(Atom::Singleton(l))
    }

    fn b(ls: &[u32]) -> BracketTree {
        BracketTree::Leaf(Atom::FlatBrace(ls.to_vec()))
    }

    fn n(x: BracketTree, y: BracketTree) -> BracketTree {
        BracketTree::node(x, y)
    }

    fn collect(v: Vec<(i32, BracketTree)>) -> std::collections::BTreeMap<BracketTree, i32> {
        let mut m = std::collections::BTreeMap::new();
        for (c, t) in v {
            *m.entry(t).or_insert(0) += c;
        }
        m.retain(|_, c| *c != 0);
        m
    }

    #[test]
    fn leibniz_right() {
        // [a, b*c] = [a,b]c + (-1)^{|b|(|a|+d-1)} b[a,c]
        let d = 2;
        let t = Term::bracket(
            Term::Brace(vec![Term::Var(1), Term::Var(2), Term::Var(3)]),
            Term::Product(vec![
                Term::Brace(vec![Term::Var(4), Term::Var(5), Term::Var(6)]),
                Term::Var(7),
            ]),
        );
        let e = expand(&t, d);
        assert_eq!(e.len(), 2);
        assert_eq!(e[0], (1, vec![n(b(&[1, 2, 3]), b(&[4, 5, 6])), s(7)]));
        // c moves past b: |b||c| = 0
        assert_eq!(e[1], (1, vec![n(b(&[1, 2, 3]), s(7)), b(&[4, 5, 6])]));
    }

    #[test]
    fn kill_rules() {
        assert!(dies(&[n(b(&[1, 2, 3]), s(4)), b(&[5, 6, 7])], 2, 4));
        assert!(dies(&[n(n(s(1), s(3)), s(2))], 2, 3));
        assert!(!dies(&[s(1), s(2), s(3)], 2, 4));
        assert!(!dies(&[n(s(1), s(2))], 2, 2));
        assert!(dies(&[n(s(1), s(2)), b(&[3, 4, 5])], 2, 3));
    }

    #[test]
    fn antisymmetry_to_tail() {
        for d in 2..5i64 {
            let got = collect(normal_tree(&n(b(&[1, 2, 3]), s(4)), d, 3, Stage::Comb));
            let sign = -parity_sign((2 * d - 1 + d - 1) * (d - 1));
            assert_eq!(got, [(n(s(4), b(&[1, 2, 3])), sign)].into_iter().collect());
        }
    }

    #[test]
    fn two_braces_tail_holds_least_label() {
        for d in 2..5i64 {
            let t = n(b(&[1, 3, 5]), b(&[2, 4, 6]));
            let got = collect(normal_tree(&t, d, 3, Stage::Straighten));
            let sh = 3 * d - 2;
            let sign = -parity_sign(sh * sh);
            assert_eq!(got, [(n(b(&[2, 4, 6]), b(&[1, 3, 5])), sign)].into_iter().collect());
        }
    }

    #[test]
    fn jacobi_reduction() {
        // [x1,{x2,x3,x4}] = -(-1)^d[x2,{x1,x3,x4}] - [x3,{x1,x2,x4}] - (-1)^{3d}[x4,{x1,x2,x3}]
        for d in 2..5i64 {
            let got = collect(normal_tree(&n(s(1), b(&[2, 3, 4])), d, 3, Stage::Straighten));
            let want = [
                (n(s(2), b(&[1, 3, 4])), -parity_sign(d)),
                (n(s(3), b(&[1, 2, 4])), -1),
                (n(s(4), b(&[1, 2, 3])), -parity_sign(3 * d)),
            ]
            .into_iter()
            .collect();
            assert_eq!(got, want);
            let fixed = n(s(4), b(&[1, 2, 3]));
            assert_eq!(collect(normal_tree(&fixed, d, 3, Stage::Straighten)), [(fixed, 1)].into_iter().collect());
        }
    }

    #[test]
    fn poisson_right_normed() {
        // [[x2,x3],x1] has tail x1
        let d = 2;
        let got = collect(normal_tree(&n(n(s(2), s(3)), s(1)), d, 2, Stage::Straighten));
        assert_eq!(got.len(), 2);
        assert!(got.keys().all(|t| matches!(t, BracketTree::Node(_, r) if matches!(**r, BracketTree::Node(_, ref rr) if **rr == s(1)))));
    }
}

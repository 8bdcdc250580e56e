//! k-forests and the sign bookkeeping of the intersection pairing, used as an
//! independent check on the sign of the nested-brace expansion.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{parity_sign, permutation_sign};
use crate::error::{Error, Result};
use crate::rewrite::nested_brace_coefficient;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Vertex {
    Square(usize),
    Round(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub from: Vertex,
    pub to: Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Item {
    Edge(usize),
    Square(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Forest {
    pub n: u32,
    pub k: u32,
    /// Each square carries k - 1 labels.
    pub squares: Vec<Vec<u32>>,
    pub rounds: Vec<u32>,
    pub edges: Vec<Edge>,
    pub orientation: Vec<Item>,
}

impl Forest {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidForest(m));
        for s in &self.squares {
            if s.len() as u32 != self.k - 1 {
                return bad(format!("square of size {} in a {}-forest", s.len(), self.k));
            }
        }
        let mut seen = BTreeSet::new();
        for &l in self.squares.iter().flatten().chain(self.rounds.iter()) {
            if l < 1 || l > self.n || !seen.insert(l) {
                return bad(format!("label {l} repeated or out of range"));
            }
        }
        if seen.len() as u32 != self.n {
            return bad("some label is missing".into());
        }
        let mut round_squares = vec![0usize; self.rounds.len()];
        let mut square_rounds = vec![0usize; self.squares.len()];
        for e in &self.edges {
            let (s, r) = match (e.from, e.to) {
                (Vertex::Square(s), Vertex::Round(r)) | (Vertex::Round(r), Vertex::Square(s)) => (s, r),
                _ => return bad("edges join a square and a round vertex".into()),
            };
            if s >= self.squares.len() || r >= self.rounds.len() {
                return bad("edge endpoint does not exist".into());
            }
            round_squares[r] += 1;
            square_rounds[s] += 1;
        }
        if round_squares.iter().any(|&c| c > 1) {
            return bad("a round vertex meets more than one square".into());
        }
        if square_rounds.contains(&0) {
            return bad("a square vertex has no round neighbour".into());
        }
        let wanted: BTreeSet<Item> = (0..self.edges.len())
            .map(Item::Edge)
            .chain((0..self.squares.len()).map(Item::Square))
            .collect();
        let got: BTreeSet<Item> = self.orientation.iter().copied().collect();
        if got != wanted || self.orientation.len() != wanted.len() {
            return bad("orientation set must list every edge and square once".into());
        }
        Ok(())
    }

    pub fn item_degree(&self, item: Item, d: i64) -> i64 {
        match item {
            Item::Edge(_) => d - 1,
            Item::Square(_) => (self.k as i64 - 2) * d,
        }
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |i: &Item| match i {
            Item::Edge(e) => (0, *e),
            Item::Square(s) => (1, *s),
        };
        key(self).cmp(&key(other))
    }
}

pub fn forest_degree(f: &Forest, d: i64) -> Result<i64> {
    f.validate()?;
    Ok(f.squares.len() as i64 * (f.k as i64 - 2) * d + f.edges.len() as i64 * (d - 1))
}

pub fn reverse_edge(f: &Forest, e: usize, d: i64) -> Result<(Forest, i32)> {
    let edge = *f.edges.get(e).ok_or(Error::UnknownEdge(e))?;
    let mut g = f.clone();
    g.edges[e] = Edge { from: edge.to, to: edge.from };
    Ok((g, parity_sign(d)))
}

/// `new_order[j]` is the position in the old orientation set of the item
/// placed at `j`.
pub fn reorder_orientation(f: &Forest, new_order: &[usize], d: i64) -> Result<(Forest, i32)> {
    let len = f.orientation.len();
    let distinct: BTreeSet<usize> = new_order.iter().copied().collect();
    if new_order.len() != len || distinct.len() != len || new_order.iter().any(|&i| i >= len) {
        return Err(Error::NotAPermutation);
    }
    let degrees: Vec<i64> = f.orientation.iter().map(|&it| f.item_degree(it, d)).collect();
    let mut g = f.clone();
    g.orientation = new_order.iter().map(|&i| f.orientation[i]).collect();
    Ok((g, permutation_sign(&degrees, new_order)))
}

/// Coefficient of the `l`-th summand in the pairing of a brace.
pub fn psi_brace_coefficient(k: u32, d: i64, l: u32) -> Result<i32> {
    if l < 1 || l > k {
        return Err(Error::PsiSlot { l, k });
    }
    Ok(parity_sign((l as i64 - 1) * d))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignLedger {
    pub steps: Vec<(String, i32)>,
    pub product: i32,
}

impl SignLedger {
    pub fn new() -> Self {
        SignLedger { steps: Vec::new(), product: 1 }
    }

    pub fn push(&mut self, what: impl Into<String>, sign: i32) {
        self.steps.push((what.into(), sign));
        self.product *= sign;
    }

    pub fn is_consistent(&self) -> bool {
        self.steps.iter().map(|(_, s)| s).product::<i32>() == self.product
    }
}

impl Default for SignLedger {
    fn default() -> Self {
        Self::new()
    }
}

/// Both evaluations of the sign of the last summand of the nested-brace
/// expansion, step by step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremSign {
    pub k1: u32,
    pub k2: u32,
    pub d: i64,
    /// Pairing the summand with the big tree.
    pub right: SignLedger,
    /// Running value after base pairing, reversal and reordering.
    pub right_intersection: i32,
    /// Pairing the product of two trees with the nested brace.
    pub left: SignLedger,
    /// The stated common value `(-1)^((k1+k2-1)d-1)`.
    pub claimed: i32,
    pub agree: bool,
}

/// The big `(k1+k2-2)`-tree: one square missing `k1-1` and `k1+k2-1`, with
/// edges to both; orientation set (edge, square, edge).
pub fn big_tree(k1: u32, k2: u32) -> Forest {
    let k = k1 + k2 - 2;
    let n = k1 + k2 - 1;
    let square: Vec<u32> = (1..=n).filter(|&l| l != k1 - 1 && l != n).collect();
    Forest {
        n,
        k,
        squares: vec![square],
        rounds: vec![k1 - 1, n],
        edges: vec![
            Edge { from: Vertex::Square(0), to: Vertex::Round(0) },
            Edge { from: Vertex::Round(1), to: Vertex::Square(0) },
        ],
        orientation: vec![Item::Edge(0), Item::Square(0), Item::Edge(1)],
    }
}

pub fn verify_theorem_sign(k1: u32, k2: u32, d: i64) -> Result<TheoremSign> {
    if k1 < 3 || k2 < 3 || d < 2 {
        return Err(Error::InvalidContext(format!("need k1, k2 >= 3 and d >= 2, got ({k1}, {k2}, {d})")));
    }
    let (k1i, k2i) = (k1 as i64, k2 as i64);
    let mut right = SignLedger::new();
    right.push("base pairing", parity_sign((k1i - 2) * d));
    let f = big_tree(k1, k2);
    f.validate()?;
    let (f, s) = reverse_edge(&f, 1, d)?;
    right.push("reverse the arrow to the last round vertex", s);
    // (e, square, e') -> (square, e', e)
    let (_, s) = reorder_orientation(&f, &[1, 2, 0], d)?;
    right.push("reorder the orientation set", s);
    let right_intersection = right.product;
    let last = k1i + k2i - 1;
    right.push("coefficient of the last summand", nested_brace_coefficient(k1i, last, d));

    let mut left = SignLedger::new();
    left.push("pair the outer sphere with the first tree", parity_sign((k1i - 2) * d - 1));
    // pulling the second square (degree a multiple of d) through an edge
    let small = Forest {
        n: 2 * k2 - 1,
        k: k2,
        squares: vec![(1..k2).collect(), (k2..2 * k2 - 1).collect()],
        rounds: vec![],
        edges: vec![],
        orientation: vec![Item::Square(0), Item::Square(1)],
    };
    let square_degree = small.item_degree(Item::Square(1), d);
    left.push("concatenate coorientations", parity_sign(square_degree * (d - 1)));
    left.push("pair the inner sphere with the second tree", parity_sign(k2i * d - d - 1));

    let claimed = parity_sign((k1i + k2i - 1) * d - 1);
    let agree = right.product == claimed && left.product == claimed;
    Ok(TheoremSign { k1, k2, d, right, right_intersection, left, claimed, agree })
}

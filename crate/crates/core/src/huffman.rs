//! Deterministic Huffman trees over next-character counts.
//!
//! Construction repeatedly merges the two lightest nodes. Nodes are ordered
//! by `(weight, smallest symbol in the subtree)`, which is a total order
//! because the subtrees in the queue are disjoint. The first node taken
//! becomes the left child, and left is bit `0`.
//!
//! A distribution with a single successor yields a bare leaf with an empty
//! codeword: that transition is forced and consumes no bits.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt::Write as _;

use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

use crate::bits::{BitSource, BitString};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HuffmanError {
    #[error("cannot build a code tree from an empty distribution")]
    EmptyDistribution,
    #[error("symbol {0:?} has zero weight")]
    ZeroWeight(char),
    #[error("symbol {0:?} is not a leaf of this tree")]
    SymbolNotInTree(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Leaf {
        symbol: char,
        weight: u64,
    },
    Branch {
        left: Box<Node>,
        right: Box<Node>,
        weight: u64,
    },
}

impl Node {
    pub fn weight(&self) -> u64 {
        match self {
            Node::Leaf { weight, .. } | Node::Branch { weight, .. } => *weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeTree {
    root: Node,
    codes: BTreeMap<char, BitString>,
}

impl CodeTree {
    pub fn build<'a, I>(dist: I) -> Result<Self, HuffmanError>
    where
        I: IntoIterator<Item = (&'a char, &'a u64)>,
    {
        // Heap entries: (weight, min symbol, arena slot), smallest first.
        let mut arena: Vec<Option<Node>> = Vec::new();
        let mut heap = BinaryHeap::new();
        for (&symbol, &weight) in dist {
            if weight == 0 {
                return Err(HuffmanError::ZeroWeight(symbol));
            }
            heap.push(Reverse((weight, symbol, arena.len())));
            arena.push(Some(Node::Leaf { symbol, weight }));
        }
        if heap.is_empty() {
            return Err(HuffmanError::EmptyDistribution);
        }

        while heap.len() > 1 {
            let Reverse((w1, s1, i1)) = heap.pop().unwrap();
            let Reverse((w2, s2, i2)) = heap.pop().unwrap();
            let left = arena[i1].take().unwrap();
            let right = arena[i2].take().unwrap();
            let weight = w1 + w2;
            heap.push(Reverse((weight, s1.min(s2), arena.len())));
            arena.push(Some(Node::Branch {
                left: Box::new(left),
                right: Box::new(right),
                weight,
            }));
        }

        let Reverse((_, _, i)) = heap.pop().unwrap();
        let root = arena[i].take().unwrap();
        let mut codes = BTreeMap::new();
        collect_codes(&root, &BitString::new(), &mut codes);
        Ok(Self { root, codes })
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Walk from the root, 0 = left, 1 = right, until a leaf. Returns the
    /// leaf symbol and the number of bits read.
    pub fn traverse<S: BitSource + ?Sized>(&self, bits: &mut S) -> (char, usize) {
        let mut node = &self.root;
        let mut used = 0;
        loop {
            match node {
                Node::Leaf { symbol, .. } => return (*symbol, used),
                Node::Branch { left, right, .. } => {
                    used += 1;
                    node = if bits.read_bit() { right } else { left };
                }
            }
        }
    }

    pub fn codeword(&self, symbol: char) -> Result<&BitString, HuffmanError> {
        self.codes
            .get(&symbol)
            .ok_or(HuffmanError::SymbolNotInTree(symbol))
    }

    pub fn depth(&self, symbol: char) -> Option<usize> {
        self.codes.get(&symbol).map(BitString::len)
    }

    /// All `(symbol, codeword)` pairs in symbol order.
    pub fn codes(&self) -> &BTreeMap<char, BitString> {
        &self.codes
    }

    pub fn leaf_count(&self) -> usize {
        self.codes.len()
    }

    pub fn total_weight(&self) -> u64 {
        self.root.weight()
    }

    /// `(symbol, weight, depth)` for every leaf, left to right.
    pub fn leaves(&self) -> Vec<(char, u64, usize)> {
        fn walk(node: &Node, depth: usize, out: &mut Vec<(char, u64, usize)>) {
            match node {
                Node::Leaf { symbol, weight } => out.push((*symbol, *weight, depth)),
                Node::Branch { left, right, .. } => {
                    walk(left, depth + 1, out);
                    walk(right, depth + 1, out);
                }
            }
        }
        let mut out = Vec::with_capacity(self.codes.len());
        walk(&self.root, 0, &mut out);
        out
    }

    /// Σ weight × depth over the leaves.
    pub fn weighted_path_length(&self) -> u64 {
        self.leaves().iter().map(|&(_, w, d)| w * d as u64).sum()
    }

    /// Σ 2^-depth over the leaves, exactly.
    pub fn kraft_sum(&self) -> BigRational {
        self.leaves()
            .iter()
            .fold(BigRational::zero(), |acc, &(_, _, d)| {
                acc + BigRational::new(BigInt::one(), BigInt::one() << d)
            })
    }

    /// Indented text rendering, one node per line.
    pub fn dump(&self) -> String {
        fn walk(node: &Node, path: &mut String, out: &mut String) {
            let indent = "  ".repeat(path.len());
            let label = if path.is_empty() {
                "root"
            } else {
                path.as_str()
            };
            match node {
                Node::Leaf { symbol, weight } => {
                    let _ = writeln!(out, "{indent}{label}: {symbol:?} ({weight})");
                }
                Node::Branch {
                    left,
                    right,
                    weight,
                } => {
                    let _ = writeln!(out, "{indent}{label}: ({weight})");
                    path.push('0');
                    walk(left, path, out);
                    path.pop();
                    path.push('1');
                    walk(right, path, out);
                    path.pop();
                }
            }
        }
        let mut out = String::new();
        walk(&self.root, &mut String::new(), &mut out);
        out
    }
}

fn collect_codes(node: &Node, prefix: &BitString, out: &mut BTreeMap<char, BitString>) {
    match node {
        Node::Leaf { symbol, .. } => {
            out.insert(*symbol, prefix.clone());
        }
        Node::Branch { left, right, .. } => {
            let mut l = prefix.clone();
            l.push(false);
            collect_codes(left, &l, out);
            let mut r = prefix.clone();
            r.push(true);
            collect_codes(right, &r, out);
        }
    }
}

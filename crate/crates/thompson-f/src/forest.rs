use crate::diagram::{Element, TreeDiagram};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::pl::{DomainKind, PLMap};
use crate::tree::Tree;
use num::bigint::BigInt;
use std::fmt;

/// Forest diagram for the action on [0, inf): a pair of forests indexed
/// 0, 1, 2, ... with matching total leaf counts. Canonical form stores no
/// trailing column in which both trees are trivial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OneWayForestDiagram {
    pub top: Vec<Tree>,
    pub bottom: Vec<Tree>,
}

/// Right-spine decomposition of a tree into a forest: t = the trees hanging
/// off the right stalk.
pub fn right_stalk_forest(t: &Tree) -> Vec<Tree> {
    let mut out = Vec::new();
    let mut cur = t;
    while let Tree::Caret(a, b) = cur {
        out.push((**a).clone());
        cur = b;
    }
    out
}

/// Inverse of `right_stalk_forest`.
pub fn forest_to_tree(forest: &[Tree]) -> Tree {
    let mut acc = Tree::Leaf;
    for t in forest.iter().rev() {
        acc = Tree::caret(t.clone(), acc);
    }
    acc
}

fn total_leaves(forest: &[Tree]) -> usize {
    forest.iter().map(|t| t.leaves()).sum()
}

fn leaf_starts(forest: &[Tree]) -> Vec<usize> {
    let mut out = Vec::with_capacity(forest.len());
    let mut acc = 0;
    for t in forest {
        out.push(acc);
        acc += t.leaves();
    }
    out
}

/// Index of the forest tree containing global leaf `leaf`.
fn tree_of_leaf(forest: &[Tree], leaf: usize) -> usize {
    let mut acc = 0;
    for (i, t) in forest.iter().enumerate() {
        acc += t.leaves();
        if leaf < acc {
            return i;
        }
    }
    panic!("leaf {leaf} out of range");
}

impl OneWayForestDiagram {
    pub fn canonicalize(&mut self) {
        while let (Some(Tree::Leaf), Some(Tree::Leaf)) = (self.top.last(), self.bottom.last()) {
            self.top.pop();
            self.bottom.pop();
        }
    }

    pub fn from_element(f: &Element) -> OneWayForestDiagram {
        let mut d = OneWayForestDiagram {
            top: right_stalk_forest(&f.diagram().top),
            bottom: right_stalk_forest(&f.diagram().bottom),
        };
        d.canonicalize();
        d
    }

    pub fn to_element(&self) -> Element {
        Element::from_diagram(
            TreeDiagram::new(forest_to_tree(&self.top), forest_to_tree(&self.bottom))
                .expect("one-way forest leaf counts must match"),
        )
    }
}

/// Forest diagram for the action on the line: two pointed forests over a
/// shared sequence of leaf columns. Tree i of the top forest lies over the
/// unit interval [i - top_pointer, i - top_pointer + 1] of the domain copy of
/// the line, and similarly on the bottom; the leaves of both forests are
/// matched in order. Canonical form trims columns outside the support.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TwoWayForestDiagram {
    pub top: Vec<Tree>,
    pub top_pointer: usize,
    pub bottom: Vec<Tree>,
    pub bottom_pointer: usize,
}

/// Peel the outer layer of a tree: trees hanging right of the left spine
/// (returned deepest-first, i.e. columns -1, -2, ... in order) and trees
/// hanging left of the right spine (columns 0, 1, ...).
fn peel(t: &Tree) -> (Vec<Tree>, Vec<Tree>) {
    match t {
        Tree::Leaf => (Vec::new(), Vec::new()),
        Tree::Caret(l, r) => {
            let mut lefts = Vec::new();
            let mut cur = &**l;
            while let Tree::Caret(a, b) = cur {
                lefts.push((**b).clone());
                cur = a;
            }
            let mut rights = Vec::new();
            let mut cur = &**r;
            while let Tree::Caret(a, b) = cur {
                rights.push((**a).clone());
                cur = b;
            }
            (lefts, rights)
        }
    }
}

impl TwoWayForestDiagram {
    pub fn leaf_count(&self) -> usize {
        total_leaves(&self.top)
    }

    pub fn caret_count(&self) -> usize {
        self.top.iter().map(|t| t.carets()).sum::<usize>()
            + self.bottom.iter().map(|t| t.carets()).sum::<usize>()
    }

    /// Number of spaces in the support.
    pub fn width(&self) -> usize {
        self.leaf_count() - 1
    }

    pub fn check(&self) -> Result<()> {
        if self.top.is_empty() || self.bottom.is_empty() {
            return Err(Error::Structure("two-way forests must be nonempty".into()));
        }
        if self.top_pointer >= self.top.len() || self.bottom_pointer >= self.bottom.len() {
            return Err(Error::Structure("pointer outside forest".into()));
        }
        if total_leaves(&self.top) != total_leaves(&self.bottom) {
            return Err(Error::Structure("leaf totals differ".into()));
        }
        Ok(())
    }

    /// Append one trivial column on the right of both forests (an expansion).
    fn pad_right(&mut self) {
        self.top.push(Tree::Leaf);
        self.bottom.push(Tree::Leaf);
    }

    /// Prepend one trivial column on the left of both forests.
    fn pad_left(&mut self) {
        self.top.insert(0, Tree::Leaf);
        self.bottom.insert(0, Tree::Leaf);
        self.top_pointer += 1;
        self.bottom_pointer += 1;
    }

    /// Remove trivial columns outside the support.
    pub fn trim(&mut self) {
        while self.top.len() > 1
            && self.bottom.len() > 1
            && self.top.first() == Some(&Tree::Leaf)
            && self.bottom.first() == Some(&Tree::Leaf)
            && self.top_pointer > 0
            && self.bottom_pointer > 0
        {
            self.top.remove(0);
            self.bottom.remove(0);
            self.top_pointer -= 1;
            self.bottom_pointer -= 1;
        }
        while self.top.len() > 1
            && self.bottom.len() > 1
            && self.top.last() == Some(&Tree::Leaf)
            && self.bottom.last() == Some(&Tree::Leaf)
            && self.top_pointer + 1 < self.top.len()
            && self.bottom_pointer + 1 < self.bottom.len()
        {
            self.top.pop();
            self.bottom.pop();
        }
    }

    pub fn from_element(f: &Element) -> TwoWayForestDiagram {
        let (tl, tr) = peel(&f.diagram().top);
        let (bl, br) = peel(&f.diagram().bottom);
        let top_pointer = tl.len();
        let bottom_pointer = bl.len();
        let mut top: Vec<Tree> = tl.into_iter().rev().collect();
        top.extend(tr);
        let mut bottom: Vec<Tree> = bl.into_iter().rev().collect();
        bottom.extend(br);
        let mut d = TwoWayForestDiagram { top, top_pointer, bottom, bottom_pointer };
        while d.top_pointer >= d.top.len() || d.bottom_pointer >= d.bottom.len() {
            d.pad_right();
        }
        debug_assert!(d.check().is_ok(), "inconsistent two-way diagram for {f}");
        d.trim();
        d
    }

    pub fn to_element(&self) -> Element {
        let rebuild = |forest: &[Tree], pointer: usize| -> Tree {
            let mut left = Tree::Leaf;
            for t in &forest[..pointer] {
                left = Tree::caret(left, t.clone());
            }
            let mut right = Tree::Leaf;
            for t in forest[pointer..].iter().rev() {
                right = Tree::caret(t.clone(), right);
            }
            Tree::caret(left, right)
        };
        Element::from_diagram(
            TreeDiagram::new(
                rebuild(&self.top, self.top_pointer),
                rebuild(&self.bottom, self.bottom_pointer),
            )
            .expect("two-way forest leaf counts must match"),
        )
    }

    /// Left-multiply by the generator x_n (sign +1) or x_n^{-1} (sign -1),
    /// acting structurally on the top forest.
    pub fn apply_letter(&self, n: usize, sign: i8) -> TwoWayForestDiagram {
        assert!(sign == 1 || sign == -1);
        let mut d = self.clone();
        if n == 0 {
            if sign == 1 {
                if d.top_pointer + 1 >= d.top.len() {
                    d.pad_right();
                }
                d.top_pointer += 1;
            } else {
                if d.top_pointer == 0 {
                    d.pad_left();
                }
                d.top_pointer -= 1;
            }
            d.trim();
            return d;
        }
        // x_n acts at top trees (pointer + n - 1, pointer + n)
        let i = d.top_pointer + n - 1;
        if sign == 1 {
            while d.top.len() <= i + 1 {
                d.pad_right();
            }
            let starts = leaf_starts(&d.top);
            if d.top[i].is_leaf() && d.top[i + 1].is_leaf() {
                // the new caret may oppose an exposed bottom caret
                let leaf = starts[i];
                let bstarts = leaf_starts(&d.bottom);
                let j = tree_of_leaf(&d.bottom, leaf);
                let local = leaf - bstarts[j];
                if tree_of_leaf(&d.bottom, leaf + 1) == j
                    && d.bottom[j].exposed_carets().contains(&local)
                {
                    d.bottom[j] = d.bottom[j].remove_exposed_caret(local);
                    d.top.remove(i + 1);
                    d.trim();
                    return d;
                }
            }
            let right = d.top.remove(i + 1);
            let left = std::mem::replace(&mut d.top[i], Tree::Leaf);
            d.top[i] = Tree::caret(left, right);
            d.trim();
            d
        } else {
            while d.top.len() <= i {
                d.pad_right();
            }
            if let Tree::Caret(l, r) = d.top[i].clone() {
                d.top[i] = *l;
                d.top.insert(i + 1, *r);
            } else {
                // negative caret falls through to the bottom forest
                let leaf = leaf_starts(&d.top)[i];
                let j = tree_of_leaf(&d.bottom, leaf);
                let local = leaf - leaf_starts(&d.bottom)[j];
                let caret = Tree::caret(Tree::Leaf, Tree::Leaf);
                d.bottom[j] = d.bottom[j].attach_at_leaf(local, &caret);
                d.top.insert(i + 1, Tree::Leaf);
            }
            d.trim();
            d
        }
    }

    /// The PL homeomorphism of the line determined by the diagram.
    pub fn to_pl_line(&self) -> PLMap {
        let line_boundaries = |forest: &[Tree], pointer: usize| -> Vec<Dyadic> {
            let mut xs = Vec::new();
            for (i, t) in forest.iter().enumerate() {
                let lo = Dyadic::from_int(i as i64 - pointer as i64);
                let hi = Dyadic::from_int(i as i64 - pointer as i64 + 1);
                tree_boundaries(t, &lo, &hi, &mut xs);
            }
            xs.push(Dyadic::from_int(forest.len() as i64 - pointer as i64));
            xs
        };
        let xs = line_boundaries(&self.top, self.top_pointer);
        let ys = line_boundaries(&self.bottom, self.bottom_pointer);
        let m = BigInt::from(self.top_pointer as i64 - self.bottom_pointer as i64);
        let n = BigInt::from(
            (self.bottom.len() as i64 - self.bottom_pointer as i64)
                - (self.top.len() as i64 - self.top_pointer as i64),
        );
        PLMap::new(DomainKind::Line, xs.into_iter().zip(ys).collect(), m, n)
            .expect("forest diagram yields a valid PL map")
    }
}

fn tree_boundaries(t: &Tree, lo: &Dyadic, hi: &Dyadic, out: &mut Vec<Dyadic>) {
    match t {
        Tree::Leaf => out.push(lo.clone()),
        Tree::Caret(l, r) => {
            let mid = (lo + hi).mul_pow2(-1);
            tree_boundaries(l, lo, &mid, out);
            tree_boundaries(r, &mid, hi, out);
        }
    }
}

/// Classification flags of an element, read off its canonical two-way forest
/// diagram.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Classification {
    pub positive: bool,
    pub right_sided: bool,
    pub strongly_positive: bool,
    pub left_sided: bool,
    pub width: usize,
    pub caret_count: usize,
}

impl Element {
    pub fn to_twoway(&self) -> TwoWayForestDiagram {
        TwoWayForestDiagram::from_element(self)
    }

    pub fn to_oneway(&self) -> OneWayForestDiagram {
        OneWayForestDiagram::from_element(self)
    }

    pub fn to_pl_line(&self) -> PLMap {
        self.to_twoway().to_pl_line()
    }

    pub fn classify(&self) -> Classification {
        let d = self.to_twoway();
        let positive = d.bottom_pointer == 0 && d.bottom.iter().all(Tree::is_leaf);
        let right_sided = d.top_pointer == 0 && d.bottom_pointer == 0;
        let left_sided = d.top_pointer + 1 == d.top.len() && d.bottom_pointer + 1 == d.bottom.len();
        Classification {
            positive,
            right_sided,
            strongly_positive: positive && right_sided,
            left_sided,
            width: d.width(),
            caret_count: d.caret_count(),
        }
    }
}

fn fmt_forest(f: &mut fmt::Formatter<'_>, forest: &[Tree], pointer: usize) -> fmt::Result {
    for (i, t) in forest.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        if i == pointer {
            write!(f, "*")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

impl fmt::Display for TwoWayForestDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_forest(f, &self.top, self.top_pointer)?;
        writeln!(f)?;
        fmt_forest(f, &self.bottom, self.bottom_pointer)
    }
}

/// Parse a forest line: trees separated by spaces, pointed tree marked '*'.
pub fn parse_forest(s: &str) -> Result<(Vec<Tree>, usize)> {
    let mut trees = Vec::new();
    let mut pointer = None;
    for tok in s.split_whitespace() {
        let (starred, body) = match tok.strip_prefix('*') {
            Some(rest) => (true, rest),
            None => (false, tok),
        };
        if starred {
            if pointer.is_some() {
                return Err(Error::Parse("multiple pointers in forest".into()));
            }
            pointer = Some(trees.len());
        }
        trees.push(Tree::parse(body)?);
    }
    if trees.is_empty() {
        return Err(Error::Parse("empty forest".into()));
    }
    Ok((trees, pointer.unwrap_or(0)))
}

impl TwoWayForestDiagram {
    pub fn parse(s: &str) -> Result<TwoWayForestDiagram> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let top_line = lines.next().ok_or_else(|| Error::Parse("missing top forest".into()))?;
        let bottom_line =
            lines.next().ok_or_else(|| Error::Parse("missing bottom forest".into()))?;
        if lines.next().is_some() {
            return Err(Error::Parse("trailing lines after diagram".into()));
        }
        let (top, top_pointer) = parse_forest(top_line)?;
        let (bottom, bottom_pointer) = parse_forest(bottom_line)?;
        let d = TwoWayForestDiagram { top, top_pointer, bottom, bottom_pointer };
        d.check()?;
        Ok(d)
    }
}

use crate::error::{Error, Result};
use std::fmt;

/// A finite rooted binary tree. Every internal node (caret) has exactly two
/// ordered children.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf,
    Caret(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn caret(l: Tree, r: Tree) -> Tree {
        Tree::Caret(Box::new(l), Box::new(r))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn leaves(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Caret(l, r) => l.leaves() + r.leaves(),
        }
    }

    pub fn carets(&self) -> usize {
        self.leaves() - 1
    }

    /// Longest root-to-leaf path, counted in edges. The trivial tree has height 0.
    pub fn height(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Caret(l, r) => 1 + l.height().max(r.height()),
        }
    }

    /// Depth of the leftmost leaf.
    pub fn left_depth(&self) -> i64 {
        match self {
            Tree::Leaf => 0,
            Tree::Caret(l, _) => 1 + l.left_depth(),
        }
    }

    /// Depth of the rightmost leaf.
    pub fn right_depth(&self) -> i64 {
        match self {
            Tree::Leaf => 0,
            Tree::Caret(_, r) => 1 + r.right_depth(),
        }
    }

    /// Right vine (all carets chained along right children) with `n` leaves.
    pub fn right_vine(n: usize) -> Tree {
        assert!(n >= 1);
        let mut t = Tree::Leaf;
        for _ in 1..n {
            t = Tree::caret(Tree::Leaf, t);
        }
        t
    }

    pub fn is_right_vine(&self) -> bool {
        match self {
            Tree::Leaf => true,
            Tree::Caret(l, r) => l.is_leaf() && r.is_right_vine(),
        }
    }

    /// Mirror image (swap left/right recursively).
    pub fn mirror(&self) -> Tree {
        match self {
            Tree::Leaf => Tree::Leaf,
            Tree::Caret(l, r) => Tree::caret(r.mirror(), l.mirror()),
        }
    }

    /// Leaf positions i such that leaves i, i+1 are siblings under a caret.
    pub fn exposed_carets(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_exposed(0, &mut out);
        out
    }

    fn collect_exposed(&self, offset: usize, out: &mut Vec<usize>) {
        if let Tree::Caret(l, r) = self {
            if l.is_leaf() && r.is_leaf() {
                out.push(offset);
            } else {
                l.collect_exposed(offset, out);
                r.collect_exposed(offset + l.leaves(), out);
            }
        }
    }

    /// Replace the exposed caret whose left leaf is at position `i` by a leaf.
    pub fn remove_exposed_caret(&self, i: usize) -> Tree {
        match self {
            Tree::Leaf => panic!("no caret at position {i}"),
            Tree::Caret(l, r) => {
                if l.is_leaf() && r.is_leaf() {
                    assert_eq!(i, 0, "no exposed caret at position {i}");
                    return Tree::Leaf;
                }
                let ll = l.leaves();
                if i + 1 < ll {
                    Tree::caret(l.remove_exposed_caret(i), (**r).clone())
                } else if i >= ll {
                    Tree::caret((**l).clone(), r.remove_exposed_caret(i - ll))
                } else {
                    panic!("leaves {i},{} are not siblings", i + 1)
                }
            }
        }
    }

    /// Replace leaf `i` by the given subtree.
    pub fn attach_at_leaf(&self, i: usize, sub: &Tree) -> Tree {
        match self {
            Tree::Leaf => {
                assert_eq!(i, 0);
                sub.clone()
            }
            Tree::Caret(l, r) => {
                let ll = l.leaves();
                if i < ll {
                    Tree::caret(l.attach_at_leaf(i, sub), (**r).clone())
                } else {
                    Tree::caret((**l).clone(), r.attach_at_leaf(i - ll, sub))
                }
            }
        }
    }

    /// Replace the leaves of `self`, in order, by the given subtrees.
    pub fn attach_all(&self, subs: &[Tree]) -> Tree {
        assert_eq!(self.leaves(), subs.len());
        let mut idx = 0;
        self.attach_all_inner(subs, &mut idx)
    }

    fn attach_all_inner(&self, subs: &[Tree], idx: &mut usize) -> Tree {
        match self {
            Tree::Leaf => {
                let t = subs[*idx].clone();
                *idx += 1;
                t
            }
            Tree::Caret(l, r) => {
                let nl = l.attach_all_inner(subs, idx);
                let nr = r.attach_all_inner(subs, idx);
                Tree::caret(nl, nr)
            }
        }
    }

    /// Smallest tree containing both arguments as rooted prefixes
    /// (union of the corresponding dyadic subdivisions).
    pub fn lcm(a: &Tree, b: &Tree) -> Tree {
        match (a, b) {
            (Tree::Leaf, t) => t.clone(),
            (t, Tree::Leaf) => t.clone(),
            (Tree::Caret(al, ar), Tree::Caret(bl, br)) => {
                Tree::caret(Tree::lcm(al, bl), Tree::lcm(ar, br))
            }
        }
    }

    /// Whether `self`'s subdivision refines `other`'s, i.e. `other` is a
    /// rooted prefix of `self`.
    pub fn refines(&self, other: &Tree) -> bool {
        match (other, self) {
            (Tree::Leaf, _) => true,
            (Tree::Caret(..), Tree::Leaf) => false,
            (Tree::Caret(ol, or), Tree::Caret(sl, sr)) => sl.refines(ol) && sr.refines(or),
        }
    }

    /// For `fine` refining `coarse`: one subtree of `fine` per leaf of `coarse`.
    pub fn refinements(coarse: &Tree, fine: &Tree) -> Vec<Tree> {
        let mut out = Vec::new();
        Self::refinements_inner(coarse, fine, &mut out);
        out
    }

    fn refinements_inner(coarse: &Tree, fine: &Tree, out: &mut Vec<Tree>) {
        match coarse {
            Tree::Leaf => out.push(fine.clone()),
            Tree::Caret(cl, cr) => match fine {
                Tree::Leaf => panic!("refinement does not contain the coarse tree"),
                Tree::Caret(fl, fr) => {
                    Self::refinements_inner(cl, fl, out);
                    Self::refinements_inner(cr, fr, out);
                }
            },
        }
    }

    /// All carets, as (leftmost leaf, rightmost leaf, depth), in preorder.
    pub fn caret_spans(&self) -> Vec<CaretSpan> {
        let mut out = Vec::new();
        self.caret_spans_inner(0, 0, &mut out);
        out
    }

    fn caret_spans_inner(&self, offset: usize, depth: usize, out: &mut Vec<CaretSpan>) {
        if let Tree::Caret(l, r) = self {
            let ll = l.leaves();
            out.push(CaretSpan { lm: offset, rm: offset + ll + r.leaves() - 1, depth });
            l.caret_spans_inner(offset, depth + 1, out);
            r.caret_spans_inner(offset + ll, depth + 1, out);
        }
    }

    /// Preorder shape bits: 1 for caret, 0 for leaf.
    pub fn encode_bits(&self, bits: &mut Vec<bool>) {
        match self {
            Tree::Leaf => bits.push(false),
            Tree::Caret(l, r) => {
                bits.push(true);
                l.encode_bits(bits);
                r.encode_bits(bits);
            }
        }
    }

    pub fn decode_bits(bits: &[bool], pos: &mut usize) -> Tree {
        let b = bits[*pos];
        *pos += 1;
        if b {
            let l = Tree::decode_bits(bits, pos);
            let r = Tree::decode_bits(bits, pos);
            Tree::caret(l, r)
        } else {
            Tree::Leaf
        }
    }

    pub fn parse(s: &str) -> Result<Tree> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = Self::parse_inner(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Parse(format!("trailing input in tree at offset {pos}")));
        }
        Ok(t)
    }

    fn parse_inner(chars: &[char], pos: &mut usize) -> Result<Tree> {
        match chars.get(*pos) {
            Some('.') => {
                *pos += 1;
                Ok(Tree::Leaf)
            }
            Some('(') => {
                *pos += 1;
                let l = Self::parse_inner(chars, pos)?;
                if chars.get(*pos) != Some(&',') {
                    return Err(Error::Parse(format!("expected ',' at offset {pos}")));
                }
                *pos += 1;
                let r = Self::parse_inner(chars, pos)?;
                if chars.get(*pos) != Some(&')') {
                    return Err(Error::Parse(format!("expected ')' at offset {pos}")));
                }
                *pos += 1;
                Ok(Tree::caret(l, r))
            }
            other => Err(Error::Parse(format!("unexpected {other:?} in tree"))),
        }
    }
}

/// A caret of a tree or forest, identified by the global indices of its
/// leftmost and rightmost descendant leaves and its depth below the root.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct CaretSpan {
    pub lm: usize,
    pub rm: usize,
    pub depth: usize,
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf => write!(f, "."),
            Tree::Caret(l, r) => write!(f, "({l},{r})"),
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_print_roundtrip() {
        for s in [".", "(.,.)", "((.,.),.)", "(.,((.,.),.))"] {
            let t = Tree::parse(s).unwrap();
            assert_eq!(t.to_string(), s);
        }
        assert!(Tree::parse("(.,").is_err());
        assert!(Tree::parse("").is_err());
    }

    #[test]
    fn lcm_basics() {
        let leaf = Tree::Leaf;
        let t = Tree::parse("((.,.),.)").unwrap();
        assert_eq!(Tree::lcm(&leaf, &t), t);
        assert_eq!(Tree::lcm(&t, &t), t);
        // lcm(caret(leaf,caret), caret(caret,leaf)) = caret(caret,caret):
        // union of the subdivisions {0,1/2,3/4,1} and {0,1/4,1/2,1}.
        let a = Tree::parse("(.,(.,.))").unwrap();
        let b = Tree::parse("((.,.),.)").unwrap();
        let c = Tree::parse("((.,.),(.,.))").unwrap();
        assert_eq!(Tree::lcm(&a, &b), c);
        assert!(c.refines(&a) && c.refines(&b));
    }

    #[test]
    fn exposed_and_remove() {
        let t = Tree::parse("((.,(.,.)),(.,.))").unwrap();
        assert_eq!(t.exposed_carets(), vec![1, 3]);
        let t2 = t.remove_exposed_caret(1);
        assert_eq!(t2.to_string(), "((.,.),(.,.))");
        let t3 = t.remove_exposed_caret(3);
        assert_eq!(t3.to_string(), "((.,(.,.)),.)");
    }

    #[test]
    fn encode_decode() {
        let t = Tree::parse("((.,(.,.)),(.,.))").unwrap();
        let mut bits = Vec::new();
        t.encode_bits(&mut bits);
        let mut pos = 0;
        assert_eq!(Tree::decode_bits(&bits, &mut pos), t);
        assert_eq!(pos, bits.len());
    }

    #[test]
    fn caret_spans_order() {
        let t = Tree::parse("((.,.),(.,.))").unwrap();
        let spans = t.caret_spans();
        assert_eq!(spans.len(), 3);
        assert_eq!(spans[0], CaretSpan { lm: 0, rm: 3, depth: 0 });
        assert_eq!(spans[1], CaretSpan { lm: 0, rm: 1, depth: 1 });
        assert_eq!(spans[2], CaretSpan { lm: 2, rm: 3, depth: 1 });
    }
}

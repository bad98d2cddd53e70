use crate::error::{Error, Result};
use crate::tree::Tree;
use std::fmt;

/// A pair of binary trees with equal leaf counts: domain (top) subdivision
/// mapped onto range (bottom) subdivision.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TreeDiagram {
    pub top: Tree,
    pub bottom: Tree,
}

impl TreeDiagram {
    pub fn new(top: Tree, bottom: Tree) -> Result<TreeDiagram> {
        if top.leaves() != bottom.leaves() {
            return Err(Error::Structure(format!(
                "leaf counts differ: {} vs {}",
                top.leaves(),
                bottom.leaves()
            )));
        }
        Ok(TreeDiagram { top, bottom })
    }

    pub fn leaves(&self) -> usize {
        self.top.leaves()
    }

    /// Leaf positions at which both trees have an exposed caret.
    pub fn opposing_carets(&self) -> Vec<usize> {
        let t = self.top.exposed_carets();
        let b = self.bottom.exposed_carets();
        t.into_iter().filter(|i| b.contains(i)).collect()
    }

    pub fn is_reduced(&self) -> bool {
        self.opposing_carets().is_empty()
    }

    /// Cancel opposing caret pairs until none remain. The result is the
    /// unique reduced diagram for the same element, independently of the
    /// cancellation order.
    pub fn reduce(&self) -> TreeDiagram {
        self.reduce_with_order(|v| v[0])
    }

    /// Reduction with a caller-chosen cancellation order (used to check
    /// confluence).
    pub fn reduce_with_order(&self, pick: impl Fn(&[usize]) -> usize) -> TreeDiagram {
        let mut d = self.clone();
        loop {
            let opp = d.opposing_carets();
            if opp.is_empty() {
                return d;
            }
            let i = pick(&opp);
            d = TreeDiagram {
                top: d.top.remove_exposed_caret(i),
                bottom: d.bottom.remove_exposed_caret(i),
            };
        }
    }

    /// Simultaneously subdivide leaf `i` of both trees (diagram expansion;
    /// represents the same element).
    pub fn expand_at_leaf(&self, i: usize, sub: &Tree) -> TreeDiagram {
        TreeDiagram {
            top: self.top.attach_at_leaf(i, sub),
            bottom: self.bottom.attach_at_leaf(i, sub),
        }
    }
}

/// An element of Thompson's group F, held as its unique reduced tree diagram.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    diagram: TreeDiagram,
}

impl Element {
    pub fn identity() -> Element {
        Element { diagram: TreeDiagram { top: Tree::Leaf, bottom: Tree::Leaf } }
    }

    pub fn from_diagram(d: TreeDiagram) -> Element {
        Element { diagram: d.reduce() }
    }

    pub fn from_trees(top: Tree, bottom: Tree) -> Result<Element> {
        Ok(Element::from_diagram(TreeDiagram::new(top, bottom)?))
    }

    pub fn diagram(&self) -> &TreeDiagram {
        &self.diagram
    }

    pub fn is_identity(&self) -> bool {
        self.diagram.top.is_leaf()
    }

    /// The generator x_n as a reduced tree diagram: attach a caret at leaf n
    /// of a right vine.
    pub fn x(n: usize) -> Element {
        let caret = Tree::caret(Tree::Leaf, Tree::Leaf);
        let top = Tree::right_vine(n + 2).attach_at_leaf(n, &caret);
        let bottom = Tree::right_vine(n + 3);
        Element::from_trees(top, bottom).unwrap()
    }

    /// Product under the composition convention (fg)(t) = g(f(t)):
    /// `self` applied first, then `g`.
    pub fn multiply(&self, g: &Element) -> Element {
        let middle = Tree::lcm(&self.diagram.bottom, &g.diagram.top);
        let top = self
            .diagram
            .top
            .attach_all(&Tree::refinements(&self.diagram.bottom, &middle));
        let bottom = g
            .diagram
            .bottom
            .attach_all(&Tree::refinements(&g.diagram.top, &middle));
        Element::from_diagram(TreeDiagram { top, bottom })
    }

    pub fn invert(&self) -> Element {
        Element {
            diagram: TreeDiagram {
                top: self.diagram.bottom.clone(),
                bottom: self.diagram.top.clone(),
            },
        }
    }

    pub fn pow(&self, n: i64) -> Element {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut acc = Element::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.multiply(&base);
        }
        acc
    }

    /// Conjugate self^g = g^-1 self g under the left-to-right composition
    /// convention.
    pub fn conjugate(&self, g: &Element) -> Element {
        g.invert().multiply(self).multiply(g)
    }

    /// The abelianization map to Z + Z: (log2 f'(0), log2 f'(1)) on the unit
    /// interval model.
    pub fn abelianize(&self) -> (i64, i64) {
        let at0 = self.diagram.top.left_depth() - self.diagram.bottom.left_depth();
        let at1 = self.diagram.top.right_depth() - self.diagram.bottom.right_depth();
        (at0, at1)
    }

    pub fn is_commutator_element(&self) -> bool {
        self.abelianize() == (0, 0)
    }

    /// Positive iff the bottom tree of the reduced diagram is a right vine.
    pub fn is_positive(&self) -> bool {
        self.diagram.bottom.is_right_vine()
    }

    /// Total carets of the reduced diagram's two-way forests (the l1 part of
    /// the length formula): tree carets minus the outer scaffolding layer
    /// (root, left spine of the left child, right spine of the right child).
    pub fn caret_count(&self) -> usize {
        two_way_carets(&self.diagram.top) + two_way_carets(&self.diagram.bottom)
    }

    /// Compact canonical key: preorder shape bits of top then bottom tree,
    /// packed into bytes (with the top leaf count as a terminator-free prefix).
    pub fn encode(&self) -> Vec<u8> {
        let mut bits = Vec::new();
        self.diagram.top.encode_bits(&mut bits);
        self.diagram.bottom.encode_bits(&mut bits);
        let mut out = Vec::with_capacity(bits.len() / 8 + 1);
        for chunk in bits.chunks(8) {
            let mut b = 0u8;
            for (i, &bit) in chunk.iter().enumerate() {
                if bit {
                    b |= 1 << i;
                }
            }
            out.push(b);
        }
        // record the bit length mod 8 so decode knows where to stop
        out.push(bits.len() as u8 % 8);
        out
    }

    pub fn decode(bytes: &[u8]) -> Element {
        let (tail, body) = bytes.split_last().unwrap();
        let mut nbits = body.len() * 8;
        if *tail != 0 {
            nbits = nbits - 8 + *tail as usize;
        }
        let mut bits = Vec::with_capacity(nbits);
        for i in 0..nbits {
            bits.push(body[i / 8] & (1 << (i % 8)) != 0);
        }
        let mut pos = 0;
        let top = Tree::decode_bits(&bits, &mut pos);
        let bottom = Tree::decode_bits(&bits, &mut pos);
        Element { diagram: TreeDiagram { top, bottom } }
    }
}

fn count_right_spine(t: &Tree) -> usize {
    match t {
        Tree::Leaf => 0,
        Tree::Caret(_, r) => 1 + count_right_spine(r),
    }
}

fn count_left_spine(t: &Tree) -> usize {
    match t {
        Tree::Leaf => 0,
        Tree::Caret(l, _) => 1 + count_left_spine(l),
    }
}

fn two_way_carets(t: &Tree) -> usize {
    match t {
        Tree::Leaf => 0,
        Tree::Caret(l, r) => t.carets() - 1 - count_left_spine(l) - count_right_spine(r),
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.diagram.top, self.diagram.bottom)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tree {
        Tree::parse(s).unwrap()
    }

    #[test]
    fn generator_diagrams() {
        let x0 = Element::x(0);
        assert_eq!(x0.diagram().top, t("((.,.),.)"));
        assert_eq!(x0.diagram().bottom, t("(.,(.,.))"));
        let x1 = Element::x(1);
        assert_eq!(x1.diagram().top, t("(.,((.,.),.))"));
        assert_eq!(x1.diagram().bottom, t("(.,(.,(.,.)))"));
    }

    #[test]
    fn xn_matches_conjugation() {
        // x_{n} = x0^{-(n-1)} x1 x0^{n-1} for n >= 1
        let x0 = Element::x(0);
        let x1 = Element::x(1);
        for n in 1..8usize {
            let conj = x1.conjugate(&x0.pow(n as i64 - 1));
            assert_eq!(conj, Element::x(n), "n={n}");
        }
    }

    #[test]
    fn reduce_trivial_cases() {
        let caret = t("(.,.)");
        let d = TreeDiagram::new(caret.clone(), caret).unwrap();
        assert_eq!(d.reduce(), TreeDiagram::new(Tree::Leaf, Tree::Leaf).unwrap());
        let x0 = Element::x(0);
        assert!(x0.diagram().is_reduced());
        assert_eq!(x0.diagram().reduce(), *x0.diagram());
    }

    #[test]
    fn reduce_expansion_roundtrip() {
        let x0 = Element::x(0);
        let expanded = x0.diagram().expand_at_leaf(0, &t("(.,.)"));
        assert!(!expanded.is_reduced());
        assert_eq!(expanded.reduce(), *x0.diagram());
    }

    #[test]
    fn group_laws_basic() {
        let id = Element::identity();
        let x0 = Element::x(0);
        let x1 = Element::x(1);
        assert_eq!(id.multiply(&x0), x0);
        assert_eq!(x0.multiply(&id), x0);
        assert_eq!(x0.multiply(&x0.invert()), id);
        assert_eq!(x1.invert().invert(), x1);
        // relation x_n x_k = x_k x_{n+1} for k < n
        assert_eq!(
            Element::x(2).multiply(&Element::x(1)),
            Element::x(1).multiply(&Element::x(3))
        );
        assert_eq!(
            Element::x(3).multiply(&Element::x(1)),
            Element::x(1).multiply(&Element::x(4))
        );
    }

    #[test]
    fn abelianize_values() {
        assert_eq!(Element::x(0).abelianize(), (1, -1));
        assert_eq!(Element::x(1).abelianize(), (0, -1));
        assert_eq!(Element::identity().abelianize(), (0, 0));
        let x0 = Element::x(0);
        let x1 = Element::x(1);
        let comm = x0
            .invert()
            .multiply(&x1.invert())
            .multiply(&x0)
            .multiply(&x1);
        assert_eq!(comm.abelianize(), (0, 0));
        assert!(comm.is_commutator_element());
    }

    #[test]
    fn encode_decode_roundtrip() {
        for e in [
            Element::identity(),
            Element::x(0),
            Element::x(3),
            Element::x(0).multiply(&Element::x(1).invert()),
        ] {
            assert_eq!(Element::decode(&e.encode()), e);
        }
    }

    #[test]
    fn caret_counts() {
        assert_eq!(Element::identity().caret_count(), 0);
        assert_eq!(Element::x(0).caret_count(), 0);
        assert_eq!(Element::x(1).caret_count(), 1);
        assert_eq!(Element::x(2).caret_count(), 1);
        assert_eq!(Element::x(1).invert().caret_count(), 1);
    }

    #[test]
    fn positivity() {
        assert!(Element::identity().is_positive());
        assert!(Element::x(0).is_positive());
        assert!(Element::x(1).multiply(&Element::x(2)).is_positive());
        assert!(!Element::x(0).invert().is_positive());
    }
}

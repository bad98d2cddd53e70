use crate::diagram::Element;
use crate::error::{Error, Result};
use crate::tree::Tree;
use crate::words::{Letter, Word};
use std::fmt;

/// A morphism of the category of binary forests: a forest with `domain`
/// trees; its codomain is the total number of leaves.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ForestMorphism {
    domain: usize,
    trees: Vec<Tree>,
}

impl ForestMorphism {
    pub fn new(trees: Vec<Tree>) -> Result<ForestMorphism> {
        if trees.is_empty() {
            return Err(Error::Structure("a forest needs at least one tree".into()));
        }
        Ok(ForestMorphism { domain: trees.len(), trees })
    }

    pub fn identity(width: usize) -> ForestMorphism {
        ForestMorphism { domain: width, trees: vec![Tree::Leaf; width] }
    }

    /// The generator x_n^(w): w -> w+1, a single caret on tree n.
    pub fn generator(n: usize, w: usize) -> Result<ForestMorphism> {
        if n >= w {
            return Err(Error::Structure(format!("x{n} needs width > {n}, got {w}")));
        }
        let mut trees = vec![Tree::Leaf; w];
        trees[n] = Tree::caret(Tree::Leaf, Tree::Leaf);
        Ok(ForestMorphism { domain: w, trees })
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn codomain(&self) -> usize {
        self.trees.iter().map(Tree::leaves).sum()
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn is_identity(&self) -> bool {
        self.trees.iter().all(Tree::is_leaf)
    }

    pub fn carets(&self) -> usize {
        self.trees.iter().map(Tree::carets).sum()
    }

    /// Exposed carets by the global position of their left leaf.
    fn exposed(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut offset = 0;
        for t in &self.trees {
            for i in t.exposed_carets() {
                out.push(offset + i);
            }
            offset += t.leaves();
        }
        out
    }

    fn remove_exposed(&self, leaf: usize) -> ForestMorphism {
        let mut trees = self.trees.clone();
        let mut offset = 0;
        for t in trees.iter_mut() {
            let n = t.leaves();
            if leaf < offset + n {
                *t = t.remove_exposed_caret(leaf - offset);
                return ForestMorphism { domain: self.domain, trees };
            }
            offset += n;
        }
        panic!("leaf {leaf} out of range");
    }
}

/// Attach the trees of g to the leaves of f, order-preservingly.
pub fn forest_compose(f: &ForestMorphism, g: &ForestMorphism) -> Result<ForestMorphism> {
    if f.codomain() != g.domain {
        return Err(Error::Structure(format!(
            "cannot compose: codomain {} vs domain {}",
            f.codomain(),
            g.domain
        )));
    }
    let mut cursor = 0;
    let mut trees = Vec::with_capacity(f.domain);
    for t in &f.trees {
        let n = t.leaves();
        trees.push(t.attach_all(&g.trees[cursor..cursor + n]));
        cursor += n;
    }
    Ok(ForestMorphism { domain: f.domain, trees })
}

/// The unique nondecreasing-index generator word composing to f: the
/// exponent of x_i counts carets whose leftmost global leaf is i.
pub fn forest_normal_form(f: &ForestMorphism) -> Word {
    let mut letters = Vec::new();
    let mut offset = 0;
    let mut by_leaf = std::collections::BTreeMap::new();
    for t in &f.trees {
        for s in t.caret_spans() {
            *by_leaf.entry(offset + s.lm).or_insert(0usize) += 1;
        }
        offset += t.leaves();
    }
    for (i, a) in by_leaf {
        for _ in 0..a {
            letters.push(Letter::pos(i));
        }
    }
    Word::new(letters)
}

/// Evaluate a nonnegative generator word from a starting width by repeated
/// forest composition.
pub fn forest_eval(word: &Word, start_width: usize) -> Result<ForestMorphism> {
    let mut f = ForestMorphism::identity(start_width);
    for l in &word.letters {
        if l.sign != 1 {
            return Err(Error::Domain("forest words are positive".into()));
        }
        f = forest_compose(&f, &ForestMorphism::generator(l.index, f.codomain())?)?;
    }
    Ok(f)
}

/// Least common right multiple of two forests with equal domains: the
/// treewise tree lcm, returned as the pair of completions (a, b) with
/// f . a = g . b.
pub fn forest_lcm(
    f: &ForestMorphism,
    g: &ForestMorphism,
) -> Result<(ForestMorphism, ForestMorphism)> {
    if f.domain != g.domain {
        return Err(Error::Structure("lcm needs equal domain widths".into()));
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (tf, tg) in f.trees.iter().zip(&g.trees) {
        let join = Tree::lcm(tf, tg);
        a.extend(Tree::refinements(tf, &join));
        b.extend(Tree::refinements(tg, &join));
    }
    Ok((
        ForestMorphism { domain: f.codomain(), trees: a },
        ForestMorphism { domain: g.codomain(), trees: b },
    ))
}

/// A morphism of the groupoid of fractions: p . q^{-1}, from domain(p) to
/// domain(q), held reduced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupoidMorphism {
    p: ForestMorphism,
    q: ForestMorphism,
}

impl GroupoidMorphism {
    pub fn new(p: ForestMorphism, q: ForestMorphism) -> Result<GroupoidMorphism> {
        if p.codomain() != q.codomain() {
            return Err(Error::Structure("fraction halves must share a codomain".into()));
        }
        let mut m = GroupoidMorphism { p, q };
        m.reduce();
        Ok(m)
    }

    pub fn identity(width: usize) -> GroupoidMorphism {
        GroupoidMorphism {
            p: ForestMorphism::identity(width),
            q: ForestMorphism::identity(width),
        }
    }

    pub fn generator(n: usize, w: usize, sign: i8) -> Result<GroupoidMorphism> {
        let split = ForestMorphism::generator(n, w)?;
        let id = ForestMorphism::identity(w + 1);
        if sign == 1 {
            GroupoidMorphism::new(split, id)
        } else {
            GroupoidMorphism::new(id, split)
        }
    }

    pub fn p(&self) -> &ForestMorphism {
        &self.p
    }

    pub fn q(&self) -> &ForestMorphism {
        &self.q
    }

    pub fn source(&self) -> usize {
        self.p.domain
    }

    pub fn target(&self) -> usize {
        self.q.domain
    }

    pub fn invert(&self) -> GroupoidMorphism {
        GroupoidMorphism { p: self.q.clone(), q: self.p.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.p.is_identity() && self.q.is_identity()
    }

    /// Prune simultaneous exposed caret pairs at matching codomain positions.
    fn reduce(&mut self) {
        loop {
            let pe = self.p.exposed();
            let qe = self.q.exposed();
            match pe.into_iter().find(|l| qe.contains(l)) {
                Some(leaf) => {
                    self.p = self.p.remove_exposed(leaf);
                    self.q = self.q.remove_exposed(leaf);
                }
                None => return,
            }
        }
    }

    pub fn is_reduced(&self) -> bool {
        let qe = self.q.exposed();
        !self.p.exposed().iter().any(|l| qe.contains(l))
    }
}

/// (p1 q1^{-1})(p2 q2^{-1}): complete q1 and p2 to a common multiple, then
/// reduce.
pub fn groupoid_compose(
    m1: &GroupoidMorphism,
    m2: &GroupoidMorphism,
) -> Result<GroupoidMorphism> {
    if m1.target() != m2.source() {
        return Err(Error::Structure(format!(
            "cannot compose: target {} vs source {}",
            m1.target(),
            m2.source()
        )));
    }
    let (a, b) = forest_lcm(&m1.q, &m2.p)?;
    GroupoidMorphism::new(forest_compose(&m1.p, &a)?, forest_compose(&m2.q, &b)?)
}

/// One signed groupoid generator x_n^(w) (w -> w+1 when positive, the
/// inverse w+1 -> w when negative).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StrandLetter {
    pub n: usize,
    pub w: usize,
    pub sign: i8,
}

impl StrandLetter {
    pub fn source(&self) -> usize {
        if self.sign == 1 {
            self.w
        } else {
            self.w + 1
        }
    }

    pub fn target(&self) -> usize {
        if self.sign == 1 {
            self.w + 1
        } else {
            self.w
        }
    }
}

/// A width-checked word in the groupoid generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorWord {
    pub start_width: usize,
    pub letters: Vec<StrandLetter>,
}

impl GeneratorWord {
    pub fn new(start_width: usize, letters: Vec<StrandLetter>) -> Result<GeneratorWord> {
        let w = GeneratorWord { start_width, letters };
        w.check()?;
        Ok(w)
    }

    pub fn check(&self) -> Result<()> {
        if self.start_width == 0 {
            return Err(Error::Structure("width must be positive".into()));
        }
        let mut w = self.start_width;
        for l in &self.letters {
            if l.n >= l.w {
                return Err(Error::Structure(format!("x{}^({}) is not a generator", l.n, l.w)));
            }
            if l.source() != w {
                return Err(Error::Structure(format!(
                    "width mismatch: at width {w} but letter expects {}",
                    l.source()
                )));
            }
            w = l.target();
        }
        Ok(())
    }

    pub fn end_width(&self) -> usize {
        self.letters.last().map_or(self.start_width, StrandLetter::target)
    }

    /// Parse tokens like `x2(4)` and `x2(4)^-1`, whitespace separated; `1@W`
    /// denotes the empty word at width W.
    pub fn parse(s: &str) -> Result<GeneratorWord> {
        let s = s.trim();
        if let Some(w) = s.strip_prefix("1@") {
            let width =
                w.trim().parse().map_err(|_| Error::Parse(format!("bad width in {s:?}")))?;
            return GeneratorWord::new(width, Vec::new());
        }
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (body, sign) = match tok.strip_suffix("^-1") {
                Some(b) => (b, -1),
                None => (tok, 1),
            };
            let err = || Error::Parse(format!("bad strand letter {tok:?}"));
            let body = body.strip_prefix('x').ok_or_else(err)?;
            let (n, w) = body.split_once('(').ok_or_else(err)?;
            let w = w.strip_suffix(')').ok_or_else(err)?;
            letters.push(StrandLetter {
                n: n.parse().map_err(|_| err())?,
                w: w.parse().map_err(|_| err())?,
                sign,
            });
        }
        if letters.is_empty() {
            return Err(Error::Parse("empty strand word needs the form 1@W".into()));
        }
        let start = letters[0].source();
        GeneratorWord::new(start, letters)
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1@{}", self.start_width);
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "x{}({})", l.n, l.w)?;
            if l.sign == -1 {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Fold a generator word into its unique reduced fraction.
pub fn canonicalize(word: &GeneratorWord) -> Result<GroupoidMorphism> {
    word.check()?;
    let mut m = GroupoidMorphism::identity(word.start_width);
    for l in &word.letters {
        m = groupoid_compose(&m, &GroupoidMorphism::generator(l.n, l.w, l.sign)?)?;
    }
    Ok(m)
}

/// The isomorphism from 1 -> 1 fractions to the group: p is the top tree, q
/// the bottom tree of a tree diagram.
pub fn fundamental_group_iso(m: &GroupoidMorphism) -> Result<Element> {
    if m.source() != 1 || m.target() != 1 {
        return Err(Error::Domain("fraction must go from width 1 to width 1".into()));
    }
    Element::from_trees(m.p.trees[0].clone(), m.q.trees[0].clone())
}

pub fn fundamental_group_iso_inverse(f: &Element) -> GroupoidMorphism {
    GroupoidMorphism {
        p: ForestMorphism { domain: 1, trees: vec![f.diagram().top.clone()] },
        q: ForestMorphism { domain: 1, trees: vec![f.diagram().bottom.clone()] },
    }
}

/// The spanning-tree generator e_w = x0^(1) x1^(2) ... x_{w-2}^(w-1): the
/// right vine 1 -> w.
pub fn spanning_vine(w: usize) -> ForestMorphism {
    ForestMorphism { domain: 1, trees: vec![Tree::right_vine(w)] }
}

/// Close x_n^(w) (n < w - 1) into a loop at width 1 through the spanning
/// tree: e_w . x_n^(w) . e_{w+1}^{-1}.
pub fn spanning_loop(n: usize, w: usize) -> Result<GroupoidMorphism> {
    if n + 1 >= w {
        return Err(Error::Domain("loop closure needs n < w - 1".into()));
    }
    let p = forest_compose(&spanning_vine(w), &ForestMorphism::generator(n, w)?)?;
    GroupoidMorphism::new(p, spanning_vine(w + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::eval_str;

    #[test]
    fn compose_basics() {
        let id2 = ForestMorphism::identity(2);
        let x0 = ForestMorphism::generator(0, 2).unwrap();
        assert_eq!(forest_compose(&id2, &x0).unwrap(), x0);
        let up = ForestMorphism::identity(3);
        assert_eq!(forest_compose(&x0, &up).unwrap(), x0);
        // x0^(1) . x0^(2) is the left comb with three leaves
        let comb = forest_compose(
            &ForestMorphism::generator(0, 1).unwrap(),
            &ForestMorphism::generator(0, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(comb.trees(), &[Tree::parse("((.,.),.)").unwrap()]);
        assert!(forest_compose(&x0, &x0).is_err());
    }

    #[test]
    fn forest_relations() {
        for w in 2..=6usize {
            for n in 1..w {
                for k in 0..n {
                    let lhs = forest_compose(
                        &ForestMorphism::generator(n, w).unwrap(),
                        &ForestMorphism::generator(k, w + 1).unwrap(),
                    )
                    .unwrap();
                    let rhs = forest_compose(
                        &ForestMorphism::generator(k, w).unwrap(),
                        &ForestMorphism::generator(n + 1, w + 1).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(lhs, rhs, "n={n} k={k} w={w}");
                }
            }
        }
    }

    #[test]
    fn forest_normal_forms() {
        let single = ForestMorphism::generator(0, 2).unwrap();
        assert_eq!(forest_normal_form(&single).to_string(), "x0");
        for n in 0..4 {
            let g = ForestMorphism::generator(n, 5).unwrap();
            assert_eq!(forest_normal_form(&g).to_string(), format!("x{n}"));
        }
        // round trip through evaluation, starting wide enough for every index
        let w = Word::parse("x0 x2 x3 x5 x5").unwrap();
        let e = eval_str("x0 x2 x3 x5 x5").unwrap();
        let f = ForestMorphism::new(e.to_oneway().top.clone()).unwrap();
        assert_eq!(forest_normal_form(&f), w);
        assert_eq!(forest_eval(&w, f.domain()).unwrap(), f);
    }

    #[test]
    fn lcm_properties() {
        let f = ForestMorphism::generator(0, 2).unwrap();
        let g = ForestMorphism::generator(1, 2).unwrap();
        let (a, b) = forest_lcm(&f, &g).unwrap();
        let fa = forest_compose(&f, &a).unwrap();
        assert_eq!(fa, forest_compose(&g, &b).unwrap());
        assert_eq!(fa.codomain(), 4);
        let (a, b) = forest_lcm(&f, &f).unwrap();
        assert!(a.is_identity() && b.is_identity());
        let id = ForestMorphism::identity(2);
        let (a, b) = forest_lcm(&id, &g).unwrap();
        assert_eq!(a, g);
        assert!(b.is_identity());
    }

    #[test]
    fn canonicalize_reductions() {
        // split immediately undone
        let w = GeneratorWord::parse("x0(1) x0(1)^-1").unwrap();
        assert!(canonicalize(&w).unwrap().is_identity());
        // merge then split
        let w = GeneratorWord::parse("x0(1)^-1 x0(1)").unwrap();
        assert_eq!(w.start_width, 2);
        let m = canonicalize(&w).unwrap();
        assert!(m.is_identity());
        assert_eq!(m.source(), 2);
        assert!(GeneratorWord::parse("x0(1) x0(1)").is_err()); // width mismatch
        assert!(GeneratorWord::parse("x3(2)").is_err());
    }

    #[test]
    fn groupoid_laws() {
        let m = canonicalize(&GeneratorWord::parse("x0(1) x1(2) x0(2)^-1").unwrap()).unwrap();
        let minv = m.invert();
        let prod = groupoid_compose(&m, &minv).unwrap();
        assert!(prod.is_identity());
        let id = GroupoidMorphism::identity(m.source());
        assert_eq!(groupoid_compose(&id, &m).unwrap(), m);
    }

    #[test]
    fn iso_on_generators() {
        let id = GroupoidMorphism::identity(1);
        assert!(fundamental_group_iso(&id).unwrap().is_identity());
        for n in 0..4usize {
            for w in n + 2..=6 {
                let looped = spanning_loop(n, w).unwrap();
                assert_eq!(
                    fundamental_group_iso(&looped).unwrap(),
                    Element::x(n),
                    "n={n} w={w}"
                );
            }
        }
        // round trip
        for s in ["x0", "x1 x0^-1", "x2 x4^-1 x0", "1"] {
            let e = eval_str(s).unwrap();
            let m = fundamental_group_iso_inverse(&e);
            assert!(m.is_reduced());
            assert_eq!(fundamental_group_iso(&m).unwrap(), e, "{s}");
        }
    }

    #[test]
    fn cancellativity() {
        let f = ForestMorphism::generator(1, 3).unwrap();
        let a = ForestMorphism::generator(0, 4).unwrap();
        let b = ForestMorphism::generator(2, 4).unwrap();
        assert_ne!(forest_compose(&f, &a).unwrap(), forest_compose(&f, &b).unwrap());
    }
}

use crate::diagram::Element;
use crate::error::{Error, Result};
use crate::forest::OneWayForestDiagram;
use crate::tree::Tree;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

/// A generator letter x_index^sign.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Letter {
    pub index: usize,
    pub sign: i8,
}

impl Letter {
    pub fn pos(index: usize) -> Letter {
        Letter { index, sign: 1 }
    }

    pub fn neg(index: usize) -> Letter {
        Letter { index, sign: -1 }
    }

    pub fn inverse(self) -> Letter {
        Letter { index: self.index, sign: -self.sign }
    }

    pub fn element(self) -> Element {
        let x = Element::x(self.index);
        if self.sign == 1 {
            x
        } else {
            x.invert()
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Alphabet {
    /// The infinite family x0, x1, x2, ...
    Infinite,
    /// Only x0 and x1.
    TwoGenerator,
}

/// A word in the generators, stored left to right as printed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    pub letters: Vec<Letter>,
    alphabet: Alphabet,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word { letters, alphabet: Alphabet::Infinite }
    }

    pub fn two_generator(letters: Vec<Letter>) -> Result<Word> {
        if letters.iter().any(|l| l.index > 1) {
            return Err(Error::Structure("two-generator word has index > 1".into()));
        }
        Ok(Word { letters, alphabet: Alphabet::TwoGenerator })
    }

    pub fn empty() -> Word {
        Word::new(Vec::new())
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| l.sign == 1)
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            alphabet: self.alphabet,
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::new(letters)
    }

    /// Parse a word: whitespace-separated tokens `xN` or `xN^E`; the word "1"
    /// is the empty word.
    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let body = tok
                .strip_prefix('x')
                .ok_or_else(|| Error::Parse(format!("bad letter token {tok:?}")))?;
            let (idx_str, exp_str) = match body.split_once('^') {
                Some((a, b)) => (a, Some(b)),
                None => (body, None),
            };
            let index: usize = idx_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator index in {tok:?}")))?;
            let exp: i64 = match exp_str {
                Some(e) => {
                    e.parse().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?
                }
                None => 1,
            };
            let sign = if exp < 0 { -1 } else { 1 };
            for _ in 0..exp.unsigned_abs() {
                letters.push(Letter { index, sign });
            }
        }
        Ok(Word::new(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let exp = run as i64 * l.sign as i64;
            if exp == 1 {
                write!(f, "x{}", l.index)?;
            } else {
                write!(f, "x{}^{}", l.index, exp)?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Left multiplication by a single generator.
pub fn apply_generator(g: Letter, f: &Element) -> Element {
    g.element().multiply(f)
}

/// Evaluate a word: the rightmost letter acts first, built by successive left
/// multiplication (equivalently, the left-to-right product of the letters).
pub fn eval(w: &Word) -> Element {
    let mut acc = Element::identity();
    for l in w.letters.iter().rev() {
        acc = apply_generator(*l, &acc);
    }
    acc
}

/// Convenience: evaluate a word given as text.
pub fn eval_str(s: &str) -> Result<Element> {
    Ok(eval(&Word::parse(s)?))
}

/// Rewrite a positive word over the infinite family into the {x0, x1}
/// alphabet by substituting x_i = x0^{-(i-1)} x1 x0^{i-1} and merging the
/// adjacent x0 powers.
pub fn lower_to_x0x1(w: &Word) -> Result<Word> {
    if !w.is_positive() {
        return Err(Error::Domain("lowering expects a positive word".into()));
    }
    let idx: Vec<i64> = w.letters.iter().map(|l| l.index as i64).collect();
    let mut letters = Vec::new();
    let push_x0 = |letters: &mut Vec<Letter>, e: i64| {
        let sign = if e < 0 { -1 } else { 1 };
        for _ in 0..e.unsigned_abs() {
            letters.push(Letter { index: 0, sign });
        }
    };
    for (j, &i) in idx.iter().enumerate() {
        let prev = if j == 0 { 1 } else { idx[j - 1] };
        push_x0(&mut letters, prev - i);
        letters.push(Letter::pos(1));
    }
    if let Some(&last) = idx.last() {
        push_x0(&mut letters, last - 1);
    }
    Word::two_generator(letters)
}

/// Letter count of lower_to_x0x1(w) without materializing it.
pub fn lowered_length(w: &Word) -> Result<usize> {
    if !w.is_positive() {
        return Err(Error::Domain("lowering expects a positive word".into()));
    }
    let idx: Vec<i64> = w.letters.iter().map(|l| l.index as i64).collect();
    let mut total = idx.len();
    for (j, &i) in idx.iter().enumerate() {
        let prev = if j == 0 { 1 } else { idx[j - 1] };
        total += (prev - i).unsigned_abs() as usize;
    }
    if let Some(&last) = idx.last() {
        total += (last - 1).unsigned_abs() as usize;
    }
    Ok(total)
}

/// Per-forest caret census: for each caret of the forest, its leftmost global
/// leaf, rightmost global leaf, and depth below its tree's root.
fn forest_carets(forest: &[Tree]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for t in forest {
        for s in t.caret_spans() {
            out.push((s.lm + offset, s.rm + offset, s.depth));
        }
        offset += t.leaves();
    }
    out
}

fn exponents_by_leftmost_leaf(forest: &[Tree]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for (lm, _, _) in forest_carets(forest) {
        *m.entry(lm).or_insert(0) += 1;
    }
    m
}

/// The unique normal form x0^{a0}…xn^{an} xn^{-bn}…x0^{-b0}, read off the
/// caret leaf positions of the one-way forest pair of the reduced diagram.
pub fn normal_form(f: &Element) -> Word {
    let d = OneWayForestDiagram::from_element(f);
    let mut letters = Vec::new();
    for (i, a) in exponents_by_leftmost_leaf(&d.top) {
        for _ in 0..a {
            letters.push(Letter::pos(i));
        }
    }
    for (i, b) in exponents_by_leftmost_leaf(&d.bottom).into_iter().rev() {
        for _ in 0..b {
            letters.push(Letter::neg(i));
        }
    }
    Word::new(letters)
}

/// The caret construction order for the anti-normal form: carets are built
/// left to right, so order by rightmost leaf, then deeper carets first.
fn anti_normal_build_order(forest: &[Tree]) -> Vec<(usize, usize, usize)> {
    let mut carets = forest_carets(forest);
    carets.sort_by_key(|&(_, rm, depth)| (rm, usize::MAX - depth));
    carets
}

/// The unique anti-normal word for a positive element (indices weakly push
/// left: each next letter has index at least the previous minus one, reading
/// in construction order).
pub fn anti_normal_form(f: &Element) -> Result<Word> {
    if !f.is_positive() {
        return Err(Error::Domain("anti-normal form requires a positive element".into()));
    }
    let d = OneWayForestDiagram::from_element(f);
    let build = anti_normal_build_order(&d.top);
    let mut letters = Vec::new();
    for (j, &(lm, _, _)) in build.iter().enumerate() {
        let earlier = build[..j].iter().filter(|&&(_, rm, _)| rm < lm).count();
        letters.push(Letter::pos(lm - earlier));
    }
    letters.reverse();
    Ok(Word::new(letters))
}

/// The four relation-derived move schemata and their restricted inverses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MoveKind {
    /// x_n x_k -> x_k x_{n+1} (n > k)
    Forward,
    /// x_n^{-1} x_k -> x_k x_{n+1}^{-1} (n > k)
    ForwardNegLeft,
    /// x_k^{-1} x_n -> x_{n+1} x_k^{-1} (k < n)
    ForwardNegRight,
    /// x_k^{-1} x_n^{-1} -> x_{n+1}^{-1} x_k^{-1} (k < n)
    ForwardNegBoth,
    /// x_k x_m -> x_{m-1} x_k (m >= k+2)
    Inverse,
    /// x_k x_m^{-1} -> x_{m-1}^{-1} x_k (m >= k+2)
    InverseNegLeft,
    /// x_m x_k^{-1} -> x_k^{-1} x_{m-1} (m >= k+2)
    InverseNegRight,
    /// x_m^{-1} x_k^{-1} -> x_k^{-1} x_{m-1}^{-1} (m >= k+2)
    InverseNegBoth,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RewriteMove {
    pub position: usize,
    pub kind: MoveKind,
    pub result: Word,
}

fn move_on_pair(a: Letter, b: Letter) -> Vec<(MoveKind, Letter, Letter)> {
    use MoveKind::*;
    let mut out = Vec::new();
    match (a.sign, b.sign) {
        (1, 1) => {
            if a.index > b.index {
                out.push((Forward, Letter::pos(b.index), Letter::pos(a.index + 1)));
            }
            if b.index >= a.index + 2 {
                out.push((Inverse, Letter::pos(b.index - 1), Letter::pos(a.index)));
            }
        }
        (-1, 1) => {
            if a.index > b.index {
                out.push((ForwardNegLeft, Letter::pos(b.index), Letter::neg(a.index + 1)));
            }
            if a.index < b.index {
                out.push((ForwardNegRight, Letter::pos(b.index + 1), Letter::neg(a.index)));
            }
        }
        (1, -1) => {
            if b.index >= a.index + 2 {
                out.push((InverseNegLeft, Letter::neg(b.index - 1), Letter::pos(a.index)));
            }
            if a.index >= b.index + 2 {
                out.push((InverseNegRight, Letter::neg(b.index), Letter::pos(a.index - 1)));
            }
        }
        (-1, -1) => {
            if a.index < b.index {
                out.push((ForwardNegBoth, Letter::neg(b.index + 1), Letter::neg(a.index)));
            }
            if a.index >= b.index + 2 {
                out.push((InverseNegBoth, Letter::neg(b.index), Letter::neg(a.index - 1)));
            }
        }
        _ => unreachable!(),
    }
    out
}

/// Every applicable move (forward schemata and restricted inverses) at every
/// adjacent pair of letters.
pub fn rewrite_moves(w: &Word) -> Vec<RewriteMove> {
    let mut out = Vec::new();
    for i in 0..w.letters.len().saturating_sub(1) {
        for (kind, a, b) in move_on_pair(w.letters[i], w.letters[i + 1]) {
            let mut letters = w.letters.clone();
            letters[i] = a;
            letters[i + 1] = b;
            out.push(RewriteMove { position: i, kind, result: Word::new(letters) });
        }
    }
    out
}

/// Test oracle: reach the normal form by rewriting moves plus the evident
/// cancellations, instead of reading the forest diagram.
pub fn normal_form_by_rewriting(w: &Word) -> Word {
    let mut letters = w.letters.clone();
    'outer: loop {
        // adjacent inverse pair cancellation
        for i in 0..letters.len().saturating_sub(1) {
            if letters[i + 1] == letters[i].inverse() {
                letters.drain(i..i + 2);
                continue 'outer;
            }
        }
        // forward moves
        for i in 0..letters.len().saturating_sub(1) {
            let pair = move_on_pair(letters[i], letters[i + 1]);
            if let Some((_, a, b)) = pair
                .into_iter()
                .find(|(k, _, _)| {
                    matches!(
                        k,
                        MoveKind::Forward
                            | MoveKind::ForwardNegLeft
                            | MoveKind::ForwardNegRight
                            | MoveKind::ForwardNegBoth
                    )
                })
            {
                letters[i] = a;
                letters[i + 1] = b;
                continue 'outer;
            }
        }
        // uniqueness condition: a trailing x_n and leading x_n^{-1} with no
        // intervening index n+1 collapse, shifting the letters in between
        let split = letters.iter().position(|l| l.sign == -1).unwrap_or(letters.len());
        for p in (0..split).rev() {
            let n = letters[p].index;
            if let Some(q) = (split..letters.len()).find(|&q| letters[q].index == n) {
                let between = &letters[p + 1..q];
                if between.iter().all(|l| l.index >= n + 2) {
                    letters.remove(q);
                    letters.remove(p);
                    for l in &mut letters[p..q - 1] {
                        l.index -= 1;
                    }
                    continue 'outer;
                }
            }
        }
        break;
    }
    Word::new(letters)
}

/// Index criteria for positive words: normal iff the printed indices are
/// nondecreasing; anti-normal iff, in caret construction order (reverse of
/// printed order), each index is at least the previous minus one.
pub struct OrderFlags {
    pub is_normal: bool,
    pub is_anti_normal: bool,
}

pub fn caret_order_check(w: &Word) -> Result<OrderFlags> {
    if !w.is_positive() {
        return Err(Error::Domain("caret order check expects a positive word".into()));
    }
    let idx: Vec<usize> = w.letters.iter().map(|l| l.index).collect();
    let is_normal = idx.windows(2).all(|p| p[0] <= p[1]);
    let is_anti_normal = idx.windows(2).all(|p| p[0] + 1 >= p[1]);
    Ok(OrderFlags { is_normal, is_anti_normal })
}

/// The graph of all positive words for a positive element: directed edges are
/// the forward moves x_n x_k -> x_k x_{n+1}; the closure also walks inverse
/// moves to reach every word.
#[derive(Debug)]
pub struct WordGraph {
    pub vertices: Vec<Word>,
    /// Sorted directed edge list (indices into `vertices`).
    pub edges: Vec<(usize, usize)>,
    pub source: usize,
    pub sink: usize,
}

pub const DEFAULT_WORD_GRAPH_CAP: usize = 1_000_000;

pub fn word_graph(f: &Element) -> Result<WordGraph> {
    word_graph_capped(f, DEFAULT_WORD_GRAPH_CAP)
}

pub fn word_graph_capped(f: &Element, cap: usize) -> Result<WordGraph> {
    if !f.is_positive() {
        return Err(Error::Domain("word graph requires a positive element".into()));
    }
    let start: Vec<usize> = normal_form(f).letters.iter().map(|l| l.index).collect();
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut verts: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone(), 0);
    verts.push(start);
    queue.push_back(0usize);
    while let Some(v) = queue.pop_front() {
        let w = verts[v].clone();
        let mut neighbors = Vec::new();
        for i in 0..w.len().saturating_sub(1) {
            let (a, b) = (w[i], w[i + 1]);
            if a > b {
                let mut nw = w.clone();
                nw[i] = b;
                nw[i + 1] = a + 1;
                neighbors.push(nw);
            }
            if b >= a + 2 {
                let mut nw = w.clone();
                nw[i] = b - 1;
                nw[i + 1] = a;
                neighbors.push(nw);
            }
        }
        for nw in neighbors {
            if !seen.contains_key(&nw) {
                if verts.len() >= cap {
                    return Err(Error::Resource(format!("word graph exceeds {cap} vertices")));
                }
                seen.insert(nw.clone(), verts.len());
                verts.push(nw);
                queue.push_back(seen.len() - 1);
            }
        }
    }
    // canonical vertex order
    let mut order: Vec<usize> = (0..verts.len()).collect();
    order.sort_by(|&a, &b| verts[a].cmp(&verts[b]));
    let mut rank = vec![0usize; verts.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let vertices: Vec<Word> = order
        .iter()
        .map(|&i| Word::new(verts[i].iter().map(|&n| Letter::pos(n)).collect()))
        .collect();
    let mut edges = Vec::new();
    for (old, w) in verts.iter().enumerate() {
        for i in 0..w.len().saturating_sub(1) {
            if w[i] > w[i + 1] {
                let mut nw = w.clone();
                let (a, b) = (w[i], w[i + 1]);
                nw[i] = b;
                nw[i + 1] = a + 1;
                edges.push((rank[old], rank[seen[&nw]]));
            }
        }
    }
    edges.sort();
    edges.dedup();
    let sinks: Vec<usize> =
        (0..vertices.len()).filter(|&v| edges.iter().all(|&(s, _)| s != v)).collect();
    let sources: Vec<usize> =
        (0..vertices.len()).filter(|&v| edges.iter().all(|&(_, t)| t != v)).collect();
    if sources.len() != 1 || sinks.len() != 1 {
        return Err(Error::Structure("word graph lacks a unique source/sink".into()));
    }
    Ok(WordGraph { vertices, edges, source: sources[0], sink: sinks[0] })
}

/// Brute-force count of linear extensions of the caret partial order of a
/// positive element (a caret precedes another if it is an ancestor).
pub fn linear_extensions_brute(f: &Element) -> Result<u64> {
    if !f.is_positive() {
        return Err(Error::Domain("caret order requires a positive element".into()));
    }
    let d = OneWayForestDiagram::from_element(f);
    let carets = forest_carets(&d.top);
    let n = carets.len();
    // ancestor relation: caret j is an ancestor of i if its span contains i's
    // strictly (same-tree spans nest)
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j
                && carets[j].0 <= carets[i].0
                && carets[i].1 <= carets[j].1
                && carets[j].2 < carets[i].2
            {
                parents[i].push(j);
            }
        }
    }
    fn rec(placed: &mut Vec<bool>, count_placed: usize, parents: &[Vec<usize>]) -> u64 {
        let n = placed.len();
        if count_placed == n {
            return 1;
        }
        let mut total = 0;
        for i in 0..n {
            if !placed[i] && parents[i].iter().all(|&p| placed[p]) {
                placed[i] = true;
                total += rec(placed, count_placed + 1, parents);
                placed[i] = false;
            }
        }
        total
    }
    Ok(rec(&mut vec![false; n], 0, &parents))
}

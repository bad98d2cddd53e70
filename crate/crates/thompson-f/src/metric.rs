use crate::diagram::Element;
use crate::error::{Error, Result};
use crate::forest::TwoWayForestDiagram;
use crate::tree::Tree;
use crate::words::{Letter, Word};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpaceLabel {
    L,
    N,
    R,
    I,
}

/// Weight of a support space from its (top, bottom) label pair.
pub fn weight(top: SpaceLabel, bottom: SpaceLabel) -> u32 {
    use SpaceLabel::*;
    match (top, bottom) {
        (L, L) => 2,
        (L, _) => 1,
        (N, L) => 1,
        (N, _) => 2,
        (R, L) => 1,
        (R, N) | (R, R) => 2,
        (R, I) => 0,
        (I, L) => 1,
        (I, N) => 2,
        (I, R) | (I, I) => 0,
    }
}

/// A two-way forest diagram together with the label pair and weight of every
/// space in its support.
#[derive(Clone, Debug)]
pub struct LabeledDiagram {
    pub diagram: TwoWayForestDiagram,
    /// One entry per support space (gap between consecutive leaves).
    pub labels: Vec<(SpaceLabel, SpaceLabel)>,
    pub weights: Vec<u32>,
}

impl LabeledDiagram {
    pub fn l0(&self) -> u32 {
        self.weights.iter().sum()
    }

    pub fn l1(&self) -> u32 {
        self.diagram.caret_count() as u32
    }
}

/// Label every space of one forest. A space is the gap between leaves g and
/// g+1; it is exterior if those leaves lie in different trees. Priorities:
/// exterior left of the pointer is L; a space immediately left of a caret is
/// N unless already L; remaining exterior spaces are R, interior ones I.
fn forest_labels(forest: &[Tree], pointer: usize) -> Vec<SpaceLabel> {
    let mut starts = Vec::new();
    let mut acc = 0;
    for t in forest {
        starts.push(acc);
        acc += t.leaves();
    }
    let total = acc;
    // boundary[g+1] = Some(i) when leaf g+1 starts tree i
    let mut boundary = vec![None; total];
    for (i, &s) in starts.iter().enumerate() {
        boundary[s] = Some(i);
    }
    let mut left_of_caret = vec![false; total];
    for (i, t) in forest.iter().enumerate() {
        for s in t.caret_spans() {
            left_of_caret[starts[i] + s.lm] = true;
        }
    }
    (1..total)
        .map(|leaf| match boundary[leaf] {
            Some(i) if i <= pointer => SpaceLabel::L,
            _ if left_of_caret[leaf] => SpaceLabel::N,
            Some(_) => SpaceLabel::R,
            None => SpaceLabel::I,
        })
        .collect()
}

pub fn label_spaces(f: &Element) -> LabeledDiagram {
    let diagram = f.to_twoway();
    let top = forest_labels(&diagram.top, diagram.top_pointer);
    let bottom = forest_labels(&diagram.bottom, diagram.bottom_pointer);
    let labels: Vec<(SpaceLabel, SpaceLabel)> = top.into_iter().zip(bottom).collect();
    let weights = labels.iter().map(|&(t, b)| weight(t, b)).collect();
    LabeledDiagram { diagram, labels, weights }
}

/// The {x0,x1} word length: sum of space weights plus total carets.
pub fn length(f: &Element) -> u32 {
    let d = label_spaces(f);
    d.l0() + d.l1()
}

/// For strongly positive elements the formula collapses to 2n(f) + c(f),
/// where n(f) counts top-forest spaces that are exterior or immediately left
/// of a caret.
pub fn length_strongly_positive(f: &Element) -> Result<u32> {
    if !f.classify().strongly_positive {
        return Err(Error::Domain("formula requires a strongly positive element".into()));
    }
    let d = f.to_twoway();
    let labels = forest_labels(&d.top, 0);
    // with the pointer leftmost nothing is labeled L, so exterior spaces read
    // R or N, and interior ones immediately left of a caret read N
    let n = labels.iter().filter(|l| matches!(l, SpaceLabel::N | SpaceLabel::R)).count() as u32;
    Ok(2 * n + d.caret_count() as u32)
}

/// Support gap immediately right of the current (top-pointed) tree, if it is
/// inside the support.
fn right_space(d: &TwoWayForestDiagram) -> Option<usize> {
    if d.top_pointer + 1 == d.top.len() {
        None
    } else {
        let leaves: usize = d.top[..=d.top_pointer].iter().map(Tree::leaves).sum();
        Some(leaves - 1)
    }
}

fn left_space(d: &TwoWayForestDiagram) -> Option<usize> {
    if d.top_pointer == 0 {
        None
    } else {
        let leaves: usize = d.top[..d.top_pointer].iter().map(Tree::leaves).sum();
        Some(leaves - 1)
    }
}

/// True when left multiplication by x1 would cancel an exposed bottom caret
/// instead of creating a top one.
fn x1_cancels(d: &TwoWayForestDiagram) -> bool {
    let p = d.top_pointer;
    if p + 1 >= d.top.len() || !d.top[p].is_leaf() || !d.top[p + 1].is_leaf() {
        return false;
    }
    let leaf: usize = d.top[..p].iter().map(Tree::leaves).sum();
    let mut acc = 0;
    for t in &d.bottom {
        if leaf < acc + t.leaves() {
            return leaf + 1 < acc + t.leaves()
                && t.exposed_carets().contains(&(leaf - acc));
        }
        acc += t.leaves();
    }
    false
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GeneratorEffect {
    pub x0: i8,
    pub x0_inv: i8,
    pub x1: i8,
    pub x1_inv: i8,
}

impl GeneratorEffect {
    pub fn get(&self, l: Letter) -> i8 {
        match (l.index, l.sign) {
            (0, 1) => self.x0,
            (0, -1) => self.x0_inv,
            (1, 1) => self.x1,
            (1, -1) => self.x1_inv,
            _ => panic!("effect defined only for x0, x1"),
        }
    }
}

/// Authoritative effect of each generator on the length, by recomputation.
pub fn generator_effect(f: &Element) -> GeneratorEffect {
    let l = length(f) as i64;
    let eff = |g: Element| -> i8 { (length(&g.multiply(f)) as i64 - l) as i8 };
    GeneratorEffect {
        x0: eff(Element::x(0)),
        x0_inv: eff(Element::x(0).invert()),
        x1: eff(Element::x(1)),
        x1_inv: eff(Element::x(1).invert()),
    }
}

/// The same signs predicted purely from the labeled diagram, kept as an
/// independent cross-check of the case analysis.
pub fn generator_effect_predicted(f: &Element) -> GeneratorEffect {
    if f.is_identity() {
        return GeneratorEffect { x0: 1, x0_inv: 1, x1: 1, x1_inv: 1 };
    }
    let ld = label_spaces(f);
    let d = &ld.diagram;
    let rs = right_space(d).map(|g| ld.labels[g]);
    let ls = left_space(d).map(|g| ld.labels[g]);
    use SpaceLabel::*;

    // x0: length decreases unless the support grows, the right space has
    // bottom label L and survives, or the right space is (R, I)
    let larger = d.top_pointer + 1 == d.top.len();
    let smaller_right = d.top_pointer == 0
        && d.top.len() > 1
        && d.top[0].is_leaf()
        && d.bottom[0].is_leaf()
        && d.bottom_pointer > 0;
    let x0 = if larger
        || matches!(rs, Some((_, L)) if !smaller_right)
        || rs == Some((R, I))
    {
        1
    } else {
        -1
    };

    // x0^{-1}: decreases exactly when the support shrinks, or the left space
    // is (L, L), or it is (L, I) with a trivial current tree
    let smaller_left = d.top_pointer + 1 == d.top.len()
        && d.top.len() > 1
        && d.top.last() == Some(&Tree::Leaf)
        && d.bottom.last() == Some(&Tree::Leaf)
        && d.bottom_pointer + 1 < d.bottom.len();
    let x0_inv = if smaller_left
        || ls == Some((L, L))
        || (ls == Some((L, I)) && d.top[d.top_pointer].is_leaf())
    {
        -1
    } else {
        1
    };

    // x1: cancelling a bottom caret always decreases; creating a top caret
    // decreases exactly when the right space is (R, R)
    let x1 = if x1_cancels(d) || rs == Some((R, R)) { -1 } else { 1 };

    // x1^{-1}: a trivial current tree grows a bottom caret (+1); otherwise
    // the removed top caret helps unless the uncovered right space of the
    // result reads (R, R)
    let x1_inv = if d.top[d.top_pointer].is_leaf() {
        1
    } else {
        let g = d.apply_letter(1, -1);
        let gl = label_spaces(&g.to_element());
        let grs = right_space(&gl.diagram).map(|s| gl.labels[s]);
        if grs == Some((R, R)) {
            1
        } else {
            -1
        }
    };

    GeneratorEffect { x0, x0_inv, x1, x1_inv }
}

/// A minimum-length {x0, x1} word for f, built by peeling letters that
/// strictly decrease the length: prefer an x1 that cancels a bottom caret,
/// then an x1^{-1} that removes a helpful top caret, then a pointer move.
pub fn geodesic_word(f: &Element) -> Word {
    let mut cur = f.clone();
    let mut letters = Vec::new();
    while !cur.is_identity() {
        let l = length(&cur);
        let d = cur.to_twoway();
        let candidates = [
            (Letter::pos(1), x1_cancels(&d)),
            (Letter::neg(1), !d.top[d.top_pointer].is_leaf()),
            (Letter::pos(0), true),
            (Letter::neg(0), true),
            (Letter::pos(1), true),
            (Letter::neg(1), true),
        ];
        let mut advanced = false;
        for (s, enabled) in candidates {
            if !enabled {
                continue;
            }
            let next = s.element().multiply(&cur);
            if length(&next) < l {
                letters.push(s.inverse());
                cur = next;
                advanced = true;
                break;
            }
        }
        assert!(advanced, "no generator decreases the length of {cur}");
    }
    Word::two_generator(letters).unwrap()
}

/// Width-based length bounds: left-sided elements satisfy l >= 2w and
/// right-sided ones l >= w; elements that are neither pass vacuously.
pub fn left_sided_bound_check(f: &Element) -> bool {
    let c = f.classify();
    let l = length(f) as usize;
    (!c.left_sided || l >= 2 * c.width) && (!c.right_sided || l >= c.width)
}

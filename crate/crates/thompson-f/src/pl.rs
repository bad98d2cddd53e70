use crate::diagram::Element;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::tree::Tree;
use num::bigint::BigInt;
use num::Zero;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum DomainKind {
    /// [0,1], endpoints fixed.
    Unit,
    /// [0,inf), 0 fixed, eventually t + n.
    HalfLine,
    /// R, eventually t + m on the left and t + n on the right.
    Line,
}

/// An exact, strictly increasing piecewise-linear map with dyadic breakpoints
/// and power-of-2 slopes, canonicalized (no redundant collinear breakpoints).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    kind: DomainKind,
    /// Breakpoints (x, y), strictly increasing in both coordinates. For Unit
    /// this includes (0,0) and (1,1).
    points: Vec<(Dyadic, Dyadic)>,
    /// Translation left of the first breakpoint (Line only).
    left_offset: BigInt,
    /// Translation right of the last breakpoint (Line and HalfLine).
    right_offset: BigInt,
}

/// Exponent s with hi - lo = 2^s * (hi' - lo'), if the ratio is a power of 2.
fn slope_log2(dx: &Dyadic, dy: &Dyadic) -> Option<i64> {
    fn split(d: &Dyadic) -> (BigInt, i64) {
        let mut n = d.numerator().clone();
        let mut v = -(d.exponent() as i64);
        while !n.is_zero() && (&n % 2u8).is_zero() {
            n /= 2;
            v += 1;
        }
        (n, v)
    }
    let (on, ov) = split(dx);
    let (nn, nv) = split(dy);
    if on == nn {
        Some(nv - ov)
    } else {
        None
    }
}

impl PLMap {
    pub fn identity(kind: DomainKind) -> PLMap {
        let points = match kind {
            DomainKind::Unit => vec![(Dyadic::zero(), Dyadic::zero()), (Dyadic::one(), Dyadic::one())],
            DomainKind::HalfLine => vec![(Dyadic::zero(), Dyadic::zero())],
            DomainKind::Line => vec![],
        };
        PLMap { kind, points, left_offset: BigInt::zero(), right_offset: BigInt::zero() }
    }

    pub fn new(
        kind: DomainKind,
        points: Vec<(Dyadic, Dyadic)>,
        left_offset: BigInt,
        right_offset: BigInt,
    ) -> Result<PLMap> {
        let mut m = PLMap { kind, points, left_offset, right_offset };
        match kind {
            DomainKind::Unit => {
                m.left_offset = BigInt::zero();
                m.right_offset = BigInt::zero();
            }
            DomainKind::HalfLine => m.left_offset = BigInt::zero(),
            DomainKind::Line => {}
        }
        m.validate()?;
        m.canonicalize();
        Ok(m)
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn points(&self) -> &[(Dyadic, Dyadic)] {
        &self.points
    }

    pub fn left_offset(&self) -> &BigInt {
        &self.left_offset
    }

    pub fn right_offset(&self) -> &BigInt {
        &self.right_offset
    }

    fn validate(&self) -> Result<()> {
        match self.kind {
            DomainKind::Unit => {
                let zero = (Dyadic::zero(), Dyadic::zero());
                let one = (Dyadic::one(), Dyadic::one());
                if self.points.first() != Some(&zero) || self.points.last() != Some(&one) {
                    return Err(Error::Structure("unit map must fix 0 and 1".into()));
                }
            }
            DomainKind::HalfLine => {
                if self.points.first() != Some(&(Dyadic::zero(), Dyadic::zero())) {
                    return Err(Error::Structure("half-line map must fix 0".into()));
                }
            }
            DomainKind::Line => {}
        }
        for w in self.points.windows(2) {
            let dx = &w[1].0 - &w[0].0;
            let dy = &w[1].1 - &w[0].1;
            if !(Dyadic::zero() < dx && Dyadic::zero() < dy) {
                return Err(Error::Structure("breakpoints must be strictly increasing".into()));
            }
            if slope_log2(&dx, &dy).is_none() {
                return Err(Error::Structure("segment slope is not a power of 2".into()));
            }
        }
        Ok(())
    }

    fn canonicalize(&mut self) {
        // drop interior collinear points
        let mut i = 1;
        while i + 1 < self.points.len() {
            let a = &self.points[i - 1];
            let b = &self.points[i];
            let c = &self.points[i + 1];
            let s1 = slope_log2(&(&b.0 - &a.0), &(&b.1 - &a.1));
            let s2 = slope_log2(&(&c.0 - &b.0), &(&c.1 - &b.1));
            if s1 == s2 {
                self.points.remove(i);
            } else {
                i += 1;
            }
        }
        if self.kind == DomainKind::Line {
            // ends that continue the outer translations are redundant
            loop {
                let n = self.points.len();
                if n >= 2 {
                    let (x, y) = &self.points[0];
                    let next = &self.points[1];
                    let on_line = &(y - x) == &Dyadic::new(self.left_offset.clone(), 0);
                    let slope1 = slope_log2(&(&next.0 - x), &(&next.1 - y)) == Some(0);
                    if on_line && slope1 {
                        self.points.remove(0);
                        continue;
                    }
                }
                if n >= 2 {
                    let (x, y) = &self.points[n - 1];
                    let prev = &self.points[n - 2];
                    let on_line = &(y - x) == &Dyadic::new(self.right_offset.clone(), 0);
                    let slope1 = slope_log2(&(x - &prev.0), &(y - &prev.1)) == Some(0);
                    if on_line && slope1 {
                        self.points.pop();
                        continue;
                    }
                }
                if self.points.len() == 1 && self.left_offset == self.right_offset {
                    let (x, y) = &self.points[0];
                    if &(y - x) == &Dyadic::new(self.left_offset.clone(), 0) {
                        self.points.clear();
                        continue;
                    }
                }
                break;
            }
        }
    }

    pub fn eval(&self, t: &Dyadic) -> Dyadic {
        if self.points.is_empty() {
            return t + &Dyadic::new(self.left_offset.clone(), 0);
        }
        let first = &self.points[0];
        if t < &first.0 {
            return match self.kind {
                DomainKind::Line => t + &Dyadic::new(self.left_offset.clone(), 0),
                _ => panic!("evaluation outside domain"),
            };
        }
        let last = self.points.last().unwrap();
        if t > &last.0 {
            return match self.kind {
                DomainKind::Unit => panic!("evaluation outside domain"),
                _ => t + &Dyadic::new(self.right_offset.clone(), 0),
            };
        }
        // find segment
        for w in self.points.windows(2) {
            if t >= &w[0].0 && t <= &w[1].0 {
                let s = slope_log2(&(&w[1].0 - &w[0].0), &(&w[1].1 - &w[0].1)).unwrap();
                return &w[0].1 + &(t - &w[0].0).mul_pow2(s);
            }
        }
        // t equals the single point
        self.points[0].1.clone()
    }

    pub fn invert(&self) -> PLMap {
        PLMap {
            kind: self.kind,
            points: self.points.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
            left_offset: -&self.left_offset,
            right_offset: -&self.right_offset,
        }
    }

    /// Composition under the convention (fg)(t) = g(f(t)): self first.
    pub fn compose(&self, g: &PLMap) -> PLMap {
        assert_eq!(self.kind, g.kind, "domain kinds must match");
        let finv = self.invert();
        let mut xs: Vec<Dyadic> = self.points.iter().map(|(x, _)| x.clone()).collect();
        for (x, _) in &g.points {
            // pull g's breakpoints back through self where they land inside
            // the relevant range; for Line/HalfLine all pull-backs are valid
            match self.kind {
                DomainKind::Unit | DomainKind::HalfLine | DomainKind::Line => {
                    xs.push(finv.eval(x))
                }
            }
        }
        xs.sort();
        xs.dedup();
        let points: Vec<(Dyadic, Dyadic)> =
            xs.into_iter().map(|x| (x.clone(), g.eval(&self.eval(&x)))).collect();
        let mut m = PLMap {
            kind: self.kind,
            points,
            left_offset: &self.left_offset + &g.left_offset,
            right_offset: &self.right_offset + &g.right_offset,
        };
        m.canonicalize();
        m
    }

    /// Structural check of the slope/breakpoint conditions.
    pub fn check_invariants(&self) -> Result<()> {
        self.validate()
    }
}

/// Left endpoints of the leaf intervals of `t` subdividing [lo, hi), then hi.
fn boundaries(t: &Tree, lo: &Dyadic, hi: &Dyadic, out: &mut Vec<Dyadic>) {
    match t {
        Tree::Leaf => out.push(lo.clone()),
        Tree::Caret(l, r) => {
            let mid = (lo + hi).mul_pow2(-1);
            boundaries(l, lo, &mid, out);
            boundaries(r, &mid, hi, out);
        }
    }
}

/// The PL homeomorphism of [0,1] sending the top-tree subdivision linearly
/// onto the bottom-tree subdivision.
pub fn to_pl_unit(f: &Element) -> PLMap {
    let d = f.diagram();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    boundaries(&d.top, &Dyadic::zero(), &Dyadic::one(), &mut xs);
    boundaries(&d.bottom, &Dyadic::zero(), &Dyadic::one(), &mut ys);
    xs.push(Dyadic::one());
    ys.push(Dyadic::one());
    let points = xs.into_iter().zip(ys).collect();
    let mut m = PLMap {
        kind: DomainKind::Unit,
        points,
        left_offset: BigInt::zero(),
        right_offset: BigInt::zero(),
    };
    m.canonicalize();
    m
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} [", self.kind)?;
        for (i, (x, y)) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({x},{y})")?;
        }
        write!(f, "] m={} n={}", self.left_offset, self.right_offset)
    }
}

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

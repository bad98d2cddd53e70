use crate::diagram::Element;
use crate::error::{Error, Result};
use crate::metric::{generator_effect, label_spaces, length, SpaceLabel};
use crate::words::Letter;
use std::collections::{HashMap, VecDeque};

/// Environment variable bounding the number of elements any enumeration may
/// materialize.
pub const MAX_ELEMENTS_ENV: &str = "FGROUP_MAX_ELEMENTS";
const DEFAULT_MAX_ELEMENTS: usize = 10_000_000;

pub fn element_budget() -> usize {
    std::env::var(MAX_ELEMENTS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_ELEMENTS)
}

fn generators() -> [Element; 4] {
    [
        Element::x(0),
        Element::x(0).invert(),
        Element::x(1),
        Element::x(1).invert(),
    ]
}

/// The ball of a given radius in the left Cayley graph of F over {x0, x1}:
/// edges join f and sf for generators s.
pub struct Ball {
    radius: u32,
    members: HashMap<Vec<u8>, u32>,
    spheres: Vec<usize>,
}

impl Ball {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sphere sizes per radius, index 0 = {identity}.
    pub fn spheres(&self) -> &[usize] {
        &self.spheres
    }

    pub fn contains(&self, f: &Element) -> bool {
        self.members.contains_key(&f.encode())
    }

    pub fn distance_from_identity(&self, f: &Element) -> Option<u32> {
        self.members.get(&f.encode()).copied()
    }

    pub fn members(&self) -> &HashMap<Vec<u8>, u32> {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = (Element, u32)> + '_ {
        self.members.iter().map(|(k, &d)| (Element::decode(k), d))
    }
}

pub fn ball(radius: u32) -> Result<Ball> {
    ball_capped(radius, element_budget())
}

pub fn ball_capped(radius: u32, max_elements: usize) -> Result<Ball> {
    let gens = generators();
    let mut members = HashMap::new();
    let mut spheres = vec![1usize];
    let mut frontier = vec![Element::identity()];
    members.insert(Element::identity().encode(), 0);
    for r in 1..=radius {
        let mut next = Vec::new();
        for f in &frontier {
            for g in &gens {
                let h = g.multiply(f);
                let key = h.encode();
                if !members.contains_key(&key) {
                    if members.len() >= max_elements {
                        return Err(Error::Resource(format!(
                            "ball exceeds {max_elements} elements at radius {r}; spheres so far: {spheres:?}"
                        )));
                    }
                    members.insert(key, r);
                    next.push(h);
                }
            }
        }
        spheres.push(next.len());
        frontier = next;
    }
    Ok(Ball { radius, members, spheres })
}

/// Distance in the left Cayley graph: d(g, h) = l(g h^{-1}).
pub fn distance(g: &Element, h: &Element) -> u32 {
    length(&g.multiply(&h.invert()))
}

/// BFS distance from g to h using only vertices of the ball.
pub fn in_ball_distance(g: &Element, h: &Element, ball: &Ball) -> Option<u32> {
    if !ball.contains(g) || !ball.contains(h) {
        return None;
    }
    if g == h {
        return Some(0);
    }
    let gens = generators();
    let target = h.encode();
    let mut dist: HashMap<Vec<u8>, u32> = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(g.encode(), 0);
    queue.push_back(g.clone());
    while let Some(f) = queue.pop_front() {
        let d = dist[&f.encode()];
        for s in &gens {
            let n = s.multiply(&f);
            let key = n.encode();
            if key == target {
                return Some(d + 1);
            }
            if ball.members.contains_key(&key) && !dist.contains_key(&key) {
                dist.insert(key, d + 1);
                queue.push_back(n);
            }
        }
    }
    None
}

/// Indexed adjacency structure over a ball, for repeated in-ball BFS queries.
pub struct BallGraph {
    index: HashMap<Vec<u8>, u32>,
    adj: Vec<Vec<u32>>,
}

impl BallGraph {
    pub fn new(ball: &Ball) -> BallGraph {
        let gens = generators();
        let mut keys: Vec<&Vec<u8>> = ball.members.keys().collect();
        keys.sort();
        let index: HashMap<Vec<u8>, u32> =
            keys.iter().enumerate().map(|(i, k)| ((*k).clone(), i as u32)).collect();
        let mut adj = vec![Vec::new(); keys.len()];
        for (i, key) in keys.iter().enumerate() {
            let f = Element::decode(key);
            for s in &gens {
                if let Some(&j) = index.get(&s.multiply(&f).encode()) {
                    adj[i].push(j);
                }
            }
        }
        BallGraph { index, adj }
    }

    pub fn in_ball_distance(&self, g: &Element, h: &Element) -> Option<u32> {
        let &start = self.index.get(&g.encode())?;
        let &target = self.index.get(&h.encode())?;
        let mut dist = vec![u32::MAX; self.adj.len()];
        let mut queue = VecDeque::new();
        dist[start as usize] = 0;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            if v == target {
                return Some(dist[v as usize]);
            }
            for &w in &self.adj[v as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// Dead end by definition: every generator strictly decreases the length.
pub fn is_dead_end_brute(f: &Element) -> bool {
    if f.is_identity() {
        return false;
    }
    let e = generator_effect(f);
    e.x0 == -1 && e.x0_inv == -1 && e.x1 == -1 && e.x1_inv == -1
}

/// Dead end by the structural characterization: nontrivial current tree,
/// left space (L, L), right space (R, R), and the right space after removing
/// the top caret not (R, R).
pub fn is_dead_end_structural(f: &Element) -> bool {
    use SpaceLabel::*;
    if f.is_identity() {
        return false;
    }
    let ld = label_spaces(f);
    let d = &ld.diagram;
    if d.top[d.top_pointer].is_leaf() {
        return false;
    }
    let p = d.top_pointer;
    let left_gap = if p == 0 {
        return false;
    } else {
        d.top[..p].iter().map(|t| t.leaves()).sum::<usize>() - 1
    };
    if ld.labels[left_gap] != (L, L) {
        return false;
    }
    let right_gap = if p + 1 == d.top.len() {
        return false;
    } else {
        d.top[..=p].iter().map(|t| t.leaves()).sum::<usize>() - 1
    };
    if ld.labels[right_gap] != (R, R) {
        return false;
    }
    let g = d.apply_letter(1, -1).to_element();
    let gl = label_spaces(&g);
    let gd = &gl.diagram;
    let g_right = if gd.top_pointer + 1 == gd.top.len() {
        None
    } else {
        Some(gd.top[..=gd.top_pointer].iter().map(|t| t.leaves()).sum::<usize>() - 1)
    };
    g_right.map(|gap| gl.labels[gap]) != Some((R, R))
}

pub fn is_dead_end(f: &Element) -> bool {
    is_dead_end_brute(f)
}

/// Is f a k-pocket: no product of at most k generators increases the length.
pub fn pocket_depth(f: &Element, k: u32) -> Result<bool> {
    if k < 2 {
        return Err(Error::Domain("pocket check needs k >= 2".into()));
    }
    let base = length(f);
    let mut frontier = vec![f.clone()];
    let gens = generators();
    for _ in 0..k {
        let mut next = Vec::with_capacity(frontier.len() * 5);
        for g in &frontier {
            // the identity letter keeps g itself in play
            next.push(g.clone());
            for s in &gens {
                next.push(s.multiply(g));
            }
        }
        next.sort_by_key(|e| e.encode());
        next.dedup();
        frontier = next;
    }
    Ok(frontier.iter().all(|g| length(g) <= base))
}

/// A certified failure witness for minimal almost convexity: a pair at
/// distance 2 whose in-ball distance is maximal.
#[derive(Clone, Debug)]
pub struct MacWitness {
    pub l: Element,
    pub r: Element,
    pub in_ball_distance: u32,
}

/// Scan the ball for pairs (g, x0^2 g) on the sphere whose midpoint x0 g
/// leaves the ball, and measure their in-ball distances.
pub fn mac_witness_search(ball: &Ball, graph: &BallGraph) -> Vec<MacWitness> {
    let radius = ball.radius();
    let x0 = Element::x(0);
    let x0sq = x0.multiply(&x0);
    let mut out = Vec::new();
    let mut keys: Vec<&Vec<u8>> = ball.members.keys().collect();
    keys.sort();
    for key in keys {
        if ball.members[key.as_slice()] != radius {
            continue;
        }
        let g = Element::decode(key);
        if length(&x0.multiply(&g)) != radius + 1 {
            continue;
        }
        let r = x0sq.multiply(&g);
        if length(&r) != radius {
            continue;
        }
        if let Some(d) = graph.in_ball_distance(&g, &r) {
            out.push(MacWitness { l: g, r, in_ball_distance: d });
        }
    }
    out
}

/// Check that all words of length <= max_len in {x0^{-1}, x1} evaluate to
/// distinct elements; returns the number of distinct elements found.
pub fn free_submonoid_check(max_len: u32) -> (bool, usize) {
    let letters = [Letter::neg(0).element(), Letter::pos(1).element()];
    let mut seen = HashMap::new();
    let mut count_words = 0usize;
    let mut frontier = vec![Element::identity()];
    seen.insert(Element::identity().encode(), ());
    count_words += 1;
    for _ in 0..max_len {
        let mut next = Vec::new();
        for f in &frontier {
            for l in &letters {
                let h = f.multiply(l);
                count_words += 1;
                seen.insert(h.encode(), ());
                next.push(h);
            }
        }
        frontier = next;
    }
    (seen.len() == count_words, seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::eval_str;

    #[test]
    fn ball_sizes() {
        let b = ball(4).unwrap();
        assert_eq!(b.spheres(), &[1, 4, 12, 36, 108]);
        assert_eq!(b.len(), 161);
        assert_eq!(b.distance_from_identity(&Element::identity()), Some(0));
        assert_eq!(b.distance_from_identity(&Element::x(0)), Some(1));
        // formula agreement on the whole ball
        for (f, d) in b.iter() {
            assert_eq!(length(&f), d, "at {f}");
        }
    }

    #[test]
    fn ball_cap() {
        match ball_capped(4, 10) {
            Err(Error::Resource(msg)) => assert!(msg.contains("spheres")),
            other => panic!("expected resource error, got {:?}", other.map(|b| b.len())),
        }
    }

    #[test]
    fn distances() {
        let id = Element::identity();
        let x0 = Element::x(0);
        assert_eq!(distance(&x0, &x0), 0);
        assert_eq!(distance(&id, &x0), 1);
        assert_eq!(distance(&x0, &id), 1);
        let f = eval_str("x1 x0^-1").unwrap();
        assert_eq!(distance(&f, &f), 0);
        // triangle inequality on a few triples
        let g = eval_str("x1 x1 x0").unwrap();
        let h = eval_str("x0^-1 x1^-1").unwrap();
        assert!(distance(&f, &h) <= distance(&f, &g) + distance(&g, &h));
    }

    #[test]
    fn in_ball_distances() {
        let b = ball(4).unwrap();
        let graph = BallGraph::new(&b);
        let id = Element::identity();
        let x0 = Element::x(0);
        assert_eq!(in_ball_distance(&id, &id, &b), Some(0));
        assert_eq!(in_ball_distance(&id, &x0, &b), Some(1));
        assert_eq!(graph.in_ball_distance(&id, &x0), Some(1));
        for (f, _) in b.iter().take(50) {
            let d = distance(&f, &id);
            let ibd = graph.in_ball_distance(&f, &id).unwrap();
            assert!(ibd >= d);
        }
    }

    #[test]
    fn dead_end_paths_agree_small() {
        let b = ball(6).unwrap();
        for (f, _) in b.iter() {
            assert_eq!(is_dead_end_brute(&f), is_dead_end_structural(&f), "at {f}");
        }
        assert!(!is_dead_end(&Element::identity()));
        assert!(!is_dead_end(&Element::x(0)));
    }

    #[test]
    fn pockets() {
        assert!(!pocket_depth(&Element::identity(), 2).unwrap());
        assert!(!pocket_depth(&Element::x(0), 3).unwrap());
        assert!(pocket_depth(&Element::identity(), 1).is_err());
    }

    #[test]
    fn free_submonoid_small() {
        assert_eq!(free_submonoid_check(1), (true, 3));
        assert_eq!(free_submonoid_check(2), (true, 7));
        assert_eq!(free_submonoid_check(5), (true, 63));
    }
}

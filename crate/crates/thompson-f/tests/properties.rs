//! Randomized cross-checks between the independent representations.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thompson_f::forest::TwoWayForestDiagram;
use thompson_f::strand::{
    canonicalize, forest_compose, forest_lcm, fundamental_group_iso,
    fundamental_group_iso_inverse, groupoid_compose, ForestMorphism, GeneratorWord, StrandLetter,
};
use thompson_f::words::{
    anti_normal_form, caret_order_check, eval, linear_extensions_brute, normal_form,
    normal_form_by_rewriting, word_graph, Letter, Word,
};
use thompson_f::{geodesic_word, length, to_pl_unit, Element, Tree};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_word(rng: &mut ChaCha8Rng, len: usize, max_index: usize) -> Word {
    let letters = (0..len)
        .map(|_| {
            let i = rng.gen_range(0..=max_index);
            if rng.gen_bool(0.5) {
                Letter::pos(i)
            } else {
                Letter::neg(i)
            }
        })
        .collect();
    Word::new(letters)
}

fn random_element(rng: &mut ChaCha8Rng, len: usize) -> Element {
    eval(&random_word(rng, len, 3))
}

#[test]
fn group_axioms() {
    let mut r = rng(1);
    for _ in 0..200 {
        let a = random_element(&mut r, 6);
        let b = random_element(&mut r, 6);
        let c = random_element(&mut r, 6);
        assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
        assert!(a.multiply(&a.invert()).is_identity());
        assert_eq!(a.multiply(&Element::identity()), a);
        assert_eq!(Element::identity().multiply(&a), a);
    }
}

#[test]
fn abelianization_is_additive() {
    let mut r = rng(2);
    for _ in 0..200 {
        let a = random_element(&mut r, 6);
        let b = random_element(&mut r, 6);
        let (p, q) = a.abelianize();
        let (s, t) = b.abelianize();
        assert_eq!(a.multiply(&b).abelianize(), (p + s, q + t));
        assert_eq!(a.invert().abelianize(), (-p, -q));
    }
}

#[test]
fn pl_unit_is_a_faithful_homomorphism() {
    let mut r = rng(3);
    for _ in 0..500 {
        let a = random_element(&mut r, 5);
        let b = random_element(&mut r, 5);
        let lhs = to_pl_unit(&a.multiply(&b));
        let rhs = to_pl_unit(&a).compose(&to_pl_unit(&b));
        assert_eq!(lhs, rhs);
        // injectivity: distinct elements give distinct maps
        if a != b {
            assert_ne!(to_pl_unit(&a), to_pl_unit(&b));
        }
        to_pl_unit(&a).check_invariants().unwrap();
    }
}

#[test]
fn pl_line_is_a_faithful_homomorphism() {
    let mut r = rng(4);
    for _ in 0..500 {
        let a = random_element(&mut r, 5);
        let b = random_element(&mut r, 5);
        let lhs = a.multiply(&b).to_pl_line();
        let rhs = a.to_pl_line().compose(&b.to_pl_line());
        assert_eq!(lhs, rhs);
        if a != b {
            assert_ne!(a.to_pl_line(), b.to_pl_line());
        }
        a.to_pl_line().check_invariants().unwrap();
    }
}

#[test]
fn representation_round_trips() {
    let mut r = rng(5);
    for _ in 0..500 {
        let a = random_element(&mut r, 7);
        assert_eq!(a.to_twoway().to_element(), a);
        assert_eq!(a.to_oneway().to_element(), a);
        assert_eq!(Element::decode(&a.encode()), a);
        let shown = a.to_twoway().to_string();
        assert_eq!(TwoWayForestDiagram::parse(&shown).unwrap().to_element(), a);
    }
}

#[test]
fn normal_form_is_a_retraction() {
    let mut r = rng(6);
    for _ in 0..300 {
        let w = random_word(&mut r, 8, 4);
        let a = eval(&w);
        let nf = normal_form(&a);
        assert_eq!(eval(&nf), a);
        assert_eq!(normal_form(&eval(&nf)), nf);
        if nf.is_positive() {
            assert!(caret_order_check(&nf).unwrap().is_normal);
        }
        // the rewriting route lands on the same word
        assert_eq!(normal_form_by_rewriting(&w), nf, "{w}");
    }
}

#[test]
fn anti_normal_form_agrees() {
    let mut r = rng(7);
    for _ in 0..300 {
        let mut letters = Vec::new();
        for _ in 0..r.gen_range(1..=8usize) {
            letters.push(Letter::pos(r.gen_range(0..5)));
        }
        let a = eval(&Word::new(letters));
        let anf = anti_normal_form(&a).unwrap();
        assert_eq!(eval(&anf), a);
        assert!(caret_order_check(&anf).unwrap().is_anti_normal);
        assert_eq!(anf.len(), normal_form(&a).len());
    }
}

#[test]
fn word_graph_counts_linear_extensions() {
    let mut r = rng(8);
    for _ in 0..40 {
        let mut letters = Vec::new();
        for _ in 0..r.gen_range(1..=6usize) {
            letters.push(Letter::pos(r.gen_range(0..4)));
        }
        let a = eval(&Word::new(letters));
        if a.caret_count() > 7 {
            continue;
        }
        let g = word_graph(&a).unwrap();
        assert_eq!(g.vertices.len() as u64, linear_extensions_brute(&a).unwrap());
        // every vertex spells the same element
        for v in &g.vertices {
            assert_eq!(eval(v), a);
        }
    }
}

#[test]
fn metric_properties() {
    let mut r = rng(9);
    for _ in 0..300 {
        let a = random_element(&mut r, 7);
        let l = length(&a);
        assert_eq!(length(&a.invert()), l);
        for s in [Element::x(0), Element::x(1)] {
            let d = length(&a.multiply(&s)) as i64 - l as i64;
            assert_eq!(d.abs(), 1, "generators change length by exactly one");
        }
        let g = geodesic_word(&a);
        assert_eq!(eval(&g), a);
        assert_eq!(g.len() as u32, l);
    }
}

#[test]
fn strand_canonicalize_is_a_congruence() {
    let mut r = rng(10);
    for _ in 0..200 {
        let start = 1 + r.gen_range(0..4);
        let w1 = random_strand_word(&mut r, start, 6);
        let w2 = random_strand_word(&mut r, w1.end_width(), 6);
        let joined =
            GeneratorWord::new(w1.start_width, [w1.letters.clone(), w2.letters.clone()].concat())
                .unwrap();
        let lhs = canonicalize(&joined).unwrap();
        let rhs = groupoid_compose(&canonicalize(&w1).unwrap(), &canonicalize(&w2).unwrap());
        assert_eq!(lhs, rhs.unwrap());
        assert!(lhs.is_reduced());
    }
}

fn random_strand_word(rng: &mut ChaCha8Rng, start_width: usize, len: usize) -> GeneratorWord {
    let mut w = start_width;
    let mut letters = Vec::new();
    for _ in 0..len {
        let merge = w > 1 && rng.gen_bool(0.5);
        if merge {
            let n = rng.gen_range(0..w - 1);
            letters.push(StrandLetter { n, w: w - 1, sign: -1 });
            w -= 1;
        } else {
            let n = rng.gen_range(0..w);
            letters.push(StrandLetter { n, w, sign: 1 });
            w += 1;
        }
    }
    GeneratorWord::new(start_width, letters).unwrap()
}

#[test]
fn groupoid_restricts_to_the_group() {
    let mut r = rng(11);
    for _ in 0..500 {
        let a = random_element(&mut r, 6);
        let b = random_element(&mut r, 6);
        let prod = groupoid_compose(
            &fundamental_group_iso_inverse(&a),
            &fundamental_group_iso_inverse(&b),
        )
        .unwrap();
        assert_eq!(fundamental_group_iso(&prod).unwrap(), a.multiply(&b));
    }
}

#[test]
fn forest_category_is_cancellative() {
    let mut r = rng(12);
    for _ in 0..200 {
        let dom = 1 + r.gen_range(0..3);
        let f = random_forest(&mut r, dom, 4);
        let a = random_forest(&mut r, f.codomain(), 3);
        let b = random_forest(&mut r, f.codomain(), 3);
        let fa = forest_compose(&f, &a).unwrap();
        let fb = forest_compose(&f, &b).unwrap();
        assert_eq!(fa == fb, a == b);
        // lcm completions really complete
        let (u, v) = forest_lcm(&fa, &fb).unwrap();
        assert_eq!(forest_compose(&fa, &u).unwrap(), forest_compose(&fb, &v).unwrap());
    }
}

fn random_forest(rng: &mut ChaCha8Rng, domain: usize, extra: usize) -> ForestMorphism {
    let mut f = ForestMorphism::identity(domain);
    for _ in 0..rng.gen_range(0..=extra) {
        let w = f.codomain();
        f = forest_compose(&f, &ForestMorphism::generator(rng.gen_range(0..w), w).unwrap())
            .unwrap();
    }
    f
}

#[test]
fn forest_normal_form_round_trips() {
    use thompson_f::strand::{forest_eval, forest_normal_form};
    let mut r = rng(14);
    for _ in 0..500 {
        let dom = 1 + r.gen_range(0..4);
        let f = random_forest(&mut r, dom, 5);
        let w = forest_normal_form(&f);
        assert_eq!(forest_eval(&w, f.domain()).unwrap(), f);
        assert_eq!(forest_normal_form(&forest_eval(&w, f.domain()).unwrap()), w);
    }
}

#[test]
fn reduction_order_does_not_matter() {
    let mut r = rng(13);
    for _ in 0..200 {
        let a = random_element(&mut r, 5);
        // unreduce by a random expansion, then reduce choosing opposing
        // carets in a random order
        let mut d = a.diagram().clone();
        for _ in 0..r.gen_range(1..4usize) {
            let leaf = r.gen_range(0..d.leaves());
            let sub = random_tree(&mut r, 3);
            d = d.expand_at_leaf(leaf, &sub);
        }
        let seed = r.gen::<u64>();
        let picked = d.reduce_with_order(|choices| choices[(seed as usize) % choices.len()]);
        assert_eq!(picked, *a.diagram());
    }
}

fn random_tree(rng: &mut ChaCha8Rng, max_carets: usize) -> Tree {
    let mut t = Tree::caret(Tree::Leaf, Tree::Leaf);
    for _ in 0..rng.gen_range(0..max_carets) {
        let leaf = rng.gen_range(0..t.leaves());
        t = t.attach_at_leaf(leaf, &Tree::caret(Tree::Leaf, Tree::Leaf));
    }
    t
}

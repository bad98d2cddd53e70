//! Exact computation in Thompson's group F: tree and forest diagram
//! representations, word-length and geodesics for the two-generator set,
//! Cayley-graph exploration, growth series, and the associated strand-diagram
//! groupoid.

pub mod cayley;
pub mod diagram;
pub mod dyadic;
pub mod error;
pub mod forest;
pub mod growth;
pub mod metric;
pub mod pl;
pub mod strand;
pub mod tree;
pub mod words;

pub use cayley::{ball, Ball, BallGraph};
pub use diagram::{Element, TreeDiagram};
pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use forest::{Classification, OneWayForestDiagram, TwoWayForestDiagram};
pub use metric::{geodesic_word, label_spaces, length, LabeledDiagram, SpaceLabel};
pub use growth::{solve_pk, subtree_closed_bound, SeriesCoefficients};
pub use pl::{to_pl_unit, DomainKind, PLMap};
pub use strand::{
    canonicalize, forest_compose, forest_lcm, forest_normal_form, fundamental_group_iso,
    groupoid_compose, ForestMorphism, GeneratorWord, GroupoidMorphism,
};
pub use tree::Tree;
pub use words::{Letter, Word};

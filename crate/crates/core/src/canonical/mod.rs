//! Canonical labeling of colored graphs and its application to code
//! equivalence, isomorphism and automorphism groups.

mod code;
mod graph;
mod group;

pub use code::{
    are_equivalent, are_isomorphic, automorphism_group, canonical_code, canonical_form,
    canonicalize, code_canonical_form, embedded_code_from_symmetries, encode, encode_plain,
    isomorphism_classes_in_equivalence_class, min_distance_graph, min_distance_graph_aut_order,
    orbit_notation, pasch_count, space_orbits, AutGroupReport, CanonicalCode, CanonicalForm,
    CodeAutomorphism, CodeGraph, EmbeddedCode, Mode, MAX_SPACE_LEN,
};
pub use graph::{canonical_labeling, ColoredGraph, LabelingResult};
pub use group::{orbits, GroupOrder, UnionFind};

//! Matrix-weighted trees and graphs: model, validation and generation.

pub mod generate;
pub mod model;

pub use generate::{
    max_extra_edges, prufer_decode, random_connected_graph, random_connected_graph_with,
    random_instance, random_pd_weight, random_pd_weight_with, random_tree, random_tree_edges,
    random_tree_with, Seed, WeightProfile,
};
pub use model::{
    validate, Edge, Instance, MatrixWeightedGraph, MatrixWeightedTree, PdWeight, ValidationResult,
    Violation,
};

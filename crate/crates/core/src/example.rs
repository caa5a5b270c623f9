//! The four-vertex, order-two worked example: tree weights, graph weights and
//! the published `D`, `L(G)` and `(D⁻¹ − L)⁻¹`, embedded so that golden
//! reproduction needs no external files.

use alloc::vec::Vec;

use crate::graph::{Edge, Instance, MatrixWeightedGraph, MatrixWeightedTree, PdWeight};
use crate::linalg::{parse_rational, ratio, RationalMatrix, Tolerance};
use crate::scalar::Rational;

pub const N: usize = 4;
pub const S: usize = 2;

/// Tree edges (1-based) with weights `W₁, W₂, W₃`.
pub const TREE_EDGES: [(usize, usize, [[i64; 2]; 2]); 3] = [
    (1, 2, [[8, 6], [6, 5]]),
    (2, 3, [[1, 1], [1, 5]]),
    (2, 4, [[5, 0], [0, 5]]),
];

/// Graph edges (1-based) with weights `S₁, S₂, S₃, S₄`.
pub const GRAPH_EDGES: [(usize, usize, [[i64; 2]; 2]); 4] = [
    (1, 2, [[2, 0], [0, 2]]),
    (2, 3, [[8, 0], [0, 8]]),
    (3, 1, [[5, -2], [-2, 1]]),
    (3, 4, [[5, -3], [-3, 5]]),
];

pub const DISTANCE: [[i64; 8]; 8] = [
    [0, 0, 8, 6, 9, 7, 13, 6],
    [0, 0, 6, 5, 7, 10, 6, 10],
    [8, 6, 0, 0, 1, 1, 5, 0],
    [6, 5, 0, 0, 1, 5, 0, 5],
    [9, 7, 1, 1, 0, 0, 6, 1],
    [7, 10, 1, 5, 0, 0, 1, 10],
    [13, 6, 5, 0, 6, 1, 0, 0],
    [6, 10, 0, 5, 1, 10, 0, 0],
];

pub const LAPLACIAN: [[&str; 8]; 8] = [
    ["3/2", "2", "-1/2", "0", "-1", "-2", "0", "0"],
    ["2", "11/2", "0", "-1/2", "-2", "-5", "0", "0"],
    ["-1/2", "0", "5/8", "0", "-1/8", "0", "0", "0"],
    ["0", "-1/2", "0", "5/8", "0", "-1/8", "0", "0"],
    ["-1", "-2", "-1/8", "0", "23/16", "35/16", "-5/16", "-3/16"],
    ["-2", "-5", "0", "-1/8", "35/16", "87/16", "-3/16", "-5/16"],
    ["0", "0", "0", "0", "-5/16", "-3/16", "5/16", "3/16"],
    ["0", "0", "0", "0", "-3/16", "-5/16", "3/16", "5/16"],
];

pub const PERTURBED_INVERSE: [[&str; 8]; 8] = [
    [
        "3419893/612184",
        "2467937/612184",
        "3525525/612184",
        "2430433/612184",
        "3944573/612184",
        "2285161/612184",
        "4731635/612184",
        "1962623/612184",
    ],
    [
        "2467937/612184",
        "1957213/306092",
        "2255293/612184",
        "935945/153046",
        "2218981/612184",
        "1023631/153046",
        "1853663/612184",
        "2458795/306092",
    ],
    [
        "3525525/612184",
        "2255293/612184",
        "3037701/612184",
        "1985813/612184",
        "3651821/612184",
        "2212445/612184",
        "4430931/612184",
        "1803363/612184",
    ],
    [
        "2430433/612184",
        "935945/153046",
        "1985813/612184",
        "1566953/306092",
        "2093885/612184",
        "1966725/306092",
        "1746783/612184",
        "1159859/153046",
    ],
    [
        "3944573/612184",
        "2218981/612184",
        "3651821/612184",
        "2093885/612184",
        "3655573/612184",
        "2328197/612184",
        "4622251/612184",
        "1831995/612184",
    ],
    [
        "2285161/612184",
        "1023631/153046",
        "2212445/612184",
        "1966725/306092",
        "2328197/612184",
        "2026753/306092",
        "1884375/612184",
        "1242045/153046",
    ],
    [
        "4731635/612184",
        "1853663/612184",
        "4430931/612184",
        "1746783/612184",
        "4622251/612184",
        "1884375/612184",
        "3647621/612184",
        "2294033/612184",
    ],
    [
        "1962623/612184",
        "2458795/306092",
        "1803363/612184",
        "1159859/153046",
        "1831995/612184",
        "1242045/153046",
        "2294033/612184",
        "1968213/306092",
    ],
];

fn weight(w: &[[i64; 2]; 2]) -> PdWeight<Rational> {
    let m = RationalMatrix::from_rows(&[
        [ratio(w[0][0], 1), ratio(w[0][1], 1)],
        [ratio(w[1][0], 1), ratio(w[1][1], 1)],
    ])
    .expect("2x2");
    PdWeight::new(m).expect("fixture weights are symmetric")
}

fn edges(list: &[(usize, usize, [[i64; 2]; 2])]) -> Vec<Edge<Rational>> {
    list.iter()
        .map(|(u, v, w)| Edge::new(u - 1, v - 1, weight(w)))
        .collect()
}

pub fn tree() -> MatrixWeightedTree<Rational> {
    MatrixWeightedTree::new(
        MatrixWeightedGraph::new(N, S, edges(&TREE_EDGES)),
        &Tolerance::default(),
    )
    .expect("fixture tree is valid")
}

pub fn graph() -> MatrixWeightedGraph<Rational> {
    MatrixWeightedGraph::new(N, S, edges(&GRAPH_EDGES))
}

/// The example as an exact instance.
pub fn instance() -> Instance<Rational> {
    Instance::new(tree(), graph(), &Tolerance::default()).expect("fixture instance is valid")
}

pub fn expected_distance() -> RationalMatrix {
    RationalMatrix::from_fn(8, 8, |i, j| ratio(DISTANCE[i][j], 1))
}

fn parse_table(table: &[[&str; 8]; 8]) -> RationalMatrix {
    RationalMatrix::from_fn(8, 8, |i, j| {
        parse_rational(table[i][j]).expect("fixture rationals are canonical")
    })
}

pub fn expected_laplacian() -> RationalMatrix {
    parse_table(&LAPLACIAN)
}

pub fn expected_perturbed_inverse() -> RationalMatrix {
    parse_table(&PERTURBED_INVERSE)
}

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, Matrix, Tolerance};
use crate::scalar::Scalar;

/// Symmetric positive definite `s x s` edge weight.
///
/// Symmetry is enforced at construction; positive definiteness is checked by
/// [`validate`] so that malformed input can be reported rather than rejected
/// one weight at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct PdWeight<T> {
    matrix: Matrix<T>,
}

impl<T: Scalar> PdWeight<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        matrix.require_square()?;
        if !matrix.is_symmetric_exact() {
            let asym = matrix.to_f64().asymmetry();
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        Ok(Self { matrix })
    }

    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    /// Exact payloads use leading principal minors; floating payloads use the
    /// smallest eigenvalue against the `eig_zero` threshold.
    pub fn is_positive_definite(&self, tol: &Tolerance) -> bool {
        if T::EXACT {
            return self.matrix.leading_minors_positive();
        }
        match sym_eigen(&self.matrix.to_f64(), tol) {
            Ok(eig) => eig.min() > eig.zero_threshold(tol),
            Err(_) => false,
        }
    }
}

/// Undirected edge between 0-based vertices, stored with `u < v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge<T> {
    pub u: usize,
    pub v: usize,
    pub weight: PdWeight<T>,
}

impl<T: Scalar> Edge<T> {
    pub fn new(a: usize, b: usize, weight: PdWeight<T>) -> Self {
        Self {
            u: a.min(b),
            v: a.max(b),
            weight,
        }
    }
}

/// Graph on `n` vertices whose edge weights are `s x s` PD matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixWeightedGraph<T> {
    n: usize,
    s: usize,
    edges: Vec<Edge<T>>,
}

impl<T: Scalar> MatrixWeightedGraph<T> {
    /// Stores the structure as given. Use [`validate`] (or the validating
    /// constructors on [`MatrixWeightedTree`] and [`Instance`]) before use.
    pub fn new(n: usize, s: usize, edges: Vec<Edge<T>>) -> Self {
        Self { n, s, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    /// Neighbour lists with the index of the connecting edge.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (k, e) in self.edges.iter().enumerate() {
            if e.u < self.n && e.v < self.n && e.u != e.v {
                adj[e.u].push((e.v, k));
                adj[e.v].push((e.u, k));
            }
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency().iter().map(Vec::len).collect()
    }

    /// Number of connected components.
    pub fn components(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(x) = stack.pop() {
                for &(y, _) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        count
    }

    pub fn validate(&self, require_tree: bool, tol: &Tolerance) -> ValidationResult {
        validate(self, require_tree, tol)
    }

    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MatrixWeightedGraph<U> {
        MatrixWeightedGraph {
            n: self.n,
            s: self.s,
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    u: e.u,
                    v: e.v,
                    weight: PdWeight {
                        matrix: e.weight.matrix.map(&f),
                    },
                })
                .collect(),
        }
    }
}

/// A validated connected acyclic matrix-weighted graph.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixWeightedTree<T>(MatrixWeightedGraph<T>);

impl<T: Scalar> MatrixWeightedTree<T> {
    pub fn new(graph: MatrixWeightedGraph<T>, tol: &Tolerance) -> Result<Self> {
        let report = validate(&graph, true, tol);
        if report.is_ok() {
            Ok(Self(graph))
        } else {
            Err(Error::Validation(report))
        }
    }

    /// Wraps a tree whose structure and weights are valid by construction.
    /// Skips the eigenvalue-threshold PD check so that deliberately
    /// ill-conditioned weights can still be studied.
    pub(crate) fn from_generated(graph: MatrixWeightedGraph<T>) -> Self {
        debug_assert_eq!(graph.edges.len() + 1, graph.n);
        debug_assert_eq!(graph.components(), 1);
        Self(graph)
    }

    pub fn as_graph(&self) -> &MatrixWeightedGraph<T> {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn s(&self) -> usize {
        self.0.s
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.0.edges
    }

    pub fn into_graph(self) -> MatrixWeightedGraph<T> {
        self.0
    }

    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MatrixWeightedTree<U> {
        MatrixWeightedTree(self.0.map_scalars(f))
    }
}

/// A weighted tree and a connected weighted graph on the same vertex set with
/// the same block order.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T> {
    tree: MatrixWeightedTree<T>,
    graph: MatrixWeightedGraph<T>,
}

impl<T: Scalar> Instance<T> {
    /// Validates `graph` as a connected graph and pairs it with `tree`.
    pub fn new(
        tree: MatrixWeightedTree<T>,
        graph: MatrixWeightedGraph<T>,
        tol: &Tolerance,
    ) -> Result<Self> {
        if tree.n() != graph.n() || tree.s() != graph.s() {
            return Err(Error::InstanceMismatch {
                tree: (tree.n(), tree.s()),
                graph: (graph.n(), graph.s()),
            });
        }
        let report = validate(&graph, false, tol);
        if !report.is_ok() {
            return Err(Error::Validation(report));
        }
        Ok(Self { tree, graph })
    }

    pub(crate) fn from_generated(
        tree: MatrixWeightedTree<T>,
        graph: MatrixWeightedGraph<T>,
    ) -> Self {
        debug_assert_eq!(graph.components(), 1);
        Self { tree, graph }
    }

    pub fn tree(&self) -> &MatrixWeightedTree<T> {
        &self.tree
    }

    pub fn graph(&self) -> &MatrixWeightedGraph<T> {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.tree.n()
    }

    pub fn s(&self) -> usize {
        self.tree.s()
    }

    pub fn map_scalars<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Instance<U> {
        Instance {
            tree: self.tree.map_scalars(&f),
            graph: self.graph.map_scalars(&f),
        }
    }
}

/// One reason a graph fails validation. Vertices are 0-based; `Display`
/// prints them 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TooFewVertices {
        n: usize,
    },
    ZeroBlockOrder,
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
    },
    SelfLoop {
        edge: usize,
        vertex: usize,
    },
    DuplicateEdge {
        u: usize,
        v: usize,
    },
    OrderMismatch {
        edge: usize,
        found: usize,
        expected: usize,
    },
    WeightNotPd {
        edge: usize,
    },
    Disconnected {
        components: usize,
    },
    NotATree {
        edges: usize,
        expected: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewVertices { n } => write!(f, "n = {n}, need at least 2 vertices"),
            Violation::ZeroBlockOrder => write!(f, "block order s must be at least 1"),
            Violation::VertexOutOfRange { edge, vertex } => {
                write!(
                    f,
                    "edge #{} references vertex {} out of range",
                    edge + 1,
                    vertex + 1
                )
            }
            Violation::SelfLoop { edge, vertex } => {
                write!(
                    f,
                    "edge #{} is a self-loop at vertex {}",
                    edge + 1,
                    vertex + 1
                )
            }
            Violation::DuplicateEdge { u, v } => write!(f, "duplicate edge ({}, {})", u + 1, v + 1),
            Violation::OrderMismatch {
                edge,
                found,
                expected,
            } => {
                write!(
                    f,
                    "edge #{} weight has order {found}, expected {expected}",
                    edge + 1
                )
            }
            Violation::WeightNotPd { edge } => {
                write!(f, "edge #{} weight is not positive definite", edge + 1)
            }
            Violation::Disconnected { components } => {
                write!(f, "graph is disconnected ({components} components)")
            }
            Violation::NotATree { edges, expected } => {
                write!(f, "a tree needs {expected} edges, found {edges}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationResult {
    pub violations: Vec<Violation>,
}

impl ValidationResult {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Collects every structural and weight violation of `g`.
pub fn validate<T: Scalar>(
    g: &MatrixWeightedGraph<T>,
    require_tree: bool,
    tol: &Tolerance,
) -> ValidationResult {
    let mut out = Vec::new();
    if g.n < 2 {
        out.push(Violation::TooFewVertices { n: g.n });
    }
    if g.s == 0 {
        out.push(Violation::ZeroBlockOrder);
    }

    let mut seen_pairs = Vec::with_capacity(g.edges.len());
    for (k, e) in g.edges.iter().enumerate() {
        for vertex in [e.u, e.v] {
            if vertex >= g.n {
                out.push(Violation::VertexOutOfRange { edge: k, vertex });
            }
        }
        if e.u == e.v {
            out.push(Violation::SelfLoop {
                edge: k,
                vertex: e.u,
            });
        }
        let pair = (e.u.min(e.v), e.u.max(e.v));
        if seen_pairs.contains(&pair) {
            out.push(Violation::DuplicateEdge {
                u: pair.0,
                v: pair.1,
            });
        } else {
            seen_pairs.push(pair);
        }
        if e.weight.order() != g.s {
            out.push(Violation::OrderMismatch {
                edge: k,
                found: e.weight.order(),
                expected: g.s,
            });
        } else if !e.weight.is_positive_definite(tol) {
            out.push(Violation::WeightNotPd { edge: k });
        }
    }

    if g.n >= 1 {
        let components = g.components();
        if components > 1 {
            out.push(Violation::Disconnected { components });
        }
    }
    if require_tree && g.n >= 1 && g.edges.len() != g.n - 1 {
        out.push(Violation::NotATree {
            edges: g.edges.len(),
            expected: g.n - 1,
        });
    }
    ValidationResult { violations: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;

    fn w(rows: &[[f64; 2]]) -> PdWeight<f64> {
        PdWeight::new(DenseMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn indefinite_weight_is_reported() {
        let g =
            MatrixWeightedGraph::new(2, 2, vec![Edge::new(0, 1, w(&[[1.0, 0.0], [0.0, -1.0]]))]);
        let r = validate(&g, true, &Tolerance::default());
        assert_eq!(r.violations, vec![Violation::WeightNotPd { edge: 0 }]);
    }

    #[test]
    fn disjoint_edges_are_disconnected() {
        let id = w(&[[1.0, 0.0], [0.0, 1.0]]);
        let g =
            MatrixWeightedGraph::new(4, 2, vec![Edge::new(0, 1, id.clone()), Edge::new(2, 3, id)]);
        let r = validate(&g, false, &Tolerance::default());
        assert_eq!(
            r.violations,
            vec![Violation::Disconnected { components: 2 }]
        );
        let r = validate(&g, true, &Tolerance::default());
        assert!(r.violations.contains(&Violation::NotATree {
            edges: 2,
            expected: 3
        }));
    }

    #[test]
    fn cycle_fails_tree_requirement_only() {
        let id = w(&[[1.0, 0.0], [0.0, 1.0]]);
        let g = MatrixWeightedGraph::new(
            3,
            2,
            vec![
                Edge::new(0, 1, id.clone()),
                Edge::new(1, 2, id.clone()),
                Edge::new(0, 2, id),
            ],
        );
        assert!(validate(&g, false, &Tolerance::default()).is_ok());
        assert!(!validate(&g, true, &Tolerance::default()).is_ok());
    }

    #[test]
    fn duplicates_self_loops_and_orders() {
        let id = w(&[[1.0, 0.0], [0.0, 1.0]]);
        let one = PdWeight::new(DenseMatrix::identity(1)).unwrap();
        let g = MatrixWeightedGraph::new(
            3,
            2,
            vec![
                Edge::new(0, 1, id.clone()),
                Edge::new(1, 0, id.clone()),
                Edge::new(2, 2, id),
                Edge::new(1, 2, one),
                Edge::new(1, 5, w(&[[1.0, 0.0], [0.0, 1.0]])),
            ],
        );
        let r = validate(&g, false, &Tolerance::default());
        assert!(r
            .violations
            .contains(&Violation::DuplicateEdge { u: 0, v: 1 }));
        assert!(r
            .violations
            .contains(&Violation::SelfLoop { edge: 2, vertex: 2 }));
        assert!(r.violations.contains(&Violation::OrderMismatch {
            edge: 3,
            found: 1,
            expected: 2
        }));
        assert!(r
            .violations
            .contains(&Violation::VertexOutOfRange { edge: 4, vertex: 5 }));
    }

    #[test]
    fn asymmetric_weight_is_rejected_at_construction() {
        let m = DenseMatrix::from_rows(&[[1.0, 0.5], [0.0, 1.0]]).unwrap();
        assert!(matches!(PdWeight::new(m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn instance_requires_matching_shapes() {
        let id = w(&[[1.0, 0.0], [0.0, 1.0]]);
        let tol = Tolerance::default();
        let tree = MatrixWeightedTree::new(
            MatrixWeightedGraph::new(2, 2, vec![Edge::new(0, 1, id.clone())]),
            &tol,
        )
        .unwrap();
        let graph =
            MatrixWeightedGraph::new(3, 2, vec![Edge::new(0, 1, id.clone()), Edge::new(1, 2, id)]);
        assert!(matches!(
            Instance::new(tree, graph, &tol),
            Err(Error::InstanceMismatch { .. })
        ));
    }
}

//! Seeded random trees, connected graphs and PD weights.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::model::{Edge, Instance, MatrixWeightedGraph, MatrixWeightedTree, PdWeight};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Seed for the deterministic generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// Eigenvalue range `[lambda_lo, lambda_hi]` for generated weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightProfile {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
}

impl Default for WeightProfile {
    fn default() -> Self {
        Self {
            lambda_lo: 0.1,
            lambda_hi: 10.0,
        }
    }
}

impl WeightProfile {
    pub fn new(lambda_lo: f64, lambda_hi: f64) -> Result<Self> {
        let p = Self {
            lambda_lo,
            lambda_hi,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_lo > 0.0)
            || !(self.lambda_lo <= self.lambda_hi)
            || !self.lambda_hi.is_finite()
        {
            return Err(Error::InvalidProfile(format!(
                "eigenvalue range [{}, {}] must satisfy 0 < lo <= hi < inf",
                self.lambda_lo, self.lambda_hi
            )));
        }
        Ok(())
    }

    /// `lambda_hi / lambda_lo`, the worst condition number a weight can have.
    pub fn condition_bound(&self) -> f64 {
        self.lambda_hi / self.lambda_lo
    }
}

/// Decodes a Prüfer sequence over `0..n` into the `n − 1` edges of its tree.
///
/// Panics if `seq.len() != n − 2` or an entry is out of range.
pub fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    assert!(
        n >= 2 && seq.len() == n - 2,
        "Prüfer sequence must have length n - 2"
    );
    let mut degree = vec![1usize; n];
    for &x in seq {
        assert!(x < n, "Prüfer entry {x} out of range");
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = degree.iter().position(|&d| d == 1).unwrap_or(0);
    let mut leaf = ptr;
    for &x in seq {
        edges.push((leaf.min(x), leaf.max(x)));
        degree[x] -= 1;
        if x < ptr && degree[x] == 1 {
            leaf = x;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf.min(n - 1), leaf.max(n - 1)));
    edges
}

/// Uniformly random labelled tree topology on `n` vertices.
pub fn random_tree_edges<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    if n == 2 {
        return vec![(0, 1)];
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    prufer_decode(&seq, n)
}

/// `Q·diag(λ)·Qᵀ` with Haar-ish orthogonal `Q` and `λ` uniform in the profile
/// range. The result is exactly symmetric.
pub fn random_pd_weight_with<R: Rng + ?Sized>(
    s: usize,
    rng: &mut R,
    profile: &WeightProfile,
) -> Result<PdWeight<f64>> {
    if s == 0 {
        return Err(Error::InvalidSize("s must be >= 1".into()));
    }
    profile.validate()?;
    let q = random_orthogonal(s, rng);
    let lambdas: Vec<f64> = (0..s)
        .map(|_| {
            if profile.lambda_lo == profile.lambda_hi {
                profile.lambda_lo
            } else {
                rng.random_range(profile.lambda_lo..=profile.lambda_hi)
            }
        })
        .collect();
    let m = DenseMatrix::from_fn(s, s, |i, j| {
        (0..s).map(|k| q[(i, k)] * lambdas[k] * q[(j, k)]).sum()
    });
    PdWeight::new(m.symmetrized())
}

pub fn random_pd_weight(s: usize, seed: Seed, profile: &WeightProfile) -> Result<PdWeight<f64>> {
    random_pd_weight_with(s, &mut seed.rng(), profile)
}

/// Orthonormalized Gaussian matrix (modified Gram-Schmidt).
fn random_orthogonal<R: Rng + ?Sized>(s: usize, rng: &mut R) -> DenseMatrix {
    loop {
        let mut cols: Vec<Vec<f64>> = (0..s)
            .map(|_| {
                (0..s)
                    .map(|_| rng.sample::<f64, _>(StandardNormal))
                    .collect()
            })
            .collect();
        let mut ok = true;
        for j in 0..s {
            for k in 0..j {
                let proj = DenseMatrix::dot(&cols[j], &cols[k]);
                let (head, tail) = cols.split_at_mut(j);
                for (a, b) in tail[0].iter_mut().zip(&head[k]) {
                    *a -= proj * b;
                }
            }
            let norm = libm::sqrt(DenseMatrix::dot(&cols[j], &cols[j]));
            if norm < 1e-8 {
                ok = false;
                break;
            }
            cols[j].iter_mut().for_each(|v| *v /= norm);
        }
        if ok {
            return DenseMatrix::from_fn(s, s, |i, j| cols[j][i]);
        }
    }
}

fn check_size(n: usize, s: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidSize("n must be ≥ 2".into()));
    }
    if s < 1 {
        return Err(Error::InvalidSize("s must be ≥ 1".into()));
    }
    Ok(())
}

pub fn random_tree_with<R: Rng + ?Sized>(
    n: usize,
    s: usize,
    rng: &mut R,
    profile: &WeightProfile,
) -> Result<MatrixWeightedTree<f64>> {
    check_size(n, s)?;
    profile.validate()?;
    let edges = random_tree_edges(n, rng)
        .into_iter()
        .map(|(u, v)| Ok(Edge::new(u, v, random_pd_weight_with(s, rng, profile)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(MatrixWeightedTree::from_generated(
        MatrixWeightedGraph::new(n, s, edges),
    ))
}

/// Uniform random labelled tree (via a random Prüfer sequence) with random
/// PD weights.
pub fn random_tree(
    n: usize,
    s: usize,
    seed: Seed,
    profile: &WeightProfile,
) -> Result<MatrixWeightedTree<f64>> {
    random_tree_with(n, s, &mut seed.rng(), profile)
}

pub fn max_extra_edges(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2 - n.saturating_sub(1)
}

pub fn random_connected_graph_with<R: Rng + ?Sized>(
    n: usize,
    s: usize,
    extra_edges: usize,
    rng: &mut R,
    profile: &WeightProfile,
) -> Result<MatrixWeightedGraph<f64>> {
    check_size(n, s)?;
    if extra_edges > max_extra_edges(n) {
        return Err(Error::InvalidSize(format!(
            "extra_edges = {extra_edges} exceeds {} for n = {n}",
            max_extra_edges(n)
        )));
    }
    let tree = random_tree_with(n, s, rng, profile)?.into_graph();
    let mut present = vec![false; n * n];
    for e in tree.edges() {
        present[e.u * n + e.v] = true;
    }
    let candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !present[u * n + v])
        .collect();
    let mut picked: Vec<usize> = index::sample(rng, candidates.len(), extra_edges).into_vec();
    picked.sort_unstable();
    let mut edges = tree.edges().to_vec();
    for k in picked {
        let (u, v) = candidates[k];
        edges.push(Edge::new(u, v, random_pd_weight_with(s, rng, profile)?));
    }
    Ok(MatrixWeightedGraph::new(n, s, edges))
}

/// Random spanning tree plus `extra_edges` distinct non-tree edges.
pub fn random_connected_graph(
    n: usize,
    s: usize,
    seed: Seed,
    extra_edges: usize,
    profile: &WeightProfile,
) -> Result<MatrixWeightedGraph<f64>> {
    random_connected_graph_with(n, s, extra_edges, &mut seed.rng(), profile)
}

/// Tree and connected graph drawn from one seeded stream.
pub fn random_instance(
    n: usize,
    s: usize,
    extra_edges: usize,
    seed: Seed,
    profile: &WeightProfile,
) -> Result<Instance<f64>> {
    let mut rng = seed.rng();
    let tree = random_tree_with(n, s, &mut rng, profile)?;
    let graph = random_connected_graph_with(n, s, extra_edges, &mut rng, profile)?;
    Ok(Instance::from_generated(tree, graph))
}

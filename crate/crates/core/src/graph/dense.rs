use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{GraphError, IntegralGraph, VertexId};

/// Largest vertex count materialized as a dense bit matrix.
pub const DENSE_BOUND: usize = 4096;

/// Symmetric 0/1 adjacency matrix with one bitset per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseAdjacency {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl DenseAdjacency {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    /// Adjacency from a predicate evaluated on `i < j`.
    pub fn from_fn(n: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Self {
        let mut a = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if edge(i, j) {
                    a.set(i, j, true);
                }
            }
        }
        a
    }

    pub fn from_graph(g: &IntegralGraph<'_>) -> Result<Self, GraphError> {
        Self::from_graph_with_bound(g, DENSE_BOUND)
    }

    pub fn from_graph_with_bound(g: &IntegralGraph<'_>, bound: usize) -> Result<Self, GraphError> {
        let n = g.order();
        if n > bound {
            return Err(GraphError::SizeBoundExceeded {
                vertices: n as u128,
                bound: bound as u64,
            });
        }
        Ok(Self::from_fn(n, |i, j| {
            g.adjacent_unchecked(VertexId(i as u32), VertexId(j as u32))
        }))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, on: bool) {
        assert_ne!(i, j, "no loops");
        for (a, b) in [(i, j), (j, i)] {
            let word = &mut self.bits[a * self.words + b / 64];
            if on {
                *word |= 1 << (b % 64);
            } else {
                *word &= !(1 << (b % 64));
            }
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        let on = !self.has_edge(i, j);
        self.set(i, j, on);
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.row(i).iter().map(|w| w.count_ones() as u64).sum()
    }

    /// `(A^2)_{ij}`: popcount of the intersection of rows `i` and `j`.
    pub fn common(&self, i: usize, j: usize) -> u64 {
        self.row(i)
            .iter()
            .zip(self.row(j))
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    }

    /// Reads `k`, `lambda` and `mu` off the matrix itself (degree of vertex 0,
    /// then the first adjacent and first non-adjacent partner of vertex 0) and
    /// checks `A^2 = kI + lambda A + mu (J - I - A)` on every entry.
    pub fn srg_identity(&self) -> MatrixIdentity {
        let n = self.n;
        if n == 0 {
            return MatrixIdentity {
                holds: true,
                k: 0,
                lambda: 0,
                mu: 0,
                witness: None,
            };
        }
        let k = self.degree(0);
        let lambda = (1..n)
            .find(|&j| self.has_edge(0, j))
            .map_or(0, |j| self.common(0, j));
        let mu = (1..n)
            .find(|&j| !self.has_edge(0, j))
            .map_or(0, |j| self.common(0, j));
        let witness = (0..n).into_par_iter().find_map_first(|i| {
            (i..n).find_map(|j| {
                let expected = if i == j {
                    k
                } else if self.has_edge(i, j) {
                    lambda
                } else {
                    mu
                };
                (self.common(i, j) != expected).then_some((i, j))
            })
        });
        MatrixIdentity {
            holds: witness.is_none(),
            k,
            lambda,
            mu,
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixIdentity {
    pub holds: bool,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
    /// First entry `(i, j)`, `i <= j`, where the identity fails.
    pub witness: Option<(usize, usize)>,
}

pub fn matrix_identity_check(g: &IntegralGraph<'_>) -> Result<MatrixIdentity, GraphError> {
    Ok(DenseAdjacency::from_graph(g)?.srg_identity())
}

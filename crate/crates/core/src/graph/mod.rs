//! The integral-distance graph on `AG(m, q)`.
//!
//! Adjacency of `u` and `v` depends only on `u - v`, so the graph is stored
//! as one character value per difference vector. Every per-pair count then
//! reduces to a per-difference count over `q^m` vectors, and a certificate
//! can visit all `q^m - 1` difference classes exactly.

mod dense;
mod graph6;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Fe, Field};

pub use dense::{matrix_identity_check, DenseAdjacency, MatrixIdentity, DENSE_BOUND};
pub use graph6::{export_graph6, graph6_string, write_graph6, Adjacency, GRAPH6_MAX_ORDER};

/// Default cap on `q^m` for building a graph.
pub const DEFAULT_GRAPH_BOUND: u64 = 1 << 24;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("dimension m = {0} must be even")]
    OddDimension(usize),
    #[error("dimension m must be positive")]
    ZeroDimension,
    #[error("{vertices} vertices exceeds the size bound {bound}")]
    SizeBoundExceeded { vertices: u128, bound: u64 },
    #[error("vertex rank {rank} out of range for {order} vertices")]
    RankOutOfRange { rank: u64, order: u64 },
    #[error("the difference vector must be nonzero")]
    ZeroDifference,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A point of `AG(m, q)` by its base-`q` rank, first coordinate least
/// significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn rank(self) -> usize {
        self.0 as usize
    }
}

/// Which orbit a nonzero difference falls in, by the character of its norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DifferenceClass {
    /// Norm zero: adjacent.
    Isotropic,
    /// Norm a nonzero square: adjacent.
    Square,
    /// Norm a nonsquare: not adjacent.
    Nonsquare,
}

impl DifferenceClass {
    fn of_char(c: i8) -> Self {
        match c {
            0 => DifferenceClass::Isotropic,
            1 => DifferenceClass::Square,
            _ => DifferenceClass::Nonsquare,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceCensus {
    pub n0: u64,
    pub nplus: u64,
    pub nminus: u64,
}

impl DistanceCensus {
    pub fn degree(&self) -> u64 {
        self.n0 + self.nplus
    }

    pub fn total(&self) -> u64 {
        self.n0 + self.nplus + self.nminus
    }
}

/// First difference whose common-neighbour count breaks constancy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub difference: Vec<u32>,
    pub rank: u32,
    pub class: DifferenceClass,
    pub expected: u64,
    pub found: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgCertificate {
    pub q: u32,
    pub m: usize,
    pub v: u64,
    pub k: u64,
    /// Common neighbours across a square-norm difference.
    pub lambda: u64,
    pub mu: u64,
    /// Common neighbours across an isotropic difference, if any exist.
    pub sigma: Option<u64>,
    pub census: DistanceCensus,
    pub regular: bool,
    pub identity_holds: bool,
    pub is_srg: bool,
    pub witness: Option<Witness>,
    /// Set for `m = 2`, which is outside the even `m >= 4` range the
    /// strong-regularity result covers.
    pub advisory: Option<String>,
}

impl SrgCertificate {
    /// `|P0|(k - sigma - 1) + |P+|(k - lambda - 1) = (v - k - 1) mu`, counting
    /// the edges between the neighbourhood of a vertex and the rest.
    pub fn three_level_identity(&self) -> bool {
        let k = self.k as i128;
        let sigma = self.sigma.unwrap_or(self.lambda) as i128;
        let lhs = self.census.n0 as i128 * (k - sigma - 1)
            + self.census.nplus as i128 * (k - self.lambda as i128 - 1);
        lhs == (self.v as i128 - k - 1) * self.mu as i128
    }
}

pub struct IntegralGraph<'f> {
    field: &'f Field,
    m: usize,
    q: usize,
    order: usize,
    norm_char: Vec<i8>,
}

impl<'f> IntegralGraph<'f> {
    pub fn build(field: &'f Field, m: usize) -> Result<Self, GraphError> {
        Self::build_with_bound(field, m, DEFAULT_GRAPH_BOUND)
    }

    pub fn build_with_bound(field: &'f Field, m: usize, bound: u64) -> Result<Self, GraphError> {
        if m == 0 {
            return Err(GraphError::ZeroDimension);
        }
        if m % 2 == 1 {
            return Err(GraphError::OddDimension(m));
        }
        let q = field.order() as usize;
        let vertices = (q as u128).pow(m as u32);
        if vertices > bound as u128 || vertices > u32::MAX as u128 {
            return Err(GraphError::SizeBoundExceeded { vertices, bound });
        }
        let order = vertices as usize;

        // norm(d0 + q * rest) = d0^2 + norm(rest)
        let squares: Vec<Fe> = field.elements().map(|x| field.square(x)).collect();
        let mut norm = vec![Fe::ZERO; order];
        for r in 1..order {
            norm[r] = field.add(squares[r % q], norm[r / q]);
        }
        let norm_char = norm.into_iter().map(|x| field.chi(x)).collect();
        Ok(Self {
            field,
            m,
            q,
            order,
            norm_char,
        })
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    /// Number of vertices, `q^m`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn norm_chars(&self) -> &[i8] {
        &self.norm_char
    }

    pub fn vertex(&self, rank: u64) -> Result<VertexId, GraphError> {
        if rank < self.order as u64 {
            Ok(VertexId(rank as u32))
        } else {
            Err(GraphError::RankOutOfRange {
                rank,
                order: self.order as u64,
            })
        }
    }

    pub fn rank_of(&self, coords: &[Fe]) -> VertexId {
        assert_eq!(coords.len(), self.m);
        VertexId(
            coords
                .iter()
                .rev()
                .fold(0u32, |acc, x| acc * self.q as u32 + x.index()),
        )
    }

    pub fn coords(&self, v: VertexId) -> Vec<Fe> {
        let mut r = v.rank();
        (0..self.m)
            .map(|_| {
                let d = r % self.q;
                r /= self.q;
                Fe(d as u32)
            })
            .collect()
    }

    /// `u - v`, coordinatewise.
    pub fn difference(&self, u: VertexId, v: VertexId) -> VertexId {
        let f = self.field;
        let (mut a, mut b) = (u.rank(), v.rank());
        let mut out = 0usize;
        let mut place = 1usize;
        for _ in 0..self.m {
            let d = f.sub(Fe((a % self.q) as u32), Fe((b % self.q) as u32));
            out += d.index() as usize * place;
            a /= self.q;
            b /= self.q;
            place *= self.q;
        }
        VertexId(out as u32)
    }

    pub fn class_of(&self, d: VertexId) -> DifferenceClass {
        DifferenceClass::of_char(self.norm_char[d.rank()])
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        for w in [u, v] {
            self.vertex(w.0 as u64)?;
        }
        Ok(self.adjacent_unchecked(u, v))
    }

    fn adjacent_unchecked(&self, u: VertexId, v: VertexId) -> bool {
        u != v && self.norm_char[self.difference(u, v).rank()] >= 0
    }

    pub fn distance_census(&self) -> DistanceCensus {
        let mut census = DistanceCensus {
            n0: 0,
            nplus: 0,
            nminus: 0,
        };
        for &c in &self.norm_char[1..] {
            match c {
                0 => census.n0 += 1,
                1 => census.nplus += 1,
                _ => census.nminus += 1,
            }
        }
        census
    }

    /// Indicator of the neighbourhood of the origin.
    fn neighbour_mask(&self) -> Vec<bool> {
        let mut mask: Vec<bool> = self.norm_char.iter().map(|&c| c >= 0).collect();
        mask[0] = false;
        mask
    }

    /// Common neighbours of any two vertices at difference `d`.
    pub fn common_neighbors(&self, d: VertexId) -> Result<u64, GraphError> {
        self.vertex(d.0 as u64)?;
        if d.0 == 0 {
            return Err(GraphError::ZeroDifference);
        }
        let mask = self.neighbour_mask();
        Ok(ShiftCounter::new(self).count(&mask, d.rank()))
    }

    /// Exhaustive strong-regularity certificate over every nonzero
    /// difference.
    pub fn certify_srg(&self) -> SrgCertificate {
        let census = self.distance_census();
        let mask = self.neighbour_mask();
        let counter = ShiftCounter::new(self);
        let counts: Vec<u64> = (1..self.order)
            .into_par_iter()
            .map(|d| counter.count(&mask, d))
            .collect();

        let k = census.degree();
        let degree_of_origin = mask.iter().filter(|&&b| b).count() as u64;
        let regular = degree_of_origin == k;

        // First value seen in each class is the reference; the first
        // difference that disagrees is the witness.
        let mut reference: [Option<u64>; 3] = [None; 3];
        let mut witness = None;
        for (i, &count) in counts.iter().enumerate() {
            let d = i + 1;
            let class = self.class_of(VertexId(d as u32));
            let slot = &mut reference[class_slot(class)];
            match *slot {
                None => *slot = Some(count),
                Some(expected) if expected != count && witness.is_none() => {
                    witness = Some(self.witness(d, class, expected, count));
                }
                _ => {}
            }
        }
        let [sigma, lambda, mu] = reference;
        let lambda_value = lambda.or(sigma).unwrap_or(0);
        if witness.is_none() {
            if let (Some(s), Some(l)) = (sigma, lambda) {
                if s != l {
                    let first_isotropic = (1..self.order)
                        .find(|&d| self.norm_char[d] == 0)
                        .expect("sigma is only set when an isotropic difference exists");
                    witness = Some(self.witness(first_isotropic, DifferenceClass::Isotropic, l, s));
                }
            }
        }
        let mu_value = mu.unwrap_or(0);
        let v = self.order as u64;
        let identity_holds = (v as i128 - k as i128 - 1) * mu_value as i128
            == k as i128 * (k as i128 - lambda_value as i128 - 1);

        SrgCertificate {
            q: self.q as u32,
            m: self.m,
            v,
            k,
            lambda: lambda_value,
            mu: mu_value,
            sigma,
            census,
            regular,
            identity_holds,
            is_srg: regular && witness.is_none() && identity_holds,
            witness,
            advisory: (self.m < 4)
                .then(|| "m < 4: outside the even m >= 4 range; result is informational".into()),
        }
    }

    fn witness(&self, d: usize, class: DifferenceClass, expected: u64, found: u64) -> Witness {
        Witness {
            difference: self
                .coords(VertexId(d as u32))
                .iter()
                .map(|x| x.index())
                .collect(),
            rank: d as u32,
            class,
            expected,
            found,
        }
    }

    /// A copy with the adjacency of the differences `d` and `-d` toggled.
    /// The result is still translation invariant but in general no longer
    /// strongly regular.
    pub fn with_flipped_difference(&self, d: VertexId) -> Result<Self, GraphError> {
        self.vertex(d.0 as u64)?;
        if d.0 == 0 {
            return Err(GraphError::ZeroDifference);
        }
        let mut norm_char = self.norm_char.clone();
        let neg = self.difference(VertexId(0), d);
        let flipped = if norm_char[d.rank()] >= 0 { -1 } else { 1 };
        norm_char[d.rank()] = flipped;
        norm_char[neg.rank()] = flipped;
        Ok(Self {
            field: self.field,
            m: self.m,
            q: self.q,
            order: self.order,
            norm_char,
        })
    }
}

fn class_slot(class: DifferenceClass) -> usize {
    match class {
        DifferenceClass::Isotropic => 0,
        DifferenceClass::Square => 1,
        DifferenceClass::Nonsquare => 2,
    }
}

/// Counts `#{y : mask[y] && mask[y - d]}` in `O(q^m)` lookups by splitting
/// each rank into a low and a high half, so that the rank of `y - d` is a
/// sum of two precomputed table entries.
struct ShiftCounter {
    q: usize,
    low_digits: usize,
    high_digits: usize,
    low_size: usize,
    high_size: usize,
    /// Field subtraction on indices, `q x q`.
    sub: Vec<u32>,
}

impl ShiftCounter {
    fn new(g: &IntegralGraph<'_>) -> Self {
        let q = g.q;
        let low_digits = g.m / 2;
        let high_digits = g.m - low_digits;
        let mut sub = vec![0u32; q * q];
        for a in 0..q {
            for b in 0..q {
                sub[a * q + b] = g.field.sub(Fe(a as u32), Fe(b as u32)).index();
            }
        }
        Self {
            q,
            low_digits,
            high_digits,
            low_size: q.pow(low_digits as u32),
            high_size: q.pow(high_digits as u32),
            sub,
        }
    }

    /// Rank of `x - d` restricted to `digits` digits.
    fn shifted(&self, mut x: usize, mut d: usize, digits: usize) -> usize {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..digits {
            out += self.sub[(x % self.q) * self.q + d % self.q] as usize * place;
            x /= self.q;
            d /= self.q;
            place *= self.q;
        }
        out
    }

    fn count(&self, mask: &[bool], d: usize) -> u64 {
        let (d_low, d_high) = (d % self.low_size, d / self.low_size);
        let low: Vec<usize> = (0..self.low_size)
            .map(|a| self.shifted(a, d_low, self.low_digits))
            .collect();
        let mut total = 0u64;
        for b in 0..self.high_size {
            let base = b * self.low_size;
            let shifted_base = self.shifted(b, d_high, self.high_digits) * self.low_size;
            let row = &mask[base..base + self.low_size];
            total += row
                .iter()
                .zip(&low)
                .filter(|&(&here, &a)| here && mask[shifted_base + a])
                .count() as u64;
        }
        total
    }
}

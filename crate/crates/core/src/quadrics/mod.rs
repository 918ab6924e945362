//! Quadratic forms over `F_q` and the quadrics they define in `PG(r, q)`.
//!
//! A form in `n` variables is held as its symmetric Gram matrix, with the
//! coefficient of a cross term `x_i x_j` split evenly between `(i, j)` and
//! `(j, i)`. Odd characteristic makes that split exact.

mod named;
mod points;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Fe, Field};

pub use named::NamedForm;
pub use points::{
    count_affine_solutions, count_projective_points, enumerate_pg_points, projective_point_count,
    ProjectivePoints, QuadricCensus, DEFAULT_POINT_BOUND,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadricError {
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("point counts are only defined for non-singular quadrics")]
    SingularInput,
    #[error("enumeration of {count} points exceeds the bound {bound}")]
    SizeBoundExceeded { count: u128, bound: u64 },
    #[error("a form needs at least one variable")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadricKind {
    Parabolic,
    Hyperbolic,
    Elliptic,
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricClass {
    pub kind: QuadricKind,
    pub det: Fe,
    /// Projective dimension; the form has `r + 1` variables.
    pub r: usize,
}

#[derive(Clone, PartialEq, Eq)]
pub struct QuadraticForm<'f> {
    field: &'f Field,
    n: usize,
    entries: Vec<Fe>,
}

impl std::fmt::Debug for QuadraticForm<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<Vec<u32>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j).index()).collect())
            .collect();
        f.debug_struct("QuadraticForm")
            .field("q", &self.field.order())
            .field("matrix", &rows)
            .finish()
    }
}

impl<'f> QuadraticForm<'f> {
    pub fn zero(field: &'f Field, n: usize) -> Self {
        Self {
            field,
            n,
            entries: vec![Fe::ZERO; n * n],
        }
    }

    pub fn identity(field: &'f Field, n: usize) -> Self {
        Self::diagonal(field, &vec![Fe::ONE; n])
    }

    pub fn diagonal(field: &'f Field, diag: &[Fe]) -> Self {
        let mut form = Self::zero(field, diag.len());
        for (i, &d) in diag.iter().enumerate() {
            form.entries[i * form.n + i] = d;
        }
        form
    }

    /// Wraps a row-major `n x n` matrix, which must be symmetric.
    pub fn from_matrix(field: &'f Field, n: usize, entries: Vec<Fe>) -> Result<Self, QuadricError> {
        if n == 0 {
            return Err(QuadricError::Empty);
        }
        if entries.len() != n * n {
            return Err(QuadricError::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        for i in 0..n {
            for j in i + 1..n {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(QuadricError::NotSymmetric(i, j));
                }
            }
        }
        Ok(Self { field, n, entries })
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn projective_dim(&self) -> usize {
        self.n - 1
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Fe {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Fe] {
        &self.entries
    }

    /// Adds `coeff * x_i^2` to the polynomial.
    pub fn add_square(&mut self, i: usize, coeff: Fe) -> &mut Self {
        let k = i * self.n + i;
        self.entries[k] = self.field.add(self.entries[k], coeff);
        self
    }

    /// Adds `coeff * x_i * x_j` (`i != j`) to the polynomial.
    pub fn add_cross(&mut self, i: usize, j: usize, coeff: Fe) -> &mut Self {
        assert_ne!(i, j, "use add_square for diagonal terms");
        let half = self.field.mul(coeff, self.field.half());
        for k in [i * self.n + j, j * self.n + i] {
            self.entries[k] = self.field.add(self.entries[k], half);
        }
        self
    }

    /// `v^T M v`.
    pub fn evaluate(&self, v: &[Fe]) -> Result<Fe, QuadricError> {
        if v.len() != self.n {
            return Err(QuadricError::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        Ok(self.eval_unchecked(v))
    }

    pub(crate) fn eval_unchecked(&self, v: &[Fe]) -> Fe {
        let f = self.field;
        let mut acc = Fe::ZERO;
        for i in 0..self.n {
            if v[i].is_zero() {
                continue;
            }
            let row = &self.entries[i * self.n..(i + 1) * self.n];
            // diagonal once, off-diagonal pairs doubled
            let mut partial = f.mul(row[i], v[i]);
            let mut off = Fe::ZERO;
            for j in i + 1..self.n {
                off = f.add(off, f.mul(row[j], v[j]));
            }
            partial = f.add(partial, f.add(off, off));
            acc = f.add(acc, f.mul(v[i], partial));
        }
        acc
    }

    pub fn determinant(&self) -> Fe {
        determinant(self.field, self.n, &self.entries)
    }

    /// Lemma-2.3-style classification: singular iff `det = 0`, parabolic in
    /// even projective dimension, and otherwise hyperbolic or elliptic by
    /// the character of `(-1)^((r+1)/2) det`.
    pub fn classify(&self) -> QuadricClass {
        let det = self.determinant();
        let r = self.projective_dim();
        let kind = if det.is_zero() {
            QuadricKind::Singular
        } else if r % 2 == 0 {
            QuadricKind::Parabolic
        } else {
            let f = self.field;
            let sign = if ((r + 1) / 2) % 2 == 0 {
                Fe::ONE
            } else {
                f.neg(Fe::ONE)
            };
            if f.chi(f.mul(sign, det)) == 1 {
                QuadricKind::Hyperbolic
            } else {
                QuadricKind::Elliptic
            }
        };
        QuadricClass { kind, det, r }
    }

    /// The form restricted to the hyperplane `x_k = 0`, as the principal
    /// submatrix with row and column `k` removed.
    pub fn section(&self, k: usize) -> Self {
        let n = self.n - 1;
        let mut entries = Vec::with_capacity(n * n);
        for i in (0..self.n).filter(|&i| i != k) {
            for j in (0..self.n).filter(|&j| j != k) {
                entries.push(self.entry(i, j));
            }
        }
        Self {
            field: self.field,
            n,
            entries,
        }
    }

    /// Section by the hyperplane at infinity, taken to be the last
    /// coordinate.
    pub fn at_infinity(&self) -> Self {
        self.section(self.n - 1)
    }

    /// `A^T M A` for a row-major `n x n` matrix `A`.
    pub fn congruent(&self, a: &[Fe]) -> Result<Self, QuadricError> {
        if a.len() != self.n * self.n {
            return Err(QuadricError::DimensionMismatch {
                expected: self.n * self.n,
                got: a.len(),
            });
        }
        let n = self.n;
        let at = transpose(n, a);
        let ma = mat_mul(self.field, n, &self.entries, a);
        Ok(Self {
            field: self.field,
            n,
            entries: mat_mul(self.field, n, &at, &ma),
        })
    }
}

pub fn transpose(n: usize, a: &[Fe]) -> Vec<Fe> {
    let mut t = vec![Fe::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = a[i * n + j];
        }
    }
    t
}

pub fn mat_mul(f: &Field, n: usize, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let mut out = vec![Fe::ZERO; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..n {
                let idx = i * n + j;
                out[idx] = f.add(out[idx], f.mul(aik, b[k * n + j]));
            }
        }
    }
    out
}

/// Determinant of a row-major `n x n` matrix by Gaussian elimination.
pub fn determinant(f: &Field, n: usize, entries: &[Fe]) -> Fe {
    assert_eq!(entries.len(), n * n);
    let mut a = entries.to_vec();
    let mut det = Fe::ONE;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
            return Fe::ZERO;
        };
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            det = f.neg(det);
        }
        let p = a[col * n + col];
        det = f.mul(det, p);
        let p_inv = f.inv(p).expect("pivot is nonzero");
        for r in col + 1..n {
            let factor = f.mul(a[r * n + col], p_inv);
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                let v = f.mul(factor, a[col * n + j]);
                a[r * n + j] = f.sub(a[r * n + j], v);
            }
        }
    }
    det
}

/// Points on a non-singular quadric of the given class in `PG(r, q)`.
pub fn theoretical_point_count(class: &QuadricClass, q: u64) -> Result<u64, QuadricError> {
    let r = class.r as u32;
    let q = q as u128;
    let (a, b) = match class.kind {
        QuadricKind::Singular => return Err(QuadricError::SingularInput),
        QuadricKind::Parabolic => (q.pow(r / 2) + 1, q.pow(r / 2) - 1),
        QuadricKind::Elliptic => (q.pow((r + 1) / 2) + 1, q.pow((r - 1) / 2) - 1),
        QuadricKind::Hyperbolic => (q.pow((r - 1) / 2) + 1, q.pow((r + 1) / 2) - 1),
    };
    let num = a * b;
    debug_assert_eq!(num % (q - 1), 0);
    Ok((num / (q - 1)) as u64)
}

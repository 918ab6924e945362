use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{theoretical_point_count, QuadraticForm, QuadricClass, QuadricError};
use crate::gf::{Fe, Field};

/// Default cap on the number of points (or affine vectors) an exhaustive
/// count may visit.
pub const DEFAULT_POINT_BOUND: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricCensus {
    pub class: QuadricClass,
    /// Closed-form count; `None` for singular quadrics.
    pub theoretical: Option<u64>,
    pub exhaustive: u64,
    pub matches: bool,
}

/// `(q^(r+1) - 1) / (q - 1)`.
pub fn projective_point_count(r: usize, q: u64) -> u128 {
    let q = q as u128;
    (q.pow(r as u32 + 1) - 1) / (q - 1)
}

fn check_bound(count: u128, bound: u64) -> Result<(), QuadricError> {
    if count > bound as u128 {
        Err(QuadricError::SizeBoundExceeded { count, bound })
    } else {
        Ok(())
    }
}

/// One normalized representative per point of `PG(r, q)`: leftmost
/// nonzero coordinate equal to 1. Points come grouped by the position of
/// that leading 1 (first coordinate first), lexicographically within each
/// group.
pub struct ProjectivePoints {
    q: u32,
    current: Vec<u32>,
    pivot: usize,
    done: bool,
}

impl Iterator for ProjectivePoints {
    type Item = Vec<Fe>;

    fn next(&mut self) -> Option<Vec<Fe>> {
        if self.done {
            return None;
        }
        let out = self.current.iter().map(|&i| Fe(i)).collect();
        // advance the free coordinates after the pivot
        let n = self.current.len();
        let mut k = n;
        loop {
            if k == self.pivot + 1 {
                self.pivot += 1;
                if self.pivot == n {
                    self.done = true;
                } else {
                    self.current.iter_mut().for_each(|c| *c = 0);
                    self.current[self.pivot] = 1;
                }
                break;
            }
            k -= 1;
            self.current[k] += 1;
            if self.current[k] < self.q {
                break;
            }
            self.current[k] = 0;
        }
        Some(out)
    }
}

pub fn enumerate_pg_points(
    r: usize,
    field: &Field,
    bound: u64,
) -> Result<ProjectivePoints, QuadricError> {
    let q = field.order();
    check_bound(projective_point_count(r, q as u64), bound)?;
    let mut current = vec![0; r + 1];
    current[0] = 1;
    Ok(ProjectivePoints {
        q,
        current,
        pivot: 0,
        done: false,
    })
}

/// Calls `visit` on every assignment of `buf[start..]`, keeping `buf[..start]`
/// fixed.
fn for_each_tail(q: u32, buf: &mut [Fe], start: usize, mut visit: impl FnMut(&[Fe])) {
    for slot in &mut buf[start..] {
        *slot = Fe::ZERO;
    }
    loop {
        visit(buf);
        let mut k = buf.len();
        loop {
            if k == start {
                return;
            }
            k -= 1;
            let next = buf[k].index() + 1;
            if next < q {
                buf[k] = Fe(next);
                break;
            }
            buf[k] = Fe::ZERO;
        }
    }
}

/// Exhaustive count of the projective points on the quadric `form = 0`,
/// alongside the closed-form count for its class.
pub fn count_projective_points(
    form: &QuadraticForm<'_>,
    bound: u64,
) -> Result<QuadricCensus, QuadricError> {
    let n = form.dim();
    let q = form.field().order();
    check_bound(projective_point_count(n - 1, q as u64), bound)?;

    // Split work by pivot and the first free coordinate.
    let jobs: Vec<(usize, Option<u32>)> = (0..n)
        .flat_map(|pivot| {
            if pivot + 1 < n {
                (0..q).map(|c| (pivot, Some(c))).collect::<Vec<_>>()
            } else {
                vec![(pivot, None)]
            }
        })
        .collect();
    let exhaustive: u64 = jobs
        .into_par_iter()
        .map(|(pivot, first)| {
            let mut buf = vec![Fe::ZERO; n];
            buf[pivot] = Fe::ONE;
            let start = match first {
                Some(c) => {
                    buf[pivot + 1] = Fe(c);
                    pivot + 2
                }
                None => pivot + 1,
            };
            let mut count = 0u64;
            for_each_tail(q, &mut buf, start, |v| {
                if form.eval_unchecked(v).is_zero() {
                    count += 1;
                }
            });
            count
        })
        .sum();

    let class = form.classify();
    let theoretical = theoretical_point_count(&class, q as u64).ok();
    Ok(QuadricCensus {
        class,
        theoretical,
        exhaustive,
        matches: theoretical == Some(exhaustive),
    })
}

/// Number of affine zeros of a quadratic polynomial in `n - 1` variables,
/// given by its homogenization `form` in `n` variables whose last
/// coordinate is the homogenizing one (set to 1).
pub fn count_affine_solutions(form: &QuadraticForm<'_>, bound: u64) -> Result<u64, QuadricError> {
    let n = form.dim();
    let q = form.field().order();
    let vars = n - 1;
    check_bound((q as u128).pow(vars as u32), bound)?;
    if vars == 0 {
        return Ok(form.eval_unchecked(&[Fe::ONE]).is_zero() as u64);
    }
    Ok((0..q)
        .into_par_iter()
        .map(|first| {
            let mut buf = vec![Fe::ZERO; n];
            buf[0] = Fe(first);
            let mut count = 0u64;
            let mut tail = vec![Fe::ZERO; vars];
            tail[0] = Fe(first);
            for_each_tail(q, &mut tail, 1, |v| {
                buf[..vars].copy_from_slice(v);
                buf[vars] = Fe::ONE;
                if form.eval_unchecked(&buf).is_zero() {
                    count += 1;
                }
            });
            count
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrics::QuadricKind;

    #[test]
    fn pg_point_counts() {
        let f3 = Field::of_order(3).unwrap();
        let line: Vec<Vec<Fe>> = enumerate_pg_points(1, &f3, DEFAULT_POINT_BOUND)
            .unwrap()
            .collect();
        let idx: Vec<Vec<u32>> = line
            .iter()
            .map(|p| p.iter().map(|x| x.index()).collect())
            .collect();
        assert_eq!(idx, vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![0, 1]]);
        assert_eq!(
            enumerate_pg_points(2, &f3, DEFAULT_POINT_BOUND)
                .unwrap()
                .count(),
            13
        );
        let f5 = Field::of_order(5).unwrap();
        assert_eq!(
            enumerate_pg_points(4, &f5, DEFAULT_POINT_BOUND)
                .unwrap()
                .count(),
            781
        );
        assert!(matches!(
            enumerate_pg_points(4, &f5, 100),
            Err(QuadricError::SizeBoundExceeded { count: 781, .. })
        ));
    }

    #[test]
    fn points_are_normalized_and_distinct() {
        let f9 = Field::of_order(9).unwrap();
        let pts: Vec<Vec<Fe>> = enumerate_pg_points(3, &f9, DEFAULT_POINT_BOUND)
            .unwrap()
            .collect();
        assert_eq!(pts.len() as u128, projective_point_count(3, 9));
        for p in &pts {
            assert_eq!(p.iter().find(|x| !x.is_zero()), Some(&Fe::ONE));
        }
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), pts.len());
    }

    #[test]
    fn conic_without_points() {
        let f3 = Field::of_order(3).unwrap();
        let census =
            count_projective_points(&QuadraticForm::identity(&f3, 2), DEFAULT_POINT_BOUND).unwrap();
        assert_eq!(census.exhaustive, 0);
        assert_eq!(census.class.kind, QuadricKind::Elliptic);
        assert!(census.matches);
    }

    #[test]
    fn singular_census_never_matches() {
        let f3 = Field::of_order(3).unwrap();
        let census =
            count_projective_points(&QuadraticForm::zero(&f3, 3), DEFAULT_POINT_BOUND).unwrap();
        assert_eq!(census.exhaustive, 13);
        assert_eq!(census.theoretical, None);
        assert!(!census.matches);
    }

    #[test]
    fn affine_counts() {
        let f3 = Field::of_order(3).unwrap();
        // x^2 + y^2 over F_3: only the origin
        let mut form = QuadraticForm::zero(&f3, 3);
        form.add_square(0, Fe::ONE).add_square(1, Fe::ONE);
        assert_eq!(
            count_affine_solutions(&form, DEFAULT_POINT_BOUND).unwrap(),
            1
        );

        // a linear polynomial in 3 variables: x + 2z + 1
        let f5 = Field::of_order(5).unwrap();
        let mut lin = QuadraticForm::zero(&f5, 4);
        lin.add_cross(0, 3, Fe::ONE)
            .add_cross(2, 3, Fe(2))
            .add_square(3, Fe::ONE);
        assert_eq!(
            count_affine_solutions(&lin, DEFAULT_POINT_BOUND).unwrap(),
            25
        );
        assert!(count_affine_solutions(&lin, 10).is_err());
    }
}

//! Closed forms for the counts that assemble `mu`, as functions of `q`, `m`
//! and (where the count splits by a quadratic character) a branch.
//!
//! Character-dependent branches are looked up in frozen tables. The tables
//! were fixed by running the oracles at the smallest `(q, m)` that exercises
//! each entry; [`super::calibrate`] recomputes them and the test suite
//! checks that the recomputation still agrees.

use serde::{Deserialize, Serialize};

fn pow(q: u64, e: usize) -> i128 {
    (q as i128).pow(e as u32)
}

/// Exact division; panics if `num` is not a multiple of `den`.
fn exact(num: i128, den: i128) -> i128 {
    assert_eq!(num % den, 0, "{num} is not divisible by {den}");
    num / den
}

/// `q^(m/2 - 1) (q^(m/2) - 1)` or `q^(m/2 - 1) (q^(m/2) + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaBranch {
    Minus,
    Plus,
}

/// Entry of the bracket-count branch table: for `m mod 4`, `q mod 4` and
/// `chi(gamma^2 - (1 + eps^2))`, which branch applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaBranchEntry {
    pub m_mod_4: u8,
    pub q_mod_4: u8,
    pub character: i8,
    pub branch: GammaBranch,
}

const fn gb(m_mod_4: u8, q_mod_4: u8, character: i8, branch: GammaBranch) -> GammaBranchEntry {
    GammaBranchEntry {
        m_mod_4,
        q_mod_4,
        character,
        branch,
    }
}

pub const GAMMA_BRANCHES: [GammaBranchEntry; 8] = [
    gb(0, 1, 1, GammaBranch::Minus),
    gb(0, 1, -1, GammaBranch::Plus),
    gb(0, 3, 1, GammaBranch::Minus),
    gb(0, 3, -1, GammaBranch::Plus),
    gb(2, 1, 1, GammaBranch::Minus),
    gb(2, 1, -1, GammaBranch::Plus),
    gb(2, 3, 1, GammaBranch::Plus),
    gb(2, 3, -1, GammaBranch::Minus),
];

pub fn gamma_branch(m: usize, q: u64, character: i8) -> GammaBranch {
    GAMMA_BRANCHES
        .iter()
        .find(|e| {
            e.m_mod_4 as usize == m % 4 && e.q_mod_4 as u64 == q % 4 && e.character == character
        })
        .map(|e| e.branch)
        .expect("character must be +1 or -1")
}

/// The three values the conic count takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicBranch {
    /// `(q - 1) / 4`
    QuarterQMinus1,
    /// `(q - 3) / 4`
    QuarterQMinus3,
    /// `(q + 1) / 4`
    QuarterQPlus1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicBranchEntry {
    pub q_mod_4: u8,
    /// `chi(s)`.
    pub character: i8,
    pub branch: ConicBranch,
}

pub const CONIC_BRANCHES: [ConicBranchEntry; 4] = [
    ConicBranchEntry {
        q_mod_4: 1,
        character: 1,
        branch: ConicBranch::QuarterQMinus1,
    },
    ConicBranchEntry {
        q_mod_4: 1,
        character: -1,
        branch: ConicBranch::QuarterQMinus1,
    },
    ConicBranchEntry {
        q_mod_4: 3,
        character: 1,
        branch: ConicBranch::QuarterQMinus3,
    },
    ConicBranchEntry {
        q_mod_4: 3,
        character: -1,
        branch: ConicBranch::QuarterQPlus1,
    },
];

pub fn conic_branch(q: u64, character: i8) -> ConicBranch {
    CONIC_BRANCHES
        .iter()
        .find(|e| e.q_mod_4 as u64 == q % 4 && e.character == character)
        .map(|e| e.branch)
        .expect("character must be +1 or -1")
}

/// `[0]`: tuples on the line `y1 = (1 + eps^2)/2 - eps y2` at square-or-zero
/// distance from `P`.
pub fn bracket_zero(q: u64, m: usize) -> i128 {
    let h = m / 2;
    let extra = if q % 4 == 1 { 2 } else { 0 };
    exact(pow(q, h - 1) * (pow(q, h) + pow(q, h - 1) + extra), 2)
}

/// `sigma_0`: tuples at distance zero from both the origin and `P`.
pub fn sigma_zero(q: u64, m: usize) -> i128 {
    let h = m / 2;
    let sign = if m % 4 == 2 && q % 4 == 3 { -1 } else { 1 };
    pow(q, h - 1) * (pow(q, h - 1) + sign)
}

/// `[gamma^2]` on the given branch.
pub fn bracket_gamma(q: u64, m: usize, branch: GammaBranch) -> i128 {
    let h = m / 2;
    let sign = match branch {
        GammaBranch::Minus => -1,
        GammaBranch::Plus => 1,
    };
    pow(q, h - 1) * (pow(q, h) + sign)
}

/// Number of values `gamma^2` with `gamma^2 - s tau^2 = 1 + eps^2` solvable.
pub fn conic_count(q: u64, branch: ConicBranch) -> i128 {
    conic_count_checked(q, branch)
        .unwrap_or_else(|| panic!("{branch:?} is not integral at q = {q}"))
}

/// [`conic_count`], or `None` when the branch is not integral at `q`.
pub fn conic_count_checked(q: u64, branch: ConicBranch) -> Option<i128> {
    let q = q as i128;
    let num = match branch {
        ConicBranch::QuarterQMinus1 => q - 1,
        ConicBranch::QuarterQMinus3 => q - 3,
        ConicBranch::QuarterQPlus1 => q + 1,
    };
    (num % 4 == 0).then_some(num / 4)
}

/// `sum [gamma^2]` over all nonzero squares.
pub fn sum_brackets(q: u64, m: usize) -> i128 {
    let h = m / 2;
    match (m % 4, q % 4) {
        (_, 1) => exact(pow(q, m - 1) * (q as i128 - 1), 2),
        (0, _) => exact(pow(q, h - 1) * (pow(q, h + 1) - pow(q, h) + 2), 2),
        _ => exact(pow(q, h - 1) * (pow(q, h + 1) - pow(q, h) - 2), 2),
    }
}

/// Affine points of the zero-norm slice for a single `gamma^2`.
pub fn single_slice(q: u64, m: usize) -> i128 {
    sigma_zero(q, m)
}

/// `r_q`: zero-norm tuples lying in exactly one nonzero class.
pub fn special_r(q: u64, m: usize) -> i128 {
    exact((q as i128 - 1) * single_slice(q, m), 2)
}

/// `l_q`: tuples at distance zero from `P` lying in exactly one class, summed
/// over the nonzero square norms.
pub fn special_ell(q: u64, m: usize) -> i128 {
    special_r(q, m)
}

/// `mu` from the transcribed parameter formulas.
pub fn mu(q: u64, m: usize) -> i128 {
    crate::params::transcribed_mu(q, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_values() {
        assert_eq!(bracket_zero(3, 4), 18);
        assert_eq!(bracket_zero(5, 4), 80);
        assert_eq!(sigma_zero(3, 4), 12);
        assert_eq!(sigma_zero(5, 4), 30);
        assert_eq!(sigma_zero(7, 4), 56);
        assert_eq!(bracket_gamma(3, 4, GammaBranch::Plus), 30);
        assert_eq!(sum_brackets(3, 4), 30);
        assert_eq!(sum_brackets(5, 4), 250);
        assert_eq!(sum_brackets(7, 4), 1036);
        assert_eq!(special_r(3, 4), 12);
        assert_eq!(special_r(5, 4), 60);
        assert_eq!(special_ell(3, 4), 12);
        assert_eq!(special_ell(5, 4), 60);
        assert_eq!(conic_count(5, ConicBranch::QuarterQMinus1), 1);
        assert_eq!(conic_count(3, ConicBranch::QuarterQMinus3), 0);
        assert_eq!(conic_count(3, ConicBranch::QuarterQPlus1), 1);
    }

    #[test]
    fn assembly_is_even_and_matches_mu() {
        for q in [3u64, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27] {
            for m in [4usize, 6, 8, 10, 12] {
                let total = bracket_zero(q, m)
                    + sum_brackets(q, m)
                    + special_r(q, m)
                    + special_ell(q, m)
                    + sigma_zero(q, m);
                assert_eq!(total % 2, 0, "q={q} m={m}");
                assert_eq!(total / 2, mu(q, m), "q={q} m={m}");
            }
        }
    }

    #[test]
    fn split_sum_agrees_with_closed_form() {
        for q in [3u64, 5, 7, 9, 11, 13, 27] {
            for m in [4usize, 6, 8] {
                let split: i128 = [1i8, -1]
                    .iter()
                    .map(|&chi| {
                        conic_count(q, conic_branch(q, chi))
                            * bracket_gamma(q, m, gamma_branch(m, q, chi))
                    })
                    .sum();
                assert_eq!(split, sum_brackets(q, m), "q={q} m={m}");
            }
        }
    }
}

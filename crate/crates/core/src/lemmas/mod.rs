//! Brute-force oracles for every count that goes into `mu`, the number of
//! common neighbours of the origin `O` and `P = (1, eps, 0, ..., 0)`, paired
//! with the closed forms in [`formulas`].
//!
//! Notation: `c = 1 + eps^2` (a nonsquare), `N(y) = sum y_i^2` and
//! `D(y) = N(y - P)`. A tuple `y` is a solution when both `N(y)` and `D(y)`
//! are squares or zero. For a nonzero square `g`, `y` lies in class `[g]`
//! when `(y1 + eps y2 - (c - g)/2)^2 = g N(y)`; it lies in `[0]` when
//! `y1 + eps y2 = c/2` and `D(y)` is a square or zero.

pub mod formulas;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Fe, Field};
use crate::graph::{GraphError, IntegralGraph};
use formulas::{ConicBranch, ConicBranchEntry, GammaBranch, GammaBranchEntry};

/// Default cap on `q^m` for the oracles.
pub const DEFAULT_LEMMA_BOUND: u64 = 1 << 20;

#[derive(Debug, Error)]
pub enum LemmaError {
    #[error("m = {0} must be even and at least 4")]
    UnsupportedDimension(usize),
    #[error("{count} tuples exceeds the size bound {bound}")]
    SizeBoundExceeded { count: u128, bound: u64 },
    #[error("s must be nonzero")]
    ZeroS,
    #[error("{0} is not a nonzero square")]
    NotASquare(u32),
    #[error("gamma^2 = 1 + eps^2 is degenerate")]
    DegenerateGamma,
    #[error("bracketed sum {0} is odd")]
    OddAssembly(i128),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountPair {
    pub name: String,
    pub formula: i128,
    pub oracle: u64,
    pub matches: bool,
}

impl CountPair {
    fn new(name: impl Into<String>, formula: i128, oracle: u64) -> Self {
        Self {
            name: name.into(),
            formula,
            oracle,
            matches: formula == oracle as i128,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaBracket {
    pub gamma_sq: u32,
    /// `chi(gamma^2 - c)`.
    pub character: i8,
    pub branch: GammaBranch,
    pub count: CountPair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicCount {
    pub s: u32,
    pub character: i8,
    pub branch: ConicBranch,
    pub count: CountPair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumBrackets {
    pub total: CountPair,
    /// `sum_chi R(chi) * [gamma^2]_chi`, using the conic counts for the
    /// number of classes on each branch.
    pub split_formula: i128,
    /// Number of classes with `chi(gamma^2 - c) = +1` and `-1`, by oracle.
    pub classes_by_character: (u64, u64),
    pub split_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityAudit {
    /// `|G(y)|` to number of solutions `y`.
    pub histogram: BTreeMap<usize, u64>,
    pub solutions: u64,
    /// `sum |G(y)|` over solutions.
    pub incidences: u64,
    /// Tuples outside the solution set with nonempty `G(y)`; must be zero.
    pub strays: u64,
    /// Whether `|G(y)| = 1` exactly when `N(y) = 0` or `D(y) = 0`.
    pub singles_characterized: bool,
}

impl MultiplicityAudit {
    pub fn singles(&self) -> u64 {
        self.histogram.get(&1).copied().unwrap_or(0)
    }

    pub fn support_ok(&self) -> bool {
        self.histogram.keys().all(|&k| k == 1 || k == 2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub q: u32,
    pub m: usize,
    pub epsilon: u32,
    pub bracket0: CountPair,
    pub sigma0: CountPair,
    pub brackets: Vec<GammaBracket>,
    pub sum_brackets: SumBrackets,
    pub conic: Vec<ConicCount>,
    pub r: CountPair,
    pub ell: CountPair,
    pub multiplicity: MultiplicityAudit,
    /// Half the bracketed sum of the closed forms.
    pub mu_assembled: i128,
    /// Half the bracketed sum of the oracle counts.
    pub mu_assembled_oracle: i128,
    pub mu_direct: u64,
    pub mu_formula: i128,
    /// Common neighbours of `O` and `P` in the graph, plus the members of
    /// `{O, P}` that satisfy both conditions.
    pub mu_graph: u64,
    pub boundary: u64,
    pub conventions: Vec<String>,
}

impl LemmaReport {
    pub fn count_pairs(&self) -> impl Iterator<Item = &CountPair> {
        [
            &self.bracket0,
            &self.sigma0,
            &self.sum_brackets.total,
            &self.r,
            &self.ell,
        ]
        .into_iter()
        .chain(self.brackets.iter().map(|b| &b.count))
        .chain(self.conic.iter().map(|c| &c.count))
    }

    pub fn double_count_holds(&self) -> bool {
        self.bracket0.oracle + self.sum_brackets.total.oracle + self.multiplicity.singles()
            == 2 * self.mu_direct
    }

    /// Every pair matches and all routes to `mu` agree.
    pub fn all_match(&self) -> bool {
        self.count_pairs().all(|p| p.matches)
            && self.sum_brackets.split_holds
            && self.multiplicity.support_ok()
            && self.multiplicity.strays == 0
            && self.multiplicity.singles_characterized
            && self.double_count_holds()
            && self.mu_assembled == self.mu_direct as i128
            && self.mu_assembled_oracle == self.mu_direct as i128
            && self.mu_formula == self.mu_direct as i128
            && self.mu_graph == self.mu_direct
    }
}

pub const CONVENTIONS: [&str; 3] = [
    "epsilon is the least-index element with 1 + epsilon^2 a nonsquare",
    "r counts zero-norm tuples whose unique class is a nonzero square; tuples with both norms zero have unique class 0 and are counted in sigma0 only",
    "ell is summed over all nonzero square norms",
];

/// Field constants shared by the oracles.
struct Setup<'f> {
    f: &'f Field,
    eps: Fe,
    c: Fe,
    half: Fe,
}

impl<'f> Setup<'f> {
    fn new(f: &'f Field, m: usize) -> Result<Self, LemmaError> {
        if m < 4 || m % 2 == 1 {
            return Err(LemmaError::UnsupportedDimension(m));
        }
        Ok(Self {
            f,
            eps: f.epsilon(),
            c: f.one_plus_eps_sq(),
            half: f.half(),
        })
    }

    fn q(&self) -> u64 {
        self.f.order() as u64
    }

    fn check_bound(&self, vars: usize, bound: u64) -> Result<(), LemmaError> {
        let count = (self.q() as u128).pow(vars as u32);
        if count > bound as u128 {
            Err(LemmaError::SizeBoundExceeded { count, bound })
        } else {
            Ok(())
        }
    }

    fn norm(&self, y: &[Fe]) -> Fe {
        y.iter()
            .fold(Fe::ZERO, |acc, &v| self.f.add(acc, self.f.square(v)))
    }

    /// `(y1 - 1)^2 + (y2 - eps)^2 + sum_{i>=3} y_i^2`.
    fn dist_to_p(&self, y: &[Fe]) -> Fe {
        let f = self.f;
        let head = f.add(
            f.square(f.sub(y[0], Fe::ONE)),
            f.square(f.sub(y[1], self.eps)),
        );
        f.add(head, self.norm(&y[2..]))
    }

    /// Left side of the class equation for a nonzero `g`.
    fn class_residual(&self, y: &[Fe], norm: Fe, g: Fe) -> Fe {
        let f = self.f;
        let lin = f.add(y[0], f.mul(self.eps, y[1]));
        let shifted = f.sub(lin, f.mul(self.half, f.sub(self.c, g)));
        f.sub(f.square(shifted), f.mul(g, norm))
    }

    fn on_zero_line(&self, y: &[Fe]) -> bool {
        let f = self.f;
        f.add(y[0], f.mul(self.eps, y[1])) == f.mul(self.half, self.c)
    }

    fn in_zero_class(&self, y: &[Fe]) -> bool {
        self.on_zero_line(y) && self.f.chi(self.dist_to_p(y)) >= 0
    }

    fn nonzero_classes(&self, y: &[Fe], norm: Fe) -> impl Iterator<Item = Fe> + '_ {
        let y = y.to_vec();
        self.f
            .squares()
            .iter()
            .copied()
            .filter(move |&g| self.class_residual(&y, norm, g).is_zero())
    }
}

/// Sums `visit` over every tuple of `F_q^vars`, in parallel over the first
/// coordinate.
fn sum_over_tuples<F>(f: &Field, vars: usize, visit: F) -> u64
where
    F: Fn(&[Fe]) -> u64 + Sync,
{
    let q = f.order();
    (0..q)
        .into_par_iter()
        .map(|first| {
            let mut y = vec![Fe::ZERO; vars];
            y[0] = Fe(first);
            let mut total = 0;
            loop {
                total += visit(&y);
                let mut k = vars;
                loop {
                    if k == 1 {
                        return total;
                    }
                    k -= 1;
                    let next = y[k].index() + 1;
                    if next < q {
                        y[k] = Fe(next);
                        break;
                    }
                    y[k] = Fe::ZERO;
                }
            }
        })
        .sum()
}

/// Common neighbours of `O` and `P`, counted straight from the two
/// conditions on `y`.
pub fn mu_direct(f: &Field, m: usize, bound: u64) -> Result<u64, LemmaError> {
    let s = Setup::new(f, m)?;
    s.check_bound(m, bound)?;
    Ok(sum_over_tuples(f, m, |y| {
        (f.chi(s.norm(y)) >= 0 && f.chi(s.dist_to_p(y)) >= 0) as u64
    }))
}

/// `P = (1, eps, 0, ..., 0)`.
pub fn special_point(f: &Field, m: usize) -> Vec<Fe> {
    let mut p = vec![Fe::ZERO; m];
    p[0] = Fe::ONE;
    p[1] = f.epsilon();
    p
}

/// Graph route to `mu_direct`: common neighbours of `O` and `P` plus the
/// number of points of `{O, P}` meeting both conditions (the graph excludes
/// them). Returns `(common_neighbours, boundary)`.
pub fn mu_via_graph(f: &Field, m: usize, bound: u64) -> Result<(u64, u64), LemmaError> {
    let s = Setup::new(f, m)?;
    s.check_bound(m, bound)?;
    let g = IntegralGraph::build_with_bound(f, m, bound)?;
    let p = special_point(f, m);
    let common = g.common_neighbors(g.rank_of(&p))?;
    let boundary = [vec![Fe::ZERO; m], p]
        .iter()
        .filter(|y| f.chi(s.norm(y)) >= 0 && f.chi(s.dist_to_p(y)) >= 0)
        .count() as u64;
    Ok((common, boundary))
}

/// `[0]`: tuples `(y2, .., ym)` for which the quadratic `C(y)` obtained by
/// putting `y1 = c/2 - eps y2` into `D(y)` is a square or zero.
pub fn bracket_zero(f: &Field, m: usize, bound: u64) -> Result<CountPair, LemmaError> {
    let s = Setup::new(f, m)?;
    s.check_bound(m - 1, bound)?;
    let quarter_c2 = f.mul(f.square(s.half), f.square(s.c));
    let eps_c = f.mul(s.eps, s.c);
    let oracle = sum_over_tuples(f, m - 1, |y| {
        let y2 = y[0];
        let value = f.add(
            f.sub(f.mul(s.c, f.square(y2)), f.mul(eps_c, y2)),
            f.add(quarter_c2, s.norm(&y[1..])),
        );
        (f.chi(value) >= 0) as u64
    });
    Ok(CountPair::new(
        "bracket0",
        formulas::bracket_zero(s.q(), m),
        oracle,
    ))
}

pub fn sigma_zero(f: &Field, m: usize, bound: u64) -> Result<CountPair, LemmaError> {
    let s = Setup::new(f, m)?;
    s.check_bound(m, bound)?;
    let oracle = sum_over_tuples(f, m, |y| {
        (s.norm(y).is_zero() && s.dist_to_p(y).is_zero()) as u64
    });
    Ok(CountPair::new(
        "sigma0",
        formulas::sigma_zero(s.q(), m),
        oracle,
    ))
}

/// `[gamma^2]` for a nonzero square `gamma_sq`.
pub fn bracket_gamma(
    f: &Field,
    m: usize,
    gamma_sq: Fe,
    bound: u64,
) -> Result<GammaBracket, LemmaError> {
    let s = Setup::new(f, m)?;
    if !f.is_square(gamma_sq) {
        return Err(LemmaError::NotASquare(gamma_sq.index()));
    }
    if gamma_sq == s.c {
        return Err(LemmaError::DegenerateGamma);
    }
    s.check_bound(m, bound)?;
    let oracle = sum_over_tuples(f, m, |y| {
        s.class_residual(y, s.norm(y), gamma_sq).is_zero() as u64
    });
    let character = f.chi(f.sub(gamma_sq, s.c));
    let branch = formulas::gamma_branch(m, s.q(), character);
    Ok(GammaBracket {
        gamma_sq: gamma_sq.index(),
        character,
        branch,
        count: CountPair::new(
            format!("bracket[{}]", gamma_sq.index()),
            formulas::bracket_gamma(s.q(), m, branch),
            oracle,
        ),
    })
}

/// Number of distinct `gamma^2`, `gamma != 0`, for which
/// `gamma^2 - s tau^2 = c` has a solution `tau`.
pub fn conic_count(f: &Field, s: Fe) -> Result<ConicCount, LemmaError> {
    if s.is_zero() {
        return Err(LemmaError::ZeroS);
    }
    let c = f.one_plus_eps_sq();
    // s tau^2 ranges over {0} and the s-multiples of the squares
    let targets: Vec<Fe> = std::iter::once(Fe::ZERO)
        .chain(f.squares().iter().map(|&t| f.mul(s, t)))
        .collect();
    let oracle = f
        .squares()
        .iter()
        .filter(|&&g| targets.iter().any(|&st| f.sub(g, st) == c))
        .count() as u64;
    let character = f.chi(s);
    let q = f.order() as u64;
    let branch = formulas::conic_branch(q, character);
    Ok(ConicCount {
        s: s.index(),
        character,
        branch,
        count: CountPair::new(
            format!("conic[{}]", s.index()),
            formulas::conic_count(q, branch),
            oracle,
        ),
    })
}

fn conic_pair(f: &Field) -> Vec<ConicCount> {
    [Fe::ONE, f.nonsquares()[0]]
        .into_iter()
        .map(|s| conic_count(f, s).expect("s is nonzero"))
        .collect()
}

pub fn sum_brackets(f: &Field, m: usize, bound: u64) -> Result<SumBrackets, LemmaError> {
    let brackets = f
        .squares()
        .iter()
        .map(|&g| bracket_gamma(f, m, g, bound))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(summarize_brackets(f, m, &brackets))
}

fn summarize_brackets(f: &Field, m: usize, brackets: &[GammaBracket]) -> SumBrackets {
    let q = f.order() as u64;
    let oracle: u64 = brackets.iter().map(|b| b.count.oracle).sum();
    let plus = brackets.iter().filter(|b| b.character == 1).count() as u64;
    let minus = brackets.len() as u64 - plus;
    let conic = conic_pair(f);
    let split_formula: i128 = conic
        .iter()
        .map(|cc| {
            cc.count.formula
                * formulas::bracket_gamma(q, m, formulas::gamma_branch(m, q, cc.character))
        })
        .sum();
    let total = CountPair::new("sum_brackets", formulas::sum_brackets(q, m), oracle);
    let split_holds = split_formula == total.formula
        && conic[0].count.oracle == plus
        && conic[1].count.oracle == minus;
    SumBrackets {
        total,
        split_formula,
        classes_by_character: (plus, minus),
        split_holds,
    }
}

/// `r_q`: tuples with `N(y) = 0` lying in exactly one nonzero class.
pub fn special_r(f: &Field, m: usize, bound: u64) -> Result<CountPair, LemmaError> {
    let s = Setup::new(f, m)?;
    s.check_bound(m, bound)?;
    let oracle = sum_over_tuples(f, m, |y| {
        let norm = s.norm(y);
        (norm.is_zero() && !s.in_zero_class(y) && s.nonzero_classes(y, norm).count() == 1) as u64
    });
    Ok(CountPair::new("r", formulas::special_r(s.q(), m), oracle))
}

/// `l_q`: tuples with square `N(y)` whose only class is `N(y)` itself, over
/// all square norms. In characteristic 3 some tuples have `N(y)` as their
/// only nonzero class but also lie in `[0]`; those are excluded.
pub fn special_ell(f: &Field, m: usize, bound: u64) -> Result<CountPair, LemmaError> {
    let s = Setup::new(f, m)?;
    s.check_bound(m, bound)?;
    let oracle = sum_over_tuples(f, m, |y| {
        let norm = s.norm(y);
        if !f.is_square(norm) {
            return 0;
        }
        let mut classes = s.nonzero_classes(y, norm);
        let only_norm = classes.next() == Some(norm) && classes.next().is_none();
        (only_norm && !s.in_zero_class(y)) as u64
    });
    Ok(CountPair::new(
        "ell",
        formulas::special_ell(s.q(), m),
        oracle,
    ))
}

pub fn multiplicity_histogram(
    f: &Field,
    m: usize,
    bound: u64,
) -> Result<MultiplicityAudit, LemmaError> {
    let s = Setup::new(f, m)?;
    s.check_bound(m, bound)?;
    let q = f.order();
    let partials: Vec<(BTreeMap<usize, u64>, u64, bool)> = (0..q)
        .into_par_iter()
        .map(|first| {
            let mut hist = BTreeMap::new();
            let mut strays = 0u64;
            let mut characterized = true;
            let mut y = vec![Fe::ZERO; m];
            y[0] = Fe(first);
            loop {
                let norm = s.norm(&y);
                let dist = s.dist_to_p(&y);
                let solution = f.chi(norm) >= 0 && f.chi(dist) >= 0;
                let zero_class = s.in_zero_class(&y);
                let size = zero_class as usize + s.nonzero_classes(&y, norm).count();
                if solution {
                    *hist.entry(size).or_insert(0) += 1;
                    let special = norm.is_zero() || dist.is_zero();
                    if (size == 1) != special {
                        characterized = false;
                    }
                } else if size > 0 {
                    strays += 1;
                }
                let mut k = m;
                loop {
                    if k == 1 {
                        return (hist, strays, characterized);
                    }
                    k -= 1;
                    let next = y[k].index() + 1;
                    if next < q {
                        y[k] = Fe(next);
                        break;
                    }
                    y[k] = Fe::ZERO;
                }
            }
        })
        .collect();

    let mut histogram = BTreeMap::new();
    let mut strays = 0;
    let mut singles_characterized = true;
    for (hist, st, ch) in partials {
        for (size, n) in hist {
            *histogram.entry(size).or_insert(0) += n;
        }
        strays += st;
        singles_characterized &= ch;
    }
    let solutions = histogram.values().sum();
    let incidences = histogram.iter().map(|(&k, &n)| k as u64 * n).sum();
    Ok(MultiplicityAudit {
        histogram,
        solutions,
        incidences,
        strays,
        singles_characterized,
    })
}

/// Runs every oracle and closed form, and assembles `mu` both ways.
pub fn assemble_mu(f: &Field, m: usize, bound: u64) -> Result<LemmaReport, LemmaError> {
    let s = Setup::new(f, m)?;
    let q = s.q();
    let bracket0 = bracket_zero(f, m, bound)?;
    let sigma0 = sigma_zero(f, m, bound)?;
    let brackets = f
        .squares()
        .iter()
        .map(|&g| bracket_gamma(f, m, g, bound))
        .collect::<Result<Vec<_>, _>>()?;
    let sum = summarize_brackets(f, m, &brackets);
    let r = special_r(f, m, bound)?;
    let ell = special_ell(f, m, bound)?;
    let multiplicity = multiplicity_histogram(f, m, bound)?;
    let mu_direct = mu_direct(f, m, bound)?;
    let (mu_graph, boundary) = mu_via_graph(f, m, bound)?;

    let halve = |total: i128| {
        if total % 2 != 0 {
            Err(LemmaError::OddAssembly(total))
        } else {
            Ok(total / 2)
        }
    };
    let mu_assembled =
        halve(bracket0.formula + sum.total.formula + r.formula + ell.formula + sigma0.formula)?;
    let mu_assembled_oracle = halve(
        (bracket0.oracle + sum.total.oracle + r.oracle + ell.oracle + sigma0.oracle) as i128,
    )?;

    Ok(LemmaReport {
        q: q as u32,
        m,
        epsilon: s.eps.index(),
        bracket0,
        sigma0,
        brackets,
        sum_brackets: sum,
        conic: conic_pair(f),
        r,
        ell,
        multiplicity,
        mu_assembled,
        mu_assembled_oracle,
        mu_direct,
        mu_formula: formulas::mu(q, m),
        mu_graph: mu_graph + boundary,
        boundary,
        conventions: CONVENTIONS.iter().map(|s| s.to_string()).collect(),
    })
}

/// Recomputed branch tables: each entry decided by the oracle at the
/// smallest field (and dimension `4` or `6`) where that entry occurs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    pub gamma: Vec<GammaBranchEntry>,
    pub conic: Vec<ConicBranchEntry>,
}

/// Candidate field orders used by [`calibrate`], smallest first.
const CALIBRATION_ORDERS: [u64; 6] = [3, 5, 7, 9, 11, 13];

pub fn calibrate(bound: u64) -> Result<Calibration, LemmaError> {
    let mut gamma = Vec::new();
    for m_mod_4 in [0u8, 2] {
        let m = if m_mod_4 == 0 { 4 } else { 6 };
        for q_mod_4 in [1u8, 3] {
            for character in [1i8, -1] {
                let branch = CALIBRATION_ORDERS
                    .iter()
                    .filter(|&&q| q % 4 == q_mod_4 as u64)
                    .find_map(|&q| calibrate_gamma_at(q, m, character, bound).transpose())
                    .transpose()?;
                if let Some(branch) = branch {
                    gamma.push(GammaBranchEntry {
                        m_mod_4,
                        q_mod_4,
                        character,
                        branch,
                    });
                }
            }
        }
    }
    let mut conic = Vec::new();
    for q_mod_4 in [1u8, 3] {
        let q = if q_mod_4 == 1 { 5 } else { 3 };
        let f = Field::of_order(q).expect("small prime");
        for character in [1i8, -1] {
            let s = if character == 1 {
                Fe::ONE
            } else {
                f.nonsquares()[0]
            };
            let oracle = conic_count(&f, s)?.count.oracle as i128;
            let branch = [
                ConicBranch::QuarterQMinus1,
                ConicBranch::QuarterQMinus3,
                ConicBranch::QuarterQPlus1,
            ]
            .into_iter()
            .find(|&b| formulas::conic_count_checked(q, b) == Some(oracle))
            .expect("oracle matches one of the three branches");
            conic.push(ConicBranchEntry {
                q_mod_4,
                character,
                branch,
            });
        }
    }
    Ok(Calibration { gamma, conic })
}

fn calibrate_gamma_at(
    q: u64,
    m: usize,
    character: i8,
    bound: u64,
) -> Result<Option<GammaBranch>, LemmaError> {
    let f = Field::of_order(q).expect("small prime power");
    let c = f.one_plus_eps_sq();
    let Some(&g) = f
        .squares()
        .iter()
        .find(|&&g| f.chi(f.sub(g, c)) == character)
    else {
        return Ok(None);
    };
    let oracle = bracket_gamma(&f, m, g, bound)?.count.oracle as i128;
    Ok([GammaBranch::Minus, GammaBranch::Plus]
        .into_iter()
        .find(|&b| formulas::bracket_gamma(q, m, b) == oracle))
}

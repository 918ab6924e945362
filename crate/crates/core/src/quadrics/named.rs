//! The quadrics that appear when counting common neighbours of the origin
//! and `P = (1, eps, 0, ..., 0)` in the integral-distance graph.
//!
//! Throughout, `c = 1 + eps^2` and `g` is a fixed value of `gamma^2`. Each
//! form is built from its polynomial, with the homogenizing coordinate `t`
//! last, so [`QuadraticForm::at_infinity`] gives the section `t = 0`.

use serde::{Deserialize, Serialize};

use super::QuadraticForm;
use crate::gf::{Fe, Field};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedForm {
    /// `beta^2 - c y2^2 + eps c y2 t - c^2/4 t^2 - sum_{i>=3} yi^2` in
    /// `(beta, y2, .., ym, t)`.
    BetaQuadric,
    /// Its section at infinity.
    BetaQuadricAtInfinity,
    /// `-c y2^2 + eps c y2 t - c^2/4 t^2 + sum_{i>=3} yi^2` in
    /// `(y2, .., ym, t)`: the `beta = 0` slice.
    BetaZeroSlice,
    BetaZeroSliceAtInfinity,
    /// `(y1 + eps y2 - (c - g)/2 t)^2 - g sum yi^2` in `(y1, .., ym, t)`.
    GammaQuadric,
    GammaQuadricAtInfinity,
    /// `c y2^2 + sum_{i>=3} yi^2 - eps (c - g) y2 t + (c - g)^2/4 t^2`:
    /// zero-norm solutions for a given `g`.
    ZeroNormSlice,
    /// `c y2^2 + sum_{i>=3} yi^2 - eps (c + g) y2 t + ((c + g)^2/4 - g) t^2`:
    /// solutions at distance zero from `P`.
    ZeroDistanceSlice,
}

impl NamedForm {
    pub const ALL: [NamedForm; 8] = [
        NamedForm::BetaQuadric,
        NamedForm::BetaQuadricAtInfinity,
        NamedForm::BetaZeroSlice,
        NamedForm::BetaZeroSliceAtInfinity,
        NamedForm::GammaQuadric,
        NamedForm::GammaQuadricAtInfinity,
        NamedForm::ZeroNormSlice,
        NamedForm::ZeroDistanceSlice,
    ];

    /// Whether the form depends on `g = gamma^2`.
    pub fn uses_gamma(self) -> bool {
        matches!(
            self,
            NamedForm::GammaQuadric
                | NamedForm::GammaQuadricAtInfinity
                | NamedForm::ZeroNormSlice
                | NamedForm::ZeroDistanceSlice
        )
    }

    pub fn label(self) -> &'static str {
        match self {
            NamedForm::BetaQuadric => "Q",
            NamedForm::BetaQuadricAtInfinity => "S",
            NamedForm::BetaZeroSlice => "Q'",
            NamedForm::BetaZeroSliceAtInfinity => "S'",
            NamedForm::GammaQuadric => "M_gamma",
            NamedForm::GammaQuadricAtInfinity => "S_gamma",
            NamedForm::ZeroNormSlice => "B_gamma",
            NamedForm::ZeroDistanceSlice => "C_gamma",
        }
    }

    /// Builds the form for dimension `m >= 2`; `gamma_sq` is ignored by forms
    /// that do not depend on it.
    pub fn build(self, field: &Field, m: usize, gamma_sq: Fe) -> QuadraticForm<'_> {
        assert!(m >= 2, "named forms need m >= 2");
        match self {
            NamedForm::BetaQuadric => beta_quadric(field, m),
            NamedForm::BetaQuadricAtInfinity => beta_quadric(field, m).at_infinity(),
            NamedForm::BetaZeroSlice => beta_zero_slice(field, m),
            NamedForm::BetaZeroSliceAtInfinity => beta_zero_slice(field, m).at_infinity(),
            NamedForm::GammaQuadric => gamma_quadric(field, m, gamma_sq),
            NamedForm::GammaQuadricAtInfinity => gamma_quadric(field, m, gamma_sq).at_infinity(),
            NamedForm::ZeroNormSlice => zero_norm_slice(field, m, gamma_sq),
            NamedForm::ZeroDistanceSlice => zero_distance_slice(field, m, gamma_sq),
        }
    }
}

fn quarter(f: &Field) -> Fe {
    f.square(f.half())
}

fn beta_quadric(f: &Field, m: usize) -> QuadraticForm<'_> {
    let c = f.one_plus_eps_sq();
    let eps = f.epsilon();
    let t = m;
    let mut form = QuadraticForm::zero(f, m + 1);
    form.add_square(0, Fe::ONE);
    form.add_square(1, f.neg(c));
    for i in 2..m {
        form.add_square(i, f.neg(Fe::ONE));
    }
    form.add_cross(1, t, f.mul(eps, c));
    form.add_square(t, f.neg(f.mul(quarter(f), f.square(c))));
    form
}

fn beta_zero_slice(f: &Field, m: usize) -> QuadraticForm<'_> {
    let c = f.one_plus_eps_sq();
    let eps = f.epsilon();
    let t = m - 1;
    let mut form = QuadraticForm::zero(f, m);
    form.add_square(0, f.neg(c));
    for i in 1..m - 1 {
        form.add_square(i, Fe::ONE);
    }
    form.add_cross(0, t, f.mul(eps, c));
    form.add_square(t, f.neg(f.mul(quarter(f), f.square(c))));
    form
}

fn gamma_quadric(f: &Field, m: usize, g: Fe) -> QuadraticForm<'_> {
    let c = f.one_plus_eps_sq();
    let eps = f.epsilon();
    let t = m;
    let shift = f.sub(c, g);
    let mut form = QuadraticForm::zero(f, m + 1);
    // (y1 + eps y2 - shift/2 t)^2
    form.add_square(0, Fe::ONE);
    form.add_square(1, f.square(eps));
    form.add_square(t, f.mul(quarter(f), f.square(shift)));
    form.add_cross(0, 1, f.add(eps, eps));
    form.add_cross(0, t, f.neg(shift));
    form.add_cross(1, t, f.neg(f.mul(eps, shift)));
    // - g * sum yi^2
    for i in 0..m {
        form.add_square(i, f.neg(g));
    }
    form
}

fn zero_norm_slice(f: &Field, m: usize, g: Fe) -> QuadraticForm<'_> {
    let c = f.one_plus_eps_sq();
    slice_with_shift(f, m, f.sub(c, g), Fe::ZERO)
}

fn zero_distance_slice(f: &Field, m: usize, g: Fe) -> QuadraticForm<'_> {
    let c = f.one_plus_eps_sq();
    slice_with_shift(f, m, f.add(c, g), g)
}

/// `c y2^2 + sum_{i>=3} yi^2 - eps s y2 t + (s^2/4 - g) t^2` in
/// `(y2, .., ym, t)`.
fn slice_with_shift(f: &Field, m: usize, s: Fe, g: Fe) -> QuadraticForm<'_> {
    let c = f.one_plus_eps_sq();
    let eps = f.epsilon();
    let t = m - 1;
    let mut form = QuadraticForm::zero(f, m);
    form.add_square(0, c);
    for i in 1..m - 1 {
        form.add_square(i, Fe::ONE);
    }
    form.add_cross(0, t, f.neg(f.mul(eps, s)));
    form.add_square(t, f.sub(f.mul(quarter(f), f.square(s)), g));
    form
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrics::{
        count_affine_solutions, count_projective_points, QuadricKind, DEFAULT_POINT_BOUND,
    };

    fn elems(f: &Field, xs: &[i64]) -> Vec<Fe> {
        xs.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn beta_quadric_hand_value() {
        // F_3, eps = 1: beta^2 - (1/4)(1+1)^2 t^2 at beta = t = 1 is 0.
        let f3 = Field::of_order(3).unwrap();
        let q = NamedForm::BetaQuadric.build(&f3, 4, Fe::ZERO);
        assert_eq!(q.evaluate(&elems(&f3, &[1, 0, 0, 0, 1])).unwrap(), Fe::ZERO);
        assert_eq!(q.evaluate(&elems(&f3, &[1, 0, 0, 0, 0])).unwrap(), Fe::ONE);
    }

    #[test]
    fn gamma_quadric_matches_its_polynomial() {
        let f7 = Field::of_order(7).unwrap();
        let (eps, c) = (f7.epsilon(), f7.one_plus_eps_sq());
        let g = f7.from_int(2);
        let form = NamedForm::GammaQuadric.build(&f7, 4, g);
        let y = elems(&f7, &[3, 5, 1, 6, 1]);
        let lin = f7.sub(
            f7.add(y[0], f7.mul(eps, y[1])),
            f7.mul(f7.half(), f7.sub(c, g)),
        );
        let norm = y[..4]
            .iter()
            .fold(Fe::ZERO, |a, &v| f7.add(a, f7.square(v)));
        let expected = f7.sub(f7.square(lin), f7.mul(g, norm));
        assert_eq!(form.evaluate(&y).unwrap(), expected);
    }

    #[test]
    fn named_dets() {
        let f5 = Field::of_order(5).unwrap();
        let (c, quarter) = (f5.one_plus_eps_sq(), quarter(&f5));
        let q = NamedForm::BetaQuadric.build(&f5, 4, Fe::ZERO);
        assert_eq!(q.determinant(), f5.mul(quarter, f5.square(c)));
        let s = NamedForm::BetaQuadricAtInfinity.build(&f5, 4, Fe::ZERO);
        assert_eq!(s.determinant(), f5.neg(c));

        for &g in f5.squares() {
            let shift = f5.sub(c, g);
            let expect = f5.mul(quarter, f5.square(shift));
            let b = NamedForm::ZeroNormSlice.build(&f5, 4, g);
            assert_eq!(b.determinant(), expect);
            let cg = NamedForm::ZeroDistanceSlice.build(&f5, 4, g);
            assert_eq!(cg.determinant(), expect);
            let m = NamedForm::GammaQuadric.build(&f5, 4, g);
            let neg_g_pow = f5.pow(f5.neg(g), 4);
            assert_eq!(m.determinant(), f5.mul(expect, neg_g_pow));
        }
    }

    #[test]
    fn small_case_counts() {
        let f3 = Field::of_order(3).unwrap();
        let s = NamedForm::BetaQuadricAtInfinity.build(&f3, 4, Fe::ZERO);
        let census = count_projective_points(&s, DEFAULT_POINT_BOUND).unwrap();
        assert_eq!(census.class.kind, QuadricKind::Hyperbolic);
        assert_eq!(census.exhaustive, 16);
        assert!(census.matches);

        let sp = NamedForm::BetaZeroSliceAtInfinity.build(&f3, 4, Fe::ZERO);
        let census = count_projective_points(&sp, DEFAULT_POINT_BOUND).unwrap();
        assert_eq!(census.class.kind, QuadricKind::Parabolic);
        assert_eq!(census.exhaustive, 4);

        let b = NamedForm::ZeroNormSlice.build(&f3, 4, Fe::ONE);
        assert_eq!(count_affine_solutions(&b, DEFAULT_POINT_BOUND).unwrap(), 12);
    }
}

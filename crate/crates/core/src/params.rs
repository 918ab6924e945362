//! Parameter formulas `(v, k, lambda, mu)` for the integral-distance graph,
//! SRG feasibility checks, and the comparison of printed formulas against
//! certified values.
//!
//! `transcribed_*` evaluate the formulas exactly as they are commonly
//! printed. `validated_*` are the forms confirmed by exhaustive counting.
//! Where the two disagree, [`errata_report`] records all three values.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{prime_power, FieldError};
use crate::graph::SrgCertificate;

#[derive(Debug, Error)]
pub enum ParamError {
    #[error("m = {0} must be even and at least 4")]
    UnsupportedDimension(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("lambda is not integral: (v - k - 1) mu = {numerator} is not divisible by k = {k}")]
    NonIntegralLambda { numerator: i128, k: i128 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamSource {
    Transcribed,
    Validated,
    Certified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParams {
    pub v: i128,
    pub k: i128,
    pub lambda: i128,
    pub mu: i128,
    pub source: ParamSource,
}

impl SrgParams {
    /// `(v - k - 1) mu = k (k - lambda - 1)`.
    pub fn identity_holds(&self) -> bool {
        (self.v - self.k - 1) * self.mu == self.k * (self.k - self.lambda - 1)
    }

    pub fn from_certificate(cert: &SrgCertificate) -> Self {
        Self {
            v: cert.v as i128,
            k: cert.k as i128,
            lambda: cert.lambda as i128,
            mu: cert.mu as i128,
            source: ParamSource::Certified,
        }
    }

    pub fn tuple(&self) -> (i128, i128, i128, i128) {
        (self.v, self.k, self.lambda, self.mu)
    }
}

fn pow(q: u64, e: usize) -> i128 {
    (q as i128).pow(e as u32)
}

fn neg_pow(q: u64, e: usize) -> i128 {
    (-(q as i128)).pow(e as u32)
}

fn sign_pow(e: u64) -> i128 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check(q: u64, m: usize) -> Result<(), ParamError> {
    prime_power(q)?;
    if m < 4 || m % 2 == 1 {
        return Err(ParamError::UnsupportedDimension(m));
    }
    Ok(())
}

/// `+1` when `(-1)^(m/2)` is a square in `F_q`, else `-1`: the type of the
/// quadric `sum y_i^2`.
pub fn eta(q: u64, m: usize) -> i128 {
    if q % 4 == 1 || (m / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn transcribed_k(q: u64, m: usize) -> i128 {
    let h = m / 2;
    let tail = if q % 4 == 1 {
        pow(q, h) + pow(q, h - 1)
    } else {
        neg_pow(q, h) + neg_pow(q, h - 1)
    };
    (pow(q, m) + pow(q, m - 1) + tail) / 2 - 1
}

pub fn transcribed_lambda(q: u64, m: usize) -> i128 {
    let h = m / 2;
    let sign = sign_pow(m as u64 * (q - 1) / 4);
    pow(q, m - 2) * (q as i128 + 1).pow(2) / 4 + 2 * sign * pow(q, h - 1) * (q as i128 - 1) - 2
}

pub fn transcribed_mu(q: u64, m: usize) -> i128 {
    let h = m / 2;
    let last = if q % 4 == 1 {
        2
    } else {
        2 * sign_pow(h as u64)
    };
    pow(q, h - 1) * (q as i128 + 1) * (pow(q, h) + pow(q, h - 1) + last) / 4
}

/// Common size of the square-norm and nonsquare-norm orbits, as printed.
pub fn transcribed_orbit_size(q: u64, m: usize) -> i128 {
    let h = m / 2;
    let tail = if q % 4 == 1 {
        -pow(q, h) + pow(q, h - 1)
    } else {
        -neg_pow(q, h) + neg_pow(q, h - 1)
    };
    (pow(q, m) - pow(q, m - 1) + tail) / 2
}

pub fn validated_k(q: u64, m: usize) -> i128 {
    let h = m / 2;
    let e = eta(q, m);
    (pow(q, m) + pow(q, m - 1) + e * pow(q, h) - e * pow(q, h - 1)) / 2 - 1
}

pub fn validated_orbit_size(q: u64, m: usize) -> i128 {
    let h = m / 2;
    let e = eta(q, m);
    (pow(q, m) - pow(q, m - 1) - e * pow(q, h) + e * pow(q, h - 1)) / 2
}

/// Closed-form hypothesis for `lambda`; checked against certificates, never
/// used to derive other values.
pub fn lambda_closed_form(q: u64, m: usize) -> i128 {
    let h = m / 2;
    let sign = sign_pow(m as u64 * (q - 1) / 4);
    pow(q, m - 2) * (q as i128 + 1).pow(2) / 4 + sign * pow(q, h - 1) * (q as i128 - 1) / 2 - 2
}

pub fn transcribed_params(q: u64, m: usize) -> Result<SrgParams, ParamError> {
    check(q, m)?;
    Ok(SrgParams {
        v: pow(q, m),
        k: transcribed_k(q, m),
        lambda: transcribed_lambda(q, m),
        mu: transcribed_mu(q, m),
        source: ParamSource::Transcribed,
    })
}

/// `k` from the orbit structure, `mu` as printed, and `lambda` solved from
/// `(v - k - 1) mu = k (k - lambda - 1)`.
pub fn validated_params(q: u64, m: usize) -> Result<SrgParams, ParamError> {
    check(q, m)?;
    let v = pow(q, m);
    let k = validated_k(q, m);
    let mu = transcribed_mu(q, m);
    let numerator = (v - k - 1) * mu;
    if numerator % k != 0 {
        return Err(ParamError::NonIntegralLambda { numerator, k });
    }
    Ok(SrgParams {
        v,
        k,
        lambda: k - 1 - numerator / k,
        mu,
        source: ParamSource::Validated,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub identity_holds: bool,
    pub nonnegative: bool,
    pub lambda_bound: bool,
    pub mu_bound: bool,
    /// `(lambda - mu)^2 + 4 (k - mu)`.
    pub discriminant: i128,
    /// Integer eigenvalues `(r, s)`, `r > s`, when the discriminant is a
    /// perfect square of the right parity.
    pub eigenvalues: Option<(i128, i128)>,
    /// Multiplicities `(f, g)` of `r` and `s`, when integral.
    pub multiplicities: Option<(i128, i128)>,
    pub conference: bool,
    pub feasible: bool,
}

fn isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

pub fn feasibility_check(p: &SrgParams) -> FeasibilityReport {
    let (v, k, lambda, mu) = p.tuple();
    let identity_holds = p.identity_holds();
    let nonnegative = v >= 0 && k >= 0 && lambda >= 0 && mu >= 0;
    let lambda_bound = lambda < k;
    let mu_bound = mu <= k;
    let discriminant = (lambda - mu).pow(2) + 4 * (k - mu);
    let trace_term = 2 * k + (v - 1) * (lambda - mu);

    let mut eigenvalues = None;
    let mut multiplicities = None;
    let mut conference = false;
    match isqrt(discriminant) {
        Some(root) if root > 0 => {
            if (lambda - mu + root) % 2 == 0 {
                eigenvalues = Some(((lambda - mu + root) / 2, (lambda - mu - root) / 2));
            }
            if trace_term % root == 0 {
                let t = trace_term / root;
                if (v - 1 - t) % 2 == 0 {
                    multiplicities = Some(((v - 1 - t) / 2, (v - 1 + t) / 2));
                }
            }
        }
        Some(_) => {}
        None => {
            conference = true;
            if trace_term == 0 && (v - 1) % 2 == 0 {
                multiplicities = Some(((v - 1) / 2, (v - 1) / 2));
            }
        }
    }
    let multiplicities_ok = multiplicities.is_some_and(|(f, g)| f >= 0 && g >= 0);
    FeasibilityReport {
        identity_holds,
        nonnegative,
        lambda_bound,
        mu_bound,
        discriminant,
        eigenvalues,
        multiplicities,
        conference,
        feasible: identity_holds && nonnegative && lambda_bound && mu_bound && multiplicities_ok,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    TranscriptionSuspect,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrataEntry {
    pub quantity: String,
    pub transcribed: i128,
    pub validated: i128,
    pub oracle: i128,
    pub verdict: Verdict,
}

impl ErrataEntry {
    pub fn new(quantity: &str, transcribed: i128, validated: i128, oracle: i128) -> Self {
        let verdict = if transcribed == validated && validated == oracle {
            Verdict::Consistent
        } else {
            Verdict::TranscriptionSuspect
        };
        Self {
            quantity: quantity.to_string(),
            transcribed,
            validated,
            oracle,
            verdict,
        }
    }
}

/// One entry each for `v`, `k`, `lambda`, `mu` and the orbit size, with the
/// certificate as the oracle.
pub fn errata_report(cert: &SrgCertificate) -> Result<Vec<ErrataEntry>, ParamError> {
    let (q, m) = (cert.q as u64, cert.m);
    let t = transcribed_params(q, m)?;
    let v = validated_params(q, m)?;
    let c = SrgParams::from_certificate(cert);
    let orbit = if cert.census.nplus == cert.census.nminus {
        cert.census.nplus as i128
    } else {
        -1
    };
    Ok(vec![
        ErrataEntry::new("v", t.v, v.v, c.v),
        ErrataEntry::new("k", t.k, v.k, c.k),
        ErrataEntry::new("lambda", t.lambda, v.lambda, c.lambda),
        ErrataEntry::new("mu", t.mu, v.mu, c.mu),
        ErrataEntry::new(
            "orbit_size",
            transcribed_orbit_size(q, m),
            validated_orbit_size(q, m),
            orbit,
        ),
    ])
}

//! Arithmetic in finite fields of odd order `q = p^e`.
//!
//! Elements are stored as their canonical index in `[0, q)`. For `e > 1` the
//! index is the base-`p` digit expansion of the polynomial-basis coordinates,
//! digit `i` being the coefficient of `t^i` modulo the field's defining
//! polynomial. Multiplication goes through discrete log / antilog tables
//! built once at construction; addition is digitwise modulo `p`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order accepted by [`Field::new`].
pub const DEFAULT_FIELD_BOUND: u64 = 1 << 20;

/// Orders up to this value get a precomputed addition table.
const ADD_TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("q must be odd")]
    EvenCharacteristic,
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("no monic irreducible polynomial of degree {e} over F_{p}")]
    NoIrreducibleFound { p: u32, e: u32 },
    #[error("field order {p}^{e} exceeds the size bound {bound}")]
    SizeBoundExceeded { p: u64, e: u32, bound: u64 },
    #[error("element index {index} out of range for F_{q}")]
    IndexOutOfRange { index: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

/// A field element, identified by its canonical index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    /// Coefficients of the defining polynomial, constant term first, leading
    /// 1 included. `None` for prime fields.
    pub modulus: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

/// An immutable finite field context: arithmetic tables, the quadratic
/// character, and the distinguished element `epsilon` with `1 + epsilon^2`
/// a nonsquare.
#[derive(Debug, Clone)]
pub struct Field {
    spec: FieldSpec,
    /// `exp[i] = g^i` for `i` in `[0, 2(q-1))`, doubled so products of two
    /// logs need no reduction.
    exp: Vec<u32>,
    /// `log[x]` for `x != 0`; `log[0]` is unused.
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    neg: Vec<u32>,
    chi: Vec<i8>,
    epsilon: Fe,
    squares: Vec<Fe>,
    nonsquares: Vec<Fe>,
}

/// Fields are equal when their defining data agree; every table is a
/// function of the spec.
impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

impl Field {
    /// Builds `F_{p^e}` with the default size bound.
    pub fn new(p: u64, e: u32) -> Result<Self, FieldError> {
        Self::with_bound(p, e, DEFAULT_FIELD_BOUND)
    }

    /// Builds the field of order `q`, which must be an odd prime power.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        Self::of_order_with_bound(q, DEFAULT_FIELD_BOUND)
    }

    pub fn of_order_with_bound(q: u64, bound: u64) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q)?;
        Self::with_bound(p, e, bound)
    }

    pub fn with_bound(p: u64, e: u32, bound: u64) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= bound && q <= u32::MAX as u64)
            .ok_or(FieldError::SizeBoundExceeded { p, e, bound })?;
        let (p, q) = (p as u32, q as u32);

        let modulus = if e == 1 {
            None
        } else {
            Some(smallest_irreducible(p, e).ok_or(FieldError::NoIrreducibleFound { p, e })?)
        };
        let poly = PolyArith {
            p,
            e,
            modulus: modulus.clone(),
        };

        let generator = (2..q)
            .chain(std::iter::once(1))
            .find(|&g| poly.is_primitive(g, q))
            .ok_or(FieldError::NoIrreducibleFound { p, e })?;

        let order = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i] = x;
            exp[i + order] = x;
            log[x as usize] = i as u32;
            x = poly.mul(x, generator);
        }

        let neg = (0..q).map(|a| poly.neg(a)).collect();
        let add_table = (q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = poly.add(a, b);
                }
            }
            t
        });

        // Squares are the even powers of the generator.
        let mut chi = vec![-1i8; q as usize];
        chi[0] = 0;
        for i in (0..order).step_by(2) {
            chi[exp[i] as usize] = 1;
        }
        let squares = (1..q).filter(|&x| chi[x as usize] == 1).map(Fe).collect();
        let nonsquares = (1..q).filter(|&x| chi[x as usize] == -1).map(Fe).collect();

        let mut field = Field {
            spec: FieldSpec { p, e, q, modulus },
            exp,
            log,
            add_table,
            neg,
            chi,
            epsilon: Fe::ZERO,
            squares,
            nonsquares,
        };
        field.epsilon = field.choose_epsilon();
        Ok(field)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.spec.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.e
    }

    /// `q mod 4`, always 1 or 3.
    pub fn q_mod_4(&self) -> u32 {
        self.spec.q % 4
    }

    pub fn element(&self, index: u64) -> Result<Fe, FieldError> {
        if index < self.spec.q as u64 {
            Ok(Fe(index as u32))
        } else {
            Err(FieldError::IndexOutOfRange {
                index,
                q: self.spec.q,
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.spec.q).map(Fe)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.spec.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let q = self.spec.q;
        if let Some(t) = &self.add_table {
            return Fe(t[(a.0 * q + b.0) as usize]);
        }
        if self.spec.e == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= q { s - q } else { s });
        }
        Fe(digitwise(a.0, b.0, self.spec.p, |x, y, p| (x + y) % p))
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        Fe(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    #[inline]
    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let order = self.spec.q - 1;
        let l = self.log[a.0 as usize];
        Ok(Fe(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, n: u64) -> Fe {
        if n == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let order = (self.spec.q - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (n % order)) % order;
        Fe(self.exp[l as usize])
    }

    /// The inverse of 2; exists because the characteristic is odd.
    pub fn half(&self) -> Fe {
        self.inv(self.from_int(2))
            .expect("2 is invertible in odd characteristic")
    }

    /// Table-free multiplication by polynomial reduction. Slow; intended for
    /// cross-checking the log tables.
    pub fn mul_reference(&self, a: Fe, b: Fe) -> Fe {
        let poly = PolyArith {
            p: self.spec.p,
            e: self.spec.e,
            modulus: self.spec.modulus.clone(),
        };
        Fe(poly.mul(a.0, b.0))
    }

    pub fn arith(&self, a: Fe, b: Fe, op: ArithOp) -> Result<Fe, FieldError> {
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Sub => Ok(self.sub(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Div => self.div(a, b),
            ArithOp::Neg => Ok(self.neg(a)),
            ArithOp::Inv => self.inv(a),
        }
    }

    /// Quadratic character: 0 at 0, +1 on nonzero squares, -1 otherwise.
    #[inline]
    pub fn chi(&self, x: Fe) -> i8 {
        self.chi[x.0 as usize]
    }

    pub fn chi_table(&self) -> &[i8] {
        &self.chi
    }

    /// True for nonzero squares only.
    pub fn is_square(&self, x: Fe) -> bool {
        self.chi(x) == 1
    }

    pub fn squares(&self) -> &[Fe] {
        &self.squares
    }

    pub fn nonsquares(&self) -> &[Fe] {
        &self.nonsquares
    }

    pub fn epsilon(&self) -> Fe {
        self.epsilon
    }

    /// `1 + epsilon^2`, a nonsquare.
    pub fn one_plus_eps_sq(&self) -> Fe {
        self.add(Fe::ONE, self.square(self.epsilon))
    }

    /// Least-index `x` with `chi(1 + x^2) = -1`.
    pub fn choose_epsilon(&self) -> Fe {
        // The q + 1 values 1 + x^2 can't all be squares or zero, so this
        // always finds something.
        self.elements()
            .find(|&x| self.chi(self.add(Fe::ONE, self.square(x))) == -1)
            .expect("1 + x^2 takes a nonsquare value in every odd-order field")
    }
}

fn digitwise(mut a: u32, mut b: u32, p: u32, f: impl Fn(u32, u32, u32) -> u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        out += f(a % p, b % p, p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `q` as `p^e`. Rejects even `q` first so that `4` reports the
/// characteristic rather than a parse failure.
pub fn prime_power(q: u64) -> Result<(u64, u32), FieldError> {
    if q % 2 == 0 {
        return Err(FieldError::EvenCharacteristic);
    }
    if q < 3 {
        return Err(FieldError::NotPrimePower(q));
    }
    let p = (3..)
        .step_by(2)
        .find(|d| q % d == 0 || d * d > q)
        .map(|d| if q % d == 0 { d } else { q })
        .unwrap();
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(FieldError::NotPrimePower(q));
    }
    Ok((p, e))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Coefficient-vector arithmetic over `F_p[t] / (modulus)`.
struct PolyArith {
    p: u32,
    e: u32,
    modulus: Option<Vec<u32>>,
}

impl PolyArith {
    fn digits(&self, mut x: u32) -> Vec<u32> {
        let mut d = vec![0; self.e as usize];
        for slot in d.iter_mut() {
            *slot = x % self.p;
            x /= self.p;
        }
        d
    }

    fn encode(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        digitwise(a, b, self.p, |x, y, p| (x + y) % p)
    }

    fn neg(&self, a: u32) -> u32 {
        digitwise(a, 0, self.p, |x, _, p| (p - x) % p)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let Some(modulus) = &self.modulus else {
            return ((a as u64 * b as u64) % p) as u32;
        };
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * self.e as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        reduce(&mut prod, modulus, p);
        let low: Vec<u32> = prod[..self.e as usize].iter().map(|&c| c as u32).collect();
        self.encode(&low)
    }

    fn pow(&self, mut base: u32, mut n: u64) -> u32 {
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    fn is_primitive(&self, g: u32, q: u32) -> bool {
        if g == 0 {
            return false;
        }
        let order = (q - 1) as u64;
        if order == 1 {
            return true;
        }
        prime_factors(order)
            .into_iter()
            .all(|f| self.pow(g, order / f) != 1)
    }
}

/// Reduces `poly` in place modulo a monic `modulus`; coefficients mod `p`.
fn reduce(poly: &mut [u64], modulus: &[u32], p: u64) {
    let deg = modulus.len() - 1;
    for top in (deg..poly.len()).rev() {
        let c = poly[top] % p;
        if c == 0 {
            continue;
        }
        for (k, &m) in modulus.iter().enumerate() {
            let idx = top - deg + k;
            poly[idx] = (poly[idx] + (p - c) * m as u64) % p;
        }
    }
}

/// True when the monic `candidate` has no monic factor of degree
/// `1..=deg/2`.
fn is_irreducible(candidate: &[u32], p: u32) -> bool {
    let deg = candidate.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut x = low;
            for _ in 0..d {
                divisor.push((x % p as u64) as u32);
                x /= p as u64;
            }
            divisor.push(1);
            let mut rem: Vec<u64> = candidate.iter().map(|&c| c as u64).collect();
            reduce(&mut rem, &divisor, p as u64);
            if rem[..d].iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Monic irreducible of degree `e` whose lower coefficients, read as a
/// base-`p` number with the constant term least significant, are smallest.
fn smallest_irreducible(p: u32, e: u32) -> Option<Vec<u32>> {
    let count = (p as u64).checked_pow(e)?;
    (0..count).find_map(|low| {
        let mut poly = Vec::with_capacity(e as usize + 1);
        let mut x = low;
        for _ in 0..e {
            poly.push((x % p as u64) as u32);
            x /= p as u64;
        }
        poly.push(1);
        is_irreducible(&poly, p).then_some(poly)
    })
}

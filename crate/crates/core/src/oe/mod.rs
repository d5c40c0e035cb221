//! Arithmetic in the ring of integers `O_E = Z_p[π]`, `π² = εp`, of a ramified
//! quadratic extension of `Q_p`.
//!
//! Elements are stored on the basis `{1, π}` with both coordinates reduced
//! modulo `p^N`, so a full-precision element is known modulo `π^{2N}`. Every
//! element additionally carries its absolute π-adic precision: the value is
//! known modulo `π^prec`, `prec ≤ 2N`. Digits above the precision are kept at
//! zero, which makes the derived equality and ordering canonical.

mod matrix;
pub(crate) mod normal_form;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use matrix::OEMatrix;
pub use normal_form::{hermite_canonical, smith_normal_form, SmithForm};

/// Default number of p-adic digits.
pub const DEFAULT_PRECISION: u32 = 8;

/// `p`, the unit `ε` with `π² = εp`, and the p-adic precision `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldParams {
    p: u64,
    epsilon: u64,
    precision: u32,
    modulus: u64,
}

impl FieldParams {
    pub fn new(p: u64, epsilon: i64, precision: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} must be an odd prime")));
        }
        if precision == 0 {
            return Err(Error::InvalidParams("precision must be at least 1".into()));
        }
        let mut modulus: u64 = 1;
        for _ in 0..precision {
            modulus = modulus
                .checked_mul(p)
                .filter(|m| *m < (1u64 << 62))
                .ok_or_else(|| Error::InvalidParams(format!("{p}^{precision} does not fit in 62 bits")))?;
        }
        let epsilon = reduce(epsilon as i128, modulus);
        if epsilon.is_multiple_of(p) {
            return Err(Error::InvalidParams(format!("epsilon = {epsilon} is not a unit")));
        }
        Ok(FieldParams { p, epsilon, precision, modulus })
    }

    /// `π² = p`, `N = 8`.
    pub fn with_prime(p: u64) -> Result<Self> {
        Self::new(p, 1, DEFAULT_PRECISION)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn epsilon(&self) -> u64 {
        self.epsilon
    }

    /// Number of p-adic digits `N`.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `p^N`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Full π-adic precision `2N`.
    pub fn pi_precision(&self) -> u32 {
        2 * self.precision
    }

    fn pow_p(&self, e: u32) -> u64 {
        self.p.pow(e.min(self.precision))
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn reduce(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

pub(crate) fn mul_mod(x: u64, y: u64, m: u64) -> u64 {
    ((x as u128 * y as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `x` modulo `m`, if `gcd(x, m) = 1`.
pub(crate) fn inv_mod(x: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (x % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| reduce(t0, m))
}

/// Legendre symbol `(u | p)` for an odd prime `p`, as `1`, `-1` or `0`.
pub fn legendre(u: i64, p: u64) -> i32 {
    let u = reduce(u as i128, p);
    if u == 0 {
        return 0;
    }
    if pow_mod(u, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

fn p_adic_valuation(x: u64, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    let mut y = x;
    while y.is_multiple_of(p) {
        y /= p;
        v += 1;
    }
    Some(v)
}

/// Whether the unit `u ∈ Z_p^×` is a norm from `E^×`.
///
/// For odd `p` and `E/Q_p` ramified this holds exactly when `u mod p` is a
/// square in `F_p`.
pub fn is_norm(params: &FieldParams, u: i64) -> Result<bool> {
    match legendre(u, params.p) {
        0 => Err(Error::NotUnit(reduce(u as i128, params.p))),
        s => Ok(s == 1),
    }
}

/// An element `a + bπ` of `O_E`, known modulo `π^prec`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OEElement {
    params: FieldParams,
    a: u64,
    b: u64,
    prec: u32,
}

impl OEElement {
    pub fn new(params: &FieldParams, a: i64, b: i64) -> Self {
        Self::with_precision(params, a, b, params.pi_precision())
    }

    pub fn with_precision(params: &FieldParams, a: i64, b: i64, prec: u32) -> Self {
        let m = params.modulus;
        Self::normalized(params, reduce(a as i128, m), reduce(b as i128, m), prec)
    }

    fn normalized(params: &FieldParams, a: u64, b: u64, prec: u32) -> Self {
        let prec = prec.min(params.pi_precision());
        let a = a % params.pow_p(prec.div_ceil(2));
        let b = b % params.pow_p(prec / 2);
        OEElement { params: *params, a, b, prec }
    }

    pub fn zero(params: &FieldParams) -> Self {
        Self::new(params, 0, 0)
    }

    pub fn one(params: &FieldParams) -> Self {
        Self::new(params, 1, 0)
    }

    pub fn pi(params: &FieldParams) -> Self {
        Self::new(params, 0, 1)
    }

    pub fn from_int(params: &FieldParams, a: i64) -> Self {
        Self::new(params, a, 0)
    }

    /// `π^e` at full precision (zero once `e ≥ 2N`).
    pub fn pi_pow(params: &FieldParams, e: u32) -> Self {
        if e >= params.pi_precision() {
            return Self::zero(params);
        }
        let q = params.pow_p(e / 2);
        if e.is_multiple_of(2) {
            Self::normalized(params, q, 0, params.pi_precision())
        } else {
            Self::normalized(params, 0, q, params.pi_precision())
        }
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    /// Coefficient of `1`, in `[0, p^N)`.
    pub fn a(&self) -> u64 {
        self.a
    }

    /// Coefficient of `π`, in `[0, p^N)`.
    pub fn b(&self) -> u64 {
        self.b
    }

    /// Absolute π-adic precision.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_full_precision(&self) -> bool {
        self.prec == self.params.pi_precision()
    }

    /// π-adic valuation; `None` when the element vanishes to its known precision.
    pub fn valuation(&self) -> Option<u32> {
        let va = p_adic_valuation(self.a, self.params.p).map(|v| 2 * v);
        let vb = p_adic_valuation(self.b, self.params.p).map(|v| 2 * v + 1);
        let v = match (va, vb) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => return None,
        };
        (v < self.prec).then_some(v)
    }

    /// Valuation, counting an element that vanishes to precision as having
    /// valuation equal to its precision.
    fn valuation_or_precision(&self) -> u32 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// `a + bπ ↦ a − bπ`.
    pub fn conj(&self) -> Self {
        let m = self.params.modulus;
        Self::normalized(&self.params, self.a, (m - self.b) % m, self.prec)
    }

    /// `x · conj(x) = a² − εp b²`, an element of `Z_p`.
    pub fn norm(&self) -> Self {
        *self * self.conj()
    }

    /// Inverse of a unit. Units keep their precision under inversion.
    pub fn inv(&self) -> Result<Self> {
        if self.prec == 0 {
            return Err(Error::PrecisionExhausted("inverse of an element with no known digits".into()));
        }
        if !self.is_unit() {
            return Err(Error::NotInvertible);
        }
        let m = self.params.modulus;
        let norm = self.norm();
        debug_assert_eq!(norm.b, 0);
        let n_inv = inv_mod(norm.a, m).ok_or(Error::NotInvertible)?;
        let c = self.conj();
        Ok(Self::normalized(
            &self.params,
            mul_mod(c.a, n_inv, m),
            mul_mod(c.b, n_inv, m),
            self.prec,
        ))
    }

    /// Multiply by `π^e`.
    pub fn mul_pi_pow(&self, e: u32) -> Self {
        *self * Self::pi_pow(&self.params, e)
    }

    /// Exact division by `π^e` with tracked precision: the quotient is only
    /// known modulo `π^{prec − e}`.
    pub fn div_pi_pow(&self, e: u32) -> Result<Self> {
        if e > self.prec {
            return Err(Error::PrecisionExhausted(format!(
                "dividing by pi^{e} an element known to pi^{}",
                self.prec
            )));
        }
        let q = self.div_pi_pow_lift(e)?;
        Ok(Self::normalized(&self.params, q.a, q.b, self.prec - e))
    }

    /// Some full-precision `q` with `q·π^e ≡ self (mod π^{2N})`.
    ///
    /// The unknown top digits are filled with zeros. Used where the quotient is
    /// a chosen multiplier (row and column operations), not a derived value.
    pub(crate) fn div_pi_pow_lift(&self, e: u32) -> Result<Self> {
        if let Some(v) = self.valuation() {
            if v < e {
                return Err(Error::NotInvertible);
            }
        }
        let mut x = *self;
        let p = self.params.p;
        let full = self.params.pi_precision();
        for _ in 0..e {
            // (a + bπ)/π = b + (a/p)·ε^{-1}·π
            debug_assert_eq!(x.a % p, 0);
            let eps_inv = inv_mod(self.params.epsilon, self.params.modulus).expect("unit epsilon");
            let a_div = x.a / p;
            let new_b = mul_mod(a_div, eps_inv, self.params.modulus);
            x = Self::normalized(&self.params, x.b, new_b, full);
        }
        Ok(x)
    }

    /// The canonical representative of `self mod π^e`: the π-adic digits
    /// below `e`, read off the base-p expansions of `a` and `b`.
    pub fn truncate(&self, e: u32) -> Self {
        let e = e.min(self.params.pi_precision());
        let a = self.a % self.params.pow_p(e.div_ceil(2));
        let b = self.b % self.params.pow_p(e / 2);
        Self::normalized(&self.params, a, b, self.params.pi_precision())
    }

    /// Interpret a reduced element as a residue in `F_p`.
    pub fn residue(&self) -> u64 {
        self.a % self.params.p
    }

    /// Same value, precision forced to full. Only for values known to be exact.
    pub(crate) fn assume_exact(&self) -> Self {
        Self::normalized(&self.params, self.a, self.b, self.params.pi_precision())
    }

    fn sort_key(&self) -> (u64, u64, u32) {
        (self.a, self.b, self.prec)
    }
}

impl PartialOrd for OEElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OEElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl Add for OEElement {
    type Output = OEElement;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.params, rhs.params);
        let m = self.params.modulus;
        Self::normalized(&self.params, (self.a + rhs.a) % m, (self.b + rhs.b) % m, self.prec.min(rhs.prec))
    }
}

impl Neg for OEElement {
    type Output = OEElement;
    fn neg(self) -> Self {
        let m = self.params.modulus;
        Self::normalized(&self.params, (m - self.a) % m, (m - self.b) % m, self.prec)
    }
}

impl Sub for OEElement {
    type Output = OEElement;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for OEElement {
    type Output = OEElement;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.params, rhs.params);
        let m = self.params.modulus;
        let eps_p = mul_mod(self.params.epsilon, self.params.p, m);
        let a = (mul_mod(self.a, rhs.a, m) + mul_mod(eps_p, mul_mod(self.b, rhs.b, m), m)) % m;
        let b = (mul_mod(self.a, rhs.b, m) + mul_mod(self.b, rhs.a, m)) % m;
        let prec = (self.prec + rhs.valuation_or_precision())
            .min(rhs.prec + self.valuation_or_precision());
        Self::normalized(&self.params, a, b, prec)
    }
}

impl fmt::Display for OEElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*pi mod {}^{}", self.a, self.b, self.params.p, self.params.precision)?;
        if !self.is_full_precision() {
            write!(f, " O(pi^{})", self.prec)?;
        }
        Ok(())
    }
}

impl OEElement {
    /// Parse the `"a+b*pi mod p^N"` form. `ε` is not part of the string and
    /// must be supplied.
    pub fn parse(s: &str, epsilon: i64) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed O_E element {s:?}"));
        let (body, rest) = s.split_once(" mod ").ok_or_else(bad)?;
        let (modulus, prec) = match rest.split_once(" O(pi^") {
            Some((m, tail)) => {
                let k = tail.strip_suffix(')').ok_or_else(bad)?;
                (m, Some(k.parse::<u32>().map_err(|_| bad())?))
            }
            None => (rest, None),
        };
        let (p, n) = modulus.split_once('^').ok_or_else(bad)?;
        let p: u64 = p.parse().map_err(|_| bad())?;
        let n: u32 = n.parse().map_err(|_| bad())?;
        let (a, b) = body.split_once('+').ok_or_else(bad)?;
        let b = b.strip_suffix("*pi").ok_or_else(bad)?;
        let a: u64 = a.parse().map_err(|_| bad())?;
        let b: u64 = b.parse().map_err(|_| bad())?;
        let params = FieldParams::new(p, epsilon, n)?;
        if a >= params.modulus || b >= params.modulus {
            return Err(bad());
        }
        let prec = prec.unwrap_or(params.pi_precision());
        let x = Self::normalized(&params, a, b, prec);
        if x.a != a || x.b != b {
            return Err(bad());
        }
        Ok(x)
    }
}

impl FromStr for OEElement {
    type Err = Error;
    /// Parses with `ε = 1`; use [`OEElement::parse`] otherwise.
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, 1)
    }
}

/// Serde adapter writing elements as strings. Deserialization assumes `ε = 1`;
/// containers that know `ε` re-parse through [`OEElement::parse`].
impl Serialize for OEElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OEElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

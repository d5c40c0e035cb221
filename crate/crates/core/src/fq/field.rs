use std::fmt;

use crate::error::{Error, Result};

/// Largest field size handled with lookup tables.
const MAX_ORDER: u64 = 1 << 20;
const ADD_TABLE_LIMIT: u32 = 1024;

/// The finite field `F_q`, `q = p^k`, realised as `F_p[x]/(f)`.
///
/// Elements are `u32` codes `Σ c_i p^i` of the residue polynomial
/// `Σ c_i x^i`, so the codes `0..p` are exactly the prime field.
pub struct FqField {
    p: u32,
    k: u32,
    q: u32,
    /// Coefficients of the monic modulus, lowest degree first.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.k, self.modulus)
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FqField {}

fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead_inv = inverse_mod_prime(den[dd], p);
    while r.len() > dd {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = (top * lead_inv) % p;
            let shift = r.len() - 1 - dd;
            for (i, &d) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (c * d) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn inverse_mod_prime(x: u32, p: u32) -> u32 {
    crate::oe::pow_mod(x as u64, (p - 2) as u64, p as u64) as u32
}

fn digits(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    for d in 1..=k / 2 {
        for code in 0..(p as u64).pow(d as u32) {
            let mut g = digits(code as u32, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `k`, ordering candidates by the code
/// `Σ c_i p^i` of their lower coefficients.
fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    for code in 0..(p as u64).pow(k) {
        let mut f = digits(code as u32, p, k as usize);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FqField {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !crate::oe::is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidParams("extension degree must be at least 1".into()));
        }
        let q = p.checked_pow(k).filter(|&q| q <= MAX_ORDER).ok_or_else(|| {
            Error::InvalidParams(format!("field of order {p}^{k} is too large"))
        })?;
        let (p, q) = (p as u32, q as u32);
        let modulus = smallest_irreducible(p, k);
        let mut field = FqField { p, k, q, modulus, exp: Vec::new(), log: Vec::new(), add: None };
        field.build_tables();
        Ok(field)
    }

    fn poly_mul_code(&self, a: u32, b: u32) -> u32 {
        let k = self.k as usize;
        let (da, db) = (digits(a, self.p, k), digits(b, self.p, k));
        let mut prod = vec![0u32; 2 * k];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let r = poly_rem(&prod, &self.modulus, self.p);
        self.encode(&r)
    }

    fn encode(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn build_tables(&mut self) {
        let order = self.q - 1;
        let generator = (1..self.q)
            .find(|&g| {
                let mut x = g;
                let mut n = 1;
                while x != 1 {
                    x = self.poly_mul_code(x, g);
                    n += 1;
                }
                n == order
            })
            .expect("the multiplicative group is cyclic");
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1;
        for (e, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = e as u32;
            x = self.poly_mul_code(x, generator);
        }
        self.exp = exp;
        self.log = log;
        if self.q <= ADD_TABLE_LIMIT {
            let q = self.q as usize;
            let mut add = vec![0u32; q * q];
            for a in 0..self.q {
                for b in 0..self.q {
                    add[a as usize * q + b as usize] = self.add_digits(a, b);
                }
            }
            self.add = Some(add);
        }
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Monic modulus, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The class of `x` (for `k = 1`, the class of the integer `0`).
    pub fn x(&self) -> u32 {
        if self.k == 1 {
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[a as usize * self.q as usize + b as usize],
            None => self.add_digits(a, b),
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        let mut out = 0;
        let mut place = 1;
        let mut a = a;
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[e as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let order = self.q - 1;
        Some(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// `a ↦ a^p`.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    /// Embedding of an integer into the prime field.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn is_prime_field_element(&self, a: u32) -> bool {
        a < self.p
    }

    /// Coefficients of the residue polynomial, lowest degree first.
    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        digits(a, self.p, self.k as usize)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<u32> {
        if coeffs.len() != self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse(format!("expected {} coefficients below {}", self.k, self.p)));
        }
        Ok(self.encode(coeffs))
    }

    /// Iterator over all elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}

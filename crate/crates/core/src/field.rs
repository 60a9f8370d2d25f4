//! GF(2^n) arithmetic in a polynomial basis.
//!
//! Element `i` stands for `sum_j i_j * alpha^j`, where `alpha` is a root of
//! the modulus. Polynomials over GF(2) are bit masks (bit `i` = coefficient
//! of `X^i`).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::check_width;
use crate::vbf::Vbf;

/// Carry-less product of two polynomials.
fn clmul(a: u32, b: u32) -> u64 {
    let mut acc = 0u64;
    let a = a as u64;
    let mut b = b;
    let mut i = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << i;
        }
        b >>= 1;
        i += 1;
    }
    acc
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_mod(mut a: u64, m: u64) -> u64 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, poly_mod(a, b));
    }
    a
}

/// Irreducibility over GF(2): `f` of degree `d` is irreducible iff
/// `gcd(f, X^(2^i) - X) = 1` for all `1 <= i <= d/2`.
pub fn is_irreducible(poly: u32) -> bool {
    let f = poly as u64;
    if f < 2 {
        return false;
    }
    let d = degree(f);
    if d == 1 {
        return true;
    }
    let mut x_pow = 0b10u64; // X^(2^i) mod f
    for _ in 1..=d / 2 {
        x_pow = poly_mod(clmul(x_pow as u32, x_pow as u32), f);
        if poly_gcd(f, x_pow ^ 0b10) != 1 {
            return false;
        }
    }
    true
}

/// Extension degree and modulus of a binary field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    n: u32,
    modulus: u32,
}

impl FieldSpec {
    pub fn new(n: u32, modulus: u32) -> Result<Self> {
        check_width(n)?;
        if modulus >> n != 1 || !is_irreducible(modulus) {
            return Err(Error::NotIrreducible(modulus));
        }
        Ok(Self { n, modulus })
    }

    /// Fixed moduli for n = 6, 8, 10; otherwise the smallest irreducible
    /// polynomial of degree `n`.
    pub fn default_for(n: u32) -> Result<Self> {
        check_width(n)?;
        let modulus = match n {
            6 => 0b100_0011,
            8 => 0b1_0001_1011,
            10 => 0b100_0000_1001,
            _ => ((1u32 << n)..(1u32 << (n + 1)))
                .find(|&p| is_irreducible(p))
                .expect("an irreducible polynomial exists in every degree"),
        };
        Self::new(n, modulus)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        1 << self.n
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        poly_mod(clmul(a, b), self.modulus as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, (self.order() - 2) as u64))
    }

    /// Absolute trace `a + a^2 + ... + a^(2^(n-1))`.
    pub fn trace(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.n {
            acc ^= x;
            x = self.mul(x, x);
        }
        debug_assert!(acc <= 1);
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u32) -> u64 {
        assert!(a != 0);
        let group = (self.order() - 1) as u64;
        let mut ord = group;
        for p in prime_factors(group) {
            while ord.is_multiple_of(p) && self.pow(a, ord / p) == 1 {
                ord /= p;
            }
        }
        ord
    }

    /// The smallest primitive element.
    pub fn generator(&self) -> u32 {
        let group = (self.order() - 1) as u64;
        (1..self.order())
            .find(|&g| self.element_order(g) == group)
            .expect("the multiplicative group is cyclic")
    }

    /// The subfield of order `2^t`, as a sorted list of elements.
    pub fn subfield(&self, t: u32) -> Result<Vec<u32>> {
        if t == 0 || !self.n.is_multiple_of(t) {
            return Err(Error::InvalidParameter(format!(
                "GF(2^{t}) is not a subfield of GF(2^{})",
                self.n
            )));
        }
        Ok((0..self.order())
            .filter(|&x| self.pow(x, 1u64 << t) == x)
            .collect())
    }

    /// Lookup table of `x -> x^d`.
    pub fn monomial_vbf(&self, d: u64) -> Vbf {
        let table = (0..self.order()).map(|x| self.pow(x, d)).collect();
        Vbf::new(self.n, self.n, table).expect("field LUT is well formed")
    }
}

fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= x {
        if x.is_multiple_of(p) {
            out.push(p);
            while x.is_multiple_of(p) {
                x /= p;
            }
        }
        p += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

//! Vectorial Boolean functions as lookup tables, with their Walsh spectra
//! and difference distribution tables.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{check_value, check_width, dot_bits};

/// A function F_2^n -> F_2^m stored as its full table of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vbf {
    n: u32,
    m: u32,
    table: Vec<u32>,
}

impl Vbf {
    pub fn new(n: u32, m: u32, table: Vec<u32>) -> Result<Self> {
        check_width(n)?;
        check_width(m)?;
        if table.len() != 1 << n {
            return Err(Error::InvalidParameter(format!(
                "table has {} entries, expected {}",
                table.len(),
                1u32 << n
            )));
        }
        for &y in &table {
            check_value(y, m)?;
        }
        Ok(Self { n, m, table })
    }

    pub fn from_fn<F: FnMut(u32) -> u32>(n: u32, m: u32, f: F) -> Result<Self> {
        check_width(n)?;
        Self::new(n, m, (0..1u32 << n).map(f).collect())
    }

    pub fn identity(n: u32) -> Result<Self> {
        Self::from_fn(n, n, |x| x)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn eval(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    /// The Boolean component `x -> <b, F(x)>`.
    pub fn component(&self, b: u32) -> impl Iterator<Item = u32> + '_ {
        self.table.iter().map(move |&y| dot_bits(b, y))
    }

    fn check_component(&self, b: u32) -> Result<()> {
        check_value(b, self.m)
    }

    /// `W_F(b, a)` for every `a`, via the fast Walsh–Hadamard butterfly.
    pub fn walsh_row(&self, b: u32) -> Result<Vec<i32>> {
        self.check_component(b)?;
        let mut row: Vec<i32> = self.component(b).map(|bit| 1 - 2 * bit as i32).collect();
        fwht(&mut row);
        Ok(row)
    }

    /// Direct evaluation of a single Walsh coefficient.
    pub fn walsh_naive(&self, b: u32, a: u32) -> Result<i32> {
        self.check_component(b)?;
        check_value(a, self.n)?;
        Ok((0..1u32 << self.n)
            .map(|x| {
                if dot_bits(b, self.eval(x)) ^ dot_bits(a, x) == 0 {
                    1
                } else {
                    -1
                }
            })
            .sum())
    }

    /// Largest `|W_F(b, a)|` over `a`.
    pub fn amplitude(&self, b: u32) -> Result<u32> {
        Ok(component_profile(&self.walsh_row(b)?).amplitude)
    }

    pub fn is_plateaued(&self, b: u32) -> Result<bool> {
        Ok(component_profile(&self.walsh_row(b)?).plateaued)
    }

    /// The exponent `l` with amplitude `2^((n+l)/2)`.
    pub fn component_exponent(&self, b: u32) -> Result<u32> {
        if b == 0 {
            return Err(Error::InvalidParameter("trivial component b = 0".into()));
        }
        component_profile(&self.walsh_row(b)?)
            .exponent(self.n)
            .ok_or(Error::NotPlateaued { b })
    }

    /// Exponents of all nonzero components, indexed by `b - 1`.
    pub fn component_exponents(&self) -> Result<Vec<u32>> {
        (1..1u32 << self.m)
            .into_par_iter()
            .map(|b| self.component_exponent(b))
            .collect()
    }

    pub fn amplitude_distribution(&self) -> Result<AmplitudeDistribution> {
        let exps = self.component_exponents()?;
        let mut counts = BTreeMap::new();
        for l in exps {
            *counts.entry(l).or_insert(0u64) += 1;
        }
        Ok(AmplitudeDistribution { n: self.n, counts })
    }

    /// Maximum `|W_F(b, a)|` over `b != 0` and all `a`.
    pub fn linearity(&self) -> u32 {
        (1..1u32 << self.m)
            .into_par_iter()
            .map(|b| self.amplitude(b).expect("b in range"))
            .max()
            .unwrap_or(0)
    }

    /// ANF coefficients of output coordinate `j` (Möbius transform).
    pub fn anf(&self, j: u32) -> Vec<u8> {
        let mut coeffs: Vec<u8> = self.table.iter().map(|&y| ((y >> j) & 1) as u8).collect();
        let len = coeffs.len();
        let mut h = 1;
        while h < len {
            for i in 0..len {
                if i & h != 0 {
                    coeffs[i] ^= coeffs[i ^ h];
                }
            }
            h <<= 1;
        }
        coeffs
    }

    /// Maximum monomial weight over the ANFs of all output coordinates.
    pub fn algebraic_degree(&self) -> u32 {
        (0..self.m)
            .map(|j| {
                self.anf(j)
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c == 1)
                    .map(|(mono, _)| mono.count_ones())
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    pub fn is_quadratic(&self) -> bool {
        self.algebraic_degree() <= 2
    }

    /// Row `a` of the difference distribution table.
    pub fn ddt_row(&self, a: u32) -> Result<Vec<u32>> {
        check_value(a, self.n)?;
        let mut row = vec![0u32; 1 << self.m];
        for x in 0..1u32 << self.n {
            row[(self.eval(x) ^ self.eval(x ^ a)) as usize] += 1;
        }
        Ok(row)
    }

    pub fn ddt(&self) -> Vec<Vec<u32>> {
        (0..1u32 << self.n)
            .into_par_iter()
            .map(|a| self.ddt_row(a).expect("a in range"))
            .collect()
    }

    pub fn differential_uniformity(&self) -> u32 {
        (1..1u32 << self.n)
            .into_par_iter()
            .map(|a| {
                self.ddt_row(a)
                    .expect("a in range")
                    .into_iter()
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    pub fn is_apn(&self) -> bool {
        self.n >= 1 && self.differential_uniformity() == 2
    }

    /// `sum_{b != 0} 2^{l_b} = 2(2^n - 1)`, the fourth-moment form of the
    /// APN property for plateaued functions with `n = m`.
    pub fn fourth_moment_check(&self) -> Result<bool> {
        if self.n != self.m {
            return Err(Error::WidthMismatch {
                left: self.n,
                right: self.m,
            });
        }
        let total: u64 = self
            .component_exponents()?
            .into_iter()
            .map(|l| 1u64 << l)
            .sum();
        Ok(total == 2 * ((1u64 << self.n) - 1))
    }
}

/// In-place unnormalized Walsh–Hadamard transform.
pub fn fwht(data: &mut [i32]) {
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for i in block..block + h {
                let (x, y) = (data[i], data[i + h]);
                data[i] = x + y;
                data[i + h] = x - y;
            }
        }
        h <<= 1;
    }
}

#[derive(Clone, Copy, Debug)]
struct ComponentProfile {
    amplitude: u32,
    plateaued: bool,
}

impl ComponentProfile {
    fn exponent(&self, n: u32) -> Option<u32> {
        if !self.plateaued || !self.amplitude.is_power_of_two() {
            return None;
        }
        let twice_log = 2 * self.amplitude.trailing_zeros();
        if twice_log < n || twice_log - n > n {
            return None;
        }
        Some(twice_log - n)
    }
}

fn component_profile(row: &[i32]) -> ComponentProfile {
    let amplitude = row.iter().map(|w| w.unsigned_abs()).max().unwrap_or(0);
    let plateaued = row
        .iter()
        .all(|w| w.unsigned_abs() == 0 || w.unsigned_abs() == amplitude);
    ComponentProfile {
        amplitude,
        plateaued,
    }
}

/// How many nontrivial components have amplitude `2^((n+l)/2)`, per `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmplitudeDistribution {
    pub n: u32,
    pub counts: BTreeMap<u32, u64>,
}

impl AmplitudeDistribution {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, l: u32) -> u64 {
        self.counts.get(&l).copied().unwrap_or(0)
    }

    pub fn max_exponent(&self) -> Option<u32> {
        self.counts.keys().next_back().copied()
    }

    /// `2^((n + max l) / 2)`; `n + l` is even for plateaued components.
    pub fn linearity(&self) -> Option<u64> {
        self.max_exponent().map(|l| 1u64 << ((self.n + l) / 2))
    }
}

impl fmt::Display for AmplitudeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .map(|(l, k)| format!("{l}^{k}"))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

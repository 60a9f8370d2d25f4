//! Bit-packed linear algebra over GF(2).
//!
//! A vector of F_2^n is an `n`-bit mask with coordinate `j` stored in bit `j`.
//! Subspaces are kept in a canonical reduced row echelon form: every basis
//! vector is identified by its highest set bit (its pivot), pivots increase
//! along the basis, and each pivot bit is set in exactly one basis vector.
//! Two subspaces are therefore equal as sets iff their bases are equal.

use std::ops::ControlFlow;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported ambient width.
pub const MAX_WIDTH: u32 = 16;

pub(crate) fn check_width(n: u32) -> Result<()> {
    if n == 0 || n > MAX_WIDTH {
        Err(Error::WidthOutOfRange(n))
    } else {
        Ok(())
    }
}

pub(crate) fn check_value(value: u32, width: u32) -> Result<()> {
    if width < 32 && value >> width != 0 {
        Err(Error::ValueOutOfRange { value, width })
    } else {
        Ok(())
    }
}

/// Parity of `a & b`.
#[inline]
pub fn dot_bits(a: u32, b: u32) -> u32 {
    (a & b).count_ones() & 1
}

#[inline]
pub(crate) fn top_bit(x: u32) -> u32 {
    debug_assert!(x != 0);
    31 - x.leading_zeros()
}

/// An element of F_2^n together with its width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PointVec {
    value: u32,
    width: u32,
}

impl PointVec {
    pub fn new(value: u32, width: u32) -> Result<Self> {
        check_width(width)?;
        check_value(value, width)?;
        Ok(Self { value, width })
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn width(self) -> u32 {
        self.width
    }
}

/// Standard dot product on F_2^n.
pub fn dot(a: PointVec, b: PointVec) -> Result<u32> {
    if a.width != b.width {
        return Err(Error::WidthMismatch {
            left: a.width,
            right: b.width,
        });
    }
    Ok(dot_bits(a.value, b.value))
}

/// A linear subspace of F_2^n in canonical reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subspace {
    n: u32,
    basis: Vec<u32>,
}

/// Row-reduces `vectors` into the canonical basis of their span.
pub fn rref(vectors: &[u32], n: u32) -> Result<Subspace> {
    check_width(n)?;
    for &v in vectors {
        check_value(v, n)?;
    }
    Ok(Subspace::span_unchecked(n, vectors.iter().copied()))
}

impl Subspace {
    /// The zero subspace of F_2^n.
    pub fn zero(n: u32) -> Result<Self> {
        check_width(n)?;
        Ok(Self { n, basis: Vec::new() })
    }

    /// F_2^n itself.
    pub fn full(n: u32) -> Result<Self> {
        check_width(n)?;
        Ok(Self {
            n,
            basis: (0..n).map(|j| 1 << j).collect(),
        })
    }

    pub fn span<I: IntoIterator<Item = u32>>(n: u32, vectors: I) -> Result<Self> {
        let vs: Vec<u32> = vectors.into_iter().collect();
        rref(&vs, n)
    }

    pub(crate) fn span_unchecked<I: IntoIterator<Item = u32>>(n: u32, vectors: I) -> Self {
        let mut by_pivot = [0u32; 32];
        for mut v in vectors {
            while v != 0 {
                let p = top_bit(v);
                if by_pivot[p as usize] == 0 {
                    by_pivot[p as usize] = v;
                    break;
                }
                v ^= by_pivot[p as usize];
            }
        }
        // back-substitute so every pivot column has a single set bit
        for p in 0..n as usize {
            let mut v = by_pivot[p];
            if v == 0 {
                continue;
            }
            for l in (0..p).rev() {
                if by_pivot[l] != 0 && (v >> l) & 1 == 1 {
                    v ^= by_pivot[l];
                }
            }
            by_pivot[p] = v;
        }
        let basis = by_pivot[..n as usize]
            .iter()
            .copied()
            .filter(|&v| v != 0)
            .collect();
        Self { n, basis }
    }

    /// Builds a subspace from a basis already known to be canonical.
    pub(crate) fn from_canonical(n: u32, basis: Vec<u32>) -> Self {
        debug_assert!(basis.windows(2).all(|w| top_bit(w[0]) < top_bit(w[1])));
        Self { n, basis }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// Number of elements, `2^dim`.
    pub fn size(&self) -> usize {
        1usize << self.basis.len()
    }

    pub fn pivots(&self) -> Vec<u32> {
        self.basis.iter().map(|&v| top_bit(v)).collect()
    }

    /// Reduces `x` modulo the subspace; the result has zeros at every pivot
    /// and is the smallest integer in the coset `x + V`.
    pub fn reduce(&self, mut x: u32) -> u32 {
        for &v in self.basis.iter().rev() {
            if (x >> top_bit(v)) & 1 == 1 {
                x ^= v;
            }
        }
        x
    }

    pub fn contains(&self, x: u32) -> bool {
        self.reduce(x) == 0
    }

    /// All elements in increasing order.
    pub fn elements(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.size());
        out.push(0);
        for &v in &self.basis {
            let len = out.len();
            for i in 0..len {
                out.push(out[i] ^ v);
            }
        }
        out.sort_unstable();
        out
    }

    /// The element with coordinate vector `coords` in this basis.
    pub fn combine(&self, coords: u32) -> u32 {
        let mut x = 0;
        for (i, &v) in self.basis.iter().enumerate() {
            if (coords >> i) & 1 == 1 {
                x ^= v;
            }
        }
        x
    }

    fn check_same_ambient(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            Err(Error::WidthMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    /// `V^⊥` with respect to the dot product.
    pub fn orthogonal_complement(&self) -> Subspace {
        let pivots = self.pivots();
        let mut out = Vec::with_capacity((self.n - self.dim()) as usize);
        for j in 0..self.n {
            if pivots.contains(&j) {
                continue;
            }
            let mut w = 1u32 << j;
            for &v in &self.basis {
                if (v >> j) & 1 == 1 {
                    w |= 1 << top_bit(v);
                }
            }
            out.push(w);
        }
        Subspace::span_unchecked(self.n, out)
    }

    pub fn sum(&self, other: &Self) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        Ok(Subspace::span_unchecked(
            self.n,
            self.basis.iter().chain(other.basis.iter()).copied(),
        ))
    }

    pub fn intersect(&self, other: &Self) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let perp = self
            .orthogonal_complement()
            .sum(&other.orthogonal_complement())?;
        Ok(perp.orthogonal_complement())
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.n == other.n && self.basis.iter().all(|&v| other.contains(v))
    }

    /// Image of the subspace under a linear map given on vectors.
    pub fn map_linear<F: Fn(u32) -> u32>(&self, out_width: u32, f: F) -> Subspace {
        Subspace::span_unchecked(out_width, self.basis.iter().map(|&v| f(v)))
    }
}

pub fn contains(v: &Subspace, x: u32) -> bool {
    v.contains(x)
}

pub fn intersect(v: &Subspace, w: &Subspace) -> Result<Subspace> {
    v.intersect(w)
}

pub fn sum_space(v: &Subspace, w: &Subspace) -> Result<Subspace> {
    v.sum(w)
}

/// True iff `V ⊕ W` is the whole ambient space.
pub fn is_direct_complement(v: &Subspace, w: &Subspace) -> Result<bool> {
    if v.dim() + w.dim() != v.n() {
        v.check_same_ambient(w)?;
        return Ok(false);
    }
    Ok(v.intersect(w)?.dim() == 0)
}

/// A coset `x + V` stored with its smallest element as representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AffineSubspace {
    direction: Subspace,
    representative: u32,
}

impl AffineSubspace {
    pub fn new(direction: Subspace, point: u32) -> Result<Self> {
        check_value(point, direction.n())?;
        let representative = direction.reduce(point);
        Ok(Self {
            direction,
            representative,
        })
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    pub fn representative(&self) -> u32 {
        self.representative
    }

    pub fn contains(&self, x: u32) -> bool {
        self.direction.contains(x ^ self.representative)
    }

    pub fn elements(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .direction
            .elements()
            .into_iter()
            .map(|v| v ^ self.representative)
            .collect();
        out.sort_unstable();
        out
    }
}

/// `H_b = {x : <b, x> = 0}`.
pub fn hyperplane(b: u32, n: u32) -> Result<Subspace> {
    check_width(n)?;
    check_value(b, n)?;
    if b == 0 {
        return Err(Error::ZeroNormal);
    }
    Ok(Subspace::span_unchecked(n, [b]).orthogonal_complement())
}

/// The complement coset `{x : <b, x> = 1}` of `H_b`.
pub fn coset(b: u32, n: u32) -> Result<AffineSubspace> {
    let h = hyperplane(b, n)?;
    // the lowest set bit of b pairs to 1 with b
    AffineSubspace::new(h, 1 << b.trailing_zeros())
}

/// Number of `k`-dimensional subspaces of F_2^n.
pub fn gaussian_binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (k - i)) - 1;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// All `k`-dimensional subspaces sharing one pivot set.
///
/// The free entries of basis vector `i` are the non-pivot positions below
/// its pivot. Patterns are independent work units for parallel scans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotPattern {
    n: u32,
    pivots: Vec<u32>,
    // per basis vector: the free bit positions, highest first
    free: Vec<Vec<u32>>,
}

impl PivotPattern {
    fn new(n: u32, pivots: Vec<u32>) -> Self {
        let free = pivots
            .iter()
            .map(|&p| (0..p).rev().filter(|j| !pivots.contains(j)).collect())
            .collect();
        Self { n, pivots, free }
    }

    pub fn pivots(&self) -> &[u32] {
        &self.pivots
    }

    pub fn free_bits(&self) -> u32 {
        self.free.iter().map(|f| f.len() as u32).sum()
    }

    pub fn count(&self) -> u64 {
        1u64 << self.free_bits()
    }

    /// Visits every canonical basis with this pivot set, in lexicographic
    /// order of the basis list.
    pub fn for_each_basis<F>(&self, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(&[u32]) -> ControlFlow<()>,
    {
        let k = self.pivots.len();
        let total = self.free_bits();
        let mut basis = vec![0u32; k];
        for counter in 0..(1u64 << total) {
            let mut shift = total;
            for (i, slot) in basis.iter_mut().enumerate() {
                let mut v = 1u32 << self.pivots[i];
                for &pos in &self.free[i] {
                    shift -= 1;
                    if (counter >> shift) & 1 == 1 {
                        v |= 1 << pos;
                    }
                }
                *slot = v;
            }
            f(&basis)?;
        }
        ControlFlow::Continue(())
    }

    pub fn iter(&self) -> impl Iterator<Item = Subspace> + '_ {
        let mut all = Vec::with_capacity(self.count() as usize);
        let _ = self.for_each_basis(|b| {
            all.push(Subspace::from_canonical(self.n, b.to_vec()));
            ControlFlow::Continue(())
        });
        all.into_iter()
    }
}

/// Pivot sets of `k`-subspaces of F_2^n in lexicographic order.
pub fn pivot_patterns(n: u32, k: u32) -> Vec<PivotPattern> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut comb: Vec<u32> = (0..k).collect();
    loop {
        out.push(PivotPattern::new(n, comb.clone()));
        // next combination
        let mut i = k as usize;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if comb[i] < n - k + i as u32 {
                comb[i] += 1;
                for j in i + 1..k as usize {
                    comb[j] = comb[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Every `k`-dimensional subspace of F_2^n exactly once, ordered by pivot
/// pattern and then by free entries.
pub fn enumerate_subspaces(n: u32, k: u32) -> impl Iterator<Item = Subspace> {
    pivot_patterns(n, k).into_iter().flat_map(move |p| {
        let subs: Vec<Subspace> = p.iter().collect();
        subs.into_iter()
    })
}

/// Every `k`-dimensional subspace of F_2^n containing `v`, each exactly once.
pub fn enumerate_superspaces(v: &Subspace, k: u32) -> Result<Vec<Subspace>> {
    let mut out = Vec::new();
    let _ = for_each_superspace(v, k, |s| {
        out.push(s.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Streams the `k`-dimensional superspaces of `v` in a fixed order: the
/// subspaces of the quotient by `v`, enumerated lexicographically, lifted
/// along the non-pivot coordinates of `v`.
pub fn for_each_superspace<F>(v: &Subspace, k: u32, mut f: F) -> Result<ControlFlow<()>>
where
    F: FnMut(&Subspace) -> ControlFlow<()>,
{
    let n = v.n();
    if k < v.dim() || k > n {
        return Err(Error::InvalidParameter(format!(
            "superspace dimension {k} outside [{}, {n}]",
            v.dim()
        )));
    }
    let pivots = v.pivots();
    let quotient_coords: Vec<u32> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let q = quotient_coords.len() as u32;
    let lift = |u: u32| {
        let mut x = 0;
        for (i, &pos) in quotient_coords.iter().enumerate() {
            if (u >> i) & 1 == 1 {
                x |= 1 << pos;
            }
        }
        x
    };
    if q == 0 {
        return Ok(f(v));
    }
    for pattern in pivot_patterns(q, k - v.dim()) {
        let flow = pattern.for_each_basis(|b| {
            let s = Subspace::span_unchecked(
                n,
                v.basis().iter().copied().chain(b.iter().map(|&u| lift(u))),
            );
            f(&s)
        });
        if flow.is_break() {
            return Ok(flow);
        }
    }
    Ok(ControlFlow::Continue(()))
}

/// A uniformly random `k`-dimensional subspace of F_2^n.
pub fn random_subspace<R: Rng + ?Sized>(n: u32, k: u32, rng: &mut R) -> Subspace {
    assert!(k <= n);
    let mut vs: Vec<u32> = Vec::with_capacity(k as usize);
    loop {
        let s = Subspace::span_unchecked(n, vs.iter().copied());
        if s.dim() == k {
            return s;
        }
        let x = rng.gen::<u32>() & ((1u32 << n) - 1);
        if !s.contains(x) {
            vs.push(x);
        }
    }
}

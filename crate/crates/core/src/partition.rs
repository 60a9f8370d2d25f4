//! The vector space partition induced by a crooked (quadratic APN) function.
//!
//! For a nonzero direction `a`, the image of `x -> F(x) + F(x + a)` is an
//! affine hyperplane with some normal `b`. Grouping directions by their
//! normal gives the sets `T_b` (image equal to `H_b`) and `T̄_b` (image equal
//! to the complement of `H_b`); `V_b = T_b ∪ T̄_b` is a subspace and the
//! nonzero `V_b` partition F_2^n. The dimension of `V_b` equals the exponent
//! `l_b` of the amplitude of the component `F_b`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot_bits, Subspace};
use crate::vbf::Vbf;

/// Certificate that `image(D_{F,a})` is the affine hyperplane
/// `{y : <b, y> = side}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DirectionClass {
    pub a: u32,
    pub b: u32,
    pub side: u32,
}

/// One block of the partition together with the data it was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Member {
    pub v: Subspace,
    pub t: Subspace,
    pub tbar_nonempty: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivedPartition {
    pub n: u32,
    /// Keyed by the hyperplane normal `b`; only nonzero `V_b` are present.
    pub members: BTreeMap<u32, Member>,
}

/// Dimensions with multiplicities, smallest dimension first.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PartitionType(pub Vec<(u32, u64)>);

impl PartitionType {
    pub fn from_dims<I: IntoIterator<Item = u32>>(dims: I) -> Self {
        let mut tally: BTreeMap<u32, u64> = BTreeMap::new();
        for d in dims {
            *tally.entry(d).or_insert(0) += 1;
        }
        Self(tally.into_iter().collect())
    }

    pub fn count(&self, dim: u32) -> u64 {
        self.0
            .iter()
            .find(|(d, _)| *d == dim)
            .map_or(0, |(_, k)| *k)
    }

    pub fn members(&self) -> u64 {
        self.0.iter().map(|(_, k)| k).sum()
    }

    /// `sum k_d (2^d - 1)`: the number of nonzero vectors covered.
    pub fn covered_points(&self) -> u64 {
        self.0.iter().map(|(d, k)| k * ((1u64 << d) - 1)).sum()
    }
}

impl fmt::Display for PartitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(d, k)| format!("{d}^{k}")).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

fn not_crooked(a: u32, reason: impl Into<String>) -> Error {
    Error::NotCrooked {
        a,
        reason: reason.into(),
    }
}

/// Computes the image of `D_{F,a}` and certifies it is an affine hyperplane.
pub fn image_of_difference(f: &Vbf, a: u32) -> Result<DirectionClass> {
    let n = f.n();
    if f.m() != n {
        return Err(Error::WidthMismatch {
            left: n,
            right: f.m(),
        });
    }
    if a == 0 || a >> n != 0 {
        return Err(Error::InvalidParameter(format!(
            "direction {a:#x} must be nonzero and fit in {n} bits"
        )));
    }
    let mut seen = vec![false; 1 << n];
    let mut image = Vec::with_capacity(1 << (n - 1));
    for x in 0..1u32 << n {
        let y = f.eval(x) ^ f.eval(x ^ a);
        if !seen[y as usize] {
            seen[y as usize] = true;
            image.push(y);
        }
    }
    image.sort_unstable();
    if image.len() != 1 << (n - 1) {
        return Err(not_crooked(
            a,
            format!("image has {} points, expected {}", image.len(), 1u32 << (n - 1)),
        ));
    }
    let y0 = image[0];
    let directions = Subspace::span_unchecked(n, image.iter().map(|&y| y ^ y0));
    // the differences span a space no larger than the image iff they are closed
    if directions.dim() != n - 1 {
        return Err(not_crooked(
            a,
            format!("differences span dimension {}, expected {}", directions.dim(), n - 1),
        ));
    }
    let normal = directions.orthogonal_complement();
    let b = normal.basis()[0];
    Ok(DirectionClass {
        a,
        b,
        side: dot_bits(b, y0),
    })
}

/// Groups every nonzero direction by the normal of its difference image.
pub fn build_partition(f: &Vbf) -> Result<DerivedPartition> {
    let n = f.n();
    let classes: Vec<DirectionClass> = (1..1u32 << n)
        .into_par_iter()
        .map(|a| image_of_difference(f, a))
        .collect::<Result<_>>()?;

    let mut grouped: BTreeMap<u32, (Vec<u32>, Vec<u32>)> = BTreeMap::new();
    for c in classes {
        let entry = grouped.entry(c.b).or_default();
        if c.side == 0 {
            entry.0.push(c.a);
        } else {
            entry.1.push(c.a);
        }
    }

    let mut members = BTreeMap::new();
    for (b, (t_dirs, tbar)) in grouped {
        let t = Subspace::span_unchecked(n, t_dirs.iter().copied());
        if t.size() != t_dirs.len() + 1 {
            return Err(Error::StructureViolation(format!(
                "T_b for b = {b:#x} is not closed under addition"
            )));
        }
        let tbar_nonempty = !tbar.is_empty();
        if tbar_nonempty {
            let c = tbar[0];
            if tbar.len() != t.size() || !tbar.iter().all(|&x| t.contains(x ^ c)) {
                return Err(Error::StructureViolation(format!(
                    "complement set for b = {b:#x} is not a coset of T_b"
                )));
            }
        }
        let v = Subspace::span_unchecked(n, t.basis().iter().chain(tbar.first()).copied());
        let expected = t.dim() + u32::from(tbar_nonempty);
        if v.dim() != expected {
            return Err(Error::StructureViolation(format!(
                "V_b for b = {b:#x} has dimension {}, expected {expected}",
                v.dim()
            )));
        }
        members.insert(b, Member { v, t, tbar_nonempty });
    }
    Ok(DerivedPartition { n, members })
}

/// True iff every nonzero vector of F_2^n lies in exactly one of `spaces`.
pub fn covers_exactly<'a, I>(n: u32, spaces: I) -> bool
where
    I: IntoIterator<Item = &'a Subspace>,
{
    let mut hits = vec![0u32; 1 << n];
    for s in spaces {
        if s.n() != n {
            return false;
        }
        for x in s.elements() {
            hits[x as usize] += 1;
        }
    }
    hits[1..].iter().all(|&h| h == 1)
}

pub fn verify_partition(p: &DerivedPartition) -> bool {
    covers_exactly(p.n, p.members.values().map(|m| &m.v))
}

/// Checks that the exponent of every nonzero component equals `dim V_b`
/// (zero when `b` has no member), and hence that the number of members
/// equals the number of non-bent components.
pub fn verify_dim_amplitude(f: &Vbf, p: &DerivedPartition) -> Result<bool> {
    let exps = f.component_exponents()?;
    let all_match = exps.iter().enumerate().all(|(i, &l)| {
        let b = i as u32 + 1;
        let dim = p.members.get(&b).map_or(0, |m| m.v.dim());
        dim == l
    });
    let nonbent = exps.iter().filter(|&&l| l > 0).count();
    Ok(all_match && nonbent == p.members.len())
}

pub fn partition_type(p: &DerivedPartition) -> PartitionType {
    PartitionType::from_dims(p.members.values().map(|m| m.v.dim()))
}

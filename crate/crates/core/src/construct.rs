//! Explicit vector space partitions: spreads from subfield cosets, the
//! partition of `F_{2^(n-s)} × F_{2^s}` into one big and many small
//! subspaces, and refinement of a member by a partition of itself.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{check_width, rref, Subspace};
use crate::partition::{covers_exactly, PartitionType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExplicitPartition {
    pub n: u32,
    pub members: Vec<Subspace>,
}

impl ExplicitPartition {
    pub fn partition_type(&self) -> PartitionType {
        partition_type_of(self)
    }

    pub fn verify(&self) -> bool {
        verify(self)
    }
}

pub fn partition_type_of(p: &ExplicitPartition) -> PartitionType {
    PartitionType::from_dims(p.members.iter().map(Subspace::dim))
}

/// Every nonzero vector lies in exactly one member (exhaustive check).
pub fn verify(p: &ExplicitPartition) -> bool {
    covers_exactly(p.n, &p.members)
}

/// The `t`-spread `{g^i · GF(2^t)}` of GF(2^n), `g` a primitive element.
pub fn spread(n: u32, t: u32) -> Result<ExplicitPartition> {
    check_width(n)?;
    if t == 0 || !n.is_multiple_of(t) {
        return Err(Error::InvalidParameter(format!(
            "a {t}-spread of F_2^{n} needs t | n"
        )));
    }
    let field = FieldSpec::default_for(n)?;
    let sub = rref(&field.subfield(t)?, n)?;
    let g = field.generator();
    let count = ((1u64 << n) - 1) / ((1u64 << t) - 1);
    let mut scale = 1u32;
    let mut members = Vec::with_capacity(count as usize);
    for _ in 0..count {
        members.push(sub.map_linear(n, |x| field.mul(scale, x)));
        scale = field.mul(scale, g);
    }
    Ok(ExplicitPartition { n, members })
}

/// Partition of type `[s^(2^(n-s)), (n-s)^1]`.
///
/// The low `n - s` bits carry `E = GF(2^(n-s))`, the high `s` bits are
/// coordinates of an element `y` of the subfield `K ⊂ E` of order `2^s`.
/// Members: `E × {0}` and `{(αy, y) : y ∈ K}` for each `α ∈ E`.
pub fn bu_partition(n: u32, s: u32) -> Result<ExplicitPartition> {
    check_width(n)?;
    if s == 0 || s >= n || !(n - s).is_multiple_of(s) {
        return Err(Error::InvalidParameter(format!(
            "this construction needs 0 < s < n and s | n - s, got n = {n}, s = {s}"
        )));
    }
    let e = n - s;
    let field = FieldSpec::default_for(e)?;
    let k = rref(&field.subfield(s)?, e)?;
    let mut members = Vec::with_capacity((1usize << e) + 1);
    members.push(Subspace::full(e)?.map_linear(n, |x| x));
    for alpha in 0..1u32 << e {
        let basis = (0..s).map(|j| {
            let y = k.combine(1 << j);
            field.mul(alpha, y) | (1 << (e + j))
        });
        members.push(Subspace::span(n, basis)?);
    }
    Ok(ExplicitPartition { n, members })
}

/// Replaces member `index` by the image of `sub`, a partition of
/// `F_2^dim(member)`, under the member's coordinate map. The new members
/// take the old one's place, in order.
pub fn refine_member_with(
    p: &ExplicitPartition,
    index: usize,
    sub: &ExplicitPartition,
) -> Result<ExplicitPartition> {
    let member = p.members.get(index).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "member index {index} out of range ({} members)",
            p.members.len()
        ))
    })?;
    if sub.n != member.dim() {
        return Err(Error::WidthMismatch {
            left: member.dim(),
            right: sub.n,
        });
    }
    let pieces = sub
        .members
        .iter()
        .map(|w| w.map_linear(p.n, |x| member.combine(x)));
    let mut members = Vec::with_capacity(p.members.len() + sub.members.len());
    members.extend_from_slice(&p.members[..index]);
    members.extend(pieces);
    members.extend_from_slice(&p.members[index + 1..]);
    Ok(ExplicitPartition { n: p.n, members })
}

/// Replaces member `index` by a `t`-spread of it.
pub fn refine_member(p: &ExplicitPartition, index: usize, t: u32) -> Result<ExplicitPartition> {
    let dim = p
        .members
        .get(index)
        .map(Subspace::dim)
        .ok_or_else(|| Error::InvalidParameter(format!("member index {index} out of range")))?;
    if dim == t {
        return Ok(p.clone());
    }
    refine_member_with(p, index, &spread(dim, t)?)
}

/// Refines the first `count` members of dimension `dim` with `t`-spreads.
pub fn refine_many(p: &ExplicitPartition, dim: u32, t: u32, count: usize) -> Result<ExplicitPartition> {
    let mut out = p.clone();
    for _ in 0..count {
        let idx = out
            .members
            .iter()
            .position(|m| m.dim() == dim)
            .ok_or_else(|| Error::InvalidParameter(format!("no member of dimension {dim} left")))?;
        out = refine_member(&out, idx, t)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(p: &ExplicitPartition) -> String {
        p.partition_type().to_string()
    }

    #[test]
    fn spreads() {
        let p = spread(6, 2).unwrap();
        assert_eq!(ty(&p), "[2^21]");
        assert!(p.verify());
        let p = spread(8, 4).unwrap();
        assert_eq!(ty(&p), "[4^17]");
        assert!(p.verify());
        let p = spread(5, 5).unwrap();
        assert_eq!(ty(&p), "[5^1]");
        assert!(p.verify());
        assert!(spread(8, 3).is_err());
        for (n, t) in [(4, 2), (6, 3), (9, 3), (10, 2), (10, 5), (12, 4)] {
            let p = spread(n, t).unwrap();
            assert!(p.verify(), "spread({n},{t})");
            assert_eq!(p.members.len() as u64, ((1u64 << n) - 1) / ((1u64 << t) - 1));
        }
    }

    #[test]
    fn bu_partitions() {
        assert_eq!(ty(&bu_partition(6, 2).unwrap()), "[2^16,4^1]");
        let p = bu_partition(8, 2).unwrap();
        assert_eq!(ty(&p), "[2^64,6^1]");
        assert!(p.verify());
        let p = bu_partition(10, 2).unwrap();
        assert_eq!(ty(&p), "[2^256,8^1]");
        assert!(p.verify());
        assert!(bu_partition(8, 3).is_err());
        assert!(bu_partition(9, 3).unwrap().verify());
        assert!(bu_partition(6, 3).unwrap().verify());
    }

    #[test]
    fn removing_a_member_breaks_cover() {
        let mut p = spread(6, 2).unwrap();
        p.members.pop();
        assert!(!p.verify());
        let mut p = spread(6, 2).unwrap();
        let dup = p.members[0].clone();
        p.members.push(dup);
        assert!(!p.verify());
    }

    #[test]
    fn refinement() {
        let p = spread(8, 4).unwrap();
        let q = refine_member(&p, 3, 2).unwrap();
        assert_eq!(q.members.len(), 17 - 1 + 5);
        assert_eq!(ty(&q), "[2^5,4^16]");
        assert!(q.verify());
        assert!(q.members[3..8].iter().all(|m| m.is_subspace_of(&p.members[3])));

        let s = spread(6, 2).unwrap();
        assert_eq!(refine_member(&s, 0, 2).unwrap(), s);
        assert!(refine_member(&p, 0, 3).is_err());
        assert!(refine_member(&p, 17, 2).is_err());
    }

    #[test]
    fn eight_chain_reaches_every_type() {
        let base = spread(8, 4).unwrap();
        let mut p = base.clone();
        for i in 0..=17u64 {
            if i > 0 {
                p = refine_many(&p, 4, 2, 1).unwrap();
            }
            assert!(p.verify());
            assert_eq!(p.partition_type(), PartitionType::from_dims(
                std::iter::repeat_n(2, 5 * i as usize).chain(std::iter::repeat_n(4, 17 - i as usize))
            ));
        }
        assert_eq!(refine_many(&base, 4, 2, 17).unwrap(), p);
    }

    #[test]
    fn nested_refinement_at_ten() {
        let p = bu_partition(10, 2).unwrap();
        let big = p.members.iter().position(|m| m.dim() == 8).unwrap();
        let q = refine_member_with(&p, big, &bu_partition(8, 2).unwrap()).unwrap();
        assert_eq!(ty(&q), "[2^320,6^1]");
        assert!(q.verify());
        let q = refine_member_with(&p, big, &spread(8, 4).unwrap()).unwrap();
        assert_eq!(ty(&q), "[2^256,4^17]");
        assert!(q.verify());
        assert!(refine_member_with(&p, big, &spread(6, 2).unwrap()).is_err());
    }
}

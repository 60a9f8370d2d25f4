//! Affine maps over F_2 and extended-affine (EA) transforms
//! `G = A1 ∘ F ∘ A2 + A3`, with checks of how the non-bent set and the
//! derived partition move under such a transform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::blocking::{nonbent_set, PointSet};
use crate::error::{Error, Result};
use crate::linalg::{check_value, check_width, dot_bits};
use crate::partition::build_partition;
use crate::vbf::Vbf;

/// `x -> Mx + c` with `M` stored as `n_out` row masks of width `n_in`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AffineMap {
    n_in: u32,
    n_out: u32,
    rows: Vec<u32>,
    constant: u32,
}

impl AffineMap {
    pub fn new(n_in: u32, n_out: u32, rows: Vec<u32>, constant: u32) -> Result<Self> {
        check_width(n_in)?;
        check_width(n_out)?;
        if rows.len() != n_out as usize {
            return Err(Error::InvalidParameter(format!(
                "expected {n_out} rows, got {}",
                rows.len()
            )));
        }
        for &r in &rows {
            check_value(r, n_in)?;
        }
        check_value(constant, n_out)?;
        Ok(Self {
            n_in,
            n_out,
            rows,
            constant,
        })
    }

    pub fn identity(n: u32) -> Result<Self> {
        Self::new(n, n, (0..n).map(|i| 1 << i).collect(), 0)
    }

    pub fn zero(n_in: u32, n_out: u32) -> Result<Self> {
        Self::new(n_in, n_out, vec![0; n_out as usize], 0)
    }

    /// The affine map agreeing with `f` (which must be affine).
    pub fn from_fn<F: Fn(u32) -> u32>(n_in: u32, n_out: u32, f: F) -> Result<Self> {
        let c = f(0);
        let cols: Vec<u32> = (0..n_in).map(|j| f(1 << j) ^ c).collect();
        let rows = (0..n_out)
            .map(|i| (0..n_in).fold(0, |r, j| r | ((cols[j as usize] >> i) & 1) << j))
            .collect();
        Self::new(n_in, n_out, rows, c)
    }

    pub fn n_in(&self) -> u32 {
        self.n_in
    }

    pub fn n_out(&self) -> u32 {
        self.n_out
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn constant(&self) -> u32 {
        self.constant
    }

    #[inline]
    pub fn apply_linear(&self, x: u32) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |y, (i, &r)| y | dot_bits(r, x) << i)
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.apply_linear(x) ^ self.constant
    }

    /// The linear part only, so that `<M x, b> = <x, Mᵀ b>`.
    pub fn transpose_linear(&self) -> AffineMap {
        let rows = (0..self.n_in)
            .map(|j| {
                self.rows
                    .iter()
                    .enumerate()
                    .fold(0, |r, (i, &row)| r | ((row >> j) & 1) << i)
            })
            .collect();
        AffineMap {
            n_in: self.n_out,
            n_out: self.n_in,
            rows,
            constant: 0,
        }
    }

    pub fn linear_part(&self) -> AffineMap {
        AffineMap {
            constant: 0,
            ..self.clone()
        }
    }

    pub fn rank(&self) -> u32 {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for bit in 0..self.n_in {
            let Some(p) = (rank as usize..rows.len()).find(|&i| (rows[i] >> bit) & 1 == 1) else {
                continue;
            };
            rows.swap(rank as usize, p);
            let pivot = rows[rank as usize];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank as usize && (*r >> bit) & 1 == 1 {
                    *r ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.n_in == self.n_out && self.rank() == self.n_in
    }

    /// Gauss-Jordan elimination on `[M | I]`.
    pub fn invert(&self) -> Result<AffineMap> {
        if !self.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        let n = self.n_in as usize;
        let mut m = self.rows.clone();
        let mut inv: Vec<u32> = (0..n).map(|i| 1 << i).collect();
        for col in 0..n {
            let p = (col..n)
                .find(|&i| (m[i] >> col) & 1 == 1)
                .ok_or(Error::SingularMatrix)?;
            m.swap(col, p);
            inv.swap(col, p);
            for i in 0..n {
                if i != col && (m[i] >> col) & 1 == 1 {
                    m[i] ^= m[col];
                    inv[i] ^= inv[col];
                }
            }
        }
        let mut out = AffineMap {
            n_in: self.n_in,
            n_out: self.n_out,
            rows: inv,
            constant: 0,
        };
        out.constant = out.apply_linear(self.constant);
        Ok(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap> {
        if other.n_out != self.n_in {
            return Err(Error::WidthMismatch {
                left: self.n_in,
                right: other.n_out,
            });
        }
        AffineMap::from_fn(other.n_in, self.n_out, |x| self.apply(other.apply(x)))
    }
}

/// A random affine map with invertible linear part, and the number of
/// matrices drawn before one had full rank.
pub fn random_invertible_with_draws(n: u32, seed: u64) -> Result<(AffineMap, u32)> {
    check_width(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = 0;
    loop {
        draws += 1;
        let rows = (0..n).map(|_| rng.gen_range(0..1u32 << n)).collect();
        let map = AffineMap::new(n, n, rows, 0)?;
        if map.is_invertible() {
            let constant = rng.gen_range(0..1u32 << n);
            return Ok((AffineMap { constant, ..map }, draws));
        }
    }
}

pub fn random_invertible(n: u32, seed: u64) -> Result<AffineMap> {
    random_invertible_with_draws(n, seed).map(|(m, _)| m)
}

pub fn random_affine<R: Rng + ?Sized>(n_in: u32, n_out: u32, rng: &mut R) -> Result<AffineMap> {
    let rows = (0..n_out).map(|_| rng.gen_range(0..1u32 << n_in)).collect();
    AffineMap::new(n_in, n_out, rows, rng.gen_range(0..1u32 << n_out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EaTriple {
    pub a1: AffineMap,
    pub a2: AffineMap,
    pub a3: AffineMap,
}

impl EaTriple {
    pub fn identity(n: u32, m: u32) -> Result<Self> {
        Ok(Self {
            a1: AffineMap::identity(m)?,
            a2: AffineMap::identity(n)?,
            a3: AffineMap::zero(n, m)?,
        })
    }

    /// Deterministic per seed.
    pub fn random(n: u32, m: u32, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a1 = random_invertible(m, rng.gen())?;
        let a2 = random_invertible(n, rng.gen())?;
        let a3 = random_affine(n, m, &mut rng)?;
        Ok(Self { a1, a2, a3 })
    }

    pub fn apply(&self, f: &Vbf) -> Result<Vbf> {
        ea_transform(f, &self.a1, &self.a2, &self.a3)
    }
}

/// `G(x) = A1(F(A2(x))) + A3(x)`.
pub fn ea_transform(f: &Vbf, a1: &AffineMap, a2: &AffineMap, a3: &AffineMap) -> Result<Vbf> {
    let (n, m) = (f.n(), f.m());
    if a1.n_in != m || a1.n_out != m || a2.n_in != n || a2.n_out != n {
        return Err(Error::InvalidParameter(format!(
            "A1 must act on F_2^{m} and A2 on F_2^{n}"
        )));
    }
    if a3.n_in != n || a3.n_out != m {
        return Err(Error::InvalidParameter(format!("A3 must map F_2^{n} to F_2^{m}")));
    }
    if !a1.is_invertible() || !a2.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    let table = (0..1u32 << n)
        .into_par_iter()
        .map(|x| a1.apply(f.eval(a2.apply(x))) ^ a3.apply(x))
        .collect();
    Vbf::new(n, m, table)
}

/// Checks that `b ∈ N_G` exactly when `L1ᵀ b ∈ N_F`, i.e. that `L1ᵀ`
/// carries `N_G` onto `N_F`.
pub fn verify_nonbent_equivariance(f: &Vbf, g: &Vbf, a1: &AffineMap) -> Result<bool> {
    let nf = nonbent_set(f)?;
    let ng = nonbent_set(g)?;
    let lt = a1.transpose_linear();
    Ok(ng.map(|b| lt.apply(b)) == nf)
}

/// The non-bent set of `G` predicted from that of `F`.
pub fn predicted_nonbent(nf: &PointSet, a1: &AffineMap) -> Result<PointSet> {
    let inv_t = a1.transpose_linear().invert()?;
    Ok(nf.map(|b| inv_t.apply(b)))
}

/// Checks `V^G_b = L2^{-1}(V^F_{L1ᵀ b})` for every nonzero `b`, with empty
/// members for bent components on both sides.
pub fn verify_partition_equivariance(
    f: &Vbf,
    g: &Vbf,
    a1: &AffineMap,
    a2: &AffineMap,
    _a3: &AffineMap,
) -> Result<bool> {
    let pf = build_partition(f)?;
    let pg = build_partition(g)?;
    let l1t = a1.transpose_linear();
    let l2_inv = a2.linear_part().invert()?;
    let n = f.n();
    Ok((1..1u32 << f.m()).all(|b| {
        let vg = pg.members.get(&b).map(|m| &m.v);
        let vf = pf.members.get(&l1t.apply(b)).map(|m| &m.v);
        match (vg, vf) {
            (None, None) => true,
            (Some(vg), Some(vf)) => *vg == vf.map_linear(n, |x| l2_inv.apply(x)),
            _ => false,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::partition::partition_type;

    fn cube(n: u32) -> Vbf {
        FieldSpec::default_for(n).unwrap().monomial_vbf(3)
    }

    #[test]
    fn identity_map() {
        let id = AffineMap::identity(5).unwrap();
        assert!((0..32).all(|x| id.apply(x) == x));
        assert_eq!(id.transpose_linear(), id);
        assert_eq!(id.invert().unwrap(), id);
    }

    #[test]
    fn adjoint_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let n_in = rng.gen_range(1..=10);
            let n_out = rng.gen_range(1..=10);
            let l = random_affine(n_in, n_out, &mut rng).unwrap().linear_part();
            let lt = l.transpose_linear();
            let x = rng.gen_range(0..1u32 << n_in);
            let b = rng.gen_range(0..1u32 << n_out);
            assert_eq!(dot_bits(l.apply(x), b), dot_bits(x, lt.apply(b)));
            assert_eq!(lt.transpose_linear(), l);
        }
    }

    #[test]
    fn inversion() {
        for seed in 0..50 {
            let a = random_invertible(7, seed).unwrap();
            let inv = a.invert().unwrap();
            assert_eq!(inv.invert().unwrap(), a);
            assert!((0..128).all(|x| inv.apply(a.apply(x)) == x));
            assert_eq!(a.rank(), 7);
        }
        let singular = AffineMap::new(3, 3, vec![0b011, 0b110, 0b101], 0).unwrap();
        assert_eq!(singular.rank(), 2);
        assert!(matches!(singular.invert(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn random_invertible_is_deterministic() {
        assert_eq!(random_invertible(8, 42).unwrap(), random_invertible(8, 42).unwrap());
        assert_ne!(random_invertible(8, 42).unwrap(), random_invertible(8, 43).unwrap());
        // acceptance probability prod (1 - 2^-i) ≈ 0.2888
        let trials = 2000;
        let draws: u32 = (0..trials)
            .map(|s| random_invertible_with_draws(8, s).unwrap().1)
            .sum();
        let mean = draws as f64 / trials as f64;
        let expected = 1.0 / (1..=8).map(|i| 1.0 - 0.5f64.powi(i)).product::<f64>();
        assert!((mean - expected).abs() < 0.25, "mean draws {mean}");
        assert!(mean < 4.0);
    }

    #[test]
    fn from_fn_and_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_affine(5, 4, &mut rng).unwrap();
        assert_eq!(AffineMap::from_fn(5, 4, |x| a.apply(x)).unwrap(), a);
        let b = random_invertible(5, 9).unwrap();
        let ab = a.compose(&b).unwrap();
        assert!((0..32).all(|x| ab.apply(x) == a.apply(b.apply(x))));
    }

    #[test]
    fn ea_identity_and_invariants() {
        let f = cube(6);
        let t = EaTriple::identity(6, 6).unwrap();
        let g = t.apply(&f).unwrap();
        assert_eq!(g, f);
        assert!(verify_nonbent_equivariance(&f, &g, &t.a1).unwrap());
        assert!(verify_partition_equivariance(&f, &g, &t.a1, &t.a2, &t.a3).unwrap());

        for seed in 0..5 {
            let t = EaTriple::random(6, 6, seed).unwrap();
            let g = t.apply(&f).unwrap();
            assert!(g.is_apn());
            assert_eq!(g.amplitude_distribution().unwrap(), f.amplitude_distribution().unwrap());
            assert!(verify_nonbent_equivariance(&f, &g, &t.a1).unwrap());
            assert!(verify_partition_equivariance(&f, &g, &t.a1, &t.a2, &t.a3).unwrap());
            let pg = build_partition(&g).unwrap();
            assert_eq!(partition_type(&pg), partition_type(&build_partition(&f).unwrap()));
            let nf = nonbent_set(&f).unwrap();
            assert_eq!(predicted_nonbent(&nf, &t.a1).unwrap(), nonbent_set(&g).unwrap());
        }
    }

    #[test]
    fn direction_of_the_transpose_matters() {
        // L1ᵀ carries N_G onto N_F; pushing N_F forward instead differs
        // whenever L1ᵀ is not an involution on that set
        let f = cube(6);
        let nf = nonbent_set(&f).unwrap();
        let mut differs = 0;
        for seed in 0..20 {
            let t = EaTriple::random(6, 6, seed).unwrap();
            let ng = nonbent_set(&t.apply(&f).unwrap()).unwrap();
            let lt = t.a1.transpose_linear();
            assert_eq!(ng.map(|b| lt.apply(b)), nf);
            if nf.map(|b| lt.apply(b)) != ng {
                differs += 1;
            }
        }
        assert!(differs > 0);
    }

    #[test]
    fn rejects_singular_transforms() {
        let f = cube(4);
        let bad = AffineMap::new(4, 4, vec![1, 1, 2, 4], 0).unwrap();
        let id = AffineMap::identity(4).unwrap();
        let z = AffineMap::zero(4, 4).unwrap();
        assert!(ea_transform(&f, &bad, &id, &z).is_err());
        assert!(ea_transform(&f, &id, &bad, &z).is_err());
    }
}

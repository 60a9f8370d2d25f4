//! The set `N_F` of non-bent nontrivial components, viewed as a point set of
//! PG(m-1, 2) (nonzero vectors of F_2^m), and the blocking-set predicates
//! that constrain it.
//!
//! Dimensions here are always vector-space dimensions: a projective
//! `(n/2)`-space is a subspace of dimension `n/2 + 1`.

use std::ops::ControlFlow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    check_value, check_width, for_each_superspace, gaussian_binomial, pivot_patterns,
    random_subspace, top_bit, Subspace,
};
use crate::vbf::Vbf;

/// Default node budget of the complementary-pair search.
pub const DEFAULT_PAIR_BUDGET: u64 = 100_000_000;

/// A set of nonzero points of F_2^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    m: u32,
    member: Vec<bool>,
    points: Vec<u32>,
}

impl PointSet {
    pub fn new<I: IntoIterator<Item = u32>>(m: u32, points: I) -> Result<Self> {
        check_width(m)?;
        let mut member = vec![false; 1 << m];
        for p in points {
            check_value(p, m)?;
            if p == 0 {
                return Err(Error::InvalidParameter(
                    "point sets hold nonzero vectors only".into(),
                ));
            }
            member[p as usize] = true;
        }
        let points = (1..1u32 << m).filter(|&p| member[p as usize]).collect();
        Ok(Self { m, member, points })
    }

    /// All nonzero vectors of a subspace.
    pub fn from_subspace(s: &Subspace) -> Self {
        Self::new(s.n(), s.elements().into_iter().filter(|&x| x != 0))
            .expect("subspace elements fit the ambient width")
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.member[x as usize]
    }

    /// Number of nonzero vectors of `span(basis)` inside the set.
    pub fn count_in(&self, basis: &[u32]) -> u32 {
        let mut x = 0u32;
        let mut hits = 0;
        // Gray-code walk over the nonzero combinations
        for i in 1u32..(1 << basis.len()) {
            x ^= basis[i.trailing_zeros() as usize];
            hits += u32::from(self.member[x as usize]);
        }
        hits
    }

    pub fn map<F: Fn(u32) -> u32>(&self, f: F) -> Self {
        Self::new(self.m, self.points.iter().map(|&p| f(p))).expect("image stays in range")
    }
}

/// `{b != 0 : F_b is not bent}`.
pub fn nonbent_set(f: &Vbf) -> Result<PointSet> {
    let exps = f.component_exponents()?;
    PointSet::new(
        f.m(),
        exps.iter()
            .enumerate()
            .filter(|(_, &l)| l > 0)
            .map(|(i, _)| i as u32 + 1),
    )
}

/// How a family of subspaces is scanned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

impl ScanMode {
    /// Exhaustive when the family has at most `limit` members, else sampled.
    pub fn auto(m: u32, k: u32, limit: u64, samples: u64, seed: u64) -> Self {
        if gaussian_binomial(m, k) <= limit as u128 {
            ScanMode::Exhaustive
        } else {
            ScanMode::Sampled { samples, seed }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanOutcome {
    pub dim: u32,
    pub mode: ScanMode,
    pub scanned: u64,
    pub counterexample: Option<Subspace>,
}

impl ScanOutcome {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Scans `k`-subspaces of F_2^m for one on which `violates` holds. In
/// exhaustive mode the reported counterexample is the first in enumeration
/// order regardless of scheduling.
pub fn scan_subspaces<P>(m: u32, k: u32, mode: ScanMode, violates: P) -> ScanOutcome
where
    P: Fn(&[u32]) -> bool + Sync,
{
    match mode {
        ScanMode::Exhaustive => {
            let patterns = pivot_patterns(m, k);
            let hit = patterns.par_iter().enumerate().find_map_first(|(pi, p)| {
                let mut idx = 0u64;
                let mut found = None;
                let _ = p.for_each_basis(|basis| {
                    idx += 1;
                    if violates(basis) {
                        found = Some(basis.to_vec());
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                });
                found.map(|b| (pi, idx, b))
            });
            match hit {
                None => ScanOutcome {
                    dim: k,
                    mode,
                    scanned: gaussian_binomial(m, k) as u64,
                    counterexample: None,
                },
                Some((pi, idx, basis)) => ScanOutcome {
                    dim: k,
                    mode,
                    scanned: patterns[..pi].iter().map(|p| p.count()).sum::<u64>() + idx,
                    counterexample: Some(Subspace::from_canonical(m, basis)),
                },
            }
        }
        ScanMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..samples {
                let s = random_subspace(m, k, &mut rng);
                if violates(s.basis()) {
                    return ScanOutcome {
                        dim: k,
                        mode,
                        scanned: i + 1,
                        counterexample: Some(s),
                    };
                }
            }
            ScanOutcome {
                dim: k,
                mode,
                scanned: samples,
                counterexample: None,
            }
        }
    }
}

/// Checks that every `k`-subspace meets `set` in an odd number of points.
pub fn odd_intersection_check(set: &PointSet, k: u32, mode: ScanMode) -> ScanOutcome {
    scan_subspaces(set.m(), k, mode, |b| set.count_in(b).is_multiple_of(2))
}

/// Every `k`-subspace meets `set` in at least `fold` points.
pub fn kfold_check(set: &PointSet, k: u32, fold: u32, mode: ScanMode) -> ScanOutcome {
    scan_subspaces(set.m(), k, mode, |b| set.count_in(b) < fold)
}

pub fn is_blocking_set(set: &PointSet, k: u32) -> bool {
    kfold_check(set, k, 1, ScanMode::Exhaustive).ok()
}

/// Depth-first search over canonical bases of subspaces contained in an
/// allowed set (which always contains 0).
///
/// A basis is built in increasing pivot order; each new vector has a pivot
/// above the previous one and zeros at all earlier pivots, so every subspace
/// is produced exactly once.
struct SubspaceSearch<'a> {
    allowed: &'a dyn Fn(u32) -> bool,
    nodes: u64,
    budget: u64,
}

impl SubspaceSearch<'_> {
    fn new(allowed: &dyn Fn(u32) -> bool, budget: u64) -> SubspaceSearch<'_> {
        SubspaceSearch {
            allowed,
            nodes: 0,
            budget,
        }
    }

    fn initial_candidates(&self, m: u32) -> Vec<u32> {
        (1..1u32 << m).filter(|&x| (self.allowed)(x)).collect()
    }

    /// Visits every `target`-dimensional subspace inside the allowed set.
    fn visit<F>(&mut self, m: u32, target: u32, f: &mut F) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[u32]) -> ControlFlow<()>,
    {
        let cands = self.initial_candidates(m);
        let mut basis = Vec::with_capacity(target as usize);
        self.extend(&mut basis, &cands, target, f)
    }

    fn extend<F>(
        &mut self,
        basis: &mut Vec<u32>,
        cands: &[u32],
        target: u32,
        f: &mut F,
    ) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[u32]) -> ControlFlow<()>,
    {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget { nodes: self.budget });
        }
        let missing = target - basis.len() as u32;
        if missing == 0 {
            return Ok(f(basis));
        }
        // the nonzero span of the remaining basis vectors lies in `cands`
        if (cands.len() as u64) < (1u64 << missing) - 1 {
            return Ok(ControlFlow::Continue(()));
        }
        for (i, &x) in cands.iter().enumerate() {
            let p = top_bit(x);
            let next: Vec<u32> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&c| top_bit(c) > p && (c >> p) & 1 == 0)
                .filter(|&c| cands.binary_search(&(c ^ x)).is_ok())
                .collect();
            basis.push(x);
            let flow = self.extend(basis, &next, target, f)?;
            basis.pop();
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

fn find_subspace_in(
    m: u32,
    allowed: &dyn Fn(u32) -> bool,
    dim: u32,
    budget: u64,
) -> Result<(Option<Subspace>, u64)> {
    let mut search = SubspaceSearch::new(allowed, budget);
    let mut found = None;
    let _ = search.visit(m, dim, &mut |b: &[u32]| {
        found = Some(Subspace::from_canonical(m, b.to_vec()));
        ControlFlow::Break(())
    })?;
    Ok((found, search.nodes))
}

/// A maximum-dimension subspace contained in `set ∪ {0}`.
pub fn max_subspace_in(set: &PointSet) -> (u32, Subspace) {
    let found = max_subspace_search(set, u64::MAX);
    (found.dim, found.witness)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InnerSubspace {
    pub dim: u32,
    pub witness: Subspace,
    /// False when the budget ran out; `dim` is then only a lower bound.
    pub exact: bool,
}

/// Iterative deepening over dimensions, each level with its own node budget.
pub fn max_subspace_search(set: &PointSet, budget: u64) -> InnerSubspace {
    let m = set.m();
    let allowed = |x: u32| x == 0 || set.contains(x);
    let mut best = Subspace::zero(m).expect("valid width");
    for d in 1..=m {
        match find_subspace_in(m, &allowed, d, budget) {
            Ok((Some(s), _)) => best = s,
            Ok((None, _)) => break,
            Err(_) => {
                return InnerSubspace {
                    dim: best.dim(),
                    witness: best,
                    exact: false,
                }
            }
        }
    }
    InnerSubspace {
        dim: best.dim(),
        witness: best,
        exact: true,
    }
}

/// Contains a subspace of dimension `m - n/2`.
pub fn is_trivial_blocking(set: &PointSet, n: u32) -> bool {
    let need = set.m().saturating_sub(n / 2);
    max_subspace_in(set).0 >= need
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Minimality {
    pub minimal: bool,
    /// A point whose removal leaves a blocking set.
    pub removable: Option<u32>,
}

/// A blocking set is minimal iff every point `P` has a tangent `k`-space,
/// i.e. one meeting the set in `P` alone.
pub fn minimality_check(set: &PointSet, k: u32) -> Result<Minimality> {
    let m = set.m();
    if m > 10 {
        return Err(Error::InvalidParameter(format!(
            "minimality check supports m <= 10, got {m}"
        )));
    }
    if k == 0 || k > m {
        return Err(Error::InvalidParameter(format!("bad subspace dimension {k}")));
    }
    let removable = set.points().par_iter().find_map_first(|&p| {
        let line = Subspace::span_unchecked(m, [p]);
        let tangent = for_each_superspace(&line, k, |w| {
            if set.count_in(w.basis()) == 1 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .expect("k within range");
        tangent.is_continue().then_some(p)
    });
    Ok(Minimality {
        minimal: removable.is_none(),
        removable,
    })
}

/// Outcome of the search for `V ⊕ W = F_2^n` inside `N ∪ {0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PairOutcome {
    Found { v: Subspace, w: Subspace, nodes: u64 },
    None { nodes: u64 },
    BudgetExhausted { nodes: u64 },
    Skipped,
}

/// Searches `N ∪ {0}` for complementary subspaces. On success `v` has the
/// larger dimension (at least `n/2`).
pub fn complementary_pair_search(set: &PointSet, budget: u64) -> Result<Option<(Subspace, Subspace)>> {
    match pair_search(set, budget) {
        PairOutcome::Found { v, w, .. } => Ok(Some((v, w))),
        PairOutcome::None { .. } => Ok(None),
        PairOutcome::BudgetExhausted { nodes } => Err(Error::Budget { nodes }),
        PairOutcome::Skipped => Ok(None),
    }
}

pub fn pair_search(set: &PointSet, budget: u64) -> PairOutcome {
    let n = set.m();
    let inner = max_subspace_search(set, budget);
    // an inexact result is a lower bound only, so nothing can be skipped
    let max_dim = if inner.exact { inner.dim } else { n };
    let mut nodes = 0u64;
    let in_set = |x: u32| x == 0 || set.contains(x);
    for small in (0..=n / 2).rev() {
        let big = n - small;
        if big > max_dim {
            continue;
        }
        let mut search = SubspaceSearch::new(&in_set, budget.saturating_sub(nodes));
        let mut found: Option<(Subspace, Subspace)> = None;
        let mut inner_err = None;
        let mut inner_nodes = 0u64;
        let visited = search.visit(n, big, &mut |vb: &[u32]| {
            let v = Subspace::from_canonical(n, vb.to_vec());
            let outside_v = |x: u32| x == 0 || (set.contains(x) && !v.contains(x));
            let remaining = budget.saturating_sub(nodes + inner_nodes);
            match find_subspace_in(n, &outside_v, small, remaining) {
                Ok((Some(w), used)) => {
                    inner_nodes += used;
                    found = Some((v, w));
                    ControlFlow::Break(())
                }
                Ok((None, used)) => {
                    inner_nodes += used;
                    ControlFlow::Continue(())
                }
                Err(e) => {
                    inner_err = Some(e);
                    ControlFlow::Break(())
                }
            }
        });
        nodes += search.nodes + inner_nodes;
        if visited.is_err() || inner_err.is_some() {
            return PairOutcome::BudgetExhausted { nodes: nodes.min(budget) };
        }
        if let Some((v, w)) = found {
            return PairOutcome::Found { v, w, nodes };
        }
    }
    PairOutcome::None { nodes }
}

/// Closed-form thresholds compared against `|N_F|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Smallest blocking set: `2^(m - n/2) - 1`.
    pub bose_burton: u64,
    /// Smallest non-trivial blocking set, when `m - n/2 >= 3`.
    pub govaerts_storme: Option<u64>,
    /// Lower bound for quadratic APN functions with `n = m >= 6` even;
    /// equality is possible only at `n = 8`.
    pub apn_bent_bound: Option<u64>,
    /// Size required of `N_F` for CCZ-equivalence to a permutation.
    pub ccz_size_threshold: Option<u64>,
}

fn smallest_nontrivial(e: u32) -> Option<u64> {
    (e >= 3).then(|| (1u64 << e) + (1u64 << (e - 2)) + (1u64 << (e - 3)) - 1)
}

pub fn bounds(n: u32, m: u32) -> Bounds {
    let e = m.saturating_sub(n / 2);
    let square_even = n == m && n.is_multiple_of(2);
    Bounds {
        bose_burton: (1u64 << e) - 1,
        govaerts_storme: smallest_nontrivial(e),
        apn_bent_bound: (square_even && n >= 6).then(|| smallest_nontrivial(n / 2).unwrap()),
        ccz_size_threshold: square_even.then(|| 3 * ((1u64 << (n / 2)) - 1)),
    }
}

/// Tuning knobs for [`blocking_report`].
#[derive(Clone, Debug)]
pub struct BlockingOptions {
    /// Families larger than this are sampled instead of scanned.
    pub exhaustive_limit: u64,
    pub samples: u64,
    pub seed: u64,
    pub pair_budget: u64,
    /// Node budget per dimension of the maximum-subspace search.
    pub search_budget: u64,
    pub minimality_max_m: u32,
    pub skip_pair: bool,
}

impl Default for BlockingOptions {
    fn default() -> Self {
        Self {
            exhaustive_limit: 2_000_000,
            samples: 100_000,
            seed: 0,
            pair_budget: DEFAULT_PAIR_BUDGET,
            search_budget: DEFAULT_PAIR_BUDGET,
            minimality_max_m: 8,
            skip_pair: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockingReport {
    pub n: u32,
    pub m: u32,
    pub n_size: u64,
    pub mod4: u64,
    pub scan_dim: u32,
    pub odd: ScanOutcome,
    pub is_blocking: bool,
    pub minimality: Option<Minimality>,
    pub max_inner_dim: u32,
    pub max_inner_witness: Subspace,
    pub max_inner_exact: bool,
    pub is_trivial: bool,
    pub threefold: Option<ScanOutcome>,
    pub pair: PairOutcome,
    pub bounds: Bounds,
}

impl BlockingReport {
    pub fn threefold_ok(&self) -> Option<bool> {
        self.threefold.as_ref().map(ScanOutcome::ok)
    }
}

/// Full blocking-set analysis of `N_F` for a plateaued function on `n` inputs.
pub fn blocking_report(set: &PointSet, n: u32, opts: &BlockingOptions) -> Result<BlockingReport> {
    let m = set.m();
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "blocking analysis needs an even input width, got {n}"
        )));
    }
    let k = n / 2 + 1;
    if k > m {
        return Err(Error::InvalidParameter(format!(
            "no subspaces of dimension {k} in F_2^{m}"
        )));
    }
    let mode = ScanMode::auto(m, k, opts.exhaustive_limit, opts.samples, opts.seed);
    let odd = odd_intersection_check(set, k, mode);
    let is_blocking = if odd.ok() {
        true
    } else {
        kfold_check(set, k, 1, mode).ok()
    };
    let minimality = if is_blocking && m <= opts.minimality_max_m {
        Some(minimality_check(set, k)?)
    } else {
        None
    };
    let inner = max_subspace_search(set, opts.search_budget);
    let (max_inner_dim, max_inner_witness, max_inner_exact) = (inner.dim, inner.witness, inner.exact);
    let is_trivial = max_inner_dim >= m.saturating_sub(n / 2);
    let square = n == m;
    let threefold = square.then(|| kfold_check(set, k, 3, mode));
    let pair = if square && !opts.skip_pair {
        pair_search(set, opts.pair_budget)
    } else {
        PairOutcome::Skipped
    };
    Ok(BlockingReport {
        n,
        m,
        n_size: set.len() as u64,
        mod4: set.len() as u64 % 4,
        scan_dim: k,
        odd,
        is_blocking,
        minimality,
        max_inner_dim,
        max_inner_witness,
        max_inner_exact,
        is_trivial,
        threefold,
        pair,
        bounds: bounds(n, m),
    })
}

/// Necessary conditions for CCZ-equivalence to a permutation, evaluated on
/// the non-bent set of a quadratic function with `n = m` even.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CczReport {
    pub n: u32,
    pub n_size: u64,
    pub size_threshold: u64,
    pub size_ok: bool,
    pub threefold: ScanOutcome,
    pub pair: PairOutcome,
    /// Some necessary condition failed, so no permutation is CCZ-equivalent.
    pub certified_not_permutation: bool,
    pub reasons: Vec<String>,
}

pub fn ccz_check_set(set: &PointSet, mode: ScanMode, pair_budget: u64) -> Result<CczReport> {
    let n = set.m();
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "CCZ conditions need an even width, got {n}"
        )));
    }
    let threshold = 3 * ((1u64 << (n / 2)) - 1);
    let size_ok = set.len() as u64 >= threshold;
    let mut reasons = Vec::new();
    if !size_ok {
        reasons.push(format!(
            "|N_F| = {} < 3(2^{} - 1) = {threshold}",
            set.len(),
            n / 2
        ));
    }
    let threefold = kfold_check(set, n / 2 + 1, 3, mode);
    if let Some(w) = &threefold.counterexample {
        reasons.push(format!(
            "subspace {:?} meets N_F in {} < 3 points",
            w.basis(),
            set.count_in(w.basis())
        ));
    }
    // the size test alone already certifies; skip the exponential search
    let pair = if size_ok && threefold.ok() {
        pair_search(set, pair_budget)
    } else {
        PairOutcome::Skipped
    };
    if matches!(pair, PairOutcome::None { .. }) {
        reasons.push("N_F ∪ {0} holds no complementary pair of subspaces".into());
    }
    Ok(CczReport {
        n,
        n_size: set.len() as u64,
        size_threshold: threshold,
        size_ok,
        threefold,
        pair,
        certified_not_permutation: !reasons.is_empty(),
        reasons,
    })
}

pub fn ccz_necessary_report(f: &Vbf, mode: ScanMode, pair_budget: u64) -> Result<CczReport> {
    if f.n() != f.m() {
        return Err(Error::WidthMismatch {
            left: f.n(),
            right: f.m(),
        });
    }
    ccz_check_set(&nonbent_set(f)?, mode, pair_budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::linalg::{enumerate_subspaces, is_direct_complement, rref};
    use rand::Rng;

    fn cube(n: u32) -> Vbf {
        FieldSpec::default_for(n).unwrap().monomial_vbf(3)
    }

    // the vector b with <b, y> = Tr(c y) for every y
    fn trace_dual(fs: &FieldSpec, c: u32) -> u32 {
        (0..fs.n()).fold(0, |b, j| b | fs.trace(fs.mul(c, 1 << j)) << j)
    }

    fn all_nonzero(m: u32) -> PointSet {
        PointSet::new(m, 1..1u32 << m).unwrap()
    }

    #[test]
    fn cube_nonbent_set_is_the_cubes() {
        let fs = FieldSpec::default_for(6).unwrap();
        let n = nonbent_set(&cube(6)).unwrap();
        let mut cubes: Vec<u32> = (1..64).map(|x| trace_dual(&fs, fs.pow(x, 3))).collect();
        cubes.sort_unstable();
        cubes.dedup();
        assert_eq!(n.points(), &cubes[..]);
        assert_eq!(n.len(), 21);
        assert_eq!(nonbent_set(&cube(8)).unwrap().len(), 85);
    }

    #[test]
    fn count_in_matches_enumeration() {
        let n = nonbent_set(&cube(6)).unwrap();
        for s in enumerate_subspaces(6, 3).take(200) {
            let direct = s.elements().iter().filter(|&&x| x != 0 && n.contains(x)).count();
            assert_eq!(n.count_in(s.basis()) as usize, direct);
        }
    }

    #[test]
    fn odd_intersections_trivial_sets() {
        let full = all_nonzero(5);
        assert!(odd_intersection_check(&full, 3, ScanMode::Exhaustive).ok());
        let empty = PointSet::new(5, []).unwrap();
        let out = odd_intersection_check(&empty, 3, ScanMode::Exhaustive);
        assert!(!out.ok());
        assert_eq!(out.scanned, 1);
    }

    #[test]
    fn cube_six_scan() {
        let n = nonbent_set(&cube(6)).unwrap();
        let out = odd_intersection_check(&n, 4, ScanMode::Exhaustive);
        assert!(out.ok());
        assert_eq!(out.scanned, 651);
        assert!(is_blocking_set(&n, 4));
        // odd at n/2 + 1 implies odd at every larger dimension
        assert!(odd_intersection_check(&n, 5, ScanMode::Exhaustive).ok());
    }

    #[test]
    fn hyperplane_blocks() {
        let h = crate::linalg::hyperplane(0b1011, 5).unwrap();
        let set = PointSet::from_subspace(&h);
        for k in 2..=5 {
            assert!(is_blocking_set(&set, k));
        }
        let small = PointSet::new(5, [1, 2]).unwrap();
        assert!(!kfold_check(&small, 3, 3, ScanMode::Exhaustive).ok());
    }

    #[test]
    fn max_subspace_examples() {
        let (d, w) = max_subspace_in(&PointSet::new(4, []).unwrap());
        assert_eq!((d, w.dim()), (0, 0));
        let s = rref(&[0b0110, 0b1001], 4).unwrap();
        let (d, w) = max_subspace_in(&PointSet::from_subspace(&s));
        assert_eq!(d, 2);
        assert_eq!(w, s);

        let fs = FieldSpec::default_for(6).unwrap();
        let n = nonbent_set(&cube(6)).unwrap();
        let (d, w) = max_subspace_in(&n);
        assert!(d >= 3);
        assert!(w.elements().iter().all(|&x| x == 0 || n.contains(x)));
        let gf8: Vec<u32> = fs.subfield(3).unwrap().iter().map(|&c| trace_dual(&fs, c)).collect();
        assert!(gf8.iter().all(|&x| x == 0 || n.contains(x)));
        assert_eq!(rref(&gf8, 6).unwrap().dim(), 3);
    }

    #[test]
    fn triviality() {
        assert!(is_trivial_blocking(&nonbent_set(&cube(6)).unwrap(), 6));
        assert!(!is_trivial_blocking(&nonbent_set(&cube(8)).unwrap(), 8));
        assert!(is_trivial_blocking(&all_nonzero(6), 6));
    }

    // brute-force minimality: remove each point and rescan
    fn minimal_by_removal(set: &PointSet, k: u32) -> bool {
        set.points().iter().all(|&p| {
            let rest = PointSet::new(set.m(), set.points().iter().copied().filter(|&x| x != p)).unwrap();
            !is_blocking_set(&rest, k)
        })
    }

    #[test]
    fn minimality_examples() {
        let n = nonbent_set(&cube(6)).unwrap();
        let res = minimality_check(&n, 4).unwrap();
        assert!(!res.minimal);
        let p = res.removable.unwrap();
        let rest = PointSet::new(6, n.points().iter().copied().filter(|&x| x != p)).unwrap();
        assert!(is_blocking_set(&rest, 4));
        assert_eq!(minimal_by_removal(&n, 4), res.minimal);

        // an (m - k + 1)-space is a minimal blocking set for k-spaces
        let s = rref(&[0b000111, 0b011000, 0b100001], 6).unwrap();
        let set = PointSet::from_subspace(&s);
        let res = minimality_check(&set, 4).unwrap();
        assert!(res.minimal);
        assert!(minimal_by_removal(&set, 4));
    }

    #[test]
    fn small_odd_blocking_sets_are_minimal() {
        // sets with odd intersections and |B| <= 2^(m-k+2) - 2 are minimal
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (m, k) = (6, 4);
        let mut checked = 0;
        for _ in 0..60 {
            let mut member = [false; 64];
            for _ in 0..3 {
                let s = random_subspace(m, m - k + 1, &mut rng);
                for x in s.elements() {
                    member[x as usize] ^= true;
                }
            }
            if rng.gen_bool(0.5) {
                member.iter_mut().for_each(|b| *b = false);
                for x in random_subspace(m, m - k + 1, &mut rng).elements() {
                    member[x as usize] = true;
                }
            }
            let set = PointSet::new(m, (1..64).filter(|&x| member[x as usize])).unwrap();
            let odd = odd_intersection_check(&set, k, ScanMode::Exhaustive).ok();
            if odd && set.len() as u64 <= (1 << (m - k + 2)) - 2 {
                checked += 1;
                assert!(minimality_check(&set, k).unwrap().minimal);
            }
        }
        assert!(checked > 10);
    }

    #[test]
    fn pair_search_examples() {
        let full = all_nonzero(4);
        let (v, w) = complementary_pair_search(&full, DEFAULT_PAIR_BUDGET).unwrap().unwrap();
        assert!(is_direct_complement(&v, &w).unwrap());

        // too few points to host V ⊕ W
        let tiny = PointSet::new(6, [1, 2, 3, 4, 8, 16]).unwrap();
        assert_eq!(complementary_pair_search(&tiny, DEFAULT_PAIR_BUDGET).unwrap(), None);

        let n = nonbent_set(&cube(6)).unwrap();
        let (v, w) = complementary_pair_search(&n, DEFAULT_PAIR_BUDGET).unwrap().unwrap();
        assert!(is_direct_complement(&v, &w).unwrap());
        assert_eq!((v.dim(), w.dim()), (3, 3));
        for x in v.elements().into_iter().chain(w.elements()) {
            assert!(x == 0 || n.contains(x));
        }

        assert!(matches!(
            complementary_pair_search(&n, 3),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn cube_eight_has_no_pair() {
        let n = nonbent_set(&cube(8)).unwrap();
        assert!(matches!(pair_search(&n, DEFAULT_PAIR_BUDGET), PairOutcome::None { .. }));
    }

    #[test]
    fn bound_values() {
        let b = bounds(6, 6);
        assert_eq!(b.bose_burton, 7);
        assert_eq!(b.govaerts_storme, Some(10));
        assert_eq!(b.apn_bent_bound, Some(10));
        assert_eq!(b.ccz_size_threshold, Some(21));
        assert_eq!(bounds(8, 8).apn_bent_bound, Some(21));
        assert_eq!(bounds(10, 10).apn_bent_bound, Some(43));
        assert_eq!(bounds(8, 8).ccz_size_threshold, Some(45));
        assert_eq!(bounds(4, 4).govaerts_storme, None);
    }

    #[test]
    fn ccz_size_certificate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut pts = std::collections::BTreeSet::new();
        while pts.len() < 17 {
            pts.insert(rng.gen_range(1..256u32));
        }
        let set = PointSet::new(8, pts).unwrap();
        let r = ccz_check_set(&set, ScanMode::Exhaustive, 1000).unwrap();
        assert!(!r.size_ok);
        assert_eq!(r.size_threshold, 45);
        assert!(r.certified_not_permutation);
    }

    #[test]
    fn cube_six_ccz_report() {
        let r = ccz_necessary_report(&cube(6), ScanMode::Exhaustive, DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!((r.n_size, r.size_threshold), (21, 21));
        assert!(r.size_ok);
        // a pair exists, so every 4-space must meet N_F at least 3 times
        assert!(matches!(r.pair, PairOutcome::Found { .. }));
        assert!(r.threefold.ok());
        assert!(!r.certified_not_permutation);
    }

    #[test]
    fn report_for_cube_six() {
        let n = nonbent_set(&cube(6)).unwrap();
        let r = blocking_report(&n, 6, &BlockingOptions::default()).unwrap();
        assert_eq!((r.n_size, r.mod4), (21, 1));
        assert!(r.odd.ok() && r.is_blocking && r.is_trivial);
        assert!(r.max_inner_dim >= 3);
        assert_eq!(r.minimality.as_ref().map(|x| x.minimal), Some(false));
        assert_eq!(r.threefold_ok(), Some(true));
    }

    #[test]
    fn pair_implies_threefold() {
        // N = V ∪ W plus the points forced by odd intersections
        let v = rref(&[0b000001, 0b000010, 0b000100], 6).unwrap();
        let w = rref(&[0b001000, 0b010000, 0b100000], 6).unwrap();
        let n = nonbent_set(&cube(6)).unwrap();
        let _ = n;
        // a set with a complementary pair and odd intersections is 3-fold
        let mut member = [false; 64];
        for x in v.elements().into_iter().chain(w.elements()) {
            member[x as usize] = true;
        }
        // symmetric difference with a third 3-space restores odd parity
        let u = rref(&[0b001001, 0b010010, 0b100100], 6).unwrap();
        for x in u.elements() {
            member[x as usize] ^= true;
        }
        member[0] = false;
        let set = PointSet::new(6, (1..64).filter(|&x| member[x as usize])).unwrap();
        if odd_intersection_check(&set, 4, ScanMode::Exhaustive).ok()
            && complementary_pair_search(&set, DEFAULT_PAIR_BUDGET).unwrap().is_some()
        {
            assert!(kfold_check(&set, 4, 3, ScanMode::Exhaustive).ok());
            assert!(set.len() as u64 >= 21);
        }
    }

    #[test]
    fn sampled_mode_records_seed() {
        let n = nonbent_set(&cube(6)).unwrap();
        let mode = ScanMode::Sampled { samples: 500, seed: 9 };
        let out = odd_intersection_check(&n, 4, mode);
        assert!(out.ok());
        assert_eq!(out.scanned, 500);
        assert_eq!(out.mode, mode);
    }
}

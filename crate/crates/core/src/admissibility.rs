//! Necessary conditions on the amplitude distribution of a quadratic APN
//! function with `n` even, encoded as independent rules over the
//! multiplicities `k_l` of the exponents `l = 2, 4, ..., n`.
//!
//! A type passing every rule is *not excluded*; nothing here claims that a
//! function with that distribution exists.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::PartitionType;
use crate::vbf::AmplitudeDistribution;

/// Multiplicities of the non-bent exponents. The bent count `k_0` is implied.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DistributionType {
    pub n: u32,
    pub counts: BTreeMap<u32, u64>,
}

impl DistributionType {
    pub fn new<I: IntoIterator<Item = (u32, u64)>>(n: u32, counts: I) -> Result<Self> {
        if !n.is_multiple_of(2) || !(2..=16).contains(&n) {
            return Err(Error::InvalidParameter(format!(
                "distribution types need an even n in 2..=16, got {n}"
            )));
        }
        let mut map = BTreeMap::new();
        for (l, k) in counts {
            if l == 0 || l % 2 != 0 || l > n {
                return Err(Error::InvalidParameter(format!(
                    "exponent {l} is not an even value in 2..={n}"
                )));
            }
            if k > 0 {
                *map.entry(l).or_insert(0) += k;
            }
        }
        Ok(Self { n, counts: map })
    }

    pub fn from_amplitude(d: &AmplitudeDistribution) -> Result<Self> {
        Self::new(d.n, d.counts.iter().filter(|(&l, _)| l > 0).map(|(&l, &k)| (l, k)))
    }

    pub fn from_partition_type(n: u32, t: &PartitionType) -> Result<Self> {
        Self::new(n, t.0.iter().copied())
    }

    pub fn count(&self, l: u32) -> u64 {
        self.counts.get(&l).copied().unwrap_or(0)
    }

    pub fn n_size(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `k_0 = 2^n - 1 - |N_F|`, negative when the type is oversized.
    pub fn bent_count(&self) -> i64 {
        (1i64 << self.n) - 1 - self.n_size() as i64
    }

    pub fn max_dim(&self) -> Option<u32> {
        self.counts.keys().next_back().copied()
    }

    pub fn min_dim(&self) -> Option<u32> {
        self.counts.keys().next().copied()
    }

    pub fn second_min_dim(&self) -> Option<u32> {
        self.counts.keys().nth(1).copied()
    }

    pub fn partition_type(&self) -> PartitionType {
        PartitionType(self.counts.iter().map(|(&l, &k)| (l, k)).collect())
    }

    /// `[0^k0, 2^k2, ...]`.
    pub fn amplitude_string(&self) -> String {
        let mut parts = vec![format!("0^{}", self.bent_count())];
        parts.extend(self.counts.iter().map(|(l, k)| format!("{l}^{k}")));
        format!("[{}]", parts.join(","))
    }

    /// Multiplicities from the largest exponent down; used for ordering.
    fn key(&self) -> Vec<u64> {
        (1..=self.n / 2).rev().map(|i| self.count(2 * i)).collect()
    }
}

impl fmt::Display for DistributionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.partition_type())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleVerdict {
    pub rule: &'static str,
    pub pass: bool,
    /// False when the rule's hypotheses do not hold (the rule then passes).
    pub applicable: bool,
    pub bound: Option<u64>,
    pub actual: u64,
    pub detail: String,
}

impl RuleVerdict {
    fn vacuous(rule: &'static str, actual: u64, detail: impl Into<String>) -> Self {
        Self {
            rule,
            pass: true,
            applicable: false,
            bound: None,
            actual,
            detail: detail.into(),
        }
    }

    fn check(rule: &'static str, pass: bool, bound: u64, actual: u64, detail: String) -> Self {
        Self {
            rule,
            pass,
            applicable: true,
            bound: Some(bound),
            actual,
            detail,
        }
    }
}

fn pow2(e: u32) -> u64 {
    1u64 << e
}

/// `sum_{i=0}^{s-2} 2^(ik)`, zero when `s < 2`.
fn geometric(s: u32, k: u32) -> u64 {
    (0..s.saturating_sub(1)).map(|i| pow2(i * k)).sum()
}

pub fn rule_packing(t: &DistributionType) -> RuleVerdict {
    let covered: u64 = t.counts.iter().map(|(&l, &k)| k * (pow2(l) - 1)).sum();
    let target = pow2(t.n) - 1;
    RuleVerdict::check(
        "packing",
        covered == target,
        target,
        covered,
        format!("sum k_l (2^l - 1) = {covered}, need {target}"),
    )
}

pub fn rule_dimension_bounds(t: &DistributionType) -> RuleVerdict {
    let n = t.n;
    let dims: Vec<(u32, u64)> = t.counts.iter().map(|(&l, &k)| (l, k)).collect();
    let mut failures = Vec::new();
    for &(l, k) in &dims {
        if 2 * l > n && k > 1 {
            failures.push(format!("k_{l} = {k} > 1 with {l} > {}", n / 2));
        }
    }
    for (i, &(a, _)) in dims.iter().enumerate() {
        for &(b, _) in &dims[i + 1..] {
            if a + b > n {
                failures.push(format!("dimensions {a} + {b} > {n}"));
            }
        }
    }
    let pass = failures.is_empty();
    RuleVerdict {
        rule: "dimension_bounds",
        pass,
        applicable: true,
        bound: Some(n as u64),
        actual: t.max_dim().unwrap_or(0) as u64,
        detail: if pass {
            "all dimension sums within n".into()
        } else {
            failures.join("; ")
        },
    }
}

pub fn rule_no_full_amplitude(t: &DistributionType) -> RuleVerdict {
    let k = t.count(t.n);
    RuleVerdict::check(
        "no_full_amplitude",
        k == 0,
        0,
        k,
        format!("k_{} = {k}", t.n),
    )
}

pub fn rule_tail(t: &DistributionType) -> RuleVerdict {
    let (Some(d1), Some(d2)) = (t.min_dim(), t.second_min_dim()) else {
        return RuleVerdict::vacuous("tail", t.n_size(), "fewer than two dimensions");
    };
    let k = t.count(d1);
    let q = pow2(d2 - d1);
    let divisible = k.is_multiple_of(q);
    let mut cases: Vec<(&str, bool, u64, String)> = Vec::new();
    if !divisible && d2 < 2 * d1 {
        let b = pow2(d1) + 1;
        cases.push(("i", k >= b, b, format!("k >= {b}")));
    }
    if !divisible && d2 >= 2 * d1 {
        let spread = (pow2(d2) - 1) / (pow2(d1) - 1);
        let exact = d2 % d1 == 0 && k == spread;
        let b = 2 * q + 1;
        let need = if d2 % d1 == 0 {
            format!("k = {spread} or k >= {b}")
        } else {
            format!("k >= {b}")
        };
        cases.push(("ii", exact || k >= b, b, need));
    }
    if divisible && d2 <= 2 * d1 {
        let b = pow2(d2) - pow2(d1) + q;
        cases.push(("iii", k >= b, b, format!("k >= {b}")));
    }
    if divisible && d2 >= 2 * d1 {
        let b = pow2(d2);
        cases.push(("iv", k >= b, b, format!("k >= {b}")));
    }
    let pass = cases.iter().all(|c| c.1);
    let bound = cases.iter().map(|c| c.2).max();
    let detail = cases
        .iter()
        .map(|(id, ok, _, need)| {
            format!("case {id}: {need} ({})", if *ok { "holds" } else { "fails" })
        })
        .collect::<Vec<_>>()
        .join("; ");
    RuleVerdict {
        rule: "tail",
        pass,
        applicable: true,
        bound,
        actual: k,
        detail: format!("d1 = {d1}, d2 = {d2}, k = {k}; {detail}"),
    }
}

pub fn rule_mod4(t: &DistributionType) -> RuleVerdict {
    let size = t.n_size();
    RuleVerdict::check(
        "mod4",
        size % 4 == 1,
        1,
        size,
        format!("|N_F| = {size} = {} mod 4", size % 4),
    )
}

/// `2^(n/2) + 2^(n/2-2) + 2^(n/2-3) - 1` for `n >= 6`.
pub fn bent_bound(n: u32) -> Option<u64> {
    (n >= 6).then(|| pow2(n / 2) + pow2(n / 2 - 2) + pow2(n / 2 - 3) - 1)
}

pub fn rule_bent_lower_bound(t: &DistributionType) -> RuleVerdict {
    let size = t.n_size();
    let Some(b) = bent_bound(t.n) else {
        return RuleVerdict::vacuous("bent_lower_bound", size, "needs n >= 6");
    };
    let strict = t.n != 8;
    let pass = if strict { size > b } else { size >= b };
    let op = if strict { ">" } else { ">=" };
    RuleVerdict::check(
        "bent_lower_bound",
        pass,
        b,
        size,
        format!("|N_F| = {size}, need {op} {b}"),
    )
}

/// Lower bound on `|N_F|` from the maximum exponent `k <= n/2`.
pub fn lb1_bound(n: u32, k: u32) -> Option<u64> {
    if k == 0 || 2 * k > n {
        return None;
    }
    let (s, r) = (n / k, n % k);
    Some(if r == 0 {
        (pow2(n) - 1) / (pow2(k) - 1)
    } else {
        1 + pow2((k + r).div_ceil(2)) + pow2(k + r) * geometric(s, k)
    })
}

/// Upper bound on `|N_F|` when every non-bent exponent is at least `k`.
pub fn ub_bound(n: u32, k: u32) -> u64 {
    let (s, r) = (n / k, n % k);
    1 + pow2(k + r) * geometric(s, k)
}

pub fn lb2_bound(k: u32, l: u32) -> u64 {
    pow2(k) + pow2(l) + 1
}

pub fn rule_lb1(t: &DistributionType) -> RuleVerdict {
    let size = t.n_size();
    match t.max_dim().and_then(|k| lb1_bound(t.n, k).map(|b| (k, b))) {
        None => RuleVerdict::vacuous("lb1", size, "maximum exponent exceeds n/2"),
        Some((k, b)) => RuleVerdict::check(
            "lb1",
            size >= b,
            b,
            size,
            format!("max exponent {k}: |N_F| = {size}, need >= {b}"),
        ),
    }
}

pub fn rule_lb2(t: &DistributionType) -> RuleVerdict {
    let size = t.n_size();
    let Some(k) = t.max_dim() else {
        return RuleVerdict::vacuous("lb2", size, "no non-bent components");
    };
    // the bound grows with l, so the largest qualifying l is the strongest
    let l = t
        .counts
        .keys()
        .copied()
        .filter(|&l| l >= 2 && l + k < t.n && l != k)
        .max();
    match l {
        None => RuleVerdict::vacuous("lb2", size, format!("no exponent l with 2 <= l < {} - {k}, l != {k}", t.n)),
        Some(l) => {
            let b = lb2_bound(k, l);
            RuleVerdict::check(
                "lb2",
                size >= b,
                b,
                size,
                format!("k = {k}, l = {l}: |N_F| = {size}, need >= {b}"),
            )
        }
    }
}

pub fn rule_ub(t: &DistributionType) -> RuleVerdict {
    let size = t.n_size();
    let Some(k) = t.min_dim() else {
        return RuleVerdict::vacuous("ub", size, "no non-bent components");
    };
    let b = ub_bound(t.n, k);
    RuleVerdict::check(
        "ub",
        size <= b,
        b,
        size,
        format!("min exponent {k}: |N_F| = {size}, need <= {b}"),
    )
}

pub const RULES: [fn(&DistributionType) -> RuleVerdict; 9] = [
    rule_packing,
    rule_dimension_bounds,
    rule_no_full_amplitude,
    rule_tail,
    rule_mod4,
    rule_bent_lower_bound,
    rule_lb1,
    rule_lb2,
    rule_ub,
];

/// Every rule evaluated, in a fixed order.
pub fn evaluate(t: &DistributionType) -> Vec<RuleVerdict> {
    RULES.iter().map(|rule| rule(t)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evaluated {
    #[serde(rename = "type")]
    pub dtype: DistributionType,
    pub partition_type: String,
    pub amplitude_distribution: String,
    pub status: &'static str,
    pub verdicts: Vec<RuleVerdict>,
}

impl Evaluated {
    fn new(dtype: DistributionType) -> Self {
        let verdicts = evaluate(&dtype);
        let admissible = verdicts.iter().all(|v| v.pass);
        Self {
            partition_type: dtype.to_string(),
            amplitude_distribution: dtype.amplitude_string(),
            status: if admissible { "not excluded" } else { "excluded" },
            dtype,
            verdicts,
        }
    }

    pub fn admissible(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failing_rules(&self) -> Vec<&'static str> {
        self.verdicts.iter().filter(|v| !v.pass).map(|v| v.rule).collect()
    }
}

/// All non-negative solutions of the packing equation on even dimensions.
pub fn packing_solutions(n: u32) -> Vec<DistributionType> {
    fn go(n: u32, l: u32, rem: u64, acc: &mut Vec<(u32, u64)>, out: &mut Vec<DistributionType>) {
        let size = pow2(l) - 1;
        if l == 2 {
            if rem.is_multiple_of(size) {
                acc.push((2, rem / size));
                out.push(DistributionType::new(n, acc.iter().copied()).expect("valid exponents"));
                acc.pop();
            }
            return;
        }
        for k in 0..=rem / size {
            acc.push((l, k));
            go(n, l - 2, rem - k * size, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, pow2(n) - 1, &mut Vec::new(), &mut out);
    out
}

/// Distribution types for `n` that no rule excludes, in canonical order
/// (lexicographically decreasing multiplicities, largest exponent first).
/// With `verbose`, rejected packing solutions are included too.
pub fn enumerate_admissible(n: u32, verbose: bool) -> Result<Vec<Evaluated>> {
    if !n.is_multiple_of(2) || !(4..=12).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "enumeration supports even n in 4..=12, got {n}"
        )));
    }
    let mut out: Vec<Evaluated> = packing_solutions(n)
        .into_iter()
        .map(Evaluated::new)
        .filter(|e| verbose || e.admissible())
        .collect();
    out.sort_by_key(|e| std::cmp::Reverse(e.dtype.key()));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum BoundLabel {
    A,
    B,
    C,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundComparison {
    pub n: u32,
    pub k: u32,
    /// The bound that dominates in this parameter regime.
    pub regime: BoundLabel,
    pub a: Option<u64>,
    pub b: u64,
    pub c: Option<u64>,
    /// The exponent `l` used for bound C (the largest admissible one).
    pub c_exponent: Option<u32>,
    /// Labels attaining the maximum among the applicable bounds.
    pub strongest: Vec<BoundLabel>,
}

/// Compares the three lower bounds on `|N_F|` for linearity `2^((n+k)/2)`.
pub fn bound_comparison(n: u32, k: u32) -> Result<BoundComparison> {
    if !n.is_multiple_of(2) || !(6..=16).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "bound comparison needs an even n in 6..=16, got {n}"
        )));
    }
    if !k.is_multiple_of(2) || k < 2 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "linearity exponent must be even with 2 <= k < n, got {k}"
        )));
    }
    let a = lb1_bound(n, k);
    let b = bent_bound(n).expect("n >= 6");
    let c_exponent = (2..n.saturating_sub(k)).rev().find(|&l| l % 2 == 0 && l != k);
    let c = c_exponent.map(|l| lb2_bound(k, l));
    let regime = match (2 * k).cmp(&n) {
        std::cmp::Ordering::Less => BoundLabel::A,
        std::cmp::Ordering::Equal => BoundLabel::B,
        std::cmp::Ordering::Greater => BoundLabel::C,
    };
    let values = [(BoundLabel::A, a), (BoundLabel::B, Some(b)), (BoundLabel::C, c)];
    let best = values.iter().filter_map(|(_, v)| *v).max().expect("B always applies");
    let strongest = values
        .iter()
        .filter(|(_, v)| *v == Some(best))
        .map(|(label, _)| *label)
        .collect();
    Ok(BoundComparison {
        n,
        k,
        regime,
        a,
        b,
        c,
        c_exponent,
        strongest,
    })
}

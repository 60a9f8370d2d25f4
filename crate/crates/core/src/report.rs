//! One-shot analysis of a function, collected into a serializable report.

use std::time::Instant;

use serde::Serialize;

use crate::admissibility::{enumerate_admissible, evaluate, DistributionType, RuleVerdict};
use crate::blocking::{blocking_report, nonbent_set, BlockingOptions, BlockingReport};
use crate::error::{Error, Result};
use crate::partition::{build_partition, partition_type, verify_dim_amplitude, verify_partition};
use crate::vbf::{AmplitudeDistribution, Vbf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct AnalysisOptions {
    pub skip_blocking: bool,
    pub expect_crooked: bool,
    pub record_timing: bool,
    pub blocking: BlockingOptions,
}


#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Source {
    pub name: String,
    pub modulus: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionSummary {
    #[serde(rename = "type")]
    pub ptype: String,
    pub members: usize,
    pub verified: bool,
    pub dims_match_amplitudes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub source: Source,
    pub n: u32,
    pub m: u32,
    pub degree: u32,
    pub differential_uniformity: u32,
    pub is_apn: bool,
    pub is_quadratic: bool,
    pub plateaued: bool,
    pub linearity: u32,
    pub amplitude_distribution: Option<String>,
    pub amplitude_counts: Option<AmplitudeDistribution>,
    pub fourth_moment_ok: Option<bool>,
    pub partition: Option<PartitionSummary>,
    pub partition_error: Option<String>,
    pub nonbent_size: Option<u64>,
    pub blocking: Option<BlockingReport>,
    pub rule_verdicts: Option<Vec<RuleVerdict>>,
    /// The distribution passes every rule ("not excluded").
    pub admissible: Option<bool>,
    pub violations: Vec<String>,
    pub timing_ms: Option<u64>,
}

pub fn analyze(f: &Vbf, source: Source, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let start = Instant::now();
    let (n, m) = (f.n(), f.m());
    let is_apn = f.is_apn();
    let is_quadratic = f.is_quadratic();
    let square = n == m;
    let quad_apn = square && is_apn && is_quadratic;
    let mut violations = Vec::new();

    let dist = match f.amplitude_distribution() {
        Ok(d) => Some(d),
        Err(Error::NotPlateaued { .. }) => None,
        Err(e) => return Err(e),
    };
    let plateaued = dist.is_some();
    if quad_apn && !plateaued {
        violations.push("quadratic function with a non-plateaued component".into());
    }

    let fourth_moment_ok = if square && plateaued {
        let ok = f.fourth_moment_check()?;
        if ok != is_apn {
            violations.push(format!("fourth-moment test says {ok}, DDT says APN = {is_apn}"));
        }
        Some(ok)
    } else {
        None
    };

    let (partition, partition_error) = if square {
        match build_partition(f) {
            Ok(p) => {
                let verified = verify_partition(&p);
                let dims_match = plateaued && verify_dim_amplitude(f, &p)?;
                if !verified {
                    violations.push("derived subspaces do not partition F_2^n".into());
                }
                if plateaued && !dims_match {
                    violations.push("some dim V_b differs from the exponent of F_b".into());
                }
                let summary = PartitionSummary {
                    ptype: partition_type(&p).to_string(),
                    members: p.members.len(),
                    verified,
                    dims_match_amplitudes: dims_match,
                };
                (Some(summary), None)
            }
            Err(e @ (Error::NotCrooked { .. } | Error::StructureViolation(_))) => {
                if opts.expect_crooked || quad_apn {
                    violations.push(format!("expected a crooked function: {e}"));
                }
                (None, Some(e.to_string()))
            }
            Err(e) => return Err(e),
        }
    } else {
        (None, None)
    };

    let nonbent = if plateaued { Some(nonbent_set(f)?) } else { None };
    let nonbent_size = nonbent.as_ref().map(|s| s.len() as u64);

    let blocking = match &nonbent {
        Some(set) if !opts.skip_blocking && n % 2 == 0 && n / 2 < m => {
            Some(blocking_report(set, n, &opts.blocking)?)
        }
        _ => None,
    };
    if let Some(b) = &blocking {
        if let Some(w) = &b.odd.counterexample {
            violations.push(format!(
                "subspace {:?} meets N_F in an even number of points",
                w.basis()
            ));
        }
        if b.is_trivial && !b.is_blocking {
            violations.push("trivial blocking set that does not block".into());
        }
        if b.is_blocking && b.n_size < b.bounds.bose_burton {
            violations.push(format!(
                "blocking set of size {} below the minimum {}",
                b.n_size, b.bounds.bose_burton
            ));
        }
    }

    let mut rule_verdicts = None;
    let mut admissible = None;
    if quad_apn && n % 2 == 0 {
        if let Some(d) = &dist {
            let dtype = DistributionType::from_amplitude(d)?;
            let verdicts = evaluate(&dtype);
            let ok = verdicts.iter().all(|v| v.pass);
            for v in verdicts.iter().filter(|v| !v.pass) {
                violations.push(format!("rule {} fails: {}", v.rule, v.detail));
            }
            if (4..=12).contains(&n) && ok {
                let listed = enumerate_admissible(n, false)?
                    .iter()
                    .any(|e| e.dtype == dtype);
                if !listed {
                    violations.push("distribution missing from the admissible list".into());
                }
            }
            rule_verdicts = Some(verdicts);
            admissible = Some(ok);
        }
    }

    Ok(AnalysisReport {
        schema: SCHEMA_VERSION,
        source,
        n,
        m,
        degree: f.algebraic_degree(),
        differential_uniformity: f.differential_uniformity(),
        is_apn,
        is_quadratic,
        plateaued,
        linearity: f.linearity(),
        amplitude_distribution: dist.as_ref().map(ToString::to_string),
        amplitude_counts: dist,
        fourth_moment_ok,
        partition,
        partition_error,
        nonbent_size,
        blocking,
        rule_verdicts,
        admissible,
        violations,
        timing_ms: opts
            .record_timing
            .then(|| start.elapsed().as_millis() as u64),
    })
}

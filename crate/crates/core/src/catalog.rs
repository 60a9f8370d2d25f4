//! Named power functions over GF(2^n) under the default modulus.
//!
//! `cube` is `x^3`; `gold_k` is `x^(2^k + 1)`; `kasami_k` is
//! `x^(2^(2k) - 2^k + 1)`. Gold and Kasami exponents are APN when
//! `gcd(k, n) = 1`; that condition is reported, not enforced.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::vbf::Vbf;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub n: u32,
    pub exponent: u64,
    pub modulus: u32,
    /// The classical sufficient condition for APN-ness holds.
    pub apn_condition: bool,
    #[serde(skip)]
    pub function: Vbf,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn family_param(name: &str, prefix: &str) -> Result<Option<u32>> {
    let Some(rest) = name.strip_prefix(prefix) else {
        return Ok(None);
    };
    rest.parse::<u32>()
        .ok()
        .filter(|&k| k >= 1)
        .map(Some)
        .ok_or_else(|| Error::InvalidParameter(format!("bad family parameter in {name:?}")))
}

/// Looks up `name` (`cube`, `gold_k`, `kasami_k`) at width `n`.
pub fn catalog(name: &str, n: u32) -> Result<CatalogEntry> {
    let field = FieldSpec::default_for(n)?;
    let (exponent, k) = if name == "cube" {
        (3u64, 1)
    } else if let Some(k) = family_param(name, "gold_")? {
        if k >= n {
            return Err(Error::InvalidParameter(format!("gold_{k} needs k < n = {n}")));
        }
        ((1u64 << k) + 1, k)
    } else if let Some(k) = family_param(name, "kasami_")? {
        if k >= n {
            return Err(Error::InvalidParameter(format!("kasami_{k} needs k < n = {n}")));
        }
        ((1u64 << (2 * k)) - (1u64 << k) + 1, k)
    } else {
        return Err(Error::InvalidParameter(format!(
            "unknown catalog function {name:?} (expected cube, gold_k or kasami_k)"
        )));
    };
    Ok(CatalogEntry {
        name: name.to_string(),
        n,
        exponent,
        modulus: field.modulus(),
        apn_condition: gcd(k, n) == 1,
        function: field.monomial_vbf(exponent),
    })
}

/// Parses `catalog:<name>:<n>`; returns `None` for other strings.
pub fn parse_catalog_spec(spec: &str) -> Option<Result<CatalogEntry>> {
    let rest = spec.strip_prefix("catalog:")?;
    let Some((name, n)) = rest.rsplit_once(':') else {
        return Some(Err(Error::InvalidParameter(format!(
            "catalog spec must look like catalog:<name>:<n>, got {spec:?}"
        ))));
    };
    Some(match n.parse::<u32>() {
        Ok(n) => catalog(name, n),
        Err(_) => Err(Error::InvalidParameter(format!("bad width {n:?} in {spec:?}"))),
    })
}

/// Every quadratic APN catalog function (Gold exponents with gcd(k, n) = 1,
/// `1 <= k < n/2` up to the `k <-> n-k` symmetry) at width `n`.
pub fn quadratic_apn_entries(n: u32) -> Result<Vec<CatalogEntry>> {
    let mut out = vec![catalog("cube", n)?];
    for k in 2..=(n - 1) / 2 {
        if gcd(k, n) == 1 {
            out.push(catalog(&format!("gold_{k}"), n)?);
        }
    }
    Ok(out)
}

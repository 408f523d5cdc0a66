//! Shared T-gate cost algebra.
//!
//! All runtimes in this crate are tracked as plain T counts: the non-Clifford
//! magic-state cost dominates surface-code execution, so Clifford gates are
//! free and no depth or scheduling model is kept. Tallies are arbitrary
//! precision; first-quantized runs reach ~2^p x 10^7 T gates with p up to ~40,
//! and sweeps multiply further.

use std::fmt;
use std::ops::{Add, AddAssign};

use indexmap::IndexMap;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonnegative T-gate tally with a labeled breakdown.
///
/// When the breakdown is nonempty its entries sum to `total`; this holds by
/// construction for every operation offered here.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TCount {
    total: BigUint,
    breakdown: IndexMap<String, BigUint>,
}

impl TCount {
    pub fn zero() -> Self {
        Self::default()
    }

    /// An unlabeled tally.
    pub fn scalar(total: impl Into<BigUint>) -> Self {
        TCount {
            total: total.into(),
            breakdown: IndexMap::new(),
        }
    }

    /// A tally carried under a single label.
    pub fn labeled(label: &str, total: impl Into<BigUint>) -> Self {
        let total = total.into();
        let mut breakdown = IndexMap::new();
        breakdown.insert(label.to_owned(), total.clone());
        TCount { total, breakdown }
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn breakdown(&self) -> &IndexMap<String, BigUint> {
        &self.breakdown
    }

    /// Lossy conversion for ratio arithmetic.
    pub fn to_f64(&self) -> f64 {
        self.total.to_f64().unwrap_or(f64::INFINITY)
    }

    /// Multiply every entry by a nonnegative integer.
    pub fn scale(&self, factor: &BigUint) -> Self {
        TCount {
            total: &self.total * factor,
            breakdown: self
                .breakdown
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
        }
    }

    /// Collapse the breakdown into a single label, keeping the total.
    pub fn relabel(&self, label: &str) -> Self {
        TCount::labeled(label, self.total.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.total.is_zero()
    }
}

impl Add<&TCount> for &TCount {
    type Output = TCount;

    fn add(self, rhs: &TCount) -> TCount {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&TCount> for TCount {
    fn add_assign(&mut self, rhs: &TCount) {
        self.total += &rhs.total;
        for (k, v) in &rhs.breakdown {
            self.breakdown
                .entry(k.clone())
                .and_modify(|e| *e += v)
                .or_insert_with(|| v.clone());
        }
    }
}

impl fmt::Display for TCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.total)
    }
}

// Decimal strings on the wire: JSON numbers cannot hold >2^53 exactly.
impl Serialize for TCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            total: String,
            breakdown: IndexMap<&'a str, String>,
        }
        Wire {
            total: self.total.to_string(),
            breakdown: self
                .breakdown
                .iter()
                .map(|(k, v)| (k.as_str(), v.to_string()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TCount {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            total: String,
            #[serde(default)]
            breakdown: IndexMap<String, String>,
        }
        let wire = Wire::deserialize(deserializer)?;
        let parse = |s: &str| {
            s.parse::<BigUint>()
                .map_err(|e| D::Error::custom(format!("bad tally {s:?}: {e}")))
        };
        let total = parse(&wire.total)?;
        let mut breakdown = IndexMap::new();
        for (k, v) in wire.breakdown {
            breakdown.insert(k, parse(&v)?);
        }
        if !breakdown.is_empty() {
            let sum: BigUint = breakdown.values().sum();
            if sum != total {
                return Err(D::Error::custom("tally breakdown does not sum to total"));
            }
        }
        Ok(TCount { total, breakdown })
    }
}

/// T cost of synthesizing one arbitrary-angle rotation to accuracy
/// `eps_rot`: ceil(10 + 4 log2(1/eps_rot)).
///
/// The ceiling is applied per rotation, before multiplying by rotation
/// counts, so every tally stays integral.
pub fn rotation_t_cost(eps_rot: f64) -> Result<u64> {
    if !(eps_rot > 0.0 && eps_rot <= 1.0) {
        return Err(Error::domain(format!(
            "rotation synthesis error must be in (0, 1], got {eps_rot}"
        )));
    }
    Ok((10.0 - 4.0 * eps_rot.log2()).ceil() as u64)
}

/// T cost of a multi-controlled X with `k` controls: 24k.
pub fn mcx_t_cost(k: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::domain(
            "multi-controlled X needs at least one control",
        ));
    }
    Ok(24 * k)
}

/// QROM output-erasure cost Er(x) = min_k (2^k + ceil(x / 2^k)).
///
/// The minimum over k in 0..=ceil(log2 x)+1 is exact: past that point the
/// 2^k term alone exceeds the k = 0 value.
pub fn qrom_erase_cost(x: u64) -> Result<u64> {
    if x == 0 {
        return Err(Error::domain("QROM erasure needs at least one entry"));
    }
    let k_max = x.ilog2() + 2;
    Ok((0..=k_max)
        .map(|k| {
            let block = 1u64 << k;
            block + x.div_ceil(block)
        })
        .min()
        .expect("nonempty range"))
}

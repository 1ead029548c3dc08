use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Unit power draw per kernel id, in watts.
///
/// [`PowerConstants::published`] holds published FPGA figures (200 MHz) for a
/// binary64 FMA, a binary128 FMA and the 91-bit ⟨30,30,-30⟩ FDP. They are
/// reporting constants, never measurements.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PowerConstants {
    watts: BTreeMap<String, f64>,
}

impl PowerConstants {
    pub const FMA_BINARY64_WATTS: f64 = 0.266;
    pub const FMA_BINARY128_WATTS: f64 = 0.549;
    pub const FDP_91BIT_WATTS: f64 = 0.491;

    pub fn published() -> Self {
        PowerConstants::default()
            .with("fma:binary64", Self::FMA_BINARY64_WATTS)
            .with("fma:binary128", Self::FMA_BINARY128_WATTS)
            .with("fdp:30:30:-30", Self::FDP_91BIT_WATTS)
    }

    /// Adds or replaces an entry. Panics on a non-positive figure.
    pub fn with(mut self, kernel_id: &str, watts: f64) -> Self {
        assert!(watts > 0.0, "power figures must be positive");
        self.watts.insert(kernel_id.to_string(), watts);
        self
    }

    pub fn watts(&self, kernel_id: &str) -> Option<f64> {
        self.watts.get(kernel_id).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ratio {
    pub numerator: String,
    pub denominator: String,
    pub ratio: f64,
}

/// All ordered pairs `(k1, k2)`, `k1 != k2`, of
/// `(bits(k1) / W(k1)) / (bits(k2) / W(k2))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioTable {
    pub bits_per_watt: BTreeMap<String, f64>,
    pub ratios: Vec<Ratio>,
}

impl RatioTable {
    pub fn ratio(&self, numerator: &str, denominator: &str) -> Option<f64> {
        self.ratios
            .iter()
            .find(|r| r.numerator == numerator && r.denominator == denominator)
            .map(|r| r.ratio)
    }
}

/// Correct bits per watt for each kernel and their pairwise ratios.
pub fn bits_per_watt(bits: &[(&str, f64)], constants: &PowerConstants) -> Result<RatioTable> {
    let mut per_watt = BTreeMap::new();
    for &(id, b) in bits {
        let w = constants.watts(id).ok_or_else(|| Error::UnknownKernel(id.to_string()))?;
        per_watt.insert(id.to_string(), b / w);
    }
    let mut ratios = Vec::new();
    for (n, &num) in &per_watt {
        for (d, &den) in &per_watt {
            if n != d {
                ratios.push(Ratio { numerator: n.clone(), denominator: d.clone(), ratio: num / den });
            }
        }
    }
    Ok(RatioTable { bits_per_watt: per_watt, ratios })
}

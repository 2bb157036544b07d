use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of choices a key may have.
pub const MAX_DEGREE: u32 = 64;

const SUM_TOLERANCE: f64 = 1e-12;

/// Distribution of the number of choices per key: `Λ_k` for each `k`.
///
/// Serializes as `{"weights": {"3": 0.5, "4": 0.5}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct DegreeSpec {
    weights: BTreeMap<u32, f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    weights: BTreeMap<u32, f64>,
}

impl TryFrom<RawSpec> for DegreeSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        DegreeSpec::new(raw.weights)
    }
}

impl From<DegreeSpec> for RawSpec {
    fn from(spec: DegreeSpec) -> Self {
        RawSpec {
            weights: spec.weights,
        }
    }
}

impl DegreeSpec {
    pub fn new(weights: impl IntoIterator<Item = (u32, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, w) in weights {
            if !(2..=MAX_DEGREE).contains(&k) {
                return Err(Error::domain(format!(
                    "degree {k} outside the supported range 2..={MAX_DEGREE}"
                )));
            }
            if !w.is_finite() || !(0.0..=1.0).contains(&w) {
                return Err(Error::domain(format!(
                    "weight {w} for degree {k} is not a probability"
                )));
            }
            if w > 0.0 {
                *map.entry(k).or_insert(0.0) += w;
            }
        }
        if map.is_empty() {
            return Err(Error::domain("degree distribution has no mass"));
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::domain(format!(
                "degree weights sum to {total}, expected 1"
            )));
        }
        Ok(DegreeSpec { weights: map })
    }

    pub fn point_mass(k: u32) -> Result<Self> {
        Self::new([(k, 1.0)])
    }

    /// Parses either `{"weights": {...}}` or a bare `{"3": 0.5, ...}` map.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.get("weights").is_some() {
            Ok(serde_json::from_value(value)?)
        } else {
            let weights: BTreeMap<u32, f64> = serde_json::from_value(value)?;
            Self::new(weights)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("degree spec serializes")
    }

    pub fn weights(&self) -> &BTreeMap<u32, f64> {
        &self.weights
    }

    pub fn weight(&self, k: u32) -> f64 {
        self.weights.get(&k).copied().unwrap_or(0.0)
    }

    pub fn min_degree(&self) -> u32 {
        *self.weights.keys().next().expect("nonempty")
    }

    pub fn max_degree(&self) -> u32 {
        *self.weights.keys().next_back().expect("nonempty")
    }

    /// Returns `Some(k)` when all mass sits on a single degree.
    pub fn as_point_mass(&self) -> Option<u32> {
        (self.weights.len() == 1).then(|| self.min_degree())
    }

    /// Mean number of choices, `κ* = Λ'(1)`.
    pub fn mean(&self) -> f64 {
        self.weights.iter().map(|(&k, &w)| k as f64 * w).sum()
    }

    /// `Λ(x) = Σ Λ_k x^k`.
    pub fn lambda(&self, x: f64) -> f64 {
        self.weights
            .iter()
            .map(|(&k, &w)| w * x.powi(k as i32))
            .sum()
    }

    /// `Λ'(x) = Σ k Λ_k x^{k-1}`.
    pub fn lambda_prime(&self, x: f64) -> f64 {
        self.weights
            .iter()
            .map(|(&k, &w)| k as f64 * w * x.powi(k as i32 - 1))
            .sum()
    }
}

/// The two-point distribution on `⌊κ⌋` and `⌊κ⌋+1` with mean `κ`, which
/// maximizes the cuckoo threshold among distributions with that mean.
pub fn optimal_distribution(kappa: f64) -> Result<DegreeSpec> {
    if !kappa.is_finite() || kappa < 2.0 {
        return Err(Error::domain(format!(
            "mean degree must be >= 2, got {kappa}"
        )));
    }
    let floor = kappa.floor();
    let frac = kappa - floor;
    let low = floor as u32;
    if frac == 0.0 {
        return DegreeSpec::point_mass(low);
    }
    if low + 1 > MAX_DEGREE {
        return Err(Error::domain(format!(
            "mean degree {kappa} exceeds {MAX_DEGREE}"
        )));
    }
    DegreeSpec::new([(low, 1.0 - frac), (low + 1, frac)])
}

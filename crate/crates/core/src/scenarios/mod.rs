//! End-to-end verification scenarios and their configuration.
//!
//! A configuration is a single JSON document:
//!
//! ```json
//! {"scenario": "spin", "params": {"j": 0.5}, "tolerances": {"commutation": 1e-9}, "seed": 7}
//! ```
//!
//! `params`, `tolerances` and `seed` are optional. Every randomized check
//! draws from a ChaCha generator seeded with `seed`, which is echoed in the
//! report.

mod builtin;
mod phase;
mod spin;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use rand_distr::StandardNormal;

use crate::algebra::{c, CVector};
use crate::quantize::StatisticalModel;
use crate::report::{Check, VerificationReport};

pub use builtin::{coherent_bt24, coherent_d4, pedagogy_z4, CoherentParams};
pub use phase::{
    fourier_matrix, momentum_phase, phase_space_demo, position_shift, PhaseParams,
    PhaseSpaceScenario,
};
pub use spin::{
    component, component_basis, spin_component_operator, spin_generators, spin_orbit_demo,
    spin_rotation, FlipSubgroup, SpinParams, SpinScenario,
};

pub const DEFAULT_SEED: u64 = 17;

/// Names accepted by [`run_scenario`].
pub const BUILTIN_SCENARIOS: [&str; 5] = [
    "spin",
    "phase",
    "pedagogy_z4",
    "coherent_d4",
    "coherent_bt24",
];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot parse configuration: {0}")]
    ConfigParse(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("invalid parameter: {0}")]
    BadParam(String),
    #[error("2j must be a nonnegative integer with 2j + 1 <= 200, got j = {0}")]
    BadSpin(f64),
    #[error("lattice size must be in 2..=200, got {0}")]
    BadSize(usize),
    #[error("scenario failed to run: {0}")]
    Internal(String),
}

impl ScenarioError {
    /// 2 for invalid input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Internal(_) => 1,
            _ => 2,
        }
    }
}

macro_rules! internal_from {
    ($($t:ty),*) => {
        $(impl From<$t> for ScenarioError {
            fn from(e: $t) -> Self {
                ScenarioError::Internal(e.to_string())
            }
        })*
    };
}

internal_from!(
    crate::algebra::AlgebraError,
    crate::groups::GroupError,
    crate::variables::VariableError,
    crate::coherent::RepError,
    crate::quantize::QuantizeError
);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl ScenarioConfig {
    pub fn new(scenario: &str) -> Self {
        ScenarioConfig {
            scenario: scenario.to_string(),
            params: serde_json::Map::new(),
            tolerances: BTreeMap::new(),
            seed: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::ConfigParse(e.to_string()))
    }

    pub fn with_param(mut self, key: &str, value: serde_json::Value) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    /// Typed view of `params`.
    pub fn params<T: DeserializeOwned>(&self) -> Result<T, ScenarioError> {
        serde_json::from_value(serde_json::Value::Object(self.params.clone()))
            .map_err(|e| ScenarioError::BadParam(e.to_string()))
    }
}

/// Run one scenario; `global_tolerance` overrides every check's tolerance.
pub fn run_scenario(
    config: &ScenarioConfig,
    global_tolerance: Option<f64>,
) -> Result<VerificationReport, ScenarioError> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed());
    let checks: Vec<Check> = match config.scenario.as_str() {
        "spin" => spin::spin_checks(&config.params()?, &mut rng)?,
        "phase" => phase::phase_checks(&config.params()?)?,
        "pedagogy_z4" => {
            let _: NoParams = config.params()?;
            builtin::pedagogy_checks()?
        }
        "coherent_d4" => builtin::coherent_d4_checks(&config.params()?)?,
        "coherent_bt24" => builtin::coherent_bt24_checks(&config.params()?, &mut rng)?,
        other => return Err(ScenarioError::UnknownScenario(other.to_string())),
    };
    let mut echo = config.clone();
    echo.seed = Some(config.seed());
    let mut report = VerificationReport {
        scenario: config.scenario.clone(),
        seed: config.seed(),
        checks,
        timing_ms: start.elapsed().as_millis() as u64,
        config_echo: serde_json::to_value(&echo).expect("configs serialize"),
    };
    report.apply_overrides(&config.tolerances, global_tolerance);
    Ok(report)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoParams {}

/// Default configuration of every built-in scenario.
pub fn default_configs() -> Vec<ScenarioConfig> {
    BUILTIN_SCENARIOS
        .iter()
        .map(|name| {
            let config = ScenarioConfig::new(name);
            if *name == "spin" {
                config.with_param("reduce", serde_json::Value::Bool(true))
            } else {
                config
            }
        })
        .collect()
}

/// Run `configs` in parallel; reports come back in input order.
pub fn run_configs(
    configs: &[ScenarioConfig],
    global_tolerance: Option<f64>,
) -> Result<Vec<VerificationReport>, ScenarioError> {
    configs
        .par_iter()
        .map(|c| run_scenario(c, global_tolerance))
        .collect()
}

/// Every built-in scenario with its default configuration.
pub fn run_all(global_tolerance: Option<f64>) -> Result<Vec<VerificationReport>, ScenarioError> {
    run_configs(&default_configs(), global_tolerance)
}

/// A model with `rows` rows over `outcomes` outcomes, entries drawn uniformly
/// and normalized per row.
pub fn random_model<R: Rng>(
    rng: &mut R,
    rows: usize,
    outcomes: usize,
) -> Result<StatisticalModel, ScenarioError> {
    let probabilities = (0..rows)
        .map(|_| {
            let raw: Vec<f64> = (0..outcomes).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            raw.iter().map(|x| x / total).collect()
        })
        .collect();
    Ok(StatisticalModel::new(probabilities)?)
}

/// Positive weights, one per state.
pub fn random_density_weights<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.0..1.0)).collect()
}

/// A unit vector with independent Gaussian real and imaginary parts.
pub fn random_unit_vector<R: Rng>(rng: &mut R, d: usize) -> CVector {
    loop {
        let v = CVector::from_iterator(
            d,
            (0..d).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))),
        );
        let n = v.norm();
        if n > 1e-6 {
            return v / c(n, 0.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        assert!(matches!(
            ScenarioConfig::from_json(""),
            Err(ScenarioError::ConfigParse(_))
        ));
        assert!(matches!(
            ScenarioConfig::from_json("{}"),
            Err(ScenarioError::ConfigParse(_))
        ));
        assert!(matches!(
            ScenarioConfig::from_json(r#"{"scenario":"spin","extra":1}"#),
            Err(ScenarioError::ConfigParse(_))
        ));
        let c =
            ScenarioConfig::from_json(r#"{"scenario":"phase","params":{"n":3},"seed":5}"#).unwrap();
        assert_eq!(c.seed(), 5);
        assert_eq!(c.params::<PhaseParams>().unwrap().n, 3);
    }

    #[test]
    fn unknown_scenario_and_params() {
        let err = run_scenario(&ScenarioConfig::new("nope"), None).unwrap_err();
        assert!(matches!(err, ScenarioError::UnknownScenario(_)));
        assert_eq!(err.exit_code(), 2);
        let bad = ScenarioConfig::new("pedagogy_z4").with_param("x", 1.into());
        assert!(matches!(
            run_scenario(&bad, None),
            Err(ScenarioError::BadParam(_))
        ));
        let bad = ScenarioConfig::new("phase").with_param("n", 1.into());
        assert!(matches!(
            run_scenario(&bad, None),
            Err(ScenarioError::BadSize(1))
        ));
        let bad = ScenarioConfig::new("spin").with_param("j", 0.3.into());
        assert!(matches!(
            run_scenario(&bad, None),
            Err(ScenarioError::BadSpin(_))
        ));
    }

    #[test]
    fn tolerance_override_is_applied() {
        let config = ScenarioConfig::from_json(
            r#"{"scenario":"phase","params":{"n":3},"tolerances":{"mutually-unbiased":-1.0}}"#,
        )
        .unwrap();
        let report = run_scenario(&config, None).unwrap();
        let mub = report
            .checks
            .iter()
            .find(|c| c.name == "mutually-unbiased")
            .unwrap();
        assert!(!mub.passed);
        assert_eq!(mub.tolerance, -1.0);
    }
}

//! Run configuration: the schema shared by the CLI flags and the `--config`
//! JSON file, its validation, and resolution into an executable plan.

use std::path::PathBuf;

use num_complex::Complex64 as C64;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coherent::CoherentField;
use crate::jones::JonesField;
use crate::ring::{DetectorConfig, RingConfig, RingError};
use crate::walk::{CoinVector, ParamError, QPlateCharge, StepParams, WalkState};
use crate::{mat2, TOL_OP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Abstract coined walk; per-step probability distributions.
    Ideal,
    /// Classical Jones-field layer driven by compiled mode operators.
    Jones,
    /// Ring interferometer with lossy out-coupling and windowed detection.
    Ring,
    /// Coherent-state layer; per-step mean photon spectra.
    Coherent,
    /// Two-photon Hong–Ou–Mandel bunching after two round trips.
    Hom,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "ideal" => Ok(Self::Ideal),
            "jones" => Ok(Self::Jones),
            "ring" => Ok(Self::Ring),
            "coherent" => Ok(Self::Coherent),
            "hom" => Ok(Self::Hom),
            other => Err(ConfigError::UnknownMode(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(ConfigError::UnknownFormat(other.to_string())),
        }
    }
}

/// Initial coin state: a named preset or explicit (up, down) amplitudes as
/// [re_up, im_up, re_down, im_down].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoinSpec {
    Preset(String),
    Amplitudes([f64; 4]),
}

impl Default for CoinSpec {
    fn default() -> Self {
        Self::Preset("symmetric".to_string())
    }
}

impl CoinSpec {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        if s.contains(',') {
            let parts: Vec<f64> = s
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| ConfigError::BadCoin(s.to_string()))?;
            let arr: [f64; 4] =
                parts.try_into().map_err(|_| ConfigError::BadCoin(s.to_string()))?;
            Ok(Self::Amplitudes(arr))
        } else {
            Ok(Self::Preset(s.to_string()))
        }
    }

    pub fn resolve(&self, seed: Option<u64>) -> Result<CoinVector, ConfigError> {
        match self {
            Self::Preset(name) => match name.as_str() {
                "symmetric" => Ok(CoinVector::symmetric()),
                "up" => Ok(CoinVector::pure_up()),
                "down" => Ok(CoinVector::pure_down()),
                "random" => Ok(random_coin(&mut ChaCha8Rng::seed_from_u64(
                    seed.unwrap_or(0),
                ))),
                other => Err(ConfigError::BadCoin(other.to_string())),
            },
            Self::Amplitudes([ur, ui, dr, di]) => {
                let coin = CoinVector::new(C64::new(*ur, *ui), C64::new(*dr, *di));
                let norm = coin.norm_sqr();
                if !coin.is_finite() || (norm - 1.0).abs() > 1e-9 {
                    return Err(ConfigError::CoinNotNormalized(norm));
                }
                Ok(coin)
            }
        }
    }
}

/// Haar-uniform coin state on the Bloch sphere (up to a global phase).
pub fn random_coin<R: rand::Rng>(rng: &mut R) -> CoinVector {
    let angle = Uniform::new(0.0, std::f64::consts::TAU);
    let u: f64 = rng.gen();
    let theta = (1.0 - 2.0 * u).acos();
    let phi = angle.sample(rng);
    let rel = angle.sample(rng);
    CoinVector::new(
        C64::from_polar((theta / 2.0).cos(), phi),
        C64::from_polar((theta / 2.0).sin(), phi + rel),
    )
}

fn default_q() -> f64 {
    0.5
}

fn default_qwp_angle() -> f64 {
    std::f64::consts::FRAC_PI_4
}

fn default_format() -> Format {
    Format::Csv
}

/// One batch run. Serialized form of every CLI flag; unknown fields rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    #[serde(default)]
    pub steps: u32,
    #[serde(default = "default_q")]
    pub q: f64,
    #[serde(default)]
    pub coin: CoinSpec,
    #[serde(default = "default_qwp_angle")]
    pub qwp_angle: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector: Option<DetectorConfig>,
    /// Coherent amplitude as [re, im]; coherent mode only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[f64; 2]>,
    pub output: PathBuf,
    #[serde(default = "default_format")]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown mode `{0}` (expected ideal | jones | ring | coherent | hom)")]
    UnknownMode(String),
    #[error("unknown format `{0}` (expected csv | json)")]
    UnknownFormat(String),
    #[error("coin must be symmetric | up | down | random or four comma-separated reals, got `{0}`")]
    BadCoin(String),
    #[error("coin amplitudes must be normalized, got |up|^2 + |down|^2 = {0}")]
    CoinNotNormalized(f64),
    #[error("field `{field}` is required in {mode:?} mode")]
    MissingField { mode: Mode, field: &'static str },
    #[error("field `{field}` is not accepted in {mode:?} mode")]
    UnexpectedField { mode: Mode, field: &'static str },
    #[error("steps must be at least 1 in {0:?} mode")]
    StepsRequired(Mode),
    #[error("hom mode emits a structured report; set format to json")]
    HomRequiresJson,
    #[error("alpha must be a finite complex amplitude, got [{0}, {1}]")]
    BadAlpha(f64, f64),
    #[error(transparent)]
    Walk(#[from] ParamError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A validated, executable run.
#[derive(Clone, Debug)]
pub enum Plan {
    Ideal { initial: WalkState, params: StepParams, steps: u32 },
    Jones { initial: JonesField, params: StepParams, steps: u32 },
    Ring { initial: JonesField, config: RingConfig },
    Coherent { initial: CoherentField, params: StepParams, steps: u32 },
    Hom { ell: i64 },
}

impl RunConfig {
    fn step_params(&self) -> Result<StepParams, ConfigError> {
        let q = QPlateCharge::try_from_f64(self.q)?;
        // A quarter-wave plate at qwp_angle realizes the coin W(θ)·X; θ = π/4
        // gives the Hadamard.
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let swap = [[zero, one], [one, zero]];
        let coin = mat2::mul(&crate::jones::qwp_matrix(self.qwp_angle), &swap);
        debug_assert!(mat2::unitarity_defect(&coin) < TOL_OP);
        Ok(StepParams::new(q, coin)?)
    }

    fn reject_field(&self, mode: Mode, field: &'static str, present: bool) -> Result<(), ConfigError> {
        if present {
            Err(ConfigError::UnexpectedField { mode, field })
        } else {
            Ok(())
        }
    }

    /// Validate every mode-specific field combination and build the plan.
    pub fn plan(&self) -> Result<Plan, ConfigError> {
        match self.mode {
            Mode::Ideal | Mode::Jones => {
                self.reject_field(self.mode, "mu", self.mu.is_some())?;
                self.reject_field(self.mode, "detector", self.detector.is_some())?;
                self.reject_field(self.mode, "alpha", self.alpha.is_some())?;
                if self.steps == 0 {
                    return Err(ConfigError::StepsRequired(self.mode));
                }
                let params = self.step_params()?;
                let coin = self.coin.resolve(self.seed)?;
                if self.mode == Mode::Ideal {
                    Ok(Plan::Ideal {
                        initial: WalkState::localized(0, coin),
                        params,
                        steps: self.steps,
                    })
                } else {
                    Ok(Plan::Jones {
                        initial: JonesField::localized(0, coin.up, coin.down),
                        params,
                        steps: self.steps,
                    })
                }
            }
            Mode::Ring => {
                self.reject_field(self.mode, "alpha", self.alpha.is_some())?;
                let mu = self
                    .mu
                    .ok_or(ConfigError::MissingField { mode: Mode::Ring, field: "mu" })?;
                if self.steps == 0 {
                    return Err(ConfigError::StepsRequired(Mode::Ring));
                }
                let config = RingConfig {
                    mu,
                    n_iterations: self.steps,
                    step: self.step_params()?,
                    detector: self.detector.unwrap_or_default(),
                };
                if !(mu > 0.0 && mu <= 1.0) {
                    return Err(ConfigError::Ring(RingError::MuOutOfRange(mu)));
                }
                let coin = self.coin.resolve(self.seed)?;
                Ok(Plan::Ring { initial: JonesField::localized(0, coin.up, coin.down), config })
            }
            Mode::Coherent => {
                self.reject_field(self.mode, "mu", self.mu.is_some())?;
                self.reject_field(self.mode, "detector", self.detector.is_some())?;
                if self.steps == 0 {
                    return Err(ConfigError::StepsRequired(Mode::Coherent));
                }
                let [re, im] = self
                    .alpha
                    .ok_or(ConfigError::MissingField { mode: Mode::Coherent, field: "alpha" })?;
                if !(re.is_finite() && im.is_finite()) {
                    return Err(ConfigError::BadAlpha(re, im));
                }
                let params = self.step_params()?;
                let coin = self.coin.resolve(self.seed)?;
                Ok(Plan::Coherent {
                    initial: CoherentField::polarized(0, C64::new(re, im), coin.up, coin.down),
                    params,
                    steps: self.steps,
                })
            }
            Mode::Hom => {
                self.reject_field(self.mode, "mu", self.mu.is_some())?;
                self.reject_field(self.mode, "detector", self.detector.is_some())?;
                self.reject_field(self.mode, "alpha", self.alpha.is_some())?;
                if self.format != Format::Json {
                    return Err(ConfigError::HomRequiresJson);
                }
                Ok(Plan::Hom { ell: 0 })
            }
        }
    }
}

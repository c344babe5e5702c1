use std::fmt;
use std::path::{Path, PathBuf};

use besov_core::witness::admissible;
use besov_core::ModelParams;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Desk-scale run configuration. Every field has a default, so `{}` is a
/// valid document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub model: ModelConfig,
    pub besov: BesovConfig,
    pub witness: WitnessConfig,
    pub sweep: SweepConfig,
    pub expansion: ExpansionConfig,
    pub conserve: ConserveConfig,
    pub tolerances: Tolerances,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid: GridConfig::default(),
            model: ModelConfig::default(),
            besov: BesovConfig::default(),
            witness: WitnessConfig::default(),
            sweep: SweepConfig::default(),
            expansion: ExpansionConfig::default(),
            conserve: ConserveConfig::default(),
            tolerances: Tolerances::default(),
            output_dir: PathBuf::from("out"),
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: i64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n: 1 << 17, m: 16 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantName {
    Gchn,
    Dp,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub k: u32,
    pub variant: VariantName,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self { k: 1, variant: VariantName::Gchn }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BesovConfig {
    pub s: f64,
    /// A number, or `"inf"`.
    #[serde(serialize_with = "ser_exponent", deserialize_with = "de_exponent")]
    pub p: f64,
}

impl Default for BesovConfig {
    fn default() -> Self {
        Self { s: 2.0, p: 2.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WitnessConfig {
    /// Largest packet kept in the witness sum; `n_max + extra_modes` if unset.
    #[serde(rename = "N_modes")]
    pub n_modes: Option<u32>,
    pub n_min: u32,
    pub n_max: u32,
    /// Packets kept above the probed level when a run truncates per `n`.
    pub extra_modes: u32,
    /// Accepted `|phi(L)| / phi(0)`.
    pub tail_tolerance: f64,
    /// Quadrature oversampling for `L^p` norms with `p != 2`.
    pub oversampling: usize,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self {
            n_modes: None,
            n_min: 4,
            n_max: 9,
            extra_modes: 2,
            tail_tolerance: 3e-2,
            oversampling: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub epsilon: f64,
    pub steps_per_horizon: usize,
    /// Re-run the ill-posedness sweep at `2 epsilon` and compare floors.
    pub epsilon_doubling: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { epsilon: 0.01, steps_per_horizon: 32, epsilon_doubling: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpansionConfig {
    pub points: usize,
    /// `t_max` in units of `1 / (xi_top max|u0|^k)`, the fastest transport
    /// time of the top packet.
    pub smoothness: f64,
    /// `t_max / t_min`.
    pub span: f64,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        Self { points: 8, smoothness: 0.05, span: 16.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConserveConfig {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: i64,
    /// Index of the single packet used as data.
    pub packet: u32,
    pub amplitude: f64,
    pub horizon: f64,
    /// Coarse step count; the refined run uses twice as many.
    pub steps: usize,
}

impl Default for ConserveConfig {
    fn default() -> Self {
        Self { n: 2048, m: 8, packet: 2, amplitude: 0.5, horizon: 0.5, steps: 64 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub partition: f64,
    pub block_error: f64,
    pub besov_variation: f64,
    pub lower_bound_ratio: f64,
    pub commutator_spread: f64,
    pub refinement: f64,
    pub slope_d1: [f64; 2],
    pub slope_d2: [f64; 2],
    pub dt_refinement: f64,
    pub floor_ratio: f64,
    pub decay_slope: [f64; 2],
    pub decomposition: f64,
    pub epsilon_doubling: f64,
    pub h1_drift: f64,
    pub drift_ratio: [f64; 2],
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            partition: 1e-12,
            block_error: 1e-10,
            besov_variation: 0.05,
            lower_bound_ratio: 0.5,
            commutator_spread: 4.0,
            refinement: 0.2,
            slope_d1: [0.9, 1.1],
            slope_d2: [1.8, 2.2],
            dt_refinement: 5e-4,
            floor_ratio: 0.3,
            decay_slope: [-1.2, -0.8],
            decomposition: 1e-6,
            epsilon_doubling: 0.3,
            h1_drift: 1e-6,
            drift_ratio: [11.2, 20.8],
        }
    }
}

fn ser_exponent<S: Serializer>(p: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if p.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*p)
    }
}

fn de_exponent<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    struct ExponentVisitor;

    impl Visitor<'_> for ExponentVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a number or \"inf\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<f64, E> {
            Ok(v)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<f64, E> {
            match v.to_ascii_lowercase().as_str() {
                "inf" | "infinity" => Ok(f64::INFINITY),
                _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
            }
        }
    }

    d.deserialize_any(ExponentVisitor)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Config(msg()))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| {
            Error::Config(format!("line {}, column {}: {}", e.line(), e.column(), e))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Largest packet in the witness sum.
    pub fn n_modes(&self) -> u32 {
        self.witness.n_modes.unwrap_or(self.witness.n_max + self.witness.extra_modes)
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        Ok(match self.model.variant {
            VariantName::Gchn => ModelParams::gchn(self.model.k)?,
            VariantName::Dp => ModelParams::degasperis_procesi(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let Self { besov, witness, sweep, model, expansion, conserve, .. } = self;
        admissible(besov.s, besov.p).map_err(|e| Error::Config(e.to_string()))?;
        check(model.k >= 1, || "model.k must be at least 1".into())?;
        check(witness.n_min >= 3, || format!("witness.n_min = {} must be at least 3", witness.n_min))?;
        check(witness.n_max >= witness.n_min + 2, || {
            format!("witness.n_max = {} must be at least n_min + 2", witness.n_max)
        })?;
        check(self.n_modes() >= witness.n_max, || {
            format!("witness.N_modes = {} must be at least n_max = {}", self.n_modes(), witness.n_max)
        })?;
        check(witness.tail_tolerance > 0.0 && witness.tail_tolerance < 1.0, || {
            format!("witness.tail_tolerance = {} must lie in (0, 1)", witness.tail_tolerance)
        })?;
        check(witness.oversampling.is_power_of_two(), || {
            format!("witness.oversampling = {} must be a power of two", witness.oversampling)
        })?;
        check(sweep.epsilon > 0.0 && sweep.epsilon <= 0.1, || {
            format!("sweep.epsilon = {} must lie in (0, 0.1]", sweep.epsilon)
        })?;
        check(sweep.steps_per_horizon >= 32, || {
            format!("sweep.steps_per_horizon = {} must be at least 32", sweep.steps_per_horizon)
        })?;
        check(expansion.points >= 3, || "expansion.points must be at least 3".into())?;
        check(expansion.span > 1.0, || "expansion.span must exceed 1".into())?;
        check(expansion.smoothness > 0.0 && expansion.smoothness <= 1.0, || {
            "expansion.smoothness must lie in (0, 1]".into()
        })?;
        check(conserve.amplitude > 0.0 && conserve.horizon > 0.0 && conserve.steps >= 1, || {
            "conserve.amplitude, horizon and steps must be positive".into()
        })?;
        besov_core::spectral::make_grid(self.grid.n, self.grid.m)
            .map_err(|e| Error::Config(format!("grid: {e}")))?;
        besov_core::spectral::make_grid(conserve.n, conserve.m)
            .map_err(|e| Error::Config(format!("conserve: {e}")))?;
        Ok(())
    }
}

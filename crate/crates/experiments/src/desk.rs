use besov_core::littlewood_paley::{BesovParams, LPFamily};
use besov_core::spectral::{make_grid, Grid, SpectralField};
use besov_core::witness::{witness_data, BumpSpec, Witness, WitnessSpec};
use besov_core::ModelParams;

use crate::config::RunConfig;
use crate::error::Result;

/// Grid, Littlewood-Paley family and model shared by one experiment.
pub struct Desk {
    pub cfg: RunConfig,
    pub grid: Grid,
    pub fam: LPFamily,
    pub bump: BumpSpec,
    pub mp: ModelParams,
}

impl Desk {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        Self::with_grid(cfg, cfg.grid.n)
    }

    /// Same domain with `n` points.
    pub fn with_grid(cfg: &RunConfig, n: usize) -> Result<Self> {
        let grid = make_grid(n, cfg.grid.m)?;
        let fam = LPFamily::new(&grid).with_oversampling(cfg.witness.oversampling)?;
        Ok(Self {
            cfg: cfg.clone(),
            grid,
            fam,
            bump: BumpSpec::default().with_tail_tolerance(cfg.witness.tail_tolerance),
            mp: cfg.model_params()?,
        })
    }

    pub fn s(&self) -> f64 {
        self.cfg.besov.s
    }

    pub fn p(&self) -> f64 {
        self.cfg.besov.p
    }

    /// Witness sum truncated after packet `n_modes`.
    pub fn witness(&self, n_modes: u32) -> Result<Witness> {
        let ws = WitnessSpec::new(self.s(), self.mp.k(), n_modes, n_modes.saturating_sub(2).max(3))?;
        Ok(witness_data(&self.grid, &ws, &self.bump)?)
    }

    /// `||f||_{B^{s_eval}_{p,inf}}`.
    pub fn besov(&self, f: &SpectralField, s_eval: f64) -> Result<f64> {
        let bp = BesovParams::sup(s_eval, self.p())?;
        Ok(self.fam.besov_norm_spectral(f, bp)?)
    }
}

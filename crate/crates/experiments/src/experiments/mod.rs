pub mod conserve;
pub mod expansion;
pub mod illposed;
pub mod lp;
pub mod witness;

use crate::config::RunConfig;
use crate::error::Result;
use crate::report::ExperimentReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Lp,
    Witness,
    Expansion,
    Illposed,
    Conserve,
}

impl Experiment {
    pub const ALL: [Experiment; 5] =
        [Self::Lp, Self::Witness, Self::Expansion, Self::Illposed, Self::Conserve];

    pub fn id(self) -> &'static str {
        match self {
            Self::Lp => "lp",
            Self::Witness => "witness",
            Self::Expansion => "expansion",
            Self::Illposed => "illposed",
            Self::Conserve => "conserve",
        }
    }

    pub fn run(self, cfg: &RunConfig) -> Result<ExperimentReport> {
        log::info!("running {} (k = {}, s = {}, p = {})", self.id(), cfg.model.k, cfg.besov.s, cfg.besov.p);
        match self {
            Self::Lp => lp::run(cfg),
            Self::Witness => witness::run(cfg),
            Self::Expansion => expansion::run(cfg),
            Self::Illposed => illposed::run(cfg),
            Self::Conserve => conserve::run(cfg),
        }
    }
}

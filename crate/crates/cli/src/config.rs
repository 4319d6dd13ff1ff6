use std::sync::Arc;

use clap::Args;
use rigan_core::padic::{DEFAULT_DEGREE, DEFAULT_P, DEFAULT_PRECISION, DEFAULT_SLACK};
use rigan_core::PadicContext;

use crate::report::Format;

/// Flags shared by every command.
#[derive(Clone, Debug, PartialEq, Eq, Args)]
pub struct RunConfig {
    /// Residue characteristic, an odd prime.
    #[arg(long, global = true, default_value_t = DEFAULT_P)]
    pub p: u64,
    /// Relative precision N in p-adic digits.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    /// Degree cap D for stored series.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE)]
    pub degree: usize,
    /// Precision-loss budget kappa.
    #[arg(long, global = true, default_value_t = DEFAULT_SLACK)]
    pub slack: u32,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: DEFAULT_P,
            precision: DEFAULT_PRECISION,
            degree: DEFAULT_DEGREE,
            slack: DEFAULT_SLACK,
            seed: 0,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn context(&self) -> rigan_core::Result<Arc<PadicContext>> {
        PadicContext::with_slack(self.p, self.precision, self.degree, self.slack)
    }
}

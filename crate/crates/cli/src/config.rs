use std::path::PathBuf;

use apsieve_core::psimod::WindowPolicy;
use apsieve_core::PrimeContext;
use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PolicyArg {
    #[default]
    Standard,
    Exhaustive,
}

impl From<PolicyArg> for WindowPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Standard => WindowPolicy::Standard,
            PolicyArg::Exhaustive => WindowPolicy::Exhaustive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub p: u64,
    pub rank: usize,
    pub max_half_degree: u32,
    pub window_policy: PolicyArg,
    pub oracle: bool,
    pub k_max: u64,
    /// 0 lets the thread pool pick. Not echoed: it never changes results.
    #[serde(skip)]
    pub workers: usize,
    pub format: OutputFormat,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 3,
            rank: 3,
            max_half_degree: 60,
            window_policy: PolicyArg::Standard,
            oracle: false,
            k_max: 50,
            workers: 0,
            format: OutputFormat::Json,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<PrimeContext, CliError> {
        let ctx = PrimeContext::new(self.p).map_err(|e| CliError::Usage(e.to_string()))?;
        if (self.max_half_degree as u64) < self.p {
            return Err(CliError::Usage(format!(
                "--max-half-degree {} is below p = {}",
                self.max_half_degree, self.p
            )));
        }
        if self.rank == 0 {
            return Err(CliError::Usage("--rank must be at least 1".into()));
        }
        let needed = ctx.p().max(ctx.k0());
        if self.oracle && self.k_max < needed {
            return Err(CliError::Usage(format!("--k-max {} is below max(p, k0) = {needed}", self.k_max)));
        }
        Ok(ctx)
    }

    pub fn policy(&self) -> WindowPolicy {
        self.window_policy.into()
    }
}

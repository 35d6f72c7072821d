use anyhow::{bail, Result};
use clap::ValueEnum;
use crossprod::ideals::IntersectOptions;
use crossprod::{NormOptions, SampleGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    /// `t`-grid resolution `M`.
    pub grid: usize,
    pub window: usize,
    pub tol: f64,
    pub seed: u64,
    pub format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid < 16 || !self.grid.is_power_of_two() {
            bail!("--grid must be a power of two ≥ 16, got {}", self.grid);
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            bail!("--tol must be positive, got {}", self.tol);
        }
        if self.window == 0 {
            bail!("--window must be positive");
        }
        Ok(())
    }

    pub fn sample_grid(&self) -> SampleGrid {
        SampleGrid::new(self.grid, (self.grid / 4).max(4))
    }

    pub fn norm_options(&self) -> NormOptions {
        NormOptions { grid: self.sample_grid(), tol: self.tol, max_evals: 400_000, window: self.window }
    }

    pub fn intersect_options(&self) -> IntersectOptions {
        IntersectOptions { grid: self.sample_grid() }
    }
}

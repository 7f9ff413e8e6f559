use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::coarse::{CoarseKind, StencilBoundary};
use crate::decomposition::{OverlapMode, PartitionOfUnity};
use crate::discretization::{regime, Grid, ModelProblem, RegimeReport};
use crate::error::{Error, Result};
use crate::krylov::{GmresConfig, PreconditionSide};
use crate::preconditioner::{PreconditionerKind, WeightPlacement};

/// How the `k` and `n` lists combine into table cells.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sweep {
    /// Every `n` for every `k`.
    #[default]
    Cross,
    /// `k[i]` with `n[i]`; both lists must have the same length.
    Paired,
}

/// One experiment, usually read from a TOML file.
///
/// ```toml
/// problem = "mp2"
/// k = [20, 40]
/// n = [81, 161]
/// sweep = "paired"
/// ratio = 4
/// overlap = "max"
/// coarse = ["focs", "hocs"]
/// preconditioners = ["as2", "sas2", "shs2"]
/// max_iter = 100
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ModelProblem,
    pub k: Vec<f64>,
    pub n: Vec<usize>,
    #[serde(default)]
    pub sweep: Sweep,
    /// Coarsening ratio `H / h`.
    #[serde(default = "default_ratio")]
    pub ratio: usize,
    /// Cells per subdomain edge; defaults to `ratio`.
    #[serde(default)]
    pub subdomain_cells: Option<usize>,
    #[serde(default = "default_overlap")]
    pub overlap: OverlapMode,
    #[serde(default)]
    pub partition_of_unity: PartitionOfUnity,
    #[serde(default = "default_coarse")]
    pub coarse: Vec<CoarseKind>,
    #[serde(default = "default_preconditioners")]
    pub preconditioners: Vec<PreconditionerKind>,
    #[serde(default)]
    pub stencil_boundary: StencilBoundary,
    #[serde(default)]
    pub weight_placement: WeightPlacement,
    #[serde(default = "default_rtol")]
    pub rtol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub side: PreconditionSide,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Reserved; no part of the pipeline is randomised.
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_ratio() -> usize {
    4
}

fn default_overlap() -> OverlapMode {
    OverlapMode::Max
}

fn default_coarse() -> Vec<CoarseKind> {
    vec![CoarseKind::Linear, CoarseKind::Bezier]
}

fn default_preconditioners() -> Vec<PreconditionerKind> {
    PreconditionerKind::ALL.to_vec()
}

fn default_rtol() -> f64 {
    GmresConfig::default().rtol
}

fn default_max_iter() -> usize {
    GmresConfig::default().max_iter
}

impl ExperimentConfig {
    /// Defaults for everything except the problem and the sweep.
    pub fn new(problem: ModelProblem, k: Vec<f64>, n: Vec<usize>) -> Self {
        Self {
            problem,
            k,
            n,
            sweep: Sweep::default(),
            ratio: default_ratio(),
            subdomain_cells: None,
            overlap: default_overlap(),
            partition_of_unity: PartitionOfUnity::default(),
            coarse: default_coarse(),
            preconditioners: default_preconditioners(),
            stencil_boundary: StencilBoundary::default(),
            weight_placement: WeightPlacement::default(),
            rtol: default_rtol(),
            max_iter: default_max_iter(),
            side: PreconditionSide::default(),
            output: None,
            seed: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn gmres(&self) -> GmresConfig {
        GmresConfig {
            rtol: self.rtol,
            max_iter: self.max_iter,
            side: self.side,
        }
    }

    pub fn subdomain_cells(&self) -> usize {
        self.subdomain_cells.unwrap_or(self.ratio)
    }

    /// Table cells in sweep order.
    pub fn cells(&self) -> Result<Vec<(f64, usize)>> {
        match self.sweep {
            Sweep::Cross => Ok(self
                .k
                .iter()
                .flat_map(|&k| self.n.iter().map(move |&n| (k, n)))
                .collect()),
            Sweep::Paired => {
                if self.k.len() != self.n.len() {
                    return Err(Error::Config(format!(
                        "paired sweep needs equally long lists, got {} wavenumbers and {} grid sizes",
                        self.k.len(),
                        self.n.len()
                    )));
                }
                Ok(self.k.iter().copied().zip(self.n.iter().copied()).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellCheck {
    pub k: f64,
    pub n: usize,
    pub boxes_per_dim: usize,
    pub regime: RegimeReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub cells: Vec<CellCheck>,
    pub warnings: Vec<String>,
}

/// Checks a config cell by cell.
///
/// Layouts that cannot be built are errors; resolution and pollution limits
/// only produce warnings.
pub fn validate_config(cfg: &ExperimentConfig) -> Result<Validation> {
    cfg.gmres().validate()?;
    if cfg.k.is_empty() || cfg.n.is_empty() {
        return Err(Error::Config("the sweep has no cells".into()));
    }
    if cfg.coarse.is_empty() || cfg.preconditioners.is_empty() {
        return Err(Error::Config("no coarse space or preconditioner selected".into()));
    }
    if cfg.ratio == 0 || cfg.subdomain_cells() == 0 {
        return Err(Error::Config("ratio and subdomain_cells must be positive".into()));
    }
    if cfg.coarse.contains(&CoarseKind::Bezier) && !cfg.ratio.is_power_of_two() {
        return Err(Error::Config(format!(
            "hocs needs a power-of-two ratio, got {}",
            cfg.ratio
        )));
    }
    let mut cells = Vec::new();
    let mut warnings = Vec::new();
    for (k, n) in cfg.cells()? {
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::Config(format!("wavenumber {k} must be finite and nonnegative")));
        }
        if n < 3 {
            return Err(Error::Config(format!("n = {n} is below the minimum of 3")));
        }
        if cfg.problem == ModelProblem::Mp1 && n % 2 == 0 {
            return Err(Error::Config(format!(
                "mp1 places the point source on a node and needs odd n, got {n}"
            )));
        }
        let cells_per_dim = n - 1;
        let sub = cfg.subdomain_cells();
        if cells_per_dim % sub != 0 {
            return Err(Error::Config(format!(
                "subdomains of {sub} cells do not tile n - 1 = {cells_per_dim}"
            )));
        }
        if cells_per_dim % cfg.ratio != 0 {
            return Err(Error::Config(format!(
                "coarsening ratio {} does not divide n - 1 = {cells_per_dim}",
                cfg.ratio
            )));
        }
        let grid = Grid::for_problem(cfg.problem, n)?;
        let report = regime(k, grid.h(), grid.h() * cfg.ratio as f64);
        for w in report.warnings() {
            warnings.push(format!("k = {k}, n = {n}: {w}"));
        }
        cells.push(CellCheck {
            k,
            n,
            boxes_per_dim: cells_per_dim / sub,
            regime: report,
        });
    }
    Ok(Validation { cells, warnings })
}

//! JSON config schema for `sdiff solve`. Unknown fields are rejected so
//! typos fail loudly instead of silently running a different experiment.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use sdiff_core::error::{Error, Result};
use sdiff_core::regularizer::Regularizer;
use sdiff_core::rng::derive_seed;
use sdiff_core::sensing::{
    add_gaussian_noise, gen_gaussian, gen_partial_dct, gen_sparse_signal, SensingMatrix,
};
use sdiff_core::solvers::{AdaptiveSConfig, Init, StepRule};
use sdiff_core::vector::DenseVector;
use sdiff_core::{LeastSquaresProblem, SolverConfig};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum MatrixSource {
    Generate {
        kind: GeneratedKind,
        m: usize,
        n: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
    Load(PathBuf),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratedKind {
    Gaussian,
    Dct,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum ObservationSource {
    /// b = A x + noise_scale * randn with an s_truth-sparse ground truth.
    Synthesize {
        s_truth: usize,
        #[serde(default)]
        noise_scale: f64,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// One value per line.
    Load(PathBuf),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltySpec {
    pub regularizer: Regularizer,
    pub s: usize,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    Fbs,
    Pdca,
    DcaAdmm,
    Aiht,
    HalfThresholding,
    L1Admm,
    L12Dca,
}

impl SolverChoice {
    pub fn name(&self) -> &'static str {
        match self {
            SolverChoice::Fbs => "fbs",
            SolverChoice::Pdca => "pdca",
            SolverChoice::DcaAdmm => "dca_admm",
            SolverChoice::Aiht => "aiht",
            SolverChoice::HalfThresholding => "half_thresholding",
            SolverChoice::L1Admm => "l1_admm",
            SolverChoice::L12Dca => "l12_dca",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WarmStartSpec {
    pub rho: f64,
    #[serde(default)]
    pub iters: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub matrix: MatrixSource,
    pub observation: ObservationSource,
    pub penalty: PenaltySpec,
    pub solver: SolverChoice,
    pub rho: f64,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub step: Option<StepRule>,
    /// Absent means zero initialization.
    #[serde(default)]
    pub warm_start: Option<WarmStartSpec>,
    #[serde(default)]
    pub adaptive_s: Option<AdaptiveSConfig>,
    #[serde(default)]
    pub rho_schedule: Option<Vec<f64>>,
}

pub struct SolveInstance {
    pub problem: LeastSquaresProblem,
    pub truth: Option<DenseVector>,
    pub penalty: sdiff_core::SDiffPenalty,
    pub solver: SolverChoice,
    pub solver_cfg: SolverConfig,
    pub rho: f64,
}

impl SolveConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Format {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }

    /// Materializes the problem; `master_seed` fills any omitted seeds.
    pub fn build(self, master_seed: u64) -> Result<SolveInstance> {
        let a: SensingMatrix = match self.matrix {
            MatrixSource::Generate { kind, m, n, seed } => {
                let seed = seed.unwrap_or_else(|| derive_seed(master_seed, &[1]));
                match kind {
                    GeneratedKind::Gaussian => gen_gaussian(m, n, seed)?,
                    GeneratedKind::Dct => gen_partial_dct(m, n, seed)?,
                }
            }
            MatrixSource::Load(path) => SensingMatrix::read_binary(&path)?,
        };
        let (b, truth) = match self.observation {
            ObservationSource::Synthesize {
                s_truth,
                noise_scale,
                seed,
            } => {
                let seed = seed.unwrap_or_else(|| derive_seed(master_seed, &[2]));
                let x = gen_sparse_signal(a.cols(), s_truth, seed)?;
                let b = add_gaussian_noise(&a.matvec(&x), noise_scale, derive_seed(seed, &[3]));
                (b, Some(x))
            }
            ObservationSource::Load(path) => (read_vector(&path)?, None),
        };
        let penalty = sdiff_core::SDiffPenalty::new(self.penalty.regularizer, self.penalty.s)?;
        let problem = LeastSquaresProblem::new(a, b)?;
        penalty.validate_dim(problem.dim())?;

        let mut solver_cfg = SolverConfig::new(self.rho);
        if let Some(tol) = self.tol {
            solver_cfg.tol = tol;
        }
        solver_cfg.max_iter = self.max_iter;
        if let Some(step) = self.step {
            solver_cfg.step = step;
        }
        solver_cfg.init = match self.warm_start {
            Some(ws) => Init::L1AdmmWarmStart {
                rho: ws.rho,
                iters: ws.iters,
            },
            None => Init::Zeros,
        };
        solver_cfg.adaptive_s = self.adaptive_s;
        solver_cfg.rho_schedule = self.rho_schedule;

        Ok(SolveInstance {
            problem,
            truth,
            penalty,
            solver: self.solver,
            solver_cfg,
            rho: self.rho,
        })
    }
}

pub fn read_vector(path: &Path) -> Result<DenseVector> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        values.push(line.parse::<f64>().map_err(|e| Error::Format {
            path: path.display().to_string(),
            reason: format!("line {}: {e}", i + 1),
        })?);
    }
    DenseVector::new(values)
}

pub fn write_vector(x: &DenseVector, path: &Path) -> Result<()> {
    use std::io::Write;
    let err = |source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(err)?);
    for v in x.iter() {
        writeln!(w, "{v:.17e}").map_err(err)?;
    }
    w.flush().map_err(err)
}

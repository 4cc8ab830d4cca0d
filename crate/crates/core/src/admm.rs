//! ADMM LP decoding of binary linear codes.
//!
//! Each check `j` owns a replica `z_j` of its variables, constrained to the
//! even parity polytope of degree `d_j`, and a scaled dual `u_j`. One
//! iteration is
//!
//! ```text
//! x_i     = ( sum_{j in N_i} (z_j - u_j)_i - lambda_i / rho ) / d_i
//! z_j     = Proj_even(T_j x + u_j)
//! u_j    += T_j x - z_j
//! ```
//!
//! where `T_j` gathers the coordinates of check `j`. `x` is never clipped;
//! the projections keep the replicas in the box.

use thiserror::Error;

use crate::baselines::{project_wasson_draper, project_zhang_siegel};
use crate::code::ParityCheckMatrix;
use crate::fix::FixWorkspace;
use crate::geometry::ParityKind;
use crate::opcount::Algorithm;
use crate::oracle;

/// Log-likelihood ratios `ln Pr(y|0)/Pr(y|1)`, one per code bit.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector {
    values: Vec<f64>,
}

impl LlrVector {
    pub fn new(values: Vec<f64>) -> Result<Self, DecodeError> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(DecodeError::NonFiniteLlr { index });
        }
        Ok(LlrVector { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// LLRs of BPSK (0 -> +1, 1 -> -1) over an AWGN channel: `2 y / sigma^2`.
///
/// # Panics
///
/// If `sigma` is not positive and finite.
pub fn awgn_llr(received: &[f64], sigma: f64) -> Result<LlrVector, DecodeError> {
    assert!(sigma > 0.0 && sigma.is_finite(), "sigma must be positive");
    let scale = 2.0 / (sigma * sigma);
    LlrVector::new(received.iter().map(|&y| scale * y).collect())
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("invalid decoder configuration: {0}")]
    InvalidConfig(String),
    #[error("LLR vector has length {found}, code length is {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("variable {column} takes part in no check")]
    IsolatedVariable { column: usize },
    #[error("LLR {index} is not finite")]
    NonFiniteLlr { index: usize },
}

/// Sign convention of the x-update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum XUpdateSign {
    /// `sum (z - u)`, the minimiser of the augmented Lagrangian.
    #[default]
    StandardAdmm,
    /// `sum (u - z)` with the same `lambda_i / rho` term, kept for comparison.
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderConfig {
    pub rho: f64,
    pub max_iterations: usize,
    pub primal_tolerance: f64,
    pub dual_tolerance: f64,
    pub x_update_sign: XUpdateSign,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            rho: 1.0,
            max_iterations: 1000,
            primal_tolerance: 1e-5,
            dual_tolerance: 1e-5,
            x_update_sign: XUpdateSign::StandardAdmm,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<(), DecodeError> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.rho) {
            return Err(DecodeError::InvalidConfig(format!("rho must be positive, got {}", self.rho)));
        }
        if self.max_iterations == 0 {
            return Err(DecodeError::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if !positive(self.primal_tolerance) || !positive(self.dual_tolerance) {
            return Err(DecodeError::InvalidConfig("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// A z-update: writes the projection of `v` onto the even parity polytope
/// of dimension `v.len()` into `out`.
pub trait Projector {
    fn project_even(&mut self, v: &[f64], out: &mut [f64]);
}

impl<F: FnMut(&[f64], &mut [f64])> Projector for F {
    fn project_even(&mut self, v: &[f64], out: &mut [f64]) {
        self(v, out)
    }
}

/// The projections shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorKind {
    Algorithm(Algorithm),
    Oracle,
}

/// [`Projector`] dispatching to one of the crate's projections.
#[derive(Debug)]
pub struct BuiltinProjector {
    kind: ProjectorKind,
    workspace: FixWorkspace,
}

impl BuiltinProjector {
    pub fn new(kind: ProjectorKind) -> Self {
        BuiltinProjector {
            kind,
            workspace: FixWorkspace::new(),
        }
    }

    pub fn fix() -> Self {
        Self::new(ProjectorKind::Algorithm(Algorithm::Fix))
    }
}

impl Projector for BuiltinProjector {
    fn project_even(&mut self, v: &[f64], out: &mut [f64]) {
        let even = ParityKind::Even;
        match self.kind {
            ProjectorKind::Algorithm(Algorithm::Fix) => {
                self.workspace.project_into(v, even, out);
            }
            ProjectorKind::Algorithm(Algorithm::ZhangSiegel) => out.copy_from_slice(&project_zhang_siegel(v, even)),
            ProjectorKind::Algorithm(Algorithm::WassonDraper) => out.copy_from_slice(&project_wasson_draper(v, even)),
            ProjectorKind::Oracle => out.copy_from_slice(&oracle::project(v, even)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    /// Residuals converged and `x` is a codeword.
    ConvergedIntegral,
    /// Residuals converged at a non-integral point or a non-codeword.
    ConvergedFractional,
    IterLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub hard_decision: Vec<u8>,
    pub status: DecodeStatus,
    pub iterations: usize,
    /// Final `x`.
    pub x: Vec<f64>,
}

/// Iterates of the decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderState {
    pub x: Vec<f64>,
    /// Per-check replicas, in the order of [`ParityCheckMatrix::row`].
    pub z: Vec<Vec<f64>>,
    pub u: Vec<Vec<f64>>,
    pub iteration: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

/// Distance from `{0, 1}` below which an `x_i` counts as integral.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-4;

/// Step-by-step ADMM decoder for one frame.
pub struct AdmmDecoder<'h, P> {
    h: &'h ParityCheckMatrix,
    cfg: DecoderConfig,
    projector: P,
    scaled_llr: Vec<f64>,
    state: DecoderState,
    input: Vec<f64>,
    projected: Vec<f64>,
}

impl<'h, P: Projector> AdmmDecoder<'h, P> {
    pub fn new(llr: &LlrVector, h: &'h ParityCheckMatrix, cfg: DecoderConfig, projector: P) -> Result<Self, DecodeError> {
        cfg.validate()?;
        if llr.len() != h.n() {
            return Err(DecodeError::DimensionMismatch {
                expected: h.n(),
                found: llr.len(),
            });
        }
        if let Some(column) = (0..h.n()).find(|&i| h.col(i).is_empty()) {
            return Err(DecodeError::IsolatedVariable { column });
        }
        let z: Vec<Vec<f64>> = h.rows().iter().map(|r| vec![0.5; r.len()]).collect();
        let u: Vec<Vec<f64>> = h.rows().iter().map(|r| vec![0.0; r.len()]).collect();
        let dmax = h.max_row_degree();
        Ok(AdmmDecoder {
            h,
            cfg,
            projector,
            scaled_llr: llr.values().iter().map(|&l| l / cfg.rho).collect(),
            state: DecoderState {
                x: vec![0.5; h.n()],
                z,
                u,
                iteration: 0,
                primal_residual: f64::INFINITY,
                dual_residual: f64::INFINITY,
            },
            input: vec![0.0; dmax],
            projected: vec![0.0; dmax],
        })
    }

    pub fn state(&self) -> &DecoderState {
        &self.state
    }

    /// One x/z/u sweep. `penalty` may adjust each freshly computed `x_i`.
    pub fn step_with(&mut self, penalty: &mut dyn FnMut(usize, f64) -> f64) {
        let h = self.h;
        let s = &mut self.state;

        // x-update from the per-variable sums of the replicas
        s.x.iter_mut().for_each(|v| *v = 0.0);
        for (j, row) in h.rows().iter().enumerate() {
            for (k, &i) in row.iter().enumerate() {
                s.x[i] += match self.cfg.x_update_sign {
                    XUpdateSign::StandardAdmm => s.z[j][k] - s.u[j][k],
                    XUpdateSign::Reversed => s.u[j][k] - s.z[j][k],
                };
            }
        }
        for i in 0..h.n() {
            let xi = (s.x[i] - self.scaled_llr[i]) / h.col(i).len() as f64;
            s.x[i] = penalty(i, xi);
        }

        let mut primal = 0.0;
        let mut dual = 0.0;
        for (j, row) in h.rows().iter().enumerate() {
            let dj = row.len();
            let (input, out) = (&mut self.input[..dj], &mut self.projected[..dj]);
            for (k, &i) in row.iter().enumerate() {
                input[k] = s.x[i] + s.u[j][k];
            }
            self.projector.project_even(input, out);
            for (k, &i) in row.iter().enumerate() {
                let r = s.x[i] - out[k];
                primal += r * r;
                let dz = out[k] - s.z[j][k];
                dual += dz * dz;
                s.u[j][k] += r;
                s.z[j][k] = out[k];
            }
        }
        s.primal_residual = primal.sqrt();
        s.dual_residual = self.cfg.rho * dual.sqrt();
        s.iteration += 1;
    }

    pub fn step(&mut self) {
        self.step_with(&mut |_, x| x)
    }

    pub fn converged(&self) -> bool {
        self.state.primal_residual < self.cfg.primal_tolerance && self.state.dual_residual < self.cfg.dual_tolerance
    }

    /// Runs to convergence or the iteration limit.
    pub fn run_with(mut self, penalty: &mut dyn FnMut(usize, f64) -> f64) -> DecodeOutcome {
        while self.state.iteration < self.cfg.max_iterations {
            self.step_with(penalty);
            if self.converged() {
                break;
            }
        }
        self.outcome()
    }

    pub fn run(self) -> DecodeOutcome {
        self.run_with(&mut |_, x| x)
    }

    fn outcome(&self) -> DecodeOutcome {
        let x = &self.state.x;
        let hard_decision: Vec<u8> = x.iter().map(|&v| u8::from(v >= 0.5)).collect();
        let status = if !self.converged() {
            DecodeStatus::IterLimit
        } else if x.iter().all(|&v| v.abs().min((v - 1.0).abs()) <= INTEGRALITY_TOLERANCE)
            && self.h.is_codeword(&hard_decision)
        {
            DecodeStatus::ConvergedIntegral
        } else {
            DecodeStatus::ConvergedFractional
        };
        DecodeOutcome {
            hard_decision,
            status,
            iterations: self.state.iteration,
            x: x.clone(),
        }
    }
}

/// Decodes one frame.
pub fn decode<P: Projector>(
    llr: &LlrVector,
    h: &ParityCheckMatrix,
    cfg: &DecoderConfig,
    projector: P,
) -> Result<DecodeOutcome, DecodeError> {
    Ok(AdmmDecoder::new(llr, h, *cfg, projector)?.run())
}

/// Decodes one frame, passing every updated `x_i` through `penalty(i, x_i)`.
pub fn decode_with_hook<P: Projector>(
    llr: &LlrVector,
    h: &ParityCheckMatrix,
    cfg: &DecoderConfig,
    projector: P,
    penalty: &mut dyn FnMut(usize, f64) -> f64,
) -> Result<DecodeOutcome, DecodeError> {
    Ok(AdmmDecoder::new(llr, h, *cfg, projector)?.run_with(penalty))
}

//! Closed-form dynamics of one atom and its coherence trajectories.
//!
//! The initial state is `cos(theta/2)|1> + e^{i phi} sin(theta/2)|0>`.
//! Everything is indexed by the free-space noise parameter
//! `q = 1 - exp(-gamma0 tau)`; near a boundary the actual damping is
//! `q' = 1 - (1 - q)^gamma_eff`, which stays representable when the
//! dynamics freeze (`gamma_eff = 0`).

use serde::{Deserialize, Serialize};

use crate::boundary::{rate_coefficients, suppression_factor, Geometry, PolarizationWeights};
use crate::error::{domain, Result};
use crate::measures;
use crate::qmath::{shannon_bits, CMatrix, Complex, DensityMatrix};

/// Tolerance of the freezing predicates (`sin theta = 0`, `f = 1`).
pub const FREEZE_TOL: f64 = 1e-12;
/// Threshold on `sup |dC/dq|` below which a trajectory counts as frozen.
pub const FROZEN_SLOPE: f64 = 1e-8;
/// Step of the central differences used to check freezing.
const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialAngles {
    theta: f64,
    phi: f64,
}

impl InitialAngles {
    /// `theta` in `[0, pi]`, `phi` in `[0, 2 pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        use std::f64::consts::{PI, TAU};
        if !(theta.is_finite() && (0.0..=PI).contains(&theta)) {
            return Err(domain("theta", theta, "must lie in [0, pi]"));
        }
        if !(phi.is_finite() && (0.0..TAU).contains(&phi)) {
            return Err(domain("phi", phi, "must lie in [0, 2 pi)"));
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// The pure initial state.
    pub fn initial_state(&self) -> DensityMatrix {
        let ket = [
            Complex::new((0.5 * self.theta).cos(), 0.0),
            Complex::from_polar((0.5 * self.theta).sin(), self.phi),
        ];
        DensityMatrix::pure(&ket).expect("unit ket")
    }
}

/// Environment and frequency scales for the closed-form evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionParams {
    pub geometry: Geometry,
    pub polarization: PolarizationWeights,
    /// Effective level spacing `Omega / omega0`. Only affects phases.
    pub omega_ratio: f64,
    /// `omega0 / gamma0`, used for phase accumulation.
    pub omega0_time_scale: f64,
}

impl Default for EvolutionParams {
    fn default() -> Self {
        Self {
            geometry: Geometry::Unbounded,
            polarization: PolarizationWeights::isotropic(),
            omega_ratio: 1.0,
            omega0_time_scale: 100.0,
        }
    }
}

impl EvolutionParams {
    pub fn new(geometry: Geometry, polarization: PolarizationWeights) -> Self {
        Self {
            geometry,
            polarization,
            ..Self::default()
        }
    }

    /// `Omega` in units of `gamma0`.
    pub fn omega(&self) -> f64 {
        self.omega_ratio * self.omega0_time_scale
    }

    fn validate(&self) -> Result<()> {
        if !(self.omega_ratio.is_finite() && self.omega_ratio > 0.0) {
            return Err(domain("omega_ratio", self.omega_ratio, "must be positive"));
        }
        if !(self.omega0_time_scale.is_finite() && self.omega0_time_scale > 0.0) {
            return Err(domain(
                "omega0_time_scale",
                self.omega0_time_scale,
                "must be positive",
            ));
        }
        Ok(())
    }
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if !(q.is_finite() && (0.0..=1.0).contains(&q)) {
        return Err(domain("q", q, "must lie in [0, 1]"));
    }
    Ok(())
}

fn check_open_q(q: f64) -> Result<()> {
    if !(q.is_finite() && q > 0.0 && q < 1.0) {
        return Err(domain("q", q, "derivative is defined on the open interval (0, 1)"));
    }
    Ok(())
}

fn check_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() {
        return Err(domain("theta", theta, "must be finite"));
    }
    Ok(())
}

/// Proper time `gamma0 * tau` at noise parameter `q < 1`.
pub fn proper_time(q: f64) -> f64 {
    -(-q).ln_1p()
}

/// Reduced density matrix at noise parameter `q`.
///
/// At `q = 1` the proper time is infinite; the dynamical phase is dropped and
/// the state is the ground state, or the initial state if the rate vanishes.
pub fn evolve_closed_form(
    angles: &InitialAngles,
    q: f64,
    params: &EvolutionParams,
) -> Result<DensityMatrix> {
    check_q(q)?;
    params.validate()?;
    let rates = rate_coefficients(&params.geometry, &params.polarization)?;
    let qp = rates.damping(q);
    let (sin_t, cos_t) = angles.theta.sin_cos();

    let excited = 0.5 * (1.0 + cos_t * (1.0 - qp) - qp);
    let dynamic_phase = if q < 1.0 {
        params.omega() * proper_time(q)
    } else {
        0.0
    };
    let coherence = Complex::from_polar(
        0.5 * sin_t * (1.0 - qp).sqrt(),
        -(dynamic_phase + angles.phi),
    );
    let m = CMatrix::from_vec(
        2,
        vec![
            Complex::new(excited, 0.0),
            coherence,
            coherence.conj(),
            Complex::new(1.0 - excited, 0.0),
        ],
    );
    DensityMatrix::new(m)
}

/// `C_l1 = |sin theta| (1 - q)^((1 - f)/2)`.
pub fn c_l1_trajectory(
    theta: f64,
    q: f64,
    geometry: &Geometry,
    polarization: &PolarizationWeights,
) -> Result<f64> {
    check_theta(theta)?;
    check_q(q)?;
    let qp = rate_coefficients(geometry, polarization)?.damping(q);
    Ok(theta.sin().abs() * (1.0 - qp).sqrt())
}

/// Closed-form relative entropy of coherence at noise parameter `q`.
pub fn c_re_trajectory(
    theta: f64,
    q: f64,
    geometry: &Geometry,
    polarization: &PolarizationWeights,
) -> Result<f64> {
    check_theta(theta)?;
    check_q(q)?;
    let qp = rate_coefficients(geometry, polarization)?.damping(q);
    Ok(c_re_at_damping(theta, qp))
}

/// Binary-entropy difference between the populations and the spectrum,
/// with `M = sin^2(theta) (1 - q') + [cos(theta) (1 - q') - q']^2`.
pub(crate) fn c_re_at_damping(theta: f64, qp: f64) -> f64 {
    let c = theta.cos();
    let p = 0.5 * (1.0 + c * (1.0 - qp) - qp);
    let m = (1.0 - c * c) * (1.0 - qp) + (c * (1.0 - qp) - qp).powi(2);
    let s = m.max(0.0).sqrt().min(1.0);
    let diag = shannon_bits([p, 1.0 - p]);
    let spectrum = shannon_bits([0.5 * (1.0 + s), 0.5 * (1.0 - s)]);
    (diag - spectrum).max(0.0)
}

fn check_suppression(f: f64) -> Result<f64> {
    if !f.is_finite() || f > 1.0 + FREEZE_TOL {
        return Err(domain("f", f, "suppression factor must be finite and at most 1"));
    }
    Ok((1.0 - f).max(0.0))
}

/// `|d C_l1 / dq| = |sin theta| (1 - f) (1 - q)^(-(1 + f)/2) / 2`.
pub fn dq_c_l1(theta: f64, q: f64, f: f64) -> Result<f64> {
    check_theta(theta)?;
    check_open_q(q)?;
    let gamma = check_suppression(f)?;
    Ok(0.5 * theta.sin().abs() * gamma * (1.0 - q).powf(-0.5 * (1.0 + f)))
}

/// `|d C_RE / dq|` from the chain rule through `q'`:
/// `dq'/dq = (1 - f)(1 - q)^(-f)` times
/// `-(1 + c)/2 { log2[(1 - c(1-q') + q')/(1 + c(1-q') - q')]
///               + (1 + c)(2q' - 1) log2[(1 - sqrt M)/(1 + sqrt M)] / (2 sqrt M) }`.
pub fn dq_c_re(theta: f64, q: f64, f: f64) -> Result<f64> {
    check_theta(theta)?;
    check_open_q(q)?;
    let gamma = check_suppression(f)?;
    let c = theta.cos();
    let one_plus_c = 1.0 + c;
    if gamma == 0.0 || one_plus_c == 0.0 || theta.sin() == 0.0 {
        return Ok(0.0);
    }
    let qp = 1.0 - (1.0 - q).powf(gamma);
    let dqp_dq = gamma * (1.0 - q).powf(-f);

    let populations = ((1.0 - c * (1.0 - qp) + qp) / (1.0 + c * (1.0 - qp) - qp)).log2();
    let m = (1.0 - c * c) * (1.0 - qp) + (c * (1.0 - qp) - qp).powi(2);
    let s = m.max(0.0).sqrt();
    let spectrum = if s < 1e-8 {
        // log2((1 - s)/(1 + s)) / s -> -2 / ln 2
        -one_plus_c * (2.0 * qp - 1.0) / std::f64::consts::LN_2
    } else {
        one_plus_c * (2.0 * qp - 1.0) * ((1.0 - s) / (1.0 + s)).log2() / (2.0 * s)
    };
    let dc_dqp = -0.5 * one_plus_c * (populations + spectrum);
    Ok((dc_dqp * dqp_dq).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FreezeReason {
    /// The initial state carries no coherence.
    Trivial,
    /// The boundary cancels the emission rate (`f = 1`).
    BoundaryInduced,
    None,
}

impl std::fmt::Display for FreezeReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FreezeReason::Trivial => "trivial",
            FreezeReason::BoundaryInduced => "boundary-induced",
            FreezeReason::None => "none",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreezingReport {
    pub l1_frozen: bool,
    pub re_frozen: bool,
    pub reason: FreezeReason,
    pub suppression: f64,
    pub gamma_eff: f64,
    /// Numerical `sup |dC_l1/dq|` over the check grid.
    pub sup_dq_l1: f64,
    /// Numerical `sup |dC_RE/dq|` over the check grid.
    pub sup_dq_re: f64,
    /// The predicates agree with the numerical slope classification.
    pub numerically_consistent: bool,
}

/// Interior grid `q = 0.01, ..., 0.99` used for numerical freezing checks.
pub fn freeze_check_grid() -> impl Iterator<Item = f64> {
    (1..=99).map(|k| f64::from(k) / 100.0)
}

/// Largest central-difference slope of `c` over [`freeze_check_grid`].
pub(crate) fn sup_slope(c: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut sup = 0.0_f64;
    for q in freeze_check_grid() {
        let slope = (c(q + FD_STEP)? - c(q - FD_STEP)?) / (2.0 * FD_STEP);
        sup = sup.max(slope.abs());
    }
    Ok(sup)
}

/// Decides whether each measure stays constant for all `q` and checks the
/// verdict against numerically evaluated slopes.
pub fn freezing_report(
    theta: f64,
    geometry: &Geometry,
    polarization: &PolarizationWeights,
) -> Result<FreezingReport> {
    check_theta(theta)?;
    let suppression = suppression_factor(geometry, polarization)?;
    let gamma_eff = rate_coefficients(geometry, polarization)?.gamma_eff;

    let incoherent = theta.sin().abs() <= FREEZE_TOL;
    let boundary = gamma_eff <= FREEZE_TOL;
    let frozen = incoherent || boundary;
    let reason = if incoherent {
        FreezeReason::Trivial
    } else if boundary {
        FreezeReason::BoundaryInduced
    } else {
        FreezeReason::None
    };

    let sup_dq_l1 = sup_slope(|q| c_l1_trajectory(theta, q, geometry, polarization))?;
    let sup_dq_re = sup_slope(|q| c_re_trajectory(theta, q, geometry, polarization))?;
    let numerically_consistent =
        (sup_dq_l1 < FROZEN_SLOPE) == frozen && (sup_dq_re < FROZEN_SLOPE) == frozen;

    Ok(FreezingReport {
        l1_frozen: frozen,
        re_frozen: frozen,
        reason,
        suppression,
        gamma_eff,
        sup_dq_l1,
        sup_dq_re,
        numerically_consistent,
    })
}

/// One row of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub q: f64,
    pub c_l1: f64,
    pub c_re: f64,
}

/// Coherence samples over a strictly increasing `q` grid.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CoherenceTrace {
    pub samples: Vec<TraceSample>,
}

/// Evenly spaced noise parameters `start..=stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Default for QGrid {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: 1.0,
            count: 101,
        }
    }
}

impl QGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        let grid = Self { start, stop, count };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        check_q(self.start)?;
        check_q(self.stop)?;
        if self.count < 2 {
            return Err(domain("count", self.count as f64, "grid needs at least 2 points"));
        }
        if self.stop <= self.start {
            return Err(domain("stop", self.stop, "must exceed start"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.count - 1;
        (0..self.count)
            .map(|k| {
                if k == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / n as f64
                }
            })
            .collect()
    }
}

/// Both coherence measures along a `q` grid.
pub fn trace(
    theta: f64,
    grid: &QGrid,
    geometry: &Geometry,
    polarization: &PolarizationWeights,
) -> Result<CoherenceTrace> {
    grid.validate()?;
    let samples = grid
        .points()
        .into_iter()
        .map(|q| {
            Ok(TraceSample {
                q,
                c_l1: c_l1_trajectory(theta, q, geometry, polarization)?,
                c_re: c_re_trajectory(theta, q, geometry, polarization)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoherenceTrace { samples })
}

/// Generic measures of the evolved matrix; the closed forms above must agree.
pub fn measured_coherence(
    angles: &InitialAngles,
    q: f64,
    params: &EvolutionParams,
) -> Result<(f64, f64)> {
    let rho = evolve_closed_form(angles, q, params)?;
    Ok((measures::c_l1(&rho), measures::c_re(&rho)?))
}

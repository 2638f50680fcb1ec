//! Bell-diagonal states with only atom A coupled to the field.
//!
//! The evolution is `(Lambda ⊗ id)` where `Lambda` is the single-atom map of
//! [`crate::single_qubit`]: atom A's transverse Bloch components shrink by
//! `sqrt(1 - q')` and rotate by the accumulated phase, its longitudinal
//! component goes to `(1 - q') b_z - q'`. Atom B is untouched.

use serde::{Deserialize, Serialize};

use crate::boundary::{rate_coefficients, suppression_factor, Geometry, PolarizationWeights};
use crate::error::{domain, Error, Result};
use crate::measures;
use crate::qmath::{shannon_bits, CMatrix, Complex, DensityMatrix};
use crate::single_qubit::{
    check_q, proper_time, sup_slope, EvolutionParams, FreezeReason, QGrid, FREEZE_TOL,
    FROZEN_SLOPE,
};

const PHYSICALITY_TOL: f64 = 1e-12;

/// Correlation vector `(c1, c2, c3)` of `(1 + sum_i c_i sigma_i ⊗ sigma_i) / 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellDiagonalParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BellDiagonalParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        for (name, v) in [("c1", c1), ("c2", c2), ("c3", c3)] {
            if !(v.is_finite() && (-1.0..=1.0).contains(&v)) {
                return Err(domain(name, v, "must lie in [-1, 1]"));
            }
        }
        let params = Self { c1, c2, c3 };
        for (label, value) in params.labelled_eigenvalues() {
            if value < -PHYSICALITY_TOL {
                return Err(Error::UnphysicalBellDiagonal { label, value });
            }
        }
        Ok(params)
    }

    fn labelled_eigenvalues(&self) -> [(&'static str, f64); 4] {
        let (c1, c2, c3) = (self.c1, self.c2, self.c3);
        [
            ("(1 + c3 + (c1 - c2))/4", 0.25 * (1.0 + c3 + (c1 - c2))),
            ("(1 + c3 - (c1 - c2))/4", 0.25 * (1.0 + c3 - (c1 - c2))),
            ("(1 - c3 + (c1 + c2))/4", 0.25 * (1.0 - c3 + (c1 + c2))),
            ("(1 - c3 - (c1 + c2))/4", 0.25 * (1.0 - c3 - (c1 + c2))),
        ]
    }

    /// Spectrum of the initial state (unsorted, block order).
    pub fn eigenvalues(&self) -> [f64; 4] {
        self.labelled_eigenvalues().map(|(_, v)| v)
    }
}

/// X-shaped matrix in the `{|11>, |10>, |01>, |00>}` basis.
pub fn bd_density(c: &BellDiagonalParams) -> DensityMatrix {
    let r = |x: f64| Complex::new(0.25 * x, 0.0);
    let mut m = CMatrix::from_real_diagonal(&[
        0.25 * (1.0 + c.c3),
        0.25 * (1.0 - c.c3),
        0.25 * (1.0 - c.c3),
        0.25 * (1.0 + c.c3),
    ]);
    m[(0, 3)] = r(c.c1 - c.c2);
    m[(3, 0)] = r(c.c1 - c.c2);
    m[(1, 2)] = r(c.c1 + c.c2);
    m[(2, 1)] = r(c.c1 + c.c2);
    DensityMatrix::new(m).expect("physical Bell-diagonal parameters give a valid state")
}

/// Single-atom amplitude damping plus phase rotation, applied to atom A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedChannel {
    damping: f64,
    phase: f64,
}

impl OneSidedChannel {
    pub fn new(damping: f64, phase: f64) -> Result<Self> {
        if !(damping.is_finite() && (0.0..=1.0).contains(&damping)) {
            return Err(domain("damping", damping, "must lie in [0, 1]"));
        }
        if !phase.is_finite() {
            return Err(domain("phase", phase, "must be finite"));
        }
        Ok(Self { damping, phase })
    }

    /// Channel reached at free-space noise parameter `q`.
    pub fn at(q: f64, params: &EvolutionParams) -> Result<Self> {
        check_q(q)?;
        let rates = rate_coefficients(&params.geometry, &params.polarization)?;
        let phase = if q < 1.0 {
            params.omega() * proper_time(q)
        } else {
            0.0
        };
        Self::new(rates.damping(q), phase)
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }
}

/// `(Lambda ⊗ id)` on an arbitrary 4x4 operator.
///
/// With `R_ab` the 2x2 blocks indexed by atom A:
/// `R_11 -> (1 - q') R_11`, `R_00 -> R_00 + q' R_11`,
/// `R_10 -> sqrt(1 - q') e^{-i phase} R_10`.
pub fn apply_one_sided_operator(m: &CMatrix, ch: &OneSidedChannel) -> Result<CMatrix> {
    if m.dim() != 4 {
        return Err(Error::Dimension {
            expected: 4,
            got: m.dim(),
        });
    }
    let qp = ch.damping;
    let coherence = Complex::from_polar((1.0 - qp).sqrt(), -ch.phase);
    let mut out = CMatrix::zeros(4);
    for k in 0..2 {
        for l in 0..2 {
            let excited = m[(k, l)];
            out[(k, l)] = excited * (1.0 - qp);
            out[(2 + k, 2 + l)] = m[(2 + k, 2 + l)] + excited * qp;
            out[(k, 2 + l)] = m[(k, 2 + l)] * coherence;
            out[(2 + k, l)] = m[(2 + k, l)] * coherence.conj();
        }
    }
    Ok(out)
}

pub fn apply_one_sided_channel(
    rho: &DensityMatrix,
    ch: &OneSidedChannel,
) -> Result<DensityMatrix> {
    DensityMatrix::new(apply_one_sided_operator(rho.matrix(), ch)?)
}

/// Choi matrix `sum_ij E_ij ⊗ (Lambda ⊗ id)(E_ij)` (16x16).
pub fn choi_matrix(ch: &OneSidedChannel) -> CMatrix {
    let mut choi = CMatrix::zeros(16);
    for i in 0..4 {
        for j in 0..4 {
            let mut unit = CMatrix::zeros(4);
            unit[(i, j)] = Complex::new(1.0, 0.0);
            let image = apply_one_sided_operator(&unit, ch).expect("4x4 input");
            for k in 0..4 {
                for l in 0..4 {
                    choi[(4 * i + k, 4 * j + l)] = image[(k, l)];
                }
            }
        }
    }
    choi
}

/// Evolved Bell-diagonal state at free-space noise parameter `q`.
pub fn evolve_bd(
    c: &BellDiagonalParams,
    q: f64,
    params: &EvolutionParams,
) -> Result<DensityMatrix> {
    apply_one_sided_channel(&bd_density(c), &OneSidedChannel::at(q, params)?)
}

/// `sqrt(1 - q') (|c1 + c2| + |c1 - c2|) / 2`
pub fn c_l1_bd(c: &BellDiagonalParams, q_prime: f64) -> f64 {
    0.5 * (1.0 - q_prime).max(0.0).sqrt() * ((c.c1 + c.c2).abs() + (c.c1 - c.c2).abs())
}

/// Populations of the evolved state, `{|11>, |10>, |01>, |00>}`.
fn evolved_populations(c: &BellDiagonalParams, qp: f64) -> [f64; 4] {
    let x = c.c3 * (1.0 - qp);
    [
        0.25 * (1.0 + x - qp),
        0.25 * (1.0 - x - qp),
        0.25 * (1.0 - x + qp),
        0.25 * (1.0 + x + qp),
    ]
}

/// Exact relative entropy of coherence of the evolved state.
///
/// The evolved matrix stays X-shaped; its `{|11>, |00>}` block has eigenvalues
/// `[1 + c3(1-q') ± sqrt(q'^2 + (1-q')(c1-c2)^2)]/4` and its `{|10>, |01>}`
/// block `[1 - c3(1-q') ± sqrt(q'^2 + (1-q')(c1+c2)^2)]/4`.
pub fn c_re_bd(c: &BellDiagonalParams, q_prime: f64) -> f64 {
    let qp = q_prime;
    let x = c.c3 * (1.0 - qp);
    let outer = (qp * qp + (1.0 - qp) * (c.c1 - c.c2).powi(2)).sqrt();
    let inner = (qp * qp + (1.0 - qp) * (c.c1 + c.c2).powi(2)).sqrt();
    let spectrum = [
        0.25 * (1.0 + x + outer),
        0.25 * (1.0 + x - outer),
        0.25 * (1.0 - x + inner),
        0.25 * (1.0 - x - inner),
    ];
    let diag = shannon_bits(evolved_populations(c, qp));
    (diag - shannon_bits(spectrum.map(|v| v.max(0.0)))).max(0.0)
}

/// The published closed form, which uses
/// `S = sqrt((1 - q')(c1 + c2)^2 + q'^2)` in both blocks.
///
/// Agrees with [`c_re_bd`] when `c1 c2 = 0`. Returns `None` when a logarithm
/// argument is negative, which happens for some `c` with `c1 c2 != 0`.
pub fn paper_formula_c_re_bd(c: &BellDiagonalParams, q_prime: f64) -> Option<f64> {
    let qp = q_prime;
    let x = c.c3 * (1.0 - qp);
    let s = ((1.0 - qp) * (c.c1 + c.c2).powi(2) + qp * qp).sqrt();
    let term = |a: f64| -> Option<f64> {
        if a < -PHYSICALITY_TOL {
            None
        } else {
            let a = a.max(0.0);
            Some(if a == 0.0 { 0.0 } else { a * (0.25 * a).log2() })
        }
    };
    let mut total = 0.0;
    for a in [1.0 + x - qp, 1.0 + x + qp, 1.0 - x - qp, 1.0 - x + qp] {
        total -= term(a)?;
    }
    for a in [1.0 + x - s, 1.0 + x + s, 1.0 - x - s, 1.0 - x + s] {
        total += term(a)?;
    }
    Some(0.25 * total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BdFreezingReport {
    pub frozen: bool,
    pub reason: FreezeReason,
    pub suppression: f64,
    pub gamma_eff: f64,
    pub sup_dq_l1: f64,
    pub sup_dq_re: f64,
    pub numerically_consistent: bool,
}

/// Coherence of a Bell-diagonal state is frozen iff `c1 = c2 = 0`
/// (nothing to lose) or the boundary cancels the emission rate.
pub fn freezing_report_bd(
    c: &BellDiagonalParams,
    geometry: &Geometry,
    polarization: &PolarizationWeights,
) -> Result<BdFreezingReport> {
    let suppression = suppression_factor(geometry, polarization)?;
    let rates = rate_coefficients(geometry, polarization)?;
    let incoherent = c.c1.abs() <= FREEZE_TOL && c.c2.abs() <= FREEZE_TOL;
    let boundary = rates.gamma_eff <= FREEZE_TOL;
    let frozen = incoherent || boundary;
    let reason = if incoherent {
        FreezeReason::Trivial
    } else if boundary {
        FreezeReason::BoundaryInduced
    } else {
        FreezeReason::None
    };
    let sup_dq_l1 = sup_slope(|q| Ok(c_l1_bd(c, rates.damping(q))))?;
    let sup_dq_re = sup_slope(|q| Ok(c_re_bd(c, rates.damping(q))))?;
    let numerically_consistent =
        (sup_dq_l1 < FROZEN_SLOPE) == frozen && (sup_dq_re < FROZEN_SLOPE) == frozen;
    Ok(BdFreezingReport {
        frozen,
        reason,
        suppression,
        gamma_eff: rates.gamma_eff,
        sup_dq_l1,
        sup_dq_re,
        numerically_consistent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BdTraceSample {
    pub q: f64,
    pub c_l1: f64,
    pub c_re: f64,
    /// `None` where the published formula takes the log of a negative number.
    pub c_re_paper_formula: Option<f64>,
}

pub fn trace_bd(
    c: &BellDiagonalParams,
    grid: &QGrid,
    geometry: &Geometry,
    polarization: &PolarizationWeights,
) -> Result<Vec<BdTraceSample>> {
    grid.validate()?;
    let rates = rate_coefficients(geometry, polarization)?;
    Ok(grid
        .points()
        .into_iter()
        .map(|q| {
            let qp = rates.damping(q);
            BdTraceSample {
                q,
                c_l1: c_l1_bd(c, qp),
                c_re: c_re_bd(c, qp),
                c_re_paper_formula: paper_formula_c_re_bd(c, qp),
            }
        })
        .collect())
}

/// Generic measures of the channel-evolved matrix.
pub fn measured_coherence_bd(
    c: &BellDiagonalParams,
    ch: &OneSidedChannel,
) -> Result<(f64, f64)> {
    let rho = apply_one_sided_channel(&bd_density(c), ch)?;
    Ok((measures::c_l1(&rho), measures::c_re(&rho)?))
}

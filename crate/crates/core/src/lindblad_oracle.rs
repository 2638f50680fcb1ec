//! Fixed-step RK4 integration of the Kossakowski–Lindblad master equation.
//!
//! The generator is assembled term by term from Pauli operators,
//! `-i[Omega/2 sigma_3, rho] + 1/2 sum_ij a_ij (2 s_j rho s_i - s_i s_j rho - rho s_i s_j)`
//! with `a = [[A, -iB, 0], [iB, A, 0], [0, 0, 0]]`, and never goes through the
//! damping-channel closed forms it is used to check.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{rate_coefficients, Geometry, PolarizationWeights};
use crate::error::{domain, Error, Result};
use crate::qmath::{hermitian_eigenvalues, pauli, CMatrix, Complex, DensityMatrix, POSITIVITY_TOL};
use crate::single_qubit::{evolve_closed_form, proper_time, EvolutionParams, InitialAngles};
use crate::two_qubit::{
    bd_density, c_re_bd, evolve_bd, paper_formula_c_re_bd, BellDiagonalParams, OneSidedChannel,
};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const MAX_STEP: f64 = 1e-2;
/// RK4 is stable on the imaginary axis up to `|lambda h| = 2 sqrt 2`.
const STABILITY_LIMIT: f64 = 2.5;

/// Step used by [`validate_all`].
pub const VALIDATION_STEP: f64 = 2e-4;
/// `omega0 / gamma0` used by [`validate_all`].
pub const VALIDATION_TIME_SCALE: f64 = 10.0;
/// Pass threshold of [`validate_all`].
pub const VALIDATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub a_coeff: f64,
    pub b_coeff: f64,
    pub omega: f64,
    /// 1, or 2 with the environment coupled to the first qubit only.
    pub n_qubits: usize,
}

impl GeneratorSpec {
    pub fn new(a_coeff: f64, b_coeff: f64, omega: f64, n_qubits: usize) -> Result<Self> {
        let spec = Self {
            a_coeff,
            b_coeff,
            omega,
            n_qubits,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Zero-temperature generator for the given environment.
    pub fn from_params(params: &EvolutionParams, n_qubits: usize) -> Result<Self> {
        let rates = rate_coefficients(&params.geometry, &params.polarization)?;
        Self::new(rates.a_coeff, rates.b_coeff, params.omega(), n_qubits)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a_coeff", self.a_coeff),
            ("b_coeff", self.b_coeff),
            ("omega", self.omega),
        ] {
            if !v.is_finite() {
                return Err(domain(name, v, "must be finite"));
            }
        }
        if !(self.n_qubits == 1 || self.n_qubits == 2) {
            return Err(domain("n_qubits", self.n_qubits as f64, "must be 1 or 2"));
        }
        if self.a_coeff < self.b_coeff.abs() {
            return Err(Error::NotCompletelyPositive {
                a: self.a_coeff,
                b_abs: self.b_coeff.abs(),
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Upper bound on the modulus of the generator's eigenvalues.
    fn spectral_bound(&self) -> f64 {
        self.omega.abs() + 4.0 * (self.a_coeff + self.b_coeff.abs())
    }
}

/// Kossakowski matrix `a_ij`, `i, j` in `{1, 2, 3}`.
pub fn kossakowski_matrix(a: f64, b: f64) -> [[Complex; 3]; 3] {
    let z = Complex::new(0.0, 0.0);
    [
        [Complex::new(a, 0.0), Complex::new(0.0, -b), z],
        [Complex::new(0.0, b), Complex::new(a, 0.0), z],
        [z, z, z],
    ]
}

struct DissipatorTerm {
    coeff: Complex,
    s_i: CMatrix,
    s_j: CMatrix,
    s_i_s_j: CMatrix,
}

/// The right-hand side `d rho / d tau` as a linear map on matrices.
pub struct Generator {
    dim: usize,
    hamiltonian: CMatrix,
    terms: Vec<DissipatorTerm>,
}

impl Generator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let minus_i = Complex::new(0.0, -1.0);
        let commutator = &(&self.hamiltonian * rho) - &(rho * &self.hamiltonian);
        let mut out = commutator.scale(minus_i);
        for t in &self.terms {
            let jump = &(&t.s_j * rho) * &t.s_i;
            let anti = &(&t.s_i_s_j * rho) + &(rho * &t.s_i_s_j);
            out.add_scaled(&jump, t.coeff);
            out.add_scaled(&anti, -0.5 * t.coeff);
        }
        out
    }
}

/// Builds the master-equation generator for `spec`.
pub fn build_rhs(spec: &GeneratorSpec) -> Result<Generator> {
    spec.validate()?;
    let [id2, s1, s2, s3] = pauli();
    let lift = |m: &CMatrix| -> CMatrix {
        if spec.n_qubits == 1 {
            m.clone()
        } else {
            m.kron(&id2)
        }
    };
    let sigma = [lift(&s1), lift(&s2), lift(&s3)];
    let a = kossakowski_matrix(spec.a_coeff, spec.b_coeff);
    let mut terms = Vec::with_capacity(9);
    for (i, row) in a.iter().enumerate() {
        for (j, &coeff) in row.iter().enumerate() {
            if coeff == Complex::new(0.0, 0.0) {
                continue;
            }
            terms.push(DissipatorTerm {
                coeff,
                s_i: sigma[i].clone(),
                s_j: sigma[j].clone(),
                s_i_s_j: &sigma[i] * &sigma[j],
            });
        }
    }
    Ok(Generator {
        dim: spec.dim(),
        hamiltonian: sigma[2].scale_real(0.5 * spec.omega),
        terms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub step: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { step: DEFAULT_STEP }
    }
}

impl IntegratorConfig {
    pub fn new(step: f64) -> Result<Self> {
        let cfg = Self { step };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0 && self.step <= MAX_STEP) {
            return Err(domain("step", self.step, "must lie in (0, 1e-2]"));
        }
        Ok(())
    }
}

fn rk4_step(g: &Generator, rho: &CMatrix, h: f64) -> CMatrix {
    let k1 = g.apply(rho);
    let mut y = rho.clone();
    y.add_scaled(&k1, Complex::new(0.5 * h, 0.0));
    let k2 = g.apply(&y);
    let mut y = rho.clone();
    y.add_scaled(&k2, Complex::new(0.5 * h, 0.0));
    let k3 = g.apply(&y);
    let mut y = rho.clone();
    y.add_scaled(&k3, Complex::new(h, 0.0));
    let k4 = g.apply(&y);

    let mut out = rho.clone();
    out.add_scaled(&k1, Complex::new(h / 6.0, 0.0));
    out.add_scaled(&k2, Complex::new(h / 3.0, 0.0));
    out.add_scaled(&k3, Complex::new(h / 3.0, 0.0));
    out.add_scaled(&k4, Complex::new(h / 6.0, 0.0));
    out
}

fn checked_state(m: CMatrix, spec: &GeneratorSpec, step: f64) -> Result<DensityMatrix> {
    let suggested = 0.5 * step;
    if !m.is_finite() {
        return Err(Error::Instability {
            step,
            suggested,
            detail: "state diverged".into(),
        });
    }
    let min = *hermitian_eigenvalues(&m)?.last().expect("nonempty spectrum");
    if min < -POSITIVITY_TOL {
        let bound = spec.spectral_bound();
        return Err(Error::Instability {
            step,
            suggested: if bound > 0.0 { suggested.min(1.0 / bound) } else { suggested },
            detail: format!("eigenvalue {min:e}"),
        });
    }
    DensityMatrix::new(m)
}

/// Integrates from `tau = 0` and returns the states at each of `taus`
/// (non-decreasing). Each segment uses `ceil(delta / step)` equal steps.
pub fn integrate_checkpoints(
    rho0: &DensityMatrix,
    spec: &GeneratorSpec,
    taus: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<DensityMatrix>> {
    cfg.validate()?;
    let g = build_rhs(spec)?;
    if rho0.dim() != g.dim() {
        return Err(Error::Dimension {
            expected: g.dim(),
            got: rho0.dim(),
        });
    }
    let bound = spec.spectral_bound();
    if bound * cfg.step > STABILITY_LIMIT {
        return Err(Error::Instability {
            step: cfg.step,
            suggested: 1.0 / bound,
            detail: format!("|lambda| h = {:.3} exceeds the RK4 stability region", bound * cfg.step),
        });
    }
    let mut out = Vec::with_capacity(taus.len());
    let mut rho = rho0.matrix().clone();
    let mut now = 0.0;
    for &tau in taus {
        if !(tau.is_finite() && tau >= now) {
            return Err(domain("tau", tau, "must be finite, non-negative and non-decreasing"));
        }
        let span = tau - now;
        if span > 0.0 {
            let n = (span / cfg.step).ceil().max(1.0) as usize;
            let h = span / n as f64;
            for _ in 0..n {
                rho = rk4_step(&g, &rho, h);
            }
        }
        now = tau;
        out.push(checked_state(rho.clone(), spec, cfg.step)?);
    }
    Ok(out)
}

/// State at proper time `tau` (in units of `1/gamma0`).
pub fn integrate(
    rho0: &DensityMatrix,
    spec: &GeneratorSpec,
    tau: f64,
    cfg: &IntegratorConfig,
) -> Result<DensityMatrix> {
    if tau == 0.0 {
        cfg.validate()?;
        spec.validate()?;
        return Ok(rho0.clone());
    }
    Ok(integrate_checkpoints(rho0, spec, &[tau], cfg)?.remove(0))
}

/// Max elementwise deviation between the single-atom closed form and RK4,
/// over the given `q < 1` values.
pub fn single_qubit_deviation(
    angles: &InitialAngles,
    qs: &[f64],
    params: &EvolutionParams,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let spec = GeneratorSpec::from_params(params, 1)?;
    let taus: Vec<f64> = qs.iter().map(|&q| proper_time(q)).collect();
    let numeric = integrate_checkpoints(&angles.initial_state(), &spec, &taus, cfg)?;
    let mut worst = 0.0_f64;
    for (&q, rho) in qs.iter().zip(&numeric) {
        let exact = evolve_closed_form(angles, q, params)?;
        worst = worst.max(exact.matrix().max_abs_diff(rho.matrix()));
    }
    Ok(worst)
}

/// Same comparison for a Bell-diagonal state under the one-sided channel.
pub fn two_qubit_deviation(
    c: &BellDiagonalParams,
    qs: &[f64],
    params: &EvolutionParams,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let spec = GeneratorSpec::from_params(params, 2)?;
    let taus: Vec<f64> = qs.iter().map(|&q| proper_time(q)).collect();
    let numeric = integrate_checkpoints(&bd_density(c), &spec, &taus, cfg)?;
    let mut worst = 0.0_f64;
    for (&q, rho) in qs.iter().zip(&numeric) {
        let exact = evolve_bd(c, q, params)?;
        worst = worst.max(exact.matrix().max_abs_diff(rho.matrix()));
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "system", rename_all = "lowercase")]
pub enum CaseSystem {
    Single { theta: f64, phi: f64 },
    Two { c1: f64, c2: f64, c3: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationCase {
    pub index: usize,
    pub system: CaseSystem,
    pub geometry: Geometry,
    pub polarization: PolarizationWeights,
    pub q: f64,
    pub error: f64,
    /// `|exact C_RE - published formula|` for two-qubit cases with `c1 c2 != 0`.
    pub formula_discrepancy: Option<f64>,
}

impl ValidationCase {
    pub fn describe(&self) -> String {
        let system = match &self.system {
            CaseSystem::Single { theta, phi } => {
                format!("single theta={theta:.6} phi={phi:.6}")
            }
            CaseSystem::Two { c1, c2, c3 } => format!("two c=({c1:.6}, {c2:.6}, {c3:.6})"),
        };
        let geometry = match self.geometry {
            Geometry::Unbounded => "unbounded".to_string(),
            Geometry::Mirror { u } => format!("mirror u={u:.6e}"),
        };
        let p = &self.polarization;
        format!(
            "case {}: {system}, {geometry}, alpha=({:.4}, {:.4}, {:.4}), q={:.6}",
            self.index,
            p.ax(),
            p.ay(),
            p.az(),
            self.q
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub n_cases: usize,
    pub max_error: f64,
    pub worst_case: String,
    /// Largest published-formula discrepancy among the random `c1 c2 != 0` cases.
    pub max_formula_discrepancy: f64,
    /// Cases where the published formula takes the log of a negative number.
    pub formula_undefined: usize,
    /// Largest discrepancy at `c = (0.8, 0.4, -0.2)` over `q' = 0, 0.1, ..., 1`,
    /// skipping points where the published formula is undefined.
    pub reference_discrepancy: f64,
    /// Grid points skipped in `reference_discrepancy`.
    pub reference_undefined: usize,
    pub cases: Vec<ValidationCase>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.max_error < VALIDATION_TOL
    }
}

fn validation_params(geometry: Geometry, polarization: PolarizationWeights) -> EvolutionParams {
    EvolutionParams {
        omega0_time_scale: VALIDATION_TIME_SCALE,
        ..EvolutionParams::new(geometry, polarization)
    }
}

/// Rejection-samples a physical correlation vector.
pub fn random_bell_diagonal(rng: &mut impl Rng) -> BellDiagonalParams {
    loop {
        let c1 = rng.gen_range(-1.0..=1.0);
        let c2 = rng.gen_range(-1.0..=1.0);
        let c3 = rng.gen_range(-1.0..=1.0);
        if let Ok(c) = BellDiagonalParams::new(c1, c2, c3) {
            return c;
        }
    }
}

struct PlannedCase {
    system: CaseSystem,
    geometry: Geometry,
    polarization: PolarizationWeights,
    q: f64,
}

fn plan_cases(seed: u64, n_cases: usize) -> Vec<PlannedCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let presets = [
        PolarizationWeights::parallel(),
        PolarizationWeights::perpendicular(),
        PolarizationWeights::isotropic(),
    ];
    let mut cases = Vec::with_capacity(n_cases);
    cases.push(PlannedCase {
        system: CaseSystem::Single {
            theta: PI / 2.0,
            phi: 0.0,
        },
        geometry: Geometry::Mirror { u: 1e-7 },
        polarization: PolarizationWeights::parallel(),
        q: 0.9,
    });
    for index in 1..n_cases {
        let polarization = presets[index % 3];
        let geometry = if rng.gen_bool(0.25) {
            Geometry::Unbounded
        } else {
            Geometry::Mirror {
                u: 10f64.powf(rng.gen_range(-1.5..1.0)),
            }
        };
        let system = if index % 2 == 1 {
            CaseSystem::Single {
                theta: rng.gen_range(0.0..=PI),
                phi: rng.gen_range(0.0..TAU),
            }
        } else {
            let c = random_bell_diagonal(&mut rng);
            CaseSystem::Two {
                c1: c.c1,
                c2: c.c2,
                c3: c.c3,
            }
        };
        let q = rng.gen_range(0.05..0.95);
        cases.push(PlannedCase {
            system,
            geometry,
            polarization,
            q,
        });
    }
    cases
}

fn run_case(index: usize, plan: PlannedCase) -> Result<ValidationCase> {
    let params = validation_params(plan.geometry, plan.polarization);
    let cfg = IntegratorConfig::new(VALIDATION_STEP)?;
    let (error, formula_discrepancy) = match plan.system {
        CaseSystem::Single { theta, phi } => {
            let angles = InitialAngles::new(theta, phi)?;
            (single_qubit_deviation(&angles, &[plan.q], &params, &cfg)?, None)
        }
        CaseSystem::Two { c1, c2, c3 } => {
            let c = BellDiagonalParams::new(c1, c2, c3)?;
            let error = two_qubit_deviation(&c, &[plan.q], &params, &cfg)?;
            let discrepancy = if c1 * c2 != 0.0 {
                let qp = OneSidedChannel::at(plan.q, &params)?.damping();
                Some(
                    paper_formula_c_re_bd(&c, qp)
                        .map_or(f64::NAN, |published| (c_re_bd(&c, qp) - published).abs()),
                )
            } else {
                None
            };
            (error, discrepancy)
        }
    };
    Ok(ValidationCase {
        index,
        system: plan.system,
        geometry: plan.geometry,
        polarization: plan.polarization,
        q: plan.q,
        error,
        formula_discrepancy,
    })
}

/// Randomized closed-form vs integrator comparison, deterministic in `seed`.
///
/// Case 0 is always a single atom at `u = 1e-7` with parallel polarization,
/// where the dynamics are frozen up to the phase rotation.
pub fn validate_all(seed: u64, n_cases: usize) -> Result<ValidationReport> {
    if n_cases == 0 {
        return Err(domain("n_cases", 0.0, "must be at least 1"));
    }
    let cases: Vec<ValidationCase> = plan_cases(seed, n_cases)
        .into_par_iter()
        .enumerate()
        .map(|(i, plan)| run_case(i, plan))
        .collect::<Result<_>>()?;

    let worst = cases
        .iter()
        .max_by(|a, b| a.error.total_cmp(&b.error))
        .expect("at least one case");
    let discrepancies = cases.iter().filter_map(|c| c.formula_discrepancy);
    let (mut max_formula_discrepancy, mut formula_undefined) = (0.0_f64, 0);
    for d in discrepancies {
        if d.is_nan() {
            formula_undefined += 1;
        } else {
            max_formula_discrepancy = max_formula_discrepancy.max(d);
        }
    }
    let reference = BellDiagonalParams::new(0.8, 0.4, -0.2)?;
    let (mut reference_discrepancy, mut reference_undefined) = (0.0_f64, 0);
    for k in 0..=10 {
        let qp = f64::from(k) / 10.0;
        match paper_formula_c_re_bd(&reference, qp) {
            Some(published) => {
                reference_discrepancy = reference_discrepancy.max((c_re_bd(&reference, qp) - published).abs())
            }
            None => reference_undefined += 1,
        }
    }

    Ok(ValidationReport {
        seed,
        n_cases,
        max_error: worst.error,
        worst_case: worst.describe(),
        max_formula_discrepancy,
        formula_undefined,
        reference_discrepancy,
        reference_undefined,
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::tensor;

    fn excited() -> DensityMatrix {
        DensityMatrix::diagonal(&[1.0, 0.0]).unwrap()
    }

    fn ground() -> DensityMatrix {
        DensityMatrix::diagonal(&[0.0, 1.0]).unwrap()
    }

    #[test]
    fn rhs_examples() {
        let g = build_rhs(&GeneratorSpec::new(0.0, 0.0, 0.0, 1).unwrap()).unwrap();
        let plus = DensityMatrix::pure(&[Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)]).unwrap();
        assert!(g.apply(plus.matrix()).max_abs_diff(&CMatrix::zeros(2)) == 0.0);

        let g = build_rhs(&GeneratorSpec::new(0.25, 0.25, 0.0, 1).unwrap()).unwrap();
        assert!(g.apply(ground().matrix()).max_abs_diff(&CMatrix::zeros(2)) < 1e-16);
        let d = g.apply(excited().matrix());
        assert!((d[(0, 0)].re + 1.0).abs() < 1e-15);
        assert!((d[(1, 1)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rhs_is_traceless_and_hermitian() {
        let spec = GeneratorSpec::new(0.4, -0.1, 3.0, 2).unwrap();
        let g = build_rhs(&spec).unwrap();
        let rho = bd_density(&BellDiagonalParams::new(0.3, -0.5, 0.2).unwrap());
        let d = g.apply(rho.matrix());
        assert!(d.trace().norm() < 1e-14);
        assert!(d.hermiticity_deviation() < 1e-15);
    }

    #[test]
    fn rejects_non_positive_kossakowski() {
        assert!(matches!(
            GeneratorSpec::new(0.1, 0.2, 0.0, 1),
            Err(Error::NotCompletelyPositive { .. })
        ));
        assert!(GeneratorSpec::new(0.1, 0.0, 0.0, 3).is_err());
    }

    #[test]
    fn zero_time_is_identity() {
        let spec = GeneratorSpec::new(0.25, 0.25, 5.0, 1).unwrap();
        let rho = excited();
        let out = integrate(&rho, &spec, 0.0, &IntegratorConfig::default()).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn step_bounds() {
        assert!(IntegratorConfig::new(2e-2).is_err());
        assert!(IntegratorConfig::new(0.0).is_err());
        let spec = GeneratorSpec::new(0.25, 0.25, 1000.0, 1).unwrap();
        let err = integrate(&excited(), &spec, 1.0, &IntegratorConfig::new(1e-2).unwrap());
        match err {
            Err(Error::Instability { suggested, .. }) => assert!(suggested < 1e-2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equator_state_matches_closed_form() {
        let angles = InitialAngles::new(PI / 2.0, 0.0).unwrap();
        let params = validation_params(Geometry::Unbounded, PolarizationWeights::isotropic());
        let cfg = IntegratorConfig::new(VALIDATION_STEP).unwrap();
        let dev = single_qubit_deviation(&angles, &[0.75], &params, &cfg).unwrap();
        assert!(dev < 1e-8, "{dev:e}");
    }

    #[test]
    fn bell_diagonal_matches_channel() {
        let c = BellDiagonalParams::new(0.8, 0.4, -0.2).unwrap();
        let params = validation_params(Geometry::Unbounded, PolarizationWeights::isotropic());
        let cfg = IntegratorConfig::new(VALIDATION_STEP).unwrap();
        let dev = two_qubit_deviation(&c, &[0.75], &params, &cfg).unwrap();
        assert!(dev < 1e-8, "{dev:e}");
    }

    #[test]
    fn stationary_states() {
        let cfg = IntegratorConfig::default();
        let spec = GeneratorSpec::new(0.25, 0.25, 7.0, 1).unwrap();
        let out = integrate(&ground(), &spec, 3.0, &cfg).unwrap();
        assert!(out.matrix().max_abs_diff(ground().matrix()) < 1e-12);

        let spec = GeneratorSpec::new(0.25, 0.25, 7.0, 2).unwrap();
        let b = DensityMatrix::pure(&[Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)]).unwrap();
        let rho = tensor(&ground(), &b).unwrap();
        let out = integrate(&rho, &spec, 3.0, &cfg).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn trace_and_hermiticity_drift() {
        let spec = GeneratorSpec::new(0.3, 0.2, 4.0, 2).unwrap();
        let rho0 = bd_density(&BellDiagonalParams::new(0.5, -0.2, 0.1).unwrap());
        let taus: Vec<f64> = (1..=10).map(f64::from).collect();
        for rho in integrate_checkpoints(&rho0, &spec, &taus, &IntegratorConfig::default()).unwrap() {
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-9);
            assert!(rho.matrix().hermiticity_deviation() < 1e-9);
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let angles = InitialAngles::new(1.0, 0.3).unwrap();
        let params = validation_params(Geometry::Unbounded, PolarizationWeights::isotropic());
        let coarse = IntegratorConfig::new(1e-2).unwrap();
        let fine = IntegratorConfig::new(5e-3).unwrap();
        let e1 = single_qubit_deviation(&angles, &[0.8], &params, &coarse).unwrap();
        let e2 = single_qubit_deviation(&angles, &[0.8], &params, &fine).unwrap();
        assert!(e1 / e2 >= 12.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn phase_advances_at_minus_omega() {
        let omega = 6.0;
        let spec = GeneratorSpec::new(0.0, 0.0, omega, 1).unwrap();
        let angles = InitialAngles::new(PI / 2.0, 0.0).unwrap();
        let tau = 1.3;
        let out = integrate(&angles.initial_state(), &spec, tau, &IntegratorConfig::default())
            .unwrap();
        let phase = out.get(0, 1).arg();
        let expected = (-omega * tau).rem_euclid(TAU) - if (-omega * tau).rem_euclid(TAU) > PI { TAU } else { 0.0 };
        assert!((phase - expected).abs() < 1e-6);
    }

    #[test]
    fn frozen_case_only_rotates() {
        let report = validate_all(7, 1).unwrap();
        assert!(report.max_error < 1e-10, "{:e}", report.max_error);
        let params = validation_params(Geometry::Mirror { u: 1e-7 }, PolarizationWeights::parallel());
        let spec = GeneratorSpec::from_params(&params, 1).unwrap();
        let angles = InitialAngles::new(PI / 2.0, 0.0).unwrap();
        let rho0 = angles.initial_state();
        let tau = proper_time(0.9);
        let out = integrate(&rho0, &spec, tau, &IntegratorConfig::new(VALIDATION_STEP).unwrap())
            .unwrap();
        // Undo the free rotation exp(-i Omega tau sigma_3 / 2).
        let undone = out.phase_rotated(&[0.5 * params.omega() * tau, -0.5 * params.omega() * tau]).unwrap();
        assert!(undone.matrix().max_abs_diff(rho0.matrix()) < 1e-10);
    }

    #[test]
    fn incoherent_input_has_diagonal_dynamics() {
        let angles = InitialAngles::new(0.0, 0.0).unwrap();
        let params = validation_params(Geometry::Mirror { u: 0.4 }, PolarizationWeights::perpendicular());
        let cfg = IntegratorConfig::new(VALIDATION_STEP).unwrap();
        let dev = single_qubit_deviation(&angles, &[0.2, 0.6, 0.9], &params, &cfg).unwrap();
        assert!(dev < 1e-12, "{dev:e}");
    }

    #[test]
    fn deterministic_validation() {
        let a = validate_all(42, 6).unwrap();
        let b = validate_all(42, 6).unwrap();
        assert_eq!(a, b);
        assert!(a.passed());
        assert!(a.reference_discrepancy > 0.1);
    }
}

//! Small dense complex matrices, density matrices and the Bloch picture.
//!
//! Two-qubit matrices use the basis ordering `{|11>, |10>, |01>, |00>}`,
//! i.e. the standard Kronecker ordering with the excited state `|1>` first.
//! With this ordering a single-qubit `sigma_z` is `diag(1, -1)` and the
//! Bell-diagonal family reads as an X-shaped matrix.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

pub type Complex = Complex64;

/// Tolerance for Hermiticity and unit trace of a density matrix.
pub const STATE_TOL: f64 = 1e-12;
/// Eigenvalues in `(-POSITIVITY_TOL, 0)` are treated as round-off and clamped.
pub const POSITIVITY_TOL: f64 = 1e-10;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if the length is not a square.
    pub fn from_vec(dim: usize, data: Vec<Complex>) -> Self {
        assert_eq!(data.len(), dim * dim, "expected {} entries", dim * dim);
        Self { dim, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, 0.0);
        }
        m
    }

    /// `|psi><psi|` for a (not necessarily normalized) ket.
    pub fn outer(ket: &[Complex]) -> Self {
        let n = ket.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = ket[i] * ket[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, other: &CMatrix, s: Complex) {
        assert_eq!(self.dim, other.dim);
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Largest `|m_ij - conj(m_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn mul_vec(&self, v: &[Complex]) -> Vec<Complex> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Pauli matrices in the `{|1>, |0>}` basis: `[identity, sigma_x, sigma_y, sigma_z]`.
pub fn pauli() -> [CMatrix; 4] {
    let i = Complex::i();
    [
        CMatrix::identity(2),
        CMatrix::from_vec(2, vec![ZERO, ONE, ONE, ZERO]),
        CMatrix::from_vec(2, vec![ZERO, -i, i, ZERO]),
        CMatrix::from_vec(2, vec![ONE, ZERO, ZERO, -ONE]),
    ]
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Column `k` holds the normalized eigenvector for `values[k]`.
    pub vectors: CMatrix,
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
///
/// 2x2 inputs use the closed quadratic form, larger inputs the cyclic
/// complex Jacobi method.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    if m.dim() == 2 {
        let a = m[(0, 0)].re;
        let d = m[(1, 1)].re;
        let b = m[(0, 1)];
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        return Ok(vec![mean + radius, mean - radius]);
    }
    Ok(jacobi(m).values)
}

/// Full eigen-decomposition (values descending, vectors as columns).
pub fn hermitian_eigen(m: &CMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    Ok(jacobi(m))
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if !m.is_finite() {
        let idx = m
            .as_slice()
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
            .unwrap_or(0);
        return Err(Error::NonFinite {
            row: idx / m.dim(),
            col: idx % m.dim(),
        });
    }
    let scale = m.as_slice().iter().map(|z| z.norm()).fold(1.0, f64::max);
    let deviation = m.hermiticity_deviation();
    if deviation > STATE_TOL * scale {
        return Err(Error::NonHermitian { deviation });
    }
    Ok(())
}

fn jacobi(m: &CMatrix) -> HermitianEigen {
    let n = m.dim();
    let mut a = m.clone();
    // Start from the exactly Hermitian part.
    for i in 0..n {
        a[(i, i)] = Complex::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = 0.5 * (a[(i, j)] + a[(j, i)].conj());
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    let mut v = CMatrix::identity(n);
    let norm: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-17 * norm.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r; // e^{i alpha}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = 0.5 * (2.0 * r).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                let ph_conj = phase.conj();
                // J = [[c, -s], [s e^{-i alpha}, c e^{-i alpha}]] on (p, q).
                let jpp = Complex::new(c, 0.0);
                let jpq = Complex::new(-s, 0.0);
                let jqp = ph_conj * s;
                let jqq = ph_conj * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, k)];
        }
    }
    HermitianEigen { values, vectors }
}

/// `x log2 x` with the convention `0 log 0 = 0`.
pub(crate) fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Shannon entropy in bits of a list of probabilities.
pub(crate) fn shannon_bits(p: impl IntoIterator<Item = f64>) -> f64 {
    -p.into_iter().map(xlog2x).sum::<f64>()
}

/// Validated density matrix of one or two qubits.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    /// Validates dimension, finiteness, Hermiticity, unit trace and positivity.
    pub fn new(m: CMatrix) -> Result<Self> {
        let dim = m.dim();
        if dim != 2 && dim != 4 {
            return Err(Error::Dimension {
                expected: if dim < 3 { 2 } else { 4 },
                got: dim,
            });
        }
        check_hermitian(&m)?;
        let trace = m.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::TraceNotUnit { trace: trace.re });
        }
        let smallest = *hermitian_eigenvalues(&m)?.last().unwrap();
        if smallest < -POSITIVITY_TOL {
            return Err(Error::NotPositive {
                eigenvalue: smallest,
            });
        }
        Ok(Self(m))
    }

    /// Pure state `|psi><psi|`; the ket is normalized first.
    pub fn pure(ket: &[Complex]) -> Result<Self> {
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(domain("ket norm", norm, "must be finite and nonzero"));
        }
        let normalized: Vec<Complex> = ket.iter().map(|z| z / norm).collect();
        Self::new(CMatrix::outer(&normalized))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(CMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_real_diagonal(populations))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.0[(i, j)]
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.0).expect("density matrix is Hermitian by construction")
    }

    /// Same matrix conjugated by a diagonal unitary `diag(e^{i phases})`.
    pub fn phase_rotated(&self, phases: &[f64]) -> Result<Self> {
        if phases.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: phases.len(),
            });
        }
        let mut m = self.0.clone();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                m[(i, j)] *= Complex::from_polar(1.0, phases[i] - phases[j]);
            }
        }
        Self::new(m)
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix::{:?}", self.0)
    }
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(m: &DensityMatrix) -> Result<f64> {
    let mut total = 0.0;
    for lambda in m.eigenvalues() {
        if lambda < -POSITIVITY_TOL {
            return Err(Error::NotPositive { eigenvalue: lambda });
        }
        total -= xlog2x(lambda.max(0.0));
    }
    Ok(total.max(0.0))
}

/// Removes every off-diagonal element.
pub fn diagonal_part(m: &DensityMatrix) -> DensityMatrix {
    let diag: Vec<f64> = (0..m.dim()).map(|i| m.get(i, i).re).collect();
    DensityMatrix(CMatrix::from_real_diagonal(&diag))
}

/// `a ⊗ b` for two single-qubit states.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    for m in [a, b] {
        if m.dim() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                got: m.dim(),
            });
        }
    }
    Ok(DensityMatrix(a.0.kron(&b.0)))
}

/// Single-qubit Bloch vector, `rho = (I + b.sigma) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let b = Self { x, y, z };
        let norm = b.norm();
        if !norm.is_finite() || norm > 1.0 + STATE_TOL {
            return Err(Error::UnphysicalBloch { norm });
        }
        Ok(b)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

pub fn bloch_to_density(b: &BlochVector) -> DensityMatrix {
    let m = CMatrix::from_vec(
        2,
        vec![
            Complex::new(0.5 * (1.0 + b.z), 0.0),
            Complex::new(0.5 * b.x, -0.5 * b.y),
            Complex::new(0.5 * b.x, 0.5 * b.y),
            Complex::new(0.5 * (1.0 - b.z), 0.0),
        ],
    );
    DensityMatrix(m)
}

pub fn density_to_bloch(m: &DensityMatrix) -> Result<BlochVector> {
    if m.dim() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: m.dim(),
        });
    }
    let off = m.get(1, 0);
    BlochVector::new(
        2.0 * off.re,
        2.0 * off.im,
        (m.get(0, 0) - m.get(1, 1)).re,
    )
}

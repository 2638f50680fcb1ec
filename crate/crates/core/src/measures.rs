//! Coherence quantifiers in the computational (energy eigenstate) basis.

use crate::error::Result;
use crate::qmath::{diagonal_part, von_neumann_entropy, DensityMatrix};

/// l1 norm of coherence: sum of the moduli of all off-diagonal entries.
pub fn c_l1(m: &DensityMatrix) -> f64 {
    let n = m.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += m.get(i, j).norm();
            }
        }
    }
    total
}

/// Relative entropy of coherence `S(rho_diag) - S(rho)` in bits.
///
/// Computed from an exact eigen-decomposition of `m`.
pub fn c_re(m: &DensityMatrix) -> Result<f64> {
    let s_diag = von_neumann_entropy(&diagonal_part(m))?;
    let s = von_neumann_entropy(m)?;
    Ok((s_diag - s).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{CMatrix, Complex};

    #[test]
    fn diagonal_states_have_no_coherence() {
        let d = DensityMatrix::diagonal(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(c_l1(&d), 0.0);
        assert_eq!(c_re(&d).unwrap(), 0.0);
    }

    #[test]
    fn plus_state_is_maximally_coherent() {
        let one = Complex::new(1.0, 0.0);
        let plus = DensityMatrix::pure(&[one, one]).unwrap();
        assert!((c_l1(&plus) - 1.0).abs() < 1e-15);
        assert!((c_re(&plus).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn x_shaped_two_qubit_state() {
        // anti-diagonal {0.1, 0.3, 0.3, 0.1}: l1 = 2 * (0.1 + 0.3)
        let mut m = CMatrix::from_real_diagonal(&[0.2, 0.3, 0.3, 0.2]);
        m[(0, 3)] = Complex::new(0.1, 0.0);
        m[(3, 0)] = Complex::new(0.1, 0.0);
        m[(1, 2)] = Complex::new(0.3, 0.0);
        m[(2, 1)] = Complex::new(0.3, 0.0);
        let rho = DensityMatrix::new(m).unwrap();
        assert!((c_l1(&rho) - 0.8).abs() < 1e-15);
    }
}

//! Reduced density operators produced by partial traces.

use super::ComplexMatrix;

/// A Hermitian operator on a retained subset of parties.
///
/// For a reduction of a single unnormalized pure state the trace equals the
/// squared norm of the source state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    parties: Vec<usize>,
    matrix: ComplexMatrix,
}

/// Outcome of a proportionality-to-identity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IdentityCheck {
    /// The operator equals `factor * I` within tolerance.
    Proportional { factor: f64 },
    /// Max-norm distance from the best scaled identity.
    NotProportional { max_deviation: f64 },
}

impl IdentityCheck {
    pub fn is_proportional(&self) -> bool {
        matches!(self, IdentityCheck::Proportional { .. })
    }
}

impl DensityOperator {
    pub(crate) fn new(parties: Vec<usize>, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), matrix.cols());
        Self { parties, matrix }
    }

    /// Retained party indices, ascending.
    pub fn parties(&self) -> &[usize] {
        &self.parties
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Real part of the trace (the imaginary part vanishes for reductions).
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Best identity scale `tr/dim` and the max-norm deviation from it.
    pub fn identity_proportionality(&self) -> (f64, f64) {
        let factor = self.trace() / self.dim() as f64;
        let mut deviation: f64 = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let target = if i == j { factor } else { 0.0 };
                let entry = self.matrix.get(i, j);
                let diff = ((entry.re - target).powi(2) + entry.im.powi(2)).sqrt();
                deviation = deviation.max(diff);
            }
        }
        (factor, deviation)
    }

    /// Tests `||rho - (tr/dim) I||_max <= tol`, reporting the factor on
    /// success and the deviation on failure.
    pub fn proportional_to_identity(&self, tol: f64) -> IdentityCheck {
        let (factor, deviation) = self.identity_proportionality();
        if deviation <= tol {
            IdentityCheck::Proportional { factor }
        } else {
            IdentityCheck::NotProportional {
                max_deviation: deviation,
            }
        }
    }

    /// Max-norm distance from the adjoint.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let diff = self.matrix.get(i, j) - self.matrix.get(j, i).conj();
                dev = dev.max(diff.norm());
            }
        }
        dev
    }

    /// Purity `tr(rho^2) / tr(rho)^2` of the trace-rescaled operator.
    ///
    /// Equals 1 for pure reductions and `1/dim` for maximally mixed ones.
    pub fn normalized_purity(&self) -> f64 {
        let mut sq: f64 = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                sq += self.matrix.get(i, j).norm_sqr();
            }
        }
        let tr = self.trace();
        sq / (tr * tr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn diag(values: &[f64]) -> DensityOperator {
        let dim = values.len();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        DensityOperator::new((0..dim).collect(), m)
    }

    #[test]
    fn identity_is_proportional_with_factor_one() {
        let check = diag(&[1.0, 1.0]).proportional_to_identity(1e-12);
        assert_eq!(check, IdentityCheck::Proportional { factor: 1.0 });
    }

    #[test]
    fn unbalanced_diagonal_reports_deviation() {
        let check = diag(&[1.0, 0.0]).proportional_to_identity(1e-8);
        match check {
            IdentityCheck::NotProportional { max_deviation } => {
                assert!((max_deviation - 0.5).abs() < 1e-12)
            }
            _ => panic!("expected failure"),
        }
    }

    #[test]
    fn purity_of_scaled_identity() {
        let purity = diag(&[2.0, 2.0, 2.0]).normalized_purity();
        assert!((purity - 1.0 / 3.0).abs() < 1e-12);
    }
}

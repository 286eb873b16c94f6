//! The least-squares data-fidelity term phi(x) = ||Ax - b||^2 / 2.

use crate::error::{Error, Result};
use crate::sensing::{spectral_norm_sq, SensingMatrix};
use crate::vector::DenseVector;

/// Sensing matrix, observation and the cached gradient Lipschitz constant
/// L = ||A||_2^2.
#[derive(Debug, Clone)]
pub struct LeastSquaresProblem {
    a: SensingMatrix,
    b: DenseVector,
    lipschitz: f64,
}

impl LeastSquaresProblem {
    pub fn new(a: SensingMatrix, b: DenseVector) -> Result<Self> {
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch {
                context: "observation length",
                expected: a.rows(),
                got: b.len(),
            });
        }
        let lipschitz = spectral_norm_sq(&a);
        if !(lipschitz > 0.0) {
            return Err(Error::param("sensing matrix has zero spectral norm"));
        }
        Ok(Self { a, b, lipschitz })
    }

    pub fn matrix(&self) -> &SensingMatrix {
        &self.a
    }

    pub fn observation(&self) -> &DenseVector {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn measurements(&self) -> usize {
        self.a.rows()
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// phi(x) = ||Ax - b||^2 / 2.
    pub fn loss(&self, x: &DenseVector) -> f64 {
        self.a.matvec(x).sub(&self.b).norm_l2_sq() / 2.0
    }

    /// Residual Ax - b.
    pub fn residual(&self, x: &DenseVector) -> DenseVector {
        self.a.matvec(x).sub(&self.b)
    }

    /// grad phi(x) = A^T (Ax - b).
    pub fn gradient(&self, x: &DenseVector) -> Result<DenseVector> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "gradient input",
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(self.a.matvec_t(&self.residual(x)))
    }
}

/// Free-function form of the gradient A^T (Ax - b).
pub fn ls_gradient(prob: &LeastSquaresProblem, x: &DenseVector) -> Result<DenseVector> {
    prob.gradient(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use crate::sensing::{gen_gaussian, MatrixKind};
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn identity(n: usize) -> SensingMatrix {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        SensingMatrix::from_dense(n, n, data, MatrixKind::Custom, 0).unwrap()
    }

    #[test]
    fn identity_gradient() {
        let prob = LeastSquaresProblem::new(identity(2), DenseVector::new(vec![1.0, 0.0]).unwrap())
            .unwrap();
        let g = prob.gradient(&DenseVector::zeros(2)).unwrap();
        assert_eq!(g.as_slice(), &[-1.0, 0.0]);
    }

    #[test]
    fn zero_residual_gradient() {
        let prob =
            LeastSquaresProblem::new(identity(3), DenseVector::new(vec![1.0, -2.0, 0.5]).unwrap())
                .unwrap();
        let g = prob
            .gradient(&DenseVector::new(vec![1.0, -2.0, 0.5]).unwrap())
            .unwrap();
        assert!(g.norm_inf() < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let a = gen_gaussian(6, 10, 21).unwrap();
        let mut rng = stream_rng(5, &[]);
        let b = DenseVector::from_raw(
            (0..6)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect(),
        );
        let prob = LeastSquaresProblem::new(a, b).unwrap();
        let x = DenseVector::from_raw(
            (0..10)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect(),
        );
        let g = prob.gradient(&x).unwrap();
        let h = 1e-6;
        for i in 0..10 {
            let mut plus = x.as_slice().to_vec();
            let mut minus = plus.clone();
            plus[i] += h;
            minus[i] -= h;
            let fd = (prob.loss(&DenseVector::from_raw(plus))
                - prob.loss(&DenseVector::from_raw(minus)))
                / (2.0 * h);
            let denom = g[i].abs().max(1.0);
            assert!(
                (fd - g[i]).abs() / denom < 1e-6,
                "coord {i}: {fd} vs {}",
                g[i]
            );
        }
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let a = identity(3);
        assert!(LeastSquaresProblem::new(a.clone(), DenseVector::zeros(2)).is_err());
        let prob = LeastSquaresProblem::new(a, DenseVector::zeros(3)).unwrap();
        assert!(prob.gradient(&DenseVector::zeros(2)).is_err());
    }

    #[test]
    fn lipschitz_bounds_operator_norm() {
        let a = gen_gaussian(8, 20, 3).unwrap();
        let prob = LeastSquaresProblem::new(a.clone(), DenseVector::zeros(8)).unwrap();
        let l = prob.lipschitz();
        let mut rng = stream_rng(17, &[]);
        for _ in 0..50 {
            let v = DenseVector::from_raw(
                (0..20)
                    .map(|_| rng.sample::<f64, _>(StandardNormal))
                    .collect(),
            );
            let lhs = a.matvec_t(&a.matvec(&v)).norm_l2();
            assert!(lhs <= (l + 1e-6) * v.norm_l2());
        }
    }
}

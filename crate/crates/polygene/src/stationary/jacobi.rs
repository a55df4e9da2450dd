//! Gauss-Jacobi quadrature via Golub-Welsch: nodes and weights for the
//! weight `(1-t)^alpha (1+t)^beta` on `[-1, 1]`, plus the `[0, 1]` wrapper
//! used for Beta-like endpoint singularities. With `alpha = beta = 0` this
//! is Gauss-Legendre.

use nalgebra::DMatrix;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GaussJacobi {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    alpha: f64,
    beta: f64,
}

impl GaussJacobi {
    pub fn new(degree: usize, alpha: f64, beta: f64) -> Result<Self> {
        if degree < 2 {
            return Err(Error::config("quadrature degree must be at least 2"));
        }
        if !(alpha > -1.0) || !(beta > -1.0) {
            return Err(Error::config("Jacobi exponents must exceed -1"));
        }

        // Symmetric tridiagonal Jacobi matrix from the three-term
        // recurrence; its eigenvalues are the nodes and the squared first
        // eigenvector components give the weights (Golub-Welsch).
        let mut m = DMatrix::<f64>::zeros(degree, degree);
        let mut diag = (beta - alpha) / (2.0 + alpha + beta);
        for i in 0..degree - 1 {
            let k = i as f64 + 1.0;
            let denom = 2.0 * k + alpha + beta;
            let off = 2.0 / denom
                * (k * (k + alpha) * (k + beta) * (k + alpha + beta)
                    / ((denom + 1.0) * (denom - 1.0)))
                    .sqrt();
            m[(i, i)] = diag;
            m[(i, i + 1)] = off;
            m[(i + 1, i)] = off;
            diag = (beta * beta - alpha * alpha) / (denom * (denom + 2.0));
        }
        m[(degree - 1, degree - 1)] = diag;

        let eigen = m.symmetric_eigen();
        // mu_0 = integral of the weight = 2^(a+b+1) B(a+1, b+1)
        let mu0 = ((alpha + beta + 1.0) * (2.0f64).ln() + ln_gamma(alpha + 1.0)
            + ln_gamma(beta + 1.0)
            - ln_gamma(alpha + beta + 2.0))
            .exp();

        let mut pairs: Vec<(f64, f64)> = eigen
            .eigenvalues
            .iter()
            .copied()
            .zip(eigen.eigenvectors.row(0).iter().map(|v| v * v * mu0))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

        Ok(GaussJacobi {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
            alpha,
            beta,
        })
    }

    pub fn degree(&self) -> usize {
        self.nodes.len()
    }

    /// Integrate `(1-t)^alpha (1+t)^beta f(t)` over `[-1, 1]`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| w * f(*t))
            .sum()
    }

    /// Integrate `x^beta (1-x)^alpha f(x)` over `[0, 1]`.
    pub fn integrate_01(&self, f: impl Fn(f64) -> f64) -> f64 {
        let scale = (2.0f64).powf(-(self.alpha + self.beta + 1.0));
        scale * self.integrate(|t| f(0.5 * (1.0 + t)))
    }

    /// Nodes mapped to `[0, 1]`.
    pub fn nodes_01(&self) -> impl Iterator<Item = f64> + '_ {
        self.nodes.iter().map(|t| 0.5 * (1.0 + t))
    }
}

//! Perron roots of nonnegative irreducible blocks with Collatz–Wielandt
//! enclosures.

use serde::Serialize;

use super::matrix::FloatMatrix;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 100_000;

/// Spectral radius estimate with a two-sided enclosure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusCertificate {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    /// Strong component that realized the maximum.
    pub block_id: usize,
    pub block_vertices: Vec<usize>,
    pub converged: bool,
}

impl RadiusCertificate {
    /// A value known exactly (1×1 blocks, α·d⁺ eigenvalues).
    pub fn exact(value: f64) -> Self {
        RadiusCertificate {
            estimate: value,
            lower: value,
            upper: value,
            iterations: 0,
            block_id: 0,
            block_vertices: Vec::new(),
            converged: true,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Absolute slack for comparisons at relative tolerance `tol`.
    pub fn slack(&self, tol: f64) -> f64 {
        tol * self.upper.abs().max(1.0)
    }
}

/// Perron root of a nonnegative irreducible matrix.
///
/// Power iteration on `M + I` from the all-ones vector. After each product
/// `y = (M + I)x` the ratios `y_i / x_i` bracket ρ(M) + 1 (Collatz–Wielandt).
/// The bracket is widened by the worst-case rounding of the products so it
/// stays an enclosure in floating point. Stops once
/// `upper − lower <= tol · max(1, upper)`; the certificate is flagged
/// unconverged when the iteration cap is hit.
pub fn perron_radius(block: &FloatMatrix, tol: f64) -> RadiusCertificate {
    perron_radius_capped(block, tol, MAX_ITERATIONS)
}

pub fn perron_radius_capped(
    block: &FloatMatrix,
    tol: f64,
    max_iterations: usize,
) -> RadiusCertificate {
    let n = block.order();
    if n == 1 {
        return RadiusCertificate::exact(block[(0, 0)]);
    }
    debug_assert!(block.is_nonnegative());
    // Entry rounding plus n-term nonnegative sums plus the division.
    let rel = (n as f64 + 3.0) * f64::EPSILON;
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let mut cert = RadiusCertificate {
        estimate: f64::NAN,
        lower: 0.0,
        upper: f64::INFINITY,
        iterations: 0,
        block_id: 0,
        block_vertices: Vec::new(),
        converged: false,
    };
    while cert.iterations < max_iterations {
        cert.iterations += 1;
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = x[i] + block.row(i).iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (yi, xi) in y.iter().zip(&x) {
            let r = yi / xi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let slack = f64::EPSILON * (hi + 1.0);
        let lower = (lo * (1.0 - rel) - 1.0 - slack).max(0.0);
        let upper = hi * (1.0 + rel) - 1.0 + slack;
        // Enclosures from successive iterates are all valid; keep the tightest.
        cert.lower = cert.lower.max(lower);
        cert.upper = cert.upper.min(upper);
        cert.estimate = 0.5 * (cert.lower + cert.upper);
        if cert.upper - cert.lower <= tol * cert.upper.max(1.0) {
            cert.converged = true;
            break;
        }
        let scale = y.iter().copied().fold(0.0, f64::max);
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / scale;
        }
    }
    cert
}

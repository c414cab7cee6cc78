//! All complex roots of small rational polynomials (Aberth–Ehrlich).

use num_complex::Complex64;
use num_traits::Zero;

use super::poly::PolynomialR;
use super::rational::to_f64;
use crate::error::{Error, Result};

pub const MAX_ROOT_DEGREE: usize = 16;
const MAX_ITERATIONS: usize = 1000;

/// Roots of `p` as a multiset (sorted by real part, then imaginary part).
///
/// `p` is first split exactly into square-free factors, so the iteration
/// only ever sees simple roots and a root of multiplicity k is repeated k
/// times. Per factor, iteration stops once every root `r` has
/// `|p(r)| <= tol·(1 + max|c_i|)` (monic factor), or once the steps have
/// stalled with `|p(r)|` within the evaluation's own rounding bound. Exact
/// zero roots are split off before iterating.
pub fn poly_roots_float(p: &PolynomialR, tol: f64) -> Result<Vec<Complex64>> {
    let degree = p
        .degree()
        .ok_or_else(|| Error::OutOfRange("roots of the zero polynomial".into()))?;
    if degree > MAX_ROOT_DEGREE {
        return Err(Error::TooLarge {
            n: degree,
            limit: MAX_ROOT_DEGREE,
        });
    }
    let mut roots = Vec::with_capacity(degree);
    for (factor, k) in p.square_free_factors() {
        let simple = simple_roots(&factor, tol)?;
        for _ in 0..k {
            roots.extend_from_slice(&simple);
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

fn simple_roots(p: &PolynomialR, tol: f64) -> Result<Vec<Complex64>> {
    let monic = p.monic();
    let zeros = monic.coeffs().iter().take_while(|c| c.is_zero()).count();
    let coeffs: Vec<Complex64> = monic.coeffs()[zeros..]
        .iter()
        .map(|c| Complex64::new(to_f64(c), 0.0))
        .collect();
    let mut roots = vec![Complex64::zero(); zeros];
    roots.extend(aberth(&coeffs, tol)?);
    Ok(roots)
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Bound on the rounding error of evaluating `coeffs` at `z` by Horner.
fn rounding_floor(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let mag = coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
    4.0 * coeffs.len() as f64 * f64::EPSILON * mag
}

/// Monic `coeffs` (low first) with a nonzero constant term.
fn aberth(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    if d == 1 {
        return Ok(vec![-coeffs[0]]);
    }
    let max_coeff = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let threshold = tol * (1.0 + max_coeff);

    // Fujiwara-style radius, circle centred at the root centroid.
    let radius = (1..=d)
        .map(|i| coeffs[d - i].norm().powf(1.0 / i as f64))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let centre = -coeffs[d - 1] / d as f64;
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            centre + Complex64::from_polar(radius, angle)
        })
        .collect();

    let accepted = |z: Complex64| {
        let (p, _) = horner(coeffs, z);
        p.norm() <= threshold.max(rounding_floor(coeffs, z))
    };

    let mut iterations = 0;
    loop {
        let mut max_step: f64 = 0.0;
        for k in 0..d {
            let (p, dp) = horner(coeffs, z[k]);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        iterations += 1;
        // close clusters can oscillate at rounding level without ever
        // stalling; those are accepted at the cap
        let at_floor = || z.iter().all(|&r| accepted(r));
        let residual_ok = z.iter().all(|&r| horner(coeffs, r).0.norm() <= threshold);
        let stalled = max_step <= 4.0 * f64::EPSILON;
        if residual_ok || (stalled || iterations >= MAX_ITERATIONS) && at_floor() {
            return Ok(z);
        }
        if iterations >= MAX_ITERATIONS || z.iter().any(|r| !r.is_finite()) {
            let max_residual = z
                .iter()
                .map(|&r| horner(coeffs, r).0.norm())
                .fold(0.0, f64::max);
            return Err(Error::RootsNotConverged {
                iterations,
                max_residual,
            });
        }
    }
}

//! Spectral radius, energy and small spectra of A_α(G).
//!
//! The radius is taken blockwise over strong components: A_α(G) is block
//! triangular in a topological order of the condensation, so its spectrum
//! is the union of the diagonal blocks' spectra. Each block keeps the
//! outdegrees of the whole digraph on its diagonal.

use num_complex::Complex64;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::linalg::matrix::{build_a_alpha, FloatMatrix};
use crate::linalg::perron::{perron_radius, RadiusCertificate};
use crate::linalg::poly::{char_poly, PolynomialR};
use crate::linalg::rational::{check_alpha, int, serde_rational, to_f64, Rational};
use crate::linalg::roots::poly_roots_float;
use crate::scc::tarjan_scc;

pub const SPECTRUM_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    #[serde(serialize_with = "serde_rational::serialize")]
    pub alpha: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub closed_form: Rational,
    pub trace_check: f64,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub degree_term: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub walk_term: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    #[serde(serialize_with = "serde_rational::serialize")]
    pub alpha: Rational,
    /// All n eigenvalues, sorted by real part then imaginary part.
    #[serde(serialize_with = "serialize_complex")]
    pub eigenvalues: Vec<Complex64>,
    /// Vertices lying in singleton strong components.
    pub tree_vertices: Vec<usize>,
    /// α·d⁺(v) for each entry of `tree_vertices`.
    #[serde(serialize_with = "serde_rational::vec::serialize")]
    pub tree_eigenvalues: Vec<Rational>,
    /// Whether ∏(x − α·d⁺(v)) over `tree_vertices` divides the
    /// characteristic polynomial with zero remainder (exact arithmetic).
    pub divides_exactly: bool,
    pub block_radii: Vec<RadiusCertificate>,
}

fn serialize_complex<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

pub fn sum_squared_outdegrees(g: &Digraph) -> u64 {
    (0..g.n()).map(|v| (g.out_degree(v) as u64).pow(2)).sum()
}

/// Float diagonal block of A_α(g) on `vertices`. Entries are the correctly
/// rounded values of the exact rationals.
fn float_block(g: &Digraph, alpha: &Rational, vertices: &[usize]) -> FloatMatrix {
    let off = to_f64(&(Rational::one() - alpha));
    let rows: Vec<Vec<f64>> = vertices
        .iter()
        .map(|&u| {
            vertices
                .iter()
                .map(|&w| {
                    if u == w {
                        to_f64(&(alpha * int(g.out_degree(u) as i64)))
                    } else if g.has_arc(u, w) {
                        off
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    FloatMatrix::from_rows(&rows)
}

/// One certificate per strong component, indexed like
/// `tarjan_scc(g).components`.
pub fn block_radii(g: &Digraph, alpha: &Rational, tol: f64) -> Result<Vec<RadiusCertificate>> {
    check_alpha(alpha)?;
    let scc = tarjan_scc(g);
    Ok(scc
        .components
        .iter()
        .enumerate()
        .map(|(id, comp)| {
            let mut cert = if comp.len() == 1 {
                RadiusCertificate::exact(to_f64(&(alpha * int(g.out_degree(comp[0]) as i64))))
            } else {
                perron_radius(&float_block(g, alpha, comp), tol)
            };
            cert.block_id = id;
            cert.block_vertices = comp.clone();
            cert
        })
        .collect())
}

/// ρ_α(g) as the maximum over strong-component blocks.
///
/// `lower` and `upper` are the maxima of the block bounds, so they enclose
/// the maximum. `block_id` names the block with the largest estimate;
/// `converged` is false if any block hit the iteration cap.
pub fn spectral_radius(g: &Digraph, alpha: &Rational, tol: f64) -> Result<RadiusCertificate> {
    let blocks = block_radii(g, alpha, tol)?;
    let Some(best) = blocks
        .iter()
        .max_by(|a, b| a.estimate.total_cmp(&b.estimate))
    else {
        return Ok(RadiusCertificate::exact(0.0));
    };
    let mut cert = best.clone();
    cert.lower = blocks
        .iter()
        .map(|c| c.lower)
        .fold(f64::NEG_INFINITY, f64::max);
    cert.upper = blocks
        .iter()
        .map(|c| c.upper)
        .fold(f64::NEG_INFINITY, f64::max);
    cert.converged = blocks.iter().all(|c| c.converged);
    Ok(cert)
}

/// E_α(g) = α²Σ(d⁺)² + (1 − α)²c₂, with trace(A_α²) in floating point as a
/// cross-check.
pub fn energy(g: &Digraph, alpha: &Rational) -> Result<EnergyReport> {
    check_alpha(alpha)?;
    let degree_term = alpha * alpha * int(sum_squared_outdegrees(g) as i64);
    let off = Rational::one() - alpha;
    let walk_term = &off * &off * int(g.closed_walks_2() as i64);
    let a = to_f64(alpha);
    let b = to_f64(&off);
    let diagonal: f64 = (0..g.n())
        .map(|v| (a * g.out_degree(v) as f64).powi(2))
        .sum();
    let symmetric = g.arcs().filter(|&(t, h)| g.has_arc(h, t)).count() as f64;
    Ok(EnergyReport {
        alpha: alpha.clone(),
        closed_form: &degree_term + &walk_term,
        trace_check: diagonal + symmetric * b * b,
        degree_term,
        walk_term,
    })
}

/// Full spectrum for n ≤ 16.
///
/// Singleton components give α·d⁺ exactly. Each nontrivial block's
/// characteristic polynomial is split into square-free parts before root
/// finding, so repeated eigenvalues come out to full precision.
pub fn spectrum_small(g: &Digraph, alpha: &Rational, tol: f64) -> Result<SpectrumReport> {
    check_alpha(alpha)?;
    if g.n() > SPECTRUM_LIMIT {
        return Err(Error::TooLarge {
            n: g.n(),
            limit: SPECTRUM_LIMIT,
        });
    }
    let full = build_a_alpha(g, alpha)?;
    let scc = tarjan_scc(g);
    let mut tree_vertices = Vec::new();
    let mut eigenvalues = Vec::with_capacity(g.n());
    for comp in &scc.components {
        if comp.len() == 1 {
            tree_vertices.push(comp[0]);
            continue;
        }
        eigenvalues.extend(poly_roots_float(&char_poly(&full.principal(comp)), tol)?);
    }
    tree_vertices.sort_unstable();
    let tree_eigenvalues: Vec<Rational> = tree_vertices
        .iter()
        .map(|&v| alpha * int(g.out_degree(v) as i64))
        .collect();
    eigenvalues.extend(
        tree_eigenvalues
            .iter()
            .map(|r| Complex64::new(to_f64(r), 0.0)),
    );
    eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let divisor = PolynomialR::product(
        tree_eigenvalues
            .iter()
            .cloned()
            .map(PolynomialR::linear_root),
    );
    let (_, remainder) = char_poly(&full).div_rem(&divisor)?;

    Ok(SpectrumReport {
        alpha: alpha.clone(),
        eigenvalues,
        tree_vertices,
        tree_eigenvalues,
        divides_exactly: remainder.is_zero(),
        block_radii: block_radii(g, alpha, tol)?,
    })
}

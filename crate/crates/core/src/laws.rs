//! Executable checks of the eigenvalue, radius and energy laws over
//! enumerated, sampled and constructed digraphs.
//!
//! Every law reduces to a per-case check on one digraph at one α (plus the
//! family parameters for the family formulas). Batch runners fan the cases
//! out with rayon and merge results in case order, and [`recheck`] replays a
//! serialized failure through the same check.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::digraph::{generate, Digraph, FamilySpec};
use crate::error::{Error, Result};
use crate::linalg::matrix::build_a_alpha;
use crate::linalg::perron::{RadiusCertificate, DEFAULT_TOL};
use crate::linalg::poly::{char_poly, PolynomialR};
use crate::linalg::rational::{
    check_alpha, default_alpha_grid, format_rational, int, serde_rational, to_f64, Rational,
};
use crate::scc::{classify_gnm, tarjan_scc, GnmStructure};
use crate::search::{enumerate_gnm, GnmSpace, MAX_EXHAUSTIVE_N};
use crate::spectra::{energy, spectral_radius, sum_squared_outdegrees};
use crate::text::{parse_digraph, write_digraph};
use crate::transforms::{
    alpha_threshold, is_in_forest, is_out_star_forest, is_single_star_at_max, max_out_degree_hubs,
    single_star_at, to_g_double_prime, to_g_prime, to_g_triple_prime,
};
use crate::trees::oriented_trees;

/// Largest order for the exact characteristic-polynomial checks.
pub const MAX_DIVISIBILITY_N: usize = 12;
/// Largest tree order for the exhaustive tree-energy check.
pub const MAX_TREE_N: usize = 7;
/// Relative tolerance of the floating-point trace cross-check.
pub const TRACE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LawId {
    /// Off-core vertices contribute α·d⁺ and the rest is the core block.
    TreeEigenvalues,
    /// The same for singleton strong components of any digraph.
    SingletonEigenvalues,
    /// ρ(G′) ≥ ρ(G).
    OutStarRadius,
    /// ρ(G″) ≥ ρ(G′) above the α-threshold, equality at α = 0.
    SingleStarRadius,
    /// ρ(G″) ≥ ρ(G) above the α-threshold or at α = 0.
    MaximalRadius,
    /// E_α = α²Σ(d⁺)² + (1 − α)²c₂ = trace(A_α²).
    EnergyClosedForm,
    /// Energy of digraphs without 2-cycles and of symmetric digraphs.
    SimpleSymmetricEnergy,
    /// Closed-form energies of paths, cycles, stars, ∞- and bispindle digraphs.
    FamilyEnergies,
    /// α²(n − 1) ≤ E_α(T) ≤ α²(n − 1)² for oriented trees.
    TreeEnergyBounds,
    /// E(G′) ≥ E(G).
    OutStarEnergy,
    /// E(G″) ≥ E(G′).
    SingleStarEnergy,
    /// E(G) ≥ E(G‴).
    InTreeEnergy,
    /// G″ and G‴ are the energy extremes.
    EnergyExtremes,
    /// Two-sided energy bound in terms of core outdegrees.
    EnergyBounds,
    /// The same bound specialized to unicyclic, ∞- and bispindle cores.
    FamilyEnergyBounds,
}

impl LawId {
    pub const ALL: [LawId; 15] = [
        LawId::TreeEigenvalues,
        LawId::SingletonEigenvalues,
        LawId::OutStarRadius,
        LawId::SingleStarRadius,
        LawId::MaximalRadius,
        LawId::EnergyClosedForm,
        LawId::SimpleSymmetricEnergy,
        LawId::FamilyEnergies,
        LawId::TreeEnergyBounds,
        LawId::OutStarEnergy,
        LawId::SingleStarEnergy,
        LawId::InTreeEnergy,
        LawId::EnergyExtremes,
        LawId::EnergyBounds,
        LawId::FamilyEnergyBounds,
    ];

    /// Stable short identifier used on the command line and in reports.
    pub fn code(self) -> &'static str {
        match self {
            LawId::TreeEigenvalues => "T2.5",
            LawId::SingletonEigenvalues => "C2.6",
            LawId::OutStarRadius => "T2.7",
            LawId::SingleStarRadius => "T2.8",
            LawId::MaximalRadius => "T2.9",
            LawId::EnergyClosedForm => "L3.1",
            LawId::SimpleSymmetricEnergy => "T3.2",
            LawId::FamilyEnergies => "EX3.3",
            LawId::TreeEnergyBounds => "L3.4",
            LawId::OutStarEnergy => "T3.5",
            LawId::SingleStarEnergy => "T3.6",
            LawId::InTreeEnergy => "T3.7",
            LawId::EnergyExtremes => "T3.8",
            LawId::EnergyBounds => "C3.9",
            LawId::FamilyEnergyBounds => "C3.10",
        }
    }

    pub fn uses_radius(self) -> bool {
        matches!(
            self,
            LawId::OutStarRadius | LawId::SingleStarRadius | LawId::MaximalRadius
        )
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for LawId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LawId::ALL
            .into_iter()
            .find(|l| l.code().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse {
                line: 0,
                message: format!(
                    "unknown law `{s}` (expected one of {})",
                    LawId::ALL.map(LawId::code).join(", ")
                ),
            })
    }
}

impl Serialize for LawId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    /// The digraph in the text format.
    pub instance: String,
    /// Family parameters, for the family laws.
    pub family: Option<String>,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub alpha: Rational,
    pub expected: String,
    pub actual: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub law: LawId,
    pub cases_checked: u64,
    /// Cases outside the law's hypothesis (e.g. α below the threshold).
    pub skipped: u64,
    /// Cases whose radius certificate hit the iteration cap; neither passes
    /// nor failures.
    pub unconverged: u64,
    /// Cases where a transform changed the labeled digraph but the energies
    /// are equal; each one satisfied the law's equality condition.
    pub ties: u64,
    /// Single-star radius cases where the star at v₁ (lowest index among
    /// maximal-outdegree core vertices) fell short but the star at another
    /// maximizer satisfied the ordering. Counted, not failed.
    pub tie_break_sensitive: u64,
    pub failures: Vec<Failure>,
    /// 0 for exact laws.
    pub tolerance: f64,
    /// Whether some (n, m) space was sampled instead of exhausted.
    pub sampled: bool,
}

impl VerificationReport {
    fn empty(law: LawId, tol: f64) -> Self {
        let tolerance = if law.uses_radius() {
            tol
        } else if law == LawId::EnergyClosedForm {
            TRACE_TOL
        } else {
            0.0
        };
        VerificationReport {
            law,
            cases_checked: 0,
            skipped: 0,
            unconverged: 0,
            ties: 0,
            tie_break_sensitive: 0,
            failures: Vec::new(),
            tolerance,
            sampled: false,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// One digraph, optionally with the family it was generated from.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub digraph: Digraph,
    pub family: Option<FamilySpec>,
}

impl Instance {
    pub fn plain(digraph: Digraph) -> Self {
        Instance {
            digraph,
            family: None,
        }
    }
}

#[derive(Debug, Default)]
struct Outcome {
    skipped: bool,
    unconverged: bool,
    tie: bool,
    tie_break_sensitive: bool,
    failures: Vec<Failure>,
}

struct Case<'a> {
    g: &'a Digraph,
    family: Option<&'a FamilySpec>,
    alpha: &'a Rational,
    tol: f64,
}

impl Case<'_> {
    fn fail(
        &self,
        expected: impl Into<String>,
        actual: impl Into<String>,
        note: impl Into<String>,
    ) -> Failure {
        Failure {
            instance: write_digraph(self.g),
            family: self.family.map(ToString::to_string),
            alpha: self.alpha.clone(),
            expected: expected.into(),
            actual: actual.into(),
            note: note.into(),
        }
    }
}

fn e_alpha(g: &Digraph, alpha: &Rational) -> Result<Rational> {
    Ok(energy(g, alpha)?.closed_form)
}

fn sq(r: &Rational) -> Rational {
    r * r
}

fn enclosure(c: &RadiusCertificate) -> String {
    format!("[{:.16e}, {:.16e}]", c.lower, c.upper)
}

fn structure_of(g: &Digraph) -> Result<GnmStructure> {
    Ok(classify_gnm(g)?)
}

fn check_case(law: LawId, case: &Case) -> Result<Outcome> {
    check_alpha(case.alpha)?;
    match law {
        LawId::TreeEigenvalues => check_divisibility(case, true),
        LawId::SingletonEigenvalues => check_divisibility(case, false),
        LawId::OutStarRadius | LawId::SingleStarRadius | LawId::MaximalRadius => {
            check_radius(law, case)
        }
        LawId::EnergyClosedForm => check_closed_form(case),
        LawId::SimpleSymmetricEnergy => check_simple_symmetric(case),
        LawId::FamilyEnergies => check_family_energy(case),
        LawId::TreeEnergyBounds => check_tree_energy(case),
        LawId::OutStarEnergy
        | LawId::SingleStarEnergy
        | LawId::InTreeEnergy
        | LawId::EnergyExtremes => check_energy_chain(law, case),
        LawId::EnergyBounds => check_energy_bounds(case),
        LawId::FamilyEnergyBounds => check_family_bounds(case),
    }
}

/// ∏(x − α·d⁺(v)) over off-core (or singleton-component) vertices divides
/// the characteristic polynomial exactly; for members of G(n, m) the
/// quotient is the characteristic polynomial of the core block.
fn check_divisibility(case: &Case, gnm: bool) -> Result<Outcome> {
    let g = case.g;
    if g.n() > MAX_DIVISIBILITY_N {
        return Err(Error::TooLarge {
            n: g.n(),
            limit: MAX_DIVISIBILITY_N,
        });
    }
    let (outside, inside): (Vec<usize>, Vec<usize>) = if gnm {
        let s = structure_of(g)?;
        (
            (0..g.n()).filter(|&v| !s.is_core(v)).collect(),
            s.core().to_vec(),
        )
    } else {
        let scc = tarjan_scc(g);
        (0..g.n()).partition(|&v| scc.components[scc.component_of[v]].len() == 1)
    };
    let a = build_a_alpha(g, case.alpha)?;
    let divisor = PolynomialR::product(
        outside
            .iter()
            .map(|&v| PolynomialR::linear_root(case.alpha * int(g.out_degree(v) as i64))),
    );
    let (quotient, remainder) = char_poly(&a).div_rem(&divisor)?;
    let mut out = Outcome::default();
    if !remainder.is_zero() {
        out.failures.push(case.fail(
            "remainder 0",
            format!("remainder {remainder}"),
            "off-component factor does not divide",
        ));
    } else if gnm {
        let core_poly = char_poly(&a.principal(&inside));
        if quotient != core_poly {
            out.failures.push(case.fail(
                format!("quotient {core_poly}"),
                format!("quotient {quotient}"),
                "quotient differs from the core block polynomial",
            ));
        }
    }
    Ok(out)
}

fn check_radius(law: LawId, case: &Case) -> Result<Outcome> {
    let s = structure_of(case.g)?;
    let tol = case.tol;
    let radius = |g: &Digraph| spectral_radius(g, case.alpha, tol);
    let threshold = alpha_threshold(&s);
    let alpha_zero = case.alpha.is_zero();
    let qualifies = alpha_zero || (!threshold.degenerate && *case.alpha >= threshold.value);
    let mut out = Outcome::default();
    if law != LawId::OutStarRadius && !qualifies {
        out.skipped = true;
        return Ok(out);
    }
    let (small, big, small_name, big_name) = match law {
        LawId::OutStarRadius => (radius(case.g)?, radius(&to_g_prime(&s).result)?, "G", "G'"),
        LawId::SingleStarRadius => (
            radius(&to_g_prime(&s).result)?,
            radius(&to_g_double_prime(&s).result)?,
            "G'",
            "G''",
        ),
        _ => (
            radius(case.g)?,
            radius(&to_g_double_prime(&s).result)?,
            "G",
            "G''",
        ),
    };
    if !small.converged || !big.converged {
        out.unconverged = true;
        return Ok(out);
    }
    let slack = 2.0 * tol * small.upper.max(big.upper).max(1.0);
    if big.lower < small.upper - slack && law != LawId::OutStarRadius {
        // the ordering is stated for "the" maximal-outdegree vertex; with
        // ties, accept a star at any maximizer
        for hub in max_out_degree_hubs(&s).into_iter().skip(1) {
            let other = radius(&single_star_at(&s, hub).result)?;
            if !other.converged {
                out.unconverged = true;
                return Ok(out);
            }
            if other.lower >= small.upper - slack {
                out.tie_break_sensitive = true;
                break;
            }
        }
    }
    if big.lower < small.upper - slack && !out.tie_break_sensitive {
        out.failures.push(case.fail(
            format!("rho({big_name}) >= rho({small_name})"),
            format!(
                "{big_name} {} vs {small_name} {}",
                enclosure(&big),
                enclosure(&small)
            ),
            format!("threshold {}", format_rational(&threshold.value)),
        ));
    }
    if law == LawId::SingleStarRadius && alpha_zero && small.lower > big.upper + slack {
        out.failures.push(case.fail(
            "rho(G'') = rho(G') at alpha = 0",
            format!("G'' {} vs G' {}", enclosure(&big), enclosure(&small)),
            "",
        ));
    }
    Ok(out)
}

fn check_closed_form(case: &Case) -> Result<Outcome> {
    let report = energy(case.g, case.alpha)?;
    let a = build_a_alpha(case.g, case.alpha)?;
    let trace = a.mul(&a).trace();
    let mut out = Outcome::default();
    if report.closed_form != trace {
        out.failures.push(case.fail(
            format_rational(&trace),
            format_rational(&report.closed_form),
            "closed form differs from exact trace(A^2)",
        ));
    }
    let exact = to_f64(&report.closed_form);
    if (exact - report.trace_check).abs() > TRACE_TOL * (1.0 + exact.abs()) {
        out.failures.push(case.fail(
            format!("{exact:.16e}"),
            format!("{:.16e}", report.trace_check),
            "floating-point trace outside tolerance",
        ));
    }
    Ok(out)
}

fn check_simple_symmetric(case: &Case) -> Result<Outcome> {
    let g = case.g;
    let alpha = case.alpha;
    let degree = sq(alpha) * int(sum_squared_outdegrees(g) as i64);
    let expected = if g.closed_walks_2() == 0 {
        degree
    } else if g.is_symmetric() {
        degree + sq(&(Rational::one() - alpha)) * int(g.arc_count() as i64)
    } else {
        return Ok(Outcome {
            skipped: true,
            ..Outcome::default()
        });
    };
    let actual = e_alpha(g, alpha)?;
    let mut out = Outcome::default();
    if actual != expected {
        out.failures
            .push(case.fail(format_rational(&expected), format_rational(&actual), ""));
    }
    Ok(out)
}

/// Closed-form energy of a family member.
///
/// The 2-cycle uses 2(2α² − 2α + 1); see the ledger note on the C₂ form.
pub fn family_energy_formula(spec: &FamilySpec, alpha: &Rational) -> Result<Rational> {
    spec.validate()?;
    let a2 = sq(alpha);
    let b2 = sq(&(Rational::one() - alpha));
    let n = int(spec.vertex_count() as i64);
    let one = Rational::one();
    Ok(match spec {
        FamilySpec::Path(_) | FamilySpec::InStar(_) => a2 * (n - one),
        FamilySpec::Cycle(2) => int(2) * (int(2) * &a2 - int(2) * alpha + one),
        FamilySpec::Cycle(_) => a2 * n,
        FamilySpec::OutStar(_) => a2 * sq(&(n - one)),
        FamilySpec::SymStar(_) => &a2 * &n * (&n - &one) + int(2) * b2 * (n - one),
        FamilySpec::Infinity(ms) => {
            let t = int(ms.len() as i64);
            let c2 = int(2 * ms.iter().filter(|&&m| m == 2).count() as i64);
            a2 * (sq(&t) + n - one) + b2 * c2
        }
        FamilySpec::Bispindle(ps, qs) => {
            let (p, q) = (int(ps.len() as i64), int(qs.len() as i64));
            let both = ps.contains(&1) && qs.contains(&1);
            let c2 = int(if both { 2 } else { 0 });
            a2 * (sq(&p) + sq(&q) + n - int(2)) + b2 * c2
        }
    })
}

fn require_family<'a>(case: &Case<'a>) -> Result<&'a FamilySpec> {
    case.family
        .ok_or_else(|| Error::InvalidFamily("this law needs family parameters".into()))
}

fn check_family_energy(case: &Case) -> Result<Outcome> {
    let spec = require_family(case)?;
    let expected = family_energy_formula(spec, case.alpha)?;
    let actual = e_alpha(case.g, case.alpha)?;
    let mut out = Outcome::default();
    if actual != expected {
        out.failures.push(case.fail(
            format_rational(&expected),
            format_rational(&actual),
            spec.to_string(),
        ));
    }
    Ok(out)
}

fn is_tree(g: &Digraph) -> bool {
    g.n() >= 1 && g.arc_count() + 1 == g.n() && g.is_weakly_connected()
}

/// Every vertex has outdegree at most one and exactly one has outdegree 0.
pub fn is_in_tree(g: &Digraph) -> bool {
    is_tree(g)
        && (0..g.n()).all(|v| g.out_degree(v) <= 1)
        && (0..g.n()).filter(|&v| g.out_degree(v) == 0).count() == 1
}

pub fn is_out_star(g: &Digraph) -> bool {
    is_tree(g) && (0..g.n()).any(|v| g.out_degree(v) + 1 == g.n())
}

fn check_tree_energy(case: &Case) -> Result<Outcome> {
    let g = case.g;
    if !is_tree(g) {
        return Err(Error::NotATree(write_digraph(g)));
    }
    let a2 = sq(case.alpha);
    let k = int(g.n() as i64 - 1);
    let lower = &a2 * &k;
    let upper = a2 * sq(&k);
    let e = e_alpha(g, case.alpha)?;
    let mut out = Outcome::default();
    if e < lower || e > upper {
        out.failures.push(case.fail(
            format!(
                "{} <= E <= {}",
                format_rational(&lower),
                format_rational(&upper)
            ),
            format_rational(&e),
            "bound violated",
        ));
    }
    if !case.alpha.is_zero() {
        if (e == lower) != is_in_tree(g) {
            out.failures.push(case.fail(
                format!("E = lower iff in-tree (in-tree: {})", is_in_tree(g)),
                format_rational(&e),
                "lower equality condition",
            ));
        }
        if (e == upper) != is_out_star(g) {
            out.failures.push(case.fail(
                format!("E = upper iff out-star (out-star: {})", is_out_star(g)),
                format_rational(&e),
                "upper equality condition",
            ));
        }
    }
    Ok(out)
}

/// `big >= small`, and for α > 0 equality exactly when `condition` holds.
fn ordered(
    case: &Case,
    out: &mut Outcome,
    big: (&str, &Rational),
    small: (&str, &Rational),
    condition: bool,
    changed: bool,
) {
    let equal = big.1 == small.1;
    if big.1 < small.1 {
        out.failures.push(case.fail(
            format!("E({}) >= E({})", big.0, small.0),
            format!("{} vs {}", format_rational(big.1), format_rational(small.1)),
            "order violated",
        ));
    } else if !case.alpha.is_zero() && equal != condition {
        out.failures.push(case.fail(
            format!(
                "E({}) = E({}) iff equality condition ({condition})",
                big.0, small.0
            ),
            format!("{} vs {}", format_rational(big.1), format_rational(small.1)),
            "equality condition",
        ));
    }
    if equal && changed {
        out.tie = true;
    }
}

fn check_energy_chain(law: LawId, case: &Case) -> Result<Outcome> {
    let s = structure_of(case.g)?;
    let alpha = case.alpha;
    let g = case.g;
    let mut out = Outcome::default();
    match law {
        LawId::OutStarEnergy => {
            let gp = to_g_prime(&s).result;
            let (e, ep) = (e_alpha(g, alpha)?, e_alpha(&gp, alpha)?);
            ordered(
                case,
                &mut out,
                ("G'", &ep),
                ("G", &e),
                is_out_star_forest(&s),
                gp != *g,
            );
        }
        LawId::SingleStarEnergy => {
            let prime = to_g_prime(&s);
            let gpp = to_g_double_prime(&s).result;
            let (ep, epp) = (e_alpha(&prime.result, alpha)?, e_alpha(&gpp, alpha)?);
            let condition = is_single_star_at_max(&prime.structure);
            ordered(
                case,
                &mut out,
                ("G''", &epp),
                ("G'", &ep),
                condition,
                gpp != prime.result,
            );
        }
        LawId::InTreeEnergy => {
            let gppp = to_g_triple_prime(&s).result;
            let (e, eppp) = (e_alpha(g, alpha)?, e_alpha(&gppp, alpha)?);
            ordered(
                case,
                &mut out,
                ("G", &e),
                ("G'''", &eppp),
                is_in_forest(&s),
                gppp != *g,
            );
        }
        _ => {
            let gpp = to_g_double_prime(&s).result;
            let gppp = to_g_triple_prime(&s).result;
            let (e, epp, eppp) = (
                e_alpha(g, alpha)?,
                e_alpha(&gpp, alpha)?,
                e_alpha(&gppp, alpha)?,
            );
            ordered(
                case,
                &mut out,
                ("G''", &epp),
                ("G", &e),
                is_single_star_at_max(&s),
                gpp != *g,
            );
            ordered(
                case,
                &mut out,
                ("G", &e),
                ("G'''", &eppp),
                is_in_forest(&s),
                gppp != *g,
            );
        }
    }
    Ok(out)
}

fn check_bounds(
    case: &Case,
    s: &GnmStructure,
    lower: Rational,
    upper: Rational,
    what: &str,
) -> Result<Outcome> {
    let e = e_alpha(case.g, case.alpha)?;
    let mut out = Outcome::default();
    let shown = format!(
        "{} <= E <= {}",
        format_rational(&lower),
        format_rational(&upper)
    );
    if e < lower || e > upper {
        out.failures.push(case.fail(
            shown,
            format_rational(&e),
            format!("{what}: bound violated"),
        ));
        return Ok(out);
    }
    if !case.alpha.is_zero() {
        if (e == lower) != is_in_forest(s) {
            out.failures.push(case.fail(
                format!("{shown}, lower attained iff every tree is an in-tree"),
                format_rational(&e),
                format!("{what}: lower equality condition"),
            ));
        }
        if (e == upper) != is_single_star_at_max(s) {
            out.failures.push(case.fail(
                format!("{shown}, upper attained iff one out-star on a max-outdegree core vertex"),
                format_rational(&e),
                format!("{what}: upper equality condition"),
            ));
        }
    }
    Ok(out)
}

/// (lower, upper) energy bounds from core outdegrees.
pub fn energy_bounds(s: &GnmStructure, alpha: &Rational) -> (Rational, Rational) {
    let a2 = sq(alpha);
    let walk = sq(&(Rational::one() - alpha)) * int(s.digraph().closed_walks_2() as i64);
    let d = s.core_out_degrees_sorted();
    let sum_sq: i64 = d.iter().map(|&x| (x * x) as i64).sum();
    let extra = (s.n() - s.m()) as i64;
    let lower = &a2 * int(sum_sq + extra) + &walk;
    let upper = a2 * int((d[0] as i64 + extra).pow(2) + sum_sq - (d[0] * d[0]) as i64) + walk;
    (lower, upper)
}

fn check_energy_bounds(case: &Case) -> Result<Outcome> {
    let s = structure_of(case.g)?;
    let (lower, upper) = energy_bounds(&s, case.alpha);
    check_bounds(case, &s, lower, upper, "core-outdegree bounds")
}

/// (lower, upper) for unicyclic, ∞ and bispindle cores with `n` vertices
/// in total.
pub fn family_energy_bounds(
    spec: &FamilySpec,
    n: usize,
    alpha: &Rational,
) -> Result<(Rational, Rational)> {
    spec.validate()?;
    let m = spec.vertex_count();
    if n < m {
        return Err(Error::OutOfRange(format!("n = {n} below core order {m}")));
    }
    let a2 = sq(alpha);
    let b2 = sq(&(Rational::one() - alpha));
    let (n, m) = (int(n as i64), int(m as i64));
    let extra = &n - &m;
    let one = Rational::one();
    let two = int(2);
    Ok(match spec {
        FamilySpec::Cycle(2) => (
            &two * &a2 + &a2 * (&n - &two) + &two * &b2,
            &a2 * sq(&(&n - &one)) + &a2 + two * b2,
        ),
        FamilySpec::Cycle(_) => (
            &a2 * &m + &a2 * &extra,
            &a2 * sq(&(extra + &one)) + a2 * (m - one),
        ),
        FamilySpec::Infinity(ms) => {
            let t = int(ms.len() as i64);
            let s = int(ms.iter().filter(|&&x| x == 2).count() as i64);
            let walk = two * s * b2;
            (
                &a2 * (&m - &one + sq(&t)) + &a2 * &extra + &walk,
                &a2 * sq(&(&extra + &t)) + a2 * (m - one) + walk,
            )
        }
        FamilySpec::Bispindle(ps, qs) => {
            if ps.len() < qs.len() {
                return Err(Error::InvalidFamily(format!("{spec}: needs p >= q")));
            }
            let (p, q) = (int(ps.len() as i64), int(qs.len() as i64));
            let walk = if ps.contains(&1) && qs.contains(&1) {
                two.clone() * b2
            } else {
                Rational::zero()
            };
            (
                &a2 * (&m - &two + sq(&p) + sq(&q)) + &a2 * &extra + &walk,
                &a2 * sq(&(&extra + &p)) + a2 * (m - two + sq(&q)) + walk,
            )
        }
        _ => {
            return Err(Error::InvalidFamily(format!(
                "{spec}: family bounds need a cycle, infinity or bispindle core"
            )))
        }
    })
}

fn check_family_bounds(case: &Case) -> Result<Outcome> {
    let spec = require_family(case)?;
    let s = structure_of(case.g)?;
    let core = generate(spec)?;
    if s.core() != (0..core.n()).collect::<Vec<_>>() || s.core_digraph() != core {
        return Err(Error::InvalidFamily(format!(
            "{spec}: instance core does not match the family"
        )));
    }
    let (lower, upper) = family_energy_bounds(spec, s.n(), case.alpha)?;
    check_bounds(case, &s, lower, upper, &spec.to_string())
}

fn extra_alphas(law: LawId, g: &Digraph) -> Option<Rational> {
    if !law.uses_radius() {
        return None;
    }
    let t = alpha_threshold(&classify_gnm(g).ok()?);
    (!t.degenerate && t.value < Rational::one()).then_some(t.value)
}

/// Runs `law` on every instance at every α of the grid. Radius laws also
/// run at each instance's own α-threshold when it is not already in the
/// grid. Results are merged in instance order.
pub fn verify(
    law: LawId,
    instances: &[Instance],
    alpha_grid: &[Rational],
    tol: f64,
) -> Result<VerificationReport> {
    for a in alpha_grid {
        check_alpha(a)?;
    }
    let outcomes: Vec<Vec<Outcome>> = instances
        .par_iter()
        .map(|inst| {
            let mut alphas: Vec<Rational> = alpha_grid.to_vec();
            if let Some(t) = extra_alphas(law, &inst.digraph) {
                if !alphas.contains(&t) {
                    alphas.push(t);
                }
            }
            alphas
                .iter()
                .map(|alpha| {
                    let case = Case {
                        g: &inst.digraph,
                        family: inst.family.as_ref(),
                        alpha,
                        tol,
                    };
                    check_case(law, &case)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut report = VerificationReport::empty(law, tol);
    for o in outcomes.into_iter().flatten() {
        if o.skipped {
            report.skipped += 1;
            continue;
        }
        if o.unconverged {
            report.unconverged += 1;
            continue;
        }
        report.cases_checked += 1;
        report.ties += u64::from(o.tie);
        report.tie_break_sensitive += u64::from(o.tie_break_sensitive);
        report.failures.extend(o.failures);
    }
    Ok(report)
}

/// Replays a failure from its serialized witness. Returns the reproduced
/// failures (empty when the case now passes).
pub fn recheck(law: LawId, failure: &Failure, tol: f64) -> Result<Vec<Failure>> {
    let g = parse_digraph(&failure.instance)?;
    let family: Option<FamilySpec> = failure.family.as_deref().map(str::parse).transpose()?;
    let case = Case {
        g: &g,
        family: family.as_ref(),
        alpha: &failure.alpha,
        tol,
    };
    Ok(check_case(law, &case)?.failures)
}

/// Members of G(n, m) for 3 ≤ n ≤ `max_n` and each m in `core_orders`
/// (m < n). A space larger than `budget` is sampled with `budget` seeded
/// uniform indices instead; the flag reports whether that happened.
pub fn gnm_instances(
    max_n: usize,
    core_orders: &[usize],
    budget: Option<u64>,
    seed: u64,
) -> Result<(Vec<GnmStructure>, bool)> {
    let mut out = Vec::new();
    let mut sampled = false;
    for n in 3..=max_n {
        for &m in core_orders {
            if m >= n {
                continue;
            }
            let space = GnmSpace::new(n, m)?;
            match budget {
                Some(b) if space.len() > u128::from(b) => {
                    sampled = true;
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32) ^ m as u64);
                    out.extend((0..b).map(|_| space.get(rng.gen_range(0..space.len()))));
                }
                _ if n <= MAX_EXHAUSTIVE_N => out.extend(enumerate_gnm(n, m, None)?),
                _ => {
                    return Err(Error::TooLarge {
                        n,
                        limit: MAX_EXHAUSTIVE_N,
                    })
                }
            }
        }
    }
    Ok((out, sampled))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    /// Each ordered pair an arc independently.
    General,
    /// Each unordered pair a 2-cycle or nothing.
    Symmetric,
    /// Each unordered pair one orientation or nothing.
    Oriented,
}

/// Seeded random digraphs with 1..=max_n vertices and arc density drawn
/// uniformly from (0, 1).
pub fn random_digraphs(count: usize, max_n: usize, kind: RandomKind, seed: u64) -> Vec<Digraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            let p: f64 = rng.gen();
            let mut arcs = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    match kind {
                        RandomKind::General => {
                            if rng.gen_bool(p) {
                                arcs.push((u, v));
                            }
                            if rng.gen_bool(p) {
                                arcs.push((v, u));
                            }
                        }
                        RandomKind::Symmetric => {
                            if rng.gen_bool(p) {
                                arcs.extend([(u, v), (v, u)]);
                            }
                        }
                        RandomKind::Oriented => {
                            if rng.gen_bool(p) {
                                arcs.push(if rng.gen() { (u, v) } else { (v, u) });
                            }
                        }
                    }
                }
            }
            Digraph::new(n, arcs).expect("no loops or repeats")
        })
        .collect()
}

/// Every family spec with at most `max_n` vertices: paths, cycles and the
/// three stars of each order, ∞-digraphs with up to 4 cycles, and
/// bispindles with p, q ≤ 3 paths.
pub fn family_specs(max_n: usize) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.push(FamilySpec::Path(n));
        if n >= 2 {
            out.push(FamilySpec::Cycle(n));
        }
        out.push(FamilySpec::OutStar(n));
        out.push(FamilySpec::InStar(n));
        out.push(FamilySpec::SymStar(n));
    }
    // nondecreasing length lists
    fn lists(
        count: usize,
        min: usize,
        max: usize,
        out: &mut Vec<Vec<usize>>,
        prefix: &mut Vec<usize>,
    ) {
        if prefix.len() == count {
            out.push(prefix.clone());
            return;
        }
        for l in min..=max {
            prefix.push(l);
            lists(count, l, max, out, prefix);
            prefix.pop();
        }
    }
    for t in 1..=4 {
        let mut ls = Vec::new();
        lists(t, 2, max_n, &mut ls, &mut Vec::new());
        out.extend(
            ls.into_iter()
                .map(FamilySpec::Infinity)
                .filter(|f| f.vertex_count() <= max_n),
        );
    }
    for p in 1..=3 {
        for q in 1..=3 {
            let (mut ps, mut qs) = (Vec::new(), Vec::new());
            lists(p, 1, max_n, &mut ps, &mut Vec::new());
            lists(q, 1, max_n, &mut qs, &mut Vec::new());
            for a in &ps {
                for b in &qs {
                    let f = FamilySpec::Bispindle(a.clone(), b.clone());
                    if f.validate().is_ok() && f.vertex_count() <= max_n {
                        out.push(f);
                    }
                }
            }
        }
    }
    out
}

/// Cores for the specialized energy bounds: cycles, ∞-digraphs and
/// bispindles with p ≥ q.
pub fn special_cores() -> Vec<FamilySpec> {
    let mut out: Vec<FamilySpec> = (2..=5).map(FamilySpec::Cycle).collect();
    for ms in [
        vec![2, 2],
        vec![2, 3],
        vec![3, 3],
        vec![2, 2, 2],
        vec![2, 2, 3],
    ] {
        out.push(FamilySpec::Infinity(ms));
    }
    for (ps, qs) in [
        (vec![1], vec![1]),
        (vec![1], vec![2]),
        (vec![2], vec![1]),
        (vec![1, 2], vec![1]),
        (vec![1, 2], vec![2]),
        (vec![2, 2], vec![1]),
        (vec![1, 2], vec![1, 2]),
    ] {
        out.push(FamilySpec::Bispindle(ps, qs));
    }
    out
}

/// Every member of G(m + k, m) over the family core, for 1 ≤ k ≤ `max_extra`
/// (sampled down to `budget` per size when larger).
pub fn special_instances(
    spec: &FamilySpec,
    max_extra: usize,
    budget: Option<u64>,
    seed: u64,
) -> Result<(Vec<Instance>, bool)> {
    let core = generate(spec)?;
    let mut out = Vec::new();
    let mut sampled = false;
    for k in 1..=max_extra {
        let space = GnmSpace::for_core(core.clone(), core.n() + k)?;
        let indices: Vec<u128> = match budget {
            Some(b) if space.len() > u128::from(b) => {
                sampled = true;
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ k as u64);
                (0..b).map(|_| rng.gen_range(0..space.len())).collect()
            }
            _ => (0..space.len()).collect(),
        };
        out.extend(indices.into_iter().map(|i| Instance {
            digraph: space.get(i).into_digraph(),
            family: Some(spec.clone()),
        }));
    }
    Ok((out, sampled))
}

/// Parameters for [`verify_law`].
#[derive(Debug, Clone)]
pub struct LawSettings {
    pub max_n: usize,
    pub core_orders: Vec<usize>,
    pub alpha_grid: Vec<Rational>,
    pub tol: f64,
    /// Cap on instances per (n, m) space; larger spaces are sampled.
    pub budget: Option<u64>,
    pub seed: u64,
    /// Random digraphs for the laws that hold on every digraph.
    pub random_count: usize,
}

impl Default for LawSettings {
    fn default() -> Self {
        LawSettings {
            max_n: 6,
            core_orders: vec![2, 3],
            alpha_grid: default_alpha_grid(),
            tol: DEFAULT_TOL,
            budget: Some(20_000),
            seed: 0,
            random_count: 1000,
        }
    }
}

/// Runs `law` on its standard instance set.
pub fn verify_law(law: LawId, settings: &LawSettings) -> Result<VerificationReport> {
    let gnm = || -> Result<(Vec<Instance>, bool)> {
        let (s, sampled) = gnm_instances(
            settings.max_n,
            &settings.core_orders,
            settings.budget,
            settings.seed,
        )?;
        Ok((
            s.into_iter()
                .map(|s| Instance::plain(s.into_digraph()))
                .collect(),
            sampled,
        ))
    };
    let random = |kind: RandomKind, salt: u64| {
        random_digraphs(
            settings.random_count,
            settings.max_n.max(1),
            kind,
            settings.seed ^ salt,
        )
        .into_iter()
        .map(Instance::plain)
    };
    let (instances, sampled) = match law {
        LawId::SingletonEigenvalues | LawId::EnergyClosedForm => {
            let (mut v, sampled) = gnm()?;
            v.extend(random(RandomKind::General, 1));
            (v, sampled)
        }
        LawId::SimpleSymmetricEnergy => {
            let (mut v, sampled) = gnm()?;
            v.extend(random(RandomKind::Symmetric, 2));
            v.extend(random(RandomKind::Oriented, 3));
            (v, sampled)
        }
        LawId::FamilyEnergies => (
            family_specs(settings.max_n)
                .into_iter()
                .map(|f| Instance {
                    digraph: generate(&f).expect("listed specs are valid"),
                    family: Some(f),
                })
                .collect(),
            false,
        ),
        LawId::TreeEnergyBounds => {
            if settings.max_n > MAX_TREE_N {
                return Err(Error::TooLarge {
                    n: settings.max_n,
                    limit: MAX_TREE_N,
                });
            }
            let v = (1..=settings.max_n)
                .flat_map(|k| {
                    oriented_trees(k)
                        .map(move |arcs| Digraph::new(k, arcs).expect("trees are simple"))
                })
                .map(Instance::plain)
                .collect();
            (v, false)
        }
        LawId::FamilyEnergyBounds => {
            let mut v = Vec::new();
            let mut sampled = false;
            for spec in special_cores() {
                let extra = settings
                    .max_n
                    .saturating_sub(spec.vertex_count())
                    .clamp(1, 3);
                let (inst, s) = special_instances(&spec, extra, settings.budget, settings.seed)?;
                v.extend(inst);
                sampled |= s;
            }
            (v, sampled)
        }
        _ => gnm()?,
    };
    let mut report = verify(law, &instances, &settings.alpha_grid, settings.tol)?;
    report.sampled = sampled;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::rat;

    fn grid() -> Vec<Rational> {
        default_alpha_grid()
    }

    fn inst(n: usize, arcs: &[(usize, usize)]) -> Instance {
        Instance::plain(Digraph::new(n, arcs.iter().copied()).unwrap())
    }

    #[test]
    fn law_ids_round_trip() {
        for law in LawId::ALL {
            assert_eq!(law.code().parse::<LawId>().unwrap(), law);
        }
        assert_eq!("t2.5".parse::<LawId>().unwrap(), LawId::TreeEigenvalues);
        assert!("T9.9".parse::<LawId>().is_err());
    }

    #[test]
    fn tree_eigenvalues_small() {
        let r = verify(
            LawId::TreeEigenvalues,
            &[inst(3, &[(0, 1), (1, 0), (0, 2)])],
            &[int(0), rat(1, 2)],
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.cases_checked, 2);
        // C4 core with mixed trees, n = 10
        let g = inst(
            10,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (0, 4),
                (4, 5),
                (6, 1),
                (1, 7),
                (8, 7),
                (2, 9),
            ],
        );
        assert!(verify(LawId::TreeEigenvalues, &[g], &grid(), DEFAULT_TOL)
            .unwrap()
            .passed());
        // not a member: surfaced as an error
        let bad = inst(3, &[(0, 1), (1, 2)]);
        assert!(matches!(
            verify(LawId::TreeEigenvalues, &[bad], &grid(), DEFAULT_TOL),
            Err(Error::NotMember(_))
        ));
    }

    #[test]
    fn radius_orderings_small() {
        let (s, _) = gnm_instances(4, &[2], None, 0).unwrap();
        let instances: Vec<Instance> = s
            .into_iter()
            .map(|s| Instance::plain(s.into_digraph()))
            .collect();
        for law in [
            LawId::OutStarRadius,
            LawId::SingleStarRadius,
            LawId::MaximalRadius,
        ] {
            let r = verify(law, &instances, &grid(), DEFAULT_TOL).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.unconverged, 0);
        }
        // a case strictly below the threshold is skipped
        let g = inst(4, &[(0, 1), (1, 0), (0, 2), (1, 3)]);
        let r = verify(LawId::SingleStarRadius, &[g], &[rat(1, 10)], DEFAULT_TOL).unwrap();
        assert_eq!(r.skipped, 1);
    }

    #[test]
    fn energy_chain_by_hand() {
        // C2 with pendant path v0 -> 2 -> 3
        let g = Digraph::new(4, [(0, 1), (1, 0), (0, 2), (2, 3)]).unwrap();
        let s = classify_gnm(&g).unwrap();
        let a = rat(1, 3);
        let a2 = sq(&a);
        let walk = int(2) * sq(&(int(1) - &a));
        assert_eq!(
            e_alpha(&to_g_triple_prime(&s).result, &a).unwrap(),
            int(4) * &a2 + &walk
        );
        assert_eq!(e_alpha(&g, &a).unwrap(), int(6) * &a2 + &walk);
        assert_eq!(
            e_alpha(&to_g_prime(&s).result, &a).unwrap(),
            int(10) * &a2 + &walk
        );
        assert_eq!(
            e_alpha(&to_g_double_prime(&s).result, &a).unwrap(),
            int(10) * &a2 + &walk
        );
        for law in [
            LawId::OutStarEnergy,
            LawId::SingleStarEnergy,
            LawId::InTreeEnergy,
            LawId::EnergyExtremes,
            LawId::EnergyBounds,
        ] {
            assert!(
                verify(law, &[Instance::plain(g.clone())], &grid(), DEFAULT_TOL)
                    .unwrap()
                    .passed()
            );
        }
    }

    #[test]
    fn family_energy_examples() {
        let half = rat(1, 2);
        let f = |s: &str| family_energy_formula(&s.parse().unwrap(), &half).unwrap();
        assert_eq!(f("path:4"), rat(3, 4));
        assert_eq!(f("outstar:4"), rat(9, 4));
        assert_eq!(f("symstar:3"), rat(5, 2));
        assert_eq!(
            family_energy_formula(&FamilySpec::Cycle(2), &int(0)).unwrap(),
            int(2)
        );
        let r = verify_law(
            LawId::FamilyEnergies,
            &LawSettings {
                max_n: 8,
                ..LawSettings::default()
            },
        )
        .unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn tree_energy_examples() {
        let half = rat(1, 2);
        // n = 2: both orientations meet both bounds
        for g in [inst(2, &[(0, 1)]), inst(2, &[(1, 0)])] {
            assert!(is_in_tree(&g.digraph) && is_out_star(&g.digraph));
            assert_eq!(e_alpha(&g.digraph, &half).unwrap(), rat(1, 4));
        }
        let r = verify_law(
            LawId::TreeEnergyBounds,
            &LawSettings {
                max_n: 5,
                ..LawSettings::default()
            },
        )
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.cases_checked, 10 * (1 + 2 + 12 + 128 + 2000));
    }

    #[test]
    fn family_bound_examples() {
        let half = rat(1, 2);
        let (_, upper) = family_energy_bounds(&FamilySpec::Cycle(2), 5, &half).unwrap();
        assert_eq!(upper, rat(19, 4));
        // out-star of 3 leaves on the cycle attains it
        let g = Digraph::new(5, [(0, 1), (1, 0), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(e_alpha(&g, &half).unwrap(), upper);
        // bare core: lower = upper
        let (lo, hi) = family_energy_bounds(&FamilySpec::Infinity(vec![2, 2]), 3, &half).unwrap();
        assert_eq!(lo, hi);
        assert!(
            family_energy_bounds(&FamilySpec::Bispindle(vec![2], vec![1, 2]), 6, &half).is_err()
        );
        // both branches of the bispindle bound
        for spec in [
            FamilySpec::Bispindle(vec![1], vec![1]),
            FamilySpec::Bispindle(vec![2], vec![1]),
        ] {
            let (v, _) = special_instances(&spec, 1, None, 0).unwrap();
            assert!(verify(LawId::FamilyEnergyBounds, &v, &grid(), DEFAULT_TOL)
                .unwrap()
                .passed());
        }
    }

    #[test]
    fn recheck_reproduces() {
        let f = Failure {
            instance: write_digraph(&Digraph::new(3, [(0, 1), (1, 0), (0, 2)]).unwrap()),
            family: Some("cycle:2".into()),
            alpha: rat(1, 2),
            expected: String::new(),
            actual: String::new(),
            note: String::new(),
        };
        assert!(recheck(LawId::FamilyEnergyBounds, &f, DEFAULT_TOL)
            .unwrap()
            .is_empty());
        // wrong family for the instance: a formula mismatch reproduces
        let g = generate(&FamilySpec::Cycle(3)).unwrap();
        let case = Failure {
            instance: write_digraph(&g),
            family: Some("path:3".into()),
            ..f
        };
        let again = recheck(LawId::FamilyEnergies, &case, DEFAULT_TOL).unwrap();
        assert_eq!(again.len(), 1);
        assert_eq!(
            recheck(LawId::FamilyEnergies, &again[0], DEFAULT_TOL).unwrap(),
            again
        );
    }

    #[test]
    fn single_star_ordering_depends_on_tied_hub() {
        // vertices 0 and 1 both have core outdegree 2; the leaf hangs on 1,
        // which has the larger in-degree, and the star at 0 is smaller
        let g = inst(4, &[(0, 1), (0, 2), (1, 0), (1, 2), (1, 3), (2, 1)]);
        for law in [LawId::SingleStarRadius, LawId::MaximalRadius] {
            let r = verify(law, std::slice::from_ref(&g), &[rat(7, 10)], DEFAULT_TOL).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            // 7/10 and the instance threshold 2/3
            assert_eq!(r.tie_break_sensitive, 2);
        }
        let s = structure_of(&g.digraph).unwrap();
        let at_v1 =
            spectral_radius(&to_g_double_prime(&s).result, &rat(7, 10), DEFAULT_TOL).unwrap();
        let here = spectral_radius(&g.digraph, &rat(7, 10), DEFAULT_TOL).unwrap();
        assert!(at_v1.upper < here.lower);
    }
}

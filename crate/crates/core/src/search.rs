//! Enumeration and sampling of G(n, m), and the scan comparing ρ_α(G)
//! against ρ_α(G″).
//!
//! Members are labeled canonically: the core occupies vertices `0..m`, and
//! the non-root vertices of the tree on core vertex i take the next block of
//! labels in core order. The index space is mixed radix over (core,
//! composition of n, oriented tree per core vertex), so any instance can be
//! produced from its index without materializing the others.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::linalg::perron::RadiusCertificate;
use crate::linalg::rational::{serde_rational, Rational};
use crate::scc::GnmStructure;
use crate::spectra::spectral_radius;
use crate::text::write_digraph;
use crate::transforms::{alpha_threshold, to_g_double_prime, AlphaThreshold};
use crate::trees::{oriented_tree_by_index, oriented_tree_count};

pub const MAX_CORE_ORDER: usize = 4;
pub const MAX_EXHAUSTIVE_N: usize = 7;
/// Near-misses kept in a scan report; the rest are only counted.
pub const NEAR_MISS_LIMIT: usize = 64;

/// All strongly connected digraphs on `m` labeled vertices, ordered by the
/// bitmask of their arcs over the lexicographic list of ordered pairs.
pub fn enumerate_strong_cores(m: usize) -> Result<Vec<Digraph>> {
    if !(2..=MAX_CORE_ORDER).contains(&m) {
        return Err(Error::OutOfRange(format!(
            "core order {m} outside 2..={MAX_CORE_ORDER}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|t| (0..m).filter(move |&h| h != t).map(move |h| (t, h)))
        .collect();
    Ok((0u32..1 << pairs.len())
        .filter_map(|mask| {
            let arcs = (0..pairs.len())
                .filter(|&j| mask >> j & 1 == 1)
                .map(|j| pairs[j]);
            let g = Digraph::new(m, arcs).expect("distinct non-loop pairs");
            g.is_strongly_connected().then_some(g)
        })
        .collect())
}

/// Compositions of `n` into `m` positive parts, lexicographic.
fn compositions(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..=rest - (parts - 1) {
            prefix.push(first);
            go(rest - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n >= m && m >= 1 {
        go(n, m, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Debug, Clone)]
struct CompositionBlock {
    sizes: Vec<usize>,
    start: u128,
    count: u128,
}

/// Index space of canonically labeled G(n, m) members over a list of cores.
#[derive(Debug, Clone)]
pub struct GnmSpace {
    n: usize,
    m: usize,
    cores: Vec<Digraph>,
    blocks: Vec<CompositionBlock>,
    per_core: u128,
}

impl GnmSpace {
    /// Every strong core on `m` vertices.
    pub fn new(n: usize, m: usize) -> Result<Self> {
        Self::with_cores(n, enumerate_strong_cores(m)?)
    }

    /// Members sharing one fixed core.
    pub fn for_core(core: Digraph, n: usize) -> Result<Self> {
        if core.n() < 2 || !core.is_strongly_connected() {
            return Err(Error::CoreNotStrong);
        }
        Self::with_cores(n, vec![core])
    }

    fn with_cores(n: usize, cores: Vec<Digraph>) -> Result<Self> {
        let m = cores.first().map_or(0, Digraph::n);
        if n < m {
            return Err(Error::OutOfRange(format!(
                "n = {n} is below the core order {m}"
            )));
        }
        let too_large = || Error::TooLarge { n, limit: 0 };
        let mut blocks = Vec::new();
        let mut start = 0u128;
        for sizes in compositions(n, m) {
            let count = sizes
                .iter()
                .try_fold(1u128, |acc, &k| acc.checked_mul(oriented_tree_count(k)))
                .ok_or_else(too_large)?;
            blocks.push(CompositionBlock {
                sizes,
                start,
                count,
            });
            start = start.checked_add(count).ok_or_else(too_large)?;
        }
        start
            .checked_mul(cores.len() as u128)
            .ok_or_else(too_large)?;
        Ok(GnmSpace {
            n,
            m,
            cores,
            blocks,
            per_core: start,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cores(&self) -> &[Digraph] {
        &self.cores
    }

    pub fn len(&self) -> u128 {
        self.per_core * self.cores.len() as u128
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// # Panics
    /// If `index >= self.len()`.
    pub fn get(&self, index: u128) -> GnmStructure {
        assert!(index < self.len(), "index {index} out of range");
        let core = &self.cores[(index / self.per_core) as usize];
        let within = index % self.per_core;
        let b = self.blocks.partition_point(|b| b.start + b.count <= within);
        let block = &self.blocks[b];
        let mut rest = within - block.start;

        let mut arcs: Vec<(usize, usize)> = core.arcs().collect();
        let mut trees = Vec::with_capacity(self.m);
        let mut next = self.m;
        // Last tree varies fastest.
        let mut choices = vec![0u128; self.m];
        for (i, &k) in block.sizes.iter().enumerate().rev() {
            let radix = oriented_tree_count(k);
            choices[i] = rest % radix;
            rest /= radix;
        }
        for (i, &k) in block.sizes.iter().enumerate() {
            let label = |local: usize| if local == 0 { i } else { next + local - 1 };
            arcs.extend(
                oriented_tree_by_index(k, choices[i])
                    .into_iter()
                    .map(|(a, b)| (label(a), label(b))),
            );
            let mut tree = vec![i];
            tree.extend(next..next + k - 1);
            trees.push(tree);
            next += k - 1;
        }
        let g = Digraph::new(self.n, arcs).expect("canonical members are simple");
        GnmStructure::from_parts(g, (0..self.m).collect(), trees)
    }
}

/// Streams G(n, m) members in index order, stopping after `budget`
/// instances when the space is larger.
pub struct GnmEnumeration {
    space: GnmSpace,
    next: u128,
    end: u128,
    truncated: bool,
}

impl GnmEnumeration {
    /// Whether the budget cut the stream short of the full space.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn total(&self) -> u128 {
        self.space.len()
    }

    pub fn space(&self) -> &GnmSpace {
        &self.space
    }
}

impl Iterator for GnmEnumeration {
    type Item = GnmStructure;

    fn next(&mut self) -> Option<GnmStructure> {
        (self.next < self.end).then(|| {
            self.next += 1;
            self.space.get(self.next - 1)
        })
    }
}

pub fn enumerate_gnm(n: usize, m: usize, budget: Option<u128>) -> Result<GnmEnumeration> {
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::TooLarge {
            n,
            limit: MAX_EXHAUSTIVE_N,
        });
    }
    let space = GnmSpace::new(n, m)?;
    let total = space.len();
    let end = budget.map_or(total, |b| b.min(total));
    Ok(GnmEnumeration {
        space,
        next: 0,
        end,
        truncated: end < total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ScanMode {
    /// Every instance, up to `budget` of them when given.
    Exhaustive { budget: Option<u64> },
    /// `count` indices drawn uniformly (with replacement) from the space.
    Sample { seed: u64, count: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanHit {
    /// The instance in the digraph text format.
    pub digraph: String,
    pub index: u128,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub alpha: Rational,
    pub radius: RadiusCertificate,
    pub radius_double_prime: RadiusCertificate,
    pub threshold: AlphaThreshold,
    /// lower(G) − upper(G″); positive only for counterexamples.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub n: usize,
    pub m: usize,
    #[serde(serialize_with = "serde_rational::vec::serialize")]
    pub alpha_grid: Vec<Rational>,
    pub mode: ScanMode,
    pub tol: f64,
    pub space_size: u128,
    pub instances_checked: u64,
    pub cases_checked: u64,
    pub truncated: bool,
    pub counterexamples: Vec<ScanHit>,
    pub near_miss_count: u64,
    pub near_misses: Vec<ScanHit>,
    pub unconverged: u64,
    pub seed: Option<u64>,
}

enum Outcome {
    Clear,
    Counterexample(ScanHit),
    NearMiss(ScanHit),
    Unconverged,
}

fn compare(s: &GnmStructure, index: u128, alpha: &Rational, tol: f64) -> Result<Outcome> {
    let g = s.digraph();
    let gpp = to_g_double_prime(s).result;
    let r = spectral_radius(g, alpha, tol)?;
    let rpp = spectral_radius(&gpp, alpha, tol)?;
    if !r.converged || !rpp.converged {
        return Ok(Outcome::Unconverged);
    }
    let gap = r.lower - rpp.upper;
    let hit = || ScanHit {
        digraph: write_digraph(g),
        index,
        alpha: alpha.clone(),
        radius: r.clone(),
        radius_double_prime: rpp.clone(),
        threshold: alpha_threshold(s),
        gap,
    };
    if gap > 0.0 {
        return Ok(Outcome::Counterexample(hit()));
    }
    // Overlapping enclosures, or separated by less than 4·tol.
    let scale = r.upper.max(rpp.upper).max(1.0);
    if r.upper + 4.0 * tol * scale >= rpp.lower && *g != gpp {
        return Ok(Outcome::NearMiss(hit()));
    }
    Ok(Outcome::Clear)
}

/// Certified comparison of ρ_α(G) with ρ_α(G″) over G(n, m).
///
/// A counterexample needs upper(G″) < lower(G) strictly. Unconverged
/// certificates are counted and kept out of both lists. Results are merged
/// in index order, so the report does not depend on thread scheduling.
pub fn scan_radius_maximality(
    n: usize,
    m: usize,
    alpha_grid: &[Rational],
    tol: f64,
    mode: ScanMode,
) -> Result<ScanReport> {
    let (space, indices, truncated, seed): (GnmSpace, Vec<u128>, bool, Option<u64>) = match mode {
        ScanMode::Exhaustive { budget } => {
            let e = enumerate_gnm(n, m, budget.map(u128::from))?;
            let indices = (0..e.end).collect();
            (e.space, indices, e.truncated, None)
        }
        ScanMode::Sample { seed, count } => {
            let space = GnmSpace::new(n, m)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let indices = (0..count).map(|_| rng.gen_range(0..space.len())).collect();
            (space, indices, false, Some(seed))
        }
    };
    for a in alpha_grid {
        crate::linalg::rational::check_alpha(a)?;
    }

    let outcomes: Vec<Vec<Outcome>> = indices
        .par_iter()
        .map(|&i| {
            let s = space.get(i);
            alpha_grid
                .iter()
                .map(|a| compare(&s, i, a, tol))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut report = ScanReport {
        n,
        m,
        alpha_grid: alpha_grid.to_vec(),
        mode,
        tol,
        space_size: space.len(),
        instances_checked: indices.len() as u64,
        cases_checked: (indices.len() * alpha_grid.len()) as u64,
        truncated,
        counterexamples: Vec::new(),
        near_miss_count: 0,
        near_misses: Vec::new(),
        unconverged: 0,
        seed,
    };
    for outcome in outcomes.into_iter().flatten() {
        match outcome {
            Outcome::Clear => {}
            Outcome::Counterexample(hit) => report.counterexamples.push(hit),
            Outcome::NearMiss(hit) => {
                report.near_miss_count += 1;
                if report.near_misses.len() < NEAR_MISS_LIMIT {
                    report.near_misses.push(hit);
                }
            }
            Outcome::Unconverged => report.unconverged += 1,
        }
    }
    Ok(report)
}

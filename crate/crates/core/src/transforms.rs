//! Re-hanging the trees of a G(n, m) member: out-stars (G′), a single
//! out-star at v₁ (G″), and in-paths (G‴).
//!
//! Core arcs and vertex labels never change; only tree arcs are rewritten.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::Serialize;

use crate::digraph::Digraph;
use crate::error::Error;
use crate::linalg::rational::{int, serde_rational, Rational};
use crate::scc::GnmStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformKind {
    Prime,
    DoublePrime,
    TriplePrime,
}

impl TransformKind {
    pub const ALL: [TransformKind; 3] = [
        TransformKind::Prime,
        TransformKind::DoublePrime,
        TransformKind::TriplePrime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Prime => "prime",
            TransformKind::DoublePrime => "double-prime",
            TransformKind::TriplePrime => "triple-prime",
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "prime" | "'" | "1" => Ok(TransformKind::Prime),
            "double-prime" | "''" | "2" => Ok(TransformKind::DoublePrime),
            "triple-prime" | "'''" | "3" => Ok(TransformKind::TriplePrime),
            _ => Err(Error::Parse {
                line: 0,
                message: format!(
                    "unknown transform `{s}` (expected prime, double-prime or triple-prime)"
                ),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformOutcome {
    pub result: Digraph,
    pub structure: GnmStructure,
    pub kind: TransformKind,
}

fn rebuild(
    s: &GnmStructure,
    trees: Vec<Vec<usize>>,
    tree_arcs: Vec<(usize, usize)>,
    kind: TransformKind,
) -> TransformOutcome {
    let mut arcs = s.core_arcs();
    arcs.extend(tree_arcs);
    let result = Digraph::new(s.n(), arcs).expect("tree rewrites keep the digraph simple");
    TransformOutcome {
        structure: GnmStructure::from_parts(result.clone(), s.core().to_vec(), trees),
        result,
        kind,
    }
}

/// Every tree becomes an out-star centred at its core vertex.
pub fn to_g_prime(s: &GnmStructure) -> TransformOutcome {
    let arcs = s
        .core()
        .iter()
        .zip(s.trees())
        .flat_map(|(&v, tree)| tree.iter().filter(move |&&u| u != v).map(move |&u| (v, u)))
        .collect();
    rebuild(s, s.trees().to_vec(), arcs, TransformKind::Prime)
}

/// All n − m non-core vertices become leaves of one out-star at v₁.
pub fn to_g_double_prime(s: &GnmStructure) -> TransformOutcome {
    single_star_at(s, s.v1())
}

/// Core vertices of maximal core outdegree, ascending. v₁ is the first.
pub fn max_out_degree_hubs(s: &GnmStructure) -> Vec<usize> {
    let best = s.max_core_out_degree();
    s.core()
        .iter()
        .zip(s.core_out_degrees())
        .filter(|(_, &d)| d == best)
        .map(|(&v, _)| v)
        .collect()
}

/// All n − m non-core vertices become leaves of one out-star at core vertex
/// `v1`, which need not have maximal outdegree.
///
/// # Panics
/// If `v1` is not a core vertex.
pub fn single_star_at(s: &GnmStructure, v1: usize) -> TransformOutcome {
    assert!(s.is_core(v1), "hub {v1} is not a core vertex");
    let leaves: Vec<usize> = (0..s.n()).filter(|&u| !s.is_core(u)).collect();
    let arcs = leaves.iter().map(|&u| (v1, u)).collect();
    let trees = s
        .core()
        .iter()
        .map(|&v| {
            if v == v1 {
                let mut t = leaves.clone();
                t.push(v1);
                t.sort_unstable();
                t
            } else {
                vec![v]
            }
        })
        .collect();
    rebuild(s, trees, arcs, TransformKind::DoublePrime)
}

/// Every tree becomes a directed path into its core vertex: with the
/// non-root vertices u₁ < u₂ < … the arcs are u₁→vᵢ, u₂→u₁, ….
pub fn to_g_triple_prime(s: &GnmStructure) -> TransformOutcome {
    let mut arcs = Vec::new();
    for (&v, tree) in s.core().iter().zip(s.trees()) {
        let mut prev = v;
        for &u in tree.iter().filter(|&&u| u != v) {
            arcs.push((u, prev));
            prev = u;
        }
    }
    rebuild(s, s.trees().to_vec(), arcs, TransformKind::TriplePrime)
}

pub fn apply(s: &GnmStructure, kind: TransformKind) -> TransformOutcome {
    match kind {
        TransformKind::Prime => to_g_prime(s),
        TransformKind::DoublePrime => to_g_double_prime(s),
        TransformKind::TriplePrime => to_g_triple_prime(s),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaThreshold {
    #[serde(serialize_with = "serde_rational::serialize")]
    pub value: Rational,
    /// n − m − n₁ + 1 = 0: every tree vertex already hangs on v₁, so the
    /// interval is empty and `value` is reported as 1.
    pub degenerate: bool,
}

/// d⁺_{G*}(v₁) / (d⁺_{G*}(v₁) + n − m − n₁ + 1).
pub fn alpha_threshold(s: &GnmStructure) -> AlphaThreshold {
    let d = s.max_core_out_degree();
    let rest = s.n() - s.m() + 1 - s.n1();
    if rest == 0 {
        return AlphaThreshold {
            value: Rational::one(),
            degenerate: true,
        };
    }
    AlphaThreshold {
        value: int(d as i64) / int((d + rest) as i64),
        degenerate: false,
    }
}

/// Every tree is an out-star centred at its core vertex (G = G′).
pub fn is_out_star_forest(s: &GnmStructure) -> bool {
    to_g_prime(s).result == *s.digraph()
}

/// All non-core vertices are leaves of a single out-star hung on a core
/// vertex of maximal core outdegree (any such vertex when several tie).
pub fn is_single_star_at_max(s: &GnmStructure) -> bool {
    let best = s.max_core_out_degree();
    let hub = s
        .core()
        .iter()
        .zip(s.core_out_degrees())
        .zip(s.trees())
        .find(|((_, _), tree)| tree.len() > 1);
    match hub {
        None => true,
        Some(((&v, &d), tree)) => {
            d == best
                && tree.len() == s.n() - s.m() + 1
                && tree.iter().all(|&u| u == v || s.digraph().has_arc(v, u))
        }
    }
}

/// Every tree is an in-tree rooted at its core vertex: each non-core vertex
/// has exactly one out-arc.
pub fn is_in_forest(s: &GnmStructure) -> bool {
    (0..s.n()).all(|u| s.is_core(u) || s.digraph().out_degree(u) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{generate, hang_trees, FamilySpec, HungTree};
    use crate::linalg::rational::rat;
    use crate::scc::classify_gnm;
    use crate::spectra::energy;
    use proptest::prelude::*;

    fn structure(n: usize, arcs: &[(usize, usize)]) -> GnmStructure {
        classify_gnm(&Digraph::new(n, arcs.iter().copied()).unwrap()).unwrap()
    }

    fn arcs_of(g: &Digraph) -> Vec<(usize, usize)> {
        g.arcs().collect()
    }

    #[test]
    fn prime_examples() {
        // C2 with v0 -> 2 -> 3
        let s = structure(4, &[(0, 1), (1, 0), (0, 2), (2, 3)]);
        assert_eq!(
            arcs_of(&to_g_prime(&s).result),
            vec![(0, 1), (0, 2), (0, 3), (1, 0)]
        );
        let fixed = structure(4, &[(0, 1), (1, 0), (0, 2), (0, 3)]);
        assert_eq!(to_g_prime(&fixed).result, *fixed.digraph());
        // C3 with in-path 4 -> 3 -> 1
        let s = structure(5, &[(0, 1), (1, 2), (2, 0), (3, 1), (4, 3)]);
        assert_eq!(
            arcs_of(&to_g_prime(&s).result),
            vec![(0, 1), (1, 2), (1, 3), (1, 4), (2, 0)]
        );
    }

    #[test]
    fn double_prime_examples() {
        let s = structure(4, &[(0, 1), (1, 0), (0, 2), (1, 3)]);
        let out = to_g_double_prime(&s).result;
        assert_eq!(arcs_of(&out), vec![(0, 1), (0, 2), (0, 3), (1, 0)]);
        assert_eq!(out.out_degree(0), 3);
        let fixed = structure(4, &[(0, 1), (1, 0), (0, 2), (0, 3)]);
        assert_eq!(to_g_double_prime(&fixed).result, *fixed.digraph());
        // core outdegrees (1, 2, 1): 0 -> 1, 1 -> 0, 1 -> 2, 2 -> 1, leaf on 0
        let s = structure(4, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 3)]);
        assert_eq!(s.core_out_degrees(), &[1, 2, 1]);
        let out = to_g_double_prime(&s).result;
        assert!(out.has_arc(1, 3) && !out.has_arc(0, 3));
    }

    #[test]
    fn triple_prime_examples() {
        let s = structure(4, &[(0, 1), (1, 0), (0, 2), (2, 3)]);
        assert_eq!(
            arcs_of(&to_g_triple_prime(&s).result),
            vec![(0, 1), (1, 0), (2, 0), (3, 2)]
        );
        let bare = structure(3, &[(0, 1), (1, 0), (2, 1)]);
        assert_eq!(to_g_triple_prime(&bare).result, *bare.digraph());
        // out-star of 3 leaves on v0 becomes 4 -> 3 -> 2 -> 0
        let s = structure(5, &[(0, 1), (1, 0), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(
            arcs_of(&to_g_triple_prime(&s).result),
            vec![(0, 1), (1, 0), (2, 0), (3, 2), (4, 3)]
        );
    }

    #[test]
    fn threshold_examples() {
        // cycle core, n = 6, m = 3, n1 = 2
        let s = structure(6, &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (4, 5)]);
        assert_eq!(alpha_threshold(&s).value, rat(1, 3));
        // everything already on v1
        let s = structure(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (0, 4)]);
        let t = alpha_threshold(&s);
        assert!(t.degenerate);
        assert_eq!(t.value, int(1));
        // d = 2, n - m - n1 + 1 = 3: core 0 <-> 1 <-> 2 has v1 = 1 with n1 = 1
        let s = structure(6, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 3), (2, 4), (2, 5)]);
        assert_eq!((s.max_core_out_degree(), s.n1()), (2, 1));
        assert_eq!(alpha_threshold(&s).value, rat(2, 5));
    }

    #[test]
    fn equality_predicates() {
        let star = structure(4, &[(0, 1), (1, 0), (0, 2), (0, 3)]);
        assert!(is_out_star_forest(&star) && is_single_star_at_max(&star) && !is_in_forest(&star));
        let split = structure(4, &[(0, 1), (1, 0), (0, 2), (1, 3)]);
        assert!(is_out_star_forest(&split) && !is_single_star_at_max(&split));
        let inpath = structure(4, &[(0, 1), (1, 0), (2, 0), (3, 2)]);
        assert!(is_in_forest(&inpath) && !is_out_star_forest(&inpath));
        let bare = classify_gnm(&generate(&FamilySpec::Infinity(vec![2, 3])).unwrap());
        assert!(bare.is_err());
    }

    fn arb_tree(size: usize) -> impl Strategy<Value = Digraph> {
        // random recursive tree with random orientations
        (
            proptest::collection::vec(any::<proptest::sample::Index>(), size),
            proptest::collection::vec(any::<bool>(), size),
        )
            .prop_map(move |(parents, flips)| {
                let arcs = (1..size).map(|v| {
                    let p = parents[v].index(v);
                    if flips[v] {
                        (p, v)
                    } else {
                        (v, p)
                    }
                });
                Digraph::new(size, arcs).unwrap()
            })
    }

    fn arb_gnm() -> impl Strategy<Value = GnmStructure> {
        (2usize..5)
            .prop_flat_map(|m| {
                (
                    Just(m),
                    proptest::collection::vec(1usize..4, m),
                    any::<u64>(),
                )
            })
            .prop_flat_map(|(m, mut sizes, chords)| {
                // at least one nontrivial tree, otherwise the digraph is strong
                if sizes.iter().all(|&k| k == 1) {
                    sizes[chords as usize % m] = 2;
                }
                let trees: Vec<_> = sizes.iter().map(|&k| arb_tree(k)).collect();
                (Just(m), trees, Just(chords))
            })
            .prop_map(|(m, trees, chords)| {
                let mut arcs: Vec<(usize, usize)> = (0..m).map(|i| (i, (i + 1) % m)).collect();
                for t in 0..m {
                    for h in 0..m {
                        let bit = t * m + h;
                        if t != h && h != (t + 1) % m && chords >> bit & 1 == 1 {
                            arcs.push((t, h));
                        }
                    }
                }
                let mut seen = std::collections::BTreeSet::new();
                arcs.retain(|a| seen.insert(*a));
                let core = Digraph::new(m, arcs).unwrap();
                let hung: Vec<HungTree> = trees
                    .into_iter()
                    .enumerate()
                    .map(|(i, tree)| HungTree {
                        core_vertex: i,
                        tree,
                        root: 0,
                    })
                    .collect();
                classify_gnm(&hang_trees(&core, &hung).unwrap()).unwrap()
            })
    }

    proptest! {
        #[test]
        fn transforms_preserve_core_and_membership(s in arb_gnm()) {
            for kind in TransformKind::ALL {
                let out = apply(&s, kind);
                let again = classify_gnm(&out.result).unwrap();
                prop_assert_eq!(again.core(), s.core());
                prop_assert_eq!(again.core_arcs(), s.core_arcs());
                prop_assert_eq!(out.result.n(), s.n());
                prop_assert_eq!(&again, &out.structure);
                prop_assert_eq!(apply(&out.structure, kind).result, out.result.clone());
            }
        }

        #[test]
        fn energy_chain(s in arb_gnm(), k in 0i64..10) {
            let alpha = rat(k, 10);
            let e = |g: &Digraph| energy(g, &alpha).unwrap().closed_form;
            let (e0, e1, e2, e3) = (
                e(s.digraph()),
                e(&to_g_prime(&s).result),
                e(&to_g_double_prime(&s).result),
                e(&to_g_triple_prime(&s).result),
            );
            prop_assert!(e3 <= e0 && e0 <= e1 && e1 <= e2);
            if k > 0 {
                prop_assert_eq!(e0 == e1, is_out_star_forest(&s));
                prop_assert_eq!(e1 == e2, is_single_star_at_max(&to_g_prime(&s).structure));
                prop_assert_eq!(e3 == e0, is_in_forest(&s));
            }
        }
    }
}

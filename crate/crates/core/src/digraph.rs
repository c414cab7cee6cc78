//! Loop-free, multi-arc-free digraphs and the named families built from them.
//!
//! Vertices are `0..n`. Adjacency lists are kept sorted, so arc iteration is
//! lexicographic and structural equality is plain `==`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scc;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digraph {
    n: usize,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    arc_count: usize,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

impl Digraph {
    /// Builds a digraph, rejecting loops, duplicate arcs and out-of-range
    /// endpoints.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for (tail, head) in arcs {
            if tail >= n || head >= n {
                return Err(Error::VertexOutOfRange { tail, head, n });
            }
            if tail == head {
                return Err(Error::Loop(tail));
            }
            if !seen.insert((tail, head)) {
                return Err(Error::DuplicateArc(tail, head));
            }
            out_adj[tail].push(head);
            in_adj[head].push(tail);
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
        }
        Ok(Digraph {
            n,
            out_adj,
            in_adj,
            arc_count: seen.len(),
        })
    }

    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            arc_count: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(t, heads)| heads.iter().map(move |&h| (t, h)))
    }

    pub fn has_arc(&self, tail: usize, head: usize) -> bool {
        tail < self.n && self.out_adj[tail].binary_search(&head).is_ok()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.out_adj.iter().map(Vec::len).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        self.in_adj.iter().map(Vec::len).collect()
    }

    /// Δ⁺(G); zero for the empty digraph.
    pub fn max_out_degree(&self) -> usize {
        self.out_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of closed walks of length two, i.e. trace(A²): every symmetric
    /// pair contributes twice, once per starting vertex.
    pub fn closed_walks_2(&self) -> usize {
        self.arcs().filter(|&(t, h)| self.has_arc(h, t)).count()
    }

    /// Every arc has its reverse. Vacuously true without arcs.
    pub fn is_symmetric(&self) -> bool {
        self.arcs().all(|(t, h)| self.has_arc(h, t))
    }

    /// No arc has its reverse (a "simple" digraph).
    pub fn is_simple(&self) -> bool {
        self.arcs().all(|(t, h)| !self.has_arc(h, t))
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_weakly_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.out_adj[v].iter().chain(&self.in_adj[v]) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    pub fn is_strongly_connected(&self) -> bool {
        scc::tarjan_scc(self).components.len() == 1
    }

    /// Same vertex set, one arc removed. `None` if the arc is absent.
    pub fn without_arc(&self, tail: usize, head: usize) -> Option<Digraph> {
        if !self.has_arc(tail, head) {
            return None;
        }
        let arcs = self.arcs().filter(|&a| a != (tail, head));
        Some(Digraph::new(self.n, arcs).expect("subset of a valid arc set"))
    }

    /// Subdigraph induced by `vertices`, relabeled to `0..vertices.len()` in
    /// the given order.
    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let arcs = self
            .arcs()
            .filter(|&(t, h)| index[t] != usize::MAX && index[h] != usize::MAX)
            .map(|(t, h)| (index[t], index[h]));
        Digraph::new(vertices.len(), arcs).expect("induced arcs stay valid")
    }
}

/// Named digraph families with their size parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Path(usize),
    Cycle(usize),
    OutStar(usize),
    InStar(usize),
    SymStar(usize),
    /// Generalized ∞-digraph: directed cycles of the given lengths sharing vertex 0.
    Infinity(Vec<usize>),
    /// Bispindle: lengths of the (x,y)-paths, then of the (y,x)-paths.
    Bispindle(Vec<usize>, Vec<usize>),
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidFamily(format!("{self}: {msg}")));
        match self {
            FamilySpec::Path(n)
            | FamilySpec::OutStar(n)
            | FamilySpec::InStar(n)
            | FamilySpec::SymStar(n) => {
                if *n == 0 {
                    return bad("needs at least one vertex");
                }
            }
            FamilySpec::Cycle(n) => {
                if *n < 2 {
                    return bad("cycles need n >= 2");
                }
            }
            FamilySpec::Infinity(ms) => {
                if ms.is_empty() {
                    return bad("needs at least one cycle");
                }
                if ms.iter().any(|&m| m < 2) {
                    return bad("every cycle length must be >= 2");
                }
            }
            FamilySpec::Bispindle(ps, qs) => {
                if ps.is_empty() || qs.is_empty() {
                    return bad("needs p >= 1 and q >= 1");
                }
                if ps.iter().chain(qs).any(|&l| l == 0) {
                    return bad("path lengths must be >= 1");
                }
                if ps.iter().filter(|&&l| l == 1).count() > 1
                    || qs.iter().filter(|&&l| l == 1).count() > 1
                {
                    return bad("two length-1 paths in one direction would repeat an arc");
                }
            }
        }
        Ok(())
    }

    /// Vertex count of the generated digraph.
    pub fn vertex_count(&self) -> usize {
        match self {
            FamilySpec::Path(n)
            | FamilySpec::Cycle(n)
            | FamilySpec::OutStar(n)
            | FamilySpec::InStar(n)
            | FamilySpec::SymStar(n) => *n,
            FamilySpec::Infinity(ms) => ms.iter().sum::<usize>() + 1 - ms.len(),
            FamilySpec::Bispindle(ps, qs) => 2 + ps.iter().chain(qs).map(|l| l - 1).sum::<usize>(),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        match self {
            FamilySpec::Path(n) => write!(f, "path:{n}"),
            FamilySpec::Cycle(n) => write!(f, "cycle:{n}"),
            FamilySpec::OutStar(n) => write!(f, "outstar:{n}"),
            FamilySpec::InStar(n) => write!(f, "instar:{n}"),
            FamilySpec::SymStar(n) => write!(f, "symstar:{n}"),
            FamilySpec::Infinity(ms) => write!(f, "infinity:{}", join(ms)),
            FamilySpec::Bispindle(ps, qs) => write!(f, "bispindle:{};{}", join(ps), join(qs)),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// `name:params`, e.g. `cycle:5`, `infinity:2,2,3`, `bispindle:1,2;3`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |msg: String| Error::Parse {
            line: 0,
            message: msg,
        };
        let (name, params) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| parse_err(format!("family spec `{s}` is missing `:`")))?;
        let list = |p: &str| -> Result<Vec<usize>> {
            p.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| parse_err(format!("bad integer `{x}` in `{s}`")))
                })
                .collect()
        };
        let single = |p: &str| -> Result<usize> {
            match list(p)?.as_slice() {
                [n] => Ok(*n),
                _ => Err(parse_err(format!("`{name}` takes one integer"))),
            }
        };
        let spec = match name.trim().to_ascii_lowercase().as_str() {
            "path" => FamilySpec::Path(single(params)?),
            "cycle" => FamilySpec::Cycle(single(params)?),
            "outstar" => FamilySpec::OutStar(single(params)?),
            "instar" => FamilySpec::InStar(single(params)?),
            "symstar" => FamilySpec::SymStar(single(params)?),
            "infinity" => FamilySpec::Infinity(list(params)?),
            "bispindle" => {
                let (p, q) = params.split_once(';').ok_or_else(|| {
                    parse_err(format!("bispindle needs `p-lengths;q-lengths` in `{s}`"))
                })?;
                FamilySpec::Bispindle(list(p)?, list(q)?)
            }
            other => return Err(parse_err(format!("unknown family `{other}`"))),
        };
        Ok(spec)
    }
}

/// Builds the family member. Vertex 0 is the centre / common / initial
/// vertex; the bispindle terminal vertex is 1; path vertices follow the arcs.
pub fn generate(spec: &FamilySpec) -> Result<Digraph> {
    spec.validate()?;
    let n = spec.vertex_count();
    let arcs: Vec<(usize, usize)> = match spec {
        FamilySpec::Path(n) => (1..*n).map(|i| (i - 1, i)).collect(),
        FamilySpec::Cycle(n) => (0..*n).map(|i| (i, (i + 1) % n)).collect(),
        FamilySpec::OutStar(n) => (1..*n).map(|i| (0, i)).collect(),
        FamilySpec::InStar(n) => (1..*n).map(|i| (i, 0)).collect(),
        FamilySpec::SymStar(n) => (1..*n).flat_map(|i| [(0, i), (i, 0)]).collect(),
        FamilySpec::Infinity(ms) => {
            let mut arcs = Vec::new();
            let mut next = 1;
            for &m in ms {
                let mut prev = 0;
                for _ in 0..m - 1 {
                    arcs.push((prev, next));
                    prev = next;
                    next += 1;
                }
                arcs.push((prev, 0));
            }
            arcs
        }
        FamilySpec::Bispindle(ps, qs) => {
            let mut arcs = Vec::new();
            let mut next = 2;
            let mut add_path = |from: usize, to: usize, len: usize, arcs: &mut Vec<_>| {
                let mut prev = from;
                for _ in 0..len - 1 {
                    arcs.push((prev, next));
                    prev = next;
                    next += 1;
                }
                arcs.push((prev, to));
            };
            for &l in ps {
                add_path(0, 1, l, &mut arcs);
            }
            for &l in qs {
                add_path(1, 0, l, &mut arcs);
            }
            arcs
        }
    };
    Digraph::new(n, arcs)
}

/// A tree to hang on a core vertex: `root` (a vertex of `tree`) is merged
/// into `core_vertex`.
#[derive(Debug, Clone)]
pub struct HungTree {
    pub core_vertex: usize,
    pub tree: Digraph,
    pub root: usize,
}

/// Merges each tree's root into its core vertex. Core vertices keep their
/// labels; the non-root tree vertices are appended tree by tree, in
/// increasing tree-local order.
pub fn hang_trees(core: &Digraph, trees: &[HungTree]) -> Result<Digraph> {
    if !core.is_strongly_connected() {
        return Err(Error::CoreNotStrong);
    }
    let m = core.n();
    let mut used = vec![false; m];
    let mut arcs: Vec<(usize, usize)> = core.arcs().collect();
    let mut next = m;
    for hung in trees {
        let v = hung.core_vertex;
        if v >= m {
            return Err(Error::NoSuchCoreVertex(v));
        }
        if std::mem::replace(&mut used[v], true) {
            return Err(Error::DuplicateAttachment(v));
        }
        let t = &hung.tree;
        if hung.root >= t.n() {
            return Err(Error::NotATree(format!(
                "root {} outside tree of order {}",
                hung.root,
                t.n()
            )));
        }
        if t.arc_count() + 1 != t.n() || !t.is_weakly_connected() {
            return Err(Error::NotATree(format!(
                "{} vertices, {} arcs, connected = {}",
                t.n(),
                t.arc_count(),
                t.is_weakly_connected()
            )));
        }
        let mut label = vec![0; t.n()];
        for (local, slot) in label.iter_mut().enumerate() {
            if local == hung.root {
                *slot = v;
            } else {
                *slot = next;
                next += 1;
            }
        }
        arcs.extend(t.arcs().map(|(a, b)| (label[a], label[b])));
    }
    Digraph::new(next, arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Digraph {
        Digraph::new(2, [(0, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn smallest_cycle() {
        let g = c2();
        assert_eq!(g.out_degrees(), vec![1, 1]);
        assert_eq!(g.in_degrees(), vec![1, 1]);
        assert_eq!(g.closed_walks_2(), 2);
    }

    #[test]
    fn single_vertex() {
        let g = Digraph::new(1, []).unwrap();
        assert_eq!(g.out_degrees(), vec![0]);
        assert!(g.is_strongly_connected());
    }

    #[test]
    fn construction_errors_are_distinct() {
        assert_eq!(Digraph::new(3, [(0, 0)]), Err(Error::Loop(0)));
        assert_eq!(
            Digraph::new(3, [(0, 1), (0, 1)]),
            Err(Error::DuplicateArc(0, 1))
        );
        assert_eq!(
            Digraph::new(3, [(0, 3)]),
            Err(Error::VertexOutOfRange {
                tail: 0,
                head: 3,
                n: 3
            })
        );
    }

    #[test]
    fn closed_walk_counts() {
        assert_eq!(generate(&FamilySpec::Path(5)).unwrap().closed_walks_2(), 0);
        assert_eq!(
            generate(&FamilySpec::SymStar(4)).unwrap().closed_walks_2(),
            6
        );
        let inf = generate(&FamilySpec::Infinity(vec![2, 2])).unwrap();
        assert_eq!(inf.n(), 3);
        assert_eq!(inf.closed_walks_2(), 4);
    }

    #[test]
    fn out_star_golden() {
        let g = generate(&FamilySpec::OutStar(4)).unwrap();
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (0, 3)]);
        assert_eq!(g.out_degrees(), vec![3, 0, 0, 0]);
    }

    #[test]
    fn degenerate_bispindle_is_c2() {
        let g = generate(&FamilySpec::Bispindle(vec![1], vec![1])).unwrap();
        assert_eq!(g, c2());
    }

    #[test]
    fn bispindle_layout() {
        // x=0, y=1; (x,y)-paths of lengths 1 and 2, (y,x)-path of length 3
        let g = generate(&FamilySpec::Bispindle(vec![1, 2], vec![3])).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(
            g.arcs().collect::<Vec<_>>(),
            vec![(0, 1), (0, 2), (1, 3), (2, 1), (3, 4), (4, 0)]
        );
        assert_eq!(g.out_degrees(), vec![2, 1, 1, 1, 1]);
    }

    #[test]
    fn infinity_vertex_count() {
        let spec = FamilySpec::Infinity(vec![2, 3, 4]);
        let g = generate(&spec).unwrap();
        assert_eq!(g.n(), 2 + 3 + 4 - 3 + 1);
        assert_eq!(g.out_degree(0), 3);
        assert!(g.is_strongly_connected());
    }

    #[test]
    fn invalid_families() {
        for spec in [
            FamilySpec::Cycle(1),
            FamilySpec::Infinity(vec![2, 1]),
            FamilySpec::Infinity(vec![]),
            FamilySpec::Bispindle(vec![], vec![1]),
            FamilySpec::Bispindle(vec![1, 1], vec![2]),
            FamilySpec::Bispindle(vec![0], vec![2]),
        ] {
            assert!(
                matches!(generate(&spec), Err(Error::InvalidFamily(_))),
                "{spec}"
            );
        }
    }

    #[test]
    fn symmetry_predicates() {
        let star = generate(&FamilySpec::SymStar(4)).unwrap();
        assert_eq!((star.is_symmetric(), star.is_simple()), (true, false));
        let p3 = generate(&FamilySpec::Path(3)).unwrap();
        assert_eq!((p3.is_symmetric(), p3.is_simple()), (false, true));
        let mixed = Digraph::new(3, [(0, 1), (1, 0), (0, 2)]).unwrap();
        assert_eq!((mixed.is_symmetric(), mixed.is_simple()), (false, false));
    }

    #[test]
    fn cycles_strong_paths_not() {
        for n in 2..8 {
            assert!(generate(&FamilySpec::Cycle(n))
                .unwrap()
                .is_strongly_connected());
            assert!(!generate(&FamilySpec::Path(n))
                .unwrap()
                .is_strongly_connected());
        }
    }

    #[test]
    fn family_spec_round_trip() {
        for s in [
            "path:4",
            "cycle:5",
            "outstar:3",
            "instar:2",
            "symstar:3",
            "infinity:2,2,3",
            "bispindle:1,2;3",
        ] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("bispindle:1,2".parse::<FamilySpec>().is_err());
        assert!("wheel:5".parse::<FamilySpec>().is_err());
        assert!("cycle:a".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn hang_path_on_c2() {
        let tree = generate(&FamilySpec::Path(3)).unwrap();
        let g = hang_trees(
            &c2(),
            &[HungTree {
                core_vertex: 0,
                tree,
                root: 0,
            }],
        )
        .unwrap();
        assert_eq!(
            g.arcs().collect::<Vec<_>>(),
            vec![(0, 1), (0, 2), (1, 0), (2, 3)]
        );
    }

    #[test]
    fn hang_nothing_is_identity() {
        let c3 = generate(&FamilySpec::Cycle(3)).unwrap();
        assert_eq!(hang_trees(&c3, &[]).unwrap(), c3);
    }

    #[test]
    fn hang_tree_errors() {
        let leaf = || generate(&FamilySpec::Path(2)).unwrap();
        let twice = [
            HungTree {
                core_vertex: 0,
                tree: leaf(),
                root: 0,
            },
            HungTree {
                core_vertex: 0,
                tree: leaf(),
                root: 0,
            },
        ];
        assert_eq!(
            hang_trees(&c2(), &twice),
            Err(Error::DuplicateAttachment(0))
        );
        let far = [HungTree {
            core_vertex: 5,
            tree: leaf(),
            root: 0,
        }];
        assert_eq!(hang_trees(&c2(), &far), Err(Error::NoSuchCoreVertex(5)));
        let cyc = [HungTree {
            core_vertex: 0,
            tree: c2(),
            root: 0,
        }];
        assert!(matches!(hang_trees(&c2(), &cyc), Err(Error::NotATree(_))));
        let p3 = generate(&FamilySpec::Path(3)).unwrap();
        assert_eq!(hang_trees(&p3, &[]), Err(Error::CoreNotStrong));
    }
}

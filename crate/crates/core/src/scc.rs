//! Strong components and recognition of the class G(n, m): digraphs with a
//! unique nontrivial strong component (the core) and oriented trees hung on
//! its vertices.

use std::fmt;

use serde::Serialize;

use crate::digraph::Digraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Component id of every vertex.
    pub component_of: Vec<usize>,
    /// Vertex lists, each sorted ascending, indexed by component id.
    pub components: Vec<Vec<usize>>,
    /// Component ids such that every inter-component arc goes from an earlier
    /// to a later entry (sources first).
    pub topo_order: Vec<usize>,
}

impl SccDecomposition {
    pub fn nontrivial(&self) -> impl Iterator<Item = (usize, &[usize])> {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() >= 2)
            .map(|(i, c)| (i, c.as_slice()))
    }
}

/// Tarjan's algorithm, iterative, with DFS roots and successors visited in
/// increasing vertex order. Component ids are assigned in completion order
/// (sinks first); `topo_order` is the reverse of that.
pub fn tarjan_scc(g: &Digraph) -> SccDecomposition {
    const UNSEEN: usize = usize::MAX;
    let n = g.n();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component_of = vec![0; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0;
    // (vertex, position in its successor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = g.out_neighbors(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = components.len();
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component_of[w] = id;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }

    let topo_order = (0..components.len()).rev().collect();
    SccDecomposition {
        component_of,
        components,
        topo_order,
    }
}

/// Why a digraph is not in G(n, m).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NotMember {
    StronglyConnected,
    NoNontrivialComponent,
    MultipleNontrivialComponents,
    NonTreeAttachment,
    Disconnected,
}

impl fmt::Display for NotMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NotMember::StronglyConnected => "strongly connected",
            NotMember::NoNontrivialComponent => "no strong component with two or more vertices",
            NotMember::MultipleNontrivialComponents => "more than one nontrivial strong component",
            NotMember::NonTreeAttachment => "arcs outside the core do not form hung trees",
            NotMember::Disconnected => "underlying graph is disconnected",
        })
    }
}

impl std::error::Error for NotMember {}

/// A member of G(n, m) split into its core and hung trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GnmStructure {
    g: Digraph,
    core: Vec<usize>,
    trees: Vec<Vec<usize>>,
    core_out_deg: Vec<usize>,
    v1: usize,
}

impl GnmStructure {
    /// Assembles the structure from a known core and tree partition.
    /// Callers guarantee the decomposition is correct.
    pub(crate) fn from_parts(g: Digraph, core: Vec<usize>, trees: Vec<Vec<usize>>) -> Self {
        let mut is_core = vec![false; g.n()];
        for &v in &core {
            is_core[v] = true;
        }
        let core_out_deg: Vec<usize> = core
            .iter()
            .map(|&v| g.out_neighbors(v).iter().filter(|&&w| is_core[w]).count())
            .collect();
        // Core is sorted, so the first maximizer has the lowest vertex index.
        let best = core_out_deg.iter().copied().max().unwrap_or(0);
        let v1 = core_out_deg.iter().position(|&d| d == best).unwrap_or(0);
        GnmStructure {
            g,
            core,
            trees,
            core_out_deg,
            v1,
        }
    }

    pub fn digraph(&self) -> &Digraph {
        &self.g
    }

    pub fn into_digraph(self) -> Digraph {
        self.g
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn m(&self) -> usize {
        self.core.len()
    }

    /// Core vertices, ascending.
    pub fn core(&self) -> &[usize] {
        &self.core
    }

    /// Vertex set of the tree hung on the `i`-th core vertex (includes it).
    pub fn tree(&self, i: usize) -> &[usize] {
        &self.trees[i]
    }

    pub fn trees(&self) -> &[Vec<usize>] {
        &self.trees
    }

    /// n_i for every core vertex, in core order.
    pub fn tree_sizes(&self) -> Vec<usize> {
        self.trees.iter().map(Vec::len).collect()
    }

    /// d⁺ within the core, in core order.
    pub fn core_out_degrees(&self) -> &[usize] {
        &self.core_out_deg
    }

    /// Core outdegrees sorted descending.
    pub fn core_out_degrees_sorted(&self) -> Vec<usize> {
        let mut d = self.core_out_deg.clone();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Position (in core order) of v₁, the core vertex of maximal core
    /// outdegree with the lowest vertex index.
    pub fn v1_index(&self) -> usize {
        self.v1
    }

    pub fn v1(&self) -> usize {
        self.core[self.v1]
    }

    /// n₁: size of the tree at v₁.
    pub fn n1(&self) -> usize {
        self.trees[self.v1].len()
    }

    pub fn max_core_out_degree(&self) -> usize {
        self.core_out_deg[self.v1]
    }

    /// The core G* as its own digraph, relabeled to `0..m` in core order.
    pub fn core_digraph(&self) -> Digraph {
        self.g.induced(&self.core)
    }

    /// Arcs with both endpoints in the core.
    pub fn core_arcs(&self) -> Vec<(usize, usize)> {
        let mut is_core = vec![false; self.n()];
        for &v in &self.core {
            is_core[v] = true;
        }
        self.g
            .arcs()
            .filter(|&(t, h)| is_core[t] && is_core[h])
            .collect()
    }

    /// Arcs of the tree hung on the `i`-th core vertex.
    pub fn tree_arcs(&self, i: usize) -> Vec<(usize, usize)> {
        let tree = &self.trees[i];
        let inside = |v: usize| tree.binary_search(&v).is_ok();
        self.g
            .arcs()
            .filter(|&(t, h)| inside(t) && inside(h) && !(self.is_core(t) && self.is_core(h)))
            .collect()
    }

    pub fn is_core(&self, v: usize) -> bool {
        self.core.binary_search(&v).is_ok()
    }
}

/// Decides membership in G(n, m) for some m >= 2 and extracts the structure.
pub fn classify_gnm(g: &Digraph) -> Result<GnmStructure, NotMember> {
    if !g.is_weakly_connected() {
        return Err(NotMember::Disconnected);
    }
    let scc = tarjan_scc(g);
    if scc.components.len() == 1 {
        return Err(NotMember::StronglyConnected);
    }
    let mut nontrivial = scc.nontrivial();
    let core = match (nontrivial.next(), nontrivial.next()) {
        (None, _) => return Err(NotMember::NoNontrivialComponent),
        (Some(_), Some(_)) => return Err(NotMember::MultipleNontrivialComponents),
        (Some((_, core)), None) => core.to_vec(),
    };

    let n = g.n();
    let mut is_core = vec![false; n];
    for &v in &core {
        is_core[v] = true;
    }
    // Union-find over the arcs that leave the core; they must form a forest
    // in which every tree holds exactly one core vertex.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (t, h) in g.arcs() {
        if is_core[t] && is_core[h] {
            continue;
        }
        let (a, b) = (find(&mut parent, t), find(&mut parent, h));
        if a == b {
            return Err(NotMember::NonTreeAttachment);
        }
        parent[a] = b;
    }
    let mut root_to_core = vec![usize::MAX; n];
    for (i, &v) in core.iter().enumerate() {
        let r = find(&mut parent, v);
        if root_to_core[r] != usize::MAX {
            return Err(NotMember::NonTreeAttachment);
        }
        root_to_core[r] = i;
    }
    let mut trees = vec![Vec::new(); core.len()];
    for v in 0..n {
        let r = find(&mut parent, v);
        match root_to_core[r] {
            usize::MAX => return Err(NotMember::NonTreeAttachment),
            i => trees[i].push(v),
        }
    }
    Ok(GnmStructure::from_parts(g.clone(), core, trees))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{generate, hang_trees, FamilySpec, HungTree};
    use proptest::prelude::*;

    fn reach(g: &Digraph) -> Vec<Vec<bool>> {
        let n = g.n();
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for (t, h) in g.arcs() {
            r[t][h] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        r
    }

    fn digraph_from_bits(n: usize, bits: u32) -> Digraph {
        let arcs = (0..n)
            .flat_map(|t| (0..n).map(move |h| (t, h)))
            .filter(|&(t, h)| t != h)
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, a)| a);
        Digraph::new(n, arcs).unwrap()
    }

    #[test]
    fn cycle_is_one_component() {
        let s = tarjan_scc(&generate(&FamilySpec::Cycle(3)).unwrap());
        assert_eq!(s.components, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn path_topo_order_source_first() {
        let s = tarjan_scc(&generate(&FamilySpec::Path(3)).unwrap());
        assert_eq!(s.components.len(), 3);
        let order: Vec<usize> = s.topo_order.iter().map(|&c| s.components[c][0]).collect();
        assert_eq!(order, vec![0, 1, 2]);
    }

    #[test]
    fn c2_with_pendant() {
        let g = Digraph::new(3, [(0, 1), (1, 0), (0, 2)]).unwrap();
        let s = tarjan_scc(&g);
        let mut comps = s.components.clone();
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn classify_c2_with_pendant_path() {
        let g = Digraph::new(4, [(0, 1), (1, 0), (0, 2), (2, 3)]).unwrap();
        let s = classify_gnm(&g).unwrap();
        assert_eq!(s.m(), 2);
        assert_eq!(s.tree_sizes(), vec![3, 1]);
        assert_eq!(s.core_out_degrees(), &[1, 1]);
        assert_eq!(s.v1(), 0);
        assert_eq!(s.tree_arcs(0), vec![(0, 2), (2, 3)]);
    }

    #[test]
    fn classify_rejections() {
        let c3 = generate(&FamilySpec::Cycle(3)).unwrap();
        assert_eq!(classify_gnm(&c3), Err(NotMember::StronglyConnected));
        let two = Digraph::new(4, [(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]).unwrap();
        assert_eq!(
            classify_gnm(&two),
            Err(NotMember::MultipleNontrivialComponents)
        );
        let p3 = generate(&FamilySpec::Path(3)).unwrap();
        assert_eq!(classify_gnm(&p3), Err(NotMember::NoNontrivialComponent));
        let apart = Digraph::new(3, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(classify_gnm(&apart), Err(NotMember::Disconnected));
        // 0 -> 2 <- 1 joins two core vertices through a tree vertex
        let bridge = Digraph::new(3, [(0, 1), (1, 0), (0, 2), (1, 2)]).unwrap();
        assert_eq!(classify_gnm(&bridge), Err(NotMember::NonTreeAttachment));
        // underlying cycle among tree vertices
        let tri = Digraph::new(5, [(0, 1), (1, 0), (0, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(classify_gnm(&tri), Err(NotMember::NonTreeAttachment));
    }

    #[test]
    fn v1_tie_break_lowest_index() {
        // core outdegrees (1, 2, 1): vertex 1 wins; then the tie case on C3.
        let g = Digraph::new(4, [(0, 1), (1, 2), (1, 0), (2, 0), (2, 3)]).unwrap();
        let s = classify_gnm(&g).unwrap();
        assert_eq!(s.core_out_degrees(), &[1, 2, 1]);
        assert_eq!(s.v1(), 1);
        assert_eq!(s.core_out_degrees_sorted(), vec![2, 1, 1]);
        let g = Digraph::new(4, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert_eq!(classify_gnm(&g).unwrap().v1(), 0);
    }

    #[test]
    fn tarjan_matches_reachability_exhaustive_n4() {
        for bits in 0..(1u32 << 12) {
            let g = digraph_from_bits(4, bits);
            check_against_reach(&g);
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn check_against_reach(g: &Digraph) {
        let s = tarjan_scc(g);
        let r = reach(g);
        let n = g.n();
        let mut count = vec![0; n];
        for (id, comp) in s.components.iter().enumerate() {
            for &v in comp {
                count[v] += 1;
                assert_eq!(s.component_of[v], id);
            }
        }
        assert!(count.iter().all(|&c| c == 1));
        for i in 0..n {
            for j in 0..n {
                let same = s.component_of[i] == s.component_of[j];
                assert_eq!(same, r[i][j] && r[j][i], "{g:?} {i} {j}");
            }
        }
        let pos: Vec<usize> = {
            let mut p = vec![0; s.components.len()];
            for (k, &c) in s.topo_order.iter().enumerate() {
                p[c] = k;
            }
            p
        };
        for (t, h) in g.arcs() {
            let (a, b) = (s.component_of[t], s.component_of[h]);
            assert!(a == b || pos[a] < pos[b]);
        }
    }

    proptest! {
        #[test]
        fn tarjan_matches_reachability_n5(bits in 0u32..(1 << 20)) {
            check_against_reach(&digraph_from_bits(5, bits));
        }

        #[test]
        fn classify_inverts_hang_trees(core_len in 2usize..5, sizes in proptest::collection::vec(1usize..4, 4), orient in any::<u32>()) {
            let core = generate(&FamilySpec::Cycle(core_len)).unwrap();
            let mut trees = Vec::new();
            let mut bit = 0;
            for (v, &k) in sizes.iter().take(core_len).enumerate() {
                if k == 1 { continue; }
                // path on k vertices with per-edge orientation from `orient`
                let arcs: Vec<_> = (1..k).map(|i| {
                    bit += 1;
                    if orient >> (bit % 32) & 1 == 1 { (i - 1, i) } else { (i, i - 1) }
                }).collect();
                trees.push(HungTree { core_vertex: v, tree: Digraph::new(k, arcs).unwrap(), root: 0 });
            }
            let g = hang_trees(&core, &trees).unwrap();
            let expected: Vec<usize> = sizes.iter().take(core_len).copied().collect();
            let total: usize = expected.iter().sum();
            if total == core_len {
                prop_assert_eq!(classify_gnm(&g), Err(NotMember::StronglyConnected));
            } else {
                let s = classify_gnm(&g).unwrap();
                prop_assert_eq!(s.m(), core_len);
                prop_assert_eq!(s.tree_sizes(), expected);
                prop_assert_eq!(s.core_arcs().len(), core.arc_count());
                prop_assert_eq!(g.arc_count(), core.arc_count() + total - core_len);
                let scc = tarjan_scc(&g);
                for v in 0..g.n() {
                    if !s.is_core(v) {
                        prop_assert_eq!(scc.components[scc.component_of[v]].len(), 1);
                    }
                }
            }
        }
    }
}

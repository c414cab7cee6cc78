//! Labeled trees from Prüfer sequences, and their orientations.

/// Number of labeled trees on `k` vertices (kᵏ⁻², and 1 for k ≤ 2).
pub fn tree_count(k: usize) -> u128 {
    if k <= 2 {
        1
    } else {
        (k as u128).pow(k as u32 - 2)
    }
}

/// Number of oriented labeled trees on `k` vertices.
pub fn oriented_tree_count(k: usize) -> u128 {
    tree_count(k) << k.saturating_sub(1)
}

/// Edges `(u, v)` with `u < v` of the tree with the given Prüfer sequence.
pub fn prufer_decode(seq: &[usize]) -> Vec<(usize, usize)> {
    let k = seq.len() + 2;
    let mut degree = vec![1usize; k];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    for &s in seq {
        let leaf = (0..k)
            .find(|&v| degree[v] == 1)
            .expect("a Prüfer sequence always leaves a leaf");
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let mut last = (0..k).filter(|&v| degree[v] == 1);
    let (a, b) = (last.next().unwrap(), last.next().unwrap());
    edges.push((a, b));
    edges
}

/// The `index`-th labeled tree on `k` vertices (Prüfer digits read
/// most-significant first), as undirected edges.
pub fn tree_by_index(k: usize, index: u128) -> Vec<(usize, usize)> {
    match k {
        0 | 1 => Vec::new(),
        2 => vec![(0, 1)],
        _ => {
            let mut seq = vec![0; k - 2];
            let mut rest = index;
            for slot in seq.iter_mut().rev() {
                *slot = (rest % k as u128) as usize;
                rest /= k as u128;
            }
            prufer_decode(&seq)
        }
    }
}

/// Orients edge j as `(u, v)` when bit j of `mask` is clear and as `(v, u)`
/// when it is set.
pub fn orient(edges: &[(usize, usize)], mask: u64) -> Vec<(usize, usize)> {
    edges
        .iter()
        .enumerate()
        .map(|(j, &(u, v))| if mask >> j & 1 == 1 { (v, u) } else { (u, v) })
        .collect()
}

/// The `index`-th oriented tree on `k` vertices: index = tree · 2ᵏ⁻¹ + mask.
pub fn oriented_tree_by_index(k: usize, index: u128) -> Vec<(usize, usize)> {
    let orientations = 1u128 << k.saturating_sub(1);
    orient(
        &tree_by_index(k, index / orientations),
        (index % orientations) as u64,
    )
}

/// Every oriented labeled tree on `k` vertices, in index order.
pub fn oriented_trees(k: usize) -> impl Iterator<Item = Vec<(usize, usize)>> {
    (0..oriented_tree_count(k)).map(move |i| oriented_tree_by_index(k, i))
}

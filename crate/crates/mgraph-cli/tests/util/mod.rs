//! Test-only helpers: a brute-force tree-isomorphism oracle (independent of
//! the library's canonical codes) and an exhaustive corpus of unlabeled
//! trees generated by leaf attachment.

use mgraph::{AdjGraph, TreeSpec};

/// Decides tree isomorphism by backtracking over vertex assignments,
/// anchoring each vertex to the image of its BFS parent. Independent of the
/// canonical-code machinery on purpose.
pub fn brute_force_isomorphic(t1: &TreeSpec, t2: &TreeSpec) -> bool {
    let n = t1.vertex_count();
    if n != t2.vertex_count() {
        return false;
    }
    if n == 1 {
        return true;
    }
    let g1 = t1.to_graph();
    let g2 = t2.to_graph();
    let deg1: Vec<u64> = (0..n as u32).map(|v| g1.degree(v)).collect();
    let deg2: Vec<u64> = (0..n as u32).map(|v| g2.degree(v)).collect();
    let mut sorted1 = deg1.clone();
    let mut sorted2 = deg2.clone();
    sorted1.sort_unstable();
    sorted2.sort_unstable();
    if sorted1 != sorted2 {
        return false;
    }
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![u32::MAX; n];
    parent[0] = 0;
    order.push(0u32);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in g1.neighbors(v) {
            if parent[w as usize] == u32::MAX {
                parent[w as usize] = v;
                order.push(w);
            }
        }
    }
    let mut image = vec![u32::MAX; n];
    let mut used = vec![false; n];
    assign(
        0, &order, &parent, &deg1, &deg2, &g2, &mut image, &mut used,
    )
}

#[allow(clippy::too_many_arguments)]
fn assign(
    idx: usize,
    order: &[u32],
    parent: &[u32],
    deg1: &[u64],
    deg2: &[u64],
    g2: &AdjGraph,
    image: &mut [u32],
    used: &mut [bool],
) -> bool {
    if idx == order.len() {
        // Every edge of t1 is a parent edge, mapped injectively onto edges
        // of g2; equal edge counts make this a full isomorphism.
        return true;
    }
    let u = order[idx] as usize;
    let try_vertex = |w: u32, image: &mut [u32], used: &mut [bool]| -> bool {
        if used[w as usize] || deg2[w as usize] != deg1[u] {
            return false;
        }
        image[u] = w;
        used[w as usize] = true;
        if assign(idx + 1, order, parent, deg1, deg2, g2, image, used) {
            return true;
        }
        used[w as usize] = false;
        image[u] = u32::MAX;
        false
    };
    if idx == 0 {
        for w in 0..g2.vertex_count() as u32 {
            if try_vertex(w, image, used) {
                return true;
            }
        }
    } else {
        let anchor = image[parent[u] as usize];
        for &w in g2.neighbors(anchor) {
            if try_vertex(w, image, used) {
                return true;
            }
        }
    }
    false
}

/// One representative per isomorphism class of trees with `1..=max_n`
/// vertices (`result[s - 1]` holds size `s`), generated by attaching a leaf
/// to every vertex of every smaller tree and deduplicating with the
/// brute-force oracle.
pub fn tree_corpus(max_n: usize) -> Vec<Vec<TreeSpec>> {
    let mut by_size: Vec<Vec<TreeSpec>> = vec![vec![TreeSpec::new(1, vec![]).unwrap()]];
    for n in 2..=max_n {
        let mut reps: Vec<TreeSpec> = Vec::new();
        for smaller in &by_size[n - 2] {
            for v in 0..(n - 1) as u32 {
                let mut edges = smaller.edges().to_vec();
                edges.push((v, (n - 1) as u32));
                let candidate = TreeSpec::new(n, edges).unwrap();
                if !reps.iter().any(|r| brute_force_isomorphic(r, &candidate)) {
                    reps.push(candidate);
                }
            }
        }
        by_size.push(reps);
    }
    by_size
}

/// Applies a vertex relabeling to a tree.
pub fn relabel(tree: &TreeSpec, perm: &[u32]) -> TreeSpec {
    let edges = tree
        .edges()
        .iter()
        .map(|&(u, v)| (perm[u as usize], perm[v as usize]))
        .collect();
    TreeSpec::new(tree.vertex_count(), edges).unwrap()
}

/// Deterministic pseudo-random permutation (keyed Fisher-Yates).
pub fn deterministic_permutation(n: usize, seed: u64) -> Vec<u32> {
    let mut state = seed ^ 0x9e37_79b9_7f4a_7c15;
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        state >> 33
    };
    let mut perm: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = (next() as usize) % (i + 1);
        perm.swap(i, j);
    }
    perm
}

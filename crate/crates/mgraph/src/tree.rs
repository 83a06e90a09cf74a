//! Trees as validated edge lists, canonical codes for unlabeled-tree
//! comparison, and explicit vertex bijections between trees that share a
//! code.
//!
//! The canonical code is the classical parenthesis encoding rooted at the
//! tree's center (lexicographically smaller of the two rooted codes when the
//! tree is bicentral). Two trees are isomorphic exactly when their codes are
//! equal, and [`tree_mapping`] turns equal codes into an explicit bijection.

use crate::error::{Error, Result};
use crate::graph::AdjGraph;
use crate::iso::VertexBijection;
use serde::{Serialize, Serializer};
use std::fmt;

/// A tree on vertices `0..vertex_count`, stored as a normalized edge list
/// (each edge `(u, v)` with `u < v`, sorted ascending).
///
/// Construction validates everything: the edge count, endpoint ranges,
/// absence of self-loops and duplicates, and connectivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSpec {
    vertex_count: usize,
    edges: Vec<(u32, u32)>,
}

impl TreeSpec {
    /// Validates and normalizes an edge list into a tree.
    pub fn new(vertex_count: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidArgument(
                "a tree needs at least one vertex".into(),
            ));
        }
        if vertex_count > u32::MAX as usize {
            return Err(Error::InvalidArgument(format!(
                "vertex count {vertex_count} exceeds the u32 vertex index range"
            )));
        }
        if edges.len() != vertex_count - 1 {
            return Err(Error::NotATree(format!(
                "{} vertices require exactly {} edges, got {}",
                vertex_count,
                vertex_count - 1,
                edges.len()
            )));
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u as usize >= vertex_count || v as usize >= vertex_count {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::NotATree(format!("self-loop at vertex {u}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotATree("duplicate edge".into()));
        }
        let tree = TreeSpec {
            vertex_count,
            edges: normalized,
        };
        // Right edge count + no duplicates + connected together imply acyclic.
        if !tree.to_graph().is_connected() {
            return Err(Error::NotATree("edge list is not connected".into()));
        }
        Ok(tree)
    }

    /// Parses the plain-text tree format: the first significant line holds
    /// the vertex count, each following line one edge as `u v` (0-based).
    /// Blank lines and lines starting with `#` are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut vertex_count: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            match vertex_count {
                None => {
                    let n = line.parse::<usize>().map_err(|_| {
                        Error::Parse(format!(
                            "line {lineno}: expected a vertex count, got {line:?}"
                        ))
                    })?;
                    vertex_count = Some(n);
                }
                Some(_) => {
                    let mut tokens = line.split_whitespace();
                    let (u, v) = match (tokens.next(), tokens.next(), tokens.next()) {
                        (Some(u), Some(v), None) => (u, v),
                        _ => {
                            return Err(Error::Parse(format!(
                                "line {lineno}: expected an edge as two vertex ids, got {line:?}"
                            )))
                        }
                    };
                    let parse = |t: &str| {
                        t.parse::<u32>().map_err(|_| {
                            Error::Parse(format!("line {lineno}: invalid vertex id {t:?}"))
                        })
                    };
                    edges.push((parse(u)?, parse(v)?));
                }
            }
        }
        let vertex_count =
            vertex_count.ok_or_else(|| Error::Parse("no vertex count line found".into()))?;
        TreeSpec::new(vertex_count, edges)
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Normalized edge list (each `(u, v)` with `u < v`, sorted).
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Materializes the adjacency-list view of the tree.
    pub fn to_graph(&self) -> AdjGraph {
        AdjGraph::from_edges(self.vertex_count, self.edges.iter().copied())
    }

    /// Extracts the tree underlying `graph`, rejecting graphs that are not
    /// trees.
    pub fn from_graph(graph: &AdjGraph) -> Result<Self> {
        if graph.vertex_count() == 0 {
            return Err(Error::NotATree("graph has no vertices".into()));
        }
        if !graph.is_tree() {
            return Err(Error::NotATree(
                "graph is not connected and acyclic".into(),
            ));
        }
        Ok(TreeSpec {
            vertex_count: graph.vertex_count(),
            edges: graph.edge_list(),
        })
    }

    /// Renders the plain-text format accepted by [`TreeSpec::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.vertex_count);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Extracts the tree underlying `graph` (see [`TreeSpec::from_graph`]).
pub fn graph_to_tree(graph: &AdjGraph) -> Result<TreeSpec> {
    TreeSpec::from_graph(graph)
}

/// Canonical code of an unlabeled tree: equal codes ⟺ isomorphic trees.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalTreeCode {
    /// Nested-parenthesis encoding rooted at the canonical center.
    pub code: String,
    /// Number of vertices of the encoded tree.
    pub vertex_count: usize,
}

impl fmt::Display for CanonicalTreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code)
    }
}

impl Serialize for CanonicalTreeCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.code)
    }
}

/// The center vertices of a tree (one or two), by iterative leaf peeling.
fn tree_centers(graph: &AdjGraph) -> Vec<u32> {
    let n = graph.vertex_count();
    if n == 1 {
        return vec![0];
    }
    let mut deg: Vec<u32> = (0..n).map(|v| graph.degree(v as u32) as u32).collect();
    let mut leaves: Vec<u32> = (0..n as u32).filter(|&v| deg[v as usize] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for &v in &leaves {
            for &w in graph.neighbors(v) {
                if deg[w as usize] > 1 {
                    deg[w as usize] -= 1;
                    if deg[w as usize] == 1 {
                        next.push(w);
                    }
                }
            }
            deg[v as usize] = 0;
        }
        leaves = next;
    }
    leaves.sort_unstable();
    leaves
}

/// Rooted canonical codes for every vertex of a tree, processed bottom-up
/// with an explicit queue (no recursion, so deep paths are fine).
///
/// Returns `(codes, children)` where `children[v]` is sorted by
/// `(codes[child], child)`, the order used to pair subtrees deterministically.
fn rooted_codes(graph: &AdjGraph, root: u32) -> (Vec<String>, Vec<Vec<u32>>) {
    let n = graph.vertex_count();
    let mut parent = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut children: Vec<Vec<u32>> = vec![Vec::new(); n];
    parent[root as usize] = root;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in graph.neighbors(v) {
            if parent[w as usize] == u32::MAX {
                parent[w as usize] = v;
                children[v as usize].push(w);
                order.push(w);
            }
        }
    }
    debug_assert_eq!(order.len(), n, "rooted_codes requires a connected tree");
    let mut codes = vec![String::new(); n];
    for &v in order.iter().rev() {
        children[v as usize]
            .sort_by(|&a, &b| codes[a as usize].cmp(&codes[b as usize]).then(a.cmp(&b)));
        let inner: usize = children[v as usize]
            .iter()
            .map(|&c| codes[c as usize].len())
            .sum();
        let mut code = String::with_capacity(inner + 2);
        code.push('(');
        for &c in &children[v as usize] {
            code.push_str(&codes[c as usize]);
        }
        code.push(')');
        codes[v as usize] = code;
    }
    (codes, children)
}

/// Canonical root of a tree plus the rooted codes from it: the center whose
/// rooted code is lexicographically smallest (ties broken by vertex id).
fn canonical_root(graph: &AdjGraph) -> (u32, Vec<String>, Vec<Vec<u32>>) {
    let centers = tree_centers(graph);
    let (first, rest) = centers.split_first().expect("a tree has at least one center");
    let (codes_a, children_a) = rooted_codes(graph, *first);
    match rest.first() {
        Some(&second) => {
            let (codes_b, children_b) = rooted_codes(graph, second);
            if codes_b[second as usize] < codes_a[*first as usize] {
                (second, codes_b, children_b)
            } else {
                (*first, codes_a, children_a)
            }
        }
        None => (*first, codes_a, children_a),
    }
}

/// Canonical code of a tree given as a [`TreeSpec`].
pub fn ahu_encode(tree: &TreeSpec) -> CanonicalTreeCode {
    let graph = tree.to_graph();
    let (root, codes, _) = canonical_root(&graph);
    CanonicalTreeCode {
        code: codes[root as usize].clone(),
        vertex_count: tree.vertex_count(),
    }
}

/// Canonical code of a graph that must be a tree.
pub fn ahu_encode_graph(graph: &AdjGraph) -> Result<CanonicalTreeCode> {
    let tree = TreeSpec::from_graph(graph)?;
    Ok(ahu_encode(&tree))
}

/// Explicit isomorphism between two trees with equal canonical codes.
///
/// Roots both trees at their canonical centers and pairs children in the
/// deterministic `(code, vertex id)` order, so the result is reproducible.
/// Fails with [`Error::InvalidArgument`] when the trees are not isomorphic.
pub fn tree_mapping(t1: &TreeSpec, t2: &TreeSpec) -> Result<VertexBijection> {
    if t1.vertex_count() != t2.vertex_count() {
        return Err(Error::InvalidArgument(format!(
            "trees have different vertex counts: {} vs {}",
            t1.vertex_count(),
            t2.vertex_count()
        )));
    }
    let g1 = t1.to_graph();
    let g2 = t2.to_graph();
    let (root1, codes1, children1) = canonical_root(&g1);
    let (root2, codes2, children2) = canonical_root(&g2);
    if codes1[root1 as usize] != codes2[root2 as usize] {
        return Err(Error::InvalidArgument(
            "trees are not isomorphic: canonical codes differ".into(),
        ));
    }
    let mut forward = vec![0u32; t1.vertex_count()];
    let mut stack = vec![(root1, root2)];
    while let Some((u, v)) = stack.pop() {
        forward[u as usize] = v;
        let kids1 = &children1[u as usize];
        let kids2 = &children2[v as usize];
        debug_assert_eq!(kids1.len(), kids2.len());
        for (&a, &b) in kids1.iter().zip(kids2.iter()) {
            debug_assert_eq!(codes1[a as usize], codes2[b as usize]);
            stack.push((a, b));
        }
    }
    VertexBijection::from_forward(forward)
}

//! Explicit graphs: adjacency-list storage, a BFS-based structure report,
//! and multiplication-graph construction.
//!
//! Everything in this module is computed directly from the edge set, so it
//! serves as the ground truth the closed forms in [`crate::closed_form`]
//! are compared against.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::GroupSpec;

/// Default cap on graph size (number of vertices).
pub const DEFAULT_VERTEX_LIMIT: u64 = 1 << 22;

/// A graph distance: a finite hop count, or unreachable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Distance {
    /// Reachable in exactly this many edges.
    Finite(u64),
    /// No path exists.
    Infinite,
}

impl Distance {
    /// The finite value, if any.
    pub fn finite(self) -> Option<u64> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Distance {
    /// Finite distances serialize as numbers, `Infinite` as `null`.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => serializer.serialize_u64(*d),
            Distance::Infinite => serializer.serialize_none(),
        }
    }
}

/// Structure report computed purely from the edge set by BFS.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    /// Whether the graph has a single connected component.
    pub connected: bool,
    /// Number of connected components.
    pub component_count: u64,
    /// Whether the graph is a tree (connected and acyclic).
    pub is_tree: bool,
    /// Whether the vertices admit a proper 2-coloring.
    pub is_bipartite: bool,
    /// Largest finite distance, or `Infinite` when disconnected.
    pub diameter: Distance,
    /// Map from degree to the number of vertices with that degree.
    pub degree_census: BTreeMap<u64, u64>,
}

/// Undirected simple graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjGraph {
    adj: Vec<Vec<u32>>,
    edge_count: u64,
}

impl AdjGraph {
    /// Builds a graph on `vertex_count` vertices from an edge iterator.
    ///
    /// Self-loops are dropped and parallel edges are stored once.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> AdjGraph
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut adj = vec![Vec::new(); vertex_count];
        for (u, v) in edges {
            if u == v {
                continue;
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut edge_count = 0u64;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len() as u64;
        }
        AdjGraph {
            adj,
            edge_count: edge_count / 2,
        }
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of (undirected, deduplicated) edges.
    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    /// Degree of `v`.
    pub fn degree(&self, v: u32) -> u64 {
        self.adj[v as usize].len() as u64
    }

    /// Whether `{u, v}` is an edge.
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Every edge once, as `(u, v)` with `u < v`, sorted.
    pub fn edge_list(&self) -> Vec<(u32, u32)> {
        let mut edges = Vec::with_capacity(self.edge_count as usize);
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if (u as u32) < v {
                    edges.push((u as u32, v));
                }
            }
        }
        edges
    }

    /// BFS from `src`, filling `dist` (`u32::MAX` = unreached) and using
    /// `queue` as scratch. Returns `(farthest vertex, its distance,
    /// number of vertices reached)`.
    fn bfs_fill(&self, src: u32, dist: &mut [u32], queue: &mut Vec<u32>) -> (u32, u32, usize) {
        dist.fill(u32::MAX);
        queue.clear();
        dist[src as usize] = 0;
        queue.push(src);
        let mut head = 0usize;
        let mut farthest = src;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            let dv = dist[v as usize];
            if dv > dist[farthest as usize] {
                farthest = v;
            }
            for &w in &self.adj[v as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dv + 1;
                    queue.push(w);
                }
            }
        }
        (farthest, dist[farthest as usize], queue.len())
    }

    /// Distance between two vertices by BFS.
    pub fn bfs_distance(&self, u: u32, v: u32) -> Distance {
        if u == v {
            return Distance::Finite(0);
        }
        let n = self.vertex_count();
        let mut dist = vec![u32::MAX; n];
        let mut queue = Vec::with_capacity(n);
        self.bfs_fill(u, &mut dist, &mut queue);
        match dist[v as usize] {
            u32::MAX => Distance::Infinite,
            d => Distance::Finite(d as u64),
        }
    }

    /// Distances from `src` to every vertex by a single BFS.
    pub fn bfs_distances_from(&self, src: u32) -> Vec<Distance> {
        let n = self.vertex_count();
        let mut dist = vec![u32::MAX; n];
        let mut queue = Vec::with_capacity(n);
        self.bfs_fill(src, &mut dist, &mut queue);
        dist.into_iter()
            .map(|d| match d {
                u32::MAX => Distance::Infinite,
                d => Distance::Finite(d as u64),
            })
            .collect()
    }

    /// Number of connected components.
    pub fn component_count(&self) -> u64 {
        let n = self.vertex_count();
        if n == 0 {
            return 0;
        }
        let mut dist = vec![u32::MAX; n];
        let mut queue = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut components = 0u64;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            components += 1;
            self.bfs_fill(s as u32, &mut dist, &mut queue);
            for &v in queue.iter() {
                seen[v as usize] = true;
            }
        }
        components
    }

    /// Whether the graph is connected (vacuously true on 0 vertices).
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut dist = vec![u32::MAX; n];
        let mut queue = Vec::with_capacity(n);
        let (_, _, reached) = self.bfs_fill(0, &mut dist, &mut queue);
        reached == n
    }

    /// Whether the graph is a tree: connected with exactly `n - 1` edges.
    pub fn is_tree(&self) -> bool {
        let n = self.vertex_count();
        n > 0 && self.edge_count == n as u64 - 1 && self.is_connected()
    }

    /// Whether the graph admits a proper 2-coloring (checked per component).
    pub fn is_bipartite(&self) -> bool {
        let n = self.vertex_count();
        let mut color = vec![u8::MAX; n];
        let mut queue: Vec<u32> = Vec::with_capacity(n);
        for s in 0..n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            queue.clear();
            queue.push(s as u32);
            let mut head = 0usize;
            while head < queue.len() {
                let v = queue[head];
                head += 1;
                for &w in &self.adj[v as usize] {
                    if color[w as usize] == u8::MAX {
                        color[w as usize] = 1 - color[v as usize];
                        queue.push(w);
                    } else if color[w as usize] == color[v as usize] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Map from degree to how many vertices have that degree.
    pub fn degree_census(&self) -> BTreeMap<u64, u64> {
        let mut census = BTreeMap::new();
        for list in &self.adj {
            *census.entry(list.len() as u64).or_insert(0) += 1;
        }
        census
    }

    /// Exact diameter from the edge set.
    ///
    /// Disconnected graphs report [`Distance::Infinite`]. Trees use the
    /// two-sweep BFS algorithm (exact on any tree); other graphs run a
    /// full all-sources BFS in parallel.
    pub fn diameter_bruteforce(&self) -> Distance {
        let n = self.vertex_count();
        if n == 0 {
            return Distance::Finite(0);
        }
        if !self.is_connected() {
            return Distance::Infinite;
        }
        if self.is_tree() {
            let mut dist = vec![u32::MAX; n];
            let mut queue = Vec::with_capacity(n);
            let (far, _, _) = self.bfs_fill(0, &mut dist, &mut queue);
            let (_, d, _) = self.bfs_fill(far, &mut dist, &mut queue);
            return Distance::Finite(d as u64);
        }
        Distance::Finite(self.diameter_all_sources())
    }

    /// All-sources BFS diameter; assumes the graph is connected.
    fn diameter_all_sources(&self) -> u64 {
        let n = self.vertex_count();
        (0..n as u32)
            .into_par_iter()
            .map_init(
                || (vec![u32::MAX; n], Vec::with_capacity(n)),
                |(dist, queue), s| {
                    let (_, ecc, _) = self.bfs_fill(s, dist, queue);
                    ecc as u64
                },
            )
            .max()
            .unwrap_or(0)
    }

    /// Computes the full BFS-based structure report.
    pub fn analyze(&self) -> GraphReport {
        let component_count = self.component_count();
        let connected = component_count <= 1;
        GraphReport {
            connected,
            component_count,
            is_tree: self.is_tree(),
            is_bipartite: self.is_bipartite(),
            diameter: self.diameter_bruteforce(),
            degree_census: self.degree_census(),
        }
    }
}

/// A multiplication graph: the graph on the elements of a finite abelian
/// group `H` with an edge between distinct `a` and `b` whenever
/// `m * a = b` or `m * b = a`.
#[derive(Debug, Clone)]
pub struct MGraph {
    spec: GroupSpec,
    multiplier: u64,
    graph: AdjGraph,
}

impl MGraph {
    /// The group the graph was built on.
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// The multiplier `m` the graph was built with.
    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }

    /// `gcd(m, exponent(H))`: the multiplier's effective part, since the
    /// edge set only depends on `m` through its action on `H`.
    pub fn reduced_multiplier(&self) -> u64 {
        crate::group::gcd(self.multiplier, self.spec.exponent())
    }

    /// The underlying simple graph.
    pub fn graph(&self) -> &AdjGraph {
        &self.graph
    }

    fn vertex_id(&self, v: u32) -> String {
        if self.spec.factor_count() == 1 {
            v.to_string()
        } else {
            format!("\"{}\"", self.spec.unrank(v as u64))
        }
    }

    /// Renders the graph in DOT format.
    ///
    /// The output is byte-deterministic: isolated vertices first (ascending
    /// rank), then each edge once with ascending endpoints, sorted by
    /// endpoint pair. Cyclic groups use bare residues as vertex ids;
    /// products use quoted tuples like `"(0,2)"`.
    pub fn export_dot(&self) -> String {
        let n = self.graph.vertex_count() as u32;
        let mut out = String::from("graph {\n");
        for v in 0..n {
            if self.graph.degree(v) == 0 {
                out.push_str("  ");
                out.push_str(&self.vertex_id(v));
                out.push_str(";\n");
            }
        }
        for v in 0..n {
            for &w in self.graph.neighbors(v) {
                if w > v {
                    out.push_str("  ");
                    out.push_str(&self.vertex_id(v));
                    out.push_str(" -- ");
                    out.push_str(&self.vertex_id(w));
                    out.push_str(";\n");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the multiplication graph of `spec` with multiplier `m`, capped at
/// [`DEFAULT_VERTEX_LIMIT`] vertices.
pub fn build_mgraph(spec: &GroupSpec, m: u64) -> Result<MGraph> {
    build_mgraph_with_limit(spec, m, DEFAULT_VERTEX_LIMIT)
}

/// Builds the multiplication graph of `spec` with multiplier `m`, erroring
/// if the group order exceeds `limit`.
pub fn build_mgraph_with_limit(spec: &GroupSpec, m: u64, limit: u64) -> Result<MGraph> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "multiplier must be at least 2, got {m}"
        )));
    }
    if spec.order > limit {
        return Err(Error::ResourceLimit(format!(
            "graph on {} needs {} vertices, limit is {limit}",
            spec, spec.order
        )));
    }
    let n = spec.order;
    let edges = (0..n).filter_map(|r| {
        let image = spec.rank(&spec.scalar_mul(m, &spec.unrank(r)));
        (image != r).then_some((r as u32, image as u32))
    });
    let graph = AdjGraph::from_edges(n as usize, edges);
    Ok(MGraph {
        spec: spec.clone(),
        multiplier: m,
        graph,
    })
}

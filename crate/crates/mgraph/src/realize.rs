//! Realizing trees as multiplication graphs.
//!
//! A connected multiplication graph is always a tree, so it is natural to
//! ask the converse: given a tree, is it the multiplication graph of some
//! finite abelian group? This module provides
//!
//! * direct constructions for two parametric tree families that are always
//!   realizable over cyclic groups ([`construct_tree1`], [`construct_tree2`]),
//! * a sound certificate for a family of trees that no cyclic group can
//!   realize ([`check_notree_obstruction`]),
//! * an exhaustive search over groups of matching order
//!   ([`realize_tree`]), and
//! * a minimal cyclic construction achieving any prescribed diameter
//!   ([`construct_for_diameter`]).

use crate::error::{Error, Result};
use crate::graph::build_mgraph;
use crate::group::{factorize, invariant_chains_of_order, radical, GroupSpec};
use crate::iso::VertexBijection;
use crate::tree::{ahu_encode, tree_mapping, CanonicalTreeCode, TreeSpec};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use std::collections::BTreeMap;

/// Default cap on the vertex count accepted by [`realize_tree`].
pub const REALIZE_DEFAULT_VERTEX_LIMIT: usize = 4096;

/// A group and multiplier whose multiplication graph matches a target tree,
/// together with the explicit vertex bijection (tree vertex → element rank).
#[derive(Debug, Clone)]
pub struct Realization {
    /// The realizing group.
    pub spec: GroupSpec,
    /// The realizing multiplier.
    pub multiplier: u64,
    /// Maps each tree vertex to the rank of its group element.
    pub witness_bijection: VertexBijection,
}

impl Serialize for Realization {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Realization", 3)?;
        s.serialize_field("group", &self.spec.to_string())?;
        s.serialize_field("k", &self.multiplier)?;
        s.serialize_field("mapping", &self.witness_bijection)?;
        s.end()
    }
}

/// Builds the multiplication graph of `(spec, m)` and produces a verified
/// realization when its tree matches `target_code`.
fn try_candidate(
    spec: &GroupSpec,
    m: u64,
    tree: &TreeSpec,
    target_code: &CanonicalTreeCode,
    target_census: &BTreeMap<u64, u64>,
) -> Result<Option<Realization>> {
    let mg = build_mgraph(spec, m)?;
    // Cheap census prefilter: equal codes imply equal degree censuses.
    if &mg.graph().degree_census() != target_census {
        return Ok(None);
    }
    let graph_tree = TreeSpec::from_graph(mg.graph())?;
    if &ahu_encode(&graph_tree) != target_code {
        return Ok(None);
    }
    let witness = tree_mapping(tree, &graph_tree)?;
    Ok(Some(Realization {
        spec: spec.clone(),
        multiplier: m,
        witness_bijection: witness,
    }))
}

/// The multipliers `m = prod p^(a_p)` with `1 <= a_p <= v_p(exponent)` over
/// the primes of the group order, ascending. Every connected multiplication
/// graph on the group is the graph of exactly one such `m`, so these are
/// complete representatives of the connected isomorphism classes.
fn connected_multiplier_reps(spec: &GroupSpec) -> Vec<u64> {
    let mut ms = vec![1u64];
    for (p, emax) in factorize(spec.exponent()) {
        let mut next = Vec::new();
        for &base in &ms {
            let mut power = 1u64;
            for _ in 1..=emax {
                power *= p;
                next.push(base * power);
            }
        }
        ms = next;
    }
    ms.sort_unstable();
    ms
}

/// Searches for a group of order `tree.vertex_count()` and a multiplier
/// whose multiplication graph is isomorphic to `tree`, with a default
/// vertex cap of [`REALIZE_DEFAULT_VERTEX_LIMIT`].
///
/// Candidates are tried in a fixed order — cyclic groups with ascending
/// multiplier first, then the non-cyclic invariant chains sorted by moduli,
/// each with its connected multiplier representatives ascending — so the
/// returned realization is deterministic.
pub fn realize_tree(tree: &TreeSpec) -> Result<Option<Realization>> {
    realize_tree_with_limit(tree, REALIZE_DEFAULT_VERTEX_LIMIT)
}

/// [`realize_tree`] with an explicit vertex cap.
pub fn realize_tree_with_limit(
    tree: &TreeSpec,
    max_vertices: usize,
) -> Result<Option<Realization>> {
    let n = tree.vertex_count();
    if n > max_vertices {
        return Err(Error::ResourceLimit(format!(
            "tree has {n} vertices, above the search limit {max_vertices}"
        )));
    }
    if n < 2 {
        // The one-vertex tree is smaller than every group we model.
        return Ok(None);
    }
    let n64 = n as u64;
    let target_code = ahu_encode(tree);
    let target_census = tree.to_graph().degree_census();

    // Cyclic candidates: the connected classes are exactly the divisors of n
    // that are multiples of rad(n).
    let cyclic = GroupSpec::cyclic(n64)?;
    let rad = radical(n64);
    for k in 1..=n64 {
        if n64 % k != 0 || k % rad != 0 {
            continue;
        }
        debug_assert!(k >= 2, "multiples of rad(n) with n >= 2 are at least 2");
        if let Some(r) = try_candidate(&cyclic, k, tree, &target_code, &target_census)? {
            return Ok(Some(r));
        }
    }

    // Non-cyclic candidates, one per isomorphism class of group and of
    // connected multiplication graph.
    for spec in invariant_chains_of_order(n64)? {
        if spec.factor_count() < 2 {
            continue;
        }
        for m in connected_multiplier_reps(&spec) {
            if let Some(r) = try_candidate(&spec, m, tree, &target_code, &target_census)? {
                return Ok(Some(r));
            }
        }
    }
    Ok(None)
}

/// Builds the tree with a root of degree `d`, its `d` neighbors of degree
/// `d + 2`, and all remaining vertices leaves — `(d + 1)^2` vertices in
/// total — together with its cyclic realization: the `(d + 1)`-graph of
/// `Z_((d+1)^2)`.
pub fn construct_tree1(d: u64) -> Result<(TreeSpec, Realization)> {
    if d == 0 {
        return Err(Error::InvalidArgument(
            "the root degree d must be at least 1".into(),
        ));
    }
    let k = d + 1;
    let n = k
        .checked_mul(k)
        .filter(|&n| n <= u32::MAX as u64)
        .ok_or_else(|| Error::ResourceLimit(format!("(d + 1)^2 overflows for d = {d}")))?;
    let mut edges = Vec::with_capacity(n as usize - 1);
    // Root 0; spine vertices 1..=d; k leaves under each spine vertex.
    let mut next = d as u32 + 1;
    for j in 1..=d as u32 {
        edges.push((0, j));
        for _ in 0..k {
            edges.push((j, next));
            next += 1;
        }
    }
    let tree = TreeSpec::new(n as usize, edges)?;
    let spec = GroupSpec::cyclic(n)?;
    let mg = build_mgraph(&spec, k)?;
    let witness = tree_mapping(&tree, &TreeSpec::from_graph(mg.graph())?)?;
    Ok((
        tree,
        Realization {
            spec,
            multiplier: k,
            witness_bijection: witness,
        },
    ))
}

/// Builds, for even `k >= 4`, the tree on `2 k^2` vertices with a root of
/// degree `k - 1`, a set `F` of `2k - 1` vertices of degree `k + 1` (one of
/// them adjacent to `k` others of `F`, and every root neighbor in `F`), and
/// all remaining vertices leaves — together with its cyclic realization:
/// the `k`-graph of `Z_(2 k^2)`.
pub fn construct_tree2(k: u64) -> Result<(TreeSpec, Realization)> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "this family needs an even k >= 4, got {k}"
        )));
    }
    let n = k
        .checked_mul(k)
        .and_then(|kk| kk.checked_mul(2))
        .filter(|&n| n <= u32::MAX as u64)
        .ok_or_else(|| Error::ResourceLimit(format!("2 k^2 overflows for k = {k}")))?;
    let mut edges = Vec::with_capacity(n as usize - 1);
    // Root 0 with children 1..=k-1; vertex 1 is the hub whose k children
    // (ids k..2k-1) are the other high-degree vertices; every high-degree
    // vertex except the hub carries k leaves.
    for j in 1..k as u32 {
        edges.push((0, j));
    }
    for j in k as u32..2 * k as u32 {
        edges.push((1, j));
    }
    let mut next = 2 * k as u32;
    for hub in (2..k as u32).chain(k as u32..2 * k as u32) {
        for _ in 0..k {
            edges.push((hub, next));
            next += 1;
        }
    }
    let tree = TreeSpec::new(n as usize, edges)?;
    let spec = GroupSpec::cyclic(n)?;
    let mg = build_mgraph(&spec, k)?;
    let witness = tree_mapping(&tree, &TreeSpec::from_graph(mg.graph())?)?;
    Ok((
        tree,
        Realization {
            spec,
            multiplier: k,
            witness_bijection: witness,
        },
    ))
}

/// Sound certificate that a tree is *not* the multiplication graph of any
/// cyclic group.
///
/// Returns `true` only when both hold:
///
/// * the tree has `2^d * b` vertices (`d` odd, `b >= 3` odd) and some vertex
///   of degree `2^d - 1` — the shape of the obstructed family; and
/// * no vertex at all could serve as the identity of a connected cyclic
///   realization: for every degree, `deg + 1` fails to be a divisor of the
///   vertex count that is a multiple of its radical.
///
/// `false` means "no certificate", not "realizable".
pub fn check_notree_obstruction(tree: &TreeSpec) -> bool {
    let n = tree.vertex_count() as u64;
    let graph = tree.to_graph();
    let degrees: Vec<u64> = (0..graph.vertex_count())
        .map(|v| graph.degree(v as u32))
        .collect();
    let shape = degrees.iter().any(|&deg| {
        let kw = deg + 1;
        if !kw.is_power_of_two() {
            return false;
        }
        let d = kw.trailing_zeros();
        if d == 0 || d % 2 == 0 || n % (1u64 << d) != 0 {
            return false;
        }
        let b = n >> d;
        b % 2 == 1 && b >= 3
    });
    if !shape {
        return false;
    }
    // The identity of a connected k-graph on Z_n has degree k - 1 with
    // k | n and rad(n) | k; rule out every vertex as that identity.
    degrees.iter().all(|&deg| {
        let kw = deg + 1;
        !(kw >= 2 && n % kw == 0 && kw % radical(n) == 0)
    })
}

/// The smallest-order cyclic construction of each diameter: `(group, k)`
/// whose multiplication graph has diameter exactly `d`.
pub fn construct_for_diameter(d: u64) -> Result<(GroupSpec, u64)> {
    if d == 0 {
        return Err(Error::InvalidArgument(
            "every multiplication graph has at least two vertices, so diameter >= 1".into(),
        ));
    }
    if d == 1 {
        return Ok((GroupSpec::cyclic(2)?, 2));
    }
    let i = (d / 2) as u32;
    let base = 6u64
        .checked_pow(i)
        .ok_or_else(|| Error::ResourceLimit(format!("6^{i} overflows u64")))?;
    let n = if d % 2 == 0 {
        base
    } else {
        base.checked_mul(2)
            .ok_or_else(|| Error::ResourceLimit(format!("2 * 6^{i} overflows u64")))?
    };
    Ok((GroupSpec::cyclic(n)?, 6))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Distance;
    use crate::iso::verify_graph_isomorphism;

    fn path(n: usize) -> TreeSpec {
        let edges = (0..n as u32 - 1).map(|v| (v, v + 1)).collect();
        TreeSpec::new(n, edges).unwrap()
    }

    fn star(leaves: u32) -> TreeSpec {
        let edges = (1..=leaves).map(|v| (0, v)).collect();
        TreeSpec::new(leaves as usize + 1, edges).unwrap()
    }

    fn assert_realizes(tree: &TreeSpec, r: &Realization) {
        let mg = build_mgraph(&r.spec, r.multiplier).unwrap();
        assert!(verify_graph_isomorphism(&tree.to_graph(), mg.graph(), &r.witness_bijection)
            .unwrap());
    }

    #[test]
    fn tree1_small_cases() {
        let (tree, r) = construct_tree1(1).unwrap();
        assert_eq!(tree.vertex_count(), 4);
        assert_eq!(r.spec.moduli, vec![4]);
        assert_eq!(r.multiplier, 2);
        assert_realizes(&tree, &r);
        assert_eq!(ahu_encode(&tree), ahu_encode(&star(3)));

        for d in 2..=4 {
            let (tree, r) = construct_tree1(d).unwrap();
            assert_eq!(tree.vertex_count() as u64, (d + 1) * (d + 1));
            assert_eq!(r.spec.moduli, vec![(d + 1) * (d + 1)]);
            assert_eq!(r.multiplier, d + 1);
            assert_realizes(&tree, &r);
            let g = tree.to_graph();
            assert_eq!(g.degree(0), d);
            let census = g.degree_census();
            assert_eq!(census.get(&(d + 2)), Some(&d));
            assert_eq!(
                g.diameter_bruteforce(),
                Distance::Finite(if d == 1 { 2 } else { 4 })
            );
        }
        assert!(matches!(construct_tree1(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn tree2_structure_and_realization() {
        let (tree, r) = construct_tree2(4).unwrap();
        assert_eq!(tree.vertex_count(), 32);
        assert_eq!(r.spec.moduli, vec![32]);
        assert_eq!(r.multiplier, 4);
        assert_realizes(&tree, &r);
        let g = tree.to_graph();
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.degree_census(), BTreeMap::from([(1, 24), (3, 1), (5, 7)]));
        assert_eq!(g.diameter_bruteforce(), Distance::Finite(5));
        // The hub is a root neighbor of degree k + 1 with k children of
        // degree k + 1.
        let hub_children_high = g
            .neighbors(1)
            .iter()
            .filter(|&&w| w != 0 && g.degree(w) == 5)
            .count();
        assert_eq!(hub_children_high, 4);

        for bad in [2, 3, 5, 7] {
            assert!(matches!(
                construct_tree2(bad),
                Err(Error::InvalidArgument(_))
            ));
        }
    }

    #[test]
    fn obstruction_certificate_fixtures() {
        assert!(check_notree_obstruction(&path(6)));
        assert!(!check_notree_obstruction(&star(5)));
        assert!(!check_notree_obstruction(&path(2)));
        let (tree2, _) = construct_tree2(4).unwrap();
        assert!(!check_notree_obstruction(&tree2));
    }

    #[test]
    fn realize_finds_cyclic_groups() {
        let r = realize_tree(&star(3)).unwrap().unwrap();
        assert_eq!(r.spec.moduli, vec![4]);
        assert_eq!(r.multiplier, 2);
        assert_realizes(&star(3), &r);

        let r = realize_tree(&star(5)).unwrap().unwrap();
        assert_eq!(r.spec.moduli, vec![6]);
        assert_eq!(r.multiplier, 6);

        let r = realize_tree(&path(2)).unwrap().unwrap();
        assert_eq!(r.spec.moduli, vec![2]);
        assert_eq!(r.multiplier, 2);

        let (tree1, _) = construct_tree1(2).unwrap();
        let r = realize_tree(&tree1).unwrap().unwrap();
        assert_eq!(r.spec.moduli, vec![9]);
        assert_eq!(r.multiplier, 3);
        assert_realizes(&tree1, &r);
    }

    #[test]
    fn realize_finds_non_cyclic_groups() {
        // The 2-graph of Z2 x Z8 is a tree no cyclic group produces: its
        // census matches the 4-graph of Z16 but the depth profiles differ.
        let spec = GroupSpec::new(vec![2, 8]).unwrap();
        let mg = build_mgraph(&spec, 2).unwrap();
        let tree = TreeSpec::from_graph(mg.graph()).unwrap();
        let r = realize_tree(&tree).unwrap().unwrap();
        assert_eq!(r.spec.moduli, vec![2, 8]);
        assert_eq!(r.multiplier, 2);
        assert_realizes(&tree, &r);
    }

    #[test]
    fn realize_reports_unrealizable_trees() {
        assert!(realize_tree(&path(6)).unwrap().is_none());
        assert!(realize_tree(&TreeSpec::new(1, vec![]).unwrap())
            .unwrap()
            .is_none());
        // Order 7 admits only the star; the path is not realizable.
        assert!(realize_tree(&path(7)).unwrap().is_none());
    }

    #[test]
    fn realize_respects_the_vertex_limit() {
        assert!(matches!(
            realize_tree_with_limit(&path(10), 9),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn multiplier_representatives_cover_connected_classes() {
        let spec = GroupSpec::new(vec![2, 8]).unwrap();
        assert_eq!(connected_multiplier_reps(&spec), vec![2, 4, 8]);
        let spec = GroupSpec::new(vec![6, 12]).unwrap();
        assert_eq!(connected_multiplier_reps(&spec), vec![6, 12]);
    }

    #[test]
    fn diameter_constructions_are_exact() {
        for d in 1..=7 {
            let (spec, k) = construct_for_diameter(d).unwrap();
            let mg = build_mgraph(&spec, k).unwrap();
            assert_eq!(
                mg.graph().diameter_bruteforce(),
                Distance::Finite(d),
                "construction for diameter {d} (group {spec})"
            );
        }
        assert!(matches!(
            construct_for_diameter(0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn realization_serializes_with_group_literal() {
        let (_, r) = construct_tree1(1).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["group"], "Z4");
        assert_eq!(json["k"], 2);
        assert!(json["mapping"].is_array());
        assert_eq!(json["mapping"].as_array().unwrap().len(), 4);
    }
}

//! Explicit vertex bijections between isomorphic multiplication graphs.
//!
//! A connected `m`-graph on a group depends on `m` only through the reduced
//! multiplier: this module constructs the witnessing bijections — cyclic
//! `m`-graph to `k`-graph, and product-group `m`-graph to the componentwise
//! `(d_1, ..., d_i)`-product graph — and verifies them edge-by-edge.

use crate::closed_form::{least_power_w, predict_connected};
use crate::error::{Error, Result};
use crate::graph::{build_mgraph, AdjGraph};
use crate::group::{
    factorize, gcd, mod_inverse, mod_mul, mod_pow, p_adic_valuation, radical,
    solve_scalar_equation, GroupSpec,
};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// A total bijection between two equal-size vertex sets, stored in both
/// directions. Serializes as the forward image list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexBijection {
    forward: Vec<u32>,
    backward: Vec<u32>,
}

impl VertexBijection {
    /// Builds a bijection from its forward image list, rejecting anything
    /// that is not a permutation of `0..len`.
    pub fn from_forward(forward: Vec<u32>) -> Result<Self> {
        let n = forward.len();
        let mut backward = vec![u32::MAX; n];
        for (src, &img) in forward.iter().enumerate() {
            if img as usize >= n {
                return Err(Error::InvalidArgument(format!(
                    "image {img} out of range for {n} vertices"
                )));
            }
            if backward[img as usize] != u32::MAX {
                return Err(Error::InvalidArgument(format!(
                    "image {img} is hit twice; not a bijection"
                )));
            }
            backward[img as usize] = src as u32;
        }
        Ok(Self { forward, backward })
    }

    /// The identity bijection on `n` vertices.
    pub fn identity(n: usize) -> Self {
        let forward: Vec<u32> = (0..n as u32).collect();
        Self { backward: forward.clone(), forward }
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.forward.len()
    }

    /// True when the vertex set is empty.
    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Image of `v` under the bijection.
    pub fn forward(&self, v: u32) -> u32 {
        self.forward[v as usize]
    }

    /// Preimage of `v` under the bijection.
    pub fn backward(&self, v: u32) -> u32 {
        self.backward[v as usize]
    }

    /// The forward image list.
    pub fn forward_slice(&self) -> &[u32] {
        &self.forward
    }

    /// The bijection with both directions swapped.
    pub fn inverse(&self) -> Self {
        Self { forward: self.backward.clone(), backward: self.forward.clone() }
    }

    /// Composition: first `self`, then `next`.
    pub fn compose(&self, next: &VertexBijection) -> Result<Self> {
        if self.len() != next.len() {
            return Err(Error::InvalidArgument(format!(
                "cannot compose bijections on {} and {} vertices",
                self.len(),
                next.len()
            )));
        }
        let forward: Vec<u32> = self.forward.iter().map(|&v| next.forward(v)).collect();
        Self::from_forward(forward)
    }

    /// Two-column CSV listing of the map, one line per source vertex.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("source_rank,image_rank\n");
        for (src, &img) in self.forward.iter().enumerate() {
            out.push_str(&format!("{src},{img}\n"));
        }
        out
    }
}

impl Serialize for VertexBijection {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.forward.len()))?;
        for img in &self.forward {
            seq.serialize_element(img)?;
        }
        seq.end()
    }
}

/// How a cyclic-graph bijection was obtained: the direct power-rewriting
/// formula (with its surjectivity recipe), or the per-prime unit-twist map
/// used when the formula does not yield a bijection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IsoConstruction {
    /// `k^i * a` is rewritten to `m^i * a` (maximal `i`, `k` not dividing
    /// `a`), inverted by solving `m^i * b = v` with the `b + n/k^i`
    /// adjustment.
    Formula,
    /// Per prime power `p^e` of `n`, elements of `p`-adic valuation `j` are
    /// multiplied by `theta_p^floor(j / v_p(k))` where `theta_p` is the unit
    /// part of `m` over the unit part of `k`.
    ValuationTwist,
}

/// Checks `f` is a graph isomorphism from `g1` to `g2`: every edge must map
/// to an edge and every edge must be hit, checked in both directions.
pub fn verify_graph_isomorphism(g1: &AdjGraph, g2: &AdjGraph, f: &VertexBijection) -> Result<bool> {
    if g1.vertex_count() != g2.vertex_count() || g1.vertex_count() != f.len() {
        return Err(Error::InvalidArgument(format!(
            "vertex count mismatch: {} vs {} vs map on {}",
            g1.vertex_count(),
            g2.vertex_count(),
            f.len()
        )));
    }
    if g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    for (u, v) in g1.edge_list() {
        if !g2.has_edge(f.forward(u), f.forward(v)) {
            return Ok(false);
        }
    }
    for (u, v) in g2.edge_list() {
        if !g1.has_edge(f.backward(u), f.backward(v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Greatest `i` with `k^i` dividing `v` as integers, together with the
/// cofactor `v / k^i`.
fn power_factor(mut v: u64, k: u64) -> (u32, u64) {
    let mut i = 0;
    while v % k == 0 {
        v /= k;
        i += 1;
    }
    (i, v)
}

/// The power-rewriting map from the `k`-graph to the `m`-graph on `Z_n`:
/// `0 -> 0`, `a -> a` when `k` does not divide `a`, and `k^i * c -> m^i * c`
/// with `i` maximal. Returns `None` when the images collide.
fn formula_to_m_graph(n: u64, m: u64, k: u64) -> Option<Vec<u32>> {
    let mut image = vec![0u32; n as usize];
    let mut seen = vec![false; n as usize];
    seen[0] = true;
    for v in 1..n {
        let (i, c) = power_factor(v, k);
        let img = mod_mul(mod_pow(m, u64::from(i), n), c, n);
        if seen[img as usize] {
            return None;
        }
        seen[img as usize] = true;
        image[v as usize] = img as u32;
    }
    Some(image)
}

/// The inverse of [`formula_to_m_graph`], built by the surjectivity recipe:
/// for a target `v = k^i * c` (maximal `i`), take the least `b` with
/// `m^i * b = v`; if `k | b`, adjust to `y = b + n/k^i` (falling back to a
/// scan of the remaining solutions when the adjustment is unavailable or
/// still divisible); the preimage is `k^i * y`. Returns `None` when some
/// target has no `k`-free solution.
fn recipe_from_m_graph(n: u64, m: u64, k: u64) -> Option<Vec<u32>> {
    let mut image = vec![0u32; n as usize];
    for v in 1..n {
        let (i, _) = power_factor(v, k);
        let preimage = if i == 0 {
            v
        } else {
            let mi = mod_pow(m, u64::from(i), n);
            let sol = solve_scalar_equation(mi, v, n).ok()?;
            if !sol.solvable {
                return None;
            }
            let b = *sol.solutions.first()?;
            let y = if b % k != 0 {
                b
            } else {
                let ki = k.checked_pow(i)?;
                let adjusted = if n % ki == 0 { Some((b + n / ki) % n) } else { None };
                match adjusted.filter(|y| y % k != 0) {
                    Some(y) => y,
                    None => sol.solutions.iter().copied().find(|s| s % k != 0)?,
                }
            };
            mod_mul(mod_pow(k, u64::from(i), n), y, n)
        };
        image[v as usize] = preimage as u32;
    }
    Some(image)
}

/// The per-prime unit-twist map from the `k`-graph to the `m`-graph on
/// `Z_n`: on the `p^e` component, an element of valuation `j` is multiplied
/// by `theta_p^floor(j / a_p)` with `a_p = v_p(k)` and
/// `theta_p = unit(m) * unit(k)^-1 (mod p^e)`. The twist commutes
/// multiplication by `k` into multiplication by `m` and preserves
/// valuations, so it is a bijection by construction.
fn twist_to_m_graph(n: u64, m: u64, k: u64) -> Result<Vec<u32>> {
    struct Component {
        pe: u64,
        p: u64,
        e: u32,
        a: u32,
        crt_weight: u64,
        theta_powers: Vec<u64>,
    }
    let mut comps = Vec::new();
    for (&p, &e) in factorize(n).iter() {
        let pe = p.pow(e);
        let a = p_adic_valuation(k, p)?;
        let unit_m = (m / p.pow(p_adic_valuation(m, p)?)) % pe;
        let unit_k = (k / p.pow(a)) % pe;
        let theta = mod_mul(
            unit_m,
            mod_inverse(unit_k, pe).expect("unit part is coprime to p"),
            pe,
        );
        let max_q = e / a;
        let mut theta_powers = Vec::with_capacity(max_q as usize + 1);
        let mut cur = 1 % pe;
        for _ in 0..=max_q {
            theta_powers.push(cur);
            cur = mod_mul(cur, theta, pe);
        }
        let rest = n / pe;
        let crt_weight = mod_mul(rest % n, mod_inverse(rest % pe, pe).expect("moduli coprime") % n, n);
        comps.push(Component { pe, p, e, a, crt_weight, theta_powers });
    }
    let mut image = vec![0u32; n as usize];
    for v in 1..n {
        let mut img: u64 = 0;
        for comp in &comps {
            let x = v % comp.pe;
            let mapped = if x == 0 {
                0
            } else {
                let j = p_adic_valuation(x, comp.p)?.min(comp.e);
                let q = (j / comp.a) as usize;
                mod_mul(x, comp.theta_powers[q], comp.pe)
            };
            img = (img + mod_mul(mapped % n, comp.crt_weight, n)) % n;
        }
        image[v as usize] = img as u32;
    }
    Ok(image)
}

/// Constructs the bijection from the `m`-graph to the `k`-graph on `Z_n`
/// (with `k = gcd(m, n)`), reporting which construction produced it.
///
/// The power-rewriting formula and its surjectivity recipe are tried first
/// and kept only if they are mutually inverse and preserve all edges in
/// both directions; otherwise the valuation-twist map is used.
pub fn iso_map_cyclic_detailed(n: u64, m: u64) -> Result<(VertexBijection, IsoConstruction)> {
    if n < 2 || m < 2 {
        return Err(Error::InvalidArgument(format!(
            "order and multiplier must be at least 2, got n={n}, m={m}"
        )));
    }
    let spec = GroupSpec::cyclic(n)?;
    if !predict_connected(&spec, m) {
        return Err(Error::OutOfDomain(format!(
            "the {m}-graph on Z{n} is disconnected; no isomorphism to the reduced-multiplier graph is claimed"
        )));
    }
    let k = gcd(m, n);
    // Sanity anchor used by both constructions.
    least_power_w(n, k)?;
    if k == n || m % n == k {
        // Stars coincide, and m = k (mod n) multiplies identically.
        return Ok((VertexBijection::identity(n as usize), IsoConstruction::Formula));
    }
    let m_graph = build_mgraph(&spec, m)?;
    let k_graph = build_mgraph(&spec, k)?;
    if let (Some(to_m), Some(from_m)) = (formula_to_m_graph(n, m, k), recipe_from_m_graph(n, m, k))
    {
        let mutually_inverse = to_m
            .iter()
            .enumerate()
            .all(|(u, &img)| from_m[img as usize] == u as u32)
            && from_m
                .iter()
                .enumerate()
                .all(|(v, &pre)| to_m[pre as usize] == v as u32);
        if mutually_inverse {
            if let Ok(bijection) = VertexBijection::from_forward(from_m) {
                if verify_graph_isomorphism(m_graph.graph(), k_graph.graph(), &bijection)? {
                    return Ok((bijection, IsoConstruction::Formula));
                }
            }
        }
    }
    let to_m = twist_to_m_graph(n, m, k)?;
    let from_m = VertexBijection::from_forward(to_m)?.inverse();
    Ok((from_m, IsoConstruction::ValuationTwist))
}

/// Constructs the bijection from the `m`-graph to the `k`-graph on `Z_n`.
/// See [`iso_map_cyclic_detailed`] for the construction strategy.
pub fn iso_map_cyclic(n: u64, m: u64) -> Result<VertexBijection> {
    Ok(iso_map_cyclic_detailed(n, m)?.0)
}

/// Builds the `(d_1, ..., d_i)`-product graph on `spec`: `x` is adjacent to
/// the componentwise image `(d_1 x_1, ..., d_i x_i)` whenever the two
/// differ. Requires at least two factors and, for each `j`: `d_j >= 2`,
/// `d_j | m_j`, and every prime of `m_j` dividing `d_j`.
pub fn build_product_graph(spec: &GroupSpec, d: &[u64]) -> Result<AdjGraph> {
    if spec.factor_count() < 2 {
        return Err(Error::InvalidArgument(
            "the product graph needs at least two cyclic factors".into(),
        ));
    }
    if d.len() != spec.factor_count() {
        return Err(Error::InvalidArgument(format!(
            "expected {} multipliers, got {}",
            spec.factor_count(),
            d.len()
        )));
    }
    for (&dj, &mj) in d.iter().zip(&spec.moduli) {
        if dj < 2 {
            return Err(Error::InvalidArgument(format!("multiplier {dj} must be at least 2")));
        }
        if mj % dj != 0 {
            return Err(Error::InvalidArgument(format!("{dj} does not divide the factor size {mj}")));
        }
        if radical(mj) != radical(gcd(dj, mj)) {
            return Err(Error::InvalidArgument(format!(
                "some prime of the factor size {mj} does not divide {dj}"
            )));
        }
    }
    let n = spec.order;
    let edges = (0..n).filter_map(|r| {
        let x = spec.unrank(r);
        let image: Vec<u64> = x
            .residues
            .iter()
            .zip(d)
            .zip(&spec.moduli)
            .map(|((&xj, &dj), &mj)| mod_mul(dj % mj, xj, mj))
            .collect();
        let img_rank = spec.rank(&GroupSpec::element(spec, image).expect("componentwise image stays in range"));
        (img_rank != r).then_some((r as u32, img_rank as u32))
    });
    Ok(AdjGraph::from_edges(n as usize, edges))
}

/// Constructs the componentwise bijection from the `m`-graph on a product
/// group to its `(d_1, ..., d_i)`-product graph, where `d_j = gcd(m, m_j)`:
/// each factor's map is the cyclic `m`-to-`d_j` bijection.
pub fn iso_map_product(spec: &GroupSpec, m: u64) -> Result<VertexBijection> {
    if spec.factor_count() < 2 {
        return Err(Error::InvalidArgument(
            "the componentwise bijection needs at least two cyclic factors".into(),
        ));
    }
    if !predict_connected(spec, m) {
        return Err(Error::OutOfDomain(format!(
            "the {m}-graph on {spec} is disconnected; no product-graph isomorphism is claimed"
        )));
    }
    let factor_maps: Vec<VertexBijection> = spec
        .moduli
        .iter()
        .map(|&mj| iso_map_cyclic(mj, m))
        .collect::<Result<_>>()?;
    let n = spec.order;
    let mut forward = Vec::with_capacity(n as usize);
    for r in 0..n {
        let x = spec.unrank(r);
        let image: Vec<u64> = x
            .residues
            .iter()
            .zip(&factor_maps)
            .map(|(&xj, fj)| u64::from(fj.forward(xj as u32)))
            .collect();
        forward.push(spec.rank(&spec.element(image)?) as u32);
    }
    VertexBijection::from_forward(forward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_mgraph;

    fn spec(moduli: &[u64]) -> GroupSpec {
        GroupSpec::new(moduli.to_vec()).unwrap()
    }

    fn cyclic_graphs(n: u64, m: u64) -> (AdjGraph, AdjGraph) {
        let g = spec(&[n]);
        let mg = build_mgraph(&g, m).unwrap().graph().clone();
        let kg = build_mgraph(&g, gcd(m, n)).unwrap().graph().clone();
        (mg, kg)
    }

    #[test]
    fn bijection_validation() {
        assert!(VertexBijection::from_forward(vec![0, 2, 1]).is_ok());
        assert!(VertexBijection::from_forward(vec![0, 0, 1]).is_err());
        assert!(VertexBijection::from_forward(vec![0, 3, 1]).is_err());
        let b = VertexBijection::from_forward(vec![2, 0, 1]).unwrap();
        assert_eq!(b.backward(2), 0);
        assert_eq!(b.inverse().forward(2), 0);
        let c = b.compose(&b.inverse()).unwrap();
        assert_eq!(c, VertexBijection::identity(3));
    }

    #[test]
    fn bijection_csv_and_json() {
        let b = VertexBijection::from_forward(vec![1, 0]).unwrap();
        assert_eq!(b.to_csv(), "source_rank,image_rank\n0,1\n1,0\n");
        assert_eq!(serde_json::to_string(&b).unwrap(), "[1,0]");
    }

    #[test]
    fn verify_identity_on_identical_graphs() {
        let (mg, _) = cyclic_graphs(8, 2);
        let id = VertexBijection::identity(8);
        assert!(verify_graph_isomorphism(&mg, &mg, &id).unwrap());
    }

    #[test]
    fn verify_rejects_star_vs_path() {
        let star = AdjGraph::from_edges(4, [(0u32, 1u32), (0, 2), (0, 3)]);
        let path = AdjGraph::from_edges(4, [(0u32, 1u32), (1, 2), (2, 3)]);
        let id = VertexBijection::identity(4);
        assert!(!verify_graph_isomorphism(&star, &path, &id).unwrap());
    }

    #[test]
    fn verify_rejects_size_mismatch() {
        let a = AdjGraph::from_edges(2, [(0u32, 1u32)]);
        let b = AdjGraph::from_edges(3, [(0u32, 1u32)]);
        assert!(verify_graph_isomorphism(&a, &b, &VertexBijection::identity(2)).is_err());
    }

    #[test]
    fn cyclic_map_z8_m6() {
        let (bijection, construction) = iso_map_cyclic_detailed(8, 6).unwrap();
        assert_eq!(construction, IsoConstruction::Formula);
        let (mg, kg) = cyclic_graphs(8, 6);
        assert!(verify_graph_isomorphism(&mg, &kg, &bijection).unwrap());
        // Odd residues are fixed by the underlying formula in both
        // directions.
        for v in [1u32, 3, 5, 7] {
            assert_eq!(bijection.forward(v), v);
        }
    }

    #[test]
    fn cyclic_map_is_identity_when_m_equals_k() {
        let (bijection, construction) = iso_map_cyclic_detailed(72, 6).unwrap();
        assert_eq!(construction, IsoConstruction::Formula);
        assert_eq!(bijection, VertexBijection::identity(72));
    }

    #[test]
    fn cyclic_map_star() {
        let (bijection, _) = iso_map_cyclic_detailed(6, 24).unwrap();
        assert_eq!(bijection, VertexBijection::identity(6));
        let (mg, kg) = cyclic_graphs(6, 24);
        assert!(verify_graph_isomorphism(&mg, &kg, &bijection).unwrap());
    }

    #[test]
    fn cyclic_map_falls_back_when_formula_collides() {
        // At n=216, m=60 (k=12) the power-rewriting formula sends both 72
        // and 144 to 144, so the twist construction must take over.
        let (bijection, construction) = iso_map_cyclic_detailed(216, 60).unwrap();
        assert_eq!(construction, IsoConstruction::ValuationTwist);
        let (mg, kg) = cyclic_graphs(216, 60);
        assert!(verify_graph_isomorphism(&mg, &kg, &bijection).unwrap());
    }

    #[test]
    fn cyclic_map_rejects_disconnected() {
        assert!(matches!(iso_map_cyclic(6, 2), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn cyclic_maps_verify_exhaustively_small() {
        for n in 2..=72u64 {
            for m in 2..=72u64 {
                let g = spec(&[n]);
                if !predict_connected(&g, m) {
                    continue;
                }
                let bijection = iso_map_cyclic(n, m).unwrap();
                let (mg, kg) = cyclic_graphs(n, m);
                assert!(
                    verify_graph_isomorphism(&mg, &kg, &bijection).unwrap(),
                    "edge preservation failed at n={n}, m={m}"
                );
            }
        }
    }

    #[test]
    fn product_graph_matches_mgraph_when_d_is_gcd() {
        let g = spec(&[4, 8]);
        let pg = build_product_graph(&g, &[2, 2]).unwrap();
        let mg = build_mgraph(&g, 2).unwrap();
        assert_eq!(pg.edge_list(), mg.graph().edge_list());
    }

    #[test]
    fn product_graph_rejects_bad_inputs() {
        assert!(matches!(build_product_graph(&spec(&[2]), &[2]), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            build_product_graph(&spec(&[4, 8]), &[2]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            build_product_graph(&spec(&[4, 8]), &[3, 2]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            build_product_graph(&spec(&[4, 6]), &[2, 2]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            build_product_graph(&spec(&[4, 8]), &[1, 2]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn product_map_z8_z16() {
        let g = spec(&[8, 16]);
        let f = iso_map_product(&g, 2).unwrap();
        let mg = build_mgraph(&g, 2).unwrap();
        let pg = build_product_graph(&g, &[2, 2]).unwrap();
        assert!(verify_graph_isomorphism(mg.graph(), &pg, &f).unwrap());
    }

    #[test]
    fn product_map_z4_z8_m6() {
        let g = spec(&[4, 8]);
        let f = iso_map_product(&g, 6).unwrap();
        let mg = build_mgraph(&g, 6).unwrap();
        let pg = build_product_graph(&g, &[2, 2]).unwrap();
        assert!(verify_graph_isomorphism(mg.graph(), &pg, &f).unwrap());

        // Bridging through the product graph reaches the reduced-multiplier
        // graph as well.
        let k = gcd(6, g.exponent());
        let fk = iso_map_product(&g, k).unwrap();
        let kg = build_mgraph(&g, k).unwrap();
        let m_to_k = f.compose(&fk.inverse()).unwrap();
        assert!(verify_graph_isomorphism(mg.graph(), kg.graph(), &m_to_k).unwrap());
    }

    #[test]
    fn product_map_three_factors() {
        let g = spec(&[4, 8, 72]);
        let f = iso_map_product(&g, 6).unwrap();
        let mg = build_mgraph(&g, 6).unwrap();
        let pg = build_product_graph(&g, &[2, 2, 6]).unwrap();
        assert!(verify_graph_isomorphism(mg.graph(), &pg, &f).unwrap());
    }

    #[test]
    fn product_map_rejects_single_factor_and_disconnected() {
        assert!(matches!(iso_map_product(&spec(&[8]), 2), Err(Error::InvalidArgument(_))));
        assert!(matches!(iso_map_product(&spec(&[4, 6]), 2), Err(Error::OutOfDomain(_))));
    }
}

//! Check registry and sweep driver.
//!
//! Every closed-form prediction in this crate can be compared against the
//! brute-force graph report. Each comparison kind is a [`TheoremCheck`]
//! behind a trait object, registered by name in [`registry`], so callers
//! select checks at runtime ([`checks_by_name`]) and drive them uniformly
//! over single cases ([`run_case`]) or whole ranges of groups
//! ([`run_cyclic_sweep`], [`run_product_sweep`]).

use crate::closed_form::{
    predict_connected, predict_degree, predict_degree_census, predict_diameter_cyclic,
    predict_diameter_cyclic_qk, predict_diameter_product, predict_distance_to_zero,
};
use crate::error::{Error, Result};
use crate::graph::{build_mgraph_with_limit, MGraph, DEFAULT_VERTEX_LIMIT};
use crate::group::{gcd, invariant_chains_of_order, GroupSpec};
use crate::iso::{build_product_graph, iso_map_cyclic, iso_map_product, verify_graph_isomorphism};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Display;

/// One predicted-versus-observed comparison emitted by a check.
#[derive(Debug, Clone)]
pub struct Comparison {
    /// What was compared (e.g. `"diameter"`).
    pub quantity: String,
    /// The closed-form side.
    pub predicted: String,
    /// The brute-force side.
    pub oracle: String,
    /// The formula case that produced the prediction, when one exists.
    pub case_label: Option<String>,
}

impl Comparison {
    fn new(quantity: &str, predicted: impl Display, oracle: impl Display) -> Self {
        Comparison {
            quantity: quantity.to_string(),
            predicted: predicted.to_string(),
            oracle: oracle.to_string(),
            case_label: None,
        }
    }

    fn with_case(mut self, label: Option<String>) -> Self {
        self.case_label = label;
        self
    }

    /// A comparison matches when both sides rendered identically.
    pub fn matched(&self) -> bool {
        self.predicted == self.oracle
    }
}

/// A [`Comparison`] tagged with the case (group, multiplier) it came from.
#[derive(Debug, Clone)]
pub struct Row {
    /// Group literal, e.g. `"Z4 x Z8"`.
    pub group: String,
    /// The multiplier as given.
    pub m: u64,
    /// The reduced multiplier `gcd(m, exponent)`.
    pub k: u64,
    /// What was compared.
    pub quantity: String,
    /// The closed-form side.
    pub predicted: String,
    /// The brute-force side.
    pub oracle: String,
    /// Whether the two sides agree.
    pub matched: bool,
    /// The formula case behind the prediction, when one exists.
    pub case_label: Option<String>,
}

/// CSV-quotes a field when it contains a delimiter, quote, or newline.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Row {
    /// Header matching [`Row::to_csv_line`].
    pub const CSV_HEADER: &'static str = "group,m,k,quantity,predicted,oracle,match";

    /// Renders the row as one CSV line (no trailing newline).
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            csv_field(&self.group),
            self.m,
            self.k,
            csv_field(&self.quantity),
            csv_field(&self.predicted),
            csv_field(&self.oracle),
            self.matched
        )
    }
}

/// A failed comparison, in the shape emitted as JSON by the sweep tools.
#[derive(Debug, Clone, Serialize)]
pub struct Discrepancy {
    /// Group literal.
    pub group: String,
    /// The multiplier as given.
    pub m: u64,
    /// The reduced multiplier.
    pub k: u64,
    /// What was compared.
    pub quantity: String,
    /// The closed-form side.
    pub predicted: String,
    /// The brute-force side.
    pub oracle: String,
    /// The formula case behind the prediction, when one exists.
    pub case_label: Option<String>,
}

impl From<&Row> for Discrepancy {
    fn from(row: &Row) -> Self {
        Discrepancy {
            group: row.group.clone(),
            m: row.m,
            k: row.k,
            quantity: row.quantity.clone(),
            predicted: row.predicted.clone(),
            oracle: row.oracle.clone(),
            case_label: row.case_label.clone(),
        }
    }
}

/// One verifiable statement: a named check that knows which cases it covers
/// and how to compare its closed form against the explicit graph.
pub trait TheoremCheck: Send + Sync {
    /// Stable identifier used for runtime selection.
    fn name(&self) -> &'static str;
    /// Whether the check's hypotheses hold for this case.
    fn applies(&self, spec: &GroupSpec, m: u64) -> bool;
    /// Compare prediction and brute force on an already-built graph.
    fn run(&self, mg: &MGraph) -> Vec<Comparison>;
}

/// Renders a fallible prediction: errors become visible mismatch text
/// instead of aborting the sweep.
fn value_or_error<T: Display>(result: Result<T>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn format_census(census: &BTreeMap<u64, u64>) -> String {
    census
        .iter()
        .map(|(deg, count)| format!("{deg}:{count}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Connectivity criterion: connected iff every prime of the order divides m.
struct ConnectedCheck;

impl TheoremCheck for ConnectedCheck {
    fn name(&self) -> &'static str {
        "connected"
    }
    fn applies(&self, _spec: &GroupSpec, _m: u64) -> bool {
        true
    }
    fn run(&self, mg: &MGraph) -> Vec<Comparison> {
        vec![Comparison::new(
            "connected",
            predict_connected(mg.spec(), mg.multiplier()),
            mg.graph().is_connected(),
        )]
    }
}

/// Per-vertex degree formula, aggregated into one row per graph.
struct DegreesCheck;

impl TheoremCheck for DegreesCheck {
    fn name(&self) -> &'static str {
        "degrees"
    }
    fn applies(&self, spec: &GroupSpec, m: u64) -> bool {
        predict_connected(spec, m)
    }
    fn run(&self, mg: &MGraph) -> Vec<Comparison> {
        let spec = mg.spec();
        let n = spec.order;
        for v in 0..n {
            let a = spec.unrank(v);
            let actual = mg.graph().degree(v as u32);
            let predicted = predict_degree(spec, mg.multiplier(), &a);
            if predicted.as_ref().ok() != Some(&actual) {
                return vec![Comparison::new(
                    "degrees",
                    format!("deg({a}) = {}", value_or_error(predicted)),
                    format!("deg({a}) = {actual}"),
                )];
            }
        }
        vec![Comparison::new(
            "degrees",
            format!("all {n} vertices"),
            format!("all {n} vertices"),
        )]
    }
}

/// Degree census closed form (leaf count, high-degree count, identity).
struct CensusCheck;

impl TheoremCheck for CensusCheck {
    fn name(&self) -> &'static str {
        "census"
    }
    fn applies(&self, spec: &GroupSpec, m: u64) -> bool {
        predict_connected(spec, m)
    }
    fn run(&self, mg: &MGraph) -> Vec<Comparison> {
        let predicted = match predict_degree_census(mg.spec(), mg.multiplier()) {
            Ok(census) => format_census(&census.to_map()),
            Err(e) => format!("error: {e}"),
        };
        vec![Comparison::new(
            "census",
            predicted,
            format_census(&mg.graph().degree_census()),
        )]
    }
}

/// Connected multiplication graphs are trees, hence bipartite.
struct TreeCheck;

fn tree_flags(is_tree: bool, is_bipartite: bool) -> String {
    format!(
        "{}+{}",
        if is_tree { "tree" } else { "not-tree" },
        if is_bipartite { "bipartite" } else { "not-bipartite" }
    )
}

impl TheoremCheck for TreeCheck {
    fn name(&self) -> &'static str {
        "tree"
    }
    fn applies(&self, spec: &GroupSpec, m: u64) -> bool {
        predict_connected(spec, m)
    }
    fn run(&self, mg: &MGraph) -> Vec<Comparison> {
        vec![Comparison::new(
            "tree",
            tree_flags(true, true),
            tree_flags(mg.graph().is_tree(), mg.graph().is_bipartite()),
        )]
    }
}

/// Distance from each nonzero element to the identity (cyclic groups).
struct DistanceCheck;

impl TheoremCheck for DistanceCheck {
    fn name(&self) -> &'static str {
        "distance_to_zero"
    }
    fn applies(&self, spec: &GroupSpec, m: u64) -> bool {
        spec.factor_count() == 1 && predict_connected(spec, m)
    }
    fn run(&self, mg: &MGraph) -> Vec<Comparison> {
        let n = mg.spec().order;
        let k = mg.reduced_multiplier();
        let dists = mg.graph().bfs_distances_from(0);
        for a in 1..n {
            let actual = dists[a as usize].to_string();
            let predicted = value_or_error(predict_distance_to_zero(n, k, a));
            if predicted != actual {
                return vec![Comparison::new(
                    "distance_to_zero",
                    format!("d({a}, 0) = {predicted}"),
                    format!("d({a}, 0) = {actual}"),
                )];
            }
        }
        vec![Comparison::new(
            "distance_to_zero",
            format!("all {} vertices", n - 1),
            format!("all {} vertices", n - 1),
        )]
    }
}

/// Diameter closed form (cyclic and product routes).
struct DiameterCheck;

impl TheoremCheck for DiameterCheck {
    fn name(&self) -> &'static str {
        "diameter"
    }
    fn applies(&self, spec: &GroupSpec, m: u64) -> bool {
        predict_connected(spec, m)
    }
    fn run(&self, mg: &MGraph) -> Vec<Comparison> {
        let spec = mg.spec();
        let prediction = if spec.factor_count() == 1 {
            predict_diameter_cyclic(spec.order, mg.multiplier())
        } else {
            predict_diameter_product(spec, mg.multiplier())
        };
        let (predicted, label) = match prediction {
            Ok(p) => (p.value.to_string(), Some(p.case_label.label().to_string())),
            Err(e) => (format!("error: {e}"), None),
        };
        vec![
            Comparison::new("diameter", predicted, mg.graph().diameter_bruteforce())
                .with_case(label),
        ]
    }
}

/// Restricted-hypothesis diameter formula for cyclic groups whose reduced
/// multiplier divides the order; runs only where the hypotheses hold.
struct DiameterQkCheck;

impl TheoremCheck for DiameterQkCheck {
    fn name(&self) -> &'static str {
        "diameter_qk"
    }
    fn applies(&self, spec: &GroupSpec, m: u64) -> bool {
        spec.factor_count() == 1
            && predict_connected(spec, m)
            && predict_diameter_cyclic_qk(spec.order, gcd(m, spec.order)).is_ok()
    }
    fn run(&self, mg: &MGraph) -> Vec<Comparison> {
        let (predicted, label) =
            match predict_diameter_cyclic_qk(mg.spec().order, mg.reduced_multiplier()) {
                Ok(p) => (p.value.to_string(), Some(p.case_label.label().to_string())),
                Err(e) => (format!("error: {e}"), None),
            };
        vec![
            Comparison::new("diameter_qk", predicted, mg.graph().diameter_bruteforce())
                .with_case(label),
        ]
    }
}

/// Explicit isomorphisms: cyclic graphs onto their reduced-multiplier graph,
/// product graphs onto the componentwise-multiplier graph and (composed)
/// onto their reduced-multiplier graph.
struct IsomorphismCheck;

impl IsomorphismCheck {
    fn run_cyclic(&self, mg: &MGraph) -> Result<bool> {
        let n = mg.spec().order;
        let map = iso_map_cyclic(n, mg.multiplier())?;
        let kg = build_mgraph_with_limit(mg.spec(), mg.reduced_multiplier(), n)?;
        verify_graph_isomorphism(mg.graph(), kg.graph(), &map)
    }

    fn run_product(&self, mg: &MGraph) -> Result<bool> {
        let spec = mg.spec();
        let m = mg.multiplier();
        let d: Vec<u64> = spec.moduli.iter().map(|&mj| gcd(m, mj)).collect();
        let pg = build_product_graph(spec, &d)?;
        let f_m = iso_map_product(spec, m)?;
        let onto_product = verify_graph_isomorphism(mg.graph(), &pg, &f_m)?;
        let k = mg.reduced_multiplier();
        let kg = build_mgraph_with_limit(spec, k, spec.order)?;
        let bridge = f_m.compose(&iso_map_product(spec, k)?.inverse())?;
        let onto_reduced = verify_graph_isomorphism(mg.graph(), kg.graph(), &bridge)?;
        Ok(onto_product && onto_reduced)
    }
}

impl TheoremCheck for IsomorphismCheck {
    fn name(&self) -> &'static str {
        "isomorphism"
    }
    fn applies(&self, spec: &GroupSpec, m: u64) -> bool {
        predict_connected(spec, m)
    }
    fn run(&self, mg: &MGraph) -> Vec<Comparison> {
        let outcome = if mg.spec().factor_count() == 1 {
            self.run_cyclic(mg)
        } else {
            self.run_product(mg)
        };
        let predicted = match outcome {
            Ok(true) => "edges preserved".to_string(),
            Ok(false) => "edges not preserved".to_string(),
            Err(e) => format!("error: {e}"),
        };
        vec![Comparison::new("isomorphism", predicted, "edges preserved")]
    }
}

/// All checks, in the canonical reporting order.
pub fn registry() -> Vec<Box<dyn TheoremCheck>> {
    vec![
        Box::new(ConnectedCheck),
        Box::new(DegreesCheck),
        Box::new(CensusCheck),
        Box::new(TreeCheck),
        Box::new(DistanceCheck),
        Box::new(DiameterCheck),
        Box::new(DiameterQkCheck),
        Box::new(IsomorphismCheck),
    ]
}

/// Looks up checks by name, preserving registry order.
pub fn checks_by_name(names: &[String]) -> Result<Vec<Box<dyn TheoremCheck>>> {
    let all = registry();
    for name in names {
        if !all.iter().any(|c| c.name() == name) {
            let known: Vec<&str> = all.iter().map(|c| c.name()).collect();
            return Err(Error::InvalidArgument(format!(
                "unknown check {name:?}; known checks: {}",
                known.join(", ")
            )));
        }
    }
    Ok(all
        .into_iter()
        .filter(|c| names.iter().any(|n| n == c.name()))
        .collect())
}

/// Runs every applicable check on one `(group, multiplier)` case.
pub fn run_case(
    spec: &GroupSpec,
    m: u64,
    checks: &[Box<dyn TheoremCheck>],
    vertex_limit: u64,
) -> Result<Vec<Row>> {
    let applicable: Vec<&Box<dyn TheoremCheck>> =
        checks.iter().filter(|c| c.applies(spec, m)).collect();
    if applicable.is_empty() {
        return Ok(Vec::new());
    }
    let mg = build_mgraph_with_limit(spec, m, vertex_limit)?;
    let group = spec.to_string();
    let k = mg.reduced_multiplier();
    let mut rows = Vec::new();
    for check in applicable {
        for cmp in check.run(&mg) {
            let matched = cmp.matched();
            rows.push(Row {
                group: group.clone(),
                m,
                k,
                quantity: cmp.quantity,
                predicted: cmp.predicted,
                oracle: cmp.oracle,
                matched,
                case_label: cmp.case_label,
            });
        }
    }
    Ok(rows)
}

/// Outcome of a sweep: every comparison row, the failures, and the number of
/// graphs built.
#[derive(Debug)]
pub struct SweepResult {
    /// One row per comparison, in deterministic case order.
    pub rows: Vec<Row>,
    /// The rows that did not match, in the same order.
    pub discrepancies: Vec<Discrepancy>,
    /// Number of `(group, multiplier)` cases with at least one applicable
    /// check.
    pub graphs_checked: u64,
}

impl SweepResult {
    fn from_rows(rows: Vec<Row>) -> Self {
        let discrepancies = rows
            .iter()
            .filter(|r| !r.matched)
            .map(Discrepancy::from)
            .collect();
        let graphs_checked = {
            let mut count = 0u64;
            let mut last: Option<(&str, u64)> = None;
            for row in &rows {
                if last != Some((row.group.as_str(), row.m)) {
                    count += 1;
                    last = Some((row.group.as_str(), row.m));
                }
            }
            count
        };
        SweepResult {
            rows,
            discrepancies,
            graphs_checked,
        }
    }

    /// Full CSV document (header plus one line per row).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Row::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.to_csv_line());
            out.push('\n');
        }
        out
    }
}

/// Runs the checks over every cyclic group `Z_n` with `2 <= n <= max_n` and
/// every multiplier `2 <= m <= max_m`, in parallel over `n`.
pub fn run_cyclic_sweep(
    max_n: u64,
    max_m: u64,
    checks: &[Box<dyn TheoremCheck>],
) -> Result<SweepResult> {
    let per_n: Vec<Vec<Row>> = (2..=max_n)
        .into_par_iter()
        .map(|n| {
            let spec = GroupSpec::cyclic(n)?;
            let mut rows = Vec::new();
            for m in 2..=max_m {
                rows.extend(run_case(&spec, m, checks, DEFAULT_VERTEX_LIMIT)?);
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult::from_rows(per_n.into_iter().flatten().collect()))
}

/// Runs the checks over every non-cyclic abelian group of order up to
/// `max_order` (each presented as its invariant chain) and every multiplier
/// `2 <= m <= max_m`, in parallel over groups.
pub fn run_product_sweep(
    max_order: u64,
    max_m: u64,
    checks: &[Box<dyn TheoremCheck>],
) -> Result<SweepResult> {
    let mut specs = Vec::new();
    for order in 4..=max_order {
        for spec in invariant_chains_of_order(order)? {
            if spec.factor_count() >= 2 {
                specs.push(spec);
            }
        }
    }
    let per_spec: Vec<Vec<Row>> = specs
        .par_iter()
        .map(|spec| {
            let mut rows = Vec::new();
            for m in 2..=max_m {
                rows.extend(run_case(spec, m, checks, DEFAULT_VERTEX_LIMIT)?);
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult::from_rows(
        per_spec.into_iter().flatten().collect(),
    ))
}

/// Sizes the global worker pool (first call wins; later calls are ignored).
pub fn configure_worker_threads(threads: usize) {
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
}

/// Applies the `MGRAPH_THREADS` environment variable when set to a positive
/// integer.
pub fn configure_worker_threads_from_env() {
    if let Some(threads) = std::env::var("MGRAPH_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t > 0)
    {
        configure_worker_threads(threads);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_stable() {
        let names: Vec<&str> = registry().iter().map(|c| c.name()).collect();
        assert_eq!(
            names,
            vec![
                "connected",
                "degrees",
                "census",
                "tree",
                "distance_to_zero",
                "diameter",
                "diameter_qk",
                "isomorphism",
            ]
        );
    }

    #[test]
    fn checks_can_be_selected_by_name() {
        let picked = checks_by_name(&["diameter".into(), "connected".into()]).unwrap();
        let names: Vec<&str> = picked.iter().map(|c| c.name()).collect();
        assert_eq!(names, vec!["connected", "diameter"]);
        assert!(matches!(
            checks_by_name(&["no_such_check".into()]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn run_case_emits_matching_rows_for_a_known_case() {
        let spec = GroupSpec::cyclic(20).unwrap();
        let rows = run_case(&spec, 10, &registry(), DEFAULT_VERTEX_LIMIT).unwrap();
        assert!(rows.iter().all(|r| r.matched), "rows: {rows:?}");
        let diameter = rows.iter().find(|r| r.quantity == "diameter").unwrap();
        assert_eq!(diameter.predicted, "3");
        assert_eq!(diameter.k, 10);
        let qk = rows.iter().find(|r| r.quantity == "diameter_qk").unwrap();
        assert_eq!(qk.predicted, "3");
        assert_eq!(qk.case_label.as_deref(), Some("CDIM_Q2"));
    }

    #[test]
    fn run_case_covers_disconnected_graphs() {
        let spec = GroupSpec::cyclic(6).unwrap();
        let rows = run_case(&spec, 2, &registry(), DEFAULT_VERTEX_LIMIT).unwrap();
        // Only the connectivity check applies to a disconnected case.
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].quantity, "connected");
        assert_eq!(rows[0].predicted, "false");
        assert!(rows[0].matched);
    }

    #[test]
    fn run_case_on_a_product_group() {
        let spec = GroupSpec::new(vec![4, 8]).unwrap();
        let rows = run_case(&spec, 2, &registry(), DEFAULT_VERTEX_LIMIT).unwrap();
        assert!(rows.iter().all(|r| r.matched), "rows: {rows:?}");
        let quantities: Vec<&str> = rows.iter().map(|r| r.quantity.as_str()).collect();
        assert!(quantities.contains(&"isomorphism"));
        assert!(quantities.contains(&"census"));
        assert!(!quantities.contains(&"distance_to_zero"));
        assert!(!quantities.contains(&"diameter_qk"));
    }

    #[test]
    fn cyclic_sweep_small_range_is_clean() {
        let result = run_cyclic_sweep(40, 12, &registry()).unwrap();
        assert!(result.discrepancies.is_empty(), "{:?}", result.discrepancies);
        assert!(result.graphs_checked > 0);
        let csv = result.to_csv();
        assert!(csv.starts_with("group,m,k,quantity,predicted,oracle,match\n"));
        assert!(csv.contains("Z4,2,2,connected,true,true,true"));
    }

    #[test]
    fn product_sweep_small_range_is_clean() {
        let result = run_product_sweep(32, 8, &registry()).unwrap();
        assert!(result.discrepancies.is_empty(), "{:?}", result.discrepancies);
        assert!(result.rows.iter().any(|r| r.group == "Z2 x Z4"));
        // Non-cyclic chains only: no single-factor group labels.
        assert!(result
            .rows
            .iter()
            .all(|r| r.group.contains(" x ")));
    }

    #[test]
    fn sweep_rows_are_deterministic() {
        let a = run_cyclic_sweep(24, 8, &registry()).unwrap().to_csv();
        let b = run_cyclic_sweep(24, 8, &registry()).unwrap().to_csv();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_quoting_protects_delimiters() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}

//! Closed-form predictions for multiplication graphs: connectivity, degrees,
//! degree census, distance to the identity, diameter classification, and the
//! count of distinct connected variants.
//!
//! Every predictor refuses disconnected inputs (the formulas hold only for
//! connected graphs) and every value is cross-checked against the BFS oracle
//! by the sweep harness in [`crate::verify`].

use crate::error::{Error, Result};
use crate::group::{factorize, gcd, invariant_factors, mod_mul, p_adic_valuation, GroupElement, GroupSpec};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// True iff the `m`-graph on `spec` is connected: every prime factor of the
/// group order must divide `m` (equivalently, divide `gcd(m, order)`).
pub fn predict_connected(spec: &GroupSpec, m: u64) -> bool {
    spec.prime_factorization.keys().all(|&p| m % p == 0)
}

fn require_connected(spec: &GroupSpec, m: u64) -> Result<()> {
    if predict_connected(spec, m) {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!(
            "the {m}-graph on {spec} is disconnected; degree and diameter formulas assume connectivity"
        )))
    }
}

/// Per-factor reduced multipliers `d_j = gcd(m, m_j)`.
fn factor_multipliers(spec: &GroupSpec, m: u64) -> Vec<u64> {
    spec.moduli.iter().map(|&mj| gcd(m, mj)).collect()
}

/// Predicted degree of `a` in a connected `m`-graph.
///
/// With `d_j = gcd(m, m_j)` and `D = prod d_j`: the identity has degree
/// `D - 1`; an element outside the image of multiplication by `m` (some
/// `d_j` does not divide `a_j`) has degree `1`; every other element has
/// degree `D + 1`.
pub fn predict_degree(spec: &GroupSpec, m: u64, a: &GroupElement) -> Result<u64> {
    require_connected(spec, m)?;
    let a = spec.element(a.residues.clone())?;
    let ds = factor_multipliers(spec, m);
    let big_d: u64 = ds.iter().product();
    if a == spec.identity() {
        Ok(big_d - 1)
    } else if a.residues.iter().zip(&ds).any(|(&aj, &dj)| aj % dj != 0) {
        Ok(1)
    } else {
        Ok(big_d + 1)
    }
}

/// Degree census of a connected `m`-graph, in closed form.
///
/// With `d_j = gcd(m, m_j)`, `q_j = m_j / d_j`, `D = prod d_j`, and
/// `Q = prod q_j`: exactly `Q - 1` vertices have the high degree `D + 1`,
/// the identity has degree `D - 1`, and the remaining `n - Q` vertices are
/// leaves. When `D = 2` the identity is itself a leaf and is folded into
/// [`DegreeCensus::count_deg_1`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeCensus {
    /// Number of vertices of degree 1 (includes the identity when `D = 2`).
    pub count_deg_1: u64,
    /// Number of vertices of the high degree `D + 1`.
    pub count_deg_high: u64,
    /// The high degree value `D + 1`.
    pub high_degree_value: u64,
    /// Degree of the identity, `D - 1`.
    pub identity_degree: u64,
}

impl DegreeCensus {
    /// Expands the census into a `degree -> count` map, dropping empty
    /// buckets. Matches [`crate::graph::AdjGraph::degree_census`] exactly on
    /// connected multiplication graphs.
    pub fn to_map(&self) -> BTreeMap<u64, u64> {
        let mut map = BTreeMap::new();
        if self.count_deg_1 > 0 {
            map.insert(1, self.count_deg_1);
        }
        if self.identity_degree != 1 {
            *map.entry(self.identity_degree).or_insert(0) += 1;
        }
        if self.count_deg_high > 0 {
            *map.entry(self.high_degree_value).or_insert(0) += self.count_deg_high;
        }
        map
    }

    /// Total number of vertices accounted for.
    pub fn total(&self) -> u64 {
        let identity = if self.identity_degree == 1 { 0 } else { 1 };
        self.count_deg_1 + self.count_deg_high + identity
    }
}

/// Predicts the full degree census of a connected `m`-graph.
pub fn predict_degree_census(spec: &GroupSpec, m: u64) -> Result<DegreeCensus> {
    require_connected(spec, m)?;
    let ds = factor_multipliers(spec, m);
    let big_d: u64 = ds.iter().product();
    let big_q: u64 = spec.moduli.iter().zip(&ds).map(|(&mj, &dj)| mj / dj).product();
    let n = spec.order;
    let identity_degree = big_d - 1;
    let count_deg_1 = (n - big_q) + if identity_degree == 1 { 1 } else { 0 };
    Ok(DegreeCensus {
        count_deg_1,
        count_deg_high: big_q - 1,
        high_degree_value: big_d + 1,
        identity_degree,
    })
}

/// Least positive `w` with `n | k^w`, computed as
/// `max_p ceil(v_p(n) / v_p(k))` over the primes of `n`.
///
/// Requires every prime factor of `n` to divide `k`; otherwise no power of
/// `k` is divisible by `n` and the quantity is undefined.
pub fn least_power_w(n: u64, k: u64) -> Result<u32> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("modulus and multiplier must be positive".into()));
    }
    let mut w = 1;
    for (&p, &e) in factorize(n).iter() {
        if k % p != 0 {
            return Err(Error::OutOfDomain(format!(
                "prime {p} divides {n} but not {k}; no power of {k} is divisible by {n}"
            )));
        }
        let a = p_adic_valuation(k, p)?;
        w = w.max(e.div_ceil(a));
    }
    Ok(w)
}

/// Least `r >= 1` with `n | a * k^r`: the BFS distance from `a` to the
/// identity in a connected `k`-graph on `Z_n`.
pub fn predict_distance_to_zero(n: u64, k: u64, a: u64) -> Result<u32> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("modulus must be at least 2, got {n}")));
    }
    let a = a % n;
    if a == 0 {
        return Err(Error::InvalidArgument(
            "distance to the identity is defined for nonzero elements only".into(),
        ));
    }
    let w = least_power_w(n, gcd(k, n))?;
    let mut cur = a;
    for r in 1..=w {
        cur = mod_mul(cur, k % n, n);
        if cur == 0 {
            return Ok(r);
        }
    }
    unreachable!("a * k^w is divisible by n whenever every prime of n divides k")
}

/// Number of distinct connected `m`-graphs on `Z_n`: one per divisor `k` of
/// `n` that is divisible by every prime factor of `n`, i.e. the product of
/// the exponents in the prime factorization of `n`.
pub fn count_connected_variants(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("order must be at least 2, got {n}")));
    }
    Ok(factorize(n).values().map(|&e| e as u64).product())
}

/// One prime-power coordinate of the group under multiplication by `k`:
/// the component `Z_{p^e}` on which each multiplication step raises the
/// `p`-adic valuation by `a = min(v_p(k), e)`.
#[derive(Debug, Clone, Copy)]
struct Dim {
    p: u64,
    e: i64,
    a: i64,
}

impl Dim {
    /// Depth of the deepest element of this coordinate: `ceil(e / a)`.
    fn max_depth(&self) -> i64 {
        (self.e + self.a - 1) / self.a
    }
}

/// Prime-power coordinates of `spec` under multiplication by `k`.
/// Requires every prime of the order to divide `k` (connected case).
fn dims_for(spec: &GroupSpec, k: u64) -> Result<Vec<Dim>> {
    let mut dims = Vec::new();
    for &mj in &spec.moduli {
        for (&p, &e) in factorize(mj).iter() {
            if k % p != 0 {
                return Err(Error::OutOfDomain(format!(
                    "prime {p} divides the group order but not the multiplier {k}"
                )));
            }
            let a = i64::from(p_adic_valuation(k, p)?).min(i64::from(e));
            dims.push(Dim { p, e: i64::from(e), a });
        }
    }
    Ok(dims)
}

/// Exact diameter of a connected multiplication graph, maximized in closed
/// form over vertex pairs grouped by their depths `(r, s)` and by the
/// coordinate `t` whose contribution to the depth of `k^(r-s)*u - v`
/// dominates.
///
/// The graph is a tree rooted at the identity in which every vertex `v` at
/// depth `s` and ancestor-level peer `u` at depth `r >= s` satisfy
/// `d(u, v) = (r - s) + 2 * depth(k^(r-s)*u - v)`, so the diameter is the
/// maximum of that expression over valid depth/valuation combinations.
fn exact_diameter(dims: &[Dim]) -> u64 {
    let w = dims.iter().map(Dim::max_depth).max().unwrap_or(0);
    // Depth-w vertex against the identity (the s = 0 row).
    let mut best = w;
    for (t, dim) in dims.iter().enumerate() {
        let &Dim { p, e, a } = dim;
        let others_max = dims
            .iter()
            .enumerate()
            .filter(|&(c, _)| c != t)
            .map(|(_, d)| d.max_depth())
            .max()
            .unwrap_or(0);
        for r in 1..=w {
            for s in 1..=r {
                // Valuation range of v's coordinate t when depth(v) = s:
                // at least e - s*a, and below e - (s-1)*a when coordinate t
                // itself must witness the depth (no other coordinate can).
                let x_lo = (e - s * a).max(0);
                let x_up = if others_max >= s { e } else { e - (s - 1) * a - 1 };
                if x_up < x_lo {
                    continue;
                }
                // Same for u's coordinate at depth r.
                let y_lo = (e - r * a).max(0);
                let y_up = if others_max >= r { e } else { e - (r - 1) * a - 1 };
                if y_up < y_lo {
                    continue;
                }
                // Valuation range of the t-coordinate of k^(r-s) * u.
                let alpha_lo = (y_lo + (r - s) * a).min(e);
                let alpha_up = (y_up + (r - s) * a).min(e);
                // Least achievable valuation of k^(r-s)*u - v in coordinate
                // t. Distinct valuations subtract at the smaller one; equal
                // valuations can be kept apart by a unit choice except when
                // both ranges are a single point and p = 2 (only one odd
                // residue class at each valuation step), which forces one
                // extra level of cancellation.
                let gamma = if x_lo < alpha_lo {
                    x_lo
                } else if alpha_lo < x_lo {
                    alpha_lo
                } else {
                    let c = x_lo;
                    if x_up > c || alpha_up > c {
                        c
                    } else {
                        (c + i64::from(p == 2)).min(e)
                    }
                };
                let j = (e - gamma + a - 1).div_euclid(a).max(0);
                best = best.max(r - s + 2 * j);
            }
        }
    }
    best.max(0) as u64
}

/// Which closed-form case produced a diameter prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiameterCase {
    /// `n = 2`: the single-edge graph, diameter 1.
    #[serde(rename = "K11")]
    K11,
    /// `k = n > 2`: the star, diameter 2.
    #[serde(rename = "STAR")]
    Star,
    /// `k = 2`, `n = 2^w > 2`: diameter `2(w - 1)`.
    #[serde(rename = "POW2")]
    Pow2,
    /// `k > 2`, `n = k^w`: diameter `2w`.
    #[serde(rename = "K_POW_W")]
    KPowW,
    /// Even `n`, diameter `2w`.
    #[serde(rename = "C3_EVEN_2W")]
    C3Even2W,
    /// Odd `n`, diameter `2w`.
    #[serde(rename = "C3_ODD_2W")]
    C3Odd2W,
    /// Even `n`, diameter `2w - 1`.
    #[serde(rename = "C3_2W_MINUS_1")]
    C32WMinus1,
    /// Even `n`, `k > 2`, diameter `2(w - 1)`: both deepest residue classes
    /// collapse onto the same parent chain.
    #[serde(rename = "C3_EVEN_FUNNEL")]
    C3EvenFunnel,
    /// `n = k^i`, diameter `2i` (or `2(i - 1)` when `k = 2`).
    #[serde(rename = "CDIM_Q1")]
    CdimQ1,
    /// `n = 2k^i`, diameter `2i + 1`.
    #[serde(rename = "CDIM_Q2")]
    CdimQ2,
    /// `n = qk^i`, `2 < q < k`, diameter `2(i + 1)`.
    #[serde(rename = "CDIM_QGT2")]
    CdimQGt2,
    /// Product case: top two factor depths agree, or the top factor alone
    /// realizes `2w`.
    #[serde(rename = "NCDIM_CASE1")]
    NcdimCase1,
    /// Product case: factor depths `w_{i-1} = w_i - 1` and the top factor
    /// stays below `2w`.
    #[serde(rename = "NCDIM_CASE2")]
    NcdimCase2,
    /// Product case: factor depths `w_{i-1} <= w_i - 2`; the top factor's
    /// own diameter is the answer.
    #[serde(rename = "NCDIM_CASE3")]
    NcdimCase3,
}

impl DiameterCase {
    /// Stable text label used in CSV and JSON output.
    pub fn label(&self) -> &'static str {
        match self {
            DiameterCase::K11 => "K11",
            DiameterCase::Star => "STAR",
            DiameterCase::Pow2 => "POW2",
            DiameterCase::KPowW => "K_POW_W",
            DiameterCase::C3Even2W => "C3_EVEN_2W",
            DiameterCase::C3Odd2W => "C3_ODD_2W",
            DiameterCase::C32WMinus1 => "C3_2W_MINUS_1",
            DiameterCase::C3EvenFunnel => "C3_EVEN_FUNNEL",
            DiameterCase::CdimQ1 => "CDIM_Q1",
            DiameterCase::CdimQ2 => "CDIM_Q2",
            DiameterCase::CdimQGt2 => "CDIM_QGT2",
            DiameterCase::NcdimCase1 => "NCDIM_CASE1",
            DiameterCase::NcdimCase2 => "NCDIM_CASE2",
            DiameterCase::NcdimCase3 => "NCDIM_CASE3",
        }
    }
}

impl fmt::Display for DiameterCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Supporting quantities behind a diameter prediction: the reduced
/// multiplier data for cyclic groups, or the per-factor lists for products.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct DiameterWitnesses {
    /// Reduced multiplier `k = gcd(m, n)` (cyclic case).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    /// Least `w` with `n | k^w` (cyclic case).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<u32>,
    /// Cofactor `q = n / k^i` (cyclic case).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    /// Greatest `i` with `k^i | n` (cyclic case).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<u32>,
    /// Per-factor reduced multipliers `d_j = gcd(m, m_j)` (product case).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_list: Option<Vec<u64>>,
    /// Per-factor depths `w_j`, least with `m_j | d_j^{w_j}` (product case).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_list: Option<Vec<u32>>,
}

/// A diameter value together with the case that classified it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiameterPrediction {
    /// The predicted diameter.
    pub value: u64,
    /// Which classification case applies.
    pub case_label: DiameterCase,
    /// The quantities the case is stated in terms of.
    pub witnesses: DiameterWitnesses,
}

/// Greatest `i >= 0` with `k^i | n` (for `k >= 2`).
fn greatest_power_dividing(n: u64, k: u64) -> (u32, u64) {
    let mut i = 0;
    let mut rest = n;
    while rest % k == 0 {
        rest /= k;
        i += 1;
    }
    (i, rest)
}

/// Diameter of a connected `m`-graph on `Z_n`, classified by case.
pub fn predict_diameter_cyclic(n: u64, m: u64) -> Result<DiameterPrediction> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("cyclic order must be at least 2, got {n}")));
    }
    if m < 2 {
        return Err(Error::InvalidArgument(format!("multiplier must be at least 2, got {m}")));
    }
    let spec = GroupSpec::cyclic(n)?;
    require_connected(&spec, m)?;
    let k = gcd(m, n);
    let w = least_power_w(n, k)?;
    let value = exact_diameter(&dims_for(&spec, k)?);
    let (i, q) = greatest_power_dividing(n, k);
    let witnesses = DiameterWitnesses {
        k: Some(k),
        w: Some(w),
        q: Some(q),
        i: Some(i),
        ..DiameterWitnesses::default()
    };
    let case_label = if n == 2 {
        DiameterCase::K11
    } else if k == n {
        DiameterCase::Star
    } else if k == 2 {
        DiameterCase::Pow2
    } else if q == 1 {
        DiameterCase::KPowW
    } else if n % 2 == 1 {
        DiameterCase::C3Odd2W
    } else if value == 2 * u64::from(w) {
        DiameterCase::C3Even2W
    } else if value == 2 * u64::from(w) - 1 {
        DiameterCase::C32WMinus1
    } else {
        DiameterCase::C3EvenFunnel
    };
    Ok(DiameterPrediction { value, case_label, witnesses })
}

/// Diameter of the `k`-graph on `Z_n` via the decomposition `n = q * k^i`
/// with `1 <= q < k` (an independent route, cross-checked against
/// [`predict_diameter_cyclic`] by the verification sweeps).
///
/// Hypotheses: `n > 2`, `k | n`, every prime of `n` divides `k`, the
/// greatest `i` with `k^i | n` leaves a cofactor `q < k`, and the least
/// power `w` matches the decomposition (`w = i` when `q = 1`, else
/// `w = i + 1`). Any failed hypothesis is reported, never papered over.
pub fn predict_diameter_cyclic_qk(n: u64, k: u64) -> Result<DiameterPrediction> {
    if n < 2 || k < 2 {
        return Err(Error::InvalidArgument(format!(
            "order and multiplier must be at least 2, got n={n}, k={k}"
        )));
    }
    if n == 2 {
        return Err(Error::HypothesisNotMet("the decomposition route requires n > 2".into()));
    }
    if n % k != 0 {
        return Err(Error::HypothesisNotMet(format!("{k} does not divide {n}")));
    }
    let spec = GroupSpec::cyclic(n)?;
    if !predict_connected(&spec, k) {
        return Err(Error::HypothesisNotMet(format!(
            "some prime factor of {n} does not divide {k}"
        )));
    }
    let (i, q) = greatest_power_dividing(n, k);
    if q >= k {
        return Err(Error::HypothesisNotMet(format!(
            "n = {n} decomposes as {q} * {k}^{i} with cofactor {q} >= {k}"
        )));
    }
    let w = least_power_w(n, k)?;
    let expected_w = if q == 1 { i } else { i + 1 };
    if w != expected_w {
        return Err(Error::HypothesisNotMet(format!(
            "the decomposition n = {q} * {k}^{i} implies least power {expected_w}, but the true least power is {w}"
        )));
    }
    let (value, case_label) = if q == 1 {
        let value = if k == 2 { 2 * (u64::from(i) - 1) } else { 2 * u64::from(i) };
        (value, DiameterCase::CdimQ1)
    } else if q == 2 {
        (2 * u64::from(i) + 1, DiameterCase::CdimQ2)
    } else {
        (2 * (u64::from(i) + 1), DiameterCase::CdimQGt2)
    };
    let witnesses = DiameterWitnesses {
        k: Some(k),
        w: Some(w),
        q: Some(q),
        i: Some(i),
        ..DiameterWitnesses::default()
    };
    Ok(DiameterPrediction { value, case_label, witnesses })
}

/// Diameter of a connected `m`-graph on a product group, classified by the
/// relation between the two largest per-factor depths.
///
/// Presentations that are not invariant-factor chains are canonicalized
/// first; a single-factor (or effectively cyclic) group delegates to
/// [`predict_diameter_cyclic`].
pub fn predict_diameter_product(spec: &GroupSpec, m: u64) -> Result<DiameterPrediction> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("multiplier must be at least 2, got {m}")));
    }
    if spec.factor_count() == 1 {
        return predict_diameter_cyclic(spec.order, m);
    }
    if !spec.is_invariant_chain() {
        return predict_diameter_product(&invariant_factors(&spec.moduli)?, m);
    }
    require_connected(spec, m)?;
    let ds = factor_multipliers(spec, m);
    let ws: Vec<u32> = spec
        .moduli
        .iter()
        .zip(&ds)
        .map(|(&mj, &dj)| least_power_w(mj, dj))
        .collect::<Result<_>>()?;
    let value = exact_diameter(&dims_for(spec, gcd(m, spec.exponent()))?);
    let last = spec.factor_count() - 1;
    let w_top = ws[last];
    let w_second = ws[last - 1];
    let inner = predict_diameter_cyclic(spec.moduli[last], ds[last])?.value;
    let case_label = if w_second == w_top || inner == 2 * u64::from(w_top) {
        DiameterCase::NcdimCase1
    } else if w_second == w_top - 1 {
        DiameterCase::NcdimCase2
    } else {
        DiameterCase::NcdimCase3
    };
    let witnesses = DiameterWitnesses {
        d_list: Some(ds),
        w_list: Some(ws),
        ..DiameterWitnesses::default()
    };
    Ok(DiameterPrediction { value, case_label, witnesses })
}

/// The diameter value a product-case label asserts, given the witnesses.
/// Used by the sweeps to confirm the case conditions agree with the exact
/// value on every tested group.
pub fn product_case_value(prediction: &DiameterPrediction, inner: u64) -> Option<u64> {
    let w_top = u64::from(*prediction.witnesses.w_list.as_ref()?.last()?);
    match prediction.case_label {
        DiameterCase::NcdimCase1 => Some(2 * w_top),
        DiameterCase::NcdimCase2 => Some(2 * w_top - 1),
        DiameterCase::NcdimCase3 => Some(inner),
        _ => None,
    }
}

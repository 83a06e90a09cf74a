//! Finite abelian groups presented as products of cyclic groups, plus the
//! modular arithmetic the rest of the crate is built on.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Greatest common divisor (`gcd(0, 0) == 0`).
pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least common multiple, erroring on overflow.
pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .ok_or_else(|| Error::InvalidArgument(format!("lcm({a}, {b}) overflows u64")))
}

/// Prime factorization of `n >= 1` as an ordered `prime -> exponent` map.
pub fn factorize(n: u64) -> BTreeMap<u64, u32> {
    let mut map = BTreeMap::new();
    let mut n = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        while n % p == 0 {
            *map.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        *map.entry(n).or_insert(0) += 1;
    }
    map
}

/// Primality by trial division; fine for the 64-bit sizes this crate handles.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            return false;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

/// Product of the distinct prime divisors of `n >= 1`.
pub fn radical(n: u64) -> u64 {
    factorize(n).keys().product()
}

/// `a * b mod n` without overflow.
pub fn mod_mul(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

/// `base^exp mod n` by square-and-multiply (`n >= 1`).
pub fn mod_pow(base: u64, exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut base = base % n;
    let mut exp = exp;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mod_mul(result, base, n);
        }
        base = mod_mul(base, base, n);
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo `n`, if `gcd(a, n) == 1`.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some(0);
    }
    // Extended Euclid on (a mod n, n), tracking only the coefficient of a.
    let (mut r0, mut r1) = ((a % n) as i128, n as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        let r = r0 - q * r1;
        r0 = r1;
        r1 = r;
        let s = s0 - q * s1;
        s0 = s1;
        s1 = s;
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(n as i128) as u64)
}

/// Exponent of `p` in `n` (how many times `p` divides `n`).
///
/// Requires `p` prime and `n >= 1`.
pub fn p_adic_valuation(n: u64, p: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!(
            "p-adic valuation requires a prime base, got {p}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument(
            "p-adic valuation of 0 is undefined here".into(),
        ));
    }
    let mut n = n;
    let mut v = 0u32;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Ok(v)
}

/// Solution set of the congruence `m * x = a (mod n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSolution {
    /// Whether any solution exists (`gcd(m, n)` divides `a`).
    pub solvable: bool,
    /// Number of solutions in `0..n` (equals `gcd(m, n)` when solvable).
    pub count: u64,
    /// All solutions in `0..n`, ascending.
    pub solutions: Vec<u64>,
}

/// Solves `m * x = a (mod n)` exactly: solvable iff `gcd(m, n) | a`, and
/// then there are exactly `gcd(m, n)` solutions, spaced `n / gcd(m, n)`
/// apart.
pub fn solve_scalar_equation(m: u64, a: u64, n: u64) -> Result<CongruenceSolution> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "congruence modulus must be positive".into(),
        ));
    }
    let a = a % n;
    let g = gcd(m % n, n); // == n when m = 0 mod n, making every residue a solution of 0 = a only if a = 0
    if a % g != 0 {
        return Ok(CongruenceSolution {
            solvable: false,
            count: 0,
            solutions: Vec::new(),
        });
    }
    let n_red = n / g;
    let x0 = if n_red == 1 {
        0
    } else {
        let m_red = (m % n) / g;
        let inv = mod_inverse(m_red, n_red).expect("m/g is invertible mod n/g");
        mod_mul(a / g, inv, n_red)
    };
    let solutions: Vec<u64> = (0..g).map(|t| x0 + t * n_red).collect();
    Ok(CongruenceSolution {
        solvable: true,
        count: g,
        solutions,
    })
}

/// One element of a product group, as a vector of residues (one per factor).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GroupElement {
    /// `residues[j]` lies in `0..moduli[j]` of the owning [`GroupSpec`].
    pub residues: Vec<u64>,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residues.len() == 1 {
            write!(f, "{}", self.residues[0])
        } else {
            write!(f, "(")?;
            for (j, r) in self.residues.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{r}")?;
            }
            write!(f, ")")
        }
    }
}

/// A finite abelian group presented as `Z_{m1} x ... x Z_{mi}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSpec {
    /// Cyclic factor sizes, each `>= 2`, in presentation order.
    pub moduli: Vec<u64>,
    /// Product of the moduli.
    pub order: u64,
    /// Prime factorization of the order.
    pub prime_factorization: BTreeMap<u64, u32>,
}

impl GroupSpec {
    /// Builds a group from its cyclic factor sizes.
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidSpec(
                "a group needs at least one cyclic factor".into(),
            ));
        }
        let mut order: u64 = 1;
        for &m in &moduli {
            if m < 2 {
                return Err(Error::InvalidSpec(format!(
                    "cyclic factor sizes must be at least 2, got {m}"
                )));
            }
            order = order.checked_mul(m).ok_or_else(|| {
                Error::InvalidSpec("group order overflows u64".into())
            })?;
        }
        let mut prime_factorization = BTreeMap::new();
        for &m in &moduli {
            for (p, e) in factorize(m) {
                *prime_factorization.entry(p).or_insert(0) += e;
            }
        }
        Ok(GroupSpec {
            moduli,
            order,
            prime_factorization,
        })
    }

    /// Convenience constructor for a single cyclic group `Z_n`.
    pub fn cyclic(n: u64) -> Result<Self> {
        GroupSpec::new(vec![n])
    }

    /// Number of cyclic factors in this presentation.
    pub fn factor_count(&self) -> usize {
        self.moduli.len()
    }

    /// The identity element (all residues zero).
    pub fn identity(&self) -> GroupElement {
        GroupElement {
            residues: vec![0; self.moduli.len()],
        }
    }

    /// Wraps raw residues into an element, validating length and ranges.
    pub fn element(&self, residues: Vec<u64>) -> Result<GroupElement> {
        if residues.len() != self.moduli.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} residues, got {}",
                self.moduli.len(),
                residues.len()
            )));
        }
        for (j, (&r, &m)) in residues.iter().zip(&self.moduli).enumerate() {
            if r >= m {
                return Err(Error::InvalidArgument(format!(
                    "residue {r} out of range for factor {j} (modulus {m})"
                )));
            }
        }
        Ok(GroupElement { residues })
    }

    /// Mixed-radix rank of an element, first factor most significant.
    ///
    /// Ranks run `0..order` and give the vertex numbering used by every
    /// graph in this crate.
    pub fn rank(&self, a: &GroupElement) -> u64 {
        let mut r = 0u64;
        for (&x, &m) in a.residues.iter().zip(&self.moduli) {
            r = r * m + x;
        }
        r
    }

    /// Inverse of [`GroupSpec::rank`].
    pub fn unrank(&self, mut rank: u64) -> GroupElement {
        let mut residues = vec![0u64; self.moduli.len()];
        for j in (0..self.moduli.len()).rev() {
            residues[j] = rank % self.moduli[j];
            rank /= self.moduli[j];
        }
        GroupElement { residues }
    }

    /// All elements in rank order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |r| self.unrank(r))
    }

    /// `m * a` computed componentwise.
    pub fn scalar_mul(&self, m: u64, a: &GroupElement) -> GroupElement {
        let residues = a
            .residues
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &n)| mod_mul(m % n, x, n))
            .collect();
        GroupElement { residues }
    }

    /// Componentwise sum `a + b`.
    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.moduli)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        GroupElement { residues }
    }

    /// Componentwise difference `a - b`.
    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.moduli)
            .map(|((&x, &y), &n)| (x + n - y) % n)
            .collect();
        GroupElement { residues }
    }

    /// Order of an element: the lcm over factors of `m_j / gcd(m_j, a_j)`.
    pub fn element_order(&self, a: &GroupElement) -> u64 {
        let mut o = 1u64;
        for (&x, &m) in a.residues.iter().zip(&self.moduli) {
            let part = m / gcd(m, x);
            o = o / gcd(o, part) * part;
        }
        o
    }

    /// Exponent of the group: lcm of the factor sizes.
    pub fn exponent(&self) -> u64 {
        let mut e = 1u64;
        for &m in &self.moduli {
            e = e / gcd(e, m) * m;
        }
        e
    }

    /// Product of the distinct primes dividing the order.
    pub fn radical(&self) -> u64 {
        self.prime_factorization.keys().product()
    }

    /// Whether the presented group is cyclic (exponent equals order).
    pub fn is_cyclic(&self) -> bool {
        self.exponent() == self.order
    }

    /// Whether the presentation is an invariant-factor chain
    /// `m_1 | m_2 | ... | m_i`.
    pub fn is_invariant_chain(&self) -> bool {
        self.moduli.windows(2).all(|w| w[1] % w[0] == 0)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, m) in self.moduli.iter().enumerate() {
            if j > 0 {
                write!(f, " x ")?;
            }
            write!(f, "Z{m}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses literals like `"Z12"` or `"Z4 x Z8 x Z72"`.
    ///
    /// Whitespace is ignored and both `z`/`Z` and `x`/`X` are accepted.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty group literal".into()));
        }
        let mut moduli = Vec::new();
        for part in compact.split(['x', 'X']) {
            let rest = part
                .strip_prefix(['z', 'Z'])
                .ok_or_else(|| Error::Parse(format!("expected Z<n>, got {part:?}")))?;
            if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!("expected Z<n>, got {part:?}")));
            }
            let n: u64 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("modulus out of range in {part:?}")))?;
            moduli.push(n);
        }
        GroupSpec::new(moduli).map_err(|e| match e {
            Error::InvalidSpec(msg) => Error::Parse(msg),
            other => other,
        })
    }
}

/// Rewrites any presentation as its invariant-factor decomposition
/// `d_1 | d_2 | ... | d_t` (ascending chain), via the prime-power
/// decomposition: split every modulus into prime powers, then greedily
/// recombine the largest remaining power of each prime.
pub fn invariant_factors(moduli: &[u64]) -> Result<GroupSpec> {
    let probe = GroupSpec::new(moduli.to_vec())?; // validates moduli
    let mut per_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &m in &probe.moduli {
        for (p, e) in factorize(m) {
            per_prime.entry(p).or_default().push(p.pow(e));
        }
    }
    for powers in per_prime.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
    }
    let chain_len = per_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors_desc = Vec::with_capacity(chain_len);
    for idx in 0..chain_len {
        let mut f = 1u64;
        for powers in per_prime.values() {
            if let Some(&q) = powers.get(idx) {
                f *= q;
            }
        }
        factors_desc.push(f);
    }
    factors_desc.reverse();
    GroupSpec::new(factors_desc)
}

/// All partitions of `e` as non-increasing part lists, in a fixed order.
fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn extend(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            extend(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(e, e, &mut Vec::new(), &mut out);
    out
}

/// Every isomorphism class of abelian groups of order `n`, each presented as
/// its invariant-factor chain, sorted lexicographically by the moduli list.
/// One class per combination of exponent partitions across the primes of `n`.
pub fn invariant_chains_of_order(n: u64) -> Result<Vec<GroupSpec>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "group order must be at least 2, got {n}"
        )));
    }
    let primes: Vec<(u64, u32)> = factorize(n).into_iter().collect();
    let per_prime: Vec<(u64, Vec<Vec<u32>>)> = primes
        .into_iter()
        .map(|(p, e)| (p, partitions(e)))
        .collect();
    // Cartesian product of the per-prime partition choices.
    let mut chains = Vec::new();
    let mut choice = vec![0usize; per_prime.len()];
    'product: loop {
        let mut prime_powers = Vec::new();
        for (idx, (p, parts)) in per_prime.iter().enumerate() {
            for &part in &parts[choice[idx]] {
                prime_powers.push(p.pow(part));
            }
        }
        chains.push(invariant_factors(&prime_powers)?);
        for pos in (0..per_prime.len()).rev() {
            choice[pos] += 1;
            if choice[pos] < per_prime[pos].1.len() {
                continue 'product;
            }
            choice[pos] = 0;
        }
        break; // the odometer wrapped: every combination was visited
    }
    chains.sort_by(|a, b| a.moduli.cmp(&b.moduli));
    Ok(chains)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_lcm_basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(0, 5), 5);
        assert_eq!(gcd(7, 0), 7);
        assert_eq!(lcm(4, 6).unwrap(), 12);
        assert_eq!(lcm(0, 9).unwrap(), 0);
        assert!(lcm(u64::MAX, u64::MAX - 1).is_err());
    }

    #[test]
    fn factorize_and_radical() {
        assert_eq!(factorize(1), BTreeMap::new());
        assert_eq!(factorize(72), BTreeMap::from([(2, 3), (3, 2)]));
        assert_eq!(radical(72), 6);
        assert_eq!(radical(1), 1);
        assert_eq!(radical(97), 97);
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(2_147_483_647)); // 2^31 - 1
    }

    #[test]
    fn modular_arithmetic() {
        assert_eq!(mod_pow(2, 10, 1000), 24);
        assert_eq!(mod_pow(5, 0, 7), 1);
        assert_eq!(mod_pow(3, 5, 1), 0);
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(4, 8), None);
        assert_eq!(mod_inverse(1, 1), Some(0));
        // Large operands exercise the u128 path.
        let n = u64::MAX - 58; // arbitrary large modulus
        assert_eq!(mod_mul(n - 1, n - 1, n), 1);
    }

    #[test]
    fn valuations() {
        assert_eq!(p_adic_valuation(72, 2).unwrap(), 3);
        assert_eq!(p_adic_valuation(72, 3).unwrap(), 2);
        assert_eq!(p_adic_valuation(72, 5).unwrap(), 0);
        assert!(p_adic_valuation(72, 6).is_err());
        assert!(p_adic_valuation(0, 2).is_err());
    }

    #[test]
    fn congruence_solver_matches_scan() {
        for n in 1..=60u64 {
            for m in 0..=70u64 {
                for a in 0..n {
                    let sol = solve_scalar_equation(m, a, n).unwrap();
                    let scan: Vec<u64> = (0..n).filter(|&x| mod_mul(m, x, n) == a % n).collect();
                    assert_eq!(sol.solvable, !scan.is_empty(), "n={n} m={m} a={a}");
                    assert_eq!(sol.solutions, scan, "n={n} m={m} a={a}");
                    assert_eq!(sol.count as usize, scan.len());
                }
            }
        }
    }

    #[test]
    fn congruence_solution_count_is_gcd() {
        let sol = solve_scalar_equation(6, 0, 72).unwrap();
        assert_eq!(sol.count, 6);
        assert_eq!(sol.solutions, vec![0, 12, 24, 36, 48, 60]);
        let none = solve_scalar_equation(6, 3, 72).unwrap();
        assert!(!none.solvable);
    }

    #[test]
    fn group_spec_validation() {
        assert!(GroupSpec::new(vec![]).is_err());
        assert!(GroupSpec::new(vec![4, 1]).is_err());
        assert!(GroupSpec::new(vec![0]).is_err());
        let g = GroupSpec::new(vec![4, 8, 72]).unwrap();
        assert_eq!(g.order, 2304);
        assert_eq!(g.prime_factorization, BTreeMap::from([(2, 8), (3, 2)]));
    }

    #[test]
    fn parse_and_display() {
        let g: GroupSpec = "Z4 x Z8 x Z72".parse().unwrap();
        assert_eq!(g.moduli, vec![4, 8, 72]);
        assert_eq!(g.to_string(), "Z4 x Z8 x Z72");
        let g: GroupSpec = "  z20 ".parse().unwrap();
        assert_eq!(g.moduli, vec![20]);
        let g: GroupSpec = "Z2X Z4".parse().unwrap();
        assert_eq!(g.moduli, vec![2, 4]);
        assert!("".parse::<GroupSpec>().is_err());
        assert!("Z".parse::<GroupSpec>().is_err());
        assert!("Z4 + Z8".parse::<GroupSpec>().is_err());
        assert!("Q8".parse::<GroupSpec>().is_err());
        assert!("Z1".parse::<GroupSpec>().is_err());
        assert!("Z4 x".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn rank_unrank_roundtrip() {
        let g = GroupSpec::new(vec![3, 4, 5]).unwrap();
        for r in 0..g.order {
            let e = g.unrank(r);
            assert_eq!(g.rank(&e), r);
        }
        // First factor is most significant.
        assert_eq!(g.unrank(0).residues, vec![0, 0, 0]);
        assert_eq!(g.unrank(1).residues, vec![0, 0, 1]);
        assert_eq!(g.unrank(20).residues, vec![1, 0, 0]);
    }

    #[test]
    fn element_validation_and_display() {
        let g = GroupSpec::new(vec![2, 4]).unwrap();
        assert!(g.element(vec![1]).is_err());
        assert!(g.element(vec![1, 4]).is_err());
        let e = g.element(vec![0, 2]).unwrap();
        assert_eq!(e.to_string(), "(0,2)");
        let c = GroupSpec::cyclic(20).unwrap();
        assert_eq!(c.element(vec![7]).unwrap().to_string(), "7");
    }

    #[test]
    fn group_operations() {
        let g = GroupSpec::new(vec![2, 4]).unwrap();
        let a = g.element(vec![1, 3]).unwrap();
        assert_eq!(g.scalar_mul(2, &a).residues, vec![0, 2]);
        assert_eq!(g.add(&a, &a).residues, vec![0, 2]);
        assert_eq!(g.sub(&g.identity(), &a).residues, vec![1, 1]);
        assert_eq!(g.element_order(&a), 4);
        assert_eq!(g.element_order(&g.identity()), 1);
        assert_eq!(g.exponent(), 4);
        assert!(!g.is_cyclic());
        assert!(GroupSpec::new(vec![3, 4]).unwrap().is_cyclic());
        assert!(g.is_invariant_chain());
        assert!(!GroupSpec::new(vec![4, 2]).unwrap().is_invariant_chain());
    }

    #[test]
    fn invariant_factor_decomposition() {
        assert_eq!(invariant_factors(&[4, 8, 72]).unwrap().moduli, vec![4, 8, 72]);
        assert_eq!(invariant_factors(&[3, 5]).unwrap().moduli, vec![15]);
        assert_eq!(invariant_factors(&[2, 2]).unwrap().moduli, vec![2, 2]);
        assert_eq!(invariant_factors(&[12, 18]).unwrap().moduli, vec![6, 36]);
        assert_eq!(invariant_factors(&[8, 9]).unwrap().moduli, vec![72]);
        let chain = invariant_factors(&[60, 90, 150]).unwrap();
        assert!(chain.is_invariant_chain());
        assert_eq!(chain.order, 60 * 90 * 150);
    }

    #[test]
    fn chains_of_order_enumerate_abelian_classes() {
        let moduli = |n: u64| -> Vec<Vec<u64>> {
            invariant_chains_of_order(n)
                .unwrap()
                .into_iter()
                .map(|s| s.moduli)
                .collect()
        };
        assert_eq!(
            moduli(16),
            vec![
                vec![2, 2, 2, 2],
                vec![2, 2, 4],
                vec![2, 8],
                vec![4, 4],
                vec![16],
            ]
        );
        assert_eq!(
            moduli(72),
            vec![
                vec![2, 2, 18],
                vec![2, 6, 6],
                vec![2, 36],
                vec![3, 24],
                vec![6, 12],
                vec![72],
            ]
        );
        assert_eq!(moduli(7), vec![vec![7]]);
        // Partitions of 4 give the five classes of order 3^4.
        assert_eq!(invariant_chains_of_order(81).unwrap().len(), 5);
        assert!(invariant_chains_of_order(1).is_err());
    }
}

//! Vertex subdiagrams of the Pascal diagram: concentration-band subdiagrams
//! with explicit Hoeffding thresholds, their exact measure lower bounds and
//! disjointness certificates, and the measure-extension partial sums for
//! anchored Pascal subdiagrams of the one-sided diagram.

use num::{BigInt, BigRational, BigUint, One, Signed, ToPrimitive, Zero};

use crate::diagram::{Diagram, Vertex};
use crate::error::{Error, Result};
use crate::measures::{format_rational, BernoulliParam};

/// A diagram restricted to chosen vertex subsets per level; edges are those of
/// the base diagram with both endpoints kept.
#[derive(Debug, Clone)]
pub struct VertexSubdiagram {
    base: Diagram,
    levels: Vec<Vec<Vertex>>,
}

impl VertexSubdiagram {
    pub fn new(base: Diagram, levels: Vec<Vec<Vertex>>) -> Result<Self> {
        for (n, w) in levels.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::EmptyLevel { level: n as u32 });
            }
        }
        Ok(Self { base, levels })
    }

    pub fn base(&self) -> &Diagram {
        &self.base
    }

    pub fn level(&self, n: u32) -> &[Vertex] {
        &self.levels[n as usize]
    }

    pub fn depth(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.levels
            .get(v.level as usize)
            .is_some_and(|w| w.contains(&v))
    }

    /// True iff every level's kept set is a contiguous index interval.
    pub fn levels_are_intervals(&self) -> bool {
        self.levels.iter().all(|w| {
            let lo = w.iter().map(|v| v.index).min().unwrap();
            let hi = w.iter().map(|v| v.index).max().unwrap();
            hi - lo + 1 == w.len() as i64
        })
    }
}

/// Shrinking concentration bands around `p`: at every level `k > N_i` the
/// path's coordinate ratio must satisfy `|x/k - p| < 2^(1-i)`.
#[derive(Debug, Clone)]
pub struct BandSpec {
    p: BernoulliParam,
    epsilon: BigRational,
    /// `thresholds[i-1]` is `N_i`.
    thresholds: Vec<u64>,
}

impl BandSpec {
    pub fn p(&self) -> &BernoulliParam {
        &self.p
    }

    pub fn epsilon(&self) -> &BigRational {
        &self.epsilon
    }

    pub fn thresholds(&self) -> &[u64] {
        &self.thresholds
    }

    /// Strict band membership of the level-`k` coordinate `x`, in exact
    /// integer arithmetic: `|x*b - a*k| * 2^(i-1) < k*b` for `p = a/b`.
    pub fn in_band(&self, x: i64, k: u32) -> bool {
        if k == 0 {
            return true;
        }
        let a = self.p.p().numer();
        let b = self.p.p().denom();
        for (idx, &n_i) in self.thresholds.iter().enumerate() {
            let i = idx as u32 + 1;
            if i == 1 || u64::from(k) <= n_i {
                continue; // the i = 1 band is vacuous; others start past N_i
            }
            let dev = (BigInt::from(x) * b - a * BigInt::from(k)).abs();
            if dev << (i - 1) >= BigInt::from(k) * b {
                return false;
            }
        }
        true
    }
}

/// Smallest `N` with `2 exp(-2 d^2 (N+1)) / (1 - exp(-2 d^2)) <= budget` for
/// the half-width `d = 2^(1-i)`, so that a Bernoulli walk leaves the band at
/// some level past `N` with probability at most `budget`. The `i = 1` band is
/// vacuous and needs no threshold.
pub fn hoeffding_threshold(i: u32, budget: &BigRational) -> Result<u64> {
    if i < 1 || *budget <= BigRational::zero() {
        return Err(Error::Invalid(format!(
            "need band index >= 1 and positive budget, got i={i}, budget={}",
            format_rational(budget)
        )));
    }
    if i == 1 {
        return Ok(0);
    }
    let delta = 2f64.powi(1 - i as i32);
    let t = 2.0 * delta * delta;
    let b = budget.to_f64().ok_or_else(|| {
        Error::Invalid(format!("budget not representable: {}", format_rational(budget)))
    })?;
    let satisfies = |n: u64| 2.0 * (-t * (n as f64 + 1.0)).exp() / (1.0 - (-t).exp()) <= b;
    let guess = ((2.0 / (b * (1.0 - (-t).exp()))).ln() / t - 1.0).ceil().max(0.0) as u64;
    let mut n = guess;
    while n > 0 && satisfies(n - 1) {
        n -= 1;
    }
    while !satisfies(n) {
        n += 1;
    }
    Ok(n)
}

fn band_spec(p: &BernoulliParam, epsilon: &BigRational, depth: u32) -> Result<BandSpec> {
    if *epsilon <= BigRational::zero() || *epsilon >= BigRational::one() {
        return Err(Error::Invalid(format!(
            "band budget must satisfy 0 < epsilon < 1, got {}",
            format_rational(epsilon)
        )));
    }
    let mut thresholds = Vec::new();
    for i in 1u32.. {
        let budget = epsilon / BigRational::from_integer(BigInt::from(2u8) << i);
        let n_i = hoeffding_threshold(i, &budget)?;
        if i > 1 && n_i >= u64::from(depth) {
            break;
        }
        thresholds.push(n_i);
    }
    Ok(BandSpec {
        p: p.clone(),
        epsilon: epsilon.clone(),
        thresholds,
    })
}

/// Builds the depth-restricted band subdiagram: vertices that are reachable
/// from the root through in-band vertices (forward pass) and from which level
/// `depth` is reachable through in-band vertices (backward pass).
pub fn build_band_subdiagram(
    p: &BernoulliParam,
    epsilon: &BigRational,
    depth: u32,
) -> Result<(VertexSubdiagram, BandSpec)> {
    let spec = band_spec(p, epsilon, depth)?;
    let diagram = Diagram::pascal(depth);
    // forward reachability through the band constraints
    let mut forward: Vec<Vec<Vertex>> = vec![vec![Vertex::pascal(0, 0)]];
    for k in 1..=depth {
        let prev = &forward[(k - 1) as usize];
        let mut next = Vec::new();
        for x in 0..=i64::from(k) {
            let v = Vertex::pascal(x, i64::from(k) - x);
            let reachable = prev
                .iter()
                .any(|u| u.index == x || u.index == x - 1);
            if reachable && spec.in_band(x, k) {
                next.push(v);
            }
        }
        if next.is_empty() {
            return Err(Error::EmptyLevel { level: k });
        }
        forward.push(next);
    }
    // backward pass: keep vertices that reach the bottom level
    let mut levels = forward.clone();
    for k in (0..depth).rev() {
        let below: Vec<i64> = levels[(k + 1) as usize].iter().map(|v| v.index).collect();
        levels[k as usize].retain(|v| below.contains(&v.index) || below.contains(&(v.index + 1)));
        if levels[k as usize].is_empty() {
            return Err(Error::EmptyLevel { level: k });
        }
    }
    let sub = VertexSubdiagram::new(diagram, levels)?;
    debug_assert!(sub.levels_are_intervals());
    Ok((sub, spec))
}

/// Exact Bernoulli probability that a random path satisfies every active band
/// constraint through level `depth`, by a level-wise mass DP.
pub fn band_measure_dp(spec: &BandSpec, depth: u32) -> BigRational {
    let p = spec.p().p().clone();
    let q = spec.p().q();
    let mut mass: Vec<BigRational> = vec![BigRational::one()]; // index x at current level
    for k in 1..=depth {
        let mut next = vec![BigRational::zero(); k as usize + 1];
        for (x, m) in mass.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            next[x] += m * &q;
            next[x + 1] += m * &p;
        }
        for (x, m) in next.iter_mut().enumerate() {
            if !spec.in_band(x as i64, k) {
                *m = BigRational::zero();
            }
        }
        mass = next;
    }
    mass.into_iter().sum()
}

/// True iff `|p - q| > 2^(2-i)`, which makes the level-`i` bands around
/// `p` and `q` disjoint open intervals.
pub fn band_disjointness(p: &BernoulliParam, q: &BernoulliParam, i: u32) -> bool {
    let gap = (p.p() - q.p()).abs();
    let bound = if i >= 2 {
        BigRational::new(BigInt::one(), BigInt::one() << (i - 2))
    } else {
        BigRational::from_integer(BigInt::one() << (2 - i))
    };
    gap > bound
}

/// The least band index at which [`band_disjointness`] holds, if any index
/// does (it does whenever `p != q`).
pub fn least_disjoint_index(p: &BernoulliParam, q: &BernoulliParam) -> Result<u32> {
    if p.p() == q.p() {
        return Err(Error::Invalid("parameters must differ".into()));
    }
    Ok((1u32..).find(|&i| band_disjointness(p, q, i)).unwrap())
}

/// Partial values of the measure extension from the Pascal subdiagram of the
/// one-sided diagram anchored at index `anchor`, with a divergence flag.
#[derive(Debug, Clone)]
pub struct ExtensionReport {
    /// `(n, partial value at depth n)` per schedule entry.
    pub values: Vec<(u32, BigRational)>,
    /// Set when some partial value exceeds 10^6 times the first one; the
    /// sequence then has no finite limit in every case arising here.
    pub diverging: bool,
}

fn binomial_prefix_sums(n: u32) -> Vec<BigUint> {
    // prefix[m] = sum of C(n, t) for t <= m
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::one()];
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigUint::one());
        row = next;
    }
    let mut acc = BigUint::zero();
    row.into_iter()
        .map(|c| {
            acc += c;
            acc.clone()
        })
        .collect()
}

/// For each `n` in `schedule`, the exact partial extension value
/// `sum_{k=0..n} H_(anchor+k)(n) p^(n-k) q^k`, where `H_m(n)` counts the
/// paths of the one-sided diagram from level 0 into index `m` at level `n`
/// (a binomial prefix sum). Non-decreasing in `n`; finite limit only for
/// `p > 1/2`.
pub fn extension_value(
    anchor: i64,
    p: &BernoulliParam,
    schedule: &[u32],
) -> Result<ExtensionReport> {
    if anchor < 1 {
        return Err(Error::Invalid(format!("anchor must be >= 1, got {anchor}")));
    }
    let mut values = Vec::with_capacity(schedule.len());
    let mut diverging = false;
    let mut first: Option<BigRational> = None;
    for &n in schedule {
        let prefix = binomial_prefix_sums(n);
        let q = p.q();
        let mut p_pow = num::pow::pow(p.p().clone(), n as usize); // p^(n-k) q^k, k = 0
        let mut partial = BigRational::zero();
        for k in 0..=n {
            let m = anchor + i64::from(k); // vertex index; H depends on min(n, m-1)
            let cut = (i64::from(n)).min(m - 1) as usize;
            let h = BigRational::from_integer(BigInt::from(prefix[cut].clone()));
            partial += h * &p_pow;
            p_pow = p_pow / p.p() * &q;
        }
        let first_val = first.get_or_insert_with(|| partial.clone());
        if partial > first_val.clone() * BigRational::from_integer(BigInt::from(1_000_000)) {
            diverging = true;
        }
        values.push((n, partial));
    }
    Ok(ExtensionReport { values, diverging })
}

/// Closed-form limit of [`extension_value`] for `p > 1/2`:
/// `(1/(2-lambda)) / (lambda-1)^(anchor-1)` with `lambda = 1/p`.
pub fn extension_limit(anchor: i64, p: &BernoulliParam) -> Option<BigRational> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if *p.p() <= half || anchor < 1 {
        return None;
    }
    let lambda = p.p().recip();
    let two = BigRational::from_integer(BigInt::from(2));
    let head = (two - &lambda).recip();
    let lm1 = lambda - BigRational::one();
    Some(head / num::pow::pow(lm1, (anchor - 1) as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::parse_rational;

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn bp(s: &str) -> BernoulliParam {
        BernoulliParam::new(rat(s)).unwrap()
    }

    #[test]
    fn hoeffding_threshold_examples() {
        // independent check for i=2, budget 1/20: the tail bound at N=9 is
        // 2 e^{-5} / (1 - e^{-1/2}) ≈ 0.03425 ≤ 0.05, and N=8 gives ≈ 0.0565
        assert_eq!(hoeffding_threshold(2, &rat("1/20")).unwrap(), 9);
        assert_eq!(hoeffding_threshold(1, &rat("1/20")).unwrap(), 0);
        let n = hoeffding_threshold(3, &rat("1/40")).unwrap();
        let n_tight = hoeffding_threshold(3, &rat("1/80")).unwrap();
        assert!(n_tight >= n);
    }

    #[test]
    fn band_subdiagram_levels_are_intervals() {
        let (sub, spec) = build_band_subdiagram(&bp("1/2"), &rat("1/10"), 100).unwrap();
        assert!(sub.levels_are_intervals());
        assert_eq!(sub.level(0), &[Vertex::pascal(0, 0)]);
        // the all-vertical path leaves the i=2 band past its threshold
        let n2 = spec.thresholds()[1];
        let k = (n2 + 1) as u32;
        assert!(!sub.contains(Vertex::pascal(0, i64::from(k))));
        assert!(!spec.in_band(0, k));
    }

    #[test]
    fn smaller_budget_gives_weakly_larger_subdiagram() {
        let (loose, _) = build_band_subdiagram(&bp("1/2"), &rat("1/10"), 80).unwrap();
        let (tight, _) = build_band_subdiagram(&bp("1/2"), &rat("1/100"), 80).unwrap();
        for k in 0..=80u32 {
            for v in loose.level(k) {
                assert!(tight.contains(*v), "shrank at level {k}, index {}", v.index);
            }
        }
    }

    #[test]
    fn band_measure_is_one_before_first_active_constraint() {
        let (_, spec) = build_band_subdiagram(&bp("1/2"), &rat("1/10"), 60).unwrap();
        let n2 = spec.thresholds()[1] as u32;
        assert_eq!(band_measure_dp(&spec, n2), BigRational::one());
        assert!(band_measure_dp(&spec, 60) < BigRational::one());
    }

    #[test]
    fn band_measure_exceeds_certified_bound() {
        for p in ["3/10", "1/2", "7/10"] {
            let (_, spec) = build_band_subdiagram(&bp(p), &rat("1/10"), 120).unwrap();
            let m = band_measure_dp(&spec, 120);
            assert!(m > rat("9/10"), "p={p}: measure {}", format_rational(&m));
        }
    }

    #[test]
    fn disjointness_examples() {
        let p = bp("3/10");
        let q = bp("7/10");
        assert!(band_disjointness(&p, &q, 4));
        assert!(!band_disjointness(&p, &q, 2));
        assert_eq!(least_disjoint_index(&p, &q).unwrap(), 4);
        assert!(least_disjoint_index(&p, &p).is_err());
    }

    #[test]
    fn disjoint_bands_share_no_deep_vertex() {
        // the i = 4 threshold (half-width 1/8, budget 1/320) lands near level
        // 317, so depth 400 is needed before the disjoint constraints bite
        let depth = 400u32;
        let (a, sa) = build_band_subdiagram(&bp("3/10"), &rat("1/10"), depth).unwrap();
        let (b, sb) = build_band_subdiagram(&bp("7/10"), &rat("1/10"), depth).unwrap();
        let i = 4usize;
        assert!(sa.thresholds().len() >= i && sb.thresholds().len() >= i);
        let start = sa.thresholds()[i - 1].max(sb.thresholds()[i - 1]) as u32 + 1;
        assert!(start <= depth, "constraints never become active");
        for k in start..=depth {
            for v in a.level(k) {
                assert!(!b.contains(*v), "shared vertex at level {k}");
            }
        }
    }

    #[test]
    fn extension_partials_match_hand_computation() {
        let report = extension_value(1, &bp("3/4"), &[0, 1, 2]).unwrap();
        assert_eq!(report.values[0].1, rat("1"));
        assert_eq!(report.values[1].1, rat("5/4"));
        assert_eq!(report.values[2].1, rat("11/8"));
        assert!(!report.diverging);
    }

    #[test]
    fn extension_converges_to_closed_form() {
        for (anchor, p) in [(1, "3/4"), (1, "2/3"), (2, "3/4"), (3, "4/5")] {
            let param = bp(p);
            let schedule: Vec<u32> = (0..=200).step_by(25).collect();
            let report = extension_value(anchor, &param, &schedule).unwrap();
            for w in report.values.windows(2) {
                assert!(w[0].1 <= w[1].1, "partials must be non-decreasing");
            }
            let limit = extension_limit(anchor, &param).unwrap();
            let last = &report.values.last().unwrap().1;
            assert!(*last <= limit);
            let gap = (limit.clone() - last).to_f64().unwrap();
            assert!(gap < 1e-9, "anchor={anchor} p={p} gap={gap}");
        }
    }

    #[test]
    fn extension_diverges_below_one_half() {
        let schedule: Vec<u32> = (0..=400).step_by(50).collect();
        let report = extension_value(1, &bp("2/5"), &schedule).unwrap();
        assert!(report.diverging);
        assert!(extension_limit(1, &bp("2/5")).is_none());
    }
}

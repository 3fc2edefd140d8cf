//! Exact tail-invariant measures on path spaces: Bernoulli cylinder weights,
//! harmonic eigenvector measures on the one- and two-sided diagrams, the
//! finite/infinite total-mass dichotomy, and an exact-arithmetic path sampler.

use num::{BigInt, BigRational, BigUint, One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagram::{Diagram, DiagramKind, FinitePath, Vertex};
use crate::error::{Error, Result};

/// Parses `"num/den"` (or a bare integer) into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Invalid(format!("not an integer: {t:?}")))
    };
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::Invalid(format!("zero denominator: {s:?}")));
            }
            BigRational::new(parse_int(n)?, den)
        }
        None => BigRational::from_integer(parse_int(s)?),
    };
    Ok(r)
}

/// Formats a rational as `"num/den"` (reduced; integers keep the `/1`-free form).
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Bernoulli parameter `p` with `0 < p < 1`; `q = 1 - p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliParam {
    p: BigRational,
}

impl BernoulliParam {
    pub fn new(p: BigRational) -> Result<Self> {
        if p <= BigRational::zero() || p >= BigRational::one() {
            return Err(Error::Invalid(format!(
                "Bernoulli parameter must satisfy 0 < p < 1, got {}",
                format_rational(&p)
            )));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn q(&self) -> BigRational {
        BigRational::one() - &self.p
    }
}

/// Eigenvalue parameter `lambda` with `1 < lambda`, used by the harmonic
/// measures on the generalized diagrams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenParam {
    lambda: BigRational,
}

impl EigenParam {
    pub fn new(lambda: BigRational) -> Result<Self> {
        if lambda <= BigRational::one() {
            return Err(Error::Invalid(format!(
                "eigenvalue must exceed 1, got {}",
                format_rational(&lambda)
            )));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> &BigRational {
        &self.lambda
    }
}

/// Bernoulli cylinder measure on the standard Pascal diagram: a cylinder over
/// a path ending at `(i, j)` has measure `p^i q^j`, depending on the endpoint
/// only.
pub fn bernoulli_cylinder(param: &BernoulliParam, end: Vertex) -> BigRational {
    let (i, j) = end.pascal_coords();
    num::pow::pow(param.p().clone(), i as usize) * num::pow::pow(param.q(), j as usize)
}

fn pow_rational(base: &BigRational, exp: u32) -> BigRational {
    num::pow::pow(base.clone(), exp as usize)
}

/// One-sided harmonic eigenvector: `xi_i = (lambda - 1)^(i-1)` for `i >= 1`.
pub fn eigen_vector_one_sided(param: &EigenParam, i: i64) -> Result<BigRational> {
    if i < 1 {
        return Err(Error::Invalid(format!("one-sided index must be >= 1, got {i}")));
    }
    Ok(pow_rational(
        &(param.lambda().clone() - BigRational::one()),
        (i - 1) as u32,
    ))
}

/// Cylinder measure of the distinguished level-`n` cylinder at index `i`:
/// `(lambda - 1)^(i-1) / lambda^n`.
pub fn mu_lambda_cylinder(param: &EigenParam, i: i64, n: u32) -> Result<BigRational> {
    Ok(eigen_vector_one_sided(param, i)? / pow_rational(param.lambda(), n))
}

/// Total mass of the one-sided eigenvector measure.
#[derive(Debug, Clone, PartialEq)]
pub enum TotalMass {
    /// Exact total `1 / (2 - lambda)` for `lambda < 2`, with the partial sum
    /// over indices `1..=truncation` and the exact geometric remainder bound
    /// `(lambda - 1)^truncation / (2 - lambda)`.
    Finite {
        total: BigRational,
        partial: BigRational,
        remainder_bound: BigRational,
    },
    /// For `lambda >= 2` the level sums do not shrink; the partial sum at the
    /// truncation witnesses divergence.
    Infinite { partial: BigRational },
}

/// Decides finiteness of the total mass `sum_i xi_i` and returns exact values.
pub fn mu_lambda_total(param: &EigenParam, truncation: u32) -> Result<TotalMass> {
    let one = BigRational::one();
    let lm1 = param.lambda().clone() - &one;
    let mut partial = BigRational::zero();
    let mut term = one.clone();
    for _ in 0..truncation {
        partial += &term;
        term *= &lm1;
    }
    let two = BigRational::from_integer(BigInt::from(2));
    if *param.lambda() < two {
        let total = (two.clone() - param.lambda()).recip();
        let remainder_bound = pow_rational(&lm1, truncation) / (two - param.lambda());
        Ok(TotalMass::Finite {
            total,
            partial,
            remainder_bound,
        })
    } else {
        Ok(TotalMass::Infinite { partial })
    }
}

/// Checks the restriction identity: on the sub-diagram of paths through the
/// one-sided index `i0`, the normalized eigenvector measure of the cylinder
/// `n` levels below with `k` index increments (endpoint `i0 + k`) equals the
/// Bernoulli weight `p^(n-k) q^k` with `p = 1/lambda` — the stay-move carries
/// `p`, the increment `q`. Returns the (measure, Bernoulli) pair.
pub fn restriction_check(
    param: &EigenParam,
    i0: i64,
    n: u32,
    k: u32,
) -> Result<(BigRational, BigRational)> {
    if k > n {
        return Err(Error::Invalid(format!("offset {k} exceeds depth {n}")));
    }
    // normalizing by the cylinder at (i0, level 0) leaves
    // (lambda-1)^k / lambda^n = p^(n-k) q^k at p = 1/lambda
    let lhs =
        mu_lambda_cylinder(param, i0 + i64::from(k), n)? / mu_lambda_cylinder(param, i0, 0)?;
    let p = param.lambda().recip();
    let q = BigRational::one() - &p;
    let rhs = pow_rational(&p, n - k) * pow_rational(&q, k);
    Ok((lhs, rhs))
}

/// Measure of the set of level-`n` endpoints reachable from the minimal-path
/// tail under the Bernoulli(`p`) measure on the Pascal diagram:
/// `sum_{k=0..n} p^k q^(n-k)`.
pub fn x_min_level_measure(param: &BernoulliParam, n: u32) -> BigRational {
    let q = param.q();
    (0..=n)
        .map(|k| pow_rational(param.p(), k) * pow_rational(&q, n - k))
        .sum()
}

/// Two-sided harmonic eigenvector `x_i = (p/q)^i` for the eigenvalue
/// `lambda = 1/p`; satisfies `x_(i-1) + x_i = (1/p) x_i`.
pub fn eigen_vector_two_sided(param: &BernoulliParam, i: i64) -> BigRational {
    let ratio = param.p().clone() / param.q();
    if i >= 0 {
        num::pow::pow(ratio, i as usize)
    } else {
        num::pow::pow(ratio.recip(), (-i) as usize)
    }
}

/// Draws `r < threshold` for a rational threshold in `[0, 1]` exactly: pick a
/// uniform integer below the denominator and compare with the numerator.
fn bernoulli_draw(rng: &mut ChaCha8Rng, threshold: &BigRational) -> bool {
    debug_assert!(*threshold >= BigRational::zero() && *threshold <= BigRational::one());
    let den = threshold.denom().to_biguint().expect("reduced positive denom");
    let num = threshold.numer().to_biguint().expect("threshold >= 0");
    let draw = uniform_below(rng, &den);
    draw < num
}

fn uniform_below(rng: &mut ChaCha8Rng, bound: &BigUint) -> BigUint {
    if let Ok(small) = u64::try_from(bound.clone()) {
        return BigUint::from(rng.gen_range(0..small));
    }
    // rejection sampling over whole bytes
    let bytes = bound.to_bytes_be().len();
    loop {
        let mut buf = vec![0u8; bytes];
        rng.fill(&mut buf[..]);
        let x = BigUint::from_bytes_be(&buf);
        if &x < bound {
            return x;
        }
    }
}

/// Samples a depth-`depth` path from `start` under the Markov kernel of the
/// measure: at each vertex the step probabilities are proportional to the
/// eigenvector weights of the children (Bernoulli `p`/`q` on the Pascal
/// diagram). Deterministic given `seed`.
pub fn sample_path(
    diagram: &Diagram,
    param: &BernoulliParam,
    start: Vertex,
    depth: u32,
    seed: u64,
) -> Result<FinitePath> {
    if !diagram.contains(start) || start.level + depth > diagram.depth() {
        return Err(Error::OutOfWindow {
            index: start.index,
            level: start.level + depth,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = start;
    let mut edges = Vec::with_capacity(depth as usize);
    for _ in 0..depth {
        let children = diagram.children(v)?;
        let e = match children.len() {
            1 => children[0],
            2 => {
                // children come lower index first; the threshold is the
                // cylinder-mass fraction of the higher-index child: `p` for
                // the Pascal up-step, `q` for the one-sided increment (the
                // eigen restriction at lambda = 1/p gives the stay-move `p`)
                let threshold = match diagram.kind() {
                    DiagramKind::PascalStandard => param.p().clone(),
                    DiagramKind::GenOneSided => param.q(),
                    DiagramKind::GenTwoSided => {
                        let w0 = eigen_vector_two_sided(param, children[0].range.index);
                        let w1 = eigen_vector_two_sided(param, children[1].range.index);
                        w1.clone() / (w0 + w1)
                    }
                };
                if bernoulli_draw(&mut rng, &threshold) {
                    children[1]
                } else {
                    children[0]
                }
            }
            n => {
                return Err(Error::Invalid(format!(
                    "vertex ({}, {}) has {n} children",
                    v.index, v.level
                )))
            }
        };
        edges.push(e);
        v = e.range;
    }
    FinitePath::new(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn rational_round_trip() {
        assert_eq!(format_rational(&rat("2/3")), "2/3");
        assert_eq!(format_rational(&rat("4/6")), "2/3");
        assert_eq!(format_rational(&rat("-7")), "-7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn bernoulli_cylinder_depends_only_on_endpoint() {
        let p = BernoulliParam::new(rat("2/3")).unwrap();
        assert_eq!(bernoulli_cylinder(&p, Vertex::pascal(2, 1)), rat("4/27"));
        // level sums to 1: sum over (i, j) with i + j = n of C(n, i) p^i q^j
        let d = Diagram::pascal(5);
        let total: BigRational = d
            .vertices_at_level(5)
            .map(|v| {
                let count = BigInt::from(d.path_count(v).unwrap());
                BigRational::from_integer(count) * bernoulli_cylinder(&p, v)
            })
            .sum();
        assert_eq!(total, BigRational::one());
    }

    #[test]
    fn eigen_measure_matches_closed_forms() {
        let lam = EigenParam::new(rat("3/2")).unwrap();
        assert_eq!(eigen_vector_one_sided(&lam, 1).unwrap(), rat("1"));
        assert_eq!(eigen_vector_one_sided(&lam, 3).unwrap(), rat("1/4"));
        assert_eq!(mu_lambda_cylinder(&lam, 2, 3).unwrap(), rat("4/27"));
        // harmonicity: xi_i = (xi_i + xi_(i+1)) / lambda
        for i in 1..8 {
            let xi = eigen_vector_one_sided(&lam, i).unwrap();
            let next = eigen_vector_one_sided(&lam, i + 1).unwrap();
            assert_eq!(xi, (xi.clone() + next) / lam.lambda().clone());
        }
    }

    #[test]
    fn total_mass_dichotomy() {
        let lam = EigenParam::new(rat("3/2")).unwrap();
        match mu_lambda_total(&lam, 10).unwrap() {
            TotalMass::Finite {
                total,
                partial,
                remainder_bound,
            } => {
                assert_eq!(total, rat("2"));
                assert!(partial < total);
                assert_eq!(partial.clone() + remainder_bound, total);
            }
            TotalMass::Infinite { .. } => panic!("lambda < 2 is summable"),
        }
        let lam2 = EigenParam::new(rat("5/2")).unwrap();
        match mu_lambda_total(&lam2, 6).unwrap() {
            TotalMass::Infinite { partial } => {
                // 1 + 3/2 + 9/4 + ... grows without bound
                assert!(partial > rat("6"));
            }
            TotalMass::Finite { .. } => panic!("lambda >= 2 diverges"),
        }
    }

    #[test]
    fn restriction_is_bernoulli_with_p_one_over_lambda() {
        let lam = EigenParam::new(rat("3/2")).unwrap();
        for n in 0..6u32 {
            for k in 0..=n {
                let (lhs, rhs) = restriction_check(&lam, 4, n, k).unwrap();
                assert_eq!(lhs, rhs, "n={n} k={k}");
            }
        }
        // negative control: a different p must disagree (k=0 avoids the
        // p <-> q symmetry of the k = n/2 cylinders)
        let p_wrong = rat("1/3");
        let (lhs, _) = restriction_check(&lam, 4, 2, 0).unwrap();
        assert_ne!(lhs, p_wrong.clone() * p_wrong);
    }

    #[test]
    fn x_min_measure_closed_form_at_half() {
        let p = BernoulliParam::new(rat("1/2")).unwrap();
        for n in 0..12u32 {
            let expected = BigRational::new(BigInt::from(n + 1), BigInt::from(2u64.pow(n)));
            assert_eq!(x_min_level_measure(&p, n), expected);
        }
        // and it tends to zero
        assert!(x_min_level_measure(&p, 40) < rat("1/1000000"));
    }

    #[test]
    fn two_sided_eigen_identity() {
        let p = BernoulliParam::new(rat("2/5")).unwrap();
        let lam_inv = p.p();
        for i in -5..=5i64 {
            let lhs = eigen_vector_two_sided(&p, i - 1) + eigen_vector_two_sided(&p, i);
            let rhs = eigen_vector_two_sided(&p, i) / lam_inv;
            assert_eq!(lhs, rhs, "i={i}");
        }
    }

    #[test]
    fn sampler_is_deterministic_and_roughly_unbiased() {
        let d = Diagram::pascal(64);
        let p = BernoulliParam::new(rat("2/3")).unwrap();
        let a = sample_path(&d, &p, Vertex::pascal(0, 0), 64, 7).unwrap();
        let b = sample_path(&d, &p, Vertex::pascal(0, 0), 64, 7).unwrap();
        assert_eq!(a, b);
        let c = sample_path(&d, &p, Vertex::pascal(0, 0), 64, 8).unwrap();
        assert_ne!(a, c);
        // empirical frequency of up-steps over many seeds stays near 2/3
        let mut ups = 0u64;
        let mut total = 0u64;
        for seed in 0..50 {
            let path = sample_path(&d, &p, Vertex::pascal(0, 0), 64, seed).unwrap();
            for e in path.edges() {
                if e.range.index > e.source.index {
                    ups += 1;
                }
                total += 1;
            }
        }
        let freq = ups as f64 / total as f64;
        assert!((freq - 2.0 / 3.0).abs() < 0.03, "freq={freq}");
    }

    #[test]
    fn parameter_validation() {
        assert!(BernoulliParam::new(rat("1")).is_err());
        assert!(BernoulliParam::new(rat("0")).is_err());
        assert!(EigenParam::new(rat("1")).is_err());
        assert!(EigenParam::new(rat("1/2")).is_err());
    }
}

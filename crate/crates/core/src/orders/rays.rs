//! An order on the Pascal diagram with continuum many minimal and maximal
//! paths, built from a family of guide paths that hug the rays of dyadic
//! directions.
//!
//! Guide paths `C_r` are constructed level by dyadic level: `C_0` is the
//! x-axis side of the triangle, and each refinement `C_{r + 1/2^k}` starts on
//! `C_r` inside the half-plane `x + y >= M` and then greedily follows the ray
//! of angle `(r + 1/2^k) * pi/2`, always stepping to the closer of the two
//! downward neighbors. The union of the guides below direction 1/4 is shifted
//! right and labeled 0; its mirror image across `y = x` is shifted up and
//! labeled 1; the remaining fibers are filled canonically.

use std::collections::{HashMap, HashSet};
use std::f64::consts::FRAC_PI_2;

use num::rational::Ratio;

use crate::diagram::{Diagram, Edge, Vertex};
use crate::error::{Error, Result};

use super::{FillSide, OrderAssignment};

/// Float comparisons against the irrational ray geometry; ties below this
/// threshold fall back to the deterministic tie-break.
const TIE_EPS: f64 = 1e-12;

/// A dyadic rational `num / 2^log_den` in `[0, 1)`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: u64,
    log_den: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { num: 0, log_den: 0 }
    }

    pub fn new(num: u64, log_den: u32) -> Self {
        let mut d = Dyadic { num, log_den };
        while d.log_den > 0 && d.num % 2 == 0 {
            d.num /= 2;
            d.log_den -= 1;
        }
        if d.num == 0 {
            d.log_den = 0;
        }
        d
    }

    /// `self + 1/2^k`; requires `k >= log_den`.
    pub fn plus_pow2(self, k: u32) -> Self {
        assert!(k >= self.log_den);
        Dyadic::new((self.num << (k - self.log_den)) | 1, k)
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / (1u64 << self.log_den) as f64
    }

    pub fn log_den(&self) -> u32 {
        self.log_den
    }

    pub fn as_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.num, 1u64 << self.log_den)
    }
}

impl std::fmt::Display for Dyadic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, 1u64 << self.log_den)
    }
}

/// One constructed guide path `C_r`.
#[derive(Debug, Clone)]
pub struct GuidePath {
    pub r: Dyadic,
    /// Lattice points `(x, y)` along consecutive levels, from the start
    /// vertex down to the constructed depth.
    pub vertices: Vec<(i64, i64)>,
    /// First level after which the observed distance to the ray `L_r` stays
    /// below 2 within the constructed depth.
    pub stabilization_level: u32,
}

impl GuidePath {
    pub fn start(&self) -> (i64, i64) {
        self.vertices[0]
    }

    pub fn edges(&self) -> impl Iterator<Item = ((i64, i64), (i64, i64))> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }
}

fn angle(r: &Dyadic) -> f64 {
    r.value() * FRAC_PI_2
}

/// Distance from a lattice point to the full line through the ray `L_r`.
fn dist_to_ray_line(p: (i64, i64), theta: f64) -> f64 {
    (p.0 as f64 * theta.sin() - p.1 as f64 * theta.cos()).abs()
}

/// Distance from a lattice point to the part of `L_r` inside the half-plane
/// `x + y >= m`.
fn dist_to_ray_in_halfplane(p: (i64, i64), theta: f64, m: i64) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    let t = p.0 as f64 * c + p.1 as f64 * s;
    if t * (c + s) >= m as f64 {
        dist_to_ray_line(p, theta)
    } else {
        let scale = m as f64 / (c + s);
        let q = (scale * c, scale * s);
        ((p.0 as f64 - q.0).powi(2) + (p.1 as f64 - q.1).powi(2)).sqrt()
    }
}

/// The ray-guided order together with its construction witnesses.
#[derive(Debug, Clone)]
pub struct RayGuidedOrder {
    pub order: OrderAssignment,
    pub guides: Vec<GuidePath>,
    /// Shift applied to the guide union and its mirror before labeling.
    pub shift: i64,
    /// Smallest observed separation `d(C_t cap H_M, L_{r'} cap H_M)` across
    /// all induction steps; the construction requires it to stay >= 5.
    pub min_separation: f64,
    by_direction: HashMap<Dyadic, usize>,
}

impl RayGuidedOrder {
    pub fn guide(&self, r: Dyadic) -> Option<&GuidePath> {
        self.by_direction.get(&r).map(|&i| &self.guides[i])
    }

    /// Every pair of guide paths shares at most one vertex.
    pub fn pairwise_intersections_ok(&self) -> bool {
        let sets: Vec<HashSet<(i64, i64)>> = self
            .guides
            .iter()
            .map(|g| g.vertices.iter().copied().collect())
            .collect();
        for a in 0..sets.len() {
            for b in a + 1..sets.len() {
                if sets[a].intersection(&sets[b]).count() > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Every guide stays strictly inside the 2-band of its ray past its
    /// stabilization level.
    pub fn band_condition_ok(&self) -> bool {
        self.guides.iter().all(|g| {
            let theta = angle(&g.r);
            g.vertices
                .iter()
                .filter(|&&(x, y)| x + y >= g.stabilization_level as i64)
                .all(|&p| dist_to_ray_line(p, theta) < 2.0)
        })
    }

    /// The guide union is a tree: no vertex has two incoming guide edges.
    pub fn tree_ok(&self) -> bool {
        let mut incoming: HashMap<(i64, i64), HashSet<(i64, i64)>> = HashMap::new();
        for g in &self.guides {
            for (u, v) in g.edges() {
                incoming.entry(v).or_default().insert(u);
            }
        }
        incoming.values().all(|srcs| srcs.len() <= 1)
    }

    /// The shifted guide union and its shifted mirror image share no vertex
    /// within the constructed depth.
    pub fn shifted_copies_disjoint(&self) -> bool {
        let depth = self.order.diagram().depth() as i64;
        let mut plus: HashSet<(i64, i64)> = HashSet::new();
        for g in self.gamma_prime_guides() {
            for &(x, y) in &g.vertices {
                if x + y + self.shift <= depth {
                    plus.insert((x + self.shift, y));
                }
            }
        }
        for g in self.gamma_prime_guides() {
            for &(x, y) in &g.vertices {
                if x + y + self.shift <= depth && plus.contains(&(y, x + self.shift)) {
                    return false;
                }
            }
        }
        true
    }

    /// Guides whose direction is below 1/4, i.e. the union forming the
    /// minimal-path tree before the shift.
    pub fn gamma_prime_guides(&self) -> impl Iterator<Item = &GuidePath> {
        self.guides.iter().filter(|g| 4 * g.r.num < (1u64 << g.r.log_den) || g.r.num == 0)
    }
}

/// Builds one refinement guide `C_{r'}` from its parent guide.
fn refine_guide(
    parent: &GuidePath,
    r_new: Dyadic,
    m: i64,
    depth: u32,
) -> Result<GuidePath> {
    let theta = angle(&r_new);
    // start vertex: the point of the parent past level M closest to the ray;
    // ties break to the lowest level (scan order) per the recorded choice.
    let mut best: Option<((i64, i64), f64)> = None;
    for &p in parent.vertices.iter().filter(|&&(x, y)| x + y >= m) {
        let d = dist_to_ray_line(p, theta);
        match best {
            Some((_, bd)) if d >= bd - TIE_EPS => {}
            _ => best = Some((p, d)),
        }
    }
    let (start, _) = best.ok_or_else(|| Error::Invalid(format!(
        "parent guide {} has no vertex past level {m} within depth {depth}",
        parent.r
    )))?;

    let mut vertices = vec![start];
    let mut cur = start;
    while cur.0 + cur.1 < depth as i64 {
        let right = (cur.0 + 1, cur.1);
        let up = (cur.0, cur.1 + 1);
        let (dr, du) = (dist_to_ray_line(right, theta), dist_to_ray_line(up, theta));
        // exact tie-break: prefer the step that does not increase x
        cur = if (dr - du).abs() < TIE_EPS || du < dr { up } else { right };
        vertices.push(cur);
    }

    // hugging and stabilization audit over the observed distances
    let ds: Vec<f64> = vertices.iter().map(|&p| dist_to_ray_line(p, theta)).collect();
    let mut entered_unit = false;
    for (i, &d) in ds.iter().enumerate() {
        if entered_unit && d > 1.0 + 1e-6 {
            return Err(Error::GreedyDrift {
                r: r_new.to_string(),
                level: (vertices[i].0 + vertices[i].1) as u32,
                distance: d,
            });
        }
        if d <= 1.0 + 1e-9 {
            entered_unit = true;
        }
    }
    let first_in = ds.iter().position(|&d| d < 2.0);
    let last_out = ds.iter().rposition(|&d| d >= 2.0);
    let stab_idx = match (first_in, last_out) {
        (Some(fi), Some(lo)) if lo > fi => {
            // the 2-band was re-exited after entry: the band is not absorbing
            return Err(Error::GreedyDrift {
                r: r_new.to_string(),
                level: (vertices[lo].0 + vertices[lo].1) as u32,
                distance: ds[lo],
            });
        }
        (Some(fi), _) => fi,
        (None, _) => {
            return Err(Error::GreedyDrift {
                r: r_new.to_string(),
                level: depth,
                distance: *ds.last().unwrap(),
            })
        }
    };
    let stabilization_level = (vertices[stab_idx].0 + vertices[stab_idx].1) as u32;
    Ok(GuidePath {
        r: r_new,
        vertices,
        stabilization_level,
    })
}

/// Builds the ray-guided order at the given depth, constructing guide paths
/// for all dyadic directions with denominator up to `2^max_dyadic_level`.
pub fn build_ray_guided_order(depth: u32, max_dyadic_level: u32) -> Result<RayGuidedOrder> {
    if max_dyadic_level >= 1 {
        let need = 1u64 << (max_dyadic_level + 5);
        if (depth as u64) < need {
            return Err(Error::Invalid(format!(
                "depth {depth} too small for max dyadic level {max_dyadic_level}; need >= {need}"
            )));
        }
    }

    let c0 = GuidePath {
        r: Dyadic::zero(),
        vertices: (0..=depth as i64).map(|x| (x, 0)).collect(),
        stabilization_level: 0,
    };
    let mut guides = vec![c0];
    let mut by_direction = HashMap::new();
    by_direction.insert(Dyadic::zero(), 0usize);
    let mut min_separation = f64::INFINITY;

    for k in 1..=max_dyadic_level {
        let m = guides
            .iter()
            .map(|g| g.stabilization_level as i64)
            .max()
            .unwrap()
            .max(1i64 << (k + 5));
        let existing = guides.len();
        for gi in 0..existing {
            let r_new = guides[gi].r.plus_pow2(k);
            let theta = angle(&r_new);
            // separation of every already-built guide from the new ray,
            // both restricted to the half-plane x + y >= M
            for g in guides.iter().take(existing) {
                let sep = g
                    .vertices
                    .iter()
                    .filter(|&&(x, y)| x + y >= m)
                    .map(|&p| dist_to_ray_in_halfplane(p, theta, m))
                    .fold(f64::INFINITY, f64::min);
                min_separation = min_separation.min(sep);
            }
            let guide = refine_guide(&guides[gi], r_new, m, depth)?;
            by_direction.insert(r_new, guides.len());
            guides.push(guide);
        }
    }

    // Gamma' = guides with direction < 1/4; its mirror across y = x is Gamma''.
    let gamma_prime: Vec<usize> = guides
        .iter()
        .enumerate()
        .filter(|(_, g)| g.r.value() < 0.25)
        .map(|(i, _)| i)
        .collect();

    // smallest shift keeping the shifted Gamma' strictly below y = x
    let depth_i = depth as i64;
    let mut shift = 1i64;
    loop {
        let ok = gamma_prime.iter().all(|&gi| {
            guides[gi]
                .vertices
                .iter()
                .filter(|&&(x, y)| x + y + shift <= depth_i)
                .all(|&(x, y)| y < x + shift)
        });
        if ok {
            break;
        }
        shift += 1;
        if shift > depth_i {
            return Err(Error::Invalid("no shift separates the guide copies".into()));
        }
    }

    let mut forced: HashMap<Edge, u8> = HashMap::new();
    let mut force = |edge: Edge, label: u8| -> Result<()> {
        match forced.insert(edge, label) {
            Some(prev) if prev != label => Err(Error::Consistency {
                index: edge.range.index,
                level: edge.range.level,
            }),
            _ => Ok(()),
        }
    };
    for &gi in &gamma_prime {
        for ((x0, y0), (x1, y1)) in guides[gi].edges() {
            // shifted Gamma' edge, labeled 0
            if x1 + y1 + shift <= depth_i {
                let e = Edge::new(
                    Vertex::pascal(x0 + shift, y0),
                    Vertex::pascal(x1 + shift, y1),
                );
                force(e, 0)?;
            }
            // mirrored, shifted Gamma'' edge, labeled 1 (y-axis edges are
            // labeled 0 automatically as single-edge fibers)
            if x1 + y1 + shift <= depth_i && !(y0 == 0 && y1 == 0) {
                let e = Edge::new(
                    Vertex::pascal(y0, x0 + shift),
                    Vertex::pascal(y1, x1 + shift),
                );
                force(e, 1)?;
            }
        }
    }

    let diagram = Diagram::pascal(depth);
    let order = OrderAssignment::from_forced(&diagram, forced, |_| FillSide::LowerZero)?;
    Ok(RayGuidedOrder {
        order,
        guides,
        shift,
        min_separation,
        by_direction,
    })
}

/// The vertex sequence of the direction path `C_r` for `r` in `[0, 1/4)`,
/// obtained by concatenating guide segments along the dyadic expansion of
/// `r` and truncating at the constructed depth.
pub fn direction_path(r: Ratio<u64>, built: &RayGuidedOrder, depth: u32) -> Result<Vec<(i64, i64)>> {
    if r >= Ratio::new(1, 4) {
        return Err(Error::Invalid(format!("direction {r} not in [0, 1/4)")));
    }
    if depth > built.order.diagram().depth() {
        return Err(Error::Invalid(format!(
            "query depth {depth} exceeds constructed depth"
        )));
    }
    // dyadic digits of r, restricted to positions whose guide could start
    // within the constructed depth
    let mut digits = Vec::new();
    let mut x = r;
    let mut n = 1u32;
    while x != Ratio::new(0, 1) && (1u64 << (n + 5)) <= depth as u64 {
        x = x * Ratio::new(2, 1);
        if x >= Ratio::new(1, 1) {
            x -= Ratio::new(1, 1);
            digits.push(n);
        }
        n += 1;
    }

    let mut partial = Dyadic::zero();
    let mut cur = built
        .guide(partial)
        .ok_or_else(|| Error::MissingGuide { r: "0/1".into() })?;
    let mut pos = 0usize;
    let mut out: Vec<(i64, i64)> = Vec::new();
    for d in digits {
        let next = partial.plus_pow2(d);
        let g = built
            .guide(next)
            .ok_or_else(|| Error::MissingGuide { r: next.to_string() })?;
        let w = g.start();
        // the start of the refinement lies on the current guide
        let cur_start = cur.start();
        let idx = ((w.0 + w.1) - (cur_start.0 + cur_start.1)) as usize;
        if cur.vertices.get(idx) != Some(&w) {
            return Err(Error::Invalid(format!(
                "guide {} does not start on guide {}",
                g.r, cur.r
            )));
        }
        out.extend_from_slice(&cur.vertices[pos..idx]);
        cur = g;
        pos = 0;
        partial = next;
    }
    out.extend_from_slice(&cur.vertices[pos..]);
    // guide vertices ascend one level per step, so this drops a suffix
    out.retain(|&(x, y)| x + y <= depth as i64);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_zero_is_left_side_only() {
        let built = build_ray_guided_order(16, 0).unwrap();
        assert_eq!(built.guides.len(), 1);
        assert!(built.guides[0].vertices.iter().all(|&(_, y)| y == 0));
        built.order.audit_fiber_consistency().unwrap();
    }

    #[test]
    fn half_guide_hugs_diagonal() {
        let built = build_ray_guided_order(512, 1).unwrap();
        let half = built.guide(Dyadic::new(1, 1)).unwrap();
        // starts on C_0 at level >= 64 (this step uses M = 2^6)
        let (x0, y0) = half.start();
        assert_eq!(y0, 0);
        assert!(x0 >= 64);
        // past stabilization its vertices stay within distance 2 of y = x,
        // i.e. |x - y| < 2 sqrt(2)
        for &(x, y) in half
            .vertices
            .iter()
            .filter(|&&(x, y)| x + y >= half.stabilization_level as i64)
        {
            assert!(((x - y).abs() as f64) / std::f64::consts::SQRT_2 < 2.0);
        }
        assert!(built.pairwise_intersections_ok());
        assert!(built.band_condition_ok());
        assert!(built.tree_ok());
        assert!(built.min_separation >= 5.0);
        assert!(built.shifted_copies_disjoint());
    }

    #[test]
    fn direction_path_zero_is_left_side() {
        let built = build_ray_guided_order(128, 1).unwrap();
        let path = direction_path(Ratio::new(0, 1), &built, 128).unwrap();
        assert_eq!(path.len(), 129);
        assert!(path.iter().all(|&(_, y)| y == 0));
    }

    #[test]
    fn direction_path_dyadic_follows_guides() {
        // dyadic level 3 needs roughly 2^10 levels before the steepest new
        // guides re-enter their 2-bands
        let built = build_ray_guided_order(1024, 3).unwrap();
        let eighth = built.guide(Dyadic::new(1, 3)).unwrap();
        let path = direction_path(Ratio::new(1, 8), &built, 1024).unwrap();
        // concatenation oracle: C_0 up to the start of C_{1/8}, then C_{1/8}
        let switch = eighth.start();
        let mut expected: Vec<(i64, i64)> = (0..switch.0).map(|x| (x, 0)).collect();
        expected.extend_from_slice(&eighth.vertices);
        assert_eq!(path, expected);
    }

    #[test]
    fn direction_paths_share_prefix_until_first_differing_digit() {
        let built = build_ray_guided_order(1024, 3).unwrap();
        // 1/8 + tiny tail vs 1/8 + different tiny tail: both expand with
        // leading digit 3, and the later digits are beyond the constructed
        // guides, so the paths agree with C_{1/8} from its start on
        let a = direction_path(Ratio::new(1754, 14029), &built, 1024).unwrap(); // ~0.12503..
        let b = direction_path(Ratio::new(1251, 10000), &built, 1024).unwrap();
        assert_eq!(a, b);
        // at query depth 400 only digit positions up to 3 can matter, so the
        // 1/16 path (first digit at position 4) is still the base guide C_0
        let c = direction_path(Ratio::new(1, 16), &built, 400).unwrap();
        assert!(c.iter().all(|&(_, y)| y == 0));
        // it differs from the 1/8-family paths once those switch guides
        let common = a.iter().zip(&c).take_while(|(p, q)| p == q).count();
        assert!(common > 0 && common < c.len());
    }

    #[test]
    fn depth_precondition() {
        assert!(matches!(build_ray_guided_order(32, 1), Err(Error::Invalid(_))));
    }
}

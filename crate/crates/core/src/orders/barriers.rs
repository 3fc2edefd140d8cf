//! The barrier order on the two-sided generalized diagram: staircase edge
//! sets `S(n, i)` that every path from the level-0 vertex `n` must cross,
//! labeled `i`, so that no infinite path stays minimal or maximal.

use std::collections::HashMap;

use crate::diagram::{Diagram, DiagramKind, Edge, Vertex};
use crate::error::{Error, Result};

use super::{FillSide, OrderAssignment};

/// The staircase edge set `S(n, i)` with `K = 3^{G(n, i)}`: a vertical run
/// pinned to the start column and a diagonal run one column past it.
#[derive(Debug, Clone)]
pub struct BarrierSet {
    pub n: i64,
    pub i: u8,
    pub g: u32,
    pub k: i64,
    pub edges: Vec<Edge>,
}

impl BarrierSet {
    /// Builds `S(n, i)` for `K = 3^g`. Edges run between levels `K` and
    /// `2K + 2`.
    pub fn new(n: i64, i: u8, g: u32) -> Self {
        let k = 3i64.pow(g);
        let mut edges = Vec::with_capacity(2 * (k as usize + 1));
        for l in 0..=k {
            edges.push(Edge::new(
                Vertex::new(l + n, (k + l) as u32),
                Vertex::new(l + n, (k + l + 1) as u32),
            ));
        }
        for l in 0..=k {
            edges.push(Edge::new(
                Vertex::new(k + n, (k + l) as u32),
                Vertex::new(k + n + 1, (k + l + 1) as u32),
            ));
        }
        BarrierSet { n, i, g, k, edges }
    }

    /// Deepest level touched by the set.
    pub fn max_level(&self) -> u32 {
        (2 * self.k + 2) as u32
    }
}

/// Default injective map G: `G(n, i) = 2 * zigzag(n) + i + 1` where zigzag
/// enumerates 0, 1, -1, 2, -2, ... as 0, 1, 2, 3, 4, ...
pub fn default_g(n: i64, i: u8) -> u32 {
    let zigzag = match n {
        0 => 0,
        n if n > 0 => 2 * n as u32 - 1,
        n => (-2 * n) as u32,
    };
    2 * zigzag + i as u32 + 1
}

/// The barrier order together with the sets it was built from.
#[derive(Debug, Clone)]
pub struct BarrierOrder {
    pub order: OrderAssignment,
    pub barriers: Vec<BarrierSet>,
}

impl BarrierOrder {
    pub fn barrier(&self, n: i64, i: u8) -> Option<&BarrierSet> {
        self.barriers.iter().find(|b| b.n == n && b.i == i)
    }
}

/// Builds the barrier order on a two-sided diagram: every `(n, i)` in the
/// table with `3^{G(n,i)} <= depth/2 - 1` gets its staircase labeled `i`;
/// remaining fibers are filled canonically.
pub fn build_barrier_order(
    diagram: &Diagram,
    g_table: &[((i64, u8), u32)],
) -> Result<BarrierOrder> {
    if diagram.kind() != DiagramKind::GenTwoSided {
        return Err(Error::Invalid("barrier order needs a two-sided diagram".into()));
    }
    let mut seen_g: HashMap<u32, (i64, u8)> = HashMap::new();
    for &((n, i), g) in g_table {
        if let Some(prev) = seen_g.insert(g, (n, i)) {
            if prev != (n, i) {
                return Err(Error::Injectivity { value: g });
            }
        }
    }

    let (lo, hi) = diagram.window();
    let mut barriers = Vec::new();
    let mut forced: HashMap<Edge, u8> = HashMap::new();
    let mut owner: HashMap<Edge, (i64, u8)> = HashMap::new();
    for &((n, i), g) in g_table {
        let b = BarrierSet::new(n, i, g);
        if b.max_level() > diagram.depth() {
            continue; // deeper than the constructed region; not built
        }
        // every touched index, and the left parent of every range vertex,
        // must lie inside the window
        if n - 1 < lo || b.k + n + 1 > hi {
            return Err(Error::OutOfWindow {
                index: if n - 1 < lo { n - 1 } else { b.k + n + 1 },
                level: b.max_level(),
            });
        }
        for &e in &b.edges {
            if let Some(other) = owner.insert(e, (n, i)) {
                if other != (n, i) {
                    // two staircases share an edge: the disjointness the
                    // construction relies on has failed
                    return Err(Error::Consistency {
                        index: e.range.index,
                        level: e.range.level,
                    });
                }
            }
            if let Some(prev) = forced.insert(e, i) {
                if prev != i {
                    return Err(Error::Consistency {
                        index: e.range.index,
                        level: e.range.level,
                    });
                }
            }
        }
        barriers.push(b);
    }

    let order = OrderAssignment::from_forced(diagram, forced, |_| FillSide::LowerZero)?;
    Ok(BarrierOrder { order, barriers })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barrier_edges_match_template() {
        let b = BarrierSet::new(0, 0, 1); // K = 3
        let vertical: Vec<Edge> = b.edges[..4].to_vec();
        let diagonal: Vec<Edge> = b.edges[4..].to_vec();
        let v = |idx: i64, lvl: u32| Vertex::new(idx, lvl);
        assert_eq!(
            vertical,
            vec![
                Edge::new(v(0, 3), v(0, 4)),
                Edge::new(v(1, 4), v(1, 5)),
                Edge::new(v(2, 5), v(2, 6)),
                Edge::new(v(3, 6), v(3, 7)),
            ]
        );
        assert_eq!(
            diagonal,
            vec![
                Edge::new(v(3, 3), v(4, 4)),
                Edge::new(v(3, 4), v(4, 5)),
                Edge::new(v(3, 5), v(4, 6)),
                Edge::new(v(3, 6), v(4, 7)),
            ]
        );
    }

    #[test]
    fn two_barriers_disjoint_levels() {
        let d = Diagram::gen_two_sided(40, -4, 24).unwrap();
        let built =
            build_barrier_order(&d, &[((0, 0), 1), ((0, 1), 2)]).unwrap();
        assert_eq!(built.barriers.len(), 2);
        built.order.audit_fiber_consistency().unwrap();
        let b0 = built.barrier(0, 0).unwrap();
        let b1 = built.barrier(0, 1).unwrap();
        // K = 3 occupies levels [3, 7], K = 9 occupies [9, 19]
        assert_eq!(b0.edges.iter().map(|e| e.source.level).min(), Some(3));
        assert_eq!(b0.edges.iter().map(|e| e.range.level).max(), Some(7));
        assert_eq!(b1.edges.iter().map(|e| e.source.level).min(), Some(9));
        assert_eq!(b1.edges.iter().map(|e| e.range.level).max(), Some(19));
        let s0: std::collections::HashSet<_> = b0.edges.iter().collect();
        assert!(b1.edges.iter().all(|e| !s0.contains(e)));
        // edges labeled with their i
        for e in &b0.edges {
            assert_eq!(built.order.label(e), Some(0));
        }
        for e in &b1.edges {
            assert_eq!(built.order.label(e), Some(1));
        }
    }

    #[test]
    fn window_too_small_errors() {
        let d = Diagram::gen_two_sided(40, -4, 6).unwrap();
        assert!(matches!(
            build_barrier_order(&d, &[((0, 1), 2)]),
            Err(Error::OutOfWindow { .. })
        ));
    }

    #[test]
    fn g_injectivity_enforced() {
        let d = Diagram::gen_two_sided(40, -8, 24).unwrap();
        assert!(matches!(
            build_barrier_order(&d, &[((0, 0), 1), ((1, 0), 1)]),
            Err(Error::Injectivity { value: 1 })
        ));
    }

    #[test]
    fn default_g_is_injective_on_a_range() {
        let mut seen = std::collections::HashSet::new();
        for n in -20..=20i64 {
            for i in 0..=1u8 {
                assert!(seen.insert(default_g(n, i)), "repeat at ({n},{i})");
            }
        }
    }
}

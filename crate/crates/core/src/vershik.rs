//! The Vershik successor map on finite paths: replace the first non-maximal
//! edge by its fiber successor and reset the prefix to the minimal path.
//! Includes the dual predecessor, tower (orbit) enumeration over a vertex,
//! and the barrier-crossing dynamic program for the two-sided order.

use std::collections::HashSet;

use num::BigUint;

use crate::diagram::{Diagram, Edge, FinitePath, Vertex};
use crate::error::{Error, Result};
use crate::orders::{ExtremeKind, OrderAssignment};

/// Result of one successor step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuccessorResult {
    Next(FinitePath),
    /// Every edge is maximal through the path's last level. At finite depth
    /// this does not distinguish a truly maximal infinite path from one that
    /// extends non-maximally deeper.
    MaximalAtDepth,
}

/// Result of one predecessor step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredecessorResult {
    Prev(FinitePath),
    MinimalAtDepth,
}

fn fiber_sibling(order: &OrderAssignment, edge: &Edge) -> Result<Option<Edge>> {
    let fiber = order.fiber(edge.range)?;
    Ok(fiber
        .iter()
        .map(|(e, _)| *e)
        .find(|e| e != edge))
}

/// The successor of `path`: the smallest `k` with a non-maximal edge is
/// advanced to its fiber successor and the prefix below it is reset to the
/// all-minimal path.
pub fn successor(order: &OrderAssignment, path: &FinitePath) -> Result<SuccessorResult> {
    for (k, edge) in path.edges().iter().enumerate() {
        if !order.is_maximal(edge)? {
            let next_edge = fiber_sibling(order, edge)?.expect("non-maximal edge has a sibling");
            let mut edges = order
                .extreme_finite_path(next_edge.source, ExtremeKind::Min)?
                .edges()
                .to_vec();
            edges.push(next_edge);
            edges.extend_from_slice(&path.edges()[k + 1..]);
            return Ok(SuccessorResult::Next(FinitePath::new(edges)?));
        }
    }
    Ok(SuccessorResult::MaximalAtDepth)
}

/// The predecessor of `path`: dual of [`successor`].
pub fn predecessor(order: &OrderAssignment, path: &FinitePath) -> Result<PredecessorResult> {
    for (k, edge) in path.edges().iter().enumerate() {
        if !order.is_minimal(edge)? {
            let prev_edge = fiber_sibling(order, edge)?.expect("non-minimal edge has a sibling");
            let mut edges = order
                .extreme_finite_path(prev_edge.source, ExtremeKind::Max)?
                .edges()
                .to_vec();
            edges.push(prev_edge);
            edges.extend_from_slice(&path.edges()[k + 1..]);
            return Ok(PredecessorResult::Prev(FinitePath::new(edges)?));
        }
    }
    Ok(PredecessorResult::MinimalAtDepth)
}

/// The full successor chain over the fiber of `v`, from the minimal path to
/// the maximal one. Its length equals the path count of `v`.
pub fn fiber_orbit(order: &OrderAssignment, v: Vertex, cap: u64) -> Result<Vec<FinitePath>> {
    let count = order.diagram().path_count(v)?;
    if count > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            count: count.to_string(),
            cap,
        });
    }
    let bound = count
        .to_u64_digits()
        .first()
        .copied()
        .unwrap_or(0);
    let mut chain = Vec::with_capacity(bound as usize);
    let mut cur = order.extreme_finite_path(v, ExtremeKind::Min)?;
    loop {
        chain.push(cur.clone());
        if chain.len() as u64 > bound {
            return Err(Error::Cycle {
                step: chain.len() as u64,
            });
        }
        match successor(order, &cur)? {
            SuccessorResult::Next(next) => cur = next,
            SuccessorResult::MaximalAtDepth => break,
        }
    }
    Ok(chain)
}

/// Decides whether every path from the level-0 vertex `start` down to
/// `levels` crosses one of the `barrier` edges, in O(levels^2) states.
/// Returns `None` when every path hits the barrier, otherwise an avoiding
/// witness path.
pub fn barrier_avoider(
    diagram: &Diagram,
    barrier: &HashSet<Edge>,
    start: i64,
    levels: u32,
) -> Result<Option<FinitePath>> {
    if levels > diagram.depth() {
        return Err(Error::OutOfWindow {
            index: start,
            level: levels,
        });
    }
    let v0 = Vertex::new(start, 0);
    if !diagram.contains(v0) {
        return Err(Error::OutOfWindow {
            index: start,
            level: 0,
        });
    }
    // per level: reachable-avoiding vertices with a back-pointer
    let mut frontier: Vec<(Vertex, Option<Edge>)> = vec![(v0, None)];
    let mut trail: Vec<Vec<(Vertex, Option<Edge>)>> = vec![frontier.clone()];
    for _ in 0..levels {
        let mut next: Vec<(Vertex, Option<Edge>)> = Vec::new();
        let mut seen: HashSet<Vertex> = HashSet::new();
        for &(v, _) in &frontier {
            let children = diagram.children(v)?;
            if children.len() < 2 {
                // a clipped child set would hide escape routes
                return Err(Error::OutOfWindow {
                    index: v.index + 1,
                    level: v.level + 1,
                });
            }
            for e in children {
                if !barrier.contains(&e) && seen.insert(e.range) {
                    next.push((e.range, Some(e)));
                }
            }
        }
        if next.is_empty() {
            return Ok(None);
        }
        trail.push(next.clone());
        frontier = next;
    }
    // reconstruct one avoiding path
    let mut back = frontier[0].1;
    let mut edges = Vec::new();
    let mut level = levels as usize;
    while let Some(e) = back {
        edges.push(e);
        level -= 1;
        back = trail[level]
            .iter()
            .find(|(w, _)| *w == e.source)
            .expect("back-pointer chain is complete")
            .1;
    }
    edges.reverse();
    Ok(Some(FinitePath::new(edges)?))
}

/// True iff every path of the given depth from `start` crosses the barrier.
pub fn barrier_hit_dp(
    diagram: &Diagram,
    barrier: &HashSet<Edge>,
    start: i64,
    levels: u32,
) -> Result<bool> {
    Ok(barrier_avoider(diagram, barrier, start, levels)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Diagram;
    use crate::orders::{build_barrier_order, BarrierSet};

    fn canonical_pascal(depth: u32) -> (Diagram, OrderAssignment) {
        let d = Diagram::pascal(depth);
        let o = OrderAssignment::canonical(&d);
        (d, o)
    }

    #[test]
    fn successor_of_min_path_to_1_1() {
        let (_, order) = canonical_pascal(4);
        let min = order
            .extreme_finite_path(Vertex::pascal(1, 1), ExtremeKind::Min)
            .unwrap();
        // (0,0) -> (0,1) -> (1,1) steps up first under the canonical order
        assert_eq!(min.edges()[0].range.pascal_coords(), (0, 1));
        match successor(&order, &min).unwrap() {
            SuccessorResult::Next(p) => {
                assert_eq!(p.edges()[0].range.pascal_coords(), (1, 0));
                assert_eq!(p.end(), Some(Vertex::pascal(1, 1)));
            }
            SuccessorResult::MaximalAtDepth => panic!("min path has a successor"),
        }
    }

    #[test]
    fn maximal_path_has_no_successor() {
        let (_, order) = canonical_pascal(5);
        let max = order
            .extreme_finite_path(Vertex::pascal(3, 2), ExtremeKind::Max)
            .unwrap();
        assert_eq!(successor(&order, &max).unwrap(), SuccessorResult::MaximalAtDepth);
        let min = order
            .extreme_finite_path(Vertex::pascal(3, 2), ExtremeKind::Min)
            .unwrap();
        assert_eq!(
            predecessor(&order, &min).unwrap(),
            PredecessorResult::MinimalAtDepth
        );
    }

    #[test]
    fn successor_predecessor_roundtrip_depth_6() {
        let (d, order) = canonical_pascal(6);
        for v in d.vertices_at_level(6).collect::<Vec<_>>() {
            for p in d.enumerate_paths(v, 1000).unwrap() {
                match successor(&order, &p).unwrap() {
                    SuccessorResult::Next(next) => {
                        assert_eq!(next.end(), p.end());
                        match predecessor(&order, &next).unwrap() {
                            PredecessorResult::Prev(back) => assert_eq!(back, p),
                            _ => panic!("successor image has a predecessor"),
                        }
                    }
                    SuccessorResult::MaximalAtDepth => {}
                }
            }
        }
    }

    #[test]
    fn orbit_covers_all_paths() {
        let (d, order) = canonical_pascal(8);
        let v = Vertex::pascal(2, 2);
        let orbit = fiber_orbit(&order, v, 10_000).unwrap();
        assert_eq!(orbit.len(), 6); // C(4,2)
        let all: std::collections::HashSet<_> =
            d.enumerate_paths(v, 10_000).unwrap().into_iter().collect();
        let seen: std::collections::HashSet<_> = orbit.into_iter().collect();
        assert_eq!(all, seen);
    }

    #[test]
    fn orbit_of_unique_path_has_length_one() {
        let d = Diagram::gen_one_sided(6, 12).unwrap();
        let order = OrderAssignment::canonical(&d);
        let orbit = fiber_orbit(&order, Vertex::new(1, 6), 100).unwrap();
        assert_eq!(orbit.len(), 1);
    }

    #[test]
    fn barrier_dp_matches_exhaustive_for_k3() {
        let d = Diagram::gen_two_sided(20, -4, 16).unwrap();
        let built = build_barrier_order(&d, &[((0, 0), 1)]).unwrap();
        let barrier: HashSet<Edge> = built.barrier(0, 0).unwrap().edges.iter().copied().collect();
        let dp = barrier_hit_dp(&d, &barrier, 0, 8).unwrap();
        // exhaustive oracle over all 2^8 edge choices
        let mut all_hit = true;
        for mask in 0..(1u32 << 8) {
            let mut idx = 0i64;
            let mut hit = false;
            for level in 0..8u32 {
                let step = (mask >> level) & 1;
                let next = idx + step as i64;
                let e = Edge::new(Vertex::new(idx, level), Vertex::new(next, level + 1));
                if barrier.contains(&e) {
                    hit = true;
                }
                idx = next;
            }
            if !hit {
                all_hit = false;
            }
        }
        assert_eq!(dp, all_hit);
        assert!(dp, "every path from 0 must hit S(0,0)");
    }

    #[test]
    fn corrupted_barrier_admits_avoider() {
        let d = Diagram::gen_two_sided(20, -4, 16).unwrap();
        let full = BarrierSet::new(0, 0, 1);
        let mut barrier: HashSet<Edge> = full.edges.iter().copied().collect();
        // remove one vertical edge: the slot admits escape
        barrier.remove(&full.edges[1]);
        let avoider = barrier_avoider(&d, &barrier, 0, 8).unwrap();
        let w = avoider.expect("corrupted barrier must be avoidable");
        assert!(w.edges().iter().all(|e| !barrier.contains(e)));
    }
}

//! Depth-bounded realizations of the three diagram families: the standard
//! Pascal diagram, and the one-sided / two-sided stationary generalized
//! diagrams whose incidence matrices have 1s on the main diagonal and the
//! subdiagonal.
//!
//! Vertices of every family are addressed uniformly as `(index, level)`.
//! For the Pascal diagram the index is the horizontal coordinate `i` of the
//! lattice point `(i, j)` with `i + j = level`.

use num::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex of a diagram: `index` within its level, plus the level itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub index: i64,
    pub level: u32,
}

impl Vertex {
    pub fn new(index: i64, level: u32) -> Self {
        Vertex { index, level }
    }

    /// Pascal lattice point `(i, j)`, living at level `i + j`.
    pub fn pascal(i: i64, j: i64) -> Self {
        debug_assert!(i >= 0 && j >= 0);
        Vertex {
            index: i,
            level: (i + j) as u32,
        }
    }

    /// The `(i, j)` coordinates of a Pascal vertex.
    pub fn pascal_coords(&self) -> (i64, i64) {
        (self.index, self.level as i64 - self.index)
    }
}

/// An edge between consecutive levels. Incidence entries in all three
/// families are 0 or 1, so `(source, range)` identifies the edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub source: Vertex,
    pub range: Vertex,
}

impl Edge {
    pub fn new(source: Vertex, range: Vertex) -> Self {
        debug_assert_eq!(range.level, source.level + 1);
        Edge { source, range }
    }
}

/// An edge sequence from level 0 up to some vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePath {
    edges: Vec<Edge>,
}

impl FinitePath {
    /// Builds a path, validating incidence and that it starts at level 0.
    pub fn new(edges: Vec<Edge>) -> Result<Self> {
        if let Some(first) = edges.first() {
            if first.source.level != 0 {
                return Err(Error::Invalid("path must start at level 0".into()));
            }
        }
        for pair in edges.windows(2) {
            if pair[0].range != pair[1].source {
                return Err(Error::Invalid(format!(
                    "non-incident edges at level {}",
                    pair[0].range.level
                )));
            }
        }
        Ok(FinitePath { edges })
    }

    /// Builds the path through the given vertex sequence (consecutive levels).
    pub fn through(vertices: &[Vertex]) -> Result<Self> {
        let edges = vertices
            .windows(2)
            .map(|w| Edge::new(w[0], w[1]))
            .collect();
        FinitePath::new(edges)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The level-0 vertex the path starts at.
    pub fn start(&self) -> Option<Vertex> {
        self.edges.first().map(|e| e.source)
    }

    /// The endpoint vertex at the deepest level.
    pub fn end(&self) -> Option<Vertex> {
        self.edges.last().map(|e| e.range)
    }
}

/// Which of the three diagram families this is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagramKind {
    /// Vertices `(i, j)`, `i, j >= 0`, level `i + j`.
    PascalStandard,
    /// One-sided generalized diagram, vertex indices in `{1, 2, 3, ...}`.
    GenOneSided,
    /// Two-sided generalized diagram, vertex indices in `Z`, realized on a
    /// finite window.
    GenTwoSided,
}

/// Default cap for exhaustive path enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// A depth-bounded diagram. All values are immutable after construction and
/// every operation is a pure function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    kind: DiagramKind,
    depth: u32,
    /// Index window per level. Pascal: `[0, level]` (stored as `[0, depth]`).
    /// One-sided: `[1, hi]`. Two-sided: `[lo, hi]` as supplied.
    window: (i64, i64),
}

impl Diagram {
    pub fn pascal(depth: u32) -> Self {
        Diagram {
            kind: DiagramKind::PascalStandard,
            depth,
            window: (0, depth as i64),
        }
    }

    /// One-sided generalized diagram with indices `1..=max_index`.
    pub fn gen_one_sided(depth: u32, max_index: i64) -> Result<Self> {
        if max_index < 1 {
            return Err(Error::Invalid("one-sided max_index must be >= 1".into()));
        }
        Ok(Diagram {
            kind: DiagramKind::GenOneSided,
            depth,
            window: (1, max_index),
        })
    }

    /// Two-sided generalized diagram on the index window `[lo, hi]`.
    pub fn gen_two_sided(depth: u32, lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Invalid("empty two-sided window".into()));
        }
        Ok(Diagram {
            kind: DiagramKind::GenTwoSided,
            depth,
            window: (lo, hi),
        })
    }

    pub fn kind(&self) -> DiagramKind {
        self.kind
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    /// Valid index range at a level.
    pub fn index_range(&self, level: u32) -> (i64, i64) {
        match self.kind {
            DiagramKind::PascalStandard => (0, level as i64),
            DiagramKind::GenOneSided | DiagramKind::GenTwoSided => self.window,
        }
    }

    /// Whether the vertex lies in the constructed region.
    pub fn contains(&self, v: Vertex) -> bool {
        if v.level > self.depth {
            return false;
        }
        let (lo, hi) = self.index_range(v.level);
        lo <= v.index && v.index <= hi
    }

    fn check_contains(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::OutOfWindow {
                index: v.index,
                level: v.level,
            })
        }
    }

    /// All vertices of a level, lowest index first.
    pub fn vertices_at_level(&self, level: u32) -> impl Iterator<Item = Vertex> + '_ {
        let (lo, hi) = self.index_range(level);
        (lo..=hi).map(move |i| Vertex::new(i, level))
    }

    /// Vertices at a level whose full parent fiber lies inside the window —
    /// the vertices an order assignment labels. For the two-sided diagram the
    /// lowest window index is excluded (its left parent is outside).
    pub fn fiber_vertices_at_level(&self, level: u32) -> impl Iterator<Item = Vertex> + '_ {
        let (lo, hi) = self.index_range(level);
        let lo = match self.kind {
            DiagramKind::GenTwoSided => lo + 1,
            _ => lo,
        };
        (lo..=hi).map(move |i| Vertex::new(i, level))
    }

    /// Incoming edges of `v`, lower source index first. Length 1 or 2.
    ///
    /// For the two-sided diagram, a potential parent outside the window is an
    /// `OutOfWindow` error rather than a silent truncation: the real diagram
    /// has that parent, so the fiber would be misreported.
    pub fn parents(&self, v: Vertex) -> Result<Vec<Edge>> {
        self.check_contains(v)?;
        if v.level == 0 {
            return Ok(Vec::new());
        }
        let up = v.level - 1;
        let candidates = [v.index - 1, v.index];
        let mut out = Vec::with_capacity(2);
        for &i in &candidates {
            let u = Vertex::new(i, up);
            match self.kind {
                DiagramKind::PascalStandard | DiagramKind::GenOneSided => {
                    let (lo, hi) = self.index_range(up);
                    if lo <= i && i <= hi {
                        out.push(Edge::new(u, v));
                    }
                }
                DiagramKind::GenTwoSided => {
                    if !self.contains(u) {
                        return Err(Error::OutOfWindow {
                            index: i,
                            level: up,
                        });
                    }
                    out.push(Edge::new(u, v));
                }
            }
        }
        Ok(out)
    }

    /// Outgoing edges of `v`, lower range index first. Clipped at the window
    /// boundary for the generalized diagrams.
    pub fn children(&self, v: Vertex) -> Result<Vec<Edge>> {
        self.check_contains(v)?;
        if v.level == self.depth {
            return Ok(Vec::new());
        }
        let down = v.level + 1;
        let (lo, hi) = self.index_range(down);
        let mut out = Vec::with_capacity(2);
        for i in [v.index, v.index + 1] {
            if lo <= i && i <= hi {
                out.push(Edge::new(v, Vertex::new(i, down)));
            }
        }
        Ok(out)
    }

    /// Exact number of finite paths from level 0 to `v`, by the level-by-level
    /// recurrence `H_v = sum over parents H_u` with `H = 1` at level 0.
    pub fn path_count(&self, v: Vertex) -> Result<BigUint> {
        self.check_contains(v)?;
        // The contributing level-0 starts are indices v.index - v.level ..= v.index.
        // For the two-sided diagram they must all lie inside the window.
        if self.kind == DiagramKind::GenTwoSided && v.index - (v.level as i64) < self.window.0 {
            return Err(Error::OutOfWindow {
                index: v.index - v.level as i64,
                level: 0,
            });
        }
        let (lo0, hi0) = self.index_range(0);
        let lo = lo0.max(v.index - v.level as i64);
        // counts[k] = H at index lo + k of the current level; vertices outside
        // the level's index range keep count 0
        let width = (v.index - lo + 1) as usize;
        let mut counts = vec![BigUint::from(0u32); width];
        for (k, slot) in counts.iter_mut().enumerate() {
            let idx = lo + k as i64;
            if lo0 <= idx && idx <= hi0 {
                *slot = BigUint::from(1u32);
            }
        }
        for level in 1..=v.level {
            let (level_lo, level_hi) = self.index_range(level);
            let mut next = vec![BigUint::from(0u32); width];
            for k in 0..width {
                let idx = lo + k as i64;
                if idx < level_lo || idx > level_hi {
                    continue;
                }
                let mut h = counts[k].clone();
                if k > 0 {
                    h += &counts[k - 1];
                }
                next[k] = h;
            }
            counts = next;
        }
        Ok(counts[width - 1].clone())
    }

    /// All finite paths from level 0 to `v`, by backward recursion taking
    /// parents in canonical order. Errors with `CapExceeded` if there are more
    /// than `cap` paths.
    pub fn enumerate_paths(&self, v: Vertex, cap: u64) -> Result<Vec<FinitePath>> {
        let count = self.path_count(v)?;
        if count > BigUint::from(cap) {
            return Err(Error::CapExceeded {
                count: count.to_string(),
                cap,
            });
        }
        let mut out = Vec::new();
        let mut stack: Vec<Edge> = Vec::new();
        self.collect_paths(v, &mut stack, &mut out)?;
        Ok(out)
    }

    fn collect_paths(
        &self,
        v: Vertex,
        stack: &mut Vec<Edge>,
        out: &mut Vec<FinitePath>,
    ) -> Result<()> {
        if v.level == 0 {
            let mut edges = stack.clone();
            edges.reverse();
            out.push(FinitePath { edges });
            return Ok(());
        }
        for edge in self.parents(v)? {
            stack.push(edge);
            self.collect_paths(edge.source, stack, out)?;
            stack.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigUint;

    /// Independent multiplicative binomial, the cross-check oracle for
    /// Pascal path counts.
    fn binomial(n: u64, k: u64) -> BigUint {
        let k = k.min(n - k.min(n));
        let mut acc = BigUint::from(1u32);
        for step in 0..k {
            acc = acc * BigUint::from(n - step) / BigUint::from(step + 1);
        }
        acc
    }

    #[test]
    fn pascal_parents_interior_and_boundary() {
        let d = Diagram::pascal(8);
        let ps = d.parents(Vertex::pascal(1, 1)).unwrap();
        assert_eq!(
            ps.iter().map(|e| e.source.pascal_coords()).collect::<Vec<_>>(),
            vec![(0, 1), (1, 0)]
        );
        let ps = d.parents(Vertex::pascal(0, 3)).unwrap();
        assert_eq!(
            ps.iter().map(|e| e.source.pascal_coords()).collect::<Vec<_>>(),
            vec![(0, 2)]
        );
    }

    #[test]
    fn one_sided_leftmost_vertex_has_one_parent() {
        let d = Diagram::gen_one_sided(8, 20).unwrap();
        let ps = d.parents(Vertex::new(1, 5)).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].source, Vertex::new(1, 4));
    }

    #[test]
    fn children_lowest_index_first() {
        let d = Diagram::pascal(8);
        let cs = d.children(Vertex::pascal(2, 0)).unwrap();
        assert_eq!(
            cs.iter().map(|e| e.range.pascal_coords()).collect::<Vec<_>>(),
            vec![(2, 1), (3, 0)]
        );

        let d2 = Diagram::gen_two_sided(4, -4, 4).unwrap();
        let cs = d2.children(Vertex::new(0, 0)).unwrap();
        assert_eq!(
            cs.iter().map(|e| e.range).collect::<Vec<_>>(),
            vec![Vertex::new(0, 1), Vertex::new(1, 1)]
        );

        let d1 = Diagram::gen_one_sided(4, 20).unwrap();
        let cs = d1.children(Vertex::new(4, 2)).unwrap();
        assert_eq!(
            cs.iter().map(|e| e.range).collect::<Vec<_>>(),
            vec![Vertex::new(4, 3), Vertex::new(5, 3)]
        );
    }

    #[test]
    fn two_sided_parent_outside_window_errors() {
        let d = Diagram::gen_two_sided(4, -2, 2).unwrap();
        assert!(matches!(
            d.parents(Vertex::new(-2, 1)),
            Err(Error::OutOfWindow { .. })
        ));
    }

    #[test]
    fn pascal_path_counts_are_binomials() {
        let d = Diagram::pascal(12);
        assert_eq!(d.path_count(Vertex::pascal(2, 1)).unwrap(), BigUint::from(3u32));
        for n in 0..=12u32 {
            for i in 0..=n as i64 {
                let v = Vertex::new(i, n);
                assert_eq!(d.path_count(v).unwrap(), binomial(n as u64, i as u64));
            }
        }
    }

    #[test]
    fn one_sided_path_counts() {
        let d = Diagram::gen_one_sided(30, 64).unwrap();
        // starts 1, 2, 3 contribute 1 + 2 + 1.
        assert_eq!(d.path_count(Vertex::new(3, 2)).unwrap(), BigUint::from(4u32));
        for n in 1..=30u32 {
            assert_eq!(d.path_count(Vertex::new(1, n)).unwrap(), BigUint::from(1u32));
        }
    }

    #[test]
    fn path_count_recurrence_self_consistency() {
        let d = Diagram::gen_one_sided(10, 16).unwrap();
        for level in 1..=10u32 {
            for v in d.vertices_at_level(level).collect::<Vec<_>>() {
                let total: BigUint = d
                    .parents(v)
                    .unwrap()
                    .iter()
                    .map(|e| d.path_count(e.source).unwrap())
                    .sum();
                assert_eq!(total, d.path_count(v).unwrap());
            }
        }
    }

    #[test]
    fn enumerate_matches_counts_no_duplicates() {
        let d = Diagram::pascal(10);
        for n in 0..=10u32 {
            for i in 0..=n as i64 {
                let v = Vertex::new(i, n);
                let paths = d.enumerate_paths(v, 1 << 20).unwrap();
                assert_eq!(
                    BigUint::from(paths.len()),
                    d.path_count(v).unwrap(),
                    "count mismatch at {v:?}"
                );
                for p in &paths {
                    if n > 0 {
                        assert_eq!(p.end(), Some(v));
                    } else {
                        assert!(p.is_empty());
                    }
                }
                let set: std::collections::HashSet<_> = paths.iter().collect();
                assert_eq!(set.len(), paths.len());
            }
        }
    }

    #[test]
    fn enumerate_two_sided_window() {
        let d = Diagram::gen_two_sided(4, -2, 2).unwrap();
        let paths = d.enumerate_paths(Vertex::new(0, 2), 100).unwrap();
        assert_eq!(paths.len(), 4);
    }

    #[test]
    fn enumerate_cap() {
        let d = Diagram::pascal(30);
        assert!(matches!(
            d.enumerate_paths(Vertex::pascal(15, 15), 10),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn parents_children_mutually_inverse() {
        let d = Diagram::pascal(8);
        for n in 0..8u32 {
            for v in d.vertices_at_level(n).collect::<Vec<_>>() {
                for e in d.children(v).unwrap() {
                    assert!(d.parents(e.range).unwrap().contains(&e));
                }
            }
        }
    }
}

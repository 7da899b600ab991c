use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::Grid;

type Vertex = (i64, i64);

/// A closed boundary curve. Vertices are consecutive unit steps, so the
/// loop length equals the vertex count. Outer loops run counter-clockwise
/// and holes clockwise; either way the grid lies to the left.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryLoop {
    pub vertices: Vec<Vertex>,
    pub outer: bool,
}

impl BoundaryLoop {
    pub fn len(&self) -> u64 {
        self.vertices.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertices with collinear unit steps merged.
    pub fn corners(&self) -> Vec<Vertex> {
        let n = self.vertices.len();
        (0..n)
            .filter(|&t| {
                let a = self.vertices[(t + n - 1) % n];
                let b = self.vertices[t];
                let c = self.vertices[(t + 1) % n];
                (b.0 - a.0, b.1 - a.1) != (c.0 - b.0, c.1 - b.1)
            })
            .map(|t| self.vertices[t])
            .collect()
    }

    /// Twice the signed area enclosed (positive for counter-clockwise).
    pub fn signed_area2(&self) -> i64 {
        let n = self.vertices.len();
        (0..n)
            .map(|t| {
                let (x0, y0) = self.vertices[t];
                let (x1, y1) = self.vertices[(t + 1) % n];
                x0 * y1 - x1 * y0
            })
            .sum()
    }
}

/// Traces every boundary edge into loops. At a vertex where two squares
/// meet only diagonally, the walk turns left so each square keeps its own
/// loop.
pub(super) fn trace(g: &Grid) -> Vec<BoundaryLoop> {
    let mut out_edges: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &(i, j) in g.squares() {
        if !g.has_square((i, j - 1)) {
            out_edges.entry((i, j)).or_default().push((i + 1, j));
        }
        if !g.has_square((i + 1, j)) {
            out_edges.entry((i + 1, j)).or_default().push((i + 1, j + 1));
        }
        if !g.has_square((i, j + 1)) {
            out_edges.entry((i + 1, j + 1)).or_default().push((i, j + 1));
        }
        if !g.has_square((i - 1, j)) {
            out_edges.entry((i, j + 1)).or_default().push((i, j));
        }
    }

    let mut used: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut loops = Vec::new();
    for (&start, targets) in &out_edges {
        for &first in targets {
            if used.contains(&(start, first)) {
                continue;
            }
            let mut vertices = Vec::new();
            let (mut prev, mut cur) = (start, first);
            loop {
                used.insert((prev, cur));
                vertices.push(prev);
                let next = next_vertex(&out_edges[&cur], prev, cur);
                if (cur, next) == (start, first) {
                    break;
                }
                prev = cur;
                cur = next;
            }
            let mut l = BoundaryLoop { vertices, outer: false };
            l.outer = l.signed_area2() > 0;
            loops.push(l);
        }
    }
    loops
}

// Each vertex has one or two outgoing edges; with two, the left turn is
// always among them, which makes the successor of an edge unique.
fn next_vertex(options: &[Vertex], prev: Vertex, cur: Vertex) -> Vertex {
    if options.len() == 1 {
        return options[0];
    }
    let dir = (cur.0 - prev.0, cur.1 - prev.1);
    let left = (cur.0 - dir.1, cur.1 + dir.0);
    debug_assert!(options.contains(&left));
    left
}

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{l1_distance, BoundaryLoop, Grid, Point};
use crate::rational::{self, q, Q};
use crate::stops::{LatticeStop, StopSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    /// Consecutive inside stops on one traversal.
    Traversal,
    /// From the end of a traversal run to the grid boundary.
    Link,
    /// Along a boundary loop between consecutive boundary nodes.
    Boundary,
    /// Straight join between otherwise disconnected parts.
    Connector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub point: Point,
    /// `false` for auxiliary boundary points that only anchor links.
    pub is_stop: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    #[serde(with = "crate::rational")]
    pub length: Q,
    pub kind: EdgeKind,
}

/// Stops plus auxiliary boundary points, the candidate edges between them,
/// and a minimum spanning tree over those edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanningStructure {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    /// Indices into `edges` forming the spanning tree.
    pub tree: Vec<usize>,
    /// Number of traversal runs among the inside stops.
    pub runs: usize,
    #[serde(with = "crate::rational")]
    pub d: Q,
}

impl SpanningStructure {
    pub fn tree_length(&self) -> Q {
        self.tree.iter().map(|&e| self.edges[e].length).sum()
    }

    pub fn connector_count(&self) -> usize {
        self.tree
            .iter()
            .filter(|&&e| self.edges[e].kind == EdgeKind::Connector)
            .count()
    }

    pub fn stop_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_stop).count()
    }
}

/// Where a boundary point sits: loop index and arc position from the
/// loop's first vertex.
type UnitEdge = ((i64, i64), (i64, i64));

pub(crate) struct BoundaryIndex<'a> {
    loops: &'a [BoundaryLoop],
    edges: HashMap<UnitEdge, (usize, usize)>,
}

impl<'a> BoundaryIndex<'a> {
    pub(crate) fn new(loops: &'a [BoundaryLoop]) -> Self {
        let mut edges = HashMap::new();
        for (li, l) in loops.iter().enumerate() {
            let n = l.vertices.len();
            for t in 0..n {
                edges.insert((l.vertices[t], l.vertices[(t + 1) % n]), (li, t));
            }
        }
        BoundaryIndex { loops, edges }
    }

    pub(crate) fn loop_len(&self, li: usize) -> Q {
        q(self.loops[li].len() as i128)
    }

    /// Every `(loop, arc position)` at which `p` lies on the boundary.
    pub(crate) fn locate(&self, p: &Point) -> Vec<(usize, Q)> {
        let xi = rational::is_integer(&p.x);
        let yi = rational::is_integer(&p.y);
        let fx = rational::floor_i64(&p.x);
        let fy = rational::floor_i64(&p.y);
        let mut unit_edges = Vec::new();
        if xi && yi {
            let v = (fx, fy);
            for w in [(fx + 1, fy), (fx - 1, fy), (fx, fy + 1), (fx, fy - 1)] {
                unit_edges.push((v, w));
            }
        } else if xi {
            unit_edges.push(((fx, fy), (fx, fy + 1)));
            unit_edges.push(((fx, fy + 1), (fx, fy)));
        } else if yi {
            unit_edges.push(((fx, fy), (fx + 1, fy)));
            unit_edges.push(((fx + 1, fy), (fx, fy)));
        }
        let mut out: Vec<(usize, Q)> = Vec::new();
        for e in unit_edges {
            if let Some(&(li, t)) = self.edges.get(&e) {
                let start = Point::from_ints(e.0 .0, e.0 .1);
                let pos = q(t as i128) + l1_distance(&start, p);
                if !out.iter().any(|(l, _)| *l == li) {
                    out.push((li, pos));
                }
            }
        }
        out
    }
}

struct Builder {
    nodes: Vec<Node>,
    index: BTreeMap<Point, usize>,
    edges: Vec<Edge>,
}

impl Builder {
    fn node(&mut self, p: &Point, is_stop: bool) -> usize {
        if let Some(&id) = self.index.get(p) {
            if is_stop {
                self.nodes[id].is_stop = true;
            }
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            point: p.clone(),
            is_stop,
        });
        self.index.insert(p.clone(), id);
        id
    }

    fn edge(&mut self, a: usize, b: usize, length: Q, kind: EdgeKind) {
        if a != b {
            self.edges.push(Edge { a, b, length, kind });
        }
    }
}

/// Maximal runs of consecutive inside stops on each traversal, ordered by
/// traversal then position.
pub(crate) fn traversal_runs(c_in: &[LatticeStop]) -> Vec<Vec<&LatticeStop>> {
    let mut by_m: BTreeMap<i64, Vec<&LatticeStop>> = BTreeMap::new();
    for s in c_in {
        by_m.entry(s.m).or_default().push(s);
    }
    let mut runs = Vec::new();
    for (_, mut stops) in by_m {
        stops.sort_by_key(|s| s.n);
        let mut cur: Vec<&LatticeStop> = Vec::new();
        for s in stops {
            if let Some(last) = cur.last() {
                if s.n != last.n + 1 {
                    runs.push(std::mem::take(&mut cur));
                }
            }
            cur.push(s);
        }
        if !cur.is_empty() {
            runs.push(cur);
        }
    }
    runs
}

/// Shortest vertical link from the end of a run to the boundary: the exit
/// above the top stop or below the bottom stop.
pub(crate) fn run_link(g: &Grid, top: &Point, bottom: &Point, d: &Q) -> Result<(Point, Point, Q)> {
    let (_, up_y) = g
        .vertical_run(top)
        .ok_or_else(|| Error::Invariant(format!("inside stop {top} not in grid")))?;
    let (down_y, _) = g
        .vertical_run(bottom)
        .ok_or_else(|| Error::Invariant(format!("inside stop {bottom} not in grid")))?;
    let up = up_y - top.y;
    let down = bottom.y - down_y;
    let (from, to, len) = if up <= down {
        (top.clone(), Point::new(top.x, up_y), up)
    } else {
        (bottom.clone(), Point::new(bottom.x, down_y), down)
    };
    if len > *d {
        return Err(Error::Invariant(format!(
            "boundary link of length {len} exceeds d = {d} at {from}"
        )));
    }
    Ok((from, to, len))
}

pub fn build_spanning_structure(g: &Grid, ss: &StopSet) -> Result<SpanningStructure> {
    let d = ss.lattice.d;
    let mut b = Builder {
        nodes: Vec::new(),
        index: BTreeMap::new(),
        edges: Vec::new(),
    };
    for s in &ss.c_in {
        b.node(&s.point, true);
    }
    for p in &ss.projected {
        b.node(&p.stop, true);
    }

    let runs = traversal_runs(&ss.c_in);
    for run in &runs {
        for w in run.windows(2) {
            let (x, y) = (b.node(&w[0].point, true), b.node(&w[1].point, true));
            b.edge(x, y, d, EdgeKind::Traversal);
        }
        let (bottom, top) = (&run[0].point, &run[run.len() - 1].point);
        let (from, to, len) = run_link(g, top, bottom, &d)?;
        let x = b.node(&from, true);
        let y = b.node(&to, false);
        b.edge(x, y, len, EdgeKind::Link);
    }

    let loops = g.boundary_loops();
    let bindex = BoundaryIndex::new(&loops);
    let mut on_loop: Vec<Vec<(Q, usize)>> = vec![Vec::new(); loops.len()];
    for (id, node) in b.nodes.iter().enumerate() {
        for (li, pos) in bindex.locate(&node.point) {
            on_loop[li].push((pos, id));
        }
    }
    for (li, mut pts) in on_loop.into_iter().enumerate() {
        pts.sort();
        pts.dedup_by_key(|(_, id)| *id);
        if pts.len() < 2 {
            continue;
        }
        let total = bindex.loop_len(li);
        for t in 0..pts.len() {
            let (p0, a) = &pts[t];
            let (p1, c) = &pts[(t + 1) % pts.len()];
            let arc = if t + 1 < pts.len() { p1 - p0 } else { total - p0 + p1 };
            if pts.len() == 2 && t == 1 && arc >= pts[1].0 - pts[0].0 {
                continue;
            }
            b.edge(*a, *c, arc, EdgeKind::Boundary);
        }
    }

    let Builder { nodes, mut edges, .. } = b;
    let mut tree = kruskal(&nodes, &edges);
    connect_components(&nodes, &mut edges, &mut tree);
    Ok(SpanningStructure {
        nodes,
        edges,
        tree,
        runs: runs.len(),
        d,
    })
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Minimum spanning forest by exact length, ties by endpoint coordinates.
fn kruskal(nodes: &[Node], edges: &[Edge]) -> Vec<usize> {
    let key = |e: &Edge| {
        let (p, r) = (&nodes[e.a].point, &nodes[e.b].point);
        let (lo, hi) = if p <= r { (p, r) } else { (r, p) };
        (e.length, lo.clone(), hi.clone())
    };
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_cached_key(|&i| key(&edges[i]));
    let mut dsu = Dsu::new(nodes.len());
    order
        .into_iter()
        .filter(|&i| dsu.union(edges[i].a, edges[i].b))
        .collect()
}

/// Joins the forest's components with the shortest stop-to-stop segments,
/// choosing joins by Kruskal over component pairs.
fn connect_components(nodes: &[Node], edges: &mut Vec<Edge>, tree: &mut Vec<usize>) {
    let mut dsu = Dsu::new(nodes.len());
    for &e in tree.iter() {
        dsu.union(edges[e].a, edges[e].b);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (id, n) in nodes.iter().enumerate() {
        if n.is_stop {
            groups.entry(dsu.find(id)).or_default().push(id);
        }
    }
    if groups.len() < 2 {
        return;
    }
    let groups: Vec<Vec<usize>> = groups.into_values().collect();
    let coords: Vec<(f64, f64)> = nodes.iter().map(|n| n.point.to_f64()).collect();
    let mut candidates = Vec::new();
    for gi in 0..groups.len() {
        for gj in gi + 1..groups.len() {
            let mut best: Option<(f64, usize, usize)> = None;
            for &a in &groups[gi] {
                for &c in &groups[gj] {
                    let dist = (coords[a].0 - coords[c].0).abs() + (coords[a].1 - coords[c].1).abs();
                    if best.is_none_or(|(bd, _, _)| dist < bd) {
                        best = Some((dist, a, c));
                    }
                }
            }
            let (_, a, c) = best.expect("groups are non-empty");
            let len = l1_distance(&nodes[a].point, &nodes[c].point);
            candidates.push((len, gi, gj, a, c));
        }
    }
    candidates.sort_by(|x, y| x.0.cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
    let mut gdsu = Dsu::new(groups.len());
    for (len, gi, gj, a, c) in candidates {
        if gdsu.union(gi, gj) {
            edges.push(Edge {
                a,
                b: c,
                length: len,
                kind: EdgeKind::Connector,
            });
            tree.push(edges.len() - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::CostParams;
    use crate::grid::parse_grid;
    use crate::rational::qr;
    use crate::stops::build_stop_set;

    fn structure(g: &Grid, d: Q, k: Q) -> (StopSet, SpanningStructure) {
        let p = CostParams::new(k, 1.0, 1.0).unwrap();
        let ss = build_stop_set(g, &d, &p).unwrap();
        let st = build_spanning_structure(g, &ss).unwrap();
        (ss, st)
    }

    fn spans_all(st: &SpanningStructure) -> bool {
        let mut dsu = Dsu::new(st.nodes.len());
        for &e in &st.tree {
            dsu.union(st.edges[e].a, st.edges[e].b);
        }
        let r = dsu.find(0);
        (0..st.nodes.len()).all(|i| dsu.find(i) == r)
    }

    #[test]
    fn single_square_structure() {
        let g = Grid::from_squares([(0, 0)]).unwrap();
        let (ss, st) = structure(&g, qr(5, 4), q(1));
        assert!(spans_all(&st));
        let links: Vec<_> = st.edges.iter().filter(|e| e.kind == EdgeKind::Link).collect();
        assert!(links.len() <= ss.c_in.len());
        assert!(links.iter().all(|e| e.length <= qr(5, 4)));
        let boundary: Q = st
            .edges
            .iter()
            .filter(|e| e.kind == EdgeKind::Boundary)
            .map(|e| e.length)
            .sum();
        assert!(boundary <= q(4));
        assert!(st.tree_length() <= q(ss.c_in.len() as i128) * qr(5, 4) + q(4));
    }

    #[test]
    fn strip_runs_get_one_link_each() {
        let g = Grid::rectangle(10, 1).unwrap();
        let (ss, st) = structure(&g, q(2), q(1));
        let runs = traversal_runs(&ss.c_in);
        assert_eq!(st.runs, runs.len());
        let links = st.edges.iter().filter(|e| e.kind == EdgeKind::Link).count();
        assert!(links <= runs.len());
        assert!(st
            .edges
            .iter()
            .filter(|e| e.kind == EdgeKind::Link)
            .all(|e| e.length <= q(2)));
        assert!(st
            .edges
            .iter()
            .filter(|e| e.kind == EdgeKind::Traversal)
            .all(|e| e.length == q(2)));
        assert!(spans_all(&st));
        assert!(st.tree_length() <= q(ss.c_in.len() as i128) * q(2) + q(22));
    }

    #[test]
    fn thin_strip_with_large_radius_has_no_inside_runs() {
        // With k = 3 and an anchor at the corner, pick a spacing whose
        // traversals miss the strip's interior lattice points.
        let g = Grid::rectangle(1, 5).unwrap();
        let (ss, st) = structure(&g, q(6), q(3));
        if ss.c_in.is_empty() {
            assert_eq!(st.runs, 0);
            assert!(st.edges.iter().all(|e| e.kind != EdgeKind::Link));
        }
        assert!(spans_all(&st));
    }

    #[test]
    fn holes_are_joined_by_connectors() {
        let g = parse_grid("#######\n#.....#\n#.....#\n#.....#\n#######").unwrap();
        let (_, st) = structure(&g, qr(1, 2), qr(1, 2));
        assert!(spans_all(&st));
    }

    #[test]
    fn disconnected_grid_spans() {
        let g = Grid::from_squares([(0, 0), (5, 5), (9, 0)]).unwrap();
        let (_, st) = structure(&g, q(1), q(1));
        assert!(spans_all(&st));
        assert!(st.connector_count() >= 2);
    }

    #[test]
    fn boundary_index_positions() {
        let g = Grid::from_squares([(0, 0)]).unwrap();
        let loops = g.boundary_loops();
        let idx = BoundaryIndex::new(&loops);
        let at = |x: Q, y: Q| idx.locate(&Point::new(x, y));
        assert_eq!(at(qr(1, 2), q(0)), vec![(0, qr(1, 2))]);
        assert_eq!(at(q(1), qr(1, 2)), vec![(0, qr(3, 2))]);
        assert_eq!(at(q(0), qr(1, 4)), vec![(0, qr(15, 4))]);
        assert!(at(qr(1, 2), qr(1, 2)).is_empty());
        assert_eq!(at(q(1), q(1)).len(), 1);
    }
}

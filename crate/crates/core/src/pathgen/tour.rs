use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::grid::Point;
use crate::rational::{q, Q};

use super::structure::SpanningStructure;
use super::{CoveringPath, PathMethod};

/// Counter-clockwise angle order of direction vectors, starting at the
/// positive x axis.
fn angle_cmp(a: &(Q, Q), b: &(Q, Q)) -> Ordering {
    let half = |v: &(Q, Q)| {
        if v.1 > q(0) || (v.1 == q(0) && v.0 > q(0)) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a.0 * b.1 - a.1 * b.0;
        q(0).cmp(&cross)
    })
}

/// Preorder walk of the spanning tree with shortcuts: stops in the order
/// they are first reached. The walk is at most twice the tree length.
pub fn doubled_tour_path(st: &SpanningStructure) -> Result<CoveringPath> {
    let n = st.nodes.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &e in &st.tree {
        let edge = &st.edges[e];
        adj[edge.a].push(edge.b);
        adj[edge.b].push(edge.a);
    }
    let root = (0..n)
        .filter(|&i| st.nodes[i].is_stop)
        .min_by(|&a, &b| st.nodes[a].point.cmp(&st.nodes[b].point))
        .ok_or_else(|| Error::Precondition("structure has no stops".into()))?;

    let mut seen = vec![false; n];
    let mut order: Vec<Point> = Vec::new();
    let mut stack = vec![root];
    seen[root] = true;
    let mut visited = 0;
    while let Some(v) = stack.pop() {
        visited += 1;
        if st.nodes[v].is_stop {
            order.push(st.nodes[v].point.clone());
        }
        let here = &st.nodes[v].point;
        let mut children: Vec<usize> = adj[v].iter().copied().filter(|&c| !seen[c]).collect();
        children.sort_by(|&a, &b| {
            let (pa, pb) = (&st.nodes[a].point, &st.nodes[b].point);
            let va = (pa.x - here.x, pa.y - here.y);
            let vb = (pb.x - here.x, pb.y - here.y);
            angle_cmp(&va, &vb).then_with(|| pa.cmp(pb))
        });
        for &c in children.iter().rev() {
            seen[c] = true;
            stack.push(c);
        }
    }
    if visited != n {
        let mut comps = 0;
        let mut mark = vec![false; n];
        for s in 0..n {
            if mark[s] {
                continue;
            }
            comps += 1;
            let mut st_nodes = vec![s];
            mark[s] = true;
            while let Some(v) = st_nodes.pop() {
                for &c in &adj[v] {
                    if !mark[c] {
                        mark[c] = true;
                        st_nodes.push(c);
                    }
                }
            }
        }
        return Err(Error::Disconnected { components: comps });
    }
    Ok(CoveringPath::new(order, PathMethod::DoubledTree, Some(st.d)))
}

use crate::error::{Error, Result};
use crate::grid::{l1_distance, Grid, Point};
use crate::rational::{self, q, Q};
use crate::stops::StopSet;

use super::structure::{run_link, traversal_runs, BoundaryIndex};
use super::{CoveringPath, PathMethod};

fn dist_f(a: &Point, b: &Point) -> f64 {
    let (ax, ay) = a.to_f64();
    let (bx, by) = b.to_f64();
    (ax - bx).abs() + (ay - by).abs()
}

fn length(seq: &[Point]) -> Q {
    seq.windows(2).map(|w| l1_distance(&w[0], &w[1])).sum()
}

/// Serpentine over the traversal runs, left to right, alternating
/// direction. Both starting directions are tried; the shorter is kept.
fn serpentine(ss: &StopSet) -> Vec<Point> {
    let runs = traversal_runs(&ss.c_in);
    let build = |first_up: bool| -> Vec<Point> {
        let mut seq = Vec::new();
        for (t, run) in runs.iter().enumerate() {
            let up = (t % 2 == 0) == first_up;
            let pts = run.iter().map(|s| s.point.clone());
            if up {
                seq.extend(pts);
            } else {
                seq.extend(pts.rev());
            }
        }
        seq
    };
    let a = build(true);
    let b = build(false);
    if length(&b) < length(&a) {
        b
    } else {
        a
    }
}

/// Walks the boundary stops in loop order starting after arc position
/// `start`, in whichever direction is shorter.
fn boundary_walk(stops: &[(Q, Point)], start: &Q, loop_len: &Q, from: Option<&Point>) -> Vec<Point> {
    let offset = |pos: &Q| {
        let o = pos - start;
        if o < q(0) {
            o + loop_len
        } else {
            o
        }
    };
    let mut ccw: Vec<(Q, Point)> = stops.iter().map(|(p, s)| (offset(p), s.clone())).collect();
    ccw.sort();
    let ccw: Vec<Point> = ccw.into_iter().map(|(_, s)| s).collect();
    let cw: Vec<Point> = ccw.iter().rev().cloned().collect();
    let cost = |seq: &[Point]| {
        let head = match (from, seq.first()) {
            (Some(f), Some(s)) => l1_distance(f, s),
            _ => q(0),
        };
        head + length(seq)
    };
    if cost(&cw) < cost(&ccw) {
        cw
    } else {
        ccw
    }
}

/// Inserts each point where it lengthens the sequence least.
fn cheapest_insertion(mut seq: Vec<Point>, extra: &[Point]) -> Vec<Point> {
    for p in extra {
        if seq.is_empty() {
            seq.push(p.clone());
            continue;
        }
        let mut best = (dist_f(p, &seq[0]), 0usize);
        let tail = dist_f(p, &seq[seq.len() - 1]);
        if tail < best.0 {
            best = (tail, seq.len());
        }
        for t in 1..seq.len() {
            let delta = dist_f(&seq[t - 1], p) + dist_f(p, &seq[t]) - dist_f(&seq[t - 1], &seq[t]);
            if delta < best.0 {
                best = (delta, t);
            }
        }
        seq.insert(best.1, p.clone());
    }
    seq
}

/// Up-and-down path for an orthogonally convex grid: the traversal runs
/// are swept left to right in alternating directions, then the boundary
/// stops are picked up either by cheapest insertion or by one walk around
/// the boundary from the serpentine's exit, whichever is shorter. The
/// boundary walk keeps the length within `|C_in| d + 2P`.
pub fn convex_updown_path(g: &Grid, ss: &StopSet) -> Result<CoveringPath> {
    if !g.is_convex() {
        return Err(Error::Precondition("up-and-down path requires a convex grid".into()));
    }
    let d = &ss.lattice.d;
    let loops = g.boundary_loops();
    let bindex = BoundaryIndex::new(&loops);
    let loop_len = bindex.loop_len(0);
    let mut boundary: Vec<(Q, Point)> = Vec::with_capacity(ss.projected.len());
    for p in &ss.projected {
        let pos = bindex
            .locate(&p.stop)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Invariant(format!("projected stop {} is not on the boundary", p.stop)))?
            .1;
        boundary.push((pos, p.stop.clone()));
    }
    boundary.sort();

    let serp = serpentine(ss);
    let walk_candidate = if let Some(last) = serp.last() {
        let (_, exit, _) = run_link(g, last, last, d)?;
        let start = bindex
            .locate(&exit)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Invariant(format!("exit point {exit} is not on the boundary")))?
            .1;
        let mut seq = serp.clone();
        seq.extend(boundary_walk(&boundary, &start, &loop_len, Some(last)));
        seq
    } else if boundary.is_empty() {
        Vec::new()
    } else {
        // Start right after the largest gap between consecutive stops.
        let n = boundary.len();
        let gap = |t: usize| {
            let next = &boundary[(t + 1) % n].0;
            let here = &boundary[t].0;
            if t + 1 < n {
                next - here
            } else {
                loop_len - here + next
            }
        };
        let widest = (0..n).max_by(|&a, &b| gap(a).cmp(&gap(b)).then(b.cmp(&a))).unwrap_or(0);
        let start = &boundary[(widest + 1) % n].0;
        let mut seq: Vec<Point> = boundary.iter().map(|(_, p)| p.clone()).collect();
        seq.rotate_left((widest + 1) % n);
        debug_assert_eq!(&boundary[(widest + 1) % n].0, start);
        seq
    };
    let extra: Vec<Point> = boundary.iter().map(|(_, p)| p.clone()).collect();
    let insertion_candidate = cheapest_insertion(serp, &extra);
    let seq = if length(&insertion_candidate) < length(&walk_candidate) {
        insertion_candidate
    } else {
        walk_candidate
    };

    let path = CoveringPath::new(seq, PathMethod::UpAndDown, Some(*d));
    let limit = q(ss.c_in.len() as i128) * d + q(2 * g.perimeter() as i128);
    if *path.length() > limit {
        return Err(Error::Invariant(format!(
            "up-and-down length {} exceeds |C_in| d + 2P = {}",
            rational::to_f64(path.length()),
            rational::to_f64(&limit)
        )));
    }
    Ok(path)
}

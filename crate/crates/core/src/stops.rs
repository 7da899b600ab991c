//! Stop selection.
//!
//! Stops are laid out on vertical traversals `s = 2k - d/2` apart, spaced
//! `d` along each traversal, with odd traversals shifted by `d/2`. The
//! nearest-centre cell of a lattice centre `c` is the hexagon
//! `{ |y - c.y| <= d/2 } ∩ D(c; k)` of area `d s`, and these hexagons
//! tile the plane, so every point lies within `k` of some centre.
//!
//! Centres whose hexagon overlaps the grid in positive area are selected.
//! Those inside the grid become stops directly; each one outside is
//! replaced by up to four boundary stops, one per radius-`k/2` quarter of
//! its diamond that meets the grid.

use serde::{Deserialize, Serialize};

use crate::bounds::CostParams;
use crate::error::{Error, Result};
use crate::grid::{l1_distance, Grid, Point};
use crate::rational::{self, q, qr, Q};

/// The stop lattice for spacing `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StopLattice {
    #[serde(with = "crate::rational")]
    pub d: Q,
    #[serde(with = "crate::rational")]
    pub s: Q,
    #[serde(with = "crate::rational")]
    pub k: Q,
    pub anchor: Point,
    /// Inclusive traversal index range covering the inflated bounding box.
    pub m_range: (i64, i64),
    /// Inclusive stop index range along traversals.
    pub n_range: (i64, i64),
}

impl StopLattice {
    pub fn new(d: Q, k: Q, anchor: Point) -> Result<Self> {
        if d <= q(0) || d > q(2) * k {
            return Err(Error::Domain(format!("spacing d = {d} outside (0, 2k] for k = {k}")));
        }
        let s = q(2) * k - d / q(2);
        Ok(StopLattice {
            d,
            s,
            k,
            anchor,
            m_range: (0, -1),
            n_range: (0, -1),
        })
    }

    pub fn traversal_x(&self, m: i64) -> Q {
        self.anchor.x + q(m as i128) * self.s
    }

    fn offset(&self, m: i64) -> Q {
        if m.rem_euclid(2) == 1 {
            self.d / q(2)
        } else {
            q(0)
        }
    }

    pub fn center(&self, m: i64, n: i64) -> Point {
        let y = self.anchor.y + q(n as i128) * self.d + self.offset(m);
        Point::new(self.traversal_x(m), y)
    }

    /// Area of every nearest-centre cell.
    pub fn cell_area(&self) -> Q {
        self.d * self.s
    }

    /// Hexagon vertices of the cell around `c`, counter-clockwise from the
    /// rightmost vertex.
    pub fn cell_polygon(&self, c: &Point) -> Vec<Point> {
        let h = self.d / q(2);
        let w = self.k - h;
        vec![
            c.offset(&self.k, &q(0)),
            c.offset(&w, &h),
            c.offset(&-w, &h),
            c.offset(&-self.k, &q(0)),
            c.offset(&-w, &-h),
            c.offset(&w, &-h),
        ]
    }

    /// Whether the hexagon around `c` and the closed square `sq` share a
    /// region of positive area.
    pub fn cell_overlaps_square(&self, c: &Point, sq: (i64, i64)) -> bool {
        let h = self.d / q(2);
        let (i, j) = (q(sq.0 as i128), q(sq.1 as i128));
        let ylo = rational::max(j, c.y - h);
        let yhi = rational::min(j + q(1), c.y + h);
        if ylo >= yhi {
            return false;
        }
        // The hexagon is widest at the row closest to its centre.
        let ybest = rational::clamp(c.y, ylo, yhi);
        let w = self.k - rational::abs(&(ybest - c.y));
        if w <= q(0) {
            return false;
        }
        c.x - w < i + q(1) && c.x + w > i
    }

    /// Nearest lattice centre, ties broken by the smallest `(x, y)`.
    pub fn nearest_center(&self, p: &Point) -> (i64, i64) {
        let m0 = rational::floor_i64(&((p.x - self.anchor.x) / self.s));
        let mut best: Option<(Q, Point, (i64, i64))> = None;
        for m in m0 - 1..=m0 + 2 {
            let base = self.anchor.y + self.offset(m);
            let n0 = rational::floor_i64(&((p.y - base) / self.d));
            for n in [n0, n0 + 1] {
                let c = self.center(m, n);
                let dist = l1_distance(p, &c);
                let better = match &best {
                    None => true,
                    Some((bd, bc, _)) => dist < *bd || (dist == *bd && c < *bc),
                };
                if better {
                    best = Some((dist, c, (m, n)));
                }
            }
        }
        best.expect("candidate set is non-empty").2
    }

    pub fn centers(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let (m0, m1) = self.m_range;
        let (n0, n1) = self.n_range;
        (m0..=m1).flat_map(move |m| (n0..=n1).map(move |n| (m, n)))
    }
}

/// Lattice for spacing `d` anchored at the grid's lower-left corner,
/// covering its bounding box inflated by `2k`.
pub fn build_lattice(d: &Q, p: &CostParams, g: &Grid) -> Result<StopLattice> {
    let b = g.bbox();
    build_lattice_anchored(d, p, g, Point::from_ints(b.min_i, b.min_j))
}

pub fn build_lattice_anchored(d: &Q, p: &CostParams, g: &Grid, anchor: Point) -> Result<StopLattice> {
    let mut lat = StopLattice::new(*d, p.k, anchor)?;
    let b = g.bbox();
    let margin = q(2) * p.k;
    let x0 = q(b.min_i as i128) - margin;
    let x1 = q(b.max_i as i128 + 1) + margin;
    let y0 = q(b.min_j as i128) - margin;
    let y1 = q(b.max_j as i128 + 1) + margin;
    let m_lo = rational::floor_i64(&((x0 - lat.anchor.x) / lat.s));
    let m_hi = rational::floor_i64(&((x1 - lat.anchor.x) / lat.s)) + 1;
    let n_lo = rational::floor_i64(&((y0 - lat.anchor.y) / lat.d)) - 1;
    let n_hi = rational::floor_i64(&((y1 - lat.anchor.y) / lat.d)) + 1;
    lat.m_range = (m_lo, m_hi);
    lat.n_range = (n_lo, n_hi);
    Ok(lat)
}

/// A selected lattice centre with its traversal index `m` and position
/// index `n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeStop {
    pub m: i64,
    pub n: i64,
    pub point: Point,
}

/// Splits the centres whose cells overlap `g` into those inside the closed
/// grid and those outside.
pub fn classify_centers(g: &Grid, lat: &StopLattice) -> (Vec<LatticeStop>, Vec<LatticeStop>) {
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    let h = lat.d / q(2);
    for (m, n) in lat.centers() {
        let c = lat.center(m, n);
        let i0 = rational::floor_i64(&(c.x - lat.k)) - 1;
        let i1 = rational::floor_i64(&(c.x + lat.k));
        let j0 = rational::floor_i64(&(c.y - h)) - 1;
        let j1 = rational::floor_i64(&(c.y + h));
        let selected = g.squares_in(i0, i1, j0, j1).any(|sq| lat.cell_overlaps_square(&c, sq));
        if !selected {
            continue;
        }
        let stop = LatticeStop { m, n, point: c };
        if g.contains(&stop.point) {
            inside.push(stop);
        } else {
            outside.push(stop);
        }
    }
    inside.sort();
    outside.sort();
    (inside, outside)
}

/// A boundary stop standing in for part of an outside centre's diamond.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectedStop {
    pub stop: Point,
    pub source: Point,
    /// 1: right, 2: up, 3: left, 4: down quarter of the source diamond.
    pub diamond_index: u8,
}

/// Centre of quarter-diamond `index` (1..=4) of `D(x; k)`.
pub fn sub_diamond_center(x: &Point, k: &Q, index: u8) -> Point {
    let h = k / q(2);
    let z = q(0);
    match index {
        1 => x.offset(&h, &z),
        2 => x.offset(&z, &h),
        3 => x.offset(&-h, &z),
        4 => x.offset(&z, &-h),
        _ => panic!("sub-diamond index {index} out of range"),
    }
}

/// Closest point of the grid to `p` (l1), ties to the smallest `(x, y)`,
/// searched among squares within `radius` of `p`.
pub fn nearest_grid_point(g: &Grid, p: &Point, radius: &Q) -> Option<(Q, Point)> {
    let i0 = rational::floor_i64(&(p.x - radius)) - 1;
    let i1 = rational::floor_i64(&(p.x + radius));
    let j0 = rational::floor_i64(&(p.y - radius)) - 1;
    let j1 = rational::floor_i64(&(p.y + radius));
    let mut best: Option<(Q, Point)> = None;
    for (i, j) in g.squares_in(i0, i1, j0, j1) {
        let qp = Point::new(
            rational::clamp(p.x, q(i as i128), q(i as i128 + 1)),
            rational::clamp(p.y, q(j as i128), q(j as i128 + 1)),
        );
        let dist = l1_distance(p, &qp);
        if dist > *radius {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bd, bp)) => dist < *bd || (dist == *bd && qp < *bp),
        };
        if better {
            best = Some((dist, qp));
        }
    }
    best
}

/// First point of `g` on the axis-parallel segment `from -> to`.
fn first_hit_axis(g: &Grid, from: &Point, to: &Point) -> Option<Point> {
    if g.contains(from) {
        return Some(from.clone());
    }
    let horizontal = from.y == to.y;
    debug_assert!(horizontal || from.x == to.x);
    // Work in (along, across) coordinates.
    let (a0, a1, across) = if horizontal {
        (&from.x, &to.x, &from.y)
    } else {
        (&from.y, &to.y, &from.x)
    };
    let lo = rational::min(*a0, *a1);
    let hi = rational::max(*a0, *a1);
    let along_range = (rational::floor_i64(&lo) - 1, rational::floor_i64(&hi));
    let c = rational::floor_i64(across);
    let across_range = (c - 1, c);
    let (i_range, j_range) = if horizontal {
        (along_range, across_range)
    } else {
        (across_range, along_range)
    };
    let mut hits: Vec<Q> = g
        .squares_in(i_range.0, i_range.1, j_range.0, j_range.1)
        .map(|(i, j)| if horizontal { (i, j) } else { (j, i) })
        .filter(|&(_, b)| q(b as i128) <= *across && *across <= q(b as i128 + 1))
        .flat_map(|(a, _)| [q(a as i128), q(a as i128 + 1)])
        .filter(|v| lo <= *v && *v <= hi)
        .collect();
    hits.sort();
    let v = *if a1 > a0 { hits.first() } else { hits.last() }?;
    Some(if horizontal {
        Point::new(v, from.y)
    } else {
        Point::new(from.x, v)
    })
}

/// Boundary stops for an outside centre: for each quarter diamond `D_i`
/// meeting the grid, the first grid point on the segment from `x_out`
/// towards the centre of `D_i`, or, if that segment misses the grid, the
/// grid point closest to that centre.
pub fn project_out_center(g: &Grid, x_out: &Point, k: &Q) -> Result<Vec<ProjectedStop>> {
    if g.contains(x_out) {
        return Err(Error::Precondition(format!("centre {x_out} lies in the grid")));
    }
    let half = k / q(2);
    let mut out = Vec::new();
    for index in 1..=4u8 {
        let c = sub_diamond_center(x_out, k, index);
        let Some((_, nearest)) = nearest_grid_point(g, &c, &half) else {
            continue;
        };
        let stop = first_hit_axis(g, x_out, &c).unwrap_or(nearest);
        out.push(ProjectedStop {
            stop,
            source: x_out.clone(),
            diamond_index: index,
        });
    }
    if out.is_empty() {
        return Err(Error::Precondition(format!(
            "diamond of radius {k} around {x_out} misses the grid"
        )));
    }
    Ok(out)
}

/// The selected stops for one spacing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StopSet {
    pub lattice: StopLattice,
    pub c_in: Vec<LatticeStop>,
    pub c_out: Vec<LatticeStop>,
    /// Boundary stops, without points already present in the set.
    pub projected: Vec<ProjectedStop>,
}

impl StopSet {
    /// All distinct stops: `c_in` first, then projected stops.
    pub fn stops(&self) -> Vec<Point> {
        self.c_in
            .iter()
            .map(|s| s.point.clone())
            .chain(self.projected.iter().map(|p| p.stop.clone()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.c_in.len() + self.projected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_json(&self) -> StopSetJson {
        StopSetJson {
            d: self.lattice.d,
            s: self.lattice.s,
            anchor: self.lattice.anchor.clone(),
            c_in: self.c_in.iter().map(|s| s.point.clone()).collect(),
            c_out: self.c_out.iter().map(|s| s.point.clone()).collect(),
            projected: self.projected.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StopSetJson {
    #[serde(with = "crate::rational")]
    pub d: Q,
    #[serde(with = "crate::rational")]
    pub s: Q,
    pub anchor: Point,
    pub c_in: Vec<Point>,
    pub c_out: Vec<Point>,
    pub projected: Vec<ProjectedStop>,
}

pub fn build_stop_set(g: &Grid, d: &Q, p: &CostParams) -> Result<StopSet> {
    let lat = build_lattice(d, p, g)?;
    build_stop_set_on(g, lat)
}

pub fn build_stop_set_on(g: &Grid, lattice: StopLattice) -> Result<StopSet> {
    let (c_in, c_out) = classify_centers(g, &lattice);
    let mut seen: std::collections::BTreeSet<Point> = c_in.iter().map(|s| s.point.clone()).collect();
    let mut projected = Vec::new();
    for x in &c_out {
        for ps in project_out_center(g, &x.point, &lattice.k)? {
            if seen.insert(ps.stop.clone()) {
                projected.push(ps);
            }
        }
    }
    Ok(StopSet {
        lattice,
        c_in,
        c_out,
        projected,
    })
}

/// Rational spacing not exceeding `d`, on a `1/4096` grid, clipped to
/// `(0, 2k]`.
pub fn rationalize_spacing(d: f64, k: &Q) -> Q {
    let two_k = q(2) * k;
    let v = rational::floor_to_grid(d, 4096);
    if v <= q(0) {
        qr(1, 4096)
    } else {
        rational::min(v, two_k)
    }
}

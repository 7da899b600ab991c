//! Covering-path construction.
//!
//! [`construct`] picks a lattice spacing, selects stops, and orders them:
//! convex grids get an up-and-down sweep, everything else a doubled walk of
//! a minimum spanning structure with shortcuts. Path edges are straight l1
//! segments between consecutive stops and may leave the grid.

pub mod structure;
pub mod tour;
pub mod updown;

use serde::{Deserialize, Serialize};

use crate::bounds::CostParams;
use crate::error::{Error, Result};
use crate::grid::{l1_distance, Grid, Point};
use crate::rational::{self, q, qr, Q};
use crate::stops::{build_lattice_anchored, build_stop_set_on, rationalize_spacing, LatticeStop, StopSet};

pub use structure::{build_spanning_structure, Edge, EdgeKind, Node, SpanningStructure};
pub use tour::doubled_tour_path;
pub use updown::convex_updown_path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathMethod {
    DoubledTree,
    UpAndDown,
    Oracle,
}

impl std::fmt::Display for PathMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PathMethod::DoubledTree => "doubled-tree",
            PathMethod::UpAndDown => "up-and-down",
            PathMethod::Oracle => "oracle",
        })
    }
}

/// An ordered stop sequence. The length is the exact sum of l1 distances
/// between consecutive stops.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringPath {
    stops: Vec<Point>,
    length: Q,
    method: PathMethod,
    d: Option<Q>,
}

impl CoveringPath {
    pub fn new(stops: Vec<Point>, method: PathMethod, d: Option<Q>) -> Self {
        let length = stops.windows(2).map(|w| l1_distance(&w[0], &w[1])).sum();
        CoveringPath {
            stops,
            length,
            method,
            d,
        }
    }

    pub fn stops(&self) -> &[Point] {
        &self.stops
    }

    pub fn length(&self) -> &Q {
        &self.length
    }

    pub fn length_f64(&self) -> f64 {
        rational::to_f64(&self.length)
    }

    pub fn stop_count(&self) -> usize {
        self.stops.len()
    }

    pub fn method(&self) -> PathMethod {
        self.method
    }

    pub fn spacing(&self) -> Option<&Q> {
        self.d.as_ref()
    }

    pub fn cost_with(&self, p: &CostParams) -> f64 {
        path_cost(self, p)
    }

    pub fn to_json(&self, p: &CostParams) -> PathJson {
        PathJson {
            method: self.method,
            d: self.d,
            stops: self.stops.clone(),
            length: self.length,
            length_f64: self.length_f64(),
            stop_count: self.stop_count(),
            cost: self.cost_with(p),
        }
    }
}

/// Serialized form of a path. `L` is exact; `L_approx` and `cost` are
/// floating point conveniences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathJson {
    pub method: PathMethod,
    #[serde(with = "crate::rational::opt", default)]
    pub d: Option<Q>,
    pub stops: Vec<Point>,
    #[serde(rename = "L", with = "crate::rational")]
    pub length: Q,
    #[serde(rename = "L_approx")]
    pub length_f64: f64,
    #[serde(rename = "T")]
    pub stop_count: usize,
    pub cost: f64,
}

impl PathJson {
    /// Rebuilds the path and checks that the recorded length and stop count
    /// match the stops.
    pub fn to_path(&self) -> Result<CoveringPath> {
        let path = CoveringPath::new(self.stops.clone(), self.method, self.d);
        if path.length != self.length {
            return Err(Error::Domain(format!(
                "recorded length {} does not match the stops ({})",
                self.length, path.length
            )));
        }
        if path.stop_count() != self.stop_count {
            return Err(Error::Domain(format!(
                "recorded stop count {} does not match the stops ({})",
                self.stop_count,
                path.stop_count()
            )));
        }
        Ok(path)
    }
}

pub fn path_cost(path: &CoveringPath, p: &CostParams) -> f64 {
    p.alpha * path.length_f64() + p.beta * path.stop_count() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructOptions {
    /// Fixed spacing; overrides the optimal or scanned choice.
    pub d: Option<Q>,
    /// Try `n x n` lattice translations within one period (0 or 1: none).
    pub scan_phase: u32,
    /// Number of spacings tried when `beta = 0`.
    pub scan_points: u32,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            d: None,
            scan_phase: 0,
            scan_points: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub path: CoveringPath,
    pub stop_set: StopSet,
    pub structure: SpanningStructure,
    pub d: Q,
    pub cost: f64,
}

/// Builds a covering path for `g` with the default options.
pub fn construct(g: &Grid, p: &CostParams) -> Result<CoveringPath> {
    construct_with(g, p, &ConstructOptions::default()).map(|c| c.path)
}

pub fn construct_with(g: &Grid, p: &CostParams, opts: &ConstructOptions) -> Result<Construction> {
    if let Some(c) = single_stop(g, p)? {
        return Ok(c);
    }
    let spacings: Vec<Q> = match (&opts.d, p.d_star()) {
        (Some(d), _) => {
            if *d <= q(0) || *d > q(2) * p.k {
                return Err(Error::Domain(format!("spacing d = {d} must lie in (0, 2k]")));
            }
            vec![*d]
        }
        (None, Some(ds)) if p.beta > 0.0 => vec![rationalize_spacing(ds, &p.k)],
        _ => {
            let n = opts.scan_points.max(1) as i128;
            (1..=n).map(|j| q(2) * p.k * qr(j, n)).collect()
        }
    };
    let mut best: Option<Construction> = None;
    for d in &spacings {
        for c in phases(g, p, d, opts.scan_phase)? {
            if best.as_ref().is_none_or(|b| c.cost < b.cost) {
                best = Some(c);
            }
        }
    }
    best.ok_or_else(|| Error::Invariant("no spacing candidates".into()))
}

fn phases(g: &Grid, p: &CostParams, d: &Q, n: u32) -> Result<Vec<Construction>> {
    let b = g.bbox();
    let base = Point::from_ints(b.min_i, b.min_j);
    let n = n.max(1) as i128;
    let s = q(2) * p.k - d / q(2);
    let mut out = Vec::new();
    for a in 0..n {
        for c in 0..n {
            let anchor = base.offset(&(q(2) * s * qr(a, n)), &(d * qr(c, n)));
            out.push(build_on(g, p, d, anchor)?);
        }
    }
    Ok(out)
}

fn build_on(g: &Grid, p: &CostParams, d: &Q, anchor: Point) -> Result<Construction> {
    let lattice = build_lattice_anchored(d, p, g, anchor)?;
    let ss = build_stop_set_on(g, lattice)?;
    let structure = build_spanning_structure(g, &ss)?;
    let path = if g.is_convex() {
        convex_updown_path(g, &ss)?
    } else {
        doubled_tour_path(&structure)?
    };
    let cost = path.cost_with(p);
    Ok(Construction {
        path,
        stop_set: ss,
        structure,
        d: *d,
        cost,
    })
}

/// When one diamond around the bounding-box centre covers the whole grid
/// and that centre lies in the grid, a single stop is optimal.
fn single_stop(g: &Grid, p: &CostParams) -> Result<Option<Construction>> {
    let b = g.bbox();
    let w = q(b.width() as i128);
    let h = q(b.height() as i128);
    if (w + h) / q(2) > p.k {
        return Ok(None);
    }
    let centre = Point::from_ints(b.min_i, b.min_j).offset(&(w / q(2)), &(h / q(2)));
    if !g.contains(&centre) {
        return Ok(None);
    }
    let d = q(2) * p.k;
    let lattice = build_lattice_anchored(&d, p, g, centre.clone())?;
    let ss = StopSet {
        lattice,
        c_in: vec![LatticeStop {
            m: 0,
            n: 0,
            point: centre.clone(),
        }],
        c_out: Vec::new(),
        projected: Vec::new(),
    };
    let structure = build_spanning_structure(g, &ss)?;
    let method = if g.is_convex() {
        PathMethod::UpAndDown
    } else {
        PathMethod::DoubledTree
    };
    let path = CoveringPath::new(vec![centre], method, Some(d));
    let cost = path.cost_with(p);
    Ok(Some(Construction {
        path,
        stop_set: ss,
        structure,
        d,
        cost,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds;

    fn params(k: i128, alpha: f64, beta: f64) -> CostParams {
        CostParams::new(q(k), alpha, beta).unwrap()
    }

    #[test]
    fn cost_arithmetic() {
        let p = params(1, 2.0, 5.0);
        let path = CoveringPath::new(
            vec![Point::from_ints(0, 0), Point::from_ints(1, 2)],
            PathMethod::Oracle,
            None,
        );
        assert_eq!(path.length(), &q(3));
        assert_eq!(path_cost(&path, &p), 16.0);
        let one = CoveringPath::new(vec![Point::from_ints(0, 0)], PathMethod::Oracle, None);
        assert_eq!(one.cost_with(&p), 5.0);
        let p0 = params(1, 2.0, 0.0);
        assert_eq!(path.cost_with(&p0), 6.0);
    }

    #[test]
    fn json_round_trip() {
        let p = params(1, 1.0, 1.0);
        let path = CoveringPath::new(
            vec![Point::new(qr(1, 2), qr(1, 2)), Point::new(qr(3, 2), qr(1, 2))],
            PathMethod::UpAndDown,
            Some(qr(5, 4)),
        );
        let text = serde_json::to_string(&path.to_json(&p)).unwrap();
        assert!(text.contains("\"method\":\"up-and-down\""));
        assert!(text.contains("\"L\":\"1\""));
        let back: PathJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_path().unwrap(), path);
    }

    #[test]
    fn tampered_length_is_rejected() {
        let p = params(1, 1.0, 1.0);
        let path = CoveringPath::new(
            vec![Point::from_ints(0, 0), Point::from_ints(2, 0)],
            PathMethod::Oracle,
            None,
        );
        let mut json = path.to_json(&p);
        json.length = q(1);
        assert!(json.to_path().is_err());
    }

    #[test]
    fn tiny_grid_gets_one_stop() {
        let g = Grid::rectangle(1, 1).unwrap();
        let p = params(2, 1.0, 1.0);
        let path = construct(&g, &p).unwrap();
        assert_eq!(path.stop_count(), 1);
        assert_eq!(path.cost_with(&p), 1.0);
    }

    #[test]
    fn square_sandwich() {
        let g = Grid::rectangle(10, 10).unwrap();
        let p = params(1, 1.0, 1.0);
        let c = construct_with(&g, &p, &ConstructOptions::default()).unwrap();
        assert_eq!(c.path.method(), PathMethod::UpAndDown);
        let sigma = p.sigma();
        assert!(c.cost >= sigma * 98.0);
        assert!(c.cost <= bounds::upper_bound_convex(&p, 100.0, 40.0));
    }

    #[test]
    fn cross_with_zero_beta() {
        let g = Grid::cross(20).unwrap();
        let p = params(1, 1.0, 0.0);
        let c = construct_with(&g, &p, &ConstructOptions::default()).unwrap();
        assert_eq!(c.path.method(), PathMethod::UpAndDown);
        let l = c.path.length_f64();
        assert!((39.5..=2737.0).contains(&l), "L = {l}");
    }

    #[test]
    fn every_stop_appears_once() {
        let g = Grid::from_squares([(0, 0), (1, 0), (2, 0), (0, 1), (2, 1), (0, 2), (1, 2), (2, 2)]).unwrap();
        let p = params(1, 1.0, 1.0);
        let c = construct_with(&g, &p, &ConstructOptions::default()).unwrap();
        let mut a = c.stop_set.stops();
        let mut b = c.path.stops().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn phase_scan_never_worse() {
        let g = Grid::cross(4).unwrap();
        let p = params(1, 1.0, 1.0);
        let plain = construct_with(&g, &p, &ConstructOptions::default()).unwrap();
        let scanned = construct_with(
            &g,
            &p,
            &ConstructOptions {
                scan_phase: 3,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(scanned.cost <= plain.cost);
    }

    #[test]
    fn rejects_bad_override() {
        let g = Grid::rectangle(3, 3).unwrap();
        let p = params(1, 1.0, 1.0);
        let opts = ConstructOptions {
            d: Some(q(3)),
            ..Default::default()
        };
        assert!(matches!(construct_with(&g, &p, &opts), Err(Error::Domain(_))));
    }
}

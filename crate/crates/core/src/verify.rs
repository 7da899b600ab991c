//! Coverage certification and bound audits.
//!
//! [`verify_coverage`] is a sampling certificate: the distance from a point
//! to the nearest stop is 1-Lipschitz in l1, and every point of the grid is
//! within `h` of a sample on an `h`-spaced lattice, so a maximum sampled
//! distance `m <= k - h` proves coverage. Lattice constructions are tight
//! (some points sit at distance exactly `k`), which no finite `h` can
//! certify; [`exact_coverage`] settles those cases with a sweep in rotated
//! coordinates `u = x + y`, `v = x - y`, where every diamond becomes an
//! axis-aligned square and every unit cell a diamond.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, CostParams};
use crate::error::{Error, Result};
use crate::grid::{l1_distance, Grid, Point};
use crate::pathgen::{CoveringPath, SpanningStructure};
use crate::rational::{self, q, Q};
use crate::stops::StopSet;

/// Slack for float comparisons of sampled distances.
const FLOAT_GUARD: f64 = 1e-9;

/// Relative tolerance used when comparing float costs against bounds.
pub const BOUND_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverageOutcome {
    Certified,
    Counterexample,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMethod {
    Sampled,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub outcome: CoverageOutcome,
    pub certified: bool,
    pub method: CertificateMethod,
    /// Largest sampled nearest-stop distance at the finest spacing tried.
    pub max_observed_distance: f64,
    #[serde(with = "crate::rational")]
    pub sample_spacing: Q,
    pub counterexample: Option<Point>,
    /// `k - max_observed_distance`.
    pub margin: f64,
}

/// Bucketed stop positions for nearest-stop queries in floating point.
struct StopIndex {
    bucket: f64,
    cells: HashMap<(i64, i64), Vec<(f64, f64)>>,
    max_ring: i64,
}

impl StopIndex {
    fn new(stops: &[Point], bucket: f64) -> Self {
        let mut cells: HashMap<(i64, i64), Vec<(f64, f64)>> = HashMap::new();
        let (mut lo, mut hi) = ((i64::MAX, i64::MAX), (i64::MIN, i64::MIN));
        for s in stops {
            let (x, y) = s.to_f64();
            let key = ((x / bucket).floor() as i64, (y / bucket).floor() as i64);
            lo = (lo.0.min(key.0), lo.1.min(key.1));
            hi = (hi.0.max(key.0), hi.1.max(key.1));
            cells.entry(key).or_default().push((x, y));
        }
        let max_ring = if stops.is_empty() {
            0
        } else {
            (hi.0 - lo.0).max(hi.1 - lo.1) + 2
        };
        StopIndex {
            bucket,
            cells,
            max_ring,
        }
    }

    /// Distance from `(x, y)` to the nearest stop, `inf` with no stops.
    fn nearest(&self, x: f64, y: f64) -> f64 {
        let (cx, cy) = ((x / self.bucket).floor() as i64, (y / self.bucket).floor() as i64);
        let mut best = f64::INFINITY;
        for r in 0..=self.max_ring {
            for dx in -r..=r {
                for dy in -r..=r {
                    if dx.abs() != r && dy.abs() != r {
                        continue;
                    }
                    if let Some(pts) = self.cells.get(&(cx + dx, cy + dy)) {
                        for &(px, py) in pts {
                            best = best.min((px - x).abs() + (py - y).abs());
                        }
                    }
                }
            }
            // Buckets beyond ring r are at least r buckets away on one axis.
            if best <= r as f64 * self.bucket {
                break;
            }
        }
        best
    }
}

fn exact_nearest(stops: &[Point], p: &Point) -> Option<Q> {
    stops.iter().map(|s| l1_distance(s, p)).min()
}

/// One sampling pass at spacing `h`.
pub fn verify_coverage(g: &Grid, stops: &[Point], k: &Q, h: &Q) -> Result<CoverageReport> {
    if *h <= q(0) {
        return Err(Error::Domain(format!("sample spacing must be positive, got {h}")));
    }
    let kf = rational::to_f64(k);
    let hf = rational::to_f64(h);
    let index = StopIndex::new(stops, kf.max(hf).max(0.25));
    let steps = rational::floor_i64(&(q(1) / h)) + 1;
    let squares: Vec<(i64, i64)> = g.squares().iter().copied().collect();
    let worst = squares
        .par_iter()
        .map(|&(i, j)| {
            let mut worst = (f64::NEG_INFINITY, (i, j, 0i64, 0i64));
            for a in 0..=steps {
                let fx = (a as f64 * hf).min(1.0);
                for b in 0..=steps {
                    let fy = (b as f64 * hf).min(1.0);
                    let dist = index.nearest(i as f64 + fx, j as f64 + fy);
                    if dist > worst.0 {
                        worst = (dist, (i, j, a, b));
                    }
                }
            }
            worst
        })
        .reduce_with(|x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x })
        .expect("grids are non-empty");
    let m = worst.0;
    let mut report = CoverageReport {
        outcome: CoverageOutcome::Inconclusive,
        certified: false,
        method: CertificateMethod::Sampled,
        max_observed_distance: m,
        sample_spacing: *h,
        counterexample: None,
        margin: kf - m,
    };
    if m + FLOAT_GUARD * kf.max(1.0) <= kf - hf {
        report.outcome = CoverageOutcome::Certified;
        report.certified = true;
    } else if m > kf {
        let (i, j, a, b) = worst.1;
        let offset = |t: i64| rational::min(q(t as i128) * h, q(1));
        let p = Point::new(q(i as i128) + offset(a), q(j as i128) + offset(b));
        let exceeds = match exact_nearest(stops, &p) {
            None => true,
            Some(dist) => dist > *k,
        };
        if exceeds {
            report.outcome = CoverageOutcome::Counterexample;
            report.counterexample = Some(p);
        }
    }
    Ok(report)
}

/// Sampling at `h`, `h/2`, `h/4`, then the exact sweep if still
/// inconclusive.
pub fn certify_coverage(g: &Grid, stops: &[Point], k: &Q, h: &Q) -> Result<CoverageReport> {
    let mut spacing = *h;
    let mut report = verify_coverage(g, stops, k, &spacing)?;
    // Finer passes sample a superset when 1/h is an integer, so their
    // maximum cannot drop below the current one.
    let nested = rational::is_integer(&(q(1) / h));
    let finest = rational::to_f64(&(h / q(4)));
    for _ in 0..2 {
        if report.outcome != CoverageOutcome::Inconclusive {
            return Ok(report);
        }
        if nested && report.max_observed_distance > rational::to_f64(k) - finest {
            break;
        }
        spacing /= q(2);
        report = verify_coverage(g, stops, k, &spacing)?;
    }
    if report.outcome != CoverageOutcome::Inconclusive {
        return Ok(report);
    }
    let exact = exact_coverage(g, stops, k);
    report.method = CertificateMethod::Exact;
    if exact.covered {
        report.outcome = CoverageOutcome::Certified;
        report.certified = true;
    } else {
        report.outcome = CoverageOutcome::Counterexample;
        report.counterexample = exact.witness;
    }
    Ok(report)
}

/// Default sample spacing `k / 16`.
pub fn default_spacing(k: &Q) -> Q {
    k / q(16)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactCoverage {
    pub covered: bool,
    /// A grid point farther than `k` from every stop.
    pub witness: Option<Point>,
}

/// Exact decision of whether every point of `g` is within `k` of a stop.
pub fn exact_coverage(g: &Grid, stops: &[Point], k: &Q) -> ExactCoverage {
    // Stops as Chebyshev squares in (u, v), bucketed by unit cell of (x, y).
    let rotated: Vec<(Q, Q)> = stops.iter().map(|s| (s.x + s.y, s.x - s.y)).collect();
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (t, s) in stops.iter().enumerate() {
        buckets
            .entry((rational::floor_i64(&s.x), rational::floor_i64(&s.y)))
            .or_default()
            .push(t);
    }
    let reach = rational::floor_i64(k) + 2;
    let squares: Vec<(i64, i64)> = g.squares().iter().copied().collect();
    let witness = squares.par_iter().find_map_first(|&(i, j)| {
        let mut near = Vec::new();
        for bi in i - reach..=i + reach {
            for bj in j - reach..=j + reach {
                if let Some(v) = buckets.get(&(bi, bj)) {
                    near.extend(v.iter().map(|&t| &rotated[t]));
                }
            }
        }
        uncovered_point_in_cell(i, j, &near, k)
    });
    if let Some(w) = witness {
        return ExactCoverage {
            covered: false,
            witness: Some(w),
        };
    }
    ExactCoverage {
        covered: true,
        witness: None,
    }
}

fn uncovered_point_in_cell(i: i64, j: i64, squares: &[&(Q, Q)], k: &Q) -> Option<Point> {
    // The cell is |v - V| <= 1 - |u - U - 1| for u in [U, U + 2].
    let uu = q((i + j) as i128);
    let vv = q((i - j) as i128);
    let u_end = uu + q(2);
    let relevant: Vec<(Q, Q, Q, Q)> = squares
        .iter()
        .map(|(su, sv)| (su - k, su + k, sv - k, sv + k))
        .filter(|(u0, u1, v0, v1)| *u0 <= u_end && *u1 >= uu && *v0 <= vv + q(1) && *v1 >= vv - q(1))
        .collect();
    let mut cuts = vec![uu, uu + q(1), u_end];
    for (u0, u1, _, _) in &relevant {
        for c in [u0, u1] {
            if *c > uu && *c < u_end {
                cuts.push(*c);
            }
        }
    }
    cuts.sort();
    cuts.dedup();
    let width = |u: &Q| q(1) - rational::abs(&(u - uu - q(1)));
    for w in cuts.windows(2) {
        let (u0, u1) = (&w[0], &w[1]);
        let mut spans: Vec<(Q, Q)> = relevant
            .iter()
            .filter(|(a, b, _, _)| a <= u0 && b >= u1)
            .map(|(_, _, c, d)| (*c, *d))
            .collect();
        spans.sort();
        let mut merged: Vec<(Q, Q)> = Vec::new();
        for (lo, hi) in spans {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        // Gaps between merged spans, open at both ends.
        let mut gaps: Vec<(Option<Q>, Option<Q>)> = Vec::new();
        let mut prev: Option<Q> = None;
        for (lo, hi) in &merged {
            gaps.push((prev, Some(*lo)));
            prev = Some(*hi);
        }
        gaps.push((prev, None));

        let w0 = width(u0);
        let slope_up = width(u1) > w0;
        for (a, b) in gaps {
            // Need v in (a, b) and |v - V| <= width(u): width(u) > c.
            let c = match (&a, &b) {
                (Some(a), Some(b)) => rational::max(a - vv, vv - b),
                (Some(a), None) => a - vv,
                (None, Some(b)) => vv - b,
                (None, None) => q(-1),
            };
            let (lo_u, hi_u) = if slope_up {
                (rational::max(*u0, u0 + c - w0), *u1)
            } else {
                (*u0, rational::min(*u1, u0 + w0 - c))
            };
            if lo_u >= hi_u {
                continue;
            }
            let u = (lo_u + hi_u) / q(2);
            let wu = width(&u);
            let lower = match &a {
                Some(a) => rational::max(*a, vv - wu),
                None => vv - wu,
            };
            let upper = match &b {
                Some(b) => rational::min(*b, vv + wu),
                None => vv + wu,
            };
            let v = (lower + upper) / q(2);
            return Some(Point::new((u + v) / q(2), (u - v) / q(2)));
        }
    }
    None
}

/// `(T-1) f(L/(T-1)) >= A - 2k^2`, evaluated exactly. With one stop the
/// left side is `0`.
pub fn verify_tradeoff(path: &CoveringPath, g: &Grid, k: &Q) -> bool {
    tradeoff_holds(path.length(), path.stop_count(), g.area(), k)
}

pub fn tradeoff_holds(length: &Q, stops: usize, area: u64, k: &Q) -> bool {
    let rhs = q(area as i128) - q(2) * k * k;
    let lhs = if stops <= 1 {
        q(0)
    } else {
        let t0 = q(stops as i128 - 1);
        let avg = length / t0;
        if avg == q(0) {
            q(0)
        } else {
            t0 * bounds::tradeoff_area_exact(&avg, k)
        }
    };
    lhs >= rhs
}

/// Every inequality the construction promises, evaluated on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub area: u64,
    pub perimeter: u64,
    pub convex: bool,
    pub connected: bool,
    pub has_holes: bool,
    pub d: f64,
    pub lower_bound: f64,
    pub base_lower_bound: f64,
    pub realized_cost: f64,
    pub upper_general: f64,
    pub upper_convex: f64,
    pub ratio_to_lower: Option<f64>,
    /// Trade-off constraint (only meaningful when `A > 2k^2`).
    pub tradeoff_ok: bool,
    /// `cost >= sigma A0 + beta` and `cost >= sigma (A - 2k^2)`.
    pub lower_ok: bool,
    /// `|C_in| + |C_out| <= (A + 4kP + 8k^2) / f(d)`.
    pub centers_ok: bool,
    /// `|C_out| <= (4kP + 8k^2) / f(d)`.
    pub outside_ok: bool,
    /// `T <= (A + 16kP + 32k^2) / f(d)`.
    pub stop_count_ok: bool,
    /// `L <= 2d (A + 6kP + 8k^2) / f(d)`.
    pub length_ok: bool,
    /// Spanning-structure tree length `<= |C_in| d + P`; `None` when the
    /// grid has holes or several components.
    pub tree_ok: Option<bool>,
    pub tree_length: f64,
    /// `cost <= 2 sigma (A + 16kP + 32k^2)`; `None` for disconnected grids.
    pub general_ok: Option<bool>,
    /// `cost <= sigma (A + 16kP + 32k^2)`; `None` unless convex.
    pub convex_ok: Option<bool>,
}

impl AuditReport {
    pub fn all_ok(&self) -> bool {
        self.lower_ok
            && self.tradeoff_ok
            && self.centers_ok
            && self.outside_ok
            && self.stop_count_ok
            && self.length_ok
            && self.tree_ok.unwrap_or(true)
            && self.general_ok.unwrap_or(true)
            && self.convex_ok.unwrap_or(true)
    }
}

fn le(a: f64, b: f64) -> bool {
    a <= b + BOUND_RTOL * b.abs().max(1.0)
}

pub fn audit(
    g: &Grid,
    p: &CostParams,
    path: &CoveringPath,
    ss: &StopSet,
    structure: Option<&SpanningStructure>,
) -> AuditReport {
    let (area, perimeter) = (g.area() as f64, g.perimeter() as f64);
    let k = p.k_f64();
    let d = rational::to_f64(&ss.lattice.d);
    let f = bounds::tradeoff_area(d, k).unwrap_or(f64::NAN);
    let prof = bounds::optimal_profile(p, area, perimeter);
    let cost = path.cost_with(p);
    let convex = g.is_convex();
    let connected = g.is_connected();
    let has_holes = g.has_holes();
    let lower_ok = le(prof.lower_bound, cost) && le(prof.base_lower_bound, cost);
    let tree_length = structure.map(|s| rational::to_f64(&s.tree_length())).unwrap_or(0.0);
    let tree_ok = (connected && !has_holes)
        .then(|| {
            structure.map(|s| s.tree_length() <= q(ss.c_in.len() as i128) * ss.lattice.d + q(g.perimeter() as i128))
        })
        .flatten();
    AuditReport {
        area: g.area(),
        perimeter: g.perimeter(),
        convex,
        connected,
        has_holes,
        d,
        lower_bound: prof.lower_bound,
        base_lower_bound: prof.base_lower_bound,
        realized_cost: cost,
        upper_general: prof.upper_general,
        upper_convex: prof.upper_convex,
        ratio_to_lower: (prof.lower_bound > 0.0).then(|| cost / prof.lower_bound),
        tradeoff_ok: prof.degenerate || verify_tradeoff(path, g, &p.k),
        lower_ok,
        centers_ok: le(
            (ss.c_in.len() + ss.c_out.len()) as f64,
            (area + 4.0 * k * perimeter + 8.0 * k * k) / f,
        ),
        outside_ok: le(ss.c_out.len() as f64, (4.0 * k * perimeter + 8.0 * k * k) / f),
        stop_count_ok: le(
            path.stop_count() as f64,
            (area + 16.0 * k * perimeter + 32.0 * k * k) / f,
        ),
        length_ok: le(
            path.length_f64(),
            2.0 * d * (area + 6.0 * k * perimeter + 8.0 * k * k) / f,
        ),
        tree_ok,
        tree_length,
        general_ok: connected.then(|| le(cost, prof.upper_general)),
        convex_ok: convex.then(|| le(cost, prof.upper_convex)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    fn unit() -> Grid {
        Grid::from_squares([(0, 0)]).unwrap()
    }

    #[test]
    fn centre_stop_is_tight_at_radius_one() {
        let stops = [Point::new(qr(1, 2), qr(1, 2))];
        let r = verify_coverage(&unit(), &stops, &q(1), &qr(1, 10)).unwrap();
        assert_eq!(r.outcome, CoverageOutcome::Inconclusive);
        assert!((r.max_observed_distance - 1.0).abs() < 1e-12);
        let r = verify_coverage(&unit(), &stops, &qr(6, 5), &qr(1, 10)).unwrap();
        assert_eq!(r.outcome, CoverageOutcome::Certified);
        // The exact sweep settles the tight case.
        assert!(exact_coverage(&unit(), &stops, &q(1)).covered);
        let r = certify_coverage(&unit(), &stops, &q(1), &qr(1, 16)).unwrap();
        assert!(r.certified);
        assert_eq!(r.method, CertificateMethod::Exact);
    }

    #[test]
    fn corner_stop_gives_counterexample() {
        let stops = [Point::from_ints(0, 0)];
        let r = verify_coverage(&unit(), &stops, &qr(3, 2), &qr(1, 10)).unwrap();
        assert_eq!(r.outcome, CoverageOutcome::Counterexample);
        let c = r.counterexample.unwrap();
        assert!(l1_distance(&c, &stops[0]) > qr(3, 2));
        let e = exact_coverage(&unit(), &stops, &qr(3, 2));
        assert!(!e.covered);
        let w = e.witness.unwrap();
        assert!(unit().contains(&w));
        assert!(l1_distance(&w, &stops[0]) > qr(3, 2));
    }

    #[test]
    fn no_stops_never_covers() {
        let r = verify_coverage(&unit(), &[], &q(1), &qr(1, 4)).unwrap();
        assert_eq!(r.outcome, CoverageOutcome::Counterexample);
        assert!(!exact_coverage(&unit(), &[], &q(1)).covered);
    }

    #[test]
    fn rejects_nonpositive_spacing() {
        assert!(verify_coverage(&unit(), &[], &q(1), &q(0)).is_err());
    }

    #[test]
    fn exact_detects_thin_gap() {
        // Two stops on a 2x1 strip leaving a sliver near the middle top edge.
        let g = Grid::rectangle(2, 1).unwrap();
        let stops = [Point::new(qr(1, 2), qr(1, 2)), Point::new(qr(3, 2), qr(1, 2))];
        assert!(exact_coverage(&g, &stops, &q(1)).covered);
        let k = qr(99, 100);
        let e = exact_coverage(&g, &stops, &k);
        assert!(!e.covered);
        let w = e.witness.unwrap();
        assert!(g.contains(&w));
        assert!(stops.iter().all(|s| l1_distance(s, &w) > k));
    }

    #[test]
    fn exact_agrees_with_brute_force() {
        // Dense exact sampling against the sweep on small configurations.
        let g = crate::grid::parse_grid("##.\n###").unwrap();
        let configs: Vec<(Vec<Point>, Q)> = vec![
            (vec![Point::from_ints(1, 1)], q(2)),
            (vec![Point::from_ints(1, 1)], qr(3, 2)),
            (
                vec![Point::new(qr(1, 2), qr(3, 2)), Point::new(qr(5, 2), qr(1, 2))],
                q(1),
            ),
            (
                vec![Point::new(qr(1, 2), qr(3, 2)), Point::new(qr(5, 2), qr(1, 2))],
                qr(5, 4),
            ),
            (
                vec![
                    Point::new(qr(1, 2), qr(1, 2)),
                    Point::new(qr(3, 2), qr(3, 2)),
                    Point::new(qr(5, 2), qr(1, 2)),
                ],
                q(1),
            ),
        ];
        for (stops, k) in configs {
            let mut brute = true;
            for &(i, j) in g.squares() {
                for a in 0..=24 {
                    for b in 0..=24 {
                        let p = Point::new(q(i as i128) + qr(a, 24), q(j as i128) + qr(b, 24));
                        if exact_nearest(&stops, &p).unwrap() > k {
                            brute = false;
                        }
                    }
                }
            }
            let e = exact_coverage(&g, &stops, &k);
            // Brute sampling can miss gaps, never invent them.
            if !brute {
                assert!(!e.covered);
            }
            if !e.covered {
                let w = e.witness.unwrap();
                assert!(exact_nearest(&stops, &w).unwrap() > k);
            }
        }
    }

    #[test]
    fn tradeoff_examples() {
        // One stop on a 10x10 grid with k = 1 cannot satisfy the constraint.
        assert!(!tradeoff_holds(&q(0), 1, 100, &q(1)));
        // A = 2k^2 is satisfied trivially.
        assert!(tradeoff_holds(&q(0), 1, 2, &q(1)));
        // 2 stops at distance 2 add f(2) = 2: covers 2 + 2 = 4.
        assert!(tradeoff_holds(&q(2), 2, 4, &q(1)));
        assert!(!tradeoff_holds(&q(2), 2, 5, &q(1)));
    }
}

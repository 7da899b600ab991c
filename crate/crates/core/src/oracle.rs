//! Brute-force reference solver for tiny instances.
//!
//! Stops are restricted to a square candidate lattice inside the grid, so
//! the result is the optimum relative to that lattice. It is never below the
//! true optimum, which keeps lower-bound cross-checks valid.

use rayon::prelude::*;

use crate::bounds::{self, CostParams};
use crate::error::{Error, Result};
use crate::generate::Instance;
use crate::grid::{Grid, Point};
use crate::pathgen::{construct_with, ConstructOptions, CoveringPath, PathMethod};
use crate::rational::{self, q, qr, Q};
use crate::verify::exact_coverage;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub spacing: Q,
    pub max_candidates: usize,
    pub max_subset: usize,
    pub params: CostParams,
}

impl OracleConfig {
    pub fn new(params: CostParams) -> Self {
        OracleConfig {
            spacing: qr(1, 2),
            max_candidates: 24,
            max_subset: 10,
            params,
        }
    }
}

/// Candidate stops: lattice points of the given spacing, anchored at the
/// bounding-box corner, that lie in the grid.
pub fn candidates(g: &Grid, spacing: &Q) -> Result<Vec<Point>> {
    if *spacing <= q(0) {
        return Err(Error::Domain(format!("candidate spacing {spacing} must be positive")));
    }
    let b = g.bbox();
    let nx = rational::floor_i64(&(q(b.width() as i128) / spacing));
    let ny = rational::floor_i64(&(q(b.height() as i128) / spacing));
    let origin = Point::from_ints(b.min_i, b.min_j);
    let mut out = Vec::new();
    for a in 0..=nx {
        for c in 0..=ny {
            let p = origin.offset(&(spacing * q(a as i128)), &(spacing * q(c as i128)));
            if g.contains(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Minimum open Hamiltonian path over an integer distance matrix by dynamic
/// programming over subsets. Returns the length and a visiting order.
pub fn held_karp(dist: &[Vec<u64>]) -> (u64, Vec<usize>) {
    let n = dist.len();
    if n <= 1 {
        return (0, (0..n).collect());
    }
    let full = 1usize << n;
    let mut dp = vec![u64::MAX; full * n];
    let mut parent = vec![usize::MAX; full * n];
    for v in 0..n {
        dp[(1 << v) * n + v] = 0;
    }
    for mask in 1..full {
        for v in 0..n {
            let cur = dp[mask * n + v];
            if cur == u64::MAX || mask & (1 << v) == 0 {
                continue;
            }
            for w in 0..n {
                if mask & (1 << w) != 0 {
                    continue;
                }
                let next = mask | (1 << w);
                let cand = cur + dist[v][w];
                if cand < dp[next * n + w] {
                    dp[next * n + w] = cand;
                    parent[next * n + w] = v;
                }
            }
        }
    }
    let last_mask = full - 1;
    let (mut v, best) = (0..n)
        .map(|v| (v, dp[last_mask * n + v]))
        .min_by_key(|&(v, c)| (c, v))
        .expect("n > 1");
    let mut order = Vec::with_capacity(n);
    let mut mask = last_mask;
    loop {
        order.push(v);
        let p = parent[mask * n + v];
        mask &= !(1 << v);
        if p == usize::MAX {
            break;
        }
        v = p;
    }
    order.reverse();
    (best, order)
}

/// Minimum open Hamiltonian path by trying every permutation.
pub fn brute_force_path(dist: &[Vec<u64>]) -> u64 {
    fn rec(dist: &[Vec<u64>], last: Option<usize>, used: &mut [bool], acc: u64, best: &mut u64) {
        if used.iter().all(|&u| u) {
            *best = (*best).min(acc);
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                let step = last.map_or(0, |l| dist[l][v]);
                rec(dist, Some(v), used, acc + step, best);
                used[v] = false;
            }
        }
    }
    if dist.is_empty() {
        return 0;
    }
    let mut best = u64::MAX;
    rec(dist, None, &mut vec![false; dist.len()], 0, &mut best);
    best
}

struct Bitset(Vec<u64>);

impl Bitset {
    fn new(n: usize) -> Self {
        Bitset(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn or(&mut self, other: &Bitset) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
    fn is_full(&self, n: usize) -> bool {
        (0..n).all(|i| self.0[i / 64] & (1 << (i % 64)) != 0)
    }
}

#[derive(Clone)]
struct Best {
    cost: f64,
    subset: Vec<usize>,
    order: Vec<usize>,
}

fn better(a: &Best, b: &Best) -> bool {
    a.cost.total_cmp(&b.cost).then_with(|| a.subset.cmp(&b.subset)).is_lt()
}

struct Search<'a> {
    g: &'a Grid,
    cands: &'a [Point],
    units: &'a [Vec<u64>],
    masks: &'a [Bitset],
    samples: usize,
    cfg: &'a OracleConfig,
    unit_len: f64,
}

impl Search<'_> {
    fn evaluate(&self, subset: &[usize]) -> Option<Best> {
        let mut acc = Bitset::new(self.samples);
        for &c in subset {
            acc.or(&self.masks[c]);
        }
        if !acc.is_full(self.samples) {
            return None;
        }
        let pts: Vec<Point> = subset.iter().map(|&c| self.cands[c].clone()).collect();
        if !exact_coverage(self.g, &pts, &self.cfg.params.k).covered {
            return None;
        }
        let dist: Vec<Vec<u64>> = subset
            .iter()
            .map(|&a| subset.iter().map(|&b| self.units[a][b]).collect())
            .collect();
        let (len, order) = held_karp(&dist);
        let p = &self.cfg.params;
        Some(Best {
            cost: p.alpha * len as f64 * self.unit_len + p.beta * subset.len() as f64,
            subset: subset.to_vec(),
            order: order.into_iter().map(|i| subset[i]).collect(),
        })
    }

    /// Best covering subset of size `t` whose smallest index is `first`.
    fn stratum(&self, first: usize, t: usize) -> Option<Best> {
        let n = self.cands.len();
        let mut best: Option<Best> = None;
        let mut idx: Vec<usize> = (first..first + t).collect();
        if *idx.last()? >= n {
            return None;
        }
        loop {
            if let Some(b) = self.evaluate(&idx) {
                if best.as_ref().is_none_or(|cur| better(&b, cur)) {
                    best = Some(b);
                }
            }
            // Advance positions 1..t, keeping idx[0] fixed.
            let mut pos = t;
            loop {
                if pos <= 1 {
                    return best;
                }
                pos -= 1;
                if idx[pos] < n - (t - pos) {
                    idx[pos] += 1;
                    for r in pos + 1..t {
                        idx[r] = idx[r - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

/// Lattice-restricted minimum-cost covering path.
pub fn solve_exact(g: &Grid, cfg: &OracleConfig) -> Result<CoveringPath> {
    let cands = candidates(g, &cfg.spacing)?;
    if cands.len() > cfg.max_candidates {
        return Err(Error::OracleTooLarge {
            candidates: cands.len(),
            limit: cfg.max_candidates,
        });
    }
    let k = &cfg.params.k;
    // Distances in units of the spacing are integers.
    let units: Vec<Vec<u64>> = cands
        .iter()
        .map(|a| {
            cands
                .iter()
                .map(|b| {
                    let d = crate::grid::l1_distance(a, b) / cfg.spacing;
                    debug_assert!(rational::is_integer(&d));
                    d.to_integer() as u64
                })
                .collect()
        })
        .collect();
    // Necessary condition: every corner, edge midpoint and centre covered.
    let mut samples: Vec<Point> = Vec::new();
    for &(i, j) in g.squares() {
        for a in 0..=2 {
            for b in 0..=2 {
                samples.push(Point::from_ints(i, j).offset(&qr(a, 2), &qr(b, 2)));
            }
        }
    }
    samples.sort();
    samples.dedup();
    let masks: Vec<Bitset> = cands
        .iter()
        .map(|c| {
            let mut m = Bitset::new(samples.len());
            for (t, s) in samples.iter().enumerate() {
                if crate::grid::l1_distance(c, s) <= *k {
                    m.set(t);
                }
            }
            m
        })
        .collect();
    let search = Search {
        g,
        cands: &cands,
        units: &units,
        masks: &masks,
        samples: samples.len(),
        cfg,
        unit_len: rational::to_f64(&cfg.spacing),
    };

    let mut best: Option<Best> = None;
    for t in 1..=cfg.max_subset.min(cands.len()) {
        if let Some(b) = &best {
            if cfg.params.beta * t as f64 >= b.cost {
                break;
            }
        }
        let found = (0..cands.len())
            .into_par_iter()
            .filter_map(|first| search.stratum(first, t))
            .reduce_with(|a, b| if better(&b, &a) { b } else { a });
        if let Some(f) = found {
            if best.as_ref().is_none_or(|cur| better(&f, cur)) {
                best = Some(f);
            }
        }
    }
    let best = best.ok_or_else(|| Error::OracleInfeasible {
        max_size: cfg.max_subset,
        spacing: cfg.spacing.to_string(),
    })?;
    let stops = best.order.iter().map(|&c| cands[c].clone()).collect();
    Ok(CoveringPath::new(stops, PathMethod::Oracle, None))
}

pub const CSV_HEADER: [&str; 14] = [
    "instance",
    "seed",
    "A",
    "P",
    "convex",
    "k",
    "alpha",
    "beta",
    "d",
    "lower",
    "oracle",
    "constructed",
    "ratio_lower",
    "ratio_oracle",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub instance: String,
    pub seed: u64,
    pub area: u64,
    pub perimeter: u64,
    pub convex: bool,
    pub d: Option<Q>,
    pub lower: f64,
    pub oracle: std::result::Result<f64, String>,
    pub constructed: std::result::Result<f64, String>,
}

impl RatioRow {
    pub fn ratio_lower(&self) -> Option<f64> {
        match &self.constructed {
            Ok(c) if self.lower > 0.0 => Some(c / self.lower),
            _ => None,
        }
    }

    pub fn ratio_oracle(&self) -> Option<f64> {
        match (&self.constructed, &self.oracle) {
            (Ok(c), Ok(o)) if *o > 0.0 => Some(c / o),
            _ => None,
        }
    }
}

fn error_marker(e: &Error) -> String {
    let kind = match e {
        Error::OracleTooLarge { .. } => "too-large",
        Error::OracleInfeasible { .. } => "infeasible",
        Error::Disconnected { .. } => "disconnected",
        Error::Invariant(_) => "invariant",
        _ => "error",
    };
    format!("ERR:{kind}")
}

/// Runs the oracle and the construction on every instance. Failures are
/// recorded in the row and the study continues.
pub fn ratio_rows(instances: &[Instance], cfg: &OracleConfig) -> Vec<RatioRow> {
    let p = &cfg.params;
    instances
        .par_iter()
        .map(|inst| {
            let g = &inst.grid;
            let profile = bounds::profile_for_grid(p, g);
            let constructed = construct_with(g, p, &ConstructOptions::default());
            RatioRow {
                instance: inst.name.clone(),
                seed: inst.seed,
                area: g.area(),
                perimeter: g.perimeter(),
                convex: g.is_convex(),
                d: constructed.as_ref().ok().map(|c| c.d),
                lower: profile.lower_bound,
                oracle: solve_exact(g, cfg)
                    .map(|o| o.cost_with(p))
                    .map_err(|e| error_marker(&e)),
                constructed: constructed.map(|c| c.cost).map_err(|e| error_marker(&e)),
            }
        })
        .collect()
}

fn fmt(v: f64) -> String {
    format!("{v:.6}")
}

pub fn rows_to_csv(rows: &[RatioRow], p: &CostParams) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        let or_marker = |v: &std::result::Result<f64, String>| match v {
            Ok(x) => fmt(*x),
            Err(m) => m.clone(),
        };
        w.write_record([
            r.instance.clone(),
            r.seed.to_string(),
            r.area.to_string(),
            r.perimeter.to_string(),
            r.convex.to_string(),
            p.k.to_string(),
            fmt(p.alpha),
            fmt(p.beta),
            r.d.as_ref().map(|d| d.to_string()).unwrap_or_default(),
            fmt(r.lower),
            or_marker(&r.oracle),
            or_marker(&r.constructed),
            r.ratio_lower().map(fmt).unwrap_or_default(),
            r.ratio_oracle().map(fmt).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// CSV table of constructed cost against the lower bound and the oracle.
pub fn ratio_study(instances: &[Instance], cfg: &OracleConfig) -> String {
    rows_to_csv(&ratio_rows(instances, cfg), &cfg.params)
}

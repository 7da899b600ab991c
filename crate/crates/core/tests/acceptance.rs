use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gridcover::bounds::{self, CostParams};
use gridcover::generate::{self, Instance};
use gridcover::oracle::{self, brute_force_path, candidates, held_karp, solve_exact, OracleConfig};
use gridcover::pathgen::{construct_with, ConstructOptions, Construction};
use gridcover::rational::{q, qr, to_f64};
use gridcover::stops::StopLattice;
use gridcover::verify::{
    self, audit, certify_coverage, tradeoff_holds, AuditReport, CertificateMethod, CoverageOutcome,
};
use gridcover::{l1_distance, Grid, Point, Q};

const SEED: u64 = 20240613;

type Check<'a> = Box<dyn Fn() -> Result<String, String> + 'a>;

struct Run {
    inst: Instance,
    params: CostParams,
    built: Construction,
    audit: AuditReport,
}

fn params_for(i: usize) -> CostParams {
    let k = [q(1), qr(1, 2), q(2), qr(3, 2)][i % 4];
    let beta = [1.0, 0.5, 2.0, 0.0, 1.0][i % 5];
    CostParams::new(k, 1.0, beta).unwrap()
}

fn build_all() -> Vec<Run> {
    generate::suite(SEED, 100)
        .into_iter()
        .enumerate()
        .map(|(i, inst)| {
            let params = params_for(i);
            let built = construct_with(&inst.grid, &params, &ConstructOptions::default())
                .unwrap_or_else(|e| panic!("{}: {e}", inst.name));
            let audit = audit(
                &inst.grid,
                &params,
                &built.path,
                &built.stop_set,
                Some(&built.structure),
            );
            Run {
                inst,
                params,
                built,
                audit,
            }
        })
        .collect()
}

fn c1_sigma() -> Result<String, String> {
    let s1 = bounds::sigma(1.0, 1.0, 1.0);
    let s2 = bounds::sigma_via_spacing(1.0, 1.0, 1.0).ok_or("no spacing form")?;
    let rel = (s1 - s2).abs() / s1;
    if rel > 1e-12 || (s1 - 1.3090).abs() > 5e-5 {
        return Err(format!("sigma {s1} vs {s2}"));
    }
    for (area, k) in [(100.0, 1.0), (57.0, 0.5), (400.0, 2.0)] {
        let p = CostParams::new(Q::new((k * 2.0) as i128, 2), 1.0, 0.0).unwrap();
        let lb = bounds::optimal_profile(&p, area, 0.0).lower_bound;
        if lb != (area - 2.0 * k * k) / (2.0 * k) {
            return Err(format!("beta = 0 bound {lb} for A = {area}, k = {k}"));
        }
    }
    Ok(format!("sigma = {s1:.12}, relative gap {rel:.1e}"))
}

fn c2_cross() -> Result<String, String> {
    for n in 1..=50 {
        let g = Grid::cross(n).unwrap();
        if g.area() != 4 * n as u64 + 1 || g.perimeter() != 8 * n as u64 + 4 {
            return Err(format!("n = {n}: A = {}, P = {}", g.area(), g.perimeter()));
        }
    }
    Ok("n = 1..50".into())
}

fn nearest(lat: &StopLattice, p: &Point) -> Q {
    let (m, n) = lat.nearest_center(p);
    let mut best: Option<Q> = None;
    for dm in -2..=2 {
        for dn in -2..=2 {
            let dist = l1_distance(p, &lat.center(m + dm, n + dn));
            if best.as_ref().is_none_or(|b| dist < *b) {
                best = Some(dist);
            }
        }
    }
    best.unwrap()
}

fn c3_lattice() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_gap: f64 = 0.0;
    for _ in 0..20 {
        let k = qr(rng.gen_range(1..=8), 2);
        let d = k * q(2) * qr(rng.gen_range(1..=64), 64);
        let lat = StopLattice::new(d, k, Point::from_ints(0, 0)).map_err(|e| e.to_string())?;
        let steps = 24;
        let mut samples = Vec::new();
        for a in 0..=steps {
            for b in 0..=steps {
                samples.push(Point::new(q(2) * lat.s * qr(a, steps), d * qr(b, steps)));
            }
        }
        for (m, n) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            samples.extend(lat.cell_polygon(&lat.center(m, n)));
        }
        let max = samples.iter().map(|p| nearest(&lat, p)).max().unwrap();
        let gap = (to_f64(&max) - to_f64(&k)).abs();
        worst_gap = worst_gap.max(gap);
        if gap > 1e-9 {
            return Err(format!("k = {k}, d = {d}: max distance {max}"));
        }
    }
    Ok(format!("20 (k, d) pairs, worst |max - k| = {worst_gap:.1e}"))
}

fn c4_coverage(runs: &[Run]) -> Result<String, String> {
    let (mut sampled, mut exact, mut holes) = (0, 0, 0);
    for r in runs {
        let k = &r.params.k;
        let rep = certify_coverage(&r.inst.grid, r.built.path.stops(), k, &verify::default_spacing(k))
            .map_err(|e| e.to_string())?;
        match rep.outcome {
            CoverageOutcome::Certified if rep.method == CertificateMethod::Sampled => sampled += 1,
            CoverageOutcome::Certified => exact += 1,
            CoverageOutcome::Counterexample => {
                return Err(format!("{}: uncovered point {:?}", r.inst.name, rep.counterexample))
            }
            CoverageOutcome::Inconclusive => return Err(format!("{}: inconclusive", r.inst.name)),
        }
        holes += r.inst.grid.has_holes() as usize;
    }
    Ok(format!(
        "{} grids ({holes} with holes): {sampled} by sampling at k/16, {exact} by exact sweep, 0 counterexamples",
        runs.len()
    ))
}

fn c5_sandwich(runs: &[Run]) -> Result<String, String> {
    let (mut checked, mut convex) = (0, 0);
    for r in runs {
        let a = &r.audit;
        if a.base_lower_bound <= 0.0 {
            continue;
        }
        checked += 1;
        if !a.lower_ok || a.general_ok != Some(true) {
            return Err(format!(
                "{}: cost {} outside [{}, {}]",
                r.inst.name, a.realized_cost, a.base_lower_bound, a.upper_general
            ));
        }
        if a.convex {
            convex += 1;
            if a.convex_ok != Some(true) {
                return Err(format!(
                    "{}: cost {} above convex bound {}",
                    r.inst.name, a.realized_cost, a.upper_convex
                ));
            }
        }
    }
    Ok(format!("{checked} grids with A > 2k^2 ({convex} convex), 0 violations"))
}

fn c6_counts(runs: &[Run]) -> Result<String, String> {
    for r in runs {
        if !r.audit.stop_count_ok || !r.audit.length_ok {
            return Err(format!(
                "{}: T = {}, L = {}",
                r.inst.name,
                r.built.path.stop_count(),
                r.built.path.length_f64()
            ));
        }
    }
    Ok(format!("{} grids, 0 violations", runs.len()))
}

fn c7_tree(runs: &[Run]) -> Result<String, String> {
    let mut checked = 0;
    for r in runs {
        match r.audit.tree_ok {
            Some(true) => checked += 1,
            Some(false) => return Err(format!("{}: tree length {}", r.inst.name, r.audit.tree_length)),
            None => {}
        }
    }
    Ok(format!("{checked} connected hole-free grids, 0 violations"))
}

fn c8_tradeoff(runs: &[Run]) -> Result<String, String> {
    for r in runs {
        let path = &r.built.path;
        if !tradeoff_holds(path.length(), path.stop_count(), r.inst.grid.area(), &r.params.k) {
            return Err(format!("{}: constructed path violates the trade-off", r.inst.name));
        }
    }
    let tiny = generate::tiny_suite(SEED, 12);
    let mut oracle_paths = 0;
    for inst in &tiny {
        let cfg = OracleConfig::new(CostParams::new(q(1), 1.0, 1.0).unwrap());
        let path = solve_exact(&inst.grid, &cfg).map_err(|e| format!("{}: {e}", inst.name))?;
        let cert = certify_coverage(&inst.grid, path.stops(), &q(1), &qr(1, 16)).map_err(|e| e.to_string())?;
        if !cert.certified || !tradeoff_holds(path.length(), path.stop_count(), inst.grid.area(), &q(1)) {
            return Err(format!("{}: oracle path fails", inst.name));
        }
        oracle_paths += 1;
    }
    Ok(format!(
        "{} constructed and {oracle_paths} oracle paths, 0 violations",
        runs.len()
    ))
}

fn c9_oracle() -> Result<String, String> {
    let p = CostParams::new(q(1), 1.0, 1.0).unwrap();
    let cfg = OracleConfig::new(p.clone());
    let mut notes = Vec::new();
    for (w, h) in [(1, 1), (2, 1)] {
        let g = Grid::rectangle(w, h).unwrap();
        let opt = solve_exact(&g, &cfg).map_err(|e| e.to_string())?.cost_with(&p);
        let prof = bounds::profile_for_grid(&p, &g);
        let floor = if prof.degenerate { p.beta } else { prof.base_lower_bound };
        if opt < floor {
            return Err(format!("{w}x{h}: oracle {opt} below {floor}"));
        }
        let built = construct_with(&g, &p, &ConstructOptions::default()).map_err(|e| e.to_string())?;
        let ratio = built.cost / opt;
        if !ratio.is_finite() {
            return Err(format!("{w}x{h}: ratio {ratio}"));
        }
        notes.push(format!("{w}x{h} oracle {opt:.3} ratio {ratio:.3}"));
    }
    for (w, h) in [(1, 1), (2, 1), (1, 2)] {
        let g = Grid::rectangle(w, h).unwrap();
        let cands = candidates(&g, &qr(1, 2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + w as u64);
        for n in 1..=6.min(cands.len()) {
            for _ in 0..10 {
                let pick: Vec<&Point> = rand::seq::index::sample(&mut rng, cands.len(), n)
                    .into_iter()
                    .map(|i| &cands[i])
                    .collect();
                let dist: Vec<Vec<u64>> = pick
                    .iter()
                    .map(|a| {
                        pick.iter()
                            .map(|b| (l1_distance(a, b) * q(2)).to_integer() as u64)
                            .collect()
                    })
                    .collect();
                if held_karp(&dist).0 != brute_force_path(&dist) {
                    return Err(format!("dynamic program disagrees on {n} stops"));
                }
            }
        }
    }
    notes.push("DP = permutations on subsets <= 6".into());
    Ok(notes.join("; "))
}

fn benchmark_outputs(seed: u64) -> (String, String) {
    let insts: Vec<Instance> = generate::suite(seed, 20)
        .into_iter()
        .chain(generate::tiny_suite(seed, 5))
        .collect();
    let p = CostParams::new(q(1), 1.0, 1.0).unwrap();
    let csv = oracle::ratio_study(&insts, &OracleConfig::new(p.clone()));
    let paths: Vec<_> = insts
        .iter()
        .map(|i| {
            construct_with(&i.grid, &p, &ConstructOptions::default())
                .unwrap()
                .path
                .to_json(&p)
        })
        .collect();
    (csv, serde_json::to_string(&paths).unwrap())
}

fn c10_determinism() -> Result<String, String> {
    let a = benchmark_outputs(SEED);
    let b = benchmark_outputs(SEED);
    if a != b {
        return Err("outputs differ between runs".into());
    }
    Ok(format!(
        "{} CSV bytes and {} JSON bytes identical",
        a.0.len(),
        a.1.len()
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let runs = build_all();
    let built = start.elapsed();
    let checks: Vec<(&str, Check)> = vec![
        ("sigma closed forms", Box::new(c1_sigma)),
        ("cross area and perimeter", Box::new(c2_cross)),
        ("lattice covering radius", Box::new(c3_lattice)),
        ("stop-set coverage", Box::new(|| c4_coverage(&runs))),
        ("cost sandwich", Box::new(|| c5_sandwich(&runs))),
        ("stop count and length bounds", Box::new(|| c6_counts(&runs))),
        ("spanning tree length", Box::new(|| c7_tree(&runs))),
        ("trade-off constraint", Box::new(|| c8_tradeoff(&runs))),
        ("oracle cross-validation", Box::new(c9_oracle)),
        ("benchmark determinism", Box::new(c10_determinism)),
    ];
    println!("built 100 constructions in {:.2?}", built);
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let t = Instant::now();
        match check() {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} ({:.2?})", i + 1, t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} ({:.2?})", i + 1, t.elapsed());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

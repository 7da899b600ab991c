use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use gridcover::bounds::{self, CostParams};
use gridcover::generate;
use gridcover::grid::GridJson;
use gridcover::oracle::{self, OracleConfig};
use gridcover::pathgen::{construct_with, ConstructOptions, PathJson};
use gridcover::verify::{self, CoverageOutcome, CoverageReport};
use gridcover::{parse_grid, Error, Grid, Q};

use crate::{svg, BuildArgs, Command, CostArgs};

pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_SOFTWARE: u8 = 70;
pub const EXIT_IO: u8 = 74;
pub const EXIT_COUNTEREXAMPLE: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Io(PathBuf, std::io::Error),
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Io(..) => EXIT_IO,
            CliError::Internal(_) => EXIT_SOFTWARE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Internal(m) => f.write_str(m),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Precondition(_) => CliError::Usage(e.to_string()),
            Error::Parse { .. } | Error::EmptyGrid | Error::OracleTooLarge { .. } | Error::OracleInfeasible { .. } => {
                CliError::Data(e.to_string())
            }
            Error::Invariant(_) | Error::Disconnected { .. } | Error::Rational(_) => CliError::Internal(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load_grid(path: &Path) -> CliResult<Grid> {
    let text = read(path)?;
    let grid = if text.trim_start().starts_with('{') {
        let json: GridJson =
            serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        json.to_grid()
    } else {
        parse_grid(&text)
    };
    grid.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_path(path: &Path) -> CliResult<PathJson> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn emit(dest: Option<&Path>, text: &str) -> CliResult<()> {
    match dest {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn params(c: &CostArgs) -> CliResult<CostParams> {
    Ok(CostParams::new(c.k, c.alpha, c.beta)?)
}

fn options(b: &BuildArgs) -> ConstructOptions {
    ConstructOptions {
        d: b.d,
        scan_phase: b.scan_phase,
        ..Default::default()
    }
}

pub fn run(cmd: Command) -> CliResult<u8> {
    match cmd {
        Command::Bounds {
            grid,
            area,
            perimeter,
            cost,
        } => cmd_bounds(grid.as_deref(), area, perimeter, &cost),
        Command::Construct {
            grid,
            cost,
            build,
            output,
            svg,
        } => cmd_construct(&grid, &cost, &build, output.as_deref(), svg.as_deref()),
        Command::Verify {
            grid,
            path,
            k,
            h,
            sampling_only,
        } => cmd_verify(&grid, &path, &k, h, sampling_only),
        Command::Oracle {
            grid,
            cost,
            spacing,
            max_candidates,
            max_subset,
            output,
        } => {
            let g = load_grid(&grid)?;
            let p = params(&cost)?;
            let cfg = OracleConfig {
                spacing,
                max_candidates,
                max_subset,
                params: p.clone(),
            };
            let path = oracle::solve_exact(&g, &cfg)?;
            emit(output.as_deref(), &to_json(&path.to_json(&p)))?;
            Ok(0)
        }
        Command::Benchmark {
            cost,
            seed,
            count,
            tiny,
            output,
            paths,
        } => cmd_benchmark(&cost, seed, count, tiny, output.as_deref(), paths.as_deref()),
        Command::Render {
            grid,
            cost,
            build,
            path,
            output,
        } => {
            let g = load_grid(&grid)?;
            let p = params(&cost)?;
            let c = construct_with(&g, &p, &options(&build))?;
            let drawn = match path {
                Some(file) => load_path(&file)?.to_path()?,
                None => c.path.clone(),
            };
            emit(output.as_deref(), &svg::render(&g, &c.stop_set, &drawn))?;
            Ok(0)
        }
    }
}

fn cmd_bounds(grid: Option<&Path>, area: Option<u64>, perimeter: Option<u64>, cost: &CostArgs) -> CliResult<u8> {
    let p = params(cost)?;
    let (a, per) = match (grid, area, perimeter) {
        (Some(path), _, _) => {
            let g = load_grid(path)?;
            (g.area(), g.perimeter())
        }
        (None, Some(a), Some(per)) => (a, per),
        _ => {
            return Err(CliError::Usage(
                "either --grid or both --area and --perimeter are required".into(),
            ))
        }
    };
    let profile = bounds::optimal_profile(&p, a as f64, per as f64);
    emit(None, &to_json(&profile))?;
    Ok(0)
}

fn certify(
    g: &Grid,
    stops: &[gridcover::Point],
    k: &Q,
    h: Option<Q>,
    sampling_only: bool,
) -> CliResult<CoverageReport> {
    let h = h.unwrap_or_else(|| verify::default_spacing(k));
    let report = if sampling_only {
        verify::verify_coverage(g, stops, k, &h)?
    } else {
        verify::certify_coverage(g, stops, k, &h)?
    };
    Ok(report)
}

fn cmd_construct(
    grid: &Path,
    cost: &CostArgs,
    build: &BuildArgs,
    output: Option<&Path>,
    svg_out: Option<&Path>,
) -> CliResult<u8> {
    let g = load_grid(grid)?;
    let p = params(cost)?;
    let c = construct_with(&g, &p, &options(build))?;
    let report = certify(&g, c.path.stops(), &p.k, None, false)?;
    if !report.certified {
        return Err(CliError::Internal(format!(
            "constructed stops failed coverage: {:?}",
            report.counterexample
        )));
    }
    emit(output, &to_json(&c.path.to_json(&p)))?;
    if let Some(dest) = svg_out {
        emit(Some(dest), &svg::render(&g, &c.stop_set, &c.path))?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOutput {
    coverage: CoverageReport,
    tradeoff_ok: bool,
    #[serde(rename = "L")]
    length: String,
    #[serde(rename = "T")]
    stop_count: usize,
}

fn cmd_verify(grid: &Path, path: &Path, k: &Q, h: Option<Q>, sampling_only: bool) -> CliResult<u8> {
    let g = load_grid(grid)?;
    let path = load_path(path)?.to_path()?;
    if *k <= Q::from_integer(0) {
        return Err(CliError::Usage(format!("k must be positive, got {k}")));
    }
    let coverage = certify(&g, path.stops(), k, h, sampling_only)?;
    let outcome = coverage.outcome;
    let out = VerifyOutput {
        coverage,
        tradeoff_ok: verify::tradeoff_holds(path.length(), path.stop_count(), g.area(), k),
        length: path.length().to_string(),
        stop_count: path.stop_count(),
    };
    emit(None, &to_json(&out))?;
    Ok(match outcome {
        CoverageOutcome::Certified => 0,
        CoverageOutcome::Counterexample => EXIT_COUNTEREXAMPLE,
        CoverageOutcome::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

#[derive(Serialize)]
struct BenchPath {
    instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<PathJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn cmd_benchmark(
    cost: &CostArgs,
    seed: u64,
    count: usize,
    tiny: usize,
    output: Option<&Path>,
    paths: Option<&Path>,
) -> CliResult<u8> {
    let p = params(cost)?;
    let instances: Vec<_> = generate::suite(seed, count)
        .into_iter()
        .chain(generate::tiny_suite(seed, tiny))
        .collect();
    let cfg = OracleConfig::new(p.clone());
    emit(output, &oracle::ratio_study(&instances, &cfg))?;
    if let Some(dest) = paths {
        let all: Vec<BenchPath> = instances
            .iter()
            .map(
                |inst| match construct_with(&inst.grid, &p, &ConstructOptions::default()) {
                    Ok(c) => BenchPath {
                        instance: inst.name.clone(),
                        path: Some(c.path.to_json(&p)),
                        error: None,
                    },
                    Err(e) => BenchPath {
                        instance: inst.name.clone(),
                        path: None,
                        error: Some(e.to_string()),
                    },
                },
            )
            .collect();
        emit(Some(dest), &to_json(&all))?;
    }
    Ok(0)
}

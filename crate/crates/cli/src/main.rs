//! `sanya`: plan, check and benchmark routes on the sphere.
//!
//! Exit codes: 0 success, 1 bad input or I/O failure, 2 no route exists
//! (`route`), 3 route crosses blocked cells (`validate`).

mod geojson;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spherical_anya::anya_core::{euclid_search, legality_check, recipe1, recipe2};
use spherical_anya::bench::{run_benchmark, BenchOptions, BenchReport, Recipe, DEFAULT_STEP_ARCSEC};
use spherical_anya::grid::RasterFormat;
use spherical_anya::sanya::{search, SearchConfig};
use spherical_anya::{GridMap, GridPoint, RouteRecord, SearchError, SphereConfig, SpherePoint};

#[derive(Parser)]
#[command(name = "sanya", version, about = "Optimal any-angle routes on the sphere over occupancy grids")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Plan a route and write it as GeoJSON.
    Route(RouteArgs),
    /// Compare the spherical search with the flat baseline over random endpoint pairs.
    Bench(BenchArgs),
    /// Check a GeoJSON route against a map.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Movingai,
    Esri,
    Raw16,
}

#[derive(Args)]
struct MapArgs {
    /// Map format; inferred from the extension when omitted (.map, .asc, .raw).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Columns of a raw16 raster.
    #[arg(long)]
    ncols: Option<usize>,
    /// Rows of a raw16 raster.
    #[arg(long)]
    nrows: Option<usize>,
    /// Raster cells strictly below this value are traversable.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    sea_level: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Spherical,
    Euclidean,
    Both,
}

#[derive(Args)]
struct RouteArgs {
    #[arg(long)]
    map: PathBuf,
    #[command(flatten)]
    map_args: MapArgs,
    /// Start as LAT,LON in degrees.
    #[arg(long, value_parser = parse_lat_lon, allow_hyphen_values = true)]
    from: SpherePoint,
    /// Goal as LAT,LON in degrees.
    #[arg(long, value_parser = parse_lat_lon, allow_hyphen_values = true)]
    to: SpherePoint,
    #[arg(long, value_enum, default_value = "spherical")]
    algo: Algo,
    /// How the flat baseline is carried onto the sphere.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    recipe: u8,
    /// Densification step of recipe 2, arc-seconds.
    #[arg(long, default_value_t = DEFAULT_STEP_ARCSEC)]
    step_arcsec: f64,
    #[arg(long, default_value_t = 6371.0)]
    radius_km: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Glob of map files.
    #[arg(long)]
    maps: String,
    #[command(flatten)]
    map_args: MapArgs,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_STEP_ARCSEC)]
    step_arcsec: f64,
    #[arg(long, default_value_t = 6371.0)]
    radius_km: f64,
    /// Directory for instances.csv and summary.csv.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    map: PathBuf,
    #[command(flatten)]
    map_args: MapArgs,
    #[arg(long)]
    route: PathBuf,
}

fn parse_lat_lon(s: &str) -> Result<SpherePoint, String> {
    let (a, b) = s.split_once(',').ok_or("expected LAT,LON")?;
    let lat: f64 = a.trim().parse().map_err(|e| format!("latitude: {e}"))?;
    let lon: f64 = b.trim().parse().map_err(|e| format!("longitude: {e}"))?;
    if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
        return Err("latitude must lie in [-90, 90] and longitude in [-180, 180]".into());
    }
    Ok(SpherePoint::from_deg(lon, lat))
}

fn load_map(path: &Path, a: &MapArgs) -> Result<GridMap, String> {
    let format = match a.format {
        Some(f) => f,
        None => match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("map") => Format::Movingai,
            Some("asc") => Format::Esri,
            Some("raw") | Some("bin") => Format::Raw16,
            _ => return Err(format!("{}: cannot infer the map format; pass --format", path.display())),
        },
    };
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let sea = a.sea_level;
    let map = match format {
        Format::Movingai => GridMap::load_movingai(&bytes),
        Format::Esri => GridMap::load_raster(&bytes, RasterFormat::EsriAscii, |v| v < sea),
        Format::Raw16 => {
            let (Some(ncols), Some(nrows)) = (a.ncols, a.nrows) else {
                return Err("raw16 maps need --ncols and --nrows".into());
            };
            GridMap::load_raster(&bytes, RasterFormat::RawI16 { ncols, nrows }, |v| v < sea)
        }
    };
    map.map_err(|e| format!("{}: {e}", path.display()))
}

/// Nearest traversable vertex no more than one cell away in either axis.
fn snap(map: &GridMap, p: SpherePoint) -> Option<GridPoint> {
    let g = map.sphere_to_grid(p);
    let mut best: Option<(f64, GridPoint)> = None;
    for row in (g.row.floor() as i64 - 1)..=(g.row.ceil() as i64 + 1) {
        for k in (g.x.floor() as i64 - 1)..=(g.x.ceil() as i64 + 1) {
            let (dr, dx) = (row as f64 - g.row, k as f64 - g.x);
            if dr.abs() > 1.0 || dx.abs() > 1.0 || row < 0 || k < 0 {
                continue;
            }
            if row > map.height() as i64 || k > map.width() as i64 || !map.vertex_traversable(row, k) {
                continue;
            }
            let d = dr.hypot(dx);
            if best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, GridPoint::new(row as f64, k as f64)));
            }
        }
    }
    best.map(|(_, v)| v)
}

fn describe(p: SpherePoint) -> String {
    format!("{:.6},{:.6}", p.lat_deg(), p.lon_deg())
}

enum Failure {
    Input(String),
    NoPath(String),
    Illegal,
}

fn cmd_route(a: &RouteArgs) -> Result<(), Failure> {
    let map = load_map(&a.map, &a.map_args).map_err(Failure::Input)?;
    if !(a.radius_km > 0.0) {
        return Err(Failure::Input("--radius-km must be positive".into()));
    }
    let sphere = SphereConfig::with_radius(a.radius_km);
    let s = snap(&map, a.from).ok_or_else(|| Failure::Input(format!("no traversable vertex within one cell of {}", describe(a.from))))?;
    let t = snap(&map, a.to).ok_or_else(|| Failure::Input(format!("no traversable vertex within one cell of {}", describe(a.to))))?;
    let (ls, lt) = (map.vertex_to_sphere(s).lon, map.vertex_to_sphere(t).lon);
    if (ls - lt).abs() > std::f64::consts::PI {
        eprintln!("note: the shorter way round crosses the antimeridian, which the grid does not wrap; the route may be longer than necessary");
    }
    let fail = |algo: &str, e: SearchError| match e {
        SearchError::NoPath => Failure::NoPath(format!("{algo}: no route between the endpoints")),
        SearchError::InvalidEndpoint => Failure::Input(format!("{algo}: endpoint is not traversable")),
    };

    let mut routes: Vec<(&str, RouteRecord, u64)> = Vec::new();
    if a.algo != Algo::Euclidean {
        let clock = Instant::now();
        let r = search(&map, s, t, &SearchConfig { sphere }).map_err(|e| fail("spherical", e))?;
        routes.push(("spherical", r, clock.elapsed().as_nanos() as u64));
    }
    if a.algo != Algo::Spherical {
        let clock = Instant::now();
        let flat = euclid_search(&map, s, t).map_err(|e| fail("euclidean", e))?;
        let et = clock.elapsed().as_nanos() as u64;
        let r = match a.recipe {
            1 => recipe1(&flat, &map, &sphere),
            _ => recipe2(&flat, &map, a.step_arcsec, &sphere),
        };
        routes.push(("euclidean", r, et));
    }

    let mut features = Vec::new();
    for (algo, r, et_ns) in &routes {
        let legal = legality_check(r, &map).is_empty();
        println!("{algo}: {:.3} km, {} turning points, {}", r.length, r.turning_points.len(), if legal { "legal" } else { "ILLEGAL" });
        features.push(geojson::feature(&geojson::Drawn { algo, route: r, legal, et_ns: *et_ns }));
    }
    let text = serde_json::to_string_pretty(&geojson::collection(features)).expect("GeoJSON serializes");
    std::fs::write(&a.out, text).map_err(|e| Failure::Input(format!("{}: {e}", a.out.display())))
}

fn print_summary(report: &BenchReport) {
    println!("{:<13} {:<9} {:>7} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}", "recipe", "metric", "%less", "min", "q1", "median", "mean", "q3", "max", "stdev");
    for s in &report.summaries {
        for (metric, row) in [("ET", s.et_ratio), ("RL", s.rl_ratio), ("CT", s.ct_ratio)] {
            let Some(r) = row else { continue };
            println!(
                "{:<13} {:<9} {:>7.2} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
                s.recipe.name(),
                metric,
                r.pct_less,
                r.min,
                r.q1,
                r.median,
                r.mean,
                r.q3,
                r.max,
                r.stdev
            );
        }
        println!("{:<13} illegal baseline routes: {}", s.recipe.name(), s.baseline_illegal);
    }
    println!("instances: {}, skipped (no route): {}", report.instances.len(), report.skipped);
}

fn cmd_bench(a: &BenchArgs) -> Result<(), Failure> {
    if a.count == 0 {
        return Err(Failure::Input("--count must be at least 1".into()));
    }
    let mut paths: Vec<PathBuf> = glob::glob(&a.maps)
        .map_err(|e| Failure::Input(format!("bad glob: {e}")))?
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Input(e.to_string()))?;
    paths.sort();
    if paths.is_empty() {
        return Err(Failure::Input(format!("no maps match {}", a.maps)));
    }
    let maps = paths
        .iter()
        .map(|p| {
            let id = p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned());
            load_map(p, &a.map_args).map(|m| (id, m))
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::Input)?;
    let opts = BenchOptions {
        count: a.count,
        seed: a.seed,
        recipes: vec![Recipe::Direct, Recipe::Densified],
        step_arcsec: a.step_arcsec,
        sphere: SphereConfig::with_radius(a.radius_km),
    };
    let report = run_benchmark(&maps, &opts);
    report.write_csvs(&a.out).map_err(|e| Failure::Input(format!("{}: {e}", a.out.display())))?;
    print_summary(&report);
    Ok(())
}

/// Grid coordinate with float noise from the degree round trip removed.
fn clean(v: f64) -> f64 {
    if (v - v.round()).abs() < 1e-7 {
        v.round()
    } else {
        v
    }
}

fn cmd_validate(a: &ValidateArgs) -> Result<(), Failure> {
    let map = load_map(&a.map, &a.map_args).map_err(Failure::Input)?;
    let text = std::fs::read_to_string(&a.route).map_err(|e| Failure::Input(format!("{}: {e}", a.route.display())))?;
    let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", a.route.display())))?;
    let routes = geojson::read_routes(&doc).map_err(|e| Failure::Input(format!("{}: {e}", a.route.display())))?;
    let mut bad = 0;
    for (i, (pts, kinds)) in routes.into_iter().enumerate() {
        let grid_points = pts
            .iter()
            .map(|p| {
                let g = map.sphere_to_grid(*p);
                GridPoint::new(clean(g.row), clean(g.x))
            })
            .collect();
        let r = RouteRecord { grid_points, turning_points: pts, segment_kinds: kinds, ..Default::default() };
        let hits = legality_check(&r, &map);
        if hits.is_empty() {
            println!("feature {i}: legal");
        } else {
            bad += 1;
            println!("feature {i}: {} violation(s)", hits.len());
            for (seg, touch) in hits {
                println!("  segment {seg}: {touch:?}");
            }
        }
    }
    if bad == 0 {
        Ok(())
    } else {
        Err(Failure::Illegal)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Route(a) => cmd_route(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Validate(a) => cmd_validate(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::NoPath(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(Failure::Illegal) => ExitCode::from(3),
    }
}

//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spherical_anya::anya_core::{euclid_search, legality_check, recipe1, recipe2};
use spherical_anya::bench::{gen_random_map, run_benchmark, BenchOptions, InstanceSet, Recipe, DEFAULT_STEP_ARCSEC};
use spherical_anya::geom::{adjoint_departure, central_angle, lat_at_lon, SphereConfig, SpherePoint};
use spherical_anya::grid::RasterFormat;
use spherical_anya::oracle::{euclid_oracle, oracle_with, FixedVisibility};
use spherical_anya::sanya::{search, SearchConfig};
use spherical_anya::{GridMap, GridPoint, SearchError};

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: u32, ok: bool, took: Duration, detail: &str) {
        if !ok {
            self.failed += 1;
        }
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {id} ({:.1}s): {detail}", took.as_secs_f64());
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn random_point(rng: &mut ChaCha8Rng, max_lat: f64) -> SpherePoint {
    // Uniform on the sphere, then restricted in latitude.
    loop {
        let lat = (rng.gen_range(-1.0f64..1.0)).asin();
        if lat.abs() <= max_lat {
            return SpherePoint::new(rng.gen_range(-PI..PI), lat);
        }
    }
}

fn unit(p: SpherePoint) -> [f64; 3] {
    [p.lat.cos() * p.lon.cos(), p.lat.cos() * p.lon.sin(), p.lat.sin()]
}

// ---------------------------------------------------------------- 1

fn geometry_oracles(rep: &mut Report) {
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_ca, mut worst_lat) = (0.0f64, 0.0f64);
    for _ in 0..100_000 {
        let (p, q) = (random_point(&mut rng, FRAC_PI_2), random_point(&mut rng, FRAC_PI_2));
        let (u, v) = (unit(p), unit(q));
        let dot = (u[0] * v[0] + u[1] * v[1] + u[2] * v[2]).clamp(-1.0, 1.0);
        worst_ca = worst_ca.max((central_angle(p, q) - dot.acos()).abs());

        // Meridian crossing: keep clear of poles and meridian-aligned pairs.
        let (p, q) = (random_point(&mut rng, 85f64.to_radians()), random_point(&mut rng, 85f64.to_radians()));
        let span = (q.lon - p.lon + PI).rem_euclid(2.0 * PI) - PI;
        if span.abs() < 1e-3 || PI - span.abs() < 1e-3 {
            continue;
        }
        let lon = p.lon + span * rng.gen_range(0.05..0.95);
        let (u, v) = (unit(p), unit(q));
        let n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
        // n · (cosφ cosλ, cosφ sinλ, sinφ) = 0
        let want = (-(n[0] * lon.cos() + n[1] * lon.sin())).atan2(n[2]);
        let want = if want > FRAC_PI_2 { want - PI } else if want < -FRAC_PI_2 { want + PI } else { want };
        let lon = (lon + PI).rem_euclid(2.0 * PI) - PI;
        match lat_at_lon(p, q, lon) {
            Ok(got) => worst_lat = worst_lat.max((got - want).abs()),
            Err(_) => worst_lat = f64::INFINITY,
        }
    }
    let took = clock.elapsed();
    let ok = worst_ca < 1e-10 && worst_lat < 1e-12 && took.as_secs_f64() < 10.0;
    rep.line(1, ok, took, &format!("central angle max err {worst_ca:.2e} rad, meridian crossing max err {worst_lat:.2e} rad"));
}

// ---------------------------------------------------------------- 2

/// Rate at which the distance from `(lon, lat1)` to `p` changes as the point
/// moves along its meridian; it vanishes only where the great circle to `p`
/// is tangent to the parallel.
fn meridian_slope(lat1: f64, lon: f64, p: SpherePoint) -> f64 {
    lat1.cos() * p.lat.sin() - lat1.sin() * p.lat.cos() * (p.lon - lon).cos()
}

fn golden(mut a: f64, mut b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if fc < fd {
            (b, d, fd) = (d, c, fc);
            c = b - g * (b - a);
            fc = f(c);
        } else {
            (a, c, fc) = (c, d, fd);
            d = a + g * (b - a);
            fd = f(d);
        }
        if b - a < 1e-15 {
            break;
        }
    }
    (a + b) / 2.0
}

fn departure_tangency(rep: &mut Report) {
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut non_monotone, mut worst) = (0usize, 0.0f64);
    for _ in 0..1000 {
        let lat1 = rng.gen_range(5f64..80.0).to_radians();
        let lat2 = rng.gen_range(0.05..0.95) * lat1;
        let lon2 = rng.gen_range(-90f64..90.0).to_radians();
        let p = SpherePoint::new(lon2, lat2);
        let lon1 = lon2 - (lat2.tan() / lat1.tan()).acos();

        // Distance from p to points stepping down the meridian of departure.
        let mut prev = central_angle(SpherePoint::new(lon1, lat1), p);
        for k in 1..=200 {
            let lat = lat1 - k as f64 * (lat1 + 80f64.to_radians()) / 200.0;
            let d = central_angle(SpherePoint::new(lon1, lat), p);
            if d <= prev {
                non_monotone += 1;
                break;
            }
            prev = d;
        }

        // The root sits a quarter turn west of the target; search the
        // parallel between them for the tangency.
        let lon0 = lon2 - FRAC_PI_2;
        let fine = golden(lon0, lon2, |l| meridian_slope(lat1, l, p).abs());
        let root = SpherePoint::new(lon0, lat1);
        let x = adjoint_departure(root, lat1, p).map_or(f64::INFINITY, |x| x.lon);
        worst = worst.max((fine - lon1).abs()).max((x - lon1).abs());
    }
    let took = clock.elapsed();
    let ok = non_monotone == 0 && worst < 1e-9 && took.as_secs_f64() < 30.0;
    rep.line(2, ok, took, &format!("{non_monotone} non-monotone descents, departure argmin max err {worst:.2e} rad"));
}

// ---------------------------------------------------------------- 3-7

struct Case {
    name: String,
    map: GridMap,
    s: GridPoint,
    t: GridPoint,
}

fn desk_suite() -> Vec<Case> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..200u64 {
        let fill = rng.gen_range(0.1..0.4);
        let map = gen_random_map(common::SIZE, common::SIZE, fill, 1000 + i);
        let name = format!("random{i}");
        if let Some(&(s, t)) = InstanceSet::generate(&name, &map, i, 1).pairs.first() {
            out.push(Case { name, map, s, t });
        }
    }
    for f in common::drawings() {
        for &(s, t) in &f.pairs {
            out.push(Case { name: f.name.clone(), map: f.map.clone(), s, t });
        }
    }
    out
}

fn optimality_and_legality(rep: &mut Report, suite: &[Case]) -> Duration {
    let clock = Instant::now();
    let cfg = SearchConfig::default();
    let (mut above, mut below, mut illegal, mut mismatch) = (0, 0, 0, 0);
    let mut worst_gap = 0.0f64;
    let mut first = String::new();
    for c in suite {
        let fixed = FixedVisibility::new(&c.map, c.s, c.t, &cfg.sphere);
        let hi = oracle_with(&c.map, &fixed, c.s, c.t, 1.0 / 16.0, &cfg.sphere);
        let lo = oracle_with(&c.map, &fixed, c.s, c.t, 1.0 / 64.0, &cfg.sphere);
        match (search(&c.map, c.s, c.t, &cfg), hi, lo) {
            (Ok(r), Ok(hi), Ok(lo)) => {
                if !legality_check(&r, &c.map).is_empty() {
                    illegal += 1;
                }
                if r.length > hi * (1.0 + 1e-9) {
                    above += 1;
                }
                if r.length < lo * 0.995 {
                    below += 1;
                }
                if lo > 0.0 {
                    worst_gap = worst_gap.max((lo - r.length) / lo);
                }
                if (r.length > hi * (1.0 + 1e-9) || r.length < lo * 0.995) && first.is_empty() {
                    let _ = write!(first, "; first: {} {:?}->{:?} got {} bounds [{lo}, {hi}]", c.name, c.s, c.t, r.length);
                }
            }
            (Err(SearchError::NoPath), Err(_), Err(_)) => {}
            (r, hi, _) => {
                mismatch += 1;
                if first.is_empty() {
                    let _ = write!(first, "; first: {} {:?}->{:?} {:?} vs {:?}", c.name, c.s, c.t, r.map(|r| r.length), hi);
                }
            }
        }
    }
    let took = clock.elapsed();
    let ok = above == 0 && below == 0 && mismatch == 0 && took.as_secs_f64() < 600.0;
    rep.line(
        3,
        ok,
        took,
        &format!(
            "{} instances, {above} above the h=1/16 bound, {below} more than 0.5% under the h=1/64 bound \
             (largest shortfall {:.3}%), {mismatch} reachability mismatches{first}",
            suite.len(),
            worst_gap.max(0.0) * 100.0
        ),
    );
    rep.line(4, illegal == 0, took, &format!("{illegal} illegal routes over the {} desk instances (raster run follows)", suite.len()));
    took
}

/// A 1°-resolution ESRI grid of smooth synthetic relief, about 30% land.
fn synthetic_bathymetry(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blobs: Vec<(SpherePoint, f64, f64)> = (0..60)
        .map(|_| (random_point(&mut rng, FRAC_PI_2), rng.gen_range(0.1..0.45), rng.gen_range(-1.0..1.0)))
        .collect();
    let (nrows, ncols) = (180, 360);
    let mut z = Vec::with_capacity(nrows * ncols);
    for i in 0..nrows {
        for j in 0..ncols {
            let p = SpherePoint::from_deg(-179.5 + j as f64, 89.5 - i as f64);
            let v: f64 = blobs
                .iter()
                .map(|&(c, s, a)| {
                    let d = central_angle(p, c) / s;
                    a * (-0.5 * d * d).exp()
                })
                .sum();
            z.push(v);
        }
    }
    let mut sorted = z.clone();
    sorted.sort_by(f64::total_cmp);
    let sea = sorted[sorted.len() * 7 / 10];
    let mut text = format!("ncols {ncols}\nnrows {nrows}\nxllcorner -180\nyllcorner -90\ncellsize 1\nNODATA_value -99999\n");
    for row in z.chunks(ncols) {
        let cells: Vec<String> = row.iter().map(|v| format!("{}", ((v - sea) * 4000.0).round() as i64)).collect();
        text.push_str(&cells.join(" "));
        text.push('\n');
    }
    text
}

fn raster_legality(rep: &mut Report) {
    let clock = Instant::now();
    let text = synthetic_bathymetry(4);
    // Ocean is traversable; zero-elevation coast counts as land.
    let map = GridMap::load_raster(text.as_bytes(), RasterFormat::EsriAscii, |v| v < 0.0).expect("synthetic raster parses");
    let cfg = SearchConfig::default();
    let (mut illegal, mut routed, mut unreachable) = (0, 0, 0);
    for (s, t) in InstanceSet::generate("bathymetry", &map, 4, 1000).pairs {
        match search(&map, s, t, &cfg) {
            Ok(r) => {
                routed += 1;
                if !legality_check(&r, &map).is_empty() {
                    illegal += 1;
                }
            }
            Err(_) => unreachable += 1,
        }
    }
    let took = clock.elapsed();
    let ok = illegal == 0 && took.as_secs_f64() < 600.0;
    rep.line(
        4,
        ok,
        took,
        &format!("{illegal} illegal routes over {routed} routed instances on a 180x360 synthetic relief raster ({unreachable} unreachable pairs)"),
    );
}

fn baseline_matches_corner_graph(rep: &mut Report, suite: &[Case]) {
    let clock = Instant::now();
    let (mut bad, mut worst) = (0, 0.0f64);
    for c in suite {
        match (euclid_search(&c.map, c.s, c.t), euclid_oracle(&c.map, c.s, c.t)) {
            (Ok(a), Ok(b)) => {
                let e = if b == 0.0 { a.length } else { rel(a.length, b) };
                worst = worst.max(e);
                if e > 1e-9 {
                    bad += 1;
                }
            }
            (Err(a), Err(b)) if a == b => {}
            _ => bad += 1,
        }
    }
    rep.line(5, bad == 0, clock.elapsed(), &format!("{bad} of {} disagree, max relative error {worst:.2e}", suite.len()));
}

fn recipe_ordering(rep: &mut Report, suite: &[Case]) {
    let clock = Instant::now();
    let cfg = SphereConfig::default();
    let (mut ill1, mut ill2, mut shorter, mut both) = (0, 0, 0, 0);
    for c in suite {
        let Ok(f) = euclid_search(&c.map, c.s, c.t) else { continue };
        let (a, b) = (recipe1(&f, &c.map, &cfg), recipe2(&f, &c.map, DEFAULT_STEP_ARCSEC, &cfg));
        let (la, lb) = (legality_check(&a, &c.map).is_empty(), legality_check(&b, &c.map).is_empty());
        ill1 += usize::from(!la);
        ill2 += usize::from(!lb);
        if la && lb {
            both += 1;
            if b.length < a.length * (1.0 - 1e-12) {
                shorter += 1;
            }
        }
    }

    let maps: Vec<(String, GridMap)> = (0..5u64).map(|i| (format!("random10-{i}"), gen_random_map(64, 128, 0.1, 600 + i))).collect();
    let opts = BenchOptions { count: 100, seed: 6, ..Default::default() };
    let report = run_benchmark(&maps, &opts);
    let pct = |r: Recipe| {
        report.summaries.iter().find(|s| s.recipe == r).and_then(|s| s.rl_ratio).map_or(0.0, |s| s.pct_less)
    };
    let compared = report.instances.len() - report.skipped;
    let (p1, p2) = (pct(Recipe::Direct), pct(Recipe::Densified));
    // Ties are routes with the same turning points under both searches.
    let ties = report
        .instances
        .iter()
        .filter_map(|r| Some((r.spherical?, r.baseline.iter().find(|b| b.0 == Recipe::Direct)?.1?)))
        .filter(|(a, b)| rel(a.length_km, b.length_km) <= 1e-9)
        .count();
    let ok = ill2 <= ill1 && shorter == 0 && compared >= 500 && p1 > 90.0;
    rep.line(
        6,
        ok,
        clock.elapsed(),
        &format!(
            "illegal: direct {ill1}, densified {ill2}; densified shorter on {shorter} of {both} legal-under-both; \
             random 10% 64x128: {compared} instances, RL %less direct {p1:.2} ({ties} ties), densified {p2:.2}"
        ),
    );
}

fn symmetries(rep: &mut Report) {
    let clock = Instant::now();
    let cfg = SearchConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut n, mut bad, mut worst) = (0, 0, 0.0f64);
    while n < 100 {
        let map = gen_random_map(common::SIZE, common::SIZE, rng.gen_range(0.1..0.4), rng.gen());
        let Some(&(s, t)) = InstanceSet::generate("sym", &map, n, 1).pairs.first() else { continue };
        n += 1;
        let mirror = map.mirrored();
        let w = map.width() as f64;
        let flip = |p: GridPoint| GridPoint::new(p.row, w - p.x);
        let base = search(&map, s, t, &cfg);
        for other in [search(&map, t, s, &cfg), search(&mirror, flip(s), flip(t), &cfg)] {
            match (&base, &other) {
                (Ok(a), Ok(b)) => {
                    let e = if a.length == 0.0 { b.length } else { rel(a.length, b.length) };
                    worst = worst.max(e);
                    bad += usize::from(e > 1e-9);
                }
                (Err(a), Err(b)) if a == b => {}
                _ => bad += 1,
            }
        }
    }
    rep.line(7, bad == 0, clock.elapsed(), &format!("{bad} asymmetric results over {n} instances, max relative difference {worst:.2e}"));
}

fn main() -> ExitCode {
    let mut rep = Report { failed: 0 };
    geometry_oracles(&mut rep);
    departure_tangency(&mut rep);
    let suite = desk_suite();
    optimality_and_legality(&mut rep, &suite);
    raster_legality(&mut rep);
    baseline_matches_corner_graph(&mut rep, &suite);
    recipe_ordering(&mut rep, &suite);
    symmetries(&mut rep);
    println!(
        "SKIP criterion 8: full-resolution ocean benchmark figures need the 10800x21600 raster and the original \
         hardware; criteria 3-7 stand in for them"
    );
    if rep.failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} check(s) failed", rep.failed);
        ExitCode::FAILURE
    }
}

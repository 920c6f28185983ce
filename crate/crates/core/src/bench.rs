//! Instance generation, per-instance comparison of the spherical search with
//! the flat baseline, and summary statistics.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::anya_core::{euclid_search, recipe1, recipe2};
use crate::geom::SphereConfig;
use crate::grid::{GridMap, GridPoint, VertexKind};
use crate::route::{legality_check, RouteRecord};
use crate::sanya::{search, SearchConfig};

/// Relative tolerance below which two lengths count as equal.
pub const RATIO_TOL: f64 = 1e-9;

/// Default densification step of the second recipe, arc-seconds.
pub const DEFAULT_STEP_ARCSEC: f64 = 1.0;

/// Each cell blocked independently with probability `p`.
pub fn gen_random_map(w: usize, h: usize, p: f64, seed: u64) -> GridMap {
    assert!((0.0..1.0).contains(&p), "fill probability must lie in [0, 1)");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocked = (0..w * h).map(|_| rng.gen_bool(p)).collect();
    GridMap::new(w, h, blocked)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Endpoint pairs drawn uniformly (with replacement) from the lower-left
/// vertices of free cells, skipping vertices that are not traversable.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSet {
    pub map_id: String,
    pub seed: u64,
    pub pairs: Vec<(GridPoint, GridPoint)>,
}

impl InstanceSet {
    pub fn generate(map_id: &str, map: &GridMap, seed: u64, count: usize) -> InstanceSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(map_id));
        let cand: Vec<GridPoint> = (0..map.height() as i64)
            .flat_map(|b| (0..map.width() as i64).map(move |c| (b, c)))
            .filter(|&(b, c)| {
                map.free(c, b) && map.classify_vertex(b, c) != VertexKind::DoubleCorner && map.vertex_traversable(b, c)
            })
            .map(|(b, c)| GridPoint::new(b as f64, c as f64))
            .collect();
        let pairs = if cand.is_empty() {
            Vec::new()
        } else {
            (0..count)
                .map(|_| (cand[rng.gen_range(0..cand.len())], cand[rng.gen_range(0..cand.len())]))
                .collect()
        };
        InstanceSet { map_id: map_id.to_string(), seed, pairs }
    }
}

/// Summary over one ratio metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatRow {
    pub pct_less: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub mean: f64,
    pub q3: f64,
    pub max: f64,
    pub stdev: f64,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (i, f) = (pos.floor() as usize, pos.fract());
    if i + 1 < sorted.len() {
        sorted[i] + f * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

impl StatRow {
    /// Statistics of `values`; `pct_less` counts values below 1. `None` when
    /// empty.
    pub fn from_ratios(values: &[f64]) -> Option<StatRow> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        let less = v.iter().filter(|&&x| x < 1.0 - RATIO_TOL).count() as f64;
        Some(StatRow {
            pct_less: 100.0 * less / n,
            min: v[0],
            q1: quantile(&v, 0.25),
            median: quantile(&v, 0.5),
            mean,
            q3: quantile(&v, 0.75),
            max: v[v.len() - 1],
            stdev: var.sqrt(),
        })
    }
}

/// Which flat-to-sphere conversion the baseline uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipe {
    Direct,
    Densified,
}

impl Recipe {
    pub fn name(self) -> &'static str {
        match self {
            Recipe::Direct => "anya_recipe1",
            Recipe::Densified => "anya_recipe2",
        }
    }
}

/// Outcome of one algorithm on one instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunStats {
    pub length_km: f64,
    pub et_ns: u64,
    pub ct: usize,
    pub legal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceResult {
    pub map_id: String,
    pub seed: u64,
    pub index: usize,
    pub s: GridPoint,
    pub t: GridPoint,
    pub spherical: Option<RunStats>,
    pub baseline: Vec<(Recipe, Option<RunStats>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub count: usize,
    pub seed: u64,
    pub recipes: Vec<Recipe>,
    pub step_arcsec: f64,
    pub sphere: SphereConfig,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            count: 100,
            seed: 0,
            recipes: vec![Recipe::Direct, Recipe::Densified],
            step_arcsec: DEFAULT_STEP_ARCSEC,
            sphere: SphereConfig::default(),
        }
    }
}

/// Summary tables for one baseline recipe.
#[derive(Debug, Clone, PartialEq)]
pub struct RecipeSummary {
    pub recipe: Recipe,
    pub et_ratio: Option<StatRow>,
    pub rl_ratio: Option<StatRow>,
    pub ct_ratio: Option<StatRow>,
    pub baseline_illegal: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub instances: Vec<InstanceResult>,
    pub summaries: Vec<RecipeSummary>,
    /// Instances skipped because either search found no route.
    pub skipped: usize,
}

fn stats(rec: &RouteRecord, map: &GridMap, et_ns: u64) -> RunStats {
    RunStats { length_km: rec.length, et_ns, ct: rec.tiles_crossed, legal: legality_check(rec, map).is_empty() }
}

/// Run one instance through the spherical search and each baseline recipe.
pub fn run_instance(map: &GridMap, s: GridPoint, t: GridPoint, opts: &BenchOptions) -> (Option<RunStats>, Vec<(Recipe, Option<RunStats>)>) {
    let cfg = SearchConfig { sphere: opts.sphere };
    let clock = Instant::now();
    let sph = search(map, s, t, &cfg);
    let et = clock.elapsed().as_nanos() as u64;
    let spherical = sph.ok().map(|r| stats(&r, map, et));
    let clock = Instant::now();
    let flat = euclid_search(map, s, t);
    let et = clock.elapsed().as_nanos() as u64;
    let baseline = opts
        .recipes
        .iter()
        .map(|&rc| {
            let st = flat.as_ref().ok().map(|f| {
                let r = match rc {
                    Recipe::Direct => recipe1(f, map, &opts.sphere),
                    Recipe::Densified => recipe2(f, map, opts.step_arcsec, &opts.sphere),
                };
                stats(&r, map, et)
            });
            (rc, st)
        })
        .collect();
    (spherical, baseline)
}

/// Run every instance of every map and summarise per recipe.
pub fn run_benchmark(maps: &[(String, GridMap)], opts: &BenchOptions) -> BenchReport {
    assert!(opts.count >= 1, "count must be at least 1");
    let jobs: Vec<(usize, usize, GridPoint, GridPoint)> = maps
        .iter()
        .enumerate()
        .flat_map(|(mi, (id, m))| {
            InstanceSet::generate(id, m, opts.seed, opts.count)
                .pairs
                .into_iter()
                .enumerate()
                .map(move |(i, (s, t))| (mi, i, s, t))
        })
        .collect();
    let instances: Vec<InstanceResult> = jobs
        .par_iter()
        .map(|&(mi, i, s, t)| {
            let (spherical, baseline) = run_instance(&maps[mi].1, s, t, opts);
            InstanceResult { map_id: maps[mi].0.clone(), seed: opts.seed, index: i, s, t, spherical, baseline }
        })
        .collect();
    let skipped = instances
        .iter()
        .filter(|r| r.spherical.is_none() || r.baseline.iter().any(|(_, b)| b.is_none()))
        .count();
    let summaries = opts
        .recipes
        .iter()
        .enumerate()
        .map(|(k, &recipe)| {
            let (mut et, mut rl, mut ct) = (Vec::new(), Vec::new(), Vec::new());
            let mut illegal = 0;
            for r in &instances {
                let (Some(a), Some(b)) = (r.spherical, r.baseline[k].1) else { continue };
                if !b.legal {
                    illegal += 1;
                }
                if b.length_km > 0.0 {
                    rl.push(a.length_km / b.length_km);
                }
                if b.et_ns > 0 {
                    et.push(a.et_ns as f64 / b.et_ns as f64);
                }
                if b.ct > 0 {
                    ct.push(a.ct as f64 / b.ct as f64);
                }
            }
            RecipeSummary {
                recipe,
                et_ratio: StatRow::from_ratios(&et),
                rl_ratio: StatRow::from_ratios(&rl),
                ct_ratio: StatRow::from_ratios(&ct),
                baseline_illegal: illegal,
            }
        })
        .collect();
    BenchReport { instances, summaries, skipped }
}

#[derive(Serialize)]
struct InstanceRow<'a> {
    map: &'a str,
    seed: u64,
    index: usize,
    s_row: f64,
    s_x: f64,
    t_row: f64,
    t_x: f64,
    algo: &'a str,
    length_km: Option<f64>,
    et_ns: Option<u64>,
    ct: Option<usize>,
    legal: Option<bool>,
}

impl BenchReport {
    /// One row per (instance, algorithm).
    pub fn write_instances_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.instances {
            let mut emit = |algo: &str, st: Option<RunStats>| {
                out.serialize(InstanceRow {
                    map: &r.map_id,
                    seed: r.seed,
                    index: r.index,
                    s_row: r.s.row,
                    s_x: r.s.x,
                    t_row: r.t.row,
                    t_x: r.t.x,
                    algo,
                    length_km: st.map(|s| s.length_km),
                    et_ns: st.map(|s| s.et_ns),
                    ct: st.map(|s| s.ct),
                    legal: st.map(|s| s.legal),
                })
            };
            emit("spherical", r.spherical)?;
            for (rc, st) in &r.baseline {
                emit(rc.name(), *st)?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// One row per (recipe, metric).
    pub fn write_summary_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["recipe", "metric", "pct_less", "min", "q1", "median", "mean", "q3", "max", "stdev"])?;
        for s in &self.summaries {
            for (metric, row) in [("et_ratio", s.et_ratio), ("rl_ratio", s.rl_ratio), ("ct_ratio", s.ct_ratio)] {
                let Some(r) = row else { continue };
                let mut rec = vec![s.recipe.name().to_string(), metric.to_string()];
                rec.extend([r.pct_less, r.min, r.q1, r.median, r.mean, r.q3, r.max, r.stdev].iter().map(|v| v.to_string()));
                out.write_record(&rec)?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Write `instances.csv` and `summary.csv` into `dir`.
    pub fn write_csvs(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let f = std::fs::File::create(dir.join("instances.csv"))?;
        self.write_instances_csv(f).map_err(std::io::Error::other)?;
        let f = std::fs::File::create(dir.join("summary.csv"))?;
        self.write_summary_csv(f).map_err(std::io::Error::other)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_of_small_list() {
        let r = StatRow::from_ratios(&[1.0, 0.5, 1.2, 0.8, 1.0]).unwrap();
        assert_eq!(r.median, 1.0);
        assert_eq!(r.min, 0.5);
        assert_eq!(r.max, 1.2);
        assert!(r.min <= r.q1 && r.q1 <= r.median && r.median <= r.q3 && r.q3 <= r.max);
        assert_eq!(r.pct_less, 40.0);
    }

    #[test]
    fn empty_fill_is_free() {
        assert_eq!(gen_random_map(20, 30, 0.0, 7).blocked_count(), 0);
    }

    #[test]
    fn map_is_deterministic() {
        assert_eq!(gen_random_map(32, 32, 0.4, 3), gen_random_map(32, 32, 0.4, 3));
    }

    #[test]
    fn empirical_fill_within_two_sigma() {
        let (w, h, p) = (64usize, 128usize, 0.3);
        let n = (w * h) as f64;
        for seed in 0..5 {
            let k = gen_random_map(w, h, p, seed).blocked_count() as f64;
            assert!((k - p * n).abs() <= 2.0 * (n * p * (1.0 - p)).sqrt(), "seed {seed}: {k}");
        }
    }

    #[test]
    fn instance_set_reproducible() {
        let m = gen_random_map(16, 16, 0.2, 1);
        let a = InstanceSet::generate("m", &m, 9, 10);
        assert_eq!(a, InstanceSet::generate("m", &m, 9, 10));
        assert_eq!(a.pairs.len(), 10);
        for (s, t) in a.pairs {
            assert!(m.vertex_traversable(s.row as i64, s.x as i64));
            assert!(m.vertex_traversable(t.row as i64, t.x as i64));
        }
    }
}

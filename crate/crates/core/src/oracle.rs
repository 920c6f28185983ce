//! Brute-force reference lengths: Dijkstra over explicit visibility graphs.
//!
//! The spherical graph holds the endpoints, every convex corner, and points
//! sampled every `h` rows along constant-latitude obstacle edges that a great
//! circle can bulge into. Its shortest path is an upper bound on the optimum
//! that tightens as `h` shrinks. Nothing here shares code with the interval
//! search beyond the visibility predicate.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::geom::{central_angle, SphereConfig};
use crate::grid::{GridMap, GridPoint, VertexKind};
use crate::route::SearchError;

/// An explicit weighted graph over grid points.
#[derive(Debug, Clone, Default)]
pub struct DenseGraph {
    pub vertices: Vec<GridPoint>,
    pub adj: Vec<Vec<(u32, f64)>>,
}

impl DenseGraph {
    fn add_vertex(&mut self, p: GridPoint) -> u32 {
        self.vertices.push(p);
        self.adj.push(Vec::new());
        (self.vertices.len() - 1) as u32
    }

    fn add_edge(&mut self, a: u32, b: u32, w: f64) {
        debug_assert!(w >= 0.0);
        self.adj[a as usize].push((b, w));
        self.adj[b as usize].push((a, w));
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Dijkstra from `s` to `t`.
    pub fn shortest(&self, s: u32, t: u32) -> Option<f64> {
        let mut dist = vec![f64::INFINITY; self.vertices.len()];
        let mut heap = BinaryHeap::new();
        dist[s as usize] = 0.0;
        heap.push(Reverse((Ord64(0.0), s)));
        while let Some(Reverse((Ord64(d), v))) = heap.pop() {
            if v == t {
                return Some(d);
            }
            if d > dist[v as usize] {
                continue;
            }
            for &(u, w) in &self.adj[v as usize] {
                let nd = d + w;
                if nd < dist[u as usize] {
                    dist[u as usize] = nd;
                    heap.push(Reverse((Ord64(nd), u)));
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Ord64(f64);
impl Eq for Ord64 {}
impl PartialOrd for Ord64 {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Ord64 {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&o.0)
    }
}

/// Convex corners of the map plus the two endpoints, deduplicated.
fn fixed_points(g: &GridMap, s: GridPoint, t: GridPoint) -> Vec<GridPoint> {
    let mut pts = vec![s];
    if t != s {
        pts.push(t);
    }
    for row in 0..=g.height() as i64 {
        for k in 0..=g.width() as i64 {
            let p = GridPoint::new(row as f64, k as f64);
            if g.classify_vertex(row, k) == VertexKind::ConvexCorner && p != s && p != t {
                pts.push(p);
            }
        }
    }
    pts
}

/// A maximal run of bands along parallel `k` with the obstacle on the
/// poleward side and free cells on the equatorward side.
#[derive(Debug, Clone, Copy)]
struct EdgeRun {
    k: i64,
    row0: i64,
    row1: i64,
}

fn edge_runs(g: &GridMap) -> Vec<EdgeRun> {
    let mut runs = Vec::new();
    for k in 0..=g.width() as i64 {
        let lat = g.mapping().lat(k as f64);
        if lat == 0.0 {
            continue;
        }
        let (pole, eq) = if lat > 0.0 { (k, k - 1) } else { (k - 1, k) };
        let mut start = None;
        for band in 0..=g.height() as i64 {
            let edge = band < g.height() as i64 && g.blocked(pole, band) && g.free(eq, band);
            match (edge, start) {
                (true, None) => start = Some(band),
                (false, Some(b0)) => {
                    runs.push(EdgeRun { k, row0: b0, row1: band });
                    start = None;
                }
                _ => {}
            }
        }
    }
    runs
}

fn key(p: GridPoint) -> (i64, i64) {
    ((p.row * 1e6).round() as i64, (p.x * 1e6).round() as i64)
}

/// Visibility among the fixed points, reusable across sample spacings.
pub struct FixedVisibility {
    points: Vec<GridPoint>,
    edges: Vec<(u32, u32, f64)>,
}

impl FixedVisibility {
    pub fn new(g: &GridMap, s: GridPoint, t: GridPoint, cfg: &SphereConfig) -> Self {
        let points = fixed_points(g, s, t);
        let sp: Vec<_> = points.iter().map(|p| g.vertex_to_sphere(*p)).collect();
        let mut edges = Vec::new();
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if g.gc_visible(points[i], points[j]) {
                    edges.push((i as u32, j as u32, cfg.radius_km * central_angle(sp[i], sp[j])));
                }
            }
        }
        FixedVisibility { points, edges }
    }
}

/// Build the densified spherical visibility graph. Vertex 0 is `s`, vertex 1
/// is `t` (when distinct).
pub fn build_dense_graph(g: &GridMap, fixed: &FixedVisibility, h: f64, cfg: &SphereConfig) -> DenseGraph {
    assert!(h > 0.0 && h <= 1.0, "sample spacing must lie in (0, 1]");
    let mut graph = DenseGraph::default();
    let mut index: HashMap<(i64, i64), u32> = HashMap::new();
    for p in &fixed.points {
        let id = graph.add_vertex(*p);
        index.insert(key(*p), id);
    }
    for &(a, b, w) in &fixed.edges {
        graph.add_edge(a, b, w);
    }
    let per_row = (1.0 / h).round().max(1.0) as i64;
    let step = 1.0 / per_row as f64;
    let fixed_sp: Vec<_> = fixed.points.iter().map(|p| g.vertex_to_sphere(*p)).collect();
    for run in edge_runs(g) {
        let lat = g.mapping().lat(run.k as f64);
        let n = (run.row1 - run.row0) * per_row;
        let mut ids = Vec::with_capacity(n as usize + 1);
        for i in 0..=n {
            let p = GridPoint::new(run.row0 as f64 + i as f64 * step, run.k as f64);
            let id = *index.entry(key(p)).or_insert_with(|| graph.add_vertex(p));
            ids.push(id);
        }
        let dlon = g.mapping().lon(step) - g.mapping().lon(0.0);
        let w = cfg.radius_km * lat.cos() * dlon.abs();
        for pair in ids.windows(2) {
            graph.add_edge(pair[0], pair[1], w);
        }
        // Connect each fixed point to the sample nearest its tangency on
        // either side that it can see.
        let te = lat.tan();
        let lon0 = g.mapping().lon(run.row0 as f64);
        for (fi, a) in fixed_sp.iter().enumerate() {
            if (lat > 0.0 && a.lat > lat) || (lat < 0.0 && a.lat < lat) {
                continue;
            }
            let reach = (a.lat.tan() / te).clamp(-1.0, 1.0).acos();
            for d in [1.0f64, -1.0] {
                // Samples strictly between the point and its tangency.
                let far = a.lon + d * reach;
                let (lo_lon, hi_lon) = if d > 0.0 { (a.lon, far) } else { (far, a.lon) };
                let to_idx = |lon: f64| (lon - lon0) / dlon;
                let lo_i = (to_idx(lo_lon) - 1e-9).ceil().max(0.0) as i64;
                let hi_i = (to_idx(hi_lon) + 1e-9).floor().min(n as f64) as i64;
                if lo_i > hi_i {
                    continue;
                }
                let order: Box<dyn Iterator<Item = i64>> =
                    if d > 0.0 { Box::new((lo_i..=hi_i).rev()) } else { Box::new(lo_i..=hi_i) };
                for i in order {
                    let sid = ids[i as usize];
                    if sid as usize == fi {
                        break;
                    }
                    let p = graph.vertices[sid as usize];
                    if g.gc_visible(fixed.points[fi], p) {
                        let w = cfg.radius_km * central_angle(*a, g.vertex_to_sphere(p));
                        graph.add_edge(fi as u32, sid, w);
                        break;
                    }
                }
            }
        }
    }
    graph
}

/// Upper bound on the optimal spherical route length (km) using samples every
/// `h` rows along obstacle edges.
pub fn oracle_route(g: &GridMap, s: GridPoint, t: GridPoint, h: f64, cfg: &SphereConfig) -> Result<f64, SearchError> {
    let fixed = FixedVisibility::new(g, s, t, cfg);
    oracle_with(g, &fixed, s, t, h, cfg)
}

/// [`oracle_route`] reusing a precomputed [`FixedVisibility`].
pub fn oracle_with(
    g: &GridMap,
    fixed: &FixedVisibility,
    s: GridPoint,
    t: GridPoint,
    h: f64,
    cfg: &SphereConfig,
) -> Result<f64, SearchError> {
    if s == t {
        return Ok(0.0);
    }
    let graph = build_dense_graph(g, fixed, h, cfg);
    graph.shortest(0, 1).ok_or(SearchError::NoPath)
}

/// Shortest flat-grid route length (grid units) over the corner visibility
/// graph.
pub fn euclid_oracle(g: &GridMap, s: GridPoint, t: GridPoint) -> Result<f64, SearchError> {
    if s == t {
        return Ok(0.0);
    }
    let pts = fixed_points(g, s, t);
    let mut graph = DenseGraph::default();
    for p in &pts {
        graph.add_vertex(*p);
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if g.line_visible(pts[i], pts[j]) {
                let w = (pts[i].row - pts[j].row).hypot(pts[i].x - pts[j].x);
                graph.add_edge(i as u32, j as u32, w);
            }
        }
    }
    graph.shortest(0, 1).ok_or(SearchError::NoPath)
}

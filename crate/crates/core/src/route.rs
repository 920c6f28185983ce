//! Route records shared by the planners, the recipes and the CLI.

use thiserror::Error;

use crate::geom::{gc_distance, parallel_arc_length, SphereConfig, SpherePoint};
use crate::grid::{GridMap, GridPoint, Touch};

/// How consecutive turning points are joined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentKind {
    GreatCircle,
    /// Constant-latitude arc along an obstacle edge.
    ParallelArc,
    /// Straight line in grid space (flat-grid routes before conversion).
    Straight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("target is unreachable")]
    NoPath,
    #[error("endpoint is not a traversable vertex")]
    InvalidEndpoint,
}

/// A planned route and the counters gathered while planning it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RouteRecord {
    pub grid_points: Vec<GridPoint>,
    pub turning_points: Vec<SpherePoint>,
    pub segment_kinds: Vec<SegmentKind>,
    /// Kilometres for spherical routes, grid units for flat-grid routes.
    pub length: f64,
    pub expanded_nodes: usize,
    pub generated_nodes: usize,
    pub tiles_crossed: usize,
    pub elapsed_ns: u64,
}

/// A route whose segments are great circles or parallel arcs on the sphere.
pub type SphericalRouteRecord = RouteRecord;

impl RouteRecord {
    pub(crate) fn from_points(
        map: &GridMap,
        grid_points: Vec<GridPoint>,
        segment_kinds: Vec<SegmentKind>,
    ) -> Self {
        let turning_points = grid_points.iter().map(|p| map.vertex_to_sphere(*p)).collect();
        RouteRecord { grid_points, turning_points, segment_kinds, ..Default::default() }
    }

    /// Length of segment `i` in km (grid units for `Straight`).
    pub fn segment_length(&self, i: usize, cfg: &SphereConfig) -> f64 {
        let (a, b) = (self.turning_points[i], self.turning_points[i + 1]);
        match self.segment_kinds[i] {
            SegmentKind::GreatCircle => gc_distance(a, b, cfg),
            SegmentKind::ParallelArc => parallel_arc_length(a.lat, b.lon - a.lon, cfg),
            SegmentKind::Straight => {
                let (p, q) = (self.grid_points[i], self.grid_points[i + 1]);
                (p.row - q.row).hypot(p.x - q.x)
            }
        }
    }

    pub fn total_length(&self, cfg: &SphereConfig) -> f64 {
        (0..self.segment_kinds.len()).map(|i| self.segment_length(i, cfg)).sum()
    }

    /// Walk segment `i` over the grid.
    pub fn walk_segment(&self, map: &GridMap, i: usize, f: &mut dyn FnMut(Touch) -> bool) {
        let (p, q) = (self.grid_points[i], self.grid_points[i + 1]);
        match self.segment_kinds[i] {
            SegmentKind::GreatCircle => map.walk_gc(p, q, f),
            SegmentKind::ParallelArc => map.walk_parallel(p.x, p.row, q.row, f),
            SegmentKind::Straight => map.walk_line(p, q, f),
        }
    }
}

/// Blocked cells and other obstructions met by each segment, ordered by
/// segment and then by what was hit.
pub fn legality_check(route: &RouteRecord, map: &GridMap) -> Vec<(usize, Touch)> {
    let mut out = Vec::new();
    for i in 0..route.segment_kinds.len() {
        let mut hits = Vec::new();
        route.walk_segment(map, i, &mut |t| {
            if map.touch_blocked(t) {
                hits.push(t);
            }
            true
        });
        hits.sort();
        hits.dedup();
        out.extend(hits.into_iter().map(|t| (i, t)));
    }
    out
}

/// Number of distinct cells whose interior the route crosses.
pub fn tiles_crossed(route: &RouteRecord, map: &GridMap) -> usize {
    let mut cells = std::collections::HashSet::new();
    for i in 0..route.segment_kinds.len() {
        route.walk_segment(map, i, &mut |t| {
            if let Touch::Cell { cx, band } = t {
                cells.insert((cx, band));
            }
            true
        });
    }
    cells.len()
}

//! Flat-grid any-angle baseline and its conversions into spherical routes.

use crate::engine::Geometry;
use crate::geom::{gc_distance, SphereConfig};
use crate::grid::{GridMap, GridPoint};
use crate::route::{RouteRecord, SearchError, SegmentKind};
pub use crate::route::{legality_check, tiles_crossed, SphericalRouteRecord};

/// Optimal any-angle route on the flat grid (cells are unit squares).
/// Length is in grid units and every turning point is a corner.
pub fn euclid_search(map: &GridMap, s: GridPoint, t: GridPoint) -> Result<RouteRecord, SearchError> {
    crate::sanya::run(map, s, t, Geometry::Flat)
}

/// Join the turning points directly by great circles.
pub fn recipe1(route: &RouteRecord, map: &GridMap, cfg: &SphereConfig) -> SphericalRouteRecord {
    let kinds = vec![SegmentKind::GreatCircle; route.grid_points.len().saturating_sub(1)];
    let mut out = RouteRecord::from_points(map, route.grid_points.clone(), kinds);
    finish(&mut out, route, map, cfg);
    out
}

/// Like [`recipe1`], but each great circle that crosses an obstacle is
/// replaced by a chain of short great circles through points spaced `step`
/// arc-seconds apart along the flat-grid segment.
pub fn recipe2(route: &RouteRecord, map: &GridMap, step_arcsec: f64, cfg: &SphereConfig) -> SphericalRouteRecord {
    assert!(step_arcsec > 0.0, "step must be positive");
    let mut pts = Vec::with_capacity(route.grid_points.len());
    if let Some(first) = route.grid_points.first() {
        pts.push(*first);
    }
    for w in route.grid_points.windows(2) {
        let (p, q) = (w[0], w[1]);
        if map.gc_visible(p, q) {
            pts.push(q);
            continue;
        }
        let (a, b) = (map.vertex_to_sphere(p), map.vertex_to_sphere(q));
        let len_deg = (b.lat_deg() - a.lat_deg()).hypot(b.lon_deg() - a.lon_deg());
        let n = ((len_deg * 3600.0 / step_arcsec).ceil() as usize).max(1);
        for i in 1..=n {
            let f = i as f64 / n as f64;
            pts.push(if i == n {
                q
            } else {
                GridPoint::new(p.row + f * (q.row - p.row), p.x + f * (q.x - p.x))
            });
        }
    }
    let kinds = vec![SegmentKind::GreatCircle; pts.len().saturating_sub(1)];
    let mut out = RouteRecord::from_points(map, pts, kinds);
    finish(&mut out, route, map, cfg);
    out
}

fn finish(out: &mut RouteRecord, src: &RouteRecord, map: &GridMap, cfg: &SphereConfig) {
    out.length = out
        .turning_points
        .windows(2)
        .map(|w| gc_distance(w[0], w[1], cfg))
        .sum();
    out.expanded_nodes = src.expanded_nodes;
    out.generated_nodes = src.generated_nodes;
    out.elapsed_ns = src.elapsed_ns;
    out.tiles_crossed = tiles_crossed(out, map);
}

//! GeoJSON in and out. Coordinates are `[lon°, lat°]`; the drawn line is
//! densified for display, while the exact turning points and segment kinds
//! travel in the feature properties so a route can be re-checked.

use serde_json::{json, Map, Value};

use spherical_anya::geom::interpolate_gc;
use spherical_anya::{RouteRecord, SegmentKind, SpherePoint};

/// Display spacing of the drawn line, degrees.
pub const DISPLAY_STEP_DEG: f64 = 0.1;

fn kind_name(k: SegmentKind) -> &'static str {
    match k {
        SegmentKind::GreatCircle => "great_circle",
        SegmentKind::ParallelArc => "parallel_arc",
        SegmentKind::Straight => "straight",
    }
}

fn kind_from(s: &str) -> Option<SegmentKind> {
    match s {
        "great_circle" => Some(SegmentKind::GreatCircle),
        "parallel_arc" => Some(SegmentKind::ParallelArc),
        _ => None,
    }
}

fn coord(p: SpherePoint) -> Value {
    json!([p.lon_deg(), p.lat_deg()])
}

/// The route drawn as a polyline: each segment split so consecutive points
/// are at most [`DISPLAY_STEP_DEG`] apart.
pub fn display_line(r: &RouteRecord) -> Vec<SpherePoint> {
    let mut out = Vec::new();
    for (i, k) in r.segment_kinds.iter().enumerate() {
        let (a, b) = (r.turning_points[i], r.turning_points[i + 1]);
        out.push(a);
        match k {
            SegmentKind::ParallelArc => {
                let n = ((b.lon - a.lon).abs().to_degrees() / DISPLAY_STEP_DEG).ceil().max(1.0) as usize;
                for j in 1..n {
                    let f = j as f64 / n as f64;
                    out.push(SpherePoint::new(a.lon + f * (b.lon - a.lon), a.lat));
                }
            }
            _ => {
                let ang = spherical_anya::geom::central_angle(a, b).to_degrees();
                let n = (ang / DISPLAY_STEP_DEG).ceil().max(1.0) as usize;
                for j in 1..n {
                    if let Ok(p) = interpolate_gc(a, b, j as f64 / n as f64) {
                        out.push(p);
                    }
                }
            }
        }
    }
    if let Some(last) = r.turning_points.last() {
        out.push(*last);
    }
    out
}

pub struct Drawn<'a> {
    pub algo: &'a str,
    pub route: &'a RouteRecord,
    pub legal: bool,
    pub et_ns: u64,
}

pub fn feature(d: &Drawn) -> Value {
    let line: Vec<Value> = display_line(d.route).into_iter().map(coord).collect();
    json!({
        "type": "Feature",
        "geometry": { "type": "LineString", "coordinates": line },
        "properties": {
            "algo": d.algo,
            "length_km": d.route.length,
            "legal": d.legal,
            "et_ns": d.et_ns,
            "turning_points": d.route.turning_points.iter().map(|p| coord(*p)).collect::<Vec<_>>(),
            "segment_kinds": d.route.segment_kinds.iter().map(|k| kind_name(*k)).collect::<Vec<_>>(),
        }
    })
}

pub fn collection(features: Vec<Value>) -> Value {
    json!({ "type": "FeatureCollection", "features": features })
}

fn point(v: &Value) -> Result<SpherePoint, String> {
    let a = v.as_array().filter(|a| a.len() >= 2).ok_or("coordinate must be [lon, lat]")?;
    let (lon, lat) = (a[0].as_f64(), a[1].as_f64());
    match (lon, lat) {
        (Some(lon), Some(lat)) if (-90.0..=90.0).contains(&lat) => Ok(SpherePoint::from_deg(lon, lat)),
        _ => Err(format!("bad coordinate {v}")),
    }
}

fn points(v: &Value) -> Result<Vec<SpherePoint>, String> {
    v.as_array().ok_or("coordinates must be an array")?.iter().map(point).collect()
}

/// One route per LineString feature, as turning points and segment kinds.
/// Features carrying `turning_points`/`segment_kinds` are read exactly;
/// plain lines are taken as great circles between consecutive coordinates.
pub fn read_routes(doc: &Value) -> Result<Vec<(Vec<SpherePoint>, Vec<SegmentKind>)>, String> {
    let obj = doc.as_object().ok_or("top level must be an object")?;
    let features: Vec<&Value> = match obj.get("type").and_then(Value::as_str) {
        Some("FeatureCollection") => obj.get("features").and_then(Value::as_array).ok_or("missing features")?.iter().collect(),
        Some("Feature") => vec![doc],
        _ => return Err("expected a Feature or FeatureCollection".into()),
    };
    let empty = Map::new();
    let mut out = Vec::new();
    for f in features {
        let geom = f.get("geometry").ok_or("feature without geometry")?;
        if geom.get("type").and_then(Value::as_str) != Some("LineString") {
            return Err("only LineString geometries are supported".into());
        }
        let props = f.get("properties").and_then(Value::as_object).unwrap_or(&empty);
        let exact = match (props.get("turning_points"), props.get("segment_kinds")) {
            (Some(tp), Some(sk)) => {
                let pts = points(tp)?;
                let kinds = sk
                    .as_array()
                    .ok_or("segment_kinds must be an array")?
                    .iter()
                    .map(|k| k.as_str().and_then(kind_from).ok_or_else(|| format!("bad segment kind {k}")))
                    .collect::<Result<Vec<_>, _>>()?;
                if kinds.len() + 1 != pts.len() && !(pts.len() <= 1 && kinds.is_empty()) {
                    return Err("segment_kinds must have one entry fewer than turning_points".into());
                }
                Some((pts, kinds))
            }
            _ => None,
        };
        let route = match exact {
            Some(r) => r,
            None => {
                let pts = points(geom.get("coordinates").ok_or("LineString without coordinates")?)?;
                let kinds = vec![SegmentKind::GreatCircle; pts.len().saturating_sub(1)];
                (pts, kinds)
            }
        };
        out.push(route);
    }
    Ok(out)
}

//! Spherical geometry kernel.
//!
//! Every angle in here is in radians. Degrees only appear at I/O boundaries.

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

/// Errors raised by the geometry predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("points share a meridian; the row itself is the geodesic")]
    MeridianDegenerate,
    #[error("longitude lies outside the open arc")]
    OutOfArc,
    #[error("antipodal pair has no unique great circle")]
    AntipodalPair,
    #[error("target is visible past the edge; no departure point exists")]
    DomainError,
    #[error("predicate is singular at the poles")]
    PoleSingularity,
    #[error("point lies outside the projection hemisphere")]
    OutsideHemisphere,
}

/// A position on the sphere. `lon` runs along grid rows, `lat` along grid columns.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpherePoint {
    pub lon: f64,
    pub lat: f64,
}

impl SpherePoint {
    pub fn new(lon: f64, lat: f64) -> Self {
        SpherePoint { lon, lat }
    }

    /// Build from degrees, `(lon°, lat°)`.
    pub fn from_deg(lon: f64, lat: f64) -> Self {
        SpherePoint { lon: lon.to_radians(), lat: lat.to_radians() }
    }

    pub fn lon_deg(&self) -> f64 {
        self.lon.to_degrees()
    }

    pub fn lat_deg(&self) -> f64 {
        self.lat.to_degrees()
    }

    pub fn to_vec3(&self) -> [f64; 3] {
        let (sl, cl) = self.lat.sin_cos();
        let (so, co) = self.lon.sin_cos();
        [cl * co, cl * so, sl]
    }

    /// Inverse of [`SpherePoint::to_vec3`]; the input need not be normalized.
    pub fn from_vec3(v: [f64; 3]) -> Self {
        let h = v[0].hypot(v[1]);
        SpherePoint { lon: v[1].atan2(v[0]), lat: v[2].atan2(h) }
    }
}

/// Sphere radius and numeric tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereConfig {
    pub radius_km: f64,
    /// Tolerance for geometric predicates (radians).
    pub angular_tolerance: f64,
    /// Tolerance for snapping to grid vertices (grid units).
    pub snap_tolerance: f64,
}

impl Default for SphereConfig {
    fn default() -> Self {
        SphereConfig { radius_km: 6371.0, angular_tolerance: 1e-12, snap_tolerance: 1e-9 }
    }
}

impl SphereConfig {
    pub fn with_radius(radius_km: f64) -> Self {
        assert!(radius_km > 0.0, "radius must be positive");
        SphereConfig { radius_km, ..Default::default() }
    }
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Central angle between two points, in `[0, π]`.
///
/// Uses the arctangent form, which stays accurate for near-coincident and
/// near-antipodal pairs. Arguments are put in a canonical order first so the
/// result is bit-identical under swapping.
pub fn central_angle(p: SpherePoint, q: SpherePoint) -> f64 {
    let (a, b) = if (p.lon, p.lat) <= (q.lon, q.lat) { (p, q) } else { (q, p) };
    let (s1, c1) = a.lat.sin_cos();
    let (s2, c2) = b.lat.sin_cos();
    let (sd, cd) = (b.lon - a.lon).sin_cos();
    let x = c2 * sd;
    let y = c1 * s2 - s1 * c2 * cd;
    let num = x.hypot(y);
    let den = s1 * s2 + c1 * c2 * cd;
    num.atan2(den)
}

/// Great-circle distance in km.
pub fn gc_distance(p: SpherePoint, q: SpherePoint, cfg: &SphereConfig) -> f64 {
    cfg.radius_km * central_angle(p, q)
}

/// Length of the arc of parallel `lat` spanning `dlon` radians, in km.
pub fn parallel_arc_length(lat: f64, dlon: f64, cfg: &SphereConfig) -> f64 {
    cfg.radius_km * lat.cos() * dlon.abs()
}

/// Latitude where the great circle through `p` and `q` crosses meridian `lon`.
///
/// `lon` must lie strictly inside the shorter arc's longitude span.
pub fn lat_at_lon(p: SpherePoint, q: SpherePoint, lon: f64) -> Result<f64, GeomError> {
    let span = wrap_pi(q.lon - p.lon);
    if span.abs() < 1e-15 {
        return Err(GeomError::MeridianDegenerate);
    }
    if p.lat.abs() >= FRAC_PI_2 || q.lat.abs() >= FRAC_PI_2 {
        return Err(GeomError::PoleSingularity);
    }
    let off = wrap_pi(lon - p.lon);
    if off * span.signum() <= 0.0 || off.abs() >= span.abs() {
        return Err(GeomError::OutOfArc);
    }
    // Classic two-point form: tanφ·sin(λ2−λ1) = tanφ1·sin(λ2−λ) + tanφ2·sin(λ−λ1).
    let t = (p.lat.tan() * (span - off).sin() + q.lat.tan() * off.sin()) / span.sin();
    Ok(t.atan())
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_pi(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    } else if x <= -PI {
        x += 2.0 * PI;
    }
    x
}

/// Extreme latitude reached on the shorter arc `p→q`.
///
/// The sign is `+1` when the arc bulges north past both endpoints, `-1` when it
/// bulges south, and `0` when latitude is monotone along the arc (in which case
/// the endpoint latitude of largest magnitude is returned).
pub fn gc_max_lat_on_arc(p: SpherePoint, q: SpherePoint) -> Result<(f64, i8), GeomError> {
    let u = p.to_vec3();
    let v = q.to_vec3();
    let n = cross(u, v);
    let nn = norm(n);
    if nn < 1e-15 {
        if dot(u, v) < 0.0 {
            return Err(GeomError::AntipodalPair);
        }
        return Ok((p.lat, 0));
    }
    let n = [n[0] / nn, n[1] / nn, n[2] / nn];
    // Northernmost point of the circle: the pole axis projected onto the plane.
    let w = [-n[2] * n[0], -n[2] * n[1], 1.0 - n[2] * n[2]];
    let monotone = if p.lat.abs() >= q.lat.abs() { p.lat } else { q.lat };
    if norm(w) < 1e-15 {
        return Ok((monotone, 0));
    }
    let vertex_lat = n[2].abs().acos();
    let inside = |w: [f64; 3]| dot(cross(u, w), n) > 0.0 && dot(cross(w, v), n) > 0.0;
    if inside(w) {
        Ok((vertex_lat, 1))
    } else if inside([-w[0], -w[1], -w[2]]) {
        Ok((-vertex_lat, -1))
    } else {
        Ok((monotone, 0))
    }
}

/// Departure point from a constant-latitude obstacle edge.
///
/// The path hugs parallel `edge_lat` from `root` and leaves it on the great
/// circle to `target` that is tangent to the parallel. The tangency branch on
/// the root's side of the target is returned.
pub fn adjoint_departure(
    root: SpherePoint,
    edge_lat: f64,
    target: SpherePoint,
) -> Result<SpherePoint, GeomError> {
    if edge_lat.abs() >= FRAC_PI_2 - 1e-12 {
        return Err(GeomError::PoleSingularity);
    }
    let te = edge_lat.tan();
    if te == 0.0 {
        return Err(GeomError::DomainError);
    }
    let ratio = target.lat.tan() / te;
    if ratio.abs() > 1.0 + 1e-12 {
        return Err(GeomError::DomainError);
    }
    let delta = ratio.clamp(-1.0, 1.0).acos();
    let side = if root.lon <= target.lon { 1.0 } else { -1.0 };
    Ok(SpherePoint { lon: target.lon - side * delta, lat: edge_lat })
}

/// Length of the path that follows the parallel from `root` to `departure` and
/// then the great circle to `target`.
pub fn adjoint_path_length(
    root: SpherePoint,
    departure: SpherePoint,
    target: SpherePoint,
    cfg: &SphereConfig,
) -> f64 {
    parallel_arc_length(departure.lat, departure.lon - root.lon, cfg)
        + gc_distance(departure, target, cfg)
}

/// Projection centre for [`gnomonic_project`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GnomonicCenter {
    NorthPole,
    Equator,
}

/// Gnomonic projection; great circles map to straight lines.
pub fn gnomonic_project(p: SpherePoint, center: GnomonicCenter) -> Result<(f64, f64), GeomError> {
    let (sl, cl) = p.lat.sin_cos();
    let (so, co) = p.lon.sin_cos();
    match center {
        GnomonicCenter::NorthPole => {
            if sl <= 1e-12 {
                return Err(GeomError::OutsideHemisphere);
            }
            Ok((cl * so / sl, -cl * co / sl))
        }
        GnomonicCenter::Equator => {
            if cl * co <= 1e-12 {
                return Err(GeomError::OutsideHemisphere);
            }
            Ok((so / co, sl / cl / co))
        }
    }
}

/// Point at arc fraction `f` from `p` to `q` (spherical linear interpolation).
pub fn interpolate_gc(p: SpherePoint, q: SpherePoint, f: f64) -> Result<SpherePoint, GeomError> {
    if f <= 0.0 {
        return Ok(p);
    }
    if f >= 1.0 {
        return Ok(q);
    }
    let u = p.to_vec3();
    let v = q.to_vec3();
    let omega = central_angle(p, q);
    if PI - omega < 1e-12 {
        return Err(GeomError::AntipodalPair);
    }
    if omega < 1e-15 {
        return Ok(p);
    }
    let s = omega.sin();
    let a = ((1.0 - f) * omega).sin() / s;
    let b = (f * omega).sin() / s;
    Ok(SpherePoint::from_vec3([a * u[0] + b * v[0], a * u[1] + b * v[1], a * u[2] + b * v[2]]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(lon: f64, lat: f64) -> SpherePoint {
        SpherePoint::from_deg(lon, lat)
    }

    fn dot_oracle(p: SpherePoint, q: SpherePoint) -> f64 {
        dot(p.to_vec3(), q.to_vec3()).clamp(-1.0, 1.0).acos()
    }

    #[test]
    fn central_angle_basics() {
        assert_eq!(central_angle(d(0.0, 0.0), d(0.0, 0.0)), 0.0);
        assert!((central_angle(d(0.0, 0.0), d(90.0, 0.0)) - FRAC_PI_2).abs() < 1e-15);
        let (p, q) = (d(10.0, 40.0), d(60.0, 55.0));
        assert!((central_angle(p, q) - dot_oracle(p, q)).abs() < 1e-12);
        assert_eq!(central_angle(p, q).to_bits(), central_angle(q, p).to_bits());
    }

    #[test]
    fn distances() {
        let cfg = SphereConfig::default();
        let far = gc_distance(d(0.0, 0.0), SpherePoint::new(PI - 1e-9, 0.0), &cfg);
        assert!((far - PI * 6371.0).abs() < 1e-4);
        let unit = SphereConfig::with_radius(1.0);
        assert!((gc_distance(d(0.0, 0.0), d(0.0, 90.0 - 1e-9), &unit) - FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn lat_at_lon_bulges() {
        let north = lat_at_lon(d(-10.0, 30.0), d(10.0, 30.0), 0.0).unwrap();
        assert!(north > 30f64.to_radians());
        let south = lat_at_lon(d(-10.0, -30.0), d(10.0, -30.0), 0.0).unwrap();
        assert!(south < -30f64.to_radians());
        let eq = lat_at_lon(d(-10.0, 0.0), d(10.0, 0.0), 3f64.to_radians()).unwrap();
        assert!(eq.abs() < 1e-15);
        assert_eq!(lat_at_lon(d(5.0, 1.0), d(5.0, 9.0), 0.0), Err(GeomError::MeridianDegenerate));
        assert_eq!(lat_at_lon(d(0.0, 1.0), d(5.0, 9.0), 0.1), Err(GeomError::OutOfArc));
    }

    #[test]
    fn lat_at_lon_lies_on_plane() {
        let (p, q) = (d(-40.0, 12.0), d(35.0, 61.0));
        let lon = 7f64.to_radians();
        let lat = lat_at_lon(p, q, lon).unwrap();
        let w = SpherePoint::new(lon, lat).to_vec3();
        assert!(dot(cross(p.to_vec3(), q.to_vec3()), w).abs() < 1e-12);
    }

    #[test]
    fn max_lat_cases() {
        let (m, s) = gc_max_lat_on_arc(d(-10.0, 30.0), d(10.0, 30.0)).unwrap();
        assert_eq!(s, 1);
        assert!(m > 30f64.to_radians());
        let (m, s) = gc_max_lat_on_arc(d(-10.0, -30.0), d(10.0, -30.0)).unwrap();
        assert_eq!(s, -1);
        assert!(m < -30f64.to_radians());
        assert_eq!(gc_max_lat_on_arc(d(0.0, 10.0), d(40.0, 50.0)).unwrap().1, 0);
        assert_eq!(gc_max_lat_on_arc(d(-20.0, 0.0), d(20.0, 0.0)).unwrap(), (0.0, 0));
    }

    #[test]
    fn max_lat_matches_sampling() {
        let (p, q) = (d(0.0, 10.0), d(40.0, 50.0));
        let mut best = f64::MIN;
        for i in 0..=100_000 {
            let x = interpolate_gc(p, q, i as f64 / 100_000.0).unwrap();
            best = best.max(x.lat);
        }
        // Monotone arc: the extreme is the endpoint.
        assert!((best - q.lat).abs() < 1e-12);
        let (p, q) = (d(-50.0, 40.0), d(60.0, 35.0));
        let (m, s) = gc_max_lat_on_arc(p, q).unwrap();
        let mut best = f64::MIN;
        for i in 0..=100_000 {
            best = best.max(interpolate_gc(p, q, i as f64 / 100_000.0).unwrap().lat);
        }
        assert_eq!(s, 1);
        assert!((best - m).abs() < 1e-8);
    }

    #[test]
    fn departure_cases() {
        let root = d(0.0, 40.0);
        let x = adjoint_departure(root, 40f64.to_radians(), d(30.0, 40.0)).unwrap();
        assert!((x.lon - 30f64.to_radians()).abs() < 1e-12);
        let x = adjoint_departure(d(-100.0, 45.0), 45f64.to_radians(), d(20.0, 0.0)).unwrap();
        assert!((x.lon - (-70f64).to_radians()).abs() < 1e-12);
        let x = adjoint_departure(d(-60.0, 50.0), 50f64.to_radians(), d(20.0, 30.0)).unwrap();
        let expect = 20.0 - (30f64.to_radians().tan() / 50f64.to_radians().tan()).acos().to_degrees();
        assert!((x.lon_deg() - expect).abs() < 1e-10);
        assert!((expect - (20.0 - 61.02)).abs() < 0.01);
        assert_eq!(
            adjoint_departure(root, 40f64.to_radians(), d(30.0, 60.0)),
            Err(GeomError::DomainError)
        );
        assert_eq!(adjoint_departure(root, FRAC_PI_2, d(30.0, 60.0)), Err(GeomError::PoleSingularity));
    }

    #[test]
    fn departure_is_tangent() {
        let (root, target) = (d(-60.0, 50.0), d(20.0, 30.0));
        let x = adjoint_departure(root, 50f64.to_radians(), target).unwrap();
        // The departing circle's northern vertex sits at the departure point.
        let n = cross(x.to_vec3(), target.to_vec3());
        let vertex_lat = (n[2].abs() / norm(n)).acos();
        assert!((vertex_lat - x.lat).abs() < 1e-9);
    }

    #[test]
    fn adjoint_length_limits() {
        let cfg = SphereConfig::default();
        let (r, t) = (d(0.0, 40.0), d(20.0, 20.0));
        assert!((adjoint_path_length(r, r, t, &cfg) - gc_distance(r, t, &cfg)).abs() < 1e-9);
        let t2 = d(15.0, 40.0);
        let expect = parallel_arc_length(r.lat, t2.lon - r.lon, &cfg);
        assert!((adjoint_path_length(r, t2, t2, &cfg) - expect).abs() < 1e-9);
    }

    #[test]
    fn gnomonic_cases() {
        let (x, _) = gnomonic_project(SpherePoint::new(0.0, 0.7), GnomonicCenter::NorthPole).unwrap();
        assert_eq!(x, 0.0);
        assert_eq!(gnomonic_project(d(0.0, 0.0), GnomonicCenter::Equator).unwrap(), (0.0, 0.0));
        assert_eq!(
            gnomonic_project(d(0.0, -10.0), GnomonicCenter::NorthPole),
            Err(GeomError::OutsideHemisphere)
        );
    }

    #[test]
    fn interpolation_ends() {
        let (p, q) = (d(-20.0, 0.0), d(40.0, 0.0));
        assert_eq!(interpolate_gc(p, q, 0.0).unwrap(), p);
        assert_eq!(interpolate_gc(p, q, 1.0).unwrap(), q);
        let m = interpolate_gc(p, q, 0.5).unwrap();
        assert!((m.lon_deg() - 10.0).abs() < 1e-12 && m.lat.abs() < 1e-15);
        assert_eq!(interpolate_gc(d(0.0, 0.0), d(180.0, 0.0), 0.5), Err(GeomError::AntipodalPair));
    }
}

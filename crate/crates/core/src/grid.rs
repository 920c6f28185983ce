//! Occupancy grid with rows of constant longitude and columns of constant
//! latitude, map loaders, corner classification and exact cell walks.
//!
//! Coordinates: `x ∈ [0, W]` runs along latitude, `row ∈ [0, H]` along
//! longitude. Cell `(cx, band)` spans `x ∈ [cx, cx+1]` between rows `band`
//! and `band+1`. Anything outside the map counts as blocked.

use std::f64::consts::PI;

use thiserror::Error;

use crate::geom::{cross, dot, norm, SpherePoint};

/// Tolerance (grid units) for snapping crossings onto vertices.
pub const EPS_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> GridError {
    GridError::Parse { line, col, msg: msg.into() }
}

/// A point on the grid. Vertices have integer `row` and `x`; interval
/// endpoints have integer `row`; hug departure points may have neither.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GridPoint {
    pub row: f64,
    pub x: f64,
}

/// Grid vertex or interval point.
pub type GridVertex = GridPoint;

impl GridPoint {
    pub fn new(row: f64, x: f64) -> Self {
        GridPoint { row, x }
    }
}

/// Contiguous set of points on one row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub row: i64,
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(row: i64, lo: f64, hi: f64) -> Self {
        Interval { row, lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo - EPS_SNAP && x <= self.hi + EPS_SNAP
    }
}

/// Classification of a grid vertex by its four incident cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    NotCorner,
    ConvexCorner,
    DoubleCorner,
}

/// Stopping rule for [`GridMap::scan_row`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    ToNextCorner,
    ToObstacle,
}

/// Unclamped equirectangular latitude (degrees) of column coordinate `x` on a
/// map `m` cells wide.
pub fn eq5_lat_deg(x: f64, m: usize) -> f64 {
    90.0 * (2.0 * x / m as f64 - 1.0)
}

/// Equirectangular longitude (degrees) of row `row` on a map `n` rows tall.
pub fn eq5_lon_deg(row: f64, n: usize) -> f64 {
    180.0 * (2.0 * row / n as f64 - 1.0)
}

/// Grid-to-sphere mapping.
///
/// Longitude is affine in the row. Latitude is piecewise linear through the
/// vertex latitudes, which are affine in `x` except at the map border where
/// they are clamped away from the poles.
#[derive(Debug, Clone, PartialEq)]
pub struct Mapping {
    /// Latitude (radians) of every integer `x`, strictly increasing.
    lat: Vec<f64>,
    lon0: f64,
    dlon: f64,
}

impl Mapping {
    /// Affine mapping in degrees: `lat = lat0 + x·dlat`, `lon = lon0 + row·dlon`.
    /// Vertices closer than half a cell to a pole are pulled back to that margin.
    pub fn affine(w: usize, lat0: f64, dlat: f64, lon0: f64, dlon: f64) -> Self {
        let limit = 90.0 - dlat.abs() / 2.0;
        let lat = (0..=w)
            .map(|k| (lat0 + k as f64 * dlat).clamp(-limit, limit).to_radians())
            .collect();
        Mapping { lat, lon0: lon0.to_radians(), dlon: dlon.to_radians() }
    }

    /// The whole-globe mapping for a `w × h` grid.
    pub fn global(w: usize, h: usize) -> Self {
        Mapping::affine(w, -90.0, 180.0 / w as f64, -180.0, 360.0 / h as f64)
    }

    pub fn lat(&self, x: f64) -> f64 {
        let w = self.lat.len() - 1;
        let k = (x.floor().max(0.0) as usize).min(w - 1);
        let f = x - k as f64;
        self.lat[k] + f * (self.lat[k + 1] - self.lat[k])
    }

    pub fn x_of_lat(&self, lat: f64) -> f64 {
        let w = self.lat.len() - 1;
        let step = (self.lat[w] - self.lat[0]) / w as f64;
        let mut k = (((lat - self.lat[0]) / step).floor().max(0.0) as usize).min(w - 1);
        while k > 0 && lat < self.lat[k] {
            k -= 1;
        }
        while k + 1 < w && lat > self.lat[k + 1] {
            k += 1;
        }
        k as f64 + (lat - self.lat[k]) / (self.lat[k + 1] - self.lat[k])
    }

    pub fn lon(&self, row: f64) -> f64 {
        self.lon0 + row * self.dlon
    }

    pub fn row_of_lon(&self, lon: f64) -> f64 {
        (lon - self.lon0) / self.dlon
    }

    fn mirrored(&self) -> Mapping {
        let lat = self.lat.iter().rev().map(|l| -l).collect();
        Mapping { lat, lon0: self.lon0, dlon: self.dlon }
    }
}

/// Traversability raster plus its sphere mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMap {
    width: usize,
    height: usize,
    blocked: Vec<bool>,
    mapping: Mapping,
}

/// What a walked curve touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Touch {
    /// The interior of cell `(cx, band)`.
    Cell { cx: i64, band: i64 },
    /// The row segment `x ∈ [k, k+1]` on row `row`.
    RowEdge { k: i64, row: i64 },
    /// The parallel `x = k` inside band `band`.
    ColEdge { k: i64, band: i64 },
    /// Passes through vertex `(row, k)`.
    Vertex { row: i64, k: i64 },
    /// Leaves the map or spans half the globe in longitude.
    Outside,
}

/// Raster sample formats accepted by [`GridMap::load_raster`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterFormat {
    EsriAscii,
    /// Little-endian `i16`, `nrows × ncols`, northernmost row first, spanning
    /// the whole globe.
    RawI16 { ncols: usize, nrows: usize },
}

impl GridMap {
    /// Build from a blocked mask indexed `band * width + cx`, with the
    /// whole-globe mapping.
    pub fn new(width: usize, height: usize, blocked: Vec<bool>) -> Self {
        assert!(width > 0 && height > 0, "empty grid");
        assert_eq!(blocked.len(), width * height);
        let mapping = Mapping::global(width, height);
        GridMap { width, height, blocked, mapping }
    }

    pub fn with_mapping(mut self, mapping: Mapping) -> Self {
        assert_eq!(mapping.lat.len(), self.width + 1);
        self.mapping = mapping;
        self
    }

    /// Parse a glyph picture: one text line per band, one glyph per cell;
    /// `@`, `O`, `T`, `W` are blocked, everything else free.
    pub fn from_ascii(text: &str) -> Self {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let width = lines[0].len();
        let mut blocked = Vec::with_capacity(width * lines.len());
        for l in &lines {
            assert_eq!(l.len(), width, "ragged picture");
            blocked.extend(l.bytes().map(glyph_blocked));
        }
        GridMap::new(width, lines.len(), blocked)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn mapping(&self) -> &Mapping {
        &self.mapping
    }

    pub fn blocked_count(&self) -> usize {
        self.blocked.iter().filter(|b| **b).count()
    }

    /// Whether cell `(cx, band)` is blocked; cells outside the map are.
    #[inline]
    pub fn blocked(&self, cx: i64, band: i64) -> bool {
        if cx < 0 || band < 0 || cx >= self.width as i64 || band >= self.height as i64 {
            return true;
        }
        self.blocked[band as usize * self.width + cx as usize]
    }

    #[inline]
    pub fn free(&self, cx: i64, band: i64) -> bool {
        !self.blocked(cx, band)
    }

    /// Map mirrored across the equator: column `cx` becomes `W-1-cx`.
    pub fn mirrored(&self) -> GridMap {
        let w = self.width;
        let mut blocked = vec![false; self.blocked.len()];
        for band in 0..self.height {
            for cx in 0..w {
                blocked[band * w + (w - 1 - cx)] = self.blocked[band * w + cx];
            }
        }
        GridMap { width: w, height: self.height, blocked, mapping: self.mapping.mirrored() }
    }

    /// Load a MovingAI `.map` file: lines are bands, glyph columns are `x`.
    pub fn load_movingai(bytes: &[u8]) -> Result<GridMap, GridError> {
        let text = std::str::from_utf8(bytes).map_err(|e| perr(1, 1, e.to_string()))?;
        let mut lines = text.lines().enumerate();
        let (mut height, mut width) = (None, None);
        loop {
            let (i, line) = lines.next().ok_or_else(|| perr(1, 1, "missing `map` line"))?;
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("type") => {}
                Some("height") => height = Some(parse_dim(parts.next(), i)?),
                Some("width") => width = Some(parse_dim(parts.next(), i)?),
                Some("map") => break,
                Some(other) => return Err(perr(i + 1, 1, format!("unexpected header `{other}`"))),
                None => {}
            }
        }
        let height = height.ok_or_else(|| perr(1, 1, "missing height"))?;
        let width = width.ok_or_else(|| perr(1, 1, "missing width"))?;
        let mut blocked = Vec::with_capacity(width * height);
        let mut rows = 0;
        for (i, line) in lines {
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            if rows == height {
                return Err(GridError::DimensionMismatch { expected: height, found: rows + 1 });
            }
            if line.len() != width {
                return Err(perr(i + 1, line.len().min(width) + 1, format!("expected {width} glyphs")));
            }
            for (j, c) in line.bytes().enumerate() {
                match c {
                    b'.' | b'G' | b'S' => blocked.push(false),
                    b'@' | b'O' | b'T' | b'W' => blocked.push(true),
                    _ => return Err(perr(i + 1, j + 1, format!("bad glyph `{}`", c as char))),
                }
            }
            rows += 1;
        }
        if rows != height {
            return Err(GridError::DimensionMismatch { expected: height, found: rows });
        }
        Ok(GridMap::new(width, height, blocked))
    }

    /// Load a raster; a cell is traversable iff `traversable_if(sample)`.
    /// Raster rows (north to south) become columns of latitude, raster
    /// columns become grid rows of longitude.
    pub fn load_raster(
        bytes: &[u8],
        format: RasterFormat,
        traversable_if: impl Fn(f64) -> bool,
    ) -> Result<GridMap, GridError> {
        let (ncols, nrows, samples, lat0, cs_lat, lon0, cs_lon, nodata) = match format {
            RasterFormat::EsriAscii => {
                let r = parse_esri(bytes)?;
                (r.ncols, r.nrows, r.samples, r.yll, r.cellsize, r.xll, r.cellsize, r.nodata)
            }
            RasterFormat::RawI16 { ncols, nrows } => {
                let expected = ncols * nrows * 2;
                if bytes.len() != expected {
                    return Err(GridError::DimensionMismatch { expected, found: bytes.len() });
                }
                let samples = bytes
                    .chunks_exact(2)
                    .map(|c| i16::from_le_bytes([c[0], c[1]]) as f64)
                    .collect();
                let (cs_lat, cs_lon) = (180.0 / nrows as f64, 360.0 / ncols as f64);
                (ncols, nrows, samples, -90.0, cs_lat, -180.0, cs_lon, None)
            }
        };
        let (w, h) = (nrows, ncols);
        let mut blocked = vec![true; w * h];
        for i in 0..nrows {
            for j in 0..ncols {
                let v = samples[i * ncols + j];
                let ok = nodata.map_or(true, |nd| v != nd) && traversable_if(v);
                blocked[j * w + (nrows - 1 - i)] = !ok;
            }
        }
        let mapping = Mapping::affine(w, lat0, cs_lat, lon0, cs_lon);
        Ok(GridMap::new(w, h, blocked).with_mapping(mapping))
    }

    pub fn vertex_to_sphere(&self, v: GridPoint) -> SpherePoint {
        SpherePoint { lon: self.mapping.lon(v.row), lat: self.mapping.lat(v.x) }
    }

    pub fn sphere_to_grid(&self, p: SpherePoint) -> GridPoint {
        GridPoint { row: self.mapping.row_of_lon(p.lon), x: self.mapping.x_of_lat(p.lat) }
    }

    /// Classify the integer vertex `(row, k)`.
    pub fn classify_vertex(&self, row: i64, k: i64) -> VertexKind {
        let sw = self.blocked(k - 1, row - 1);
        let se = self.blocked(k, row - 1);
        let nw = self.blocked(k - 1, row);
        let ne = self.blocked(k, row);
        match (sw as u8) + (se as u8) + (nw as u8) + (ne as u8) {
            1 => VertexKind::ConvexCorner,
            2 if (sw && ne) || (se && nw) => VertexKind::DoubleCorner,
            _ => VertexKind::NotCorner,
        }
    }

    /// Whether a path may stand on vertex `(row, k)`.
    pub fn vertex_traversable(&self, row: i64, k: i64) -> bool {
        if row < 0 || k < 0 || row > self.height as i64 || k > self.width as i64 {
            return false;
        }
        self.free(k - 1, row - 1) || self.free(k, row - 1) || self.free(k - 1, row) || self.free(k, row)
    }

    /// Whether the unit row segment `x ∈ [k, k+1]` on `row` can be walked.
    #[inline]
    pub fn row_piece_free(&self, row: i64, k: i64) -> bool {
        self.free(k, row - 1) || self.free(k, row)
    }

    /// Walk along `row` from integer `from_x` in direction `dir` and return
    /// the farthest reachable `x` before the stopping rule applies.
    pub fn scan_row(&self, row: i64, from_x: i64, dir: i64, mode: ScanMode) -> i64 {
        let mut x = from_x;
        loop {
            let piece = if dir > 0 { x } else { x - 1 };
            if !self.row_piece_free(row, piece) {
                return x;
            }
            x += dir;
            match self.classify_vertex(row, x) {
                VertexKind::DoubleCorner => return x,
                VertexKind::ConvexCorner if mode == ScanMode::ToNextCorner => return x,
                _ => {}
            }
        }
    }

    /// Whether the touch blocks passage.
    pub fn touch_blocked(&self, t: Touch) -> bool {
        match t {
            Touch::Cell { cx, band } => self.blocked(cx, band),
            Touch::RowEdge { k, row } => !self.row_piece_free(row, k),
            Touch::ColEdge { k, band } => self.blocked(k - 1, band) && self.blocked(k, band),
            Touch::Vertex { row, k } => self.classify_vertex(row, k) == VertexKind::DoubleCorner,
            Touch::Outside => true,
        }
    }

    /// Great-circle visibility between two grid points.
    pub fn gc_visible(&self, p: GridPoint, q: GridPoint) -> bool {
        let mut ok = true;
        self.walk_gc(p, q, &mut |t| {
            ok = !self.touch_blocked(t);
            ok
        });
        ok
    }

    /// Straight-line (flat grid) visibility between two grid points.
    pub fn line_visible(&self, p: GridPoint, q: GridPoint) -> bool {
        let mut ok = true;
        self.walk_line(p, q, &mut |t| {
            ok = !self.touch_blocked(t);
            ok
        });
        ok
    }

    /// Enumerate what the shorter great-circle arc `p→q` touches, in order of
    /// increasing row. `f` returns `false` to stop early.
    pub fn walk_gc(&self, p: GridPoint, q: GridPoint, f: &mut dyn FnMut(Touch) -> bool) {
        let (a, b) = if p.row <= q.row { (p, q) } else { (q, p) };
        if b.row - a.row < EPS_SNAP {
            self.walk_meridian(a, b, f);
            return;
        }
        let (la, lb) = (self.mapping.lon(a.row), self.mapping.lon(b.row));
        if (lb - la).abs() >= PI - 1e-12 {
            f(Touch::Outside);
            return;
        }
        let arc = GcArc::new(self.vertex_to_sphere(a), self.vertex_to_sphere(b));
        let curve = |r0: f64, r1: f64, x0: f64, x1: f64| -> (f64, f64) {
            let (mut lo, mut hi) = (x0.min(x1), x0.max(x1));
            let (l0, l1) = (self.mapping.lon(r0), self.mapping.lon(r1));
            if let Some(lat) = arc.extreme_between(l0, l1) {
                let x = self.mapping.x_of_lat(lat);
                lo = lo.min(x);
                hi = hi.max(x);
            }
            (lo, hi)
        };
        let x_at = |r: f64| self.mapping.x_of_lat(arc.lat_at(self.mapping.lon(r)));
        self.walk_curve(a, b, &x_at, &curve, f);
    }

    /// Like [`GridMap::walk_gc`] for a straight segment in grid space.
    pub fn walk_line(&self, p: GridPoint, q: GridPoint, f: &mut dyn FnMut(Touch) -> bool) {
        let (a, b) = if p.row <= q.row { (p, q) } else { (q, p) };
        if b.row - a.row < EPS_SNAP {
            self.walk_meridian(a, b, f);
            return;
        }
        let x_at = |r: f64| a.x + (b.x - a.x) * (r - a.row) / (b.row - a.row);
        let curve = |_: f64, _: f64, x0: f64, x1: f64| (x0.min(x1), x0.max(x1));
        self.walk_curve(a, b, &x_at, &curve, f);
    }

    /// Walk the constant-latitude arc `x = const` between rows `r0` and `r1`.
    pub fn walk_parallel(&self, x: f64, r0: f64, r1: f64, f: &mut dyn FnMut(Touch) -> bool) {
        let (a, b) = (r0.min(r1), r0.max(r1));
        if b - a < EPS_SNAP {
            return;
        }
        let k = x.round();
        let on_line = (x - k).abs() <= EPS_SNAP;
        let first = (a + EPS_SNAP).floor() as i64;
        let last = (b - EPS_SNAP).ceil() as i64;
        for band in first..last {
            if band > first && on_line && !f(Touch::Vertex { row: band, k: k as i64 }) {
                return;
            }
            let t = if on_line {
                Touch::ColEdge { k: k as i64, band }
            } else {
                Touch::Cell { cx: x.floor() as i64, band }
            };
            if !f(t) {
                return;
            }
        }
    }

    fn walk_meridian(&self, a: GridPoint, b: GridPoint, f: &mut dyn FnMut(Touch) -> bool) {
        let (lo, hi) = (a.x.min(b.x), a.x.max(b.x));
        if hi - lo < EPS_SNAP {
            return;
        }
        let r = a.row.round();
        let on_row = (a.row - r).abs() <= EPS_SNAP;
        let first = (lo + EPS_SNAP).floor() as i64;
        let last = (hi - EPS_SNAP).ceil() as i64;
        for k in first..last {
            if k > first && on_row && !f(Touch::Vertex { row: r as i64, k }) {
                return;
            }
            let t = if on_row {
                Touch::RowEdge { k, row: r as i64 }
            } else {
                Touch::Cell { cx: k, band: a.row.floor() as i64 }
            };
            if !f(t) {
                return;
            }
        }
    }

    fn walk_curve(
        &self,
        a: GridPoint,
        b: GridPoint,
        x_at: &dyn Fn(f64) -> f64,
        range: &dyn Fn(f64, f64, f64, f64) -> (f64, f64),
        f: &mut dyn FnMut(Touch) -> bool,
    ) {
        let first = (a.row + EPS_SNAP).floor() as i64;
        let last = (b.row - EPS_SNAP).ceil() as i64;
        let mut r0 = a.row;
        let mut x0 = a.x;
        for band in first..last {
            let r1 = ((band + 1) as f64).min(b.row);
            let x1 = if band + 1 >= last { b.x } else { x_at(r1) };
            if band > first {
                let k = x0.round();
                if (x0 - k).abs() <= EPS_SNAP && !f(Touch::Vertex { row: band, k: k as i64 }) {
                    return;
                }
            }
            if x0.min(x1) < -EPS_SNAP || x0.max(x1) > self.width as f64 + EPS_SNAP {
                f(Touch::Outside);
                return;
            }
            let (lo, hi) = range(r0, r1, x0, x1);
            if hi - lo <= 2.0 * EPS_SNAP {
                let k = lo.round();
                let t = if (lo - k).abs() <= EPS_SNAP {
                    Touch::ColEdge { k: k as i64, band }
                } else {
                    Touch::Cell { cx: lo.floor() as i64, band }
                };
                if !f(t) {
                    return;
                }
            } else {
                if lo < -EPS_SNAP || hi > self.width as f64 + EPS_SNAP {
                    f(Touch::Outside);
                    return;
                }
                let c0 = (lo + EPS_SNAP).floor() as i64;
                let c1 = (hi - EPS_SNAP).ceil() as i64;
                for cx in c0..c1 {
                    if !f(Touch::Cell { cx, band }) {
                        return;
                    }
                }
            }
            r0 = r1;
            x0 = x1;
        }
    }
}

fn glyph_blocked(c: u8) -> bool {
    matches!(c, b'@' | b'O' | b'T' | b'W')
}

fn parse_dim(tok: Option<&str>, line: usize) -> Result<usize, GridError> {
    tok.and_then(|t| t.parse().ok())
        .filter(|v: &usize| *v > 0)
        .ok_or_else(|| perr(line + 1, 1, "bad dimension"))
}

struct EsriRaster {
    ncols: usize,
    nrows: usize,
    xll: f64,
    yll: f64,
    cellsize: f64,
    nodata: Option<f64>,
    samples: Vec<f64>,
}

fn parse_esri(bytes: &[u8]) -> Result<EsriRaster, GridError> {
    let text = std::str::from_utf8(bytes).map_err(|e| perr(1, 1, e.to_string()))?;
    let mut lines = text.lines().enumerate().peekable();
    let (mut ncols, mut nrows, mut cellsize) = (None, None, None);
    let (mut xll, mut yll, mut nodata) = (0.0, 0.0, None);
    let (mut xcenter, mut ycenter) = (false, false);
    while let Some((i, line)) = lines.peek().copied() {
        let mut parts = line.split_whitespace();
        let Some(key) = parts.next() else {
            lines.next();
            continue;
        };
        if !key.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
            break;
        }
        let val: f64 = parts
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| perr(i + 1, key.len() + 2, format!("bad value for `{key}`")))?;
        match key.to_ascii_lowercase().as_str() {
            "ncols" => ncols = Some(val as usize),
            "nrows" => nrows = Some(val as usize),
            "xllcorner" => xll = val,
            "yllcorner" => yll = val,
            "xllcenter" => (xll, xcenter) = (val, true),
            "yllcenter" => (yll, ycenter) = (val, true),
            "cellsize" => cellsize = Some(val),
            "nodata_value" => nodata = Some(val),
            _ => return Err(perr(i + 1, 1, format!("unknown header `{key}`"))),
        }
        lines.next();
    }
    let ncols = ncols.filter(|v| *v > 0).ok_or_else(|| perr(1, 1, "missing ncols"))?;
    let nrows = nrows.filter(|v| *v > 0).ok_or_else(|| perr(1, 1, "missing nrows"))?;
    let cellsize = cellsize.filter(|v| *v > 0.0).ok_or_else(|| perr(1, 1, "missing cellsize"))?;
    if xcenter {
        xll -= cellsize / 2.0;
    }
    if ycenter {
        yll -= cellsize / 2.0;
    }
    let mut samples = Vec::with_capacity(ncols * nrows);
    for (i, line) in lines {
        for (j, tok) in line.split_whitespace().enumerate() {
            let v: f64 = tok.parse().map_err(|_| perr(i + 1, j + 1, format!("bad sample `{tok}`")))?;
            samples.push(v);
        }
    }
    if samples.len() != ncols * nrows {
        return Err(GridError::DimensionMismatch { expected: ncols * nrows, found: samples.len() });
    }
    Ok(EsriRaster { ncols, nrows, xll, yll, cellsize, nodata, samples })
}

/// A great circle through two points, with its normal precomputed.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GcArc {
    n: [f64; 3],
    /// Longitude of the northern vertex, if the circle is not the equator.
    north_lon: Option<f64>,
    vertex_lat: f64,
}

impl GcArc {
    pub(crate) fn new(p: SpherePoint, q: SpherePoint) -> Self {
        let n = cross(p.to_vec3(), q.to_vec3());
        let nn = norm(n);
        let n = [n[0] / nn, n[1] / nn, n[2] / nn];
        let w = [-n[2] * n[0], -n[2] * n[1], 1.0 - n[2] * n[2]];
        let north_lon = if norm(w) < 1e-15 { None } else { Some(w[1].atan2(w[0])) };
        GcArc { n, north_lon, vertex_lat: n[2].abs().min(1.0).acos() }
    }

    /// Latitude of the circle on meridian `lon`.
    #[inline]
    pub(crate) fn lat_at(&self, lon: f64) -> f64 {
        let (s, c) = lon.sin_cos();
        (-(self.n[0] * c + self.n[1] * s) / self.n[2]).atan()
    }

    /// Latitude of a vertex of the circle lying strictly between the two
    /// meridians, if any.
    pub(crate) fn extreme_between(&self, l0: f64, l1: f64) -> Option<f64> {
        let nl = self.north_lon?;
        let (a, b) = (l0.min(l1), l0.max(l1));
        for (lon, lat) in [(nl, self.vertex_lat), (nl + PI, -self.vertex_lat)] {
            let off = crate::geom::wrap_pi(lon - a);
            if off > 0.0 && off < b - a {
                return Some(lat);
            }
        }
        None
    }

    #[allow(dead_code)]
    pub(crate) fn on_plane(&self, p: SpherePoint) -> f64 {
        dot(self.n, p.to_vec3())
    }
}

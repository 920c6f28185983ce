//! Interval search shared by the spherical and the flat-grid planners.
//!
//! Nodes are intervals on a row together with a source that reaches every
//! point of the interval by a taut final leg. A source is either a root point
//! (the last leg is a straight line / great circle) or a hug: the path follows
//! a constant-latitude obstacle edge from an entry point and leaves it on the
//! great circle tangent to the edge. Flat geometry never hugs.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};

use crate::geom::{central_angle, SphereConfig, SpherePoint};
use crate::grid::{GcArc, GridMap, GridPoint, VertexKind, EPS_SNAP};
use crate::route::SegmentKind;

const INF: f64 = f64::INFINITY;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Geometry {
    Flat,
    Sphere(SphereConfig),
}

/// How the path arrives at a root from its parent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Via {
    Start,
    Direct,
    /// Along parallel `edge_x` from the parent in row direction `dir`, then
    /// on the tangent great circle.
    Hug { edge_x: i64, dir: i8 },
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Root {
    pub pos: GridPoint,
    pub sp: SpherePoint,
    pub tan_lat: f64,
    pub g: f64,
    pub parent: Option<u32>,
    pub via: Via,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Src {
    Point(u32),
    /// Hug along parallel `edge_x`; the obstacle lies at larger `x` when
    /// `side > 0`, smaller when `side < 0`.
    Hug { entry: u32, edge_x: i64, side: i8, dir: i8 },
}

impl Src {
    pub fn root(&self) -> u32 {
        match *self {
            Src::Point(r) => r,
            Src::Hug { entry, .. } => entry,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Node {
    pub row: i64,
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub src: Src,
    /// Row direction of travel; 0 for flat nodes.
    pub dir: i8,
    /// Flat nodes emitted by a completed row scan have nothing left to expand.
    pub terminal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum RootKey {
    Vertex(i64, i64),
    Entry(i64, i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct NodeKey(i64, i64, i64, u32, i8);

struct Entry {
    f: f64,
    g: f64,
    seq: u64,
    idx: u32,
}

impl PartialEq for Entry {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Entry {
    // Max-heap order: smaller f first, then larger g, then first in.
    fn cmp(&self, o: &Self) -> Ordering {
        o.f.total_cmp(&self.f)
            .then(self.g.total_cmp(&o.g))
            .then(o.seq.cmp(&self.seq))
    }
}

fn q(x: f64) -> i64 {
    (x * 1e7).round() as i64
}

fn snap(x: f64) -> f64 {
    let k = x.round();
    if (x - k).abs() <= EPS_SNAP {
        k
    } else {
        x
    }
}

fn as_int(x: f64) -> Option<i64> {
    let k = x.round();
    ((x - k).abs() <= EPS_SNAP).then_some(k as i64)
}

pub(crate) struct Engine<'a> {
    pub map: &'a GridMap,
    pub geo: Geometry,
    pub t: GridPoint,
    t_sp: SpherePoint,
    pub roots: Vec<Root>,
    pub nodes: Vec<Node>,
    root_best: HashMap<RootKey, (f64, u32)>,
    seen: HashSet<NodeKey>,
    open: BinaryHeap<Entry>,
    seq: u64,
    pub expanded: usize,
    pub generated: usize,
}

impl<'a> Engine<'a> {
    pub fn new(map: &'a GridMap, geo: Geometry, t: GridPoint) -> Self {
        Engine {
            map,
            geo,
            t,
            t_sp: map.vertex_to_sphere(t),
            roots: Vec::new(),
            nodes: Vec::new(),
            root_best: HashMap::new(),
            seen: HashSet::new(),
            open: BinaryHeap::new(),
            seq: 0,
            expanded: 0,
            generated: 0,
        }
    }

    fn sphere(&self) -> bool {
        matches!(self.geo, Geometry::Sphere(_))
    }

    fn radius(&self) -> f64 {
        match self.geo {
            Geometry::Sphere(c) => c.radius_km,
            Geometry::Flat => 1.0,
        }
    }

    pub fn sp(&self, p: GridPoint) -> SpherePoint {
        self.map.vertex_to_sphere(p)
    }

    pub fn dist(&self, a: GridPoint, b: GridPoint) -> f64 {
        match self.geo {
            Geometry::Flat => (a.row - b.row).hypot(a.x - b.x),
            Geometry::Sphere(c) => c.radius_km * central_angle(self.sp(a), self.sp(b)),
        }
    }

    fn lon(&self, row: f64) -> f64 {
        self.map.mapping().lon(row)
    }

    fn lat(&self, x: f64) -> f64 {
        self.map.mapping().lat(x)
    }

    /// Where the geodesic from `a` through `b` reaches `row`.
    fn extend(&self, a: GridPoint, b: GridPoint, row: f64) -> f64 {
        match self.geo {
            Geometry::Flat => a.x + (b.x - a.x) * (row - a.row) / (b.row - a.row),
            Geometry::Sphere(_) => {
                let arc = GcArc::new(self.sp(a), self.sp(b));
                self.map.mapping().x_of_lat(arc.lat_at(self.lon(row)))
            }
        }
    }

    /// Longitude where the path hugging `edge_x` from `entry` leaves the edge
    /// towards `p`.
    pub fn exit_lon(&self, entry: u32, edge_x: i64, dir: i8, p: GridPoint) -> f64 {
        let te = self.lat(edge_x as f64).tan();
        let tp = self.lat(p.x).tan();
        let ratio = (tp / te).clamp(-1.0, 1.0);
        let d = dir as f64;
        let x = self.lon(p.row) - d * ratio.acos();
        let t0 = self.roots[entry as usize].sp.lon;
        if d * (x - t0) < 0.0 {
            t0
        } else {
            x
        }
    }

    /// `None` when the continuation would span half a turn or more.
    fn hug_extend(&self, entry: u32, edge_x: i64, dir: i8, p: GridPoint, row: f64) -> Option<f64> {
        let xl = self.exit_lon(entry, edge_x, dir, p);
        let dl = self.lon(row) - xl;
        if dir as f64 * dl >= std::f64::consts::PI - 1e-12 {
            return None;
        }
        let te = self.lat(edge_x as f64).tan();
        let lat = (te * dl.cos()).atan();
        Some(self.map.mapping().x_of_lat(lat))
    }

    /// Cost of reaching `p` through `src`.
    pub fn cost(&self, src: Src, p: GridPoint) -> f64 {
        match src {
            Src::Point(r) => {
                let r = &self.roots[r as usize];
                r.g + self.dist(r.pos, p)
            }
            Src::Hug { entry, edge_x, dir, .. } => {
                let e = &self.roots[entry as usize];
                let xl = self.exit_lon(entry, edge_x, dir, p);
                let lat = self.lat(edge_x as f64);
                let exit = SpherePoint::new(xl, lat);
                e.g + self.radius() * lat.cos() * (xl - e.sp.lon).abs()
                    + self.radius() * central_angle(exit, self.sp(p))
            }
        }
    }

    fn src_extend(&self, src: Src, p: GridPoint, row: f64) -> Option<f64> {
        match src {
            Src::Point(r) => Some(self.extend(self.roots[r as usize].pos, p, row)),
            Src::Hug { entry, edge_x, dir, .. } => self.hug_extend(entry, edge_x, dir, p, row),
        }
    }

    /// Grid point where a hug from `entry` leaves the edge towards `p`.
    pub fn exit_point(&self, entry: u32, edge_x: i64, dir: i8, p: GridPoint) -> GridPoint {
        let xl = self.exit_lon(entry, edge_x, dir, p);
        GridPoint::new(self.map.mapping().row_of_lon(xl), edge_x as f64)
    }

    fn heuristic(&self, n: &Node) -> f64 {
        let r = &self.roots[n.src.root() as usize];
        match self.geo {
            Geometry::Sphere(c) => r.g + c.radius_km * central_angle(r.sp, self.t_sp),
            Geometry::Flat => {
                let y = n.row as f64;
                let mut t = self.t;
                if (r.pos.row - y) * (t.row - y) > 0.0 {
                    t.row = 2.0 * y - t.row;
                }
                let x = if (r.pos.row - y).abs() < EPS_SNAP {
                    if (r.pos.x - n.lo).abs() <= (r.pos.x - n.hi).abs() { n.lo } else { n.hi }
                } else if (t.row - y).abs() < EPS_SNAP {
                    t.x.clamp(n.lo, n.hi)
                } else {
                    self.extend(r.pos, t, y).clamp(n.lo, n.hi)
                };
                let p = GridPoint::new(y, x);
                r.g + self.dist(r.pos, p) + self.dist(p, t)
            }
        }
    }

    fn contains_target(&self, n: &Node) -> bool {
        n.row as f64 == self.t.row && self.t.x >= n.lo - EPS_SNAP && self.t.x <= n.hi + EPS_SNAP
    }

    /// Register a root; `None` when an equal or cheaper one already exists.
    pub fn new_root(&mut self, pos: GridPoint, g: f64, parent: Option<u32>, via: Via) -> Option<u32> {
        let key = match (as_int(pos.row), as_int(pos.x)) {
            (Some(r), Some(k)) => RootKey::Vertex(r, k),
            _ => RootKey::Entry(q(pos.x), q(pos.row)),
        };
        let tol = 1e-12 * (1.0 + g.abs());
        if let Some(&(best, _)) = self.root_best.get(&key) {
            if best <= g + tol {
                return None;
            }
        }
        let sp = self.sp(pos);
        let id = self.roots.len() as u32;
        self.roots.push(Root { pos, sp, tan_lat: sp.lat.tan(), g, parent, via });
        self.root_best.insert(key, (g, id));
        Some(id)
    }

    fn root_key_best(&self, id: u32) -> f64 {
        let r = &self.roots[id as usize];
        let key = match (as_int(r.pos.row), as_int(r.pos.x)) {
            (Some(a), Some(k)) => RootKey::Vertex(a, k),
            _ => RootKey::Entry(q(r.pos.x), q(r.pos.row)),
        };
        self.root_best.get(&key).map_or(r.g, |b| b.0)
    }

    /// Best-first loop. Returns the index of the goal node.
    pub fn run(&mut self, s: GridPoint) -> Option<u32> {
        let root = self.new_root(s, 0.0, None, Via::Start)?;
        let mut work = Vec::new();
        self.start_successors(root, &mut work);
        loop {
            while let Some(n) = work.pop() {
                self.admit(n, &mut work);
            }
            let e = self.open.pop()?;
            let n = self.nodes[e.idx as usize];
            let rid = n.src.root();
            let g = self.roots[rid as usize].g;
            if g > self.root_key_best(rid) + 1e-12 * (1.0 + g) {
                continue;
            }
            if self.contains_target(&n) {
                return Some(e.idx);
            }
            self.expanded += 1;
            self.expand(&n, &mut work);
        }
    }

    fn admit(&mut self, n: Node, work: &mut Vec<Node>) {
        self.generated += 1;
        let (sk, tag) = match n.src {
            Src::Point(r) => (r, 0),
            Src::Hug { entry, .. } => (entry, 1),
        };
        if !self.seen.insert(NodeKey(n.row, q(n.lo), q(n.hi), sk, tag + 2 * n.dir)) {
            return;
        }
        let goal = self.contains_target(&n);
        if !goal && self.is_intermediate(&n) {
            self.expanded += 1;
            self.expand(&n, work);
            return;
        }
        if !goal && n.dir == 0 && n.terminal {
            // Only kept for the target check; nothing to expand.
            return;
        }
        let f = if goal { self.cost(n.src, self.t) } else { self.heuristic(&n) };
        let g = self.roots[n.src.root() as usize].g;
        let idx = self.nodes.len() as u32;
        self.nodes.push(n);
        self.seq += 1;
        self.open.push(Entry { f, g, seq: self.seq, idx });
    }

    /// A cone or hug node is intermediate when neither endpoint can host a
    /// turn: its only successors are its own projection.
    pub fn is_intermediate(&self, n: &Node) -> bool {
        if n.dir == 0 {
            return false;
        }
        for x in [n.lo, n.hi] {
            if let Some(k) = as_int(x) {
                if self.map.classify_vertex(n.row, k) == VertexKind::ConvexCorner {
                    return false;
                }
            }
        }
        true
    }

    pub fn start_successors(&mut self, s: u32, out: &mut Vec<Node>) {
        let p = self.roots[s as usize].pos;
        let (y, k) = (p.row as i64, p.x as i64);
        self.flat_scan(s, k, 1, false, out);
        self.flat_scan(s, k, -1, false, out);
        for d in [1i8, -1] {
            for seed in [k - 1, k] {
                self.turn_into(s, y, d, seed, -INF, INF, out);
            }
        }
    }

    pub fn expand(&mut self, n: &Node, out: &mut Vec<Node>) {
        if n.dir == 0 {
            if n.terminal {
                return;
            }
            let r = self.roots[n.src.root() as usize].pos;
            let (far, o) = if r.x <= n.lo { (n.hi, 1) } else { (n.lo, -1) };
            if let Some(k) = as_int(far) {
                self.flat_scan(n.src.root(), k, o, true, out);
            }
            return;
        }
        self.project(n, out);
        self.endpoint_turns(n, out);
    }

    /// Maximal run of free cells in `band` containing cell `c`, as `[L, R]`.
    fn free_run(&self, c: i64, band: i64) -> (i64, i64) {
        let (mut l, mut r) = (c, c);
        while self.map.free(l - 1, band) {
            l -= 1;
        }
        while self.map.free(r + 1, band) {
            r += 1;
        }
        (l, r + 1)
    }

    fn project(&mut self, n: &Node, out: &mut Vec<Node>) {
        let d = n.dir as i64;
        let (y, y2) = (n.row, n.row + d);
        if y2 < 0 || y2 > self.map.height() as i64 {
            return;
        }
        let band = if d > 0 { y } else { y - 1 };
        let mut seeds = Vec::with_capacity(2);
        if n.hi - n.lo > EPS_SNAP {
            seeds.push(((n.lo + n.hi) / 2.0).floor() as i64);
        } else if let Some(k) = as_int(n.lo) {
            seeds.extend([k - 1, k]);
        } else {
            seeds.push(n.lo.floor() as i64);
        }
        let mut runs: Vec<(i64, i64)> = Vec::new();
        for c in seeds {
            if self.map.free(c, band) {
                let r = self.free_run(c, band);
                if !runs.contains(&r) {
                    runs.push(r);
                }
            }
        }
        let yf = y as f64;
        for (l, r) in runs {
            match n.src {
                Src::Point(root) => {
                    let rp = self.roots[root as usize].pos;
                    // No great circle from the root reaches half a turn away,
                    // but a hug still can.
                    let (a, b) = if self.sphere()
                        && (self.lon(y2 as f64) - self.lon(rp.row)).abs() >= std::f64::consts::PI - 1e-12
                    {
                        (INF, -INF)
                    } else {
                        (
                            self.extend(rp, GridPoint::new(yf, n.lo), y2 as f64),
                            self.extend(rp, GridPoint::new(yf, n.hi), y2 as f64),
                        )
                    };
                    self.emit_point_cone(root, y, n.dir, l, r, a, b, Some((n.lo, n.hi)), out);
                }
                Src::Hug { edge_x, side, .. } => {
                    let ext = |e: &Self, x: f64| e.src_extend(n.src, GridPoint::new(yf, x), y2 as f64);
                    // Beyond half a turn the far end is bounded by the mirror
                    // latitude of the edge (itself out of reach); the near end has no image.
                    let mirror = self.map.mapping().x_of_lat(-self.lat(edge_x as f64));
                    let (ea, eb) = (ext(self, n.lo), ext(self, n.hi));
                    let (ea, eb) = if side > 0 {
                        (Some(ea.unwrap_or(mirror + 1e-7)), eb)
                    } else {
                        (ea, Some(eb.unwrap_or(mirror - 1e-7)))
                    };
                    let (Some(ea), Some(eb)) = (ea, eb) else { continue };
                    let (mut a, mut b) = (ea.max(l as f64), eb.min(r as f64));
                    let ex = edge_x as f64;
                    if side > 0 && (n.hi - ex).abs() <= EPS_SNAP && r == edge_x {
                        b = ex;
                    }
                    if side < 0 && (n.lo - ex).abs() <= EPS_SNAP && l == edge_x {
                        a = ex;
                    }
                    if a <= b + EPS_SNAP {
                        self.emit_nodes(y2, a, b, n.src, n.dir, out);
                    }
                }
            }
        }
    }

    /// Tangency of the great circles from `root` with parallel `xe` when that
    /// parallel bounds the run on its poleward side. Returns the tangent row
    /// and the tangent circle's crossing of `y + d` when the tangency falls in
    /// the band `[y, y+d)`.
    fn tangent(&self, root: u32, xe: i64, y: i64, d: i8) -> Option<(f64, f64)> {
        let r = &self.roots[root as usize];
        let xe_f = xe as f64;
        let lat_e = self.lat(xe_f);
        if lat_e == 0.0 {
            return None;
        }
        if (lat_e > 0.0 && r.pos.x > xe_f + EPS_SNAP) || (lat_e < 0.0 && r.pos.x < xe_f - EPS_SNAP) {
            return None;
        }
        let te = lat_e.tan();
        let ratio = r.tan_lat / te;
        if ratio.abs() > 1.0 + 1e-12 {
            // No great circle through the root touches this parallel.
            return None;
        }
        let span = ratio.clamp(-1.0, 1.0).acos();
        if span >= std::f64::consts::PI - 1e-12 {
            return None;
        }
        let th = r.sp.lon + d as f64 * span;
        let trow = self.map.mapping().row_of_lon(th);
        let df = d as f64;
        let rel = df * (trow - y as f64);
        if rel < -EPS_SNAP || rel >= 1.0 - EPS_SNAP {
            return None;
        }
        let lat2 = (te * (self.lon((y + d as i64) as f64) - th).cos()).atan();
        Some((trow, self.map.mapping().x_of_lat(lat2)))
    }

    #[allow(clippy::too_many_arguments)]
    fn emit_point_cone(
        &mut self,
        root: u32,
        y: i64,
        d: i8,
        l: i64,
        r: i64,
        ray_lo: f64,
        ray_hi: f64,
        cross: Option<(f64, f64)>,
        out: &mut Vec<Node>,
    ) {
        let y2 = y + d as i64;
        let (mut a, mut b) = (ray_lo.max(l as f64), ray_hi.min(r as f64));
        let mut hugs = Vec::new();
        if self.sphere() {
            for (xe, side) in [(r, 1i8), (l, -1i8)] {
                let lat_e = self.lat(xe as f64);
                if (side > 0) != (lat_e > 0.0) {
                    continue;
                }
                let Some((trow, lim)) = self.tangent(root, xe, y, d) else { continue };
                if side > 0 {
                    b = b.min(lim);
                } else {
                    a = a.max(lim);
                }
                let ok = match cross {
                    None => true,
                    Some((lo, hi)) => {
                        // Where the tangent circle crosses the node's row.
                        let th = self.lon(trow);
                        let lat = (lat_e.tan() * (self.lon(y as f64) - th).cos()).atan();
                        let xc = self.map.mapping().x_of_lat(lat);
                        xc >= lo - 1e-7 && xc <= hi + 1e-7
                    }
                };
                if ok {
                    hugs.push((trow, lim, xe, side));
                }
            }
        }
        if a <= b + EPS_SNAP {
            self.emit_nodes(y2, a, b, Src::Point(root), d, out);
        }
        for (trow, lim, xe, side) in hugs {
            let (lo, hi) = if side > 0 { (lim.max(l as f64), r as f64) } else { (l as f64, lim.min(r as f64)) };
            if hi - lo <= EPS_SNAP {
                continue;
            }
            let tp = GridPoint::new(trow, xe as f64);
            let rr = self.roots[root as usize];
            let entry = if (tp.row - rr.pos.row).abs() <= EPS_SNAP && (tp.x - rr.pos.x).abs() <= EPS_SNAP {
                // The root itself sits on the edge at its tangency.
                root
            } else {
                let g = rr.g + self.dist(rr.pos, tp);
                let Some(entry) = self.new_root(tp, g, Some(root), Via::Direct) else { continue };
                entry
            };
            let src = Src::Hug { entry, edge_x: xe, side, dir: d };
            self.emit_nodes(y2, lo, hi, src, d, out);
        }
    }

    /// Emit nodes covering `[a, b]` on `row`, split at corners.
    fn emit_nodes(&mut self, row: i64, a: f64, b: f64, src: Src, dir: i8, out: &mut Vec<Node>) {
        let w = self.map.width() as f64;
        let (a, b) = (snap(a.max(0.0)), snap(b.min(w)));
        if a > b + EPS_SNAP {
            return;
        }
        let b = b.max(a);
        let mut start = a;
        let mut k = (a + EPS_SNAP).floor() as i64 + 1;
        while (k as f64) < b - EPS_SNAP {
            if self.map.classify_vertex(row, k) != VertexKind::NotCorner {
                self.push_node(row, start, k as f64, src, dir, out);
                start = k as f64;
            }
            k += 1;
        }
        self.push_node(row, start, b, src, dir, out);
    }

    fn push_node(&self, row: i64, lo: f64, hi: f64, src: Src, dir: i8, out: &mut Vec<Node>) {
        let open = |x: f64| {
            as_int(x).is_some_and(|k| self.map.classify_vertex(row, k) == VertexKind::DoubleCorner)
        };
        if lo == hi && open(lo) {
            return;
        }
        out.push(Node {
            row,
            lo,
            hi,
            lo_closed: !open(lo),
            hi_closed: !open(hi),
            src,
            dir,
            terminal: false,
        });
    }

    fn turn_into(&mut self, root: u32, y: i64, d: i8, seed: i64, ray_lo: f64, ray_hi: f64, out: &mut Vec<Node>) {
        let y2 = y + d as i64;
        if y2 < 0 || y2 > self.map.height() as i64 {
            return;
        }
        let band = if d > 0 { y } else { y - 1 };
        if !self.map.free(seed, band) {
            return;
        }
        let (l, r) = self.free_run(seed, band);
        self.emit_point_cone(root, y, d, l, r, ray_lo, ray_hi, None, out);
    }

    fn endpoint_turns(&mut self, n: &Node, out: &mut Vec<Node>) {
        let d = n.dir as i64;
        let y = n.row;
        let (back, front) = if d > 0 { (y - 1, y) } else { (y, y - 1) };
        for (x, o) in [(n.lo, -1i64), (n.hi, 1)] {
            let Some(k) = as_int(x) else { continue };
            if self.map.classify_vertex(y, k) != VertexKind::ConvexCorner {
                continue;
            }
            let (co, ci) = if o > 0 { (k, k - 1) } else { (k - 1, k) };
            let qp = GridPoint::new(y as f64, k as f64);
            let back_out = self.map.blocked(co, back);
            let front_out = self.map.blocked(co, front);
            if !back_out && !front_out {
                continue;
            }
            let g = self.cost(n.src, qp);
            let via = match n.src {
                Src::Point(_) => Via::Direct,
                Src::Hug { edge_x, dir, .. } => Via::Hug { edge_x, dir },
            };
            let Some(root) = self.new_root(qp, g, Some(n.src.root()), via) else { continue };
            let e = self.src_extend(n.src, qp, (y + d) as f64).unwrap_or(if o > 0 { -INF } else { INF });
            let (lo, hi) = if o > 0 { (e, INF) } else { (-INF, e) };
            if back_out {
                self.flat_scan(root, k, o, false, out);
                self.turn_into(root, y, n.dir, co, lo, hi, out);
            } else {
                self.turn_into(root, y, n.dir, ci, lo, hi, out);
            }
        }
    }

    /// Walk the root's row from `from` in direction `o`, emitting flat nodes
    /// and turns at corners whose obstacle lies behind the walk.
    fn flat_scan(&mut self, root: u32, from: i64, o: i64, check_from: bool, out: &mut Vec<Node>) {
        let rp = self.roots[root as usize].pos;
        let y = rp.row as i64;
        let w = self.map.width() as i64;
        if check_from {
            self.flat_turn(root, y, from, o, out);
        }
        let mut x = from;
        let mut seg = from;
        loop {
            let piece = if o > 0 { x } else { x - 1 };
            if piece < 0 || piece >= w || !self.map.row_piece_free(y, piece) {
                break;
            }
            let nx = x + o;
            let kind = self.map.classify_vertex(y, nx);
            let next_piece = if o > 0 { nx } else { nx - 1 };
            let ends = kind != VertexKind::NotCorner
                || nx == 0
                || nx == w
                || !self.map.row_piece_free(y, next_piece);
            if ends {
                let (lo, hi) = (seg.min(nx) as f64, seg.max(nx) as f64);
                let clear = self.map.free(piece, y - 1) && self.map.free(piece, y);
                let n = Node {
                    row: y,
                    lo,
                    hi,
                    lo_closed: true,
                    hi_closed: kind != VertexKind::DoubleCorner,
                    src: Src::Point(root),
                    dir: 0,
                    terminal: true,
                };
                if clear || self.contains_target(&n) {
                    out.push(n);
                }
                seg = nx;
            }
            if kind == VertexKind::DoubleCorner {
                break;
            }
            if kind == VertexKind::ConvexCorner {
                self.flat_turn(root, y, nx, o, out);
            }
            x = nx;
        }
    }

    fn flat_turn(&mut self, root: u32, y: i64, v: i64, o: i64, out: &mut Vec<Node>) {
        let prev = if o > 0 { v - 1 } else { v };
        let next = if o > 0 { v } else { v - 1 };
        for (band, d) in [(y - 1, -1i8), (y, 1i8)] {
            if self.map.blocked(prev, band) && self.map.free(next, band) {
                let rp = self.roots[root as usize];
                let vp = GridPoint::new(y as f64, v as f64);
                let g = rp.g + self.dist(rp.pos, vp);
                let Some(t) = self.new_root(vp, g, Some(root), Via::Direct) else { continue };
                let (lo, hi) = if o > 0 { (v as f64, INF) } else { (-INF, v as f64) };
                self.turn_into(t, y, d, next, lo, hi, out);
            }
        }
    }

    /// Turning points and segment kinds from the start to the target.
    pub fn path(&self, goal: u32) -> (Vec<GridPoint>, Vec<SegmentKind>) {
        let n = self.nodes[goal as usize];
        let mut pts = vec![self.t];
        let mut kinds = Vec::new();
        let mut cur = match n.src {
            Src::Point(r) => {
                kinds.push(SegmentKind::GreatCircle);
                r
            }
            Src::Hug { entry, edge_x, dir, .. } => {
                pts.push(self.exit_point(entry, edge_x, dir, self.t));
                kinds.push(SegmentKind::GreatCircle);
                kinds.push(SegmentKind::ParallelArc);
                entry
            }
        };
        loop {
            let r = self.roots[cur as usize];
            pts.push(r.pos);
            let Some(parent) = r.parent else { break };
            match r.via {
                Via::Start | Via::Direct => kinds.push(SegmentKind::GreatCircle),
                Via::Hug { edge_x, dir } => {
                    pts.push(self.exit_point(parent, edge_x, dir, r.pos));
                    kinds.push(SegmentKind::GreatCircle);
                    kinds.push(SegmentKind::ParallelArc);
                }
            }
            cur = parent;
        }
        pts.reverse();
        kinds.reverse();
        // Drop zero-length pieces.
        let mut out_p = vec![pts[0]];
        let mut out_k = Vec::new();
        for (i, k) in kinds.into_iter().enumerate() {
            let p = pts[i + 1];
            let last = *out_p.last().unwrap();
            if (p.row - last.row).abs() < 1e-12 && (p.x - last.x).abs() < 1e-12 {
                continue;
            }
            out_p.push(p);
            out_k.push(k);
        }
        (out_p, out_k)
    }
}

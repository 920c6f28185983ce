//! Optimal any-angle search on the sphere.

use std::time::Instant;

use crate::engine::{Engine, Geometry, Node, Src};
use crate::geom::SphereConfig;
use crate::grid::{GridMap, GridPoint, Interval};
use crate::route::{tiles_crossed, RouteRecord, SearchError};

/// Search options.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SearchConfig {
    pub sphere: SphereConfig,
}

/// Node kinds as seen from outside the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Interval on the root's own row.
    Flat,
    /// Interval reached from the root along great circles.
    Cone,
    /// Interval reached by hugging a constant-latitude edge from the root.
    Adjoint,
}

/// A search node: an interval, the root it is reached from and the root's
/// cost.
#[derive(Debug, Clone, Copy)]
pub struct SNode {
    pub interval: Interval,
    pub root: GridPoint,
    pub kind: NodeKind,
    pub g: f64,
    /// Edge parallel hugged by adjoint nodes.
    pub edge_x: Option<i64>,
    pub(crate) inner: Node,
}

pub(crate) fn check_endpoint(map: &GridMap, p: GridPoint) -> Result<(), SearchError> {
    let (r, k) = (p.row.round(), p.x.round());
    if r != p.row || k != p.x || !map.vertex_traversable(r as i64, k as i64) {
        return Err(SearchError::InvalidEndpoint);
    }
    Ok(())
}

/// Shortest legal route from `s` to `t` over great circles and obstacle edges.
pub fn search(map: &GridMap, s: GridPoint, t: GridPoint, cfg: &SearchConfig) -> Result<RouteRecord, SearchError> {
    run(map, s, t, Geometry::Sphere(cfg.sphere))
}

pub(crate) fn run(map: &GridMap, s: GridPoint, t: GridPoint, geo: Geometry) -> Result<RouteRecord, SearchError> {
    check_endpoint(map, s)?;
    check_endpoint(map, t)?;
    let clock = Instant::now();
    let mut e = Engine::new(map, geo, t);
    let goal = if s == t {
        None
    } else {
        Some(e.run(s).ok_or(SearchError::NoPath)?)
    };
    let (pts, kinds) = match goal {
        Some(g) => e.path(g),
        None => (vec![s], Vec::new()),
    };
    let length = match goal {
        Some(g) => e.cost(e.nodes[g as usize].src, t),
        None => 0.0,
    };
    let elapsed_ns = clock.elapsed().as_nanos() as u64;
    let mut rec = RouteRecord::from_points(map, pts, kinds);
    rec.length = length;
    rec.expanded_nodes = e.expanded;
    rec.generated_nodes = e.generated;
    rec.elapsed_ns = elapsed_ns;
    if geo == Geometry::Flat {
        for k in rec.segment_kinds.iter_mut() {
            *k = crate::route::SegmentKind::Straight;
        }
    }
    rec.tiles_crossed = tiles_crossed(&rec, map);
    Ok(rec)
}

/// Step-by-step access to successor generation, for inspecting individual
/// expansions.
pub struct Searcher<'a> {
    engine: Engine<'a>,
}

impl<'a> Searcher<'a> {
    pub fn new(map: &'a GridMap, t: GridPoint, cfg: &SearchConfig) -> Self {
        Searcher { engine: Engine::new(map, Geometry::Sphere(cfg.sphere), t) }
    }

    pub fn flat(map: &'a GridMap, t: GridPoint) -> Self {
        Searcher { engine: Engine::new(map, Geometry::Flat, t) }
    }

    /// Register a root with cost `g`.
    pub fn add_root(&mut self, pos: GridPoint, g: f64) -> Option<u32> {
        self.engine.new_root(pos, g, None, crate::engine::Via::Start)
    }

    /// A node over `[lo, hi]` on `row` seen from root `root`; flat when the
    /// root lies on `row`, otherwise a cone travelling away from the root.
    pub fn node(&self, root: u32, row: i64, lo: f64, hi: f64) -> SNode {
        let rp = self.engine.roots[root as usize].pos;
        let dir = (row as f64 - rp.row).signum() as i8;
        self.wrap(Node { row, lo, hi, lo_closed: true, hi_closed: true, src: Src::Point(root), dir, terminal: false })
    }

    fn wrap(&self, n: Node) -> SNode {
        let (root, g) = {
            let r = &self.engine.roots[n.src.root() as usize];
            (r.pos, r.g)
        };
        let (kind, edge_x) = match n.src {
            Src::Hug { edge_x, .. } => (NodeKind::Adjoint, Some(edge_x)),
            Src::Point(_) if n.dir == 0 => (NodeKind::Flat, None),
            Src::Point(_) => (NodeKind::Cone, None),
        };
        let interval = Interval { row: n.row, lo: n.lo, hi: n.hi, lo_closed: n.lo_closed, hi_closed: n.hi_closed };
        SNode { interval, root, kind, g, edge_x, inner: n }
    }

    /// Successors of the start point.
    pub fn start_successors(&mut self, s: GridPoint) -> Vec<SNode> {
        let Some(r) = self.add_root(s, 0.0) else { return Vec::new() };
        let mut out = Vec::new();
        self.engine.start_successors(r, &mut out);
        out.into_iter().map(|n| self.wrap(n)).collect()
    }

    /// Successors of `n`, before intermediate pruning.
    pub fn successors(&mut self, n: &SNode) -> Vec<SNode> {
        let mut out = Vec::new();
        self.engine.expand(&n.inner, &mut out);
        out.into_iter().map(|n| self.wrap(n)).collect()
    }

    /// Whether `n` can only be passed through, never turned at.
    pub fn is_intermediate(&self, n: &SNode) -> bool {
        self.engine.is_intermediate(&n.inner)
    }

    /// Cost of reaching `p` through the node's source.
    pub fn cost_through(&self, n: &SNode, p: GridPoint) -> f64 {
        self.engine.cost(n.inner.src, p)
    }
}

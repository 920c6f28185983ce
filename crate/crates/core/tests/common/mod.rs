//! Small hand-built maps shared by the integration tests.
#![allow(dead_code)]

use spherical_anya::grid::Mapping;
use spherical_anya::{GridMap, GridPoint};

pub const SIZE: usize = 32;

pub struct Fixture {
    pub name: String,
    pub map: GridMap,
    /// The labelled root point of the drawing.
    pub root: GridPoint,
    pub pairs: Vec<(GridPoint, GridPoint)>,
}

/// Blocked rectangles `(x0, row0, x1, row1)` of a drawing, in its own
/// coordinates.
struct Drawing {
    name: &'static str,
    w: i64,
    h: i64,
    rects: &'static [(i64, i64, i64, i64)],
    root: (i64, i64),
}

// Column offset that puts every drawing in the southern half of a 32-wide
// global map; the northern copies are mirror images.
const OX: i64 = 6;
const OY: i64 = 10;

const DRAWINGS: &[Drawing] = &[
    // Two equal-latitude points on the equatorward face of an obstacle.
    Drawing { name: "ledge", w: 4, h: 3, rects: &[(0, 1, 2, 2)], root: (2, 1) },
    // A chain of hugs along one face.
    Drawing { name: "hug_chain", w: 5, h: 6, rects: &[(0, 2, 2, 4), (1, 4, 2, 5), (4, 0, 5, 3)], root: (2, 0) },
    // Flat node successors.
    Drawing {
        name: "flat_fan",
        w: 8,
        h: 3,
        rects: &[(0, 0, 2, 2), (4, 0, 5, 2), (6, 2, 7, 3), (7, 1, 8, 2)],
        root: (0, 2),
    },
    // Cone node successors.
    Drawing { name: "cone_fan", w: 5, h: 3, rects: &[(0, 0, 1, 3), (3, 0, 4, 2)], root: (1, 0) },
];

fn place(d: &Drawing, ox: i64) -> GridMap {
    let mut blocked = vec![false; SIZE * SIZE];
    for &(x0, r0, x1, r1) in d.rects {
        for band in r0..r1 {
            for cx in x0..x1 {
                blocked[((band + OY) as usize) * SIZE + (cx + ox) as usize] = true;
            }
        }
    }
    GridMap::new(SIZE, SIZE, blocked).with_mapping(Mapping::global(SIZE, SIZE))
}

fn build(d: &Drawing, north: bool) -> Fixture {
    build_at(d, OX, north, if north { "north" } else { "south" })
}

fn build_at(d: &Drawing, ox: i64, mirror: bool, tag: &str) -> Fixture {
    let placed = place(d, ox);
    let (map, flip) = if mirror { (placed.mirrored(), true) } else { (placed, false) };
    let pt = |x: i64, r: i64| {
        let x = x + ox;
        GridPoint::new((r + OY) as f64, if flip { (SIZE as i64 - x) as f64 } else { x as f64 })
    };
    let root = pt(d.root.0, d.root.1);
    let mut pairs = Vec::new();
    for r in 0..=d.h {
        for x in 0..=d.w {
            let p = pt(x, r);
            if p != root && map.vertex_traversable(p.row as i64, p.x as i64) {
                pairs.push((root, p));
            }
        }
    }
    let name = format!("{}-{}", d.name, tag);
    Fixture { name, map, root, pairs }
}

/// Every drawing in both hemispheres.
pub fn drawings() -> Vec<Fixture> {
    DRAWINGS.iter().flat_map(|d| [build(d, false), build(d, true)]).collect()
}

pub fn drawing(name: &str, north: bool) -> Fixture {
    let d = DRAWINGS.iter().find(|d| d.name == name).expect("unknown drawing");
    build(d, north)
}

/// The drawing shifted (not mirrored) so that it starts at column `ox`.
pub fn drawing_at(name: &str, ox: i64) -> Fixture {
    let d = DRAWINGS.iter().find(|d| d.name == name).expect("unknown drawing");
    build_at(d, ox, false, &format!("at{ox}"))
}

/// A south-facing edge at 45°N: the obstacle fills `x ≥ 24` over bands
/// 4..12. Returns the map, the corner on the edge and a point equatorward of
/// the far end whose tangent meets the edge between them.
pub fn hug_fixture() -> (GridMap, GridPoint, GridPoint) {
    let mut blocked = vec![false; SIZE * SIZE];
    for band in 4..12 {
        for cx in 24..SIZE {
            blocked[band * SIZE + cx] = true;
        }
    }
    let map = GridMap::new(SIZE, SIZE, blocked).with_mapping(Mapping::global(SIZE, SIZE));
    (map, GridPoint::new(4.0, 24.0), GridPoint::new(12.0, 20.0))
}

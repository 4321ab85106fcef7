use serde::{Deserialize, Serialize};

use super::{cross, Coord, Point};
use crate::error::{Error, Result};

/// Position on the terrain: edge index and parameter `t` in `[0, 1]`.
///
/// Vertices are canonically `(k, 0)`, except the last vertex, which is `(n - 2, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TerrainPos {
    pub edge: usize,
    pub t: Coord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Terrain {
    vertices: Vec<Point>,
}

impl Terrain {
    /// Validates strict x-monotonicity and merges collinear runs.
    pub fn new(vertices: Vec<Point>) -> Result<Terrain> {
        if vertices.len() < 2 {
            return Err(Error::InvalidTerrain(format!(
                "need at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        for (i, w) in vertices.windows(2).enumerate() {
            if w[0].x >= w[1].x {
                return Err(Error::InvalidTerrain(format!(
                    "x not strictly increasing at vertex {} ({} then {})",
                    i + 1,
                    w[0],
                    w[1]
                )));
            }
        }
        let mut out: Vec<Point> = Vec::with_capacity(vertices.len());
        for v in vertices {
            while out.len() >= 2 && cross(&out[out.len() - 2], &out[out.len() - 1], &v).is_zero() {
                out.pop();
            }
            out.push(v);
        }
        Ok(Terrain { vertices: out })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, k: usize) -> &Point {
        &self.vertices[k]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn edge(&self, j: usize) -> (&Point, &Point) {
        (&self.vertices[j], &self.vertices[j + 1])
    }

    pub fn x_min(&self) -> &Coord {
        &self.vertices[0].x
    }

    pub fn x_max(&self) -> &Coord {
        &self.vertices[self.vertices.len() - 1].x
    }

    pub fn max_y(&self) -> &Coord {
        self.vertices.iter().map(|v| &v.y).max().expect("non-empty")
    }

    pub fn point_at(&self, j: usize, t: &Coord) -> Point {
        if t.is_zero() {
            return self.vertices[j].clone();
        }
        if *t == Coord::one() {
            return self.vertices[j + 1].clone();
        }
        self.vertices[j].lerp(&self.vertices[j + 1], t)
    }

    pub fn pos_point(&self, pos: &TerrainPos) -> Point {
        self.point_at(pos.edge, &pos.t)
    }

    pub fn vertex_pos(&self, k: usize) -> TerrainPos {
        if k + 1 == self.vertices.len() {
            TerrainPos { edge: k - 1, t: Coord::one() }
        } else {
            TerrainPos { edge: k, t: Coord::zero() }
        }
    }

    /// Index of the first vertex with `x >= x0`.
    pub fn first_at_or_right(&self, x0: &Coord) -> usize {
        self.vertices.partition_point(|v| &v.x < x0)
    }

    /// Index of the first vertex with `x > x0`.
    pub fn first_right_of(&self, x0: &Coord) -> usize {
        self.vertices.partition_point(|v| &v.x <= x0)
    }

    /// Edge containing abscissa `x0` and the parameter there; `None` outside the span.
    pub fn locate_x(&self, x0: &Coord) -> Option<TerrainPos> {
        if x0 < self.x_min() || x0 > self.x_max() {
            return None;
        }
        let k = self.first_at_or_right(x0);
        if &self.vertices[k].x == x0 {
            return Some(self.vertex_pos(k));
        }
        let j = k - 1;
        let (a, b) = self.edge(j);
        let t = &(x0 - &a.x) / &(&b.x - &a.x);
        Some(TerrainPos { edge: j, t })
    }

    pub fn height_at(&self, x0: &Coord) -> Option<Coord> {
        self.locate_x(x0).map(|pos| self.pos_point(&pos).y)
    }

    /// Locates `p` on the terrain, failing if it is not exactly on it.
    pub fn locate(&self, p: &Point) -> Result<TerrainPos> {
        match self.locate_x(&p.x) {
            Some(pos) if self.pos_point(&pos).y == p.y => Ok(pos),
            _ => Err(Error::NotOnTerrain(p.to_string())),
        }
    }

    /// Valleys and the two chain endpoints are convex; peaks are reflex.
    pub fn is_convex(&self, k: usize) -> bool {
        if k == 0 || k + 1 == self.vertices.len() {
            return true;
        }
        cross(&self.vertices[k - 1], &self.vertices[k], &self.vertices[k + 1]).is_positive()
    }

    pub fn is_reflex(&self, k: usize) -> bool {
        !self.is_convex(k)
    }
}

/// Unseen prefix `[v_j, q)` of edge `edge`, or the closed edge when `whole`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubEdge {
    pub edge: usize,
    pub t_end: Coord,
    pub whole: bool,
}

impl SubEdge {
    pub fn whole(edge: usize) -> SubEdge {
        SubEdge { edge, t_end: Coord::one(), whole: true }
    }

    pub fn prefix(edge: usize, t_end: Coord) -> Result<SubEdge> {
        if !t_end.is_positive() || t_end > Coord::one() {
            return Err(Error::EmptySubEdge(edge));
        }
        Ok(SubEdge { edge, t_end, whole: false })
    }

    pub fn contains_t(&self, t: &Coord) -> bool {
        !t.is_negative() && (t < &self.t_end || (self.whole && t == &self.t_end))
    }
}

/// Horizontal guard segment `y = y` over the terrain's x-span.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AltitudeLine {
    pub y: Coord,
    pub x_min: Coord,
    pub x_max: Coord,
}

impl AltitudeLine {
    pub fn point(&self, x: &Coord) -> Point {
        Point { x: x.clone(), y: self.y.clone() }
    }

    pub fn clamp(&self, x: Coord) -> Coord {
        x.max(self.x_min.clone()).min(self.x_max.clone())
    }

    pub fn contains_x(&self, x: &Coord) -> bool {
        x >= &self.x_min && x <= &self.x_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AltitudeMode {
    /// Altitude strictly above every vertex.
    Strict,
    /// Altitude may touch the terrain at its first and last vertex only.
    Touching,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub terrain: Terrain,
    pub altitude: AltitudeLine,
    pub mode: AltitudeMode,
}

impl Instance {
    pub fn new(terrain: Terrain, y: Coord) -> Result<Instance> {
        Instance::with_mode(terrain, y, AltitudeMode::Strict)
    }

    pub fn touching(terrain: Terrain, y: Coord) -> Result<Instance> {
        Instance::with_mode(terrain, y, AltitudeMode::Touching)
    }

    pub fn with_mode(terrain: Terrain, y: Coord, mode: AltitudeMode) -> Result<Instance> {
        let n = terrain.len();
        for (k, v) in terrain.vertices().iter().enumerate() {
            let ok = match mode {
                AltitudeMode::Strict => v.y < y,
                AltitudeMode::Touching => v.y < y || (v.y == y && (k == 0 || k + 1 == n)),
            };
            if !ok {
                return Err(Error::InvalidAltitude(format!(
                    "altitude {} not above vertex {} {}",
                    y,
                    k + 1,
                    v
                )));
            }
        }
        let altitude = AltitudeLine {
            y,
            x_min: terrain.x_min().clone(),
            x_max: terrain.x_max().clone(),
        };
        Ok(Instance { terrain, altitude, mode })
    }

    /// Convenience constructor from integer pairs.
    pub fn from_ints(vertices: &[(i64, i64)], y: i64) -> Result<Instance> {
        let vs = vertices.iter().map(|&(x, y)| Point::new(x, y)).collect();
        Instance::new(Terrain::new(vs)?, Coord::from_int(y))
    }
}

pub mod fixtures {
    use super::Instance;

    pub fn t0() -> Instance {
        Instance::from_ints(&[(0, 0), (8, 0)], 1).unwrap()
    }

    pub fn tv() -> Instance {
        Instance::from_ints(&[(0, 2), (2, 0), (4, 2)], 3).unwrap()
    }

    pub fn t1() -> Instance {
        Instance::from_ints(&[(0, 0), (2, 4), (4, 0), (6, 4), (8, 0)], 5).unwrap()
    }
}

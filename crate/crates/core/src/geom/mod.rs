mod coord;
mod point;
mod terrain;

pub use coord::{is_normalized, Coord};
pub use point::{cross, orientation, ray_hit_altitude, ray_hit_edge, Orientation, Point, Ray};
pub use terrain::{fixtures, AltitudeLine, AltitudeMode, Instance, SubEdge, Terrain, TerrainPos};

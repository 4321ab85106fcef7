use std::fmt;

use serde::{Deserialize, Serialize};

use super::Coord;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub fn new(x: impl Into<Coord>, y: impl Into<Coord>) -> Self {
        Point { x: x.into(), y: y.into() }
    }

    /// `self + t * (other - self)`
    pub fn lerp(&self, other: &Point, t: &Coord) -> Point {
        Point {
            x: &self.x + &(t * &(&other.x - &self.x)),
            y: &self.y + &(t * &(&other.y - &self.y)),
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `r` lies strictly left of the directed line `p -> q`.
    Left,
    Right,
    Collinear,
}

/// Cross product of `(q - p)` and `(r - p)`.
pub fn cross(p: &Point, q: &Point, r: &Point) -> Coord {
    let a = &(&q.x - &p.x) * &(&r.y - &p.y);
    let b = &(&q.y - &p.y) * &(&r.x - &p.x);
    &a - &b
}

pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    match cross(p, q, r).signum() {
        1 => Orientation::Left,
        -1 => Orientation::Right,
        _ => Orientation::Collinear,
    }
}

/// A ray starting at `origin`, passing through `through` and continuing beyond it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    origin: Point,
    through: Point,
}

impl Ray {
    pub fn new(origin: Point, through: Point) -> Result<Ray> {
        if origin == through {
            return Err(Error::DegenerateRay);
        }
        Ok(Ray { origin, through })
    }

    pub fn origin(&self) -> &Point {
        &self.origin
    }

    pub fn through(&self) -> &Point {
        &self.through
    }

    /// Point at ray parameter `s` (`s = 0` is the origin, `s = 1` the through point).
    pub fn at(&self, s: &Coord) -> Point {
        self.origin.lerp(&self.through, s)
    }
}

/// Where the ray, beyond its through point, crosses the horizontal line `y = altitude`.
///
/// No clamping to any x-range happens here.
pub fn ray_hit_altitude(ray: &Ray, altitude: &Coord) -> Option<Point> {
    let (o, t) = (&ray.origin, &ray.through);
    let dy = &t.y - &o.y;
    if !dy.is_positive() || &t.y > altitude {
        return None;
    }
    let dx = &t.x - &o.x;
    let x = &o.x + &(&(&(altitude - &o.y) * &dx) / &dy);
    Some(Point { x, y: altitude.clone() })
}

/// Intersection of the part of the ray strictly beyond `through` with the closed
/// segment `a` to `b`.
///
/// A collinear overlap yields the overlap endpoint nearest to `through`.
pub fn ray_hit_edge(ray: &Ray, a: &Point, b: &Point) -> Option<Point> {
    let o = &ray.origin;
    let d = Point { x: &ray.through.x - &o.x, y: &ray.through.y - &o.y };
    let e = Point { x: &b.x - &a.x, y: &b.y - &a.y };
    let zero = Point::new(0, 0);
    let denom = cross(&zero, &d, &e);
    let ao = Point { x: &a.x - &o.x, y: &a.y - &o.y };
    let one = Coord::one();
    if denom.is_zero() {
        if !cross(&zero, &d, &ao).is_zero() {
            return None;
        }
        // Collinear: project both endpoints on the ray parameter.
        let dd = &(&d.x * &d.x) + &(&d.y * &d.y);
        let param = |p: &Point| -> Coord {
            let v = &(&(&p.x - &o.x) * &d.x) + &(&(&p.y - &o.y) * &d.y);
            &v / &dd
        };
        let (sa, sb) = (param(a), param(b));
        let (lo, hi) = if sa <= sb { (sa, sb) } else { (sb, sa) };
        if hi <= one {
            return None;
        }
        let s = if lo > one { lo } else { one };
        return Some(ray.at(&s));
    }
    // o + s d = a + u e
    let s = &cross(&zero, &ao, &e) / &denom;
    let u = &cross(&zero, &ao, &d) / &denom;
    if s <= one || u.is_negative() || u > one {
        return None;
    }
    Some(a.lerp(b, &u))
}

//! Small vector and box primitives shared by the scenario and channel code.

use std::ops::{Add, Mul, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn with_z(self, z: f64) -> Vec3 {
        Vec3::new(self.x, self.y, z)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance(self, other: Vec3) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn xy(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    fn axis(self, i: usize) -> f64 {
        match i {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }
}

/// Axis-aligned rectangle in the ground plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Vec2,
    pub max: Vec2,
}

impl Rect {
    pub fn new(a: Vec2, b: Vec2) -> Self {
        Self {
            min: Vec2::new(a.x.min(b.x), a.y.min(b.y)),
            max: Vec2::new(a.x.max(b.x), a.y.max(b.y)),
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// True when the interiors overlap (shared edges do not count).
    pub fn overlaps(&self, other: &Rect) -> bool {
        self.min.x < other.max.x
            && other.min.x < self.max.x
            && self.min.y < other.max.y
            && other.min.y < self.max.y
    }

    pub fn extrude(&self, height: f64) -> Aabb {
        Aabb {
            min: self.min.with_z(0.0),
            max: self.max.with_z(height),
        }
    }
}

/// Closed axis-aligned box standing on the ground.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    /// Slab test for the closed segment `a`–`b` against the closed box.
    pub fn intersects_segment(&self, a: Vec3, b: Vec3) -> bool {
        let mut t0 = 0.0_f64;
        let mut t1 = 1.0_f64;
        for i in 0..3 {
            let (lo, hi) = (self.min.axis(i), self.max.axis(i));
            let start = a.axis(i);
            let delta = b.axis(i) - start;
            if delta.abs() < 1e-12 {
                if start < lo || start > hi {
                    return false;
                }
                continue;
            }
            let mut near = (lo - start) / delta;
            let mut far = (hi - start) / delta;
            if near > far {
                std::mem::swap(&mut near, &mut far);
            }
            t0 = t0.max(near);
            t1 = t1.min(far);
            if t0 > t1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_box_cases() {
        let b = Rect::new(Vec2::new(-1.0, -1.0), Vec2::new(1.0, 1.0)).extrude(2.0);
        assert!(b.intersects_segment(Vec3::new(-5.0, 0.0, 1.0), Vec3::new(5.0, 0.0, 1.0)));
        // passes over the roof
        assert!(!b.intersects_segment(Vec3::new(-5.0, 0.0, 2.5), Vec3::new(5.0, 0.0, 2.5)));
        // stops short
        assert!(!b.intersects_segment(Vec3::new(-5.0, 0.0, 1.0), Vec3::new(-1.5, 0.0, 1.0)));
        // grazing the roof counts as contact
        assert!(b.intersects_segment(Vec3::new(-5.0, 0.0, 2.0), Vec3::new(5.0, 0.0, 2.0)));
        // diagonal that clips a corner column
        assert!(b.intersects_segment(Vec3::new(-2.0, 0.5, 0.5), Vec3::new(0.5, -2.0, 0.5)));
        assert!(!b.intersects_segment(Vec3::new(-3.0, 0.0, 0.5), Vec3::new(0.0, -3.0, 0.5)));
    }
}

//! Rate-plane points and their vector-frame images.
//!
//! The rate plane uses `(R1, R2)`; the vector frame used by the
//! mutual-information vector uses `(R1, R1 + R2)`. Second-order pairs
//! `(L1, L2)` follow the same convention.

use serde::{Deserialize, Serialize};

/// Coordinate system of a polyline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// `(R1, R2)` or `(L1, L2)`.
    RatePlane,
    /// `(R1, R1 + R2)` or `(L1, L1 + L2)`.
    Vector,
}

impl Frame {
    pub fn as_str(self) -> &'static str {
        match self {
            Frame::RatePlane => "rate_plane",
            Frame::Vector => "vector",
        }
    }
}

#[inline]
pub fn to_vector(p: [f64; 2]) -> [f64; 2] {
    [p[0], p[0] + p[1]]
}

#[inline]
pub fn from_vector(v: [f64; 2]) -> [f64; 2] {
    [v[0], v[1] - v[0]]
}

/// First-order rate pair in nats per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
}

impl RatePoint {
    pub fn new(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    pub fn from_vector(v: [f64; 2]) -> Self {
        let [r1, r2] = from_vector(v);
        Self { r1, r2 }
    }

    pub fn vector(&self) -> [f64; 2] {
        to_vector([self.r1, self.r2])
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.r1, self.r2]
    }
}

/// Second-order pair in nats per square-root channel use. Entries may be negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderPair {
    pub l1: f64,
    pub l2: f64,
}

impl SecondOrderPair {
    pub fn new(l1: f64, l2: f64) -> Self {
        Self { l1, l2 }
    }

    pub fn from_vector(v: [f64; 2]) -> Self {
        let [l1, l2] = from_vector(v);
        Self { l1, l2 }
    }

    pub fn vector(&self) -> [f64; 2] {
        to_vector([self.l1, self.l2])
    }

    pub fn norm(&self) -> f64 {
        self.l1.hypot(self.l2)
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.l1, self.l2]
    }
}

/// A polyline tagged with its coordinate frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionBoundary {
    pub frame: Frame,
    pub points: Vec<[f64; 2]>,
}

impl RegionBoundary {
    pub fn new(frame: Frame, points: Vec<[f64; 2]>) -> Self {
        Self { frame, points }
    }

    /// The same polyline expressed in `frame`.
    pub fn to_frame(&self, frame: Frame) -> RegionBoundary {
        let points = match (self.frame, frame) {
            (a, b) if a == b => self.points.clone(),
            (Frame::RatePlane, Frame::Vector) => self.points.iter().map(|p| to_vector(*p)).collect(),
            (Frame::Vector, Frame::RatePlane) => self.points.iter().map(|p| from_vector(*p)).collect(),
            _ => unreachable!(),
        };
        RegionBoundary { frame, points }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_round_trip() {
        let r = RatePoint::new(0.25, 0.5);
        assert_eq!(r.vector(), [0.25, 0.75]);
        assert_eq!(RatePoint::from_vector(r.vector()), r);
        let b = RegionBoundary::new(Frame::RatePlane, vec![[0.1, 0.2], [-0.5, 3.0]]);
        let back = b.to_frame(Frame::Vector).to_frame(Frame::RatePlane);
        for (p, q) in b.points.iter().zip(&back.points) {
            assert!((p[0] - q[0]).abs() < 1e-15 && (p[1] - q[1]).abs() < 1e-15);
        }
        assert_eq!(SecondOrderPair::new(3.0, 4.0).norm(), 5.0);
    }
}

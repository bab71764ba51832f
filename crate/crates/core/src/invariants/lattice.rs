//! Curve classes `aH - b_1 E_1 - ... - b_n E_n` on the plane blown up at `n`
//! generic points.
//!
//! Used when a toric del Pezzo polygon has no corner that models a generic
//! blow-up (the hexagon: every corner touches a (-1)-edge). The class is
//! blown up in the lattice instead and brought back to a polygon by
//! contracting orthogonal (-1)-curves and quadratic Cremona moves.

use std::fmt;

use crate::polygon::{HPolygon, Shape};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlowupClass {
    pub a: i64,
    pub b: Vec<i64>,
}

/// Result of reducing a class to normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normal {
    /// No irreducible curves in the class.
    Zero,
    /// A (-1)-curve: exactly one curve, through no points.
    ExceptionalCurve,
    /// At most three points remain; the class is a lattice polygon.
    Toric(Shape),
    /// Four or more points remain after reduction.
    Generic(BlowupClass),
}

impl BlowupClass {
    pub fn new(a: i64, b: Vec<i64>) -> Self {
        Self { a, b }
    }

    pub fn c1_dot(&self) -> i64 {
        3 * self.a - self.b.iter().sum::<i64>()
    }

    pub fn self_intersection(&self) -> i64 {
        self.a * self.a - self.b.iter().map(|x| x * x).sum::<i64>()
    }

    /// Number of points fixed by a genus-0 curve in the class.
    pub fn point_count(&self) -> i64 {
        self.c1_dot() - 1
    }

    /// The class `d - mE` on the blow-up at one more generic point.
    pub fn blow_up(&self, m: i64) -> Self {
        let mut b = self.b.clone();
        b.push(m);
        Self { a: self.a, b }
    }

    /// Reads the class off a smooth polygon with at most six edges and no
    /// edge of self-intersection below -1. Other polygons return `None`.
    pub fn from_polygon(poly: &HPolygon) -> Option<Self> {
        if !poly.is_smooth() {
            return None;
        }
        let edges = poly.edges();
        let n = edges.len();
        let len: Vec<i64> = edges.iter().map(|e| e.length).collect();
        let si: Vec<i64> = (0..n)
            .map(|i| {
                let (num, den) = poly.edge_self_intersection(i);
                if den == 1 {
                    num
                } else {
                    i64::MIN
                }
            })
            .collect();
        if si.iter().any(|&x| x < -1) {
            return None;
        }
        let at = |i: usize| len[i % n];
        match n {
            3 => Some(Self::new(len[0], vec![])),
            4 => {
                if let Some(i) = si.iter().position(|&x| x == -1) {
                    Some(Self::new(at(i + 2), vec![len[i]]))
                } else {
                    Some(Self::new(len[0] + len[1], vec![len[0], len[1]]))
                }
            }
            5 => {
                let i = (0..n).find(|&i| si[i] == -1 && si[(i + 1) % n] == -1 && si[(i + n - 1) % n] == -1)?;
                let (p, q) = (at(i + n - 1), at(i + 1));
                Some(Self::new(len[i] + p + q, vec![p, q]))
            }
            6 => Some(Self::new(len[0] + len[1] + len[2], vec![len[0], len[2], len[4]])),
            _ => None,
        }
    }

    /// Reduces by dropping unused points, sorting and Cremona moves, then
    /// decides vanishing or builds the polygon.
    pub fn normalize(&self) -> Normal {
        let mut c = self.clone();
        loop {
            if c.c1_dot() == 1 && c.self_intersection() == -1 {
                return Normal::ExceptionalCurve;
            }
            if c.b.iter().any(|&x| x < 0) {
                return Normal::Zero;
            }
            c.b.retain(|&x| x != 0);
            c.b.sort_unstable_by(|x, y| y.cmp(x));
            if c.b.len() >= 3 && c.a < c.b[0] + c.b[1] + c.b[2] {
                let (a, b0, b1, b2) = (c.a, c.b[0], c.b[1], c.b[2]);
                c.a = 2 * a - b0 - b1 - b2;
                c.b[0] = a - b1 - b2;
                c.b[1] = a - b0 - b2;
                c.b[2] = a - b0 - b1;
                continue;
            }
            break;
        }
        if c.a <= 0 || c.b.first().is_some_and(|&b0| c.a < b0) || (c.b.len() >= 2 && c.a < c.b[0] + c.b[1]) {
            return Normal::Zero;
        }
        if c.b.len() > 3 {
            return Normal::Generic(c);
        }
        Normal::Toric(c.polygon())
    }

    /// The triangle of degree `a` with corners cut at depth `b_1, b_2, b_3`.
    /// Assumes a normalized class with at most three points.
    fn polygon(&self) -> Shape {
        let a = self.a;
        let b = |i: usize| self.b.get(i).copied().unwrap_or(0);
        let (b1, b2, b3) = (b(0), b(1), b(2));
        let points = vec![(b1, 0), (a - b2, 0), (a - b2, b2), (b3, a - b3), (0, a - b3), (0, b1)];
        HPolygon::shape_from_points(points)
            .expect("cut triangle is convex and h-transverse")
            .canonical()
    }
}

impl fmt::Display for BlowupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}H", self.a)?;
        for (i, &m) in self.b.iter().enumerate() {
            match m {
                0 => {}
                1 => write!(f, "-E{}", i + 1)?,
                -1 => write!(f, "+E{}", i + 1)?,
                m if m < 0 => write!(f, "+{}E{}", -m, i + 1)?,
                m => write!(f, "-{m}E{}", i + 1)?,
            }
        }
        Ok(())
    }
}

//! Convex h-transverse lattice polygons: constructors, floor profile, lattice
//! point counts and depth-2 corner cuts.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Point = (i64, i64);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolygonError {
    #[error("{what} must be at least {min}, got {got}")]
    OutOfRange { what: &'static str, min: i64, got: i64 },
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("point {0:?} is not on the boundary of the convex hull")]
    NotConvex(Point),
    #[error("edge {from:?} -> {to:?} is not h-transverse")]
    NotHTransverse { from: Point, to: Point },
    #[error("{0:?} is not a vertex of the polygon")]
    NotAVertex(Point),
    #[error("corner {corner:?} has adjacent edges of lattice length {prev} and {next}; a depth-2 cut needs both >= 2")]
    CutDoesNotFit { corner: Point, prev: i64, next: i64 },
    #[error("cannot parse polygon spec {0:?} (expected rect:a,b | sigma2:a,b | p2:d)")]
    BadSpec(String),
}

/// A non-degenerate convex lattice polygon whose non-horizontal edges have
/// primitive direction `(a, +-1)`.
///
/// Vertices are stored counterclockwise, without collinear points, starting
/// at the lowest (then leftmost) vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "VertexList", into = "VertexList")]
pub struct HPolygon {
    vertices: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct VertexList {
    vertices: Vec<Point>,
}

impl TryFrom<VertexList> for HPolygon {
    type Error = PolygonError;

    fn try_from(v: VertexList) -> Result<Self, Self::Error> {
        HPolygon::new(v.vertices)
    }
}

impl From<HPolygon> for VertexList {
    fn from(p: HPolygon) -> Self {
        VertexList { vertices: p.vertices }
    }
}

/// A polygon or the zero-area leftover of a corner cut. Every invariant of
/// `Degenerate` is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Polygon(HPolygon),
    Degenerate,
}

impl Shape {
    pub fn polygon(&self) -> Option<&HPolygon> {
        match self {
            Shape::Polygon(p) => Some(p),
            Shape::Degenerate => None,
        }
    }

    pub fn canonical(&self) -> Shape {
        match self {
            Shape::Polygon(p) => Shape::Polygon(p.canonical()),
            Shape::Degenerate => Shape::Degenerate,
        }
    }
}

impl From<HPolygon> for Shape {
    fn from(p: HPolygon) -> Self {
        Shape::Polygon(p)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Polygon(p) => p.fmt(f),
            Shape::Degenerate => f.write_str("degenerate"),
        }
    }
}

/// One edge, oriented counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: Point,
    pub to: Point,
    /// Primitive direction.
    pub dir: Point,
    /// Lattice length (number of primitive steps).
    pub length: i64,
}

/// Horizontal slicing of a polygon at integer heights.
///
/// `widths[y]` is the lattice width at height `y` above the bottom edge;
/// `left_shifts[k]`/`right_shifts[k]` are the x-advances of the left and
/// right boundary across strip `k` (between heights `k` and `k + 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloorProfile {
    pub height: usize,
    pub widths: Vec<i64>,
    pub left_shifts: Vec<i64>,
    pub right_shifts: Vec<i64>,
}

impl FloorProfile {
    pub fn bottom_ends(&self) -> i64 {
        self.widths[0]
    }

    pub fn top_ends(&self) -> i64 {
        self.widths[self.height]
    }

    /// `div(k) = w(k-1) - w(k)` for the strips in bottom-to-top order.
    pub fn divergences(&self) -> Vec<i64> {
        self.widths.windows(2).map(|w| w[0] - w[1]).collect()
    }
}

fn cross(a: Point, b: Point) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

fn sub(a: Point, b: Point) -> Point {
    (a.0 - b.0, a.1 - b.1)
}

fn primitive(v: Point) -> (Point, i64) {
    let g = v.0.gcd(&v.1);
    ((v.0 / g, v.1 / g), g)
}

/// Convex hull (counterclockwise, no collinear points) via monotone chain.
fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(sub(lower[lower.len() - 1], lower[lower.len() - 2]), sub(p, lower[lower.len() - 2])) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(sub(upper[upper.len() - 1], upper[upper.len() - 2]), sub(p, upper[upper.len() - 2])) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn on_segment(p: Point, a: Point, b: Point) -> bool {
    cross(sub(b, a), sub(p, a)) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

impl HPolygon {
    /// Builds a polygon from its vertices in any order. Points lying on the
    /// boundary are accepted and dropped; interior points are rejected.
    pub fn new(points: Vec<Point>) -> Result<Self, PolygonError> {
        match Self::shape_from_points(points)? {
            Shape::Polygon(p) => Ok(p),
            Shape::Degenerate => Err(PolygonError::ZeroArea),
        }
    }

    /// Like [`HPolygon::new`] but zero-area input becomes `Shape::Degenerate`.
    pub fn shape_from_points(points: Vec<Point>) -> Result<Shape, PolygonError> {
        let hull = convex_hull(&points);
        if hull.len() < 3 {
            return Ok(Shape::Degenerate);
        }
        for &p in &points {
            let n = hull.len();
            if !(0..n).any(|i| on_segment(p, hull[i], hull[(i + 1) % n])) {
                return Err(PolygonError::NotConvex(p));
            }
        }
        let start = (0..hull.len())
            .min_by_key(|&i| (hull[i].1, hull[i].0))
            .expect("nonempty hull");
        let mut vertices = hull;
        vertices.rotate_left(start);
        let poly = HPolygon { vertices };
        for e in poly.edges() {
            if e.dir.1.abs() > 1 {
                return Err(PolygonError::NotHTransverse { from: e.from, to: e.to });
            }
        }
        Ok(Shape::Polygon(poly))
    }

    /// The rectangle with corners `(0,0)`, `(a,0)`, `(a,b)`, `(0,b)`.
    pub fn rectangle(a: i64, b: i64) -> Result<Self, PolygonError> {
        if a < 1 {
            return Err(PolygonError::OutOfRange { what: "rectangle width", min: 1, got: a });
        }
        if b < 1 {
            return Err(PolygonError::OutOfRange { what: "rectangle height", min: 1, got: b });
        }
        Self::new(vec![(0, 0), (a, 0), (a, b), (0, b)])
    }

    /// The trapezoid `(0,0)`, `(2a+b,0)`, `(b,a)`, `(0,a)` of the second
    /// Hirzebruch surface.
    pub fn sigma2(a: i64, b: i64) -> Result<Self, PolygonError> {
        if a < 1 {
            return Err(PolygonError::OutOfRange { what: "sigma2 height a", min: 1, got: a });
        }
        if b < 0 {
            return Err(PolygonError::OutOfRange { what: "sigma2 top length b", min: 0, got: b });
        }
        Self::new(vec![(0, 0), (2 * a + b, 0), (b, a), (0, a)])
    }

    /// The degree-`d` triangle of the projective plane.
    pub fn p2(d: i64) -> Result<Self, PolygonError> {
        if d < 1 {
            return Err(PolygonError::OutOfRange { what: "plane curve degree", min: 1, got: d });
        }
        Self::new(vec![(0, 0), (d, 0), (0, d)])
    }

    /// Parses `rect:a,b`, `sigma2:a,b` or `p2:d`.
    pub fn from_spec(spec: &str) -> Result<Self, PolygonError> {
        let bad = || PolygonError::BadSpec(spec.to_string());
        let (kind, args) = spec.split_once(':').ok_or_else(bad)?;
        let nums: Vec<i64> = args
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        match (kind.trim(), nums.as_slice()) {
            ("rect", [a, b]) => Self::rectangle(*a, *b),
            ("sigma2", [a, b]) => Self::sigma2(*a, *b),
            ("p2", [d]) => Self::p2(*d),
            _ => Err(bad()),
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> Vec<Edge> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let from = self.vertices[i];
                let to = self.vertices[(i + 1) % n];
                let (dir, length) = primitive(sub(to, from));
                Edge { from, to, dir, length }
            })
            .collect()
    }

    /// Twice the Euclidean area.
    pub fn twice_area(&self) -> i64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| cross(self.vertices[i], self.vertices[(i + 1) % n]))
            .sum()
    }

    /// `|boundary ∩ Z^2|`, which equals `c_1(X) . d` for the toric pair.
    pub fn boundary_points(&self) -> i64 {
        self.edges().iter().map(|e| e.length).sum()
    }

    /// Interior lattice points (Pick), the arithmetic genus of the class.
    pub fn interior_points(&self) -> i64 {
        (self.twice_area() - self.boundary_points()) / 2 + 1
    }

    /// Number of point conditions for genus `g` curves.
    pub fn point_count(&self, g: i64) -> i64 {
        self.boundary_points() - 1 + g
    }

    pub fn height(&self) -> usize {
        let (lo, hi) = self.y_range();
        (hi - lo) as usize
    }

    fn y_range(&self) -> (i64, i64) {
        let lo = self.vertices.iter().map(|v| v.1).min().unwrap();
        let hi = self.vertices.iter().map(|v| v.1).max().unwrap();
        (lo, hi)
    }

    /// Left and right x at integer height `y`.
    fn slice(&self, y: i64) -> (i64, i64) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for e in self.edges() {
            let (y0, y1) = (e.from.1.min(e.to.1), e.from.1.max(e.to.1));
            if y < y0 || y > y1 {
                continue;
            }
            if e.dir.1 == 0 {
                lo = lo.min(e.from.0.min(e.to.0));
                hi = hi.max(e.from.0.max(e.to.0));
            } else {
                // primitive direction (a, +-1): x moves by a per unit height
                let x = e.from.0 + e.dir.0 * (y - e.from.1) * e.dir.1;
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        (lo, hi)
    }

    pub fn floor_profile(&self) -> FloorProfile {
        let (lo, hi) = self.y_range();
        let slices: Vec<(i64, i64)> = (lo..=hi).map(|y| self.slice(y)).collect();
        let widths = slices.iter().map(|(l, r)| r - l).collect();
        let left_shifts = slices.windows(2).map(|s| s[1].0 - s[0].0).collect();
        let right_shifts = slices.windows(2).map(|s| s[1].1 - s[0].1).collect();
        FloorProfile { height: (hi - lo) as usize, widths, left_shifts, right_shifts }
    }

    fn vertex_index(&self, corner: Point) -> Result<usize, PolygonError> {
        self.vertices
            .iter()
            .position(|&v| v == corner)
            .ok_or(PolygonError::NotAVertex(corner))
    }

    /// Whether the cone at `corner` is unimodular (the toric surface is
    /// smooth at the corresponding fixed point).
    pub fn is_smooth_corner(&self, corner: Point) -> Result<bool, PolygonError> {
        let i = self.vertex_index(corner)?;
        let edges = self.edges();
        let n = edges.len();
        Ok(cross(edges[(i + n - 1) % n].dir, edges[i].dir) == 1)
    }

    pub fn is_smooth(&self) -> bool {
        self.vertices.iter().all(|&v| self.is_smooth_corner(v).unwrap())
    }

    /// Self-intersection of the toric divisor of edge `i` as a reduced
    /// fraction `(num, den)` with `den > 0`.
    pub fn edge_self_intersection(&self, i: usize) -> (i64, i64) {
        let edges = self.edges();
        let n = edges.len();
        let prev = edges[(i + n - 1) % n].dir;
        let cur = edges[i].dir;
        let next = edges[(i + 1) % n].dir;
        let num = -cross(prev, next);
        let den = cross(prev, cur) * cross(cur, next);
        let g = num.gcd(&den);
        (num / g, den / g)
    }

    /// Indices of the edges entering and leaving `corner`.
    pub fn corner_edges(&self, corner: Point) -> Result<(Edge, usize, Edge, usize), PolygonError> {
        let i = self.vertex_index(corner)?;
        let edges = self.edges();
        let n = edges.len();
        let ip = (i + n - 1) % n;
        Ok((edges[ip], ip, edges[i], i))
    }

    /// Removes the corner triangle `c, c + 2u, c + 2v` spanned by the two
    /// primitive edge directions leaving `corner`.
    pub fn corner_cut(&self, corner: Point) -> Result<Shape, PolygonError> {
        let (incoming, _, outgoing, _) = self.corner_edges(corner)?;
        if incoming.length < 2 || outgoing.length < 2 {
            return Err(PolygonError::CutDoesNotFit {
                corner,
                prev: incoming.length,
                next: outgoing.length,
            });
        }
        let back = (-incoming.dir.0, -incoming.dir.1);
        let p1 = (corner.0 + 2 * back.0, corner.1 + 2 * back.1);
        let p2 = (corner.0 + 2 * outgoing.dir.0, corner.1 + 2 * outgoing.dir.1);
        let points: Vec<Point> = self
            .vertices
            .iter()
            .copied()
            .filter(|&v| v != corner)
            .chain([p1, p2])
            .collect();
        HPolygon::shape_from_points(points)
    }

    /// Translate the bounding box to the origin and pick the smaller of the
    /// polygon and its mirror image under `x -> -x`.
    pub fn canonical(&self) -> HPolygon {
        let normalize = |pts: Vec<Point>| -> HPolygon {
            let mx = pts.iter().map(|p| p.0).min().unwrap();
            let my = pts.iter().map(|p| p.1).min().unwrap();
            HPolygon::new(pts.into_iter().map(|(x, y)| (x - mx, y - my)).collect())
                .expect("translation preserves validity")
        };
        let a = normalize(self.vertices.clone());
        let b = normalize(self.vertices.iter().map(|&(x, y)| (-x, y)).collect());
        let key = |p: &HPolygon| {
            let mut v = p.vertices.clone();
            v.sort_unstable();
            v
        };
        if key(&b) < key(&a) {
            b
        } else {
            a
        }
    }
}

impl fmt::Display for HPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|(x, y)| format!("({x},{y})")).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

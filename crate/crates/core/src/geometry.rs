//! Exact plane geometry: dyadic lattice points and open regions with
//! rational data.

use crate::error::{Error, Result};
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

pub type Q = Ratio<i128>;

/// A point `(nx + i ny) / 2^scale_log2`, measured in the unit of the
/// owning graph. Stored in reduced form, so derived equality is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanePoint {
    pub nx: i64,
    pub ny: i64,
    pub scale_log2: u32,
}

impl PlanePoint {
    pub fn new(nx: i64, ny: i64, scale_log2: u32) -> Self {
        let (mut nx, mut ny, mut s) = (nx, ny, scale_log2);
        while s > 0 && nx % 2 == 0 && ny % 2 == 0 {
            nx /= 2;
            ny /= 2;
            s -= 1;
        }
        PlanePoint { nx, ny, scale_log2: s }
    }

    pub fn int(x: i64, y: i64) -> Self {
        PlanePoint { nx: x, ny: y, scale_log2: 0 }
    }

    /// Coordinates as multiples of `2^-s`, for `s >= scale_log2`.
    pub fn at_scale(&self, s: u32) -> (i64, i64) {
        assert!(s >= self.scale_log2);
        let k = s - self.scale_log2;
        (self.nx << k, self.ny << k)
    }

    pub fn to_f64(&self, unit_den: u32) -> (f64, f64) {
        let d = (1u64 << self.scale_log2) as f64 * unit_den as f64;
        (self.nx as f64 / d, self.ny as f64 / d)
    }

    pub fn exact(&self, unit_den: u32) -> Pt {
        let d = (1i128 << self.scale_log2) * unit_den as i128;
        Pt::new(Q::new(self.nx as i128, d), Q::new(self.ny as i128, d))
    }
}

/// Exact rational point of the plane, in absolute units.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Pt {
    pub x: Q,
    pub y: Q,
}

impl Pt {
    pub fn new(x: Q, y: Q) -> Self {
        Pt { x, y }
    }

    pub fn int(x: i128, y: i128) -> Self {
        Pt::new(Q::from_integer(x), Q::from_integer(y))
    }

    /// `(xn/xd, yn/yd)`.
    pub fn frac(xn: i128, xd: i128, yn: i128, yd: i128) -> Self {
        Pt::new(Q::new(xn, xd), Q::new(yn, yd))
    }

    fn lerp(&self, q: &Pt, t: Q) -> Pt {
        Pt::new(self.x + (q.x - self.x) * t, self.y + (q.y - self.y) * t)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (q_f64(self.x), q_f64(self.y))
    }
}

pub fn q_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn cross(o: &Pt, a: &Pt, b: &Pt) -> Q {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Open subsets of the plane with exact data.
///
/// `Rect`, `Disk` and `Polygon` denote open sets; `Points` is a finite
/// closed set, useful as the subtrahend of a `Difference`.
#[derive(Clone, Debug)]
pub enum Region {
    Rect { x0: Q, y0: Q, x1: Q, y1: Q },
    Disk { c: Pt, r2: Q },
    Polygon(Vec<Pt>),
    Points(Vec<Pt>),
    Union(Vec<Region>),
    Difference(Box<Region>, Box<Region>),
}

impl Region {
    pub fn rect(x0: Q, y0: Q, x1: Q, y1: Q) -> Self {
        Region::Rect { x0, y0, x1, y1 }
    }

    pub fn rect_int(x0: i128, y0: i128, x1: i128, y1: i128) -> Self {
        Region::Rect {
            x0: Q::from_integer(x0),
            y0: Q::from_integer(y0),
            x1: Q::from_integer(x1),
            y1: Q::from_integer(y1),
        }
    }

    pub fn disk(c: Pt, r2: Q) -> Self {
        Region::Disk { c, r2 }
    }

    pub fn minus(self, other: Region) -> Self {
        Region::Difference(Box::new(self), Box::new(other))
    }

    pub fn contains(&self, p: &Pt) -> bool {
        match self {
            Region::Rect { x0, y0, x1, y1 } => p.x > *x0 && p.x < *x1 && p.y > *y0 && p.y < *y1,
            Region::Disk { c, r2 } => {
                let dx = p.x - c.x;
                let dy = p.y - c.y;
                dx * dx + dy * dy < *r2
            }
            Region::Polygon(vs) => polygon_contains(vs, p),
            Region::Points(ps) => ps.contains(p),
            Region::Union(rs) => rs.iter().any(|r| r.contains(p)),
            Region::Difference(a, b) => a.contains(p) && !b.contains(p),
        }
    }

    /// Closure membership, only needed for the convex fast paths.
    fn closure_contains(&self, p: &Pt) -> bool {
        match self {
            Region::Rect { x0, y0, x1, y1 } => {
                p.x >= *x0 && p.x <= *x1 && p.y >= *y0 && p.y <= *y1
            }
            Region::Disk { c, r2 } => {
                let dx = p.x - c.x;
                let dy = p.y - c.y;
                dx * dx + dy * dy <= *r2
            }
            _ => unreachable!(),
        }
    }

    /// Parameters t in (0,1) where the segment p + t(q-p) may change
    /// membership.
    fn breakpoints(&self, p: &Pt, q: &Pt, out: &mut Vec<Q>) -> Result<()> {
        match self {
            Region::Rect { x0, y0, x1, y1 } => {
                let corners = [
                    Pt::new(*x0, *y0),
                    Pt::new(*x1, *y0),
                    Pt::new(*x1, *y1),
                    Pt::new(*x0, *y1),
                ];
                polygon_breakpoints(&corners, p, q, out);
            }
            Region::Polygon(vs) => polygon_breakpoints(vs, p, q, out),
            Region::Points(ps) => {
                for s in ps {
                    if let Some(t) = point_param(p, q, s) {
                        out.push(t);
                    }
                }
            }
            Region::Disk { c, r2 } => {
                // |p - c + t d|^2 = r2
                let d = Pt::new(q.x - p.x, q.y - p.y);
                let e = Pt::new(p.x - c.x, p.y - c.y);
                let a = d.x * d.x + d.y * d.y;
                let b = (e.x * d.x + e.y * d.y) * 2;
                let cc = e.x * e.x + e.y * e.y - *r2;
                let disc = b * b - a * cc * 4;
                if disc.is_negative() {
                    return Ok(());
                }
                let root = rational_sqrt(disc).ok_or_else(|| {
                    Error::Precision("segment crosses a disk boundary at an irrational parameter".into())
                })?;
                for t in [(-b - root) / (a * 2), (-b + root) / (a * 2)] {
                    if t > Q::zero() && t < Q::from_integer(1) {
                        out.push(t);
                    }
                }
            }
            Region::Union(rs) => {
                for r in rs {
                    r.breakpoints(p, q, out)?;
                }
            }
            Region::Difference(a, b) => {
                a.breakpoints(p, q, out)?;
                b.breakpoints(p, q, out)?;
            }
        }
        Ok(())
    }

    fn sample_points(&self, p: &Pt, q: &Pt) -> Result<Vec<Pt>> {
        let mut ts = Vec::new();
        self.breakpoints(p, q, &mut ts)?;
        ts.sort();
        ts.dedup();
        let mut pts = Vec::with_capacity(2 * ts.len() + 1);
        let mut prev = Q::zero();
        for t in ts.iter().chain(std::iter::once(&Q::from_integer(1))) {
            pts.push(p.lerp(q, (prev + *t) / 2));
            if *t < Q::from_integer(1) {
                pts.push(p.lerp(q, *t));
            }
            prev = *t;
        }
        Ok(pts)
    }

    /// Whether the open segment ]p,q[ lies inside the region.
    pub fn segment_inside(&self, p: &Pt, q: &Pt) -> Result<bool> {
        match self {
            Region::Rect { .. } | Region::Disk { .. } => {
                let m = p.lerp(q, Q::new(1, 2));
                Ok(self.closure_contains(p) && self.closure_contains(q) && self.contains(&m))
            }
            _ => Ok(self.sample_points(p, q)?.iter().all(|s| self.contains(s))),
        }
    }

    /// Whether the open segment ]p,q[ misses the region entirely.
    pub fn segment_disjoint(&self, p: &Pt, q: &Pt) -> Result<bool> {
        match self {
            Region::Rect { x0, y0, x1, y1 } => {
                let mut lo = Q::zero();
                let mut hi = Q::from_integer(1);
                for (a, b, lo_c, hi_c) in [(p.x, q.x, x0, x1), (p.y, q.y, y0, y1)] {
                    let d = b - a;
                    if d.is_zero() {
                        if !(a > *lo_c && a < *hi_c) {
                            return Ok(true);
                        }
                        continue;
                    }
                    let mut t0 = (*lo_c - a) / d;
                    let mut t1 = (*hi_c - a) / d;
                    if t0 > t1 {
                        std::mem::swap(&mut t0, &mut t1);
                    }
                    lo = lo.max(t0);
                    hi = hi.min(t1);
                }
                Ok(lo >= hi)
            }
            Region::Disk { c, r2 } => {
                let d = Pt::new(q.x - p.x, q.y - p.y);
                let e = Pt::new(p.x - c.x, p.y - c.y);
                let a = d.x * d.x + d.y * d.y;
                let f = |t: Q| {
                    let x = e.x + d.x * t;
                    let y = e.y + d.y * t;
                    x * x + y * y
                };
                let mut m = f(Q::zero()).min(f(Q::from_integer(1)));
                if !a.is_zero() {
                    let ts = -(e.x * d.x + e.y * d.y) / a;
                    if ts > Q::zero() && ts < Q::from_integer(1) {
                        m = m.min(f(ts));
                    }
                }
                Ok(m >= *r2)
            }
            _ => Ok(!self.sample_points(p, q)?.iter().any(|s| self.contains(s))),
        }
    }
}

impl Region {
    /// `[x0, x1, y0, y1]` enclosing the region, or `None` if unbounded
    /// pieces are absent (empty unions).
    pub fn bounding_box(&self) -> Option<[f64; 4]> {
        let pts = |ps: &[Pt]| -> Option<[f64; 4]> {
            let mut b = [f64::MAX, f64::MIN, f64::MAX, f64::MIN];
            for p in ps {
                let (x, y) = p.to_f64();
                b = [b[0].min(x), b[1].max(x), b[2].min(y), b[3].max(y)];
            }
            (!ps.is_empty()).then_some(b)
        };
        match self {
            Region::Rect { x0, y0, x1, y1 } => Some([q_f64(*x0), q_f64(*x1), q_f64(*y0), q_f64(*y1)]),
            Region::Disk { c, r2 } => {
                let (x, y) = c.to_f64();
                let r = q_f64(*r2).sqrt();
                Some([x - r, x + r, y - r, y + r])
            }
            Region::Polygon(vs) | Region::Points(vs) => pts(vs),
            Region::Union(rs) => rs.iter().filter_map(|r| r.bounding_box()).reduce(|a, b| {
                [a[0].min(b[0]), a[1].max(b[1]), a[2].min(b[2]), a[3].max(b[3])]
            }),
            Region::Difference(a, _) => a.bounding_box(),
        }
    }

    /// Euclidean distance from `p` to the union of the boundaries of the
    /// primitive pieces, which contains the boundary of the region. For
    /// unions and differences the result is therefore a lower bound.
    pub fn boundary_distance(&self, p: (f64, f64)) -> f64 {
        let seg = |a: (f64, f64), b: (f64, f64)| {
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let l2 = dx * dx + dy * dy;
            let t = if l2 > 0.0 { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / l2).clamp(0.0, 1.0) } else { 0.0 };
            (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
        };
        let ring = |vs: &[(f64, f64)]| {
            (0..vs.len()).map(|i| seg(vs[i], vs[(i + 1) % vs.len()])).fold(f64::INFINITY, f64::min)
        };
        match self {
            Region::Rect { x0, y0, x1, y1 } => {
                let (a, b, c, d) = (q_f64(*x0), q_f64(*x1), q_f64(*y0), q_f64(*y1));
                ring(&[(a, c), (b, c), (b, d), (a, d)])
            }
            Region::Disk { c, r2 } => {
                let (x, y) = c.to_f64();
                ((p.0 - x).hypot(p.1 - y) - q_f64(*r2).sqrt()).abs()
            }
            Region::Polygon(vs) => ring(&vs.iter().map(|v| v.to_f64()).collect::<Vec<_>>()),
            Region::Points(ps) => ps
                .iter()
                .map(|s| {
                    let (x, y) = s.to_f64();
                    (p.0 - x).hypot(p.1 - y)
                })
                .fold(f64::INFINITY, f64::min),
            Region::Union(rs) => rs.iter().map(|r| r.boundary_distance(p)).fold(f64::INFINITY, f64::min),
            Region::Difference(a, b) => a.boundary_distance(p).min(b.boundary_distance(p)),
        }
    }

    /// The image of the region under `z -> k z`, `k > 0`.
    pub fn scaled(&self, k: Q) -> Region {
        assert!(k.is_positive());
        let s = |p: &Pt| Pt::new(p.x * k, p.y * k);
        match self {
            Region::Rect { x0, y0, x1, y1 } => Region::rect(*x0 * k, *y0 * k, *x1 * k, *y1 * k),
            Region::Disk { c, r2 } => Region::disk(s(c), *r2 * k * k),
            Region::Polygon(vs) => Region::Polygon(vs.iter().map(s).collect()),
            Region::Points(ps) => Region::Points(ps.iter().map(s).collect()),
            Region::Union(rs) => Region::Union(rs.iter().map(|r| r.scaled(k)).collect()),
            Region::Difference(a, b) => a.scaled(k).minus(b.scaled(k)),
        }
    }
}

fn rational_sqrt(v: Q) -> Option<Q> {
    let n = isqrt(*v.numer())?;
    let d = isqrt(*v.denom())?;
    Some(Q::new(n, d))
}

fn isqrt(v: i128) -> Option<i128> {
    if v < 0 {
        return None;
    }
    let mut r = (v as f64).sqrt() as i128;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    (r * r == v).then_some(r)
}

/// Parameter of `s` on the segment, if s lies strictly between p and q.
fn point_param(p: &Pt, q: &Pt, s: &Pt) -> Option<Q> {
    if !cross(p, q, s).is_zero() {
        return None;
    }
    let d = Pt::new(q.x - p.x, q.y - p.y);
    let t = if !d.x.is_zero() {
        (s.x - p.x) / d.x
    } else if !d.y.is_zero() {
        (s.y - p.y) / d.y
    } else {
        return None;
    };
    (t > Q::zero() && t < Q::from_integer(1)).then_some(t)
}

fn polygon_breakpoints(vs: &[Pt], p: &Pt, q: &Pt, out: &mut Vec<Q>) {
    let n = vs.len();
    let d = Pt::new(q.x - p.x, q.y - p.y);
    for i in 0..n {
        let a = &vs[i];
        let b = &vs[(i + 1) % n];
        let e = Pt::new(b.x - a.x, b.y - a.y);
        let denom = d.x * e.y - d.y * e.x;
        if denom.is_zero() {
            // Parallel: only collinear overlap matters, via the endpoints.
            for s in [a, b] {
                if let Some(t) = point_param(p, q, s) {
                    out.push(t);
                }
            }
            continue;
        }
        let w = Pt::new(a.x - p.x, a.y - p.y);
        let t = (w.x * e.y - w.y * e.x) / denom;
        let u = (w.x * d.y - w.y * d.x) / denom;
        if t > Q::zero() && t < Q::from_integer(1) && u >= Q::zero() && u <= Q::from_integer(1) {
            out.push(t);
        }
    }
}

fn on_segment(a: &Pt, b: &Pt, p: &Pt) -> bool {
    cross(a, b, p).is_zero()
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

fn polygon_contains(vs: &[Pt], p: &Pt) -> bool {
    let n = vs.len();
    let mut inside = false;
    for i in 0..n {
        let a = &vs[i];
        let b = &vs[(i + 1) % n];
        if on_segment(a, b, p) {
            return false;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let c = cross(a, b, p);
            let up = b.y > a.y;
            if (c.is_positive() && up) || (c.is_negative() && !up) {
                inside = !inside;
            }
        }
    }
    inside
}

/// Lexicographic order used by the top-left tie-break: minimal real
/// part first, then maximal imaginary part.
pub fn top_left_cmp(a: (Q, Q), b: (Q, Q)) -> Ordering {
    a.0.cmp(&b.0).then(b.1.cmp(&a.1))
}

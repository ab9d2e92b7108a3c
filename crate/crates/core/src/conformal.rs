//! Riemann map of an axis-aligned square onto the unit disk.
//!
//! The inverse map is the Schwarz–Christoffel integral
//! `F(w) = C ∫_0^w (1 + t^4)^{-1/2} dt` (prevertices `e^{iπ/4} i^k`),
//! normalized so that `F(1) = 1` is the midpoint of the right edge of
//! `[-1, 1]^2`.

use crate::error::{Error, Result};
use crate::solver::harmonic_measure;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

const QUAD_TOL: f64 = 1e-13;

/// Tanh-sinh quadrature with recursive splitting when the error
/// estimate is too large.
pub(crate) fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let o = quadrature::integrate(f, a, b, tol);
        if o.error_estimate <= tol || depth == 0 {
            return o.integral;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol, depth - 1) + rec(f, m, b, tol, depth - 1)
    }
    rec(f, a, b, tol, 10)
}

/// `∫_0^{u0} 2u / sqrt(2 sin 2u^2) du`, the boundary arclength integral
/// after `s = π/4 - u^2` removes the corner singularity.
fn corner_integral(u0: f64) -> f64 {
    integrate(&corner_integrand, 0.0, u0, QUAD_TOL)
}

fn corner_integrand(u: f64) -> f64 {
    let x = 2.0 * u * u;
    if x < 1e-8 {
        1.0 / (1.0 - x * x / 6.0).sqrt()
    } else {
        1.0 / (x.sin() / x).sqrt()
    }
}

/// The calibration constant `C` of the unit square map.
pub fn sc_constant() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| 1.0 / integrate(&|t: f64| 1.0 / (1.0 + t.powi(4)).sqrt(), 0.0, 1.0, QUAD_TOL))
}

/// Riemann map `φ_M` of a square onto the disk, `φ_M(center) = 0`,
/// `φ_M'(center) > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SquareDiskMap {
    pub center: (f64, f64),
    pub half_side: f64,
    c: f64,
}

impl SquareDiskMap {
    pub fn new(center: (f64, f64), half_side: f64) -> Result<Self> {
        if !(half_side > 0.0 && half_side.is_finite()) {
            return Err(Error::InvalidInput(format!("half side must be positive, got {half_side}")));
        }
        Ok(SquareDiskMap { center, half_side, c: sc_constant() })
    }

    pub fn unit() -> Self {
        SquareDiskMap { center: (0.0, 0.0), half_side: 1.0, c: sc_constant() }
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    fn normalize(&self, z: Complex64) -> Complex64 {
        (z - Complex64::new(self.center.0, self.center.1)) / self.half_side
    }

    /// `F(w)` for `|w| < 1`, normalized square coordinates.
    pub fn inverse(&self, w: Complex64) -> Complex64 {
        let w4 = w.powi(4);
        let re = integrate(&|t: f64| (1.0 + w4 * t.powi(4)).sqrt().inv().re, 0.0, 1.0, QUAD_TOL);
        let im = integrate(&|t: f64| (1.0 + w4 * t.powi(4)).sqrt().inv().im, 0.0, 1.0, QUAD_TOL);
        self.c * w * Complex64::new(re, im)
    }

    fn inverse_derivative(&self, w: Complex64) -> Complex64 {
        self.c * (1.0 + w.powi(4)).sqrt().inv()
    }

    /// Solves `F(w) = z` for normalized `z` in the sector `|arg z| ≤ π/4`.
    fn solve_sector(&self, z: Complex64) -> Result<Complex64> {
        let steps = 8;
        let mut w = z / (steps as f64 * self.c);
        if w.norm() >= 1.0 {
            return Err(Error::Domain(format!("{z} is outside the square")));
        }
        for k in 1..=steps {
            let target = z * (k as f64 / steps as f64);
            let mut converged = false;
            for _ in 0..60 {
                let r = self.inverse(w) - target;
                if r.norm() < 1e-14 {
                    converged = true;
                    break;
                }
                let mut step = r / self.inverse_derivative(w);
                let mut halvings = 0;
                while (w - step).norm() >= 1.0 && halvings < 60 {
                    step *= 0.5;
                    halvings += 1;
                }
                w -= step;
                if step.norm() < 1e-16 {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Precision(format!("Newton inversion failed at {z}")));
            }
        }
        Ok(w)
    }

    /// `φ_M(z)` for `z` strictly inside the square.
    pub fn map_point(&self, z: Complex64) -> Result<Complex64> {
        let n = self.normalize(z);
        if !(n.re.abs() < 1.0 && n.im.abs() < 1.0) {
            return Err(Error::Domain(format!("{z} is not strictly inside the square")));
        }
        if n.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        // rotate into |arg| ≤ π/4, then use conjugation symmetry
        let mut k = 0;
        let mut m = n;
        while !(m.re >= m.im.abs()) {
            m *= Complex64::new(0.0, -1.0);
            k += 1;
        }
        let flip = m.im < 0.0;
        if flip {
            m = m.conj();
        }
        let mut w = self.solve_sector(m)?;
        if flip {
            w = w.conj();
        }
        Ok(w * Complex64::new(0.0, 1.0).powi(k))
    }

    /// `φ_M'(z)` inside the square.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let w = self.map_point(z)?;
        Ok(self.inverse_derivative(w).inv() / self.half_side)
    }

    /// Edge index (0 right, 1 top, 2 left, 3 bottom) and the coordinate
    /// along it, measured counterclockwise, for a boundary point.
    fn edge_of(&self, b: Complex64) -> Result<(u32, f64)> {
        let n = self.normalize(b);
        let tol = 1e-12;
        let on = |a: f64| (a.abs() - 1.0).abs() <= tol;
        let inside = |a: f64| a.abs() < 1.0 - tol;
        let (k, y) = if on(n.re) && n.re > 0.0 && inside(n.im) {
            (0, n.im)
        } else if on(n.im) && n.im > 0.0 && inside(n.re) {
            (1, -n.re)
        } else if on(n.re) && n.re < 0.0 && inside(n.im) {
            (2, -n.im)
        } else if on(n.im) && n.im < 0.0 && inside(n.re) {
            (3, n.re)
        } else if on(n.re) && on(n.im) {
            return Err(Error::Singular(format!("{b} is a corner")));
        } else {
            return Err(Error::Domain(format!("{b} is not on the boundary")));
        };
        Ok((k, y))
    }

    /// `u0 = sqrt(π/4 - |θ|)` for the right-edge point `1 + iy`.
    fn corner_parameter(&self, y: f64) -> f64 {
        let target = (1.0 - y.abs()) / self.c;
        let full = FRAC_PI_4.sqrt();
        let (mut lo, mut hi) = (0.0, full);
        let mut u = target.min(full);
        for _ in 0..100 {
            let g = corner_integral(u) - target;
            if g > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let next = u - g / corner_integrand(u);
            u = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if g.abs() < 1e-15 || hi - lo < 1e-16 {
                break;
            }
        }
        u
    }

    /// Argument of `φ_M(b)` for a boundary point `b`.
    pub fn boundary_angle(&self, b: Complex64) -> Result<f64> {
        let (k, y) = self.edge_of(b)?;
        let u = self.corner_parameter(y);
        let th = (FRAC_PI_4 - u * u).max(0.0) * y.signum();
        let mut a = th + k as f64 * PI / 2.0;
        if a > PI {
            a -= 2.0 * PI;
        }
        Ok(a)
    }

    pub fn boundary_point(&self, b: Complex64) -> Result<Complex64> {
        Ok(Complex64::from_polar(1.0, self.boundary_angle(b)?))
    }

    /// `|φ_M'(b)|` at a non-corner boundary point.
    pub fn boundary_derivative_modulus(&self, b: Complex64) -> Result<f64> {
        let (_, y) = self.edge_of(b)?;
        let u = self.corner_parameter(y);
        Ok((2.0 * (2.0 * u * u).sin()).sqrt() / (self.c * self.half_side))
    }
}

/// `φ_u = (φ_M - μ) / (1 - conj(μ) φ_M)` with `μ = φ_M(u)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RecenteredMap {
    pub base: SquareDiskMap,
    pub u: (f64, f64),
    #[serde(skip)]
    pub mu: Complex64,
}

impl RecenteredMap {
    pub fn new(base: SquareDiskMap, u: Complex64) -> Result<Self> {
        let mu = base.map_point(u)?;
        Ok(RecenteredMap { base, u: (u.re, u.im), mu })
    }

    fn mobius(&self, w: Complex64) -> Complex64 {
        (w - self.mu) / (1.0 - self.mu.conj() * w)
    }

    pub fn map_point(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.mobius(self.base.map_point(z)?))
    }

    pub fn boundary_point(&self, b: Complex64) -> Result<Complex64> {
        Ok(self.mobius(self.base.boundary_point(b)?))
    }

    /// `|φ_u'(b)|`, the base modulus times the Poisson kernel factor.
    pub fn boundary_derivative_modulus(&self, b: Complex64) -> Result<f64> {
        let w = self.base.boundary_point(b)?;
        let k = (1.0 - self.mu.norm_sqr()) / (1.0 - self.mu.conj() * w).norm_sqr();
        Ok(self.base.boundary_derivative_modulus(b)? * k)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HitRow {
    /// Boundary vertex in mesh units.
    pub b: (i64, i64),
    pub corner_distance: f64,
    pub exact: f64,
    pub derivative_prediction: f64,
    pub sum_prediction: f64,
}

impl HitRow {
    pub fn rel_err_derivative(&self) -> f64 {
        (self.derivative_prediction - self.exact).abs() / self.exact
    }

    pub fn rel_err_sum(&self) -> f64 {
        (self.sum_prediction - self.exact).abs() / self.exact
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HitReport {
    pub n: i64,
    pub u: (i64, i64),
    /// Largest relative errors over boundary points with `d(b, K) ≥ 1/4`.
    pub max_rel_err_derivative: f64,
    pub max_rel_err_sum: f64,
    /// `Σ_b |φ_u'(b)| / (2πN)` over the whole boundary.
    pub predicted_mass: f64,
    pub rows: Vec<HitRow>,
}

/// Exact harmonic measure of `∂[-1,1]^2` on the mesh `1/N` grid from
/// `u` (mesh units) against `|φ_u'(b)|/(2πN)` and
/// `-(1/2π) Σ_s W(b,s) log|φ_u(s)|`. `samples` limits the rows kept
/// in the report (0 keeps all); the maxima use every boundary point.
pub fn verify_hit_formula(n: i64, u: (i64, i64), samples: usize) -> Result<HitReport> {
    if n < 2 || u.0.abs() >= n || u.1.abs() >= n {
        return Err(Error::InvalidInput(format!("need N >= 2 and u strictly inside, got N={n} u={u:?}")));
    }
    let g = crate::graph::grid_graph(0, n as u32, (-n, n), (-n, n))?;
    let ring: Vec<usize> = crate::solver::square_ring(&g, n)
        .into_iter()
        .filter(|&v| {
            let p = g.point(v);
            p.nx.abs() != p.ny.abs()
        })
        .collect();
    let start = g.index_of(&crate::geometry::PlanePoint::int(u.0, u.1)).unwrap();
    let exact = harmonic_measure(&g, start, &ring)?;
    let nf = n as f64;
    let map = RecenteredMap::new(SquareDiskMap::unit(), Complex64::new(u.0 as f64 / nf, u.1 as f64 / nf))?;
    let mut rows = Vec::with_capacity(ring.len());
    for (&b, &p) in ring.iter().zip(&exact) {
        let pt = g.point(b);
        let z = Complex64::new(pt.nx as f64 / nf, pt.ny as f64 / nf);
        let dphi = map.boundary_derivative_modulus(z)?;
        let mut sum = 0.0;
        for (s, w) in g.neighbors(b) {
            let q = g.point(s);
            if q.nx.abs() == n || q.ny.abs() == n {
                continue;
            }
            let zs = Complex64::new(q.nx as f64 / nf, q.ny as f64 / nf);
            sum -= w * map.map_point(zs)?.norm().ln();
        }
        let along = if pt.nx.abs() == n { pt.ny } else { pt.nx };
        rows.push(HitRow {
            b: (pt.nx, pt.ny),
            corner_distance: (n - along.abs()) as f64 / nf,
            exact: p,
            derivative_prediction: dphi / (2.0 * PI * nf),
            sum_prediction: sum / (2.0 * PI),
        });
    }
    let far = rows.iter().filter(|r| r.corner_distance >= 0.25);
    let max_d = far.clone().map(HitRow::rel_err_derivative).fold(0.0, f64::max);
    let max_s = far.map(HitRow::rel_err_sum).fold(0.0, f64::max);
    let predicted_mass = rows.iter().map(|r| r.derivative_prediction).sum();
    if samples > 0 && samples < rows.len() {
        let stride = rows.len() as f64 / samples as f64;
        rows = (0..samples).map(|k| rows[(k as f64 * stride) as usize].clone()).collect();
    }
    Ok(HitReport { n, u, max_rel_err_derivative: max_d, max_rel_err_sum: max_s, predicted_mass, rows })
}

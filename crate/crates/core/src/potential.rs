//! The discrete harmonic potential `a` on Z^2 and its half-integer
//! averages `A(s, ·)`.
//!
//! Values are produced column by column from the diagonal closed form
//! `a(n+in) = (1/π) Σ_{k≤n} 1/(2k-1)` and harmonicity. That recursion
//! multiplies rounding errors by roughly `3+2√2` per column, so it runs
//! in binary fixed point with about `2.6 R` guard bits and rounds to
//! `f64` only at the end.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use std::f64::consts::PI;
use std::io::Write;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `a(0)` in the normalization where `a(z) - log|z|/2π → 0`.
pub fn asymptotic_offset() -> f64 {
    -(8f64.ln() + 2.0 * EULER_GAMMA) / (4.0 * PI)
}

/// `(9/4)(17 - (48 + log 72 + 2γ)/π)`, reported for comparison only.
pub fn val_c1() -> f64 {
    2.25 * (17.0 - (48.0 + 72f64.ln() + 2.0 * EULER_GAMMA) / PI)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// `a(0) = 0`.
    Raw,
    /// `a(0) = -(log 8 + 2γ)/(4π)`.
    Asymptotic,
}

impl Normalization {
    pub fn offset(self) -> f64 {
        match self {
            Normalization::Raw => 0.0,
            Normalization::Asymptotic => asymptotic_offset(),
        }
    }
}

/// A point of the half-integer lattice, stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HalfIntegerPoint {
    pub x2: i64,
    pub y2: i64,
}

impl HalfIntegerPoint {
    pub fn new(x2: i64, y2: i64) -> Self {
        HalfIntegerPoint { x2, y2 }
    }

    pub fn int(x: i64, y: i64) -> Self {
        HalfIntegerPoint { x2: 2 * x, y2: 2 * y }
    }

    /// The 1, 2 or 4 integer points nearest to `self`.
    pub fn nearest_integers(&self) -> Vec<(i64, i64)> {
        let opts = |t: i64| -> Vec<i64> {
            if t.rem_euclid(2) == 0 {
                vec![t / 2]
            } else {
                vec![(t - 1).div_euclid(2), (t + 1).div_euclid(2)]
            }
        };
        let mut out = Vec::with_capacity(4);
        for x in opts(self.x2) {
            for y in opts(self.y2) {
                out.push((x, y));
            }
        }
        out
    }
}

/// Raw-normalized values of `a` on the octant `0 ≤ y ≤ x ≤ radius`.
#[derive(Clone, Debug)]
pub struct PotentialTable {
    radius: usize,
    vals: Vec<f64>,
}

fn tri(x: usize, y: usize) -> usize {
    x * (x + 1) / 2 + y
}

/// `floor(2^bits / π)` via Machin's formula.
fn inv_pi_fixed(bits: u64) -> BigInt {
    let guard = 64;
    let p = bits + guard;
    let one = BigInt::one() << p;
    let atan_inv = |m: u64| -> BigInt {
        // atan(1/m) = Σ (-1)^k / ((2k+1) m^(2k+1))
        let m2 = BigInt::from(m * m);
        let mut term = &one / BigInt::from(m);
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        while !term.is_zero() {
            let t = &term / BigInt::from(2 * k + 1);
            if k % 2 == 0 {
                sum += t;
            } else {
                sum -= t;
            }
            term /= &m2;
            k += 1;
        }
        sum
    };
    let pi = atan_inv(5) * 16 - atan_inv(239) * 4;
    (BigInt::one() << (bits + p)) / pi
}

impl PotentialTable {
    pub fn new(radius: usize) -> Self {
        let radius = radius.max(2);
        let bits = (2.6 * radius as f64) as u64 + 160;
        let guard = 32;
        let inv_pi = inv_pi_fixed(bits + guard);
        let mut diag = Vec::with_capacity(radius + 1);
        let mut acc = BigInt::zero();
        diag.push(BigInt::zero());
        for n in 1..=radius {
            acc += &inv_pi / BigInt::from(2 * n as u64 - 1);
            diag.push(&acc >> guard);
        }
        let one = BigInt::one() << bits;
        let to_f64 = |v: &BigInt| -> f64 {
            let shift = bits - 62;
            (v >> shift).to_f64().unwrap() / (1u64 << 62) as f64
        };
        let mut vals = vec![0.0; tri(radius, radius) + 1];
        let mut prev: Vec<BigInt> = vec![BigInt::zero()];
        let mut cur: Vec<BigInt> = vec![&one >> 2, diag[1].clone()];
        vals[tri(1, 0)] = to_f64(&cur[0]);
        vals[tri(1, 1)] = to_f64(&cur[1]);
        for n in 1..radius {
            let mut next = Vec::with_capacity(n + 2);
            for y in 0..n {
                let up = &cur[y + 1];
                let down = if y > 0 { &cur[y - 1] } else { &cur[1] };
                next.push(&cur[y] * 4 - &prev[y] - up - down);
            }
            next.push(&cur[n] * 2 - &cur[n - 1]);
            next.push(diag[n + 1].clone());
            for (y, v) in next.iter().enumerate() {
                vals[tri(n + 1, y)] = to_f64(v);
            }
            prev = std::mem::replace(&mut cur, next);
        }
        PotentialTable { radius, vals }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Raw-normalized `a(x + iy)` for `max(|x|,|y|) ≤ radius`.
    #[inline]
    pub fn raw(&self, x: i64, y: i64) -> Result<f64> {
        let (mut x, mut y) = (x.unsigned_abs() as usize, y.unsigned_abs() as usize);
        if y > x {
            std::mem::swap(&mut x, &mut y);
        }
        if x > self.radius {
            return Err(Error::Range(format!(
                "potential at ({x},{y}) beyond table radius {}",
                self.radius
            )));
        }
        Ok(self.vals[tri(x, y)])
    }

    pub fn potential(&self, x: i64, y: i64, norm: Normalization) -> Result<f64> {
        Ok(self.raw(x, y)? + norm.offset())
    }

    /// `A(s, v)`: the average of `a(t - v)` over the integer points `t`
    /// nearest to `s`.
    pub fn potential_half(
        &self,
        s: HalfIntegerPoint,
        v: (i64, i64),
        norm: Normalization,
    ) -> Result<f64> {
        let ts = s.nearest_integers();
        let mut sum = 0.0;
        for &(tx, ty) in &ts {
            sum += self.raw(tx - v.0, ty - v.1)?;
        }
        Ok(sum / ts.len() as f64 + norm.offset())
    }

    /// Max of `|a(z) - log|z|/2π| · |z|^2` over `r_min ≤ |z| ≤ r_max`, in
    /// asymptotic normalization, with an octant representative of the argmax.
    pub fn residual_bound_scan(&self, r_min: f64, r_max: f64) -> Result<(f64, (i64, i64))> {
        if r_max > self.radius as f64 {
            return Err(Error::Range(format!(
                "scan radius {r_max} beyond table radius {}",
                self.radius
            )));
        }
        let off = asymptotic_offset();
        let mut best = (0.0, (0, 0));
        let xmax = r_max.floor() as usize;
        for x in 0..=xmax {
            for y in 0..=x {
                let r2 = (x * x + y * y) as f64;
                let r = r2.sqrt();
                if r < r_min || r > r_max || r2 == 0.0 {
                    continue;
                }
                let res = (self.vals[tri(x, y)] + off - r.ln() / (2.0 * PI)).abs() * r2;
                if res > best.0 {
                    best = (res, (x as i64, y as i64));
                }
            }
        }
        Ok(best)
    }

    /// `Δa` at `(x, y)`, for `max(|x|,|y|) < radius`.
    pub fn laplacian_at(&self, x: i64, y: i64) -> Result<f64> {
        let c = self.raw(x, y)?;
        Ok(self.raw(x + 1, y)? + self.raw(x - 1, y)? + self.raw(x, y + 1)? + self.raw(x, y - 1)?
            - 4.0 * c)
    }

    /// CSV rows `x,y,a` over the first octant.
    pub fn write_csv<W: Write>(&self, mut out: W, norm: Normalization) -> std::io::Result<()> {
        writeln!(out, "x,y,a")?;
        let off = norm.offset();
        for x in 0..=self.radius {
            for y in 0..=x {
                writeln!(out, "{x},{y},{:.17e}", self.vals[tri(x, y)] + off)?;
            }
        }
        Ok(())
    }
}

/// Closed form on the diagonal, raw normalization.
pub fn diagonal_closed_form(n: u64) -> f64 {
    (1..=n).map(|k| 1.0 / (2 * k - 1) as f64).sum::<f64>() / PI
}

//! Group law of `H̄ = C × (R/πZ)`, rational momenta, and the closed helices
//! `γ_r`.

use core::f64::consts::PI;
use core::fmt;
use core::ops::Mul;
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Reduces a central coordinate into `[0, π)`.
pub fn reduce_mod_pi(t: f64) -> f64 {
    let mut r = t % PI;
    if r < 0.0 {
        r += PI;
    }
    if r >= PI || r == 0.0 {
        // Covers -0.0 and the rounding case r + π == π.
        r = 0.0;
    }
    r
}

/// A point `(z, t)` of the reduced Heisenberg group, with `t ∈ [0, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergPoint {
    z: Complex64,
    t: f64,
}

impl HeisenbergPoint {
    pub const IDENTITY: HeisenbergPoint = HeisenbergPoint {
        z: Complex64 { re: 0.0, im: 0.0 },
        t: 0.0,
    };

    pub fn new(z: Complex64, t: f64) -> Self {
        HeisenbergPoint {
            z,
            t: reduce_mod_pi(t),
        }
    }

    pub fn from_parts(x: f64, y: f64, t: f64) -> Self {
        Self::new(Complex64::new(x, y), t)
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn inverse(&self) -> Self {
        Self::new(-self.z, -self.t)
    }

    /// Equality up to `tol` in `z` and in the distance on the central circle.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let dt = (self.t - other.t).abs();
        let dt = dt.min(PI - dt);
        (self.z - other.z).norm() <= tol && dt <= tol
    }
}

impl Mul for HeisenbergPoint {
    type Output = HeisenbergPoint;

    /// `(z, t)(w, s) = (z + w, t + s + ½ Im(z̄ w))`.
    fn mul(self, rhs: Self) -> Self {
        let twist = 0.5 * (self.z.conj() * rhs.z).im;
        Self::new(self.z + rhs.z, self.t + rhs.t + twist)
    }
}

pub fn group_mul(p: HeisenbergPoint, q: HeisenbergPoint) -> HeisenbergPoint {
    p * q
}

pub fn group_inv(p: HeisenbergPoint) -> HeisenbergPoint {
    p.inverse()
}

/// A rational momentum `r = a/b` in lowest terms.
///
/// `a` counts turns around the central circle and `b` turns around the helix
/// axis during one period `2π√(ab)` of `γ_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalMomentum {
    a: u64,
    b: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl RationalMomentum {
    pub const ONE: RationalMomentum = RationalMomentum { a: 1, b: 1 };

    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::ZeroMomentum);
        }
        let g = gcd(a, b);
        Ok(RationalMomentum { a: a / g, b: b / g })
    }

    /// Vertical winding number.
    pub fn a(&self) -> u64 {
        self.a
    }

    /// Horizontal winding number.
    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn value(&self) -> f64 {
        self.a as f64 / self.b as f64
    }

    pub fn sqrt_r(&self) -> f64 {
        self.value().sqrt()
    }

    pub fn sqrt_ab(&self) -> f64 {
        ((self.a * self.b) as f64).sqrt()
    }

    /// Period `2π√(ab)` of `γ_r`.
    pub fn period(&self) -> f64 {
        2.0 * PI * self.sqrt_ab()
    }

    /// `r|n|` when `rn` is an integer, i.e. when `b` divides `n`.
    pub fn shift(&self, n: i64) -> Option<u64> {
        let m = n.unsigned_abs();
        m.is_multiple_of(self.b).then(|| self.a * (m / self.b))
    }
}

impl fmt::Display for RationalMomentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 1 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}/{}", self.a, self.b)
        }
    }
}

impl FromStr for RationalMomentum {
    type Err = Error;

    /// Accepts `A/B` or `A` with positive integers; the fraction is reduced.
    fn from_str(s: &str) -> Result<Self> {
        let digits = |p: &str| -> Result<u64> {
            let p = p.trim();
            if p.is_empty() || !p.bytes().all(|c| c.is_ascii_digit()) {
                return Err(Error::MalformedMomentum);
            }
            p.parse().map_err(|_| Error::MalformedMomentum)
        };
        let (a, b) = match s.split_once('/') {
            Some((a, b)) => (digits(a)?, digits(b)?),
            None => (digits(s)?, 1),
        };
        Self::new(a, b)
    }
}

/// `γ_r(s) = (√r e^{is/√r}, ½√r s)`.
pub fn geodesic(r: RationalMomentum, s: f64) -> HeisenbergPoint {
    let sr = r.sqrt_r();
    HeisenbergPoint::new(Complex64::from_polar(sr, s / sr), 0.5 * sr * s)
}

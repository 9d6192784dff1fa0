//! Generalized Laguerre polynomials, diagonal Laguerre functions, `J₀`, and
//! bracketing of their real zeros.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{finite, Error, Result};

/// Bracket width used by [`scan_zeros`].
pub const DEFAULT_BRACKET_TOL: f64 = 1e-10;

/// Largest `|x|` handled by the power series of `J₀`.
const J0_SERIES_LIMIT: f64 = 12.0;

/// `L_j^{(α)}(x)` via the three-term recurrence.
pub fn laguerre_eval(j: usize, alpha: f64, x: f64) -> Result<f64> {
    finite("alpha", alpha)?;
    finite("x", x)?;
    Ok(laguerre(j, alpha, x))
}

/// Unchecked recurrence
/// `(i+1) L_{i+1} = (2i + 1 + α − x) L_i − (i + α) L_{i−1}`.
pub(crate) fn laguerre(j: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if j == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for i in 1..j {
        let fi = i as f64;
        let next = ((2.0 * fi + 1.0 + alpha - x) * cur - (fi + alpha) * prev) / (fi + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// The diagonal Laguerre function `l_j(x) = L_j^{(x)}(x)`.
///
/// Its zeros at positive integers `m` are exactly the modes with `r|n| = m`
/// that the transform annihilates. `l_0 ≡ l_1 ≡ 1` and `l_2(x) = (2 − x)/2`.
pub fn diagonal_laguerre(j: usize, x: f64) -> Result<f64> {
    finite("x", x)?;
    Ok(laguerre(j, x, x))
}

/// `ln(n!)` from the log-gamma function.
pub(crate) fn ln_factorial(n: u64) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// Bessel function of the first kind of order zero.
///
/// Power series for `|x| ≤ 12`; beyond that the integral
/// `J₀(x) = (1/2π) ∫ e^{ix cos θ} dθ` by the trapezoid rule, doubling the node
/// count until two successive estimates agree.
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if !ax.is_finite() {
        return f64::NAN;
    }
    if ax <= J0_SERIES_LIMIT {
        j0_series(ax)
    } else {
        j0_trapezoid(ax)
    }
}

fn j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=80 {
        let k = k as f64;
        term *= q / (k * k);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// Trapezoid rule on the half period `[0, π]` of `cos(x cos θ)`, which is
/// even about both endpoints, so the endpoint-weighted rule equals the
/// full-period rule with `2n` nodes.
fn j0_trapezoid(x: f64) -> f64 {
    let estimate = |n: usize| {
        let h = PI / n as f64;
        let mut sum = 0.5 * ((x).cos() + (-x).cos());
        for i in 1..n {
            sum += (x * (i as f64 * h).cos()).cos();
        }
        sum / n as f64
    };
    let mut n = 32usize.max((x as usize).next_power_of_two());
    let mut prev = estimate(n);
    loop {
        n *= 2;
        let cur = estimate(n);
        if (cur - prev).abs() <= 1e-15 || n >= 1 << 20 {
            return cur;
        }
        prev = cur;
    }
}

/// Which function [`scan_zeros`] looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroKind {
    /// `l_j` of the given order.
    DiagonalLaguerre(usize),
    BesselJ0,
}

impl ZeroKind {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            ZeroKind::DiagonalLaguerre(j) => laguerre(j, x, x),
            ZeroKind::BesselJ0 => bessel_j0(x),
        }
    }

    pub fn order_j(self) -> Option<usize> {
        match self {
            ZeroKind::DiagonalLaguerre(j) => Some(j),
            ZeroKind::BesselJ0 => None,
        }
    }
}

/// A certified simple zero: the function has strictly opposite signs at `lo`
/// and `hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroBracket {
    pub lo: f64,
    pub hi: f64,
    /// Midpoint of the final bracket.
    pub witness: f64,
    pub kind: ZeroKind,
}

impl ZeroBracket {
    pub fn order_j(&self) -> Option<usize> {
        self.kind.order_j()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// A window where the sampled values suggest a double root or a pair of
/// roots closer than the grid step. Never bisected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangency {
    pub lo: f64,
    pub hi: f64,
    pub kind: ZeroKind,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ZeroScan {
    /// Sorted ascending.
    pub brackets: Vec<ZeroBracket>,
    pub tangencies: Vec<Tangency>,
}

impl ZeroScan {
    pub fn witnesses(&self) -> impl Iterator<Item = f64> + '_ {
        self.brackets.iter().map(|b| b.witness)
    }
}

/// Samples `kind` on a uniform grid over `[lo, hi]` and bisects every sign
/// change down to [`DEFAULT_BRACKET_TOL`].
pub fn scan_zeros(kind: ZeroKind, lo: f64, hi: f64, step: f64) -> Result<ZeroScan> {
    scan_zeros_with_tol(kind, lo, hi, step, DEFAULT_BRACKET_TOL)
}

pub fn scan_zeros_with_tol(
    kind: ZeroKind,
    lo: f64,
    hi: f64,
    step: f64,
    bracket_tol: f64,
) -> Result<ZeroScan> {
    finite("lo", lo)?;
    finite("hi", hi)?;
    finite("step", step)?;
    finite("bracket_tol", bracket_tol)?;
    if lo >= hi {
        return Err(Error::InvalidArgument {
            name: "window",
            reason: "lo must be below hi",
        });
    }
    if step <= 0.0 || bracket_tol <= 0.0 {
        return Err(Error::InvalidArgument {
            name: "step",
            reason: "step and bracket tolerance must be positive",
        });
    }

    let cells = ((hi - lo) / step).ceil() as usize;
    let xs: Vec<f64> = (0..=cells).map(|i| (lo + i as f64 * step).min(hi)).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| kind.eval(x)).collect();

    let mut scan = ZeroScan::default();
    let f = |x: f64| kind.eval(x);

    for i in 0..xs.len() {
        if vs[i] == 0.0 {
            match resolve_exact_zero(&f, xs[i], bracket_tol) {
                Some((a, b)) => scan.brackets.push(bracket(a, b, kind)),
                None => scan.tangencies.push(Tangency {
                    lo: xs[i.saturating_sub(1)],
                    hi: xs[(i + 1).min(xs.len() - 1)],
                    kind,
                }),
            }
            continue;
        }
        if i + 1 < xs.len() && vs[i + 1] != 0.0 && (vs[i] < 0.0) != (vs[i + 1] < 0.0) {
            let (a, b) = bisect(&f, xs[i], vs[i], xs[i + 1], bracket_tol);
            scan.brackets.push(bracket(a, b, kind));
            continue;
        }
        if i > 0 && i + 1 < xs.len() && hides_roots(&xs[i - 1..=i + 1], &vs[i - 1..=i + 1]) {
            scan.tangencies.push(Tangency {
                lo: xs[i - 1],
                hi: xs[i + 1],
                kind,
            });
        }
    }
    scan.brackets
        .sort_by(|p, q| p.witness.partial_cmp(&q.witness).unwrap());
    Ok(scan)
}

fn bracket(lo: f64, hi: f64, kind: ZeroKind) -> ZeroBracket {
    ZeroBracket {
        lo,
        hi,
        witness: 0.5 * (lo + hi),
        kind,
    }
}

/// Bisection keeping `f(lo)` and `f(hi)` of strictly opposite sign.
fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, f_lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let lo_negative = f_lo < 0.0;
    while hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            if let Some(b) = resolve_exact_zero(f, mid, tol) {
                return b;
            }
            // Flat at machine precision; the current bracket is still valid.
            break;
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Turns an exact zero at `x` into a bracket of width `tol / 2` if the
/// function changes sign across it.
fn resolve_exact_zero<F: Fn(f64) -> f64>(f: &F, x: f64, tol: f64) -> Option<(f64, f64)> {
    let delta = 0.25 * tol.max(4.0 * f64::EPSILON * x.abs());
    let (a, b) = (x - delta, x + delta);
    let (fa, fb) = (f(a), f(b));
    (fa != 0.0 && fb != 0.0 && (fa < 0.0) != (fb < 0.0)).then_some((a, b))
}

/// Three same-signed samples where `|f|` has a local minimum and the
/// interpolating parabola reaches zero: a double root or two roots inside
/// one step.
fn hides_roots(xs: &[f64], vs: &[f64]) -> bool {
    let (v0, v1, v2) = (vs[0], vs[1], vs[2]);
    let same_sign = (v0 < 0.0) == (v1 < 0.0) && (v1 < 0.0) == (v2 < 0.0);
    if !same_sign || !(v1.abs() < v0.abs() && v1.abs() < v2.abs()) {
        return false;
    }
    // Newton divided differences; xs need not be equally spaced.
    let d01 = (v1 - v0) / (xs[1] - xs[0]);
    let d12 = (v2 - v1) / (xs[2] - xs[1]);
    let curvature = (d12 - d01) / (xs[2] - xs[0]);
    if curvature == 0.0 {
        return false;
    }
    // p(x) = v1 + slope (x - x1) + curvature (x - x1)^2
    let slope = d01 + curvature * (xs[1] - xs[0]);
    let extremum = v1 - slope * slope / (4.0 * curvature);
    let slack = 1e-8 * v0.abs().max(v2.abs());
    if v1 > 0.0 {
        extremum <= slack
    } else {
        extremum >= -slack
    }
}

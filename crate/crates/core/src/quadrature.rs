//! Quadrature rules and the `L²(H̄)` pairing.
//!
//! The pairing `∫_0^π ∫_C f ḡ dz dt` is discretized by the trapezoid rule in
//! `t` and in the polar angle (both periodic, so spectrally accurate for the
//! trigonometric-polynomial parts of the basis) and Gauss–Legendre in the
//! radius on `[0, radial_cutoff]`, where the Gaussian factor has decayed.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{finite, Error, Result};
use crate::group::HeisenbergPoint;

/// Node counts for [`inner_product`] and the geodesic rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub s_nodes: usize,
    pub t_nodes: usize,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub radial_cutoff: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            s_nodes: 256,
            t_nodes: 256,
            radial_nodes: 120,
            angular_nodes: 256,
            radial_cutoff: 8.0,
        }
    }
}

impl QuadratureSpec {
    /// Default node counts with the cutoff `8/√(min |n|)` for the smallest
    /// central frequency present, whose Gaussian decays slowest.
    pub fn for_min_frequency(min_abs_n: u64) -> Self {
        QuadratureSpec {
            radial_cutoff: 8.0 / (min_abs_n.max(1) as f64).sqrt(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [self.s_nodes, self.t_nodes, self.radial_nodes, self.angular_nodes];
        if counts.iter().any(|&c| c < 4) {
            return Err(Error::InvalidArgument {
                name: "quadrature",
                reason: "every node count must be at least 4",
            });
        }
        finite("radial_cutoff", self.radial_cutoff)?;
        if self.radial_cutoff <= 0.0 {
            return Err(Error::InvalidArgument {
                name: "radial_cutoff",
                reason: "must be positive",
            });
        }
        Ok(())
    }

    /// Number of points in the `(t, θ, ρ)` product grid.
    pub fn grid_len(&self) -> usize {
        self.t_nodes * self.angular_nodes * self.radial_nodes
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton's method on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of [`inner_product`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerProduct {
    pub value: Complex64,
    /// Share of `∫|f||g|` carried by the outermost radial node; large values
    /// mean `radial_cutoff` truncates the integrand.
    pub outer_shell: f64,
}

impl InnerProduct {
    pub const TRUNCATION_THRESHOLD: f64 = 1e-12;

    pub fn truncation_suspect(&self) -> bool {
        self.outer_shell > Self::TRUNCATION_THRESHOLD
    }
}

/// The `(t, θ, ρ)` product grid with weights that include the Jacobian `ρ`.
#[derive(Debug, Clone)]
pub struct PairingGrid {
    pub points: Vec<HeisenbergPoint>,
    pub weights: Vec<f64>,
    /// `true` for points on the outermost radial node.
    pub outer: Vec<bool>,
}

impl PairingGrid {
    pub fn new(q: &QuadratureSpec) -> Result<Self> {
        q.validate()?;
        let (gl_x, gl_w) = gauss_legendre(q.radial_nodes);
        let half = 0.5 * q.radial_cutoff;
        let wt = PI / q.t_nodes as f64;
        let wa = 2.0 * PI / q.angular_nodes as f64;
        let outermost = gl_x.len() - 1;
        let len = q.grid_len();
        let mut grid = PairingGrid {
            points: Vec::with_capacity(len),
            weights: Vec::with_capacity(len),
            outer: Vec::with_capacity(len),
        };
        for it in 0..q.t_nodes {
            let t = it as f64 * wt;
            for ia in 0..q.angular_nodes {
                let theta = ia as f64 * wa;
                for (ir, (&x, &w)) in gl_x.iter().zip(&gl_w).enumerate() {
                    let rho = half * (x + 1.0);
                    grid.points
                        .push(HeisenbergPoint::new(Complex64::from_polar(rho, theta), t));
                    grid.weights.push(wt * wa * half * w * rho);
                    grid.outer.push(ir == outermost);
                }
            }
        }
        Ok(grid)
    }

    pub fn sample<F: Fn(HeisenbergPoint) -> Complex64>(&self, f: F) -> Vec<Complex64> {
        self.points.iter().map(|&p| f(p)).collect()
    }

    /// Pairs two sampled functions on this grid.
    pub fn pair(&self, f: &[Complex64], g: &[Complex64]) -> InnerProduct {
        let mut value = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        let mut outer_mass = 0.0;
        for i in 0..self.points.len() {
            let w = self.weights[i];
            value += f[i] * g[i].conj() * w;
            let m = f[i].norm() * g[i].norm() * w;
            mass += m;
            if self.outer[i] {
                outer_mass += m;
            }
        }
        let outer_shell = if mass > 0.0 { outer_mass / mass } else { 0.0 };
        InnerProduct { value, outer_shell }
    }
}

/// `⟨f, g⟩ = ∫_0^π ∫_C f ḡ dz dt`.
pub fn inner_product<F, G>(f: F, g: G, q: &QuadratureSpec) -> Result<InnerProduct>
where
    F: Fn(HeisenbergPoint) -> Complex64,
    G: Fn(HeisenbergPoint) -> Complex64,
{
    let grid = PairingGrid::new(q)?;
    let fs = grid.sample(f);
    let gs = grid.sample(g);
    Ok(grid.pair(&fs, &gs))
}

/// Gram matrix `G[a][b] = ⟨f_a, f_b⟩`; each function is sampled once.
pub fn gram_matrix<F>(functions: &[F], q: &QuadratureSpec) -> Result<Vec<Vec<InnerProduct>>>
where
    F: Fn(HeisenbergPoint) -> Complex64,
{
    let grid = PairingGrid::new(q)?;
    let samples: Vec<Vec<Complex64>> = functions.iter().map(|f| grid.sample(f)).collect();
    Ok(samples
        .iter()
        .map(|fa| samples.iter().map(|fb| grid.pair(fa, fb)).collect())
        .collect())
}

/// Periodic trapezoid rule `(L/N) Σ f(iL/N)` over one period of length `L`.
pub fn periodic_trapezoid<F: FnMut(f64) -> Complex64>(period: f64, nodes: usize, mut f: F) -> Complex64 {
    let h = period / nodes as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..nodes {
        sum += f(i as f64 * h);
    }
    sum * h
}

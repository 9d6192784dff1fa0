//! Entry functions `M_{jk}^h` of the Schrödinger representations and the
//! orthonormal basis `ψ_{jk}^n = (√|n|/π) M_{jk}^n` of `⁰L²(H̄)`.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{finite, Error, Result};
use crate::group::HeisenbergPoint;
use crate::special::{laguerre, ln_factorial};

/// Index `(n, j, k)` of `ψ_{jk}^n`; `n ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    n: i64,
    j: u64,
    k: u64,
}

impl ModeIndex {
    pub fn new(n: i64, j: u64, k: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument {
                name: "n",
                reason: "central frequency must be nonzero",
            });
        }
        Ok(ModeIndex { n, j, k })
    }

    /// Central frequency.
    pub fn n(&self) -> i64 {
        self.n
    }

    /// Left Laguerre index.
    pub fn j(&self) -> u64 {
        self.j
    }

    /// Right Laguerre index.
    pub fn k(&self) -> u64 {
        self.k
    }

    pub(crate) fn with_j(self, j: u64) -> Self {
        ModeIndex { j, ..self }
    }
}

/// `√(p!/q!)`.
pub(crate) fn sqrt_factorial_ratio(p: u64, q: u64) -> f64 {
    (0.5 * (ln_factorial(p) - ln_factorial(q))).exp()
}

/// Branch `j ≥ k`: `√(k!/j!) (√h z)^{j−k} L_k^{(j−k)}(h|z|²)`, without the
/// Gaussian and central factors.
fn upper_branch(h: f64, j: u64, k: u64, z: Complex64) -> Complex64 {
    let d = j - k;
    let a = h * z.norm_sqr();
    (z * h.sqrt()).powu(d as u32) * (sqrt_factorial_ratio(k, j) * laguerre(k as usize, d as f64, a))
}

/// Branch `j ≤ k`: `√(j!/k!) (−√h z̄)^{k−j} L_j^{(k−j)}(h|z|²)`.
fn lower_branch(h: f64, j: u64, k: u64, z: Complex64) -> Complex64 {
    let d = k - j;
    let a = h * z.norm_sqr();
    (-z.conj() * h.sqrt()).powu(d as u32) * (sqrt_factorial_ratio(j, k) * laguerre(j as usize, d as f64, a))
}

/// `M_{jk}^h(z, t)` for any real `h ≠ 0`, without argument checks. Negative
/// `h` goes through `M_{jk}^{−h}(z, t) = M_{jk}^{h}(z̄, −t)`.
pub(crate) fn entry(h: f64, j: u64, k: u64, z: Complex64, t: f64) -> Complex64 {
    if h < 0.0 {
        return entry(-h, j, k, z.conj(), -t);
    }
    let polynomial = if j >= k {
        upper_branch(h, j, k, z)
    } else {
        lower_branch(h, j, k, z)
    };
    let gauss = (-0.5 * h * z.norm_sqr()).exp();
    polynomial * Complex64::from_polar(gauss, 2.0 * h * t)
}

/// The matrix coefficient `M_{jk}^h` at `p`.
pub fn entry_function(h: f64, j: u64, k: u64, p: HeisenbergPoint) -> Result<Complex64> {
    finite("h", h)?;
    if h == 0.0 {
        return Err(Error::InvalidArgument {
            name: "h",
            reason: "must be nonzero",
        });
    }
    Ok(entry(h, j, k, p.z(), p.t()))
}

/// `ψ_{jk}^n(p) = (√|n|/π) M_{jk}^n(p)`. π-periodic in `t`.
pub fn basis_function(m: ModeIndex, p: HeisenbergPoint) -> Complex64 {
    basis_at(m, p.z(), p.t())
}

pub(crate) fn basis_at(m: ModeIndex, z: Complex64, t: f64) -> Complex64 {
    let n = m.n as f64;
    entry(n, m.j, m.k, z, t) * (n.abs().sqrt() / PI)
}

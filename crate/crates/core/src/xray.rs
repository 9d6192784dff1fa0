//! The X-ray transform `I_r`, its adjoint, normal operator and singular
//! value decomposition.
//!
//! [`xray_quadrature`] integrates a pointwise function along a translated
//! helix and is the reference for everything else here. The spectral routines
//! act on [`SignalDecomposition`]s:
//!
//! * a plane wave `e^{i z·ξ}` is multiplied by `2π√(ab) J₀(√r|ξ|)`;
//! * `ψ_{jk}^n` goes to `c · ψ_{j+r|n|, k}^n` with
//!   `c = 2π√(ab) M^n_{j, j+r|n|}(√r, 0)` when `rn ∈ Z`, and to zero otherwise.
//!
//! For `m = r|n|` the coefficient is
//! `2π√(ab) √(j!/(j+m)!) (−1)^m m^{m/2} e^{−m/2} L_j^{(m)}(m)`, so its phase is
//! `(−1)^m sgn(l_j(m))` and it vanishes exactly at zeros of `l_j` such as
//! `l_2(2) = 0`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::basis::{basis_at, entry, sqrt_factorial_ratio, ModeIndex};
use crate::error::{Error, Result};
use crate::group::{geodesic, HeisenbergPoint, RationalMomentum};
use crate::quadrature::periodic_trapezoid;
use crate::special::{bessel_j0, laguerre};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Plane wave `amp · e^{i z·ξ}`, constant in `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarAtom {
    pub xi: [f64; 2],
    pub amp: Complex64,
}

impl PlanarAtom {
    pub fn new(xi: [f64; 2], amp: Complex64) -> Self {
        PlanarAtom { xi, amp }
    }

    pub fn frequency(&self) -> f64 {
        self.xi[0].hypot(self.xi[1])
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.amp * Complex64::from_polar(1.0, z.re * self.xi[0] + z.im * self.xi[1])
    }
}

/// A signal split along `L²(C) ⊕ ⁰L²(H̄)`: plane-wave atoms plus
/// coefficients on the basis `ψ_{jk}^n`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SignalDecomposition {
    planar: Vec<PlanarAtom>,
    modes: BTreeMap<ModeIndex, Complex64>,
}

impl SignalDecomposition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(mode: ModeIndex) -> Self {
        let mut s = Self::new();
        s.add_mode(mode, Complex64::new(1.0, 0.0));
        s
    }

    pub fn planar(&self) -> &[PlanarAtom] {
        &self.planar
    }

    pub fn modes(&self) -> &BTreeMap<ModeIndex, Complex64> {
        &self.modes
    }

    pub fn mode(&self, m: &ModeIndex) -> Complex64 {
        self.modes.get(m).copied().unwrap_or(ZERO)
    }

    pub fn is_empty(&self) -> bool {
        self.planar.is_empty() && self.modes.is_empty()
    }

    /// Adds an atom, merging with an existing atom of the same `ξ`.
    pub fn add_planar(&mut self, atom: PlanarAtom) {
        match self.planar.iter_mut().find(|a| a.xi == atom.xi) {
            Some(existing) => existing.amp += atom.amp,
            None => self.planar.push(atom),
        }
    }

    /// Adds `amp` to the coefficient of `mode`.
    pub fn add_mode(&mut self, mode: ModeIndex, amp: Complex64) {
        *self.modes.entry(mode).or_insert(ZERO) += amp;
    }

    pub fn planar_atom(&self, xi: [f64; 2]) -> Option<&PlanarAtom> {
        self.planar.iter().find(|a| a.xi == xi)
    }

    /// Pointwise value `Σ atoms + Σ amp · ψ(p)`.
    pub fn evaluate(&self, p: HeisenbergPoint) -> Complex64 {
        let planar: Complex64 = self.planar.iter().map(|a| a.eval(p.z())).sum();
        let modes: Complex64 = self
            .modes
            .iter()
            .map(|(&m, &amp)| amp * basis_at(m, p.z(), p.t()))
            .sum();
        planar + modes
    }

    /// `⟨self, other⟩` on the mode component, in coefficient arithmetic.
    pub fn mode_inner(&self, other: &Self) -> Complex64 {
        self.modes.iter().map(|(m, &a)| a * other.mode(m).conj()).sum()
    }

    pub fn mode_norm(&self) -> f64 {
        self.modes.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest coefficient difference over both components. Atoms are
    /// matched by `ξ`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (m, &a) in &self.modes {
            worst = worst.max((a - other.mode(m)).norm());
        }
        for (m, &b) in &other.modes {
            if !self.modes.contains_key(m) {
                worst = worst.max(b.norm());
            }
        }
        let amp_of = |s: &Self, xi| s.planar_atom(xi).map_or(ZERO, |a| a.amp);
        for a in &self.planar {
            worst = worst.max((a.amp - amp_of(other, a.xi)).norm());
        }
        for b in &other.planar {
            if self.planar_atom(b.xi).is_none() {
                worst = worst.max(b.amp.norm());
            }
        }
        worst
    }
}

/// `2π√(ab) J₀(√r |ξ|)`.
pub fn planar_multiplier(xi: [f64; 2], r: RationalMomentum) -> f64 {
    r.period() * bessel_j0(r.sqrt_r() * xi[0].hypot(xi[1]))
}

/// The coefficient taking `ψ_{jk}^n` to `ψ_{j+r|n|, k}^n` under `I_r`:
/// `2π√(ab) M^n_{j, j+r|n|}(√r, 0)`, or zero when `rn ∉ Z` or `n = 0`.
pub fn singular_coefficient(n: i64, j: u64, r: RationalMomentum) -> Complex64 {
    if n == 0 {
        return ZERO;
    }
    match r.shift(n) {
        Some(m) => entry(n as f64, j, j + m, Complex64::new(r.sqrt_r(), 0.0), 0.0) * r.period(),
        None => ZERO,
    }
}

/// The closed form `2π√(ab) √(j!/(j+m)!) (−1)^m m^{m/2} e^{−m/2} L_j^{(m)}(m)`
/// of [`singular_coefficient`], for `m = r|n|`.
pub fn singular_coefficient_closed_form(m: u64, j: u64, r: RationalMomentum) -> f64 {
    let mf = m as f64;
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    r.period()
        * sqrt_factorial_ratio(j, j + m)
        * sign
        * (0.5 * mf * mf.ln() - 0.5 * mf).exp()
        * laguerre(j as usize, mf, mf)
}

/// Modulus of the coefficient as printed with the factor `e^{−(i+1)πm/2}`,
/// i.e. `2π√(j!/(j+m)!) m^{m/2} e^{−πm/2} |L_j^{(m)}(m)|` (with `√(ab) = 1`).
pub fn printed_coefficient_modulus(m: u64, j: u64) -> f64 {
    let mf = m as f64;
    2.0 * PI
        * sqrt_factorial_ratio(j, j + m)
        * (0.5 * mf * mf.ln() - 0.5 * PI * mf).exp()
        * laguerre(j as usize, mf, mf).abs()
}

/// `∫_0^{2π√(ab)} f(p · γ_r(s)) ds` by the periodic trapezoid rule.
pub fn xray_quadrature<F>(f: F, r: RationalMomentum, p: HeisenbergPoint, s_nodes: usize) -> Result<Complex64>
where
    F: Fn(HeisenbergPoint) -> Complex64,
{
    if s_nodes < 16 {
        return Err(Error::InvalidArgument {
            name: "s_nodes",
            reason: "need at least 16 nodes along the geodesic",
        });
    }
    Ok(periodic_trapezoid(r.period(), s_nodes, |s| f(p * geodesic(r, s))))
}

/// `I_r` on a decomposed signal.
pub fn forward_spectral(x: &SignalDecomposition, r: RationalMomentum) -> SignalDecomposition {
    let mut out = SignalDecomposition::new();
    for atom in &x.planar {
        let mu = planar_multiplier(atom.xi, r);
        if mu != 0.0 {
            out.add_planar(PlanarAtom::new(atom.xi, atom.amp * mu));
        }
    }
    for (&mode, &amp) in &x.modes {
        let Some(m) = r.shift(mode.n()) else { continue };
        let c = singular_coefficient(mode.n(), mode.j(), r);
        if c != ZERO {
            out.add_mode(mode.with_j(mode.j() + m), amp * c);
        }
    }
    out
}

/// `I_r^*`: `ψ_{jk}^n` goes to `conj(c(n, j − r|n|)) ψ_{j−r|n|, k}^n`, and to
/// zero when `j < r|n|` or `rn ∉ Z`.
pub fn adjoint_spectral(y: &SignalDecomposition, r: RationalMomentum) -> SignalDecomposition {
    let mut out = SignalDecomposition::new();
    for atom in &y.planar {
        let mu = planar_multiplier(atom.xi, r);
        if mu != 0.0 {
            out.add_planar(PlanarAtom::new(atom.xi, atom.amp * mu));
        }
    }
    for (&mode, &amp) in &y.modes {
        let Some(m) = r.shift(mode.n()) else { continue };
        let Some(source_j) = mode.j().checked_sub(m) else {
            continue;
        };
        let c = singular_coefficient(mode.n(), source_j, r);
        if c != ZERO {
            out.add_mode(mode.with_j(source_j), amp * c.conj());
        }
    }
    out
}

/// `N_r = I_r^* I_r`, diagonal with eigenvalues `s(n, j, r)²` on modes and
/// `(2π√(ab) J₀(√r|ξ|))²` on atoms.
pub fn normal_spectral(x: &SignalDecomposition, r: RationalMomentum) -> SignalDecomposition {
    let mut out = SignalDecomposition::new();
    for atom in &x.planar {
        let mu = planar_multiplier(atom.xi, r);
        if mu != 0.0 {
            out.add_planar(PlanarAtom::new(atom.xi, atom.amp * (mu * mu)));
        }
    }
    for (&mode, &amp) in &x.modes {
        let s2 = singular_coefficient(mode.n(), mode.j(), r).norm_sqr();
        if s2 != 0.0 {
            out.add_mode(mode, amp * s2);
        }
    }
    out
}

/// One factor of `I_r = U_r ∘ D_r` on the modes with source indices `(n, j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularSystem {
    pub n: i64,
    pub j: u64,
    pub r: RationalMomentum,
    /// `s(n, j, r) ≥ 0`.
    pub s: f64,
    /// Unimodular factor of `U_r`; `1` when `s = 0`.
    pub phase: Complex64,
    /// `j + r|n|`, or `None` when `rn ∉ Z`.
    pub target_j: Option<u64>,
}

pub fn svd_factors(n: i64, j: u64, r: RationalMomentum) -> SingularSystem {
    let c = singular_coefficient(n, j, r);
    let s = c.norm();
    let phase = if s > 0.0 { c / s } else { Complex64::new(1.0, 0.0) };
    SingularSystem {
        n,
        j,
        r,
        s,
        phase,
        target_j: r.shift(n).map(|m| j + m),
    }
}

/// `D_r`: scales each mode by its singular value, dropping the kernel.
pub fn apply_singular_values(x: &SignalDecomposition, r: RationalMomentum) -> SignalDecomposition {
    let mut out = SignalDecomposition::new();
    for (&mode, &amp) in &x.modes {
        let s = svd_factors(mode.n(), mode.j(), r).s;
        if s > 0.0 {
            out.add_mode(mode, amp * s);
        }
    }
    out
}

/// `U_r`: the partial isometry moving `ψ_{jk}^n` to `phase · ψ_{j+r|n|, k}^n`
/// on modes with `s > 0`.
pub fn apply_partial_isometry(x: &SignalDecomposition, r: RationalMomentum) -> SignalDecomposition {
    let mut out = SignalDecomposition::new();
    for (&mode, &amp) in &x.modes {
        let f = svd_factors(mode.n(), mode.j(), r);
        if let (true, Some(target)) = (f.s > 0.0, f.target_j) {
            out.add_mode(mode.with_j(target), amp * f.phase);
        }
    }
    out
}

/// Eigenvalue `2|n|(1 + 2j)` of the left sublaplacian on `ψ_{jk}^n`.
pub fn sublaplacian_eigenvalue(n: i64, j: u64) -> f64 {
    2.0 * n.unsigned_abs() as f64 * (1.0 + 2.0 * j as f64)
}

/// Eigenvalue `2|n|(1 + 2(j − |n| r))` of `□_r = 𝓛 + rT²` on `ψ_{jk}^n`.
pub fn box_eigenvalue(n: i64, j: u64, r: RationalMomentum) -> f64 {
    let abs_n = n.unsigned_abs() as f64;
    2.0 * abs_n * (1.0 + 2.0 * (j as f64 - abs_n * r.value()))
}

/// Checks `𝓛`-eigenvalue at the source equals the `□_r`-eigenvalue at the
/// target index, in exact integer arithmetic scaled by `b`. Modes outside the
/// `δ_Z` support hold trivially.
pub fn intertwining_holds(n: i64, j: u64, r: RationalMomentum) -> bool {
    let Some(m) = r.shift(n) else { return true };
    let (a, b) = (r.a() as i128, r.b() as i128);
    let abs_n = n.unsigned_abs() as i128;
    let target = (j + m) as i128;
    let source_side = b * 2 * abs_n * (1 + 2 * j as i128);
    let target_side = 2 * abs_n * (b + 2 * (b * target - a * abs_n));
    source_side == target_side
}

/// One row of the constant audit, at `r = 1` and `n = m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditRow {
    pub m: u64,
    pub j: u64,
    /// `|singular_coefficient(m, j, 1)|`.
    pub oracle_modulus: f64,
    /// The same modulus extracted from helix quadrature of `ψ_{j, j+m}^m` at
    /// the identity.
    pub quadrature_modulus: f64,
    pub printed_modulus: f64,
    /// `printed / oracle`; `None` on the kernel where both vanish.
    pub ratio: Option<f64>,
}

/// Compares the coefficient the transform actually produces with the
/// printed formula containing `e^{−(i+1)πm/2}`, for `1 ≤ m ≤ m_max` and
/// `j ≤ j_max`.
pub fn constant_audit(m_max: u64, j_max: u64, s_nodes: usize) -> Result<Vec<AuditRow>> {
    let r = RationalMomentum::ONE;
    let mut rows = Vec::new();
    for m in 1..=m_max {
        for j in 0..=j_max {
            let n = m as i64;
            let oracle_modulus = singular_coefficient(n, j, r).norm();
            // I_r ψ_{j, j+m}^m (0) = c · ψ_{j+m, j+m}^m(0) = c √m / π.
            let mode = ModeIndex::new(n, j, j + m)?;
            let q = xray_quadrature(
                |p| basis_at(mode, p.z(), p.t()),
                r,
                HeisenbergPoint::IDENTITY,
                s_nodes,
            )?;
            let quadrature_modulus = q.norm() * PI / (m as f64).sqrt();
            let printed_modulus = printed_coefficient_modulus(m, j);
            let ratio = (oracle_modulus > 1e-14).then(|| printed_modulus / oracle_modulus);
            rows.push(AuditRow {
                m,
                j,
                oracle_modulus,
                quadrature_modulus,
                printed_modulus,
                ratio,
            });
        }
    }
    Ok(rows)
}

/// One comparison of the spectral image of a basis mode against helix
/// quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample {
    pub mode: ModeIndex,
    pub r: RationalMomentum,
    pub point: HeisenbergPoint,
    pub spectral: Complex64,
    pub quadrature: Complex64,
}

impl OracleSample {
    pub fn error(&self) -> f64 {
        (self.spectral - self.quadrature).norm()
    }

    /// `|Δ| ≤ max(rel · |quadrature|, abs)`.
    pub fn passes(&self, rel: f64, abs: f64) -> bool {
        self.error() <= (rel * self.quadrature.norm()).max(abs)
    }
}

/// Evaluates `forward_spectral(ψ_mode)` and the helix quadrature of `ψ_mode`
/// at every point.
pub fn oracle_samples(
    mode: ModeIndex,
    r: RationalMomentum,
    points: &[HeisenbergPoint],
    s_nodes: usize,
) -> Result<Vec<OracleSample>> {
    let image = forward_spectral(&SignalDecomposition::unit(mode), r);
    points
        .iter()
        .map(|&p| {
            let quadrature = xray_quadrature(|q| basis_at(mode, q.z(), q.t()), r, p, s_nodes)?;
            Ok(OracleSample {
                mode,
                r,
                point: p,
                spectral: image.evaluate(p),
                quadrature,
            })
        })
        .collect()
}

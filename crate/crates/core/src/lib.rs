//! The sub-Riemannian X-ray transform on the reduced Heisenberg group.
//!
//! The reduced Heisenberg group is `C × (R/πZ)` with the group law
//! `(z, t)(w, s) = (z + w, t + s + ½ Im(z̄ w))`. For a rational momentum
//! `r = a/b` the helix `γ_r(s) = (√r e^{is/√r}, ½√r s)` closes after
//! `2π√(ab)`, and `I_r f(p) = ∫ f(p · γ_r(s)) ds` integrates `f` over every
//! left translate of that helix.
//!
//! `I_r` splits along `L²(C) ⊕ ⁰L²(H̄)`:
//!
//! * on the planar part it multiplies each plane wave `e^{i z·ξ}` by
//!   `2π√(ab) J₀(√r |ξ|)`;
//! * on the mean-zero part it maps the orthonormal basis `ψ_{jk}^n` to a
//!   multiple of `ψ_{j + r|n|, k}^n`, and annihilates the mode when `rn` is
//!   not an integer.
//!
//! [`xray::xray_quadrature`] integrates along the helix directly and is the
//! ground truth every spectral formula in [`xray`] is tested against.
//!
//! The crate is `no_std` (it needs `alloc`). File formats and the command
//! line live in the `heisenberg-xray-cli` crate.

#![no_std]

extern crate alloc;

pub mod basis;
pub mod error;
pub mod fan;
pub mod group;
pub mod inversion;
pub mod quadrature;
pub mod special;
pub mod xray;

pub use num_complex::Complex64;

pub use basis::{basis_function, entry_function, ModeIndex};
pub use error::{Error, Result};
pub use fan::{fan_action, fan_points, FanArrow, FanPoint};
pub use group::{geodesic, HeisenbergPoint, RationalMomentum};
pub use inversion::{
    reconstruct, two_radius_check, Measurement, ModeBounds, ReconstructionResult, TwoRadiusReport,
    TwoRadiusScan, Verdict,
};
pub use quadrature::{inner_product, InnerProduct, QuadratureSpec};
pub use special::{bessel_j0, diagonal_laguerre, laguerre_eval, scan_zeros, ZeroBracket, ZeroKind, ZeroScan};
pub use xray::{
    adjoint_spectral, forward_spectral, normal_spectral, singular_coefficient, svd_factors, xray_quadrature,
    PlanarAtom, SignalDecomposition, SingularSystem,
};

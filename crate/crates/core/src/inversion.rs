//! Two-radius compatibility checks and reconstruction from transforms at one
//! or two momenta.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::basis::ModeIndex;
use crate::error::{finite, Error, Result};
use crate::group::{lcm, RationalMomentum};
use crate::special::{scan_zeros, Tangency, ZeroKind};
use crate::xray::{planar_multiplier, singular_coefficient, PlanarAtom, SignalDecomposition};

/// Coefficients at or below this modulus count as zero.
pub const KERNEL_THRESHOLD: f64 = 1e-14;

/// Bounds of a two-radius scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoRadiusScan {
    pub j_max: usize,
    pub n_max: u64,
    /// Zeros are scanned on `[0, zero_window]`.
    pub zero_window: f64,
    /// Relative tolerance for "is a ratio of zeros".
    pub tol: f64,
    /// Sampling step of the zero scans.
    pub step: f64,
}

impl Default for TwoRadiusScan {
    fn default() -> Self {
        TwoRadiusScan {
            j_max: 20,
            n_max: 100,
            zero_window: 60.0,
            tol: 1e-8,
            step: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// No obstruction was found within the scan bounds. Nothing is claimed
    /// beyond them.
    InjectiveOnScan,
    Obstructed,
}

/// Zeros `zero1`, `zero2` of the same `l_j` with `zero1 / zero2 ≈ r1 / r2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreRatioHit {
    pub j: usize,
    pub zero1: f64,
    pub zero2: f64,
}

/// Zeros of `J₀` with `zero1 / zero2 ≈ √(r1 / r2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselRatioHit {
    pub zero1: f64,
    pub zero2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoRadiusReport {
    pub r1: RationalMomentum,
    pub r2: RationalMomentum,
    pub scan: TwoRadiusScan,
    pub laguerre_ratio_hits: Vec<LaguerreRatioHit>,
    pub bessel_ratio_hits: Vec<BesselRatioHit>,
    /// `lcm(b1, b2)`.
    pub gap_modulus: u64,
    /// Residues `n mod gap_modulus` (taken in `[0, gap_modulus)`) for which
    /// neither `r1 n` nor `r2 n` is an integer, restricted to classes that
    /// meet `1 ≤ |n| ≤ n_max`. Both transforms annihilate these modes.
    pub delta_z_gap: Vec<u64>,
    /// Suspected double roots seen by the scans; informational.
    pub tangencies: Vec<Tangency>,
    pub verdict: Verdict,
}

fn is_ratio(x: f64, y: f64, target: f64, tol: f64) -> bool {
    y != 0.0 && ((x / y) - target).abs() <= tol * target
}

/// Ordered pairs `(x, y)` from `zeros` with `x / y` within relative `tol` of
/// `target`.
fn pairs_with_ratio(zeros: &[f64], target: f64, tol: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    zeros.iter().flat_map(move |&x| {
        zeros
            .iter()
            .filter(move |&&y| is_ratio(x, y, target, tol))
            .map(move |&y| (x, y))
    })
}

/// Looks for the obstructions to recovering a signal from `I_{r1}` and
/// `I_{r2}`: coincident zero ratios of diagonal Laguerre functions or of
/// `J₀`, and central frequencies that both momenta miss.
pub fn two_radius_check(
    r1: RationalMomentum,
    r2: RationalMomentum,
    scan: &TwoRadiusScan,
) -> Result<TwoRadiusReport> {
    if r1 == r2 {
        return Err(Error::InvalidArgument {
            name: "r2",
            reason: "the two momenta must differ",
        });
    }
    finite("zero_window", scan.zero_window)?;
    finite("tol", scan.tol)?;
    if scan.zero_window <= 0.0 || scan.n_max == 0 || scan.tol < 0.0 {
        return Err(Error::InvalidArgument {
            name: "scan",
            reason: "window and n_max must be positive, tol nonnegative",
        });
    }

    let ratio = r1.value() / r2.value();
    let mut tangencies = Vec::new();

    let mut laguerre_ratio_hits = Vec::new();
    for j in 2..=scan.j_max {
        let zeros = scan_zeros(ZeroKind::DiagonalLaguerre(j), 0.0, scan.zero_window, scan.step)?;
        tangencies.extend_from_slice(&zeros.tangencies);
        let w: Vec<f64> = zeros.witnesses().filter(|&x| x > 0.0).collect();
        laguerre_ratio_hits.extend(
            pairs_with_ratio(&w, ratio, scan.tol).map(|(zero1, zero2)| LaguerreRatioHit { j, zero1, zero2 }),
        );
    }

    let zeros = scan_zeros(ZeroKind::BesselJ0, 0.0, scan.zero_window, scan.step)?;
    tangencies.extend_from_slice(&zeros.tangencies);
    let w: Vec<f64> = zeros.witnesses().collect();
    let bessel_ratio_hits: Vec<BesselRatioHit> = pairs_with_ratio(&w, ratio.sqrt(), scan.tol)
        .map(|(zero1, zero2)| BesselRatioHit { zero1, zero2 })
        .collect();

    let gap_modulus = lcm(r1.b(), r2.b());
    let delta_z_gap: Vec<u64> = (0..gap_modulus)
        .filter(|&res| res % r1.b() != 0 && res % r2.b() != 0)
        .filter(|&res| {
            // Class meets 1 ≤ |n| ≤ n_max through n = res or n = res - L.
            (res != 0 && res <= scan.n_max) || (gap_modulus - res <= scan.n_max)
        })
        .collect();

    let verdict = if laguerre_ratio_hits.is_empty() && bessel_ratio_hits.is_empty() && delta_z_gap.is_empty()
    {
        Verdict::InjectiveOnScan
    } else {
        Verdict::Obstructed
    };
    Ok(TwoRadiusReport {
        r1,
        r2,
        scan: *scan,
        laguerre_ratio_hits,
        bessel_ratio_hits,
        gap_modulus,
        delta_z_gap,
        tangencies,
        verdict,
    })
}

/// Transform data together with the momentum that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub signal: SignalDecomposition,
    pub r: RationalMomentum,
}

/// Candidate source modes: `1 ≤ |n| ≤ n_max`, `j ≤ j_max`, `k ≤ k_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeBounds {
    pub n_max: u64,
    pub j_max: u64,
    pub k_max: u64,
}

impl ModeBounds {
    pub fn modes(&self) -> impl Iterator<Item = ModeIndex> + '_ {
        let n_max = self.n_max as i64;
        (-n_max..=n_max).filter(|&n| n != 0).flat_map(move |n| {
            (0..=self.j_max).flat_map(move |j| {
                (0..=self.k_max).map(move |k| ModeIndex::new(n, j, k).expect("n is nonzero"))
            })
        })
    }

    pub fn contains(&self, m: &ModeIndex) -> bool {
        m.n().unsigned_abs() <= self.n_max && m.j() <= self.j_max && m.k() <= self.k_max
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub signal: SignalDecomposition,
    /// `1 / max_i |c_i|` over the coefficients used for each recovered mode.
    pub per_mode_condition: BTreeMap<ModeIndex, f64>,
    /// Candidate modes every supplied momentum annihilates.
    pub unresolved: Vec<ModeIndex>,
    /// Frequencies of atoms whose every multiplier vanishes.
    pub unresolved_planar: Vec<[f64; 2]>,
}

impl ReconstructionResult {
    pub fn max_condition(&self) -> f64 {
        self.per_mode_condition.values().copied().fold(0.0, f64::max)
    }
}

/// Per-mode regularized least squares over the supplied measurements:
/// `x = Σ conj(c_i) y_i / (Σ |c_i|² + ridge)`.
///
/// Planar atoms are divided by the larger-magnitude Bessel multiplier among
/// the measurements that contain them, `x = μ y / (μ² + ridge)`.
pub fn reconstruct(
    measurements: &[Measurement],
    bounds: ModeBounds,
    ridge: f64,
) -> Result<ReconstructionResult> {
    if measurements.is_empty() {
        return Err(Error::InvalidArgument {
            name: "measurements",
            reason: "need at least one measurement",
        });
    }
    for (i, a) in measurements.iter().enumerate() {
        if measurements[i + 1..].iter().any(|b| b.r == a.r) {
            return Err(Error::InvalidArgument {
                name: "measurements",
                reason: "momenta must be distinct",
            });
        }
    }
    finite("ridge", ridge)?;
    if ridge < 0.0 {
        return Err(Error::InvalidArgument {
            name: "ridge",
            reason: "must be nonnegative",
        });
    }
    if bounds.n_max == 0 {
        return Err(Error::InvalidArgument {
            name: "n_max",
            reason: "must be at least 1",
        });
    }

    let mut signal = SignalDecomposition::new();
    let mut per_mode_condition = BTreeMap::new();
    let mut unresolved = Vec::new();

    for mode in bounds.modes() {
        let mut numerator = Complex64::new(0.0, 0.0);
        let mut gram = 0.0;
        let mut largest: f64 = 0.0;
        for meas in measurements {
            let c = singular_coefficient(mode.n(), mode.j(), meas.r);
            if c.norm() <= KERNEL_THRESHOLD {
                continue;
            }
            let m = meas
                .r
                .shift(mode.n())
                .expect("nonzero coefficient implies rn in Z");
            let target = ModeIndex::new(mode.n(), mode.j() + m, mode.k())?;
            numerator += c.conj() * meas.signal.mode(&target);
            gram += c.norm_sqr();
            largest = largest.max(c.norm());
        }
        if largest == 0.0 {
            unresolved.push(mode);
            continue;
        }
        let x = numerator / (gram + ridge);
        if x != Complex64::new(0.0, 0.0) {
            signal.add_mode(mode, x);
        }
        per_mode_condition.insert(mode, 1.0 / largest);
    }

    let mut frequencies: Vec<[f64; 2]> = Vec::new();
    for meas in measurements {
        for atom in meas.signal.planar() {
            if !frequencies.contains(&atom.xi) {
                frequencies.push(atom.xi);
            }
        }
    }
    let mut unresolved_planar = Vec::new();
    for xi in frequencies {
        let best = measurements
            .iter()
            .filter_map(|meas| {
                meas.signal
                    .planar_atom(xi)
                    .map(|a| (planar_multiplier(xi, meas.r), a.amp))
            })
            .max_by(|a, b| a.0.abs().total_cmp(&b.0.abs()));
        match best {
            Some((mu, y)) if mu.abs() > KERNEL_THRESHOLD => {
                signal.add_planar(PlanarAtom::new(xi, y * (mu / (mu * mu + ridge))));
            }
            _ => unresolved_planar.push(xi),
        }
    }

    Ok(ReconstructionResult {
        signal,
        per_mode_condition,
        unresolved,
        unresolved_planar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::diagonal_laguerre;
    use crate::xray::forward_spectral;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mom(a: u64, b: u64) -> RationalMomentum {
        RationalMomentum::new(a, b).unwrap()
    }

    fn quick() -> TwoRadiusScan {
        TwoRadiusScan {
            j_max: 6,
            n_max: 30,
            zero_window: 20.0,
            tol: 1e-8,
            step: 0.01,
        }
    }

    #[test]
    fn equal_momenta_rejected() {
        assert!(two_radius_check(mom(1, 1), mom(1, 1), &quick()).is_err());
        assert!(two_radius_check(mom(2, 2), mom(1, 1), &quick()).is_err());
    }

    #[test]
    fn integer_momentum_leaves_no_delta_gap() {
        let report = two_radius_check(mom(1, 1), mom(1, 2), &quick()).unwrap();
        assert!(report.delta_z_gap.is_empty());
        assert_eq!(report.gap_modulus, 2);
    }

    #[test]
    fn coprime_denominators_leave_a_gap() {
        let report = two_radius_check(mom(1, 2), mom(1, 3), &quick()).unwrap();
        assert_eq!(report.gap_modulus, 6);
        assert_eq!(report.delta_z_gap, [1, 5]);
        assert_eq!(report.verdict, Verdict::Obstructed);

        // n_max = 1 still meets both classes, via n = 1 and n = -1.
        let narrow = TwoRadiusScan { n_max: 1, ..quick() };
        let report = two_radius_check(mom(1, 2), mom(1, 3), &narrow).unwrap();
        assert_eq!(report.delta_z_gap, [1, 5]);
    }

    #[test]
    fn ratio_pairing() {
        let zeros = [1.0, 2.0, 3.0, 6.000000001];
        let hits: Vec<_> = pairs_with_ratio(&zeros, 2.0, 1e-8).collect();
        assert_eq!(hits, [(2.0, 1.0), (6.000000001, 3.0)]);
        assert!(pairs_with_ratio(&zeros, 2.0, 1e-12).count() == 1);
        assert!(!is_ratio(3.0, 0.0, 1.4, 1e-8));
    }

    #[test]
    fn reported_hits_satisfy_the_ratio() {
        let scan = TwoRadiusScan {
            j_max: 12,
            zero_window: 40.0,
            tol: 1e-3,
            ..quick()
        };
        let report = two_radius_check(mom(3, 1), mom(1, 1), &scan).unwrap();
        for h in &report.laguerre_ratio_hits {
            assert!((h.zero1 / h.zero2 - 3.0).abs() <= 3e-3);
            assert!(diagonal_laguerre(h.j, h.zero1).unwrap().abs() < 1e-6 * (1.0 + h.zero1).powi(h.j as i32));
        }
        for h in &report.bessel_ratio_hits {
            assert!((h.zero1 / h.zero2 - 3f64.sqrt()).abs() <= 3f64.sqrt() * 1e-3);
        }
        let clean = report.laguerre_ratio_hits.is_empty() && report.bessel_ratio_hits.is_empty();
        assert_eq!(report.verdict == Verdict::InjectiveOnScan, clean);
    }

    fn random_signal(rng: &mut ChaCha8Rng, count: usize) -> SignalDecomposition {
        let mut s = SignalDecomposition::new();
        while s.modes().len() < count {
            let n = rng.gen_range(1..=3) * if rng.gen() { 1 } else { -1 };
            let m = ModeIndex::new(n, rng.gen_range(0..=4), rng.gen_range(0..=2)).unwrap();
            s.add_mode(
                m,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
        s
    }

    const BOUNDS: ModeBounds = ModeBounds {
        n_max: 3,
        j_max: 4,
        k_max: 2,
    };

    #[test]
    fn exact_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..5 {
            let x = random_signal(&mut rng, 8);
            let ms: Vec<Measurement> = [mom(1, 1), mom(1, 2)]
                .into_iter()
                .map(|r| Measurement {
                    signal: forward_spectral(&x, r),
                    r,
                })
                .collect();
            let rec = reconstruct(&ms, BOUNDS, 0.0).unwrap();
            assert!(rec.signal.max_abs_diff(&x) < 1e-8);
            for u in &rec.unresolved {
                assert!(rec.signal.mode(u) == Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn kernel_mode_needs_second_momentum() {
        let mode = ModeIndex::new(2, 2, 0).unwrap();
        let x = SignalDecomposition::unit(mode);
        let one = Measurement {
            signal: forward_spectral(&x, mom(1, 1)),
            r: mom(1, 1),
        };
        let rec = reconstruct(core::slice::from_ref(&one), BOUNDS, 0.0).unwrap();
        assert!(rec.unresolved.contains(&mode));
        assert!(rec.signal.modes().get(&mode).is_none());

        let half = Measurement {
            signal: forward_spectral(&x, mom(1, 2)),
            r: mom(1, 2),
        };
        let rec = reconstruct(&[one, half], BOUNDS, 0.0).unwrap();
        assert!(!rec.unresolved.contains(&mode));
        assert!((rec.signal.mode(&mode) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn unresolved_modes_are_sound() {
        let m = Measurement {
            signal: SignalDecomposition::new(),
            r: mom(1, 1),
        };
        let h = Measurement {
            signal: SignalDecomposition::new(),
            r: mom(1, 2),
        };
        let rec = reconstruct(
            &[m, h],
            ModeBounds {
                n_max: 6,
                j_max: 8,
                k_max: 0,
            },
            0.0,
        )
        .unwrap();
        for u in &rec.unresolved {
            assert!(singular_coefficient(u.n(), u.j(), mom(1, 1)).norm() < KERNEL_THRESHOLD);
            assert!(singular_coefficient(u.n(), u.j(), mom(1, 2)).norm() < KERNEL_THRESHOLD);
        }
    }

    #[test]
    fn planar_atoms_use_the_larger_multiplier() {
        let mut x = SignalDecomposition::new();
        x.add_planar(PlanarAtom::new([1.0, 0.5], Complex64::new(0.3, -0.2)));
        x.add_planar(PlanarAtom::new(
            [0.0, 2.404825557695773],
            Complex64::new(1.0, 0.0),
        ));
        let ms: Vec<Measurement> = [mom(1, 1), mom(1, 2)]
            .into_iter()
            .map(|r| Measurement {
                signal: forward_spectral(&x, r),
                r,
            })
            .collect();
        let rec = reconstruct(&ms, BOUNDS, 0.0).unwrap();
        assert!(rec.signal.max_abs_diff(&x) < 1e-8);
    }

    #[test]
    fn bad_configurations() {
        assert!(reconstruct(&[], BOUNDS, 0.0).is_err());
        let m = Measurement {
            signal: SignalDecomposition::new(),
            r: mom(1, 1),
        };
        assert!(reconstruct(&[m.clone(), m.clone()], BOUNDS, 0.0).is_err());
        assert!(reconstruct(core::slice::from_ref(&m), BOUNDS, -1.0).is_err());
        assert!(reconstruct(core::slice::from_ref(&m), BOUNDS, f64::NAN).is_err());
        let zero = ModeBounds { n_max: 0, ..BOUNDS };
        assert!(reconstruct(core::slice::from_ref(&m), zero, 0.0).is_err());
    }
}

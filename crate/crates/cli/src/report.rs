//! Serializable mirrors of the library's reports.

use heisenberg_xray::fan::{FanArrow, FanPoint};
use heisenberg_xray::inversion::{ReconstructionResult, TwoRadiusReport, Verdict};
use heisenberg_xray::special::{ZeroKind, ZeroScan};
use heisenberg_xray::xray::{AuditRow, SingularSystem};
use heisenberg_xray::{Complex64, HeisenbergPoint, ModeIndex};
use serde::Serialize;

use crate::signal::SignalFile;

#[derive(Debug, Serialize)]
pub struct PointValue {
    /// `[re z, im z, t]`.
    pub at: [f64; 3],
    pub value: [f64; 2],
}

impl PointValue {
    pub fn new(p: HeisenbergPoint, v: Complex64) -> Self {
        PointValue {
            at: [p.z().re, p.z().im, p.t()],
            value: [v.re, v.im],
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PointwiseReport {
    pub r: String,
    pub method: &'static str,
    pub quad_points: Option<usize>,
    pub values: Vec<PointValue>,
}

#[derive(Debug, Serialize)]
pub struct SvdRow {
    pub n: i64,
    pub j: u64,
    pub r: String,
    pub s: f64,
    pub phase_re: f64,
    pub phase_im: f64,
    /// Empty when `rn ∉ Z`.
    pub target_j: Option<u64>,
}

impl From<&SingularSystem> for SvdRow {
    fn from(f: &SingularSystem) -> Self {
        SvdRow {
            n: f.n,
            j: f.j,
            r: f.r.to_string(),
            s: f.s,
            phase_re: f.phase.re,
            phase_im: f.phase.im,
            target_j: f.target_j,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Serialize)]
pub struct ZeroRow {
    pub lo: f64,
    pub hi: f64,
    pub witness: f64,
}

#[derive(Debug, Serialize)]
pub struct ZeroScanReport {
    pub kind: &'static str,
    pub j: Option<usize>,
    pub window: [f64; 2],
    pub step: f64,
    pub zeros: Vec<ZeroRow>,
    pub tangencies: Vec<Interval>,
}

impl ZeroScanReport {
    pub fn new(kind: ZeroKind, window: [f64; 2], step: f64, scan: &ZeroScan) -> Self {
        ZeroScanReport {
            kind: match kind {
                ZeroKind::DiagonalLaguerre(_) => "lj",
                ZeroKind::BesselJ0 => "j0",
            },
            j: kind.order_j(),
            window,
            step,
            zeros: scan
                .brackets
                .iter()
                .map(|b| ZeroRow {
                    lo: b.lo,
                    hi: b.hi,
                    witness: b.witness,
                })
                .collect(),
            tangencies: scan
                .tangencies
                .iter()
                .map(|t| Interval { lo: t.lo, hi: t.hi })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ScanBounds {
    pub j_max: usize,
    pub n_max: u64,
    pub zero_window: f64,
    pub tol: f64,
    pub step: f64,
}

#[derive(Debug, Serialize)]
pub struct LaguerreHit {
    pub j: usize,
    pub zero1: f64,
    pub zero2: f64,
}

#[derive(Debug, Serialize)]
pub struct BesselHit {
    pub zero1: f64,
    pub zero2: f64,
}

#[derive(Debug, Serialize)]
pub struct Tangency {
    /// `None` for `J₀`.
    pub j: Option<usize>,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Serialize)]
pub struct TwoRadiusJson {
    pub r1: String,
    pub r2: String,
    pub scan: ScanBounds,
    pub laguerre_ratio_hits: Vec<LaguerreHit>,
    pub bessel_ratio_hits: Vec<BesselHit>,
    pub gap_modulus: u64,
    pub delta_z_gap: Vec<u64>,
    pub tangencies: Vec<Tangency>,
    pub verdict: &'static str,
}

impl From<&TwoRadiusReport> for TwoRadiusJson {
    fn from(r: &TwoRadiusReport) -> Self {
        TwoRadiusJson {
            r1: r.r1.to_string(),
            r2: r.r2.to_string(),
            scan: ScanBounds {
                j_max: r.scan.j_max,
                n_max: r.scan.n_max,
                zero_window: r.scan.zero_window,
                tol: r.scan.tol,
                step: r.scan.step,
            },
            laguerre_ratio_hits: r
                .laguerre_ratio_hits
                .iter()
                .map(|h| LaguerreHit {
                    j: h.j,
                    zero1: h.zero1,
                    zero2: h.zero2,
                })
                .collect(),
            bessel_ratio_hits: r
                .bessel_ratio_hits
                .iter()
                .map(|h| BesselHit {
                    zero1: h.zero1,
                    zero2: h.zero2,
                })
                .collect(),
            gap_modulus: r.gap_modulus,
            delta_z_gap: r.delta_z_gap.clone(),
            tangencies: r
                .tangencies
                .iter()
                .map(|t| Tangency {
                    j: t.kind.order_j(),
                    lo: t.lo,
                    hi: t.hi,
                })
                .collect(),
            verdict: match r.verdict {
                Verdict::InjectiveOnScan => "injective_on_scan",
                Verdict::Obstructed => "obstructed",
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ModeKey {
    pub n: i64,
    pub j: u64,
    pub k: u64,
}

impl From<&ModeIndex> for ModeKey {
    fn from(m: &ModeIndex) -> Self {
        ModeKey {
            n: m.n(),
            j: m.j(),
            k: m.k(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ModeCondition {
    pub n: i64,
    pub j: u64,
    pub k: u64,
    pub condition: f64,
}

#[derive(Debug, Serialize)]
pub struct ReconstructionJson {
    pub signal: SignalFile,
    pub max_condition: f64,
    pub per_mode_condition: Vec<ModeCondition>,
    pub unresolved: Vec<ModeKey>,
    pub unresolved_planar: Vec<[f64; 2]>,
}

impl From<&ReconstructionResult> for ReconstructionJson {
    fn from(r: &ReconstructionResult) -> Self {
        ReconstructionJson {
            signal: SignalFile::from(&r.signal),
            max_condition: r.max_condition(),
            per_mode_condition: r
                .per_mode_condition
                .iter()
                .map(|(m, &condition)| ModeCondition {
                    n: m.n(),
                    j: m.j(),
                    k: m.k(),
                    condition,
                })
                .collect(),
            unresolved: r.unresolved.iter().map(ModeKey::from).collect(),
            unresolved_planar: r.unresolved_planar.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FanPointRow {
    pub n: i64,
    pub j: u64,
    #[serde(rename = "eig_T")]
    pub eig_t: f64,
    #[serde(rename = "eig_L")]
    pub eig_l: f64,
    pub ray: u64,
}

impl From<&FanPoint> for FanPointRow {
    fn from(p: &FanPoint) -> Self {
        FanPointRow {
            n: p.n,
            j: p.j,
            eig_t: p.eig_t,
            eig_l: p.eig_l,
            ray: p.ray,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FanArrowRow {
    pub n: i64,
    pub j_src: u64,
    pub j_dst: u64,
    pub r: String,
}

impl From<&FanArrow> for FanArrowRow {
    fn from(a: &FanArrow) -> Self {
        FanArrowRow {
            n: a.source.n,
            j_src: a.source.j,
            j_dst: a.target.j,
            r: a.r.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FanJson {
    pub r: String,
    pub points: Vec<FanPointRow>,
    pub arrows: Vec<FanArrowRow>,
}

#[derive(Debug, Serialize)]
pub struct AuditRowJson {
    pub m: u64,
    pub j: u64,
    pub oracle_modulus: f64,
    pub quadrature_modulus: f64,
    pub printed_modulus: f64,
    pub ratio: Option<f64>,
    /// `e^{−(π−1)m/2}`, the ratio the two constants predict.
    pub expected_ratio: f64,
}

impl From<&AuditRow> for AuditRowJson {
    fn from(a: &AuditRow) -> Self {
        AuditRowJson {
            m: a.m,
            j: a.j,
            oracle_modulus: a.oracle_modulus,
            quadrature_modulus: a.quadrature_modulus,
            printed_modulus: a.printed_modulus,
            ratio: a.ratio,
            expected_ratio: (-(std::f64::consts::PI - 1.0) * a.m as f64 / 2.0).exp(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AuditJson {
    pub quad_points: usize,
    pub notes: Vec<&'static str>,
    pub rows: Vec<AuditRowJson>,
}

pub const AUDIT_NOTES: [&str; 3] = [
    "oracle_modulus is |I_1 psi| read off the spectral formula 2*pi*M^m_{j,j+m}(1,0); quadrature_modulus is the same quantity from helix quadrature",
    "printed_modulus uses the constant e^{-(i+1)*pi*m/2}, whose modulus e^{-pi*m/2} differs from the e^{-m/2} the transform produces, so ratio = e^{-(pi-1)m/2}",
    "the printed phase e^{-i*pi*m/2} is not the (-1)^m sgn(l_j(m)) the transform produces; U_r uses the oracle phase",
];

#[derive(Debug, Serialize)]
pub struct VerifyFailure {
    pub n: i64,
    pub j: u64,
    pub k: u64,
    pub r: String,
    pub at: [f64; 3],
    pub spectral: [f64; 2],
    pub quadrature: [f64; 2],
    pub error: f64,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub n_max: u64,
    pub j_max: u64,
    pub k_max: u64,
    pub momenta: Vec<String>,
    pub points: usize,
    pub seed: u64,
    pub quad_points: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub checked: usize,
    pub worst_error: f64,
    pub passed: bool,
    pub failures: Vec<VerifyFailure>,
}

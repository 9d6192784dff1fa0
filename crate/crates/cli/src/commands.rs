//! Subcommand definitions and their implementations.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use heisenberg_xray::inversion::{Measurement, ModeBounds, TwoRadiusScan};
use heisenberg_xray::special::{scan_zeros, ZeroKind};
use heisenberg_xray::xray::{constant_audit, oracle_samples};
use heisenberg_xray::{
    adjoint_spectral, fan_action, fan_points, forward_spectral, normal_spectral, reconstruct, svd_factors,
    two_radius_check, xray_quadrature, Complex64, HeisenbergPoint, ModeIndex, RationalMomentum,
    SignalDecomposition,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;
use crate::report::*;
use crate::signal::{parse_signal, serialize_signal};

#[derive(Debug, Parser)]
#[command(
    name = "hxray",
    version,
    about = "X-ray transform on the reduced Heisenberg group"
)]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply I_r to a signal, spectrally or by helix quadrature.
    Xray(XrayArgs),
    /// Apply the adjoint I_r^*.
    Adjoint(OperatorArgs),
    /// Apply the normal operator I_r^* I_r.
    Normal(OperatorArgs),
    /// Table of singular values s(n, j, r) with phases and targets.
    Svd(SvdArgs),
    /// Bracket zeros of l_j or J0 on a window.
    ScanZeros(ScanArgs),
    /// Check the two-radius non-coincidence conditions.
    TwoRadius(TwoRadiusArgs),
    /// Recover a signal from one or two transforms.
    Reconstruct(ReconstructArgs),
    /// Points of the Heisenberg fan and the arrows of U_r.
    Fan(FanArgs),
    /// Compare the transform's singular moduli with the printed constant.
    Audit(AuditArgs),
    /// Compare spectral and quadrature transforms of basis modes.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Method {
    Spectral,
    Quadrature,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FanTable {
    Points,
    Arrows,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AuditFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ZeroFunction {
    Lj,
    J0,
}

#[derive(Debug, Args)]
pub struct SignalInput {
    /// Signal JSON file, or `-` for stdin.
    #[arg(long, short, default_value = "-")]
    pub input: String,
    /// Sum repeated modes and atoms instead of rejecting them.
    #[arg(long)]
    pub merge: bool,
}

#[derive(Debug, Args)]
pub struct XrayArgs {
    #[command(flatten)]
    pub signal: SignalInput,
    #[arg(long, default_value = "1")]
    pub r: RationalMomentum,
    #[arg(long, value_enum, default_value = "spectral")]
    pub method: Method,
    /// Evaluation point `z_re,z_im,t`; repeatable. Spectral output switches
    /// from a signal to point values; quadrature defaults to the identity.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub at: Vec<HeisenbergPoint>,
    /// Trapezoid nodes along the helix.
    #[arg(long, default_value_t = 1024)]
    pub quad_points: usize,
}

#[derive(Debug, Args)]
pub struct OperatorArgs {
    #[command(flatten)]
    pub signal: SignalInput,
    #[arg(long, default_value = "1")]
    pub r: RationalMomentum,
}

#[derive(Debug, Args)]
pub struct SvdArgs {
    #[arg(long, default_value = "1")]
    pub r: RationalMomentum,
    #[arg(long, default_value_t = 4)]
    pub n_max: u64,
    #[arg(long, default_value_t = 6)]
    pub j_max: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub kind: ZeroFunction,
    /// Order of l_j; ignored for j0.
    #[arg(long, default_value_t = 0)]
    pub j: usize,
    /// `HI` for `[0, HI]`, or `LO,HI`.
    #[arg(long, value_parser = parse_window, default_value = "10")]
    pub window: [f64; 2],
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct TwoRadiusArgs {
    #[arg(long)]
    pub r1: RationalMomentum,
    #[arg(long)]
    pub r2: RationalMomentum,
    #[arg(long, default_value_t = TwoRadiusScan::default().j_max)]
    pub j_max: usize,
    #[arg(long, default_value_t = TwoRadiusScan::default().n_max)]
    pub n_max: u64,
    #[arg(long, default_value_t = TwoRadiusScan::default().zero_window)]
    pub zero_window: f64,
    #[arg(long, default_value_t = TwoRadiusScan::default().tol)]
    pub tol: f64,
    #[arg(long, default_value_t = TwoRadiusScan::default().step)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Transform `I_{r1} f` as a signal file.
    #[arg(long)]
    pub g1: PathBuf,
    #[arg(long)]
    pub r1: RationalMomentum,
    /// Optional second transform `I_{r2} f`.
    #[arg(long, requires = "r2")]
    pub g2: Option<PathBuf>,
    #[arg(long, requires = "g2")]
    pub r2: Option<RationalMomentum>,
    #[arg(long, default_value_t = 0.0)]
    pub ridge: f64,
    #[arg(long, default_value_t = 3)]
    pub n_max: u64,
    #[arg(long, default_value_t = 4)]
    pub j_max: u64,
    #[arg(long, default_value_t = 2)]
    pub k_max: u64,
    #[arg(long)]
    pub merge: bool,
}

#[derive(Debug, Args)]
pub struct FanArgs {
    #[arg(long, default_value_t = 2)]
    pub n_max: u64,
    #[arg(long, default_value_t = 2)]
    pub j_max: u64,
    #[arg(long, default_value = "1")]
    pub r: RationalMomentum,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
    /// CSV table to emit; JSON always holds both.
    #[arg(long, value_enum, default_value = "arrows")]
    pub table: FanTable,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long, default_value_t = 6)]
    pub m_max: u64,
    #[arg(long, default_value_t = 6)]
    pub j_max: u64,
    #[arg(long, default_value_t = 4096)]
    pub quad_points: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: AuditFormat,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 4)]
    pub n_max: u64,
    #[arg(long, default_value_t = 6)]
    pub j_max: u64,
    #[arg(long, default_value_t = 3)]
    pub k_max: u64,
    /// Momenta to check; repeatable.
    #[arg(long = "r", default_values = ["1", "2", "3", "1/2", "1/3", "2/3"])]
    pub momenta: Vec<RationalMomentum>,
    /// Random evaluation points per mode and momentum.
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4096)]
    pub quad_points: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub abs_tol: f64,
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| {
            let v: f64 = p.trim().parse().map_err(|_| format!("`{p}` is not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{p}` is not finite"))
            }
        })
        .collect()
}

fn parse_point(s: &str) -> Result<HeisenbergPoint, String> {
    match parse_floats(s)?[..] {
        [x, y, t] => Ok(HeisenbergPoint::from_parts(x, y, t)),
        _ => Err("expected z_re,z_im,t".into()),
    }
}

fn parse_window(s: &str) -> Result<[f64; 2], String> {
    match parse_floats(s)?[..] {
        [hi] => Ok([0.0, hi]),
        [lo, hi] => Ok([lo, hi]),
        _ => Err("expected HI or LO,HI".into()),
    }
}

fn source_name(source: &str) -> &str {
    if source == "-" {
        "<stdin>"
    } else {
        source
    }
}

fn read_text(source: &str) -> Result<String, CliError> {
    let io_err = |e| CliError::Io {
        path: source_name(source).to_owned(),
        source: e,
    };
    if source == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(io_err)?;
        Ok(text)
    } else {
        fs::read_to_string(source).map_err(io_err)
    }
}

fn read_signal(source: &str, merge: bool) -> Result<SignalDecomposition, CliError> {
    let text = read_text(source)?;
    parse_signal(&text, merge).map_err(|e| CliError::validation(format!("{}: {e}", source_name(source))))
}

fn read_signal_path(path: &Path, merge: bool) -> Result<SignalDecomposition, CliError> {
    read_signal(&path.to_string_lossy(), merge)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

fn csv_table<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::validation(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Output of a subcommand: the text to emit and, for `verify`, whether the
/// run should end in a verification failure after the text is written.
pub struct Outcome {
    pub text: String,
    pub failure: Option<CliError>,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Outcome { text, failure: None }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let outcome = execute(cli.command)?;
    match &cli.out {
        Some(path) => fs::write(path, &outcome.text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(outcome.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    outcome.failure.map_or(Ok(()), Err)
}

pub fn execute(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Xray(a) => xray(a).map(Outcome::from),
        Command::Adjoint(a) => {
            let x = read_signal(&a.signal.input, a.signal.merge)?;
            Ok(signal_text(&adjoint_spectral(&x, a.r)).into())
        }
        Command::Normal(a) => {
            let x = read_signal(&a.signal.input, a.signal.merge)?;
            Ok(signal_text(&normal_spectral(&x, a.r)).into())
        }
        Command::Svd(a) => svd(a).map(Outcome::from),
        Command::ScanZeros(a) => scan(a).map(Outcome::from),
        Command::TwoRadius(a) => two_radius(a).map(Outcome::from),
        Command::Reconstruct(a) => reconstruct_cmd(a).map(Outcome::from),
        Command::Fan(a) => fan(a).map(Outcome::from),
        Command::Audit(a) => audit(a).map(Outcome::from),
        Command::Verify(a) => verify(a),
    }
}

fn signal_text(x: &SignalDecomposition) -> String {
    let mut s = serialize_signal(x);
    s.push('\n');
    s
}

fn xray(a: XrayArgs) -> Result<String, CliError> {
    let x = read_signal(&a.signal.input, a.signal.merge)?;
    match a.method {
        Method::Spectral if a.at.is_empty() => Ok(signal_text(&forward_spectral(&x, a.r))),
        Method::Spectral => {
            let image = forward_spectral(&x, a.r);
            let values =
                a.at.iter()
                    .map(|&p| PointValue::new(p, image.evaluate(p)))
                    .collect();
            Ok(json(&PointwiseReport {
                r: a.r.to_string(),
                method: "spectral",
                quad_points: None,
                values,
            }))
        }
        Method::Quadrature => {
            let points = if a.at.is_empty() {
                vec![HeisenbergPoint::IDENTITY]
            } else {
                a.at
            };
            let values = points
                .iter()
                .map(|&p| {
                    let v = xray_quadrature(|q| x.evaluate(q), a.r, p, a.quad_points)?;
                    Ok(PointValue::new(p, v))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(json(&PointwiseReport {
                r: a.r.to_string(),
                method: "quadrature",
                quad_points: Some(a.quad_points),
                values,
            }))
        }
    }
}

fn svd(a: SvdArgs) -> Result<String, CliError> {
    if a.n_max == 0 {
        return Err(CliError::validation("--n-max must be at least 1"));
    }
    let n_max = i64::try_from(a.n_max).map_err(|_| CliError::validation("--n-max is too large"))?;
    let rows: Vec<SvdRow> = (-n_max..=n_max)
        .filter(|&n| n != 0)
        .flat_map(|n| (0..=a.j_max).map(move |j| (n, j)))
        .map(|(n, j)| SvdRow::from(&svd_factors(n, j, a.r)))
        .collect();
    match a.format {
        TableFormat::Csv => csv_table(&rows),
        TableFormat::Json => Ok(json(&rows)),
    }
}

fn scan(a: ScanArgs) -> Result<String, CliError> {
    let kind = match a.kind {
        ZeroFunction::Lj => ZeroKind::DiagonalLaguerre(a.j),
        ZeroFunction::J0 => ZeroKind::BesselJ0,
    };
    let result = scan_zeros(kind, a.window[0], a.window[1], a.step)?;
    Ok(json(&ZeroScanReport::new(kind, a.window, a.step, &result)))
}

fn two_radius(a: TwoRadiusArgs) -> Result<String, CliError> {
    let scan = TwoRadiusScan {
        j_max: a.j_max,
        n_max: a.n_max,
        zero_window: a.zero_window,
        tol: a.tol,
        step: a.step,
    };
    let report = two_radius_check(a.r1, a.r2, &scan)?;
    Ok(json(&TwoRadiusJson::from(&report)))
}

fn reconstruct_cmd(a: ReconstructArgs) -> Result<String, CliError> {
    let mut measurements = vec![Measurement {
        signal: read_signal_path(&a.g1, a.merge)?,
        r: a.r1,
    }];
    if let (Some(g2), Some(r2)) = (&a.g2, a.r2) {
        measurements.push(Measurement {
            signal: read_signal_path(g2, a.merge)?,
            r: r2,
        });
    }
    let bounds = ModeBounds {
        n_max: a.n_max,
        j_max: a.j_max,
        k_max: a.k_max,
    };
    let result = reconstruct(&measurements, bounds, a.ridge)?;
    Ok(json(&ReconstructionJson::from(&result)))
}

fn fan(a: FanArgs) -> Result<String, CliError> {
    let points = fan_points(a.n_max, a.j_max);
    let arrows = fan_action(&points, a.r);
    let point_rows: Vec<FanPointRow> = points.iter().map(FanPointRow::from).collect();
    let arrow_rows: Vec<FanArrowRow> = arrows.iter().map(FanArrowRow::from).collect();
    match (a.format, a.table) {
        (TableFormat::Csv, FanTable::Points) => csv_table(&point_rows),
        (TableFormat::Csv, FanTable::Arrows) => csv_table(&arrow_rows),
        (TableFormat::Json, _) => Ok(json(&FanJson {
            r: a.r.to_string(),
            points: point_rows,
            arrows: arrow_rows,
        })),
    }
}

fn audit(a: AuditArgs) -> Result<String, CliError> {
    let rows: Vec<AuditRowJson> = constant_audit(a.m_max, a.j_max, a.quad_points)?
        .iter()
        .map(AuditRowJson::from)
        .collect();
    match a.format {
        AuditFormat::Json => Ok(json(&AuditJson {
            quad_points: a.quad_points,
            notes: AUDIT_NOTES.to_vec(),
            rows,
        })),
        AuditFormat::Text => {
            let mut s = String::new();
            for note in AUDIT_NOTES {
                s.push_str("# ");
                s.push_str(note);
                s.push('\n');
            }
            s.push_str(&format!(
                "{:>2} {:>2} {:>22} {:>22} {:>22} {:>12} {:>12}\n",
                "m", "j", "oracle", "quadrature", "printed", "ratio", "expected"
            ));
            for r in &rows {
                let ratio = r
                    .ratio
                    .map_or_else(|| "kernel".to_owned(), |v| format!("{v:.6e}"));
                s.push_str(&format!(
                    "{:>2} {:>2} {:>22.15e} {:>22.15e} {:>22.15e} {:>12} {:>12.6e}\n",
                    r.m,
                    r.j,
                    r.oracle_modulus,
                    r.quadrature_modulus,
                    r.printed_modulus,
                    ratio,
                    r.expected_ratio
                ));
            }
            Ok(s)
        }
    }
}

/// Random points with `|z| < 2` and `t ∈ [0, π)`.
pub fn random_points(rng: &mut impl Rng, count: usize) -> Vec<HeisenbergPoint> {
    (0..count)
        .map(|_| {
            let z = Complex64::from_polar(rng.gen_range(0.0..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
            HeisenbergPoint::new(z, rng.gen_range(0.0..std::f64::consts::PI))
        })
        .collect()
}

fn verify(a: VerifyArgs) -> Result<Outcome, CliError> {
    if a.n_max == 0 {
        return Err(CliError::validation("--n-max must be at least 1"));
    }
    if !(a.rel_tol > 0.0 && a.abs_tol > 0.0) {
        return Err(CliError::validation("tolerances must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let points = random_points(&mut rng, a.points);
    let bounds = ModeBounds {
        n_max: a.n_max,
        j_max: a.j_max,
        k_max: a.k_max,
    };
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for &r in &a.momenta {
        for mode in bounds.modes() {
            for sample in oracle_samples(mode, r, &points, a.quad_points)? {
                checked += 1;
                worst = worst.max(sample.error());
                if !sample.passes(a.rel_tol, a.abs_tol) {
                    failures.push(failure_row(
                        mode,
                        r,
                        &sample.point,
                        sample.spectral,
                        sample.quadrature,
                    ));
                }
            }
        }
    }
    let passed = failures.is_empty();
    let n_failures = failures.len();
    let report = VerifyReport {
        n_max: a.n_max,
        j_max: a.j_max,
        k_max: a.k_max,
        momenta: a.momenta.iter().map(ToString::to_string).collect(),
        points: a.points,
        seed: a.seed,
        quad_points: a.quad_points,
        rel_tol: a.rel_tol,
        abs_tol: a.abs_tol,
        checked,
        worst_error: worst,
        passed,
        failures,
    };
    Ok(Outcome {
        text: json(&report),
        failure: (!passed)
            .then(|| CliError::Verification(format!("{n_failures} of {checked} samples out of tolerance"))),
    })
}

fn failure_row(
    mode: ModeIndex,
    r: RationalMomentum,
    p: &HeisenbergPoint,
    spectral: Complex64,
    quadrature: Complex64,
) -> VerifyFailure {
    VerifyFailure {
        n: mode.n(),
        j: mode.j(),
        k: mode.k(),
        r: r.to_string(),
        at: [p.z().re, p.z().im, p.t()],
        spectral: [spectral.re, spectral.im],
        quadrature: [quadrature.re, quadrature.im],
        error: (spectral - quadrature).norm(),
    }
}

//! JSON signal files.
//!
//! ```json
//! {"planar":[{"xi":[0.5,-1.0],"amp":[1.0,0.0]}],"modes":[{"n":1,"j":0,"k":0,"amp":[1.0,0.0]}]}
//! ```
//!
//! Amplitudes are `[re, im]` pairs. Serialization writes atoms in insertion
//! order and modes sorted by `(n, j, k)`; floats use the shortest decimal
//! that round-trips, so `parse ∘ serialize` is the identity.

use std::collections::HashMap;
use std::num::NonZeroI64;

use heisenberg_xray::{Complex64, ModeIndex, PlanarAtom, SignalDecomposition};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalFile {
    pub planar: Vec<PlanarEntry>,
    pub modes: Vec<ModeEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanarEntry {
    pub xi: [f64; 2],
    pub amp: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeEntry {
    pub n: NonZeroI64,
    pub j: u64,
    pub k: u64,
    pub amp: [f64; 2],
}

fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl From<&SignalDecomposition> for SignalFile {
    fn from(x: &SignalDecomposition) -> Self {
        SignalFile {
            planar: x
                .planar()
                .iter()
                .map(|a| PlanarEntry {
                    xi: a.xi,
                    amp: pair(a.amp),
                })
                .collect(),
            modes: x
                .modes()
                .iter()
                .map(|(m, &amp)| ModeEntry {
                    n: NonZeroI64::new(m.n()).expect("mode index has n != 0"),
                    j: m.j(),
                    k: m.k(),
                    amp: pair(amp),
                })
                .collect(),
        }
    }
}

impl SignalFile {
    /// Builds the decomposition. Repeated `(n, j, k)` or repeated `ξ` are an
    /// error unless `merge` is set, in which case amplitudes are summed.
    pub fn into_signal(self, merge: bool) -> Result<SignalDecomposition, CliError> {
        let mut out = SignalDecomposition::new();
        let mut seen_xi: Vec<[f64; 2]> = Vec::new();
        for (i, a) in self.planar.into_iter().enumerate() {
            if a.xi.iter().chain(&a.amp).any(|v| !v.is_finite()) {
                return Err(CliError::validation(format!(
                    "planar[{i}]: values must be finite"
                )));
            }
            if !merge {
                if let Some(first) = seen_xi.iter().position(|&x| x == a.xi) {
                    return Err(CliError::validation(format!(
                        "planar[{i}]: duplicate xi {:?} (first at planar[{first}]); pass --merge to sum",
                        a.xi
                    )));
                }
                seen_xi.push(a.xi);
            }
            out.add_planar(PlanarAtom::new(a.xi, complex(a.amp)));
        }
        let mut seen: HashMap<ModeIndex, usize> = HashMap::new();
        for (i, m) in self.modes.into_iter().enumerate() {
            if m.amp.iter().any(|v| !v.is_finite()) {
                return Err(CliError::validation(format!(
                    "modes[{i}].amp: values must be finite"
                )));
            }
            let mode = ModeIndex::new(m.n.get(), m.j, m.k)?;
            if let Some(first) = seen.insert(mode, i) {
                if !merge {
                    return Err(CliError::validation(format!(
                        "modes[{i}]: duplicate (n, j, k) = ({}, {}, {}) (first at modes[{first}]); pass --merge to sum",
                        m.n, m.j, m.k
                    )));
                }
            }
            out.add_mode(mode, complex(m.amp));
        }
        Ok(out)
    }
}

/// Parses a signal file. Schema errors carry serde's line and column.
pub fn parse_signal(text: &str, merge: bool) -> Result<SignalDecomposition, CliError> {
    let file: SignalFile =
        serde_json::from_str(text).map_err(|e| CliError::validation(format!("malformed signal: {e}")))?;
    file.into_signal(merge)
}

/// Compact JSON with fields in the order `planar`, `modes`.
pub fn serialize_signal(x: &SignalDecomposition) -> String {
    serde_json::to_string(&SignalFile::from(x)).expect("signal files always serialize")
}

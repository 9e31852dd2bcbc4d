//! JSON state files: `{"terms": [{"re", "im", "power", "decay"}], "normalize": bool}`.

use std::fs;
use std::path::Path;

use backflow_core::{Complex64, MomentumAmplitude, Term};
use serde::Deserialize;

use crate::error::StateError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermSpec {
    re: f64,
    #[serde(default)]
    im: f64,
    power: u32,
    decay: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    terms: Vec<TermSpec>,
    #[serde(default = "default_normalize")]
    normalize: bool,
}

fn default_normalize() -> bool {
    true
}

pub fn parse_state(text: &str) -> Result<MomentumAmplitude, StateError> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| StateError::Parse(e.to_string()))?;
    let terms = file
        .terms
        .iter()
        .map(|t| Term::new(Complex64::new(t.re, t.im), t.power, t.decay))
        .collect();
    let state = MomentumAmplitude::new(terms).map_err(|e| StateError::InvariantViolation(e.to_string()))?;
    if file.normalize {
        state
            .normalize()
            .map_err(|e| StateError::InvariantViolation(e.to_string()))
    } else {
        Ok(state)
    }
}

pub fn load_state(path: &Path) -> Result<MomentumAmplitude, StateError> {
    let text = fs::read_to_string(path).map_err(|source| StateError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_state(&text)
}

//! Versioned JSON model files.
//!
//! Integers may be written as JSON numbers or as strings; coefficients are
//! expressions over `D1, D2, …` (1-based ray labels) and `psi1, psi2, …`.
//! Ray and cone indices inside the file are 0-based.

use std::path::Path;

use qsheaf_core::deformation::{Deformation, Entry, LinearData};
use qsheaf_core::fan::Fan;
use qsheaf_core::lattice::ClassLattice;
use qsheaf_core::quantum::parse_w;
use serde::Deserialize;

use crate::CliError;

pub const MODEL_VERSION: &str = "qsheaf-model/1";

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum IntLike {
    Num(i64),
    Text(String),
}

impl IntLike {
    fn value(&self, what: &str) -> Result<i64, CliError> {
        match self {
            IntLike::Num(v) => Ok(*v),
            IntLike::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Validation(format!("{what}: {s:?} is not an integer"))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    version: String,
    fan: RawFan,
    #[serde(default)]
    deformation: Option<RawDeformation>,
    #[serde(default)]
    options: Options,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFan {
    rank: usize,
    rays: Vec<Vec<IntLike>>,
    max_cones: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDeformation {
    /// Start from the tangent-bundle entries; listed entries override them.
    #[serde(default = "yes")]
    tangent: bool,
    #[serde(default)]
    entries: Vec<RawEntry>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    rho: usize,
    m: Vec<IntLike>,
    coeff: String,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    pub anchor_bound: u32,
    pub trials: usize,
    pub max_c1_degree: i64,
}

impl Default for Options {
    fn default() -> Options {
        Options { anchor_bound: 10, trials: 16, max_c1_degree: 6 }
    }
}

pub struct Model {
    pub fan: Fan,
    pub cl: ClassLattice,
    pub deformation: Deformation,
    pub lin: LinearData,
    pub options: Options,
}

pub fn load(path: &Path) -> Result<Model, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse(text: &str) -> Result<Model, CliError> {
    let raw: RawModel = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if raw.version != MODEL_VERSION {
        return Err(CliError::Validation(format!(
            "unsupported model version {:?}, expected {MODEL_VERSION:?}",
            raw.version
        )));
    }
    let rays = raw
        .fan
        .rays
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().map(|x| x.value(&format!("ray {i}"))).collect())
        .collect::<Result<Vec<Vec<i64>>, _>>()?;
    let fan = Fan::new(raw.fan.rank, rays, raw.fan.max_cones).map_err(|e| CliError::Validation(format!("FanError: {e}")))?;
    let cl = ClassLattice::new(&fan).map_err(|e| CliError::Validation(format!("LatticeError: {e}")))?;

    let raw_def = raw.deformation.unwrap_or(RawDeformation { tangent: true, entries: Vec::new() });
    let mut entries: Vec<Entry> = if raw_def.tangent { Deformation::tangent(&fan, &cl).entries().to_vec() } else { Vec::new() };
    for (i, e) in raw_def.entries.iter().enumerate() {
        let m = e.m.iter().map(|x| x.value(&format!("entry {i}"))).collect::<Result<Vec<i64>, _>>()?;
        let coeff = parse_w(&cl, &e.coeff).map_err(|err| CliError::Parse(format!("entry {i} coeff: {err}")))?;
        entries.retain(|old| !(old.ray == e.rho && old.m == m));
        entries.push(Entry { ray: e.rho, m, coeff });
    }
    let deformation = Deformation::new(&fan, &cl, entries).map_err(|e| CliError::Validation(format!("DeformationError: {e}")))?;
    let lin = LinearData::new(&fan, &cl, &deformation);
    Ok(Model { fan, cl, deformation, lin, options: raw.options })
}

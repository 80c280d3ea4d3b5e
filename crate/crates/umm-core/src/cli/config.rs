use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::ncpoly::{
    parse_polynomial, Alphabet, ConstantAlgebraSpec, DiagonalSpectra, Generator, IndependentMoments, MatrixTrace,
    Polynomial, TraceData,
};
use crate::rmt::{McError, Representation, SamplerKind};
use crate::scalar::{parse_scalar, Scalar};
use crate::validation::DEFAULT_SEED;

/// Environment variable overriding the default seed.
pub const SEED_ENV: &str = "UMM_SEED";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{origin}: line {line}, column {column}: {message}")]
    Syntax { origin: String, line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("bad override `{0}`: expected key=value")]
    Override(String),
}

impl ConfigError {
    fn field(field: &str, message: impl fmt::Display) -> Self {
        ConfigError::Field { field: field.into(), message: message.to_string() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    MasterField,
    TauKg,
    FreeEnergy,
    Hciz,
    Hurwitz,
    McCumulants,
    McValidate,
    Clt,
    Validate,
    ApplyOp,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::MasterField => "master-field",
            Command::TauKg => "tau-kg",
            Command::FreeEnergy => "free-energy",
            Command::Hciz => "hciz",
            Command::Hurwitz => "hurwitz",
            Command::McCumulants => "mc-cumulants",
            Command::McValidate => "mc-validate",
            Command::Clt => "clt",
            Command::Validate => "validate",
            Command::ApplyOp => "apply-op",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An exact scalar written as text (`3`, `-1/2`, `(1/2+1i)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarText(pub Scalar);

impl Serialize for ScalarText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for ScalarText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(ScalarText(Scalar::int(n))),
            Raw::Text(t) => parse_scalar(&t)
                .map(ScalarText)
                .ok_or_else(|| serde::de::Error::custom(format!("not an exact scalar: {t:?}"))),
        }
    }
}

fn scalars(values: &[ScalarText]) -> Vec<Scalar> {
    values.iter().map(|s| s.0.clone()).collect()
}

/// The constant algebra and its trace data. Generators are selfadjoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConstantsConfig {
    /// Commuting diagonal matrices; `values[gen]` is one spectrum block.
    Spectra { generators: Vec<String>, values: Vec<Vec<ScalarText>> },
    /// Fixed square matrices; `values[gen][row][col]`.
    Matrices { generators: Vec<String>, values: Vec<Vec<Vec<ScalarText>>> },
    /// `values[gen][genus][k-1]` is the `N^{-2 genus}` part of the `k`-th moment.
    Moments { generators: Vec<String>, values: Vec<Vec<Vec<ScalarText>>> },
}

impl ConstantsConfig {
    fn generators(&self) -> &[String] {
        match self {
            ConstantsConfig::Spectra { generators, .. }
            | ConstantsConfig::Matrices { generators, .. }
            | ConstantsConfig::Moments { generators, .. } => generators,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    /// Matrix sizes `N`.
    #[serde(default = "default_sizes")]
    pub sizes: Vec<usize>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// `iid-haar` when the coupling vanishes and `metropolis` otherwise, unless set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<SamplerKind>,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        Self { sizes: default_sizes(), samples: default_samples(), sampler: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operator {
    /// `∂_i`
    Partial,
    /// `𝒟_i`
    Cyclic,
    /// `Π'`, the degree-weighted number operator.
    Number,
    NumberInverse,
    /// `Δ` on the perpendicular part.
    Laplacian,
    Star,
    CyclicCanonical,
}

fn default_unitaries() -> usize {
    1
}
fn default_potential() -> String {
    "0".into()
}
fn default_n_max() -> usize {
    4
}
fn default_xi() -> f64 {
    12.0
}
fn default_k_max() -> usize {
    2
}
fn default_g_max() -> usize {
    1
}
fn default_d_max() -> usize {
    4
}
fn default_var() -> usize {
    1
}
fn default_sigmas() -> f64 {
    4.0
}
fn default_sizes() -> Vec<usize> {
    vec![16, 32, 64]
}
fn default_samples() -> usize {
    2000
}

/// A complete run description. Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default = "default_unitaries")]
    pub unitaries: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<ConstantsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub arguments: Vec<String>,
    #[serde(default = "default_potential")]
    pub potential: String,
    #[serde(default)]
    pub coupling: f64,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_xi")]
    pub xi: f64,
    #[serde(default)]
    pub genus: usize,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_g_max")]
    pub g_max: usize,
    #[serde(default = "default_d_max")]
    pub d_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<Operator>,
    /// One-based unitary index for `apply-op`.
    #[serde(default = "default_var")]
    pub var: usize,
    /// Tolerance of `mc-validate` in standard errors.
    #[serde(default = "default_sigmas")]
    pub sigmas: f64,
    /// Reduced sample sizes for `validate`.
    #[serde(default)]
    pub quick: bool,
    #[serde(default)]
    pub ensemble: EnsembleSection,
    #[serde(default)]
    pub output: OutputPaths,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Short names accepted on the command line.
const SHORTHANDS: [(&str, &str); 7] = [
    ("p", "polynomial"),
    ("V", "potential"),
    ("t", "coupling"),
    ("g", "genus"),
    ("d", "d_max"),
    ("m", "unitaries"),
    ("N", "ensemble.sizes"),
];

/// Keys whose values are always polynomial or scalar text.
const TEXT_KEYS: [&str; 2] = ["polynomial", "potential"];

fn syntax_error(origin: &str, e: &serde_json::Error) -> ConfigError {
    ConfigError::Syntax { origin: origin.into(), line: e.line(), column: e.column(), message: e.to_string() }
}

/// Sets `key=value` in a JSON object, creating intermediate objects for dotted keys.
fn apply_override(root: &mut Map<String, Value>, raw: &str) -> Result<(), ConfigError> {
    let (key, text) = raw.split_once('=').ok_or_else(|| ConfigError::Override(raw.into()))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(ConfigError::Override(raw.into()));
    }
    let key = SHORTHANDS.iter().find(|(short, _)| *short == key).map_or(key, |(_, long)| long);
    let value = if TEXT_KEYS.contains(&key) {
        Value::String(text.into())
    } else {
        match serde_json::from_str::<Value>(text) {
            Ok(v) if key == "ensemble.sizes" && v.is_number() => Value::Array(vec![v]),
            Ok(v) => v,
            Err(_) if key == "arguments" => {
                Value::Array(text.split(';').map(|s| Value::String(s.trim().into())).collect())
            }
            Err(_) => Value::String(text.into()),
        }
    };
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().expect("split yields at least one part");
    let mut node = root;
    for part in parts {
        let entry = node.entry(part).or_insert_with(|| Value::Object(Map::new()));
        node = entry.as_object_mut().ok_or_else(|| ConfigError::field(part, "is not an object"))?;
    }
    node.insert(last.into(), value);
    Ok(())
}

impl RunConfig {
    /// A config with every default and the given command.
    pub fn new(command: Command) -> Self {
        Self::from_value(serde_json::json!({ "command": command }), "defaults").expect("defaults are valid")
    }

    fn from_value(value: Value, origin: &str) -> Result<Self, ConfigError> {
        let mut config: RunConfig = serde_path_to_error::deserialize(value).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            if inner.line() > 0 {
                syntax_error(origin, &inner)
            } else {
                ConfigError::field(&field, inner)
            }
        })?;
        if config.seed.is_none() {
            config.seed = Some(seed_from_env()?);
        }
        config.prepare()?;
        Ok(config)
    }

    /// Parses JSON text, reporting line and column or the offending field.
    pub fn from_json(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let parsed: Result<RunConfig, _> = serde_path_to_error::deserialize(&mut de);
        let mut config = parsed.map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            match inner.classify() {
                serde_json::error::Category::Data if field != "." => {
                    ConfigError::Field { field, message: format!("{inner}") }
                }
                _ => syntax_error(origin, &inner),
            }
        })?;
        de.end().map_err(|e| syntax_error(origin, &e))?;
        if config.seed.is_none() {
            config.seed = Some(seed_from_env()?);
        }
        config.prepare()?;
        Ok(config)
    }

    /// Reads `path`, then applies `key=value` overrides, then validates.
    pub fn load(path: Option<&Path>, command: Option<Command>, overrides: &[String]) -> Result<Self, ConfigError> {
        let (mut value, origin) = match path {
            Some(p) => {
                let text =
                    std::fs::read_to_string(p).map_err(|source| ConfigError::Read { path: p.to_path_buf(), source })?;
                let origin = p.display().to_string();
                let value: Value = serde_json::from_str(&text).map_err(|e| syntax_error(&origin, &e))?;
                if overrides.is_empty() && command.is_none() {
                    return Self::from_json(&text, &origin);
                }
                (value, origin)
            }
            None => (Value::Object(Map::new()), "command line".to_string()),
        };
        let root = value.as_object_mut().ok_or_else(|| ConfigError::field(".", "config must be a JSON object"))?;
        if let Some(c) = command {
            let given = root.insert("command".into(), serde_json::to_value(c).expect("command serializes"));
            if given.is_some_and(|g| g != serde_json::to_value(c).expect("command serializes")) {
                return Err(ConfigError::field("command", format!("config file names a different command than `{c}`")));
            }
        }
        for o in overrides {
            apply_override(root, o)?;
        }
        Self::from_value(value, &origin)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    /// Parses every polynomial and builds the trace data.
    pub fn prepare(&self) -> Result<Prepared, ConfigError> {
        if !(self.xi >= 1.0) {
            return Err(ConfigError::field("xi", "must be at least 1"));
        }
        if self.var == 0 || self.var > self.unitaries.max(1) {
            return Err(ConfigError::field(
                "var",
                format!("u{} is not among the {} unitaries", self.var, self.unitaries),
            ));
        }
        if !(self.sigmas > 0.0) {
            return Err(ConfigError::field("sigmas", "must be positive"));
        }
        let names: Vec<String> = self.constants.as_ref().map(|c| c.generators().to_vec()).unwrap_or_default();
        let spec = ConstantAlgebraSpec {
            generators: names.iter().map(|n| Generator { name: n.clone(), selfadjoint: true }).collect(),
        };
        let alphabet =
            Alphabet::new(self.unitaries, spec).map_err(|e| ConfigError::field("constants.generators", e))?;
        let parse =
            |field: &str, text: &str| parse_polynomial(text, &alphabet).map_err(|e| ConfigError::field(field, e));
        let polynomial = self.polynomial.as_deref().map(|t| parse("polynomial", t)).transpose()?;
        let arguments = self
            .arguments
            .iter()
            .enumerate()
            .map(|(k, t)| parse(&format!("arguments[{k}]"), t))
            .collect::<Result<Vec<_>, _>>()?;
        let potential = parse("potential", &self.potential)?;
        let constants = match &self.constants {
            None => ConstantData::Spectra(DiagonalSpectra::new(Vec::new()).expect("empty spectra are valid")),
            Some(c) => {
                let count = c.generators().len();
                let check_count = |len: usize| {
                    if len == count {
                        Ok(())
                    } else {
                        Err(ConfigError::field("constants.values", format!("{len} entries for {count} generators")))
                    }
                };
                match c {
                    ConstantsConfig::Spectra { values, .. } => {
                        check_count(values.len())?;
                        let spectra = values.iter().map(|v| scalars(v)).collect();
                        ConstantData::Spectra(
                            DiagonalSpectra::new(spectra).map_err(|e| ConfigError::field("constants.values", e))?,
                        )
                    }
                    ConstantsConfig::Matrices { values, .. } => {
                        check_count(values.len())?;
                        let mats = values.iter().map(|m| m.iter().map(|r| scalars(r)).collect()).collect();
                        ConstantData::Matrices(
                            MatrixTrace::new(mats).map_err(|e| ConfigError::field("constants.values", e))?,
                        )
                    }
                    ConstantsConfig::Moments { values, .. } => {
                        check_count(values.len())?;
                        let moments = values.iter().map(|g| g.iter().map(|k| scalars(k)).collect()).collect();
                        ConstantData::Moments(
                            IndependentMoments::new(moments).map_err(|e| ConfigError::field("constants.values", e))?,
                        )
                    }
                }
            }
        };
        if self.ensemble.sizes.is_empty() || self.ensemble.sizes.contains(&0) {
            return Err(ConfigError::field("ensemble.sizes", "needs at least one positive size"));
        }
        Ok(Prepared { alphabet, polynomial, arguments, potential, constants })
    }
}

fn seed_from_env() -> Result<u64, ConfigError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| ConfigError::field(SEED_ENV, format!("not a 64-bit seed: {s:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

#[derive(Clone, Debug)]
pub enum ConstantData {
    Spectra(DiagonalSpectra),
    Matrices(MatrixTrace),
    Moments(IndependentMoments),
}

impl ConstantData {
    pub fn trace_data(&self) -> Arc<dyn TraceData> {
        match self {
            ConstantData::Spectra(d) => Arc::new(d.clone()),
            ConstantData::Matrices(d) => Arc::new(d.clone()),
            ConstantData::Moments(d) => Arc::new(d.clone()),
        }
    }

    /// `ρ_N`; moment data has no matrix realisation.
    pub fn representation(&self, n: usize) -> Result<Representation, McError> {
        match self {
            ConstantData::Spectra(d) => Representation::from_spectra(d, n),
            ConstantData::Matrices(d) => Representation::from_matrices(d, n),
            ConstantData::Moments(_) => {
                Err(McError::Config("moment data cannot be sampled; give spectra or matrices".into()))
            }
        }
    }
}

/// Parsed inputs of a validated config.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub alphabet: Alphabet,
    pub polynomial: Option<Polynomial>,
    pub arguments: Vec<Polynomial>,
    pub potential: Polynomial,
    pub constants: ConstantData,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_expand_shorthands() {
        let c = RunConfig::load(None, Some(Command::Hurwitz), &["g=1".into(), "d=3".into(), "N=8".into()]).unwrap();
        assert_eq!((c.genus, c.d_max, c.ensemble.sizes.clone()), (1, 3, vec![8]));
        let c = RunConfig::load(None, Some(Command::Clt), &["p=1".into(), "ensemble.samples=500".into()]).unwrap();
        assert_eq!(c.polynomial.as_deref(), Some("1"));
        assert_eq!(c.ensemble.samples, 500);
    }

    #[test]
    fn unknown_key_is_a_field_error() {
        let err = RunConfig::load(None, Some(Command::Hurwitz), &["genius=1".into()]).unwrap_err();
        assert!(err.to_string().contains("genius"), "{err}");
        assert!(RunConfig::from_json(r#"{"command": "clt", "ensemble": {"size": [4]}}"#, "x").is_err());
    }

    #[test]
    fn syntax_error_has_position() {
        let err = RunConfig::from_json("{\n  \"command\": \"clt\",\n  oops\n}", "cfg.json").unwrap_err();
        match err {
            ConfigError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn scalar_text_accepts_integers_and_fractions() {
        let c: ConstantsConfig =
            serde_json::from_str(r#"{"kind": "spectra", "generators": ["x"], "values": [[1, "-1/2", "(1/3+1i)"]]}"#)
                .unwrap();
        let ConstantsConfig::Spectra { values, .. } = &c else { panic!() };
        assert_eq!(values[0][1].0, Scalar::ratio(-1, 2));
        let back: ConstantsConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}

//! TOML config files and their merge with command-line flags.
//!
//! A config file holds one table per subcommand, keyed like the long flags
//! with `-` replaced by `_`:
//!
//! ```toml
//! [sort]
//! input = "points.csv"
//! relation = "componentwise(min,min)"
//! mode = "exact"
//! ```
//!
//! Flags given on the command line override the file. Every run writes the
//! fully resolved table back out as `manifest.toml`, which is itself a valid
//! config file.

use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

pub const MANIFEST: &str = "manifest.toml";

/// Failure class, mapped to the process exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
        }
    }
}

pub fn config_err(e: impl fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

pub fn data_err(e: impl fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

impl From<kpareto::Error> for CliError {
    fn from(e: kpareto::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

/// A subcommand's options. All fields are optional so that flags and file
/// entries can be layered; `fill_defaults` completes what neither gave.
pub trait Section: Serialize + DeserializeOwned {
    const NAME: &'static str;
    fn fill_defaults(&mut self);
}

const TOP_LEVEL_KEYS: [&str; 2] = ["command", "version"];

pub fn load_file(path: &Path, sections: &[&str]) -> Result<toml::Table, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    for key in table.keys() {
        if !TOP_LEVEL_KEYS.contains(&key.as_str()) && !sections.contains(&key.as_str()) {
            return Err(config_err(format!(
                "{}: unknown section '{key}'",
                path.display()
            )));
        }
    }
    Ok(table)
}

/// File section overlaid with the flags that were given, then defaulted.
pub fn resolve<T: Section>(flags: &T, file: Option<&toml::Table>) -> Result<T, CliError> {
    let mut base = match file.and_then(|f| f.get(T::NAME)) {
        Some(toml::Value::Table(t)) => t.clone(),
        Some(_) => return Err(config_err(format!("'{}' must be a table", T::NAME))),
        None => toml::Table::new(),
    };
    match toml::Value::try_from(flags).map_err(config_err)? {
        toml::Value::Table(over) => base.extend(over),
        _ => unreachable!("sections serialize to tables"),
    }
    let mut out: T = toml::Value::Table(base)
        .try_into()
        .map_err(|e| config_err(format!("[{}] {e}", T::NAME)))?;
    out.fill_defaults();
    Ok(out)
}

pub fn write_manifest<T: Section>(dir: &Path, resolved: &T) -> Result<(), CliError> {
    let mut doc = toml::Table::new();
    doc.insert("command".into(), T::NAME.into());
    doc.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    doc.insert(
        T::NAME.into(),
        toml::Value::try_from(resolved).map_err(config_err)?,
    );
    let text = toml::to_string(&doc).map_err(config_err)?;
    std::fs::write(dir.join(MANIFEST), text)?;
    Ok(())
}

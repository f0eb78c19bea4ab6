//! Library side of the `geo-spinor` command: input schemas, subcommands
//! and output rendering. `main.rs` only parses flags and maps exit codes.

pub mod commands;
pub mod input;
pub mod render;

use clap::ValueEnum;
use geo_spinor::blocks::BlockError;
use geo_spinor::classfield::ClassFieldError;
use geo_spinor::gamma::GammaError;
use thiserror::Error;

pub use commands::{run, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_RANK_TOO_LARGE: i32 = 3;
pub const EXIT_SIZE_MISMATCH: i32 = 4;
pub const EXIT_INVALID_GEO_TYPE: i32 = 5;
pub const EXIT_ORACLE_MISMATCH: i32 = 6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("unsupported output: {0}")]
    Unsupported(String),
    #[error("cannot read input: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] geo_spinor::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use geo_spinor::Error as E;
        match self {
            CliError::Core(E::Gamma(GammaError::RankTooLarge { .. }))
            | CliError::Core(E::Block(BlockError::Gamma(GammaError::RankTooLarge { .. }))) => EXIT_RANK_TOO_LARGE,
            CliError::Core(E::Block(BlockError::SizeMismatch { .. })) => EXIT_SIZE_MISMATCH,
            CliError::Core(E::ClassField(ClassFieldError::InvalidGeoType { .. })) => EXIT_INVALID_GEO_TYPE,
            _ => EXIT_PARSE,
        }
    }
}

macro_rules! core_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        }
    )*};
}

core_error!(
    GammaError,
    BlockError,
    ClassFieldError,
    geo_spinor::lattice_oracle::OracleError,
    geo_spinor::exact_linear::LinearError
);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Ascii,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    Orbit,
    Local,
    Embed,
    Global,
    Oracle,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub format: Format,
    /// base element for labeled complexes
    pub label: Option<Vec<i64>>,
    /// orbit rank bound, or shift bound for commutative hosts
    pub bound: Option<u64>,
    pub echo: bool,
}

/// Parses `"1,0"` into group coordinates.
pub fn parse_label(s: &str) -> Result<Vec<i64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| CliError::Input(format!("bad label coordinate {t:?}"))))
        .collect()
}

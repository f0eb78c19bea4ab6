//! Exact combinatorics of generalized Eichler orders in central simple
//! algebras: apartment coordinates, blocks of local orders, and spinor
//! class fields computed from supplied class-group data.

pub mod blocks;
pub mod classfield;
pub mod exact_linear;
pub mod gamma;
pub mod lattice_oracle;
pub mod matrix;
pub mod sampling;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Linear(#[from] exact_linear::LinearError),
    #[error(transparent)]
    Gamma(#[from] gamma::GammaError),
    #[error(transparent)]
    Block(#[from] blocks::BlockError),
    #[error(transparent)]
    Oracle(#[from] lattice_oracle::OracleError),
    #[error(transparent)]
    ClassField(#[from] classfield::ClassFieldError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Exact multi-color, hereditary and weighted discrepancy of small matrices,
//! a constructive rounding from `c`-color oracles to two-colorings, and a
//! harness that checks the known inequalities between these quantities with
//! exact rational arithmetic.

pub mod cary;
pub mod disc;
pub mod error;
pub mod gen;
pub mod io;
mod kernel;
pub mod matrix;
pub mod oracle;
pub mod rounding;
pub mod verify;

pub use cary::CaryValue;
pub use disc::{Budget, WeightedWitness};
pub use error::{Error, Result};
pub use matrix::{
    ColumnSubset, Coloring, DiscrepancyResult, FloatingColoring, Matrix, Rational, Witness,
};
pub use oracle::{Oracle, OracleConfig, OracleKind};

//! Basis, elements and the candidate products on the (super-)Virasoro algebras.

mod basis;
mod bracket;
mod element;
mod system;
mod table_io;

use thiserror::Error;

use crate::exactfield::FieldError;

pub use basis::{BasisIndex, HalfInt, Parity, Sector, Window};
pub use bracket::{bracket_elements, target_bracket, target_bracket_centerless};
pub use element::Element;
pub use system::{CoeffKey, Family, Mode, ProductTable, StructureSystem};
pub use table_io::{parse_table, read_header, write_table, TableHeader};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index {index} does not belong to sector theta = {sector}")]
    SectorParity { index: HalfInt, sector: Sector },
    #[error("element is not parity-homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("lookup outside the stored table: {0}")]
    OutOfWindow(String),
    #[error("{0}")]
    Mode(String),
    #[error("epsilon inverse is an integer (epsilon = {0})")]
    InadmissibleEpsilon(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

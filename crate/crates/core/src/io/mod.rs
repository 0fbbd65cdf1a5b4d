//! Text file formats for algebras (`ra v1`) and labeled structures
//! (`structure v1`).

mod algebra_file;
mod structure_file;

use std::fs;
use std::path::Path;

use crate::algebra::FiniteRelationAlgebra;
use crate::error::{Error, Result};

pub use algebra_file::{parse_algebra, print_algebra, recognize_lpn};
pub use structure_file::{load_structure, save_structure, StructureBody, StructureFile, XiClasses};

/// Reads an algebra file. Members of the `L(p,n)` family come back with
/// their parameters attached.
pub fn load_algebra(path: &Path) -> Result<FiniteRelationAlgebra> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(recognize_lpn(parse_algebra(&text)?))
}

pub fn save_algebra(alg: &FiniteRelationAlgebra, path: &Path) -> Result<()> {
    fs::write(path, print_algebra(alg)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

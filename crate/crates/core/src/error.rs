use thiserror::Error;

use crate::grid::{SubCellCoord, TerrainCoord};

#[derive(Debug, Error)]
pub enum Error {
    #[error("terrain vertex {0} is not present")]
    AbsentTerrainVertex(TerrainCoord),

    #[error("subcell {0} is not present in the decomposed graph")]
    AbsentSubCell(SubCellCoord),

    #[error("coordinate {0} lies outside the grid")]
    OutOfBounds(String),

    #[error("terrain cells {0} and {1} are not 4-adjacent present vertices")]
    NotAnEdge(TerrainCoord, TerrainCoord),

    #[error("invalid weight {0}: weights must be finite and non-negative")]
    InvalidWeight(f64),

    #[error("decomposed graph is disconnected ({} components, first vertices: {})", .0.len(), fmt_reps(.0))]
    Disconnected(Vec<SubCellCoord>),

    #[error("vertex set is empty")]
    EmptyVertexSet,

    #[error("root {0} is not part of the vertex set")]
    RootNotInSet(SubCellCoord),

    #[error("duplicate root {0}")]
    DuplicateRoot(SubCellCoord),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("operator is not valid for the current partition")]
    StaleOperator,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("instance too large for the exact oracle: {0}")]
    OracleTooLarge(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn fmt_reps(reps: &[SubCellCoord]) -> String {
    reps.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;

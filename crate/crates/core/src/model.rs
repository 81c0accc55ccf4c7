use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{spectral_radius_bound, LinalgError, Matrix, Vector};
use crate::table::IoTable;

/// Power-iteration steps used for the productivity check.
pub const SPECTRAL_ITERATIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("non-productive economy: {measure} for sector `{sector}` is {value} (must be < 1)")]
    NonProductive {
        sector: String,
        measure: &'static str,
        value: f64,
    },
    #[error("unknown sector `{0}`")]
    UnknownSector(String),
    #[error("demand and supply models were built from different tables")]
    ModelMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelSide {
    /// Leontief: final-demand shocks through `(I − A)⁻¹`.
    Demand,
    /// Ghosh: value-added shocks through `(I − B)⁻¹`.
    Supply,
}

impl std::fmt::Display for ModelSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelSide::Demand => "demand",
            ModelSide::Supply => "supply",
        })
    }
}

/// Something that maps a sectoral shock vector to output changes.
pub trait ShockPropagator {
    fn side(&self) -> ModelSide;
    fn table(&self) -> &Arc<IoTable>;
    fn propagate(&self, shock: &Vector) -> Result<Vector, ModelError>;
}

/// Rejects coefficient matrices whose margins reach one or whose spectral
/// radius bound does.
pub(crate) fn check_productive(
    table: &IoTable,
    coefficients: &Matrix,
    margins: &[f64],
    margin_name: &'static str,
) -> Result<(), ModelError> {
    for (s, m) in table.sectors().iter().zip(margins) {
        if *m >= 1.0 {
            return Err(ModelError::NonProductive {
                sector: s.code.clone(),
                measure: margin_name,
                value: *m,
            });
        }
    }
    let rho = spectral_radius_bound(coefficients, SPECTRAL_ITERATIONS)?;
    if rho >= 1.0 {
        return Err(ModelError::NonProductive {
            sector: "*".to_string(),
            measure: "spectral radius",
            value: rho,
        });
    }
    Ok(())
}

pub(crate) fn sector_index(table: &IoTable, code: &str) -> Result<usize, ModelError> {
    table
        .sector_index(code)
        .ok_or_else(|| ModelError::UnknownSector(code.to_string()))
}

pub(crate) fn same_table(a: &Arc<IoTable>, b: &Arc<IoTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

//! Demand-side (Leontief) and supply-side (Ghosh) input-output models for
//! estimating how investment programs propagate through an economy.
//!
//! The flow is: load an [`IoTable`](table::IoTable), check its balances,
//! build a [`DemandModel`](demand::DemandModel) and a
//! [`SupplyModel`](supply::SupplyModel) from it, then evaluate a
//! [`Scenario`](scenario::Scenario) of programs into an
//! [`ImpactReport`](scenario::ImpactReport).

pub mod allocation;
pub mod cli;
pub mod demand;
pub mod linalg;
pub mod model;
pub mod sankey;
pub mod scenario;
pub mod supply;
pub mod table;

pub use demand::DemandModel;
pub use linalg::{Matrix, Vector};
pub use model::{ModelError, ModelSide, ShockPropagator};
pub use scenario::{evaluate_scenario, ImpactReport, Program, Scenario};
pub use supply::SupplyModel;
pub use table::{IoTable, SectorId};

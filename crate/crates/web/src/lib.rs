//! Browser bindings for the demo page in `www/`.
//!
//! The page edits a small economy (flows plus final demand; total output and
//! value added are derived so the table always balances) and calls three
//! operations: build both models, propagate a one-sector shock, and split a
//! subsidy budget into induced household demand. Every binding takes and
//! returns JSON strings.

use std::sync::Arc;

use io_impact::linalg::{Matrix, Vector};
use io_impact::scenario::{derive_subsidy_demand, SubsidyDemand, SubsidyRule};
use io_impact::supply::SUPPLY_SIDE_CAVEAT;
use io_impact::table::{IoTable, SectorId};
use io_impact::{DemandModel, ModelSide, SupplyModel};
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

#[derive(Debug, Deserialize)]
pub struct EconomyInput {
    pub sectors: Vec<String>,
    /// Row-major inter-industry flows.
    pub flows: Vec<Vec<f64>>,
    pub final_demand: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct EconomyView {
    pub sectors: Vec<String>,
    pub total_output: Vec<f64>,
    pub value_added: Vec<f64>,
    pub technical_coefficients: Vec<Vec<f64>>,
    pub leontief_inverse: Vec<Vec<f64>>,
    pub allocation_coefficients: Vec<Vec<f64>>,
    pub ghosh_inverse: Vec<Vec<f64>>,
    pub demand_multipliers: Vec<f64>,
    pub supply_multipliers: Vec<f64>,
}

#[derive(Debug, Deserialize)]
pub struct ShockInput {
    pub economy: EconomyInput,
    pub side: ModelSide,
    pub sector: usize,
    pub amount: f64,
}

#[derive(Debug, Serialize)]
pub struct ShockView {
    pub delta_output: Vec<f64>,
    pub total: f64,
    pub multiplier: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<&'static str>,
}

fn rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Derives `x = Z·1 + f` and `v = x − 1′Z`, then builds the table.
pub fn economy_table(input: &EconomyInput) -> Result<IoTable, String> {
    let n = input.sectors.len();
    if input.flows.len() != n || input.final_demand.len() != n {
        return Err(format!("expected {n} flow rows and {n} final demand entries"));
    }
    let z = Matrix::from_rows(&input.flows).map_err(|e| e.to_string())?;
    let x: Vec<f64> = z
        .row_sums()
        .iter()
        .zip(&input.final_demand)
        .map(|(r, f)| r + f)
        .collect();
    let v: Vec<f64> = x.iter().zip(z.column_sums()).map(|(x, c)| x - c).collect();
    let vec = |v: Vec<f64>| Vector::new(v).map_err(|e| e.to_string());
    IoTable::new(
        input.sectors.iter().map(SectorId::from_code).collect(),
        z,
        vec(input.final_demand.clone())?,
        vec(v)?,
        vec(x)?,
        "USD_millions",
        2022,
    )
    .map_err(|e| e.to_string())
}

pub fn explore(input: &EconomyInput) -> Result<EconomyView, String> {
    let table = Arc::new(economy_table(input)?);
    let d = DemandModel::build(table.clone()).map_err(|e| e.to_string())?;
    let s = SupplyModel::build(table.clone()).map_err(|e| e.to_string())?;
    let codes = table.sector_codes();
    Ok(EconomyView {
        sectors: input.sectors.clone(),
        total_output: table.total_output().as_slice().to_vec(),
        value_added: table.value_added().as_slice().to_vec(),
        technical_coefficients: rows(d.technical_coefficients()),
        leontief_inverse: rows(d.leontief_inverse()),
        allocation_coefficients: rows(s.allocation_coefficients()),
        ghosh_inverse: rows(s.ghosh_inverse()),
        demand_multipliers: codes.iter().map(|c| d.multiplier(c).unwrap_or(f64::NAN)).collect(),
        supply_multipliers: codes.iter().map(|c| s.multiplier(c).unwrap_or(f64::NAN)).collect(),
    })
}

pub fn shock(input: &ShockInput) -> Result<ShockView, String> {
    let table = Arc::new(economy_table(&input.economy)?);
    if input.sector >= table.len() {
        return Err(format!("sector index {} out of range", input.sector));
    }
    let delta = Vector::unit(table.len(), input.sector, input.amount);
    let out = match input.side {
        ModelSide::Demand => DemandModel::build(table).and_then(|m| m.propagate(&delta)),
        ModelSide::Supply => SupplyModel::build(table).and_then(|m| m.propagate(&delta)),
    }
    .map_err(|e| e.to_string())?;
    let total = out.sum();
    Ok(ShockView {
        multiplier: if input.amount != 0.0 { total / input.amount } else { 0.0 },
        total,
        delta_output: out.into_inner(),
        caveat: (input.side == ModelSide::Supply).then_some(SUPPLY_SIDE_CAVEAT),
    })
}

pub fn subsidy(budget: f64, monthly_subsidy: f64, market_price: f64) -> Result<SubsidyDemand, String> {
    let rule = SubsidyRule {
        monthly_subsidy,
        market_price,
        program_years: 1,
    };
    rule.validate().map_err(|e| e.to_string())?;
    if budget.is_nan() || budget <= 0.0 {
        return Err("budget must be positive".into());
    }
    Ok(derive_subsidy_demand(&rule, budget))
}

fn to_json<T: Serialize>(value: Result<T, String>) -> Result<String, JsError> {
    value
        .and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsError::new(&e))
}

fn parse<'a, T: Deserialize<'a>>(json: &'a str) -> Result<T, String> {
    serde_json::from_str(json).map_err(|e| e.to_string())
}

/// `EconomyInput` JSON in, `EconomyView` JSON out.
#[wasm_bindgen(js_name = exploreEconomy)]
pub fn explore_economy(economy_json: &str) -> Result<String, JsError> {
    to_json(parse(economy_json).and_then(|e| explore(&e)))
}

/// `ShockInput` JSON in, `ShockView` JSON out.
#[wasm_bindgen(js_name = propagateShock)]
pub fn propagate_shock(shock_json: &str) -> Result<String, JsError> {
    to_json(parse(shock_json).and_then(|s| shock(&s)))
}

#[wasm_bindgen(js_name = subsidyDemand)]
pub fn subsidy_demand(budget: f64, monthly_subsidy: f64, market_price: f64) -> Result<String, JsError> {
    to_json(subsidy(budget, monthly_subsidy, market_price))
}

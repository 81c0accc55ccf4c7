//! Investment programs, shock derivation and impact reports.
//!
//! A [`Program`] puts its budget (or, for subsidy programs, the budget plus
//! the household co-payments it induces) into a single target sector. Demand
//! programs are read as a final-demand change and run through the Leontief
//! inverse; supply programs are read as a value-added change and run through
//! the Ghosh inverse. Indirect effects are labelled upstream or downstream
//! according to [`IndirectLabeling`].

use std::collections::HashSet;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Vector;
use crate::model::{same_table, sector_index, ModelError, ModelSide, ShockPropagator};
use crate::supply::SUPPLY_SIDE_CAVEAT;
use crate::table::IoTable;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("currency unit `{0}` has no known dollar scale; use USD, USD_thousands, USD_millions or USD_billions")]
    UnknownUnit(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("scenario json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Dollars represented by one unit of `unit`.
pub fn dollars_per_unit(unit: &str) -> Option<f64> {
    match unit {
        "USD" => Some(1.0),
        "USD_thousands" => Some(1e3),
        "USD_millions" => Some(1e6),
        "USD_billions" => Some(1e9),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsidyRule {
    /// Dollars per household per month.
    pub monthly_subsidy: f64,
    /// Average market price, dollars per household per month.
    pub market_price: f64,
    /// Informational only: the budget is treated as one block of
    /// household-years, so the split does not depend on this.
    pub program_years: u32,
}

impl Default for SubsidyRule {
    fn default() -> Self {
        Self {
            monthly_subsidy: 30.0,
            market_price: 61.0,
            program_years: 1,
        }
    }
}

impl SubsidyRule {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.monthly_subsidy > 0.0 && self.monthly_subsidy <= self.market_price) {
            return Err(ScenarioError::Invalid(format!(
                "subsidy must satisfy 0 < monthly_subsidy ({}) <= market_price ({})",
                self.monthly_subsidy, self.market_price
            )));
        }
        Ok(())
    }
}

/// Household-level demand induced by a subsidy budget. Currency in dollars.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubsidyDemand {
    /// Household-years of subsidy the budget pays for.
    pub households: f64,
    /// Co-payments households add on top of the subsidy.
    pub induced_household_spend: f64,
    pub total_demand: f64,
}

/// Splits a subsidy budget into recipients and the co-payments they add.
///
/// Each recipient receives twelve months of `monthly_subsidy` and pays the
/// remainder of `market_price` themselves.
pub fn derive_subsidy_demand(rule: &SubsidyRule, budget: f64) -> SubsidyDemand {
    let households = budget / (rule.monthly_subsidy * 12.0);
    let induced_household_spend = households * (rule.market_price - rule.monthly_subsidy) * 12.0;
    SubsidyDemand {
        households,
        induced_household_spend,
        total_demand: budget + induced_household_spend,
    }
}

/// Rounded figures published for the US$14.2B / $30 / $61 household subsidy
/// case, printed beside the formula values under `--paper-rounding`.
pub const PUBLISHED_SUBSIDY_CASE: (f64, SubsidyDemand) = (
    14.2e9,
    SubsidyDemand {
        households: 39.4e6,
        induced_household_spend: 14.9e9,
        total_demand: 29.1e9,
    },
);

fn published_constants(rule: &SubsidyRule, budget_dollars: f64) -> Option<SubsidyDemand> {
    let (budget, published) = PUBLISHED_SUBSIDY_CASE;
    let matches =
        rule.monthly_subsidy == 30.0 && rule.market_price == 61.0 && ((budget_dollars - budget) / budget).abs() < 1e-9;
    matches.then_some(published)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Program {
    pub name: String,
    /// In the table's currency unit.
    pub budget: f64,
    pub target_sector: String,
    pub model_side: ModelSide,
    pub horizon_years: u32,
    #[serde(default)]
    pub subsidy: Option<SubsidyRule>,
}

impl Program {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.budget > 0.0 && self.budget.is_finite()) {
            return Err(ScenarioError::Invalid(format!(
                "program `{}` budget must be positive",
                self.name
            )));
        }
        if self.horizon_years < 1 {
            return Err(ScenarioError::Invalid(format!(
                "program `{}` horizon_years must be at least 1",
                self.name
            )));
        }
        if let Some(rule) = &self.subsidy {
            rule.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// Annual GDP used as the denominator of every percentage.
    pub gdp_denominator: f64,
    pub programs: Vec<Program>,
}

impl Scenario {
    pub fn from_json<R: Read>(input: R) -> Result<Self, ScenarioError> {
        let s: Scenario = serde_json::from_reader(input)?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.gdp_denominator > 0.0 && self.gdp_denominator.is_finite()) {
            return Err(ScenarioError::Invalid("gdp_denominator must be positive".into()));
        }
        let mut names = HashSet::new();
        for p in &self.programs {
            if !names.insert(p.name.as_str()) {
                return Err(ScenarioError::Invalid(format!("duplicate program name `{}`", p.name)));
            }
            p.validate()?;
        }
        Ok(())
    }

    /// Same scenario with every budget multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Scenario {
        let mut s = self.clone();
        for p in &mut s.programs {
            p.budget *= k;
        }
        s
    }
}

/// Percentage of the scenario's GDP denominator.
pub fn gdp_share(amount: f64, s: &Scenario) -> f64 {
    100.0 * amount / s.gdp_denominator
}

/// Total modelled impact per unit of program budget.
pub fn keynesian_multiplier(total_impact: f64, budget: f64) -> f64 {
    total_impact / budget
}

/// Shock amount a program injects into its target sector, in the table unit.
fn shock_amount(p: &Program, unit: &str) -> Result<(f64, Option<SubsidyDemand>), ScenarioError> {
    match &p.subsidy {
        None => Ok((p.budget, None)),
        Some(rule) => {
            let scale = dollars_per_unit(unit).ok_or_else(|| ScenarioError::UnknownUnit(unit.to_string()))?;
            let d = derive_subsidy_demand(rule, p.budget * scale);
            Ok((d.total_demand / scale, Some(d)))
        }
    }
}

/// One-hot shock vector for a program: ΔF for demand programs, Δv for supply.
pub fn program_shock_vector(p: &Program, t: &IoTable) -> Result<Vector, ScenarioError> {
    let j = sector_index(t, &p.target_sector)?;
    let (amount, _) = shock_amount(p, t.currency_unit())?;
    Ok(Vector::unit(t.len(), j, amount))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndirectLabeling {
    /// Leontief indirect effects are upstream, Ghosh indirect effects downstream.
    #[default]
    LeontiefUpstream,
    LeontiefDownstream,
}

impl IndirectLabeling {
    fn is_upstream(self, side: ModelSide) -> bool {
        matches!(
            (self, side),
            (IndirectLabeling::LeontiefUpstream, ModelSide::Demand)
                | (IndirectLabeling::LeontiefDownstream, ModelSide::Supply)
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct EvaluateOptions {
    pub labeling: IndirectLabeling,
    /// Attach the published rounded subsidy figures where they apply.
    pub paper_rounding: bool,
}

/// Subsidy derivation expressed in the table's currency unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubsidyBreakdown {
    pub households: f64,
    pub induced_household_spend: f64,
    pub total_demand: f64,
}

impl SubsidyBreakdown {
    fn from_dollars(d: SubsidyDemand, scale: f64) -> Self {
        Self {
            households: d.households,
            induced_household_spend: d.induced_household_spend / scale,
            total_demand: d.total_demand / scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProgramImpact {
    pub name: String,
    pub model_side: ModelSide,
    pub target_sector: String,
    pub budget: f64,
    pub shock: f64,
    pub total_impact: f64,
    pub indirect: f64,
    /// `upstream` or `downstream`.
    pub indirect_label: &'static str,
    /// Total impact per unit of budget.
    pub keynesian_multiplier: f64,
    /// Total impact per unit of shock; differs from the above only for subsidy programs.
    pub shock_multiplier: f64,
    pub gdp_share: f64,
    pub horizon_years: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsidy: Option<SubsidyBreakdown>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub published_subsidy: Option<SubsidyBreakdown>,
    pub per_sector_delta: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ImpactTotals {
    pub direct: f64,
    pub upstream: f64,
    pub downstream: f64,
    pub grand_total: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PackageSummary {
    pub budget: f64,
    pub shock: f64,
    /// `grand_total / Σ budget`; zero for an empty package.
    pub keynesian_multiplier: f64,
    /// `grand_total / Σ shock`; zero for an empty package.
    pub shock_multiplier: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpactReport {
    pub currency_unit: String,
    pub gdp_denominator: f64,
    pub labeling: IndirectLabeling,
    pub sectors: Vec<String>,
    pub per_program: Vec<ProgramImpact>,
    pub totals: ImpactTotals,
    /// Same fields as `totals`, as a percentage of `gdp_denominator`.
    pub gdp_shares: ImpactTotals,
    pub package: PackageSummary,
    pub notes: Vec<String>,
}

impl ImpactReport {
    pub fn program(&self, name: &str) -> Option<&ProgramImpact> {
        self.per_program.iter().find(|p| p.name == name)
    }
}

/// Runs every program through its model side and assembles the report.
pub fn evaluate_scenario<D, S>(
    s: &Scenario,
    demand: &D,
    supply: &S,
    opts: &EvaluateOptions,
) -> Result<ImpactReport, ScenarioError>
where
    D: ShockPropagator,
    S: ShockPropagator,
{
    if !same_table(demand.table(), supply.table()) {
        return Err(ModelError::ModelMismatch.into());
    }
    s.validate()?;
    let table = demand.table();
    let unit = table.currency_unit();

    let mut per_program = Vec::with_capacity(s.programs.len());
    let mut totals = ImpactTotals::default();
    let mut package = PackageSummary::default();
    let mut has_supply = false;

    for p in &s.programs {
        let shock_vec = program_shock_vector(p, table)?;
        let (shock, derived) = shock_amount(p, unit)?;
        let delta = match p.model_side {
            ModelSide::Demand => demand.propagate(&shock_vec)?,
            ModelSide::Supply => {
                has_supply = true;
                supply.propagate(&shock_vec)?
            }
        };
        let total_impact = delta.sum();
        let indirect = total_impact - shock;
        let upstream = opts.labeling.is_upstream(p.model_side);
        if upstream {
            totals.upstream += indirect;
        } else {
            totals.downstream += indirect;
        }
        totals.direct += shock;
        totals.grand_total += total_impact;
        package.budget += p.budget;
        package.shock += shock;

        let (subsidy, published_subsidy) = match (derived, &p.subsidy) {
            (Some(d), Some(rule)) => {
                let scale = dollars_per_unit(unit).ok_or_else(|| ScenarioError::UnknownUnit(unit.to_string()))?;
                let published = opts
                    .paper_rounding
                    .then(|| published_constants(rule, p.budget * scale))
                    .flatten()
                    .map(|c| SubsidyBreakdown::from_dollars(c, scale));
                (Some(SubsidyBreakdown::from_dollars(d, scale)), published)
            }
            _ => (None, None),
        };

        per_program.push(ProgramImpact {
            name: p.name.clone(),
            model_side: p.model_side,
            target_sector: p.target_sector.clone(),
            budget: p.budget,
            shock,
            total_impact,
            indirect,
            indirect_label: if upstream { "upstream" } else { "downstream" },
            keynesian_multiplier: keynesian_multiplier(total_impact, p.budget),
            shock_multiplier: keynesian_multiplier(total_impact, shock),
            gdp_share: gdp_share(total_impact, s),
            horizon_years: p.horizon_years,
            subsidy,
            published_subsidy,
            per_sector_delta: delta.into_inner(),
        });
    }

    if package.budget > 0.0 {
        package.keynesian_multiplier = keynesian_multiplier(totals.grand_total, package.budget);
        package.shock_multiplier = keynesian_multiplier(totals.grand_total, package.shock);
    }

    let mut notes = Vec::new();
    if has_supply {
        notes.push(SUPPLY_SIDE_CAVEAT.to_string());
    }
    for p in &s.programs {
        if p.horizon_years > 1 {
            notes.push(format!(
                "{}: impact accrues over the next {} years; the static model applies the full shock once",
                p.name, p.horizon_years
            ));
        }
    }

    Ok(ImpactReport {
        currency_unit: unit.to_string(),
        gdp_denominator: s.gdp_denominator,
        labeling: opts.labeling,
        sectors: table.sector_codes().iter().map(|c| c.to_string()).collect(),
        per_program,
        gdp_shares: ImpactTotals {
            direct: gdp_share(totals.direct, s),
            upstream: gdp_share(totals.upstream, s),
            downstream: gdp_share(totals.downstream, s),
            grand_total: gdp_share(totals.grand_total, s),
        },
        totals,
        package,
        notes,
    })
}

//! State-level allocation-versus-need statistics.

use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AllocationError {
    #[error("state `{0}` has no unconnected households; per-household allocation is not applicable")]
    NoUnconnectedHouseholds(String),
    #[error("invalid record for `{state}`: {reason}")]
    InvalidRecord { state: String, reason: String },
    #[error("rank correlation needs at least 3 comparable states, got {0}")]
    InsufficientData(usize),
    #[error("states.csv: {0}")]
    Csv(String),
}

/// One row of `states.csv`.
///
/// `unconnected_households` is taken as given; whether it counts households
/// without available service or without a subscription is up to the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub state: String,
    pub bead_allocation: f64,
    pub unconnected_households: u64,
    pub acp_enrolled_households: u64,
    pub total_households: u64,
}

impl StateRecord {
    pub fn validate(&self) -> Result<(), AllocationError> {
        let invalid = |reason: &str| AllocationError::InvalidRecord {
            state: self.state.clone(),
            reason: reason.to_string(),
        };
        if !(self.bead_allocation >= 0.0 && self.bead_allocation.is_finite()) {
            return Err(invalid("bead_allocation must be a nonnegative number"));
        }
        if self.acp_enrolled_households > self.total_households {
            return Err(invalid("acp_enrolled_households exceeds total_households"));
        }
        Ok(())
    }
}

pub fn read_states_csv<R: Read>(input: R) -> Result<Vec<StateRecord>, AllocationError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    let mut records = Vec::new();
    for rec in rdr.deserialize() {
        let rec: StateRecord = rec.map_err(|e| AllocationError::Csv(e.to_string()))?;
        rec.validate()?;
        records.push(rec);
    }
    Ok(records)
}

/// BEAD dollars per unconnected household.
pub fn per_household_allocation(r: &StateRecord) -> Result<f64, AllocationError> {
    if r.unconnected_households == 0 {
        return Err(AllocationError::NoUnconnectedHouseholds(r.state.clone()));
    }
    Ok(r.bead_allocation / r.unconnected_households as f64)
}

/// ACP enrollment as a percentage of all households.
pub fn enrollment_rate(r: &StateRecord) -> Result<f64, AllocationError> {
    if r.total_households == 0 {
        return Err(AllocationError::InvalidRecord {
            state: r.state.clone(),
            reason: "total_households is zero".into(),
        });
    }
    Ok(100.0 * r.acp_enrolled_households as f64 / r.total_households as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    BeadAllocation,
    UnconnectedHouseholds,
    AcpEnrolledHouseholds,
    TotalHouseholds,
    AllocationPerUnconnected,
    EnrollmentRate,
}

impl Metric {
    /// `None` when the metric is undefined for this record.
    pub fn value(self, r: &StateRecord) -> Option<f64> {
        match self {
            Metric::BeadAllocation => Some(r.bead_allocation),
            Metric::UnconnectedHouseholds => Some(r.unconnected_households as f64),
            Metric::AcpEnrolledHouseholds => Some(r.acp_enrolled_households as f64),
            Metric::TotalHouseholds => Some(r.total_households as f64),
            Metric::AllocationPerUnconnected => per_household_allocation(r).ok(),
            Metric::EnrollmentRate => enrollment_rate(r).ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedState {
    pub rank: usize,
    pub state: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ranking {
    pub metric: Metric,
    /// Highest value first; ties keep input order.
    pub ranked: Vec<RankedState>,
    /// States for which the metric is undefined.
    pub excluded: Vec<String>,
}

pub fn rank_states(records: &[StateRecord], metric: Metric) -> Ranking {
    let mut defined = Vec::new();
    let mut excluded = Vec::new();
    for r in records {
        match metric.value(r) {
            Some(v) => defined.push((r.state.clone(), v)),
            None => excluded.push(r.state.clone()),
        }
    }
    defined.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ranking {
        metric,
        ranked: defined
            .into_iter()
            .enumerate()
            .map(|(k, (state, value))| RankedState {
                rank: k + 1,
                state,
                value,
            })
            .collect(),
        excluded,
    }
}

/// 1-based ranks, ties sharing the average of the positions they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = avg;
        }
        start = end;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

/// Spearman correlation of paired samples: Pearson correlation of average ranks.
/// A constant series yields 0.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Spearman correlation between two metrics over the states where both are defined.
pub fn rank_correlation(records: &[StateRecord], x_metric: Metric, y_metric: Metric) -> Result<f64, AllocationError> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter_map(|r| Some((x_metric.value(r)?, y_metric.value(r)?)))
        .unzip();
    if xs.len() < 3 {
        return Err(AllocationError::InsufficientData(xs.len()));
    }
    Ok(spearman(&xs, &ys))
}

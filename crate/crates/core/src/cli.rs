//! `io-impact` command-line surface.
//!
//! Machine-readable output goes to stdout, diagnostics to stderr. Exit codes:
//! 0 success, 1 domain error, 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::allocation::{self, AllocationError, Metric, Ranking};
use crate::demand::DemandModel;
use crate::linalg::{LinalgError, Matrix, Vector};
use crate::model::{ModelError, ModelSide};
use crate::sankey::emit_sankey;
use crate::scenario::{self, EvaluateOptions, ImpactReport, IndirectLabeling, Scenario, ScenarioError};
use crate::supply::{SupplyModel, SUPPLY_SIDE_CAVEAT};
use crate::table::{
    aggregate_sectors, load_table_with, validate, write_matrix_csv, IoTable, LoadOptions, SectorMapping, TableError,
    ValidationReport, DEFAULT_REL_TOL, DEFAULT_UNIT,
};

pub const NO_COLOR_ENV: &str = "IO_IMPACT_NO_COLOR";

#[derive(Debug, Parser)]
#[command(
    name = "io-impact",
    version,
    about = "Input-output impact modeling: Leontief and Ghosh shocks, scenarios and allocation statistics"
)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Inter-industry flow matrix CSV
    #[arg(long, global = true)]
    flows: Option<PathBuf>,
    /// Final demand / value added / total output CSV
    #[arg(long, global = true)]
    vectors: Option<PathBuf>,
    /// Currency unit of every table and scenario amount
    #[arg(long, global = true, default_value = DEFAULT_UNIT)]
    unit: String,
    /// Relative tolerance for the balance identities
    #[arg(long, global = true, default_value_t = DEFAULT_REL_TOL)]
    rel_tol: f64,
    #[arg(long, global = true, default_value_t = 2022)]
    year: i32,
    /// Replace negative flows by zero (reported on stderr)
    #[arg(long, global = true)]
    clamp_negative_flows: bool,
    /// Aggregate sectors with a source_code,target_code,target_name CSV before modelling
    #[arg(long, global = true)]
    mapping: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the row and column balance identities
    Validate,
    /// Emit coefficient and inverse matrices as CSV
    Coefficients {
        #[arg(long, value_enum, default_value_t = Side::Demand)]
        side: Side,
        /// Emit only one matrix (reloadable as a single CSV)
        #[arg(long, value_enum)]
        only: Option<MatrixKind>,
        /// Write the matrices as files in this directory instead of stdout
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Propagate a single-sector shock
    Shock {
        #[arg(long, value_enum)]
        side: Side,
        #[arg(long)]
        sector: String,
        #[arg(long, allow_negative_numbers = true)]
        amount: f64,
    },
    /// Evaluate a scenario file into an impact report
    Scenario {
        #[arg(long)]
        scenario: PathBuf,
        /// Also print the published rounded subsidy figures where they apply
        #[arg(long)]
        paper_rounding: bool,
        #[arg(long, value_enum, default_value_t = Labeling::LeontiefUpstream)]
        labeling: Labeling,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Rank states by allocation per unconnected household and enrollment rate
    Allocation {
        #[arg(long)]
        states: PathBuf,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
    },
    /// Emit Sankey flow data for a scenario
    Sankey {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 10)]
        top_k: usize,
        #[arg(long, value_enum, default_value_t = Labeling::LeontiefUpstream)]
        labeling: Labeling,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Side {
    Demand,
    Supply,
}

impl From<Side> for ModelSide {
    fn from(s: Side) -> Self {
        match s {
            Side::Demand => ModelSide::Demand,
            Side::Supply => ModelSide::Supply,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum MatrixKind {
    Coefficients,
    Inverse,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Labeling {
    LeontiefUpstream,
    LeontiefDownstream,
}

impl From<Labeling> for IndirectLabeling {
    fn from(l: Labeling) -> Self {
        match l {
            Labeling::LeontiefUpstream => IndirectLabeling::LeontiefUpstream,
            Labeling::LeontiefDownstream => IndirectLabeling::LeontiefDownstream,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0} is required for this subcommand")]
    MissingInput(&'static str),
    #[error("cannot open {path}: {source}")]
    Open { path: PathBuf, source: std::io::Error },
    #[error("table is not balanced within rel_tol {rel_tol}: {findings} finding(s); run `validate` for details")]
    Imbalanced { rel_tol: f64, findings: usize },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Allocation(#[from] AllocationError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Stable error name printed in diagnostics.
    pub fn kind_name(&self) -> &'static str {
        fn linalg(e: &LinalgError) -> &'static str {
            match e {
                LinalgError::Dimension { .. } | LinalgError::EntryCount { .. } | LinalgError::NotSquare { .. } => {
                    "DimensionError"
                }
                LinalgError::NonFinite { .. } => "NonFiniteError",
                LinalgError::Singular { .. } | LinalgError::Residual { .. } => "SingularMatrixError",
            }
        }
        fn model(e: &ModelError) -> &'static str {
            match e {
                ModelError::NonProductive { .. } => "NonProductiveError",
                ModelError::UnknownSector(_) => "UnknownSectorError",
                ModelError::ModelMismatch => "ModelMismatchError",
                ModelError::Linalg(l) => linalg(l),
            }
        }
        match self {
            CliError::MissingInput(_) => "MissingInputError",
            CliError::Open { .. } | CliError::Io(_) => "IoError",
            CliError::Imbalanced { .. } => "ImbalancedTableError",
            CliError::Table(t) => match t {
                TableError::Parse { .. } => "ParseError",
                TableError::Schema { .. } => "SchemaError",
                TableError::SectorMismatch(_) => "SectorMismatchError",
                TableError::ZeroOutput(_) => "ZeroOutputError",
                TableError::NegativeFlow { .. } => "NegativeFlowError",
                TableError::NegativeValueAdded { .. } => "NegativeValueAddedError",
                TableError::BadSectorCode(_) => "SectorCodeError",
                TableError::EmptyGroup(_) => "EmptyGroupError",
                TableError::Unmapped(_) => "UnmappedSectorError",
                TableError::Linalg(l) => linalg(l),
                TableError::Io(_) => "IoError",
            },
            CliError::Model(m) => model(m),
            CliError::Scenario(s) => match s {
                ScenarioError::Invalid(_) => "InvalidScenarioError",
                ScenarioError::UnknownUnit(_) => "UnknownUnitError",
                ScenarioError::Model(m) => model(m),
                ScenarioError::Json(_) => "ParseError",
            },
            CliError::Allocation(a) => match a {
                AllocationError::NoUnconnectedHouseholds(_) => "NoUnconnectedHouseholdsError",
                AllocationError::InvalidRecord { .. } => "InvalidRecordError",
                AllocationError::InsufficientData(_) => "InsufficientDataError",
                AllocationError::Csv(_) => "ParseError",
            },
            CliError::Json(_) => "ParseError",
        }
    }
}

struct Styler {
    color: bool,
}

impl Styler {
    fn paint(&self, code: &str, text: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }
}

/// Runs the CLI with explicit streams and returns the process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let color = std::env::var_os(NO_COLOR_ENV).is_none() && std::io::stderr().is_terminal();
    let style = Styler { color };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = if color {
                e.render().ansi().to_string()
            } else {
                e.render().to_string()
            };
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match execute(&cli, out, err, &style) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(
                err,
                "{}: {}",
                style.paint("1;31", &format!("error[{}]", e.kind_name())),
                e
            );
            1
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|source| CliError::Open {
        path: path.to_path_buf(),
        source,
    })
}

fn load(common: &CommonArgs, err: &mut dyn Write, style: &Styler) -> Result<IoTable, CliError> {
    let flows = common.flows.as_deref().ok_or(CliError::MissingInput("--flows"))?;
    let vectors = common.vectors.as_deref().ok_or(CliError::MissingInput("--vectors"))?;
    let opts = LoadOptions {
        unit: common.unit.clone(),
        year: common.year,
        clamp_negative_flows: common.clamp_negative_flows,
    };
    let loaded = load_table_with(open(flows)?, open(vectors)?, &opts)?;
    for c in &loaded.clamped {
        writeln!(
            err,
            "{}: clamped negative flow {} -> {} ({}) to 0",
            style.paint("33", "warning"),
            c.from,
            c.to,
            c.original
        )?;
    }
    let table = match &common.mapping {
        Some(path) => aggregate_sectors(&loaded.table, &SectorMapping::from_csv(open(path)?)?)?,
        None => loaded.table,
    };
    Ok(table)
}

fn load_balanced(common: &CommonArgs, err: &mut dyn Write, style: &Styler) -> Result<Arc<IoTable>, CliError> {
    let table = load(common, err, style)?;
    let report = validate(&table, common.rel_tol);
    if !report.is_balanced {
        return Err(CliError::Imbalanced {
            rel_tol: common.rel_tol,
            findings: report.findings.len(),
        });
    }
    Ok(Arc::new(table))
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Six significant digits for human-readable tables.
pub fn format_sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    if (-5..15).contains(&magnitude) {
        let decimals = (5 - magnitude).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.5e}")
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write, style: &Styler) -> Result<i32, CliError> {
    let common = &cli.common;
    match &cli.command {
        Command::Validate => {
            let table = load(common, err, style)?;
            let report = validate(&table, common.rel_tol);
            write_validation(out, &table, &report)?;
            Ok(if report.is_balanced { 0 } else { 1 })
        }
        Command::Coefficients { side, only, out_dir } => {
            let table = load_balanced(common, err, style)?;
            let codes = table.sector_codes();
            let (names, coef, inv): ([&str; 2], Matrix, Matrix) = match side {
                Side::Demand => {
                    let m = DemandModel::build(table.clone())?;
                    (
                        ["a", "l"],
                        m.technical_coefficients().clone(),
                        m.leontief_inverse().clone(),
                    )
                }
                Side::Supply => {
                    let m = SupplyModel::build(table.clone())?;
                    (
                        ["b", "g"],
                        m.allocation_coefficients().clone(),
                        m.ghosh_inverse().clone(),
                    )
                }
            };
            let blocks: Vec<(&str, &Matrix)> = [
                (names[0], &coef, MatrixKind::Coefficients),
                (names[1], &inv, MatrixKind::Inverse),
            ]
            .into_iter()
            .filter(|(_, _, kind)| only.is_none_or(|o| o == *kind))
            .map(|(n, m, _)| (n, m))
            .collect();
            match out_dir {
                Some(dir) => {
                    std::fs::create_dir_all(dir)?;
                    for (name, m) in blocks {
                        let path = dir.join(format!("{name}.csv"));
                        write_matrix_csv(File::create(&path)?, &codes, m)?;
                        writeln!(err, "wrote {}", path.display())?;
                    }
                }
                None => {
                    let single = blocks.len() == 1;
                    for (k, (name, m)) in blocks.into_iter().enumerate() {
                        if !single {
                            if k > 0 {
                                writeln!(out)?;
                            }
                            writeln!(out, "# {name}")?;
                        }
                        write_matrix_csv(&mut *out, &codes, m)?;
                    }
                }
            }
            Ok(0)
        }
        Command::Shock { side, sector, amount } => {
            let table = load_balanced(common, err, style)?;
            let j = table
                .sector_index(sector)
                .ok_or_else(|| ModelError::UnknownSector(sector.clone()))?;
            let shock = Vector::new(Vector::unit(table.len(), j, *amount).into_inner()).map_err(ModelError::from)?;
            let delta = match side {
                Side::Demand => DemandModel::build(table.clone())?.propagate(&shock)?,
                Side::Supply => {
                    writeln!(err, "note: {SUPPLY_SIDE_CAVEAT}")?;
                    SupplyModel::build(table.clone())?.propagate(&shock)?
                }
            };
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["sector", "shock", "delta_output"])
                .map_err(std::io::Error::from)?;
            for (k, code) in table.sector_codes().iter().enumerate() {
                w.write_record([code.to_string(), shock[k].to_string(), delta[k].to_string()])
                    .map_err(std::io::Error::from)?;
            }
            w.flush()?;
            Ok(0)
        }
        Command::Scenario {
            scenario: path,
            paper_rounding,
            labeling,
            format,
        } => {
            let report = evaluate(common, path, *labeling, *paper_rounding, err, style)?;
            match format {
                ReportFormat::Json => write_json(out, &report)?,
                ReportFormat::Table => write_report_table(out, &report)?,
            }
            Ok(0)
        }
        Command::Allocation { states, format } => {
            let records = allocation::read_states_csv(open(states)?)?;
            let per_household = allocation::rank_states(&records, Metric::AllocationPerUnconnected);
            let enrollment = allocation::rank_states(&records, Metric::EnrollmentRate);
            let correlation = match allocation::rank_correlation(
                &records,
                Metric::AllocationPerUnconnected,
                Metric::EnrollmentRate,
            ) {
                Ok(r) => Some(r),
                Err(AllocationError::InsufficientData(n)) => {
                    writeln!(
                        err,
                        "{}: only {n} comparable states; correlation omitted",
                        style.paint("33", "warning")
                    )?;
                    None
                }
                Err(e) => return Err(e.into()),
            };
            match format {
                TableFormat::Json => write_json(
                    out,
                    &AllocationOutput {
                        allocation_per_unconnected_household: per_household,
                        enrollment_rate: enrollment,
                        spearman_allocation_vs_enrollment: correlation,
                    },
                )?,
                TableFormat::Csv => write_allocation_csv(out, &records, &per_household, &enrollment, correlation)?,
            }
            Ok(0)
        }
        Command::Sankey {
            scenario: path,
            top_k,
            labeling,
        } => {
            let report = evaluate(common, path, *labeling, false, err, style)?;
            write_json(out, &emit_sankey(&report, *top_k))?;
            Ok(0)
        }
    }
}

fn evaluate(
    common: &CommonArgs,
    path: &Path,
    labeling: Labeling,
    paper_rounding: bool,
    err: &mut dyn Write,
    style: &Styler,
) -> Result<ImpactReport, CliError> {
    let table = load_balanced(common, err, style)?;
    let scen = Scenario::from_json(open(path)?)?;
    let demand = DemandModel::build(table.clone())?;
    let supply = SupplyModel::build(table)?;
    let opts = EvaluateOptions {
        labeling: labeling.into(),
        paper_rounding,
    };
    Ok(scenario::evaluate_scenario(&scen, &demand, &supply, &opts)?)
}

fn write_validation(out: &mut dyn Write, table: &IoTable, report: &ValidationReport) -> Result<(), CliError> {
    writeln!(out, "balanced: {}", report.is_balanced)?;
    writeln!(out, "sectors: {}", table.len())?;
    writeln!(out, "unit: {}", table.currency_unit())?;
    writeln!(out, "rel_tol: {}", report.rel_tol)?;
    for f in &report.findings {
        let kind = match f.kind {
            crate::table::ImbalanceKind::Row => "row",
            crate::table::ImbalanceKind::Column => "column",
        };
        writeln!(
            out,
            "imbalance: {kind} sector={} magnitude={}",
            f.sector,
            format_sig6(f.magnitude)
        )?;
    }
    Ok(())
}

fn write_report_table(out: &mut dyn Write, r: &ImpactReport) -> Result<(), CliError> {
    writeln!(out, "unit: {}", r.currency_unit)?;
    writeln!(
        out,
        "{:<16} {:<7} {:>14} {:>14} {:>14} {:>11} {:>10} {:>10}",
        "program", "side", "budget", "shock", "total_impact", "indirect", "mult", "gdp_%"
    )?;
    for p in &r.per_program {
        writeln!(
            out,
            "{:<16} {:<7} {:>14} {:>14} {:>14} {:>11} {:>10} {:>10}",
            p.name,
            p.model_side.to_string(),
            format_sig6(p.budget),
            format_sig6(p.shock),
            format_sig6(p.total_impact),
            p.indirect_label,
            format_sig6(p.keynesian_multiplier),
            format_sig6(p.gdp_share)
        )?;
    }
    let t = &r.totals;
    let g = &r.gdp_shares;
    writeln!(
        out,
        "direct      {:>14}  ({}%)",
        format_sig6(t.direct),
        format_sig6(g.direct)
    )?;
    writeln!(
        out,
        "upstream    {:>14}  ({}%)",
        format_sig6(t.upstream),
        format_sig6(g.upstream)
    )?;
    writeln!(
        out,
        "downstream  {:>14}  ({}%)",
        format_sig6(t.downstream),
        format_sig6(g.downstream)
    )?;
    writeln!(
        out,
        "grand_total {:>14}  ({}%)",
        format_sig6(t.grand_total),
        format_sig6(g.grand_total)
    )?;
    writeln!(
        out,
        "package multiplier: {} (vs budget), {} (vs shock)",
        format_sig6(r.package.keynesian_multiplier),
        format_sig6(r.package.shock_multiplier)
    )?;
    for n in &r.notes {
        writeln!(out, "note: {n}")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct AllocationOutput {
    allocation_per_unconnected_household: Ranking,
    enrollment_rate: Ranking,
    spearman_allocation_vs_enrollment: Option<f64>,
}

fn write_allocation_csv(
    out: &mut dyn Write,
    records: &[allocation::StateRecord],
    per_household: &Ranking,
    enrollment: &Ranking,
    correlation: Option<f64>,
) -> Result<(), CliError> {
    let lookup = |r: &Ranking, state: &str| {
        r.ranked
            .iter()
            .find(|s| s.state == state)
            .map(|s| (s.value.to_string(), s.rank.to_string()))
            .unwrap_or_default()
    };
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record([
        "state",
        "allocation_per_unconnected",
        "allocation_rank",
        "enrollment_rate",
        "enrollment_rank",
    ])
    .map_err(std::io::Error::from)?;
    for r in records {
        let (a, ar) = lookup(per_household, &r.state);
        let (e, er) = lookup(enrollment, &r.state);
        w.write_record([r.state.as_str(), &a, &ar, &e, &er])
            .map_err(std::io::Error::from)?;
    }
    w.flush()?;
    drop(w);
    if let Some(c) = correlation {
        writeln!(out, "# spearman_allocation_vs_enrollment,{c}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(146.0), "146.000");
        assert_eq!(format_sig6(2.445_561_139), "2.44556");
        assert_eq!(format_sig6(0.003_190_032), "0.00319003");
        assert_eq!(format_sig6(42_450.0), "42450.0");
        assert_eq!(format_sig6(1.0), "1.00000");
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(-1.0), "-1.00000");
        assert_eq!(format_sig6(1.5e20), "1.50000e20");
    }

    #[test]
    fn usage_errors_exit_two() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run_cli(["io-impact", "frobnicate"], &mut out, &mut err), 2);
        assert!(String::from_utf8(err).unwrap().contains("Usage"));
    }

    #[test]
    fn missing_inputs_are_domain_errors() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run_cli(["io-impact", "validate"], &mut out, &mut err), 1);
        let text = String::from_utf8(err).unwrap();
        assert!(text.contains("MissingInputError"), "{text}");
    }
}

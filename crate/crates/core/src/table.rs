//! Inter-industry transaction tables: data model, CSV ingestion, balance
//! checks and sector aggregation.

use std::collections::{HashMap, HashSet};
use std::io::{Read, Write};

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{LinalgError, Matrix, Vector};

/// Default relative tolerance for [`validate`]; published tables are rounded
/// to the nearest million.
pub const DEFAULT_REL_TOL: f64 = 1e-6;

pub const DEFAULT_UNIT: &str = "USD_millions";

#[derive(Debug, Error)]
pub enum TableError {
    #[error("parse error in {source_name} at line {line}, column {column}: {message}")]
    Parse {
        source_name: String,
        line: u64,
        column: String,
        message: String,
    },
    #[error("schema error in {source_name}: missing column `{column}`")]
    Schema { source_name: String, column: String },
    #[error("sector mismatch: {0}")]
    SectorMismatch(String),
    #[error("sector `{0}` has zero or negative total output")]
    ZeroOutput(String),
    #[error("negative flow {value} from `{from}` to `{to}`")]
    NegativeFlow { from: String, to: String, value: f64 },
    #[error("sector `{sector}` has negative value added {value}")]
    NegativeValueAdded { sector: String, value: f64 },
    #[error("duplicate or empty sector code `{0}`")]
    BadSectorCode(String),
    #[error("aggregation group `{0}` has no member sectors")]
    EmptyGroup(String),
    #[error("sector `{0}` is not covered by the aggregation mapping")]
    Unmapped(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SectorId {
    pub code: String,
    pub name: String,
}

impl SectorId {
    pub fn new(code: impl Into<String>, name: impl Into<String>) -> Self {
        Self {
            code: code.into(),
            name: name.into(),
        }
    }

    /// Sector whose human label is its code.
    pub fn from_code(code: impl Into<String>) -> Self {
        let code = code.into();
        Self {
            name: code.clone(),
            code,
        }
    }
}

/// One economy-year snapshot: flows `z`, final demand `f`, value added `v`
/// and total output `x`, all in `currency_unit`.
///
/// Construction enforces nonnegative flows and value added and strictly
/// positive output. Row/column balance is checked separately by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct IoTable {
    sectors: Vec<SectorId>,
    z: Matrix,
    f: Vector,
    v: Vector,
    x: Vector,
    currency_unit: String,
    year: i32,
}

impl IoTable {
    pub fn new(
        sectors: Vec<SectorId>,
        z: Matrix,
        f: Vector,
        v: Vector,
        x: Vector,
        currency_unit: impl Into<String>,
        year: i32,
    ) -> Result<Self, TableError> {
        let n = sectors.len();
        if z.shape() != (n, n) {
            return Err(LinalgError::Dimension {
                left: (n, n),
                right: z.shape(),
            }
            .into());
        }
        for vec in [&f, &v, &x] {
            if vec.len() != n {
                return Err(LinalgError::Dimension {
                    left: (n, 1),
                    right: (vec.len(), 1),
                }
                .into());
            }
        }
        let mut seen = HashSet::new();
        for s in &sectors {
            if s.code.is_empty() || !seen.insert(s.code.as_str()) {
                return Err(TableError::BadSectorCode(s.code.clone()));
            }
        }
        for (i, s) in sectors.iter().enumerate() {
            if x[i] <= 0.0 {
                return Err(TableError::ZeroOutput(s.code.clone()));
            }
            if v[i] < 0.0 {
                return Err(TableError::NegativeValueAdded {
                    sector: s.code.clone(),
                    value: v[i],
                });
            }
            for (j, to) in sectors.iter().enumerate() {
                if z[(i, j)] < 0.0 {
                    return Err(TableError::NegativeFlow {
                        from: s.code.clone(),
                        to: to.code.clone(),
                        value: z[(i, j)],
                    });
                }
            }
        }
        Ok(Self {
            sectors,
            z,
            f,
            v,
            x,
            currency_unit: currency_unit.into(),
            year,
        })
    }

    pub fn len(&self) -> usize {
        self.sectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sectors.is_empty()
    }

    pub fn sectors(&self) -> &[SectorId] {
        &self.sectors
    }

    pub fn sector_codes(&self) -> Vec<&str> {
        self.sectors.iter().map(|s| s.code.as_str()).collect()
    }

    pub fn sector_index(&self, code: &str) -> Option<usize> {
        self.sectors.iter().position(|s| s.code == code)
    }

    pub fn flows(&self) -> &Matrix {
        &self.z
    }

    pub fn final_demand(&self) -> &Vector {
        &self.f
    }

    pub fn value_added(&self) -> &Vector {
        &self.v
    }

    pub fn total_output(&self) -> &Vector {
        &self.x
    }

    pub fn currency_unit(&self) -> &str {
        &self.currency_unit
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    /// Writes `flows.csv` and `vectors.csv` in the loader's schema.
    pub fn write_csv<W1: Write, W2: Write>(&self, flows: W1, vectors: W2) -> Result<(), TableError> {
        write_matrix_csv(flows, &self.sector_codes(), &self.z)?;
        let mut w = csv::Writer::from_writer(vectors);
        w.write_record(VECTOR_COLUMNS).map_err(csv_io)?;
        for (i, s) in self.sectors.iter().enumerate() {
            w.write_record([
                s.code.clone(),
                self.f[i].to_string(),
                self.v[i].to_string(),
                self.x[i].to_string(),
            ])
            .map_err(csv_io)?;
        }
        w.flush()?;
        Ok(())
    }
}

const VECTOR_COLUMNS: [&str; 4] = ["sector", "final_demand", "value_added", "total_output"];

fn csv_io(e: csv::Error) -> TableError {
    TableError::Io(e.into())
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub unit: String,
    pub year: i32,
    /// Replace negative flows by zero instead of rejecting the table.
    pub clamp_negative_flows: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            unit: DEFAULT_UNIT.to_string(),
            year: 2022,
            clamp_negative_flows: false,
        }
    }
}

/// A negative flow replaced by zero during loading.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClampedFlow {
    pub from: String,
    pub to: String,
    pub original: f64,
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub table: IoTable,
    pub clamped: Vec<ClampedFlow>,
}

/// Loads a table with default options. Balances are not checked here.
pub fn load_table<R1: Read, R2: Read>(flows: R1, vectors: R2) -> Result<IoTable, TableError> {
    load_table_with(flows, vectors, &LoadOptions::default()).map(|l| l.table)
}

pub fn load_table_with<R1: Read, R2: Read>(flows: R1, vectors: R2, opts: &LoadOptions) -> Result<Loaded, TableError> {
    let (codes, mut z) = read_matrix_csv(flows, "flows.csv")?;
    let rows = read_vectors_csv(vectors)?;

    let vector_codes: Vec<&str> = rows.iter().map(|r| r.0.as_str()).collect();
    if codes.len() != vector_codes.len() {
        return Err(TableError::SectorMismatch(format!(
            "flows.csv has {} sectors, vectors.csv has {}",
            codes.len(),
            vector_codes.len()
        )));
    }
    if let Some(k) = codes.iter().zip(&vector_codes).position(|(a, b)| a != b) {
        return Err(TableError::SectorMismatch(format!(
            "row {}: flows.csv has `{}`, vectors.csv has `{}`",
            k + 1,
            codes[k],
            vector_codes[k]
        )));
    }

    let mut clamped = Vec::new();
    if opts.clamp_negative_flows {
        z = z.map(|i, j, v| {
            if v < 0.0 {
                clamped.push(ClampedFlow {
                    from: codes[i].clone(),
                    to: codes[j].clone(),
                    original: v,
                });
                0.0
            } else {
                v
            }
        })?;
    }

    let f = Vector::new(rows.iter().map(|r| r.1[0]).collect())?;
    let v = Vector::new(rows.iter().map(|r| r.1[1]).collect())?;
    let x = Vector::new(rows.iter().map(|r| r.1[2]).collect())?;
    let sectors = codes.into_iter().map(SectorId::from_code).collect();
    let table = IoTable::new(sectors, z, f, v, x, opts.unit.clone(), opts.year)?;
    Ok(Loaded { table, clamped })
}

fn parse_number(field: &str, source_name: &str, line: u64, column: &str) -> Result<f64, TableError> {
    let value: f64 = field.trim().parse().map_err(|e| TableError::Parse {
        source_name: source_name.to_string(),
        line,
        column: column.to_string(),
        message: format!("`{field}`: {e}"),
    })?;
    if !value.is_finite() {
        return Err(TableError::Parse {
            source_name: source_name.to_string(),
            line,
            column: column.to_string(),
            message: format!("`{field}` is not finite"),
        });
    }
    Ok(value)
}

fn csv_parse_error(e: csv::Error, source_name: &str) -> TableError {
    let line = e.position().map_or(0, |p| p.line());
    TableError::Parse {
        source_name: source_name.to_string(),
        line,
        column: String::new(),
        message: e.to_string(),
    }
}

/// Reads a square matrix in the `sector,<code_1>,...,<code_n>` schema.
///
/// Row codes must repeat the header codes in the same order.
pub fn read_matrix_csv<R: Read>(input: R, source_name: &str) -> Result<(Vec<String>, Matrix), TableError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let headers = rdr.headers().map_err(|e| csv_parse_error(e, source_name))?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(TableError::Parse {
            source_name: source_name.to_string(),
            line: 1,
            column: String::new(),
            message: "empty file".to_string(),
        });
    }
    if headers[0].trim() != "sector" {
        return Err(TableError::Schema {
            source_name: source_name.to_string(),
            column: "sector".to_string(),
        });
    }
    let codes: Vec<String> = headers.iter().skip(1).map(|h| h.trim().to_string()).collect();
    let n = codes.len();
    if n == 0 {
        return Err(TableError::Parse {
            source_name: source_name.to_string(),
            line: 1,
            column: String::new(),
            message: "header lists no sectors".to_string(),
        });
    }

    let mut data = Vec::with_capacity(n * n);
    let mut row_codes = Vec::with_capacity(n);
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_parse_error(e, source_name))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != n + 1 {
            return Err(TableError::Parse {
                source_name: source_name.to_string(),
                line,
                column: String::new(),
                message: format!("expected {} fields, found {}", n + 1, rec.len()),
            });
        }
        row_codes.push(rec[0].trim().to_string());
        for (k, field) in rec.iter().skip(1).enumerate() {
            data.push(parse_number(field, source_name, line, &codes[k])?);
        }
    }
    if row_codes.len() != n {
        return Err(TableError::SectorMismatch(format!(
            "{source_name}: header lists {n} sectors but {} rows follow",
            row_codes.len()
        )));
    }
    if let Some(k) = row_codes.iter().zip(&codes).position(|(a, b)| a != b) {
        return Err(TableError::SectorMismatch(format!(
            "{source_name}: row {} is `{}`, header column is `{}`",
            k + 1,
            row_codes[k],
            codes[k]
        )));
    }
    Ok((codes, Matrix::new(n, n, data)?))
}

pub fn write_matrix_csv<W: Write>(out: W, codes: &[&str], m: &Matrix) -> Result<(), TableError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["sector".to_string()];
    header.extend(codes.iter().map(|c| c.to_string()));
    w.write_record(&header).map_err(csv_io)?;
    for (i, code) in codes.iter().enumerate() {
        let mut rec = vec![code.to_string()];
        rec.extend(m.row(i).iter().map(|v| v.to_string()));
        w.write_record(&rec).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn read_vectors_csv<R: Read>(input: R) -> Result<Vec<(String, [f64; 3])>, TableError> {
    const SOURCE: &str = "vectors.csv";
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers().map_err(|e| csv_parse_error(e, SOURCE))?.clone();
    let mut idx = [0usize; 4];
    for (slot, name) in idx.iter_mut().zip(VECTOR_COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| TableError::Schema {
                source_name: SOURCE.to_string(),
                column: name.to_string(),
            })?;
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_parse_error(e, SOURCE))?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |k: usize| rec.get(idx[k]).unwrap_or("");
        let mut values = [0.0; 3];
        for (k, value) in values.iter_mut().enumerate() {
            *value = parse_number(field(k + 1), SOURCE, line, VECTOR_COLUMNS[k + 1])?;
        }
        rows.push((field(0).trim().to_string(), values));
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ImbalanceKind {
    /// `Σ_j z_ij + f_i` differs from `x_i`.
    Row,
    /// `Σ_i z_ij + v_j` differs from `x_j`.
    Column,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Imbalance {
    pub sector: String,
    pub kind: ImbalanceKind,
    /// Signed: reconstructed total minus recorded total output.
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub is_balanced: bool,
    pub rel_tol: f64,
    pub findings: Vec<Imbalance>,
}

/// Checks both accounting identities; a finding is raised when the imbalance
/// exceeds `rel_tol · x_i`.
pub fn validate(t: &IoTable, rel_tol: f64) -> ValidationReport {
    let row_sums = t.z.row_sums();
    let col_sums = t.z.column_sums();
    let mut findings = Vec::new();
    for (i, s) in t.sectors.iter().enumerate() {
        let limit = rel_tol * t.x[i];
        let row = row_sums[i] + t.f[i] - t.x[i];
        if row.abs() > limit {
            findings.push(Imbalance {
                sector: s.code.clone(),
                kind: ImbalanceKind::Row,
                magnitude: row,
            });
        }
        let col = col_sums[i] + t.v[i] - t.x[i];
        if col.abs() > limit {
            findings.push(Imbalance {
                sector: s.code.clone(),
                kind: ImbalanceKind::Column,
                magnitude: col,
            });
        }
    }
    ValidationReport {
        is_balanced: findings.is_empty(),
        rel_tol,
        findings,
    }
}

/// Source-to-target sector mapping. Target order follows first appearance.
#[derive(Debug, Clone, Default)]
pub struct SectorMapping {
    entries: Vec<(String, SectorId)>,
}

impl SectorMapping {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, source_code: impl Into<String>, target: SectorId) {
        self.entries.push((source_code.into(), target));
    }

    /// Reads a `source_code,target_code,target_name` CSV.
    pub fn from_csv<R: Read>(input: R) -> Result<Self, TableError> {
        const SOURCE: &str = "mapping.csv";
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr.headers().map_err(|e| csv_parse_error(e, SOURCE))?.clone();
        let cols = ["source_code", "target_code", "target_name"];
        let mut idx = [0usize; 3];
        for (slot, name) in idx.iter_mut().zip(cols) {
            *slot = headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| TableError::Schema {
                    source_name: SOURCE.to_string(),
                    column: name.to_string(),
                })?;
        }
        let mut mapping = Self::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| csv_parse_error(e, SOURCE))?;
            let get = |k: usize| rec.get(idx[k]).unwrap_or("").trim().to_string();
            mapping.insert(get(0), SectorId::new(get(1), get(2)));
        }
        Ok(mapping)
    }

    fn targets(&self) -> Vec<SectorId> {
        let mut seen = HashSet::new();
        self.entries
            .iter()
            .filter(|(_, t)| seen.insert(t.code.clone()))
            .map(|(_, t)| t.clone())
            .collect()
    }
}

/// Sums flows and vectors within each mapped group.
pub fn aggregate_sectors(t: &IoTable, mapping: &SectorMapping) -> Result<IoTable, TableError> {
    let targets = mapping.targets();
    let target_index: HashMap<&str, usize> = targets.iter().enumerate().map(|(k, s)| (s.code.as_str(), k)).collect();
    let source_to_target: HashMap<&str, usize> = mapping
        .entries
        .iter()
        .map(|(src, tgt)| (src.as_str(), target_index[tgt.code.as_str()]))
        .collect();

    let mut group_of = Vec::with_capacity(t.len());
    for s in &t.sectors {
        let g = source_to_target
            .get(s.code.as_str())
            .ok_or_else(|| TableError::Unmapped(s.code.clone()))?;
        group_of.push(*g);
    }
    let m = targets.len();
    let mut members = vec![0usize; m];
    for g in &group_of {
        members[*g] += 1;
    }
    if let Some(k) = members.iter().position(|c| *c == 0) {
        return Err(TableError::EmptyGroup(targets[k].code.clone()));
    }

    let mut z = vec![0.0; m * m];
    let (mut f, mut v, mut x) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    for (i, gi) in group_of.iter().enumerate() {
        for (j, gj) in group_of.iter().enumerate() {
            z[gi * m + gj] += t.z[(i, j)];
        }
        f[*gi] += t.f[i];
        v[*gi] += t.v[i];
        x[*gi] += t.x[i];
    }
    IoTable::new(
        targets,
        Matrix::new(m, m, z)?,
        Vector::new(f)?,
        Vector::new(v)?,
        Vector::new(x)?,
        t.currency_unit.clone(),
        t.year,
    )
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) const TOY_FLOWS: &str = "sector,1,2\n1,150,500\n2,200,100\n";
    pub(crate) const TOY_VECTORS: &str =
        "sector,final_demand,value_added,total_output\n1,350,650,1000\n2,1700,1400,2000\n";

    pub(crate) fn toy() -> IoTable {
        load_table(TOY_FLOWS.as_bytes(), TOY_VECTORS.as_bytes()).unwrap()
    }

    fn with_final_demand(t: &IoTable, f: Vec<f64>) -> IoTable {
        IoTable::new(
            t.sectors.clone(),
            t.z.clone(),
            Vector::new(f).unwrap(),
            t.v.clone(),
            t.x.clone(),
            t.currency_unit(),
            t.year(),
        )
        .unwrap()
    }

    #[test]
    fn loads_toy_table() {
        let t = toy();
        assert_eq!(t.len(), 2);
        assert_eq!(t.sector_codes(), vec!["1", "2"]);
        assert_eq!(t.flows()[(0, 1)], 500.0);
        assert_eq!(t.final_demand().as_slice(), &[350.0, 1700.0]);
        assert_eq!(t.value_added().as_slice(), &[650.0, 1400.0]);
        assert_eq!(t.total_output().as_slice(), &[1000.0, 2000.0]);
        assert_eq!(t.currency_unit(), DEFAULT_UNIT);
    }

    #[test]
    fn vector_columns_may_be_reordered() {
        let vectors = "total_output,sector,value_added,final_demand\n1000,1,650,350\n2000,2,1400,1700\n";
        let t = load_table(TOY_FLOWS.as_bytes(), vectors.as_bytes()).unwrap();
        assert_eq!(t, toy());
    }

    #[test]
    fn sector_count_mismatch() {
        let flows = "sector,1,2,3\n1,1,1,1\n2,1,1,1\n3,1,1,1\n";
        let err = load_table(flows.as_bytes(), TOY_VECTORS.as_bytes()).unwrap_err();
        assert!(matches!(err, TableError::SectorMismatch(_)), "{err}");
    }

    #[test]
    fn sector_order_mismatch() {
        let vectors = "sector,final_demand,value_added,total_output\n2,1700,1400,2000\n1,350,650,1000\n";
        let err = load_table(TOY_FLOWS.as_bytes(), vectors.as_bytes()).unwrap_err();
        assert!(matches!(err, TableError::SectorMismatch(_)));
    }

    #[test]
    fn empty_flows_file() {
        let err = load_table("".as_bytes(), TOY_VECTORS.as_bytes()).unwrap_err();
        assert!(matches!(err, TableError::Parse { .. }), "{err}");
    }

    #[test]
    fn bad_number_names_row_and_column() {
        let flows = "sector,1,2\n1,150,abc\n2,200,100\n";
        match load_table(flows.as_bytes(), TOY_VECTORS.as_bytes()).unwrap_err() {
            TableError::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert_eq!(column, "2");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_vector_column() {
        let vectors = "sector,final_demand,total_output\n1,350,1000\n2,1700,2000\n";
        let err = load_table(TOY_FLOWS.as_bytes(), vectors.as_bytes()).unwrap_err();
        assert!(matches!(err, TableError::Schema { ref column, .. } if column == "value_added"));
    }

    #[test]
    fn zero_output_rejected() {
        let vectors = "sector,final_demand,value_added,total_output\n1,350,650,0\n2,1700,1400,2000\n";
        let err = load_table(TOY_FLOWS.as_bytes(), vectors.as_bytes()).unwrap_err();
        assert!(matches!(err, TableError::ZeroOutput(ref s) if s == "1"));
    }

    #[test]
    fn negative_flows_rejected_unless_clamped() {
        let flows = "sector,1,2\n1,150,-5\n2,200,100\n";
        let err = load_table(flows.as_bytes(), TOY_VECTORS.as_bytes()).unwrap_err();
        assert!(matches!(err, TableError::NegativeFlow { .. }));

        let opts = LoadOptions {
            clamp_negative_flows: true,
            ..LoadOptions::default()
        };
        let loaded = load_table_with(flows.as_bytes(), TOY_VECTORS.as_bytes(), &opts).unwrap();
        assert_eq!(loaded.table.flows()[(0, 1)], 0.0);
        assert_eq!(
            loaded.clamped,
            vec![ClampedFlow {
                from: "1".into(),
                to: "2".into(),
                original: -5.0
            }]
        );
    }

    #[test]
    fn negative_final_demand_allowed() {
        let vectors = "sector,final_demand,value_added,total_output\n1,-10,650,1000\n2,1700,1400,2000\n";
        assert!(load_table(TOY_FLOWS.as_bytes(), vectors.as_bytes()).is_ok());
    }

    #[test]
    fn toy_table_is_balanced() {
        let report = validate(&toy(), 1e-9);
        assert!(report.is_balanced);
        assert!(report.findings.is_empty());
    }

    #[test]
    fn perturbed_final_demand_is_flagged() {
        let t = with_final_demand(&toy(), vec![351.0, 1700.0]);
        let report = validate(&t, 1e-9);
        assert!(!report.is_balanced);
        assert_eq!(
            report.findings,
            vec![Imbalance {
                sector: "1".into(),
                kind: ImbalanceKind::Row,
                magnitude: 1.0
            }]
        );
        assert!(validate(&t, 1.0).is_balanced);
    }

    #[test]
    fn identity_aggregation() {
        let t = toy();
        let mut m = SectorMapping::new();
        m.insert("1", SectorId::from_code("1"));
        m.insert("2", SectorId::from_code("2"));
        assert_eq!(aggregate_sectors(&t, &m).unwrap(), t);
    }

    #[test]
    fn single_group_aggregation() {
        let mut m = SectorMapping::new();
        m.insert("1", SectorId::new("all", "Whole economy"));
        m.insert("2", SectorId::new("all", "Whole economy"));
        let agg = aggregate_sectors(&toy(), &m).unwrap();
        assert_eq!(agg.len(), 1);
        assert_eq!(agg.flows()[(0, 0)], 950.0);
        assert_eq!(agg.final_demand().as_slice(), &[2050.0]);
        assert_eq!(agg.value_added().as_slice(), &[2050.0]);
        assert_eq!(agg.total_output().as_slice(), &[3000.0]);
        assert_eq!(agg.sectors()[0].name, "Whole economy");
        assert!(validate(&agg, 1e-12).is_balanced);
    }

    #[test]
    fn empty_group_rejected() {
        let csv = "source_code,target_code,target_name\n1,A,Alpha\n2,A,Alpha\n99,B,Beta\n";
        let m = SectorMapping::from_csv(csv.as_bytes()).unwrap();
        let err = aggregate_sectors(&toy(), &m).unwrap_err();
        assert!(matches!(err, TableError::EmptyGroup(ref g) if g == "B"));
    }

    #[test]
    fn unmapped_sector_rejected() {
        let mut m = SectorMapping::new();
        m.insert("1", SectorId::from_code("A"));
        assert!(matches!(aggregate_sectors(&toy(), &m), Err(TableError::Unmapped(ref s)) if s == "2"));
    }

    #[test]
    fn csv_round_trip() {
        let t = toy();
        let (mut flows, mut vectors) = (Vec::new(), Vec::new());
        t.write_csv(&mut flows, &mut vectors).unwrap();
        let back = load_table(flows.as_slice(), vectors.as_slice()).unwrap();
        assert_eq!(back, t);
    }
}

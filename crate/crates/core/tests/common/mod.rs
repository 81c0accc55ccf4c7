#![allow(dead_code)]

use std::path::PathBuf;

use io_impact::linalg::{Matrix, Vector};
use io_impact::table::{load_table, IoTable, SectorId};
use rand::Rng;

pub const TOY_FLOWS: &str = "sector,1,2\n1,150,500\n2,200,100\n";
pub const TOY_VECTORS: &str = "sector,final_demand,value_added,total_output\n1,350,650,1000\n2,1700,1400,2000\n";

pub fn toy() -> IoTable {
    load_table(TOY_FLOWS.as_bytes(), TOY_VECTORS.as_bytes()).unwrap()
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// Random table balanced by construction.
///
/// Flows are drawn first; each total output is then set so that both the
/// technical-coefficient column sum and the allocation-coefficient row sum
/// of its sector land in [0.3, 0.9]. Final demand and value added close the
/// two identities.
pub fn random_balanced_table<R: Rng>(rng: &mut R, n: usize) -> IoTable {
    let mut z = vec![0.0; n * n];
    for v in z.iter_mut() {
        if rng.gen_bool(0.7) {
            *v = rng.gen_range(0.0..100.0);
        }
    }
    let zm = Matrix::new(n, n, z).unwrap();
    let rows = zm.row_sums();
    let cols = zm.column_sums();
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        let margin = rows[i].max(cols[i]);
        let share: f64 = rng.gen_range(0.3..0.9);
        x.push(if margin > 0.0 {
            margin / share
        } else {
            rng.gen_range(1.0..100.0)
        });
    }
    let f: Vec<f64> = (0..n).map(|i| x[i] - rows[i]).collect();
    let v: Vec<f64> = (0..n).map(|i| x[i] - cols[i]).collect();
    IoTable::new(
        (0..n).map(|i| SectorId::from_code(format!("s{i}"))).collect(),
        zm,
        Vector::new(f).unwrap(),
        Vector::new(v).unwrap(),
        Vector::new(x).unwrap(),
        "USD_millions",
        2022,
    )
    .unwrap()
}

pub fn rel_close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(f64::MIN_POSITIVE)
}

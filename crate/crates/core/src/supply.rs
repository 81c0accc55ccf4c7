//! Ghosh supply-side model.
//!
//! Allocation coefficients are the row-normalised flows `B = diag(x)⁻¹·Z`,
//! and output responds to primary-input changes as `Δx′ = Δv′·(I − B)⁻¹`.
//! Results from this side are indicative upper bounds: the supply-driven
//! reading assumes that extra primary inputs are always absorbed downstream.

use std::sync::Arc;

use crate::linalg::{lu_invert, Matrix, Vector, DEFAULT_PIVOT_TOL};
use crate::model::{check_productive, sector_index, ModelError, ModelSide, ShockPropagator};
use crate::table::IoTable;

/// Caveat attached to every report that contains supply-side results.
pub const SUPPLY_SIDE_CAVEAT: &str = "supply-side (Ghosh) results are indicative upper bounds: \
static supply-driven input-output models lack conclusive empirical validity";

#[derive(Debug, Clone)]
pub struct SupplyModel {
    table: Arc<IoTable>,
    b: Matrix,
    g: Matrix,
}

impl SupplyModel {
    pub fn build(table: Arc<IoTable>) -> Result<Self, ModelError> {
        let x = table.total_output();
        let b = table.flows().map(|i, _, z| z / x[i])?;
        check_productive(&table, &b, &b.row_sums(), "allocation coefficient row sum")?;
        let g = lu_invert(&b.identity_minus()?, DEFAULT_PIVOT_TOL)?;
        Ok(Self { table, b, g })
    }

    pub fn table(&self) -> &Arc<IoTable> {
        &self.table
    }

    pub fn allocation_coefficients(&self) -> &Matrix {
        &self.b
    }

    pub fn ghosh_inverse(&self) -> &Matrix {
        &self.g
    }

    /// `Δx′ = Δv′·G`.
    pub fn propagate(&self, delta_v: &Vector) -> Result<Vector, ModelError> {
        Ok(self.g.left_mul_vec(delta_v)?)
    }

    /// Row sum of `G` for `sector`.
    pub fn multiplier(&self, sector: &str) -> Result<f64, ModelError> {
        let i = sector_index(&self.table, sector)?;
        Ok(self.g.row(i).iter().sum())
    }
}

impl ShockPropagator for SupplyModel {
    fn side(&self) -> ModelSide {
        ModelSide::Supply
    }

    fn table(&self) -> &Arc<IoTable> {
        &self.table
    }

    fn propagate(&self, shock: &Vector) -> Result<Vector, ModelError> {
        SupplyModel::propagate(self, shock)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demand::DemandModel;
    use crate::linalg::{mat_mul, neumann_inverse};
    use crate::table::tests::toy;
    use crate::table::SectorId;

    fn toy_model() -> SupplyModel {
        SupplyModel::build(Arc::new(toy())).unwrap()
    }

    #[test]
    fn toy_coefficients_and_inverse() {
        let m = toy_model();
        let b = Matrix::from_rows(&[[0.15, 0.50], [0.10, 0.05]]).unwrap();
        assert!(m.allocation_coefficients().max_abs_diff(&b).unwrap() < 1e-15);
        // I − B = [[0.85, −0.5], [−0.1, 0.95]], det = 0.8075 − 0.05 = 0.7575
        let det = 0.7575;
        let g = Matrix::from_rows(&[[0.95 / det, 0.50 / det], [0.10 / det, 0.85 / det]]).unwrap();
        assert!(m.ghosh_inverse().max_abs_diff(&g).unwrap() < 1e-12);
        assert!((m.ghosh_inverse()[(0, 1)] - 0.660_066).abs() < 1e-6);
        assert!((m.ghosh_inverse()[(1, 0)] - 0.132_013).abs() < 1e-6);
    }

    #[test]
    fn zero_flow_economy() {
        let t = IoTable::new(
            vec![SectorId::from_code("a"), SectorId::from_code("b")],
            Matrix::zeros(2, 2),
            Vector::new(vec![5.0, 7.0]).unwrap(),
            Vector::new(vec![5.0, 7.0]).unwrap(),
            Vector::new(vec![5.0, 7.0]).unwrap(),
            "USD",
            2022,
        )
        .unwrap();
        let m = SupplyModel::build(Arc::new(t)).unwrap();
        assert_eq!(m.allocation_coefficients(), &Matrix::zeros(2, 2));
        assert_eq!(m.ghosh_inverse(), &Matrix::identity(2));
        assert_eq!(m.multiplier("a").unwrap(), 1.0);
    }

    #[test]
    fn row_sum_at_one_is_non_productive() {
        // Sector 1 sells all of its output to industry.
        let t = IoTable::new(
            vec![SectorId::from_code("1"), SectorId::from_code("2")],
            Matrix::from_rows(&[[100.0, 900.0], [0.0, 0.0]]).unwrap(),
            Vector::new(vec![0.0, 2000.0]).unwrap(),
            Vector::new(vec![900.0, 1100.0]).unwrap(),
            Vector::new(vec![1000.0, 2000.0]).unwrap(),
            "USD",
            2022,
        )
        .unwrap();
        assert!(matches!(
            SupplyModel::build(Arc::new(t)),
            Err(ModelError::NonProductive { ref sector, .. }) if sector == "1"
        ));
    }

    #[test]
    fn propagates_supply_shock() {
        let m = toy_model();
        let dx = m.propagate(&Vector::new(vec![100.0, 0.0]).unwrap()).unwrap();
        assert!((dx[0] - 95.0 / 0.7575).abs() < 1e-10);
        assert!((dx[1] - 50.0 / 0.7575).abs() < 1e-10);
        assert!((dx[0] - 125.412_541).abs() < 1e-5);
        assert!((dx[1] - 66.006_600).abs() < 1e-5);
        assert_eq!(m.propagate(&Vector::zeros(2)).unwrap(), Vector::zeros(2));
    }

    #[test]
    fn own_value_added_reproduces_output() {
        let m = toy_model();
        let x = m.propagate(m.table().value_added()).unwrap();
        for (got, want) in x.iter().zip(m.table().total_output().iter()) {
            assert!(((got - want) / want).abs() < 1e-6);
        }
    }

    #[test]
    fn supply_multiplier() {
        let m = toy_model();
        assert!((m.multiplier("1").unwrap() - 1.45 / 0.7575).abs() < 1e-12);
        assert!((m.multiplier("1").unwrap() - 1.914_191).abs() < 1e-6);
        assert_eq!(m.multiplier("x"), Err(ModelError::UnknownSector("x".into())));
    }

    #[test]
    fn similar_to_leontief_inverse() {
        let t = Arc::new(toy());
        let d = DemandModel::build(t.clone()).unwrap();
        let s = SupplyModel::build(t.clone()).unwrap();
        let xhat = Matrix::diagonal(t.total_output().as_slice());
        let left = mat_mul(&xhat, s.ghosh_inverse()).unwrap();
        let right = mat_mul(d.leontief_inverse(), &xhat).unwrap();
        assert!(left.max_abs_diff(&right).unwrap() < 1e-9);
    }

    #[test]
    fn matches_neumann_series() {
        let m = toy_model();
        let series = neumann_inverse(m.allocation_coefficients(), 200).unwrap();
        assert!(series.max_abs_diff(m.ghosh_inverse()).unwrap() < 1e-8);
    }
}

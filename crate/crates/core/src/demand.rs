//! Leontief demand-side model.

use std::sync::Arc;

use crate::linalg::{lu_invert, Matrix, Vector, DEFAULT_PIVOT_TOL};
use crate::model::{check_productive, sector_index, ModelError, ModelSide, ShockPropagator};
use crate::table::IoTable;

/// Technical coefficients `a_ij = z_ij / x_j` and the Leontief inverse
/// `L = (I − A)⁻¹` of one table.
#[derive(Debug, Clone)]
pub struct DemandModel {
    table: Arc<IoTable>,
    a: Matrix,
    l: Matrix,
}

impl DemandModel {
    /// Fails with [`ModelError::NonProductive`] when any column sum of `A`
    /// or its spectral radius bound reaches one.
    pub fn build(table: Arc<IoTable>) -> Result<Self, ModelError> {
        let x = table.total_output();
        let a = table.flows().map(|_, j, z| z / x[j])?;
        check_productive(&table, &a, &a.column_sums(), "technical coefficient column sum")?;
        let l = lu_invert(&a.identity_minus()?, DEFAULT_PIVOT_TOL)?;
        Ok(Self { table, a, l })
    }

    pub fn table(&self) -> &Arc<IoTable> {
        &self.table
    }

    pub fn technical_coefficients(&self) -> &Matrix {
        &self.a
    }

    pub fn leontief_inverse(&self) -> &Matrix {
        &self.l
    }

    /// `Δx = L·Δf`.
    pub fn propagate(&self, delta_f: &Vector) -> Result<Vector, ModelError> {
        Ok(self.l.mul_vec(delta_f)?)
    }

    /// Output multiplier: column sum of `L` for `sector`.
    pub fn multiplier(&self, sector: &str) -> Result<f64, ModelError> {
        let j = sector_index(&self.table, sector)?;
        Ok(self.l.column(j).iter().sum())
    }
}

impl ShockPropagator for DemandModel {
    fn side(&self) -> ModelSide {
        ModelSide::Demand
    }

    fn table(&self) -> &Arc<IoTable> {
        &self.table
    }

    fn propagate(&self, shock: &Vector) -> Result<Vector, ModelError> {
        DemandModel::propagate(self, shock)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{neumann_inverse, LinalgError};
    use crate::table::tests::toy;
    use crate::table::SectorId;

    fn toy_model() -> DemandModel {
        DemandModel::build(Arc::new(toy())).unwrap()
    }

    fn table_from(z: &[[f64; 2]; 2], f: [f64; 2], v: [f64; 2], x: [f64; 2]) -> IoTable {
        IoTable::new(
            vec![SectorId::from_code("1"), SectorId::from_code("2")],
            Matrix::from_rows(z).unwrap(),
            Vector::new(f.to_vec()).unwrap(),
            Vector::new(v.to_vec()).unwrap(),
            Vector::new(x.to_vec()).unwrap(),
            "USD_millions",
            2022,
        )
        .unwrap()
    }

    #[test]
    fn toy_coefficients_and_inverse() {
        let m = toy_model();
        let a = Matrix::from_rows(&[[0.15, 0.25], [0.20, 0.05]]).unwrap();
        assert!(m.technical_coefficients().max_abs_diff(&a).unwrap() < 1e-15);
        // adj(I − A) / det, det = 0.85·0.95 − 0.25·0.20 = 0.7575
        let det = 0.7575;
        let l = Matrix::from_rows(&[[0.95 / det, 0.25 / det], [0.20 / det, 0.85 / det]]).unwrap();
        assert!(m.leontief_inverse().max_abs_diff(&l).unwrap() < 1e-12);
    }

    #[test]
    fn zero_flow_economy() {
        let t = table_from(&[[0.0, 0.0], [0.0, 0.0]], [10.0, 20.0], [10.0, 20.0], [10.0, 20.0]);
        let m = DemandModel::build(Arc::new(t)).unwrap();
        assert_eq!(m.technical_coefficients(), &Matrix::zeros(2, 2));
        assert_eq!(m.leontief_inverse(), &Matrix::identity(2));
        assert_eq!(m.multiplier("1").unwrap(), 1.0);
        assert_eq!(m.multiplier("2").unwrap(), 1.0);
    }

    #[test]
    fn column_sum_above_one_is_non_productive() {
        // Column 1 of A sums to (700 + 500) / 1000 = 1.2.
        let t = table_from(
            &[[700.0, 0.0], [500.0, 0.0]],
            [0.0, 1500.0],
            [0.0, 1500.0],
            [1000.0, 1500.0],
        );
        match DemandModel::build(Arc::new(t)) {
            Err(ModelError::NonProductive { sector, value, .. }) => {
                assert_eq!(sector, "1");
                assert!((value - 1.2).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn propagates_demand_shock() {
        let m = toy_model();
        let dx = m.propagate(&Vector::new(vec![0.0, 100.0]).unwrap()).unwrap();
        assert!((dx[0] - 25.0 / 0.7575).abs() < 1e-10);
        assert!((dx[1] - 85.0 / 0.7575).abs() < 1e-10);
        assert!((dx[0] - 33.003_300_33).abs() < 1e-6);
        assert!((dx[1] - 112.211_221_1).abs() < 1e-6);

        let zero = m.propagate(&Vector::zeros(2)).unwrap();
        assert_eq!(zero, Vector::zeros(2));

        assert!(matches!(
            m.propagate(&Vector::zeros(3)),
            Err(ModelError::Linalg(LinalgError::Dimension { .. }))
        ));
    }

    #[test]
    fn unit_shocks_superpose_to_row_sums() {
        let m = toy_model();
        let mut total = Vector::zeros(2);
        for j in 0..2 {
            total = total.add(&m.propagate(&Vector::unit(2, j, 1.0)).unwrap()).unwrap();
        }
        for (got, want) in total.iter().zip(m.leontief_inverse().row_sums()) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn output_multiplier() {
        let m = toy_model();
        let want = (0.95 + 0.20) / 0.7575;
        assert!((m.multiplier("1").unwrap() - want).abs() < 1e-12);
        assert!((m.multiplier("1").unwrap() - 1.518_151).abs() < 1e-6);
        assert_eq!(m.multiplier("999"), Err(ModelError::UnknownSector("999".into())));
    }

    #[test]
    fn own_final_demand_reproduces_output() {
        let m = toy_model();
        let x = m.propagate(m.table().final_demand()).unwrap();
        for (got, want) in x.iter().zip(m.table().total_output().iter()) {
            assert!(((got - want) / want).abs() < 1e-6);
        }
    }

    #[test]
    fn matches_neumann_series() {
        let m = toy_model();
        let series = neumann_inverse(m.technical_coefficients(), 200).unwrap();
        assert!(series.max_abs_diff(m.leontief_inverse()).unwrap() < 1e-8);
    }
}

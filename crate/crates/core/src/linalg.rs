//! Dense real matrices and the handful of operations the models need.
//!
//! Everything is row-major `f64`. Sizes are small (a few hundred sectors at
//! most) so the algorithms favour exactness and checkability over speed.

use std::fmt;
use std::ops::Index;

use thiserror::Error;

/// Absolute pivot magnitude below which [`lu_invert`] reports a singular matrix.
pub const DEFAULT_PIVOT_TOL: f64 = 1e-12;

/// Per-dimension bound on the inversion residual `‖m·m⁻¹ − I‖∞ / n`.
pub const RESIDUAL_TOL_PER_DIM: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    Dimension {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("{rows}x{cols} matrix needs {expected} entries, got {got}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite entry {value} at ({row}, {col})")]
    NonFinite { row: usize, col: usize, value: f64 },
    #[error("singular matrix: pivot {pivot:e} in column {column} is below tolerance")]
    Singular { column: usize, pivot: f64 },
    #[error("inverse residual {residual:e} exceeds bound {bound:e}")]
    Residual { residual: f64, bound: f64 },
}

/// Dense row-major matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite {
                row: k / cols.max(1),
                col: k % cols.max(1),
                value: data[k],
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must share a length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinalgError::Dimension {
                    left: (i, r.len()),
                    right: (i, cols),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (s, v) in sums.iter_mut().zip(self.row(i)) {
                *s += v;
            }
        }
        sums
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self[(i, j)];
            }
        }
        t
    }

    /// Applies `f` to every entry, keeping the finiteness invariant.
    pub fn map(&self, mut f: impl FnMut(usize, usize, f64) -> f64) -> Result<Self, LinalgError> {
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(k, v)| f(k / self.cols, k % self.cols, *v))
            .collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        mat_mul(self, other)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &Vector) -> Result<Vector, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::Dimension {
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        let out = (0..self.rows)
            .map(|i| self.row(i).iter().zip(v.iter()).map(|(a, b)| a * b).sum())
            .collect();
        Ok(Vector(out))
    }

    /// Row vector times matrix: `v′·self`.
    pub fn left_mul_vec(&self, v: &Vector) -> Result<Vector, LinalgError> {
        if self.rows != v.len() {
            return Err(LinalgError::Dimension {
                left: (1, v.len()),
                right: self.shape(),
            });
        }
        let mut out = vec![0.0; self.cols];
        for (i, vi) in v.iter().enumerate() {
            for (o, m) in out.iter_mut().zip(self.row(i)) {
                *o += vi * m;
            }
        }
        Ok(Vector(out))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::Dimension {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix::new(self.rows, self.cols, data)
    }

    /// `I − self` for a square matrix.
    pub fn identity_minus(&self) -> Result<Matrix, LinalgError> {
        self.require_square()?;
        Matrix::identity(self.rows).sub(self)
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest absolute entrywise difference; `None` when shapes differ.
    pub fn max_abs_diff(&self, other: &Matrix) -> Option<f64> {
        (self.shape() == other.shape()).then(|| {
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|v| format!("{v:>12.6}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Column vector with finite entries.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(values: Vec<f64>) -> Result<Self, LinalgError> {
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite {
                row: k,
                col: 0,
                value: values[k],
            });
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// `amount` at position `index`, zero elsewhere.
    pub fn unit(n: usize, index: usize, amount: f64) -> Self {
        let mut v = vec![0.0; n];
        v[index] = amount;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn scaled(&self, k: f64) -> Vector {
        Vector(self.0.iter().map(|v| v * k).collect())
    }

    pub fn add(&self, other: &Vector) -> Result<Vector, LinalgError> {
        if self.len() != other.len() {
            return Err(LinalgError::Dimension {
                left: (self.len(), 1),
                right: (other.len(), 1),
            });
        }
        Ok(Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    if a.cols != b.rows {
        return Err(LinalgError::Dimension {
            left: a.shape(),
            right: b.shape(),
        });
    }
    let mut out = vec![0.0; a.rows * b.cols];
    for i in 0..a.rows {
        let out_row = &mut out[i * b.cols..(i + 1) * b.cols];
        for (k, aik) in a.row(i).iter().enumerate() {
            if *aik == 0.0 {
                continue;
            }
            for (o, bkj) in out_row.iter_mut().zip(b.row(k)) {
                *o += aik * bkj;
            }
        }
    }
    Matrix::new(a.rows, b.cols, out)
}

/// Inverts a square matrix by LU decomposition with partial pivoting.
///
/// The result is checked against `‖m·m⁻¹ − I‖∞ ≤ 1e-9·n`; a pivot smaller
/// than `pivot_tol` in absolute value aborts with [`LinalgError::Singular`].
pub fn lu_invert(m: &Matrix, pivot_tol: f64) -> Result<Matrix, LinalgError> {
    m.require_square()?;
    let n = m.rows;
    let lu = LuFactors::decompose(m, pivot_tol)?;

    // Solve for each column of the identity; results land as rows of the transpose.
    let mut inv_t = vec![0.0; n * n];
    let mut e = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[j] = 1.0;
        let col = lu.solve(&e);
        inv_t[j * n..(j + 1) * n].copy_from_slice(&col);
    }
    let inv = Matrix::new(n, n, inv_t)?.transpose();

    let residual = mat_mul(m, &inv)?.sub(&Matrix::identity(n))?.norm_inf();
    let bound = RESIDUAL_TOL_PER_DIM * n.max(1) as f64;
    if residual > bound {
        return Err(LinalgError::Residual { residual, bound });
    }
    Ok(inv)
}

/// Packed `PA = LU` factors: unit-lower `L` below the diagonal, `U` on and above.
struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl LuFactors {
    fn decompose(m: &Matrix, pivot_tol: f64) -> Result<Self, LinalgError> {
        let n = m.rows;
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[i * n + k]))
                .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                .expect("non-empty pivot range");
            if pivot.abs() < pivot_tol {
                return Err(LinalgError::Singular { column: k, pivot });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            for i in k + 1..n {
                let factor = lu[i * n + k] / lu[k * n + k];
                lu[i * n + k] = factor;
                if factor != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= factor * lu[k * n + j];
                    }
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * y[j]).sum();
            y[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[i * n + j] * y[j]).sum();
            y[i] = (y[i] - s) / self.lu[i * n + i];
        }
        y
    }
}

/// Partial Neumann sum `I + A + A² + … + A^(terms−1)`.
///
/// Converges to `(I − A)⁻¹` when the spectral radius of `a` is below one.
/// `terms == 0` yields the zero matrix.
pub fn neumann_inverse(a: &Matrix, terms: usize) -> Result<Matrix, LinalgError> {
    a.require_square()?;
    let n = a.rows;
    if terms == 0 {
        return Ok(Matrix::zeros(n, n));
    }
    let mut sum = Matrix::identity(n);
    let mut power = Matrix::identity(n);
    for _ in 1..terms {
        power = mat_mul(&power, a)?;
        for (s, p) in sum.data.iter_mut().zip(&power.data) {
            *s += p;
        }
    }
    Ok(sum)
}

/// Power-iteration estimate of the dominant eigenvalue magnitude.
///
/// Iterates on `|A| + I` from the all-ones vector so every iterate stays
/// strictly positive, then returns the Collatz–Wielandt ratio
/// `max_i (|A|v)_i / v_i`. For nonnegative matrices that ratio never
/// undershoots the spectral radius and converges to it for irreducible
/// matrices. The zero matrix yields 0.
pub fn spectral_radius_bound(a: &Matrix, iterations: usize) -> Result<f64, LinalgError> {
    a.require_square()?;
    let n = a.rows;
    if n == 0 {
        return Ok(0.0);
    }
    let abs = a.map(|_, _, v| v.abs())?;
    let mut v = vec![1.0; n];
    for _ in 0..iterations {
        let av = abs.mul_vec(&Vector(v.clone()))?;
        let next: Vec<f64> = av.iter().zip(&v).map(|(x, y)| x + y).collect();
        let scale = next.iter().cloned().fold(0.0, f64::max);
        v = next.iter().map(|x| x / scale).collect();
    }
    let av = abs.mul_vec(&Vector(v.clone()))?;
    Ok(av
        .iter()
        .zip(&v)
        .filter(|(_, vi)| **vi > 0.0)
        .map(|(x, vi)| x / vi)
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toy_a() -> Matrix {
        Matrix::from_rows(&[[0.15, 0.25], [0.20, 0.05]]).unwrap()
    }

    /// Closed-form inverse of a 2×2 matrix via the adjugate.
    fn inverse_2x2(m: &Matrix) -> Matrix {
        let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let det = a * d - b * c;
        Matrix::from_rows(&[[d / det, -b / det], [-c / det, a / det]]).unwrap()
    }

    #[test]
    fn construction_rejects_non_finite_and_bad_counts() {
        assert!(matches!(
            Matrix::new(2, 2, vec![1.0, 2.0, f64::NAN, 0.0]),
            Err(LinalgError::NonFinite { row: 1, col: 0, .. })
        ));
        assert!(matches!(
            Matrix::new(2, 2, vec![1.0]),
            Err(LinalgError::EntryCount {
                expected: 4,
                got: 1,
                ..
            })
        ));
        assert!(Vector::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn identity_product() {
        let b = Matrix::from_rows(&[[5.0, 6.0], [7.0, 8.0]]).unwrap();
        assert_eq!(mat_mul(&Matrix::identity(2), &b).unwrap(), b);
    }

    #[test]
    fn matrix_vector_product() {
        let x = Matrix::from_rows(&[[1000.0], [2000.0]]).unwrap();
        let p = mat_mul(&toy_a(), &x).unwrap();
        assert!((p[(0, 0)] - 650.0).abs() < 1e-12);
        assert!((p[(1, 0)] - 300.0).abs() < 1e-12);
        let pv = toy_a().mul_vec(&Vector::new(vec![1000.0, 2000.0]).unwrap()).unwrap();
        assert_eq!(pv.as_slice(), p.as_slice());
    }

    #[test]
    fn shape_violation_names_both_shapes() {
        let a = Matrix::zeros(2, 3);
        let b = Matrix::zeros(2, 2);
        assert_eq!(
            mat_mul(&a, &b),
            Err(LinalgError::Dimension {
                left: (2, 3),
                right: (2, 2)
            })
        );
    }

    #[test]
    fn left_multiplication_is_transpose_product() {
        let v = Vector::new(vec![100.0, 0.0]).unwrap();
        let got = toy_a().left_mul_vec(&v).unwrap();
        let want = toy_a().transpose().mul_vec(&v).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn invert_matches_closed_form() {
        let m = Matrix::from_rows(&[[0.85, -0.25], [-0.20, 0.95]]).unwrap();
        let oracle = inverse_2x2(&m);
        let inv = lu_invert(&m, DEFAULT_PIVOT_TOL).unwrap();
        assert!(inv.max_abs_diff(&oracle).unwrap() < 1e-12);
        // [[0.95, 0.25], [0.20, 0.85]] / 0.7575
        assert!((inv[(0, 0)] - 1.254_125_412_541_254).abs() < 1e-12);
        assert!((inv[(0, 1)] - 0.330_033_003_300_330).abs() < 1e-12);
        assert!((inv[(1, 0)] - 0.264_026_402_640_264).abs() < 1e-12);
        assert!((inv[(1, 1)] - 1.122_112_211_221_122).abs() < 1e-12);
    }

    #[test]
    fn invert_identity() {
        for n in [1, 2, 5, 17] {
            let inv = lu_invert(&Matrix::identity(n), DEFAULT_PIVOT_TOL).unwrap();
            assert_eq!(inv, Matrix::identity(n));
        }
    }

    #[test]
    fn invert_needs_pivoting() {
        let m = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(lu_invert(&m, DEFAULT_PIVOT_TOL).unwrap(), m);
    }

    #[test]
    fn singular_reports_column() {
        let m = Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(matches!(
            lu_invert(&m, DEFAULT_PIVOT_TOL),
            Err(LinalgError::Singular { column: 1, .. })
        ));
        assert!(matches!(
            lu_invert(&Matrix::zeros(2, 3), DEFAULT_PIVOT_TOL),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn neumann_zero_matrix_is_identity() {
        for terms in [1, 3, 50] {
            assert_eq!(
                neumann_inverse(&Matrix::zeros(3, 3), terms).unwrap(),
                Matrix::identity(3)
            );
        }
    }

    #[test]
    fn neumann_scalar_geometric_series() {
        let s = neumann_inverse(&Matrix::from_rows(&[[0.5]]).unwrap(), 20).unwrap();
        // 1 + 0.5 + … + 0.5^19 = 2 − 0.5^19
        assert!((s[(0, 0)] - (2.0 - 0.5f64.powi(19))).abs() < 1e-15);
        assert!((s[(0, 0)] - 1.999_998).abs() < 1e-6);
    }

    #[test]
    fn neumann_matches_lu_on_toy() {
        let a = toy_a();
        let lu = lu_invert(&a.identity_minus().unwrap(), DEFAULT_PIVOT_TOL).unwrap();
        let series = neumann_inverse(&a, 60).unwrap();
        assert!(series.max_abs_diff(&lu).unwrap() < 1e-9);
    }

    #[test]
    fn spectral_radius_cases() {
        assert_eq!(spectral_radius_bound(&Matrix::zeros(3, 3), 100).unwrap(), 0.0);
        let d = Matrix::from_rows(&[[0.5, 0.0], [0.0, 0.25]]).unwrap();
        assert!((spectral_radius_bound(&d, 500).unwrap() - 0.5).abs() < 1e-6);
        // Characteristic polynomial λ² − 0.2λ − 0.0425: λ = 0.1 + √0.0525.
        let oracle = 0.1 + (0.01f64 + 0.0425).sqrt();
        let rho = spectral_radius_bound(&toy_a(), 500).unwrap();
        assert!((rho - oracle).abs() < 1e-9, "rho={rho}, oracle={oracle}");
        assert!((rho - 0.329_129).abs() < 1e-3);
    }

    #[test]
    fn spectral_radius_of_permutation_does_not_oscillate() {
        let p = Matrix::from_rows(&[[0.0, 0.9], [0.9, 0.0]]).unwrap();
        assert!((spectral_radius_bound(&p, 200).unwrap() - 0.9).abs() < 1e-9);
    }

    fn small_matrix(n: usize, m: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec(-2.0f64..2.0, n * m).prop_map(move |d| Matrix::new(n, m, d).unwrap())
    }

    fn substochastic(n: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec(0.0f64..1.0, n * n).prop_map(move |d| {
            let m = Matrix::new(n, n, d).unwrap();
            let sums = m.row_sums();
            m.map(|i, _, v| if sums[i] > 0.0 { v * 0.9 / sums[i] } else { 0.0 })
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn product_is_associative(
            (a, b, c) in (1usize..5, 1usize..5, 1usize..5, 1usize..5)
                .prop_flat_map(|(p, q, r, s)| (small_matrix(p, q), small_matrix(q, r), small_matrix(r, s)))
        ) {
            let left = mat_mul(&mat_mul(&a, &b).unwrap(), &c).unwrap();
            let right = mat_mul(&a, &mat_mul(&b, &c).unwrap()).unwrap();
            let scale = left.norm_inf().max(1.0);
            prop_assert!(left.max_abs_diff(&right).unwrap() <= 1e-10 * scale);
        }

        #[test]
        fn inverse_residual_both_sides(n in 1usize..12, seed in prop::collection::vec(-1.0f64..1.0, 144)) {
            // Diagonally dominant, hence invertible.
            let mut data: Vec<f64> = seed[..n * n].to_vec();
            for i in 0..n {
                data[i * n + i] += n as f64 + 1.0;
            }
            let m = Matrix::new(n, n, data).unwrap();
            let inv = lu_invert(&m, DEFAULT_PIVOT_TOL).unwrap();
            let id = Matrix::identity(n);
            let bound = 1e-9 * n as f64;
            prop_assert!(mat_mul(&m, &inv).unwrap().sub(&id).unwrap().norm_inf() <= bound);
            prop_assert!(mat_mul(&inv, &m).unwrap().sub(&id).unwrap().norm_inf() <= bound);
        }

        #[test]
        fn neumann_agrees_with_lu(a in (1usize..10).prop_flat_map(substochastic)) {
            let lu = lu_invert(&a.identity_minus().unwrap(), DEFAULT_PIVOT_TOL).unwrap();
            let series = neumann_inverse(&a, 200).unwrap();
            prop_assert!(series.max_abs_diff(&lu).unwrap() <= 1e-8);
        }

        #[test]
        fn spectral_bound_below_max_row_sum(a in (1usize..8).prop_flat_map(substochastic)) {
            let rho = spectral_radius_bound(&a, 300).unwrap();
            prop_assert!(rho <= 0.9 + 1e-12);
        }
    }
}

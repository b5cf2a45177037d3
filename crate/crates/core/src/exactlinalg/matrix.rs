//! Dense row-major matrices over an exact field.

use super::field::Field;
use super::LinalgError;

/// Dense matrix with row-major storage. Arithmetic takes the field explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn new(rows: usize, cols: usize, entries: Vec<E>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entries length must be rows*cols");
        Matrix { rows, cols, entries }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![value; rows * cols],
        }
    }

    pub fn zeros<F: Field<Elem = E>>(field: &F, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, field.zero())
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Builds a matrix from equal-length rows; `cols` is needed for the empty case.
    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            entries,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn push_row(&mut self, row: Vec<E>) {
        assert_eq!(row.len(), self.cols);
        self.entries.extend(row);
        self.rows += 1;
    }

    pub fn map<G>(&self, f: impl FnMut(&E) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, other: &Matrix<E>) -> Result<Matrix<E>, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = field.mul(a, &other[(k, j)]);
                    out[(i, j)] = field.add(&out[(i, j)], &prod);
                }
            }
        }
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool
    where
        E: PartialEq,
    {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_skew<F: Field<Elem = E>>(&self, field: &F) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                field.is_zero(&self[(i, i)])
                    && (0..i).all(|j| field.is_zero(&field.add(&self[(i, j)], &self[(j, i)])))
            })
    }

    /// Determinant by Gaussian elimination.
    pub fn det<F: Field<Elem = E>>(&self, field: &F) -> Result<E, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = field.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !field.is_zero(&a[(r, col)])) else {
                return Ok(field.zero());
            };
            if p != col {
                a.swap_rows(p, col);
                det = field.neg(&det);
            }
            let pv = a[(col, col)].clone();
            det = field.mul(&det, &pv);
            let pinv = field.inv(&pv).expect("nonzero pivot");
            for r in col + 1..n {
                if field.is_zero(&a[(r, col)]) {
                    continue;
                }
                let f = field.mul(&a[(r, col)], &pinv);
                for c in col..n {
                    let v = field.sub_mul(&a[(r, c)], &f, &a[(col, c)]);
                    a[(r, c)] = v;
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse<F: Field<Elem = E>>(&self, field: &F) -> Result<Matrix<E>, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                field.one()
            } else {
                field.zero()
            }
        });
        let (_, pivots) = rref_in_place(field, &mut aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(Matrix::from_fn(n, n, |i, j| aug[(i, n + j)].clone()))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<E> std::ops::Index<(usize, usize)> for Matrix<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl<E> std::ops::IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

/// Reduced row-echelon form in place. Returns the rank and the pivot columns.
pub fn rref_in_place<F: Field>(field: &F, m: &mut Matrix<F::Elem>) -> (usize, Vec<usize>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !field.is_zero(&m[(i, c)])) else {
            continue;
        };
        m.swap_rows(p, r);
        let inv = field.inv(&m[(r, c)]).expect("nonzero pivot");
        for j in c..cols {
            let v = field.mul(&m[(r, j)], &inv);
            m[(r, j)] = v;
        }
        for i in 0..rows {
            if i == r || field.is_zero(&m[(i, c)]) {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..cols {
                let v = field.sub_mul(&m[(i, j)], &f, &m[(r, j)]);
                m[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (r, pivots)
}

/// Row-echelon rank without back substitution.
pub fn gauss_rank<F: Field + ?Sized>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<F::Elem>> = m.row_vecs();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !field.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(p, r);
        let inv = field.inv(&a[r][c]).expect("nonzero pivot");
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            if field.is_zero(&row[c]) {
                continue;
            }
            let f = field.mul(&row[c], &inv);
            for j in c..cols {
                if field.is_zero(&prow[j]) {
                    continue;
                }
                row[j] = field.sub_mul(&row[j], &f, &prow[j]);
            }
        }
        r += 1;
    }
    r
}

/// Solves `m x = b` for one particular solution, `None` when inconsistent.
pub fn solve<F: Field>(field: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Result<Option<Vec<F::Elem>>, LinalgError> {
    if b.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let n = m.cols();
    let mut aug = Matrix::from_fn(m.rows(), n + 1, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let (_, pivots) = rref_in_place(field, &mut aug);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![field.zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[(r, n)].clone();
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::field::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(rows: &[&[i64]]) -> Matrix<BigRational> {
        let f = Rationals;
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect())
    }

    #[test]
    fn rank_examples() {
        let f = Rationals;
        assert_eq!(f.rank(&Matrix::identity(&f, 3)), 3);
        assert_eq!(f.rank(&Matrix::zeros(&f, 4, 7)), 0);
        assert_eq!(f.rank(&q(&[&[1, 2], &[2, 4], &[0, 1]])), 2);
        let p = PrimeField::default();
        assert_eq!(gauss_rank(&p, &Matrix::identity(&p, 3)), 3);
    }

    #[test]
    fn determinant_and_inverse() {
        let f = Rationals;
        let m = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(&f).unwrap(), f.from_i64(18));
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&f, &inv).unwrap(), Matrix::identity(&f, 3));
        assert_eq!(q(&[&[1, 2], &[2, 4]]).inverse(&f), Err(LinalgError::Singular));
        assert!(matches!(q(&[&[1, 2]]).det(&f), Err(LinalgError::NotSquare { .. })));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = Rationals;
        let m = q(&[&[1, 1], &[1, -1]]);
        let x = solve(&f, &m, &[f.from_i64(3), f.from_i64(1)]).unwrap().unwrap();
        assert_eq!(x, vec![f.from_i64(2), f.from_i64(1)]);
        let m = q(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&f, &m, &[f.from_i64(1), f.from_i64(3)]).unwrap(), None);
    }

    #[test]
    fn skew_and_symmetric_predicates() {
        let f = PrimeField::default();
        let s = Matrix::new(2, 2, vec![0, 5, f.neg(&5), 0]);
        assert!(s.is_skew(&f));
        assert!(!s.is_symmetric());
        assert!(Matrix::new(2, 2, vec![1u64, 2, 2, 7]).is_symmetric());
    }
}

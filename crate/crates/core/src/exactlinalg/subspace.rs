//! Linear subspaces in canonical reduced row-echelon form.

use super::field::Field;
use super::matrix::Matrix;
use super::LinalgError;

/// Incremental reduced row-echelon basis.
///
/// Every stored row has a unit pivot and all other stored rows vanish in that
/// pivot column, so reducing a vector does not depend on insertion order.
#[derive(Clone, Debug)]
pub struct RowReducer<F: Field> {
    field: F,
    ambient: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> RowReducer<F> {
    pub fn new(field: &F, ambient: usize) -> Self {
        RowReducer {
            field: field.clone(),
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Remainder of `v` modulo the current span.
    pub fn reduce(&self, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
        let f = &self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for (j, x) in row.iter().enumerate() {
                if !f.is_zero(x) {
                    v[j] = f.sub_mul(&v[j], &c, x);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let r = self.reduce(v.to_vec());
        r.iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length must equal ambient dimension");
        let f = self.field.clone();
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[p]).expect("nonzero pivot");
        for x in v.iter_mut() {
            if !f.is_zero(x) {
                *x = f.mul(x, &inv);
            }
        }
        for row in self.rows.iter_mut() {
            if f.is_zero(&row[p]) {
                continue;
            }
            let c = row[p].clone();
            for (j, x) in v.iter().enumerate() {
                if !f.is_zero(x) {
                    row[j] = f.sub_mul(&row[j], &c, x);
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn into_subspace(self) -> Subspace<F::Elem> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let pivots: Vec<usize> = order.iter().map(|&i| self.pivots[i]).collect();
        let mut rows = self.rows;
        let sorted: Vec<Vec<F::Elem>> = order.iter().map(|&i| std::mem::take(&mut rows[i])).collect();
        Subspace {
            ambient_dim: self.ambient,
            basis: Matrix::from_rows(self.ambient, sorted),
            pivot_cols: pivots,
        }
    }
}

/// A linear subspace of `E^ambient_dim` with its canonical echelon basis.
///
/// Two subspaces are equal iff their echelon bases agree entrywise, so the
/// derived `PartialEq` is subspace equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<E> {
    ambient_dim: usize,
    basis: Matrix<E>,
    pivot_cols: Vec<usize>,
}

impl<E: Clone + PartialEq> Subspace<E> {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::from_rows(ambient_dim, Vec::new()),
            pivot_cols: Vec::new(),
        }
    }

    pub fn full<F: Field<Elem = E>>(field: &F, ambient_dim: usize) -> Self {
        Self::coordinate(field, ambient_dim, 0..ambient_dim)
    }

    /// Span of the unit vectors `e_i`, `i ∈ indices`.
    pub fn coordinate<F: Field<Elem = E>>(
        field: &F,
        ambient_dim: usize,
        indices: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        let rows = idx
            .iter()
            .map(|&i| {
                let mut v = vec![field.zero(); ambient_dim];
                v[i] = field.one();
                v
            })
            .collect();
        Subspace {
            ambient_dim,
            basis: Matrix::from_rows(ambient_dim, rows),
            pivot_cols: idx,
        }
    }

    pub fn from_rows<F: Field<Elem = E>>(
        field: &F,
        ambient_dim: usize,
        rows: impl IntoIterator<Item = Vec<E>>,
    ) -> Self {
        let mut red = RowReducer::new(field, ambient_dim);
        for r in rows {
            red.insert(r);
        }
        red.into_subspace()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivot_cols.len()
    }

    /// Projective dimension of the subspace viewed as a cone.
    pub fn projective_dim(&self) -> i64 {
        self.dim() as i64 - 1
    }

    pub fn basis(&self) -> &Matrix<E> {
        &self.basis
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    pub fn reducer<F: Field<Elem = E>>(&self, field: &F) -> RowReducer<F> {
        RowReducer {
            field: field.clone(),
            ambient: self.ambient_dim,
            rows: self.basis.row_vecs(),
            pivots: self.pivot_cols.clone(),
        }
    }

    pub fn contains_vector<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> bool {
        v.len() == self.ambient_dim && self.reducer(field).contains(v)
    }

    /// Whether `other ⊆ self`.
    pub fn contains<F: Field<Elem = E>>(&self, field: &F, other: &Subspace<E>) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        let red = self.reducer(field);
        Ok((0..other.dim()).all(|i| red.contains(other.basis.row(i))))
    }

    /// Whether the subspace vanishes on every coordinate in `coords`.
    pub fn annihilated_by_coordinates<F: Field<Elem = E>>(&self, field: &F, coords: &[usize]) -> bool {
        (0..self.dim()).all(|i| coords.iter().all(|&c| field.is_zero(&self.basis[(i, c)])))
    }

    fn check_ambient(&self, other: &Subspace<E>) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// The span of `self ∪ other`.
    pub fn join<F: Field<Elem = E>>(&self, field: &F, other: &Subspace<E>) -> Result<Subspace<E>, LinalgError> {
        self.check_ambient(other)?;
        let mut red = self.reducer(field);
        for i in 0..other.dim() {
            red.insert(other.basis.row(i).to_vec());
        }
        Ok(red.into_subspace())
    }

    /// Intersection by the Zassenhaus algorithm: echelonize `[[A, A], [B, 0]]`;
    /// rows whose left half vanishes span `A ∩ B` in their right half.
    pub fn intersect<F: Field<Elem = E>>(&self, field: &F, other: &Subspace<E>) -> Result<Subspace<E>, LinalgError> {
        self.check_ambient(other)?;
        let n = self.ambient_dim;
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for i in 0..self.dim() {
            let r = self.basis.row(i);
            rows.push(r.iter().chain(r.iter()).cloned().collect::<Vec<_>>());
        }
        for i in 0..other.dim() {
            let mut r = other.basis.row(i).to_vec();
            r.extend(std::iter::repeat(field.zero()).take(n));
            rows.push(r);
        }
        let stacked = Subspace::from_rows(field, 2 * n, rows);
        let inter = (0..stacked.dim())
            .filter(|&i| stacked.pivot_cols[i] >= n)
            .map(|i| stacked.basis.row(i)[n..].to_vec());
        Ok(Subspace::from_rows(field, n, inter))
    }

    /// Intersection with the coordinate subspace spanned by `e_i` for `keep(i)`:
    /// eliminate the dropped coordinates first, then keep the rows whose pivot
    /// lies among the kept ones.
    pub fn intersect_coordinate<F: Field<Elem = E>>(&self, field: &F, keep: impl Fn(usize) -> bool) -> Subspace<E> {
        let n = self.ambient_dim;
        let order: Vec<usize> = (0..n).filter(|&c| !keep(c)).chain((0..n).filter(|&c| keep(c))).collect();
        let dropped = order.iter().take_while(|&&c| !keep(c)).count();
        let permuted = (0..self.dim()).map(|i| order.iter().map(|&c| self.basis[(i, c)].clone()).collect());
        let ech = Subspace::from_rows(field, n, permuted);
        let mut back = vec![0; n];
        for (k, &c) in order.iter().enumerate() {
            back[c] = k;
        }
        let rows = (0..ech.dim())
            .filter(|&i| ech.pivot_cols[i] >= dropped)
            .map(|i| (0..n).map(|c| ech.basis[(i, back[c])].clone()).collect());
        Subspace::from_rows(field, n, rows)
    }

    /// The subspace of vectors `y` with `⟨b, y⟩ = 0` for every basis row `b`.
    pub fn annihilator<F: Field<Elem = E>>(&self, field: &F) -> Subspace<E> {
        let n = self.ambient_dim;
        let mut is_pivot = vec![false; n];
        for &p in &self.pivot_cols {
            is_pivot[p] = true;
        }
        let rows = (0..n).filter(|&c| !is_pivot[c]).map(|free| {
            let mut y = vec![field.zero(); n];
            y[free] = field.one();
            for (r, &p) in self.pivot_cols.iter().enumerate() {
                y[p] = field.neg(&self.basis[(r, free)]);
            }
            y
        });
        Subspace::from_rows(field, n, rows)
    }

    /// Coordinates of the subspace projected onto the listed coordinates.
    pub fn project<F: Field<Elem = E>>(&self, field: &F, coords: &[usize]) -> Subspace<E> {
        let rows = (0..self.dim()).map(|i| coords.iter().map(|&c| self.basis[(i, c)].clone()).collect());
        Subspace::from_rows(field, coords.len(), rows)
    }

    /// Image under the linear map `x ↦ x·L` where `L` is `ambient × target`.
    pub fn map_rows<F: Field<Elem = E>>(&self, field: &F, lift: &Matrix<E>) -> Result<Subspace<E>, LinalgError> {
        let image = self.basis.mul(field, lift)?;
        Ok(Subspace::from_rows(field, lift.cols(), image.row_vecs()))
    }
}

/// Canonical echelon form of the row space of `m`.
pub fn echelon<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Subspace<F::Elem> {
    Subspace::from_rows(field, m.cols(), m.row_vecs())
}

/// Rank of `m` through the field's preferred algorithm.
pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    field.rank(m)
}

//! Matrices whose entries are polynomials in one parameter `t`, and flat limits
//! of the row spaces they span.

use rand::Rng;

use super::field::Field;
use super::matrix::Matrix;
use super::subspace::{RowReducer, Subspace};

/// A univariate polynomial, coefficients in increasing degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> UPoly<E> {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant<F: Field<Elem = E>>(field: &F, c: E) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    /// `c · t^k`.
    pub fn monomial<F: Field<Elem = E>>(field: &F, c: E, k: usize) -> Self {
        let mut v = vec![field.zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(field, v)
    }

    pub fn from_coeffs<F: Field<Elem = E>>(field: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff<F: Field<Elem = E>>(&self, field: &F, k: usize) -> E {
        self.coeffs.get(k).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn eval<F: Field<Elem = E>>(&self, field: &F, t: &E) -> E {
        self.coeffs
            .iter()
            .rev()
            .fold(field.zero(), |acc, c| field.add(&field.mul(&acc, t), c))
    }

    pub fn add<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|k| field.add(&self.coeff(field, k), &other.coeff(field, k)))
            .collect();
        Self::from_coeffs(field, v)
    }

    pub fn sub<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|k| field.sub(&self.coeff(field, k), &other.coeff(field, k)))
            .collect();
        Self::from_coeffs(field, v)
    }

    pub fn neg<F: Field<Elem = E>>(&self, field: &F) -> Self {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, field: &F, c: &E) -> Self {
        Self::from_coeffs(field, self.coeffs.iter().map(|x| field.mul(x, c)).collect())
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = field.add(&v[i + j], &field.mul(a, b));
            }
        }
        Self::from_coeffs(field, v)
    }

    /// Quotient and remainder of Euclidean division; panics on a zero divisor.
    pub fn div_rem<F: Field<Elem = E>>(&self, field: &F, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = field.inv(&divisor.coeffs[dd]).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if sd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![field.zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = field.mul(&rem[k + dd], &lead_inv);
            if field.is_zero(&c) {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = field.sub_mul(&rem[k + i], &c, d);
            }
            quot[k] = c;
        }
        (Self::from_coeffs(field, quot), Self::from_coeffs(field, rem))
    }

    /// Exact quotient; panics when `divisor` does not divide `self`.
    pub fn div_exact<F: Field<Elem = E>>(&self, field: &F, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(field, divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

/// A row vector with polynomial entries, stored as `Σ_k t^k · coeffs[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRow<E> {
    cols: usize,
    coeffs: Vec<Vec<E>>,
}

impl<E: Clone + PartialEq> PolyRow<E> {
    pub fn zero(cols: usize) -> Self {
        PolyRow {
            cols,
            coeffs: Vec::new(),
        }
    }

    pub fn constant<F: Field<Elem = E>>(field: &F, v: Vec<E>) -> Self {
        let cols = v.len();
        Self::from_coeffs(field, cols, vec![v])
    }

    pub fn from_coeffs<F: Field<Elem = E>>(field: &F, cols: usize, coeffs: Vec<Vec<E>>) -> Self {
        assert!(coeffs.iter().all(|c| c.len() == cols), "ragged polynomial row");
        let mut r = PolyRow { cols, coeffs };
        r.trim(field);
        r
    }

    pub fn from_entries<F: Field<Elem = E>>(field: &F, entries: &[UPoly<E>]) -> Self {
        let cols = entries.len();
        let deg = entries.iter().map(|p| p.coeffs.len()).max().unwrap_or(0);
        let coeffs = (0..deg)
            .map(|k| entries.iter().map(|p| p.coeff(field, k)).collect())
            .collect();
        Self::from_coeffs(field, cols, coeffs)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Coefficient vectors by power of `t`.
    pub fn coeffs(&self) -> &[Vec<E>] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn entry<F: Field<Elem = E>>(&self, field: &F, j: usize) -> UPoly<E> {
        UPoly::from_coeffs(field, self.coeffs.iter().map(|c| c[j].clone()).collect())
    }

    pub fn eval<F: Field<Elem = E>>(&self, field: &F, t: &E) -> Vec<E> {
        let mut out = vec![field.zero(); self.cols];
        for c in self.coeffs.iter().rev() {
            for (o, x) in out.iter_mut().zip(c) {
                *o = field.add(&field.mul(o, t), x);
            }
        }
        out
    }

    /// Value at `t = 0`.
    pub fn lead<F: Field<Elem = E>>(&self, field: &F) -> Vec<E> {
        self.coeffs.first().cloned().unwrap_or_else(|| vec![field.zero(); self.cols])
    }

    fn trim<F: Field<Elem = E>>(&mut self, field: &F) {
        while self
            .coeffs
            .last()
            .is_some_and(|c| c.iter().all(|x| field.is_zero(x)))
        {
            self.coeffs.pop();
        }
    }

    /// `self -= c · other` for a constant `c`.
    fn sub_scaled<F: Field<Elem = E>>(&mut self, field: &F, c: &E, other: &Self) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), vec![field.zero(); self.cols]);
        }
        for (mine, theirs) in self.coeffs.iter_mut().zip(&other.coeffs) {
            for (m, o) in mine.iter_mut().zip(theirs) {
                if !field.is_zero(o) {
                    *m = field.sub_mul(m, c, o);
                }
            }
        }
        self.trim(field);
    }

    fn scale<F: Field<Elem = E>>(&mut self, field: &F, c: &E) {
        for v in self.coeffs.iter_mut() {
            for x in v.iter_mut() {
                if !field.is_zero(x) {
                    *x = field.mul(x, c);
                }
            }
        }
    }

    /// Divides by the largest power of `t` dividing every entry; returns the power.
    fn saturate<F: Field<Elem = E>>(&mut self, field: &F) -> usize {
        let v = self
            .coeffs
            .iter()
            .take_while(|c| c.iter().all(|x| field.is_zero(x)))
            .count();
        self.coeffs.drain(..v);
        v
    }
}

/// A matrix with entries in `K[t]`, kept as a list of polynomial rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix<E> {
    cols: usize,
    rows: Vec<PolyRow<E>>,
}

impl<E: Clone + PartialEq> PolyMatrix<E> {
    pub fn new(cols: usize) -> Self {
        PolyMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    /// Builds a matrix from a grid of polynomial entries.
    pub fn from_entries<F: Field<Elem = E>>(field: &F, cols: usize, entries: Vec<Vec<UPoly<E>>>) -> Self {
        let mut m = Self::new(cols);
        for r in entries {
            assert_eq!(r.len(), cols, "ragged polynomial matrix");
            m.push_row(PolyRow::from_entries(field, &r));
        }
        m
    }

    /// A constant family.
    pub fn from_constant<F: Field<Elem = E>>(field: &F, m: &Matrix<E>) -> Self {
        let mut out = Self::new(m.cols());
        for v in m.row_vecs() {
            out.push_row(PolyRow::constant(field, v));
        }
        out
    }

    pub fn push_row(&mut self, row: PolyRow<E>) {
        assert_eq!(row.cols, self.cols, "row length must equal column count");
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: &PolyMatrix<E>) {
        for r in &other.rows {
            self.push_row(r.clone());
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn poly_rows(&self) -> &[PolyRow<E>] {
        &self.rows
    }

    pub fn entry<F: Field<Elem = E>>(&self, field: &F, i: usize, j: usize) -> UPoly<E> {
        self.rows[i].entry(field, j)
    }

    pub fn max_degree(&self) -> usize {
        self.rows.iter().filter_map(|r| r.degree()).max().unwrap_or(0)
    }

    pub fn eval<F: Field<Elem = E>>(&self, field: &F, t: &E) -> Matrix<E> {
        Matrix::from_rows(self.cols, self.rows.iter().map(|r| r.eval(field, t)).collect())
    }

    /// Rank over `K(t)` estimated as the maximum rank at `samples` random values of `t`.
    pub fn sampled_rank<F: Field<Elem = E>, R: Rng + ?Sized>(&self, field: &F, rng: &mut R, samples: usize) -> usize {
        (0..samples.max(1))
            .map(|_| {
                let t = field.sample(rng);
                field.rank(&self.eval(field, &t))
            })
            .max()
            .unwrap_or(0)
    }
}

/// Flat limit at `t = 0` of the family of row spaces of `f`.
///
/// Rows are inserted one at a time into a basis of the row module whose values
/// at `t = 0` stay linearly independent (a saturated basis).  A new row is
/// reduced by constant multiples of the basis until its value at `t = 0` is
/// independent, dividing by `t` whenever all of its entries vanish at `t = 0`.
/// Each division lowers the `t`-adic valuation of the wedge product of the
/// basis and the new row by one.  For a row independent over `K(t)` that
/// valuation is at most the degree of the wedge of the original rows, so a row
/// needing more than `(rank + 1) · max_degree` divisions is dependent and is
/// dropped.  A row independent at a random value of `t` is certainly
/// independent, and skips that bookkeeping.  The limit is the span of the
/// values at `t = 0`; its dimension is the rank of `f` over `K(t)`.
pub fn flat_limit<F: Field>(field: &F, f: &PolyMatrix<F::Elem>) -> Subspace<F::Elem> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_f1a7);
    let t0 = field.sample(&mut rng);
    let mut at_t0 = RowReducer::new(field, f.cols);
    let max_deg = f.max_degree();
    let mut basis: Vec<(PolyRow<F::Elem>, usize)> = Vec::new();
    for row in &f.rows {
        let surely_independent = at_t0.insert(row.eval(field, &t0));
        let budget = (basis.len() + 1) * max_deg;
        let mut divisions = 0;
        let mut r = row.clone();
        loop {
            if r.is_zero() || (!surely_independent && divisions > budget) {
                break;
            }
            divisions += r.saturate(field);
            for (b, p) in &basis {
                let c = r.coeffs[0][*p].clone();
                if !field.is_zero(&c) {
                    r.sub_scaled(field, &c, b);
                    if r.is_zero() {
                        break;
                    }
                }
            }
            if r.is_zero() {
                break;
            }
            let Some(p) = r.coeffs[0].iter().position(|x| !field.is_zero(x)) else {
                continue;
            };
            let inv = field.inv(&r.coeffs[0][p]).expect("nonzero pivot");
            r.scale(field, &inv);
            for (b, _) in basis.iter_mut() {
                let c = b.coeffs[0][p].clone();
                if !field.is_zero(&c) {
                    b.sub_scaled(field, &c, &r);
                }
            }
            basis.push((r, p));
            break;
        }
    }
    let mut red = RowReducer::new(field, f.cols);
    for (b, _) in basis {
        red.insert(b.lead(field));
    }
    red.into_subspace()
}

/// Determinant of a square polynomial matrix by fraction-free (Bareiss) elimination.
pub fn poly_det<F: Field>(field: &F, m: &[Vec<UPoly<F::Elem>>]) -> UPoly<F::Elem> {
    let n = m.len();
    if n == 0 {
        return UPoly::constant(field, field.one());
    }
    let mut a: Vec<Vec<UPoly<F::Elem>>> = m.to_vec();
    let mut prev = UPoly::constant(field, field.one());
    let mut sign = false;
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return UPoly::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[k][k].mul(field, &a[i][j]).sub(field, &a[i][k].mul(field, &a[k][j]));
                a[i][j] = v.div_exact(field, &prev);
            }
            a[i][k] = UPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        d.neg(field)
    } else {
        d
    }
}

/// A `K(t)`-basis of the left kernel `{x : x·M = 0}` of `m`, with polynomial entries.
///
/// A nonsingular maximal minor `B = M[R, C]` is located at a random value of
/// `t`; for each row `j ∉ R` Cramer's rule gives the kernel vector with
/// `x_j = det B` and `x_{R_i} = -det(B with row i replaced by M[j, C])`.  Every
/// vector is checked against all columns, and the minor is resampled if the
/// check fails.
pub fn poly_left_kernel<F: Field, R: Rng + ?Sized>(
    field: &F,
    m: &PolyMatrix<F::Elem>,
    rng: &mut R,
) -> Vec<Vec<UPoly<F::Elem>>> {
    let nr = m.nrows();
    let entries: Vec<Vec<UPoly<F::Elem>>> = (0..nr)
        .map(|i| (0..m.cols).map(|j| m.entry(field, i, j)).collect())
        .collect();
    'attempt: loop {
        let t0 = field.sample(rng);
        let val = m.eval(field, &t0);
        let mut red = RowReducer::new(field, m.cols);
        let sel_rows: Vec<usize> = (0..nr).filter(|&i| red.insert(val.row(i).to_vec())).collect();
        let sel_cols: Vec<usize> = red.into_subspace().pivot_cols().to_vec();
        let block = |replace: Option<(usize, usize)>| -> Vec<Vec<UPoly<F::Elem>>> {
            sel_rows
                .iter()
                .enumerate()
                .map(|(k, &i)| {
                    let src = match replace {
                        Some((pos, j)) if pos == k => j,
                        _ => i,
                    };
                    sel_cols.iter().map(|&c| entries[src][c].clone()).collect()
                })
                .collect()
        };
        let d = poly_det(field, &block(None));
        let mut kernel = Vec::new();
        for j in (0..nr).filter(|j| !sel_rows.contains(j)) {
            let mut x = vec![UPoly::zero(); nr];
            x[j] = d.clone();
            for (pos, &i) in sel_rows.iter().enumerate() {
                x[i] = poly_det(field, &block(Some((pos, j)))).neg(field);
            }
            for c in 0..m.cols {
                let s = (0..nr).fold(UPoly::zero(), |acc, i| acc.add(field, &x[i].mul(field, &entries[i][c])));
                if !s.is_zero() {
                    continue 'attempt;
                }
            }
            kernel.push(x);
        }
        return kernel;
    }
}

/// Row space of `x·M(t)` for polynomial combination vectors `x`.
pub fn combine_rows<F: Field>(field: &F, coeffs: &[Vec<UPoly<F::Elem>>], m: &PolyMatrix<F::Elem>) -> PolyMatrix<F::Elem> {
    let mut out = PolyMatrix::new(m.cols);
    for x in coeffs {
        let entries: Vec<UPoly<F::Elem>> = (0..m.cols)
            .map(|c| {
                x.iter()
                    .enumerate()
                    .fold(UPoly::zero(), |acc, (i, xi)| acc.add(field, &xi.mul(field, &m.entry(field, i, c))))
            })
            .collect();
        out.push_row(PolyRow::from_entries(field, &entries));
    }
    out
}

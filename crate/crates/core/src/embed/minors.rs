//! Memoized Laplace expansion of all minors and all principal Pfaffians.
//!
//! Index masks here are 0-based bitmasks over rows/columns.

use std::collections::HashMap;

use crate::combinat::IndexSet;
use crate::exactlinalg::{Field, Matrix};

use super::ring::{Ring, Scalars};
use super::EmbedError;

/// Masks of `k` bits among the lowest `n`, in increasing numeric order.
pub fn masks_of_size(n: usize, k: usize) -> Vec<u64> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut m: u64 = (1 << k) - 1;
    let limit: u64 = 1 << n;
    while m < limit {
        out.push(m);
        // Gosper's hack
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}

/// Converts a 1-based index set to a 0-based mask.
pub fn to_mask(s: IndexSet) -> u64 {
    s.iter().fold(0, |m, e| m | (1 << (e - 1)))
}

/// Converts a 0-based mask to a 1-based index set.
pub fn from_mask(m: u64) -> IndexSet {
    IndexSet::new((0..64).filter(|b| m >> b & 1 == 1).map(|b| b + 1))
}

/// All square minors `det A[R, C]` with `|R| = |C| ≤ max_k`.
pub struct Minors<E> {
    table: HashMap<(u64, u64), E>,
}

impl<E> Minors<E> {
    pub fn get(&self, rows: u64, cols: u64) -> Option<&E> {
        self.table.get(&(rows, cols))
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// Expands every minor of the `n_rows × n_cols` matrix `a` along its first row,
/// reusing the minors of the previous size.
pub fn all_minors<R: Ring>(ring: &R, a: &[Vec<R::Elem>], n_cols: usize, max_k: usize) -> Minors<R::Elem> {
    let n_rows = a.len();
    let mut table = HashMap::new();
    table.insert((0u64, 0u64), ring.one());
    let max_k = max_k.min(n_rows).min(n_cols);
    let col_sets: Vec<Vec<u64>> = (0..=max_k).map(|k| masks_of_size(n_cols, k)).collect();
    for k in 1..=max_k {
        for &rows in &masks_of_size(n_rows, k) {
            let r1 = rows.trailing_zeros() as usize;
            let rest = rows & !(1 << r1);
            for &cols in &col_sets[k] {
                let mut acc = ring.zero();
                let mut pos = 0;
                for c in 0..n_cols {
                    if cols >> c & 1 == 0 {
                        continue;
                    }
                    let entry = &a[r1][c];
                    if !ring.is_zero(entry) {
                        let sub = &table[&(rest, cols & !(1 << c))];
                        if !ring.is_zero(sub) {
                            let term = ring.mul(entry, sub);
                            acc = if pos % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
                        }
                    }
                    pos += 1;
                }
                table.insert((rows, cols), acc);
            }
        }
    }
    Minors { table }
}

/// Pfaffians of every principal submatrix with an even index set, stored by
/// mask (odd masks hold zero).  `a` must be skew-symmetric; only entries above
/// the diagonal are read.
pub fn all_pfaffians<R: Ring>(ring: &R, a: &[Vec<R::Elem>]) -> Vec<R::Elem> {
    let n = a.len();
    let mut pf = vec![ring.zero(); 1 << n];
    pf[0] = ring.one();
    for size in (2..=n).step_by(2) {
        for m in masks_of_size(n, size) {
            pf[m as usize] = expand_pfaffian(ring, a, m, |sub| pf[sub as usize].clone());
        }
    }
    pf
}

/// `pf(A_I) = Σ_k (−1)^{k+1} a_{i₀ i_k} pf(A_{I∖{i₀,i_k}})`.
fn expand_pfaffian<R: Ring>(ring: &R, a: &[Vec<R::Elem>], m: u64, mut sub: impl FnMut(u64) -> R::Elem) -> R::Elem {
    let i0 = m.trailing_zeros() as usize;
    let rest = m & !(1 << i0);
    let mut acc = ring.zero();
    let mut k = 1;
    for j in 0..a.len() {
        if rest >> j & 1 == 0 {
            continue;
        }
        let entry = &a[i0][j];
        if !ring.is_zero(entry) {
            let s = sub(rest & !(1 << j));
            if !ring.is_zero(&s) {
                let term = ring.mul(entry, &s);
                acc = if k % 2 == 1 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
            }
        }
        k += 1;
    }
    acc
}

fn pfaffian_memo<R: Ring>(ring: &R, a: &[Vec<R::Elem>], m: u64, memo: &mut HashMap<u64, R::Elem>) -> R::Elem {
    if m == 0 {
        return ring.one();
    }
    if let Some(v) = memo.get(&m) {
        return v.clone();
    }
    let v = expand_pfaffian(ring, a, m, |sub| pfaffian_memo(ring, a, sub, memo));
    memo.insert(m, v.clone());
    v
}

/// `pf(A_I)` for a skew matrix `A` and a 1-based index set `I` of even size.
pub fn pfaffian_of<R: Ring>(ring: &R, a: &[Vec<R::Elem>], i: IndexSet) -> Result<R::Elem, EmbedError> {
    if i.len() % 2 == 1 {
        return Err(EmbedError::OddPfaffian(i.len()));
    }
    if i.iter().any(|e| e > a.len()) {
        return Err(EmbedError::IndexOutOfRange { index: i.label(), n: a.len() });
    }
    Ok(pfaffian_memo(ring, a, to_mask(i), &mut HashMap::new()))
}

/// Numeric `pf(A_I)`.
pub fn pfaffian<F: Field>(field: &F, a: &Matrix<F::Elem>, i: IndexSet) -> Result<F::Elem, EmbedError> {
    if a.rows() != a.cols() || !a.is_skew(field) {
        return Err(EmbedError::NotSkew);
    }
    pfaffian_of(&Scalars(field), &a.row_vecs(), i)
}

/// `A⁻¹` of an invertible skew matrix of even size from its Pfaffians:
/// `(A⁻¹)_{ij} = (−1)^{i+j} sgn(j−i) pf(A_{îĵ}) / pf(A)`.
pub fn skew_inverse_via_pfaffians<F: Field>(field: &F, a: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>, EmbedError> {
    let n = a.rows();
    if n != a.cols() || !a.is_skew(field) {
        return Err(EmbedError::NotSkew);
    }
    if n % 2 == 1 {
        return Err(EmbedError::Singular);
    }
    let rows = a.row_vecs();
    let ring = Scalars(field);
    let full: u64 = (1 << n) - 1;
    let mut memo = HashMap::new();
    let pf = pfaffian_memo(&ring, &rows, full, &mut memo);
    let inv_pf = field.inv(&pf).ok_or(EmbedError::Singular)?;
    Ok(Matrix::from_fn(n, n, |i, j| {
        if i == j {
            return field.zero();
        }
        let minor = pfaffian_memo(&ring, &rows, full & !(1 << i) & !(1 << j), &mut memo);
        let v = field.mul(&minor, &inv_pf);
        if ((i + j) % 2 == 1) == (i < j) {
            field.neg(&v)
        } else {
            v
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::poly::MultiPoly;
    use crate::embed::ring::Polys;
    use crate::embed::{chart_matrix_symbolic, Shape};
    use crate::exactlinalg::{PrimeField, Rationals};
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_skew<F: Field>(field: &F, n: usize, rng: &mut ChaCha8Rng) -> Matrix<F::Elem> {
        let mut m = Matrix::zeros(field, n, n).row_vecs();
        for i in 0..n {
            for j in i + 1..n {
                let v = field.sample(rng);
                m[j][i] = field.neg(&v);
                m[i][j] = v;
            }
        }
        Matrix::from_rows(n, m)
    }

    #[test]
    fn masks_enumerate_binomially() {
        assert_eq!(masks_of_size(5, 2).len(), 10);
        assert_eq!(masks_of_size(4, 0), vec![0]);
        assert_eq!(masks_of_size(3, 3), vec![7]);
        assert_eq!(from_mask(to_mask(IndexSet::new([1, 3, 7]))), IndexSet::new([1, 3, 7]));
    }

    #[test]
    fn small_pfaffians() {
        let a = chart_matrix_symbolic(Shape::Skew, 4);
        let x = |v| MultiPoly::var(v);
        // variables in order a12 a13 a14 a23 a24 a34
        let pf2 = pfaffian_of(&Polys, &a, IndexSet::new([1, 2])).unwrap();
        assert_eq!(pf2, x(0));
        let pf4 = pfaffian_of(&Polys, &a, IndexSet::new([1, 2, 3, 4])).unwrap();
        assert_eq!(pf4, x(0).mul(&x(5)).sub(&x(1).mul(&x(4))).add(&x(2).mul(&x(3))));
        assert!(matches!(pfaffian_of(&Polys, &a, IndexSet::new([1, 2, 3])), Err(EmbedError::OddPfaffian(3))));
    }

    #[test]
    fn pfaffian_squared_is_determinant() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = random_skew(&f, 6, &mut rng);
            let pf = pfaffian(&f, &a, IndexSet::range(1, 6)).unwrap();
            assert_eq!(f.mul(&pf, &pf), a.det(&f).unwrap());
        }
        // every even principal submatrix, symbolically up to n = 6
        let a = chart_matrix_symbolic(Shape::Skew, 6);
        let pfs = all_pfaffians(&Polys, &a);
        let minors = all_minors(&Polys, &a, 6, 6);
        for m in 0u64..64 {
            if m.count_ones() % 2 == 0 {
                let p = &pfs[m as usize];
                assert_eq!(&p.mul(p), minors.get(m, m).unwrap());
            } else {
                assert!(minors.get(m, m).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn minors_match_elimination() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = Matrix::from_fn(5, 5, |_, _| f.sample(&mut rng));
        let minors = all_minors(&Scalars(&f), &a.row_vecs(), 5, 5);
        for k in 0..=5 {
            for r in masks_of_size(5, k) {
                for c in masks_of_size(5, k) {
                    let rs: Vec<usize> = (0..5).filter(|b| r >> b & 1 == 1).collect();
                    let cs: Vec<usize> = (0..5).filter(|b| c >> b & 1 == 1).collect();
                    let d = if k == 0 { f.one() } else { a.submatrix(&rs, &cs).det(&f).unwrap() };
                    assert_eq!(minors.get(r, c), Some(&d));
                }
            }
        }
    }

    #[test]
    fn skew_inverse_examples() {
        let q = Rationals;
        let one = q.one();
        let a = Matrix::from_rows(2, vec![vec![q.zero(), one.clone()], vec![q.neg(&one), q.zero()]]);
        let inv = skew_inverse_via_pfaffians(&q, &a).unwrap();
        assert_eq!(inv, Matrix::from_rows(2, vec![vec![q.zero(), q.neg(&one)], vec![one, q.zero()]]));

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a: Matrix<BigRational> = random_skew(&q, 4, &mut rng);
        let inv = skew_inverse_via_pfaffians(&q, &a).unwrap();
        assert_eq!(a.mul(&q, &inv).unwrap(), Matrix::identity(&q, 4));
        assert_eq!(inv, a.inverse(&q).unwrap());

        let f = PrimeField::default();
        for _ in 0..20 {
            let a = random_skew(&f, 6, &mut rng);
            assert_eq!(skew_inverse_via_pfaffians(&f, &a).unwrap(), a.inverse(&f).unwrap());
        }
        let zero = Matrix::zeros(&f, 4, 4);
        assert!(matches!(skew_inverse_via_pfaffians(&f, &zero), Err(EmbedError::Singular)));
    }
}

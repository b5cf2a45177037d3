//! Commutative rings over which minors and Pfaffians are expanded.
//!
//! The same expansion code produces symbolic coordinates (integer
//! polynomials), numeric coordinates (field elements) and numeric coordinates
//! together with all first partial derivatives (first-order jets).

use crate::exactlinalg::Field;

use super::poly::MultiPoly;

pub trait Ring {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
}

/// Integer polynomials.
#[derive(Clone, Copy, Debug, Default)]
pub struct Polys;

impl Ring for Polys {
    type Elem = MultiPoly;
    fn zero(&self) -> MultiPoly {
        MultiPoly::zero()
    }
    fn one(&self) -> MultiPoly {
        MultiPoly::constant(1)
    }
    fn is_zero(&self, a: &MultiPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.add(b)
    }
    fn sub(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.sub(b)
    }
    fn mul(&self, a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        a.mul(b)
    }
    fn neg(&self, a: &MultiPoly) -> MultiPoly {
        a.neg()
    }
}

/// Elements of a field.
#[derive(Clone, Copy, Debug)]
pub struct Scalars<'a, F>(pub &'a F);

impl<F: Field> Ring for Scalars<'_, F> {
    type Elem = F::Elem;
    fn zero(&self) -> F::Elem {
        self.0.zero()
    }
    fn one(&self) -> F::Elem {
        self.0.one()
    }
    fn is_zero(&self, a: &F::Elem) -> bool {
        self.0.is_zero(a)
    }
    fn add(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.add(a, b)
    }
    fn sub(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.sub(a, b)
    }
    fn mul(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.mul(a, b)
    }
    fn neg(&self, a: &F::Elem) -> F::Elem {
        self.0.neg(a)
    }
}

/// First-order jets in `k` variables: `F[x_1..x_k] / (x)²`.  An element is
/// stored as `[value, ∂_1, …, ∂_k]`.
#[derive(Clone, Copy, Debug)]
pub struct Jets<'a, F> {
    pub field: &'a F,
    pub k: usize,
}

impl<'a, F: Field> Jets<'a, F> {
    pub fn new(field: &'a F, k: usize) -> Self {
        Jets { field, k }
    }

    pub fn constant(&self, c: F::Elem) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.k + 1];
        v[0] = c;
        v
    }

    /// `c + s·x_var`.
    pub fn variable(&self, c: F::Elem, var: usize, s: F::Elem) -> Vec<F::Elem> {
        let mut v = self.constant(c);
        v[var + 1] = s;
        v
    }
}

impl<F: Field> Ring for Jets<'_, F> {
    type Elem = Vec<F::Elem>;
    fn zero(&self) -> Vec<F::Elem> {
        self.constant(self.field.zero())
    }
    fn one(&self) -> Vec<F::Elem> {
        self.constant(self.field.one())
    }
    fn is_zero(&self, a: &Vec<F::Elem>) -> bool {
        a.iter().all(|x| self.field.is_zero(x))
    }
    fn add(&self, a: &Vec<F::Elem>, b: &Vec<F::Elem>) -> Vec<F::Elem> {
        a.iter().zip(b).map(|(x, y)| self.field.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<F::Elem>, b: &Vec<F::Elem>) -> Vec<F::Elem> {
        a.iter().zip(b).map(|(x, y)| self.field.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<F::Elem>, b: &Vec<F::Elem>) -> Vec<F::Elem> {
        let f = self.field;
        let mut out = Vec::with_capacity(a.len());
        out.push(f.mul(&a[0], &b[0]));
        for i in 1..a.len() {
            let l = if f.is_zero(&b[i]) { f.zero() } else { f.mul(&a[0], &b[i]) };
            let r = if f.is_zero(&a[i]) { f.zero() } else { f.mul(&b[0], &a[i]) };
            out.push(f.add(&l, &r));
        }
        out
    }
    fn neg(&self, a: &Vec<F::Elem>) -> Vec<F::Elem> {
        a.iter().map(|x| self.field.neg(x)).collect()
    }
}

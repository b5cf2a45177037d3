//! Sparse multivariate polynomials with integer coefficients.
//!
//! Every coordinate of the chart parametrizations is a signed sum of products
//! of matrix entries, so integer coefficients suffice.  Arithmetic is checked
//! and panics on `i64` overflow.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use crate::exactlinalg::Field;

/// A monomial as the sorted multiset of its variable indices.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: usize) -> Self {
        let mut s = SmallVec::new();
        s.push(v as u16);
        Monomial(s)
    }

    /// Builds a monomial from a dense exponent vector.
    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut s = SmallVec::new();
        for (v, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                s.push(v as u16);
            }
        }
        Monomial(s)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn vars(&self) -> &[u16] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                out.push(self.0[i]);
                i += 1;
            } else {
                out.push(other.0[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `(variable, exponent)` pairs in increasing variable order.
    pub fn exponents(&self) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = Vec::new();
        for &v in &self.0 {
            match out.last_mut() {
                Some((w, e)) if *w == v as usize => *e += 1,
                _ => out.push((v as usize, 1)),
            }
        }
        out
    }

    pub fn dense_exponents(&self, n_vars: usize) -> Vec<u32> {
        let mut e = vec![0; n_vars];
        for &v in &self.0 {
            e[v as usize] += 1;
        }
        e
    }

    /// Largest exponent of a single variable.
    pub fn max_exponent(&self) -> u32 {
        self.exponents().iter().map(|&(_, e)| e).max().unwrap_or(0)
    }

    pub fn eval<F: Field>(&self, field: &F, vals: &[F::Elem]) -> F::Elem {
        self.0
            .iter()
            .fold(field.one(), |acc, &v| field.mul(&acc, &vals[v as usize]))
    }
}

/// Graded order: total degree first, then lexicographic on the sorted variables.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents()
            .iter()
            .map(|&(v, e)| if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A polynomial as a list of terms sorted by the graded monomial order, with
/// nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: Vec<(Monomial, i64)>,
}

fn checked(v: Option<i64>) -> i64 {
    v.expect("polynomial coefficient overflow")
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        Self::from_terms(vec![(Monomial::one(), c)])
    }

    pub fn var(v: usize) -> Self {
        Self::from_terms(vec![(Monomial::var(v), 1)])
    }

    /// Normalizes an arbitrary term list: merges duplicates, drops zeros, sorts.
    pub fn from_terms(terms: Vec<(Monomial, i64)>) -> Self {
        let mut acc: HashMap<Monomial, i64> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            let e = acc.entry(m).or_insert(0);
            *e = checked(e.checked_add(c));
        }
        let mut terms: Vec<(Monomial, i64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        MultiPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.last().map(|(m, _)| m.degree())
    }

    /// Largest exponent of any single variable in any term.
    pub fn max_var_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.max_exponent()).max().unwrap_or(0)
    }

    pub fn coeff(&self, m: &Monomial) -> i64 {
        self.terms
            .binary_search_by(|(t, _)| t.cmp(m))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = checked(self.terms[i].1.checked_add(other.terms[j].1));
                    if c != 0 {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        MultiPoly { terms: out }
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), checked(c.checked_neg()))).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: i64) -> MultiPoly {
        if c == 0 {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), checked(x.checked_mul(c)))).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, self.terms[0].1);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                terms.push((a.mul(b), checked(x.checked_mul(*y))));
            }
        }
        Self::from_terms(terms)
    }

    /// Product with a single term; the graded order is preserved by monomial
    /// multiplication so no re-sorting is needed.
    fn mul_term(&self, m: &Monomial, c: i64) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(a, x)| (a.mul(m), checked(x.checked_mul(c))))
                .collect(),
        }
    }

    pub fn eval<F: Field>(&self, field: &F, vals: &[F::Elem]) -> F::Elem {
        self.terms.iter().fold(field.zero(), |acc, (m, c)| {
            field.add(&acc, &field.mul(&field.from_i64(*c), &m.eval(field, vals)))
        })
    }

    /// Terms of total degree at most `s`.
    pub fn truncate(&self, s: usize) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().filter(|(m, _)| m.degree() <= s).cloned().collect(),
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if k > 0 { "+" } else { "" };
            let abs = c.unsigned_abs();
            let body: Vec<String> = m
                .exponents()
                .iter()
                .map(|&(v, e)| if e == 1 { names[v].clone() } else { format!("{}^{e}", names[v]) })
                .collect();
            let mut piece = String::new();
            if abs != 1 || body.is_empty() {
                piece.push_str(&abs.to_string());
                if !body.is_empty() {
                    piece.push('*');
                }
            }
            piece.push_str(&body.join("*"));
            if k > 0 {
                out.push(' ');
            }
            out.push_str(sign);
            if k > 0 && !sign.is_empty() {
                out.push(' ');
            }
            out.push_str(&piece);
        }
        out
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{m:?}")).collect();
        write!(f, "{}", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::PrimeField;
    use proptest::prelude::*;

    fn x(v: usize) -> MultiPoly {
        MultiPoly::var(v)
    }

    #[test]
    fn arithmetic_basics() {
        let p = x(0).add(&x(1));
        let q = x(0).sub(&x(1));
        let prod = p.mul(&q);
        assert_eq!(prod, x(0).mul(&x(0)).sub(&x(1).mul(&x(1))));
        assert_eq!(prod.degree(), Some(2));
        assert_eq!(prod.max_var_degree(), 2);
        assert_eq!(p.sub(&p), MultiPoly::zero());
        assert_eq!(prod.coeff(&Monomial::from_exponents(&[0, 2])), -1);
        let names = vec!["a".to_string(), "b".to_string()];
        assert_eq!(prod.render(&names), "a^2 - b^2");
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn overflow_panics() {
        MultiPoly::constant(i64::MAX).add(&MultiPoly::constant(1));
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((prop::collection::vec(0u32..3, 3), -5i64..=5), 0..6).prop_map(|ts| {
            MultiPoly::from_terms(ts.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), c)).collect())
        })
    }

    proptest! {
        #[test]
        fn ring_laws_and_evaluation(a in arb_poly(), b in arb_poly(), c in arb_poly(), pt in prop::collection::vec(0u64..1000, 3)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b).sub(&b), a.clone());
            let f = PrimeField::default();
            let ev = |p: &MultiPoly| p.eval(&f, &pt);
            prop_assert_eq!(ev(&a.mul(&b)), f.mul(&ev(&a), &ev(&b)));
            prop_assert_eq!(ev(&a.add(&b)), f.add(&ev(&a), &ev(&b)));
        }
    }
}

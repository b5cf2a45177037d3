//! The Plücker coordinates of 𝒮_n as quadrics in its Pfaffian coordinates.
//!
//! Each coordinate of [`spinor_plucker`](super::spinor_plucker) is written as a
//! rational combination of products `pf(A_I)·pf(A_K)`.  The combination is
//! found once by exact elimination on monomial coefficients and shipped as a
//! frozen table under `data/`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::exactlinalg::{rref_in_place, Field, Matrix, Rationals};

use super::poly::{Monomial, MultiPoly};
use super::polymap::{spinor_minimal, spinor_plucker};
use super::EmbedError;

/// Coordinate `c` of the Plücker embedding equals
/// `Σ coeff · z_i · z_k` over `entries[c]`, where `z` are the Pfaffian coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VeroneseTable {
    pub n: usize,
    pub entries: Vec<Vec<(usize, usize, BigRational)>>,
}

/// Finds the table by elimination: products `z_i z_k` (`i ≤ k`) are the
/// unknown columns and every Plücker coordinate is a right-hand side.  Free
/// columns are set to zero.
pub fn discover_veronese_table(n: usize) -> Result<VeroneseTable, EmbedError> {
    let z = spinor_minimal(n);
    let p = spinor_plucker(n);
    let mut products: Vec<(usize, usize, MultiPoly)> = Vec::new();
    for i in 0..z.ambient_dim() {
        for k in i..z.ambient_dim() {
            products.push((i, k, z.coords()[i].mul(&z.coords()[k])));
        }
    }
    let columns: Vec<&MultiPoly> = products.iter().map(|(_, _, q)| q).chain(p.coords()).collect();
    let mut monomials: BTreeMap<Monomial, usize> = BTreeMap::new();
    for q in &columns {
        for (m, _) in q.terms() {
            let next = monomials.len();
            monomials.entry(m.clone()).or_insert(next);
        }
    }
    let q = Rationals;
    let mut m = Matrix::zeros(&q, monomials.len(), columns.len()).row_vecs();
    for (c, poly) in columns.iter().enumerate() {
        for (mono, coeff) in poly.terms() {
            m[monomials[mono]][c] = q.from_i64(*coeff);
        }
    }
    let mut m = Matrix::from_rows(columns.len(), m);
    let (_, pivots) = rref_in_place(&q, &mut m);
    if pivots.iter().any(|&c| c >= products.len()) {
        return Err(EmbedError::Json(format!("a Plücker coordinate of 𝒮_{n} is not quadratic in Pfaffians")));
    }
    let entries = (0..p.ambient_dim())
        .map(|t| {
            let col = products.len() + t;
            pivots
                .iter()
                .enumerate()
                .filter(|(r, _)| !m[(*r, col)].is_zero())
                .map(|(r, &pc)| (products[pc].0, products[pc].1, m[(r, col)].clone()))
                .collect()
        })
        .collect();
    Ok(VeroneseTable { n, entries })
}

impl VeroneseTable {
    /// Plücker coordinates from Pfaffian coordinates.
    pub fn apply<F: Field>(&self, field: &F, z: &[F::Elem]) -> Vec<F::Elem> {
        self.entries
            .iter()
            .map(|terms| {
                terms.iter().fold(field.zero(), |acc, (i, k, c)| {
                    let c = field
                        .div(&field.from_bigint(c.numer()), &field.from_bigint(c.denom()))
                        .expect("denominator invertible in the field");
                    field.add(&acc, &field.mul(&c, &field.mul(&z[*i], &z[*k])))
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .entries
            .iter()
            .map(|terms| {
                Value::Array(
                    terms
                        .iter()
                        .map(|(i, k, c)| {
                            let c = if c.denom().is_one() { c.numer().to_string() } else { c.to_string() };
                            json!([i, k, c])
                        })
                        .collect(),
                )
            })
            .collect();
        json!({"n": self.n, "entries": rows})
    }

    pub fn from_json(v: &Value) -> Result<Self, EmbedError> {
        let bad = || EmbedError::Json("veronese table".to_string());
        let n = v["n"].as_u64().ok_or_else(bad)? as usize;
        let mut entries = Vec::new();
        for row in v["entries"].as_array().ok_or_else(bad)? {
            let mut terms = Vec::new();
            for t in row.as_array().ok_or_else(bad)? {
                let i = t[0].as_u64().ok_or_else(bad)? as usize;
                let k = t[1].as_u64().ok_or_else(bad)? as usize;
                let c: BigRational = t[2].as_str().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                terms.push((i, k, c));
            }
            entries.push(terms);
        }
        Ok(VeroneseTable { n, entries })
    }
}

/// The shipped tables, for `2 ≤ n ≤ 5`.
pub fn frozen_veronese_table(n: usize) -> Option<VeroneseTable> {
    let text = match n {
        2 => include_str!("../../data/veronese_2.json"),
        3 => include_str!("../../data/veronese_3.json"),
        4 => include_str!("../../data/veronese_4.json"),
        5 => include_str!("../../data/veronese_5.json"),
        _ => return None,
    };
    let v: Value = serde_json::from_str(text).ok()?;
    VeroneseTable::from_json(&v).ok()
}

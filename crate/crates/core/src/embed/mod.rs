//! Chart parametrizations of the Grassmannian 𝒢(n,2n), the Lagrangian
//! Grassmannian ℒ𝒢(n,2n) and the Spinor variety 𝒮_n.
//!
//! Around the point spanned by `e_1..e_n` a subspace is the row space of
//! `M = (I_n | A)`; `A` is general, symmetric or skew-symmetric.  The Plücker
//! coordinate indexed by `J` is `det(M_J)`, and for `J = (I₀ ∖ R) ∪ (C + n)`
//! it equals `ε(σ_J)·det A[R, C]`.

pub mod minors;
pub mod poly;
pub mod polymap;
pub mod ring;
pub mod veronese;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::combinat::{distance_from_base, subsets_of_size, IndexSet};
use crate::exactlinalg::{Field, Matrix};

pub use minors::{all_minors, all_pfaffians, pfaffian, pfaffian_of, skew_inverse_via_pfaffians};
pub use poly::{Monomial, MultiPoly};
pub use polymap::{
    coord_labels, coords_and_derivatives, coords_at, grass_plucker, lg_plucker, plucker_coords_on, plucker_lift, spinor_minimal,
    spinor_plucker, CoordLabel, PolyMap,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("chart point has shape {found}, expected {expected}")]
    ShapeMismatch { expected: Shape, found: Shape },
    #[error("expected {expected} chart values, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("Pfaffian of an odd index set (size {0})")]
    OddPfaffian(usize),
    #[error("index set {index} exceeds matrix size {n}")]
    IndexOutOfRange { index: String, n: usize },
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is singular")]
    Singular,
    #[error("{0} has no full Plücker lift")]
    NoLift(Variety),
    #[error("unknown variety `{0}` (expected gr, lg, spinor-pl or spinor-min)")]
    BadVariety(String),
    #[error("malformed polynomial map: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variety {
    #[serde(rename = "GR")]
    Gr,
    #[serde(rename = "LG")]
    Lg,
    #[serde(rename = "SPIN_PL")]
    SpinPl,
    #[serde(rename = "SPIN_MIN")]
    SpinMin,
}

impl Variety {
    pub const ALL: [Variety; 4] = [Variety::Gr, Variety::Lg, Variety::SpinPl, Variety::SpinMin];

    pub fn shape(self) -> Shape {
        match self {
            Variety::Gr => Shape::General,
            Variety::Lg => Shape::Symmetric,
            Variety::SpinPl | Variety::SpinMin => Shape::Skew,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Variety::Gr => "GR",
            Variety::Lg => "LG",
            Variety::SpinPl => "SPIN_PL",
            Variety::SpinMin => "SPIN_MIN",
        }
    }

    pub fn cli_name(self) -> &'static str {
        match self {
            Variety::Gr => "gr",
            Variety::Lg => "lg",
            Variety::SpinPl => "spinor-pl",
            Variety::SpinMin => "spinor-min",
        }
    }

    /// Dimension of the variety: the number of chart variables.
    pub fn dim(self, n: usize) -> usize {
        self.shape().n_vars(n)
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Variety {
    type Err = EmbedError;
    fn from_str(s: &str) -> Result<Self, EmbedError> {
        Variety::ALL
            .into_iter()
            .find(|v| v.tag().eq_ignore_ascii_case(s) || v.cli_name() == s)
            .ok_or_else(|| EmbedError::BadVariety(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Symmetric,
    Skew,
    General,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Symmetric => "symmetric",
            Shape::Skew => "skew",
            Shape::General => "general",
        })
    }
}

impl Shape {
    /// Free entries `(i, j)` (0-based), row-major: `i ≤ j` for symmetric,
    /// `i < j` for skew, all for general.
    pub fn chart_vars(self, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let keep = match self {
                    Shape::Symmetric => i <= j,
                    Shape::Skew => i < j,
                    Shape::General => true,
                };
                if keep {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn n_vars(self, n: usize) -> usize {
        match self {
            Shape::Symmetric => n * (n + 1) / 2,
            Shape::Skew => n * n.saturating_sub(1) / 2,
            Shape::General => n * n,
        }
    }

    /// The variable sitting at entry `(i, j)` and whether it enters negated.
    pub fn entry_var(self, n: usize, i: usize, j: usize) -> Option<(usize, bool)> {
        let tri = |i: usize, j: usize, diag: bool| {
            // row-major index among (i, j) with i < j (or i ≤ j)
            let before: usize = (0..i).map(|r| if diag { n - r } else { n - r - 1 }).sum();
            before + j - i - usize::from(!diag)
        };
        match self {
            Shape::General => Some((i * n + j, false)),
            Shape::Symmetric => Some((tri(i.min(j), i.max(j), true), false)),
            Shape::Skew if i == j => None,
            Shape::Skew => Some((tri(i.min(j), i.max(j), false), i > j)),
        }
    }

    pub fn var_names(self, n: usize) -> Vec<String> {
        self.chart_vars(n)
            .into_iter()
            .map(|(i, j)| if n < 10 { format!("a{}{}", i + 1, j + 1) } else { format!("a{}_{}", i + 1, j + 1) })
            .collect()
    }
}

/// The chart matrix with each entry a (signed) variable.
pub fn chart_matrix_symbolic(shape: Shape, n: usize) -> Vec<Vec<MultiPoly>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match shape.entry_var(n, i, j) {
                    None => MultiPoly::zero(),
                    Some((v, false)) => MultiPoly::var(v),
                    Some((v, true)) => MultiPoly::var(v).neg(),
                })
                .collect()
        })
        .collect()
}

/// A point of an affine chart: the matrix `A` of `M = (I_n | A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartPoint<E> {
    shape: Shape,
    a: Matrix<E>,
}

impl<E: Clone + PartialEq> ChartPoint<E> {
    pub fn new<F: Field<Elem = E>>(field: &F, shape: Shape, a: Matrix<E>) -> Result<Self, EmbedError> {
        if a.rows() != a.cols() {
            return Err(EmbedError::WrongLength { expected: a.rows(), found: a.cols() });
        }
        match shape {
            Shape::Symmetric if !a.is_symmetric() => return Err(EmbedError::NotSymmetric),
            Shape::Skew if !a.is_skew(field) => return Err(EmbedError::NotSkew),
            _ => {}
        }
        Ok(ChartPoint { shape, a })
    }

    pub fn from_vars<F: Field<Elem = E>>(field: &F, shape: Shape, n: usize, vals: &[E]) -> Result<Self, EmbedError> {
        if vals.len() != shape.n_vars(n) {
            return Err(EmbedError::WrongLength { expected: shape.n_vars(n), found: vals.len() });
        }
        let a = Matrix::from_fn(n, n, |i, j| match shape.entry_var(n, i, j) {
            None => field.zero(),
            Some((v, false)) => vals[v].clone(),
            Some((v, true)) => field.neg(&vals[v]),
        });
        Ok(ChartPoint { shape, a })
    }

    pub fn origin<F: Field<Elem = E>>(field: &F, shape: Shape, n: usize) -> Self {
        ChartPoint { shape, a: Matrix::zeros(field, n, n) }
    }

    pub fn random<F: Field<Elem = E>, R: Rng + ?Sized>(field: &F, shape: Shape, n: usize, rng: &mut R) -> Self {
        let vals: Vec<E> = (0..shape.n_vars(n)).map(|_| field.sample(rng)).collect();
        Self::from_vars(field, shape, n, &vals).expect("length matches")
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &Matrix<E> {
        &self.a
    }

    pub fn var_values(&self) -> Vec<E> {
        self.shape.chart_vars(self.n()).into_iter().map(|(i, j)| self.a[(i, j)].clone()).collect()
    }
}

/// All `n`-subsets `J ⊆ {1..2n}` ordered by distance from `I₀ = {1..n}` and
/// then lexicographically; the column order of full Plücker space.
pub fn plucker_sets(n: usize) -> Vec<IndexSet> {
    let mut out = Vec::new();
    for d in 0..=n {
        for r in subsets_of_size(n, d) {
            for c in subsets_of_size(n, d) {
                out.push(IndexSet::base(n).difference(r).union(c.shift_up(n)));
            }
        }
    }
    out.sort_by(|a, b| distance_from_base(*a, n).cmp(&distance_from_base(*b, n)).then(a.lex_cmp(*b)));
    out
}

//! Index-set calculus for Plücker and Spinor coordinates.
//!
//! Index sets are 1-based subsets of `{1, …, 2n}` stored as bitmasks.  The
//! distinguished set is `I₀ = {1, …, n}`, the coordinate of the chart origin.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest supported element of an index set.
pub const MAX_ELEM: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CombinatError {
    #[error("index sets have different sizes ({0} and {1})")]
    SizeMismatch(usize, usize),
}

/// A finite subset of `{1, …, 63}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct IndexSet {
    bits: u64,
}

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet { bits: 0 };

    pub fn new(elems: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = 0u64;
        for e in elems {
            assert!((1..=MAX_ELEM).contains(&e), "index {e} out of range");
            bits |= 1 << e;
        }
        IndexSet { bits }
    }

    /// `{lo, …, hi}`, empty when `hi < lo`.
    pub fn range(lo: usize, hi: usize) -> Self {
        Self::new(lo..=hi)
    }

    /// `I₀ = {1, …, n}`.
    pub fn base(n: usize) -> Self {
        Self::range(1, n)
    }

    pub fn from_bits(bits: u64) -> Self {
        assert!(bits & 1 == 0, "index 0 is not allowed");
        IndexSet { bits }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, e: usize) -> bool {
        e <= MAX_ELEM && self.bits >> e & 1 == 1
    }

    pub fn is_subset(self, other: IndexSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(self, other: IndexSet) -> Self {
        IndexSet { bits: self.bits | other.bits }
    }

    pub fn intersection(self, other: IndexSet) -> Self {
        IndexSet { bits: self.bits & other.bits }
    }

    pub fn difference(self, other: IndexSet) -> Self {
        IndexSet { bits: self.bits & !other.bits }
    }

    pub fn is_disjoint(self, other: IndexSet) -> bool {
        self.bits & other.bits == 0
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut b = self.bits;
        std::iter::from_fn(move || {
            if b == 0 {
                return None;
            }
            let e = b.trailing_zeros() as usize;
            b &= b - 1;
            Some(e)
        })
    }

    pub fn elems(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// `{i + k : i ∈ self}`.
    pub fn shift_up(self, k: usize) -> Self {
        Self::new(self.iter().map(|e| e + k))
    }

    /// `{i − k : i ∈ self}`; every element must exceed `k`.
    pub fn shift_down(self, k: usize) -> Self {
        Self::new(self.iter().map(|e| e - k))
    }

    /// Lexicographic comparison of the sorted element lists.
    pub fn lex_cmp(self, other: IndexSet) -> Ordering {
        self.iter().cmp(other.iter())
    }

    /// Compact label such as `"1,2,4"`; the empty set renders as `"-"`.
    pub fn label(self) -> String {
        if self.is_empty() {
            return "-".to_string();
        }
        self.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All `k`-subsets of `{1, …, m}` in lexicographic order.
pub fn subsets_of_size(m: usize, k: usize) -> Vec<IndexSet> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut idx: Vec<usize> = (1..=k).collect();
    loop {
        out.push(IndexSet::new(idx.iter().copied()));
        let Some(i) = (0..k).rev().find(|&i| idx[i] < m - (k - 1 - i)) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// `d(I, J) = |I| − |I ∩ J|`.
pub fn hamming(i: IndexSet, j: IndexSet) -> Result<usize, CombinatError> {
    if i.len() != j.len() {
        return Err(CombinatError::SizeMismatch(i.len(), j.len()));
    }
    Ok(i.len() - i.intersection(j).len())
}

/// Distance from `I₀ = {1, …, n}`, i.e. the number of elements of `j` above `n`.
pub fn distance_from_base(j: IndexSet, n: usize) -> usize {
    j.difference(IndexSet::base(n)).len()
}

/// The mirror involution `J′ = ((I₀∖J) + n) ∪ ((I₀ᶜ∖J) − n)` on `n`-subsets of `{1, …, 2n}`.
pub fn mirror(j: IndexSet, n: usize) -> IndexSet {
    let base = IndexSet::base(n);
    let upper = IndexSet::range(n + 1, 2 * n);
    base.difference(j).shift_up(n).union(upper.difference(j).shift_down(n))
}

/// Rows of the block-minor: `R = I₀∖J`.
pub fn minor_rows(j: IndexSet, n: usize) -> IndexSet {
    IndexSet::base(n).difference(j)
}

/// Columns of the block-minor: `C = (J∖I₀) − n`.
pub fn minor_cols(j: IndexSet, n: usize) -> IndexSet {
    j.difference(IndexSet::base(n)).shift_down(n)
}

/// Sign of the row permutation listing `I₀ ∩ J` first and then `I₀ ∖ J`.
pub fn perm_sign(j: IndexSet, n: usize) -> i8 {
    let base = IndexSet::base(n);
    let kept = base.intersection(j);
    let moved = base.difference(j);
    let inversions: usize = kept.iter().map(|a| moved.iter().filter(|&b| b < a).count()).sum();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// An unordered mirror pair `(J, J′)` with its canonical representative first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SigmaPair {
    pub j: IndexSet,
    pub jp: IndexSet,
    pub sign_j: i8,
    pub sign_jp: i8,
    pub dist: usize,
}

impl SigmaPair {
    pub fn of(j: IndexSet, n: usize) -> Self {
        let jp = mirror(j, n);
        let (j, jp) = if j.lex_cmp(jp) == Ordering::Greater { (jp, j) } else { (j, jp) };
        SigmaPair {
            j,
            jp,
            sign_j: perm_sign(j, n),
            sign_jp: perm_sign(jp, n),
            dist: distance_from_base(j, n),
        }
    }

    pub fn is_fixed(&self) -> bool {
        self.j == self.jp
    }

    pub fn label(&self) -> String {
        if self.is_fixed() {
            self.j.label()
        } else {
            format!("{}|{}", self.j.label(), self.jp.label())
        }
    }
}

/// `Σ_s`: every mirror pair with `d(I₀, J) ≤ s`, listed once, ordered by
/// distance and then lexicographically by representative.
pub fn sigma_pairs(n: usize, s: usize) -> Vec<SigmaPair> {
    let mut out = Vec::new();
    for d in 0..=s.min(n) {
        // J = (I₀ ∖ R) ∪ (C + n) with |R| = |C| = d
        for r in subsets_of_size(n, d) {
            for c in subsets_of_size(n, d) {
                let j = IndexSet::base(n).difference(r).union(c.shift_up(n));
                let pair = SigmaPair::of(j, n);
                if pair.j == j {
                    out.push(pair);
                }
            }
        }
    }
    out.sort_by(|a, b| a.dist.cmp(&b.dist).then(a.j.lex_cmp(b.j)));
    out
}

/// The fixed pairs used by the Spinor regularity argument:
/// `{2λ−1, 2λ}` for even `n`, `{2λ, 2λ+1}` for odd `n`.
pub fn lambda_pairs(n: usize) -> Vec<IndexSet> {
    if n % 2 == 0 {
        (1..=n / 2).map(|l| IndexSet::new([2 * l - 1, 2 * l])).collect()
    } else {
        (1..=(n - 1) / 2).map(|l| IndexSet::new([2 * l, 2 * l + 1])).collect()
    }
}

/// Even subsets of `{1, …, n}` and the families built from the fixed pairs.
#[derive(Clone, Debug)]
pub struct GammaFamily {
    n: usize,
    pairs: Vec<IndexSet>,
}

impl GammaFamily {
    pub fn new(n: usize) -> Self {
        GammaFamily {
            n,
            pairs: lambda_pairs(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[IndexSet] {
        &self.pairs
    }

    /// Even subsets of `{1, …, n}` ordered by size, then lexicographically.
    pub fn gamma(&self) -> Vec<IndexSet> {
        even_subsets(self.n)
    }

    /// `Γ_k`: even subsets of size at most `2k`.
    pub fn gamma_k(&self, k: usize) -> Vec<IndexSet> {
        self.gamma().into_iter().filter(|j| j.len() <= 2 * k).collect()
    }

    /// Unions of fixed pairs, `∅` included.
    pub fn lambda(&self) -> Vec<IndexSet> {
        (0..1u64 << self.pairs.len())
            .map(|mask| {
                self.pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(IndexSet::EMPTY, |acc, (_, p)| acc.union(*p))
            })
            .collect()
    }

    pub fn is_lambda(&self, s: IndexSet) -> bool {
        let covered = self
            .pairs
            .iter()
            .filter(|p| p.is_subset(s))
            .fold(IndexSet::EMPTY, |acc, p| acc.union(*p));
        covered == s
    }

    /// `α_I`: the number of fixed pairs contained in `I`.
    pub fn alpha(&self, i: IndexSet) -> usize {
        self.pairs.iter().filter(|p| p.is_subset(i)).count()
    }

    /// `Γ⁺_J = {I : J ⊂ I, I ∖ J ∈ Λ}`.
    pub fn gamma_plus(&self, j: IndexSet) -> Vec<IndexSet> {
        let free: Vec<IndexSet> = self.pairs.iter().copied().filter(|p| p.is_disjoint(j)).collect();
        (0..1u64 << free.len())
            .map(|mask| {
                free.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(j, |acc, (_, p)| acc.union(*p))
            })
            .collect()
    }

    /// `Γ⁻_I = {J : J ⊂ I, I ∖ J ∈ Λ}`.
    pub fn gamma_minus(&self, i: IndexSet) -> Vec<IndexSet> {
        let inside: Vec<IndexSet> = self.pairs.iter().copied().filter(|p| p.is_subset(i)).collect();
        (0..1u64 << inside.len())
            .map(|mask| {
                inside
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .fold(i, |acc, (_, p)| acc.difference(*p))
            })
            .collect()
    }
}

/// Even subsets of `{1, …, m}`, ordered by size and then lexicographically.
pub fn even_subsets(m: usize) -> Vec<IndexSet> {
    (0..=m).step_by(2).flat_map(|k| subsets_of_size(m, k)).collect()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

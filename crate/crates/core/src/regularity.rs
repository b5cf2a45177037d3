//! Strong 2-osculating regularity: osculating spaces along the curves
//! `M_t = (I_n | tA)`, their flat limits at `t = 0`, and the binomial
//! certificates for the minimal spinor embedding.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::combinat::{binomial, even_subsets, GammaFamily, IndexSet};
use crate::embed::{coord_labels, spinor_minimal, ChartPoint, EmbedError, PolyMap, Variety};
use crate::exactlinalg::{flat_limit, solve, Field, FieldDescriptor, LinalgError, Matrix, PolyMatrix, PolyRow, PrimeField, Rationals, RowReducer, Subspace};
use crate::osculate::{full_space_threshold, jet_vectors, osc_space_jets, sub_monomials};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegularityError {
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no solution with c_0 != 0 for I = {index} (s1 = {s1}, s2 = {s2})")]
    NoSolution { index: String, s1: usize, s2: usize },
    #[error("no non-degenerate direction found in {attempts} attempts")]
    DegenerateDirections { attempts: usize },
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The curve `t ↦ (I_n | tA)` through the chart origin (`t = 0`) and `A` (`t = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFamily<E> {
    pub variety: Variety,
    pub direction: ChartPoint<E>,
}

impl<E: Clone + PartialEq> CurveFamily<E> {
    pub fn new(variety: Variety, direction: ChartPoint<E>) -> Result<Self, RegularityError> {
        if direction.shape() != variety.shape() {
            return Err(EmbedError::ShapeMismatch { expected: variety.shape(), found: direction.shape() }.into());
        }
        Ok(CurveFamily { variety, direction })
    }

    pub fn random<F: Field<Elem = E>, R: Rng + ?Sized>(field: &F, variety: Variety, n: usize, rng: &mut R) -> Self {
        CurveFamily { variety, direction: ChartPoint::random(field, variety.shape(), n, rng) }
    }

    pub fn n(&self) -> usize {
        self.direction.n()
    }

    /// The chart point `tA`.
    pub fn at<F: Field<Elem = E>>(&self, field: &F, t: &E) -> ChartPoint<E> {
        let vals: Vec<E> = self.direction.var_values().iter().map(|v| field.mul(v, t)).collect();
        ChartPoint::from_vars(field, self.direction.shape(), self.n(), &vals).expect("same shape")
    }
}

/// The skew matrix with `a_{ij} = 1` on the fixed pairs `{i, j}` of `Λ`;
/// the curve in this direction ends at the last coordinate point.
pub fn standard_spinor_direction<F: Field>(field: &F, n: usize) -> CurveFamily<F::Elem> {
    let mut a = Matrix::zeros(field, n, n);
    for p in GammaFamily::new(n).pairs() {
        let e = p.elems();
        a[(e[0] - 1, e[1] - 1)] = field.one();
        a[(e[1] - 1, e[0] - 1)] = field.neg(&field.one());
    }
    let direction = ChartPoint::new(field, crate::embed::Shape::Skew, a).expect("skew by construction");
    CurveFamily { variety: Variety::SpinMin, direction }
}

/// Degree in `t` of the coordinates along the curve.
pub fn curve_degree_bound(variety: Variety, n: usize) -> usize {
    match variety {
        Variety::SpinMin => n / 2,
        _ => n,
    }
}

/// Rows spanning `T^s` at `γ(t)`, polynomial in `t`: the jet of `x^j` at
/// `tA` is `Σ c·ΠC(e, j)·A^{e−j}·t^{|e|−|j|}` over the terms `c·x^e`.
pub fn osc_family<F: Field>(field: &F, f: &PolyMap, curve: &CurveFamily<F::Elem>, s: usize) -> PolyMatrix<F::Elem> {
    let cols = f.coords().len();
    let vals = curve.direction.var_values();
    let mut rows: BTreeMap<_, Vec<Vec<F::Elem>>> = BTreeMap::new();
    for (c, poly) in f.coords().iter().enumerate() {
        for (e, coeff) in poly.terms() {
            for (j, weight, rest) in sub_monomials(e, s) {
                let w = field.mul(&field.from_i64(*coeff), &field.from_bigint(&weight.into()));
                let w = field.mul(&w, &rest.eval(field, &vals));
                if field.is_zero(&w) {
                    continue;
                }
                let row = rows.entry(j).or_default();
                let deg = rest.degree();
                if row.len() <= deg {
                    row.resize(deg + 1, vec![field.zero(); cols]);
                }
                row[deg][c] = field.add(&row[deg][c], &w);
            }
        }
    }
    let mut m = PolyMatrix::new(cols);
    for (_, coeffs) in rows {
        m.push_row(PolyRow::from_coeffs(field, cols, coeffs));
    }
    m
}

/// The family `T_t = ⟨T^{s1}_0, T^{s2}_{γ(t)}⟩` and its flat limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyLimit<E> {
    pub family: PolyMatrix<E>,
    /// Dimension of `T_t` for generic `t` (affine).
    pub generic_dim: usize,
    pub limit: Subspace<E>,
    /// `T^{s1+s2+1}` at the origin.
    pub target: Subspace<E>,
}

impl<E: Clone + PartialEq> FamilyLimit<E> {
    pub fn is_flat(&self) -> bool {
        self.limit.dim() == self.generic_dim
    }
}

/// Builds `T_t` from a `K(t)`-basis: rows independent at a random `t₀` are
/// independent over `K(t)`, and the constant rows of `T^{s1}_0` go first.
/// Returns `None` when `T^{s2}_{γ(t)}` drops rank (a degenerate direction).
pub fn family_limit<F: Field, R: Rng + ?Sized>(
    field: &F,
    f: &PolyMap,
    curve: &CurveFamily<F::Elem>,
    s1: usize,
    s2: usize,
    rng: &mut R,
) -> Option<FamilyLimit<F::Elem>> {
    let cols = f.coords().len();
    let moving = osc_family(field, f, curve, s2);
    let base = osc_space_jets(field, f, s1);
    let expected_moving = osc_space_jets(field, f, s2).dim();
    let t0 = loop {
        let t = field.sample(rng);
        if !field.is_zero(&t) {
            break t;
        }
    };
    let mut own = RowReducer::new(field, cols);
    for r in moving.poly_rows() {
        own.insert(r.eval(field, &t0));
    }
    if own.rank() < expected_moving {
        return None;
    }
    let mut family = PolyMatrix::from_constant(field, base.basis());
    let mut red = base.reducer(field);
    for r in moving.poly_rows() {
        if red.rank() == cols {
            break;
        }
        if red.insert(r.eval(field, &t0)) {
            family.push_row(r.clone());
        }
    }
    let limit = flat_limit(field, &family);
    Some(FamilyLimit { generic_dim: family.nrows(), family, limit, target: osc_space_jets(field, f, s1 + s2 + 1) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strong2Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Strong2Report {
    pub variety: Variety,
    pub n: usize,
    pub s1: usize,
    pub s2: usize,
    pub field: String,
    pub seed: u64,
    pub trials: usize,
    /// Projective dimension of `T^{s1+s2+1}` at the origin.
    pub target_dim: i64,
    /// Projective dimensions of the flat limits, one per direction.
    pub limit_dims: Vec<i64>,
    pub flat: bool,
    pub contained: Vec<bool>,
    /// Directions discarded because `T^{s2}` dropped rank along the curve.
    pub resampled: usize,
    pub verdict: Strong2Verdict,
}

/// Attempts per trial before giving up on finding a generic direction.
pub const MAX_DIRECTION_ATTEMPTS: usize = 50;

fn check_range(variety: Variety, n: usize, s1: usize, s2: usize) -> Result<(), RegularityError> {
    let thr = full_space_threshold(variety, n);
    if n < 2 || s1 + s2 >= thr {
        return Err(RegularityError::OutOfRange(format!("{variety} n = {n}: need s1 + s2 < {thr}")));
    }
    Ok(())
}

fn strong2_on<F: Field>(field: &F, variety: Variety, n: usize, s1: usize, s2: usize, trials: usize, seed: u64) -> Result<Strong2Report, RegularityError> {
    check_range(variety, n, s1, s2)?;
    let f = PolyMap::build(variety, n);
    let runs: Vec<Result<(FamilyLimit<F::Elem>, usize), RegularityError>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            for attempt in 0..MAX_DIRECTION_ATTEMPTS {
                let curve = CurveFamily::random(field, variety, n, &mut rng);
                if let Some(fl) = family_limit(field, &f, &curve, s1, s2, &mut rng) {
                    return Ok((fl, attempt));
                }
            }
            Err(RegularityError::DegenerateDirections { attempts: MAX_DIRECTION_ATTEMPTS })
        })
        .collect();
    let mut limit_dims = Vec::new();
    let mut contained = Vec::new();
    let mut flat = true;
    let mut resampled = 0;
    let mut target_dim = -1;
    for r in runs {
        let (fl, skipped) = r?;
        resampled += skipped;
        flat &= fl.is_flat();
        target_dim = fl.target.projective_dim();
        contained.push(fl.target.contains(field, &fl.limit)?);
        limit_dims.push(fl.limit.projective_dim());
    }
    let verdict = if flat && contained.iter().all(|&c| c) { Strong2Verdict::Pass } else { Strong2Verdict::Fail };
    Ok(Strong2Report {
        variety,
        n,
        s1,
        s2,
        field: field.descriptor().to_string(),
        seed,
        trials,
        target_dim,
        limit_dims,
        flat,
        contained,
        resampled,
        verdict,
    })
}

/// For `trials` random directions `A`, checks that the flat limit of
/// `⟨T^{s1}_0, T^{s2}_{tA}⟩` is flat and lies in `T^{s1+s2+1}_0`.
pub fn strong2_check(desc: FieldDescriptor, variety: Variety, n: usize, s1: usize, s2: usize, trials: usize, seed: u64) -> Result<Strong2Report, RegularityError> {
    match desc {
        FieldDescriptor::Prime(p) => strong2_on(&PrimeField::new(p)?, variety, n, s1, s2, trials, seed),
        FieldDescriptor::Rationals => strong2_on(&Rationals, variety, n, s1, s2, trials, seed),
    }
}

fn m_prime(alpha: usize, d2: usize) -> Matrix<BigRational> {
    let m = alpha + 1 - d2;
    Matrix::from_fn(m, m, |r, c| BigRational::from_integer(BigInt::from(binomial(alpha - r, m - c))))
}

/// `M′[r][c] = C(α − r, α − d2 + 1 − c)`: the rows `q = α, …, d2` of the
/// system `Σ_l C(q, l) c_l = 0`, restricted to the columns `l = α − d2 + 1, …, 1`.
pub fn binomial_matrix(alpha: usize, d1: usize, d2: usize) -> Result<Matrix<BigRational>, RegularityError> {
    if !(1 <= d2 && d2 < d1 && d1 <= alpha + 1) {
        return Err(RegularityError::Precondition(format!("need 1 <= d2 <= d1 - 1 <= alpha, got alpha = {alpha}, d1 = {d1}, d2 = {d2}")));
    }
    Ok(m_prime(alpha, d2))
}

pub fn binomial_det(alpha: usize, d2: usize) -> BigRational {
    m_prime(alpha, d2).det(&Rationals).expect("square")
}

fn ser_rationals<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_set<S: Serializer>(v: &IndexSet, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.label())
}

/// A hyperplane `F_I = Σ_{J ∈ Γ⁻_I} t^{(|I|−|J|)/2} c_{(|I|−|J|)/2} P_J`
/// containing `T_t` for every `t ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialSystem {
    #[serde(serialize_with = "ser_set")]
    pub index: IndexSet,
    pub n: usize,
    pub s1: usize,
    pub s2: usize,
    pub alpha: usize,
    pub d1: usize,
    pub d2: usize,
    /// `c_0, …, c_α`.
    #[serde(serialize_with = "ser_rationals")]
    pub coefficients: Vec<BigRational>,
}

impl BinomialSystem {
    /// Whether `c` satisfies `c_j = 0` for `j ≥ d1` and
    /// `Σ_{l ≤ q} C(q, l) c_l = 0` for `q = d2, …, α`.
    pub fn satisfied(&self) -> bool {
        let c = &self.coefficients;
        let vanish = (self.d1..=self.alpha).all(|j| c[j].is_zero());
        let sums = (self.d2..=self.alpha).all(|q| {
            (0..=q)
                .map(|l| BigRational::from_integer(BigInt::from(binomial(q, l))) * &c[l])
                .fold(BigRational::zero(), |a, b| a + b)
                .is_zero()
        });
        vanish && sums && !c[0].is_zero()
    }

    /// The linear form `F_I` at `t`, in the coordinates of the minimal spinor map.
    pub fn hyperplane_at<F: Field>(&self, field: &F, t: &F::Elem) -> Vec<F::Elem> {
        let labels = coord_labels(Variety::SpinMin, self.n);
        let pos: HashMap<IndexSet, usize> = labels.iter().enumerate().map(|(k, l)| (l.set(), k)).collect();
        let mut out = vec![field.zero(); labels.len()];
        for j in GammaFamily::new(self.n).gamma_minus(self.index) {
            let level = (self.index.len() - j.len()) / 2;
            let c = &self.coefficients[level];
            let c = field.mul(&field.from_bigint(c.numer()), &field.inv(&field.from_bigint(c.denom())).expect("nonzero denominator"));
            out[pos[&j]] = field.mul(&c, &field.pow(t, level as u64));
        }
        out
    }
}

/// Solves the system with `c_0 = 1` and `c_l = 0` for `l > α − d2 + 1`;
/// the remaining unknowns are fixed by `M′`.
pub fn solve_hyperplane_system(index: IndexSet, s1: usize, s2: usize, n: usize) -> Result<BinomialSystem, RegularityError> {
    if index.len() % 2 == 1 || !index.is_subset(IndexSet::base(n)) {
        return Err(RegularityError::Precondition(format!("{} is not an even subset of 1..{n}", index.label())));
    }
    if index.len() <= 2 * (s1 + s2 + 1) {
        return Err(RegularityError::Precondition(format!("|I| = {} <= 2(s1 + s2 + 1) = {}", index.len(), 2 * (s1 + s2 + 1))));
    }
    let alpha = GammaFamily::new(n).alpha(index);
    let half = index.len() / 2;
    let (d1, d2) = (half - s1, half - s2);
    let mut c = vec![BigRational::zero(); alpha + 1];
    c[0] = BigRational::one();
    let no_solution = || RegularityError::NoSolution { index: index.label(), s1, s2 };
    if d2 <= alpha {
        let m = alpha + 1 - d2;
        let rhs = vec![-BigRational::one(); m];
        let x = solve(&Rationals, &m_prime(alpha, d2), &rhs)?.ok_or_else(no_solution)?;
        for l in 1..=m {
            c[l] = x[m - l].clone();
        }
    }
    let sys = BinomialSystem { index, n, s1, s2, alpha, d1, d2, coefficients: c };
    if !sys.satisfied() {
        return Err(no_solution());
    }
    Ok(sys)
}

/// Checks `|Γ⁻_I| = 2^{α_I}` and `|{J ∈ Γ⁻_I ∩ Γ⁺_K : |J| = |K| + 2l}| = C(q, l)`
/// with `q = (|I| − |K|)/2`, by enumeration.
pub fn gamma_binomial_identity(n: usize) -> bool {
    let fam = GammaFamily::new(n);
    even_subsets(n).into_iter().all(|i| {
        let minus = fam.gamma_minus(i);
        if minus.len() != 1 << fam.alpha(i) {
            return false;
        }
        minus.iter().all(|&k| {
            let q = (i.len() - k.len()) / 2;
            let plus = fam.gamma_plus(k);
            (0..=q).all(|l| {
                let count = minus.iter().filter(|j| plus.contains(j) && j.len() == k.len() + 2 * l).count();
                count as u128 == binomial(q, l)
            })
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperplaneCheck {
    pub system: BinomialSystem,
    pub ts: Vec<i64>,
    pub annihilates: bool,
}

/// Sample values of `t` for the annihilation check.
pub const SAMPLE_TS: [i64; 5] = [1, 2, 3, 5, 7];

/// Every valid `(I, s1, s2)` for `n`: solves the system and checks that `F_I`
/// vanishes on `T^{s1}_0` and on the jets of the minimal spinor map at `tA₀`
/// for `t ∈ SAMPLE_TS`, with `A₀` the standard direction.
pub fn certify_hyperplanes(n: usize) -> Result<Vec<HyperplaneCheck>, RegularityError> {
    let q = Rationals;
    let f = spinor_minimal(n);
    let curve = standard_spinor_direction(&q, n);
    let max_s = n / 2;
    let origin: Vec<Subspace<BigRational>> = (0..=max_s).map(|s| osc_space_jets(&q, &f, s)).collect();
    let mut moving: HashMap<(usize, i64), Vec<Vec<BigRational>>> = HashMap::new();
    let mut out = Vec::new();
    for i in even_subsets(n) {
        for s1 in 0..=max_s {
            for s2 in 0..=max_s {
                if i.len() <= 2 * (s1 + s2 + 1) {
                    continue;
                }
                let system = solve_hyperplane_system(i, s1, s2, n)?;
                let mut annihilates = true;
                for &t in &SAMPLE_TS {
                    let tv = q.from_i64(t);
                    let h = system.hyperplane_at(&q, &tv);
                    let rows = moving.entry((s2, t)).or_insert_with(|| {
                        let p = curve.at(&q, &tv).var_values();
                        jet_vectors(&q, f.coords(), Some(&p), s2).into_values().collect()
                    });
                    let dot = |v: &[BigRational]| v.iter().zip(&h).fold(BigRational::zero(), |a, (x, y)| a + x * y);
                    annihilates &= rows.iter().all(|r| dot(r).is_zero());
                    annihilates &= origin[s1].basis().row_vecs().iter().all(|r| dot(r).is_zero());
                }
                out.push(HyperplaneCheck { system, ts: SAMPLE_TS.to_vec(), annihilates });
            }
        }
    }
    Ok(out)
}

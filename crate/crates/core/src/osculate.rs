//! Osculating spaces: from jets of the parametrizations, from closed-form
//! coordinate bases, and from closed-form dimension counts.
//!
//! The parametrizations are polynomial, so the order-`≤ s` partial derivatives
//! at the chart origin are, up to nonzero factorials, the coefficient vectors of
//! the monomials of degree `≤ s`.  At another point `p` the same holds after
//! substituting `x ↦ p + x`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::combinat::{binomial, distance_from_base};
use crate::embed::{coord_labels, plucker_coords_on, plucker_lift, plucker_sets, ChartPoint, EmbedError, Monomial, MultiPoly, PolyMap, Variety};
use crate::exactlinalg::{Field, LinalgError, RowReducer, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OsculateError {
    #[error("well-behavedness is checked for LG and SPIN_PL only, not {0}")]
    Unsupported(Variety),
    #[error("{variety} with n = {n} exceeds the exhaustive bound n <= {max}")]
    BeyondDeskBound { variety: Variety, n: usize, max: usize },
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `T^s_p X` of the affine cone, in the intrinsic coordinates of `variety`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OsculatingSpace<E> {
    pub variety: Variety,
    pub n: usize,
    pub s: usize,
    pub base: ChartPoint<E>,
    pub space: Subspace<E>,
}

/// Divisors `x^j` of `x^e` with `|j| ≤ s`, as `(x^j, Π C(e_v, j_v), x^{e−j})`.
pub fn sub_monomials(e: &Monomial, s: usize) -> Vec<(Monomial, u128, Monomial)> {
    let exps = e.exponents();
    let mut out = Vec::new();
    let mut j = vec![0u32; exps.len()];
    loop {
        let deg: u32 = j.iter().sum();
        if deg as usize <= s {
            let mut jm = Vec::new();
            let mut rest = Vec::new();
            let mut weight = 1u128;
            for (k, &(v, ev)) in exps.iter().enumerate() {
                jm.extend(std::iter::repeat(v).take(j[k] as usize));
                rest.extend(std::iter::repeat(v).take((ev - j[k]) as usize));
                weight *= binomial(ev as usize, j[k] as usize);
            }
            out.push((monomial_of(&jm), weight, monomial_of(&rest)));
        }
        // odometer over 0..=e_v
        let mut k = 0;
        while k < exps.len() && j[k] == exps[k].1 {
            j[k] = 0;
            k += 1;
        }
        if k == exps.len() {
            return out;
        }
        j[k] += 1;
    }
}

fn monomial_of(vars: &[usize]) -> Monomial {
    vars.iter().fold(Monomial::one(), |m, &v| m.mul(&Monomial::var(v)))
}

/// Coefficient vectors of the monomials of degree `≤ s` of `coords(p + x)`,
/// keyed by monomial in graded order.  `point = None` means the origin.
pub fn jet_vectors<F: Field>(field: &F, coords: &[MultiPoly], point: Option<&[F::Elem]>, s: usize) -> BTreeMap<Monomial, Vec<F::Elem>> {
    let n = coords.len();
    let mut out: BTreeMap<Monomial, Vec<F::Elem>> = BTreeMap::new();
    for (c, poly) in coords.iter().enumerate() {
        for (e, coeff) in poly.terms() {
            match point {
                None => {
                    if e.degree() <= s {
                        let v = out.entry(e.clone()).or_insert_with(|| vec![field.zero(); n]);
                        v[c] = field.add(&v[c], &field.from_i64(*coeff));
                    }
                }
                Some(p) => {
                    for (j, weight, rest) in sub_monomials(e, s) {
                        let w = field.mul(&field.from_i64(*coeff), &field.from_bigint(&weight.into()));
                        let w = field.mul(&w, &rest.eval(field, p));
                        if field.is_zero(&w) {
                            continue;
                        }
                        let v = out.entry(j).or_insert_with(|| vec![field.zero(); n]);
                        v[c] = field.add(&v[c], &w);
                    }
                }
            }
        }
    }
    out
}

/// `[T^0, T^1, …, T^{s_max}]` of the affine cone over the image of `coords`.
pub fn jet_filtration<F: Field>(field: &F, coords: &[MultiPoly], point: Option<&[F::Elem]>, s_max: usize) -> Vec<Subspace<F::Elem>> {
    let vectors = jet_vectors(field, coords, point, s_max);
    let mut red = RowReducer::new(field, coords.len());
    let mut out = Vec::with_capacity(s_max + 1);
    let mut iter = vectors.into_iter().peekable();
    for s in 0..=s_max {
        while let Some((m, _)) = iter.peek() {
            if m.degree() > s {
                break;
            }
            let (_, v) = iter.next().expect("peeked");
            if red.rank() < red.ambient() {
                red.insert(v);
            }
        }
        out.push(red.clone().into_subspace());
    }
    out
}

/// `T^s` at the chart origin, from the coefficients of `f`.
pub fn osc_space_jets<F: Field>(field: &F, f: &PolyMap, s: usize) -> Subspace<F::Elem> {
    jet_filtration(field, f.coords(), None, s).pop().expect("nonempty filtration")
}

/// `T^s` at an arbitrary chart point, by recentering.
pub fn osc_space_at<F: Field>(field: &F, f: &PolyMap, p: &ChartPoint<F::Elem>, s: usize) -> Result<OsculatingSpace<F::Elem>, OsculateError> {
    f.evaluate(field, p)?;
    let vals = p.var_values();
    let space = jet_filtration(field, f.coords(), Some(&vals), s).pop().expect("nonempty filtration");
    Ok(OsculatingSpace { variety: f.variety(), n: f.n(), s, base: p.clone(), space })
}

/// The coordinates spanning `T^s` at the origin: pairs (or Plücker indices) at
/// distance `≤ s`, or Pfaffian indices of size `≤ 2s`.
pub fn osc_basis<F: Field>(field: &F, variety: Variety, n: usize, s: usize) -> Subspace<F::Elem> {
    let labels = coord_labels(variety, n);
    let keep = labels.iter().enumerate().filter(|(_, l)| match variety {
        Variety::SpinMin => l.set().len() <= 2 * s,
        _ => distance_from_base(l.set(), n) <= s,
    });
    Subspace::coordinate(field, labels.len(), keep.map(|(i, _)| i))
}

pub fn osc_basis_lg<F: Field>(field: &F, n: usize, s: usize) -> Subspace<F::Elem> {
    osc_basis(field, Variety::Lg, n, s)
}

pub fn osc_basis_spinor_pl<F: Field>(field: &F, n: usize, s: usize) -> Subspace<F::Elem> {
    osc_basis(field, Variety::SpinPl, n, s)
}

pub fn osc_basis_spinor_min<F: Field>(field: &F, n: usize, s: usize) -> Subspace<F::Elem> {
    osc_basis(field, Variety::SpinMin, n, s)
}

pub fn grass_osc_basis<F: Field>(field: &F, n: usize, s: usize) -> Subspace<F::Elem> {
    osc_basis(field, Variety::Gr, n, s)
}

/// Projective dimension of `T^s` from the closed-form counts:
///
/// * GR: `Σ_{k≤s} C(n,k)² − 1`
/// * LG: `½ Σ_{k≤s} C(n,k)(C(n,k)+1) − 1`
/// * SPIN_PL: the LG count minus `Σ_{k=1}^{⌈s/2⌉} C(n,2k−1)`
/// * SPIN_MIN: `Σ_{k=1}^{s} C(n,2k)`
pub fn osc_dim_formula(variety: Variety, n: usize, s: usize) -> usize {
    let s = s.min(n);
    let c = |k: usize| binomial(n, k);
    let affine: u128 = match variety {
        Variety::Gr => (0..=s).map(|k| c(k) * c(k)).sum(),
        Variety::Lg => (0..=s).map(|k| c(k) * (c(k) + 1)).sum::<u128>() / 2,
        Variety::SpinPl => {
            let lg: u128 = (0..=s).map(|k| c(k) * (c(k) + 1)).sum::<u128>() / 2;
            lg - (1..=s.div_ceil(2)).map(|k| c(2 * k - 1)).sum::<u128>()
        }
        Variety::SpinMin => (0..=s).map(|k| c(2 * k)).sum(),
    };
    affine as usize - 1
}

/// Projective dimension of `T^s` as the rank of the jets actually has it.
///
/// Agrees with [`osc_dim_formula`] except on ℒ𝒢(n,2n) for `n ≥ 4` and
/// `2 ≤ s`: there the `k × k` minors of a symmetric matrix span a space of
/// dimension `C(n,k)·C(n+1,k)/(k+1)` rather than `½C(n,k)(C(n,k)+1)` (for
/// instance `m_{12,34} − m_{13,24} + m_{14,23} = 0`), and the linear span of
/// ℒ𝒢(n,2n) has dimension `C(2n,n) − C(2n,n−2)`.
pub fn osc_dim_exact(variety: Variety, n: usize, s: usize) -> usize {
    match variety {
        Variety::Lg => {
            let s = s.min(n);
            let affine: u128 = (0..=s).map(|k| binomial(n, k) * binomial(n + 1, k) / (k as u128 + 1)).sum();
            affine as usize - 1
        }
        _ => osc_dim_formula(variety, n, s),
    }
}

/// Smallest `s` with `T^s` the whole ambient space.
pub fn full_space_threshold(variety: Variety, n: usize) -> usize {
    match variety {
        Variety::Gr | Variety::Lg => n,
        Variety::SpinPl => 2 * (n / 2),
        Variety::SpinMin => n / 2,
    }
}

/// The weaker statement `T^n 𝒮_n = ℙ(Δ)` recorded alongside the sharp
/// threshold `⌊n/2⌋` for the minimal spinor embedding.
pub fn stated_full_space_order(variety: Variety, n: usize) -> usize {
    match variety {
        Variety::SpinMin => n,
        _ => full_space_threshold(variety, n),
    }
}

/// Largest `n` handled by the exhaustive well-behavedness sweep.
pub fn well_behaved_bound(variety: Variety) -> Option<usize> {
    match variety {
        Variety::Lg => Some(5),
        Variety::SpinPl => Some(6),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WellBehavedRow {
    pub s: usize,
    /// Projective dimension of `T^s` of the subvariety, in full Plücker space.
    pub osc_dim: i64,
    /// Projective dimension of `T^s 𝒢(n,2n) ∩ ⟨X⟩`.
    pub section_dim: i64,
    pub equal: bool,
    /// Whether the lifted closed-form basis equals the jet space.
    pub closed_form_matches: bool,
}

/// For each `0 ≤ s ≤ n`, compares `T^s X` with `T^s 𝒢(n,2n) ∩ ⟨X⟩` in full
/// Plücker coordinates, where `⟨X⟩` is the linear span of `X`.
pub fn check_well_behaved<F: Field>(field: &F, variety: Variety, n: usize) -> Result<Vec<WellBehavedRow>, OsculateError> {
    let max = well_behaved_bound(variety).ok_or(OsculateError::Unsupported(variety))?;
    if n > max {
        return Err(OsculateError::BeyondDeskBound { variety, n, max });
    }
    let sets = plucker_sets(n);
    let coords = plucker_coords_on(variety, n);
    let filtration = jet_filtration(field, &coords, None, n);
    // every coordinate has degree ≤ n, so T^n is the linear span
    let span = filtration[n].clone();
    let lift = plucker_lift(field, variety, n)?;
    let mut rows = Vec::with_capacity(n + 1);
    for (s, osc) in filtration.iter().enumerate() {
        let section = span.intersect_coordinate(field, |c| distance_from_base(sets[c], n) <= s);
        let closed = osc_basis(field, variety, n, s).map_rows(field, &lift)?;
        rows.push(WellBehavedRow {
            s,
            osc_dim: osc.projective_dim(),
            section_dim: section.projective_dim(),
            equal: *osc == section,
            closed_form_matches: closed == *osc,
        });
    }
    Ok(rows)
}

/// Second osculating spaces of the rational normal scroll `S_(1,k)` and of
/// the Segre variety `Σ_(1,k) = ℙ¹ × ℙ^k` that it is a linear section of.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScrollExample {
    pub k: usize,
    pub t2_scroll: i64,
    pub t2_segre: i64,
    pub h_dim: i64,
    /// `T²Σ ∩ H`.
    pub section: i64,
    pub contained: bool,
    /// `T²S ⊊ T²Σ ∩ H`.
    pub strict: bool,
}

/// Compares `T²S` with `T²Σ ∩ H` at a random point of the scroll.
pub fn scroll_example<F: Field>(field: &F, k: usize, seed: u64) -> ScrollExample {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    // Segre chart: vars u, a_1..a_k (a_0 = 1); coords [a_i u]_i, [a_i]_i
    let u = MultiPoly::var(0);
    let alpha = |i: usize| if i == 0 { MultiPoly::constant(1) } else { MultiPoly::var(i) };
    let segre: Vec<MultiPoly> = (0..=k).map(|i| alpha(i).mul(&u)).chain((0..=k).map(alpha)).collect();
    // scroll chart: vars u, a_1 with a_i = a_1 u^{i−1}
    let a1 = MultiPoly::var(1);
    let scroll_alpha = |i: usize| match i {
        0 => MultiPoly::constant(1),
        _ => (1..i).fold(a1.clone(), |acc, _| acc.mul(&u)),
    };
    let scroll: Vec<MultiPoly> = (0..=k).map(|i| scroll_alpha(i).mul(&u)).chain((0..=k).map(scroll_alpha)).collect();
    // H = {Z_j = Z_{k+j+2}, j = 1..k−1}
    let h = Subspace::from_rows(
        field,
        2 * k + 2,
        (0..2 * k + 2).filter(|c| !(k + 3..2 * k + 2).contains(c)).map(|c| {
            let mut v = vec![field.zero(); 2 * k + 2];
            v[c] = field.one();
            if (1..k).contains(&c) {
                v[c + k + 2] = field.one();
            }
            v
        }),
    );
    let (uu, aa) = (field.sample(&mut rng), field.sample(&mut rng));
    let p_scroll = vec![uu.clone(), aa.clone()];
    // the matching Segre point has a_i = a_1 u^{i−1}
    let p_segre: Vec<F::Elem> = std::iter::once(uu.clone()).chain((1..=k).map(|i| field.mul(&aa, &field.pow(&uu, (i - 1) as u64)))).collect();
    let t2_scroll = jet_filtration(field, &scroll, Some(&p_scroll), 2).pop().expect("nonempty");
    let t2_segre = jet_filtration(field, &segre, Some(&p_segre), 2).pop().expect("nonempty");
    let section = t2_segre.intersect(field, &h).expect("same ambient");
    let contained = section.contains(field, &t2_scroll).expect("same ambient");
    ScrollExample {
        k,
        t2_scroll: t2_scroll.projective_dim(),
        t2_segre: t2_segre.projective_dim(),
        h_dim: h.projective_dim(),
        section: section.projective_dim(),
        contained,
        strict: contained && t2_scroll.dim() < section.dim(),
    }
}

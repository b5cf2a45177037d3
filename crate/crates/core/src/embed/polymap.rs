//! Coordinates of the chart parametrizations, symbolically and numerically.

use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Value};

use crate::combinat::{even_subsets, minor_cols, minor_rows, perm_sign, sigma_pairs, IndexSet, SigmaPair};
use crate::exactlinalg::{Field, Matrix};

use super::minors::{all_minors, all_pfaffians, to_mask};
use super::poly::{Monomial, MultiPoly};
use super::ring::{Jets, Polys, Ring, Scalars};
use super::{chart_matrix_symbolic, plucker_sets, ChartPoint, EmbedError, Variety};

/// Index of an intrinsic coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoordLabel {
    /// A Plücker index `J` (Grassmannian) or a Pfaffian index `I` (minimal spinor).
    Set(IndexSet),
    /// A mirror pair; the coordinate is the minor of the representative `J`.
    Pair(SigmaPair),
}

impl CoordLabel {
    pub fn label(&self) -> String {
        match self {
            CoordLabel::Set(s) => s.label(),
            CoordLabel::Pair(p) => p.label(),
        }
    }

    /// The index set that names the coordinate.
    pub fn set(&self) -> IndexSet {
        match self {
            CoordLabel::Set(s) => *s,
            CoordLabel::Pair(p) => p.j,
        }
    }
}

impl fmt::Display for CoordLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Coordinate indices in their canonical order.
///
/// * GR: every `J`, coordinate `det(M_J)`.
/// * LG: one per mirror pair, coordinate `ε(σ_J)·det(M_J) = det A[R, C]`.
/// * SPIN_PL: as LG, but self-mirror `J` at odd distance are dropped (they vanish).
/// * SPIN_MIN: every even `I ⊆ {1..n}`, coordinate `pf(A_I)`, with `pf(A_∅) = 1`.
pub fn coord_labels(variety: Variety, n: usize) -> Vec<CoordLabel> {
    match variety {
        Variety::Gr => plucker_sets(n).into_iter().map(CoordLabel::Set).collect(),
        Variety::Lg => sigma_pairs(n, n).into_iter().map(CoordLabel::Pair).collect(),
        Variety::SpinPl => sigma_pairs(n, n)
            .into_iter()
            .filter(|p| !(p.is_fixed() && p.dist % 2 == 1))
            .map(CoordLabel::Pair)
            .collect(),
        Variety::SpinMin => even_subsets(n).into_iter().map(CoordLabel::Set).collect(),
    }
}

fn coordinate_values<R: Ring>(ring: &R, variety: Variety, n: usize, a: &[Vec<R::Elem>], labels: &[CoordLabel]) -> Vec<R::Elem> {
    if variety == Variety::SpinMin {
        let pf = all_pfaffians(ring, a);
        return labels.iter().map(|l| pf[to_mask(l.set()) as usize].clone()).collect();
    }
    let minors = all_minors(ring, a, n, n);
    labels
        .iter()
        .map(|l| {
            let j = l.set();
            let m = minors.get(to_mask(minor_rows(j, n)), to_mask(minor_cols(j, n))).expect("all sizes expanded").clone();
            match l {
                CoordLabel::Set(_) if perm_sign(j, n) < 0 => ring.neg(&m),
                _ => m,
            }
        })
        .collect()
}

/// Coordinates at a chart matrix, evaluated directly by expansion.
pub fn coords_at<F: Field>(field: &F, variety: Variety, a: &Matrix<F::Elem>) -> Vec<F::Elem> {
    let n = a.rows();
    coordinate_values(&Scalars(field), variety, n, &a.row_vecs(), &coord_labels(variety, n))
}

/// Coordinates at a chart matrix together with their partial derivatives in
/// every chart variable: `(f(A), [∂_v f(A) for v])`.
pub fn coords_and_derivatives<F: Field>(field: &F, variety: Variety, a: &Matrix<F::Elem>) -> (Vec<F::Elem>, Vec<Vec<F::Elem>>) {
    let n = a.rows();
    let shape = variety.shape();
    let k = shape.n_vars(n);
    let jets = Jets::new(field, k);
    let one = field.one();
    let minus = field.neg(&one);
    let entries: Vec<Vec<Vec<F::Elem>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match shape.entry_var(n, i, j) {
                    None => jets.zero(),
                    Some((v, neg)) => jets.variable(a[(i, j)].clone(), v, if neg { minus.clone() } else { one.clone() }),
                })
                .collect()
        })
        .collect();
    let vals = coordinate_values(&jets, variety, n, &entries, &coord_labels(variety, n));
    let f = vals.iter().map(|v| v[0].clone()).collect();
    let derivs = (0..k).map(|v| vals.iter().map(|x| x[v + 1].clone()).collect()).collect();
    (f, derivs)
}

/// The linear map from intrinsic coordinates to full Plücker coordinates
/// (columns ordered as [`plucker_sets`]), as a matrix acting on row vectors.
///
/// For a pair at distance `d`: `P_J = ε_J x`, `P_{J′} = ε_{J′} x` on ℒ𝒢 and
/// `P_{J′} = (−1)^d ε_{J′} x` on 𝒮_n, because `A[C, R]` is the transpose of
/// `A[R, C]`, resp. minus it.
pub fn plucker_lift<F: Field>(field: &F, variety: Variety, n: usize) -> Result<Matrix<F::Elem>, EmbedError> {
    if variety == Variety::SpinMin {
        return Err(EmbedError::NoLift(variety));
    }
    let sets = plucker_sets(n);
    let col: HashMap<IndexSet, usize> = sets.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let labels = coord_labels(variety, n);
    let sign = |s: i8| field.from_i64(s as i64);
    let rows = labels
        .iter()
        .map(|l| {
            let mut row = vec![field.zero(); sets.len()];
            match l {
                CoordLabel::Set(j) => row[col[j]] = field.one(),
                CoordLabel::Pair(p) => {
                    row[col[&p.j]] = sign(p.sign_j);
                    if !p.is_fixed() {
                        let odd = variety == Variety::SpinPl && p.dist % 2 == 1;
                        row[col[&p.jp]] = sign(if odd { -p.sign_jp } else { p.sign_jp });
                    }
                }
            }
            row
        })
        .collect();
    Ok(Matrix::from_rows(sets.len(), rows))
}

/// All `C(2n, n)` Plücker coordinates `det(M_J)` restricted to the chart of
/// `variety` (columns ordered as [`plucker_sets`]).
pub fn plucker_coords_on(variety: Variety, n: usize) -> Vec<MultiPoly> {
    let a = chart_matrix_symbolic(variety.shape(), n);
    coordinate_values(&Polys, Variety::Gr, n, &a, &coord_labels(Variety::Gr, n))
}

/// A chart parametrization as explicit integer polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    variety: Variety,
    n: usize,
    var_names: Vec<String>,
    labels: Vec<CoordLabel>,
    coords: Vec<MultiPoly>,
}

pub fn grass_plucker(n: usize) -> PolyMap {
    PolyMap::build(Variety::Gr, n)
}

pub fn lg_plucker(n: usize) -> PolyMap {
    PolyMap::build(Variety::Lg, n)
}

pub fn spinor_plucker(n: usize) -> PolyMap {
    PolyMap::build(Variety::SpinPl, n)
}

pub fn spinor_minimal(n: usize) -> PolyMap {
    PolyMap::build(Variety::SpinMin, n)
}

impl PolyMap {
    pub fn build(variety: Variety, n: usize) -> PolyMap {
        let shape = variety.shape();
        let labels = coord_labels(variety, n);
        let a = chart_matrix_symbolic(shape, n);
        let coords = coordinate_values(&Polys, variety, n, &a, &labels);
        PolyMap { variety, n, var_names: shape.var_names(n), labels, coords }
    }

    pub fn variety(&self) -> Variety {
        self.variety
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn labels(&self) -> &[CoordLabel] {
        &self.labels
    }

    pub fn coords(&self) -> &[MultiPoly] {
        &self.coords
    }

    /// Number of coordinates, i.e. the dimension of the affine cone's ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn projective_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn max_degree(&self) -> usize {
        self.coords.iter().filter_map(|c| c.degree()).max().unwrap_or(0)
    }

    pub fn eval_vars<F: Field>(&self, field: &F, vals: &[F::Elem]) -> Vec<F::Elem> {
        self.coords.iter().map(|c| c.eval(field, vals)).collect()
    }

    pub fn evaluate<F: Field>(&self, field: &F, p: &ChartPoint<F::Elem>) -> Result<Vec<F::Elem>, EmbedError> {
        let expected = self.variety.shape();
        if p.shape() != expected {
            return Err(EmbedError::ShapeMismatch { expected, found: p.shape() });
        }
        if p.n() != self.n {
            return Err(EmbedError::WrongLength { expected: self.n, found: p.n() });
        }
        Ok(self.eval_vars(field, &p.var_values()))
    }

    pub fn to_json(&self) -> Value {
        let coords: Vec<Value> = self
            .labels
            .iter()
            .zip(&self.coords)
            .map(|(l, c)| {
                let terms: Vec<Value> = c
                    .terms()
                    .iter()
                    .map(|(m, k)| json!({"coeff": k.to_string(), "exps": m.dense_exponents(self.n_vars())}))
                    .collect();
                json!({"index": l.label(), "terms": terms})
            })
            .collect();
        json!({"variety": self.variety.tag(), "n": self.n, "vars": self.var_names, "coords": coords})
    }

    pub fn from_json(v: &Value) -> Result<PolyMap, EmbedError> {
        let bad = |s: &str| EmbedError::Json(s.to_string());
        let variety: Variety = v["variety"].as_str().ok_or_else(|| bad("variety"))?.parse()?;
        let n = v["n"].as_u64().ok_or_else(|| bad("n"))? as usize;
        let shape = variety.shape();
        let var_names = shape.var_names(n);
        if v["vars"] != json!(var_names) {
            return Err(bad("variable names"));
        }
        let labels = coord_labels(variety, n);
        let entries = v["coords"].as_array().ok_or_else(|| bad("coords"))?;
        if entries.len() != labels.len() {
            return Err(bad("coordinate count"));
        }
        let mut coords = Vec::with_capacity(labels.len());
        for (label, entry) in labels.iter().zip(entries) {
            if entry["index"].as_str() != Some(label.label().as_str()) {
                return Err(bad("coordinate index"));
            }
            let mut terms = Vec::new();
            for t in entry["terms"].as_array().ok_or_else(|| bad("terms"))? {
                let coeff: i64 = t["coeff"].as_str().and_then(|s| s.parse().ok()).ok_or_else(|| bad("coeff"))?;
                let exps: Vec<u32> = t["exps"]
                    .as_array()
                    .ok_or_else(|| bad("exps"))?
                    .iter()
                    .map(|e| e.as_u64().map(|x| x as u32))
                    .collect::<Option<_>>()
                    .ok_or_else(|| bad("exps"))?;
                if exps.len() != var_names.len() {
                    return Err(bad("exponent length"));
                }
                terms.push((Monomial::from_exponents(&exps), coeff));
            }
            coords.push(MultiPoly::from_terms(terms));
        }
        Ok(PolyMap { variety, n, var_names, labels, coords })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{binomial, mirror};
    use crate::exactlinalg::{PrimeField, Rationals};
    use crate::embed::Shape;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: `det(M_J)` by cofactor expansion of the actual
    /// `n × n` column selection of `(I_n | A)`.
    fn det_m_j(a: &[Vec<MultiPoly>], j: IndexSet) -> MultiPoly {
        let n = a.len();
        let cols: Vec<Vec<MultiPoly>> = j
            .iter()
            .map(|c| {
                (0..n)
                    .map(|r| if c <= n { MultiPoly::constant((r + 1 == c) as i64) } else { a[r][c - n - 1].clone() })
                    .collect()
            })
            .collect();
        fn cofactor(m: &[Vec<MultiPoly>]) -> MultiPoly {
            if m.is_empty() {
                return MultiPoly::constant(1);
            }
            let mut acc = MultiPoly::zero();
            for c in 0..m.len() {
                if m[0][c].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<MultiPoly>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, x)| x.clone()).collect()).collect();
                let t = m[0][c].mul(&cofactor(&sub));
                acc = if c % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
        // rows of M_J are the rows of M restricted to the chosen columns
        let rows: Vec<Vec<MultiPoly>> = (0..n).map(|r| cols.iter().map(|col| col[r].clone()).collect()).collect();
        cofactor(&rows)
    }

    #[test]
    fn grassmannian_coordinates_are_plucker_minors() {
        for n in 1..=3 {
            let f = grass_plucker(n);
            assert_eq!(f.ambient_dim() as u128, binomial(2 * n, n));
            let a = chart_matrix_symbolic(Shape::General, n);
            for (l, c) in f.labels().iter().zip(f.coords()) {
                assert_eq!(c, &det_m_j(&a, l.set()), "J = {}", l);
            }
        }
        let g2 = grass_plucker(2);
        let det = MultiPoly::var(0).mul(&MultiPoly::var(3)).sub(&MultiPoly::var(1).mul(&MultiPoly::var(2)));
        let k = g2.labels().iter().position(|l| l.set() == IndexSet::new([3, 4])).unwrap();
        assert_eq!(g2.coords()[k], det);
        assert_eq!(grass_plucker(1).coords(), &[MultiPoly::constant(1), MultiPoly::var(0)]);
        let g4 = grass_plucker(4);
        assert_eq!((g4.ambient_dim(), g4.max_degree()), (70, 4));
    }

    /// `ε(σ_J)det(M_J)` against `ε(σ_{J′})det(M_{J′})`, as polynomials.
    fn pair_relation(shape: Shape, n: usize) -> Vec<(usize, bool)> {
        let a = chart_matrix_symbolic(shape, n);
        let mut out = Vec::new();
        for p in sigma_pairs(n, n) {
            let x = det_m_j(&a, p.j).scale(p.sign_j as i64);
            let y = det_m_j(&a, p.jp).scale(p.sign_jp as i64);
            if x.is_zero() {
                assert!(y.is_zero());
                continue;
            }
            out.push((p.dist, if x == y { true } else { assert_eq!(x, y.neg()); false }));
        }
        out
    }

    #[test]
    fn lagrangian_pair_identity() {
        for n in 1..=4 {
            assert!(pair_relation(Shape::Symmetric, n).iter().all(|&(_, same)| same));
        }
    }

    #[test]
    fn spinor_pair_sign_depends_on_distance_parity() {
        for n in 1..=4 {
            for (d, same) in pair_relation(Shape::Skew, n) {
                assert_eq!(same, d % 2 == 0);
            }
        }
    }

    #[test]
    fn odd_self_mirror_minors_vanish() {
        for n in 1..=5 {
            let a = chart_matrix_symbolic(Shape::Skew, n);
            for p in sigma_pairs(n, n).into_iter().filter(|p| p.is_fixed() && p.dist % 2 == 1) {
                assert!(det_m_j(&a, p.j).is_zero());
            }
        }
    }

    #[test]
    fn ambient_dimensions() {
        let lg = |n| lg_plucker(n).projective_dim();
        assert_eq!(lg(2), 4);
        assert_eq!(lg(4), 42);
        // ½ Σ_k C(n,k)(C(n,k)+1)
        for n in 1..=5 {
            let s: u128 = (0..=n).map(|k| binomial(n, k) * (binomial(n, k) + 1)).sum();
            assert_eq!(lg_plucker(n).ambient_dim() as u128, s / 2);
        }
        assert_eq!(spinor_plucker(3).projective_dim(), 9);
        assert_eq!(spinor_plucker(4).projective_dim(), 34);
        for n in 1..=6 {
            assert_eq!(spinor_plucker(n).ambient_dim() as u128, binomial(2 * n, n) / 2);
        }
        assert_eq!(spinor_minimal(4).ambient_dim(), 8);
        assert_eq!(spinor_minimal(5).ambient_dim(), 16);
        let s3 = spinor_minimal(3);
        let expect: Vec<MultiPoly> = std::iter::once(MultiPoly::constant(1)).chain((0..3).map(MultiPoly::var)).collect();
        assert_eq!(s3.coords(), expect.as_slice());
    }

    #[test]
    fn degree_bounds() {
        for n in 1..=5 {
            for f in [lg_plucker(n), spinor_plucker(n)] {
                assert_eq!(f.coords()[0], MultiPoly::constant(1));
                assert!(f.max_degree() <= n);
            }
            assert!(lg_plucker(n).coords().iter().all(|c| c.max_var_degree() <= 2));
        }
        for n in 2..=8 {
            let f = spinor_minimal(n);
            assert_eq!(f.coords()[0], MultiPoly::constant(1));
            assert!(f.max_degree() <= n / 2);
            assert!(f.coords().iter().all(|c| c.max_var_degree() <= 1));
        }
    }

    #[test]
    fn spinor_quadric_in_eight_coordinates() {
        let f = spinor_minimal(4);
        let z = f.coords();
        let q = z[0].mul(&z[7]).sub(&z[1].mul(&z[6])).add(&z[2].mul(&z[5])).sub(&z[3].mul(&z[4]));
        assert!(q.is_zero());
        let fp = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = ChartPoint::random(&fp, Shape::Skew, 4, &mut rng);
        let z = f.evaluate(&fp, &p).unwrap();
        let m = |a: usize, b: usize| fp.mul(&z[a], &z[b]);
        let q = fp.sub(&fp.add(&fp.sub(&m(0, 7), &m(1, 6)), &m(2, 5)), &m(3, 4));
        assert!(fp.is_zero(&q));
    }

    #[test]
    fn evaluation_and_shape_checks() {
        let q = Rationals;
        let f = lg_plucker(2);
        let origin = ChartPoint::origin(&q, Shape::Symmetric, 2);
        let v = f.evaluate(&q, &origin).unwrap();
        assert!(q.is_one(&v[0]) && v[1..].iter().all(|x| q.is_zero(x)));
        let id = ChartPoint::new(&q, Shape::Symmetric, Matrix::identity(&q, 2)).unwrap();
        let v = f.evaluate(&q, &id).unwrap();
        // oracle: minors of the identity are 1 on principal index pairs, 0 elsewhere
        for (l, x) in f.labels().iter().zip(&v) {
            let j = l.set();
            let principal = minor_rows(j, 2) == minor_cols(j, 2);
            assert_eq!(q.is_one(x), principal, "{l}");
            assert_eq!(q.is_zero(x), !principal, "{l}");
        }
        assert_eq!(v.len(), 5);
        let skew = ChartPoint::origin(&q, Shape::Skew, 2);
        assert!(matches!(f.evaluate(&q, &skew), Err(EmbedError::ShapeMismatch { .. })));
        assert!(ChartPoint::new(&q, Shape::Skew, Matrix::identity(&q, 2)).is_err());
    }

    #[test]
    fn fast_paths_agree_with_polynomials() {
        let fp = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for v in Variety::ALL {
            for n in 2..=4 {
                let f = PolyMap::build(v, n);
                let p = ChartPoint::random(&fp, v.shape(), n, &mut rng);
                let vals = f.evaluate(&fp, &p).unwrap();
                assert_eq!(coords_at(&fp, v, p.matrix()), vals);
                let (val2, derivs) = coords_and_derivatives(&fp, v, p.matrix());
                assert_eq!(val2, vals);
                // oracle: exact partial derivatives of the polynomials
                let x = p.var_values();
                for (k, d) in derivs.iter().enumerate() {
                    let want: Vec<u64> = f
                        .coords()
                        .iter()
                        .map(|c| {
                            let terms = c.terms().iter().filter_map(|(m, coeff)| {
                                let e = m.dense_exponents(f.n_vars());
                                (e[k] > 0).then(|| {
                                    let mut e2 = e.clone();
                                    e2[k] -= 1;
                                    (Monomial::from_exponents(&e2), coeff * e[k] as i64)
                                })
                            });
                            MultiPoly::from_terms(terms.collect()).eval(&fp, &x)
                        })
                        .collect();
                    assert_eq!(d, &want);
                }
            }
        }
    }

    #[test]
    fn lift_recovers_all_plucker_coordinates() {
        let fp = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for v in [Variety::Lg, Variety::SpinPl] {
            for n in 1..=5 {
                let lift = plucker_lift(&fp, v, n).unwrap();
                let p = ChartPoint::random(&fp, v.shape(), n, &mut rng);
                let x = Matrix::from_rows(lift.rows(), vec![coords_at(&fp, v, p.matrix())]);
                let lifted = x.mul(&fp, &lift).unwrap();
                assert_eq!(lifted.row(0), coords_at(&fp, Variety::Gr, p.matrix()).as_slice());
            }
        }
        assert!(plucker_lift(&fp, Variety::SpinMin, 3).is_err());
        // every J is hit exactly once (or never, for vanishing odd singletons)
        let lift = plucker_lift(&fp, Variety::SpinPl, 3).unwrap();
        for (c, j) in plucker_sets(3).into_iter().enumerate() {
            let hits = (0..lift.rows()).filter(|&r| !fp.is_zero(&lift[(r, c)])).count();
            let odd_fixed = mirror(j, 3) == j && crate::combinat::distance_from_base(j, 3) % 2 == 1;
            assert_eq!(hits, usize::from(!odd_fixed));
        }
    }

    #[test]
    fn json_roundtrip() {
        for v in Variety::ALL {
            let f = PolyMap::build(v, 3);
            let j = f.to_json();
            assert_eq!(PolyMap::from_json(&j).unwrap(), f);
        }
        let mut j = lg_plucker(2).to_json();
        j["coords"][1]["terms"][0]["coeff"] = json!(5);
        assert!(PolyMap::from_json(&j).is_err());
    }
}

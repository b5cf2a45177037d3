use isogeo::embed::{coord_labels, ChartPoint, PolyMap, Variety};
use isogeo::exactlinalg::PrimeField;
use isogeo::osculate::{osc_dim_exact, osc_space_at};
use isogeo::secant::{birational_bound, osculating_projection, project_point, reconstruct_inverse, terracini_cone_rank, SecantError};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_case() -> impl Strategy<Value = (Variety, usize)> {
    prop_oneof![(Just(Variety::Lg), 2..=4usize), (Just(Variety::SpinPl), 3..=5usize), (Just(Variety::SpinMin), 4..=7usize),]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // the varieties are homogeneous, so a random point looks like the origin
    #[test]
    fn osculating_dimension_is_pointwise((v, n) in small_case(), s in 0..=3usize, seed in any::<u64>()) {
        let fp = PrimeField::default();
        let f = PolyMap::build(v, n);
        let p = ChartPoint::random(&fp, v.shape(), n, &mut ChaCha8Rng::seed_from_u64(seed));
        let t = osc_space_at(&fp, &f, &p, s).unwrap();
        prop_assert_eq!(t.space.projective_dim(), osc_dim_exact(v, n, s) as i64);
    }

    #[test]
    fn terracini_rank_is_bounded((v, n) in small_case(), h in 1..=4usize, seed in any::<u64>()) {
        let fp = PrimeField::default();
        let r = terracini_cone_rank(&fp, v, n, h, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(r <= coord_labels(v, n).len());
        prop_assert!(r <= h * (v.dim(n) + 1));
    }

    #[test]
    fn projection_inverts_where_defined((v, n) in small_case(), seed in any::<u64>()) {
        let fp = PrimeField::default();
        let s = (seed % (birational_bound(v, n) as u64 + 1)) as usize;
        let setup = osculating_projection(v, n, s).unwrap();
        let p = ChartPoint::random(&fp, v.shape(), n, &mut ChaCha8Rng::seed_from_u64(seed));
        match reconstruct_inverse(&fp, &setup, &project_point(&fp, &setup, &p)) {
            Ok(q) => prop_assert_eq!(q, p),
            Err(SecantError::Degenerate) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

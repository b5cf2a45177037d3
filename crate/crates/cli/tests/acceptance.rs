//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use isogeo::embed::veronese::frozen_veronese_table;
use isogeo::embed::{coords_at, spinor_minimal, ChartPoint, Shape, Variety};
use isogeo::exactlinalg::{FieldDescriptor, PrimeField, Rationals, DEFAULT_PRIME, SECOND_PRIME};
use isogeo::osculate::{check_well_behaved, scroll_example, osc_basis, osc_dim_exact, osc_dim_formula, osc_space_jets, full_space_threshold};
use isogeo::regularity::{binomial_det, certify_hyperplanes, gamma_binomial_identity, strong2_check, Strong2Verdict};
use isogeo::secant::{
    birational_bound, generic_finiteness, osculating_projection, reconstruction_round_trip, secant_report, Finiteness, Verdict, FINITENESS_SAMPLES,
    KNOWN_DEFECTIVE,
};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SEED: u64 = 0xC0FFEE;
const OSC_BUDGET: Duration = Duration::from_secs(300);
const SECANT_BUDGET: Duration = Duration::from_secs(600);
const SECANT_TRIALS: usize = 5;
const DEFECT_TRIALS: usize = 20;
const DIRECTIONS: usize = 5;
const ROUND_TRIP_POINTS: usize = 100;
const VERONESE_POINTS: usize = 50;
const BINOMIAL_ALPHA_MAX: usize = 20;
const HYPERPLANE_N_MAX: usize = 8;

struct Outcome {
    pass: bool,
    detail: String,
    /// A failure that matches exactly the deviation recorded for this criterion.
    known_deviation: bool,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into(), known_deviation: false }
    }
}

/// LG rows where one coordinate per mirror pair overcounts: the minors of a
/// symmetric matrix are linearly dependent from 4×4 on.
fn expected_lg_deviations() -> BTreeSet<(usize, usize)> {
    [(4, 2), (4, 3), (4, 4), (5, 2), (5, 3), (5, 4), (5, 5)].into_iter().collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let fp = PrimeField::default();
    let mut rows = 0;
    let mut mismatches = Vec::new();
    let mut lg_deviations = BTreeSet::new();
    let mut exact_ok = true;
    for (v, ns) in [(Variety::Lg, 2..=5), (Variety::SpinPl, 3..=6), (Variety::SpinMin, 4..=9)] {
        for n in ns {
            let f = isogeo::embed::PolyMap::build(v, n);
            for s in 0..=full_space_threshold(v, n) {
                rows += 1;
                let jets = osc_space_jets(&fp, &f, s).projective_dim();
                let basis = osc_basis(&fp, v, n, s).projective_dim();
                let formula = osc_dim_formula(v, n, s) as i64;
                exact_ok &= jets == osc_dim_exact(v, n, s) as i64 && basis == formula;
                if jets != basis || basis != formula {
                    mismatches.push(format!("{v} n={n} s={s}: jets {jets}, basis {basis}, formula {formula}"));
                    if v == Variety::Lg {
                        lg_deviations.insert((n, s));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches.is_empty() && elapsed < OSC_BUDGET;
    let known = !pass && exact_ok && elapsed < OSC_BUDGET && mismatches.len() == lg_deviations.len() && lg_deviations == expected_lg_deviations();
    let detail = if pass {
        format!("{rows} rows agree exactly in {elapsed:.1?}")
    } else {
        format!("{} of {rows} rows differ ({}); jets match the true span count; {elapsed:.1?}", mismatches.len(), mismatches.join("; "))
    };
    Outcome { pass, detail, known_deviation: known }
}

fn criterion_2() -> Outcome {
    let fp = PrimeField::default();
    let mut bad = Vec::new();
    let mut rows = 0;
    for v in [Variety::Lg, Variety::SpinPl] {
        for n in 3..=5 {
            match check_well_behaved(&fp, v, n) {
                Ok(r) => {
                    rows += r.len();
                    bad.extend(r.iter().filter(|x| !x.equal).map(|x| format!("{v} n={n} s={}", x.s)));
                }
                Err(e) => bad.push(format!("{v} n={n}: {e}")),
            }
        }
    }
    let scroll = scroll_is_strict();
    Outcome::new(bad.is_empty() && scroll, format!("{rows} rows equal; scroll k=3 strict inclusion: {scroll}{}", if bad.is_empty() { String::new() } else { format!("; unequal: {}", bad.join(", ")) }))
}

fn scroll_is_strict() -> bool {
    let r = scroll_example(&PrimeField::default(), 3, SEED);
    r.contained && r.strict
}

fn isogeo_json(args: &[&str]) -> (Value, Vec<u8>, bool) {
    let cache = std::env::temp_dir().join(format!("isogeo-acceptance-{}", std::process::id()));
    let out = Command::new(env!("CARGO_BIN_EXE_isogeo")).env("ISOGEO_CACHE_DIR", &cache).args(args).output().expect("binary runs");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.stdout, out.status.success())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let trials = SECANT_TRIALS.to_string();
    let mut rows = 0;
    let mut bad = Vec::new();
    for (v, range) in [("lg", "3..8"), ("spinor-pl", "4..7"), ("spinor-min", "6..13")] {
        let (json, _, _) = isogeo_json(&["secant", "--variety", v, "--n", range, "--h", "auto", "--trials", &trials, "--field", "fp:2147483647", "--format", "json"]);
        let Some(list) = json["rows"].as_array() else {
            bad.push(format!("{v}: no output"));
            continue;
        };
        for r in list {
            rows += 1;
            if r["verdict"] != "certified-nondefective" || r["rank"] != r["expected"] || r["trials"].as_u64() < Some(SECANT_TRIALS as u64) {
                bad.push(format!("{} n={} h={}: rank {} expected {}", r["variety"], r["n"], r["h"], r["rank"], r["expected"]));
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(bad.is_empty() && rows > 0 && elapsed < SECANT_BUDGET, format!("{rows} rows certified in {elapsed:.1?}{}", if bad.is_empty() { String::new() } else { format!("; not certified: {}", bad.join(", ")) }))
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    let mut deficits = Vec::new();
    for (v, n, h) in KNOWN_DEFECTIVE {
        match secant_report(FieldDescriptor::Prime(DEFAULT_PRIME), v, n, h, DEFECT_TRIALS, SEED) {
            Ok(r) => {
                let primes: Vec<_> = r.confirmations.iter().filter(|c| c.field.starts_with("fp:")).collect();
                let enough = primes.len() == 2
                    && primes.iter().any(|c| c.field == format!("fp:{DEFAULT_PRIME}"))
                    && primes.iter().any(|c| c.field == format!("fp:{SECOND_PRIME}"))
                    && primes.iter().all(|c| c.trials >= DEFECT_TRIALS)
                    && r.confirmations.iter().any(|c| c.field == "qq");
                if r.verdict != Verdict::DefectiveEvidence || !enough {
                    bad.push(format!("{v} n={n} h={h}: {}", r.verdict));
                }
                let best = r.confirmations.iter().map(|c| c.rank).chain([r.rank]).max().unwrap();
                deficits.push(format!("{v}({n}) h={h} rank {best}/{} (span ℙ^{})", r.expected, r.span_n));
            }
            Err(e) => bad.push(format!("{v} n={n} h={h}: {e}")),
        }
    }
    Outcome::new(bad.is_empty(), format!("deficits: {}{}", deficits.join(", "), if bad.is_empty() { String::new() } else { format!("; wrong: {}", bad.join(", ")) }))
}

fn criterion_5() -> Outcome {
    let fp = PrimeField::default();
    let mut bad = Vec::new();
    let cases: [(Variety, std::ops::RangeInclusive<usize>); 3] = [(Variety::Lg, 3..=5), (Variety::SpinPl, 3..=5), (Variety::SpinMin, 6..=8)];
    let mut round_trips = 0;
    for (v, ns) in cases {
        for n in ns {
            let s = birational_bound(v, n) as usize;
            let setup = osculating_projection(v, n, s).expect("nonempty target");
            let fin = generic_finiteness(&fp, &setup, FINITENESS_SAMPLES, SEED);
            if fin.result != Finiteness::Finite {
                bad.push(format!("{v} n={n} s={s} not finite"));
            }
            match reconstruction_round_trip(&fp, v, n, s, ROUND_TRIP_POINTS, SEED) {
                Ok(r) if r.recovered == ROUND_TRIP_POINTS => round_trips += 1,
                Ok(r) => bad.push(format!("{v} n={n}: {}/{ROUND_TRIP_POINTS} recovered", r.recovered)),
                Err(e) => bad.push(format!("{v} n={n}: {e}")),
            }
        }
    }
    let s3 = generic_finiteness(&fp, &osculating_projection(Variety::SpinPl, 3, 1).unwrap(), FINITENESS_SAMPLES, SEED);
    let veronese = s3.result == Finiteness::Contracts { fiber_dim: 1 } && s3.image_dim == 2;
    if !veronese {
        bad.push(format!("S_3 tangent projection: image {} {:?}", s3.image_dim, s3.result));
    }
    Outcome::new(bad.is_empty(), format!("9 projections finite, {round_trips}/9 cases round-trip {ROUND_TRIP_POINTS}/{ROUND_TRIP_POINTS}, S_3 contracts onto a surface: {veronese}{}", if bad.is_empty() { String::new() } else { format!("; {}", bad.join(", ")) }))
}

fn criterion_6() -> Outcome {
    let mut bad = Vec::new();
    let mut instances = 0;
    let cases: [(Variety, std::ops::RangeInclusive<usize>); 3] = [(Variety::Lg, 3..=4), (Variety::SpinPl, 3..=4), (Variety::SpinMin, 6..=8)];
    for (v, ns) in cases {
        for n in ns {
            let thr = full_space_threshold(v, n);
            for s1 in 0..thr {
                for s2 in 0..thr - s1 {
                    instances += 1;
                    match strong2_check(FieldDescriptor::Prime(DEFAULT_PRIME), v, n, s1, s2, DIRECTIONS, SEED) {
                        Ok(r) if r.verdict == Strong2Verdict::Pass && r.trials >= DIRECTIONS => {}
                        Ok(r) => bad.push(format!("{v} n={n} ({s1},{s2}): flat {} contained {:?}", r.flat, r.contained)),
                        Err(e) => bad.push(format!("{v} n={n} ({s1},{s2}): {e}")),
                    }
                }
            }
        }
    }
    Outcome::new(bad.is_empty(), format!("{instances} (n, s1, s2) instances x {DIRECTIONS} directions{}", if bad.is_empty() { String::new() } else { format!("; failing: {}", bad.join(", ")) }))
}

fn criterion_7() -> Outcome {
    let mut dets = 0;
    let mut zero = Vec::new();
    for alpha in 1..=BINOMIAL_ALPHA_MAX {
        for d2 in 1..=alpha {
            dets += 1;
            if binomial_det(alpha, d2).is_zero() {
                zero.push(format!("({alpha},{d2})"));
            }
        }
    }
    let mut systems = 0;
    let mut bad = Vec::new();
    for n in 2..=HYPERPLANE_N_MAX {
        if !gamma_binomial_identity(n) {
            bad.push(format!("gamma counts n={n}"));
        }
        match certify_hyperplanes(n) {
            Ok(checks) => {
                systems += checks.len();
                bad.extend(checks.iter().filter(|c| !c.annihilates || c.system.coefficients[0].is_zero()).map(|c| format!("n={n} I={}", c.system.index.label())));
            }
            Err(e) => bad.push(format!("n={n}: {e}")),
        }
    }
    Outcome::new(zero.is_empty() && bad.is_empty(), format!("{dets} determinants nonzero, {systems} hyperplane systems solved with c_0 != 0 and annihilating{}{}", if zero.is_empty() { String::new() } else { format!("; zero det: {}", zero.join(" ")) }, if bad.is_empty() { String::new() } else { format!("; {}", bad.join(", ")) }))
}

fn criterion_8() -> Outcome {
    let q = Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut points = 0;
    let mut ok = true;
    for n in 4..=5 {
        let table = frozen_veronese_table(n).expect("frozen table");
        for _ in 0..VERONESE_POINTS {
            let p = ChartPoint::random(&q, Shape::Skew, n, &mut rng);
            let z = coords_at(&q, Variety::SpinMin, p.matrix());
            ok &= table.apply(&q, &z) == coords_at(&q, Variety::SpinPl, p.matrix());
            points += 1;
        }
    }
    let z = spinor_minimal(4);
    let z = z.coords();
    let quadric = z[0].mul(&z[7]).sub(&z[1].mul(&z[6])).add(&z[2].mul(&z[5])).sub(&z[3].mul(&z[4]));
    Outcome::new(ok && quadric.is_zero(), format!("Veronese identity at {points} points over Q: {ok}; S_4 quadric is the zero polynomial: {}", quadric.is_zero()))
}

fn criterion_9() -> Outcome {
    let runs: [&[&str]; 3] = [
        &["secant", "--variety", "spinor-min", "--n", "6..9", "--h", "auto", "--format", "json"],
        &["regularity", "--variety", "lg", "--n", "3", "--format", "json"],
        &["project", "--variety", "lg", "--n", "3..5", "--s", "1", "--format", "json"],
    ];
    let mut same = true;
    for args in runs {
        let (_, a, ok_a) = isogeo_json(args);
        let (_, b, ok_b) = isogeo_json(args);
        same &= ok_a && ok_b && !a.is_empty() && a == b;
    }
    Outcome::new(same, format!("{} suites rerun with seed 0xC0FFEE, byte-identical JSON: {same}", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("osculating-dimension oracles agree", criterion_1),
        ("osculating well-behavedness", criterion_2),
        ("secant tables certified", criterion_3),
        ("defective cases", criterion_4),
        ("osculating projections", criterion_5),
        ("strong 2-osculating regularity", criterion_6),
        ("combinatorial certificates", criterion_7),
        ("spinor embedding consistency", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut unexpected = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = match (o.pass, o.known_deviation) {
            (true, _) => "PASS",
            (false, true) => "FAIL (recorded deviation)",
            (false, false) => "FAIL",
        };
        println!("criterion {}: {tag}: {name}: {}", k + 1, o.detail);
        if !o.pass && !o.known_deviation {
            unexpected += 1;
        }
    }
    let cache = std::env::temp_dir().join(format!("isogeo-acceptance-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(cache);
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}

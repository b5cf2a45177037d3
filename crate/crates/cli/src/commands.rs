use anyhow::{anyhow, bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use isogeo::embed::{coord_labels, Variety};
use isogeo::exactlinalg::{Field, FieldDescriptor, PrimeField, Rationals};
use isogeo::osculate::{check_well_behaved, full_space_threshold, osc_basis, osc_dim_exact, osc_dim_formula, osc_space_jets};
use isogeo::regularity::{binomial_det, certify_hyperplanes, family_limit, gamma_binomial_identity, strong2_check, CurveFamily, Strong2Verdict, MAX_DIRECTION_ATTEMPTS};
use isogeo::secant::{
    birational_bound, defect_table, expected_verdict, generic_finiteness, osculating_projection, reconstruction_round_trip, Finiteness, HRule,
    CSV_HEADER, FINITENESS_SAMPLES, KNOWN_DEFECTIVE,
};

use crate::cache::MapCache;
use crate::output::Report;
use crate::{Command, NRange, RunConfig};

macro_rules! with_field {
    ($desc:expr, $f:ident => $body:expr) => {
        match $desc {
            FieldDescriptor::Prime(p) => {
                let $f = &PrimeField::new(p)?;
                $body
            }
            FieldDescriptor::Rationals => {
                let $f = &Rationals;
                $body
            }
        }
    };
}

pub const BINOMIAL_ALPHA_MAX: usize = 20;

fn variety(cfg: &RunConfig) -> Result<Variety> {
    cfg.variety.ok_or_else(|| anyhow!("--variety is required"))
}

fn ns(cfg: &RunConfig) -> Result<NRange> {
    cfg.n.ok_or_else(|| anyhow!("--n is required"))
}

pub fn run(command: Command, cfg: &RunConfig, cache: &MapCache) -> Result<Report> {
    let config = cfg.to_json();
    let mut rep = match command {
        Command::OscDim => Report::new("osc-dim", config, &["variety", "n", "s", "formula", "jets", "basis", "exact", "agree", "full"]),
        Command::OscSpace => Report::new("osc-space", config, &["variety", "n", "s", "dim", "coordinate", "coordinates"]),
        Command::WellBehaved => Report::new("well-behaved", config, &["variety", "n", "s", "osc_dim", "section_dim", "equal", "closed_form_matches"]),
        Command::Secant => Report::new("secant", config, &CSV_HEADER.split(',').collect::<Vec<_>>()),
        Command::Project => Report::new("project", config, &["variety", "n", "s", "target_dim", "image_dim", "result", "fiber_dim", "birational_bound"]),
        Command::Reconstruct => Report::new("reconstruct", config, &["variety", "n", "s", "field", "points", "recovered", "skipped"]),
        Command::Regularity => Report::new("regularity", config, &["variety", "n", "s1", "s2", "target_dim", "limit_dims", "flat", "resampled", "verdict"]),
        Command::FlatLimit => Report::new("flat-limit", config, &["variety", "n", "s1", "s2", "generic_dim", "limit_dim", "target_dim", "flat", "contained"]),
        Command::BinomialCheck => Report::new("binomial-check", config, &["kind", "alpha", "n", "instances", "passed"]),
        Command::Suite => Report::new("suite", config, &["check", "variety", "n", "s", "h", "s1", "s2", "verdict", "ok"]),
    };
    match command {
        Command::OscDim => osc_dim(&mut rep, cfg, cache)?,
        Command::OscSpace => osc_space(&mut rep, cfg, cache)?,
        Command::WellBehaved => well_behaved(&mut rep, cfg.field, variety(cfg)?, ns(cfg)?)?,
        Command::Secant => {
            let h = cfg.h.ok_or_else(|| anyhow!("--h is required (a number or `auto`)"))?;
            secant(&mut rep, cfg.field, variety(cfg)?, ns(cfg)?, h, cfg.trials.unwrap_or(5), cfg.seed)?
        }
        Command::Project => {
            let s = cfg.s.ok_or_else(|| anyhow!("--s is required"))?;
            project(&mut rep, cfg.field, variety(cfg)?, ns(cfg)?, |_| s, cfg.seed)?
        }
        Command::Reconstruct => reconstruct(&mut rep, cfg.field, variety(cfg)?, ns(cfg)?, cfg.s, cfg.trials.unwrap_or(100), cfg.seed)?,
        Command::Regularity => regularity(&mut rep, cfg.field, variety(cfg)?, ns(cfg)?, cfg.s1, cfg.s2, cfg.trials.unwrap_or(5), cfg.seed)?,
        Command::FlatLimit => flat_limit_cmd(&mut rep, cfg, cache)?,
        Command::BinomialCheck => binomial_check(&mut rep, cfg.n.unwrap_or(NRange { lo: 2, hi: 8 }))?,
        Command::Suite => suite(&mut rep, cfg, cache)?,
    }
    Ok(rep)
}

fn s_values(v: Variety, n: usize, s: Option<usize>) -> Vec<usize> {
    match s {
        Some(s) => vec![s],
        None => (0..=full_space_threshold(v, n)).collect(),
    }
}

fn osc_dim(rep: &mut Report, cfg: &RunConfig, cache: &MapCache) -> Result<()> {
    let v = variety(cfg)?;
    for n in ns(cfg)?.iter() {
        let map = cache.load(v, n);
        let ambient = coord_labels(v, n).len() as i64 - 1;
        for s in s_values(v, n, cfg.s) {
            let (jets, basis) = with_field!(cfg.field, f => (osc_space_jets(f, &map, s).projective_dim(), osc_basis(f, v, n, s).projective_dim()));
            let formula = osc_dim_formula(v, n, s) as i64;
            let exact = osc_dim_exact(v, n, s) as i64;
            let row = json!({
                "variety": v, "n": n, "s": s, "formula": formula, "jets": jets, "basis": basis, "exact": exact,
                "agree": jets == basis && basis == formula, "full": jets == ambient,
            });
            rep.push(&row, jets == exact && basis == formula);
        }
    }
    Ok(())
}

fn osc_space(rep: &mut Report, cfg: &RunConfig, cache: &MapCache) -> Result<()> {
    let v = variety(cfg)?;
    let s = cfg.s.ok_or_else(|| anyhow!("--s is required"))?;
    for n in ns(cfg)?.iter() {
        let map = cache.load(v, n);
        let labels = coord_labels(v, n);
        let row = with_field!(cfg.field, f => {
            let space = osc_space_jets(f, &map, s);
            let coordinate = space.basis().row_vecs().iter().all(|r| r.iter().filter(|x| !f.is_zero(x)).count() == 1);
            let coordinates: Vec<String> = space.pivot_cols().iter().map(|&c| labels[c].label()).collect();
            json!({"variety": v, "n": n, "s": s, "dim": space.projective_dim(), "coordinate": coordinate, "coordinates": coordinates})
        });
        let ok = row["dim"] == json!(osc_dim_exact(v, n, s));
        rep.push(&row, ok);
    }
    Ok(())
}

fn with_context(mut row: Map<String, Value>, extra: &[(&str, Value)]) -> Map<String, Value> {
    for (k, v) in extra {
        row.insert(k.to_string(), v.clone());
    }
    row
}

fn object<T: serde::Serialize>(x: &T) -> Map<String, Value> {
    match serde_json::to_value(x).expect("serializable") {
        Value::Object(m) => m,
        _ => unreachable!("reports are structs"),
    }
}

fn well_behaved(rep: &mut Report, field: FieldDescriptor, v: Variety, ns: NRange) -> Result<()> {
    for n in ns.iter() {
        let rows = with_field!(field, f => check_well_behaved(f, v, n))?;
        for r in rows {
            let row = with_context(object(&r), &[("variety", json!(v)), ("n", json!(n))]);
            rep.push(&row, r.equal);
        }
    }
    Ok(())
}

fn secant(rep: &mut Report, field: FieldDescriptor, v: Variety, ns: NRange, h: HRule, trials: usize, seed: u64) -> Result<()> {
    for r in defect_table(field, v, ns.iter(), h, trials, seed)? {
        let expected = expected_verdict(r.variety, r.n, r.h);
        let ok = expected.map_or(true, |e| e == r.verdict);
        let row = with_context(object(&r), &[("expected_verdict", json!(expected))]);
        rep.push(&row, ok);
    }
    Ok(())
}

fn project(rep: &mut Report, field: FieldDescriptor, v: Variety, ns: NRange, s_of: impl Fn(usize) -> usize, seed: u64) -> Result<()> {
    for n in ns.iter() {
        let s = s_of(n);
        let setup = osculating_projection(v, n, s)?;
        let r = with_field!(field, f => generic_finiteness(f, &setup, FINITENESS_SAMPLES, seed));
        let bound = birational_bound(v, n);
        let (result, fiber) = match r.result {
            Finiteness::Finite => ("finite", 0),
            Finiteness::Contracts { fiber_dim } => ("contracts", fiber_dim),
        };
        let mut row = object(&r);
        row.insert("result".into(), json!(result));
        row.insert("fiber_dim".into(), json!(fiber));
        row.insert("birational_bound".into(), json!(bound));
        rep.push(&row, s as i64 > bound || r.result == Finiteness::Finite);
    }
    Ok(())
}

fn reconstruct(rep: &mut Report, field: FieldDescriptor, v: Variety, ns: NRange, s: Option<usize>, points: usize, seed: u64) -> Result<()> {
    for n in ns.iter() {
        let s = match s {
            Some(s) => s,
            None => usize::try_from(birational_bound(v, n)).map_err(|_| anyhow!("{v} with n = {n} has no birational osculating projection"))?,
        };
        let r = with_field!(field, f => reconstruction_round_trip(f, v, n, s, points, seed))?;
        rep.push(&r, r.recovered == r.points);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn regularity(rep: &mut Report, field: FieldDescriptor, v: Variety, ns: NRange, s1: Option<usize>, s2: Option<usize>, trials: usize, seed: u64) -> Result<()> {
    for n in ns.iter() {
        let thr = full_space_threshold(v, n);
        let pairs: Vec<(usize, usize)> = match (s1, s2) {
            (Some(a), Some(b)) => vec![(a, b)],
            _ => (0..thr).flat_map(|a| (0..thr - a).map(move |b| (a, b))).filter(|&(a, b)| s1.map_or(true, |x| x == a) && s2.map_or(true, |x| x == b)).collect(),
        };
        for (a, b) in pairs {
            let r = strong2_check(field, v, n, a, b, trials, seed)?;
            rep.push(&r, r.verdict == Strong2Verdict::Pass);
        }
    }
    Ok(())
}

fn flat_limit_cmd(rep: &mut Report, cfg: &RunConfig, cache: &MapCache) -> Result<()> {
    let v = variety(cfg)?;
    let (s1, s2) = (cfg.s1.unwrap_or(0), cfg.s2.unwrap_or(0));
    for n in ns(cfg)?.iter() {
        let map = cache.load(v, n);
        let labels = coord_labels(v, n);
        let row = with_field!(cfg.field, f => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let fl = (0..MAX_DIRECTION_ATTEMPTS)
                .find_map(|_| {
                    let curve = CurveFamily::random(f, v, n, &mut rng);
                    family_limit(f, &map, &curve, s1, s2, &mut rng)
                })
                .context("no non-degenerate direction found")?;
            let basis: Vec<String> = fl
                .limit
                .basis()
                .row_vecs()
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(_, x)| !f.is_zero(x))
                        .map(|(c, x)| format!("{}*{}", f.render(x), labels[c].label()))
                        .collect::<Vec<_>>()
                        .join(" + ")
                })
                .collect();
            json!({
                "variety": v, "n": n, "s1": s1, "s2": s2,
                "generic_dim": fl.generic_dim as i64 - 1,
                "limit_dim": fl.limit.projective_dim(),
                "target_dim": fl.target.projective_dim(),
                "flat": fl.is_flat(),
                "contained": fl.target.contains(f, &fl.limit)?,
                "limit_basis": basis,
            })
        });
        let ok = row["flat"] == json!(true) && row["contained"] == json!(true);
        rep.push(&row, ok);
    }
    Ok(())
}

fn binomial_check(rep: &mut Report, ns: NRange) -> Result<()> {
    for alpha in 1..=BINOMIAL_ALPHA_MAX {
        let nonzero = (1..=alpha).filter(|&d2| !num_traits::Zero::is_zero(&binomial_det(alpha, d2))).count();
        rep.push(&json!({"kind": "binomial-det", "alpha": alpha, "instances": alpha, "passed": nonzero}), nonzero == alpha);
    }
    for n in ns.iter() {
        let checks = certify_hyperplanes(n)?;
        let passed = checks.iter().filter(|c| c.annihilates).count();
        let identity = gamma_binomial_identity(n);
        rep.push(&json!({"kind": "hyperplanes", "n": n, "instances": checks.len(), "passed": passed, "gamma_identity": identity}), identity && passed == checks.len());
    }
    Ok(())
}

/// Desk-scale ranges for the whole suite.
fn suite(rep: &mut Report, cfg: &RunConfig, cache: &MapCache) -> Result<()> {
    let trials = cfg.trials.unwrap_or(5);
    let seed = cfg.seed;
    let field = cfg.field;
    let sub = |command: Command| Report::new(command.name(), Value::Null, &[]);
    let mut parts: Vec<Report> = Vec::new();

    for (v, lo, hi) in [(Variety::Lg, 2, 5), (Variety::SpinPl, 3, 6), (Variety::SpinMin, 4, 9)] {
        let mut r = sub(Command::OscDim);
        let c = RunConfig { variety: Some(v), n: Some(NRange { lo, hi }), s: None, ..cfg.clone() };
        osc_dim(&mut r, &c, cache)?;
        parts.push(r);
    }
    for (v, lo, hi) in [(Variety::Lg, 3, 5), (Variety::SpinPl, 3, 5)] {
        let mut r = sub(Command::WellBehaved);
        well_behaved(&mut r, field, v, NRange { lo, hi })?;
        parts.push(r);
    }
    for (v, lo, hi) in [(Variety::Lg, 3, 8), (Variety::SpinPl, 4, 7), (Variety::SpinMin, 6, 13)] {
        let mut r = sub(Command::Secant);
        secant(&mut r, field, v, NRange { lo, hi }, HRule::Auto, trials, seed)?;
        parts.push(r);
    }
    for (v, n, h) in KNOWN_DEFECTIVE {
        let mut r = sub(Command::Secant);
        secant(&mut r, field, v, NRange::single(n), HRule::Fixed(h), trials, seed)?;
        parts.push(r);
    }
    let projections: [(Variety, usize, usize, fn(usize) -> usize); 3] = [
        (Variety::Lg, 3, 5, |n| n - 2),
        (Variety::SpinPl, 3, 5, |n| 2 * (n / 2) - 2),
        (Variety::SpinMin, 6, 8, |n| n / 2 - 2),
    ];
    let mut finite_ok: Vec<(Variety, bool)> = Vec::new();
    for (v, lo, hi, s_of) in projections {
        let mut r = sub(Command::Project);
        project(&mut r, field, v, NRange { lo, hi }, s_of, seed)?;
        finite_ok.push((v, r.ok()));
        parts.push(r);
        let mut r = sub(Command::Reconstruct);
        reconstruct(&mut r, field, v, NRange { lo, hi }, None, 100, seed)?;
        parts.push(r);
    }
    let mut regular_ok: Vec<(Variety, bool)> = Vec::new();
    for (v, lo, hi) in [(Variety::Lg, 3, 4), (Variety::SpinPl, 3, 4), (Variety::SpinMin, 6, 8)] {
        let mut r = sub(Command::Regularity);
        regularity(&mut r, field, v, NRange { lo, hi }, None, None, trials, seed)?;
        regular_ok.push((v, r.ok()));
        parts.push(r);
    }
    let mut r = sub(Command::BinomialCheck);
    binomial_check(&mut r, NRange { lo: 2, hi: 8 })?;
    parts.push(r);

    for part in parts {
        for row in part.rows {
            let ok = row.get("ok") == Some(&Value::Bool(true));
            let row = with_context(row, &[("check", json!(part.command))]);
            rep.push(&row, ok);
        }
    }
    // both hypotheses of the non-defectivity criterion, per variety
    for (v, fin) in finite_ok {
        let reg = regular_ok.iter().find(|(w, _)| *w == v).map_or(false, |(_, ok)| *ok);
        let row = json!({"check": "nondefectivity-inputs", "variety": v, "verdict": if fin && reg { "certified" } else { "unverified" }});
        rep.push(&row, fin && reg);
    }
    if rep.rows.is_empty() {
        bail!("suite produced no rows");
    }
    Ok(())
}

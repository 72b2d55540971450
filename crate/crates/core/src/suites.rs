//! Seeded property suites over random and enumerated instances.
//!
//! Each suite draws instance `i` from its own stream (see
//! [`instance_rng`]), runs the instances in parallel and merges the results
//! by index, so a report depends only on the suite name, seed and count.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::amalgam::{pushout_bounded, AmalgamResult, Leg};
use crate::catcore::{
    find_adjoint, find_isomorphism, full_subcategory, slice, AdjointSide, Bound, FinCategory, FunctorMap, ObjId, SliceSide,
};
use crate::error::{AmalgamError, CategoryError, CliError};
use crate::field::{Field, FieldChoice, PrimeField, Rationals};
use crate::glue::{
    attach_cone, free_oriented_gluing, r_category, frozen_r, reflection_chain_shapes, separate_objects,
    separate_source_sink, separating_shape, Direction, Separated,
};
use crate::homotopy::{
    all_orientations, apply_reflections, clock_counts, clock_invariant, clock_normal_form, connect, homology, mirror,
    reflect_at, reflection_path, ChainMap, ComplexRep, ReflectionData,
};
use crate::linalg::Matrix;
use crate::linrep::{find_rep_isomorphism, hom_space, kan_extension, restrict, check_triangles, KanSide, Representation};
use crate::random::{
    instance_rng, random_category, random_complex, random_discrete_span, random_functor, random_glued_rep, random_objects,
    random_rep, random_small_category, QuiverSpec,
};

/// Names accepted by [`run_suite`].
pub const SUITES: [&str; 11] = [
    "amalgam-confluence",
    "amalgam-soundness",
    "gluing-lemma",
    "adjunction",
    "extension-by-zero",
    "epi-shadow",
    "slice-classes",
    "roundtrip",
    "bgp",
    "clock",
    "r-table",
];

/// Tri-state outcome of a suite or command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Instance count; `None` selects the suite default.
    pub count: Option<usize>,
    /// Field override; `None` selects the suite default.
    pub field: Option<FieldChoice>,
}

/// One instance's result.
#[derive(Clone, Debug, Serialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub passed: bool,
    pub digest: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub seed: u64,
    pub instances: usize,
    pub passed: usize,
    /// Individual assertions evaluated across all instances.
    pub checks: usize,
    /// Summed per-instance counters.
    pub tallies: BTreeMap<String, usize>,
    pub counterexample: Option<Value>,
    pub records: Vec<InstanceRecord>,
}

impl SuiteOutcome {
    pub fn verdict(&self) -> Verdict {
        if self.passed == self.instances {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn ok(&self) -> bool {
        self.verdict() == Verdict::Pass
    }

    pub fn tally(&self, key: &str) -> usize {
        self.tallies.get(key).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Default)]
struct Trial {
    checks: usize,
    failure: Option<Value>,
    digest: String,
    tallies: Vec<(&'static str, usize)>,
}

impl Trial {
    /// Record an assertion; the first failing one becomes the counterexample.
    fn check(&mut self, ok: bool, what: impl FnOnce() -> Value) -> bool {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
        ok
    }

    fn count(&mut self, key: &'static str, n: usize) {
        self.tallies.push((key, n));
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Trial {
            checks: 1,
            failure: Some(json!({ "error": e.to_string() })),
            ..Default::default()
        }
    }
}

fn run_trials(name: &str, seed: u64, count: usize, f: impl Fn(usize, &mut ChaCha8Rng) -> Trial + Sync) -> SuiteOutcome {
    let trials: Vec<Trial> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i as u64);
            f(i, &mut rng)
        })
        .collect();
    merge(name, seed, trials)
}

fn merge(name: &str, seed: u64, trials: Vec<Trial>) -> SuiteOutcome {
    let mut tallies = BTreeMap::new();
    let mut counterexample = None;
    let mut records = Vec::new();
    let mut passed = 0;
    let mut checks = 0;
    for (i, t) in trials.into_iter().enumerate() {
        checks += t.checks;
        for (k, n) in t.tallies {
            *tallies.entry(k.to_string()).or_insert(0) += n;
        }
        let ok = t.failure.is_none();
        if ok {
            passed += 1;
        } else if counterexample.is_none() {
            counterexample = Some(json!({ "instance": i, "detail": t.failure }));
        }
        records.push(InstanceRecord {
            index: i,
            passed: ok,
            digest: t.digest,
        });
    }
    SuiteOutcome {
        suite: name.to_string(),
        seed,
        instances: records.len(),
        passed,
        checks,
        tallies,
        counterexample,
        records,
    }
}

macro_rules! with_field {
    ($choice:expr, $f:ident => $body:expr) => {
        match $choice {
            FieldChoice::Prime($f) => $body,
            FieldChoice::Rational => {
                let $f = Rationals;
                $body
            }
        }
    };
}

/// Run a named suite.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteOutcome, CliError> {
    let count = |d: usize| cfg.count.unwrap_or(d);
    let default_field = cfg.field.unwrap_or(FieldChoice::Prime(PrimeField::default()));
    Ok(match name {
        "amalgam-confluence" => confluence(cfg.seed, count(1000)),
        "amalgam-soundness" => soundness(cfg.seed, count(1000)),
        "gluing-lemma" => gluing_lemma(cfg.seed, count(500)),
        "adjunction" => with_field!(default_field, f => adjunction(&f, cfg.seed, count(200))),
        "extension-by-zero" => with_field!(default_field, f => extension_by_zero(&f, cfg.seed, count(40))),
        "epi-shadow" => with_field!(default_field, f => epi_shadow(&f, cfg.seed, count(100))),
        "slice-classes" => slice_classes(cfg.seed, count(100)),
        "roundtrip" => match cfg.field {
            Some(choice) => with_field!(choice, f => roundtrip(&f, cfg.seed, count(200))),
            None => {
                let main = roundtrip(&PrimeField::new(5).expect("prime"), cfg.seed, count(200));
                let audit = roundtrip(&Rationals, cfg.seed ^ 0x5EED_0A0D, cfg.count.map_or(20, |c| c.div_ceil(10)));
                combine("roundtrip", cfg.seed, main, audit, "audit")
            }
        },
        "bgp" => bgp(cfg.seed),
        "clock" => clock(cfg.seed, count(6)),
        "r-table" => r_table(cfg.seed),
        other => return Err(CliError::Usage(format!("unknown suite `{other}` (expected one of {})", SUITES.join(", ")))),
    })
}

/// Concatenate two runs, prefixing the second run's tallies.
fn combine(name: &str, seed: u64, a: SuiteOutcome, b: SuiteOutcome, prefix: &str) -> SuiteOutcome {
    let mut out = a;
    out.suite = name.to_string();
    out.seed = seed;
    let offset = out.instances;
    out.instances += b.instances;
    out.passed += b.passed;
    out.checks += b.checks;
    for (k, v) in b.tallies {
        *out.tallies.entry(format!("{prefix}:{k}")).or_insert(0) += v;
    }
    if out.counterexample.is_none() {
        out.counterexample = b.counterexample.map(|c| json!({ prefix: c }));
    }
    out.records.extend(b.records.into_iter().map(|r| InstanceRecord {
        index: r.index + offset,
        ..r
    }));
    out
}

const SPAN_LEG: QuiverSpec = QuiverSpec {
    min_objects: 1,
    max_objects: 4,
    max_arrows: 4,
    thin_percent: 30,
};

/// A pushout of a random discrete span with finite legs of at most 8
/// morphisms; spans with an infinite pushout are redrawn.
fn random_amalgam(rng: &mut ChaCha8Rng) -> Result<(AmalgamResult, usize), AmalgamError> {
    let mut redrawn = 0;
    loop {
        let x = random_small_category(SPAN_LEG, 8, rng);
        let y = random_small_category(SPAN_LEG, 8, rng);
        let span = random_discrete_span(&x, &y, 3, rng)?;
        match pushout_bounded(&span, Bound { per_hom: 64, total: 4096 }) {
            Ok(r) => return Ok((r, redrawn)),
            Err(AmalgamError::Category(CategoryError::NonFinite { .. })) => redrawn += 1,
            Err(e) => return Err(e),
        }
    }
}

fn describe_span(r: &AmalgamResult) -> Value {
    let s = r.span();
    json!({
        "x": crate::cli::category_text(s.x()),
        "y": crate::cli::category_text(s.y()),
        "fx": s.fx().obj_map(),
        "fy": s.fy().obj_map(),
    })
}

fn confluence(seed: u64, count: usize) -> SuiteOutcome {
    run_trials("amalgam-confluence", seed, count, |_, rng| {
        let (r, redrawn) = match random_amalgam(rng) {
            Ok(v) => v,
            Err(e) => return Trial::error(e),
        };
        let mut t = Trial::default();
        t.count("redrawn", redrawn);
        match r.confluence_exhaustive(6) {
            Ok(words) => {
                t.count("words", words);
                t.check(true, || Value::Null);
                t.digest = format!("{}o{}m {}w", r.z().num_objects(), r.z().num_morphisms(), words);
            }
            Err(w) => {
                t.check(false, || json!({ "span": describe_span(&r), "word": r.format_word(&w) }));
            }
        }
        t
    })
}

fn soundness(seed: u64, count: usize) -> SuiteOutcome {
    let random = run_trials("amalgam-soundness", seed, count, |_, rng| {
        let (r, _) = match random_amalgam(rng) {
            Ok(v) => v,
            Err(e) => return Trial::error(e),
        };
        let mut t = Trial::default();
        let rep = r.verify_amalgamation();
        t.count("fully-faithful-legs", rep.gx_fully_faithful.is_some() as usize + rep.gy_fully_faithful.is_some() as usize);
        t.check(rep.passed(), || json!({ "span": describe_span(&r), "failures": rep.failures }));
        t.digest = format!("{}o{}m", r.z().num_objects(), r.z().num_morphisms());
        t
    });
    let built = run_trials("construction-pushouts", seed, construction_jobs().len(), |i, _| {
        let job = &construction_jobs()[i];
        let mut t = Trial::default();
        match construction_pushouts(job) {
            Ok(list) => {
                t.count("construction-pushouts", list.len());
                for (name, r) in &list {
                    let rep = r.verify_amalgamation();
                    t.check(rep.passed(), || json!({ "construction": name, "failures": rep.failures }));
                }
                t.digest = format!("{} {:?} {}", job.name, job.ys, list.len());
            }
            Err(e) => return Trial::error(format!("{} {:?}: {e}", job.name, job.ys)),
        }
        t
    });
    combine("amalgam-soundness", seed, random, built, "construction")
}

/// Categories with at most three objects used by the enumerated suites.
pub fn construction_corpus() -> Vec<(String, Arc<FinCategory>)> {
    let free = |objs: &[&str], arrows: &[(&str, &str, &str)]| {
        let q = crate::catcore::Quiver::new(objs, arrows).expect("corpus quiver");
        Arc::new(FinCategory::free(&q, Bound::default()).expect("finite corpus category"))
    };
    let thin = |objs: &[&str], arrows: &[(&str, &str, &str)]| Arc::new(FinCategory::poset(objs, arrows).expect("corpus poset"));
    vec![
        ("point".into(), free(&["y"], &[])),
        ("two-points".into(), free(&["y1", "y2"], &[])),
        ("a2".into(), free(&["1", "2"], &[("a", "1", "2")])),
        ("kronecker".into(), free(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")])),
        ("a3".into(), free(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")])),
        ("fork".into(), free(&["1", "2", "3"], &[("a", "1", "2"), ("b", "1", "3")])),
        ("join".into(), free(&["1", "2", "3"], &[("a", "1", "3"), ("b", "2", "3")])),
        ("triangle".into(), free(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3")])),
        ("commuting-triangle".into(), thin(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3")])),
        ("point-and-a2".into(), free(&["0", "1", "2"], &[("a", "1", "2")])),
        ("r".into(), r_category().expect("R")),
    ]
}

struct ConstructionJob {
    name: String,
    cat: Arc<FinCategory>,
    ys: Vec<ObjId>,
    chain: bool,
}

/// Every object list of length at most three for every corpus category.
/// The reflection chain runs for all lists of length at most two and for
/// one list of length three per category.
fn construction_jobs() -> &'static [ConstructionJob] {
    use std::sync::OnceLock;
    static JOBS: OnceLock<Vec<ConstructionJob>> = OnceLock::new();
    JOBS.get_or_init(|| {
        let mut jobs = Vec::new();
        for (name, c) in construction_corpus() {
            let k = c.num_objects();
            for n in 1..=3usize {
                for code in 0..k.pow(n as u32) {
                    let ys: Vec<ObjId> = (0..n).map(|i| code / k.pow(i as u32) % k).collect();
                    let chain = n <= 2 || code == (0..n).map(|i| (i % k) * k.pow(i as u32)).sum::<usize>();
                    jobs.push(ConstructionJob {
                        name: name.clone(),
                        cat: c.clone(),
                        ys,
                        chain,
                    });
                }
            }
        }
        jobs
    })
}

fn construction_pushouts(job: &ConstructionJob) -> Result<Vec<(String, AmalgamResult)>, crate::error::GlueError> {
    let mut out = Vec::new();
    for dir in [Direction::Source, Direction::Sink] {
        let tag = if dir == Direction::Source { "minus" } else { "plus" };
        out.push((format!("C-{tag}"), attach_cone(&job.cat, &job.ys, dir)?.pushout));
        out.push((format!("D-{tag}"), separate_source_sink(&job.cat, &job.ys, dir)?.pushout));
    }
    if job.chain {
        out.extend(reflection_chain_shapes(&job.cat, &job.ys)?.pushouts);
    }
    Ok(out)
}

const GLUE_LEG: QuiverSpec = QuiverSpec {
    min_objects: 1,
    max_objects: 3,
    max_arrows: 3,
    thin_percent: 30,
};

fn gluing_lemma(seed: u64, count: usize) -> SuiteOutcome {
    run_trials("gluing-lemma", seed, count, |_, rng| {
        let a1 = random_category(GLUE_LEG, rng);
        let a2 = random_category(GLUE_LEG, rng);
        let n = rng.random_range(1..=3);
        let s: Vec<ObjId> = (0..n).map(|_| rng.random_range(0..a1.num_objects())).collect();
        let tt: Vec<ObjId> = (0..n).map(|_| rng.random_range(0..a2.num_objects())).collect();
        let g = match free_oriented_gluing(&a1, &a2, &s, &tt) {
            Ok(g) => g,
            Err(e) => return Trial::error(e),
        };
        let mut t = Trial::default();
        let verified = g.verify();
        t.check(verified.is_ok(), || json!({ "s": s, "t": tt, "error": verified.as_ref().unwrap_err().to_string() }));
        let a = &g.a;
        let mut cross = 0;
        for x in 0..a1.num_objects() {
            for y in 0..a2.num_objects() {
                for &f in a.hom(g.i1.obj(x), g.i2.obj(y)) {
                    cross += 1;
                    let scan = g.factorizations_by_scan(f);
                    let sf = g.standard_factorization(f);
                    t.check(scan.len() == 1 && sf.as_ref().ok() == scan.first(), || {
                        json!({ "morphism": a.mor_name(f), "scan": scan.len() })
                    });
                }
            }
        }
        t.count("cross-morphisms", cross);
        t.digest = format!("{}o{}m {}x", a.num_objects(), a.num_morphisms(), cross);
        t
    })
}

const KAN_BASE: QuiverSpec = QuiverSpec {
    min_objects: 1,
    max_objects: 4,
    max_arrows: 4,
    thin_percent: 30,
};

/// Dimension of the (co)limit of `x` over the slice of `u` at `b`, computed
/// from every morphism of the domain rather than from generators.
pub fn slice_colimit_dim<F: Field>(u: &FunctorMap, x: &Representation<F>, b: ObjId, side: KanSide) -> usize {
    let a = u.dom();
    let cb = u.cod();
    let f = x.field();
    let mut objs: Vec<(ObjId, usize)> = Vec::new();
    let mut offset = Vec::new();
    let mut total = 0;
    for o in 0..a.num_objects() {
        let homs = match side {
            KanSide::Left => cb.hom(u.obj(o), b),
            KanSide::Right => cb.hom(b, u.obj(o)),
        };
        for &h in homs {
            objs.push((o, h));
            offset.push(total);
            total += x.dim(o);
        }
    }
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (m, mm) in a.morphisms().iter().enumerate() {
        let um = u.on_mor(m);
        for (i, &(o, h)) in objs.iter().enumerate() {
            if o != mm.src {
                continue;
            }
            for (j, &(o2, h2)) in objs.iter().enumerate() {
                if o2 != mm.tgt {
                    continue;
                }
                let linked = match side {
                    KanSide::Left => cb.compose(h2, um) == Some(h),
                    KanSide::Right => cb.compose(um, h) == Some(h2),
                };
                if !linked {
                    continue;
                }
                let xm = x.matrix(m);
                match side {
                    KanSide::Left => {
                        for c in 0..x.dim(o) {
                            let mut row = vec![f.zero(); total];
                            row[offset[i] + c] = f.one();
                            for r in 0..x.dim(o2) {
                                let v = &mut row[offset[j] + r];
                                *v = f.sub(v, xm.get(r, c));
                            }
                            rows.push(row);
                        }
                    }
                    KanSide::Right => {
                        for r in 0..x.dim(o2) {
                            let mut row = vec![f.zero(); total];
                            for c in 0..x.dim(o) {
                                row[offset[i] + c] = xm.get(r, c).clone();
                            }
                            let v = &mut row[offset[j] + r];
                            *v = f.sub(v, &f.one());
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    if rows.is_empty() {
        return total;
    }
    let n = rows.len();
    total - Matrix::from_rows(f, n, total, rows).expect("rectangular").rank()
}

fn adjunction<F: Field>(field: &F, seed: u64, count: usize) -> SuiteOutcome {
    run_trials("adjunction", seed, count, |_, rng| {
        let b = random_category(KAN_BASE, rng);
        let u = random_functor(&b, 4, 4, rng);
        let x = random_rep(u.dom(), field, 3, rng);
        let y = random_rep(&b, field, 3, rng);
        let mut t = Trial::default();
        let mut digest = Vec::new();
        for side in [KanSide::Left, KanSide::Right] {
            let report = match check_triangles(&u, &x, &y, side) {
                Ok(r) => r,
                Err(e) => return Trial::error(e),
            };
            t.check(report.first && report.second, || json!({ "side": format!("{side:?}"), "triangles": [report.first, report.second] }));
            t.check(report.hom_dims.0 == report.hom_dims.1, || json!({ "side": format!("{side:?}"), "hom_dims": report.hom_dims }));
            let ext = match kan_extension(&u, &x, side) {
                Ok(e) => e,
                Err(e) => return Trial::error(e),
            };
            for o in 0..b.num_objects() {
                let oracle = slice_colimit_dim(&u, &x, o, side);
                t.check(oracle == ext.value.dim(o), || {
                    json!({ "side": format!("{side:?}"), "object": b.object_name(o), "pointwise": ext.value.dim(o), "oracle": oracle })
                });
            }
            digest.push(format!("{:?}", ext.value.dims()));
        }
        t.digest = digest.join(" ");
        t
    })
}

/// Independent sieve test: every morphism into the image starts in it.
fn sieve_oracle(u: &FunctorMap, into: bool) -> bool {
    let img = u.image();
    let b = u.cod();
    b.morphisms().iter().all(|m| {
        let (s, t) = if into { (m.src, m.tgt) } else { (m.tgt, m.src) };
        !img[t] || img[s]
    }) && u.is_full()
}

fn extension_by_zero<F: Field>(field: &F, seed: u64, count: usize) -> SuiteOutcome {
    let corpus = construction_corpus();
    let total = corpus.len() + count;
    run_trials("extension-by-zero", seed, total, |i, rng| {
        let b = if i < corpus.len() { corpus[i].1.clone() } else { random_category(KAN_BASE, rng) };
        let k = b.num_objects();
        let mut t = Trial::default();
        let (mut sieves, mut cosieves) = (0, 0);
        for mask in 1..(1u32 << k) - 1 {
            let objs: Vec<ObjId> = (0..k).filter(|&o| mask >> o & 1 == 1).collect();
            let u = match full_subcategory(&b, &objs) {
                Ok(u) => u,
                Err(e) => return Trial::error(e),
            };
            t.check(u.is_sieve() == sieve_oracle(&u, true), || json!({ "objects": objs, "predicate": "sieve" }));
            t.check(u.is_cosieve() == sieve_oracle(&u, false), || json!({ "objects": objs, "predicate": "cosieve" }));
            for (flag, side) in [(u.is_sieve(), KanSide::Right), (u.is_cosieve(), KanSide::Left)] {
                if !flag {
                    continue;
                }
                match side {
                    KanSide::Right => sieves += 1,
                    KanSide::Left => cosieves += 1,
                }
                for _ in 0..2 {
                    let x = random_rep(u.dom(), field, 3, rng);
                    let ext = match kan_extension(&u, &x, side) {
                        Ok(e) => e,
                        Err(e) => return Trial::error(e),
                    };
                    let img = u.image();
                    let off: Vec<usize> = (0..k).filter(|&o| !img[o]).map(|o| ext.value.dim(o)).collect();
                    t.check(off.iter().all(|&d| d == 0), || json!({ "objects": objs, "side": format!("{side:?}"), "off_image_dims": off }));
                    t.check(ext.adjunction_map.is_natural_iso(), || json!({ "objects": objs, "side": format!("{side:?}"), "unit": "not invertible" }));
                }
            }
        }
        t.count("sieves", sieves);
        t.count("cosieves", cosieves);
        t.digest = format!("{}o {}s {}c", k, sieves, cosieves);
        t
    })
}

const EPI_BASE: QuiverSpec = QuiverSpec {
    min_objects: 1,
    max_objects: 3,
    max_arrows: 3,
    thin_percent: 30,
};

/// A random `(C, ys)` with `|C| ≤ 3` and `n ≤ 3`; every fourth instance
/// repeats an object.
fn random_cone_data(i: usize, rng: &mut ChaCha8Rng) -> (Arc<FinCategory>, Vec<ObjId>) {
    let c = random_category(EPI_BASE, rng);
    let mut ys = random_objects(&c, 1, 3, rng);
    if i % 4 == 3 {
        let y = ys[0];
        ys.push(y);
        ys.truncate(3);
        if ys.len() < 2 || ys[0] != ys[1] && ys.iter().skip(1).all(|&o| o != ys[0]) {
            ys = vec![y, y];
        }
    }
    (c, ys)
}

fn has_repeats(ys: &[ObjId]) -> bool {
    (0..ys.len()).any(|i| ys[..i].contains(&ys[i]))
}

/// Fully faithfulness and essential image of restriction along `u±`.
fn epi_checks<F: Field>(field: &F, sep: &Separated, pairs: usize, rng: &mut ChaCha8Rng, t: &mut Trial) -> Result<(), crate::error::RepError> {
    let cc = &sep.cone.cat;
    let u = &sep.u;
    for _ in 0..pairs {
        let w1 = random_rep(cc, field, 2, rng);
        let w2 = random_rep(cc, field, 2, rng);
        let up = hom_space(&w1, &w2)?.len();
        let down = hom_space(&restrict(u, &w1)?, &restrict(u, &w2)?)?.len();
        t.check(up == down, || json!({ "hom_dims": [up, down] }));
    }
    let e_gens: Vec<usize> = (0..sep.e.len()).collect();
    let e_invertible = |z: &Representation<F>| sep.e.iter().all(|&m| z.matrix(m).is_invertible());
    let unit_iso = |z: &Representation<F>| -> Result<bool, crate::error::RepError> {
        Ok(kan_extension(u, z, KanSide::Left)?.adjunction_map.is_natural_iso())
    };
    for _ in 0..3 {
        let w = random_rep(cc, field, 2, rng);
        let z = restrict(u, &w)?;
        t.check(e_invertible(&z), || json!({ "restriction": "e not invertible" }));
        t.check(unit_iso(&z)?, || json!({ "restriction": "unit not invertible" }));
    }
    for forced in [true, false] {
        for _ in 0..3 {
            let base = random_rep(&sep.cone.base, field, 2, rng);
            let inv: &[usize] = if forced { &e_gens } else { &[] };
            let z = random_glued_rep(&sep.pushout, &base, 2, inv, rng)?;
            let (e, iso) = (e_invertible(&z), unit_iso(&z)?);
            t.check(e == iso, || json!({ "e_invertible": e, "unit_iso": iso, "forced": forced }));
            t.count("image-members", iso as usize);
        }
    }
    Ok(())
}

fn epi_shadow<F: Field>(field: &F, seed: u64, count: usize) -> SuiteOutcome {
    run_trials("epi-shadow", seed, count, |i, rng| {
        let (c, ys) = random_cone_data(i, rng);
        let mut t = Trial::default();
        let repeated = has_repeats(&ys);
        t.count("repeated", repeated as usize);
        for dir in [Direction::Source, Direction::Sink] {
            let run = |c: &Arc<FinCategory>, ys: &[ObjId], pairs: usize, rng: &mut ChaCha8Rng, t: &mut Trial| -> Result<(), String> {
                let sep = separate_source_sink(c, ys, dir).map_err(|e| e.to_string())?;
                epi_checks(field, &sep, pairs, rng, t).map_err(|e| e.to_string())
            };
            if let Err(e) = run(&c, &ys, 20, rng, &mut t) {
                return Trial::error(e);
            }
            if repeated {
                let so = match separate_objects(&c, &ys) {
                    Ok(s) => s,
                    Err(e) => return Trial::error(e),
                };
                if let Err(e) = run(&so.cat, &so.ys, 5, rng, &mut t) {
                    return Trial::error(e);
                }
                t.count("transported", 1);
            }
        }
        t.digest = format!("{}o {:?}", c.num_objects(), ys);
        t
    })
}

/// Class `1..=5` of an object `(d, g)` of `(u⁺/v)`.
fn slice_class(sep: &Separated, d: ObjId, g: usize) -> Option<usize> {
    let cone = &sep.cone;
    let word = &cone.pushout.word(g).0;
    let leg_index = |e: &crate::amalgam::Entry| cone.pushout.span().y().mor(e.mor).word.first().copied();
    if d == sep.apex {
        return (g == cone.cat.identity(cone.apex)).then_some(1);
    }
    let last = word.last()?;
    if last.leg != Leg::Y {
        return None;
    }
    let i = leg_index(last)?;
    let nontrivial_prefix = match word.len() {
        1 => false,
        2 if word[0].leg == Leg::X && !cone.base.is_identity(word[0].mor) => true,
        _ => return None,
    };
    if let Some(k) = sep.x.iter().position(|&x| x == d) {
        return match nontrivial_prefix {
            false => (k == i).then_some(2),
            true => Some(5),
        };
    }
    Some(if nontrivial_prefix { 4 } else { 3 })
}

fn slice_classes(seed: u64, count: usize) -> SuiteOutcome {
    run_trials("slice-classes", seed, count, |i, rng| {
        let (c0, ys0) = random_cone_data(i, rng);
        let (c, ys) = if has_repeats(&ys0) {
            match separate_objects(&c0, &ys0) {
                Ok(so) => (so.cat, so.ys),
                Err(e) => return Trial::error(e),
            }
        } else {
            (c0, ys0)
        };
        let n = ys.len();
        let sep = match separate_source_sink(&c, &ys, Direction::Sink) {
            Ok(s) => s,
            Err(e) => return Trial::error(e),
        };
        let sl = match slice(&sep.u, sep.cone.apex, SliceSide::Under) {
            Ok(s) => s,
            Err(e) => return Trial::error(e),
        };
        let mut t = Trial::default();
        let mut counts = [0usize; 6];
        let mut h_objs = Vec::new();
        for (k, &(d, g)) in sl.objects.iter().enumerate() {
            let class = slice_class(&sep, d, g);
            t.check(class.is_some(), || json!({ "unclassified": sl.cat.object_name(k) }));
            let class = class.unwrap_or(0);
            counts[class] += 1;
            if (1..=3).contains(&class) {
                h_objs.push(k);
            }
        }
        let expected = [
            0,
            1,
            n,
            n,
            ys.iter().map(|&y| c.hom_to(y).len() - 1).sum(),
            ys.iter().flat_map(|&a| ys.iter().map(move |&b| (a, b))).map(|(a, b)| c.hom(a, b).len() - (a == b) as usize).sum(),
        ];
        t.check(counts == expected, || json!({ "classes": counts, "expected": expected }));
        let h = match full_subcategory(&sl.cat, &h_objs) {
            Ok(h) => h,
            Err(e) => return Trial::error(e),
        };
        let shape = separating_shape(n, Direction::Sink);
        t.check(find_isomorphism(h.dom(), &shape).is_some(), || json!({ "h": "not the expected free shape" }));
        let left = find_adjoint(&h, AdjointSide::Left);
        t.check(left.is_some(), || json!({ "h": "inclusion has no left adjoint" }));
        let right = find_adjoint(&h, AdjointSide::Right).is_some();
        t.count("inclusion-has-right-adjoint", right as usize);
        t.digest = format!("{:?} has-right-adjoint:{right}", &counts[1..]);
        t
    })
}

const ROUNDTRIP_BASE: QuiverSpec = QuiverSpec {
    min_objects: 1,
    max_objects: 3,
    max_arrows: 4,
    thin_percent: 30,
};

fn homology_digest<F: Field>(x: &ComplexRep<F>) -> String {
    match homology(x) {
        Ok(h) => h
            .dim_table()
            .iter()
            .map(|row| row.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("."))
            .collect::<Vec<_>>()
            .join("/"),
        Err(e) => format!("error: {e}"),
    }
}

/// `P⁻ : C~⁻ → C⁻` or `P⁺ : C~⁺ → C⁺` induced by the collapse `p`.
fn transported_cone(
    sep: &crate::glue::Cone,
    base: &crate::glue::Cone,
    p: &FunctorMap,
) -> Result<FunctorMap, crate::error::GlueError> {
    let (sy, ty) = (sep.pushout.span().y(), base.pushout.span().y());
    let same = FunctorMap::new(
        sy.clone(),
        ty.clone(),
        (0..sy.num_objects()).collect(),
        (0..sy.num_gens()).map(|g| ty.gen_mor(g)).collect(),
    )?;
    Ok(sep.pushout.induced(&base.pushout, p, &same)?)
}

struct RoundtripInstance<F: Field> {
    c: Arc<FinCategory>,
    ys: Vec<ObjId>,
    rd: ReflectionData,
    x: ComplexRep<F>,
    y: ComplexRep<F>,
}

fn roundtrip_instance<F: Field>(field: &F, i: usize, rng: &mut ChaCha8Rng) -> Result<RoundtripInstance<F>, String> {
    let c = random_category(ROUNDTRIP_BASE, rng);
    let ys = random_cone_data_objects(&c, i, rng);
    let rd = ReflectionData::new(&c, &ys).map_err(|e| e.to_string())?;
    let x = random_complex(&rd.minus.cat, field, -2, 2, 3, rng).map_err(|e| e.to_string())?;
    let y = random_complex(&rd.plus.cat, field, -2, 2, 3, rng).map_err(|e| e.to_string())?;
    Ok(RoundtripInstance { c, ys, rd, x, y })
}

fn roundtrip_trial<F: Field>(field: &F, i: usize, rng: &mut ChaCha8Rng) -> Result<Trial, String> {
    let RoundtripInstance { c, ys, rd, x, y } = roundtrip_instance(field, i, rng)?;
    let mut t = Trial::default();
    let cmp = rd.roundtrip_compare(&x).map_err(|e| e.to_string())?;
    t.check(cmp.quasi_iso, || json!({ "comparison": "X -> s+s-X", "ys": ys, "homology": homology_digest(&x) }));
    let dual = rd.dual_compare(&y).map_err(|e| e.to_string())?;
    t.check(dual.quasi_iso, || json!({ "comparison": "s-s+Y -> Y", "ys": ys, "homology": homology_digest(&y) }));
    let k0 = rd.k0_reflect_check(&x).map_err(|e| e.to_string())?;
    t.count("k0-checked", 1);
    t.count("k0-passed", k0 as usize);
    if has_repeats(&ys) {
        let so = separate_objects(&c, &ys).map_err(|e| e.to_string())?;
        let rs = ReflectionData::new(&so.cat, &so.ys).map_err(|e| e.to_string())?;
        let pm = transported_cone(&rs.minus, &rd.minus, &so.p).map_err(|e| e.to_string())?;
        let pp = transported_cone(&rs.plus, &rd.plus, &so.p).map_err(|e| e.to_string())?;
        let direct = cmp.reflected.restrict(&pp).map_err(|e| e.to_string())?;
        let separated = rs.reflect_minus(&x.restrict(&pm).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let ident: Vec<Vec<Matrix<F>>> = {
            let (lo, hi) = direct.window();
            (lo..=hi)
                .map(|n| (0..direct.base().num_objects()).map(|o| Matrix::identity(field, direct.dim(o, n))).collect())
                .collect()
        };
        let same = direct.window() == separated.window()
            && direct.dim_table() == separated.dim_table()
            && ChainMap::new(separated.clone(), direct.clone(), ident).is_ok_and(|m| m.is_quasi_iso());
        t.check(same, || json!({ "transport": "direct and separated reflections differ", "ys": ys }));
        t.count("transported", 1);
    }
    t.digest = format!("X[{}] s-X[{}]", homology_digest(&x), homology_digest(&cmp.reflected));
    Ok(t)
}

fn random_cone_data_objects(c: &FinCategory, i: usize, rng: &mut ChaCha8Rng) -> Vec<ObjId> {
    let mut ys = random_objects(c, 1, 3, rng);
    if i % 4 == 3 && ys.len() == 1 {
        ys.push(ys[0]);
    }
    ys
}

fn roundtrip<F: Field>(field: &F, seed: u64, count: usize) -> SuiteOutcome {
    run_trials("roundtrip", seed, count, |i, rng| roundtrip_trial(field, i, rng).unwrap_or_else(Trial::error))
}

/// Expected homology of `s⁻X` on `A₂ = (v → y)` for the three indecomposables.
fn bgp(seed: u64) -> SuiteOutcome {
    let f = PrimeField::new(5).expect("prime");
    let point = Arc::new(FinCategory::discrete(&["y"]));
    let rd = ReflectionData::new(&point, &[0]).expect("cones over a point");
    let (cm, cp) = (rd.minus.cat.clone(), rd.plus.cat.clone());
    let (v, ym) = (rd.minus.apex, rd.minus.inclusion.obj(0));
    let (w, yp) = (rd.plus.apex, rd.plus.inclusion.obj(0));
    type Case = (&'static str, Representation<PrimeField>, i32, Representation<PrimeField>);
    let cases = || -> Result<Vec<Case>, crate::error::RepError> {
        Ok(vec![
            ("P_v", Representation::projective(cm.clone(), f, v), 0, Representation::simple(cp.clone(), f, yp)?),
            ("S_v", Representation::simple(cm.clone(), f, v)?, 1, Representation::simple(cp.clone(), f, w)?),
            ("S_y", Representation::simple(cm.clone(), f, ym)?, 0, Representation::projective(cp.clone(), f, yp)),
        ])
    };
    let cases = match cases() {
        Ok(c) => c,
        Err(e) => return merge("bgp", seed, vec![Trial::error(e)]),
    };
    let trials: Vec<Trial> = cases
        .into_iter()
        .map(|(name, x, degree, expected)| {
            let mut t = Trial::default();
            let x = ComplexRep::concentrated(x, 0);
            let out = match rd.reflect_minus(&x) {
                Ok(o) => o,
                Err(e) => return Trial::error(e),
            };
            let h = match homology(&out) {
                Ok(h) => h,
                Err(e) => return Trial::error(e),
            };
            let total: usize = h.degrees.iter().map(|r| r.total_dim()).sum();
            let matched = total == expected.total_dim()
                && h.degree(degree)
                    .and_then(|here| find_rep_isomorphism(here, &expected, seed).ok().flatten())
                    .is_some();
            t.check(matched, || json!({ "input": name, "homology": homology_digest(&out) }));
            let k0 = rd.k0_reflect_check(&x).unwrap_or(false);
            t.check(k0, || json!({ "input": name, "k0": false }));
            t.digest = format!("{name} -> H{degree} {}", homology_digest(&out));
            t
        })
        .collect();
    let chi = run_trials("bgp-euler", seed, 200, |i, rng| {
        let inst = match roundtrip_instance(&f, i, rng) {
            Ok(v) => v,
            Err(e) => return Trial::error(e),
        };
        let out = match inst.rd.reflect_minus(&inst.x) {
            Ok(o) => o,
            Err(e) => return Trial::error(e),
        };
        let mut t = Trial::default();
        let inc = &inst.rd.minus.inclusion;
        let predicted: i64 = inst.ys.iter().map(|&y| inst.x.euler_characteristic(inc.obj(y))).sum::<i64>()
            - inst.x.euler_characteristic(inst.rd.minus.apex);
        let got = out.euler_characteristic(inst.rd.plus.apex);
        t.check(got == predicted, || json!({ "ys": inst.ys, "chi": got, "expected": predicted }));
        t.digest = format!("chi_w={got}");
        t
    });
    combine("bgp", seed, merge("bgp", seed, trials), chi, "euler")
}

/// Exhaustive clock checks for cycles of length `2..=max_n`.
fn clock(seed: u64, max_n: usize) -> SuiteOutcome {
    let trials = (2..=max_n.max(2))
        .map(|n| {
            let mut t = Trial::default();
            let all = all_orientations(n);
            let mut moves = 0;
            for q in &all {
                for i in 0..n {
                    if let Some(r) = reflect_at(q, i) {
                        moves += 1;
                        t.check(clock_counts(&r) == clock_counts(q) && clock_invariant(&r) == clock_invariant(q), || {
                            json!({ "orientation": q, "vertex": i })
                        });
                    }
                }
            }
            let mut pairs = 0;
            for q1 in &all {
                let (p, qq) = clock_counts(q1);
                let nf = clock_normal_form(p, qq);
                let to_nf = reflection_path(q1, &nf);
                t.check(to_nf.as_ref().and_then(|s| apply_reflections(q1, s)).as_ref() == Some(&nf), || {
                    json!({ "orientation": q1, "normal_form": nf })
                });
                for q2 in &all {
                    if clock_invariant(q1) != clock_invariant(q2) {
                        continue;
                    }
                    pairs += 1;
                    let conn = connect(q1, q2);
                    let reached = conn.as_ref().and_then(|k| apply_reflections(q1, &k.steps));
                    let want = conn.as_ref().map(|k| if k.mirrored { mirror(q2) } else { q2.clone() });
                    t.check(reached.is_some() && reached == want, || json!({ "from": q1, "to": q2 }));
                }
            }
            t.count("reflections", moves);
            t.count("pairs", pairs);
            t.digest = format!("n={n} {} orientations {pairs} pairs", all.len());
            t
        })
        .collect();
    merge("clock", seed, trials)
}

fn r_table(seed: u64) -> SuiteOutcome {
    let mut t = Trial::default();
    match crate::catcore::saturate(&crate::glue::r_presentation(), 64).finite() {
        Ok(r) => {
            t.check(r.num_objects() == 3, || json!({ "objects": r.num_objects() }));
            t.check(r.hom(1, 1).len() == 2, || json!({ "hom_1_1": r.hom(1, 1).len() }));
            let idem = r.hom(1, 1).iter().find(|&&e| !r.is_identity(e) && r.compose(e, e) == Some(e));
            t.check(idem.is_some(), || json!({ "idempotent": null }));
            t.check(r.hom(0, 2).iter().any(|&m| r.is_iso(m)), || json!({ "iso_0_2": false }));
            t.check(r == frozen_r(), || json!({ "frozen": "differs from saturation" }));
            t.digest = format!("{} morphisms, e = {}", r.num_morphisms(), idem.map(|&e| r.mor_name(e)).unwrap_or_default());
        }
        Err(e) => t = Trial::error(e),
    }
    merge("r-table", seed, vec![t])
}

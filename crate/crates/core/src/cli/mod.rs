//! Command dispatch and machine-readable reports.

pub mod text;

use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::amalgam::{entry, pushout_bounded, AllowableSequence, Equality, Leg};
use crate::catcore::{find_adjoint, full_subcategory, slice, AdjointSide, Bound, FinCategory, FunctorMap, ObjId, SliceSide};
use crate::error::CliError;
use crate::field::{Field, FieldChoice, Rationals};
use crate::glue::{
    attach_cone, cube_shapes, free_oriented_gluing, invertible_shapes, r_category, reflection_chain_shapes,
    separate_objects, separate_source_sink, separating_shape, CubeSpec, Direction,
};
use crate::homotopy::{homology, ComplexRep, ReflectionData};
use crate::linrep::{kan_extension, KanSide};
use crate::suites::{run_suite, SuiteConfig, Verdict, SUITES};

pub use text::{category_text, load_category, parse_cat, parse_crep, parse_rep, parse_span, write_cat, write_crep, write_rep, write_span};

pub const SCHEMA: &str = "reflekt/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Minus,
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KanArg {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SliceArg {
    Under,
    Over,
}

/// Named constructions accepted by `build`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Construct {
    CMinus,
    CPlus,
    DMinus,
    DPlus,
    SeparatingMinus,
    SeparatingPlus,
    SeparatedObjects,
    Gluing,
    Pushout,
    R,
    Cube,
    DoubleCube,
    InvertibleCube,
    ReflectionChain,
}

/// Finite categorical constructions, Kan extensions and reflection functors.
#[derive(Clone, Debug, Parser)]
#[command(name = "reflekt", version)]
pub struct CommandRequest {
    #[command(subcommand)]
    pub verb: Verb,
    /// Report format on stdout.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: OutputFormat,
    /// Scalar field such as F5, F32003 or Q.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Largest hom-set accepted while saturating input presentations.
    #[arg(long, default_value_t = 4096, global = true)]
    pub bound: usize,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Verb {
    /// Build a named construction and serialize the result.
    Build(BuildArgs),
    /// Apply a reflection functor to a complex.
    Reflect(ReflectArgs),
    /// Run a property suite, or decide equality of two words in a pushout.
    Check(CheckArgs),
    /// Compute a slice category of an inclusion or of a separation functor.
    Slice(SliceArgs),
    /// Kan-extend a representation along a full subcategory inclusion.
    Kan(KanArgs),
    /// Summarize any supported input file.
    Report(ReportArgs),
}

#[derive(Clone, Debug, Args)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub construct: Construct,
    /// Base category (`.cat`).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Second category for gluing (`.cat`).
    #[arg(long)]
    pub input2: Option<PathBuf>,
    /// Span file for `pushout`.
    #[arg(long)]
    pub span: Option<PathBuf>,
    /// Objects `y1,..,yn` of the base category.
    #[arg(long, value_delimiter = ',')]
    pub objects: Vec<String>,
    /// Gluing sources in the first category.
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<String>,
    /// Gluing targets in the second category.
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<String>,
    /// Size parameter for shape constructions.
    #[arg(long)]
    pub n: Option<usize>,
    /// Write the resulting category here as `.cat` text.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct ReflectArgs {
    #[arg(long, value_enum)]
    pub dir: Side,
    /// The category `C` (`.cat`).
    #[arg(long)]
    pub cat: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub objects: Vec<String>,
    /// Complex over `C⁻` for `minus`, over `C⁺` for `plus` (`.crep`).
    #[arg(long)]
    pub rep: PathBuf,
    /// Write the reflected complex here as `.crep` text.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct CheckArgs {
    /// Property suite to run.
    #[arg(long, conflicts_with = "span")]
    pub suite: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Instance count; each suite has its own default.
    #[arg(long)]
    pub count: Option<usize>,
    /// Span file whose pushout decides `--word` equality.
    #[arg(long, requires = "word")]
    pub span: Option<PathBuf>,
    /// Words such as `X:f,Y:g`, listed in application order; give two.
    #[arg(long, num_args = 1)]
    pub word: Vec<String>,
    /// Word length limit for the bounded equality search.
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
}

#[derive(Clone, Debug, Args)]
pub struct SliceArgs {
    #[arg(long)]
    pub cat: PathBuf,
    /// Objects of the full subcategory, or `y1,..,yn` with `--separation`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub objects: Vec<String>,
    /// Slice the separation functor `u⁻` or `u⁺` at its apex instead.
    #[arg(long, value_enum)]
    pub separation: Option<Side>,
    /// Object of the codomain to slice at.
    #[arg(long)]
    pub at: Option<String>,
    #[arg(long, value_enum, default_value = "under")]
    pub side: SliceArg,
}

#[derive(Clone, Debug, Args)]
pub struct KanArgs {
    #[arg(long)]
    pub cat: PathBuf,
    /// Objects of the full subcategory `A`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub objects: Vec<String>,
    /// Representation of `A` (`.rep`).
    #[arg(long)]
    pub rep: PathBuf,
    #[arg(long, value_enum)]
    pub side: KanArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct ReportArgs {
    pub input: PathBuf,
    /// Base category for `.rep` and `.crep` inputs.
    #[arg(long)]
    pub cat: Option<PathBuf>,
}

/// Outcome of a command.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: Value,
    pub outcome: Verdict,
    pub payload: Value,
    /// Files written by the command.
    pub outputs: Vec<(PathBuf, String)>,
    pub elapsed: Duration,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Unknown => 2,
        }
    }
}

fn read(path: &FsPath) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn objects(c: &FinCategory, names: &[String]) -> Result<Vec<ObjId>, CliError> {
    names.iter().map(|n| Ok(c.object(n.trim())?)).collect()
}

fn need<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn category_summary(c: &FinCategory) -> Value {
    let homs: Vec<Vec<usize>> = (0..c.num_objects())
        .map(|a| (0..c.num_objects()).map(|b| c.hom(a, b).len()).collect())
        .collect();
    json!({
        "objects": c.objects(),
        "generators": c.num_gens(),
        "morphisms": c.num_morphisms(),
        "hom_sizes": homs,
    })
}

fn category_payload(c: &FinCategory) -> Value {
    let mut v = category_summary(c);
    v["cat"] = Value::String(category_text(c));
    v
}

/// The field requested on the command line or through `REFLEKT_FIELD`.
fn requested_field(req: &CommandRequest) -> Result<Option<FieldChoice>, CliError> {
    match &req.field {
        Some(f) => Ok(Some(FieldChoice::parse(f)?)),
        None => match std::env::var("REFLEKT_FIELD") {
            Ok(v) if !v.trim().is_empty() => Ok(Some(FieldChoice::parse(&v)?)),
            _ => Ok(None),
        },
    }
}

/// Field of an input file, checked against an explicit request.
fn file_field(req: &CommandRequest, src: &str) -> Result<FieldChoice, CliError> {
    let f = text::field_header(src)?;
    if let Some(want) = requested_field(req)? {
        if want != f {
            return Err(CliError::Usage(format!("input is over {} but {} was requested", f.name(), want.name())));
        }
    }
    Ok(f)
}

fn homology_table<F: Field>(x: &ComplexRep<F>) -> Result<Value, CliError> {
    let h = homology(x)?;
    Ok(json!({ "lo": x.window().0, "objects": x.base().objects(), "dims": h.dim_table() }))
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

fn build(req: &CommandRequest, a: &BuildArgs) -> Result<(Value, Vec<(PathBuf, String)>), CliError> {
    let base = || -> Result<Arc<FinCategory>, CliError> { load_category(&read(need(&a.input, "input")?)?, req.bound) };
    let n = || a.n.ok_or_else(|| CliError::Usage("missing --n".into()));
    let mut extra = Map::new();
    let cat: Arc<FinCategory> = match a.construct {
        Construct::CMinus | Construct::CPlus => {
            let c = base()?;
            let dir = if a.construct == Construct::CMinus { Direction::Source } else { Direction::Sink };
            let cone = attach_cone(&c, &objects(&c, &a.objects)?, dir)?;
            extra.insert("apex".into(), json!(cone.cat.object_name(cone.apex)));
            cone.cat
        }
        Construct::DMinus | Construct::DPlus => {
            let c = base()?;
            let dir = if a.construct == Construct::DMinus { Direction::Source } else { Direction::Sink };
            let sep = separate_source_sink(&c, &objects(&c, &a.objects)?, dir)?;
            extra.insert("u".into(), json!(sep.u.obj_map().iter().map(|&o| sep.cone.cat.object_name(o)).collect::<Vec<_>>()));
            sep.d
        }
        Construct::SeparatingMinus => separating_shape(n()?, Direction::Source),
        Construct::SeparatingPlus => separating_shape(n()?, Direction::Sink),
        Construct::SeparatedObjects => {
            let c = base()?;
            let so = separate_objects(&c, &objects(&c, &a.objects)?)?;
            extra.insert("ys".into(), json!(so.ys.iter().map(|&o| so.cat.object_name(o)).collect::<Vec<_>>()));
            so.cat
        }
        Construct::Gluing => {
            let a1 = base()?;
            let a2 = load_category(&read(need(&a.input2, "input2")?)?, req.bound)?;
            let g = free_oriented_gluing(&a1, &a2, &objects(&a1, &a.s)?, &objects(&a2, &a.t)?)?;
            extra.insert("verified".into(), json!(g.verify().is_ok()));
            g.a
        }
        Construct::Pushout => {
            let span = parse_span(&read(need(&a.span, "span")?)?, req.bound)?;
            let r = pushout_bounded(&span, Bound { per_hom: req.bound, ..Bound::default() })?;
            extra.insert("amalgamation".into(), json!(r.verify_amalgamation().passed()));
            extra.insert("words".into(), r.to_json()["morphisms"].clone());
            r.z().clone()
        }
        Construct::R => r_category()?,
        Construct::Cube => cube_shapes(n()?, CubeSpec::Full)?.cat,
        Construct::DoubleCube => cube_shapes(n()?, CubeSpec::Double)?.cat,
        Construct::InvertibleCube => invertible_shapes(n()?)?.rn,
        Construct::ReflectionChain => {
            let c = base()?;
            let rs = reflection_chain_shapes(&c, &objects(&c, &a.objects)?)?;
            extra.insert("f_iso".into(), json!(rs.f_iso.is_some()));
            extra.insert("d_minus".into(), category_summary(&rs.d_minus));
            extra.insert("d_plus".into(), category_summary(&rs.d_plus));
            extra.insert(
                "pushouts".into(),
                json!(rs.pushouts.iter().map(|(k, r)| json!({ "name": k, "amalgamation": r.verify_amalgamation().passed() })).collect::<Vec<_>>()),
            );
            rs.f
        }
    };
    let mut payload = category_payload(&cat);
    for (k, v) in extra {
        payload[k.as_str()] = v;
    }
    let outputs = a.output.iter().map(|p| (p.clone(), category_text(&cat))).collect();
    Ok((payload, outputs))
}

fn reflect(req: &CommandRequest, a: &ReflectArgs) -> Result<(Value, Vec<(PathBuf, String)>), CliError> {
    let c = load_category(&read(&a.cat)?, req.bound)?;
    let ys = objects(&c, &a.objects)?;
    let rd = ReflectionData::new(&c, &ys)?;
    let src = read(&a.rep)?;
    let field = file_field(req, &src)?;
    with_field!(field, f => {
        let (from, to) = match a.dir {
            Side::Minus => (&rd.minus.cat, &rd.plus.cat),
            Side::Plus => (&rd.plus.cat, &rd.minus.cat),
        };
        let x = parse_crep(&src, from, &f)?;
        let y = match a.dir {
            Side::Minus => rd.reflect_minus(&x)?,
            Side::Plus => rd.reflect_plus(&x)?,
        };
        let out = write_crep(&y);
        let payload = json!({
            "category": category_summary(to),
            "input_homology": homology_table(&x)?,
            "homology": homology_table(&y)?,
            "crep": out,
        });
        Ok((payload, a.output.iter().map(|p| (p.clone(), out.clone())).collect()))
    })
}

/// Parse `X:f,Y:g` into a word of the pushout of `span`.
pub fn parse_word(span: &crate::amalgam::Span, text: &str) -> Result<AllowableSequence, CliError> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (leg, name) = part
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("word entry `{part}` is not LEG:morphism")))?;
        let leg = match leg.trim() {
            "X" => Leg::X,
            "Y" => Leg::Y,
            other => return Err(CliError::Usage(format!("unknown leg `{other}` (expected X or Y)"))),
        };
        out.push(entry(span, leg, name)?);
    }
    if out.is_empty() {
        return Err(CliError::Usage("empty word".into()));
    }
    Ok(AllowableSequence(out))
}

fn check(req: &CommandRequest, a: &CheckArgs) -> Result<(Verdict, Value), CliError> {
    if let Some(path) = &a.span {
        if a.word.len() != 2 {
            return Err(CliError::Usage("give exactly two --word values".into()));
        }
        let span = parse_span(&read(path)?, req.bound)?;
        let r = pushout_bounded(&span, Bound { per_hom: req.bound, ..Bound::default() })?;
        let (w1, w2) = (parse_word(&span, &a.word[0])?, parse_word(&span, &a.word[1])?);
        let eq = r.decide_equal(&w1, &w2, a.depth)?;
        let verdict = match eq {
            Equality::Equal => Verdict::Pass,
            Equality::Distinct => Verdict::Fail,
            Equality::Unknown(_) => Verdict::Unknown,
        };
        let payload = json!({
            "words": [r.format_word(&w1.0), r.format_word(&w2.0)],
            "equality": eq,
            "completeness": r.completeness(),
        });
        return Ok((verdict, payload));
    }
    let name = a
        .suite
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("missing --suite (one of {})", SUITES.join(", "))))?;
    let cfg = SuiteConfig {
        seed: a.seed,
        count: a.count,
        field: requested_field(req)?,
    };
    let out = run_suite(name, &cfg)?;
    let verdict = out.verdict();
    Ok((verdict, serde_json::to_value(&out).expect("serializable")))
}

fn slice_cmd(req: &CommandRequest, a: &SliceArgs) -> Result<(Verdict, Value), CliError> {
    let c = load_category(&read(&a.cat)?, req.bound)?;
    let objs = objects(&c, &a.objects)?;
    let side = match a.side {
        SliceArg::Under => SliceSide::Under,
        SliceArg::Over => SliceSide::Over,
    };
    let (u, default_at): (FunctorMap, Option<ObjId>) = match a.separation {
        Some(s) => {
            let dir = if s == Side::Minus { Direction::Source } else { Direction::Sink };
            let sep = separate_source_sink(&c, &objs, dir)?;
            (sep.u, Some(sep.cone.apex))
        }
        None => (full_subcategory(&c, &objs)?, None),
    };
    let at = match &a.at {
        Some(n) => u.cod().object(n)?,
        None => default_at.ok_or_else(|| CliError::Usage("missing --at".into()))?,
    };
    let sl = slice(&u, at, side)?;
    let projection = &sl.projection;
    let cat = Arc::new(sl.cat.clone());
    let left = find_adjoint(projection, AdjointSide::Left).is_some();
    let right = find_adjoint(projection, AdjointSide::Right).is_some();
    let mut payload = category_payload(&cat);
    payload["at"] = json!(u.cod().object_name(at));
    payload["projection_has_left_adjoint"] = json!(left);
    payload["projection_has_right_adjoint"] = json!(right);
    Ok((Verdict::Pass, payload))
}

fn kan(req: &CommandRequest, a: &KanArgs) -> Result<(Value, Vec<(PathBuf, String)>), CliError> {
    let b = load_category(&read(&a.cat)?, req.bound)?;
    let u = full_subcategory(&b, &objects(&b, &a.objects)?)?;
    let src = read(&a.rep)?;
    let field = file_field(req, &src)?;
    let side = match a.side {
        KanArg::Left => KanSide::Left,
        KanArg::Right => KanSide::Right,
    };
    with_field!(field, f => {
        let x = parse_rep(&src, u.dom(), &f)?;
        let ext = kan_extension(&u, &x, side)?;
        let out = write_rep(&ext.value);
        let payload = json!({
            "dims": ext.value.dims(),
            "objects": b.objects(),
            "sieve": u.is_sieve(),
            "cosieve": u.is_cosieve(),
            "rep": out,
        });
        Ok((payload, a.output.iter().map(|p| (p.clone(), out.clone())).collect()))
    })
}

fn report(req: &CommandRequest, a: &ReportArgs) -> Result<Value, CliError> {
    let src = read(&a.input)?;
    let base = || -> Result<Arc<FinCategory>, CliError> { load_category(&read(need(&a.cat, "cat")?)?, req.bound) };
    Ok(match text::sniff(&src) {
        text::FileKind::Category => {
            let p = parse_cat(&src)?;
            let c = crate::catcore::saturate(&p, req.bound).finite()?;
            let mut v = category_summary(&c);
            v["kind"] = json!("category");
            v["relations"] = json!(p.relations().len());
            v
        }
        text::FileKind::Span => {
            let span = parse_span(&src, req.bound)?;
            let r = pushout_bounded(&span, Bound { per_hom: req.bound, ..Bound::default() })?;
            let rep = r.verify_amalgamation();
            json!({
                "kind": "span",
                "pushout": category_summary(r.z()),
                "completeness": r.completeness(),
                "amalgamation": rep.passed(),
                "failures": rep.failures,
            })
        }
        text::FileKind::Rep => {
            let c = base()?;
            with_field!(file_field(req, &src)?, f => {
                let x = parse_rep(&src, &c, &f)?;
                json!({ "kind": "rep", "field": f.name(), "objects": c.objects(), "dims": x.dims() })
            })
        }
        text::FileKind::Complex => {
            let c = base()?;
            with_field!(file_field(req, &src)?, f => {
                let x = parse_crep(&src, &c, &f)?;
                json!({ "kind": "crep", "field": f.name(), "dims": x.dim_table(), "homology": homology_table(&x)? })
            })
        }
    })
}

fn echo(req: &CommandRequest) -> Value {
    let mut m = Map::new();
    let path = |p: &PathBuf| json!(p.display().to_string());
    let (verb, args): (&str, Value) = match &req.verb {
        Verb::Build(a) => (
            "build",
            json!({
                "construct": format!("{:?}", a.construct),
                "input": a.input.as_ref().map(path),
                "input2": a.input2.as_ref().map(path),
                "span": a.span.as_ref().map(path),
                "objects": a.objects,
                "s": a.s,
                "t": a.t,
                "n": a.n,
            }),
        ),
        Verb::Reflect(a) => (
            "reflect",
            json!({ "dir": format!("{:?}", a.dir).to_lowercase(), "cat": path(&a.cat), "objects": a.objects, "rep": path(&a.rep) }),
        ),
        Verb::Check(a) => (
            "check",
            json!({ "suite": a.suite, "seed": a.seed, "count": a.count, "span": a.span.as_ref().map(path), "word": a.word, "depth": a.depth }),
        ),
        Verb::Slice(a) => (
            "slice",
            json!({ "cat": path(&a.cat), "objects": a.objects, "separation": a.separation.map(|s| format!("{s:?}").to_lowercase()), "at": a.at, "side": format!("{:?}", a.side).to_lowercase() }),
        ),
        Verb::Kan(a) => (
            "kan",
            json!({ "cat": path(&a.cat), "objects": a.objects, "rep": path(&a.rep), "side": format!("{:?}", a.side).to_lowercase() }),
        ),
        Verb::Report(a) => ("report", json!({ "input": path(&a.input), "cat": a.cat.as_ref().map(path) })),
    };
    m.insert("verb".into(), json!(verb));
    m.insert("args".into(), args);
    m.insert("field".into(), json!(req.field));
    m.insert("bound".into(), json!(req.bound));
    Value::Object(m)
}

/// Dispatch a request. Failures become fail reports carrying the error.
pub fn run_command(req: &CommandRequest) -> Report {
    let start = Instant::now();
    let result: Result<(Verdict, Value, Vec<(PathBuf, String)>), CliError> = match &req.verb {
        Verb::Build(a) => build(req, a).map(|(p, o)| (Verdict::Pass, p, o)),
        Verb::Reflect(a) => reflect(req, a).map(|(p, o)| (Verdict::Pass, p, o)),
        Verb::Check(a) => check(req, a).map(|(v, p)| (v, p, Vec::new())),
        Verb::Slice(a) => slice_cmd(req, a).map(|(v, p)| (v, p, Vec::new())),
        Verb::Kan(a) => kan(req, a).map(|(p, o)| (Verdict::Pass, p, o)),
        Verb::Report(a) => report(req, a).map(|p| (Verdict::Pass, p, Vec::new())),
    };
    let (outcome, payload, outputs) = match result {
        Ok(v) => v,
        Err(e) => (Verdict::Fail, json!({ "error": e.to_string() }), Vec::new()),
    };
    Report {
        command: echo(req),
        outcome,
        payload,
        outputs,
        elapsed: start.elapsed(),
    }
}

fn text_lines(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in m {
                text_lines(out, k, x, indent + 2);
            }
        }
        Value::String(s) if s.contains('\n') => {
            out.push_str(&format!("{pad}{key}: |\n"));
            for l in s.lines() {
                out.push_str(&format!("{pad}  {l}\n"));
            }
        }
        Value::String(s) => out.push_str(&format!("{pad}{key}: {s}\n")),
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, x) in items.iter().enumerate() {
                text_lines(out, &format!("- {i}"), x, indent + 2);
            }
        }
        other => out.push_str(&format!("{pad}{key}: {other}\n")),
    }
}

/// Serialize a report. JSON output omits timing so that it is reproducible.
pub fn emit_report(r: &Report, format: OutputFormat) -> Vec<u8> {
    let outcome = serde_json::to_value(r.outcome).expect("serializable");
    match format {
        OutputFormat::Json => {
            let v = json!({
                "schema": SCHEMA,
                "command": r.command,
                "outcome": outcome,
                "payload": r.payload,
            });
            let mut s = serde_json::to_string_pretty(&v).expect("serializable");
            s.push('\n');
            s.into_bytes()
        }
        OutputFormat::Text => {
            let verb = r.command["verb"].as_str().unwrap_or("?");
            let mut s = format!("reflekt {verb}: {}\n", outcome.as_str().unwrap_or("?"));
            if let Value::Object(m) = &r.payload {
                for (k, v) in m {
                    text_lines(&mut s, k, v, 0);
                }
            }
            s.push_str(&format!("elapsed: {:.3}s\n", r.elapsed.as_secs_f64()));
            s.into_bytes()
        }
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let req = match CommandRequest::try_parse_from(args) {
        Ok(r) => r,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let mut report = run_command(&req);
    for (path, body) in std::mem::take(&mut report.outputs) {
        if let Err(e) = std::fs::write(&path, body) {
            report.outcome = Verdict::Fail;
            report.payload = json!({ "error": format!("{}: {e}", path.display()) });
        }
    }
    let _ = stdout.write_all(&emit_report(&report, req.format));
    report.exit_code()
}

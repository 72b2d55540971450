//! C interface to reflekt.
//!
//! Every fallible call returns a [`ReflektStatus`]; on failure the message
//! is kept per thread and read with [`reflekt_last_error`]. Handles are
//! opaque and released with their matching `_free` function. Strings
//! returned through out-parameters are owned by the caller and released
//! with [`reflekt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use reflekt::amalgam::{pushout_bounded, AmalgamResult, Equality};
use reflekt::catcore::{Bound, FinCategory, ObjId};
use reflekt::cli::text::field_header;
use reflekt::cli::{category_text, load_category, parse_crep, parse_span, parse_word, write_crep};
use reflekt::error::CliError;
use reflekt::field::{Field, FieldChoice, Rationals};
use reflekt::glue::{attach_cone, separate_source_sink, Direction};
use reflekt::homotopy::ReflectionData;
use reflekt::suites::{run_suite, SuiteConfig, Verdict};

/// Result of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReflektStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Field = 4,
    Category = 5,
    Amalgam = 6,
    Glue = 7,
    Representation = 8,
    Usage = 9,
    OutOfRange = 10,
    Panic = 11,
}

/// Which cone a construction attaches.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReflektDirection {
    /// A new source below the chosen objects.
    Minus = 0,
    /// A new sink above the chosen objects.
    Plus = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReflektVerdict {
    Pass = 0,
    Fail = 1,
    Unknown = 2,
}

/// A finite category with every morphism enumerated.
pub struct ReflektCategory(Arc<FinCategory>);

/// The pushout of a span of finite categories.
pub struct ReflektAmalgam(AmalgamResult);

struct Failure {
    status: ReflektStatus,
    message: String,
}

impl Failure {
    fn new(status: ReflektStatus, message: impl Into<String>) -> Self {
        Failure { status, message: message.into() }
    }
}

impl<E: Into<CliError>> From<E> for Failure {
    fn from(e: E) -> Self {
        let e = e.into();
        let status = match &e {
            CliError::Parse(_) => ReflektStatus::Parse,
            CliError::Field(_) => ReflektStatus::Field,
            CliError::Category(_) => ReflektStatus::Category,
            CliError::Amalgam(_) => ReflektStatus::Amalgam,
            CliError::Glue(_) => ReflektStatus::Glue,
            CliError::Rep(_) => ReflektStatus::Representation,
            CliError::Io { .. } | CliError::Usage(_) => ReflektStatus::Usage,
        };
        Failure::new(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', "\\0")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ReflektStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ReflektStatus::Ok
        }
        Ok(Err(fail)) => {
            set_error(&fail.message);
            fail.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal error: {msg}"));
            ReflektStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(ReflektStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure::new(ReflektStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(ReflektStatus::NullArgument, format!("{what} is null")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::new(ReflektStatus::NullArgument, format!("{what} is null")))
}

unsafe fn objects_arg<'a>(c: &FinCategory, p: *const usize, n: usize) -> Result<&'a [usize], Failure> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::new(ReflektStatus::NullArgument, "objects is null"));
    }
    let ys = std::slice::from_raw_parts(p, n);
    match ys.iter().find(|&&y| y >= c.num_objects()) {
        Some(y) => Err(Failure::new(ReflektStatus::OutOfRange, format!("object {y} out of range"))),
        None => Ok(ys),
    }
}

fn owned_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure::new(ReflektStatus::Usage, "output contains a nul byte"))
}

fn direction(d: ReflektDirection) -> Direction {
    match d {
        ReflektDirection::Minus => Direction::Source,
        ReflektDirection::Plus => Direction::Sink,
    }
}

fn new_category(c: Arc<FinCategory>) -> *mut ReflektCategory {
    Box::into_raw(Box::new(ReflektCategory(c)))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn reflekt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn reflekt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn reflekt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse and saturate a `.cat` presentation, allowing at most `bound`
/// morphisms per hom-set.
///
/// # Safety
/// `src` is a nul-terminated string and `out` points to writable storage.
#[no_mangle]
pub unsafe extern "C" fn reflekt_category_parse(src: *const c_char, bound: usize, out: *mut *mut ReflektCategory) -> ReflektStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let c = load_category(str_arg(src, "src")?, bound)?;
        *out = new_category(c);
        Ok(())
    })
}

/// # Safety
/// `c` is null or a handle from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn reflekt_category_free(c: *mut ReflektCategory) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn reflekt_category_num_objects(c: *const ReflektCategory) -> usize {
    c.as_ref().map_or(0, |c| c.0.num_objects())
}

/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn reflekt_category_num_morphisms(c: *const ReflektCategory) -> usize {
    c.as_ref().map_or(0, |c| c.0.num_morphisms())
}

/// Index of the object called `name`.
///
/// # Safety
/// `c` is a live handle, `name` a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn reflekt_category_object(c: *const ReflektCategory, name: *const c_char, out: *mut usize) -> ReflektStatus {
    guard(|| {
        let c = ref_arg(c, "category")?;
        let out = out_arg(out, "out")?;
        *out = c.0.object(str_arg(name, "name")?)?;
        Ok(())
    })
}

/// Number of morphisms from object `a` to object `b`.
///
/// # Safety
/// `c` is a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn reflekt_category_hom_size(c: *const ReflektCategory, a: usize, b: usize, out: *mut usize) -> ReflektStatus {
    guard(|| {
        let c = ref_arg(c, "category")?;
        let out = out_arg(out, "out")?;
        let n = c.0.num_objects();
        if a >= n || b >= n {
            return Err(Failure::new(ReflektStatus::OutOfRange, format!("objects {a}, {b} with {n} objects")));
        }
        *out = c.0.hom(a as ObjId, b as ObjId).len();
        Ok(())
    })
}

/// The category as `.cat` text.
///
/// # Safety
/// `c` is a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn reflekt_category_text(c: *const ReflektCategory, out: *mut *mut c_char) -> ReflektStatus {
    guard(|| {
        let c = ref_arg(c, "category")?;
        let out = out_arg(out, "out")?;
        *out = owned_string(category_text(&c.0))?;
        Ok(())
    })
}

/// Attach a cone over the objects `ys[0..n]`.
///
/// # Safety
/// `c` is a live handle, `ys` holds `n` indices, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn reflekt_category_cone(
    c: *const ReflektCategory,
    ys: *const usize,
    n: usize,
    dir: ReflektDirection,
    out: *mut *mut ReflektCategory,
) -> ReflektStatus {
    guard(|| {
        let c = ref_arg(c, "category")?;
        let out = out_arg(out, "out")?;
        let ys = objects_arg(&c.0, ys, n)?;
        *out = new_category(attach_cone(&c.0, ys, direction(dir))?.cat);
        Ok(())
    })
}

/// The category with the objects `ys[0..n]` split off along a new source or sink.
///
/// # Safety
/// `c` is a live handle, `ys` holds `n` indices, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn reflekt_category_separate(
    c: *const ReflektCategory,
    ys: *const usize,
    n: usize,
    dir: ReflektDirection,
    out: *mut *mut ReflektCategory,
) -> ReflektStatus {
    guard(|| {
        let c = ref_arg(c, "category")?;
        let out = out_arg(out, "out")?;
        let ys = objects_arg(&c.0, ys, n)?;
        *out = new_category(separate_source_sink(&c.0, ys, direction(dir))?.d);
        Ok(())
    })
}

/// Pushout of a span given as span-file text.
///
/// # Safety
/// `src` is a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn reflekt_amalgam_parse(src: *const c_char, bound: usize, out: *mut *mut ReflektAmalgam) -> ReflektStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let span = parse_span(str_arg(src, "src")?, bound)?;
        let r = pushout_bounded(&span, Bound { per_hom: bound, ..Bound::default() })?;
        *out = Box::into_raw(Box::new(ReflektAmalgam(r)));
        Ok(())
    })
}

/// # Safety
/// `a` is null or a handle from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn reflekt_amalgam_free(a: *mut ReflektAmalgam) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// The pushout category as a new handle.
///
/// # Safety
/// `a` is a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn reflekt_amalgam_category(a: *const ReflektAmalgam, out: *mut *mut ReflektCategory) -> ReflektStatus {
    guard(|| {
        let a = ref_arg(a, "amalgam")?;
        let out = out_arg(out, "out")?;
        *out = new_category(a.0.z().clone());
        Ok(())
    })
}

/// Decide whether two words such as `"X:f,Y:g"` name the same morphism,
/// searching words up to `depth` entries when no normal form is available.
///
/// # Safety
/// `a` is a live handle, both words are nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn reflekt_amalgam_equal(
    a: *const ReflektAmalgam,
    w1: *const c_char,
    w2: *const c_char,
    depth: usize,
    out: *mut ReflektVerdict,
) -> ReflektStatus {
    guard(|| {
        let a = ref_arg(a, "amalgam")?;
        let out = out_arg(out, "out")?;
        let span = a.0.span();
        let (w1, w2) = (parse_word(span, str_arg(w1, "w1")?)?, parse_word(span, str_arg(w2, "w2")?)?);
        *out = match a.0.decide_equal(&w1, &w2, depth)? {
            Equality::Equal => ReflektVerdict::Pass,
            Equality::Distinct => ReflektVerdict::Fail,
            Equality::Unknown(_) => ReflektVerdict::Unknown,
        };
        Ok(())
    })
}

fn reflect_text<F: Field>(rd: &ReflectionData, dir: ReflektDirection, src: &str, f: &F) -> Result<String, Failure> {
    let y = match dir {
        ReflektDirection::Minus => rd.reflect_minus(&parse_crep(src, &rd.minus.cat, f)?)?,
        ReflektDirection::Plus => rd.reflect_plus(&parse_crep(src, &rd.plus.cat, f)?)?,
    };
    Ok(write_crep(&y))
}

/// Reflect a complex of representations given as `.crep` text. `Minus`
/// takes a complex over the source cone to one over the sink cone and
/// `Plus` goes back.
///
/// # Safety
/// `c` is a live handle, `ys` holds `n` indices, `crep` is nul-terminated
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn reflekt_reflect(
    c: *const ReflektCategory,
    ys: *const usize,
    n: usize,
    dir: ReflektDirection,
    crep: *const c_char,
    out: *mut *mut c_char,
) -> ReflektStatus {
    guard(|| {
        let c = ref_arg(c, "category")?;
        let out = out_arg(out, "out")?;
        let ys = objects_arg(&c.0, ys, n)?;
        let src = str_arg(crep, "crep")?;
        let rd = ReflectionData::new(&c.0, ys)?;
        let text = match field_header(src)? {
            FieldChoice::Prime(f) => reflect_text(&rd, dir, src, &f),
            FieldChoice::Rational => reflect_text(&rd, dir, src, &Rationals),
        }?;
        *out = owned_string(text)?;
        Ok(())
    })
}

/// Run a named check suite. A `count` of zero selects the default size.
/// When `json` is non-null it receives the full outcome as JSON.
///
/// # Safety
/// `name` is nul-terminated, `verdict` writable, `json` null or writable.
#[no_mangle]
pub unsafe extern "C" fn reflekt_run_suite(
    name: *const c_char,
    seed: u64,
    count: usize,
    verdict: *mut ReflektVerdict,
    json: *mut *mut c_char,
) -> ReflektStatus {
    guard(|| {
        let verdict = out_arg(verdict, "verdict")?;
        let cfg = SuiteConfig { seed, count: (count > 0).then_some(count), field: None };
        let outcome = run_suite(str_arg(name, "name")?, &cfg)?;
        *verdict = match outcome.verdict() {
            Verdict::Pass => ReflektVerdict::Pass,
            Verdict::Fail => ReflektVerdict::Fail,
            Verdict::Unknown => ReflektVerdict::Unknown,
        };
        if let Some(json) = json.as_mut() {
            *json = owned_string(serde_json::to_string(&outcome).expect("serializable"))?;
        }
        Ok(())
    })
}

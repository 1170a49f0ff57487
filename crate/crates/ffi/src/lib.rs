//! C interface to `injcat`.
//!
//! Every fallible function returns an [`InjcatStatus`]. After a failure,
//! [`injcat_last_error`] describes it until the next call on the same thread.
//! Handles are opaque; release each with its `_free` function. Strings handed
//! out by the library are released with [`injcat_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use injcat::cohomology::cohomological_lower_bound;
use injcat::format::{Loader, MapJson, SimplicialMapJson};
use injcat::ic::oracle::brute_force_ic;
use injcat::ic::{ic_exact, Budget, IcError, IcResult, IcValue};
use injcat::pl::{curve_ic, CurveJson, PLCurve};
use injcat::space::SpaceMap;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InjcatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    BudgetExhausted = 4,
    Panic = 5,
}

/// Returned in place of an `IC` value when the map is not locally injective.
pub const INJCAT_IC_INFINITE: u64 = u64::MAX;

/// A continuous map between finite spaces.
pub struct InjcatMap {
    map: SpaceMap,
}

/// The outcome of [`injcat_ic`].
pub struct InjcatIcResult {
    result: IcResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Error(InjcatStatus, String);

impl Error {
    fn input(e: impl ToString) -> Self {
        Error(InjcatStatus::InvalidInput, e.to_string())
    }
}

impl From<IcError> for Error {
    fn from(e: IcError) -> Self {
        let status = match e {
            IcError::BudgetExceeded { .. } | IcError::CandidateExplosion(_) => InjcatStatus::BudgetExhausted,
            _ => InjcatStatus::InvalidInput,
        };
        Error(status, e.to_string())
    }
}

fn set_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("no interior nul"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Error>) -> InjcatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            InjcatStatus::Ok
        }
        Ok(Err(Error(status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(_) => {
            set_error(Some("internal panic".into()));
            InjcatStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(Error(InjcatStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Error(InjcatStatus::InvalidUtf8, e.to_string()))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Error> {
    p.as_mut().ok_or_else(|| Error(InjcatStatus::NullPointer, "null output pointer".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Error> {
    p.as_ref().ok_or_else(|| Error(InjcatStatus::NullPointer, "null handle".into()))
}

fn encode(v: IcValue) -> u64 {
    v.finite().map_or(INJCAT_IC_INFINITE, |k| k as u64)
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into the library from this thread.
#[no_mangle]
pub extern "C" fn injcat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn injcat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a map `{ "domain", "codomain", "assignment" }`. Spaces given as file
/// names are resolved against the working directory.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_map` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn injcat_map_from_json(json: *const c_char, out_map: *mut *mut InjcatMap) -> InjcatStatus {
    guard(|| {
        let slot = out(out_map)?;
        let j: MapJson = serde_json::from_str(text(json)?).map_err(Error::input)?;
        let map = Loader::new().map_from_json(&j, Path::new("./map.json")).map_err(Error::input)?;
        *slot = Box::into_raw(Box::new(InjcatMap { map }));
        Ok(())
    })
}

/// Reads a map file; spaces given as file names are resolved against the
/// map file's directory.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out_map` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn injcat_map_from_file(path: *const c_char, out_map: *mut *mut InjcatMap) -> InjcatStatus {
    guard(|| {
        let slot = out(out_map)?;
        let map = Loader::new().map(Path::new(text(path)?)).map_err(Error::input)?;
        *slot = Box::into_raw(Box::new(InjcatMap { map }));
        Ok(())
    })
}

/// # Safety
/// `map` must come from this library and not be used afterwards. NULL is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn injcat_map_free(map: *mut InjcatMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// # Safety
/// `map` must be a live handle; `domain` and `codomain` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn injcat_map_sizes(map: *const InjcatMap, domain: *mut usize, codomain: *mut usize) -> InjcatStatus {
    guard(|| {
        let m = &handle(map)?.map;
        *out(domain)? = m.domain().len();
        *out(codomain)? = m.codomain().len();
        Ok(())
    })
}

/// Exact `IC` with a search limit of `max_nodes` branch-and-bound nodes.
///
/// # Safety
/// `map` must be a live handle and `out_result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn injcat_ic(map: *const InjcatMap, max_nodes: u64, out_result: *mut *mut InjcatIcResult) -> InjcatStatus {
    guard(|| {
        let m = &handle(map)?.map;
        let slot = out(out_result)?;
        let result = ic_exact(m, &Budget::with_nodes(max_nodes))?;
        *slot = Box::into_raw(Box::new(InjcatIcResult { result }));
        Ok(())
    })
}

/// `IC` by exhaustive search, for domains of at most 20 points.
///
/// # Safety
/// `map` must be a live handle and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn injcat_ic_oracle(map: *const InjcatMap, value: *mut u64) -> InjcatStatus {
    guard(|| {
        let m = &handle(map)?.map;
        let slot = out(value)?;
        let v = brute_force_ic(m).ok_or_else(|| Error::input("domain too large for exhaustive search"))?;
        *slot = encode(v);
        Ok(())
    })
}

/// The `IC` value, or [`INJCAT_IC_INFINITE`].
///
/// # Safety
/// `result` must be a live handle and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn injcat_ic_value(result: *const InjcatIcResult, value: *mut u64) -> InjcatStatus {
    guard(|| {
        let r = &handle(result)?.result;
        *out(value)? = encode(r.value);
        Ok(())
    })
}

/// Number of sets in the certificate; 0 when `IC` is infinite.
///
/// # Safety
/// `result` must be a live handle and `count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn injcat_ic_certificate_len(result: *const InjcatIcResult, count: *mut usize) -> InjcatStatus {
    guard(|| {
        let r = &handle(result)?.result;
        *out(count)? = r.certificate.as_ref().map_or(0, |c| c.len());
        Ok(())
    })
}

/// The report `{ic, certificate, lower_bounds, nodes, seed}` as JSON. Free the
/// string with [`injcat_string_free`].
///
/// # Safety
/// `result` must be a live handle and `json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn injcat_ic_result_json(result: *const InjcatIcResult, seed: u64, json: *mut *mut c_char) -> InjcatStatus {
    guard(|| {
        let r = &handle(result)?.result;
        let slot = out(json)?;
        let s = CString::new(r.to_json(seed).to_string()).expect("JSON has no nul");
        *slot = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `result` must come from this library and not be used afterwards. NULL is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn injcat_ic_result_free(result: *mut InjcatIcResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `s` must be a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn injcat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `IC` of a closed plane polygon `{ "vertices": [[x, y], ...] }` from its
/// multiple points.
///
/// # Safety
/// `json` must be a NUL-terminated string and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn injcat_curve_ic(json: *const c_char, value: *mut u64) -> InjcatStatus {
    guard(|| {
        let slot = out(value)?;
        let j: CurveJson = serde_json::from_str(text(json)?).map_err(Error::input)?;
        let c = PLCurve::from_json(&j).map_err(Error::input)?;
        *slot = encode(curve_ic(&c).map_err(Error::input)?);
        Ok(())
    })
}

/// `nil(Ker f*)` of a simplicial map `{ "domain", "codomain", "assignment" }`,
/// and whether the hypotheses of the lower bound hold. `surjective` is the
/// caller's assertion that the realization is onto.
///
/// # Safety
/// `json` must be a NUL-terminated string; `nil` and `valid` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn injcat_cohomology_nil(json: *const c_char, surjective: bool, nil: *mut usize, valid: *mut bool) -> InjcatStatus {
    guard(|| {
        let j: SimplicialMapJson = serde_json::from_str(text(json)?).map_err(Error::input)?;
        let f = Loader::new()
            .simplicial_map_from_json(&j, Path::new("./map.json"))
            .map_err(Error::input)?;
        let lb = cohomological_lower_bound(&f, surjective);
        *out(nil)? = lb.nil.value;
        *out(valid)? = lb.valid;
        Ok(())
    })
}

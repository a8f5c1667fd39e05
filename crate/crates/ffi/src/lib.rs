//! C ABI over the core crate.
//!
//! Every function returns a [`GlStatus`]; on failure the message is kept in
//! a thread-local slot readable with [`gl_last_error`]. Objects are opaque
//! handles owned by the caller and released with the matching `_free`.
//! Strings handed out must be released with [`gl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gaugelike::lattice::{Lattice, LatticeSpec};
use gaugelike::model::{build_model, Hamiltonian};
use gaugelike::runner::{self, canonical_json, ModelSpec};
use gaugelike::spectral::{diagonal_symmetries, diagonalize, sector_partition, SolveOptions, Spectrum};
use gaugelike::symmetry::find_dual_sets;
use gaugelike::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Budget = 4,
    Symmetry = 5,
    Numerical = 6,
    BufferTooSmall = 7,
    Panic = 8,
    Other = 9,
}

pub struct GlLattice(Lattice);

pub struct GlModel {
    lattice: Lattice,
    h: Hamiltonian,
}

pub struct GlSpectrum(Spectrum);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GlStatus {
    match e {
        Error::Config(_)
        | Error::InvalidLattice(_)
        | Error::InvalidModel(_)
        | Error::InvalidDirection(_)
        | Error::SiteOutOfRange { .. }
        | Error::SizeMismatch(..) => GlStatus::Config,
        Error::Budget(_) => GlStatus::Budget,
        Error::SymmetryBroken { .. } | Error::NoDualPairs(_) | Error::NotBipartite(_) => GlStatus::Symmetry,
        Error::NotConverged { .. } | Error::Numerical(_) | Error::Sector(_) => GlStatus::Numerical,
        Error::Io(_) => GlStatus::Other,
    }
}

struct Fail(GlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GlStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            GlStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(GlStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail(GlStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_out<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(GlStatus::NullPointer, "null output pointer".into()));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(GlStatus::NullPointer, "null output pointer".into()));
    }
    let c = CString::new(s).map_err(|e| Fail(GlStatus::Other, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(GlStatus::NullPointer, "null handle".into()))
}

fn parse_json<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, Fail> {
    serde_json::from_str(s).map_err(|e| Fail(GlStatus::Config, e.to_string()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy of the last error message on this thread, or NULL when none.
/// Release with `gl_string_free`.
#[no_mangle]
pub extern "C" fn gl_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a lattice from a JSON spec such as
/// `{"kind":"parallelogram","L":3}`.
///
/// # Safety
/// `spec_json` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_lattice_new(spec_json: *const c_char, out: *mut *mut GlLattice) -> GlStatus {
    guard(|| {
        let spec: LatticeSpec = parse_json(read_str(spec_json)?)?;
        let l = Lattice::build(&spec)?;
        write_out(out, GlLattice(l))
    })
}

/// # Safety
/// `lattice` must be NULL or a handle from `gl_lattice_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gl_lattice_free(lattice: *mut GlLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// # Safety
/// `lattice` must be a live handle; `n_sites` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_lattice_n_sites(lattice: *const GlLattice, n_sites: *mut usize) -> GlStatus {
    guard(|| {
        let l = deref(lattice)?;
        let n = n_sites.as_mut().ok_or_else(|| Fail(GlStatus::NullPointer, "null output pointer".into()))?;
        *n = l.0.n_sites();
        Ok(())
    })
}

/// Builds a model on `lattice` from a JSON model spec such as
/// `{"kind":"pcm","couplings":{"jx":1,"jy":0.5}}`. The lattice is copied.
///
/// # Safety
/// `lattice` must be a live handle, `model_json` a valid string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn gl_model_new(
    lattice: *const GlLattice,
    model_json: *const c_char,
    out: *mut *mut GlModel,
) -> GlStatus {
    guard(|| {
        let l = deref(lattice)?;
        let m: ModelSpec = parse_json(read_str(model_json)?)?;
        let h = build_model(&l.0, m.kind, m.couplings, m.frame, &m.terms)?;
        write_out(out, GlModel { lattice: l.0.clone(), h })
    })
}

/// # Safety
/// `model` must be NULL or a handle from `gl_model_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gl_model_free(model: *mut GlModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle; `n_terms` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_model_n_terms(model: *const GlModel, n_terms: *mut usize) -> GlStatus {
    guard(|| {
        let m = deref(model)?;
        let n = n_terms.as_mut().ok_or_else(|| Fail(GlStatus::NullPointer, "null output pointer".into()))?;
        *n = m.h.terms().len();
        Ok(())
    })
}

/// Dual-pair certificate of the model as a JSON string.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable. Free the result
/// with `gl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn gl_certificate_json(model: *const GlModel, out: *mut *mut c_char) -> GlStatus {
    guard(|| {
        let m = deref(model)?;
        let c = find_dual_sets(&m.lattice, &m.h)?;
        write_string(out, canonical_json(&c.to_json()))
    })
}

/// Full spectrum, resolved into row sectors when `use_sectors` is nonzero
/// and the model has diagonal row strings.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_spectrum_new(model: *const GlModel, use_sectors: i32, out: *mut *mut GlSpectrum) -> GlStatus {
    guard(|| {
        let m = deref(model)?;
        let u = if use_sectors != 0 { diagonal_symmetries(&m.lattice, &m.h)? } else { vec![] };
        let part = sector_partition(&m.h, &u)?;
        let s = diagonalize(&m.h, Some(&part), &SolveOptions::default())?;
        write_out(out, GlSpectrum(s))
    })
}

/// # Safety
/// `spectrum` must be NULL or a handle from `gl_spectrum_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gl_spectrum_free(spectrum: *mut GlSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Number of eigenvalues held.
///
/// # Safety
/// `spectrum` must be a live handle; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gl_spectrum_len(spectrum: *const GlSpectrum, len: *mut usize) -> GlStatus {
    guard(|| {
        let s = deref(spectrum)?;
        let n = len.as_mut().ok_or_else(|| Fail(GlStatus::NullPointer, "null output pointer".into()))?;
        *n = s.0.sectors.iter().map(|x| x.eigenvalues.len()).sum();
        Ok(())
    })
}

/// Copies all eigenvalues, ascending, into `buf` of capacity `cap`.
///
/// # Safety
/// `spectrum` must be a live handle and `buf` must point to `cap` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn gl_spectrum_eigenvalues(spectrum: *const GlSpectrum, buf: *mut f64, cap: usize) -> GlStatus {
    guard(|| {
        let s = deref(spectrum)?;
        if buf.is_null() {
            return Err(Fail(GlStatus::NullPointer, "null buffer".into()));
        }
        let e = s.0.eigenvalues();
        if cap < e.len() {
            return Err(Fail(GlStatus::BufferTooSmall, format!("need {} doubles, got {cap}", e.len())));
        }
        ptr::copy_nonoverlapping(e.as_ptr(), buf, e.len());
        Ok(())
    })
}

/// Runs a full config document and returns the JSON record. `exit_code`
/// receives the CLI exit status for that record. Failures inside the run
/// are reported in the record, so this returns `Ok` unless the arguments
/// themselves are unusable.
///
/// # Safety
/// `config_json` must be a valid string; `record_out` and `exit_code` must
/// be writable. Free the record with `gl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn gl_run_json(config_json: *const c_char, record_out: *mut *mut c_char, exit_code: *mut i32) -> GlStatus {
    guard(|| {
        let raw: serde_json::Value = parse_json(read_str(config_json)?)?;
        let code = exit_code.as_mut().ok_or_else(|| Fail(GlStatus::NullPointer, "null output pointer".into()))?;
        let (_, outcome) = runner::run_value(raw);
        *code = outcome.record.exit_code().code();
        write_string(record_out, canonical_json(&outcome.record.to_json()))
    })
}

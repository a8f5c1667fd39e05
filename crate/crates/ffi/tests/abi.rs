use std::ffi::{CStr, CString};
use std::ptr;

use gaugelike_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { gl_string_free(s) };
    out
}

fn lattice(spec: &str) -> *mut GlLattice {
    let spec = CString::new(spec).unwrap();
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { gl_lattice_new(spec.as_ptr(), &mut l) }, GlStatus::Ok);
    l
}

fn model(l: *const GlLattice, spec: &str) -> *mut GlModel {
    let spec = CString::new(spec).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { gl_model_new(l, spec.as_ptr(), &mut m) }, GlStatus::Ok);
    m
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(gl_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn lattice_model_spectrum_round_trip() {
    let l = lattice(r#"{"kind":"parallelogram","L":2}"#);
    let mut n = 0usize;
    assert_eq!(unsafe { gl_lattice_n_sites(l, &mut n) }, GlStatus::Ok);
    assert_eq!(n, 4);
    let m = model(l, r#"{"kind":"pcm","couplings":{"jx":1.0,"jy":0.5}}"#);
    let mut terms = 0usize;
    assert_eq!(unsafe { gl_model_n_terms(m, &mut terms) }, GlStatus::Ok);
    assert_eq!(terms, 3);

    let mut cert = ptr::null_mut();
    assert_eq!(unsafe { gl_certificate_json(m, &mut cert) }, GlStatus::Ok);
    let cert: serde_json::Value = serde_json::from_str(&take(cert)).unwrap();
    assert_eq!(cert["M"], 2);

    let mut spec = ptr::null_mut();
    assert_eq!(unsafe { gl_spectrum_new(m, 1, &mut spec) }, GlStatus::Ok);
    let mut len = 0usize;
    assert_eq!(unsafe { gl_spectrum_len(spec, &mut len) }, GlStatus::Ok);
    assert_eq!(len, 16);
    let mut small = vec![0.0; 3];
    assert_eq!(unsafe { gl_spectrum_eigenvalues(spec, small.as_mut_ptr(), small.len()) }, GlStatus::BufferTooSmall);
    assert!(take(gl_last_error()).contains("need 16"));
    let mut e = vec![0.0; len];
    assert_eq!(unsafe { gl_spectrum_eigenvalues(spec, e.as_mut_ptr(), e.len()) }, GlStatus::Ok);
    assert!(e.windows(2).all(|w| w[0] <= w[1]));
    // bipartite PCM: spectrum mirrors about zero
    for (a, b) in e.iter().zip(e.iter().rev()) {
        assert!((a + b).abs() < 1e-10);
    }
    unsafe {
        gl_spectrum_free(spec);
        gl_model_free(m);
        gl_lattice_free(l);
    }
}

#[test]
fn errors_map_to_codes() {
    let mut l = ptr::null_mut();
    let bad = CString::new(r#"{"kind":"parallelogram"}"#).unwrap();
    assert_eq!(unsafe { gl_lattice_new(bad.as_ptr(), &mut l) }, GlStatus::Config);
    assert!(l.is_null());
    assert!(take(gl_last_error()).contains("L"));
    let junk = CString::new("{not json").unwrap();
    assert_eq!(unsafe { gl_lattice_new(junk.as_ptr(), &mut l) }, GlStatus::Config);
    assert_eq!(unsafe { gl_lattice_new(ptr::null(), &mut l) }, GlStatus::NullPointer);
    let ok = CString::new(r#"{"kind":"square_open","L":2}"#).unwrap();
    assert_eq!(unsafe { gl_lattice_new(ok.as_ptr(), ptr::null_mut()) }, GlStatus::NullPointer);
    let mut n = 0usize;
    assert_eq!(unsafe { gl_lattice_n_sites(ptr::null(), &mut n) }, GlStatus::NullPointer);
    let l = lattice(r#"{"kind":"square_open","L":2}"#);
    let mut m = ptr::null_mut();
    let spec = CString::new(r#"{"kind":"cubic_compass","couplings":{"jx":1,"jy":1,"jz":1}}"#).unwrap();
    assert_eq!(unsafe { gl_model_new(l, spec.as_ptr(), &mut m) }, GlStatus::Config);
    unsafe {
        gl_lattice_free(l);
        gl_lattice_free(ptr::null_mut());
        gl_string_free(ptr::null_mut());
    }
}

#[test]
fn run_json_reports_exit_codes() {
    let run = |doc: &str| {
        let c = CString::new(doc).unwrap();
        let mut rec = ptr::null_mut();
        let mut code = -1;
        assert_eq!(unsafe { gl_run_json(c.as_ptr(), &mut rec, &mut code) }, GlStatus::Ok);
        (code, serde_json::from_str::<serde_json::Value>(&take(rec)).unwrap())
    };
    let (code, rec) = run(r#"{"task":"certificate","lattice":{"kind":"parallelogram","L":3},"model":{"kind":"pcm","couplings":{"jx":1,"jy":0.5}}}"#);
    assert_eq!(code, 0);
    assert_eq!(rec["payload"]["M"], 3);
    assert_eq!(rec["payload"]["bound"], 8);
    let (code, rec) = run(r#"{"task":"census","lattice":{"kind":"parallelogram"},"model":{"kind":"pcm"}}"#);
    assert_eq!(code, 2);
    assert_eq!(rec["status"], "error");
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/gaugelike.h")).unwrap();
    for f in [
        "gl_version",
        "gl_last_error",
        "gl_string_free",
        "gl_lattice_new",
        "gl_lattice_free",
        "gl_lattice_n_sites",
        "gl_model_new",
        "gl_model_free",
        "gl_model_n_terms",
        "gl_certificate_json",
        "gl_spectrum_new",
        "gl_spectrum_free",
        "gl_spectrum_len",
        "gl_spectrum_eigenvalues",
        "gl_run_json",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct GlModel GlModel;"));
}

/// The header must compile as plain C when a compiler is around.
#[test]
fn header_is_valid_c() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"gaugelike.h\"\nint main(void) { GlStatus s = GL_STATUS_OK; GlModel *m = NULL; (void)m; return (int)s; }\n",
    )
    .unwrap();
    let out = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", concat!(env!("CARGO_MANIFEST_DIR"), "/include")])
        .arg(&src)
        .output();
    match out {
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(e) => eprintln!("skipping: no C compiler ({e})"),
    }
}

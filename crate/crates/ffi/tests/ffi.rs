use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use circletons_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(circletons_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn generate_and_read_back() {
    let ks = [1u32, 2];
    let mut curve = ptr::null_mut();
    let st = unsafe { circletons_generate(3, ks.as_ptr(), ks.len(), 3 * 1024, &mut curve) };
    assert_eq!(st, CircletonsStatus::Ok, "{}", last_error());
    let n = unsafe { circletons_curve_len(curve) };
    assert_eq!(n, 3 * 1024);

    let mut xyz = vec![0.0; 3 * n];
    let st = unsafe { circletons_curve_points(curve, xyz.as_mut_ptr(), xyz.len()) };
    assert_eq!(st, CircletonsStatus::Ok);
    assert_eq!(&xyz[..3], &[0.0, 0.0, 0.0]);

    let mut short = vec![0.0; n];
    let st = unsafe { circletons_curve_points(curve, short.as_mut_ptr(), short.len()) };
    assert_eq!(st, CircletonsStatus::BufferTooSmall);
    assert!(last_error().contains("need"));

    let st = unsafe { circletons_curve_curvature(curve, short.as_mut_ptr(), short.len()) };
    assert_eq!(st, CircletonsStatus::Ok);
    assert!((short[0] - 1.0).abs() < 1e-6);

    let mut s = CircletonsSummary::default();
    assert_eq!(unsafe { circletons_curve_summary(curve, &mut s) }, CircletonsStatus::Ok);
    assert!(s.closure_error < 1e-7);
    assert!((s.bending_energy - 6.0 * std::f64::consts::PI).abs() < 1e-6);
    assert!((s.period - 6.0 * std::f64::consts::PI).abs() < 1e-12);
    unsafe { circletons_curve_free(curve) };
}

#[test]
fn invalid_input_is_reported() {
    let mut curve = ptr::null_mut();
    let ks = [1u32];
    let st = unsafe { circletons_generate(1, ks.as_ptr(), 1, 1024, &mut curve) };
    assert_eq!(st, CircletonsStatus::InvalidArgument);
    assert!(curve.is_null());
    assert!(last_error().contains("ω − 1"));

    let st = unsafe { circletons_generate(2, ptr::null(), 1, 1024, &mut curve) };
    assert_eq!(st, CircletonsStatus::NullPointer);
    let st = unsafe { circletons_generate(2, ptr::null(), 0, 16, &mut curve) };
    assert_eq!(st, CircletonsStatus::InvalidArgument);

    assert_eq!(unsafe { circletons_curve_len(ptr::null()) }, 0);
    unsafe { circletons_curve_free(ptr::null_mut()) };
    let mut x = 0.0;
    assert_eq!(unsafe { circletons_curve_points(ptr::null(), &mut x, 1) }, CircletonsStatus::NullPointer);
}

#[test]
fn scalar_functions() {
    let mut a = 0.0;
    assert_eq!(unsafe { circletons_resonance_point(1, 2, &mut a) }, CircletonsStatus::Ok);
    assert!((a - 3f64.sqrt() / 2.0).abs() < 1e-15);
    assert_eq!(unsafe { circletons_resonance_point(2, 2, &mut a) }, CircletonsStatus::InvalidArgument);

    let mut k = 0.0;
    assert_eq!(unsafe { circletons_curvature(1, 2, 0.0, &mut k) }, CircletonsStatus::Ok);
    assert!((k - 1.0).abs() < 1e-14);
    assert_eq!(unsafe { circletons_curvature(3, 2, 0.0, &mut k) }, CircletonsStatus::InvalidArgument);
    assert_eq!(unsafe { circletons_curvature(1, 2, 0.0, ptr::null_mut()) }, CircletonsStatus::NullPointer);

    let mut c = 0u64;
    assert_eq!(unsafe { circletons_enumerate_count(5, 2, &mut c) }, CircletonsStatus::Ok);
    assert_eq!(c, 6);
    assert_eq!(unsafe { circletons_enumerate_count(5, 5, &mut c) }, CircletonsStatus::InvalidArgument);

    let v = unsafe { CStr::from_ptr(circletons_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/circletons.h")).unwrap();
    for name in [
        "circletons_generate",
        "circletons_curve_free",
        "circletons_curve_len",
        "circletons_curve_points",
        "circletons_curve_curvature",
        "circletons_curve_summary",
        "circletons_resonance_point",
        "circletons_curvature",
        "circletons_enumerate_count",
        "circletons_last_error",
        "typedef struct CircletonsCurve CircletonsCurve",
        "CIRCLETONS_STATUS_BUFFER_TOO_SMALL = 4",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

/// Compiles tests/smoke.c against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libcircletons_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let out = std::env::temp_dir().join(format!("circletons_smoke_{}", std::process::id()));
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = match Command::new(&cc)
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&out)
        .status()
    {
        Ok(s) => s,
        Err(e) => {
            eprintln!("skipping: no C compiler ({e})");
            return;
        }
    };
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("1024 12.566370 1"));
}

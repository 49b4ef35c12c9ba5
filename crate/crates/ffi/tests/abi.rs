use std::ffi::CStr;
use std::ptr;

use ness_core::liouvillian::{liouvillian_for, steady_state};
use ness_core::metrology::qfi_spectral_checked;
use ness_core::{BathParams, SystemParams};
use ness_ffi::*;

const SYSTEM: NessSystem = NessSystem {
    omega1: 1.0,
    omega2: 1.0,
    delta: 0.005,
    gamma1: 0.002,
    gamma2: 0.002,
};
const BATHS: NessBaths = NessBaths {
    t1: 0.2,
    t2: 0.8,
    mu1: 0.5,
    mu2: 0.5,
};

fn model() -> *mut NessModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ness_model_new(&SYSTEM, &BATHS, &mut m) }, NessStatus::Ok);
    assert!(!m.is_null());
    m
}

fn last_error() -> Option<String> {
    let p = ness_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn lifecycle() {
    let m = model();
    assert!(last_error().is_none());
    unsafe {
        assert_eq!(ness_model_set_delta(m, 0.01), NessStatus::Ok);
        ness_model_free(m);
        ness_model_free(ptr::null_mut());
    }
}

#[test]
fn null_pointers_are_reported() {
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(ness_model_new(ptr::null(), &BATHS, &mut m), NessStatus::NullPointer);
        assert!(m.is_null());
        assert_eq!(ness_model_new(&SYSTEM, ptr::null(), &mut m), NessStatus::NullPointer);
        assert_eq!(ness_model_new(&SYSTEM, &BATHS, ptr::null_mut()), NessStatus::NullPointer);
        let mut q = NessQfi::default();
        assert_eq!(ness_model_qfi(ptr::null(), 0.0, &mut q), NessStatus::NullPointer);
        let m = model();
        assert_eq!(ness_model_qfi(m, 0.0, ptr::null_mut()), NessStatus::NullPointer);
        let mut re = [0.0; 16];
        assert_eq!(
            ness_model_steady_state(m, re.as_mut_ptr(), ptr::null_mut(), ptr::null_mut()),
            NessStatus::NullPointer
        );
        ness_model_free(m);
    }
    assert!(last_error().unwrap().contains("NULL"));
}

#[test]
fn error_codes() {
    let mut m = ptr::null_mut();
    let bad = NessBaths { t1: -1.0, ..BATHS };
    unsafe {
        assert_eq!(ness_model_new(&SYSTEM, &bad, &mut m), NessStatus::InvalidParameter);
        assert!(m.is_null());
        assert!(last_error().is_some());

        let m = model();
        assert_eq!(ness_model_set_delta(m, f64::NAN), NessStatus::InvalidParameter);
        let mut q = NessQfi::default();
        assert_eq!(ness_model_qfi(m, 1e-300, &mut q), NessStatus::Step);
        assert_eq!(ness_model_qfi(m, 0.0, &mut q), NessStatus::Ok);
        assert!(last_error().is_none());
        ness_model_free(m);
    }
}

#[test]
fn agrees_with_core() {
    let params = SystemParams::new(1.0, 1.0, 0.005, 0.002, 0.002).unwrap();
    let baths = BathParams::new(0.2, 0.8, 0.5, 0.5).unwrap();
    let rho = steady_state(&liouvillian_for(&params, &baths).unwrap()).unwrap().rho;
    let q = qfi_spectral_checked(&params, &baths, None).unwrap();

    let m = model();
    let (mut re, mut im, mut res) = ([0.0; 16], [0.0; 16], 0.0);
    let mut fq = NessQfi::default();
    let mut report = NessReport::default();
    unsafe {
        assert_eq!(ness_model_steady_state(m, re.as_mut_ptr(), im.as_mut_ptr(), &mut res), NessStatus::Ok);
        assert_eq!(ness_model_qfi(m, -1.0, &mut fq), NessStatus::Ok);
        assert_eq!(ness_model_evaluate(m, 1, 42, &mut report), NessStatus::Ok);
        ness_model_free(m);
    }
    for r in 0..4 {
        for c in 0..4 {
            assert_eq!(re[4 * r + c], rho.matrix()[(r, c)].re);
            assert_eq!(im[4 * r + c], rho.matrix()[(r, c)].im);
        }
    }
    assert!(res < 1e-12);
    assert_eq!(fq.f_total, q.f_total);
    assert_eq!(report.qfi.f_total, q.f_total);
    assert_eq!(report.populations, rho.populations());
    assert!((report.i1 + report.i2).abs() < 1e-12);
    assert!(report.epr > 0.0);
    assert!(report.discord <= report.qmi + 1e-12);
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(ness_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ness.h")).unwrap();
    for name in [
        "ness_model_new",
        "ness_model_free",
        "ness_model_set_delta",
        "ness_model_steady_state",
        "ness_model_qfi",
        "ness_model_qfi_fidelity",
        "ness_model_evaluate",
        "ness_last_error_message",
        "ness_version",
        "typedef struct NessModel NessModel",
        "NESS_STATUS_RANK_CHANGE",
        "NESS_FLAG_NEGATIVE_EPR",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

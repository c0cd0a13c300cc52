use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use wcfpp_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = wcfpp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn norm_through_handles() {
    unsafe {
        let mut sp: *mut WcfppSpace = ptr::null_mut();
        assert_eq!(wcfpp_space_parse(cs("lin-ell1").as_ptr(), &mut sp), WcfppStatus::Ok);
        let x = [0.0, 0.0, 1.0];
        let mut v = 0.0;
        assert_eq!(wcfpp_norm(sp, x.as_ptr(), 3, &mut v), WcfppStatus::Ok);
        assert_eq!(v, 512.0 / 513.0);
        let bad = [f64::NAN];
        assert_eq!(wcfpp_norm(sp, bad.as_ptr(), 1, &mut v), WcfppStatus::InvalidVector);
        assert!(last_error().contains("non-finite"));
        wcfpp_space_free(sp);
    }
}

#[test]
fn errors_are_codes() {
    unsafe {
        let mut sp: *mut WcfppSpace = ptr::null_mut();
        assert_eq!(wcfpp_space_parse(cs("nope").as_ptr(), &mut sp), WcfppStatus::InvalidArgument);
        assert!(sp.is_null());
        assert!(last_error().contains("nope"));
        assert_eq!(wcfpp_space_parse(ptr::null(), &mut sp), WcfppStatus::NullPointer);
        let mut v = 0.0;
        assert_eq!(wcfpp_norm(ptr::null(), ptr::null(), 0, &mut v), WcfppStatus::NullPointer);
        wcfpp_space_free(ptr::null_mut());
    }
}

#[test]
fn summing_basis_constant() {
    unsafe {
        let mut seq: *mut WcfppSequence = ptr::null_mut();
        assert_eq!(wcfpp_sequence_new(ptr::null(), cs("summing").as_ptr(), 6, &mut seq), WcfppStatus::Ok);
        let mut e = WcfppEstimate {
            lower: 0.0,
            upper: 0.0,
            certified: false,
            method: WcfppMethod::Sampled,
        };
        assert_eq!(wcfpp_basis_constant(seq, 6, &mut e), WcfppStatus::Ok);
        assert!((e.lower - 2.0).abs() < 1e-9 && (e.upper - 2.0).abs() < 1e-9);
        assert!(e.certified);
        assert_eq!(e.method, WcfppMethod::ExtremePoints);
        wcfpp_sequence_free(seq);
    }
}

#[test]
fn map_apply_and_displacement() {
    unsafe {
        let mut m: *mut WcfppMap = ptr::null_mut();
        assert_eq!(wcfpp_map_build(cs("f0").as_ptr(), 10, ptr::null(), 0, &mut m), WcfppStatus::Ok);
        let t = [1.0, 0.0];
        let mut out = [0.0; 1];
        let mut len = 0;
        assert_eq!(
            wcfpp_map_apply(m, t.as_ptr(), 2, out.as_mut_ptr(), 1, &mut len),
            WcfppStatus::BufferTooSmall
        );
        assert_eq!(len, 2);
        let mut out = [9.0; 4];
        assert_eq!(wcfpp_map_apply(m, t.as_ptr(), 2, out.as_mut_ptr(), 4, &mut len), WcfppStatus::Ok);
        assert_eq!(&out[..len], &[0.0, 1.0]);

        let mut sp: *mut WcfppSpace = ptr::null_mut();
        wcfpp_space_parse(cs("ell1").as_ptr(), &mut sp);
        let mut v = 0.0;
        let mut arg = [0.0; 10];
        assert_eq!(wcfpp_min_displacement(m, sp, 10, &mut v, arg.as_mut_ptr()), WcfppStatus::Ok);
        assert!((v - 0.2).abs() < 1e-9);
        assert!(arg.iter().all(|a| (a - 0.1).abs() < 1e-9));
        wcfpp_map_free(m);

        let mut f: *mut WcfppMap = ptr::null_mut();
        assert_eq!(wcfpp_map_build(cs("f").as_ptr(), 4, ptr::null(), 0, &mut f), WcfppStatus::InvalidArgument);
        let al = [0.05, 0.025, 0.0125, 0.00625];
        assert_eq!(wcfpp_map_build(cs("f").as_ptr(), 4, al.as_ptr(), 4, &mut f), WcfppStatus::Ok);
        let mut sm: *mut WcfppSpace = ptr::null_mut();
        wcfpp_space_parse(cs("summing").as_ptr(), &mut sm);
        assert_eq!(wcfpp_min_displacement(f, sm, 4, &mut v, ptr::null_mut()), WcfppStatus::Ok);
        assert!(v > 0.0);
        wcfpp_map_free(f);
        wcfpp_space_free(sm);
        wcfpp_space_free(sp);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(wcfpp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/wcfpp.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["wcfpp_space_parse", "wcfpp_norm", "wcfpp_basis_constant", "wcfpp_map_apply", "WCFPP_STATUS_OK"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"wcfpp.h\"\nint main(void) { WcfppSpace *s = 0; return wcfpp_space_parse(\"c0\", &s) == WCFPP_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let inc = header.parent().unwrap();
    for (cc, lang) in [("cc", "c"), ("c++", "c++")] {
        match Command::new(cc).args(["-fsyntax-only", "-x", lang, "-I"]).arg(inc).arg(&src).output() {
            Ok(o) => assert!(o.status.success(), "{cc}: {}", String::from_utf8_lossy(&o.stderr)),
            Err(_) => eprintln!("{cc} not found; syntax check skipped"),
        }
    }
}

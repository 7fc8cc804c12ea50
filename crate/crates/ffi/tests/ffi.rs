use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use ffrank_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let mut needed = 0usize;
    unsafe {
        assert_eq!(ffrank_last_error(ptr::null_mut(), 0, &mut needed), FfrankStatus::Ok);
        let mut buf = vec![0 as c_char; needed];
        assert_eq!(ffrank_last_error(buf.as_mut_ptr(), buf.len(), ptr::null_mut()), FfrankStatus::Ok);
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn context(q: u32) -> *mut FfrankContext {
    let mut ctx = ptr::null_mut();
    assert_eq!(unsafe { ffrank_context_new(q, 6, &mut ctx) }, FfrankStatus::Ok);
    ctx
}

#[test]
fn curve_round_trip() {
    let ctx = context(5);
    let mut curve = ptr::null_mut();
    let (a, b) = (cs("1,2"), cs("3,0,1"));
    unsafe {
        assert_eq!(ffrank_curve_new(ctx, a.as_ptr(), b.as_ptr(), &mut curve), FfrankStatus::Ok);
        let (mut cond, mut deg, mut eps, mut rank) = (0usize, 0usize, 0i32, 0usize);
        assert_eq!(ffrank_curve_invariants(curve, &mut cond, &mut deg, &mut eps, &mut rank), FfrankStatus::Ok);
        assert_eq!((cond, deg, eps, rank), (6, 2, -1, 1));

        let mut needed = 0usize;
        assert_eq!(ffrank_curve_coefficients(curve, ptr::null_mut(), 0, &mut needed), FfrankStatus::Ok);
        assert_eq!(needed, 3);
        let mut small = [0i64; 2];
        assert_eq!(
            ffrank_curve_coefficients(curve, small.as_mut_ptr(), 2, ptr::null_mut()),
            FfrankStatus::BufferTooSmall
        );
        let mut c = [0i64; 3];
        assert_eq!(ffrank_curve_coefficients(curve, c.as_mut_ptr(), 3, ptr::null_mut()), FfrankStatus::Ok);
        assert_eq!(c, [1, 0, -25]);

        let mut z = [0f64; 4];
        assert_eq!(ffrank_curve_zeros(curve, z.as_mut_ptr(), 4, &mut needed), FfrankStatus::Ok);
        assert_eq!(needed, 4);
        for pair in z.chunks(2) {
            assert!((pair[0].hypot(pair[1]) - 5.0).abs() < 1e-9);
        }

        for n in 1..=4 {
            let (mut re, mut im, mut rhs) = (0.0, 0.0, 0.0);
            assert_eq!(ffrank_curve_power_sum(curve, n, &mut re, &mut im, &mut rhs), FfrankStatus::Ok);
            assert!((re - rhs).abs() < 1e-9 && im.abs() < 1e-9, "n={n}");
        }

        assert_eq!(ffrank_curve_json(curve, ptr::null_mut(), 0, &mut needed), FfrankStatus::Ok);
        let mut buf = vec![0 as c_char; needed];
        assert_eq!(ffrank_curve_json(curve, buf.as_mut_ptr(), needed, ptr::null_mut()), FfrankStatus::Ok);
        let json: serde_json::Value = serde_json::from_str(CStr::from_ptr(buf.as_ptr()).to_str().unwrap()).unwrap();
        assert_eq!(json["L"], serde_json::json!([1, 0, -25]));
        assert_eq!(json["analytic_rank"], 1);

        ffrank_curve_free(curve);
        ffrank_context_free(ctx);
    }
}

#[test]
fn error_codes() {
    let ctx = context(5);
    let mut curve = ptr::null_mut();
    unsafe {
        let zero = cs("0");
        assert_eq!(ffrank_curve_new(ctx, zero.as_ptr(), zero.as_ptr(), &mut curve), FfrankStatus::SingularCurve);
        assert!(curve.is_null());
        assert!(last_error().contains("singular"));

        let one = cs("1");
        assert_eq!(ffrank_curve_new(ctx, one.as_ptr(), one.as_ptr(), &mut curve), FfrankStatus::NegativeLDegree);

        let bad = cs("1,x");
        assert_eq!(ffrank_curve_new(ctx, bad.as_ptr(), one.as_ptr(), &mut curve), FfrankStatus::Parse);
        assert_eq!(ffrank_curve_new(ctx, ptr::null(), one.as_ptr(), &mut curve), FfrankStatus::NullArgument);
        assert_eq!(ffrank_curve_new(ptr::null(), one.as_ptr(), one.as_ptr(), &mut curve), FfrankStatus::NullArgument);

        let invalid = [0xffu8 as c_char, 0];
        assert_eq!(ffrank_curve_new(ctx, invalid.as_ptr(), one.as_ptr(), &mut curve), FfrankStatus::InvalidUtf8);

        let mut other = ptr::null_mut();
        assert_eq!(ffrank_context_new(4, 0, &mut other), FfrankStatus::InvalidField);
        assert_eq!(ffrank_context_new(5, 40, &mut other), FfrankStatus::BudgetExceeded);
        assert!(other.is_null());
        assert_eq!(ffrank_context_depth(ptr::null()), 0);

        let name = CStr::from_ptr(ffrank_status_name(FfrankStatus::BufferTooSmall));
        assert_eq!(name.to_str().unwrap(), "buffer too small");

        ffrank_curve_free(ptr::null_mut());
        ffrank_context_free(ctx);
    }
}

#[test]
fn gauss_and_jacobi() {
    unsafe {
        // degree-one P over q = 5: G(1) = √5 · (1/P) = √5
        let (v, p) = (cs("1"), cs("2,1"));
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(ffrank_gauss_sum(5, v.as_ptr(), p.as_ptr(), &mut re, &mut im), FfrankStatus::Ok);
        assert!((re - 5f64.sqrt()).abs() < 1e-12 && im.abs() < 1e-12);
        // q = 7: the classical Gauss sum is i√7
        assert_eq!(ffrank_gauss_sum(7, v.as_ptr(), p.as_ptr(), &mut re, &mut im), FfrankStatus::Ok);
        assert!(re.abs() < 1e-12 && (im.abs() - 7f64.sqrt()).abs() < 1e-12);

        let reducible = cs("0,0,1");
        assert_eq!(ffrank_gauss_sum(5, v.as_ptr(), reducible.as_ptr(), &mut re, &mut im), FfrankStatus::InvalidArgument);

        let mut s = 0;
        // (2/t) over F_5 is the Legendre symbol (2/5) = −1
        let (f, d) = (cs("2"), cs("0,1"));
        assert_eq!(ffrank_jacobi_symbol(5, f.as_ptr(), d.as_ptr(), &mut s), FfrankStatus::Ok);
        assert_eq!(s, -1);
        let t = cs("0,1");
        assert_eq!(ffrank_jacobi_symbol(5, t.as_ptr(), d.as_ptr(), &mut s), FfrankStatus::Ok);
        assert_eq!(s, 0);
    }
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ffrank.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["ffrank_context_new", "ffrank_curve_new", "ffrank_curve_coefficients", "FFRANK_STATUS_PANIC"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; syntax check skipped");
        return;
    };
    assert!(status.success());
}

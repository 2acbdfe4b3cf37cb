//! C ABI over the core engine.
//!
//! Conventions:
//!
//! * Handles (`DnciSignature`, `DnciElement`) are opaque; create them with
//!   the constructors here and release them with the matching `_free`.
//! * Every fallible call returns a [`DnciStatus`]; on anything other than
//!   `Ok` the thread-local message from [`dnci_last_error_message`]
//!   explains what happened.
//! * Strings returned through `*mut c_char` out-parameters are owned by
//!   the caller and must be released with [`dnci_string_free`]. Strings
//!   returned as `*const c_char` are borrowed and must not be freed.
//! * Structured results (normalization, K-groups, suite reports) come
//!   back as JSON documents, the same shapes the `dnci` CLI prints.
//!
//! Every entry point catches panics and converts them into
//! `DnciStatus::Panicked`, so no unwinding ever crosses the boundary.

use dnci_core::algebra::{adjoint, mul, normalize, theta, Element, Signature};
use dnci_core::deformation::{deformed_mul, DeformationContext};
use dnci_core::ktheory::kgroups;
use dnci_core::normkit::pal_norm;
use dnci_core::parse::{parse_expression, parse_word};
use dnci_core::phase::{Angle, AngleAssignment, Mode};
use dnci_core::representation::Truncation;
use dnci_core::suites::{run_suite, SuiteContext};
use num_rational::BigRational;
use serde_json::json;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result code of every fallible entry point.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DnciStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was structurally invalid (bad signature shape, bad
    /// truncation, unknown suite, …).
    InvalidArgument = 2,
    /// An expression failed to parse; the message carries the byte
    /// offset.
    ParseFailed = 3,
    /// The operation is not defined for the given input (for example a
    /// norm of a non-diagonal element).
    DomainError = 4,
    /// An internal invariant broke; the library caught the panic.
    Panicked = 5,
}

/// One rational angle entry: `phi_(i,j) = num/den` with `1 <= i < j <= n`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct DnciAngle {
    pub i: u32,
    pub j: u32,
    pub num: i64,
    pub den: i64,
}

/// One numeric angle entry for the residual-based mode.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct DnciNumericAngle {
    pub i: u32,
    pub j: u32,
    pub value: f64,
}

/// Opaque: a generator signature (counts plus angle assignment).
pub struct DnciSignature {
    inner: Signature,
}

/// Opaque: an element in canonical normal form.
pub struct DnciElement {
    inner: Element,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', "?");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(text).expect("nul bytes replaced"));
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

/// The message describing the most recent failure on this thread, or
/// null if the last call succeeded. Borrowed; valid until the next
/// library call on the same thread.
#[no_mangle]
pub extern "C" fn dnci_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(ptr::null())
    })
}

/// Library version as a static string; never free this.
#[no_mangle]
pub extern "C" fn dnci_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

fn guard(f: impl FnOnce() -> DnciStatus) -> DnciStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal panic".to_string());
            set_error(format!("internal panic: {message}"));
            DnciStatus::Panicked
        }
    }
}

unsafe fn sig_ref<'a>(sig: *const DnciSignature) -> Option<&'a Signature> {
    sig.as_ref().map(|s| &s.inner)
}

unsafe fn elem_ref<'a>(elem: *const DnciElement) -> Option<&'a Element> {
    elem.as_ref().map(|e| &e.inner)
}

fn give_element(out: *mut *mut DnciElement, element: Element) -> DnciStatus {
    unsafe {
        *out = Box::into_raw(Box::new(DnciElement { inner: element }));
    }
    clear_error();
    DnciStatus::Ok
}

fn give_string(out: *mut *mut c_char, text: String) -> DnciStatus {
    let text = text.replace('\0', "?");
    let c = CString::new(text).expect("nul bytes replaced");
    unsafe {
        *out = c.into_raw();
    }
    clear_error();
    DnciStatus::Ok
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, DnciStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(DnciStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|e| {
        set_error(format!("argument is not valid UTF-8: {e}"));
        DnciStatus::InvalidArgument
    })
}

/// Builds a signature with exact rational angles. Returns null on error
/// (see `dnci_last_error_message()`).
///
/// # Safety
/// `angles` must point to `angles_len` readable entries (or be null with
/// `angles_len == 0`).
#[no_mangle]
pub unsafe extern "C" fn dnci_signature_new_exact(
    n: u32,
    l: u32,
    angles: *const DnciAngle,
    angles_len: usize,
) -> *mut DnciSignature {
    let mut out: *mut DnciSignature = ptr::null_mut();
    let status = guard(|| {
        if angles.is_null() && angles_len > 0 {
            set_error("null angle array with nonzero length");
            return DnciStatus::NullPointer;
        }
        let entries = if angles_len == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(angles, angles_len)
        };
        let mut pairs = Vec::with_capacity(entries.len());
        for a in entries {
            if a.den == 0 {
                set_error(format!("zero denominator for phi_({},{})", a.i, a.j));
                return DnciStatus::InvalidArgument;
            }
            pairs.push((
                a.i as usize,
                a.j as usize,
                BigRational::new(a.num.into(), a.den.into()),
            ));
        }
        let assignment = match AngleAssignment::exact(n as usize, pairs) {
            Ok(v) => v,
            Err(e) => {
                set_error(e.to_string());
                return DnciStatus::InvalidArgument;
            }
        };
        match Signature::new(n as usize, l as usize, assignment) {
            Ok(sig) => {
                out = Box::into_raw(Box::new(DnciSignature { inner: sig }));
                clear_error();
                DnciStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                DnciStatus::InvalidArgument
            }
        }
    });
    let _ = status;
    out
}

/// Builds a signature with floating-point angles (numeric mode).
///
/// # Safety
/// `angles` must point to `angles_len` readable entries (or be null with
/// `angles_len == 0`).
#[no_mangle]
pub unsafe extern "C" fn dnci_signature_new_numeric(
    n: u32,
    l: u32,
    angles: *const DnciNumericAngle,
    angles_len: usize,
) -> *mut DnciSignature {
    let mut out: *mut DnciSignature = ptr::null_mut();
    guard(|| {
        if angles.is_null() && angles_len > 0 {
            set_error("null angle array with nonzero length");
            return DnciStatus::NullPointer;
        }
        let entries = if angles_len == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(angles, angles_len)
        };
        let pairs = entries
            .iter()
            .map(|a| (a.i as usize, a.j as usize, Angle::Real(a.value)))
            .collect();
        let assignment = match AngleAssignment::new(n as usize, pairs, Mode::Numeric) {
            Ok(v) => v,
            Err(e) => {
                set_error(e.to_string());
                return DnciStatus::InvalidArgument;
            }
        };
        match Signature::new(n as usize, l as usize, assignment) {
            Ok(sig) => {
                out = Box::into_raw(Box::new(DnciSignature { inner: sig }));
                clear_error();
                DnciStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                DnciStatus::InvalidArgument
            }
        }
    });
    out
}

/// Releases a signature handle. Null is ignored.
///
/// # Safety
/// `sig` must have come from a `dnci_signature_new_*` call and must not
/// be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dnci_signature_free(sig: *mut DnciSignature) {
    if !sig.is_null() {
        drop(Box::from_raw(sig));
    }
}

/// Releases an element handle. Null is ignored.
///
/// # Safety
/// `elem` must have come from this library and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn dnci_element_free(elem: *mut DnciElement) {
    if !elem.is_null() {
        drop(Box::from_raw(elem));
    }
}

/// Releases a string produced by this library. Null is ignored.
///
/// # Safety
/// `s` must have come from an out-parameter of this library.
#[no_mangle]
pub unsafe extern "C" fn dnci_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an expression into a canonical-form element.
///
/// # Safety
/// All pointers must be valid; `out` receives an owned handle on `Ok`.
#[no_mangle]
pub unsafe extern "C" fn dnci_parse(
    sig: *const DnciSignature,
    expr: *const c_char,
    out: *mut *mut DnciElement,
) -> DnciStatus {
    guard(|| {
        let (Some(sig), false) = (sig_ref(sig), out.is_null()) else {
            set_error("null argument");
            return DnciStatus::NullPointer;
        };
        let text = match read_str(expr) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_expression(text, sig) {
            Ok(element) => give_element(out, element),
            Err(e) => {
                set_error(e.to_string());
                DnciStatus::ParseFailed
            }
        }
    })
}

/// Canonical text form of an element; returns null on null input.
///
/// # Safety
/// `elem` must be a live element handle.
#[no_mangle]
pub unsafe extern "C" fn dnci_element_to_string(elem: *const DnciElement) -> *mut c_char {
    let Some(element) = elem_ref(elem) else {
        return ptr::null_mut();
    };
    CString::new(element.to_string().replace('\0', "?"))
        .expect("nul bytes replaced")
        .into_raw()
}

unsafe fn binary_op(
    sig: *const DnciSignature,
    a: *const DnciElement,
    b: *const DnciElement,
    out: *mut *mut DnciElement,
    f: impl FnOnce(&Signature, &Element, &Element) -> Element,
) -> DnciStatus {
    guard(|| {
        let (Some(sig), Some(a), Some(b), false) =
            (sig_ref(sig), elem_ref(a), elem_ref(b), out.is_null())
        else {
            set_error("null argument");
            return DnciStatus::NullPointer;
        };
        give_element(out, f(sig, a, b))
    })
}

unsafe fn unary_op(
    sig: *const DnciSignature,
    a: *const DnciElement,
    out: *mut *mut DnciElement,
    f: impl FnOnce(&Signature, &Element) -> Element,
) -> DnciStatus {
    guard(|| {
        let (Some(sig), Some(a), false) = (sig_ref(sig), elem_ref(a), out.is_null()) else {
            set_error("null argument");
            return DnciStatus::NullPointer;
        };
        give_element(out, f(sig, a))
    })
}

/// `out = a · b` in canonical form.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnci_mul(
    sig: *const DnciSignature,
    a: *const DnciElement,
    b: *const DnciElement,
    out: *mut *mut DnciElement,
) -> DnciStatus {
    binary_op(sig, a, b, out, mul)
}

/// `out = a + b`.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnci_add(
    sig: *const DnciSignature,
    a: *const DnciElement,
    b: *const DnciElement,
    out: *mut *mut DnciElement,
) -> DnciStatus {
    binary_op(sig, a, b, out, |_, x, y| x.add(y))
}

/// `out = a*` (the adjoint).
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnci_adjoint(
    sig: *const DnciSignature,
    a: *const DnciElement,
    out: *mut *mut DnciElement,
) -> DnciStatus {
    unary_op(sig, a, out, adjoint)
}

/// `out = θ(a)`: the projection onto the balanced (diagonal) part.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnci_theta(
    sig: *const DnciSignature,
    a: *const DnciElement,
    out: *mut *mut DnciElement,
) -> DnciStatus {
    unary_op(sig, a, out, theta)
}

/// `out = a ·_Θ b`: the deformed product over the zero-angle base.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnci_deformed_mul(
    sig: *const DnciSignature,
    a: *const DnciElement,
    b: *const DnciElement,
    out: *mut *mut DnciElement,
) -> DnciStatus {
    binary_op(sig, a, b, out, |s, x, y| {
        let ctx = DeformationContext::new(s.clone());
        deformed_mul(&ctx, x, y)
    })
}

/// Norm of a diagonal element (sums of `s^a s^{*a}`). Writes the value to
/// `out_value`; when `out_exact_sq` is non-null it receives the exact
/// squared norm as a rational string (or null when the squared norm is
/// irrational). Fails with `DomainError` off the diagonal.
///
/// # Safety
/// Handles must be live; `out_value` must be writable; `out_exact_sq`
/// may be null.
#[no_mangle]
pub unsafe extern "C" fn dnci_norm(
    sig: *const DnciSignature,
    a: *const DnciElement,
    out_value: *mut f64,
    out_exact_sq: *mut *mut c_char,
) -> DnciStatus {
    guard(|| {
        let (Some(sig), Some(a), false) = (sig_ref(sig), elem_ref(a), out_value.is_null()) else {
            set_error("null argument");
            return DnciStatus::NullPointer;
        };
        match pal_norm(sig, a) {
            Ok(norm) => {
                *out_value = norm.value;
                if !out_exact_sq.is_null() {
                    match norm.exact_sq {
                        Some(sq) => {
                            return give_string(out_exact_sq, sq.to_string());
                        }
                        None => *out_exact_sq = ptr::null_mut(),
                    }
                }
                clear_error();
                DnciStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                DnciStatus::DomainError
            }
        }
    })
}

/// Normalizes a product of generator letters; writes a JSON document
/// `{"phase": "...", "monomial": "..."}`.
///
/// # Safety
/// Handles and strings must be valid; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnci_normalize_json(
    sig: *const DnciSignature,
    word: *const c_char,
    out_json: *mut *mut c_char,
) -> DnciStatus {
    guard(|| {
        let (Some(sig), false) = (sig_ref(sig), out_json.is_null()) else {
            set_error("null argument");
            return DnciStatus::NullPointer;
        };
        let text = match read_str(word) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_word(text, sig) {
            Ok(w) => {
                let (phase, m) = normalize(sig, &w);
                let doc = json!({
                    "phase": phase.to_string(),
                    "monomial": m.to_string(),
                });
                give_string(out_json, doc.to_string())
            }
            Err(e) => {
                set_error(e.to_string());
                DnciStatus::ParseFailed
            }
        }
    })
}

/// K-group ranks for the shape `(n, l)` as JSON
/// `{"k0_rank": "...", "k1_rank": "...", "torsion_free": true}`.
///
/// # Safety
/// `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnci_kgroups_json(
    n: i64,
    l: i64,
    out_json: *mut *mut c_char,
) -> DnciStatus {
    guard(|| {
        if out_json.is_null() {
            set_error("null argument");
            return DnciStatus::NullPointer;
        }
        match kgroups(n, l) {
            Ok(groups) => {
                let doc = json!({
                    "k0_rank": groups.k0_rank.to_string(),
                    "k1_rank": groups.k1_rank.to_string(),
                    "torsion_free": groups.torsion_free,
                });
                give_string(out_json, doc.to_string())
            }
            Err(e) => {
                set_error(e.to_string());
                DnciStatus::InvalidArgument
            }
        }
    })
}

/// Runs one verification suite and writes its JSON report (the same
/// shape the CLI prints). The status only reflects whether the suite
/// ran; read `"pass"` from the report.
///
/// # Safety
/// Handles and strings must be valid; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dnci_run_suite_json(
    sig: *const DnciSignature,
    suite: *const c_char,
    cutoff: u32,
    band: u32,
    seed: u64,
    numeric: bool,
    out_json: *mut *mut c_char,
) -> DnciStatus {
    guard(|| {
        let (Some(sig), false) = (sig_ref(sig), out_json.is_null()) else {
            set_error("null argument");
            return DnciStatus::NullPointer;
        };
        let name = match read_str(suite) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let trunc = match Truncation::new(cutoff, band) {
            Ok(t) => t,
            Err(e) => {
                set_error(e.to_string());
                return DnciStatus::InvalidArgument;
            }
        };
        let ctx = SuiteContext::new(sig.clone(), trunc, seed, numeric);
        match run_suite(&ctx, name) {
            Ok(report) => give_string(
                out_json,
                serde_json::to_string(&report).expect("report serializes"),
            ),
            Err(e) => {
                set_error(e.to_string());
                DnciStatus::InvalidArgument
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    unsafe fn exact_sig() -> *mut DnciSignature {
        let angles = [DnciAngle {
            i: 1,
            j: 2,
            num: 1,
            den: 4,
        }];
        dnci_signature_new_exact(2, 1, angles.as_ptr(), 1)
    }

    unsafe fn parse_ok(sig: *const DnciSignature, text: &str) -> *mut DnciElement {
        let c = CString::new(text).unwrap();
        let mut out: *mut DnciElement = ptr::null_mut();
        assert_eq!(dnci_parse(sig, c.as_ptr(), &mut out), DnciStatus::Ok);
        assert!(!out.is_null());
        out
    }

    unsafe fn to_string(elem: *const DnciElement) -> String {
        let p = dnci_element_to_string(elem);
        assert!(!p.is_null());
        let s = CStr::from_ptr(p).to_str().unwrap().to_string();
        dnci_string_free(p);
        s
    }

    #[test]
    fn round_trip_through_the_c_abi() {
        unsafe {
            let sig = exact_sig();
            assert!(!sig.is_null());
            let a = parse_ok(sig, "s1 + 2*s2");
            let b = parse_ok(sig, "s1*");
            let mut prod: *mut DnciElement = ptr::null_mut();
            assert_eq!(dnci_mul(sig, a, b, &mut prod), DnciStatus::Ok);
            let text = to_string(prod);
            // Multiplying back by 1 must reproduce the same canonical text.
            let one = parse_ok(sig, "1");
            let reparsed = parse_ok(sig, &text);
            let mut again: *mut DnciElement = ptr::null_mut();
            assert_eq!(dnci_mul(sig, reparsed, one, &mut again), DnciStatus::Ok);
            assert_eq!(to_string(again), text);
            for e in [a, b, prod, one, reparsed, again] {
                dnci_element_free(e);
            }
            dnci_signature_free(sig);
        }
    }

    #[test]
    fn parse_errors_set_the_message() {
        unsafe {
            let sig = exact_sig();
            let bad = CString::new("s1^-1").unwrap();
            let mut out: *mut DnciElement = ptr::null_mut();
            assert_eq!(
                dnci_parse(sig, bad.as_ptr(), &mut out),
                DnciStatus::ParseFailed
            );
            let msg = dnci_last_error_message();
            assert!(!msg.is_null());
            let text = CStr::from_ptr(msg).to_str().unwrap();
            assert!(text.contains("unitary"), "message: {text}");
            dnci_signature_free(sig);
        }
    }

    #[test]
    fn norm_and_reports_flow_through() {
        unsafe {
            let sig = exact_sig();
            let x = parse_ok(sig, "2 - 2*s1 s1* + 3*s1 s1*");
            let mut value = 0.0f64;
            let mut exact: *mut c_char = ptr::null_mut();
            assert_eq!(dnci_norm(sig, x, &mut value, &mut exact), DnciStatus::Ok);
            assert_eq!(value, 3.0);
            assert_eq!(CStr::from_ptr(exact).to_str().unwrap(), "9");
            dnci_string_free(exact);

            // Off-diagonal elements are a domain error.
            let y = parse_ok(sig, "s1");
            assert_eq!(
                dnci_norm(sig, y, &mut value, ptr::null_mut()),
                DnciStatus::DomainError
            );

            let mut json_out: *mut c_char = ptr::null_mut();
            let suite = CString::new("ktheory-table").unwrap();
            assert_eq!(
                dnci_run_suite_json(sig, suite.as_ptr(), 6, 2, 1, false, &mut json_out),
                DnciStatus::Ok
            );
            let report: serde_json::Value =
                serde_json::from_str(CStr::from_ptr(json_out).to_str().unwrap()).unwrap();
            assert_eq!(report["pass"], true);
            dnci_string_free(json_out);

            let mut kj: *mut c_char = ptr::null_mut();
            assert_eq!(dnci_kgroups_json(4, 1, &mut kj), DnciStatus::Ok);
            let groups: serde_json::Value =
                serde_json::from_str(CStr::from_ptr(kj).to_str().unwrap()).unwrap();
            assert_eq!(groups["k0_rank"], "4");
            dnci_string_free(kj);

            dnci_element_free(x);
            dnci_element_free(y);
            dnci_signature_free(sig);
        }
    }

    #[test]
    fn normalization_json_matches_the_engine() {
        unsafe {
            let sig = exact_sig();
            let word = CString::new("s2 s1").unwrap();
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                dnci_normalize_json(sig, word.as_ptr(), &mut out),
                DnciStatus::Ok
            );
            let doc: serde_json::Value =
                serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
            assert_eq!(doc["phase"], "w[1,2]^-2");
            assert_eq!(doc["monomial"], "s1 u2");
            dnci_string_free(out);
            dnci_signature_free(sig);
        }
    }

    #[test]
    fn null_arguments_are_rejected_not_crashed() {
        unsafe {
            let mut out: *mut DnciElement = ptr::null_mut();
            assert_eq!(
                dnci_parse(ptr::null(), ptr::null(), &mut out),
                DnciStatus::NullPointer
            );
            assert!(dnci_element_to_string(ptr::null()).is_null());
            dnci_signature_free(ptr::null_mut());
            dnci_element_free(ptr::null_mut());
            dnci_string_free(ptr::null_mut());
            assert!(!dnci_version().is_null());
        }
    }
}

//! C ABI for the verification suites.
//!
//! Reports are returned as opaque handles; every entry point reports failure
//! through a status code, and the most recent error message is kept in
//! thread-local storage for retrieval with [`pf_last_error_message`].
//!
//! Strings returned by this library are heap-allocated, NUL-terminated, and
//! must be released with [`pf_string_free`]; reports must be released with
//! [`pf_report_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use pseudoform::orientation::OrientationModel;
use pseudoform::report::Report;
use pseudoform::suites::{
    report_parity, resolve_quad_order, verify_algebra, verify_calculus, verify_maxwell,
};
use pseudoform::Error;

/// Status code of every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An argument value is outside the supported range.
    InvalidArgument = 3,
    /// Mismatched dimensions, degrees, parities, or orientation models.
    ShapeMismatch = 4,
    /// A numerical precondition failed (singular map, open form, or an
    /// evaluation inside an excluded region).
    Numerical = 5,
    /// A measured sign could not be determined.
    Indeterminate = 6,
}

/// Orientation model selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfModel {
    /// Two-class model: orientation-reversing maps form one class.
    Standard = 0,
    /// Four-class model: time- and space-reversals are distinguished.
    Relativistic = 1,
}

/// Opaque report handle.
pub struct PfReport {
    inner: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn remember_error(message: String) {
    let message = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("invalid error message").expect("static CString"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn status_of(err: &Error) -> PfStatus {
    match err {
        Error::InvalidArgument(_) | Error::InvalidFrame(_) => PfStatus::InvalidArgument,
        Error::ModelMismatch(..)
        | Error::DimensionMismatch { .. }
        | Error::DegreeMismatch { .. }
        | Error::UnsupportedDegree { .. }
        | Error::ParityMismatch(..)
        | Error::ArityMismatch { .. } => PfStatus::ShapeMismatch,
        Error::Singular { .. }
        | Error::NotOrthonormal { .. }
        | Error::NotClosed { .. }
        | Error::ExcludedRegion { .. } => PfStatus::Numerical,
        Error::ParityIndeterminate { .. } => PfStatus::Indeterminate,
    }
}

/// Stores the report behind `out` or records the error, translating either
/// outcome into a status code.
///
/// # Safety
/// `out` must be valid for writing one pointer.
unsafe fn deliver(result: pseudoform::Result<Report>, out: *mut *mut PfReport) -> PfStatus {
    match result {
        Ok(report) => {
            unsafe { *out = Box::into_raw(Box::new(PfReport { inner: report })) };
            PfStatus::Ok
        }
        Err(err) => {
            let status = status_of(&err);
            remember_error(err.to_string());
            unsafe { *out = std::ptr::null_mut() };
            status
        }
    }
}

/// Reads a required C string argument.
///
/// # Safety
/// `text` must be NULL or point to a NUL-terminated string.
unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, PfStatus> {
    if text.is_null() {
        remember_error("string argument is NULL".to_string());
        return Err(PfStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(text) }.to_str().map_err(|_| {
        remember_error("string argument is not valid UTF-8".to_string());
        PfStatus::InvalidUtf8
    })
}

/// Runs the algebra suite with the given seed.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_verify_algebra(seed: u64, out: *mut *mut PfReport) -> PfStatus {
    if out.is_null() {
        remember_error("output pointer is NULL".to_string());
        return PfStatus::NullPointer;
    }
    unsafe { deliver(verify_algebra(seed), out) }
}

/// Runs the calculus suite. An `order` of zero selects the default
/// quadrature order (environment variable `PSEUDOFORM_QUAD_ORDER` or 8).
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_verify_calculus(
    order: u32,
    fd_step: f64,
    seed: u64,
    out: *mut *mut PfReport,
) -> PfStatus {
    if out.is_null() {
        remember_error("output pointer is NULL".to_string());
        return PfStatus::NullPointer;
    }
    let order = if order == 0 {
        resolve_quad_order(None)
    } else {
        order as usize
    };
    unsafe { deliver(verify_calculus(order, fd_step, seed), out) }
}

/// Runs the field-equation suite for a built-in configuration
/// ("plane-wave", "coulomb", or "constant") observed from a frame boosted
/// along the first spatial axis. An `order` of zero selects the default.
///
/// # Safety
/// `field` must point to a NUL-terminated string and `out` must be valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_verify_maxwell(
    field: *const c_char,
    frame_boost: f64,
    order: u32,
    out: *mut *mut PfReport,
) -> PfStatus {
    if out.is_null() {
        remember_error("output pointer is NULL".to_string());
        return PfStatus::NullPointer;
    }
    let field = match unsafe { read_str(field) } {
        Ok(text) => text,
        Err(status) => {
            unsafe { *out = std::ptr::null_mut() };
            return status;
        }
    };
    let order = if order == 0 {
        resolve_quad_order(None)
    } else {
        order as usize
    };
    unsafe { deliver(verify_maxwell(field, frame_boost, order), out) }
}

/// Measures the time-reflection parity table of a built-in configuration
/// under the chosen orientation model.
///
/// # Safety
/// `field` must point to a NUL-terminated string and `out` must be valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn pf_report_parity(
    model: PfModel,
    field: *const c_char,
    out: *mut *mut PfReport,
) -> PfStatus {
    if out.is_null() {
        remember_error("output pointer is NULL".to_string());
        return PfStatus::NullPointer;
    }
    let field = match unsafe { read_str(field) } {
        Ok(text) => text,
        Err(status) => {
            unsafe { *out = std::ptr::null_mut() };
            return status;
        }
    };
    let model = match model {
        PfModel::Standard => OrientationModel::Standard,
        PfModel::Relativistic => OrientationModel::Relativistic,
    };
    unsafe { deliver(report_parity(model, field), out) }
}

/// Returns 1 if every check in the report passed, 0 if any failed, and -1 if
/// the handle is NULL.
///
/// # Safety
/// `report` must be NULL or a handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn pf_report_pass(report: *const PfReport) -> i32 {
    match unsafe { report.as_ref() } {
        Some(handle) => i32::from(handle.inner.pass),
        None => -1,
    }
}

/// Number of checks in the report; 0 if the handle is NULL.
///
/// # Safety
/// `report` must be NULL or a handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn pf_report_check_count(report: *const PfReport) -> usize {
    match unsafe { report.as_ref() } {
        Some(handle) => handle.inner.checks.len(),
        None => 0,
    }
}

/// Serializes the report as JSON. Returns NULL if the handle is NULL or
/// serialization fails; release the string with [`pf_string_free`].
///
/// # Safety
/// `report` must be NULL or a handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn pf_report_json(report: *const PfReport) -> *mut c_char {
    let Some(handle) = (unsafe { report.as_ref() }) else {
        remember_error("report handle is NULL".to_string());
        return std::ptr::null_mut();
    };
    match handle.inner.to_json() {
        Ok(text) => match CString::new(text) {
            Ok(text) => text.into_raw(),
            Err(_) => {
                remember_error("report JSON contains an interior NUL".to_string());
                std::ptr::null_mut()
            }
        },
        Err(err) => {
            remember_error(err.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Renders the report as the same text the command-line tool prints.
/// Returns NULL if the handle is NULL; release with [`pf_string_free`].
///
/// # Safety
/// `report` must be NULL or a handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn pf_report_text(report: *const PfReport) -> *mut c_char {
    let Some(handle) = (unsafe { report.as_ref() }) else {
        remember_error("report handle is NULL".to_string());
        return std::ptr::null_mut();
    };
    match CString::new(handle.inner.render_text()) {
        Ok(text) => text.into_raw(),
        Err(_) => {
            remember_error("report text contains an interior NUL".to_string());
            std::ptr::null_mut()
        }
    }
}

/// Copies the most recent error message of the calling thread, or NULL if
/// no error has occurred; release with [`pf_string_free`].
#[no_mangle]
pub extern "C" fn pf_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|message| message.clone().into_raw())
            .unwrap_or(std::ptr::null_mut())
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `text` must be NULL or a string returned by this library, and must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pf_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

/// Releases a report handle. NULL is ignored.
///
/// # Safety
/// `report` must be NULL or a handle returned by this library, and must not
/// be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pf_report_free(report: *mut PfReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_report_round_trips() {
        let mut report: *mut PfReport = std::ptr::null_mut();
        let status = unsafe { pf_verify_algebra(20240915, &mut report) };
        assert_eq!(status, PfStatus::Ok);
        assert!(!report.is_null());
        assert_eq!(unsafe { pf_report_pass(report) }, 1);
        assert!(unsafe { pf_report_check_count(report) } > 5);
        let json = unsafe { pf_report_json(report) };
        assert!(!json.is_null());
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
        assert!(text.contains("\"suite\": \"algebra\""));
        unsafe {
            pf_string_free(json);
            pf_report_free(report);
        }
    }

    #[test]
    fn parity_report_carries_nine_checks() {
        let field = CString::new("plane-wave").unwrap();
        let mut report: *mut PfReport = std::ptr::null_mut();
        let status =
            unsafe { pf_report_parity(PfModel::Relativistic, field.as_ptr(), &mut report) };
        assert_eq!(status, PfStatus::Ok);
        assert_eq!(unsafe { pf_report_pass(report) }, 1);
        assert_eq!(unsafe { pf_report_check_count(report) }, 9);
        let text = unsafe { pf_report_text(report) };
        assert!(unsafe { CStr::from_ptr(text) }
            .to_str()
            .unwrap()
            .contains("parity/E"));
        unsafe {
            pf_string_free(text);
            pf_report_free(report);
        }
    }

    #[test]
    fn unknown_field_reports_invalid_argument() {
        let field = CString::new("nonsense").unwrap();
        let mut report: *mut PfReport = std::ptr::null_mut();
        let status = unsafe { pf_verify_maxwell(field.as_ptr(), 0.0, 0, &mut report) };
        assert_eq!(status, PfStatus::InvalidArgument);
        assert!(report.is_null());
        let message = pf_last_error_message();
        assert!(!message.is_null());
        let text = unsafe { CStr::from_ptr(message) }
            .to_str()
            .unwrap()
            .to_owned();
        assert!(text.contains("nonsense"));
        unsafe { pf_string_free(message) };
    }

    #[test]
    fn null_arguments_are_rejected() {
        assert_eq!(
            unsafe { pf_verify_algebra(1, std::ptr::null_mut()) },
            PfStatus::NullPointer
        );
        let mut report: *mut PfReport = std::ptr::null_mut();
        assert_eq!(
            unsafe { pf_verify_maxwell(std::ptr::null(), 0.0, 0, &mut report) },
            PfStatus::NullPointer
        );
        assert_eq!(unsafe { pf_report_pass(std::ptr::null()) }, -1);
        assert_eq!(unsafe { pf_report_check_count(std::ptr::null()) }, 0);
        assert!(unsafe { pf_report_json(std::ptr::null()) }.is_null());
        unsafe {
            pf_string_free(std::ptr::null_mut());
            pf_report_free(std::ptr::null_mut());
        }
    }
}

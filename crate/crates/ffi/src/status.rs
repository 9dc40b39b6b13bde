use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use varisk::Error;

/// Result of every fallible call. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariskStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8 or could not be parsed.
    InvalidArgument = 2,
    Domain = 3,
    InvalidParameter = 4,
    PremiseViolated = 5,
    OutOfRange = 6,
    NonConvergence = 7,
    /// An output buffer was too small; the required length was still written.
    BufferTooSmall = 8,
    /// The library panicked. This is a bug.
    Panic = 9,
}

impl From<&Error> for VariskStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => VariskStatus::Domain,
            Error::InvalidParameter(_) => VariskStatus::InvalidParameter,
            Error::PremiseViolated(_) => VariskStatus::PremiseViolated,
            Error::OutOfRange(_) => VariskStatus::OutOfRange,
            Error::NonConvergence(_) => VariskStatus::NonConvergence,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

/// A failure on its way across the boundary.
pub(crate) struct Failure {
    pub status: VariskStatus,
    pub message: String,
}

impl Failure {
    pub fn new(status: VariskStatus, message: impl Into<String>) -> Self {
        Failure { status, message: message.into() }
    }

    pub fn null(name: &str) -> Self {
        Failure::new(VariskStatus::NullPointer, format!("{name} is NULL"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { status: (&e).into(), message: format!("{}: {}", e.name(), e.detail()) }
    }
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `body`, records any failure as this thread's last error and turns
/// panics into [`VariskStatus::Panic`].
pub(crate) fn guard(body: impl FnOnce() -> Result<(), Failure>) -> VariskStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => VariskStatus::Ok,
        Ok(Err(f)) => {
            set_last_error(f.message);
            f.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            VariskStatus::Panic
        }
    }
}

/// Message of the last failed call on this thread, or NULL if none failed yet.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn varisk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Static, NUL-terminated name of a status code; "Unknown" for other values.
#[no_mangle]
pub extern "C" fn varisk_status_name(status: i32) -> *const c_char {
    let name: &'static [u8] = match status {
        0 => b"Ok\0",
        1 => b"NullPointer\0",
        2 => b"InvalidArgument\0",
        3 => b"DomainError\0",
        4 => b"InvalidParameter\0",
        5 => b"PremiseViolated\0",
        6 => b"OutOfRange\0",
        7 => b"NonConvergence\0",
        8 => b"BufferTooSmall\0",
        9 => b"Panic\0",
        _ => b"Unknown\0",
    };
    name.as_ptr().cast()
}

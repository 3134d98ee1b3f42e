//! C ABI over the augmentation engine.
//!
//! An engine is an opaque handle wrapping one augmentation policy. All
//! functions return a [`PpStatus`]; on failure, [`pp_last_error_message`]
//! holds a thread-local description of what went wrong. Augmentation itself
//! is pure: the output depends only on (samples, policy, seed), so engines
//! may be shared freely across threads.

use libc::c_char;
use phaseperturb::dsp::AudioBuffer;
use phaseperturb::pipeline::{augment_buffer, load_config, AugmentPolicy, PolicyName};
use phaseperturb::rng::RandomSource;
use phaseperturb::{io, Error};
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

/// Result codes of every C entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was malformed (bad UTF-8, unknown policy name).
    InvalidArgument = 2,
    /// Input data violates a precondition (empty signal, zero sample rate).
    InvalidInput = 3,
    /// Valid data in a configuration or codec this build does not handle.
    Unsupported = 4,
    /// Malformed file content.
    FormatError = 5,
    /// Bad key or value in a config file.
    ConfigError = 6,
    /// No inputs to process.
    EmptyInput = 7,
    IoError = 8,
    /// Internal failure (a panic was caught at the boundary).
    Internal = 9,
}

/// Opaque augmentation engine: one policy, ready to augment buffers.
pub struct PpEngine {
    policy: AugmentPolicy,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: PpStatus, message: &str) -> PpStatus {
    set_last_error(message);
    status
}

fn status_of(err: &Error) -> PpStatus {
    match err {
        Error::InvalidInput(_) => PpStatus::InvalidInput,
        Error::UnsupportedConfig(_) | Error::UnsupportedFormat(_) => PpStatus::Unsupported,
        Error::InvalidPolicy(_) => PpStatus::InvalidArgument,
        Error::FormatError { .. } => PpStatus::FormatError,
        Error::ConfigError(_) => PpStatus::ConfigError,
        Error::EmptyInput(_) => PpStatus::EmptyInput,
        Error::Io(_) => PpStatus::IoError,
    }
}

fn from_error(err: Error) -> PpStatus {
    fail(status_of(&err), &err.to_string())
}

/// Converts a required C string argument.
///
/// # Safety
/// `ptr` must be null or point to a NUL-terminated string.
unsafe fn required_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, PpStatus> {
    if ptr.is_null() {
        return Err(fail(PpStatus::NullPointer, &format!("{what} is null")));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        fail(
            PpStatus::InvalidArgument,
            &format!("{what} is not valid UTF-8"),
        )
    })
}

fn guard(body: impl FnOnce() -> PpStatus) -> PpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(
            PpStatus::Internal,
            "internal panic caught at the C boundary",
        ),
    }
}

/// Message describing the most recent failure on this thread. Never null;
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Creates an engine running `policy_name` with default parameters.
///
/// Policy names: `none`, `phaseaug_static`, `vtlp`, `phase_perturbation`,
/// `phase_perturbation+vtlp`, `specaug`, `phase_perturbation+specaug`.
/// On success `*out_engine` owns the engine; release it with
/// [`pp_engine_free`].
///
/// # Safety
/// `policy_name` must be a NUL-terminated string and `out_engine` a valid
/// destination pointer.
#[no_mangle]
pub unsafe extern "C" fn pp_engine_new(
    policy_name: *const c_char,
    out_engine: *mut *mut PpEngine,
) -> PpStatus {
    pp_engine_with_config(policy_name, std::ptr::null(), out_engine)
}

/// Creates an engine from a config file, then applies `policy_name` on top.
/// A null `config_path` means default parameters.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out_engine` must be a
/// valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn pp_engine_with_config(
    policy_name: *const c_char,
    config_path: *const c_char,
    out_engine: *mut *mut PpEngine,
) -> PpStatus {
    guard(|| {
        if out_engine.is_null() {
            return fail(PpStatus::NullPointer, "out_engine is null");
        }
        let name = match required_str(policy_name, "policy_name") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let parsed = match name.parse::<PolicyName>() {
            Ok(p) => p,
            Err(e) => return fail(PpStatus::InvalidArgument, &e.to_string()),
        };
        let mut policy = if config_path.is_null() {
            AugmentPolicy::default()
        } else {
            let path = match required_str(config_path, "config_path") {
                Ok(s) => s,
                Err(status) => return status,
            };
            match load_config(Path::new(path)) {
                Ok(p) => p,
                Err(e) => return from_error(e),
            }
        };
        policy.name = parsed;
        if let Err(e) = policy.validate() {
            return from_error(e);
        }
        *out_engine = Box::into_raw(Box::new(PpEngine { policy }));
        PpStatus::Ok
    })
}

/// Releases an engine. A null pointer is a no-op.
///
/// # Safety
/// `engine` must be null or a pointer returned by an engine constructor
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn pp_engine_free(engine: *mut PpEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Copies-per-input configured on this engine; 0 if `engine` is null.
///
/// # Safety
/// `engine` must be null or a live engine pointer.
#[no_mangle]
pub unsafe extern "C" fn pp_engine_copies_per_input(engine: *const PpEngine) -> u32 {
    if engine.is_null() {
        return 0;
    }
    (*engine).policy.copies_per_input
}

/// Augments `len` samples into `out_samples` (also `len` values).
///
/// Samples are amplitudes, nominally in [-1, 1]. The output length always
/// equals the input length, and the result is a pure function of
/// (samples, policy, seed).
///
/// # Safety
/// `samples` must point to `len` readable doubles and `out_samples` to
/// `len` writable doubles; the ranges must not overlap.
#[no_mangle]
pub unsafe extern "C" fn pp_engine_augment_buffer(
    engine: *const PpEngine,
    samples: *const f64,
    len: usize,
    sample_rate: u32,
    seed: u64,
    out_samples: *mut f64,
) -> PpStatus {
    guard(|| {
        if engine.is_null() || samples.is_null() || out_samples.is_null() {
            return fail(
                PpStatus::NullPointer,
                "engine, samples and out_samples must be non-null",
            );
        }
        let input = std::slice::from_raw_parts(samples, len);
        let audio = match AudioBuffer::new(input.to_vec(), sample_rate) {
            Ok(a) => a,
            Err(e) => return from_error(e),
        };
        let mut rng = RandomSource::new(seed);
        match augment_buffer(&audio, &(*engine).policy, &mut rng) {
            Ok(result) => {
                debug_assert_eq!(result.len(), len);
                std::ptr::copy_nonoverlapping(result.samples().as_ptr(), out_samples, len);
                PpStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Reads a WAV file, augments it and writes the result, preserving the
/// input's bit depth. On success `*out_clipped` (if non-null) receives the
/// number of samples clipped while encoding.
///
/// # Safety
/// Path arguments must be NUL-terminated strings; `out_clipped` must be
/// null or a valid destination pointer.
#[no_mangle]
pub unsafe extern "C" fn pp_engine_augment_wav(
    engine: *const PpEngine,
    input_path: *const c_char,
    output_path: *const c_char,
    seed: u64,
    out_clipped: *mut u64,
) -> PpStatus {
    guard(|| {
        if engine.is_null() {
            return fail(PpStatus::NullPointer, "engine is null");
        }
        let input = match required_str(input_path, "input_path") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let output = match required_str(output_path, "output_path") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let (audio, meta) = match io::read_wav(Path::new(input)) {
            Ok(v) => v,
            Err(e) => return from_error(e),
        };
        let mut rng = RandomSource::new(seed);
        let augmented = match augment_buffer(&audio, &(*engine).policy, &mut rng) {
            Ok(a) => a,
            Err(e) => return from_error(e),
        };
        match io::write_wav(Path::new(output), &augmented, meta.bit_depth) {
            Ok(clipped) => {
                if !out_clipped.is_null() {
                    *out_clipped = clipped;
                }
                PpStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

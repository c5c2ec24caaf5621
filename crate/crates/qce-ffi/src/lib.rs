//! C ABI for the similarity-index library.
//!
//! Conventions:
//!
//! * Scales and benchmarks are opaque handles created and freed here; never
//!   free them with anything but the matching `*_free` function.
//! * Fallible calls return a [`QceStatus`] and write results through out
//!   pointers, which are untouched on failure.
//! * Strings returned by the library are NUL-terminated, UTF-8, and owned
//!   by the caller; release them with [`qce_string_free`].
//!
//! The C header is generated into `include/qce.h` at build time.

use std::ffi::{c_char, CStr, CString};
use std::ptr;
use std::slice;

use qce::metrics::{
    capsi, comsi, l1_distance, similarity_benchmark_relative, similarity_fixed_range, socsi,
    Benchmark, FoundationScale, FoundationVector, WeightVector, CAPITALISM_POSITION,
    COMMUNISM_POSITION, SCANDINAVIAN_POSITION,
};
use qce::Error;

/// Result of a fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QceStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// An argument failed validation (bad weights, bad name, bad scale).
    InvalidArgument = 2,
    /// Vector, benchmark, scale, or weight lengths disagree.
    DimensionMismatch = 3,
    /// A score lies outside its dimension's admissible range.
    OutOfRange = 4,
    /// The benchmark admits no distance in some dimension.
    DegenerateDimension = 5,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 6,
}

fn status_of(err: &Error) -> QceStatus {
    match err {
        Error::DimensionMismatch { .. } => QceStatus::DimensionMismatch,
        Error::ScoreOutOfRange { .. } => QceStatus::OutOfRange,
        Error::DegenerateDimension { .. } => QceStatus::DegenerateDimension,
        _ => QceStatus::InvalidArgument,
    }
}

/// Opaque handle to a foundation scale.
pub struct QceScale(FoundationScale);

/// Opaque handle to a named benchmark position.
pub struct QceBenchmark(Benchmark);

/// The standard benchmark positions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QceBuiltin {
    Capitalism = 0,
    Communism = 1,
    ScandinavianSocialism = 2,
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn qce_status_message(status: QceStatus) -> *const c_char {
    let message: &'static [u8] = match status {
        QceStatus::Ok => b"ok\0",
        QceStatus::NullArgument => b"required pointer argument was NULL\0",
        QceStatus::InvalidArgument => b"invalid argument\0",
        QceStatus::DimensionMismatch => b"dimension mismatch\0",
        QceStatus::OutOfRange => b"score out of range\0",
        QceStatus::DegenerateDimension => b"degenerate benchmark dimension\0",
        QceStatus::InvalidUtf8 => b"string argument was not valid UTF-8\0",
    };
    message.as_ptr().cast()
}

/// The default scale: three dimensions, each spanning [0, 10].
#[no_mangle]
pub extern "C" fn qce_scale_default() -> *mut QceScale {
    Box::into_raw(Box::new(QceScale(FoundationScale::default())))
}

/// A scale with `dims` identical `[min, max]` dimensions. NULL when the
/// range is invalid or `dims` is zero.
#[no_mangle]
pub extern "C" fn qce_scale_uniform(dims: usize, min: f64, max: f64) -> *mut QceScale {
    match FoundationScale::uniform(dims, min, max) {
        Ok(scale) => Box::into_raw(Box::new(QceScale(scale))),
        Err(_) => ptr::null_mut(),
    }
}

/// Number of dimensions; 0 for NULL.
///
/// # Safety
/// `scale` must be NULL or a live handle from a `qce_scale_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn qce_scale_dims(scale: *const QceScale) -> usize {
    scale.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `scale` must be NULL or a handle from a `qce_scale_*` constructor that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn qce_scale_free(scale: *mut QceScale) {
    if !scale.is_null() {
        drop(Box::from_raw(scale));
    }
}

/// One of the standard benchmarks on the default scale.
#[no_mangle]
pub extern "C" fn qce_benchmark_builtin(which: QceBuiltin) -> *mut QceBenchmark {
    let (name, position) = match which {
        QceBuiltin::Capitalism => ("capitalism", CAPITALISM_POSITION),
        QceBuiltin::Communism => ("communism", COMMUNISM_POSITION),
        QceBuiltin::ScandinavianSocialism => ("scandinavian_socialism", SCANDINAVIAN_POSITION),
    };
    let vector = FoundationVector::new(position.to_vec(), &FoundationScale::default())
        .expect("builtin positions are valid");
    let benchmark = Benchmark::new(name, vector).expect("builtin names are valid");
    Box::into_raw(Box::new(QceBenchmark(benchmark)))
}

/// Create a benchmark from `len` coordinates validated against `scale`.
///
/// # Safety
/// `name` must be a NUL-terminated string, `position` must point to `len`
/// doubles, `scale` must be a live scale handle, and `out` must be a valid
/// destination pointer.
#[no_mangle]
pub unsafe extern "C" fn qce_benchmark_new(
    name: *const c_char,
    position: *const f64,
    len: usize,
    scale: *const QceScale,
    out: *mut *mut QceBenchmark,
) -> QceStatus {
    if name.is_null() || position.is_null() || scale.is_null() || out.is_null() {
        return QceStatus::NullArgument;
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else {
        return QceStatus::InvalidUtf8;
    };
    let coords = slice::from_raw_parts(position, len).to_vec();
    let vector = match FoundationVector::new(coords, &(*scale).0) {
        Ok(v) => v,
        Err(e) => return status_of(&e),
    };
    match Benchmark::new(name, vector) {
        Ok(b) => {
            *out = Box::into_raw(Box::new(QceBenchmark(b)));
            QceStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Derive a benchmark as the componentwise mean of `count` vectors laid
/// out row-major in `vectors` (`count * dims` doubles).
///
/// # Safety
/// Pointer arguments as in [`qce_benchmark_new`]; `vectors` must point to
/// `count * dims` doubles.
#[no_mangle]
pub unsafe extern "C" fn qce_benchmark_derive(
    name: *const c_char,
    vectors: *const f64,
    count: usize,
    dims: usize,
    scale: *const QceScale,
    out: *mut *mut QceBenchmark,
) -> QceStatus {
    if name.is_null() || vectors.is_null() || scale.is_null() || out.is_null() {
        return QceStatus::NullArgument;
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else {
        return QceStatus::InvalidUtf8;
    };
    let Some(total) = count.checked_mul(dims).filter(|t| *t > 0) else {
        return QceStatus::InvalidArgument;
    };
    let flat = slice::from_raw_parts(vectors, total);
    let mut rows = Vec::with_capacity(count);
    for chunk in flat.chunks_exact(dims) {
        match FoundationVector::new(chunk.to_vec(), &(*scale).0) {
            Ok(v) => rows.push(v),
            Err(e) => return status_of(&e),
        }
    }
    match qce::benchmarks::derive_benchmark(name, &rows) {
        Ok(b) => {
            *out = Box::into_raw(Box::new(QceBenchmark(b)));
            QceStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Copy the benchmark's coordinates into `out` (`len` doubles).
///
/// # Safety
/// `benchmark` must be a live benchmark handle and `out` must point to at
/// least `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qce_benchmark_position(
    benchmark: *const QceBenchmark,
    out: *mut f64,
    len: usize,
) -> QceStatus {
    if benchmark.is_null() || out.is_null() {
        return QceStatus::NullArgument;
    }
    let scores = (*benchmark).0.position().scores();
    if scores.len() != len {
        return QceStatus::DimensionMismatch;
    }
    ptr::copy_nonoverlapping(scores.as_ptr(), out, len);
    QceStatus::Ok
}

/// The benchmark's name as a newly allocated string; free with
/// [`qce_string_free`]. NULL for a NULL handle.
///
/// # Safety
/// `benchmark` must be NULL or a live benchmark handle.
#[no_mangle]
pub unsafe extern "C" fn qce_benchmark_name(benchmark: *const QceBenchmark) -> *mut c_char {
    let Some(b) = benchmark.as_ref() else {
        return ptr::null_mut();
    };
    CString::new(b.0.name()).map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `benchmark` must be NULL or a handle from a `qce_benchmark_*`
/// constructor that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn qce_benchmark_free(benchmark: *mut QceBenchmark) {
    if !benchmark.is_null() {
        drop(Box::from_raw(benchmark));
    }
}

/// # Safety
/// `s` must be NULL or a string previously returned by this library.
#[no_mangle]
pub unsafe extern "C" fn qce_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn run_index(
    mo: f64,
    po: f64,
    sg: f64,
    out: *mut f64,
    f: impl Fn(&FoundationVector) -> qce::Result<qce::metrics::SimilarityScore>,
) -> QceStatus {
    if out.is_null() {
        return QceStatus::NullArgument;
    }
    match FoundationVector::three(mo, po, sg).and_then(|v| f(&v)) {
        Ok(score) => {
            *out = score.value();
            QceStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Capitalism similarity of a default-scale (mo, po, sg) triple.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qce_capsi(mo: f64, po: f64, sg: f64, out: *mut f64) -> QceStatus {
    run_index(mo, po, sg, out, capsi)
}

/// Communism similarity of a default-scale (mo, po, sg) triple.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qce_comsi(mo: f64, po: f64, sg: f64, out: *mut f64) -> QceStatus {
    run_index(mo, po, sg, out, comsi)
}

/// Socialism similarity against the built-in Scandinavian benchmark.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn qce_socsi(mo: f64, po: f64, sg: f64, out: *mut f64) -> QceStatus {
    run_index(mo, po, sg, out, socsi)
}

/// Manhattan distance between two `len`-dimensional score vectors on a
/// shared scale. The aggregate is always written; per-dimension distances
/// are written to `per_dim` when it is non-NULL (`len` doubles).
///
/// # Safety
/// `x` and `y` must point to `len` doubles; `scale` must be a live scale
/// handle; `per_dim` must be NULL or point to `len` writable doubles;
/// `aggregate` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qce_l1_distance(
    x: *const f64,
    y: *const f64,
    len: usize,
    scale: *const QceScale,
    aggregate: *mut f64,
    per_dim: *mut f64,
) -> QceStatus {
    if x.is_null() || y.is_null() || scale.is_null() || aggregate.is_null() {
        return QceStatus::NullArgument;
    }
    let scale = &(*scale).0;
    let build =
        |p: *const f64| FoundationVector::new(slice::from_raw_parts(p, len).to_vec(), scale);
    let (xs, ys) = match (build(x), build(y)) {
        (Ok(xs), Ok(ys)) => (xs, ys),
        (Err(e), _) | (_, Err(e)) => return status_of(&e),
    };
    match l1_distance(&xs, &ys) {
        Ok(d) => {
            *aggregate = d.aggregate();
            if !per_dim.is_null() {
                ptr::copy_nonoverlapping(d.per_dim().as_ptr(), per_dim, len);
            }
            QceStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

unsafe fn run_similarity(
    x: *const f64,
    len: usize,
    benchmark: *const QceBenchmark,
    scale: *const QceScale,
    weights: *const f64,
    out: *mut f64,
    relative: bool,
) -> QceStatus {
    if x.is_null() || benchmark.is_null() || scale.is_null() || out.is_null() {
        return QceStatus::NullArgument;
    }
    let scale = &(*scale).0;
    let coords = slice::from_raw_parts(x, len).to_vec();
    let vector = match FoundationVector::new(coords, scale) {
        Ok(v) => v,
        Err(e) => return status_of(&e),
    };
    let weights = if weights.is_null() {
        WeightVector::equal(scale.len())
    } else {
        match WeightVector::new(slice::from_raw_parts(weights, len).to_vec()) {
            Ok(w) => w,
            Err(e) => return status_of(&e),
        }
    };
    let result = if relative {
        similarity_benchmark_relative(&vector, &(*benchmark).0, scale, &weights)
    } else {
        similarity_fixed_range(&vector, &(*benchmark).0, scale, &weights)
    };
    match result {
        Ok(score) => {
            *out = score.value();
            QceStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Fixed-range similarity of `x` (`len` doubles) to a benchmark. Pass
/// NULL `weights` for equal weighting.
///
/// # Safety
/// Pointers as in [`qce_l1_distance`]; handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qce_similarity_fixed_range(
    x: *const f64,
    len: usize,
    benchmark: *const QceBenchmark,
    scale: *const QceScale,
    weights: *const f64,
    out: *mut f64,
) -> QceStatus {
    run_similarity(x, len, benchmark, scale, weights, out, false)
}

/// Benchmark-relative similarity of `x` (`len` doubles) to a benchmark.
/// Pass NULL `weights` for equal weighting.
///
/// # Safety
/// Pointers as in [`qce_l1_distance`]; handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qce_similarity_benchmark_relative(
    x: *const f64,
    len: usize,
    benchmark: *const QceBenchmark,
    scale: *const QceScale,
    weights: *const f64,
    out: *mut f64,
) -> QceStatus {
    run_similarity(x, len, benchmark, scale, weights, out, true)
}

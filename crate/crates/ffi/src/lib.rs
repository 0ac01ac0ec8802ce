//! C ABI over the topoclust library.
//!
//! Sequences travel behind the opaque [`TcSequence`] handle; every fallible
//! call returns a [`TcStatus`] and stores a human-readable message
//! retrievable with [`tc_last_error`] from the same thread. Buffers are
//! caller-allocated. The generated header lives at `include/topoclust.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use topoclust::bifiltration::first_merge_matrix;
use topoclust::io;
use topoclust::measures::{
    average_conflict0, average_conflict1, hilbert_distance, hilbert_grid,
};
use topoclust::sankey::{
    build_sankey, hf1_crossing_bound, minimize_crossings_exact, minimize_crossings_heuristic,
};
use topoclust::{Construction, Error, HomologyDim, Partition, PartitionSequence};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcStatus {
    TcOk = 0,
    TcNullArgument = 1,
    TcInvalidUtf8 = 2,
    TcParseError = 3,
    TcInvalidArgument = 4,
    TcMismatch = 5,
    TcResourceCap = 6,
    TcIoError = 7,
    TcInternalError = 8,
}

/// Which bifiltration backs a grid computation.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcConstruction {
    TcElement = 0,
    TcNerve = 1,
}

/// Layout optimiser selection for `tc_min_crossings`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcSankeyMode {
    TcExact = 0,
    TcHeuristic = 1,
}

/// Opaque handle to an immutable sequence of partitions.
pub struct TcSequence {
    inner: PartitionSequence,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> TcStatus {
    match err {
        Error::Parse { .. } | Error::InvalidPartition(_) | Error::InvalidSequence(_) => {
            TcStatus::TcParseError
        }
        Error::GroundSetMismatch { .. } | Error::GridMismatch(_) => TcStatus::TcMismatch,
        Error::LayerOutOfRange { .. } | Error::InvalidConfig(_) => TcStatus::TcInvalidArgument,
        Error::TriangleCapExceeded { .. }
        | Error::WidthCapExceeded { .. }
        | Error::OrderCapExceeded { .. } => TcStatus::TcResourceCap,
        Error::Io(_) => TcStatus::TcIoError,
    }
}

fn fail(err: Error) -> TcStatus {
    set_error(&err.to_string());
    status_of(&err)
}

/// Runs a fallible body, translating errors and panics to status codes.
fn guarded<F: FnOnce() -> Result<(), TcStatus>>(body: F) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => TcStatus::TcOk,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            TcStatus::TcInternalError
        }
    }
}

fn null_arg(name: &str) -> TcStatus {
    set_error(&format!("null argument: {name}"));
    TcStatus::TcNullArgument
}

unsafe fn store(out: *mut *mut TcSequence, seq: PartitionSequence) {
    *out = Box::into_raw(Box::new(TcSequence { inner: seq }));
}

/// Copies the calling thread's last error message into `buffer` (truncated,
/// always NUL-terminated when capacity > 0) and returns the full length of
/// the message including the terminator.
#[no_mangle]
pub unsafe extern "C" fn tc_last_error(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes_with_nul();
        if !buffer.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buffer, n);
            *buffer.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// Parses a sequence file (see the library docs for the format).
#[no_mangle]
pub unsafe extern "C" fn tc_sequence_parse_file(
    path: *const c_char,
    out: *mut *mut TcSequence,
) -> TcStatus {
    guarded(|| {
        if path.is_null() || out.is_null() {
            return Err(null_arg("path/out"));
        }
        let path = CStr::from_ptr(path).to_str().map_err(|_| {
            set_error("path is not valid UTF-8");
            TcStatus::TcInvalidUtf8
        })?;
        let seq = io::parse_sequence_file(Path::new(path)).map_err(fail)?;
        store(out, seq);
        Ok(())
    })
}

/// Parses sequence-file text from memory.
#[no_mangle]
pub unsafe extern "C" fn tc_sequence_parse(
    text: *const c_char,
    out: *mut *mut TcSequence,
) -> TcStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            return Err(null_arg("text/out"));
        }
        let text = CStr::from_ptr(text).to_str().map_err(|_| {
            set_error("text is not valid UTF-8");
            TcStatus::TcInvalidUtf8
        })?;
        let seq = io::parse_sequence(text).map_err(fail)?;
        store(out, seq);
        Ok(())
    })
}

/// Builds a sequence from a label matrix: `labels[x * n_layers + m]` is the
/// cluster label of element `x` in layer `m`; labels are interned per
/// column. `change_points` may be null for the default `0..M-1`.
#[no_mangle]
pub unsafe extern "C" fn tc_sequence_from_labels(
    n_elements: usize,
    n_layers: usize,
    labels: *const u32,
    change_points: *const f64,
    out: *mut *mut TcSequence,
) -> TcStatus {
    guarded(|| {
        if labels.is_null() || out.is_null() {
            return Err(null_arg("labels/out"));
        }
        let labels = std::slice::from_raw_parts(labels, n_elements * n_layers);
        let mut partitions = Vec::with_capacity(n_layers);
        for m in 0..n_layers {
            let column: Vec<u32> = (0..n_elements)
                .map(|x| labels[x * n_layers + m])
                .collect();
            partitions.push(Partition::from_labels(&column).map_err(fail)?);
        }
        let points: Vec<f64> = if change_points.is_null() {
            (0..n_layers).map(|m| m as f64).collect()
        } else {
            std::slice::from_raw_parts(change_points, n_layers).to_vec()
        };
        let seq = PartitionSequence::new(points, partitions).map_err(fail)?;
        store(out, seq);
        Ok(())
    })
}

/// Releases a sequence handle. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn tc_sequence_free(seq: *mut TcSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Number of layers, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn tc_sequence_layer_count(seq: *const TcSequence) -> usize {
    seq.as_ref().map_or(0, |s| s.inner.len())
}

/// Ground-set size, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn tc_sequence_element_count(seq: *const TcSequence) -> usize {
    seq.as_ref().map_or(0, |s| s.inner.n_elements())
}

fn dim_of(dim: u32) -> Result<HomologyDim, TcStatus> {
    match dim {
        0 => Ok(HomologyDim::Zero),
        1 => Ok(HomologyDim::One),
        other => {
            set_error(&format!("homology dimension {other} unsupported; use 0 or 1"));
            Err(TcStatus::TcInvalidArgument)
        }
    }
}

fn construction_of(c: TcConstruction) -> Construction {
    match c {
        TcConstruction::TcElement => Construction::Element,
        TcConstruction::TcNerve => Construction::Nerve,
    }
}

/// Fills `out_values` (row-major `m x m`, caller-allocated) with the
/// Hilbert-function grid; entries below the diagonal are zero.
#[no_mangle]
pub unsafe extern "C" fn tc_hilbert_grid(
    seq: *const TcSequence,
    dim: u32,
    construction: TcConstruction,
    out_values: *mut u64,
) -> TcStatus {
    guarded(|| {
        let Some(seq) = seq.as_ref() else {
            return Err(null_arg("seq"));
        };
        if out_values.is_null() {
            return Err(null_arg("out_values"));
        }
        let grid = hilbert_grid(&seq.inner, dim_of(dim)?, construction_of(construction))
            .map_err(fail)?;
        let m = seq.inner.len();
        let out = std::slice::from_raw_parts_mut(out_values, m * m);
        out.fill(0);
        for (i, j, v) in grid.iter_upper() {
            out[i * m + j] = v;
        }
        Ok(())
    })
}

/// Average 0-/1-conflict measures and the superdiagonal crossing bound.
/// Any output pointer may be null to skip it.
#[no_mangle]
pub unsafe extern "C" fn tc_conflict_summary(
    seq: *const TcSequence,
    construction: TcConstruction,
    out_c0: *mut f64,
    out_c1: *mut f64,
    out_hf1_bound: *mut u64,
) -> TcStatus {
    guarded(|| {
        let Some(seq) = seq.as_ref() else {
            return Err(null_arg("seq"));
        };
        let construction = construction_of(construction);
        let hf0 = hilbert_grid(&seq.inner, HomologyDim::Zero, construction).map_err(fail)?;
        let hf1 = hilbert_grid(&seq.inner, HomologyDim::One, construction).map_err(fail)?;
        if !out_c0.is_null() {
            *out_c0 = average_conflict0(&seq.inner, &hf0).map_err(fail)?;
        }
        if !out_c1.is_null() {
            *out_c1 = average_conflict1(&seq.inner, &hf1).map_err(fail)?;
        }
        if !out_hf1_bound.is_null() {
            *out_hf1_bound = hf1_crossing_bound(&seq.inner, &hf1).map_err(fail)?;
        }
        Ok(())
    })
}

/// L2 distance between the Hilbert grids of two sequences over the same
/// change points.
#[no_mangle]
pub unsafe extern "C" fn tc_hilbert_distance(
    a: *const TcSequence,
    b: *const TcSequence,
    dim: u32,
    construction: TcConstruction,
    out_distance: *mut f64,
) -> TcStatus {
    guarded(|| {
        let (Some(a), Some(b)) = (a.as_ref(), b.as_ref()) else {
            return Err(null_arg("a/b"));
        };
        if out_distance.is_null() {
            return Err(null_arg("out_distance"));
        }
        let dim = dim_of(dim)?;
        let construction = construction_of(construction);
        let ga = hilbert_grid(&a.inner, dim, construction).map_err(fail)?;
        let gb = hilbert_grid(&b.inner, dim, construction).map_err(fail)?;
        *out_distance = hilbert_distance(&ga, &gb).map_err(fail)?;
        Ok(())
    })
}

/// Optimised Sankey-layout crossing number (exact under the width cap,
/// barycenter heuristic otherwise).
#[no_mangle]
pub unsafe extern "C" fn tc_min_crossings(
    seq: *const TcSequence,
    mode: TcSankeyMode,
    sweeps: u32,
    out_crossings: *mut u64,
) -> TcStatus {
    guarded(|| {
        let Some(seq) = seq.as_ref() else {
            return Err(null_arg("seq"));
        };
        if out_crossings.is_null() {
            return Err(null_arg("out_crossings"));
        }
        let diagram = build_sankey(&seq.inner);
        let crossings = match mode {
            TcSankeyMode::TcExact => minimize_crossings_exact(&diagram).map_err(fail)?.1,
            TcSankeyMode::TcHeuristic => {
                minimize_crossings_heuristic(&diagram, sweeps as usize).1
            }
        };
        *out_crossings = crossings;
        Ok(())
    })
}

/// Count of strong-triangle-inequality violations of the first-merge
/// matrix conditioned on the first layer.
#[no_mangle]
pub unsafe extern "C" fn tc_strong_triangle_violations(
    seq: *const TcSequence,
    out_count: *mut u64,
) -> TcStatus {
    guarded(|| {
        let Some(seq) = seq.as_ref() else {
            return Err(null_arg("seq"));
        };
        if out_count.is_null() {
            return Err(null_arg("out_count"));
        }
        let matrix = first_merge_matrix(&seq.inner, 0).map_err(fail)?;
        *out_count = topoclust::baselines::strong_triangle_violations(&matrix).len() as u64;
        Ok(())
    })
}

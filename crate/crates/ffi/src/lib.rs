//! C ABI over `strataudit`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns a
//! [`StratStatus`]; on failure, [`strat_last_error`] describes the error
//! for the calling thread. Directions are angles in radians.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use strataudit::complex::validate;
use strataudit::descriptors::{
    bottleneck_distance, ecf_l1_distance, euler_characteristic_function, persistence_diagram, PersistenceDiagram,
    StepFunction,
};
use strataudit::ingest::read_gsc;
use strataudit::sampling::missed_vertices;
use strataudit::stratification::{min_stratum, observing_regions};
use strataudit::{Direction, Error, Point2, SimplicialComplex2D};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StratStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DegenerateDirection = 3,
    InvalidComplex = 4,
    Parse = 5,
    Rejected = 6,
    Io = 7,
    Internal = 8,
}

impl From<&Error> for StratStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Construction(_) => StratStatus::InvalidArgument,
            Error::DegenerateDirection { .. } => StratStatus::DegenerateDirection,
            Error::DuplicatePoint(..)
            | Error::ParallelDifferences(..)
            | Error::FaceClosure(_)
            | Error::InvalidComplex(_) => StratStatus::InvalidComplex,
            Error::Parse { .. } | Error::Syntax { .. } => StratStatus::Parse,
            Error::Rejected(_) => StratStatus::Rejected,
            Error::Io(_) => StratStatus::Io,
        }
    }
}

/// A planar simplicial complex.
pub struct StratComplex(SimplicialComplex2D);

/// A persistence diagram, points sorted by dimension, birth, death.
pub struct StratDiagram(PersistenceDiagram);

/// An integer-valued step function of height.
pub struct StratStepFunction(StepFunction);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: StratStatus, msg: impl Into<String>) -> StratStatus {
    set_error(msg.into());
    status
}

fn guard(f: impl FnOnce() -> Result<(), StratStatus>) -> StratStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => StratStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(StratStatus::Internal, "panic inside strataudit"),
    }
}

fn lib<T>(r: strataudit::Result<T>) -> Result<T, StratStatus> {
    r.map_err(|e| fail(StratStatus::from(&e), e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, StratStatus> {
    p.as_ref()
        .ok_or_else(|| fail(StratStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, StratStatus> {
    p.as_mut()
        .ok_or_else(|| fail(StratStatus::NullPointer, format!("{what} is null")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], StratStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(StratStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn checked(k: SimplicialComplex2D) -> Result<SimplicialComplex2D, StratStatus> {
    let report = validate(&k);
    if report.is_valid() {
        Ok(k)
    } else {
        Err(fail(
            StratStatus::InvalidComplex,
            format!("invalid complex: {report:?}"),
        ))
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn strat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn strat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a complex from `n_vertices` interleaved `x, y` pairs, `n_edges`
/// vertex-index pairs and `n_triangles` vertex-index triples. The complex
/// must be closed under faces and geometrically embedded.
///
/// # Safety
/// Each array must hold the stated number of elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strat_complex_new(
    xy: *const f64,
    n_vertices: usize,
    edges: *const usize,
    n_edges: usize,
    triangles: *const usize,
    n_triangles: usize,
    out_complex: *mut *mut StratComplex,
) -> StratStatus {
    guard(|| {
        let dst = out(out_complex, "out_complex")?;
        let xy = slice(xy, 2 * n_vertices, "xy")?;
        let e = slice(edges, 2 * n_edges, "edges")?;
        let t = slice(triangles, 3 * n_triangles, "triangles")?;
        let vertices = xy.chunks(2).map(|p| Point2::new(p[0], p[1])).collect();
        let edges = e.chunks(2).map(|p| [p[0], p[1]]).collect();
        let triangles = t.chunks(3).map(|p| [p[0], p[1], p[2]]).collect();
        let k = checked(lib(SimplicialComplex2D::try_new(vertices, edges, triangles))?)?;
        *dst = Box::into_raw(Box::new(StratComplex(k)));
        Ok(())
    })
}

/// Parses a complex from `.gsc` text.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strat_complex_from_gsc(
    text: *const c_char,
    out_complex: *mut *mut StratComplex,
) -> StratStatus {
    guard(|| {
        let dst = out(out_complex, "out_complex")?;
        if text.is_null() {
            return Err(fail(StratStatus::NullPointer, "text is null"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| fail(StratStatus::Parse, "text is not UTF-8"))?;
        let k = checked(lib(read_gsc(s))?)?;
        *dst = Box::into_raw(Box::new(StratComplex(k)));
        Ok(())
    })
}

/// # Safety
/// `complex` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn strat_complex_free(complex: *mut StratComplex) {
    if !complex.is_null() {
        drop(Box::from_raw(complex));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `complex` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn strat_complex_num_vertices(complex: *const StratComplex) -> usize {
    complex.as_ref().map_or(0, |k| k.0.num_vertices())
}

/// Length of the smallest top cell of the direction circle.
///
/// # Safety
/// `complex` must be a live handle; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strat_min_stratum(complex: *const StratComplex, out_value: *mut f64) -> StratStatus {
    guard(|| {
        let k = deref(complex, "complex")?;
        let dst = out(out_value, "out_value")?;
        *dst = lib(min_stratum(&k.0.vertices))?;
        Ok(())
    })
}

/// Writes up to `capacity` arcs of the observing region of `vertex` as
/// `(start, length)` pairs and the total arc count to `out_count`. Call
/// with `capacity = 0` to size the buffers.
///
/// # Safety
/// `starts` and `lengths` must hold `capacity` elements; `out_count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strat_observing_region(
    complex: *const StratComplex,
    vertex: usize,
    starts: *mut f64,
    lengths: *mut f64,
    capacity: usize,
    out_count: *mut usize,
) -> StratStatus {
    guard(|| {
        let k = deref(complex, "complex")?;
        let count = out(out_count, "out_count")?;
        if vertex >= k.0.num_vertices() {
            return Err(fail(
                StratStatus::InvalidArgument,
                format!("vertex {vertex} out of range"),
            ));
        }
        let regions = lib(observing_regions(&k.0))?;
        let arcs = regions[vertex].region.arcs();
        *count = arcs.len();
        if capacity > 0 && (starts.is_null() || lengths.is_null()) {
            return Err(fail(StratStatus::NullPointer, "arc buffers are null"));
        }
        for (i, a) in arcs.iter().take(capacity).enumerate() {
            *starts.add(i) = a.start();
            *lengths.add(i) = a.length();
        }
        Ok(())
    })
}

/// Number of vertices observed by none of the `n` directions.
///
/// # Safety
/// `angles` must hold `n` elements; `out_missed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strat_missed_count(
    complex: *const StratComplex,
    angles: *const f64,
    n: usize,
    out_missed: *mut usize,
) -> StratStatus {
    guard(|| {
        let k = deref(complex, "complex")?;
        let dst = out(out_missed, "out_missed")?;
        let dirs: Vec<Direction> = slice(angles, n, "angles")?.iter().map(|&a| Direction::new(a)).collect();
        *dst = lib(missed_vertices(&k.0, &dirs))?.len();
        Ok(())
    })
}

/// Persistence diagram of the lower-star filtration in direction `angle`.
///
/// # Safety
/// `complex` must be a live handle; `out_diagram` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strat_persistence_diagram(
    complex: *const StratComplex,
    angle: f64,
    out_diagram: *mut *mut StratDiagram,
) -> StratStatus {
    guard(|| {
        let k = deref(complex, "complex")?;
        let dst = out(out_diagram, "out_diagram")?;
        let d = lib(persistence_diagram(&k.0, Direction::new(angle)))?;
        *dst = Box::into_raw(Box::new(StratDiagram(d)));
        Ok(())
    })
}

/// # Safety
/// `diagram` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn strat_diagram_len(diagram: *const StratDiagram) -> usize {
    diagram.as_ref().map_or(0, |d| d.0.len())
}

/// Point `index`; essential points have death `+inf`.
///
/// # Safety
/// `diagram` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn strat_diagram_point(
    diagram: *const StratDiagram,
    index: usize,
    out_dim: *mut u8,
    out_birth: *mut f64,
    out_death: *mut f64,
) -> StratStatus {
    guard(|| {
        let d = deref(diagram, "diagram")?;
        let p = d.0.points().get(index).ok_or_else(|| {
            fail(
                StratStatus::InvalidArgument,
                format!("index {index} out of range (len {})", d.0.len()),
            )
        })?;
        *out(out_dim, "out_dim")? = p.dim;
        *out(out_birth, "out_birth")? = p.birth;
        *out(out_death, "out_death")? = p.death;
        Ok(())
    })
}

/// # Safety
/// Both handles must be live; `out_distance` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strat_bottleneck_distance(
    a: *const StratDiagram,
    b: *const StratDiagram,
    out_distance: *mut f64,
) -> StratStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        *out(out_distance, "out_distance")? = bottleneck_distance(&a.0, &b.0);
        Ok(())
    })
}

/// # Safety
/// `diagram` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn strat_diagram_free(diagram: *mut StratDiagram) {
    if !diagram.is_null() {
        drop(Box::from_raw(diagram));
    }
}

/// Euler characteristic curve in direction `angle`.
///
/// # Safety
/// `complex` must be a live handle; `out_function` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strat_euler_curve(
    complex: *const StratComplex,
    angle: f64,
    out_function: *mut *mut StratStepFunction,
) -> StratStatus {
    guard(|| {
        let k = deref(complex, "complex")?;
        let dst = out(out_function, "out_function")?;
        let f = lib(euler_characteristic_function(&k.0, Direction::new(angle)))?;
        *dst = Box::into_raw(Box::new(StratStepFunction(f)));
        Ok(())
    })
}

/// Number of breakpoints.
///
/// # Safety
/// `function` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn strat_step_len(function: *const StratStepFunction) -> usize {
    function.as_ref().map_or(0, |f| f.0.breakpoints().len())
}

/// Breakpoint `index`: the function takes `value` from `height` on.
///
/// # Safety
/// `function` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn strat_step_breakpoint(
    function: *const StratStepFunction,
    index: usize,
    out_height: *mut f64,
    out_value: *mut i64,
) -> StratStatus {
    guard(|| {
        let f = deref(function, "function")?;
        let &(h, v) =
            f.0.breakpoints()
                .get(index)
                .ok_or_else(|| fail(StratStatus::InvalidArgument, format!("index {index} out of range")))?;
        *out(out_height, "out_height")? = h;
        *out(out_value, "out_value")? = v;
        Ok(())
    })
}

/// Value at height `t`, or 0 for a null handle.
///
/// # Safety
/// `function` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn strat_step_eval(function: *const StratStepFunction, t: f64) -> i64 {
    function.as_ref().map_or(0, |f| f.0.eval(t))
}

/// # Safety
/// Both handles must be live; `out_distance` must be writable.
#[no_mangle]
pub unsafe extern "C" fn strat_ecf_l1_distance(
    a: *const StratStepFunction,
    b: *const StratStepFunction,
    out_distance: *mut f64,
) -> StratStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        *out(out_distance, "out_distance")? = ecf_l1_distance(&a.0, &b.0);
        Ok(())
    })
}

/// # Safety
/// `function` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn strat_step_free(function: *mut StratStepFunction) {
    if !function.is_null() {
        drop(Box::from_raw(function));
    }
}

//! C ABI over the planner. Instances and solutions are opaque handles owned
//! by the caller and released with the matching `*_free` function. Every
//! function returns an [`McppStatus`]; on failure a message is available
//! from [`mcpp_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lsmcpp::init::{initial_solution, InitMethod};
use lsmcpp::io::{parse_instance, Instance};
use lsmcpp::search::{ls_mcpp, SearchParams, Solution};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McppStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInstance = 3,
    InvalidParameter = 4,
    SolveFailed = 5,
    OutOfRange = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McppInit {
    Greedy = 0,
    Voronoi = 1,
}

/// Search settings; obtain defaults from [`mcpp_params_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McppParams {
    pub init: McppInit,
    pub max_iters: usize,
    pub dedup_period: usize,
    pub gamma: f64,
    /// Temperature after the last iteration; the search starts at 1.
    pub final_temperature: f64,
    pub seed: u64,
}

/// Subcell coordinate on the doubled-resolution grid.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct McppCoord {
    pub col: usize,
    pub row: usize,
}

/// Opaque parsed instance.
pub struct McppInstance {
    inner: Instance,
}

/// Opaque solved plan: one closed walk per robot.
pub struct McppSolution {
    inner: Solution,
    walks: Vec<Vec<McppCoord>>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: McppStatus, msg: impl Into<String>) -> McppStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> McppStatus) -> McppStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(McppStatus::Panic, "internal panic"),
    }
}

/// Message of the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mcpp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub extern "C" fn mcpp_params_default() -> McppParams {
    let p = SearchParams::default();
    McppParams {
        init: McppInit::Greedy,
        max_iters: p.max_iters,
        dedup_period: p.dedup_period,
        gamma: p.gamma,
        final_temperature: 0.2,
        seed: p.seed,
    }
}

/// Parses an instance from NUL-terminated JSON. Map files referenced by
/// path are resolved against the working directory.
///
/// # Safety
/// `json` must be NULL or a valid NUL-terminated string; `out` must be NULL
/// or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mcpp_instance_from_json(json: *const c_char, out: *mut *mut McppInstance) -> McppStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(McppStatus::NullPointer, "null argument");
        }
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(McppStatus::InvalidUtf8, "instance JSON is not UTF-8");
        };
        match parse_instance(text, None) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(McppInstance { inner }));
                McppStatus::Ok
            }
            Err(e) => fail(McppStatus::InvalidInstance, e.to_string()),
        }
    })
}

/// # Safety
/// `inst` must be NULL or a handle from [`mcpp_instance_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mcpp_instance_free(inst: *mut McppInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// # Safety
/// `inst` must be a live instance handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mcpp_instance_robot_count(inst: *const McppInstance, out: *mut usize) -> McppStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else {
            return fail(McppStatus::NullPointer, "null argument");
        };
        *out = inst.inner.num_robots();
        McppStatus::Ok
    })
}

/// Runs the initializer and the local search. `params` may be NULL to use
/// the instance's own settings on top of the defaults.
///
/// # Safety
/// `inst` must be a live instance handle, `params` NULL or valid for
/// reads, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mcpp_solve(
    inst: *const McppInstance,
    params: *const McppParams,
    out: *mut *mut McppSolution,
) -> McppStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else {
            return fail(McppStatus::NullPointer, "null argument");
        };
        let inst = &inst.inner;
        let (init, search) = match params.as_ref() {
            Some(p) => {
                let init = match p.init {
                    McppInit::Greedy => InitMethod::Greedy,
                    McppInit::Voronoi => InitMethod::Voronoi,
                };
                (
                    init,
                    SearchParams::with_final_temperature(p.max_iters, p.dedup_period, p.final_temperature, p.gamma, p.seed),
                )
            }
            None => (InitMethod::default(), inst.params.to_params()),
        };
        let search = match search.and_then(|s| s.validate().map(|()| s)) {
            Ok(s) => s,
            Err(e) => return fail(McppStatus::InvalidParameter, e.to_string()),
        };
        let d = &inst.decomposed;
        let solved = initial_solution(d, &inst.roots, init).and_then(|s| ls_mcpp(d, &s, &search));
        match solved {
            Ok(inner) => {
                let walks = inner
                    .paths
                    .iter()
                    .map(|p| {
                        p.vertices()
                            .iter()
                            .map(|&v| {
                                let c = d.coord(v);
                                McppCoord { col: c.col, row: c.row }
                            })
                            .collect()
                    })
                    .collect();
                *out = Box::into_raw(Box::new(McppSolution { inner, walks }));
                McppStatus::Ok
            }
            Err(e) => fail(McppStatus::SolveFailed, e.to_string()),
        }
    })
}

/// # Safety
/// `sol` must be NULL or a handle from [`mcpp_solve`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mcpp_solution_free(sol: *mut McppSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// # Safety
/// `sol` must be a live solution handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mcpp_solution_makespan(sol: *const McppSolution, out: *mut f64) -> McppStatus {
    guard(|| {
        let (Some(sol), false) = (sol.as_ref(), out.is_null()) else {
            return fail(McppStatus::NullPointer, "null argument");
        };
        *out = sol.inner.makespan;
        McppStatus::Ok
    })
}

/// # Safety
/// `sol` must be a live solution handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mcpp_solution_robot_count(sol: *const McppSolution, out: *mut usize) -> McppStatus {
    guard(|| {
        let (Some(sol), false) = (sol.as_ref(), out.is_null()) else {
            return fail(McppStatus::NullPointer, "null argument");
        };
        *out = sol.walks.len();
        McppStatus::Ok
    })
}

/// Cost of robot `robot`'s walk.
///
/// # Safety
/// `sol` must be a live solution handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mcpp_solution_path_cost(sol: *const McppSolution, robot: usize, out: *mut f64) -> McppStatus {
    guard(|| {
        let (Some(sol), false) = (sol.as_ref(), out.is_null()) else {
            return fail(McppStatus::NullPointer, "null argument");
        };
        match sol.inner.paths.get(robot) {
            Some(p) => {
                *out = p.cost();
                McppStatus::Ok
            }
            None => fail(McppStatus::OutOfRange, format!("robot {robot} out of range")),
        }
    })
}

/// Number of subcells in robot `robot`'s walk; the closing step back to
/// the first subcell is implied.
///
/// # Safety
/// `sol` must be a live solution handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mcpp_solution_path_len(sol: *const McppSolution, robot: usize, out: *mut usize) -> McppStatus {
    guard(|| {
        let (Some(sol), false) = (sol.as_ref(), out.is_null()) else {
            return fail(McppStatus::NullPointer, "null argument");
        };
        match sol.walks.get(robot) {
            Some(w) => {
                *out = w.len();
                McppStatus::Ok
            }
            None => fail(McppStatus::OutOfRange, format!("robot {robot} out of range")),
        }
    })
}

/// Copies robot `robot`'s walk into `buf` (capacity `cap`). `written`
/// receives the walk length, also when the buffer is too small.
///
/// # Safety
/// `sol` must be a live solution handle, `buf` valid for `cap` writes and
/// `written` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mcpp_solution_path_copy(
    sol: *const McppSolution,
    robot: usize,
    buf: *mut McppCoord,
    cap: usize,
    written: *mut usize,
) -> McppStatus {
    guard(|| {
        let (Some(sol), false) = (sol.as_ref(), written.is_null()) else {
            return fail(McppStatus::NullPointer, "null argument");
        };
        let Some(walk) = sol.walks.get(robot) else {
            return fail(McppStatus::OutOfRange, format!("robot {robot} out of range"));
        };
        *written = walk.len();
        if cap < walk.len() {
            return fail(McppStatus::BufferTooSmall, format!("walk needs {} entries, buffer holds {cap}", walk.len()));
        }
        if buf.is_null() {
            return fail(McppStatus::NullPointer, "null buffer");
        }
        ptr::copy_nonoverlapping(walk.as_ptr(), buf, walk.len());
        McppStatus::Ok
    })
}

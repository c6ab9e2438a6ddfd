//! C interface to the MHD solver.
//!
//! A simulation is an opaque `MhdSimulation` handle created by
//! [`mhd_simulation_new`] and released by [`mhd_simulation_free`]. Every
//! fallible function returns an [`MhdStatus`]; the message of the most recent
//! failure on the calling thread is available from [`mhd_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use mhd_core::bench::{problem_by_name, write_vtk};
use mhd_core::diagnostics::compute_record;
use mhd_core::{Error, MhdState, Mode, Simulation};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MhdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Inadmissible = 3,
    NotConverged = 4,
    Io = 5,
    Internal = 6,
}

/// Euler integration mode.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MhdMode {
    Low = 0,
    HighLimited = 1,
}

/// Global quantities of the current state.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MhdDiagnostics {
    pub time: f64,
    pub total_mech_energy: f64,
    pub magnetic_energy: f64,
    pub total_energy: f64,
    pub math_entropy: f64,
    pub min_density: f64,
    pub min_pressure: f64,
    pub min_internal_energy: f64,
    pub weak_div_fingerprint_drift: f64,
}

/// Opaque simulation handle.
pub struct MhdSimulation {
    sim: Simulation,
    state: MhdState,
    fingerprint0: Vec<f64>,
    cfl: f64,
    mode: Mode,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MhdStatus {
    match e {
        Error::Stage { source, .. } => status_of(source),
        Error::Mesh(_) | Error::Dimension(_) | Error::Config(_) | Error::TimeStep { .. } => MhdStatus::InvalidArgument,
        Error::Inadmissible(_) | Error::NonFinite(_) | Error::Bounds { .. } => MhdStatus::Inadmissible,
        Error::Breakdown { .. } | Error::NotConverged { .. } | Error::NewtonNotConverged { .. } => MhdStatus::NotConverged,
        Error::Io(_) => MhdStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (MhdStatus, String)>) -> MhdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MhdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MhdStatus::Internal
        }
    }
}

fn core_err(e: Error) -> (MhdStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (MhdStatus, String) {
    (MhdStatus::NullPointer, "null pointer argument".into())
}

unsafe fn handle<'a>(sim: *mut MhdSimulation) -> Result<&'a mut MhdSimulation, (MhdStatus, String)> {
    sim.as_mut().ok_or_else(null)
}

unsafe fn string_arg<'a>(s: *const c_char) -> Result<&'a str, (MhdStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (MhdStatus::InvalidArgument, "string is not UTF-8".into()))
}

/// Creates the named built-in problem (`vortex`, `briowu`, `blast`, `jet`) at
/// refinement `level`. A non-positive `cfl` selects the problem default.
///
/// # Safety
/// `problem` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mhd_simulation_new(
    problem: *const c_char,
    level: u32,
    mode: MhdMode,
    cfl: f64,
    out: *mut *mut MhdSimulation,
) -> MhdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let name = string_arg(problem)?;
        let spec = problem_by_name(name).map_err(core_err)?;
        let cfl = if cfl > 0.0 { cfl } else { spec.cfl };
        if !(cfl < 1.0) {
            return Err((MhdStatus::InvalidArgument, format!("cfl must lie in (0, 1), got {cfl}")));
        }
        let (sim, state) = spec.setup(level).map_err(core_err)?;
        let fingerprint0 = sim.weak_divergence(&state.b);
        let mode = match mode {
            MhdMode::Low => Mode::Low,
            MhdMode::HighLimited => Mode::HighLimited,
        };
        *out = Box::into_raw(Box::new(MhdSimulation { sim, state, fingerprint0, cfl, mode }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `sim` must come from [`mhd_simulation_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mhd_simulation_free(sim: *mut MhdSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Advances by one split step. Writes the time advanced to `dt` if non-null.
///
/// # Safety
/// `sim` must be a live handle; `dt` null or valid.
#[no_mangle]
pub unsafe extern "C" fn mhd_simulation_step(sim: *mut MhdSimulation, dt: *mut f64) -> MhdStatus {
    guard(|| {
        let h = handle(sim)?;
        let (next, info) = h.sim.mhd_update(&h.state, h.cfl, h.mode, None).map_err(core_err)?;
        h.state = next;
        if let Some(d) = dt.as_mut() {
            *d = 2.0 * info.tau;
        }
        Ok(())
    })
}

/// Advances to `t_final`. Writes the number of steps to `steps` if non-null.
///
/// # Safety
/// `sim` must be a live handle; `steps` null or valid.
#[no_mangle]
pub unsafe extern "C" fn mhd_simulation_run_to(sim: *mut MhdSimulation, t_final: f64, steps: *mut u64) -> MhdStatus {
    guard(|| {
        let h = handle(sim)?;
        let mut n = 0u64;
        let end = h
            .sim
            .run_to_time(&h.state, t_final, h.cfl, h.mode, |_, _, _| {
                n += 1;
                Ok(())
            })
            .map_err(core_err)?;
        h.state = end;
        if let Some(s) = steps.as_mut() {
            *s = n;
        }
        Ok(())
    })
}

/// Current time.
///
/// # Safety
/// `sim` must be a live handle and `time` valid.
#[no_mangle]
pub unsafe extern "C" fn mhd_simulation_time(sim: *const MhdSimulation, time: *mut f64) -> MhdStatus {
    guard(|| {
        let h = sim.as_ref().ok_or_else(null)?;
        *time.as_mut().ok_or_else(null)? = h.state.time;
        Ok(())
    })
}

/// Number of hydrodynamic nodes.
///
/// # Safety
/// `sim` must be a live handle and `n` valid.
#[no_mangle]
pub unsafe extern "C" fn mhd_simulation_num_nodes(sim: *const MhdSimulation, n: *mut usize) -> MhdStatus {
    guard(|| {
        let h = sim.as_ref().ok_or_else(null)?;
        *n.as_mut().ok_or_else(null)? = h.state.hydro.len();
        Ok(())
    })
}

/// Copies the conserved states `[ρ, m_x, m_y, E]` node by node into `buf`,
/// which must hold `4 * num_nodes` values; `len` is its length.
///
/// # Safety
/// `sim` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn mhd_simulation_copy_hydro(sim: *const MhdSimulation, buf: *mut f64, len: usize) -> MhdStatus {
    guard(|| {
        let h = sim.as_ref().ok_or_else(null)?;
        if buf.is_null() {
            return Err(null());
        }
        let need = 4 * h.state.hydro.len();
        if len < need {
            return Err((MhdStatus::InvalidArgument, format!("buffer holds {len} values, need {need}")));
        }
        let out = std::slice::from_raw_parts_mut(buf, need);
        for (chunk, u) in out.chunks_exact_mut(4).zip(&h.state.hydro.states) {
            chunk.copy_from_slice(u);
        }
        Ok(())
    })
}

/// Diagnostics of the current state.
///
/// # Safety
/// `sim` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn mhd_simulation_diagnostics(sim: *const MhdSimulation, out: *mut MhdDiagnostics) -> MhdStatus {
    guard(|| {
        let h = sim.as_ref().ok_or_else(null)?;
        let out = out.as_mut().ok_or_else(null)?;
        let r = compute_record(&h.sim, &h.state, &h.fingerprint0).map_err(core_err)?;
        *out = MhdDiagnostics {
            time: r.time,
            total_mech_energy: r.total_mech_energy,
            magnetic_energy: r.magnetic_energy,
            total_energy: r.total_energy,
            math_entropy: r.math_entropy,
            min_density: r.min_density,
            min_pressure: r.min_pressure,
            min_internal_energy: r.min_internal_energy,
            weak_div_fingerprint_drift: r.weak_div_fingerprint_drift,
        };
        Ok(())
    })
}

/// Writes the current state as a legacy VTK file.
///
/// # Safety
/// `sim` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mhd_simulation_write_vtk(sim: *const MhdSimulation, path: *const c_char) -> MhdStatus {
    guard(|| {
        let h = sim.as_ref().ok_or_else(null)?;
        let path = string_arg(path)?;
        write_vtk(&h.sim, &h.state, Path::new(path)).map_err(core_err)
    })
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mhd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

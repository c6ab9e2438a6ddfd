use std::ffi::{CStr, CString};
use std::ptr;

use mhd_ffi::*;

fn create(problem: &str, mode: MhdMode) -> (MhdStatus, *mut MhdSimulation) {
    let name = CString::new(problem).unwrap();
    let mut sim = ptr::null_mut();
    let status = unsafe { mhd_simulation_new(name.as_ptr(), 0, mode, 0.0, &mut sim) };
    (status, sim)
}

fn last_error() -> String {
    let p = mhd_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn step_and_inspect() {
    let (status, sim) = create("briowu", MhdMode::Low);
    assert_eq!(status, MhdStatus::Ok);
    assert!(!sim.is_null());
    unsafe {
        let mut n = 0usize;
        assert_eq!(mhd_simulation_num_nodes(sim, &mut n), MhdStatus::Ok);
        assert_eq!(n, 200);

        let mut d0 = MhdDiagnostics::default();
        assert_eq!(mhd_simulation_diagnostics(sim, &mut d0), MhdStatus::Ok);
        assert_eq!(d0.time, 0.0);
        assert!(d0.min_density > 0.0);

        let mut dt = 0.0;
        assert_eq!(mhd_simulation_step(sim, &mut dt), MhdStatus::Ok);
        assert!(dt > 0.0);
        let mut t = 0.0;
        assert_eq!(mhd_simulation_time(sim, &mut t), MhdStatus::Ok);
        assert_eq!(t, dt);

        let mut steps = 0u64;
        assert_eq!(mhd_simulation_run_to(sim, 0.005, &mut steps), MhdStatus::Ok);
        assert!(steps > 0);
        mhd_simulation_time(sim, &mut t);
        assert_eq!(t, 0.005);

        let mut d1 = MhdDiagnostics::default();
        mhd_simulation_diagnostics(sim, &mut d1);
        assert!((d1.total_energy - d0.total_energy).abs() <= 1e-10 * d0.total_energy.abs());

        let mut buf = vec![0.0; 4 * n];
        assert_eq!(mhd_simulation_copy_hydro(sim, buf.as_mut_ptr(), buf.len()), MhdStatus::Ok);
        assert!(buf.chunks(4).all(|u| u[0] > 0.0));
        assert_eq!(mhd_simulation_copy_hydro(sim, buf.as_mut_ptr(), 3), MhdStatus::InvalidArgument);
        assert!(last_error().contains("buffer"));

        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("s.vtk").to_str().unwrap()).unwrap();
        assert_eq!(mhd_simulation_write_vtk(sim, path.as_ptr()), MhdStatus::Ok);
        assert!(dir.path().join("s.vtk").exists());

        mhd_simulation_free(sim);
    }
}

#[test]
fn unknown_problem_is_invalid_argument() {
    let (status, sim) = create("nope", MhdMode::HighLimited);
    assert_eq!(status, MhdStatus::InvalidArgument);
    assert!(sim.is_null());
    assert!(last_error().contains("nope"));
}

#[test]
fn bad_cfl_is_rejected() {
    let name = CString::new("vortex").unwrap();
    let mut sim = ptr::null_mut();
    let status = unsafe { mhd_simulation_new(name.as_ptr(), 0, MhdMode::Low, 1.5, &mut sim) };
    assert_eq!(status, MhdStatus::InvalidArgument);
    assert!(sim.is_null());
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        let mut sim = ptr::null_mut();
        assert_eq!(mhd_simulation_new(ptr::null(), 0, MhdMode::Low, 0.0, &mut sim), MhdStatus::NullPointer);
        let name = CString::new("vortex").unwrap();
        assert_eq!(mhd_simulation_new(name.as_ptr(), 0, MhdMode::Low, 0.0, ptr::null_mut()), MhdStatus::NullPointer);
        let mut t = 0.0;
        assert_eq!(mhd_simulation_step(ptr::null_mut(), &mut t), MhdStatus::NullPointer);
        assert_eq!(mhd_simulation_time(ptr::null(), &mut t), MhdStatus::NullPointer);
        let mut d = MhdDiagnostics::default();
        assert_eq!(mhd_simulation_diagnostics(ptr::null(), &mut d), MhdStatus::NullPointer);
        assert_eq!(mhd_simulation_write_vtk(ptr::null(), name.as_ptr()), MhdStatus::NullPointer);
        assert!(last_error().contains("null"));
        mhd_simulation_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_interface() {
    let header = include_str!("../include/mhd_ffi.h");
    for name in ["mhd_simulation_new", "mhd_simulation_free", "mhd_simulation_step", "mhd_last_error_message", "MhdStatus"] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

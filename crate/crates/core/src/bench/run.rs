//! Driving runs and sweeps, and writing their files.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::diagnostics::{compute_record, eoc, error_norms_bdm, error_norms_p1, DiagnosticsRecord, EocConvention, ErrorNorms};
use crate::error::{Error, Result};
use crate::euler::Mode;
use crate::splitting::{MhdState, Simulation, StepInfo};

use super::config::RunConfig;
use super::problems::{ProblemKind, ProblemSpec};
use super::vtk::write_vtk;

/// Final state and per-step diagnostics of a run.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub sim: Simulation,
    pub state: MhdState,
    /// Initial record followed by one record per step.
    pub records: Vec<DiagnosticsRecord>,
    pub steps: usize,
    /// Largest Newton iteration count over all source steps.
    pub max_newton_iterations: usize,
}

/// Sets up `spec` on `mesh_level` and runs it to its final time, calling
/// `observer` after every step.
pub fn simulate(
    spec: &ProblemSpec,
    level: u32,
    mode: Mode,
    observer: impl FnMut(usize, &Simulation, &MhdState, &StepInfo, &DiagnosticsRecord) -> Result<()>,
) -> Result<RunOutput> {
    let (sim, state) = spec.setup(level)?;
    simulate_from(sim, state, spec.t_final, spec.cfl, mode, observer)
}

/// Runs an already prepared simulation to `t_final`.
pub fn simulate_from(
    sim: Simulation,
    state: MhdState,
    t_final: f64,
    cfl: f64,
    mode: Mode,
    mut observer: impl FnMut(usize, &Simulation, &MhdState, &StepInfo, &DiagnosticsRecord) -> Result<()>,
) -> Result<RunOutput> {
    let fp0 = sim.weak_divergence(&state.b);
    let mut records = vec![compute_record(&sim, &state, &fp0)?];
    let mut max_newton = 0;
    let mut steps = 0;
    let final_state = sim.run_to_time(&state, t_final, cfl, mode, |step, s, info| {
        let rec = compute_record(&sim, s, &fp0)?;
        max_newton = max_newton.max(info.newton.iterations);
        steps = step;
        observer(step, &sim, s, info, &rec)?;
        records.push(rec);
        Ok(())
    })?;
    Ok(RunOutput { sim, state: final_state, records, steps, max_newton_iterations: max_newton })
}

/// Performs the run described by `config`, writing `diag.csv` and
/// `snap_<step>.vtk` into the output directory.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let spec = config.problem_spec()?;
    fs::create_dir_all(&config.out_dir)?;
    let (sim, state) = spec.setup(config.level)?;
    let out_dir = config.out_dir.clone();
    let mut diag = BufWriter::new(fs::File::create(out_dir.join("diag.csv"))?);
    writeln!(diag, "step,{}", DiagnosticsRecord::CSV_HEADER)?;
    let fp0 = sim.weak_divergence(&state.b);
    writeln!(diag, "0,{}", compute_record(&sim, &state, &fp0)?.csv_row())?;
    write_vtk(&sim, &state, &snapshot_path(&out_dir, 0))?;
    let every = config.snapshot_every;
    let out = simulate_from(sim, state, spec.t_final, spec.cfl, config.mode, |step, sim, s, _, rec| {
        writeln!(diag, "{step},{}", rec.csv_row())?;
        if every > 0 && step % every == 0 {
            write_vtk(sim, s, &snapshot_path(&out_dir, step))?;
        }
        Ok(())
    })?;
    diag.flush()?;
    if every == 0 || out.steps % every != 0 {
        write_vtk(&out.sim, &out.state, &snapshot_path(&out_dir, out.steps))?;
    }
    Ok(out)
}

fn snapshot_path(dir: &Path, step: usize) -> PathBuf {
    dir.join(format!("snap_{step}.vtk"))
}

/// One refinement level of a convergence study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateRow {
    pub level: u32,
    pub dofs: usize,
    pub errors: ErrorNorms,
}

/// Errors over a sequence of levels.
#[derive(Clone, Debug, PartialEq)]
pub struct RateTable {
    pub quantity: &'static str,
    pub convention: EocConvention,
    pub rows: Vec<RateRow>,
}

impl RateTable {
    fn column(&self, f: impl Fn(&ErrorNorms) -> f64) -> Vec<Option<f64>> {
        let errs: Vec<f64> = self.rows.iter().map(|r| f(&r.errors)).collect();
        let dofs: Vec<usize> = self.rows.iter().map(|r| r.dofs).collect();
        eoc(&errs, &dofs, self.convention)
    }

    pub fn rates_l1(&self) -> Vec<Option<f64>> {
        self.column(|e| e.l1)
    }

    pub fn rates_l2(&self) -> Vec<Option<f64>> {
        self.column(|e| e.l2)
    }

    pub fn rates_linf(&self) -> Vec<Option<f64>> {
        self.column(|e| e.linf())
    }

    /// CSV with a comment line naming the quantity and the rate convention.
    pub fn to_csv(&self) -> String {
        let (r1, r2, ri) = (self.rates_l1(), self.rates_l2(), self.rates_linf());
        let fmt = |r: Option<f64>| r.map(|v| format!("{v:.4}")).unwrap_or_default();
        let mut s = format!("# {}: {}\ndofs,L1,rate1,L2,rate2,Linf,rateinf\n", self.quantity, self.convention.describe());
        for (k, row) in self.rows.iter().enumerate() {
            let e = &row.errors;
            let _ = writeln!(
                s,
                "{},{:.6e},{},{:.6e},{},{:.6e},{}",
                row.dofs,
                e.l1,
                fmt(r1[k]),
                e.l2,
                fmt(r2[k]),
                e.linf(),
                fmt(ri[k])
            );
        }
        s
    }
}

/// Result of a sweep: the primary table, plus the magnetic field table for the vortex.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutput {
    pub primary: RateTable,
    pub magnetic: Option<RateTable>,
}

/// Runs `levels` of the vortex or Brio–Wu problem and tabulates errors.
///
/// Vortex errors are for velocity and B against the exact solution, relative
/// to the norms of the exact fields. Brio–Wu errors are for density against
/// `reference`, per unit strip height.
pub fn sweep(config: &RunConfig, levels: &[u32], reference: Option<&BrioWuReference>) -> Result<SweepOutput> {
    let spec = config.problem_spec()?;
    let mut primary = Vec::new();
    let mut magnetic = Vec::new();
    for &level in levels {
        let out = simulate(&spec, level, config.mode, |_, _, _, _, _| Ok(()))?;
        let (sim, state) = (&out.sim, &out.state);
        match spec.kind {
            ProblemKind::Vortex => {
                let vel: Vec<[f64; 2]> = state.hydro.states.iter().map(|u| [u[1] / u[0], u[2] / u[0]]).collect();
                let t = state.time;
                let exact = |x| spec.exact(x, t).expect("vortex has an exact solution");
                let ev = error_norms_p1(sim.mesh(), sim.p1(), &vel, |x| exact(x).v);
                let eb = error_norms_bdm(sim.mesh(), sim.bdm(), &state.b, |x| exact(x).b);
                let zeros_v = vec![[0.0; 2]; vel.len()];
                let nv = error_norms_p1(sim.mesh(), sim.p1(), &zeros_v, |x| exact(x).v);
                let nb = error_norms_bdm(sim.mesh(), sim.bdm(), &vec![0.0; state.b.len()], |x| exact(x).b);
                let (ev, eb) = (relative(&ev, &nv), relative(&eb, &nb));
                primary.push(RateRow { level, dofs: 2 * sim.p1().num_nodes(), errors: ev });
                magnetic.push(RateRow { level, dofs: sim.bdm().num_dofs(), errors: eb });
            }
            ProblemKind::BrioWu => {
                let reference = reference.ok_or_else(|| Error::Config("Brio-Wu sweep needs a reference solution".into()))?;
                let errors = briowu_density_error(sim, state, reference);
                primary.push(RateRow { level, dofs: sim.mesh().nx() + 1, errors });
            }
            _ => return Err(Error::Config(format!("no convergence study for problem '{}'", spec.name))),
        }
    }
    let out = match spec.kind {
        ProblemKind::Vortex => SweepOutput {
            primary: RateTable { quantity: "velocity", convention: EocConvention::TwoD, rows: primary },
            magnetic: Some(RateTable { quantity: "magnetic field", convention: EocConvention::TwoD, rows: magnetic }),
        },
        _ => SweepOutput {
            primary: RateTable { quantity: "density", convention: EocConvention::OneD, rows: primary },
            magnetic: None,
        },
    };
    fs::create_dir_all(&config.out_dir)?;
    fs::write(config.out_dir.join("rates.csv"), out.primary.to_csv())?;
    if let Some(m) = &out.magnetic {
        fs::write(config.out_dir.join("rates_B.csv"), m.to_csv())?;
    }
    Ok(out)
}

fn relative(e: &ErrorNorms, norm: &ErrorNorms) -> ErrorNorms {
    ErrorNorms {
        l1: e.l1 / norm.l1,
        l2: e.l2 / norm.l2,
        linf_quadrature: e.linf_quadrature / norm.linf(),
        linf_nodal: e.linf_nodal / norm.linf(),
    }
}

/// Density error of a Brio–Wu strip state against a 1D reference profile,
/// with L¹ and L² normalized by the strip height.
pub fn briowu_density_error(sim: &Simulation, state: &MhdState, reference: &BrioWuReference) -> ErrorNorms {
    let rho: Vec<[f64; 1]> = state.hydro.states.iter().map(|u| [u[0]]).collect();
    let e = error_norms_p1(sim.mesh(), sim.p1(), &rho, |x| [reference.density_at(x[0])]);
    let d = sim.mesh().domain();
    let height = d.y1 - d.y0;
    ErrorNorms { l1: e.l1 / height, l2: e.l2 / height.sqrt(), ..e }
}

/// Brio–Wu density profile sampled at increasing abscissae.
#[derive(Clone, Debug, PartialEq)]
pub struct BrioWuReference {
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
}

impl BrioWuReference {
    /// Location of the checked-in reference profile.
    pub fn default_path() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("briowu_reference.csv")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Parses `x,rho` lines; a header and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let (mut x, mut rho) = (Vec::new(), Vec::new());
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('x') {
                continue;
            }
            let mut it = line.split(',');
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|v| v.trim().parse().ok()).ok_or_else(|| Error::Config(format!("bad reference line '{line}'")))
            };
            let xi = parse(it.next())?;
            let ri = parse(it.next())?;
            if let Some(&last) = x.last() {
                if xi <= last {
                    return Err(Error::Config("reference abscissae must increase".into()));
                }
            }
            x.push(xi);
            rho.push(ri);
        }
        if x.len() < 2 {
            return Err(Error::Config("reference needs at least two samples".into()));
        }
        Ok(BrioWuReference { x, rho })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,rho\n");
        for (x, r) in self.x.iter().zip(&self.rho) {
            let _ = writeln!(s, "{x:.10e},{r:.12e}");
        }
        s
    }

    /// Piecewise linear interpolation, constant beyond the ends.
    pub fn density_at(&self, x: f64) -> f64 {
        let n = self.x.len();
        if x <= self.x[0] {
            return self.rho[0];
        }
        if x >= self.x[n - 1] {
            return self.rho[n - 1];
        }
        let k = self.x.partition_point(|&xi| xi <= x) - 1;
        let s = (x - self.x[k]) / (self.x[k + 1] - self.x[k]);
        (1.0 - s) * self.rho[k] + s * self.rho[k + 1]
    }
}

/// Low-order Brio–Wu solution with `nodes` nodes along x, averaged across the strip.
pub fn generate_briowu_reference(spec: &ProblemSpec, nodes: usize, cfl: f64) -> Result<BrioWuReference> {
    if spec.kind != ProblemKind::BrioWu || nodes < 2 {
        return Err(Error::Config("reference generation needs the Brio-Wu problem and at least two nodes".into()));
    }
    let mesh = spec.mesh_with_cells(nodes - 1, 2)?;
    let (sim, state) = spec.setup_on(mesh, Default::default(), Default::default())?;
    let out = simulate_from(sim, state, spec.t_final, cfl, Mode::Low, |_, _, _, _, _| Ok(()))?;
    Ok(strip_profile(&out.sim, &out.state))
}

/// Density averaged over the nodes sharing each x coordinate.
pub fn strip_profile(sim: &Simulation, state: &MhdState) -> BrioWuReference {
    let mesh = sim.mesh();
    let d = mesh.domain();
    let nx = mesh.nx();
    let hx = (d.x1 - d.x0) / nx as f64;
    let mut sum = vec![0.0; nx + 1];
    let mut cnt = vec![0usize; nx + 1];
    for (i, x) in sim.p1().coords().iter().enumerate() {
        let k = ((x[0] - d.x0) / hx).round() as usize;
        sum[k] += state.hydro.states[i][0];
        cnt[k] += 1;
    }
    BrioWuReference {
        x: (0..=nx).map(|k| d.x0 + k as f64 * hx).collect(),
        rho: sum.iter().zip(&cnt).map(|(s, &c)| s / c as f64).collect(),
    }
}

//! Legacy ASCII VTK output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::eos;
use crate::error::Result;
use crate::splitting::{MhdState, Simulation};

/// Writes `state` as an unstructured triangle grid with point data
/// `rho`, `p`, `speed`, `B` and `magnetic_pressure`.
///
/// Periodic copies of a vertex carry the same values. `B` is the BDM₁ field
/// evaluated at each vertex and averaged over the adjacent triangles.
pub fn write_vtk(sim: &Simulation, state: &MhdState, path: &Path) -> Result<()> {
    let mesh = sim.mesh();
    let gas = sim.gas();
    let class = mesh.vertex_class();
    let nv = mesh.vertices().len();

    let mut b_sum = vec![[0.0f64; 2]; nv];
    let mut count = vec![0usize; nv];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        for &g in tri {
            let b = sim.bdm().evaluate(t, mesh.vertices()[g], &state.b);
            b_sum[g][0] += b[0];
            b_sum[g][1] += b[1];
            count[g] += 1;
        }
    }
    // Merge periodic copies so every copy reports the same average.
    let nc = mesh.num_vertex_classes();
    let mut cb = vec![[0.0f64; 2]; nc];
    let mut cc = vec![0usize; nc];
    for g in 0..nv {
        cb[class[g]][0] += b_sum[g][0];
        cb[class[g]][1] += b_sum[g][1];
        cc[class[g]] += count[g];
    }

    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "mhd t={:.17e}", state.time)?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "POINTS {nv} double")?;
    for x in mesh.vertices() {
        writeln!(w, "{:.17e} {:.17e} 0", x[0], x[1])?;
    }
    let nt = mesh.num_triangles();
    writeln!(w, "CELLS {nt} {}", 4 * nt)?;
    for tri in mesh.triangles() {
        writeln!(w, "3 {} {} {}", tri[0], tri[1], tri[2])?;
    }
    writeln!(w, "CELL_TYPES {nt}")?;
    for _ in 0..nt {
        writeln!(w, "5")?;
    }

    writeln!(w, "POINT_DATA {nv}")?;
    let mut scalar = |name: &str, f: &dyn Fn(usize) -> Result<f64>| -> Result<()> {
        writeln!(w, "SCALARS {name} double 1")?;
        writeln!(w, "LOOKUP_TABLE default")?;
        for g in 0..nv {
            writeln!(w, "{:.17e}", f(class[g])?)?;
        }
        Ok(())
    };
    let u = &state.hydro.states;
    scalar("rho", &|i| Ok(u[i][0]))?;
    scalar("p", &|i| eos::state_pressure(&u[i], gas))?;
    scalar("speed", &|i| Ok(u[i][1].hypot(u[i][2]) / u[i][0]))?;
    let bavg = |i: usize| [cb[i][0] / cc[i].max(1) as f64, cb[i][1] / cc[i].max(1) as f64];
    scalar("magnetic_pressure", &|i| {
        let b = bavg(i);
        Ok(0.5 * (b[0] * b[0] + b[1] * b[1]))
    })?;
    writeln!(w, "VECTORS B double")?;
    for g in 0..nv {
        let b = bavg(class[g]);
        writeln!(w, "{:.17e} {:.17e} 0", b[0], b[1])?;
    }
    w.flush()?;
    Ok(())
}

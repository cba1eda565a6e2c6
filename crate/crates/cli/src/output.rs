//! CSV and legacy VTK writers. Numbers use `{:.15e}`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use cosserat_core::convergence::OrderRow;
use cosserat_core::variational::Record;
use cosserat_core::{MicropolarState, VectorField};

use crate::report::Check;

pub fn num(x: f64) -> String {
    format!("{x:.15e}")
}

fn create(path: &Path) -> io::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_summary(path: &Path, checks: &[Check]) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "check,value,tolerance,status")?;
    for c in checks {
        writeln!(w, "{},{},{},{}", c.name, c.value_text(), c.criterion.text(), c.status())?;
    }
    w.flush()
}

pub fn write_timeseries(path: &Path, records: &[Record]) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "step,Pi_1,Pi_2,Pi_3,L_1,L_2,L_3,energy")?;
    for r in records {
        let t = &r.totals;
        let cols: Vec<String> = t
            .linear
            .iter()
            .chain(&t.angular)
            .chain(std::iter::once(&t.energy))
            .map(|&x| num(x))
            .collect();
        writeln!(w, "{},{}", r.step, cols.join(","))?;
    }
    w.flush()
}

pub fn write_orders(path: &Path, rows: &[OrderRow]) -> io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "residual,n_coarse,n_fine,err_coarse,err_fine,order")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.residual,
            r.n_coarse,
            r.n_fine,
            num(r.err_coarse),
            num(r.err_fine),
            r.order
        )?;
    }
    w.flush()
}

/// Legacy ASCII `STRUCTURED_POINTS` file with the four state vectors as
/// point data, x fastest.
pub fn write_vtk(path: &Path, state: &MicropolarState, step: usize) -> io::Result<()> {
    let g = state.grid();
    let (n, h) = (g.n(), g.spacing());
    let mut w = create(path)?;
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "cosserat-forms step {step}")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_POINTS")?;
    writeln!(w, "DIMENSIONS {n} {n} {n}")?;
    writeln!(w, "ORIGIN 0 0 0")?;
    writeln!(w, "SPACING {} {} {}", num(h), num(h), num(h))?;
    writeln!(w, "POINT_DATA {}", g.len())?;
    let fields: [(&str, &VectorField); 4] = [
        ("displacement", &state.displacement),
        ("microrotation", &state.microrotation),
        ("velocity", &state.velocity),
        ("spin", &state.spin),
    ];
    for (name, f) in fields {
        writeln!(w, "VECTORS {name} double")?;
        for p in 0..g.len() {
            let v = f.get(p);
            writeln!(w, "{} {} {}", num(v[0]), num(v[1]), num(v[2]))?;
        }
    }
    w.flush()
}

pub fn snapshot_name(step: usize) -> String {
    format!("snapshot_{step:06}.vtk")
}

//! Output writers: the time-series CSV (fixed column order, 17 significant
//! digits, LF endings) and legacy-ASCII VTK snapshots of the fields and the
//! interface polyline.

use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::SimError;
use crate::fsi::FsiSimulation;
use crate::grid::{vorticity_into, CellField};

/// One row of the harness time series.
#[derive(Clone, Copy, Debug, Default)]
pub struct TimeSeriesRecord {
    pub t: f64,
    pub dcx: f64,
    pub dcy: f64,
    pub vcx: f64,
    pub vcy: f64,
    pub theta: f64,
    pub omega: f64,
    pub fx: f64,
    pub fy: f64,
    pub tz: f64,
    pub tether_linf: f64,
    pub fgmres_iters: usize,
}

pub const CSV_HEADER: &str = "t,dcx,dcy,vcx,vcy,theta,omega,fx,fy,tz,tether_linf,fgmres_iters";

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_row(r: &TimeSeriesRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        fmt(r.t),
        fmt(r.dcx),
        fmt(r.dcy),
        fmt(r.vcx),
        fmt(r.vcy),
        fmt(r.theta),
        fmt(r.omega),
        fmt(r.fx),
        fmt(r.fy),
        fmt(r.tz),
        fmt(r.tether_linf),
        r.fgmres_iters
    )
}

pub fn write_csv(path: &Path, records: &[TimeSeriesRecord]) -> Result<(), SimError> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{}", csv_row(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn parse_csv(text: &str) -> Result<Vec<TimeSeriesRecord>, SimError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| SimError::config("empty CSV"))?;
    if header != CSV_HEADER {
        return Err(SimError::config(format!("unexpected CSV header: {header}")));
    }
    let mut out = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 12 {
            return Err(SimError::config(format!("CSV line {}: wrong column count", ln + 2)));
        }
        let f = |i: usize| -> Result<f64, SimError> {
            cols[i]
                .parse()
                .map_err(|_| SimError::config(format!("CSV line {}: bad number", ln + 2)))
        };
        out.push(TimeSeriesRecord {
            t: f(0)?,
            dcx: f(1)?,
            dcy: f(2)?,
            vcx: f(3)?,
            vcy: f(4)?,
            theta: f(5)?,
            omega: f(6)?,
            fx: f(7)?,
            fy: f(8)?,
            tz: f(9)?,
            tether_linf: f(10)?,
            fgmres_iters: cols[11]
                .parse()
                .map_err(|_| SimError::config(format!("CSV line {}: bad count", ln + 2)))?,
        });
    }
    Ok(out)
}

/// Legacy-ASCII VTK structured-points snapshot with cell-centered velocity
/// (face-averaged), pressure, and vorticity.
pub fn write_vtk_fields(path: &Path, sim: &FsiSimulation) -> Result<(), SimError> {
    let grid = sim.grid;
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "fields t={:.16e}", sim.t)?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_POINTS")?;
    writeln!(w, "DIMENSIONS {} {} 1", grid.nx + 1, grid.ny + 1)?;
    writeln!(w, "ORIGIN {:.16e} {:.16e} 0", grid.x0, grid.y0)?;
    writeln!(w, "SPACING {0:.16e} {0:.16e} 1", grid.h())?;
    writeln!(w, "CELL_DATA {}", grid.nx * grid.ny)?;

    writeln!(w, "SCALARS pressure double 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for j in 0..grid.ny as i32 {
        for i in 0..grid.nx as i32 {
            writeln!(w, "{:.16e}", sim.p.values.get(i, j))?;
        }
    }

    writeln!(w, "VECTORS velocity double")?;
    for j in 0..grid.ny as i32 {
        for i in 0..grid.nx as i32 {
            let u = 0.5 * (sim.vel.u.get(i, j) + sim.vel.u.get(i + 1, j));
            let v = 0.5 * (sim.vel.v.get(i, j) + sim.vel.v.get(i, j + 1));
            writeln!(w, "{:.16e} {:.16e} 0", u, v)?;
        }
    }

    let mut vort = CellField::zeros(&grid);
    vorticity_into(&sim.vel, &grid, &mut vort);
    writeln!(w, "SCALARS vorticity double 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for j in 0..grid.ny as i32 {
        for i in 0..grid.nx as i32 {
            writeln!(w, "{:.16e}", vort.values.get(i, j))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Legacy-ASCII VTK polydata of the interface polyline(s).
pub fn write_vtk_interface(path: &Path, sim: &FsiSimulation) -> Result<(), SimError> {
    let Some(body) = &sim.body else {
        return Err(SimError::config("no interface to write"));
    };
    let mesh = &body.interface;
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "interface t={:.16e}", sim.t)?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET POLYDATA")?;
    writeln!(w, "POINTS {} double", mesh.node_count())?;
    for p in &mesh.position {
        writeln!(w, "{:.16e} {:.16e} 0", p[0], p[1])?;
    }
    writeln!(w, "LINES {} {}", mesh.segments.len(), 3 * mesh.segments.len())?;
    for seg in &mesh.segments {
        writeln!(w, "2 {} {}", seg[0], seg[1])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact_at_17_digits() {
        let records = vec![
            TimeSeriesRecord {
                t: 0.1,
                dcx: 1.0 / 3.0,
                dcy: -2.0e-13,
                vcx: 7.123456789012345e2,
                vcy: 0.0,
                theta: std::f64::consts::PI,
                omega: -1.5,
                fx: 1e-300,
                fy: 2.0,
                tz: -3.0,
                tether_linf: 4.5e-5,
                fgmres_iters: 12,
            },
            TimeSeriesRecord::default(),
        ];
        let mut text = format!("{CSV_HEADER}\n");
        for r in &records {
            text.push_str(&csv_row(r));
            text.push('\n');
        }
        let back = parse_csv(&text).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].t.to_bits(), records[0].t.to_bits());
        assert_eq!(back[0].dcx.to_bits(), records[0].dcx.to_bits());
        assert_eq!(back[0].fx.to_bits(), records[0].fx.to_bits());
        assert_eq!(back[0].theta.to_bits(), records[0].theta.to_bits());
        assert_eq!(back[0].fgmres_iters, 12);
    }

    #[test]
    fn header_only_csv_for_empty_series() {
        let dir = std::env::temp_dir().join("ile2d_csv_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("empty.csv");
        write_csv(&path, &[]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, format!("{CSV_HEADER}\n"));
        let parsed = parse_csv(&text).unwrap();
        assert!(parsed.is_empty());
    }
}

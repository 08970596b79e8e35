//! `series.csv` time series and legacy ASCII VTK snapshots.

use std::fmt::Write as _;
use std::io::{self, Write};

use involute_core::diagnostics::DiagnosticsRecord;
use involute_core::field::comp;
use involute_core::{Formulation, Grid2D, Solution};

pub const SERIES_HEADER: &str = "t,curl_L1,curl_L2,curl_Linf,divpsi_L2,mass,mom1,mom2,mom3,energy";

/// 17 significant digits, enough to round-trip any binary64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_series(mut w: impl Write, records: &[DiagnosticsRecord]) -> io::Result<()> {
    writeln!(w, "{SERIES_HEADER}")?;
    for r in records {
        let divpsi = r.divpsi_l2.map(fmt_f64).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(r.t),
            fmt_f64(r.curl_l1),
            fmt_f64(r.curl_l2),
            fmt_f64(r.curl_linf),
            divpsi,
            fmt_f64(r.total_mass),
            fmt_f64(r.total_momentum[0]),
            fmt_f64(r.total_momentum[1]),
            fmt_f64(r.total_momentum[2]),
            fmt_f64(r.total_energy),
        )?;
    }
    Ok(())
}

/// A parsed numeric CSV table; empty fields read as `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        let header: Vec<String> = lines
            .next()
            .ok_or("empty CSV")?
            .split(',')
            .map(|s| s.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != header.len() {
                return Err(format!(
                    "row {} has {} fields, header has {}",
                    i + 2,
                    fields.len(),
                    header.len()
                ));
            }
            let row = fields
                .iter()
                .map(|f| {
                    let f = f.trim();
                    if f.is_empty() {
                        Ok(None)
                    } else {
                        f.parse::<f64>()
                            .map(Some)
                            .map_err(|_| format!("row {}: `{f}` is not a number", i + 2))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// One `curl_L2_<name>` column per run, joined on identical `t` values.
pub fn merge_curl_columns(runs: &[(Formulation, Vec<DiagnosticsRecord>)]) -> Result<String, String> {
    let Some((_, first)) = runs.first() else {
        return Err("nothing to merge".into());
    };
    for (f, recs) in runs {
        if recs.len() != first.len() || recs.iter().zip(first).any(|(a, b)| a.t != b.t) {
            return Err(format!("{f} was recorded at different times; set record_interval"));
        }
    }
    let mut out = String::from("t");
    for (f, _) in runs {
        write!(out, ",curl_L2_{}", f.name()).unwrap();
    }
    out.push('\n');
    for (i, rec) in first.iter().enumerate() {
        out.push_str(&fmt_f64(rec.t));
        for (_, recs) in runs {
            out.push(',');
            out.push_str(&fmt_f64(recs[i].curl_l2));
        }
        out.push('\n');
    }
    Ok(out)
}

fn vtk_scalars(out: &mut String, name: &str, values: impl Iterator<Item = f64>) {
    writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default").unwrap();
    for v in values {
        writeln!(out, "{}", fmt_f64(v)).unwrap();
    }
}

fn vtk_vectors(out: &mut String, name: &str, values: impl Iterator<Item = [f64; 3]>) {
    writeln!(out, "VECTORS {name} double").unwrap();
    for [a, b, c] in values {
        writeln!(out, "{} {} {}", fmt_f64(a), fmt_f64(b), fmt_f64(c)).unwrap();
    }
}

/// Legacy structured-points snapshot: cells carry `rho`, `v`, `J` (and
/// `psi`, `phi_glm` for GLM); the staggered scheme adds vertex `J_vertex`.
pub fn vtk_snapshot(solution: &Solution, grid: &Grid2D, formulation: Formulation, t: f64) -> String {
    let mut out = String::new();
    writeln!(out, "# vtk DataFile Version 2.0").unwrap();
    writeln!(out, "involute {} t={}", formulation.name(), fmt_f64(t)).unwrap();
    writeln!(out, "ASCII").unwrap();
    writeln!(out, "DATASET STRUCTURED_POINTS").unwrap();
    writeln!(out, "DIMENSIONS {} {} 1", grid.nx + 1, grid.ny + 1).unwrap();
    writeln!(out, "ORIGIN {} {} 0", fmt_f64(grid.x0), fmt_f64(grid.y0)).unwrap();
    writeln!(out, "SPACING {} {} 1", fmt_f64(grid.dx), fmt_f64(grid.dy)).unwrap();
    writeln!(out, "CELL_DATA {}", grid.cells()).unwrap();

    let view = solution.collocated_view(grid);
    let cells: Vec<&[f64]> = view.interior().map(|(_, _, c)| c).collect();
    vtk_scalars(&mut out, "rho", cells.iter().map(|c| c[comp::RHO]));
    vtk_vectors(
        &mut out,
        "v",
        cells.iter().map(|c| {
            let r = c[comp::RHO];
            [c[comp::MOM] / r, c[comp::MOM + 1] / r, c[comp::MOM + 2] / r]
        }),
    );
    vtk_vectors(
        &mut out,
        "J",
        cells.iter().map(|c| [c[comp::J], c[comp::J + 1], c[comp::J + 2]]),
    );
    if formulation == Formulation::Glm {
        vtk_vectors(
            &mut out,
            "psi",
            cells.iter().map(|c| [c[comp::PSI], c[comp::PSI + 1], c[comp::PSI + 2]]),
        );
        vtk_scalars(&mut out, "phi_glm", cells.iter().map(|c| c[comp::PHI]));
    }
    if let Solution::Staggered(s) = solution {
        writeln!(out, "POINT_DATA {}", (grid.nx + 1) * (grid.ny + 1)).unwrap();
        vtk_vectors(
            &mut out,
            "J_vertex",
            s.j.j1.iter().zip(&s.j.j2).map(|(&a, &b)| [a, b, 0.0]),
        );
    }
    out
}

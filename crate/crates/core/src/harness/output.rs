//! Text output and input. Every file is written to a temporary sibling and
//! renamed into place, so readers never see a partial file.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use super::problems::{Geometry, ProblemId, Snapshot};
use crate::error::{HwenoError, Result};
use crate::integrator::RunSummary;
use crate::state::{Grid1, Grid2};

pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| HwenoError::Io(e.error))?;
    Ok(())
}

fn header(s: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(s, "# {key} = {value}");
}

fn grid_block(s: &mut String, name: &str, nx: usize, values: impl Iterator<Item = f64>) {
    header(s, "field", name);
    for (k, x) in values.enumerate() {
        let _ = write!(s, "{x:e}");
        s.push(if (k + 1) % nx == 0 { '\n' } else { ' ' });
    }
}

fn grid_header(s: &mut String, problem: &str, t: f64, g: &Grid2) {
    header(s, "problem", problem);
    header(s, "t", format!("{t:e}"));
    header(s, "dim", 2);
    header(s, "nx", g.nx);
    header(s, "ny", g.ny);
    header(s, "x_range", format!("{:e} {:e}", g.x_lo, g.x_hi));
    header(s, "y_range", format!("{:e} {:e}", g.y_lo, g.y_hi));
}

/// 1D: one row per cell with `x`, the averages, the first moments and the
/// flag. 2D: a header with sizes and extents followed by one row-major
/// block per field, bottom row first.
pub fn format_snapshot(snap: &Snapshot) -> String {
    let mut s = String::new();
    let bit = |b: bool| if b { 1.0 } else { 0.0 };
    match &snap.geometry {
        Geometry::One(g) => {
            header(&mut s, "problem", &snap.problem);
            header(&mut s, "t", format!("{:e}", snap.t));
            header(&mut s, "dim", 1);
            header(&mut s, "cells", g.n_cells);
            header(&mut s, "x_range", format!("{:e} {:e}", g.x_lo, g.x_hi));
            let m1: Vec<String> = snap.names.iter().map(|n| format!("{n}_m1")).collect();
            header(
                &mut s,
                "columns",
                format!("x {} {} flag", snap.names.join(" "), m1.join(" ")),
            );
            for i in 0..g.n_cells {
                let _ = write!(s, "{:e}", g.center(i as isize));
                for col in snap.u.iter().chain(&snap.v) {
                    let _ = write!(s, " {:e}", col[i]);
                }
                let _ = writeln!(s, " {}", u8::from(snap.flags[i]));
            }
        }
        Geometry::Two(g) => {
            grid_header(&mut s, &snap.problem, snap.t, g);
            let mut fields = snap.names.clone();
            fields.extend(snap.names.iter().map(|n| format!("{n}_mx")));
            fields.extend(snap.names.iter().map(|n| format!("{n}_my")));
            fields.extend(["flag".to_string(), "solid".to_string()]);
            header(&mut s, "fields", fields.join(" "));
            let cols = snap.u.iter().chain(&snap.v).chain(&snap.w);
            for (name, col) in fields.iter().zip(cols) {
                grid_block(&mut s, name, g.nx, col.iter().copied());
            }
            grid_block(&mut s, "flag", g.nx, snap.flags.iter().map(|&b| bit(b)));
            grid_block(&mut s, "solid", g.nx, snap.solid.iter().map(|&b| bit(b)));
        }
    }
    s
}

/// Inverse of [`format_snapshot`].
pub fn parse_snapshot(text: &str) -> Result<Snapshot> {
    let err = |m: &str| HwenoError::Parse(m.to_string());
    let mut meta = std::collections::HashMap::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut blocks: Vec<(String, Vec<f64>)> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('#') {
            let (k, v) = h
                .split_once('=')
                .ok_or_else(|| err("header line without '='"))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if k == "field" {
                blocks.push((v, Vec::new()));
            } else {
                meta.insert(k, v);
            }
            continue;
        }
        let vals = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| err(&format!("bad number {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match blocks.last_mut() {
            Some((_, b)) => b.extend(vals),
            None => rows.push(vals),
        }
    }
    let get = |k: &str| {
        meta.get(k)
            .ok_or_else(|| err(&format!("missing header {k}")))
    };
    let num =
        |k: &str| -> Result<f64> { get(k)?.parse().map_err(|_| err(&format!("bad header {k}"))) };
    let range = |k: &str| -> Result<(f64, f64)> {
        let v: Vec<f64> = get(k)?
            .split_whitespace()
            .filter_map(|t| t.parse().ok())
            .collect();
        match v[..] {
            [a, b] => Ok((a, b)),
            _ => Err(err(&format!("bad header {k}"))),
        }
    };
    let problem = get("problem")?.clone();
    let t = num("t")?;
    match get("dim")?.as_str() {
        "1" => {
            let n = num("cells")? as usize;
            let (lo, hi) = range("x_range")?;
            let cols: Vec<&str> = get("columns")?.split_whitespace().collect();
            let nv = (cols.len() - 2) / 2;
            if rows.len() != n || rows.iter().any(|r| r.len() != cols.len()) {
                return Err(err("row count or width does not match the header"));
            }
            let col = |c: usize| rows.iter().map(|r| r[c]).collect::<Vec<_>>();
            Ok(Snapshot {
                problem,
                t,
                geometry: Geometry::One(Grid1::new(n, lo, hi)?),
                names: cols[1..=nv].iter().map(|s| s.to_string()).collect(),
                u: (1..=nv).map(col).collect(),
                v: (nv + 1..=2 * nv).map(col).collect(),
                w: Vec::new(),
                flags: col(2 * nv + 1).iter().map(|&x| x != 0.0).collect(),
                solid: vec![false; n],
            })
        }
        "2" => {
            let (nx, ny) = (num("nx")? as usize, num("ny")? as usize);
            let g = Grid2::new(nx, ny, range("x_range")?, range("y_range")?)?;
            if blocks.iter().any(|(_, b)| b.len() != nx * ny) {
                return Err(err("field block size does not match nx*ny"));
            }
            let nv = (blocks.len() - 2) / 3;
            let take = |r: std::ops::Range<usize>| {
                blocks[r].iter().map(|(_, b)| b.clone()).collect::<Vec<_>>()
            };
            let bits = |k: usize| blocks[k].1.iter().map(|&x| x != 0.0).collect::<Vec<_>>();
            Ok(Snapshot {
                problem,
                t,
                geometry: Geometry::Two(g),
                names: blocks[..nv].iter().map(|(n, _)| n.clone()).collect(),
                u: take(0..nv),
                v: take(nv..2 * nv),
                w: take(2 * nv..3 * nv),
                flags: bits(3 * nv),
                solid: bits(3 * nv + 1),
            })
        }
        d => Err(err(&format!("unsupported dim {d}"))),
    }
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    parse_snapshot(&std::fs::read_to_string(path)?)
}

pub fn format_flag_history(summary: &RunSummary) -> String {
    let mut s = String::from("# step flagged_fraction\n");
    for (k, f) in summary.flag_history.iter().enumerate() {
        let _ = writeln!(s, "{k} {f:e}");
    }
    let _ = writeln!(s, "# mean = {:e}", summary.mean_flag_fraction());
    s
}

/// Write the snapshot, the flag history and, for the 2D gas benchmarks, a
/// density grid with its contour levels. Returns the written paths.
pub fn write_run(
    dir: &Path,
    id: ProblemId,
    snap: &Snapshot,
    summary: &RunSummary,
) -> Result<Vec<PathBuf>> {
    let stem = id.name();
    let mut files = Vec::new();
    let mut put = |name: String, text: String| -> Result<()> {
        let p = dir.join(name);
        write_atomic(&p, &text)?;
        files.push(p);
        Ok(())
    };
    put(format!("{stem}.snapshot"), format_snapshot(snap))?;
    put(format!("{stem}.flags"), format_flag_history(summary))?;
    if let (Some(levels), Geometry::Two(g)) = (id.contour_levels(), &snap.geometry) {
        let mut s = String::new();
        grid_header(&mut s, stem, snap.t, g);
        grid_block(&mut s, "rho", g.nx, snap.u[0].iter().copied());
        put(format!("{stem}_density.grid"), s)?;
        let mut s = String::from("# density contour levels\n");
        for l in levels {
            let _ = writeln!(s, "{l}");
        }
        put(format!("{stem}_contours.txt"), s)?;
    }
    Ok(files)
}

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{Provenance, StructuredMesh};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Legacy ASCII VTK structured grid, z = 0.
pub fn write_vtk<W: Write>(mesh: &StructuredMesh, mut w: W) -> std::io::Result<()> {
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "elastimesh {} mesh", mesh.provenance.as_str())?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_GRID")?;
    writeln!(w, "DIMENSIONS {} {} 1", mesh.ni(), mesh.nj())?;
    writeln!(w, "POINTS {} float", mesh.coords().len())?;
    for p in mesh.coords() {
        writeln!(w, "{} {} 0", p.x, p.y)?;
    }
    w.flush()
}

pub fn export_vtk(mesh: &StructuredMesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_vtk(mesh, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

/// `ni,nj` header, then one `x,y` line per node with 17 significant digits.
pub fn write_csv<W: Write>(mesh: &StructuredMesh, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{},{}", mesh.ni(), mesh.nj())?;
    for p in mesh.coords() {
        writeln!(w, "{:.16e},{:.16e}", p.x, p.y)?;
    }
    w.flush()
}

pub fn export_csv(mesh: &StructuredMesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(mesh, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

fn parse_pair<T: std::str::FromStr>(line: &str, lineno: usize) -> Result<(T, T)> {
    let bad = || Error::Parse {
        line: lineno,
        detail: format!("expected two comma-separated values, found {line:?}"),
    };
    let mut it = line.split(',');
    let a = it.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let b = it.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn import_mesh_csv(path: impl AsRef<Path>) -> Result<StructuredMesh> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let header = match lines.next() {
        Some(l) => l.map_err(|e| Error::io(path, e))?,
        None => {
            return Err(Error::Parse {
                line: 1,
                detail: "empty file".into(),
            })
        }
    };
    let (ni, nj): (usize, usize) = parse_pair(&header, 1)?;
    if ni < 2 || nj < 2 {
        return Err(Error::Parse {
            line: 1,
            detail: format!("header declares a {ni}x{nj} mesh; need at least 2x2"),
        });
    }
    let expected = ni * nj;
    let mut coords = Vec::with_capacity(expected);
    for (k, line) in lines.enumerate() {
        let lineno = k + 2;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        if coords.len() == expected {
            return Err(Error::Parse {
                line: lineno,
                detail: format!("more than the {expected} nodes declared in the header"),
            });
        }
        let (x, y): (f64, f64) = parse_pair(&line, lineno)?;
        coords.push(Point::new(x, y));
    }
    if coords.len() != expected {
        return Err(Error::Parse {
            line: coords.len() + 2,
            detail: format!(
                "header declares {expected} nodes, file has {}",
                coords.len()
            ),
        });
    }
    StructuredMesh::new(ni, nj, coords, Provenance::Imported).map_err(|e| Error::Parse {
        line: 1,
        detail: e.to_string(),
    })
}

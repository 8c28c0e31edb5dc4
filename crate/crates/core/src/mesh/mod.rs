//! Structured quadrilateral meshes, quality metrics and file formats.
//!
//! Nodes are stored row-major with `i` fastest: node `(i, j)` lives at
//! `j * ni + i`. Cell `(i, j)` is the quad `(i,j) (i+1,j) (i+1,j+1) (i,j+1)`.

mod io;
mod quality;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

pub use io::{export_csv, export_vtk, import_mesh_csv, write_csv, write_vtk};
pub use quality::{cell_areas, included_angles, quality_report, QualityReport};

/// Uniform lattice on the computational unit square.
#[derive(Debug, Clone, PartialEq)]
pub struct CompGrid {
    ni: usize,
    nj: usize,
}

impl CompGrid {
    pub fn ni(&self) -> usize {
        self.ni
    }

    pub fn nj(&self) -> usize {
        self.nj
    }

    pub fn len(&self) -> usize {
        self.ni * self.nj
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn xi(&self, i: usize) -> f64 {
        i as f64 / (self.ni - 1) as f64
    }

    pub fn eta(&self, j: usize) -> f64 {
        j as f64 / (self.nj - 1) as f64
    }

    pub fn spacing(&self) -> (f64, f64) {
        (1.0 / (self.ni - 1) as f64, 1.0 / (self.nj - 1) as f64)
    }

    /// `(ξ, η)` of every node in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.nj).flat_map(move |j| (0..self.ni).map(move |i| (self.xi(i), self.eta(j))))
    }
}

pub fn uniform_comp_grid(ni: usize, nj: usize) -> Result<CompGrid> {
    if ni < 2 || nj < 2 {
        return Err(Error::invalid(format!(
            "grid needs at least 2x2 nodes, got {ni}x{nj}"
        )));
    }
    Ok(CompGrid { ni, nj })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "tfi")]
    Tfi,
    #[serde(rename = "pinn")]
    Pinn,
    #[serde(rename = "pinn+hardbc")]
    PinnHardBc,
    /// Read back from a mesh file.
    #[serde(rename = "imported")]
    Imported,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Tfi => "tfi",
            Provenance::Pinn => "pinn",
            Provenance::PinnHardBc => "pinn+hardbc",
            Provenance::Imported => "imported",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructuredMesh {
    ni: usize,
    nj: usize,
    coords: Vec<Point>,
    pub provenance: Provenance,
}

impl StructuredMesh {
    pub fn new(ni: usize, nj: usize, coords: Vec<Point>, provenance: Provenance) -> Result<Self> {
        if ni < 2 || nj < 2 {
            return Err(Error::invalid(format!(
                "mesh needs at least 2x2 nodes, got {ni}x{nj}"
            )));
        }
        if coords.len() != ni * nj {
            return Err(Error::invalid(format!(
                "{} coordinates for a {ni}x{nj} mesh",
                coords.len()
            )));
        }
        if let Some(k) = coords.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite coordinate at node ({}, {})",
                k % ni,
                k / ni
            )));
        }
        Ok(StructuredMesh {
            ni,
            nj,
            coords,
            provenance,
        })
    }

    pub fn ni(&self) -> usize {
        self.ni
    }

    pub fn nj(&self) -> usize {
        self.nj
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    pub fn node(&self, i: usize, j: usize) -> Point {
        self.coords[j * self.ni + i]
    }

    #[cfg(test)]
    pub(crate) fn node_mut(&mut self, i: usize, j: usize) -> &mut Point {
        &mut self.coords[j * self.ni + i]
    }

    pub fn num_cells(&self) -> usize {
        (self.ni - 1) * (self.nj - 1)
    }

    /// Corners of cell `(i, j)` in topological (counterclockwise in ξη)
    /// order.
    pub fn cell(&self, i: usize, j: usize) -> [Point; 4] {
        [
            self.node(i, j),
            self.node(i + 1, j),
            self.node(i + 1, j + 1),
            self.node(i, j + 1),
        ]
    }

    /// Whether node `(i, j)` lies on the lattice boundary.
    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.ni - 1 || j == self.nj - 1
    }
}

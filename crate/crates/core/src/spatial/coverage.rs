//! Grid approximation of the area of a union of discs.
//!
//! Each point is snapped to the centre of its grid cell and each disc is a
//! fixed stencil of cells, those whose centres lie within `r` of the centre
//! cell's centre. The measure of a single disc is therefore always
//! `stencil.len() · h²`, and the gain from adding a point is an exact count
//! of newly covered cells, so model bounds computed from the stencil size
//! hold for every configuration.

use crate::error::{Error, Result};

use super::geometry::{Grain, Point, Window};

/// Cell geometry for one grain radius over one window.
#[derive(Debug, Clone)]
pub struct CoverageGrid {
    window: Window,
    h: f64,
    pad: usize,
    nx: usize,
    ny: usize,
    stencil: Vec<isize>,
}

/// Per-cell cover counts and the number of covered cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Occupancy {
    counts: Vec<u32>,
    covered: usize,
}

impl Occupancy {
    pub fn covered_cells(&self) -> usize {
        self.covered
    }
}

impl CoverageGrid {
    /// Grid of spacing `h` over `window`, padded so that every disc centred
    /// in the window fits.
    pub fn new(window: Window, grain: Grain, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidModel(format!("grid resolution must be positive, got {h}")));
        }
        let reach = (grain.radius / h).floor() as usize;
        let pad = reach + 1;
        let inner_x = (window.width / h).floor() as usize + 1;
        let inner_y = (window.height / h).floor() as usize + 1;
        let nx = inner_x + 2 * pad;
        let ny = inner_y + 2 * pad;
        if nx.saturating_mul(ny) > 1 << 30 {
            return Err(Error::InvalidModel(format!(
                "coverage grid of {nx} x {ny} cells is too large; use a coarser resolution"
            )));
        }
        let r2 = (grain.radius / h).powi(2);
        let reach = reach as isize;
        let mut stencil = Vec::new();
        for dy in -reach..=reach {
            for dx in -reach..=reach {
                if ((dx * dx + dy * dy) as f64) <= r2 {
                    stencil.push(dy * nx as isize + dx);
                }
            }
        }
        Ok(Self { window, h, pad, nx, ny, stencil })
    }

    pub fn resolution(&self) -> f64 {
        self.h
    }

    pub fn cell_area(&self) -> f64 {
        self.h * self.h
    }

    /// Number of cells in one disc.
    pub fn stencil_len(&self) -> usize {
        self.stencil.len()
    }

    /// Grid measure of a single disc.
    pub fn disc_measure(&self) -> f64 {
        self.stencil.len() as f64 * self.cell_area()
    }

    pub fn empty(&self) -> Occupancy {
        Occupancy { counts: vec![0; self.nx * self.ny], covered: 0 }
    }

    pub fn measure(&self, occ: &Occupancy) -> f64 {
        occ.covered as f64 * self.cell_area()
    }

    fn centre(&self, p: &Point) -> usize {
        let inner_x = self.nx - 2 * self.pad;
        let inner_y = self.ny - 2 * self.pad;
        let cx = (((p.x - self.window.x0) / self.h).floor().max(0.0) as usize).min(inner_x - 1);
        let cy = (((p.y - self.window.y0) / self.h).floor().max(0.0) as usize).min(inner_y - 1);
        (cy + self.pad) * self.nx + cx + self.pad
    }

    fn cells(&self, p: &Point) -> impl Iterator<Item = usize> + '_ {
        let c = self.centre(p) as isize;
        self.stencil.iter().map(move |&o| (c + o) as usize)
    }

    /// Cells that adding `p` would newly cover.
    pub fn added_cells(&self, occ: &Occupancy, p: &Point) -> usize {
        self.cells(p).filter(|&i| occ.counts[i] == 0).count()
    }

    /// `m((X ∪ {p}) ⊕ G) − m(X ⊕ G)` on the grid.
    pub fn added_measure(&self, occ: &Occupancy, p: &Point) -> f64 {
        self.added_cells(occ, p) as f64 * self.cell_area()
    }

    pub fn insert(&self, occ: &mut Occupancy, p: &Point) {
        for i in self.cells(p) {
            if occ.counts[i] == 0 {
                occ.covered += 1;
            }
            occ.counts[i] += 1;
        }
    }

    /// Removes one copy of `p`; the point must have been inserted before.
    pub fn remove(&self, occ: &mut Occupancy, p: &Point) {
        for i in self.cells(p) {
            debug_assert!(occ.counts[i] > 0, "removing a point that was never inserted");
            occ.counts[i] -= 1;
            if occ.counts[i] == 0 {
                occ.covered -= 1;
            }
        }
    }
}

/// A grid together with one occupancy, for standalone use.
#[derive(Debug, Clone)]
pub struct CoverageField {
    grid: CoverageGrid,
    occ: Occupancy,
}

impl CoverageField {
    pub fn new(window: Window, grain: Grain, h: f64) -> Result<Self> {
        let grid = CoverageGrid::new(window, grain, h)?;
        let occ = grid.empty();
        Ok(Self { grid, occ })
    }

    pub fn grid(&self) -> &CoverageGrid {
        &self.grid
    }

    pub fn insert(&mut self, p: &Point) {
        self.grid.insert(&mut self.occ, p);
    }

    pub fn remove(&mut self, p: &Point) {
        self.grid.remove(&mut self.occ, p);
    }

    pub fn added_measure(&self, p: &Point) -> f64 {
        self.grid.added_measure(&self.occ, p)
    }

    pub fn measure(&self) -> f64 {
        self.grid.measure(&self.occ)
    }
}

/// Grid measure of `⋃ B(x, r)` over the points of a pattern.
pub fn coverage_measure(window: Window, points: &[Point], grain: Grain, h: f64) -> Result<f64> {
    let mut field = CoverageField::new(window, grain, h)?;
    for p in points {
        field.insert(p);
    }
    Ok(field.measure())
}

/// Grid measure of the area `u`'s disc adds to the union over `points`.
pub fn incremental_coverage(
    window: Window,
    u: &Point,
    points: &[Point],
    grain: Grain,
    h: f64,
) -> Result<f64> {
    let mut field = CoverageField::new(window, grain, h)?;
    for p in points {
        field.insert(p);
    }
    Ok(field.added_measure(u))
}

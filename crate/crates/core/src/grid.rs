//! Homotopy certificates: rectangular stable squares and traces of maps.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphMap, Vertex};
use crate::path::StablePath;

/// A vertex matrix whose rows and columns are walks (equal-or-adjacent steps).
///
/// This is the finite part of a map `I_∞ ⊗ I_∞ -> H` that is constant outside
/// the stored rectangle. Grids built with [`HomotopyGrid::new`] are validated;
/// [`HomotopyGrid::unchecked`] only checks the shape, for certificates that
/// are validated later.
#[derive(Clone, PartialEq, Eq)]
pub struct HomotopyGrid {
    target: Graph,
    cells: Vec<Vec<Vertex>>,
}

/// First violated grid condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridDefect {
    RowStep { row: usize, col: usize },
    ColumnStep { row: usize, col: usize },
}

impl fmt::Display for GridDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridDefect::RowStep { row, col } => {
                write!(f, "row step at row {row}, columns {col}..{}", col + 1)
            }
            GridDefect::ColumnStep { row, col } => {
                write!(f, "column step at column {col}, rows {row}..{}", row + 1)
            }
        }
    }
}

/// The four sides of a grid, each read as a stabilized path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridBoundary {
    pub top: StablePath,
    pub bottom: StablePath,
    pub left: StablePath,
    pub right: StablePath,
}

impl HomotopyGrid {
    pub fn new(target: &Graph, cells: Vec<Vec<Vertex>>) -> Result<HomotopyGrid> {
        let grid = HomotopyGrid::unchecked(target, cells)?;
        grid.validate()
            .map_err(|d| Error::InvalidInput(format!("not a homotopy grid: {d}")))?;
        Ok(grid)
    }

    /// Checks only that the cells form a nonempty rectangle of target vertices.
    pub fn unchecked(target: &Graph, cells: Vec<Vec<Vertex>>) -> Result<HomotopyGrid> {
        let width = cells.first().map_or(0, Vec::len);
        if width == 0 {
            return Err(Error::InvalidInput("grid needs at least one cell".into()));
        }
        if let Some(r) = cells.iter().position(|row| row.len() != width) {
            return Err(Error::InvalidInput(format!(
                "row {r} has {} cells, expected {width}",
                cells[r].len()
            )));
        }
        if cells.iter().flatten().any(|&v| v >= target.num_vertices()) {
            return Err(Error::InvalidInput("grid cell outside the target graph".into()));
        }
        Ok(HomotopyGrid {
            target: target.clone(),
            cells,
        })
    }

    pub(crate) fn from_valid_rows(target: &Graph, cells: Vec<Vec<Vertex>>) -> HomotopyGrid {
        let grid = HomotopyGrid {
            target: target.clone(),
            cells,
        };
        debug_assert!(grid.validate().is_ok());
        grid
    }

    /// A `height x width` grid with every cell `v`.
    pub fn constant(target: &Graph, v: Vertex, height: usize, width: usize) -> Result<HomotopyGrid> {
        HomotopyGrid::new(target, vec![vec![v; width]; height])
    }

    /// A one-row grid: the degenerate homotopy of a row with itself.
    pub fn degenerate(path: &StablePath, width: usize) -> HomotopyGrid {
        HomotopyGrid::from_valid_rows(path.target(), vec![path.padded(width)])
    }

    /// Checks every row step, then every column step.
    pub fn validate(&self) -> Result<(), GridDefect> {
        for (row, cells) in self.cells.iter().enumerate() {
            if let Some(col) = cells.windows(2).position(|s| !self.target.near(s[0], s[1])) {
                return Err(GridDefect::RowStep { row, col });
            }
        }
        for (row, pair) in self.cells.windows(2).enumerate() {
            if let Some(col) = (0..self.width()).find(|&c| !self.target.near(pair[0][c], pair[1][c])) {
                return Err(GridDefect::ColumnStep { row, col });
            }
        }
        Ok(())
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    /// Number of rows, `R + 1`.
    pub fn height(&self) -> usize {
        self.cells.len()
    }

    /// Number of columns, `K + 1`.
    pub fn width(&self) -> usize {
        self.cells[0].len()
    }

    pub fn rows(&self) -> &[Vec<Vertex>] {
        &self.cells
    }

    pub fn row(&self, r: usize) -> &[Vertex] {
        &self.cells[r]
    }

    pub fn column(&self, c: usize) -> Vec<Vertex> {
        self.cells.iter().map(|row| row[c]).collect()
    }

    pub fn cell(&self, r: usize, c: usize) -> Vertex {
        self.cells[r][c]
    }

    /// Sides of a valid grid as canonical paths.
    pub fn boundary(&self) -> Result<GridBoundary> {
        let last_row = self.height() - 1;
        let last_col = self.width() - 1;
        Ok(GridBoundary {
            top: StablePath::new(&self.target, self.row(0))?,
            bottom: StablePath::new(&self.target, self.row(last_row))?,
            left: StablePath::new(&self.target, &self.column(0))?,
            right: StablePath::new(&self.target, &self.column(last_col))?,
        })
    }

    /// Glues `other` to the right; the shared column is stored once.
    pub fn hconcat(&self, other: &HomotopyGrid) -> Result<HomotopyGrid> {
        if self.target != other.target {
            return Err(Error::Concat("grids live in different graphs".into()));
        }
        if self.height() != other.height() {
            return Err(Error::Concat(format!(
                "row counts differ: {} vs {}",
                self.height(),
                other.height()
            )));
        }
        if self.column(self.width() - 1) != other.column(0) {
            return Err(Error::Concat(
                "right column of the first grid differs from the left column of the second".into(),
            ));
        }
        let cells = self
            .cells
            .iter()
            .zip(&other.cells)
            .map(|(a, b)| a.iter().chain(&b[1..]).copied().collect())
            .collect();
        Ok(HomotopyGrid {
            target: self.target.clone(),
            cells,
        })
    }

    /// Mirrors the grid left to right.
    pub fn hreverse(&self) -> HomotopyGrid {
        let cells = self
            .cells
            .iter()
            .map(|row| row.iter().rev().copied().collect())
            .collect();
        HomotopyGrid {
            target: self.target.clone(),
            cells,
        }
    }

    /// Mirrors the grid top to bottom.
    pub fn vreverse(&self) -> HomotopyGrid {
        let mut cells = self.cells.clone();
        cells.reverse();
        HomotopyGrid {
            target: self.target.clone(),
            cells,
        }
    }
}

impl fmt::Debug for HomotopyGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomotopyGrid{:?}", self.cells)
    }
}

/// A sequence of maps, each one step (pointwise equal-or-adjacent) from the
/// previous one: a path in the exponential graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyTrace {
    maps: Vec<GraphMap>,
}

impl HomotopyTrace {
    pub fn new(maps: Vec<GraphMap>) -> Result<HomotopyTrace> {
        let trace = HomotopyTrace { maps };
        trace.validate()?;
        Ok(trace)
    }

    pub(crate) fn from_valid(maps: Vec<GraphMap>) -> HomotopyTrace {
        let trace = HomotopyTrace { maps };
        debug_assert!(trace.validate().is_ok());
        trace
    }

    pub fn validate(&self) -> Result<()> {
        let first = self
            .maps
            .first()
            .ok_or_else(|| Error::InvalidInput("empty homotopy trace".into()))?;
        for (i, f) in self.maps.iter().enumerate() {
            if f.source() != first.source() || f.target() != first.target() {
                return Err(Error::InvalidInput(format!(
                    "map {i} has a different source or target"
                )));
            }
            crate::graph::GraphMap::new(
                f.source().clone(),
                f.target().clone(),
                f.assignment().to_vec(),
            )
            .map_err(|e| Error::InvalidInput(format!("map {i}: {e}")))?;
        }
        if let Some(i) = self.maps.windows(2).position(|w| !w[0].is_near(&w[1])) {
            return Err(Error::InvalidInput(format!(
                "maps {i} and {} are not pointwise equal or adjacent",
                i + 1
            )));
        }
        Ok(())
    }

    pub fn maps(&self) -> &[GraphMap] {
        &self.maps
    }

    pub fn start(&self) -> &GraphMap {
        &self.maps[0]
    }

    pub fn end(&self) -> &GraphMap {
        &self.maps[self.maps.len() - 1]
    }

    /// Number of one-step moves.
    pub fn len(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

//! Rectangular passability grids that the sub-path planners search over.

use crate::geometry::{Cell, Direction};

/// An 8-connected grid of cells that are either passable or not.
pub trait Passability {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    /// Side length of a square cell, in meters.
    fn cell_size(&self) -> f64;
    fn is_passable(&self, cell: Cell) -> bool;

    fn contains(&self, cell: Cell) -> bool {
        cell.row < self.rows() && cell.col < self.cols()
    }

    fn len(&self) -> usize {
        self.rows() * self.cols()
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Passable 8-neighbors in canonical direction order.
    fn passable_neighbors(&self, cell: Cell) -> Vec<(Direction, Cell)> {
        Direction::ALL
            .iter()
            .filter_map(|&d| {
                cell.step(d, self.rows(), self.cols())
                    .filter(|&n| self.is_passable(n))
                    .map(|n| (d, n))
            })
            .collect()
    }
}

/// A plain rectangular grid, used for benchmarks and tests.
#[derive(Clone, Debug, PartialEq)]
pub struct CellGrid {
    rows: usize,
    cols: usize,
    cell_size: f64,
    blocked: Vec<bool>,
}

impl CellGrid {
    pub fn open(rows: usize, cols: usize, cell_size: f64) -> Self {
        Self {
            rows,
            cols,
            cell_size,
            blocked: vec![false; rows * cols],
        }
    }

    /// Parses rows of `.` (passable) and `#` (blocked). The first line is the
    /// top (highest) row, the last line is row 0.
    pub fn from_ascii(text: &str, cell_size: f64) -> Self {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        let rows = lines.len();
        let cols = lines.first().map_or(0, |l| l.len());
        let mut g = Self::open(rows, cols, cell_size);
        for (r, line) in lines.iter().enumerate() {
            assert_eq!(line.len(), cols, "ragged grid row {r}");
            for (c, ch) in line.chars().enumerate() {
                g.set_blocked(Cell::new(rows - 1 - r, c), ch == '#');
            }
        }
        g
    }

    pub fn set_blocked(&mut self, cell: Cell, blocked: bool) {
        let i = cell.index(self.cols);
        self.blocked[i] = blocked;
    }
}

impl Passability for CellGrid {
    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn cell_size(&self) -> f64 {
        self.cell_size
    }

    fn is_passable(&self, cell: Cell) -> bool {
        self.contains(cell) && !self.blocked[cell.index(self.cols)]
    }
}

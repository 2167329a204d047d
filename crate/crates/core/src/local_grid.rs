//! The robot-centered local occupancy grid: the largest axis-aligned square
//! of cells inside the scan disc, with obstacle inflation and the marginal
//! free cells that are eligible as sub-goals.

use std::collections::VecDeque;

use thiserror::Error;

use crate::geometry::{Cell, Direction, Point, Pose};
use crate::grid::Passability;
use crate::scan::{group_by_sector, polar_to_world, Scan};

/// Slack when checking that the square fits inside the scan disc.
const EXTENT_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("square of half-extent {half_extent} x {cell_size} m does not fit in scan radius {radius} m")]
    InvalidExtent {
        half_extent: usize,
        cell_size: f64,
        radius: f64,
    },
    #[error("invalid grid configuration: {0}")]
    InvalidConfig(String),
    #[error("robot is enclosed: no reachable free marginal cell")]
    NoCandidates,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellState {
    Free,
    Occupied,
    Inflated,
    Robot,
}

/// How to discretize a scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub cell_size: f64,
    /// Cells from the center to the square's edge.
    pub half_extent: usize,
    /// Chebyshev radius of the safety margin around occupied cells.
    pub inflation_rings: usize,
    /// Angular sectors used to bucket samples before cell assignment.
    pub n_sectors: usize,
}

impl GridSpec {
    pub fn new(cell_size: f64, half_extent: usize) -> Self {
        Self {
            cell_size,
            half_extent,
            inflation_rings: 1,
            n_sectors: 36,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalGrid {
    center: Pose,
    cell_size: f64,
    half_extent: usize,
    cells: Vec<CellState>,
    sector_counts: Vec<usize>,
}

impl LocalGrid {
    /// Grid with the given occupied cells, inflated by `inflation_rings`.
    pub fn from_occupied(
        center: Pose,
        cell_size: f64,
        half_extent: usize,
        inflation_rings: usize,
        occupied: impl IntoIterator<Item = Cell>,
    ) -> Result<Self, GridError> {
        if half_extent == 0 {
            return Err(GridError::InvalidConfig("half_extent must be >= 1".into()));
        }
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(GridError::InvalidConfig(format!("bad cell size {cell_size}")));
        }
        let side = 2 * half_extent + 1;
        let mut cells = vec![CellState::Free; side * side];
        let robot = Cell::new(half_extent, half_extent);
        let mut hits = Vec::new();
        for c in occupied {
            if c.row < side && c.col < side && c != robot {
                cells[c.index(side)] = CellState::Occupied;
                hits.push(c);
            }
        }
        let rings = inflation_rings as i64;
        for c in hits {
            for dr in -rings..=rings {
                for dc in -rings..=rings {
                    let r = c.row as i64 + dr;
                    let col = c.col as i64 + dc;
                    if r < 0 || col < 0 || r >= side as i64 || col >= side as i64 {
                        continue;
                    }
                    let i = r as usize * side + col as usize;
                    if cells[i] == CellState::Free {
                        cells[i] = CellState::Inflated;
                    }
                }
            }
        }
        cells[robot.index(side)] = CellState::Robot;
        Ok(Self {
            center,
            cell_size,
            half_extent,
            cells,
            sector_counts: Vec::new(),
        })
    }

    pub fn center(&self) -> Pose {
        self.center
    }

    pub fn half_extent(&self) -> usize {
        self.half_extent
    }

    pub fn side(&self) -> usize {
        2 * self.half_extent + 1
    }

    pub fn robot_cell(&self) -> Cell {
        Cell::new(self.half_extent, self.half_extent)
    }

    pub fn state(&self, cell: Cell) -> CellState {
        self.cells[cell.index(self.side())]
    }

    /// Samples per sector from the scan this grid was built from (empty for hand-made grids).
    pub fn sector_counts(&self) -> &[usize] {
        &self.sector_counts
    }

    /// World-frame center of a local cell.
    pub fn world_of(&self, cell: Cell) -> Point {
        let h = self.half_extent as f64;
        Point::new(
            self.center.x + (cell.col as f64 - h) * self.cell_size,
            self.center.y + (cell.row as f64 - h) * self.cell_size,
        )
    }

    /// Local cell containing a world point, if it falls inside the square.
    pub fn cell_of(&self, p: &Point) -> Option<Cell> {
        let h = self.half_extent as f64;
        let col = ((p.x - self.center.x) / self.cell_size + 0.5).floor() + h;
        let row = ((p.y - self.center.y) / self.cell_size + 0.5).floor() + h;
        let side = self.side() as f64;
        if col < 0.0 || row < 0.0 || col >= side || row >= side {
            None
        } else {
            Some(Cell::new(row as usize, col as usize))
        }
    }

    pub fn is_on_ring(&self, cell: Cell) -> bool {
        let last = self.side() - 1;
        cell.row == 0 || cell.col == 0 || cell.row == last || cell.col == last
    }

    fn touches_blocked(&self, cell: Cell) -> bool {
        Direction::ALL.iter().any(|&d| {
            cell.step(d, self.side(), self.side())
                .is_some_and(|n| matches!(self.state(n), CellState::Occupied | CellState::Inflated))
        })
    }

    /// Cells 8-connected to the robot through passable cells.
    pub fn reachable(&self) -> Vec<bool> {
        let side = self.side();
        let mut seen = vec![false; side * side];
        let start = self.robot_cell();
        seen[start.index(side)] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for (_, n) in self.passable_neighbors(c) {
                let i = n.index(side);
                if !seen[i] {
                    seen[i] = true;
                    queue.push_back(n);
                }
            }
        }
        seen
    }

    /// Renders the grid top row first: `R` robot, `#` occupied, `+` inflated, `.` free.
    pub fn to_ascii(&self) -> String {
        let side = self.side();
        let mut out = String::with_capacity(side * (side + 1));
        for r in (0..side).rev() {
            for c in 0..side {
                out.push(match self.state(Cell::new(r, c)) {
                    CellState::Free => '.',
                    CellState::Occupied => '#',
                    CellState::Inflated => '+',
                    CellState::Robot => 'R',
                });
            }
            out.push('\n');
        }
        out
    }
}

impl Passability for LocalGrid {
    fn rows(&self) -> usize {
        self.side()
    }

    fn cols(&self) -> usize {
        self.side()
    }

    fn cell_size(&self) -> f64 {
        self.cell_size
    }

    fn is_passable(&self, cell: Cell) -> bool {
        self.contains(cell) && matches!(self.state(cell), CellState::Free | CellState::Robot)
    }
}

/// Discretizes a scan with one ring of inflation and 36 sectors.
pub fn build_local_grid(
    scan: &Scan,
    cell_size: f64,
    half_extent: usize,
) -> Result<LocalGrid, GridError> {
    build_local_grid_with(scan, &GridSpec::new(cell_size, half_extent))
}

/// Marks the cell containing each sample's world position as occupied
/// (samples outside the square are dropped) and inflates around it.
pub fn build_local_grid_with(scan: &Scan, spec: &GridSpec) -> Result<LocalGrid, GridError> {
    if spec.half_extent == 0 || spec.n_sectors == 0 {
        return Err(GridError::InvalidConfig(
            "half_extent and n_sectors must be >= 1".into(),
        ));
    }
    if spec.half_extent as f64 * spec.cell_size > scan.radius + EXTENT_EPS {
        return Err(GridError::InvalidExtent {
            half_extent: spec.half_extent,
            cell_size: spec.cell_size,
            radius: scan.radius,
        });
    }
    let template = LocalGrid::from_occupied(
        scan.origin,
        spec.cell_size,
        spec.half_extent,
        spec.inflation_rings,
        [],
    )?;
    let sectors = group_by_sector(scan, spec.n_sectors);
    let occupied: Vec<Cell> = sectors
        .iter()
        .flatten()
        .filter_map(|s| template.cell_of(&polar_to_world(&scan.origin, s)))
        .collect();
    let mut grid = LocalGrid::from_occupied(
        scan.origin,
        spec.cell_size,
        spec.half_extent,
        spec.inflation_rings,
        occupied,
    )?;
    grid.sector_counts = sectors.iter().map(Vec::len).collect();
    Ok(grid)
}

/// A sub-goal candidate: a local cell and its world-frame center.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub cell: Cell,
    pub world: Point,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct CandidateSet {
    /// Row-major order.
    pub cells: Vec<Candidate>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.iter().any(|c| c.cell == cell)
    }
}

/// Free cells on the edge of free space that the robot can reach: those on
/// the outer ring of the square and those touching an occupied or inflated cell.
pub fn candidate_cells(grid: &LocalGrid) -> Result<CandidateSet, GridError> {
    let side = grid.side();
    let reachable = grid.reachable();
    let cells: Vec<Candidate> = (0..side * side)
        .map(|i| Cell::from_index(i, side))
        .filter(|&c| {
            grid.state(c) == CellState::Free
                && reachable[c.index(side)]
                && (grid.is_on_ring(c) || grid.touches_blocked(c))
        })
        .map(|cell| Candidate {
            cell,
            world: grid.world_of(cell),
        })
        .collect();
    if cells.is_empty() {
        return Err(GridError::NoCandidates);
    }
    Ok(CandidateSet { cells })
}

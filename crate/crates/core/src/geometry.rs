//! Poses, points, grid cells and the eight movement directions.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    // rem_euclid maps -π to π already; guard against -π sneaking through rounding.
    if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// A point in the world frame, in meters.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    /// Azimuth of `other` seen from `self`, in `(-π, π]`.
    pub fn azimuth_to(&self, other: &Point) -> f64 {
        (other.y - self.y).atan2(other.x - self.x)
    }
}

/// Planar robot pose. `psi` is the yaw, always wrapped into `(-π, π]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub psi: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, psi: f64) -> Self {
        Self {
            x,
            y,
            psi: wrap_angle(psi),
        }
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// A cell of a rectangular grid. `row` grows with world `y`, `col` with world `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// Row-major index in a grid `width` cells wide.
    pub fn index(&self, width: usize) -> usize {
        self.row * width + self.col
    }

    pub fn from_index(index: usize, width: usize) -> Self {
        Self::new(index / width, index % width)
    }

    /// Neighbor in `dir`, if it stays inside a `rows` x `cols` grid.
    pub fn step(&self, dir: Direction, rows: usize, cols: usize) -> Option<Cell> {
        let (dc, dr) = dir.offset();
        let row = self.row as i64 + dr as i64;
        let col = self.col as i64 + dc as i64;
        if row < 0 || col < 0 || row >= rows as i64 || col >= cols as i64 {
            None
        } else {
            Some(Cell::new(row as usize, col as usize))
        }
    }

    /// Direction of a single 8-connected hop from `self` to `to`.
    pub fn direction_to(&self, to: &Cell) -> Option<Direction> {
        let dc = to.col as i64 - self.col as i64;
        let dr = to.row as i64 - self.row as i64;
        Direction::from_offset(dc, dr)
    }

    pub fn is_adjacent(&self, other: &Cell) -> bool {
        self.direction_to(other).is_some()
    }

    pub fn chebyshev(&self, other: &Cell) -> usize {
        self.row.abs_diff(other.row).max(self.col.abs_diff(other.col))
    }
}

/// A world-map cell; signed so that offsets may leave the map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldCell {
    pub col: i64,
    pub row: i64,
}

impl WorldCell {
    pub const fn new(col: i64, row: i64) -> Self {
        Self { col, row }
    }

    pub fn offset(&self, dc: i64, dr: i64) -> Self {
        Self::new(self.col + dc, self.row + dr)
    }

    pub fn center(&self, cell_size: f64) -> Point {
        Point::new(
            (self.col as f64 + 0.5) * cell_size,
            (self.row as f64 + 0.5) * cell_size,
        )
    }

    pub fn containing(p: &Point, cell_size: f64) -> Self {
        Self::new(
            (p.x / cell_size).floor() as i64,
            (p.y / cell_size).floor() as i64,
        )
    }

    pub fn is_adjacent_or_same(&self, other: &WorldCell) -> bool {
        (self.col - other.col).abs() <= 1 && (self.row - other.row).abs() <= 1
    }
}

/// The eight hops of the grid motion model, in canonical order N, NE, E, SE, S, SW, W, NW.
///
/// North is `+row` (world `+y`), east is `+col` (world `+x`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

impl Direction {
    pub const ALL: [Direction; 8] = [
        Direction::N,
        Direction::NE,
        Direction::E,
        Direction::SE,
        Direction::S,
        Direction::SW,
        Direction::W,
        Direction::NW,
    ];

    /// `(d_col, d_row)`.
    pub const fn offset(self) -> (i32, i32) {
        match self {
            Direction::N => (0, 1),
            Direction::NE => (1, 1),
            Direction::E => (1, 0),
            Direction::SE => (1, -1),
            Direction::S => (0, -1),
            Direction::SW => (-1, -1),
            Direction::W => (-1, 0),
            Direction::NW => (-1, 1),
        }
    }

    pub fn from_offset(dc: i64, dr: i64) -> Option<Direction> {
        Some(match (dc, dr) {
            (0, 1) => Direction::N,
            (1, 1) => Direction::NE,
            (1, 0) => Direction::E,
            (1, -1) => Direction::SE,
            (0, -1) => Direction::S,
            (-1, -1) => Direction::SW,
            (-1, 0) => Direction::W,
            (-1, 1) => Direction::NW,
            _ => return None,
        })
    }

    /// Position in the canonical order.
    pub const fn ordinal(self) -> usize {
        self as usize
    }

    pub const fn is_diagonal(self) -> bool {
        matches!(
            self,
            Direction::NE | Direction::SE | Direction::SW | Direction::NW
        )
    }

    /// World-frame heading of the hop, in `(-π, π]`.
    pub fn angle(self) -> f64 {
        match self {
            Direction::E => 0.0,
            Direction::NE => FRAC_PI_4,
            Direction::N => FRAC_PI_2,
            Direction::NW => 3.0 * FRAC_PI_4,
            Direction::W => PI,
            Direction::SW => -3.0 * FRAC_PI_4,
            Direction::S => -FRAC_PI_2,
            Direction::SE => -FRAC_PI_4,
        }
    }

    /// Length of the hop for a given cell size.
    pub fn step_length(self, cell_size: f64) -> f64 {
        if self.is_diagonal() {
            cell_size * SQRT_2
        } else {
            cell_size
        }
    }

    /// Unsigned turn angle between two headings, in `[0, π]`.
    pub fn turn_angle(self, from: Direction) -> f64 {
        let steps = (self.ordinal() as i64 - from.ordinal() as i64).rem_euclid(8);
        let steps = steps.min(8 - steps);
        steps as f64 * FRAC_PI_4
    }
}

/// Length of a sequence of 8-connected hops.
pub fn hop_length(dirs: impl IntoIterator<Item = Direction>, cell_size: f64) -> f64 {
    dirs.into_iter().map(|d| d.step_length(cell_size)).sum()
}

/// Number of direction changes between consecutive hops.
pub fn count_turns(dirs: impl IntoIterator<Item = Direction>) -> usize {
    let mut prev: Option<Direction> = None;
    let mut turns = 0;
    for d in dirs {
        if let Some(p) = prev {
            if p != d {
                turns += 1;
            }
        }
        prev = Some(d);
    }
    turns
}

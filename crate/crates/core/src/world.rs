//! Ground-truth world: a static occupancy bitmap plus obstacles that move
//! along waypoint schedules, one schedule tick at a time.

use thiserror::Error;

use crate::geometry::WorldCell;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorldError {
    #[error("cell ({col}, {row}) is outside the {width}x{height} map")]
    OutOfBounds {
        col: i64,
        row: i64,
        width: usize,
        height: usize,
    },
    #[error("invalid map: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Occupancy {
    Free,
    Occupied,
}

/// What a mover does once it reaches its last waypoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoverPolicy {
    /// Jump back to the first waypoint (which must be adjacent to the last).
    Loop,
    /// Walk the waypoints backwards, then forwards again.
    PingPong,
    /// Stay on the last waypoint forever.
    Stop,
}

impl std::str::FromStr for MoverPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "loop" => Ok(Self::Loop),
            "pingpong" | "ping-pong" => Ok(Self::PingPong),
            "stop" => Ok(Self::Stop),
            other => Err(format!("unknown mover policy `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MovingObstacle {
    /// Offsets `(d_col, d_row)` covered relative to the current waypoint.
    pub footprint: Vec<(i64, i64)>,
    pub waypoints: Vec<WorldCell>,
    pub ticks_per_move: u32,
    pub policy: MoverPolicy,
}

impl MovingObstacle {
    pub fn new(
        footprint: Vec<(i64, i64)>,
        waypoints: Vec<WorldCell>,
        ticks_per_move: u32,
        policy: MoverPolicy,
    ) -> Result<Self, WorldError> {
        if waypoints.is_empty() {
            return Err(WorldError::Invalid("mover has no waypoints".into()));
        }
        if footprint.is_empty() {
            return Err(WorldError::Invalid("mover has an empty footprint".into()));
        }
        if ticks_per_move == 0 {
            return Err(WorldError::Invalid("ticks_per_move must be at least 1".into()));
        }
        for pair in waypoints.windows(2) {
            if !pair[0].is_adjacent_or_same(&pair[1]) {
                return Err(WorldError::Invalid(format!(
                    "waypoints ({}, {}) and ({}, {}) are not 8-adjacent",
                    pair[0].col, pair[0].row, pair[1].col, pair[1].row
                )));
            }
        }
        if policy == MoverPolicy::Loop {
            let (first, last) = (waypoints[0], waypoints[waypoints.len() - 1]);
            if !first.is_adjacent_or_same(&last) {
                return Err(WorldError::Invalid(
                    "loop mover: last waypoint must be 8-adjacent to the first".into(),
                ));
            }
        }
        Ok(Self {
            footprint,
            waypoints,
            ticks_per_move,
            policy,
        })
    }

    /// Index into `waypoints` at a given tick.
    pub fn waypoint_index_at(&self, tick: u64) -> usize {
        let n = self.waypoints.len() as u64;
        let moves = tick / self.ticks_per_move as u64;
        let idx = match self.policy {
            MoverPolicy::Loop => moves % n,
            MoverPolicy::Stop => moves.min(n - 1),
            MoverPolicy::PingPong => {
                if n == 1 {
                    0
                } else {
                    let period = 2 * (n - 1);
                    let phase = moves % period;
                    if phase < n {
                        phase
                    } else {
                        period - phase
                    }
                }
            }
        };
        idx as usize
    }

    pub fn position_at(&self, tick: u64) -> WorldCell {
        self.waypoints[self.waypoint_index_at(tick)]
    }

    /// Cells covered at `tick`.
    pub fn cells_at(&self, tick: u64) -> impl Iterator<Item = WorldCell> + '_ {
        let origin = self.position_at(tick);
        self.footprint
            .iter()
            .map(move |&(dc, dr)| origin.offset(dc, dr))
    }
}

/// Ground-truth map. Snapshots are values: [`WorldMap::advance`] returns a new one.
#[derive(Clone, Debug, PartialEq)]
pub struct WorldMap {
    width: usize,
    height: usize,
    cell_size: f64,
    static_cells: Vec<bool>,
    movers: Vec<MovingObstacle>,
    tick: u64,
}

impl WorldMap {
    /// `static_cells` is row-major, `width * height` long, `true` = occupied.
    pub fn new(
        width: usize,
        height: usize,
        cell_size: f64,
        static_cells: Vec<bool>,
        movers: Vec<MovingObstacle>,
    ) -> Result<Self, WorldError> {
        if width == 0 || height == 0 {
            return Err(WorldError::Invalid("map must be at least 1x1".into()));
        }
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(WorldError::Invalid(format!("bad cell size {cell_size}")));
        }
        if static_cells.len() != width * height {
            return Err(WorldError::Invalid(format!(
                "bitmap has {} cells, expected {}",
                static_cells.len(),
                width * height
            )));
        }
        let map = Self {
            width,
            height,
            cell_size,
            static_cells,
            movers,
            tick: 0,
        };
        for (i, m) in map.movers.iter().enumerate() {
            for wp in &m.waypoints {
                for &(dc, dr) in &m.footprint {
                    let c = wp.offset(dc, dr);
                    if !map.in_bounds(c) {
                        return Err(WorldError::Invalid(format!(
                            "mover {} footprint leaves the map at ({}, {})",
                            i + 1,
                            c.col,
                            c.row
                        )));
                    }
                }
            }
        }
        Ok(map)
    }

    /// An obstacle-free map.
    pub fn empty(width: usize, height: usize, cell_size: f64) -> Self {
        Self::new(width, height, cell_size, vec![false; width * height], vec![])
            .expect("valid empty map")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn movers(&self) -> &[MovingObstacle] {
        &self.movers
    }

    pub fn in_bounds(&self, cell: WorldCell) -> bool {
        cell.col >= 0
            && cell.row >= 0
            && (cell.col as usize) < self.width
            && (cell.row as usize) < self.height
    }

    pub fn is_static_occupied(&self, cell: WorldCell) -> bool {
        self.in_bounds(cell) && self.static_cells[cell.row as usize * self.width + cell.col as usize]
    }

    pub fn set_static(&mut self, cell: WorldCell, occupied: bool) -> Result<(), WorldError> {
        if !self.in_bounds(cell) {
            return Err(self.out_of_bounds(cell));
        }
        self.static_cells[cell.row as usize * self.width + cell.col as usize] = occupied;
        Ok(())
    }

    pub fn occupancy_at(&self, cell: WorldCell) -> Result<Occupancy, WorldError> {
        if !self.in_bounds(cell) {
            return Err(self.out_of_bounds(cell));
        }
        let occupied = self.is_static_occupied(cell)
            || self
                .movers
                .iter()
                .any(|m| m.cells_at(self.tick).any(|c| c == cell));
        Ok(if occupied {
            Occupancy::Occupied
        } else {
            Occupancy::Free
        })
    }

    /// Occupancy for ray casting: anything outside the map counts as solid.
    pub fn is_blocked(&self, cell: WorldCell) -> bool {
        !matches!(self.occupancy_at(cell), Ok(Occupancy::Free))
    }

    /// The snapshot one schedule tick later.
    pub fn advance(&self) -> WorldMap {
        let mut next = self.clone();
        next.tick += 1;
        next
    }

    /// The snapshot at an absolute tick.
    pub fn at_tick(&self, tick: u64) -> WorldMap {
        let mut w = self.clone();
        w.tick = tick;
        w
    }

    fn out_of_bounds(&self, cell: WorldCell) -> WorldError {
        WorldError::OutOfBounds {
            col: cell.col,
            row: cell.row,
            width: self.width,
            height: self.height,
        }
    }
}

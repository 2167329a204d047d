use crate::geometry::{Cell, Direction};

/// Pheromone on every directed 8-connected edge of a `rows` x `cols` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PheromoneField {
    rows: usize,
    cols: usize,
    tau: Vec<f64>,
}

impl PheromoneField {
    pub fn uniform(rows: usize, cols: usize, tau0: f64) -> Self {
        assert!(tau0 > 0.0, "pheromone must start positive");
        Self {
            rows,
            cols,
            tau: vec![tau0; rows * cols * 8],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn slot(&self, from: Cell, dir: Direction) -> usize {
        from.index(self.cols) * 8 + dir.ordinal()
    }

    /// Pheromone on the edge leaving `from` in direction `dir`.
    pub fn get(&self, from: Cell, dir: Direction) -> f64 {
        self.tau[self.slot(from, dir)]
    }

    pub fn set(&mut self, from: Cell, dir: Direction, value: f64) {
        let i = self.slot(from, dir);
        self.tau[i] = value;
    }

    /// Pheromone on the edge `from -> to`; panics unless the cells are 8-adjacent.
    pub fn edge(&self, from: Cell, to: Cell) -> f64 {
        let dir = from.direction_to(&to).expect("cells must be adjacent");
        self.get(from, dir)
    }

    /// `tau <- (1 - rho) * tau` on every edge.
    pub fn evaporate(&mut self, rho: f64) {
        let keep = 1.0 - rho;
        for t in &mut self.tau {
            *t *= keep;
        }
    }

    pub fn deposit(&mut self, from: Cell, to: Cell, amount: f64) {
        let dir = from.direction_to(&to).expect("cells must be adjacent");
        let i = self.slot(from, dir);
        self.tau[i] += amount;
    }

    /// Adds `amount` to every edge walked by `cells`.
    pub fn deposit_path(&mut self, cells: &[Cell], amount: f64) {
        for pair in cells.windows(2) {
            self.deposit(pair[0], pair[1], amount);
        }
    }

    pub fn min(&self) -> f64 {
        self.tau.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn values(&self) -> &[f64] {
        &self.tau
    }
}

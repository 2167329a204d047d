//! Independent 8-connected shortest-path oracle (plain Dijkstra over a
//! passability closure). Shared by test targets; does not touch the planner code.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Shortest 8-connected path length (meters) between `(row, col)` cells.
pub fn dijkstra(
    rows: usize,
    cols: usize,
    cell_size: f64,
    passable: impl Fn(usize, usize) -> bool,
    start: (usize, usize),
    goal: (usize, usize),
) -> Option<f64> {
    let mut dist = vec![f64::INFINITY; rows * cols];
    let idx = |r: usize, c: usize| r * cols + c;
    dist[idx(start.0, start.1)] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Entry(0.0, idx(start.0, start.1)));
    while let Some(Entry(d, i)) = heap.pop() {
        let (r, c) = (i / cols, i % cols);
        if (r, c) == goal {
            return Some(d);
        }
        if d > dist[i] {
            continue;
        }
        for dr in -1i64..=1 {
            for dc in -1i64..=1 {
                if dr == 0 && dc == 0 {
                    continue;
                }
                let nr = r as i64 + dr;
                let nc = c as i64 + dc;
                if nr < 0 || nc < 0 || nr >= rows as i64 || nc >= cols as i64 {
                    continue;
                }
                let (nr, nc) = (nr as usize, nc as usize);
                if !passable(nr, nc) {
                    continue;
                }
                let step = if dr != 0 && dc != 0 {
                    cell_size * 2f64.sqrt()
                } else {
                    cell_size
                };
                let nd = d + step;
                let j = idx(nr, nc);
                if nd < dist[j] {
                    dist[j] = nd;
                    heap.push(Entry(nd, j));
                }
            }
        }
    }
    None
}

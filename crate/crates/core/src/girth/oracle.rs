//! Exact girth by breadth-first search on the expanded Tanner graph.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::Girth;
use crate::error::{invalid, Error, Result};
use crate::exponent::{ExponentMatrix, QcCode};

/// Default cap on the number of Tanner-graph edges the oracle will build.
pub const DEFAULT_ORACLE_MAX_EDGES: usize = 200_000;

pub fn girth_oracle(e: &ExponentMatrix, p: usize) -> Result<Girth> {
    girth_oracle_with_cap(e, p, DEFAULT_ORACLE_MAX_EDGES)
}

/// Builds the Tanner graph of the expanded code (variable nodes = columns,
/// check nodes = rows) and returns the shortest cycle length found by a BFS
/// from every vertex.
pub fn girth_oracle_with_cap(e: &ExponentMatrix, p: usize, max_edges: usize) -> Result<Girth> {
    if p < 2 {
        return invalid(format!("circulant size must be at least 2, got {p}"));
    }
    let edges = e.rows() * e.cols() * p;
    if edges > max_edges {
        return Err(Error::Budget(format!(
            "Tanner graph has {edges} edges, oracle limit is {max_edges}"
        )));
    }
    let h = QcCode::new(e.clone(), p)?.expand();
    let n = h.n_cols();

    // Compressed adjacency: vertices 0..n are columns, n.. are rows.
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n + h.n_rows()];
    for (r, support) in h.row_supports().iter().enumerate() {
        for &c in support {
            adj[c].push((n + r) as u32);
            adj[n + r].push(c as u32);
        }
    }
    let offsets: Vec<usize> = std::iter::once(0)
        .chain(adj.iter().scan(0, |acc, a| {
            *acc += a.len();
            Some(*acc)
        }))
        .collect();
    let targets: Vec<u32> = adj.into_iter().flatten().collect();
    let graph = Csr { offsets, targets };

    let best = AtomicUsize::new(usize::MAX);
    (0..graph.len()).into_par_iter().for_each_init(
        || BfsScratch::new(graph.len()),
        |scratch, source| {
            let bound = best.load(Ordering::Relaxed);
            if let Some(len) = scratch.shortest_cycle_through(&graph, source, bound) {
                best.fetch_min(len, Ordering::Relaxed);
            }
        },
    );
    Ok(match best.into_inner() {
        usize::MAX => Girth::Infinite,
        g => Girth::Finite(g),
    })
}

struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    fn neighbours(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

struct BfsScratch {
    dist: Vec<u32>,
    parent: Vec<u32>,
    touched: Vec<usize>,
    queue: VecDeque<usize>,
}

const UNSEEN: u32 = u32::MAX;

impl BfsScratch {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![UNSEEN; n],
            parent: vec![UNSEEN; n],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    /// Length of the shortest closed walk found through `source`, if any
    /// is shorter than `bound`. Minimised over all sources this is exactly
    /// the girth.
    fn shortest_cycle_through(&mut self, g: &Csr, source: usize, bound: usize) -> Option<usize> {
        for &v in &self.touched {
            self.dist[v] = UNSEEN;
            self.parent[v] = UNSEEN;
        }
        self.touched.clear();
        self.queue.clear();

        let mut best = bound;
        self.dist[source] = 0;
        self.touched.push(source);
        self.queue.push_back(source);
        while let Some(u) = self.queue.pop_front() {
            let du = self.dist[u] as usize;
            // Any cycle closed from here has length at least 2·du.
            if 2 * du >= best {
                break;
            }
            for &w in g.neighbours(u) {
                let w = w as usize;
                if self.dist[w] == UNSEEN {
                    self.dist[w] = du as u32 + 1;
                    self.parent[w] = u as u32;
                    self.touched.push(w);
                    self.queue.push_back(w);
                } else if self.parent[u] != w as u32 {
                    best = best.min(du + self.dist[w] as usize + 1);
                }
            }
        }
        (best < bound).then_some(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_zero_square() {
        let e = ExponentMatrix::zeros(2, 2).unwrap();
        assert_eq!(girth_oracle(&e, 5).unwrap(), Girth::Finite(4));
    }

    #[test]
    fn small_hand_enumerated_graph() {
        // H = [[1 0 1 0], [0 1 0 1], [1 0 0 1], [0 1 1 0]]: one 8-cycle
        // c0-r0-c2-r3-c1-r1-c3-r2-c0 and nothing shorter.
        let e = ExponentMatrix::new(vec![vec![0, 0], vec![0, 1]]).unwrap();
        assert_eq!(girth_oracle(&e, 2).unwrap(), Girth::Finite(8));
    }

    #[test]
    fn forest_is_infinite() {
        let e = ExponentMatrix::new(vec![vec![0, 4, 2]]).unwrap();
        assert_eq!(girth_oracle(&e, 5).unwrap(), Girth::Infinite);
    }

    #[test]
    fn edge_budget() {
        let e = ExponentMatrix::zeros(3, 6).unwrap();
        assert!(matches!(girth_oracle_with_cap(&e, 100, 1000), Err(Error::Budget(_))));
    }
}

//! Exact baselines for small instances.
//!
//! [`minimax_mapping_value`] solves the mapping game by full game-tree search.
//! Values are capped at `bn + 1`: Breaker blocks at most `bn` pairs in the
//! whole game, so no row's cheapest value can exceed that cap and the capped
//! game has the same value.

use std::collections::HashMap;

use crate::dsu::DisjointSet;
use crate::error::{Error, Result};
use crate::transcript::Order;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinimaxConfig {
    pub n: usize,
    pub b: u32,
    pub order: Order,
}

impl MinimaxConfig {
    pub const MAX_N: usize = 4;
    pub const MAX_B: u32 = 2;

    pub fn new(n: usize, b: u32, order: Order) -> Self {
        Self { n, b, order }
    }

    /// `bn + 1`.
    pub fn value_cap(&self) -> u32 {
        self.b * self.n as u32 + 1
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 || self.n > Self::MAX_N || self.b > Self::MAX_B {
            return Err(Error::TooLarge(format!(
                "minimax needs 1 <= n <= {} and b <= {}, got n={} b={}",
                Self::MAX_N,
                Self::MAX_B,
                self.n,
                self.b
            )));
        }
        Ok(())
    }
}

/// Position of the mapping game: blocked-value masks of the unassigned rows
/// (bit `j - 1` for value `j`) and the player to move.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Position {
    rows: Vec<u32>,
    breaker_to_move: bool,
}

struct Search {
    b: u32,
    cap: u32,
    memo: Option<HashMap<Position, u32>>,
}

impl Search {
    fn value(&mut self, mut pos: Position) -> u32 {
        if pos.rows.is_empty() {
            return 0;
        }
        if let Some(memo) = &self.memo {
            // rows are interchangeable
            pos.rows.sort_unstable();
            if let Some(&v) = memo.get(&pos) {
                return v;
            }
        }
        let v = if pos.breaker_to_move { self.breaker(&pos) } else { self.maker(&pos) };
        if let Some(memo) = &mut self.memo {
            memo.insert(pos, v);
        }
        v
    }

    fn maker(&mut self, pos: &Position) -> u32 {
        let mut best = u32::MAX;
        for (i, &mask) in pos.rows.iter().enumerate() {
            for j in 1..=self.cap {
                if mask & (1 << (j - 1)) != 0 || j >= best {
                    continue;
                }
                let mut rows = pos.rows.clone();
                rows.swap_remove(i);
                let v = j + self.value(Position {
                    rows,
                    breaker_to_move: true,
                });
                best = best.min(v);
            }
        }
        best
    }

    fn breaker(&mut self, pos: &Position) -> u32 {
        let open: Vec<(usize, u32)> = pos
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, &mask)| (1..=self.cap).filter(move |&j| mask & (1 << (j - 1)) == 0).map(move |j| (i, j)))
            .collect();
        let k = (self.b as usize).min(open.len());
        let mut best = 0;
        let mut chosen = Vec::with_capacity(k);
        self.subsets(pos, &open, 0, k, &mut chosen, &mut best);
        best
    }

    fn subsets(
        &mut self,
        pos: &Position,
        open: &[(usize, u32)],
        from: usize,
        k: usize,
        chosen: &mut Vec<usize>,
        best: &mut u32,
    ) {
        if chosen.len() == k {
            let mut rows = pos.rows.clone();
            for &c in chosen.iter() {
                let (i, j) = open[c];
                rows[i] |= 1 << (j - 1);
            }
            let v = self.value(Position {
                rows,
                breaker_to_move: false,
            });
            *best = (*best).max(v);
            return;
        }
        for c in from..open.len() {
            chosen.push(c);
            self.subsets(pos, open, c + 1, k, chosen, best);
            chosen.pop();
        }
    }
}

fn solve(cfg: &MinimaxConfig, rows: Vec<u32>, memo: bool) -> Result<u32> {
    cfg.check()?;
    // blocks already present push the cap up by the same amount
    let preblocked: u32 = rows.iter().map(|r| r.count_ones()).sum();
    let cap = cfg.value_cap() + preblocked;
    if cap > 31 {
        return Err(Error::TooLarge(format!("value cap {cap} exceeds 31")));
    }
    let mut search = Search {
        b: cfg.b,
        cap,
        memo: memo.then(HashMap::new),
    };
    Ok(search.value(Position {
        rows,
        breaker_to_move: cfg.order == Order::BreakerFirst,
    }))
}

/// Exact value of `sum f(i)` under optimal play; Maker minimizes, Breaker
/// maximizes.
pub fn minimax_mapping_value(cfg: &MinimaxConfig) -> Result<u32> {
    solve(cfg, vec![0; cfg.n], true)
}

/// The same search without memoization, for cross-checks at tiny sizes.
pub fn minimax_mapping_value_unmemoized(cfg: &MinimaxConfig) -> Result<u32> {
    solve(cfg, vec![0; cfg.n], false)
}

/// Game value from a position where row `i` already has the values in
/// `blocked[i]` (each at most 16) blocked and nothing is assigned yet.
pub fn minimax_value_from(cfg: &MinimaxConfig, blocked: &[Vec<u32>], memo: bool) -> Result<u32> {
    if blocked.len() != cfg.n {
        return Err(Error::Config(format!("{} rows given for n={}", blocked.len(), cfg.n)));
    }
    let cap = 16;
    let mut rows = Vec::with_capacity(cfg.n);
    for row in blocked {
        let mut mask = 0u32;
        for &j in row {
            if j == 0 || j > cap {
                return Err(Error::Config(format!("value {j} outside 1..={cap}")));
            }
            mask |= 1 << (j - 1);
        }
        rows.push(mask);
    }
    solve(cfg, rows, memo)
}

/// Minimum spanning tree of a connected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    pub edges: Vec<(usize, usize)>,
    pub total: f64,
}

/// Kruskal on a symmetric cost matrix; ties broken by `(u, v)`.
pub fn reference_mst(costs: &[Vec<f64>]) -> SpanningTree {
    let n = costs.len();
    let mut edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    edges.sort_by(|&(a, b), &(c, d)| costs[a][b].total_cmp(&costs[c][d]).then((a, b).cmp(&(c, d))));
    let mut dsu = DisjointSet::new(n);
    let mut tree = SpanningTree {
        edges: Vec::with_capacity(n.saturating_sub(1)),
        total: 0.0,
    };
    for (u, v) in edges {
        if !dsu.same(u, v) {
            dsu.union(u, v);
            tree.edges.push((u, v));
            tree.total += costs[u][v];
        }
    }
    tree
}

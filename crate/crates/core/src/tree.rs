//! Undirected spanning-tree games on `K_n`.
//!
//! Two routes:
//! - the split-cost reduction: every edge `{i, j}` becomes two directed edges
//!   with independent costs distributed as `Z`, `P(Z > x) = (1 - x)^(1/2)`,
//!   so `min(c(i,j), c(j,i))` is uniform; Maker then plays the arborescence
//!   game against a Breaker of bias `2b` who must delete edges in pairs;
//! - the greedy game: edges sorted by uniform cost, Maker always takes the
//!   cheapest edge joining two of her components and Breaker deletes the `b`
//!   cheapest such edges.

use rand::{Rng, RngCore};

use crate::arborescence::{play_arborescence_on, ArbBreaker, ArbConfig, DigraphCosts, PaymentMode};
use crate::dsu::DisjointSet;
use crate::error::{Error, Result};
use crate::rng;
use crate::transcript::{CostSource, GameLog, GreedyLog, GreedyMove, GreedyPick, Order, Status, Transcript, Verdict};

/// Inverse-CDF transform of `Z`: `1 - (1 - u)^2`.
pub fn sample_z(u: f64) -> f64 {
    assert!((0.0..=1.0).contains(&u), "u must lie in [0, 1]");
    let v = 1.0 - u;
    1.0 - v * v
}

/// Directed split costs `c(i, j)` for every ordered pair.
#[derive(Debug, Clone)]
pub struct SplitCosts {
    n: usize,
    directed: Vec<f64>,
}

impl SplitCosts {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directed(&self, i: usize, j: usize) -> f64 {
        self.directed[i * self.n + j]
    }

    /// `min(c(i, j), c(j, i))`.
    pub fn undirected(&self, i: usize, j: usize) -> f64 {
        self.directed(i, j).min(self.directed(j, i))
    }

    /// Directed costs in row-major order; the diagonal is zero and unused.
    pub fn directed_matrix(&self) -> &[f64] {
        &self.directed
    }

    /// The instance as arborescence-game costs, rows ordered by real cost.
    pub fn digraph_costs(&self) -> DigraphCosts {
        DigraphCosts::from_weights(self.n, &self.directed)
    }
}

/// Draws all `n(n-1)` directed costs independently from `Z`.
pub fn walkup_split<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> SplitCosts {
    assert!(n >= 2, "split costs need n >= 2");
    let mut directed = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                directed[i * n + j] = sample_z(rng.random::<f64>());
            }
        }
    }
    SplitCosts { n, directed }
}

/// `sum min(c(i,j), c(j,i))` over `edges`.
pub fn undirected_total(costs: &DigraphCosts, edges: &[(usize, usize)]) -> f64 {
    edges
        .iter()
        .map(|&(i, j)| {
            let forward = costs.weight(i, costs.rank(i, j).expect("off-diagonal edge"));
            let back = costs.weight(j, costs.rank(j, i).expect("off-diagonal edge"));
            forward.min(back)
        })
        .sum()
}

/// The undirected tree game through the arborescence game: split costs,
/// Breaker bias `2b` with paired deletions, root-attack Breaker. The cost is
/// the directed total Maker pays; the orientation-free cost of the same
/// edges is recorded as `undirected_total`.
pub fn play_tree_via_arborescence<R: RngCore + ?Sized>(n: usize, b: u32, beta: f64, rng: &mut R) -> Transcript {
    let seed = rng.next_u64();
    let split = walkup_split(n, &mut rng::stream(seed, 0));
    let costs = split.digraph_costs();
    let cfg = ArbConfig {
        n,
        b: 2 * b,
        beta,
        order: Order::BreakerFirst,
        breaker: ArbBreaker::RootAttack,
        paired: true,
        payment: PaymentMode::Rank,
    };
    let mut t = play_arborescence_on(&costs, CostSource::Split { seed }, &cfg, rng);
    if t.status.is_completed() {
        if let GameLog::Arborescence(log) = &mut t.log {
            let edges = tree_edges(log);
            log.undirected_total = Some(undirected_total(&costs, &edges));
        }
    }
    t
}

/// Maker's edges of an arborescence log, in play order.
pub fn tree_edges(log: &crate::transcript::ArbLog) -> Vec<(usize, usize)> {
    log.moves
        .iter()
        .filter_map(|mv| match mv {
            crate::transcript::ArbMove::Maker(m) => Some((m.from, m.to)),
            _ => None,
        })
        .collect()
}

/// Edges of `K_n` sorted by cost, ranks `1..=N`.
#[derive(Debug, Clone)]
pub struct EdgeStream {
    n: usize,
    /// `(weight, u, v)` with `u < v`, ascending by weight then edge index.
    edges: Vec<(f64, u32, u32)>,
}

impl EdgeStream {
    /// Uniform `[0, 1)` costs drawn for the pairs `u < v` in lexicographic
    /// order.
    pub fn uniform<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 2, "edge stream needs n >= 2");
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                edges.push((rng.random::<f64>(), u, v));
            }
        }
        Self::sorted(n, edges)
    }

    /// From a symmetric matrix; only the upper triangle is read.
    pub fn from_matrix(costs: &[Vec<f64>]) -> Self {
        let n = costs.len();
        assert!(n >= 2, "edge stream needs n >= 2");
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((costs[u][v], u as u32, v as u32));
            }
        }
        Self::sorted(n, edges)
    }

    fn sorted(n: usize, mut edges: Vec<(f64, u32, u32)>) -> Self {
        edges.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
        Self { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N = n(n-1)/2`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The edge of rank `rank` (1-based) as `(u, v, weight)`.
    pub fn edge(&self, rank: u64) -> (usize, usize, f64) {
        let (w, u, v) = self.edges[rank as usize - 1];
        (u as usize, v as usize, w)
    }

    /// The upper-triangle costs as a full symmetric matrix.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for &(w, u, v) in &self.edges {
            m[u as usize][v as usize] = w;
            m[v as usize][u as usize] = w;
        }
        m
    }
}

/// Maker's forest, Breaker's deletions and the monotone stream cursor.
#[derive(Debug, Clone)]
pub struct ForestGameState<'a> {
    stream: &'a EdgeStream,
    b: u32,
    dsu: DisjointSet,
    deleted: Vec<bool>,
    selected: Vec<u64>,
    /// Every edge of rank below `cursor + 1` is selected, deleted or joins a
    /// single component.
    cursor: usize,
}

impl<'a> ForestGameState<'a> {
    pub fn new(stream: &'a EdgeStream, b: u32) -> Self {
        Self {
            stream,
            b,
            dsu: DisjointSet::new(stream.n()),
            deleted: vec![false; stream.len()],
            selected: Vec::with_capacity(stream.n() - 1),
            cursor: 0,
        }
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn components(&self) -> usize {
        self.dsu.sets()
    }

    pub fn is_terminal(&self) -> bool {
        self.components() == 1
    }

    /// Ranks `t_1 < t_2 < ...` of Maker's edges.
    pub fn selected(&self) -> &[u64] {
        &self.selected
    }

    pub fn is_deleted(&self, rank: u64) -> bool {
        self.deleted[rank as usize - 1]
    }

    pub fn deleted_count(&self) -> usize {
        self.deleted.iter().filter(|&&d| d).count()
    }

    /// Whether the rank-`rank` edge joins two distinct components of Maker's
    /// forest.
    pub fn joins_components(&self, rank: u64) -> bool {
        let (u, v, _) = self.stream.edge(rank);
        self.dsu.find_const(u) != self.dsu.find_const(v)
    }

    fn usable(&self, idx: usize) -> bool {
        !self.deleted[idx] && self.joins_components(idx as u64 + 1)
    }

    pub fn check_delete(&self, rank: u64) -> std::result::Result<(), String> {
        if rank == 0 || rank as usize > self.stream.len() {
            return Err(format!("rank {rank} out of range"));
        }
        if self.is_deleted(rank) {
            return Err(format!("edge {rank} already deleted"));
        }
        if !self.joins_components(rank) {
            return Err(format!("edge {rank} does not join two components"));
        }
        Ok(())
    }

    pub fn check_select(&self, rank: u64) -> std::result::Result<(), String> {
        if rank == 0 || rank as usize > self.stream.len() {
            return Err(format!("rank {rank} out of range"));
        }
        if self.is_deleted(rank) {
            return Err(format!("edge {rank} was deleted"));
        }
        if !self.joins_components(rank) {
            return Err(format!("edge {rank} closes a cycle"));
        }
        Ok(())
    }

    pub fn delete(&mut self, rank: u64) {
        if let Err(e) = self.check_delete(rank) {
            panic!("illegal deletion: {e}");
        }
        self.deleted[rank as usize - 1] = true;
    }

    pub fn select(&mut self, rank: u64) {
        if let Err(e) = self.check_select(rank) {
            panic!("illegal selection: {e}");
        }
        let (u, v, _) = self.stream.edge(rank);
        self.dsu.union(u, v);
        self.selected.push(rank);
        if cfg!(debug_assertions) && self.stream.n() <= 64 {
            if let Err(e) = self.check_invariants() {
                panic!("forest invariant broken: {e}");
            }
        }
    }

    fn advance_cursor(&mut self) {
        while self.cursor < self.stream.len() && !self.usable(self.cursor) {
            self.cursor += 1;
        }
    }

    /// Acyclicity and the component count.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut dsu = DisjointSet::new(self.stream.n());
        for &rank in &self.selected {
            let (u, v, _) = self.stream.edge(rank);
            if dsu.same(u, v) {
                return Err(format!("edge {rank} closes a cycle"));
            }
            dsu.union(u, v);
        }
        if dsu.sets() != self.stream.n() - self.selected.len() || dsu.sets() != self.components() {
            return Err(format!("{} components for {} edges", self.components(), self.selected.len()));
        }
        Ok(())
    }
}

/// The first undeleted edge from the cursor that joins two components.
pub fn maker_greedy_move(state: &mut ForestGameState<'_>) -> Result<u64> {
    state.advance_cursor();
    if state.cursor == state.stream.len() {
        return Err(Error::NoEdge);
    }
    Ok(state.cursor as u64 + 1)
}

/// The `b` cheapest undeleted edges that join two distinct components; fewer
/// when the stream runs out.
pub fn breaker_greedy_delete(state: &mut ForestGameState<'_>) -> Vec<u64> {
    let mut ranks = Vec::with_capacity(state.b as usize);
    if state.b == 0 {
        return ranks;
    }
    state.advance_cursor();
    let mut idx = state.cursor;
    while ranks.len() < state.b as usize && idx < state.stream.len() {
        if state.usable(idx) {
            ranks.push(idx as u64 + 1);
        }
        idx += 1;
    }
    ranks
}

/// Plays on a fresh stream drawn from the seed `rng` yields first.
pub fn play_greedy_game<R: RngCore + ?Sized>(n: usize, b: u32, rng: &mut R) -> Transcript {
    let edge_seed = rng.next_u64();
    let stream = EdgeStream::uniform(n, &mut rng::stream(edge_seed, 0));
    play_greedy_on(&stream, b, edge_seed)
}

/// Maker first, then alternating Breaker/Maker until the tree spans; the
/// Breaker turn after Maker's last edge is skipped. Ends with
/// [`Status::NoEdge`] if Breaker has deleted every crossing edge.
pub fn play_greedy_on(stream: &EdgeStream, b: u32, edge_seed: u64) -> Transcript {
    let n = stream.n();
    let mut state = ForestGameState::new(stream, b);
    let mut moves = Vec::with_capacity(2 * n);
    let (mut rank_total, mut weight_total) = (0u64, 0.0f64);
    let mut status = Status::Completed;
    loop {
        let Ok(rank) = maker_greedy_move(&mut state) else {
            // only on tiny boards, where b covers every crossing edge
            status = Status::NoEdge { round: state.selected().len() };
            break;
        };
        let (u, v, weight) = stream.edge(rank);
        state.select(rank);
        rank_total += rank;
        weight_total += weight;
        moves.push(GreedyMove::Maker(GreedyPick { rank, u, v, weight }));
        if state.is_terminal() {
            break;
        }
        let ranks = breaker_greedy_delete(&mut state);
        for &r in &ranks {
            state.delete(r);
        }
        moves.push(GreedyMove::Breaker { ranks });
    }
    let log = GreedyLog {
        n,
        b,
        edge_seed,
        moves,
        rank_total,
        normalized_rank_cost: rank_total as f64 / stream.len() as f64,
        weight_total,
    };
    let cost = status.is_completed().then_some(weight_total);
    Transcript::new(status, cost, GameLog::Greedy(log))
}

/// Re-applies a greedy log against `stream`.
pub(crate) fn replay_greedy(t: &Transcript, log: &GreedyLog, stream: &EdgeStream) -> Verdict {
    let mut state = ForestGameState::new(stream, log.b);
    let (mut rank_total, mut weight_total) = (0u64, 0.0f64);
    let mut expect_maker = true;
    for (k, mv) in log.moves.iter().enumerate() {
        match mv {
            GreedyMove::Maker(p) => {
                if !expect_maker {
                    return Verdict::at(k, "Maker moved out of turn");
                }
                if let Err(e) = state.check_select(p.rank) {
                    return Verdict::at(k, e);
                }
                let (u, v, w) = stream.edge(p.rank);
                if (u, v, w) != (p.u, p.v, p.weight) {
                    return Verdict::at(k, format!("edge {} is ({u}, {v}, {w})", p.rank));
                }
                if state.selected().last().is_some_and(|&last| last >= p.rank) {
                    return Verdict::at(k, "ranks not increasing");
                }
                state.select(p.rank);
                rank_total += p.rank;
                weight_total += w;
                expect_maker = false;
            }
            GreedyMove::Breaker { ranks } => {
                if expect_maker || state.is_terminal() {
                    return Verdict::at(k, "Breaker moved out of turn");
                }
                if ranks.len() > log.b as usize {
                    return Verdict::at(k, format!("{} deletions exceed bias {}", ranks.len(), log.b));
                }
                for &r in ranks {
                    if let Err(e) = state.check_delete(r) {
                        return Verdict::at(k, e);
                    }
                    state.delete(r);
                }
                expect_maker = true;
            }
        }
    }
    let end = log.moves.len();
    match t.status {
        Status::Completed if !state.is_terminal() => return Verdict::at(end, "Maker's forest does not span"),
        Status::Completed => {}
        Status::NoEdge { round } => {
            if round != state.selected().len() || maker_greedy_move(&mut state).is_ok() {
                return Verdict::at(end, "Maker had a usable edge left");
            }
        }
        ref other => return Verdict::at(end, format!("unexpected status {other:?}")),
    }
    if rank_total != log.rank_total || weight_total != log.weight_total {
        return Verdict::at(
            end,
            format!(
                "totals ({rank_total}, {weight_total}) recorded as ({}, {})",
                log.rank_total, log.weight_total
            ),
        );
    }
    if rank_total as f64 / stream.len() as f64 != log.normalized_rank_cost {
        return Verdict::at(end, "normalized rank cost mismatch");
    }
    if t.cost != t.status.is_completed().then_some(weight_total) {
        return Verdict::at(end, format!("cost {:?} recorded, expected {weight_total}", t.cost));
    }
    Verdict::Ok
}

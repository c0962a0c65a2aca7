//! The spanning-arborescence game on the complete digraph.
//!
//! Maker's edges always leave the root of one of her components, so every
//! vertex has out-degree at most one and each component keeps exactly one
//! root, the vertex without an out-edge. The game ends when a single
//! component is left.
//!
//! Maker's strategy:
//! - a turn is an *emergency* when some component on at most `n/2` vertices
//!   has a root that Breaker has hit with at least `n^beta` deletions;
//!   otherwise it is *normal*;
//! - on a normal turn she moves from the root of the smallest component
//!   (least root index on ties), on an emergency turn from the flagged root
//!   with the most deletions (least index on ties);
//! - from the chosen root she takes the *sensible choice*: the cheapest
//!   undeleted out-edge that does not point back into her own component.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mapping::PaymentTable;
use crate::rng;
use crate::transcript::{ArbLog, ArbMakerMove, ArbMove, CostSource, GameLog, Order, Status, Transcript, TurnClass, Verdict};

/// Complete-digraph costs stored as per-row target orders.
#[derive(Debug, Clone)]
pub struct DigraphCosts {
    n: usize,
    /// Row `i` lists its `n - 1` targets by increasing cost.
    targets: Vec<u32>,
    weights: Weights,
}

#[derive(Debug, Clone)]
enum Weights {
    /// Maker pays the rank.
    Rank,
    /// Weight of the rank-`r` edge of row `i` at `i * (n-1) + r - 1`.
    Sorted(Vec<f64>),
    /// Rank-`r` edge pays the `r`-th order statistic of the row.
    Payments(PaymentTable),
}

impl DigraphCosts {
    /// Each row an independent uniform permutation of `1..=n-1`.
    pub fn random_permutation<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 2, "cost matrix needs n >= 2");
        let mut targets = Vec::with_capacity(n * (n - 1));
        let mut row: Vec<u32> = Vec::with_capacity(n - 1);
        for i in 0..n {
            row.clear();
            row.extend((0..n as u32).filter(|&j| j as usize != i));
            row.shuffle(rng);
            targets.extend_from_slice(&row);
        }
        Self {
            n,
            targets,
            weights: Weights::Rank,
        }
    }

    /// Costs from an explicit rank matrix: `ranks[i][j]` is `C(i, j)`, the
    /// diagonal is ignored and every row must be a permutation of `1..=n-1`.
    pub fn from_ranks(ranks: &[Vec<u32>]) -> Result<Self> {
        let n = ranks.len();
        if n < 2 {
            return Err(Error::Config("cost matrix needs n >= 2".into()));
        }
        let mut targets = vec![u32::MAX; n * (n - 1)];
        for (i, row) in ranks.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Config(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, &r) in row.iter().enumerate() {
                if j == i {
                    continue;
                }
                if r == 0 || r as usize >= n || targets[i * (n - 1) + r as usize - 1] != u32::MAX {
                    return Err(Error::Config(format!("row {i} is not a permutation of 1..={}", n - 1)));
                }
                targets[i * (n - 1) + r as usize - 1] = j as u32;
            }
        }
        Ok(Self {
            n,
            targets,
            weights: Weights::Rank,
        })
    }

    /// Costs from real weights `w[i * n + j]`; rows are ordered by weight with
    /// ties broken by target index.
    pub fn from_weights(n: usize, w: &[f64]) -> Self {
        assert!(n >= 2 && w.len() == n * n);
        let mut targets = Vec::with_capacity(n * (n - 1));
        let mut sorted = Vec::with_capacity(n * (n - 1));
        let mut row: Vec<u32> = Vec::with_capacity(n - 1);
        for i in 0..n {
            row.clear();
            row.extend((0..n as u32).filter(|&j| j as usize != i));
            row.sort_by(|&a, &b| w[i * n + a as usize].total_cmp(&w[i * n + b as usize]).then(a.cmp(&b)));
            sorted.extend(row.iter().map(|&j| w[i * n + j as usize]));
            targets.extend_from_slice(&row);
        }
        Self {
            n,
            targets,
            weights: Weights::Sorted(sorted),
        }
    }

    /// Pays the `r`-th uniform order statistic for a rank-`r` edge.
    pub fn with_payments(mut self, payments: PaymentTable) -> Self {
        self.weights = Weights::Payments(payments);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Targets of row `i` in increasing cost order.
    pub fn row(&self, i: usize) -> &[u32] {
        let w = self.n - 1;
        &self.targets[i * w..(i + 1) * w]
    }

    /// `C(i, j)` as a rank in `1..=n-1`; `None` on the diagonal.
    pub fn rank(&self, i: usize, j: usize) -> Option<u32> {
        if i == j {
            return None;
        }
        self.row(i).iter().position(|&t| t as usize == j).map(|p| p as u32 + 1)
    }

    /// What Maker pays for the rank-`rank` edge of row `i`.
    pub fn weight(&self, i: usize, rank: u32) -> f64 {
        match &self.weights {
            Weights::Rank => f64::from(rank),
            Weights::Sorted(w) => w[i * (self.n - 1) + rank as usize - 1],
            Weights::Payments(p) => p.value(i, rank).expect("payment rows hold n - 1 ranks"),
        }
    }
}

/// Each row an independent uniform permutation of `1..=n-1`; diagonal unused.
pub fn gen_cost_matrix<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> DigraphCosts {
    DigraphCosts::random_permutation(n, rng)
}

/// Maker's forest and Breaker's deletions.
#[derive(Debug, Clone)]
pub struct ArbState {
    n: usize,
    b: u32,
    paired: bool,
    out: Vec<Option<u32>>,
    deleted: Vec<bool>,
    deleted_from: Vec<u32>,
    deleted_total: usize,
    /// Component label of every vertex.
    comp: Vec<u32>,
    members: Vec<Vec<u32>>,
    root_of: Vec<u32>,
    /// `(size, root)` for every component.
    by_size: BTreeSet<(u32, u32)>,
    /// Current roots in arbitrary order, for uniform sampling.
    roots: Vec<u32>,
    root_pos: Vec<u32>,
    maker_edges: usize,
    first_giant_root: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TurnKind {
    Normal,
    /// Roots of every flagged component, ascending.
    Emergency(Vec<usize>),
}

/// Result of the sensible choice from a root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SensibleChoice {
    pub to: usize,
    pub rank: u32,
    /// Cheaper undeleted targets inside the root's component (`a_t`).
    pub inside: u32,
    /// Cheaper deleted edges (`x_t`).
    pub deleted: u32,
}

impl ArbState {
    pub fn new(n: usize, b: u32, paired: bool) -> Self {
        assert!(n >= 2, "arborescence game needs n >= 2");
        Self {
            n,
            b,
            paired,
            out: vec![None; n],
            deleted: vec![false; n * n],
            deleted_from: vec![0; n],
            deleted_total: 0,
            comp: (0..n as u32).collect(),
            members: (0..n as u32).map(|v| vec![v]).collect(),
            root_of: (0..n as u32).collect(),
            by_size: (0..n as u32).map(|v| (1, v)).collect(),
            roots: (0..n as u32).collect(),
            root_pos: (0..n as u32).collect(),
            maker_edges: 0,
            first_giant_root: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn paired(&self) -> bool {
        self.paired
    }

    pub fn components(&self) -> usize {
        self.by_size.len()
    }

    pub fn is_terminal(&self) -> bool {
        self.components() == 1
    }

    pub fn maker_edge_count(&self) -> usize {
        self.maker_edges
    }

    pub fn deleted_count(&self) -> usize {
        self.deleted_total
    }

    pub fn maker_out(&self, v: usize) -> Option<usize> {
        self.out[v].map(|t| t as usize)
    }

    pub fn maker_edges(&self) -> Vec<(usize, usize)> {
        self.out
            .iter()
            .enumerate()
            .filter_map(|(v, t)| t.map(|t| (v, t as usize)))
            .collect()
    }

    pub fn is_deleted(&self, i: usize, j: usize) -> bool {
        self.deleted[i * self.n + j]
    }

    pub fn is_maker_edge(&self, i: usize, j: usize) -> bool {
        self.out[i] == Some(j as u32)
    }

    /// Breaker deletions on out-edges of `v`.
    pub fn deleted_from(&self, v: usize) -> u32 {
        self.deleted_from[v]
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.out[v].is_none()
    }

    pub fn root_of(&self, v: usize) -> usize {
        self.root_of[self.comp[v] as usize] as usize
    }

    pub fn same_component(&self, u: usize, v: usize) -> bool {
        self.comp[u] == self.comp[v]
    }

    pub fn component_size(&self, v: usize) -> usize {
        self.members[self.comp[v] as usize].len()
    }

    /// Roots ordered by `(component size, root index)`.
    pub fn roots_by_size(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.by_size.iter().map(|&(s, r)| (s as usize, r as usize))
    }

    pub fn first_giant_root(&self) -> Option<usize> {
        self.first_giant_root
    }

    /// Root of the smallest component, least index on ties.
    pub fn smallest_root(&self) -> Option<usize> {
        self.by_size.iter().next().map(|&(_, r)| r as usize)
    }

    /// Checks that Breaker may delete `(i, j)` (and `(j, i)` when paired).
    pub fn check_delete(&self, i: usize, j: usize) -> std::result::Result<(), String> {
        if i >= self.n || j >= self.n || i == j {
            return Err(format!("({i}, {j}) is not an edge"));
        }
        if self.is_deleted(i, j) {
            return Err(format!("({i}, {j}) already deleted"));
        }
        if self.is_maker_edge(i, j) || (self.paired && self.is_maker_edge(j, i)) {
            return Err(format!("({i}, {j}) belongs to Maker"));
        }
        Ok(())
    }

    /// Checks that Maker may add `(i, j)`.
    pub fn check_maker_edge(&self, i: usize, j: usize) -> std::result::Result<(), String> {
        if i >= self.n || j >= self.n || i == j {
            return Err(format!("({i}, {j}) is not an edge"));
        }
        if !self.is_root(i) {
            return Err(format!("{i} is not a root"));
        }
        if self.is_deleted(i, j) {
            return Err(format!("({i}, {j}) was deleted by Breaker"));
        }
        if self.same_component(i, j) {
            return Err(format!("({i}, {j}) points into its own component"));
        }
        Ok(())
    }

    fn mark_deleted(&mut self, i: usize, j: usize) {
        if !self.deleted[i * self.n + j] {
            self.deleted[i * self.n + j] = true;
            self.deleted_from[i] += 1;
            self.deleted_total += 1;
        }
    }

    /// Deletes `(i, j)`, and `(j, i)` too in the paired game.
    pub fn delete(&mut self, i: usize, j: usize) {
        if let Err(e) = self.check_delete(i, j) {
            panic!("illegal deletion: {e}");
        }
        self.mark_deleted(i, j);
        if self.paired {
            self.mark_deleted(j, i);
        }
        self.debug_check();
    }

    /// Adds Maker's edge `(i, j)`: the component of `i` joins that of `j` and
    /// keeps `j`'s root.
    pub fn add_maker_edge(&mut self, i: usize, j: usize) {
        if let Err(e) = self.check_maker_edge(i, j) {
            panic!("illegal Maker edge: {e}");
        }
        let (ci, cj) = (self.comp[i] as usize, self.comp[j] as usize);
        let root = self.root_of[cj];
        self.by_size.remove(&(self.members[ci].len() as u32, i as u32));
        self.by_size.remove(&(self.members[cj].len() as u32, root));
        self.remove_root(i);
        let (keep, gone) = if self.members[ci].len() > self.members[cj].len() { (ci, cj) } else { (cj, ci) };
        let moved = std::mem::take(&mut self.members[gone]);
        for &v in &moved {
            self.comp[v as usize] = keep as u32;
        }
        self.members[keep].extend(moved);
        self.root_of[keep] = root;
        let size = self.members[keep].len();
        self.by_size.insert((size as u32, root));
        self.out[i] = Some(j as u32);
        self.maker_edges += 1;
        if self.first_giant_root.is_none() && 2 * size > self.n {
            self.first_giant_root = Some(root as usize);
        }
        self.debug_check();
    }

    fn remove_root(&mut self, v: usize) {
        let pos = self.root_pos[v] as usize;
        self.roots.swap_remove(pos);
        if let Some(&moved) = self.roots.get(pos) {
            self.root_pos[moved as usize] = pos as u32;
        }
    }

    fn debug_check(&self) {
        if cfg!(debug_assertions) && self.n <= 256 {
            if let Err(e) = self.check_invariants() {
                panic!("arborescence state invariant broken: {e}");
            }
        }
    }

    /// Full structural check of the forest and the deletion bookkeeping.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let n = self.n;
        for (v, t) in self.out.iter().enumerate() {
            if let Some(t) = t {
                if self.is_deleted(v, *t as usize) {
                    return Err(format!("Maker edge ({v}, {t}) is deleted"));
                }
            }
        }
        if self.by_size.len() != n - self.maker_edges {
            return Err(format!("{} components for {} Maker edges", self.by_size.len(), self.maker_edges));
        }
        // following out-edges from any vertex must reach its component's root
        // within n steps, which rules out cycles
        for v in 0..n {
            let mut cur = v;
            let mut steps = 0;
            while let Some(t) = self.out[cur] {
                if !self.same_component(cur, t as usize) {
                    return Err(format!("edge ({cur}, {t}) joins different components"));
                }
                cur = t as usize;
                steps += 1;
                if steps > n {
                    return Err(format!("cycle through {v}"));
                }
            }
            if cur != self.root_of(v) {
                return Err(format!("vertex {v} reaches {cur}, component root is {}", self.root_of(v)));
            }
        }
        let roots = self.out.iter().filter(|t| t.is_none()).count();
        if roots != self.by_size.len() || roots != self.roots.len() {
            return Err(format!("{roots} roots for {} components", self.by_size.len()));
        }
        let mut per_vertex = vec![0u32; n];
        let mut total = 0;
        for i in 0..n {
            for j in 0..n {
                if self.is_deleted(i, j) {
                    per_vertex[i] += 1;
                    total += 1;
                    if self.paired && !self.is_deleted(j, i) {
                        return Err(format!("({i}, {j}) deleted without its reverse"));
                    }
                }
            }
        }
        if per_vertex != self.deleted_from || total != self.deleted_total {
            return Err("deletion counters out of sync".into());
        }
        Ok(())
    }
}

/// Normal unless a component on at most `n/2` vertices has a root with at
/// least `n^beta` deletions.
pub fn classify_turn(state: &ArbState, beta: f64) -> TurnKind {
    let threshold = (state.n as f64).powf(beta);
    let mut flagged: Vec<usize> = state
        .roots_by_size()
        .take_while(|&(size, _)| 2 * size <= state.n)
        .filter(|&(_, root)| f64::from(state.deleted_from(root)) >= threshold)
        .map(|(_, root)| root)
        .collect();
    if flagged.is_empty() {
        TurnKind::Normal
    } else {
        flagged.sort_unstable();
        TurnKind::Emergency(flagged)
    }
}

/// Cheapest undeleted out-edge of `root` that leaves its component.
pub fn sensible_choice(state: &ArbState, costs: &DigraphCosts, root: usize) -> Option<SensibleChoice> {
    debug_assert!(state.is_root(root));
    let (mut inside, mut deleted) = (0u32, 0u32);
    for (k, &j) in costs.row(root).iter().enumerate() {
        let j = j as usize;
        if state.is_deleted(root, j) {
            deleted += 1;
        } else if state.same_component(root, j) {
            inside += 1;
        } else {
            return Some(SensibleChoice {
                to: j,
                rank: k as u32 + 1,
                inside,
                deleted,
            });
        }
    }
    None
}

/// Maker's chosen root and edge for this turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArbMakerChoice {
    pub from: usize,
    pub choice: SensibleChoice,
    pub turn: TurnClass,
}

/// Root selection followed by the sensible choice.
pub fn maker_arb_move(state: &ArbState, costs: &DigraphCosts, beta: f64) -> Result<ArbMakerChoice> {
    let (root, turn) = match classify_turn(state, beta) {
        TurnKind::Normal => (state.smallest_root().expect("game not over"), TurnClass::Normal),
        TurnKind::Emergency(flagged) => {
            let root = flagged
                .into_iter()
                .max_by(|&a, &b| state.deleted_from(a).cmp(&state.deleted_from(b)).then(b.cmp(&a)))
                .expect("emergency has a flagged root");
            (root, TurnClass::Emergency)
        }
    };
    let choice = sensible_choice(state, costs, root).ok_or(Error::MakerStuck { root })?;
    Ok(ArbMakerChoice { from: root, choice, turn })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ArbBreaker {
    /// Delete the cheapest useful out-edges of the root Maker plays next.
    #[default]
    RootAttack,
    /// Delete uniformly random useful edges (root to another component).
    Random,
}

/// The `b` cheapest undeleted out-edges of the predicted root (smallest
/// component, least index) that leave its component, spilling to the next
/// smallest roots. In the paired game each pick uses two deletions.
pub fn breaker_root_attack(state: &ArbState, costs: &DigraphCosts) -> Vec<(usize, usize)> {
    let per_pick = if state.paired { 2 } else { 1 };
    let picks_wanted = state.b as usize / per_pick;
    let mut picks = Vec::with_capacity(picks_wanted);
    if picks_wanted == 0 {
        return picks;
    }
    for (_, root) in state.roots_by_size() {
        for &j in costs.row(root) {
            let j = j as usize;
            if state.same_component(root, j) || state.check_delete(root, j).is_err() {
                continue;
            }
            picks.push((root, j));
            if picks.len() == picks_wanted {
                return picks;
            }
        }
    }
    picks
}

/// Uniformly random useful deletions: a random root, then a random target
/// outside its component.
pub fn breaker_random_delete<R: RngCore + ?Sized>(state: &ArbState, rng: &mut R) -> Vec<(usize, usize)> {
    let per_pick = if state.paired { 2 } else { 1 };
    let picks_wanted = state.b as usize / per_pick;
    let mut picks: Vec<(usize, usize)> = Vec::with_capacity(picks_wanted);
    if picks_wanted == 0 || state.is_terminal() {
        return picks;
    }
    let fresh = |picks: &[(usize, usize)], i: usize, j: usize| {
        !picks.iter().any(|&(a, b)| (a, b) == (i, j) || (state.paired && (a, b) == (j, i)))
    };
    let mut attempts = 0usize;
    while picks.len() < picks_wanted && attempts < 256 * picks_wanted {
        attempts += 1;
        let root = state.roots[rng.random_range(0..state.roots.len())] as usize;
        let j = rng.random_range(0..state.n);
        if j != root && !state.same_component(root, j) && state.check_delete(root, j).is_ok() && fresh(&picks, root, j)
        {
            picks.push((root, j));
        }
    }
    if picks.len() < picks_wanted {
        let mut rest: Vec<(usize, usize)> = state
            .roots
            .iter()
            .flat_map(|&r| (0..state.n).map(move |j| (r as usize, j)))
            .filter(|&(r, j)| !state.same_component(r, j) && state.check_delete(r, j).is_ok() && fresh(&picks, r, j))
            .collect();
        while picks.len() < picks_wanted && !rest.is_empty() {
            let k = rng.random_range(0..rest.len());
            let (r, j) = rest.swap_remove(k);
            if fresh(&picks, r, j) {
                picks.push((r, j));
            }
        }
    }
    picks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PaymentMode {
    /// Maker pays `C(i, j)`, the edge's rank.
    #[default]
    Rank,
    /// Maker pays the rank-th uniform order statistic of the row.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArbConfig {
    pub n: usize,
    /// Directed deletions per Breaker round.
    pub b: u32,
    pub beta: f64,
    pub order: Order,
    pub breaker: ArbBreaker,
    pub paired: bool,
    pub payment: PaymentMode,
}

impl ArbConfig {
    pub fn new(n: usize, b: u32) -> Self {
        Self {
            n,
            b,
            beta: 0.5,
            order: Order::BreakerFirst,
            breaker: ArbBreaker::RootAttack,
            paired: false,
            payment: PaymentMode::Rank,
        }
    }
}

/// Plays on a fresh random instance. The cost seed (and, with uniform
/// payments, the payment seed) is drawn from `rng` first; Breaker's own
/// randomness comes from `rng` afterwards.
pub fn play_arborescence_game<R: RngCore + ?Sized>(cfg: &ArbConfig, rng: &mut R) -> Transcript {
    let seed = rng.next_u64();
    let mut costs = gen_cost_matrix(cfg.n, &mut rng::stream(seed, 0));
    let source = match cfg.payment {
        PaymentMode::Rank => CostSource::Permutation { seed },
        PaymentMode::Uniform => {
            let payment_seed = rng.next_u64();
            costs = costs.with_payments(PaymentTable::sequential(cfg.n - 1, payment_seed));
            CostSource::UniformPayment { seed, payment_seed }
        }
    };
    play_arborescence_on(&costs, source, cfg, rng)
}

fn breaker_turn<R: RngCore + ?Sized>(
    state: &mut ArbState,
    costs: &DigraphCosts,
    cfg: &ArbConfig,
    rng: &mut R,
    moves: &mut Vec<ArbMove>,
) {
    let picks = match cfg.breaker {
        ArbBreaker::RootAttack => breaker_root_attack(state, costs),
        ArbBreaker::Random => breaker_random_delete(state, rng),
    };
    let mut edges = Vec::with_capacity(picks.len() * 2);
    for (i, j) in picks {
        state.delete(i, j);
        edges.push((i, j));
        if cfg.paired {
            edges.push((j, i));
        }
    }
    moves.push(ArbMove::Breaker { edges });
}

/// Plays the game on the given costs.
pub fn play_arborescence_on<R: RngCore + ?Sized>(
    costs: &DigraphCosts,
    source: CostSource,
    cfg: &ArbConfig,
    rng: &mut R,
) -> Transcript {
    assert_eq!(costs.n(), cfg.n);
    assert!(cfg.beta > 0.0 && cfg.beta < 1.0, "beta must lie in (0, 1)");
    let mut state = ArbState::new(cfg.n, cfg.b, cfg.paired);
    let mut moves = Vec::with_capacity(2 * cfg.n);
    let (mut rank_total, mut weight_total) = (0u64, 0.0f64);
    let mut status = Status::Completed;
    let mut round = 0;
    while !state.is_terminal() {
        if cfg.order == Order::BreakerFirst {
            breaker_turn(&mut state, costs, cfg, rng, &mut moves);
        }
        let mv = match maker_arb_move(&state, costs, cfg.beta) {
            Ok(mv) => mv,
            Err(Error::MakerStuck { root }) => {
                status = Status::MakerStuck { round, root };
                break;
            }
            Err(e) => unreachable!("{e}"),
        };
        let weight = costs.weight(mv.from, mv.choice.rank);
        state.add_maker_edge(mv.from, mv.choice.to);
        rank_total += u64::from(mv.choice.rank);
        weight_total += weight;
        moves.push(ArbMove::Maker(ArbMakerMove {
            from: mv.from,
            to: mv.choice.to,
            rank: mv.choice.rank,
            inside: mv.choice.inside,
            deleted: mv.choice.deleted,
            turn: mv.turn,
            weight,
        }));
        round += 1;
        if cfg.order == Order::MakerFirst && !state.is_terminal() {
            breaker_turn(&mut state, costs, cfg, rng, &mut moves);
        }
    }
    let completed = status.is_completed();
    let cost = completed.then(|| match source {
        CostSource::Permutation { .. } => rank_total as f64,
        _ => weight_total,
    });
    let log = ArbLog {
        n: cfg.n,
        b: cfg.b,
        beta: cfg.beta,
        order: cfg.order,
        paired: cfg.paired,
        costs: source,
        moves,
        rank_total,
        weight_total,
        undirected_total: None,
        final_root: if completed { state.smallest_root() } else { None },
        first_giant_root: state.first_giant_root(),
    };
    Transcript::new(status, cost, GameLog::Arborescence(log))
}

/// Rebuilds the instance a log was played on.
pub(crate) fn regenerate_costs(log: &ArbLog) -> Option<DigraphCosts> {
    match log.costs {
        CostSource::Permutation { seed } => Some(gen_cost_matrix(log.n, &mut rng::stream(seed, 0))),
        CostSource::UniformPayment { seed, payment_seed } => Some(
            gen_cost_matrix(log.n, &mut rng::stream(seed, 0))
                .with_payments(PaymentTable::sequential(log.n - 1, payment_seed)),
        ),
        CostSource::Split { seed } => {
            let split = crate::tree::walkup_split(log.n, &mut rng::stream(seed, 0));
            Some(split.digraph_costs())
        }
        CostSource::External => None,
    }
}

/// Re-applies an arborescence log against `costs`.
pub(crate) fn replay_arborescence(t: &Transcript, log: &ArbLog, costs: &DigraphCosts) -> Verdict {
    let mut state = ArbState::new(log.n, log.b, log.paired);
    let (mut rank_total, mut weight_total) = (0u64, 0.0f64);
    let mut expect_breaker = log.order == Order::BreakerFirst;
    for (k, mv) in log.moves.iter().enumerate() {
        match mv {
            ArbMove::Breaker { edges } => {
                if !expect_breaker {
                    return Verdict::at(k, "Breaker moved out of turn");
                }
                if edges.len() > log.b as usize {
                    return Verdict::at(k, format!("{} deletions exceed bias {}", edges.len(), log.b));
                }
                if log.paired && edges.iter().any(|&(i, j)| !edges.contains(&(j, i))) {
                    return Verdict::at(k, "paired deletion missing its reverse");
                }
                for (e, &(i, j)) in edges.iter().enumerate() {
                    if log.paired && edges[..e].contains(&(j, i)) {
                        continue;
                    }
                    if let Err(e) = state.check_delete(i, j) {
                        return Verdict::at(k, e);
                    }
                    state.delete(i, j);
                }
                expect_breaker = false;
            }
            ArbMove::Maker(m) => {
                if expect_breaker {
                    return Verdict::at(k, "Maker moved out of turn");
                }
                if let Err(e) = state.check_maker_edge(m.from, m.to) {
                    return Verdict::at(k, e);
                }
                let turn = match classify_turn(&state, log.beta) {
                    TurnKind::Normal => TurnClass::Normal,
                    TurnKind::Emergency(_) => TurnClass::Emergency,
                };
                if turn != m.turn {
                    return Verdict::at(k, format!("turn recorded as {:?}, state says {turn:?}", m.turn));
                }
                let Some(rank) = costs.rank(m.from, m.to) else {
                    return Verdict::at(k, "edge has no rank");
                };
                let (mut inside, mut deleted) = (0, 0);
                for &j in &costs.row(m.from)[..rank as usize - 1] {
                    if state.is_deleted(m.from, j as usize) {
                        deleted += 1;
                    } else if state.same_component(m.from, j as usize) {
                        inside += 1;
                    }
                }
                if (rank, inside, deleted) != (m.rank, m.inside, m.deleted) {
                    return Verdict::at(
                        k,
                        format!(
                            "rank bookkeeping ({rank}, {inside}, {deleted}) recorded as ({}, {}, {})",
                            m.rank, m.inside, m.deleted
                        ),
                    );
                }
                let weight = costs.weight(m.from, rank);
                if weight != m.weight {
                    return Verdict::at(k, format!("weight {weight} recorded as {}", m.weight));
                }
                state.add_maker_edge(m.from, m.to);
                rank_total += u64::from(rank);
                weight_total += weight;
                expect_breaker = true;
            }
        }
        if log.order == Order::MakerFirst && matches!(mv, ArbMove::Maker(_)) && state.is_terminal() {
            expect_breaker = false;
        }
    }
    let end = log.moves.len();
    if rank_total != log.rank_total || weight_total != log.weight_total {
        return Verdict::at(
            end,
            format!(
                "totals ({rank_total}, {weight_total}) recorded as ({}, {})",
                log.rank_total, log.weight_total
            ),
        );
    }
    if state.first_giant_root() != log.first_giant_root {
        return Verdict::at(end, "first giant root mismatch");
    }
    match &t.status {
        Status::Completed => {
            if !state.is_terminal() {
                return Verdict::at(end, "completed game is not an arborescence");
            }
            if state.smallest_root() != log.final_root {
                return Verdict::at(end, "final root mismatch");
            }
            let expected = match log.costs {
                CostSource::Permutation { .. } => rank_total as f64,
                _ => weight_total,
            };
            if t.cost != Some(expected) {
                return Verdict::at(end, format!("cost {:?} recorded, expected {expected}", t.cost));
            }
            if let Some(u) = log.undirected_total {
                let recomputed = crate::tree::undirected_total(costs, &crate::tree::tree_edges(log));
                if recomputed != u {
                    return Verdict::at(end, format!("undirected total {u} recorded, expected {recomputed}"));
                }
            }
        }
        Status::MakerStuck { root, .. } => {
            if state.is_terminal() || !state.is_root(*root) || sensible_choice(&state, costs, *root).is_some() {
                return Verdict::at(end, format!("root {root} is not stuck"));
            }
        }
        other => return Verdict::at(end, format!("unexpected status {other:?}")),
    }
    Verdict::Ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn two_vertex_matrix() {
        let c = gen_cost_matrix(2, &mut stream(1, 0));
        assert_eq!(c.rank(0, 1), Some(1));
        assert_eq!(c.rank(1, 0), Some(1));
        assert_eq!(c.rank(0, 0), None);
    }

    #[test]
    fn rows_are_permutations_and_seeded() {
        let n = 40;
        let a = gen_cost_matrix(n, &mut stream(5, 0));
        for i in 0..n {
            let mut ranks: Vec<u32> = (0..n).filter(|&j| j != i).map(|j| a.rank(i, j).unwrap()).collect();
            ranks.sort_unstable();
            assert_eq!(ranks, (1..n as u32).collect::<Vec<_>>());
        }
        let b = gen_cost_matrix(n, &mut stream(5, 0));
        assert_eq!(a.targets, b.targets);
    }

    #[test]
    fn from_ranks_rejects_non_permutations() {
        assert!(DigraphCosts::from_ranks(&[vec![0, 1], vec![1, 0]]).is_ok());
        assert!(DigraphCosts::from_ranks(&[vec![0, 1, 1], vec![1, 0, 2], vec![1, 2, 0]]).is_err());
    }

    #[test]
    fn classify_examples() {
        let mut s = ArbState::new(100, 10, false);
        assert_eq!(classify_turn(&s, 0.5), TurnKind::Normal);
        // grow a 10-vertex component rooted at 9
        for v in 0..9 {
            s.add_maker_edge(v, v + 1);
        }
        for j in 20..30 {
            s.delete(9, j);
        }
        assert_eq!(s.component_size(9), 10);
        assert_eq!(classify_turn(&s, 0.5), TurnKind::Emergency(vec![9]));
        // the same deletions on the root of a 51-vertex component are ignored
        let mut big = ArbState::new(100, 10, false);
        for v in 0..50 {
            big.add_maker_edge(v, v + 1);
        }
        for j in 60..70 {
            big.delete(50, j);
        }
        assert_eq!(big.component_size(50), 51);
        assert_eq!(classify_turn(&big, 0.5), TurnKind::Normal);
    }

    fn ranks3() -> DigraphCosts {
        // C(0,1)=1 C(0,2)=2; C(1,2)=1 C(1,0)=2; C(2,0)=1 C(2,1)=2
        DigraphCosts::from_ranks(&[vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]]).unwrap()
    }

    #[test]
    fn sensible_choice_examples() {
        let c = ranks3();
        let s = ArbState::new(3, 1, false);
        let ch = sensible_choice(&s, &c, 0).unwrap();
        assert_eq!((ch.to, ch.rank, ch.inside, ch.deleted), (1, 1, 0, 0));

        // 2 -> 0 puts 2 into 0's component; from root 0 rank 1 leaves
        let mut s = ArbState::new(3, 1, false);
        s.add_maker_edge(1, 0);
        // component {0,1} rooted at 0: 0's rank-1 target (1) is inside
        let ch = sensible_choice(&s, &c, 0).unwrap();
        assert_eq!((ch.to, ch.rank, ch.inside, ch.deleted), (2, 2, 1, 0));

        let mut s = ArbState::new(3, 1, false);
        s.delete(0, 1);
        let ch = sensible_choice(&s, &c, 0).unwrap();
        assert_eq!((ch.to, ch.rank, ch.inside, ch.deleted), (2, 2, 0, 1));
    }

    #[test]
    fn sensible_choice_blocked() {
        let c = ranks3();
        let mut s = ArbState::new(3, 2, false);
        s.delete(0, 1);
        s.delete(0, 2);
        assert_eq!(sensible_choice(&s, &c, 0), None);
        assert_eq!(maker_arb_move(&s, &c, 0.5), Err(Error::MakerStuck { root: 0 }));
    }

    #[test]
    fn maker_prefers_smallest_component() {
        let c = gen_cost_matrix(5, &mut stream(3, 0));
        let s = ArbState::new(5, 0, false);
        let mv = maker_arb_move(&s, &c, 0.5).unwrap();
        assert_eq!(mv.from, 0);
        assert_eq!(mv.choice.rank, 1);

        let mut s = ArbState::new(5, 0, false);
        s.add_maker_edge(0, 1);
        s.add_maker_edge(2, 3);
        s.add_maker_edge(3, 4);
        assert_eq!(s.component_size(1), 2);
        let mv = maker_arb_move(&s, &c, 0.5).unwrap();
        assert_eq!(mv.from, 1);
    }

    #[test]
    fn emergency_picks_most_deleted_root() {
        let n = 16;
        let c = gen_cost_matrix(n, &mut stream(4, 0));
        let mut s = ArbState::new(n, 8, false);
        for j in 8..13 {
            s.delete(3, j);
        }
        for j in 8..12 {
            s.delete(5, j);
        }
        let mv = maker_arb_move(&s, &c, 0.5).unwrap();
        assert_eq!((mv.from, mv.turn), (3, TurnClass::Emergency));
    }

    #[test]
    fn root_attack_contract() {
        let n = 30;
        let c = gen_cost_matrix(n, &mut stream(8, 0));
        let s = ArbState::new(n, 0, false);
        assert!(breaker_root_attack(&s, &c).is_empty());
        let mut s = ArbState::new(n, 3, false);
        let picks = breaker_root_attack(&s, &c);
        assert_eq!(picks.len(), 3);
        let before = s.deleted_from(0);
        for &(i, j) in &picks {
            assert_eq!(i, 0);
            assert!(s.check_delete(i, j).is_ok());
        }
        let ranks: Vec<u32> = picks.iter().map(|&(i, j)| c.rank(i, j).unwrap()).collect();
        assert_eq!(ranks, vec![1, 2, 3]);
        for &(i, j) in &picks {
            s.delete(i, j);
        }
        assert_eq!(s.deleted_from(0), before + 3);
    }

    #[test]
    fn root_attack_spills_to_next_root() {
        let c = gen_cost_matrix(3, &mut stream(2, 0));
        let s = ArbState::new(3, 3, false);
        let picks = breaker_root_attack(&s, &c);
        assert_eq!(picks.len(), 3);
        assert_eq!(picks.iter().filter(|p| p.0 == 0).count(), 2);
        assert_eq!(picks[2].0, 1);
    }

    #[test]
    fn random_breaker_is_legal_and_seeded() {
        let n = 20;
        let mut s = ArbState::new(n, 4, true);
        s.add_maker_edge(0, 1);
        let a = breaker_random_delete(&s, &mut stream(6, 1));
        assert_eq!(a, breaker_random_delete(&s, &mut stream(6, 1)));
        assert_eq!(a.len(), 2);
        for &(i, j) in &a {
            assert!(s.is_root(i));
            assert!(!s.same_component(i, j));
            s.delete(i, j);
            assert!(s.is_deleted(j, i));
        }
    }

    #[test]
    fn no_breaker_game() {
        let cfg = ArbConfig::new(60, 0);
        let t = play_arborescence_game(&cfg, &mut stream(10, 0));
        let GameLog::Arborescence(log) = &t.log else { panic!() };
        assert!(t.status.is_completed());
        let mut extra = 0;
        for mv in &log.moves {
            match mv {
                ArbMove::Maker(m) => {
                    assert_eq!(m.deleted, 0);
                    assert_eq!(m.rank, 1 + m.inside);
                    extra += m.inside;
                }
                ArbMove::Breaker { edges } => assert!(edges.is_empty()),
            }
        }
        assert_eq!(log.rank_total, 59 + u64::from(extra));
    }

    #[test]
    fn rank_decomposition_and_final_root() {
        for (seed, order, breaker) in [
            (1, Order::BreakerFirst, ArbBreaker::RootAttack),
            (2, Order::MakerFirst, ArbBreaker::Random),
            (3, Order::BreakerFirst, ArbBreaker::Random),
        ] {
            let mut cfg = ArbConfig::new(120, 3);
            cfg.order = order;
            cfg.breaker = breaker;
            cfg.beta = 0.3;
            let t = play_arborescence_game(&cfg, &mut stream(seed, 0));
            assert!(t.status.is_completed());
            let GameLog::Arborescence(log) = &t.log else { panic!() };
            let mut sum = 0u64;
            for mv in &log.moves {
                if let ArbMove::Maker(m) = mv {
                    assert_eq!(m.rank, 1 + m.inside + m.deleted);
                    sum += u64::from(m.rank);
                }
            }
            assert_eq!(sum, log.rank_total);
            assert_eq!(t.cost, Some(sum as f64));
            assert_eq!(t.maker_moves(), 119);
            assert_eq!(log.final_root, log.first_giant_root);
        }
    }
}

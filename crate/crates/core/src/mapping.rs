//! The mapping game and its bounded (box) variant.
//!
//! Maker assigns a value `f(i) >= 1` to one row `i` per round; Breaker makes
//! `b` pairs `(i, j)` unavailable per round. Maker pays `sum f(i)`. The
//! potential `Phi = sum_{i unassigned} r_i`, where `r_i` is the least value
//! still open to row `i`, drops by exactly `f(i)` on a potential move and
//! rises by at most `b` per Breaker round. Telescoping gives
//! `sum f(i) <= (b+1) n` when Breaker opens and `(n-1) b + n` when Maker does.
//!
//! In the bounded game every value must be at most `m`; a row whose `m`
//! values are all blocked is dead and the game is lost.

use std::collections::BTreeSet;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, open01};
use crate::transcript::{GameLog, MappingLog, MappingMove, Order, PaymentRecord, Status, Transcript, Verdict};

/// Position of a mapping game.
#[derive(Debug, Clone)]
pub struct MappingState {
    n: usize,
    b: u32,
    m: Option<u32>,
    order: Order,
    assigned: Vec<Option<u32>>,
    blocked: Vec<BTreeSet<u32>>,
    /// Least open value per row; `m + 1` once the row is dead.
    r: Vec<u32>,
    /// `(r_i, i)` for unassigned live rows.
    frontier: BTreeSet<(u32, usize)>,
    unassigned: BTreeSet<usize>,
    /// Unassigned rows in arbitrary order, for O(1) uniform sampling.
    pool: Vec<usize>,
    pool_pos: Vec<usize>,
    dead: BTreeSet<usize>,
    blocks: usize,
    maker_turns: usize,
    breaker_turns: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Potential {
    Finite(u64),
    /// Some unassigned row is dead.
    Lost,
}

impl MappingState {
    pub fn new(n: usize, b: u32, m: Option<u32>, order: Order) -> Self {
        assert!(n >= 1, "mapping game needs n >= 1");
        if let Some(m) = m {
            assert!(m >= 1, "value cap must be positive");
        }
        Self {
            n,
            b,
            m,
            order,
            assigned: vec![None; n],
            blocked: vec![BTreeSet::new(); n],
            r: vec![1; n],
            frontier: (0..n).map(|i| (1, i)).collect(),
            unassigned: (0..n).collect(),
            pool: (0..n).collect(),
            pool_pos: (0..n).collect(),
            dead: BTreeSet::new(),
            blocks: 0,
            maker_turns: 0,
            breaker_turns: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn bound(&self) -> Option<u32> {
        self.m
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn assigned(&self, i: usize) -> Option<u32> {
        self.assigned[i]
    }

    pub fn is_blocked(&self, i: usize, j: u32) -> bool {
        self.blocked[i].contains(&j)
    }

    pub fn blocked_count(&self) -> usize {
        self.blocks
    }

    pub fn unassigned_count(&self) -> usize {
        self.unassigned.len()
    }

    pub fn maker_turns(&self) -> usize {
        self.maker_turns
    }

    pub fn breaker_turns(&self) -> usize {
        self.breaker_turns
    }

    pub fn has_dead_row(&self) -> bool {
        !self.dead.is_empty()
    }

    pub fn first_dead_row(&self) -> Option<usize> {
        self.dead.iter().next().copied()
    }

    /// `sum f(i)` over assigned rows.
    pub fn value_total(&self) -> u64 {
        self.assigned.iter().flatten().map(|&v| u64::from(v)).sum()
    }

    pub fn assignment(&self) -> Vec<Option<u32>> {
        self.assigned.clone()
    }

    /// Largest value a Breaker ever needs to block: `m`, or `b n + 1` in the
    /// unbounded game (Breaker blocks at most `b n` pairs in total).
    pub fn value_cap(&self) -> u32 {
        self.m.unwrap_or_else(|| self.b.saturating_mul(self.n as u32).saturating_add(1))
    }

    /// `r_i(t)`: the least value row `i` can still take.
    pub fn r_min(&self, i: usize) -> Result<u32> {
        if self.assigned[i].is_some() {
            return Err(Error::AlreadyAssigned(i));
        }
        if self.dead.contains(&i) {
            return Err(Error::BoxDead { row: i });
        }
        Ok(self.r[i])
    }

    /// Number of values still open to row `i` (bounded game only).
    pub fn box_size(&self, i: usize) -> Option<u32> {
        self.m.map(|m| m - self.blocked[i].range(..=m).count() as u32)
    }

    pub fn potential(&self) -> Potential {
        if self.has_dead_row() {
            return Potential::Lost;
        }
        Potential::Finite(self.unassigned.iter().map(|&i| u64::from(self.r[i])).sum())
    }

    fn within_bound(&self, j: u32) -> bool {
        j >= 1 && self.m.is_none_or(|m| j <= m)
    }

    /// Checks that Breaker may block `(i, j)`.
    pub fn check_block(&self, i: usize, j: u32) -> std::result::Result<(), String> {
        if i >= self.n {
            return Err(format!("row {i} out of range"));
        }
        if self.assigned[i].is_some() {
            return Err(format!("row {i} is already assigned"));
        }
        if !self.within_bound(j) {
            return Err(format!("value {j} outside the board"));
        }
        if self.blocked[i].contains(&j) {
            return Err(format!("pair ({i}, {j}) already blocked"));
        }
        Ok(())
    }

    /// Checks that Maker may set `f(i) = j`.
    pub fn check_assign(&self, i: usize, j: u32) -> std::result::Result<(), String> {
        if i >= self.n {
            return Err(format!("row {i} out of range"));
        }
        if self.assigned[i].is_some() {
            return Err(format!("row {i} is already assigned"));
        }
        if !self.within_bound(j) {
            return Err(format!("value {j} outside the board"));
        }
        if self.blocked[i].contains(&j) {
            return Err(format!("pair ({i}, {j}) is blocked"));
        }
        Ok(())
    }

    pub fn block(&mut self, i: usize, j: u32) {
        if let Err(e) = self.check_block(i, j) {
            panic!("illegal block: {e}");
        }
        self.blocked[i].insert(j);
        self.blocks += 1;
        if j == self.r[i] {
            self.frontier.remove(&(self.r[i], i));
            let mut next = j + 1;
            while self.blocked[i].contains(&next) {
                next += 1;
            }
            self.r[i] = next;
            if self.within_bound(next) {
                self.frontier.insert((next, i));
            } else {
                self.dead.insert(i);
            }
        }
    }

    pub fn assign(&mut self, i: usize, j: u32) {
        if let Err(e) = self.check_assign(i, j) {
            panic!("illegal assignment: {e}");
        }
        self.assigned[i] = Some(j);
        self.frontier.remove(&(self.r[i], i));
        self.unassigned.remove(&i);
        let pos = self.pool_pos[i];
        self.pool.swap_remove(pos);
        if let Some(&moved) = self.pool.get(pos) {
            self.pool_pos[moved] = pos;
        }
    }

    pub(crate) fn end_breaker_turn(&mut self) {
        self.breaker_turns += 1;
    }

    pub(crate) fn end_maker_turn(&mut self) {
        self.maker_turns += 1;
    }

    fn live_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.unassigned.iter().copied().filter(|i| !self.dead.contains(i))
    }
}

/// Which unassigned row a potential-strategy Maker claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MakerRule {
    /// Least-index live row.
    #[default]
    Potential,
    /// Live row with the fewest open values, least index on ties.
    MinBox,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BreakerRule {
    /// Block the current minima of the rows with the smallest `r_i`.
    #[default]
    Minima,
    /// Block uniformly random open pairs.
    Random,
}

/// Potential strategy: claim some row `i` at its least open value `r_i`.
pub fn maker_potential_move(state: &MappingState, rule: MakerRule) -> Result<(usize, u32)> {
    match rule {
        MakerRule::Potential => {
            let i = state.live_rows().next().ok_or(Error::GameLost)?;
            Ok((i, state.r[i]))
        }
        MakerRule::MinBox => maker_minbox_move(state),
    }
}

/// Box-game strategy: claim the live row with the fewest open values (least
/// index on ties) at its least open value.
pub fn maker_minbox_move(state: &MappingState) -> Result<(usize, u32)> {
    let m = state.m.expect("min-box rule needs a bounded game");
    let mut best: Option<(u32, usize)> = None;
    for i in state.live_rows() {
        let size = m - state.blocked[i].range(..=m).count() as u32;
        if best.is_none_or(|(s, _)| size < s) {
            best = Some((size, i));
        }
    }
    let (_, i) = best.ok_or(Error::GameLost)?;
    Ok((i, state.r[i]))
}

/// Blocks `(i, r_i)` on the `b` live rows with the smallest `r_i` (least index
/// on ties). With fewer than `b` live rows the remaining blocks stack on the
/// least-`r_i` row, climbing its successive minima.
pub fn breaker_minima_block(state: &MappingState) -> Vec<(usize, u32)> {
    let b = state.b as usize;
    let mut picks: Vec<(usize, u32)> = state.frontier.iter().take(b).map(|&(r, i)| (i, r)).collect();
    if picks.len() == b {
        return picks;
    }
    let rows: Vec<(u32, usize)> = state.frontier.iter().copied().collect();
    'rows: for &(r, i) in &rows {
        let mut j = r;
        while picks.len() < b {
            j += 1;
            if !state.within_bound(j) {
                continue 'rows;
            }
            if !state.blocked[i].contains(&j) {
                picks.push((i, j));
            }
        }
        break;
    }
    picks
}

/// `b` distinct open pairs drawn uniformly from unassigned rows and values up
/// to [`MappingState::value_cap`]. Returns every open pair when fewer than `b`
/// remain.
pub fn breaker_random_block<R: RngCore + ?Sized>(state: &MappingState, rng: &mut R) -> Vec<(usize, u32)> {
    let b = state.b as usize;
    if b == 0 || state.pool.is_empty() {
        return Vec::new();
    }
    let cap = state.value_cap();
    let open = |i: usize| u64::from(cap) - state.blocked[i].range(..=cap).count() as u64;
    let plenty = state.pool.len() as u64 * u64::from(cap) > (state.blocks + b) as u64;
    if !plenty && state.pool.iter().map(|&i| open(i)).sum::<u64>() <= b as u64 {
        let mut all = Vec::new();
        for &i in state.unassigned.iter() {
            for j in 1..=cap {
                if !state.blocked[i].contains(&j) {
                    all.push((i, j));
                }
            }
        }
        return all;
    }
    let mut picks: Vec<(usize, u32)> = Vec::with_capacity(b);
    let mut attempts = 0usize;
    while picks.len() < b && attempts < 64 * b + 64 {
        attempts += 1;
        let i = state.pool[rng.random_range(0..state.pool.len())];
        let j = rng.random_range(1..=cap);
        if !state.blocked[i].contains(&j) && !picks.contains(&(i, j)) {
            picks.push((i, j));
        }
    }
    if picks.len() < b {
        // sparse board: sample from the explicit list of open pairs
        let mut rest: Vec<(usize, u32)> = state
            .unassigned
            .iter()
            .flat_map(|&i| (1..=cap).map(move |j| (i, j)))
            .filter(|&(i, j)| !state.blocked[i].contains(&j) && !picks.contains(&(i, j)))
            .collect();
        while picks.len() < b {
            let k = rng.random_range(0..rest.len());
            picks.push(rest.swap_remove(k));
        }
    }
    picks
}

/// Uniform payments attached by rank: row `i` holds the sorted values of
/// `row_len` i.i.d. uniform [0,1] samples and Maker pays the `f(i)`-th.
#[derive(Debug, Clone, PartialEq)]
pub enum PaymentTable {
    Explicit(Vec<Vec<f64>>),
    /// Rows generated on demand from per-row streams of `seed`.
    ///
    /// Order statistics are produced in increasing order by the sequential
    /// spacing method `U_(k+1) = U_(k) + (1 - U_(k)) (1 - V^(1/(len-k)))`, so
    /// reading rank `j` costs `j` draws and every prefix is consistent.
    Sequential { row_len: usize, seed: u64 },
}

impl PaymentTable {
    pub fn sequential(row_len: usize, seed: u64) -> Self {
        PaymentTable::Sequential { row_len, seed }
    }

    /// Rows `j / (row_len + 1)`: the expected order statistics.
    pub fn expected(rows: usize, row_len: usize) -> Self {
        let row: Vec<f64> = (1..=row_len).map(|j| j as f64 / (row_len as f64 + 1.0)).collect();
        PaymentTable::Explicit(vec![row; rows])
    }

    pub fn row_len(&self, i: usize) -> usize {
        match self {
            PaymentTable::Explicit(rows) => rows[i].len(),
            PaymentTable::Sequential { row_len, .. } => *row_len,
        }
    }

    /// Payment for value (rank) `rank` in row `i`.
    pub fn value(&self, i: usize, rank: u32) -> Result<f64> {
        let len = self.row_len(i);
        if rank == 0 || rank as usize > len {
            return Err(Error::RankOutOfRange { rank, len });
        }
        match self {
            PaymentTable::Explicit(rows) => Ok(rows[i][rank as usize - 1]),
            PaymentTable::Sequential { row_len, seed } => {
                let mut gen = OrderStatistics::new(*row_len, *seed, i);
                Ok(gen.nth(rank as usize - 1).expect("rank within row"))
            }
        }
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        match self {
            PaymentTable::Explicit(rows) => rows[i].clone(),
            PaymentTable::Sequential { row_len, seed } => OrderStatistics::new(*row_len, *seed, i).collect(),
        }
    }
}

/// Ascending order statistics of `len` uniforms from a dedicated stream.
struct OrderStatistics {
    rng: rng::GameRng,
    len: usize,
    k: usize,
    current: f64,
}

impl OrderStatistics {
    fn new(len: usize, seed: u64, row: usize) -> Self {
        Self {
            rng: rng::stream(seed, row as u64),
            len,
            k: 0,
            current: 0.0,
        }
    }
}

impl Iterator for OrderStatistics {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.k == self.len {
            return None;
        }
        let remaining = (self.len - self.k) as f64;
        let v = open01(&mut self.rng);
        let step = -(v.ln() / remaining).exp_m1();
        self.current += (1.0 - self.current) * step;
        self.k += 1;
        Some(self.current.min(1.0))
    }
}

/// `sum_i payments(i, f(i))` for a complete assignment.
pub fn pay_uniform(assignment: &[Option<u32>], payments: &PaymentTable) -> Result<f64> {
    let mut total = 0.0;
    for (i, f) in assignment.iter().enumerate() {
        let f = f.expect("payment needs a complete assignment");
        total += payments.value(i, f)?;
    }
    Ok(total)
}

/// Settings of one mapping game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappingConfig {
    pub n: usize,
    pub b: u32,
    pub m: Option<u32>,
    pub order: Order,
    pub maker: MakerRule,
    pub breaker: BreakerRule,
    /// Charge uniform order statistics instead of raw values.
    pub uniform_payments: bool,
}

impl MappingConfig {
    pub fn new(n: usize, b: u32) -> Self {
        Self {
            n,
            b,
            m: None,
            order: Order::BreakerFirst,
            maker: MakerRule::Potential,
            breaker: BreakerRule::Minima,
            uniform_payments: false,
        }
    }
}

/// `ceil(H_n)`, the harmonic threshold for the box game.
pub fn harmonic_ceiling(n: usize) -> u32 {
    let h: f64 = (1..=n).map(|i| 1.0 / i as f64).sum();
    h.ceil() as u32
}

fn breaker_turn<R: RngCore + ?Sized>(
    state: &mut MappingState,
    rule: BreakerRule,
    rng: &mut R,
    moves: &mut Vec<MappingMove>,
) {
    let pairs = match rule {
        BreakerRule::Minima => breaker_minima_block(state),
        BreakerRule::Random => breaker_random_block(state, rng),
    };
    for &(i, j) in &pairs {
        state.block(i, j);
    }
    state.end_breaker_turn();
    moves.push(MappingMove::Breaker { pairs });
}

/// Plays one mapping game to completion or loss.
///
/// With uniform payments a payment seed is drawn from `rng` first; the
/// payment table has `n` samples per row.
pub fn play_mapping_game<R: RngCore + ?Sized>(cfg: &MappingConfig, rng: &mut R) -> Transcript {
    let payment_seed = cfg.uniform_payments.then(|| rng.next_u64());
    let mut state = MappingState::new(cfg.n, cfg.b, cfg.m, cfg.order);
    let mut moves = Vec::with_capacity(2 * cfg.n);
    let mut status = Status::Completed;
    for t in 0..cfg.n {
        if cfg.order == Order::BreakerFirst {
            breaker_turn(&mut state, cfg.breaker, rng, &mut moves);
        }
        if let Some(row) = state.first_dead_row() {
            status = Status::GameLost { round: t, row };
            break;
        }
        let (i, j) = maker_potential_move(&state, cfg.maker).expect("a live row exists when none is dead");
        state.assign(i, j);
        state.end_maker_turn();
        moves.push(MappingMove::Maker { row: i, value: j });
        if cfg.order == Order::MakerFirst && t + 1 < cfg.n {
            breaker_turn(&mut state, cfg.breaker, rng, &mut moves);
        }
    }
    let value_total = state.value_total();
    let mut payment = None;
    let mut cost = status.is_completed().then_some(value_total as f64);
    if let (Some(seed), true) = (payment_seed, status.is_completed()) {
        let table = PaymentTable::sequential(cfg.n, seed);
        match pay_uniform(&state.assignment(), &table) {
            Ok(total) => {
                payment = Some(PaymentRecord { seed, row_len: cfg.n, total });
                cost = Some(total);
            }
            Err(Error::RankOutOfRange { rank, len }) => {
                let row = state
                    .assignment()
                    .iter()
                    .position(|f| f.is_some_and(|f| f as usize > len))
                    .expect("some value exceeds the row length");
                status = Status::RankOutOfRange { row, rank };
                cost = None;
            }
            Err(e) => unreachable!("{e}"),
        }
    }
    let log = MappingLog {
        n: cfg.n,
        b: cfg.b,
        m: cfg.m,
        order: cfg.order,
        moves,
        value_total,
        payment,
    };
    Transcript::new(status, cost, GameLog::Mapping(log))
}

/// Re-applies a mapping log to a fresh state, checking legality, turn order
/// and every recorded total.
pub(crate) fn replay_mapping(t: &Transcript, log: &MappingLog) -> Verdict {
    let mut state = MappingState::new(log.n, log.b, log.m, log.order);
    let mut expect_breaker = log.order == Order::BreakerFirst;
    for (k, mv) in log.moves.iter().enumerate() {
        match mv {
            MappingMove::Breaker { pairs } => {
                if !expect_breaker {
                    return Verdict::at(k, "Breaker moved out of turn");
                }
                if pairs.len() > log.b as usize {
                    return Verdict::at(k, format!("Breaker blocked {} pairs, bias is {}", pairs.len(), log.b));
                }
                for &(i, j) in pairs {
                    if let Err(e) = state.check_block(i, j) {
                        return Verdict::at(k, e);
                    }
                    state.block(i, j);
                }
                state.end_breaker_turn();
                expect_breaker = false;
            }
            MappingMove::Maker { row, value } => {
                if expect_breaker {
                    return Verdict::at(k, "Maker moved out of turn");
                }
                if let Err(e) = state.check_assign(*row, *value) {
                    return Verdict::at(k, e);
                }
                state.assign(*row, *value);
                state.end_maker_turn();
                expect_breaker = true;
            }
        }
    }
    let end = log.moves.len();
    if state.value_total() != log.value_total {
        return Verdict::at(end, format!("value total {} recorded as {}", state.value_total(), log.value_total));
    }
    match &t.status {
        Status::Completed => {
            if state.unassigned_count() != 0 {
                return Verdict::at(end, "completed game leaves rows unassigned");
            }
        }
        Status::GameLost { row, .. } => {
            if state.r_min(*row).is_ok() {
                return Verdict::at(end, format!("row {row} reported dead but is open"));
            }
            return if t.cost.is_none() { Verdict::Ok } else { Verdict::at(end, "lost game carries a cost") };
        }
        _ => {}
    }
    let expected_cost = match &log.payment {
        Some(p) => {
            let table = PaymentTable::sequential(p.row_len, p.seed);
            match pay_uniform(&state.assignment(), &table) {
                Ok(total) if total == p.total => Some(total),
                Ok(total) => return Verdict::at(end, format!("payment total {total} recorded as {}", p.total)),
                Err(_) => None,
            }
        }
        None => Some(state.value_total() as f64),
    };
    if t.status.is_completed() && expected_cost != t.cost {
        return Verdict::at(end, format!("cost {:?} recorded as {:?}", expected_cost, t.cost));
    }
    Verdict::Ok
}

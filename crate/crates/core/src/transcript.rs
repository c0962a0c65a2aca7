//! Replayable game logs.
//!
//! A transcript stores every move plus the seeds of the random instance it was
//! played on, so the instance can be regenerated and the game re-checked move
//! by move (see [`crate::harness::replay`]). Rows and vertices are 0-based;
//! mapping values and edge ranks are 1-based, as in the games themselves.

use serde::{Deserialize, Serialize};

pub const TRANSCRIPT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    #[default]
    BreakerFirst,
    MakerFirst,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Completed,
    /// A row ran out of values before Maker could claim it.
    GameLost { round: usize, row: usize },
    /// Maker's committed root had no usable out-edge.
    MakerStuck { round: usize, root: usize },
    /// A value exceeded the payment row length.
    RankOutOfRange { row: usize, rank: u32 },
    /// Breaker deleted every edge that could join two of Maker's components.
    NoEdge { round: usize },
}

impl Status {
    pub fn is_completed(&self) -> bool {
        matches!(self, Status::Completed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub schema_version: u32,
    pub status: Status,
    /// The headline cost of the game; `None` when the game failed.
    pub cost: Option<f64>,
    pub log: GameLog,
}

impl Transcript {
    pub(crate) fn new(status: Status, cost: Option<f64>, log: GameLog) -> Self {
        Self {
            schema_version: TRANSCRIPT_SCHEMA_VERSION,
            status,
            cost,
            log,
        }
    }

    /// Number of Maker moves played.
    pub fn maker_moves(&self) -> usize {
        match &self.log {
            GameLog::Mapping(m) => m.moves.iter().filter(|mv| matches!(mv, MappingMove::Maker { .. })).count(),
            GameLog::Arborescence(a) => a.moves.iter().filter(|mv| matches!(mv, ArbMove::Maker(_))).count(),
            GameLog::Greedy(g) => g.moves.iter().filter(|mv| matches!(mv, GreedyMove::Maker(_))).count(),
        }
    }

    pub fn emergencies(&self) -> usize {
        match &self.log {
            GameLog::Arborescence(a) => a
                .moves
                .iter()
                .filter(|mv| matches!(mv, ArbMove::Maker(e) if e.turn == TurnClass::Emergency))
                .count(),
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "game", rename_all = "snake_case")]
pub enum GameLog {
    Mapping(MappingLog),
    Arborescence(ArbLog),
    Greedy(GreedyLog),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappingLog {
    pub n: usize,
    pub b: u32,
    /// Value cap; `None` for the unbounded game.
    pub m: Option<u32>,
    pub order: Order,
    pub moves: Vec<MappingMove>,
    /// `sum f(i)` over assigned rows.
    pub value_total: u64,
    pub payment: Option<PaymentRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaymentRecord {
    pub seed: u64,
    /// Samples per row.
    pub row_len: usize,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "player", rename_all = "snake_case")]
pub enum MappingMove {
    Maker { row: usize, value: u32 },
    Breaker { pairs: Vec<(usize, u32)> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TurnClass {
    Normal,
    Emergency,
}

/// How the arborescence instance's edge weights were produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum CostSource {
    /// Row permutations of `1..n-1`, drawn from `seed`; Maker pays the rank.
    Permutation { seed: u64 },
    /// Row permutations from `seed`; Maker pays the rank-th uniform order
    /// statistic of the row's payment stream.
    UniformPayment { seed: u64, payment_seed: u64 },
    /// Split costs from `seed`: directed costs are i.i.d. copies of `Z`.
    Split { seed: u64 },
    /// Costs supplied by the caller; replay needs the instance.
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArbLog {
    pub n: usize,
    /// Breaker's deletions per round, counted in directed edges.
    pub b: u32,
    pub beta: f64,
    pub order: Order,
    /// Breaker must delete `(j, i)` together with `(i, j)`.
    pub paired: bool,
    pub costs: CostSource,
    pub moves: Vec<ArbMove>,
    /// `sum_t r_t`.
    pub rank_total: u64,
    /// Sum of the weights Maker paid (equals `rank_total` in rank mode).
    pub weight_total: f64,
    /// Orientation-free cost `sum min(c(i,j), c(j,i))`, split costs only.
    pub undirected_total: Option<f64>,
    pub final_root: Option<usize>,
    /// Root of the first component to exceed `n/2` vertices.
    pub first_giant_root: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "player", rename_all = "snake_case")]
pub enum ArbMove {
    Maker(ArbMakerMove),
    Breaker { edges: Vec<(usize, usize)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArbMakerMove {
    pub from: usize,
    pub to: usize,
    /// Position of the edge in its row's cost order, `r_t = 1 + a_t + x_t`.
    pub rank: u32,
    /// Cheaper undeleted edges pointing into Maker's own component.
    pub inside: u32,
    /// Cheaper edges already deleted by Breaker.
    pub deleted: u32,
    pub turn: TurnClass,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyLog {
    pub n: usize,
    pub b: u32,
    pub edge_seed: u64,
    pub moves: Vec<GreedyMove>,
    pub rank_total: u64,
    /// `(1/N) sum t_k`.
    pub normalized_rank_cost: f64,
    pub weight_total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "player", rename_all = "snake_case")]
pub enum GreedyMove {
    Maker(GreedyPick),
    /// 1-based ranks of the deleted edges.
    Breaker { ranks: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyPick {
    pub rank: u64,
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Outcome of re-checking a transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Ok,
    /// First problem found; `mv` indexes the transcript's move list.
    Violation { mv: usize, reason: String },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }

    pub(crate) fn at(mv: usize, reason: impl Into<String>) -> Self {
        Verdict::Violation { mv, reason: reason.into() }
    }
}

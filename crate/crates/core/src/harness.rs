//! Replicated experiments and transcript replay.
//!
//! Replication `r` of an experiment seeded with `s` plays on
//! [`rng::rep_stream(s, r)`](crate::rng::rep_stream) and nothing else, so
//! per-rep results do not depend on how many threads run or in which order.
//! Set `WTG_THREADS` to cap the worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arborescence::{self, play_arborescence_game, ArbBreaker, ArbConfig, PaymentMode};
use crate::constants::{arborescence_slope, solve_mu, theorem_bounds, ZETA3};
use crate::error::{Error, Result};
use crate::mapping::{self, harmonic_ceiling, play_mapping_game, BreakerRule, MakerRule, MappingConfig};
use crate::rng;
use crate::transcript::{GameLog, Order, Transcript, Verdict, TRANSCRIPT_SCHEMA_VERSION};
use crate::tree::{self, play_greedy_game, play_tree_via_arborescence, EdgeStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameVariant {
    /// Unbounded mapping game.
    Mapping,
    /// Mapping game with values capped at `m`.
    Box,
    /// Arborescence game on random permutation costs.
    Arb,
    /// Spanning-tree game through split costs.
    Tree,
    /// Greedy spanning-tree game.
    Greedy,
}

impl GameVariant {
    pub fn name(self) -> &'static str {
        match self {
            GameVariant::Mapping => "mapping",
            GameVariant::Box => "box",
            GameVariant::Arb => "arb",
            GameVariant::Tree => "tree",
            GameVariant::Greedy => "greedy",
        }
    }

    /// Accepted Maker and Breaker names; the first of each is the default.
    pub fn strategies(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            GameVariant::Mapping => (&["potential", "minbox"], &["minima", "random"]),
            GameVariant::Box => (&["minbox", "potential"], &["minima", "random"]),
            GameVariant::Arb => (&["sensible"], &["root-attack", "random"]),
            GameVariant::Tree => (&["sensible"], &["root-attack"]),
            GameVariant::Greedy => (&["greedy"], &["greedy"]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub game: GameVariant,
    pub n: usize,
    pub b: u32,
    /// Value cap for the box game; defaults to `ceil(H_n) + b`.
    pub m: Option<u32>,
    pub beta: f64,
    pub reps: usize,
    pub seed: u64,
    pub maker: Option<String>,
    pub breaker: Option<String>,
    /// `None` picks the game's own order.
    pub order: Option<Order>,
    pub payment: PaymentMode,
}

impl ExperimentConfig {
    pub fn new(game: GameVariant, n: usize, b: u32, reps: usize, seed: u64) -> Self {
        Self {
            game,
            n,
            b,
            m: None,
            beta: 0.5,
            reps,
            seed,
            maker: None,
            breaker: None,
            order: None,
            payment: PaymentMode::Rank,
        }
    }

    /// Checks the configuration and resolves defaults.
    pub fn plan(&self) -> Result<Plan> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if u32::try_from(self.n).is_err() {
            return bad(format!("n = {} is too large", self.n));
        }
        let (makers, breakers) = self.game.strategies();
        let maker = self.maker.as_deref().unwrap_or(makers[0]);
        let breaker = self.breaker.as_deref().unwrap_or(breakers[0]);
        if !makers.contains(&maker) {
            return bad(format!("unknown maker '{maker}' for {} (expected one of {makers:?})", self.game.name()));
        }
        if !breakers.contains(&breaker) {
            return bad(format!(
                "unknown breaker '{breaker}' for {} (expected one of {breakers:?})",
                self.game.name()
            ));
        }
        let game = match self.game {
            GameVariant::Mapping | GameVariant::Box => {
                let m = match (self.game, self.m) {
                    (GameVariant::Box, None) => Some(harmonic_ceiling(self.n) + self.b),
                    (_, m) => m,
                };
                if m == Some(0) {
                    return bad("m must be at least 1".into());
                }
                let maker = if maker == "minbox" { MakerRule::MinBox } else { MakerRule::Potential };
                if maker == MakerRule::MinBox && m.is_none() {
                    return bad("the minbox maker needs a value cap (--m)".into());
                }
                PlannedGame::Mapping(MappingConfig {
                    n: self.n,
                    b: self.b,
                    m,
                    order: self.order.unwrap_or_default(),
                    maker,
                    breaker: if breaker == "random" { BreakerRule::Random } else { BreakerRule::Minima },
                    uniform_payments: self.payment == PaymentMode::Uniform,
                })
            }
            GameVariant::Arb | GameVariant::Tree => {
                if !(self.beta > 0.0 && self.beta < 1.0) {
                    return bad(format!("beta must lie in (0, 1), got {}", self.beta));
                }
                if self.m.is_some() {
                    return bad(format!("--m does not apply to {}", self.game.name()));
                }
                if self.game == GameVariant::Tree {
                    if self.order == Some(Order::MakerFirst) {
                        return bad("the tree game is played Breaker first".into());
                    }
                    if self.payment != PaymentMode::Rank {
                        return bad("the tree game pays its split costs; --payment does not apply".into());
                    }
                    PlannedGame::Tree { beta: self.beta }
                } else {
                    PlannedGame::Arb(ArbConfig {
                        n: self.n,
                        b: self.b,
                        beta: self.beta,
                        order: self.order.unwrap_or_default(),
                        breaker: if breaker == "random" { ArbBreaker::Random } else { ArbBreaker::RootAttack },
                        paired: false,
                        payment: self.payment,
                    })
                }
            }
            GameVariant::Greedy => {
                if self.order == Some(Order::BreakerFirst) {
                    return bad("the greedy game is played Maker first".into());
                }
                if self.m.is_some() || self.payment != PaymentMode::Rank {
                    return bad("--m and --payment do not apply to greedy".into());
                }
                PlannedGame::Greedy
            }
        };
        Ok(Plan {
            n: self.n,
            b: self.b,
            seed: self.seed,
            reps: self.reps,
            game,
        })
    }
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub n: usize,
    pub b: u32,
    pub seed: u64,
    pub reps: usize,
    pub game: PlannedGame,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlannedGame {
    Mapping(MappingConfig),
    Arb(ArbConfig),
    Tree { beta: f64 },
    Greedy,
}

impl Plan {
    /// Plays replication `rep`.
    pub fn play(&self, rep: usize) -> Transcript {
        let mut rng = rng::rep_stream(self.seed, rep as u64);
        match &self.game {
            PlannedGame::Mapping(cfg) => play_mapping_game(cfg, &mut rng),
            PlannedGame::Arb(cfg) => play_arborescence_game(cfg, &mut rng),
            PlannedGame::Tree { beta } => play_tree_via_arborescence(self.n, self.b, *beta, &mut rng),
            PlannedGame::Greedy => play_greedy_game(self.n, self.b, &mut rng),
        }
    }

    /// The value the mean cost is compared against.
    pub fn bound(&self) -> f64 {
        let bounds = theorem_bounds(self.n, self.b);
        match &self.game {
            PlannedGame::Mapping(cfg) if cfg.uniform_payments => bounds.mapping_uniform,
            PlannedGame::Mapping(cfg) => match cfg.order {
                Order::BreakerFirst => bounds.mapping_breaker_first,
                Order::MakerFirst => bounds.mapping_maker_first,
            },
            PlannedGame::Arb(cfg) => match cfg.payment {
                PaymentMode::Rank => bounds.arborescence,
                PaymentMode::Uniform => solve_mu(self.b) * arborescence_slope(self.b),
            },
            PlannedGame::Tree { .. } => bounds.split_tree,
            PlannedGame::Greedy => (f64::from(self.b) + 1.0) * ZETA3,
        }
    }
}

/// One replication's headline numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepRecord {
    pub rep: usize,
    /// `None` when the game failed.
    pub cost: Option<f64>,
    /// Maker moves played.
    pub rounds: usize,
    pub emergencies: usize,
    pub failed: bool,
    /// The experiment seed; `(seed, rep)` addresses the replication's stream.
    pub seed: u64,
}

impl RepRecord {
    pub fn from_transcript(rep: usize, seed: u64, t: &Transcript) -> Self {
        Self {
            rep,
            cost: t.cost,
            rounds: t.maker_moves(),
            emergencies: t.emergencies(),
            failed: !t.status.is_completed(),
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub records: Vec<RepRecord>,
    /// Mean over completed reps; failures contribute nothing.
    pub mean: Option<f64>,
    /// Sample standard deviation (needs two completed reps).
    pub sd: Option<f64>,
    /// Normal-approximation 95% interval for the mean.
    pub ci95: Option<(f64, f64)>,
    pub failures: usize,
    pub completed: usize,
    pub bound: f64,
    /// `(mean - bound) / bound`.
    pub margin: Option<f64>,
    pub emergencies: Vec<usize>,
}

impl ExperimentSummary {
    pub fn costs(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.cost).collect()
    }

    fn build(config: ExperimentConfig, bound: f64, records: Vec<RepRecord>) -> Self {
        let costs: Vec<f64> = records.iter().filter_map(|r| r.cost).collect();
        let k = costs.len();
        let mean = (k > 0).then(|| costs.iter().sum::<f64>() / k as f64);
        let sd = mean.filter(|_| k >= 2).map(|m| {
            let ss: f64 = costs.iter().map(|c| (c - m) * (c - m)).sum();
            (ss / (k - 1) as f64).sqrt()
        });
        let ci95 = mean.zip(sd).map(|(m, s)| {
            let h = 1.959_963_984_540_054 * s / (k as f64).sqrt();
            (m - h, m + h)
        });
        Self {
            failures: records.iter().filter(|r| r.failed).count(),
            completed: k,
            emergencies: records.iter().map(|r| r.emergencies).collect(),
            margin: mean.map(|m| (m - bound) / bound),
            config,
            records,
            mean,
            sd,
            ci95,
            bound,
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("WTG_THREADS") {
        let threads: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| Error::Config(format!("WTG_THREADS must be a positive integer, got '{v}'")))?;
        builder = builder.num_threads(threads);
    }
    builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// Runs every replication; failures are counted, never fatal.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    run_with(cfg, false).map(|(s, _)| s)
}

/// Like [`run_experiment`], also returning every transcript in rep order.
pub fn run_experiment_with_transcripts(cfg: &ExperimentConfig) -> Result<(ExperimentSummary, Vec<Transcript>)> {
    run_with(cfg, true)
}

fn run_with(cfg: &ExperimentConfig, keep: bool) -> Result<(ExperimentSummary, Vec<Transcript>)> {
    let plan = cfg.plan()?;
    let pool = thread_pool()?;
    let results: Vec<(RepRecord, Option<Transcript>)> = pool.install(|| {
        (0..plan.reps)
            .into_par_iter()
            .map(|rep| {
                let t = plan.play(rep);
                (RepRecord::from_transcript(rep, plan.seed, &t), keep.then_some(t))
            })
            .collect()
    });
    let (records, transcripts): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let summary = ExperimentSummary::build(cfg.clone(), plan.bound(), records);
    Ok((summary, transcripts.into_iter().flatten().collect()))
}

/// Re-plays a transcript against a fresh state, regenerating its random
/// instance from the recorded seeds.
pub fn replay(t: &Transcript) -> Result<Verdict> {
    if t.schema_version != TRANSCRIPT_SCHEMA_VERSION {
        return Err(Error::VersionMismatch {
            found: t.schema_version,
            expected: TRANSCRIPT_SCHEMA_VERSION,
        });
    }
    Ok(match &t.log {
        GameLog::Mapping(log) => mapping::replay_mapping(t, log),
        GameLog::Arborescence(log) => {
            let costs = arborescence::regenerate_costs(log)
                .ok_or_else(|| Error::Config("transcript played on external costs; use replay_on".into()))?;
            arborescence::replay_arborescence(t, log, &costs)
        }
        GameLog::Greedy(log) => {
            let stream = EdgeStream::uniform(log.n, &mut rng::stream(log.edge_seed, 0));
            tree::replay_greedy(t, log, &stream)
        }
    })
}

/// Replays an arborescence transcript against caller-supplied costs.
pub fn replay_on(t: &Transcript, costs: &arborescence::DigraphCosts) -> Result<Verdict> {
    if t.schema_version != TRANSCRIPT_SCHEMA_VERSION {
        return Err(Error::VersionMismatch {
            found: t.schema_version,
            expected: TRANSCRIPT_SCHEMA_VERSION,
        });
    }
    match &t.log {
        GameLog::Arborescence(log) if log.n == costs.n() => Ok(arborescence::replay_arborescence(t, log, costs)),
        _ => Err(Error::Config("replay_on needs an arborescence transcript of matching size".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_rep_matches_direct_call() {
        let cfg = ExperimentConfig::new(GameVariant::Arb, 50, 2, 1, 11);
        let s = run_experiment(&cfg).unwrap();
        let direct = play_arborescence_game(&ArbConfig::new(50, 2), &mut rng::rep_stream(11, 0));
        assert_eq!(s.records[0].cost, direct.cost);
        assert_eq!(s.mean, direct.cost);
    }

    #[test]
    fn deterministic_and_ordered() {
        let mut cfg = ExperimentConfig::new(GameVariant::Mapping, 200, 3, 6, 5);
        cfg.breaker = Some("random".into());
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.records.iter().map(|r| r.rep).collect::<Vec<_>>(), (0..6).collect::<Vec<_>>());
        for r in &a.records {
            assert!(r.cost.unwrap() <= 800.0);
        }
        let mean = a.costs().iter().sum::<f64>() / 6.0;
        assert_eq!(a.mean, Some(mean));
        assert!(a.margin.unwrap() <= 0.0);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = ExperimentConfig::new(GameVariant::Tree, 20, 1, 1, 0);
        cfg.breaker = Some("random".into());
        assert!(matches!(cfg.plan(), Err(Error::Config(_))));
        let cfg = ExperimentConfig::new(GameVariant::Greedy, 20, 1, 0, 0);
        assert!(cfg.plan().is_err());
        let mut cfg = ExperimentConfig::new(GameVariant::Mapping, 20, 1, 1, 0);
        cfg.maker = Some("minbox".into());
        assert!(cfg.plan().is_err());
        cfg.m = Some(10);
        assert!(cfg.plan().is_ok());
    }

    #[test]
    fn box_default_cap() {
        let cfg = ExperimentConfig::new(GameVariant::Box, 1000, 3, 1, 0);
        let PlannedGame::Mapping(m) = cfg.plan().unwrap().game else { panic!() };
        assert_eq!(m.m, Some(8 + 3));
        assert_eq!(m.maker, MakerRule::MinBox);
    }

    #[test]
    fn replay_checks_version() {
        let cfg = ExperimentConfig::new(GameVariant::Greedy, 30, 1, 1, 3);
        let (_, mut ts) = run_experiment_with_transcripts(&cfg).unwrap();
        assert_eq!(replay(&ts[0]), Ok(Verdict::Ok));
        ts[0].schema_version += 1;
        assert!(matches!(replay(&ts[0]), Err(Error::VersionMismatch { .. })));
    }
}

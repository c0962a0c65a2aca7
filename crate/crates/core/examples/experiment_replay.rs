//! Parallel experiment with transcripts, then an independent replay of each.

use weighted_tree_games::harness::{replay, run_experiment_with_transcripts, ExperimentConfig, GameVariant};

fn main() -> weighted_tree_games::Result<()> {
    let mut cfg = ExperimentConfig::new(GameVariant::Arb, 300, 2, 8, 42);
    cfg.breaker = Some("random".into());
    let (summary, transcripts) = run_experiment_with_transcripts(&cfg)?;
    println!(
        "mean {:.2}, sd {:.2}, bound {:.2}, failures {}",
        summary.mean.unwrap(),
        summary.sd.unwrap(),
        summary.bound,
        summary.failures
    );
    for (rep, t) in transcripts.iter().enumerate() {
        println!("rep {rep}: cost {:?}, replay {:?}", t.cost, replay(t)?);
    }
    Ok(())
}

//! Sensible Maker building a spanning arborescence against two Breakers.

use weighted_tree_games::arborescence::{play_arborescence_game, ArbBreaker, ArbConfig};
use weighted_tree_games::constants::theorem_bounds;
use weighted_tree_games::rng::stream;

fn main() {
    let n = 1000;
    for b in 1..=3 {
        for breaker in [ArbBreaker::RootAttack, ArbBreaker::Random] {
            let cfg = ArbConfig { breaker, ..ArbConfig::new(n, b) };
            let t = play_arborescence_game(&cfg, &mut stream(u64::from(b), 0));
            println!(
                "b={b} {breaker:?}: rank cost {} (bound {:.0}), emergency turns {}",
                t.cost.unwrap(),
                theorem_bounds(n, b).arborescence,
                t.emergencies()
            );
        }
    }
}

//! Mapping game charged in uniform order statistics; compare with mu_b (b+1).

use weighted_tree_games::constants::theorem_bounds;
use weighted_tree_games::mapping::{play_mapping_game, MappingConfig};
use weighted_tree_games::rng::stream;

fn main() {
    let n = 2000;
    for b in 0..=3 {
        let cfg = MappingConfig {
            uniform_payments: true,
            ..MappingConfig::new(n, b)
        };
        let reps = 5;
        let mean: f64 = (0..reps).map(|s| play_mapping_game(&cfg, &mut stream(s, 0)).cost.unwrap()).sum::<f64>() / reps as f64;
        println!("b={b}: mean {mean:.4}, bound {:.4}", theorem_bounds(n, b).mapping_uniform);
    }
}

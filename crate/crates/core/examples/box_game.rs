//! Min-box Maker in the box game: survival depends on the box size m.

use weighted_tree_games::mapping::{harmonic_ceiling, play_mapping_game, BreakerRule, MakerRule, MappingConfig};
use weighted_tree_games::rng::stream;

fn main() {
    let n = 1000;
    let h = harmonic_ceiling(n);
    for (b, m) in [(1, h + 1), (1, h), (3, h + 3), (3, 25)] {
        let mut lost = 0;
        for seed in 0..20 {
            let cfg = MappingConfig {
                m: Some(m),
                maker: MakerRule::MinBox,
                breaker: BreakerRule::Minima,
                ..MappingConfig::new(n, b)
            };
            if !play_mapping_game(&cfg, &mut stream(seed, 0)).status.is_completed() {
                lost += 1;
            }
        }
        println!("b={b} m={m}: Maker lost {lost}/20");
    }
}

//! Potential Maker against the minima-blocking Breaker, both turn orders.

use weighted_tree_games::mapping::{play_mapping_game, MappingConfig};
use weighted_tree_games::rng::stream;
use weighted_tree_games::transcript::Order;

fn main() {
    let (n, b) = (500, 3);
    for order in [Order::BreakerFirst, Order::MakerFirst] {
        let cfg = MappingConfig { order, ..MappingConfig::new(n, b) };
        let t = play_mapping_game(&cfg, &mut stream(1, 0));
        let bound = match order {
            Order::BreakerFirst => (b as usize + 1) * n,
            Order::MakerFirst => (n - 1) * b as usize + n,
        };
        println!("{order:?}: total {} (bound {bound}), status {:?}", t.cost.unwrap(), t.status);
    }
}

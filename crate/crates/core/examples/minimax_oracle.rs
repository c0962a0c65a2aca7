//! Exact mapping-game values next to the closed-form bounds.

use weighted_tree_games::oracle::{minimax_mapping_value, MinimaxConfig};
use weighted_tree_games::transcript::Order;

fn main() {
    for n in 1..=3 {
        for b in 0..=2 {
            let bf = minimax_mapping_value(&MinimaxConfig::new(n, b, Order::BreakerFirst)).unwrap();
            let mf = minimax_mapping_value(&MinimaxConfig::new(n, b, Order::MakerFirst)).unwrap();
            let b = b as usize;
            println!("n={n} b={b}: breaker first {bf} <= {}, maker first {mf} <= {}", (b + 1) * n, (n - 1) * b + n);
        }
    }
}

//! Greedy Maker and Breaker on uniform edge weights; b = 0 is Kruskal.

use weighted_tree_games::constants::{theorem_bounds, ZETA3};
use weighted_tree_games::rng::stream;
use weighted_tree_games::tree::play_greedy_game;

fn main() {
    let n = 1500;
    println!("zeta(3) = {ZETA3:.6}");
    for b in 0..=2 {
        let reps = 4;
        let mean: f64 = (0..reps).map(|s| play_greedy_game(n, b, &mut stream(s, 0)).cost.unwrap()).sum::<f64>() / reps as f64;
        println!("b={b}: mean weight {mean:.4}, (b+1) zeta(3) = {:.4}", theorem_bounds(n, b).greedy);
    }
}

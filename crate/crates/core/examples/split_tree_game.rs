//! Undirected tree game on split costs, played as an arborescence game.

use weighted_tree_games::constants::theorem_bounds;
use weighted_tree_games::rng::stream;
use weighted_tree_games::transcript::GameLog;
use weighted_tree_games::tree::{play_tree_via_arborescence, tree_edges};

fn main() {
    let (n, b) = (400, 1);
    let t = play_tree_via_arborescence(n, b, 0.5, &mut stream(9, 0));
    let GameLog::Arborescence(log) = &t.log else { unreachable!() };
    let edges = tree_edges(log);
    println!("{} tree edges, directed cost {:.4}", edges.len(), t.cost.unwrap());
    println!("undirected cost {:.4}", log.undirected_total.unwrap());
    println!("bound {:.4}", theorem_bounds(n, b).split_tree);
}

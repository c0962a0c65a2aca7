use weighted_tree_games::constants::{invert_tau, solve_mu, solve_theta_star, tau, theorem_bounds, zeta3_by_quadrature};

fn main() {
    println!("theta* = {:.6}", solve_theta_star());
    println!("zeta(3) by quadrature = {:.8}", zeta3_by_quadrature());
    for b in 0..=4 {
        println!("mu_{b} = {:.6}", solve_mu(b));
    }
    for c in [1.5, 2.0, 4.0] {
        let y = tau(c);
        println!("tau({c}) = {y:.6}, supercritical inverse {:.6}", invert_tau(y));
    }
    println!("{:#?}", theorem_bounds(100, 2));
}

use statrs::distribution::{Beta, ContinuousCDF};
use weighted_tree_games::mapping::PaymentTable;
use weighted_tree_games::rng::stream;
use weighted_tree_games::tree::walkup_split;

/// KS critical value at alpha = 0.01 is about 1.63 / sqrt(N).
fn ks_distance(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let len = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(k, &x)| {
            let f = cdf(x);
            (f - k as f64 / len).abs().max(((k + 1) as f64 / len - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn split_minimum_is_uniform() {
    let n = 200;
    let s = walkup_split(n, &mut stream(31, 0));
    let mins: Vec<f64> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| s.undirected(i, j)).collect();
    assert_eq!(mins.len(), 19_900);
    let d = ks_distance(mins, |x| x);
    assert!(d < 0.02, "KS {d}");
}

#[test]
fn split_directed_costs_follow_z() {
    let n = 200;
    let s = walkup_split(n, &mut stream(32, 0));
    let xs: Vec<f64> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| s.directed(i, j)).collect();
    let d = ks_distance(xs, |x| 1.0 - (1.0 - x).sqrt());
    assert!(d < 0.02, "KS {d}");
}

#[test]
fn payment_order_statistics_are_beta() {
    // U_(k) of len uniforms is Beta(k, len + 1 - k)
    let (len, rows) = (50, 4000);
    let table = PaymentTable::sequential(len, 33);
    for k in [1u32, 7, 25, 50] {
        let xs: Vec<f64> = (0..rows).map(|i| table.value(i, k).unwrap()).collect();
        let beta = Beta::new(f64::from(k), (len + 1) as f64 - f64::from(k)).unwrap();
        let d = ks_distance(xs, |x| beta.cdf(x));
        assert!(d < 1.63 / (rows as f64).sqrt(), "k={k}: KS {d}");
    }
}

//! Numerical constants and curves behind the game bounds.
//!
//! Every scalar root is found by bracketed bisection; the bracket is checked
//! for a sign change before iterating. The component-count series `tau` is
//! summed in log-space, and `zeta3_by_quadrature` integrates it with adaptive
//! Simpson plus an analytic tail bound.

use serde::{Deserialize, Serialize};

/// Apéry's constant, the limiting weight of a random MST on `K_n`.
pub const ZETA3: f64 = 1.202_056_903_159_594_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Absolute residual tolerance for root finders.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Relative tolerance for series remainders.
    pub series_tolerance: f64,
    /// Hard cap on series terms; past it the remainder is estimated.
    pub max_series_terms: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 200,
            series_tolerance: 1e-15,
            max_series_terms: 4096,
        }
    }
}

impl SolverConfig {
    fn validated(self) -> Self {
        assert!(self.tolerance > 0.0, "solver tolerance must be positive");
        self
    }
}

/// Bisection on `[lo, hi]`; `f(lo)` and `f(hi)` must have opposite signs.
///
/// Stops at `|f| < tolerance` or when the bracket can no longer be split,
/// returning the endpoint with the smaller residual in the latter case.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, cfg: &SolverConfig) -> f64 {
    let cfg = cfg.validated();
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return lo;
    }
    if f_hi == 0.0 {
        return hi;
    }
    assert!(
        f_lo.signum() != f_hi.signum(),
        "bisection bracket [{lo}, {hi}] has no sign change"
    );
    let mut best = if f_lo.abs() < f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    for _ in 0..cfg.max_iterations {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid.abs() < best.1.abs() {
            best = (mid, f_mid);
        }
        if f_mid == 0.0 || (f_mid.abs() < cfg.tolerance && hi - lo < 1e-15 * mid.abs().max(1.0)) {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    best.0
}

/// Right-hand side of the payment inflation equation for bias `b`.
pub fn mu_rhs(b: u32) -> f64 {
    let y = f64::from(b) + 1.0;
    (y.ln() - 1.0) / y
}

/// Solves `mu - 1 - ln(mu) = rhs` for `mu >= 1`.
pub fn solve_mu_for_rhs(rhs: f64, cfg: &SolverConfig) -> f64 {
    if rhs <= 0.0 {
        return 1.0;
    }
    let g = |mu: f64| mu - 1.0 - mu.ln() - rhs;
    let mut hi = 2.0;
    while g(hi) <= 0.0 {
        hi *= 2.0;
    }
    bisect(g, 1.0, hi, cfg)
}

/// `mu_b`: the factor converting rank costs to uniform payments.
///
/// For `b <= 1` the right-hand side is negative while `mu - 1 - ln mu >= 0`
/// vanishes only at 1, so the answer is exactly 1.
pub fn solve_mu(b: u32) -> f64 {
    solve_mu_for_rhs(mu_rhs(b), &SolverConfig::default())
}

/// `h(theta) = (1+theta) ln(1+theta) - theta ln(theta)`.
pub fn theta_h(theta: f64) -> f64 {
    let t_log_t = if theta == 0.0 { 0.0 } else { theta * theta.ln() };
    (1.0 + theta) * (1.0 + theta).ln() - t_log_t
}

/// The root of `h(theta) = ln 2` in (0, 1), about 0.2938.
pub fn solve_theta_star() -> f64 {
    let cfg = SolverConfig::default();
    bisect(|t| theta_h(t) - std::f64::consts::LN_2, 1e-12, 1.0, &cfg)
}

/// `x(c)`: the solution in `(0, 1]` of `x e^-x = c e^-c`.
pub fn small_x(c: f64) -> f64 {
    assert!(c > 0.0, "small_x needs c > 0");
    if c <= 1.0 {
        return c;
    }
    // log form keeps the residual meaningful when c e^-c is tiny
    let target = c.ln() - c;
    let lo = (target.exp()).min(1.0);
    bisect(|x| x.ln() - x - target, lo, 1.0, &SolverConfig::default())
}

/// `tau(c) = (1/c) sum_k k^(k-2)/k! (c e^-c)^k`: components of `G(n, c/n)`
/// per vertex.
pub fn tau(c: f64) -> f64 {
    tau_with(c, &SolverConfig::default())
}

pub fn tau_with(c: f64, cfg: &SolverConfig) -> f64 {
    assert!(c >= 0.0, "tau needs c >= 0");
    if c == 0.0 {
        return 1.0;
    }
    let ln_y = c.ln() - c;
    // consecutive term ratio is (1+1/k)^(k-2) y, always below q = c e^(1-c)
    let q = (1.0 + ln_y).exp().min(1.0);
    let mut sum = 0.0;
    let mut ln_fact = 0.0;
    let mut last_ln_term = f64::NEG_INFINITY;
    let mut k = 1usize;
    while k <= cfg.max_series_terms {
        let kf = k as f64;
        ln_fact += kf.ln();
        let ln_term = (kf - 2.0) * kf.ln() - ln_fact + kf * ln_y;
        let term = ln_term.exp();
        sum += term;
        last_ln_term = ln_term;
        if q < 1.0 && term * q / (1.0 - q) < cfg.series_tolerance * sum {
            return sum / c;
        }
        k += 1;
    }
    let last_k = (k - 1) as f64;
    (sum + series_remainder(last_ln_term, last_k, 1.0 + ln_y)) / c
}

/// Remainder `sum_{k > K} a_k` of the tau series from its Stirling shape
/// `a_k ~ A k^(-5/2) q^k`, with `A` pinned by the last computed term.
fn series_remainder(ln_a_k: f64, k: f64, ln_q: f64) -> f64 {
    let s = (-ln_q).max(0.0);
    let start = k + 0.5;
    let sigma = s * start;
    // a_K K^{5/2} start^{-3/2} e^{sK} E_{5/2}(sigma)
    let ln_prefactor = ln_a_k + 2.5 * k.ln() - 1.5 * start.ln() + s * k - sigma;
    ln_prefactor.exp() * scaled_exp_integral_5_2(sigma)
}

/// `e^sigma E_{5/2}(sigma)` where `E_p(x) = int_1^inf u^-p e^(-x u) du`.
fn scaled_exp_integral_5_2(sigma: f64) -> f64 {
    if sigma == 0.0 {
        return 2.0 / 3.0;
    }
    if sigma > 50.0 {
        let (p, inv) = (2.5, 1.0 / sigma);
        return inv * (1.0 - p * inv + p * (p + 1.0) * inv * inv - p * (p + 1.0) * (p + 2.0) * inv.powi(3));
    }
    let root = sigma.sqrt();
    let e_half = (std::f64::consts::PI / sigma).sqrt() * statrs::function::erf::erfc(root) * sigma.exp();
    let e_three_halves = 2.0 * (1.0 - sigma * e_half);
    (2.0 / 3.0) * (1.0 - sigma * e_three_halves)
}

/// Closed form of `tau` through the tree function: `(x - x^2/2)/c`.
pub fn tau_closed(c: f64) -> f64 {
    if c == 0.0 {
        return 1.0;
    }
    let x = small_x(c);
    (x - 0.5 * x * x) / c
}

/// Upper bound on `tau(c)` for `c > 1`: `e^-c / (1 - c e^(1-c))`.
pub fn tau_tail_bound(c: f64) -> f64 {
    assert!(c > 1.0);
    (-c).exp() / (1.0 - c * (1.0 - c).exp())
}

/// `int_0^inf tau(c) dc`, which equals zeta(3).
///
/// The domain is cut at `c = 1` (where `tau` has a kink in its second
/// derivative) and at a point past which `int tau < 1e-6` by
/// [`tau_tail_bound`]; both pieces use adaptive Simpson.
pub fn zeta3_by_quadrature() -> f64 {
    let cut = tail_cutoff(1e-6);
    let f = |c: f64| tau(c);
    adaptive_simpson(&f, 0.0, 1.0, 1e-10, 40) + adaptive_simpson(&f, 1.0, cut, 1e-10, 40)
}

/// Smallest grid point `C >= 2` with `int_C^inf tau <= eps`.
pub fn tail_cutoff(eps: f64) -> f64 {
    // the bound's denominator grows on c > 1, so int_C^inf <= tau_tail_bound(C)
    let mut c = 2.0;
    while tau_tail_bound(c) > eps {
        c += 0.5;
    }
    c
}

pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64, depth: u32) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, eps, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

/// Solves `tau(c) = y` for `c >= 1`, `0 < y <= 1/2`.
pub fn invert_tau(y: f64) -> f64 {
    assert!(y > 0.0 && y <= 0.5, "tau inversion target {y} outside (0, 1/2]");
    if y == 0.5 {
        return 1.0;
    }
    let mut hi = 2.0;
    while tau_closed(hi) > y {
        hi *= 2.0;
    }
    bisect(|c| tau_closed(c) - y, 1.0, hi, &SolverConfig::default())
}

/// Predicted rank of Maker's `k`-th edge in the greedy spanning-tree game.
///
/// Returns `t(1), ..., t(n-1)`. Up to `n/2` merges almost every edge joins two
/// components, so each round consumes `b + 1` ranks. Past that, the chance that
/// a fresh edge lies inside the giant (fraction `1 - x/c`) slows Maker down:
/// `t(k+1) = t(k) + (b+1) / (1 - (1 - x_k/c_k)^2)`, with `c_k` fixed by
/// `tau(c_k) = (n-k)/n` (the forest has `n - k` components after `k` merges).
pub fn t_curve(n: usize, b: u32) -> Vec<f64> {
    assert!(n >= 4, "t_curve needs n >= 4");
    let scale = f64::from(b) + 1.0;
    let half = n / 2;
    let mut t = Vec::with_capacity(n - 1);
    for k in 1..=half.min(n - 1) {
        t.push(scale * k as f64);
    }
    for k in half..n - 1 {
        let y = (n - k) as f64 / n as f64;
        let gap = if y >= 0.5 {
            scale
        } else {
            let c = invert_tau(y);
            let giant = 1.0 - small_x(c) / c;
            scale / (1.0 - giant * giant)
        };
        let next = t[k - 1] + gap;
        t.push(next);
    }
    t
}

/// All closed-form bounds for a given size and bias.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremBounds {
    /// `(b+1) n`: mapping game, Breaker first.
    pub mapping_breaker_first: f64,
    /// `(n-1) b + n`: mapping game, Maker first.
    pub mapping_maker_first: f64,
    /// `mu_b (b+1)`: uniform payments on the mapping game.
    pub mapping_uniform: f64,
    /// `(b/theta* + b + 1) n`: arborescence rank cost.
    pub arborescence: f64,
    /// `mu_b (b/theta* + b + 1)`: arborescence with uniform payments.
    pub arborescence_uniform: f64,
    /// `4 mu_b (b/theta* + b + 1)`: undirected tree via split costs.
    pub split_tree: f64,
    /// `(b+1) zeta(3)`: greedy spanning-tree game.
    pub greedy: f64,
}

pub fn theorem_bounds(n: usize, b: u32) -> TheoremBounds {
    let (nf, bf) = (n as f64, f64::from(b));
    let mu = solve_mu(b);
    let slope = arborescence_slope(b);
    TheoremBounds {
        mapping_breaker_first: (bf + 1.0) * nf,
        mapping_maker_first: (nf - 1.0) * bf + nf,
        mapping_uniform: mu * (bf + 1.0),
        arborescence: slope * nf,
        arborescence_uniform: mu * slope,
        split_tree: 4.0 * mu * slope,
        greedy: (bf + 1.0) * ZETA3,
    }
}

/// `b/theta* + b + 1`.
pub fn arborescence_slope(b: u32) -> f64 {
    let bf = f64::from(b);
    bf / solve_theta_star() + bf + 1.0
}

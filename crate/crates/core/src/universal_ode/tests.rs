use std::sync::OnceLock;

use super::*;

/// Origin slope and screening-function values from a two-point collocation
/// solve with the three-term Sommerfeld condition imposed at x = 1e4.
const BVP_SLOPE: f64 = 1.588_071_022_611_375;
const BVP_CHI: [(f64, f64); 5] = [
    (1.0, 4.240_080_520_807_056e-1),
    (5.0, 7.880_777_925_136_986e-2),
    (10.0, 2.431_429_298_868_085e-2),
    (30.0, 2.255_836_616_202_675e-3),
    (100.0, 1.002_425_681_384_263e-4),
];

fn default_solution() -> &'static UniversalSolution<f64> {
    static SOL: OnceLock<UniversalSolution<f64>> = OnceLock::new();
    SOL.get_or_init(|| solve_universal(SolverConfig::default()).unwrap())
}

/// Sommerfeld amplitude obtained by inverting the converged series
/// `144 x^-3 S(x^-zeta)` against the collocation values at x = 30 and 100.
const SERIES_AMPLITUDE: f64 = 13.270_973_848;

/// Independent route to the origin slope: classical RK4 with a fixed step in
/// `t = sqrt(x)`, integrating one decaying solution inward from its leading
/// asymptotic form and rescaling it to unit value at the origin.
fn rk4_inward_slope(x_start: f64, steps: usize) -> f64 {
    let f = |t: f64, y: [f64; 2]| [2.0 * t * y[1], 2.0 * y[0].max(0.0).powf(1.5)];
    let t0 = x_start.sqrt();
    let h = -t0 / steps as f64;
    let z = (73f64.sqrt() - 7.0) / 2.0;
    let a = 13.0;
    let y1 = x_start.powf(-z);
    let mut y = [
        144.0 / x_start.powi(3) * (1.0 - a * y1),
        144.0 / x_start.powi(4) * (-3.0 + a * (3.0 + z) * y1),
    ];
    let mut t = t0;
    for _ in 0..steps {
        let k1 = f(t, y);
        let k2 = f(t + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = f(t + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = f(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;
    }
    let k = y[0].powf(-1.0 / 3.0);
    -k.powi(4) * y[1]
}

#[test]
fn origin_slope_to_three_decimals() {
    let sol = default_solution();
    assert!((sol.origin_slope - 1.588).abs() <= 1e-3);
}

#[test]
fn origin_slope_matches_collocation_oracle() {
    let sol = default_solution();
    assert!((sol.origin_slope - BVP_SLOPE).abs() < 1e-10, "{}", sol.origin_slope);
    let (lo, hi) = sol.report().bracket;
    assert!(lo <= sol.origin_slope && sol.origin_slope <= hi);
    assert!(hi - lo <= sol.config.bisection_tolerance);
}

#[test]
fn origin_slope_matches_fixed_step_oracle() {
    let b = rk4_inward_slope(1e5, 400_000);
    assert!((b - BVP_SLOPE).abs() < 1e-8, "oracle {b}");
    assert!((default_solution().origin_slope - b).abs() < 1e-8);
}

#[test]
fn inward_family_agrees_with_bisection() {
    let sol = default_solution();
    assert!((sol.report().inward_origin_slope - sol.origin_slope).abs() < 1e-9);
    assert!(sol.report().derivative_mismatch.abs() < 1e-9);
}

#[test]
fn sommerfeld_amplitude_near_literature_value() {
    let a = default_solution().report().asymptotic_amplitude;
    assert!((a - 13.26).abs() < 0.02, "{a}");
    assert!((a - SERIES_AMPLITUDE).abs() < 1e-6, "{a}");
}

#[test]
fn chi_is_one_at_origin() {
    let sol = default_solution();
    assert_eq!(sol.chi(0.0).unwrap(), 1.0);
    assert_eq!(sol.chi_prime(0.0).unwrap(), -sol.origin_slope);
    assert_eq!(sol.nodes[0].x, 0.0);
    assert_eq!(sol.nodes[0].chi, 1.0);
}

#[test]
fn chi_matches_collocation_oracle() {
    let sol = default_solution();
    for (x, want) in BVP_CHI {
        let got = sol.chi(x).unwrap();
        assert!(((got - want) / want).abs() < 1e-9, "x={x}: {got} vs {want}");
    }
}

#[test]
fn chi_at_one_is_stable_under_tighter_tolerance() {
    let tight = solve_universal(SolverConfig::default().with_tolerance(1e-13)).unwrap();
    let a = default_solution().chi(1.0).unwrap();
    let b = tight.chi(1.0).unwrap();
    assert!((a - b).abs() < 1e-11, "{a} vs {b}");
    assert!((a - 0.424).abs() < 1e-3);
}

#[test]
fn negative_radius_is_rejected() {
    let sol = default_solution();
    assert!(sol.chi(-1e-3).is_err());
    assert!(sol.chi_prime(-1.0).is_err());
    assert!(sol.fraction_outside(-2.0).is_err());
}

#[test]
fn tail_limits() {
    let sol = default_solution();
    let mut prev = f64::INFINITY;
    for &x in &[1e3, 1e4, 1e5, 1e6] {
        let c3 = sol.chi(x).unwrap() * x.powi(3);
        let d4 = sol.chi_prime(x).unwrap() * x.powi(4);
        assert!((c3 - 144.0).abs() < prev);
        prev = (c3 - 144.0).abs();
        let y = x.powf(-sommerfeld_exponent::<f64>());
        assert!((d4 + 432.0).abs() < 432.0 * 2.0 * SERIES_AMPLITUDE * y);
    }
    assert!(prev < 144.0 * 1e-3);
}

#[test]
fn chi_prime_matches_finite_differences_with_second_order() {
    let sol = default_solution();
    let x = 5.0;
    let fd = |h: f64| (sol.chi(x + h).unwrap() - sol.chi(x - h).unwrap()) / (2.0 * h);
    let exact = sol.chi_prime(x).unwrap();
    let errs: Vec<f64> = [4e-3, 2e-3, 1e-3].iter().map(|&h| (fd(h) - exact).abs()).collect();
    assert!(errs[2] < 1e-8 * exact.abs().max(1.0));
    let order = (errs[1] / errs[2]).log2();
    assert!(order >= 1.9, "observed order {order}");
}

#[test]
fn shape_invariants_hold_on_nodes() {
    let sol = default_solution();
    for w in sol.nodes.windows(2) {
        assert!(w[1].x > w[0].x);
        assert!(w[1].chi < w[0].chi);
        assert!(w[1].chi_prime >= w[0].chi_prime);
    }
    for n in &sol.nodes {
        assert!(n.chi > 0.0 && n.chi_prime < 0.0);
    }
}

#[test]
fn ode_residual_is_small_at_interior_points() {
    let sol = default_solution();
    let tol = sol.config.abs_tolerance;
    let mut x = 2e-4;
    while x < sol.config.max_range {
        let c = sol.chi(x).unwrap();
        let d2 = sol.chi_second(x).unwrap();
        let r = (d2 - c.powf(1.5) / x.sqrt()).abs();
        assert!(r < 100.0 * tol, "x={x}: residual {r}");
        x *= 1.37;
    }
}

#[test]
fn seams_are_continuous() {
    let sol = default_solution();
    let cfg = sol.config;
    let tol = cfg.abs_tolerance;
    let xs = cfg.series_cutoff;
    let series = sol.series().eval(xs).0;
    let table = sol.chi(xs).unwrap();
    assert!((series - table).abs() < 10.0 * tol);
    for x in [cfg.tail_cutoff, cfg.max_range] {
        let table = sol.chi(x).unwrap();
        let tail = sol.tail.eval(x).0;
        assert!((table - tail).abs() < 10.0 * tol, "x={x}: {table} vs {tail}");
    }
}

#[test]
fn fraction_outside_endpoints_and_monotonicity() {
    let sol = default_solution();
    assert_eq!(sol.fraction_outside(0.0).unwrap(), 1.0);
    let mut prev = 1.0;
    let mut x = 1e-3;
    while x < 1e6 {
        let f = sol.fraction_outside(x).unwrap();
        assert!(f < prev && f > 0.0, "x={x}");
        prev = f;
        x *= 1.5;
    }
    assert!(prev < 1e-12);
}

#[test]
fn sodium_fraction_radius() {
    let sol = default_solution();
    let x = sol.invert_fraction(1.0 / 11.0).unwrap();
    assert!((x - 8.6).abs() < 0.1, "{x}");
    assert!((sol.fraction_outside(x).unwrap() - 1.0 / 11.0).abs() < 1e-10);
}

#[test]
fn invert_fraction_round_trips() {
    let sol = default_solution();
    assert_eq!(sol.invert_fraction(1.0).unwrap(), 0.0);
    for x in [0.1, 1.0, 5.0, 20.0] {
        let f = sol.fraction_outside(x).unwrap();
        let back = sol.invert_fraction(f).unwrap();
        assert!((back - x).abs() < 1e-8, "{x} -> {back}");
    }
    assert!(sol.invert_fraction(0.0).is_err());
    assert!(sol.invert_fraction(1.5).is_err());
}

#[test]
fn tail_fit_on_moderate_window() {
    let fit = default_solution().fit_tail((30.0, 300.0)).unwrap();
    let z = sommerfeld_exponent::<f64>();
    assert!((fit.leading_coefficient / 144.0 - 1.0).abs() < 0.02);
    assert!((fit.correction_exponent / z - 1.0).abs() < 0.05);
}

#[test]
fn tail_fit_rejects_bad_windows() {
    let sol = default_solution();
    assert!(matches!(sol.fit_tail((2.0, 300.0)), Err(TfError::IllConditioned(_))));
    assert!(matches!(sol.fit_tail((100.0, 150.0)), Err(TfError::IllConditioned(_))));
    assert!(sol.fit_tail((100.0, 5000.0)).is_err());
}

#[test]
fn slope_converges_under_tolerance_refinement() {
    let slopes: Vec<f64> = [1e-7, 5e-8, 2.5e-8]
        .iter()
        .map(|&t| solve_universal(SolverConfig::default().with_tolerance(t)).unwrap().origin_slope)
        .collect();
    assert!((slopes[2] - slopes[1]).abs() < (slopes[1] - slopes[0]).abs());
}

#[test]
fn invalid_configs_are_rejected() {
    let base = SolverConfig::<f64>::default();
    for bad in [
        SolverConfig { abs_tolerance: 0.0, ..base },
        SolverConfig { series_cutoff: 50.0, ..base },
        SolverConfig { tail_cutoff: 2e3, ..base },
        SolverConfig { bisection_tolerance: -1.0, ..base },
        SolverConfig { max_range: f64::NAN, ..base },
    ] {
        assert!(matches!(solve_universal(bad), Err(TfError::InvalidConfig(_))));
    }
}

#[test]
fn single_precision_solution() {
    let sol = solve_universal(SolverConfig::<f32>::default()).unwrap();
    assert!((sol.origin_slope - 1.588).abs() < 1e-3);
    assert!((sol.chi(1.0).unwrap() - 0.424_008).abs() < 1e-4);
}

#[test]
fn csv_dump_format() {
    let sol = default_solution();
    let mut buf = Vec::new();
    sol.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,chi,chi_prime"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[1], "1.0000000000000000e0");
    assert_eq!(text.lines().count(), sol.nodes.len() + 1);
    let row: Vec<f64> = text.lines().nth(10).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(row[0], sol.nodes[9].x);
    assert_eq!(row[1], sol.nodes[9].chi);
}

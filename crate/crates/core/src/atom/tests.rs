use std::sync::OnceLock;

use super::*;
use crate::numerics::quad::{integrate, QuadTol};
use crate::universal_ode::{solve_universal, SolverConfig};

/// Edge radii and origin slopes of ions from an independent inward
/// integration (8th order Dormand-Prince, rtol 1e-13) with Brent on the edge
/// slope.
const ION_ORACLE: [(f64, f64, f64); 4] = [
    (1e-4, 201.595_407_088_905, 1.588_071_022_612),
    (1e-3, 86.529_814_216_969, 1.588_071_022_814),
    (0.1, 10.972_278_821_896, 1.588_148_947_862),
    (0.5, 2.951_825_425_104, 1.607_409_911_404),
];

fn sol() -> &'static UniversalSolution<f64> {
    static SOL: OnceLock<UniversalSolution<f64>> = OnceLock::new();
    SOL.get_or_init(|| solve_universal(SolverConfig::default()).unwrap())
}

fn cfg() -> SolverConfig<f64> {
    SolverConfig::default()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Electrons outside `r0` by adaptive quadrature of the density in `s = sqrt(r)`.
fn mass_outside(z: f64, r0: f64) -> f64 {
    let f = |s: f64| {
        let r = r0 + s * s;
        4.0 * std::f64::consts::PI * r * r * tf_density(sol(), z, r).unwrap() * 2.0 * s
    };
    let lam = length_scale(z);
    let breaks: Vec<f64> = [0.1, 1.0, 10.0, 100.0, 1e3].iter().map(|x| (x / lam).sqrt()).collect();
    integrate(f, 0.0, (1e7 / lam).sqrt(), &breaks, QuadTol::new(1e-300, 1e-12)).unwrap().0
}

#[test]
fn scale_constant_value() {
    assert!(rel(scale_constant::<f64>(), 1.129_507_810_183) < 1e-9);
    assert!(rel(length_scale(8.0_f64), 2.0 * scale_constant::<f64>()) < 1e-15);
}

#[test]
fn potential_approaches_bare_nucleus() {
    for z in [1.0, 10.0, 92.0] {
        let r = 1e-9;
        assert!(rel(r * tf_potential(sol(), z, r).unwrap(), z) < 1e-6);
    }
    assert!(tf_potential(sol(), 1.0, 0.0).is_err());
    assert!(tf_potential(sol(), 1.0, -1.0).is_err());
    assert!(tf_potential(sol(), 0.0, 1.0).is_err());
}

#[test]
fn potential_scaling_law() {
    for z in [2.0, 11.0, 80.0] {
        for r in [0.01, 0.3, 2.0, 15.0] {
            let lhs = tf_potential(sol(), z, r).unwrap();
            let rhs = z.powf(4.0 / 3.0) * tf_potential(sol(), 1.0, z.cbrt() * r).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "Z={z} r={r}");
        }
    }
}

#[test]
fn far_potential_is_charge_independent() {
    let c = scale_constant::<f64>();
    let limit = 144.0 / c.powi(3);
    for z in [1.0, 10.0, 100.0] {
        let r = 1e6;
        let v = tf_potential(sol(), z, r).unwrap() * r.powi(4);
        assert!(rel(v, limit) < 1e-3, "Z={z}: {v} vs {limit}");
    }
}

#[test]
fn density_normalizes_to_nuclear_charge() {
    for z in [1.0, 29.0] {
        let n = mass_outside(z, 0.0);
        assert!(rel(n, z) < 1e-6, "Z={z}: {n}");
    }
}

#[test]
fn density_satisfies_tf_equation() {
    let c = 0.5 * (3.0 * std::f64::consts::PI.powi(2)).powf(2.0 / 3.0);
    for r in [1e-3, 0.1, 1.0, 7.0, 50.0] {
        let phi = tf_potential(sol(), 26.0, r).unwrap();
        let rho = tf_density(sol(), 26.0, r).unwrap();
        assert!(((c * rho.powf(2.0 / 3.0) - phi) / phi).abs() < 1e-9);
    }
}

#[test]
fn density_scaling_law() {
    for z in [3.0, 47.0] {
        for r in [0.02, 0.5, 3.0] {
            let lhs = tf_density(sol(), z, r).unwrap();
            let rhs = z * z * tf_density(sol(), 1.0, z.cbrt() * r).unwrap();
            assert!(rel(lhs, rhs) < 1e-11);
        }
    }
}

#[test]
fn table_one_radii() {
    for (z, want) in [(3.0, 101.0), (11.0, 181.0), (19.0, 207.0), (37.0, 235.0), (55.0, 250.0), (87.0, 266.0)] {
        let got = radius(sol(), z, 1.0).unwrap().radius_pm.round();
        assert!((got - want).abs() <= 2.0, "Z={z}: {got} vs {want}");
    }
}

#[test]
fn table_two_radii() {
    for (z, want) in [(4.0, 87.0), (12.0, 149.0), (20.0, 173.0), (38.0, 199.0), (56.0, 213.0)] {
        let got = radius(sol(), z, 1.4).unwrap().radius_pm.round();
        assert!((got - want).abs() <= 2.0, "Z={z}: {got} vs {want}");
    }
}

#[test]
fn radius_edge_cases() {
    let all = radius(sol(), 7.0, 7.0).unwrap();
    assert_eq!(all.radius_pm, 0.0);
    assert!(radius(sol(), 7.0, 0.0).is_err());
    assert!(radius(sol(), 7.0, -1.0).is_err());
    assert!(radius(sol(), 7.0, 7.5).is_err());
}

#[test]
fn radius_result_invariants() {
    let r = radius(sol(), 30.0, 2.5).unwrap();
    assert_eq!(r.radius_pm, r.radius_bohr * 52.9177);
    assert!((sol().fraction_outside(r.scaled_x).unwrap() * 30.0 - 2.5).abs() < 1e-8 * 30.0);
}

#[test]
fn radius_agrees_with_density_integral() {
    for (z, m) in [(11.0, 1.0), (56.0, 1.4), (80.0, 10.0)] {
        let r = radius(sol(), z, m).unwrap().radius_bohr;
        let outside = mass_outside(z, r);
        assert!(rel(outside, m) < 1e-6, "Z={z} m={m}: {outside}");
    }
}

#[test]
fn radius_monotonicity() {
    let mut prev = f64::INFINITY;
    for m in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let r = radius(sol(), 20.0, m).unwrap().radius_bohr;
        assert!(r < prev);
        prev = r;
    }
    let mut prev = 0.0;
    for z in 3..=87 {
        let r = radius(sol(), z as f64, 1.0).unwrap().radius_pm;
        assert!(r > prev, "Z={z}");
        prev = r;
    }
}

#[test]
fn b_tf_constant_value_and_limit() {
    let b = b_tf_constant();
    assert_eq!(b, (81.0 * std::f64::consts::PI.powi(2) / 2.0).cbrt());
    assert!((b - 7.365).abs() < 5e-3);
    let mut prev = 0.0;
    for z in [1e2, 1e4, 1e6, 1e8] {
        let r = radius(sol(), z, 2.0).unwrap().radius_bohr * 2f64.cbrt();
        assert!(r > prev && r < b);
        prev = r;
    }
    assert!(rel(prev, b) < 0.02);
}

#[test]
fn neutral_energy_power_law() {
    let c: Vec<f64> = [1.0, 10.0, 100.0]
        .iter()
        .map(|&z| energy_neutral(sol(), z).unwrap().total / z.powf(7.0 / 3.0))
        .collect();
    assert!(rel(c[1], c[0]) < 1e-8 && rel(c[2], c[0]) < 1e-8);
    assert!(c[0] < 0.0);
}

#[test]
fn neutral_energy_terms() {
    let e = energy_neutral(sol(), 50.0).unwrap();
    assert!(e.kinetic > 0.0 && e.nuclear_attraction < 0.0 && e.hartree_repulsion > 0.0);
    assert_eq!(e.total, e.kinetic + e.nuclear_attraction + e.hartree_repulsion);
    assert!(e.virial_defect().abs() < 1e-4 * e.total.abs());
}

#[test]
fn energy_routes_agree() {
    for z in [1.0, 13.0] {
        let quad = energy_neutral(sol(), z).unwrap().total;
        let slope = energy_neutral_from_slope(sol(), z).unwrap();
        assert!(rel(quad, slope) < 1e-6);
    }
    let c_tf = -energy_neutral(sol(), 1.0).unwrap().total;
    assert!((c_tf - 0.7687).abs() < 1e-4);
}

#[test]
fn ion_matches_independent_integration() {
    for (q, xc, b) in ION_ORACLE {
        let z = 100.0;
        let ion = solve_ion(&cfg(), AtomSpec::new(z, z * (1.0 - q)).unwrap()).unwrap();
        assert!(rel(ion.cutoff_x, xc) < 1e-9, "q={q}: {}", ion.cutoff_x);
        assert!(rel(ion.origin_slope, b) < 1e-10, "q={q}: {}", ion.origin_slope);
    }
}

#[test]
fn ion_defining_conditions() {
    let ion = solve_ion(&cfg(), AtomSpec::new(40.0, 20.0).unwrap()).unwrap();
    assert_eq!(ion.net_charge_fraction, 0.5);
    let xc = ion.cutoff_x;
    let last = ion.nodes.last().unwrap();
    assert!(rel(last.x, xc) < 1e-14);
    assert!(last.chi.abs() < 1e-10);
    assert!((-xc * last.chi_prime - 0.5).abs() < 1e-10);
    assert_eq!(ion.chi(xc * 1.01).unwrap().0, 0.0);
    assert_eq!(ion.chi(0.0).unwrap().0, 1.0);
    assert!(rel(ion.electron_count().unwrap(), 20.0) < 1e-6);
    let mu = 20.0 / ion.cutoff_radius();
    assert!(rel(ion.chemical_potential, mu) < 1e-14);
}

#[test]
fn neutral_ion_is_the_atom() {
    let ion = solve_ion(&cfg(), AtomSpec::neutral(9.0).unwrap()).unwrap();
    assert!(ion.is_neutral());
    assert!(ion.cutoff_x.is_infinite());
    assert_eq!(ion.chemical_potential, 0.0);
    assert_eq!(ion.origin_slope, sol().origin_slope);
    let e = energy_ion(&ion).unwrap().total;
    assert!(rel(e, energy_neutral(sol(), 9.0).unwrap().total) < 1e-12);
}

#[test]
fn invalid_species_are_rejected() {
    assert!(AtomSpec::new(10.0, 11.0).is_err());
    assert!(AtomSpec::new(10.0, 0.0).is_err());
    assert!(AtomSpec::new(-1.0, 0.5).is_err());
    let bad = AtomSpec {
        nuclear_charge: 10.0,
        electron_number: 12.0,
    };
    assert!(solve_ion(&cfg(), bad).is_err());
}

#[test]
fn chemical_potential_vanishes_toward_neutrality() {
    let z = 50.0;
    let mut prev = f64::INFINITY;
    for n in [40.0, 49.0, 49.9, 49.99] {
        let mu = solve_ion(&cfg(), AtomSpec::new(z, n).unwrap()).unwrap().chemical_potential;
        assert!(mu > 0.0 && mu < prev);
        prev = mu;
    }
    assert!(prev < 1e-3);
}

#[test]
fn energy_derivative_is_minus_mu() {
    let z = 100.0;
    let h = 0.05;
    for q in [0.1, 0.5] {
        let n = z * (1.0 - q);
        let e = |n: f64| energy_ion(&solve_ion(&cfg(), AtomSpec::new(z, n).unwrap()).unwrap()).unwrap().total;
        let de = (e(n + h) - e(n - h)) / (2.0 * h);
        let mu = solve_ion(&cfg(), AtomSpec::new(z, n).unwrap()).unwrap().chemical_potential;
        assert!(rel(-de, mu) < 1e-3, "q={q}: {de} vs {mu}");
    }
}

#[test]
fn ion_energy_properties() {
    let z = 30.0;
    let e0 = energy_neutral(sol(), z).unwrap().total;
    let mut prev = e0;
    for n in [29.0, 25.0, 15.0, 5.0] {
        let ion = solve_ion(&cfg(), AtomSpec::new(z, n).unwrap()).unwrap();
        let e = energy_ion(&ion).unwrap();
        assert!(e.total > prev);
        prev = e.total;
        assert!(e.virial_defect().abs() < 1e-8 * e.total.abs());
        assert!(rel(e.total, energy_ion_from_slope(&ion)) < 1e-9);
    }
}

#[test]
fn ionization_basics() {
    assert_eq!(ionization(&cfg(), 20.0, 0.0).unwrap(), 0.0);
    assert!(ionization(&cfg(), 20.0, 20.0).is_err());
    assert!(ionization(&cfg(), 20.0, -1.0).is_err());
    let mut prev = 0.0;
    for m in [0.5, 1.0, 2.0, 4.0] {
        let i = ionization(&cfg(), 20.0, m).unwrap();
        assert!(i > prev);
        prev = i;
    }
}

#[test]
fn ionization_routes_agree() {
    for (z, m) in [(10.0, 1.0), (10.0, 3.0), (40.0, 12.0)] {
        let thermo = ionization(&cfg(), z, m).unwrap();
        let direct = ionization_direct(&cfg(), sol(), z, m).unwrap();
        assert!(rel(thermo, direct) < 1e-7, "Z={z} m={m}: {thermo} vs {direct}");
    }
}

#[test]
fn a_tf_extrapolation() {
    let ms = [1.0, 2.0, 3.0, 4.0];
    let est = a_tf_estimate(&cfg(), &ms, &[2500.0, 5000.0, 1e4]).unwrap();
    assert!(est.ratios.iter().flatten().all(|&r| r > 0.0));
    assert!(*est.spread_by_z.last().unwrap() < 0.05);
    let doubled = a_tf_estimate(&cfg(), &ms, &[5000.0, 1e4, 2e4]).unwrap();
    assert!(rel(doubled.value, est.value) < 0.02, "{} vs {}", doubled.value, est.value);
    assert!(a_tf_estimate(&cfg(), &ms, &[1e4, 5e3]).is_err());
    assert!(a_tf_estimate(&cfg(), &ms, &[3.0, 10.0]).is_err());
}

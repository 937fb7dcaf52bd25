use std::sync::OnceLock;

use proptest::prelude::*;
use thomas_fermi::atom::{energy_neutral, radius, tf_density, tf_potential};
use thomas_fermi::cli::render_svg;
use thomas_fermi::empirical::{
    builtin_dataset, compare, read_comparison_csv, read_dataset, write_comparison_csv, write_dataset, EmpiricalRecord,
    FigureData, Group, Series, Source,
};
use thomas_fermi::universal_ode::{solve_universal, SolverConfig, UniversalSolution};

fn sol() -> &'static UniversalSolution<f64> {
    static SOL: OnceLock<UniversalSolution<f64>> = OnceLock::new();
    SOL.get_or_init(|| solve_universal(SolverConfig::default()).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chi_is_positive_decreasing_convex(x in 1e-4f64..900.0, dx in 1e-3f64..50.0) {
        let (a, b) = (sol().chi(x).unwrap(), sol().chi(x + dx).unwrap());
        prop_assert!(a > 0.0 && b > 0.0 && b < a);
        prop_assert!(sol().chi_prime(x).unwrap() < 0.0);
        prop_assert!(sol().chi_second(x).unwrap() > 0.0);
    }

    #[test]
    fn fraction_outside_inverts(f in 1e-4f64..0.999) {
        let x = sol().invert_fraction(f).unwrap();
        prop_assert!(rel(sol().fraction_outside(x).unwrap(), f) < 1e-9);
    }

    #[test]
    fn fraction_outside_decreases(x in 1e-3f64..500.0, dx in 1e-2f64..100.0) {
        let a = sol().fraction_outside(x).unwrap();
        let b = sol().fraction_outside(x + dx).unwrap();
        prop_assert!(b < a && a <= 1.0 && b > 0.0);
    }

    /// At a fixed outer fraction the radius scales as Z^{-1/3}.
    #[test]
    fn radius_scales_with_z(z in 1.0f64..1e4, f in 1e-3f64..0.9, k in 1.1f64..50.0) {
        let a = radius(sol(), z, f * z).unwrap().radius_bohr * z.cbrt();
        let b = radius(sol(), k * z, f * k * z).unwrap().radius_bohr * (k * z).cbrt();
        prop_assert!(rel(a, b) < 1e-9);
    }

    #[test]
    fn radius_monotone(z in 2.0f64..1e3, m in 0.1f64..1.9) {
        let r = radius(sol(), z, m).unwrap();
        prop_assert!(radius(sol(), z * 1.5, m).unwrap().radius_bohr > r.radius_bohr);
        prop_assert!(radius(sol(), z, m * 0.9).unwrap().radius_bohr > r.radius_bohr);
        prop_assert!(rel(r.radius_pm, r.radius_bohr * thomas_fermi::units::BOHR_PM) < 1e-15);
    }

    #[test]
    fn energy_follows_seven_thirds_law(z in 0.5f64..500.0) {
        let e1 = energy_neutral(sol(), 1.0).unwrap().total;
        let ez = energy_neutral(sol(), z).unwrap();
        prop_assert!(rel(ez.total / z.powf(7.0 / 3.0), e1) < 1e-8);
        prop_assert!(ez.virial_defect().abs() < 1e-4 * ez.total.abs());
    }

    #[test]
    fn density_matches_potential(z in 1.0f64..100.0, r in 1e-3f64..20.0) {
        let phi = tf_potential(sol(), z, r).unwrap();
        let rho = tf_density(sol(), z, r).unwrap();
        let back = 0.5 * (3.0 * std::f64::consts::PI.powi(2) * rho).powf(2.0 / 3.0);
        prop_assert!(rel(back, phi) < 1e-12);
    }

    #[test]
    fn dataset_csv_round_trip(radii in proptest::collection::vec(proptest::option::of(1.0f64..500.0), 6)) {
        let names = [("Li", 3), ("Na", 11), ("K", 19), ("Rb", 37), ("Cs", 55), ("Fr", 87)];
        let records: Vec<EmpiricalRecord> = names
            .iter()
            .zip(&radii)
            .enumerate()
            .map(|(k, (&(e, z), &r))| {
                let source = if k % 2 == 0 { Source::Bragg1920 } else { Source::Slater1964 };
                EmpiricalRecord::new(e, z, Group::Alkali, source, r).unwrap()
            })
            .collect();
        let mut buf = Vec::new();
        write_dataset(&records, &mut buf).unwrap();
        prop_assert_eq!(read_dataset(buf.as_slice()).unwrap(), records);
    }

    #[test]
    fn comparison_csv_round_trip(m in 0.05f64..3.0) {
        let c = compare(sol(), &builtin_dataset(), Group::Alkali, m).unwrap();
        let mut buf = Vec::new();
        write_comparison_csv(&c.rows, &mut buf).unwrap();
        prop_assert_eq!(read_comparison_csv(buf.as_slice()).unwrap(), c.rows);
    }

    #[test]
    fn svg_shapes_match_series(
        curve in proptest::collection::vec((1.0f64..100.0, 1.0f64..300.0), 0..40),
        a in proptest::collection::vec((1.0f64..100.0, 1.0f64..300.0), 0..10),
        b in proptest::collection::vec((1.0f64..100.0, 1.0f64..300.0), 0..10),
    ) {
        let fig = FigureData {
            group: Group::Alkali,
            m: 1.0,
            curve: Series { label: "curve".into(), points: curve.clone() },
            scatter: vec![
                Series { label: "a".into(), points: a.clone() },
                Series { label: "b".into(), points: b.clone() },
            ],
        };
        let svg = render_svg(&fig);
        prop_assert_eq!(&svg, &render_svg(&fig));
        prop_assert_eq!(svg.matches("<polyline").count(), usize::from(!curve.is_empty()));
        prop_assert_eq!(svg.matches("<circle").count(), a.len() + 1);
        prop_assert_eq!(svg.matches(r#"width="8" height="8""#).count(), b.len() + 1);
        prop_assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}

#[test]
fn single_precision_solution() {
    let s = solve_universal(SolverConfig::<f32>::default().with_tolerance(1e-6)).unwrap();
    assert!((s.origin_slope - 1.588).abs() < 1e-3);
    let r = radius(&s, 11.0f32, 1.0).unwrap().radius_pm;
    assert!((r - 181.0).abs() <= 2.0, "{r}");
}

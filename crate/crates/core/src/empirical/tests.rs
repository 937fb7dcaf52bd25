use std::sync::OnceLock;

use super::*;
use crate::universal_ode::{solve_universal, SolverConfig, UniversalSolution};

fn sol() -> &'static UniversalSolution<f64> {
    static SOL: OnceLock<UniversalSolution<f64>> = OnceLock::new();
    SOL.get_or_init(|| solve_universal(SolverConfig::default()).unwrap())
}

fn parse(text: &str) -> Result<Vec<EmpiricalRecord>> {
    read_dataset(text.as_bytes())
}

#[test]
fn builtin_values() {
    let data = builtin_dataset();
    assert_eq!(data.len(), 22);
    assert_eq!(data.iter().filter(|r| r.radius_pm.is_some()).count(), 20);
    assert_eq!(lookup(&data, "Na", Source::Bragg1920).unwrap().radius_pm, Some(177.0));
    assert_eq!(lookup(&data, "Ba", Source::Slater1964).unwrap().radius_pm, Some(215.0));
    assert_eq!(lookup(&data, "Cs", Source::Slater1964).unwrap().radius_pm, Some(260.0));
    for source in Source::ALL {
        let fr = lookup(&data, "Fr", source).unwrap();
        assert_eq!((fr.z, fr.radius_pm), (87, None));
    }
    assert!(lookup(&data, "Ra", Source::Bragg1920).is_none());
}

#[test]
fn parses_rows() {
    let data = parse("element,Z,group,source,radius_pm\nNa,11,alkali,Bragg1920,177\nFr,87,alkali,Slater1964,?\nK,19,alkali,Bragg1920,\n").unwrap();
    assert_eq!(data.len(), 3);
    assert_eq!(data[0], EmpiricalRecord::new("Na", 11, Group::Alkali, Source::Bragg1920, Some(177.0)).unwrap());
    assert_eq!(data[1].radius_pm, None);
    assert_eq!(data[2].radius_pm, None);
}

#[test]
fn rejects_bad_rows_with_line_numbers() {
    let cases = [
        ("Na,11,alkali,Bragg1920,-5\n", "positive"),
        ("Na,12,alkali,Bragg1920,177\n", "Z = 11"),
        ("Xx,11,alkali,Bragg1920,177\n", "unknown element"),
        ("Mg,12,alkali,Bragg1920,150\n", "not in group"),
        ("Na,11,halogen,Bragg1920,177\n", "unknown group"),
        ("Na,11,alkali,Pauling,177\n", "unknown source"),
        ("Na,11,alkali,Bragg1920,abc\n", "not a number"),
        ("Na,11,alkali\n", "expected 5 fields"),
    ];
    for (row, needle) in cases {
        let text = format!("element,Z,group,source,radius_pm\nLi,3,alkali,Bragg1920,150\n{row}");
        match parse(&text) {
            Err(TfError::Parse { line, message }) => {
                assert_eq!(line, 3, "{row}");
                assert!(message.contains(needle), "{row}: {message}");
            }
            other => panic!("{row}: {other:?}"),
        }
    }
    assert!(matches!(parse(""), Err(TfError::Parse { line: 1, .. })));
    assert!(matches!(parse("a,b,c,d,e\n"), Err(TfError::Parse { line: 1, .. })));
}

#[test]
fn dataset_round_trip() {
    let data = builtin_dataset();
    let mut buf = Vec::new();
    write_dataset(&data, &mut buf).unwrap();
    assert_eq!(parse(std::str::from_utf8(&buf).unwrap()).unwrap(), data);
}

#[test]
fn load_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("radii.csv");
    std::fs::write(&path, "element,Z,group,source,radius_pm\nBe,4,group2,Slater1964,105\n").unwrap();
    let data = load_dataset(&path).unwrap();
    assert_eq!(data[0].radius_pm, Some(105.0));
    assert!(matches!(load_dataset(&dir.path().join("missing.csv")), Err(TfError::Io(_))));
}

#[test]
fn alkali_comparison() {
    let c = compare(sol(), &builtin_dataset(), Group::Alkali, 1.0).unwrap();
    let names: Vec<&str> = c.rows.iter().map(|r| r.element.as_str()).collect();
    assert_eq!(names, ["Li", "Na", "K", "Rb", "Cs", "Fr"]);
    let na = &c.rows[1];
    assert!((na.tf_radius_pm - 181.0).abs() < 2.0);
    assert_eq!(na.abs_error(Source::Bragg1920), Some(na.tf_radius_pm - 177.0));
    assert_eq!(c.rows[5].bragg_pm, None);
    assert_eq!(c.rows[5].rel_error(Source::Slater1964), None);

    let without_li = c.stats_for(Source::Slater1964, true).unwrap();
    assert_eq!((without_li.count, without_li.excluded.as_deref()), (4, Some("Li")));
    assert!(without_li.mean_rel_error < 0.05, "{without_li:?}");
    let all = c.stats_for(Source::Slater1964, false).unwrap();
    assert_eq!(all.count, 5);
    assert!(all.mean_rel_error > without_li.mean_rel_error);
    assert_eq!(c.stats.len(), 4);
}

#[test]
fn group2_comparison() {
    let c = compare(sol(), &builtin_dataset(), Group::Group2, 1.4).unwrap();
    let expected = [87.0, 149.0, 173.0, 199.0, 213.0];
    for (row, want) in c.rows.iter().zip(expected) {
        assert!((row.tf_radius_pm - want).abs() <= 2.0, "{row:?}");
    }
}

#[test]
fn comparison_rejects_bad_input() {
    let data = builtin_dataset();
    assert!(compare(sol(), &data, Group::Alkali, 0.0).is_err());
    assert!(compare(sol(), &data, Group::Alkali, 3.5).is_err());
    assert!(compare(sol(), &data, Group::Alkali, 3.0).is_ok());
    let only_alkali: Vec<_> = data.into_iter().filter(|r| r.group == Group::Alkali).collect();
    assert!(matches!(compare(sol(), &only_alkali, Group::Group2, 1.0), Err(TfError::InvalidArgument(_))));
}

#[test]
fn comparison_csv_round_trip() {
    let c = compare(sol(), &builtin_dataset(), Group::Alkali, 1.0).unwrap();
    let mut buf = Vec::new();
    c.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("element,Z,m,tf_radius_pm,bragg_pm,slater_pm,"));
    assert_eq!(text.lines().count(), 7);
    assert_eq!(read_comparison_csv(buf.as_slice()).unwrap(), c.rows);
}

#[test]
fn figure_curve() {
    let fig = figure_data(sol(), &builtin_dataset(), Group::Alkali, 1.0).unwrap();
    let pts = &fig.curve.points;
    assert_eq!(pts.first().unwrap().0, 1.5);
    assert_eq!(pts.last().unwrap().0, 100.0);
    assert_eq!(pts.len(), 198);
    for w in pts.windows(2).filter(|w| w[0].0 >= 3.0 && w[1].0 <= 87.0) {
        assert!(w[1].1 > w[0].1, "{w:?}");
    }
    let at11 = pts.iter().find(|p| p.0 == 11.0).unwrap().1;
    assert!((at11 - 181.0).abs() <= 2.0);
    assert_eq!(fig.scatter.len(), 2);
    assert_eq!(fig.scatter.iter().map(|s| s.points.len()).sum::<usize>(), 10);
    assert!(figure_data(sol(), &builtin_dataset(), Group::Alkali, 0.0).is_err());
}

#[test]
fn best_fit_is_a_local_optimum() {
    let data = builtin_dataset();
    let fit = best_fit_m(sol(), &data, Group::Group2, None).unwrap();
    assert_eq!(fit.count, 10);
    assert!(fit.m > 0.1 && fit.m < 4.0);
    let at = |m| best_fit_m_misfit(&data, m);
    assert!(at(fit.m) <= at(fit.m * 0.9) && at(fit.m) <= at(fit.m * 1.1));
    assert!((at(fit.m) - fit.rms_rel_error).abs() < 1e-12);
}

fn best_fit_m_misfit(data: &[EmpiricalRecord], m: f64) -> f64 {
    let c = compare(sol(), data, Group::Group2, m).unwrap();
    let errs: Vec<f64> = c
        .rows
        .iter()
        .flat_map(|r| Source::ALL.map(|s| r.rel_error(s)))
        .flatten()
        .collect();
    (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt()
}

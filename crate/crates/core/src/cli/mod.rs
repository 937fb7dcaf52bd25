//! The `tf` command-line front end.

mod args;
mod svg;


use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::error::ErrorKind;
use clap::Parser;
use rayon::prelude::*;

pub use args::{Cli, Command};
pub use svg::render_svg;

use args::*;
use crate::atom::{
    a_tf_estimate, b_tf_constant, energy_ion, energy_neutral, ionization, length_scale, radius, solve_ion, AtomSpec,
    EnergyBreakdown,
};
use crate::diatomic::{binding_gap, d_tf_estimate, solve_diatomic, write_gap_table, DiatomicSpec, GridPolicy};
use crate::empirical::{self, best_fit_m, builtin_dataset, figure_data, load_dataset, EmpiricalRecord, Source};
use crate::error::{Result, TfError};
use crate::units::{EnergyUnit, LengthUnit};
use crate::universal_ode::{solve_universal, SolverConfig, UniversalSolution};

/// Tabulated range of the screening function used for molecules, whose
/// overlap integrals reach far into the tail.
const DIATOMIC_MAX_RANGE: f64 = 1e5;
const DIATOMIC_TOL: f64 = 1e-10;

/// Runs the command line and returns the process exit code: 0 on success,
/// 1 on usage errors, 2 on numerical failures.
pub fn run<I, A>(argv: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, A>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let result = execute(&cli.command, out).and_then(|()| out.flush().map_err(TfError::from));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}

/// Dispatches a parsed command, writing its report to `out`.
pub fn execute(command: &Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Universal(a) => universal(a, out),
        Command::Radius(a) => radius_cmd(a, out),
        Command::Energy(a) => energy(a, out),
        Command::Ion(a) => ion(a, out),
        Command::Ionization(a) => ionization_cmd(a, out),
        Command::Asymptote(a) => match &a.law {
            Law::A { z, m } => asymptote_a(z, m, out),
            Law::B { z, m } => asymptote_b(z, *m, out),
            Law::D { z, r, grid } => asymptote_d(z, r, *grid, out),
        },
        Command::Diatomic(a) => diatomic(a, out),
        Command::Compare(a) => compare_cmd(a, out),
        Command::Plot(a) => plot(a, out),
    }
}

fn neutral() -> Result<UniversalSolution<f64>> {
    solve_universal(SolverConfig::default())
}

fn check_charge(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(TfError::arg(format!("Z must be positive, got {z}")))
    }
}

fn check_electrons(z: f64, n: f64) -> Result<()> {
    check_charge(z)?;
    if !(n > 0.0) {
        return Err(TfError::arg(format!("N must be positive, got {n}")));
    }
    if n > z {
        return Err(TfError::arg(format!("N = {n} exceeds Z = {z} (requires N <= Z)")));
    }
    Ok(())
}

fn line(out: &mut dyn Write, key: &str, value: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{key:<26}{value}")?;
    Ok(())
}

fn universal(a: &UniversalArgs, out: &mut dyn Write) -> Result<()> {
    let config = SolverConfig::default().with_tolerance(a.tol).with_max_range(a.max_range);
    config.validate()?;
    let sol = solve_universal(config)?;
    let report = sol.report();
    line(out, "origin slope B", format!("{:.15}", sol.origin_slope))?;
    line(out, "bracket width", format!("{:.3e}", report.bracket.1 - report.bracket.0))?;
    line(out, "bisection steps", report.iterations)?;
    line(out, "matching radius x", format!("{:.6}", report.match_x))?;
    line(out, "chi' jump at matching", format!("{:.3e}", report.derivative_mismatch))?;
    line(out, "tabulated nodes", sol.nodes.len())?;
    line(out, "tabulated range", format!("[0, {}]", sol.config.max_range))?;
    let t = &sol.tail;
    writeln!(out, "tail chi ~ c x^-3 (1 - a x^-zeta), fitted on [{}, {}]", t.fit_window.0, t.fit_window.1)?;
    line(out, "  c", format!("{:.6}", t.leading_coefficient))?;
    line(out, "  a", format!("{:.6}", t.correction_amplitude))?;
    line(out, "  zeta", format!("{:.6}", t.correction_exponent))?;
    if let Some(path) = &a.dump {
        sol.dump_csv(path)?;
        line(out, "table written to", path.display())?;
    }
    Ok(())
}

fn radius_cmd(a: &RadiusArgs, out: &mut dyn Write) -> Result<()> {
    check_charge(a.z)?;
    if !(a.m > 0.0) {
        return Err(TfError::arg(format!("m must be positive, got {}", a.m)));
    }
    if a.m > a.z {
        return Err(TfError::arg(format!("m = {} exceeds Z = {} (requires m <= Z)", a.m, a.z)));
    }
    let r = radius(&neutral()?, a.z, a.m)?;
    let unit = LengthUnit::from(a.unit);
    line(out, "Z", a.z)?;
    line(out, "m", a.m)?;
    line(out, "radius", format!("{:.2} {}", unit.from_bohr(r.radius_bohr), unit.label()))?;
    line(out, "scaled radius x", format!("{:.6}", r.scaled_x))?;
    Ok(())
}

fn write_energy(out: &mut dyn Write, e: &EnergyBreakdown<f64>, unit: EnergyUnit) -> Result<()> {
    let f = |v: f64| format!("{:.9e} {}", unit.from_hartree(v), unit.label());
    line(out, "kinetic", f(e.kinetic))?;
    line(out, "nuclear attraction", f(e.nuclear_attraction))?;
    line(out, "electron repulsion", f(e.hartree_repulsion))?;
    line(out, "total", f(e.total))?;
    line(out, "virial 2K+V / |E|", format!("{:.3e}", e.virial_defect() / e.total.abs()))?;
    Ok(())
}

fn energy(a: &EnergyArgs, out: &mut dyn Write) -> Result<()> {
    let n = a.n.unwrap_or(a.z);
    check_electrons(a.z, n)?;
    let unit = EnergyUnit::from(a.unit);
    line(out, "Z", a.z)?;
    line(out, "N", n)?;
    if n == a.z {
        write_energy(out, &energy_neutral(&neutral()?, a.z)?, unit)
    } else {
        let ion = solve_ion(&SolverConfig::default(), AtomSpec::new(a.z, n)?)?;
        write_energy(out, &energy_ion(&ion)?, unit)?;
        line(
            out,
            "chemical potential",
            format!("{:.9e} {}", unit.from_hartree(ion.chemical_potential), unit.label()),
        )
    }
}

fn ion(a: &IonArgs, out: &mut dyn Write) -> Result<()> {
    check_electrons(a.z, a.n)?;
    let ion = solve_ion(&SolverConfig::default(), AtomSpec::new(a.z, a.n)?)?;
    let unit = LengthUnit::from(a.unit);
    line(out, "Z", a.z)?;
    line(out, "N", a.n)?;
    line(out, "net charge fraction q", format!("{:.9}", ion.net_charge_fraction))?;
    line(out, "origin slope", format!("{:.12}", ion.origin_slope))?;
    if ion.is_neutral() {
        line(out, "edge radius", "infinite")?;
    } else {
        let r = ion.cutoff_x / length_scale(a.z);
        line(out, "edge radius", format!("{:.6} {}", unit.from_bohr(r), unit.label()))?;
        line(out, "scaled edge radius x", format!("{:.9}", ion.cutoff_x))?;
    }
    line(out, "chemical potential", format!("{:.9e} hartree", ion.chemical_potential))?;
    line(out, "energy", format!("{:.9e} hartree", energy_ion(&ion)?.total))?;
    Ok(())
}

fn ionization_cmd(a: &IonizationArgs, out: &mut dyn Write) -> Result<()> {
    check_charge(a.z)?;
    if !(a.m >= 0.0 && a.m < a.z) {
        return Err(TfError::arg(format!("m = {} must satisfy 0 <= m < Z = {}", a.m, a.z)));
    }
    let i = ionization(&SolverConfig::default(), a.z, a.m)?;
    let unit = EnergyUnit::from(a.unit);
    line(out, "Z", a.z)?;
    line(out, "m", a.m)?;
    line(out, "ionization energy", format!("{:.9e} {}", unit.from_hartree(i), unit.label()))?;
    if a.m > 0.0 {
        line(out, "I / m^(7/3)", format!("{:.9e} {}", unit.from_hartree(i / a.m.powf(7.0 / 3.0)), unit.label()))?;
    }
    Ok(())
}

fn asymptote_a(z: &[f64], m: &[f64], out: &mut dyn Write) -> Result<()> {
    for &zi in z {
        check_charge(zi)?;
    }
    let est = a_tf_estimate(&SolverConfig::default(), m, z)?;
    write!(out, "{:>12}", "Z")?;
    for mj in m {
        write!(out, "{:>16}", format!("m = {mj}"))?;
    }
    writeln!(out, "{:>12}", "spread")?;
    for (i, row) in est.ratios.iter().enumerate() {
        write!(out, "{:>12}", est.z_values[i])?;
        for v in row {
            write!(out, "{v:>16.9e}")?;
        }
        writeln!(out, "{:>12.3e}", est.spread_by_z[i])?;
    }
    write!(out, "{:>12}", "limit")?;
    for v in &est.per_m {
        write!(out, "{v:>16.9e}")?;
    }
    writeln!(out, "{:>12.3e}", est.spread)?;
    line(out, "a_TF (hartree)", format!("{:.6e}", est.value))?;
    Ok(())
}

fn asymptote_b(z: &[f64], m: f64, out: &mut dyn Write) -> Result<()> {
    for &zi in z {
        check_charge(zi)?;
        if m > zi {
            return Err(TfError::arg(format!("m = {m} exceeds Z = {zi} (requires m <= Z)")));
        }
    }
    let sol = neutral()?;
    let limit = b_tf_constant();
    writeln!(out, "{:>12}{:>20}{:>16}", "Z", "R m^(1/3) (bohr)", "rel. deviation")?;
    for &zi in z {
        let b = radius(&sol, zi, m)?.radius_bohr * m.cbrt();
        writeln!(out, "{zi:>12e}{b:>20.9}{:>16.3e}", (b - limit) / limit)?;
    }
    line(out, "limit (81 pi^2/2)^(1/3)", format!("{limit:.9} bohr"))?;
    Ok(())
}

fn diatomic_atoms() -> Result<UniversalSolution<f64>> {
    solve_universal(SolverConfig::default().with_max_range(DIATOMIC_MAX_RANGE))
}

fn asymptote_d(z: &[f64], r: &[f64], grid: usize, out: &mut dyn Write) -> Result<()> {
    let policy = GridPolicy::default().with_cells(grid);
    policy.validate()?;
    for &zi in z {
        check_charge(zi)?;
    }
    let est = d_tf_estimate(&diatomic_atoms()?, z, r, policy, DIATOMIC_TOL)?;
    writeln!(out, "{:>12}{:>10}{:>16}{:>12}{:>14}", "Z", "slope", "D_TF", "+/-", "refinement")?;
    for p in &est.per_z {
        writeln!(
            out,
            "{:>12e}{:>10.4}{:>16.6e}{:>12.3e}{:>14.3e}",
            p.nuclear_charge,
            p.slope,
            p.d_tf,
            p.d_tf_error,
            p.refinement_change()
        )?;
    }
    line(out, "slope at largest Z", format!("{:.4}", est.slope))?;
    line(out, "D_TF (hartree bohr^7)", format!("{:.6e} +/- {:.3e}", est.d_tf, est.d_tf_error))?;
    Ok(())
}

fn diatomic(a: &DiatomicArgs, out: &mut dyn Write) -> Result<()> {
    let policy = GridPolicy::default().with_cells(a.grid);
    policy.validate()?;
    let specs: Vec<DiatomicSpec<f64>> = a
        .z
        .iter()
        .flat_map(|&z| a.r.iter().map(move |&r| DiatomicSpec::new(z, r)))
        .collect::<Result<_>>()?;
    if a.dump.is_some() && specs.len() != 1 {
        return Err(TfError::arg("--dump needs a single Z and a single R"));
    }
    if !(a.tol > 0.0 && a.tol < 1.0) {
        return Err(TfError::arg(format!("tol must lie in (0, 1), got {}", a.tol)));
    }
    let atoms = diatomic_atoms()?;
    let gaps: Vec<_> = specs
        .par_iter()
        .map(|spec| binding_gap(&atoms, spec, policy, a.tol))
        .collect::<Result<_>>()?;
    writeln!(
        out,
        "{:>10}{:>10}{:>18}{:>12}{:>18}{:>18}",
        "Z", "R (bohr)", "gap (hartree)", "error bar", "lower bound", "upper bound"
    )?;
    for g in &gaps {
        writeln!(
            out,
            "{:>10}{:>10}{:>18.9e}{:>12.3e}{:>18.9e}{:>18.9e}",
            g.spec.nuclear_charge, g.spec.separation, g.gap, g.error_bar, g.lower_bound, g.upper_bound
        )?;
    }
    if let Some(path) = &a.out {
        write_gap_table(&gaps, BufWriter::new(File::create(path)?))?;
        line(out, "gap table written to", path.display())?;
    }
    if let Some(path) = &a.dump {
        let spec = &specs[0];
        let sol = solve_diatomic(&atoms, spec, &spec.grid(policy)?, a.tol)?;
        sol.dump_csv(path)?;
        line(out, "potential written to", path.display())?;
    }
    Ok(())
}

fn dataset(path: &Option<std::path::PathBuf>) -> Result<Vec<EmpiricalRecord>> {
    match path {
        Some(p) => load_dataset(p),
        None => Ok(builtin_dataset()),
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.0}")).unwrap_or_else(|| "?".into())
}

fn compare_cmd(a: &CompareArgs, out: &mut dyn Write) -> Result<()> {
    let records = dataset(&a.data)?;
    let sol = neutral()?;
    let group = a.group.into();
    let c = empirical::compare(&sol, &records, group, a.m)?;
    if a.out == OutputFormat::Csv {
        return c.write_csv(out);
    }
    writeln!(out, "{} radii in pm, m = {}", group, a.m)?;
    writeln!(out, "{:<8}{:>12}{:>12}{:>10}", "element", Source::Bragg1920.label(), Source::Slater1964.label(), "TF")?;
    for row in &c.rows {
        writeln!(
            out,
            "{:<8}{:>12}{:>12}{:>10.0}",
            row.element,
            cell(row.bragg_pm),
            cell(row.slater_pm),
            row.tf_radius_pm
        )?;
    }
    writeln!(out)?;
    writeln!(out, "{:<34}{:>8}{:>12}{:>12}", "mean error of TF against", "points", "abs (pm)", "relative")?;
    for s in &c.stats {
        let name = match &s.excluded {
            Some(e) => format!("{} without {e}", s.source.label()),
            None => s.source.label().to_string(),
        };
        writeln!(out, "{:<34}{:>8}{:>12.2}{:>11.2}%", name, s.count, s.mean_abs_error_pm, 100.0 * s.mean_rel_error)?;
    }
    if let Ok(fit) = best_fit_m(&sol, &records, group, None) {
        writeln!(
            out,
            "best-fit m over all sources: {:.3} (rms relative error {:.2}%)",
            fit.m,
            100.0 * fit.rms_rel_error
        )?;
    }
    Ok(())
}

fn plot(a: &PlotArgs, out: &mut dyn Write) -> Result<()> {
    let records = dataset(&a.data)?;
    let fig = figure_data(&neutral()?, &records, a.group.into(), a.m)?;
    let mut file = BufWriter::new(File::create(&a.out)?);
    file.write_all(render_svg(&fig).as_bytes())?;
    file.flush()?;
    line(out, "figure written to", a.out.display())?;
    Ok(())
}

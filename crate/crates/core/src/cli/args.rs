use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::empirical::Group;
use crate::units::{EnergyUnit, LengthUnit};

/// Thomas-Fermi atoms, ions and diatomic molecules.
///
/// Lengths are in pm unless `--unit bohr` is given, energies in hartree
/// unless `--unit eV` is given (1 hartree = 27.2114 eV, 1 bohr = 52.9177 pm).
#[derive(Debug, Parser)]
#[command(name = "tf", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the universal screening function chi(x).
    Universal(UniversalArgs),
    /// Radius enclosing all but the outermost m electrons of a neutral atom.
    Radius(RadiusArgs),
    /// Energy of a neutral atom or positive ion.
    Energy(EnergyArgs),
    /// Edge radius, chemical potential and origin slope of a positive ion.
    Ion(IonArgs),
    /// Energy needed to remove m electrons from a neutral atom.
    Ionization(IonizationArgs),
    /// Large-Z laws: a (ionization), b (radius) or d (diatomic gap).
    Asymptote(AsymptoteArgs),
    /// No-binding gap of a homonuclear diatomic molecule (tens of seconds
    /// per point in release builds).
    Diatomic(DiatomicArgs),
    /// Compare radii with the Bragg and Slater empirical values.
    Compare(CompareArgs),
    /// Draw radius against Z with the empirical radii as an SVG figure.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LengthArg {
    Pm,
    Bohr,
}

impl From<LengthArg> for LengthUnit {
    fn from(u: LengthArg) -> Self {
        match u {
            LengthArg::Pm => LengthUnit::Pm,
            LengthArg::Bohr => LengthUnit::Bohr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnergyArg {
    Hartree,
    #[value(name = "eV", alias = "ev")]
    Ev,
}

impl From<EnergyArg> for EnergyUnit {
    fn from(u: EnergyArg) -> Self {
        match u {
            EnergyArg::Hartree => EnergyUnit::Hartree,
            EnergyArg::Ev => EnergyUnit::Ev,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    Alkali,
    Group2,
}

impl From<GroupArg> for Group {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Alkali => Group::Alkali,
            GroupArg::Group2 => Group::Group2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
}

#[derive(Debug, Args)]
pub struct UniversalArgs {
    /// Local error target of the integrator.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// End of the tabulated range in scaled units.
    #[arg(long, default_value_t = 1e3)]
    pub max_range: f64,
    /// Write the tabulated solution (x, chi, chi') to this CSV file.
    #[arg(long, value_name = "FILE")]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    /// Nuclear charge.
    #[arg(long = "Z")]
    pub z: f64,
    /// Electrons left outside the radius, 0 < m <= Z.
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, value_enum, default_value = "pm")]
    pub unit: LengthArg,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    /// Nuclear charge.
    #[arg(long = "Z")]
    pub z: f64,
    /// Electron number, 0 < N <= Z [default: Z].
    #[arg(long = "N")]
    pub n: Option<f64>,
    #[arg(long, value_enum, default_value = "hartree")]
    pub unit: EnergyArg,
}

#[derive(Debug, Args)]
pub struct IonArgs {
    /// Nuclear charge.
    #[arg(long = "Z")]
    pub z: f64,
    /// Electron number, 0 < N <= Z.
    #[arg(long = "N")]
    pub n: f64,
    /// Unit of the edge radius.
    #[arg(long, value_enum, default_value = "pm")]
    pub unit: LengthArg,
}

#[derive(Debug, Args)]
pub struct IonizationArgs {
    /// Nuclear charge.
    #[arg(long = "Z")]
    pub z: f64,
    /// Electrons removed, 0 <= m < Z.
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, value_enum, default_value = "hartree")]
    pub unit: EnergyArg,
}

#[derive(Debug, Args)]
pub struct AsymptoteArgs {
    #[command(subcommand)]
    pub law: Law,
}

#[derive(Debug, Subcommand)]
pub enum Law {
    /// I_m(Z) / m^{7/3} and its large-Z limit (hartree).
    A {
        /// Increasing nuclear charges, comma separated.
        #[arg(long = "Z", value_delimiter = ',', default_values_t = [2500.0, 5000.0, 1e4])]
        z: Vec<f64>,
        /// Numbers of removed electrons, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0, 4.0])]
        m: Vec<f64>,
    },
    /// R_m(Z) m^{1/3} in bohr against its large-Z limit.
    B {
        /// Nuclear charges, comma separated.
        #[arg(long = "Z", value_delimiter = ',', default_values_t = [1e2, 1e4, 1e6, 1e8])]
        z: Vec<f64>,
        /// Electrons outside the radius.
        #[arg(long, default_value_t = 1.0)]
        m: f64,
    },
    /// Slope of ln(gap) against ln(R) and the constant of the R^-7 law
    /// (hartree bohr^7).
    D {
        /// Nuclear charges, comma separated.
        #[arg(long = "Z", value_delimiter = ',', default_values_t = [1e8, 1e9])]
        z: Vec<f64>,
        /// Geometric sequence of at least three separations in bohr.
        #[arg(long = "R", value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
        r: Vec<f64>,
        /// Cells per grid segment on the coarse grid.
        #[arg(long, default_value_t = 48)]
        grid: usize,
    },
}

#[derive(Debug, Args)]
pub struct DiatomicArgs {
    /// Nuclear charge of each atom, comma separated for a sweep.
    #[arg(long = "Z", value_delimiter = ',', required = true)]
    pub z: Vec<f64>,
    /// Internuclear distance in bohr, comma separated for a sweep.
    #[arg(long = "R", value_delimiter = ',', required = true)]
    pub r: Vec<f64>,
    /// Cells per grid segment on the coarse grid.
    #[arg(long, default_value_t = 48)]
    pub grid: usize,
    /// Relative Newton tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Write the gap table (Z, R_bohr, gap_hartree, error_bar) to this CSV file.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Write the molecular potential of a single point to this CSV file.
    #[arg(long, value_name = "FILE")]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_enum)]
    pub group: GroupArg,
    /// Electrons outside the radius.
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    /// CSV with columns element,Z,group,source,radius_pm [default: built-in
    /// Bragg 1920 and Slater 1964 radii].
    #[arg(long, value_name = "FILE")]
    pub data: Option<PathBuf>,
    /// Output format on stdout.
    #[arg(long, value_enum, default_value = "table")]
    pub out: OutputFormat,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long, value_enum, default_value = "alkali")]
    pub group: GroupArg,
    /// Electrons outside the radius.
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    /// Empirical radii CSV [default: built-in].
    #[arg(long, value_name = "FILE")]
    pub data: Option<PathBuf>,
    /// SVG file to write.
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

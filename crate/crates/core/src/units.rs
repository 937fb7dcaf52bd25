//! Fixed unit conversions used in every report.

/// Picometres per bohr.
pub const BOHR_PM: f64 = 52.9177;

/// Electronvolts per hartree.
pub const HARTREE_EV: f64 = 27.2114;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LengthUnit {
    Bohr,
    #[default]
    Pm,
}

impl LengthUnit {
    pub fn from_bohr(self, bohr: f64) -> f64 {
        match self {
            LengthUnit::Bohr => bohr,
            LengthUnit::Pm => bohr * BOHR_PM,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LengthUnit::Bohr => "bohr",
            LengthUnit::Pm => "pm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergyUnit {
    #[default]
    Hartree,
    Ev,
}

impl EnergyUnit {
    pub fn from_hartree(self, e: f64) -> f64 {
        match self {
            EnergyUnit::Hartree => e,
            EnergyUnit::Ev => e * HARTREE_EV,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EnergyUnit::Hartree => "hartree",
            EnergyUnit::Ev => "eV",
        }
    }
}

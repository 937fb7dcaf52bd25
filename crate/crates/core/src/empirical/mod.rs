//! Empirical atomic radii of the alkali and group 2 elements and their
//! comparison with Thomas-Fermi radii.

mod compare;
mod periodic;

#[cfg(test)]
mod tests;

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

pub use compare::{
    best_fit_m, compare, figure_data, read_comparison_csv, write_comparison_csv, BestFit, Comparison, ComparisonRow,
    ErrorStats, FigureData, Series,
};
pub use periodic::{atomic_number, symbol};

use crate::error::{Result, TfError};

pub const CSV_HEADER: [&str; 5] = ["element", "Z", "group", "source", "radius_pm"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Alkali,
    Group2,
}

impl Group {
    /// Members through Z = 88, lightest first.
    pub fn members(self) -> &'static [&'static str] {
        match self {
            Group::Alkali => &["Li", "Na", "K", "Rb", "Cs", "Fr"],
            Group::Group2 => &["Be", "Mg", "Ca", "Sr", "Ba", "Ra"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Group::Alkali => "alkali",
            Group::Group2 => "group2",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = TfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alkali" => Ok(Group::Alkali),
            "group2" => Ok(Group::Group2),
            _ => Err(TfError::arg(format!("unknown group '{s}' (expected alkali or group2)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Bragg1920,
    Slater1964,
}

impl Source {
    pub const ALL: [Source; 2] = [Source::Bragg1920, Source::Slater1964];

    pub fn name(self) -> &'static str {
        match self {
            Source::Bragg1920 => "Bragg1920",
            Source::Slater1964 => "Slater1964",
        }
    }

    /// Column heading in rendered tables.
    pub fn label(self) -> &'static str {
        match self {
            Source::Bragg1920 => "Bragg 1920",
            Source::Slater1964 => "Slater 1964",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Source {
    type Err = TfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Bragg1920" => Ok(Source::Bragg1920),
            "Slater1964" => Ok(Source::Slater1964),
            _ => Err(TfError::arg(format!("unknown source '{s}' (expected Bragg1920 or Slater1964)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalRecord {
    pub element: String,
    pub z: u32,
    pub group: Group,
    pub source: Source,
    /// `None` where no value is known.
    pub radius_pm: Option<f64>,
}

impl EmpiricalRecord {
    pub fn new(element: &str, z: u32, group: Group, source: Source, radius_pm: Option<f64>) -> Result<Self> {
        match atomic_number(element) {
            None => return Err(TfError::arg(format!("unknown element '{element}'"))),
            Some(expected) if expected != z => {
                return Err(TfError::arg(format!("{element} has Z = {expected}, not {z}")));
            }
            _ => {}
        }
        if !group.members().contains(&element) {
            return Err(TfError::arg(format!("{element} is not in group {group}")));
        }
        if let Some(r) = radius_pm {
            if !(r > 0.0 && r.is_finite()) {
                return Err(TfError::arg(format!("radius of {element} must be positive, got {r}")));
            }
        }
        Ok(Self {
            element: element.to_string(),
            z,
            group,
            source,
            radius_pm,
        })
    }
}

/// Bragg (1920) and Slater (1964) radii in pm; francium has no value.
pub fn builtin_dataset() -> Vec<EmpiricalRecord> {
    use Group::*;
    use Source::*;
    type Row = (&'static str, u32, Group, Option<f64>, Option<f64>);
    const ROWS: [Row; 11] = [
        ("Li", 3, Alkali, Some(150.0), Some(145.0)),
        ("Na", 11, Alkali, Some(177.0), Some(180.0)),
        ("Rb", 37, Alkali, Some(225.0), Some(235.0)),
        ("K", 19, Alkali, Some(207.0), Some(220.0)),
        ("Cs", 55, Alkali, Some(237.0), Some(260.0)),
        ("Fr", 87, Alkali, None, None),
        ("Be", 4, Group2, Some(115.0), Some(105.0)),
        ("Mg", 12, Group2, Some(150.0), Some(142.0)),
        ("Ca", 20, Group2, Some(170.0), Some(180.0)),
        ("Sr", 38, Group2, Some(195.0), Some(200.0)),
        ("Ba", 56, Group2, Some(210.0), Some(215.0)),
    ];
    let mut out = Vec::with_capacity(2 * ROWS.len());
    for (element, z, group, bragg, slater) in ROWS {
        for (source, radius) in [(Bragg1920, bragg), (Slater1964, slater)] {
            out.push(EmpiricalRecord::new(element, z, group, source, radius).expect("builtin record is valid"));
        }
    }
    out
}

/// First record for `element` and `source`.
pub fn lookup<'a>(records: &'a [EmpiricalRecord], element: &str, source: Source) -> Option<&'a EmpiricalRecord> {
    records.iter().find(|r| r.element == element && r.source == source)
}

/// Parses `element,Z,group,source,radius_pm`; an empty or `?` radius is
/// absent.
pub fn read_dataset<R: Read>(input: R) -> Result<Vec<EmpiricalRecord>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(input);
    let mut records = reader.records();
    let header = match records.next() {
        Some(h) => h?,
        None => return Err(TfError::Parse { line: 1, message: "empty file, header required".into() }),
    };
    if header.iter().map(str::trim).ne(CSV_HEADER.iter().copied()) {
        return Err(TfError::Parse {
            line: 1,
            message: format!("header must be '{}'", CSV_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for row in records {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let parse_err = |message: String| TfError::Parse { line, message };
        if row.len() != CSV_HEADER.len() {
            return Err(parse_err(format!("expected {} fields, found {}", CSV_HEADER.len(), row.len())));
        }
        let field = |k: usize| row[k].trim();
        let z: u32 = field(1)
            .parse()
            .map_err(|_| parse_err(format!("Z '{}' is not a positive integer", field(1))))?;
        let group: Group = field(2).parse().map_err(|e: TfError| parse_err(e.to_string()))?;
        let source: Source = field(3).parse().map_err(|e: TfError| parse_err(e.to_string()))?;
        let radius = match field(4) {
            "" | "?" => None,
            v => Some(v.parse::<f64>().map_err(|_| parse_err(format!("radius '{v}' is not a number")))?),
        };
        let record = EmpiricalRecord::new(field(0), z, group, source, radius).map_err(|e| match e {
            TfError::InvalidArgument(m) => parse_err(m),
            other => other,
        })?;
        out.push(record);
    }
    Ok(out)
}

pub fn load_dataset(path: &Path) -> Result<Vec<EmpiricalRecord>> {
    read_dataset(std::fs::File::open(path)?)
}

pub fn write_dataset<W: Write>(records: &[EmpiricalRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        let radius = r.radius_pm.map(|v| v.to_string()).unwrap_or_default();
        w.write_record([r.element.as_str(), &r.z.to_string(), r.group.name(), r.source.name(), &radius])?;
    }
    w.flush()?;
    Ok(())
}

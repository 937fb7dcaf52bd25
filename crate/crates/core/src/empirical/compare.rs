use std::io::{Read, Write};

use super::{EmpiricalRecord, Group, Source};
use crate::atom::radius;
use crate::error::{Result, TfError};
use crate::numerics::roots::golden_section;
use crate::scalar::{lit, Real};
use crate::universal_ode::{sci17, UniversalSolution};

const COMPARISON_HEADER: [&str; 10] = [
    "element",
    "Z",
    "m",
    "tf_radius_pm",
    "bragg_pm",
    "slater_pm",
    "abs_err_bragg_pm",
    "abs_err_slater_pm",
    "rel_err_bragg",
    "rel_err_slater",
];

/// Curve sampling in Z.
const CURVE_Z_MAX: f64 = 100.0;
const CURVE_STEP: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub element: String,
    pub z: u32,
    pub m_used: f64,
    /// Unrounded.
    pub tf_radius_pm: f64,
    pub bragg_pm: Option<f64>,
    pub slater_pm: Option<f64>,
}

impl ComparisonRow {
    pub fn empirical(&self, source: Source) -> Option<f64> {
        match source {
            Source::Bragg1920 => self.bragg_pm,
            Source::Slater1964 => self.slater_pm,
        }
    }

    /// `tf - empirical` in pm.
    pub fn abs_error(&self, source: Source) -> Option<f64> {
        self.empirical(source).map(|e| self.tf_radius_pm - e)
    }

    pub fn rel_error(&self, source: Source) -> Option<f64> {
        self.empirical(source).map(|e| (self.tf_radius_pm - e) / e)
    }
}

/// Mean errors against one source over the elements that have a value.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorStats {
    pub source: Source,
    /// Element left out of the average, if any.
    pub excluded: Option<String>,
    pub count: usize,
    pub mean_abs_error_pm: f64,
    pub mean_rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub group: Group,
    pub m: f64,
    /// Sorted by Z.
    pub rows: Vec<ComparisonRow>,
    /// Per source: all elements, then without the lightest.
    pub stats: Vec<ErrorStats>,
}

impl Comparison {
    pub fn stats_for(&self, source: Source, excluding_lightest: bool) -> Option<&ErrorStats> {
        self.stats
            .iter()
            .find(|s| s.source == source && s.excluded.is_some() == excluding_lightest)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_comparison_csv(&self.rows, out)
    }
}

fn group_rows(records: &[EmpiricalRecord], group: Group) -> Vec<(String, u32)> {
    let mut elements: Vec<(String, u32)> = records
        .iter()
        .filter(|r| r.group == group)
        .map(|r| (r.element.clone(), r.z))
        .collect();
    elements.sort_by_key(|e| e.1);
    elements.dedup();
    elements
}

fn value(records: &[EmpiricalRecord], element: &str, source: Source) -> Option<f64> {
    records
        .iter()
        .find(|r| r.element == element && r.source == source)
        .and_then(|r| r.radius_pm)
}

fn error_stats(rows: &[ComparisonRow], source: Source, excluded: Option<&str>) -> ErrorStats {
    let (mut count, mut abs, mut rel) = (0usize, 0.0, 0.0);
    for row in rows.iter().filter(|r| Some(r.element.as_str()) != excluded) {
        if let (Some(a), Some(q)) = (row.abs_error(source), row.rel_error(source)) {
            count += 1;
            abs += a.abs();
            rel += q.abs();
        }
    }
    let n = count.max(1) as f64;
    ErrorStats {
        source,
        excluded: excluded.map(str::to_string),
        count,
        mean_abs_error_pm: if count == 0 { f64::NAN } else { abs / n },
        mean_rel_error: if count == 0 { f64::NAN } else { rel / n },
    }
}

/// Thomas-Fermi radius of every element of `group` present in `records`
/// next to its empirical values.
pub fn compare<T: Real>(sol: &UniversalSolution<T>, records: &[EmpiricalRecord], group: Group, m: f64) -> Result<Comparison> {
    let elements = group_rows(records, group);
    let Some(lightest) = elements.first().cloned() else {
        return Err(TfError::arg(format!("no records for group {group}")));
    };
    if !(m > 0.0 && m <= lightest.1 as f64) {
        return Err(TfError::arg(format!(
            "m = {m} must lie in (0, {}] (Z of {})",
            lightest.1, lightest.0
        )));
    }
    let mut rows = Vec::with_capacity(elements.len());
    for (element, z) in elements {
        let r = radius(sol, lit::<T>(z as f64), lit(m))?;
        rows.push(ComparisonRow {
            tf_radius_pm: r.radius_pm.as_f64(),
            bragg_pm: value(records, &element, Source::Bragg1920),
            slater_pm: value(records, &element, Source::Slater1964),
            m_used: m,
            element,
            z,
        });
    }
    let mut stats = Vec::with_capacity(4);
    for source in Source::ALL {
        stats.push(error_stats(&rows, source, None));
        stats.push(error_stats(&rows, source, Some(&lightest.0)));
    }
    Ok(Comparison { group, m, rows, stats })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(sci17).unwrap_or_default()
}

/// Writes rows with 17 significant digits; absent values are empty fields.
pub fn write_comparison_csv<W: Write>(rows: &[ComparisonRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(COMPARISON_HEADER)?;
    for r in rows {
        w.write_record([
            r.element.clone(),
            r.z.to_string(),
            sci17(r.m_used),
            sci17(r.tf_radius_pm),
            fmt_opt(r.bragg_pm),
            fmt_opt(r.slater_pm),
            fmt_opt(r.abs_error(Source::Bragg1920)),
            fmt_opt(r.abs_error(Source::Slater1964)),
            fmt_opt(r.rel_error(Source::Bragg1920)),
            fmt_opt(r.rel_error(Source::Slater1964)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_comparison_csv<R: Read>(input: R) -> Result<Vec<ComparisonRow>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    if reader.headers()?.iter().ne(COMPARISON_HEADER.iter().copied()) {
        return Err(TfError::Parse { line: 1, message: format!("header must be '{}'", COMPARISON_HEADER.join(",")) });
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let err = |k: usize| TfError::Parse { line, message: format!("bad {} '{}'", COMPARISON_HEADER[k], &rec[k]) };
        let num = |k: usize| rec[k].parse::<f64>().map_err(|_| err(k));
        let opt = |k: usize| match &rec[k] {
            "" => Ok(None),
            v => v.parse::<f64>().map(Some).map_err(|_| err(k)),
        };
        rows.push(ComparisonRow {
            element: rec[0].to_string(),
            z: rec[1].parse().map_err(|_| err(1))?,
            m_used: num(2)?,
            tf_radius_pm: num(3)?,
            bragg_pm: opt(4)?,
            slater_pm: opt(5)?,
        });
    }
    Ok(rows)
}

/// Named `(x, y)` points.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Continuous radius curve in Z plus empirical scatter per source.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub group: Group,
    pub m: f64,
    pub curve: Series,
    pub scatter: Vec<Series>,
}

/// Radius curve for Z in (m, 100] at steps of 0.5 and the empirical points
/// of `group`.
pub fn figure_data<T: Real>(sol: &UniversalSolution<T>, records: &[EmpiricalRecord], group: Group, m: f64) -> Result<FigureData> {
    if !(m > 0.0 && m < CURVE_Z_MAX) {
        return Err(TfError::arg(format!("m = {m} must lie in (0, {CURVE_Z_MAX})")));
    }
    let steps = ((CURVE_Z_MAX - 1.0) / CURVE_STEP).round() as usize;
    let mut curve = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let z = 1.0 + k as f64 * CURVE_STEP;
        // R vanishes at Z = m.
        if z <= m {
            continue;
        }
        curve.push((z, radius(sol, lit::<T>(z), lit(m))?.radius_pm.as_f64()));
    }
    let mut scatter = Vec::with_capacity(2);
    for source in Source::ALL {
        let mut points: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| r.group == group && r.source == source)
            .filter_map(|r| r.radius_pm.map(|v| (r.z as f64, v)))
            .collect();
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        scatter.push(Series { label: source.label().to_string(), points });
    }
    Ok(FigureData {
        group,
        m,
        curve: Series { label: format!("Thomas-Fermi, m = {m}"), points: curve },
        scatter,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestFit {
    pub m: f64,
    /// Root mean square relative error at `m`.
    pub rms_rel_error: f64,
    pub count: usize,
}

/// Electron number that best matches the empirical radii of `group`
/// (all sources pooled when `source` is `None`).
pub fn best_fit_m<T: Real>(
    sol: &UniversalSolution<T>,
    records: &[EmpiricalRecord],
    group: Group,
    source: Option<Source>,
) -> Result<BestFit> {
    let points: Vec<(u32, f64)> = records
        .iter()
        .filter(|r| r.group == group && source.is_none_or(|s| r.source == s))
        .filter_map(|r| r.radius_pm.map(|v| (r.z, v)))
        .collect();
    let Some(z_min) = points.iter().map(|p| p.0).min() else {
        return Err(TfError::arg(format!("no empirical radii for group {group}")));
    };
    let misfit = |m: f64| -> f64 {
        let mut sum = 0.0;
        for &(z, emp) in &points {
            match radius(sol, lit::<T>(z as f64), lit(m)) {
                Ok(r) => sum += ((r.radius_pm.as_f64() - emp) / emp).powi(2),
                Err(_) => return f64::INFINITY,
            }
        }
        (sum / points.len() as f64).sqrt()
    };
    let hi = (z_min as f64).min(4.0);
    let m = golden_section(misfit, 0.1, hi);
    Ok(BestFit { m, rms_rel_error: misfit(m), count: points.len() })
}

//! Plot-ready tables for trajectories and diagnostics, written as CSV or JSON
//! with every float in 17 significant digits.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dynamics::Diagnostics;
use crate::error::{ElasticaError, Result};
use crate::geometry::{curvature, torsion, CurveState};
use crate::spectral::grid_points;
use crate::tension::solve_tension;

pub const TRAJECTORY_COLUMNS: [&str; 11] = ["t", "s", "u1", "u2", "u3", "v1", "v2", "v3", "kappa", "theta", "lambda"];
pub const DIAGNOSTIC_COLUMNS: [&str; 9] = [
    "t",
    "T_kin",
    "V_pot",
    "E",
    "closure_defect",
    "beta",
    "e0",
    "picard_iters",
    "contraction",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = ElasticaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(ElasticaError::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

/// Round-trip float text: `d.dddddddddddddddde±x`, or `NaN` / `inf` / `-inf`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn parse_float(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| ElasticaError::InvalidParameter(format!("not a number: {s:?}")))
}

/// Floats travel as strings in JSON so that NaN survives and the digits are
/// exactly those of the CSV form.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Cell(f64);

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_float(self.0))
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_float(&s).map(Cell).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| ElasticaError::InvalidParameter(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| format_float(x))).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| ElasticaError::InvalidParameter(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| ElasticaError::InvalidParameter(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let io = |e: csv::Error| ElasticaError::InvalidParameter(format!("csv: {e}"));
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let columns = r.headers().map_err(io)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec.map_err(io)?.iter().map(parse_float).collect::<Result<_>>()?);
        }
        Ok(Self { columns, rows })
    }

    pub fn to_json(&self) -> Result<String> {
        let t = JsonTable {
            columns: self.columns.clone(),
            rows: self.rows.iter().map(|r| r.iter().map(|&x| Cell(x)).collect()).collect(),
        };
        serde_json::to_string_pretty(&t).map_err(|e| ElasticaError::InvalidParameter(format!("json: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: JsonTable =
            serde_json::from_str(text).map_err(|e| ElasticaError::InvalidParameter(format!("json: {e}")))?;
        Ok(Self {
            columns: t.columns,
            rows: t.rows.into_iter().map(|r| r.into_iter().map(|c| c.0).collect()).collect(),
        })
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn parse(text: &str, format: Format) -> Result<Self> {
        match format {
            Format::Csv => Self::from_csv(text),
            Format::Json => Self::from_json(text),
        }
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        std::fs::write(path, self.render(format)?)
            .map_err(|e| ElasticaError::InvalidParameter(format!("cannot write {}: {e}", path.display())))
    }

    pub fn read(path: &Path, format: Format) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ElasticaError::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, format)
    }
}

/// Appends one row per grid point of `curve` at time `t`. Torsion is NaN
/// where it is undefined (vanishing curvature).
pub fn push_curve_rows(table: &mut Table, t: f64, curve: &CurveState) -> Result<()> {
    let grid = curve.grid();
    let u = curve.u.vector_samples();
    let v = curve.v.vector_samples();
    let kappa = curvature(&curve.u)?.real_samples_on(grid);
    let theta = torsion(&curve.u)
        .map(|(th, _)| th.real_samples_on(grid))
        .unwrap_or_else(|_| vec![f64::NAN; grid]);
    let lambda = solve_tension(curve)
        .map(|l| l.real_samples_on(grid))
        .unwrap_or_else(|_| vec![f64::NAN; grid]);
    for (j, s) in grid_points(grid).into_iter().enumerate() {
        table.push(vec![
            t, s, u[j][0], u[j][1], u[j][2], v[j][0], v[j][1], v[j][2], kappa[j], theta[j], lambda[j],
        ]);
    }
    Ok(())
}

pub fn trajectory_table<'a>(samples: impl IntoIterator<Item = (f64, &'a CurveState)>) -> Result<Table> {
    let mut table = Table::new(&TRAJECTORY_COLUMNS);
    for (t, c) in samples {
        push_curve_rows(&mut table, t, c)?;
    }
    Ok(table)
}

pub fn diagnostics_table(diags: &[Diagnostics]) -> Table {
    let mut table = Table::new(&DIAGNOSTIC_COLUMNS);
    for d in diags {
        table.push(vec![
            d.t,
            d.kinetic,
            d.potential,
            d.energy,
            d.closure_defect,
            d.beta,
            d.e0,
            d.picard_iters as f64,
            d.contraction,
        ]);
    }
    table
}

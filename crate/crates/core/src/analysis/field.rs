//! Scalar-curvature fields over the shape sphere, as CSV.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::coords::{ChartPoint, Space};
use crate::curvature::{scalar, scalar_closed_form};
use crate::error::{Error, Result};
use crate::metrics::{ConformalSource, JmMetric, PotentialKind};

use super::grid::{par_map, GridSpec};
use super::write_row;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldQuantity {
    /// Ricci scalar.
    Scalar,
    /// Gaussian curvature `R / 2`; S2 only.
    Gaussian,
}

impl fmt::Display for FieldQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldQuantity::Scalar => "scalar",
            FieldQuantity::Gaussian => "gaussian",
        })
    }
}

impl FromStr for FieldQuantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "scalar" | "r" => Ok(FieldQuantity::Scalar),
            "gaussian" | "k" => Ok(FieldQuantity::Gaussian),
            other => Err(Error::InvalidArgument(format!("unknown field quantity `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldMethod {
    ClosedForm,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub value: f64,
    pub eta: f64,
    pub xi2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldSample {
    pub space: Space,
    pub potential: PotentialKind,
    pub energy: f64,
    pub quantity: FieldQuantity,
    pub method: FieldMethod,
    pub grid: GridSpec,
    pub units: &'static str,
    /// `(eta, xi2, value)`.
    pub rows: Vec<[f64; 3]>,
    /// Grid points excluded or outside the Hill region.
    pub skipped: usize,
    pub max: Option<Extremum>,
    pub min: Option<Extremum>,
}

impl FieldSample {
    pub fn write_csv(&self, w: &mut dyn Write) -> Result<()> {
        writeln!(
            w,
            "# {} curvature on {} ({}, E = {}), method {}, units {}, r = 1, xi1 = 0",
            self.quantity,
            self.space,
            self.potential,
            self.energy,
            match self.method {
                FieldMethod::ClosedForm => "closed-form",
                FieldMethod::Numeric => "numeric",
            },
            self.units
        )?;
        writeln!(w, "eta,xi2,value")?;
        for row in &self.rows {
            write_row(w, row)?;
        }
        for (label, e) in [("max", self.max), ("min", self.min)] {
            if let Some(e) = e {
                writeln!(w, "# {label},{:.16e},{:.16e},{:.16e}", e.value, e.eta, e.xi2)?;
            }
        }
        writeln!(w, "# skipped,{}", self.skipped)?;
        Ok(())
    }
}

/// Field of the standard (equal-mass, `G = m = 1`, `E = 0`) metric.
pub fn curvature_field_sample(
    space: Space,
    potential: PotentialKind,
    grid: &GridSpec,
    quantity: FieldQuantity,
) -> Result<FieldSample> {
    field_for_metric(&JmMetric::standard(space, potential)?, grid, quantity)
}

/// Field of `metric` at `r = 1`, `xi1 = 0`, scaled by the metric's curvature
/// unit. Closed forms are used at `E = 0`, the numeric engine otherwise.
pub fn field_for_metric(metric: &JmMetric, grid: &GridSpec, quantity: FieldQuantity) -> Result<FieldSample> {
    if quantity == FieldQuantity::Gaussian && metric.space != Space::S2 {
        return Err(Error::InvalidArgument("Gaussian curvature is defined for S2 only".into()));
    }
    let method = if metric.energy == 0.0 && metric.source == ConformalSource::ThreeBody {
        FieldMethod::ClosedForm
    } else {
        FieldMethod::Numeric
    };
    let factor = metric.unit() * if quantity == FieldQuantity::Gaussian { 0.5 } else { 1.0 };
    let points = grid.points();
    let values = par_map(&points, |&(eta, xi2)| {
        let p = ChartPoint { space: metric.space, r: 1.0, eta, xi1: 0.0, xi2 };
        let r = match method {
            FieldMethod::ClosedForm => scalar_closed_form(metric, &p),
            FieldMethod::Numeric => scalar(metric, &p.coords()),
        };
        r.ok().map(|v| v * factor)
    });
    let rows: Vec<[f64; 3]> = points.iter().zip(values).filter_map(|(&(e, x), v)| v.map(|v| [e, x, v])).collect();
    let pick = |better: fn(f64, f64) -> bool| {
        rows.iter()
            .fold(None::<[f64; 3]>, |acc, r| match acc {
                Some(a) if !better(r[2], a[2]) => Some(a),
                _ => Some(*r),
            })
            .map(|r| Extremum { value: r[2], eta: r[0], xi2: r[1] })
    };
    Ok(FieldSample {
        space: metric.space,
        potential: metric.potential,
        energy: metric.energy,
        quantity,
        method,
        grid: *grid,
        units: match metric.potential {
            PotentialKind::InverseSquare => "1/(G m^3)",
            PotentialKind::Newtonian => "1/(G m^(5/2) r)",
        },
        skipped: grid.n_eta * grid.n_xi2 - rows.len(),
        max: pick(|a, b| a > b),
        min: pick(|a, b| a < b),
        rows,
    })
}

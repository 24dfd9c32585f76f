//! Inequality scans, curvature fields, property sampling and the
//! verification runner.

mod field;
mod grid;
mod power;
mod properties;
mod scan;
mod verify;

use std::io::Write;

use crate::error::Result;

pub use field::{curvature_field_sample, field_for_metric, Extremum, FieldMethod, FieldQuantity, FieldSample};
pub use grid::{collision_distance, par_map, singular_distance, thread_cap, GridSpec, THREADS_ENV};
pub use power::{b_polynomial, b_sufficiency, boundary_a, cs_variables, power_sums, PowerSums, B_BOUND, ZETA};
pub use properties::{run_property_suite, PropertyResult};
pub use scan::{
    inequality_scan, inequality_scan_with, nearest_special, nelder_mead, InequalityGroup, InequalityResult, Refined,
    ScanOptions, ScanPoint, ScanReport, NON_STRICT_TOL,
};
pub use verify::{
    closed_form_discrepancy, run_verification_suite, Check, SuiteResult, SuiteStatus, VerificationReport, VerifyConfig,
};

/// Version tag of every JSON report.
pub const SCHEMA: u32 = 1;

/// Writes one CSV row with 17 significant digits.
pub(crate) fn write_row(w: &mut dyn Write, values: &[f64]) -> Result<()> {
    let line: Vec<String> = values.iter().map(|v| format!("{v:.16e}")).collect();
    writeln!(w, "{}", line.join(","))?;
    Ok(())
}

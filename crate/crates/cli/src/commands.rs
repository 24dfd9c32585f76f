use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use jm3body::analysis::{field_for_metric, inequality_scan_with, run_verification_suite, FieldQuantity, ScanOptions};
use jm3body::curvature::special_limits;
use jm3body::dynamics::{
    compare_trajectory_geodesic, flow as integrate_flow, lagrange_homothety, lagrange_rotation, uniform_clocks,
};
use jm3body::stability::{stability_tensor, stability_verdicts};
use jm3body::{ChartPoint, FlowState, GridSpec, JmMetric, MassConfig, PotentialKind, Space, Tolerances, VerifyConfig};
use serde_json::json;

use crate::{Common, Format, Kind, Solution};

pub struct FlowArgs<'a> {
    pub solution: Solution,
    pub kind: Kind,
    pub point: Option<&'a str>,
    pub velocity: Option<&'a str>,
    pub r: f64,
    pub rdot: f64,
    pub horizon: Option<f64>,
    pub samples: usize,
    pub compare: bool,
}

fn floats(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',').map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number `{t}` in {what}"))).collect()
}

impl Common {
    fn space(&self) -> Result<Space> {
        Ok(self.space.parse()?)
    }

    fn potential(&self) -> Result<PotentialKind> {
        Ok(self.potential.parse()?)
    }

    fn masses(&self) -> Result<MassConfig> {
        match floats(&self.masses, "--masses")?[..] {
            [m1, m2, m3] => Ok(MassConfig::new(m1, m2, m3, 1.0)?),
            _ => bail!("--masses needs three values, got `{}`", self.masses),
        }
    }

    fn grid(&self) -> Result<GridSpec> {
        let (n, m) = GridSpec::parse_size(&self.grid)?;
        Ok(GridSpec::default().with_size(n, m))
    }

    fn tolerances(&self) -> Result<Tolerances> {
        match self.tol {
            None => Ok(Tolerances::default()),
            Some(t) if t > 0.0 && t.is_finite() => Ok(Tolerances { rtol: t, atol: t / 100.0, ..Default::default() }),
            Some(t) => bail!("--tol must be positive, got {t}"),
        }
    }

    fn metric(&self) -> Result<JmMetric> {
        Ok(JmMetric::new(self.space()?, self.potential()?, self.energy, self.masses()?)?)
    }

    fn writer(&self) -> Result<Box<dyn Write>> {
        open(self.out.as_deref())
    }
}

fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(w: &mut dyn Write, value: &impl serde::Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn field(common: &Common, quantity: &str, exclusion: f64) -> Result<bool> {
    let quantity: FieldQuantity = quantity.parse()?;
    let grid = common.grid()?.with_exclusion(exclusion);
    let sample = field_for_metric(&common.metric()?, &grid, quantity)?;
    let mut w = common.writer()?;
    sample.write_csv(&mut w)?;
    w.flush()?;
    Ok(true)
}

pub fn scan(common: &Common, fault: f64, report: Option<&Path>) -> Result<bool> {
    let opts = ScanOptions { grid: common.grid()?, fault, refine: true };
    let mut result = inequality_scan_with(&opts);
    if let Some(out) = &common.out {
        let mut w = open(Some(out))?;
        result.write_csv(&mut w)?;
        w.flush()?;
        result.csv_path = Some(out.display().to_string());
    }
    write_json(&mut open(report)?, &result)?;
    Ok(result.passed)
}

fn named_start(common: &Common, solution: Solution, r: f64, rdot: f64) -> Result<(JmMetric, FlowState, Option<f64>)> {
    let mc = common.masses()?;
    let potential = common.potential()?;
    match solution {
        Solution::Rotation => {
            let (start, omega, energy) = lagrange_rotation(&mc, potential, r)?;
            let m = JmMetric::new(Space::C2, potential, energy, mc)?;
            Ok((m, start, Some(std::f64::consts::TAU / omega)))
        }
        Solution::Homothety => {
            let (start, energy) = lagrange_homothety(&mc, potential, r, rdot)?;
            Ok((JmMetric::new(Space::C2, potential, energy, mc)?, start, None))
        }
        Solution::Custom => bail!("`custom` needs --point and --velocity"),
    }
}

fn custom_start(common: &Common, point: Option<&str>, velocity: Option<&str>) -> Result<(JmMetric, FlowState)> {
    let metric = common.metric()?;
    let (Some(point), Some(velocity)) = (point, velocity) else {
        bail!("`custom` needs --point r,eta,xi1,xi2 and --velocity");
    };
    let p = match floats(point, "--point")?[..] {
        [r, eta, xi1, xi2] => ChartPoint { space: metric.space, r, eta, xi1, xi2 },
        _ => bail!("--point needs four values r,eta,xi1,xi2"),
    };
    let vs = floats(velocity, "--velocity")?;
    let d = metric.space.dim();
    if vs.len() != d {
        bail!("--velocity needs {d} components on {}", metric.space);
    }
    let mut v = [0.0; 4];
    v[..d].copy_from_slice(&vs);
    Ok((metric, FlowState::trajectory(p, v)))
}

pub fn flow(common: &Common, args: FlowArgs) -> Result<bool> {
    let tol = common.tolerances()?;
    let (metric, start, period) = match args.solution {
        Solution::Custom => {
            let (m, s) = custom_start(common, args.point, args.velocity)?;
            (m, s, None)
        }
        s => named_start(common, s, args.r, args.rdot)?,
    };
    let horizon = args.horizon.or(period).unwrap_or(1.0);
    if horizon.is_nan() || horizon <= 0.0 || args.samples == 0 {
        bail!("horizon and samples must be positive");
    }
    let mut w = common.writer()?;
    if args.compare {
        let dev = compare_trajectory_geodesic(&metric, &start, horizon, args.samples, &tol)?;
        write_json(
            &mut w,
            &json!({ "energy": metric.energy, "horizon": horizon, "samples": args.samples, "max_deviation": dev }),
        )?;
        return Ok(true);
    }
    let start = match args.kind {
        Kind::Trajectory => start,
        Kind::Geodesic => FlowState::geodesic(start.point, start.velocity),
    };
    let path = integrate_flow(&metric, &start, &uniform_clocks(horizon, args.samples), &tol)?;
    path.write_csv(&mut w)?;
    w.flush()?;
    Ok(true)
}

pub fn stability(common: &Common, solution: Solution, r: f64, rdot: f64) -> Result<bool> {
    let (metric, start, _) = named_start(common, solution, r, rdot)?;
    let report = stability_tensor(&metric, &start.point.coords(), &start.velocity)?;
    let verdicts = stability_verdicts(&report, &[1, 2, 3]);
    write_json(&mut common.writer()?, &json!({ "energy": metric.energy, "report": report, "directions": verdicts }))?;
    Ok(true)
}

pub fn verify(common: &Common, skip_newtonian: bool, fault: f64, samples: usize) -> Result<bool> {
    let cfg = VerifyConfig {
        skip_newtonian,
        fault,
        scan_grid: common.grid()?,
        seed: common.seed,
        property_samples: samples,
        ..Default::default()
    };
    let report = run_verification_suite(&cfg);
    write_json(&mut common.writer()?, &report)?;
    eprint!("{}", report.summary());
    Ok(report.passed)
}

pub fn limits(common: &Common, format: Format) -> Result<bool> {
    let entries = special_limits()?;
    let mut w = common.writer()?;
    match format {
        Format::Json => write_json(&mut w, &entries)?,
        Format::Csv => {
            writeln!(w, "point,quantity,approach,value,expected")?;
            for e in &entries {
                let expected = e.expected.map_or(String::new(), |x| format!("{x:.16e}"));
                writeln!(w, "{},{},{:?},{:.16e},{}", e.point, e.label, e.approach, e.value, expected)?;
            }
            w.flush()?;
        }
    }
    Ok(true)
}

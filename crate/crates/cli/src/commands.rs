//! Subcommand implementations. Each returns the complete output text.

use std::f64::consts::PI;
use std::path::Path;

use entprod::{
    classify_periodicity, entanglement_production, evolutional_measure, evolve_operator,
    ising2_measure_closed_form, thermal_measure_direct, thermal_measure_partition, verify_period,
    Error, Ising2Params, LogBase, MeasureResult, OperatorOnSpace, PeriodClass, RationalTolerance,
    SchattenIndex,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::operator_file::read_operator;
use crate::output::{csv_line, fmt_f64, json, Cell};
use crate::spec::{SweepSpec, Variable};

/// Route disagreement that turns a thermal sweep into a numerical failure.
pub const THERMAL_ROUTE_TOLERANCE: f64 = 1e-10;

/// Grid check tolerance for reported periods.
pub const PERIOD_TOLERANCE: f64 = 1e-9;

/// Largest `k` tried when checking that no `T/k` is also a period.
pub const PERIOD_MAX_DIVISOR: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolveRow {
    pub t: f64,
    pub epsilon: Cell,
    pub norm_num: Cell,
    pub norm_den: Cell,
    pub closed_form: Cell,
    pub abs_diff: Cell,
    /// 1 when the evolution operator is trace-degenerate at this point.
    pub flag: u8,
}

const EVOLVE_HEADER: &str = "t,epsilon,norm_num,norm_den,closed_form,abs_diff,flag";

impl EvolveRow {
    fn csv(&self) -> String {
        csv_line(&[
            fmt_f64(self.t),
            self.epsilon.render(),
            self.norm_num.render(),
            self.norm_den.render(),
            self.closed_form.render(),
            self.abs_diff.render(),
            self.flag.to_string(),
        ])
    }
}

fn numerical(e: Error) -> CliError {
    CliError::Numerical(e.to_string())
}

fn measure_at(
    h: &OperatorOnSpace,
    t: f64,
    p: SchattenIndex,
    log_base: LogBase,
) -> Result<MeasureResult, Error> {
    if p.is_two() {
        return evolutional_measure(h, t).map(|m| m.with_log_base(log_base));
    }
    let u = h.with_matrix(evolve_operator(h.matrix(), t)?)?;
    entanglement_production(&u, p, log_base).map_err(|e| match e {
        Error::TracelessOperator { trace_abs, .. } => Error::TracelessEvolution { t, trace_abs },
        other => other,
    })
}

fn evolve_row(
    spec: &SweepSpec,
    h: &OperatorOnSpace,
    closed: Option<Ising2Params>,
    t: f64,
) -> Result<EvolveRow, CliError> {
    let time = spec.physical_time(t);
    let numeric = match measure_at(h, time, spec.p, spec.log_base) {
        Ok(m) => Some(m),
        Err(e) if e.is_traceless() => None,
        Err(e) => return Err(CliError::Numerical(format!("at t = {t}: {e}"))),
    };
    let closed_form = match closed {
        None => None,
        Some(params) => match ising2_measure_closed_form(params, time, spec.log_base) {
            Ok(v) => Some(Some(v)),
            Err(e) if e.is_traceless() => Some(None),
            Err(e) => return Err(CliError::Numerical(format!("at t = {t}: {e}"))),
        },
    };
    let degenerate = numeric.is_none() || closed_form == Some(None);
    let closed_cell = |c: Option<Option<f64>>| match c {
        None => Cell::Empty,
        Some(_) if degenerate => Cell::Na,
        Some(v) => v.map_or(Cell::Na, Cell::Value),
    };
    let row = match numeric {
        Some(m) if !degenerate => {
            let abs_diff = match closed_form {
                Some(Some(v)) => Cell::Value((m.epsilon - v).abs()),
                _ => Cell::Empty,
            };
            EvolveRow {
                t,
                epsilon: Cell::Value(m.epsilon),
                norm_num: Cell::Value(m.norm_numerator),
                norm_den: Cell::Value(m.norm_denominator),
                closed_form: closed_cell(closed_form),
                abs_diff,
                flag: 0,
            }
        }
        _ => EvolveRow {
            t,
            epsilon: Cell::Na,
            norm_num: Cell::Na,
            norm_den: Cell::Na,
            closed_form: closed_cell(closed_form),
            abs_diff: if closed.is_some() {
                Cell::Na
            } else {
                Cell::Empty
            },
            flag: 1,
        },
    };
    Ok(row)
}

/// `ε(t)` over the time grid, with the closed form alongside for the two-qubit
/// Ising model (Hilbert-Schmidt norm only).
pub fn evolve_rows(spec: &SweepSpec) -> Result<Vec<EvolveRow>, CliError> {
    if spec.variable != Variable::Time {
        return Err(CliError::Usage("evolve sweeps over time".into()));
    }
    spec.validate()?;
    let h = spec.hamiltonian()?;
    let closed = spec.ising2_params().filter(|_| spec.p.is_two());
    spec.grid()
        .par_iter()
        .map(|&t| evolve_row(spec, &h, closed, t))
        .collect()
}

pub fn cmd_evolve(spec: &SweepSpec, format: Format) -> Result<String, CliError> {
    let rows = evolve_rows(spec)?;
    Ok(match format {
        Format::Csv => {
            let mut out = csv_line(&[EVOLVE_HEADER.to_owned()]);
            rows.iter().for_each(|r| out.push_str(&r.csv()));
            out
        }
        Format::Json => json(&rows),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalRow {
    pub beta: f64,
    pub epsilon_direct: f64,
    pub epsilon_partition: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    pub abs_diff: f64,
}

const THERMAL_HEADER: &str = "beta,epsilon_direct,epsilon_partition,Z,abs_diff";

/// Thermal measure over the inverse-temperature grid by both routes.
pub fn thermal_rows(spec: &SweepSpec) -> Result<Vec<ThermalRow>, CliError> {
    if spec.variable != Variable::Beta {
        return Err(CliError::Usage("thermal sweeps over beta".into()));
    }
    if !spec.p.is_two() {
        return Err(CliError::Usage(
            "the thermal measure is defined with the Hilbert-Schmidt norm (p = 2)".into(),
        ));
    }
    spec.validate()?;
    let h = spec.hamiltonian()?;
    let rows: Vec<ThermalRow> = spec
        .grid()
        .par_iter()
        .map(|&beta| {
            let d = thermal_measure_direct(&h, beta).map_err(numerical)?;
            let p = thermal_measure_partition(&h, beta).map_err(numerical)?;
            let d = d.with_log_base(spec.log_base);
            let p = p.with_log_base(spec.log_base);
            Ok(ThermalRow {
                beta,
                epsilon_direct: d.epsilon,
                epsilon_partition: p.epsilon,
                z: d.partition_function,
                abs_diff: (d.epsilon - p.epsilon).abs(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    if let Some(bad) = rows
        .iter()
        .find(|r| !(r.abs_diff < THERMAL_ROUTE_TOLERANCE))
    {
        return Err(CliError::Numerical(format!(
            "thermal routes disagree at beta = {}: |direct - partition| = {:e}",
            bad.beta, bad.abs_diff
        )));
    }
    Ok(rows)
}

pub fn cmd_thermal(spec: &SweepSpec, format: Format) -> Result<String, CliError> {
    let rows = thermal_rows(spec)?;
    Ok(match format {
        Format::Csv => {
            let mut out = csv_line(&[THERMAL_HEADER.to_owned()]);
            for r in &rows {
                out.push_str(&csv_line(&[
                    fmt_f64(r.beta),
                    fmt_f64(r.epsilon_direct),
                    fmt_f64(r.epsilon_partition),
                    fmt_f64(r.z),
                    fmt_f64(r.abs_diff),
                ]));
            }
            out
        }
        Format::Json => json(&rows),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodReport {
    pub kind: &'static str,
    pub h_over_j: Option<f64>,
    /// In units of `1/J`.
    pub period: Option<f64>,
    pub period_over_pi: Option<u64>,
    pub p: Option<i64>,
    pub q: Option<u64>,
    pub verified: Option<bool>,
}

/// Classifies `ε(t)` as periodic or quasi-periodic and, when periodic, checks
/// the period and its minimality on a grid of `points` times.
pub fn period_report(h: f64, j: f64, points: usize) -> Result<PeriodReport, CliError> {
    let params = Ising2Params::new(h, j).map_err(|e| CliError::Usage(e.to_string()))?;
    if points == 0 {
        return Err(CliError::Usage("points must be at least 1".into()));
    }
    let h_over_j = (j != 0.0).then(|| h / j);
    let report = match classify_periodicity(params, RationalTolerance::default()) {
        PeriodClass::Degenerate => PeriodReport {
            kind: "degenerate",
            h_over_j,
            period: None,
            period_over_pi: None,
            p: None,
            q: None,
            verified: None,
        },
        PeriodClass::QuasiPeriodic => PeriodReport {
            kind: "quasi_periodic",
            h_over_j,
            period: None,
            period_over_pi: None,
            p: None,
            q: None,
            verified: None,
        },
        PeriodClass::Periodic { period, p, q } => {
            let check = verify_period(params, period, points, PERIOD_TOLERANCE, PERIOD_MAX_DIVISOR)
                .map_err(numerical)?;
            PeriodReport {
                kind: "periodic",
                h_over_j,
                period: Some(period),
                period_over_pi: Some((period / PI).round() as u64),
                p: Some(p),
                q: Some(q),
                verified: Some(check.holds && check.minimal),
            }
        }
    };
    Ok(report)
}

pub fn cmd_period(h: f64, j: f64, points: usize, format: Format) -> Result<String, CliError> {
    let r = period_report(h, j, points)?;
    Ok(match format {
        Format::Json => json(&r),
        Format::Csv => {
            let opt = |v: Option<f64>| v.map_or(String::new(), fmt_f64);
            let mut out =
                csv_line(&["kind,h_over_j,period,period_over_pi,p,q,verified".to_owned()]);
            out.push_str(&csv_line(&[
                r.kind.to_owned(),
                opt(r.h_over_j),
                opt(r.period),
                r.period_over_pi.map_or(String::new(), |v| v.to_string()),
                r.p.map_or(String::new(), |v| v.to_string()),
                r.q.map_or(String::new(), |v| v.to_string()),
                r.verified.map_or(String::new(), |v| v.to_string()),
            ]));
            out
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub epsilon: f64,
    pub norm_num: f64,
    pub norm_den: f64,
    pub trace_re: f64,
    pub trace_im: f64,
    /// Number, or `"inf"` for the operator norm.
    pub p: serde_json::Value,
    pub log_base: String,
}

pub fn measure_report(
    op: &OperatorOnSpace,
    p: SchattenIndex,
    log_base: LogBase,
) -> Result<MeasureReport, CliError> {
    let m = entanglement_production(op, p, log_base).map_err(numerical)?;
    let tr = op.trace();
    Ok(MeasureReport {
        epsilon: m.epsilon,
        norm_num: m.norm_numerator,
        norm_den: m.norm_denominator,
        trace_re: tr.re,
        trace_im: tr.im,
        p: match p {
            SchattenIndex::Finite(x) => serde_json::json!(x),
            SchattenIndex::Infinity => serde_json::json!("inf"),
        },
        log_base: log_base.to_string(),
    })
}

pub fn cmd_measure(
    file: &Path,
    p: SchattenIndex,
    log_base: LogBase,
    format: Format,
) -> Result<String, CliError> {
    let op = read_operator(file)?;
    let r = measure_report(&op, p, log_base)?;
    Ok(match format {
        Format::Json => json(&r),
        Format::Csv => {
            let mut out =
                csv_line(&["epsilon,norm_num,norm_den,trace_re,trace_im,p,log_base".to_owned()]);
            out.push_str(&csv_line(&[
                fmt_f64(r.epsilon),
                fmt_f64(r.norm_num),
                fmt_f64(r.norm_den),
                fmt_f64(r.trace_re),
                fmt_f64(r.trace_im),
                p.to_string(),
                r.log_base.clone(),
            ]));
            out
        }
    })
}

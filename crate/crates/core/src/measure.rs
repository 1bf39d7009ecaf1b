//! Entanglement production by operators.
//!
//! For an operator `A` on `H = ⊗_i H_i` with non-zero trace, the
//! non-entangling counterpart is
//!
//! ```text
//! A⊗ = (⊗_i A_i) / (Tr A)^(N-1),    A_i = Tr_{H/H_i} A,
//! ```
//!
//! and the entanglement-production measure is `ε(A) = log(‖A‖_p / ‖A⊗‖_p)`.
//! Evolution operators `U(t) = exp(-iHt)` give the evolutional measure `ε(t)`,
//! and Gibbs operators `exp(-βH)/Z` give the thermal measure.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{evolve_operator, imaginary_time_operator, kron, ComplexMatrix, SchattenIndex};
use crate::space::{partial_trace_keep, OperatorOnSpace, StateVector};

/// `|Tr A| <= TRACE_THRESHOLD * ‖A‖_2` is treated as traceless.
pub const TRACE_THRESHOLD: f64 = 1e-12;

/// Probe times for the short-time coefficient, each half the previous.
pub const SHORT_TIME_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Allowed disagreement between the two first-level Richardson estimates,
/// relative to the extrapolated value.
pub const SHORT_TIME_SPREAD: f64 = 1e-4;

// absolute floor for the spread check when the coefficient itself vanishes
const SHORT_TIME_SPREAD_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
    Ten,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
            LogBase::Ten => x.log10(),
        }
    }

    /// `log(1 + x)`, accurate for small `x`.
    pub fn log_1p(self, x: f64) -> f64 {
        x.ln_1p() / self.ln_base()
    }

    /// Natural log of the base.
    pub fn ln_base(self) -> f64 {
        match self {
            LogBase::Natural => 1.0,
            LogBase::Two => std::f64::consts::LN_2,
            LogBase::Ten => std::f64::consts::LN_10,
        }
    }

    /// Re-expresses a logarithm taken in `self` in base `target`.
    pub fn convert(self, value: f64, target: LogBase) -> f64 {
        if self == target {
            value
        } else {
            value * self.ln_base() / target.ln_base()
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Natural => "e",
            LogBase::Two => "2",
            LogBase::Ten => "10",
        })
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "ln" | "natural" => Ok(LogBase::Natural),
            "2" => Ok(LogBase::Two),
            "10" => Ok(LogBase::Ten),
            other => Err(Error::Domain(format!(
                "unknown log base {other:?}, expected one of e, 2, 10"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureResult {
    pub epsilon: f64,
    /// `‖A‖_p`
    pub norm_numerator: f64,
    /// `‖A⊗‖_p`
    pub norm_denominator: f64,
    pub p: SchattenIndex,
    pub log_base: LogBase,
}

impl MeasureResult {
    fn from_norms(num: f64, den: f64, p: SchattenIndex, log_base: LogBase) -> Self {
        Self {
            epsilon: log_base.log(num / den),
            norm_numerator: num,
            norm_denominator: den,
            p,
            log_base,
        }
    }

    /// The same measure in another logarithm base.
    pub fn with_log_base(self, log_base: LogBase) -> Self {
        Self::from_norms(self.norm_numerator, self.norm_denominator, self.p, log_base)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThermalRoute {
    Direct,
    PartitionFormula,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalResult {
    pub epsilon: f64,
    pub beta: f64,
    /// `Z = Tr exp(-βH)`
    pub partition_function: f64,
    pub route: ThermalRoute,
    pub log_base: LogBase,
}

impl ThermalResult {
    pub fn with_log_base(self, log_base: LogBase) -> Self {
        Self {
            epsilon: self.log_base.convert(self.epsilon, log_base),
            log_base,
            ..self
        }
    }
}

fn product_of(locals: &[ComplexMatrix]) -> ComplexMatrix {
    let (first, rest) = locals.split_first().expect("at least one site");
    rest.iter().fold(first.clone(), |acc, m| kron(&acc, m))
}

fn local_reductions(a: &OperatorOnSpace) -> Result<Vec<ComplexMatrix>> {
    (0..a.structure().sites())
        .map(|site| partial_trace_keep(a, site))
        .collect()
}

/// `A⊗ = (⊗_i A_i) / (Tr A)^(N-1)`. Fails with [`Error::TracelessOperator`]
/// when `|Tr A| <= 1e-12 ‖A‖_2`.
pub fn nonentangling_counterpart(a: &OperatorOnSpace) -> Result<OperatorOnSpace> {
    let trace = a.trace();
    let norm = a.matrix().hilbert_schmidt_norm();
    if !(trace.norm() > TRACE_THRESHOLD * norm) {
        return Err(Error::TracelessOperator {
            trace_abs: trace.norm(),
            norm,
        });
    }
    let sites = a.structure().sites();
    let product = product_of(&local_reductions(a)?);
    let normalization = trace.powu(sites as u32 - 1);
    a.with_matrix(product.scale(normalization.inv()))
}

/// `ε(A) = log(‖A‖_p / ‖A⊗‖_p)`.
pub fn entanglement_production(
    a: &OperatorOnSpace,
    p: SchattenIndex,
    log_base: LogBase,
) -> Result<MeasureResult> {
    let counterpart = nonentangling_counterpart(a)?;
    let num = a.matrix().schatten_norm(p)?;
    let den = counterpart.matrix().schatten_norm(p)?;
    Ok(MeasureResult::from_norms(num, den, p, log_base))
}

/// `ε(t)` for `U(t) = exp(-iHt)`, Hilbert-Schmidt norm and natural log.
///
/// The numerator is `√dim H`, exact for unitaries.
pub fn evolutional_measure(h: &OperatorOnSpace, t: f64) -> Result<MeasureResult> {
    let u = h.with_matrix(evolve_operator(h.matrix(), t)?)?;
    let counterpart = nonentangling_counterpart(&u).map_err(|e| match e {
        Error::TracelessOperator { trace_abs, .. } => Error::TracelessEvolution { t, trace_abs },
        other => other,
    })?;
    let num = (h.structure().total_dim() as f64).sqrt();
    debug_assert!(
        (u.matrix().schatten_norm(SchattenIndex::TWO)? - num).abs() <= 1e-10 * num,
        "evolution operator is not unitary"
    );
    let den = counterpart.matrix().schatten_norm(SchattenIndex::TWO)?;
    Ok(MeasureResult::from_norms(
        num,
        den,
        SchattenIndex::TWO,
        LogBase::Natural,
    ))
}

/// Result of a two-level Richardson extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    /// `|R1(t) - R1(t/2)|` between the two first-level estimates.
    pub spread: f64,
}

/// Extrapolates `f(t) = c0 + c1 t² + c2 t⁴ + …` to `t = 0` from samples at
/// `t`, `t/2`, `t/4`, cancelling the `t²` and `t⁴` terms.
pub fn richardson(samples: [f64; 3]) -> Extrapolation {
    let [f0, f1, f2] = samples;
    let r0 = (4.0 * f1 - f0) / 3.0;
    let r1 = (4.0 * f2 - f1) / 3.0;
    Extrapolation {
        value: (16.0 * r1 - r0) / 15.0,
        spread: (r0 - r1).abs(),
    }
}

/// Short-time coefficient `μ = lim_{t→0} 2ε(t)/t²` (natural log).
pub fn short_time_mu(h: &OperatorOnSpace) -> Result<f64> {
    let mut samples = [0.0; 3];
    for (slot, &t) in samples.iter_mut().zip(&SHORT_TIME_STEPS) {
        *slot = 2.0 * evolutional_measure(h, t)?.epsilon / (t * t);
    }
    let ex = richardson(samples);
    if ex.spread > SHORT_TIME_SPREAD * ex.value.abs() + SHORT_TIME_SPREAD_FLOOR {
        return Err(Error::NumericalInstability(format!(
            "short-time extrapolation did not converge: estimates {samples:?}, spread {:e}",
            ex.spread
        )));
    }
    Ok(ex.value)
}

/// `|⟨φ_ent|A φ_dis⟩|² / (‖φ_ent‖² ‖A φ_dis‖²)`, in `[0, 1]`.
pub fn entanglement_probability(
    a: &OperatorOnSpace,
    phi_dis: &StateVector,
    phi_ent: &StateVector,
) -> Result<f64> {
    let image = a.apply(phi_dis)?;
    let image_norm = image.norm();
    if image_norm == 0.0 {
        return Err(Error::ZeroNorm("image A·phi_dis"));
    }
    let ent_norm = phi_ent.norm();
    if ent_norm == 0.0 {
        return Err(Error::ZeroNorm("phi_ent"));
    }
    let overlap = phi_ent.inner(&image)?;
    let value = overlap.norm_sqr() / (ent_norm * ent_norm * image_norm * image_norm);
    Ok(value.min(1.0))
}

/// Thermal measure from the Gibbs operator: `ρ = exp(-βH)/Z`, `ρ⊗ = ⊗_i ρ_i`.
pub fn thermal_measure_direct(h: &OperatorOnSpace, beta: f64) -> Result<ThermalResult> {
    let gibbs = imaginary_time_operator(h.matrix(), beta)?;
    let z = gibbs.trace().re;
    let rho = h.with_matrix(gibbs.scale_real(1.0 / z))?;
    let rho_product = product_of(&local_reductions(&rho)?);
    let num = rho.matrix().schatten_norm(SchattenIndex::TWO)?;
    let den = rho_product.schatten_norm(SchattenIndex::TWO)?;
    Ok(ThermalResult {
        epsilon: (num / den).ln(),
        beta,
        partition_function: z,
        route: ThermalRoute::Direct,
        log_base: LogBase::Natural,
    })
}

/// Thermal measure from traces of the imaginary-time evolution operator only:
///
/// ```text
/// ε = ½ log[ Z^(2N-2) Tr U(-2iβ) / Π_i Tr_{H_i} (Tr_{H/H_i} U(-iβ))² ]
/// ```
pub fn thermal_measure_partition(h: &OperatorOnSpace, beta: f64) -> Result<ThermalResult> {
    let u_beta = h.with_matrix(imaginary_time_operator(h.matrix(), beta)?)?;
    let u_two_beta = imaginary_time_operator(h.matrix(), 2.0 * beta)?;
    let z = u_beta.trace().re;
    let sites = h.structure().sites();

    let mut log_den = 0.0;
    for reduced in local_reductions(&u_beta)? {
        log_den += (&reduced * &reduced).trace().re.ln();
    }
    let log_num = (2 * sites - 2) as f64 * z.ln() + u_two_beta.trace().re.ln();
    Ok(ThermalResult {
        epsilon: 0.5 * (log_num - log_den),
        beta,
        partition_function: z,
        route: ThermalRoute::PartitionFormula,
        log_base: LogBase::Natural,
    })
}

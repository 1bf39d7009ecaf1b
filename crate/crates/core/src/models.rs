//! Model Hamiltonians, closed-form references and seeded operator generators.
//!
//! Spin operators use the spin-½ convention `Sᶻ = diag(1/2, -1/2)` with the
//! single-site basis ordered `(↑, ↓)`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{evolve_operator, imaginary_time_operator, Complex64, ComplexMatrix};
use crate::measure::{evolutional_measure, LogBase};
use crate::space::{embed_local, OperatorOnSpace, SpaceStructure};

/// Largest chain handled by [`ising_chain_hamiltonian`].
pub const MAX_CHAIN_SITES: usize = 12;

pub fn spin_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[0.5, -0.5]).expect("finite")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ising2Params {
    /// External field.
    pub h: f64,
    /// Interaction strength.
    pub j: f64,
}

impl Ising2Params {
    pub fn new(h: f64, j: f64) -> Result<Self> {
        if !h.is_finite() || !j.is_finite() {
            return Err(Error::Domain(format!(
                "non-finite Ising parameters h={h}, J={j}"
            )));
        }
        Ok(Self { h, j })
    }

    pub fn inverted(self) -> Self {
        Self {
            h: -self.h,
            j: -self.j,
        }
    }
}

/// `H = -h (Sᶻ⊗1 + 1⊗Sᶻ) + 2J Sᶻ⊗Sᶻ` on two qubits.
pub fn ising2_hamiltonian(params: Ising2Params) -> OperatorOnSpace {
    ising_chain_hamiltonian(2, params.h, params.j).expect("two sites is in range")
}

/// `-h Σ_i Sᶻ_i + 2J Σ_i Sᶻ_i Sᶻ_{i+1}` on an open chain of `n` qubits.
pub fn ising_chain_hamiltonian(n: usize, h: f64, j: f64) -> Result<OperatorOnSpace> {
    if !(2..=MAX_CHAIN_SITES).contains(&n) {
        return Err(Error::Domain(format!(
            "chain length {n} outside 2..={MAX_CHAIN_SITES}"
        )));
    }
    let structure = SpaceStructure::qubits(n)?;
    let sz: Vec<ComplexMatrix> = (0..n)
        .map(|i| embed_local(&spin_z(), i, &structure).map(OperatorOnSpace::into_matrix))
        .collect::<Result<_>>()?;

    let mut total = ComplexMatrix::zeros(structure.total_dim());
    for s in &sz {
        total = &total + &s.scale_real(-h);
    }
    for pair in sz.windows(2) {
        total = &total + &(&pair[0] * &pair[1]).scale_real(2.0 * j);
    }
    OperatorOnSpace::new(total, structure)
}

/// Exact `ε(t)` for the two-qubit Ising register:
///
/// ```text
/// ε(t) = ½ log[(1 + cos²(ht) + 2cos(ht)cos(Jt)) / (1 + cos(ht)cos(Jt))²]
/// ```
///
/// Evaluated as `½ log(1 + cos²(ht) sin²(Jt) / (1 + cos(ht)cos(Jt))²)`, the same
/// quantity without the cancellation near `t = 0`.
pub fn ising2_measure_closed_form(params: Ising2Params, t: f64, log_base: LogBase) -> Result<f64> {
    let (ch, cj, sj) = (
        (params.h * t).cos(),
        (params.j * t).cos(),
        (params.j * t).sin(),
    );
    let denominator = 1.0 + ch * cj;
    if denominator.abs() <= 1e-12 {
        // |Tr U(t)|² = 4 (1 + cos²(ht) + 2cos(ht)cos(Jt))
        let numerator = 1.0 + ch * ch + 2.0 * ch * cj;
        return Err(Error::TracelessEvolution {
            t,
            trace_abs: 2.0 * numerator.max(0.0).sqrt(),
        });
    }
    let excess = ch * sj / denominator;
    Ok(0.5 * log_base.log_1p(excess * excess))
}

/// Fourth-order short-time expansion `J²t²/8 + J²(J² - 12h²)t⁴/192` (natural log).
pub fn ising2_short_time(params: Ising2Params, t: f64) -> f64 {
    let (h, j) = (params.h, params.j);
    let t2 = t * t;
    j * j * t2 / 8.0 + j * j * (j * j - 12.0 * h * h) * t2 * t2 / 192.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalTolerance {
    pub max_denominator: u64,
    pub tolerance: f64,
}

impl Default for RationalTolerance {
    fn default() -> Self {
        Self {
            max_denominator: 1000,
            tolerance: 1e-9,
        }
    }
}

/// Best rational approximation `p/q` of `x` from its continued-fraction
/// convergents with `q <= max_denominator` and `|x - p/q| <= tolerance·max(1, |x|)`.
pub fn rational_approximation(x: f64, tol: RationalTolerance) -> Option<(i64, u64)> {
    if !x.is_finite() {
        return None;
    }
    let sign = if x < 0.0 { -1 } else { 1 };
    let target = x.abs();
    let bound = tol.tolerance * target.max(1.0);

    let (mut p_prev, mut q_prev) = (1_i128, 0_i128);
    let mut a = target.floor();
    let (mut p, mut q) = (a as i128, 1_i128);
    let mut rest = target - a;
    loop {
        if q as u64 > tol.max_denominator {
            return None;
        }
        if (target - p as f64 / q as f64).abs() <= bound {
            return Some((sign * p as i64, q as u64));
        }
        if rest <= f64::EPSILON {
            return None;
        }
        let inv = 1.0 / rest;
        a = inv.floor();
        rest = inv - a;
        let ai = a as i128;
        (p_prev, p) = (p, ai * p + p_prev);
        (q_prev, q) = (q, ai * q + q_prev);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PeriodClass {
    /// `h/J = p/q` in lowest terms; `period` is in units of `1/J`.
    Periodic {
        period: f64,
        p: i64,
        q: u64,
    },
    QuasiPeriodic,
    /// `J = 0`: `ε(t)` vanishes identically, so every period is admissible.
    Degenerate,
}

/// Periodic when `h/J` is rational within `tol`: the period (units of `1/J`) is
/// `qπ` when `p` and `q` have equal parity, `2qπ` otherwise.
pub fn classify_periodicity(params: Ising2Params, tol: RationalTolerance) -> PeriodClass {
    if params.j == 0.0 {
        return PeriodClass::Degenerate;
    }
    match rational_approximation(params.h / params.j, tol) {
        Some((p, q)) => {
            let same_parity = p.unsigned_abs() % 2 == q % 2;
            let period = if same_parity {
                q as f64 * PI
            } else {
                2.0 * q as f64 * PI
            };
            PeriodClass::Periodic { period, p, q }
        }
        None => PeriodClass::QuasiPeriodic,
    }
}

/// Max over `points` grid times `t_k = k·T/points` (units of `1/J`) of
/// `|ε(t_k + T) - ε(t_k)|`, evaluated through the numeric evolution pipeline.
/// Grid points where either evaluation is trace-degenerate are skipped.
pub fn period_defect(params: Ising2Params, period: f64, points: usize) -> Result<f64> {
    if params.j == 0.0 {
        return Err(Error::Domain("period check needs J != 0".into()));
    }
    let h = ising2_hamiltonian(params);
    let scale = 1.0 / params.j.abs();
    let mut worst = 0.0_f64;
    for k in 0..points {
        let t = period * k as f64 / points as f64;
        let a = evolutional_measure(&h, t * scale);
        let b = evolutional_measure(&h, (t + period) * scale);
        match (a, b) {
            (Ok(a), Ok(b)) => worst = worst.max((a.epsilon - b.epsilon).abs()),
            (Err(e), _) | (_, Err(e)) if e.is_traceless() => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodCheck {
    pub defect: f64,
    /// `defect < tolerance`.
    pub holds: bool,
    /// No `T/k` for `k` in `2..=max_divisor` passes the same check.
    pub minimal: bool,
}

/// Grid check of `T` plus minimality against `T/k`.
pub fn verify_period(
    params: Ising2Params,
    period: f64,
    points: usize,
    tolerance: f64,
    max_divisor: usize,
) -> Result<PeriodCheck> {
    let defect = period_defect(params, period, points)?;
    let mut minimal = true;
    for k in 2..=max_divisor {
        if period_defect(params, period / k as f64, points)? < tolerance {
            minimal = false;
            break;
        }
    }
    Ok(PeriodCheck {
        defect,
        holds: defect < tolerance,
        minimal,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RandomKind {
    /// `(X + X^+)/2` with complex Gaussian `X`.
    Hermitian,
    /// `exp(-iH)` for a random Hermitian `H`.
    Unitary,
    /// Complex Gaussian entries, resampled until `|Tr A| > 0.1 ‖A‖_2`.
    Generic,
    /// `exp(-H)/Tr exp(-H)` for a random Hermitian `H`.
    ThermalState,
    /// `exp(-H)` for a random Hermitian `H`, unnormalized.
    PositiveExponential,
}

fn gaussian_matrix(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut sample = || -> f64 { StandardNormal.sample(rng) };
    ComplexMatrix::from_fn(dim, |_, _| Complex64::new(sample(), sample())).expect("finite")
}

fn gaussian_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let x = gaussian_matrix(dim, rng);
    (&x + &x.adjoint()).scale_real(0.5)
}

/// Deterministic random operator for a given `(structure, kind, seed)`.
pub fn random_operator(structure: &SpaceStructure, kind: RandomKind, seed: u64) -> OperatorOnSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = structure.total_dim();
    let matrix = match kind {
        RandomKind::Hermitian => gaussian_hermitian(dim, &mut rng),
        RandomKind::Unitary => {
            evolve_operator(&gaussian_hermitian(dim, &mut rng), 1.0).expect("Hermitian input")
        }
        RandomKind::Generic => loop {
            let a = gaussian_matrix(dim, &mut rng);
            if a.trace().norm() > 0.1 * a.hilbert_schmidt_norm() {
                break a;
            }
        },
        RandomKind::ThermalState => {
            let g = imaginary_time_operator(&gaussian_hermitian(dim, &mut rng), 1.0)
                .expect("Hermitian input");
            g.scale_real(1.0 / g.trace().re)
        }
        RandomKind::PositiveExponential => {
            imaginary_time_operator(&gaussian_hermitian(dim, &mut rng), 1.0)
                .expect("Hermitian input")
        }
    };
    OperatorOnSpace::new(matrix, structure.clone()).expect("dimension matches structure")
}

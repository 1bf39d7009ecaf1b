//! Tensor-product structure of a composite Hilbert space.
//!
//! Sites are indexed from 0. The composite basis index is
//! `n = Σ_i n_i · Π_{j>i} d_j`, so site 0 varies slowest and the ordering
//! matches left-to-right [`kron`].

use crate::error::{Error, Result};
use crate::matrix::{kron, Complex64, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpaceStructure {
    local_dims: Vec<usize>,
    total_dim: usize,
}

impl SpaceStructure {
    pub fn new(local_dims: Vec<usize>) -> Result<Self> {
        if local_dims.is_empty() {
            return Err(Error::InvalidStructure(
                "at least one site is required".into(),
            ));
        }
        if let Some(site) = local_dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidStructure(format!(
                "site {site} has dimension 0"
            )));
        }
        let total_dim = local_dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidStructure("total dimension overflows".into()))?;
        Ok(Self {
            local_dims,
            total_dim,
        })
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn sites(&self) -> usize {
        self.local_dims.len()
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn local_dim(&self, site: usize) -> Result<usize> {
        self.local_dims
            .get(site)
            .copied()
            .ok_or(Error::SiteOutOfRange {
                site,
                sites: self.sites(),
            })
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Product of the local dimensions before and after `site`.
    fn split_at(&self, site: usize) -> (usize, usize, usize) {
        let before = self.local_dims[..site].iter().product();
        let after = self.local_dims[site + 1..].iter().product();
        (before, self.local_dims[site], after)
    }

    /// Composite index from per-site indices.
    pub fn compose(&self, indices: &[usize]) -> usize {
        debug_assert_eq!(indices.len(), self.sites());
        indices
            .iter()
            .zip(&self.local_dims)
            .fold(0, |acc, (&n, &d)| acc * d + n)
    }

    /// Per-site indices of a composite index.
    pub fn decompose(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.sites()];
        for (slot, &d) in out.iter_mut().zip(&self.local_dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }
}

/// An operator together with the factorization of the space it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorOnSpace {
    matrix: ComplexMatrix,
    structure: SpaceStructure,
}

impl OperatorOnSpace {
    pub fn new(matrix: ComplexMatrix, structure: SpaceStructure) -> Result<Self> {
        if matrix.dim() != structure.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: structure.total_dim(),
                found: matrix.dim(),
            });
        }
        Ok(Self { matrix, structure })
    }

    pub fn identity(structure: SpaceStructure) -> Self {
        Self {
            matrix: ComplexMatrix::identity(structure.total_dim()),
            structure,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn structure(&self) -> &SpaceStructure {
        &self.structure
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Same structure, new matrix.
    pub fn with_matrix(&self, matrix: ComplexMatrix) -> Result<Self> {
        Self::new(matrix, self.structure.clone())
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.structure != self.structure {
            return Err(Error::InvalidStructure(format!(
                "state on {:?} applied to operator on {:?}",
                state.structure.local_dims, self.structure.local_dims
            )));
        }
        StateVector::new(
            self.matrix.apply(&state.amplitudes)?,
            self.structure.clone(),
        )
    }

    /// Product operator `⊗_i ops[i]`, with the structure read off the factors.
    pub fn product(ops: &[ComplexMatrix]) -> Result<Self> {
        let (first, rest) = ops
            .split_first()
            .ok_or_else(|| Error::InvalidStructure("empty product".into()))?;
        let matrix = rest.iter().fold(first.clone(), |acc, op| kron(&acc, op));
        let structure = SpaceStructure::new(ops.iter().map(ComplexMatrix::dim).collect())?;
        Self::new(matrix, structure)
    }
}

/// A (not necessarily normalized) vector in the composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    structure: SpaceStructure,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>, structure: SpaceStructure) -> Result<Self> {
        if amplitudes.len() != structure.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: structure.total_dim(),
                found: amplitudes.len(),
            });
        }
        if let Some(col) = amplitudes
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { row: 0, col });
        }
        Ok(Self {
            amplitudes,
            structure,
        })
    }

    /// Single-site vector of dimension `amplitudes.len()`.
    pub fn local(amplitudes: Vec<Complex64>) -> Result<Self> {
        let structure = SpaceStructure::new(vec![amplitudes.len()])?;
        Self::new(amplitudes, structure)
    }

    /// Basis vector for the given per-site indices.
    pub fn basis(structure: SpaceStructure, indices: &[usize]) -> Result<Self> {
        if indices.len() != structure.sites() {
            return Err(Error::DimensionMismatch {
                expected: structure.sites(),
                found: indices.len(),
            });
        }
        for (site, (&n, &d)) in indices.iter().zip(structure.local_dims()).enumerate() {
            if n >= d {
                return Err(Error::Domain(format!(
                    "basis index {n} out of range for site {site} of dimension {d}"
                )));
            }
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); structure.total_dim()];
        amplitudes[structure.compose(indices)] = Complex64::new(1.0, 0.0);
        Self::new(amplitudes, structure)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn structure(&self) -> &SpaceStructure {
        &self.structure
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                found: other.amplitudes.len(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Reduced operator on `keep`: `(A_i)[n, n'] = Σ_m A[(n, m), (n', m)]`, summed over
/// the indices `m` of every other site.
pub fn partial_trace_keep(a: &OperatorOnSpace, keep: usize) -> Result<ComplexMatrix> {
    let structure = a.structure();
    structure.local_dim(keep)?;
    let (before, d, after) = structure.split_at(keep);
    let m = a.matrix();
    ComplexMatrix::from_fn(d, |row, col| {
        let mut acc = Complex64::new(0.0, 0.0);
        for outer in 0..before {
            for inner in 0..after {
                let r = (outer * d + row) * after + inner;
                let c = (outer * d + col) * after + inner;
                acc += m[(r, c)];
            }
        }
        acc
    })
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` at `site`.
pub fn embed_local(
    op: &ComplexMatrix,
    site: usize,
    structure: &SpaceStructure,
) -> Result<OperatorOnSpace> {
    let d = structure.local_dim(site)?;
    if op.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: op.dim(),
        });
    }
    let factors: Vec<ComplexMatrix> = structure
        .local_dims()
        .iter()
        .enumerate()
        .map(|(i, &di)| {
            if i == site {
                op.clone()
            } else {
                ComplexMatrix::identity(di)
            }
        })
        .collect();
    OperatorOnSpace::product(&factors)
}

/// Tensor product of the given vectors; the structure is the concatenation of
/// the factors' structures.
pub fn product_state(locals: &[StateVector]) -> Result<StateVector> {
    if locals.is_empty() {
        return Err(Error::InvalidStructure("empty product state".into()));
    }
    let dims: Vec<usize> = locals
        .iter()
        .flat_map(|v| v.structure.local_dims().iter().copied())
        .collect();
    let structure = SpaceStructure::new(dims)?;
    let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
    for v in locals {
        amplitudes = amplitudes
            .iter()
            .flat_map(|a| v.amplitudes.iter().map(move |b| a * b))
            .collect();
    }
    StateVector::new(amplitudes, structure)
}

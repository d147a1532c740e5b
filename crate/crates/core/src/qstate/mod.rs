//! Finite-dimensional multipartite quantum states.
//!
//! Subsystem labels are 1-based, matching the lattice layer. Subsystem 1 is
//! the slowest-varying tensor index, so the basis index of a product state
//! is `i_1·d_2·d_3·… + i_2·d_3·… + …`. Partial trace over the full label
//! set yields the 1×1 state `[1]` (the empty tensor product convention).

mod factories;
mod json;

pub use factories::{
    basis_product, bell, dicke, ghz, ghzw_mix, haar_random_pure, maximally_mixed, w_state, werner,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::lattice::{DownSetLabel, Partition, PartitionLattice};

pub const TAU_HERM: f64 = 1e-10;
pub const TAU_TR: f64 = 1e-10;
pub const TAU_PSD: f64 = 1e-9;
/// Default tolerance for the purity test `1 - tr(ρ²) < eps`.
pub const PURITY_EPS: f64 = 1e-9;
/// Cap on the total Hilbert-space dimension.
pub const DIM_CAP: usize = 4096;

/// Ordered local dimensions, one per elementary subsystem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimProfile {
    dims: Vec<usize>,
}

impl DimProfile {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.iter().any(|&d| d < 2) {
            return domain("every local dimension must be at least 2");
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .filter(|&t| t <= DIM_CAP)
                .ok_or_else(|| {
                    Error::Capability(format!("total dimension exceeds cap {DIM_CAP}"))
                })?;
        }
        Ok(DimProfile { dims })
    }

    pub fn qubits(n: usize) -> Result<Self> {
        DimProfile::new(vec![2; n])
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Profile of the listed labels, in the given order.
    pub fn sub_profile(&self, labels: &[usize]) -> Result<DimProfile> {
        let dims = labels
            .iter()
            .map(|&a| self.check_label(a).map(|_| self.dims[a - 1]))
            .collect::<Result<Vec<_>>>()?;
        // an empty label set yields the empty profile (total dimension 1)
        Ok(DimProfile { dims })
    }

    fn check_label(&self, a: usize) -> Result<()> {
        if a == 0 || a > self.dims.len() {
            return domain(format!("label {a} out of range 1..={}", self.dims.len()));
        }
        Ok(())
    }
}

/// A density operator, optionally carrying the pure-state vector it came
/// from. Immutable after construction; all invariants checked on entry.
#[derive(Clone, Debug)]
pub struct QuantumState {
    profile: DimProfile,
    matrix: DMatrix<Complex64>,
    vector: Option<DVector<Complex64>>,
}

impl QuantumState {
    /// Builds a pure state from an amplitude vector, normalizing is not
    /// done here: the vector must already be unit within 1e-10.
    pub fn from_vector(profile: DimProfile, vector: DVector<Complex64>) -> Result<Self> {
        let d = profile.total_dim();
        if vector.len() != d {
            return domain(format!("vector length {} != dimension {d}", vector.len()));
        }
        if (vector.norm() - 1.0).abs() > 1e-10 {
            return domain("state vector is not normalized");
        }
        let matrix = &vector * vector.adjoint();
        Ok(QuantumState {
            profile,
            matrix,
            vector: Some(vector),
        })
    }

    pub fn from_density(profile: DimProfile, matrix: DMatrix<Complex64>) -> Result<Self> {
        let d = profile.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return domain(format!(
                "matrix is {}x{}, expected {d}x{d}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        let herm_dev = (&matrix - matrix.adjoint()).camax();
        if herm_dev > TAU_HERM * 2.0 {
            return domain(format!("matrix not Hermitian (deviation {herm_dev:.2e})"));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TAU_TR || tr.im.abs() > TAU_TR {
            return domain(format!("trace {tr} is not 1"));
        }
        let matrix = hermitize(&matrix);
        let (eigs, _) = hermitian_eigen(&matrix);
        if let Some(bad) = eigs.iter().find(|&&x| x < -TAU_PSD) {
            return domain(format!("matrix has negative eigenvalue {bad:.2e}"));
        }
        Ok(QuantumState {
            profile,
            matrix,
            vector: None,
        })
    }

    pub fn profile(&self) -> &DimProfile {
        &self.profile
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn dim(&self) -> usize {
        self.profile.total_dim()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn vector(&self) -> Option<&DVector<Complex64>> {
        self.vector.as_ref()
    }

    /// `tr(ρ²)`, via the squared Frobenius norm of the Hermitian matrix.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_pure(&self, eps: f64) -> bool {
        self.vector.is_some() || 1.0 - self.purity() < eps
    }

    /// Extracts a unit vector from a (numerically) pure density matrix:
    /// the dominant eigenvector. Errors if the state is not pure.
    pub fn to_vector(&self, eps: f64) -> Result<DVector<Complex64>> {
        if let Some(v) = &self.vector {
            return Ok(v.clone());
        }
        if !self.is_pure(eps) {
            return domain("state is not pure");
        }
        let (eigs, vecs) = hermitian_eigen(&self.matrix);
        let top = (0..eigs.len())
            .max_by(|&i, &j| eigs[i].total_cmp(&eigs[j]))
            .unwrap();
        let v = vecs.column(top).into_owned();
        Ok(&v / Complex64::new(v.norm(), 0.0))
    }

    /// The spectrum of the density matrix, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        let (mut eigs, _) = hermitian_eigen(&self.matrix);
        eigs.sort_by(|a, b| b.total_cmp(a));
        eigs
    }

    /// Tensor composition; preserves the pure tag when both factors are
    /// pure-with-vector.
    pub fn tensor(&self, other: &QuantumState) -> Result<QuantumState> {
        let dims: Vec<usize> = self
            .profile
            .dims
            .iter()
            .chain(&other.profile.dims)
            .copied()
            .collect();
        let profile = DimProfile::new(dims)?;
        let matrix = self.matrix.kronecker(&other.matrix);
        let vector = match (&self.vector, &other.vector) {
            (Some(a), Some(b)) => Some(a.kronecker(b)),
            _ => None,
        };
        Ok(QuantumState {
            profile,
            matrix,
            vector,
        })
    }

    /// Traces out the subsystems in `traced`, returning the state over the
    /// remaining labels in ascending order. Tracing out everything gives
    /// the 1×1 state `[1]`.
    pub fn partial_trace(&self, traced: &[usize]) -> Result<QuantumState> {
        for &a in traced {
            self.profile.check_label(a)?;
        }
        let n = self.n();
        let is_traced: Vec<bool> = (1..=n).map(|a| traced.contains(&a)).collect();
        let kept: Vec<usize> = (1..=n).filter(|&a| !is_traced[a - 1]).collect();

        let kept_profile = self.profile.sub_profile(&kept)?;
        let dk = kept_profile.total_dim();
        let dt = self.dim() / dk;

        // strides of each subsystem in the full index (subsystem 1 slowest)
        let mut stride = vec![1usize; n];
        for a in (0..n.saturating_sub(1)).rev() {
            stride[a] = stride[a + 1] * self.profile.dims[a + 1];
        }
        // full index = Σ kept_digit·stride + Σ traced_digit·stride,
        // precomputed as offset tables over the two flattened sub-indices
        let offsets = |labels: &[usize]| -> Vec<usize> {
            let dims: Vec<usize> = labels.iter().map(|&a| self.profile.dims[a - 1]).collect();
            let total: usize = dims.iter().product();
            (0..total)
                .map(|mut flat| {
                    let mut off = 0;
                    for (j, &a) in labels.iter().enumerate().rev() {
                        off += (flat % dims[j]) * stride[a - 1];
                        flat /= dims[j];
                    }
                    off
                })
                .collect()
        };
        let traced_sorted: Vec<usize> = (1..=n).filter(|&a| is_traced[a - 1]).collect();
        let kept_off = offsets(&kept);
        let traced_off = offsets(&traced_sorted);
        debug_assert_eq!(traced_off.len(), dt);

        let mut out = DMatrix::<Complex64>::zeros(dk, dk);
        for i in 0..dk {
            for j in 0..dk {
                let mut s = Complex64::new(0.0, 0.0);
                for &t in &traced_off {
                    s += self.matrix[(kept_off[i] + t, kept_off[j] + t)];
                }
                out[(i, j)] = s;
            }
        }
        let out = hermitize(&out);
        Ok(QuantumState {
            profile: kept_profile,
            matrix: out,
            vector: None,
        })
    }

    /// Marginal on the labels in `kept` (traces out the complement).
    pub fn marginal(&self, kept: &[usize]) -> Result<QuantumState> {
        for &a in kept {
            self.profile.check_label(a)?;
        }
        let complement: Vec<usize> = (1..=self.n()).filter(|a| !kept.contains(a)).collect();
        self.partial_trace(&complement)
    }
}

/// Pure-state bipartite separability test: the marginal on `k` is pure.
pub fn pure_bipartite_separable(psi: &QuantumState, k: &[usize], eps: f64) -> Result<bool> {
    if !psi.is_pure(PURITY_EPS) {
        return domain("separability test requires a pure state");
    }
    Ok(psi.marginal(k)?.is_pure(eps))
}

/// Pure-state α-separability: every block's marginal is pure.
pub fn pure_alpha_separable(psi: &QuantumState, alpha: &Partition, eps: f64) -> Result<bool> {
    if alpha.n() != psi.n() {
        return domain("partition and state have different label counts");
    }
    for block in alpha.blocks() {
        if !pure_bipartite_separable(psi, block, eps)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pure-state ᾱ-separability: α-separable for some α in the down-set; it
/// suffices to test the maximal elements.
pub fn pure_downset_separable(
    psi: &QuantumState,
    vs_alpha: &DownSetLabel,
    lattice: &PartitionLattice,
    eps: f64,
) -> Result<bool> {
    for alpha in vs_alpha.max_elements(lattice) {
        if pure_alpha_separable(psi, &alpha, eps)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A pure-state decomposition: probabilities with pure members.
#[derive(Clone, Debug)]
pub struct Ensemble {
    entries: Vec<(f64, QuantumState)>,
}

impl Ensemble {
    pub fn new(entries: Vec<(f64, QuantumState)>) -> Result<Self> {
        if entries.is_empty() {
            return domain("empty ensemble");
        }
        let total: f64 = entries.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > 1e-10 {
            return domain(format!("ensemble probabilities sum to {total}, not 1"));
        }
        for (p, state) in &entries {
            if *p < 0.0 {
                return domain("negative ensemble probability");
            }
            if !state.is_pure(PURITY_EPS) {
                return domain("ensemble member is not pure");
            }
        }
        Ok(Ensemble { entries })
    }

    pub fn entries(&self) -> &[(f64, QuantumState)] {
        &self.entries
    }
}

/// Convex combination of the ensemble members.
pub fn mix(ensemble: &Ensemble) -> Result<QuantumState> {
    let profile = ensemble.entries[0].1.profile().clone();
    let d = profile.total_dim();
    let mut acc = DMatrix::<Complex64>::zeros(d, d);
    for (p, state) in &ensemble.entries {
        if state.profile() != &profile {
            return domain("ensemble members have mismatched profiles");
        }
        acc += state.matrix() * Complex64::new(*p, 0.0);
    }
    QuantumState::from_density(profile, acc)
}

/// Symmetrizes to (M + M†)/2 to suppress asymmetry noise.
pub(crate) fn hermitize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Hermitian eigendecomposition (eigenvalues real, unsorted).
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let se = hermitize(m).symmetric_eigen();
    (se.eigenvalues.iter().copied().collect(), se.eigenvectors)
}

//! Spectral entropies, the quantum Kullback-Leibler divergence, and the
//! α- and ᾱ-mutual information.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::lattice::{DownSetLabel, Partition, PartitionLattice};
use crate::qstate::{hermitian_eigen, QuantumState};

/// Logarithm base: natural log (nats) or base 2 (bits).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    E,
    Two,
}

impl LogBase {
    pub fn scale(&self) -> f64 {
        match self {
            LogBase::E => 1.0,
            LogBase::Two => 1.0 / std::f64::consts::LN_2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EntropyVariant {
    VonNeumann,
    Tsallis(f64),
    Renyi(f64),
    /// `C²(ρ) = 2(1 − tr ρ²)`, the qubit-normalized q=2 Tsallis entropy;
    /// dimensionless, so the log base does not apply.
    ConcurrenceSquared,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyKind {
    pub variant: EntropyVariant,
    pub log_base: LogBase,
}

impl EntropyKind {
    pub fn von_neumann() -> Self {
        EntropyKind {
            variant: EntropyVariant::VonNeumann,
            log_base: LogBase::E,
        }
    }

    pub fn tsallis(q: f64) -> Self {
        EntropyKind {
            variant: EntropyVariant::Tsallis(q),
            log_base: LogBase::E,
        }
    }

    pub fn renyi(q: f64) -> Self {
        EntropyKind {
            variant: EntropyVariant::Renyi(q),
            log_base: LogBase::E,
        }
    }

    pub fn concurrence_squared() -> Self {
        EntropyKind {
            variant: EntropyVariant::ConcurrenceSquared,
            log_base: LogBase::E,
        }
    }

    pub fn with_base(mut self, base: LogBase) -> Self {
        self.log_base = base;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.variant {
            EntropyVariant::Tsallis(q) | EntropyVariant::Renyi(q) if q <= 0.0 => {
                domain("Tsallis/Renyi entropy requires q > 0")
            }
            _ => Ok(()),
        }
    }
}

/// Eigenvalues of ρ with PSD noise removed: values in [−1e-9, 1e-12] are
/// set to zero; values below −1e-9 are a domain error.
pub(crate) fn clamped_spectrum(rho: &QuantumState) -> Result<Vec<f64>> {
    clamp_eigenvalues(rho.spectrum())
}

pub(crate) fn clamp_eigenvalues(eigs: Vec<f64>) -> Result<Vec<f64>> {
    eigs.into_iter()
        .map(|x| {
            if x < -1e-9 {
                domain(format!("eigenvalue {x:.2e} below PSD tolerance"))
            } else if x <= 1e-12 {
                Ok(0.0)
            } else {
                Ok(x)
            }
        })
        .collect()
}

/// Entropy of a state from its spectrum; `0·log 0 = 0` throughout.
pub fn entropy(kind: &EntropyKind, rho: &QuantumState) -> Result<f64> {
    kind.validate()?;
    let spectrum = clamped_spectrum(rho)?;
    entropy_of_spectrum(kind, &spectrum)
}

pub(crate) fn entropy_of_spectrum(kind: &EntropyKind, spectrum: &[f64]) -> Result<f64> {
    let scale = kind.log_base.scale();
    // q→1 limits of both families are the von Neumann entropy
    let von_neumann = || -> f64 {
        spectrum
            .iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| -x * x.ln())
            .sum::<f64>()
            * scale
    };
    let value = match kind.variant {
        EntropyVariant::VonNeumann => von_neumann(),
        EntropyVariant::Tsallis(q) if (q - 1.0).abs() < 1e-12 => von_neumann(),
        EntropyVariant::Renyi(q) if (q - 1.0).abs() < 1e-12 => von_neumann(),
        EntropyVariant::Tsallis(q) => {
            let s: f64 = spectrum.iter().map(|&x| x.powf(q)).sum();
            (s - 1.0) / (1.0 - q) * scale
        }
        EntropyVariant::Renyi(q) => {
            let s: f64 = spectrum.iter().map(|&x| x.powf(q)).sum();
            s.ln() / (1.0 - q) * scale
        }
        EntropyVariant::ConcurrenceSquared => {
            let p: f64 = spectrum.iter().map(|&x| x * x).sum();
            2.0 * (1.0 - p)
        }
    };
    Ok(value.max(0.0))
}

/// Binary entropy `h(x) = −x log x − (1−x) log(1−x)`.
pub fn binary_entropy(x: f64, base: LogBase) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return domain("binary entropy requires 0 <= x <= 1");
    }
    let term = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    Ok((term(x) + term(1.0 - x)) * base.scale())
}

/// Umegaki relative entropy `D(ρ‖ω) = tr ρ(ln ρ − ln ω)` in nats;
/// `+infinity` when the support of ρ is not contained in that of ω.
pub fn kl_divergence(rho: &QuantumState, omega: &QuantumState) -> Result<f64> {
    if rho.profile() != omega.profile() {
        return domain("kl_divergence requires matching profiles");
    }
    let spectrum = clamped_spectrum(rho)?;
    let tr_rho_ln_rho: f64 = spectrum
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum();

    let (omega_eigs, omega_vecs) = hermitian_eigen(omega.matrix());
    let omega_eigs = clamp_eigenvalues(omega_eigs)?;
    let mut tr_rho_ln_omega = 0.0;
    for (j, &mu) in omega_eigs.iter().enumerate() {
        let v = omega_vecs.column(j);
        let weight = (v.adjoint() * rho.matrix() * v)[(0, 0)].re.max(0.0);
        if mu == 0.0 {
            if weight > 1e-10 {
                return Ok(f64::INFINITY);
            }
        } else {
            tr_rho_ln_omega += weight * mu.ln();
        }
    }
    Ok((tr_rho_ln_rho - tr_rho_ln_omega).max(0.0))
}

/// α-mutual information `I_α(ρ) = Σ_K S(ρ_K) − S(ρ)` in nats.
pub fn alpha_mutual_info(rho: &QuantumState, alpha: &Partition) -> Result<f64> {
    if alpha.n() != rho.n() {
        return domain("partition and state have different label counts");
    }
    let vn = EntropyKind::von_neumann();
    let mut total = -entropy(&vn, rho)?;
    for block in alpha.blocks() {
        total += entropy(&vn, &rho.marginal(block)?)?;
    }
    Ok(total.max(0.0))
}

/// ᾱ-mutual information: the minimum of `I_α` over the down-set, which by
/// monotonicity is attained on the maximal elements.
pub fn downset_mutual_info(
    rho: &QuantumState,
    vs_alpha: &DownSetLabel,
    lattice: &PartitionLattice,
) -> Result<f64> {
    let mut best = f64::INFINITY;
    for alpha in vs_alpha.max_elements(lattice) {
        best = best.min(alpha_mutual_info(rho, &alpha)?);
    }
    Ok(best)
}

/// Tensor product of the marginals of ρ on the blocks of α.
pub fn marginal_product(rho: &QuantumState, alpha: &Partition) -> Result<QuantumState> {
    // blocks are canonically ordered by minimum but may interleave labels;
    // build the product in block order, then permute back
    let mut order = Vec::new();
    for block in alpha.blocks() {
        order.extend_from_slice(block);
    }
    let mut product: Option<QuantumState> = None;
    for block in alpha.blocks() {
        let marginal = rho.marginal(block)?;
        product = Some(match product {
            None => marginal,
            Some(p) => p.tensor(&marginal)?,
        });
    }
    let product = product.expect("partition has at least one block");
    if order.windows(2).all(|w| w[0] < w[1]) {
        return Ok(product);
    }
    permute_subsystems(&product, &order, rho)
}

/// Reorders a state whose subsystems are currently labeled by `order`
/// (order[i] = original label of slot i+1) back to ascending label order.
fn permute_subsystems(
    state: &QuantumState,
    order: &[usize],
    template: &QuantumState,
) -> Result<QuantumState> {
    let n = order.len();
    let dims = template.profile().dims();
    let d = state.dim();
    // slot position of each original label in the current state
    let mut slot_of = vec![0usize; n + 1];
    for (slot, &label) in order.iter().enumerate() {
        slot_of[label] = slot;
    }
    let slot_dims: Vec<usize> = order.iter().map(|&a| dims[a - 1]).collect();
    // map a full row index of the target (ascending labels) to the state's
    let to_source = |mut idx: usize| -> usize {
        let mut digits = vec![0usize; n];
        for a in (1..=n).rev() {
            digits[slot_of[a]] = idx % dims[a - 1];
            idx /= dims[a - 1];
        }
        digits
            .iter()
            .zip(&slot_dims)
            .fold(0usize, |acc, (&dig, &dim)| acc * dim + dig)
    };
    let src: Vec<usize> = (0..d).map(to_source).collect();
    let m = DMatrix::<Complex64>::from_fn(d, d, |i, j| state.matrix()[(src[i], src[j])]);
    QuantumState::from_density(template.profile().clone(), m)
}

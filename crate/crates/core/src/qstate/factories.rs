//! Standard state constructors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{domain, Result};

use super::{DimProfile, Ensemble, QuantumState};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// |GHZ⟩ = (|0…0⟩ + … + |d−1…d−1⟩)/√d on n d-level systems.
pub fn ghz(n: usize, d: usize) -> Result<QuantumState> {
    if n < 2 {
        return domain("ghz requires n >= 2");
    }
    let profile = DimProfile::new(vec![d; n])?;
    let total = profile.total_dim();
    let mut v = DVector::<Complex64>::zeros(total);
    // |k k … k⟩ has index k·(d^{n-1} + … + d + 1)
    let step = (total - 1) / (d - 1);
    let amp = c(1.0 / (d as f64).sqrt());
    for k in 0..d {
        v[k * step] = amp;
    }
    QuantumState::from_vector(profile, v)
}

/// |W⟩ = (|10…0⟩ + |01…0⟩ + … + |0…01⟩)/√n on n qubits.
pub fn w_state(n: usize) -> Result<QuantumState> {
    dicke(n, 1)
}

/// Dicke state: equal superposition of all n-qubit basis states with
/// exactly k ones.
pub fn dicke(n: usize, k: usize) -> Result<QuantumState> {
    if n < 2 || k == 0 || k >= n {
        return domain("dicke requires n >= 2 and 0 < k < n");
    }
    let profile = DimProfile::qubits(n)?;
    let total = profile.total_dim();
    let indices: Vec<usize> = (0..total)
        .filter(|i| i.count_ones() as usize == k)
        .collect();
    let amp = c(1.0 / (indices.len() as f64).sqrt());
    let mut v = DVector::<Complex64>::zeros(total);
    for i in indices {
        v[i] = amp;
    }
    QuantumState::from_vector(profile, v)
}

/// |Φ⁺⟩ = (|00⟩ + |11⟩)/√2.
pub fn bell() -> Result<QuantumState> {
    ghz(2, 2)
}

/// Computational basis product state |i_1 i_2 … i_n⟩; indices 0-based.
pub fn basis_product(profile: &DimProfile, indices: &[usize]) -> Result<QuantumState> {
    if indices.len() != profile.n() {
        return domain("index count does not match profile");
    }
    let mut flat = 0usize;
    for (i, (&idx, &d)) in indices.iter().zip(profile.dims()).enumerate() {
        if idx >= d {
            return domain(format!("basis index {idx} out of range for subsystem {}", i + 1));
        }
        flat = flat * d + idx;
    }
    let mut v = DVector::<Complex64>::zeros(profile.total_dim());
    v[flat] = c(1.0);
    QuantumState::from_vector(profile.clone(), v)
}

/// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
pub fn haar_random_pure(profile: &DimProfile, seed: u64) -> Result<QuantumState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_random_pure_with(profile, &mut rng)
}

pub fn haar_random_pure_with(
    profile: &DimProfile,
    rng: &mut impl rand::Rng,
) -> Result<QuantumState> {
    let d = profile.total_dim();
    let mut v = DVector::<Complex64>::zeros(d);
    for i in 0..d {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        v[i] = Complex64::new(re, im);
    }
    let norm = v.norm();
    QuantumState::from_vector(profile.clone(), v / c(norm))
}

/// I/D on the given profile.
pub fn maximally_mixed(profile: &DimProfile) -> Result<QuantumState> {
    let d = profile.total_dim();
    let m = DMatrix::<Complex64>::identity(d, d) * c(1.0 / d as f64);
    QuantumState::from_density(profile.clone(), m)
}

/// Two-qubit Werner family p|Φ⁺⟩⟨Φ⁺| + (1−p)I/4.
pub fn werner(p: f64) -> Result<QuantumState> {
    if !(0.0..=1.0).contains(&p) {
        return domain("werner requires 0 <= p <= 1");
    }
    let bell = bell()?;
    let profile = bell.profile().clone();
    let m = bell.matrix() * c(p)
        + DMatrix::<Complex64>::identity(4, 4) * c((1.0 - p) / 4.0);
    QuantumState::from_density(profile, m)
}

/// Noisy GHZ-W mixture p|GHZ⟩⟨GHZ| + (1−p)|W⟩⟨W| on three qubits.
pub fn ghzw_mix(p: f64) -> Result<QuantumState> {
    if !(0.0..=1.0).contains(&p) {
        return domain("ghzw-mix requires 0 <= p <= 1");
    }
    let ensemble = Ensemble::new(vec![(p, ghz(3, 2)?), (1.0 - p, w_state(3)?)])?;
    super::mix(&ensemble)
}

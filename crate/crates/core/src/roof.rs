//! Convex roof extension of pure-state measures to mixed states.
//!
//! Decompositions of ρ with rank r into m pure members are parametrized by
//! m×r isometries V (Schrödinger mixture theorem): the unnormalized members
//! are |ψ̃_i⟩ = Σ_k V_ik √λ_k |k⟩ with p_i = ⟨ψ̃_i|ψ̃_i⟩. The average
//! Σ p_i f(ψ̃_i/√p_i) is minimized by projected gradient descent with a QR
//! retraction back onto the isometries. The optimizer yields an upper bound
//! on the true roof; a vanishing optimum plus per-member separability is a
//! constructive certificate, a positive optimum proves nothing.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::entropy::{binary_entropy, clamp_eigenvalues, LogBase};
use crate::error::{domain, Error, Result};
use crate::lattice::{DownSetLabel, PartitionLattice};
use crate::measures::{downset_entanglement, PureMeasureSpec};
use crate::qstate::{
    hermitian_eigen, mix, pure_downset_separable, Ensemble, QuantumState,
};

/// Eigenvalues below this do not count toward the numerical rank.
const RANK_TOL: f64 = 1e-10;
/// Members with smaller probability are dropped from the final ensemble.
const MEMBER_TOL: f64 = 1e-12;
/// Objectives this small cannot improve meaningfully (f >= 0); the
/// optimizer and the restart loop stop here.
const EARLY_STOP: f64 = 1e-9;
/// Finite-difference step for the numeric gradient.
const FD_STEP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnsembleSize {
    /// m = r², the Uhlmann bound.
    Auto,
    Fixed(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoofConfig {
    pub ensemble_size: EnsembleSize,
    pub restarts: usize,
    pub max_iterations: usize,
    pub gradient_step: f64,
    pub convergence_tol: f64,
    pub seed: u64,
}

impl Default for RoofConfig {
    fn default() -> Self {
        RoofConfig {
            ensemble_size: EnsembleSize::Auto,
            restarts: 16,
            max_iterations: 2000,
            gradient_step: 1e-2,
            convergence_tol: 1e-7,
            seed: 0,
        }
    }
}

impl RoofConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be >= 1".into()));
        }
        if self.gradient_step <= 0.0 || self.convergence_tol <= 0.0 {
            return Err(Error::Config(
                "gradientStep and convergenceTol must be positive".into(),
            ));
        }
        if let EnsembleSize::Fixed(m) = self.ensemble_size {
            if m == 0 {
                return Err(Error::Config("ensembleSize must be >= 1".into()));
            }
        }
        Ok(())
    }
}

mod config_serde {
    use super::{EnsembleSize, RoofConfig};
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(rename_all = "camelCase")]
    struct Wire {
        ensemble_size: serde_json::Value,
        restarts: usize,
        max_iterations: usize,
        gradient_step: f64,
        convergence_tol: f64,
        seed: u64,
    }

    impl Serialize for RoofConfig {
        fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
            let ensemble_size = match self.ensemble_size {
                EnsembleSize::Auto => serde_json::json!("auto"),
                EnsembleSize::Fixed(m) => serde_json::json!(m),
            };
            Wire {
                ensemble_size,
                restarts: self.restarts,
                max_iterations: self.max_iterations,
                gradient_step: self.gradient_step,
                convergence_tol: self.convergence_tol,
                seed: self.seed,
            }
            .serialize(serializer)
        }
    }

    impl<'de> Deserialize<'de> for RoofConfig {
        fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
            let wire = Wire::deserialize(deserializer)?;
            let ensemble_size = match &wire.ensemble_size {
                serde_json::Value::String(s) if s == "auto" => EnsembleSize::Auto,
                serde_json::Value::Number(n) => {
                    let m = n
                        .as_u64()
                        .ok_or_else(|| D::Error::custom("ensembleSize must be a positive integer"))?;
                    EnsembleSize::Fixed(m as usize)
                }
                _ => return Err(D::Error::custom("ensembleSize must be \"auto\" or an integer")),
            };
            Ok(RoofConfig {
                ensemble_size,
                restarts: wire.restarts,
                max_iterations: wire.max_iterations,
                gradient_step: wire.gradient_step,
                convergence_tol: wire.convergence_tol,
                seed: wire.seed,
            })
        }
    }
}

#[derive(Clone, Debug)]
pub struct RoofResult {
    pub value: f64,
    pub ensemble: Ensemble,
    pub iterations: usize,
    pub converged: bool,
    /// Best objective of each executed restart, in restart order.
    pub restart_values: Vec<f64>,
}

impl RoofResult {
    pub fn to_json(&self) -> String {
        let ensemble: Vec<serde_json::Value> = self
            .ensemble
            .entries()
            .iter()
            .map(|(p, state)| {
                serde_json::json!({
                    "p": p,
                    "state": serde_json::from_str::<serde_json::Value>(&state.to_json())
                        .expect("state JSON is valid"),
                })
            })
            .collect();
        serde_json::to_string(&serde_json::json!({
            "value": self.value,
            "converged": self.converged,
            "iterations": self.iterations,
            "restartValues": self.restart_values,
            "ensemble": ensemble,
        }))
        .expect("roof result serialization cannot fail")
    }
}

/// Shared per-state optimization context.
struct RoofProblem<'a> {
    f: &'a (dyn Fn(&QuantumState) -> Result<f64> + Sync),
    /// d×r matrix whose k-th column is √λ_k |k⟩.
    basis: DMatrix<Complex64>,
    profile: crate::qstate::DimProfile,
    m: usize,
    r: usize,
}

impl RoofProblem<'_> {
    /// Unnormalized members as columns of a d×m matrix.
    fn members(&self, v: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        &self.basis * v.transpose()
    }

    fn objective(&self, v: &DMatrix<Complex64>) -> Result<f64> {
        let psi = self.members(v);
        let mut total = 0.0;
        for i in 0..self.m {
            let col = psi.column(i);
            let p = col.norm_squared();
            if p < MEMBER_TOL {
                continue;
            }
            let unit = col.into_owned() / Complex64::new(p.sqrt(), 0.0);
            let state = QuantumState::from_vector(self.profile.clone(), unit)?;
            total += p * (self.f)(&state)?;
        }
        Ok(total)
    }

    /// Objective after retracting a (possibly non-isometric) parameter.
    fn objective_at(&self, v: &DMatrix<Complex64>) -> Result<f64> {
        self.objective(&qr_retract(v))
    }

    fn gradient(&self, v: &DMatrix<Complex64>) -> Result<Vec<f64>> {
        let params = 2 * self.m * self.r;
        (0..params)
            .into_par_iter()
            .map(|j| {
                let idx = j / 2;
                let (row, col) = (idx % self.m, idx / self.m);
                let delta = if j % 2 == 0 {
                    Complex64::new(FD_STEP, 0.0)
                } else {
                    Complex64::new(0.0, FD_STEP)
                };
                let mut plus = v.clone();
                plus[(row, col)] += delta;
                let mut minus = v.clone();
                minus[(row, col)] -= delta;
                Ok((self.objective_at(&plus)? - self.objective_at(&minus)?) / (2.0 * FD_STEP))
            })
            .collect()
    }

    /// One restart: projected gradient descent with backtracking line
    /// search. Returns (best objective, V, iterations used, converged).
    fn optimize(
        &self,
        mut v: DMatrix<Complex64>,
        config: &RoofConfig,
    ) -> Result<(f64, DMatrix<Complex64>, usize, bool)> {
        let mut value = self.objective(&v)?;
        let mut step = config.gradient_step;
        let mut converged = false;
        let mut iterations = 0;
        for _ in 0..config.max_iterations {
            if value < EARLY_STOP {
                converged = true;
                break;
            }
            iterations += 1;
            let grad = self.gradient(&v)?;
            let grad_norm: f64 = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if grad_norm < 1e-12 {
                converged = true;
                break;
            }
            let mut direction = DMatrix::<Complex64>::zeros(self.m, self.r);
            for (j, g) in grad.iter().enumerate() {
                let idx = j / 2;
                let (row, col) = (idx % self.m, idx / self.m);
                direction[(row, col)] -= if j % 2 == 0 {
                    Complex64::new(*g, 0.0)
                } else {
                    Complex64::new(0.0, *g)
                };
            }
            // backtracking line search with Armijo decrease
            let mut improved = false;
            for _ in 0..40 {
                let candidate = qr_retract(&(&v + &direction * Complex64::new(step, 0.0)));
                let cand_value = self.objective(&candidate)?;
                if cand_value <= value - 1e-4 * step * grad_norm * grad_norm {
                    let decrease = value - cand_value;
                    v = candidate;
                    value = cand_value;
                    step = (step * 1.5).min(1.0);
                    improved = true;
                    if decrease < config.convergence_tol {
                        converged = true;
                    }
                    break;
                }
                step *= 0.5;
                if step < 1e-14 {
                    break;
                }
            }
            if !improved || converged {
                converged = true;
                break;
            }
        }
        Ok((value, v, iterations, converged))
    }
}

/// Thin QR retraction onto the isometry manifold, with the diagonal of R
/// made real positive so an isometry retracts to itself.
fn qr_retract(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let qr = a.clone().qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..q.ncols() {
        let d = r[(j, j)];
        if d.norm() > 1e-300 {
            let phase = d / Complex64::new(d.norm(), 0.0);
            for i in 0..q.nrows() {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

fn haar_isometry(m: usize, r: usize, rng: &mut impl rand::Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(m, r, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    qr_retract(&g)
}

/// Minimizes the ensemble average of `f` over decompositions of `rho`.
pub fn convex_roof(
    f: &(dyn Fn(&QuantumState) -> Result<f64> + Sync),
    rho: &QuantumState,
    config: &RoofConfig,
) -> Result<RoofResult> {
    convex_roof_seeded(f, rho, config, &[])
}

/// As `convex_roof`, with explicit decompositions of `rho` prepended to the
/// restart seeds (ahead of the eigendecomposition and the random draws).
pub fn convex_roof_seeded(
    f: &(dyn Fn(&QuantumState) -> Result<f64> + Sync),
    rho: &QuantumState,
    config: &RoofConfig,
    planted: &[Ensemble],
) -> Result<RoofResult> {
    config.validate()?;
    let (eigs, vecs) = hermitian_eigen(rho.matrix());
    let eigs = clamp_eigenvalues(eigs)?;
    let mut order: Vec<usize> = (0..eigs.len()).collect();
    order.sort_by(|&i, &j| eigs[j].total_cmp(&eigs[i]));
    let kept: Vec<usize> = order.into_iter().filter(|&i| eigs[i] > RANK_TOL).collect();
    let r = kept.len();
    if r == 0 {
        return domain("state has numerical rank 0");
    }
    let m = match config.ensemble_size {
        EnsembleSize::Auto => r * r,
        EnsembleSize::Fixed(m) if m < r => {
            return Err(Error::Config(format!(
                "ensembleSize {m} below the state rank {r}"
            )))
        }
        EnsembleSize::Fixed(m) => m,
    };
    let d = rho.dim();
    let mut basis = DMatrix::<Complex64>::zeros(d, r);
    for (k, &i) in kept.iter().enumerate() {
        let scale = Complex64::new(eigs[i].sqrt(), 0.0);
        basis.set_column(k, &(vecs.column(i) * scale));
    }
    let problem = RoofProblem {
        f,
        basis,
        profile: rho.profile().clone(),
        m,
        r,
    };

    // restart seeds: planted ensembles, eigendecomposition, Haar draws
    let mut seeds: Vec<DMatrix<Complex64>> = Vec::new();
    for ensemble in planted {
        seeds.push(isometry_from_ensemble(&problem, rho, ensemble)?);
    }
    let mut identity = DMatrix::<Complex64>::zeros(m, r);
    for k in 0..r {
        identity[(k, k)] = Complex64::new(1.0, 0.0);
    }
    seeds.push(identity);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    while seeds.len() < planted.len() + config.restarts {
        seeds.push(haar_isometry(m, r, &mut rng));
    }

    let mut best: Option<(f64, DMatrix<Complex64>, usize, bool)> = None;
    let mut restart_values = Vec::new();
    let mut total_iterations = 0;
    for seed in &seeds {
        let (value, v, iterations, converged) = problem.optimize(seed.clone(), config)?;
        restart_values.push(value);
        total_iterations += iterations;
        let better = match &best {
            None => true,
            Some((bv, ..)) => value < *bv,
        };
        if better {
            best = Some((value, v, iterations, converged));
        }
        if value < EARLY_STOP {
            break;
        }
    }
    let (value, v, _, converged) = best.expect("at least one restart ran");
    let ensemble = ensemble_from_isometry(&problem, &v)?;
    // sanity: the decomposition must reconstruct the input
    let rebuilt = mix(&ensemble)?;
    let dev = (rebuilt.matrix() - rho.matrix()).camax();
    if dev > 1e-7 {
        return domain(format!("decomposition drifted from the input ({dev:.2e})"));
    }
    Ok(RoofResult {
        value,
        ensemble,
        iterations: total_iterations,
        converged,
        restart_values,
    })
}

fn ensemble_from_isometry(problem: &RoofProblem, v: &DMatrix<Complex64>) -> Result<Ensemble> {
    let psi = problem.members(v);
    let mut entries = Vec::new();
    let mut total = 0.0;
    for i in 0..problem.m {
        let col = psi.column(i);
        let p = col.norm_squared();
        if p < MEMBER_TOL {
            continue;
        }
        let unit = col.into_owned() / Complex64::new(p.sqrt(), 0.0);
        entries.push((p, QuantumState::from_vector(problem.profile.clone(), unit)?));
        total += p;
    }
    // renormalize after dropping negligible members
    for (p, _) in &mut entries {
        *p /= total;
    }
    Ensemble::new(entries)
}

/// Inverts the mixture parametrization: V_ik = ⟨ψ̃_k-basis | √p_i ψ_i⟩/λ-scaled.
fn isometry_from_ensemble(
    problem: &RoofProblem,
    rho: &QuantumState,
    ensemble: &Ensemble,
) -> Result<DMatrix<Complex64>> {
    let entries = ensemble.entries();
    if entries.len() > problem.m {
        return Err(Error::Config(format!(
            "planted ensemble has {} members, exceeding ensembleSize {}",
            entries.len(),
            problem.m
        )));
    }
    let rebuilt = mix(ensemble)?;
    if (rebuilt.matrix() - rho.matrix()).camax() > 1e-8 {
        return domain("planted ensemble does not decompose the given state");
    }
    // basis column k is √λ_k |k⟩; ⟨k|ψ̃_i⟩ = √λ_k V_ik
    let mut v = DMatrix::<Complex64>::zeros(problem.m, problem.r);
    for (i, (p, state)) in entries.iter().enumerate() {
        let psi_t = state.to_vector(1e-6)? * Complex64::new(p.sqrt(), 0.0);
        for k in 0..problem.r {
            let col = problem.basis.column(k);
            let lam = col.norm_squared();
            v[(i, k)] = (col.adjoint() * &psi_t)[(0, 0)] / Complex64::new(lam, 0.0);
        }
    }
    Ok(qr_retract(&v))
}

/// Two-qubit concurrence `C = max(0, μ1−μ2−μ3−μ4)` with μ_i the decreasing
/// square roots of the eigenvalues of ρρ̃, ρ̃ = (σy⊗σy)ρ*(σy⊗σy).
pub fn wootters_concurrence(rho: &QuantumState) -> Result<f64> {
    if rho.profile().dims() != [2, 2] {
        return domain("Wootters formula applies to two qubits only");
    }
    let m = rho.matrix();
    let yy = {
        let mut yy = DMatrix::<Complex64>::zeros(4, 4);
        // σy⊗σy = antidiag(-1, 1, 1, -1)
        yy[(0, 3)] = Complex64::new(-1.0, 0.0);
        yy[(1, 2)] = Complex64::new(1.0, 0.0);
        yy[(2, 1)] = Complex64::new(1.0, 0.0);
        yy[(3, 0)] = Complex64::new(-1.0, 0.0);
        yy
    };
    let rho_tilde = &yy * m.map(|z| z.conj()) * &yy;
    // eigenvalues of ρρ̃ equal those of the Hermitian √ρ ρ̃ √ρ
    let (eigs, vecs) = hermitian_eigen(m);
    let eigs = clamp_eigenvalues(eigs)?;
    let sqrt_rho = {
        let mut s = DMatrix::<Complex64>::zeros(4, 4);
        for (k, &lam) in eigs.iter().enumerate() {
            let col = vecs.column(k);
            s += col * col.adjoint() * Complex64::new(lam.sqrt(), 0.0);
        }
        s
    };
    let herm = &sqrt_rho * rho_tilde * &sqrt_rho;
    let (mut mus, _) = hermitian_eigen(&herm);
    let mut mus: Vec<f64> = clamp_eigenvalues(std::mem::take(&mut mus))?
        .into_iter()
        .map(f64::sqrt)
        .collect();
    mus.sort_by(|a, b| b.total_cmp(a));
    Ok((mus[0] - mus[1] - mus[2] - mus[3]).max(0.0))
}

/// Closed-form two-qubit entanglement of formation.
pub fn wootters_eof(rho: &QuantumState, base: LogBase) -> Result<f64> {
    let c = wootters_concurrence(rho)?;
    binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0, base)
}

/// ᾱ-entanglement of formation: convex roof of the ᾱ-entanglement.
pub fn eof_downset(
    rho: &QuantumState,
    vs_alpha: &DownSetLabel,
    lattice: &PartitionLattice,
    spec: &PureMeasureSpec,
    config: &RoofConfig,
) -> Result<RoofResult> {
    spec.validate()?;
    let f = |psi: &QuantumState| downset_entanglement(psi, vs_alpha, lattice, spec);
    convex_roof(&f, rho, config)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixedVerdict {
    /// A decomposition with vanishing average was found and every member
    /// is individually ᾱ-separable: membership in D_ᾱ is certified.
    MemberCertified,
    /// No certificate found. Never interpreted as proof of entanglement.
    NotDecided,
}

#[derive(Clone, Debug)]
pub struct IndicatorOutcome {
    pub verdict: MixedVerdict,
    pub roof: RoofResult,
}

/// Default certification threshold on the roof objective.
pub const INDICATOR_THRESHOLD: f64 = 1e-6;
/// Purity tolerance for re-validating certificate members, tighter than
/// the optimizer tolerance.
pub const CERTIFICATE_EPS: f64 = 1e-6;

/// One-sided mixed-state ᾱ-separability test.
pub fn mixed_indicator(
    rho: &QuantumState,
    vs_alpha: &DownSetLabel,
    lattice: &PartitionLattice,
    spec: &PureMeasureSpec,
    config: &RoofConfig,
    threshold: f64,
) -> Result<IndicatorOutcome> {
    mixed_indicator_seeded(rho, vs_alpha, lattice, spec, config, threshold, &[])
}

pub fn mixed_indicator_seeded(
    rho: &QuantumState,
    vs_alpha: &DownSetLabel,
    lattice: &PartitionLattice,
    spec: &PureMeasureSpec,
    config: &RoofConfig,
    threshold: f64,
    planted: &[Ensemble],
) -> Result<IndicatorOutcome> {
    if threshold <= 0.0 {
        return Err(Error::Config("indicator threshold must be positive".into()));
    }
    let f = |psi: &QuantumState| downset_entanglement(psi, vs_alpha, lattice, spec);
    let roof = convex_roof_seeded(&f, rho, config, planted)?;
    let mut verdict = MixedVerdict::NotDecided;
    if roof.value < threshold {
        let all_separable = roof
            .ensemble
            .entries()
            .iter()
            .map(|(_, state)| pure_downset_separable(state, vs_alpha, lattice, CERTIFICATE_EPS))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|ok| ok);
        if all_separable {
            verdict = MixedVerdict::MemberCertified;
        }
    }
    Ok(IndicatorOutcome { verdict, roof })
}

//! Pure-state entanglement measures: subsystem functions f_K, Level-I
//! measures over partitions, Level-II measures over down-set labels, and
//! monotonicity-chain verification.

use serde::{Deserialize, Serialize};

use crate::entropy::{entropy, EntropyKind, EntropyVariant};
use crate::error::{domain, Result};
use crate::lattice::{
    format_downset, format_partition, DownSetLabel, Partition, PartitionLattice,
};
use crate::means::{evaluate, ExtReal, MeanSpec, QuasiMap};
use crate::qstate::{QuantumState, PURITY_EPS};

/// How the per-block values f_K combine into a Level-I measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LevelICombiner {
    /// `½ Σ_K f_K`, the α-entanglement entropy. Default.
    HalfSum,
    /// Plain sum; equals the α-mutual information for entropic f_K.
    Sum,
    /// q-sum with 0 < q <= 1.
    QSum(f64),
    /// q-mean with 0 < q <= 1.
    QMean(f64),
    /// `Π_K f_K`. Not an entanglement monotone; exposed for experiments
    /// only and excluded from monotonicity guarantees.
    NonMonotoneProduct,
}

/// How the per-partition values E_α combine into a Level-II measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LevelIICombiner {
    /// `min_{α∈ᾱ} E_α`, evaluated on the maximal antichain. Default.
    Min,
    /// q-mean with q <= 0, over the full down-set.
    QMean(f64),
    /// q-sum with q < 0, over the full down-set.
    QSum(f64),
    /// Quasi-arithmetic mean under ln∘g, over the full down-set.
    MagicG,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureMeasureSpec {
    pub base: EntropyKind,
    pub level_i: LevelICombiner,
    pub level_ii: LevelIICombiner,
}

impl Default for PureMeasureSpec {
    fn default() -> Self {
        PureMeasureSpec {
            base: EntropyKind::von_neumann(),
            level_i: LevelICombiner::HalfSum,
            level_ii: LevelIICombiner::Min,
        }
    }
}

impl PureMeasureSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        // Rényi entropies are concave only for q < 1 and not subadditive;
        // the subsystem function admits them only on that range
        if let EntropyVariant::Renyi(q) = self.base.variant {
            if q >= 1.0 {
                return domain("Renyi base requires 0 < q < 1 for f_K");
            }
        }
        match self.level_i {
            LevelICombiner::QSum(q) | LevelICombiner::QMean(q) => {
                if !(q > 0.0 && q <= 1.0) {
                    return domain("Level-I q-sum/q-mean requires 0 < q <= 1");
                }
            }
            _ => {}
        }
        match self.level_ii {
            LevelIICombiner::QMean(q) => {
                if q > 0.0 {
                    return domain("Level-II q-mean requires q <= 0");
                }
            }
            LevelIICombiner::QSum(q) => {
                if q >= 0.0 {
                    return domain("Level-II q-sum requires q < 0");
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Per-label values with covering-pair ordering verdicts.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MeasureReport {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
    pub chain: Vec<ChainVerdict>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct ChainVerdict {
    pub lower: usize,
    pub upper: usize,
    pub ok: bool,
}

impl MeasureReport {
    pub fn all_ok(&self) -> bool {
        self.chain.iter().all(|v| v.ok)
    }
}

const CHAIN_SLACK: f64 = 1e-9;

/// Subsystem function `f_K(π) = F(tr_K̄ π)`.
pub fn f_k(psi: &QuantumState, k: &[usize], base: &EntropyKind) -> Result<f64> {
    base.validate()?;
    if let EntropyVariant::Renyi(q) = base.variant {
        if q >= 1.0 {
            return domain("Renyi base requires 0 < q < 1 for f_K");
        }
    }
    if !psi.is_pure(PURITY_EPS) {
        return domain("f_K is defined on pure states");
    }
    entropy(base, &psi.marginal(k)?)
}

/// Level-I measure: the spec's combiner over the blocks of α.
pub fn alpha_entanglement(
    psi: &QuantumState,
    alpha: &Partition,
    spec: &PureMeasureSpec,
) -> Result<f64> {
    spec.validate()?;
    if alpha.n() != psi.n() {
        return domain("partition and state have different label counts");
    }
    let values: Vec<f64> = alpha
        .blocks()
        .iter()
        .map(|block| f_k(psi, block, &spec.base))
        .collect::<Result<_>>()?;
    let combined = match spec.level_i {
        LevelICombiner::HalfSum => 0.5 * values.iter().sum::<f64>(),
        LevelICombiner::Sum => values.iter().sum(),
        LevelICombiner::QSum(q) => evaluate(&MeanSpec::QSum(ExtReal::Finite(q)), &values)?,
        LevelICombiner::QMean(q) => evaluate(&MeanSpec::QMean(ExtReal::Finite(q)), &values)?,
        LevelICombiner::NonMonotoneProduct => values.iter().product(),
    };
    Ok(combined)
}

/// Level-II measure: the spec's combiner over the down-set. The min
/// combiner is evaluated on the maximal antichain (the minimum is attained
/// there); every other combiner sees the full down-set.
pub fn downset_entanglement(
    psi: &QuantumState,
    vs_alpha: &DownSetLabel,
    lattice: &PartitionLattice,
    spec: &PureMeasureSpec,
) -> Result<f64> {
    spec.validate()?;
    // eigensolver noise of order 1e-16 in a vanishing E_α would defeat the
    // zero-propagation conventions of the q<0 and quasi combiners, so snap
    // values below the spectral noise floor to exact zero
    let over = |parts: Vec<Partition>| -> Result<Vec<f64>> {
        parts
            .iter()
            .map(|alpha| {
                alpha_entanglement(psi, alpha, spec)
                    .map(|v| if v < 1e-12 { 0.0 } else { v })
            })
            .collect()
    };
    match spec.level_ii {
        LevelIICombiner::Min => {
            let values = over(vs_alpha.max_elements(lattice))?;
            Ok(values.into_iter().fold(f64::INFINITY, f64::min))
        }
        LevelIICombiner::QMean(q) => {
            let values = over(vs_alpha.members(lattice))?;
            evaluate(&MeanSpec::QMean(ExtReal::from_float(q)), &values)
        }
        LevelIICombiner::QSum(q) => {
            let values = over(vs_alpha.members(lattice))?;
            evaluate(&MeanSpec::QSum(ExtReal::from_float(q)), &values)
        }
        LevelIICombiner::MagicG => {
            let values = over(vs_alpha.members(lattice))?;
            evaluate(&MeanSpec::QuasiMean(QuasiMap::LnMagicG), &values)
        }
    }
}

/// The magic-g monotone with default Level-I combiner:
/// `−ln(1 − [Π_{α∈ᾱ}(1 − e^{−E_α})]^{1/|ᾱ|})` over all of ᾱ.
pub fn magic_g_measure(
    psi: &QuantumState,
    vs_alpha: &DownSetLabel,
    lattice: &PartitionLattice,
    base: &EntropyKind,
) -> Result<f64> {
    let spec = PureMeasureSpec {
        base: *base,
        level_ii: LevelIICombiner::MagicG,
        ..PureMeasureSpec::default()
    };
    downset_entanglement(psi, vs_alpha, lattice, &spec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureLevel {
    I,
    II,
}

/// Evaluates the measure on every lattice label and checks the covering
/// pairs: a finer/smaller label must carry the larger (or equal) value.
pub fn check_multipartite_monotonicity(
    psi: &QuantumState,
    level: MeasureLevel,
    spec: &PureMeasureSpec,
    lattice: &PartitionLattice,
) -> Result<MeasureReport> {
    spec.validate()?;
    match level {
        MeasureLevel::I => {
            let labels: Vec<String> = lattice.elements().iter().map(format_partition).collect();
            let values: Vec<f64> = lattice
                .elements()
                .iter()
                .map(|alpha| alpha_entanglement(psi, alpha, spec))
                .collect::<Result<_>>()?;
            let chain = chain_verdicts(&values, &lattice.covers());
            Ok(MeasureReport {
                labels,
                values,
                chain,
            })
        }
        MeasureLevel::II => {
            let all = lattice.enumerate_downset_labels()?;
            let labels: Vec<String> = all.iter().map(|l| format_downset(l, lattice)).collect();
            let values: Vec<f64> = all
                .iter()
                .map(|l| downset_entanglement(psi, l, lattice, spec))
                .collect::<Result<_>>()?;
            let covers = downset_covers(&all)?;
            let chain = chain_verdicts(&values, &covers);
            Ok(MeasureReport {
                labels,
                values,
                chain,
            })
        }
    }
}

fn chain_verdicts(values: &[f64], covers: &[(usize, usize)]) -> Vec<ChainVerdict> {
    covers
        .iter()
        .map(|&(lower, upper)| ChainVerdict {
            lower,
            upper,
            ok: values[lower] >= values[upper] - CHAIN_SLACK,
        })
        .collect()
}

/// Covering pairs of the inclusion order on a list of down-set labels.
pub fn downset_covers(labels: &[DownSetLabel]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for i in 0..labels.len() {
        for j in 0..labels.len() {
            if i == j || !labels[i].leq(&labels[j])? {
                continue;
            }
            let mut between = false;
            for (k, label) in labels.iter().enumerate() {
                if k != i && k != j && labels[i].leq(label)? && label.leq(&labels[j])? {
                    between = true;
                    break;
                }
            }
            if !between {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{parse_downset, parse_partition};
    use crate::qstate::{basis_product, bell, ghz, haar_random_pure, w_state, DimProfile};
    use approx::assert_relative_eq;

    const LN2: f64 = std::f64::consts::LN_2;

    fn w_block_entropy() -> f64 {
        // W qubit marginal spectrum {1/3, 2/3}
        3f64.ln() - (2.0 / 3.0) * LN2
    }

    #[test]
    fn f_k_values() {
        let vn = EntropyKind::von_neumann();
        assert_relative_eq!(f_k(&bell().unwrap(), &[1], &vn).unwrap(), LN2, epsilon = 1e-10);
        let prod = basis_product(&DimProfile::qubits(2).unwrap(), &[0, 0]).unwrap();
        assert_relative_eq!(f_k(&prod, &[1], &vn).unwrap(), 0.0, epsilon = 1e-12);
        let g = ghz(3, 2).unwrap();
        assert_relative_eq!(f_k(&g, &[1], &vn).unwrap(), LN2, epsilon = 1e-10);
        assert_relative_eq!(f_k(&g, &[2, 3], &vn).unwrap(), LN2, epsilon = 1e-10);
    }

    #[test]
    fn f_k_symmetry_under_complement() {
        let vn = EntropyKind::von_neumann();
        for seed in 0..10 {
            let psi = haar_random_pure(&DimProfile::qubits(3).unwrap(), 500 + seed).unwrap();
            for k in [vec![1], vec![2], vec![1, 3]] {
                let comp: Vec<usize> = (1..=3).filter(|a| !k.contains(a)).collect();
                let a = f_k(&psi, &k, &vn).unwrap();
                let b = f_k(&psi, &comp, &vn).unwrap();
                assert!((a - b).abs() < 1e-9, "f_K asymmetry: {a} vs {b}");
            }
        }
    }

    #[test]
    fn f_k_rejects_renyi_one_and_above() {
        let bell = bell().unwrap();
        assert!(f_k(&bell, &[1], &EntropyKind::renyi(1.0)).is_err());
        assert!(f_k(&bell, &[1], &EntropyKind::renyi(2.0)).is_err());
        assert!(f_k(&bell, &[1], &EntropyKind::renyi(0.5)).is_ok());
    }

    #[test]
    fn alpha_entanglement_of_ghz_and_w() {
        let spec = PureMeasureSpec::default();
        let g = ghz(3, 2).unwrap();
        let top = Partition::full(3);
        assert_relative_eq!(alpha_entanglement(&g, &top, &spec).unwrap(), 0.0, epsilon = 1e-12);
        for text in ["1|23", "2|13", "3|12"] {
            let alpha = parse_partition(3, text).unwrap();
            assert_relative_eq!(
                alpha_entanglement(&g, &alpha, &spec).unwrap(),
                LN2,
                epsilon = 1e-10
            );
        }
        let bottom = Partition::singletons(3);
        assert_relative_eq!(
            alpha_entanglement(&g, &bottom, &spec).unwrap(),
            1.5 * LN2,
            epsilon = 1e-10
        );
        assert_relative_eq!(
            alpha_entanglement(&w_state(3).unwrap(), &bottom, &spec).unwrap(),
            1.5 * w_block_entropy(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn downset_entanglement_values() {
        let lat = PartitionLattice::new(3).unwrap();
        let spec = PureMeasureSpec::default();
        let bisep = parse_downset(&lat, "↓{1|23,2|13,3|12}").unwrap();
        assert_relative_eq!(
            downset_entanglement(&ghz(3, 2).unwrap(), &bisep, &lat, &spec).unwrap(),
            LN2,
            epsilon = 1e-10
        );
        assert_relative_eq!(
            downset_entanglement(&w_state(3).unwrap(), &bisep, &lat, &spec).unwrap(),
            w_block_entropy(),
            epsilon = 1e-10
        );
        let full = lat.full_downset();
        assert_relative_eq!(
            downset_entanglement(&w_state(3).unwrap(), &full, &lat, &spec).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn magic_g_measure_of_ghz() {
        let lat = PartitionLattice::new(3).unwrap();
        let bisep = parse_downset(&lat, "↓{1|23,2|13,3|12}").unwrap();
        let g = ghz(3, 2).unwrap();
        let got = magic_g_measure(&g, &bisep, &lat, &EntropyKind::von_neumann()).unwrap();
        // members are {1|2|3, 1|23, 2|13, 3|12} with E values
        // {(3/2)ln2, ln2, ln2, ln2}
        let prod = (1.0 - 2f64.powf(-1.5)) * 0.5f64.powi(3);
        let expect = -(1.0 - prod.powf(0.25)).ln();
        assert_relative_eq!(got, expect, epsilon = 1e-10);
        // quasi-arithmetic mean sits between the extreme E values
        assert!(got >= LN2 - 1e-12 && got <= 1.5 * LN2 + 1e-12);

        // vanishes when some member has E_α = 0
        let zero = basis_product(&DimProfile::qubits(1).unwrap(), &[0]).unwrap();
        let sep = zero.tensor(&bell().unwrap()).unwrap();
        assert_relative_eq!(
            magic_g_measure(&sep, &bisep, &lat, &EntropyKind::von_neumann()).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn magic_g_between_member_extremes() {
        let lat = PartitionLattice::new(3).unwrap();
        let bisep = parse_downset(&lat, "↓{1|23,2|13,3|12}").unwrap();
        let spec = PureMeasureSpec::default();
        for seed in 0..10 {
            let psi = haar_random_pure(&DimProfile::qubits(3).unwrap(), 900 + seed).unwrap();
            let magic = magic_g_measure(&psi, &bisep, &lat, &spec.base).unwrap();
            let values: Vec<f64> = bisep
                .members(&lat)
                .iter()
                .map(|alpha| alpha_entanglement(&psi, alpha, &spec).unwrap())
                .collect();
            let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = values.iter().cloned().fold(0.0, f64::max);
            assert!(
                magic >= lo - 1e-9 && magic <= hi + 1e-9,
                "magic {magic} outside [{lo}, {hi}]"
            );
        }
    }

    #[test]
    fn default_spec_is_monotonic_on_random_states() {
        let lat = PartitionLattice::new(3).unwrap();
        let spec = PureMeasureSpec::default();
        for seed in 0..5 {
            let psi = haar_random_pure(&DimProfile::qubits(3).unwrap(), 1234 + seed).unwrap();
            let rep_i =
                check_multipartite_monotonicity(&psi, MeasureLevel::I, &spec, &lat).unwrap();
            assert!(rep_i.all_ok(), "Level I chain broken: {rep_i:?}");
            let rep_ii =
                check_multipartite_monotonicity(&psi, MeasureLevel::II, &spec, &lat).unwrap();
            assert!(rep_ii.all_ok(), "Level II chain broken: {rep_ii:?}");
        }
    }

    #[test]
    fn spec_validation() {
        let mut spec = PureMeasureSpec::default();
        spec.level_i = LevelICombiner::QSum(2.0);
        assert!(spec.validate().is_err());
        spec.level_i = LevelICombiner::QSum(0.5);
        assert!(spec.validate().is_ok());
        spec.level_ii = LevelIICombiner::QMean(0.5);
        assert!(spec.validate().is_err());
        spec.level_ii = LevelIICombiner::QSum(-1.0);
        assert!(spec.validate().is_ok());
        spec.base = EntropyKind::renyi(1.5);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn report_serialization() {
        let report = MeasureReport {
            labels: vec!["123".into(), "1|2|3".into()],
            values: vec![0.0, 1.0],
            chain: vec![ChainVerdict {
                lower: 1,
                upper: 0,
                ok: true,
            }],
        };
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(
            json,
            r#"{"labels":["123","1|2|3"],"values":[0.0,1.0],"chain":[{"lower":1,"upper":0,"ok":true}]}"#
        );
        let back: MeasureReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}

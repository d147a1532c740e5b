//! Class assignment: pure-state classification is exact, mixed-state
//! classification is one-sided (membership certificates only) and returns
//! the set of classes consistent with the certified profile.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{capability, domain, Error, Result};
use crate::bitset::Bitset;
use crate::lattice::{
    format_class, format_downset, ClassLabel, DownSetLabel, PartitionLattice, Sublattice,
};
use crate::lattice::enumerate_class_labels;
use crate::measures::PureMeasureSpec;
use crate::qstate::{pure_downset_separable, Ensemble, QuantumState, PURITY_EPS};
use crate::roof::{mixed_indicator_seeded, MixedVerdict, RoofConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trilean {
    Zero,
    Positive,
    Undecided,
}

/// Per-label indicator values and verdicts over a sublattice of P_II.
#[derive(Clone, Debug)]
pub struct IndicatorProfile {
    pub sublattice: Arc<Sublattice>,
    pub values: Vec<f64>,
    pub verdicts: Vec<Trilean>,
}

impl IndicatorProfile {
    /// Zero verdicts must propagate upward: a certified ᾱ-separable state
    /// is β̄-separable for every β̄ above ᾱ.
    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.sublattice.len()
            || self.verdicts.len() != self.sublattice.len()
        {
            return domain("indicator profile length mismatch");
        }
        for i in 0..self.verdicts.len() {
            if self.verdicts[i] != Trilean::Zero {
                continue;
            }
            for j in 0..self.verdicts.len() {
                if self.sublattice.leq(i, j) && self.verdicts[j] != Trilean::Zero {
                    return domain(format!(
                        "inconsistent profile: Zero at {i} but {:?} at {j} above it",
                        self.verdicts[j]
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self, lattice: &PartitionLattice, classes: &[ClassLabel]) -> String {
        let labels: Vec<String> = self
            .sublattice
            .labels()
            .iter()
            .map(|l| format_downset(l, lattice))
            .collect();
        let classes: Vec<String> = classes.iter().map(|c| format_class(c, lattice)).collect();
        serde_json::to_string(&serde_json::json!({
            "labels": labels,
            "verdicts": self.verdicts,
            "classes": classes,
        }))
        .expect("profile serialization cannot fail")
    }
}

/// Exact classification of a pure state: the class whose members are
/// exactly the labels the state is separable under.
pub fn classify_pure(
    psi: &QuantumState,
    sublattice: &Arc<Sublattice>,
    lattice: &PartitionLattice,
) -> Result<ClassLabel> {
    if !psi.is_pure(PURITY_EPS) {
        return domain("classify_pure requires a pure state");
    }
    let mut members = Bitset::new(sublattice.len());
    for (i, label) in sublattice.labels().iter().enumerate() {
        if pure_downset_separable(psi, label, lattice, PURITY_EPS)? {
            members.insert(i);
        }
    }
    // membership is upward closed for exact pure tests; from_members
    // enforces it and any violation is an internal error
    ClassLabel::from_members(Arc::clone(sublattice), members)
}

/// One-sided mixed classification: runs the roof indicator per label,
/// propagates certificates upward, and returns every class consistent with
/// the resulting profile together with the profile itself.
pub fn classify_mixed(
    rho: &QuantumState,
    sublattice: &Arc<Sublattice>,
    lattice: &PartitionLattice,
    spec: &PureMeasureSpec,
    config: &RoofConfig,
    threshold: f64,
) -> Result<(Vec<ClassLabel>, IndicatorProfile)> {
    classify_mixed_seeded(rho, sublattice, lattice, spec, config, threshold, &[])
}

pub fn classify_mixed_seeded(
    rho: &QuantumState,
    sublattice: &Arc<Sublattice>,
    lattice: &PartitionLattice,
    spec: &PureMeasureSpec,
    config: &RoofConfig,
    threshold: f64,
    planted: &[Ensemble],
) -> Result<(Vec<ClassLabel>, IndicatorProfile)> {
    if threshold <= 0.0 {
        return Err(Error::Config("indicator threshold must be positive".into()));
    }
    let len = sublattice.len();
    let mut values = vec![0.0; len];
    let mut verdicts = vec![Trilean::Undecided; len];
    // evaluate smaller labels first so certificates propagate upward and
    // skip the optimizer on everything above them
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by_key(|&i| sublattice.label(i).size());
    for &i in &order {
        if verdicts[i] == Trilean::Zero {
            continue;
        }
        let seeds: Vec<Ensemble> = planted
            .iter()
            .filter(|e| {
                e.entries().iter().all(|(_, member)| {
                    pure_downset_separable(member, sublattice.label(i), lattice, PURITY_EPS)
                        .unwrap_or(false)
                })
            })
            .cloned()
            .collect();
        let outcome = mixed_indicator_seeded(
            rho,
            sublattice.label(i),
            lattice,
            spec,
            config,
            threshold,
            &seeds,
        )?;
        values[i] = outcome.roof.value;
        if outcome.verdict == MixedVerdict::MemberCertified {
            verdicts[i] = Trilean::Zero;
            for j in 0..len {
                if sublattice.leq(i, j) {
                    verdicts[j] = Trilean::Zero;
                }
            }
        }
    }
    let profile = IndicatorProfile {
        sublattice: Arc::clone(sublattice),
        values,
        verdicts,
    };
    profile.validate()?;
    let classes = consistent_classes(&profile)?;
    Ok((classes, profile))
}

/// Classes whose member set contains every certified-Zero label and no
/// label that could only be outside (none here, since Positive is never
/// certified): ZeroSet ⊆ members ⊆ ZeroSet ∪ UndecidedSet.
pub fn consistent_classes(profile: &IndicatorProfile) -> Result<Vec<ClassLabel>> {
    let all = enumerate_class_labels(&profile.sublattice)?;
    Ok(all
        .into_iter()
        .filter(|class| {
            profile.verdicts.iter().enumerate().all(|(i, v)| match v {
                Trilean::Zero => class.contains(i),
                Trilean::Positive => !class.contains(i),
                Trilean::Undecided => true,
            })
        })
        .collect())
}

/// One row of the class table: membership pattern over the P_II columns.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassTableRow {
    pub class: String,
    /// `pattern[i]` is true iff the class is contained in D of column i.
    pub pattern: Vec<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassTable {
    pub columns: Vec<String>,
    pub rows: Vec<ClassTableRow>,
}

impl ClassTable {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self
            .rows
            .iter()
            .map(|r| r.class.chars().count())
            .max()
            .unwrap_or(0);
        out.push_str(&format!(
            "{:width$}  {}\n",
            "class",
            self.columns.join("  "),
        ));
        for row in &self.rows {
            let cells: Vec<String> = row
                .pattern
                .iter()
                .zip(&self.columns)
                .map(|(&inside, col)| {
                    let mark = if inside { "⊂" } else { "⊄" };
                    format!("{mark:^w$}", w = col.chars().count())
                })
                .collect();
            out.push_str(&format!(
                "{:width$}  {}\n",
                row.class,
                cells.join("  "),
            ));
        }
        out
    }
}

/// The 20-class structure for n = 3: rows are classes ordered by member
/// count, then lexicographically by member indices; `C ⊆ D_ᾱ ⟺ ᾱ ∈ C`.
pub fn class_table(n: usize, lattice: &PartitionLattice) -> Result<ClassTable> {
    if n != 3 || lattice.n() != 3 {
        return capability("class table is defined for n = 3");
    }
    let sub = Arc::new(Sublattice::full(lattice)?);
    let mut classes = enumerate_class_labels(&sub)?;
    classes.sort_by_key(|c| (c.size(), c.members().iter().collect::<Vec<_>>()));
    let columns: Vec<String> = sub
        .labels()
        .iter()
        .map(|l| format_downset(l, lattice))
        .collect();
    let rows = classes
        .iter()
        .map(|class| ClassTableRow {
            class: format_class(class, lattice),
            pattern: (0..sub.len()).map(|i| class.contains(i)).collect(),
        })
        .collect();
    Ok(ClassTable { columns, rows })
}

/// Largest k such that the state is (certified) k-separable. Exact for
/// pure inputs; a lower bound for mixed inputs (one-sided certification).
pub fn ksep_class(
    state: &QuantumState,
    lattice: &PartitionLattice,
    spec: &PureMeasureSpec,
    config: &RoofConfig,
    threshold: f64,
) -> Result<usize> {
    let n = lattice.n();
    for k in (2..=n).rev() {
        let label = lattice.k_sep_label(k)?;
        if member_or_certified(state, &label, lattice, spec, config, threshold)? {
            return Ok(k);
        }
    }
    Ok(1)
}

/// Smallest k such that the state is (certified) k-producible. Exact for
/// pure inputs; an upper bound for mixed inputs.
pub fn kprod_class(
    state: &QuantumState,
    lattice: &PartitionLattice,
    spec: &PureMeasureSpec,
    config: &RoofConfig,
    threshold: f64,
) -> Result<usize> {
    let n = lattice.n();
    for k in 1..n {
        let label = lattice.k_prod_label(k)?;
        if member_or_certified(state, &label, lattice, spec, config, threshold)? {
            return Ok(k);
        }
    }
    Ok(n)
}

fn member_or_certified(
    state: &QuantumState,
    label: &DownSetLabel,
    lattice: &PartitionLattice,
    spec: &PureMeasureSpec,
    config: &RoofConfig,
    threshold: f64,
) -> Result<bool> {
    if state.is_pure(PURITY_EPS) {
        return pure_downset_separable(state, label, lattice, PURITY_EPS);
    }
    let outcome =
        crate::roof::mixed_indicator(state, label, lattice, spec, config, threshold)?;
    Ok(outcome.verdict == MixedVerdict::MemberCertified)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::parse_downset;
    use crate::qstate::{basis_product, bell, ghz, w_state, DimProfile};
    use crate::roof::INDICATOR_THRESHOLD;

    fn full_sublattice(lat: &PartitionLattice) -> Arc<Sublattice> {
        Arc::new(Sublattice::full(lat).unwrap())
    }

    #[test]
    fn classify_pure_examples() {
        let lat = PartitionLattice::new(3).unwrap();
        let sub = full_sublattice(&lat);

        // GHZ is separable only under the full down-set
        let ghz_class = classify_pure(&ghz(3, 2).unwrap(), &sub, &lat).unwrap();
        assert_eq!(ghz_class.size(), 1);
        let top = sub.index_of(&lat.full_downset()).unwrap();
        assert!(ghz_class.contains(top));
        assert_eq!(format_class(&ghz_class, &lat), "↑{↓{123}}");

        // a product state is separable under everything
        let product = basis_product(&DimProfile::qubits(3).unwrap(), &[0, 0, 0]).unwrap();
        let product_class = classify_pure(&product, &sub, &lat).unwrap();
        assert_eq!(product_class.size(), sub.len());

        // |0⟩⊗|Bell⟩ is separable exactly under labels containing 1|23
        let zero = basis_product(&DimProfile::qubits(1).unwrap(), &[0]).unwrap();
        let semi = zero.tensor(&bell().unwrap()).unwrap();
        let semi_class = classify_pure(&semi, &sub, &lat).unwrap();
        let principal = parse_downset(&lat, "↓{1|23}").unwrap();
        for (i, label) in sub.labels().iter().enumerate() {
            assert_eq!(
                semi_class.contains(i),
                principal.leq(label).unwrap(),
                "label {}",
                format_downset(label, &lat)
            );
        }
    }

    #[test]
    fn classify_pure_consistency_with_separability() {
        let lat = PartitionLattice::new(3).unwrap();
        let sub = full_sublattice(&lat);
        let w = w_state(3).unwrap();
        let class = classify_pure(&w, &sub, &lat).unwrap();
        for (i, label) in sub.labels().iter().enumerate() {
            assert_eq!(
                class.contains(i),
                pure_downset_separable(&w, label, &lat, PURITY_EPS).unwrap()
            );
        }
    }

    #[test]
    fn class_table_structure() {
        let lat = PartitionLattice::new(3).unwrap();
        let table = class_table(3, &lat).unwrap();
        assert_eq!(table.rows.len(), 20);
        assert_eq!(table.columns.len(), 9);
        // first row: the all-entangled class, inside only D of the top label
        assert_eq!(table.rows[0].pattern.iter().filter(|&&b| b).count(), 1);
        // last row: fully separable, inside every column
        assert!(table.rows[19].pattern.iter().all(|&b| b));
        let text = table.to_text();
        assert!(text.contains("⊂"));
        assert!(class_table(2, &PartitionLattice::new(2).unwrap()).is_err());
    }

    #[test]
    fn ksep_kprod_pure_examples() {
        let lat = PartitionLattice::new(3).unwrap();
        let spec = PureMeasureSpec::default();
        let config = RoofConfig::default();
        let t = INDICATOR_THRESHOLD;

        let ghz3 = ghz(3, 2).unwrap();
        assert_eq!(ksep_class(&ghz3, &lat, &spec, &config, t).unwrap(), 1);
        assert_eq!(kprod_class(&ghz3, &lat, &spec, &config, t).unwrap(), 3);

        let zero = basis_product(&DimProfile::qubits(1).unwrap(), &[0]).unwrap();
        let semi = zero.tensor(&bell().unwrap()).unwrap();
        assert_eq!(ksep_class(&semi, &lat, &spec, &config, t).unwrap(), 2);
        assert_eq!(kprod_class(&semi, &lat, &spec, &config, t).unwrap(), 2);

        let product = basis_product(&DimProfile::qubits(3).unwrap(), &[0, 0, 0]).unwrap();
        assert_eq!(ksep_class(&product, &lat, &spec, &config, t).unwrap(), 3);
        assert_eq!(kprod_class(&product, &lat, &spec, &config, t).unwrap(), 1);
    }

    #[test]
    fn profile_validation_flags_inconsistency() {
        let lat = PartitionLattice::new(2).unwrap();
        let sub = full_sublattice(&lat);
        // Zero at the bottom label but Undecided at the top is inconsistent
        let bottom = sub.index_of(&lat.bottom_downset()).unwrap();
        let mut verdicts = vec![Trilean::Undecided; sub.len()];
        verdicts[bottom] = Trilean::Zero;
        let bad = IndicatorProfile {
            sublattice: Arc::clone(&sub),
            values: vec![0.0; sub.len()],
            verdicts,
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn consistent_classes_from_profiles() {
        let lat = PartitionLattice::new(2).unwrap();
        let sub = full_sublattice(&lat);
        // all Zero: only the full class is consistent
        let all_zero = IndicatorProfile {
            sublattice: Arc::clone(&sub),
            values: vec![0.0; sub.len()],
            verdicts: vec![Trilean::Zero; sub.len()],
        };
        let classes = consistent_classes(&all_zero).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].size(), sub.len());

        // all Undecided: every class is consistent
        let open = IndicatorProfile {
            sublattice: Arc::clone(&sub),
            values: vec![1.0; sub.len()],
            verdicts: vec![Trilean::Undecided; sub.len()],
        };
        assert_eq!(consistent_classes(&open).unwrap().len(), 2);
    }

    #[test]
    fn trilean_serialization() {
        assert_eq!(serde_json::to_string(&Trilean::Zero).unwrap(), r#""zero""#);
        assert_eq!(
            serde_json::to_string(&Trilean::Undecided).unwrap(),
            r#""undecided""#
        );
    }
}

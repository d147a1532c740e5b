//! Class labels: up-sets of a chosen sublattice of down-set labels.

use std::sync::Arc;

use crate::bitset::Bitset;
use crate::error::{capability, domain, Result};
use crate::lattice::downset::{DownSetLabel, PartitionLattice};

/// Cap for exhaustive up-set enumeration over a sublattice.
pub const MAX_SUBLATTICE_ENUM: usize = 20;

/// A chosen sublattice `P_II*` of down-set labels, closed under meet and
/// join, with the inclusion order precomputed.
#[derive(Debug)]
pub struct Sublattice {
    labels: Vec<DownSetLabel>,
    /// `below[i]` = indices j with labels[j] ⊆ labels[i].
    below: Vec<Bitset>,
}

impl Sublattice {
    pub fn new(lattice: &PartitionLattice, labels: Vec<DownSetLabel>) -> Result<Self> {
        if labels.is_empty() {
            return domain("sublattice must be nonempty");
        }
        for l in &labels {
            if l.n() != lattice.n() {
                return domain("sublattice label over wrong n");
            }
        }
        for i in 0..labels.len() {
            for j in (i + 1)..labels.len() {
                if labels[i] == labels[j] {
                    return domain("duplicate label in sublattice");
                }
                let meet = labels[i].meet(&labels[j], lattice)?;
                let join = labels[i].join(&labels[j], lattice)?;
                if !labels.contains(&meet) || !labels.contains(&join) {
                    return domain("sublattice is not closed under meet/join");
                }
            }
        }
        let count = labels.len();
        let mut below = vec![Bitset::new(count); count];
        for i in 0..count {
            for (j, below_i) in below.iter_mut().enumerate() {
                if labels[i].leq(&labels[j])? {
                    below_i.insert(i);
                }
            }
        }
        Ok(Sublattice { labels, below })
    }

    /// The full `P_II` (all nonempty down-sets); capped at small n.
    pub fn full(lattice: &PartitionLattice) -> Result<Self> {
        Sublattice::new(lattice, lattice.enumerate_downset_labels()?)
    }

    /// The k-separability chain `β̄_n ⪯ ... ⪯ β̄_1`, listed bottom-up.
    pub fn ksep_chain(lattice: &PartitionLattice) -> Result<Self> {
        let labels = (1..=lattice.n())
            .rev()
            .map(|k| lattice.k_sep_label(k))
            .collect::<Result<Vec<_>>>()?;
        Sublattice::new(lattice, dedup_keep_order(labels))
    }

    /// The k-producibility chain `γ̄_1 ⪯ ... ⪯ γ̄_n`, listed bottom-up.
    pub fn kprod_chain(lattice: &PartitionLattice) -> Result<Self> {
        let labels = (1..=lattice.n())
            .map(|k| lattice.k_prod_label(k))
            .collect::<Result<Vec<_>>>()?;
        Sublattice::new(lattice, dedup_keep_order(labels))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[DownSetLabel] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &DownSetLabel {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &DownSetLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `true` iff `labels[i] ⊆ labels[j]`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.below[j].contains(i)
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.len() {
            for i in self.below[j].iter() {
                if i == j {
                    continue;
                }
                let between = (0..self.len())
                    .any(|k| k != i && k != j && self.leq(i, k) && self.leq(k, j));
                if !between {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn is_up_closed(&self, bits: &Bitset) -> bool {
        bits.iter()
            .all(|i| (0..self.len()).all(|j| !self.leq(i, j) || bits.contains(j)))
    }
}

fn dedup_keep_order(labels: Vec<DownSetLabel>) -> Vec<DownSetLabel> {
    let mut out: Vec<DownSetLabel> = Vec::new();
    for l in labels {
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

/// A label of the third kind: a nonempty upward-closed subset of a
/// sublattice of down-set labels.
#[derive(Clone)]
pub struct ClassLabel {
    sublattice: Arc<Sublattice>,
    members: Bitset,
}

impl PartialEq for ClassLabel {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
            && self.sublattice.labels() == other.sublattice.labels()
    }
}
impl Eq for ClassLabel {}

impl ClassLabel {
    pub fn from_members(sublattice: Arc<Sublattice>, members: Bitset) -> Result<Self> {
        if members.len() != sublattice.len() {
            return domain("class label bitset does not match sublattice size");
        }
        if members.is_empty() {
            return domain("class label must be nonempty");
        }
        if !sublattice.is_up_closed(&members) {
            return domain("class label members are not upward closed");
        }
        Ok(ClassLabel {
            sublattice,
            members,
        })
    }

    pub fn sublattice(&self) -> &Arc<Sublattice> {
        &self.sublattice
    }

    pub fn members(&self) -> &Bitset {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(i)
    }

    pub fn size(&self) -> usize {
        self.members.count()
    }

    /// Minimal elements of the up-set (indices into the sublattice).
    pub fn min_indices(&self) -> Vec<usize> {
        self.members
            .iter()
            .filter(|&i| {
                !self
                    .members
                    .iter()
                    .any(|j| j != i && self.sublattice.leq(j, i))
            })
            .collect()
    }

    /// Maximal elements of the complement (indices into the sublattice).
    pub fn max_complement_indices(&self) -> Vec<usize> {
        let complement: Vec<usize> = (0..self.sublattice.len())
            .filter(|&i| !self.members.contains(i))
            .collect();
        complement
            .iter()
            .copied()
            .filter(|&i| {
                !complement
                    .iter()
                    .any(|&j| j != i && self.sublattice.leq(i, j))
            })
            .collect()
    }

    /// The two antichains sufficient for detection: minimal members and
    /// maximal non-members.
    pub fn min_max(&self) -> (Vec<DownSetLabel>, Vec<DownSetLabel>) {
        let min = self
            .min_indices()
            .into_iter()
            .map(|i| self.sublattice.label(i).clone())
            .collect();
        let maxc = self
            .max_complement_indices()
            .into_iter()
            .map(|i| self.sublattice.label(i).clone())
            .collect();
        (min, maxc)
    }
}

/// All nonempty up-sets of the sublattice, in increasing bitmask order.
pub fn enumerate_class_labels(sublattice: &Arc<Sublattice>) -> Result<Vec<ClassLabel>> {
    let count = sublattice.len();
    if count > MAX_SUBLATTICE_ENUM {
        return capability(format!(
            "class enumeration is capped at |P_II*| <= {MAX_SUBLATTICE_ENUM}; \
             use chain sublattices for larger cases"
        ));
    }
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << count) {
        let bits = Bitset::from_mask(count, mask);
        if sublattice.is_up_closed(&bits) {
            out.push(ClassLabel::from_members(Arc::clone(sublattice), bits)?);
        }
    }
    Ok(out)
}

/// The class labels whose member set contains `vs_alpha`: the up-closure of
/// the principal up-set, pure set algebra.
pub fn reconstruct_membership(
    vs_alpha: &DownSetLabel,
    classes: &[ClassLabel],
) -> Result<Vec<ClassLabel>> {
    let mut out = Vec::new();
    for c in classes {
        let i = c
            .sublattice()
            .index_of(vs_alpha)
            .ok_or_else(|| crate::error::Error::Domain("label not in sublattice".into()))?;
        if c.contains(i) {
            out.push(c.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::partition::Partition;
    use crate::lattice::text::parse_partition;

    #[test]
    fn class_counts() {
        let lat = PartitionLattice::new(3).unwrap();
        let sub = Arc::new(Sublattice::full(&lat).unwrap());
        let classes = enumerate_class_labels(&sub).unwrap();
        assert_eq!(classes.len(), 20);

        let lat2 = PartitionLattice::new(2).unwrap();
        let sub2 = Arc::new(Sublattice::full(&lat2).unwrap());
        assert_eq!(enumerate_class_labels(&sub2).unwrap().len(), 2);
    }

    #[test]
    fn chain_classes() {
        let lat = PartitionLattice::new(4).unwrap();
        let chain = Arc::new(Sublattice::ksep_chain(&lat).unwrap());
        assert_eq!(chain.len(), 4);
        assert_eq!(enumerate_class_labels(&chain).unwrap().len(), 4);
        let pchain = Arc::new(Sublattice::kprod_chain(&lat).unwrap());
        assert_eq!(enumerate_class_labels(&pchain).unwrap().len(), pchain.len());
    }

    #[test]
    fn min_max_examples() {
        let lat = PartitionLattice::new(3).unwrap();
        let sub = Arc::new(Sublattice::full(&lat).unwrap());

        // principal up-set of the bottom label is everything
        let bot = lat.bottom_downset();
        let bi = sub.index_of(&bot).unwrap();
        let mut bits = Bitset::new(sub.len());
        for j in 0..sub.len() {
            if sub.leq(bi, j) {
                bits.insert(j);
            }
        }
        let full_class = ClassLabel::from_members(Arc::clone(&sub), bits).unwrap();
        assert_eq!(full_class.size(), sub.len());
        let (min, maxc) = full_class.min_max();
        assert_eq!(min, vec![bot]);
        assert!(maxc.is_empty());

        // fully tripartite-entangled class: up-set of ↓{123}
        let top = lat.full_downset();
        let ti = sub.index_of(&top).unwrap();
        let ent = ClassLabel::from_members(
            Arc::clone(&sub),
            Bitset::singleton(sub.len(), ti),
        )
        .unwrap();
        let (min, maxc) = ent.min_max();
        assert_eq!(min, vec![top]);
        let three = lat
            .down_closure(&[
                parse_partition(3, "1|23").unwrap(),
                parse_partition(3, "2|13").unwrap(),
                parse_partition(3, "3|12").unwrap(),
            ])
            .unwrap();
        assert_eq!(maxc, vec![three]);
    }

    #[test]
    fn roundabout_min_has_two_elements() {
        let lat = PartitionLattice::new(3).unwrap();
        let sub = Arc::new(Sublattice::full(&lat).unwrap());
        let a = lat
            .principal_downset(&parse_partition(3, "1|23").unwrap())
            .unwrap();
        let bc = lat
            .down_closure(&[
                parse_partition(3, "2|13").unwrap(),
                parse_partition(3, "3|12").unwrap(),
            ])
            .unwrap();
        let ia = sub.index_of(&a).unwrap();
        let ibc = sub.index_of(&bc).unwrap();
        let mut bits = Bitset::new(sub.len());
        for j in 0..sub.len() {
            if sub.leq(ia, j) || sub.leq(ibc, j) {
                bits.insert(j);
            }
        }
        let c = ClassLabel::from_members(Arc::clone(&sub), bits).unwrap();
        assert_eq!(c.min_indices().len(), 2);
    }

    #[test]
    fn reconstruction_examples() {
        let lat = PartitionLattice::new(3).unwrap();
        let sub = Arc::new(Sublattice::full(&lat).unwrap());
        let classes = enumerate_class_labels(&sub).unwrap();

        // every nonempty up-set contains the top of P_II
        let top = lat.full_downset();
        assert_eq!(reconstruct_membership(&top, &classes).unwrap().len(), 20);

        // only the full up-set contains the bottom
        let bot = lat.bottom_downset();
        assert_eq!(reconstruct_membership(&bot, &classes).unwrap().len(), 1);

        // ↓{1|23}: brute-force count of up-sets containing it
        let a = lat
            .principal_downset(&parse_partition(3, "1|23").unwrap())
            .unwrap();
        let got = reconstruct_membership(&a, &classes).unwrap().len();
        let i = sub.index_of(&a).unwrap();
        let brute = classes.iter().filter(|c| c.contains(i)).count();
        assert_eq!(got, brute);
        assert_eq!(got, 6);
    }

    #[test]
    fn sublattice_rejects_non_closed() {
        let lat = PartitionLattice::new(3).unwrap();
        // two incomparable principal down-sets without their meet/join
        let a = lat
            .principal_downset(&parse_partition(3, "1|23").unwrap())
            .unwrap();
        let b = lat
            .principal_downset(&parse_partition(3, "2|13").unwrap())
            .unwrap();
        assert!(Sublattice::new(&lat, vec![a, b]).is_err());
        assert!(Sublattice::new(&lat, vec![lat.full_downset(), lat.full_downset()]).is_err());
        let _ = Partition::full(3);
    }
}

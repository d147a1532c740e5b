//! The partition lattice context and down-set labels over it.

use std::collections::HashMap;

use crate::bitset::Bitset;
use crate::error::{capability, domain, Result};
use crate::lattice::partition::{bell_number, enumerate_partitions, Partition};

/// Cap for building a full lattice context (refinement relation is stored
/// as Bell(n) bitsets). Bell(8) = 4140.
pub const MAX_LATTICE_N: usize = 8;

/// Cap for exhaustive enumeration of all down-set labels.
pub const MAX_DOWNSET_ENUM_N: usize = 4;

/// The lattice `P_I` of all partitions of `{1..n}` with the refinement
/// order precomputed. Down-set labels are bitsets indexed by this
/// enumeration (RGS-lexicographic; index 0 is the top).
pub struct PartitionLattice {
    n: usize,
    elements: Vec<Partition>,
    index: HashMap<Partition, usize>,
    /// `below[i]` = indices of all partitions refining `elements[i]`.
    below: Vec<Bitset>,
}

impl PartitionLattice {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_LATTICE_N {
            return capability(format!(
                "partition lattice context supports 1 <= n <= {MAX_LATTICE_N}"
            ));
        }
        let elements = enumerate_partitions(n)?;
        let count = elements.len();
        let index: HashMap<Partition, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut below = vec![Bitset::new(count); count];
        for (i, coarse) in elements.iter().enumerate() {
            for (j, fine) in elements.iter().enumerate() {
                if fine.refines(coarse)? {
                    below[i].insert(j);
                }
            }
        }
        Ok(PartitionLattice {
            n,
            elements,
            index,
            below,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[Partition] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Partition {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn top_index(&self) -> usize {
        0
    }

    pub fn bottom_index(&self) -> usize {
        self.elements.len() - 1
    }

    /// `true` iff `elements[i]` refines `elements[j]`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.below[j].contains(i)
    }

    /// Covering pairs `(lower, upper)` of the refinement order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.len() {
            for i in self.below[j].iter() {
                if i == j {
                    continue;
                }
                let strictly_between = (0..self.len()).any(|k| {
                    k != i && k != j && self.leq(i, k) && self.leq(k, j)
                });
                if !strictly_between {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Smallest down-set containing the given partitions.
    pub fn down_closure(&self, parts: &[Partition]) -> Result<DownSetLabel> {
        if parts.is_empty() {
            return domain("down_closure of an empty set");
        }
        let mut bits = Bitset::new(self.len());
        for p in parts {
            let i = self
                .index_of(p)
                .ok_or_else(|| crate::error::Error::Domain("partition has wrong n".into()))?;
            bits = bits.union(&self.below[i]);
        }
        DownSetLabel::from_bits(self, bits)
    }

    /// Smallest up-set containing the given partitions.
    pub fn up_closure(&self, parts: &[Partition]) -> Result<Vec<Partition>> {
        if parts.is_empty() {
            return domain("up_closure of an empty set");
        }
        let mut bits = Bitset::new(self.len());
        for p in parts {
            let i = self
                .index_of(p)
                .ok_or_else(|| crate::error::Error::Domain("partition has wrong n".into()))?;
            for j in 0..self.len() {
                if self.leq(i, j) {
                    bits.insert(j);
                }
            }
        }
        Ok(bits.iter().map(|i| self.elements[i].clone()).collect())
    }

    pub fn principal_downset(&self, p: &Partition) -> Result<DownSetLabel> {
        self.down_closure(std::slice::from_ref(p))
    }

    /// The whole of `P_I` as a down-set (the top label of `P_II`).
    pub fn full_downset(&self) -> DownSetLabel {
        DownSetLabel::from_bits(self, Bitset::full(self.len()))
            .expect("P_I is a valid down-set")
    }

    /// The bottom label `↓{1|2|...|n}`.
    pub fn bottom_downset(&self) -> DownSetLabel {
        DownSetLabel::from_bits(self, Bitset::singleton(self.len(), self.bottom_index()))
            .expect("{bottom} is a valid down-set")
    }

    /// Label of `k`-separability: all partitions with at least `k` blocks.
    pub fn k_sep_label(&self, k: usize) -> Result<DownSetLabel> {
        if k == 0 || k > self.n {
            return domain(format!("k-separability requires 1 <= k <= {}", self.n));
        }
        let mut bits = Bitset::new(self.len());
        for (i, p) in self.elements.iter().enumerate() {
            if p.block_count() >= k {
                bits.insert(i);
            }
        }
        DownSetLabel::from_bits(self, bits)
    }

    /// Label of `k`-producibility: all partitions with every block of size <= `k`.
    pub fn k_prod_label(&self, k: usize) -> Result<DownSetLabel> {
        if k == 0 || k > self.n {
            return domain(format!("k-producibility requires 1 <= k <= {}", self.n));
        }
        let mut bits = Bitset::new(self.len());
        for (i, p) in self.elements.iter().enumerate() {
            if p.blocks().iter().all(|b| b.len() <= k) {
                bits.insert(i);
            }
        }
        DownSetLabel::from_bits(self, bits)
    }

    /// All nonempty down-sets of `P_I`, in increasing bitmask order.
    pub fn enumerate_downset_labels(&self) -> Result<Vec<DownSetLabel>> {
        if self.n > MAX_DOWNSET_ENUM_N {
            return capability(format!(
                "exhaustive down-set enumeration is capped at n = {MAX_DOWNSET_ENUM_N}; \
                 use chain sublattices (k-sep, k-prod) for larger n"
            ));
        }
        let count = self.len();
        let mut out = Vec::new();
        for mask in 1u64..(1u64 << count) {
            let bits = Bitset::from_mask(count, mask);
            if self.is_down_closed(&bits) {
                out.push(DownSetLabel::from_bits(self, bits)?);
            }
        }
        Ok(out)
    }

    fn is_down_closed(&self, bits: &Bitset) -> bool {
        bits.iter().all(|i| self.below[i].is_subset(bits))
    }

    fn max_indices_of(&self, bits: &Bitset) -> Vec<usize> {
        bits.iter()
            .filter(|&i| !bits.iter().any(|j| j != i && self.leq(i, j)))
            .collect()
    }
}

/// A label of the second kind: a nonempty downward-closed set of partitions,
/// stored as a bitset over the lattice enumeration with the maximal
/// antichain cached.
#[derive(Clone, Debug)]
pub struct DownSetLabel {
    n: usize,
    bits: Bitset,
    max: Vec<usize>,
}

impl PartialEq for DownSetLabel {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.bits == other.bits
    }
}
impl Eq for DownSetLabel {}

impl std::hash::Hash for DownSetLabel {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.bits.hash(state);
    }
}

impl DownSetLabel {
    pub fn from_bits(lattice: &PartitionLattice, bits: Bitset) -> Result<Self> {
        if bits.len() != lattice.len() {
            return domain("down-set bitset does not match lattice size");
        }
        if bits.is_empty() {
            return domain("down-set label must be nonempty");
        }
        if !lattice.is_down_closed(&bits) {
            return domain("set of partitions is not downward closed");
        }
        let max = lattice.max_indices_of(&bits);
        Ok(DownSetLabel {
            n: lattice.n(),
            bits,
            max,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &Bitset {
        &self.bits
    }

    pub fn size(&self) -> usize {
        self.bits.count()
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn contains(&self, lattice: &PartitionLattice, p: &Partition) -> bool {
        lattice
            .index_of(p)
            .map(|i| self.bits.contains(i))
            .unwrap_or(false)
    }

    pub fn members(&self, lattice: &PartitionLattice) -> Vec<Partition> {
        self.bits.iter().map(|i| lattice.element(i).clone()).collect()
    }

    /// Indices of the maximal elements (the generating antichain).
    pub fn max_indices(&self) -> &[usize] {
        &self.max
    }

    pub fn max_elements(&self, lattice: &PartitionLattice) -> Vec<Partition> {
        self.max.iter().map(|&i| lattice.element(i).clone()).collect()
    }

    /// Order of `P_II`: set inclusion.
    pub fn leq(&self, other: &DownSetLabel) -> Result<bool> {
        if self.n != other.n {
            return domain("down-set labels over different n");
        }
        Ok(self.bits.is_subset(&other.bits))
    }

    /// Meet of `P_II`: intersection. An empty intersection signals corrupted
    /// inputs (every valid down-set contains the bottom) and is flagged
    /// distinctly.
    pub fn meet(&self, other: &DownSetLabel, lattice: &PartitionLattice) -> Result<DownSetLabel> {
        if self.n != other.n {
            return domain("down-set labels over different n");
        }
        let bits = self.bits.intersection(&other.bits);
        if bits.is_empty() {
            return domain("meet of down-set labels is empty: corrupted inputs");
        }
        DownSetLabel::from_bits(lattice, bits)
    }

    /// Join of `P_II`: union.
    pub fn join(&self, other: &DownSetLabel, lattice: &PartitionLattice) -> Result<DownSetLabel> {
        if self.n != other.n {
            return domain("down-set labels over different n");
        }
        DownSetLabel::from_bits(lattice, self.bits.union(&other.bits))
    }
}

/// Bell-number sanity used by callers sizing bitsets.
pub fn downset_universe_size(n: usize) -> u64 {
    bell_number(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::text::parse_partition;

    fn p(n: usize, s: &str) -> Partition {
        parse_partition(n, s).unwrap()
    }

    #[test]
    fn down_closure_examples() {
        let lat = PartitionLattice::new(3).unwrap();
        let all = lat.down_closure(&[Partition::full(3)]).unwrap();
        assert_eq!(all.size(), 5);
        assert_eq!(all, lat.full_downset());

        let bot = lat.down_closure(&[Partition::singletons(3)]).unwrap();
        assert_eq!(bot.size(), 1);

        let two = lat
            .down_closure(&[p(3, "1|23"), p(3, "2|13")])
            .unwrap();
        assert_eq!(two.size(), 3);
        assert!(two.contains(&lat, &Partition::singletons(3)));
        assert!(!two.contains(&lat, &p(3, "3|12")));
        assert_eq!(two.max_indices().len(), 2);

        assert!(lat.down_closure(&[]).is_err());
    }

    #[test]
    fn up_closure_examples() {
        let lat = PartitionLattice::new(3).unwrap();
        let up = lat.up_closure(&[p(3, "1|23")]).unwrap();
        assert_eq!(up.len(), 2);
        assert!(up.contains(&Partition::full(3)));
    }

    #[test]
    fn downset_label_counts() {
        let lat2 = PartitionLattice::new(2).unwrap();
        assert_eq!(lat2.enumerate_downset_labels().unwrap().len(), 2);
        let lat3 = PartitionLattice::new(3).unwrap();
        assert_eq!(lat3.enumerate_downset_labels().unwrap().len(), 9);
        assert!(PartitionLattice::new(5)
            .unwrap()
            .enumerate_downset_labels()
            .is_err());
    }

    #[test]
    fn downset_lattice_ops() {
        let lat = PartitionLattice::new(3).unwrap();
        let a = lat.principal_downset(&p(3, "1|23")).unwrap();
        let b = lat.principal_downset(&p(3, "2|13")).unwrap();
        let meet = a.meet(&b, &lat).unwrap();
        assert_eq!(meet, lat.bottom_downset());
        let join = a.join(&b, &lat).unwrap();
        assert_eq!(join, lat.down_closure(&[p(3, "1|23"), p(3, "2|13")]).unwrap());
        assert_eq!(join.join(&join, &lat).unwrap(), join);
        assert!(meet.leq(&a).unwrap() && meet.leq(&b).unwrap());
    }

    #[test]
    fn ksep_kprod_examples() {
        let lat3 = PartitionLattice::new(3).unwrap();
        assert_eq!(lat3.k_sep_label(2).unwrap().size(), 4);
        assert_eq!(lat3.k_sep_label(1).unwrap(), lat3.full_downset());
        assert_eq!(lat3.k_sep_label(3).unwrap(), lat3.bottom_downset());
        assert_eq!(lat3.k_prod_label(2).unwrap().size(), 4);
        assert_eq!(lat3.k_prod_label(3).unwrap(), lat3.full_downset());
        assert_eq!(lat3.k_prod_label(1).unwrap(), lat3.bottom_downset());

        let lat4 = PartitionLattice::new(4).unwrap();
        assert_eq!(lat4.k_sep_label(3).unwrap().size(), 7);
        assert_eq!(lat4.k_prod_label(2).unwrap().size(), 10);
        assert!(lat4.k_sep_label(0).is_err());
        assert!(lat4.k_sep_label(5).is_err());

        // chains
        for k in 1..3 {
            assert!(lat4
                .k_sep_label(k + 1)
                .unwrap()
                .leq(&lat4.k_sep_label(k).unwrap())
                .unwrap());
            assert!(lat4
                .k_prod_label(k)
                .unwrap()
                .leq(&lat4.k_prod_label(k + 1).unwrap())
                .unwrap());
        }
    }
}

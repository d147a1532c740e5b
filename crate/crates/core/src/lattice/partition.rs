//! Partitions of the label set `{1..n}` and their lattice operations.
//!
//! A partition is stored in canonical form: blocks sorted by their smallest
//! label, labels sorted within each block. This order coincides with the
//! first-occurrence order of the restricted growth string (RGS), so
//! canonicalization and RGS conversion are both O(n log n).

use crate::error::{domain, Error, Result};

/// Hard cap for exhaustive partition enumeration. Bell(12) = 4,213,597.
pub const MAX_ENUM_N: usize = 12;

/// A partition of `{1..n}` into disjoint nonempty blocks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from blocks, validating the cover and canonicalizing.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return domain("partition requires n >= 1");
        }
        let mut seen = vec![false; n + 1];
        let mut canon: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return domain("empty block");
            }
            let mut b = block;
            b.sort_unstable();
            for &label in &b {
                if label == 0 || label > n {
                    return domain(format!("label {label} out of range 1..={n}"));
                }
                if seen[label] {
                    return domain(format!("label {label} appears in two blocks"));
                }
                seen[label] = true;
            }
            canon.push(b);
        }
        if seen[1..].iter().any(|&s| !s) {
            return domain("blocks do not cover {1..n}");
        }
        canon.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { n, blocks: canon })
    }

    /// Builds a partition from its restricted growth string.
    /// `rgs[i]` is the block index of label `i+1`; `rgs[0] = 0` and each entry
    /// exceeds the running maximum by at most one.
    pub fn from_rgs(rgs: &[usize]) -> Result<Self> {
        if rgs.is_empty() {
            return domain("empty RGS");
        }
        let mut max_seen = 0usize;
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &b) in rgs.iter().enumerate() {
            if (i == 0 && b != 0) || b > max_seen + 1 {
                return Err(Error::Domain(format!("invalid RGS at position {i}")));
            }
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(i + 1);
            max_seen = max_seen.max(b);
        }
        Ok(Partition {
            n: rgs.len(),
            blocks,
        })
    }

    /// The all-singletons partition `1|2|...|n` (lattice bottom).
    pub fn singletons(n: usize) -> Self {
        Partition {
            n,
            blocks: (1..=n).map(|a| vec![a]).collect(),
        }
    }

    /// The single-block partition `12...n` (lattice top).
    pub fn full(n: usize) -> Self {
        Partition {
            n,
            blocks: vec![(1..=n).collect()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_top(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn is_bottom(&self) -> bool {
        self.blocks.len() == self.n
    }

    /// Restricted growth string of the canonical form.
    pub fn rgs(&self) -> Vec<usize> {
        let assignment = self.block_assignment();
        (1..=self.n).map(|a| assignment[a]).collect()
    }

    /// Maps label -> block index (canonical block order); entry 0 is unused.
    pub fn block_assignment(&self) -> Vec<usize> {
        let mut assignment = vec![usize::MAX; self.n + 1];
        for (bi, block) in self.blocks.iter().enumerate() {
            for &a in block {
                assignment[a] = bi;
            }
        }
        assignment
    }

    /// `true` iff every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> Result<bool> {
        if self.n != coarser.n {
            return domain("refines: partitions over different n");
        }
        let assignment = coarser.block_assignment();
        Ok(self
            .blocks
            .iter()
            .all(|b| b.iter().all(|&a| assignment[a] == assignment[b[0]])))
    }

    /// Greatest lower bound: blocks are the nonempty pairwise intersections.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        if self.n != other.n {
            return domain("meet: partitions over different n");
        }
        let assign_a = self.block_assignment();
        let assign_b = other.block_assignment();
        let mut key_to_block: std::collections::HashMap<(usize, usize), Vec<usize>> =
            std::collections::HashMap::new();
        for a in 1..=self.n {
            key_to_block
                .entry((assign_a[a], assign_b[a]))
                .or_default()
                .push(a);
        }
        Partition::from_blocks(self.n, key_to_block.into_values().collect())
    }

    /// Least upper bound, computed by union-find over labels: blocks that
    /// share a label in either input are merged transitively.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        if self.n != other.n {
            return domain("join: partitions over different n");
        }
        let mut uf = UnionFind::new(self.n);
        for block in self.blocks.iter().chain(other.blocks.iter()) {
            for w in block.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut root_to_block: std::collections::HashMap<usize, Vec<usize>> =
            std::collections::HashMap::new();
        for a in 1..=self.n {
            root_to_block.entry(uf.find(a)).or_default().push(a);
        }
        Partition::from_blocks(self.n, root_to_block.into_values().collect())
    }

    /// The bipartitions `K|K̄` generated by the blocks of this partition.
    /// The meet of the results reproduces the partition; for the top the
    /// result is empty and the empty-meet convention yields the top.
    pub fn bipartition_generators(&self) -> Vec<Bipartition> {
        let mut out: Vec<Bipartition> = Vec::new();
        for block in &self.blocks {
            if block.len() == self.n {
                continue;
            }
            let bp = Bipartition::new(self.n, block.clone())
                .expect("block of a valid partition is a valid bipartition side");
            if !out.contains(&bp) {
                out.push(bp);
            }
        }
        out
    }

    /// Restriction `α|_K`: the nonempty intersections of the blocks with `K`,
    /// relabeled canonically to `{1..|K|}` in the order of the sorted labels.
    pub fn restrict(&self, k: &[usize]) -> Result<Partition> {
        if k.is_empty() {
            return domain("restrict: empty label set");
        }
        let mut sorted = k.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k.len() {
            return domain("restrict: duplicate labels");
        }
        if *sorted.last().unwrap() > self.n || sorted[0] == 0 {
            return domain("restrict: label out of range");
        }
        let relabel: std::collections::HashMap<usize, usize> = sorted
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, i + 1))
            .collect();
        let blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| b.iter().filter_map(|a| relabel.get(a).copied()).collect())
            .filter(|b: &Vec<usize>| !b.is_empty())
            .collect();
        Partition::from_blocks(sorted.len(), blocks)
    }
}

/// A bipartition `K|K̄` of `{1..n}`; the stored side contains label 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bipartition {
    n: usize,
    k: Vec<usize>,
}

impl Bipartition {
    pub fn new(n: usize, side: Vec<usize>) -> Result<Self> {
        if side.is_empty() || side.len() >= n {
            return domain("bipartition side must be a nonempty proper subset");
        }
        let mut s = side;
        s.sort_unstable();
        s.dedup();
        if s[0] == 0 || *s.last().unwrap() > n {
            return domain("bipartition label out of range");
        }
        if !s.contains(&1) {
            s = (1..=n).filter(|a| !s.contains(a)).collect();
        }
        Ok(Bipartition { n, k: s })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The canonical side (the one containing label 1).
    pub fn side(&self) -> &[usize] {
        &self.k
    }

    pub fn complement(&self) -> Vec<usize> {
        (1..=self.n).filter(|a| !self.k.contains(a)).collect()
    }

    pub fn as_partition(&self) -> Partition {
        Partition::from_blocks(self.n, vec![self.k.clone(), self.complement()])
            .expect("bipartition sides form a valid partition")
    }
}

/// All partitions of `{1..n}` in RGS-lexicographic order.
/// Index 0 is the top `12...n` (all-zero RGS); the last index is the bottom.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > MAX_ENUM_N {
        return domain(format!("enumerate_partitions requires 1 <= n <= {MAX_ENUM_N}"));
    }
    let mut out = Vec::with_capacity(bell_number(n) as usize);
    let mut rgs = vec![0usize; n];
    loop {
        out.push(Partition::from_rgs(&rgs).expect("generated RGS is valid"));
        // lexicographic successor among restricted growth strings
        let mut i = n;
        loop {
            if i == 1 {
                return Ok(out);
            }
            i -= 1;
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for e in rgs[i + 1..].iter_mut() {
                    *e = 0;
                }
                break;
            }
        }
    }
}

/// Bell numbers via the binomial recursion `B_{k+1} = sum_j C(k,j) B_j`.
pub fn bell_number(n: usize) -> u64 {
    let mut bell = vec![1u64; n + 1];
    for k in 1..=n {
        // binomials C(k-1, j) built on the fly
        let mut c = 1u64;
        let mut acc = 0u64;
        for j in 0..k {
            if j > 0 {
                c = c * (k - j) as u64 / j as u64;
            }
            acc += c * bell[j];
        }
        bell[k] = acc;
    }
    bell[n]
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..=n).collect(),
        }
    }

    fn find(&mut self, a: usize) -> usize {
        if self.parent[a] != a {
            let root = self.find(self.parent[a]);
            self.parent[a] = root;
        }
        self.parent[a]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::text::parse_partition;

    fn p(n: usize, s: &str) -> Partition {
        parse_partition(n, s).unwrap()
    }

    #[test]
    fn enumeration_lengths() {
        assert_eq!(enumerate_partitions(1).unwrap().len(), 1);
        assert_eq!(enumerate_partitions(3).unwrap().len(), 5);
        assert_eq!(enumerate_partitions(5).unwrap().len(), 52);
        assert!(enumerate_partitions(0).is_err());
        assert!(enumerate_partitions(13).is_err());
    }

    #[test]
    fn enumeration_extremes() {
        let parts = enumerate_partitions(4).unwrap();
        assert!(parts[0].is_top());
        assert!(parts.last().unwrap().is_bottom());
    }

    #[test]
    fn refines_examples() {
        assert!(p(3, "1|2|3").refines(&p(3, "1|23")).unwrap());
        let a = p(3, "1|23");
        assert!(a.refines(&a).unwrap());
        assert!(!p(3, "1|23").refines(&p(3, "2|13")).unwrap());
        assert!(p(3, "1|23").refines(&p(2, "1|2")).is_err());
    }

    #[test]
    fn meet_examples() {
        assert_eq!(p(3, "2|13").meet(&p(3, "3|12")).unwrap(), p(3, "1|2|3"));
        let a = p(3, "1|23");
        assert_eq!(a.meet(&Partition::full(3)).unwrap(), a);
        assert_eq!(p(4, "12|34").meet(&p(4, "13|24")).unwrap(), p(4, "1|2|3|4"));
    }

    #[test]
    fn join_examples() {
        assert_eq!(p(3, "1|23").join(&p(3, "2|13")).unwrap(), p(3, "123"));
        let a = p(3, "1|23");
        assert_eq!(a.join(&Partition::singletons(3)).unwrap(), a);
        assert_eq!(
            p(4, "12|3|4").join(&p(4, "1|2|34")).unwrap(),
            p(4, "12|34")
        );
    }

    #[test]
    fn bipartition_generator_examples() {
        let gens = p(3, "1|23").bipartition_generators();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].as_partition(), p(3, "1|23"));

        let gens = p(3, "1|2|3").bipartition_generators();
        assert_eq!(gens.len(), 3);
        let meet = gens
            .iter()
            .map(Bipartition::as_partition)
            .try_fold(Partition::full(3), |acc, b| acc.meet(&b))
            .unwrap();
        assert_eq!(meet, p(3, "1|2|3"));

        let gens = p(4, "12|3|4").bipartition_generators();
        assert_eq!(gens.len(), 3);
        let meet = gens
            .iter()
            .map(Bipartition::as_partition)
            .try_fold(Partition::full(4), |acc, b| acc.meet(&b))
            .unwrap();
        assert_eq!(meet, p(4, "12|3|4"));

        assert!(Partition::full(3).bipartition_generators().is_empty());
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(p(3, "1|23").restrict(&[2, 3]).unwrap(), p(2, "12"));
        assert_eq!(
            Partition::singletons(4).restrict(&[2, 4]).unwrap(),
            p(2, "1|2")
        );
        assert_eq!(p(4, "12|34").restrict(&[1, 3]).unwrap(), p(2, "1|2"));
        assert!(p(3, "1|23").restrict(&[]).is_err());
    }

    #[test]
    fn bell_numbers() {
        let expect = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in expect.iter().enumerate() {
            assert_eq!(bell_number(n), b);
        }
    }

    #[test]
    fn invalid_blocks_rejected() {
        assert!(Partition::from_blocks(3, vec![vec![1, 2]]).is_err());
        assert!(Partition::from_blocks(3, vec![vec![1, 2], vec![2, 3]]).is_err());
        assert!(Partition::from_blocks(3, vec![vec![1, 2, 3], vec![]]).is_err());
        assert!(Partition::from_blocks(2, vec![vec![1, 2, 3]]).is_err());
    }
}

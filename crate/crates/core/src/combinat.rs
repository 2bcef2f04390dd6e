//! Permutations, set partitions of `[m]`, and words `[m] -> [n]`.
//!
//! Permutations act on `0..k` internally and print 1-based in cycle
//! notation. Set partitions and words are 1-based throughout, matching the
//! copy indices they describe.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An element of `S_k` with its cycle decomposition and sign precomputed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
    cycles: Vec<Vec<usize>>,
    sign: i8,
}

impl Permutation {
    /// `images[i]` is the image of `i`; values must be a bijection of `0..k`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &x in &images {
            if x >= k || seen[x] {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        let cycles = cycles_of(&images);
        let sign = if (k - cycles.len()).is_multiple_of(2) { 1 } else { -1 };
        Ok(Permutation {
            images,
            cycles,
            sign,
        })
    }

    pub fn identity(k: usize) -> Self {
        Self::from_images((0..k).collect()).expect("identity is a bijection")
    }

    /// Builds a permutation of `0..k` from cycles of 0-based points.
    pub fn from_cycles(k: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..k).collect();
        let mut touched = vec![false; k];
        for cycle in cycles {
            for (idx, &a) in cycle.iter().enumerate() {
                if a >= k || touched[a] {
                    return Err(Error::NotAPermutation(format!("{cycles:?}")));
                }
                touched[a] = true;
                images[a] = cycle[(idx + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Every cycle, fixed points included. Each cycle starts at its least
    /// point and cycles are ordered by that point.
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// `+1` for even, `-1` for odd permutations.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch(format!(
                "cannot compose permutations of {} and {} points",
                self.size(),
                other.size()
            )));
        }
        Self::from_images(other.images.iter().map(|&i| self.images[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.size()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Self::from_images(inv).expect("inverse of a bijection")
    }
}

fn cycles_of(images: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; images.len()];
    let mut cycles = Vec::new();
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = images[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = images[x];
        }
        cycles.push(cycle);
    }
    cycles
}

impl fmt::Display for Permutation {
    /// Cycle notation, 1-based, fixed points shown: `(1 2 3)(4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in &self.cycles {
            write!(f, "({})", cycle.iter().map(|x| x + 1).join(" "))?;
        }
        Ok(())
    }
}

/// All `k!` permutations of `S_k` in lexicographic one-line order.
pub fn enumerate_permutations(k: usize) -> Result<Vec<Permutation>> {
    if k == 0 {
        return Err(Error::InvalidConfig(
            "S_0 is not enumerated; k must be >= 1".into(),
        ));
    }
    Ok((0..k)
        .permutations(k)
        .map(|images| Permutation::from_images(images).expect("itertools yields bijections"))
        .collect())
}

/// A partition of `{1..m}` with each block sorted and blocks ordered by their
/// least element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    m: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Validates and canonicalizes: blocks must be nonempty, disjoint and
    /// cover `{1..m}` exactly.
    pub fn new(m: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; m + 1];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &x in block.iter() {
                if x == 0 || x > m {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} outside 1..{m}"
                    )));
                }
                if seen[x] {
                    return Err(Error::InvalidPartition(format!("element {x} repeated")));
                }
                seen[x] = true;
            }
            block.sort_unstable();
        }
        if let Some(missing) = (1..=m).find(|&x| !seen[x]) {
            return Err(Error::InvalidPartition(format!(
                "element {missing} not covered"
            )));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(SetPartition { m, blocks })
    }

    /// The partition of positions `1..=labels.len()` into classes of equal
    /// label.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut reps: Vec<&T> = Vec::new();
        for (pos, label) in labels.iter().enumerate() {
            match reps.iter().position(|r| *r == label) {
                Some(b) => blocks[b].push(pos + 1),
                None => {
                    reps.push(label);
                    blocks.push(vec![pos + 1]);
                }
            }
        }
        SetPartition {
            m: labels.len(),
            blocks,
        }
    }

    /// Every element in one block.
    pub fn single_block(m: usize) -> Self {
        SetPartition {
            m,
            blocks: vec![(1..=m).collect()],
        }
    }

    pub fn singletons(m: usize) -> Self {
        SetPartition {
            m,
            blocks: (1..=m).map(|x| vec![x]).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// 0-based index of the block containing `x`.
    pub fn block_of(&self, x: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&x))
    }

    /// Restricted growth string: position `j-1` holds the 0-based block index
    /// of `j`.
    pub fn rgs(&self) -> Vec<usize> {
        let mut out = vec![0; self.m];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                out[x - 1] = b;
            }
        }
        out
    }

    /// True when every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        self.m == other.m
            && self.blocks.iter().all(|block| {
                let target = other.block_of(block[0]);
                block.iter().all(|&x| other.block_of(x) == target)
            })
    }
}

impl fmt::Display for SetPartition {
    /// `{1,3|2}`: blocks separated by `|`, elements by `,`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.blocks.iter().map(|b| b.iter().join(",")).join("|");
        write!(f, "{{{body}}}")
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::InvalidPartition(format!("expected {{...}}, got {s:?}")))?;
        let mut blocks = Vec::new();
        for block in inner.split('|') {
            let elems = block
                .split(',')
                .map(|e| {
                    e.parse::<usize>()
                        .map_err(|_| Error::InvalidPartition(format!("bad element {e:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(elems);
        }
        let m = blocks.iter().map(Vec::len).sum();
        SetPartition::new(m, blocks)
    }
}

/// Total order used for every partition listing: fewer blocks first, then
/// lexicographic on the canonical block lists.
fn listing_key(p: &SetPartition) -> (usize, &[Vec<usize>]) {
    (p.num_blocks(), p.blocks())
}

/// Every restricted growth string of length `m` with at most `max_blocks`
/// distinct labels, in lexicographic order.
fn restricted_growth_strings(m: usize, max_blocks: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut word = vec![0usize; m];
    fn rec(pos: usize, used: usize, max: usize, word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == word.len() {
            out.push(word.clone());
            return;
        }
        let limit = (used + 1).min(max);
        for label in 0..limit {
            word[pos] = label;
            rec(pos + 1, used.max(label + 1), max, word, out);
        }
    }
    if m > 0 && max_blocks > 0 {
        word[0] = 0;
        rec(1, 1, max_blocks, &mut word, &mut out);
    }
    out
}

/// All partitions of `{1..m}` into at most `max_blocks` blocks, listed with
/// fewer blocks first and lexicographically on block lists within a count.
pub fn enumerate_set_partitions(m: usize, max_blocks: usize) -> Result<Vec<SetPartition>> {
    if m == 0 || max_blocks == 0 {
        return Err(Error::InvalidConfig(format!(
            "set partitions need m >= 1 and max_blocks >= 1 (got {m}, {max_blocks})"
        )));
    }
    let mut parts: Vec<SetPartition> = restricted_growth_strings(m, max_blocks)
        .iter()
        .map(|rgs| SetPartition::from_labels(rgs))
        .collect();
    parts.sort_by(|a, b| listing_key(a).cmp(&listing_key(b)));
    Ok(parts)
}

/// A word `(i_1, …, i_m)` with letters in `1..=n`; equivalently a map
/// `[m] -> [n]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionWord {
    n: usize,
    values: Vec<usize>,
}

impl FunctionWord {
    pub fn new(values: Vec<usize>, n: usize) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| v == 0 || v > n) {
            return Err(Error::IndexOutOfRange(format!(
                "letter {bad} outside 1..{n}"
            )));
        }
        Ok(FunctionWord { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The `S_n` action on letters: `j ↦ w(j)`.
    pub fn relabel(&self, w: &Permutation) -> Result<FunctionWord> {
        if w.size() != self.n {
            return Err(Error::SizeMismatch(format!(
                "permutation of {} points acting on letters 1..{}",
                w.size(),
                self.n
            )));
        }
        Ok(FunctionWord {
            n: self.n,
            values: self.values.iter().map(|&v| w.apply(v - 1) + 1).collect(),
        })
    }

    /// Canonical orbit representative: letters renamed in order of first
    /// occurrence.
    pub fn canonical_representative(&self) -> FunctionWord {
        let mut order: Vec<usize> = Vec::new();
        let values = self
            .values
            .iter()
            .map(|v| match order.iter().position(|o| o == v) {
                Some(i) => i + 1,
                None => {
                    order.push(*v);
                    order.len()
                }
            })
            .collect();
        FunctionWord { n: self.n, values }
    }
}

impl fmt::Display for FunctionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.values.iter().join(","))
    }
}

/// `f_Λ`: sends `j` to the 1-based index of the block containing it.
pub fn canonical_function(partition: &SetPartition, n: usize) -> Result<FunctionWord> {
    if partition.num_blocks() > n {
        return Err(Error::TooManyBlocks {
            blocks: partition.num_blocks(),
            max: n,
        });
    }
    let values = partition.rgs().into_iter().map(|b| b + 1).collect();
    FunctionWord::new(values, n)
}

/// The nonempty fibers of `f` as a canonical partition.
pub fn fiber_partition(f: &FunctionWord) -> SetPartition {
    SetPartition::from_labels(f.values())
}

/// All partitions each of whose blocks is a union of blocks of `partition`,
/// `partition` itself first, finer before coarser.
pub fn coarsenings(partition: &SetPartition) -> Vec<SetPartition> {
    let k = partition.num_blocks();
    let mut out: Vec<SetPartition> = enumerate_set_partitions(k, k)
        .expect("a partition has at least one block")
        .into_iter()
        .map(|merge| {
            let blocks = merge
                .blocks()
                .iter()
                .map(|group| {
                    group
                        .iter()
                        .flat_map(|&b| partition.blocks()[b - 1].iter().copied())
                        .collect()
                })
                .collect();
            SetPartition::new(partition.m(), blocks).expect("unions of blocks partition [m]")
        })
        .collect();
    out.sort_by(|a, b| {
        b.num_blocks()
            .cmp(&a.num_blocks())
            .then_with(|| a.blocks().cmp(b.blocks()))
    });
    out
}

/// Stirling number of the second kind: partitions of `[m]` into exactly `k`
/// blocks.
pub fn stirling2(m: usize, k: usize) -> BigUint {
    if k > m {
        return BigUint::zero();
    }
    let mut row = vec![BigUint::zero(); k + 1];
    row[0] = BigUint::one();
    for i in 1..=m {
        for j in (1..=k.min(i)).rev() {
            row[j] = &row[j] * BigUint::from(j) + &row[j - 1];
        }
        row[0] = BigUint::zero();
    }
    row[k].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> SetPartition {
        s.parse().unwrap()
    }

    #[test]
    fn permutation_counts_and_signs() {
        let s3 = enumerate_permutations(3).unwrap();
        assert_eq!(s3.len(), 6);
        assert_eq!(s3.iter().map(|p| p.sign() as i32).sum::<i32>(), 0);
        let s1 = enumerate_permutations(1).unwrap();
        assert_eq!(s1.len(), 1);
        assert_eq!(s1[0].sign(), 1);
        assert!(enumerate_permutations(0).is_err());
    }

    #[test]
    fn s4_by_brute_force_inversion_count() {
        let s4 = enumerate_permutations(4).unwrap();
        assert_eq!(s4.len(), 24);
        let mut even = 0;
        for perm in &s4 {
            let im = perm.images();
            let inversions = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .filter(|&(i, j)| im[i] > im[j])
                .count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            assert_eq!(perm.sign(), sign, "{perm}");
            if sign == 1 {
                even += 1;
            }
        }
        assert_eq!(even, 12);
        // lexicographic one-line order
        let lines: Vec<_> = s4.iter().map(|p| p.images().to_vec()).collect();
        let mut sorted = lines.clone();
        sorted.sort();
        assert_eq!(lines, sorted);
    }

    #[test]
    fn cycle_notation() {
        let perm = Permutation::from_images(vec![1, 2, 0, 3]).unwrap();
        assert_eq!(perm.to_string(), "(1 2 3)(4)");
        assert_eq!(perm.sign(), 1);
        let t = Permutation::from_cycles(3, &[&[0, 2]]).unwrap();
        assert_eq!(t.to_string(), "(1 3)(2)");
        assert_eq!(t.sign(), -1);
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn set_partition_examples() {
        let parts: Vec<String> = enumerate_set_partitions(3, 2)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(parts, ["{1,2,3}", "{1|2,3}", "{1,2|3}", "{1,3|2}"]);
        assert_eq!(enumerate_set_partitions(1, 1).unwrap().len(), 1);
        assert_eq!(enumerate_set_partitions(4, 3).unwrap().len(), 14);
    }

    #[test]
    fn partition_parsing_and_validation() {
        let q = p("{ 2 | 3,1 }");
        assert_eq!(q.to_string(), "{1,3|2}");
        assert!("{1,1}".parse::<SetPartition>().is_err());
        assert!("{1|3}".parse::<SetPartition>().is_err());
        assert!("1,2".parse::<SetPartition>().is_err());
        assert!(SetPartition::new(2, vec![vec![1], vec![]]).is_err());
    }

    #[test]
    fn canonical_function_examples() {
        let f = canonical_function(&p("{1,3|2}"), 2).unwrap();
        assert_eq!(f.values(), &[1, 2, 1]);
        let f = canonical_function(&SetPartition::single_block(4), 1).unwrap();
        assert_eq!(f.values(), &[1, 1, 1, 1]);
        let f = canonical_function(&SetPartition::singletons(3), 3).unwrap();
        assert_eq!(f.values(), &[1, 2, 3]);
        assert_eq!(
            canonical_function(&SetPartition::singletons(3), 2),
            Err(Error::TooManyBlocks { blocks: 3, max: 2 })
        );
    }

    #[test]
    fn fiber_partition_examples() {
        let w = FunctionWord::new(vec![2, 1, 2], 2).unwrap();
        assert_eq!(fiber_partition(&w), p("{1,3|2}"));
        let w = FunctionWord::new(vec![3, 3, 3], 3).unwrap();
        assert_eq!(fiber_partition(&w), SetPartition::single_block(3));
        let w = FunctionWord::new(vec![3, 1, 2], 3).unwrap();
        assert_eq!(fiber_partition(&w), SetPartition::singletons(3));
        assert!(FunctionWord::new(vec![0], 2).is_err());
        assert!(FunctionWord::new(vec![3], 2).is_err());
    }

    #[test]
    fn coarsening_examples() {
        let c: Vec<String> = coarsenings(&p("{1|2}"))
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(c, ["{1|2}", "{1,2}"]);
        assert_eq!(
            coarsenings(&SetPartition::single_block(4)),
            vec![SetPartition::single_block(4)]
        );
        let all = coarsenings(&SetPartition::singletons(3));
        assert_eq!(all.len(), 5);
        let mut sorted = all.clone();
        sorted.sort();
        let mut expected = enumerate_set_partitions(3, 3).unwrap();
        expected.sort();
        assert_eq!(sorted, expected);
        assert!(all.iter().all(|c| SetPartition::singletons(3).refines(c)));
    }

    #[test]
    fn coarsenings_match_refinement_filter() {
        for m in 1..=5 {
            let all = enumerate_set_partitions(m, m).unwrap();
            for fine in &all {
                let mut by_filter: Vec<_> =
                    all.iter().filter(|c| fine.refines(c)).cloned().collect();
                let mut listed = coarsenings(fine);
                assert_eq!(listed[0], *fine);
                by_filter.sort();
                listed.sort();
                assert_eq!(listed, by_filter);
            }
        }
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling2(3, 2), BigUint::from(3u32));
        assert_eq!(stirling2(5, 1), BigUint::from(1u32));
        assert_eq!(stirling2(4, 2), BigUint::from(7u32));
        assert_eq!(stirling2(3, 4), BigUint::zero());
        assert_eq!(stirling2(3, 0), BigUint::zero());
        assert_eq!(stirling2(0, 0), BigUint::one());
        for m in 1..=6 {
            for k in 1..=m {
                let count = enumerate_set_partitions(m, m)
                    .unwrap()
                    .iter()
                    .filter(|p| p.num_blocks() == k)
                    .count();
                assert_eq!(stirling2(m, k), BigUint::from(count));
            }
        }
    }

    #[test]
    fn fiber_canonical_roundtrip_exhaustive() {
        for m in 1..=6 {
            for n in 1..=4 {
                for lambda in enumerate_set_partitions(m, n).unwrap() {
                    let f = canonical_function(&lambda, n).unwrap();
                    assert_eq!(fiber_partition(&f), lambda);
                }
            }
        }
    }

    #[test]
    fn orbit_representatives_are_canonical_functions() {
        for m in 1..=5 {
            for n in 1..=4 {
                let sn = enumerate_permutations(n).unwrap();
                let mut orbit_mins = std::collections::BTreeSet::new();
                for values in (0..m).map(|_| 1..=n).multi_cartesian_product() {
                    let w = FunctionWord::new(values, n).unwrap();
                    let orbit_min = sn.iter().map(|g| w.relabel(g).unwrap()).min().unwrap();
                    assert_eq!(orbit_min, w.canonical_representative());
                    assert_eq!(
                        w.canonical_representative(),
                        canonical_function(&fiber_partition(&w), n).unwrap()
                    );
                    orbit_mins.insert(orbit_min);
                }
                let expected: std::collections::BTreeSet<_> = enumerate_set_partitions(m, n)
                    .unwrap()
                    .iter()
                    .map(|l| canonical_function(l, n).unwrap())
                    .collect();
                assert_eq!(orbit_mins, expected);
            }
        }
    }

    fn arb_perm(k: usize) -> impl Strategy<Value = Permutation> {
        Just((0..k).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn sign_is_multiplicative((a, b) in (1usize..8).prop_flat_map(|k| (arb_perm(k), arb_perm(k)))) {
            let ab = a.compose(&b).unwrap();
            prop_assert_eq!(ab.sign(), a.sign() * b.sign());
            prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        }
    }
}

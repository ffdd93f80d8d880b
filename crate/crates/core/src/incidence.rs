//! Incidence structures and exact verification of design properties.
//!
//! Every verifier counts by brute force over the whole structure; there is
//! no sampling. Failures report the lexicographically least offending tuple.

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Points `0..v` together with a list of blocks.
///
/// Blocks are kept as sorted point lists and mirrored as bitmaps in both
/// directions: one bitmap per point over the blocks containing it, one per
/// block over its points.
#[derive(Debug, Clone)]
pub struct IncidenceStructure {
    v: usize,
    blocks: Vec<Vec<usize>>,
    point_rows: Vec<BitSet>,
    block_rows: Vec<BitSet>,
}

impl PartialEq for IncidenceStructure {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.blocks == other.blocks
    }
}

impl Eq for IncidenceStructure {}

impl IncidenceStructure {
    pub fn new(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut blocks = blocks;
        for (i, block) in blocks.iter_mut().enumerate() {
            block.sort_unstable();
            block.dedup();
            if block.is_empty() || block.last().is_some_and(|&x| x >= v) {
                return Err(Error::BadBlock { block: i, v });
            }
        }
        let b = blocks.len();
        let mut point_rows = vec![BitSet::new(b); v];
        let block_rows = blocks
            .iter()
            .enumerate()
            .map(|(i, block)| {
                for &x in block {
                    point_rows[x].insert(i);
                }
                BitSet::from_indices(v, block.iter().copied())
            })
            .collect();
        Ok(Self {
            v,
            blocks,
            point_rows,
            block_rows,
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    /// Bitmap over blocks containing point `x`.
    pub fn point_row(&self, x: usize) -> &BitSet {
        &self.point_rows[x]
    }

    /// Bitmap over the points of block `i`.
    pub fn block_row(&self, i: usize) -> &BitSet {
        &self.block_rows[i]
    }

    pub fn incident(&self, x: usize, block: usize) -> bool {
        self.block_rows[block].contains(x)
    }

    pub fn replication(&self, x: usize) -> usize {
        self.point_rows[x].count()
    }

    /// Number of blocks containing both `x` and `y`.
    #[inline]
    pub fn pair_count(&self, x: usize, y: usize) -> usize {
        self.point_rows[x].intersection_count(&self.point_rows[y])
    }

    /// Number of points common to blocks `i` and `j`.
    #[inline]
    pub fn block_intersection(&self, i: usize, j: usize) -> usize {
        self.block_rows[i].intersection_count(&self.block_rows[j])
    }

    /// Common block size, or the first block whose size differs from block 0.
    pub fn uniform_block_size(&self) -> Result<usize> {
        let k = self.blocks.first().ok_or(Error::Empty)?.len();
        match self.blocks.iter().position(|b| b.len() != k) {
            Some(i) => Err(Error::NotUniform {
                block: i,
                size: self.blocks[i].len(),
                expected: k,
            }),
            None => Ok(k),
        }
    }

    /// Number of incident (point, block) pairs.
    pub fn flag_count(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Returns `λ` if every `t`-subset of points lies in exactly `λ` blocks.
    ///
    /// Only `t ∈ {1, 2}` is supported. The reference count is taken from the
    /// least `t`-subset; the error names the least subset that disagrees.
    pub fn verify_tdesign(&self, t: usize) -> Result<usize> {
        if self.v == 0 || self.blocks.is_empty() {
            return Err(Error::Empty);
        }
        let k = self.uniform_block_size()?;
        if !(1..=2).contains(&t) {
            return Err(Error::InvalidArgument(format!("t = {t} not supported")));
        }
        if t > k || t > self.v {
            return Err(Error::TooLargeT { t, k });
        }
        self.verify_balance(t)
    }

    /// The counting half of [`verify_tdesign`](Self::verify_tdesign),
    /// without the block-size checks.
    pub fn verify_balance(&self, t: usize) -> Result<usize> {
        if self.v < t.max(1) || self.blocks.is_empty() {
            return Err(Error::Empty);
        }
        if !(1..=2).contains(&t) {
            return Err(Error::InvalidArgument(format!("t = {t} not supported")));
        }
        if t == 1 {
            let expected = self.replication(0);
            return match (1..self.v).find(|&x| self.replication(x) != expected) {
                Some(x) => Err(Error::NotBalanced {
                    tuple: vec![x],
                    expected,
                    found: self.replication(x),
                }),
                None => Ok(expected),
            };
        }
        let expected = self.pair_count(0, 1);
        let witness = (0..self.v).into_par_iter().find_map_first(|x| {
            (x + 1..self.v)
                .find(|&y| self.pair_count(x, y) != expected)
                .map(|y| (x, y))
        });
        match witness {
            Some((x, y)) => Err(Error::NotBalanced {
                tuple: vec![x, y],
                expected,
                found: self.pair_count(x, y),
            }),
            None => Ok(expected),
        }
    }

    /// A 2-design with as many blocks as points.
    pub fn is_symmetric(&self) -> bool {
        self.b() == self.v && self.verify_tdesign(2).is_ok()
    }

    /// `(v, k, λ)` when the structure is a 2-design with uniform block size.
    pub fn parameters(&self) -> Result<(usize, usize, usize)> {
        let lambda = self.verify_tdesign(2)?;
        Ok((self.v, self.uniform_block_size()?, lambda))
    }

    /// Least pair of identical blocks, if any.
    pub fn repeated_block(&self) -> Option<(usize, usize)> {
        let mut order: Vec<usize> = (0..self.b()).collect();
        order.sort_by(|&i, &j| self.blocks[i].cmp(&self.blocks[j]).then(i.cmp(&j)));
        order
            .windows(2)
            .filter(|w| self.blocks[w[0]] == self.blocks[w[1]])
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
            .min()
    }

    /// Transpose of the incidence relation: point `i` of the dual is block `i`,
    /// and block `x` of the dual lists the blocks through point `x`.
    pub fn dual(&self) -> Result<Self> {
        if let Some((i, j)) = self.repeated_block() {
            return Err(Error::RepeatedBlock(i, j));
        }
        if let Some(x) = (0..self.v).find(|&x| self.point_rows[x].is_empty()) {
            return Err(Error::UncoveredPoint(x));
        }
        let blocks = self.point_rows.iter().map(|row| row.iter().collect()).collect();
        Self::new(self.b(), blocks)
    }

    pub fn complement(&self) -> Result<Self> {
        if let Some(i) = self.blocks.iter().position(|b| b.len() == self.v) {
            return Err(Error::FullBlock(i));
        }
        let blocks = self
            .block_rows
            .iter()
            .map(|row| (0..self.v).filter(|&x| !row.contains(x)).collect())
            .collect();
        Self::new(self.v, blocks)
    }

    /// Sorted copy of the block list; equal for structures that differ only
    /// in block order.
    pub fn sorted_blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = self.blocks.clone();
        blocks.sort();
        blocks
    }

    /// Applies a point relabeling `x -> map[x]`.
    pub fn relabel(&self, map: &[usize]) -> Result<Self> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| map[x]).collect())
            .collect();
        Self::new(self.v, blocks)
    }
}

/// Partition of the block indices of a design into parallel classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    classes: Vec<Vec<usize>>,
}

impl Resolution {
    pub fn new(classes: Vec<Vec<usize>>) -> Self {
        Self { classes }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Number of parallel classes, `r`.
    pub fn r(&self) -> usize {
        self.classes.len()
    }

    /// Blocks per class, `s`.
    pub fn s(&self) -> usize {
        self.classes.first().map_or(0, Vec::len)
    }

    /// `class_of[block]` for every block index.
    pub fn class_of(&self, b: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; b];
        for (c, class) in self.classes.iter().enumerate() {
            for &blk in class {
                if blk < b {
                    out[blk] = c;
                }
            }
        }
        out
    }
}

/// Checks that every class partitions the point set and all classes are
/// equally large.
pub fn verify_resolution(d: &IncidenceStructure, res: &Resolution) -> Result<()> {
    let mut seen = vec![0usize; d.b()];
    for class in res.classes() {
        for &blk in class {
            if blk >= d.b() {
                return Err(Error::ResolutionCover);
            }
            seen[blk] += 1;
        }
    }
    if seen.iter().any(|&c| c != 1) {
        return Err(Error::ResolutionCover);
    }
    let s = res.s();
    if let Some(c) = res.classes().iter().position(|cl| cl.len() != s) {
        return Err(Error::UnequalClass {
            class: c,
            size: res.classes()[c].len(),
            expected: s,
        });
    }
    for (c, class) in res.classes().iter().enumerate() {
        let mut cover = vec![0usize; d.v()];
        for &blk in class {
            for &x in d.block(blk) {
                cover[x] += 1;
            }
        }
        if let Some(x) = cover.iter().position(|&n| n != 1) {
            return Err(Error::NotParallel {
                class: c,
                point: x,
                count: cover[x],
            });
        }
    }
    Ok(())
}

/// Partition of the points of a transversal design into groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalGrouping {
    groups: Vec<Vec<usize>>,
}

impl TransversalGrouping {
    pub fn new(groups: Vec<Vec<usize>>) -> Self {
        Self { groups }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group_of(&self, v: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; v];
        for (g, group) in self.groups.iter().enumerate() {
            for &x in group {
                if x < v {
                    out[x] = g;
                }
            }
        }
        out
    }
}

/// Returns `(k2, λ2)` when `d` is a transversal design for the grouping:
/// uniform blocks, each meeting every group at most once, and each pair of
/// points from different groups in exactly `λ2` blocks.
pub fn verify_transversal(d: &IncidenceStructure, g: &TransversalGrouping) -> Result<(usize, usize)> {
    let v = d.v();
    let mut count = vec![0usize; v];
    for group in g.groups() {
        for &x in group {
            if x >= v {
                return Err(Error::GroupCover);
            }
            count[x] += 1;
        }
    }
    let size = g.groups().first().map_or(0, Vec::len);
    if count.iter().any(|&c| c != 1) || g.groups().iter().any(|gr| gr.len() != size) {
        return Err(Error::GroupCover);
    }
    let k2 = d.uniform_block_size()?;
    let group_of = g.group_of(v);
    for (i, block) in d.blocks().iter().enumerate() {
        let mut first_in_group = vec![usize::MAX; g.groups().len()];
        for &x in block {
            let gr = group_of[x];
            if first_in_group[gr] != usize::MAX {
                return Err(Error::GroupClash {
                    block: i,
                    group: gr,
                    first: first_in_group[gr],
                    second: x,
                });
            }
            first_in_group[gr] = x;
        }
    }
    let mut expected = None;
    for x in 0..v {
        for y in x + 1..v {
            if group_of[x] == group_of[y] {
                continue;
            }
            let c = d.pair_count(x, y);
            match expected {
                None => expected = Some(c),
                Some(e) if e != c => {
                    return Err(Error::NotBalanced {
                        tuple: vec![x, y],
                        expected: e,
                        found: c,
                    })
                }
                _ => {}
            }
        }
    }
    Ok((k2, expected.unwrap_or(0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> IncidenceStructure {
        let blocks = (0..7).map(|i| vec![i, (i + 1) % 7, (i + 3) % 7]).collect();
        IncidenceStructure::new(7, blocks).unwrap()
    }

    #[test]
    fn fano_is_symmetric() {
        let f = fano();
        assert_eq!(f.verify_tdesign(2), Ok(1));
        assert_eq!(f.verify_tdesign(1), Ok(3));
        assert!(f.is_symmetric());
        for i in 0..7 {
            for j in i + 1..7 {
                assert_eq!(f.block_intersection(i, j), 1);
            }
        }
    }

    #[test]
    fn single_block_fails_with_witness() {
        let d = IncidenceStructure::new(4, vec![vec![0, 1]]).unwrap();
        assert_eq!(
            d.verify_tdesign(1),
            Err(Error::NotBalanced {
                tuple: vec![2],
                expected: 1,
                found: 0
            })
        );
    }

    #[test]
    fn verify_errors() {
        let d = IncidenceStructure::new(4, vec![vec![0, 1], vec![1, 2, 3]]).unwrap();
        assert!(matches!(d.verify_tdesign(2), Err(Error::NotUniform { block: 1, .. })));
        let e = IncidenceStructure::new(3, vec![]).unwrap();
        assert_eq!(e.verify_tdesign(1), Err(Error::Empty));
        let k1 = IncidenceStructure::new(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(k1.verify_tdesign(2), Err(Error::TooLargeT { t: 2, k: 1 }));
        assert!(IncidenceStructure::new(3, vec![vec![0, 3]]).is_err());
        assert!(IncidenceStructure::new(3, vec![vec![]]).is_err());
    }

    #[test]
    fn minus_one_block_not_symmetric() {
        let f = fano();
        let fewer = IncidenceStructure::new(7, f.blocks()[1..].to_vec()).unwrap();
        assert!(!fewer.is_symmetric());
    }

    #[test]
    fn dual_and_complement() {
        let f = fano();
        let d = f.dual().unwrap();
        assert_eq!(d.verify_tdesign(2), Ok(1));
        assert_eq!(d.dual().unwrap(), f);
        let c = f.complement().unwrap();
        assert_eq!(c.parameters(), Ok((7, 4, 2)));
        assert_eq!(c.complement().unwrap(), f);

        let rep = IncidenceStructure::new(3, vec![vec![0, 1], vec![2], vec![0, 1]]).unwrap();
        assert_eq!(rep.dual(), Err(Error::RepeatedBlock(0, 2)));
        let full = IncidenceStructure::new(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(full.complement(), Err(Error::FullBlock(0)));
        let gap = IncidenceStructure::new(3, vec![vec![0, 1]]).unwrap();
        assert_eq!(gap.dual(), Err(Error::UncoveredPoint(2)));
    }

    #[test]
    fn resolution_checks() {
        // K4 one-factorisation: 2-(4,2,1) with three classes.
        let d = IncidenceStructure::new(
            4,
            vec![vec![0, 1], vec![2, 3], vec![0, 2], vec![1, 3], vec![0, 3], vec![1, 2]],
        )
        .unwrap();
        let good = Resolution::new(vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
        assert_eq!(verify_resolution(&d, &good), Ok(()));
        let swapped = Resolution::new(vec![vec![0, 2], vec![1, 3], vec![4, 5]]);
        assert!(matches!(
            verify_resolution(&d, &swapped),
            Err(Error::NotParallel { class: 0, .. })
        ));
        let partial = Resolution::new(vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(verify_resolution(&d, &partial), Err(Error::ResolutionCover));
        let uneven = Resolution::new(vec![vec![0, 1, 2], vec![3], vec![4, 5]]);
        assert!(matches!(
            verify_resolution(&d, &uneven),
            Err(Error::UnequalClass { class: 1, .. })
        ));
    }

    #[test]
    fn transversal_clash() {
        let d = IncidenceStructure::new(4, vec![vec![0, 1], vec![0, 2]]).unwrap();
        let g = TransversalGrouping::new(vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(
            verify_transversal(&d, &g),
            Err(Error::GroupClash {
                block: 0,
                group: 0,
                first: 0,
                second: 1
            })
        );
    }
}

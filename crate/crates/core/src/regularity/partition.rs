//! Ordered vertex partitions with the equitability and refinement relations
//! the regularity loops rely on.

use serde::{Deserialize, Serialize};

use super::RegularityError;

/// Ordered list of disjoint vertex blocks covering `0..n`. Blocks keep their
/// vertices sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, RegularityError> {
        let mut seen = vec![false; n];
        let mut blocks = blocks;
        for block in blocks.iter_mut() {
            block.sort_unstable();
            for &v in block.iter() {
                if v >= n || seen[v] {
                    return Err(RegularityError::NotAPartition);
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(RegularityError::NotAPartition);
        }
        Ok(Partition { n, blocks })
    }

    /// Contiguous equipartition of `0..n` into `k` blocks, sizes differing by
    /// at most one, larger blocks first.
    pub fn contiguous(n: usize, k: usize) -> Self {
        assert!(k >= 1);
        let base = n / k;
        let extra = n % k;
        let mut blocks = Vec::with_capacity(k);
        let mut next = 0;
        for i in 0..k {
            let size = base + usize::from(i < extra);
            blocks.push((next..next + size).collect());
            next += size;
        }
        Partition { n, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    /// Index of the block containing each vertex.
    pub fn block_index(&self) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &v in block {
                idx[v] = b;
            }
        }
        idx
    }

    /// Sizes differ by at most one across all blocks.
    pub fn is_equitable(&self) -> bool {
        let min = self.blocks.iter().map(Vec::len).min().unwrap_or(0);
        let max = self.blocks.iter().map(Vec::len).max().unwrap_or(0);
        max - min <= 1
    }

    /// Every block of `self` is contained in a block of `coarse`.
    pub fn refines(&self, coarse: &Partition) -> bool {
        if self.n != coarse.n {
            return false;
        }
        let coarse_idx = coarse.block_index();
        self.blocks.iter().all(|block| {
            block
                .first()
                .map(|&v0| block.iter().all(|&v| coarse_idx[v] == coarse_idx[v0]))
                .unwrap_or(true)
        })
    }

    /// Equitable refinement: refines `coarse`, every coarse block holds the
    /// same number of fine blocks, and fine blocks inside one coarse block
    /// differ in size by at most one.
    pub fn is_equitable_refinement_of(&self, coarse: &Partition) -> bool {
        if !self.refines(coarse) {
            return false;
        }
        let coarse_idx = coarse.block_index();
        let mut counts = vec![0usize; coarse.len()];
        let mut sizes: Vec<Vec<usize>> = vec![Vec::new(); coarse.len()];
        for block in &self.blocks {
            if let Some(&v0) = block.first() {
                counts[coarse_idx[v0]] += 1;
                sizes[coarse_idx[v0]].push(block.len());
            }
        }
        // Empty fine blocks belong to no coarse block; attribute them nowhere
        // and require the per-block counts of nonempty fine blocks to agree.
        let nonzero: Vec<usize> = counts.iter().copied().filter(|&c| c > 0).collect();
        if nonzero.windows(2).any(|w| w[0] != w[1]) {
            return false;
        }
        sizes.iter().all(|s| {
            let min = s.iter().copied().min().unwrap_or(0);
            let max = s.iter().copied().max().unwrap_or(0);
            max - min <= 1
        })
    }

    /// Splits every block along the given cut sets (Venn refinement). Each
    /// cut splits each block it meets into "inside" and "outside" halves.
    pub fn split_by(&self, cuts: &[Vec<usize>]) -> Partition {
        let mut in_cut = vec![vec![false; self.n]; cuts.len()];
        for (c, cut) in cuts.iter().enumerate() {
            for &v in cut {
                in_cut[c][v] = true;
            }
        }
        let mut blocks = Vec::new();
        for block in &self.blocks {
            let mut cells: Vec<Vec<usize>> = vec![block.clone()];
            for flags in &in_cut {
                let mut next = Vec::new();
                for cell in cells {
                    let (inside, outside): (Vec<usize>, Vec<usize>) =
                        cell.iter().partition(|&&v| flags[v]);
                    if !inside.is_empty() {
                        next.push(inside);
                    }
                    if !outside.is_empty() {
                        next.push(outside);
                    }
                }
                cells = next;
            }
            blocks.extend(cells);
        }
        Partition { n: self.n, blocks }
    }

    /// Rebalances into a globally equitable partition with the same number of
    /// blocks, moving lowest-index vertices out of over-full blocks first.
    pub fn equalized(&self) -> Partition {
        let k = self.blocks.len();
        if k == 0 {
            return self.clone();
        }
        let base = self.n / k;
        let extra = self.n % k;
        // Largest blocks keep the larger target size, ties by block index.
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(self.blocks[i].len()), i));
        let mut target = vec![base; k];
        for &i in order.iter().take(extra) {
            target[i] = base + 1;
        }
        let mut blocks = self.blocks.clone();
        let mut spare: Vec<usize> = Vec::new();
        for i in 0..k {
            while blocks[i].len() > target[i] {
                spare.push(blocks[i].remove(0));
            }
        }
        spare.sort_unstable();
        for i in 0..k {
            while blocks[i].len() < target[i] {
                blocks[i].push(spare.remove(0));
            }
            blocks[i].sort_unstable();
        }
        Partition { n: self.n, blocks }
    }

    /// Splits every block contiguously into `arity` near-equal cells; the
    /// result is an equitable refinement of `self`.
    pub fn subdivide(&self, arity: usize) -> Partition {
        assert!(arity >= 1);
        let mut blocks = Vec::with_capacity(self.blocks.len() * arity);
        for block in &self.blocks {
            let base = block.len() / arity;
            let extra = block.len() % arity;
            let mut next = 0;
            for i in 0..arity {
                let size = base + usize::from(i < extra);
                blocks.push(block[next..next + size].to_vec());
                next += size;
            }
        }
        Partition { n: self.n, blocks }
    }

    /// Turns `self` into an equitable refinement of `coarse`: every coarse
    /// block ends up with exactly `s` cells (s = max cell count over coarse
    /// blocks), sizes within a block differing by at most one. Vertices move
    /// only within their coarse block, lowest indices first.
    pub fn equalized_within(&self, coarse: &Partition) -> Partition {
        debug_assert!(self.refines(coarse));
        let coarse_idx = coarse.block_index();
        let mut cells_of: Vec<Vec<Vec<usize>>> = vec![Vec::new(); coarse.len()];
        for block in &self.blocks {
            if let Some(&v0) = block.first() {
                cells_of[coarse_idx[v0]].push(block.clone());
            }
        }
        let s = cells_of.iter().map(Vec::len).max().unwrap_or(1).max(1);
        let mut blocks = Vec::new();
        for (ci, mut cells) in cells_of.into_iter().enumerate() {
            if cells.is_empty() && coarse.block(ci).is_empty() {
                for _ in 0..s {
                    blocks.push(Vec::new());
                }
                continue;
            }
            // Split the largest cells until we have exactly s cells.
            while cells.len() < s {
                let (idx, _) = cells
                    .iter()
                    .enumerate()
                    .max_by_key(|(i, c)| (c.len(), std::cmp::Reverse(*i)))
                    .expect("at least one cell");
                let cell = cells.remove(idx);
                let half = cell.len() / 2;
                let (a, b) = cell.split_at(half.max(1).min(cell.len()));
                cells.push(a.to_vec());
                cells.push(b.to_vec());
            }
            // Equalize sizes: targets b/s rounded, moving lowest indices.
            let total: usize = cells.iter().map(Vec::len).sum();
            let base = total / s;
            let extra = total % s;
            let mut order: Vec<usize> = (0..s).collect();
            order.sort_by_key(|&i| (std::cmp::Reverse(cells[i].len()), i));
            let mut target = vec![base; s];
            for &i in order.iter().take(extra) {
                target[i] = base + 1;
            }
            let mut spare = Vec::new();
            for i in 0..s {
                while cells[i].len() > target[i] {
                    spare.push(cells[i].remove(0));
                }
            }
            spare.sort_unstable();
            for i in 0..s {
                while cells[i].len() < target[i] {
                    cells[i].push(spare.remove(0));
                }
                cells[i].sort_unstable();
            }
            blocks.extend(cells);
        }
        Partition { n: self.n, blocks }
    }
}

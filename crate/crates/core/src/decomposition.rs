//! Box decompositions of the unknown grid into overlapping subdomains.
//!
//! A `p × p` layout splits the `n - 1` cells of each axis into boxes of
//! `s = (n-1)/p` cells. In the nonoverlapping [`Partition`] a node on an
//! interface between two boxes belongs to the lower-indexed box.
//!
//! Overlap is counted in node layers shared by two neighbouring subdomains:
//! with `δ` layers each owned box grows by `⌈δ/2⌉` nodes towards lower indices
//! and `⌊δ/2⌋` towards higher ones. `δ = 2m` is the symmetric growth of the
//! owned box by `m` layers, `δ = 2m + 1` the growth of the closed box (owned
//! nodes plus its lower interface) by `m` layers. Any `δ ≤ s` keeps every node
//! in at most two subdomains per axis, four in 2D.
//!
//! [`OverlapMode::Max`] grows closed boxes by the most layers for which no
//! node lies in more than four subdomains, `δ = 2⌊(s-1)/2⌋ + 1` (three layers
//! for `s = 4`, fifteen for `s = 16`).

use serde::{Deserialize, Serialize};

use crate::discretization::Grid;
use crate::error::{check_len, Error, Result};
use crate::linalg::{Scalar, SparseMatrix};

/// Largest number of subdomains any node may belong to.
pub const MAX_MULTIPLICITY: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverlapMode {
    /// Closed boxes grown by `⌊(s-1)/2⌋` layers, `2⌊(s-1)/2⌋ + 1` shared layers.
    Max,
    /// Explicit number of shared node layers between neighbouring subdomains.
    #[serde(untagged)]
    Layers(usize),
}

/// Choice of the diagonal weights `D_i` with `Σ R_iᵀ D_i R_i = I`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionOfUnity {
    /// `1 / multiplicity` on every node of the subdomain.
    #[default]
    Multiplicity,
    /// 1 on nodes owned by the subdomain in the nonoverlapping partition, 0 elsewhere.
    Boolean,
}

/// Inclusive node range along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl Span {
    pub fn len(&self) -> usize {
        self.hi + 1 - self.lo
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: usize) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Nonoverlapping assignment of every unknown to one box.
#[derive(Debug, Clone)]
pub struct Partition {
    grid: Grid,
    boxes_per_dim: usize,
    box_cells: usize,
    /// Owned node range of each box along one axis.
    spans: Vec<Span>,
}

impl Partition {
    pub fn new(grid: &Grid, boxes_per_dim: usize) -> Result<Self> {
        let cells = grid.cells();
        if boxes_per_dim == 0 || cells % boxes_per_dim != 0 {
            return Err(Error::InvalidDecomposition(format!(
                "{cells} cells per axis cannot be split into {boxes_per_dim} equal boxes"
            )));
        }
        let s = cells / boxes_per_dim;
        let (ulo, uhi) = grid.unknown_range();
        let mut spans = Vec::with_capacity(boxes_per_dim);
        for b in 0..boxes_per_dim {
            let lo = if b == 0 { 0 } else { b * s + 1 };
            let hi = (b + 1) * s;
            let span = Span {
                lo: lo.max(ulo),
                hi: hi.min(uhi),
            };
            if span.lo > span.hi {
                return Err(Error::InvalidDecomposition(format!(
                    "box {b} owns no unknowns; use fewer boxes"
                )));
            }
            spans.push(span);
        }
        Ok(Self {
            grid: *grid,
            boxes_per_dim,
            box_cells: s,
            spans,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn boxes_per_dim(&self) -> usize {
        self.boxes_per_dim
    }

    pub fn len(&self) -> usize {
        self.boxes_per_dim * self.boxes_per_dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Cells per box edge, `H_sub / h`.
    pub fn box_cells(&self) -> usize {
        self.box_cells
    }

    pub fn owned_spans(&self, box_index: usize) -> (Span, Span) {
        let p = self.boxes_per_dim;
        (self.spans[box_index % p], self.spans[box_index / p])
    }

    /// Sorted unknown indices owned by a box.
    pub fn owned(&self, box_index: usize) -> Vec<usize> {
        let (sx, sy) = self.owned_spans(box_index);
        box_indices(&self.grid, sx, sy)
    }

    pub fn sets(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|b| self.owned(b)).collect()
    }

    /// Shared layers selected by [`OverlapMode::Max`].
    pub fn max_overlap(&self) -> usize {
        2 * ((self.box_cells - 1) / 2) + 1
    }

    pub fn extend(&self, overlap: OverlapMode, pou: PartitionOfUnity) -> Result<Decomposition> {
        Decomposition::from_partition(self, overlap, pou)
    }
}

fn box_indices(grid: &Grid, sx: Span, sy: Span) -> Vec<usize> {
    let mut out = Vec::with_capacity(sx.len() * sy.len());
    for j in sy.lo..=sy.hi {
        for i in sx.lo..=sx.hi {
            out.push(grid.unknown_index(i, j).unwrap());
        }
    }
    out
}

/// Overlapping subdomains `Ω_i` with restriction index sets and weights `D_i`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    grid: Grid,
    boxes_per_dim: usize,
    box_cells: usize,
    overlap: usize,
    pou: PartitionOfUnity,
    /// Sorted global unknown indices of each subdomain (the rows of `R_i`).
    subdomains: Vec<Vec<usize>>,
    weights: Vec<Vec<f64>>,
    multiplicity: Vec<u8>,
}

impl Decomposition {
    pub fn new(
        grid: &Grid,
        boxes_per_dim: usize,
        overlap: OverlapMode,
        pou: PartitionOfUnity,
    ) -> Result<Self> {
        Partition::new(grid, boxes_per_dim)?.extend(overlap, pou)
    }

    pub fn from_partition(
        partition: &Partition,
        overlap: OverlapMode,
        pou: PartitionOfUnity,
    ) -> Result<Self> {
        let grid = partition.grid;
        let delta = match overlap {
            OverlapMode::Max => partition.max_overlap(),
            OverlapMode::Layers(d) => d,
        };
        let (ulo, uhi) = grid.unknown_range();
        let grow_low = delta.div_ceil(2);
        let grow_high = delta / 2;
        let extended: Vec<Span> = partition
            .spans
            .iter()
            .map(|s| Span {
                lo: s.lo.saturating_sub(grow_low).max(ulo),
                hi: (s.hi + grow_high).min(uhi),
            })
            .collect();

        let p = partition.boxes_per_dim;
        let total = grid.num_unknowns();
        let mut subdomains = Vec::with_capacity(p * p);
        let mut multiplicity = vec![0u8; total];
        for by in 0..p {
            for bx in 0..p {
                let idx = box_indices(&grid, extended[bx], extended[by]);
                for &g in &idx {
                    multiplicity[g] = multiplicity[g].saturating_add(1);
                }
                subdomains.push(idx);
            }
        }
        if let Some((g, &m)) = multiplicity
            .iter()
            .enumerate()
            .find(|(_, &m)| m as usize > MAX_MULTIPLICITY)
        {
            return Err(Error::InvalidDecomposition(format!(
                "overlap {delta} places unknown {g} in {m} subdomains (at most {MAX_MULTIPLICITY} allowed)"
            )));
        }

        let weights = match pou {
            PartitionOfUnity::Multiplicity => subdomains
                .iter()
                .map(|idx| idx.iter().map(|&g| 1.0 / multiplicity[g] as f64).collect())
                .collect(),
            PartitionOfUnity::Boolean => subdomains
                .iter()
                .enumerate()
                .map(|(b, idx)| {
                    let (ox, oy) = partition.owned_spans(b);
                    idx.iter()
                        .map(|&g| {
                            let (i, j) = grid.node_of(g);
                            if ox.contains(i) && oy.contains(j) {
                                1.0
                            } else {
                                0.0
                            }
                        })
                        .collect()
                })
                .collect(),
        };

        Ok(Self {
            grid,
            boxes_per_dim: p,
            box_cells: partition.box_cells,
            overlap: delta,
            pou,
            subdomains,
            weights,
            multiplicity,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.subdomains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subdomains.is_empty()
    }

    pub fn boxes_per_dim(&self) -> usize {
        self.boxes_per_dim
    }

    pub fn box_cells(&self) -> usize {
        self.box_cells
    }

    /// Shared node layers between neighbouring subdomains.
    pub fn overlap(&self) -> usize {
        self.overlap
    }

    pub fn partition_of_unity(&self) -> PartitionOfUnity {
        self.pou
    }

    pub fn num_unknowns(&self) -> usize {
        self.multiplicity.len()
    }

    pub fn indices(&self, i: usize) -> &[usize] {
        &self.subdomains[i]
    }

    pub fn weights(&self, i: usize) -> &[f64] {
        &self.weights[i]
    }

    /// Number of subdomains containing each unknown.
    pub fn multiplicity(&self) -> &[u8] {
        &self.multiplicity
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        }
    }

    /// `R_i x`
    pub fn restrict<T: Scalar>(&self, i: usize, x: &[T]) -> Result<Vec<T>> {
        self.check_index(i)?;
        check_len(self.num_unknowns(), x.len())?;
        Ok(self.subdomains[i].iter().map(|&g| x[g]).collect())
    }

    /// `R_iᵀ y`
    pub fn prolong<T: Scalar>(&self, i: usize, y: &[T]) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); self.num_unknowns()];
        self.prolong_add(i, y, &mut out)?;
        Ok(out)
    }

    /// `out += R_iᵀ y`
    pub fn prolong_add<T: Scalar>(&self, i: usize, y: &[T], out: &mut [T]) -> Result<()> {
        self.check_index(i)?;
        check_len(self.subdomains[i].len(), y.len())?;
        check_len(self.num_unknowns(), out.len())?;
        for (&g, &v) in self.subdomains[i].iter().zip(y) {
            out[g] += v;
        }
        Ok(())
    }

    /// `R_i A R_iᵀ`
    pub fn local_matrix<T: Scalar>(&self, i: usize, a: &SparseMatrix<T>) -> Result<SparseMatrix<T>> {
        self.check_index(i)?;
        check_len(self.num_unknowns(), a.nrows())?;
        a.principal_submatrix(&self.subdomains[i])
    }

    /// Diagonal of `Σ_i R_iᵀ D_i R_i`.
    pub fn weight_sum(&self) -> Vec<f64> {
        let mut sum = vec![0.0; self.num_unknowns()];
        for (idx, w) in self.subdomains.iter().zip(&self.weights) {
            for (&g, &v) in idx.iter().zip(w) {
                sum[g] += v;
            }
        }
        sum
    }
}

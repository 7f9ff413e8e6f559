//! Fill-reducing symmetric ordering by level-structure nested dissection.

use std::collections::VecDeque;

/// Symmetric adjacency (no self loops) in compressed form.
#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl Graph {
    /// Graph of `A + Aᵀ` from a square CSR pattern.
    pub fn from_pattern(n: usize, row_offsets: &[usize], col_indices: &[usize]) -> Self {
        let mut edges: Vec<Vec<usize>> = vec![Vec::new(); n];
        for r in 0..n {
            for &c in &col_indices[row_offsets[r]..row_offsets[r + 1]] {
                if c != r {
                    edges[r].push(c);
                    edges[c].push(r);
                }
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for mut e in edges {
            e.sort_unstable();
            e.dedup();
            neighbors.extend(e);
            offsets.push(neighbors.len());
        }
        Self { offsets, neighbors }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }
}

const LEAF_SIZE: usize = 8;

/// Nested dissection ordering; `perm[new] = old`.
pub fn nested_dissection(graph: &Graph) -> Vec<usize> {
    let n = graph.len();
    let mut state = Dissector {
        graph,
        region: vec![0; n],
        level: vec![usize::MAX; n],
        next_region: 1,
        order: Vec::with_capacity(n),
    };
    // every vertex starts in region 0
    let all: Vec<usize> = (0..n).collect();
    state.dissect(all, 0);
    debug_assert_eq!(state.order.len(), n);
    state.order
}

struct Dissector<'g> {
    graph: &'g Graph,
    /// Region label of each vertex; only vertices of the active region are visited.
    region: Vec<u32>,
    level: Vec<usize>,
    next_region: u32,
    order: Vec<usize>,
}

impl Dissector<'_> {
    fn fresh_region(&mut self, set: &[usize]) -> u32 {
        let id = self.next_region;
        self.next_region += 1;
        for &v in set {
            self.region[v] = id;
        }
        id
    }

    fn dissect(&mut self, set: Vec<usize>, id: u32) {
        if set.len() <= LEAF_SIZE {
            self.order.extend(set);
            return;
        }
        let components = self.components(&set, id);
        if components.len() > 1 {
            for comp in components {
                let cid = self.fresh_region(&comp);
                self.dissect(comp, cid);
            }
            return;
        }

        let root = self.pseudo_peripheral(set[0], id);
        let levels = self.level_structure(root, id);
        if levels.len() < 3 {
            self.order.extend(set);
            return;
        }

        // first level where the cumulative count reaches half the region
        let half = set.len() / 2;
        let mut acc = 0;
        let mut split = 1;
        for (l, lv) in levels.iter().enumerate() {
            acc += lv.len();
            if acc >= half {
                split = l;
                break;
            }
        }
        let split = split.clamp(1, levels.len() - 2);

        // separator vertices with no neighbour beyond the split move to the near side
        let mut near: Vec<usize> = levels[..split].concat();
        let mut separator = Vec::with_capacity(levels[split].len());
        for &v in &levels[split] {
            let touches_far = self
                .graph
                .neighbors(v)
                .iter()
                .any(|&u| self.region[u] == id && self.level[u] == split + 1);
            if touches_far {
                separator.push(v);
            } else {
                near.push(v);
            }
        }
        let far: Vec<usize> = levels[split + 1..].concat();

        for &v in &separator {
            self.region[v] = u32::MAX;
        }
        for part in [near, far] {
            if part.is_empty() {
                continue;
            }
            let pid = self.fresh_region(&part);
            self.dissect(part, pid);
        }
        self.order.extend(separator);
    }

    fn components(&mut self, set: &[usize], id: u32) -> Vec<Vec<usize>> {
        for &v in set {
            self.level[v] = usize::MAX;
        }
        let mut comps = Vec::new();
        let mut queue = VecDeque::new();
        for &s in set {
            if self.level[s] != usize::MAX {
                continue;
            }
            let mut comp = vec![s];
            self.level[s] = 0;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &u in self.graph.neighbors(v) {
                    if self.region[u] == id && self.level[u] == usize::MAX {
                        self.level[u] = 0;
                        comp.push(u);
                        queue.push_back(u);
                    }
                }
            }
            comps.push(comp);
        }
        for &v in set {
            self.level[v] = usize::MAX;
        }
        comps
    }

    /// BFS levels from `root`; expects the region's levels to be cleared and
    /// leaves them set.
    fn level_structure(&mut self, root: usize, id: u32) -> Vec<Vec<usize>> {
        let mut levels: Vec<Vec<usize>> = vec![vec![root]];
        self.level[root] = 0;
        loop {
            let d = levels.len();
            let mut next = Vec::new();
            for &v in &levels[d - 1] {
                for &u in self.graph.neighbors(v) {
                    if self.region[u] == id && self.level[u] == usize::MAX {
                        self.level[u] = d;
                        next.push(u);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        levels
    }

    fn clear_levels(&mut self, levels: &[Vec<usize>]) {
        for lv in levels {
            for &v in lv {
                self.level[v] = usize::MAX;
            }
        }
    }

    /// George–Liu pseudo-peripheral vertex search.
    fn pseudo_peripheral(&mut self, start: usize, id: u32) -> usize {
        let mut root = start;
        let mut best_depth = 0;
        for _ in 0..8 {
            let levels = self.level_structure(root, id);
            let depth = levels.len();
            let last = levels.last().unwrap();
            let candidate = *last
                .iter()
                .min_by_key(|&&v| {
                    self.graph
                        .neighbors(v)
                        .iter()
                        .filter(|&&u| self.region[u] == id)
                        .count()
                })
                .unwrap();
            self.clear_levels(&levels);
            if depth <= best_depth {
                break;
            }
            best_depth = depth;
            if candidate == root {
                break;
            }
            root = candidate;
        }
        root
    }
}

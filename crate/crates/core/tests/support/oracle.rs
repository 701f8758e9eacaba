//! Slow reference computations kept apart from the library code.
//!
//! Orders are enumerated as surjections onto block labels, connectivity
//! is a fresh union-find per query and the fatal block is resolved by trying
//! every subset. Link `i + 1` is bit `i` of a mask throughout.
#![allow(dead_code)]

use rand::Rng;

#[derive(Clone, Debug)]
pub struct Graph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub terminals: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Graph {
    pub fn links(&self) -> usize {
        self.edges.len()
    }

    /// True while every terminal is in one component after `failed` go.
    pub fn up(&self, failed: u64) -> bool {
        let mut parent: Vec<usize> = (0..self.nodes).collect();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if failed >> i & 1 == 0 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let root = find(&mut parent, self.terminals[0]);
        self.terminals.iter().all(|&t| find(&mut parent, t) == root)
    }

    pub fn joined(&self, u: usize, v: usize, failed: u64) -> bool {
        Graph { nodes: self.nodes, edges: self.edges.clone(), terminals: vec![u, v] }.up(failed)
    }

    /// Smallest subset of `block` whose loss, on top of `failed`, downs the
    /// network.
    pub fn min_cut(&self, failed: u64, block: u64) -> usize {
        let mut best = usize::MAX;
        let mut sub = block;
        loop {
            if !self.up(failed | sub) {
                best = best.min(sub.count_ones() as usize);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & block;
        }
        best
    }

    pub fn m(&self, order: &[u64]) -> usize {
        let mut failed = 0u64;
        let mut m = 0;
        for &block in order {
            if self.up(failed | block) {
                failed |= block;
                m += block.count_ones() as usize;
            } else {
                return m + self.min_cut(failed, block);
            }
        }
        panic!("the network survived every link failing");
    }
}

/// Calls `f` with every ordered set partition of `n` links. Each surjection
/// from links onto block positions `0..k` is one order; labels are assigned
/// link by link, abandoning branches that can no longer use every label.
pub fn for_each_ordered_partition(n: usize, mut f: impl FnMut(&[u64])) {
    fn assign(link: usize, n: usize, blocks: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
        let empty = blocks.iter().filter(|&&b| b == 0).count();
        if empty > n - link {
            return;
        }
        if link == n {
            f(blocks);
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << link;
            assign(link + 1, n, blocks, f);
            blocks[b] &= !(1 << link);
        }
    }
    for k in 1..=n {
        assign(0, n, &mut vec![0u64; k], &mut f);
    }
}

pub fn ordered_partitions(n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for_each_ordered_partition(n, |o| out.push(o.to_vec()));
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Counts of `M = i` (index `i - 1`) over all ordered set partitions.
pub fn t_counts(g: &Graph) -> Vec<u128> {
    let mut counts = vec![0u128; g.links()];
    for_each_ordered_partition(g.links(), |order| counts[g.m(order) - 1] += 1);
    counts
}

/// Counts of `M = i` over all permutations of single link failures.
pub fn classic_counts(g: &Graph) -> Vec<u128> {
    let mut counts = vec![0u128; g.links()];
    for p in permutations(g.links()) {
        let order: Vec<u64> = p.iter().map(|&l| 1u64 << l).collect();
        counts[g.m(&order) - 1] += 1;
    }
    counts
}

/// A random multigraph with `links` links on at most `links` nodes and two
/// or three terminals that are connected in the intact graph.
pub fn random_graph<R: Rng>(rng: &mut R, links: usize) -> Graph {
    loop {
        let nodes = rng.random_range(2..=links.max(2));
        let edges: Vec<(usize, usize)> = (0..links)
            .map(|_| {
                let a = rng.random_range(0..nodes);
                let mut b = rng.random_range(0..nodes - 1);
                if b >= a {
                    b += 1;
                }
                (a, b)
            })
            .collect();
        let k = rng.random_range(2..=3.min(nodes));
        let mut terminals: Vec<usize> = Vec::new();
        while terminals.len() < k {
            let t = rng.random_range(0..nodes);
            if !terminals.contains(&t) {
                terminals.push(t);
            }
        }
        let g = Graph { nodes, edges, terminals };
        if g.up(0) {
            return g;
        }
    }
}

pub fn labels(g: &Graph) -> Vec<String> {
    (0..g.nodes).map(|i| format!("v{i}")).collect()
}

//! Networks, link sets and K-terminal connectivity under link removal.
//!
//! Links are numbered `1..=n` and link sets are 64-bit masks, so a network
//! holds at most [`MAX_LINKS`] links and [`MAX_NODES`] nodes. Every query is a
//! pure function of the network and the removed set; scratch space lives on
//! the stack of the call.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::Error;

/// Largest supported number of links.
pub const MAX_LINKS: usize = 64;
/// Largest supported number of nodes.
pub const MAX_NODES: usize = 64;

/// A set of link ids drawn from `1..=n`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkSet(u64);

impl LinkSet {
    pub const EMPTY: LinkSet = LinkSet(0);

    /// Bit `i` stands for link `i + 1`.
    pub const fn from_bits(bits: u64) -> Self {
        LinkSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The links `1..=n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_LINKS, "at most {MAX_LINKS} links");
        if n == MAX_LINKS {
            LinkSet(u64::MAX)
        } else {
            LinkSet((1u64 << n) - 1)
        }
    }

    /// Builds a set from ids, rejecting anything outside `1..=links`.
    pub fn from_ids<I: IntoIterator<Item = usize>>(ids: I, links: usize) -> Result<Self, Error> {
        let mut set = LinkSet::EMPTY;
        for id in ids {
            if id == 0 || id > links || id > MAX_LINKS {
                return Err(Error::InvalidLink { id, links });
            }
            set.insert(id);
        }
        Ok(set)
    }

    pub fn contains(self, id: usize) -> bool {
        (1..=MAX_LINKS).contains(&id) && self.0 >> (id - 1) & 1 == 1
    }

    pub fn insert(&mut self, id: usize) {
        assert!((1..=MAX_LINKS).contains(&id), "link id {id} out of range");
        self.0 |= 1 << (id - 1);
    }

    pub fn remove(&mut self, id: usize) {
        if (1..=MAX_LINKS).contains(&id) {
            self.0 &= !(1 << (id - 1));
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: LinkSet) -> LinkSet {
        LinkSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LinkSet) -> LinkSet {
        LinkSet(self.0 & other.0)
    }

    pub fn difference(self, other: LinkSet) -> LinkSet {
        LinkSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: LinkSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: LinkSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Members in ascending order.
    pub fn iter(self) -> LinkIter {
        LinkIter(self.0)
    }
}

impl core::ops::BitOr for LinkSet {
    type Output = LinkSet;
    fn bitor(self, rhs: LinkSet) -> LinkSet {
        self.union(rhs)
    }
}

impl fmt::Debug for LinkSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl IntoIterator for LinkSet {
    type Item = usize;
    type IntoIter = LinkIter;
    fn into_iter(self) -> LinkIter {
        self.iter()
    }
}

/// Ascending iterator over the ids of a [`LinkSet`].
#[derive(Clone, Debug)]
pub struct LinkIter(u64);

impl Iterator for LinkIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let bit = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(bit + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for LinkIter {}

/// A simple path given as link ids from the first endpoint to the second.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    links: Vec<usize>,
}

impl Path {
    pub fn links(&self) -> &[usize] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn to_set(&self) -> LinkSet {
        let mut set = LinkSet::EMPTY;
        for &id in &self.links {
            set.insert(id);
        }
        set
    }
}

/// Reasons a network description is rejected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("{0} nodes exceeds the limit of {MAX_NODES}")]
    TooManyNodes(usize),
    #[error("{0} links exceeds the limit of {MAX_LINKS}")]
    TooManyLinks(usize),
    #[error("node `{0}` is declared twice")]
    DuplicateNode(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("link {link} is a self-loop on `{node}`")]
    SelfLoop { link: usize, node: String },
    #[error("terminal `{0}` is listed twice")]
    DuplicateTerminal(String),
    #[error("at least two terminals are required, got {0}")]
    TooFewTerminals(usize),
    #[error("the terminals are not connected in the intact network")]
    TerminalsDisconnected,
}

/// An undirected multigraph with failing links and a terminal set.
///
/// Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    labels: Vec<String>,
    links: Vec<(usize, usize)>,
    /// Ascending node indices.
    terminals: Vec<usize>,
    terminal_mask: u64,
    /// Per node, `(link bit, neighbour)` in ascending link order.
    adjacency: Vec<Vec<(u8, u8)>>,
}

impl Network {
    /// Builds a network from node labels, link endpoints (node indices,
    /// link `i + 1` is `links[i]`) and terminal node indices.
    pub fn new(labels: Vec<String>, links: Vec<(usize, usize)>, terminals: Vec<usize>) -> Result<Self, NetworkError> {
        if labels.len() > MAX_NODES {
            return Err(NetworkError::TooManyNodes(labels.len()));
        }
        if links.len() > MAX_LINKS {
            return Err(NetworkError::TooManyLinks(links.len()));
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(NetworkError::DuplicateNode(label.clone()));
            }
        }
        let name = |i: usize| labels.get(i).cloned().ok_or_else(|| NetworkError::UnknownNode(alloc::format!("#{i}")));
        let mut adjacency = alloc::vec![Vec::new(); labels.len()];
        for (bit, &(a, b)) in links.iter().enumerate() {
            name(a)?;
            name(b)?;
            if a == b {
                return Err(NetworkError::SelfLoop { link: bit + 1, node: name(a)? });
            }
            adjacency[a].push((bit as u8, b as u8));
            adjacency[b].push((bit as u8, a as u8));
        }
        let mut terminal_mask = 0u64;
        for &t in &terminals {
            let label = name(t)?;
            if terminal_mask >> t & 1 == 1 {
                return Err(NetworkError::DuplicateTerminal(label));
            }
            terminal_mask |= 1 << t;
        }
        if terminals.len() < 2 {
            return Err(NetworkError::TooFewTerminals(terminals.len()));
        }
        let mut terminals = terminals;
        terminals.sort_unstable();
        let net = Network { labels, links, terminals, terminal_mask, adjacency };
        if !net.is_terminal_connected(LinkSet::EMPTY) {
            return Err(NetworkError::TerminalsDisconnected);
        }
        Ok(net)
    }

    /// Builds a network from labelled edges. Nodes are declared in order of
    /// first appearance.
    pub fn from_edges(edges: &[(&str, &str)], terminals: &[&str]) -> Result<Self, NetworkError> {
        let mut labels: Vec<String> = Vec::new();
        let mut intern = |label: &str| match labels.iter().position(|l| l == label) {
            Some(i) => i,
            None => {
                labels.push(label.to_string());
                labels.len() - 1
            }
        };
        let links = edges.iter().map(|&(a, b)| (intern(a), intern(b))).collect();
        let mut term = Vec::with_capacity(terminals.len());
        for &t in terminals {
            match labels.iter().position(|l| l == t) {
                Some(i) => term.push(i),
                None => return Err(NetworkError::UnknownNode(t.to_string())),
            }
        }
        Network::new(labels, links, term)
    }

    /// Number of links `n`.
    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn node_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Endpoints of link `id`.
    pub fn link(&self, id: usize) -> (usize, usize) {
        self.links[id - 1]
    }

    /// Endpoints of all links, link `i + 1` at index `i`.
    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    /// Terminal node indices in ascending order.
    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn all_links(&self) -> LinkSet {
        LinkSet::full(self.links.len())
    }

    /// Validated link set over this network.
    pub fn link_set<I: IntoIterator<Item = usize>>(&self, ids: I) -> Result<LinkSet, Error> {
        LinkSet::from_ids(ids, self.links.len())
    }

    /// True iff every terminal lies in one component once `removed` is
    /// deleted. Breadth-first from the lowest-indexed terminal.
    pub fn is_terminal_connected(&self, removed: LinkSet) -> bool {
        self.reaches_all(self.terminals[0], self.terminal_mask, removed.bits())
    }

    /// Breadth-first search from `start` until every node in `targets` is
    /// reached.
    fn reaches_all(&self, start: usize, targets: u64, removed: u64) -> bool {
        let mut visited = 1u64 << start;
        let mut pending = targets & !visited;
        if pending == 0 {
            return true;
        }
        let mut queue = [0u8; MAX_NODES];
        let (mut head, mut tail) = (0, 1);
        queue[0] = start as u8;
        while head < tail {
            let v = queue[head] as usize;
            head += 1;
            for &(bit, w) in &self.adjacency[v] {
                let w_bit = 1u64 << w;
                if removed >> bit & 1 == 0 && visited & w_bit == 0 {
                    visited |= w_bit;
                    pending &= !w_bit;
                    if pending == 0 {
                        return true;
                    }
                    queue[tail] = w;
                    tail += 1;
                }
            }
        }
        false
    }

    /// Shortest path by link count from `from` to `to` avoiding `removed`.
    ///
    /// Neighbours are expanded in ascending link id, so among shortest paths
    /// the one with the lexicographically smallest link sequence is returned.
    pub fn find_path(&self, from: usize, to: usize, removed: LinkSet) -> Option<Path> {
        assert!(from < self.labels.len() && to < self.labels.len(), "endpoint out of range");
        let mut parent = [0u8; MAX_NODES];
        if !self.bfs_parents(from, to, removed.bits(), &mut parent) {
            return None;
        }
        let mut links = Vec::new();
        let mut v = to;
        while v != from {
            let bit = parent[v] as usize;
            links.push(bit + 1);
            let (a, b) = self.links[bit];
            v = if a == v { b } else { a };
        }
        links.reverse();
        Some(Path { links })
    }

    fn bfs_parents(&self, from: usize, to: usize, removed: u64, parent: &mut [u8; MAX_NODES]) -> bool {
        if from == to {
            return true;
        }
        let mut visited = 1u64 << from;
        let mut queue = [0u8; MAX_NODES];
        let (mut head, mut tail) = (0, 1);
        queue[0] = from as u8;
        while head < tail {
            let v = queue[head] as usize;
            head += 1;
            for &(bit, w) in &self.adjacency[v] {
                let w_bit = 1u64 << w;
                if removed >> bit & 1 == 0 && visited & w_bit == 0 {
                    visited |= w_bit;
                    parent[w as usize] = bit;
                    if w as usize == to {
                        return true;
                    }
                    queue[tail] = w;
                    tail += 1;
                }
            }
        }
        false
    }

    /// Link mask of the path [`Network::find_path`] would return.
    fn path_bits(&self, from: usize, to: usize, removed: u64) -> Option<u64> {
        let mut parent = [0u8; MAX_NODES];
        if !self.bfs_parents(from, to, removed, &mut parent) {
            return None;
        }
        let mut bits = 0u64;
        let mut v = to;
        while v != from {
            let bit = parent[v] as usize;
            bits |= 1 << bit;
            let (a, b) = self.links[bit];
            v = if a == v { b } else { a };
        }
        Some(bits)
    }

    fn check_block_contract(&self, removed: LinkSet, block: LinkSet) -> Result<(), Error> {
        let all = self.all_links();
        if !removed.is_subset(all) || !block.is_subset(all) {
            return Err(Error::Contract("link set outside the network"));
        }
        if !removed.is_disjoint(block) {
            return Err(Error::Contract("removed and block overlap"));
        }
        if !self.is_terminal_connected(removed) {
            return Err(Error::Contract("terminals already disconnected before the block"));
        }
        if self.is_terminal_connected(removed | block) {
            return Err(Error::Contract("removing the block leaves the terminals connected"));
        }
        Ok(())
    }

    /// Size of the smallest `S ⊆ block` whose deletion together with
    /// `removed` disconnects the terminals.
    pub fn min_failed_subset_size(&self, removed: LinkSet, block: LinkSet) -> Result<usize, Error> {
        self.minimum_disconnecting_subset(removed, block).map(LinkSet::len)
    }

    /// The first minimum disconnecting subset of `block`, searching by
    /// ascending cardinality and lexicographic link order.
    pub fn minimum_disconnecting_subset(&self, removed: LinkSet, block: LinkSet) -> Result<LinkSet, Error> {
        self.check_block_contract(removed, block)?;
        Ok(LinkSet(self.min_subset_bits(removed.bits(), block.bits())))
    }

    /// Caller guarantees the contract of [`Network::min_failed_subset_size`].
    pub(crate) fn min_subset_bits(&self, removed: u64, block: u64) -> u64 {
        let mut members = [0u8; MAX_LINKS];
        let mut size = 0;
        let mut rest = block;
        while rest != 0 {
            members[size] = rest.trailing_zeros() as u8;
            rest &= rest - 1;
            size += 1;
        }
        let members = &members[..size];
        let mut pick = [0usize; MAX_LINKS];
        for card in 1..=size {
            for (i, p) in pick[..card].iter_mut().enumerate() {
                *p = i;
            }
            loop {
                let subset = pick[..card].iter().fold(0u64, |acc, &i| acc | 1 << members[i]);
                if !self.reaches_all(self.terminals[0], self.terminal_mask, removed | subset) {
                    return subset;
                }
                // next combination in lexicographic order
                let mut i = card;
                while i > 0 && pick[i - 1] == size - card + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                pick[i - 1] += 1;
                for j in i..card {
                    pick[j] = pick[j - 1] + 1;
                }
            }
        }
        unreachable!("the full block disconnects the terminals")
    }

    /// Greedy block count: repeatedly take the [`Network::find_path`] path
    /// between the two terminals, delete every block link on it and count one,
    /// until the terminals separate.
    ///
    /// Only defined for two-terminal networks. The result depends on the
    /// path rule and is never larger than
    /// [`Network::min_failed_subset_size`].
    pub fn greedy_failed_count(&self, removed: LinkSet, block: LinkSet) -> Result<usize, Error> {
        self.check_two_terminal()?;
        self.check_block_contract(removed, block)?;
        Ok(self.greedy_count_bits(removed.bits(), block.bits()))
    }

    pub(crate) fn check_two_terminal(&self) -> Result<(), Error> {
        if self.terminals.len() == 2 {
            Ok(())
        } else {
            Err(Error::Unsupported(alloc::format!(
                "greedy counting needs exactly two terminals, this network has {}; use exact mode",
                self.terminals.len()
            )))
        }
    }

    /// Caller guarantees two terminals and the block contract.
    pub(crate) fn greedy_count_bits(&self, mut removed: u64, block: u64) -> usize {
        let (s, t) = (self.terminals[0], self.terminals[1]);
        let mut count = 0;
        while let Some(path) = self.path_bits(s, t, removed) {
            let hit = path & block;
            debug_assert!(hit != 0, "a surviving path avoids the block");
            if hit == 0 {
                break;
            }
            removed |= hit;
            count += 1;
        }
        count
    }
}

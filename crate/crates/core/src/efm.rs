//! Bipartite matching and envy-free matching.
//!
//! A matching is envy-free when no unmatched left vertex is adjacent to a
//! matched right vertex. [`envy_free_matching`] takes a maximum matching,
//! finds every left vertex reachable from an unmatched one along alternating
//! paths, and keeps only the matched pairs outside that reachable set.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_x: usize,
    n_y: usize,
    /// Neighbors of each x, ascending.
    adjacency: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(n_x: usize, n_y: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![BTreeSet::new(); n_x];
        for (x, y) in edges {
            if x >= n_x || y >= n_y {
                return Err(Error::input(format!("edge ({x}, {y}) outside a {n_x}x{n_y} graph")));
            }
            if !adjacency[x].insert(y) {
                return Err(Error::input(format!("duplicate edge ({x}, {y})")));
            }
        }
        Ok(BipartiteGraph {
            n_x,
            n_y,
            adjacency: adjacency.into_iter().map(|set| set.into_iter().collect()).collect(),
        })
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adjacency[x]
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        x < self.n_x && self.adjacency[x].binary_search(&y).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
    }

    /// Size of the neighborhood of all of X.
    pub fn neighborhood_size(&self) -> usize {
        self.adjacency.iter().flatten().collect::<BTreeSet<_>>().len()
    }
}

/// A set of vertex-disjoint edges, stored sorted by x.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Checks that no vertex repeats; edge membership is checked against a
    /// graph by [`is_envy_free`].
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        pairs.sort_unstable();
        let mut xs = BTreeSet::new();
        let mut ys = BTreeSet::new();
        for &(x, y) in &pairs {
            if !xs.insert(x) || !ys.insert(y) {
                return Err(Error::input(format!("vertex repeated in matching at ({x}, {y})")));
            }
        }
        Ok(Matching { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn matched_x(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|&(x, _)| x).collect()
    }

    pub fn matched_y(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|&(_, y)| y).collect()
    }

    pub fn partner_of_x(&self, x: usize) -> Option<usize> {
        self.pairs.iter().find(|&&(px, _)| px == x).map(|&(_, y)| y)
    }
}

/// Maximum-cardinality matching by augmenting paths. Left vertices are
/// augmented in ascending order and neighbors scanned ascending, so the
/// result is deterministic.
pub fn max_matching(g: &BipartiteGraph) -> Matching {
    let mut mate_of_y: Vec<Option<usize>> = vec![None; g.n_y];
    for x in 0..g.n_x {
        let mut seen = vec![false; g.n_y];
        augment(g, x, &mut seen, &mut mate_of_y);
    }
    let pairs = mate_of_y
        .iter()
        .enumerate()
        .filter_map(|(y, mate)| mate.map(|x| (x, y)))
        .collect();
    Matching::new(pairs).expect("augmenting paths keep vertices distinct")
}

fn augment(g: &BipartiteGraph, x: usize, seen: &mut [bool], mate_of_y: &mut [Option<usize>]) -> bool {
    for &y in &g.adjacency[x] {
        if seen[y] {
            continue;
        }
        seen[y] = true;
        let free = match mate_of_y[y] {
            None => true,
            Some(other) => augment(g, other, seen, mate_of_y),
        };
        if free {
            mate_of_y[y] = Some(x);
            return true;
        }
    }
    false
}

/// An envy-free matching; nonempty whenever `|N(X)| >= |X| >= 1`.
pub fn envy_free_matching(g: &BipartiteGraph) -> Matching {
    let maximum = max_matching(g);
    let mut mate_of_y: Vec<Option<usize>> = vec![None; g.n_y];
    let mut matched = vec![false; g.n_x];
    for &(x, y) in maximum.pairs() {
        mate_of_y[y] = Some(x);
        matched[x] = true;
    }

    // Alternating BFS from the unmatched left vertices: leave X by any edge,
    // come back by the matching edge.
    let mut reached_x = vec![false; g.n_x];
    let mut reached_y = vec![false; g.n_y];
    let mut queue: VecDeque<usize> = (0..g.n_x).filter(|&x| !matched[x]).collect();
    for &x in &queue {
        reached_x[x] = true;
    }
    while let Some(x) = queue.pop_front() {
        for &y in &g.adjacency[x] {
            if reached_y[y] {
                continue;
            }
            reached_y[y] = true;
            if let Some(mate) = mate_of_y[y] {
                if !reached_x[mate] {
                    reached_x[mate] = true;
                    queue.push_back(mate);
                }
            }
        }
    }

    let pairs = maximum
        .pairs()
        .iter()
        .copied()
        .filter(|&(x, _)| !reached_x[x])
        .collect();
    Matching::new(pairs).expect("subset of a matching")
}

/// Literal check: every unmatched x has no edge into the matched y's.
pub fn is_envy_free(g: &BipartiteGraph, m: &Matching) -> Result<bool> {
    for &(x, y) in m.pairs() {
        if !g.has_edge(x, y) {
            return Err(Error::input(format!("matched pair ({x}, {y}) is not an edge")));
        }
    }
    let matched_x = m.matched_x();
    let matched_y = m.matched_y();
    Ok((0..g.n_x)
        .filter(|x| !matched_x.contains(x))
        .all(|x| g.adjacency[x].iter().all(|y| !matched_y.contains(y))))
}

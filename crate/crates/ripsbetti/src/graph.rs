//! Simple undirected graphs with bitset adjacency rows.

use crate::error::{Error, Result};

/// An undirected simple graph on vertices `0..n`. Adjacency is stored as one
/// bitset row per vertex so clique extension can intersect rows word-wise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self { n, words, adj: vec![0; n * words] }
    }

    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            let (u, v) = (u as usize, v as usize);
            if u >= n || v >= n {
                return Err(Error::UnknownVertex(u.max(v) as u32));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && u < self.n && v < self.n && self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in BitIter::new(self.row(u)) {
                if v > u {
                    out.push((u as u32, v as u32));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        BitIter::new(self.row(v)).collect()
    }

    /// Common neighborhood of a vertex set, as a bitset.
    pub fn common_neighbors(&self, vs: &[u32]) -> Vec<u64> {
        let mut acc = vec![u64::MAX; self.words];
        if self.words > 0 && !self.n.is_multiple_of(64) {
            acc[self.words - 1] = (1u64 << (self.n % 64)) - 1;
        }
        for &v in vs {
            for (a, w) in acc.iter_mut().zip(self.row(v as usize)) {
                *a &= w;
            }
        }
        for &v in vs {
            acc[v as usize / 64] &= !(1 << (v as usize % 64));
        }
        acc
    }

    /// The induced subgraph on `vs` (which must be sorted and in range),
    /// relabeled to `0..vs.len()` in the given order.
    pub fn induced(&self, vs: &[u32]) -> Result<Graph> {
        for &v in vs {
            if v as usize >= self.n {
                return Err(Error::UnknownVertex(v));
            }
        }
        let mut g = Graph::new(vs.len());
        for (i, &u) in vs.iter().enumerate() {
            for (j, &v) in vs.iter().enumerate().skip(i + 1) {
                if self.has_edge(u as usize, v as usize) {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Number of connected components (isolated vertices count).
    pub fn component_count(&self) -> usize {
        self.components().1
    }

    /// Component id per vertex plus the component count; ids are assigned in
    /// order of smallest contained vertex.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for v in BitIter::new(self.row(u)) {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }
}

/// Iterator over set bit positions of a word slice, ascending.
pub struct BitIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl<'a> BitIter<'a> {
    pub fn new(words: &'a [u64]) -> Self {
        Self { words, word_idx: 0, current: words.first().copied().unwrap_or(0) }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * 64 + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_and_degrees() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.degree(0), 2);
        assert!(g.has_edge(0, 3));
        assert!(!g.has_edge(0, 2));
        assert_eq!(g.edges(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn common_neighbors_over_word_boundary() {
        let n = 130;
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(0, v);
        }
        g.add_edge(1, 129);
        let common = g.common_neighbors(&[0, 1]);
        let hits: Vec<usize> = BitIter::new(&common).collect();
        assert_eq!(hits, vec![129]);
    }

    #[test]
    fn components_of_two_paths() {
        let g = Graph::from_edges(5, &[(0, 1), (2, 3)]).unwrap();
        let (comp, count) = g.components();
        assert_eq!(count, 3);
        assert_eq!(comp[0], comp[1]);
        assert_eq!(comp[2], comp[3]);
        assert_ne!(comp[0], comp[4]);
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = Graph::from_edges(5, &[(0, 2), (2, 4), (0, 4)]).unwrap();
        let sub = g.induced(&[0, 2, 4]).unwrap();
        assert_eq!(sub.edge_count(), 3);
        assert!(sub.has_edge(0, 1));
    }
}

//! Bipartite hosts: the input side of the Turán-style reduction.

use serde::{Deserialize, Serialize};

use super::ConstructError;

/// A bipartite graph with sides A (size n) and B (size m), stored as sorted
/// B-neighbour lists per A-vertex. Only A-side degrees and common
/// neighbourhoods matter downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteHost {
    n: usize,
    m: usize,
    adj: Vec<Vec<u32>>,
}

impl BipartiteHost {
    pub fn new(n: usize, m: usize, mut adj: Vec<Vec<u32>>) -> Result<Self, ConstructError> {
        if adj.len() != n {
            return Err(ConstructError::BadParameter(format!(
                "adjacency has {} rows, expected n={}",
                adj.len(),
                n
            )));
        }
        for row in adj.iter_mut() {
            row.sort_unstable();
            row.dedup();
            if let Some(&last) = row.last() {
                if last as usize >= m {
                    return Err(ConstructError::BadParameter(format!(
                        "neighbour id {} out of range 0..{}",
                        last, m
                    )));
                }
            }
        }
        Ok(BipartiteHost { n, m, adj })
    }

    /// Complete bipartite host K_{n,m}.
    pub fn complete(n: usize, m: usize) -> Self {
        let row: Vec<u32> = (0..m as u32).collect();
        BipartiteHost {
            n,
            m,
            adj: vec![row; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adj[a].len()
    }

    pub fn neighbours(&self, a: usize) -> &[u32] {
        &self.adj[a]
    }

    pub fn min_degree_a(&self) -> usize {
        self.adj.iter().map(|r| r.len()).min().unwrap_or(0)
    }

    /// Neighbourhoods as bitset rows (words of 64), for census loops.
    pub fn bitset_rows(&self) -> Vec<Vec<u64>> {
        let words = self.m.div_ceil(64);
        self.adj
            .iter()
            .map(|row| {
                let mut bits = vec![0u64; words];
                for &b in row {
                    bits[(b / 64) as usize] |= 1u64 << (b % 64);
                }
                bits
            })
            .collect()
    }

    /// B-vertex -> incident A-vertices.
    pub fn reverse_adjacency(&self) -> Vec<Vec<u32>> {
        let mut rev = vec![Vec::new(); self.m];
        for (a, row) in self.adj.iter().enumerate() {
            for &b in row {
                rev[b as usize].push(a as u32);
            }
        }
        rev
    }
}

/// The quantities that make a host usable in the reduction: a floor on
/// A-side degrees and a ceiling on common neighbourhoods of r-subsets of A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostCertificate {
    pub min_degree_a: usize,
    pub max_common_neighbours: usize,
    pub r: usize,
}

impl HostCertificate {
    /// Recompute both certificate fields from the host by exhaustive census.
    pub fn recompute(
        host: &BipartiteHost,
        r: usize,
        max_subsets: u64,
    ) -> Result<Self, ConstructError> {
        let census = crate::analysis::census::common_neighbour_census(host, r, max_subsets)
            .map_err(|e| ConstructError::BadParameter(e.to_string()))?;
        Ok(HostCertificate {
            min_degree_a: host.min_degree_a(),
            max_common_neighbours: census.max,
            r,
        })
    }
}

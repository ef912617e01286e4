//! Partitioned r-uniform hypergraphs, transversals and degree statistics.
//!
//! The vertex universe is always dense `0..N-1`, each vertex in exactly one
//! part, and parts are independent sets (an edge never lies inside a single
//! part). Instances are canonicalized on construction (sorted part lists,
//! sorted deduplicated edges) so that structural equality and byte-identical
//! serialization coincide, and are immutable afterwards; anything that looks
//! like mutation builds a new instance.

use num_rational::Ratio;
use std::collections::BTreeMap;
use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("uniformity must be at least 2, got {0}")]
    BadUniformity(usize),
    #[error("vertex {0} occurs in more than one part")]
    DuplicateVertex(VertexId),
    #[error("vertex ids must be dense 0..{expected}, found id {found}")]
    NonDenseIds { expected: usize, found: VertexId },
    #[error("edge {index} has {got} distinct vertices, expected {expected}")]
    BadEdgeArity {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("edge {index} references unknown vertex {vertex}")]
    UnknownVertex { index: usize, vertex: VertexId },
    #[error("edge {index} lies inside part {part} (parts must be independent)")]
    EdgeInsidePart { index: usize, part: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("degenerate part {0} (empty)")]
    DegeneratePart(usize),
    #[error("local degree is defined for graphs only (r = 2), this instance has r = {0}")]
    GraphsOnly(usize),
}

/// An r-uniform hypergraph with an explicit ordered vertex partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionedHypergraph {
    r: usize,
    parts: Vec<Vec<VertexId>>,
    edges: Vec<Vec<VertexId>>,
    part_of: Vec<u32>,
    incident: Vec<Vec<u32>>,
}

impl PartitionedHypergraph {
    /// Build and validate an instance. Part lists and edges are sorted into
    /// canonical order; duplicate edges collapse.
    pub fn new(
        r: usize,
        mut parts: Vec<Vec<VertexId>>,
        mut edges: Vec<Vec<VertexId>>,
    ) -> Result<Self, BuildError> {
        if r < 2 {
            return Err(BuildError::BadUniformity(r));
        }
        let n: usize = parts.iter().map(|p| p.len()).sum();
        let mut part_of = vec![u32::MAX; n];
        for (i, part) in parts.iter_mut().enumerate() {
            part.sort_unstable();
            for &v in part.iter() {
                if (v as usize) >= n {
                    return Err(BuildError::NonDenseIds {
                        expected: n,
                        found: v,
                    });
                }
                if part_of[v as usize] != u32::MAX {
                    return Err(BuildError::DuplicateVertex(v));
                }
                part_of[v as usize] = i as u32;
            }
        }
        for (index, edge) in edges.iter_mut().enumerate() {
            edge.sort_unstable();
            edge.dedup();
            if edge.len() != r {
                return Err(BuildError::BadEdgeArity {
                    index,
                    expected: r,
                    got: edge.len(),
                });
            }
            for &v in edge.iter() {
                if (v as usize) >= n {
                    return Err(BuildError::UnknownVertex { index, vertex: v });
                }
            }
            let p0 = part_of[edge[0] as usize];
            if edge.iter().all(|&v| part_of[v as usize] == p0) {
                return Err(BuildError::EdgeInsidePart {
                    index,
                    part: p0 as usize,
                });
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut incident = vec![Vec::new(); n];
        for (ei, edge) in edges.iter().enumerate() {
            for &v in edge {
                incident[v as usize].push(ei as u32);
            }
        }
        Ok(PartitionedHypergraph {
            r,
            parts,
            edges,
            part_of,
            incident,
        })
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.part_of.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn part(&self, i: usize) -> &[VertexId] {
        &self.parts[i]
    }

    pub fn parts(&self) -> &[Vec<VertexId>] {
        &self.parts
    }

    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &[VertexId] {
        &self.edges[e]
    }

    pub fn part_of(&self, v: VertexId) -> usize {
        self.part_of[v as usize] as usize
    }

    /// Number of edges containing `v`.
    pub fn degree(&self, v: VertexId) -> usize {
        self.incident[v as usize].len()
    }

    pub fn incident_edges(&self, v: VertexId) -> &[u32] {
        &self.incident[v as usize]
    }

    /// Adjacency lists for the graph case, each sorted by (part, id).
    /// Panics if r != 2.
    pub fn adjacency(&self) -> Vec<Vec<VertexId>> {
        assert_eq!(self.r, 2, "adjacency lists are for graphs only");
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for e in &self.edges {
            adj[e[0] as usize].push(e[1]);
            adj[e[1] as usize].push(e[0]);
        }
        for list in adj.iter_mut() {
            list.sort_unstable_by_key(|&w| (self.part_of[w as usize], w));
        }
        adj
    }

    /// Exact average degree of part `i`: (1/|V_i|) * sum of deg(v).
    pub fn avg_degree_of_part(&self, i: usize) -> Result<Ratio<u64>, StatsError> {
        let part = &self.parts[i];
        if part.is_empty() {
            return Err(StatsError::DegeneratePart(i));
        }
        let total: u64 = part.iter().map(|&v| self.degree(v) as u64).sum();
        Ok(Ratio::new(total, part.len() as u64))
    }

    /// Per-part statistics bundle.
    pub fn part_stats(&self, i: usize) -> Result<PartStats, StatsError> {
        let avg = self.avg_degree_of_part(i)?;
        let max = self.parts[i]
            .iter()
            .map(|&v| self.degree(v))
            .max()
            .unwrap_or(0);
        Ok(PartStats {
            part_index: i,
            size: self.parts[i].len(),
            avg_degree: avg,
            max_degree: max,
        })
    }

    /// Max over nonempty parts of the average degree; 0 for the edgeless or
    /// partless instance. Errors if some part is empty.
    pub fn max_avg_degree(&self) -> Result<Ratio<u64>, StatsError> {
        let mut best = Ratio::new(0, 1);
        for i in 0..self.num_parts() {
            let a = self.avg_degree_of_part(i)?;
            if a > best {
                best = a;
            }
        }
        Ok(best)
    }

    /// Local degree: max over ordered part pairs (i, j) of the number of
    /// V_j-neighbours of a vertex of V_i. Graphs only.
    pub fn local_degree(&self) -> Result<usize, StatsError> {
        if self.r != 2 {
            return Err(StatsError::GraphsOnly(self.r));
        }
        // counts[(v, j)] realized as a pass over edges per vertex
        let mut best = 0usize;
        let mut counts: BTreeMap<(VertexId, u32), usize> = BTreeMap::new();
        for e in &self.edges {
            let (u, v) = (e[0], e[1]);
            *counts.entry((u, self.part_of[v as usize])).or_insert(0) += 1;
            *counts.entry((v, self.part_of[u as usize])).or_insert(0) += 1;
        }
        for &c in counts.values() {
            best = best.max(c);
        }
        Ok(best)
    }

    /// True iff `t` assigns a vertex of every part and no edge lies inside
    /// the image. Partial or ill-formed assignments return false.
    pub fn is_independent_transversal(&self, t: &Transversal) -> bool {
        if t.len() != self.num_parts() {
            return false;
        }
        let mut in_image = vec![false; self.num_vertices()];
        for (&part, &v) in t.iter() {
            if part >= self.num_parts() || (v as usize) >= self.num_vertices() {
                return false;
            }
            if self.part_of(v) != part {
                return false;
            }
            in_image[v as usize] = true;
        }
        !self
            .edges
            .iter()
            .any(|e| e.iter().all(|&v| in_image[v as usize]))
    }

    /// Induced sub-hypergraph on the kept vertices, relabelled to dense ids.
    /// Parts keep their positions (possibly becoming empty). Returns the
    /// new instance and the new-id -> old-id map.
    pub fn induced(&self, keep: &[bool]) -> (PartitionedHypergraph, Vec<VertexId>) {
        assert_eq!(keep.len(), self.num_vertices());
        let mut new_of_old = vec![u32::MAX; self.num_vertices()];
        let mut old_of_new = Vec::new();
        let mut parts = Vec::with_capacity(self.num_parts());
        for part in &self.parts {
            let mut np = Vec::new();
            for &v in part {
                if keep[v as usize] {
                    let nv = old_of_new.len() as u32;
                    new_of_old[v as usize] = nv;
                    old_of_new.push(v);
                    np.push(nv);
                }
            }
            parts.push(np);
        }
        let mut edges = Vec::new();
        for e in &self.edges {
            if e.iter().all(|&v| keep[v as usize]) {
                edges.push(e.iter().map(|&v| new_of_old[v as usize]).collect());
            }
        }
        let g = PartitionedHypergraph::new(self.r, parts, edges)
            .expect("induced subgraph of a valid instance is valid");
        (g, old_of_new)
    }

    /// Delete, part by part, vertices of maximum current degree (ties to the
    /// smallest id) until every part has size at most `target`. Returns the
    /// induced instance and the new -> old id map.
    pub fn shrink_parts_to(&self, target: usize) -> (PartitionedHypergraph, Vec<VertexId>) {
        let mut deg: Vec<usize> = (0..self.num_vertices())
            .map(|v| self.degree(v as VertexId))
            .collect();
        let mut keep = vec![true; self.num_vertices()];
        for part in &self.parts {
            let mut alive = part.len();
            while alive > target {
                let &victim = part
                    .iter()
                    .filter(|&&v| keep[v as usize])
                    .max_by_key(|&&v| (deg[v as usize], std::cmp::Reverse(v)))
                    .expect("nonempty part");
                keep[victim as usize] = false;
                alive -= 1;
                for &ei in self.incident_edges(victim) {
                    let e = &self.edges[ei as usize];
                    if e.iter().all(|&w| w == victim || keep[w as usize]) {
                        for &w in e {
                            if w != victim {
                                deg[w as usize] -= 1;
                            }
                        }
                    }
                }
            }
        }
        self.induced(&keep)
    }
}

/// Size, average degree and maximum degree of one part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartStats {
    pub part_index: usize,
    pub size: usize,
    pub avg_degree: Ratio<u64>,
    pub max_degree: usize,
}

/// A choice of at most one vertex per part.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transversal {
    assignment: BTreeMap<usize, VertexId>,
}

impl Transversal {
    pub fn new() -> Self {
        Transversal::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, VertexId)>) -> Self {
        Transversal {
            assignment: pairs.into_iter().collect(),
        }
    }

    /// Assign `v` to `part`, replacing any previous choice.
    pub fn set(&mut self, part: usize, v: VertexId) {
        self.assignment.insert(part, v);
    }

    pub fn remove(&mut self, part: usize) {
        self.assignment.remove(&part);
    }

    pub fn get(&self, part: usize) -> Option<VertexId> {
        self.assignment.get(&part).copied()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &VertexId)> {
        self.assignment.iter()
    }

    /// Sorted (part, vertex) pairs, the serialization form.
    pub fn to_pairs(&self) -> Vec<(usize, VertexId)> {
        self.assignment.iter().map(|(&p, &v)| (p, v)).collect()
    }

    pub fn image(&self) -> Vec<VertexId> {
        self.assignment.values().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_parts_two_edges() -> PartitionedHypergraph {
        // parts {a,b} = {0,1}, {c,d} = {2,3}; edges ac, ad
        PartitionedHypergraph::new(2, vec![vec![0, 1], vec![2, 3]], vec![vec![0, 2], vec![0, 3]])
            .unwrap()
    }

    #[test]
    fn avg_degree_edgeless_is_zero() {
        let g = PartitionedHypergraph::new(2, vec![vec![0, 1]], vec![]).unwrap();
        assert_eq!(g.avg_degree_of_part(0).unwrap(), Ratio::new(0, 1));
    }

    #[test]
    fn avg_degree_empty_part_errors() {
        let g = PartitionedHypergraph::new(2, vec![vec![], vec![0], vec![1]], vec![]).unwrap();
        assert_eq!(g.avg_degree_of_part(0), Err(StatsError::DegeneratePart(0)));
    }

    #[test]
    fn avg_degree_hand_enumeration() {
        // 3 parts of size 2, one edge between each pair, vertex 0 in two of them:
        // edges 0-2, 0-4, 2-4
        let g = PartitionedHypergraph::new(
            2,
            vec![vec![0, 1], vec![2, 3], vec![4, 5]],
            vec![vec![0, 2], vec![0, 4], vec![2, 4]],
        )
        .unwrap();
        assert_eq!(g.avg_degree_of_part(0).unwrap(), Ratio::new(1, 1));
        assert_eq!(g.degree(0), 2);
    }

    #[test]
    fn local_degree_cases() {
        let g = PartitionedHypergraph::new(2, vec![vec![0, 1], vec![2, 3]], vec![]).unwrap();
        assert_eq!(g.local_degree().unwrap(), 0);
        assert_eq!(two_parts_two_edges().local_degree().unwrap(), 2);
        let h = PartitionedHypergraph::new(
            3,
            vec![vec![0], vec![1], vec![2]],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        assert_eq!(h.local_degree(), Err(StatsError::GraphsOnly(3)));
    }

    #[test]
    fn transversal_check_edgeless_and_partial() {
        let g = PartitionedHypergraph::new(2, vec![vec![0, 1], vec![2, 3]], vec![]).unwrap();
        let t = Transversal::from_pairs([(0, 0), (1, 2)]);
        assert!(g.is_independent_transversal(&t));
        let partial = Transversal::from_pairs([(0, 0)]);
        assert!(!g.is_independent_transversal(&partial));
        // vertex from the wrong part
        let wrong = Transversal::from_pairs([(0, 2), (1, 3)]);
        assert!(!g.is_independent_transversal(&wrong));
    }

    #[test]
    fn transversal_check_detects_edges() {
        let g = two_parts_two_edges();
        assert!(!g.is_independent_transversal(&Transversal::from_pairs([(0, 0), (1, 2)])));
        assert!(g.is_independent_transversal(&Transversal::from_pairs([(0, 1), (1, 2)])));
    }

    #[test]
    fn validation_rejects_bad_input() {
        assert!(matches!(
            PartitionedHypergraph::new(2, vec![vec![0], vec![0]], vec![]),
            Err(BuildError::DuplicateVertex(0))
        ));
        assert!(matches!(
            PartitionedHypergraph::new(2, vec![vec![0, 1], vec![2]], vec![vec![0, 1]]),
            Err(BuildError::EdgeInsidePart { part: 0, .. })
        ));
        assert!(matches!(
            PartitionedHypergraph::new(3, vec![vec![0], vec![1], vec![2]], vec![vec![0, 1]]),
            Err(BuildError::BadEdgeArity { got: 2, .. })
        ));
        assert!(matches!(
            PartitionedHypergraph::new(2, vec![vec![0], vec![5]], vec![]),
            Err(BuildError::NonDenseIds { .. })
        ));
    }

    #[test]
    fn canonicalization_sorts_and_dedups() {
        let g = PartitionedHypergraph::new(
            2,
            vec![vec![1, 0], vec![3, 2]],
            vec![vec![2, 0], vec![0, 2]],
        )
        .unwrap();
        assert_eq!(g.part(0), &[0, 1]);
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.edge(0), &[0, 2]);
    }

    #[test]
    fn induced_relabels_densely() {
        let g = two_parts_two_edges();
        let (h, old) = g.induced(&[true, false, true, true]);
        assert_eq!(h.num_vertices(), 3);
        assert_eq!(h.num_edges(), 2);
        assert_eq!(old, vec![0, 2, 3]);
        assert_eq!(h.part(0).len(), 1);
    }

    #[test]
    fn shrink_deletes_max_degree_first() {
        let g = two_parts_two_edges(); // deg: 0->2, 1->0, 2->1, 3->1
        let (h, old) = g.shrink_parts_to(1);
        // part 0 keeps vertex 1 (vertex 0 has larger degree); part 1 keeps
        // id 2: after deleting 0, degrees of 2 and 3 drop to 0, tie -> smallest id deleted? no:
        // deletion removes the max-degree vertex, ties smallest id, so 2 is deleted.
        assert_eq!(h.num_vertices(), 2);
        assert_eq!(old[0], 1);
        assert_eq!(old[1], 3);
    }

    // size * avg_degree equals the exact degree sum, in exact arithmetic
    #[test]
    fn rational_identity_exact() {
        let g = PartitionedHypergraph::new(
            2,
            vec![vec![0, 1, 2], vec![3, 4], vec![5, 6, 7]],
            vec![vec![0, 3], vec![0, 5], vec![1, 4], vec![3, 5], vec![2, 6]],
        )
        .unwrap();
        for i in 0..g.num_parts() {
            let sum: u64 = g.part(i).iter().map(|&v| g.degree(v) as u64).sum();
            let avg = g.avg_degree_of_part(i).unwrap();
            assert_eq!(avg * Ratio::new(g.part(i).len() as u64, 1), Ratio::new(sum, 1));
        }
    }
}

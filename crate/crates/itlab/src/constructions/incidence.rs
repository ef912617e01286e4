//! The neighbourhood incidence reduction and padding to exact
//! (n,k,r,s)-graphs.
//!
//! From a host H with A-degrees >= k and every r-subset of A sharing at most
//! s common neighbours, the incidence r-graph has a part {a} x N(a) per
//! A-vertex and an edge through the copies of each common neighbour. A
//! transversal picks one b per a; independence forces each b to serve at
//! most r-1 parts, so m(r-1) < n rules out independent transversals
//! entirely — that is the pigeonhole certificate.

use rand::Rng;

use super::host::BipartiteHost;
use super::ConstructError;
use crate::combi::Combinations;
use crate::hypergraph::{PartitionedHypergraph, VertexId};
use crate::rng::rng;

/// Build the neighbourhood incidence r-graph of a host.
///
/// Parts appear in A order; the vertex for (a, b) is dense across the
/// concatenated neighbour lists. Any r parts induce at most
/// |N(a_1) ∩ ... ∩ N(a_r)| edges and those edges form a matching.
pub fn neighbourhood_incidence_graph(
    host: &BipartiteHost,
    r: usize,
) -> Result<PartitionedHypergraph, ConstructError> {
    if r < 2 {
        return Err(ConstructError::BadParameter(format!("r must be >= 2, got {r}")));
    }
    if r > host.n() {
        return Err(ConstructError::TooFewParts {
            parts: host.n(),
            r,
        });
    }
    let mut offsets = Vec::with_capacity(host.n());
    let mut total = 0u32;
    for a in 0..host.n() {
        if host.degree(a) == 0 {
            return Err(ConstructError::BadParameter(format!(
                "A-vertex {a} has empty neighbourhood (its part would be empty)"
            )));
        }
        offsets.push(total);
        total += host.degree(a) as u32;
    }
    let parts: Vec<Vec<VertexId>> = (0..host.n())
        .map(|a| (offsets[a]..offsets[a] + host.degree(a) as u32).collect())
        .collect();
    // vertex id of (a, b): offset[a] + rank of b in N(a)
    let vertex_of = |a: usize, b: u32| -> VertexId {
        let rank = host.neighbours(a).binary_search(&b).expect("b in N(a)") as u32;
        offsets[a] + rank
    };
    let mut edges = Vec::new();
    let rev = host.reverse_adjacency();
    for (b, incident) in rev.iter().enumerate() {
        if incident.len() < r {
            continue;
        }
        let mut combos = Combinations::new(incident.len(), r);
        while let Some(set) = combos.next() {
            let edge: Vec<VertexId> = set
                .iter()
                .map(|&idx| vertex_of(incident[idx] as usize, b as u32))
                .collect();
            edges.push(edge);
        }
    }
    Ok(PartitionedHypergraph::new(r, parts, edges)?)
}

/// The pigeonhole certificate: with one part per A-vertex and every B-vertex
/// usable by at most r-1 parts, m(r-1) < n leaves some part unservable.
pub fn verify_no_transversal_by_pigeonhole(host: &BipartiteHost, r: usize) -> bool {
    host.m() * (r - 1) < host.n()
}

/// Pad an incidence-style instance to an exact (n,k,r,s)-graph: shrink every
/// part to size k (deleting max-degree vertices first, ties to the smallest
/// id), then top up every r-set of parts to exactly s matching edges with
/// uniformly random filler edges that avoid vertices already covered by that
/// r-set's edges.
///
/// Vertex deletion and edge addition both preserve "has no independent
/// transversal", so a certified input yields a certified output.
pub fn pad_to_nkrs(
    g: &PartitionedHypergraph,
    k: usize,
    s: usize,
    seed: u64,
) -> Result<PartitionedHypergraph, ConstructError> {
    if s > k {
        return Err(ConstructError::MatchingNotCompletable { s, k });
    }
    for (i, part) in g.parts().iter().enumerate() {
        if part.len() < k {
            return Err(ConstructError::PartTooSmall {
                part: i,
                size: part.len(),
                needed: k,
            });
        }
    }
    let r = g.uniformity();
    let n = g.num_parts();
    let (shrunk, _) = g.shrink_parts_to(k);

    // bucket surviving edges by the sorted part set they touch
    let mut by_parts: std::collections::HashMap<Vec<u32>, Vec<usize>> =
        std::collections::HashMap::new();
    for (ei, e) in shrunk.edges().iter().enumerate() {
        let mut sig: Vec<u32> = e.iter().map(|&v| shrunk.part_of(v) as u32).collect();
        sig.sort_unstable();
        sig.dedup();
        by_parts.entry(sig).or_default().push(ei);
    }
    let full_signatures: Vec<&Vec<u32>> = by_parts.keys().filter(|sig| sig.len() < r).collect();
    if !full_signatures.is_empty() {
        // edges spanning < r parts can appear in several r-sets; the padding
        // contract only covers transversal edges
        return Err(ConstructError::BadParameter(
            "padding requires every edge to span r distinct parts".into(),
        ));
    }

    let mut rng = rng(seed);
    let mut new_edges: Vec<Vec<VertexId>> = shrunk.edges().to_vec();
    let mut combos = Combinations::new(n, r);
    while let Some(set) = combos.next() {
        let sig: Vec<u32> = set.iter().map(|&p| p as u32).collect();
        let existing = by_parts.get(&sig).map(Vec::as_slice).unwrap_or(&[]);
        if existing.len() > s {
            return Err(ConstructError::MatchingViolation {
                parts: sig.iter().map(|&p| p as usize).collect(),
                count: existing.len(),
                s,
            });
        }
        // vertices of each part already covered by this r-set's edges
        let mut used: Vec<Vec<VertexId>> = vec![Vec::new(); r];
        for &ei in existing {
            for &v in shrunk.edge(ei) {
                let slot = sig
                    .iter()
                    .position(|&p| p as usize == shrunk.part_of(v))
                    .expect("edge vertex in signature");
                if used[slot].contains(&v) {
                    return Err(ConstructError::MatchingViolation {
                        parts: sig.iter().map(|&p| p as usize).collect(),
                        count: existing.len(),
                        s,
                    });
                }
                used[slot].push(v);
            }
        }
        for _ in existing.len()..s {
            let mut edge = Vec::with_capacity(r);
            for (slot, &p) in set.iter().enumerate() {
                let free: Vec<VertexId> = shrunk
                    .part(p)
                    .iter()
                    .copied()
                    .filter(|v| !used[slot].contains(v))
                    .collect();
                debug_assert!(!free.is_empty(), "s <= k guarantees a free vertex");
                let v = free[rng.random_range(0..free.len())];
                used[slot].push(v);
                edge.push(v);
            }
            new_edges.push(edge);
        }
    }
    Ok(PartitionedHypergraph::new(
        r,
        shrunk.parts().to_vec(),
        new_edges,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::census::matching_census;
    use crate::solvers::exact::{exact_find, ExactOutcome};

    /// K_{3,2}: 3 parts of size 2; each pair of parts carries the 2 edges of
    /// a perfect matching; no independent transversal (brute force: 8
    /// assignments, 3 values from a 2-element set always collide).
    fn k32_incidence() -> PartitionedHypergraph {
        let host = BipartiteHost::complete(3, 2);
        neighbourhood_incidence_graph(&host, 2).unwrap()
    }

    #[test]
    fn k32_structure() {
        let g = k32_incidence();
        assert_eq!(g.num_parts(), 3);
        assert!(g.parts().iter().all(|p| p.len() == 2));
        let census = matching_census(&g, 100);
        assert!(census.per_set.iter().all(|e| e.edge_count == 2 && e.is_matching));
    }

    #[test]
    fn k32_has_no_transversal() {
        let g = k32_incidence();
        // brute force over all 2^3 assignments
        let mut found = false;
        for a in 0..2u32 {
            for b in 0..2u32 {
                for c in 0..2u32 {
                    let t = crate::hypergraph::Transversal::from_pairs([
                        (0, a),
                        (1, 2 + b),
                        (2, 4 + c),
                    ]);
                    found |= g.is_independent_transversal(&t);
                }
            }
        }
        assert!(!found);
        assert!(verify_no_transversal_by_pigeonhole(
            &BipartiteHost::complete(3, 2),
            2
        ));
    }

    #[test]
    fn disjoint_neighbourhoods_give_edgeless_graph() {
        let host = BipartiteHost::new(3, 3, vec![vec![0], vec![1], vec![2]]).unwrap();
        let g = neighbourhood_incidence_graph(&host, 2).unwrap();
        assert_eq!(g.num_edges(), 0);
    }

    #[test]
    fn pigeonhole_cases() {
        assert!(!verify_no_transversal_by_pigeonhole(
            &BipartiteHost::complete(4, 4),
            2
        ));
        // n=7, m=6, r=2: the Fano host with one line deleted
        assert!(verify_no_transversal_by_pigeonhole(
            &BipartiteHost::complete(7, 6),
            2
        ));
    }

    #[test]
    fn too_few_parts_error() {
        let host = BipartiteHost::complete(2, 3);
        assert!(matches!(
            neighbourhood_incidence_graph(&host, 3),
            Err(ConstructError::TooFewParts { .. })
        ));
    }

    #[test]
    fn fano_pad_has_no_transversal() {
        let (host, _) = crate::constructions::projective::projective_plane_host(2).unwrap();
        let g = neighbourhood_incidence_graph(&host, 2).unwrap();
        let padded = pad_to_nkrs(&g, 2, 1, 77).unwrap();
        assert_eq!(padded.num_parts(), 7);
        assert!(padded.parts().iter().all(|p| p.len() == 2));
        let census = matching_census(&padded, 1000);
        assert_eq!(census.uniform_s, Some(1));
        assert!(census.all_matchings);
        match exact_find(&padded, 10_000) {
            ExactOutcome::NoTransversal { nodes } => assert!(nodes <= 128),
            other => panic!("expected no transversal, got {other:?}"),
        }
    }

    #[test]
    fn pad_is_idempotent_on_exact_instances() {
        let g = crate::constructions::random::random_nkrs(5, 3, 2, 1, 4).unwrap();
        let padded = pad_to_nkrs(&g, 3, 1, 9).unwrap();
        assert_eq!(g, padded);
    }

    #[test]
    fn pad_with_s_equal_k_gives_perfect_matchings() {
        let g = crate::constructions::random::random_nkrs(4, 3, 2, 1, 2).unwrap();
        let padded = pad_to_nkrs(&g, 3, 3, 5).unwrap();
        let census = matching_census(&padded, 100);
        assert_eq!(census.uniform_s, Some(3));
        assert!(census.all_matchings);
    }

    #[test]
    fn pad_errors() {
        let g = crate::constructions::random::random_nkrs(4, 2, 2, 1, 2).unwrap();
        assert!(matches!(
            pad_to_nkrs(&g, 2, 3, 0),
            Err(ConstructError::MatchingNotCompletable { .. })
        ));
        assert!(matches!(
            pad_to_nkrs(&g, 3, 1, 0),
            Err(ConstructError::PartTooSmall { .. })
        ));
    }
}

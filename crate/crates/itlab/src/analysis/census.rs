//! Exhaustive censuses: per-r-set edge counts and matching checks on
//! instances, and common-neighbourhood maxima on hosts. These certify the
//! constructions, so the host census refuses to sample; the instance census
//! may truncate but always says so.

use serde::Serialize;

use super::bounds::AnalysisError;
use crate::combi::{binomial, Combinations};
use crate::constructions::host::BipartiteHost;
use crate::hypergraph::PartitionedHypergraph;
use crate::rng::rng;
use rand::Rng;

#[derive(Debug, Clone, Serialize)]
pub struct MatchingCensusEntry {
    pub parts: Vec<u32>,
    pub edge_count: usize,
    pub is_matching: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchingCensus {
    pub per_set: Vec<MatchingCensusEntry>,
    /// true when the census stopped at the budget (prefix of the r-sets in
    /// lexicographic order; never silent)
    pub partial: bool,
    /// Some(s) when every censused r-set induces exactly s edges
    pub uniform_s: Option<usize>,
    pub all_matchings: bool,
    pub max_edges: usize,
}

/// Census every r-set of parts (or the lexicographic prefix of `max_sets`):
/// how many edges it induces and whether they form a matching.
pub fn matching_census(g: &PartitionedHypergraph, max_sets: u64) -> MatchingCensus {
    let r = g.uniformity();
    let n = g.num_parts();
    // bucket edges by their sorted part signature; edges spanning fewer than
    // r parts are looked up by subset containment
    let mut exact: std::collections::HashMap<Vec<u32>, Vec<usize>> = std::collections::HashMap::new();
    let mut small: Vec<(Vec<u32>, usize)> = Vec::new();
    for (ei, e) in g.edges().iter().enumerate() {
        let mut sig: Vec<u32> = e.iter().map(|&v| g.part_of(v) as u32).collect();
        sig.sort_unstable();
        sig.dedup();
        if sig.len() == r {
            exact.entry(sig).or_default().push(ei);
        } else {
            small.push((sig, ei));
        }
    }
    let mut per_set = Vec::new();
    let mut combos = Combinations::new(n, r);
    let mut seen = 0u64;
    let mut partial = false;
    while let Some(set) = combos.next() {
        if seen >= max_sets {
            partial = true;
            break;
        }
        seen += 1;
        let sig: Vec<u32> = set.iter().map(|&p| p as u32).collect();
        let mut edge_ids: Vec<usize> = exact.get(&sig).cloned().unwrap_or_default();
        for (ssig, ei) in &small {
            if ssig.iter().all(|p| sig.binary_search(p).is_ok()) {
                edge_ids.push(*ei);
            }
        }
        let mut vertices = Vec::new();
        for &ei in &edge_ids {
            vertices.extend_from_slice(g.edge(ei));
        }
        let total = vertices.len();
        vertices.sort_unstable();
        vertices.dedup();
        per_set.push(MatchingCensusEntry {
            parts: sig,
            edge_count: edge_ids.len(),
            is_matching: vertices.len() == total,
        });
    }
    let uniform_s = per_set
        .first()
        .map(|e| e.edge_count)
        .filter(|&s| per_set.iter().all(|e| e.edge_count == s));
    let all_matchings = per_set.iter().all(|e| e.is_matching);
    let max_edges = per_set.iter().map(|e| e.edge_count).max().unwrap_or(0);
    MatchingCensus {
        per_set,
        partial,
        uniform_s,
        all_matchings,
        max_edges,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CommonNeighbourCensus {
    pub max: usize,
    pub witness: Vec<u32>,
    pub subsets_checked: u64,
}

/// Exact maximum, over all r-subsets of A, of the common neighbourhood size.
/// Errors when C(n, r) exceeds the budget: this census certifies
/// constructions and must not sample.
pub fn common_neighbour_census(
    host: &BipartiteHost,
    r: usize,
    max_subsets: u64,
) -> Result<CommonNeighbourCensus, AnalysisError> {
    let total = binomial(host.n() as u64, r as u64);
    if total > max_subsets as u128 {
        return Err(AnalysisError::CensusBudget(total, max_subsets));
    }
    let rows = host.bitset_rows();
    let words = rows.first().map_or(0, |r| r.len());
    let mut combos = Combinations::new(host.n(), r);
    let mut scratch = vec![0u64; words];
    let mut best = 0usize;
    let mut witness = Vec::new();
    let mut checked = 0u64;
    while let Some(set) = combos.next() {
        checked += 1;
        scratch.copy_from_slice(&rows[set[0]]);
        for &a in &set[1..] {
            for (w, x) in scratch.iter_mut().zip(&rows[a]) {
                *w &= x;
            }
        }
        let common = scratch.iter().map(|w| w.count_ones()).sum::<u32>() as usize;
        if common > best || witness.is_empty() {
            best = common;
            witness = set.iter().map(|&a| a as u32).collect();
        }
    }
    Ok(CommonNeighbourCensus {
        max: best,
        witness,
        subsets_checked: checked,
    })
}

/// Seeded sampled variant for hosts too large to census exhaustively; only
/// for diagnostics, never for certification.
pub fn common_neighbour_census_sampled(
    host: &BipartiteHost,
    r: usize,
    samples: u64,
    seed: u64,
) -> CommonNeighbourCensus {
    let rows = host.bitset_rows();
    let words = rows.first().map_or(0, |r| r.len());
    let mut rng = rng(seed);
    let mut scratch = vec![0u64; words];
    let mut best = 0usize;
    let mut witness = Vec::new();
    for _ in 0..samples {
        // distinct r-subset by rejection
        let mut set = Vec::with_capacity(r);
        while set.len() < r {
            let a = rng.random_range(0..host.n());
            if !set.contains(&a) {
                set.push(a);
            }
        }
        scratch.copy_from_slice(&rows[set[0]]);
        for &a in &set[1..] {
            for (w, x) in scratch.iter_mut().zip(&rows[a]) {
                *w &= x;
            }
        }
        let common = scratch.iter().map(|w| w.count_ones()).sum::<u32>() as usize;
        if common > best || witness.is_empty() {
            best = common;
            witness = set.iter().map(|&a| a as u32).collect();
        }
    }
    CommonNeighbourCensus {
        max: best,
        witness,
        subsets_checked: samples,
    }
}

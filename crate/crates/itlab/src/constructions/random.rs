//! Probabilistic generators: random bipartite hosts and uniformly random
//! (n,k,r,s)-graphs.

use rand::Rng;
use serde::Serialize;

use super::host::{BipartiteHost, HostCertificate};
use super::ConstructError;
use crate::combi::Combinations;
use crate::hypergraph::{PartitionedHypergraph, VertexId};
use crate::rng::{rng, rng_from};

pub const RANDOM_HOST_RETRIES: u32 = 20;

/// Provenance of an accepted random host.
#[derive(Debug, Clone, Serialize)]
pub struct RandomHostProvenance {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub s: usize,
    pub eps: f64,
    pub edge_probability: f64,
    pub degree_floor: f64,
    /// whether the asymptotic regime m >= s >= 10 r eps^-4 ln(n) held
    pub paper_regime: bool,
    pub retries_used: u32,
    pub retry_budget: u32,
}

/// Sample a bipartite host with edge probability (1-eps/2)(s/m)^(1/r),
/// capped at 1, and retry (derived seeds) until every r-subset of A has at
/// most s common neighbours and the A-side minimum degree reaches
/// (1-eps) s^(1/r) m^(1-1/r).
///
/// Domain: r >= 2, n >= r, 1 <= s <= m, eps in (0, 1/r]. The asymptotic
/// lower bound s >= 10 r eps^-4 ln(n) is recorded in the provenance but not
/// enforced: it is empty at desk scale.
pub fn random_bipartite_host(
    n: usize,
    m: usize,
    r: usize,
    s: usize,
    eps: f64,
    seed: u64,
) -> Result<(BipartiteHost, HostCertificate, RandomHostProvenance), ConstructError> {
    if r < 2 {
        return Err(ConstructError::BadParameter(format!("r must be >= 2, got {r}")));
    }
    if n < r {
        return Err(ConstructError::BadParameter(format!(
            "need n >= r, got n={n}, r={r}"
        )));
    }
    if s < 1 || s > m {
        return Err(ConstructError::BadParameter(format!(
            "need 1 <= s <= m, got s={s}, m={m}"
        )));
    }
    if !(eps > 0.0 && eps <= 1.0 / r as f64) {
        return Err(ConstructError::BadParameter(format!(
            "need eps in (0, 1/r], got eps={eps}, r={r}"
        )));
    }
    let p = ((1.0 - eps / 2.0) * (s as f64 / m as f64).powf(1.0 / r as f64)).min(1.0);
    let floor = (1.0 - eps) * (s as f64).powf(1.0 / r as f64) * (m as f64).powf(1.0 - 1.0 / r as f64);
    let c = 10.0 * r as f64 * eps.powi(-4);
    let paper_regime = (s as f64) >= c * (n as f64).ln() && s <= m;
    let budget = RANDOM_HOST_RETRIES;
    let mut last_failure = String::new();

    for retry in 0..budget {
        let mut rng = rng_from(seed, retry as u64);
        let mut adj = vec![Vec::new(); n];
        for (a, row) in adj.iter_mut().enumerate() {
            let _ = a;
            for b in 0..m as u32 {
                if rng.random::<f64>() < p {
                    row.push(b);
                }
            }
        }
        let host = BipartiteHost::new(n, m, adj)?;
        let min_deg = host.min_degree_a();
        if (min_deg as f64) < floor {
            last_failure = format!("min A-degree {min_deg} below floor {floor:.3}");
            continue;
        }
        // exhaustive r-subset census with early abort beyond s
        match census_at_most(&host, r, s) {
            Ok(max_common) => {
                let cert = HostCertificate {
                    min_degree_a: min_deg,
                    max_common_neighbours: max_common,
                    r,
                };
                let prov = RandomHostProvenance {
                    n,
                    m,
                    r,
                    s,
                    eps,
                    edge_probability: p,
                    degree_floor: floor,
                    paper_regime,
                    retries_used: retry + 1,
                    retry_budget: budget,
                };
                return Ok((host, cert, prov));
            }
            Err(found) => {
                last_failure = format!("an r-subset of A has {found} > {s} common neighbours");
            }
        }
    }
    Err(ConstructError::RetryExhausted {
        what: format!("random bipartite host (n={n}, m={m}, r={r}, s={s})"),
        condition: last_failure,
    })
}

/// Max common neighbourhood over r-subsets if it stays <= cap, otherwise
/// Err(first violating count).
fn census_at_most(host: &BipartiteHost, r: usize, cap: usize) -> Result<usize, usize> {
    let rows = host.bitset_rows();
    let words = rows.first().map_or(0, |r| r.len());
    let mut combos = Combinations::new(host.n(), r);
    let mut scratch = vec![0u64; words];
    let mut max_seen = 0usize;
    while let Some(set) = combos.next() {
        scratch.copy_from_slice(&rows[set[0]]);
        for &a in &set[1..] {
            for (w, x) in scratch.iter_mut().zip(&rows[a]) {
                *w &= x;
            }
        }
        let common: u32 = scratch.iter().map(|w| w.count_ones()).sum();
        let common = common as usize;
        if common > cap {
            return Err(common);
        }
        max_seen = max_seen.max(common);
    }
    Ok(max_seen)
}

/// A uniformly random (n,k,r,s)-graph: n parts of size k, and for every
/// r-set of parts an independent, uniformly random matching of exactly s
/// transversal edges.
///
/// Each part of an r-set contributes an ordered s-prefix drawn by seeded
/// Fisher–Yates; edge j matches the j-th slots. Every unordered matching
/// arises from exactly s! ordered draws, so the matching is uniform.
pub fn random_nkrs(
    n: usize,
    k: usize,
    r: usize,
    s: usize,
    seed: u64,
) -> Result<PartitionedHypergraph, ConstructError> {
    if r < 2 || r > n {
        return Err(ConstructError::BadParameter(format!(
            "need 2 <= r <= n, got r={r}, n={n}"
        )));
    }
    if k == 0 {
        return Err(ConstructError::BadParameter("parts must be nonempty (k >= 1)".into()));
    }
    if s > k {
        return Err(ConstructError::BadParameter(format!(
            "matching condition needs s <= k, got s={s}, k={k}"
        )));
    }
    let parts: Vec<Vec<VertexId>> = (0..n)
        .map(|i| ((i * k) as u32..((i + 1) * k) as u32).collect())
        .collect();
    let mut edges: Vec<Vec<VertexId>> = Vec::new();
    if s > 0 {
        let mut rng = rng(seed);
        let mut combos = Combinations::new(n, r);
        let mut slots: Vec<Vec<u32>> = vec![(0..k as u32).collect(); r];
        while let Some(set) = combos.next() {
            for slot in slots.iter_mut() {
                // Fisher–Yates prefix of length s
                for t in 0..s {
                    let j = t + rng.random_range(0..(k - t));
                    slot.swap(t, j);
                }
            }
            for j in 0..s {
                let edge: Vec<VertexId> = set
                    .iter()
                    .enumerate()
                    .map(|(c, &part)| (part * k) as u32 + slots[c][j])
                    .collect();
                edges.push(edge);
            }
        }
    }
    Ok(PartitionedHypergraph::new(r, parts, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::census::matching_census;

    #[test]
    fn nkrs_edge_count_and_local_degree() {
        let g = random_nkrs(5, 2, 2, 1, 0).unwrap();
        assert_eq!(g.num_edges(), 10); // C(5,2) pairs, one edge each
        assert_eq!(g.local_degree().unwrap(), 1);
        // every part has average degree (n-1)s/k = 2
        for i in 0..5 {
            assert_eq!(
                g.avg_degree_of_part(i).unwrap(),
                num_rational::Ratio::new(2, 1)
            );
        }
    }

    #[test]
    fn nkrs_s_zero_is_edgeless() {
        let g = random_nkrs(4, 3, 2, 0, 9).unwrap();
        assert_eq!(g.num_edges(), 0);
    }

    #[test]
    fn nkrs_census_validates_matchings() {
        let g = random_nkrs(7, 4, 3, 2, 123).unwrap();
        let census = matching_census(&g, 10_000);
        assert!(!census.partial);
        assert_eq!(census.uniform_s, Some(2));
        assert!(census.all_matchings);
    }

    #[test]
    fn nkrs_deterministic_under_seed() {
        assert_eq!(
            random_nkrs(6, 3, 2, 2, 42).unwrap(),
            random_nkrs(6, 3, 2, 2, 42).unwrap()
        );
        assert_ne!(
            random_nkrs(6, 3, 2, 2, 42).unwrap(),
            random_nkrs(6, 3, 2, 2, 43).unwrap()
        );
    }

    #[test]
    fn nkrs_rejects_bad_parameters() {
        assert!(random_nkrs(3, 2, 4, 1, 0).is_err()); // r > n
        assert!(random_nkrs(5, 2, 2, 3, 0).is_err()); // s > k
    }

    #[test]
    fn nkrs_matchings_are_uniform() {
        // n=3, k=2, r=2, s=1: each pair's single edge is one of 4 equally
        // likely slot pairs; frequency must be 1/4 +- 0.02 over 10^4 seeds
        let trials = 10_000usize;
        let mut counts = [[0usize; 4]; 3];
        for seed in 0..trials as u64 {
            let g = random_nkrs(3, 2, 2, 1, seed).unwrap();
            for (pair_idx, (i, j)) in [(0usize, 1usize), (0, 2), (1, 2)].iter().enumerate() {
                let e = g
                    .edges()
                    .iter()
                    .find(|e| {
                        g.part_of(e[0]) == *i && g.part_of(e[1]) == *j
                    })
                    .unwrap();
                let a = (e[0] as usize) % 2;
                let b = (e[1] as usize) % 2;
                counts[pair_idx][a * 2 + b] += 1;
            }
        }
        for pair in &counts {
            for &c in pair {
                let freq = c as f64 / trials as f64;
                assert!((freq - 0.25).abs() <= 0.02, "frequency {freq}");
            }
        }
    }

    #[test]
    fn host_boundary_s_equals_m() {
        // s = m: the census cap is vacuous, acceptance is driven by degrees
        let (host, cert, prov) = random_bipartite_host(6, 5, 2, 5, 0.4, 7).unwrap();
        assert!(cert.max_common_neighbours <= 5);
        assert!(host.min_degree_a() as f64 >= prov.degree_floor);
    }

    #[test]
    fn host_domain_errors() {
        assert!(random_bipartite_host(5, 4, 2, 5, 0.4, 0).is_err()); // s > m
        assert!(random_bipartite_host(1, 4, 2, 2, 0.4, 0).is_err()); // n < r
        assert!(random_bipartite_host(5, 4, 2, 2, 0.9, 0).is_err()); // eps > 1/r
    }

    #[test]
    fn host_is_deterministic() {
        let a = random_bipartite_host(30, 20, 2, 8, 0.5, 5).unwrap();
        let b = random_bipartite_host(30, 20, 2, 8, 0.5, 5).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }
}

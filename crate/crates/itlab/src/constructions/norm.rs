//! Norm graphs on F_{q^2} x F_q^* and the bipartite hosts they yield.
//!
//! Vertices are pairs (A, a) with A in F_{q^2} and a in F_q^*; (A, a) and
//! (B, b) are adjacent iff N(A - B) = a·b, where N(x) = x^(q+1) is the field
//! norm. The difference form keeps the relation symmetric (N(-1) = 1 for odd
//! q) and loop-free (N(0) = 0 is never a product of units), so the graph is
//! exactly (q^2 - 1)-regular: for each B != A there is exactly one b solving
//! the equation. Any three distinct vertices have at most 2 = (3-1)! common
//! neighbours, which is the K_{3,3}-freeness certificate.

use rand::Rng;

use super::gf::QuadraticField;
use super::host::{BipartiteHost, HostCertificate};
use super::ConstructError;
use crate::rng::rng_from;

/// The underlying norm graph, kept as plain adjacency lists.
#[derive(Debug, Clone)]
pub struct NormGraph {
    pub q: u64,
    /// vertex i = (element index, unit a); id = elem_index * (q-1) + (a-1)
    pub adj: Vec<Vec<u32>>,
}

impl NormGraph {
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }
}

/// Build the norm graph for a prime q >= 3.
pub fn norm_graph(q: u64) -> Result<NormGraph, ConstructError> {
    if q < 3 {
        return Err(ConstructError::BadParameter(format!(
            "norm graph needs an odd prime q >= 3, got {q}"
        )));
    }
    let field = QuadraticField::new(q)?;
    let elements: Vec<_> = field.elements().collect();
    let units = (q - 1) as usize;
    let order = elements.len() * units;
    // norm of every difference, via one pass over element pairs
    let mut norm_of = vec![0u64; elements.len()];
    for (i, &e) in elements.iter().enumerate() {
        norm_of[i] = field.norm(e);
    }
    let vid = |elem_idx: usize, a: u64| -> usize { elem_idx * units + (a - 1) as usize };
    let mut adj = vec![Vec::with_capacity((q * q - 1) as usize); order];
    for (i, &ei) in elements.iter().enumerate() {
        for (j, &ej) in elements.iter().enumerate().skip(i + 1) {
            let diff = field.sub(ei, ej);
            let n = norm_of[field.index_of(diff)];
            if n == 0 {
                continue; // only happens for i == j
            }
            // a * b = n: for each unit a, b is determined
            for a in 1..q {
                let b = n * mod_inverse(a, q) % q;
                debug_assert!(b >= 1);
                let u = vid(i, a);
                let v = vid(j, b);
                adj[u].push(v as u32);
                adj[v].push(u as u32);
            }
        }
    }
    for row in adj.iter_mut() {
        row.sort_unstable();
    }
    Ok(NormGraph { q, adj })
}

fn mod_inverse(a: u64, q: u64) -> u64 {
    // q prime, a != 0: a^(q-2)
    let mut acc = 1u64;
    let mut base = a % q;
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    acc
}

/// Provenance of an accepted norm-graph bipartition.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NormHostProvenance {
    pub q: u64,
    pub order: usize,
    pub degree: usize,
    pub a_size: usize,
    pub b_size: usize,
    pub degree_floor: usize,
    pub retries_used: u32,
    pub retry_budget: u32,
}

pub const NORM_BIPARTITION_RETRIES: u32 = 50;

/// Sample an A/B bipartition of the norm graph (each vertex lands in B with
/// probability 1/(r+1) = 1/4) and retry until every A-vertex has at least
/// `max(1, (q^2-1)/10)` B-neighbours and |A| > 2|B|. The host's A-side is
/// indexed by the surviving A-vertices, B by the B-vertices.
///
/// The degree floor is a calibration constant: the mean B-degree is
/// (q^2-1)/4, and demanding the mean of every vertex is hopeless at small q,
/// so the floor sits well below it and the certificate records what was
/// actually achieved.
pub fn norm_graph_host(
    q: u64,
    seed: u64,
) -> Result<(BipartiteHost, HostCertificate, NormHostProvenance), ConstructError> {
    let graph = norm_graph(q)?;
    let order = graph.order();
    let degree = (q * q - 1) as usize;
    let floor = ((degree / 10).max(1)) as usize;
    let budget = NORM_BIPARTITION_RETRIES;
    for retry in 0..budget {
        let mut rng = rng_from(seed, retry as u64);
        let in_b: Vec<bool> = (0..order).map(|_| rng.random::<f64>() < 0.25).collect();
        let b_ids: Vec<u32> = (0..order).filter(|&v| in_b[v]).map(|v| v as u32).collect();
        let a_ids: Vec<u32> = (0..order).filter(|&v| !in_b[v]).map(|v| v as u32).collect();
        if a_ids.len() <= 2 * b_ids.len() || b_ids.is_empty() {
            continue;
        }
        let mut b_index = vec![u32::MAX; order];
        for (bi, &v) in b_ids.iter().enumerate() {
            b_index[v as usize] = bi as u32;
        }
        let adj: Vec<Vec<u32>> = a_ids
            .iter()
            .map(|&a| {
                graph.adj[a as usize]
                    .iter()
                    .filter(|&&w| in_b[w as usize])
                    .map(|&w| b_index[w as usize])
                    .collect()
            })
            .collect();
        if adj.iter().any(|row: &Vec<u32>| row.len() < floor) {
            continue;
        }
        let host = BipartiteHost::new(a_ids.len(), b_ids.len(), adj)?;
        let cert = HostCertificate::recompute(&host, 3, 20_000_000)?;
        let prov = NormHostProvenance {
            q,
            order,
            degree,
            a_size: host.n(),
            b_size: host.m(),
            degree_floor: floor,
            retries_used: retry + 1,
            retry_budget: budget,
        };
        return Ok((host, cert, prov));
    }
    Err(ConstructError::RetryExhausted {
        what: format!("norm graph bipartition (q={q})"),
        condition: format!(
            "no bipartition with min A-degree >= {floor} and |A| > 2|B| in {budget} tries"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_three_is_regular() {
        let g = norm_graph(3).unwrap();
        assert_eq!(g.order(), 18);
        for v in 0..18 {
            assert_eq!(g.degree(v), 8, "vertex {v}");
        }
    }

    #[test]
    fn adjacency_is_symmetric_and_loop_free() {
        let g = norm_graph(3).unwrap();
        for v in 0..g.order() {
            assert!(!g.adj[v].contains(&(v as u32)));
            for &w in &g.adj[v] {
                assert!(g.adj[w as usize].contains(&(v as u32)));
            }
        }
    }

    #[test]
    fn triple_census_at_most_two() {
        // brute force over all C(18,3) = 816 triples
        let g = norm_graph(3).unwrap();
        let sets: Vec<std::collections::HashSet<u32>> = g
            .adj
            .iter()
            .map(|row| row.iter().copied().collect())
            .collect();
        let mut max = 0usize;
        for i in 0..18 {
            for j in i + 1..18 {
                for k in j + 1..18 {
                    let c = sets[i]
                        .iter()
                        .filter(|v| sets[j].contains(v) && sets[k].contains(v))
                        .count();
                    max = max.max(c);
                }
            }
        }
        assert_eq!(max, 2);
    }

    #[test]
    fn host_bipartition_accepts() {
        let (host, cert, prov) = norm_graph_host(3, 11).unwrap();
        assert!(host.n() > 2 * host.m());
        assert!(cert.max_common_neighbours <= 2);
        assert_eq!(cert.r, 3);
        assert!(host.min_degree_a() >= prov.degree_floor);
        assert!(prov.retries_used <= prov.retry_budget);
    }

    #[test]
    fn small_q_rejected() {
        assert!(norm_graph(2).is_err());
    }
}

//! One-step local-degree reduction: keep every vertex independently with
//! probability D^(gamma-1), turning average degree D and local degree up to
//! D^(1-gamma) into average degree about D^gamma and polylog local degree.

use rand::Rng;

use super::SolverError;
use crate::hypergraph::{PartitionedHypergraph, VertexId};
use crate::rng::rng_from;

pub const SPARSIFY_RETRIES: u32 = 20;

/// Retain vertices with probability D^(gamma-1) and verify, post hoc, that
/// every part kept at least (1+eps/2) D' vertices, every part average degree
/// is at most D' = (1+eps/4) D^gamma, and the local degree is at most
/// ln^2 D'. Retries with derived seeds; the error reports the statistic
/// that kept failing.
pub fn sparsify_local_degree(
    g: &PartitionedHypergraph,
    gamma: f64,
    eps: f64,
    seed: u64,
) -> Result<PartitionedHypergraph, SolverError> {
    if g.uniformity() != 2 {
        return Err(SolverError::GraphsOnly(g.uniformity()));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(SolverError::BadParameter(format!(
            "gamma must lie in (0, 1], got {gamma}"
        )));
    }
    if eps <= 0.0 {
        return Err(SolverError::BadParameter(format!("eps must be positive, got {eps}")));
    }
    if gamma == 1.0 {
        // retention probability exactly one
        return Ok(g.clone());
    }
    let d = {
        let r = g.max_avg_degree().map_err(SolverError::Stats)?;
        *r.numer() as f64 / *r.denom() as f64
    };
    if d <= 1.0 {
        return Err(SolverError::BadParameter(format!(
            "sparsification needs average degree above 1, got {d}"
        )));
    }
    let local = g.local_degree().map_err(SolverError::Stats)? as f64;
    if local > d.powf(1.0 - gamma) + 1e-9 {
        return Err(SolverError::BadParameter(format!(
            "local degree {local} exceeds D^(1-gamma) = {:.3}",
            d.powf(1.0 - gamma)
        )));
    }
    let rho = d.powf(gamma - 1.0);
    let d_prime = (1.0 + eps / 4.0) * d.powf(gamma);
    let size_floor = (1.0 + eps / 2.0) * d_prime;
    let local_cap = d_prime.ln().max(1.0).powi(2);

    let mut last = String::new();
    for retry in 0..SPARSIFY_RETRIES {
        let mut rng = rng_from(seed, retry as u64);
        let keep: Vec<bool> = (0..g.num_vertices()).map(|_| rng.random::<f64>() < rho).collect();
        let (h, _) = g.induced(&keep);
        if let Some(i) = (0..h.num_parts()).find(|&i| (h.part(i).len() as f64) < size_floor) {
            last = format!(
                "part {i} kept {} vertices, floor {size_floor:.2}",
                h.part(i).len()
            );
            continue;
        }
        let bad_avg = (0..h.num_parts()).find_map(|i| {
            let a = h.avg_degree_of_part(i).ok()?;
            let a = *a.numer() as f64 / *a.denom() as f64;
            (a > d_prime + 1e-9).then_some((i, a))
        });
        if let Some((i, a)) = bad_avg {
            last = format!("part {i} average degree {a:.3} above D' = {d_prime:.3}");
            continue;
        }
        let new_local = h.local_degree().map_err(SolverError::Stats)? as f64;
        if new_local > local_cap + 1e-9 {
            last = format!("local degree {new_local} above ln^2 D' = {local_cap:.3}");
            continue;
        }
        return Ok(h);
    }
    Err(SolverError::SparsifyExhausted(last))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng;
    use rand::Rng as _;

    #[test]
    fn gamma_one_is_identity() {
        let g = crate::constructions::random::random_nkrs(8, 4, 2, 1, 0).unwrap();
        let h = sparsify_local_degree(&g, 1.0, 0.5, 3).unwrap();
        assert_eq!(g, h);
    }

    /// Synthetic instance with controlled degree: m parts of size k, random
    /// edges with multiplicity-free local structure.
    fn dense_instance(m: usize, k: usize, avg_deg: usize, seed: u64) -> PartitionedHypergraph {
        let parts: Vec<Vec<VertexId>> = (0..m)
            .map(|i| ((i * k) as u32..((i + 1) * k) as u32).collect())
            .collect();
        let mut edges = std::collections::BTreeSet::new();
        let mut r = rng(seed);
        let target = m * k * avg_deg / 2;
        while edges.len() < target {
            let u = r.random_range(0..(m * k) as u32);
            let v = r.random_range(0..(m * k) as u32);
            if u / k as u32 != v / k as u32 {
                edges.insert(if u < v { vec![u, v] } else { vec![v, u] });
            }
        }
        PartitionedHypergraph::new(2, parts, edges.into_iter().collect()).unwrap()
    }

    #[test]
    fn statistics_land_near_expectation() {
        // D ~ 100, gamma = 0.5: retention ~ 0.1, target degree ~ 10
        let g = dense_instance(40, 320, 100, 1);
        let h = sparsify_local_degree(&g, 0.5, 0.8, 2).unwrap();
        let d = {
            let r = g.max_avg_degree().unwrap();
            *r.numer() as f64 / *r.denom() as f64
        };
        let rho = d.powf(-0.5);
        for i in 0..h.num_parts() {
            let kept = h.part(i).len() as f64;
            let expect = g.part(i).len() as f64 * rho;
            assert!(
                (kept - expect).abs() < 5.0 * expect.sqrt() + 5.0,
                "part {i}: kept {kept}, expected {expect}"
            );
        }
    }

    #[test]
    fn rejects_large_local_degree() {
        // a single pair of parts with a complete bipartite bundle has local
        // degree k, way above D^(1-gamma)
        let k = 8;
        let parts: Vec<Vec<VertexId>> = (0..4usize)
            .map(|i| ((i * k) as u32..((i + 1) * k) as u32).collect())
            .collect();
        let mut edges = Vec::new();
        for a in 0..k as u32 {
            for b in 0..k as u32 {
                edges.push(vec![a, k as u32 + b]);
            }
        }
        let g = PartitionedHypergraph::new(2, parts, edges).unwrap();
        assert!(matches!(
            sparsify_local_degree(&g, 0.5, 0.5, 0),
            Err(SolverError::BadParameter(_))
        ));
    }
}

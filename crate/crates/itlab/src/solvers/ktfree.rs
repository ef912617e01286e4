//! Clique-free transversals via the min-monochromatic-colouring reduction:
//! t-colour the vertices so that monochromatic edges are minimal, solve the
//! monochromatic subgraph, and the returned transversal induces a properly
//! t-coloured (hence K_{t+1}-free) subgraph.

use rand::Rng;

use super::nibble::{nibble_solve, NibbleConfig, NibbleRun};
use super::SolverError;
use crate::hypergraph::{PartitionedHypergraph, VertexId};
use crate::rng::rng;

/// Local-search colouring: start uniformly at random, then move any vertex
/// with more same-colour neighbours than its best colour class (ties to the
/// lowest colour index) until no improving move remains. Each move strictly
/// decreases the number of monochromatic edges, so this terminates, and at a
/// local optimum every vertex v has at most deg(v)/t same-colour neighbours.
pub fn min_monochromatic_colouring(
    g: &PartitionedHypergraph,
    t: usize,
    seed: u64,
) -> Result<Vec<u8>, SolverError> {
    if g.uniformity() != 2 {
        return Err(SolverError::GraphsOnly(g.uniformity()));
    }
    if t == 0 || t > u8::MAX as usize {
        return Err(SolverError::BadParameter(format!("colour count t={t} out of range")));
    }
    let n = g.num_vertices();
    let mut rng = rng(seed);
    let mut colour: Vec<u8> = (0..n).map(|_| rng.random_range(0..t) as u8).collect();
    if t == 1 {
        return Ok(colour);
    }
    let adj = g.adjacency();
    let mut improved = true;
    while improved {
        improved = false;
        for v in 0..n {
            let mut counts = vec![0u32; t];
            for &w in &adj[v] {
                counts[colour[w] as usize] += 1;
            }
            let current = colour[v] as usize;
            let best = (0..t).min_by_key(|&c| counts[c]).unwrap();
            if counts[current] > counts[best] {
                colour[v] = best as u8;
                improved = true;
            }
        }
    }
    Ok(colour)
}

/// Spanning subgraph of the monochromatic edges, same parts and ids.
pub fn monochromatic_subgraph(
    g: &PartitionedHypergraph,
    colour: &[u8],
) -> PartitionedHypergraph {
    let edges: Vec<Vec<VertexId>> = g
        .edges()
        .iter()
        .filter(|e| colour[e[0] as usize] == colour[e[1] as usize])
        .cloned()
        .collect();
    PartitionedHypergraph::new(2, g.parts().to_vec(), edges)
        .expect("subgraph of a valid instance")
}

#[derive(Debug, Clone)]
pub struct KtFreeRun {
    pub colouring: Vec<u8>,
    pub inner: NibbleRun,
}

/// Find a transversal whose image contains no K_{t+1}.
pub fn kt_free_transversal(
    g: &PartitionedHypergraph,
    t: usize,
    cfg: &NibbleConfig,
) -> Result<KtFreeRun, SolverError> {
    let colouring = min_monochromatic_colouring(g, t, cfg.seed.wrapping_add(0x6B74))?;
    let sub = monochromatic_subgraph(g, &colouring);
    debug_assert!(colouring_is_locally_optimal(g, &sub, t));
    let inner = nibble_solve(&sub, cfg)?;
    if let Some(tr) = &inner.transversal {
        debug_assert!(sub.is_independent_transversal(tr));
        if t <= 3 {
            assert!(
                image_clique_free(g, &tr.image(), t + 1),
                "transversal image must be K_{{t+1}}-free"
            );
        }
    }
    Ok(KtFreeRun { colouring, inner })
}

/// d_{G'}(v) <= d_G(v) / t at the local optimum, exactly.
pub fn colouring_is_locally_optimal(
    g: &PartitionedHypergraph,
    mono: &PartitionedHypergraph,
    t: usize,
) -> bool {
    (0..g.num_vertices() as VertexId)
        .all(|v| mono.degree(v) * t <= g.degree(v))
}

/// Brute-force check: no q-subset of `image` forms a clique in g.
pub fn image_clique_free(g: &PartitionedHypergraph, image: &[VertexId], q: usize) -> bool {
    let set: std::collections::HashSet<(VertexId, VertexId)> = g
        .edges()
        .iter()
        .map(|e| (e[0], e[1]))
        .collect();
    let is_edge = |a: VertexId, b: VertexId| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        set.contains(&(a, b))
    };
    let n = image.len();
    if q > n {
        return true;
    }
    let mut combos = crate::combi::Combinations::new(n, q);
    while let Some(idx) = combos.next() {
        let clique = idx
            .iter()
            .enumerate()
            .all(|(a, &i)| idx[a + 1..].iter().all(|&j| is_edge(image[i], image[j])));
        if clique {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::random::random_nkrs;

    #[test]
    fn t_equal_one_reduces_to_plain_transversal() {
        let g = random_nkrs(12, 8, 2, 1, 1).unwrap();
        let run = kt_free_transversal(&g, 1, &NibbleConfig::default()).unwrap();
        let tr = run.inner.transversal.expect("sparse instance");
        assert!(g.is_independent_transversal(&tr));
    }

    #[test]
    fn local_optimum_bounds_monochromatic_degree() {
        let g = random_nkrs(20, 10, 2, 2, 7).unwrap();
        for t in [2usize, 3] {
            let col = min_monochromatic_colouring(&g, t, 5).unwrap();
            let sub = monochromatic_subgraph(&g, &col);
            for v in 0..g.num_vertices() as VertexId {
                assert!(
                    sub.degree(v) * t <= g.degree(v),
                    "v={v}: {} * {t} > {}",
                    sub.degree(v),
                    g.degree(v)
                );
            }
        }
    }

    #[test]
    fn images_are_clique_free() {
        let g = random_nkrs(18, 12, 2, 2, 3).unwrap();
        for t in [2usize, 3] {
            let cfg = NibbleConfig {
                seed: t as u64,
                ..NibbleConfig::default()
            };
            let run = kt_free_transversal(&g, t, &cfg).unwrap();
            let tr = run.inner.transversal.expect("roomy instance");
            assert!(image_clique_free(&g, &tr.image(), t + 1));
        }
    }
}

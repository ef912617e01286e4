//! Moser–Tardos style sampling: draw one vertex per part uniformly, then
//! resample the two parts of the lowest-indexed violated edge until no edge
//! is violated.

use rand::Rng;

use super::SolverError;
use crate::hypergraph::{PartitionedHypergraph, Transversal, VertexId};
use crate::rng::rng;

#[derive(Debug, Clone)]
pub struct LllRun {
    pub transversal: Option<Transversal>,
    pub rounds: u64,
}

pub fn lll_sample(
    g: &PartitionedHypergraph,
    max_rounds: u64,
    seed: u64,
) -> Result<LllRun, SolverError> {
    if g.uniformity() != 2 {
        return Err(SolverError::GraphsOnly(g.uniformity()));
    }
    if let Some(i) = g.parts().iter().position(|p| p.is_empty()) {
        return Err(SolverError::EmptyPart(i));
    }
    let m = g.num_parts();
    let mut rng = rng(seed);
    let mut choice: Vec<VertexId> = (0..m)
        .map(|i| g.part(i)[rng.random_range(0..g.part(i).len())])
        .collect();
    let violated = |choice: &[VertexId]| -> Option<usize> {
        g.edges().iter().position(|e| {
            choice[g.part_of(e[0])] == e[0] && choice[g.part_of(e[1])] == e[1]
        })
    };
    let mut rounds = 0u64;
    while let Some(e) = violated(&choice) {
        if rounds >= max_rounds {
            return Ok(LllRun {
                transversal: None,
                rounds,
            });
        }
        rounds += 1;
        let edge = g.edge(e);
        for &v in edge {
            let part = g.part_of(v);
            choice[part] = g.part(part)[rng.random_range(0..g.part(part).len())];
        }
    }
    let t = Transversal::from_pairs(choice.iter().enumerate().map(|(p, &v)| (p, v)));
    assert!(
        g.is_independent_transversal(&t),
        "lll_sample must never return a violating transversal"
    );
    Ok(LllRun {
        transversal: Some(t),
        rounds,
    })
}

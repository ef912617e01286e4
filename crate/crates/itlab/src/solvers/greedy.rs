//! Greedy baseline: repeatedly take the smallest live part, pick its
//! minimum-live-degree vertex, and delete the choice's neighbours.

use super::SolverError;
use crate::hypergraph::{PartitionedHypergraph, Transversal, VertexId};

pub fn greedy_find(g: &PartitionedHypergraph) -> Result<Option<Transversal>, SolverError> {
    if g.uniformity() != 2 {
        return Err(SolverError::GraphsOnly(g.uniformity()));
    }
    let adj = g.adjacency();
    let mut alive = vec![true; g.num_vertices()];
    let mut live_deg: Vec<usize> = (0..g.num_vertices())
        .map(|v| g.degree(v as VertexId))
        .collect();
    let mut live_size: Vec<usize> = g.parts().iter().map(|p| p.len()).collect();
    let mut open: Vec<usize> = (0..g.num_parts()).collect();
    let mut t = Transversal::new();

    while !open.is_empty() {
        // smallest live part, ties by index
        let (pos, &part) = open
            .iter()
            .enumerate()
            .min_by_key(|&(_, &i)| (live_size[i], i))
            .unwrap();
        if live_size[part] == 0 {
            return Ok(None);
        }
        let &v = g
            .part(part)
            .iter()
            .filter(|&&v| alive[v as usize])
            .min_by_key(|&&v| (live_deg[v as usize], v))
            .unwrap();
        t.set(part, v);
        open.swap_remove(pos);
        // delete the whole chosen part and all neighbours of v
        let mut dying: Vec<VertexId> = g
            .part(part)
            .iter()
            .copied()
            .filter(|&w| alive[w as usize])
            .collect();
        for &w in &adj[v as usize] {
            if alive[w as usize] && !dying.contains(&w) {
                dying.push(w);
            }
        }
        for &w in &dying {
            alive[w as usize] = false;
            let pw = g.part_of(w);
            live_size[pw] -= 1;
        }
        for &w in &dying {
            for &x in &adj[w as usize] {
                if alive[x as usize] {
                    live_deg[x as usize] -= 1;
                }
            }
        }
    }
    debug_assert!(g.is_independent_transversal(&t));
    Ok(Some(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::random::random_nkrs;

    #[test]
    fn solves_sparse_instances() {
        let g = random_nkrs(12, 8, 2, 1, 0).unwrap();
        let t = greedy_find(&g).unwrap().expect("sparse instance");
        assert!(g.is_independent_transversal(&t));
    }

    #[test]
    fn fails_on_certified_no_it_instance() {
        let (g, _) = crate::constructions::assemble_upper_bound_instance(2, 2, 1, 5).unwrap();
        assert!(greedy_find(&g).unwrap().is_none());
    }
}

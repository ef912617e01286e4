//! The list-colouring bridge: independent transversals of the vertex-colour
//! graph are exactly the proper list colourings of the base graph.

use super::SolverError;
use crate::hypergraph::{PartitionedHypergraph, VertexId};

/// Build the vertex-colour graph: one part {v} x L_v per base vertex, and an
/// edge between (v, c) and (v', c) whenever vv' is a base edge and the
/// colour c is shared. Lists are deduplicated; when lists are sets the local
/// degree of the result is 1.
pub fn build_vertex_colour_graph(
    num_base_vertices: usize,
    base_edges: &[(u32, u32)],
    lists: &[Vec<u32>],
) -> Result<PartitionedHypergraph, SolverError> {
    if lists.len() != num_base_vertices {
        return Err(SolverError::BadParameter(format!(
            "{} lists for {} base vertices",
            lists.len(),
            num_base_vertices
        )));
    }
    let mut canonical: Vec<Vec<u32>> = Vec::with_capacity(lists.len());
    for (v, list) in lists.iter().enumerate() {
        let mut l = list.clone();
        l.sort_unstable();
        l.dedup();
        if l.is_empty() {
            return Err(SolverError::EmptyList(v));
        }
        canonical.push(l);
    }
    let mut offsets = Vec::with_capacity(num_base_vertices);
    let mut total = 0u32;
    for l in &canonical {
        offsets.push(total);
        total += l.len() as u32;
    }
    let parts: Vec<Vec<VertexId>> = (0..num_base_vertices)
        .map(|v| (offsets[v]..offsets[v] + canonical[v].len() as u32).collect())
        .collect();
    let mut edges = Vec::new();
    for &(u, v) in base_edges {
        if u == v {
            continue;
        }
        if u as usize >= num_base_vertices || v as usize >= num_base_vertices {
            return Err(SolverError::BadParameter(format!(
                "base edge ({u}, {v}) out of range"
            )));
        }
        // sorted-merge intersection of the two lists
        let (lu, lv) = (&canonical[u as usize], &canonical[v as usize]);
        let (mut i, mut j) = (0usize, 0usize);
        while i < lu.len() && j < lv.len() {
            match lu[i].cmp(&lv[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    edges.push(vec![offsets[u as usize] + i as u32, offsets[v as usize] + j as u32]);
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    Ok(PartitionedHypergraph::new(2, parts, edges)
        .expect("vertex-colour graph construction is structurally valid"))
}

/// Brute-force count of proper list colourings; the oracle side of the
/// bridge, independent of the hypergraph machinery.
pub fn count_list_colourings(
    num_base_vertices: usize,
    base_edges: &[(u32, u32)],
    lists: &[Vec<u32>],
) -> u64 {
    let mut canonical: Vec<Vec<u32>> = lists.to_vec();
    for l in canonical.iter_mut() {
        l.sort_unstable();
        l.dedup();
    }
    let mut count = 0u64;
    let mut assignment = vec![0u32; num_base_vertices];
    fn rec(
        v: usize,
        n: usize,
        edges: &[(u32, u32)],
        lists: &[Vec<u32>],
        assignment: &mut Vec<u32>,
        count: &mut u64,
    ) {
        if v == n {
            *count += 1;
            return;
        }
        'colour: for &c in &lists[v] {
            for &(a, b) in edges {
                let (a, b) = (a as usize, b as usize);
                if a == v && b < v && assignment[b] == c {
                    continue 'colour;
                }
                if b == v && a < v && assignment[a] == c {
                    continue 'colour;
                }
            }
            assignment[v] = c;
            rec(v + 1, n, edges, lists, assignment, count);
        }
    }
    rec(
        0,
        num_base_vertices,
        base_edges,
        &canonical,
        &mut assignment,
        &mut count,
    );
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::exact::count_transversals;

    #[test]
    fn edgeless_base_gives_edgeless_gamma() {
        let g = build_vertex_colour_graph(3, &[], &[vec![1, 2], vec![1], vec![2, 3]]).unwrap();
        assert_eq!(g.num_edges(), 0);
        assert_eq!(g.num_parts(), 3);
    }

    #[test]
    fn empty_list_errors() {
        assert!(matches!(
            build_vertex_colour_graph(2, &[(0, 1)], &[vec![1], vec![]]),
            Err(SolverError::EmptyList(1))
        ));
    }

    #[test]
    fn local_degree_is_one_for_set_lists() {
        let g = build_vertex_colour_graph(
            3,
            &[(0, 1), (1, 2), (0, 2)],
            &[vec![1, 2, 3], vec![1, 2], vec![2, 3]],
        )
        .unwrap();
        assert_eq!(g.local_degree().unwrap(), 1);
    }

    #[test]
    fn triangle_counts_agree_on_both_sides() {
        let edges = [(0u32, 1u32), (1, 2), (0, 2)];
        let lists = vec![vec![1, 2], vec![1, 2], vec![1, 2]];
        let gamma = build_vertex_colour_graph(3, &edges, &lists).unwrap();
        let via_transversals = count_transversals(&gamma, 10_000).count;
        let via_colourings = count_list_colourings(3, &edges, &lists);
        assert_eq!(via_transversals, via_colourings);
        // triangle with two colours admits no proper colouring
        assert_eq!(via_colourings, 0);
    }

    #[test]
    fn path_counts_agree() {
        let edges = [(0u32, 1u32), (1, 2)];
        let lists = vec![vec![1, 2], vec![1, 2, 3], vec![2]];
        let gamma = build_vertex_colour_graph(3, &edges, &lists).unwrap();
        assert_eq!(
            count_transversals(&gamma, 10_000).count,
            count_list_colourings(3, &edges, &lists)
        );
    }
}

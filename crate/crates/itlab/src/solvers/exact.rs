//! Exact backtracking search and transversal counting.
//!
//! Parts are processed in ascending size order (ties by index); a vertex is
//! admissible for the next slot iff it does not complete any edge whose
//! other vertices are already chosen. A "node" is one vertex placement.

use crate::hypergraph::{PartitionedHypergraph, Transversal, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactOutcome {
    Found { transversal: Transversal, nodes: u64 },
    /// full exhaustion: the instance provably has no independent transversal
    NoTransversal { nodes: u64 },
    BudgetExhausted { nodes: u64 },
}

struct Dfs<'a> {
    g: &'a PartitionedHypergraph,
    order: Vec<usize>,
    chosen_count: Vec<u32>,
    choice: Vec<Option<VertexId>>,
    nodes: u64,
    budget: u64,
}

impl<'a> Dfs<'a> {
    fn new(g: &'a PartitionedHypergraph, budget: u64) -> Self {
        let mut order: Vec<usize> = (0..g.num_parts()).collect();
        order.sort_by_key(|&i| (g.part(i).len(), i));
        Dfs {
            g,
            order,
            chosen_count: vec![0; g.num_edges()],
            choice: vec![None; g.num_parts()],
            nodes: 0,
            budget,
        }
    }

    fn admissible(&self, v: VertexId) -> bool {
        let r = self.g.uniformity() as u32;
        self.g
            .incident_edges(v)
            .iter()
            .all(|&e| self.chosen_count[e as usize] != r - 1)
    }

    fn place(&mut self, part: usize, v: VertexId) {
        self.choice[part] = Some(v);
        for &e in self.g.incident_edges(v) {
            self.chosen_count[e as usize] += 1;
        }
    }

    fn unplace(&mut self, part: usize, v: VertexId) {
        self.choice[part] = None;
        for &e in self.g.incident_edges(v) {
            self.chosen_count[e as usize] -= 1;
        }
    }

    /// Depth-first search for one transversal. Returns Some(true) on found,
    /// Some(false) on exhaustion, None on budget.
    fn find(&mut self, depth: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let part = self.order[depth];
        let vertices: Vec<VertexId> = self.g.part(part).to_vec();
        for v in vertices {
            if self.nodes >= self.budget {
                return None;
            }
            if !self.admissible(v) {
                continue;
            }
            self.nodes += 1;
            self.place(part, v);
            match self.find(depth + 1) {
                Some(true) => return Some(true),
                Some(false) => self.unplace(part, v),
                None => {
                    self.unplace(part, v);
                    return None;
                }
            }
        }
        Some(false)
    }

    /// Count all transversals up to `cap`. Returns false when the budget or
    /// cap was hit (count is then a lower bound).
    fn count(&mut self, depth: usize, acc: &mut u64, cap: u64) -> bool {
        if depth == self.order.len() {
            *acc += 1;
            return *acc < cap;
        }
        let part = self.order[depth];
        let vertices: Vec<VertexId> = self.g.part(part).to_vec();
        for v in vertices {
            if !self.admissible(v) {
                continue;
            }
            self.nodes += 1;
            self.place(part, v);
            let keep_going = self.count(depth + 1, acc, cap);
            self.unplace(part, v);
            if !keep_going {
                return false;
            }
        }
        true
    }
}

/// Find one independent transversal, prove none exists, or run out of nodes.
pub fn exact_find(g: &PartitionedHypergraph, budget: u64) -> ExactOutcome {
    if g.parts().iter().any(|p| p.is_empty()) {
        // an empty part rules out any transversal immediately
        return ExactOutcome::NoTransversal { nodes: 0 };
    }
    let mut dfs = Dfs::new(g, budget);
    match dfs.find(0) {
        Some(true) => {
            let t = Transversal::from_pairs(
                dfs.choice
                    .iter()
                    .enumerate()
                    .map(|(p, v)| (p, v.expect("complete assignment"))),
            );
            debug_assert!(g.is_independent_transversal(&t));
            ExactOutcome::Found {
                transversal: t,
                nodes: dfs.nodes,
            }
        }
        Some(false) => ExactOutcome::NoTransversal { nodes: dfs.nodes },
        None => ExactOutcome::BudgetExhausted { nodes: dfs.nodes },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountResult {
    pub count: u64,
    /// true when the count hit the cap and stopped early
    pub saturated: bool,
}

/// Exact number of independent transversals, saturating at `cap`.
pub fn count_transversals(g: &PartitionedHypergraph, cap: u64) -> CountResult {
    if g.parts().iter().any(|p| p.is_empty()) {
        return CountResult {
            count: 0,
            saturated: false,
        };
    }
    let mut dfs = Dfs::new(g, u64::MAX);
    let mut acc = 0u64;
    let finished = dfs.count(0, &mut acc, cap);
    CountResult {
        count: acc,
        saturated: !finished,
    }
}

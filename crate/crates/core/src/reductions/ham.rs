//! Directed Hamiltonicity to Set Cover with equal-size sets.
//!
//! Guess `n/Δ` representatives in cycle order, the first always node 0. For
//! every simple path of Δ arcs from one representative to the next whose
//! inner nodes avoid all representatives, add the set of its nodes minus the
//! endpoint. Covers of size `n/Δ` are exactly the Hamiltonian cycles through
//! the guessed representatives in the guessed order.

use alloc::format;
use alloc::vec::Vec;

use super::{assemble, pairwise_disjoint, CoverSolver, DeclaredBounds, PipelineVerdict, Produced, Realized};
use crate::instances::Digraph;
use crate::solvers::verify_ham_cycle;
use crate::util::{falling_factorial, Arrangements};
use crate::SolveError;

#[derive(Debug, Clone)]
pub struct HamBatch<'a> {
    g: &'a Digraph,
    delta: usize,
    guesses: Arrangements,
    realized: Realized,
}

pub fn ham_to_setcover(g: &Digraph, delta: usize) -> Result<HamBatch<'_>, SolveError> {
    let n = g.num_nodes();
    if delta < 2 {
        return Err(SolveError::Precondition(format!("path length {delta} below 2")));
    }
    if n < delta {
        return Err(SolveError::Precondition(format!("{n} nodes cannot hold a path of {delta} arcs")));
    }
    if !n.is_multiple_of(delta) {
        return Err(SolveError::Precondition(format!("path length {delta} does not divide {n}")));
    }
    Ok(HamBatch {
        g,
        delta,
        guesses: Arrangements::new(n - 1, n / delta - 1),
        realized: Realized::default(),
    })
}

impl HamBatch<'_> {
    pub fn target(&self) -> usize {
        self.g.num_nodes() / self.delta
    }

    /// Ordered representative guesses with the first fixed to node 0.
    pub fn guess_count(&self) -> u128 {
        let n = self.g.num_nodes();
        falling_factorial(n - 1, n / self.delta - 1)
    }

    /// `ñ^{ñ/Δ}` ordered representative guesses over `ñ` elements.
    pub fn declared(&self) -> DeclaredBounds {
        let n = self.g.num_nodes() as f64;
        DeclaredBounds {
            count_log2: n / self.delta as f64 * libm::log2(n),
            elements: n,
        }
    }

    pub fn realized(&self) -> Realized {
        self.realized
    }

    fn produce(&self, reps: &[usize]) -> Produced {
        let n = self.g.num_nodes();
        let mut is_rep = alloc::vec![false; n];
        for &z in reps {
            is_rep[z] = true;
        }
        let mut pairs = Vec::new();
        let t = reps.len();
        for i in 0..t {
            let (from, to) = (reps[i], reps[(i + 1) % t]);
            let mut path = alloc::vec![from];
            let mut on_path = alloc::vec![false; n];
            on_path[from] = true;
            self.paths(to, &is_rep, &mut on_path, &mut path, &mut |p| {
                pairs.push((p[..p.len() - 1].to_vec(), p.to_vec()));
            });
        }
        let (instance, origins) = assemble(n, pairs);
        Produced {
            instance,
            target: t,
            provenance: reps.to_vec(),
            origins,
        }
    }

    /// Extends `path` to exactly Δ arcs ending at `to` through non-representatives.
    fn paths(
        &self,
        to: usize,
        is_rep: &[bool],
        on_path: &mut [bool],
        path: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        let u = *path.last().expect("path starts at a representative");
        if path.len() == self.delta {
            if self.g.has_arc(u, to) {
                path.push(to);
                emit(path);
                path.pop();
            }
            return;
        }
        for &w in self.g.out_neighbors(u) {
            if is_rep[w] || on_path[w] {
                continue;
            }
            on_path[w] = true;
            path.push(w);
            self.paths(to, is_rep, on_path, path, emit);
            path.pop();
            on_path[w] = false;
        }
    }

    /// Cycle order assembled from a cover: follow the chosen paths from node 0.
    pub fn decode(&self, p: &Produced, chosen: &[usize]) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.g.num_nodes());
        let mut at = p.provenance[0];
        for _ in 0..chosen.len() {
            let Some(&c) = chosen.iter().find(|&&c| p.origins[c][0] == at) else {
                break;
            };
            let path = &p.origins[c];
            order.extend_from_slice(&path[..path.len() - 1]);
            at = *path.last().expect("non-empty path");
        }
        order
    }
}

impl Iterator for HamBatch<'_> {
    type Item = Produced;

    fn next(&mut self) -> Option<Produced> {
        let rest = self.guesses.advance()?;
        let mut reps = alloc::vec![0];
        reps.extend(rest.iter().map(|&z| z + 1));
        self.realized.guesses += 1;
        let p = self.produce(&reps);
        self.realized.produced += 1;
        self.realized.max_elements = self.realized.max_elements.max(p.instance.n());
        Some(p)
    }
}

/// Yes iff some representative guess admits a cover of size `n/Δ`.
pub fn solve_ham_via_setcover(g: &Digraph, delta: usize, solver: &CoverSolver) -> Result<PipelineVerdict, SolveError> {
    let mut batch = ham_to_setcover(g, delta)?;
    let mut solved = 0;
    while let Some(p) = batch.next() {
        solved += 1;
        if let Some(chosen) = solver.within(&p.instance, p.target)? {
            let order = batch.decode(&p, &chosen);
            return Ok(PipelineVerdict {
                yes: true,
                cover_disjoint: pairwise_disjoint(&p.instance, &chosen),
                certificate_valid: verify_ham_cycle(g, &order),
                provenance: Some(p.provenance),
                certificate: Some(order),
                instances_solved: solved,
            });
        }
    }
    Ok(PipelineVerdict::no(solved))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn directed_four_cycle() {
        let g = Digraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)], false).unwrap();
        let batch = ham_to_setcover(&g, 2).unwrap();
        let produced: Vec<Produced> = batch.collect();
        let at_two = produced.iter().find(|p| p.provenance == vec![0, 2]).unwrap();
        assert_eq!(at_two.instance.sets(), &[vec![0, 1], vec![2, 3]]);
        let v = solve_ham_via_setcover(&g, 2, &CoverSolver::Search).unwrap();
        assert!(v.yes && v.certificate_valid && v.cover_disjoint);
    }

    #[test]
    fn directed_path_has_no_cycle() {
        let g = Digraph::new(4, vec![(0, 1), (1, 2), (2, 3)], false).unwrap();
        assert!(!solve_ham_via_setcover(&g, 2, &CoverSolver::Search).unwrap().yes);
    }

    #[test]
    fn complete_digraph() {
        let edges = (0..6).flat_map(|u| (0..6).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        let g = Digraph::new(6, edges, false).unwrap();
        let v = solve_ham_via_setcover(&g, 3, &CoverSolver::Search).unwrap();
        assert!(v.yes && v.certificate_valid);
        for p in ham_to_setcover(&g, 3).unwrap() {
            assert!(p.instance.sets().iter().all(|s| s.len() == 3));
        }
    }

    #[test]
    fn rejects_non_divisor() {
        let g = Digraph::empty(5, false);
        assert!(ham_to_setcover(&g, 2).is_err());
        assert!(ham_to_setcover(&g, 6).is_err());
    }
}

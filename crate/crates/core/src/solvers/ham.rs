use alloc::vec::Vec;

use super::{Answer, Caps, Certificate, SolveResult};
use crate::instances::Digraph;
use crate::SolveError;

/// Directed Hamiltonian cycle by Held–Karp subset DP.
///
/// `reach[mask]` holds, as a bitset, the nodes `v` such that some path from
/// node 0 visits exactly `mask` and ends at `v`. Graphs with fewer than two
/// nodes have no cycle.
pub fn heldkarp_ham(g: &Digraph, caps: &Caps) -> Result<SolveResult, SolveError> {
    let n = g.num_nodes();
    Caps::check("node count", n, caps.ham_n.min(30))?;
    if n < 2 {
        return Ok(SolveResult::new(Answer::No, None, 0));
    }
    let size = 1usize << n;
    let mut reach = alloc::vec![0u32; size];
    reach[1] = 1;
    let mut explored = 0u64;
    for mask in 1..size {
        if mask & 1 == 0 {
            continue;
        }
        let mut ends = reach[mask];
        while ends != 0 {
            let v = ends.trailing_zeros() as usize;
            ends &= ends - 1;
            explored += 1;
            for &w in g.out_neighbors(v) {
                if mask & (1 << w) == 0 {
                    reach[mask | (1 << w)] |= 1 << w;
                }
            }
        }
    }
    let full = size - 1;
    let closing = (1..n).find(|&v| reach[full] & (1 << v) != 0 && g.has_arc(v, 0));
    let Some(last) = closing else {
        return Ok(SolveResult::new(Answer::No, None, explored));
    };
    // walk back: predecessor u of v in mask must reach (mask \ v) and have arc u→v
    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    let mut v = last;
    while v != 0 {
        order.push(v);
        let prev_mask = mask & !(1 << v);
        let u = g
            .in_neighbors(v)
            .iter()
            .copied()
            .find(|&u| reach[prev_mask] & (1 << u) != 0)
            .expect("reachable state has a predecessor");
        mask = prev_mask;
        v = u;
    }
    order.push(0);
    order.reverse();
    Ok(SolveResult::new(Answer::Yes, Some(Certificate::Cycle(order)), explored))
}

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Answer, Caps, Certificate, SolveResult};
use crate::instances::{Digraph, EdgeDir, PatternTree};
use crate::SolveError;

/// `⌈e^k · ln(1/q)⌉` random colorings: each succeeds with probability at
/// least `k!/k^k ≥ e^{-k}` on a yes-instance.
pub fn colorcoding_trials(k: usize, failure_prob: f64) -> u64 {
    libm::ceil(libm::exp(k as f64) * libm::log(1.0 / failure_prob)) as u64
}

fn child_candidates<'a>(g: &'a Digraph, t: &PatternTree, child: usize, parent_img: usize) -> &'a [usize] {
    match t.dir(child) {
        EdgeDir::Undirected => g.neighbors(parent_img),
        EdgeDir::Down => g.out_neighbors(parent_img),
        EdgeDir::Up => g.in_neighbors(parent_img),
    }
}

/// Color-coding decision for tree embedding with one-sided error.
///
/// Each trial colors the host with `k` colors and runs a DP over
/// (tree node, host node, color subset) for colorful embeddings. A yes answer
/// always carries an embedding; a no answer is wrong with probability at most
/// `failure_prob`. Trial `i` draws its coloring from stream `i` of a ChaCha
/// generator seeded with `seed`.
pub fn ktree_colorcoding(
    g: &Digraph,
    t: &PatternTree,
    failure_prob: f64,
    seed: u64,
    caps: &Caps,
) -> Result<SolveResult, SolveError> {
    let k = t.k();
    Caps::check("pattern size", k, caps.colorcoding_k.min(31))?;
    if !(failure_prob > 0.0 && failure_prob < 1.0) {
        return Err(SolveError::Precondition(alloc::format!(
            "failure probability {failure_prob} outside (0, 1)"
        )));
    }
    let n = g.num_nodes();
    if k > n {
        return Ok(SolveResult::new(Answer::No, None, 0));
    }
    let trials = colorcoding_trials(k, failure_prob);

    // children before parents
    let mut post = Vec::with_capacity(k);
    let mut stack = alloc::vec![(t.root(), false)];
    while let Some((v, expanded)) = stack.pop() {
        if expanded {
            post.push(v);
        } else {
            stack.push((v, true));
            for &c in t.children(v).iter().rev() {
                stack.push((c, false));
            }
        }
    }

    let mut scratch = Marks::new(1 << k);
    let mut colors = alloc::vec![0u8; n];
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        for c in colors.iter_mut() {
            *c = rng.gen_range(0..k) as u8;
        }
        let table = colorful_table(g, t, &post, &colors, &mut scratch);
        let root = t.root();
        if let Some(x) = (0..n).find(|&x| !table[root][x].is_empty()) {
            let mut image = alloc::vec![usize::MAX; k];
            let full = table[root][x][0];
            let ok = assign(g, t, &table, &colors, root, x, full, &mut image);
            debug_assert!(ok, "table entry without a realisation");
            return Ok(SolveResult::new(
                Answer::Yes,
                Some(Certificate::Embedding(image)),
                trial + 1,
            ));
        }
    }
    Ok(SolveResult::new(Answer::No, None, trials))
}

/// Membership marks over color masks, cleared lazily.
struct Marks {
    mark: Vec<u32>,
    epoch: u32,
}

impl Marks {
    fn new(size: usize) -> Self {
        Marks {
            mark: alloc::vec![0; size],
            epoch: 0,
        }
    }

    fn reset(&mut self) {
        self.epoch += 1;
        if self.epoch == u32::MAX {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
    }

    /// Returns `true` the first time `m` is inserted since the last reset.
    fn insert(&mut self, m: u32) -> bool {
        let slot = &mut self.mark[m as usize];
        if *slot == self.epoch {
            false
        } else {
            *slot = self.epoch;
            true
        }
    }
}

/// `table[v][x]`: color sets of colorful embeddings of the subtree at `v`
/// that send `v` to `x`.
fn colorful_table(
    g: &Digraph,
    t: &PatternTree,
    post: &[usize],
    colors: &[u8],
    marks: &mut Marks,
) -> Vec<Vec<Vec<u32>>> {
    let n = g.num_nodes();
    let mut table: Vec<Vec<Vec<u32>>> = alloc::vec![Vec::new(); t.k()];
    for &v in post {
        let mut rows: Vec<Vec<u32>> = (0..n).map(|x| alloc::vec![1u32 << colors[x]]).collect();
        for &c in t.children(v) {
            for (x, row) in rows.iter_mut().enumerate() {
                if row.is_empty() {
                    continue;
                }
                marks.reset();
                let mut options = Vec::new();
                for &y in child_candidates(g, t, c, x) {
                    for &b in &table[c][y] {
                        if marks.insert(b) {
                            options.push(b);
                        }
                    }
                }
                marks.reset();
                let mut next = Vec::new();
                for &a in row.iter() {
                    for &b in &options {
                        if a & b == 0 && marks.insert(a | b) {
                            next.push(a | b);
                        }
                    }
                }
                *row = next;
            }
        }
        table[v] = rows;
    }
    table
}

/// Realises color set `mask` for the subtree at `v` placed on `x`.
#[allow(clippy::too_many_arguments)]
fn assign(
    g: &Digraph,
    t: &PatternTree,
    table: &[Vec<Vec<u32>>],
    colors: &[u8],
    v: usize,
    x: usize,
    mask: u32,
    image: &mut [usize],
) -> bool {
    image[v] = x;
    let rest = mask & !(1u32 << colors[x]);
    split(g, t, table, colors, t.children(v), x, rest, image)
}

#[allow(clippy::too_many_arguments)]
fn split(
    g: &Digraph,
    t: &PatternTree,
    table: &[Vec<Vec<u32>>],
    colors: &[u8],
    kids: &[usize],
    x: usize,
    rest: u32,
    image: &mut [usize],
) -> bool {
    let Some((&c, others)) = kids.split_first() else {
        return rest == 0;
    };
    for &y in child_candidates(g, t, c, x) {
        for &b in &table[c][y] {
            if b & !rest != 0 || (others.is_empty() && b != rest) {
                continue;
            }
            if assign(g, t, table, colors, c, y, b, image)
                && split(g, t, table, colors, others, x, rest & !b, image)
            {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::verify_embedding;
    use alloc::vec;

    #[test]
    fn trial_count() {
        // e^1 * ln(100) = 12.52
        assert_eq!(colorcoding_trials(1, 0.01), 13);
        assert_eq!(colorcoding_trials(3, 0.5), 14);
    }

    #[test]
    fn path_too_long_for_triangle() {
        let g = Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)], false).unwrap();
        let t = PatternTree::path(4, EdgeDir::Down);
        let r = ktree_colorcoding(&g, &t, 0.01, 1, &Caps::default()).unwrap();
        assert_eq!(r.answer, Answer::No);
    }

    #[test]
    fn finds_star_with_certificate() {
        let g = Digraph::new(5, vec![(0, 1), (0, 2), (0, 3), (3, 4)], false).unwrap();
        let t = PatternTree::from_edges(4, &[(0, 1, EdgeDir::Down), (0, 2, EdgeDir::Down), (2, 3, EdgeDir::Down)])
            .unwrap();
        let r = ktree_colorcoding(&g, &t, 0.001, 7, &Caps::default()).unwrap();
        assert_eq!(r.answer, Answer::Yes);
        assert!(verify_embedding(&g, &t, r.embedding().unwrap()));
    }

    #[test]
    fn rejects_bad_probability() {
        let g = Digraph::empty(2, false);
        let t = PatternTree::path(1, EdgeDir::Undirected);
        assert!(ktree_colorcoding(&g, &t, 1.0, 0, &Caps::default()).is_err());
        assert!(ktree_colorcoding(&g, &t, 0.0, 0, &Caps::default()).is_err());
    }
}

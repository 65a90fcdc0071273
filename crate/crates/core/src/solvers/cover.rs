use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{Answer, Caps, Certificate, SolveResult};
use crate::instances::{SetCoverInstance, Variant};
use crate::util::full_mask;
use crate::SolveError;

const UNREACHABLE: u8 = u8::MAX;

/// Distinct non-empty set masks, each paired with its first index in the
/// instance.
fn distinct_masks(inst: &SetCoverInstance) -> Vec<(u64, usize)> {
    let mut seen: Vec<(u64, usize)> = inst
        .set_masks()
        .into_iter()
        .enumerate()
        .filter(|&(_, m)| m != 0)
        .map(|(i, m)| (m, i))
        .collect();
    seen.sort_unstable();
    seen.dedup_by_key(|&mut (m, _)| m);
    seen
}

/// For every element, the distinct masks that contain it.
fn masks_by_element(n: usize, masks: &[(u64, usize)]) -> Vec<Vec<(u64, usize)>> {
    let mut by = alloc::vec![Vec::new(); n];
    for &(m, i) in masks {
        let mut rest = m;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            by[e].push((m, i));
        }
    }
    by
}

/// `table[mask]` = fewest sets whose union contains `mask`.
fn cover_table(
    n: usize,
    by_elem: &[Vec<(u64, usize)>],
    explored: &mut u64,
) -> Vec<u8> {
    let size = 1usize << n;
    let mut table = alloc::vec![UNREACHABLE; size];
    table[0] = 0;
    for mask in 1..size {
        let low = (mask as u64).trailing_zeros() as usize;
        let mut best = UNREACHABLE;
        for &(s, _) in &by_elem[low] {
            *explored += 1;
            let prev = table[mask & !(s as usize)];
            if prev != UNREACHABLE && prev + 1 < best {
                best = prev + 1;
            }
        }
        table[mask] = best;
    }
    table
}

fn trace_cover(mask: usize, table: &[u8], by_elem: &[Vec<(u64, usize)>]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut mask = mask;
    while mask != 0 {
        let low = (mask as u64).trailing_zeros() as usize;
        let &(s, idx) = by_elem[low]
            .iter()
            .find(|&&(s, _)| {
                let prev = table[mask & !(s as usize)];
                prev != UNREACHABLE && prev + 1 == table[mask]
            })
            .expect("table entry has a witness");
        out.push(idx);
        mask &= !(s as usize);
    }
    out.sort_unstable();
    out
}

fn check_width(inst: &SetCoverInstance, caps: &Caps) -> Result<(), SolveError> {
    Caps::check("ground set size", inst.n(), caps.subset_n.min(63))
}

/// Minimum set cover by dynamic programming over all element subsets,
/// `O(m·2^n)` time.
pub fn setcover_dp(inst: &SetCoverInstance, caps: &Caps) -> Result<SolveResult, SolveError> {
    check_width(inst, caps)?;
    let n = inst.n();
    let masks = distinct_masks(inst);
    let by_elem = masks_by_element(n, &masks);
    let mut explored = 0;
    let table = cover_table(n, &by_elem, &mut explored);
    let full = (1usize << n) - 1;
    Ok(match table[full] {
        UNREACHABLE => SolveResult::new(Answer::Infeasible, None, explored),
        opt => {
            let cert = trace_cover(full, &table, &by_elem);
            SolveResult::new(Answer::Optimum(opt as usize), Some(Certificate::Sets(cert)), explored)
        }
    })
}

/// Minimum number of sets covering at least `p` elements, reading the
/// covering table at every `p`-element mask.
pub fn partialcover_dp(inst: &SetCoverInstance, caps: &Caps) -> Result<SolveResult, SolveError> {
    check_width(inst, caps)?;
    let n = inst.n();
    let p = inst.coverage_target();
    if p == 0 {
        return Ok(SolveResult::new(Answer::Optimum(0), Some(Certificate::Sets(Vec::new())), 0));
    }
    let masks = distinct_masks(inst);
    let by_elem = masks_by_element(n, &masks);
    let mut explored = 0;
    let table = cover_table(n, &by_elem, &mut explored);
    let best = (1usize..1 << n)
        .filter(|m| m.count_ones() as usize == p && table[*m] != UNREACHABLE)
        .min_by_key(|&m| (table[m], m));
    Ok(match best {
        None => SolveResult::new(Answer::Infeasible, None, explored),
        Some(mask) => {
            let cert = trace_cover(mask, &table, &by_elem);
            SolveResult::new(
                Answer::Optimum(table[mask] as usize),
                Some(Certificate::Sets(cert)),
                explored,
            )
        }
    })
}

/// Oracle: tries every sub-collection of distinct sets by increasing
/// cardinality and returns the first that covers.
pub fn setcover_bruteforce(inst: &SetCoverInstance, caps: &Caps) -> Result<SolveResult, SolveError> {
    Caps::check("set count", inst.m(), caps.bruteforce_m)?;
    Caps::check("ground set size", inst.n(), 64)?;
    let need = inst.coverage_target();
    let masks = distinct_masks(inst);
    let covered = |chosen: &[usize]| chosen.iter().fold(0u64, |acc, &i| acc | masks[i].0);
    let mut explored = 0u64;
    for size in 0..=masks.len() {
        let mut found = None;
        for_each_combination(masks.len(), size, &mut |c| {
            explored += 1;
            if covered(c).count_ones() as usize >= need {
                found = Some(c.to_vec());
                true
            } else {
                false
            }
        });
        if let Some(c) = found {
            let mut cert: Vec<usize> = c.iter().map(|&i| masks[i].1).collect();
            cert.sort_unstable();
            return Ok(SolveResult::new(
                Answer::Optimum(size),
                Some(Certificate::Sets(cert)),
                explored,
            ));
        }
    }
    Ok(SolveResult::new(Answer::Infeasible, None, explored))
}

/// Calls `visit` on each `k`-subset of `0..n` until it returns `true`.
fn for_each_combination(n: usize, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if rec(i + 1, n, k, cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, k, &mut Vec::with_capacity(k), visit);
}

/// Minimum exact cover by a subset DP in which each state extends by a set
/// that contains the lowest uncovered element and is disjoint from the state.
pub fn exactcover_solve(inst: &SetCoverInstance, caps: &Caps) -> Result<SolveResult, SolveError> {
    check_width(inst, caps)?;
    let n = inst.n();
    let masks = distinct_masks(inst);
    let by_elem = masks_by_element(n, &masks);
    let size = 1usize << n;
    let mut table = alloc::vec![UNREACHABLE; size];
    table[0] = 0;
    let mut explored = 0u64;
    for mask in 1..size {
        let low = (mask as u64).trailing_zeros() as usize;
        let mut best = UNREACHABLE;
        for &(s, _) in &by_elem[low] {
            let s = s as usize;
            if s & !mask != 0 {
                continue;
            }
            explored += 1;
            let prev = table[mask ^ s];
            if prev != UNREACHABLE && prev + 1 < best {
                best = prev + 1;
            }
        }
        table[mask] = best;
    }
    let full = size - 1;
    if table[full] == UNREACHABLE {
        return Ok(SolveResult::new(Answer::Infeasible, None, explored));
    }
    let mut cert = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let low = (mask as u64).trailing_zeros() as usize;
        let &(s, idx) = by_elem[low]
            .iter()
            .find(|&&(s, _)| {
                let s = s as usize;
                s & !mask == 0 && table[mask ^ s] != UNREACHABLE && table[mask ^ s] + 1 == table[mask]
            })
            .expect("table entry has a witness");
        cert.push(idx);
        mask ^= s as usize;
    }
    cert.sort_unstable();
    Ok(SolveResult::new(
        Answer::Optimum(table[full] as usize),
        Some(Certificate::Sets(cert)),
        explored,
    ))
}

/// Exact cover that first guesses which sets larger than `delta` take part,
/// then solves the residual instance of small sets with [`exactcover_solve`].
pub fn exactcover_with_large_sets(
    inst: &SetCoverInstance,
    delta: usize,
    caps: &Caps,
) -> Result<SolveResult, SolveError> {
    check_width(inst, caps)?;
    let n = inst.n();
    let masks = distinct_masks(inst);
    let large: Vec<(u64, usize)> = masks
        .iter()
        .copied()
        .filter(|&(m, _)| m.count_ones() as usize > delta)
        .collect();
    let small: Vec<(u64, usize)> = masks
        .iter()
        .copied()
        .filter(|&(m, _)| m.count_ones() as usize <= delta)
        .collect();

    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut explored = 0u64;
    let mut chosen: Vec<usize> = Vec::new();
    let mut err = None;
    guess_large(&large, 0, 0, &mut chosen, &mut |covered, chosen| {
        // residual: uncovered elements, small sets avoiding the guessed ones
        let remaining: Vec<usize> = (0..n).filter(|&e| covered & (1 << e) == 0).collect();
        let mut index = alloc::vec![usize::MAX; n];
        for (new, &old) in remaining.iter().enumerate() {
            index[old] = new;
        }
        let mut residual_sets: Vec<(Vec<usize>, usize)> = small
            .iter()
            .filter(|&&(m, _)| m & covered == 0)
            .map(|&(m, i)| {
                let elems = (0..n).filter(|&e| m & (1 << e) != 0).map(|e| index[e]).collect();
                (elems, i)
            })
            .collect();
        residual_sets.sort();
        let residual = SetCoverInstance::new(
            remaining.len(),
            residual_sets.iter().map(|(s, _)| s.clone()).collect(),
            Variant::Exact,
        )
        .expect("residual of a valid instance");
        match exactcover_solve(&residual, caps) {
            Ok(res) => {
                explored += res.stats.explored + 1;
                if let (Some(opt), Some(sets)) = (res.answer.optimum(), res.sets()) {
                    let total = opt + chosen.len();
                    if best.as_ref().is_none_or(|(b, _)| total < *b) {
                        let mut cert: Vec<usize> = chosen.iter().map(|&j| large[j].1).collect();
                        cert.extend(sets.iter().map(|&r| residual_sets[r].1));
                        cert.sort_unstable();
                        best = Some((total, cert));
                    }
                }
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(match best {
        Some((opt, cert)) => SolveResult::new(Answer::Optimum(opt), Some(Certificate::Sets(cert)), explored),
        None => SolveResult::new(Answer::Infeasible, None, explored),
    })
}

/// Visits every pairwise-disjoint sub-collection of `large`.
fn guess_large(
    large: &[(u64, usize)],
    start: usize,
    covered: u64,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(u64, &[usize]),
) {
    visit(covered, chosen);
    for j in start..large.len() {
        if large[j].0 & covered != 0 {
            continue;
        }
        chosen.push(j);
        guess_large(large, j + 1, covered | large[j].0, chosen, visit);
        chosen.pop();
    }
}

/// Decides whether at most `target` sets cover the instance's coverage
/// target, by branching on the uncovered element with the fewest candidate
/// sets. Failed `(covered, budget)` states are memoised.
pub fn cover_within(inst: &SetCoverInstance, target: usize) -> Result<SolveResult, SolveError> {
    Caps::check("ground set size", inst.n(), 64)?;
    if inst.coverage_target() != inst.n() {
        return Err(SolveError::Precondition(alloc::format!(
            "bounded search needs a full-coverage instance, got {:?}",
            inst.variant()
        )));
    }
    let n = inst.n();
    let masks = distinct_masks(inst);
    let by_elem = masks_by_element(n, &masks);
    let max_size = masks.iter().map(|&(m, _)| m.count_ones() as usize).max().unwrap_or(0);
    let mut search = Bounded {
        full: full_mask(n),
        by_elem: &by_elem,
        max_size,
        failed: BTreeMap::new(),
        chosen: Vec::new(),
        explored: 0,
    };
    let found = search.run(0, target);
    let explored = search.explored;
    Ok(if found {
        let mut cert = search.chosen;
        cert.sort_unstable();
        SolveResult::new(Answer::Yes, Some(Certificate::Sets(cert)), explored)
    } else {
        SolveResult::new(Answer::No, None, explored)
    })
}

struct Bounded<'a> {
    full: u64,
    by_elem: &'a [Vec<(u64, usize)>],
    max_size: usize,
    failed: BTreeMap<u64, usize>,
    chosen: Vec<usize>,
    explored: u64,
}

impl Bounded<'_> {
    fn run(&mut self, covered: u64, budget: usize) -> bool {
        self.explored += 1;
        let missing = self.full & !covered;
        if missing == 0 {
            return true;
        }
        if budget == 0 || self.max_size == 0 {
            return false;
        }
        let lower = (missing.count_ones() as usize).div_ceil(self.max_size);
        if lower > budget {
            return false;
        }
        if self.failed.get(&covered).is_some_and(|&b| b >= budget) {
            return false;
        }
        let mut rest = missing;
        let mut pick: Option<(usize, usize)> = None;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let options = self.by_elem[e].len();
            if pick.is_none_or(|(_, best)| options < best) {
                pick = Some((e, options));
            }
        }
        let (e, _) = pick.expect("missing is non-empty");
        for k in 0..self.by_elem[e].len() {
            let (s, idx) = self.by_elem[e][k];
            self.chosen.push(idx);
            if self.run(covered | s, budget - 1) {
                return true;
            }
            self.chosen.pop();
        }
        let entry = self.failed.entry(covered).or_insert(0);
        *entry = (*entry).max(budget);
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sc(n: usize, sets: Vec<Vec<usize>>) -> SetCoverInstance {
        SetCoverInstance::new(n, sets, Variant::Plain).unwrap()
    }

    #[test]
    fn dp_small_examples() {
        let caps = Caps::default();
        let r = setcover_dp(&sc(3, vec![vec![0, 1], vec![1, 2], vec![2]]), &caps).unwrap();
        assert_eq!(r.answer, Answer::Optimum(2));
        assert_eq!(setcover_dp(&sc(2, vec![vec![0, 1]]), &caps).unwrap().answer, Answer::Optimum(1));
        assert_eq!(setcover_dp(&sc(2, vec![vec![0]]), &caps).unwrap().answer, Answer::Infeasible);
        assert_eq!(setcover_dp(&sc(0, vec![]), &caps).unwrap().answer, Answer::Optimum(0));
    }

    #[test]
    fn bruteforce_examples() {
        let caps = Caps::default();
        let inst = sc(4, vec![vec![0, 1], vec![2, 3], vec![0, 2], vec![1, 3]]);
        assert_eq!(setcover_bruteforce(&inst, &caps).unwrap().answer, Answer::Optimum(2));
        assert_eq!(setcover_bruteforce(&sc(0, vec![]), &caps).unwrap().answer, Answer::Optimum(0));
        let many = sc(2, vec![vec![0]; 21]);
        assert!(matches!(setcover_bruteforce(&many, &caps), Err(SolveError::Capacity { .. })));
    }

    #[test]
    fn dp_capacity() {
        let caps = Caps {
            subset_n: 4,
            ..Caps::default()
        };
        assert!(matches!(
            setcover_dp(&sc(5, vec![]), &caps),
            Err(SolveError::Capacity { got: 5, limit: 4, .. })
        ));
    }

    #[test]
    fn exact_cover_examples() {
        let caps = Caps::default();
        let r = exactcover_solve(&sc(4, vec![vec![0, 1], vec![2, 3], vec![1, 2]]), &caps).unwrap();
        assert_eq!(r.answer, Answer::Optimum(2));
        let inst = sc(4, vec![vec![0, 1], vec![2, 3], vec![1, 2]]);
        let chosen: Vec<&Vec<usize>> = r.sets().unwrap().iter().map(|&i| &inst.sets()[i]).collect();
        assert_eq!(chosen, vec![&vec![0, 1], &vec![2, 3]]);
        assert_eq!(
            exactcover_solve(&sc(2, vec![vec![0, 1], vec![0]]), &caps).unwrap().answer,
            Answer::Optimum(1)
        );
        assert_eq!(
            exactcover_solve(&sc(3, vec![vec![0, 1], vec![1, 2]]), &caps).unwrap().answer,
            Answer::Infeasible
        );
    }

    #[test]
    fn large_set_guessing() {
        let caps = Caps::default();
        let inst = sc(5, vec![vec![0, 1, 2, 3, 4], vec![0], vec![1, 2]]);
        let r = exactcover_with_large_sets(&inst, 2, &caps).unwrap();
        assert_eq!(r.answer, Answer::Optimum(1));
        let small = sc(4, vec![vec![0, 1], vec![2, 3], vec![1, 2], vec![0], vec![3]]);
        assert_eq!(
            exactcover_with_large_sets(&small, 2, &caps).unwrap().answer,
            exactcover_solve(&small, &caps).unwrap().answer
        );
    }

    #[test]
    fn partial_examples() {
        let caps = Caps::default();
        let base = vec![vec![0, 1], vec![2], vec![3]];
        let p0 = SetCoverInstance::new(4, base.clone(), Variant::Partial(0)).unwrap();
        assert_eq!(partialcover_dp(&p0, &caps).unwrap().answer, Answer::Optimum(0));
        let p2 = SetCoverInstance::new(4, base.clone(), Variant::Partial(2)).unwrap();
        assert_eq!(partialcover_dp(&p2, &caps).unwrap().answer, Answer::Optimum(1));
        let p4 = SetCoverInstance::new(4, base.clone(), Variant::Partial(4)).unwrap();
        assert_eq!(partialcover_dp(&p4, &caps).unwrap().answer, Answer::Optimum(3));
        let p5 = SetCoverInstance::new(5, base, Variant::Partial(5)).unwrap();
        assert_eq!(partialcover_dp(&p5, &caps).unwrap().answer, Answer::Infeasible);
    }

    #[test]
    fn bounded_search() {
        let inst = sc(4, vec![vec![0, 1], vec![2, 3], vec![0, 2], vec![1, 3]]);
        assert_eq!(cover_within(&inst, 1).unwrap().answer, Answer::No);
        let r = cover_within(&inst, 2).unwrap();
        assert_eq!(r.answer, Answer::Yes);
        assert_eq!(r.sets().unwrap().len(), 2);
        assert_eq!(cover_within(&sc(0, vec![]), 0).unwrap().answer, Answer::Yes);
    }
}

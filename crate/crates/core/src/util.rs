use alloc::vec::Vec;

/// Injective maps from `0..k` into `0..n`, in lexicographic order of the
/// image tuple.
#[derive(Debug, Clone)]
pub(crate) struct Arrangements {
    n: usize,
    current: Vec<usize>,
    used: Vec<bool>,
    started: bool,
    done: bool,
}

impl Arrangements {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        let done = k > n;
        let current: Vec<usize> = (0..k).collect();
        let mut used = alloc::vec![false; n];
        if !done {
            for &c in &current {
                used[c] = true;
            }
        }
        Arrangements {
            n,
            current,
            used,
            started: false,
            done,
        }
    }

    /// Advances to the next arrangement in place, returning it.
    pub(crate) fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let k = self.current.len();
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            let old = self.current[pos];
            self.used[old] = false;
            let next = (old + 1..self.n).find(|&v| !self.used[v]);
            if let Some(v) = next {
                self.current[pos] = v;
                self.used[v] = true;
                // refill the suffix with the smallest free values
                let mut cand = 0;
                for slot in pos + 1..k {
                    while self.used[cand] {
                        cand += 1;
                    }
                    self.current[slot] = cand;
                    self.used[cand] = true;
                }
                return Some(&self.current);
            }
        }
        self.done = true;
        None
    }
}

/// Number of injective maps from a `k`-set into an `n`-set.
pub(crate) fn falling_factorial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128))
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

pub(crate) fn mask_of(elements: &[usize]) -> u64 {
    elements.iter().fold(0u64, |m, &e| m | (1u64 << e))
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

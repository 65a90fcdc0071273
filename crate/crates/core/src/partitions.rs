//! Unordered integer partitions and their shrunk (grouped) representation.

use alloc::vec::Vec;
use num_bigint::BigInt;

/// Parts in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Sorts the parts into non-increasing order; zero parts are dropped.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// A partition rewritten as sums of `g` consecutive parts plus the fewer than
/// `g` parts left over at the end.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShrunkPartition {
    pub grouped: Vec<usize>,
    pub remainder: Vec<usize>,
}

impl ShrunkPartition {
    pub fn total(&self) -> usize {
        self.grouped.iter().sum::<usize>() + self.remainder.iter().sum::<usize>()
    }

    /// Number of entries (grouped sums plus leftover parts).
    pub fn len(&self) -> usize {
        self.grouped.len() + self.remainder.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Groups the parts of `alpha`, in stored order, into blocks of `g`.
pub fn shrink_partition(alpha: &Partition, g: usize) -> ShrunkPartition {
    assert!(g >= 1, "group size must be positive");
    let parts = alpha.parts();
    let full = parts.len() / g * g;
    ShrunkPartition {
        grouped: parts[..full].chunks(g).map(|c| c.iter().sum()).collect(),
        remainder: parts[full..].to_vec(),
    }
}

/// Streams the partitions of `a` in descending lexicographic order,
/// `(a), (a-1, 1), (a-2, 2), (a-2, 1, 1), ...`, with constant amortized work
/// per partition. `a = 0` yields the single empty partition.
#[derive(Debug, Clone)]
pub struct Partitions {
    /// `parts[..len]` is the current partition; every slot past `last_big` is 1.
    parts: Vec<usize>,
    len: usize,
    /// Index of the last part greater than one, `-1` when all parts are 1.
    last_big: isize,
    started: bool,
}

pub fn enumerate_partitions(a: usize) -> Partitions {
    let mut parts = alloc::vec![1usize; a];
    if a > 0 {
        parts[0] = a;
    }
    Partitions {
        parts,
        len: usize::from(a > 0),
        last_big: if a > 1 { 0 } else { -1 },
        started: false,
    }
}

impl Partitions {
    /// Advances in place and returns the current parts.
    pub fn next_parts(&mut self) -> Option<&[usize]> {
        if !self.started {
            self.started = true;
            return Some(&self.parts[..self.len]);
        }
        if self.last_big < 0 {
            return None;
        }
        let x = &mut self.parts;
        let mut h = self.last_big as usize;
        if x[h] == 2 {
            x[h] = 1;
            self.len += 1;
            self.last_big -= 1;
        } else {
            let r = x[h] - 1;
            // the removed unit plus the trailing ones
            let mut t = self.len - h;
            x[h] = r;
            while t >= r {
                h += 1;
                x[h] = r;
                t -= r;
            }
            if t == 0 {
                self.len = h + 1;
            } else {
                self.len = h + 2;
                if t > 1 {
                    h += 1;
                    x[h] = t;
                }
            }
            self.last_big = if x[h] > 1 { h as isize } else { h as isize - 1 };
        }
        Some(&self.parts[..self.len])
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        self.next_parts().map(|p| Partition { parts: p.to_vec() })
    }
}

/// Exact partition count by Euler's pentagonal-number recurrence.
pub fn count_partitions(a: usize) -> BigInt {
    partition_counts(a).pop().expect("table holds p(0)..p(a)")
}

/// `p(0), p(1), ..., p(a)`.
pub fn partition_counts(a: usize) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = Vec::with_capacity(a + 1);
    p.push(BigInt::from(1));
    for m in 1..=a {
        let mut acc = BigInt::from(0);
        for j in 1.. {
            let g1 = j * (3 * j - 1) / 2;
            if g1 > m {
                break;
            }
            let g2 = j * (3 * j + 1) / 2;
            let mut term = p[m - g1].clone();
            if g2 <= m {
                term += &p[m - g2];
            }
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc);
    }
    p
}

/// `e^{π√(2a/3)} / (4a√3)`, the leading-order growth of the partition count.
pub fn partition_asymptotic(a: usize) -> f64 {
    let a = a as f64;
    libm::exp(core::f64::consts::PI * libm::sqrt(2.0 * a / 3.0)) / (4.0 * a * libm::sqrt(3.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn small_streams() {
        let one: Vec<_> = enumerate_partitions(1).collect();
        assert_eq!(one, vec![Partition::new(vec![1])]);
        let zero: Vec<_> = enumerate_partitions(0).collect();
        assert_eq!(zero, vec![Partition::new(vec![])]);
        let four: Vec<Vec<usize>> = enumerate_partitions(4).map(|p| p.parts().to_vec()).collect();
        assert_eq!(
            four,
            vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]
        );
    }

    #[test]
    fn counts() {
        assert_eq!(count_partitions(0), BigInt::from(1));
        assert_eq!(count_partitions(5), BigInt::from(7));
        assert_eq!(count_partitions(10), BigInt::from(42));
        assert_eq!(count_partitions(100), BigInt::from(190_569_292u64));
    }

    #[test]
    fn shrink_examples() {
        let s = shrink_partition(&Partition::new(vec![4, 3, 2, 1]), 2);
        assert_eq!((s.grouped, s.remainder), (vec![7, 3], vec![]));
        let s = shrink_partition(&Partition::new(vec![4, 3, 2]), 2);
        assert_eq!((s.grouped, s.remainder), (vec![7], vec![2]));
        let s = shrink_partition(&Partition::new(vec![5]), 3);
        assert_eq!((s.grouped, s.remainder), (vec![], vec![5]));
    }

    #[test]
    fn asymptotic_ratio() {
        let exact = 190_569_292f64;
        let ratio = exact / partition_asymptotic(100);
        assert!(ratio > 0.5 && ratio < 1.5, "{ratio}");
    }
}

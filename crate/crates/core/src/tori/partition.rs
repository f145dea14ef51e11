use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

/// A partition of `n`, parts stored in weakly decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Sorts the parts into decreasing order. Zero parts are rejected.
    pub fn new(mut parts: Vec<usize>) -> Option<Self> {
        if parts.contains(&0) {
            return None;
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Some(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts, `l(lambda)`.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// `n_i`, the number of parts equal to `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    /// `(i, n_i)` for every part size present, ascending in `i`.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in self.parts.iter().rev() {
            match out.last_mut() {
                Some((i, m)) if *i == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n` in reverse-lexicographic order:
/// `(n), (n-1,1), (n-2,2), (n-2,1,1), ...`. `n = 0` gives the empty partition.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn extend(rest: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition {
                parts: current.clone(),
            });
            return;
        }
        for first in (1..=rest.min(max)).rev() {
            current.push(first);
            extend(rest - first, first, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    extend(n, n, &mut Vec::new(), &mut out);
    out
}

/// `z_lambda = prod_i i^{n_i} n_i!`, the order of the centralizer in `S_n` of
/// a permutation with cycle type `lambda`.
pub fn centralizer_order(lambda: &Partition) -> BigInt {
    let mut z = BigInt::one();
    for (i, m) in lambda.multiplicities() {
        z *= BigInt::from(i).pow(m as u32);
        for k in 2..=m {
            z *= k;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    /// p(n) by the textbook recursion on the largest allowed part.
    fn partition_count(n: usize, max: usize) -> usize {
        if n == 0 {
            return 1;
        }
        (1..=n.min(max)).map(|k| partition_count(n - k, k)).sum()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(0).len(), 1);
        assert_eq!(partitions(1), vec![Partition::new(vec![1]).unwrap()]);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(7).len(), 15);
        for n in 0..=12 {
            assert_eq!(partitions(n).len(), partition_count(n, n));
        }
        assert_eq!(partitions(12).len(), 77);
    }

    #[test]
    fn reverse_lexicographic_order() {
        let rendered: Vec<String> = partitions(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(rendered, ["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]);
    }

    #[test]
    fn centralizers() {
        let z = |parts: &[usize]| centralizer_order(&Partition::new(parts.to_vec()).unwrap());
        assert_eq!(z(&[1, 1]), BigInt::from(2));
        assert_eq!(z(&[2]), BigInt::from(2));
        assert_eq!(z(&[2, 1, 1]), BigInt::from(4));
    }

    /// Class sizes n!/z_lambda add up to n!.
    #[test]
    fn class_equation() {
        for n in 1..=9usize {
            let fact: BigInt = (1..=n).map(BigInt::from).product();
            let total: BigInt = partitions(n)
                .iter()
                .map(|l| &fact / centralizer_order(l))
                .sum();
            assert_eq!(total, fact);
        }
    }

    #[test]
    fn multiplicities_and_validation() {
        let l = Partition::new(vec![1, 3, 1, 2]).unwrap();
        assert_eq!(l.parts(), &[3, 2, 1, 1]);
        assert_eq!(l.multiplicities(), vec![(1, 2), (2, 1), (3, 1)]);
        assert_eq!(l.multiplicity(1), 2);
        assert_eq!(l.size(), 7);
        assert_eq!(l.length(), 4);
        assert!(Partition::new(vec![2, 0]).is_none());
    }
}

//! k-subsets of `0..n` in colexicographic order.
//!
//! Colex order compares sets by their largest element first, so
//! `{0,1} < {0,2} < {1,2} < {0,3} < ...`. The rank of a sorted set
//! `c_0 < c_1 < ... < c_{k-1}` is `sum_i C(c_i, i + 1)`.

/// Saturating table of binomial coefficients `C(a, b)` for `a <= n`, `b <= k`.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    k: usize,
    table: Vec<u64>,
}

impl BinomialTable {
    pub fn new(n: usize, k: usize) -> Self {
        let w = k + 1;
        let mut table = vec![0u64; (n + 1) * w];
        for a in 0..=n {
            table[a * w] = 1;
            for b in 1..=k.min(a) {
                let left = table[(a - 1) * w + b - 1];
                let up = if b < a { table[(a - 1) * w + b] } else { 0 };
                table[a * w + b] = left.saturating_add(up);
            }
        }
        Self { k, table }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u64 {
        if b > self.k || b > a {
            0
        } else {
            self.table[a * (self.k + 1) + b]
        }
    }
}

/// `C(n, k)` in 128 bits, saturating.
pub fn choose_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact at every step
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Iterator over the `k`-subsets of `0..n` in colex order.
#[derive(Debug, Clone)]
pub struct Colex {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Colex {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (0..k).collect(),
            done: k > n,
        }
    }

    /// Starts at the subset of the given colex rank.
    pub fn from_rank(n: usize, k: usize, rank: u64) -> Self {
        let mut it = Self::new(n, k);
        if it.done {
            return it;
        }
        if (rank as u128) >= choose_u128(n, k) {
            it.done = true;
            return it;
        }
        it.current = unrank(n, k, rank);
        it
    }

    /// Advances `current` in place; returns `false` after the last subset.
    pub fn advance(&mut self) -> bool {
        let k = self.current.len();
        if k == 0 {
            self.done = true;
            return false;
        }
        let mut i = 0;
        while i + 1 < k && self.current[i] + 1 == self.current[i + 1] {
            i += 1;
        }
        if i + 1 == k && self.current[i] + 1 >= self.n {
            self.done = true;
            return false;
        }
        self.current[i] += 1;
        for (j, c) in self.current[..i].iter_mut().enumerate() {
            *c = j;
        }
        true
    }

    /// Current subset without advancing, or `None` when exhausted.
    pub fn peek(&self) -> Option<&[usize]> {
        (!self.done).then_some(&self.current[..])
    }
}

impl Iterator for Colex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.advance();
        Some(out)
    }
}

pub fn rank(subset: &[usize]) -> u128 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| choose_u128(c, i + 1))
        .sum()
}

pub fn unrank(n: usize, k: usize, mut rank: u64) -> Vec<usize> {
    let mut out = vec![0; k];
    let mut hi = n;
    for i in (0..k).rev() {
        // largest c < hi with C(c, i+1) <= rank
        let mut c = hi - 1;
        while choose_u128(c, i + 1) > rank as u128 {
            c -= 1;
        }
        rank -= choose_u128(c, i + 1) as u64;
        out[i] = c;
        hi = c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_order_small() {
        let v: Vec<_> = Colex::new(4, 2).collect();
        assert_eq!(
            v,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 3],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(
            Colex::new(3, 0).collect::<Vec<_>>(),
            vec![Vec::<usize>::new()]
        );
        assert_eq!(Colex::new(2, 3).count(), 0);
        assert_eq!(Colex::new(5, 5).count(), 1);
    }

    #[test]
    fn counts_and_ranks() {
        for n in 0..9 {
            for k in 0..=n {
                let all: Vec<_> = Colex::new(n, k).collect();
                assert_eq!(all.len() as u128, choose_u128(n, k));
                for (r, s) in all.iter().enumerate() {
                    assert_eq!(rank(s), r as u128);
                    assert_eq!(&unrank(n, k, r as u64), s);
                    let tail: Vec<_> = Colex::from_rank(n, k, r as u64).collect();
                    assert_eq!(tail, all[r..].to_vec());
                }
            }
        }
    }

    #[test]
    fn binomial_table_matches() {
        let t = BinomialTable::new(30, 6);
        for a in 0..=30 {
            for b in 0..=6 {
                assert_eq!(t.get(a, b) as u128, choose_u128(a, b));
            }
        }
        assert_eq!(t.get(3, 7), 0);
        assert_eq!(choose_u128(64, 32), 1832624140942590534);
    }
}

//! Small combinatorial helpers: r-subset iteration and binomial coefficients.

/// Lexicographic iteration over r-subsets of `0..n`.
///
/// Not an `Iterator` (it lends its internal buffer); use as
/// `while let Some(set) = combos.next() { ... }`.
pub struct Combinations {
    n: usize,
    r: usize,
    idx: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, r: usize) -> Self {
        Combinations {
            n,
            r,
            idx: (0..r).collect(),
            started: false,
            done: r > n,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.idx);
        }
        if self.r == 0 {
            self.done = true;
            return None;
        }
        // advance rightmost index that still has room
        let mut i = self.r;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.idx[i] + 1 <= self.n - (self.r - i) {
                self.idx[i] += 1;
                for j in i + 1..self.r {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(&self.idx);
            }
        }
    }
}

/// Exact binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Binomial coefficient as f64 (for bound formulas where n can be large).
pub fn binomial_f64(n: u64, r: u64) -> f64 {
    if r > n {
        return 0.0;
    }
    let r = r.min(n - r);
    let mut acc = 1.0f64;
    for i in 0..r {
        acc *= (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

//! Small shared iteration helpers.

use alloc::vec::Vec;

/// Iterator over all tuples of `arity` indices below `base`, odometer
/// order (last position fastest). An arity of 0 yields one empty tuple;
/// a base of 0 with positive arity yields nothing.
pub(crate) struct TupleIter {
    base: usize,
    current: Vec<usize>,
    done: bool,
}

impl TupleIter {
    pub(crate) fn new(base: usize, arity: usize) -> TupleIter {
        TupleIter {
            base,
            current: alloc::vec![0; arity],
            done: arity > 0 && base == 0,
        }
    }
}

impl Iterator for TupleIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.current[i] += 1;
            if self.current[i] < self.base {
                break;
            }
            self.current[i] = 0;
        }
        Some(out)
    }
}

/// Iterator over all subsets of `0..n` in binary counting order: the empty
/// set first, then `{0}`, `{1}`, `{0,1}`, `{2}`, ...
pub(crate) struct SubsetIter {
    n: usize,
    mask: u64,
    done: bool,
}

impl SubsetIter {
    /// `n` must be at most 63; callers cap subset searches well below that.
    pub(crate) fn new(n: usize) -> SubsetIter {
        debug_assert!(n < 64);
        SubsetIter {
            n,
            mask: 0,
            done: false,
        }
    }
}

impl Iterator for SubsetIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = (0..self.n).filter(|i| self.mask >> i & 1 == 1).collect();
        if self.mask >= (1u64 << self.n) - 1 {
            self.done = true;
        } else {
            self.mask += 1;
        }
        Some(out)
    }
}

/// Iterator over the `k`-element subsets of `0..n` in lexicographic order.
pub(crate) struct CombinationIter {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl CombinationIter {
    pub(crate) fn new(n: usize, k: usize) -> CombinationIter {
        CombinationIter {
            n,
            current: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for CombinationIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        if k == 0 {
            self.done = true;
            return Some(out);
        }
        // Find the rightmost position that can still advance.
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.n - (k - i) {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

//! Pairwise (tree) summation.
//!
//! Every floating-point accumulation in the crate goes through this
//! accumulator so that a sum is a pure function of its term sequence: the
//! reduction tree depends only on the number of terms pushed, never on
//! chunking or scheduling. Rounding error grows like log2(n) instead of n.

use num_traits::Zero;
use std::ops::Add;

/// Binary-counter pairwise accumulator: level `i` holds the sum of a
/// completed block of `2^i` consecutive terms.
#[derive(Debug, Clone)]
pub struct PairwiseSum<T> {
    levels: Vec<Option<T>>,
    count: u64,
}

impl<T: Copy + Add<Output = T> + Zero> PairwiseSum<T> {
    pub fn new() -> Self {
        PairwiseSum { levels: Vec::new(), count: 0 }
    }

    pub fn push(&mut self, term: T) {
        self.count += 1;
        let mut carry = term;
        for slot in self.levels.iter_mut() {
            match slot.take() {
                None => {
                    *slot = Some(carry);
                    return;
                }
                Some(block) => carry = block + carry,
            }
        }
        self.levels.push(Some(carry));
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Folds the remaining blocks, smallest first.
    pub fn total(self) -> T {
        let mut acc = T::zero();
        for block in self.levels.into_iter().flatten() {
            acc = acc + block;
        }
        acc
    }
}

impl<T: Copy + Add<Output = T> + Zero> Default for PairwiseSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

pub fn pairwise_sum<T, I>(terms: I) -> T
where
    T: Copy + Add<Output = T> + Zero,
    I: IntoIterator<Item = T>,
{
    let mut acc = PairwiseSum::new();
    for t in terms {
        acc.push(t);
    }
    acc.total()
}

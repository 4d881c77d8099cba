use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{ExactError, ExactInt};

/// Memoized table of Fibonacci and Lucas numbers.
///
/// `F_0 = 0, F_1 = 1` and `L_0 = 2, L_1 = 1`, both following
/// `X_k = X_{k-1} + X_{k-2}`. Lookups through `&self` never extend the
/// table, so a cache sized up front with [`FibCache::with_len`] can be
/// shared across threads.
#[derive(Debug, Clone)]
pub struct FibCache {
    fib: Vec<ExactInt>,
    lucas: Vec<ExactInt>,
}

impl Default for FibCache {
    fn default() -> Self {
        Self::new()
    }
}

impl FibCache {
    pub fn new() -> Self {
        FibCache {
            fib: vec![ExactInt::zero(), ExactInt::one()],
            lucas: vec![ExactInt::from(2), ExactInt::one()],
        }
    }

    /// A cache holding at least indices `0..=max_index`.
    pub fn with_len(max_index: usize) -> Self {
        let mut cache = Self::new();
        cache.ensure(max_index);
        cache
    }

    /// Extends the table so that `max_index` is available. Existing entries
    /// are never touched.
    pub fn ensure(&mut self, max_index: usize) {
        while self.fib.len() <= max_index {
            let k = self.fib.len();
            let f = &self.fib[k - 1] + &self.fib[k - 2];
            let l = &self.lucas[k - 1] + &self.lucas[k - 2];
            self.fib.push(f);
            self.lucas.push(l);
        }
    }

    /// Largest index currently held.
    pub fn max_index(&self) -> usize {
        self.fib.len() - 1
    }

    /// `F_k`. Panics if `k` is beyond the cached range; call
    /// [`FibCache::ensure`] first.
    pub fn f(&self, k: usize) -> &ExactInt {
        &self.fib[k]
    }

    /// `L_k`. Panics if `k` is beyond the cached range.
    pub fn l(&self, k: usize) -> &ExactInt {
        &self.lucas[k]
    }

    /// `F_k` for any integer `k`, using `F_{-k} = (-1)^{k+1} F_k`.
    pub fn f_signed(&self, k: i64) -> ExactInt {
        if k >= 0 {
            self.fib[k as usize].clone()
        } else {
            let m = k.unsigned_abs() as usize;
            if m % 2 == 1 {
                self.fib[m].clone()
            } else {
                -self.fib[m].clone()
            }
        }
    }

    /// `L_k` for any integer `k`, using `L_{-k} = (-1)^k L_k`.
    pub fn l_signed(&self, k: i64) -> ExactInt {
        if k >= 0 {
            self.lucas[k as usize].clone()
        } else {
            let m = k.unsigned_abs() as usize;
            if m.is_multiple_of(2) {
                self.lucas[m].clone()
            } else {
                -self.lucas[m].clone()
            }
        }
    }
}

fn iterate(first: ExactInt, second: ExactInt, k: u64) -> ExactInt {
    let (mut a, mut b) = (first, second);
    for _ in 0..k {
        let next = &a + &b;
        a = core::mem::replace(&mut b, next);
    }
    a
}

/// The Fibonacci number `F_k`.
pub fn fib(k: i64) -> Result<ExactInt, ExactError> {
    if k < 0 {
        return Err(ExactError::NegativeIndex(k));
    }
    Ok(iterate(ExactInt::zero(), ExactInt::one(), k as u64))
}

/// The Lucas number `L_k`.
pub fn lucas(k: i64) -> Result<ExactInt, ExactError> {
    if k < 0 {
        return Err(ExactError::NegativeIndex(k));
    }
    Ok(iterate(ExactInt::from(2), ExactInt::one(), k as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_values() {
        assert_eq!(fib(0).unwrap(), ExactInt::zero());
        assert_eq!(fib(10).unwrap(), ExactInt::from(55));
        assert_eq!(lucas(0).unwrap(), ExactInt::from(2));
        assert_eq!(lucas(4).unwrap(), ExactInt::from(7));
        assert_eq!(lucas(8).unwrap(), ExactInt::from(47));
    }

    #[test]
    fn negative_index_rejected() {
        assert_eq!(fib(-1), Err(ExactError::NegativeIndex(-1)));
        assert_eq!(lucas(-3), Err(ExactError::NegativeIndex(-3)));
    }

    #[test]
    fn odd_index_sum() {
        // sum_{i=2}^{5} F_{2i-1} = F_10 - 1 = 54
        let direct: ExactInt = (2..=5).map(|i| fib(2 * i - 1).unwrap()).sum();
        assert_eq!(direct, ExactInt::from(54));
        assert_eq!(fib(10).unwrap() - 1, ExactInt::from(54));
    }

    #[test]
    fn cassini_link_between_sequences() {
        let cache = FibCache::with_len(2000);
        for k in 0..=2000usize {
            let f = cache.f(k);
            let l = cache.l(k);
            let lhs = ExactInt::from(5) * f * f - l * l;
            let rhs = ExactInt::from(-4) * super::super::alt_sign(k as i64);
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }

    #[test]
    fn cache_matches_recomputation_and_extension_is_stable() {
        let mut cache = FibCache::with_len(50);
        let before: Vec<ExactInt> = (0..=50).map(|k| cache.f(k).clone()).collect();
        cache.ensure(400);
        for k in 0..=50 {
            assert_eq!(cache.f(k), &before[k]);
        }
        for k in [0usize, 1, 2, 17, 123, 400] {
            assert_eq!(cache.f(k), &fib(k as i64).unwrap());
            assert_eq!(cache.l(k), &lucas(k as i64).unwrap());
        }
    }

    #[test]
    fn negative_extension() {
        let cache = FibCache::with_len(10);
        assert_eq!(cache.f_signed(-1), ExactInt::from(1));
        assert_eq!(cache.f_signed(-2), ExactInt::from(-1));
        assert_eq!(cache.f_signed(-5), ExactInt::from(5));
        assert_eq!(cache.l_signed(-1), ExactInt::from(-1));
        assert_eq!(cache.l_signed(-2), ExactInt::from(3));
        // the extension keeps the recurrence
        for k in -8i64..=6 {
            assert_eq!(cache.f_signed(k + 2), cache.f_signed(k + 1) + cache.f_signed(k));
            assert_eq!(cache.l_signed(k + 2), cache.l_signed(k + 1) + cache.l_signed(k));
        }
    }
}

//! Small sample statistics used by the estimators.

use crate::scalar::{from_usize, Real};

/// Mean and standard error of the mean, accumulated in input order.
pub fn mean_stderr<T: Real>(xs: impl Iterator<Item = T> + Clone) -> (T, T) {
    let n = xs.clone().count();
    if n == 0 {
        return (T::nan(), T::nan());
    }
    let nn = from_usize::<T>(n);
    let mean = xs.clone().fold(T::zero(), |a, x| a + x) / nn;
    if n == 1 {
        return (mean, T::zero());
    }
    let ss = xs.fold(T::zero(), |a, x| a + (x - mean) * (x - mean));
    (mean, (ss / (nn - T::one()) / nn).sqrt())
}

/// Median of the block means over `blocks` contiguous blocks.
///
/// Falls back to the plain mean when there are fewer samples than blocks.
pub fn median_of_means<T: Real>(xs: &[T], blocks: usize) -> T {
    if xs.is_empty() {
        return T::nan();
    }
    let blocks = blocks.max(1);
    if xs.len() < blocks {
        return mean_stderr(xs.iter().copied()).0;
    }
    let size = xs.len() / blocks;
    let mut means: Vec<T> = (0..blocks)
        .map(|b| {
            let hi = if b + 1 == blocks {
                xs.len()
            } else {
                (b + 1) * size
            };
            mean_stderr(xs[b * size..hi].iter().copied()).0
        })
        .collect();
    means.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let m = means.len();
    if m % 2 == 1 {
        means[m / 2]
    } else {
        (means[m / 2 - 1] + means[m / 2]) / from_usize(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_stderr() {
        let (m, se) = mean_stderr([1.0, 2.0, 3.0, 4.0].into_iter());
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_stderr([7.0].into_iter()), (7.0, 0.0));
        assert!(mean_stderr(std::iter::empty::<f64>()).0.is_nan());
    }

    #[test]
    fn median_of_means_resists_outliers() {
        let mut xs = vec![1.0; 160];
        xs[3] = 1e9;
        assert_eq!(median_of_means(&xs, 16), 1.0);
        assert_eq!(median_of_means(&[1.0, 3.0], 16), 2.0);
    }
}

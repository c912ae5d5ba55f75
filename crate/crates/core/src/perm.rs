//! Sums over the symmetric group, in lexicographic order.

use itertools::Itertools;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest `n` accepted by the `n!`-term formulas.
pub const PERMUTATION_CAP: usize = 9;

/// How a large sum is evaluated.
///
/// `Parallel` splits the terms into disjoint blocks, sums each block in the
/// sequential order and adds the block totals in block order. It matches
/// `Sequential` up to reassociation of the additions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Sequential,
    Parallel,
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub(crate) fn check_cap(route: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::SizeCap { route, n, cap })
    } else {
        Ok(())
    }
}

fn block_sum<F>(first: usize, n: usize, term: &F) -> Result<Complex64>
where
    F: Fn(&[usize]) -> Result<Complex64>,
{
    let rest: Vec<usize> = (0..n).filter(|&k| k != first).collect();
    let mut sigma = vec![first; n];
    let mut acc = Complex64::new(0.0, 0.0);
    for tail in rest.into_iter().permutations(n - 1) {
        sigma[1..].copy_from_slice(&tail);
        acc += term(&sigma)?;
    }
    Ok(acc)
}

/// `Σ_{σ ∈ S_n} term(σ)` with `σ` given as the image list `[σ(0), …, σ(n-1)]`.
pub fn permutation_sum<F>(n: usize, exec: Execution, term: F) -> Result<Complex64>
where
    F: Fn(&[usize]) -> Result<Complex64> + Sync,
{
    if n == 0 {
        return term(&[]);
    }
    let blocks: Vec<Complex64> = match exec {
        Execution::Sequential => (0..n).map(|f| block_sum(f, n, &term)).collect::<Result<_>>()?,
        Execution::Parallel => (0..n)
            .into_par_iter()
            .map(|f| block_sum(f, n, &term))
            .collect::<Result<_>>()?,
    };
    Ok(blocks.into_iter().sum())
}

/// Pairs `(l, l')` with `l < l'` and `σ(l) > σ(l')`.
pub fn inversions(sigma: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..sigma.len()).flat_map(move |l| ((l + 1)..sigma.len()).filter(move |&r| sigma[l] > sigma[r]).map(move |r| (l, r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn visits_every_permutation_once_in_order() {
        let seen = std::sync::Mutex::new(Vec::new());
        permutation_sum(4, Execution::Sequential, |s| {
            seen.lock().unwrap().push(s.to_vec());
            Ok(Complex64::new(1.0, 0.0))
        })
        .unwrap();
        let seen = seen.into_inner().unwrap();
        assert_eq!(seen.len(), 24);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn parallel_matches_sequential() {
        let term = |s: &[usize]| {
            let x: f64 = s.iter().enumerate().map(|(i, &k)| ((i + 1) * (k + 2)) as f64).product();
            Ok(Complex64::new(x.sqrt(), 1.0 / x))
        };
        let a = permutation_sum(6, Execution::Sequential, term).unwrap();
        let b = permutation_sum(6, Execution::Parallel, term).unwrap();
        assert!((a - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn inversion_count_is_sign() {
        let s = [2, 0, 3, 1];
        assert_eq!(inversions(&s).count(), 3);
        assert_eq!(inversions(&[0, 1, 2]).count(), 0);
    }
}

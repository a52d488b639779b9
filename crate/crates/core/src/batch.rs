//! Batch evaluation with a data-parallel path (feature `parallel`) and a
//! sequential fallback. Results always come back in input order.

use crate::error::Result;
use crate::monoid::MonoidElement;
use crate::truncated::Truncated;
use crate::witt::{WittRing, WittVector};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    /// Uses rayon when the `parallel` feature is on; otherwise the same as
    /// `Sequential`.
    #[default]
    Parallel,
}

impl Strategy {
    pub fn is_parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

pub fn map<T, U, F>(strategy: Strategy, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

pub fn try_map<T, U, F>(strategy: Strategy, items: &[T], f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    map(strategy, items, f).into_iter().collect()
}

pub fn reduce_all(strategy: Strategy, xs: &[MonoidElement], n: u32) -> Vec<Truncated> {
    map(strategy, xs, |x| Truncated::reduce(x, n))
}

pub fn alpha_all(strategy: Strategy, ring: &WittRing, xs: &[Truncated]) -> Result<Vec<WittVector>> {
    try_map(strategy, xs, |x| ring.alpha(x))
}

/// Counts pairs on which `alpha` fails to respect `+` or `·`.
pub fn alpha_mismatches(
    strategy: Strategy,
    ring: &WittRing,
    pairs: &[(Truncated, Truncated)],
) -> Result<usize> {
    let flags = try_map(strategy, pairs, |(x, y)| {
        let (ax, ay) = (ring.alpha(x)?, ring.alpha(y)?);
        let sum = ring.alpha(&x.try_add(y)?)? == ring.add(&ax, &ay)?;
        let prod = ring.alpha(&x.try_mul(y)?)? == ring.mul(&ax, &ay)?;
        Ok(!(sum && prod))
    })?;
    Ok(flags.into_iter().filter(|&bad| bad).count())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::perfect::AlgebraContext;
    use crate::sample;

    #[test]
    fn strategies_agree() {
        let c = Arc::new(AlgebraContext::parse_spec("gf(9)").unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xs: Vec<_> = (0..40)
            .map(|_| sample::monoid_element(&c, &mut rng, 4, 9))
            .collect();
        let seq = reduce_all(Strategy::Sequential, &xs, 3);
        assert_eq!(reduce_all(Strategy::Parallel, &xs, 3), seq);

        let ring = WittRing::new(&c, 3).unwrap();
        let a = alpha_all(Strategy::Sequential, &ring, &seq).unwrap();
        assert_eq!(alpha_all(Strategy::Parallel, &ring, &seq).unwrap(), a);
        let pairs: Vec<_> = seq.iter().cloned().zip(seq.iter().rev().cloned()).collect();
        assert_eq!(
            alpha_mismatches(Strategy::Parallel, &ring, &pairs).unwrap(),
            0
        );
    }

    #[test]
    fn order_is_preserved() {
        let items: Vec<u32> = (0..1000).collect();
        assert_eq!(
            map(Strategy::Parallel, &items, |x| x * 2),
            map(Strategy::Sequential, &items, |x| x * 2)
        );
        let failing = try_map(Strategy::Parallel, &items, |&x| {
            if x == 500 {
                Err(crate::Error::NotInvertible)
            } else {
                Ok(x)
            }
        });
        assert!(failing.is_err());
    }
}

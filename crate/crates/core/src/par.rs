//! Sequential or rayon-backed maps over battery items.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

/// `items.map(f)` with per-worker state from `init`; output order matches input.
///
/// Without the `parallel` feature both strategies run sequentially.
pub fn map_init<T, S, R, I, F>(strategy: Strategy, items: &[T], init: I, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &T) -> R + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map_init(&init, |s, t| f(s, t)).collect()
        }
        _ => {
            let mut s = init();
            items.iter().map(|t| f(&mut s, t)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let xs: Vec<u64> = (0..100).collect();
        let a = map_init(Strategy::Sequential, &xs, || 0u64, |acc, x| {
            *acc += 1;
            x * x
        });
        let b = map_init(Strategy::Parallel, &xs, || 0u64, |_, x| x * x);
        assert_eq!(a, b);
    }
}

//! Deterministic best-of search, parallel when the `parallel` feature is on.

use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Solution quality: more reached vertices first, then lower cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Score {
    pub reach: usize,
    pub cost: u64,
}

impl Score {
    pub fn new(reach: usize, cost: u64) -> Self {
        Score { reach, cost }
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        self.reach
            .cmp(&other.reach)
            .then(other.cost.cmp(&self.cost))
    }
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Found<T> = Option<(usize, Score, T)>;

fn pick<T>(a: Found<T>, b: Found<T>) -> Found<T> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            let a_wins = match a.1.cmp(&b.1) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => a.0 < b.0,
            };
            Some(if a_wins { a } else { b })
        }
    }
}

/// Best candidate over indices `0..n` by score, ties to the lowest index.
pub fn best_by<T, F>(exec: Exec, n: usize, f: F) -> Found<T>
where
    T: Send,
    F: Fn(usize) -> Option<(Score, T)> + Sync,
{
    best_over(exec, 0..n, |i| f(*i))
}

/// Best candidate over an indexed stream, ties to the lowest position.
pub fn best_over<I, T, F>(exec: Exec, items: I, f: F) -> Found<T>
where
    I: Iterator + Send,
    I::Item: Send,
    T: Send,
    F: Fn(&I::Item) -> Option<(Score, T)> + Sync,
{
    let eval = |(i, item): (usize, I::Item)| f(&item).map(|(s, t)| (i, s, t));
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items
            .enumerate()
            .par_bridge()
            .map(eval)
            .reduce(|| None, pick);
    }
    let _ = exec;
    items.enumerate().map(eval).fold(None, pick)
}

/// Parallel map preserving order.
pub fn map_indexed<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(&f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

//! Batch querying, oracle verification and benchmarking on top of
//! `annmax-core`.

pub mod bench;
pub mod error;
pub mod io;
pub mod query;
pub mod verify;

pub use error::CliError;

use std::sync::atomic::{AtomicUsize, Ordering};

/// Reads a whole file, mapping failures to [`CliError::Io`].
pub fn read_file(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// `items.map(f)` on up to `threads` worker threads, results in input order.
pub fn map_ordered<T: Sync, R: Send>(items: &[T], threads: usize, f: impl Fn(usize, &T) -> R + Sync) -> Vec<R> {
    let threads = threads.clamp(1, items.len().max(1));
    if threads == 1 {
        return items.iter().enumerate().map(|(i, x)| f(i, x)).collect();
    }
    let next = AtomicUsize::new(0);
    let mut slots: Vec<(usize, R)> = std::thread::scope(|s| {
        let workers: Vec<_> = (0..threads)
            .map(|_| {
                s.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(x) = items.get(i) else { break };
                        done.push((i, f(i, x)));
                    }
                    done
                })
            })
            .collect();
        workers.into_iter().flat_map(|w| w.join().expect("worker panicked")).collect()
    });
    slots.sort_unstable_by_key(|(i, _)| *i);
    slots.into_iter().map(|(_, r)| r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_ordered_keeps_input_order() {
        let items: Vec<u64> = (0..1000).collect();
        for threads in [1, 3, 8] {
            let out = map_ordered(&items, threads, |i, &x| (i as u64) * 10 + x);
            assert_eq!(out, items.iter().map(|x| x * 11).collect::<Vec<_>>());
        }
        assert!(map_ordered(&[] as &[u8], 4, |_, _| 0).is_empty());
    }
}
